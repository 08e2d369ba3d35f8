//! Frozen-value checks for the asymptotic limit constants: special
//! borders with closed-form constants, linearity, the semi-framed
//! correction formula, and the finite-size shifted-weight predictions.

use num_complex::Complex64;

use framed_toeplitz::rhp::bordered_monomial_shifted;
use framed_toeplitz::structmat::SemiFramedVariant;
use framed_toeplitz::symbols::{eval_alpha, szego_data, Symbol};
use framed_toeplitz::szego::{
    constant_f, constant_f_quotient, constant_h, constant_j1, constant_power_border,
    predict_semiframed, predict_zphi_bordered_ratio, predict_zphi_monomial_ratio, BorderSpec,
    PoleTerm, RationalFrame,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn exp_symbol() -> Symbol {
    Symbol::exp_laurent(vec![(1, c(0.3, 0.0)), (-1, c(0.3, 0.0))])
}

#[test]
fn special_borders_have_closed_constants() {
    let phi = exp_symbol();
    let data = szego_data(&phi, 64).unwrap();
    // psi = phi: F = 1.
    let itself = BorderSpec::weight_itself();
    assert!((constant_f(&itself, &data).unwrap() - c(1.0, 0.0)).norm() < 1e-12);
    // psi = 1 (a0_hat = 1): F = 1/G.
    let unit = BorderSpec { a0_hat: c(1.0, 0.0), ..BorderSpec::zero() };
    let want = 1.0 / data.g;
    assert!((constant_f(&unit, &data).unwrap() - want).norm() < 1e-12);
    // psi = z*phi (a1 = 1): H = 1.
    let zphi = BorderSpec { a1: c(1.0, 0.0), ..BorderSpec::zero() };
    assert!((constant_h(&zphi, &data).unwrap() - c(1.0, 0.0)).norm() < 1e-12);
    // psi = phi: H = [log phi]_1.
    let l1 = data.log_coeffs.get(1);
    assert!((constant_h(&itself, &data).unwrap() - l1).norm() < 1e-12);
    // The power border z^{-l} phi: the l-th Taylor coefficient of alpha.
    assert!((constant_power_border(&data, 0).unwrap() - data.g).norm() < 1e-13);
}

#[test]
fn formula_and_quotient_routes_agree() {
    let phi = exp_symbol();
    let data = szego_data(&phi, 64).unwrap();
    let spec = BorderSpec {
        a0: c(0.6, 0.1),
        a1: c(-0.3, 0.2),
        b0: c(0.2, -0.1),
        a0_hat: c(0.5, -0.2),
        a1_hat: c(0.1, 0.3),
        b0_hat: c(-0.2, 0.1),
        poles: vec![
            PoleTerm { c: c(2.0, 0.0), b: c(0.7, 0.1), b_hat: c(0.4, -0.3) },
            PoleTerm { c: c(0.5, 0.0), b: c(-0.5, 0.2), b_hat: c(0.3, 0.2) },
        ],
    };
    let f = constant_f(&spec, &data).unwrap();
    let psi = spec.to_symbol(&phi).unwrap();
    let fq = constant_f_quotient(&psi, &data).unwrap();
    assert!((f - fq).norm() / f.norm().max(1.0) < 1e-8);
}

#[test]
fn constants_are_linear_in_the_border() {
    let phi = exp_symbol();
    let data = szego_data(&phi, 64).unwrap();
    let spec = BorderSpec {
        a0: c(0.4, -0.2),
        b0: c(0.3, 0.1),
        a1_hat: c(-0.2, 0.5),
        poles: vec![PoleTerm { c: c(-2.2, 0.0), b: c(0.6, 0.0), b_hat: c(0.1, 0.4) }],
        ..BorderSpec::zero()
    };
    let lambda = c(1.7, -0.9);
    let scaled = BorderSpec {
        a0: lambda * spec.a0,
        a1: lambda * spec.a1,
        b0: lambda * spec.b0,
        a0_hat: lambda * spec.a0_hat,
        a1_hat: lambda * spec.a1_hat,
        b0_hat: lambda * spec.b0_hat,
        poles: spec
            .poles
            .iter()
            .map(|p| PoleTerm { c: p.c, b: lambda * p.b, b_hat: lambda * p.b_hat })
            .collect(),
    };
    let f = constant_f(&spec, &data).unwrap();
    let fs = constant_f(&scaled, &data).unwrap();
    assert!((fs - lambda * f).norm() < 1e-12);
    let h = constant_h(&spec, &data).unwrap();
    let hs = constant_h(&scaled, &data).unwrap();
    assert!((hs - lambda * h).norm() < 1e-12);
}

#[test]
fn equal_borders_give_zero_two_bordered_constant() {
    let data = szego_data(&exp_symbol(), 64).unwrap();
    let spec = BorderSpec {
        a0: c(0.3, 0.2),
        a1: c(0.1, -0.4),
        poles: vec![PoleTerm { c: c(2.5, 0.0), b: c(0.2, 0.0), b_hat: c(0.5, 0.1) }],
        ..BorderSpec::zero()
    };
    let j1 = constant_j1(&spec, &spec, &data).unwrap();
    assert!(j1.norm() < 1e-14);
}

#[test]
fn semiframed_single_outside_pole_correction() {
    // One plain pole at d = c = 3 with unit strengths: the E-orientation
    // constant is a + alpha(3)/alpha(1/3) / (1 - 9).
    let data = szego_data(&exp_symbol(), 64).unwrap();
    let a = c(1.5, 0.3);
    let frame = RationalFrame::Plain(vec![(c(1.0, 0.0), c(3.0, 0.0))]);
    let got = predict_semiframed(SemiFramedVariant::E, &frame, &frame, a, &data).unwrap();
    let corr = eval_alpha(&data, c(3.0, 0.0)).unwrap()
        / eval_alpha(&data, c(1.0 / 3.0, 0.0)).unwrap()
        / c(-8.0, 0.0);
    assert!((got - (a + corr)).norm() < 1e-12);
    // Plain frames leave the H and L orientations at the bare corner.
    for v in [SemiFramedVariant::H, SemiFramedVariant::L] {
        let plain = predict_semiframed(v, &frame, &frame, a, &data).unwrap();
        assert!((plain - a).norm() < 1e-14);
    }
}

#[test]
fn shifted_weight_prediction_unit_weight_drops_correction() {
    // The constant weight has every correction coefficient equal to
    // zero, so the correction term drops out and the prediction is
    // exactly G * F (here 1) with a zero reported ratio.
    let one = Symbol::constant(c(1.0, 0.0));
    let data = szego_data(&one, 16).unwrap();
    let (pred, ratio) =
        predict_zphi_bordered_ratio(&one, &BorderSpec::weight_itself(), &data, 6).unwrap();
    assert!(ratio.norm() == 0.0);
    assert!((pred - c(1.0, 0.0)).norm() < 1e-14);
    // Monomial border over the shifted unit weight: -L_{-1} - 0 = 0.
    let mono = predict_zphi_monomial_ratio(&one, &data, 6).unwrap();
    assert!(mono.norm() < 1e-14);
}

#[test]
fn shifted_weight_monomial_prediction_matches_direct_ratio() {
    // A weight with a finite annulus of analyticity-and-nonvanishing
    // keeps the correction ratio resolvable (see the bordered-ratio
    // acceptance check for the same construction).
    let mut phi = Symbol::product(
        exp_symbol(),
        Symbol::sum(vec![
            Symbol::constant(c(1.64, 0.0)),
            Symbol::scale(c(-0.8, 0.0), Symbol::shift(1, Symbol::constant(c(1.0, 0.0)))),
            Symbol::scale(c(-0.8, 0.0), Symbol::shift(-1, Symbol::constant(c(1.0, 0.0)))),
        ]),
    );
    phi.annulus = (0.8, 1.25);
    phi.winding_hint = Some(0);
    let data = szego_data(&phi, 256).unwrap();
    let n = 20;
    let predicted = predict_zphi_monomial_ratio(&phi, &data, n).unwrap();
    let direct = bordered_monomial_shifted(&phi, n).unwrap().direct;
    let err = (predicted - direct).norm() / direct.norm().max(1.0);
    assert!(err < 1e-3, "{err}");
}
