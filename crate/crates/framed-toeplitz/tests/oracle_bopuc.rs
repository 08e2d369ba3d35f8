//! Frozen-value checks for the biorthogonal polynomial system: closed
//! forms for the unit weight, quadrature oracles for biorthogonality,
//! kernel identities, recurrences, and the triangular factorization.

use num_complex::Complex64;
use std::f64::consts::PI;

use framed_toeplitz::bopuc::{
    kernel_det_identity, lu_factorization_residual, recurrence_residuals, reproducing_kernel,
    semiframed_via_kernel, semiframed_via_kernel_quadrature, BopucSystem, KernelForm,
};
use framed_toeplitz::error::Error;
use framed_toeplitz::linalg::{det_log, CMatrix};
use framed_toeplitz::structmat::SemiFramedVariant;
use framed_toeplitz::symbols::{fourier_coeffs, RatTerm, Symbol};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn exp_symbol() -> Symbol {
    Symbol::exp_laurent(vec![(1, c(0.3, 0.0)), (-1, c(0.3, 0.0))])
}

#[test]
fn unit_weight_polynomials_are_monomials() {
    let sys = BopucSystem::new(&Symbol::constant(c(1.0, 0.0)), 6).unwrap();
    let z = c(0.37, -0.81);
    for n in 0..=6 {
        assert!((sys.eval_q(n, z) - z.powi(n as i32)).norm() < 1e-14);
        assert!((sys.eval_qhat(n, z) - z.powi(n as i32)).norm() < 1e-14);
        assert!((sys.kappa_sq[n] - c(1.0, 0.0)).norm() < 1e-14);
    }
    // Reproducing kernel collapses to the geometric sum_{j<=n} (z zeta)^j.
    let zeta = c(0.2, 0.5);
    let want: Complex64 = (0..=4).map(|j| (z * zeta).powi(j)).sum();
    let got = reproducing_kernel(&sys, 4, z, zeta, KernelForm::Sum).unwrap();
    assert!((got - want).norm() < 1e-13);
}

#[test]
fn kappa_squared_matches_determinant_ratios() {
    let phi = exp_symbol();
    let sys = BopucSystem::new(&phi, 8).unwrap();
    // Independent route: form the Toeplitz determinants from scratch.
    let t = fourier_coeffs(&phi, (-9, 9), 1e-13).unwrap();
    let det_n = |n: usize| {
        det_log(&CMatrix::from_fn(n, n, |j, k| t.get(j as i64 - k as i64))).unwrap()
    };
    for n in 1..=8 {
        let want = det_n(n).div(det_n(n + 1)).to_complex();
        assert!((sys.kappa_sq[n] - want).norm() / want.norm() < 1e-10, "n = {n}");
        let inv = sys.kappa_sq_inv_from_pairing(n);
        assert!((inv * sys.kappa_sq[n] - c(1.0, 0.0)).norm() < 1e-10, "pairing route, n = {n}");
    }
}

#[test]
fn biorthogonality_against_circle_quadrature() {
    // Oracle: the pairing (1/2 pi i) \oint q_k(z) qhat_m(1/z) phi(z) dz/z
    // evaluated by the trapezoid rule on the unit circle must equal
    // delta_{km} / kappa_k^2.
    let phi = exp_symbol();
    let sys = BopucSystem::new(&phi, 6).unwrap();
    let nodes = 512;
    for k in 0..=6usize {
        for m in 0..=6usize {
            let mut s = c(0.0, 0.0);
            for p in 0..nodes {
                let z = Complex64::from_polar(1.0, 2.0 * PI * p as f64 / nodes as f64);
                s += sys.eval_q(k, z) * sys.eval_qhat(m, 1.0 / z) * phi.eval(z);
            }
            s /= nodes as f64;
            let want = if k == m { 1.0 / sys.kappa_sq[k] } else { c(0.0, 0.0) };
            assert!((s - want).norm() < 1e-10, "k = {k}, m = {m}: {}", (s - want).norm());
        }
    }
}

#[test]
fn recurrence_residuals_vanish_for_smooth_weight() {
    let sys = BopucSystem::new(&exp_symbol(), 10).unwrap();
    for z in [c(0.4, 0.3), c(-1.2, 0.5), c(0.05, -0.9)] {
        for n in 0..9 {
            let r = recurrence_residuals(&sys, n, z).unwrap();
            for (i, &ri) in r.iter().enumerate() {
                assert!(ri < 1e-9, "n = {n}, z = {z}, relation {i}: {ri}");
            }
        }
    }
}

#[test]
fn christoffel_darboux_matches_direct_sum() {
    let sys = BopucSystem::new(&exp_symbol(), 10).unwrap();
    let (z, zeta) = (c(0.5, 0.0), c(0.0, 0.8));
    let a = reproducing_kernel(&sys, 8, z, zeta, KernelForm::Sum).unwrap();
    let b = reproducing_kernel(&sys, 8, z, zeta, KernelForm::ChristoffelDarboux).unwrap();
    assert!((a - b).norm() < 1e-10, "{}", (a - b).norm());
}

#[test]
fn confluent_form_is_the_diagonal_limit() {
    // On the excluded diagonal zeta = 1/z the closed form is a
    // derivative limit; approaching the diagonal with the regular
    // closed form must converge to it.
    let sys = BopucSystem::new(&exp_symbol(), 10).unwrap();
    let z = c(0.6, 0.0);
    let diag = reproducing_kernel(&sys, 7, z, 1.0 / z, KernelForm::Confluent).unwrap();
    let near = reproducing_kernel(&sys, 7, z, 1.0 / z + 1e-6, KernelForm::ChristoffelDarboux).unwrap();
    assert!((diag - near).norm() / diag.norm() < 1e-4, "{}", (diag - near).norm());
    // And the confluent value agrees with the plain sum on the diagonal.
    let sum = reproducing_kernel(&sys, 7, z, 1.0 / z, KernelForm::Sum).unwrap();
    assert!((diag - sum).norm() / sum.norm() < 1e-10);
}

#[test]
fn corner_determinant_kernel_identity_is_corner_independent() {
    let sys = BopucSystem::new(&exp_symbol(), 10).unwrap();
    let (z, zeta) = (c(0.45, 0.2), c(-0.3, 0.6));
    for a in [c(0.0, 0.0), c(2.5, -1.0)] {
        let r = kernel_det_identity(&sys, 6, z, zeta, a).unwrap();
        assert!(r < 1e-10, "a = {a}: {r}");
    }
}

#[test]
fn triangular_factorization_residuals() {
    // Unit weight: the factorization is exact (identity matrices).
    let unit = BopucSystem::new(&Symbol::constant(c(1.0, 0.0)), 8).unwrap();
    assert!(lu_factorization_residual(&unit, 8).unwrap() < 1e-14);
    // Smooth weight at n = 10.
    let sys = BopucSystem::new(&exp_symbol(), 10).unwrap();
    assert!(lu_factorization_residual(&sys, 10).unwrap() < 1e-9);
}

#[test]
fn jump_weight_system_refuses_on_vanishing_odd_determinant() {
    // The two-valued jump symbol has zero coefficients at even offsets,
    // so D_1 = g_0 = 0 and the system construction must refuse with the
    // first degenerate moment rather than divide by zero.
    let err = BopucSystem::new(&Symbol::jump_g(), 6).unwrap_err();
    match err {
        Error::DegenerateMoment { k } => assert_eq!(k, 1),
        other => panic!("expected DegenerateMoment, got {other:?}"),
    }
}

#[test]
fn semiframed_kernel_routes_agree_with_quadrature() {
    let bulk = exp_symbol();
    let psi = Symbol::rational(vec![RatTerm::Pole { b: c(0.8, 0.2), c: c(2.2, 0.0) }]).unwrap();
    let eta = Symbol::rational(vec![RatTerm::Pole { b: c(-0.5, 0.4), c: c(-3.0, 0.0) }]).unwrap();
    let a = c(1.1, -0.3);
    for variant in [
        SemiFramedVariant::E,
        SemiFramedVariant::G,
        SemiFramedVariant::H,
        SemiFramedVariant::L,
    ] {
        let exact = semiframed_via_kernel(variant, &bulk, &psi, &eta, a, 8).unwrap();
        assert!(exact.residual < 1e-10, "{variant:?} exact: {}", exact.residual);
        let quad = semiframed_via_kernel_quadrature(variant, &bulk, &psi, &eta, a, 8, 256).unwrap();
        assert!(quad.residual < 1e-8, "{variant:?} quadrature: {}", quad.residual);
        assert!(
            (exact.ratio_from_kernel - quad.ratio_from_kernel).norm() < 1e-8,
            "{variant:?} route disagreement"
        );
    }
}
