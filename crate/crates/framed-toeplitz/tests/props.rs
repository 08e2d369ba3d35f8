//! Property tests: structural invariants that must hold for whole
//! families of random inputs, not just the frozen example points.

use num_complex::Complex64;
use proptest::prelude::*;

use framed_toeplitz::dci::dodgson_residual;
use framed_toeplitz::linalg::{det_log, CMatrix, LogComplex};
use framed_toeplitz::structmat::{
    build_matrix, DetKind, SemiFramedVariant, StructuredDetSpec,
};
use framed_toeplitz::symbols::{fourier_coeffs, winding_number, RatTerm, Symbol};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A moderate complex scalar.
fn small_complex() -> impl Strategy<Value = Complex64> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| c(re, im))
}

/// A well-conditioned analytic weight exp(t z + conj(t)/z), real on the
/// circle.
fn real_on_circle_weight() -> impl Strategy<Value = Symbol> {
    (-0.8f64..0.8, -0.8f64..0.8).prop_map(|(re, im)| {
        let t = c(re, im);
        Symbol::exp_laurent(vec![(1, t), (-1, t.conj())])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn log_scale_arithmetic_round_trips(x in small_complex(), y in small_complex()) {
        prop_assume!(x.norm() > 1e-3 && y.norm() > 1e-3);
        let lx = LogComplex::from_complex(x);
        let ly = LogComplex::from_complex(y);
        let prod = lx.mul(ly).to_complex();
        prop_assert!((prod - x * y).norm() < 1e-12 * (x * y).norm().max(1.0));
        let quot = lx.div(ly).to_complex();
        prop_assert!((quot - x / y).norm() < 1e-12 * (x / y).norm().max(1.0));
    }

    #[test]
    fn real_weights_have_conjugate_reflected_coefficients(phi in real_on_circle_weight()) {
        let t = fourier_coeffs(&phi, (-5, 5), 1e-12).unwrap();
        for j in 1i64..=5 {
            prop_assert!((t.get(-j) - t.get(j).conj()).norm() < 1e-11);
        }
    }

    #[test]
    fn shifting_adds_to_the_winding_number(phi in real_on_circle_weight(), m in -3i64..=3) {
        let shifted = Symbol::shift(m, phi);
        prop_assert_eq!(winding_number(&shifted).unwrap(), m);
    }

    #[test]
    fn toeplitz_determinant_is_transpose_invariant(phi in real_on_circle_weight(), n in 1usize..8) {
        let a = det_log(&build_matrix(&StructuredDetSpec::pure(phi.clone(), n)).unwrap()).unwrap();
        let spec = StructuredDetSpec {
            kind: DetKind::PureBulkRowConvention,
            bulk: phi,
            borders: vec![],
            corners: vec![],
            n,
        };
        let b = det_log(&build_matrix(&spec).unwrap()).unwrap();
        let scale = a.to_complex().norm().max(1.0);
        prop_assert!((a.to_complex() - b.to_complex()).norm() < 1e-10 * scale);
    }

    #[test]
    fn condensation_identity_holds_for_random_matrices(
        seed in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 36),
        n in 4usize..=6,
    ) {
        let m = CMatrix::from_fn(n, n, |j, k| {
            let (re, im) = seed[j * 6 + k];
            c(re, im)
        });
        let report = dodgson_residual(&m, 0, n - 1, 0, n - 1).unwrap();
        prop_assert!(report.residual < 1e-9, "residual {}", report.residual);
    }

    #[test]
    fn border_column_linearity(phi in real_on_circle_weight(), la in small_complex(), lb in small_complex()) {
        let psi1 = Symbol::rational(vec![RatTerm::Pole { b: c(0.7, 0.1), c: c(2.0, 0.0) }]).unwrap();
        let psi2 = Symbol::rational(vec![RatTerm::Pole { b: c(-0.4, 0.3), c: c(0.5, 0.0) }]).unwrap();
        let combo = Symbol::sum(vec![
            Symbol::scale(la, psi1.clone()),
            Symbol::scale(lb, psi2.clone()),
        ]);
        let n = 6;
        let d = |b: Symbol| {
            det_log(&build_matrix(&StructuredDetSpec::multi_bordered(phi.clone(), vec![b], n)).unwrap())
                .unwrap()
                .to_complex()
        };
        let lhs = d(combo);
        let rhs = la * d(psi1) + lb * d(psi2);
        prop_assert!((lhs - rhs).norm() < 1e-9 * rhs.norm().max(1.0));
    }

    #[test]
    fn semi_framed_determinant_is_affine_in_the_corner(
        phi in real_on_circle_weight(),
        a in small_complex(),
        variant_idx in 0usize..4,
    ) {
        let variant = [
            SemiFramedVariant::E,
            SemiFramedVariant::G,
            SemiFramedVariant::H,
            SemiFramedVariant::L,
        ][variant_idx];
        let psi = Symbol::rational(vec![RatTerm::Pole { b: c(0.5, 0.2), c: c(2.5, 0.0) }]).unwrap();
        let eta = Symbol::rational(vec![RatTerm::Pole { b: c(-0.3, 0.4), c: c(-2.0, 0.0) }]).unwrap();
        let d = |corner: Complex64| {
            det_log(
                &build_matrix(&StructuredDetSpec::semi_framed(
                    variant,
                    phi.clone(),
                    psi.clone(),
                    eta.clone(),
                    corner,
                    5,
                ))
                .unwrap(),
            )
            .unwrap()
            .to_complex()
        };
        let d0 = d(c(0.0, 0.0));
        let slope = d(c(1.0, 0.0)) - d0;
        prop_assert!((d(a) - (d0 + a * slope)).norm() < 1e-10 * (d0.norm() + slope.norm()).max(1.0));
    }
}
