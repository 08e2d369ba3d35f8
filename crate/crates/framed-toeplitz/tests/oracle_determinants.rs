//! Frozen-value and identity checks for the structured-determinant
//! builders and the condensation (Dodgson-style) reduction layer.

use num_complex::Complex64;
use std::f64::consts::PI;

use framed_toeplitz::dci::{
    dodgson_residual, reduce_framed, reduce_three_bordered, reduce_two_bordered, reduce_two_framed,
};
use framed_toeplitz::linalg::{det_log, CMatrix};
use framed_toeplitz::structmat::{
    build_matrix, entanglement_block, entanglement_block_l_form, entanglement_matrix, DetKind,
    SemiFramedVariant, StructuredDetSpec,
};
use framed_toeplitz::symbols::{fourier_coeffs, jump_g_coeff, RatTerm, Symbol};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn exp_symbol() -> Symbol {
    Symbol::exp_laurent(vec![(1, c(0.3, 0.0)), (-1, c(0.3, 0.0))])
}

fn pole(b: Complex64, loc: f64) -> Symbol {
    Symbol::rational(vec![RatTerm::Pole { b, c: c(loc, 0.0) }]).unwrap()
}

/// Naive Laplace-expansion determinant: an independent oracle for
/// small matrices (exponential cost, so only used up to ~8x8).
fn laplace_det(m: &CMatrix, rows: &[usize], cols: &[usize]) -> Complex64 {
    if rows.is_empty() {
        return c(1.0, 0.0);
    }
    let r = rows[0];
    let mut acc = c(0.0, 0.0);
    for (pos, &col) in cols.iter().enumerate() {
        let sub: Vec<usize> = cols.iter().copied().filter(|&cc| cc != col).collect();
        let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * m[(r, col)] * laplace_det(m, &rows[1..], &sub);
    }
    acc
}

fn full_laplace(m: &CMatrix) -> Complex64 {
    let idx: Vec<usize> = (0..m.nrows).collect();
    laplace_det(m, &idx, &idx)
}

#[test]
fn det_matches_laplace_oracle() {
    for kind in [DetKind::Pure, DetKind::PureBulkRowConvention] {
        let spec = StructuredDetSpec { kind, bulk: exp_symbol(), borders: vec![], corners: vec![], n: 6 };
        let m = build_matrix(&spec).unwrap();
        let fast = det_log(&m).unwrap().to_complex();
        let slow = full_laplace(&m);
        assert!((fast - slow).norm() < 1e-10);
    }
}

#[test]
fn transpose_orientation_has_equal_determinant() {
    for n in [2usize, 5, 9] {
        let a = det_log(&build_matrix(&StructuredDetSpec::pure(exp_symbol(), n)).unwrap()).unwrap();
        let spec = StructuredDetSpec {
            kind: DetKind::PureBulkRowConvention,
            bulk: exp_symbol(),
            borders: vec![],
            corners: vec![],
            n,
        };
        let b = det_log(&build_matrix(&spec).unwrap()).unwrap();
        assert!((a.to_complex() - b.to_complex()).norm() < 1e-10, "n = {n}");
    }
}

#[test]
fn bordered_with_weight_itself_collapses_to_pure() {
    // Replacing the last column by the weight's own border column
    // reproduces the pure determinant; a constant-one border drops the
    // order by one.
    let phi = exp_symbol();
    for n in [3usize, 8, 16, 24] {
        let pure_n = det_log(&build_matrix(&StructuredDetSpec::pure(phi.clone(), n)).unwrap())
            .unwrap()
            .to_complex();
        let with_phi = det_log(
            &build_matrix(&StructuredDetSpec::multi_bordered(phi.clone(), vec![phi.clone()], n)).unwrap(),
        )
        .unwrap()
        .to_complex();
        assert!((with_phi - pure_n).norm() / pure_n.norm() < 1e-10, "phi border, n = {n}");
        let pure_nm1 = det_log(&build_matrix(&StructuredDetSpec::pure(phi.clone(), n - 1)).unwrap())
            .unwrap()
            .to_complex();
        let with_one = det_log(
            &build_matrix(&StructuredDetSpec::multi_bordered(
                phi.clone(),
                vec![Symbol::constant(c(1.0, 0.0))],
                n,
            ))
            .unwrap(),
        )
        .unwrap()
        .to_complex();
        assert!((with_one - pure_nm1).norm() / pure_nm1.norm().max(1.0) < 1e-10, "unit border, n = {n}");
    }
}

#[test]
fn border_column_is_linear() {
    let phi = exp_symbol();
    let psi1 = pole(c(0.7, 0.1), 2.0);
    let psi2 = pole(c(-0.4, 0.3), 0.5);
    let (la, lb) = (c(1.3, -0.2), c(0.6, 0.8));
    let combo = Symbol::sum(vec![Symbol::scale(la, psi1.clone()), Symbol::scale(lb, psi2.clone())]);
    let n = 7;
    let d = |b: Symbol| {
        det_log(&build_matrix(&StructuredDetSpec::multi_bordered(phi.clone(), vec![b], n)).unwrap())
            .unwrap()
            .to_complex()
    };
    let lhs = d(combo);
    let rhs = la * d(psi1) + lb * d(psi2);
    assert!((lhs - rhs).norm() / rhs.norm().max(1.0) < 1e-10);
}

#[test]
fn semi_framed_is_affine_in_the_corner() {
    // The corner enters exactly one matrix entry, so the determinant is
    // an affine function of it: det(a) = det(0) + a * (det(1) - det(0)).
    let phi = exp_symbol();
    let psi = pole(c(0.5, 0.2), 2.5);
    let eta = pole(c(-0.3, 0.4), -2.0);
    let d = |a: Complex64| {
        det_log(
            &build_matrix(&StructuredDetSpec::semi_framed(SemiFramedVariant::E, phi.clone(), psi.clone(), eta.clone(), a, 6))
                .unwrap(),
        )
        .unwrap()
        .to_complex()
    };
    let d0 = d(c(0.0, 0.0));
    let slope = d(c(1.0, 0.0)) - d0;
    let a = c(2.0, -1.5);
    assert!((d(a) - (d0 + a * slope)).norm() < 1e-10);
}

#[test]
fn unit_bulk_two_bordered_closed_form() {
    // With unit bulk the first n-2 columns form an identity block and
    // the determinant collapses to a 2x2 in the low-order border
    // coefficients: psi1_1 psi2_0 - psi1_0 psi2_1.
    let one = Symbol::constant(c(1.0, 0.0));
    let psi1 = pole(c(0.9, 0.3), 2.0);
    let psi2 = pole(c(-0.2, 0.7), 0.5);
    let t1 = fourier_coeffs(&psi1, (0, 1), 1e-12).unwrap();
    let t2 = fourier_coeffs(&psi2, (0, 1), 1e-12).unwrap();
    let want = t1.get(1) * t2.get(0) - t1.get(0) * t2.get(1);
    for n in [3usize, 5, 9] {
        let d = det_log(
            &build_matrix(&StructuredDetSpec::multi_bordered(one.clone(), vec![psi1.clone(), psi2.clone()], n))
                .unwrap(),
        )
        .unwrap()
        .to_complex();
        assert!((d - want).norm() < 1e-12, "n = {n}");
    }
}

#[test]
fn equal_borders_annihilate() {
    let phi = exp_symbol();
    let psi = pole(c(0.8, -0.1), 2.0);
    // Two-bordered with identical borders: identical columns, det = 0.
    let d2 = det_log(
        &build_matrix(&StructuredDetSpec::multi_bordered(phi.clone(), vec![psi.clone(), psi.clone()], 6)).unwrap(),
    )
    .unwrap();
    assert!(d2.is_zero || d2.to_complex().norm() < 1e-12);
    // Three-bordered with two identical borders likewise.
    let other = pole(c(0.3, 0.4), -3.0);
    let d3 = det_log(
        &build_matrix(&StructuredDetSpec::multi_bordered(
            phi.clone(),
            vec![other, psi.clone(), psi],
            7,
        ))
        .unwrap(),
    )
    .unwrap();
    assert!(d3.is_zero || d3.to_complex().norm() < 1e-12);
}

#[test]
fn dodgson_identity_against_laplace_oracle() {
    // Verify the condensation identity itself on a fixed matrix with
    // all five determinants computed by Laplace expansion, then check
    // the library residual agrees that the identity holds.
    let m = CMatrix::from_fn(5, 5, |j, k| {
        let x = (j * 5 + k) as f64;
        c((0.3 * x).sin() + 0.1 * x, (0.2 * x).cos())
    });
    let (j1, j2, k1, k2) = (1usize, 3, 0, 4);
    let d = full_laplace(&m);
    let strike = |rows: &[usize], cols: &[usize]| {
        let rr: Vec<usize> = (0..5).filter(|r| !rows.contains(r)).collect();
        let cc: Vec<usize> = (0..5).filter(|col| !cols.contains(col)).collect();
        laplace_det(&m, &rr, &cc)
    };
    let lhs = d * strike(&[j1, j2], &[k1, k2]);
    let rhs = strike(&[j1], &[k1]) * strike(&[j2], &[k2]) - strike(&[j1], &[k2]) * strike(&[j2], &[k1]);
    assert!((lhs - rhs).norm() / lhs.norm().max(1.0) < 1e-12);
    let report = dodgson_residual(&m, j1, j2, k1, k2).unwrap();
    assert!(report.residual < 1e-12);
}

#[test]
fn two_bordered_reduction_for_rational_borders() {
    let phi = exp_symbol();
    let psi1 = pole(c(1.0, 0.0), 2.0);
    let psi2 = pole(c(1.0, 0.0), 0.5);
    for n in [4usize, 8, 12] {
        let red = reduce_two_bordered(&phi, &psi1, &psi2, n).unwrap();
        assert!(!red.degenerate);
        assert!(red.residual < 1e-10, "n = {n}: {}", red.residual);
    }
}

#[test]
fn three_bordered_reduction_with_repeated_border_cancels() {
    let phi = exp_symbol();
    let psi1 = pole(c(0.6, 0.2), 2.0);
    let psi = pole(c(0.5, -0.3), -2.5);
    let red = reduce_three_bordered(&phi, &psi1, &psi, &psi, 6).unwrap();
    assert!(red.residual < 1e-10);
}

#[test]
fn unit_framed_matrix_reduces_exactly() {
    // Unit bulk, unit borders, unit corners: the smallest framed matrix
    // and its reduction identity hold to machine precision.
    let one = Symbol::constant(c(1.0, 0.0));
    let spec = StructuredDetSpec {
        kind: DetKind::FramedM,
        bulk: one.clone(),
        borders: vec![one.clone(), one.clone(), one.clone(), one.clone()],
        corners: vec![c(1.0, 0.0); 4],
        n: 3,
    };
    let red = reduce_framed(&spec).unwrap();
    assert!(red.residual < 1e-12, "{}", red.residual);
}

#[test]
fn two_framed_chain_small_case() {
    let phi = exp_symbol();
    let frames: Vec<Symbol> = [2.0, 0.45, 3.0, -2.5, 1.8, 0.55, -3.0, 2.6]
        .iter()
        .map(|&loc| pole(c(1.0, 0.0), loc))
        .collect();
    let corners = vec![
        c(1.1, 0.0),
        c(0.3, -0.2),
        c(0.7, 0.4),
        c(-0.6, 0.1),
        c(0.9, 0.2),
        c(-0.4, 0.5),
        c(1.2, -0.3),
        c(0.5, 0.6),
    ];
    let spec = StructuredDetSpec { kind: DetKind::TwoFramedK, bulk: phi, borders: frames, corners, n: 8 };
    let red = reduce_two_framed(&spec).unwrap();
    assert!(red.max_residual() < 1e-8, "{}", red.max_residual());
}

#[test]
fn entanglement_block_two_by_two_from_jump_coefficients() {
    // k = 1, i = j = m = 1: the block matrix is
    // [[g_0, g_{-1}], [g_{-1}, g_{-2}]] = [[0, 2/pi], [2/pi, 0]] and the
    // block value is minus its determinant, (2/pi)^2.
    let m = entanglement_matrix(1, 1, 1, 1).unwrap();
    assert_eq!((m.nrows, m.ncols), (2, 2));
    let gm1 = c(2.0 / PI, 0.0);
    assert!((m[(0, 0)]).norm() < 1e-15);
    assert!((m[(1, 1)]).norm() < 1e-15);
    assert!((m[(0, 1)] - gm1).norm() < 1e-15);
    assert!((m[(1, 0)] - gm1).norm() < 1e-15);
    let block = entanglement_block(1, 1, 1, 1, 1).unwrap();
    assert!((block - c(4.0 / (PI * PI), 0.0)).norm() < 1e-14);
    // The jump symbol's even coefficients vanish, so the bulk diagonal
    // of every block matrix is zero.
    assert!(jump_g_coeff(0).norm() == 0.0 && jump_g_coeff(2).norm() == 0.0);
}

#[test]
fn entanglement_h_and_l_orientations_agree() {
    let a = entanglement_block(2, 2, 2, 1, 1).unwrap();
    let b = entanglement_block_l_form(2, 2, 2, 1, 1).unwrap();
    assert!((a - b).norm() < 1e-12, "{a} vs {b}");
}
