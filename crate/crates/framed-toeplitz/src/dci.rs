//! The Dodgson condensation identity (DCI) and every specific reduction
//! built from it: two- and three-bordered, framed, and two-framed chains.
//!
//! Each reduction evaluates all constituent determinants independently
//! (via [`crate::structmat`]) and reports a *relative* residual computed
//! in product form after rescaling by the largest term, so degenerate
//! denominators never poison the verification.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{det_log, minor_det, CMatrix, LogComplex};
use crate::structmat::{build_matrix, DetKind, SemiFramedVariant, StructuredDetSpec};
use crate::symbols::Symbol;

/// Report of a single DCI instance.
#[derive(Debug, Clone, Serialize)]
pub struct DciReport {
    /// The two left-hand factors: the full determinant and the double minor.
    pub lhs: (LogComplex, LogComplex),
    /// The four single-removal minors, in the order
    /// `{j1;k1}, {j2;k2}, {j1;k2}, {j2;k1}`.
    pub rhs: [LogComplex; 4],
    /// Relative residual of `lhs.0*lhs.1 - (rhs0*rhs1 - rhs2*rhs3)`.
    pub residual: f64,
}

/// Relative residual of `p0 = p1 - p2` where each `p` is a product of two
/// log-scale determinants; computed after subtracting the largest
/// log-modulus so the comparison never overflows.
pub fn product_residual(l: [LogComplex; 2], r1: [LogComplex; 2], r2: [LogComplex; 2]) -> f64 {
    let p0 = l[0].mul(l[1]);
    let p1 = r1[0].mul(r1[1]);
    let p2 = r2[0].mul(r2[1]);
    let scale = [p0, p1, p2]
        .iter()
        .filter(|p| !p.is_zero)
        .map(|p| p.log_modulus)
        .fold(f64::NEG_INFINITY, f64::max);
    if scale == f64::NEG_INFINITY {
        return 0.0;
    }
    (p0.rescaled(scale) - p1.rescaled(scale) + p2.rescaled(scale)).norm()
}

/// Verify the condensation identity on an explicit matrix:
/// `M * M{j1,j2;k1,k2} = M{j1;k1} M{j2;k2} - M{j1;k2} M{j2;k1}`.
pub fn dodgson_residual(matrix: &CMatrix, j1: usize, j2: usize, k1: usize, k2: usize) -> Result<DciReport> {
    if matrix.nrows != matrix.ncols {
        return Err(Error::Shape("dodgson_residual needs a square matrix".into()));
    }
    if matrix.nrows < 2 {
        return Err(Error::Shape("dodgson_residual needs size >= 2".into()));
    }
    if j1 >= j2 || k1 >= k2 || j2 >= matrix.nrows || k2 >= matrix.ncols {
        return Err(Error::Index(format!(
            "need j1 < j2 and k1 < k2 within range; got ({j1},{j2};{k1},{k2})"
        )));
    }
    let full = det_log(matrix)?;
    let double = minor_det(matrix, &[j1, j2], &[k1, k2])?;
    let m11 = minor_det(matrix, &[j1], &[k1])?;
    let m22 = minor_det(matrix, &[j2], &[k2])?;
    let m12 = minor_det(matrix, &[j1], &[k2])?;
    let m21 = minor_det(matrix, &[j2], &[k1])?;
    let residual = product_residual([full, double], [m11, m22], [m12, m21]);
    Ok(DciReport { lhs: (full, double), rhs: [m11, m22, m12, m21], residual })
}

/// Constituents and residual of the two-bordered reduction
/// `D^B_n[phi;psi1,psi2] * D_{n-2}[z phi]
///   = D^B_{n-1}[z phi;psi2] * D^B_{n-1}[phi;psi1/z]
///   - D^B_{n-1}[z phi;psi1] * D^B_{n-1}[phi;psi2/z]`.
#[derive(Debug, Clone, Serialize)]
pub struct TwoBorderedReduction {
    pub two_bordered: LogComplex,
    pub pure_zphi: LogComplex,
    pub zphi_psi2: LogComplex,
    pub phi_psi1_over_z: LogComplex,
    pub zphi_psi1: LogComplex,
    pub phi_psi2_over_z: LogComplex,
    /// Relative residual of the identity in product form.
    pub residual: f64,
    /// True when `D_{n-2}[z phi] = 0`, in which case the identity is only
    /// reported in product form (no division is attempted).
    pub degenerate: bool,
}

/// Evaluate the two-bordered condensation reduction at size `n >= 3`.
pub fn reduce_two_bordered(phi: &Symbol, psi1: &Symbol, psi2: &Symbol, n: usize) -> Result<TwoBorderedReduction> {
    if n < 3 {
        return Err(Error::Spec(format!("two-bordered reduction needs n >= 3, got {n}")));
    }
    let zphi = Symbol::shift(1, phi.clone());
    let psi1z = Symbol::shift(-1, psi1.clone());
    let psi2z = Symbol::shift(-1, psi2.clone());
    let d = |spec: StructuredDetSpec| -> Result<LogComplex> { det_log(&build_matrix(&spec)?) };
    let two_bordered = d(StructuredDetSpec::multi_bordered(phi.clone(), vec![psi1.clone(), psi2.clone()], n))?;
    let pure_zphi = d(StructuredDetSpec::pure(zphi.clone(), n - 2))?;
    let zphi_psi2 = d(StructuredDetSpec::multi_bordered(zphi.clone(), vec![psi2.clone()], n - 1))?;
    let phi_psi1_over_z = d(StructuredDetSpec::multi_bordered(phi.clone(), vec![psi1z], n - 1))?;
    let zphi_psi1 = d(StructuredDetSpec::multi_bordered(zphi, vec![psi1.clone()], n - 1))?;
    let phi_psi2_over_z = d(StructuredDetSpec::multi_bordered(phi.clone(), vec![psi2z], n - 1))?;
    let residual = product_residual(
        [two_bordered, pure_zphi],
        [zphi_psi2, phi_psi1_over_z],
        [zphi_psi1, phi_psi2_over_z],
    );
    Ok(TwoBorderedReduction {
        two_bordered,
        pure_zphi,
        zphi_psi2,
        phi_psi1_over_z,
        zphi_psi1,
        phi_psi2_over_z,
        residual,
        degenerate: pure_zphi.is_zero,
    })
}

/// Constituents and residual of the three-bordered reduction
/// `D^B_n[phi;psi1,psi2,psi3] * D^B_{n-2}[z phi; psi1/z]
///   = D^B_{n-1}[z phi;psi1,psi3] * D^B_{n-1}[phi;psi1/z,psi2/z]
///   - D^B_{n-1}[z phi;psi1,psi2] * D^B_{n-1}[phi;psi1/z,psi3/z]`.
#[derive(Debug, Clone, Serialize)]
pub struct ThreeBorderedReduction {
    pub three_bordered: LogComplex,
    pub pivot: LogComplex,
    pub terms: [LogComplex; 4],
    pub residual: f64,
    pub degenerate: bool,
}

/// Evaluate the three-bordered condensation reduction at size `n >= 4`.
pub fn reduce_three_bordered(
    phi: &Symbol,
    psi1: &Symbol,
    psi2: &Symbol,
    psi3: &Symbol,
    n: usize,
) -> Result<ThreeBorderedReduction> {
    if n < 4 {
        return Err(Error::Spec(format!("three-bordered reduction needs n >= 4, got {n}")));
    }
    let zphi = Symbol::shift(1, phi.clone());
    let over_z = |s: &Symbol| Symbol::shift(-1, s.clone());
    let d = |spec: StructuredDetSpec| -> Result<LogComplex> { det_log(&build_matrix(&spec)?) };
    let three_bordered = d(StructuredDetSpec::multi_bordered(
        phi.clone(),
        vec![psi1.clone(), psi2.clone(), psi3.clone()],
        n,
    ))?;
    let pivot = d(StructuredDetSpec::multi_bordered(zphi.clone(), vec![over_z(psi1)], n - 2))?;
    let t0 = d(StructuredDetSpec::multi_bordered(zphi.clone(), vec![psi1.clone(), psi3.clone()], n - 1))?;
    let t1 = d(StructuredDetSpec::multi_bordered(phi.clone(), vec![over_z(psi1), over_z(psi2)], n - 1))?;
    let t2 = d(StructuredDetSpec::multi_bordered(zphi, vec![psi1.clone(), psi2.clone()], n - 1))?;
    let t3 = d(StructuredDetSpec::multi_bordered(phi.clone(), vec![over_z(psi1), over_z(psi3)], n - 1))?;
    let residual = product_residual([three_bordered, pivot], [t0, t1], [t2, t3]);
    Ok(ThreeBorderedReduction {
        three_bordered,
        pivot,
        terms: [t0, t1, t2, t3],
        residual,
        degenerate: pivot.is_zero,
    })
}

/// Constituents and residual of the framed reduction: for the `M`
/// orientation,
/// `M_{n+3} * D_{n+1}[phi] = H_{n+2}[phi;psi,eta;a3] * E_{n+2}[phi;gamma,xi;a1]
///                         - E_{n+2}[phi;gamma,eta;a4] * H_{n+2}[phi;psi,xi;a2]`,
/// and for the `N` orientation,
/// `N_{n+3} * D_{n+1}[phi] = E_{n+2}[phi;psi,eta;a3] * G_{n+2}[phi;gamma,xi;a1]
///                         - H_{n+2}[phi;gamma,eta;a4] * L_{n+2}[phi;psi,xi;a2]`.
#[derive(Debug, Clone, Serialize)]
pub struct FramedReduction {
    pub framed: LogComplex,
    pub pure_toeplitz: LogComplex,
    pub semi_framed: [LogComplex; 4],
    pub residual: f64,
}

/// Evaluate the framed condensation reduction for a `FramedM`/`FramedN` spec.
pub fn reduce_framed(spec: &StructuredDetSpec) -> Result<FramedReduction> {
    let n = spec.n;
    if n < 3 {
        return Err(Error::Spec(format!("framed reduction needs size >= 3, got {n}")));
    }
    if spec.borders.len() != 4 || spec.corners.len() != 4 {
        return Err(Error::Spec("framed reduction needs 4 borders (xi,psi,eta,gamma) and 4 corners".into()));
    }
    let (xi, psi, eta, gamma) = (&spec.borders[0], &spec.borders[1], &spec.borders[2], &spec.borders[3]);
    let (a1, a2, a3, a4) = (spec.corners[0], spec.corners[1], spec.corners[2], spec.corners[3]);
    let d = |s: StructuredDetSpec| -> Result<LogComplex> { det_log(&build_matrix(&s)?) };
    let sf = |variant, col: &Symbol, row: &Symbol, a: Complex64| -> StructuredDetSpec {
        StructuredDetSpec::semi_framed(variant, spec.bulk.clone(), col.clone(), row.clone(), a, n - 1)
    };
    let framed = d(spec.clone())?;
    let pure_toeplitz = d(StructuredDetSpec::pure(spec.bulk.clone(), n - 2))?;
    let terms: [LogComplex; 4] = match spec.kind {
        DetKind::FramedM => [
            d(sf(SemiFramedVariant::H, psi, eta, a3))?,
            d(sf(SemiFramedVariant::E, gamma, xi, a1))?,
            d(sf(SemiFramedVariant::E, gamma, eta, a4))?,
            d(sf(SemiFramedVariant::H, psi, xi, a2))?,
        ],
        DetKind::FramedN => [
            d(sf(SemiFramedVariant::E, psi, eta, a3))?,
            d(sf(SemiFramedVariant::G, gamma, xi, a1))?,
            d(sf(SemiFramedVariant::H, gamma, eta, a4))?,
            d(sf(SemiFramedVariant::L, psi, xi, a2))?,
        ],
        _ => return Err(Error::Spec("reduce_framed requires a FramedM or FramedN spec".into())),
    };
    let residual =
        product_residual([framed, pure_toeplitz], [terms[0], terms[1]], [terms[2], terms[3]]);
    Ok(FramedReduction { framed, pure_toeplitz, semi_framed: terms, residual })
}

/// Residual chain of the two-framed reduction: the main condensation
/// identity plus the four closing equations expressing each corner minor
/// of the two-framed matrix through singly-framed `M` determinants, and
/// the cross-checks identifying the auxiliary minors with semi-framed and
/// framed builds.
#[derive(Debug, Clone, Serialize)]
pub struct TwoFramedReduction {
    /// Named relative residuals, one per verified equation.
    pub residuals: Vec<(String, f64)>,
}

impl TwoFramedReduction {
    /// Largest residual in the chain.
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|(_, r)| *r).fold(0.0, f64::max)
    }
}

/// Evaluate the two-framed condensation chain for a `TwoFramedK` spec of
/// size `N = n + 5`.
pub fn reduce_two_framed(spec: &StructuredDetSpec) -> Result<TwoFramedReduction> {
    if spec.kind != DetKind::TwoFramedK {
        return Err(Error::Spec("reduce_two_framed requires a TwoFramedK spec".into()));
    }
    let nn = spec.n;
    if nn < 5 {
        return Err(Error::Spec(format!("two-framed spec needs size >= 5, got {nn}")));
    }
    let n = nn - 5; // display parameter: matrix is (n+5) x (n+5)
    let last = nn - 1;
    let phi = &spec.bulk;
    let b = |i: usize| spec.borders[i].clone();
    let (xi1, psi1, eta1, gamma1) = (b(0), b(1), b(2), b(3));
    let (xi2, psi2, eta2, gamma2) = (b(4), b(5), b(6), b(7));
    let a = |i: usize| spec.corners[i - 1];
    let over_z = |s: &Symbol| Symbol::shift(-1, s.clone());
    // Frame-symbol coefficients entering the corner sets.
    let coeff = |s: &Symbol, j: i64| -> Result<Complex64> {
        Ok(crate::symbols::fourier_coeffs(s, (j, j), crate::structmat::COEFF_TOL)?.get(j))
    };
    let e = n as i64 + 2;
    let (psi2_0, psi2_top) = (coeff(&psi2, 0)?, coeff(&psi2, e)?);
    let (eta2_0, eta2_top) = (coeff(&eta2, 0)?, coeff(&eta2, e)?);
    let (xi2_0, xi2_top) = (coeff(&xi2, 0)?, coeff(&xi2, e)?);
    let (gamma2_0, gamma2_top) = (coeff(&gamma2, 0)?, coeff(&gamma2, e)?);

    let full = build_matrix(spec)?;
    let k_full = det_log(&full)?;
    let k_corner = |rows: &[usize], cols: &[usize]| -> Result<LogComplex> { minor_det(&full, rows, cols) };
    let k00 = k_corner(&[0], &[0])?;
    let knn = k_corner(&[last], &[last])?;
    let k0n = k_corner(&[0], &[last])?;
    let kn0 = k_corner(&[last], &[0])?;
    let k_double = k_corner(&[0, last], &[0, last])?;

    let mut residuals: Vec<(String, f64)> = vec![];
    residuals.push((
        "main condensation identity".into(),
        product_residual([k_full, k_double], [k00, knn], [k0n, kn0]),
    ));

    // The double minor is itself the singly-framed M determinant with the
    // inner frame data.
    let framed_m = |xi: Symbol, psi: Symbol, eta: Symbol, gamma: Symbol, corners: [Complex64; 4]| {
        StructuredDetSpec {
            kind: DetKind::FramedM,
            bulk: phi.clone(),
            borders: vec![xi, psi, eta, gamma],
            corners: corners.to_vec(),
            n: nn - 2,
        }
    };
    let d = |s: StructuredDetSpec| -> Result<LogComplex> { det_log(&build_matrix(&s)?) };
    let inner_corners = [a(1), a(2), a(3), a(4)];
    let m_inner = d(framed_m(xi1.clone(), psi1.clone(), eta1.clone(), gamma1.clone(), inner_corners))?;
    residuals.push((
        "double minor equals inner framed determinant".into(),
        log_pair_residual(k_double, m_inner),
    ));

    // Semi-framed identifications of the auxiliary-DCI pivots.
    let sf = |variant, col: &Symbol, row: &Symbol, av: Complex64| -> Result<LogComplex> {
        d(StructuredDetSpec::semi_framed(variant, phi.clone(), col.clone(), row.clone(), av, nn - 3))
    };
    let e_gamma1_xi1 = sf(SemiFramedVariant::E, &gamma1, &xi1, a(1))?;
    let h_psi1_eta1 = sf(SemiFramedVariant::H, &psi1, &eta1, a(3))?;
    let h_psi1_xi1 = sf(SemiFramedVariant::H, &psi1, &xi1, a(2))?;
    let e_gamma1_eta1 = sf(SemiFramedVariant::E, &gamma1, &eta1, a(4))?;
    let aux_pivot = minor_det(&full, &[0, nn - 2, last], &[0, nn - 2, last])?;
    residuals.push((
        "auxiliary pivot equals semi-framed E[gamma1,xi1]".into(),
        log_pair_residual(aux_pivot, e_gamma1_xi1),
    ));

    // Closing equations: verified in product form
    // (corner minor) * (semi-framed pivot) = sign * (M M' - M'' M''').
    let sign = if (n + 1) % 2 == 0 { 1.0 } else { -1.0 };
    let corner_sets = CornerSets {
        a1: [a(1), psi2_0, a(7), eta2_top],
        a2: inner_corners,
        a3: [a(1), a(2), eta2_0, eta2_top],
        a4: [a(1), psi2_0, psi2_top, a(4)],
        b2: [a(5), xi2_0, a(3), gamma2_0],
        b3: [gamma2_top, a(2), a(3), gamma2_0],
        b4: [xi2_top, xi2_0, a(3), a(4)],
        c3: [gamma2_top, a(2), eta2_0, a(8)],
        d4: [xi2_top, a(6), psi2_top, a(4)],
    };
    // K{0;0} closing equation.
    {
        let t1 = d(framed_m(xi1.clone(), over_z(&psi2), over_z(&eta2), gamma1.clone(), corner_sets.a1))?;
        let t2 = d(framed_m(xi1.clone(), psi1.clone(), eta1.clone(), gamma1.clone(), corner_sets.a2))?;
        let t3 = d(framed_m(xi1.clone(), psi1.clone(), over_z(&eta2), gamma1.clone(), corner_sets.a3))?;
        let t4 = d(framed_m(xi1.clone(), over_z(&psi2), eta1.clone(), gamma1.clone(), corner_sets.a4))?;
        residuals.push((
            "closing equation for K{0;0}".into(),
            product_residual([k00, e_gamma1_xi1], [t1, t2], [t3, t4]),
        ));
    }
    // K{n+4;n+4} closing equation.
    {
        let t1 = d(framed_m(xi1.clone(), psi1.clone(), eta1.clone(), gamma1.clone(), corner_sets.a2))?;
        let t2 = d(framed_m(over_z(&xi2), psi1.clone(), eta1.clone(), over_z(&gamma2), corner_sets.b2))?;
        let t3 = d(framed_m(xi1.clone(), psi1.clone(), eta1.clone(), over_z(&gamma2), corner_sets.b3))?;
        let t4 = d(framed_m(over_z(&xi2), psi1.clone(), eta1.clone(), gamma1.clone(), corner_sets.b4))?;
        residuals.push((
            "closing equation for K{n+4;n+4}".into(),
            product_residual([knn, h_psi1_eta1], [t1, t2], [t3, t4]),
        ));
    }
    // K{0;n+4} closing equation (carries the (-1)^{n+1} sign).
    {
        let t1 = d(framed_m(xi1.clone(), psi1.clone(), over_z(&eta2), gamma1.clone(), corner_sets.a3))?;
        let t2 = d(framed_m(xi1.clone(), psi1.clone(), eta1.clone(), over_z(&gamma2), corner_sets.b3))?;
        let t3 = d(framed_m(xi1.clone(), psi1.clone(), over_z(&eta2), over_z(&gamma2), corner_sets.c3))?;
        let t4 = d(framed_m(xi1.clone(), psi1.clone(), eta1.clone(), gamma1.clone(), corner_sets.a2))?;
        let signed = k0n.mul_complex(Complex64::new(sign, 0.0));
        residuals.push((
            "closing equation for K{0;n+4}".into(),
            product_residual([signed, h_psi1_xi1], [t1, t2], [t3, t4]),
        ));
    }
    // K{n+4;0} closing equation (carries the (-1)^{n+1} sign).
    {
        let t1 = d(framed_m(xi1.clone(), over_z(&psi2), eta1.clone(), gamma1.clone(), corner_sets.a4))?;
        let t2 = d(framed_m(over_z(&xi2), psi1.clone(), eta1.clone(), gamma1.clone(), corner_sets.b4))?;
        let t3 = d(framed_m(xi1.clone(), psi1.clone(), eta1.clone(), gamma1.clone(), corner_sets.a2))?;
        let t4 = d(framed_m(over_z(&xi2), over_z(&psi2), eta1.clone(), gamma1.clone(), corner_sets.d4))?;
        let signed = kn0.mul_complex(Complex64::new(sign, 0.0));
        residuals.push((
            "closing equation for K{n+4;0}".into(),
            product_residual([signed, e_gamma1_eta1], [t1, t2], [t3, t4]),
        ));
    }
    Ok(TwoFramedReduction { residuals })
}

/// Corner sets for the two-framed closing equations, named after the
/// weight-set labels in the reduction.
struct CornerSets {
    a1: [Complex64; 4],
    a2: [Complex64; 4],
    a3: [Complex64; 4],
    a4: [Complex64; 4],
    b2: [Complex64; 4],
    b3: [Complex64; 4],
    b4: [Complex64; 4],
    c3: [Complex64; 4],
    d4: [Complex64; 4],
}

/// Relative residual of `x = y` for two log-scale values.
pub fn log_pair_residual(x: LogComplex, y: LogComplex) -> f64 {
    if x.is_zero && y.is_zero {
        return 0.0;
    }
    let scale = [x, y]
        .iter()
        .filter(|p| !p.is_zero)
        .map(|p| p.log_modulus)
        .fold(f64::NEG_INFINITY, f64::max);
    (x.rescaled(scale) - y.rescaled(scale)).norm()
}
