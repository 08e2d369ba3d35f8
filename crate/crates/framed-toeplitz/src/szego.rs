//! Strong Szegő-type asymptotic predictions: the classical leading
//! constants `G` and `E` for pure Toeplitz determinants, the bordered
//! constants `F` and `H` for Ising-class border symbols, the two-bordered
//! constant `J_1`, the shifted-weight ratio prediction with its
//! geometrically decaying correction coefficient `C_n`, and the
//! semi-framed limit constants for rational frame symbols.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::LogComplex;
use crate::rhp::{c_n, circle_integral};
use crate::structmat::SemiFramedVariant;
use crate::symbols::{
    eval_alpha, eval_phi_minus, LogSymbolData, RatTerm, Symbol,
};

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// One pole term of an Ising-class border symbol: contributes
/// `b z / (z - c)` to the weight-multiplying part and `b_hat / (z - c)`
/// to the additive part.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PoleTerm {
    pub c: Complex64,
    pub b: Complex64,
    pub b_hat: Complex64,
}

/// An Ising-class border symbol `psi = q1 * phi + q2` with
/// `q1(z) = a0 + a1 z + b0/z + sum_j b_j z/(z - c_j)` and
/// `q2(z) = a0_hat + a1_hat z + b0_hat/z + sum_j b_j_hat/(z - c_j)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BorderSpec {
    pub a0: Complex64,
    pub a1: Complex64,
    pub b0: Complex64,
    pub a0_hat: Complex64,
    pub a1_hat: Complex64,
    pub b0_hat: Complex64,
    pub poles: Vec<PoleTerm>,
}

impl BorderSpec {
    /// A spec with all parameters zero.
    pub fn zero() -> Self {
        BorderSpec { a0: ZERO, a1: ZERO, b0: ZERO, a0_hat: ZERO, a1_hat: ZERO, b0_hat: ZERO, poles: vec![] }
    }

    /// The border `psi = phi` (weight itself).
    pub fn weight_itself() -> Self {
        BorderSpec { a0: c64(1.0, 0.0), ..Self::zero() }
    }

    /// Build the rational prefactors `(q1, q2)` as symbols.
    pub fn rational_parts(&self) -> Result<(Symbol, Symbol)> {
        let mut t1 = vec![RatTerm::Const(self.a0)];
        let mut t2 = vec![RatTerm::Const(self.a0_hat)];
        for p in &self.poles {
            if (p.c.norm() - 1.0).abs() < 1e-12 {
                return Err(Error::PoleOnCircle(p.c));
            }
            if p.c.norm() < 1e-12 {
                return Err(Error::Parameter("border poles must be nonzero".into()));
            }
            t1.push(RatTerm::PoleZ { b: p.b, c: p.c });
            t2.push(RatTerm::Pole { b: p.b_hat, c: p.c });
        }
        let power = |coeff: Complex64, m: i64| -> Result<Symbol> {
            Ok(Symbol::scale(coeff, Symbol::rational(vec![RatTerm::Power(m)])?))
        };
        let q1 = Symbol::sum(vec![Symbol::rational(t1)?, power(self.a1, 1)?, power(self.b0, -1)?]);
        let q2 = Symbol::sum(vec![Symbol::rational(t2)?, power(self.a1_hat, 1)?, power(self.b0_hat, -1)?]);
        Ok((q1, q2))
    }

    /// Build the full border symbol `q1 * phi + q2`.
    pub fn to_symbol(&self, phi: &Symbol) -> Result<Symbol> {
        let (q1, q2) = self.rational_parts()?;
        Ok(Symbol::combo(q1, phi.clone(), q2))
    }
}

/// Leading-order prediction `G^n E` for the pure Toeplitz determinant of
/// size `n`, in log scale.
pub fn predict_pure(data: &LogSymbolData, n: usize) -> LogComplex {
    let g = LogComplex::from_complex(data.g);
    let e = LogComplex::from_complex(data.e);
    LogComplex::from_polar_log(
        n as f64 * g.log_modulus + e.log_modulus,
        n as f64 * g.phase + e.phase,
    )
}

/// The bordered limit constant for an Ising-class border:
/// with `L_k` the Fourier coefficients of `log phi` and `alpha` the
/// Szegő function,
///
/// `F = a0 + b0 L_1 + sum_{0<|c_j|<1} b_j alpha(c_j)/alpha(0)
///    + (1/alpha(0)) (a0_hat - a1_hat L_{-1}
///                    - sum_{|c_j|>1} (b_j_hat/c_j) alpha(c_j))`.
pub fn constant_f(spec: &BorderSpec, data: &LogSymbolData) -> Result<Complex64> {
    let l1 = data.log_coeffs.get(1);
    let lm1 = data.log_coeffs.get(-1);
    let alpha0 = data.g; // alpha(0) = exp(L_0) = G
    let mut f = spec.a0 + spec.b0 * l1;
    let mut hat = spec.a0_hat - spec.a1_hat * lm1;
    for p in &spec.poles {
        let a = eval_alpha(data, p.c)?;
        if p.c.norm() < 1.0 {
            f += p.b * a / alpha0;
        } else {
            hat -= p.b_hat / p.c * a;
        }
    }
    Ok(f + hat / alpha0)
}

/// The same constant via the Wiener-Hopf quotient route
/// `F = [phi_minus^{-1} psi]_0 / (G [phi_plus]_0)` computed by circle
/// quadrature of the zeroth Fourier coefficient (the library's
/// factorization normalizes `[phi_plus]_0 = [phi_minus]_0 = 1` and
/// carries `G` separately).
pub fn constant_f_quotient(psi: &Symbol, data: &LogSymbolData) -> Result<Complex64> {
    let coeff0 = circle_integral(1.0, 1e-12, &|tau| {
        Ok(psi.eval(tau) / (eval_phi_minus(data, tau) * tau))
    })?;
    Ok(coeff0 / data.g)
}

/// The subleading bordered constant (limit constant of the border
/// `z^{-1} psi` for an Ising-class `psi`):
///
/// `H = a1 - sum_j b_j/c_j + a0 L_1 + b0 L_2 + (b0/2) L_1^2
///    + (1/alpha(0)) (a1_hat - sum_{|c_j|>1} (b_j_hat/c_j^2) alpha(c_j)
///                    + sum_{0<|c_j|<1} (b_j/c_j) alpha(c_j))`.
pub fn constant_h(spec: &BorderSpec, data: &LogSymbolData) -> Result<Complex64> {
    let l1 = data.log_coeffs.get(1);
    let l2 = data.log_coeffs.get(2);
    let alpha0 = data.g;
    let mut h = spec.a1 + spec.a0 * l1 + spec.b0 * l2 + spec.b0 / 2.0 * l1 * l1;
    let mut hat = spec.a1_hat;
    for p in &spec.poles {
        h -= p.b / p.c;
        let a = eval_alpha(data, p.c)?;
        if p.c.norm() > 1.0 {
            hat -= p.b_hat / (p.c * p.c) * a;
        } else {
            hat += p.b / p.c * a;
        }
    }
    Ok(h + hat / alpha0)
}

/// The two-bordered limit constant
/// `J_1 = det [[F(psi2), F(psi1)], [H(psi2), H(psi1)]]`.
pub fn constant_j1(spec1: &BorderSpec, spec2: &BorderSpec, data: &LogSymbolData) -> Result<Complex64> {
    let f1 = constant_f(spec1, data)?;
    let f2 = constant_f(spec2, data)?;
    let h1 = constant_h(spec1, data)?;
    let h2 = constant_h(spec2, data)?;
    Ok(f2 * h1 - f1 * h2)
}

/// Limit constant of the border `z^{-l} phi`: the `l`-th Taylor
/// coefficient of the Szegő function `alpha` at the origin.
pub fn constant_power_border(data: &LogSymbolData, l: usize) -> Result<Complex64> {
    crate::symbols::alpha_taylor_at_zero(data, l)
}

/// Quadrature noise floor for the correction coefficients: `C` values
/// below this are indistinguishable from an exact zero in f64.
const C_NOISE_FLOOR: f64 = 1e-14;

/// The correction ratio `C_n / C_{n-1}`.  When both coefficients sit at
/// the noise floor the correction term vanishes identically (e.g. a
/// weight whose reciprocal is entire inside the disk) and the ratio is
/// zero; a vanishing denominator alone makes the ratio undefined.
fn correction_ratio(cn: Complex64, cnm1: Complex64, n: usize) -> Result<Complex64> {
    if cnm1.norm() < C_NOISE_FLOOR {
        if cn.norm() < C_NOISE_FLOOR {
            return Ok(ZERO);
        }
        return Err(Error::Precondition(format!(
            "correction coefficient C_{} = {cnm1} is numerically zero",
            n - 1
        )));
    }
    Ok(cn / cnm1)
}

/// Finite-`n` ratio prediction for the shifted weight:
/// `D^B_{n+1}[z phi; psi] / D_n[z phi]
///   ~ G (F - H C_n/C_{n-1} + O(rho^{-n}))`.
///
/// Returns the predicted ratio together with `C_n/C_{n-1}`; fails with
/// [`Error::Precondition`] when `C_{n-1}` is numerically zero (the
/// correction ratio is then undefined).
pub fn predict_zphi_bordered_ratio(
    weight: &Symbol,
    spec: &BorderSpec,
    data: &LogSymbolData,
    n: usize,
) -> Result<(Complex64, Complex64)> {
    let f = constant_f(spec, data)?;
    let h = constant_h(spec, data)?;
    let cn = c_n(weight, data, n)?;
    let cnm1 = c_n(weight, data, n - 1)?;
    let ratio = correction_ratio(cn, cnm1, n)?;
    Ok((data.g * (f - h * ratio), ratio))
}

/// Finite-`n` ratio prediction for the monomial border over the shifted
/// weight: `D^B_{n+1}[z phi; z] / D_n[z phi]
///   ~ (-L_{-1} - C_n/C_{n-1}) (1 + O(rho^{-2n}))`.
pub fn predict_zphi_monomial_ratio(
    weight: &Symbol,
    data: &LogSymbolData,
    n: usize,
) -> Result<Complex64> {
    let cn = c_n(weight, data, n)?;
    let cnm1 = c_n(weight, data, n - 1)?;
    Ok(-data.log_coeffs.get(-1) - correction_ratio(cn, cnm1, n)?)
}

/// The rational frame families with known semi-framed limit constants.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum RationalFrame {
    /// `sum_j A_j / (z - d_j)`.
    Plain(Vec<(Complex64, Complex64)>),
    /// `sum_j A_j phi(z) / (z - d_j)`.
    TimesWeight(Vec<(Complex64, Complex64)>),
    /// `sum_j A_j phi(1/z) / (z - d_j)`.
    TimesReflectedWeight(Vec<(Complex64, Complex64)>),
}

impl RationalFrame {
    /// The pole list `(A_j, d_j)`.
    pub fn terms(&self) -> &[(Complex64, Complex64)] {
        match self {
            RationalFrame::Plain(t) | RationalFrame::TimesWeight(t) | RationalFrame::TimesReflectedWeight(t) => t,
        }
    }

    /// Build the frame as a symbol over the given bulk weight.
    pub fn to_symbol(&self, phi: &Symbol) -> Result<Symbol> {
        let poles = Symbol::rational(
            self.terms().iter().map(|&(a, d)| RatTerm::Pole { b: a, c: d }).collect(),
        )?;
        Ok(match self {
            RationalFrame::Plain(_) => poles,
            RationalFrame::TimesWeight(_) => Symbol::product(poles, phi.clone()),
            RationalFrame::TimesReflectedWeight(_) => Symbol::product(poles, Symbol::reflect(phi.clone())),
        })
    }
}

/// Semi-framed limit constant: for a size-`(n+1)` semi-framed
/// determinant with rational frames, `F_{n+1} ~ G^n E * const`.
///
/// Supported combinations (column frame, row frame):
///
/// * plain/plain, any variant: `H`/`L` give `a`; `E` gives
///   `a + sum_{|d|>1, |c|>1} A B alpha(c) / alpha(1/d) / (1 - c d)`;
///   `G` gives `a + sum_{|d|>1, |c|>1} A B alpha(d) / alpha(1/c) / (1 - c d)`;
/// * weight-multiplied frames per variant: `H` with (weight, weight)
///   and `L` with (reflected, reflected) give `a`; `E` with
///   (reflected, weight) gives
///   `a + sum_{|d|<1, |c|<1} A B alpha(c) / alpha(1/d) / (1 - c d)`;
///   `G` with (weight, reflected) gives
///   `a + sum_{|d|<1, |c|<1} A B alpha(d) / alpha(1/c) / (1 - c d)`.
///
/// Everything else is [`Error::UnsupportedSpec`] — no silent fallback.
pub fn predict_semiframed(
    variant: SemiFramedVariant,
    psi: &RationalFrame,
    eta: &RationalFrame,
    a: Complex64,
    data: &LogSymbolData,
) -> Result<Complex64> {
    use RationalFrame::{Plain, TimesReflectedWeight, TimesWeight};
    // (filter on |d|, filter on |c|): true = outside the unit circle.
    let correction = |outside: bool,
                      swap: bool|
     -> Result<Complex64> {
        let mut s = ZERO;
        for &(aj, d) in psi.terms() {
            for &(bk, c) in eta.terms() {
                let keep = if outside { d.norm() > 1.0 && c.norm() > 1.0 } else { d.norm() < 1.0 && c.norm() < 1.0 };
                if !keep {
                    continue;
                }
                // E-pattern: alpha(c)/alpha(1/d); G-pattern: alpha(d)/alpha(1/c)
                let (num, den) = if swap { (d, 1.0 / c) } else { (c, 1.0 / d) };
                s += aj * bk * eval_alpha(data, num)? / eval_alpha(data, den)? / (1.0 - c * d);
            }
        }
        Ok(s)
    };
    match (variant, psi, eta) {
        (SemiFramedVariant::H, Plain(_), Plain(_)) | (SemiFramedVariant::L, Plain(_), Plain(_)) => Ok(a),
        (SemiFramedVariant::E, Plain(_), Plain(_)) => Ok(a + correction(true, false)?),
        (SemiFramedVariant::G, Plain(_), Plain(_)) => Ok(a + correction(true, true)?),
        (SemiFramedVariant::H, TimesWeight(_), TimesWeight(_)) => Ok(a),
        (SemiFramedVariant::L, TimesReflectedWeight(_), TimesReflectedWeight(_)) => Ok(a),
        (SemiFramedVariant::E, TimesReflectedWeight(_), TimesWeight(_)) => Ok(a + correction(false, false)?),
        (SemiFramedVariant::G, TimesWeight(_), TimesReflectedWeight(_)) => Ok(a + correction(false, true)?),
        _ => Err(Error::UnsupportedSpec(format!(
            "no limit constant is implemented for variant {variant:?} with this frame combination"
        ))),
    }
}
