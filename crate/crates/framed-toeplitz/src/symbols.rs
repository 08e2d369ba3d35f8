//! Symbols on the unit circle and their spectral data.
//!
//! A [`Symbol`] is a pointwise evaluator on (a neighborhood of) the unit
//! circle together with structural metadata: declared poles, an annulus of
//! analyticity, and a kind tag that lets the library pick exact closed-form
//! Fourier coefficients where they exist (rational pieces, the two-valued
//! jump symbol) and spectrally accurate adaptive FFT quadrature otherwise.
//!
//! The module also computes winding numbers, log-symbol Fourier data, the
//! Szego constants `G` and `E`, the Szego function `alpha` (inside/outside
//! series), and the Wiener-Hopf factors `phi_plus` / `phi_minus`.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Node cap for adaptive quadrature (2^20).
pub const NODE_CAP: usize = 1 << 20;

/// Default Fourier truncation order for log-symbol data.
pub const DEFAULT_TRUNC: usize = 128;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// One additive term of a rational symbol.
#[derive(Debug, Clone, PartialEq)]
pub enum RatTerm {
    /// A constant.
    Const(Complex64),
    /// `z^m` for any integer `m` (negative powers allowed).
    Power(i64),
    /// `b / (z - c)` with `|c| != 1`.
    Pole { b: Complex64, c: Complex64 },
    /// `b z / (z - c)` with `|c| != 1` (the form the border symbols use).
    PoleZ { b: Complex64, c: Complex64 },
}

/// Structural kind of a symbol.
#[derive(Debug, Clone, PartialEq)]
pub enum SymbolKind {
    /// A constant function.
    Constant(Complex64),
    /// `exp(sum_k t_k z^k)` over a finite set of integer exponents.
    ExpLaurent(Vec<(i64, Complex64)>),
    /// A finite sum of [`RatTerm`]s.
    Rational(Vec<RatTerm>),
    /// Diagonal Ising two-point symbol
    /// `exp((ln(1 - 1/(k z)) - ln(1 - z/k))/2)` with `k > 1`
    /// (continuous principal branch; unimodular on the circle).
    IsingDiagonal { k: f64 },
    /// The two-valued jump `g`: `+1` for `Re z >= 0`, `-1` for `Re z < 0`.
    JumpG,
    /// Pointwise sum of symbols.
    Sum(Vec<Symbol>),
    /// Pointwise product of two symbols.
    Product(Box<Symbol>, Box<Symbol>),
    /// Scalar multiple.
    Scale(Complex64, Box<Symbol>),
    /// `z^m * inner(z)` (Fourier shift).
    Shift(i64, Box<Symbol>),
    /// `inner(1/z)` (Fourier reflection).
    Reflect(Box<Symbol>),
}

/// A symbol on the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    /// Structural tag; drives closed-form coefficient extraction.
    pub kind: SymbolKind,
    /// Annulus of analyticity `(rho_inner, rho_outer)` with
    /// `rho_inner < 1 < rho_outer`; `(1, 1)` marks circle-only symbols
    /// (the jump family).
    pub annulus: (f64, f64),
    /// Declared poles `(location, coefficient)` of rational parts.
    pub poles: Vec<(Complex64, Complex64)>,
    /// Winding number if known structurally.
    pub winding_hint: Option<i64>,
}

impl Symbol {
    /// The constant symbol.
    pub fn constant(v: Complex64) -> Symbol {
        Symbol {
            kind: SymbolKind::Constant(v),
            annulus: (0.0, f64::INFINITY),
            poles: vec![],
            winding_hint: Some(0),
        }
    }

    /// `exp(sum_k t_k z^k)`; analytic on the punctured plane.
    pub fn exp_laurent(terms: Vec<(i64, Complex64)>) -> Symbol {
        Symbol {
            kind: SymbolKind::ExpLaurent(terms),
            annulus: (0.0, f64::INFINITY),
            poles: vec![],
            winding_hint: Some(0),
        }
    }

    /// A rational symbol from additive terms.  Every declared pole must
    /// satisfy `|c| != 1`.
    pub fn rational(terms: Vec<RatTerm>) -> Result<Symbol> {
        let mut rho_in: f64 = 0.0;
        let mut rho_out = f64::INFINITY;
        let mut poles = vec![];
        for t in &terms {
            let (b, cc) = match t {
                RatTerm::Pole { b, c } => (*b, *c),
                RatTerm::PoleZ { b, c } => (*b, *c),
                _ => continue,
            };
            let m = cc.norm();
            if (m - 1.0).abs() < 1e-12 {
                return Err(Error::PoleOnCircle(cc));
            }
            if m < 1.0 {
                rho_in = rho_in.max(m);
            } else {
                rho_out = rho_out.min(m);
            }
            poles.push((cc, b));
        }
        Ok(Symbol { kind: SymbolKind::Rational(terms), annulus: (rho_in, rho_out), poles, winding_hint: None })
    }

    /// The diagonal Ising symbol; requires `k > 1`.
    pub fn ising_diagonal(k: f64) -> Result<Symbol> {
        if !(k > 1.0) {
            return Err(Error::Parameter(format!("ising-diagonal requires k > 1, got {k}")));
        }
        Ok(Symbol {
            kind: SymbolKind::IsingDiagonal { k },
            annulus: (1.0 / k, k),
            poles: vec![],
            winding_hint: Some(0),
        })
    }

    /// The two-valued jump symbol.
    pub fn jump_g() -> Symbol {
        Symbol { kind: SymbolKind::JumpG, annulus: (1.0, 1.0), poles: vec![], winding_hint: None }
    }

    /// Pointwise sum.
    pub fn sum(parts: Vec<Symbol>) -> Symbol {
        let annulus = parts
            .iter()
            .fold((0.0f64, f64::INFINITY), |(i, o), s| (i.max(s.annulus.0), o.min(s.annulus.1)));
        let poles = parts.iter().flat_map(|s| s.poles.clone()).collect();
        Symbol { kind: SymbolKind::Sum(parts), annulus, poles, winding_hint: None }
    }

    /// Pointwise product.
    pub fn product(a: Symbol, b: Symbol) -> Symbol {
        let annulus = (a.annulus.0.max(b.annulus.0), a.annulus.1.min(b.annulus.1));
        let poles = a.poles.iter().chain(b.poles.iter()).cloned().collect();
        let winding_hint = match (a.winding_hint, b.winding_hint) {
            (Some(x), Some(y)) => Some(x + y),
            _ => None,
        };
        Symbol { kind: SymbolKind::Product(Box::new(a), Box::new(b)), annulus, poles, winding_hint }
    }

    /// Scalar multiple.
    pub fn scale(s: Complex64, inner: Symbol) -> Symbol {
        let annulus = inner.annulus;
        let poles = inner.poles.clone();
        let winding_hint = inner.winding_hint;
        Symbol { kind: SymbolKind::Scale(s, Box::new(inner)), annulus, poles, winding_hint }
    }

    /// `z^m * inner(z)`.
    pub fn shift(m: i64, inner: Symbol) -> Symbol {
        let annulus = inner.annulus;
        let poles = inner.poles.clone();
        let winding_hint = inner.winding_hint.map(|w| w + m);
        Symbol { kind: SymbolKind::Shift(m, Box::new(inner)), annulus, poles, winding_hint }
    }

    /// `inner(1/z)`.
    pub fn reflect(inner: Symbol) -> Symbol {
        let annulus = (
            if inner.annulus.1.is_infinite() { 0.0 } else { 1.0 / inner.annulus.1 },
            if inner.annulus.0 == 0.0 { f64::INFINITY } else { 1.0 / inner.annulus.0 },
        );
        let poles = inner
            .poles
            .iter()
            .map(|&(c, b)| (if c.norm() == 0.0 { c } else { 1.0 / c }, b))
            .collect();
        let winding_hint = inner.winding_hint.map(|w| -w);
        Symbol { kind: SymbolKind::Reflect(Box::new(inner)), annulus, poles, winding_hint }
    }

    /// The border combination `q1 * phi + q2`.
    pub fn combo(q1: Symbol, phi: Symbol, q2: Symbol) -> Symbol {
        Symbol::sum(vec![Symbol::product(q1, phi), q2])
    }

    /// Evaluate the symbol at a point (on or near the unit circle for
    /// circle-only kinds).
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match &self.kind {
            SymbolKind::Constant(v) => *v,
            SymbolKind::ExpLaurent(terms) => {
                let mut acc = c64(0.0, 0.0);
                for &(k, t) in terms {
                    acc += t * z.powi(k as i32);
                }
                acc.exp()
            }
            SymbolKind::Rational(terms) => {
                let mut acc = c64(0.0, 0.0);
                for t in terms {
                    acc += match t {
                        RatTerm::Const(v) => *v,
                        RatTerm::Power(m) => z.powi(*m as i32),
                        RatTerm::Pole { b, c } => b / (z - c),
                        RatTerm::PoleZ { b, c } => b * z / (z - c),
                    };
                }
                acc
            }
            SymbolKind::IsingDiagonal { k } => {
                let one = c64(1.0, 0.0);
                let a = (one - 1.0 / (*k * z)).ln();
                let b = (one - z / *k).ln();
                (0.5 * (a - b)).exp()
            }
            SymbolKind::JumpG => {
                if z.re >= 0.0 {
                    c64(1.0, 0.0)
                } else {
                    c64(-1.0, 0.0)
                }
            }
            SymbolKind::Sum(parts) => parts.iter().map(|s| s.eval(z)).sum(),
            SymbolKind::Product(a, b) => a.eval(z) * b.eval(z),
            SymbolKind::Scale(s, inner) => s * inner.eval(z),
            SymbolKind::Shift(m, inner) => z.powi(*m as i32) * inner.eval(z),
            SymbolKind::Reflect(inner) => inner.eval(1.0 / z),
        }
    }

    /// Exact `j`-th Fourier coefficient, when the kind admits one.
    pub fn closed_coeff(&self, j: i64) -> Option<Complex64> {
        match &self.kind {
            SymbolKind::Constant(v) => Some(if j == 0 { *v } else { c64(0.0, 0.0) }),
            SymbolKind::Rational(terms) => {
                let mut acc = c64(0.0, 0.0);
                for t in terms {
                    acc += match t {
                        RatTerm::Const(v) => {
                            if j == 0 {
                                *v
                            } else {
                                c64(0.0, 0.0)
                            }
                        }
                        RatTerm::Power(m) => {
                            if j == *m {
                                c64(1.0, 0.0)
                            } else {
                                c64(0.0, 0.0)
                            }
                        }
                        RatTerm::Pole { b, c } => pole_coeff(*b, *c, j),
                        // b z/(z-c) = b + (b c)/(z-c)
                        RatTerm::PoleZ { b, c } => {
                            let mut v = pole_coeff(b * c, *c, j);
                            if j == 0 {
                                v += b;
                            }
                            v
                        }
                    };
                }
                Some(acc)
            }
            SymbolKind::JumpG => Some(jump_g_coeff(j)),
            SymbolKind::Sum(parts) => {
                let mut acc = c64(0.0, 0.0);
                for p in parts {
                    acc += p.closed_coeff(j)?;
                }
                Some(acc)
            }
            SymbolKind::Scale(s, inner) => inner.closed_coeff(j).map(|v| s * v),
            SymbolKind::Shift(m, inner) => inner.closed_coeff(j - m),
            SymbolKind::Reflect(inner) => inner.closed_coeff(-j),
            SymbolKind::Product(a, b) => match (&a.kind, &b.kind) {
                (SymbolKind::Constant(s), _) => b.closed_coeff(j).map(|v| s * v),
                (_, SymbolKind::Constant(s)) => a.closed_coeff(j).map(|v| s * v),
                _ => None,
            },
            _ => None,
        }
    }

    /// True if every coefficient is available in closed form.
    pub fn has_closed_coeffs(&self) -> bool {
        self.closed_coeff(0).is_some()
    }

    /// Default quadrature contour radii `(r0 < 1 < r1)` inside the
    /// symbol's annulus: geometric means of 1 and the annulus bounds,
    /// clamped so entire symbols still get usable contours.
    pub fn contour_radii(&self) -> (f64, f64) {
        let lo = self.annulus.0.max(1.0 / 16.0);
        let hi = self.annulus.1.min(16.0);
        (lo.sqrt(), hi.sqrt())
    }
}

/// Closed-form coefficient of `b/(z-c)`:
/// for `|c| > 1`: `-b c^{-j-1}` for `j >= 0`, else 0;
/// for `|c| < 1`: `b c^{-j-1}` for `j <= -1`, else 0.
fn pole_coeff(b: Complex64, c: Complex64, j: i64) -> Complex64 {
    if c.norm() > 1.0 {
        if j >= 0 {
            -b * c.powi(-(j as i32) - 1)
        } else {
            c64(0.0, 0.0)
        }
    } else if j <= -1 {
        b * c.powi(-(j as i32) - 1)
    } else {
        c64(0.0, 0.0)
    }
}

/// Exact Fourier coefficients of the jump symbol `g`:
/// `g_0 = 0`, even coefficients vanish, and for odd `j`
/// `g_j = 2 (-1)^{(|j|-1)/2} / (pi |j|)`, with `g_{-j} = g_j`.
pub fn jump_g_coeff(j: i64) -> Complex64 {
    let a = j.unsigned_abs() as i64;
    if a % 2 == 0 {
        return c64(0.0, 0.0);
    }
    let sign = if ((a - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    c64(2.0 * sign / (std::f64::consts::PI * a as f64), 0.0)
}

/// Truncated two-sided Fourier series.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    /// Index of the first stored coefficient.
    pub j_min: i64,
    /// Coefficients for `j_min ..= j_min + coeffs.len() - 1`.
    pub coeffs: Vec<Complex64>,
    /// Estimate of the largest discarded coefficient modulus
    /// (0 for exact closed forms).
    pub tail_bound: f64,
}

impl FourierSeries {
    /// Coefficient at index `j` (0 outside the stored window).
    pub fn get(&self, j: i64) -> Complex64 {
        let idx = j - self.j_min;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            c64(0.0, 0.0)
        } else {
            self.coeffs[idx as usize]
        }
    }

    /// Largest stored index.
    pub fn j_max(&self) -> i64 {
        self.j_min + self.coeffs.len() as i64 - 1
    }
}

/// Fourier coefficients of `symbol` over `range = [j_min, j_max]`.
///
/// Rational/jump kinds (and shifts, reflections, scalings and sums of
/// them) use exact closed forms; everything else uses trapezoid/FFT
/// sampling with node doubling until the estimated tail (max coefficient
/// modulus in the discarded band) drops below `tol`.
pub fn fourier_coeffs(symbol: &Symbol, range: (i64, i64), tol: f64) -> Result<FourierSeries> {
    let (j_min, j_max) = range;
    if j_max < j_min {
        return Err(Error::Index(format!("empty coefficient range [{j_min}, {j_max}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::Parameter("fourier_coeffs requires tol > 0".into()));
    }
    if symbol.has_closed_coeffs() {
        let coeffs = (j_min..=j_max).map(|j| symbol.closed_coeff(j).unwrap()).collect();
        return Ok(FourierSeries { j_min, coeffs, tail_bound: 0.0 });
    }
    let width = (j_max.abs().max(j_min.abs()) as usize + 1).next_power_of_two();
    let mut n = (4 * width).max(256);
    let mut last_tail = f64::INFINITY;
    let mut planner = FftPlanner::<f64>::new();
    while n <= NODE_CAP {
        let mut buf: Vec<rustfft::num_complex::Complex<f64>> = (0..n)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                symbol.eval(Complex64::from_polar(1.0, theta))
            })
            .collect();
        let fft = planner.plan_fft_forward(n);
        fft.process(&mut buf);
        // buf[j] = sum_k phi(w^k) w^{-jk} = n * c_j (indices mod n).
        let coeff = |j: i64| -> Complex64 {
            let idx = j.rem_euclid(n as i64) as usize;
            buf[idx] / n as f64
        };
        // Tail: largest coefficient modulus in the outer half-band.
        let band_lo = (n / 4) as i64;
        let band_hi = (n / 2) as i64;
        let mut tail = 0.0f64;
        for j in band_lo..=band_hi {
            tail = tail.max(coeff(j).norm());
            tail = tail.max(coeff(-j).norm());
        }
        last_tail = tail;
        if tail < tol && n as i64 / 4 > j_max.abs().max(j_min.abs()) {
            let coeffs = (j_min..=j_max).map(coeff).collect();
            return Ok(FourierSeries { j_min, coeffs, tail_bound: tail });
        }
        n *= 2;
    }
    Err(Error::Accuracy { context: "fourier_coeffs node cap reached".into(), estimate: last_tail })
}

/// Winding number of the symbol around the origin.
///
/// Refines a uniform grid until all neighbor phase increments are below
/// `pi/2`, then sums the increments and divides by `2 pi`.
pub fn winding_number(symbol: &Symbol) -> Result<i64> {
    let mut n = 256usize;
    while n <= NODE_CAP {
        let vals: Vec<Complex64> = (0..n)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                symbol.eval(Complex64::from_polar(1.0, theta))
            })
            .collect();
        let max_mod = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if vals.iter().any(|v| v.norm() < 1e-12 * max_mod) {
            return Err(Error::SingularSymbol(
                "symbol vanishes (or nearly vanishes) on the unit circle".into(),
            ));
        }
        let mut total = 0.0f64;
        let mut ok = true;
        for k in 0..n {
            let a = vals[k];
            let b = vals[(k + 1) % n];
            let inc = (b / a).arg();
            if inc.abs() >= std::f64::consts::FRAC_PI_2 {
                ok = false;
                break;
            }
            total += inc;
        }
        if ok {
            return Ok((total / (2.0 * std::f64::consts::PI)).round() as i64);
        }
        n *= 2;
    }
    Err(Error::Accuracy { context: "winding_number grid cap reached".into(), estimate: f64::NAN })
}

/// Log-symbol spectral data: `[log phi]_k`, the constants `G`/`E`, the
/// Szego function series, and the Wiener-Hopf factors.
///
/// Conventions: `phi_plus = exp(sum_{k>=1} L_k z^k)` and
/// `phi_minus = exp(sum_{k<=-1} L_k z^k)`, so `phi = G * phi_minus * phi_plus`
/// with `[phi_plus]_0 = [phi_minus]_0 = 1`.
#[derive(Debug, Clone)]
pub struct LogSymbolData {
    /// `[log phi]_k` for `|k| <= trunc`.
    pub log_coeffs: FourierSeries,
    /// Truncation order.
    pub trunc: usize,
    /// `G = exp([log phi]_0)`.
    pub g: Complex64,
    /// `E = exp(sum_{k>=1} k [log phi]_k [log phi]_{-k})`.
    pub e: Complex64,
    /// Taylor coefficients of `alpha` inside the disk:
    /// `alpha(z) = exp(sum_{k>=0} L_k z^k)`, coefficients of `z^k`.
    pub alpha_inside: Vec<Complex64>,
    /// Coefficients (in `1/z`) of `alpha` outside the disk:
    /// `alpha(z) = exp(-sum_{k>=1} L_{-k} z^{-k})`.
    pub alpha_outside: Vec<Complex64>,
    /// Taylor coefficients (in `z`) of `phi_plus`.
    pub phi_plus: Vec<Complex64>,
    /// Coefficients (in `1/z`) of `phi_minus`.
    pub phi_minus: Vec<Complex64>,
}

/// Exponential of a truncated power series `a_0 + a_1 x + ...`:
/// `b_0 = exp(a_0)`, `n b_n = sum_{k=1..n} k a_k b_{n-k}`.
pub fn series_exp(a: &[Complex64], order: usize) -> Vec<Complex64> {
    let mut b = vec![c64(0.0, 0.0); order + 1];
    b[0] = a.first().copied().unwrap_or_else(|| c64(0.0, 0.0)).exp();
    for n in 1..=order {
        let mut acc = c64(0.0, 0.0);
        for k in 1..=n {
            let ak = if k < a.len() { a[k] } else { c64(0.0, 0.0) };
            acc += ak * (k as f64) * b[n - k];
        }
        b[n] = acc / n as f64;
    }
    b
}

/// Evaluate a truncated power series by Horner's rule.
pub fn eval_series(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    let mut acc = c64(0.0, 0.0);
    for &ck in coeffs.iter().rev() {
        acc = acc * x + ck;
    }
    acc
}

/// Compute [`LogSymbolData`] for a nonvanishing, winding-zero symbol.
///
/// The logarithm branch is fixed by phase-unwrapping along the discretized
/// circle with the principal value anchored at `z = 1`.
pub fn szego_data(symbol: &Symbol, trunc: usize) -> Result<LogSymbolData> {
    let w = winding_number(symbol)?;
    if w != 0 {
        return Err(Error::Winding(w));
    }
    let mut n = (8 * trunc.next_power_of_two()).max(512);
    let mut planner = FftPlanner::<f64>::new();
    let tol = 1e-13;
    let mut last_tail = f64::INFINITY;
    while n <= NODE_CAP {
        // Continuous log along the circle, anchored at principal value at z=1.
        let vals: Vec<Complex64> = (0..n)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                symbol.eval(Complex64::from_polar(1.0, theta))
            })
            .collect();
        let mut logs = Vec::with_capacity(n);
        let mut prev_phase = vals[0].arg();
        for (k, v) in vals.iter().enumerate() {
            let raw = v.arg();
            let mut ph = raw;
            if k > 0 {
                // Unwrap: keep increments in (-pi, pi).
                let mut diff = ph - prev_phase;
                while diff > std::f64::consts::PI {
                    diff -= 2.0 * std::f64::consts::PI;
                }
                while diff < -std::f64::consts::PI {
                    diff += 2.0 * std::f64::consts::PI;
                }
                ph = prev_phase + diff;
            }
            prev_phase = ph;
            logs.push(c64(v.norm().ln(), ph));
        }
        let mut buf: Vec<rustfft::num_complex::Complex<f64>> = logs;
        let fft = planner.plan_fft_forward(n);
        fft.process(&mut buf);
        let coeff = |j: i64| -> Complex64 {
            let idx = j.rem_euclid(n as i64) as usize;
            buf[idx] / n as f64
        };
        let band_lo = (n / 4) as i64;
        let band_hi = (n / 2) as i64;
        let mut tail = 0.0f64;
        for j in band_lo..=band_hi {
            tail = tail.max(coeff(j).norm()).max(coeff(-j).norm());
        }
        last_tail = tail;
        if tail < tol && n / 4 > trunc {
            let t = trunc as i64;
            let coeffs: Vec<Complex64> = (-t..=t).map(coeff).collect();
            let log_coeffs = FourierSeries { j_min: -t, coeffs, tail_bound: tail };
            return assemble_log_data(log_coeffs, trunc);
        }
        n *= 2;
    }
    Err(Error::Accuracy { context: "szego_data node cap reached".into(), estimate: last_tail })
}

fn assemble_log_data(log_coeffs: FourierSeries, trunc: usize) -> Result<LogSymbolData> {
    let lk = |k: i64| log_coeffs.get(k);
    let g = lk(0).exp();
    let mut e_exponent = c64(0.0, 0.0);
    for k in 1..=trunc as i64 {
        e_exponent += (k as f64) * lk(k) * lk(-k);
    }
    // The E-series must have decayed by the truncation order.
    let last_term = (trunc as f64) * lk(trunc as i64).norm() * lk(-(trunc as i64)).norm();
    if last_term > 1e-10 * (1.0 + e_exponent.norm()) {
        return Err(Error::Accuracy {
            context: format!("E-series not decayed at truncation order {trunc}"),
            estimate: last_term,
        });
    }
    let e = e_exponent.exp();
    // alpha inside: exp(sum_{k>=0} L_k z^k).
    let a_in: Vec<Complex64> = (0..=trunc as i64).map(lk).collect();
    let alpha_inside = series_exp(&a_in, trunc);
    // alpha outside: exp(-sum_{k>=1} L_{-k} w^k), w = 1/z.
    let mut a_out = vec![c64(0.0, 0.0); trunc + 1];
    for k in 1..=trunc as i64 {
        a_out[k as usize] = -lk(-k);
    }
    let alpha_outside = series_exp(&a_out, trunc);
    // phi_plus: exp(sum_{k>=1} L_k z^k).
    let mut a_plus = vec![c64(0.0, 0.0); trunc + 1];
    for k in 1..=trunc as i64 {
        a_plus[k as usize] = lk(k);
    }
    let phi_plus = series_exp(&a_plus, trunc);
    // phi_minus: exp(sum_{k>=1} L_{-k} w^k), w = 1/z.
    let mut a_minus = vec![c64(0.0, 0.0); trunc + 1];
    for k in 1..=trunc as i64 {
        a_minus[k as usize] = lk(-k);
    }
    let phi_minus = series_exp(&a_minus, trunc);
    Ok(LogSymbolData { log_coeffs, trunc, g, e, alpha_inside, alpha_outside, phi_plus, phi_minus })
}

/// Evaluate the Szego function `alpha` at a point off the unit circle.
pub fn eval_alpha(data: &LogSymbolData, z: Complex64) -> Result<Complex64> {
    let r = z.norm();
    if (r - 1.0).abs() < 1e-12 {
        return Err(Error::Boundary);
    }
    if r < 1.0 {
        Ok(eval_series(&data.alpha_inside, z))
    } else {
        Ok(eval_series(&data.alpha_outside, 1.0 / z))
    }
}

/// `l`-th Taylor coefficient of `alpha` at 0, i.e. `alpha^(l)(0) / l!`.
pub fn alpha_taylor_at_zero(data: &LogSymbolData, l: usize) -> Result<Complex64> {
    if l > data.trunc {
        return Err(Error::Range { idx: l, max: data.trunc });
    }
    Ok(data.alpha_inside[l])
}

/// Evaluate the Wiener-Hopf factor `phi_minus` (series in `1/z`,
/// convergent for `|z| >= 1` given geometric decay of the log coefficients).
pub fn eval_phi_minus(data: &LogSymbolData, z: Complex64) -> Complex64 {
    eval_series(&data.phi_minus, 1.0 / z)
}

/// Evaluate the Wiener-Hopf factor `phi_plus` (series in `z`).
pub fn eval_phi_plus(data: &LogSymbolData, z: Complex64) -> Complex64 {
    eval_series(&data.phi_plus, z)
}

fn param_complex(params: &serde_json::Value, re_key: &str, im_key: &str) -> Complex64 {
    c64(
        params.get(re_key).and_then(|v| v.as_f64()).unwrap_or(0.0),
        params.get(im_key).and_then(|v| v.as_f64()).unwrap_or(0.0),
    )
}

/// Construct a symbol from a named family and JSON parameters.
///
/// Families:
/// - `"constant"`: `{"re": x, "im": y}` (or a bare number).
/// - `"exp-laurent"`: `{"t": 0.3}` for `exp(t(z + 1/z))`, or
///   `{"terms": [{"k": 1, "re": 0.3, "im": 0.0}, ...]}`.
/// - `"rational"`: `{"terms": [{"kind": "const"|"power"|"pole"|"pole-z", ...}]}`.
/// - `"ising-diagonal"`: `{"k": 3.0}` with `k > 1`.
/// - `"jump-g"`: `{}`.
///
/// Any family accepts an optional integer `"shift"` (multiply by `z^m`).
pub fn make_family(name: &str, params: &serde_json::Value) -> Result<Symbol> {
    let base = match name {
        "constant" => {
            let v = if let Some(x) = params.as_f64() {
                c64(x, 0.0)
            } else {
                param_complex(params, "re", "im")
            };
            Symbol::constant(v)
        }
        "exp-laurent" => {
            if let Some(t) = params.get("t").and_then(|v| v.as_f64()) {
                Symbol::exp_laurent(vec![(1, c64(t, 0.0)), (-1, c64(t, 0.0))])
            } else if let Some(terms) = params.get("terms").and_then(|v| v.as_array()) {
                let mut out = vec![];
                for t in terms {
                    let k = t
                        .get("k")
                        .and_then(|v| v.as_i64())
                        .ok_or_else(|| Error::Parameter("exp-laurent term missing integer k".into()))?;
                    out.push((k, param_complex(t, "re", "im")));
                }
                Symbol::exp_laurent(out)
            } else {
                return Err(Error::Parameter("exp-laurent needs \"t\" or \"terms\"".into()));
            }
        }
        "rational" => {
            let terms = params
                .get("terms")
                .and_then(|v| v.as_array())
                .ok_or_else(|| Error::Parameter("rational needs \"terms\" array".into()))?;
            let mut out = vec![];
            for t in terms {
                let kind = t.get("kind").and_then(|v| v.as_str()).unwrap_or("const");
                out.push(match kind {
                    "const" => RatTerm::Const(param_complex(t, "re", "im")),
                    "power" => RatTerm::Power(
                        t.get("m")
                            .and_then(|v| v.as_i64())
                            .ok_or_else(|| Error::Parameter("power term missing m".into()))?,
                    ),
                    "pole" => RatTerm::Pole {
                        b: param_complex(t, "b_re", "b_im"),
                        c: param_complex(t, "c_re", "c_im"),
                    },
                    "pole-z" => RatTerm::PoleZ {
                        b: param_complex(t, "b_re", "b_im"),
                        c: param_complex(t, "c_re", "c_im"),
                    },
                    other => return Err(Error::Parameter(format!("unknown rational term kind {other:?}"))),
                });
            }
            Symbol::rational(out)?
        }
        "ising-diagonal" => {
            let k = params
                .get("k")
                .and_then(|v| v.as_f64())
                .ok_or_else(|| Error::Parameter("ising-diagonal needs numeric k".into()))?;
            Symbol::ising_diagonal(k)?
        }
        "jump-g" => Symbol::jump_g(),
        other => return Err(Error::Parameter(format!("unknown symbol family {other:?}"))),
    };
    Ok(match params.get("shift").and_then(|v| v.as_i64()) {
        Some(m) if m != 0 => Symbol::shift(m, base),
        _ => base,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pole_at_two_coefficients() {
        // 1/(z-2) has coefficients -1/2, -1/4, -1/8, -1/16 at j = 0..3.
        let s = Symbol::rational(vec![RatTerm::Pole { b: c64(1.0, 0.0), c: c64(2.0, 0.0) }]).unwrap();
        let fs = fourier_coeffs(&s, (0, 3), 1e-12).unwrap();
        let expected = [-0.5, -0.25, -0.125, -0.0625];
        for (j, e) in expected.iter().enumerate() {
            assert!((fs.get(j as i64) - c64(*e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn jump_g_first_coefficients() {
        assert!((jump_g_coeff(0)).norm() == 0.0);
        assert!((jump_g_coeff(2)).norm() == 0.0);
        assert!((jump_g_coeff(1) - c64(2.0 / std::f64::consts::PI, 0.0)).norm() < 1e-15);
        assert!((jump_g_coeff(3) + c64(2.0 / (3.0 * std::f64::consts::PI), 0.0)).norm() < 1e-15);
        assert!((jump_g_coeff(-5) - jump_g_coeff(5)).norm() == 0.0);
    }

    #[test]
    fn series_exp_matches_exp() {
        // exp(0.3 z) coefficients are 0.3^n / n!.
        let a = vec![c64(0.0, 0.0), c64(0.3, 0.0)];
        let b = series_exp(&a, 6);
        let mut fact = 1.0;
        for (n, bn) in b.iter().enumerate() {
            if n > 0 {
                fact *= n as f64;
            }
            assert!((bn - c64(0.3f64.powi(n as i32) / fact, 0.0)).norm() < 1e-15);
        }
    }
}
