//! Reporting harness: identity suites, convergence sweeps, and
//! benchmarks over a JSON-configurable grid, with CSV/JSON reports.

use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bopuc::{lu_factorization_residual, recurrence_residuals, semiframed_via_kernel, BopucSystem};
use crate::dci::{dodgson_residual, reduce_two_bordered};
use crate::error::{Error, Result};
use crate::linalg::{det_log, CMatrix};
use crate::rhp::{semiframed_via_x, z_three_way_residual};
use crate::structmat::{build_matrix, SemiFramedVariant, StructuredDetSpec};
use crate::symbols::{make_family, szego_data, Symbol};
use crate::szego::{constant_f, constant_j1, predict_pure, predict_semiframed, BorderSpec, RationalFrame};

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A symbol described by family name and JSON parameters
/// (see [`crate::symbols::make_family`]).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymbolSpec {
    pub family: String,
    #[serde(default)]
    pub params: serde_json::Value,
}

impl SymbolSpec {
    pub fn build(&self) -> Result<Symbol> {
        make_family(&self.family, &self.params)
    }
}

/// Report format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

impl Default for ReportFormat {
    fn default() -> Self {
        ReportFormat::Csv
    }
}

fn default_tol() -> f64 {
    1e-8
}

fn default_nodes() -> usize {
    256
}

/// Configuration of one sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Bulk symbol.
    pub symbol: SymbolSpec,
    /// Border/frame symbols (meaning depends on `kind`).
    #[serde(default)]
    pub borders: Vec<SymbolSpec>,
    /// Determinant kind: `pure`, `bordered`, `two-bordered`,
    /// `semi-framed-e|g|h|l`.
    pub kind: String,
    /// n-grid start (inclusive).
    pub n_start: usize,
    /// n-grid stop (inclusive).
    pub n_stop: usize,
    /// n-grid step.
    #[serde(default = "one")]
    pub n_step: usize,
    /// Pass/fail tolerance for residuals and relative errors.
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Quadrature node count for kernel-route cross-checks.
    #[serde(default = "default_nodes")]
    pub quadrature_nodes: usize,
    /// Output path (stdout when absent).
    #[serde(default)]
    pub out: Option<String>,
    /// Report format.
    #[serde(default)]
    pub format: ReportFormat,
    /// Seed for randomized checks; recorded in the report.
    #[serde(default)]
    pub seed: u64,
    /// Structured border parameters for asymptotic predictions
    /// (`bordered` / `two-bordered` kinds).
    #[serde(default)]
    pub border_params: Vec<BorderSpec>,
    /// Rational frame pair for semi-framed asymptotic predictions.
    #[serde(default)]
    pub frames: Option<(RationalFrame, RationalFrame)>,
    /// Corner value for semi-framed kinds.
    #[serde(default)]
    pub corner: Option<(f64, f64)>,
}

fn one() -> usize {
    1
}

impl SweepConfig {
    /// Minimum admissible size of this config's determinant kind.
    pub fn kind_minimum(&self) -> Result<usize> {
        Ok(match self.kind.as_str() {
            "pure" => 1,
            "bordered" => 2,
            "two-bordered" => 3,
            "semi-framed-e" | "semi-framed-g" | "semi-framed-h" | "semi-framed-l" => 2,
            other => return Err(Error::Config(format!("unknown determinant kind {other:?}"))),
        })
    }

    /// Validate grid and kind; build the symbol to surface spec errors.
    pub fn validate(&self) -> Result<()> {
        let min = self.kind_minimum()?;
        if self.n_step == 0 {
            return Err(Error::Config("n_step must be positive".into()));
        }
        if self.n_stop < self.n_start {
            return Err(Error::Config(format!(
                "empty n-grid: n_start {} > n_stop {}",
                self.n_start, self.n_stop
            )));
        }
        if self.n_start < min {
            return Err(Error::Config(format!(
                "n_start {} below minimum {} for kind {}",
                self.n_start, min, self.kind
            )));
        }
        self.symbol.build()?;
        for b in &self.borders {
            b.build()?;
        }
        Ok(())
    }

    /// The n-grid.
    pub fn grid(&self) -> Vec<usize> {
        (self.n_start..=self.n_stop).step_by(self.n_step).collect()
    }

    /// Semi-framed variant for `semi-framed-*` kinds.
    pub fn semi_framed_variant(&self) -> Option<SemiFramedVariant> {
        match self.kind.as_str() {
            "semi-framed-e" => Some(SemiFramedVariant::E),
            "semi-framed-g" => Some(SemiFramedVariant::G),
            "semi-framed-h" => Some(SemiFramedVariant::H),
            "semi-framed-l" => Some(SemiFramedVariant::L),
            _ => None,
        }
    }

    fn corner_value(&self) -> Complex64 {
        self.corner.map(|(re, im)| c64(re, im)).unwrap_or_else(|| c64(1.0, 0.0))
    }
}

/// Outcome of one identity check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// A stated theorem precondition does not hold for this input, so
    /// the identity is inapplicable rather than violated.
    PreconditionSkipped,
}

/// One line of an identity-suite report.
#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub n: usize,
    pub status: CheckStatus,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Aggregate of an identity suite run.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteSummary {
    pub seed: u64,
    pub tol: f64,
    pub lines: Vec<CheckLine>,
}

impl SuiteSummary {
    pub fn all_pass(&self) -> bool {
        self.lines.iter().all(|l| l.status != CheckStatus::Fail)
    }

    /// Process exit code: 0 all-pass, 1 tolerance failure.
    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    /// Human-readable rendering, one line per check.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            let status = match l.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "FAIL",
                CheckStatus::PreconditionSkipped => "precondition-skipped",
            };
            out.push_str(&format!(
                "{:<44} n={:<3} {:<21} residual={:.3e}{}\n",
                l.name,
                l.n,
                status,
                l.residual,
                l.note.as_deref().map(|s| format!("  ({s})")).unwrap_or_default()
            ));
        }
        out
    }
}

/// Run the identity suite: condensation reductions, the three-way
/// construction of the shifted-weight matrix function, semi-framed
/// kernel representations, recurrences, and the triangular
/// factorization, over the configured grid.
pub fn run_identity_suite(config: &SweepConfig) -> Result<SuiteSummary> {
    config.validate()?;
    let phi = config.symbol.build()?;
    let tol = config.tol;
    let mut lines: Vec<CheckLine> = vec![];
    fn push_line(lines: &mut Vec<CheckLine>, tol: f64, name: &str, n: usize, residual: f64) {
        let status = if residual < tol { CheckStatus::Pass } else { CheckStatus::Fail };
        lines.push(CheckLine { name: name.into(), n, status, residual, note: None });
    }

    // Seeded random-matrix condensation checks.
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..4 {
        let n = rng.gen_range(4..=8);
        let m = CMatrix::from_fn(n, n, |_, _| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let j2 = rng.gen_range(1..n);
        let j1 = rng.gen_range(0..j2);
        let k2 = rng.gen_range(1..n);
        let k1 = rng.gen_range(0..k2);
        let rep = dodgson_residual(&m, j1, j2, k1, k2)?;
        push_line(&mut lines, tol, "condensation identity (random matrix)", n, rep.residual);
    }

    // Borders: use configured ones, else defaults.
    let default_border = |pole: f64| -> Result<Symbol> {
        Symbol::rational(vec![crate::symbols::RatTerm::Pole { b: c64(1.0, 0.0), c: c64(pole, 0.0) }])
    };
    let psi1 = match config.borders.first() {
        Some(s) => s.build()?,
        None => default_border(2.0)?,
    };
    let psi2 = match config.borders.get(1) {
        Some(s) => s.build()?,
        None => default_border(0.5)?,
    };

    for &n in &config.grid() {
        if n >= 3 {
            let red = reduce_two_bordered(&phi, &psi1, &psi2, n)?;
            push_line(&mut lines, tol, "two-bordered condensation reduction", n, red.residual);
        }
        if n >= 2 {
            // Three-way construction of the shifted-weight problem.
            match z_three_way_residual(&phi, n, c64(0.35, 0.2)) {
                Ok(res) => push_line(&mut lines, tol, "shifted-weight three-way construction", n, res),
                Err(Error::Precondition(msg)) => lines.push(CheckLine {
                    name: "shifted-weight three-way construction".into(),
                    n,
                    status: CheckStatus::PreconditionSkipped,
                    residual: 0.0,
                    note: Some(msg),
                }),
                Err(e) => return Err(e),
            }
            // Semi-framed kernel representation, one variant per n to
            // keep the default suite fast.
            let variant = match n % 4 {
                0 => SemiFramedVariant::E,
                1 => SemiFramedVariant::G,
                2 => SemiFramedVariant::H,
                _ => SemiFramedVariant::L,
            };
            let a = config.corner_value();
            let rep = semiframed_via_kernel(variant, &phi, &psi1, &psi2, a, n)?;
            push_line(&mut lines, tol, "semi-framed kernel representation", n, rep.residual);
            let rep_x = semiframed_via_x(variant, &phi, &psi1, &psi2, a, n)?;
            push_line(&mut lines, tol, "semi-framed matrix-function representation", n, rep_x.residual);
        }
    }

    // Recurrences and triangular factorization at the grid top.
    let top = config.n_stop.min(12);
    if top >= 2 {
        let sys = BopucSystem::new(&phi, top)?;
        for n in 0..top {
            let res = recurrence_residuals(&sys, n, c64(0.6, -0.3))?;
            let worst = res.iter().cloned().fold(0.0, f64::max);
            push_line(&mut lines, tol, "recurrence relations", n, worst);
        }
        let lu = lu_factorization_residual(&sys, top - 1)?;
        push_line(&mut lines, tol, "triangular factorization of the moment matrix", top - 1, lu);
    }

    Ok(SuiteSummary { seed: config.seed, tol: config.tol, lines })
}

/// One row of a convergence report.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub value: Complex64,
    pub predicted_constant: Complex64,
    pub rel_err: f64,
}

/// Convergence report of a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slope of `ln rel_err` against `n`, over rows above
    /// the numerical floor; absent with fewer than 4 usable rows.
    pub fitted_decay: Option<f64>,
    pub pass: bool,
}

/// Numerical floor below which errors are considered converged noise.
pub const ERROR_FLOOR: f64 = 1e-13;

fn fit_decay(rows: &[ConvergenceRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.rel_err > ERROR_FLOOR)
        .map(|r| (r.n as f64, r.rel_err.ln()))
        .collect();
    if pts.len() < 4 {
        return None;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return None;
    }
    Some((n * sxy - sx * sy) / denom)
}

/// Run a convergence sweep: exact structured determinant divided by the
/// pure-Toeplitz leading order, against the predicted limit constant.
pub fn run_convergence(config: &SweepConfig) -> Result<ConvergenceReport> {
    config.validate()?;
    let phi = config.symbol.build()?;
    let data = szego_data(&phi, 64)?;
    let mut rows = vec![];
    for &n in &config.grid() {
        let (value, predicted) = match config.kind.as_str() {
            "pure" => {
                let d = det_log(&build_matrix(&StructuredDetSpec::pure(phi.clone(), n))?)?;
                (d.div(predict_pure(&data, n)).to_complex(), c64(1.0, 0.0))
            }
            "bordered" => {
                let spec = config
                    .border_params
                    .first()
                    .ok_or_else(|| Error::Config("bordered sweep needs border_params".into()))?;
                let psi = spec.to_symbol(&phi)?;
                let d = det_log(&build_matrix(&StructuredDetSpec::multi_bordered(
                    phi.clone(),
                    vec![psi],
                    n,
                ))?)?;
                (d.div(predict_pure(&data, n)).to_complex(), constant_f(spec, &data)?)
            }
            "two-bordered" => {
                if config.border_params.len() < 2 {
                    return Err(Error::Config("two-bordered sweep needs two border_params".into()));
                }
                let s1 = &config.border_params[0];
                let s2 = &config.border_params[1];
                let d = det_log(&build_matrix(&StructuredDetSpec::multi_bordered(
                    phi.clone(),
                    vec![s1.to_symbol(&phi)?, s2.to_symbol(&phi)?],
                    n,
                ))?)?;
                (d.div(predict_pure(&data, n)).to_complex(), constant_j1(s1, s2, &data)?)
            }
            _ => {
                let variant = config
                    .semi_framed_variant()
                    .ok_or_else(|| Error::Config(format!("unknown determinant kind {:?}", config.kind)))?;
                let (pf, ef) = config
                    .frames
                    .as_ref()
                    .ok_or_else(|| Error::Config("semi-framed sweep needs frames".into()))?;
                let a = config.corner_value();
                let spec = StructuredDetSpec::semi_framed(
                    variant,
                    phi.clone(),
                    pf.to_symbol(&phi)?,
                    ef.to_symbol(&phi)?,
                    a,
                    n,
                );
                let d = det_log(&build_matrix(&spec)?)?;
                // size n semi-framed over bulk of size n-1: leading order G^{n-1} E
                let value = d.div(predict_pure(&data, n - 1)).to_complex();
                (value, predict_semiframed(variant, pf, ef, a, &data)?)
            }
        };
        let scale = predicted.norm().max(1.0);
        rows.push(ConvergenceRow { n, value, predicted_constant: predicted, rel_err: (value - predicted).norm() / scale });
    }
    let fitted_decay = fit_decay(&rows);
    let pass = rows.last().map(|r| r.rel_err < config.tol).unwrap_or(false);
    Ok(ConvergenceReport { rows, fitted_decay, pass })
}

/// One benchmark row (seconds).
#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub direct_det_s: f64,
    pub reduction_route_s: f64,
    pub asymptotic_s: f64,
}

/// Time (i) the direct log-determinant, (ii) the condensation-reduction
/// route for a two-bordered determinant, (iii) asymptotic-constant
/// evaluation, per grid point.
pub fn run_bench(config: &SweepConfig) -> Result<Vec<BenchRow>> {
    config.validate()?;
    let phi = config.symbol.build()?;
    let psi1 = Symbol::rational(vec![crate::symbols::RatTerm::Pole { b: c64(1.0, 0.0), c: c64(2.0, 0.0) }])?;
    let psi2 = Symbol::rational(vec![crate::symbols::RatTerm::Pole { b: c64(1.0, 0.0), c: c64(0.5, 0.0) }])?;
    let data = szego_data(&phi, 64)?;
    let spec = BorderSpec::weight_itself();
    let mut out = vec![];
    for &n in &config.grid() {
        let t0 = Instant::now();
        let _ = det_log(&build_matrix(&StructuredDetSpec::pure(phi.clone(), n))?)?;
        let direct = t0.elapsed().as_secs_f64();
        let t1 = Instant::now();
        let reduction = if n >= 3 && n <= 64 {
            let _ = reduce_two_bordered(&phi, &psi1, &psi2, n)?;
            t1.elapsed().as_secs_f64()
        } else {
            f64::NAN
        };
        let t2 = Instant::now();
        let _ = predict_pure(&data, n);
        let _ = constant_f(&spec, &data)?;
        let asymptotic = t2.elapsed().as_secs_f64();
        out.push(BenchRow { n, direct_det_s: direct, reduction_route_s: reduction, asymptotic_s: asymptotic });
    }
    Ok(out)
}

/// Format a float with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV rendering of a convergence report with the canonical header.
pub fn convergence_csv(report: &ConvergenceReport) -> String {
    let mut s = String::from("n,value_re,value_im,pred_re,pred_im,rel_err\n");
    for r in &report.rows {
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.n,
            fmt17(r.value.re),
            fmt17(r.value.im),
            fmt17(r.predicted_constant.re),
            fmt17(r.predicted_constant.im),
            fmt17(r.rel_err)
        ));
    }
    s
}
