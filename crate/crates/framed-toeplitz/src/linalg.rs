//! Overflow-safe dense complex linear algebra.
//!
//! Determinants of Toeplitz-type matrices grow or decay like `G^n`, which
//! overflows `f64` long before the matrices become large.  All determinant
//! values are therefore carried as [`LogComplex`]: a (log-modulus, phase)
//! pair with an explicit exact-zero flag.  The matrices themselves stay in
//! ordinary `Complex64` (entries are Fourier coefficients of bounded
//! symbols, so they do not overflow).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative pivot threshold below which a determinant is declared exactly
/// zero (needed for structurally singular cases such as `D_n[z] = 0`).
pub const PIVOT_UNDERFLOW_REL: f64 = 1e-30;

/// A nonzero complex value stored as `exp(log_modulus + i*phase)`, plus an
/// exact-zero flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogComplex {
    /// Natural log of the modulus (`f64::NEG_INFINITY` when `is_zero`).
    pub log_modulus: f64,
    /// Phase, normalized to `(-pi, pi]`.
    pub phase: f64,
    /// True when the value is exactly zero.
    pub is_zero: bool,
}

impl LogComplex {
    /// The exact zero value.
    pub fn zero() -> Self {
        LogComplex { log_modulus: f64::NEG_INFINITY, phase: 0.0, is_zero: true }
    }

    /// The value one.
    pub fn one() -> Self {
        LogComplex { log_modulus: 0.0, phase: 0.0, is_zero: false }
    }

    /// Convert from a `Complex64`.  Exact zero maps to [`LogComplex::zero`].
    pub fn from_complex(v: Complex64) -> Self {
        if v.norm() == 0.0 {
            return Self::zero();
        }
        LogComplex { log_modulus: v.norm().ln(), phase: v.arg(), is_zero: false }
    }

    /// Build directly from a log-modulus and phase.
    pub fn from_polar_log(log_modulus: f64, phase: f64) -> Self {
        LogComplex { log_modulus, phase: normalize_phase(phase), is_zero: false }
    }

    /// Convert back to a `Complex64`.  Overflows to infinity if the
    /// log-modulus exceeds the `f64` range; callers working at scale
    /// should use [`LogComplex::rescaled`] first.
    pub fn to_complex(self) -> Complex64 {
        if self.is_zero {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.log_modulus.exp(), self.phase)
    }

    /// `self * exp(-shift)` as a complex number: evaluate at a shifted
    /// scale so that ratios/residuals can be formed without overflow.
    pub fn rescaled(self, shift: f64) -> Complex64 {
        if self.is_zero {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar((self.log_modulus - shift).exp(), self.phase)
    }

    /// Product of two log-scale values.
    pub fn mul(self, other: Self) -> Self {
        if self.is_zero || other.is_zero {
            return Self::zero();
        }
        LogComplex {
            log_modulus: self.log_modulus + other.log_modulus,
            phase: normalize_phase(self.phase + other.phase),
            is_zero: false,
        }
    }

    /// Quotient of two log-scale values (caller must ensure divisor nonzero).
    pub fn div(self, other: Self) -> Self {
        if self.is_zero {
            return Self::zero();
        }
        LogComplex {
            log_modulus: self.log_modulus - other.log_modulus,
            phase: normalize_phase(self.phase - other.phase),
            is_zero: false,
        }
    }

    /// Multiply by a plain complex value.
    pub fn mul_complex(self, v: Complex64) -> Self {
        self.mul(Self::from_complex(v))
    }
}

/// Reduce a phase to `(-pi, pi]`.
pub fn normalize_phase(mut p: f64) -> f64 {
    use std::f64::consts::PI;
    while p > PI {
        p -= 2.0 * PI;
    }
    while p <= -PI {
        p += 2.0 * PI;
    }
    p
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    pub nrows: usize,
    pub ncols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    /// All-zero matrix.
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        CMatrix { nrows, ncols, data: vec![Complex64::new(0.0, 0.0); nrows * ncols] }
    }

    /// Identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build from a closure over (row, col).
    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(nrows, ncols);
        for j in 0..nrows {
            for k in 0..ncols {
                m[(j, k)] = f(j, k);
            }
        }
        m
    }

    /// Build from nested rows (rows must have equal lengths).
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        Self::from_fn(nrows, ncols, |j, k| rows[j][k])
    }

    /// Matrix product.
    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.ncols, other.nrows, "matmul shape mismatch");
        let mut out = CMatrix::zeros(self.nrows, other.ncols);
        for j in 0..self.nrows {
            for l in 0..self.ncols {
                let a = self[(j, l)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for k in 0..other.ncols {
                    out[(j, k)] += a * other[(l, k)];
                }
            }
        }
        out
    }

    /// Transposed copy.
    pub fn transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.ncols, self.nrows, |j, k| self[(k, j)])
    }

    /// Maximum entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Copy with the listed rows and columns removed.  Index lists must be
    /// strictly increasing, in range, and of equal length (minor notation).
    pub fn minor(&self, removed_rows: &[usize], removed_cols: &[usize]) -> Result<CMatrix> {
        check_index_list(removed_rows, self.nrows)?;
        check_index_list(removed_cols, self.ncols)?;
        if removed_rows.len() != removed_cols.len() {
            return Err(Error::Index("row and column removal lists differ in length".into()));
        }
        let keep_rows: Vec<usize> = (0..self.nrows).filter(|j| !removed_rows.contains(j)).collect();
        let keep_cols: Vec<usize> = (0..self.ncols).filter(|k| !removed_cols.contains(k)).collect();
        Ok(CMatrix::from_fn(keep_rows.len(), keep_cols.len(), |j, k| {
            self[(keep_rows[j], keep_cols[k])]
        }))
    }

    /// Export row-major CSV; each cell is a quoted `"re,im"` pair so the
    /// file stays parseable despite the embedded comma.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for j in 0..self.nrows {
            let row: Vec<String> = (0..self.ncols)
                .map(|k| {
                    let v = self[(j, k)];
                    format!("\"{:.17e},{:.17e}\"", v.re, v.im)
                })
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

fn check_index_list(list: &[usize], bound: usize) -> Result<()> {
    for w in list.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::Index(format!(
                "index list must be strictly increasing, got {} then {}",
                w[0], w[1]
            )));
        }
    }
    if let Some(&last) = list.last() {
        if last >= bound {
            return Err(Error::Index(format!("index {last} out of range (size {bound})")));
        }
    }
    Ok(())
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (j, k): (usize, usize)) -> &Complex64 {
        &self.data[j * self.ncols + k]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (j, k): (usize, usize)) -> &mut Complex64 {
        &mut self.data[j * self.ncols + k]
    }
}

/// Determinant via LU with partial pivoting, accumulated in log scale.
///
/// A pivot whose modulus underflows `PIVOT_UNDERFLOW_REL` times the max
/// modulus of its remaining row block is treated as an exact zero.
pub fn det_log(matrix: &CMatrix) -> Result<LogComplex> {
    if matrix.nrows != matrix.ncols {
        return Err(Error::Shape(format!(
            "determinant of non-square {}x{} matrix",
            matrix.nrows, matrix.ncols
        )));
    }
    let n = matrix.nrows;
    if n == 0 {
        return Ok(LogComplex::one());
    }
    let mut a = matrix.clone();
    let mut log_mod = 0.0f64;
    let mut phase = 0.0f64;
    let mut sign_flips = 0usize;
    for col in 0..n {
        // Partial pivoting: pick the largest remaining entry in this column.
        let mut pivot_row = col;
        let mut pivot_mag = a[(col, col)].norm();
        for r in col + 1..n {
            let m = a[(r, col)].norm();
            if m > pivot_mag {
                pivot_mag = m;
                pivot_row = r;
            }
        }
        // Relative zero test against the scale of the remaining block.
        let mut block_scale = 0.0f64;
        for r in col..n {
            for c in col..n {
                block_scale = block_scale.max(a[(r, c)].norm());
            }
        }
        if pivot_mag <= PIVOT_UNDERFLOW_REL * block_scale || pivot_mag == 0.0 {
            return Ok(LogComplex::zero());
        }
        if pivot_row != col {
            for c in 0..n {
                let tmp = a[(col, c)];
                a[(col, c)] = a[(pivot_row, c)];
                a[(pivot_row, c)] = tmp;
            }
            sign_flips += 1;
        }
        let pivot = a[(col, col)];
        log_mod += pivot.norm().ln();
        phase = normalize_phase(phase + pivot.arg());
        for r in col + 1..n {
            let factor = a[(r, col)] / pivot;
            if factor.norm_sqr() == 0.0 {
                continue;
            }
            for c in col..n {
                let v = a[(col, c)];
                a[(r, c)] -= factor * v;
            }
        }
    }
    if sign_flips % 2 == 1 {
        phase = normalize_phase(phase + std::f64::consts::PI);
    }
    Ok(LogComplex { log_modulus: log_mod, phase, is_zero: false })
}

/// Solve `A x = b` by LU with partial pivoting (dense, in place on copies).
pub fn solve(a: &CMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    if a.nrows != a.ncols {
        return Err(Error::Shape("solve requires a square matrix".into()));
    }
    if b.len() != a.nrows {
        return Err(Error::Shape("solve rhs length mismatch".into()));
    }
    let n = a.nrows;
    let mut m = a.clone();
    let mut x: Vec<Complex64> = b.to_vec();
    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_mag = m[(col, col)].norm();
        for r in col + 1..n {
            let mag = m[(r, col)].norm();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = r;
            }
        }
        if pivot_mag == 0.0 {
            return Err(Error::Shape("singular system in solve".into()));
        }
        if pivot_row != col {
            for c in 0..n {
                let tmp = m[(col, c)];
                m[(col, c)] = m[(pivot_row, c)];
                m[(pivot_row, c)] = tmp;
            }
            x.swap(col, pivot_row);
        }
        let pivot = m[(col, col)];
        for r in col + 1..n {
            let factor = m[(r, col)] / pivot;
            if factor.norm_sqr() == 0.0 {
                continue;
            }
            for c in col..n {
                let v = m[(col, c)];
                m[(r, c)] -= factor * v;
            }
            let xv = x[col];
            x[r] -= factor * xv;
        }
    }
    for col in (0..n).rev() {
        let mut acc = x[col];
        for c in col + 1..n {
            acc -= m[(col, c)] * x[c];
        }
        x[col] = acc / m[(col, col)];
    }
    Ok(x)
}

/// Determinant of the submatrix with `removed_rows`/`removed_cols` deleted.
pub fn minor_det(matrix: &CMatrix, removed_rows: &[usize], removed_cols: &[usize]) -> Result<LogComplex> {
    det_log(&matrix.minor(removed_rows, removed_cols)?)
}
