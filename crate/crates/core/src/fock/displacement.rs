//! Matrix elements of Weyl displacement operators in the number basis.
//!
//! With `α = (ξ₁ + iξ₂)/√2` and `y = |α|²`, for `j ≥ m`
//! `⟨j|D|m⟩ = √(m!/j!) α^{j-m} e^{-y/2} L_m^{(j-m)}(y)`, and the elements
//! above the diagonal follow from `⟨j|D(α)|m⟩ = ⟨m|D(-α)|j⟩*`. Every element
//! factors as `e^{i(j-m)φ} R_{jm}(y)` with a real radial part.

use nalgebra::DMatrix;

use crate::linalg::{ln_factorials, C64};

/// `α = (ξ₁ + iξ₂)/√2`.
pub fn alpha_of(xi: [f64; 2]) -> C64 {
    C64::new(xi[0], xi[1]) / std::f64::consts::SQRT_2
}

/// Radial parts `R_{jm}(y)` for `j < rows`, `m < cols`, row-major.
pub fn radial_elements(y: f64, rows: usize, cols: usize) -> Vec<f64> {
    let mut out = vec![0.0; rows * cols];
    if y == 0.0 {
        for k in 0..rows.min(cols) {
            out[k * cols + k] = 1.0;
        }
        return out;
    }
    let lnf = ln_factorials(rows.max(cols) + 1);
    let ln_y = y.ln();
    // Lower triangle (j >= m): order s = j - m, degree m.
    for s in 0..rows {
        let count = cols.min(rows - s);
        fill_band(&mut out, cols, y, ln_y, &lnf, s, count, |m| (m + s, m), 1.0);
    }
    // Upper triangle (j < m): R_{jm} = (-1)^{m-j} R_{mj}.
    for s in 1..cols {
        let count = rows.min(cols - s);
        let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
        fill_band(&mut out, cols, y, ln_y, &lnf, s, count, |j| (j, j + s), sign);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn fill_band<F>(out: &mut [f64], cols: usize, y: f64, ln_y: f64, lnf: &[f64], s: usize, count: usize, at: F, sign: f64)
where
    F: Fn(usize) -> (usize, usize),
{
    let sf = s as f64;
    let (mut prev, mut cur) = (0.0, 1.0);
    for m in 0..count {
        if m == 1 {
            prev = 1.0;
            cur = 1.0 + sf - y;
        } else if m > 1 {
            let mf = (m - 1) as f64;
            let next = ((2.0 * mf + 1.0 + sf - y) * cur - (mf + sf) * prev) / (mf + 1.0);
            prev = cur;
            cur = next;
        }
        let log_pref = 0.5 * (lnf[m] - lnf[m + s]) + 0.5 * sf * ln_y - 0.5 * y;
        let (r, c) = at(m);
        out[r * cols + c] = sign * log_pref.exp() * cur;
    }
}

/// Rectangular block `⟨j|D(α)|m⟩`, `j < rows`, `m < cols`.
pub fn displacement_matrix(alpha: C64, rows: usize, cols: usize) -> DMatrix<C64> {
    let y = alpha.norm_sqr();
    let radial = radial_elements(y, rows, cols);
    let phase = if y == 0.0 { C64::new(1.0, 0.0) } else { alpha / alpha.norm() };
    let max_shift = rows.max(cols);
    let mut powers = Vec::with_capacity(max_shift);
    let mut p = C64::new(1.0, 0.0);
    for _ in 0..max_shift {
        powers.push(p);
        p *= phase;
    }
    DMatrix::from_fn(rows, cols, |j, m| {
        let r = radial[j * cols + m];
        if j >= m {
            powers[j - m] * r
        } else {
            powers[m - j].conj() * r
        }
    })
}

/// Truncated displacement operator `D(ξ)` on `d` levels.
pub fn displacement_operator(xi: [f64; 2], d: usize) -> DMatrix<C64> {
    displacement_matrix(alpha_of(xi), d, d)
}
