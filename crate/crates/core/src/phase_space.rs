//! Classical densities on the two-dimensional phase space of one mode.
//!
//! Densities are normalized against the rescaled measure `dξ/(2π)`, so a cell
//! of a grid with spacing `h` carries integration weight `h²/(2π)`. Grid
//! origins are always integer multiples of the spacing, which keeps any two
//! grids of equal spacing aligned and lets convolutions run by index sums.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use nalgebra::Matrix2;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest side length a grid may reach.
pub const MAX_GRID_SIDE: usize = 2048;
/// Mass allowed in the outermost ring of cells.
pub const BOUNDARY_TAIL: f64 = 1e-8;
/// Allowed deviation of the total mass from one.
pub const MASS_TOLERANCE: f64 = 1e-6;

/// Geometry request used when sampling a density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub spacing: f64,
    /// Half-width of the sampled box around the center. `None` picks
    /// `8√t` plus a few cells, which always satisfies the tail invariant.
    pub extent: Option<f64>,
}

impl GridSpec {
    pub fn new(spacing: f64) -> Self {
        Self { spacing, extent: None }
    }

    pub fn with_extent(spacing: f64, extent: f64) -> Self {
        Self { spacing, extent: Some(extent) }
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self::new(0.25)
    }
}

/// Probability density sampled at cell centers of a square grid.
///
/// `values[i * size + j]` is the density at
/// `(origin[0] + i·spacing, origin[1] + j·spacing)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPdf {
    pub origin: [f64; 2],
    pub spacing: f64,
    pub size: usize,
    pub values: Vec<f64>,
    /// Set when the density is a centered isotropic Gaussian `f_{Z,t}`;
    /// channels use it to switch to an exact radial quadrature.
    pub isotropic_variance: Option<f64>,
    /// Accumulated mass removed by renormalization.
    pub drift: f64,
}

fn cell_index(x: f64, h: f64) -> i64 {
    (x / h).round() as i64
}

impl GridPdf {
    /// Builds a density from raw samples and renormalizes it.
    pub fn from_values(origin: [f64; 2], spacing: f64, size: usize, values: Vec<f64>) -> Result<Self> {
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::Parameter(format!("grid spacing must be positive, got {spacing}")));
        }
        if size == 0 || size > MAX_GRID_SIDE {
            return Err(Error::GridTooSmall(format!("side {size} outside 1..={MAX_GRID_SIDE}")));
        }
        if values.len() != size * size {
            return Err(Error::DimensionMismatch(format!(
                "{} values for a {size}x{size} grid",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidState(format!("density value {v} is negative or not finite")));
        }
        let origin = [
            cell_index(origin[0], spacing) as f64 * spacing,
            cell_index(origin[1], spacing) as f64 * spacing,
        ];
        let mut pdf = Self { origin, spacing, size, values, isotropic_variance: None, drift: 0.0 };
        pdf.renormalize()?;
        Ok(pdf)
    }

    pub fn cell_weight(&self) -> f64 {
        self.spacing * self.spacing / (2.0 * PI)
    }

    pub fn coord(&self, i: usize, j: usize) -> [f64; 2] {
        [self.origin[0] + i as f64 * self.spacing, self.origin[1] + j as f64 * self.spacing]
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.size + j]
    }

    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_weight()
    }

    fn renormalize(&mut self) -> Result<()> {
        let m = self.mass();
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::InvalidState(format!("density has mass {m}")));
        }
        self.drift += (m - 1.0).abs();
        for v in &mut self.values {
            *v /= m;
        }
        Ok(())
    }

    /// Mass carried by the outermost ring of cells.
    pub fn boundary_mass(&self) -> f64 {
        let l = self.size;
        if l <= 2 {
            return self.mass();
        }
        let mut s = 0.0;
        for k in 0..l {
            s += self.at(0, k) + self.at(l - 1, k);
        }
        for k in 1..l - 1 {
            s += self.at(k, 0) + self.at(k, l - 1);
        }
        s * self.cell_weight()
    }

    /// Checks nonnegativity, normalization and the boundary tail.
    pub fn validate(&self) -> Result<()> {
        if let Some(v) = self.values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidState(format!("density value {v} is negative or not finite")));
        }
        let m = self.mass();
        if (m - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidState(format!("density mass {m} is not 1")));
        }
        let tail = self.boundary_mass();
        if tail > BOUNDARY_TAIL {
            return Err(Error::GridTooSmall(format!("boundary ring carries mass {tail:e}")));
        }
        Ok(())
    }

    /// Translates the density by whole cells. Values are untouched.
    pub fn shift_cells(&self, di: i64, dj: i64) -> GridPdf {
        let mut out = self.clone();
        out.origin[0] += di as f64 * self.spacing;
        out.origin[1] += dj as f64 * self.spacing;
        if di != 0 || dj != 0 {
            out.isotropic_variance = None;
        }
        out
    }

    /// Re-samples onto a larger aligned box given by cell offsets and side.
    fn embed(&self, lo: [i64; 2], size: usize) -> GridPdf {
        let h = self.spacing;
        let own = [cell_index(self.origin[0], h), cell_index(self.origin[1], h)];
        let mut values = vec![0.0; size * size];
        for i in 0..self.size {
            let ii = (own[0] + i as i64 - lo[0]) as usize;
            for j in 0..self.size {
                let jj = (own[1] + j as i64 - lo[1]) as usize;
                values[ii * size + jj] = self.at(i, j);
            }
        }
        GridPdf {
            origin: [lo[0] as f64 * h, lo[1] as f64 * h],
            spacing: h,
            size,
            values,
            isotropic_variance: self.isotropic_variance,
            drift: self.drift,
        }
    }

    /// Pads the grid by `cells` on every side.
    pub fn pad(&self, cells: usize) -> Result<GridPdf> {
        let size = self.size + 2 * cells;
        if size > MAX_GRID_SIDE {
            return Err(Error::GridTooSmall(format!("padding would need side {size} > {MAX_GRID_SIDE}")));
        }
        let h = self.spacing;
        let lo = [cell_index(self.origin[0], h) - cells as i64, cell_index(self.origin[1], h) - cells as i64];
        Ok(self.embed(lo, size))
    }

    /// Drops outer rings whose combined mass stays below `eps`.
    pub fn trim(&self, eps: f64) -> GridPdf {
        let w = self.cell_weight();
        let mut lo = 0usize;
        let mut hi = self.size;
        let mut removed = 0.0;
        while hi - lo > 3 {
            let mut ring = 0.0;
            for k in lo..hi {
                ring += self.at(lo, k) + self.at(hi - 1, k);
            }
            for k in lo + 1..hi - 1 {
                ring += self.at(k, lo) + self.at(k, hi - 1);
            }
            ring *= w;
            if removed + ring > eps {
                break;
            }
            removed += ring;
            lo += 1;
            hi -= 1;
        }
        if lo == 0 {
            return self.clone();
        }
        let size = hi - lo;
        let mut values = Vec::with_capacity(size * size);
        for i in lo..hi {
            values.extend_from_slice(&self.values[i * self.size + lo..i * self.size + hi]);
        }
        GridPdf {
            origin: self.coord(lo, lo),
            spacing: self.spacing,
            size,
            values,
            isotropic_variance: self.isotropic_variance,
            drift: self.drift + removed,
        }
    }

    /// Writes the text serialization.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# gridpdf v1");
        let _ = writeln!(s, "origin {:e} {:e}", self.origin[0], self.origin[1]);
        let _ = writeln!(s, "spacing {:e}", self.spacing);
        let _ = writeln!(s, "size {}", self.size);
        for i in 0..self.size {
            let row: Vec<String> = (0..self.size).map(|j| format!("{:e}", self.at(i, j))).collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        s
    }

    /// Parses the text serialization; blank lines and `#` comments are ignored.
    pub fn from_text(text: &str) -> Result<GridPdf> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let mut header = |key: &str| -> Result<Vec<f64>> {
            let line = lines.next().ok_or_else(|| Error::Parse(format!("missing `{key}` line")))?;
            let mut parts = line.split_whitespace();
            if parts.next() != Some(key) {
                return Err(Error::Parse(format!("expected `{key}`, found `{line}`")));
            }
            parts
                .map(|p| p.parse::<f64>().map_err(|e| Error::Parse(format!("{key}: {e}"))))
                .collect()
        };
        let origin = header("origin")?;
        let spacing = header("spacing")?;
        let size = header("size")?;
        if origin.len() != 2 || spacing.len() != 1 || size.len() != 1 {
            return Err(Error::Parse("malformed header".into()));
        }
        let side = size[0];
        if side < 1.0 || side.fract() != 0.0 {
            return Err(Error::Parse(format!("size must be a positive integer, got {side}")));
        }
        let side = side as usize;
        let mut values = Vec::with_capacity(side * side);
        for (row, line) in lines.enumerate() {
            let parsed: std::result::Result<Vec<f64>, _> = line.split_whitespace().map(str::parse::<f64>).collect();
            let parsed = parsed.map_err(|e| Error::Parse(format!("row {row}: {e}")))?;
            if parsed.len() != side {
                return Err(Error::Parse(format!("row {row} has {} values, expected {side}", parsed.len())));
            }
            values.extend(parsed);
        }
        if values.len() != side * side {
            return Err(Error::Parse(format!("expected {side} rows, found {}", values.len() / side.max(1))));
        }
        let pdf = GridPdf::from_values([origin[0], origin[1]], spacing[0], side, values)?;
        pdf.validate()?;
        Ok(pdf)
    }

    pub fn read(path: &Path) -> Result<GridPdf> {
        GridPdf::from_text(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

fn auto_extent(t: f64, h: f64) -> f64 {
    8.0 * t.sqrt() + 4.0 * h
}

/// Samples `f_{Z,t}(ξ - center) = e^{-|ξ-center|²/2t}/t` and renormalizes.
pub fn gaussian_pdf(t: f64, center: [f64; 2], grid: &GridSpec) -> Result<GridPdf> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Parameter(format!("Gaussian variance must be positive, got {t}")));
    }
    let h = grid.spacing;
    let extent = grid.extent.unwrap_or_else(|| auto_extent(t, h));
    let lo = [cell_index(center[0] - extent, h), cell_index(center[1] - extent, h)];
    let hi0 = cell_index(center[0] + extent, h);
    let hi1 = cell_index(center[1] + extent, h);
    let size = ((hi0 - lo[0]).max(hi1 - lo[1]) + 1) as usize;
    if size > MAX_GRID_SIDE {
        return Err(Error::GridTooSmall(format!("side {size} exceeds {MAX_GRID_SIDE}")));
    }
    let origin = [lo[0] as f64 * h, lo[1] as f64 * h];
    let axis = |o: f64, c: f64| -> Vec<f64> {
        (0..size).map(|i| (-(o + i as f64 * h - c).powi(2) / (2.0 * t)).exp()).collect()
    };
    let (ax, ay) = (axis(origin[0], center[0]), axis(origin[1], center[1]));
    let mut values = Vec::with_capacity(size * size);
    for x in &ax {
        for y in &ay {
            values.push(x * y / t);
        }
    }
    let mut pdf = GridPdf::from_values(origin, h, size, values)?;
    pdf.drift = 0.0;
    let tail = pdf.boundary_mass();
    if tail > BOUNDARY_TAIL {
        return Err(Error::GridTooSmall(format!(
            "extent {extent} leaves boundary mass {tail:e}; need about {:.3}",
            auto_extent(t, h)
        )));
    }
    if center == [0.0, 0.0] {
        pdf.isotropic_variance = Some(t);
    }
    Ok(pdf)
}

/// Uniform density on the axis-aligned square of the given side centered at
/// the origin, padded by empty cells so the boundary ring is empty.
pub fn uniform_square(side: f64, spacing: f64) -> Result<GridPdf> {
    let n = (side / spacing).round() as usize;
    if n == 0 || (n as f64 * spacing - side).abs() > 1e-9 * side {
        return Err(Error::Parameter(format!("side {side} is not a multiple of spacing {spacing}")));
    }
    let pad = 2;
    let size = n + 2 * pad;
    let mut values = vec![0.0; size * size];
    for i in pad..pad + n {
        for j in pad..pad + n {
            values[i * size + j] = 1.0;
        }
    }
    let lo = -((size / 2) as f64) * spacing;
    GridPdf::from_values([lo, lo], spacing, size, values)
}

/// Convex combination of densities sharing a spacing.
pub fn mixture(weights: &[f64], pdfs: &[GridPdf]) -> Result<GridPdf> {
    if weights.len() != pdfs.len() || pdfs.is_empty() {
        return Err(Error::DimensionMismatch("mixture weights and densities differ in length".into()));
    }
    let aligned = align(pdfs)?;
    let size = aligned[0].size;
    let mut values = vec![0.0; size * size];
    for (w, p) in weights.iter().zip(&aligned) {
        if *w < 0.0 {
            return Err(Error::Parameter(format!("negative mixture weight {w}")));
        }
        for (v, x) in values.iter_mut().zip(&p.values) {
            *v += w * x;
        }
    }
    GridPdf::from_values(aligned[0].origin, aligned[0].spacing, size, values)
}

/// Embeds densities of equal spacing into one common bounding grid.
pub fn align(pdfs: &[GridPdf]) -> Result<Vec<GridPdf>> {
    let h = pdfs[0].spacing;
    for p in pdfs {
        if (p.spacing - h).abs() > 1e-12 {
            return Err(Error::SpacingMismatch(h, p.spacing));
        }
    }
    let mut lo = [i64::MAX; 2];
    let mut hi = [i64::MIN; 2];
    for p in pdfs {
        for a in 0..2 {
            let o = cell_index(p.origin[a], h);
            lo[a] = lo[a].min(o);
            hi[a] = hi[a].max(o + p.size as i64 - 1);
        }
    }
    let size = ((hi[0] - lo[0]).max(hi[1] - lo[1]) + 1) as usize;
    if size > MAX_GRID_SIDE {
        return Err(Error::GridTooSmall(format!("common grid side {size} exceeds {MAX_GRID_SIDE}")));
    }
    Ok(pdfs.iter().map(|p| p.embed(lo, size)).collect())
}

/// Differential entropy `-∫ f log f dξ/(2π)`.
pub fn shannon_entropy(f: &GridPdf) -> f64 {
    let s: f64 = f.values.iter().map(|&v| crate::linalg::neg_xlogx(v)).sum();
    s * f.cell_weight()
}

/// `Σ_k ∫ ξ_k² f dξ/(2π)`.
pub fn energy(f: &GridPdf) -> f64 {
    let w = f.cell_weight();
    let mut e = 0.0;
    for i in 0..f.size {
        for j in 0..f.size {
            let [x, y] = f.coord(i, j);
            e += (x * x + y * y) * f.at(i, j);
        }
    }
    e * w
}

/// Mean vector and covariance matrix.
pub fn moments(f: &GridPdf) -> ([f64; 2], Matrix2<f64>) {
    let w = f.cell_weight();
    let mut m = [0.0; 2];
    for i in 0..f.size {
        for j in 0..f.size {
            let [x, y] = f.coord(i, j);
            let v = f.at(i, j) * w;
            m[0] += x * v;
            m[1] += y * v;
        }
    }
    let mut c = Matrix2::zeros();
    for i in 0..f.size {
        for j in 0..f.size {
            let [x, y] = f.coord(i, j);
            let (dx, dy) = (x - m[0], y - m[1]);
            let v = f.at(i, j) * w;
            c[(0, 0)] += dx * dx * v;
            c[(0, 1)] += dx * dy * v;
            c[(1, 1)] += dy * dy * v;
        }
    }
    c[(1, 0)] = c[(0, 1)];
    (m, c)
}

/// `(g ⋆ f)(η) = ∫ g(ξ) f(η-ξ) dξ/(2π)` by direct summation.
pub fn classical_convolution(g: &GridPdf, f: &GridPdf) -> Result<GridPdf> {
    let h = g.spacing;
    if (f.spacing - h).abs() > 1e-12 {
        return Err(Error::SpacingMismatch(h, f.spacing));
    }
    let size = g.size + f.size - 1;
    if size > MAX_GRID_SIDE {
        return Err(Error::GridTooSmall(format!("convolution needs side {size} > {MAX_GRID_SIDE}")));
    }
    let w = g.cell_weight();
    let (lg, lf) = (g.size, f.size);
    let values: Vec<f64> = (0..size * size)
        .into_par_iter()
        .map(|idx| {
            let (a, b) = (idx / size, idx % size);
            let mut acc = 0.0;
            let i_lo = a.saturating_sub(lf - 1);
            let i_hi = a.min(lg - 1);
            let j_lo = b.saturating_sub(lf - 1);
            let j_hi = b.min(lg - 1);
            for i in i_lo..=i_hi {
                let grow = &g.values[i * lg..(i + 1) * lg];
                let frow = &f.values[(a - i) * lf..(a - i + 1) * lf];
                for j in j_lo..=j_hi {
                    acc += grow[j] * frow[b - j];
                }
            }
            acc * w
        })
        .collect();
    let origin = [g.origin[0] + f.origin[0], g.origin[1] + f.origin[1]];
    let mut out = GridPdf::from_values(origin, h, size, values)?;
    out.drift += g.drift + f.drift;
    out.isotropic_variance = match (g.isotropic_variance, f.isotropic_variance) {
        (Some(s), Some(t)) => Some(s + t),
        _ => None,
    };
    Ok(out.trim(1e-15))
}

/// Periodic band-limited heat kernel on `n` points, `Σ_ω e^{-tω²/2} cos(ωdh)/n`.
fn spectral_kernel(t: f64, h: f64, n: usize) -> Vec<f64> {
    let base = 2.0 * PI / (n as f64 * h);
    let half = n / 2;
    (0..n)
        .map(|d| {
            let mut acc = 1.0;
            for m in 1..=half {
                let om = base * m as f64;
                let mult = if 2 * m == n { 1.0 } else { 2.0 };
                acc += mult * (-t * om * om / 2.0).exp() * (om * d as f64 * h).cos();
            }
            acc / n as f64
        })
        .collect()
}

/// Applies a separable 1D operator `row -> out` along both axes.
fn separable<F>(values: &[f64], size: usize, op: F) -> Vec<f64>
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    let mut tmp = vec![0.0; size * size];
    tmp.par_chunks_mut(size).enumerate().for_each(|(i, out)| {
        op(&values[i * size..(i + 1) * size], out);
    });
    let mut transposed = vec![0.0; size * size];
    for i in 0..size {
        for j in 0..size {
            transposed[j * size + i] = tmp[i * size + j];
        }
    }
    let mut out_t = vec![0.0; size * size];
    out_t.par_chunks_mut(size).enumerate().for_each(|(j, out)| {
        op(&transposed[j * size..(j + 1) * size], out);
    });
    let mut out = vec![0.0; size * size];
    for j in 0..size {
        for i in 0..size {
            out[i * size + j] = out_t[j * size + i];
        }
    }
    out
}

/// `N_cl(t)(f) = f_{Z,t} ⋆ f`.
///
/// When `√t` spans at least two cells the sampled Gaussian kernel is used; its
/// aliasing error is below `e^{-8π²}`. For shorter times the sampled kernel
/// degenerates, so the band-limited periodic kernel is applied on a padded
/// grid instead. Both realize the multiplier `e^{-t|ω|²/2}` to rounding for
/// densities resolved by the grid.
pub fn classical_heat_flow(f: &GridPdf, t: f64) -> Result<GridPdf> {
    if t < 0.0 || !t.is_finite() {
        return Err(Error::NegativeTime(t));
    }
    if t == 0.0 {
        return Ok(f.clone());
    }
    let h = f.spacing;
    let reach = (8.0 * t.sqrt() / h).ceil() as usize + 1;
    let mut out = if t.sqrt() >= 2.0 * h {
        let padded = f.pad(reach)?;
        let size = padded.size;
        let kernel: Vec<f64> = {
            let raw: Vec<f64> = (0..=reach).map(|d| (-(d as f64 * h).powi(2) / (2.0 * t)).exp()).collect();
            let total = raw[0] + 2.0 * raw[1..].iter().sum::<f64>();
            raw.into_iter().map(|k| k / total).collect()
        };
        let values = separable(&padded.values, size, |row, out| {
            for (i, o) in out.iter_mut().enumerate() {
                let lo = i.saturating_sub(reach);
                let hi = (i + reach).min(size - 1);
                let mut acc = 0.0;
                for (k, r) in row.iter().enumerate().take(hi + 1).skip(lo) {
                    acc += kernel[i.abs_diff(k)] * r;
                }
                *o = acc;
            }
        });
        GridPdf { values, ..padded }
    } else {
        let padded = f.pad(reach + 4)?;
        let size = padded.size;
        let kernel = spectral_kernel(t, h, size);
        let mut values = separable(&padded.values, size, |row, out| {
            for (i, o) in out.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (k, r) in row.iter().enumerate() {
                    acc += kernel[(i + size - k) % size] * r;
                }
                *o = acc;
            }
        });
        for v in &mut values {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        GridPdf { values, ..padded }
    };
    out.renormalize()?;
    out.isotropic_variance = f.isotropic_variance.map(|s| s + t);
    Ok(out.trim(1e-15))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sup_distance(a: &GridPdf, b: &GridPdf) -> f64 {
        let v = align(&[a.clone(), b.clone()]).unwrap();
        v[0].values.iter().zip(&v[1].values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn gaussian_normalization_entropy_energy() {
        let f = gaussian_pdf(1.0, [0.0, 0.0], &GridSpec::new(0.25)).unwrap();
        assert!((f.mass() - 1.0).abs() < 1e-9);
        assert!((shannon_entropy(&f) - 1.0).abs() < 1e-9);
        f.validate().unwrap();
        let g = gaussian_pdf(0.5, [0.0, 0.0], &GridSpec::new(0.25)).unwrap();
        assert!((energy(&g) - 1.0).abs() < 1e-9);
        let (m, c) = moments(&g);
        assert!(m[0].abs() < 1e-12 && m[1].abs() < 1e-12);
        assert!((c[(0, 0)] - 0.5).abs() < 1e-9 && c[(0, 1)].abs() < 1e-12);
    }

    #[test]
    fn entropy_of_noise_with_parameter_b() {
        for b in [0.0f64, 1.0, -0.5] {
            let f = gaussian_pdf((b - 1.0).exp(), [0.0, 0.0], &GridSpec::new(0.1)).unwrap();
            assert!((shannon_entropy(&f) - b).abs() < 1e-9, "b={b}");
        }
    }

    #[test]
    fn narrow_extent_is_rejected() {
        let r = gaussian_pdf(1.0, [0.0, 0.0], &GridSpec::with_extent(0.25, 3.0));
        assert!(matches!(r, Err(Error::GridTooSmall(_))));
    }

    #[test]
    fn uniform_square_entropy_is_log_measure() {
        let u = uniform_square(2.0, 0.1).unwrap();
        let measure = 4.0 / (2.0 * PI);
        assert!((shannon_entropy(&u) - measure.ln()).abs() < 1e-12);
    }

    #[test]
    fn shifted_energy_follows_parallel_axis() {
        let f = gaussian_pdf(0.5, [0.0, 0.0], &GridSpec::new(0.25)).unwrap();
        let g = f.shift_cells(8, 0);
        assert!((energy(&g) - energy(&f) - 4.0).abs() < 1e-9);
        assert_eq!(shannon_entropy(&g).to_bits(), shannon_entropy(&f).to_bits());
    }

    #[test]
    fn mixture_covariance() {
        let spec = GridSpec::new(0.25);
        let a = gaussian_pdf(1.0, [1.0, 0.5], &spec).unwrap();
        let b = gaussian_pdf(1.0, [-1.0, -0.5], &spec).unwrap();
        let m = mixture(&[0.5, 0.5], &[a, b]).unwrap();
        let (mean, c) = moments(&m);
        assert!(mean[0].abs() < 1e-9 && mean[1].abs() < 1e-9);
        assert!((c[(0, 0)] - 2.0).abs() < 1e-9);
        assert!((c[(1, 1)] - 1.25).abs() < 1e-9);
        assert!((c[(0, 1)] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn gaussian_convolution_identity() {
        let spec = GridSpec::new(0.25);
        let f = gaussian_pdf(0.5, [0.0, 0.0], &spec).unwrap();
        let g = gaussian_pdf(1.0, [0.0, 0.0], &spec).unwrap();
        let c = classical_convolution(&g, &f).unwrap();
        let expect = gaussian_pdf(1.5, [0.0, 0.0], &spec).unwrap();
        assert!(sup_distance(&c, &expect) < 1e-6);
        assert!((c.mass() - 1.0).abs() < 1e-6);
        assert_eq!(c.isotropic_variance, Some(1.5));
    }

    #[test]
    fn heat_flow_matches_gaussian_family() {
        let spec = GridSpec::new(0.25);
        let f = gaussian_pdf(1.0, [0.0, 0.0], &spec).unwrap();
        for t in [0.0, 0.01, 0.1, 1.0, 3.0] {
            let g = classical_heat_flow(&f, t).unwrap();
            let expect = gaussian_pdf(1.0 + t, [0.0, 0.0], &spec).unwrap();
            assert!(sup_distance(&g, &expect) < 1e-6, "t={t}");
            assert!((shannon_entropy(&g) - (1.0 + (1.0 + t).ln())).abs() < 1e-8, "t={t}");
            g.validate().unwrap();
        }
    }

    #[test]
    fn heat_flow_semigroup() {
        let spec = GridSpec::new(0.25);
        let a = gaussian_pdf(0.6, [0.5, 0.0], &spec).unwrap();
        let b = gaussian_pdf(0.6, [-1.0, 0.25], &spec).unwrap();
        let f = mixture(&[0.3, 0.7], &[a, b]).unwrap();
        let two = classical_heat_flow(&classical_heat_flow(&f, 0.4).unwrap(), 0.9).unwrap();
        let one = classical_heat_flow(&f, 1.3).unwrap();
        assert!(sup_distance(&two, &one) < 1e-6);
    }

    #[test]
    fn text_round_trip() {
        let f = gaussian_pdf(0.5, [0.25, 0.0], &GridSpec::new(0.25)).unwrap();
        let back = GridPdf::from_text(&f.to_text()).unwrap();
        assert_eq!(back.size, f.size);
        assert!(sup_distance(&back, &f) < 1e-12);
        assert!(GridPdf::from_text("# gridpdf v1\norigin 0 0\nspacing 0.5\nsize 2\n1 2\n").is_err());
    }

    fn random_pdf(centers: Vec<(f64, f64, f64)>) -> GridPdf {
        let spec = GridSpec::new(0.25);
        let parts: Vec<GridPdf> = centers
            .iter()
            .map(|&(x, y, t)| gaussian_pdf(t, [x, y], &spec).unwrap())
            .collect();
        let w = vec![1.0 / parts.len() as f64; parts.len()];
        mixture(&w, &parts).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn classical_epi_holds(
            a in prop::collection::vec((-1.5f64..1.5, -1.5f64..1.5, 0.3f64..1.0), 1..3),
            b in prop::collection::vec((-1.5f64..1.5, -1.5f64..1.5, 0.3f64..1.0), 1..3),
        ) {
            let (g, f) = (random_pdf(a), random_pdf(b));
            let c = classical_convolution(&g, &f).unwrap();
            let lhs = shannon_entropy(&c).exp();
            let rhs = shannon_entropy(&g).exp() + shannon_entropy(&f).exp();
            prop_assert!(lhs >= rhs - 1e-3);
        }

        #[test]
        fn heat_flow_raises_entropy(
            a in prop::collection::vec((-1.5f64..1.5, -1.5f64..1.5, 0.3f64..1.0), 1..3),
            t in 0.01f64..1.0,
        ) {
            let f = random_pdf(a);
            let g = classical_heat_flow(&f, t).unwrap();
            prop_assert!(shannon_entropy(&g) >= shannon_entropy(&f) - 1e-12);
            prop_assert!((g.mass() - 1.0).abs() < 1e-9);
        }
    }
}
