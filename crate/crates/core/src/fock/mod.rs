//! Truncated number-basis density operators on one or two modes.
//!
//! Two-mode index layout is `a·d_B + b`. A mode may also be flagged as a
//! classical register (a finite set of orthogonal labels), in which case the
//! truncation-tail invariant does not apply to it.

mod displacement;

pub use displacement::{alpha_of, displacement_matrix, displacement_operator, radial_elements};

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, hermitian_eigenvalues, hermiticity_defect, spectral_entropy, trace, C64};

/// Largest cutoff allowed per bosonic mode.
pub const MAX_CUTOFF: usize = 128;
/// Population allowed on the top retained level of each bosonic mode.
pub const TAIL_LIMIT: f64 = 1e-8;
const TRACE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    pub mode_dims: Vec<usize>,
    pub matrix: DMatrix<C64>,
    pub mode_labels: Vec<String>,
    /// `true` for register modes, which carry labels rather than photons.
    pub register: Vec<bool>,
    /// Accumulated trace removed by renormalization after channels.
    pub drift: f64,
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

impl FockState {
    /// Wraps an operator after checking shape, Hermiticity, trace and tail.
    pub fn new(mode_dims: Vec<usize>, matrix: DMatrix<C64>, mode_labels: Vec<String>) -> Result<Self> {
        let register = vec![false; mode_dims.len()];
        Self::with_registers(mode_dims, matrix, mode_labels, register)
    }

    pub fn with_registers(
        mode_dims: Vec<usize>,
        matrix: DMatrix<C64>,
        mode_labels: Vec<String>,
        register: Vec<bool>,
    ) -> Result<Self> {
        let state = Self::assemble(mode_dims, matrix, mode_labels, register)?;
        let tail = state.tail_mass();
        if tail > TAIL_LIMIT {
            return Err(Error::Tail { mass: tail, limit: TAIL_LIMIT, cutoff: state.max_bosonic_dim() });
        }
        Ok(state)
    }

    /// Same checks as [`FockState::with_registers`] except the tail bound.
    pub(crate) fn assemble(
        mode_dims: Vec<usize>,
        matrix: DMatrix<C64>,
        mode_labels: Vec<String>,
        register: Vec<bool>,
    ) -> Result<Self> {
        if mode_dims.is_empty() || mode_dims.len() > 2 || mode_labels.len() != mode_dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} modes with {} labels",
                mode_dims.len(),
                mode_labels.len()
            )));
        }
        if mode_labels.len() == 2 && mode_labels[0] == mode_labels[1] {
            return Err(Error::Label(mode_labels[0].clone()));
        }
        for (d, r) in mode_dims.iter().zip(&register) {
            if *d == 0 || (!r && *d > MAX_CUTOFF) {
                return Err(Error::Parameter(format!("cutoff {d} outside 1..={MAX_CUTOFF}")));
            }
        }
        let dim: usize = mode_dims.iter().product();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "matrix {}x{} for dims {:?}",
                matrix.nrows(),
                matrix.ncols(),
                mode_dims
            )));
        }
        if hermiticity_defect(&matrix) > 1e-10 {
            return Err(Error::InvalidState("operator is not Hermitian".into()));
        }
        let tr = trace(&matrix).re;
        if (tr - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        Ok(Self { mode_dims, matrix, mode_labels, register, drift: 0.0 })
    }

    /// Full validation including the minimum eigenvalue.
    pub fn validate(&self) -> Result<()> {
        let min = hermitian_eigenvalues(&self.matrix).first().copied().unwrap_or(0.0);
        if min < -crate::linalg::EIGEN_CLAMP {
            return Err(Error::NegativeEigenvalue(min));
        }
        let tail = self.tail_mass();
        if tail > TAIL_LIMIT {
            return Err(Error::Tail { mass: tail, limit: TAIL_LIMIT, cutoff: self.max_bosonic_dim() });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn n_modes(&self) -> usize {
        self.mode_dims.len()
    }

    fn max_bosonic_dim(&self) -> usize {
        self.mode_dims
            .iter()
            .zip(&self.register)
            .filter(|(_, r)| !**r)
            .map(|(d, _)| *d)
            .max()
            .unwrap_or(0)
    }

    pub fn mode_index(&self, label: &str) -> Result<usize> {
        self.mode_labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Label(label.to_string()))
    }

    /// Populations of each level of one mode.
    pub fn level_populations(&self, mode: usize) -> Vec<f64> {
        let mut pops = vec![0.0; self.mode_dims[mode]];
        for i in 0..self.dim() {
            pops[self.occupation(i, mode)] += self.matrix[(i, i)].re;
        }
        pops
    }

    /// Largest population on the top level among bosonic modes.
    pub fn tail_mass(&self) -> f64 {
        (0..self.n_modes())
            .filter(|&k| !self.register[k])
            .map(|k| *self.level_populations(k).last().unwrap_or(&0.0))
            .fold(0.0, f64::max)
    }

    fn stride(&self, mode: usize) -> usize {
        self.mode_dims[mode + 1..].iter().product()
    }

    fn occupation(&self, index: usize, mode: usize) -> usize {
        (index / self.stride(mode)) % self.mode_dims[mode]
    }

    /// Applies `a` (or `a†`) on `mode` to basis vector `index`.
    fn ladder(&self, index: usize, mode: usize, dagger: bool) -> Option<(usize, f64)> {
        let n = self.occupation(index, mode);
        let st = self.stride(mode);
        if dagger {
            (n + 1 < self.mode_dims[mode]).then(|| (index + st, ((n + 1) as f64).sqrt()))
        } else {
            (n > 0).then(|| (index - st, (n as f64).sqrt()))
        }
    }

    /// `tr(ρ L₁ L₂ ...)` for a product of ladder operators, rightmost first.
    pub fn expect_ladder(&self, ops: &[(usize, bool)]) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        'basis: for i in 0..self.dim() {
            let (mut idx, mut coef) = (i, 1.0);
            for &(mode, dagger) in ops.iter().rev() {
                match self.ladder(idx, mode, dagger) {
                    Some((j, w)) => {
                        idx = j;
                        coef *= w;
                    }
                    None => continue 'basis,
                }
            }
            acc += self.matrix[(i, idx)] * coef;
        }
        acc
    }

    pub fn labels(&self) -> Vec<&str> {
        self.mode_labels.iter().map(String::as_str).collect()
    }

    /// Copy with new labels.
    pub fn relabel(mut self, labels: &[&str]) -> Result<Self> {
        if labels.len() != self.n_modes() || (labels.len() == 2 && labels[0] == labels[1]) {
            return Err(Error::Label(labels.join(",")));
        }
        self.mode_labels = labels.iter().map(|s| s.to_string()).collect();
        Ok(self)
    }

    /// Tensor product of two single-mode states.
    pub fn tensor(&self, other: &FockState) -> Result<FockState> {
        if self.n_modes() != 1 || other.n_modes() != 1 {
            return Err(Error::DimensionMismatch("tensor product needs two single-mode states".into()));
        }
        let matrix = self.matrix.kronecker(&other.matrix);
        let mut s = FockState::assemble(
            vec![self.mode_dims[0], other.mode_dims[0]],
            matrix,
            vec![self.mode_labels[0].clone(), other.mode_labels[0].clone()],
            vec![self.register[0], other.register[0]],
        )?;
        s.drift = self.drift + other.drift;
        Ok(s)
    }

    /// Embeds into (or truncates to) new per-mode cutoffs, renormalizing.
    pub fn resized(&self, dims: &[usize]) -> Result<FockState> {
        if dims.len() != self.n_modes() {
            return Err(Error::DimensionMismatch("resize changes the number of modes".into()));
        }
        let new_dim: usize = dims.iter().product();
        let map = |i: usize| -> Option<usize> {
            let mut out = 0;
            for (k, &d) in dims.iter().enumerate() {
                let n = self.occupation(i, k);
                if n >= d {
                    return None;
                }
                out = out * d + n;
            }
            Some(out)
        };
        let targets: Vec<Option<usize>> = (0..self.dim()).map(map).collect();
        let mut matrix = DMatrix::zeros(new_dim, new_dim);
        for (j, tj) in targets.iter().enumerate() {
            let Some(tj) = tj else { continue };
            for (i, ti) in targets.iter().enumerate() {
                if let Some(ti) = ti {
                    matrix[(*ti, *tj)] = self.matrix[(i, j)];
                }
            }
        }
        let tr = trace(&matrix).re;
        let drift = (tr - 1.0).abs();
        matrix /= c(tr);
        let mut s = FockState::assemble(dims.to_vec(), matrix, self.mode_labels.clone(), self.register.clone())?;
        s.drift = self.drift + drift;
        Ok(s)
    }

    /// Drops top levels of bosonic modes while their population stays below
    /// `eps`, never going below `min_dim`.
    pub fn trimmed(&self, eps: f64, min_dim: usize) -> Result<FockState> {
        let mut dims = self.mode_dims.clone();
        for k in 0..self.n_modes() {
            if self.register[k] {
                continue;
            }
            let pops = self.level_populations(k);
            let mut removed = 0.0;
            while dims[k] > min_dim.max(1) && removed + pops[dims[k] - 1] <= eps {
                removed += pops[dims[k] - 1];
                dims[k] -= 1;
            }
        }
        if dims == self.mode_dims {
            return Ok(self.clone());
        }
        self.resized(&dims)
    }
}

fn pure_state(amplitudes: &[C64], dims: Vec<usize>, labels: &[&str]) -> Result<FockState> {
    let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let v = DVector::from_iterator(amplitudes.len(), amplitudes.iter().map(|a| a / norm));
    let matrix = &v * v.adjoint();
    FockState::new(dims, matrix, labels.iter().map(|s| s.to_string()).collect())
}

fn check_cutoff(d: usize, min: usize) -> Result<()> {
    if d < min || d > MAX_CUTOFF {
        return Err(Error::Parameter(format!("cutoff {d} outside {min}..={MAX_CUTOFF}")));
    }
    Ok(())
}

pub fn vacuum(d: usize) -> Result<FockState> {
    fock(0, d)
}

/// Number state `|n⟩`.
pub fn fock(n: usize, d: usize) -> Result<FockState> {
    check_cutoff(d, 1)?;
    if n >= d {
        return Err(Error::Tail { mass: 1.0, limit: TAIL_LIMIT, cutoff: d });
    }
    let mut amps = vec![c(0.0); d];
    amps[n] = c(1.0);
    pure_state(&amps, vec![d], &["A"])
}

/// Thermal state with mean photon number `n`: populations `(1-x)xᵏ`, `x = n/(n+1)`.
pub fn thermal(n: f64, d: usize) -> Result<FockState> {
    check_cutoff(d, 1)?;
    if !(n >= 0.0 && n.is_finite()) {
        return Err(Error::Domain(format!("mean photon number {n} < 0")));
    }
    diagonal_state(&geometric_populations(n / (n + 1.0), d), "A")
}

/// `(1-x)xᵏ` for `k < d`.
pub fn geometric_populations(x: f64, d: usize) -> Vec<f64> {
    (0..d).map(|k| (1.0 - x) * x.powi(k as i32)).collect()
}

/// Diagonal state from (unnormalized) populations.
pub fn diagonal_state(pops: &[f64], label: &str) -> Result<FockState> {
    let total: f64 = pops.iter().sum();
    let matrix = DMatrix::from_diagonal(&DVector::from_iterator(pops.len(), pops.iter().map(|p| c(p / total))));
    let mut s = FockState::new(vec![pops.len()], matrix, vec![label.to_string()])?;
    s.drift = (total - 1.0).abs();
    Ok(s)
}

/// Coherent state `|α⟩`.
pub fn coherent(alpha: C64, d: usize) -> Result<FockState> {
    check_cutoff(d, 1)?;
    let col = displacement_matrix(alpha, d, 1);
    let amps: Vec<C64> = col.iter().copied().collect();
    pure_state(&amps, vec![d], &["A"])
}

/// Even cat state `∝ |α⟩ + |-α⟩`.
pub fn cat(alpha: C64, d: usize) -> Result<FockState> {
    check_cutoff(d, 1)?;
    let plus = displacement_matrix(alpha, d, 1);
    let minus = displacement_matrix(-alpha, d, 1);
    let amps: Vec<C64> = plus.iter().zip(minus.iter()).map(|(a, b)| a + b).collect();
    pure_state(&amps, vec![d], &["A"])
}

/// Two-mode squeezed vacuum `Σ tanhⁿr / cosh r |n, n⟩` on modes `A`, `M`.
pub fn two_mode_squeezed_vacuum(r: f64, d: usize) -> Result<FockState> {
    check_cutoff(d, 1)?;
    if !r.is_finite() {
        return Err(Error::Parameter(format!("squeezing {r} is not finite")));
    }
    let x = r.tanh();
    let mut amps = vec![c(0.0); d * d];
    for n in 0..d {
        amps[n * d + n] = c(x.powi(n as i32) / r.cosh());
    }
    pure_state(&amps, vec![d, d], &["A", "M"])
}

/// Squeezing `r` with `cosh 2r = 2k²`, matching the pure covariance family.
pub fn squeezing_for_k(k: f64) -> f64 {
    (2.0 * k * k).acosh() / 2.0
}

/// `GG†/tr(GG†)` with `G` a `(d/2) × rank` standard complex Gaussian matrix.
/// The support is confined to the lower half of the ladder so the tail
/// invariant holds exactly.
pub fn random_mixed(rank: usize, d: usize, seed: u64) -> Result<FockState> {
    check_cutoff(d, 2)?;
    if rank == 0 {
        return Err(Error::Parameter("rank must be positive".into()));
    }
    let support = d / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::<C64>::from_fn(support, rank, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        C64::new(re, im) / std::f64::consts::SQRT_2
    });
    let small = &g * g.adjoint();
    let mut matrix = DMatrix::zeros(d, d);
    matrix.view_mut((0, 0), (support, support)).copy_from(&small);
    let tr = trace(&matrix);
    matrix /= tr;
    FockState::new(vec![d], matrix, vec!["A".into()])
}

/// Tries `build(d)` with increasing cutoffs until the tail invariant holds.
pub fn with_auto_cutoff<F>(start: usize, build: F) -> Result<FockState>
where
    F: Fn(usize) -> Result<FockState>,
{
    let mut d = start.clamp(2, MAX_CUTOFF);
    loop {
        match build(d) {
            Err(Error::Tail { .. }) if d < MAX_CUTOFF => d = (d + 8).min(MAX_CUTOFF),
            other => return other,
        }
    }
}

/// Displaced copy `D(ξ) ρ D(ξ)†` of a single-mode state on the same cutoff.
pub fn displaced(rho: &FockState, xi: [f64; 2]) -> Result<FockState> {
    if rho.n_modes() != 1 {
        return Err(Error::DimensionMismatch("displacement acts on one mode".into()));
    }
    let d = displacement_operator(xi, rho.dim());
    let m = &d * &rho.matrix * d.adjoint();
    let tr = trace(&m).re;
    let mut s = FockState::new(rho.mode_dims.clone(), m / c(tr), rho.mode_labels.clone())?;
    s.drift = rho.drift + (tr - 1.0).abs();
    Ok(s)
}

/// `-tr ρ log ρ` with the eigenvalue clamp policy.
pub fn von_neumann_entropy(rho: &FockState) -> Result<f64> {
    spectral_entropy(&hermitian_eigenvalues(&rho.matrix))
}

const NULL_EIGENVALUE: f64 = 1e-12;
const NULL_MASS: f64 = 1e-10;

/// `tr ρ(log ρ - log σ)`; `+∞` when ρ has weight on the null space of σ.
pub fn relative_entropy(rho: &FockState, sigma: &FockState) -> Result<f64> {
    if rho.mode_dims != sigma.mode_dims {
        return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", rho.mode_dims, sigma.mode_dims)));
    }
    let (w, v) = hermitian_eigen(&sigma.matrix);
    let rv = &rho.matrix * &v;
    let mut cross = 0.0;
    let mut null_mass = 0.0;
    for k in 0..w.len() {
        let weight = v.column(k).dotc(&rv.column(k)).re;
        if w[k] < NULL_EIGENVALUE {
            null_mass += weight;
        } else {
            cross += weight * w[k].ln();
        }
    }
    if null_mass >= NULL_MASS {
        return Ok(f64::INFINITY);
    }
    Ok(-von_neumann_entropy(rho)? - cross)
}

/// Reduced state on the mode named `keep`.
pub fn partial_trace(rho: &FockState, keep: &str) -> Result<FockState> {
    let k = rho.mode_index(keep)?;
    if rho.n_modes() != 2 {
        return Err(Error::DimensionMismatch("partial trace needs a two-mode state".into()));
    }
    let (da, db) = (rho.mode_dims[0], rho.mode_dims[1]);
    let out = if k == 0 {
        DMatrix::from_fn(da, da, |a, a2| (0..db).map(|b| rho.matrix[(a * db + b, a2 * db + b)]).sum())
    } else {
        DMatrix::from_fn(db, db, |b, b2| (0..da).map(|a| rho.matrix[(a * db + b, a * db + b2)]).sum())
    };
    let mut s = FockState::assemble(vec![rho.mode_dims[k]], out, vec![keep.to_string()], vec![rho.register[k]])?;
    s.drift = rho.drift;
    Ok(s)
}

/// `S(target, memory) - S(memory)`.
pub fn conditional_entropy(rho: &FockState, target: &str, memory: &str) -> Result<f64> {
    rho.mode_index(target)?;
    rho.mode_index(memory)?;
    if target == memory {
        return Err(Error::Label(target.to_string()));
    }
    Ok(von_neumann_entropy(rho)? - von_neumann_entropy(&partial_trace(rho, memory)?)?)
}

/// Mean photon number `⟨a†a⟩` of one mode.
pub fn mean_energy(rho: &FockState, mode: &str) -> Result<f64> {
    let k = rho.mode_index(mode)?;
    Ok(rho.expect_ladder(&[(k, true), (k, false)]).re)
}

/// Quadrature mean vector and symmetrized covariance matrix.
pub fn moments_of_state(rho: &FockState) -> (DVector<f64>, DMatrix<f64>) {
    let n = rho.n_modes();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    // R = u·a + v·a† for each quadrature.
    let coeff = |q: usize| -> (usize, C64, C64) {
        let mode = q / 2;
        if q % 2 == 0 {
            (mode, c(s), c(s))
        } else {
            (mode, C64::new(0.0, -s), C64::new(0.0, s))
        }
    };
    let first = |q: usize| -> f64 {
        let (m, u, v) = coeff(q);
        (u * rho.expect_ladder(&[(m, false)]) + v * rho.expect_ladder(&[(m, true)])).re
    };
    let mean = DVector::from_fn(2 * n, |q, _| first(q));
    let mut cov = DMatrix::zeros(2 * n, 2 * n);
    for p in 0..2 * n {
        for q in p..2 * n {
            let (m1, u1, v1) = coeff(p);
            let (m2, u2, v2) = coeff(q);
            let mut e = C64::new(0.0, 0.0);
            for (c1, d1) in [(u1, false), (v1, true)] {
                for (c2, d2) in [(u2, false), (v2, true)] {
                    e += c1 * c2 * rho.expect_ladder(&[(m1, d1), (m2, d2)]);
                }
            }
            let val = e.re - mean[p] * mean[q];
            cov[(p, q)] = val;
            cov[(q, p)] = val;
        }
    }
    (mean, cov)
}

/// `‖ρ - σ‖₁`, embedding both into the larger cutoffs first.
pub fn trace_norm_distance(rho: &FockState, sigma: &FockState) -> Result<f64> {
    if rho.n_modes() != sigma.n_modes() {
        return Err(Error::DimensionMismatch("different numbers of modes".into()));
    }
    let dims: Vec<usize> = rho.mode_dims.iter().zip(&sigma.mode_dims).map(|(a, b)| *a.max(b)).collect();
    let a = embed_raw(rho, &dims);
    let b = embed_raw(sigma, &dims);
    Ok(crate::linalg::trace_norm(&(a - b)))
}

/// Half the trace norm.
pub fn trace_distance(rho: &FockState, sigma: &FockState) -> Result<f64> {
    Ok(0.5 * trace_norm_distance(rho, sigma)?)
}

fn embed_raw(rho: &FockState, dims: &[usize]) -> DMatrix<C64> {
    if rho.mode_dims == dims {
        return rho.matrix.clone();
    }
    let new_dim: usize = dims.iter().product();
    let map: Vec<usize> = (0..rho.dim())
        .map(|i| {
            let mut out = 0;
            for (k, &d) in dims.iter().enumerate() {
                out = out * d + rho.occupation(i, k);
            }
            out
        })
        .collect();
    let mut m = DMatrix::zeros(new_dim, new_dim);
    for j in 0..rho.dim() {
        for i in 0..rho.dim() {
            m[(map[i], map[j])] = rho.matrix[(i, j)];
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{g_function, symplectic_eigenvalues};
    use proptest::prelude::*;

    #[test]
    fn basic_entropies() {
        assert!(von_neumann_entropy(&vacuum(10).unwrap()).unwrap().abs() < 1e-14);
        let th = thermal(1.0, 60).unwrap();
        assert!((von_neumann_entropy(&th).unwrap() - g_function(1.0).unwrap()).abs() < 1e-7);
        let mixed = diagonal_state(&[1.0; 7], "A").unwrap_err();
        assert!(matches!(mixed, Error::Tail { .. }));
        let reg = FockState::with_registers(
            vec![7],
            DMatrix::identity(7, 7) / c(7.0),
            vec!["M".into()],
            vec![true],
        )
        .unwrap();
        assert!((von_neumann_entropy(&reg).unwrap() - 7f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn tail_invariant_enforced() {
        assert!(matches!(thermal(3.0, 20), Err(Error::Tail { .. })));
        let s = with_auto_cutoff(20, |d| thermal(3.0, d)).unwrap();
        assert!(s.tail_mass() <= TAIL_LIMIT);
    }

    #[test]
    fn coherent_moments() {
        let alpha = C64::new(1.0, 0.5);
        let s = coherent(alpha, 60).unwrap();
        let (m, cov) = moments_of_state(&s);
        assert!((m[0] - std::f64::consts::SQRT_2).abs() < 1e-10);
        assert!((m[1] - 0.5 * std::f64::consts::SQRT_2).abs() < 1e-10);
        assert!((cov - DMatrix::identity(2, 2) * 0.5).amax() < 1e-10);
        assert!((mean_energy(&s, "A").unwrap() - 1.25).abs() < 1e-10);
    }

    #[test]
    fn tmsv_marginal_is_thermal() {
        let k = 1.5;
        let r = squeezing_for_k(k);
        let s = with_auto_cutoff(40, |d| two_mode_squeezed_vacuum(r, d)).unwrap();
        let a = partial_trace(&s, "A").unwrap();
        let expect = thermal(r.sinh().powi(2), a.dim()).unwrap();
        assert!(trace_norm_distance(&a, &expect).unwrap() < 1e-7);
        let (_, cov) = moments_of_state(&s);
        let nus = symplectic_eigenvalues(&cov).unwrap();
        assert!(nus.iter().all(|nu| (nu - 0.5).abs() < 1e-6));
        assert!((cov[(0, 0)] - k * k).abs() < 1e-6);
        assert!((cov[(0, 2)] - (k.powi(4) - 0.25).sqrt()).abs() < 1e-6);
        assert!((cov[(1, 3)] + (k.powi(4) - 0.25).sqrt()).abs() < 1e-6);
        let ce = conditional_entropy(&s, "A", "M").unwrap();
        assert!((ce + g_function(r.sinh().powi(2)).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn displacement_property_and_phase() {
        let d = 60;
        let xi = [1.2, -0.7];
        let s = displaced(&vacuum(d).unwrap(), xi).unwrap();
        let (m, cov) = moments_of_state(&s);
        assert!((m[0] - xi[0]).abs() < 1e-6 && (m[1] - xi[1]).abs() < 1e-6);
        assert!((cov - DMatrix::identity(2, 2) * 0.5).amax() < 1e-6);

        // D(ξ)D(η) = exp(+(i/2) ξ·Δ⁻¹η) D(ξ+η), with Δ⁻¹η = (-η₂, η₁).
        let eta = [-0.4, 0.9];
        let lhs = displacement_operator(xi, d) * displacement_operator(eta, d);
        let rhs = displacement_operator([xi[0] + eta[0], xi[1] + eta[1]], d);
        let omega = -xi[0] * eta[1] + xi[1] * eta[0];
        let phase = C64::new(0.0, 0.5 * omega).exp();
        let h = d / 2;
        let diff = lhs.view((0, 0), (h, h)) - rhs.view((0, 0), (h, h)) * phase;
        assert!(crate::linalg::max_abs(&diff) < 1e-6);
    }

    #[test]
    fn relative_entropy_closed_form() {
        let (mu, lambda): (f64, f64) = (1.0, 0.5);
        let q = (lambda / mu).powi(2);
        let d = 40;
        let omega = diagonal_state(&geometric_populations(q, d), "A").unwrap();
        let one = fock(1, d).unwrap();
        let dr = relative_entropy(&one, &omega).unwrap();
        assert!((dr - (-(1.0 - q).ln() - q.ln())).abs() < 1e-10);
        assert!(relative_entropy(&omega, &omega).unwrap().abs() < 1e-10);
        assert_eq!(relative_entropy(&vacuum(d).unwrap(), &one).unwrap(), f64::INFINITY);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn relative_entropy_nonnegative(s1 in 0u64..1000, s2 in 0u64..1000, r1 in 1usize..5, r2 in 1usize..5) {
            let a = random_mixed(r1, 12, s1).unwrap();
            let b = random_mixed(r2.max(6), 12, s2).unwrap();
            let d = relative_entropy(&a, &b).unwrap();
            prop_assert!(d >= -1e-10);
            prop_assert!(relative_entropy(&a, &a).unwrap().abs() < 1e-8);
        }

        #[test]
        fn partial_trace_preserves_trace(s1 in 0u64..1000, s2 in 0u64..1000) {
            let a = random_mixed(2, 8, s1).unwrap();
            let b = random_mixed(3, 6, s2).unwrap().relabel(&["M"]).unwrap();
            let ab = a.tensor(&b).unwrap();
            let back = partial_trace(&ab, "A").unwrap();
            prop_assert!((trace(&back.matrix).re - 1.0).abs() < 1e-10);
            prop_assert!(trace_norm_distance(&back, &a).unwrap() < 1e-10);
            let ce = conditional_entropy(&ab, "A", "M").unwrap();
            prop_assert!((ce - von_neumann_entropy(&a).unwrap()).abs() < 1e-9);
        }

        #[test]
        fn displacement_keeps_entropy_and_is_unitary(x in -1.4f64..1.4, y in -1.4f64..1.4, seed in 0u64..100) {
            let d = 60;
            let rho = random_mixed(3, d, seed).unwrap().resized(&[d]).unwrap();
            // Keep the support low so the displaced state stays inside the cutoff.
            let low = rho.resized(&[12]).unwrap().resized(&[d]).unwrap();
            let s = displaced(&low, [x, y]).unwrap();
            prop_assert!((von_neumann_entropy(&s).unwrap() - von_neumann_entropy(&low).unwrap()).abs() < 1e-6);
            let dm = displacement_operator([x, y], d);
            let u = dm.adjoint() * &dm;
            let h = d / 2;
            let defect = crate::linalg::max_abs(&(u.view((0, 0), (h, h)) - DMatrix::<C64>::identity(h, h)));
            prop_assert!(defect < 1e-6);
        }
    }
}
