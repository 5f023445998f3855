//! Covariance-matrix calculus for Gaussian states.
//!
//! Conventions: `[Q, P] = i`, vacuum covariance `½·I`, quadratures ordered
//! `(Q_1, P_1, Q_2, P_2, ...)` with one consecutive pair per labelled mode.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::phase_space::{gaussian_pdf, GridPdf, GridSpec};

const PAIRING_TOLERANCE: f64 = 1e-8;
const PHYSICALITY_SLACK: f64 = 1e-9;

/// Block-diagonal symplectic form with blocks `((0, 1), (-1, 0))`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    pub n_modes: usize,
    pub matrix: DMatrix<f64>,
}

impl SymplecticForm {
    pub fn new(n_modes: usize) -> Self {
        let mut matrix = DMatrix::zeros(2 * n_modes, 2 * n_modes);
        for k in 0..n_modes {
            matrix[(2 * k, 2 * k + 1)] = 1.0;
            matrix[(2 * k + 1, 2 * k)] = -1.0;
        }
        Self { n_modes, matrix }
    }
}

/// First and second moments of a Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    pub mean: DVector<f64>,
    pub cov: DMatrix<f64>,
    pub mode_labels: Vec<String>,
}

impl GaussianState {
    /// Validates shape, symmetry and the uncertainty principle.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>, mode_labels: Vec<String>) -> Result<Self> {
        let n = mode_labels.len();
        if n == 0 || cov.nrows() != 2 * n || cov.ncols() != 2 * n || mean.len() != 2 * n {
            return Err(Error::DimensionMismatch(format!(
                "{n} labels for a {}x{} covariance and mean of length {}",
                cov.nrows(),
                cov.ncols(),
                mean.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        if !mode_labels.iter().all(|l| seen.insert(l.as_str())) {
            return Err(Error::Label(mode_labels.join(",")));
        }
        let scale = cov.amax().max(1e-300);
        if (&cov - cov.transpose()).amax() > 1e-10 * scale {
            return Err(Error::InvalidState("covariance matrix is not symmetric".into()));
        }
        let nus = symplectic_eigenvalues(&cov)?;
        if let Some(nu) = nus.iter().find(|&&nu| nu < 0.5 - PHYSICALITY_SLACK) {
            return Err(Error::InvalidState(format!("symplectic eigenvalue {nu} below 1/2")));
        }
        Ok(Self { mean, cov, mode_labels })
    }

    fn unchecked(mean: DVector<f64>, cov: DMatrix<f64>, mode_labels: Vec<String>) -> Self {
        Self { mean, cov, mode_labels }
    }

    pub fn n_modes(&self) -> usize {
        self.mode_labels.len()
    }

    pub fn vacuum(label: &str) -> Self {
        Self::unchecked(DVector::zeros(2), DMatrix::identity(2, 2) * 0.5, vec![label.to_string()])
    }

    /// Thermal state with mean photon number `n`.
    pub fn thermal(n: f64, label: &str) -> Result<Self> {
        if n < 0.0 {
            return Err(Error::Domain(format!("mean photon number {n} < 0")));
        }
        Ok(Self::unchecked(DVector::zeros(2), DMatrix::identity(2, 2) * (n + 0.5), vec![label.to_string()]))
    }

    /// Coherent state with amplitude `alpha`; mean `(√2 Re α, √2 Im α)`.
    pub fn coherent(alpha: C64, label: &str) -> Self {
        let s = std::f64::consts::SQRT_2;
        Self::unchecked(
            DVector::from_vec(vec![s * alpha.re, s * alpha.im]),
            DMatrix::identity(2, 2) * 0.5,
            vec![label.to_string()],
        )
    }

    /// Two-mode squeezed vacuum with squeezing `r` on modes `A`, `M`.
    pub fn two_mode_squeezed(r: f64) -> Self {
        let k2 = (2.0 * r).cosh() / 2.0;
        Self::unchecked(DVector::zeros(4), tightness_covariance_k2(k2), vec!["A".into(), "M".into()])
    }

    pub fn tensor(&self, other: &GaussianState) -> Result<Self> {
        let (n, m) = (self.cov.nrows(), other.cov.nrows());
        let mut cov = DMatrix::zeros(n + m, n + m);
        cov.view_mut((0, 0), (n, n)).copy_from(&self.cov);
        cov.view_mut((n, n), (m, m)).copy_from(&other.cov);
        let mean = DVector::from_iterator(n + m, self.mean.iter().chain(other.mean.iter()).copied());
        let mut labels = self.mode_labels.clone();
        labels.extend(other.mode_labels.iter().cloned());
        GaussianState::new(mean, cov, labels)
    }

    pub fn mode_index(&self, label: &str) -> Result<usize> {
        self.mode_labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Label(label.to_string()))
    }

    /// Marginal state on the listed modes, in the listed order.
    pub fn reduced(&self, labels: &[&str]) -> Result<GaussianState> {
        let idx: Vec<usize> = labels.iter().map(|l| self.mode_index(l)).collect::<Result<_>>()?;
        let rows: Vec<usize> = idx.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect();
        let n = rows.len();
        let cov = DMatrix::from_fn(n, n, |i, j| self.cov[(rows[i], rows[j])]);
        let mean = DVector::from_fn(n, |i, _| self.mean[rows[i]]);
        Ok(Self::unchecked(mean, cov, labels.iter().map(|s| s.to_string()).collect()))
    }

    /// Mean photon number of one mode.
    pub fn mean_photon_number(&self, label: &str) -> Result<f64> {
        let k = self.mode_index(label)?;
        let tr = self.cov[(2 * k, 2 * k)] + self.cov[(2 * k + 1, 2 * k + 1)];
        let d2 = self.mean[2 * k].powi(2) + self.mean[2 * k + 1].powi(2);
        Ok(tr / 2.0 - 0.5 + d2 / 2.0)
    }
}

fn tightness_covariance_k2(k2: f64) -> DMatrix<f64> {
    let c = (k2 * k2 - 0.25).max(0.0).sqrt();
    let mut g = DMatrix::identity(4, 4) * k2;
    g[(0, 2)] = c;
    g[(2, 0)] = c;
    g[(1, 3)] = -c;
    g[(3, 1)] = -c;
    g
}

/// Covariance of the pure two-mode family with `k²` on the diagonal blocks
/// and `±√(k⁴ - ¼)` correlations.
pub fn tightness_covariance(k: f64) -> DMatrix<f64> {
    tightness_covariance_k2(k * k)
}

/// Absolute values of the eigenvalues of `Δ⁻¹Γ`, one per ± pair, descending.
///
/// Computed as the spectrum of the Hermitian matrix `i Γ^{1/2} Δ Γ^{1/2}`,
/// which is similar to `iΔΓ` and hence has eigenvalues `±ν_k`.
pub fn symplectic_eigenvalues(cov: &DMatrix<f64>) -> Result<Vec<f64>> {
    let dim = cov.nrows();
    if dim == 0 || dim % 2 != 0 || cov.ncols() != dim {
        return Err(Error::DimensionMismatch(format!("covariance of shape {}x{}", dim, cov.ncols())));
    }
    let sym = (cov + cov.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let min = eig.eigenvalues.min();
    if !(min > 0.0) {
        return Err(Error::NonPositive(min));
    }
    let sqrt_vals = eig.eigenvalues.map(f64::sqrt);
    let root = &eig.eigenvectors * DMatrix::from_diagonal(&sqrt_vals) * eig.eigenvectors.transpose();
    let delta = SymplecticForm::new(dim / 2).matrix;
    let k = &root * delta * &root;
    let herm = DMatrix::<C64>::from_fn(dim, dim, |i, j| C64::new(0.0, k[(i, j)]));
    let mut vals: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(|a, b| a.total_cmp(b));
    let n = dim / 2;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let neg = -vals[i];
        let pos = vals[dim - 1 - i];
        let scale = neg.abs().max(pos.abs()).max(1e-300);
        if pos <= 0.0 || (neg - pos).abs() > PAIRING_TOLERANCE * scale {
            return Err(Error::Pairing(format!("{neg} vs {pos}")));
        }
        out.push(0.5 * (neg + pos));
    }
    Ok(out)
}

/// `g(N) = (N+1) ln(N+1) - N ln N`, the entropy of a thermal state.
pub fn g_function(n: f64) -> Result<f64> {
    if n < 0.0 || n.is_nan() {
        return Err(Error::Domain(format!("g is defined for N >= 0, got {n}")));
    }
    if n == 0.0 {
        return Ok(0.0);
    }
    Ok(n.ln_1p() + n * (1.0 / n).ln_1p())
}

/// `g(ν - ½)` with tiny negative arguments from rounding treated as zero.
fn g_of_nu(nu: f64) -> Result<f64> {
    let n = nu - 0.5;
    if n < 0.0 && n > -PHYSICALITY_SLACK {
        return Ok(0.0);
    }
    g_function(n)
}

fn entropy_of_cov(cov: &DMatrix<f64>) -> Result<f64> {
    symplectic_eigenvalues(cov)?.into_iter().map(g_of_nu).sum()
}

/// Von Neumann entropy `Σ g(ν_k - ½)`.
pub fn gaussian_entropy(state: &GaussianState) -> Result<f64> {
    entropy_of_cov(&state.cov)
}

/// `S(target, memory) - S(memory)`.
pub fn gaussian_conditional_entropy(state: &GaussianState, target: &str, memory: &str) -> Result<f64> {
    let joint = state.reduced(&[target, memory])?;
    let mem = state.reduced(&[memory])?;
    Ok(gaussian_entropy(&joint)? - gaussian_entropy(&mem)?)
}

/// Quantum heat semigroup on one mode: `Γ_target += t·I`.
pub fn gaussian_heat_flow(state: &GaussianState, t: f64, target: &str) -> Result<GaussianState> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeTime(t));
    }
    let k = state.mode_index(target)?;
    let mut out = state.clone();
    out.cov[(2 * k, 2 * k)] += t;
    out.cov[(2 * k + 1, 2 * k + 1)] += t;
    Ok(out)
}

/// Members of the optimal family for the conditional EPI.
#[derive(Debug, Clone)]
pub struct TightnessInstance {
    pub k: f64,
    pub a: f64,
    pub b: f64,
    /// Input state: the pure two-mode state heat-flowed by `e^{a-1}` on `A`.
    pub input: GaussianState,
    /// Classical noise `f_{Z, e^{b-1}}`.
    pub noise: GridPdf,
    /// Output of the extended channel on `C, M`.
    pub output: GaussianState,
}

/// Builds the tightness family at parameter `k`.
pub fn tightness_family(k: f64, a: f64, b: f64, grid: &GridSpec) -> Result<TightnessInstance> {
    if !(k >= 1.0) {
        return Err(Error::Domain(format!("tightness family needs k >= 1, got {k}")));
    }
    let base = GaussianState::new(DVector::zeros(4), tightness_covariance(k), vec!["A".into(), "M".into()])?;
    let (ta, tb) = ((a - 1.0).exp(), (b - 1.0).exp());
    let input = gaussian_heat_flow(&base, ta, "A")?;
    let noise = gaussian_pdf(tb, [0.0, 0.0], grid)?;
    let output = gaussian_heat_flow(&input, tb, "A")?;
    Ok(TightnessInstance { k, a, b, input, noise, output })
}

fn check_qou_parameters(mu: f64, lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && mu > lambda && mu.is_finite()) {
        return Err(Error::Parameter(format!("need mu > lambda > 0, got mu={mu}, lambda={lambda}")));
    }
    Ok(())
}

/// Transmissivity of the beam splitter equivalent to the qOU semigroup.
pub fn qou_transmissivity(t: f64, mu: f64, lambda: f64) -> f64 {
    (-(mu * mu - lambda * lambda) * t).exp()
}

/// Diagonal entry of the fixed-point covariance.
pub fn qou_fixed_point_variance(mu: f64, lambda: f64) -> f64 {
    0.5 * (lambda * lambda + mu * mu) / (mu * mu - lambda * lambda)
}

/// Fixed point `ω^{(μ,λ)}` as a Gaussian state.
pub fn qou_fixed_point(mu: f64, lambda: f64, label: &str) -> Result<GaussianState> {
    check_qou_parameters(mu, lambda)?;
    let v = qou_fixed_point_variance(mu, lambda);
    Ok(GaussianState::unchecked(DVector::zeros(2), DMatrix::identity(2, 2) * v, vec![label.to_string()]))
}

/// Quantum Ornstein-Uhlenbeck evolution of one mode, via its beam-splitter form.
pub fn gaussian_qou_evolution(
    state: &GaussianState,
    t: f64,
    mu: f64,
    lambda: f64,
    target: &str,
) -> Result<GaussianState> {
    check_qou_parameters(mu, lambda)?;
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeTime(t));
    }
    let k = state.mode_index(target)?;
    let eta = qou_transmissivity(t, mu, lambda);
    let s = eta.sqrt();
    let w = qou_fixed_point_variance(mu, lambda);
    let mut out = state.clone();
    let dim = state.cov.nrows();
    for r in [2 * k, 2 * k + 1] {
        for c in 0..dim {
            if c / 2 != k {
                out.cov[(r, c)] *= s;
                out.cov[(c, r)] *= s;
            }
        }
        out.mean[r] *= s;
    }
    for r in [2 * k, 2 * k + 1] {
        for c in [2 * k, 2 * k + 1] {
            let id = if r == c { w } else { 0.0 };
            out.cov[(r, c)] = eta * state.cov[(r, c)] + (1.0 - eta) * id;
        }
    }
    Ok(out)
}

/// `D(ρ_AM ∥ ω_A ⊗ ρ_M)` for the first mode `A` and, if present, the second
/// mode `M`. Uses `log ω = log(1-q)·I + log q·n̂` with `q = λ²/μ²`.
pub fn relative_entropy_to_thermal_product(state: &GaussianState, mu: f64, lambda: f64) -> Result<f64> {
    check_qou_parameters(mu, lambda)?;
    let q = (lambda / mu).powi(2);
    let a = state.mode_labels[0].clone();
    let cond = match state.mode_labels.get(1) {
        Some(m) => gaussian_conditional_entropy(state, &a, m)?,
        None => gaussian_entropy(state)?,
    };
    let n = state.mean_photon_number(&a)?;
    Ok(-cond - (1.0 - q).ln() - n * q.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const G_1_5: f64 = 1.682_529_167_523_141_1;
    const G_3_5: f64 = 2.383_677_895_759_445_4;

    fn two_mode_closed_form(a: f64, b: f64, c: f64) -> (f64, f64) {
        let root = ((a + b).powi(2) - 4.0 * c * c).sqrt();
        ((root + (a - b)) / 2.0, (root - (a - b)) / 2.0)
    }

    #[test]
    fn g_values() {
        assert_eq!(g_function(0.0).unwrap(), 0.0);
        assert!((g_function(1.0).unwrap() - 2.0 * 2f64.ln()).abs() < 1e-15);
        assert!((g_function(1.5).unwrap() - G_1_5).abs() < 1e-14);
        assert!((g_function(3.5).unwrap() - G_3_5).abs() < 1e-14);
        assert!(matches!(g_function(-0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn symplectic_single_mode_and_pure_family() {
        let v = symplectic_eigenvalues(&(DMatrix::identity(2, 2) * 1.7)).unwrap();
        assert!((v[0] - 1.7).abs() < 1e-14);
        for k in [1.0, 2.0, 5.0, 10.0] {
            let nus = symplectic_eigenvalues(&tightness_covariance(k)).unwrap();
            for nu in nus {
                assert!((nu - 0.5).abs() < 1e-8 * k * k, "k={k} nu={nu}");
            }
            let s = GaussianState::new(DVector::zeros(4), tightness_covariance(k), vec!["A".into(), "M".into()])
                .unwrap();
            assert!(gaussian_entropy(&s).unwrap() <= 1e-8);
        }
    }

    #[test]
    fn heat_flowed_family_spectrum() {
        let s = GaussianState::new(DVector::zeros(4), tightness_covariance(2.0), vec!["A".into(), "M".into()])
            .unwrap();
        let f = gaussian_heat_flow(&s, 1.0, "A").unwrap();
        let nus = symplectic_eigenvalues(&f.cov).unwrap();
        let (p, m) = two_mode_closed_form(5.0, 4.0, (16f64 - 0.25).sqrt());
        assert!((nus[0] - p).abs() < 1e-10 && (nus[1] - m).abs() < 1e-10);
        assert!((nus[0] - 2.62132).abs() < 1e-4 && (nus[1] - 1.62132).abs() < 1e-4);
    }

    #[test]
    fn conditional_entropy_of_pure_family() {
        let s = GaussianState::new(DVector::zeros(4), tightness_covariance(2.0), vec!["A".into(), "M".into()])
            .unwrap();
        let c = gaussian_conditional_entropy(&s, "A", "M").unwrap();
        assert!((c + G_3_5).abs() < 1e-9);
        assert!(matches!(gaussian_conditional_entropy(&s, "A", "Z"), Err(Error::Label(_))));
    }

    #[test]
    fn conditional_entropy_approaches_gaussian_noise_value() {
        let t = 0.7;
        let mut prev = f64::INFINITY;
        for k in [2.0, 4.0, 8.0, 16.0] {
            let s = GaussianState::new(DVector::zeros(4), tightness_covariance(k), vec!["A".into(), "M".into()])
                .unwrap();
            let f = gaussian_heat_flow(&s, t, "A").unwrap();
            let gap = (gaussian_conditional_entropy(&f, "A", "M").unwrap() - (1.0 + t.ln())).abs();
            assert!(gap < prev);
            prev = gap;
        }
        assert!(prev < 1e-2);
    }

    #[test]
    fn product_conditional_entropy_is_marginal() {
        let a = GaussianState::thermal(0.8, "A").unwrap();
        let m = GaussianState::thermal(2.0, "M").unwrap();
        let p = a.tensor(&m).unwrap();
        let c = gaussian_conditional_entropy(&p, "A", "M").unwrap();
        assert!((c - g_function(0.8).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn tightness_output_limits() {
        let grid = GridSpec::new(0.1);
        let inst = tightness_family(16.0, 0.0, 0.0, &grid).unwrap();
        let c = gaussian_conditional_entropy(&inst.output, "A", "M").unwrap();
        assert!((c.exp() - 2.0).abs() <= 0.01);
        assert!(matches!(tightness_family(0.5, 1.0, 1.0, &grid), Err(Error::Domain(_))));
    }

    #[test]
    fn qou_fixed_point_and_limits() {
        let w = qou_fixed_point(1.0, 0.5, "A").unwrap();
        let e = gaussian_qou_evolution(&w, 3.0, 1.0, 0.5, "A").unwrap();
        assert!((&e.cov - &w.cov).amax() < 1e-14);
        let th = GaussianState::thermal(2.0, "A").unwrap();
        let same = gaussian_qou_evolution(&th, 0.0, 1.0, 0.5, "A").unwrap();
        assert_eq!(same, th);
        let late = gaussian_qou_evolution(&th, 60.0, 1.0, 0.5, "A").unwrap();
        assert!((&late.cov - &w.cov).amax() < 1e-12);
        assert!(matches!(gaussian_qou_evolution(&th, 1.0, 0.5, 0.5, "A"), Err(Error::Parameter(_))));
    }

    #[test]
    fn relative_entropy_closed_forms() {
        let w = qou_fixed_point(1.0, 0.5, "A").unwrap();
        let m = GaussianState::thermal(0.3, "M").unwrap();
        let d = relative_entropy_to_thermal_product(&w.tensor(&m).unwrap(), 1.0, 0.5).unwrap();
        assert!(d.abs() < 1e-12);
        let th = GaussianState::thermal(1.0, "A").unwrap();
        let d = relative_entropy_to_thermal_product(&th, 1.0, 0.5).unwrap();
        let expect = -2.0 * 2f64.ln() - 0.75f64.ln() - 0.25f64.ln();
        assert!((d - expect).abs() < 1e-12);
    }

    fn random_state(v: &[f64]) -> GaussianState {
        // Physical by construction: a pure base state plus a positive matrix.
        let base = tightness_covariance(1.0 + v[0]);
        let x = DMatrix::from_fn(4, 4, |i, j| v[1 + (i * 4 + j) % 8] * if i == j { 1.0 } else { 0.3 });
        let cov = base + &x * x.transpose();
        let mean = DVector::from_vec(vec![v[2], v[3], v[4], v[5]]);
        GaussianState::new(mean, cov, vec!["A".into(), "M".into()]).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn flows_preserve_physicality(v in prop::collection::vec(0.0f64..1.5, 9), t in 0.0f64..3.0) {
            let s = random_state(&v);
            let h = gaussian_heat_flow(&s, t, "A").unwrap();
            prop_assert!(symplectic_eigenvalues(&h.cov).unwrap().iter().all(|&nu| nu >= 0.5 - 1e-9));
            let q = gaussian_qou_evolution(&s, t, 1.0, 0.5, "A").unwrap();
            prop_assert!(symplectic_eigenvalues(&q.cov).unwrap().iter().all(|&nu| nu >= 0.5 - 1e-9));
        }

        #[test]
        fn heat_semigroup_exact(v in prop::collection::vec(0.0f64..1.5, 9), s in 0.0f64..2.0, t in 0.0f64..2.0) {
            let st = random_state(&v);
            let two = gaussian_heat_flow(&gaussian_heat_flow(&st, s, "A").unwrap(), t, "A").unwrap();
            let one = gaussian_heat_flow(&st, s + t, "A").unwrap();
            prop_assert!((&two.cov - &one.cov).amax() <= 1e-14 * one.cov.amax());
        }

        #[test]
        fn entropy_nondecreasing_under_heat(v in prop::collection::vec(0.0f64..1.5, 9)) {
            let st = random_state(&v);
            let mut prev = gaussian_entropy(&st).unwrap();
            for t in [0.1, 0.3, 0.7, 1.5] {
                let e = gaussian_entropy(&gaussian_heat_flow(&st, t, "A").unwrap()).unwrap();
                prop_assert!(e >= prev - 1e-12);
                prev = e;
            }
        }

        #[test]
        fn qou_relative_entropy_decays(v in prop::collection::vec(0.0f64..1.5, 9), t in 0.0f64..3.0) {
            let st = random_state(&v);
            let d0 = relative_entropy_to_thermal_product(&st, 1.0, 0.5).unwrap();
            let evolved = gaussian_qou_evolution(&st, t, 1.0, 0.5, "A").unwrap();
            let dt = relative_entropy_to_thermal_product(&evolved, 1.0, 0.5).unwrap();
            prop_assert!(dt <= qou_transmissivity(t, 1.0, 0.5) * d0 + 1e-8);
        }

        #[test]
        fn spectrum_invariant_under_rotations(v in prop::collection::vec(0.0f64..1.5, 9), th in 0.0f64..6.3, ph in 0.0f64..6.3) {
            let st = random_state(&v);
            let mut r = DMatrix::zeros(4, 4);
            for (k, a) in [th, ph].into_iter().enumerate() {
                r[(2 * k, 2 * k)] = a.cos();
                r[(2 * k, 2 * k + 1)] = a.sin();
                r[(2 * k + 1, 2 * k)] = -a.sin();
                r[(2 * k + 1, 2 * k + 1)] = a.cos();
            }
            let rotated = &r * &st.cov * r.transpose();
            let a = symplectic_eigenvalues(&st.cov).unwrap();
            let b = symplectic_eigenvalues(&rotated).unwrap();
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-9);
            }
        }
    }
}
