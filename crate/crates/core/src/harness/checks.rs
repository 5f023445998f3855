use std::f64::consts::E;

use rayon::prelude::*;
use serde_json::json;

use crate::channels::{
    beam_splitter_product, classical_noise_channel, extended_channel, midpoint_noise_channel, qou_channel_fock,
    qou_environment, quantum_heat_flow_fock, ExtendedInput, ExtendedOutput, RegisterState,
};
use crate::error::{Error, Result};
use crate::fock::{self, von_neumann_entropy, FockState};
use crate::gaussian::{
    g_function, gaussian_conditional_entropy, gaussian_entropy, gaussian_heat_flow, gaussian_qou_evolution,
    qou_transmissivity, relative_entropy_to_thermal_product, tightness_family, GaussianState,
};
use crate::linalg::neg_xlogx;
use crate::measures::{
    cq_conditional_entropy_r_given_m, fisher_a_given_m, richardson_derivative, ClassicalMemory, FisherEstimate,
    QuantumMemory, FISHER_STEP,
};
use crate::phase_space::{
    classical_convolution, classical_heat_flow, energy, gaussian_pdf, moments, shannon_entropy, GridPdf, GridSpec,
};

use super::report::CheckReport;

/// Tolerance on closed-form Gaussian margins (arithmetic only).
pub const GAUSSIAN_TOLERANCE: f64 = 1e-9;
/// Tolerance on Fock-path entropy margins.
pub const FOCK_TOLERANCE: f64 = 1e-3;
/// Largest disagreement accepted between two evaluation paths.
pub const CROSS_PATH_TOLERANCE: f64 = 1e-4;

/// Instances of the conditional EPI with `A` and `R` independent given `M`.
#[derive(Debug, Clone)]
pub enum EpiInstance {
    /// Gaussian state on `A` (and optionally `M`) with noise `f_{Z,t}`.
    Gaussian { state: GaussianState, noise_t: f64 },
    /// `R` independent of `AM`.
    Independent { noise: GridPdf, rho_am: FockState },
    Register(RegisterState),
}

impl EpiInstance {
    pub fn tolerance(&self) -> f64 {
        match self {
            Self::Gaussian { .. } => GAUSSIAN_TOLERANCE,
            _ => FOCK_TOLERANCE,
        }
    }

    pub fn path(&self) -> &'static str {
        match self {
            Self::Gaussian { .. } => "gaussian",
            Self::Independent { .. } => "fock",
            Self::Register(_) => "register",
        }
    }
}

/// `S(A|M)`, `S(R|M)`, `S(C|M)` and the Fock tail of the output.
#[derive(Debug, Clone, Copy)]
pub struct EpiEntropies {
    pub s_a: f64,
    pub s_r: f64,
    pub s_c: f64,
    pub tail_mass: Option<f64>,
    pub cutoff: Option<usize>,
}

fn gaussian_cond(state: &GaussianState) -> Result<f64> {
    match state.mode_labels.get(1) {
        Some(m) => gaussian_conditional_entropy(state, &state.mode_labels[0], m),
        None => gaussian_entropy(state),
    }
}

fn fock_cond(rho: &FockState) -> Result<f64> {
    match rho.mode_labels.get(1) {
        Some(m) => fock::conditional_entropy(rho, &rho.mode_labels[0], m),
        None => von_neumann_entropy(rho),
    }
}

/// `1 + ln t`, the entropy of `f_{Z,t}` under the `dξ/(2π)` measure.
pub fn gaussian_noise_entropy(t: f64) -> f64 {
    1.0 + t.ln()
}

pub fn epi_entropies(inst: &EpiInstance) -> Result<EpiEntropies> {
    match inst {
        EpiInstance::Gaussian { state, noise_t } => {
            let out = gaussian_heat_flow(state, *noise_t, &state.mode_labels[0])?;
            Ok(EpiEntropies {
                s_a: gaussian_cond(state)?,
                s_r: gaussian_noise_entropy(*noise_t),
                s_c: gaussian_cond(&out)?,
                tail_mass: None,
                cutoff: None,
            })
        }
        EpiInstance::Independent { noise, rho_am } => {
            let input = ExtendedInput::Independent { noise: noise.clone(), rho_am: rho_am.clone() };
            let ExtendedOutput::Joint(out) = extended_channel(&input)? else {
                return Err(Error::InvalidState("independent family produced a register".into()));
            };
            Ok(EpiEntropies {
                s_a: fock_cond(rho_am)?,
                s_r: shannon_entropy(noise),
                s_c: fock_cond(&out)?,
                tail_mass: Some(rho_am.tail_mass().max(out.tail_mass())),
                cutoff: Some(*out.mode_dims.iter().max().unwrap_or(&0)),
            })
        }
        EpiInstance::Register(reg) => {
            let ExtendedOutput::Register(out) = extended_channel(&ExtendedInput::Register(reg.clone()))? else {
                return Err(Error::InvalidState("register family produced a joint state".into()));
            };
            let tail = out.a_states.iter().chain(&reg.a_states).map(|a| a.tail_mass()).fold(0.0, f64::max);
            let cutoff = out.a_states.iter().map(|a| a.dim()).max();
            Ok(EpiEntropies {
                s_a: reg.entropy_a_given_m()?,
                s_r: reg.entropy_r_given_m()?,
                s_c: out.entropy_a_given_m()?,
                tail_mass: Some(tail),
                cutoff,
            })
        }
    }
}

fn with_fock_diagnostics(mut r: CheckReport, e: &EpiEntropies) -> CheckReport {
    if let Some(t) = e.tail_mass {
        r = r.diag("tail_mass", t);
    }
    if let Some(c) = e.cutoff {
        r = r.diag("cutoff", c);
    }
    r.diag("s_a_given_m", e.s_a).diag("s_r_given_m", e.s_r).diag("s_c_given_m", e.s_c)
}

/// `exp S(C|M) ≥ exp S(A|M) + exp S(R|M)`.
pub fn check_conditional_epi(inst: &EpiInstance) -> Result<CheckReport> {
    let e = epi_entropies(inst)?;
    let r = CheckReport::new("conditional_epi", e.s_c.exp(), e.s_a.exp() + e.s_r.exp(), inst.tolerance())
        .param("path", inst.path());
    Ok(with_fock_diagnostics(r, &e))
}

/// Binary entropy `-λ ln λ - (1-λ) ln(1-λ)`.
fn mixing_entropy(lambda: f64) -> f64 {
    neg_xlogx(lambda) + neg_xlogx(1.0 - lambda)
}

/// The weight `e^{S(A|M)} / (e^{S(A|M)} + e^{S(R|M)})` that turns the linear
/// form into the exponential one.
pub fn optimal_lambda(s_a: f64, s_r: f64) -> f64 {
    1.0 / (1.0 + (s_r - s_a).exp())
}

/// `S(C|M) ≥ λ S(A|M) + (1-λ) S(R|M) + H(λ)`; `None` uses the optimal `λ`.
pub fn check_linear_epi(inst: &EpiInstance, lambda: Option<f64>) -> Result<CheckReport> {
    if let Some(l) = lambda {
        if !(0.0..=1.0).contains(&l) {
            return Err(Error::Domain(format!("lambda {l} outside [0, 1]")));
        }
    }
    let e = epi_entropies(inst)?;
    let l = lambda.unwrap_or_else(|| optimal_lambda(e.s_a, e.s_r));
    let rhs = l * e.s_a + (1.0 - l) * e.s_r + mixing_entropy(l);
    let r = CheckReport::new("linear_epi", e.s_c, rhs, inst.tolerance())
        .param("path", inst.path())
        .param("lambda", if lambda.is_some() { json!(l) } else { json!("optimal") })
        .diag("lambda_value", l);
    Ok(with_fock_diagnostics(r, &e))
}

/// `J(R)` of a single density from its entropy along classical heat flow.
pub fn fisher_classical(f: &GridPdf) -> Result<FisherEstimate> {
    richardson_derivative(|t| Ok(shannon_entropy(&classical_heat_flow(f, t)?)), FISHER_STEP)
}

/// `J(A|M)`, `J(R|M)`, `J(C|M)` for an EPI instance.
pub fn stam_fishers(inst: &EpiInstance) -> Result<[FisherEstimate; 3]> {
    match inst {
        EpiInstance::Gaussian { state, noise_t } => {
            let out = gaussian_heat_flow(state, *noise_t, &state.mode_labels[0])?;
            let exact_r = FisherEstimate { value: 1.0 / noise_t, step: 0.0, richardson_order: 0, uncertainty: 0.0 };
            Ok([fisher_a_given_m(&QuantumMemory::gaussian(state.clone()))?, exact_r, fisher_a_given_m(&QuantumMemory::gaussian(out))?])
        }
        EpiInstance::Independent { noise, rho_am } => {
            let input = ExtendedInput::Independent { noise: noise.clone(), rho_am: rho_am.clone() };
            let ExtendedOutput::Joint(out) = extended_channel(&input)? else {
                return Err(Error::InvalidState("independent family produced a register".into()));
            };
            Ok([
                fisher_a_given_m(&QuantumMemory::fock(rho_am.clone()))?,
                fisher_classical(noise)?,
                fisher_a_given_m(&QuantumMemory::fock(out))?,
            ])
        }
        EpiInstance::Register(reg) => {
            let ExtendedOutput::Register(out) = extended_channel(&ExtendedInput::Register(reg.clone()))? else {
                return Err(Error::InvalidState("register family produced a joint state".into()));
            };
            Ok([
                fisher_a_given_m(&QuantumMemory::Register(reg.clone()))?,
                crate::measures::fisher_r_given_m(&ClassicalMemory::Register(reg.clone()))?,
                fisher_a_given_m(&QuantumMemory::Register(out))?,
            ])
        }
    }
}

/// `1/J(C|M) ≥ 1/J(A|M) + 1/J(R|M)`, tolerance `max(1e-2·rhs, 3σ)` with `σ`
/// the propagated uncertainty of the reciprocals.
pub fn check_stam(inst: &EpiInstance) -> Result<CheckReport> {
    let [ja, jr, jc] = stam_fishers(inst)?;
    let lhs = 1.0 / jc.value;
    let rhs = 1.0 / ja.value + 1.0 / jr.value;
    let sigma = [ja, jr, jc].iter().map(|j| j.uncertainty / (j.value * j.value)).sum::<f64>();
    let tolerance = (1e-2 * rhs.abs()).max(3.0 * sigma);
    Ok(CheckReport::new("stam", lhs, rhs, tolerance)
        .param("path", inst.path())
        .diag("j_a_given_m", ja.value)
        .diag("j_r_given_m", jr.value)
        .diag("j_c_given_m", jc.value)
        .diag("fisher_uncertainties", json!([ja.uncertainty, jr.uncertainty, jc.uncertainty])))
}

/// Deviation `|S(R|M)(t) - ln t - 1|` must decrease along `t_list` and end
/// below `ln(1 + σ²/t) + 0.02`.
pub fn check_scaling(state: &ClassicalMemory, sigma2: f64, t_list: &[f64]) -> Result<CheckReport> {
    if t_list.is_empty() || t_list.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::Parameter("scaling needs positive times".into()));
    }
    let devs: Vec<f64> = t_list
        .par_iter()
        .map(|&t| Ok((cq_conditional_entropy_r_given_m(&state.heat_flow(t)?)? - t.ln() - 1.0).abs()))
        .collect::<Result<_>>()?;
    let t_max = *t_list.last().unwrap_or(&1.0);
    let bound = (1.0 + sigma2 / t_max).ln() + 0.02;
    let last = *devs.last().unwrap_or(&0.0);
    let mut r = CheckReport::new("scaling", bound, last, 0.0)
        .param("t_list", json!(t_list))
        .diag("deviations", json!(devs))
        .diag("sigma2", sigma2);
    for w in devs.windows(2) {
        r = r.require(w[0] - w[1]);
    }
    Ok(r)
}

/// Largest per-quadrature variance of the `R` marginals.
pub fn noise_variance(f: &GridPdf) -> f64 {
    let (_, cov) = moments(f);
    cov.symmetric_eigenvalues().max()
}

/// Convergence of the optimal family: the gap `|exp S(C|M)_k - e^a - e^b|`
/// decreases with `k` and is at most `0.01` at the last `k`; `S(R|M) = b`;
/// every member satisfies the conditional EPI on the Gaussian path.
pub fn check_tightness(a: f64, b: f64, k_list: &[f64], grid: &GridSpec) -> Result<CheckReport> {
    if k_list.is_empty() {
        return Err(Error::Parameter("tightness needs at least one k".into()));
    }
    let target = a.exp() + b.exp();
    let mut gaps = Vec::new();
    let mut epi_margins = Vec::new();
    let mut s_a_values = Vec::new();
    let mut s_r_grid = 0.0;
    for &k in k_list {
        let inst = tightness_family(k, a, b, grid)?;
        let s_a = gaussian_conditional_entropy(&inst.input, "A", "M")?;
        let s_c = gaussian_conditional_entropy(&inst.output, "A", "M")?;
        let s_r = gaussian_noise_entropy((b - 1.0).exp());
        s_r_grid = shannon_entropy(&inst.noise);
        gaps.push((s_c.exp() - target).abs());
        epi_margins.push(s_c.exp() - s_a.exp() - s_r.exp());
        s_a_values.push(s_a);
    }
    let s_r = gaussian_noise_entropy((b - 1.0).exp());
    let last = *gaps.last().unwrap_or(&f64::INFINITY);
    let mut r = CheckReport::new("tightness", 0.01, last, GAUSSIAN_TOLERANCE)
        .param("a", a)
        .param("b", b)
        .param("k_list", json!(k_list))
        .diag("gaps", json!(gaps))
        .diag("epi_margins", json!(epi_margins))
        .diag("s_a_given_m", json!(s_a_values))
        .diag("s_r_given_m", s_r)
        .diag("s_r_given_m_grid", s_r_grid)
        .diag("grid_spacing", grid.spacing);
    for w in gaps.windows(2) {
        // Strict decrease.
        r = r.require(if w[1] < w[0] { w[0] - w[1] } else { -1.0 });
    }
    for m in &epi_margins {
        r = r.require(*m);
    }
    if (s_r - b).abs() > GAUSSIAN_TOLERANCE {
        r = r.require(-(s_r - b).abs());
    }
    Ok(r)
}

/// Target of the isoperimetric inequalities.
#[derive(Debug, Clone)]
pub enum IsoInstance {
    Quantum(QuantumMemory),
    Classical(GridPdf),
}

/// `J·exp S ≥ e`, tolerance `1e-2·e`.
pub fn check_isoperimetric(inst: &IsoInstance) -> Result<CheckReport> {
    let (j, s, path) = match inst {
        IsoInstance::Quantum(q) => (fisher_a_given_m(q)?, q.conditional_entropy()?, "quantum"),
        IsoInstance::Classical(f) => (fisher_classical(f)?, shannon_entropy(f), "classical"),
    };
    let lhs = j.value * s.exp();
    let mut r = CheckReport::new("isoperimetric", lhs, E, 1e-2 * E)
        .param("path", path)
        .diag("fisher", j.value)
        .diag("fisher_uncertainty", j.uncertainty)
        .diag("entropy", s)
        .diag("ratio", lhs / E);
    if let IsoInstance::Quantum(q) = inst {
        if let Some(t) = q.tail_mass() {
            r = r.diag("tail_mass", t);
        }
    }
    Ok(r)
}

/// `d/dt [1/J(A|M)(t)] at 0 ≥ 1`, by a second-order forward difference with
/// step `delta`; tolerance is three times the propagated Fisher uncertainty.
pub fn check_fisher_isoperimetric(q: &QuantumMemory, delta: f64) -> Result<CheckReport> {
    let times = [0.0, delta, 2.0 * delta];
    let js: Vec<FisherEstimate> = times
        .par_iter()
        .map(|&t| if t == 0.0 { fisher_a_given_m(q) } else { fisher_a_given_m(&q.heat_flow(t)?) })
        .collect::<Result<_>>()?;
    let u: Vec<f64> = js.iter().map(|j| 1.0 / j.value).collect();
    let su: Vec<f64> = js.iter().map(|j| j.uncertainty / (j.value * j.value)).collect();
    let deriv = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * delta);
    let sigma = (3.0 * su[0] + 4.0 * su[1] + su[2]) / (2.0 * delta);
    Ok(CheckReport::new("fisher_isoperimetric", deriv, 1.0, 3.0 * sigma)
        .param("delta", delta)
        .diag("inverse_fisher", json!(u))
        .diag("fisher_uncertainties", json!(js.iter().map(|j| j.uncertainty).collect::<Vec<_>>())))
}

/// Second divided difference of `exp S(A|M)(t)` on a uniform grid must stay
/// below `1e-3` at every interior point.
pub fn check_concavity_entropy_power(q: &QuantumMemory, t_grid: &[f64]) -> Result<CheckReport> {
    if t_grid.len() < 3 {
        return Err(Error::Parameter("concavity needs at least three times".into()));
    }
    let h = t_grid[1] - t_grid[0];
    if t_grid.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.max(1.0)) || !(h > 0.0) {
        return Err(Error::Parameter("concavity needs a uniform increasing grid".into()));
    }
    let powers: Vec<f64> = t_grid
        .par_iter()
        .map(|&t| {
            let s = if t == 0.0 { q.conditional_entropy()? } else { q.heat_flow(t)?.conditional_entropy()? };
            Ok(s.exp())
        })
        .collect::<Result<_>>()?;
    let second: Vec<f64> = powers.windows(3).map(|w| (w[2] - 2.0 * w[1] + w[0]) / (h * h)).collect();
    let worst = second.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut r = CheckReport::new("concavity", 0.0, worst, 1e-3)
        .param("t_grid", json!(t_grid))
        .diag("entropy_powers", json!(powers))
        .diag("second_differences", json!(second));
    if let Some(t) = q.tail_mass() {
        r = r.diag("tail_mass", t);
    }
    Ok(r)
}

/// Source of an integral Fisher information curve.
#[derive(Debug, Clone)]
pub enum DeltaInstance {
    Classical(ClassicalMemory),
    Quantum(QuantumMemory),
}

impl DeltaInstance {
    fn entropy_at(&self, t: f64) -> Result<f64> {
        match self {
            Self::Classical(c) => {
                if t == 0.0 {
                    cq_conditional_entropy_r_given_m(c)
                } else {
                    cq_conditional_entropy_r_given_m(&c.heat_flow(t)?)
                }
            }
            Self::Quantum(q) => {
                if t == 0.0 {
                    q.conditional_entropy()
                } else {
                    q.heat_flow(t)?.conditional_entropy()
                }
            }
        }
    }
}

/// `Δ(t) = S(t) - S(0)` is nonnegative, nondecreasing and concave along an
/// increasing `t_grid` (with `Δ(0) = 0` prepended).
pub fn check_regularity(inst: &DeltaInstance, t_grid: &[f64]) -> Result<CheckReport> {
    const SLACK: f64 = 1e-6;
    let mut times = vec![0.0];
    times.extend_from_slice(t_grid);
    let s: Vec<f64> = times.par_iter().map(|&t| inst.entropy_at(t)).collect::<Result<_>>()?;
    let delta: Vec<f64> = s.iter().map(|v| v - s[0]).collect();
    let mut r = CheckReport::with_margin("de_bruijn_regularity", 0.0, 0.0, f64::INFINITY, SLACK)
        .param("t_grid", json!(t_grid))
        .param("path", match inst {
            DeltaInstance::Classical(_) => "classical",
            DeltaInstance::Quantum(_) => "quantum",
        })
        .diag("delta", json!(delta));
    for d in &delta[1..] {
        r = r.require(*d);
    }
    for w in delta.windows(2) {
        r = r.require(w[1] - w[0]);
    }
    // Concavity: each point lies above the chord through its neighbours.
    for (w, d) in times.windows(3).zip(delta.windows(3)) {
        let chord = ((w[2] - w[1]) * d[0] + (w[1] - w[0]) * d[2]) / (w[2] - w[0]);
        r = r.require(d[1] - chord);
    }
    r.lhs = *delta.last().unwrap_or(&0.0);
    Ok(r)
}

/// Compares `Δ_{R|M}(t)` from heat flow with the mutual-information form
/// `Σ_m p_m I(R:Z | M=m) = Σ_m p_m [S(f^{(m)} ⋆ f_{Z,t}) - S(f^{(m)})]`, the
/// convolution being summed directly on the grid.
pub fn check_de_bruijn_consistency(reg: &RegisterState, t: f64) -> Result<CheckReport> {
    let heat = crate::measures::integral_fisher_r_given_m(&ClassicalMemory::Register(reg.clone()), t)?;
    let h = reg.noises[0].spacing;
    let z = gaussian_pdf(t, [0.0, 0.0], &GridSpec::new(h))?;
    let mut info = 0.0;
    for (p, f) in reg.probs.iter().zip(&reg.noises) {
        info += p * (shannon_entropy(&classical_convolution(f, &z)?) - shannon_entropy(f));
    }
    Ok(CheckReport::with_margin("de_bruijn_consistency", heat, info, -(heat - info).abs(), CROSS_PATH_TOLERANCE)
        .param("t", t)
        .diag("grid_spacing", h))
}

/// `g(E + E₀) - ln(e^{-g(E)} + e^{S₀})` with `E₀ = E(f)/2`, `S₀ = S(f)`.
pub fn capacity_bound(e: f64, f: &GridPdf) -> Result<f64> {
    if !(e > 0.0) {
        return Err(Error::Domain(format!("energy {e} must be positive")));
    }
    let e0 = energy(f) / 2.0;
    let s0 = shannon_entropy(f);
    Ok(g_function(e + e0)? - ((-g_function(e)?).exp() + s0.exp()).ln())
}

pub fn check_capacity(e: f64, f: &GridPdf) -> Result<CheckReport> {
    let v = capacity_bound(e, f)?;
    Ok(CheckReport::new("capacity", v, 0.0, 0.0)
        .param("E", e)
        .diag("noise_energy", energy(f))
        .diag("noise_entropy", shannon_entropy(f))
        .diag("grid_spacing", f.spacing))
}

/// The bound is nondecreasing along an increasing list of energies.
pub fn check_capacity_monotone(energies: &[f64], f: &GridPdf) -> Result<CheckReport> {
    let values: Vec<f64> = energies.iter().map(|&e| capacity_bound(e, f)).collect::<Result<_>>()?;
    let mut r = CheckReport::with_margin("capacity_monotone", 0.0, 0.0, f64::INFINITY, 0.0)
        .param("E_list", json!(energies))
        .diag("bounds", json!(values));
    for w in values.windows(2) {
        r = r.require(w[1] - w[0]);
    }
    Ok(r)
}

/// Inputs of the qOU decay check.
#[derive(Debug, Clone)]
pub enum QouInstance {
    Fock(FockState),
    Gaussian(GaussianState),
    Register { probs: Vec<f64>, states: Vec<FockState> },
}

/// `D(ρ ∥ ω)` for a one-mode Fock state and the untruncated thermal `ω`.
fn fock_relative_entropy_to_fixed_point(rho: &FockState, mu: f64, lambda: f64) -> Result<f64> {
    let q = (lambda / mu).powi(2);
    let n = fock::mean_energy(rho, &rho.mode_labels[0])?;
    Ok(-von_neumann_entropy(rho)? - (1.0 - q).ln() - n * q.ln())
}

fn qou_divergence(inst: &QouInstance, t: f64, mu: f64, lambda: f64) -> Result<(f64, Option<f64>)> {
    match inst {
        QouInstance::Fock(rho) => {
            let out = qou_channel_fock(rho, t, mu, lambda)?;
            Ok((fock_relative_entropy_to_fixed_point(&out, mu, lambda)?, Some(out.tail_mass())))
        }
        QouInstance::Gaussian(g) => {
            let out = gaussian_qou_evolution(g, t, mu, lambda, &g.mode_labels[0])?;
            Ok((relative_entropy_to_thermal_product(&out, mu, lambda)?, None))
        }
        QouInstance::Register { probs, states } => {
            // With a classical memory, D(ρ_AM ∥ ω ⊗ ρ_M) = Σ p_m D(ρ^{(m)} ∥ ω).
            let mut d = 0.0;
            let mut tail: f64 = 0.0;
            for (p, rho) in probs.iter().zip(states) {
                let out = qou_channel_fock(rho, t, mu, lambda)?;
                d += p * fock_relative_entropy_to_fixed_point(&out, mu, lambda)?;
                tail = tail.max(out.tail_mass());
            }
            Ok((d, Some(tail)))
        }
    }
}

/// `e^{-(μ²-λ²)t} D(0) - D(t) ≥ 0` for every `t`, one report per time.
pub fn check_qou_decay(inst: &QouInstance, mu: f64, lambda: f64, t_list: &[f64]) -> Result<Vec<CheckReport>> {
    let (d0, _) = qou_divergence(inst, 0.0, mu, lambda)?;
    let (path, tol) = match inst {
        QouInstance::Gaussian(_) => ("gaussian", GAUSSIAN_TOLERANCE),
        QouInstance::Fock(_) => ("fock", 1e-4),
        QouInstance::Register { .. } => ("register", 1e-4),
    };
    t_list
        .par_iter()
        .map(|&t| {
            let (dt, tail) = qou_divergence(inst, t, mu, lambda)?;
            let rhs_bound = qou_transmissivity(t, mu, lambda) * d0;
            let mut r = CheckReport::new("qou_decay", rhs_bound, dt, tol)
                .param("t", t)
                .param("mu", mu)
                .param("lambda", lambda)
                .param("path", path)
                .diag("initial_divergence", d0);
            if let Some(tm) = tail {
                r = r.diag("tail_mass", tm);
            }
            Ok(r)
        })
        .collect()
}

/// `‖P(t)(ω) - ω‖₁ ≤ 1e-5`.
pub fn check_qou_fixed_point(mu: f64, lambda: f64, t: f64) -> Result<CheckReport> {
    let w = qou_environment(mu, lambda)?.relabel(&["A"])?;
    let out = qou_channel_fock(&w, t, mu, lambda)?;
    let dist = fock::trace_norm_distance(&out, &w)?;
    Ok(CheckReport::with_margin("qou_fixed_point", dist, 0.0, -dist, 1e-5)
        .param("t", t)
        .param("mu", mu)
        .param("lambda", lambda)
        .diag("cutoff", w.dim()))
}

/// `‖P(s)P(t)ρ - P(s+t)ρ‖₁ ≤ 1e-5`.
pub fn check_qou_semigroup(rho: &FockState, s: f64, t: f64, mu: f64, lambda: f64) -> Result<CheckReport> {
    let two = qou_channel_fock(&qou_channel_fock(rho, t, mu, lambda)?, s, mu, lambda)?;
    let one = qou_channel_fock(rho, s + t, mu, lambda)?;
    let dist = fock::trace_norm_distance(&two, &one)?;
    Ok(CheckReport::with_margin("qou_semigroup", dist, 0.0, -dist, 1e-5)
        .param("s", s)
        .param("t", t)
        .param("mu", mu)
        .param("lambda", lambda)
        .diag("tail_mass", two.tail_mass().max(one.tail_mass())))
}

/// `exp S(C) ≥ λ exp S(A) + (1-λ) exp S(B)` for a product input.
pub fn check_beam_splitter_epi(rho_a: &FockState, rho_b: &FockState, lambda: f64) -> Result<CheckReport> {
    let out = beam_splitter_product(rho_a, rho_b, lambda)?;
    let (sa, sb, sc) = (von_neumann_entropy(rho_a)?, von_neumann_entropy(rho_b)?, von_neumann_entropy(&out)?);
    Ok(CheckReport::new("bs_epi", sc.exp(), lambda * sa.exp() + (1.0 - lambda) * sb.exp(), 1e-4)
        .param("lambda", lambda)
        .diag("tail_mass", rho_a.tail_mass().max(rho_b.tail_mass()).max(out.tail_mass()))
        .diag("cutoff", out.dim()))
}

/// `exp S(g ⋆ f) ≥ exp S(g) + exp S(f)` in two real dimensions.
pub fn check_classical_epi(g: &GridPdf, f: &GridPdf) -> Result<CheckReport> {
    let c = classical_convolution(g, f)?;
    let (sg, sf, sc) = (shannon_entropy(g), shannon_entropy(f), shannon_entropy(&c));
    Ok(CheckReport::new("classical_epi", sc.exp(), sg.exp() + sf.exp(), 1e-3).diag("grid_spacing", g.spacing))
}

/// Fock entropies and moments against the Gaussian closed forms.
pub fn check_cross_representation(rho: &FockState, twin: &GaussianState) -> Result<CheckReport> {
    let mut diffs = vec![(von_neumann_entropy(rho)? - gaussian_entropy(twin)?).abs()];
    if rho.n_modes() == 2 {
        diffs.push((fock_cond(rho)? - gaussian_cond(twin)?).abs());
        let a = fock::partial_trace(rho, &rho.mode_labels[0])?;
        diffs.push((von_neumann_entropy(&a)? - gaussian_entropy(&twin.reduced(&[&twin.mode_labels[0]])?)?).abs());
    }
    let (mean, cov) = fock::moments_of_state(rho);
    let dm = (mean - &twin.mean).amax();
    let dc = (cov - &twin.cov).amax();
    let worst = diffs.iter().copied().chain([dm, dc]).fold(0.0, f64::max);
    Ok(CheckReport::with_margin("cross_representation", worst, 0.0, -worst, 1e-6)
        .diag("entropy_differences", json!(diffs))
        .diag("mean_difference", dm)
        .diag("covariance_difference", dc)
        .diag("cutoff", rho.mode_dims[0])
        .diag("tail_mass", rho.tail_mass()))
}

/// `vacuum ⋆ f_{Z,t}` against `g(t)`, through both quadratures.
pub fn check_convolution_oracle(t: f64, midpoint_spacing: f64) -> Result<CheckReport> {
    let vac = fock::vacuum(8)?;
    let exact = g_function(t)?;
    let radial = von_neumann_entropy(&quantum_heat_flow_fock(&vac, t, "A")?)?;
    let f = gaussian_pdf(t, [0.0, 0.0], &GridSpec::new(midpoint_spacing))?;
    let mid_state = midpoint_noise_channel(&f, &vac, "A")?;
    let midpoint = von_neumann_entropy(&mid_state)?;
    let worst = (radial - exact).abs().max((midpoint - exact).abs());
    Ok(CheckReport::with_margin("convolution_oracle", radial, exact, -worst, 1e-4)
        .param("t", t)
        .diag("midpoint_entropy", midpoint)
        .diag("grid_spacing", midpoint_spacing)
        .diag("cutoff", mid_state.dim())
        .diag("tail_mass", mid_state.tail_mass()))
}

/// The Fock and Gaussian paths of one instance agree on all three entropies.
pub fn check_epi_cross_path(fock_inst: &EpiInstance, gaussian_inst: &EpiInstance) -> Result<CheckReport> {
    let a = epi_entropies(fock_inst)?;
    let b = epi_entropies(gaussian_inst)?;
    let worst = [(a.s_a - b.s_a).abs(), (a.s_r - b.s_r).abs(), (a.s_c - b.s_c).abs()].into_iter().fold(0.0, f64::max);
    Ok(with_fock_diagnostics(
        CheckReport::with_margin("epi_cross_path", worst, 0.0, -worst, CROSS_PATH_TOLERANCE),
        &a,
    ))
}

/// Register state from labels' states and per-label noises.
pub fn register_instance(probs: &[f64], states: Vec<FockState>, noises: Vec<GridPdf>) -> Result<RegisterState> {
    let labels = (0..probs.len()).map(|i| i.to_string()).collect();
    RegisterState::new(labels, probs.to_vec(), states, noises)
}

/// `f ⋆ ρ` on one label's state, exposed for examples.
pub fn convolve(f: &GridPdf, rho: &FockState) -> Result<FockState> {
    classical_noise_channel(f, rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::squeezing_for_k;
    use proptest::prelude::*;

    fn tmsv(k: f64) -> GaussianState {
        GaussianState::two_mode_squeezed(squeezing_for_k(k))
    }

    #[test]
    fn linear_epi_rejects_bad_lambda() {
        let inst = EpiInstance::Gaussian { state: tmsv(2.0), noise_t: 1.0 };
        assert!(matches!(check_linear_epi(&inst, Some(1.5)), Err(Error::Domain(_))));
    }

    #[test]
    fn capacity_monotone_on_gaussian_noise() {
        let f = gaussian_pdf(0.5, [0.0, 0.0], &GridSpec::new(0.1)).unwrap();
        let r = check_capacity_monotone(&[0.25, 0.5, 1.0, 2.0, 4.0], &f).unwrap();
        assert!(r.pass && r.margin > 0.0, "{r:?}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn gaussian_epi_holds_for_thermal_inputs(n in 0.0f64..5.0, t in 0.05f64..5.0) {
            let inst = EpiInstance::Gaussian { state: GaussianState::thermal(n, "A").unwrap(), noise_t: t };
            let r = check_conditional_epi(&inst).unwrap();
            prop_assert!(r.pass && r.is_consistent(), "{:?}", r);
        }

        #[test]
        fn optimal_lambda_is_the_hardest_linear_case(k in 1.0f64..4.0, t in 0.05f64..3.0, l in 0.0f64..=1.0) {
            let inst = EpiInstance::Gaussian { state: tmsv(k), noise_t: t };
            let opt = check_linear_epi(&inst, None).unwrap();
            let any = check_linear_epi(&inst, Some(l)).unwrap();
            prop_assert!(opt.pass && any.pass);
            prop_assert!(any.margin >= opt.margin - 1e-12);
            // At the optimum the linear and exponential forms agree in sign.
            let exp_form = check_conditional_epi(&inst).unwrap();
            prop_assert_eq!(opt.margin >= 0.0, exp_form.margin >= 0.0);
        }
    }
}
