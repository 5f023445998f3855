//! Conditional entropies with classical or quantum memory, the integral
//! conditional Fisher information and its derivative at `t = 0`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{quantum_heat_flow_fock, CQState, ExtendedInput, RegisterState};
use crate::error::{Error, Result};
use crate::fock::{conditional_entropy, von_neumann_entropy, FockState};
use crate::gaussian::{gaussian_conditional_entropy, gaussian_entropy, gaussian_heat_flow, GaussianState};

/// Base step of the forward differences.
pub const FISHER_STEP: f64 = 1e-2;
/// Largest accepted `uncertainty / |value|`.
pub const FISHER_REL_TOLERANCE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FisherEstimate {
    pub value: f64,
    pub step: f64,
    pub richardson_order: u32,
    pub uncertainty: f64,
}

/// A classical system `R` with memory `M`.
#[derive(Debug, Clone)]
pub enum ClassicalMemory {
    Cq(CQState),
    Register(RegisterState),
}

impl ClassicalMemory {
    pub fn heat_flow(&self, t: f64) -> Result<Self> {
        Ok(match self {
            Self::Cq(s) => Self::Cq(s.heat_flow_r(t)?),
            Self::Register(s) => Self::Register(s.heat_flow_r(t)?),
        })
    }
}

/// A quantum mode `A` with memory `M`, which may be absent, a second mode or
/// a classical register.
#[derive(Debug, Clone)]
pub enum QuantumMemory {
    Fock { rho: FockState, target: String, memory: Option<String> },
    Gaussian { state: GaussianState, target: String, memory: Option<String> },
    Register(RegisterState),
}

impl QuantumMemory {
    /// One-mode Fock state without memory.
    pub fn fock(rho: FockState) -> Self {
        let target = rho.mode_labels[0].clone();
        let memory = rho.mode_labels.get(1).cloned();
        Self::Fock { rho, target, memory }
    }

    /// Gaussian state whose first mode is `A` and second (if any) is `M`.
    pub fn gaussian(state: GaussianState) -> Self {
        let target = state.mode_labels[0].clone();
        let memory = state.mode_labels.get(1).cloned();
        Self::Gaussian { state, target, memory }
    }

    /// `S(A|M)`, or `S(A)` without memory.
    pub fn conditional_entropy(&self) -> Result<f64> {
        match self {
            Self::Fock { rho, target, memory: Some(m) } => conditional_entropy(rho, target, m),
            Self::Fock { rho, .. } => von_neumann_entropy(rho),
            Self::Gaussian { state, target, memory: Some(m) } => gaussian_conditional_entropy(state, target, m),
            Self::Gaussian { state, .. } => gaussian_entropy(state),
            Self::Register(r) => r.entropy_a_given_m(),
        }
    }

    /// Quantum heat flow on `A`.
    pub fn heat_flow(&self, t: f64) -> Result<Self> {
        Ok(match self {
            Self::Fock { rho, target, memory } => Self::Fock {
                rho: quantum_heat_flow_fock(rho, t, target)?,
                target: target.clone(),
                memory: memory.clone(),
            },
            Self::Gaussian { state, target, memory } => Self::Gaussian {
                state: gaussian_heat_flow(state, t, target)?,
                target: target.clone(),
                memory: memory.clone(),
            },
            Self::Register(r) => Self::Register(r.heat_flow_a(t)?),
        })
    }

    /// Largest top-level population over the Fock states involved.
    pub fn tail_mass(&self) -> Option<f64> {
        match self {
            Self::Fock { rho, .. } => Some(rho.tail_mass()),
            Self::Gaussian { .. } => None,
            Self::Register(r) => Some(r.a_states.iter().map(|a| a.tail_mass()).fold(0.0, f64::max)),
        }
    }
}

/// `S(R|M)`.
pub fn cq_conditional_entropy_r_given_m(state: &ClassicalMemory) -> Result<f64> {
    let s = match state {
        ClassicalMemory::Cq(s) => s.conditional_entropy_r_given_m()?,
        ClassicalMemory::Register(r) => r.entropy_r_given_m()?,
    };
    if !s.is_finite() {
        return Err(Error::InfiniteEntropy(format!("S(R|M) = {s}")));
    }
    Ok(s)
}

/// `Δ_{R|M}(t)`: increase of `S(R|M)` under classical heat flow for time `t`.
pub fn integral_fisher_r_given_m(state: &ClassicalMemory, t: f64) -> Result<f64> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeTime(t));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    Ok(cq_conditional_entropy_r_given_m(&state.heat_flow(t)?)? - cq_conditional_entropy_r_given_m(state)?)
}

/// `Δ_{A|M}(t)` for a quantum target.
pub fn integral_fisher_a_given_m(state: &QuantumMemory, t: f64) -> Result<f64> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeTime(t));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    Ok(state.heat_flow(t)?.conditional_entropy()? - state.conditional_entropy()?)
}

/// Forward-difference derivative at zero of `entropy_at`, extrapolated over
/// steps `h₀, h₀/2, h₀/4`.
pub fn richardson_derivative<F>(entropy_at: F, h0: f64) -> Result<FisherEstimate>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let points = [0.0, h0, h0 / 2.0, h0 / 4.0];
    let values: Vec<Result<f64>> = points.par_iter().map(|&t| entropy_at(t)).collect();
    let values: Vec<f64> = values.into_iter().collect::<Result<_>>()?;
    let d = |k: usize| (values[k] - values[0]) / points[k];
    let (d1, d2, d4) = (d(1), d(2), d(3));
    let r1_h = 2.0 * d2 - d1;
    let r1_half = 2.0 * d4 - d2;
    let value = (4.0 * r1_half - r1_h) / 3.0;
    let uncertainty = (value - r1_half).abs();
    if !value.is_finite() || uncertainty > FISHER_REL_TOLERANCE * value.abs() {
        return Err(Error::Convergence { value, uncertainty });
    }
    Ok(FisherEstimate { value, step: h0, richardson_order: 2, uncertainty })
}

/// `J(R|M)` from the derivative of `S(R|M)` along classical heat flow.
pub fn fisher_r_given_m(state: &ClassicalMemory) -> Result<FisherEstimate> {
    fisher_r_given_m_with_step(state, FISHER_STEP)
}

pub fn fisher_r_given_m_with_step(state: &ClassicalMemory, h0: f64) -> Result<FisherEstimate> {
    richardson_derivative(
        |t| {
            if t == 0.0 {
                cq_conditional_entropy_r_given_m(state)
            } else {
                cq_conditional_entropy_r_given_m(&state.heat_flow(t)?)
            }
        },
        h0,
    )
}

/// `J(A|M)` from the derivative of `S(A|M)` along quantum heat flow.
pub fn fisher_a_given_m(state: &QuantumMemory) -> Result<FisherEstimate> {
    fisher_a_given_m_with_step(state, FISHER_STEP)
}

pub fn fisher_a_given_m_with_step(state: &QuantumMemory, h0: f64) -> Result<FisherEstimate> {
    richardson_derivative(
        |t| {
            if t == 0.0 {
                state.conditional_entropy()
            } else {
                state.heat_flow(t)?.conditional_entropy()
            }
        },
        h0,
    )
}

/// `I(A:R|M) = S(A|M) + S(R|M) - S(AR|M)` on the supported families and on
/// generic classical-quantum states.
pub fn conditional_mutual_information(input: &ExtendedInput) -> Result<f64> {
    match input {
        ExtendedInput::Independent { noise, rho_am } => {
            let memory = rho_am.mode_labels.get(1).cloned().unwrap_or_else(|| rho_am.mode_labels[0].clone());
            if rho_am.n_modes() == 1 {
                return Ok(0.0);
            }
            CQState::product(noise, rho_am, &memory)?.conditional_mutual_information()
        }
        ExtendedInput::Register(r) => {
            let s_a = r.entropy_a_given_m()?;
            let s_r = r.entropy_r_given_m()?;
            // Given the label, A and R are in a product state.
            let s_ar: f64 = (0..r.labels.len())
                .map(|m| {
                    Ok(r.probs[m]
                        * (von_neumann_entropy(&r.a_states[m])? + crate::phase_space::shannon_entropy(&r.noises[m])))
                })
                .sum::<Result<f64>>()?;
            Ok(s_a + s_r - s_ar)
        }
        ExtendedInput::Generic(cq) => cq.conditional_mutual_information(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{fock, thermal, vacuum};
    use crate::phase_space::{gaussian_pdf, GridSpec};

    fn gauss(t: f64, h: f64) -> crate::phase_space::GridPdf {
        gaussian_pdf(t, [0.0, 0.0], &GridSpec::new(h)).unwrap()
    }

    #[test]
    fn classical_gaussian_fisher_is_inverse_variance() {
        for s in [0.5, 1.0, 2.0] {
            let cm = ClassicalMemory::Cq(CQState::product(&gauss(s, 0.1), &vacuum(4).unwrap(), "A").unwrap());
            let j = fisher_r_given_m(&cm).unwrap();
            assert!((j.value - 1.0 / s).abs() < 1e-3 / s, "s={s}: {j:?}");
            let d = integral_fisher_r_given_m(&cm, 0.7).unwrap();
            assert!((d - ((s + 0.7) / s).ln()).abs() < 1e-4);
        }
    }

    #[test]
    fn thermal_fisher_matches_closed_form() {
        let nu: f64 = 2.0;
        let expect = ((nu + 0.5) / (nu - 0.5)).ln();
        let g = GaussianState::thermal(nu - 0.5, "A").unwrap();
        let jg = fisher_a_given_m(&QuantumMemory::gaussian(g)).unwrap();
        assert!((jg.value - expect).abs() < 1e-5, "{jg:?}");
        let rho = crate::fock::with_auto_cutoff(60, |d| thermal(nu - 0.5, d)).unwrap();
        let jf = fisher_a_given_m(&QuantumMemory::fock(rho)).unwrap();
        assert!((jf.value - expect).abs() < 1e-4, "{jf:?}");
        assert!(jf.uncertainty < 1e-3);
    }

    #[test]
    fn pure_state_estimates_grow_as_step_shrinks() {
        // S(t) ~ -t log t for pure inputs, so the derivative at zero is infinite.
        let q = QuantumMemory::fock(fock(1, 30).unwrap());
        let coarse = fisher_a_given_m_with_step(&q, 1e-2).map(|j| j.value).unwrap_or(f64::INFINITY);
        let fine = fisher_a_given_m_with_step(&q, 1e-4).map(|j| j.value).unwrap_or(f64::INFINITY);
        assert!(fine > coarse + 3.0, "{coarse} vs {fine}");
    }

    #[test]
    fn register_cmi_vanishes() {
        let reg = RegisterState::new(
            vec!["0".into(), "1".into()],
            vec![0.5, 0.5],
            vec![fock(1, 20).unwrap(), thermal(0.5, 30).unwrap()],
            vec![gauss(0.5, 0.1), gauss(1.0, 0.1)],
        )
        .unwrap();
        assert!(conditional_mutual_information(&ExtendedInput::Register(reg)).unwrap().abs() < 1e-8);
        let two = fock(1, 6).unwrap().tensor(&vacuum(3).unwrap().relabel(&["M"]).unwrap()).unwrap();
        let i = conditional_mutual_information(&ExtendedInput::Independent { noise: gauss(0.5, 0.1), rho_am: two });
        assert!(i.unwrap().abs() < 1e-8);
    }

    #[test]
    fn integral_fisher_zero_at_origin() {
        let q = QuantumMemory::fock(thermal(1.0, 60).unwrap());
        assert_eq!(integral_fisher_a_given_m(&q, 0.0).unwrap(), 0.0);
        assert!(integral_fisher_a_given_m(&q, -1.0).is_err());
    }
}
