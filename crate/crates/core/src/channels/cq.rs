//! Classical-quantum states and the memory-extended noise channel.
//!
//! A [`CQState`] stores `ρ_RX(ξ) = Σ_c w_c g_c(ξ) σ_c` as a finite mixture of
//! product components, with `g_c` normalized densities on a common grid and
//! `σ_c` normalized operators on `X = M` or `X = AM`. The conditional state at
//! a cell is the normalized mixture of the operators weighted by `w_c g_c(ξ)`.
//! A [`RegisterState`] is the special case where `M` is a classical label and
//! `A`, `R` are independent given the label.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{von_neumann_entropy, FockState};
use crate::linalg::{hermitian_eigenvalues, neg_xlogx, spectral_entropy, C64};
use crate::phase_space::{align, classical_heat_flow, mixture, shannon_entropy, GridPdf};

use super::noise::{classical_noise_channel, classical_noise_channel_on, quantum_heat_flow_fock};

/// Cells lighter than this are left out of per-cell conditional averages.
const CELL_SKIP: f64 = 1e-15;

#[derive(Debug, Clone)]
pub struct CQComponent {
    pub weight: f64,
    pub density: GridPdf,
    pub operator: FockState,
}

#[derive(Debug, Clone)]
pub struct CQState {
    components: Vec<CQComponent>,
    /// Label of the memory mode inside each operator.
    memory: String,
}

impl CQState {
    /// Builds a mixture; densities are embedded into a common grid.
    pub fn new(components: Vec<CQComponent>, memory: &str) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidState("classical-quantum state without components".into()));
        }
        let total: f64 = components.iter().map(|c| c.weight).sum();
        if components.iter().any(|c| c.weight < 0.0) || (total - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidState(format!("component weights sum to {total}")));
        }
        let first = &components[0].operator;
        for c in &components {
            if c.operator.mode_dims != first.mode_dims || c.operator.mode_labels != first.mode_labels {
                return Err(Error::DimensionMismatch("conditional operators differ in shape".into()));
            }
        }
        first.mode_index(memory)?;
        let densities: Vec<GridPdf> = components.iter().map(|c| c.density.clone()).collect();
        let aligned = align(&densities)?;
        let components = components
            .into_iter()
            .zip(aligned)
            .map(|(c, density)| CQComponent { weight: c.weight / total, density, operator: c.operator })
            .collect();
        Ok(Self { components, memory: memory.to_string() })
    }

    /// `f ⊗ ρ`: the density is independent of the quantum part.
    pub fn product(f: &GridPdf, rho: &FockState, memory: &str) -> Result<Self> {
        Self::new(vec![CQComponent { weight: 1.0, density: f.clone(), operator: rho.clone() }], memory)
    }

    pub fn components(&self) -> &[CQComponent] {
        &self.components
    }

    pub fn memory(&self) -> &str {
        &self.memory
    }

    /// `true` when the operators live on `AM` rather than on `M` alone.
    pub fn has_target(&self) -> bool {
        self.components[0].operator.n_modes() == 2
    }

    /// Marginal density of `R`.
    pub fn marginal_r(&self) -> Result<GridPdf> {
        let w: Vec<f64> = self.components.iter().map(|c| c.weight).collect();
        let d: Vec<GridPdf> = self.components.iter().map(|c| c.density.clone()).collect();
        let mut m = mixture(&w, &d)?;
        if self.components.len() == 1 {
            m.isotropic_variance = self.components[0].density.isotropic_variance;
        }
        Ok(m)
    }

    /// Marginal operator on `X` (the full quantum part).
    pub fn marginal_x(&self) -> Result<FockState> {
        let mut m = self.components[0].operator.matrix.clone() * C64::new(0.0, 0.0);
        for c in &self.components {
            m += &c.operator.matrix * C64::new(c.weight, 0.0);
        }
        let op = &self.components[0].operator;
        FockState::with_registers(op.mode_dims.clone(), m, op.mode_labels.clone(), op.register.clone())
    }

    /// Marginal operator on `M`.
    pub fn marginal_m(&self) -> Result<FockState> {
        let x = self.marginal_x()?;
        if self.has_target() {
            crate::fock::partial_trace(&x, &self.memory)
        } else {
            Ok(x)
        }
    }

    fn reduce_to_memory(&self, op: &FockState) -> Result<FockState> {
        if self.has_target() {
            crate::fock::partial_trace(op, &self.memory)
        } else {
            Ok(op.clone())
        }
    }

    /// `Σ_ξ w_ξ S(ρ_ξ)` with `ρ_ξ` the normalized cell mixture of `ops`.
    fn average_conditional_entropy(&self, ops: &[FockState]) -> Result<f64> {
        if ops.len() == 1 {
            return von_neumann_entropy(&ops[0]);
        }
        let grid = &self.components[0].density;
        let cw = grid.cell_weight();
        let diagonal = ops.iter().all(|o| is_diagonal(&o.matrix));
        let cells: Vec<usize> = (0..grid.size * grid.size).collect();
        let parts: Vec<Result<f64>> = cells
            .par_chunks(256)
            .map(|chunk| {
                let mut acc = 0.0;
                for &idx in chunk {
                    let coefs: Vec<f64> =
                        self.components.iter().map(|c| c.weight * c.density.values[idx] * cw).collect();
                    let mass: f64 = coefs.iter().sum();
                    if mass < CELL_SKIP {
                        continue;
                    }
                    let s = if diagonal {
                        let n = ops[0].dim();
                        let spectrum: Vec<f64> = (0..n)
                            .map(|k| coefs.iter().zip(ops).map(|(a, o)| a * o.matrix[(k, k)].re).sum::<f64>() / mass)
                            .collect();
                        spectral_entropy(&spectrum)?
                    } else {
                        let mut m = ops[0].matrix.clone() * C64::new(0.0, 0.0);
                        for (a, o) in coefs.iter().zip(ops) {
                            m += &o.matrix * C64::new(a / mass, 0.0);
                        }
                        spectral_entropy(&hermitian_eigenvalues(&m))?
                    };
                    acc += mass * s;
                }
                Ok(acc)
            })
            .collect();
        let mut total = 0.0;
        for p in parts {
            total += p?;
        }
        Ok(total)
    }

    /// `Σ_ξ w_ξ S(M|R=ξ)`.
    pub fn entropy_m_given_r(&self) -> Result<f64> {
        let ops: Vec<FockState> =
            self.components.iter().map(|c| self.reduce_to_memory(&c.operator)).collect::<Result<_>>()?;
        self.average_conditional_entropy(&ops)
    }

    /// `Σ_ξ w_ξ S(AM|R=ξ)`.
    pub fn entropy_x_given_r(&self) -> Result<f64> {
        let ops: Vec<FockState> = self.components.iter().map(|c| c.operator.clone()).collect();
        self.average_conditional_entropy(&ops)
    }

    /// `S(R|M) = S(M|R) + S(R) - S(M)`.
    pub fn conditional_entropy_r_given_m(&self) -> Result<f64> {
        let s_m_r = self.entropy_m_given_r()?;
        let s_r = shannon_entropy(&self.marginal_r()?);
        let s_m = von_neumann_entropy(&self.marginal_m()?)?;
        let out = s_m_r + s_r - s_m;
        if !out.is_finite() {
            return Err(Error::InfiniteEntropy("S(R|M) is not finite".into()));
        }
        Ok(out)
    }

    /// `I(A:R|M) = S(AM) - S(M) + Σ w S(M|ξ) - Σ w S(AM|ξ)`; zero when the
    /// operators carry no target mode.
    pub fn conditional_mutual_information(&self) -> Result<f64> {
        if !self.has_target() {
            return Ok(0.0);
        }
        let s_x = von_neumann_entropy(&self.marginal_x()?)?;
        let s_m = von_neumann_entropy(&self.marginal_m()?)?;
        Ok(s_x - s_m + self.entropy_m_given_r()? - self.entropy_x_given_r()?)
    }

    /// `(N_cl(t) ⊗ 1)` applied to the classical part.
    pub fn heat_flow_r(&self, t: f64) -> Result<CQState> {
        let components = self
            .components
            .iter()
            .map(|c| {
                Ok(CQComponent { weight: c.weight, density: classical_heat_flow(&c.density, t)?, operator: c.operator.clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        CQState::new(components, &self.memory)
    }

    /// Quantum heat flow on the target mode of every operator.
    pub fn heat_flow_a(&self, t: f64) -> Result<CQState> {
        let target = self.target_label()?;
        let components = self
            .components
            .iter()
            .map(|c| {
                Ok(CQComponent {
                    weight: c.weight,
                    density: c.density.clone(),
                    operator: quantum_heat_flow_fock(&c.operator, t, &target)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        CQState::new(components, &self.memory)
    }

    fn target_label(&self) -> Result<String> {
        let op = &self.components[0].operator;
        op.mode_labels
            .iter()
            .find(|l| **l != self.memory)
            .cloned()
            .ok_or_else(|| Error::Label("no target mode besides the memory".into()))
    }
}

fn is_diagonal(m: &nalgebra::DMatrix<C64>) -> bool {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if i != j && (m[(i, j)].re != 0.0 || m[(i, j)].im != 0.0) {
                return false;
            }
        }
    }
    true
}

/// `ρ_ARM = Σ_m p_m |m⟩⟨m| ⊗ ρ_A^{(m)} ⊗ f^{(m)}`.
#[derive(Debug, Clone)]
pub struct RegisterState {
    pub labels: Vec<String>,
    pub probs: Vec<f64>,
    pub a_states: Vec<FockState>,
    pub noises: Vec<GridPdf>,
}

impl RegisterState {
    pub fn new(labels: Vec<String>, probs: Vec<f64>, a_states: Vec<FockState>, noises: Vec<GridPdf>) -> Result<Self> {
        let n = labels.len();
        if n == 0 || probs.len() != n || a_states.len() != n || noises.len() != n {
            return Err(Error::DimensionMismatch("register fields differ in length".into()));
        }
        let total: f64 = probs.iter().sum();
        if probs.iter().any(|p| *p < 0.0) || (total - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidState(format!("label probabilities sum to {total}")));
        }
        if a_states.iter().any(|a| a.n_modes() != 1) {
            return Err(Error::DimensionMismatch("register conditionals must be single-mode".into()));
        }
        let probs = probs.iter().map(|p| p / total).collect();
        Ok(Self { labels, probs, a_states, noises })
    }

    fn average<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(usize) -> Result<f64> + Sync,
    {
        let parts: Vec<Result<f64>> = (0..self.labels.len()).into_par_iter().map(|m| Ok(self.probs[m] * f(m)?)).collect();
        parts.into_iter().sum()
    }

    /// `S(A|M) = Σ p_m S(ρ_A^{(m)})`.
    pub fn entropy_a_given_m(&self) -> Result<f64> {
        self.average(|m| von_neumann_entropy(&self.a_states[m]))
    }

    /// `S(R|M) = Σ p_m S(f^{(m)})`.
    pub fn entropy_r_given_m(&self) -> Result<f64> {
        self.average(|m| Ok(shannon_entropy(&self.noises[m])))
    }

    /// `S(C|M) = Σ p_m S(f^{(m)} ⋆ ρ_A^{(m)})`.
    pub fn entropy_c_given_m(&self) -> Result<f64> {
        self.average(|m| von_neumann_entropy(&classical_noise_channel(&self.noises[m], &self.a_states[m])?))
    }

    /// Label entropy `H(M)`.
    pub fn label_entropy(&self) -> f64 {
        self.probs.iter().map(|p| neg_xlogx(*p)).sum()
    }

    pub fn heat_flow_r(&self, t: f64) -> Result<RegisterState> {
        let noises = self.noises.iter().map(|f| classical_heat_flow(f, t)).collect::<Result<Vec<_>>>()?;
        Ok(Self { noises, ..self.clone() })
    }

    pub fn heat_flow_a(&self, t: f64) -> Result<RegisterState> {
        let a_states = self
            .a_states
            .par_iter()
            .map(|a| quantum_heat_flow_fock(a, t, &a.mode_labels[0]))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { a_states, ..self.clone() })
    }

    /// The `RM` part as a classical-quantum state with a diagonal register.
    pub fn to_cq_rm(&self) -> Result<CQState> {
        let n = self.labels.len();
        let components = (0..n)
            .map(|m| {
                let mut pops = vec![0.0; n];
                pops[m] = 1.0;
                let matrix = nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                    n,
                    pops.iter().map(|p| C64::new(*p, 0.0)),
                ));
                let op = FockState::with_registers(vec![n], matrix, vec!["M".into()], vec![true])?;
                Ok(CQComponent { weight: self.probs[m], density: self.noises[m].clone(), operator: op })
            })
            .collect::<Result<Vec<_>>>()?;
        CQState::new(components, "M")
    }
}

/// Inputs accepted by [`extended_channel`].
#[derive(Debug, Clone)]
pub enum ExtendedInput {
    /// `R` independent of `AM`: noise density and a one- or two-mode state
    /// whose first mode is `A`.
    Independent { noise: GridPdf, rho_am: FockState },
    Register(RegisterState),
    /// A general classical-quantum state on `R` and `AM`. Conditional
    /// independence cannot be certified for it, so it is rejected.
    Generic(CQState),
}

#[derive(Debug, Clone)]
pub enum ExtendedOutput {
    Joint(FockState),
    Register(RegisterState),
}

/// `(E ⊗ 1_M)(ρ_ARM) = ∫ D(ξ) ρ_{AM|R=ξ} D(ξ)† ρ_R(ξ) dξ/(2π)` on the
/// supported families.
pub fn extended_channel(input: &ExtendedInput) -> Result<ExtendedOutput> {
    match input {
        ExtendedInput::Independent { noise, rho_am } => {
            let a = rho_am.mode_labels[0].clone();
            Ok(ExtendedOutput::Joint(classical_noise_channel_on(noise, rho_am, &a)?))
        }
        ExtendedInput::Register(reg) => {
            let a_states = (0..reg.labels.len())
                .into_par_iter()
                .map(|m| classical_noise_channel(&reg.noises[m], &reg.a_states[m]))
                .collect::<Result<Vec<_>>>()?;
            Ok(ExtendedOutput::Register(RegisterState { a_states, ..reg.clone() }))
        }
        ExtendedInput::Generic(_) => Err(Error::UnsupportedFamily(
            "conditional independence of A and R given M is not certified for generic inputs".into(),
        )),
    }
}
