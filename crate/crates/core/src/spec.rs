//! Mini-grammar for naming states and noise densities.
//!
//! States: `vacuum`, `fock:n`, `thermal:N`, `coherent:re[,im]`, `cat:a`,
//! `tmsv:r`, `random:rank`, `tight:a,b`, and
//! `register:p=0.3,0.7,fock:1|cat:2.0`. A suffix `@t0` applies quantum heat
//! flow for time `t0` to mode `A`, which turns pure inputs into mixed ones.
//!
//! Noise: `gauss:t`, `uniform:side`, `file:path`; several densities are
//! separated by `|`.

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::fock::{self, FockState};
use crate::gaussian::{gaussian_heat_flow, GaussianState};
use crate::linalg::C64;
use crate::phase_space::{gaussian_pdf, uniform_square, GridPdf, GridSpec};

/// Default cutoff for one-mode states.
pub const DEFAULT_CUTOFF: usize = 60;
/// Default per-mode cutoff for two-mode states.
pub const DEFAULT_CUTOFF_TWO_MODE: usize = 40;

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Vacuum,
    Fock(usize),
    Thermal(f64),
    Coherent(C64),
    Cat(f64),
    Tmsv(f64),
    Random(usize),
    Tight { a: f64, b: f64 },
    Register { probs: Vec<f64>, states: Vec<StateSpec> },
    Flowed(Box<StateSpec>, f64),
}

fn number<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Parse(format!("cannot read {what} from `{s}`")))
}

impl StateSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some(rest) = text.strip_prefix("register:") {
            return Self::parse_register(rest);
        }
        if let Some((base, t0)) = text.rsplit_once('@') {
            let t0: f64 = number(t0, "flow time")?;
            if !(t0 >= 0.0) {
                return Err(Error::Parse(format!("flow time {t0} is negative")));
            }
            return Ok(Self::Flowed(Box::new(Self::parse(base)?), t0));
        }
        let (name, arg) = text.split_once(':').unwrap_or((text, ""));
        let spec = match name {
            "vacuum" if arg.is_empty() => Self::Vacuum,
            "fock" => Self::Fock(number(arg, "photon number")?),
            "thermal" => Self::Thermal(number(arg, "mean photon number")?),
            "coherent" => {
                let (re, im) = arg.split_once(',').unwrap_or((arg, "0"));
                Self::Coherent(C64::new(number(re, "amplitude")?, number(im, "amplitude")?))
            }
            "cat" => Self::Cat(number(arg, "amplitude")?),
            "tmsv" => Self::Tmsv(number(arg, "squeezing")?),
            "random" => Self::Random(number(arg, "rank")?),
            "tight" => {
                let (a, b) = arg.split_once(',').ok_or_else(|| Error::Parse(format!("tight needs a,b: `{arg}`")))?;
                Self::Tight { a: number(a, "a")?, b: number(b, "b")? }
            }
            _ => return Err(Error::Parse(format!("unknown state constructor `{text}`"))),
        };
        Ok(spec)
    }

    /// `p=0.3,0.7,fock:1|cat:2.0`; without `p=` the labels are equiprobable.
    fn parse_register(rest: &str) -> Result<Self> {
        let (probs, states) = match rest.strip_prefix("p=") {
            Some(r) => {
                let mut probs = Vec::new();
                let mut tail = r;
                while let Some((head, more)) = tail.split_once(',') {
                    match head.trim().parse::<f64>() {
                        Ok(p) => {
                            probs.push(p);
                            tail = more;
                        }
                        Err(_) => break,
                    }
                }
                (probs, tail)
            }
            None => (Vec::new(), rest),
        };
        let states: Vec<StateSpec> = states.split('|').map(Self::parse).collect::<Result<_>>()?;
        if states.iter().any(|s| s.is_register() || s.n_modes() != 1) {
            return Err(Error::Parse("register labels need one-mode states".into()));
        }
        let n = states.len();
        let probs = match probs.len() {
            0 => vec![1.0 / n as f64; n],
            // One fewer probability than labels: the last is implied.
            k if k + 1 == n => {
                let mut p = probs.clone();
                p.push(1.0 - probs.iter().sum::<f64>());
                p
            }
            k if k == n => probs,
            _ => return Err(Error::Parse(format!("{} probabilities for {n} labels", probs.len()))),
        };
        if probs.iter().any(|p| !(*p >= 0.0)) || (probs.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::Parse(format!("register probabilities {probs:?} do not form a distribution")));
        }
        Ok(Self::Register { probs, states })
    }

    pub fn is_register(&self) -> bool {
        matches!(self, Self::Register { .. })
    }

    pub fn n_modes(&self) -> usize {
        match self {
            Self::Tmsv(_) | Self::Tight { .. } => 2,
            Self::Flowed(s, _) => s.n_modes(),
            _ => 1,
        }
    }

    /// Fock representation. The cutoff grows from `cutoff` (or the default)
    /// until the tail invariant holds.
    pub fn to_fock(&self, cutoff: Option<usize>, seed: u64) -> Result<FockState> {
        let start = cutoff.unwrap_or(if self.n_modes() == 2 { DEFAULT_CUTOFF_TWO_MODE } else { DEFAULT_CUTOFF });
        match self {
            Self::Vacuum => fock::vacuum(start),
            Self::Fock(n) => fock::with_auto_cutoff(start.max(n + 2), |d| fock::fock(*n, d)),
            Self::Thermal(n) => fock::with_auto_cutoff(start, |d| fock::thermal(*n, d)),
            Self::Coherent(a) => fock::with_auto_cutoff(start, |d| fock::coherent(*a, d)),
            Self::Cat(a) => fock::with_auto_cutoff(start, |d| fock::cat(C64::new(*a, 0.0), d)),
            Self::Tmsv(r) => fock::with_auto_cutoff(start, |d| fock::two_mode_squeezed_vacuum(*r, d)),
            Self::Random(rank) => fock::random_mixed(*rank, start, seed),
            Self::Flowed(base, t0) => {
                let rho = base.to_fock(cutoff, seed)?;
                crate::channels::quantum_heat_flow_fock(&rho, *t0, &rho.mode_labels[0].clone())
            }
            Self::Tight { .. } => Err(Error::UnsupportedFamily("the tightness family is Gaussian-only".into())),
            Self::Register { .. } => Err(Error::UnsupportedFamily("registers have no single Fock matrix".into())),
        }
    }

    /// Gaussian twin, when the state is Gaussian.
    pub fn to_gaussian(&self) -> Option<GaussianState> {
        match self {
            Self::Vacuum => Some(GaussianState::vacuum("A")),
            Self::Thermal(n) => GaussianState::thermal(*n, "A").ok(),
            Self::Coherent(a) => Some(GaussianState::coherent(*a, "A")),
            Self::Tmsv(r) => Some(GaussianState::two_mode_squeezed(*r)),
            Self::Flowed(base, t0) => gaussian_heat_flow(&base.to_gaussian()?, *t0, "A").ok(),
            _ => None,
        }
    }

    /// Per-label one-mode Fock states of a register.
    pub fn register_parts(&self, cutoff: Option<usize>, seed: u64) -> Result<(Vec<f64>, Vec<FockState>)> {
        match self {
            Self::Register { probs, states } => {
                let rhos = states
                    .iter()
                    .enumerate()
                    .map(|(i, s)| s.to_fock(cutoff, seed.wrapping_add(i as u64)))
                    .collect::<Result<_>>()?;
                Ok((probs.clone(), rhos))
            }
            _ => Err(Error::Parse("expected a register: state".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NoiseSpec {
    Gauss(f64),
    Uniform(f64),
    File(PathBuf),
}

impl NoiseSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let (name, arg) = text.trim().split_once(':').ok_or_else(|| Error::Parse(format!("noise `{text}` needs name:arg")))?;
        match name {
            "gauss" => {
                let t: f64 = number(arg, "variance")?;
                if !(t > 0.0) {
                    return Err(Error::Parse(format!("gauss variance {t} must be positive")));
                }
                Ok(Self::Gauss(t))
            }
            "uniform" => {
                let s: f64 = number(arg, "side")?;
                if !(s > 0.0) {
                    return Err(Error::Parse(format!("uniform side {s} must be positive")));
                }
                Ok(Self::Uniform(s))
            }
            "file" if !arg.is_empty() => Ok(Self::File(PathBuf::from(arg))),
            _ => Err(Error::Parse(format!("unknown noise `{text}`"))),
        }
    }

    /// `a|b|c` into several densities.
    pub fn parse_list(text: &str) -> Result<Vec<Self>> {
        text.split('|').map(Self::parse).collect()
    }

    pub fn to_grid(&self, grid: &GridSpec) -> Result<GridPdf> {
        match self {
            Self::Gauss(t) => gaussian_pdf(*t, [0.0, 0.0], grid),
            Self::Uniform(side) => uniform_square(*side, grid.spacing),
            Self::File(path) => {
                let f = GridPdf::read(path)?;
                f.validate()?;
                Ok(f)
            }
        }
    }

    /// Variance of the isotropic Gaussian, if this is one.
    pub fn gaussian_variance(&self) -> Option<f64> {
        match self {
            Self::Gauss(t) => Some(*t),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_constructor() {
        assert_eq!(StateSpec::parse("vacuum").unwrap(), StateSpec::Vacuum);
        assert_eq!(StateSpec::parse("fock:1").unwrap(), StateSpec::Fock(1));
        assert_eq!(StateSpec::parse("coherent:1,0.5").unwrap(), StateSpec::Coherent(C64::new(1.0, 0.5)));
        assert_eq!(StateSpec::parse("tight:1,-1").unwrap(), StateSpec::Tight { a: 1.0, b: -1.0 });
        assert_eq!(
            StateSpec::parse("cat:2.0@0.1").unwrap(),
            StateSpec::Flowed(Box::new(StateSpec::Cat(2.0)), 0.1)
        );
        let reg = StateSpec::parse("register:p=0.5,fock:1|cat:2.0").unwrap();
        assert_eq!(
            reg,
            StateSpec::Register { probs: vec![0.5, 0.5], states: vec![StateSpec::Fock(1), StateSpec::Cat(2.0)] }
        );
        let reg3 = StateSpec::parse("register:p=0.2,0.3,0.5,vacuum|fock:1|thermal:1").unwrap();
        assert!(matches!(reg3, StateSpec::Register { ref probs, .. } if probs.len() == 3));
        assert!(StateSpec::parse("register:fock:1|tmsv:0.5").is_err());
        assert!(StateSpec::parse("squeezed:1").is_err());
        assert!(StateSpec::parse("fock:x").is_err());
    }

    #[test]
    fn noise_grammar() {
        assert_eq!(NoiseSpec::parse("gauss:0.5").unwrap(), NoiseSpec::Gauss(0.5));
        assert_eq!(NoiseSpec::parse_list("gauss:0.5|uniform:2").unwrap().len(), 2);
        assert!(NoiseSpec::parse("gauss:-1").is_err());
        assert!(NoiseSpec::parse("laplace:1").is_err());
    }

    #[test]
    fn gaussian_twins_match_fock_entropies() {
        for text in ["vacuum", "thermal:1", "coherent:1,0.5", "thermal:0.5@0.2"] {
            let s = StateSpec::parse(text).unwrap();
            let g = crate::gaussian::gaussian_entropy(&s.to_gaussian().unwrap()).unwrap();
            let f = fock::von_neumann_entropy(&s.to_fock(None, 0).unwrap()).unwrap();
            assert!((g - f).abs() < 1e-6, "{text}: {g} vs {f}");
        }
        assert!(StateSpec::parse("cat:2").unwrap().to_gaussian().is_none());
    }
}
