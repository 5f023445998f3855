//! Beam splitter `U = exp(θ(a†b - ab†))`, `cos θ = √λ`, built sector by
//! sector in total photon number, and the qOU channel in its beam-splitter
//! form.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fock::{diagonal_state, geometric_populations, FockState, MAX_CUTOFF, TAIL_LIMIT};
use crate::gaussian::qou_transmissivity;
use crate::linalg::{trace, C64};

/// `coeffs[N][k·(N+1) + n] = ⟨k, N-k| U |n, N-n⟩`.
struct SectorTable {
    coeffs: Vec<Vec<f64>>,
}

impl SectorTable {
    /// Uses `U a† U† = c a† - s b†` and `U b† U† = c b† + s a†`.
    fn new(lambda: f64, max_n: usize) -> Self {
        let c = lambda.sqrt();
        let s = (1.0 - lambda).sqrt();
        let mut coeffs: Vec<Vec<f64>> = vec![vec![1.0]];
        for big_n in 1..=max_n {
            let prev = &coeffs[big_n - 1];
            let width = big_n + 1;
            let mut cur = vec![0.0; width * width];
            // Column n of sector N comes from column n-1 (for n > 0) or
            // column 0 (for n = 0) of sector N-1.
            for n in 0..=big_n {
                let (src, x, y, norm) = if n == 0 {
                    (0, s, c, (big_n as f64).sqrt())
                } else {
                    (n - 1, c, -s, (n as f64).sqrt())
                };
                for k in 0..big_n {
                    let v = prev[k * big_n + src];
                    if v == 0.0 {
                        continue;
                    }
                    // x a† raises k; y b† keeps k and raises N-k.
                    cur[(k + 1) * width + n] += x * ((k + 1) as f64).sqrt() * v / norm;
                    cur[k * width + n] += y * ((big_n - k) as f64).sqrt() * v / norm;
                }
            }
            coeffs.push(cur);
        }
        Self { coeffs }
    }

    fn get(&self, big_n: usize, k: usize, n: usize) -> f64 {
        self.coeffs[big_n][k * (big_n + 1) + n]
    }
}

/// Output on the first mode of `tr₂ U ρ_AB U†`.
pub fn beam_splitter(rho_ab: &FockState, transmissivity: f64) -> Result<FockState> {
    if !(0.0..=1.0).contains(&transmissivity) {
        return Err(Error::Parameter(format!("transmissivity {transmissivity} outside [0, 1]")));
    }
    if rho_ab.n_modes() != 2 || rho_ab.register.iter().any(|r| *r) {
        return Err(Error::DimensionMismatch("beam splitter needs a two-mode state".into()));
    }
    let (da, db) = (rho_ab.mode_dims[0], rho_ab.mode_dims[1]);
    let max_n = da + db - 2;
    let table = SectorTable::new(transmissivity, max_n);
    let d_out = max_n + 1;
    let mut out = DMatrix::<C64>::zeros(d_out, d_out);
    for col in 0..da * db {
        let (n2, m2) = (col / db, col % db);
        let nn2 = n2 + m2;
        for row in 0..da * db {
            let v = rho_ab.matrix[(row, col)];
            if v.re == 0.0 && v.im == 0.0 {
                continue;
            }
            let (n1, m1) = (row / db, row % db);
            let nn1 = n1 + m1;
            // Output |k⟩⟨k'| with a common second-mode count e.
            for e in 0..=nn1.min(nn2) {
                let (k1, k2) = (nn1 - e, nn2 - e);
                let a = table.get(nn1, k1, n1);
                let b = table.get(nn2, k2, n2);
                if a != 0.0 && b != 0.0 {
                    out[(k1, k2)] += v * (a * b);
                }
            }
        }
    }
    // Keep one empty level above the last populated one.
    let last = (0..d_out).rev().find(|&k| out[(k, k)].re.abs() > 1e-15).unwrap_or(0);
    let keep = (last + 2).min(d_out);
    if keep > MAX_CUTOFF {
        let mass: f64 = (MAX_CUTOFF..keep).map(|k| out[(k, k)].re).sum();
        return Err(Error::Tail { mass, limit: TAIL_LIMIT, cutoff: MAX_CUTOFF });
    }
    let out = out.view((0, 0), (keep, keep)).into_owned();
    let tr = trace(&out).re;
    let drift = (tr - 1.0).abs();
    let out = out / C64::new(tr, 0.0);
    let out = (&out + out.adjoint()) * C64::new(0.5, 0.0);
    let mut state = FockState::with_registers(vec![keep], out, vec![rho_ab.mode_labels[0].clone()], vec![false])?;
    state.drift = rho_ab.drift + drift;
    Ok(state)
}

/// Beam splitter acting on a product input `ρ_A ⊗ ρ_B`.
pub fn beam_splitter_product(rho_a: &FockState, rho_b: &FockState, transmissivity: f64) -> Result<FockState> {
    let joint = rho_a.tensor(&rho_b.clone().relabel(&["B"])?)?;
    beam_splitter(&joint, transmissivity)
}

/// Fixed point of the qOU semigroup: thermal with ratio `q = λ²/μ²`,
/// truncated where the populations fall below `1e-14`.
pub fn qou_environment(mu: f64, lambda: f64) -> Result<FockState> {
    if !(lambda > 0.0 && mu > lambda && mu.is_finite()) {
        return Err(Error::Parameter(format!("need mu > lambda > 0, got mu={mu}, lambda={lambda}")));
    }
    let q = (lambda / mu).powi(2);
    let d = ((1e-14f64.ln() / q.ln()).ceil() as usize + 1).clamp(2, MAX_CUTOFF);
    diagonal_state(&geometric_populations(q, d), "E")
}

/// `P^{(μ,λ)}(t)(ρ) = tr₂ U_η (ρ ⊗ ω) U_η†` with `η = e^{-(μ²-λ²)t}`.
pub fn qou_channel_fock(rho: &FockState, t: f64, mu: f64, lambda: f64) -> Result<FockState> {
    let env = qou_environment(mu, lambda)?;
    if t < 0.0 || !t.is_finite() {
        return Err(Error::NegativeTime(t));
    }
    if rho.n_modes() != 1 {
        return Err(Error::DimensionMismatch("qOU channel acts on one mode".into()));
    }
    if t == 0.0 {
        return Ok(rho.clone());
    }
    let eta = qou_transmissivity(t, mu, lambda);
    let joint = rho.tensor(&env)?;
    let out = beam_splitter(&joint, eta)?;
    out.relabel(&[rho.mode_labels[0].as_str()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{fock, partial_trace, random_mixed, thermal, trace_norm_distance, vacuum};

    #[test]
    fn sectors_are_orthogonal() {
        let t = SectorTable::new(0.3, 12);
        for big_n in 0..=12 {
            let w = big_n + 1;
            for a in 0..w {
                for b in 0..w {
                    let dot: f64 = (0..w).map(|k| t.get(big_n, k, a) * t.get(big_n, k, b)).sum();
                    let expect = if a == b { 1.0 } else { 0.0 };
                    assert!((dot - expect).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn endpoints_select_marginals() {
        let a = random_mixed(2, 10, 3).unwrap();
        let b = random_mixed(3, 8, 5).unwrap();
        let ab = a.tensor(&b.clone().relabel(&["B"]).unwrap()).unwrap();
        let one = beam_splitter(&ab, 1.0).unwrap();
        assert!(trace_norm_distance(&one, &partial_trace(&ab, "A").unwrap()).unwrap() < 1e-10);
        let zero = beam_splitter(&ab, 0.0).unwrap();
        let b_marg = partial_trace(&ab, "B").unwrap().relabel(&["A"]).unwrap();
        assert!(trace_norm_distance(&zero, &b_marg).unwrap() < 1e-10);
        assert!(beam_splitter(&ab, 1.2).is_err());
    }

    #[test]
    fn vacuum_and_thermal_mix() {
        let n = 1.5;
        let th = crate::fock::with_auto_cutoff(30, |d| thermal(n, d)).unwrap();
        for lambda in [0.2, 0.5, 0.9] {
            let out = beam_splitter_product(&vacuum(4).unwrap(), &th, lambda).unwrap();
            let expect = thermal((1.0 - lambda) * n, out.dim()).unwrap();
            assert!(trace_norm_distance(&out, &expect).unwrap() < 1e-6);
        }
    }

    #[test]
    fn qou_fixed_point_identity_and_semigroup() {
        let (mu, lambda) = (1.0, 0.5);
        let w = qou_environment(mu, lambda).unwrap().relabel(&["A"]).unwrap();
        let out = qou_channel_fock(&w, 1.3, mu, lambda).unwrap();
        assert!(trace_norm_distance(&out, &w).unwrap() < 1e-5);
        let rho = fock(1, 10).unwrap();
        assert_eq!(qou_channel_fock(&rho, 0.0, mu, lambda).unwrap(), rho);
        let two = qou_channel_fock(&qou_channel_fock(&rho, 0.4, mu, lambda).unwrap(), 0.7, mu, lambda).unwrap();
        let one = qou_channel_fock(&rho, 1.1, mu, lambda).unwrap();
        assert!(trace_norm_distance(&two, &one).unwrap() < 1e-5);
        assert!(matches!(qou_channel_fock(&rho, 1.0, 0.5, 0.5), Err(Error::Parameter(_))));
    }
}
