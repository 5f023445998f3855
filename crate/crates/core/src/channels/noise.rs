//! The classical-noise channel `f ⋆ ρ = ∫ f(ξ) D(ξ) ρ D(ξ)† dξ/(2π)`.
//!
//! Two quadratures are provided. For centered isotropic Gaussian noise the
//! angular integral is done analytically: averaging over the phase of `α`
//! keeps only terms with `j - m = j' - m' = s`, and the radial integral
//! `∫₀^∞ e^{-u} F(tu) du` has a polynomial-times-`e^{-(1+t)u}` integrand that
//! a Gauss-Laguerre rule integrates exactly. Any other density is handled by
//! the midpoint rule over its grid cells.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{displacement_matrix, radial_elements, FockState, MAX_CUTOFF, TAIL_LIMIT};
use crate::linalg::{gauss_laguerre, hermitian_eigen, trace, C64};
use crate::phase_space::{moments, GridPdf};

/// Largest renormalization accepted after a channel.
pub const MAX_TRACE_DRIFT: f64 = 1e-4;
/// Mass beyond the chosen output cutoff that is accepted.
const OUTPUT_TAIL: f64 = 1e-9;
/// Cells lighter than this are skipped by the midpoint rule.
const CELL_SKIP: f64 = 1e-15;

/// Radial quadrature for `f_{Z,t}`: nodes `y_i = |α_i|²` and weights `W_i`
/// such that `∫ f_{Z,t} F(|α|²) dξ/(2π) = Σ W_i F(y_i)` whenever `F` is
/// `e^{-y}` times a polynomial of degree below `2n`.
struct RadialRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl RadialRule {
    fn new(t: f64, n: usize) -> Self {
        let (x, lw) = gauss_laguerre(n);
        let scale = 1.0 / (1.0 + t);
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for (xi, li) in x.iter().zip(&lw) {
            let u = xi * scale;
            let y = t * u;
            nodes.push(y);
            weights.push((li + y + scale.ln()).exp());
        }
        Self { nodes, weights }
    }
}

fn nodes_for(d_out: usize, d_in: usize) -> usize {
    (d_out + d_in) / 2 + 2
}

/// Transfer coefficients `T_s(j, j') = Σ_i W_i R_{j,j-s}(y_i) R_{j',j'-s}(y_i)`.
struct Transfer {
    d_in: usize,
    d_out: usize,
    /// `blocks[s + d_in - 1]` is a dense `d_out × d_out` table (entries with
    /// `j - s` outside the input range are zero).
    blocks: Vec<Vec<f64>>,
}

impl Transfer {
    fn new(t: f64, d_in: usize, d_out: usize) -> Self {
        let rule = RadialRule::new(t, nodes_for(d_out, d_in));
        let radial: Vec<Vec<f64>> = rule.nodes.par_iter().map(|&y| radial_elements(y, d_out, d_in)).collect();
        let shifts: Vec<i64> = (-(d_in as i64 - 1)..=(d_out as i64 - 1)).collect();
        let blocks = shifts
            .par_iter()
            .map(|&s| {
                let lo = s.max(0) as usize;
                let hi = ((d_in as i64 + s).min(d_out as i64)) as usize;
                let mut block = vec![0.0; d_out * d_out];
                for (w, r) in rule.weights.iter().zip(&radial) {
                    for j in lo..hi {
                        let a = w * r[j * d_in + (j as i64 - s) as usize];
                        if a == 0.0 {
                            continue;
                        }
                        for jp in lo..hi {
                            block[j * d_out + jp] += a * r[jp * d_in + (jp as i64 - s) as usize];
                        }
                    }
                }
                block
            })
            .collect();
        Self { d_in, d_out, blocks }
    }

    fn get(&self, s: i64, j: usize, jp: usize) -> f64 {
        self.blocks[(s + self.d_in as i64 - 1) as usize][j * self.d_out + jp]
    }
}

/// Output populations of the target mode for cutoffs up to `MAX_CUTOFF`.
fn output_populations(t: f64, input_pops: &[f64]) -> Vec<f64> {
    let d_in = input_pops.len();
    let d_out = MAX_CUTOFF;
    let rule = RadialRule::new(t, nodes_for(d_out, d_in));
    let mut pops = vec![0.0; d_out];
    for (w, &y) in rule.weights.iter().zip(&rule.nodes) {
        let r = radial_elements(y, d_out, d_in);
        for (j, p) in pops.iter_mut().enumerate() {
            for (m, q) in input_pops.iter().enumerate() {
                let v = r[j * d_in + m];
                *p += w * v * v * q;
            }
        }
    }
    pops
}

fn choose_cutoff(pops: &[f64], d_min: usize) -> Result<usize> {
    let mut acc = 0.0;
    for (d, p) in pops.iter().enumerate() {
        acc += p;
        let size = d + 1;
        if size >= d_min && *p <= 0.1 * TAIL_LIMIT && 1.0 - acc <= OUTPUT_TAIL {
            return Ok(size);
        }
    }
    Err(Error::Tail { mass: 1.0 - acc, limit: OUTPUT_TAIL, cutoff: MAX_CUTOFF })
}

fn other_mode(rho: &FockState, target: usize) -> Option<usize> {
    (rho.n_modes() == 2).then_some(1 - target)
}

/// Index of `(target occupation, other occupation)` for the given dims.
fn joint_index(target: usize, dims: &[usize], n_t: usize, n_o: usize) -> usize {
    if dims.len() == 1 {
        n_t
    } else if target == 0 {
        n_t * dims[1] + n_o
    } else {
        n_o * dims[1] + n_t
    }
}

fn finish(rho: &FockState, matrix: DMatrix<C64>, dims: Vec<usize>, extra_drift: f64) -> Result<FockState> {
    let tr = trace(&matrix).re;
    let drift = (tr - 1.0).abs() + extra_drift;
    if drift > MAX_TRACE_DRIFT {
        return Err(Error::Quadrature(format!("trace drift {drift:e} after the channel")));
    }
    let m = matrix / C64::new(tr, 0.0);
    // Symmetrize to remove rounding asymmetry from the accumulation order.
    let m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut out = FockState::with_registers(dims, m, rho.mode_labels.clone(), rho.register.clone())?;
    out.drift = rho.drift + drift;
    Ok(out)
}

/// Quantum heat semigroup `N(t)` on the named mode, via the exact radial rule.
pub fn quantum_heat_flow_fock(rho: &FockState, t: f64, target: &str) -> Result<FockState> {
    if t < 0.0 || !t.is_finite() {
        return Err(Error::NegativeTime(t));
    }
    let k = rho.mode_index(target)?;
    if rho.register[k] {
        return Err(Error::Label(format!("{target} is a register, not a mode")));
    }
    if t == 0.0 {
        return Ok(rho.clone());
    }
    let d_in = rho.mode_dims[k];
    let pops_in = rho.level_populations(k);
    let d_out = choose_cutoff(&output_populations(t, &pops_in), d_in)?;
    let transfer = Transfer::new(t, d_in, d_out);
    let o = other_mode(rho, k);
    let d_o = o.map_or(1, |o| rho.mode_dims[o]);
    let mut dims = rho.mode_dims.clone();
    dims[k] = d_out;
    let dim_out = d_out * d_o;
    let in_dims = rho.mode_dims.clone();
    let rows: Vec<Vec<C64>> = (0..dim_out)
        .into_par_iter()
        .map(|row| {
            let (j, b) = split(k, &dims, row);
            let mut out = vec![C64::new(0.0, 0.0); dim_out];
            for s in -(d_in as i64 - 1)..=(j as i64) {
                let a = j as i64 - s;
                if a < 0 || a >= d_in as i64 {
                    continue;
                }
                let lo = s.max(0) as usize;
                let hi = ((d_in as i64 + s).min(d_out as i64)) as usize;
                let src_row = joint_index(k, &in_dims, a as usize, b);
                for jp in lo..hi {
                    let tv = transfer.get(s, j, jp);
                    if tv == 0.0 {
                        continue;
                    }
                    let ap = (jp as i64 - s) as usize;
                    for bp in 0..d_o {
                        let v = rho.matrix[(src_row, joint_index(k, &in_dims, ap, bp))];
                        out[joint_index(k, &dims, jp, bp)] += v * tv;
                    }
                }
            }
            out
        })
        .collect();
    let matrix = DMatrix::from_fn(dim_out, dim_out, |r, c| rows[r][c]);
    finish(rho, matrix, dims, 0.0)
}

fn split(target: usize, dims: &[usize], index: usize) -> (usize, usize) {
    if dims.len() == 1 {
        (index, 0)
    } else if target == 0 {
        (index / dims[1], index % dims[1])
    } else {
        (index % dims[1], index / dims[1])
    }
}

/// Cell-spacing bound for the midpoint rule.
pub fn midpoint_spacing_limit(f: &GridPdf) -> f64 {
    let (_, cov) = moments(f);
    let t_eq = cov.symmetric_eigenvalues().min().max(0.0);
    0.25 * t_eq.min(0.5).sqrt()
}

/// `f ⋆ ρ` on mode 0.
pub fn classical_noise_channel(f: &GridPdf, rho: &FockState) -> Result<FockState> {
    let label = rho.mode_labels[0].clone();
    classical_noise_channel_on(f, rho, &label)
}

/// `f ⋆ ρ` with the displacement acting on the named mode.
///
/// Densities tagged as centered isotropic Gaussians go through the exact
/// radial rule; everything else uses the midpoint rule on the grid.
pub fn classical_noise_channel_on(f: &GridPdf, rho: &FockState, target: &str) -> Result<FockState> {
    if let Some(t) = f.isotropic_variance {
        return quantum_heat_flow_fock(rho, t, target);
    }
    midpoint_noise_channel(f, rho, target)
}

/// Midpoint-rule realization of `f ⋆ ρ`, available for any density.
pub fn midpoint_noise_channel(f: &GridPdf, rho: &FockState, target: &str) -> Result<FockState> {
    let k = rho.mode_index(target)?;
    if rho.register[k] {
        return Err(Error::Label(format!("{target} is a register, not a mode")));
    }
    let limit = midpoint_spacing_limit(f);
    if f.spacing > limit {
        return Err(Error::Quadrature(format!("grid spacing {} exceeds {limit:.4}", f.spacing)));
    }
    let d_in = rho.mode_dims[k];
    let mean_in = crate::fock::mean_energy(rho, target)?;
    let e = crate::phase_space::energy(f);
    let mut d_out = (d_in + 8 + (3.0 * (e + mean_in)).ceil() as usize).min(MAX_CUTOFF);
    loop {
        match midpoint_with_cutoff(f, rho, k, d_out) {
            Err(Error::Tail { .. }) if d_out < MAX_CUTOFF => d_out = (d_out + 16).min(MAX_CUTOFF),
            other => return other,
        }
    }
}

fn midpoint_with_cutoff(f: &GridPdf, rho: &FockState, k: usize, d_out: usize) -> Result<FockState> {
    let d_in = rho.mode_dims[k];
    let o = other_mode(rho, k);
    let d_o = o.map_or(1, |o| rho.mode_dims[o]);
    let mut dims = rho.mode_dims.clone();
    dims[k] = d_out;
    let dim_out = d_out * d_o;

    // ρ = B B† with B the scaled eigenvectors.
    let (w, v) = hermitian_eigen(&rho.matrix);
    let top = w.max().max(0.0);
    let cols: Vec<usize> = (0..w.len()).filter(|&i| w[i] > 1e-15 * top).collect();
    let b = DMatrix::from_fn(rho.dim(), cols.len(), |r, c| v[(r, cols[c])] * w[cols[c]].sqrt());

    let cell_w = f.cell_weight();
    let cells: Vec<(usize, usize, f64)> = (0..f.size)
        .flat_map(|i| (0..f.size).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, f.at(i, j) * cell_w))
        .collect();
    let skipped: f64 = cells.iter().filter(|c| c.2 < CELL_SKIP).map(|c| c.2).sum();
    let active: Vec<&(usize, usize, f64)> = cells.iter().filter(|c| c.2 >= CELL_SKIP).collect();
    let in_dims = rho.mode_dims.clone();
    let chunk = 64;
    let partials: Vec<DMatrix<C64>> = active
        .par_chunks(chunk)
        .map(|group| {
            let r = b.ncols();
            let mut x = DMatrix::<C64>::zeros(dim_out, r * group.len());
            for (g, &&(i, j, wt)) in group.iter().enumerate() {
                let dmat = displacement_matrix(crate::fock::alpha_of(f.coord(i, j)), d_out, d_in);
                let sw = wt.sqrt();
                for col in 0..r {
                    for jo in 0..d_out {
                        for bo in 0..d_o {
                            let mut acc = C64::new(0.0, 0.0);
                            for a in 0..d_in {
                                acc += dmat[(jo, a)] * b[(joint_index(k, &in_dims, a, bo), col)];
                            }
                            x[(joint_index(k, &dims, jo, bo), g * r + col)] = acc * sw;
                        }
                    }
                }
            }
            &x * x.adjoint()
        })
        .collect();
    let mut matrix = DMatrix::<C64>::zeros(dim_out, dim_out);
    for p in partials {
        matrix += p;
    }
    let tail_pops = {
        let tmp = FockState::assemble(
            dims.clone(),
            &matrix / trace(&matrix),
            rho.mode_labels.clone(),
            rho.register.clone(),
        )?;
        *tmp.level_populations(k).last().unwrap_or(&0.0)
    };
    if tail_pops > TAIL_LIMIT {
        return Err(Error::Tail { mass: tail_pops, limit: TAIL_LIMIT, cutoff: d_out });
    }
    finish(rho, matrix, dims, skipped)
}
