//! The classical-noise channel `f ⋆ ρ`: exact polar quadrature for Gaussian
//! noise, midpoint quadrature for anything else.

use epi_lab::channels::{classical_noise_channel, midpoint_noise_channel, quantum_heat_flow_fock};
use epi_lab::fock::{self, von_neumann_entropy};
use epi_lab::gaussian::g_function;
use epi_lab::phase_space::{gaussian_pdf, shannon_entropy, uniform_square, GridSpec};
use epi_lab::Result;

pub fn run_example() -> Result<()> {
    let vac = fock::vacuum(8)?;
    println!("{:>5} {:>14} {:>14} {:>14}", "t", "radial", "midpoint", "g(t)");
    for t in [0.2, 0.5, 1.0] {
        let radial = von_neumann_entropy(&quantum_heat_flow_fock(&vac, t, "A")?)?;
        let f = gaussian_pdf(t, [0.0, 0.0], &GridSpec::new(0.2 * 0.5f64.min(t).sqrt()))?;
        let midpoint = von_neumann_entropy(&midpoint_noise_channel(&f, &vac, "A")?)?;
        println!("{t:>5} {radial:>14.10} {midpoint:>14.10} {:>14.10}", g_function(t)?);
    }

    // Non-Gaussian noise on a Fock state.
    let u = uniform_square(2.0, 0.1)?;
    let rho = fock::fock(1, 12)?;
    let out = classical_noise_channel(&u, &rho)?;
    let (s_in, s_f, s_out) = (von_neumann_entropy(&rho)?, shannon_entropy(&u), von_neumann_entropy(&out)?);
    println!("uniform(2) ⋆ |1><1|: S = {s_out:.6}, exp S(out) - exp S(f) - exp S(rho) = {:.6}", s_out.exp() - s_f.exp() - s_in.exp());
    println!("output cutoff {}, tail {:.1e}, trace drift {:.1e}", out.dim(), out.tail_mass(), out.drift);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}
