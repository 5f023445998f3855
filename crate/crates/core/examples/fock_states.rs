//! Truncated Fock-space states and their agreement with the Gaussian closed
//! forms.

use epi_lab::fock::{self, conditional_entropy, displaced, partial_trace, squeezing_for_k, von_neumann_entropy, with_auto_cutoff};
use epi_lab::gaussian::{g_function, GaussianState};
use epi_lab::harness::check_cross_representation;
use epi_lab::linalg::C64;
use epi_lab::Result;

pub fn run_example() -> Result<()> {
    let thermal = with_auto_cutoff(24, |d| fock::thermal(1.0, d))?;
    println!("thermal N=1: cutoff {}, tail {:.1e}, S = {:.12}, g(1) = {:.12}", thermal.dim(), thermal.tail_mass(), von_neumann_entropy(&thermal)?, g_function(1.0)?);

    // Room above the support so the displaced copy still fits.
    let cat = fock::cat(C64::new(2.0, 0.0), 40)?;
    let moved = displaced(&cat, [0.5, -0.5])?;
    println!("cat(2): S = {:.2e}, <n> = {:.6}; displaced S = {:.2e}", von_neumann_entropy(&cat)?, fock::mean_energy(&cat, "A")?, von_neumann_entropy(&moved)?);

    let tmsv = with_auto_cutoff(16, |d| fock::two_mode_squeezed_vacuum(squeezing_for_k(1.0), d))?;
    let a = partial_trace(&tmsv, "A")?;
    println!("TMSV k=1: cutoff {}, S(A) = {:.9}, S(A|M) = {:.9}", tmsv.mode_dims[0], von_neumann_entropy(&a)?, conditional_entropy(&tmsv, "A", "M")?);

    let alpha = C64::new(1.0, 0.5);
    let coherent = with_auto_cutoff(24, |d| fock::coherent(alpha, d))?;
    let report = check_cross_representation(&coherent, &GaussianState::coherent(alpha, "A"))?;
    println!("coherent 1+0.5i vs Gaussian twin: worst difference {:.1e}, pass {}", report.lhs, report.pass);

    let random = fock::random_mixed(3, 12, 7)?;
    println!("random rank-3 state (seed 7): S = {:.6}", von_neumann_entropy(&random)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}
