//! Closed-form entropies of Gaussian states: symplectic spectra, `g(N)`, and
//! the negative conditional entropy of a two-mode squeezed vacuum.

use epi_lab::fock::squeezing_for_k;
use epi_lab::gaussian::{
    g_function, gaussian_conditional_entropy, gaussian_entropy, gaussian_heat_flow, symplectic_eigenvalues, GaussianState,
};
use epi_lab::Result;

pub fn run_example() -> Result<()> {
    for n in [0.0, 0.5, 1.5, 3.5] {
        println!("g({n}) = {:.12}", g_function(n)?);
    }
    let thermal = GaussianState::thermal(1.5, "A")?;
    println!("thermal N=1.5: nu = {:?}, S = {:.12}", symplectic_eigenvalues(&thermal.cov)?, gaussian_entropy(&thermal)?);

    // Pure entangled states have S(AM) = 0 and S(A|M) = -S(A) < 0.
    for k in [1.0, 2.0, 4.0] {
        let s = GaussianState::two_mode_squeezed(squeezing_for_k(k));
        println!(
            "TMSV k={k}: S(AM) = {:.1e}, S(A|M) = {:.6}, <n_A> = {:.4}",
            gaussian_entropy(&s)?,
            gaussian_conditional_entropy(&s, "A", "M")?,
            s.mean_photon_number("A")?
        );
    }

    // Heat flow on A mixes the state; at k = 2, t = 1 the spectrum is nu±.
    let flowed = gaussian_heat_flow(&GaussianState::two_mode_squeezed(squeezing_for_k(2.0)), 1.0, "A")?;
    let nu = symplectic_eigenvalues(&flowed.cov)?;
    println!("k=2 after t=1: nu = [{:.5}, {:.5}], S(A|M) = {:.6}", nu[0], nu[1], gaussian_conditional_entropy(&flowed, "A", "M")?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}
