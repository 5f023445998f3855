//! Conditional Fisher information from entropy derivatives along heat flow,
//! and the conditional Stam inequality.

use epi_lab::harness::{check_stam, f2_register, fisher_classical, thermal_nu, EpiInstance};
use epi_lab::measures::{fisher_a_given_m, fisher_a_given_m_with_step, QuantumMemory};
use epi_lab::phase_space::{gaussian_pdf, GridSpec};
use epi_lab::fock;
use epi_lab::Result;

pub fn run_example() -> Result<()> {
    for nu in [2.0, 5.0] {
        let j = fisher_a_given_m(&QuantumMemory::gaussian(thermal_nu(nu)?))?;
        println!("thermal ν={nu}: J = {:.9} ± {:.1e}, exact ln((ν+½)/(ν-½)) = {:.9}", j.value, j.uncertainty, ((nu + 0.5) / (nu - 0.5)).ln());
    }
    let jr = fisher_classical(&gaussian_pdf(1.0, [0.0, 0.0], &GridSpec::new(0.1))?)?;
    println!("classical f_Z,1: J = {:.6} (exact 1)", jr.value);

    // Pure states have unbounded Fisher information; the estimate keeps growing.
    let pure = QuantumMemory::fock(fock::fock(1, 12)?);
    for h in [1e-2, 1e-3, 1e-4] {
        println!("fock(1), step {h:.0e}: J estimate {:.3}", fisher_a_given_m_with_step(&pure, h)?.value);
    }

    for (name, inst) in [
        ("thermal ν=2 + f_Z,1", EpiInstance::Gaussian { state: thermal_nu(2.0)?, noise_t: 1.0 }),
        ("register", EpiInstance::Register(f2_register()?)),
    ] {
        let r = check_stam(&inst)?;
        println!("{name}: 1/J(C|M) = {:.4} ≥ 1/J(A|M) + 1/J(R|M) = {:.4}", r.lhs, r.rhs);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}
