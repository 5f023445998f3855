//! Isoperimetric inequality `J·exp S ≥ e` and concavity of the entropy power
//! along the heat flow.

use epi_lab::fock;
use epi_lab::harness::{
    check_concavity_entropy_power, check_fisher_isoperimetric, check_isoperimetric, concavity_grid, flowed_tmsv_gaussian,
    thermal_nu, tmsv_gaussian, IsoInstance,
};
use epi_lab::measures::QuantumMemory;
use epi_lab::phase_space::{gaussian_pdf, GridSpec};
use epi_lab::Result;

pub fn run_example() -> Result<()> {
    for nu in [2.0, 5.0, 10.0] {
        let r = check_isoperimetric(&IsoInstance::Quantum(QuantumMemory::gaussian(thermal_nu(nu)?)))?;
        println!("thermal ν={nu:>4}: J·exp S = {:.6} (ratio to e {:.6})", r.lhs, r.diagnostics["ratio"]);
    }
    let classical = check_isoperimetric(&IsoInstance::Classical(gaussian_pdf(1.0, [0.0, 0.0], &GridSpec::new(0.1))?))?;
    println!("classical Gaussian: J·exp S = {:.6}, e = {:.6}", classical.lhs, classical.rhs);
    let r = check_fisher_isoperimetric(&QuantumMemory::gaussian(flowed_tmsv_gaussian()?), 0.05)?;
    println!("d/dt 1/J(A|M) for TMSV after flow 0.2: {:.4} ≥ 1", r.lhs);

    for (name, q) in [
        ("vacuum", QuantumMemory::fock(fock::vacuum(8)?)),
        ("thermal 0.5", QuantumMemory::fock(fock::with_auto_cutoff(24, |d| fock::thermal(0.5, d))?)),
        ("TMSV k=2", QuantumMemory::gaussian(tmsv_gaussian(2.0))),
    ] {
        let r = check_concavity_entropy_power(&q, &concavity_grid())?;
        println!("{name:<12} largest second difference of exp S(A|M): {:.4e}", r.rhs);
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
