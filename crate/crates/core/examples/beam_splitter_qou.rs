//! Beam splitter mixing, its entropy power inequality, and the quantum
//! Ornstein-Uhlenbeck semigroup built from it.

use epi_lab::channels::beam_splitter_product;
use epi_lab::fock::{self, mean_energy, von_neumann_entropy};
use epi_lab::gaussian::GaussianState;
use epi_lab::harness::{check_beam_splitter_epi, check_qou_decay, check_qou_fixed_point, check_qou_semigroup, QouInstance};
use epi_lab::fock::squeezing_for_k;
use epi_lab::Result;

pub fn run_example() -> Result<()> {
    let vac = fock::vacuum(8)?;
    let th = fock::with_auto_cutoff(24, |d| fock::thermal(1.5, d))?;
    for lambda in [0.25, 0.5, 0.75] {
        let out = beam_splitter_product(&vac, &th, lambda)?;
        println!("vacuum ⊗ thermal(1.5), λ={lambda}: <n> = {:.9} (expect {:.9})", mean_energy(&out, "A")?, (1.0 - lambda) * 1.5);
    }
    let r = check_beam_splitter_epi(&fock::fock(1, 8)?, &vac, 0.7)?;
    println!("fock(1) ⊗ vacuum, λ=0.7: exp S(C) = {:.6} ≥ {:.6}", r.lhs, r.rhs);

    let (mu, lambda) = (1.0, 0.5);
    println!("qOU μ={mu}, λ={lambda}, decay rate {}", mu * mu - lambda * lambda);
    for (name, inst) in [
        ("fock(1)", QouInstance::Fock(fock::fock(1, 12)?)),
        ("TMSV k=2", QouInstance::Gaussian(GaussianState::two_mode_squeezed(squeezing_for_k(2.0)))),
    ] {
        for rep in check_qou_decay(&inst, mu, lambda, &[0.5, 1.0, 2.0])? {
            println!("  {name:<9} t={}: D(t) = {:.6} ≤ e^(-rt) D(0) = {:.6}", rep.params["t"], rep.rhs, rep.lhs);
        }
    }
    println!("fixed point distance {:.1e}", check_qou_fixed_point(mu, lambda, 1.0)?.lhs);
    println!("semigroup defect {:.1e}", check_qou_semigroup(&fock::fock(1, 12)?, 0.5, 0.7, mu, lambda)?.lhs);
    println!("S(vacuum) = {}", von_neumann_entropy(&vac)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}
