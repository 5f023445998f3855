//! Large-time behaviour of `S(R|M)` under classical heat flow: it approaches
//! `ln t + 1` whatever the initial conditional densities.

use epi_lab::harness::{check_scaling, f2_register_with, noise_variance, SCALING_SPACING};
use epi_lab::measures::{cq_conditional_entropy_r_given_m, ClassicalMemory};
use epi_lab::Result;

pub fn run_example() -> Result<()> {
    let reg = f2_register_with(SCALING_SPACING)?;
    let sigma2 = reg.noises.iter().map(noise_variance).fold(0.0, f64::max);
    let mem = ClassicalMemory::Register(reg);
    for t in [1.0, 5.0, 20.0, 50.0] {
        let s = cq_conditional_entropy_r_given_m(&mem.heat_flow(t)?)?;
        println!("t = {t:>4}: S(R|M) - ln t - 1 = {:>10.6}, bound ln(1+σ²/t) = {:.6}", s - t.ln() - 1.0, (1.0 + sigma2 / t).ln());
    }
    let r = check_scaling(&mem, sigma2, &[5.0, 20.0, 50.0])?;
    println!("decreasing and below the bound: {}", r.pass);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}
