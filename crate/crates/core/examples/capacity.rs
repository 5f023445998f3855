//! Upper bound on the entanglement-assisted classical capacity of the
//! classical-noise channel under an energy constraint.

use epi_lab::harness::{capacity_bound, check_capacity_monotone};
use epi_lab::phase_space::{gaussian_pdf, uniform_square, GridSpec};
use epi_lab::Result;

pub fn run_example() -> Result<()> {
    let gauss = gaussian_pdf(0.5, [0.0, 0.0], &GridSpec::new(0.1))?;
    let uniform = uniform_square(2.0, 0.1)?;
    println!("{:>5} {:>12} {:>12}", "E", "f_Z,0.5", "uniform(2)");
    for e in [0.25, 0.5, 1.0, 2.0, 4.0] {
        println!("{e:>5} {:>12.8} {:>12.8}", capacity_bound(e, &gauss)?, capacity_bound(e, &uniform)?);
    }
    let r = check_capacity_monotone(&[0.5, 1.0, 2.0], &gauss)?;
    println!("monotone in E: {}", r.pass);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}
