//! Runs the default corpus and writes JSON and CSV reports.

use epi_lab::harness::{canonical_json, run_suite, to_csv};
use epi_lab::Result;

pub fn run_example() -> Result<()> {
    let reports = run_suite(7)?;
    let dir = std::env::temp_dir();
    std::fs::write(dir.join("epi_lab_suite.json"), canonical_json(&reports)?)?;
    std::fs::write(dir.join("epi_lab_suite.csv"), to_csv(&reports)?)?;
    let failed = reports.iter().filter(|r| !r.pass).count();
    println!("{} checks, {failed} failed; reports in {}", reports.len(), dir.display());
    let mut names: Vec<&str> = reports.iter().map(|r| r.check_name.as_str()).collect();
    names.dedup();
    println!("families: {}", names.join(", "));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}
