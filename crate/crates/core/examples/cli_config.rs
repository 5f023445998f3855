//! Drives the command-line frontend from a config file, with a flag
//! overriding one of its keys.

use epi_lab::cli::{execute, parse_config};
use epi_lab::Result;

pub fn run_example() -> Result<()> {
    let path = std::env::temp_dir().join("epi_lab_example.conf");
    std::fs::write(&path, "# conditional EPI with TMSV memory\ncommand = epi\nstate = tmsv:0.66\nnoise = gauss:0.5\nseed = 7\n")?;
    let config = parse_config(["epi-lab", "--config", path.to_str().unwrap_or_default(), "--noise", "gauss:1"])?;
    println!("noise after override: {:?}", config.noise_spec);
    for r in execute(&config)? {
        println!("{:<16} pass={} margin={:.4e} path={}", r.check_name, r.pass, r.margin, r.params.get("path").map(|v| v.to_string()).unwrap_or_default());
    }
    std::fs::remove_file(&path)?;
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}
