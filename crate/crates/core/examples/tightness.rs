//! The optimal Gaussian family: the gap in the conditional EPI closes as `k`
//! grows, including a regime with negative conditional entropy.

use epi_lab::gaussian::{gaussian_conditional_entropy, tightness_family};
use epi_lab::harness::check_tightness;
use epi_lab::phase_space::GridSpec;
use epi_lab::Result;

pub fn run_example() -> Result<()> {
    let grid = GridSpec::new(0.1);
    for (a, b) in [(1.0, 1.0), (-1.0, 0.0)] {
        println!("a = {a}, b = {b}, target e^a + e^b = {:.6}", f64::exp(a) + f64::exp(b));
        for k in [2.0, 4.0, 8.0, 16.0, 32.0] {
            let inst = tightness_family(k, a, b, &grid)?;
            let s_a = gaussian_conditional_entropy(&inst.input, "A", "M")?;
            let s_c = gaussian_conditional_entropy(&inst.output, "A", "M")?;
            println!("  k={k:>4}: S(A|M) = {s_a:>9.6}, exp S(C|M) = {:.6}, gap = {:.3e}", s_c.exp(), (s_c.exp() - a.exp() - b.exp()).abs());
        }
        let r = check_tightness(a, b, &[2.0, 4.0, 8.0, 16.0], &grid)?;
        println!("  check: pass {}, gap at k=16 {:.3e}", r.pass, r.rhs);
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
