//! Conditional entropy power inequality with quantum memory (two-mode
//! squeezed vacuum) and with a classical register.

use epi_lab::harness::{check_conditional_epi, check_linear_epi, epi_entropies, f1_fock, f1_gaussian, f2_register, EpiInstance};
use epi_lab::measures::conditional_mutual_information;
use epi_lab::channels::ExtendedInput;
use epi_lab::Result;

pub fn run_example() -> Result<()> {
    println!("{:>5} {:>10} {:>10} {:>10} {:>10}", "t", "S(A|M)", "S(R|M)", "S(C|M)", "margin");
    for t in [0.2, 0.5, 1.0] {
        for (path, inst) in [("gauss k=2", f1_gaussian(2.0, t)), ("fock k=1", f1_fock(t)?)] {
            let e = epi_entropies(&inst)?;
            let r = check_conditional_epi(&inst)?;
            println!("{t:>5} {:>10.6} {:>10.6} {:>10.6} {:>10.2e}  {path}", e.s_a, e.s_r, e.s_c, r.margin);
        }
    }

    let reg = f2_register()?;
    let inst = EpiInstance::Register(reg.clone());
    let r = check_conditional_epi(&inst)?;
    println!("register fock(1)|cat(2): margin {:.4}, pass {}", r.margin, r.pass);
    println!("register I(A:R|M) = {:.1e}", conditional_mutual_information(&ExtendedInput::Register(reg))?);

    for lambda in [Some(0.1), Some(0.5), Some(0.9), None] {
        let r = check_linear_epi(&f1_gaussian(2.0, 0.5), lambda)?;
        println!("linear form, λ = {:.4}: margin {:.6}", r.diagnostics["lambda_value"].as_f64().unwrap_or(f64::NAN), r.margin);
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
