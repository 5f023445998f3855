//! Sampled phase-space densities: entropy and energy, convolution, the
//! classical heat semigroup and the plain-text grid format.

use epi_lab::phase_space::{
    classical_convolution, classical_heat_flow, energy, gaussian_pdf, mixture, moments, shannon_entropy, uniform_square,
    GridPdf, GridSpec,
};
use epi_lab::Result;

pub fn run_example() -> Result<()> {
    let grid = GridSpec::new(0.1);
    let f = gaussian_pdf(0.5, [0.0, 0.0], &grid)?;
    println!("f_Z,0.5: side {} cells, mass {:.9}, H = {:.9} (exact {:.9}), E = {:.6}", f.size, f.mass(), shannon_entropy(&f), 1.0 + 0.5f64.ln(), energy(&f));

    // Gaussians compose: f_{Z,s} ⋆ f_{Z,t} = f_{Z,s+t}.
    let g = gaussian_pdf(1.0, [0.0, 0.0], &grid)?;
    let c = classical_convolution(&f, &g)?;
    let (_, cov) = moments(&c);
    println!("f_Z,0.5 ⋆ f_Z,1: covariance diag = [{:.6}, {:.6}], H = {:.9}", cov[(0, 0)], cov[(1, 1)], shannon_entropy(&c));

    let u = uniform_square(2.0, 0.1)?;
    let flowed = classical_heat_flow(&u, 0.3)?;
    println!("uniform side 2: H = {:.6}; after heat flow 0.3: H = {:.6}", shannon_entropy(&u), shannon_entropy(&flowed));

    let two = mixture(&[0.5, 0.5], &[gaussian_pdf(0.3, [-1.0, 0.0], &grid)?, gaussian_pdf(0.3, [1.0, 0.0], &grid)?])?;
    println!("two-peak mixture: H = {:.6}", shannon_entropy(&two));

    let path = std::env::temp_dir().join("epi_lab_example_density.txt");
    two.write(&path)?;
    let back = GridPdf::read(&path)?;
    println!("round trip through {}: max difference {:.1e}", path.display(), two.values.iter().zip(&back.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
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
