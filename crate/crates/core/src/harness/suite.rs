use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::channels::RegisterState;
use crate::error::Result;
use crate::fock::{self, squeezing_for_k, with_auto_cutoff, FockState};
use crate::gaussian::{gaussian_heat_flow, qou_fixed_point, GaussianState};
use crate::measures::{ClassicalMemory, QuantumMemory};
use crate::phase_space::{gaussian_pdf, uniform_square, GridPdf, GridSpec};

use super::checks::*;
use super::report::{timed, CheckReport};

/// Grid spacing used by the default corpus.
pub const SUITE_SPACING: f64 = 0.1;
/// Coarser spacing for the large-`t` scaling runs.
pub const SCALING_SPACING: f64 = 0.25;
/// Cutoff at which the truncated `k = 2` TMSV reproduces its covariance to
/// `1e-6`; the smallest cutoff passing the tail test leaves about `1.1e-6`.
pub const TMSV_MOMENT_CUTOFF: usize = 80;
/// `μ`, `λ` of the default qOU runs.
pub const QOU_MU: f64 = 1.0;
pub const QOU_LAMBDA: f64 = 0.5;

/// Isotropic Gaussian noise `f_{Z,t}` at the suite spacing.
pub fn gauss_noise(t: f64) -> Result<GridPdf> {
    gaussian_pdf(t, [0.0, 0.0], &GridSpec::new(SUITE_SPACING))
}

pub fn thermal_fock(n: f64) -> Result<FockState> {
    with_auto_cutoff(24, |d| fock::thermal(n, d))
}

/// TMSV with `cosh 2r = 2k²` on the smallest cutoff passing the tail test.
pub fn tmsv_fock(k: f64) -> Result<FockState> {
    with_auto_cutoff(16, |d| fock::two_mode_squeezed_vacuum(squeezing_for_k(k), d))
}

pub fn tmsv_gaussian(k: f64) -> GaussianState {
    GaussianState::two_mode_squeezed(squeezing_for_k(k))
}

/// Conditional EPI with TMSV memory: Fock path at `k = 1`.
pub fn f1_fock(t: f64) -> Result<EpiInstance> {
    Ok(EpiInstance::Independent { noise: gauss_noise(t)?, rho_am: tmsv_fock(1.0)? })
}

/// Conditional EPI with TMSV memory: Gaussian path.
pub fn f1_gaussian(k: f64, t: f64) -> EpiInstance {
    EpiInstance::Gaussian { state: tmsv_gaussian(k), noise_t: t }
}

/// Two labels with `fock(1)` and `cat(2)` conditionals and noises `f_{Z,0.5}`,
/// `f_{Z,1}`.
pub fn f2_register_with(spacing: f64) -> Result<RegisterState> {
    let grid = GridSpec::new(spacing);
    register_instance(
        &[0.5, 0.5],
        vec![fock::fock(1, 12)?, with_auto_cutoff(24, |d| fock::cat(C64::new(2.0, 0.0), d))?],
        vec![gaussian_pdf(0.5, [0.0, 0.0], &grid)?, gaussian_pdf(1.0, [0.0, 0.0], &grid)?],
    )
}

pub fn f2_register() -> Result<RegisterState> {
    f2_register_with(SUITE_SPACING)
}

/// Three labels, one of them a seeded random mixed state.
pub fn random_register(seed: u64) -> Result<RegisterState> {
    register_instance(
        &[0.5, 0.3, 0.2],
        vec![
            thermal_fock(0.3)?,
            with_auto_cutoff(24, |d| fock::coherent(C64::new(0.8, -0.3), d))?,
            fock::random_mixed(3, 12, seed)?,
        ],
        vec![gauss_noise(0.5)?, gauss_noise(1.0)?, gauss_noise(0.3)?],
    )
}

/// TMSV `k = 2` after heat flow `0.2` on `A`, a mixed state with finite
/// conditional Fisher information.
pub fn flowed_tmsv_gaussian() -> Result<GaussianState> {
    gaussian_heat_flow(&tmsv_gaussian(2.0), 0.2, "A")
}

/// Thermal state with symplectic eigenvalue `ν`.
pub fn thermal_nu(nu: f64) -> Result<GaussianState> {
    GaussianState::thermal(nu - 0.5, "A")
}

/// `0, 0.05, …, 0.5`.
pub fn concavity_grid() -> Vec<f64> {
    (0..=10).map(|i| i as f64 * 0.05).collect()
}

/// `0.1, 0.2, …, 2`.
pub fn regularity_grid() -> Vec<f64> {
    (1..=20).map(|i| i as f64 * 0.1).collect()
}

pub const SCALING_TIMES: [f64; 3] = [5.0, 20.0, 50.0];
pub const TIGHTNESS_KS: [f64; 4] = [2.0, 4.0, 8.0, 16.0];
pub const QOU_TIMES: [f64; 3] = [0.5, 1.0, 2.0];

type Job = Box<dyn Fn() -> Result<Vec<CheckReport>> + Send + Sync>;

fn one<F>(f: F) -> Job
where
    F: Fn() -> Result<CheckReport> + Send + Sync + 'static,
{
    Box::new(move || Ok(vec![timed(&f)?]))
}

fn many<F>(f: F) -> Job
where
    F: Fn() -> Result<Vec<CheckReport>> + Send + Sync + 'static,
{
    Box::new(f)
}

fn jobs(seed: u64) -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();

    // Conditional and linear EPI.
    for t in [0.2, 0.5, 1.0] {
        jobs.push(one(move || check_conditional_epi(&f1_gaussian(2.0, t)).map(|r| r.param("t", t))));
        jobs.push(one(move || check_conditional_epi(&f1_fock(t)?).map(|r| r.param("t", t))));
        jobs.push(one(move || check_epi_cross_path(&f1_fock(t)?, &f1_gaussian(1.0, t)).map(|r| r.param("t", t))));
    }
    jobs.push(one(|| check_conditional_epi(&EpiInstance::Register(f2_register()?))));
    jobs.push(one(move || {
        check_conditional_epi(&EpiInstance::Register(random_register(seed)?)).map(|r| r.param("seed", seed))
    }));
    jobs.push(one(|| {
        check_conditional_epi(&EpiInstance::Independent { noise: gauss_noise(0.5)?, rho_am: thermal_fock(0.5)? })
            .map(|r| r.param("memory", "trivial"))
    }));
    for lambda in [None, Some(0.5), Some(0.9)] {
        jobs.push(one(move || check_linear_epi(&f1_gaussian(2.0, 0.5), lambda).map(|r| r.param("t", 0.5))));
        jobs.push(one(move || check_linear_epi(&f1_fock(0.5)?, lambda).map(|r| r.param("t", 0.5))));
        jobs.push(one(move || check_linear_epi(&EpiInstance::Register(f2_register()?), lambda)));
    }

    // Stam.
    jobs.push(one(|| {
        check_stam(&EpiInstance::Gaussian { state: thermal_nu(2.0)?, noise_t: 1.0 }).map(|r| r.param("nu", 2.0))
    }));
    jobs.push(one(|| check_stam(&EpiInstance::Independent { noise: gauss_noise(1.0)?, rho_am: thermal_fock(1.5)? })));
    jobs.push(one(|| check_stam(&EpiInstance::Register(f2_register()?))));

    // Scaling.
    jobs.push(one(|| {
        let reg = f2_register_with(SCALING_SPACING)?;
        let sigma2 = reg.noises.iter().map(noise_variance).fold(0.0, f64::max);
        check_scaling(&ClassicalMemory::Register(reg), sigma2, &SCALING_TIMES)
    }));

    // Regularity and de Bruijn.
    jobs.push(one(|| {
        check_regularity(&DeltaInstance::Classical(ClassicalMemory::Register(f2_register()?)), &regularity_grid())
            .map(|r| r.param("state", "register"))
    }));
    jobs.push(one(|| {
        check_regularity(&DeltaInstance::Quantum(QuantumMemory::fock(thermal_fock(0.5)?)), &regularity_grid())
            .map(|r| r.param("state", "thermal:0.5"))
    }));
    jobs.push(one(|| {
        check_regularity(&DeltaInstance::Quantum(QuantumMemory::gaussian(tmsv_gaussian(2.0))), &regularity_grid())
            .map(|r| r.param("state", "tmsv:k=2"))
    }));
    jobs.push(one(|| check_de_bruijn_consistency(&f2_register()?, 0.5)));

    // Optimal family.
    for (a, b) in [(1.0, 1.0), (-1.0, 0.0)] {
        jobs.push(one(move || check_tightness(a, b, &TIGHTNESS_KS, &GridSpec::new(SUITE_SPACING))));
    }

    // Isoperimetric and concavity.
    for nu in [2.0, 5.0, 10.0] {
        jobs.push(one(move || {
            check_isoperimetric(&IsoInstance::Quantum(QuantumMemory::gaussian(thermal_nu(nu)?))).map(|r| r.param("nu", nu))
        }));
    }
    jobs.push(one(|| {
        check_isoperimetric(&IsoInstance::Quantum(QuantumMemory::fock(thermal_fock(1.5)?))).map(|r| r.param("nu", 2.0))
    }));
    jobs.push(one(|| {
        check_isoperimetric(&IsoInstance::Quantum(QuantumMemory::gaussian(flowed_tmsv_gaussian()?)))
            .map(|r| r.param("state", "tmsv:k=2@0.2"))
    }));
    jobs.push(one(|| check_isoperimetric(&IsoInstance::Classical(gauss_noise(1.0)?))));
    jobs.push(one(|| {
        check_fisher_isoperimetric(&QuantumMemory::gaussian(thermal_nu(2.0)?), 0.05).map(|r| r.param("nu", 2.0))
    }));
    jobs.push(one(|| {
        check_fisher_isoperimetric(&QuantumMemory::gaussian(flowed_tmsv_gaussian()?), 0.05)
            .map(|r| r.param("state", "tmsv:k=2@0.2"))
    }));
    jobs.push(one(|| {
        check_concavity_entropy_power(&QuantumMemory::fock(thermal_fock(0.5)?), &concavity_grid())
            .map(|r| r.param("state", "thermal:0.5"))
    }));
    jobs.push(one(|| {
        check_concavity_entropy_power(&QuantumMemory::fock(fock::vacuum(8)?), &concavity_grid())
            .map(|r| r.param("state", "vacuum"))
    }));
    jobs.push(one(|| {
        check_concavity_entropy_power(&QuantumMemory::gaussian(tmsv_gaussian(2.0)), &concavity_grid())
            .map(|r| r.param("state", "tmsv:k=2"))
    }));
    jobs.push(one(|| {
        check_concavity_entropy_power(&QuantumMemory::Register(f2_register()?), &concavity_grid())
            .map(|r| r.param("state", "register"))
    }));

    // Capacity.
    for e in [0.5, 1.0, 2.0] {
        jobs.push(one(move || check_capacity(e, &gauss_noise(0.5)?)));
    }
    jobs.push(one(|| check_capacity_monotone(&[0.5, 1.0, 2.0], &gauss_noise(0.5)?)));

    // qOU.
    let (mu, lambda) = (QOU_MU, QOU_LAMBDA);
    jobs.push(many(move || check_qou_decay(&QouInstance::Fock(fock::fock(1, 12)?), mu, lambda, &QOU_TIMES)));
    jobs.push(many(move || check_qou_decay(&QouInstance::Gaussian(tmsv_gaussian(2.0)), mu, lambda, &QOU_TIMES)));
    jobs.push(many(move || {
        let omega = qou_fixed_point(mu, lambda, "A")?;
        let reports = check_qou_decay(&QouInstance::Gaussian(omega), mu, lambda, &QOU_TIMES)?;
        Ok(reports.into_iter().map(|r| r.param("state", "fixed_point")).collect())
    }));
    jobs.push(many(move || {
        let reg = f2_register()?;
        check_qou_decay(&QouInstance::Register { probs: reg.probs, states: reg.a_states }, mu, lambda, &QOU_TIMES)
    }));
    jobs.push(one(move || check_qou_fixed_point(mu, lambda, 1.0)));
    jobs.push(one(move || check_qou_semigroup(&fock::fock(1, 12)?, 0.5, 0.7, mu, lambda)));

    // Background inequalities.
    jobs.push(one(|| check_beam_splitter_epi(&thermal_fock(1.0)?, &thermal_fock(0.3)?, 0.5)));
    jobs.push(one(|| check_beam_splitter_epi(&thermal_fock(1.0)?, &thermal_fock(0.3)?, 1.0)));
    jobs.push(one(|| check_beam_splitter_epi(&fock::fock(1, 8)?, &fock::vacuum(8)?, 0.7)));
    jobs.push(one(move || {
        check_beam_splitter_epi(&fock::random_mixed(4, 10, seed)?, &fock::random_mixed(2, 10, seed.wrapping_add(1))?, 0.4)
            .map(|r| r.param("seed", seed))
    }));
    jobs.push(one(|| check_classical_epi(&gauss_noise(0.5)?, &gauss_noise(1.0)?).map(|r| r.param("g", "gauss:0.5"))));
    jobs.push(one(|| {
        check_classical_epi(&gauss_noise(0.5)?, &uniform_square(2.0, SUITE_SPACING)?).map(|r| r.param("g", "uniform:2"))
    }));
    jobs.push(one(|| {
        let grid = GridSpec::new(0.05);
        let narrow = gaussian_pdf(0.01, [0.0, 0.0], &grid)?;
        check_classical_epi(&narrow, &gaussian_pdf(1.0, [0.0, 0.0], &grid)?).map(|r| r.param("g", "near_delta"))
    }));

    // Oracles.
    jobs.push(one(|| {
        check_cross_representation(&fock::vacuum(8)?, &GaussianState::vacuum("A")).map(|r| r.param("state", "vacuum"))
    }));
    jobs.push(one(|| {
        check_cross_representation(&thermal_fock(1.0)?, &GaussianState::thermal(1.0, "A")?)
            .map(|r| r.param("state", "thermal:1"))
    }));
    jobs.push(one(|| {
        let alpha = C64::new(1.0, 0.5);
        check_cross_representation(&with_auto_cutoff(24, |d| fock::coherent(alpha, d))?, &GaussianState::coherent(alpha, "A"))
            .map(|r| r.param("state", "coherent:1+0.5i"))
    }));
    jobs.push(one(|| {
        let r = squeezing_for_k(2.0);
        check_cross_representation(&fock::two_mode_squeezed_vacuum(r, TMSV_MOMENT_CUTOFF)?, &GaussianState::two_mode_squeezed(r))
            .map(|r| r.param("state", "tmsv:k=2"))
    }));
    for t in [0.2, 0.5, 1.0] {
        jobs.push(one(move || check_convolution_oracle(t, 0.2 * 0.5f64.min(t).sqrt())));
    }
    jobs
}

/// Runs the default corpus and returns the reports in a stable order.
pub fn run_suite(seed: u64) -> Result<Vec<CheckReport>> {
    let batches: Vec<Vec<CheckReport>> = jobs(seed).par_iter().map(|job| job()).collect::<Result<_>>()?;
    let mut reports: Vec<CheckReport> = batches.into_iter().flatten().collect();
    sort_reports(&mut reports);
    Ok(reports)
}

pub fn sort_reports(reports: &mut [CheckReport]) {
    reports.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}
