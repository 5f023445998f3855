//! Every example runs to completion.

#[path = "../examples/beam_splitter_qou.rs"]
mod beam_splitter_qou;

#[path = "../examples/capacity.rs"]
mod capacity;

#[path = "../examples/cli_config.rs"]
mod cli_config;

#[path = "../examples/conditional_epi.rs"]
mod conditional_epi;

#[path = "../examples/fisher_stam.rs"]
mod fisher_stam;

#[path = "../examples/fock_states.rs"]
mod fock_states;

#[path = "../examples/gaussian_entropies.rs"]
mod gaussian_entropies;

#[path = "../examples/isoperimetric_concavity.rs"]
mod isoperimetric_concavity;

#[path = "../examples/noise_channel.rs"]
mod noise_channel;

#[path = "../examples/phase_space_densities.rs"]
mod phase_space_densities;

#[path = "../examples/scaling.rs"]
mod scaling;

#[path = "../examples/tightness.rs"]
mod tightness;

#[test]
fn beam_splitter_qou_runs() {
    beam_splitter_qou::run_example().unwrap();
}

#[test]
fn capacity_runs() {
    capacity::run_example().unwrap();
}

#[test]
fn cli_config_runs() {
    cli_config::run_example().unwrap();
}

#[test]
fn conditional_epi_runs() {
    conditional_epi::run_example().unwrap();
}

#[test]
fn fisher_stam_runs() {
    fisher_stam::run_example().unwrap();
}

#[test]
fn fock_states_runs() {
    fock_states::run_example().unwrap();
}

#[test]
fn gaussian_entropies_runs() {
    gaussian_entropies::run_example().unwrap();
}

#[test]
fn isoperimetric_concavity_runs() {
    isoperimetric_concavity::run_example().unwrap();
}

#[test]
fn noise_channel_runs() {
    noise_channel::run_example().unwrap();
}

#[test]
fn phase_space_densities_runs() {
    phase_space_densities::run_example().unwrap();
}

#[test]
fn scaling_runs() {
    scaling::run_example().unwrap();
}

#[test]
fn tightness_runs() {
    tightness::run_example().unwrap();
}
