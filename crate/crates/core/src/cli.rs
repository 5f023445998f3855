//! Command-line frontend: parses state and noise specifications, runs one
//! check family or the whole suite and writes the reports.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};

use crate::channels::RegisterState;
use crate::error::{Error, Result};
use crate::harness::*;
use crate::measures::{ClassicalMemory, QuantumMemory};
use crate::phase_space::{GridPdf, GridSpec};
use crate::spec::{NoiseSpec, StateSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Epi,
    LinearEpi,
    Stam,
    Scaling,
    Tightness,
    Isoperimetric,
    Concavity,
    Capacity,
    Qou,
    BsEpi,
    ClassicalEpi,
    Suite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

const GRAMMAR: &str = "\
STATES
  vacuum | fock:n | thermal:N | coherent:re[,im] | cat:a | tmsv:r | random:rank
  tight:a,b                         optimal family (tightness only)
  register:p=0.5,fock:1|cat:2.0     classical register, one state per label
  <state>@t0                        apply quantum heat flow t0 to mode A
  bs-epi takes two states separated by '|'.
NOISE
  gauss:t | uniform:side | file:path, several separated by '|'
CONFIG FILE
  flat `key = value` lines with the flag names as keys; flags override it.
EXIT STATUS
  0 all checks pass, 1 an inequality failed, 2 usage or numerical error.";

/// Raw arguments; every knob is optional so a config file can fill it in.
#[derive(Debug, Parser)]
#[command(name = "epi-lab", version, about = "Numerical checks of conditional entropy power inequalities", after_help = GRAMMAR)]
struct Args {
    #[arg(value_enum)]
    command: Option<Command>,
    #[arg(long)]
    state: Option<String>,
    #[arg(long)]
    noise: Option<String>,
    #[arg(long)]
    cutoff: Option<usize>,
    #[arg(long = "grid-spacing")]
    grid_spacing: Option<f64>,
    #[arg(long = "grid-extent")]
    grid_extent: Option<f64>,
    /// Comma-separated times.
    #[arg(long = "t-list")]
    t_list: Option<String>,
    /// Comma-separated tightness parameters.
    #[arg(long = "k-list")]
    k_list: Option<String>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    /// Energy, or a comma-separated list of energies.
    #[arg(long = "E")]
    energy: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Replaces the tolerance of every report.
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Flat `key = value` file.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub state_spec: Option<String>,
    pub noise_spec: Option<String>,
    pub cutoff: Option<usize>,
    pub grid_spacing: f64,
    pub grid_extent: Option<f64>,
    pub t_list: Option<Vec<f64>>,
    pub k_list: Option<Vec<f64>>,
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    pub energy: Option<Vec<f64>>,
    pub seed: u64,
    pub tolerance: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

pub const DEFAULT_SEED: u64 = 7;

const CONFIG_KEYS: [&str; 16] = [
    "command", "state", "noise", "cutoff", "grid-spacing", "grid-extent", "t-list", "k-list", "lambda", "mu", "E", "seed",
    "tolerance", "out", "format", "config",
];

/// Reads a flat `key = value` file; `#` starts a comment.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)?;
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Usage(format!("config line {} is not `key = value`", n + 1)))?;
        let key = k.trim().replace('_', "-");
        let key = if key.eq_ignore_ascii_case("e") { "E".to_string() } else { key };
        if !CONFIG_KEYS.contains(&key.as_str()) || key == "config" {
            return Err(Error::Usage(format!("unknown config key `{}`", k.trim())));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

fn from_file<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
    map.get(key)
        .map(|v| v.parse::<T>().map_err(|_| Error::Usage(format!("invalid value `{v}` for key `{key}`"))))
        .transpose()
}

fn list(text: &str, key: &str) -> Result<Vec<f64>> {
    let values: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| Error::Usage(format!("invalid number `{s}` in `{key}`"))))
        .collect::<Result<_>>()?;
    if values.is_empty() {
        return Err(Error::Usage(format!("`{key}` is empty")));
    }
    Ok(values)
}

fn positive(v: Option<f64>, key: &str) -> Result<Option<f64>> {
    match v {
        Some(x) if !(x > 0.0) || !x.is_finite() => Err(Error::Usage(format!("`{key}` must be positive, got {x}"))),
        other => Ok(other),
    }
}

/// Parses argv (program name first) and an optional config file.
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = Args::try_parse_from(argv).map_err(|e| Error::Usage(e.to_string()))?;
    let file = match &args.config {
        Some(p) => read_config_file(p)?,
        None => BTreeMap::new(),
    };
    let command = match args.command {
        Some(c) => c,
        None => match file.get("command") {
            Some(v) => Command::from_str(v, true).map_err(|_| Error::Usage(format!("invalid value `{v}` for key `command`")))?,
            None => return Err(Error::Usage("missing command".into())),
        },
    };
    let text = |flag: &Option<String>, key: &str| flag.clone().or_else(|| file.get(key).cloned());
    let format = match args.format {
        Some(f) => f,
        None => match file.get("format") {
            Some(v) => Format::from_str(v, true).map_err(|_| Error::Usage(format!("invalid value `{v}` for key `format`")))?,
            None => Format::default(),
        },
    };
    let t_list = text(&args.t_list, "t-list").map(|s| list(&s, "t-list")).transpose()?;
    if let Some(ts) = &t_list {
        if ts.iter().any(|t| !(*t >= 0.0)) {
            return Err(Error::Usage("`t-list` entries must be nonnegative".into()));
        }
    }
    let k_list = text(&args.k_list, "k-list").map(|s| list(&s, "k-list")).transpose()?;
    if let Some(ks) = &k_list {
        if ks.iter().any(|k| !(*k >= 1.0)) || ks.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Usage("`k-list` must be increasing with entries ≥ 1".into()));
        }
    }
    let energy = text(&args.energy, "E").map(|s| list(&s, "E")).transpose()?;
    if let Some(es) = &energy {
        if es.iter().any(|e| !(*e > 0.0)) {
            return Err(Error::Usage("`E` must be positive".into()));
        }
    }
    let lambda = args.lambda.map(Some).unwrap_or(from_file(&file, "lambda")?);
    if let Some(l) = lambda {
        if !(0.0..=1.0).contains(&l) && command != Command::Qou {
            return Err(Error::Usage(format!("`lambda` must lie in [0, 1], got {l}")));
        }
    }
    let tolerance = args.tolerance.map(Some).unwrap_or(from_file(&file, "tolerance")?);
    if let Some(t) = tolerance {
        if !(t >= 0.0) {
            return Err(Error::Usage(format!("`tolerance` must be nonnegative, got {t}")));
        }
    }
    let cutoff = args.cutoff.map(Some).unwrap_or(from_file(&file, "cutoff")?);
    if let Some(c) = cutoff {
        if !(2..=crate::fock::MAX_CUTOFF).contains(&c) {
            return Err(Error::Usage(format!("`cutoff` must lie in [2, {}], got {c}", crate::fock::MAX_CUTOFF)));
        }
    }
    let state_spec = text(&args.state, "state");
    let noise_spec = text(&args.noise, "noise");
    // Surface grammar errors at parse time.
    if let Some(s) = &state_spec {
        if command == Command::BsEpi {
            s.split('|').map(StateSpec::parse).collect::<Result<Vec<_>>>()
        } else {
            StateSpec::parse(s).map(|x| vec![x])
        }
        .map_err(|e| Error::Usage(format!("state: {e}")))?;
    }
    if let Some(n) = &noise_spec {
        NoiseSpec::parse_list(n).map_err(|e| Error::Usage(format!("noise: {e}")))?;
    }
    Ok(RunConfig {
        command,
        state_spec,
        noise_spec,
        cutoff,
        grid_spacing: positive(args.grid_spacing.map(Some).unwrap_or(from_file(&file, "grid-spacing")?), "grid-spacing")?
            .unwrap_or(SUITE_SPACING),
        grid_extent: positive(args.grid_extent.map(Some).unwrap_or(from_file(&file, "grid-extent")?), "grid-extent")?,
        t_list,
        k_list,
        lambda,
        mu: positive(args.mu.map(Some).unwrap_or(from_file(&file, "mu")?), "mu")?,
        energy,
        seed: args.seed.map(Some).unwrap_or(from_file(&file, "seed")?).unwrap_or(DEFAULT_SEED),
        tolerance,
        out: args.out.or_else(|| file.get("out").map(PathBuf::from)),
        format,
    })
}

impl RunConfig {
    fn grid(&self) -> GridSpec {
        GridSpec { spacing: self.grid_spacing, extent: self.grid_extent }
    }

    fn state(&self) -> Result<StateSpec> {
        let text = self.state_spec.as_deref().ok_or_else(|| Error::Usage("this command needs --state".into()))?;
        StateSpec::parse(text)
    }

    fn noises(&self) -> Result<Vec<GridPdf>> {
        let text = self.noise_spec.as_deref().ok_or_else(|| Error::Usage("this command needs --noise".into()))?;
        NoiseSpec::parse_list(text)?.iter().map(|n| n.to_grid(&self.grid())).collect()
    }

    fn noise_specs(&self) -> Result<Vec<NoiseSpec>> {
        let text = self.noise_spec.as_deref().ok_or_else(|| Error::Usage("this command needs --noise".into()))?;
        NoiseSpec::parse_list(text)
    }

    fn single_noise(&self) -> Result<GridPdf> {
        let mut v = self.noises()?;
        if v.len() != 1 {
            return Err(Error::Usage(format!("expected one noise density, got {}", v.len())));
        }
        Ok(v.remove(0))
    }

    fn register(&self, spec: &StateSpec) -> Result<RegisterState> {
        let (probs, states) = spec.register_parts(self.cutoff, self.seed)?;
        let mut noises = self.noises()?;
        if noises.len() == 1 {
            noises = vec![noises[0].clone(); probs.len()];
        }
        if noises.len() != probs.len() {
            return Err(Error::Usage(format!("{} noise densities for {} register labels", noises.len(), probs.len())));
        }
        register_instance(&probs, states, noises)
    }

    /// Fock instance and, for Gaussian states with Gaussian noise, its twin.
    fn epi_instances(&self) -> Result<Vec<EpiInstance>> {
        let spec = self.state()?;
        if spec.is_register() {
            return Ok(vec![EpiInstance::Register(self.register(&spec)?)]);
        }
        let noise_specs = self.noise_specs()?;
        if noise_specs.len() != 1 {
            return Err(Error::Usage("expected one noise density".into()));
        }
        let mut out = Vec::new();
        if let (Some(g), Some(t)) = (spec.to_gaussian(), noise_specs[0].gaussian_variance()) {
            out.push(EpiInstance::Gaussian { state: g, noise_t: t });
        }
        if let Some(rho_am) = fock_or_skip(&spec, self, !out.is_empty())? {
            out.push(EpiInstance::Independent { noise: self.single_noise()?, rho_am });
        }
        Ok(out)
    }

    fn quantum_memories(&self) -> Result<Vec<QuantumMemory>> {
        let spec = self.state()?;
        if spec.is_register() {
            let (probs, states) = spec.register_parts(self.cutoff, self.seed)?;
            let noises = vec![crate::phase_space::gaussian_pdf(1.0, [0.0, 0.0], &self.grid())?; probs.len()];
            return Ok(vec![QuantumMemory::Register(register_instance(&probs, states, noises)?)]);
        }
        let mut out = Vec::new();
        if let Some(g) = spec.to_gaussian() {
            out.push(QuantumMemory::gaussian(g));
        }
        if let Some(rho) = fock_or_skip(&spec, self, !out.is_empty())? {
            out.push(QuantumMemory::fock(rho));
        }
        Ok(out)
    }
}

/// Fock representation, or `None` with a note when the state does not fit
/// below the largest cutoff and a Gaussian path already covers it.
fn fock_or_skip(spec: &StateSpec, config: &RunConfig, has_gaussian: bool) -> Result<Option<crate::fock::FockState>> {
    match spec.to_fock(config.cutoff, config.seed) {
        Ok(rho) => Ok(Some(rho)),
        Err(e @ Error::Tail { .. }) if has_gaussian => {
            eprintln!("note: Fock path skipped ({e}); Gaussian path only");
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn tag(mut reports: Vec<CheckReport>, config: &RunConfig) -> Vec<CheckReport> {
    for r in &mut reports {
        if let Some(s) = &config.state_spec {
            r.params.entry("state".into()).or_insert_with(|| s.clone().into());
        }
        if let Some(n) = &config.noise_spec {
            r.params.entry("noise".into()).or_insert_with(|| n.clone().into());
        }
    }
    reports
}

/// Runs the configured checks and returns their reports.
pub fn execute(config: &RunConfig) -> Result<Vec<CheckReport>> {
    let reports = match config.command {
        Command::Suite => return run_suite(config.seed),
        Command::Epi => {
            let insts = config.epi_instances()?;
            let mut out: Vec<CheckReport> = insts.iter().map(check_conditional_epi).collect::<Result<_>>()?;
            if let [g @ EpiInstance::Gaussian { .. }, f] = insts.as_slice() {
                out.push(check_epi_cross_path(f, g)?);
            }
            out
        }
        Command::LinearEpi => {
            config.epi_instances()?.iter().map(|i| check_linear_epi(i, config.lambda)).collect::<Result<_>>()?
        }
        Command::Stam => config.epi_instances()?.iter().map(check_stam).collect::<Result<_>>()?,
        Command::Scaling => {
            let t_list = config.t_list.clone().unwrap_or(SCALING_TIMES.to_vec());
            let reg = match &config.state_spec {
                Some(_) => config.register(&config.state()?)?,
                None => {
                    let f = config.single_noise()?;
                    register_instance(&[1.0], vec![crate::fock::vacuum(4)?], vec![f])?
                }
            };
            let sigma2 = reg.noises.iter().map(noise_variance).fold(0.0, f64::max);
            vec![check_scaling(&ClassicalMemory::Register(reg), sigma2, &t_list)?]
        }
        Command::Tightness => {
            let (a, b) = match config.state_spec.as_deref().map(StateSpec::parse).transpose()? {
                None => (1.0, 1.0),
                Some(StateSpec::Tight { a, b }) => (a, b),
                Some(_) => return Err(Error::Usage("tightness takes --state tight:a,b".into())),
            };
            let ks = config.k_list.clone().unwrap_or(TIGHTNESS_KS.to_vec());
            vec![check_tightness(a, b, &ks, &config.grid())?]
        }
        Command::Isoperimetric => match &config.state_spec {
            None => vec![check_isoperimetric(&IsoInstance::Classical(config.single_noise()?))?],
            Some(_) => {
                let mut out = Vec::new();
                for q in config.quantum_memories()? {
                    out.push(check_isoperimetric(&IsoInstance::Quantum(q.clone()))?);
                    if matches!(q, QuantumMemory::Gaussian { .. }) {
                        out.push(check_fisher_isoperimetric(&q, 0.05)?);
                    }
                }
                out
            }
        },
        Command::Concavity => {
            let grid = config.t_list.clone().unwrap_or_else(concavity_grid);
            config
                .quantum_memories()?
                .iter()
                .map(|q| check_concavity_entropy_power(q, &grid))
                .collect::<Result<_>>()?
        }
        Command::Capacity => {
            let f = config.single_noise()?;
            let es = config.energy.clone().unwrap_or(vec![1.0]);
            let mut out: Vec<CheckReport> = es.iter().map(|&e| check_capacity(e, &f)).collect::<Result<_>>()?;
            if es.len() > 1 {
                out.push(check_capacity_monotone(&es, &f)?);
            }
            out
        }
        Command::Qou => {
            let mu = config.mu.unwrap_or(QOU_MU);
            let lambda = config.lambda.unwrap_or(QOU_LAMBDA);
            let t_list = config.t_list.clone().unwrap_or(QOU_TIMES.to_vec());
            let spec = config.state()?;
            let mut out = Vec::new();
            if spec.is_register() {
                let (probs, states) = spec.register_parts(config.cutoff, config.seed)?;
                out.extend(check_qou_decay(&QouInstance::Register { probs, states }, mu, lambda, &t_list)?);
            } else {
                if let Some(g) = spec.to_gaussian() {
                    out.extend(check_qou_decay(&QouInstance::Gaussian(g), mu, lambda, &t_list)?);
                }
                if spec.n_modes() == 1 {
                    let rho = spec.to_fock(config.cutoff, config.seed)?;
                    out.extend(check_qou_decay(&QouInstance::Fock(rho.clone()), mu, lambda, &t_list)?);
                    let t = *t_list.iter().find(|t| **t > 0.0).unwrap_or(&1.0);
                    out.push(check_qou_semigroup(&rho, t / 2.0, t / 2.0, mu, lambda)?);
                }
                if out.is_empty() {
                    return Err(Error::UnsupportedFamily("two-mode qOU runs need a Gaussian state".into()));
                }
            }
            out.push(check_qou_fixed_point(mu, lambda, *t_list.last().unwrap_or(&1.0))?);
            out
        }
        Command::BsEpi => {
            let text = config.state_spec.as_deref().ok_or_else(|| Error::Usage("bs-epi needs --state a|b".into()))?;
            let specs: Vec<StateSpec> = text.split('|').map(StateSpec::parse).collect::<Result<_>>()?;
            let [a, b] = specs.as_slice() else {
                return Err(Error::Usage("bs-epi needs exactly two states `a|b`".into()));
            };
            let ra = a.to_fock(config.cutoff, config.seed)?;
            let rb = b.to_fock(config.cutoff, config.seed.wrapping_add(1))?.relabel(&["A"])?;
            vec![check_beam_splitter_epi(&ra, &rb, config.lambda.unwrap_or(0.5))?]
        }
        Command::ClassicalEpi => {
            let fs = config.noises()?;
            let [g, f] = fs.as_slice() else {
                return Err(Error::Usage("classical-epi needs two densities `g|f`".into()));
            };
            vec![check_classical_epi(g, f)?]
        }
    };
    Ok(tag(reports, config))
}

/// Replaces the tolerance of every report and recomputes `pass`.
pub fn override_tolerance(reports: &mut [CheckReport], tolerance: f64) {
    for r in reports {
        r.tolerance = tolerance;
        r.pass = r.margin >= -tolerance;
    }
}

pub fn render(reports: &[CheckReport], format: Format) -> Result<String> {
    match format {
        Format::Json => to_json(reports),
        Format::Csv => to_csv(reports),
    }
}

/// Executes, writes the output, and maps the outcome to an exit code.
pub fn run(config: &RunConfig) -> i32 {
    let mut reports = match execute(config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    if let Some(t) = config.tolerance {
        override_tolerance(&mut reports, t);
    }
    let text = match render(&reports, config.format) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    match &config.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 2;
            }
            for r in &reports {
                println!("{} {} margin={:.6e} tolerance={:.1e}", if r.pass { "PASS" } else { "FAIL" }, r.check_name, r.margin, r.tolerance);
            }
        }
        None => print!("{text}"),
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    if failed > 0 {
        eprintln!("{failed} of {} checks failed", reports.len());
        1
    } else {
        0
    }
}

/// Caps the rayon pool from `EPI_LAB_THREADS`.
pub fn configure_threads() {
    if let Some(n) = std::env::var("EPI_LAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            // Fails only if a pool already exists, in which case it stays.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

/// Full entry point: help and version go to stdout with status 0.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    if let Err(e) = Args::try_parse_from(argv.clone()) {
        if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) {
            print!("{e}");
            return 0;
        }
        eprint!("{e}");
        return 2;
    }
    configure_threads();
    match parse_config(argv) {
        Ok(c) => run(&c),
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn flags_and_defaults() {
        let c = parse_config(["epi-lab", "epi", "--state", "tmsv:0.66", "--noise", "gauss:0.5"]).unwrap();
        assert_eq!(c.command, Command::Epi);
        assert_eq!(c.seed, DEFAULT_SEED);
        assert_eq!(c.format, Format::Json);
        let c = parse_config(["epi-lab", "capacity", "--E", "0.5,1,2", "--noise", "gauss:0.5", "--format", "csv"]).unwrap();
        assert_eq!(c.energy, Some(vec![0.5, 1.0, 2.0]));
        assert_eq!(c.format, Format::Csv);
    }

    #[test]
    fn flags_override_config_file() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# comment\ncommand = qou\nstate = fock:1\nmu = 2\nlambda = 0.5\nseed = 3").unwrap();
        let path = f.path().to_str().unwrap().to_string();
        let c = parse_config(["epi-lab", "--config", &path, "--mu", "1.5"]).unwrap();
        assert_eq!(c.command, Command::Qou);
        assert_eq!(c.mu, Some(1.5));
        assert_eq!(c.seed, 3);
        assert_eq!(c.state_spec.as_deref(), Some("fock:1"));
    }

    #[test]
    fn unknown_config_key_is_named() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "command = epi\nsqueeze = 3").unwrap();
        let path = f.path().to_str().unwrap().to_string();
        match parse_config(["epi-lab", "--config", &path]) {
            Err(Error::Usage(m)) => assert!(m.contains("squeeze"), "{m}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_grammar_is_a_usage_error() {
        assert!(matches!(parse_config(["epi-lab", "epi", "--state", "squeezed:1"]), Err(Error::Usage(_))));
        assert!(matches!(parse_config(["epi-lab", "epi", "--noise", "laplace:1"]), Err(Error::Usage(_))));
        assert!(matches!(parse_config(["epi-lab", "tightness", "--k-list", "4,2"]), Err(Error::Usage(_))));
    }

    #[test]
    fn capacity_command_reports_the_bound() {
        let c = parse_config(["epi-lab", "capacity", "--E", "1", "--noise", "gauss:0.5"]).unwrap();
        let r = execute(&c).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].lhs - 1.206_828_724_580_9).abs() < 1e-6);
    }

    #[test]
    fn qou_with_mu_below_lambda_fails_with_status_2() {
        let c = parse_config(["epi-lab", "qou", "--state", "fock:1", "--mu", "0.5", "--lambda", "1"]).unwrap();
        assert!(matches!(execute(&c), Err(Error::Parameter(_))));
        assert_eq!(run(&c), 2);
    }

    #[test]
    fn tolerance_override_recomputes_pass() {
        let mut r = vec![CheckReport::new("x", 1.0, 1.1, 0.5)];
        override_tolerance(&mut r, 0.01);
        assert!(!r[0].pass && r[0].is_consistent());
    }
}
