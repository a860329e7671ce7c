//! Command-line front end: flat `key = value` configuration, grid sweeps and export.
//!
//! Exit codes: 0 on success, 1 for configuration errors, 2 for numerical failures.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::expectation;
use crate::error::{Error, Result};
use crate::gaussian::{convergence_row, GaussianParams, DEFAULT_N_MAX};
use crate::models::{homodyne, resonance_fluorescence, squeezed_cavity, CavityParams, QuantumModel, RFParams, SensorConfig};
use crate::output::{sidecar_path, write_json, write_landscape_csv, write_spectrum_csv, write_table};
use crate::scalar::re;
use crate::spectra::{mollow_splitting, spectrum_numeric};
use crate::steadystate::steady_state;
use crate::twophoton::{g2_landscape, g2_tau, g2_tau_unfiltered, LandscapeOptions};

/// Fixture configurations shipped with the crate, by name.
pub const FIXTURES: [(&str, &str); 5] = [
    ("fig2a", include_str!("../fixtures/fig2a.conf")),
    ("fig2b", include_str!("../fixtures/fig2b.conf")),
    ("fig2f", include_str!("../fixtures/fig2f.conf")),
    ("fig3a", include_str!("../fixtures/fig3a.conf")),
    ("fig3b", include_str!("../fixtures/fig3b.conf")),
];

/// Text of a shipped fixture.
pub fn fixture(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// One-photon sensor spectrum
    Spectrum,
    /// Two-photon correlation landscape
    G2map,
    /// Delayed two-photon correlations
    G2tau,
    /// Landscape with interference terms
    Decompose,
    /// Landscape with nonclassicality quantifiers
    Quantifiers,
    /// Convergence of the Gaussian leading-order formulas
    GaussianCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::G2map => "g2map",
            Command::G2tau => "g2tau",
            Command::Decompose => "decompose",
            Command::Quantifiers => "quantifiers",
            Command::GaussianCheck => "gaussian-check",
        }
    }
}

/// Command-line arguments.
#[derive(Debug, Parser)]
#[command(name = "photocorr", version, about = "Frequency-resolved photon correlations of resonance fluorescence")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// Configuration file, or the name of a shipped fixture (fig2a, fig2b, fig2f, fig3a, fig3b)
    #[arg(long)]
    pub config: Option<String>,
    /// Override a configuration key
    #[arg(long = "set", value_name = "KEY=VALUE", allow_hyphen_values = true)]
    pub set: Vec<String>,
    /// Output CSV path; a JSON sidecar is written next to it
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads (default: available parallelism)
    #[arg(long)]
    pub workers: Option<usize>,
    /// Grid as min:max:count, optionally followed by ,min:max:count for the second axis
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
}

/// Model selected by the configuration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModelSpec {
    Rf(RFParams<f64>),
    Cavity(CavityParams<f64>),
}

/// One grid axis `min:max:count`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let h = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count).map(|k| if k + 1 == self.count { self.max } else { self.min + h * k as f64 }).collect()
    }
}

/// Validated run configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub model: Option<ModelSpec>,
    pub big_gamma: f64,
    pub epsilon: Option<f64>,
    pub levels: usize,
    pub homodyne_fraction: f64,
    /// Grid values are raw frequencies instead of `ϖ`.
    pub raw_omega: bool,
    pub grid: Vec<Axis>,
    pub sensor_varpi: (f64, f64),
    pub filtered: bool,
    pub draws: usize,
    pub seed: u64,
    pub gaussian_epsilon: f64,
    pub gaussian_n_max: usize,
    pub out: PathBuf,
    pub workers: Option<usize>,
    /// Effective key values, for the sidecar.
    pub values: BTreeMap<String, String>,
}

const KEYS: [&str; 23] = [
    "model",
    "delta_sigma",
    "omega_sigma",
    "gamma_sigma",
    "gamma_a",
    "delta_a",
    "lambda",
    "omega_a",
    "theta",
    "n_max",
    "big_gamma",
    "epsilon",
    "levels",
    "homodyne_fraction",
    "grid_units",
    "grid",
    "sensor_varpi1",
    "sensor_varpi2",
    "filtered",
    "draws",
    "seed",
    "gaussian_epsilon",
    "gaussian_n_max",
];

/// Parses a grid spec `min:max:count[,min:max:count]`.
pub fn parse_grid(spec: &str) -> Result<Vec<Axis>> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Ok(Vec::new());
    }
    let axes = spec
        .split(',')
        .map(|part| {
            let f: Vec<&str> = part.trim().split(':').collect();
            if f.len() != 3 {
                return Err(Error::Config(format!("grid axis `{part}` is not min:max:count")));
            }
            let num = |s: &str| {
                s.trim().parse::<f64>().map_err(|_| Error::Config(format!("grid bound `{s}` is not a number")))
            };
            let (min, max) = (num(f[0])?, num(f[1])?);
            let count: usize =
                f[2].trim().parse().map_err(|_| Error::Config(format!("grid count `{}` is not a count", f[2])))?;
            if !min.is_finite() || !max.is_finite() {
                return Err(Error::Config("grid bounds must be finite".into()));
            }
            if count == 0 || (count > 1 && !(max > min)) {
                return Err(Error::Config(format!("grid axis `{part}` must be ascending with count >= 1")));
            }
            Ok(Axis { min, max, count })
        })
        .collect::<Result<Vec<_>>>()?;
    if axes.len() > 2 {
        return Err(Error::Config("grid has at most two axes".into()));
    }
    Ok(axes)
}

/// Merges configuration text and `--set` overrides into a [`RunConfig`].
pub fn parse_config(
    command: Command,
    text: Option<&str>,
    sets: &[String],
    grid_flag: Option<&str>,
    out: PathBuf,
    workers: Option<usize>,
) -> Result<RunConfig> {
    let mut values: BTreeMap<String, (String, String)> = BTreeMap::new();
    if let Some(text) = text {
        for (k, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let origin = format!("line {}", k + 1);
            let (key, value) = split_pair(line).ok_or_else(|| Error::Config(format!("{origin}: expected key = value")))?;
            insert_key(&mut values, key, value, origin)?;
        }
    }
    for s in sets {
        let origin = format!("--set {s}");
        let (key, value) = split_pair(s).ok_or_else(|| Error::Config(format!("{origin}: expected key=value")))?;
        insert_key(&mut values, key, value, origin)?;
    }
    if let Some(g) = grid_flag {
        values.insert("grid".into(), (g.to_string(), "--grid".into()));
    }
    if let Some(w) = workers {
        if w == 0 {
            return Err(Error::Config("--workers must be at least 1".into()));
        }
    }

    let get = |k: &str| values.get(k);
    let num = |k: &str| -> Result<Option<f64>> {
        match get(k) {
            None => Ok(None),
            Some((v, origin)) => {
                let x: f64 = v.parse().map_err(|_| Error::Config(format!("{origin}: `{k}` must be a number")))?;
                if !x.is_finite() {
                    return Err(Error::Config(format!("{origin}: `{k}` must be finite")));
                }
                Ok(Some(x))
            }
        }
    };
    let count = |k: &str| -> Result<Option<usize>> {
        match get(k) {
            None => Ok(None),
            Some((v, origin)) => {
                v.parse().map(Some).map_err(|_| Error::Config(format!("{origin}: `{k}` must be a non-negative integer")))
            }
        }
    };
    let need = |k: &str| -> Result<f64> { num(k)?.ok_or_else(|| Error::Config(format!("missing required key `{k}`"))) };

    let model = match get("model").map(|(v, o)| (v.as_str(), o)) {
        None if command == Command::GaussianCheck => None,
        None => return Err(Error::Config("missing required key `model`".into())),
        Some(("rf", _)) => {
            let p = RFParams::new(need("delta_sigma")?, need("omega_sigma")?, need("gamma_sigma")?)
                .map_err(|e| Error::Config(e.to_string()))?;
            Some(ModelSpec::Rf(p))
        }
        Some(("cavity", _)) => {
            let (g, d, l) = (need("gamma_a")?, need("delta_a")?, need("lambda")?);
            let n_max = count("n_max")?.unwrap_or(15);
            let mut p = CavityParams::optimal(g, d, l, n_max).map_err(|e| Error::Config(e.to_string()))?;
            if let Some(o) = num("omega_a")? {
                p.omega_a = o;
            }
            if let Some(t) = num("theta")? {
                p.theta_drive = t;
            }
            Some(ModelSpec::Cavity(p))
        }
        Some((other, origin)) => return Err(Error::Config(format!("{origin}: unknown model `{other}`"))),
    };

    let big_gamma = match num("big_gamma")? {
        Some(g) if g > 0.0 => g,
        Some(_) => return Err(Error::Config("`big_gamma` must be positive".into())),
        None if command == Command::GaussianCheck => 1.0,
        None => return Err(Error::Config("missing required key `big_gamma`".into())),
    };
    let epsilon = num("epsilon")?;
    if matches!(epsilon, Some(e) if e <= 0.0) {
        return Err(Error::Config("`epsilon` must be positive".into()));
    }
    let levels = count("levels")?.unwrap_or(2);
    if levels < 2 {
        return Err(Error::Config("`levels` must be at least 2".into()));
    }
    let homodyne_fraction = num("homodyne_fraction")?.unwrap_or(0.0);
    if !(0.0..=1.0).contains(&homodyne_fraction) {
        return Err(Error::Config("`homodyne_fraction` must lie in [0, 1]".into()));
    }
    let raw_omega = match get("grid_units").map(|(v, _)| v.as_str()) {
        None | Some("varpi") => false,
        Some("omega") => true,
        Some(other) => return Err(Error::Config(format!("`grid_units` must be varpi or omega, not `{other}`"))),
    };
    let filtered = match get("filtered").map(|(v, _)| v.as_str()) {
        None | Some("true") => true,
        Some("false") => false,
        Some(other) => return Err(Error::Config(format!("`filtered` must be true or false, not `{other}`"))),
    };

    let mut grid = parse_grid(get("grid").map(|(v, _)| v.as_str()).unwrap_or(""))?;
    let two_d = matches!(command, Command::G2map | Command::Decompose | Command::Quantifiers);
    if grid.is_empty() {
        grid = match command {
            Command::Spectrum => vec![Axis { min: -2.5, max: 2.5, count: 201 }],
            Command::G2tau => vec![Axis { min: 0.0, max: 10.0, count: 201 }],
            _ => vec![Axis { min: -2.5, max: 2.5, count: 101 }],
        };
    }
    if two_d && grid.len() == 1 {
        grid.push(grid[0]);
    }
    if !two_d && grid.len() > 1 {
        return Err(Error::Config(format!("`{}` takes a one-axis grid", command.name())));
    }
    if command == Command::G2tau && grid[0].min < 0.0 {
        return Err(Error::Config("delays must be non-negative".into()));
    }

    let gaussian_epsilon = num("gaussian_epsilon")?.unwrap_or(0.05);
    if !(gaussian_epsilon > 0.0) {
        return Err(Error::Config("`gaussian_epsilon` must be positive".into()));
    }
    let gaussian_n_max = count("gaussian_n_max")?.unwrap_or(DEFAULT_N_MAX);
    Ok(RunConfig {
        command,
        model,
        big_gamma,
        epsilon,
        levels,
        homodyne_fraction,
        raw_omega,
        grid,
        sensor_varpi: (num("sensor_varpi1")?.unwrap_or(0.0), num("sensor_varpi2")?.unwrap_or(0.0)),
        filtered,
        draws: count("draws")?.unwrap_or(50),
        seed: count("seed")?.unwrap_or(1) as u64,
        gaussian_epsilon,
        gaussian_n_max,
        out,
        workers,
        values: values.into_iter().map(|(k, (v, _))| (k, v)).collect(),
    })
}

fn split_pair(s: &str) -> Option<(&str, &str)> {
    let (k, v) = s.split_once('=')?;
    let (k, v) = (k.trim(), v.trim());
    (!k.is_empty() && !v.is_empty()).then_some((k, v))
}

fn insert_key(values: &mut BTreeMap<String, (String, String)>, key: &str, value: &str, origin: String) -> Result<()> {
    if !KEYS.contains(&key) {
        return Err(Error::Config(format!("{origin}: unknown key `{key}`")));
    }
    values.insert(key.to_string(), (value.to_string(), origin));
    Ok(())
}

/// Base model with any homodyne displacement applied.
pub fn build_model(cfg: &RunConfig) -> Result<QuantumModel<f64>> {
    let base = match cfg.model {
        Some(ModelSpec::Rf(p)) => resonance_fluorescence(&p)?,
        Some(ModelSpec::Cavity(p)) => squeezed_cavity(&p)?,
        None => return Err(Error::Config("command needs a model".into())),
    };
    if cfg.homodyne_fraction == 0.0 {
        return Ok(base);
    }
    let rho = steady_state(&base.liouvillian()?)?;
    let mean = expectation(&rho, &[base.detection_op()])?;
    homodyne(&base, -mean * re(cfg.homodyne_fraction))
}

/// Frequency unit of `ϖ`: the Mollow splitting, or `|Δa|` for the cavity.
pub fn omega_unit(cfg: &RunConfig) -> f64 {
    let (u, fallback) = match cfg.model {
        Some(ModelSpec::Rf(p)) => (mollow_splitting(&p), p.gamma_sigma),
        Some(ModelSpec::Cavity(p)) => (p.delta_a.abs(), p.gamma_a),
        None => (1.0, 1.0),
    };
    if u > 0.0 {
        u
    } else {
        fallback
    }
}

fn sensors(cfg: &RunConfig, m: &QuantumModel<f64>) -> SensorConfig<f64> {
    let s = SensorConfig::new(0.0, 0.0, cfg.big_gamma, m.system_rate()).with_levels(cfg.levels);
    match cfg.epsilon {
        Some(e) => s.with_epsilon(e),
        None => s,
    }
}

fn model_json(cfg: &RunConfig) -> Value {
    match cfg.model {
        Some(ModelSpec::Rf(p)) => json!({
            "kind": "rf", "delta_sigma": p.delta_sigma, "omega_sigma": p.omega_sigma, "gamma_sigma": p.gamma_sigma,
        }),
        Some(ModelSpec::Cavity(p)) => json!({
            "kind": "cavity", "delta_a": p.delta_a, "lambda_a": p.lambda_a, "lambda": p.lambda(),
            "omega_a": p.omega_a, "theta": p.theta_drive, "gamma_a": p.gamma_a, "n_max": p.n_max,
        }),
        None => Value::Null,
    }
}

/// What a successful run wrote.
#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub csv: PathBuf,
    pub sidecar: PathBuf,
    pub rows: usize,
}

/// Executes a configuration, writing the CSV and its JSON sidecar atomically.
pub fn run(cfg: &RunConfig) -> Result<RunReport> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cfg.workers {
        builder = builder.num_threads(w);
    }
    let pool = builder.build().map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    pool.install(|| run_inner(cfg))
}

fn run_inner(cfg: &RunConfig) -> Result<RunReport> {
    let mut meta = json!({
        "command": cfg.command.name(),
        "version": env!("CARGO_PKG_VERSION"),
        "model": model_json(cfg),
        "config": cfg.values,
        "grid": cfg.grid.iter().map(|a| json!({"min": a.min, "max": a.max, "count": a.count})).collect::<Vec<_>>(),
        "grid_units": if cfg.raw_omega { "omega" } else { "varpi" },
        "homodyne_fraction": cfg.homodyne_fraction,
    });
    let out = cfg.out.as_path();
    let rows = match cfg.command {
        Command::Spectrum => {
            let m = build_model(cfg)?;
            let unit = omega_unit(cfg);
            let s = sensors(cfg, &m);
            let omegas: Vec<f64> = axis_omegas(cfg, &cfg.grid[0], unit);
            let samples = spectrum_numeric(&m, &s, &omegas, unit)?;
            meta["omega_plus"] = unit.into();
            meta["sensor"] = json!({"big_gamma": s.big_gamma, "epsilon": s.epsilon, "levels": s.levels});
            write_spectrum_csv(out, &samples)?;
            samples.len()
        }
        Command::G2map | Command::Decompose | Command::Quantifiers => {
            let m = build_model(cfg)?;
            let unit = omega_unit(cfg);
            let s = sensors(cfg, &m);
            let opts = LandscapeOptions {
                interference: cfg.command == Command::Decompose,
                quantifiers: cfg.command == Command::Quantifiers,
                alphas: None,
            };
            let (g1, g2) = (cfg.grid[0].points(), cfg.grid[1].points());
            let (g1, g2, scale) = if cfg.raw_omega {
                (g1.iter().map(|x| x / unit).collect(), g2.iter().map(|x| x / unit).collect(), unit)
            } else {
                (g1, g2, unit)
            };
            let l = g2_landscape(&m, &g1, &g2, scale, &s, &opts)?;
            if !l.failures.is_empty() {
                for f in &l.failures {
                    eprintln!("point ({}, {}) at varpi ({}, {}): {}", f.index.0, f.index.1, f.varpi.0, f.varpi.1, f.message);
                }
                return Err(Error::NonUniqueSteadyState(format!("{} grid points failed", l.failures.len())));
            }
            meta["landscape"] = Value::Object(l.metadata.clone());
            let missing = l.channels["g2"].iter().filter(|v| v.is_none()).count();
            meta["undefined_points"] = missing.into();
            write_landscape_csv(out, &l)?;
            g1.len() * g2.len()
        }
        Command::G2tau => {
            let m = build_model(cfg)?;
            let taus = cfg.grid[0].points();
            let values = if cfg.filtered {
                let unit = omega_unit(cfg);
                let s = sensors(cfg, &m);
                let (v1, v2) = cfg.sensor_varpi;
                let s = if cfg.raw_omega { s.at(v1, v2) } else { s.at(v1 * unit, v2 * unit) };
                meta["sensor"] = json!({
                    "omega_1": s.omega_1, "omega_2": s.omega_2, "big_gamma": s.big_gamma, "epsilon": s.epsilon,
                });
                g2_tau(&m, &s, &taus)?
            } else {
                g2_tau_unfiltered(&m, &taus)?
            };
            meta["filtered"] = cfg.filtered.into();
            let rows: Vec<Vec<Option<f64>>> = taus.iter().zip(&values).map(|(t, g)| vec![Some(*t), Some(*g)]).collect();
            write_table(out, &["tau", "g2"], &rows)?;
            rows.len()
        }
        Command::GaussianCheck => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut rows = Vec::with_capacity(cfg.draws);
            for k in 0..cfg.draws {
                let p = GaussianParams::random(&mut rng, cfg.gaussian_epsilon);
                let row = convergence_row(&p, cfg.gaussian_n_max)?;
                let r = row.ratios();
                let mut v = vec![Some(k as f64), Some(row.epsilon), Some(row.ratio())];
                v.extend(r.iter().map(|x| Some(*x)));
                rows.push(v);
            }
            meta["seed"] = cfg.seed.into();
            meta["n_max"] = cfg.gaussian_n_max.into();
            write_table(out, &["draw", "epsilon", "ratio", "ratio_g2_1", "ratio_g2_2", "ratio_g2_12"], &rows)?;
            rows.len()
        }
    };
    let sidecar = sidecar_path(out);
    meta["rows"] = rows.into();
    write_json(&sidecar, &meta)?;
    Ok(RunReport { csv: out.to_path_buf(), sidecar, rows })
}

fn axis_omegas(cfg: &RunConfig, axis: &Axis, unit: f64) -> Vec<f64> {
    let pts = axis.points();
    if cfg.raw_omega {
        pts
    } else {
        pts.into_iter().map(|v| v * unit).collect()
    }
}

/// Exit status for an error: 1 for configuration problems, 2 for numerical failures.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_)
        | Error::InvalidParameter(_)
        | Error::Unstable(_)
        | Error::UnknownLabel(_)
        | Error::DuplicateLabel(_)
        | Error::Io(_)
        | Error::Csv(_)
        | Error::Json(_) => 1,
        _ => 2,
    }
}

fn load_config_text(spec: &str) -> Result<String> {
    let path = Path::new(spec);
    if path.exists() {
        return std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read `{spec}`: {e}")));
    }
    fixture(spec)
        .map(str::to_string)
        .ok_or_else(|| Error::Config(format!("`{spec}` is neither a file nor a fixture name")))
}

/// Parses arguments, runs, and returns the process exit status.
pub fn main_with_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = (|| {
        let text = args.config.as_deref().map(load_config_text).transpose()?;
        let cfg = parse_config(args.command, text.as_deref(), &args.set, args.grid.as_deref(), args.out.clone(), args.workers)?;
        run(&cfg)
    })();
    match result {
        Ok(r) => {
            eprintln!("wrote {} rows to {} (metadata in {})", r.rows, r.csv.display(), r.sidecar.display());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(cmd: Command, name: &str, sets: &[&str]) -> Result<RunConfig> {
        let sets: Vec<String> = sets.iter().map(|s| s.to_string()).collect();
        parse_config(cmd, fixture(name), &sets, None, PathBuf::from("x.csv"), None)
    }

    #[test]
    fn fixtures_parse() {
        let c = cfg(Command::G2map, "fig2f", &[]).unwrap();
        assert_eq!(c.model, Some(ModelSpec::Rf(RFParams { delta_sigma: 80.0, omega_sigma: 2.0, gamma_sigma: 1.0 })));
        assert_eq!(c.big_gamma, 2.0);
        assert_eq!(c.grid, vec![Axis { min: -2.5, max: 2.5, count: 101 }; 2]);
        let c = cfg(Command::G2map, "fig3a", &[]).unwrap();
        let Some(ModelSpec::Cavity(p)) = c.model else { panic!("cavity expected") };
        assert_eq!((p.gamma_a, p.delta_a), (1.0, 80.1));
        assert!((p.lambda() - 0.001).abs() < 1e-15);
        for (name, _) in FIXTURES {
            assert!(cfg(Command::Spectrum, name, &[]).is_ok(), "{name}");
        }
    }

    #[test]
    fn overrides_and_errors() {
        let c = cfg(Command::G2map, "fig2f", &["omega_sigma=1"]).unwrap();
        assert!(matches!(c.model, Some(ModelSpec::Rf(p)) if p.omega_sigma == 1.0));
        assert!(matches!(cfg(Command::G2map, "fig2f", &["nope=1"]), Err(Error::Config(m)) if m.contains("unknown key")));
        assert!(cfg(Command::G2map, "fig2f", &["big_gamma=-1"]).is_err());
        assert!(cfg(Command::G2map, "fig3a", &["lambda=1.5"]).is_err());
        let e = parse_config(Command::G2map, Some("model = rf\nbogus line\n"), &[], None, "x".into(), None).unwrap_err();
        assert!(e.to_string().contains("line 2"));
        assert!(parse_config(Command::G2map, Some("model = rf\n"), &[], None, "x".into(), None).is_err());
    }

    #[test]
    fn grid_specs() {
        assert_eq!(parse_grid("0:1:3").unwrap()[0].points(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("-1:1:5,0:2:2").unwrap().len(), 2);
        for bad in ["1:0:3", "0:1", "a:1:2", "0:1:0", "0:inf:3", "0:1:2,0:1:2,0:1:2"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }
}
