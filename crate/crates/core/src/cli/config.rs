//! Run configuration: built-in defaults, recipe presets, a flat `key = value`
//! file and command-line flags, merged in that order (later wins).
//!
//! File grammar, one entry per line:
//!
//! ```text
//! # comment
//! key = value          # trailing comments allowed
//! J = 0.3, 0.4         # list-valued keys take comma-separated values
//! ```
//!
//! Keys are exactly those listed in [`KEYS`]; anything else is rejected.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Parser;

use super::CliError;
use crate::lattice::{validate_regime, ChainParams, SymmetricSystem};

/// Every recognised configuration key with its default and meaning.
pub const KEYS: &[(&str, &str, &str)] = &[
    ("mode", "force-sweep", "what to compute (see Mode)"),
    ("eps0", "1", "impurity level ε₀ (energy unit)"),
    (
        "delta",
        "-1",
        "detuning Δ = ε₀ − ω, comma-separated list allowed",
    ),
    ("J", "0.3", "hopping J, comma-separated list allowed"),
    ("lambda", "0.01", "impurity-chain coupling λ"),
    (
        "N",
        "400",
        "chain half-length (2N+1 sites), comma-separated list allowed",
    ),
    ("R", "1", "fixed separation for hopping and detuning sweeps"),
    ("rmin", "1", "first separation of R sweeps"),
    ("rmax", "10", "last separation of R sweeps"),
    ("sweep_min", "auto", "lower end of the J, Δ or a sweep"),
    ("sweep_max", "auto", "upper end of the J, Δ or a sweep"),
    ("steps", "100", "number of points in J, Δ or a sweeps"),
    ("temperatures", "0,0.1,1", "temperatures for thermal sweeps"),
    ("format", "csv", "csv or json"),
    ("output", "-", "output file, '-' for stdout"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    ForceSweep,
    HoppingSweep,
    DetuningSweep,
    DecayProfile,
    ThermalSweep,
    OracleCheck,
    DispersionDump,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::ForceSweep => "force-sweep",
            Mode::HoppingSweep => "hopping-sweep",
            Mode::DetuningSweep => "detuning-sweep",
            Mode::DecayProfile => "decay-profile",
            Mode::ThermalSweep => "thermal-sweep",
            Mode::OracleCheck => "oracle-check",
            Mode::DispersionDump => "dispersion-dump",
        }
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "force-sweep" => Mode::ForceSweep,
            "hopping-sweep" => Mode::HoppingSweep,
            "detuning-sweep" => Mode::DetuningSweep,
            "decay-profile" => Mode::DecayProfile,
            "thermal-sweep" => Mode::ThermalSweep,
            "oracle-check" => Mode::OracleCheck,
            "dispersion-dump" => Mode::DispersionDump,
            other => return Err(format!("unknown mode '{other}'")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

/// Named parameter sets reproducing the published figures.
pub fn preset(name: &str) -> Option<&'static [(&'static str, &'static str)]> {
    Some(match name {
        "fig2" => &[
            ("mode", "force-sweep"),
            ("lambda", "0.01"),
            ("delta", "-1"),
            ("J", "0.3,0.4"),
            ("rmin", "1"),
            ("rmax", "10"),
        ],
        "fig3" => &[
            ("mode", "force-sweep"),
            ("lambda", "0.01"),
            ("J", "0.6"),
            ("delta", "-2,-3"),
            ("rmin", "1"),
            ("rmax", "10"),
        ],
        "fig4" => &[
            ("mode", "decay-profile"),
            ("sweep_min", "-0.99"),
            ("sweep_max", "-0.01"),
            ("steps", "100"),
        ],
        "fig5" => &[
            ("mode", "thermal-sweep"),
            ("lambda", "0.1"),
            ("delta", "-1"),
            ("J", "0.3"),
            ("temperatures", "0,0.1,1"),
            ("N", "100,200,400"),
            ("rmin", "1"),
            ("rmax", "10"),
        ],
        _ => return None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Default,
    Preset(String),
    File { path: PathBuf, line: usize },
    Flag,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Default => write!(f, "default"),
            Source::Preset(name) => write!(f, "preset {name}"),
            Source::File { path, line } => write!(f, "{}:{line}", path.display()),
            Source::Flag => write!(f, "flag"),
        }
    }
}

/// Command-line flags. Every physics flag mirrors a config-file key.
#[derive(Debug, Clone, Default, Parser)]
#[command(
    name = "ecp",
    version,
    about = "Electronic Casimir-Polder force on a tight-binding nanowire"
)]
pub struct Args {
    /// Config file with `key = value` lines.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Recipe preset: fig2, fig3, fig4 or fig5.
    #[arg(long)]
    pub preset: Option<String>,
    /// force-sweep, hopping-sweep, detuning-sweep, decay-profile, thermal-sweep, oracle-check, dispersion-dump.
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub eps0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,
    #[arg(long = "J", allow_hyphen_values = true)]
    pub hopping: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    #[arg(long = "N")]
    pub half_length: Option<String>,
    #[arg(long = "R")]
    pub separation: Option<String>,
    #[arg(long)]
    pub rmin: Option<String>,
    #[arg(long)]
    pub rmax: Option<String>,
    #[arg(long = "sweep-min", allow_hyphen_values = true)]
    pub sweep_min: Option<String>,
    #[arg(long = "sweep-max", allow_hyphen_values = true)]
    pub sweep_max: Option<String>,
    #[arg(long)]
    pub steps: Option<String>,
    #[arg(long)]
    pub temperatures: Option<String>,
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub output: Option<String>,
}

impl Args {
    fn flag_values(&self) -> Vec<(&'static str, &String)> {
        [
            ("mode", &self.mode),
            ("eps0", &self.eps0),
            ("delta", &self.delta),
            ("J", &self.hopping),
            ("lambda", &self.lambda),
            ("N", &self.half_length),
            ("R", &self.separation),
            ("rmin", &self.rmin),
            ("rmax", &self.rmax),
            ("sweep_min", &self.sweep_min),
            ("sweep_max", &self.sweep_max),
            ("steps", &self.steps),
            ("temperatures", &self.temperatures),
            ("format", &self.format),
            ("output", &self.output),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| (k, v)))
        .collect()
    }
}

/// Fully resolved, validated configuration for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub eps0: f64,
    pub detunings: Vec<f64>,
    pub hoppings: Vec<f64>,
    pub lambda: f64,
    pub half_lengths: Vec<usize>,
    pub separation: usize,
    pub r_min: usize,
    pub r_max: usize,
    pub sweep_min: Option<f64>,
    pub sweep_max: Option<f64>,
    pub steps: usize,
    pub temperatures: Vec<f64>,
    pub format: Format,
    /// `None` means stdout (or the default output directory, see `run`).
    pub output: Option<PathBuf>,
    /// Every key with its final textual value and where it came from.
    pub provenance: BTreeMap<&'static str, (String, Source)>,
}

type Entries = BTreeMap<&'static str, (String, Source)>;

fn known_key(key: &str) -> Option<&'static str> {
    KEYS.iter().map(|(k, _, _)| *k).find(|k| *k == key)
}

fn parse_file(path: &Path, text: &str, entries: &mut Entries) -> Result<(), CliError> {
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let location = format!("{}:{line}", path.display());
        let (key, value) = content.split_once('=').ok_or_else(|| CliError::Config {
            location: location.clone(),
            message: format!("expected 'key = value', got '{content}'"),
        })?;
        let key = key.trim();
        let value = value.trim();
        if key == "preset" {
            continue;
        }
        let key = known_key(key).ok_or_else(|| CliError::Config {
            location: location.clone(),
            message: format!("unknown key '{key}'"),
        })?;
        if value.is_empty() {
            return Err(CliError::Config {
                location,
                message: format!("empty value for '{key}'"),
            });
        }
        entries.insert(
            key,
            (
                value.to_string(),
                Source::File {
                    path: path.to_path_buf(),
                    line,
                },
            ),
        );
    }
    Ok(())
}

fn file_preset(path: &Path, text: &str) -> Option<(String, usize)> {
    text.lines().enumerate().find_map(|(idx, raw)| {
        let content = raw.split('#').next()?.trim();
        let (key, value) = content.split_once('=')?;
        let _ = path;
        (key.trim() == "preset").then(|| (value.trim().to_string(), idx + 1))
    })
}

fn location(key: &str, source: &Source) -> String {
    match source {
        Source::Flag => format!("flag --{key}"),
        Source::File { path, line } => format!("{}:{line}", path.display()),
        Source::Preset(name) => format!("preset {name}"),
        Source::Default => format!("default for {key}"),
    }
}

struct Resolver<'a> {
    entries: &'a Entries,
}

impl Resolver<'_> {
    fn raw(&self, key: &'static str) -> (&str, &Source) {
        let (v, s) = &self.entries[key];
        (v.as_str(), s)
    }

    fn error(&self, key: &'static str, message: String) -> CliError {
        let (_, source) = self.raw(key);
        CliError::Config {
            location: location(key, source),
            message,
        }
    }

    fn parse<T: FromStr>(&self, key: &'static str) -> Result<T, CliError>
    where
        T::Err: fmt::Display,
    {
        let (value, _) = self.raw(key);
        value
            .parse::<T>()
            .map_err(|e| self.error(key, format!("invalid value '{value}' for {key}: {e}")))
    }

    fn list<T: FromStr>(&self, key: &'static str) -> Result<Vec<T>, CliError>
    where
        T::Err: fmt::Display,
    {
        let (value, _) = self.raw(key);
        let items = value
            .split(',')
            .map(|s| {
                let s = s.trim();
                s.parse::<T>()
                    .map_err(|e| self.error(key, format!("invalid entry '{s}' for {key}: {e}")))
            })
            .collect::<Result<Vec<T>, _>>()?;
        if items.is_empty() {
            return Err(self.error(key, format!("{key} needs at least one value")));
        }
        Ok(items)
    }

    fn optional_f64(&self, key: &'static str) -> Result<Option<f64>, CliError> {
        match self.raw(key).0 {
            "auto" => Ok(None),
            _ => self.parse::<f64>(key).map(Some),
        }
    }
}

/// Merges defaults, preset, config file and flags into a validated config.
pub fn load_config(args: &Args) -> Result<RunConfig, CliError> {
    let mut entries: Entries = KEYS
        .iter()
        .map(|(k, v, _)| (*k, (v.to_string(), Source::Default)))
        .collect();

    let file = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Config {
                location: path.display().to_string(),
                message: format!("cannot read config file: {e}"),
            })?;
            Some((path.clone(), text))
        }
        None => None,
    };

    let preset_choice = match (&args.preset, &file) {
        (Some(name), _) => Some((name.clone(), "flag --preset".to_string())),
        (None, Some((path, text))) => {
            file_preset(path, text).map(|(name, line)| (name, format!("{}:{line}", path.display())))
        }
        (None, None) => None,
    };
    if let Some((name, origin)) = preset_choice {
        let values = preset(&name).ok_or_else(|| CliError::Config {
            location: origin,
            message: format!("unknown preset '{name}' (expected fig2, fig3, fig4 or fig5)"),
        })?;
        for (k, v) in values {
            let key = known_key(k).expect("preset keys are known");
            entries.insert(key, (v.to_string(), Source::Preset(name.clone())));
        }
    }

    if let Some((path, text)) = &file {
        parse_file(path, text, &mut entries)?;
    }
    for (key, value) in args.flag_values() {
        entries.insert(key, (value.clone(), Source::Flag));
    }

    let r = Resolver { entries: &entries };
    let config = RunConfig {
        mode: r.parse("mode")?,
        eps0: r.parse("eps0")?,
        detunings: r.list("delta")?,
        hoppings: r.list("J")?,
        lambda: r.parse("lambda")?,
        half_lengths: r.list("N")?,
        separation: r.parse("R")?,
        r_min: r.parse("rmin")?,
        r_max: r.parse("rmax")?,
        sweep_min: r.optional_f64("sweep_min")?,
        sweep_max: r.optional_f64("sweep_max")?,
        steps: r.parse("steps")?,
        temperatures: r.list("temperatures")?,
        format: r.parse("format")?,
        output: match r.raw("output").0 {
            "-" => None,
            path => Some(PathBuf::from(path)),
        },
        provenance: entries.clone(),
    };
    validate(&config, &r)?;
    Ok(config)
}

fn validate(c: &RunConfig, r: &Resolver<'_>) -> Result<(), CliError> {
    let finite = |key: &'static str, values: &[f64]| -> Result<(), CliError> {
        match values.iter().find(|v| !v.is_finite()) {
            Some(v) => Err(r.error(key, format!("{key} must be finite, got {v}"))),
            None => Ok(()),
        }
    };
    finite("eps0", &[c.eps0])?;
    finite("lambda", &[c.lambda])?;
    finite("delta", &c.detunings)?;
    finite("J", &c.hoppings)?;
    if let Some(j) = c.hoppings.iter().find(|&&j| j < 0.0) {
        return Err(r.error("J", format!("hopping must satisfy J >= 0, got {j}")));
    }
    if c.half_lengths.contains(&0) {
        return Err(r.error("N", "chain half-length must be >= 1".into()));
    }
    if c.separation == 0 {
        return Err(r.error("R", "separation must be >= 1".into()));
    }
    if c.r_min == 0 || c.r_min > c.r_max {
        return Err(r.error(
            "rmin",
            format!("need 1 <= rmin <= rmax, got {}..{}", c.r_min, c.r_max),
        ));
    }
    if c.steps == 0 {
        return Err(r.error("steps", "steps must be >= 1".into()));
    }
    if let Some(t) = c.temperatures.iter().find(|t| t.is_nan() || **t < 0.0) {
        return Err(r.error(
            "temperatures",
            format!("temperatures must be >= 0, got {t}"),
        ));
    }
    if c.temperatures.windows(2).any(|w| w[1] < w[0]) {
        return Err(r.error(
            "temperatures",
            "temperatures must be sorted ascending".into(),
        ));
    }

    // physics of every fixed (J, Δ, N) combination; swept axes are checked per point
    let swept_j = c.mode == Mode::HoppingSweep;
    let swept_delta = c.mode == Mode::DetuningSweep;
    if c.mode == Mode::DecayProfile {
        return Ok(());
    }
    for &delta in &c.detunings {
        for &j in &c.hoppings {
            for &n in &c.half_lengths {
                let j = if swept_j { 0.0 } else { j };
                let delta = if swept_delta { -f64::MAX.sqrt() } else { delta };
                let chain = ChainParams::new(c.eps0 - delta, j, n).map_err(CliError::Physics)?;
                let sys =
                    SymmetricSystem::new(chain, c.eps0, c.lambda).map_err(CliError::Physics)?;
                let imps = sys.impurities(1).map_err(CliError::Physics)?;
                validate_regime(&chain, &imps)
                    .into_result(&chain, 1)
                    .map_err(CliError::Physics)?;
            }
        }
    }
    Ok(())
}
