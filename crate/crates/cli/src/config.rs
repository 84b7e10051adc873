//! Run configuration: command-line flags over a key=value file over defaults.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use ncosc_core::adjudicate::hf::DEFAULT_DELTA;
use ncosc_core::fock::{BasisSpec, QuantumNumbers};
use ncosc_core::opalg::Space;
use ncosc_core::spectra::PhaseSpaceParams;

use crate::CliError;

/// Options shared by every subcommand.
#[derive(Args, Debug, Default, Clone)]
pub struct Common {
    /// Reduced Planck constant
    #[arg(long, global = true)]
    pub hbar: Option<f64>,
    #[arg(long, global = true)]
    pub mass: Option<f64>,
    /// Oscillator frequency
    #[arg(long, global = true)]
    pub omega: Option<f64>,
    /// Cyclotron frequency
    #[arg(long = "omega-c", global = true)]
    pub omega_c: Option<f64>,
    /// Cyclotron frequency sweep START:END:STEPS
    #[arg(long = "omega-c-range", global = true, value_name = "A:B:N")]
    pub omega_c_range: Option<String>,
    /// Space-phase scaling factor, 0 < alpha <= 1
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Position noncommutativity
    #[arg(long, global = true)]
    pub theta: Option<f64>,
    /// Momentum noncommutativity
    #[arg(long, global = true)]
    pub eta: Option<f64>,
    #[arg(long, global = true)]
    pub nrho: Option<u32>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub mu: Option<i32>,
    #[arg(long, global = true)]
    pub nz: Option<u32>,
    /// State grid MAX_PLANAR:MAX_NZ, all states with 2n_rho+|mu| <= MAX_PLANAR
    #[arg(long, global = true, value_name = "P:Z")]
    pub grid: Option<String>,
    /// Fock cutoff per axis, N or NX,NY,NZ
    #[arg(long, global = true)]
    pub basis: Option<String>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// csv or text
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Noncommutativity in the plane only or in all of space
    #[arg(long, global = true, value_name = "plane|space")]
    pub space: Option<String>,
    /// Finite-difference step for eigenvalue slopes
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    /// key=value file; flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sweep {
    pub start: f64,
    pub end: f64,
    pub steps: usize,
}

impl Sweep {
    pub fn points(&self) -> Vec<f64> {
        let n = self.steps;
        let mut v: Vec<f64> =
            (0..n).map(|i| self.start + (self.end - self.start) * i as f64 / (n - 1) as f64).collect();
        v[n - 1] = self.end;
        v
    }
}

impl FromStr for Sweep {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(format!("range '{s}' must be START:END:STEPS"));
        };
        let start: f64 = a.trim().parse().map_err(|_| format!("bad range start '{a}'"))?;
        let end: f64 = b.trim().parse().map_err(|_| format!("bad range end '{b}'"))?;
        let steps: usize = n.trim().parse().map_err(|_| format!("bad step count '{n}'"))?;
        if !(start.is_finite() && end.is_finite()) || start >= end {
            return Err(format!("range needs start < end, got {start}:{end}"));
        }
        if steps < 2 {
            return Err(format!("range needs at least 2 steps, got {steps}"));
        }
        Ok(Sweep { start, end, steps })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum States {
    Single(QuantumNumbers),
    Grid { max_planar: u32, max_nz: u32 },
}

impl States {
    pub fn list(&self) -> Vec<QuantumNumbers> {
        match *self {
            States::Single(q) => vec![q],
            States::Grid { max_planar, max_nz } => QuantumNumbers::grid(max_planar, max_nz),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    /// `omega_c` holds the single value, or the first point of a sweep.
    pub params: PhaseSpaceParams,
    pub sweep: Option<Sweep>,
    pub states: Option<States>,
    pub basis: Option<BasisSpec>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub space: Space,
    pub delta: f64,
}

impl RunConfig {
    pub fn omega_cs(&self) -> Vec<f64> {
        match &self.sweep {
            Some(s) => s.points(),
            None => vec![self.params.omega_c],
        }
    }
}

const KEYS: [&str; 18] = [
    "hbar",
    "mass",
    "omega",
    "omega-c",
    "omega-c-range",
    "alpha",
    "theta",
    "eta",
    "nrho",
    "mu",
    "nz",
    "grid",
    "basis",
    "out",
    "format",
    "space",
    "delta",
    "claims",
];

/// Flat `key = value` lines; `#` comments and blank lines ignored. Keys use
/// the long flag names, with `_` accepted for `-`.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| format!("line {}: expected key=value", k + 1))?;
        let key = key.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(format!("line {}: unknown key '{key}'", k + 1));
        }
        if out.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(format!("line {}: duplicate key '{key}'", k + 1));
        }
    }
    Ok(out)
}

pub fn load_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_file(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn pick<T: FromStr>(flag: Option<T>, file: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    match file.get(key) {
        None => Ok(None),
        Some(v) => v.parse().map(Some).map_err(|_| CliError::Usage(format!("config key {key}: bad value '{v}'"))),
    }
}

fn pick_str(flag: &Option<String>, file: &BTreeMap<String, String>, key: &str) -> Option<String> {
    flag.clone().or_else(|| file.get(key).cloned())
}

pub fn parse_basis(s: &str) -> Result<BasisSpec, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let n: Vec<usize> = parts
        .iter()
        .map(|p| p.parse::<usize>().map_err(|_| format!("bad basis cutoff '{p}'")))
        .collect::<Result<_, _>>()?;
    match n.as_slice() {
        [a] => Ok(BasisSpec::uniform(*a)),
        [a, b, c] => Ok(BasisSpec::new(*a, *b, *c)),
        _ => Err(format!("basis '{s}' must be N or NX,NY,NZ")),
    }
}

pub fn parse_grid(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("grid '{s}' must be MAX_PLANAR:MAX_NZ"))?;
    let a = a.trim().parse().map_err(|_| format!("bad grid bound '{a}'"))?;
    let b = b.trim().parse().map_err(|_| format!("bad grid bound '{b}'"))?;
    Ok((a, b))
}

/// Merge flags, the optional config file and the defaults
/// `ħ = m = ω = α = 1`, `ω_c = 1`, `θ = η = 0.01`.
pub fn resolve(c: &Common) -> Result<(RunConfig, BTreeMap<String, String>), CliError> {
    let file = match &c.config {
        Some(p) => load_config_file(p)?,
        None => BTreeMap::new(),
    };
    let usage = CliError::Usage;
    let hbar = pick(c.hbar, &file, "hbar")?.unwrap_or(1.0);
    let mass = pick(c.mass, &file, "mass")?.unwrap_or(1.0);
    let omega = pick(c.omega, &file, "omega")?.unwrap_or(1.0);
    let alpha = pick(c.alpha, &file, "alpha")?.unwrap_or(1.0);
    let theta = pick(c.theta, &file, "theta")?.unwrap_or(0.01);
    let eta = pick(c.eta, &file, "eta")?.unwrap_or(0.01);
    let omega_c_flag = pick(c.omega_c, &file, "omega-c")?;
    let sweep = match pick_str(&c.omega_c_range, &file, "omega-c-range") {
        Some(s) => Some(s.parse::<Sweep>().map_err(usage)?),
        None => None,
    };
    if sweep.is_some() && c.omega_c.is_some() {
        return Err(CliError::Usage("--omega-c and --omega-c-range are mutually exclusive".into()));
    }
    let omega_c = match (&sweep, omega_c_flag) {
        (Some(s), _) if c.omega_c.is_none() => s.start,
        (_, Some(w)) => w,
        _ => 1.0,
    };
    let params = PhaseSpaceParams::new(hbar, mass, omega, omega_c, alpha, theta, eta)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    if let Some(s) = &sweep {
        params.with_omega_c(s.end).map_err(|e| CliError::Usage(e.to_string()))?;
    }

    let nrho = pick(c.nrho, &file, "nrho")?;
    let mu = pick(c.mu, &file, "mu")?;
    let nz = pick(c.nz, &file, "nz")?;
    let grid = pick_str(&c.grid, &file, "grid");
    let states = match (nrho.is_some() || mu.is_some() || nz.is_some(), grid) {
        (true, Some(_)) => return Err(CliError::Usage("give either quantum numbers or --grid, not both".into())),
        (true, None) => Some(States::Single(QuantumNumbers::new(nrho.unwrap_or(0), mu.unwrap_or(0), nz.unwrap_or(0)))),
        (false, Some(g)) => {
            let (max_planar, max_nz) = parse_grid(&g).map_err(usage)?;
            Some(States::Grid { max_planar, max_nz })
        }
        (false, None) => None,
    };
    let basis = match pick_str(&c.basis, &file, "basis") {
        Some(s) => Some(parse_basis(&s).map_err(usage)?),
        None => None,
    };
    let format = match pick_str(&c.format, &file, "format").as_deref() {
        None | Some("text") => Format::Text,
        Some("csv") => Format::Csv,
        Some(other) => return Err(CliError::Usage(format!("unknown format '{other}', expected csv or text"))),
    };
    let space = match pick_str(&c.space, &file, "space").as_deref() {
        None | Some("space") => Space::Space,
        Some("plane") => Space::Plane,
        Some(other) => return Err(CliError::Usage(format!("unknown space '{other}', expected plane or space"))),
    };
    let delta = pick(c.delta, &file, "delta")?.unwrap_or(DEFAULT_DELTA);
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(CliError::Usage(format!("delta must be positive, got {delta}")));
    }
    let out = c.out.clone().or_else(|| file.get("out").map(PathBuf::from));
    Ok((RunConfig { params, sweep, states, basis, out, format, space, delta }, file))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_parsing() {
        let s: Sweep = "0.1:10:3".parse().unwrap();
        assert_eq!(s.points(), vec![0.1, 5.05, 10.0]);
        assert!("1:1:3".parse::<Sweep>().is_err());
        assert!("2:1:3".parse::<Sweep>().is_err());
        assert!("0:1:1".parse::<Sweep>().is_err());
        assert!("0:1".parse::<Sweep>().is_err());
    }

    #[test]
    fn config_file_format() {
        let m = parse_config_file("# run\nomega_c = 2.5\n\neta=0.2 # strong\n").unwrap();
        assert_eq!(m["omega-c"], "2.5");
        assert_eq!(m["eta"], "0.2");
        assert!(parse_config_file("colour=red").is_err());
        assert!(parse_config_file("eta").is_err());
        assert!(parse_config_file("eta=1\neta=2").is_err());
    }

    #[test]
    fn flags_beat_file_beat_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "omega-c=3\ntheta=0.05\n").unwrap();
        let c = Common { config: Some(path), theta: Some(0.02), ..Common::default() };
        let (cfg, _) = resolve(&c).unwrap();
        assert_eq!(cfg.params.omega_c, 3.0);
        assert_eq!(cfg.params.theta, 0.02);
        assert_eq!(cfg.params.eta, 0.01);
        assert_eq!(cfg.params.hbar, 1.0);
    }

    #[test]
    fn basis_and_grid() {
        assert_eq!(parse_basis("7").unwrap(), BasisSpec::uniform(7));
        assert_eq!(parse_basis("4,5,6").unwrap(), BasisSpec::new(4, 5, 6));
        assert!(parse_basis("4,5").is_err());
        assert_eq!(parse_grid("6:4").unwrap(), (6, 4));
        assert!(parse_grid("6").is_err());
    }
}
