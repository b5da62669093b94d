use super::CliError;
use crate::dynamics::{GridSpec, PacketSpec, Spin};
use crate::kinematics::LatticeSpec;
use crate::linalg::c;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// Keys accepted in a config file or through `--set`. Every field is
/// optional; [`RunConfig::resolve`] fills in defaults.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub command: Option<String>,
    pub mass: Option<f64>,
    pub spacing: Option<f64>,
    pub n_max: Option<u32>,
    pub lattice_dim: Option<u8>,
    pub skip_origin: Option<bool>,
    pub verify_times: Option<usize>,
    pub sweep: Option<usize>,
    pub k0: Option<[f64; 3]>,
    pub center: Option<[f64; 3]>,
    pub sigma: Option<f64>,
    pub w_plus: Option<[f64; 2]>,
    pub w_minus: Option<[f64; 2]>,
    pub spin: Option<String>,
    pub pure_branch: Option<bool>,
    pub grid_points: Option<usize>,
    pub grid_length: Option<f64>,
    pub grid_dim: Option<u8>,
    pub samples: Option<usize>,
    pub periods: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub trajectory: Option<PathBuf>,
    pub scenario: Option<PathBuf>,
    pub format: Option<String>,
    #[serde(default)]
    pub tolerance: BTreeMap<String, f64>,
}

/// Tolerance names and defaults.
pub const DEFAULT_TOLERANCES: [(&str, f64); 13] = [
    ("calibration", 1e-12),
    ("car", 1e-12),
    ("classical", 1e-10),
    ("clifford", 1e-12),
    ("commutator", 1e-12),
    ("decomposition", 1e-10),
    ("frequency", 1e-2),
    ("gram", 1e-10),
    ("hermiticity", 1e-12),
    ("norm", 1e-10),
    ("polarization", 1e-12),
    ("spinor", 1e-12),
    ("trace", 1e-10),
];

pub const DEFAULTS_HELP: &str = "\
Config file: flat TOML (`key = value`, `#` comments). Keys and defaults:
  command               optional; must match the subcommand when present
  mass = 1.0            fermion mass m (required when a config file is given
                        to verify or simulate)
  spacing = 1.0         lattice momentum spacing kappa
  n_max = 1             lattice extent, integer momenta -n_max..n_max
  lattice_dim = 1       lattice dimension (1 or 3)
  skip_origin = false   drop the k = 0 mode
  verify_times = 5      random times for the decomposition check
  sweep = 100           random (k, m) samples for spinor and triad checks
  k0 = [0, 0, 0]        packet center momentum
  center = [0, 0, 0]    packet center position
  sigma = 4.0           packet width
  w_plus = [0.7071067811865476, 0]   positive-branch weight (re, im)
  w_minus = [0.7071067811865476, 0]  negative-branch weight (re, im)
  spin = \"up\"           up | down
  pure_branch = false   positive branch only
  grid_points = 512     points per axis (power of two)
  grid_length = 64.0    box length L
  grid_dim = 1          1 or 3
  samples = 512         time samples
  periods = 8.0         oscillation periods 2 pi / (2 omega(k0)) covered
  seed = 1              seed for randomized sweeps
  out = \".\"             output directory (else $ZBLAB_OUT, else .)
  trajectory            trajectory CSV for `spectrum`
  scenario              scenario file for `horizon`
  format = \"svg\"        diagram format for `horizon`: svg | ascii
  tolerance.NAME = VALUE  per-check tolerance
Tolerance names (default): calibration 1e-12, car 1e-12, classical 1e-10,
  clifford 1e-12, commutator 1e-12, decomposition 1e-10, frequency 1e-2
  (relative), gram 1e-10, hermiticity 1e-12, norm 1e-10, polarization 1e-12,
  spinor 1e-12, trace 1e-10.
Exit codes: 0 success, 1 check failure, 2 usage or config error.";

/// Fully resolved run settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Command named in the config file, if any.
    pub command: Option<String>,
    pub mass: f64,
    pub mass_given: bool,
    pub from_file: bool,
    pub lattice: LatticeSpec,
    pub verify_times: usize,
    pub sweep: usize,
    pub packet: PacketSpec,
    pub grid: GridSpec,
    pub samples: usize,
    pub periods: f64,
    pub seed: u64,
    pub out: PathBuf,
    pub trajectory: Option<PathBuf>,
    pub scenario: Option<PathBuf>,
    pub format: Option<String>,
    pub tolerances: BTreeMap<String, f64>,
}

fn parse_file(path: &Path) -> Result<toml::Table, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    text.parse::<toml::Table>()
        .map_err(|e| CliError::Usage(format!("config {}: {}", path.display(), e.message())))
}

/// Apply `KEY=VALUE`; the value is read as a TOML value, or as a bare
/// string when it does not parse.
fn apply_override(table: &mut toml::Table, spec: &str) -> Result<(), CliError> {
    let (key, value) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got {spec:?}")))?;
    let (key, value) = (key.trim(), value.trim());
    let parsed = format!("v = {value}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(value.to_string()));
    match key.split_once('.') {
        Some(("tolerance", name)) => {
            let entry = table
                .entry("tolerance")
                .or_insert_with(|| toml::Value::Table(toml::Table::new()));
            match entry {
                toml::Value::Table(t) => {
                    t.insert(name.to_string(), parsed);
                }
                _ => return Err(CliError::Usage("`tolerance` must be a table".into())),
            }
        }
        _ => {
            table.insert(key.to_string(), parsed);
        }
    }
    Ok(())
}

pub fn parse_tolerance(spec: &str) -> Result<(String, f64), CliError> {
    let (name, value) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("--tolerance expects NAME=VALUE, got {spec:?}")))?;
    let v: f64 = value
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("tolerance {name}: {value:?} is not a number")))?;
    Ok((name.trim().to_string(), v))
}

pub struct Overrides<'a> {
    pub config: Option<&'a Path>,
    pub set: &'a [String],
    pub tolerance: &'a [String],
    pub seed: Option<u64>,
    pub out: Option<&'a Path>,
    pub format: Option<&'a str>,
    pub env_out: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve(o: &Overrides) -> Result<Self, CliError> {
        let mut table = match o.config {
            Some(p) => parse_file(p)?,
            None => toml::Table::new(),
        };
        for s in o.set {
            apply_override(&mut table, s)?;
        }
        let file: ConfigFile = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| CliError::Usage(format!("config: {}", e.message())))?;

        let mut tolerances: BTreeMap<String, f64> = DEFAULT_TOLERANCES
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect();
        let extra = o
            .tolerance
            .iter()
            .map(|s| parse_tolerance(s))
            .collect::<Result<Vec<_>, _>>()?;
        for (name, value) in file
            .tolerance
            .iter()
            .map(|(k, v)| (k.clone(), *v))
            .chain(extra)
        {
            if !tolerances.contains_key(&name) {
                return Err(CliError::Usage(format!("unknown tolerance name {name:?}")));
            }
            if !(value.is_finite() && value > 0.0) {
                return Err(CliError::Usage(format!(
                    "tolerance {name} must be positive, got {value}"
                )));
            }
            tolerances.insert(name, value);
        }

        let mass = file.mass.unwrap_or(1.0);
        if !(mass.is_finite() && mass >= 0.0) {
            return Err(CliError::Usage(format!(
                "mass must be finite and >= 0, got {mass}"
            )));
        }
        let mut lattice =
            LatticeSpec::line(mass, file.spacing.unwrap_or(1.0), file.n_max.unwrap_or(1));
        lattice.dim = file.lattice_dim.unwrap_or(1);
        lattice.skip_origin = file.skip_origin.unwrap_or(false);

        let spin = match file.spin.as_deref().unwrap_or("up") {
            "up" => Spin::Up,
            "down" => Spin::Down,
            other => {
                return Err(CliError::Usage(format!(
                    "spin must be up or down, got {other:?}"
                )))
            }
        };
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let wp = file.w_plus.unwrap_or([h, 0.0]);
        let wm = file.w_minus.unwrap_or([h, 0.0]);
        let mut packet = PacketSpec {
            k0: file.k0.unwrap_or([0.0; 3]),
            center: file.center.unwrap_or([0.0; 3]),
            sigma: file.sigma.unwrap_or(4.0),
            w_plus: c(wp[0], wp[1]),
            w_minus: c(wm[0], wm[1]),
            spin,
            mass,
        };
        if file.pure_branch.unwrap_or(false) {
            packet = packet.pure_positive();
        }
        let grid = GridSpec {
            points: file.grid_points.unwrap_or(512),
            length: file.grid_length.unwrap_or(64.0),
            dim: file.grid_dim.unwrap_or(1),
        };
        let out = o
            .out
            .map(Path::to_path_buf)
            .or(file.out)
            .or_else(|| o.env_out.clone())
            .unwrap_or_else(|| PathBuf::from("."));
        Ok(Self {
            command: file.command,
            mass,
            mass_given: file.mass.is_some(),
            from_file: o.config.is_some(),
            lattice,
            verify_times: file.verify_times.unwrap_or(5),
            sweep: file.sweep.unwrap_or(100),
            packet,
            grid,
            samples: file.samples.unwrap_or(512),
            periods: file.periods.unwrap_or(8.0),
            seed: o.seed.or(file.seed).unwrap_or(1),
            out,
            trajectory: file.trajectory,
            scenario: file.scenario,
            format: o.format.map(str::to_string).or(file.format),
            tolerances,
        })
    }

    pub fn tolerance(&self, name: &str) -> f64 {
        self.tolerances[name]
    }

    /// A config file that feeds a physics command has to name the mass.
    pub fn require_mass(&self) -> Result<(), CliError> {
        if self.from_file && !self.mass_given {
            return Err(CliError::Usage(
                "config is missing the required key `mass`".into(),
            ));
        }
        Ok(())
    }

    pub fn output_dir(&self) -> Result<&Path, CliError> {
        std::fs::create_dir_all(&self.out).map_err(|e| {
            CliError::Usage(format!(
                "cannot create output directory {}: {e}",
                self.out.display()
            ))
        })?;
        Ok(&self.out)
    }
}
