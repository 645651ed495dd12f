//! Flat `key = value` run configuration.
//!
//! One assignment per line, `#` starts a comment, lists are comma separated.
//! Unknown keys are rejected. Keys:
//!
//! | key | default | meaning |
//! |---|---|---|
//! | `experiment` | `validate` | `sample`, `evolve`, `invariance`, `growth`, `converge`, `strichartz`, `validate` |
//! | `alpha` | `1` | nonlinearity exponent, in `(0, 2)` |
//! | `n_modes` | `16` | truncation `N` (reference `N` for `converge`) |
//! | `grid_points` | `8 n_modes` | quadrature parameter `M >= 8 N` |
//! | `quadrature` | `uniform-sine` | or `gauss-legendre` |
//! | `dt` | `1e-3` | time step |
//! | `horizon` | `1` | final time `T` |
//! | `sigma` | `0.25` | regularity of reported norms |
//! | `sobolev_indices` | `0.25` | indices `s < 1/2` for measure checks |
//! | `n_samples` | `1000` | ensemble size |
//! | `master_seed` | `0` | RNG seed |
//! | `scheme` | `strang` | `strang`, `lie` or `picard` |
//! | `output_dir` | unset | run directory |
//! | `record_every` | `10` | trajectory cadence in steps |
//! | `modes` | `1,2` | tracked coefficients |
//! | `observables` | `l2_sq,re_potential,hs_0.25,re_c1,abs2_c2` | invariance observables |
//! | `control` | `true` | also run the linear, unit-weight control |
//! | `tail_c` | `0.5` | tail constant `c` |
//! | `truncations` | `8,16,32` | truncations for `converge` |
//! | `checkpoints` | `0` | number of convergence/growth checkpoints (`0` = default) |
//! | `strichartz_p` | `4` | time exponent `p > 2` |
//! | `time_mesh` | `401` | Simpson points on `[-T, T]` |

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::dynamics::Scheme;
use crate::error::{Error, Result};
use crate::spectral::{QuadratureKind, OVERSAMPLING};
use crate::verify::Observable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Sample,
    Evolve,
    Invariance,
    Growth,
    Converge,
    Strichartz,
    Validate,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Self::Sample,
        Self::Evolve,
        Self::Invariance,
        Self::Growth,
        Self::Converge,
        Self::Strichartz,
        Self::Validate,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Sample => "sample",
            Self::Evolve => "evolve",
            Self::Invariance => "invariance",
            Self::Growth => "growth",
            Self::Converge => "converge",
            Self::Strichartz => "strichartz",
            Self::Validate => "validate",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| config_err("experiment", format!("unknown experiment `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig {
    pub experiment: Experiment,
    pub alpha: f64,
    pub n_modes: usize,
    pub grid_points: usize,
    pub quadrature: String,
    pub dt: f64,
    pub horizon: f64,
    pub sigma: f64,
    pub sobolev_indices: Vec<f64>,
    pub n_samples: usize,
    pub master_seed: u64,
    pub scheme: String,
    pub output_dir: Option<PathBuf>,
    pub record_every: usize,
    pub modes: Vec<usize>,
    pub observables: Vec<String>,
    pub control: bool,
    pub tail_c: f64,
    pub truncations: Vec<usize>,
    pub checkpoints: usize,
    pub strichartz_p: f64,
    pub time_mesh: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        let n_modes = 16;
        Self {
            experiment: Experiment::Validate,
            alpha: 1.0,
            n_modes,
            grid_points: OVERSAMPLING * n_modes,
            quadrature: QuadratureKind::UniformSine.as_str().into(),
            dt: 1e-3,
            horizon: 1.0,
            sigma: 0.25,
            sobolev_indices: vec![0.25],
            n_samples: 1000,
            master_seed: 0,
            scheme: "strang".into(),
            output_dir: None,
            record_every: 10,
            modes: vec![1, 2],
            observables: Observable::standard_set().iter().map(Observable::name).collect(),
            control: true,
            tail_c: 0.5,
            truncations: vec![8, 16, 32],
            checkpoints: 0,
            strichartz_p: 4.0,
            time_mesh: 401,
        }
    }
}

fn config_err(key: &str, reason: impl Into<String>) -> Error {
    Error::Config {
        key: key.to_string(),
        reason: reason.into(),
    }
}

fn parse_value<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| config_err(key, format!("malformed value `{v}`")))
}

fn parse_list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|x| parse_value(key, x.trim())).collect()
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

impl SimConfig {
    /// Parses the text of a config file, applies defaults and validates.
    pub fn parse(text: &str) -> Result<Self> {
        let mut seen = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| config_err(line, format!("line {}: expected `key = value`", lineno + 1)))?;
            let k = k.trim();
            if seen.insert(k.to_string(), v.trim().to_string()).is_some() {
                return Err(config_err(k, "key given twice"));
            }
        }
        let mut c = Self::default();
        let mut grid_given = false;
        for (k, v) in &seen {
            let v = v.as_str();
            match k.as_str() {
                "experiment" => c.experiment = v.parse()?,
                "alpha" => c.alpha = parse_value(k, v)?,
                "n_modes" => c.n_modes = parse_value(k, v)?,
                "grid_points" => {
                    c.grid_points = parse_value(k, v)?;
                    grid_given = true;
                }
                "quadrature" => c.quadrature = v.to_string(),
                "dt" => c.dt = parse_value(k, v)?,
                "horizon" => c.horizon = parse_value(k, v)?,
                "sigma" => c.sigma = parse_value(k, v)?,
                "sobolev_indices" => c.sobolev_indices = parse_list(k, v)?,
                "n_samples" => c.n_samples = parse_value(k, v)?,
                "master_seed" => c.master_seed = parse_value(k, v)?,
                "scheme" => c.scheme = v.to_string(),
                "output_dir" => c.output_dir = (!v.is_empty()).then(|| PathBuf::from(v)),
                "record_every" => c.record_every = parse_value(k, v)?,
                "modes" => c.modes = parse_list(k, v)?,
                "observables" => c.observables = v.split(',').map(|s| s.trim().to_string()).collect(),
                "control" => c.control = parse_value(k, v)?,
                "tail_c" => c.tail_c = parse_value(k, v)?,
                "truncations" => c.truncations = parse_list(k, v)?,
                "checkpoints" => c.checkpoints = parse_value(k, v)?,
                "strichartz_p" => c.strichartz_p = parse_value(k, v)?,
                "time_mesh" => c.time_mesh = parse_value(k, v)?,
                _ => return Err(config_err(k, "unknown key")),
            }
        }
        if !grid_given {
            c.grid_points = OVERSAMPLING * c.n_modes;
        }
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Checks every invariant; the error names the offending key.
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 2.0) {
            return Err(config_err("alpha", format!("{} outside (0, 2)", self.alpha)));
        }
        let lower = ((self.alpha - 1.0) / self.alpha).max(0.0);
        if !(self.sigma > lower && self.sigma < 0.5) {
            return Err(config_err(
                "sigma",
                format!(
                    "{} outside the window ({lower}, 1/2) for alpha = {}",
                    self.sigma, self.alpha
                ),
            ));
        }
        if self.n_modes == 0 {
            return Err(config_err("n_modes", "must be positive"));
        }
        if self.grid_points < OVERSAMPLING * self.n_modes {
            return Err(config_err(
                "grid_points",
                format!(
                    "{} < {OVERSAMPLING} * n_modes = {}",
                    self.grid_points,
                    OVERSAMPLING * self.n_modes
                ),
            ));
        }
        self.quadrature_kind()?;
        self.scheme_kind()?;
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(config_err("dt", "must be positive"));
        }
        if !self.horizon.is_finite() {
            return Err(config_err("horizon", "must be finite"));
        }
        if self.horizon > 0.0 && self.dt > self.horizon {
            return Err(config_err(
                "dt",
                format!("{} exceeds horizon {}", self.dt, self.horizon),
            ));
        }
        if let Some(s) = self.sobolev_indices.iter().find(|s| !(**s < 0.5) || !s.is_finite()) {
            return Err(config_err("sobolev_indices", format!("{s} is not below 1/2")));
        }
        if self.n_samples == 0 {
            return Err(config_err("n_samples", "must be positive"));
        }
        if let Some(m) = self.modes.iter().find(|&&m| m == 0 || m > self.n_modes) {
            return Err(config_err("modes", format!("mode {m} outside 1..={}", self.n_modes)));
        }
        self.observable_set()?;
        if !(self.tail_c > 0.0) {
            return Err(config_err("tail_c", "must be positive"));
        }
        if self.truncations.windows(2).any(|w| w[0] >= w[1]) {
            return Err(config_err("truncations", "must be increasing"));
        }
        if !(self.strichartz_p > 2.0) {
            return Err(config_err("strichartz_p", "must exceed 2"));
        }
        if self.time_mesh < 3 || self.time_mesh.is_multiple_of(2) {
            return Err(config_err("time_mesh", "must be odd and at least 3"));
        }
        Ok(())
    }

    pub fn quadrature_kind(&self) -> Result<QuadratureKind> {
        self.quadrature
            .parse()
            .map_err(|_| config_err("quadrature", format!("unknown quadrature `{}`", self.quadrature)))
    }

    pub fn scheme_kind(&self) -> Result<Scheme> {
        self.scheme
            .parse()
            .map_err(|_| config_err("scheme", format!("unknown scheme `{}`", self.scheme)))
    }

    pub fn observable_set(&self) -> Result<Vec<Observable>> {
        self.observables
            .iter()
            .map(|o| Observable::parse(o).map_err(|_| config_err("observables", format!("unknown observable `{o}`"))))
            .collect()
    }

    /// Text form accepted by [`SimConfig::parse`]; every key is written.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        kv("experiment", self.experiment.to_string());
        kv("alpha", self.alpha.to_string());
        kv("n_modes", self.n_modes.to_string());
        kv("grid_points", self.grid_points.to_string());
        kv("quadrature", self.quadrature.clone());
        kv("dt", self.dt.to_string());
        kv("horizon", self.horizon.to_string());
        kv("sigma", self.sigma.to_string());
        kv("sobolev_indices", join(&self.sobolev_indices));
        kv("n_samples", self.n_samples.to_string());
        kv("master_seed", self.master_seed.to_string());
        kv("scheme", self.scheme.clone());
        if let Some(dir) = &self.output_dir {
            kv("output_dir", dir.display().to_string());
        }
        kv("record_every", self.record_every.to_string());
        kv("modes", join(&self.modes));
        kv("observables", self.observables.join(","));
        kv("control", self.control.to_string());
        kv("tail_c", self.tail_c.to_string());
        kv("truncations", join(&self.truncations));
        kv("checkpoints", self.checkpoints.to_string());
        kv("strichartz_p", self.strichartz_p.to_string());
        kv("time_mesh", self.time_mesh.to_string());
        out
    }
}
