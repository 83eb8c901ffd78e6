use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Benchmark setups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Two-layer internal dam break on `(−5, 5)`.
    SweDambreak,
    /// Two-layer sigmoid interface on `(−5, 5)`.
    SweSmooth,
    /// Two blood vessels of different stiffness coupled at `x = 0`, pressure pulse inflow.
    BloodCoupled,
    /// A Riemann problem for the model named by the `model` key.
    Custom,
}

impl Preset {
    pub const ALL: [Preset; 4] = [
        Preset::SweDambreak,
        Preset::SweSmooth,
        Preset::BloodCoupled,
        Preset::Custom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::SweDambreak => "swe-dambreak",
            Preset::SweSmooth => "swe-smooth",
            Preset::BloodCoupled => "blood-coupled",
            Preset::Custom => "custom",
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown preset `{s}`")))
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Relaxed,
    /// IMEX relaxation scheme at the rate `epsilon`.
    Relaxation,
    CoupledRelaxed,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Relaxed => "relaxed",
            Scheme::Relaxation => "relaxation",
            Scheme::CoupledRelaxed => "coupled-relaxed",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Model of the `custom` preset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelChoice {
    Swe,
    Blood,
}

impl ModelChoice {
    pub fn name(self) -> &'static str {
        match self {
            ModelChoice::Swe => "swe",
            ModelChoice::Blood => "blood",
        }
    }

    pub fn dim(self) -> usize {
        match self {
            ModelChoice::Swe => 4,
            ModelChoice::Blood => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingChoice {
    Kirchhoff,
    ModifiedKirchhoff,
}

impl CouplingChoice {
    pub fn name(self) -> &'static str {
        match self {
            CouplingChoice::Kirchhoff => "kirchhoff",
            CouplingChoice::ModifiedKirchhoff => "modified-kirchhoff",
        }
    }
}

/// A complete, validated description of one run or study.
///
/// Read from flat `key = value` text (`#` starts a comment); the `preset` key
/// selects the defaults and every other key overrides one field. The metadata
/// written next to each result uses the same format, so it can be fed back in.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub preset: Preset,
    pub scheme: Scheme,
    /// Cells of a single-domain run, or per side of a coupled run.
    pub n_cells: usize,
    pub cfl: f64,
    pub mu_left: f64,
    /// Only used by coupled runs.
    pub mu_right: f64,
    pub epsilon: Option<f64>,
    pub t_end: f64,
    /// Coriolis coefficient of the blood model.
    pub alpha: f64,
    /// Single-domain interval.
    pub x_min: f64,
    pub x_max: f64,
    /// Length of each vessel of a coupled run, `(−L, 0) ∪ (0, L)`.
    pub length: f64,
    pub out: PathBuf,

    pub model: ModelChoice,
    /// Riemann data of the `custom` preset, jump at `x = 0`.
    pub left_state: Vec<f64>,
    pub right_state: Vec<f64>,

    pub young_left: f64,
    pub young_right: f64,
    pub thickness: f64,
    pub a0: f64,
    /// Inflow pulse amplitude `P₀`.
    pub amplitude: f64,
    pub coupling: CouplingChoice,
    /// Closed-form path integrals for the blood model instead of quadrature.
    pub closed_form_paths: bool,

    /// `ε = 2^-k` for each `k` of the relaxation-rate study.
    pub eps_exponents: Vec<i32>,
    /// Resolutions of the grid and coupling studies.
    pub study_cells: Vec<usize>,
    /// Reference resolution for L¹ errors of the grid (and, if set, coupling) study.
    pub reference_cells: Option<usize>,
}

impl RunConfig {
    /// Defaults of a preset.
    pub fn preset(preset: Preset) -> Self {
        let swe = RunConfig {
            preset,
            scheme: Scheme::Relaxed,
            n_cells: 4000,
            cfl: 0.9,
            mu_left: 25.0,
            mu_right: 25.0,
            epsilon: None,
            t_end: 0.33,
            alpha: 4.0 / 3.0,
            x_min: -5.0,
            x_max: 5.0,
            length: 1.0,
            out: PathBuf::from("out"),
            model: ModelChoice::Swe,
            left_state: vec![0.2, 0.0, 1.8, 0.0],
            right_state: vec![1.8, 0.0, 0.2, 0.0],
            young_left: 0.5,
            young_right: 0.1,
            thickness: 0.05,
            a0: 5.0,
            amplitude: 2e-3,
            coupling: CouplingChoice::Kirchhoff,
            closed_form_paths: true,
            eps_exponents: vec![7, 8, 9, 10, 11],
            study_cells: vec![500, 1000, 2000],
            reference_cells: None,
        };
        match preset {
            Preset::SweDambreak | Preset::Custom => swe,
            Preset::SweSmooth => RunConfig {
                cfl: 0.1,
                study_cells: vec![250, 500, 1000, 2000],
                reference_cells: Some(4000),
                ..swe
            },
            Preset::BloodCoupled => RunConfig {
                scheme: Scheme::CoupledRelaxed,
                n_cells: 500,
                mu_left: 0.16,
                mu_right: 0.16,
                t_end: 12.0,
                model: ModelChoice::Blood,
                left_state: vec![5.0, 0.0],
                right_state: vec![5.0, 0.0],
                study_cells: vec![250, 500, 1000],
                ..swe
            },
        }
    }

    /// Build from `(key, value)` pairs: defaults of the last `preset` given, then
    /// every other pair in order.
    pub fn from_pairs<K: AsRef<str>, V: AsRef<str>>(pairs: &[(K, V)]) -> Result<Self> {
        let preset = pairs
            .iter()
            .rev()
            .find(|(k, _)| k.as_ref() == "preset")
            .map(|(_, v)| v.as_ref().parse())
            .transpose()?
            .unwrap_or(Preset::SweDambreak);
        let mut cfg = RunConfig::preset(preset);
        for (k, v) in pairs {
            if k.as_ref() != "preset" {
                cfg.set(k.as_ref(), v.as_ref())?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Set one field from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim() {
            "preset" => {
                return Err(Error::Config(
                    "`preset` selects the defaults and cannot be changed afterwards".into(),
                ))
            }
            "scheme" => self.set_scheme(v)?,
            "n_cells" => self.n_cells = num(key, v)?,
            "cfl" => self.cfl = num(key, v)?,
            "mu" => {
                self.mu_left = num(key, v)?;
                self.mu_right = self.mu_left;
            }
            "mu_left" => self.mu_left = num(key, v)?,
            "mu_right" => self.mu_right = num(key, v)?,
            "epsilon" => self.epsilon = optional(key, v, num)?,
            "t_end" => self.t_end = num(key, v)?,
            "alpha" => self.alpha = num(key, v)?,
            "x_min" => self.x_min = num(key, v)?,
            "x_max" => self.x_max = num(key, v)?,
            "length" => self.length = num(key, v)?,
            "out" => self.out = PathBuf::from(v),
            "model" => {
                self.model = match v {
                    "swe" => ModelChoice::Swe,
                    "blood" => ModelChoice::Blood,
                    _ => return Err(Error::Config(format!("unknown model `{v}` (swe | blood)"))),
                }
            }
            "left_state" => self.left_state = list(key, v)?,
            "right_state" => self.right_state = list(key, v)?,
            "young_left" => self.young_left = num(key, v)?,
            "young_right" => self.young_right = num(key, v)?,
            "thickness" => self.thickness = num(key, v)?,
            "a0" => self.a0 = num(key, v)?,
            "amplitude" => self.amplitude = num(key, v)?,
            "coupling" => {
                self.coupling = match v {
                    "kirchhoff" => CouplingChoice::Kirchhoff,
                    "modified-kirchhoff" => CouplingChoice::ModifiedKirchhoff,
                    _ => {
                        return Err(Error::Config(format!(
                            "unknown coupling `{v}` (kirchhoff | modified-kirchhoff)"
                        )))
                    }
                }
            }
            "closed_form_paths" => self.closed_form_paths = num(key, v)?,
            "eps_exponents" => self.eps_exponents = list(key, v)?,
            "study_cells" => self.study_cells = list(key, v)?,
            "reference_cells" => self.reference_cells = optional(key, v, num)?,
            // Derived values recorded in metadata files.
            k if k.starts_with("derived.") => {}
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    fn set_scheme(&mut self, v: &str) -> Result<()> {
        if let Some(inner) = v.strip_prefix("relaxation(").and_then(|r| r.strip_suffix(')')) {
            self.scheme = Scheme::Relaxation;
            self.epsilon = Some(num("scheme", inner)?);
            return Ok(());
        }
        self.scheme = match v {
            "relaxed" => Scheme::Relaxed,
            "relaxation" => Scheme::Relaxation,
            "coupled-relaxed" => Scheme::CoupledRelaxed,
            _ => {
                return Err(Error::Config(format!(
                    "unknown scheme `{v}` (relaxed | relaxation(eps) | coupled-relaxed)"
                )))
            }
        };
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("cfl", self.cfl),
            ("mu_left", self.mu_left),
            ("mu_right", self.mu_right),
            ("t_end", self.t_end),
            ("alpha", self.alpha),
            ("length", self.length),
            ("young_left", self.young_left),
            ("young_right", self.young_right),
            ("thickness", self.thickness),
            ("a0", self.a0),
        ];
        for (name, x) in positive {
            if !(x > 0.0 && x.is_finite()) {
                return Err(Error::Config(format!("`{name}` must be positive and finite, got {x}")));
            }
        }
        if self.cfl > 1.0 {
            return Err(Error::Config(format!("`cfl` must not exceed 1, got {}", self.cfl)));
        }
        if self.n_cells == 0 || self.study_cells.contains(&0) || self.reference_cells == Some(0) {
            return Err(Error::Config("cell counts must be positive".into()));
        }
        if !(self.amplitude.is_finite() && self.x_min.is_finite() && self.x_max > self.x_min) {
            return Err(Error::Config(format!(
                "need x_min < x_max and a finite amplitude, got ({}, {}) and {}",
                self.x_min, self.x_max, self.amplitude
            )));
        }
        if let Some(e) = self.epsilon {
            if !(e > 0.0 && e.is_finite()) {
                return Err(Error::Config(format!("`epsilon` must be positive, got {e}")));
            }
        }
        let coupled = self.preset == Preset::BloodCoupled;
        match self.scheme {
            Scheme::CoupledRelaxed if !coupled => {
                return Err(Error::Config(format!(
                    "the coupled scheme needs the blood-coupled preset, not {}",
                    self.preset
                )))
            }
            Scheme::Relaxed | Scheme::Relaxation if coupled => {
                return Err(Error::Config(
                    "the blood-coupled preset runs the coupled-relaxed scheme".into(),
                ))
            }
            Scheme::Relaxation if self.epsilon.is_none() => {
                return Err(Error::Config("the relaxation scheme needs `epsilon`".into()))
            }
            _ => {}
        }
        if self.preset == Preset::Custom {
            let m = self.model.dim();
            if self.left_state.len() != m || self.right_state.len() != m {
                return Err(Error::Config(format!(
                    "the {} model needs {m}-component `left_state`/`right_state`",
                    self.model.name()
                )));
            }
        }
        Ok(())
    }

    /// Every field as `(key, value)` in the input format.
    pub fn pairs(&self) -> Vec<(&'static str, String)> {
        let join = |v: &[String]| v.join(",");
        vec![
            ("preset", self.preset.to_string()),
            ("scheme", self.scheme.to_string()),
            ("n_cells", self.n_cells.to_string()),
            ("cfl", self.cfl.to_string()),
            ("mu_left", self.mu_left.to_string()),
            ("mu_right", self.mu_right.to_string()),
            ("epsilon", self.epsilon.map_or("none".into(), |e| e.to_string())),
            ("t_end", self.t_end.to_string()),
            ("alpha", self.alpha.to_string()),
            ("x_min", self.x_min.to_string()),
            ("x_max", self.x_max.to_string()),
            ("length", self.length.to_string()),
            ("out", self.out.display().to_string()),
            ("model", self.model.name().into()),
            (
                "left_state",
                join(&self.left_state.iter().map(f64::to_string).collect::<Vec<_>>()),
            ),
            (
                "right_state",
                join(&self.right_state.iter().map(f64::to_string).collect::<Vec<_>>()),
            ),
            ("young_left", self.young_left.to_string()),
            ("young_right", self.young_right.to_string()),
            ("thickness", self.thickness.to_string()),
            ("a0", self.a0.to_string()),
            ("amplitude", self.amplitude.to_string()),
            ("coupling", self.coupling.name().into()),
            ("closed_form_paths", self.closed_form_paths.to_string()),
            (
                "eps_exponents",
                join(&self.eps_exponents.iter().map(i32::to_string).collect::<Vec<_>>()),
            ),
            (
                "study_cells",
                join(&self.study_cells.iter().map(usize::to_string).collect::<Vec<_>>()),
            ),
            (
                "reference_cells",
                self.reference_cells.map_or("none".into(), |n| n.to_string()),
            ),
        ]
    }
}

/// Parse `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`, got `{raw}`", i + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Read a config file, apply `overrides` after it, and validate.
pub fn load_config(path: Option<&Path>, overrides: &[(String, String)]) -> Result<RunConfig> {
    let mut pairs = match path {
        Some(p) => parse_pairs(&std::fs::read_to_string(p)?)?,
        None => Vec::new(),
    };
    pairs.extend_from_slice(overrides);
    RunConfig::from_pairs(&pairs)
}

fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Config(format!("`{key}`: cannot parse `{v}`")))
}

fn optional<T>(key: &str, v: &str, parse: fn(&str, &str) -> Result<T>) -> Result<Option<T>> {
    if v.is_empty() || v == "none" {
        Ok(None)
    } else {
        parse(key, v).map(Some)
    }
}

fn list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    v.split(',').map(|s| num(key, s.trim())).collect()
}
