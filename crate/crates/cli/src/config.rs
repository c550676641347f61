//! Flat `key = value` experiment configuration.
//!
//! One assignment per line; `#` starts a comment. Keys are dotted
//! (`geometry.name`, `rule.s.n`) and may appear once. Values are plain text;
//! lists are comma separated and point lists use `;` between points.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use nearquad::estimates::EstimateOptions;
use nearquad::geometry::{builtin_geometry, io, DirectionSpec, Geometry, GeometryParams, DEFAULT_SAMPLE_ORDER};
use nearquad::potentials::{DensitySpec, KernelSpec, Layer, LayerPotential, Pde, DEFAULT_REFERENCE_TOL};
use nearquad::rootfind::{ApproximationMode, SmoothPartStrategy, DEFAULT_TAYLOR_ORDER};
use nearquad::targets::TargetGenerator;
use nearquad::{HalfIntegerP, RuleKind, TargetPoint};

use crate::problem::Problem;

/// A configuration problem, with the offending line when known.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub key: Option<String>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, &self.key) {
            (Some(l), Some(k)) => write!(f, "line {l}, field '{k}': {}", self.message),
            (None, Some(k)) => write!(f, "field '{k}': {}", self.message),
            (Some(l), None) => write!(f, "line {l}: {}", self.message),
            (None, None) => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

/// Raw assignments with their line numbers.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, (String, usize)>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError { line: Some(line), key: None, message: "expected 'key = value'".into() });
            };
            let key = key.trim();
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.') {
                return Err(ConfigError { line: Some(line), key: None, message: format!("malformed key '{key}'") });
            }
            if let Some((_, first)) = entries.get(key) {
                return Err(ConfigError {
                    line: Some(line),
                    key: Some(key.into()),
                    message: format!("duplicate key (first set on line {first})"),
                });
            }
            entries.insert(key.to_string(), (value.trim().to_string(), line));
        }
        Ok(RawConfig { entries })
    }

    /// Sets or replaces a value, e.g. from a command-line flag.
    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.to_string(), (value.into(), 0));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(v, _)| v.as_str())
    }

    /// `key = value` lines in key order, for echoing into output metadata.
    pub fn echo(&self) -> Vec<String> {
        self.entries.iter().map(|(k, (v, _))| format!("{k} = {v}")).collect()
    }

    fn err(&self, key: &str, message: impl Into<String>) -> ConfigError {
        let line = self.entries.get(key).map(|(_, l)| *l).filter(|&l| l > 0);
        ConfigError { line, key: Some(key.into()), message: message.into() }
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| self.err(key, format!("cannot parse '{v}'"))),
        }
    }

    fn number(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.parsed::<f64>(key)? {
            Some(x) if !x.is_finite() => Err(self.err(key, "must be finite")),
            other => Ok(other),
        }
    }

    fn list<T: std::str::FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, ConfigError> {
        let Some(v) = self.get(key) else { return Ok(None) };
        v.split(',')
            .map(|s| s.trim().parse::<T>().map_err(|_| self.err(key, format!("cannot parse list entry '{}'", s.trim()))))
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }

    fn fixed<const N: usize>(&self, key: &str) -> Result<Option<[f64; N]>, ConfigError> {
        match self.list::<f64>(key)? {
            None => Ok(None),
            Some(v) if v.len() == N => Ok(Some(std::array::from_fn(|i| v[i]))),
            Some(v) => Err(self.err(key, format!("expected {N} values, got {}", v.len()))),
        }
    }

    fn counts(&self, key: &str) -> Result<[usize; 2], ConfigError> {
        match self.list::<usize>(key)? {
            Some(v) if v.len() == 2 => Ok([v[0], v[1]]),
            Some(_) => Err(self.err(key, "expected two counts")),
            None => Err(ConfigError { line: None, key: Some(key.into()), message: "missing".into() }),
        }
    }

    fn lib<T>(&self, key: &str, r: nearquad::Result<T>) -> Result<T, ConfigError> {
        r.map_err(|e| self.err(key, e.to_string()))
    }
}

/// Keys accepted at the top level of each section; geometry parameters are open.
const KNOWN_KEYS: &[&str] = &[
    "geometry.name",
    "geometry.file",
    "rule.kind",
    "rule.n",
    "rule.panels",
    "rule.order",
    "rule.s.kind",
    "rule.s.n",
    "rule.s.panels",
    "rule.t.kind",
    "rule.t.n",
    "rule.t.panels",
    "kernel.pde",
    "kernel.layer",
    "kernel.omega",
    "density.name",
    "p",
    "seed",
    "output",
    "targets.generator",
    "targets.origin",
    "targets.u",
    "targets.v",
    "targets.counts",
    "targets.re",
    "targets.im",
    "targets.h",
    "targets.count",
    "targets.level",
    "targets.major",
    "targets.minor",
    "targets.points",
    "estimate.approximation",
    "estimate.taylor_order",
    "estimate.smooth_part",
    "estimate.panels_to_sum",
    "estimate.neighborhood",
    "reference.tol",
    "sweep.n",
    "sweep.p",
];

/// A fully resolved experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub raw: RawConfig,
    pub geometry: GeometrySource,
    pub rules: [DirectionSpec; 2],
    pub sample_order: usize,
    pub kernel: KernelSpec,
    pub density: DensitySpec,
    /// Exponent p; `None` picks the conventional one for the source type.
    pub p: Option<HalfIntegerP>,
    pub targets: TargetGenerator,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub options: EstimateOptions,
    pub reference_tol: f64,
    pub sweep_n: Vec<usize>,
    pub sweep_p: Vec<HalfIntegerP>,
}

#[derive(Debug, Clone)]
pub enum GeometrySource {
    Builtin(Geometry),
    /// A discretization read from a file; its rules come from the file.
    File(PathBuf, Box<Problem>),
}

fn rule_kind(raw: &RawConfig, key: &str, default: RuleKind) -> Result<RuleKind, ConfigError> {
    match raw.get(key) {
        None => Ok(default),
        Some(v) => raw.lib(key, RuleKind::from_name(v)),
    }
}

fn direction(raw: &RawConfig, prefix: &str) -> Result<DirectionSpec, ConfigError> {
    let kind_key = format!("rule.{prefix}kind");
    let kind = rule_kind(raw, &kind_key, rule_kind(raw, "rule.kind", RuleKind::Trapezoidal)?)?;
    let n_key = format!("rule.{prefix}n");
    let n = match raw.parsed::<usize>(&n_key)? {
        Some(n) => n,
        None => raw.parsed::<usize>("rule.n")?.ok_or_else(|| raw.err(&n_key, "missing"))?,
    };
    let panels_key = format!("rule.{prefix}panels");
    let panels = match raw.parsed::<usize>(&panels_key)? {
        Some(p) => p,
        None => raw.parsed::<usize>("rule.panels")?.unwrap_or(1),
    };
    Ok(DirectionSpec { kind, n, panels })
}

fn parse_points(raw: &RawConfig, key: &str) -> Result<Vec<TargetPoint>, ConfigError> {
    let Some(v) = raw.get(key) else { return Ok(Vec::new()) };
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(';')
        .map(|p| {
            let coords = p
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| raw.err(key, format!("cannot parse point '{}'", p.trim())))?;
            raw.lib(key, TargetPoint::from_slice(&coords))
        })
        .collect()
}

fn target_generator(raw: &RawConfig) -> Result<TargetGenerator, ConfigError> {
    let name = raw.get("targets.generator").unwrap_or("list");
    let need = |key: &str| raw.number(key)?.ok_or_else(|| raw.err(key, "missing"));
    let count = || raw.parsed::<usize>("targets.count")?.ok_or_else(|| raw.err("targets.count", "missing"));
    let pair = |key: &str| raw.fixed::<2>(key)?.map(|[a, b]| (a, b)).ok_or_else(|| raw.err(key, "missing"));
    let vec3 = |key: &str| -> Result<[f64; 3], ConfigError> {
        match raw.list::<f64>(key)? {
            Some(v) if v.len() == 2 => Ok([v[0], v[1], 0.0]),
            Some(v) if v.len() == 3 => Ok([v[0], v[1], v[2]]),
            Some(_) => Err(raw.err(key, "expected 2 or 3 values")),
            None => Err(raw.err(key, "missing")),
        }
    };
    Ok(match name {
        "plane_grid" => TargetGenerator::PlaneGrid {
            origin: vec3("targets.origin")?,
            u: vec3("targets.u")?,
            v: vec3("targets.v")?,
            counts: raw.counts("targets.counts")?,
        },
        "complexified_grid" => TargetGenerator::ComplexifiedGrid {
            re: pair("targets.re")?,
            im: pair("targets.im")?,
            counts: raw.counts("targets.counts")?,
        },
        "random_normal_offset" => TargetGenerator::RandomNormalOffset { h: need("targets.h")?, count: count()? },
        "level_set" => TargetGenerator::LevelSet { level: need("targets.level")?, count: count()? },
        "toroidal_shell" => TargetGenerator::ToroidalShell {
            major: need("targets.major")?,
            minor: need("targets.minor")?,
            counts: raw.counts("targets.counts")?,
        },
        "list" => TargetGenerator::List(parse_points(raw, "targets.points")?),
        other => return Err(raw.err("targets.generator", format!("unknown generator '{other}'"))),
    })
}

fn half_integer(raw: &RawConfig, key: &str, v: f64) -> Result<HalfIntegerP, ConfigError> {
    raw.lib(key, HalfIntegerP::from_f64(v))
}

impl ExperimentConfig {
    pub fn from_raw(raw: RawConfig) -> Result<Self, ConfigError> {
        for key in raw.entries.keys() {
            if !key.starts_with("geometry.") && !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(raw.err(key, "unknown key"));
            }
        }

        let geometry = match (raw.get("geometry.file"), raw.get("geometry.name")) {
            (Some(_), Some(_)) => return Err(raw.err("geometry.file", "give either geometry.file or geometry.name")),
            (Some(path), None) => {
                let path = PathBuf::from(path);
                let problem = load_discretization(&path).map_err(|m| raw.err("geometry.file", m))?;
                GeometrySource::File(path, Box::new(problem))
            }
            (None, Some(name)) => {
                let params: GeometryParams = raw
                    .entries
                    .iter()
                    .filter_map(|(k, (v, _))| k.strip_prefix("geometry.").map(|p| (p.to_string(), v.clone())))
                    .filter(|(k, _)| k != "name")
                    .collect();
                GeometrySource::Builtin(raw.lib("geometry.name", builtin_geometry(name, &params))?)
            }
            (None, None) => return Err(raw.err("geometry.name", "missing")),
        };

        let rules = match &geometry {
            GeometrySource::File(_, problem) => problem.specs(),
            GeometrySource::Builtin(Geometry::Surface(_)) => [direction(&raw, "s.")?, direction(&raw, "t.")?],
            GeometrySource::Builtin(Geometry::Curve(_)) => {
                let d = direction(&raw, "")?;
                [d, d]
            }
        };

        let pde = raw.lib("kernel.pde", Pde::from_name(raw.get("kernel.pde").unwrap_or("harmonic")))?;
        let layer = raw.lib("kernel.layer", Layer::from_name(raw.get("kernel.layer").unwrap_or("single")))?;
        let omega = raw.number("kernel.omega")?.unwrap_or(0.0);
        let kernel = raw.lib("kernel.omega", KernelSpec::new(pde, layer, omega))?;
        let density = raw.lib("density.name", DensitySpec::from_name(raw.get("density.name").unwrap_or("one")))?;
        let p = raw.number("p")?.map(|v| half_integer(&raw, "p", v)).transpose()?;

        let taylor_order = raw.parsed::<usize>("estimate.taylor_order")?.unwrap_or(DEFAULT_TAYLOR_ORDER);
        let approximation = raw.lib(
            "estimate.approximation",
            ApproximationMode::from_name(raw.get("estimate.approximation").unwrap_or("default"), taylor_order),
        )?;
        let smooth_part = match raw.get("estimate.smooth_part").unwrap_or("interpolated") {
            "interpolated" => SmoothPartStrategy::Interpolated,
            "max_bound" => SmoothPartStrategy::MaxBound,
            other => return Err(raw.err("estimate.smooth_part", format!("unknown strategy '{other}'"))),
        };
        let defaults = EstimateOptions::default();
        let options = EstimateOptions {
            approximation,
            smooth_part,
            panels_to_sum: raw.parsed("estimate.panels_to_sum")?.unwrap_or(defaults.panels_to_sum),
            neighborhood: raw.number("estimate.neighborhood")?.unwrap_or(defaults.neighborhood),
            keep_oscillation: false,
        };
        if options.panels_to_sum == 0 {
            return Err(raw.err("estimate.panels_to_sum", "must be at least 1"));
        }

        let reference_tol = raw.number("reference.tol")?.unwrap_or(DEFAULT_REFERENCE_TOL);
        if reference_tol < DEFAULT_REFERENCE_TOL {
            return Err(raw.err("reference.tol", format!("must be at least {DEFAULT_REFERENCE_TOL:e}")));
        }

        let sweep_n = raw.list::<usize>("sweep.n")?.unwrap_or_default();
        if sweep_n.windows(2).any(|w| w[0] >= w[1]) {
            return Err(raw.err("sweep.n", "must be strictly increasing"));
        }
        let sweep_p = raw
            .list::<f64>("sweep.p")?
            .unwrap_or_default()
            .into_iter()
            .map(|v| half_integer(&raw, "sweep.p", v))
            .collect::<Result<Vec<_>, _>>()?;

        Ok(ExperimentConfig {
            geometry,
            rules,
            sample_order: raw.parsed("rule.order")?.unwrap_or(DEFAULT_SAMPLE_ORDER),
            kernel,
            density,
            p,
            targets: target_generator(&raw)?,
            seed: raw.parsed("seed")?.unwrap_or(0),
            output: raw.get("output").map(PathBuf::from),
            options,
            reference_tol,
            sweep_n,
            sweep_p,
            raw,
        })
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Self::from_raw(RawConfig::parse(text)?)
    }

    /// Builds the discretization, with the node count overridden by `n` when given.
    pub fn problem(&self, n: Option<usize>) -> Result<Problem, ConfigError> {
        let mut rules = self.rules;
        if let Some(n) = n {
            for r in &mut rules {
                r.n = n;
            }
        }
        match &self.geometry {
            GeometrySource::Builtin(g) => Problem::build(g, rules, self.sample_order)
                .map_err(|e| ConfigError { line: None, key: Some("rule".into()), message: e.to_string() }),
            GeometrySource::File(..) if n.is_some() => Err(ConfigError {
                line: None,
                key: Some("geometry.file".into()),
                message: "sweeps need a built-in geometry".into(),
            }),
            GeometrySource::File(_, problem) => Ok(problem.as_ref().clone()),
        }
    }

    /// The potential for exponent `p`, or the conventional exponent.
    pub fn potential(&self, problem: &Problem, p: Option<HalfIntegerP>) -> Result<LayerPotential, ConfigError> {
        let p = match p.or(self.p) {
            Some(p) => p,
            None => LayerPotential::default_p(&self.kernel, problem.is_surface(), problem.dim())
                .map_err(|e| ConfigError { line: None, key: Some("p".into()), message: e.to_string() })?,
        };
        Ok(LayerPotential::new(self.kernel, self.density.clone(), p))
    }
}

fn load_discretization(path: &Path) -> Result<Problem, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let first = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#'));
    let parsed = match first {
        Some(l) if l.starts_with("surface") => io::read_surface(&text).map(Problem::Surface),
        _ => io::read_curve(&text).map(Problem::Curve),
    };
    parsed.map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_curve_config() {
        let cfg = ExperimentConfig::parse(
            "# potato\ngeometry.name = potato\ngeometry.amplitude = 0.2\nrule.kind = gauss-legendre\nrule.n = 16\n\
             rule.panels = 20\ntargets.generator = level_set\ntargets.level = 1.05\ntargets.count = 10\nseed = 3\n",
        )
        .unwrap();
        assert_eq!(cfg.rules[0], DirectionSpec::gauss_legendre(16, 20));
        assert_eq!(cfg.seed, 3);
        assert_eq!(cfg.targets, TargetGenerator::LevelSet { level: 1.05, count: 10 });
        assert!(matches!(cfg.geometry, GeometrySource::Builtin(Geometry::Curve(_))));
    }

    #[test]
    fn surface_directions_fall_back_to_shared_keys() {
        let cfg = ExperimentConfig::parse("geometry.name = torus\nrule.n = 10\nrule.t.n = 30\n").unwrap();
        assert_eq!(cfg.rules, [DirectionSpec::trapezoidal(10), DirectionSpec::trapezoidal(30)]);
    }

    #[test]
    fn errors_name_line_and_field() {
        let e = ExperimentConfig::parse("geometry.name = circle\nrule.n = 16\nkernel.pde = elastic\n").unwrap_err();
        assert_eq!((e.line, e.key.as_deref()), (Some(3), Some("kernel.pde")));
        let e = ExperimentConfig::parse("geometry.name = circle\nrule.n = x\n").unwrap_err();
        assert_eq!(e.line, Some(2));
        let e = RawConfig::parse("a = 1\nnonsense\n").unwrap_err();
        assert_eq!(e.line, Some(2));
        let e = ExperimentConfig::parse("geometry.name = circle\nrule.n = 8\nfoo = 1\n").unwrap_err();
        assert_eq!(e.key.as_deref(), Some("foo"));
        assert!(ExperimentConfig::parse("geometry.name = circle\nrule.n = 8\nrule.n = 9\n").is_err());
        assert!(ExperimentConfig::parse("geometry.name = circle\nrule.n = 8\nsweep.n = 10,8\n").is_err());
        assert!(ExperimentConfig::parse("rule.n = 8\n").is_err());
    }

    #[test]
    fn point_lists() {
        let cfg = ExperimentConfig::parse("geometry.name = circle\nrule.n = 8\ntargets.points = 0.5,0; 0,0.25\n").unwrap();
        let TargetGenerator::List(points) = cfg.targets else { panic!() };
        assert_eq!(points, vec![TargetPoint::new2(0.5, 0.0), TargetPoint::new2(0.0, 0.25)]);
        let cfg = ExperimentConfig::parse("geometry.name = circle\nrule.n = 8\n").unwrap();
        assert_eq!(cfg.targets, TargetGenerator::List(Vec::new()));
    }
}
