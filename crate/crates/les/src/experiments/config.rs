//! Line-based experiment configuration files.
//!
//! Format: `key = value` lines under `[section]` headers, `#` comments.
//! Unknown sections or keys are hard errors, so typos never silently fall
//! back to defaults; every physical parameter is echoed into the report.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::analytic::{preset, AnalyticSolutionSpec, ForcingSpec, PresetId};
use crate::error::{LesError, Result};
use crate::solver::{AdvectionForm, ForcingFilterMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    AnalyticCompare,
    ForcedPeriodic,
    VerifyFilter,
    VerifyClosures,
    Convergence,
    LambdaSweep,
}

impl ExperimentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::AnalyticCompare => "analytic-compare",
            ExperimentKind::ForcedPeriodic => "forced-periodic",
            ExperimentKind::VerifyFilter => "verify-filter",
            ExperimentKind::VerifyClosures => "verify-closures",
            ExperimentKind::Convergence => "convergence",
            ExperimentKind::LambdaSweep => "lambda-sweep",
        }
    }
}

impl std::str::FromStr for ExperimentKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "analytic-compare" => Ok(Self::AnalyticCompare),
            "forced-periodic" => Ok(Self::ForcedPeriodic),
            "verify-filter" => Ok(Self::VerifyFilter),
            "verify-closures" => Ok(Self::VerifyClosures),
            "convergence" => Ok(Self::Convergence),
            "lambda-sweep" => Ok(Self::LambdaSweep),
            other => Err(format!(
                "unknown experiment kind `{other}` (expected analytic-compare|forced-periodic|verify-filter|verify-closures|convergence|lambda-sweep)"
            )),
        }
    }
}

/// Fully resolved experiment configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub preset: PresetId,
    pub custom_analytic: Option<AnalyticSolutionSpec>,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub snapshot_times: Vec<f64>,

    // [solver]
    pub domain: (f64, f64),
    pub dx: f64,
    pub dt_ratio: f64,
    pub t_end: f64,
    pub advection: AdvectionForm,
    pub cfl_warn: f64,

    // [model] — None means "take the preset value".
    pub nu: Option<f64>,
    pub lambda: Option<f64>,
    pub q: f64,
    pub rho0: f64,

    // [filter]
    pub eta: Option<f64>,
    pub gamma_t: f64,
    pub gamma_l: f64,
    pub quad_nodes: usize,
    pub quad_nodes_3d: usize,
    pub forcing_filter: ForcingFilterMode,

    // [forcing]
    pub forcing: ForcingSpec,
    pub u0: f64,
    pub forced_nu: f64,
    pub forced_lambda: f64,

    // [experiment] extras
    pub grids: Vec<f64>,
    pub lambdas: Option<Vec<f64>>,
    pub fine_dx: f64,
    pub profile_time: f64,
    pub timeseries_x: f64,
    pub plain_grids: Vec<f64>,
    pub convergence_grids: Vec<f64>,
    pub convergence_t_end: f64,
}

impl ExperimentConfig {
    pub fn default_for(kind: ExperimentKind) -> Self {
        Self {
            kind,
            preset: match kind {
                ExperimentKind::Convergence => PresetId::Set1,
                _ => PresetId::Set3,
            },
            custom_analytic: None,
            out_dir: PathBuf::from("out"),
            seed: 42,
            snapshot_times: vec![1.0],
            domain: (0.0, 1.0),
            dx: 0.1,
            dt_ratio: 0.1,
            t_end: 1.0,
            advection: AdvectionForm::Conservative,
            cfl_warn: 1.0,
            nu: None,
            lambda: None,
            q: 0.5,
            rho0: 1.0,
            eta: None,
            gamma_t: 6.0,
            gamma_l: 6.0,
            quad_nodes: 32,
            quad_nodes_3d: 24,
            forcing_filter: ForcingFilterMode::ExactGaussian,
            forcing: ForcingSpec::forced_periodic_default(),
            u0: 2.3,
            forced_nu: 1.0 / 5000.0,
            forced_lambda: 1.0,
            grids: vec![0.1, 0.05, 0.01],
            lambdas: None,
            fine_dx: 1e-3,
            profile_time: 0.7,
            timeseries_x: 0.5,
            plain_grids: vec![0.1, 0.05, 0.025],
            convergence_grids: vec![1.0 / 40.0, 1.0 / 80.0, 1.0 / 160.0],
            convergence_t_end: 2.0,
        }
    }

    /// The analytic solution selected by the config (preset or custom).
    pub fn analytic_spec(&self) -> AnalyticSolutionSpec {
        self.custom_analytic
            .clone()
            .unwrap_or_else(|| preset(self.preset).spec)
    }

    /// Model ν for analytic-benchmark experiments.
    pub fn bench_nu(&self) -> f64 {
        self.nu.unwrap_or_else(|| self.analytic_spec().nu)
    }

    pub fn bench_lambda(&self) -> f64 {
        self.lambda.unwrap_or_else(|| preset(self.preset).lambda)
    }

    pub fn bench_eta(&self) -> f64 {
        self.eta.unwrap_or_else(|| preset(self.preset).eta)
    }

    /// Echo of every physical/numerical parameter, for CSV/report headers.
    pub fn provenance(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("kind".into(), self.kind.as_str().to_string()),
            ("preset".into(), self.preset.to_string()),
            ("seed".into(), self.seed.to_string()),
            ("domain".into(), format!("{} {}", self.domain.0, self.domain.1)),
            ("dx".into(), self.dx.to_string()),
            ("dt_ratio".into(), self.dt_ratio.to_string()),
            ("t_end".into(), self.t_end.to_string()),
            ("advection".into(), match self.advection {
                AdvectionForm::Conservative => "conservative".into(),
                AdvectionForm::NonConservative => "nonconservative".to_string(),
            }),
            ("nu".into(), self.bench_nu().to_string()),
            ("lambda".into(), self.bench_lambda().to_string()),
            ("q".into(), self.q.to_string()),
            ("rho0".into(), self.rho0.to_string()),
            ("eta".into(), self.bench_eta().to_string()),
            ("gamma_t".into(), self.gamma_t.to_string()),
            ("gamma_l".into(), self.gamma_l.to_string()),
            ("quad_nodes".into(), self.quad_nodes.to_string()),
            ("forcing_filter".into(), match self.forcing_filter {
                ForcingFilterMode::ExactGaussian => "exact".to_string(),
                ForcingFilterMode::Taylor => "taylor".to_string(),
                ForcingFilterMode::Raw => "raw".to_string(),
            }),
        ];
        match self.kind {
            ExperimentKind::ForcedPeriodic => {
                out.push(("forced_nu".into(), self.forced_nu.to_string()));
                out.push(("forced_lambda".into(), self.forced_lambda.to_string()));
                out.push(("u0".into(), self.u0.to_string()));
                out.push(("fine_dx".into(), self.fine_dx.to_string()));
                out.push(("profile_time".into(), self.profile_time.to_string()));
            }
            ExperimentKind::Convergence => {
                out.push(("convergence_t_end".into(), self.convergence_t_end.to_string()));
            }
            _ => {}
        }
        out
    }
}

struct RawConfig {
    path: String,
    // (section, key) -> (line, value); BTreeMap keeps error order stable.
    entries: BTreeMap<(String, String), (usize, String)>,
}

impl RawConfig {
    fn take(&mut self, section: &str, key: &str) -> Option<(usize, String)> {
        self.entries.remove(&(section.to_string(), key.to_string()))
    }

    fn err(&self, line: usize, msg: impl Into<String>) -> LesError {
        LesError::Config {
            path: self.path.clone(),
            line,
            msg: msg.into(),
        }
    }
}

fn parse_raw(path: &Path) -> Result<RawConfig> {
    let text = std::fs::read_to_string(path)?;
    let mut raw = RawConfig {
        path: path.display().to_string(),
        entries: BTreeMap::new(),
    };
    let known_sections = ["experiment", "solver", "model", "filter", "analytic", "forcing"];
    let mut section = String::from("experiment");
    for (idx, line_full) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match line_full.find('#') {
            Some(p) => &line_full[..p],
            None => line_full,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let name = name.trim();
            if !known_sections.contains(&name) {
                return Err(raw.err(line_no, format!("unknown section `[{name}]`")));
            }
            section = name.to_string();
            continue;
        }
        let Some(eq) = line.find('=') else {
            return Err(raw.err(line_no, format!("expected `key = value`, got `{line}`")));
        };
        let key = line[..eq].trim().to_string();
        let value = line[eq + 1..].trim().to_string();
        if key.is_empty() {
            return Err(raw.err(line_no, "empty key"));
        }
        if raw
            .entries
            .insert((section.clone(), key.clone()), (line_no, value))
            .is_some()
        {
            return Err(raw.err(line_no, format!("duplicate key `{key}` in [{section}]")));
        }
    }
    Ok(raw)
}

fn parse_f64(raw: &RawConfig, line: usize, key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .map_err(|_| raw.err(line, format!("key `{key}`: expected a number, got `{v}`")))
}

fn parse_list(raw: &RawConfig, line: usize, key: &str, v: &str) -> Result<Vec<f64>> {
    v.split([',', ' '])
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| raw.err(line, format!("key `{key}`: bad number `{s}` in list")))
        })
        .collect()
}

fn parse_pairs(raw: &RawConfig, line: usize, key: &str, v: &str) -> Result<Vec<(f64, f64)>> {
    let flat = parse_list(raw, line, key, v)?;
    if flat.len() % 2 != 0 {
        return Err(raw.err(
            line,
            format!("key `{key}`: expected amplitude/frequency pairs, got an odd count"),
        ));
    }
    Ok(flat.chunks(2).map(|c| (c[0], c[1])).collect())
}

/// Parse an experiment configuration file.
///
/// `kind_override` (from a CLI subcommand) must agree with the file's
/// `kind` when both are given; with neither, the file must set one.
pub fn parse_config_with_kind(
    path: &Path,
    kind_override: Option<ExperimentKind>,
) -> Result<ExperimentConfig> {
    let mut raw = parse_raw(path)?;

    let file_kind = match raw.take("experiment", "kind") {
        Some((line, v)) => Some(
            v.parse::<ExperimentKind>()
                .map_err(|e| raw.err(line, e))?,
        ),
        None => None,
    };
    let kind = match (kind_override, file_kind) {
        (Some(a), Some(b)) if a != b => {
            return Err(raw.err(
                0,
                format!(
                    "experiment kind mismatch: CLI says {}, config says {}",
                    a.as_str(),
                    b.as_str()
                ),
            ))
        }
        (Some(a), _) => a,
        (None, Some(b)) => b,
        (None, None) => {
            return Err(raw.err(0, "experiment kind required"));
        }
    };

    let mut cfg = ExperimentConfig::default_for(kind);

    if let Some((line, v)) = raw.take("experiment", "preset") {
        if v == "custom" {
            // [analytic] section must supply the constants below.
            cfg.custom_analytic = Some(AnalyticSolutionSpec {
                a0: 0.0,
                b0: 0.0,
                a1: 0.0,
                b1: 0.0,
                a2: 0.0,
                b2: 0.0,
                omega1: 0.0,
                omega2: 0.0,
                nu: 1.0,
            });
        } else {
            cfg.preset = v.parse::<PresetId>().map_err(|e| raw.err(line, e))?;
        }
    }
    if let Some((line, v)) = raw.take("experiment", "out") {
        let _ = line;
        cfg.out_dir = PathBuf::from(v);
    }
    if let Some((line, v)) = raw.take("experiment", "seed") {
        cfg.seed = v
            .parse::<u64>()
            .map_err(|_| raw.err(line, format!("key `seed`: expected an integer, got `{v}`")))?;
    }
    if let Some((line, v)) = raw.take("experiment", "snapshot_times") {
        cfg.snapshot_times = parse_list(&raw, line, "snapshot_times", &v)?;
    }
    if let Some((line, v)) = raw.take("experiment", "grids") {
        cfg.grids = parse_list(&raw, line, "grids", &v)?;
    }
    if let Some((line, v)) = raw.take("experiment", "lambdas") {
        cfg.lambdas = Some(parse_list(&raw, line, "lambdas", &v)?);
    }
    if let Some((line, v)) = raw.take("experiment", "fine_dx") {
        cfg.fine_dx = parse_f64(&raw, line, "fine_dx", &v)?;
    }
    if let Some((line, v)) = raw.take("experiment", "profile_time") {
        cfg.profile_time = parse_f64(&raw, line, "profile_time", &v)?;
    }
    if let Some((line, v)) = raw.take("experiment", "timeseries_x") {
        cfg.timeseries_x = parse_f64(&raw, line, "timeseries_x", &v)?;
    }
    if let Some((line, v)) = raw.take("experiment", "plain_grids") {
        cfg.plain_grids = parse_list(&raw, line, "plain_grids", &v)?;
    }
    if let Some((line, v)) = raw.take("experiment", "convergence_grids") {
        cfg.convergence_grids = parse_list(&raw, line, "convergence_grids", &v)?;
    }
    if let Some((line, v)) = raw.take("experiment", "convergence_t_end") {
        cfg.convergence_t_end = parse_f64(&raw, line, "convergence_t_end", &v)?;
    }

    if let Some((line, v)) = raw.take("solver", "domain") {
        let d = parse_list(&raw, line, "domain", &v)?;
        if d.len() != 2 {
            return Err(raw.err(line, "key `domain`: expected two numbers"));
        }
        cfg.domain = (d[0], d[1]);
    }
    if let Some((line, v)) = raw.take("solver", "dx") {
        cfg.dx = parse_f64(&raw, line, "dx", &v)?;
    }
    if let Some((line, v)) = raw.take("solver", "dt_ratio") {
        cfg.dt_ratio = parse_f64(&raw, line, "dt_ratio", &v)?;
    }
    if let Some((line, v)) = raw.take("solver", "t_end") {
        cfg.t_end = parse_f64(&raw, line, "t_end", &v)?;
    }
    if let Some((line, v)) = raw.take("solver", "advection") {
        cfg.advection = match v.as_str() {
            "conservative" => AdvectionForm::Conservative,
            "nonconservative" => AdvectionForm::NonConservative,
            other => {
                return Err(raw.err(
                    line,
                    format!("key `advection`: expected conservative|nonconservative, got `{other}`"),
                ))
            }
        };
    }
    if let Some((line, v)) = raw.take("solver", "cfl_warn") {
        cfg.cfl_warn = parse_f64(&raw, line, "cfl_warn", &v)?;
    }

    if let Some((line, v)) = raw.take("model", "nu") {
        cfg.nu = Some(parse_f64(&raw, line, "nu", &v)?);
    }
    if let Some((line, v)) = raw.take("model", "lambda") {
        cfg.lambda = Some(parse_f64(&raw, line, "lambda", &v)?);
    }
    if let Some((line, v)) = raw.take("model", "q") {
        cfg.q = parse_f64(&raw, line, "q", &v)?;
    }
    if let Some((line, v)) = raw.take("model", "rho0") {
        cfg.rho0 = parse_f64(&raw, line, "rho0", &v)?;
    }

    if let Some((line, v)) = raw.take("filter", "eta") {
        cfg.eta = Some(parse_f64(&raw, line, "eta", &v)?);
    }
    if let Some((line, v)) = raw.take("filter", "gamma_t") {
        cfg.gamma_t = parse_f64(&raw, line, "gamma_t", &v)?;
    }
    if let Some((line, v)) = raw.take("filter", "gamma_l") {
        cfg.gamma_l = parse_f64(&raw, line, "gamma_l", &v)?;
    }
    if let Some((line, v)) = raw.take("filter", "quad_nodes") {
        cfg.quad_nodes = parse_f64(&raw, line, "quad_nodes", &v)? as usize;
    }
    if let Some((line, v)) = raw.take("filter", "quad_nodes_3d") {
        cfg.quad_nodes_3d = parse_f64(&raw, line, "quad_nodes_3d", &v)? as usize;
    }
    if let Some((line, v)) = raw.take("filter", "forcing_filter") {
        cfg.forcing_filter = match v.as_str() {
            "exact" => ForcingFilterMode::ExactGaussian,
            "taylor" => ForcingFilterMode::Taylor,
            "raw" => ForcingFilterMode::Raw,
            other => {
                return Err(raw.err(
                    line,
                    format!("key `forcing_filter`: expected exact|taylor|raw, got `{other}`"),
                ))
            }
        };
    }

    if cfg.custom_analytic.is_some() {
        let take_field = |key: &str, raw: &mut RawConfig| -> Result<Option<f64>> {
            match raw.take("analytic", key) {
                Some((line, v)) => Ok(Some(parse_f64(raw, line, key, &v)?)),
                None => Ok(None),
            }
        };
        let fields: Vec<Option<f64>> = [
            "a0", "b0", "a1", "b1", "a2", "b2", "omega1", "omega2", "nu",
        ]
        .iter()
        .map(|k| take_field(k, &mut raw))
        .collect::<Result<_>>()?;
        let spec = cfg.custom_analytic.as_mut().unwrap();
        if let Some(v) = fields[0] { spec.a0 = v; }
        if let Some(v) = fields[1] { spec.b0 = v; }
        if let Some(v) = fields[2] { spec.a1 = v; }
        if let Some(v) = fields[3] { spec.b1 = v; }
        if let Some(v) = fields[4] { spec.a2 = v; }
        if let Some(v) = fields[5] { spec.b2 = v; }
        if let Some(v) = fields[6] { spec.omega1 = v; }
        if let Some(v) = fields[7] { spec.omega2 = v; }
        if let Some(v) = fields[8] { spec.nu = v; }
    }

    if let Some((line, v)) = raw.take("forcing", "mean") {
        cfg.forcing.mean = parse_f64(&raw, line, "mean", &v)?;
    }
    if let Some((line, v)) = raw.take("forcing", "spatial") {
        cfg.forcing.spatial = parse_pairs(&raw, line, "spatial", &v)?;
    }
    if let Some((line, v)) = raw.take("forcing", "temporal") {
        cfg.forcing.temporal = parse_pairs(&raw, line, "temporal", &v)?;
    }
    if let Some((line, v)) = raw.take("forcing", "u0") {
        cfg.u0 = parse_f64(&raw, line, "u0", &v)?;
    }
    if let Some((line, v)) = raw.take("forcing", "nu") {
        cfg.forced_nu = parse_f64(&raw, line, "nu", &v)?;
    }
    if let Some((line, v)) = raw.take("forcing", "lambda") {
        cfg.forced_lambda = parse_f64(&raw, line, "lambda", &v)?;
    }

    if let Some(((section, key), (line, _))) = raw.entries.pop_first() {
        return Err(LesError::Config {
            path: raw.path.clone(),
            line,
            msg: format!("unknown key `{key}` in [{section}]"),
        });
    }

    validate(&cfg)?;
    Ok(cfg)
}

pub fn parse_config(path: &Path) -> Result<ExperimentConfig> {
    parse_config_with_kind(path, None)
}

fn validate(cfg: &ExperimentConfig) -> Result<()> {
    let bad = |msg: &str| Err(LesError::InvalidParameter(msg.into()));
    if !(cfg.dx > 0.0) || !(cfg.dt_ratio > 0.0) {
        return bad("dx and dt_ratio must be positive");
    }
    if cfg.t_end < 0.0 {
        return bad("t_end must be nonnegative");
    }
    if cfg.snapshot_times.iter().any(|&t| t < 0.0 || t > cfg.t_end + 1e-12) {
        return bad("snapshot times must lie within [0, t_end]");
    }
    if !(cfg.gamma_t > 0.0 && cfg.gamma_l > 0.0) {
        return bad("gamma_t and gamma_l must be positive");
    }
    if cfg.quad_nodes < 4 || cfg.quad_nodes_3d < 4 {
        return bad("quadrature needs at least 4 nodes per axis");
    }
    if cfg.grids.is_empty() {
        return bad("grids list must not be empty");
    }
    Ok(())
}
