//! Experiment configuration: TOML tables under `[experiment.NAME]`, validated
//! into [`Experiment`] values before anything runs.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use wardowski::comparison::ComparisonFunction;
use wardowski::metric_space::FiniteMetricSpace;
use wardowski::numerics::Tolerance;
use wardowski::verifier::CheckMode;
use wardowski::wardowski::{make_log, make_log_poly, make_neg_power, make_step_log, WardowskiError, WardowskiFunction};

use crate::descriptor::{Descriptor, DescriptorError};
use crate::error::CliError;

/// One experiment as written in the file. Every key is optional, and
/// command-line flags overlay the file values.
#[derive(Debug, Clone, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawExperiment {
    pub space: Option<String>,
    pub map: Option<String>,
    #[serde(rename = "F")]
    pub f: Option<String>,
    pub a: Option<f64>,
    pub k: Option<f64>,
    pub eps: Option<f64>,
    pub max_iter: Option<i64>,
    pub starts: Option<Vec<toml::Value>>,
    pub phi: Option<String>,
    pub conditions: Option<Vec<String>>,
    pub mode: Option<String>,
    pub domain: Option<String>,
    pub phi_grid: Option<Vec<f64>>,
    pub stages: Option<Vec<String>>,
    pub trace_file: Option<PathBuf>,
    pub eta: Option<f64>,
    pub delta: Option<Vec<f64>>,
}

impl RawExperiment {
    /// Fields set in `other` replace those in `self`.
    pub fn overlay(mut self, other: &RawExperiment) -> Self {
        macro_rules! take {
            ($($field:ident),*) => { $( if other.$field.is_some() { self.$field = other.$field.clone(); } )* };
        }
        take!(space, map, f, a, k, eps, max_iter, starts, phi, conditions, mode, domain, phi_grid, stages, trace_file, eta, delta);
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub experiment: BTreeMap<String, RawExperiment>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::ConfigParse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpaceSpec {
    Real,
    Euclidean { dim: usize },
    Matrix { path: PathBuf, space: FiniteMetricSpace },
}

#[derive(Debug, Clone, PartialEq)]
pub enum MapSpec {
    /// `x -> factor·x`
    Scale { factor: f64 },
    /// `x -> factor·x + shift`, coordinatewise
    Affine { factor: f64, shift: f64 },
    /// `x -> center + factor·(x - center)`
    Toward { factor: f64, center: Vec<f64> },
    Identity,
    Table(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Starts {
    Real(Vec<f64>),
    Euclidean(Vec<Vec<f64>>),
    Index(Vec<usize>),
}

impl Starts {
    pub fn len(&self) -> usize {
        match self {
            Starts::Real(v) => v.len(),
            Starts::Euclidean(v) => v.len(),
            Starts::Index(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DomainSpec {
    Interval { lo: f64, hi: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Space,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionKind {
    Af,
    Phi,
    Strict,
    Nonexpansive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Verify,
    DerivePhi,
    Solve,
    Classify,
    Witness,
}

impl Stage {
    pub const ALL: [Stage; 5] = [Stage::Verify, Stage::DerivePhi, Stage::Solve, Stage::Classify, Stage::Witness];

    pub fn parse(s: &str) -> Option<Stage> {
        Stage::ALL.into_iter().find(|st| st.name() == s)
    }

    pub fn name(self) -> &'static str {
        match self {
            Stage::Verify => "verify",
            Stage::DerivePhi => "derive-phi",
            Stage::Solve => "solve",
            Stage::Classify => "classify",
            Stage::Witness => "witness",
        }
    }
}

#[derive(Debug, Clone)]
pub enum TracePoints {
    Real(Vec<f64>),
    Euclidean(Vec<Vec<f64>>),
    Index(Vec<usize>),
}

#[derive(Debug, Clone)]
pub struct WitnessSpec {
    pub trace: Option<TracePoints>,
    pub eta: Option<f64>,
    pub delta: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Experiment {
    pub name: String,
    pub space_desc: String,
    pub space: SpaceSpec,
    pub map_desc: String,
    pub map: MapSpec,
    pub f: Option<WardowskiFunction>,
    pub a: Option<f64>,
    pub k: Option<f64>,
    pub eps: f64,
    pub max_iter: usize,
    pub starts: Starts,
    pub phi: Option<ComparisonFunction>,
    pub conditions: BTreeSet<ConditionKind>,
    pub mode: CheckMode,
    pub domain: DomainSpec,
    pub phi_grid: Vec<f64>,
    pub stages: BTreeSet<Stage>,
    pub witness: WitnessSpec,
}

const DEFAULT_EPS: f64 = 1e-9;
const DEFAULT_MAX_ITER: usize = 10_000;
const DEFAULT_SAMPLES: usize = 10_000;
const DEFAULT_PHI_GRID: [f64; 4] = [0.1, 0.5, 1.0, 2.0];

struct Ctx<'a> {
    name: &'a str,
}

impl Ctx<'_> {
    fn err(&self, field: &str, message: impl Into<String>) -> CliError {
        CliError::ConfigSemantic { experiment: self.name.to_string(), field: field.to_string(), message: message.into() }
    }

    fn desc(&self, field: &str, e: DescriptorError) -> CliError {
        self.err(field, e.to_string())
    }

    fn parse(&self, field: &str, text: &str) -> Result<Descriptor, CliError> {
        Descriptor::parse(text).map_err(|e| self.desc(field, e))
    }

    fn positive(&self, field: &str, v: f64) -> Result<f64, CliError> {
        if v.is_finite() && v > 0.0 {
            Ok(v)
        } else {
            Err(self.err(field, format!("must be a finite positive number, got {v}")))
        }
    }
}

pub fn parse_family(text: &str) -> Result<WardowskiFunction, DescriptorError> {
    let d = Descriptor::parse(text)?;
    let bad = |e: WardowskiError| {
        let WardowskiError::InvalidParameter { name, value } = e;
        DescriptorError::BadValue { key: name.to_string(), value: value.to_string(), expected: "finite positive number" }
    };
    match d.name.as_str() {
        "log" => {
            d.expect_keys(&[])?;
            Ok(make_log())
        }
        "log_poly" => {
            d.expect_keys(&["alpha", "beta", "gamma"])?;
            make_log_poly(d.f64("alpha")?, d.f64("beta")?, d.f64("gamma")?).map_err(bad)
        }
        "neg_power" => {
            d.expect_keys(&["delta"])?;
            make_neg_power(d.f64("delta")?).map_err(bad)
        }
        "step_log" => {
            d.expect_keys(&["jump", "at"])?;
            make_step_log(d.f64("jump")?, d.f64("at")?).map_err(bad)
        }
        other => Err(DescriptorError::UnknownName { kind: "F family", name: other.to_string() }),
    }
}

fn parse_space(ctx: &Ctx, text: &str, base: &Path) -> Result<SpaceSpec, CliError> {
    let d = ctx.parse("space", text)?;
    match d.name.as_str() {
        "real" => {
            d.expect_keys(&[]).map_err(|e| ctx.desc("space", e))?;
            Ok(SpaceSpec::Real)
        }
        "euclidean" => {
            d.expect_keys(&["dim"]).map_err(|e| ctx.desc("space", e))?;
            let dim = d.usize("dim").map_err(|e| ctx.desc("space", e))?;
            if dim == 0 {
                return Err(ctx.err("space", "dim must be at least 1"));
            }
            Ok(SpaceSpec::Euclidean { dim })
        }
        "matrix" => {
            d.expect_keys(&["path"]).map_err(|e| ctx.desc("space", e))?;
            let path = base.join(d.str("path").map_err(|e| ctx.desc("space", e))?);
            let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
            let space = FiniteMetricSpace::parse(&text).map_err(|e| ctx.err("space", e.to_string()))?;
            Ok(SpaceSpec::Matrix { path, space })
        }
        other => Err(ctx.desc("space", DescriptorError::UnknownName { kind: "space", name: other.to_string() })),
    }
}

fn parse_map(ctx: &Ctx, text: &str, space: &SpaceSpec) -> Result<MapSpec, CliError> {
    let d = ctx.parse("map", text)?;
    let e = |err| ctx.desc("map", err);
    let finite = matches!(space, SpaceSpec::Matrix { .. });
    let map = match d.name.as_str() {
        "identity" => {
            d.expect_keys(&[]).map_err(e)?;
            MapSpec::Identity
        }
        "scale" if !finite => {
            d.expect_keys(&["factor"]).map_err(e)?;
            MapSpec::Scale { factor: d.f64("factor").map_err(e)? }
        }
        "affine" if !finite => {
            d.expect_keys(&["factor", "shift"]).map_err(e)?;
            MapSpec::Affine { factor: d.f64("factor").map_err(e)?, shift: d.f64_or("shift", 0.0).map_err(e)? }
        }
        "translate" if !finite => {
            d.expect_keys(&["shift"]).map_err(e)?;
            MapSpec::Affine { factor: 1.0, shift: d.f64("shift").map_err(e)? }
        }
        "toward" if !finite => {
            d.expect_keys(&["factor", "center"]).map_err(e)?;
            let center = d.f64_list("center").map_err(e)?;
            let dim = if let SpaceSpec::Euclidean { dim } = space { *dim } else { 1 };
            if center.len() != dim {
                return Err(ctx.err("map", format!("center has {} coordinates, space has {dim}", center.len())));
            }
            MapSpec::Toward { factor: d.f64("factor").map_err(e)?, center }
        }
        "table" if finite => {
            d.expect_keys(&["values"]).map_err(e)?;
            MapSpec::Table(d.usize_list("values").map_err(e)?)
        }
        "constant" if finite => {
            d.expect_keys(&["value"]).map_err(e)?;
            let SpaceSpec::Matrix { space, .. } = space else { unreachable!() };
            MapSpec::Table(vec![d.usize("value").map_err(e)?; space.len()])
        }
        other => {
            let kind = if finite { "map on a finite space" } else { "map on a continuous space" };
            return Err(ctx.desc("map", DescriptorError::UnknownName { kind, name: other.to_string() }));
        }
    };
    if let (MapSpec::Table(table), SpaceSpec::Matrix { space, .. }) = (&map, space) {
        if table.len() != space.len() || table.iter().any(|&t| t >= space.len()) {
            return Err(ctx.err("map", format!("table must list {} indices below {}", space.len(), space.len())));
        }
    }
    Ok(map)
}

fn number(v: &toml::Value) -> Option<f64> {
    v.as_float().or_else(|| v.as_integer().map(|i| i as f64))
}

fn parse_starts(ctx: &Ctx, values: &[toml::Value], space: &SpaceSpec) -> Result<Starts, CliError> {
    let bad = |i: usize, what: &str| ctx.err("starts", format!("entry {i} is not {what}"));
    match space {
        SpaceSpec::Real => values.iter().enumerate().map(|(i, v)| number(v).ok_or_else(|| bad(i, "a number"))).collect::<Result<_, _>>().map(Starts::Real),
        SpaceSpec::Euclidean { dim } => values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let arr = v.as_array().ok_or_else(|| bad(i, "an array"))?;
                let p: Option<Vec<f64>> = arr.iter().map(number).collect();
                p.filter(|p| p.len() == *dim).ok_or_else(|| bad(i, &format!("an array of {dim} numbers")))
            })
            .collect::<Result<_, _>>()
            .map(Starts::Euclidean),
        SpaceSpec::Matrix { space, .. } => values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.as_integer()
                    .filter(|&x| x >= 0 && (x as usize) < space.len())
                    .map(|x| x as usize)
                    .ok_or_else(|| bad(i, &format!("an index below {}", space.len())))
            })
            .collect::<Result<_, _>>()
            .map(Starts::Index),
    }
}

fn parse_mode(ctx: &Ctx, text: &str, seed: u64) -> Result<CheckMode, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || ctx.err("mode", format!("expected `exhaustive` or `sampled:N[:SEED]`, got `{text}`"));
    match parts.as_slice() {
        ["exhaustive"] => Ok(CheckMode::Exhaustive),
        ["sampled", n] => Ok(CheckMode::Sampled { count: n.parse().map_err(|_| bad())?, seed }),
        ["sampled", n, s] => Ok(CheckMode::Sampled { count: n.parse().map_err(|_| bad())?, seed: s.parse().map_err(|_| bad())? }),
        _ => Err(bad()),
    }
}

fn parse_domain(ctx: &Ctx, text: Option<&str>, space: &SpaceSpec) -> Result<DomainSpec, CliError> {
    let e = |err| ctx.desc("domain", err);
    match (space, text) {
        (SpaceSpec::Matrix { .. }, None) => Ok(DomainSpec::Space),
        (SpaceSpec::Matrix { .. }, Some(_)) => Err(ctx.err("domain", "finite spaces use their own points")),
        (SpaceSpec::Real, None) => Ok(DomainSpec::Interval { lo: -1.0, hi: 1.0 }),
        (SpaceSpec::Euclidean { dim }, None) => Ok(DomainSpec::Box { lo: vec![-1.0; *dim], hi: vec![1.0; *dim] }),
        (SpaceSpec::Real, Some(t)) => {
            let d = ctx.parse("domain", t)?;
            if d.name != "interval" {
                return Err(e(DescriptorError::UnknownName { kind: "domain on the real line", name: d.name }));
            }
            d.expect_keys(&["lo", "hi"]).map_err(e)?;
            let (lo, hi) = (d.f64("lo").map_err(e)?, d.f64("hi").map_err(e)?);
            if !(lo < hi) {
                return Err(ctx.err("domain", format!("empty interval [{lo}, {hi}]")));
            }
            Ok(DomainSpec::Interval { lo, hi })
        }
        (SpaceSpec::Euclidean { dim }, Some(t)) => {
            let d = ctx.parse("domain", t)?;
            if d.name != "box" {
                return Err(e(DescriptorError::UnknownName { kind: "domain in euclidean space", name: d.name }));
            }
            d.expect_keys(&["lo", "hi"]).map_err(e)?;
            let widen = |v: Vec<f64>| if v.len() == 1 { vec![v[0]; *dim] } else { v };
            let lo = widen(d.f64_list("lo").map_err(e)?);
            let hi = widen(d.f64_list("hi").map_err(e)?);
            if lo.len() != *dim || hi.len() != *dim || lo.iter().zip(&hi).any(|(l, h)| !(l < h)) {
                return Err(ctx.err("domain", format!("box bounds must give lo < hi in {dim} coordinates")));
            }
            Ok(DomainSpec::Box { lo, hi })
        }
    }
}

fn parse_phi(ctx: &Ctx, raw: &RawExperiment, f: Option<&WardowskiFunction>, a: Option<f64>) -> Result<Option<ComparisonFunction>, CliError> {
    match (&raw.phi, f, a) {
        (Some(text), _, _) => {
            let d = ctx.parse("phi", text)?;
            let e = |err| ctx.desc("phi", err);
            match d.name.as_str() {
                "linear" => {
                    d.expect_keys(&["alpha"]).map_err(e)?;
                    let alpha = d.f64("alpha").map_err(e)?;
                    ComparisonFunction::linear(alpha).map(Some).map_err(|err| ctx.err("phi", err.to_string()))
                }
                "derived" => {
                    d.expect_keys(&[]).map_err(e)?;
                    match (f, a) {
                        (Some(f), Some(a)) => Ok(ComparisonFunction::derived(f, a, Tolerance::default()).ok()),
                        _ => Err(ctx.err("phi", "`derived` needs both F and a")),
                    }
                }
                other => Err(e(DescriptorError::UnknownName { kind: "comparison function", name: other.to_string() })),
            }
        }
        (None, Some(f), Some(a)) => Ok(ComparisonFunction::derived(f, a, Tolerance::default()).ok()),
        _ => Ok(None),
    }
}

fn read_trace(ctx: &Ctx, path: &Path, space: &SpaceSpec) -> Result<TracePoints, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::io(path, std::io::Error::other(e.to_string())))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::io(path, std::io::Error::other(e.to_string())))?;
        let parsed: Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(row) => rows.push(row),
            // a header line
            Err(_) if i == 0 => continue,
            Err(_) => return Err(ctx.err("trace_file", format!("row {} is not numeric", i + 1))),
        }
    }
    let width = match space {
        SpaceSpec::Euclidean { dim } => *dim,
        _ => 1,
    };
    if rows.len() < 2 || rows.iter().any(|r| r.len() != width) {
        return Err(ctx.err("trace_file", format!("need at least two rows of {width} column(s)")));
    }
    Ok(match space {
        SpaceSpec::Real => TracePoints::Real(rows.into_iter().map(|r| r[0]).collect()),
        SpaceSpec::Euclidean { .. } => TracePoints::Euclidean(rows),
        SpaceSpec::Matrix { space, .. } => {
            let idx: Option<Vec<usize>> = rows
                .iter()
                .map(|r| (r[0] >= 0.0 && r[0].fract() == 0.0 && (r[0] as usize) < space.len()).then_some(r[0] as usize))
                .collect();
            TracePoints::Index(idx.ok_or_else(|| ctx.err("trace_file", "entries must be point indices"))?)
        }
    })
}

/// Checks every field of `raw` and resolves files relative to `base`.
pub fn validate(name: &str, raw: &RawExperiment, base: &Path, seed: u64) -> Result<Experiment, CliError> {
    let ctx = Ctx { name };
    let space_desc = raw.space.clone().unwrap_or_else(|| "real".to_string());
    let space = parse_space(&ctx, &space_desc, base)?;
    let map_desc = raw.map.clone().ok_or_else(|| ctx.err("map", "missing"))?;
    let map = parse_map(&ctx, &map_desc, &space)?;
    let f = raw.f.as_deref().map(parse_family).transpose().map_err(|e| ctx.desc("F", e))?;
    let a = raw.a.map(|a| ctx.positive("a", a)).transpose()?;
    let k = match raw.k {
        Some(k) if !(k > 0.0 && k < 1.0) => return Err(ctx.err("k", format!("must lie in (0, 1), got {k}"))),
        k => k,
    };
    let eps = ctx.positive("eps", raw.eps.unwrap_or(DEFAULT_EPS))?;
    let max_iter = match raw.max_iter {
        None => DEFAULT_MAX_ITER,
        Some(n) if n >= 1 => n as usize,
        Some(n) => return Err(ctx.err("max_iter", format!("must be at least 1, got {n}"))),
    };
    let starts = match &raw.starts {
        Some(values) => parse_starts(&ctx, values, &space)?,
        None => match &space {
            SpaceSpec::Real => Starts::Real(vec![1.0]),
            SpaceSpec::Euclidean { dim } => Starts::Euclidean(vec![vec![1.0; *dim]]),
            SpaceSpec::Matrix { space, .. } => Starts::Index(space.points()),
        },
    };
    if starts.is_empty() {
        return Err(ctx.err("starts", "at least one start is needed"));
    }
    let phi = parse_phi(&ctx, raw, f.as_ref(), a)?;

    let conditions: BTreeSet<ConditionKind> = match &raw.conditions {
        None => {
            let mut c = BTreeSet::from([ConditionKind::Strict, ConditionKind::Nonexpansive]);
            if f.is_some() && a.is_some() {
                c.insert(ConditionKind::Af);
            }
            if phi.is_some() {
                c.insert(ConditionKind::Phi);
            }
            c
        }
        Some(list) => list
            .iter()
            .map(|c| match c.as_str() {
                "aF" | "af" => Ok(ConditionKind::Af),
                "phi" => Ok(ConditionKind::Phi),
                "strict" => Ok(ConditionKind::Strict),
                "nonexpansive" => Ok(ConditionKind::Nonexpansive),
                other => Err(ctx.err("conditions", format!("unknown condition `{other}`"))),
            })
            .collect::<Result<_, _>>()?,
    };
    if conditions.contains(&ConditionKind::Af) && (f.is_none() || a.is_none()) {
        return Err(ctx.err("conditions", "the aF condition needs F and a"));
    }
    if conditions.contains(&ConditionKind::Phi) && phi.is_none() {
        return Err(ctx.err("conditions", "the phi condition needs phi, or F and a"));
    }

    let finite = matches!(space, SpaceSpec::Matrix { .. });
    let mode = match &raw.mode {
        Some(text) => parse_mode(&ctx, text, seed)?,
        None if finite => CheckMode::Exhaustive,
        None => CheckMode::Sampled { count: DEFAULT_SAMPLES, seed },
    };
    if mode == CheckMode::Exhaustive && !finite {
        return Err(ctx.err("mode", "exhaustive checks need a finite (matrix) space"));
    }
    let domain = parse_domain(&ctx, raw.domain.as_deref(), &space)?;

    let phi_grid = raw.phi_grid.clone().unwrap_or_else(|| DEFAULT_PHI_GRID.to_vec());
    if let Some(t) = phi_grid.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(ctx.err("phi_grid", format!("entries must be finite and nonnegative, got {t}")));
    }

    let stages = match &raw.stages {
        None => Stage::ALL.into_iter().collect(),
        Some(list) => list
            .iter()
            .map(|s| Stage::parse(s).ok_or_else(|| ctx.err("stages", format!("unknown stage `{s}`"))))
            .collect::<Result<_, _>>()?,
    };

    let eta = raw.eta.map(|e| ctx.positive("eta", e)).transpose()?;
    let delta = raw.delta.clone().unwrap_or_default();
    if let Some(d) = delta.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
        return Err(ctx.err("delta", format!("entries must be positive, got {d}")));
    }
    if eta.is_some_and(|e| delta.contains(&e)) {
        return Err(ctx.err("eta", "must not be one of the delta points"));
    }
    let trace = raw.trace_file.as_ref().map(|p| read_trace(&ctx, &base.join(p), &space)).transpose()?;

    Ok(Experiment {
        name: name.to_string(),
        space_desc,
        space,
        map_desc,
        map,
        f,
        a,
        k,
        eps,
        max_iter,
        starts,
        phi,
        conditions,
        mode,
        domain,
        phi_grid,
        stages,
        witness: WitnessSpec { trace, eta, delta },
    })
}

/// All experiments of a file with `overrides` applied, in name order.
pub fn load_experiments(
    file: Option<(&ConfigFile, &Path)>,
    overrides: &RawExperiment,
    seed: u64,
) -> Result<Vec<Experiment>, CliError> {
    match file {
        Some((cfg, base)) => {
            if cfg.experiment.is_empty() {
                return Err(CliError::ConfigSemantic {
                    experiment: String::new(),
                    field: "experiment".into(),
                    message: "no [experiment.NAME] tables".into(),
                });
            }
            cfg.experiment.iter().map(|(name, raw)| validate(name, &raw.clone().overlay(overrides), base, seed)).collect()
        }
        None => Ok(vec![validate("cli", overrides, Path::new("."), seed)?]),
    }
}
