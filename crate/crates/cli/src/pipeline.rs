//! Runs the configured stages of each experiment and collects their reports.

use std::collections::BTreeSet;

use log::{debug, info};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use wardowski::comparison::{check_matkowski, derive_phi, phi_series};
use wardowski::metric_space::{tele_sum, Euclidean, MetricSpace, RealLine, SequenceTrace};
use wardowski::numerics::Tolerance;
use wardowski::solver::{
    classify_operator, descent_ladder, hyers_ulam_certificate, picard_iterate, tail_bound_regular, Certificate,
    PicardConfig, PicardRun, SelfMap,
};
use wardowski::verifier::{
    check_af_contractive, check_phi_contractive, check_strict_and_nonexpansive, extract_witness, finite_self_map,
    propose_eta, BoxDomain, Domain, Interval,
};

use crate::config::{ConditionKind, DomainSpec, Experiment, MapSpec, SpaceSpec, Stage, Starts, TracePoints};

/// Iteration cap for the Matkowski and series checks of the derive-phi stage.
const PHI_ITERATION_CAP: u64 = 100_000;
const MATKOWSKI_LADDER: [f64; 3] = [1e-3, 1e-6, 1e-9];
/// First ranks listed in the witness report.
const WITNESS_PREVIEW: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CsvRow {
    pub n: usize,
    pub x_n: String,
    pub rho_n: f64,
    #[serde(rename = "F_rho_n")]
    pub f_rho_n: Option<String>,
    pub tele_sum: f64,
    pub tail_bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunTable {
    pub start: usize,
    pub rows: Vec<CsvRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub name: String,
    pub summary: Value,
    pub runs: Vec<RunTable>,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize to JSON")
}

fn error_value(e: impl std::fmt::Display) -> Value {
    json!({ "error": e.to_string() })
}

fn point_text(v: &Value) -> String {
    match v {
        Value::Array(xs) => xs.iter().map(point_text).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}

struct Stages<'a, S: MetricSpace, D> {
    exp: &'a Experiment,
    map: SelfMap<S>,
    starts: Vec<S::Point>,
    domain: D,
    trace: Option<Vec<S::Point>>,
}

impl<S, D> Stages<'_, S, D>
where
    S: MetricSpace + Clone,
    S::Point: Serialize,
    D: Domain<S::Point>,
{
    fn verify(&self) -> Value {
        let exp = self.exp;
        let mut out = Map::new();
        for cond in &exp.conditions {
            let report = match cond {
                ConditionKind::Af => {
                    let (f, a) = (exp.f.as_ref().expect("validated"), exp.a.expect("validated"));
                    check_af_contractive(&self.map, f, a, &self.domain, exp.mode).map(|r| to_value(&r))
                }
                ConditionKind::Phi => {
                    let phi = exp.phi.as_ref().expect("validated");
                    check_phi_contractive(&self.map, phi, &self.domain, exp.mode).map(|r| to_value(&r))
                }
                ConditionKind::Strict => {
                    check_strict_and_nonexpansive(&self.map, &self.domain, exp.mode).map(|(s, _)| to_value(&s))
                }
                ConditionKind::Nonexpansive => {
                    check_strict_and_nonexpansive(&self.map, &self.domain, exp.mode).map(|(_, n)| to_value(&n))
                }
            };
            let key = to_value(cond).as_str().expect("unit variant").to_string();
            out.insert(key, report.unwrap_or_else(error_value));
        }
        Value::Object(out)
    }

    fn derive_phi(&self) -> Value {
        let exp = self.exp;
        let tol = Tolerance::default();
        let mut out = Map::new();
        if let (Some(f), Some(a)) = (&exp.f, exp.a) {
            let points: Vec<Value> = exp
                .phi_grid
                .iter()
                .map(|&t| derive_phi(f, a, t, &tol).map(|p| to_value(&p)).unwrap_or_else(error_value))
                .collect();
            out.insert("points".into(), Value::Array(points));
        }
        match &exp.phi {
            Some(phi) => {
                out.insert("phi".into(), to_value(phi.origin()));
                let grid: Vec<f64> = exp.phi_grid.iter().copied().filter(|&t| t > 0.0).collect();
                out.insert("matkowski".into(), to_value(&check_matkowski(phi, &grid, PHI_ITERATION_CAP, &MATKOWSKI_LADDER)));
                let series: Vec<Value> = grid
                    .iter()
                    .map(|&t| json!({ "t": t, "series": to_value(&phi_series(phi, t, &tol, PHI_ITERATION_CAP)) }))
                    .collect();
                out.insert("series".into(), Value::Array(series));
            }
            None => {
                out.insert("skipped".into(), json!("needs phi, or F and a"));
            }
        }
        Value::Object(out)
    }

    fn config(&self) -> PicardConfig {
        PicardConfig::new(self.exp.eps, self.exp.max_iter)
    }

    fn run_report(&self, run: &PicardRun<S::Point>, start: usize) -> (Value, RunTable) {
        let exp = self.exp;
        let tol = Tolerance::default();
        let mut certificates: Vec<Value> = run.certificates.iter().map(to_value).collect();
        let mut tail = None;
        if let Some(phi) = &exp.phi {
            certificates.push(hyers_ulam_certificate(run, phi, &tol, PHI_ITERATION_CAP).map(|c| to_value(&c)).unwrap_or_else(error_value));
        }
        if let (Some(f), Some(a), Some(k)) = (&exp.f, exp.a, exp.k) {
            match tail_bound_regular(run, f, a, k, None) {
                Ok(cert) => {
                    if let Certificate::TailBound(tb) = cert {
                        tail = Some(tb);
                    }
                    certificates.push(to_value(&cert));
                }
                Err(e) => certificates.push(error_value(e)),
            }
        }

        let rho = run.trace.rho();
        let mut summary = json!({
            "start": to_value(&run.trace.points()[0]),
            "status": to_value(&run.status),
            "iterations": rho.len(),
            "last": to_value(run.trace.last()),
            "last_rho": rho.last(),
            "tele_sum": tele_sum(&run.trace),
            "certificates": certificates,
        });
        let ladder = match (&exp.f, exp.a) {
            (Some(f), Some(a)) => Some(descent_ladder(run, f, a)),
            _ => None,
        };
        if let Some(ladder) = &ladder {
            let min_margin = ladder.steps.iter().filter_map(|s| s.step_margin).fold(f64::INFINITY, f64::min);
            summary["descent"] = json!({
                "cumulative_holds": ladder.cumulative_holds(),
                "min_step_margin": min_margin.is_finite().then_some(min_margin),
            });
        }

        let mut partial = 0.0;
        let rows = rho
            .iter()
            .enumerate()
            .map(|(n, &r)| {
                partial += r;
                CsvRow {
                    n,
                    x_n: point_text(&to_value(&run.trace.points()[n])),
                    rho_n: r,
                    f_rho_n: ladder.as_ref().map(|l| l.steps[n].f_rho.to_string()),
                    tele_sum: partial,
                    tail_bound: tail.and_then(|tb| tb.rho_bound(n)),
                }
            })
            .collect();
        (summary, RunTable { start, rows })
    }

    fn solve(&self) -> (Value, Vec<RunTable>) {
        let cfg = self.config();
        let (values, tables): (Vec<Value>, Vec<RunTable>) = self
            .starts
            .iter()
            .enumerate()
            .map(|(i, x0)| {
                let run = picard_iterate(&self.map, x0.clone(), &cfg);
                debug!("{}: start {i} finished after {} steps", self.exp.name, run.trace.rho().len());
                self.run_report(&run, i)
            })
            .unzip();
        (Value::Array(values), tables)
    }

    fn classify(&self) -> Value {
        match classify_operator(&self.map, &self.starts, &self.config()) {
            Ok(v) => json!({
                "label": v.label(),
                "level": to_value(&v.level),
                "tele": v.tele,
                "common_limit": to_value(&v.common_limit),
            }),
            Err(e) => error_value(e),
        }
    }

    fn witness(&self) -> Value {
        let exp = self.exp;
        let space = self.map.space();
        let (source, trace) = match &self.trace {
            Some(points) => ("trace_file", SequenceTrace::from_points(space, points.clone())),
            None => ("picard_run", picard_iterate(&self.map, self.starts[0].clone(), &self.config()).trace),
        };
        let eta = match exp.witness.eta {
            Some(eta) => eta,
            None => {
                let points = trace.points();
                let lo = trace.rho().iter().copied().filter(|&r| r > 0.0).fold(f64::INFINITY, f64::min);
                let hi = points.iter().map(|p| space.dist(&points[0], p)).fold(0.0, f64::max);
                match propose_eta(&exp.witness.delta, lo, hi) {
                    Some(eta) => eta,
                    None => return json!({ "source": source, "error": "no eta proposal: the trace has no spread" }),
                }
            }
        };
        match extract_witness(space, &trace, eta, &exp.witness.delta, None) {
            Ok(w) => json!({
                "source": source,
                "eta": w.eta,
                "j_eta": w.j_eta,
                "ranks": w.m_seq.len(),
                "m": &w.m_seq[..w.m_seq.len().min(WITNESS_PREVIEW)],
                "n": &w.n_seq[..w.n_seq.len().min(WITNESS_PREVIEW)],
                "checks": to_value(&w.checks),
            }),
            Err(e) => json!({ "source": source, "eta": eta, "error": e.to_string() }),
        }
    }

    fn run(&self, stages: &BTreeSet<Stage>) -> (Map<String, Value>, Vec<RunTable>) {
        let mut out = Map::new();
        let mut tables = Vec::new();
        for stage in stages {
            let value = match stage {
                Stage::Verify => self.verify(),
                Stage::DerivePhi => self.derive_phi(),
                Stage::Solve => {
                    let (v, t) = self.solve();
                    tables = t;
                    v
                }
                Stage::Classify => self.classify(),
                Stage::Witness => self.witness(),
            };
            out.insert(stage.name().to_string(), value);
        }
        (out, tables)
    }
}

fn real_map(name: &str, spec: &MapSpec) -> SelfMap<RealLine> {
    let f: Box<dyn Fn(f64) -> f64 + Send + Sync> = match spec.clone() {
        MapSpec::Scale { factor } => Box::new(move |x| factor * x),
        MapSpec::Affine { factor, shift } => Box::new(move |x| factor * x + shift),
        MapSpec::Toward { factor, center } => Box::new(move |x| center[0] + factor * (x - center[0])),
        MapSpec::Identity => Box::new(|x| x),
        MapSpec::Table(_) => unreachable!("tables only act on finite spaces"),
    };
    SelfMap::new(name, RealLine, move |x: &f64| f(*x))
}

fn euclidean_map(name: &str, space: Euclidean, spec: &MapSpec) -> SelfMap<Euclidean> {
    let spec = spec.clone();
    SelfMap::new(name, space, move |x: &Vec<f64>| match &spec {
        MapSpec::Scale { factor } => x.iter().map(|v| factor * v).collect(),
        MapSpec::Affine { factor, shift } => x.iter().map(|v| factor * v + shift).collect(),
        MapSpec::Toward { factor, center } => x.iter().zip(center).map(|(v, c)| c + factor * (v - c)).collect(),
        MapSpec::Identity => x.clone(),
        MapSpec::Table(_) => unreachable!("tables only act on finite spaces"),
    })
}

fn header(exp: &Experiment) -> Map<String, Value> {
    let mut out = Map::new();
    out.insert("space".into(), json!(exp.space_desc));
    out.insert("map".into(), json!(exp.map_desc));
    out.insert("F".into(), json!(exp.f.as_ref().map(|f| f.name())));
    out.insert("a".into(), json!(exp.a));
    out.insert("k".into(), json!(exp.k));
    out.insert("eps".into(), json!(exp.eps));
    out.insert("max_iter".into(), json!(exp.max_iter));
    out.insert("mode".into(), to_value(&exp.mode));
    out
}

/// Runs `stages` (or the experiment's own list) for one experiment.
pub fn run_experiment(exp: &Experiment, stages: Option<&BTreeSet<Stage>>) -> ExperimentOutput {
    let stages = stages.unwrap_or(&exp.stages);
    info!("running {} ({} stages)", exp.name, stages.len());
    let (body, runs) = match (&exp.space, &exp.starts, &exp.domain) {
        (SpaceSpec::Real, Starts::Real(starts), &DomainSpec::Interval { lo, hi }) => Stages {
            exp,
            map: real_map(&exp.map_desc, &exp.map),
            starts: starts.clone(),
            domain: Interval { lo, hi },
            trace: match &exp.witness.trace {
                Some(TracePoints::Real(p)) => Some(p.clone()),
                _ => None,
            },
        }
        .run(stages),
        (SpaceSpec::Euclidean { dim }, Starts::Euclidean(starts), DomainSpec::Box { lo, hi }) => Stages {
            exp,
            map: euclidean_map(&exp.map_desc, Euclidean::new(*dim), &exp.map),
            starts: starts.clone(),
            domain: BoxDomain { lo: lo.clone(), hi: hi.clone() },
            trace: match &exp.witness.trace {
                Some(TracePoints::Euclidean(p)) => Some(p.clone()),
                _ => None,
            },
        }
        .run(stages),
        (SpaceSpec::Matrix { space, .. }, Starts::Index(starts), DomainSpec::Space) => {
            let table = match &exp.map {
                MapSpec::Table(t) => t.clone(),
                MapSpec::Identity => space.points(),
                _ => unreachable!("validated map on a finite space"),
            };
            Stages {
                exp,
                map: finite_self_map(space, table, &exp.map_desc).expect("validated table"),
                starts: starts.clone(),
                domain: space.clone(),
                trace: match &exp.witness.trace {
                    Some(TracePoints::Index(p)) => Some(p.clone()),
                    _ => None,
                },
            }
            .run(stages)
        }
        _ => unreachable!("validation pairs spaces with starts and domains"),
    };
    let mut summary = header(exp);
    summary.extend(body);
    ExperimentOutput { name: exp.name.clone(), summary: Value::Object(summary), runs }
}

/// Experiments run concurrently; results come back in input order.
pub fn run_all(experiments: &[Experiment], stages: Option<&BTreeSet<Stage>>) -> Vec<ExperimentOutput> {
    experiments.par_iter().map(|exp| run_experiment(exp, stages)).collect()
}
