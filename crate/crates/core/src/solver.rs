//! Picard iteration with convergence certificates.
//!
//! A run records `x_{n+1} = T x_n` and the consecutive distances
//! `ρ_n = d(x_n, x_{n+1})`. Certificates attached to a run bound the distance to
//! the fixed point: Hyers-Ulam (`d(x, z) <= Φ(d(x, Tx))`), the tail bound
//! `ρ_n <= (β / (a n))^(1/k)` for regular `F`, and a telescopic sum with a
//! geometric tail estimate.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::comparison::{phi_series, ComparisonFunction, SeriesStatus};
use crate::metric_space::{tele_sum, MetricSpace, SequenceTrace};
use crate::numerics::{ExtReal, Tolerance};
use crate::par::Execution;
use crate::wardowski::WardowskiFunction;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("Φ series at {t} is {status:?}, no Hyers-Ulam bound")]
    SeriesNotConvergent { t: f64, status: SeriesStatus },
    #[error("no rank i with [F(ρ_0) - F(ρ_n)]·ρ_n^k <= β = {beta} for all recorded n >= i")]
    RankNotFound { beta: f64 },
    #[error("ρ_{n} = {rho} exceeds the certified bound {bound}")]
    BoundViolated { n: usize, rho: f64, bound: f64 },
    #[error("regularity exponent k = {0} must lie in (0, 1)")]
    InvalidExponent(f64),
    #[error("contraction constant a = {0} must be a finite positive number")]
    InvalidConstant(f64),
    #[error("operator classification needs at least two starting points, got {0}")]
    TooFewStarts(usize),
}

type MapFn<P> = dyn Fn(&P) -> P + Send + Sync;

/// A self-map `T: X -> X` of a metric space.
pub struct SelfMap<S: MetricSpace> {
    name: String,
    space: S,
    apply: Arc<MapFn<S::Point>>,
}

impl<S: MetricSpace + Clone> Clone for SelfMap<S> {
    fn clone(&self) -> Self {
        SelfMap { name: self.name.clone(), space: self.space.clone(), apply: Arc::clone(&self.apply) }
    }
}

impl<S: MetricSpace> fmt::Debug for SelfMap<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SelfMap").field("name", &self.name).finish_non_exhaustive()
    }
}

impl<S: MetricSpace> SelfMap<S> {
    pub fn new<M>(name: impl Into<String>, space: S, apply: M) -> Self
    where
        M: Fn(&S::Point) -> S::Point + Send + Sync + 'static,
    {
        SelfMap { name: name.into(), space, apply: Arc::new(apply) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> &S {
        &self.space
    }

    pub fn apply(&self, x: &S::Point) -> S::Point {
        (self.apply)(x)
    }

    /// `d(x, Tx)`
    pub fn residual(&self, x: &S::Point) -> f64 {
        self.space.dist(x, &self.apply(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PicardConfig {
    pub eps: f64,
    pub max_iter: usize,
    /// Consecutive steps with `ρ_n < eps` required for convergence.
    pub window: usize,
    /// Consecutive increases of `ρ_n` that label a run as diverging.
    pub divergence_window: usize,
}

impl PicardConfig {
    pub fn new(eps: f64, max_iter: usize) -> Self {
        PicardConfig { eps, max_iter, window: 8, divergence_window: 32 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RunStatus<P> {
    /// `ρ_index = 0`: `x_index` is a fixed point.
    FixedPointHit { index: usize },
    /// The last `window` steps were below `eps` and their points pairwise within
    /// `2·eps`. The limit is the final iterate, not an extrapolation.
    Converged { limit: P, eps: f64 },
    BudgetExhausted,
    /// `ρ_n` increased strictly for `divergence_window` consecutive steps up to `at`.
    DivergenceSuspected { at: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailBound {
    pub a: f64,
    pub k: f64,
    pub beta: f64,
    /// First rank covered by the bound; zero for an empty range.
    pub from_rank: usize,
    /// Number of recorded `ρ_n` checked against the bound.
    pub checked: usize,
    /// Bound on `Σ_{n >= from_rank} ρ_n`.
    pub tail_sum_bound: f64,
    /// Bound on `Σ_{n >= recorded} ρ_n`, the distance from the last iterate to the limit.
    pub residual_bound: f64,
}

impl TailBound {
    /// `(β / (a n))^(1/k)` for `n >= from_rank`.
    pub fn rho_bound(&self, n: usize) -> Option<f64> {
        (n >= self.from_rank && n > 0).then(|| (self.beta / (self.a * n as f64)).powf(1.0 / self.k))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `d(x, z) <= bound = Φ(residual)` with `residual = d(x, Tx)`.
    HyersUlam { residual: f64, bound: f64 },
    TailBound(TailBound),
    /// Recorded `Σ ρ_n` plus, when the last ratios stay below `ratio < 1`, the
    /// geometric estimate of the rest.
    TeleSum { partial: f64, ratio: Option<f64>, tail_estimate: Option<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PicardRun<P> {
    pub trace: SequenceTrace<P>,
    pub status: RunStatus<P>,
    pub certificates: Vec<Certificate>,
}

impl<P: Clone> PicardRun<P> {
    pub fn attach(&mut self, certificate: Certificate) {
        self.certificates.push(certificate);
    }

    /// Fixed point for `FixedPointHit`, final iterate for `Converged`.
    pub fn limit(&self) -> Option<&P> {
        match &self.status {
            RunStatus::FixedPointHit { index } => Some(&self.trace.points()[*index]),
            RunStatus::Converged { limit, .. } => Some(limit),
            _ => None,
        }
    }

    pub fn converged(&self) -> bool {
        self.limit().is_some()
    }

    pub fn tele_certificate(&self) -> Option<&Certificate> {
        self.certificates.iter().find(|c| matches!(c, Certificate::TeleSum { .. }))
    }
}

/// Iterates `T` from `x0` until a fixed point is hit, convergence is declared,
/// divergence is suspected or `max_iter` steps are spent.
///
/// Small steps alone are not enough for convergence (the harmonic walk has
/// `ρ_n -> 0` without being Cauchy), so the whole trailing window must also
/// stay within `2·eps` pairwise. A telescopic certificate is attached.
pub fn picard_iterate<S: MetricSpace>(map: &SelfMap<S>, x0: S::Point, cfg: &PicardConfig) -> PicardRun<S::Point> {
    assert!(cfg.max_iter >= 1, "max_iter must be at least 1");
    let space = map.space();
    let mut trace = SequenceTrace::start(x0);
    let mut increases = 0usize;
    let mut status = RunStatus::BudgetExhausted;

    for n in 0..cfg.max_iter {
        let next = map.apply(trace.last());
        let r = trace.push(space, next);
        if r == 0.0 {
            status = RunStatus::FixedPointHit { index: n };
            break;
        }
        let rho = trace.rho();
        increases = if n > 0 && r > rho[n - 1] { increases + 1 } else { 0 };
        if increases >= cfg.divergence_window {
            status = RunStatus::DivergenceSuspected { at: n };
            break;
        }
        let w = cfg.window;
        if rho.len() >= w && rho[rho.len() - w..].iter().all(|&r| r < cfg.eps) {
            let tail = &trace.points()[trace.len() - w - 1..];
            let tight = tail
                .iter()
                .enumerate()
                .all(|(i, x)| tail[i + 1..].iter().all(|y| space.dist(x, y) <= 2.0 * cfg.eps));
            if tight {
                status = RunStatus::Converged { limit: trace.last().clone(), eps: cfg.eps };
                break;
            }
        }
    }

    let mut run = PicardRun { trace, status, certificates: Vec::new() };
    if let Some(cert) = telescopic_certificate(&run) {
        run.attach(cert);
    }
    run
}

/// `Φ(d(x, Tx))`, an upper bound on `d(x, z)`.
///
/// Linear `φ(t) = αt` uses the closed form `t / (1 - α)`; anything else needs a
/// converged [`phi_series`], whose partial sum plus tail estimate is returned.
/// Derived `φ` is evaluated from below, so each summed term is padded by its
/// evaluation slack.
pub fn hyers_ulam_bound(
    phi: &ComparisonFunction,
    d_x_tx: f64,
    tol: &Tolerance,
    n_cap: u64,
) -> Result<f64, SolverError> {
    if d_x_tx == 0.0 {
        return Ok(0.0);
    }
    if let Some(bound) = phi.closed_form_series(d_x_tx) {
        return Ok(bound);
    }
    let series = phi_series(phi, d_x_tx, tol, n_cap);
    match series.status {
        SeriesStatus::Converged => Ok(series.upper_estimate() + phi.evaluation_slack() * series.truncated_at as f64),
        status => Err(SolverError::SeriesNotConvergent { t: d_x_tx, status }),
    }
}

/// Hyers-Ulam certificate for the starting point of `run`.
pub fn hyers_ulam_certificate<P>(
    run: &PicardRun<P>,
    phi: &ComparisonFunction,
    tol: &Tolerance,
    n_cap: u64,
) -> Result<Certificate, SolverError> {
    let residual = run.trace.rho().first().copied().unwrap_or(0.0);
    let bound = hyers_ulam_bound(phi, residual, tol, n_cap)?;
    Ok(Certificate::HyersUlam { residual, bound })
}

/// `Σ_{n >= start} n^(-p)` bounded by `start^(-p) + start^(1-p) / (p - 1)` for `p > 1`.
fn power_tail(start: usize, p: f64) -> f64 {
    let s = start.max(1) as f64;
    s.powf(-p) + s.powf(1.0 - p) / (p - 1.0)
}

/// A-priori tail bound for runs of an `(a, F)`-contraction with `k`-regular `F`.
///
/// Summing `a <= F(ρ_n) - F(ρ_{n+1})` gives `n a ρ_n^k <= [F(ρ_0) - F(ρ_n)] ρ_n^k`.
/// The least rank `i` from which the right side stays below `β` yields
/// `ρ_n <= (β / (a n))^(1/k)` for `n >= i`, checked here on every recorded step,
/// and a summable tail. Without an explicit `β`, `1.05 ×` the largest value over
/// the first half of the run is used.
pub fn tail_bound_regular<P>(
    run: &PicardRun<P>,
    f: &WardowskiFunction,
    a: f64,
    k: f64,
    beta: Option<f64>,
) -> Result<Certificate, SolverError> {
    if !(k > 0.0 && k < 1.0) {
        return Err(SolverError::InvalidExponent(k));
    }
    if !(a.is_finite() && a > 0.0) {
        return Err(SolverError::InvalidConstant(a));
    }
    let rho = run.trace.rho();
    let positive = rho.iter().position(|&r| r == 0.0).unwrap_or(rho.len());
    let rho = &rho[..positive];
    if rho.len() <= 1 {
        return Ok(Certificate::TailBound(TailBound {
            a,
            k,
            beta: beta.unwrap_or(0.0),
            from_rank: 0,
            checked: 0,
            tail_sum_bound: rho.iter().sum(),
            residual_bound: 0.0,
        }));
    }

    let f0 = f.eval(rho[0]);
    let scaled: Vec<f64> = rho
        .iter()
        .map(|&r| match (f0, f.eval(r)) {
            (ExtReal::Finite(x), ExtReal::Finite(y)) => (x - y) * r.powf(k),
            _ => f64::INFINITY,
        })
        .collect();

    let burn_in = (rho.len() / 2).max(2);
    let beta = beta.unwrap_or_else(|| 1.05 * scaled[1..burn_in].iter().copied().fold(0.0, f64::max));
    let from_rank = match scaled.iter().rposition(|&q| !(q <= beta)) {
        None => 1,
        Some(i) if i + 1 < rho.len() => (i + 1).max(1),
        Some(_) => return Err(SolverError::RankNotFound { beta }),
    };

    let cert = TailBound {
        a,
        k,
        beta,
        from_rank,
        checked: rho.len() - from_rank,
        tail_sum_bound: (beta / a).powf(1.0 / k) * power_tail(from_rank, 1.0 / k),
        residual_bound: (beta / a).powf(1.0 / k) * power_tail(rho.len(), 1.0 / k),
    };
    for (n, &r) in rho.iter().enumerate().skip(from_rank) {
        let bound = cert.rho_bound(n).expect("n >= from_rank >= 1");
        if r > bound {
            return Err(SolverError::BoundViolated { n, rho: r, bound });
        }
    }
    Ok(Certificate::TailBound(cert))
}

const RATIO_WINDOW: usize = 8;

/// Telescopic certificate from the consecutive distances of a run.
///
/// The geometric tail estimate `ρ_last · r / (1 - r)` is only offered when the
/// last ratios `ρ_{n+1} / ρ_n` stay below `r < 1` and are not creeping upward
/// step after step (sublinear decay such as `ρ_n = 1/(n+1)`).
pub fn tele_certificate_from_rho(rho: &[f64]) -> Option<Certificate> {
    if rho.is_empty() {
        return None;
    }
    let partial: f64 = rho.iter().sum();
    if rho.last() == Some(&0.0) {
        return Some(Certificate::TeleSum { partial, ratio: None, tail_estimate: Some(0.0) });
    }
    let (ratio, tail_estimate) = if rho.len() > RATIO_WINDOW {
        let ratios: Vec<f64> = rho[rho.len() - RATIO_WINDOW - 1..].windows(2).map(|w| w[1] / w[0]).collect();
        let creeping = ratios.windows(2).all(|w| w[1] > w[0]);
        let r = ratios.iter().copied().fold(0.0, f64::max);
        if !creeping && r < 1.0 {
            (Some(r), Some(rho[rho.len() - 1] * r / (1.0 - r)))
        } else {
            (None, None)
        }
    } else {
        (None, None)
    };
    Some(Certificate::TeleSum { partial, ratio, tail_estimate })
}

pub fn telescopic_certificate<P>(run: &PicardRun<P>) -> Option<Certificate> {
    let cert = tele_certificate_from_rho(run.trace.rho())?;
    debug_assert!(matches!(cert, Certificate::TeleSum { partial, .. } if partial == tele_sum(&run.trace)));
    Some(cert)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PicardLevel {
    NoEvidence,
    Picard,
    StrongPicard,
    GloballyStrongPicard,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorVerdict<P> {
    pub level: PicardLevel,
    /// Every run carries a telescopic certificate with a finite tail estimate.
    pub tele: bool,
    pub common_limit: Option<P>,
    pub runs: Vec<PicardRun<P>>,
}

impl<P> OperatorVerdict<P> {
    /// E.g. `globally-strong-tele-picard-evidence`. Finite runs only ever give evidence.
    pub fn label(&self) -> String {
        let tele = if self.tele && self.level != PicardLevel::NoEvidence { "tele-" } else { "" };
        match self.level {
            PicardLevel::NoEvidence => "no-picard-evidence".to_string(),
            PicardLevel::Picard => format!("{tele}picard-evidence"),
            PicardLevel::StrongPicard => format!("strong-{tele}picard-evidence"),
            PicardLevel::GloballyStrongPicard => format!("globally-strong-{tele}picard-evidence"),
        }
    }
}

/// Desk-scale Picard classification from several starting points.
///
/// Runs are independent and execute concurrently.
pub fn classify_operator<S: MetricSpace>(
    map: &SelfMap<S>,
    starts: &[S::Point],
    cfg: &PicardConfig,
) -> Result<OperatorVerdict<S::Point>, SolverError> {
    classify_operator_with(map, starts, cfg, Execution::default())
}

pub fn classify_operator_with<S: MetricSpace>(
    map: &SelfMap<S>,
    starts: &[S::Point],
    cfg: &PicardConfig,
    exec: Execution,
) -> Result<OperatorVerdict<S::Point>, SolverError> {
    if starts.len() < 2 {
        return Err(SolverError::TooFewStarts(starts.len()));
    }
    let runs = exec.map(starts, |x0| picard_iterate(map, x0.clone(), cfg));
    let space = map.space();

    let limits: Option<Vec<&S::Point>> = runs.iter().map(PicardRun::limit).collect();
    let (level, common_limit) = match limits {
        None => (PicardLevel::NoEvidence, None),
        Some(limits) => {
            let strong = limits.iter().all(|z| map.residual(z) <= cfg.eps);
            let agree = limits
                .iter()
                .enumerate()
                .all(|(i, x)| limits[i + 1..].iter().all(|y| space.dist(x, y) <= cfg.eps));
            match (strong, agree) {
                (true, true) => (PicardLevel::GloballyStrongPicard, Some(limits[0].clone())),
                (true, false) => (PicardLevel::StrongPicard, None),
                _ => (PicardLevel::Picard, None),
            }
        }
    };
    let tele = runs.iter().all(|run| {
        matches!(run.tele_certificate(), Some(Certificate::TeleSum { tail_estimate: Some(t), .. }) if t.is_finite())
    });
    Ok(OperatorVerdict { level, tele, common_limit, runs })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LadderStep {
    pub n: usize,
    pub rho: f64,
    pub f_rho: ExtReal,
    /// `F(ρ_{n-1}) - F(ρ_n) - a`, absent for `n = 0` or non-finite values.
    pub step_margin: Option<f64>,
    /// Whether `F(ρ_n) <= F(ρ_0) - n·a` holds as computed.
    pub cumulative_holds: bool,
}

/// The per-step and cumulative descent of `F(ρ_n)` along a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DescentLadder {
    pub a: f64,
    pub steps: Vec<LadderStep>,
}

impl DescentLadder {
    /// `F(ρ_n) <= F(ρ_0) - n·a` for every recorded `n`, no tolerance.
    pub fn cumulative_holds(&self) -> bool {
        self.steps.iter().all(|s| s.cumulative_holds)
    }

    /// `a <= F(ρ_{n-1}) - F(ρ_n)` up to `slack` for every recorded step.
    pub fn steps_hold(&self, slack: f64) -> bool {
        self.steps.iter().all(|s| s.step_margin.is_none_or(|m| m >= -slack))
    }
}

pub fn descent_ladder<P>(run: &PicardRun<P>, f: &WardowskiFunction, a: f64) -> DescentLadder {
    let rho = run.trace.rho();
    let values: Vec<ExtReal> = rho.iter().map(|&r| f.eval(r)).collect();
    let f0 = values.first().copied().unwrap_or(ExtReal::NegInf);
    let steps = rho
        .iter()
        .enumerate()
        .map(|(n, &r)| {
            let f_rho = values[n];
            let step_margin = (n > 0).then(|| values[n - 1].checked_sub(f_rho).map(|d| d - a)).flatten();
            LadderStep { n, rho: r, f_rho, step_margin, cumulative_holds: f_rho <= f0 - n as f64 * a }
        })
        .collect();
    DescentLadder { a, steps }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric_space::{FiniteMetricSpace, RealLine};
    use crate::wardowski::{make_log, make_neg_power};
    use std::f64::consts::LN_2;

    fn halving() -> SelfMap<RealLine> {
        SelfMap::new("x/2", RealLine, |x: &f64| x / 2.0)
    }

    #[test]
    fn halving_map_converges_with_exact_steps() {
        let run = picard_iterate(&halving(), 1.0, &PicardConfig::new(1e-9, 1000));
        match &run.status {
            RunStatus::Converged { limit, .. } => assert!(limit.abs() <= 1e-9),
            other => panic!("{other:?}"),
        }
        for (n, &r) in run.trace.rho().iter().enumerate() {
            assert_eq!(r, 2f64.powi(-(n as i32 + 1)));
        }
        // first sub-eps step is rho_29 = 2^-30; eight of them end at n = 36
        assert_eq!(run.trace.rho().len(), 37);
    }

    #[test]
    fn start_at_fixed_point() {
        let run = picard_iterate(&halving(), 0.0, &PicardConfig::new(1e-9, 10));
        assert_eq!(run.status, RunStatus::FixedPointHit { index: 0 });
        assert_eq!(run.limit(), Some(&0.0));
    }

    #[test]
    fn translation_has_no_limit() {
        let shift = SelfMap::new("x+1", RealLine, |x: &f64| x + 1.0);
        let run = picard_iterate(&shift, 0.0, &PicardConfig::new(1e-9, 100));
        assert_eq!(run.status, RunStatus::BudgetExhausted);
        assert!(run.trace.rho().iter().all(|&r| r == 1.0));

        let doubling = SelfMap::new("2x", RealLine, |x: &f64| 2.0 * x);
        let run = picard_iterate(&doubling, 1.0, &PicardConfig::new(1e-9, 100));
        assert_eq!(run.status, RunStatus::DivergenceSuspected { at: 32 });
    }

    #[test]
    fn hyers_ulam_examples() {
        let tol = Tolerance::default();
        let half = ComparisonFunction::linear(0.5).unwrap();
        assert_eq!(hyers_ulam_bound(&half, 0.5, &tol, 1000).unwrap(), 1.0);
        assert_eq!(hyers_ulam_bound(&half, 0.0, &tol, 1000).unwrap(), 0.0);
        let b = hyers_ulam_bound(&ComparisonFunction::linear(0.9).unwrap(), 0.1, &tol, 1000).unwrap();
        assert!((b - 1.0).abs() <= tol.abs_tol);

        // numerical route on a non-linear phi with a geometric tail
        let quad = ComparisonFunction::from_fn("t/(2+t)", |t| t / (2.0 + t));
        let b = hyers_ulam_bound(&quad, 0.5, &tol, 10_000).unwrap();
        assert!(b > 0.5 && b < 1.0);

        let harmonic = ComparisonFunction::from_fn("t/(1+t)", |t| t / (1.0 + t));
        assert!(matches!(
            hyers_ulam_bound(&harmonic, 1.0, &tol, 1000),
            Err(SolverError::SeriesNotConvergent { .. })
        ));
    }

    #[test]
    fn derived_hyers_ulam_covers_true_distance() {
        let tol = Tolerance::default();
        let derived = ComparisonFunction::derived(&make_log(), LN_2, tol).unwrap();
        for x in [0.3, 1.0, 7.0] {
            let bound = hyers_ulam_bound(&derived, x / 2.0, &tol, 10_000).unwrap();
            assert!(bound >= x && bound <= x + 1e-8, "{x}: {bound}");
        }
    }

    #[test]
    fn telescopic_examples() {
        let run = picard_iterate(&halving(), 1.0, &PicardConfig::new(1e-9, 1000));
        match run.tele_certificate() {
            Some(&Certificate::TeleSum { partial, ratio: Some(r), tail_estimate: Some(tail) }) => {
                assert_eq!(r, 0.5);
                assert_eq!(partial + tail, 1.0);
            }
            other => panic!("{other:?}"),
        }

        let fixed = picard_iterate(&halving(), 0.0, &PicardConfig::new(1e-9, 10));
        assert!(matches!(fixed.tele_certificate(), Some(Certificate::TeleSum { tail_estimate: Some(t), .. }) if *t == 0.0));

        let harmonic: Vec<f64> = (0..200).map(|n| 1.0 / (n + 1) as f64).collect();
        assert!(matches!(
            tele_certificate_from_rho(&harmonic),
            Some(Certificate::TeleSum { tail_estimate: None, .. })
        ));
    }

    #[test]
    fn tail_bound_for_regular_neg_power() {
        // x/2 on [0, 1] is (a, F)-contractive for F = -t^(-1/2) whenever a <= sqrt(2) - 1
        let f = make_neg_power(0.5).unwrap();
        let a = 0.4;
        let run = picard_iterate(&halving(), 1.0, &PicardConfig::new(1e-12, 200));
        let cert = tail_bound_regular(&run, &f, a, 0.75, None).unwrap();
        let Certificate::TailBound(tb) = cert else { panic!() };
        assert!(tb.from_rank >= 1);
        for (n, &r) in run.trace.rho().iter().enumerate().skip(tb.from_rank) {
            assert!(r <= tb.rho_bound(n).unwrap());
        }
        let tail: f64 = run.trace.rho()[tb.from_rank..].iter().sum();
        assert!(tail <= tb.tail_sum_bound);
    }

    #[test]
    fn tail_bound_trivial_and_withheld() {
        let f = make_neg_power(0.5).unwrap();
        let fixed = picard_iterate(&halving(), 0.0, &PicardConfig::new(1e-9, 10));
        let Certificate::TailBound(tb) = tail_bound_regular(&fixed, &f, 0.4, 0.75, None).unwrap() else { panic!() };
        assert_eq!((tb.from_rank, tb.checked), (0, 0));

        let run = picard_iterate(&halving(), 1.0, &PicardConfig::new(1e-9, 200));
        let rho = run.trace.rho();
        let f0 = f.eval(rho[0]).to_f64();
        let min_q = rho[1..]
            .iter()
            .map(|&r| (f0 - f.eval(r).to_f64()) * r.powf(0.75))
            .fold(f64::INFINITY, f64::min);
        assert_eq!(
            tail_bound_regular(&run, &f, 0.4, 0.75, Some(min_q / 2.0)),
            Err(SolverError::RankNotFound { beta: min_q / 2.0 })
        );
        assert!(tail_bound_regular(&run, &f, 0.4, 1.5, None).is_err());
    }

    #[test]
    fn classification_examples() {
        let cfg = PicardConfig::new(1e-9, 1000);
        let v = classify_operator(&halving(), &[-1.0, 0.0, 1.0, 10.0], &cfg).unwrap();
        assert_eq!(v.level, PicardLevel::GloballyStrongPicard);
        assert!(v.tele);
        assert_eq!(v.label(), "globally-strong-tele-picard-evidence");
        assert!(v.common_limit.unwrap().abs() <= 1e-9);

        let two = FiniteMetricSpace::new(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let id = SelfMap::new("id", two, |i: &usize| *i);
        let v = classify_operator(&id, &[0, 1], &cfg).unwrap();
        assert_eq!(v.level, PicardLevel::StrongPicard);

        let shift = SelfMap::new("x+1", RealLine, |x: &f64| x + 1.0);
        let v = classify_operator(&shift, &[0.0, 1.0], &PicardConfig::new(1e-9, 100)).unwrap();
        assert_eq!(v.level, PicardLevel::NoEvidence);
        assert_eq!(v.label(), "no-picard-evidence");

        assert_eq!(classify_operator(&halving(), &[1.0], &cfg).unwrap_err(), SolverError::TooFewStarts(1));
    }

    #[test]
    fn descent_ladder_on_banach_run() {
        let run = picard_iterate(&halving(), 1.0, &PicardConfig::new(1e-9, 1000));
        let ladder = descent_ladder(&run, &make_log(), LN_2);
        assert!(ladder.cumulative_holds());
        assert!(ladder.steps_hold(1e-12));
        assert!(!descent_ladder(&run, &make_log(), 0.8).cumulative_holds());
    }
}
