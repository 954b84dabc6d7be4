//! Contraction checks over point pairs, the semi-Cauchy witness extractor and a
//! brute-force fixed-point oracle for finite spaces.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::comparison::ComparisonFunction;
use crate::metric_space::{FiniteMetricSpace, MetricSpace, SequenceTrace};
use crate::numerics::ExtReal;
use crate::par::Execution;
use crate::solver::SelfMap;
use crate::wardowski::WardowskiFunction;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifierError {
    #[error("exhaustive mode needs a finite domain")]
    NotEnumerable,
    #[error("A({0}) is empty on the recorded prefix")]
    PrefixTooShort(usize),
    #[error("eta = {0} lies in the declared discontinuity set")]
    EtaInDelta(f64),
    #[error("eta must be a finite positive number, got {0}")]
    InvalidEta(f64),
    #[error("map table has {got} entries for a space of {expected} points")]
    TableLength { expected: usize, got: usize },
    #[error("map sends {from} to {to}, outside 0..{n}")]
    TableOutOfRange { from: usize, to: usize, n: usize },
}

/// Where pairs are drawn from.
pub trait Domain<P>: Sync {
    /// All points, for domains that can be enumerated.
    fn enumerate(&self) -> Option<Vec<P>>;

    fn sample(&self, rng: &mut ChaCha8Rng) -> P;
}

/// An explicit list of points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointList<P>(pub Vec<P>);

impl<P: Clone + Sync> Domain<P> for PointList<P> {
    fn enumerate(&self) -> Option<Vec<P>> {
        Some(self.0.clone())
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> P {
        self.0[rng.gen_range(0..self.0.len())].clone()
    }
}

/// `[lo, hi]` on the real line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Domain<f64> for Interval {
    fn enumerate(&self) -> Option<Vec<f64>> {
        None
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        rng.gen_range(self.lo..=self.hi)
    }
}

/// Axis-aligned box in `R^d`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxDomain {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Domain<Vec<f64>> for BoxDomain {
    fn enumerate(&self) -> Option<Vec<Vec<f64>>> {
        None
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(&l, &h)| rng.gen_range(l..=h)).collect()
    }
}

impl Domain<usize> for FiniteMetricSpace {
    fn enumerate(&self) -> Option<Vec<usize>> {
        Some(self.points())
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> usize {
        rng.gen_range(0..self.len())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum CheckMode {
    /// All ordered pairs of an enumerable domain.
    Exhaustive,
    /// `count` pairs from a ChaCha8 stream seeded with `seed`.
    Sampled { count: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum Condition {
    PhiContractive,
    AfContractive { a: f64 },
    Strict,
    Nonexpansive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict<P> {
    Holds,
    /// First failing pair in scan order, with both sides of the inequality.
    Fails { x: P, y: P, lhs: ExtReal, rhs: ExtReal },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractionReport<P> {
    pub condition: Condition,
    pub mode: CheckMode,
    pub pairs_checked: usize,
    pub verdict: Verdict<P>,
}

impl<P> ContractionReport<P> {
    pub fn holds(&self) -> bool {
        matches!(self.verdict, Verdict::Holds)
    }
}

/// Floating-point slack for comparing sums of three magnitudes.
fn rounding(magnitudes: &[f64]) -> f64 {
    4.0 * f64::EPSILON * magnitudes.iter().map(|m| m.abs()).sum::<f64>()
}

/// Pairs in a fixed order: lexicographic for exhaustive mode, draw order when sampled.
fn pairs<P, D: Domain<P>>(domain: &D, mode: CheckMode) -> Result<Vec<(P, P)>, VerifierError>
where
    P: Clone,
{
    match mode {
        CheckMode::Exhaustive => {
            let pts = domain.enumerate().ok_or(VerifierError::NotEnumerable)?;
            Ok(pts.iter().flat_map(|x| pts.iter().map(move |y| (x.clone(), y.clone()))).collect())
        }
        CheckMode::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok((0..count).map(|_| (domain.sample(&mut rng), domain.sample(&mut rng))).collect())
        }
    }
}

/// Scans `pairs`; `test` returns the two sides of a violated inequality.
fn scan<S, D, C>(
    map: &SelfMap<S>,
    domain: &D,
    mode: CheckMode,
    condition: Condition,
    exec: Execution,
    test: C,
) -> Result<ContractionReport<S::Point>, VerifierError>
where
    S: MetricSpace,
    D: Domain<S::Point>,
    C: Fn(&S::Point, &S::Point, f64, f64) -> Option<(ExtReal, ExtReal)> + Sync + Send,
{
    let pairs = pairs(domain, mode)?;
    let space = map.space();
    let failure = exec.find_first(&pairs, |(x, y)| {
        let d = space.dist(x, y);
        let dt = space.dist(&map.apply(x), &map.apply(y));
        test(x, y, d, dt).map(|(lhs, rhs)| Verdict::Fails { x: x.clone(), y: y.clone(), lhs, rhs })
    });
    Ok(ContractionReport { condition, mode, pairs_checked: pairs.len(), verdict: failure.unwrap_or(Verdict::Holds) })
}

/// `a + F(d(Tx, Ty)) <= F(d(x, y))` for every tested pair with `x != y`.
pub fn check_af_contractive<S: MetricSpace, D: Domain<S::Point>>(
    map: &SelfMap<S>,
    f: &WardowskiFunction,
    a: f64,
    domain: &D,
    mode: CheckMode,
) -> Result<ContractionReport<S::Point>, VerifierError> {
    check_af_contractive_with(map, f, a, domain, mode, Execution::default())
}

pub fn check_af_contractive_with<S: MetricSpace, D: Domain<S::Point>>(
    map: &SelfMap<S>,
    f: &WardowskiFunction,
    a: f64,
    domain: &D,
    mode: CheckMode,
    exec: Execution,
) -> Result<ContractionReport<S::Point>, VerifierError> {
    assert!(a > 0.0, "a must be positive");
    scan(map, domain, mode, Condition::AfContractive { a }, exec, |x, y, d, dt| {
        if x == y {
            return None;
        }
        let lhs = f.eval(dt) + a;
        let rhs = f.eval(d);
        let ok = match (lhs, rhs) {
            (ExtReal::Finite(l), ExtReal::Finite(r)) => l <= r + rounding(&[a, l - a, r]),
            _ => lhs <= rhs,
        };
        (!ok).then_some((lhs, rhs))
    })
}

/// `d(Tx, Ty) <= φ(d(x, y))` for every tested pair with `x != y`.
pub fn check_phi_contractive<S: MetricSpace, D: Domain<S::Point>>(
    map: &SelfMap<S>,
    phi: &ComparisonFunction,
    domain: &D,
    mode: CheckMode,
) -> Result<ContractionReport<S::Point>, VerifierError> {
    check_phi_contractive_with(map, phi, domain, mode, Execution::default())
}

pub fn check_phi_contractive_with<S: MetricSpace, D: Domain<S::Point>>(
    map: &SelfMap<S>,
    phi: &ComparisonFunction,
    domain: &D,
    mode: CheckMode,
    exec: Execution,
) -> Result<ContractionReport<S::Point>, VerifierError> {
    let slack = phi.evaluation_slack();
    scan(map, domain, mode, Condition::PhiContractive, exec, |x, y, d, dt| {
        if x == y {
            return None;
        }
        let bound = phi.eval(d);
        let ok = dt <= bound + slack + rounding(&[dt, bound]);
        (!ok).then_some((ExtReal::from(dt), ExtReal::new(bound).unwrap_or(ExtReal::NegInf)))
    })
}

/// Strict and nonexpansive reports, in that order.
pub type ReportPair<P> = (ContractionReport<P>, ContractionReport<P>);

/// Strict contraction over pairs `x != y` and nonexpansiveness over all pairs.
pub fn check_strict_and_nonexpansive<S: MetricSpace, D: Domain<S::Point>>(
    map: &SelfMap<S>,
    domain: &D,
    mode: CheckMode,
) -> Result<ReportPair<S::Point>, VerifierError> {
    check_strict_and_nonexpansive_with(map, domain, mode, Execution::default())
}

pub fn check_strict_and_nonexpansive_with<S: MetricSpace, D: Domain<S::Point>>(
    map: &SelfMap<S>,
    domain: &D,
    mode: CheckMode,
    exec: Execution,
) -> Result<ReportPair<S::Point>, VerifierError> {
    let strict = scan(map, domain, mode, Condition::Strict, exec, |x, y, d, dt| {
        (x != y && !(dt < d)).then_some((ExtReal::from(dt), ExtReal::from(d)))
    })?;
    let nonexp = scan(map, domain, mode, Condition::Nonexpansive, exec, |_, _, d, dt| {
        (!(dt <= d)).then_some((ExtReal::from(dt), ExtReal::from(d)))
    })?;
    Ok((strict, nonexp))
}

/// Signed mean of `d(x_{m(j)+p}, x_{n(j)+q}) - eta` over the last quarter of `j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrendMetric {
    pub p: usize,
    pub q: usize,
    pub mean_deviation: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessChecks {
    /// `d(x_{m(j)}, x_{n(j)}) > eta` for every extracted `j`.
    pub overshoot: bool,
    /// `n(j) - m(j) >= 2` and `d(x_{m(j)}, x_{n(j)-1}) <= eta` for every `j >= j_eta`.
    pub minimality: bool,
    /// `j <= m(j) <= m(j+1)`.
    pub monotone_ranks: bool,
    /// Entry `(p, q)` at index `2p + q`; `(0, 0)` is the overshoot trend.
    pub trends: Vec<TrendMetric>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessExtraction {
    pub eta: f64,
    /// Least rank from which every recorded `ρ_i < eta`; `None` if the last step is not.
    pub j_eta: Option<usize>,
    pub m_seq: Vec<usize>,
    pub n_seq: Vec<usize>,
    pub checks: WitnessChecks,
}

/// Extracts `m(j) = min{m >= j : some n > m has d(x_m, x_n) > eta}` and
/// `n(j) = min{n > m(j) : d(x_{m(j)}, x_n) > eta}` from a recorded prefix.
///
/// With `j_count = Some(J)` every `j < J` must be extractable; with `None`
/// extraction runs until the prefix runs out, and at least `j = 0` must succeed.
pub fn extract_witness<S: MetricSpace>(
    space: &S,
    trace: &SequenceTrace<S::Point>,
    eta: f64,
    delta: &[f64],
    j_count: Option<usize>,
) -> Result<WitnessExtraction, VerifierError> {
    extract_witness_with(space, trace, eta, delta, j_count, Execution::default())
}

pub fn extract_witness_with<S: MetricSpace>(
    space: &S,
    trace: &SequenceTrace<S::Point>,
    eta: f64,
    delta: &[f64],
    j_count: Option<usize>,
    exec: Execution,
) -> Result<WitnessExtraction, VerifierError> {
    if !(eta.is_finite() && eta > 0.0) {
        return Err(VerifierError::InvalidEta(eta));
    }
    if delta.contains(&eta) {
        return Err(VerifierError::EtaInDelta(eta));
    }
    let points = trace.points();
    let len = points.len();
    let first_n: Vec<Option<usize>> =
        exec.map_range(0..len, |m| (m + 1..len).find(|&n| space.dist(&points[m], &points[n]) > eta));

    // next_m[j] = least m >= j with first_n[m] defined
    let mut next_m = vec![None; len + 1];
    for m in (0..len).rev() {
        next_m[m] = if first_n[m].is_some() { Some(m) } else { next_m[m + 1] };
    }

    let mut m_seq = Vec::new();
    let mut n_seq = Vec::new();
    for j in 0.. {
        if j_count.is_some_and(|cap| j >= cap) {
            break;
        }
        match next_m.get(j).copied().flatten() {
            Some(m) => {
                m_seq.push(m);
                n_seq.push(first_n[m].expect("next_m only points at defined ranks"));
            }
            None if j_count.is_some() || j == 0 => return Err(VerifierError::PrefixTooShort(j)),
            None => break,
        }
    }

    let rho = trace.rho();
    let j_eta = match rho.iter().rposition(|&r| !(r < eta)) {
        None => Some(0),
        Some(i) if i + 1 < rho.len() => Some(i + 1),
        Some(_) => None,
    };

    let d = |i: usize, k: usize| space.dist(&points[i], &points[k]);
    let overshoot = m_seq.iter().zip(&n_seq).all(|(&m, &n)| d(m, n) > eta);
    let minimality = match j_eta {
        Some(je) => m_seq
            .iter()
            .zip(&n_seq)
            .skip(je)
            .all(|(&m, &n)| n - m >= 2 && d(m, n - 1) <= eta),
        None => false,
    };
    let monotone_ranks =
        m_seq.iter().enumerate().all(|(j, &m)| m >= j) && m_seq.windows(2).all(|w| w[1] >= w[0]);

    let quarter_start = m_seq.len() - m_seq.len().div_ceil(4);
    let trends = [(0, 0), (0, 1), (1, 0), (1, 1)]
        .into_iter()
        .map(|(p, q)| {
            let devs: Vec<f64> = m_seq[quarter_start..]
                .iter()
                .zip(&n_seq[quarter_start..])
                .filter(|&(_, &n)| n + q < len)
                .map(|(&m, &n)| d(m + p, n + q) - eta)
                .collect();
            let mean_deviation =
                if devs.is_empty() { f64::NAN } else { devs.iter().sum::<f64>() / devs.len() as f64 };
            TrendMetric { p, q, mean_deviation, samples: devs.len() }
        })
        .collect();

    Ok(WitnessExtraction {
        eta,
        j_eta,
        m_seq,
        n_seq,
        checks: WitnessChecks { overshoot, minimality, monotone_ranks, trends },
    })
}

/// Midpoint of the widest gap of `(lo, hi)` avoiding `delta`.
pub fn propose_eta(delta: &[f64], lo: f64, hi: f64) -> Option<f64> {
    if !(lo < hi) {
        return None;
    }
    let mut cuts: Vec<f64> = delta.iter().copied().filter(|&x| x > lo && x < hi).collect();
    cuts.push(lo);
    cuts.push(hi);
    cuts.sort_by(f64::total_cmp);
    cuts.windows(2)
        .max_by(|u, v| (u[1] - u[0]).total_cmp(&(v[1] - v[0])))
        .map(|w| 0.5 * (w[0] + w[1]))
        .filter(|eta| !delta.contains(eta))
}

/// A self-map of a finite space given by its table `i -> table[i]`.
pub fn finite_self_map(
    space: &FiniteMetricSpace,
    table: Vec<usize>,
    name: impl Into<String>,
) -> Result<SelfMap<FiniteMetricSpace>, VerifierError> {
    validate_table(space, &table)?;
    Ok(SelfMap::new(name, space.clone(), move |i: &usize| table[*i]))
}

fn validate_table(space: &FiniteMetricSpace, table: &[usize]) -> Result<(), VerifierError> {
    let n = space.len();
    if table.len() != n {
        return Err(VerifierError::TableLength { expected: n, got: table.len() });
    }
    match table.iter().enumerate().find(|&(_, &to)| to >= n) {
        Some((from, &to)) => Err(VerifierError::TableOutOfRange { from, to, n }),
        None => Ok(()),
    }
}

/// `{i : T(i) = i}` by direct inspection.
pub fn brute_force_fixed_points(space: &FiniteMetricSpace, table: &[usize]) -> Result<BTreeSet<usize>, VerifierError> {
    validate_table(space, table)?;
    Ok(table.iter().enumerate().filter(|&(i, &t)| i == t).map(|(i, _)| i).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric_space::RealLine;
    use crate::numerics::Tolerance;
    use crate::wardowski::make_log;
    use std::f64::consts::LN_2;

    const SAMPLED: CheckMode = CheckMode::Sampled { count: 2000, seed: 7 };
    const UNIT: Interval = Interval { lo: -1.0, hi: 1.0 };

    fn halving_map() -> SelfMap<RealLine> {
        SelfMap::new("x/2", RealLine, |x: &f64| x / 2.0)
    }

    fn two_points() -> FiniteMetricSpace {
        FiniteMetricSpace::new(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
    }

    #[test]
    fn af_examples() {
        let map = halving_map();
        let r = check_af_contractive(&map, &make_log(), LN_2, &UNIT, SAMPLED).unwrap();
        assert!(r.holds());
        assert_eq!(r.pairs_checked, 2000);
        let r = check_af_contractive(&map, &make_log(), 3f64.ln(), &UNIT, SAMPLED).unwrap();
        assert!(!r.holds());

        let space = two_points();
        let id = finite_self_map(&space, vec![0, 1], "id").unwrap();
        let r = check_af_contractive(&id, &make_log(), 0.01, &space, CheckMode::Exhaustive).unwrap();
        assert!(matches!(r.verdict, Verdict::Fails { x: 0, y: 1, .. }));
    }

    #[test]
    fn phi_examples() {
        let map = halving_map();
        let half = ComparisonFunction::linear(0.5).unwrap();
        assert!(check_phi_contractive(&map, &half, &UNIT, SAMPLED).unwrap().holds());
        let third = ComparisonFunction::linear(1.0 / 3.0).unwrap();
        assert!(!check_phi_contractive(&map, &third, &UNIT, SAMPLED).unwrap().holds());
        let derived = ComparisonFunction::derived(&make_log(), LN_2, Tolerance::default()).unwrap();
        assert!(check_phi_contractive(&map, &derived, &UNIT, SAMPLED).unwrap().holds());
    }

    #[test]
    fn strict_and_nonexpansive_examples() {
        let (s, n) = check_strict_and_nonexpansive(&halving_map(), &UNIT, SAMPLED).unwrap();
        assert!(s.holds() && n.holds());
        let id = SelfMap::new("id", RealLine, |x: &f64| *x);
        let (s, n) = check_strict_and_nonexpansive(&id, &UNIT, SAMPLED).unwrap();
        assert!(!s.holds() && n.holds());
        let double = SelfMap::new("2x", RealLine, |x: &f64| 2.0 * x);
        let (s, n) = check_strict_and_nonexpansive(&double, &UNIT, SAMPLED).unwrap();
        assert!(!s.holds() && !n.holds());
        assert_eq!(
            check_strict_and_nonexpansive(&double, &UNIT, CheckMode::Exhaustive).unwrap_err(),
            VerifierError::NotEnumerable
        );
    }

    #[test]
    fn witness_is_the_same_in_both_modes() {
        let double = SelfMap::new("2x", RealLine, |x: &f64| 2.0 * x);
        let seq = check_af_contractive_with(&double, &make_log(), 0.1, &UNIT, SAMPLED, Execution::Sequential).unwrap();
        let par = check_af_contractive_with(&double, &make_log(), 0.1, &UNIT, SAMPLED, Execution::Parallel).unwrap();
        assert_eq!(seq, par);
    }

    fn harmonic_trace(len: usize) -> SequenceTrace<f64> {
        let mut x = 0.0;
        let pts = (0..len)
            .map(|n| {
                if n > 0 {
                    x += 1.0 / n as f64;
                }
                x
            })
            .collect();
        SequenceTrace::from_points(&RealLine, pts)
    }

    #[test]
    fn harmonic_extraction() {
        let w = extract_witness(&RealLine, &harmonic_trace(200), 1.0, &[], None).unwrap();
        assert_eq!((w.m_seq[0], w.n_seq[0]), (0, 2));
        assert_eq!((w.m_seq[1], w.n_seq[1]), (1, 4));
        assert_eq!(w.j_eta, Some(1));
        assert!(w.checks.overshoot && w.checks.minimality && w.checks.monotone_ranks);
    }

    #[test]
    fn extraction_errors() {
        let geo: Vec<f64> = (0..50).map(|i| 0.5f64.powi(i)).collect();
        let trace = SequenceTrace::from_points(&RealLine, geo);
        assert_eq!(extract_witness(&RealLine, &trace, 1.0, &[], None), Err(VerifierError::PrefixTooShort(0)));
        assert_eq!(
            extract_witness(&RealLine, &harmonic_trace(20), 1.0, &[1.0], None),
            Err(VerifierError::EtaInDelta(1.0))
        );
        assert!(matches!(
            extract_witness(&RealLine, &harmonic_trace(20), 1.0, &[], Some(1000)),
            Err(VerifierError::PrefixTooShort(_))
        ));
    }

    #[test]
    fn eta_proposal() {
        assert_eq!(propose_eta(&[1.0, 2.0, 5.0], 0.0, 6.0), Some(3.5));
        assert_eq!(propose_eta(&[], 0.5, 1.5), Some(1.0));
        assert_eq!(propose_eta(&[], 1.0, 1.0), None);
    }

    #[test]
    fn fixed_point_oracle_examples() {
        let space = FiniteMetricSpace::new(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.0],
            vec![2.0, 1.0, 0.0],
        ])
        .unwrap();
        assert_eq!(brute_force_fixed_points(&space, &[0, 1, 2]).unwrap(), BTreeSet::from([0, 1, 2]));
        assert_eq!(brute_force_fixed_points(&space, &[0, 0, 0]).unwrap(), BTreeSet::from([0]));
        assert!(brute_force_fixed_points(&space, &[1, 2, 0]).unwrap().is_empty());
        assert!(brute_force_fixed_points(&space, &[0, 3, 0]).is_err());
        assert!(brute_force_fixed_points(&space, &[0]).is_err());
    }
}
