//! Metric spaces and diagnostics for recorded sequences.
//!
//! Cauchy-type properties quantify over infinite tails; every verdict here is
//! computed on a finite prefix and says so.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::par::Execution;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("distance matrix is empty")]
    Empty,
    #[error("row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("entry ({i}, {j}) = {value} is not a finite nonnegative number")]
    InvalidEntry { i: usize, j: usize, value: f64 },
    #[error("diagonal entry ({i}, {i}) = {value} is not zero")]
    NonZeroDiagonal { i: usize, value: f64 },
    #[error("distinct points {i} and {j} are at distance zero")]
    ZeroDistance { i: usize, j: usize },
    #[error("d({i},{j}) = {dij} differs from d({j},{i}) = {dji}")]
    NotSymmetric { i: usize, j: usize, dij: f64, dji: f64 },
    #[error("triangle inequality fails: d({i},{k}) = {dik} > d({i},{j}) + d({j},{k}) = {via}")]
    Triangle { i: usize, j: usize, k: usize, dik: f64, via: f64 },
    #[error("matrix file: {0}")]
    Parse(String),
    #[error("matrix file: {0}")]
    Io(String),
}

/// A set with a distance function satisfying the metric axioms.
pub trait MetricSpace: Sync {
    type Point: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn dist(&self, x: &Self::Point, y: &Self::Point) -> f64;
}

/// `R` with `d(x, y) = |x - y|`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct RealLine;

impl MetricSpace for RealLine {
    type Point = f64;

    fn dist(&self, x: &f64, y: &f64) -> f64 {
        (x - y).abs()
    }
}

/// `R^dim` with the Euclidean norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Euclidean {
    pub dim: usize,
}

impl Euclidean {
    pub fn new(dim: usize) -> Self {
        Euclidean { dim }
    }
}

impl MetricSpace for Euclidean {
    type Point = Vec<f64>;

    fn dist(&self, x: &Vec<f64>, y: &Vec<f64>) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(y.len(), self.dim);
        x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }
}

/// Points `0..n` with an explicit distance matrix, validated exhaustively on construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteMetricSpace {
    n: usize,
    matrix: Vec<f64>,
}

impl FiniteMetricSpace {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, MetricError> {
        let n = rows.len();
        if n == 0 {
            return Err(MetricError::Empty);
        }
        let mut matrix = Vec::with_capacity(n * n);
        for (row, entries) in rows.into_iter().enumerate() {
            if entries.len() != n {
                return Err(MetricError::NotSquare { row, len: entries.len(), n });
            }
            matrix.extend(entries);
        }
        let space = FiniteMetricSpace { n, matrix };
        space.validate()?;
        Ok(space)
    }

    /// Parses the plain-text format: first line `n`, then `n` rows of `n`
    /// whitespace-separated decimals.
    pub fn parse(text: &str) -> Result<Self, MetricError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or(MetricError::Empty)?;
        let n: usize = header
            .parse()
            .map_err(|_| MetricError::Parse(format!("first line must be the point count, got {header:?}")))?;
        let mut rows = Vec::with_capacity(n);
        for (row, line) in lines.enumerate() {
            let entries = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<f64>()
                        .map_err(|_| MetricError::Parse(format!("row {row}: {tok:?} is not a number")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(entries);
        }
        if rows.len() != n {
            return Err(MetricError::Parse(format!("expected {n} rows, found {}", rows.len())));
        }
        Self::new(rows)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, MetricError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| MetricError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.n + j]
    }

    pub fn points(&self) -> Vec<usize> {
        (0..self.n).collect()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.matrix.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    fn validate(&self) -> Result<(), MetricError> {
        let n = self.n;
        let d = |i: usize, j: usize| self.matrix[i * n + j];
        for i in 0..n {
            for j in 0..n {
                let value = d(i, j);
                if !value.is_finite() || value < 0.0 {
                    return Err(MetricError::InvalidEntry { i, j, value });
                }
            }
        }
        for i in 0..n {
            if d(i, i) != 0.0 {
                return Err(MetricError::NonZeroDiagonal { i, value: d(i, i) });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if d(i, j) != d(j, i) {
                    return Err(MetricError::NotSymmetric { i, j, dij: d(i, j), dji: d(j, i) });
                }
                if d(i, j) == 0.0 {
                    return Err(MetricError::ZeroDistance { i, j });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let via = d(i, j) + d(j, k);
                    if d(i, k) > via {
                        return Err(MetricError::Triangle { i, j, k, dik: d(i, k), via });
                    }
                }
            }
        }
        Ok(())
    }
}

impl MetricSpace for FiniteMetricSpace {
    type Point = usize;

    fn dist(&self, x: &usize, y: &usize) -> f64 {
        self.distance(*x, *y)
    }
}

/// Recorded points of a sequence with consecutive distances `rho[n] = d(x_n, x_{n+1})`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequenceTrace<P> {
    points: Vec<P>,
    rho: Vec<f64>,
}

impl<P: Clone> SequenceTrace<P> {
    pub fn start(x0: P) -> Self {
        SequenceTrace { points: vec![x0], rho: Vec::new() }
    }

    pub fn from_points<S>(space: &S, points: Vec<P>) -> Self
    where
        S: MetricSpace<Point = P>,
    {
        let rho = points.windows(2).map(|w| space.dist(&w[0], &w[1])).collect();
        SequenceTrace { points, rho }
    }

    /// Appends `x` and returns the new consecutive distance.
    pub fn push<S>(&mut self, space: &S, x: P) -> f64
    where
        S: MetricSpace<Point = P>,
    {
        let last = self.points.last().expect("trace holds at least one point");
        let r = space.dist(last, &x);
        self.rho.push(r);
        self.points.push(x);
        r
    }
}

impl<P> SequenceTrace<P> {
    pub fn points(&self) -> &[P] {
        &self.points
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn last(&self) -> &P {
        self.points.last().expect("trace holds at least one point")
    }

    /// Whether every stored distance matches a recomputation.
    pub fn is_consistent<S>(&self, space: &S) -> bool
    where
        S: MetricSpace<Point = P>,
    {
        self.rho.len() + 1 == self.points.len()
            && self.points.windows(2).zip(&self.rho).all(|(w, &r)| space.dist(&w[0], &w[1]) == r)
    }
}

/// Sum of the recorded consecutive distances.
pub fn tele_sum<P>(trace: &SequenceTrace<P>) -> f64 {
    trace.rho.iter().sum()
}

/// Largest rank drift per appended point tolerated between the half prefix and
/// the full prefix before a Cauchy verdict is refused.
const MAX_RANK_DRIFT: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CauchyOutcome {
    CauchyAt { rank: usize },
    NotCauchyAt { m: usize, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CauchyReport {
    pub eps: f64,
    pub prefix_len: usize,
    /// Always true: a finite prefix is evidence, not proof.
    pub prefix_only: bool,
    pub outcome: CauchyOutcome,
}

impl CauchyReport {
    pub fn is_cauchy(&self) -> bool {
        matches!(self.outcome, CauchyOutcome::CauchyAt { .. })
    }
}

/// Least `j` with `d(x_m, x_n) <= eps` for all `j <= m < n < len`.
fn least_rank<S: MetricSpace>(space: &S, points: &[S::Point], eps: f64, exec: Execution) -> usize {
    let len = points.len();
    let violates = exec.map_range(0..len.saturating_sub(1), |m| {
        points[m + 1..].iter().any(|y| space.dist(&points[m], y) > eps)
    });
    violates.iter().rposition(|&v| v).map_or(0, |m| m + 1)
}

/// Prefix check of the Cauchy property at `eps`.
///
/// The least rank `j` with all recorded pairs beyond it within `eps` always
/// exists on a finite prefix, so the verdict also asks that `j` leaves a
/// nonempty tail of at most half the prefix and that `j` barely moves when the
/// prefix is cut in half. A sequence whose rank keeps growing with the prefix
/// (the harmonic walk) is reported with the lexicographically least violating pair.
pub fn cauchy_verdict<S: MetricSpace>(space: &S, trace: &SequenceTrace<S::Point>, eps: f64) -> CauchyReport {
    cauchy_verdict_with(space, trace, eps, Execution::default())
}

pub fn cauchy_verdict_with<S: MetricSpace>(
    space: &S,
    trace: &SequenceTrace<S::Point>,
    eps: f64,
    exec: Execution,
) -> CauchyReport {
    let points = trace.points();
    let len = points.len();
    let half = len.div_ceil(2);
    let rank = least_rank(space, points, eps, exec);
    let half_rank = least_rank(space, &points[..half], eps, exec);
    let drift = rank.saturating_sub(half_rank) as f64;
    let settled = len >= 2
        && rank + 1 < len
        && 2 * rank <= len
        && drift <= MAX_RANK_DRIFT * (len - half) as f64;

    let outcome = if settled {
        CauchyOutcome::CauchyAt { rank }
    } else {
        let (m, n) = (0..len)
            .flat_map(|m| (m + 1..len).map(move |n| (m, n)))
            .find(|&(m, n)| space.dist(&points[m], &points[n]) > eps)
            // unsettled with no violating pair only happens on a one-pair prefix
            .unwrap_or((0, len.saturating_sub(1)));
        CauchyOutcome::NotCauchyAt { m, n }
    };
    CauchyReport { eps, prefix_len: len, prefix_only: true, outcome }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SemiCauchyReport {
    pub eps: f64,
    /// Whether the recorded `rho` ends inside `[0, eps]` and stays there from `rank` on.
    pub holds: bool,
    /// First rank from which every recorded `rho` is at most `eps`.
    pub rank: Option<usize>,
    pub prefix_only: bool,
}

/// Prefix check of `d(x_n, x_{n+1}) -> 0` at level `eps`.
pub fn semi_cauchy_verdict<P>(trace: &SequenceTrace<P>, eps: f64) -> SemiCauchyReport {
    let rho = trace.rho();
    let rank = rho.iter().rposition(|&r| r > eps).map_or(0, |i| i + 1);
    let holds = rank < rho.len();
    SemiCauchyReport { eps, holds, rank: holds.then_some(rank), prefix_only: true }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn harmonic_walk(len: usize) -> SequenceTrace<f64> {
        let mut points = Vec::with_capacity(len);
        let mut x = 0.0;
        for k in 0..len {
            points.push(x);
            x += 1.0 / (k + 1) as f64;
        }
        SequenceTrace::from_points(&RealLine, points)
    }

    fn geometric(count: i32) -> SequenceTrace<f64> {
        SequenceTrace::from_points(&RealLine, (0..=count).map(|j| 2f64.powi(-j)).collect())
    }

    #[test]
    fn tele_sum_examples() {
        assert_eq!(tele_sum(&geometric(3)), 0.875);
        assert_eq!(tele_sum(&SequenceTrace::start(4.0)), 0.0);
        let h = tele_sum(&harmonic_walk(4));
        assert!((h - (1.0 + 0.5 + 1.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn geometric_trace_is_cauchy_at_least_rank() {
        // sup_{n > j} |2^-j - 2^-n| = 2^-j - 2^-20 <= 0.01 first at j = 7
        let report = cauchy_verdict(&RealLine, &geometric(20), 0.01);
        assert_eq!(report.outcome, CauchyOutcome::CauchyAt { rank: 7 });
        assert!(report.prefix_only);
    }

    #[test]
    fn constant_trace_is_cauchy_from_zero() {
        let trace = SequenceTrace::from_points(&RealLine, vec![5.0, 5.0, 5.0]);
        for eps in [1e-12, 1.0] {
            assert_eq!(cauchy_verdict(&RealLine, &trace, eps).outcome, CauchyOutcome::CauchyAt { rank: 0 });
        }
    }

    #[test]
    fn harmonic_walk_is_not_cauchy() {
        let report = cauchy_verdict(&RealLine, &harmonic_walk(50), 1.0);
        assert_eq!(report.outcome, CauchyOutcome::NotCauchyAt { m: 0, n: 2 });
    }

    #[test]
    fn semi_cauchy_examples() {
        // rho_n = 1/(n+1); the float difference H_20 - H_19 rounds to just below 0.05
        let h = harmonic_walk(100);
        assert!(h.rho()[19] <= 0.05);
        assert_eq!(semi_cauchy_verdict(&h, 0.05).rank, Some(19));
        // away from the rounding edge: 1/20 < 0.051 < 1/19
        assert_eq!(semi_cauchy_verdict(&h, 0.051).rank, Some(19));
        assert_eq!(semi_cauchy_verdict(&h, 0.0499).rank, Some(20));

        // geometric: rho_n = 2^-(n+1) <= 1e-3 from n = 9
        assert_eq!(semi_cauchy_verdict(&geometric(20), 1e-3).rank, Some(9));

        let unit = SequenceTrace::from_points(&RealLine, (0..10).map(f64::from).collect());
        let report = semi_cauchy_verdict(&unit, 0.5);
        assert!(!report.holds);
        assert_eq!(report.rank, None);
    }

    #[test]
    fn matrix_validation_reports_each_axiom() {
        assert!(matches!(FiniteMetricSpace::new(vec![]), Err(MetricError::Empty)));
        assert!(matches!(
            FiniteMetricSpace::new(vec![vec![0.0, 1.0], vec![1.0]]),
            Err(MetricError::NotSquare { row: 1, .. })
        ));
        assert!(matches!(
            FiniteMetricSpace::new(vec![vec![1.0, 1.0], vec![1.0, 0.0]]),
            Err(MetricError::NonZeroDiagonal { i: 0, .. })
        ));
        assert!(matches!(
            FiniteMetricSpace::new(vec![vec![0.0, 1.0], vec![2.0, 0.0]]),
            Err(MetricError::NotSymmetric { .. })
        ));
        assert!(matches!(
            FiniteMetricSpace::new(vec![vec![0.0, 0.0], vec![0.0, 0.0]]),
            Err(MetricError::ZeroDistance { i: 0, j: 1 })
        ));
        assert!(matches!(
            FiniteMetricSpace::new(vec![vec![0.0, -1.0], vec![-1.0, 0.0]]),
            Err(MetricError::InvalidEntry { .. })
        ));
        let bad = vec![vec![0.0, 1.0, 5.0], vec![1.0, 0.0, 1.0], vec![5.0, 1.0, 0.0]];
        assert!(matches!(FiniteMetricSpace::new(bad), Err(MetricError::Triangle { i: 0, j: 1, k: 2, .. })));
    }

    #[test]
    fn parses_matrix_file_format() {
        let text = "3\n0 1 2\n1 0 1.5\n2 1.5 0\n";
        let space = FiniteMetricSpace::parse(text).unwrap();
        assert_eq!(space.len(), 3);
        assert_eq!(space.distance(1, 2), 1.5);
        assert!(FiniteMetricSpace::parse("2\n0 1\n").is_err());
        assert!(FiniteMetricSpace::parse("x\n").is_err());
    }

    #[test]
    fn trace_distances_are_recomputed() {
        let mut trace = SequenceTrace::start(vec![0.0, 0.0]);
        let e = Euclidean::new(2);
        assert_eq!(trace.push(&e, vec![3.0, 4.0]), 5.0);
        assert!(trace.is_consistent(&e));
        assert_eq!(trace.rho().len(), trace.len() - 1);
    }
}
