//! Wardowski functions `F: [0, ∞) -> R ∪ {-∞}` and their axiom checks.
//!
//! A Wardowski function satisfies
//!
//! * `F(t) = -∞` exactly at `t = 0`,
//! * `F` strictly increasing (or merely nondecreasing for the non-strict variant),
//! * `F(t) -> -∞` as `t -> 0+`.
//!
//! A monotone `F` has at most countably many jumps. The built-in families know
//! theirs and declare them; [`lateral_limits`] lets callers cross-check the
//! declaration numerically.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::numerics::{ExtReal, Tolerance};
use crate::par::Execution;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WardowskiError {
    #[error("parameter {name} = {value} must be a finite positive number")]
    InvalidParameter { name: &'static str, value: f64 },
}

fn positive(name: &'static str, value: f64) -> Result<f64, WardowskiError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(WardowskiError::InvalidParameter { name, value })
    }
}

/// Parameterized built-in families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `ln(αt² + βt) + γt`
    LogPoly { alpha: f64, beta: f64, gamma: f64 },
    /// `-t^(-δ)`
    NegPower { delta: f64 },
    /// `ln t`
    Log,
    /// `ln t` below `at`, `ln t + jump` from `at` on.
    StepLog { jump: f64, at: f64 },
}

impl Family {
    fn eval_positive(&self, t: f64) -> f64 {
        match *self {
            Family::LogPoly { alpha, beta, gamma } => (alpha * t * t + beta * t).ln() + gamma * t,
            Family::NegPower { delta } => -t.powf(-delta),
            Family::Log => t.ln(),
            Family::StepLog { jump, at } => {
                if t < at {
                    t.ln()
                } else {
                    t.ln() + jump
                }
            }
        }
    }
}

type EvalFn = dyn Fn(f64) -> ExtReal + Send + Sync;

#[derive(Clone)]
enum Kind {
    Builtin(Family),
    Custom { name: String, eval: Arc<EvalFn> },
}

/// An evaluator for `F` plus its declared metadata.
#[derive(Clone)]
pub struct WardowskiFunction {
    kind: Kind,
    discontinuities: Vec<f64>,
    left_continuous: bool,
    strict: bool,
}

impl fmt::Debug for WardowskiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WardowskiFunction")
            .field("name", &self.name())
            .field("discontinuities", &self.discontinuities)
            .field("left_continuous", &self.left_continuous)
            .field("strict", &self.strict)
            .finish()
    }
}

impl WardowskiFunction {
    fn builtin(family: Family, discontinuities: Vec<f64>, left_continuous: bool) -> Self {
        WardowskiFunction { kind: Kind::Builtin(family), discontinuities, left_continuous, strict: true }
    }

    pub fn from_family(family: Family) -> Result<Self, WardowskiError> {
        match family {
            Family::LogPoly { alpha, beta, gamma } => make_log_poly(alpha, beta, gamma),
            Family::NegPower { delta } => make_neg_power(delta),
            Family::Log => Ok(make_log()),
            Family::StepLog { jump, at } => make_step_log(jump, at),
        }
    }

    /// Wraps an arbitrary evaluator. Nothing is checked; use [`check_axioms`].
    pub fn custom<E>(name: impl Into<String>, eval: E, discontinuities: Vec<f64>, left_continuous: bool, strict: bool) -> Self
    where
        E: Fn(f64) -> ExtReal + Send + Sync + 'static,
    {
        let mut discontinuities = discontinuities;
        discontinuities.sort_by(f64::total_cmp);
        WardowskiFunction {
            kind: Kind::Custom { name: name.into(), eval: Arc::new(eval) },
            discontinuities,
            left_continuous,
            strict,
        }
    }

    /// Same function, with the monotonicity requirement relaxed to nondecreasing.
    pub fn non_strict(mut self) -> Self {
        self.strict = false;
        self
    }

    /// Evaluates `F(t)` for `t >= 0`.
    ///
    /// Built-in families return `NegInf` at `t = 0`. Positive `t` so small that the
    /// formula overflows to `-inf` in floating point also come back as `NegInf`.
    pub fn eval(&self, t: f64) -> ExtReal {
        debug_assert!(t >= 0.0, "F is defined on [0, inf), got {t}");
        match &self.kind {
            Kind::Builtin(family) => {
                if t == 0.0 {
                    ExtReal::NegInf
                } else {
                    ExtReal::from_f64(family.eval_positive(t))
                }
            }
            Kind::Custom { eval, .. } => eval(t),
        }
    }

    pub fn family(&self) -> Option<Family> {
        match self.kind {
            Kind::Builtin(f) => Some(f),
            Kind::Custom { .. } => None,
        }
    }

    pub fn name(&self) -> String {
        match &self.kind {
            Kind::Builtin(Family::LogPoly { alpha, beta, gamma }) => {
                format!("log_poly{{alpha={alpha},beta={beta},gamma={gamma}}}")
            }
            Kind::Builtin(Family::NegPower { delta }) => format!("neg_power{{delta={delta}}}"),
            Kind::Builtin(Family::Log) => "log{}".to_string(),
            Kind::Builtin(Family::StepLog { jump, at }) => format!("step_log{{jump={jump},at={at}}}"),
            Kind::Custom { name, .. } => name.clone(),
        }
    }

    /// Declared discontinuity points, sorted ascending.
    pub fn discontinuities(&self) -> &[f64] {
        &self.discontinuities
    }

    pub fn left_continuous(&self) -> bool {
        self.left_continuous
    }

    pub fn strict(&self) -> bool {
        self.strict
    }
}

pub fn make_log_poly(alpha: f64, beta: f64, gamma: f64) -> Result<WardowskiFunction, WardowskiError> {
    let family = Family::LogPoly {
        alpha: positive("alpha", alpha)?,
        beta: positive("beta", beta)?,
        gamma: positive("gamma", gamma)?,
    };
    Ok(WardowskiFunction::builtin(family, Vec::new(), true))
}

pub fn make_neg_power(delta: f64) -> Result<WardowskiFunction, WardowskiError> {
    let family = Family::NegPower { delta: positive("delta", delta)? };
    Ok(WardowskiFunction::builtin(family, Vec::new(), true))
}

/// `F = ln`, under which `(a, F)`-contractivity is Banach's condition with constant `e^(-a)`.
pub fn make_log() -> WardowskiFunction {
    WardowskiFunction::builtin(Family::Log, Vec::new(), true)
}

/// Right-continuous `ln` with an upward jump of `jump` at `at`.
pub fn make_step_log(jump: f64, at: f64) -> Result<WardowskiFunction, WardowskiError> {
    let family = Family::StepLog { jump: positive("jump", jump)?, at: positive("at", at)? };
    Ok(WardowskiFunction::builtin(family, vec![at], false))
}

/// Numerical one-sided limits at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LateralLimits {
    pub t: f64,
    pub left: ExtReal,
    pub value: ExtReal,
    pub right: ExtReal,
}

impl LateralLimits {
    /// `F(t+0) - F(t-0)`, when both are finite.
    pub fn jump(&self) -> Option<f64> {
        self.right.checked_sub(self.left)
    }

    pub fn is_continuous(&self, tol: &Tolerance) -> bool {
        let close = |x: ExtReal| x.checked_sub(self.value).is_some_and(|d| d.abs() <= tol.abs_tol);
        close(self.left) && close(self.right)
    }

    /// `F(t-0) <= F(t) <= F(t+0)` up to `tol`.
    pub fn is_ordered(&self, tol: &Tolerance) -> bool {
        self.left <= self.value + tol.abs_tol && self.value <= self.right + tol.abs_tol
    }
}

const APPROACH_STEPS: i32 = 52;

/// Estimates `F(t-0)` and `F(t+0)` along `t(1 ∓ 2^-i)`, `i = 1..=52`.
///
/// For monotone `F` the one-sided limit is the value at the closest sample
/// strictly on the corresponding side of `t`.
pub fn lateral_limits(f: &WardowskiFunction, t: f64) -> LateralLimits {
    assert!(t > 0.0 && t.is_finite(), "lateral limits need a finite t > 0");
    let closest = |sign: f64| {
        (1..=APPROACH_STEPS)
            .rev()
            .map(|i| t * (1.0 + sign * 2f64.powi(-i)))
            .find(|&s| if sign < 0.0 { s < t } else { s > t })
            .expect("t(1 - 1/2) and t(1 + 1/2) differ from t")
    };
    LateralLimits { t, left: f.eval(closest(-1.0)), value: f.eval(t), right: f.eval(closest(1.0)) }
}

/// Where a declared discontinuity disagrees with the numerical lateral limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeclarationMismatch {
    pub limits: LateralLimits,
    pub declared_discontinuous: bool,
}

/// Cross-checks the declared discontinuity set: every grid point off it must
/// look continuous, every declared point must show a jump above `tol`.
pub fn check_declared_discontinuities(
    f: &WardowskiFunction,
    grid: &[f64],
    tol: &Tolerance,
) -> Vec<DeclarationMismatch> {
    let declared = f.discontinuities();
    grid.iter()
        .copied()
        .filter(|t| !declared.contains(t))
        .chain(declared.iter().copied())
        .filter_map(|t| {
            let limits = lateral_limits(f, t);
            let declared_discontinuous = declared.contains(&t);
            (limits.is_continuous(tol) == declared_discontinuous)
                .then_some(DeclarationMismatch { limits, declared_discontinuous })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AxiomWitness {
    /// `F(0)` is not `-∞`.
    FiniteAtZero { value: ExtReal },
    /// `F(t) = -∞` at some `t > 0`.
    NegInfAtPositive { t: f64 },
    /// `t < s` yet `F(t) >= F(s)` (strict) or `F(t) > F(s)` (non-strict).
    NotIncreasing { t: f64, s: f64, f_t: ExtReal, f_s: ExtReal },
    /// The zero sequence never drops below `bound`.
    BoundedBelow { bound: f64, lowest: ExtReal },
    /// Too few ladder rungs are representable at all.
    LadderUnreachable { reachable_rungs: usize },
    /// `F(t) < F(s)` with `t >= s`.
    OrderReversal { t: f64, s: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum AxiomCheck {
    Pass,
    Fail { witness: AxiomWitness },
}

impl AxiomCheck {
    pub fn passed(&self) -> bool {
        matches!(self, AxiomCheck::Pass)
    }

    fn from_witness(witness: Option<AxiomWitness>) -> Self {
        witness.map_or(AxiomCheck::Pass, |witness| AxiomCheck::Fail { witness })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    /// `F(t) = -∞` iff `t = 0`.
    pub neg_inf_only_at_zero: AxiomCheck,
    /// Strict or non-strict monotonicity, following the function's `strict` flag.
    pub increasing: AxiomCheck,
    /// `F(t) -> -∞` as `t -> 0+`, on the unboundedness ladder.
    pub unbounded_at_zero: AxiomCheck,
    /// `F(t) < F(s)` implies `t < s` on all grid pairs.
    pub order_reflecting: AxiomCheck,
    /// Ladder rungs below `F` at the smallest positive double; no sample can reach them.
    pub unreachable_rungs: Vec<f64>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.neg_inf_only_at_zero.passed()
            && self.increasing.passed()
            && self.unbounded_at_zero.passed()
            && self.order_reflecting.passed()
    }
}

/// `-10, -10², …, -10⁶`
pub fn default_unboundedness_ladder() -> Vec<f64> {
    (1..=6).map(|e| -(10f64.powi(e))).collect()
}

/// `2^-i` for `i = 1..=1074`, down to the smallest positive double.
pub fn default_zero_sequence() -> Vec<f64> {
    (1..=1074).map(|i| 2f64.powi(-i)).collect()
}

/// How many ladder rungs must be both representable and crossed for the
/// unboundedness check to pass.
const MIN_REACHED_RUNGS: usize = 2;

/// Checks the Wardowski axioms and order reflection (`F(t) < F(s)` forces `t < s`) on sampled data.
///
/// `grid` is sorted ascending and positive; `zero_seq` decreases to zero.
///
/// Unboundedness below is checked against [`default_unboundedness_ladder`]. A
/// rung at or below `F(5e-324)` cannot be crossed by any double when `F` is
/// increasing (`ln` bottoms out near -744), so such rungs are listed as
/// unreachable rather than failed. At least two rungs must be crossed.
pub fn check_axioms(f: &WardowskiFunction, grid: &[f64], zero_seq: &[f64]) -> AxiomReport {
    check_axioms_with(f, grid, zero_seq, &default_unboundedness_ladder(), Execution::default())
}

pub fn check_axioms_with(
    f: &WardowskiFunction,
    grid: &[f64],
    zero_seq: &[f64],
    ladder: &[f64],
    exec: Execution,
) -> AxiomReport {
    debug_assert!(grid.windows(2).all(|w| w[0] <= w[1]));
    let grid_values: Vec<ExtReal> = exec.map(grid, |&t| f.eval(t));
    let zero_values: Vec<ExtReal> = exec.map(zero_seq, |&t| f.eval(t));

    let at_zero = f.eval(0.0);
    let neg_inf_witness = if !at_zero.is_neg_inf() {
        Some(AxiomWitness::FiniteAtZero { value: at_zero })
    } else {
        // zero_seq samples may overflow to -inf in floating point; only the grid is held to finiteness
        grid.iter()
            .zip(&grid_values)
            .find(|(&t, v)| t > 0.0 && v.is_neg_inf())
            .map(|(&t, _)| AxiomWitness::NegInfAtPositive { t })
    };

    let increasing_witness = grid.windows(2).zip(grid_values.windows(2)).find_map(|(ts, fs)| {
        let (t, s, f_t, f_s) = (ts[0], ts[1], fs[0], fs[1]);
        let bad = t < s && if f.strict() { f_t >= f_s } else { f_t > f_s };
        bad.then_some(AxiomWitness::NotIncreasing { t, s, f_t, f_s })
    });

    let floor = f.eval(f64::from_bits(1));
    let (reachable, unreachable): (Vec<f64>, Vec<f64>) =
        ladder.iter().partition(|&&bound| floor < ExtReal::Finite(bound));
    let lowest = zero_values
        .iter()
        .copied()
        .filter(|v| !v.is_neg_inf())
        .min()
        .unwrap_or(ExtReal::Finite(f64::MAX));
    let unbounded_witness = reachable
        .iter()
        .find(|&&bound| !zero_values.iter().any(|v| !v.is_neg_inf() && *v < ExtReal::Finite(bound)))
        .map(|&bound| AxiomWitness::BoundedBelow { bound, lowest })
        .or_else(|| {
            (reachable.len() < MIN_REACHED_RUNGS.min(ladder.len())).then(|| match ladder.first() {
                Some(&bound) if reachable.is_empty() => AxiomWitness::BoundedBelow { bound, lowest },
                _ => AxiomWitness::LadderUnreachable { reachable_rungs: reachable.len() },
            })
        });

    let n = grid.len();
    let order_witness = exec
        .find_first_in_range(0..n, |i| {
            (0..n).find_map(|j| {
                let (t, s) = (grid[i], grid[j]);
                (grid_values[i] < grid_values[j] && t >= s).then_some(AxiomWitness::OrderReversal { t, s })
            })
        });

    AxiomReport {
        neg_inf_only_at_zero: AxiomCheck::from_witness(neg_inf_witness),
        increasing: AxiomCheck::from_witness(increasing_witness),
        unbounded_at_zero: AxiomCheck::from_witness(unbounded_witness),
        order_reflecting: AxiomCheck::from_witness(order_witness),
        unreachable_rungs: unreachable,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegularityStatus {
    Regular,
    NotRegular,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularityVerdict {
    pub k: f64,
    pub status: RegularityStatus,
    /// `(t, t^k F(t))` along the zero sequence, finite samples only.
    pub evidence: Vec<(f64, f64)>,
}

/// Thresholds `|t^k F(t)|` must fall below, and stay below, for a Regular verdict.
pub fn default_regularity_ladder() -> Vec<f64> {
    (1..=6).map(|e| 10f64.powi(-e)).collect()
}

/// Classifies `t^k F(t) -> 0` as `t -> 0+` along `zero_seq`.
///
/// Regular when `|t^k F(t)|` drops below every ladder threshold and stays there.
/// NotRegular when the second half of the samples grows monotonically in
/// magnitude. Anything else, including a nonzero plateau, is Inconclusive.
pub fn classify_regularity(f: &WardowskiFunction, k: f64, zero_seq: &[f64]) -> RegularityVerdict {
    classify_regularity_with(f, k, zero_seq, &default_regularity_ladder())
}

pub fn classify_regularity_with(f: &WardowskiFunction, k: f64, zero_seq: &[f64], ladder: &[f64]) -> RegularityVerdict {
    assert!(k > 0.0 && k < 1.0, "regularity exponent must lie in (0, 1), got {k}");
    let evidence: Vec<(f64, f64)> = zero_seq
        .iter()
        .filter_map(|&t| f.eval(t).finite().map(|v| (t, t.powf(k) * v)))
        .filter(|(_, p)| p.is_finite())
        .collect();
    let mags: Vec<f64> = evidence.iter().map(|(_, p)| p.abs()).collect();

    let status = if mags.len() < 8 {
        RegularityStatus::Inconclusive
    } else {
        let stays_below = |eps: f64| {
            let last_above = mags.iter().rposition(|&m| m >= eps);
            last_above.is_none_or(|i| i + 1 < mags.len())
        };
        let tail = &mags[mags.len() / 2..];
        let growing = tail.windows(2).all(|w| w[1] > w[0]);
        if ladder.iter().all(|&eps| stays_below(eps)) {
            RegularityStatus::Regular
        } else if growing {
            RegularityStatus::NotRegular
        } else {
            RegularityStatus::Inconclusive
        }
    };
    RegularityVerdict { k, status, evidence }
}

/// Ladders for checking that `F(t_n) -> -inf` exactly when `t_n -> 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroLimitLadder {
    /// The premise needs the `F` values to end below each bound.
    pub f_bounds: Vec<f64>,
    /// The conclusion needs the `t` values to end below each level.
    pub t_levels: Vec<f64>,
}

impl Default for ZeroLimitLadder {
    fn default() -> Self {
        ZeroLimitLadder { f_bounds: vec![-5.0, -10.0], t_levels: vec![1e-1, 1e-2, 1e-3] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroLimitOutcome {
    pub premise_held: bool,
    pub conclusion_held: bool,
    /// `premise ⟹ conclusion` on this prefix.
    pub holds: bool,
    /// `(level, index)`: last index whose `t` is not below `level`.
    pub witness: Option<(f64, usize)>,
}

/// Checks `F(t_n) -> -∞ ⟹ t_n -> 0` on recorded `(t_n, F(t_n))` pairs.
///
/// The `F` values are taken as given so a harness can inject them.
pub fn zero_limit_check(samples: &[(f64, ExtReal)], ladder: &ZeroLimitLadder) -> ZeroLimitOutcome {
    // "ends below and stays below": the tail after the last offender is nonempty
    let settles = |above: &dyn Fn(usize) -> bool| -> Option<usize> {
        match (0..samples.len()).rev().find(|&i| above(i)) {
            Some(i) if i + 1 == samples.len() => Some(i),
            _ => None,
        }
    };
    let premise_held = !samples.is_empty()
        && ladder
            .f_bounds
            .iter()
            .all(|&b| settles(&|i| samples[i].1 >= ExtReal::Finite(b)).is_none());
    let witness = ladder
        .t_levels
        .iter()
        .find_map(|&eps| settles(&|i| samples[i].0 >= eps).map(|i| (eps, i)));
    let conclusion_held = !samples.is_empty() && witness.is_none();
    ZeroLimitOutcome {
        premise_held,
        conclusion_held,
        holds: !premise_held || conclusion_held,
        witness: if premise_held { witness } else { None },
    }
}

/// [`zero_limit_check`] with `F` values computed from `f`.
pub fn zero_limit_check_fn(f: &WardowskiFunction, seq: &[f64], ladder: &ZeroLimitLadder) -> ZeroLimitOutcome {
    let samples: Vec<(f64, ExtReal)> = seq.iter().map(|&t| (t, f.eval(t))).collect();
    zero_limit_check(&samples, ladder)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, LN_2};

    fn log_grid() -> Vec<f64> {
        (1..=1000).map(|i| i as f64 * 0.01).collect()
    }

    #[test]
    fn log_poly_values() {
        let f = make_log_poly(1.0, 1.0, 1.0).unwrap();
        assert!((f.eval(1.0).to_f64() - (LN_2 + 1.0)).abs() < 1e-15);
        assert_eq!(f.eval(0.0), ExtReal::NegInf);
        let grid: Vec<f64> = (1..=100).map(|i| i as f64 * 0.1).collect();
        assert!(grid.windows(2).all(|w| f.eval(w[0]) < f.eval(w[1])));
        assert!(f.left_continuous() && f.strict() && f.discontinuities().is_empty());
        assert!(make_log_poly(0.0, 1.0, 1.0).is_err());
        assert!(make_log_poly(1.0, -1.0, 1.0).is_err());
        assert!(make_log_poly(1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn neg_power_values() {
        assert_eq!(make_neg_power(1.0).unwrap().eval(2.0), ExtReal::Finite(-0.5));
        assert_eq!(make_neg_power(0.5).unwrap().eval(4.0), ExtReal::Finite(-0.5));
        assert_eq!(make_neg_power(3.0).unwrap().eval(0.0), ExtReal::NegInf);
        assert!(make_neg_power(0.0).is_err());
    }

    #[test]
    fn log_values() {
        let f = make_log();
        assert_eq!(f.eval(1.0), ExtReal::Finite(0.0));
        assert!((f.eval(E).to_f64() - 1.0).abs() < 1e-15);
        assert_eq!(f.eval(0.0), ExtReal::NegInf);
    }

    #[test]
    fn step_log_values_and_jump() {
        let f = make_step_log(1.0, 1.0).unwrap();
        assert!((f.eval(0.5).to_f64() - 0.5f64.ln()).abs() < 1e-15);
        assert_eq!(f.eval(1.0), ExtReal::Finite(1.0));
        assert!(!f.left_continuous());
        assert_eq!(f.discontinuities(), &[1.0]);
        let lim = lateral_limits(&f, 1.0);
        assert!(lim.left.to_f64().abs() < 1e-12);
        assert!((lim.right.to_f64() - 1.0).abs() < 1e-12);
        assert!((lim.jump().unwrap() - 1.0).abs() < 1e-6);
        // strictly increasing across the jump: sup of the left branch is 0 < 1
        assert!(f.eval(1.0 - 1e-12) < f.eval(1.0));
        assert!(make_step_log(0.0, 1.0).is_err());
        assert!(make_step_log(1.0, -2.0).is_err());
    }

    #[test]
    fn lateral_limits_of_continuous_functions() {
        let tol = Tolerance::default();
        let lim = lateral_limits(&make_log(), 1.0);
        assert!(lim.left.to_f64().abs() <= tol.abs_tol && lim.right.to_f64().abs() <= tol.abs_tol);
        assert!(lim.is_continuous(&tol) && lim.is_ordered(&tol));
        let f = make_log_poly(2.0, 0.5, 3.0).unwrap();
        for t in [1e-3, 0.7, 1.5, 42.0] {
            assert!(lateral_limits(&f, t).is_continuous(&tol), "t = {t}");
        }
    }

    #[test]
    fn declared_discontinuities_match_numerics() {
        let tol = Tolerance::default();
        let grid = log_grid();
        assert!(check_declared_discontinuities(&make_step_log(2.0, 0.37).unwrap(), &grid, &tol).is_empty());
        assert!(check_declared_discontinuities(&make_neg_power(0.5).unwrap(), &grid, &tol).is_empty());
        // an undeclared jump is caught
        let lying = WardowskiFunction::custom(
            "undeclared",
            |t: f64| if t == 0.0 { ExtReal::NegInf } else { ExtReal::Finite(t.ln() + if t >= 0.5 { 1.0 } else { 0.0 }) },
            vec![],
            true,
            true,
        );
        let mismatches = check_declared_discontinuities(&lying, &grid, &tol);
        assert_eq!(mismatches.len(), 1);
        assert_eq!(mismatches[0].limits.t, 0.5);
    }

    #[test]
    fn axioms_pass_for_neg_power() {
        let report = check_axioms(&make_neg_power(1.0).unwrap(), &log_grid(), &default_zero_sequence());
        assert!(report.all_pass(), "{report:?}");
        assert!(report.unreachable_rungs.is_empty());
    }

    #[test]
    fn log_ladder_rungs_beyond_double_range_are_unreachable() {
        let report = check_axioms(&make_log(), &log_grid(), &default_zero_sequence());
        assert!(report.all_pass(), "{report:?}");
        assert_eq!(report.unreachable_rungs, vec![-1e3, -1e4, -1e5, -1e6]);
    }

    #[test]
    fn decreasing_function_fails_monotonicity() {
        let f = WardowskiFunction::custom(
            "minus_t",
            |t: f64| if t == 0.0 { ExtReal::NegInf } else { ExtReal::Finite(-t) },
            vec![],
            true,
            true,
        );
        let report = check_axioms(&f, &log_grid(), &default_zero_sequence());
        match &report.increasing {
            AxiomCheck::Fail { witness: AxiomWitness::NotIncreasing { t, s, f_t, f_s } } => {
                assert_eq!((*t, *s), (0.01, 0.02));
                assert!(f_t > f_s);
            }
            other => panic!("expected monotonicity failure, got {other:?}"),
        }
        assert!(!report.order_reflecting.passed());
    }

    #[test]
    fn bounded_function_fails_unboundedness() {
        let f = WardowskiFunction::custom(
            "ln_1p",
            |t: f64| if t == 0.0 { ExtReal::NegInf } else { ExtReal::Finite(t.ln_1p()) },
            vec![],
            true,
            true,
        );
        let report = check_axioms(&f, &log_grid(), &default_zero_sequence());
        assert!(report.neg_inf_only_at_zero.passed());
        assert!(report.increasing.passed());
        assert!(matches!(
            report.unbounded_at_zero,
            AxiomCheck::Fail { witness: AxiomWitness::BoundedBelow { bound, .. } } if bound == -10.0
        ));
    }

    #[test]
    fn finite_value_at_zero_fails_first_axiom() {
        let f = WardowskiFunction::custom("t_minus_1", |t: f64| ExtReal::Finite(t - 1.0), vec![], true, true);
        let report = check_axioms(&f, &log_grid(), &default_zero_sequence());
        assert_eq!(
            report.neg_inf_only_at_zero,
            AxiomCheck::Fail { witness: AxiomWitness::FiniteAtZero { value: ExtReal::Finite(-1.0) } }
        );
    }

    #[test]
    fn non_strict_flag_relaxes_monotonicity() {
        let flat = |t: f64| {
            if t == 0.0 {
                ExtReal::NegInf
            } else {
                ExtReal::Finite(t.ln().min(0.0))
            }
        };
        let strict = WardowskiFunction::custom("capped_ln", flat, vec![], true, true);
        let grid = log_grid();
        assert!(!check_axioms(&strict, &grid, &default_zero_sequence()).increasing.passed());
        let relaxed = strict.non_strict();
        let report = check_axioms(&relaxed, &grid, &default_zero_sequence());
        assert!(report.increasing.passed() && report.order_reflecting.passed());
    }

    #[test]
    fn regularity_examples() {
        let zs = default_zero_sequence();
        assert_eq!(classify_regularity(&make_log(), 0.5, &zs).status, RegularityStatus::Regular);
        assert_eq!(
            classify_regularity(&make_neg_power(0.5).unwrap(), 0.75, &zs).status,
            RegularityStatus::Regular
        );
        assert_eq!(
            classify_regularity(&make_neg_power(1.0).unwrap(), 0.9, &zs).status,
            RegularityStatus::NotRegular
        );
        // t^k F(t) = -1 for k = delta: neither vanishing nor growing
        assert_eq!(
            classify_regularity(&make_neg_power(0.5).unwrap(), 0.5, &zs).status,
            RegularityStatus::Inconclusive
        );
    }

    #[test]
    fn zero_limit_examples() {
        let ladder = ZeroLimitLadder::default();
        let seq: Vec<f64> = (1..=100_000).map(|n| 1.0 / n as f64).collect();
        let out = zero_limit_check_fn(&make_log(), &seq, &ladder);
        assert!(out.premise_held && out.conclusion_held && out.holds);

        let constant = vec![2.0; 50];
        let out = zero_limit_check_fn(&make_log(), &constant, &ladder);
        assert!(!out.premise_held && out.holds);

        // F(t) = 0 on t > 0 is not Wardowski; injected F values descend anyway
        let injected: Vec<(f64, ExtReal)> = (0..50).map(|n| (2.0, ExtReal::Finite(-(n as f64)))).collect();
        let out = zero_limit_check(&injected, &ladder);
        assert!(out.premise_held && !out.holds);
        assert_eq!(out.witness, Some((0.1, 49)));
    }
}
