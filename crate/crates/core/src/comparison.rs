//! Comparison functions `φ: [0, ∞) -> [0, ∞)`.
//!
//! Given a Wardowski function `F` and `a > 0`, the induced comparison function is
//! `φ(t) = sup { s >= 0 : a + F(s) <= F(t) }`. It is increasing with `φ(t) <= t`;
//! left-continuity of `F` makes it regressive and Matkowski admissible, and
//! regularity of `F` makes the series `Φ(t) = Σ φ^n(t)` finite.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::numerics::{monotone_sup_below, NumericsError, Tolerance};
use crate::par::Execution;
use crate::wardowski::WardowskiFunction;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ComparisonError {
    #[error("contraction constant a = {0} must be a finite positive number")]
    InvalidConstant(f64),
    #[error("argument t = {0} must be a finite nonnegative number")]
    InvalidArgument(f64),
    #[error("linear coefficient {0} must lie in [0, 1)")]
    InvalidCoefficient(f64),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// `φ(t)` together with what the derivation can vouch for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiPoint {
    pub t: f64,
    pub phi: f64,
    /// Width of the final bisection bracket; the true supremum lies in `[phi, phi + width]`.
    pub bracket_width: f64,
    /// `phi < t` (or `t = 0`).
    pub regressive: bool,
    /// `F` is left-continuous and `a + F(phi) <= F(t)` was observed. Without
    /// left-continuity the supremum need not belong to the sublevel set, so the
    /// certificate is withheld even when the bisection point satisfies it.
    pub self_inequality: bool,
    pub budget_exhausted: bool,
}

/// Computes `φ(t) = sup { s >= 0 : a + F(s) <= F(t) }` by bisection on `[0, t]`.
///
/// The sublevel set sits inside `[0, t)` because `F(s) < F(t)` forces `s < t`,
/// so no search above `t` is needed.
pub fn derive_phi(f: &WardowskiFunction, a: f64, t: f64, tol: &Tolerance) -> Result<PhiPoint, ComparisonError> {
    if !(a.is_finite() && a > 0.0) {
        return Err(ComparisonError::InvalidConstant(a));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(ComparisonError::InvalidArgument(t));
    }
    if t == 0.0 {
        return Ok(PhiPoint {
            t,
            phi: 0.0,
            bracket_width: 0.0,
            regressive: true,
            self_inequality: f.left_continuous(),
            budget_exhausted: false,
        });
    }
    let f_t = f.eval(t);
    let threshold = f_t - a;
    let est = monotone_sup_below(|s| f.eval(s), threshold, 0.0, t, tol)?;
    Ok(PhiPoint {
        t,
        phi: est.value,
        bracket_width: est.width(),
        regressive: est.value < t,
        self_inequality: f.left_continuous() && f.eval(est.value) + a <= f_t,
        budget_exhausted: est.budget_exhausted,
    })
}

/// Where a [`ComparisonFunction`] came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Origin {
    Linear { alpha: f64 },
    DerivedFrom { f: String, a: f64, tol: Tolerance, left_continuous: bool },
    UserSupplied { name: String },
}

type PhiFn = dyn Fn(f64) -> f64 + Send + Sync;

#[derive(Clone)]
pub struct ComparisonFunction {
    eval: Arc<PhiFn>,
    origin: Origin,
}

impl fmt::Debug for ComparisonFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ComparisonFunction").field("origin", &self.origin).finish()
    }
}

impl ComparisonFunction {
    /// `φ(t) = αt`.
    pub fn linear(alpha: f64) -> Result<Self, ComparisonError> {
        if !(0.0..1.0).contains(&alpha) {
            return Err(ComparisonError::InvalidCoefficient(alpha));
        }
        Ok(ComparisonFunction { eval: Arc::new(move |t| alpha * t), origin: Origin::Linear { alpha } })
    }

    /// The comparison function induced by `(a, F)`, evaluated lazily by bisection.
    pub fn derived(f: &WardowskiFunction, a: f64, tol: Tolerance) -> Result<Self, ComparisonError> {
        if !(a.is_finite() && a > 0.0) {
            return Err(ComparisonError::InvalidConstant(a));
        }
        let origin =
            Origin::DerivedFrom { f: f.name(), a, tol, left_continuous: f.left_continuous() };
        let f = f.clone();
        let eval = move |t: f64| derive_phi(&f, a, t, &tol).map(|p| p.phi).unwrap_or(f64::NAN);
        Ok(ComparisonFunction { eval: Arc::new(eval), origin })
    }

    pub fn from_fn<E>(name: impl Into<String>, eval: E) -> Self
    where
        E: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        ComparisonFunction { eval: Arc::new(eval), origin: Origin::UserSupplied { name: name.into() } }
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    /// Slack a caller should allow when comparing against `eval`: the bisection
    /// tolerance for derived functions, zero otherwise.
    pub fn evaluation_slack(&self) -> f64 {
        match &self.origin {
            Origin::DerivedFrom { tol, .. } => tol.abs_tol,
            _ => 0.0,
        }
    }

    /// `Φ(t) = t / (1 - α)` for linear `φ`.
    pub fn closed_form_series(&self, t: f64) -> Option<f64> {
        match self.origin {
            Origin::Linear { alpha } => Some(t / (1.0 - alpha)),
            _ => None,
        }
    }
}

/// `φ^n(t)`, with `φ^0(t) = t`.
pub fn iterate_phi(phi: &ComparisonFunction, t: f64, n: u64) -> f64 {
    let mut x = t;
    for _ in 0..n {
        if x == 0.0 {
            break;
        }
        x = phi.eval(x);
    }
    x
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MatkowskiStatus {
    /// Iterates dropped below the ladder floor after `steps` applications.
    Verified { steps: u64 },
    /// Still at `last` after `n_cap` applications. `φ^n(t) -> 0` cannot be
    /// refuted by finitely many iterates, so there is no failing verdict.
    Inconclusive { last: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatkowskiPoint {
    pub t: f64,
    pub status: MatkowskiStatus,
}

impl MatkowskiPoint {
    pub fn verified(&self) -> bool {
        matches!(self.status, MatkowskiStatus::Verified { .. })
    }
}

/// Checks `φ^n(t) -> 0` at each grid point: iterates must fall below every
/// level of `eps_ladder` within `n_cap` steps.
pub fn check_matkowski(phi: &ComparisonFunction, t_grid: &[f64], n_cap: u64, eps_ladder: &[f64]) -> Vec<MatkowskiPoint> {
    check_matkowski_with(phi, t_grid, n_cap, eps_ladder, Execution::default())
}

pub fn check_matkowski_with(
    phi: &ComparisonFunction,
    t_grid: &[f64],
    n_cap: u64,
    eps_ladder: &[f64],
    exec: Execution,
) -> Vec<MatkowskiPoint> {
    assert!(n_cap >= 1, "n_cap must be at least 1");
    // falling below the smallest level falls below all of them
    let floor = eps_ladder.iter().copied().fold(f64::INFINITY, f64::min);
    exec.map(t_grid, |&t| {
        let mut x = t;
        let mut steps = 0;
        while !(x < floor) && steps < n_cap {
            x = phi.eval(x);
            steps += 1;
        }
        let status = if x < floor { MatkowskiStatus::Verified { steps } } else { MatkowskiStatus::Inconclusive { last: x } };
        MatkowskiPoint { t, status }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesStatus {
    Converged,
    Diverging,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesResult {
    /// Partial sum `Σ_{n < truncated_at} φ^n(t)`.
    pub value: f64,
    pub truncated_at: u64,
    /// Geometric estimate of the omitted tail; zero when iterates reached 0.
    pub tail_estimate: f64,
    pub status: SeriesStatus,
}

impl SeriesResult {
    /// `value + tail_estimate`.
    pub fn upper_estimate(&self) -> f64 {
        self.value + self.tail_estimate
    }
}

/// Knobs for [`phi_series_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesOptions {
    /// Partial sums beyond this with nonvanishing terms count as divergence.
    pub blow_up: f64,
    /// A term ratio at or above `1 - stall_gap` counts as a stalled step.
    pub stall_gap: f64,
    /// Consecutive stalled steps that flag divergence.
    pub stall_run: u64,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions { blow_up: 1e12, stall_gap: 1e-9, stall_run: 10_000 }
    }
}

/// Sums `Φ(t) = Σ_n φ^n(t)` with default [`SeriesOptions`].
pub fn phi_series(phi: &ComparisonFunction, t: f64, tol: &Tolerance, n_cap: u64) -> SeriesResult {
    phi_series_with(phi, t, tol, n_cap, &SeriesOptions::default())
}

/// Sums `Φ(t) = Σ_n φ^n(t)`.
///
/// Converged once the observed ratio `r = φ^{n+1}(t) / φ^n(t)` is below one and
/// the geometric tail `φ^{n+1}(t) / (1 - r)` is within `tol.abs_tol`. Diverging
/// on blow-up or a long run of stalled ratios. Harmonic-type decay, where the
/// ratio creeps up to one, ends Inconclusive.
pub fn phi_series_with(
    phi: &ComparisonFunction,
    t: f64,
    tol: &Tolerance,
    n_cap: u64,
    opts: &SeriesOptions,
) -> SeriesResult {
    let mut sum = 0.0;
    let mut term = t;
    let mut stalled = 0u64;
    for n in 0..n_cap {
        if term == 0.0 {
            return SeriesResult { value: sum, truncated_at: n, tail_estimate: 0.0, status: SeriesStatus::Converged };
        }
        sum += term;
        let next = phi.eval(term);
        if next.is_nan() {
            break;
        }
        let ratio = next / term;
        if ratio < 1.0 {
            let tail = next / (1.0 - ratio);
            if tail <= tol.abs_tol {
                return SeriesResult {
                    value: sum,
                    truncated_at: n + 1,
                    tail_estimate: tail,
                    status: SeriesStatus::Converged,
                };
            }
        }
        if sum > opts.blow_up && next > tol.abs_tol {
            return SeriesResult { value: sum, truncated_at: n + 1, tail_estimate: f64::INFINITY, status: SeriesStatus::Diverging };
        }
        stalled = if ratio >= 1.0 - opts.stall_gap { stalled + 1 } else { 0 };
        if stalled >= opts.stall_run {
            return SeriesResult { value: sum, truncated_at: n + 1, tail_estimate: f64::INFINITY, status: SeriesStatus::Diverging };
        }
        term = next;
    }
    SeriesResult { value: sum, truncated_at: n_cap, tail_estimate: f64::NAN, status: SeriesStatus::Inconclusive }
}
