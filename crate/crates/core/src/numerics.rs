//! Extended reals and bisection on monotone functions.
//!
//! The codomain of a Wardowski function is `R ∪ {-∞}`. [`ExtReal`] holds
//! negative infinity as its own variant.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Sub};

use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("extended real cannot hold {0}")]
    InvalidValue(f64),
    #[error("tolerance requires abs_tol > 0 or rel_tol > 0 and at least one bisection step")]
    InvalidTolerance,
    #[error("invalid bracket [{lo}, {hi}]")]
    InvalidBracket { lo: f64, hi: f64 },
    #[error("monotone map exceeds the threshold at the lower end of the bracket")]
    PreconditionViolated,
}

/// A real number or negative infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    NegInf,
    Finite(f64),
}

impl ExtReal {
    /// Converts a float. `-inf` maps to [`ExtReal::NegInf`]; NaN and `+inf` are rejected.
    pub fn new(value: f64) -> Result<Self, NumericsError> {
        if value.is_nan() || value == f64::INFINITY {
            Err(NumericsError::InvalidValue(value))
        } else if value == f64::NEG_INFINITY {
            Ok(ExtReal::NegInf)
        } else {
            Ok(ExtReal::Finite(value))
        }
    }

    /// Like [`ExtReal::new`] but panics on NaN or `+inf`.
    pub fn from_f64(value: f64) -> Self {
        Self::new(value).expect("extended real from NaN or +inf")
    }

    pub fn is_neg_inf(self) -> bool {
        matches!(self, ExtReal::NegInf)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::NegInf => None,
        }
    }

    /// Lossy conversion back to a float, `NegInf` becoming `f64::NEG_INFINITY`.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::Finite(v) => v,
            ExtReal::NegInf => f64::NEG_INFINITY,
        }
    }

    /// Difference of two extended reals when it is a real number.
    ///
    /// `NegInf - NegInf` is undefined and `x - NegInf` is `+∞`, so both yield `None`.
    pub fn checked_sub(self, rhs: ExtReal) -> Option<f64> {
        match (self, rhs) {
            (ExtReal::Finite(x), ExtReal::Finite(y)) => Some(x - y),
            _ => None,
        }
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtReal::NegInf, ExtReal::NegInf) => Ordering::Equal,
            (ExtReal::NegInf, ExtReal::Finite(_)) => Ordering::Less,
            (ExtReal::Finite(_), ExtReal::NegInf) => Ordering::Greater,
            // finite values are never NaN
            (ExtReal::Finite(x), ExtReal::Finite(y)) => x.total_cmp(y),
        }
    }
}

impl Add<f64> for ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: f64) -> ExtReal {
        debug_assert!(rhs.is_finite());
        match self {
            ExtReal::NegInf => ExtReal::NegInf,
            ExtReal::Finite(v) => ExtReal::from_f64(v + rhs),
        }
    }
}

impl Sub<f64> for ExtReal {
    type Output = ExtReal;

    fn sub(self, rhs: f64) -> ExtReal {
        self + (-rhs)
    }
}

impl From<f64> for ExtReal {
    fn from(value: f64) -> Self {
        ExtReal::from_f64(value)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => f.write_str("-inf"),
            ExtReal::Finite(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtReal::NegInf => serializer.serialize_str("-inf"),
            ExtReal::Finite(v) => serializer.serialize_f64(*v),
        }
    }
}

/// Total order on extended reals.
pub fn ext_compare(x: ExtReal, y: ExtReal) -> Ordering {
    x.cmp(&y)
}

/// Stopping rule for bisection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_bisection_steps: u32,
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64, max_bisection_steps: u32) -> Result<Self, NumericsError> {
        let valid = abs_tol >= 0.0
            && rel_tol >= 0.0
            && abs_tol.is_finite()
            && rel_tol.is_finite()
            && (abs_tol > 0.0 || rel_tol > 0.0)
            && max_bisection_steps > 0;
        if valid {
            Ok(Tolerance { abs_tol, rel_tol, max_bisection_steps })
        } else {
            Err(NumericsError::InvalidTolerance)
        }
    }

    /// Bracket width at which bisection may stop near `x`.
    pub fn width_at(&self, x: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * x.abs())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs_tol: 1e-10, rel_tol: 0.0, max_bisection_steps: 200 }
    }
}

/// Result of [`monotone_sup_below`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupEstimate {
    /// Lower end of the final bracket; always a member of the sublevel set.
    pub value: f64,
    /// Upper end of the final bracket. Equals `value` when the whole interval qualifies.
    pub upper: f64,
    pub steps: u32,
    /// Set when the step budget ran out before the bracket reached tolerance.
    pub budget_exhausted: bool,
}

impl SupEstimate {
    pub fn width(&self) -> f64 {
        self.upper - self.value
    }
}

/// Locates `sup { s ∈ [lo, hi] : g(s) <= threshold }` for nondecreasing `g`.
///
/// Bisection keeps `g(lower) <= threshold < g(upper)`, so the reported value is
/// feasible and the true supremum lies in `[value, upper]`. Jumps in `g` are
/// fine: the bracket still closes on the edge of the sublevel set.
pub fn monotone_sup_below<G>(
    g: G,
    threshold: ExtReal,
    lo: f64,
    hi: f64,
    tol: &Tolerance,
) -> Result<SupEstimate, NumericsError>
where
    G: Fn(f64) -> ExtReal,
{
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(NumericsError::InvalidBracket { lo, hi });
    }
    if g(lo) > threshold {
        return Err(NumericsError::PreconditionViolated);
    }
    if g(hi) <= threshold {
        return Ok(SupEstimate { value: hi, upper: hi, steps: 0, budget_exhausted: false });
    }

    let (mut lower, mut upper) = (lo, hi);
    let mut steps = 0;
    while upper - lower > tol.width_at(upper) {
        if steps == tol.max_bisection_steps {
            return Ok(SupEstimate { value: lower, upper, steps, budget_exhausted: true });
        }
        let mid = lower + 0.5 * (upper - lower);
        if mid <= lower || mid >= upper {
            // adjacent floats
            break;
        }
        if g(mid) <= threshold {
            lower = mid;
        } else {
            upper = mid;
        }
        steps += 1;
    }
    Ok(SupEstimate { value: lower, upper, steps, budget_exhausted: false })
}
