//! Jackson's q-gamma function on both branches and the q-digamma series.
//!
//! For `0 < q < 1`:
//!
//! ```text
//! Γ_q(x) = (q;q)_∞ / (q^x;q)_∞ · (1-q)^{1-x}
//! ```
//!
//! and for `q > 1`, with `p = 1/q`:
//!
//! ```text
//! Γ_q(x) = (p;p)_∞ / (p^x;p)_∞ · (q-1)^{1-x} · q^{x(x-1)/2}
//! ```

use crate::error::{Error, Result};
use crate::qseries::{geometric_tail_sum, qpochhammer_pow, Branch, EvalResult, QParameter, TruncationPolicy};

/// Distance from a nonpositive integer below which an argument is treated as a pole.
pub const POLE_TOLERANCE: f64 = 1e-12;

/// A finite argument that is not a pole of Γ_q.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct GammaArgument(f64);

impl GammaArgument {
    pub fn new(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::domain(format!("argument must be finite, got {x}")));
        }
        if x <= POLE_TOLERANCE && (x - x.round()).abs() <= POLE_TOLERANCE {
            return Err(Error::Pole { x });
        }
        Ok(GammaArgument(x))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Γ_q(x), dispatching on the branch of `q`.
pub fn qgamma(x: f64, q: QParameter, policy: &TruncationPolicy) -> Result<EvalResult> {
    match q.branch() {
        Branch::LessThanOne => qgamma_lt1(x, q, policy),
        Branch::GreaterThanOne => qgamma_gt1(x, q, policy),
    }
}

/// `ln |Γ_q(x)|`.
pub fn ln_qgamma(x: f64, q: QParameter, policy: &TruncationPolicy) -> Result<f64> {
    qgamma(x, q, policy).map(|r| r.log_value)
}

/// The ratio `(p;p)_∞ / (p^x;p)_∞` in log form, for a base `p < 1`.
fn pochhammer_ratio(x: f64, base: QParameter, policy: &TruncationPolicy) -> Result<(f64, f64, f64, u64)> {
    let num = qpochhammer_pow(1.0, base, policy)?;
    let den = qpochhammer_pow(x, base, policy)?;
    // den.value may underflow for bases near 1; only an exact zero factor is a pole
    if den.log_value == f64::NEG_INFINITY {
        return Err(Error::Pole { x });
    }
    Ok((
        num.log_value - den.log_value,
        den.value.signum(),
        num.error_bound + den.error_bound,
        num.terms_used.max(den.terms_used),
    ))
}

/// Γ_q(x) for `0 < q < 1`.
///
/// `error_bound` is the sum of both product bounds and
/// `terms_used` the larger of the two term counts.
pub fn qgamma_lt1(x: f64, q: QParameter, policy: &TruncationPolicy) -> Result<EvalResult> {
    q.expect_branch(Branch::LessThanOne)?;
    let x = GammaArgument::new(x)?.get();
    let (log_ratio, sign, bound, terms) = pochhammer_ratio(x, q, policy)?;
    let log_value = log_ratio + (1.0 - x) * (-q.q()).ln_1p();
    Ok(EvalResult::from_log(sign, log_value, bound, terms))
}

/// Γ_q(x) for `q > 1`; products run over the reciprocal base.
pub fn qgamma_gt1(x: f64, q: QParameter, policy: &TruncationPolicy) -> Result<EvalResult> {
    q.expect_branch(Branch::GreaterThanOne)?;
    let x = GammaArgument::new(x)?.get();
    let (log_ratio, sign, bound, terms) = pochhammer_ratio(x, q.reciprocal(), policy)?;
    let binomial = x * (x - 1.0) / 2.0;
    let log_value = log_ratio + (1.0 - x) * (q.q() - 1.0).ln() + binomial * q.ln_q();
    Ok(EvalResult::from_log(sign, log_value, bound, terms))
}

/// The q-digamma function `d/dy ln Γ_q(y)` for `y > 0`, `0 < q < 1`:
///
/// ```text
/// -ln(1-q) + ln q · Σ_{n≥0} q^{y+n} / (1 - q^{y+n})
/// ```
///
/// With `y = 1 + a x` the derivative in `x` is `a` times this value; that
/// factor is left to the caller.
pub fn qdigamma(y: f64, q: QParameter, policy: &TruncationPolicy) -> Result<f64> {
    q.expect_branch(Branch::LessThanOne)?;
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::domain(format!("qdigamma requires finite y > 0, got {y}")));
    }
    let tail = geometric_tail_sum(y, q, policy)?;
    Ok(-(-q.q()).ln_1p() + q.ln_q() * tail.value)
}
