//! q-Pochhammer products and geometric q-series with certified truncation.
//!
//! Products are never multiplied out. Each factor contributes `log(1 - t)`
//! to a compensated sum, and summation stops at the first term count whose
//! tail bound drops below the policy epsilon.

use crate::error::{Error, Result};

/// Which of the two q-gamma definitions a base belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    LessThanOne,
    GreaterThanOne,
}

/// A validated base `q`: finite, positive and different from 1.
///
/// `ln q` is cached so that the reciprocal base can reuse it exactly
/// (`ln(1/q) = -ln q` without a second rounding of `1/q`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QParameter {
    q: f64,
    ln_q: f64,
    branch: Branch,
}

impl QParameter {
    pub fn new(q: f64) -> Result<Self> {
        if !q.is_finite() || q <= 0.0 {
            return Err(Error::domain(format!("q must be finite and positive, got {q}")));
        }
        if q == 1.0 {
            return Err(Error::domain("q = 1 is excluded; use the classical gamma function"));
        }
        let branch = if q < 1.0 {
            Branch::LessThanOne
        } else {
            Branch::GreaterThanOne
        };
        Ok(QParameter {
            q,
            ln_q: q.ln(),
            branch,
        })
    }

    /// Shorthand for a base that must lie in (0, 1).
    pub fn less_than_one(q: f64) -> Result<Self> {
        let p = QParameter::new(q)?;
        p.expect_branch(Branch::LessThanOne)?;
        Ok(p)
    }

    /// Shorthand for a base that must exceed 1.
    pub fn greater_than_one(q: f64) -> Result<Self> {
        let p = QParameter::new(q)?;
        p.expect_branch(Branch::GreaterThanOne)?;
        Ok(p)
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn ln_q(&self) -> f64 {
        self.ln_q
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    /// The base `1/q`, on the opposite branch.
    pub fn reciprocal(&self) -> Self {
        QParameter {
            q: 1.0 / self.q,
            ln_q: -self.ln_q,
            branch: match self.branch {
                Branch::LessThanOne => Branch::GreaterThanOne,
                Branch::GreaterThanOne => Branch::LessThanOne,
            },
        }
    }

    /// `1 - q` for a base below one, accurate even when `q` is close to 1.
    pub(crate) fn one_minus_q(&self) -> f64 {
        -self.ln_q.exp_m1()
    }

    pub(crate) fn expect_branch(&self, branch: Branch) -> Result<()> {
        if self.branch == branch {
            Ok(())
        } else {
            Err(Error::domain(match branch {
                Branch::LessThanOne => format!("this operation requires 0 < q < 1, got q = {}", self.q),
                Branch::GreaterThanOne => format!("this operation requires q > 1, got q = {}", self.q),
            }))
        }
    }
}

/// Stopping rule shared by every infinite product and series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    /// Tolerance on the tail bound (absolute on log values, hence relative on products).
    pub epsilon: f64,
    /// Hard cap on the number of terms of any single series.
    pub max_terms: u64,
    /// Largest base in (0,1) the policy accepts. Bases above it are rejected
    /// with [`Error::BaseNearOne`] before any summation starts.
    pub max_base: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            epsilon: 1e-13,
            max_terms: 10_000_000,
            max_base: 0.9999,
        }
    }
}

impl TruncationPolicy {
    pub fn new(epsilon: f64, max_terms: u64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::domain(format!("epsilon must lie in (0,1), got {epsilon}")));
        }
        if max_terms == 0 {
            return Err(Error::domain("max_terms must be at least 1"));
        }
        Ok(TruncationPolicy {
            epsilon,
            max_terms,
            ..TruncationPolicy::default()
        })
    }

    /// Defaults for the slowly converging classical digamma series, whose
    /// tail decays like 1/N.
    pub fn digamma_series_default() -> Self {
        TruncationPolicy {
            epsilon: 1e-7,
            max_terms: 100_000_000,
            ..TruncationPolicy::default()
        }
    }

    pub fn with_max_base(self, max_base: f64) -> Result<Self> {
        if !(max_base > 0.0 && max_base <= 1.0) {
            return Err(Error::domain(format!("max_base must lie in (0,1], got {max_base}")));
        }
        Ok(TruncationPolicy { max_base, ..self })
    }

    fn check_base(&self, base: &QParameter) -> Result<()> {
        base.expect_branch(Branch::LessThanOne)?;
        if base.q > self.max_base {
            return Err(Error::BaseNearOne {
                q: base.q,
                max_base: self.max_base,
            });
        }
        Ok(())
    }
}

/// Outcome of a truncated product or series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    /// `ln |value|`; `-inf` when the value is exactly zero.
    pub log_value: f64,
    /// Bound on the absolute error of `log_value` (of `value` for plain sums):
    /// the tail bound plus accumulated rounding.
    pub error_bound: f64,
    pub terms_used: u64,
}

impl EvalResult {
    pub(crate) fn from_log(sign: f64, log_value: f64, error_bound: f64, terms_used: u64) -> Self {
        EvalResult {
            value: sign * log_value.exp(),
            log_value,
            error_bound,
            terms_used,
        }
    }

    /// The log is `ln(value)` only for positive results; `value` itself may
    /// have underflowed while `log_value` stays finite.
    pub fn log_defined(&self) -> bool {
        self.value.is_sign_positive() && self.log_value > f64::NEG_INFINITY
    }
}

/// Neumaier compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
    magnitude: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        self.magnitude += x.abs();
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }

    /// Bound on the accumulated rounding error, allowing a few ulps per term
    /// for the term itself and for the compensated accumulation.
    pub(crate) fn rounding_bound(&self) -> f64 {
        4.0 * f64::EPSILON * self.magnitude
    }
}

/// `ln(1 - e^y)` for `y < 0`.
#[inline]
pub(crate) fn ln_one_minus_exp(y: f64) -> f64 {
    if y < -std::f64::consts::LN_2 {
        (-y.exp()).ln_1p()
    } else {
        (-y.exp_m1()).ln()
    }
}

/// `e^y / (1 - e^y)` for `y < 0`, i.e. `t/(1-t)` with `t = q^s`.
#[inline]
pub(crate) fn geometric_ratio(y: f64) -> f64 {
    y.exp() / -y.exp_m1()
}

/// Bound on `Σ_{n≥N} t_n/(1-t_n)` when `t_n = t_N q^{n-N}` and `t_N < 1`.
#[inline]
fn tail_bound(t_n: f64, one_minus_q: f64) -> f64 {
    t_n / (one_minus_q * (1.0 - t_n))
}

/// `(a; q)_∞ = ∏_{n≥0} (1 - a qⁿ)` for a base `0 < q < 1` and `a ≤ 1`.
///
/// Callers on the `q > 1` branch pass `base.reciprocal()`. For `a = 1` the
/// product is exactly zero and the result carries `log_value = -inf`.
pub fn qpochhammer_inf(a: f64, base: QParameter, policy: &TruncationPolicy) -> Result<EvalResult> {
    policy.check_base(&base)?;
    if !a.is_finite() || a > 1.0 {
        return Err(Error::domain(format!("qpochhammer_inf requires finite a <= 1, got {a}")));
    }
    if a == 1.0 {
        return Ok(EvalResult {
            value: 0.0,
            log_value: f64::NEG_INFINITY,
            error_bound: 0.0,
            terms_used: 1,
        });
    }

    let q = base.q;
    let one_minus_q = base.one_minus_q();
    let mut sum = CompensatedSum::default();
    let mut t = a;
    let mut n = 0u64;
    loop {
        let mag = t.abs();
        if mag < 1.0 {
            let bound = tail_bound(mag, one_minus_q);
            if bound < policy.epsilon {
                return Ok(EvalResult::from_log(1.0, sum.value(), bound + sum.rounding_bound(), n));
            }
        }
        if n == policy.max_terms {
            let bound = if mag < 1.0 {
                tail_bound(mag, one_minus_q)
            } else {
                f64::INFINITY
            };
            return Err(Error::Convergence { terms: n, bound });
        }
        sum.add((-t).ln_1p());
        t *= q;
        n += 1;
    }
}

/// `(q^s; q)_∞` for real `s`, with each factor evaluated from the exponent
/// `(s+n)·ln q` so that factors close to zero keep full relative accuracy.
///
/// Negative `s` is allowed: factors with `s + n < 0` are negative and the
/// sign is carried in `value`. A vanishing factor (`s` a nonpositive integer)
/// gives a zero result.
pub fn qpochhammer_pow(s: f64, base: QParameter, policy: &TruncationPolicy) -> Result<EvalResult> {
    policy.check_base(&base)?;
    if !s.is_finite() {
        return Err(Error::domain(format!("exponent must be finite, got {s}")));
    }
    let ln_q = base.ln_q;
    let one_minus_q = base.one_minus_q();
    let mut sum = CompensatedSum::default();
    let mut negative_factors = 0u64;
    let mut n = 0u64;
    loop {
        let e = s + n as f64;
        if e > 0.0 {
            let t = (e * ln_q).exp();
            let bound = tail_bound(t, one_minus_q);
            if bound < policy.epsilon {
                let sign = if negative_factors.is_multiple_of(2) { 1.0 } else { -1.0 };
                return Ok(EvalResult::from_log(sign, sum.value(), bound + sum.rounding_bound(), n));
            }
        }
        if n == policy.max_terms {
            let bound = if e > 0.0 {
                tail_bound((e * ln_q).exp(), one_minus_q)
            } else {
                f64::INFINITY
            };
            return Err(Error::Convergence { terms: n, bound });
        }
        let y = e * ln_q;
        if e > 0.0 {
            sum.add(ln_one_minus_exp(y));
        } else if e < 0.0 {
            // 1 - q^e < 0
            negative_factors += 1;
            sum.add(y.exp_m1().ln());
        } else {
            return Ok(EvalResult {
                value: 0.0,
                log_value: f64::NEG_INFINITY,
                error_bound: 0.0,
                terms_used: n + 1,
            });
        }
        n += 1;
    }
}

/// `Σ_{n≥0} q^{s+n} / (1 - q^{s+n})` for `s > 0` and `0 < q < 1`.
///
/// The sum has positive terms, so `epsilon` is applied relative to the
/// partial sum: summation stops once the tail bound is at most
/// `epsilon · S_N`. `error_bound` bounds the absolute error of `value`;
/// `log_value` is `ln(value)`.
pub fn geometric_tail_sum(
    x_shift: f64,
    base: QParameter,
    policy: &TruncationPolicy,
) -> Result<EvalResult> {
    policy.check_base(&base)?;
    if !(x_shift > 0.0 && x_shift.is_finite()) {
        return Err(Error::domain(format!("x_shift must be finite and positive, got {x_shift}")));
    }
    let ln_q = base.ln_q;
    let one_minus_q = base.one_minus_q();
    let mut sum = CompensatedSum::default();
    let mut n = 0u64;
    loop {
        let y = (x_shift + n as f64) * ln_q;
        let bound = tail_bound(y.exp(), one_minus_q);
        let partial = sum.value();
        if bound <= policy.epsilon * partial || (n == 0 && bound == 0.0) {
            return Ok(EvalResult {
                value: partial,
                log_value: partial.ln(),
                error_bound: bound + sum.rounding_bound(),
                terms_used: n,
            });
        }
        if n == policy.max_terms {
            return Err(Error::Convergence { terms: n, bound });
        }
        sum.add(geometric_ratio(y));
        n += 1;
    }
}
