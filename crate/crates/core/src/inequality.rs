//! The ratio `f(x) = Γ_q(1+x)^a / Γ_q(1+ax)`, its logarithm `g` and
//! derivative `g'`, and grid certification of
//!
//! ```text
//! 1/Γ_q(1+a) ≤ f(x) ≤ 1,     0 < q < 1, a ≥ 1, x ∈ [0, 1]
//! ```
//!
//! plus the classical analogue with Euler's Γ. Margins are formed from log
//! differences and only exponentiated for reporting, so a large `a` where
//! `f` underflows still yields well-scaled margins.

use rayon::prelude::*;

use crate::classical::{factorial, ln_euler_gamma};
use crate::error::{Error, Result};
use crate::qgamma::{ln_qgamma, qdigamma};
use crate::qseries::{geometric_ratio, Branch, QParameter, TruncationPolicy};

/// Default tolerance for inequality margins.
pub const DEFAULT_MARGIN_TOL: f64 = 1e-10;
/// Default tolerance for successive steps of the monotonicity check.
pub const DEFAULT_MONOTONE_TOL: f64 = 1e-12;
/// Default seed for randomized property sampling.
pub const DEFAULT_SEED: u64 = 1729;

/// Rectangular (q, a, x) sampling grid; x is uniform on [0,1] with exact endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    q_values: Vec<f64>,
    a_values: Vec<f64>,
    x_count: usize,
}

impl GridSpec {
    pub fn new(q_values: Vec<f64>, a_values: Vec<f64>, x_count: usize) -> Result<Self> {
        if q_values.is_empty() || a_values.is_empty() {
            return Err(Error::domain("grid needs at least one q and one a"));
        }
        if let Some(q) = q_values.iter().find(|q| !(**q > 0.0 && **q < 1.0)) {
            return Err(Error::domain(format!("grid q values must lie in (0,1), got {q}")));
        }
        check_a_values(&a_values)?;
        if x_count < 2 {
            return Err(Error::domain(format!("x_count must be at least 2, got {x_count}")));
        }
        Ok(GridSpec {
            q_values,
            a_values,
            x_count,
        })
    }

    pub fn q_values(&self) -> &[f64] {
        &self.q_values
    }

    pub fn a_values(&self) -> &[f64] {
        &self.a_values
    }

    pub fn x_count(&self) -> usize {
        self.x_count
    }

    pub fn x_values(&self) -> Vec<f64> {
        x_grid(self.x_count)
    }

    /// (q, a) pairs in row order: q outer, a inner.
    fn pairs(&self) -> Vec<(f64, f64)> {
        self.q_values
            .iter()
            .flat_map(|&q| self.a_values.iter().map(move |&a| (q, a)))
            .collect()
    }
}

fn check_a_values(a_values: &[f64]) -> Result<()> {
    if let Some(a) = a_values.iter().find(|a| !(**a >= 1.0 && a.is_finite())) {
        return Err(Error::domain(format!("a values must be finite and >= 1, got {a}")));
    }
    Ok(())
}

/// `x_count` uniform points on [0,1]; the first is exactly 0 and the last exactly 1.
pub fn x_grid(x_count: usize) -> Vec<f64> {
    let last = (x_count - 1) as f64;
    (0..x_count).map(|i| i as f64 / last).collect()
}

fn check_args(x: f64, a: f64, q: &QParameter) -> Result<()> {
    q.expect_branch(Branch::LessThanOne)?;
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::domain(format!("x must be finite and >= 0, got {x}")));
    }
    if !(a >= 1.0 && a.is_finite()) {
        return Err(Error::domain(format!("a must be finite and >= 1, got {a}")));
    }
    Ok(())
}

/// `g(x) = a·ln Γ_q(1+x) - ln Γ_q(1+ax)`.
pub fn log_ratio_g(x: f64, a: f64, q: QParameter, policy: &TruncationPolicy) -> Result<f64> {
    check_args(x, a, &q)?;
    if a == 1.0 || x == 0.0 {
        return Ok(0.0);
    }
    Ok(a * ln_qgamma(1.0 + x, q, policy)? - ln_qgamma(1.0 + a * x, q, policy)?)
}

/// `f(x) = Γ_q(1+x)^a / Γ_q(1+ax)`, evaluated as `exp(g(x))`.
pub fn ratio_f(x: f64, a: f64, q: QParameter, policy: &TruncationPolicy) -> Result<f64> {
    log_ratio_g(x, a, q, policy).map(f64::exp)
}

/// `g'(x) = a·ψ_q(1+x) - a·ψ_q(1+ax)`, where ψ_q is [`qdigamma`].
pub fn g_prime(x: f64, a: f64, q: QParameter, policy: &TruncationPolicy) -> Result<f64> {
    check_args(x, a, &q)?;
    if a == 1.0 || x == 0.0 {
        return Ok(0.0);
    }
    Ok(a * qdigamma(1.0 + x, q, policy)? - a * qdigamma(1.0 + a * x, q, policy)?)
}

/// One term of the difference of the two q-digamma series:
///
/// ```text
/// q^{1+ax+n}/(1-q^{1+ax+n}) - q^{1+x+n}/(1-q^{1+x+n})
/// ```
///
/// Nonpositive for `x ≥ 0`, `a ≥ 1`.
pub fn termwise_gap(n: u64, x: f64, a: f64, q: f64) -> Result<f64> {
    let q = QParameter::less_than_one(q)?;
    check_args(x, a, &q)?;
    let n = n as f64;
    let far = (1.0 + a * x + n) * q.ln_q();
    let near = (1.0 + x + n) * q.ln_q();
    Ok(geometric_ratio(far) - geometric_ratio(near))
}

/// A sampled (q, a, x) point with its margins against both bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointRecord {
    pub q: f64,
    pub a: f64,
    pub x: f64,
    pub f_value: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    /// `f - lower_bound`
    pub lower_margin: f64,
    /// `upper_bound - f`
    pub upper_margin: f64,
}

impl PointRecord {
    /// Builds a record from `ln f` and `ln lower_bound`; the upper bound is 1.
    fn from_logs(q: f64, a: f64, x: f64, log_f: f64, log_lower: f64) -> Self {
        let lower_bound = log_lower.exp();
        PointRecord {
            q,
            a,
            x,
            f_value: log_f.exp(),
            lower_bound,
            upper_bound: 1.0,
            // + 0.0 folds -0.0 into 0.0 so printed margins compare bitwise
            lower_margin: lower_bound * (log_f - log_lower).exp_m1() + 0.0,
            upper_margin: -log_f.exp_m1() + 0.0,
        }
    }
}

/// (q, a, x) location of an extremal margin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub q: f64,
    pub a: f64,
    pub x: f64,
}

/// Aggregate of per-point margins; [`MarginSummary::merge`] is associative so
/// partial summaries from independent workers can be combined in any grouping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginSummary {
    pub min_lower_margin: f64,
    pub argmin_lower: Option<GridPoint>,
    pub min_upper_margin: f64,
    pub argmin_upper: Option<GridPoint>,
    /// Largest `|f - lower|` over the x = 1 points.
    pub max_endpoint_gap: f64,
}

impl Default for MarginSummary {
    fn default() -> Self {
        MarginSummary {
            min_lower_margin: f64::INFINITY,
            argmin_lower: None,
            min_upper_margin: f64::INFINITY,
            argmin_upper: None,
            max_endpoint_gap: 0.0,
        }
    }
}

impl MarginSummary {
    pub fn from_point(p: &PointRecord) -> Self {
        let at = Some(GridPoint { q: p.q, a: p.a, x: p.x });
        MarginSummary {
            min_lower_margin: p.lower_margin,
            argmin_lower: at,
            min_upper_margin: p.upper_margin,
            argmin_upper: at,
            max_endpoint_gap: if p.x == 1.0 { p.lower_margin.abs() } else { 0.0 },
        }
    }

    /// Ties keep the left operand's location, so folding in grid order
    /// reports the first minimizer.
    pub fn merge(self, other: Self) -> Self {
        let (min_lower_margin, argmin_lower) = if other.min_lower_margin < self.min_lower_margin {
            (other.min_lower_margin, other.argmin_lower)
        } else {
            (self.min_lower_margin, self.argmin_lower)
        };
        let (min_upper_margin, argmin_upper) = if other.min_upper_margin < self.min_upper_margin {
            (other.min_upper_margin, other.argmin_upper)
        } else {
            (self.min_upper_margin, self.argmin_upper)
        };
        MarginSummary {
            min_lower_margin,
            argmin_lower,
            min_upper_margin,
            argmin_upper,
            max_endpoint_gap: self.max_endpoint_gap.max(other.max_endpoint_gap),
        }
    }

    pub fn from_points<'a>(points: impl IntoIterator<Item = &'a PointRecord>) -> Self {
        points
            .into_iter()
            .map(MarginSummary::from_point)
            .fold(MarginSummary::default(), MarginSummary::merge)
    }
}

/// Result of a grid certification run.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub points: Vec<PointRecord>,
    pub summary: MarginSummary,
    pub tol: f64,
    pub seed: u64,
    /// Set when evaluation stopped early; `points` then holds the rows
    /// completed before the failure, in grid order.
    pub aborted: Option<Error>,
    /// For integer `a = n` in classical mode: least margin of `f` over `1/n!`.
    pub min_factorial_margin: Option<f64>,
}

impl InequalityReport {
    fn build(points: Vec<PointRecord>, tol: f64, aborted: Option<Error>) -> Self {
        InequalityReport {
            summary: MarginSummary::from_points(&points),
            points,
            tol,
            seed: DEFAULT_SEED,
            aborted,
            min_factorial_margin: None,
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        InequalityReport { seed, ..self }
    }

    pub fn is_complete(&self) -> bool {
        self.aborted.is_none()
    }

    pub fn min_lower_margin(&self) -> f64 {
        self.summary.min_lower_margin
    }

    pub fn min_upper_margin(&self) -> f64 {
        self.summary.min_upper_margin
    }

    /// Both bounds hold to within `tol` at every point of a complete run.
    pub fn pass(&self) -> bool {
        self.is_complete()
            && !self.points.is_empty()
            && self.summary.min_lower_margin >= -self.tol
            && self.summary.min_upper_margin >= -self.tol
            && self.min_factorial_margin.is_none_or(|m| m >= -self.tol)
    }

    /// Whether every x = 1 point meets the lower bound to within `tol`.
    pub fn lower_bound_attained(&self) -> bool {
        self.points.iter().any(|p| p.x == 1.0) && self.summary.max_endpoint_gap <= self.tol
    }
}

fn evaluate_pair(
    q: f64,
    a: f64,
    xs: &[f64],
    policy: &TruncationPolicy,
) -> std::result::Result<Vec<PointRecord>, (Vec<PointRecord>, Error)> {
    let base = match QParameter::less_than_one(q) {
        Ok(b) => b,
        Err(e) => return Err((Vec::new(), e)),
    };
    let log_lower = match ln_qgamma(1.0 + a, base, policy) {
        Ok(l) => -l,
        Err(e) => return Err((Vec::new(), e)),
    };
    let mut rows = Vec::with_capacity(xs.len());
    for &x in xs {
        match log_ratio_g(x, a, base, policy) {
            Ok(g) => rows.push(PointRecord::from_logs(q, a, x, g, log_lower)),
            Err(e) => return Err((rows, e)),
        }
    }
    Ok(rows)
}

/// Evaluates `f` at every grid point against `1/Γ_q(1+a)` and 1.
///
/// (q, a) pairs are evaluated in parallel; rows come back in grid order.
/// A failed evaluation stops the report at that point and records the error.
pub fn verify_inequality(grid: &GridSpec, policy: &TruncationPolicy, tol: f64) -> InequalityReport {
    let xs = grid.x_values();
    let results: Vec<_> = grid
        .pairs()
        .into_par_iter()
        .map(|(q, a)| evaluate_pair(q, a, &xs, policy))
        .collect();

    let mut points = Vec::with_capacity(results.len() * xs.len());
    let mut aborted = None;
    for r in results {
        match r {
            Ok(rows) => points.extend(rows),
            Err((rows, e)) => {
                points.extend(rows);
                aborted = Some(e);
                break;
            }
        }
    }
    InequalityReport::build(points, tol, aborted)
}

/// Where a monotonicity check first failed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub q: f64,
    pub a: f64,
    /// Index of the later point of the offending step.
    pub index: usize,
    pub x_prev: f64,
    pub x_next: f64,
    pub f_prev: f64,
    pub f_next: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotonicityReport {
    pub pass: bool,
    pub first_violation: Option<Violation>,
}

/// Index of the first step with `values[i] > values[i-1] + tol`.
pub fn first_increase(values: &[f64], tol: f64) -> Option<usize> {
    values.windows(2).position(|w| w[1] > w[0] + tol).map(|i| i + 1)
}

/// Checks that `f` is nonincreasing along the x grid for each (q, a).
pub fn verify_monotonicity(grid: &GridSpec, policy: &TruncationPolicy, tol: f64) -> Result<MonotonicityReport> {
    verify_monotonicity_with(grid, tol, |q, a, x| {
        ratio_f(x, a, QParameter::less_than_one(q)?, policy)
    })
}

/// [`verify_monotonicity`] over an arbitrary evaluator `f(q, a, x)`.
pub fn verify_monotonicity_with<F>(grid: &GridSpec, tol: f64, f: F) -> Result<MonotonicityReport>
where
    F: Fn(f64, f64, f64) -> Result<f64> + Sync,
{
    let xs = grid.x_values();
    let per_pair: Vec<Result<Option<Violation>>> = grid
        .pairs()
        .into_par_iter()
        .map(|(q, a)| {
            let values = xs.iter().map(|&x| f(q, a, x)).collect::<Result<Vec<_>>>()?;
            Ok(first_increase(&values, tol).map(|i| Violation {
                q,
                a,
                index: i,
                x_prev: xs[i - 1],
                x_next: xs[i],
                f_prev: values[i - 1],
                f_next: values[i],
            }))
        })
        .collect();

    let mut first_violation = None;
    for r in per_pair {
        if let Some(v) = r? {
            first_violation = Some(v);
            break;
        }
    }
    Ok(MonotonicityReport {
        pass: first_violation.is_none(),
        first_violation,
    })
}

/// The classical inequality `1/Γ(1+a) ≤ Γ(1+x)^a / Γ(1+ax) ≤ 1` on an
/// x grid over [0,1]. Rows carry `q = 1`.
///
/// Integer `a = n` is additionally checked against `1/n!` formed by
/// integer multiplication.
pub fn verify_classical(a_values: &[f64], x_count: usize, tol: f64) -> Result<InequalityReport> {
    if a_values.is_empty() {
        return Err(Error::domain("need at least one a value"));
    }
    check_a_values(a_values)?;
    if x_count < 2 {
        return Err(Error::domain(format!("x_count must be at least 2, got {x_count}")));
    }
    let xs = x_grid(x_count);
    let mut points = Vec::with_capacity(a_values.len() * x_count);
    let mut min_factorial_margin: Option<f64> = None;
    for &a in a_values {
        let log_lower = -ln_euler_gamma(1.0 + a)?;
        let inv_factorial = (a.fract() == 0.0 && a <= 170.0).then(|| 1.0 / factorial(a as u32));
        for &x in &xs {
            let log_f = if a == 1.0 || x == 0.0 {
                0.0
            } else {
                a * ln_euler_gamma(1.0 + x)? - ln_euler_gamma(1.0 + a * x)?
            };
            let rec = PointRecord::from_logs(1.0, a, x, log_f, log_lower);
            if let Some(inv) = inv_factorial {
                let m = rec.f_value - inv;
                min_factorial_margin = Some(min_factorial_margin.map_or(m, |cur| cur.min(m)));
            }
            points.push(rec);
        }
    }
    let mut report = InequalityReport::build(points, tol, None);
    report.min_factorial_margin = min_factorial_margin;
    Ok(report)
}
