//! Jackson's q-gamma function, the q-Pochhammer symbol and the q-digamma
//! series, with classical gamma/digamma references and a harness that
//! certifies the double inequality
//!
//! ```text
//! 1 / Γ_q(1+a)  ≤  Γ_q(1+x)^a / Γ_q(1+ax)  ≤  1,     0<q<1, a ≥ 1, x ∈ [0,1]
//! ```
//!
//! over parameter grids, together with its classical (q → 1) counterpart.
//!
//! All infinite products are summed in log space under a [`TruncationPolicy`]
//! and every evaluation reports an a posteriori tail bound.

pub mod classical;
pub mod cli;
mod error;
pub mod inequality;
pub mod qgamma;
pub mod qseries;
pub mod report;

pub use classical::{euler_digamma_series, euler_gamma, ln_euler_gamma, EULER_MASCHERONI};
pub use error::{Error, Result};
pub use inequality::{
    g_prime, log_ratio_g, ratio_f, termwise_gap, verify_classical, verify_monotonicity,
    verify_inequality, GridSpec, InequalityReport, MonotonicityReport,
};
pub use qgamma::{ln_qgamma, qdigamma, qgamma, qgamma_gt1, qgamma_lt1, GammaArgument};
pub use qseries::{
    geometric_tail_sum, qpochhammer_inf, qpochhammer_pow, Branch, EvalResult, QParameter,
    TruncationPolicy,
};
