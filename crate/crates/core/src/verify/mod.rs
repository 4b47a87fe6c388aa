//! Numerical verification of the variance lower bound `Var[K_n] >= c n`.
//!
//! Exact inputs come from the DP; only the growth slope, intercept and the
//! error term `f(n)` are estimates, carried in a [`Scalar`](crate::Scalar).

mod constant;
mod gaussian;
mod growth;
mod report;
mod ystats;

pub use constant::{compute_c, CTerm, ConstantC};
pub use gaussian::{gaussian_diagnostics, GaussianRow, GaussianTable};
pub use growth::{estimate_growth, fibonacci_slope, minimum_growth_window, GrowthEstimate};
pub use report::{
    build_report, default_gaussian_list, verify_variance_bound, TheoremReport, Verdict,
    DEFAULT_N_MAX,
};
pub use ystats::{find_threshold, y_statistics, Threshold, YStatistics};
