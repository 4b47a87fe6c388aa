use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;

use super::constant::{compute_c, ConstantC};
use super::gaussian::{gaussian_diagnostics, GaussianTable};
use super::growth::{estimate_growth, GrowthEstimate};
use super::ystats::{find_threshold, Threshold};
use crate::ensemble::Ensemble;
use crate::error::{Error, Result};
use crate::recurrence::RecurrenceSpec;
use crate::scalar::Scalar;

/// `n_max` used when none is given.
pub const DEFAULT_N_MAX: usize = 400;

/// Check of `Var[K_n] >= c n` at one `n`.
#[derive(Clone, Debug)]
pub struct Verdict<T> {
    pub n: usize,
    pub mean: BigRational,
    pub variance: BigRational,
    pub c_n: T,
    /// `Var[K_n] - c n`.
    pub margin: T,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct TheoremReport<T> {
    pub spec: RecurrenceSpec,
    pub n_max: usize,
    pub size: u64,
    pub length: usize,
    pub growth: GrowthEstimate<T>,
    pub threshold: Threshold<T>,
    pub constant: ConstantC<T>,
    pub verdicts: Vec<Verdict<T>>,
    /// `Var[K_{n_max}] - Var[K_{n_max-1}]`, an estimate of the variance slope.
    pub slope_c_est: BigRational,
    /// Change of that difference over the last step.
    pub slope_gap: BigRational,
    pub gaussian: GaussianTable,
}

impl<T: Scalar> TheoremReport<T> {
    pub fn first_violation(&self) -> Option<&Verdict<T>> {
        self.verdicts.iter().find(|v| !v.pass)
    }

    pub fn all_pass(&self) -> bool {
        self.first_violation().is_none()
    }

    /// Allowed shortfall of the slope estimate below `c`.
    pub fn slope_tolerance(&self) -> f64 {
        10.0 * crate::scalar::ratio_to_f64(&self.slope_gap) + 1e-9
    }

    /// `slope_c_est >= c - tolerance`.
    pub fn slope_consistent(&self) -> bool {
        crate::scalar::ratio_to_f64(&self.slope_c_est)
            >= self.constant.c.to_f64() - self.slope_tolerance()
    }
}

/// `n` values for the Gaussian trend: the standard ladder capped at `n_max`.
pub fn default_gaussian_list(n_max: usize, length: usize) -> Vec<usize> {
    let ladder: Vec<usize> = [50, 100, 200, 400]
        .into_iter()
        .filter(|&n| n <= n_max && n > length)
        .collect();
    if ladder.len() >= 2 {
        ladder
    } else {
        vec![(n_max / 2).max(length + 1), n_max]
    }
}

/// Runs the full pipeline on a prepared ensemble without judging the result.
pub fn build_report<T: Scalar>(
    ensemble: &Ensemble,
    n_max: usize,
    precision: u32,
) -> Result<TheoremReport<T>> {
    let spec = ensemble.spec();
    let length = spec.length();
    let growth: GrowthEstimate<T> = estimate_growth(ensemble.moments(), n_max, precision)?;
    let threshold = find_threshold(ensemble.table(), ensemble.catalog(), &growth, n_max)?;
    if n_max < threshold.n + 10 {
        return Err(Error::WindowTooSmall {
            n_max,
            min: threshold.n + 10,
        });
    }
    let constant = compute_c(ensemble.moments(), &growth, threshold.n)?;

    let verdicts = (length + 1..=n_max)
        .into_par_iter()
        .map(|n| {
            let stats = ensemble.stats(n);
            let c_n = constant.c.clone() * T::from_int(n as i64, precision);
            let variance = T::from_ratio(&stats.variance, precision);
            let pass = variance >= c_n;
            Verdict {
                n,
                mean: stats.mean.clone(),
                variance: stats.variance.clone(),
                margin: variance - c_n.clone(),
                c_n,
                pass,
            }
        })
        .collect();

    let variance = |n: usize| &ensemble.stats(n).variance;
    let slope_c_est = variance(n_max) - variance(n_max - 1);
    let slope_gap = Signed::abs(&(&slope_c_est - (variance(n_max - 1) - variance(n_max - 2))));
    let gaussian = gaussian_diagnostics(ensemble.moments(), &default_gaussian_list(n_max, length))?;

    Ok(TheoremReport {
        spec: spec.clone(),
        n_max,
        size: spec.size(),
        length,
        growth,
        threshold,
        constant,
        verdicts,
        slope_c_est,
        slope_gap,
        gaussian,
    })
}

/// Checks `Var[K_n] >= c n` for every `L < n <= n_max`, failing with
/// [`Error::BoundViolated`] at the first violation.
pub fn verify_variance_bound<T: Scalar>(
    spec: &RecurrenceSpec,
    n_max: usize,
    precision: u32,
) -> Result<TheoremReport<T>> {
    let ensemble = Ensemble::new(spec, n_max);
    let report = build_report::<T>(&ensemble, n_max, precision)?;
    if let Some(v) = report.first_violation() {
        return Err(Error::BoundViolated {
            n: v.n,
            variance: crate::scalar::ratio_string(&v.variance),
            bound: v.c_n.to_decimal_string(),
        });
    }
    Ok(report)
}
