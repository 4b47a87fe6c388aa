use rayon::prelude::*;

use super::growth::GrowthEstimate;
use crate::ensemble::{require_three_blocks, z_closed_form};
use crate::error::{Error, Result};
use crate::recurrence::{BlockCatalog, SequenceTable};
use crate::scalar::Scalar;

/// Moments of `Y_n = Z_n + f(n - L_n) - a L_n`.
#[derive(Clone, Debug)]
pub struct YStatistics<T> {
    pub n: usize,
    pub mean: T,
    pub variance: T,
    /// `E[(Z_n - a L_n)^2]`, the quantity bounded below by `a^2 / S`.
    pub centered_second: T,
    pub f_n: T,
    /// `|E[Y_n] - f(n)|`.
    pub residual: T,
    /// Allowed residual from the slope estimate and rounding.
    pub budget: f64,
}

impl<T: Scalar> YStatistics<T> {
    /// `E[Y_n] = f(n)` up to the budget.
    pub fn mean_matches_f(&self) -> bool {
        self.residual.to_f64() <= self.budget
    }
}

pub fn y_statistics<T: Scalar>(
    table: &SequenceTable,
    catalog: &BlockCatalog,
    growth: &GrowthEstimate<T>,
    n: usize,
) -> Result<YStatistics<T>> {
    require_three_blocks(catalog, n)?;
    let f_n = growth.f(n)?.clone();
    let precision = growth.precision;
    let probs = z_closed_form(table, catalog, n)?;
    let a = &growth.a_est;

    let mut mean = T::zero();
    let mut second = T::zero();
    let mut centered_second = T::zero();
    for (t, (p, &len)) in probs.iter().zip(catalog.lengths()).enumerate() {
        let p = T::from_ratio(p, precision);
        let shift =
            T::from_int(t as i64, precision) - a.clone() * T::from_int(len as i64, precision);
        let y = shift.clone() + growth.f(n - len)?.clone();
        mean = mean + p.clone() * y.clone();
        second = second + p.clone() * y.square();
        centered_second = centered_second + p * shift.square();
    }
    let variance = second - mean.square();
    let residual = (mean.clone() - f_n.clone()).abs();

    let length = catalog.spec().length() as f64;
    let scale = a.to_f64().abs() * n as f64
        + growth.b_est.to_f64().abs()
        + catalog.spec().size() as f64
        + 1.0;
    let budget = 10.0 * growth.convergence_gap.to_f64() * length
        + 64.0 * T::unit_roundoff(precision) * scale;

    Ok(YStatistics {
        n,
        mean,
        variance,
        centered_second,
        f_n,
        residual,
        budget,
    })
}

/// Smallest `N > 2L` with `Var[Y_n] > a^2/(2S)` for every `n` in
/// `(N, n_max]`.
#[derive(Clone, Debug)]
pub struct Threshold<T> {
    pub n: usize,
    pub bound: T,
    /// `(n, Var[Y_n])` for every `n` in `(2L, n_max]`.
    pub var_y: Vec<(usize, T)>,
    /// Indices in `(2L, n_max]` where the bound fails.
    pub failures: Vec<usize>,
}

pub fn find_threshold<T: Scalar>(
    table: &SequenceTable,
    catalog: &BlockCatalog,
    growth: &GrowthEstimate<T>,
    n_max: usize,
) -> Result<Threshold<T>> {
    let lower = 2 * catalog.spec().length();
    let bound = growth.y_variance_floor(catalog.spec().size());
    let var_y = (lower + 1..=n_max)
        .into_par_iter()
        .map(|n| y_statistics(table, catalog, growth, n).map(|y| (n, y.variance)))
        .collect::<Result<Vec<_>>>()?;
    let failures: Vec<usize> = var_y
        .iter()
        .filter(|(_, v)| v.partial_cmp(&bound) != Some(std::cmp::Ordering::Greater))
        .map(|&(n, _)| n)
        .collect();
    let n = failures.last().copied().unwrap_or(lower + 1).max(lower + 1);
    if n >= n_max {
        return Err(Error::NoThresholdInRange { lower, n_max });
    }
    Ok(Threshold {
        n,
        bound,
        var_y,
        failures,
    })
}
