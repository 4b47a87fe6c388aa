use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::ensemble::MomentTable;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Slope and intercept of `E[K_n] = a n + b + f(n)`, estimated from exact
/// means by differencing, and the resulting error term `f`.
#[derive(Clone, Debug)]
pub struct GrowthEstimate<T> {
    pub a_est: T,
    pub b_est: T,
    /// `E[K_{n_max}] - E[K_{n_max-1}]`, before conversion.
    pub a_exact: BigRational,
    /// `f_table[n - 1] = E[K_n] - a_est n - b_est` for `n = 1..=n_max`.
    pub f_table: Vec<T>,
    /// Indices averaged for `b_est`.
    pub window: RangeInclusive<usize>,
    /// `|a_est - (E[K_{n_max-1}] - E[K_{n_max-2}])|`.
    pub convergence_gap: T,
    pub precision: u32,
}

impl<T: Scalar> GrowthEstimate<T> {
    pub fn n_max(&self) -> usize {
        self.f_table.len()
    }

    pub fn f(&self, n: usize) -> Result<&T> {
        n.checked_sub(1)
            .and_then(|i| self.f_table.get(i))
            .ok_or(Error::MissingFValue { n })
    }

    fn max_abs(&self, range: RangeInclusive<usize>) -> T {
        range
            .filter_map(|n| self.f(n).ok())
            .map(Scalar::abs)
            .fold(T::zero(), |acc, v| if v > acc { v } else { acc })
    }

    /// `max |f|` over the top quarter is below `max |f|` over the first
    /// quarter.
    pub fn f_shrinks(&self) -> bool {
        let quarter = (self.n_max() / 4).max(1);
        self.max_abs(self.n_max() - quarter + 1..=self.n_max()) < self.max_abs(1..=quarter)
    }

    /// `a_est^2 / (2S)`.
    pub fn y_variance_floor(&self, size: u64) -> T {
        self.a_est.square() / T::from_int(2 * size as i64, self.precision)
    }
}

pub fn minimum_growth_window(length: usize) -> usize {
    4 * length + 8
}

pub fn estimate_growth<T: Scalar>(
    moments: &MomentTable,
    n_max: usize,
    precision: u32,
) -> Result<GrowthEstimate<T>> {
    let min = minimum_growth_window(moments.spec().length());
    if n_max < min {
        return Err(Error::WindowTooSmall { n_max, min });
    }
    assert!(
        n_max <= moments.n_max(),
        "moments cover only n <= {}",
        moments.n_max()
    );
    let mean = |n: usize| &moments.stats(n).mean;
    let a_exact = mean(n_max) - mean(n_max - 1);
    let a_previous = mean(n_max - 1) - mean(n_max - 2);
    let convergence_gap = T::from_ratio(&Signed::abs(&(&a_exact - a_previous)), precision);
    let a_est = T::from_ratio(&a_exact, precision);

    let quarter = (n_max / 4).max(1);
    let window = n_max - quarter + 1..=n_max;
    let scaled = |n: usize| {
        T::from_ratio(mean(n), precision) - a_est.clone() * T::from_int(n as i64, precision)
    };
    let sum = window.clone().map(scaled).fold(T::zero(), |acc, v| acc + v);
    let b_est = sum / T::from_int(quarter as i64, precision);

    let f_table = (1..=n_max).map(|n| scaled(n) - b_est.clone()).collect();
    Ok(GrowthEstimate {
        a_est,
        b_est,
        a_exact,
        f_table,
        window,
        convergence_gap,
        precision,
    })
}

/// The classical Fibonacci mean slope `1 / (phi^2 + 1)`, as `f64`.
pub fn fibonacci_slope() -> f64 {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    1.0 / (phi * phi + 1.0)
}

pub(crate) fn int_ratio(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
