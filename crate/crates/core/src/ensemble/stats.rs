use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::polynomial::{SummandDp, SummandPolynomial};
use crate::error::{Error, Result};
use crate::recurrence::RecurrenceSpec;
use crate::scalar::ratio_to_f64;

/// Exact moments of `K_n` under the uniform measure on `Omega_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleStats {
    pub n: usize,
    pub cardinality: BigUint,
    pub mean: BigRational,
    /// `E[K_n^2]`.
    pub second_moment: BigRational,
    pub variance: BigRational,
    pub third_central: BigRational,
    pub fourth_central: BigRational,
    pub histogram: SummandPolynomial,
}

impl EnsembleStats {
    /// `mu_3^2 / var^3`, exact. `None` when the variance is zero.
    pub fn skewness_squared(&self) -> Option<BigRational> {
        if self.variance.is_zero() {
            return None;
        }
        let var = &self.variance;
        Some(&self.third_central * &self.third_central / (var * var * var))
    }

    pub fn skewness(&self) -> Option<f64> {
        let magnitude = ratio_to_f64(&self.skewness_squared()?).sqrt();
        Some(if self.third_central.is_negative() {
            -magnitude
        } else {
            magnitude
        })
    }

    /// `mu_4 / var^2 - 3`, exact.
    pub fn excess_kurtosis(&self) -> Option<BigRational> {
        if self.variance.is_zero() {
            return None;
        }
        let three = BigRational::from_integer(BigInt::from(3));
        Some(&self.fourth_central / (&self.variance * &self.variance) - three)
    }
}

fn int(value: &BigUint) -> BigInt {
    BigInt::from(value.clone())
}

pub fn stats_from_polynomial(polynomial: &SummandPolynomial) -> Result<EnsembleStats> {
    let sums = polynomial.power_sums();
    if sums[0].is_zero() {
        return Err(Error::EmptyDistribution);
    }
    let total = int(&sums[0]);
    let raw: Vec<BigRational> = sums
        .iter()
        .map(|s| BigRational::new(int(s), total.clone()))
        .collect();
    let mean = raw[1].clone();
    let mean2 = &mean * &mean;
    let c = |k: i64| BigRational::from_integer(BigInt::from(k));

    let variance = &raw[2] - &mean2;
    let third = &raw[3] - c(3) * &mean * &raw[2] + c(2) * &mean2 * &mean;
    let fourth =
        &raw[4] - c(4) * &mean * &raw[3] + c(6) * &mean2 * &raw[2] - c(3) * &mean2 * &mean2;

    Ok(EnsembleStats {
        n: polynomial.n(),
        cardinality: sums[0].clone(),
        mean,
        second_moment: raw[2].clone(),
        variance,
        third_central: third,
        fourth_central: fourth,
        histogram: polynomial.clone(),
    })
}

/// Exact statistics of `K_1..K_{n_max}` from one DP run.
#[derive(Clone, Debug)]
pub struct MomentTable {
    spec: RecurrenceSpec,
    stats: Vec<EnsembleStats>,
}

impl MomentTable {
    pub fn compute(spec: &RecurrenceSpec, n_max: usize) -> Self {
        let mut dp = SummandDp::new(spec);
        let polynomials: Vec<_> = (1..=n_max).map(|n| dp.polynomial(n)).collect();
        let stats = polynomials
            .par_iter()
            .map(|p| stats_from_polynomial(p).expect("Omega_n is never empty"))
            .collect();
        MomentTable {
            spec: spec.clone(),
            stats,
        }
    }

    pub fn spec(&self) -> &RecurrenceSpec {
        &self.spec
    }

    pub fn n_max(&self) -> usize {
        self.stats.len()
    }

    /// Statistics of `K_n`, `1 <= n <= n_max`.
    pub fn get(&self, n: usize) -> Option<&EnsembleStats> {
        n.checked_sub(1).and_then(|i| self.stats.get(i))
    }

    pub fn stats(&self, n: usize) -> &EnsembleStats {
        self.get(n)
            .unwrap_or_else(|| panic!("K_{n} outside 1..={}", self.n_max()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &EnsembleStats> {
        self.stats.iter()
    }
}
