use num_rational::BigRational;
use num_traits::Signed;

use crate::ensemble::MomentTable;
use crate::error::{Error, Result};
use crate::scalar::ratio_to_f64;

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianRow {
    pub n: usize,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub skewness_squared: BigRational,
    pub excess_kurtosis_exact: BigRational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianTable {
    pub rows: Vec<GaussianRow>,
}

impl GaussianTable {
    /// Both `|skewness|` and `|excess kurtosis|` at the largest `n` are
    /// strictly below their values at the smallest `n`. Compared exactly.
    pub fn trend_holds(&self) -> bool {
        let (Some(first), Some(last)) = (
            self.rows.iter().min_by_key(|r| r.n),
            self.rows.iter().max_by_key(|r| r.n),
        ) else {
            return false;
        };
        last.n > first.n
            && last.skewness_squared < first.skewness_squared
            && last.excess_kurtosis_exact.abs() < first.excess_kurtosis_exact.abs()
    }
}

pub fn gaussian_diagnostics(moments: &MomentTable, n_list: &[usize]) -> Result<GaussianTable> {
    let rows = n_list
        .iter()
        .map(|&n| {
            let stats = moments.get(n).ok_or(Error::NotComputed {
                n,
                n_max: moments.n_max(),
            })?;
            let skewness_squared = stats
                .skewness_squared()
                .ok_or(Error::DegenerateVariance { n })?;
            let excess = stats
                .excess_kurtosis()
                .ok_or(Error::DegenerateVariance { n })?;
            Ok(GaussianRow {
                n,
                skewness: stats.skewness().expect("variance is positive"),
                excess_kurtosis: ratio_to_f64(&excess),
                skewness_squared,
                excess_kurtosis_exact: excess,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GaussianTable { rows })
}
