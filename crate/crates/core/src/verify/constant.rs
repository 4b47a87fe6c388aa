use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use super::growth::{int_ratio, GrowthEstimate};
use crate::ensemble::MomentTable;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One candidate in the minimum defining `c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CTerm {
    /// `Var[K_n] / n`.
    VarianceRatio { n: usize },
    /// `a^2 / (2 S L)`.
    GrowthFloor,
}

impl fmt::Display for CTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CTerm::VarianceRatio { n } => write!(f, "Var[K_{n}]/{n}"),
            CTerm::GrowthFloor => f.write_str("a^2/(2SL)"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConstantC<T> {
    pub c: T,
    pub argmin: CTerm,
    pub candidates: Vec<(CTerm, T)>,
    /// The exact value when the minimum is a variance ratio.
    pub exact: Option<BigRational>,
}

/// `c = min{Var[K_{L+1}]/(L+1), .., Var[K_N]/N, a^2/(2SL)}`.
pub fn compute_c<T: Scalar>(
    moments: &MomentTable,
    growth: &GrowthEstimate<T>,
    threshold: usize,
) -> Result<ConstantC<T>> {
    let spec = moments.spec();
    let length = spec.length();
    if threshold <= length {
        return Err(Error::IndexTooSmall {
            n: threshold,
            min: length + 1,
        });
    }
    let precision = growth.precision;
    let mut candidates = Vec::with_capacity(threshold - length + 1);
    let mut exact = Vec::with_capacity(threshold - length);
    for n in length + 1..=threshold {
        let variance = &moments.stats(n).variance;
        // One summand for H_n, two for H_n + 1.
        if variance.is_zero() {
            return Err(Error::DegenerateVariance { n });
        }
        let ratio = variance / int_ratio(n as i64);
        candidates.push((CTerm::VarianceRatio { n }, T::from_ratio(&ratio, precision)));
        exact.push(ratio);
    }
    let floor =
        growth.a_est.square() / T::from_int(2 * spec.size() as i64 * length as i64, precision);
    candidates.push((CTerm::GrowthFloor, floor));

    let (index, (argmin, c)) = candidates
        .iter()
        .enumerate()
        .min_by(|(_, (_, x)), (_, (_, y))| x.partial_cmp(y).expect("candidates are comparable"))
        .map(|(i, (term, value))| (i, (*term, value.clone())))
        .expect("at least the growth term");
    if c.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::NonPositiveC(format!(
            "{argmin} = {}",
            c.to_decimal_string()
        )));
    }
    let exact = exact.get(index).cloned();
    Ok(ConstantC {
        c,
        argmin,
        candidates,
        exact,
    })
}
