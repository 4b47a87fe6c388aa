use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::enumerate::{count_omega_by_z, tally_omega, OmegaTally, ZCounts};
use super::stats::MomentTable;
use crate::error::{Error, Result};
use crate::recurrence::{BlockCatalog, SequenceTable};

fn ratio(p: &BigUint, q: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(p.clone()), BigInt::from(q.clone()))
}

fn int(k: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

/// `n > 2L` guarantees at least three blocks.
pub(crate) fn require_three_blocks(catalog: &BlockCatalog, n: usize) -> Result<()> {
    let min = 2 * catalog.spec().length() + 1;
    if n < min {
        return Err(Error::IndexTooSmall { n, min });
    }
    Ok(())
}

/// Distribution of the second-to-last block size `Z_n` and length `L_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZDistribution {
    pub n: usize,
    /// `P(Z_n = t)` from the bijection with `Omega_{n - l(t)}`.
    pub probs: Vec<BigRational>,
    /// `l(t)` alongside `probs`.
    pub lengths: Vec<usize>,
    /// `P(L_n = len)`.
    pub length_probs: BTreeMap<usize, BigRational>,
    /// Frequencies counted over an enumeration of `Omega_n`, when it fit
    /// under the cap.
    pub empirical: Option<Vec<BigRational>>,
}

impl ZDistribution {
    pub fn total(&self) -> BigRational {
        self.probs
            .iter()
            .fold(BigRational::zero(), |acc, p| acc + p)
    }

    pub fn is_non_increasing(&self) -> bool {
        self.probs.windows(2).all(|w| w[0] >= w[1])
    }

    /// `P(Z_n = 0) >= 1/S`.
    pub fn zero_bound_holds(&self) -> bool {
        self.probs[0].clone() * int(self.probs.len() as u64) >= BigRational::one()
    }

    /// `None` when no enumeration was done.
    pub fn empirical_agrees(&self) -> Option<bool> {
        self.empirical.as_ref().map(|e| e == &self.probs)
    }
}

/// `P(Z_n = t) = (H_{n-l(t)+1} - H_{n-l(t)}) / (H_{n+1} - H_n)`.
pub fn z_closed_form(
    table: &SequenceTable,
    catalog: &BlockCatalog,
    n: usize,
) -> Result<Vec<BigRational>> {
    require_three_blocks(catalog, n)?;
    let mut table = table.clone();
    table.extend_to(n + 1);
    let total = table.omega_size(n);
    Ok(catalog
        .lengths()
        .iter()
        .map(|&len| ratio(&table.omega_size(n - len), &total))
        .collect())
}

/// Frequencies of each second-to-last block size over an enumeration.
pub fn empirical_z(counts: &ZCounts) -> Vec<BigRational> {
    let total = BigUint::from(counts.total());
    counts
        .by_z
        .iter()
        .map(|&count| ratio(&BigUint::from(count), &total))
        .collect()
}

/// Closed form, plus the enumerated frequencies when `|Omega_n| <= cap`.
pub fn z_distribution(
    table: &SequenceTable,
    catalog: &BlockCatalog,
    n: usize,
    cap: u64,
) -> Result<ZDistribution> {
    let probs = z_closed_form(table, catalog, n)?;
    let lengths = catalog.lengths().to_vec();
    let mut length_probs = BTreeMap::new();
    for (p, &len) in probs.iter().zip(&lengths) {
        *length_probs.entry(len).or_insert_with(BigRational::zero) += p;
    }
    let empirical = match count_omega_by_z(catalog, n, cap) {
        Ok(counts) => Some(empirical_z(&counts)),
        Err(Error::CapExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(ZDistribution {
        n,
        probs,
        lengths,
        length_probs,
        empirical,
    })
}

/// Both sides of the conditional moment identities for one `t`:
/// `E[K_n | Z_n = t] = E[K_{n-l(t)}] + t` and
/// `E[K_n^2 | Z_n = t] = E[K_{n-l(t)}^2] + 2t E[K_{n-l(t)}] + t^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalCheck {
    pub n: usize,
    pub t: usize,
    pub lhs_mean: BigRational,
    pub rhs_mean: BigRational,
    pub lhs_second: BigRational,
    pub rhs_second: BigRational,
}

impl ConditionalCheck {
    pub fn holds(&self) -> bool {
        self.lhs_mean == self.rhs_mean && self.lhs_second == self.rhs_second
    }
}

fn shifted_moments(
    moments: &MomentTable,
    n: usize,
    t: usize,
    len: usize,
) -> (BigRational, BigRational) {
    let shorter = moments.stats(n - len);
    let t = int(t as u64);
    let mean = &shorter.mean + &t;
    let second = &shorter.second_moment + int(2) * &t * &shorter.mean + &t * &t;
    (mean, second)
}

/// Left sides from an enumeration tally of `Omega_n`, right sides from the DP.
pub fn conditional_from_tally(
    tally: &OmegaTally,
    catalog: &BlockCatalog,
    moments: &MomentTable,
    t: usize,
) -> Result<ConditionalCheck> {
    let n = tally.n;
    require_three_blocks(catalog, n)?;
    let len = catalog.length(t)?;
    let slot = tally
        .by_z
        .get(t)
        .filter(|s| s.count > 0)
        .ok_or(Error::EmptyConditionalEvent { n, t })?;
    let count = BigInt::from(slot.count);
    let lhs_mean = BigRational::new(BigInt::from(slot.sum_k), count.clone());
    let lhs_second = BigRational::new(BigInt::from(slot.sum_k2), count);
    let (rhs_mean, rhs_second) = shifted_moments(moments, n, t, len);
    Ok(ConditionalCheck {
        n,
        t,
        lhs_mean,
        rhs_mean,
        lhs_second,
        rhs_second,
    })
}

pub fn conditional_mean_check(
    catalog: &BlockCatalog,
    moments: &MomentTable,
    n: usize,
    t: usize,
    cap: u64,
) -> Result<ConditionalCheck> {
    require_three_blocks(catalog, n)?;
    catalog.length(t)?;
    let tally = tally_omega(catalog, n, cap)?;
    conditional_from_tally(&tally, catalog, moments, t)
}

/// The total-expectation forms, computed from the DP alone:
/// `E[K_n] = sum_t P(Z_n=t) (E[K_{n-l(t)}] + t)` and the analogue for
/// `E[K_n^2]`.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub n: usize,
    pub mean: BigRational,
    pub mean_by_z: BigRational,
    pub second: BigRational,
    pub second_by_z: BigRational,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.mean == self.mean_by_z && self.second == self.second_by_z
    }
}

pub fn identity_check(
    table: &SequenceTable,
    catalog: &BlockCatalog,
    moments: &MomentTable,
    n: usize,
) -> Result<IdentityCheck> {
    let probs = z_closed_form(table, catalog, n)?;
    let mut mean_by_z = BigRational::zero();
    let mut second_by_z = BigRational::zero();
    for (t, (p, &len)) in probs.iter().zip(catalog.lengths()).enumerate() {
        let (mean, second) = shifted_moments(moments, n, t, len);
        mean_by_z += p * mean;
        second_by_z += p * second;
    }
    let stats = moments.stats(n);
    Ok(IdentityCheck {
        n,
        mean: stats.mean.clone(),
        mean_by_z,
        second: stats.second_moment.clone(),
        second_by_z,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::{block_catalog, RecurrenceSpec};

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    fn fib() -> (SequenceTable, BlockCatalog, MomentTable) {
        let spec = RecurrenceSpec::fibonacci();
        (
            SequenceTable::with_terms(spec.clone(), 30),
            block_catalog(&spec),
            MomentTable::compute(&spec, 25),
        )
    }

    #[test]
    fn fibonacci_five() {
        let (table, catalog, _) = fib();
        let z = z_distribution(&table, &catalog, 5, 1000).unwrap();
        assert_eq!(z.probs, vec![r(3, 5), r(2, 5)]);
        assert_eq!(z.empirical_agrees(), Some(true));
        assert_eq!(z.total(), r(1, 1));
        assert!(z.is_non_increasing() && z.zero_bound_holds());
        assert_eq!(z.length_probs[&2], r(2, 5));
        assert_eq!(
            z_distribution(&table, &catalog, 4, 1000),
            Err(Error::IndexTooSmall { n: 4, min: 5 })
        );
        let capped = z_distribution(&table, &catalog, 20, 10).unwrap();
        assert!(capped.empirical.is_none());
    }

    #[test]
    fn fibonacci_conditional_means() {
        let (_, catalog, moments) = fib();
        let zero = conditional_mean_check(&catalog, &moments, 5, 0, 1000).unwrap();
        assert_eq!(
            (zero.lhs_mean.clone(), zero.rhs_mean.clone()),
            (r(5, 3), r(5, 3))
        );
        let one = conditional_mean_check(&catalog, &moments, 5, 1, 1000).unwrap();
        assert_eq!(
            (one.lhs_mean.clone(), one.rhs_mean.clone()),
            (r(5, 2), r(5, 2))
        );
        assert!(zero.holds() && one.holds());
        assert_eq!(one.lhs_second, r(13, 2));
        assert!(matches!(
            conditional_mean_check(&catalog, &moments, 5, 2, 1000),
            Err(Error::SizeOutOfRange { .. })
        ));
        assert!(matches!(
            conditional_mean_check(&catalog, &moments, 3, 0, 1000),
            Err(Error::IndexTooSmall { .. })
        ));
    }

    #[test]
    fn identities_hold_for_fibonacci() {
        let (table, catalog, moments) = fib();
        for n in 5..=25 {
            assert!(
                identity_check(&table, &catalog, &moments, n)
                    .unwrap()
                    .holds(),
                "n={n}"
            );
        }
    }
}
