//! Exact distribution of the summand count via generating polynomials.
//!
//! `Q_r` counts legal tail strings of length `r` (leading zeros allowed) by
//! number of summands:
//!
//! ```text
//! Q_0 = 1
//! Q_r = sum_{t : l(t) <= r} x^t Q_{r - l(t)}  +  [Type 1 block of length r] x^{size}
//! ```
//!
//! and `P_n` is the same sum with the first block restricted to `t >= 1`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::recurrence::{BlockCatalog, RecurrenceSpec};

/// `coeffs[k]` is the number of elements of `Omega_n` with `k` summands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SummandPolynomial {
    n: usize,
    coeffs: Vec<BigUint>,
}

impl SummandPolynomial {
    pub fn new(n: usize, mut coeffs: Vec<BigUint>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        SummandPolynomial { n, coeffs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    /// `P_n(1)`.
    pub fn cardinality(&self) -> BigUint {
        self.coeffs.iter().sum()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `sum_k k^j coeffs[k]` for `j = 0..=4`.
    pub fn power_sums(&self) -> [BigUint; 5] {
        let mut sums: [BigUint; 5] = Default::default();
        for (k, count) in self.coeffs.iter().enumerate() {
            if count.is_zero() {
                continue;
            }
            let mut term = count.clone();
            for sum in sums.iter_mut() {
                *sum += &term;
                term *= k;
            }
        }
        sums
    }
}

fn add_shifted(target: &mut Vec<BigUint>, source: &[BigUint], shift: usize) {
    if target.len() < source.len() + shift {
        target.resize(source.len() + shift, BigUint::zero());
    }
    for (k, value) in source.iter().enumerate() {
        if !value.is_zero() {
            target[k + shift] += value;
        }
    }
}

fn add_monomial(target: &mut Vec<BigUint>, degree: usize) {
    if target.len() <= degree {
        target.resize(degree + 1, BigUint::zero());
    }
    target[degree] += 1u32;
}

/// Incremental DP holding the tail polynomials `Q_0..Q_r` computed so far.
#[derive(Clone, Debug)]
pub struct SummandDp {
    catalog: BlockCatalog,
    tails: Vec<Vec<BigUint>>,
}

impl SummandDp {
    pub fn new(spec: &RecurrenceSpec) -> Self {
        SummandDp::from_catalog(BlockCatalog::new(spec))
    }

    pub fn from_catalog(catalog: BlockCatalog) -> Self {
        SummandDp {
            catalog,
            tails: vec![vec![BigUint::one()]],
        }
    }

    pub fn catalog(&self) -> &BlockCatalog {
        &self.catalog
    }

    fn extend_tails(&mut self, r: usize) {
        while self.tails.len() <= r {
            let next = self.combine(self.tails.len(), 0);
            self.tails.push(next);
        }
    }

    fn combine(&self, length: usize, min_size: usize) -> Vec<BigUint> {
        let mut poly = Vec::new();
        for (t, &len) in self.catalog.lengths().iter().enumerate().skip(min_size) {
            if len <= length {
                add_shifted(&mut poly, &self.tails[length - len], t);
            }
        }
        if let Some(block) = self.catalog.type1_of_length(length) {
            add_monomial(&mut poly, block.size() as usize);
        }
        poly
    }

    /// The tail polynomial `Q_r`.
    pub fn tail(&mut self, r: usize) -> &[BigUint] {
        self.extend_tails(r);
        &self.tails[r]
    }

    /// `P_n`.
    pub fn polynomial(&mut self, n: usize) -> SummandPolynomial {
        self.extend_tails(n.saturating_sub(1));
        SummandPolynomial::new(n, self.combine(n, 1))
    }
}

pub fn summand_polynomial(spec: &RecurrenceSpec, n: usize) -> SummandPolynomial {
    SummandDp::new(spec).polynomial(n)
}
