//! Positive linear recurrence sequences and their block catalog.
//!
//! A recurrence is given by coefficients `c_1..c_L` with `c_1, c_L > 0`. Its
//! terms start with `H_1 = 1`, follow `H_{n+1} = c_1 H_n + .. + c_n H_1 + 1`
//! while `n < L`, and the full recurrence afterwards.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RecurrenceSpec {
    coefficients: Vec<u32>,
    size: u64,
}

impl RecurrenceSpec {
    pub fn new(coefficients: &[i64]) -> Result<Self> {
        validate_spec(coefficients)
    }

    pub fn fibonacci() -> Self {
        RecurrenceSpec {
            coefficients: vec![1, 1],
            size: 2,
        }
    }

    pub fn coefficients(&self) -> &[u32] {
        &self.coefficients
    }

    /// `c_i` with 1-based `i`.
    pub fn coefficient(&self, i: usize) -> u32 {
        self.coefficients[i - 1]
    }

    /// `L`, the number of coefficients.
    pub fn length(&self) -> usize {
        self.coefficients.len()
    }

    /// `S = c_1 + .. + c_L`.
    pub fn size(&self) -> u64 {
        self.size
    }
}

/// Checks the coefficient list and derives `S` and `L`.
///
/// `c = (1)` is rejected as [`Error::DegenerateRecurrence`]: its terms are
/// all 1, so it is not strictly increasing and decompositions are not unique.
pub fn validate_spec(coefficients: &[i64]) -> Result<RecurrenceSpec> {
    if coefficients.is_empty() {
        return Err(Error::EmptyCoefficients);
    }
    let mut checked = Vec::with_capacity(coefficients.len());
    for (i, &c) in coefficients.iter().enumerate() {
        if c < 0 {
            return Err(Error::NegativeCoefficient {
                index: i + 1,
                value: c,
            });
        }
        let c = u32::try_from(c).map_err(|_| Error::CoefficientTooLarge {
            index: i + 1,
            value: c,
        })?;
        checked.push(c);
    }
    if checked[0] == 0 {
        return Err(Error::LeadingCoefficientZero);
    }
    if *checked.last().unwrap() == 0 {
        return Err(Error::TrailingCoefficientZero);
    }
    let size = checked.iter().map(|&c| c as u64).sum();
    if size == 1 {
        return Err(Error::DegenerateRecurrence);
    }
    Ok(RecurrenceSpec {
        coefficients: checked,
        size,
    })
}

impl FromStr for RecurrenceSpec {
    type Err = Error;

    /// Parses the comma separated form, e.g. `"2,2,0,2"`.
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Err(Error::EmptyCoefficients);
        }
        let values = trimmed
            .split(',')
            .map(|part| part.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::InvalidCoefficientText(s.to_string()))?;
        validate_spec(&values)
    }
}

impl fmt::Display for RecurrenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coefficients.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Cached terms `H_1..H_n`, extendable on demand.
#[derive(Clone, Debug)]
pub struct SequenceTable {
    spec: RecurrenceSpec,
    terms: Vec<BigUint>,
}

impl SequenceTable {
    pub fn new(spec: RecurrenceSpec) -> Self {
        SequenceTable {
            spec,
            terms: vec![BigUint::one()],
        }
    }

    pub fn with_terms(spec: RecurrenceSpec, n: usize) -> Self {
        let mut table = SequenceTable::new(spec);
        table.extend_to(n);
        table
    }

    pub fn spec(&self) -> &RecurrenceSpec {
        &self.spec
    }

    /// Number of cached terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn terms(&self) -> &[BigUint] {
        &self.terms
    }

    /// `H_i`, 1-based. Panics if `i` is 0 or not cached.
    pub fn term(&self, i: usize) -> &BigUint {
        &self.terms[i - 1]
    }

    /// `|Omega_n| = H_{n+1} - H_n`.
    pub fn omega_size(&self, n: usize) -> BigUint {
        self.term(n + 1) - self.term(n)
    }

    pub fn extend_to(&mut self, n: usize) {
        let coefficients = self.spec.coefficients();
        let len = coefficients.len();
        while self.terms.len() < n {
            // Computing H_{k+1} from H_1..H_k.
            let k = self.terms.len();
            let mut next = BigUint::zero();
            for (i, &c) in coefficients.iter().enumerate().take(k.min(len)) {
                if c != 0 {
                    next += &self.terms[k - 1 - i] * c;
                }
            }
            if k < len {
                next += 1u32;
            }
            self.terms.push(next);
        }
    }

    /// Terms as `u64`, or `None` once a requested term overflows.
    pub fn terms_u64(&self, n: usize) -> Option<Vec<u64>> {
        self.terms[..n].iter().map(|h| h.to_u64()).collect()
    }
}

/// `H_1..H_n` for `spec`.
pub fn sequence_terms(spec: &RecurrenceSpec, n: usize) -> SequenceTable {
    SequenceTable::with_terms(spec.clone(), n.max(1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlockKind {
    /// A full prefix `(c_1..c_m)` with `m < L`; only ever the final block.
    Type1,
    /// `(c_1..c_{s-1}, a_s)` with `a_s < c_s`.
    Type2,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Block {
    kind: BlockKind,
    coefficients: Vec<u32>,
    size: u64,
}

impl Block {
    fn new(kind: BlockKind, coefficients: Vec<u32>) -> Self {
        let size = coefficients.iter().map(|&a| a as u64).sum();
        Block {
            kind,
            coefficients,
            size,
        }
    }

    pub fn kind(&self) -> BlockKind {
        self.kind
    }

    pub fn coefficients(&self) -> &[u32] {
        &self.coefficients
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, a) in self.coefficients.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("]")
    }
}

#[derive(Clone, Debug)]
pub struct BlockCatalog {
    spec: RecurrenceSpec,
    type1: Vec<Block>,
    type2: Vec<Block>,
    lengths: Vec<usize>,
}

impl BlockCatalog {
    pub fn new(spec: &RecurrenceSpec) -> Self {
        let c = spec.coefficients();
        let type1 = (1..c.len())
            .map(|m| Block::new(BlockKind::Type1, c[..m].to_vec()))
            .collect();

        let mut type2 = Vec::with_capacity(spec.size() as usize);
        for s in 1..=c.len() {
            // a_s < c_s is impossible when c_s = 0, so no block ends there.
            for a in 0..c[s - 1] {
                let mut coefficients = c[..s - 1].to_vec();
                coefficients.push(a);
                type2.push(Block::new(BlockKind::Type2, coefficients));
            }
        }
        debug_assert!(type2.iter().enumerate().all(|(t, b)| b.size() == t as u64));
        let lengths = type2.iter().map(Block::len).collect();

        BlockCatalog {
            spec: spec.clone(),
            type1,
            type2,
            lengths,
        }
    }

    pub fn spec(&self) -> &RecurrenceSpec {
        &self.spec
    }

    /// Type 1 blocks ordered by length `1..L-1`.
    pub fn type1_blocks(&self) -> &[Block] {
        &self.type1
    }

    /// The Type 1 block of length `m`, if `1 <= m < L`.
    pub fn type1_of_length(&self, m: usize) -> Option<&Block> {
        m.checked_sub(1).and_then(|i| self.type1.get(i))
    }

    /// Type 2 blocks indexed by size.
    pub fn type2_blocks(&self) -> &[Block] {
        &self.type2
    }

    pub fn type2(&self, t: usize) -> Result<&Block> {
        self.type2.get(t).ok_or(Error::SizeOutOfRange {
            t,
            size: self.spec.size(),
        })
    }

    /// The length function `l(t)` on `[0, S)`.
    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn length(&self, t: usize) -> Result<usize> {
        self.lengths.get(t).copied().ok_or(Error::SizeOutOfRange {
            t,
            size: self.spec.size(),
        })
    }
}

pub fn block_catalog(spec: &RecurrenceSpec) -> BlockCatalog {
    BlockCatalog::new(spec)
}

pub fn block_length(catalog: &BlockCatalog, t: usize) -> Result<usize> {
    catalog.length(t)
}
