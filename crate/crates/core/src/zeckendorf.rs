//! Legal decompositions: construction, legality, block structure and the
//! second-to-last block removal map.
//!
//! Coefficients are stored most significant first: `a_1` multiplies `H_m`
//! and `a_m` multiplies `H_1`.

use std::borrow::Cow;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::recurrence::{Block, BlockCatalog, BlockKind, RecurrenceSpec, SequenceTable};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decomposition(Vec<u32>);

impl Decomposition {
    pub fn new(coefficients: Vec<u32>) -> Self {
        Decomposition(coefficients)
    }

    pub fn coefficients(&self) -> &[u32] {
        &self.0
    }

    pub fn into_coefficients(self) -> Vec<u32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn summand_count(&self) -> u64 {
        summand_count(&self.0)
    }

    /// Indices `j` of the summands `H_j`, largest first, repeated by
    /// multiplicity.
    pub fn term_indices(&self) -> Vec<usize> {
        let m = self.0.len();
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| std::iter::repeat_n(m - i, a as usize))
            .collect()
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl FromStr for Decomposition {
    type Err = Error;

    /// Whitespace (or comma) separated coefficients, most significant first.
    fn from_str(s: &str) -> Result<Self> {
        s.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|part| !part.is_empty())
            .map(|part| {
                part.parse::<u32>()
                    .map_err(|_| Error::IllegalDecomposition {
                        position: 0,
                        reason: format!("{part:?} is not a non-negative integer"),
                    })
            })
            .collect::<Result<Vec<_>>>()
            .map(Decomposition)
    }
}

pub fn summand_count(coefficients: &[u32]) -> u64 {
    coefficients.iter().map(|&a| a as u64).sum()
}

/// The legal decomposition of `m`, built greedily from the top index.
///
/// Within a block the digit is capped at the next coefficient `c_s`; taking
/// `c_s` extends the block, anything smaller closes it. Unconstrained greedy
/// can overshoot a zero coefficient: for `c = (1, 0, 2)` it writes 8 as
/// `1 1 0 0`, whose legal form is `1 0 1 1`.
///
/// The table is borrowed when it already covers `m`; otherwise a local copy
/// is extended.
pub fn decompose(table: &SequenceTable, m: &BigUint) -> Result<Decomposition> {
    if m.is_zero() {
        return Err(Error::NonPositiveInput);
    }
    let mut table = Cow::Borrowed(table);
    while table.terms().last().unwrap() <= m {
        let len = table.len();
        table.to_mut().extend_to(len + 16);
    }
    // Largest index j with H_j <= m.
    let top = table.terms().partition_point(|h| h <= m);
    let c = table.spec().coefficients();
    let mut coefficients = Vec::with_capacity(top);
    let mut rest = m.clone();
    // Digits of the current block so far equal c_1..c_matched.
    // Invariant: rest < c_{matched+1} H_j + (largest tail from matched+1).
    let mut matched = 0;
    for j in (1..=top).rev() {
        let h = table.term(j);
        let bound = h * c[matched];
        if rest >= bound {
            coefficients.push(c[matched]);
            rest -= bound;
            matched += 1;
        } else {
            let (q, r) = rest.div_rem(h);
            coefficients.push(u32::try_from(&q).expect("digit below a coefficient"));
            rest = r;
            matched = 0;
        }
    }
    debug_assert!(rest.is_zero());
    debug_assert!(matched < c.len());
    Ok(Decomposition(coefficients))
}

pub fn decompose_u64(table: &SequenceTable, m: u64) -> Result<Decomposition> {
    decompose(table, &BigUint::from(m))
}

/// `sum a_i H_{m+1-i}`.
pub fn value(table: &SequenceTable, d: &Decomposition) -> Result<BigUint> {
    let verdict = is_legal(table.spec(), d.coefficients());
    if let Legality::Illegal { position, reason } = verdict {
        return Err(Error::SpecMismatch(format!(
            "position {position}: {reason}"
        )));
    }
    Ok(raw_value(table, d.coefficients()))
}

/// `sum a_i H_{m+1-i}` without a legality check.
pub fn raw_value(table: &SequenceTable, coefficients: &[u32]) -> BigUint {
    let m = coefficients.len();
    let mut table = Cow::Borrowed(table);
    if table.len() < m {
        table.to_mut().extend_to(m);
    }
    coefficients
        .iter()
        .enumerate()
        .filter(|(_, &a)| a != 0)
        .fold(BigUint::zero(), |acc, (i, &a)| acc + table.term(m - i) * a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IllegalReason {
    Empty,
    LeadingZero,
    /// `a_s > c_s` where the prefix so far matched `c_1..c_{s-1}`.
    ExceedsCoefficient,
    /// The string contains the whole of `c_1..c_L` as a block, which the
    /// recurrence would reduce.
    FullPrefix,
}

impl fmt::Display for IllegalReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IllegalReason::Empty => "empty coefficient string",
            IllegalReason::LeadingZero => "leading coefficient is zero",
            IllegalReason::ExceedsCoefficient => "coefficient exceeds the recurrence coefficient",
            IllegalReason::FullPrefix => "block repeats c_1..c_L in full",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Legality {
    Legal,
    /// `position` is 1-based in the coefficient string.
    Illegal {
        position: usize,
        reason: IllegalReason,
    },
}

impl Legality {
    pub fn is_legal(&self) -> bool {
        matches!(self, Legality::Legal)
    }
}

/// One parsed block: where it starts in the string, its length and type.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockSpan {
    pub start: usize,
    pub len: usize,
    pub kind: BlockKind,
    pub size: u64,
}

/// Splits a coefficient string into blocks.
///
/// Each block ends at the first index where the string drops below the
/// matching `c_s`, or at the end of the string if it is a proper prefix of
/// `c_1..c_L`. No leading-coefficient check happens here, so this also
/// parses tail strings such as `[0][1]`.
pub fn scan_blocks(
    spec: &RecurrenceSpec,
    coefficients: &[u32],
) -> std::result::Result<Vec<BlockSpan>, Legality> {
    let c = spec.coefficients();
    let mut spans = Vec::new();
    let mut pos = 0;
    while pos < coefficients.len() {
        let rest = &coefficients[pos..];
        let window = rest.len().min(c.len());
        let mismatch = (0..window).find(|&i| rest[i] != c[i]);
        let span = match mismatch {
            Some(i) if rest[i] < c[i] => {
                let size = summand_count(&rest[..=i]);
                BlockSpan {
                    start: pos,
                    len: i + 1,
                    kind: BlockKind::Type2,
                    size,
                }
            }
            Some(i) => {
                return Err(Legality::Illegal {
                    position: pos + i + 1,
                    reason: IllegalReason::ExceedsCoefficient,
                });
            }
            None if rest.len() < c.len() => {
                let size = summand_count(rest);
                BlockSpan {
                    start: pos,
                    len: rest.len(),
                    kind: BlockKind::Type1,
                    size,
                }
            }
            None => {
                return Err(Legality::Illegal {
                    position: pos + c.len(),
                    reason: IllegalReason::FullPrefix,
                });
            }
        };
        pos += span.len;
        spans.push(span);
    }
    Ok(spans)
}

/// Legality of a whole decomposition: `a_1 >= 1` and the string parses into
/// Type 2 blocks, optionally ending in one Type 1 block.
pub fn is_legal(spec: &RecurrenceSpec, coefficients: &[u32]) -> Legality {
    match coefficients.first() {
        None => {
            return Legality::Illegal {
                position: 0,
                reason: IllegalReason::Empty,
            }
        }
        Some(0) => {
            return Legality::Illegal {
                position: 1,
                reason: IllegalReason::LeadingZero,
            }
        }
        Some(_) => {}
    }
    is_legal_tail(spec, coefficients)
}

/// Legality of a remainder string, where leading zeros are allowed and the
/// empty string is legal.
pub fn is_legal_tail(spec: &RecurrenceSpec, coefficients: &[u32]) -> Legality {
    match scan_blocks(spec, coefficients) {
        Ok(_) => Legality::Legal,
        Err(verdict) => verdict,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockParse {
    blocks: Vec<Block>,
    spans: Vec<BlockSpan>,
}

impl BlockParse {
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn spans(&self) -> &[BlockSpan] {
        &self.spans
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Concatenated block coefficients.
    pub fn flatten(&self) -> Vec<u32> {
        self.blocks
            .iter()
            .flat_map(|b| b.coefficients().iter().copied())
            .collect()
    }

    pub fn second_to_last(&self) -> Option<&Block> {
        self.blocks.len().checked_sub(2).map(|i| &self.blocks[i])
    }
}

impl fmt::Display for BlockParse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for block in &self.blocks {
            write!(f, "{block}")?;
        }
        Ok(())
    }
}

fn parse_spans(catalog: &BlockCatalog, coefficients: &[u32], spans: Vec<BlockSpan>) -> BlockParse {
    let blocks = spans
        .iter()
        .map(|span| match span.kind {
            BlockKind::Type2 => catalog
                .type2(span.size as usize)
                .expect("parsed Type 2 size below S")
                .clone(),
            BlockKind::Type1 => catalog
                .type1_of_length(span.len)
                .expect("parsed Type 1 length below L")
                .clone(),
        })
        .collect::<Vec<_>>();
    debug_assert_eq!(
        blocks
            .iter()
            .flat_map(|b| b.coefficients().iter().copied())
            .collect::<Vec<_>>(),
        coefficients
    );
    BlockParse { blocks, spans }
}

pub fn parse_blocks(catalog: &BlockCatalog, d: &Decomposition) -> Result<BlockParse> {
    if let Legality::Illegal { position, reason } = is_legal(catalog.spec(), d.coefficients()) {
        return Err(Error::IllegalDecomposition {
            position,
            reason: reason.to_string(),
        });
    }
    parse_tail_blocks(catalog, d.coefficients())
}

/// Block parse of a remainder string (leading zeros allowed).
pub fn parse_tail_blocks(catalog: &BlockCatalog, coefficients: &[u32]) -> Result<BlockParse> {
    match scan_blocks(catalog.spec(), coefficients) {
        Ok(spans) => Ok(parse_spans(catalog, coefficients, spans)),
        Err(Legality::Illegal { position, reason }) => Err(Error::IllegalDecomposition {
            position,
            reason: reason.to_string(),
        }),
        Err(Legality::Legal) => unreachable!(),
    }
}

/// Deletes the second-to-last block, returning the shorter decomposition and
/// the removed size `t`.
///
/// With exactly two blocks the remaining last block may start with a zero,
/// which is reported as [`Error::IllegalDecomposition`].
pub fn remove_second_to_last_block(
    catalog: &BlockCatalog,
    d: &Decomposition,
) -> Result<(Decomposition, usize)> {
    let parse = parse_blocks(catalog, d)?;
    let spans = parse.spans();
    if spans.len() < 2 {
        return Err(Error::TooFewBlocks { found: spans.len() });
    }
    let removed = spans[spans.len() - 2];
    debug_assert_eq!(removed.kind, BlockKind::Type2);
    let mut coefficients = d.coefficients().to_vec();
    coefficients.drain(removed.start..removed.start + removed.len);
    if let Legality::Illegal { position, reason } = is_legal(catalog.spec(), &coefficients) {
        return Err(Error::IllegalDecomposition {
            position,
            reason: reason.to_string(),
        });
    }
    Ok((Decomposition(coefficients), removed.size as usize))
}

/// Inserts the Type 2 block of size `t` before the last block.
///
/// For a single-block input and `t = 0` the result starts with the `[0]`
/// block; it is then a legal tail string rather than a decomposition with
/// positive leading coefficient.
pub fn insert_block_before_last(
    catalog: &BlockCatalog,
    d: &Decomposition,
    t: usize,
) -> Result<Decomposition> {
    let block = catalog.type2(t)?;
    let spans = match scan_blocks(catalog.spec(), d.coefficients()) {
        Ok(spans) => spans,
        Err(Legality::Illegal { position, reason }) => {
            return Err(Error::IllegalDecomposition {
                position,
                reason: reason.to_string(),
            })
        }
        Err(Legality::Legal) => unreachable!(),
    };
    let last = spans.last().ok_or(Error::TooFewBlocks { found: 0 })?;
    let mut coefficients = Vec::with_capacity(d.len() + block.len());
    coefficients.extend_from_slice(&d.coefficients()[..last.start]);
    coefficients.extend_from_slice(block.coefficients());
    coefficients.extend_from_slice(&d.coefficients()[last.start..]);
    Ok(Decomposition(coefficients))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::{block_catalog, sequence_terms};

    fn spec(c: &[i64]) -> RecurrenceSpec {
        RecurrenceSpec::new(c).unwrap()
    }

    fn d(text: &str) -> Decomposition {
        text.parse().unwrap()
    }

    #[test]
    fn greedy_examples() {
        let fib = sequence_terms(&RecurrenceSpec::fibonacci(), 10);
        let twelve = decompose_u64(&fib, 12).unwrap();
        assert_eq!(twelve, d("1 0 1 0 1"));
        assert_eq!(twelve.term_indices(), vec![5, 3, 1]);

        let h = sequence_terms(&spec(&[2, 2, 0, 2]), 3);
        // table only holds H_1..H_3, decompose extends a private copy
        assert_eq!(decompose_u64(&h, 601).unwrap(), d("1 0 0 2 0 0 1"));
        assert_eq!(
            decompose_u64(&h, 601).unwrap().term_indices(),
            vec![7, 4, 4, 1]
        );

        let big = sequence_terms(&spec(&[3, 0, 1]), 30);
        for n in 1..=30 {
            let unit = decompose(&big, big.term(n)).unwrap();
            assert_eq!(unit.len(), n);
            assert_eq!(unit.summand_count(), 1);
            assert_eq!(unit.coefficients()[0], 1);
        }
        assert_eq!(decompose_u64(&fib, 0), Err(Error::NonPositiveInput));
    }

    #[test]
    fn greedy_respects_zero_coefficients() {
        let spec: RecurrenceSpec = "1,0,2".parse().unwrap();
        let table = sequence_terms(&spec, 8);
        assert_eq!(decompose_u64(&table, 8).unwrap(), d("1 0 1 1"));
        assert!(!is_legal(&spec, &[1, 1, 0, 0]).is_legal());
        for m in 1..2000u64 {
            let got = decompose_u64(&table, m).unwrap();
            assert!(is_legal(&spec, got.coefficients()).is_legal(), "{m}: {got}");
            assert_eq!(value(&table, &got).unwrap(), BigUint::from(m));
        }
    }

    #[test]
    fn value_examples() {
        let fib = sequence_terms(&RecurrenceSpec::fibonacci(), 6);
        assert_eq!(value(&fib, &d("1 0 1 0 1")).unwrap(), BigUint::from(12u32));
        let h = sequence_terms(&spec(&[2, 2, 0, 2]), 6);
        assert_eq!(value(&h, &d("1 0 0 2 0 1")).unwrap(), BigUint::from(215u32));
        assert_eq!(value(&h, &d("1")).unwrap(), BigUint::from(1u32));
        assert!(matches!(
            value(&fib, &d("1 1")),
            Err(Error::SpecMismatch(_))
        ));
    }

    #[test]
    fn legality_examples() {
        let fib = RecurrenceSpec::fibonacci();
        assert!(is_legal(&fib, &[1, 0, 1]).is_legal());
        assert_eq!(
            is_legal(&fib, &[1, 1]),
            Legality::Illegal {
                position: 2,
                reason: IllegalReason::FullPrefix
            }
        );
        let h = spec(&[2, 2, 0, 2]);
        assert!(is_legal(&h, &[2, 2, 0]).is_legal());
        assert_eq!(
            is_legal(&h, &[2, 2, 0, 2]),
            Legality::Illegal {
                position: 4,
                reason: IllegalReason::FullPrefix
            }
        );
        assert_eq!(
            is_legal(&h, &[2, 3]),
            Legality::Illegal {
                position: 2,
                reason: IllegalReason::ExceedsCoefficient
            }
        );
        assert_eq!(
            is_legal(&h, &[2, 2, 1]),
            Legality::Illegal {
                position: 3,
                reason: IllegalReason::ExceedsCoefficient
            }
        );
        assert_eq!(
            is_legal(&h, &[0, 1]),
            Legality::Illegal {
                position: 1,
                reason: IllegalReason::LeadingZero
            }
        );
        assert_eq!(
            is_legal(&h, &[]),
            Legality::Illegal {
                position: 0,
                reason: IllegalReason::Empty
            }
        );
        assert!(is_legal_tail(&h, &[0, 1]).is_legal());
        assert!(is_legal_tail(&h, &[]).is_legal());
    }

    #[test]
    fn parse_examples() {
        let fib = block_catalog(&RecurrenceSpec::fibonacci());
        assert_eq!(
            parse_blocks(&fib, &d("1 0 1 0 1")).unwrap().to_string(),
            "[1 0][1 0][1]"
        );
        let h = block_catalog(&spec(&[2, 2, 0, 2]));
        let parse = parse_blocks(&h, &d("1 0 0 2 0 0 1")).unwrap();
        assert_eq!(parse.to_string(), "[1][0][0][2 0][0][1]");
        assert_eq!(parse.flatten(), vec![1, 0, 0, 2, 0, 0, 1]);
        assert!(parse.blocks().iter().all(|b| b.kind() == BlockKind::Type2));

        let single = parse_blocks(&h, &d("1")).unwrap();
        assert_eq!(single.blocks()[0].kind(), BlockKind::Type2);
        let single = parse_blocks(&fib, &d("1")).unwrap();
        assert_eq!(single.blocks()[0].kind(), BlockKind::Type1);

        assert!(matches!(
            parse_blocks(&fib, &d("1 1")),
            Err(Error::IllegalDecomposition { position: 2, .. })
        ));
    }

    #[test]
    fn summand_count_examples() {
        assert_eq!(d("1 0 1 0 1").summand_count(), 3);
        assert_eq!(d("1 0 0 2 0 0 1").summand_count(), 4);
        assert_eq!(d("1 0 0 0").summand_count(), 1);
    }

    #[test]
    fn removal_examples() {
        let fib = block_catalog(&RecurrenceSpec::fibonacci());
        let (rest, t) = remove_second_to_last_block(&fib, &d("1 0 1 0 1")).unwrap();
        assert_eq!((rest.clone(), t), (d("1 0 1"), 1));
        assert_eq!(rest.term_indices(), vec![3, 1]);

        let h = block_catalog(&spec(&[2, 2, 0, 2]));
        let (rest, t) = remove_second_to_last_block(&h, &d("1 0 0 2 0 0 1")).unwrap();
        assert_eq!((rest.clone(), t), (d("1 0 0 2 0 1"), 0));
        assert_eq!(
            parse_blocks(&h, &rest).unwrap().to_string(),
            "[1][0][0][2 0][1]"
        );
        let table = sequence_terms(h.spec(), 8);
        assert_eq!(value(&table, &rest).unwrap(), BigUint::from(215u32));

        assert_eq!(
            remove_second_to_last_block(&fib, &d("1")),
            Err(Error::TooFewBlocks { found: 1 })
        );
        // [1 0][0]: dropping the first block leaves a leading zero
        assert!(matches!(
            remove_second_to_last_block(&fib, &d("1 0 0")),
            Err(Error::IllegalDecomposition { position: 1, .. })
        ));
    }

    #[test]
    fn insertion_examples() {
        let fib = block_catalog(&RecurrenceSpec::fibonacci());
        assert_eq!(
            insert_block_before_last(&fib, &d("1 0 1"), 1).unwrap(),
            d("1 0 1 0 1")
        );
        assert_eq!(
            insert_block_before_last(&fib, &d("1"), 0).unwrap(),
            d("0 1")
        );
        assert_eq!(
            insert_block_before_last(&fib, &d("1"), 2),
            Err(Error::SizeOutOfRange { t: 2, size: 2 })
        );

        let h = block_catalog(&spec(&[2, 2, 0, 2]));
        assert_eq!(
            insert_block_before_last(&h, &d("1 0 0 2 0 1"), 0).unwrap(),
            d("1 0 0 2 0 0 1")
        );
        assert_eq!(
            insert_block_before_last(&h, &d("1 0 0 2 0 1"), 5).unwrap(),
            d("1 0 0 2 0 2 2 0 1 1")
        );
    }
}
