//! Exhaustive views of `Omega_n`.
//!
//! Two independent routes: [`OmegaWalker`] builds every legal string of
//! length `n` from the block grammar, and the integer walk decomposes every
//! integer in `[H_n, H_{n+1})` greedily. They must agree.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::recurrence::{Block, BlockCatalog, BlockKind, SequenceTable};
use crate::zeckendorf::{decompose, Decomposition};

/// Environment variable overriding the default enumeration cap.
pub const ENUM_CAP_ENV: &str = "PLRS_ENUM_CAP";

pub const DEFAULT_ENUM_CAP: u64 = 50_000_000;

/// The cap from `PLRS_ENUM_CAP`, falling back to [`DEFAULT_ENUM_CAP`].
pub fn enumeration_cap() -> u64 {
    std::env::var(ENUM_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ENUM_CAP)
}

pub(crate) fn check_cap(count: &BigUint, cap: u64) -> Result<u64> {
    match count.to_u64() {
        Some(c) if c <= cap => Ok(c),
        _ => Err(Error::CapExceeded {
            count: count.to_string(),
            cap,
        }),
    }
}

#[derive(Clone, Copy, Debug)]
struct Choice<'a> {
    block: &'a Block,
}

#[derive(Clone, Copy, Debug)]
struct Frame {
    pos: usize,
    choice: usize,
    summands_before: u64,
    value_before: u128,
}

/// Depth-first walk over the block grammar, visiting the strings of `Omega_n`
/// in lexicographic order of their block-size sequences (Type 2 before Type 1
/// on equal size).
///
/// The walker is a cursor: call [`advance`](Self::advance) and then read the
/// current string without allocating.
pub struct OmegaWalker<'a> {
    n: usize,
    /// Indexed by remaining length. The first block must have a positive
    /// leading coefficient.
    first: Vec<Vec<Choice<'a>>>,
    rest: Vec<Vec<Choice<'a>>>,
    coefficients: Vec<u32>,
    frames: Vec<Frame>,
    summands: u64,
    terms: Option<Vec<u128>>,
    value: u128,
    started: bool,
    done: bool,
}

impl<'a> OmegaWalker<'a> {
    pub fn new(catalog: &'a BlockCatalog, n: usize) -> Self {
        let choices = |remaining: usize, first: bool| {
            let mut list: Vec<Choice<'a>> = catalog
                .type2_blocks()
                .iter()
                .filter(|b| b.len() <= remaining && (!first || b.size() >= 1))
                .map(|block| Choice { block })
                .collect();
            // A Type 1 block can only close the string.
            if let Some(block) = catalog.type1_of_length(remaining) {
                list.push(Choice { block });
            }
            list.sort_by_key(|c| (c.block.size(), c.block.kind() == BlockKind::Type1));
            list
        };
        let first = (0..=n).map(|r| choices(r, true)).collect();
        let rest = (0..=n).map(|r| choices(r, false)).collect();
        OmegaWalker {
            n,
            first,
            rest,
            coefficients: vec![0; n],
            frames: Vec::with_capacity(n),
            summands: 0,
            terms: None,
            value: 0,
            started: false,
            done: n == 0,
        }
    }

    /// Also track the integer value of each string. Returns `None` when
    /// `H_n` does not fit in `u128`.
    pub fn with_values(mut self, table: &SequenceTable) -> Option<Self> {
        let mut table = table.clone();
        table.extend_to(self.n);
        let terms = table.terms()[..self.n]
            .iter()
            .map(|h| h.to_u128())
            .collect::<Option<Vec<_>>>()?;
        self.terms = Some(terms);
        Some(self)
    }

    fn choices(&self, pos: usize) -> &[Choice<'a>] {
        if pos == 0 {
            &self.first[self.n]
        } else {
            &self.rest[self.n - pos]
        }
    }

    fn end(&self) -> usize {
        self.frames
            .last()
            .map_or(0, |f| f.pos + self.choices(f.pos)[f.choice].block.len())
    }

    fn push(&mut self, pos: usize, choice: usize) {
        let block = self.choices(pos)[choice].block;
        let frame = Frame {
            pos,
            choice,
            summands_before: self.summands,
            value_before: self.value,
        };
        self.coefficients[pos..pos + block.len()].copy_from_slice(block.coefficients());
        self.summands += block.size();
        if let Some(terms) = &self.terms {
            for (i, &a) in block.coefficients().iter().enumerate() {
                self.value += a as u128 * terms[self.n - pos - i - 1];
            }
        }
        self.frames.push(frame);
    }

    fn descend(&mut self) -> bool {
        loop {
            let pos = self.end();
            if pos == self.n {
                return true;
            }
            if self.choices(pos).is_empty() {
                return false;
            }
            self.push(pos, 0);
        }
    }

    fn next_sibling(&mut self) -> bool {
        while let Some(frame) = self.frames.pop() {
            self.summands = frame.summands_before;
            self.value = frame.value_before;
            if frame.choice + 1 < self.choices(frame.pos).len() {
                self.push(frame.pos, frame.choice + 1);
                return true;
            }
        }
        false
    }

    /// Moves to the next string; `false` once the walk is exhausted.
    pub fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        let mut found = if self.started { false } else { self.descend() };
        self.started = true;
        loop {
            if found {
                return true;
            }
            if !self.next_sibling() {
                self.done = true;
                return false;
            }
            found = self.descend();
        }
    }

    pub fn coefficients(&self) -> &[u32] {
        &self.coefficients
    }

    pub fn summand_count(&self) -> u64 {
        self.summands
    }

    pub fn value(&self) -> Option<u128> {
        self.terms.as_ref().map(|_| self.value)
    }

    pub fn block_count(&self) -> usize {
        self.frames.len()
    }

    /// The `i`-th block of the current string.
    pub fn block(&self, i: usize) -> &'a Block {
        let frame = self.frames[i];
        self.choices(frame.pos)[frame.choice].block
    }

    /// Size of the second-to-last block, if there are at least two blocks.
    pub fn second_to_last_size(&self) -> Option<u64> {
        self.frames
            .len()
            .checked_sub(2)
            .map(|i| self.block(i).size())
    }
}

/// Every element of `Omega_n`, each exactly once.
pub struct OmegaIter<'a> {
    walker: OmegaWalker<'a>,
}

impl Iterator for OmegaIter<'_> {
    type Item = Decomposition;

    fn next(&mut self) -> Option<Decomposition> {
        if self.walker.advance() {
            Some(Decomposition::new(self.walker.coefficients().to_vec()))
        } else {
            None
        }
    }
}

pub fn enumerate_omega(catalog: &BlockCatalog, n: usize) -> OmegaIter<'_> {
    OmegaIter {
        walker: OmegaWalker::new(catalog, n),
    }
}

/// `decompose(m)` for every `m` in `[H_n, H_{n+1})`, in increasing order.
pub struct IntegerWalk {
    table: SequenceTable,
    next: BigUint,
    end: BigUint,
}

impl Iterator for IntegerWalk {
    type Item = Decomposition;

    fn next(&mut self) -> Option<Decomposition> {
        if self.next >= self.end {
            return None;
        }
        let d = decompose(&self.table, &self.next).expect("walk starts at H_n >= 1");
        self.next += 1u32;
        Some(d)
    }
}

pub fn enumerate_by_integer_walk(table: &SequenceTable, n: usize, cap: u64) -> Result<IntegerWalk> {
    let mut table = table.clone();
    table.extend_to(n + 1);
    check_cap(&table.omega_size(n), cap)?;
    let next = table.term(n).clone();
    let end = table.term(n + 1).clone();
    Ok(IntegerWalk { table, next, end })
}

/// Decompositions of every `m` in `[H_n, H_{n+1})` in increasing order,
/// produced by splitting the integer range digit by digit instead of
/// decomposing each `m` separately. `visit` receives the digits, `m` and the
/// summand count.
pub fn for_each_by_integer_walk<F>(
    table: &SequenceTable,
    n: usize,
    cap: u64,
    mut visit: F,
) -> Result<u64>
where
    F: FnMut(&[u32], u64, u64),
{
    let mut table = table.clone();
    table.extend_to(n + 1);
    let count = check_cap(&table.omega_size(n), cap)?;
    let terms = table.terms_u64(n + 1).ok_or_else(|| Error::CapExceeded {
        count: table.omega_size(n).to_string(),
        cap,
    })?;
    let c: Vec<u64> = table
        .spec()
        .coefficients()
        .iter()
        .map(|&a| a as u64)
        .collect();
    let reach = tail_reach(&terms, &c, n);

    struct Walk<'a, F> {
        terms: &'a [u64],
        c: &'a [u64],
        reach: &'a [Vec<u64>],
        digits: Vec<u32>,
        n: usize,
        visit: F,
    }

    impl<F: FnMut(&[u32], u64, u64)> Walk<'_, F> {
        // Values base + [0, limit) with `level` digits left and `matched`
        // digits of the current block equal to c_1..c_matched.
        fn split(
            &mut self,
            level: usize,
            limit: u64,
            base: u64,
            k: u64,
            matched: usize,
            skip_zero: bool,
        ) {
            if level == 0 {
                (self.visit)(&self.digits, base, k);
                return;
            }
            let cap = self.c[matched];
            if level == 1 {
                // H_1 = 1 and every remaining tail is empty.
                let top = (limit - 1).min(cap);
                for q in u64::from(skip_zero)..=top {
                    if q == cap && matched + 1 == self.c.len() {
                        break;
                    }
                    self.digits[self.n - 1] = q as u32;
                    (self.visit)(&self.digits, base + q, k + q);
                }
                return;
            }
            let h = self.terms[level - 1];
            let top = if limit > cap * h {
                cap
            } else {
                (limit - 1) / h
            };
            for q in u64::from(skip_zero)..=top {
                let (sub, next) = if q < cap {
                    (h.min(limit - q * h), 0)
                } else {
                    (
                        self.reach[level - 1][matched + 1].min(limit - q * h),
                        matched + 1,
                    )
                };
                if sub == 0 {
                    continue;
                }
                self.digits[self.n - level] = q as u32;
                self.split(level - 1, sub, base + q * h, k + q, next, false);
            }
        }
    }

    let mut walk = Walk {
        terms: &terms,
        c: &c,
        reach: &reach,
        digits: vec![0; n],
        n,
        visit: &mut visit,
    };
    walk.split(n, terms[n], 0, 0, 0, true);
    Ok(count)
}

/// Per-size statistics of elements whose second-to-last block has size `t`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConditionalTally {
    pub count: u64,
    pub sum_k: u128,
    pub sum_k2: u128,
}

/// Everything the exact checks need from one pass over `Omega_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaTally {
    pub n: usize,
    pub count: u64,
    /// `histogram[k]` elements with `k` summands.
    pub histogram: Vec<u64>,
    /// Indexed by second-to-last block size; empty when `Omega_n` has
    /// elements with fewer than two blocks.
    pub by_z: Vec<ConditionalTally>,
}

/// Block options per remaining length, split into blocks that end the
/// string (`last`, by size) and blocks that leave room for more (`inner`,
/// as `(length, size)`). The first block must have a positive leading
/// coefficient.
struct GrammarOptions {
    first: (Vec<u64>, Vec<(usize, u64)>),
    last: Vec<Vec<u64>>,
    inner: Vec<Vec<(usize, u64)>>,
}

impl GrammarOptions {
    fn new(catalog: &BlockCatalog, n: usize) -> Self {
        let options = |r: usize, first: bool| {
            let mut blocks: Vec<&Block> = catalog
                .type2_blocks()
                .iter()
                .filter(|b| b.len() <= r && (!first || b.size() >= 1))
                .collect();
            blocks.extend(catalog.type1_of_length(r));
            let last = blocks
                .iter()
                .filter(|b| b.len() == r)
                .map(|b| b.size())
                .collect();
            let inner = blocks
                .iter()
                .filter(|b| b.len() < r)
                .map(|b| (b.len(), b.size()))
                .collect();
            (last, inner)
        };
        let (last, inner) = (0..=n).map(|r| options(r, false)).unzip();
        GrammarOptions {
            first: options(n, true),
            last,
            inner,
        }
    }
}

struct TallyState<'a> {
    options: &'a GrammarOptions,
    histogram: Vec<u64>,
    by_z: Vec<ConditionalTally>,
}

impl TallyState<'_> {
    /// Strings after a prefix with `k` summands whose last block has size
    /// `previous`, with `remaining` positions left.
    fn descend(&mut self, remaining: usize, k: u64, previous: u64) {
        let options = self.options;
        for &size in &options.last[remaining] {
            let total = k + size;
            self.histogram[total as usize] += 1;
            let slot = &mut self.by_z[previous as usize];
            slot.count += 1;
            slot.sum_k += total as u128;
            slot.sum_k2 += (total as u128) * (total as u128);
        }
        for &(len, size) in &options.inner[remaining] {
            self.descend(remaining - len, k + size, size);
        }
    }
}

/// One grammar walk over `Omega_n` tallying summand counts and
/// second-to-last block sizes, visiting every element individually.
pub fn tally_omega(catalog: &BlockCatalog, n: usize, cap: u64) -> Result<OmegaTally> {
    let table = SequenceTable::with_terms(catalog.spec().clone(), n + 1);
    check_cap(&table.omega_size(n), cap)?;

    let options = GrammarOptions::new(catalog, n);
    let max_ratio = catalog
        .type2_blocks()
        .iter()
        .map(|b| b.size())
        .max()
        .unwrap_or(0)
        + catalog.type1_blocks().last().map_or(0, |b| b.size());
    let mut state = TallyState {
        options: &options,
        histogram: vec![0; (n as u64 * max_ratio.max(1) + 1) as usize],
        by_z: vec![ConditionalTally::default(); catalog.spec().size() as usize],
    };
    // Single-block strings have no second-to-last block.
    let single = &options.first.0;
    for &size in single {
        state.histogram[size as usize] += 1;
    }
    for &(len, size) in &options.first.1 {
        state.descend(n - len, size, size);
    }
    let TallyState {
        mut histogram,
        mut by_z,
        ..
    } = state;
    let count = histogram.iter().sum();
    while histogram.last() == Some(&0) {
        histogram.pop();
    }
    if !single.is_empty() {
        by_z.clear();
    }
    Ok(OmegaTally {
        n,
        count,
        histogram,
        by_z,
    })
}

/// Elements of `Omega_n` grouped by the size of their second-to-last block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZCounts {
    pub n: usize,
    /// Elements made of a single block.
    pub single: u64,
    /// `by_z[t]`: elements whose second-to-last block has size `t`.
    pub by_z: Vec<u64>,
}

impl ZCounts {
    pub fn total(&self) -> u64 {
        self.single + self.by_z.iter().sum::<u64>()
    }
}

/// Grammar walk over every prefix of `Omega_n`, counting the closing blocks
/// available at each prefix instead of visiting each element.
pub fn count_omega_by_z(catalog: &BlockCatalog, n: usize, cap: u64) -> Result<ZCounts> {
    let table = SequenceTable::with_terms(catalog.spec().clone(), n + 1);
    check_cap(&table.omega_size(n), cap)?;
    let options = GrammarOptions::new(catalog, n);

    let closing: Vec<u64> = options.last.iter().map(|l| l.len() as u64).collect();
    // Prefixes whose every continuation is a closing block are counted in
    // their parent's loop.
    fn descend(
        options: &GrammarOptions,
        closing: &[u64],
        by_z: &mut [u64],
        remaining: usize,
        previous: u64,
    ) {
        by_z[previous as usize] += closing[remaining];
        for &(len, size) in &options.inner[remaining] {
            let rest = remaining - len;
            if options.inner[rest].is_empty() {
                by_z[size as usize] += closing[rest];
            } else {
                descend(options, closing, by_z, rest, size);
            }
        }
    }
    let mut by_z = vec![0; catalog.spec().size() as usize];
    for &(len, size) in &options.first.1 {
        descend(&options, &closing, &mut by_z, n - len, size);
    }
    Ok(ZCounts {
        n,
        single: options.first.0.len() as u64,
        by_z,
    })
}

/// `|Omega_n|` counted by the grammar walk.
pub fn count_omega(catalog: &BlockCatalog, n: usize, cap: u64) -> Result<u64> {
    count_omega_by_z(catalog, n, cap).map(|z| z.total())
}

/// `|Omega_n|` counted by the integer walk: every digit prefix is visited
/// and the admissible last digits are counted.
pub fn count_integer_walk(table: &SequenceTable, n: usize, cap: u64) -> Result<u64> {
    let mut table = table.clone();
    table.extend_to(n + 1);
    check_cap(&table.omega_size(n), cap)?;
    let terms = table.terms_u64(n + 1).ok_or_else(|| Error::CapExceeded {
        count: table.omega_size(n).to_string(),
        cap,
    })?;
    let c: Vec<u64> = table
        .spec()
        .coefficients()
        .iter()
        .map(|&a| a as u64)
        .collect();
    let width = c.len() + 1;
    let reach: Vec<u64> = tail_reach(&terms, &c, n).concat();

    struct Walk<'a> {
        terms: &'a [u64],
        c: &'a [u64],
        reach: &'a [u64],
        width: usize,
    }

    impl Walk<'_> {
        // Admissible last digits below `limit` after `matched` block digits.
        #[inline(always)]
        fn last_digits(&self, limit: u64, matched: usize, start: u64) -> u64 {
            let cap = self.c[matched];
            let top = (limit - 1).min(cap);
            let closes = top == cap && matched + 1 == self.c.len();
            (top + 1).saturating_sub(start) - u64::from(closes && top >= start)
        }

        // Digit `q` at a level with place value `h`: the value range left
        // for the remaining digits and the new block state.
        #[inline(always)]
        fn child(&self, level: usize, h: u64, limit: u64, matched: usize, q: u64) -> (u64, usize) {
            if q < self.c[matched] {
                (h.min(limit - q * h), 0)
            } else {
                let reach = self.reach[(level - 1) * self.width + matched + 1];
                (reach.min(limit - q * h), matched + 1)
            }
        }

        #[inline(always)]
        fn top(&self, h: u64, limit: u64, matched: usize) -> u64 {
            let cap = self.c[matched];
            if limit > cap * h {
                cap
            } else {
                (limit - 1) / h
            }
        }

        // Two digits left.
        #[inline(always)]
        fn pair(&self, limit: u64, matched: usize, start: u64) -> u64 {
            let h = self.terms[1];
            let mut count = 0;
            for q in start..=self.top(h, limit, matched) {
                let (sub, next) = self.child(2, h, limit, matched, q);
                if sub > 0 {
                    count += self.last_digits(sub, next, 0);
                }
            }
            count
        }

        fn split(&self, level: usize, limit: u64, matched: usize, start: u64) -> u64 {
            let h = self.terms[level - 1];
            let mut count = 0;
            for q in start..=self.top(h, limit, matched) {
                let (sub, next) = self.child(level, h, limit, matched, q);
                if sub == 0 {
                    continue;
                }
                count += if level == 3 {
                    self.pair(sub, next, 0)
                } else {
                    self.split(level - 1, sub, next, 0)
                };
            }
            count
        }
    }

    let walk = Walk {
        terms: &terms,
        c: &c,
        reach: &reach,
        width,
    };
    let limit = terms[n];
    Ok(match n {
        1 => walk.last_digits(limit, 0, 1),
        2 => walk.pair(limit, 0, 1),
        _ => walk.split(n, limit, 0, 1),
    })
}

/// `reach[r][j]`: number of tails of length `r` continuing a block whose
/// digits so far equal `c_1..c_j`. These tails take exactly the values
/// `0..reach[r][j]`, and `reach[r][0] = H_{r+1}`.
fn tail_reach(terms: &[u64], c: &[u64], n: usize) -> Vec<Vec<u64>> {
    let length = c.len();
    let mut reach = vec![vec![0u64; length + 1]; n + 1];
    reach[0][..length].fill(1);
    for r in 1..=n {
        for j in 0..length {
            reach[r][j] = c[j] * terms[r - 1] + reach[r - 1][j + 1];
        }
    }
    reach
}

/// Calls `visit` with the integer value of every element of `Omega_n`,
/// built from the block grammar.
pub fn for_each_omega_value<F: FnMut(u128)>(
    catalog: &BlockCatalog,
    n: usize,
    cap: u64,
    mut visit: F,
) -> Result<u64> {
    let table = SequenceTable::with_terms(catalog.spec().clone(), n + 1);
    let count = check_cap(&table.omega_size(n), cap)?;
    let terms = table.terms()[..n]
        .iter()
        .map(|h| h.to_u128())
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::CapExceeded {
            count: table.omega_size(n).to_string(),
            cap,
        })?;

    // (length, value of the block when it starts at remaining length r)
    let options = |r: usize, first: bool| -> Vec<(usize, u128)> {
        let mut blocks: Vec<&Block> = catalog
            .type2_blocks()
            .iter()
            .filter(|b| b.len() <= r && (!first || b.size() >= 1))
            .collect();
        blocks.extend(catalog.type1_of_length(r));
        blocks
            .into_iter()
            .map(|b| {
                let v = b
                    .coefficients()
                    .iter()
                    .enumerate()
                    .map(|(i, &a)| a as u128 * terms[r - i - 1])
                    .sum();
                (b.len(), v)
            })
            .collect()
    };
    let rest: Vec<Vec<(usize, u128)>> = (0..=n).map(|r| options(r, false)).collect();

    fn descend<F: FnMut(u128)>(
        rest: &[Vec<(usize, u128)>],
        remaining: usize,
        value: u128,
        visit: &mut F,
    ) {
        for &(len, v) in &rest[remaining] {
            if len == remaining {
                visit(value + v);
            } else {
                descend(rest, remaining - len, value + v, visit);
            }
        }
    }
    for (len, v) in options(n, true) {
        if len == n {
            visit(v);
        } else {
            descend(&rest, n - len, v, &mut visit);
        }
    }
    Ok(count)
}

/// `|Omega_n| = H_{n+1} - H_n`.
pub fn omega_cardinality(table: &SequenceTable, n: usize) -> BigUint {
    let mut table = table.clone();
    table.extend_to(n + 1);
    let size = table.omega_size(n);
    debug_assert!(size >= BigUint::one());
    size
}

/// Count and summand-count histogram from the integer walk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerWalkTally {
    pub n: usize,
    pub count: u64,
    pub histogram: Vec<u64>,
}

pub fn tally_integer_walk(table: &SequenceTable, n: usize, cap: u64) -> Result<IntegerWalkTally> {
    let mut histogram = Vec::new();
    let mut count = 0u64;
    for_each_by_integer_walk(table, n, cap, |_, _, k| {
        if k as usize >= histogram.len() {
            histogram.resize(k as usize + 1, 0);
        }
        histogram[k as usize] += 1;
        count += 1;
    })?;
    Ok(IntegerWalkTally {
        n,
        count,
        histogram,
    })
}
