use num_bigint::{BigUint, RandBigInt};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::recurrence::SequenceTable;
use crate::zeckendorf::{decompose, Decomposition};

/// Uniform draws from `Omega_n`: integers uniform on `[H_n, H_{n+1})`,
/// each decomposed greedily. The stream depends only on `seed`.
pub struct UniformSampler {
    table: SequenceTable,
    low: BigUint,
    high: BigUint,
    rng: ChaCha8Rng,
    remaining: usize,
}

impl UniformSampler {
    pub fn new(table: &SequenceTable, n: usize, count: usize, seed: u64) -> Self {
        let mut table = table.clone();
        table.extend_to(n + 1);
        let low = table.term(n).clone();
        let high = table.term(n + 1).clone();
        UniformSampler {
            table,
            low,
            high,
            rng: ChaCha8Rng::seed_from_u64(seed),
            remaining: count,
        }
    }

    /// Next integer only, without decomposing it.
    pub fn next_value(&mut self) -> Option<BigUint> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        Some(self.rng.gen_biguint_range(&self.low, &self.high))
    }
}

impl Iterator for UniformSampler {
    type Item = Decomposition;

    fn next(&mut self) -> Option<Decomposition> {
        let m = self.next_value()?;
        Some(decompose(&self.table, &m).expect("sampled value is at least H_n >= 1"))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

pub fn sample_uniform(table: &SequenceTable, n: usize, count: usize, seed: u64) -> UniformSampler {
    UniformSampler::new(table, n, count, seed)
}
