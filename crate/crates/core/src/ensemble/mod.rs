//! The probability space `Omega_n` of legal decompositions of length `n`,
//! with the uniform measure.

mod enumerate;
mod polynomial;
mod sample;
mod stats;
mod zdist;

pub use enumerate::{
    count_integer_walk, count_omega, count_omega_by_z, enumerate_by_integer_walk, enumerate_omega,
    enumeration_cap, for_each_by_integer_walk, for_each_omega_value, omega_cardinality,
    tally_integer_walk, tally_omega, ConditionalTally, IntegerWalk, IntegerWalkTally, OmegaIter,
    OmegaTally, OmegaWalker, ZCounts, DEFAULT_ENUM_CAP, ENUM_CAP_ENV,
};
pub use polynomial::{summand_polynomial, SummandDp, SummandPolynomial};
pub use sample::{sample_uniform, UniformSampler};
pub use stats::{stats_from_polynomial, EnsembleStats, MomentTable};
pub(crate) use zdist::require_three_blocks;
pub use zdist::{
    conditional_from_tally, conditional_mean_check, empirical_z, identity_check, z_closed_form,
    z_distribution, ConditionalCheck, IdentityCheck, ZDistribution,
};

use crate::error::Result;
use crate::recurrence::{BlockCatalog, RecurrenceSpec, SequenceTable};

/// A recurrence together with its terms, block catalog and exact moments of
/// `K_1..K_{n_max}`. Immutable once built.
#[derive(Clone, Debug)]
pub struct Ensemble {
    table: SequenceTable,
    catalog: BlockCatalog,
    moments: MomentTable,
}

impl Ensemble {
    pub fn new(spec: &RecurrenceSpec, n_max: usize) -> Self {
        Ensemble {
            table: SequenceTable::with_terms(spec.clone(), n_max + 2),
            catalog: BlockCatalog::new(spec),
            moments: MomentTable::compute(spec, n_max),
        }
    }

    pub fn spec(&self) -> &RecurrenceSpec {
        self.table.spec()
    }

    pub fn table(&self) -> &SequenceTable {
        &self.table
    }

    pub fn catalog(&self) -> &BlockCatalog {
        &self.catalog
    }

    pub fn moments(&self) -> &MomentTable {
        &self.moments
    }

    pub fn n_max(&self) -> usize {
        self.moments.n_max()
    }

    pub fn stats(&self, n: usize) -> &EnsembleStats {
        self.moments.stats(n)
    }

    pub fn z_distribution(&self, n: usize, cap: u64) -> Result<ZDistribution> {
        z_distribution(&self.table, &self.catalog, n, cap)
    }

    pub fn identity_check(&self, n: usize) -> Result<IdentityCheck> {
        identity_check(&self.table, &self.catalog, &self.moments, n)
    }

    pub fn conditional_mean_check(&self, n: usize, t: usize, cap: u64) -> Result<ConditionalCheck> {
        conditional_mean_check(&self.catalog, &self.moments, n, t, cap)
    }

    pub fn tally(&self, n: usize, cap: u64) -> Result<OmegaTally> {
        tally_omega(&self.catalog, n, cap)
    }

    pub fn sample(&self, n: usize, count: usize, seed: u64) -> UniformSampler {
        sample_uniform(&self.table, n, count, seed)
    }
}
