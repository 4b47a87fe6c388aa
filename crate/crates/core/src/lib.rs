//! Positive linear recurrence sequences, their legal (generalized
//! Zeckendorf) decompositions, and exact statistics of the number of
//! summands.
//!
//! ```
//! use plrs::{decompose_u64, parse_blocks, BlockCatalog, RecurrenceSpec, SequenceTable};
//!
//! let spec: RecurrenceSpec = "1,1".parse().unwrap();
//! let table = SequenceTable::with_terms(spec.clone(), 10);
//! let d = decompose_u64(&table, 12).unwrap();
//! assert_eq!(d.to_string(), "1 0 1 0 1");
//! let blocks = parse_blocks(&BlockCatalog::new(&spec), &d).unwrap();
//! assert_eq!(blocks.to_string(), "[1 0][1 0][1]");
//! ```

pub mod ensemble;
pub mod error;
pub mod recurrence;
pub mod scalar;
pub mod verify;
pub mod zeckendorf;

pub use ensemble::{
    enumerate_by_integer_walk, enumerate_omega, sample_uniform, stats_from_polynomial,
    summand_polynomial, Ensemble, EnsembleStats, MomentTable, SummandDp, SummandPolynomial,
    ZDistribution,
};
pub use error::{Error, Result};
pub use recurrence::{
    block_catalog, block_length, sequence_terms, validate_spec, Block, BlockCatalog, BlockKind,
    RecurrenceSpec, SequenceTable,
};
pub use scalar::{HpFloat, Scalar, DEFAULT_PRECISION};
pub use verify::{estimate_growth, verify_variance_bound, GrowthEstimate, TheoremReport};
pub use zeckendorf::{
    decompose, decompose_u64, insert_block_before_last, is_legal, parse_blocks,
    remove_second_to_last_block, summand_count, value, BlockParse, Decomposition, Legality,
};

pub use num_bigint::BigUint;
pub use num_rational::BigRational;

/// Exact rationals, the type every identity is checked in.
pub type Exact = BigRational;

pub type ExactGrowth = GrowthEstimate<BigRational>;
pub type HpGrowth = GrowthEstimate<HpFloat>;
pub type F64Growth = GrowthEstimate<f64>;

pub type ExactReport = TheoremReport<BigRational>;
pub type HpReport = TheoremReport<HpFloat>;
pub type F64Report = TheoremReport<f64>;
