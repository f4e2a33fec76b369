//! Random integer matrix ensembles and their deterministic samplers.
//!
//! Every sample is a pure function of `(master_seed, trial)`. Entries are drawn as
//! integers independent of any modulus, so a trial can be reduced again at a higher
//! precision and yield the same integer matrix.

mod distribution;
mod sampler;
mod schedule;
mod spec;

pub use distribution::EntryDistribution;
pub use sampler::{
    build_bidiagonal_embedding, build_bidiagonal_embedding_int, sample_block_matrix, sample_product, trial_rng,
    BlockSample, FactorSample, Sampler, GENERATOR_ID,
};
pub use schedule::KSchedule;
pub use spec::{default_precision, EnsembleSpec, Layout};
