//! Exact oracles: small-scale identities and bounds checked with rational arithmetic
//! by full enumeration.

mod balanced;
mod chains;
mod identities;
mod law;
mod suites;

pub use balanced::{verify_balanced_sums, verify_residual_bound, BalancedSums, ResidualBound, BALANCED_ENUMERATION_LIMIT};
pub use chains::{
    count_w0_sequences, count_w0_sequences_brute_force, sequence_wt, verify_chain_claim, verify_w0_decomposition,
    w0_count_target, w0_sum_by_enumeration, wt_statistics, W0BlockLaw, W0Decomposition, WtStatistics,
};
pub use identities::{
    cok_identity, hom_count_brute_force, verify_cok_identity, verify_moment_identity, CokIdentity, MomentIdentity,
    ENUMERATION_LIMIT, MAX_EMBEDDING_DIM,
};
pub use law::{row_distribution, EntryLaw, FiniteSupportMatrixLaw};
pub use suites::{bernoulli_s_max_closed_form, run_suite, CheckOutcome, Suite, SuiteOutcome, CHAIN_SEQUENCES, COK_INSTANCES, SUITE_SEED};
