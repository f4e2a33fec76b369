//! Finite abelian p-groups `G_λ`: partitions, element arithmetic, subgroup lattices,
//! chain counts and Hom counts.

mod group;
mod lattice;
mod partition;
mod types;

pub use group::{hom_count, AbelianPGroup, ElementTable, Subgroup, MAX_ENUMERATED_ORDER};
pub use lattice::{chain_count, enumerate_subgroups, SubgroupLattice, MAX_SUBGROUPS};
pub use partition::{partitions_of, partitions_up_to, Partition};
pub use types::{chain_counts_by_type, gaussian_binomial, sub_partitions, subgroup_count_of_type};
