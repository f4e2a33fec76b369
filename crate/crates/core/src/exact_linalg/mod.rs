//! Exact integer and p-adic linear algebra.

mod int_matrix;
mod padic;
mod ring;
mod snf;
mod streaming;

pub use int_matrix::IntMatrix;
pub use padic::{padic_valuations, DivisorValuations, PadicMatrix};
pub use ring::Modulus;
pub use snf::{cokernel_partition, snf_diagonal, SylowCokernel};
pub use streaming::{streaming_block_eliminate, BlockLowerMatrix};

pub(crate) use snf::nontrivial_divisors;
