use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition {0:?}: parts must be positive and weakly decreasing")]
    InvalidPartition(Vec<u32>),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("residue {value} is not reduced modulo {modulus}")]
    UnreducedResidue { value: String, modulus: String },

    #[error("malformed block layout: {0}")]
    Structure(String),

    #[error("group of order {order} exceeds the enumeration guard of {limit} elements")]
    GroupTooLarge { order: String, limit: usize },

    #[error("subgroup lattice has more than {limit} subgroups")]
    LatticeTooLarge { limit: usize },

    #[error("enumeration of {size} cases exceeds the guard of {limit}")]
    EnumerationTooLarge { size: String, limit: u64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("partition {lambda} has more than d = {d} parts")]
    TooManyParts { lambda: String, d: usize },

    #[error("trial has free rank {0}; the Sylow p-subgroup of the cokernel is not finite")]
    FreeRank(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parameter mismatch: {0}")]
    Mismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Errors caused by the user's input rather than by the computation.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_)
                | Error::NotPrime(_)
                | Error::InvalidPartition(_)
                | Error::TooManyParts { .. }
                | Error::Json(_)
                | Error::Mismatch(_)
        )
    }
}
