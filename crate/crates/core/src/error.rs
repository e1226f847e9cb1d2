use thiserror::Error;

use crate::lie::AxiomViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported prime {0}; expected one of 2, 3, 5, 7, 11, 13")]
    UnsupportedPrime(u64),
    #[error("{value} is not a canonical residue mod {p}")]
    NotCanonical { value: u64, p: u8 },
    #[error("inverse of zero")]
    InverseOfZero,
    #[error("elements of GF({left}) and GF({right}) cannot be combined")]
    FieldMismatch { left: u8, right: u8 },
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("subspace of dimension {sub} is not contained in the given subspace of dimension {sup}")]
    NotContained { sub: usize, sup: usize },
    #[error(
        "enumeration refused: GF({p})^{n} has {count} subspaces, outside the budget (n <= {max_n}, p <= {max_p})"
    )]
    BudgetExceeded {
        n: usize,
        p: u8,
        count: u128,
        max_n: usize,
        max_p: u8,
    },
    #[error("search refused: {0}")]
    SearchCap(String),
    #[error("Lie algebra axiom violated: {0}")]
    Axiom(AxiomViolation),
    #[error("subspace is not an ideal")]
    NotIdeal,
    #[error("subspace is not a subalgebra")]
    NotSubalgebra,
    #[error("not a chief factor: {0}")]
    NotChiefFactor(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("unknown corpus entry `{0}`")]
    UnknownCorpusEntry(String),
}

impl Error {
    /// True for failures that indicate a broken theorem check rather than bad input.
    pub fn is_verification(&self) -> bool {
        matches!(self, Error::Verification(_) | Error::Axiom(_))
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. } | Error::SearchCap(_))
    }
}
