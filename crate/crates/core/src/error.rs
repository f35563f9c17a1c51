use thiserror::Error;

pub type Result<T, E = HallError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HallError {
    #[error("{0} is not prime")]
    NonPrime(u32),
    #[error("field of {p}^{degree} elements exceeds the enumeration bound")]
    FieldTooLarge { p: u32, degree: u32 },
    #[error("no irreducible polynomial of degree {degree} over F_{p} found")]
    NoIrreducibleFound { p: u32, degree: u32 },
    #[error("division by zero")]
    DivisionByZero,

    #[error("malformed quiver: {0}")]
    MalformedQuiver(String),
    #[error("arrow {0} is a loop")]
    HasLoop(String),
    #[error("automorphism does not commute with source/target at arrow {0}")]
    NotEquivariant(String),
    #[error("arrow {0} joins two vertices in the same automorphism orbit")]
    NotAdmissible(String),
    #[error("dimension vector has length {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension vector {0:?} is not invariant under the automorphism")]
    NotInvariant(Vec<u32>),
    #[error("grading mismatch: {0}")]
    GradingMismatch(String),

    #[error("space of {count} points for dimension vector {dim} exceeds the enumeration bound")]
    SpaceTooLarge { dim: String, count: u128 },
    #[error("orbit of size {orbit_size} does not divide group order {group_order}")]
    NonExactDivision { orbit_size: u64, group_order: String },
    #[error("no orbit table entry: {0}")]
    MissingOrbitTable(String),
    #[error("no Hall table for grading {0}")]
    MissingHallTable(String),
    #[error("negative Ext dimension {0}: hom solver and Euler form disagree")]
    NegativeExt(i64),
    #[error("extension count {0} for middle term {1} is not a nonnegative integer")]
    NonIntegerExtCount(String, String),
    #[error("Cartan entry {0} is not an integer")]
    NonIntegerCartan(String),
}
