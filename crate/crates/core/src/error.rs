use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("inhomogeneous polynomial: terms of degrees {degrees:?}")]
    Inhomogeneous { degrees: Vec<u32> },

    #[error("gcd undefined: both forms are zero")]
    GcdUndefined,

    #[error("division by the zero form")]
    ZeroDivisor,

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("entry ({row}, {col}) has degree {found}, expected {expected}")]
    EntryDegree {
        row: usize,
        col: usize,
        found: u32,
        expected: i32,
    },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("not one-dimensional: {0}")]
    NotOneDimensional(String),

    #[error("inconsistent presentation: {0}")]
    Inconsistent(String),

    #[error("profile not in table: chi {chi}, profile {profile:?}")]
    ProfileNotInTable { chi: i64, profile: [u64; 4] },

    #[error("no registry row {chi} {id}")]
    NoSuchRow { chi: i64, id: String },

    #[error("generation budget exhausted for ({chi}, {id}) with seed {seed}")]
    BudgetExhausted { chi: i64, id: String, seed: u64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("resolution incomplete at degree cap {cap}")]
    ResolutionIncomplete { cap: u32 },

    #[error("unsupported multiplicity {0} (only 6)")]
    UnsupportedMultiplicity(i64),
}

pub type Result<T> = std::result::Result<T, Error>;
