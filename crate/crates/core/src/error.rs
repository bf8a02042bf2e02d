use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("invalid field parameters: {0}")]
    InvalidSpec(String),

    #[error("{what} of size {size} exceeds the capacity bound {bound}")]
    Capacity {
        what: &'static str,
        size: u64,
        bound: u64,
    },

    #[error("domain error: {0}")]
    Domain(&'static str),

    #[error("square classes are only defined here for odd characteristic")]
    UnsupportedCharacteristic,

    #[error("element {0} does not lie in the subfield GF(q)")]
    NotInSubfield(u32),

    #[error("element index {0} is out of range")]
    OutOfRange(u64),

    #[error("the map x -> {a}x + {b}x^q is not invertible")]
    NotInvertible { a: u32, b: u32 },

    #[error("malformed group table: {0}")]
    InvalidGroupTable(String),

    #[error("invalid connection set: {0}")]
    InvalidConnectionSet(String),

    #[error("multiplicity count overflowed")]
    CountOverflow,
}

pub type Result<T> = std::result::Result<T, Error>;
