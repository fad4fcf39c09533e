//! Shared error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two series cannot be combined (different exponent scales, or a
    /// division pivot that is not a variable of the series).
    #[error("incompatible series: {0}")]
    IncompatibleSeries(String),

    /// A coefficient was requested outside the window where it is provably
    /// complete.
    #[error("coefficient at {exponents:?} of a series in {vars:?} lies outside the complete window ({window})")]
    IncompleteCoefficient {
        vars: Vec<String>,
        exponents: Vec<i64>,
        window: String,
    },

    /// A truncation or division request cannot be certified from the
    /// operand's window; the message names the degrees that are lost.
    #[error("window collapse: {0}")]
    WindowCollapse(String),

    /// Exact division failed; the divisor does not divide the series.
    #[error("nonzero remainder dividing by {divisor}: first offending coefficient {coeff} at {exponents:?}")]
    DivisionRemainder {
        divisor: String,
        exponents: Vec<i64>,
        coeff: String,
    },

    /// Character of a pair of partitions of different sizes.
    #[error("character size mismatch: |lambda| = {lambda_size}, |mu| = {mu_size}")]
    CharacterSizeMismatch { lambda_size: u64, mu_size: u64 },

    /// A coordinate table does not cover a requested entry.
    #[error("coordinate table ({kind}, max weight {max_weight}) does not cover entry ({n}, {m})")]
    TableCoverage {
        kind: String,
        max_weight: u32,
        n: i64,
        m: i64,
    },

    /// A verifier or expansion was asked for more than the truncation can
    /// guarantee.
    #[error("truncation too shallow: {0}")]
    TruncationTooShallow(String),

    /// Positive exponents failed to cancel in an n-point sum; the expansion
    /// conventions are inconsistent.
    #[error("cancellation failure: nonzero coefficient {coeff} at {exponents:?} (all exponents should be <= -2)")]
    CancellationFailure {
        exponents: Vec<i64>,
        coeff: String,
    },

    /// Malformed input (parsing a rational or a serialized series).
    #[error("parse error: {0}")]
    Parse(String),
}
