use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("variable name `{0}` is reserved")]
    ReservedVariable(String),

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("cannot drop generators: {0}")]
    InvalidDrop(String),

    #[error("inadmissible weight: {0}")]
    InadmissibleWeight(String),

    #[error("F and G are not coprime (common factor of degree {0})")]
    NotCoprime(u32),

    #[error("G must be nonzero")]
    ZeroDenominator,

    #[error("F and G are not quasi-homogeneous for the given weights: {0}")]
    NotQuasiHomogeneous(String),

    #[error("every element of the ideal vanishes on the line s2 = -s1 - {m} - 2")]
    ZeroSpecialization { m: u32 },

    #[error("cannot specialize: {0}")]
    NotSpecializable(String),

    #[error("capability limit: {0}")]
    Capability(String),

    #[error("oracle disagreement: {0}")]
    OracleDisagreement(String),

    #[error("invalid chart data: {0}")]
    InvalidChart(String),

    #[error("residue {0} is not a root of the b-function")]
    NotARoot(Rational),
}

pub type Result<T> = std::result::Result<T, Error>;
