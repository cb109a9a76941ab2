use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("extension degree {n} is outside the supported range 1..=19")]
    SizeLimit { n: usize },

    #[error("modulus {coeffs:?} is not a primitive polynomial of degree {n} over F_3")]
    NotPrimitive { n: usize, coeffs: Vec<u8> },

    #[error("malformed modulus: {0}")]
    BadModulus(String),

    #[error("zero raised to the non-positive power {exp}")]
    ZeroToNonpositive { exp: i64 },

    #[error("Eisenstein integer overflow")]
    Overflow,

    #[error("extension degree {n} must be odd (n = 2m + 1)")]
    BadDegree { n: usize },

    #[error("decimation t = {t} is not coprime to q - 1 = {q_minus_1}")]
    BadT { t: u64, q_minus_1: u64 },

    #[error("v = {v} is coprime to q - 1 = {q_minus_1}; use the non-multiplexing transform")]
    BadV { v: u64, q_minus_1: u64 },

    #[error("residue {a} is the all-ones word and has no run decomposition")]
    AllOnes { a: u64 },

    #[error("lemma instance outside its domain: {0}")]
    LemmaDomain(String),

    #[error("pair (v = {v}, t = {t}) is not realizable")]
    NotRealizable { v: u64, t: u64 },

    #[error("neither unit 1 nor 2 reproduces the exact realization table")]
    CalibrationMismatch,

    #[error("realization sum {value} does not lie in the prime field")]
    NotInPrimeField { value: u32 },

    #[error("no decomposition alpha^i = gamma * lambda^(vt) for index {index}")]
    NoSolution { index: u64 },

    #[error("unknown report format {0:?}")]
    UnknownFormat(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
