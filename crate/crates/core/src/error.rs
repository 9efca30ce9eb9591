use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("prime {0} is not an odd prime")]
    BadPrime(u64),
    #[error("p^m does not fit the 62-bit residue budget (p = {p}, m = {m})")]
    PrecisionTooLarge { p: u64, m: u32 },
    #[error("value is not congruent to 1 mod p")]
    NotOneUnit,
    #[error("value is not a unit")]
    NotUnit,
    #[error("value is not divisible by p")]
    NotDivisible,
    #[error("operands live in different contexts: {0}")]
    MixedContext(String),
    #[error("p-th powers do not form a subgroup: {0}")]
    HypothesisPViolated(String),
    #[error("depth exhausted: need {needed}, have {available}")]
    DepthExhausted { needed: u32, available: u32 },
    #[error("integrality check failed: {0}")]
    IntegralityFailure(String),
    #[error("no unit pivot in column {0}")]
    NoUnitPivot(usize),
    #[error("substituted series has nonzero constant term")]
    BadSubstitution,
    #[error("series degree exhausted: need {needed}, have {available}")]
    DegreeExhausted { needed: usize, available: usize },
    #[error("operation needs an abelian group")]
    NonAbelianContext,
    #[error("vector is not in Hom^(1): character index {0}")]
    NotInHom1(usize),
    #[error("denominator is not a unit")]
    DenominatorNotUnit,
    #[error("character level {level} is below the precision {precision}")]
    LevelTooLow { level: u32, precision: u32 },
    #[error("layer mismatch: {0}")]
    LayerMismatch(String),
    #[error("cannot parse group descriptor {0:?}")]
    Parse(String),
    #[error("config error at {location}: {message}")]
    Config { location: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
