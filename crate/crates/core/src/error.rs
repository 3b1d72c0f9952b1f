use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("coefficient field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("element is not invertible: {0}")]
    NotInvertible(String),
    #[error("invalid composition: {0}")]
    Composition(String),
    #[error("variety mismatch: {0} vs {1}")]
    VarietyMismatch(String, String),
    #[error("operation undefined on the zero element")]
    ZeroElement,
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error("element is not in the p-local lattice (v_{p} = {valuation})")]
    NotInLattice { p: u64, valuation: i64 },
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("unsupported morphism: {0}")]
    UnsupportedMorphism(String),
    #[error("invalid variety {0:?}")]
    BadVariety(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("record data: {0}")]
    Records(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
