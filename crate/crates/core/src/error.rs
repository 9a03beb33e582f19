use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("gamma tower needs an even d with 2 <= d <= {max}, got {d}")]
    InvalidGammaDimension { d: usize, max: usize },

    #[error("dimension {0} is not a power of two >= 2")]
    NotPowerOfTwo(usize),

    #[error("the {convention} convention is only defined for N = {supported}, got N = {n}")]
    UnsupportedConvention {
        convention: &'static str,
        supported: usize,
        n: usize,
    },

    #[error("generator basis for N = {dim} exceeds the supported maximum N = {max}")]
    BasisTooLarge { dim: usize, max: usize },

    #[error("star product undefined for N=2 (the 1/(N-2) factor is singular); pure effects satisfy e.e = 1 alone")]
    StarProductUndefined,

    #[error("vector length {got} does not match expected length {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("state requires n <= m (N <= M), got n = {n}, m = {m}")]
    SubsystemOrder { n: usize, m: usize },

    #[error("closed-form spectrum requires x = y = 0")]
    NonzeroLocalVectors,

    #[error("state is not physical (minimum closed-form eigenvalue {min_eigenvalue:e})")]
    NotPhysical { min_eigenvalue: f64 },

    #[error("matrix dimension {got} does not match subsystem dimensions {n} x {m}")]
    DimensionMismatch { got: usize, n: usize, m: usize },

    #[error("invalid entropy parameter: {0}")]
    InvalidEntropy(String),

    #[error("oracle budget must be at least 1")]
    EmptyBudget,

    #[error("measurement outcome has zero probability")]
    ZeroProbability,

    #[error("measuring subsystem B is only supported for N = M")]
    UnsupportedSide,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid state descriptor: {0}")]
    Descriptor(String),
}

pub type Result<T> = std::result::Result<T, Error>;
