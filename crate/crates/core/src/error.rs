use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// `gcd(a, N) > 1`. The shared factor is carried so callers can use it
    /// directly as a classical factor of `N`.
    #[error("{a} is not coprime to {modulus} (gcd = {gcd})")]
    NotCoprime { a: u64, modulus: u64, gcd: u64 },

    #[error("dimension {dim} exceeds the limit of {limit}")]
    DimTooLarge { dim: usize, limit: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimMismatch { expected: usize, actual: usize },

    #[error("matrix is not unitary (max |U†U - I| = {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("t = {t} is not a power of two in [N², 2N²] for N = {modulus}")]
    BadT { t: u64, modulus: u64 },

    #[error("{p} · {q} is not a factorization of {modulus} into two primes")]
    BadFactorization { modulus: u64, p: u64, q: u64 },

    #[error("{0} is not composite")]
    NotComposite(u64),

    #[error("{n} is a prime power ({base}^{exp})")]
    PrimePower { n: u64, base: u64, exp: u32 },

    #[error("{0} is even")]
    EvenInput(u64),

    #[error("no factors found within {0} attempts")]
    AttemptCapExceeded(usize),

    #[error("branch state support {support} exceeds the orbit bound {bound}")]
    StateBlowup { support: usize, bound: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
