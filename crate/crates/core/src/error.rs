use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("U^{divisor} does not divide U^{dividend}")]
    NotDivisible { dividend: u32, divisor: u32 },

    /// Adding `c·U^a` to `d·U^b` with `a != b`. Always a grading bug upstream.
    #[error("cannot add monomials of U-degree {0} and {1}")]
    DegreeMismatch(u32, u32),

    #[error("{0} is not a prime")]
    NotPrime(u32),

    #[error("unsupported theory: {0}")]
    UnsupportedTheory(String),

    #[error("invalid braid: {0}")]
    InvalidBraid(String),

    #[error("rewrite not applicable: {0}")]
    Rewrite(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("chain is not a cycle")]
    NotACycle,

    #[error("grading: {0}")]
    Grading(String),

    #[error("class is torsion; divisibility is undefined")]
    TorsionClass,

    #[error("closure is not a knot ({0} components)")]
    NotAKnot(usize),

    #[error("map site mismatch: {0}")]
    Site(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
