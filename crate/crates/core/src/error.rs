use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("generator list is empty")]
    EmptyGenerators,
    #[error("generators must be positive integers")]
    ZeroGenerator,
    #[error("generators have gcd {gcd}, so the generated monoid has infinitely many gaps")]
    NotCofinite { gcd: u32 },
    #[error("gap set is not the complement of a semigroup: {x} + {y} = {} is a gap", x + y)]
    NotClosed { x: u32, y: u32 },
    #[error("gaps must be positive integers")]
    ZeroGap,
    #[error("tail start must be at least 1")]
    InvalidTail,
    #[error("conductor + multiplicity exceeds the supported element bound 2^31")]
    ElementBound,
    #[error("levels are undefined for the semigroup of all nonnegative integers")]
    UndefinedForN,
    #[error("level is only evaluated inside the window [0, c + m); {x} is outside it")]
    OutsideWindow { x: u32 },
    #[error("profile formula requires depth q >= 2 (got q = {q})")]
    FormulaDomain { q: u32 },
    #[error("invalid semigroup notation: {0}")]
    Notation(String),
}
