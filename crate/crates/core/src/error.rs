use alloc::string::String;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u32),
    #[error("field order {order} exceeds the configured bound {bound}")]
    SizeExceeded { order: u64, bound: u64 },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("operation needs odd characteristic")]
    EvenCharacteristic,
    #[error("operation needs characteristic 2")]
    OddCharacteristic,
    #[error("divisor is not effective")]
    NotEffective,
    #[error("divisors have overlapping support")]
    OverlappingSupport,
    #[error("{what}: size {size} exceeds cap {cap}")]
    CapExceeded { what: &'static str, size: u128, cap: u128 },
    #[error("generator is a square times a square constant")]
    IsSquareClass,
    #[error("generator gives the constant field extension")]
    ConstantFieldExtension,
    #[error("element is of the form a^2+a and generates nothing")]
    NotAGenerator,
    #[error("invalid discriminant shape: {0}")]
    InvalidDiscriminantShape(&'static str),
    #[error("no extension with the requested discriminant")]
    NoSuchDiscriminant,
    #[error("place must have odd degree")]
    EvenDegreePlace,
    #[error("element is not integral at the modulus")]
    NotIntegralAtModulus,
    #[error("modulus must be supported on finite places")]
    InfinityInModulus,
    #[error("characters live on different rings")]
    RingMismatch,
    #[error("character is not primitive")]
    NotPrimitive,
    #[error("character is principal")]
    PrincipalCharacter,
    #[error("place lies in the support of the modulus or divisor")]
    PlaceInSupport,
    #[error("modulus must be square-free")]
    NotSquarefree,
    #[error("additive character is trivial on a nonzero principal ideal")]
    DegenerateCharacter,
    #[error("given vectors do not span a proper subgroup")]
    NotASubgroup,
    #[error("zeta function has a pole at this point")]
    PoleAt,
    #[error("outside validity region: {0}")]
    OutsideValidityRegion(String),
    #[error("evaluation point hits a zero on the critical circle")]
    EvaluationOnCriticalCircle,
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = core::result::Result<T, Error>;
