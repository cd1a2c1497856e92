use alloc::string::String;
use core::fmt;

/// Error type shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Degree outside the supported 3..=6 range for group enumeration.
    UnsupportedDegree(u32),
    /// A structural invariant of an input object does not hold.
    InvariantViolation(String),
    /// Argument outside the documented domain of an operation.
    Domain(String),
    /// Two rate vectors do not share the same label set.
    Shape(String),
    /// A model or instance exceeds the exact-enumeration envelope.
    TooLarge(String),
    /// A Sanov model with no primes.
    EmptyModel,
    /// A modulus that was required to be prime is not.
    InvalidPrime(u64),
    /// Malformed polynomial or form input.
    InvalidInput(String),
    /// Operation defined only for irreducible polynomials.
    ReduciblePolynomial,
    /// Two independent internal evaluation routes disagreed.
    InternalInconsistency(String),
    /// Request outside the implemented envelope.
    Unsupported(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnsupportedDegree(d) => write!(f, "unsupported degree {d}, expected 3..=6"),
            Error::InvariantViolation(s) => write!(f, "invariant violation: {s}"),
            Error::Domain(s) => write!(f, "domain error: {s}"),
            Error::Shape(s) => write!(f, "shape error: {s}"),
            Error::TooLarge(s) => write!(f, "instance too large: {s}"),
            Error::EmptyModel => write!(f, "model has no primes"),
            Error::InvalidPrime(p) => write!(f, "{p} is not prime"),
            Error::InvalidInput(s) => write!(f, "invalid input: {s}"),
            Error::ReduciblePolynomial => write!(f, "polynomial is reducible over the rationals"),
            Error::InternalInconsistency(s) => write!(f, "internal inconsistency: {s}"),
            Error::Unsupported(s) => write!(f, "unsupported: {s}"),
        }
    }
}
