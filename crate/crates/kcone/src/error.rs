//! Crate-wide error type. Every variant corresponds to a reportable domain
//! failure; internal invariant violations panic instead.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A class failed the section test (x·x = -1, x·f = 1) or its
    /// coordinates are inconsistent with the class formula.
    NotASection,
    /// Section coordinates violate the denominator-3 coset congruence, or a
    /// formula that must produce integers produced a proper fraction.
    NonIntegral,
    /// Wall-reflection reduction exhausted its step cap. The input may lie
    /// outside the Tits cone, or the cap may be too small; the two cannot be
    /// distinguished, so the step count is reported as-is.
    NotReduced { steps: u64 },
    /// No reflection word matching a translation was found within the cap.
    WordNotFound,
    /// min-over-sections requires x·f > 0; the degenerate case must go
    /// through the fiber-multiple path.
    FiberDegenerate,
    /// A cone operation received no generators.
    Degenerate,
    /// A reflection was requested in a class of self-intersection != -2.
    InvalidRoot,
    /// Bad user-supplied data (parse errors, dimension mismatches).
    Malformed(String),
}

impl Error {
    /// Stable machine-readable code, used verbatim in CLI output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotASection => "NOT_A_SECTION",
            Error::NonIntegral => "NON_INTEGRAL",
            Error::NotReduced { .. } => "NOT_REDUCED",
            Error::WordNotFound => "WORD_NOT_FOUND",
            Error::FiberDegenerate => "FIBER_DEGENERATE",
            Error::Degenerate => "DEGENERATE",
            Error::InvalidRoot => "INVALID_ROOT",
            Error::Malformed(_) => "MALFORMED",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotASection => write!(f, "class is not a section class"),
            Error::NonIntegral => write!(f, "coordinates violate the denominator-3 coset structure"),
            Error::NotReduced { steps } => {
                write!(f, "not reduced within {steps} steps (outside the Tits cone, or cap too small)")
            }
            Error::WordNotFound => write!(f, "no reflection word found within the step cap"),
            Error::FiberDegenerate => write!(f, "x\u{b7}f <= 0: section minimum is undefined"),
            Error::Degenerate => write!(f, "cone has no generators"),
            Error::InvalidRoot => write!(f, "reflection class must have self-intersection -2"),
            Error::Malformed(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
