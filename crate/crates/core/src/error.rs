use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong in the walk, hash, keyed and statistics layers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A numeric argument fell outside the domain of the operation.
    Domain(&'static str),
    /// Coin angle outside `(0, π/2)`, equal to `π/4`, or `theta1 == theta2`.
    InvalidTheta(&'static str),
    /// Initial position amplitudes are not normalized (or have the wrong length).
    InvalidAlpha(&'static str),
    /// Block width or digest length not representable.
    InvalidSize(&'static str),
    SizeMismatch { expected: usize, found: usize },
    /// The initialization step left some position with zero probability.
    DegenerateInit { position: usize },
    InvalidKey(&'static str),
    EmptyMessage,
    /// Malformed textual input (hex digests and the like).
    Parse(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::InvalidTheta(msg) => write!(f, "invalid theta: {msg}"),
            Error::InvalidAlpha(msg) => write!(f, "invalid alpha: {msg}"),
            Error::InvalidSize(msg) => write!(f, "invalid size: {msg}"),
            Error::SizeMismatch { expected, found } => {
                write!(f, "size mismatch: expected {expected}, found {found}")
            }
            Error::DegenerateInit { position } => {
                write!(f, "degenerate initial state: position {position} has zero probability")
            }
            Error::InvalidKey(msg) => write!(f, "invalid key: {msg}"),
            Error::EmptyMessage => f.write_str("message is empty"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
