use std::io;

use thiserror::Error;

/// Every failure the toolkit can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input signal is empty")]
    EmptyInput,

    #[error("bad WAV: {0}")]
    BadWav(String),

    #[error("signal too short: need at least {needed} samples, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("bad magic: expected {expected:?}, found {found:?}")]
    BadMagic { expected: [u8; 4], found: [u8; 4] },

    #[error("unsupported file version {0}")]
    BadVersion(u32),

    #[error("file truncated while reading {0}")]
    TruncatedFile(&'static str),

    #[error("malformed file: {0}")]
    Malformed(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("normalized absolute error undefined: every prediction is zero")]
    ZeroDenominator,

    #[error("index {index} out of range for split of {len} segments")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("unknown preset {0:?}")]
    UnknownPreset(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
