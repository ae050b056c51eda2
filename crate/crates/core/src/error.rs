use std::path::PathBuf;

/// Errors produced by the transforms, regularizers, solvers and harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("patch size {patch} exceeds image dimensions {rows}x{cols}")]
    ScaleTooLarge { patch: usize, rows: usize, cols: usize },

    #[error("frequency cutoff {cutoff} is outside 1..={patch}")]
    InvalidCutoff { cutoff: usize, patch: usize },

    #[error("truncation rank {rank} exceeds min dimension {max}")]
    InvalidRank { rank: usize, max: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("solver diverged at iteration {iteration}: non-finite iterate")]
    Divergence { iteration: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{}: unsupported bit depth ({detail})", path.display())]
    UnsupportedDepth { path: PathBuf, detail: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the CLI for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::Image { .. } | Error::UnsupportedDepth { .. } => 2,
            Error::Divergence { .. } => 3,
            _ => 1,
        }
    }
}
