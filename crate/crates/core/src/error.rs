use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("mesh has no vertices")]
    EmptyMesh,

    #[error("mesh is degenerate (max extent {0:e})")]
    DegenerateMesh(f64),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}:{line}: unsupported OBJ feature `{directive}`")]
    UnsupportedFeature {
        path: PathBuf,
        line: usize,
        directive: String,
    },

    #[error("unknown asset `{0}`")]
    UnknownAsset(String),

    #[error("category `{0}` has no assets")]
    EmptyCategory(String),

    #[error("invalid catalog: {0}")]
    InvalidCatalog(String),

    #[error("no pairing entry for category `{0}`")]
    PairingUnavailable(String),

    #[error("sampling region is empty")]
    EmptyRegion,

    #[error("could not place a collision-free pair after {0} attempts")]
    PlacementFailed(usize),

    #[error("no placement visible directly and in the mirror from every view after {0} attempts")]
    NotVisible(usize),

    #[error("scene has no mirror")]
    NoMirror,

    #[error("mask selects no pixels")]
    EmptyMask,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("corrupt manifest: {0}")]
    ManifestCorrupt(String),

    #[error("configuration error: {0}")]
    FatalConfig(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("{context}: {source}")]
    Image {
        context: String,
        #[source]
        source: image::ImageError,
    },
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    pub(crate) fn json(context: impl Into<String>, source: serde_json::Error) -> Self {
        Error::Json {
            context: context.into(),
            source,
        }
    }

    pub(crate) fn image(context: impl Into<String>, source: image::ImageError) -> Self {
        Error::Image {
            context: context.into(),
            source,
        }
    }

    /// True for errors caused by the filesystem rather than by bad input.
    pub fn is_io(&self) -> bool {
        match self {
            Error::Io { .. } => true,
            Error::Image { source, .. } => matches!(source, image::ImageError::IoError(_)),
            _ => false,
        }
    }
}
