use thiserror::Error;

use crate::finspace::SpaceError;
use crate::io::ParseError;
use crate::mapcalc::MapError;
use crate::miner::MinerError;
use crate::treespace::TreeError;

/// Any failure surfaced by the command line, with its exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Miner(#[from] MinerError),
}

fn space_guard(e: &SpaceError) -> bool {
    matches!(e, SpaceError::SizeGuardExceeded { .. } | SpaceError::TooManyPoints { .. })
}

impl Error {
    /// 1 usage, 2 bad input, 3 size guard exceeded.
    pub fn exit_code(&self) -> i32 {
        let guard = match self {
            Error::Usage(_) => return 1,
            Error::Parse { source: ParseError::Limit { .. }, .. } => true,
            Error::Space(e) | Error::Map(MapError::Space(e)) => space_guard(e),
            Error::Miner(e) => e.is_guard(),
            Error::Tree(e) => matches!(
                e,
                TreeError::HeightExceeded { .. } | TreeError::TooManyShapes { .. } | TreeError::ModelTooLarge { .. }
            ),
            _ => false,
        };
        if guard {
            3
        } else {
            2
        }
    }
}
