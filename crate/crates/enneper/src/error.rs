use std::fmt;
use std::path::PathBuf;

use crate::field::Complex;

/// Errors shared by the whole crate.
///
/// Geometry errors carry enough context to locate the offending point or
/// construction; IO errors keep the path that failed.
#[derive(Debug)]
pub enum Error {
    /// Evaluation requested at (or numerically on top of) a motif center.
    SingularPoint { z: Complex },
    /// Invalid motif configuration: coincident centers, zero pitch,
    /// non-finite coordinates, empty motif list, non-positive spacing.
    DegenerateGeometry(String),
    /// Branch continuation along a sampled path could not be disambiguated;
    /// consecutive points are too far apart relative to the nearest singularity.
    PathTooCoarse { segment: usize },
    /// An integration path passes through the guard region of a singularity.
    PathHitsSingularity { segment: usize, z: Complex },
    /// A graph that was assumed minimal has |H| above the gate.
    NotMinimal { residual: f64 },
    /// The converse construction hit a point with vanishing height gradient.
    SingularGradient { zeta: Complex },
    /// Operation only defined for another motif family.
    WrongFamily(&'static str),
    /// Sampling grid cannot resolve the requested feature.
    GridTooCoarse(String),
    /// Layer stacking needs a common pitch quantum and none exists.
    IncommensuratePitches,
    /// Numerical routine failed to converge to the requested tolerance.
    Numeric(String),
    /// Bad run configuration (CLI flags, JSON input, missing file).
    Config(String),
    Io { path: PathBuf, source: std::io::Error },
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SingularPoint { z } => {
                write!(f, "evaluation at singular point {} + {}i", z.re, z.im)
            }
            Error::DegenerateGeometry(msg) => write!(f, "degenerate geometry: {}", msg),
            Error::PathTooCoarse { segment } => {
                write!(f, "path too coarse to track branches at segment {}", segment)
            }
            Error::PathHitsSingularity { segment, z } => write!(
                f,
                "path segment {} passes through singularity near {} + {}i",
                segment, z.re, z.im
            ),
            Error::NotMinimal { residual } => {
                write!(f, "graph is not minimal: |H| residual {:.3e}", residual)
            }
            Error::SingularGradient { zeta } => write!(
                f,
                "height gradient vanishes at {} + {}i",
                zeta.re, zeta.im
            ),
            Error::WrongFamily(op) => write!(f, "operation `{}` not defined for this family", op),
            Error::GridTooCoarse(msg) => write!(f, "grid too coarse: {}", msg),
            Error::IncommensuratePitches => {
                write!(f, "pitches have no common quantum; cannot stack layers")
            }
            Error::Numeric(msg) => write!(f, "numeric failure: {}", msg),
            Error::Config(msg) => write!(f, "configuration error: {}", msg),
            Error::Io { path, source } => write!(f, "io error on {}: {}", path.display(), source),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}
