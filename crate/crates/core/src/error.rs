use thiserror::Error;

use crate::geometry::Sphere2;

/// Errors produced by the toolkit.
///
/// Every variant has a short machine-readable [`Error::kind`] used by the CLI
/// for its `error[kind]: message` lines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("center mismatch: {0} vs {1}")]
    CenterMismatch(String, String),

    #[error("centers {0} and {1} do not lie on a common complex plane")]
    NotOnCommonPlane(String, String),

    #[error("degree {degree} exceeds cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("pole: {0} is on the pole sphere {1}")]
    Pole(String, Sphere2),

    #[error("pole sphere {sphere} meets the closed ball of radius {radius}")]
    PoleInBall { sphere: Sphere2, radius: f64 },

    #[error("point {0} is not on the slice of {1}")]
    OffSlice(String, String),

    #[error("not regular here: {0}")]
    NotRegular(String),

    #[error("pole order exceeds bound k_max = {0}")]
    OrderExceedsBound(usize),

    #[error("discreteness violated: {0}")]
    Discreteness(String),

    #[error("no admissible exhaustion radius near {0}: pole spheres straddle every candidate")]
    BoundaryCollision(f64),

    #[error("function built to depth {built} but {needed} groups are required")]
    Truncated { built: usize, needed: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::CenterMismatch(..) => "center-mismatch",
            Error::NotOnCommonPlane(..) => "plane",
            Error::DegreeCap { .. } => "degree-cap",
            Error::Pole(..) => "pole",
            Error::PoleInBall { .. } => "pole-in-ball",
            Error::OffSlice(..) => "off-slice",
            Error::NotRegular(_) => "not-regular",
            Error::OrderExceedsBound(_) => "order",
            Error::Discreteness(_) => "discreteness",
            Error::BoundaryCollision(_) => "boundary",
            Error::Truncated { .. } => "truncated",
            Error::InvalidInput(_) => "input",
            Error::Parse(_) => "parse",
            Error::Json(_) => "json",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
