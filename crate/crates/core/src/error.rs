use thiserror::Error;

pub type Result<T> = std::result::Result<T, KeplerError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KeplerError {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// `P3[v, a] = 0`: straight-line motion, the curvature radius is infinite.
    #[error("degenerate curvature: velocity and acceleration are collinear")]
    DegenerateCurvature,

    /// The body came too close to the attracting centre.
    #[error("singularity: |pos| = {radius:e} is too close to the origin")]
    Singularity { radius: f64 },

    /// Zero angular momentum (radial orbit) or an undefined orbital plane.
    #[error("degenerate orbit: angular momentum is zero (radial motion)")]
    DegenerateOrbit,

    /// The state is not on an ellipse.
    #[error("unbound orbit: eccentricity {eps} >= 1")]
    UnboundOrbit { eps: f64 },

    /// The raw arctan form is evaluated at an odd multiple of pi.
    #[error("pole of tan(theta/2) at theta = {theta}")]
    Pole { theta: f64 },
}
