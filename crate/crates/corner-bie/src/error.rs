use thiserror::Error;

/// Errors surfaced by the corner analysis and the Nyström solver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("coincident source and target points in kernel evaluation")]
    CoincidentPoints,

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("Cauchy moment target t = {0} too close to a panel endpoint")]
    NearEndpoint(f64),

    #[error("argument-principle count {count} disagrees with polished roots {found} in box re [{re0}, {re1}], im [{im0}, {im1}]")]
    RootCount {
        count: i64,
        found: usize,
        re0: f64,
        re1: f64,
        im0: f64,
        im1: f64,
    },

    #[error("continuation stopped near a branch point at theta = {theta} (|dH/dz| = {deriv:.3e})")]
    BranchPoint { theta: f64, deriv: f64 },

    #[error("pole of the wedge symbol at integer z = {0}")]
    IntegerPole(f64),

    #[error("resonant Taylor block: z = {z} collides with integer power k = {k}")]
    Resonance { z: num_complex::Complex64, k: usize },

    #[error("exceptional wedge angle: mapping matrix condition estimate {0:.3e}")]
    ExceptionalAngle(f64),

    #[error("quadrature tolerance {requested:.3e} not reached (best error estimate {achieved:.3e})")]
    QuadratureTolerance { requested: f64, achieved: f64 },

    #[error("dense system is singular or numerically rank deficient: {0}")]
    SingularSystem(String),

    #[error("dense solve size cap exceeded: {0} unknowns")]
    SizeCap(usize),

    #[error("interior target too close to the boundary for far evaluation: {0}")]
    OutOfContract(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
