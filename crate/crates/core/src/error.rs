use thiserror::Error;

/// Errors raised by rule generation, geometry, integration and mesh handling.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("rule length {0} outside supported range 1..=64")]
    RuleLength(usize),

    #[error("Jacobi exponent {0} must be finite and greater than -1")]
    JacobiExponent(f64),

    #[error("rule generation did not converge for n = {n}, gamma = {gamma}")]
    RuleConvergence { n: usize, gamma: f64 },

    #[error("invalid interval [{lo}, {hi}]")]
    Interval { lo: f64, hi: f64 },

    #[error("degenerate tetrahedron: volume {volume:e} below threshold {threshold:e}")]
    DegenerateTetrahedron { volume: f64, threshold: f64 },

    #[error("node 1 coincides with the singular vertex")]
    CoincidentNodes,

    #[error(
        "node {node} is not on the azimuthal half-plane of the reference orientation \
         (apex angle with node 1 is not acute)"
    )]
    AzimuthFold { node: usize },

    #[error("azimuthal extent mismatch: node 2 gives {node2}, node 3 gives {node3}")]
    ThetaMismatch { node2: f64, node3: f64 },

    #[error("edge intersection parameter u = {u} outside [0, 1]")]
    IntersectionOutOfRange { u: f64 },

    #[error("radial limit {rho} is not positive and finite")]
    RadialLimit { rho: f64 },

    #[error("singularity exponent alpha = {0} not supported (need alpha < 3)")]
    Alpha(f64),

    #[error("alpha = {0} is not a rational number with small denominator")]
    IrrationalAlpha(f64),

    #[error("rule mismatch: {0}")]
    RuleMismatch(String),

    #[error("integrand is not finite at ({x}, {y}, {z})")]
    NonFiniteIntegrand { x: f64, y: f64, z: f64 },

    #[error(
        "adaptive integration did not converge within depth {max_depth}: \
         worst leaf discrepancy {worst_discrepancy:e}"
    )]
    Unconverged {
        partial: Vec<f64>,
        worst_discrepancy: f64,
        max_depth: usize,
        evaluations: usize,
    },

    #[error("convergence fit needs at least 3 points above the floor, got {0}")]
    FitPoints(usize),

    #[error("{file}:{line}: {message}")]
    MeshParse {
        file: String,
        line: usize,
        message: String,
    },

    #[error("element {element}: node index {index} out of range")]
    MeshIndex { element: usize, index: i64 },

    #[error("element {element} is degenerate (volume {volume:e})")]
    DegenerateElement { element: usize, volume: f64 },

    #[error("fixed tetrahedron rule degree {0} unsupported (odd, 1..=15)")]
    RuleDegree(usize),

    #[error("target ({x}, {y}, {z}) lies in element {element} without being one of its vertices")]
    TargetInsideElement {
        x: f64,
        y: f64,
        z: f64,
        element: usize,
    },

    #[error("elliptic modulus {0} out of range")]
    EllipticModulus(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0}")]
    Io(String),
}

impl Error {
    /// True for failures caused by user input rather than by the numerics.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidArgument(_)
                | Error::Io(_)
                | Error::MeshParse { .. }
                | Error::MeshIndex { .. }
                | Error::RuleLength(_)
                | Error::JacobiExponent(_)
                | Error::Interval { .. }
                | Error::RuleDegree(_)
                | Error::Alpha(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
