use thiserror::Error;

/// Errors raised by the slitmap toolkit.
///
/// Every variant maps onto one of the CLI exit classes through
/// [`Error::kind`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid circle: {0}")]
    InvalidCircle(String),
    #[error("invalid interval: x1 = {x1} must be smaller than x2 = {x2}")]
    InvalidInterval { x1: f64, x2: f64 },
    #[error("empty point set")]
    EmptySet,
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("point {re}{im:+}i is within {distance:.3e} of the boundary (resolution {resolution:.3e})")]
    BoundaryProximity {
        re: f64,
        im: f64,
        distance: f64,
        resolution: f64,
    },
    #[error("point {re}{im:+}i lies outside the domain")]
    OutsideDomain { re: f64, im: f64 },
    #[error("degenerate triple: points {0} and {1} coincide")]
    DegenerateTriple(usize, usize),
    #[error("circles {0} and {1} intersect or touch; no common symmetric pair")]
    NoCommonPair(usize, usize),
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("linear solve failed: condition estimate {condition:.3e} exceeds {limit:.1e}")]
    IllConditioned { condition: f64, limit: f64 },
    #[error("boundary under-resolved: tail ratio {residual:.3e} exceeds {tolerance:.1e}; increase N")]
    Resolution { residual: f64, tolerance: f64 },
    #[error("singular period matrix: determinant {det:.3e}, condition {condition:.3e}")]
    SingularPeriodMatrix { det: f64, condition: f64 },
    #[error("sign pattern violated: {0}")]
    SignPattern(String),
    #[error("flux normalization not met: {0}")]
    Normalization(String),
    #[error("harmonic conjugate is multivalued around component {component}: period leak {leak:.3e}")]
    PeriodLeak { component: usize, leak: f64 },
    #[error("marking point {re}{im:+}i is not on component {component} (distance {distance:.3e})")]
    Marking {
        component: usize,
        re: f64,
        im: f64,
        distance: f64,
    },
    #[error("marking points lie on the same boundary component {0}")]
    SameComponent(usize),
    #[error("slit on component {component} wraps: argument range {range:.6} >= 2*pi")]
    SlitWrap { component: usize, range: f64 },
    #[error("inversion failed for w = {re}{im:+}i: {reason}")]
    Inversion { re: f64, im: f64, reason: String },
    #[error("domains are not conformally equivalent with these markings: {0}")]
    NotEquivalent(String),
    #[error("the automorphism group of a doubly connected domain is infinite")]
    InfiniteGroup,
    #[error("candidate set is not closed under composition at tolerance {tol:.1e}; tighten tol")]
    GroupClosure { tol: f64 },
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("grid is not uniform: {0}")]
    NonUniformGrid(String),
    #[error("invalid input: {0}")]
    Input(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or invariant-violating input.
    BadInput,
    /// A numerical procedure failed.
    Numerical,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            InvalidCircle(_) | InvalidInterval { .. } | EmptySet | InvalidCurve(_)
            | InvalidDomain(_) | BoundaryProximity { .. } | OutsideDomain { .. }
            | DegenerateTriple(..) | NoCommonPair(..) | Marking { .. } | SameComponent(_)
            | InfiniteGroup | OutOfRange(_) | NonUniformGrid(_) | Input(_) => ErrorKind::BadInput,
            _ => ErrorKind::Numerical,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
