use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("the zero triple (0,0,0) is not a quadratic form")]
    ZeroForm,
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("form has non-positive discriminant {0}")]
    NotPositiveDiscriminant(i128),
    #[error("wrong discriminant sign: {0}")]
    WrongDiscriminantSign(String),
    #[error("(A,B) must not both vanish")]
    DegenerateRealForm,
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("points coincide")]
    CoincidentPoints,
    #[error("point is not in the upper half-plane (y = {0})")]
    NotInUpperHalfPlane(f64),
    #[error("angles must satisfy 0 <= theta1 <= theta2 <= 2pi, got [{0}, {1}]")]
    BadAngleOrder(f64, f64),
    #[error("curves do not meet perpendicularly")]
    NotPerpendicularPair,
    #[error("radius must be positive, got {0}")]
    BadRadius(f64),

    #[error("sieve limit {0} exceeds the supported maximum")]
    LimitTooLarge(u64),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("discriminant {0} is a perfect square")]
    SquareDiscriminant(i128),
    #[error("discriminant {0} is not 0 or 1 mod 4")]
    BadResidue(i128),
    #[error("numerical instability: {0}")]
    NumericalInstability(String),

    #[error("interval closure touches the real root t = {root}")]
    IntervalTouchesRoot { root: f64 },
    #[error("form is not positive on the interval")]
    IntervalOutsidePositivityRegion,
    #[error("measure diverges on an interval reaching infinity for a linear form")]
    UnboundedDivergence,
    #[error("invalid interval: {0}")]
    InvalidInterval(String),
    #[error("work guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("enumeration is infinite: {0}")]
    InfiniteEnumeration(String),

    #[error("pushforward grid touches a singularity at t = {0}")]
    GridTouchesSingularity(f64),
    #[error("form ({0},{1},{2}) is not primitive")]
    ImprimitiveForm(i128, i128, i128),
    #[error("point is not on the geodesic (residual {0:e})")]
    PointNotOnGeodesic(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
