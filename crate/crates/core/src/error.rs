use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("curve does not meet the viewport")]
    EmptyTrace,
    #[error("matrix is singular (determinant {0:e})")]
    SingularMatrix(f64),
    #[error("curve of kind `{0}` cannot be composed with a polynomial")]
    NotComposable(String),
    #[error("invalid parameters for `{kind}`: {reason}")]
    InvalidParams { kind: String, reason: String },
    #[error("sample point ({x}, {y}) lies outside the domain")]
    DomainViolation { x: f64, y: f64 },
    #[error("function is not of the form y - h(x)")]
    NotUnivariateForm,
    #[error("curves {0} and {1} share a component")]
    SharedComponent(usize, usize),
    #[error("degenerate event near x = {0}")]
    DegenerateEvent(f64),
    #[error("no certified cutting after {attempts} attempts (best max crossings {best_max}, allowed {allowed})")]
    CuttingFailed {
        attempts: usize,
        best_max: usize,
        allowed: f64,
    },
    #[error("curve {0} is a vertical segment")]
    VerticalCurve(usize),
    #[error("bad cutting parameter: {0}")]
    BadParameter(String),
    #[error("enumeration of {0} subsets exceeds the complexity guard")]
    ComplexityGuard(f64),
    #[error("cutting does not belong to this curve set")]
    InconsistentScene,
    #[error("dual hyperplane undefined: every term vanishes at ({x}, {y})")]
    DegenerateDual { x: f64, y: f64 },
    #[error("coefficient vector is zero")]
    ZeroCoefficients,
    #[error("coefficient vectors of curves {0} and {1} are proportional")]
    ProportionalCoefficients(usize, usize),
    #[error("no generic rotation found after {0} draws")]
    RotationFailed(usize),
    #[error("duality chain mismatch: {first} = {a} but {second} = {b}")]
    ChainMismatch {
        first: &'static str,
        a: usize,
        second: &'static str,
        b: usize,
    },
    #[error("invalid polynomial key `{0}`")]
    PolyKey(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
