use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("dipole constraint violated: sigma^2 cos(theta1 + theta2) = {lhs}, expected 2 g12 = {rhs}")]
    DipoleConstraintViolated { lhs: f64, rhs: f64 },
    #[error("no real dipole angle: |2 g12| = {two_g12} exceeds sigma^2 = {sigma_sq}")]
    NoRealAngle { two_g12: f64, sigma_sq: f64 },
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },
    #[error("configuration lies on the singular set")]
    SingularConfiguration,
    #[error("operation requires family {expected}, got {got}")]
    WrongFamily { expected: String, got: String },
    #[error("coordinate index {index} out of range for {arity} coordinates")]
    IndexOutOfRange { index: usize, arity: usize },
    #[error("gamma function pole at non-positive integer {0}")]
    PoleAtNonPositiveInteger(f64),
    #[error("special function overflow")]
    Overflow,
    #[error("zero argument")]
    ZeroArgument,
    #[error("zero base raised to negative power")]
    ZeroBase,
    #[error("beta_{0} = 0 but the operator carries a 1/sqrt(beta_{0}) prefactor")]
    ZeroBeta(u8),
    #[error("beta1 == beta2: the closed-form wavefunction is singular")]
    EqualBetas,
    #[error("no admissible sample after {0} attempts")]
    SingularSample(usize),
    #[error("test function is not even under pair reflection (deviation {0:e})")]
    MirrorSymmetryViolated(f64),
    #[error("integration box touches the singular set")]
    DomainTouchesSingularSet,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
