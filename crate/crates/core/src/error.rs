use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("(x, y) pair is zero; U(x, y) is undefined")]
    ZeroPair,
    #[error("matrix is singular (|det| = {det:e})")]
    SingularInput { det: f64 },
    #[error("matrix is zero")]
    ZeroMatrix,
    #[error("matrix is not singular (|det| = {det:e})")]
    NonSingularInput { det: f64 },
    #[error("matrix does not have the shape ((a, b), (0, 0)) with a nonzero first row")]
    BadShape,
    #[error("leading pencil coefficient det(B) vanishes (|det| = {det:e})")]
    SingularPencilCoefficient { det: f64 },
    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },
    #[error("state has non-real amplitudes (max |imag| = {max_imag:e})")]
    NotReal { max_imag: f64 },
    #[error("non-finite amplitude")]
    NonFinite,
    #[error("internal invariant violated at {step}: residual {residual:e} (trace: {trace})")]
    InvariantViolation {
        step: &'static str,
        residual: f64,
        trace: String,
    },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
