use alloc::string::String;

use thiserror::Error;

/// Errors from the exact number layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("radicand {0} is not a squarefree integer other than 0 and 1")]
    BadRadicand(i64),
    #[error("mismatched radicands {0} and {1}")]
    RadicandMismatch(i64, i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("comparison of non-real values")]
    NotReal,
    #[error("cannot take the square root of a negative rational")]
    NegativeSqrt,
    #[error("integer too large for exact factorization")]
    TooLarge,
    #[error("cannot parse number {0:?}")]
    Parse(String),
}

/// Errors from quaternion algebra operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuatError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error("structure constants must be nonzero")]
    ZeroConstant,
    #[error("d = {0} must be a positive squarefree integer")]
    BadFieldParameter(i64),
    #[error("trace field Q(sqrt({0})) is not imaginary quadratic")]
    NotImaginaryQuadratic(i64),
    #[error("quaternions belong to different algebras")]
    DescriptorMismatch,
    #[error("the involution needs positive structure constants; normalize the algebra first")]
    NotNormalized,
    #[error("{0} is not a prime place")]
    BadPlace(u64),
    #[error("matrix is not in the image of the algebra embedding")]
    NotInImage,
    #[error("quaternion does not have norm 1")]
    NotUnit,
}

/// Errors from the hyperboloid model.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Quat(#[from] QuatError),
    #[error("point is not on the hyperboloid sheet: {0}")]
    NotOnHyperboloid(&'static str),
    #[error("points belong to different models")]
    ModelMismatch,
    #[error("point is not exactly representable over the working field")]
    Inexact,
    #[error("Klein point lies outside the model ellipsoid")]
    OutsideEllipsoid,
    #[error("bisector of the centre with itself is undefined")]
    DegenerateBisector,
    #[error("height must be positive")]
    NonPositiveHeight,
    #[error("planar model needs real group elements")]
    NotFuchsian,
}

/// Errors from the Dirichlet domain engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error(transparent)]
    Quat(#[from] QuatError),
    #[error(transparent)]
    Hyp(#[from] HypError),
    #[error("unsupported integrality context: {0}")]
    UnsupportedContext(&'static str),
    #[error("trace {0} is below the first nontrivial shell")]
    TraceTooSmall(i64),
    #[error("witness is not the orbit point of the contributing isometry")]
    WitnessMismatch,
    #[error("Frobenius identity failed")]
    FrobeniusMismatch,
    #[error("central element has no slope")]
    CentralElement,
    #[error("group input is malformed: {0}")]
    BadGroup(&'static str),
    #[error("half-space excludes the whole region")]
    Infeasible,
}
