use thiserror::Error;

/// Errors raised by group construction and by every computation built on it.
///
/// Each variant maps onto one of the process exit codes used by the CLI
/// (see [`CurvError::exit_code`]).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurvError {
    #[error("family mismatch: {0}")]
    FamilyMismatch(String),

    #[error("invalid group data: {0}")]
    InvalidGroup(String),

    #[error("invalid generating set: {0}")]
    InvalidGeneratingSet(String),

    #[error("cannot parse element literal {literal:?}: {reason}")]
    Literal { literal: String, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("kernel map is not a homomorphism: {0}")]
    KernelInconsistent(String),

    #[error("norm of {element} exceeds table radius {radius}")]
    OutOfBall { element: String, radius: u32 },

    #[error("norm of {element} exceeds limit {limit}")]
    NormExceedsLimit { element: String, limit: u32 },

    #[error("element {0} is not reachable from the identity")]
    Unreachable(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("undefined: {0}")]
    Undefined(String),

    #[error("element budget of {budget} exceeded while building sphere {sphere}")]
    ResourceCap { budget: usize, sphere: u32 },

    #[error("internal invariant breached: {0}")]
    InvariantBreach(String),
}

pub type Result<T> = std::result::Result<T, CurvError>;

impl CurvError {
    /// Short machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            CurvError::FamilyMismatch(_) => "family_mismatch",
            CurvError::InvalidGroup(_) => "invalid_group",
            CurvError::InvalidGeneratingSet(_) => "invalid_generating_set",
            CurvError::Literal { .. } => "bad_literal",
            CurvError::Config(_) => "config",
            CurvError::KernelInconsistent(_) => "kernel_inconsistent",
            CurvError::OutOfBall { .. } => "out_of_ball",
            CurvError::NormExceedsLimit { .. } => "norm_exceeds_limit",
            CurvError::Unreachable(_) => "unreachable",
            CurvError::Precondition(_) => "precondition",
            CurvError::Undefined(_) => "undefined",
            CurvError::ResourceCap { .. } => "resource_cap",
            CurvError::InvariantBreach(_) => "invariant_breach",
        }
    }

    /// 2 config, 3 precondition, 4 resource cap, 5 invariant breach.
    pub fn exit_code(&self) -> i32 {
        match self {
            CurvError::FamilyMismatch(_)
            | CurvError::InvalidGroup(_)
            | CurvError::InvalidGeneratingSet(_)
            | CurvError::Literal { .. }
            | CurvError::Config(_)
            | CurvError::KernelInconsistent(_) => 2,
            CurvError::OutOfBall { .. }
            | CurvError::NormExceedsLimit { .. }
            | CurvError::Unreachable(_)
            | CurvError::Precondition(_)
            | CurvError::Undefined(_) => 3,
            CurvError::ResourceCap { .. } => 4,
            CurvError::InvariantBreach(_) => 5,
        }
    }

    pub fn is_resource(&self) -> bool {
        matches!(self, CurvError::ResourceCap { .. })
    }
}
