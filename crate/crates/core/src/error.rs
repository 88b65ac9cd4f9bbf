use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("linear system has no solution")]
    NoSolution,

    #[error("invalid modulus {0}: expected a prime in [2, 65536)")]
    InvalidModulus(u64),

    #[error("relations are not admissible: a reduction-free path of length {length_bound} exists")]
    NotAdmissible { length_bound: usize },

    #[error("invalid relation {word:?}: {reason}")]
    InvalidRelation { word: Vec<String>, reason: String },

    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),

    #[error("algebra `{0}` has no radical rule (no arrow set and no radical could be certified)")]
    NoRadicalRule(String),

    #[error("algebra `{0}` is not split basic; primitive idempotents could not be determined")]
    NotBasic(String),

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("invalid module map: {0}")]
    InvalidMap(String),

    #[error("modules live over different algebras")]
    AlgebraMismatch,

    #[error("isomorphism test inconclusive after {trials} trials (Hom dimension {hom_dim})")]
    Inconclusive { trials: usize, hom_dim: usize },

    #[error("module is not injective (envelope has dimension {envelope_dim}, module {dim})")]
    NotInjective { dim: usize, envelope_dim: usize },

    #[error("bimodule is not balanced: {side} natural map has kernel dim {kernel_dim}, cokernel dim {cokernel_dim}")]
    NotBalanced {
        side: String,
        kernel_dim: usize,
        cokernel_dim: usize,
    },

    #[error("bimodule is not selforthogonal: Ext^{degree} on the {side} side has dimension {dim}")]
    NotSelforthogonal {
        degree: usize,
        side: String,
        dim: usize,
    },

    #[error("left and right actions do not commute")]
    ActionsDoNotCommute,

    #[error("instance error: {0}")]
    Instance(String),
}

pub type Result<T> = std::result::Result<T, Error>;
