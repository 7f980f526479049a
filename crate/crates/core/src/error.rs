use std::fmt;

/// Which counitality composite failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Left => f.write_str("left"),
            Side::Right => f.write_str("right"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown label `{label}` in {context}")]
    UnknownLabel { label: String, context: String },
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("not a cocone: {0}")]
    NotACocone(String),
    #[error("not a 2-cell: {0}")]
    NotACell(String),
    #[error("cospans are not parallel")]
    NotParallel,
    #[error("cospan is not a left adjoint: its wrong-way leg is not a bijection")]
    NotLeftAdjoint,
    #[error("square does not commute")]
    NotCommuting,
    #[error("not a rigid candidate: {0}")]
    NotRigidCandidate(String),
    #[error("counitality fails on the {0} side")]
    CounitalityFailed(Side),
    #[error("unital multiplication not isomorphic to the fold: {0}")]
    ClassificationCounterexample(String),
    #[error("generation gap: {0}")]
    GenerationGap(String),
    #[error("missing generator image: {0}")]
    MissingGeneratorImage(String),
    #[error("simplicial identity fails: {0}")]
    SimplicialIdentityFailure(String),
    #[error("invalid envelope morphism: {0}")]
    InvalidMorphism(String),
    #[error("coherence construction failed: {0}")]
    Coherence(String),
    #[error("{origin}: {message}")]
    Parse { origin: String, message: String },
    #[error("unknown name `{0}`")]
    UnknownName(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
