use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("ill-defined homomorphism: {0}")]
    IllDefinedHom(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("element {element:?} does not belong to the group")]
    NotInGroup { element: Vec<i64> },
    #[error("not an epimorphism (cokernel invariants {cokernel:?}, free rank {free_rank})")]
    NotEpimorphism { cokernel: Vec<i64>, free_rank: usize },
    #[error("the kernel is infinite: {0}")]
    InfiniteKernel(String),
    #[error("infinite support: {0}")]
    InfiniteSupport(String),
    #[error("refinement window is not closed under the ring action: {0}")]
    WindowNotClosed(String),
    #[error("grading groups differ: {0}")]
    GroupMismatch(String),
    #[error("rings differ: {0}")]
    RingMismatch(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("modules differ: {0}")]
    ModuleMismatch(String),
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("non-homogeneous input: {0}")]
    NonHomogeneousInput(String),
    #[error("not a morphism of graded modules: {0}")]
    NotAMorphism(String),
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),
    #[error("unsupported class: {0}")]
    UnsupportedClass(String),
    #[error("malformed rule: {0}")]
    MalformedRule(String),
    #[error("enumeration guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("the subgroup is finite: {0}")]
    FiniteSubgroup(String),
    #[error("ring is not concentrated in degree zero: {0}")]
    NotConcentrated(String),
    /// A computed result contradicts a proven statement; this is a bug.
    #[error("soundness failure: {0}")]
    Soundness(String),
}
