use thiserror::Error;

use crate::rules::Rule;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a taxon universe needs between 1 and {max} taxa, got {got}")]
    UniverseSize { got: usize, max: usize },

    #[error("invalid taxon label {0:?}")]
    InvalidLabel(String),

    #[error("taxon label {0:?} declared twice")]
    DuplicateLabel(String),

    #[error("unknown taxon label {0:?}")]
    UnknownLabel(String),

    #[error("split sides must be nonempty and disjoint")]
    InvalidSplit,

    #[error("split mentions taxa outside the universe")]
    OutOfUniverse,

    #[error("operands belong to different taxon universes")]
    UniverseMismatch,

    #[error("orientation does not satisfy the {rule} rule condition for these splits")]
    InvalidOrientation { rule: Rule },

    #[error("the {rule} rule needs pairwise distinct splits")]
    NotDistinct { rule: Rule },

    #[error("split system is not irreducible")]
    NotIrreducible,

    #[error("an X-cycle needs at least 3 taxa, universe has {0}")]
    TooFewTaxa(usize),

    #[error("cycle search over {n} taxa is infeasible (cap is {cap})")]
    SearchInfeasible { n: usize, cap: usize },

    #[error("invalid cyclic ordering: {0}")]
    InvalidOrdering(String),

    #[error("closure exceeded the cap of {0} rule applications")]
    StepCapExceeded(usize),

    #[error("cannot drop every leaf of a tree")]
    PruneAll,

    #[error("taxon {0:?} is not a leaf of this tree")]
    NotInTree(String),
}
