//! Amalgamating partial phylogenetic trees into circular split systems.
//!
//! The crate provides:
//!
//! - [`taxa`] and [`split`]: taxon universes, partial splits `A|Ã`, the
//!   extension order and irreducible split systems;
//! - [`rules`]: single applications of the M-, Y- and Z-closure rules;
//! - [`compat`]: weak compatibility, display by X-cycles and an exhaustive
//!   search for a displaying cycle;
//! - [`closure`]: split-closure sequences with optional weak-compatibility
//!   guard;
//! - [`newick`]: a Newick reader, leaf pruning and split extraction.
//!
//! ```
//! use std::sync::Arc;
//! use splitclosure::{closure_of, RuleSelector, SplitSystem, TaxonUniverse};
//!
//! let x = Arc::new(TaxonUniverse::numbered(5).unwrap());
//! let sigma = SplitSystem::parse(x.clone(), ["12|34", "23|14", "15|24", "45|13"]).unwrap();
//! let closed = closure_of(&sigma, RuleSelector::y()).unwrap().into_system().unwrap();
//! assert_eq!(closed, SplitSystem::parse(x, ["12|34", "145|23", "15|234", "45|123"]).unwrap());
//! ```

pub mod closure;
pub mod compat;
pub mod error;
pub mod newick;
pub mod rules;
pub mod split;
pub mod taxa;

pub use closure::{
    closure, closure_of, closure_operator_check, is_closed, y_length_bound, ClosureOperatorReport,
    ClosureOptions, ClosureOutcome, ClosureResult, Omega, OrderPolicy, RuleKind, RuleSelector,
    TraceStep,
};
pub use compat::{
    displays, find_cycle, find_cycle_with_cap, is_displayed, weakly_compatible,
    weakly_compatible_triple, CyclicOrdering, WcWitness,
};
pub use error::{Error, Result};
pub use newick::{parse_newick, NewickError, PhyloTree};
pub use rules::{Orientation, Rule, RuleApplication};
pub use split::{parse_split, PartialSplit, SplitSystem};
pub use taxa::{TaxonSet, TaxonUniverse, MAX_TAXA};
