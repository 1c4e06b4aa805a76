//! The subcommands as functions from input text to an [`Outcome`].

use std::sync::Arc;

use splitclosure::compat::DEFAULT_SEARCH_CAP;
use splitclosure::newick::grow_universe;
use splitclosure::{
    closure, displays, find_cycle_with_cap, parse_newick, weakly_compatible, ClosureOptions,
    ClosureResult, CyclicOrdering, OrderPolicy, RuleKind, RuleSelector, SplitSystem, TaxonSet,
    TaxonUniverse,
};

use crate::error::CliError;
use crate::{nexus, splits_file};

/// Exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const NO: i32 = 1;
    pub const ERROR: i32 = 2;
    pub const OMEGA: i32 = 3;
}

/// What a command produced: the main document, diagnostics for stderr, an
/// optional trace, and the exit status.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub messages: Vec<String>,
    pub trace: Option<String>,
    pub code: i32,
}

/// A named input text.
#[derive(Debug, Clone, Copy)]
pub struct Input<'a> {
    pub path: &'a str,
    pub text: &'a str,
}

#[derive(Debug, Clone, Default)]
pub struct ExtractOptions {
    pub drop_trivial: bool,
    pub prune: Vec<String>,
    /// Universe to start from; tree labels outside it are an error unless
    /// `grow_universe` is set.
    pub taxa: Option<Vec<String>>,
    pub grow_universe: bool,
}

/// Trees to the reduced union of their splits. Pruned labels are removed
/// from every tree and from the output universe.
pub fn extract(inputs: &[Input], opts: &ExtractOptions) -> Result<Outcome, CliError> {
    let newick_err = |path: &str| {
        let path = path.to_string();
        move |source| CliError::Newick {
            path: path.clone(),
            source,
        }
    };
    let base = opts.taxa.clone().unwrap_or_default();
    let universe = if opts.taxa.is_none() || opts.grow_universe {
        let mut names = base;
        for input in inputs {
            names = grow_universe(&names, input.text)
                .map_err(newick_err(input.path))?
                .names()
                .to_vec();
        }
        TaxonUniverse::new(names)?
    } else {
        TaxonUniverse::new(base)?
    };
    let universe = Arc::new(universe);

    let drop = universe.set_of(&opts.prune)?;
    let mut trees = Vec::new();
    for input in inputs {
        for tree in parse_newick(input.text, &universe).map_err(newick_err(input.path))? {
            trees.push((input.path, tree));
        }
    }
    if trees.is_empty() {
        return Err(CliError::Usage("no trees in input".into()));
    }
    let seen = trees
        .iter()
        .fold(TaxonSet::EMPTY, |acc, (_, t)| acc | t.leaves());
    if let Some(t) = (drop - seen).min() {
        return Err(CliError::Usage(format!(
            "--prune: taxon {:?} is not a leaf of any tree",
            universe.name(t)
        )));
    }

    let mut union = SplitSystem::new(universe.clone());
    for (path, tree) in &trees {
        let here = drop & tree.leaves();
        let tree = if here.is_empty() {
            tree.clone()
        } else {
            tree.prune(here)
                .map_err(|e| CliError::Usage(format!("{path}: {e}")))?
        };
        for s in tree.extract_splits(!opts.drop_trivial).iter() {
            union.insert(*s)?;
        }
    }
    let system = without_taxa(&union.reduce(), drop)?;
    Ok(Outcome {
        output: splits_file::write(&system),
        ..Outcome::default()
    })
}

/// Re-indexes `system` over its universe minus `drop`, which no member
/// may mention.
fn without_taxa(system: &SplitSystem, drop: TaxonSet) -> Result<SplitSystem, CliError> {
    if drop.is_empty() {
        return Ok(system.clone());
    }
    let old = system.universe();
    let keep: Vec<usize> = (0..old.len()).filter(|t| !drop.contains(*t)).collect();
    let universe = Arc::new(TaxonUniverse::new(keep.iter().map(|&t| old.name(t)))?);
    let remap = |set: TaxonSet| {
        TaxonSet::from_indices(
            set.iter()
                .map(|t| keep.binary_search(&t).unwrap_or(usize::MAX)),
        )
    };
    let splits = system
        .iter()
        .map(|s| splitclosure::PartialSplit::new(remap(s.first()), remap(s.second())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SplitSystem::from_splits(universe, splits)?)
}

#[derive(Debug, Clone, Copy)]
pub struct ClosureCommand {
    pub rule: RuleKind,
    pub unguarded: bool,
    pub policy: OrderPolicy,
    pub trace: bool,
}

/// `canonical` or `random:<seed>`.
pub fn parse_policy(text: &str) -> Result<OrderPolicy, String> {
    match text {
        "canonical" => Ok(OrderPolicy::Canonical),
        _ => text
            .strip_prefix("random:")
            .and_then(|s| s.parse().ok())
            .map(OrderPolicy::SeededRandom)
            .ok_or_else(|| format!("expected `canonical` or `random:<seed>`, got {text:?}")),
    }
}

pub fn closure_cmd(input: Input, cmd: &ClosureCommand) -> Result<Outcome, CliError> {
    let sigma = splits_file::parse(input.path, input.text)?;
    let rule = RuleSelector::new(cmd.rule).guarded(!cmd.unguarded);
    let mut messages = Vec::new();
    if cmd.rule == RuleKind::Z {
        messages.push("note: Z-closures depend on the order of rule applications".to_string());
    }
    let options = ClosureOptions {
        policy: cmd.policy,
        want_trace: cmd.trace,
        ..ClosureOptions::default()
    };
    let out = closure(&sigma, rule, &options)?;
    let trace = out
        .trace
        .as_ref()
        .map(|t| splitclosure::closure::format_trace(sigma.universe(), t));
    match out.result {
        ClosureResult::Closed(system) => Ok(Outcome {
            output: splits_file::write(&system),
            messages,
            trace,
            code: exit::OK,
        }),
        ClosureResult::Omega(omega) => {
            messages.push(format!(
                "omega: Σ_{} is not weakly compatible: {}",
                omega.step,
                omega.witness.describe(sigma.universe())
            ));
            Ok(Outcome {
                output: String::new(),
                messages,
                trace,
                code: exit::OMEGA,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    WeaklyCompatible,
    Circular { max_n: usize },
}

impl Default for CheckKind {
    fn default() -> Self {
        CheckKind::Circular {
            max_n: DEFAULT_SEARCH_CAP,
        }
    }
}

pub fn check(input: Input, kind: CheckKind) -> Result<Outcome, CliError> {
    let sigma = splits_file::parse(input.path, input.text)?;
    let u = sigma.universe().clone();
    let wc = splitclosure::compat::wc_violation(&sigma);
    let (output, code) = match kind {
        CheckKind::WeaklyCompatible => match wc {
            None => ("weakly compatible".to_string(), exit::OK),
            Some(w) => (
                format!("not weakly compatible: {}", w.describe(&u)),
                exit::NO,
            ),
        },
        CheckKind::Circular { max_n } => match find_cycle_with_cap(&sigma, max_n) {
            Ok(Some(c)) => (format!("circular: cycle {}", c.display(&u)), exit::OK),
            Ok(None) => match wc {
                None => (
                    "not circular (weakly compatible but not circular)".to_string(),
                    exit::NO,
                ),
                Some(w) => (
                    format!("not circular (not weakly compatible: {})", w.describe(&u)),
                    exit::NO,
                ),
            },
            Err(
                e @ (splitclosure::Error::SearchInfeasible { .. }
                | splitclosure::Error::TooFewTaxa(_)),
            ) => {
                return Ok(Outcome {
                    messages: vec![format!("infeasible: {e}")],
                    code: exit::ERROR,
                    ..Outcome::default()
                })
            }
            Err(e) => return Err(e.into()),
        },
    };
    Ok(Outcome {
        output: output + "\n",
        code,
        ..Outcome::default()
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum CycleChoice {
    #[default]
    Auto,
    None,
    Labels(Vec<String>),
}

pub fn parse_cycle(text: &str) -> CycleChoice {
    match text {
        "auto" => CycleChoice::Auto,
        "none" => CycleChoice::None,
        _ => CycleChoice::Labels(text.split(',').map(|s| s.trim().to_string()).collect()),
    }
}

pub fn export_nexus(input: Input, cycle: &CycleChoice) -> Result<Outcome, CliError> {
    let sigma = splits_file::parse(input.path, input.text)?;
    let u = sigma.universe().clone();
    let mut messages: Vec<String> = sigma
        .iter()
        .filter(|s| !s.is_full(&u))
        .map(|s| format!("warning: skipping partial split {}", sigma.display_split(s)))
        .collect();
    let full = SplitSystem::from_splits(u.clone(), sigma.full_splits().copied())?;
    if full.is_empty() {
        return Err(CliError::Usage(format!(
            "{}: no full splits to export",
            input.path
        )));
    }
    let cycle = match cycle {
        CycleChoice::None => None,
        CycleChoice::Auto => match find_cycle_with_cap(&full, DEFAULT_SEARCH_CAP) {
            Ok(Some(c)) => Some(c),
            Ok(None) => {
                messages.push("warning: the full splits are not circular; no CYCLE written".into());
                None
            }
            Err(e) => {
                messages.push(format!("warning: no CYCLE written: {e}"));
                None
            }
        },
        CycleChoice::Labels(labels) => {
            let c = CyclicOrdering::from_labels(&u, labels)?;
            if !displays(&full, &c)? {
                return Err(CliError::Usage(format!(
                    "cycle {} does not display every full split",
                    c.display(&u)
                )));
            }
            Some(c)
        }
    };
    if !weakly_compatible(&full) {
        messages.push("warning: the full splits are not weakly compatible".into());
    }
    Ok(Outcome {
        output: nexus::write(&u, &full.to_vec(), cycle.as_ref()),
        messages,
        ..Outcome::default()
    })
}
