//! Weak compatibility and circularity of partial split collections.

use std::fmt;

use crate::error::{Error, Result};
use crate::split::{PartialSplit, SplitSystem};
use crate::taxa::{TaxonSet, TaxonUniverse};

/// Default largest universe [`find_cycle`] will search exhaustively.
pub const DEFAULT_SEARCH_CAP: usize = 10;

/// Evidence that three splits are not weakly compatible: under the recorded
/// choice of parts all four intersections
/// `A1∩A2∩A3, Ã1∩Ã2∩A3, Ã1∩A2∩Ã3, A1∩Ã2∩Ã3` are nonempty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WcWitness {
    pub splits: [PartialSplit; 3],
    /// Bit `i` set when split `i` uses its second stored side as `A_i`.
    pub flips: u8,
    pub intersections: [TaxonSet; 4],
}

impl WcWitness {
    pub fn parts(&self, i: usize) -> (TaxonSet, TaxonSet) {
        self.splits[i].oriented(self.flips >> i & 1 == 1)
    }

    /// Human-readable description naming the triple and the chosen parts.
    pub fn describe(&self, universe: &TaxonUniverse) -> String {
        let sep = if universe.single_char_labels() {
            ""
        } else {
            ","
        };
        let splits: Vec<String> = self
            .splits
            .iter()
            .map(|s| s.display(universe).to_string())
            .collect();
        let parts: Vec<String> = (0..3)
            .map(|i| format!("A{}={}", i + 1, universe.join(self.parts(i).0, sep)))
            .collect();
        let inter: Vec<String> = self
            .intersections
            .iter()
            .map(|s| format!("{{{}}}", universe.join(*s, sep)))
            .collect();
        format!(
            "{} with {}: intersections {}",
            splits.join(", "),
            parts.join(" "),
            inter.join(" ")
        )
    }
}

fn quadruple(
    (a1, c1): (TaxonSet, TaxonSet),
    (a2, c2): (TaxonSet, TaxonSet),
    (a3, c3): (TaxonSet, TaxonSet),
) -> [TaxonSet; 4] {
    [a1 & a2 & a3, c1 & c2 & a3, c1 & a2 & c3, a1 & c2 & c3]
}

/// Returns a witness if the three splits are not weakly compatible.
///
/// Every choice of parts yields one of two quadruples of intersections
/// (swapping a single `A_i ↔ Ã_i` moves to the other one), so the triple is
/// weakly compatible iff both quadruples contain an empty set.
pub fn triple_violation(
    s1: &PartialSplit,
    s2: &PartialSplit,
    s3: &PartialSplit,
) -> Option<WcWitness> {
    for flips in [0u8, 1] {
        let q = quadruple(
            s1.oriented(flips == 1),
            s2.oriented(false),
            s3.oriented(false),
        );
        if q.iter().all(|s| !s.is_empty()) {
            return Some(WcWitness {
                splits: [*s1, *s2, *s3],
                flips,
                intersections: q,
            });
        }
    }
    None
}

pub fn weakly_compatible_triple(s1: &PartialSplit, s2: &PartialSplit, s3: &PartialSplit) -> bool {
    triple_violation(s1, s2, s3).is_none()
}

/// First violating triple of `sigma` in member order, if any.
pub fn wc_violation(sigma: &SplitSystem) -> Option<WcWitness> {
    let v = sigma.to_vec();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            for k in j + 1..v.len() {
                if let Some(w) = triple_violation(&v[i], &v[j], &v[k]) {
                    return Some(w);
                }
            }
        }
    }
    None
}

pub fn weakly_compatible(sigma: &SplitSystem) -> bool {
    wc_violation(sigma).is_none()
}

/// Checks only the triples that involve at least one of `fresh`, which
/// must be members of `sigma`.
pub(crate) fn wc_violation_involving(
    sigma: &[PartialSplit],
    fresh: &[PartialSplit],
) -> Option<WcWitness> {
    for (fi, f) in fresh.iter().enumerate() {
        // Skip other fresh splits already handled as `f` to avoid rechecking.
        let others: Vec<&PartialSplit> = sigma
            .iter()
            .filter(|s| *s != f && !fresh[..fi].contains(s))
            .collect();
        for i in 0..others.len() {
            for j in i + 1..others.len() {
                if let Some(w) = triple_violation(f, others[i], others[j]) {
                    return Some(w);
                }
            }
        }
    }
    None
}

/// Vertex ordering of an X-cycle: a circular sequence of all taxa.
///
/// Stored canonically (taxon 0 first, and its smaller neighbour second),
/// so rotations and reflections of one cycle compare equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicOrdering {
    order: Vec<usize>,
}

impl CyclicOrdering {
    /// `order` must be a permutation of `0..n` with `n ≥ 3`.
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        if n < 3 {
            return Err(Error::TooFewTaxa(n));
        }
        if n > crate::taxa::MAX_TAXA {
            return Err(Error::InvalidOrdering(format!("{n} taxa exceeds the cap")));
        }
        let mut seen = TaxonSet::EMPTY;
        for &t in &order {
            if t >= n || seen.contains(t) {
                return Err(Error::InvalidOrdering(format!(
                    "not a permutation of 0..{n}"
                )));
            }
            seen = seen.with(t);
        }
        Ok(CyclicOrdering {
            order: canonicalize(order),
        })
    }

    /// Ordering given by taxon labels.
    pub fn from_labels<S: AsRef<str>>(universe: &TaxonUniverse, labels: &[S]) -> Result<Self> {
        if labels.len() != universe.len() {
            return Err(Error::InvalidOrdering(format!(
                "expected {} taxa, got {}",
                universe.len(),
                labels.len()
            )));
        }
        let order = labels
            .iter()
            .map(|l| universe.index_of(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(order)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn display<'a>(&'a self, universe: &'a TaxonUniverse) -> impl fmt::Display + 'a {
        struct D<'a>(&'a CyclicOrdering, &'a TaxonUniverse);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let names: Vec<&str> = self.0.order.iter().map(|&t| self.1.name(t)).collect();
                f.write_str(&names.join(","))
            }
        }
        D(self, universe)
    }
}

impl fmt::Debug for CyclicOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cycle{:?}", self.order)
    }
}

fn canonicalize(mut order: Vec<usize>) -> Vec<usize> {
    let n = order.len();
    let zero = order.iter().position(|&t| t == 0).unwrap_or(0);
    order.rotate_left(zero);
    if n > 2 && order[1] > order[n - 1] {
        order[1..].reverse();
    }
    order
}

/// Number of side changes met walking once around `order` restricted to the
/// support of `s`.
fn cyclic_changes(s: &PartialSplit, order: &[usize]) -> usize {
    let support = s.support();
    let first = s.first();
    let mut seq = order
        .iter()
        .filter(|&&t| support.contains(t))
        .map(|&t| first.contains(t));
    let Some(start) = seq.next() else { return 0 };
    let (mut prev, mut changes) = (start, 0);
    for side in seq {
        if side != prev {
            changes += 1;
            prev = side;
        }
    }
    if prev != start {
        changes += 1;
    }
    changes
}

/// Whether the cycle displays `s`: along the cycle restricted to `A∪Ã`, each
/// side occupies one contiguous arc.
pub fn is_displayed(s: &PartialSplit, c: &CyclicOrdering) -> bool {
    cyclic_changes(s, &c.order) <= 2
}

pub fn displays(sigma: &SplitSystem, c: &CyclicOrdering) -> Result<bool> {
    if c.len() != sigma.universe().len() {
        return Err(Error::UniverseMismatch);
    }
    Ok(sigma.iter().all(|s| is_displayed(s, c)))
}

/// Searches for an X-cycle displaying `sigma`, with the default cap.
pub fn find_cycle(sigma: &SplitSystem) -> Result<Option<CyclicOrdering>> {
    find_cycle_with_cap(sigma, DEFAULT_SEARCH_CAP)
}

/// Exhaustive backtracking over canonical orderings (taxon 0 first, second
/// taxon smaller than the last), pruning a prefix as soon as some split
/// restricted to the placed taxa can no longer close into two arcs.
///
/// Returns the lexicographically smallest canonical displaying ordering.
pub fn find_cycle_with_cap(sigma: &SplitSystem, cap: usize) -> Result<Option<CyclicOrdering>> {
    let n = sigma.universe().len();
    if n < 3 {
        return Err(Error::TooFewTaxa(n));
    }
    if n > cap {
        return Err(Error::SearchInfeasible { n, cap });
    }
    let splits: Vec<PartialSplit> = sigma.iter().filter(|s| !s.is_trivial()).copied().collect();
    let mut search = Search {
        n,
        splits: &splits,
        order: Vec::with_capacity(n),
        placed: TaxonSet::EMPTY,
    };
    search.push(0);
    if search.extend() {
        Ok(Some(CyclicOrdering {
            order: search.order,
        }))
    } else {
        Ok(None)
    }
}

struct Search<'a> {
    n: usize,
    splits: &'a [PartialSplit],
    order: Vec<usize>,
    placed: TaxonSet,
}

impl Search<'_> {
    fn push(&mut self, t: usize) {
        self.order.push(t);
        self.placed = self.placed.with(t);
    }

    fn pop(&mut self) {
        if let Some(t) = self.order.pop() {
            self.placed = self.placed.without(t);
        }
    }

    fn extend(&mut self) -> bool {
        if self.order.len() == self.n {
            return true;
        }
        let last_slot = self.order.len() == self.n - 1;
        for t in 1..self.n {
            if self.placed.contains(t) {
                continue;
            }
            // Reflection symmetry: the final taxon must exceed the second.
            if last_slot && self.n > 2 && t < self.order[1] {
                continue;
            }
            self.push(t);
            if self.prefix_ok() && self.extend() {
                return true;
            }
            self.pop();
        }
        false
    }

    /// A linear prefix can still close into a cycle displaying every split:
    /// at most two side changes, and after two changes every unplaced
    /// support taxon must lie on the side the prefix starts and ends with.
    fn prefix_ok(&self) -> bool {
        let unplaced = TaxonSet::full(self.n) - self.placed;
        self.splits.iter().all(|s| {
            let support = s.support();
            let mut seq = self
                .order
                .iter()
                .filter(|&&t| support.contains(t))
                .map(|&t| s.first().contains(t));
            let Some(start) = seq.next() else { return true };
            let (mut prev, mut changes) = (start, 0);
            for side in seq {
                if side != prev {
                    changes += 1;
                    if changes > 2 {
                        return false;
                    }
                    prev = side;
                }
            }
            if changes == 2 {
                let middle = if start { s.second() } else { s.first() };
                middle.is_disjoint(unplaced)
            } else {
                true
            }
        })
    }
}
