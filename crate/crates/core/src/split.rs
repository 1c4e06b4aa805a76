//! Partial splits, the extension order, and irreducible split systems.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::taxa::{TaxonSet, TaxonUniverse};

/// An unordered bipartition `A|Ã` of a subset of the taxa.
///
/// Stored canonically: `first` is the side holding the smallest taxon of the
/// support, so the derived `Eq`, `Hash` and `Ord` ignore orientation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialSplit {
    first: TaxonSet,
    second: TaxonSet,
}

impl PartialSplit {
    /// Builds `a|b`; fails unless both sides are nonempty and disjoint.
    pub fn new(a: TaxonSet, b: TaxonSet) -> Result<Self> {
        if a.is_empty() || b.is_empty() || a.intersects(b) {
            return Err(Error::InvalidSplit);
        }
        Ok(Self::from_sides(a, b))
    }

    /// Caller guarantees nonempty disjoint sides.
    pub(crate) fn from_sides(a: TaxonSet, b: TaxonSet) -> Self {
        debug_assert!(!a.is_empty() && !b.is_empty() && a.is_disjoint(b));
        if a.bits().trailing_zeros() < b.bits().trailing_zeros() {
            PartialSplit {
                first: a,
                second: b,
            }
        } else {
            PartialSplit {
                first: b,
                second: a,
            }
        }
    }

    /// Side containing the smallest taxon of the support.
    pub fn first(&self) -> TaxonSet {
        self.first
    }

    pub fn second(&self) -> TaxonSet {
        self.second
    }

    /// `(A, Ã)` with `A` the first side, or the second when `flip` is set.
    pub fn oriented(&self, flip: bool) -> (TaxonSet, TaxonSet) {
        if flip {
            (self.second, self.first)
        } else {
            (self.first, self.second)
        }
    }

    pub fn support(&self) -> TaxonSet {
        self.first | self.second
    }

    pub fn is_full(&self, universe: &TaxonUniverse) -> bool {
        self.support() == universe.all()
    }

    /// A split with a singleton side.
    pub fn is_trivial(&self) -> bool {
        self.first.len() == 1 || self.second.len() == 1
    }

    /// Side containing `taxon`, if it is in the support.
    pub fn side_of(&self, taxon: usize) -> Option<TaxonSet> {
        if self.first.contains(taxon) {
            Some(self.first)
        } else if self.second.contains(taxon) {
            Some(self.second)
        } else {
            None
        }
    }

    /// Whether `self` extends `other`: each side of `other` lies in a
    /// distinct side of `self`. Every split extends itself.
    pub fn extends(&self, other: &PartialSplit) -> bool {
        (other.first.is_subset(self.first) && other.second.is_subset(self.second))
            || (other.first.is_subset(self.second) && other.second.is_subset(self.first))
    }

    /// Some part of `self` is disjoint from some part of `other`.
    pub fn compatible(&self, other: &PartialSplit) -> bool {
        self.first.is_disjoint(other.first)
            || self.first.is_disjoint(other.second)
            || self.second.is_disjoint(other.first)
            || self.second.is_disjoint(other.second)
    }

    /// `(A ∩ keep)|(Ã ∩ keep)`, or `None` when a side empties out.
    pub fn restrict(&self, keep: TaxonSet) -> Option<PartialSplit> {
        let (a, b) = (self.first & keep, self.second & keep);
        if a.is_empty() || b.is_empty() {
            None
        } else {
            Some(Self::from_sides(a, b))
        }
    }

    pub fn display<'a>(&'a self, universe: &'a TaxonUniverse) -> SplitDisplay<'a> {
        SplitDisplay {
            split: self,
            universe,
        }
    }
}

impl fmt::Debug for PartialSplit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |s: TaxonSet| {
            s.iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{}|{}", side(self.first), side(self.second))
    }
}

/// Renders a split with taxon labels: `12|345` when every label is one
/// character, `a,b|c,d,e` otherwise.
pub struct SplitDisplay<'a> {
    split: &'a PartialSplit,
    universe: &'a TaxonUniverse,
}

impl fmt::Display for SplitDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.universe.single_char_labels() {
            ""
        } else {
            ","
        };
        write!(
            f,
            "{}|{}",
            self.universe.join(self.split.first, sep),
            self.universe.join(self.split.second, sep)
        )
    }
}

/// Parses `"12|34"` / `"a b | c d"` style text into a split over `universe`.
pub fn parse_split(universe: &TaxonUniverse, text: &str) -> Result<PartialSplit> {
    let (a, b) = text.split_once('|').ok_or(Error::InvalidSplit)?;
    if b.contains('|') {
        return Err(Error::InvalidSplit);
    }
    PartialSplit::new(universe.parse_side(a)?, universe.parse_side(b)?)
}

/// A duplicate-free collection of partial splits over one universe.
///
/// Members are kept sorted, which fixes iteration order for deterministic
/// enumeration and printing.
#[derive(Clone)]
pub struct SplitSystem {
    universe: Arc<TaxonUniverse>,
    splits: BTreeSet<PartialSplit>,
}

impl SplitSystem {
    pub fn new(universe: Arc<TaxonUniverse>) -> Self {
        SplitSystem {
            universe,
            splits: BTreeSet::new(),
        }
    }

    pub fn from_splits<I>(universe: Arc<TaxonUniverse>, splits: I) -> Result<Self>
    where
        I: IntoIterator<Item = PartialSplit>,
    {
        let mut sys = Self::new(universe);
        for s in splits {
            sys.insert(s)?;
        }
        Ok(sys)
    }

    /// Parses each entry with [`parse_split`].
    pub fn parse<I, S>(universe: Arc<TaxonUniverse>, texts: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let splits = texts
            .into_iter()
            .map(|t| parse_split(&universe, t.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_splits(universe, splits)
    }

    pub fn universe(&self) -> &Arc<TaxonUniverse> {
        &self.universe
    }

    /// Inserts `split`; returns `false` if it was already present.
    pub fn insert(&mut self, split: PartialSplit) -> Result<bool> {
        if !self.universe.contains_set(split.support()) {
            return Err(Error::OutOfUniverse);
        }
        Ok(self.splits.insert(split))
    }

    pub fn contains(&self, split: &PartialSplit) -> bool {
        self.splits.contains(split)
    }

    pub fn len(&self) -> usize {
        self.splits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.splits.is_empty()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &PartialSplit> + '_ {
        self.splits.iter()
    }

    pub fn to_vec(&self) -> Vec<PartialSplit> {
        self.splits.iter().copied().collect()
    }

    pub fn same_universe(&self, other: &SplitSystem) -> bool {
        Arc::ptr_eq(&self.universe, &other.universe) || self.universe == other.universe
    }

    fn check_universe(&self, other: &SplitSystem) -> Result<()> {
        if self.same_universe(other) {
            Ok(())
        } else {
            Err(Error::UniverseMismatch)
        }
    }

    /// Some member (possibly `split` itself) extends `split`.
    pub fn covers(&self, split: &PartialSplit) -> bool {
        self.splits.iter().any(|s| s.extends(split))
    }

    /// `Σ⁻`: drops every member strictly extended by another member.
    pub fn reduce(&self) -> SplitSystem {
        let splits = self
            .splits
            .iter()
            .filter(|s| !self.splits.iter().any(|t| t != *s && t.extends(s)))
            .copied()
            .collect();
        SplitSystem {
            universe: Arc::clone(&self.universe),
            splits,
        }
    }

    pub fn is_irreducible(&self) -> bool {
        self.splits
            .iter()
            .all(|s| !self.splits.iter().any(|t| t != s && t.extends(s)))
    }

    /// `Σ ⪯ Σ′`: every member of `self` is extended by a member of `other`.
    pub fn preceq(&self, other: &SplitSystem) -> Result<bool> {
        self.check_universe(other)?;
        Ok(self.splits.iter().all(|s| other.covers(s)))
    }

    /// Set union (not reduced).
    pub fn union(&self, other: &SplitSystem) -> Result<SplitSystem> {
        self.check_universe(other)?;
        let mut out = self.clone();
        out.splits.extend(other.splits.iter().copied());
        Ok(out)
    }

    /// `(Σ ∪ new)⁻` for irreducible `Σ`, computed without rescanning `Σ`
    /// against itself. Returns the members that were added.
    pub(crate) fn absorb(&mut self, new: &[PartialSplit]) -> Vec<PartialSplit> {
        debug_assert!(new.iter().all(|s| self.universe.contains_set(s.support())));
        let mut fresh: Vec<PartialSplit> = Vec::new();
        for s in new {
            if self.covers(s) || fresh.contains(s) {
                continue;
            }
            if new.iter().any(|t| t != s && t.extends(s)) {
                continue;
            }
            fresh.push(*s);
        }
        if fresh.is_empty() {
            return fresh;
        }
        self.splits.retain(|s| !fresh.iter().any(|f| f.extends(s)));
        self.splits.extend(fresh.iter().copied());
        fresh
    }

    /// Restricts every member to `keep`, discarding splits with an empty
    /// side. The result is not reduced.
    pub fn restrict(&self, keep: TaxonSet) -> SplitSystem {
        SplitSystem {
            universe: Arc::clone(&self.universe),
            splits: self
                .splits
                .iter()
                .filter_map(|s| s.restrict(keep))
                .collect(),
        }
    }

    /// Members covering the whole universe.
    pub fn full_splits(&self) -> impl Iterator<Item = &PartialSplit> + '_ {
        let all = self.universe.all();
        self.splits.iter().filter(move |s| s.support() == all)
    }

    /// Members without a singleton side.
    pub fn without_trivial(&self) -> SplitSystem {
        SplitSystem {
            universe: Arc::clone(&self.universe),
            splits: self
                .splits
                .iter()
                .filter(|s| !s.is_trivial())
                .copied()
                .collect(),
        }
    }

    pub fn display_split(&self, split: &PartialSplit) -> String {
        split.display(&self.universe).to_string()
    }
}

impl PartialEq for SplitSystem {
    fn eq(&self, other: &Self) -> bool {
        self.same_universe(other) && self.splits == other.splits
    }
}

impl Eq for SplitSystem {}

impl fmt::Debug for SplitSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SplitSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.splits.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", s.display(&self.universe))?;
        }
        f.write_str("}")
    }
}

impl<'a> IntoIterator for &'a SplitSystem {
    type Item = &'a PartialSplit;
    type IntoIter = std::collections::btree_set::Iter<'a, PartialSplit>;
    fn into_iter(self) -> Self::IntoIter {
        self.splits.iter()
    }
}
