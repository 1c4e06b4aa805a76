//! Taxon universes and fixed-width taxon subsets.
//!
//! A [`TaxonUniverse`] is an ordered list of distinct labels; taxa are
//! addressed by their index in that list. A [`TaxonSet`] is a 64-bit mask
//! over those indices, so every set operation is a single machine op.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Hard upper bound on the number of taxa (width of [`TaxonSet`]).
pub const MAX_TAXA: usize = 64;

const RESERVED: &[char] = &['|', '(', ')', ',', ';', ':'];

/// Returns `true` if `label` can name a taxon.
pub fn is_valid_label(label: &str) -> bool {
    !label.is_empty()
        && !label
            .chars()
            .any(|c| c.is_whitespace() || RESERVED.contains(&c))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaxonUniverse {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl TaxonUniverse {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::with_cap(names, MAX_TAXA)
    }

    /// Builds a universe with a lower taxon cap than [`MAX_TAXA`].
    pub fn with_cap<I, S>(names: I, cap: usize) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let cap = cap.min(MAX_TAXA);
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() || names.len() > cap {
            return Err(Error::UniverseSize {
                got: names.len(),
                max: cap,
            });
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if !is_valid_label(name) {
                return Err(Error::InvalidLabel(name.clone()));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(name.clone()));
            }
        }
        Ok(TaxonUniverse { names, index })
    }

    /// Universe `1, 2, ..., n` (handy for the numeric examples).
    pub fn numbered(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, taxon: usize) -> &str {
        &self.names[taxon]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// The set of all taxa.
    pub fn all(&self) -> TaxonSet {
        TaxonSet::full(self.len())
    }

    pub fn contains_set(&self, set: TaxonSet) -> bool {
        set.is_subset(self.all())
    }

    /// Resolves a list of labels into a set.
    pub fn set_of<I, S>(&self, labels: I) -> Result<TaxonSet>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        labels.into_iter().try_fold(TaxonSet::EMPTY, |acc, l| {
            Ok(acc.with(self.index_of(l.as_ref())?))
        })
    }

    /// Parses one side of a split written either as separated labels
    /// (`"a b"`, `"a,b"`) or, when every label is a single character, as a
    /// run of characters (`"145"`).
    pub fn parse_side(&self, text: &str) -> Result<TaxonSet> {
        let text = text.trim();
        if text.contains(|c: char| c.is_whitespace() || c == ',') {
            return self.set_of(
                text.split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|t| !t.is_empty()),
            );
        }
        if self.index.contains_key(text) {
            return Ok(TaxonSet::singleton(self.index[text]));
        }
        let mut set = TaxonSet::EMPTY;
        let mut buf = [0u8; 4];
        for c in text.chars() {
            set = set.with(self.index_of(c.encode_utf8(&mut buf))?);
        }
        Ok(set)
    }

    /// Labels of `set` in index order.
    pub fn labels(&self, set: TaxonSet) -> Vec<&str> {
        set.iter().map(|i| self.name(i)).collect()
    }

    /// Joins the labels of `set` with `sep`.
    pub fn join(&self, set: TaxonSet, sep: &str) -> String {
        self.labels(set).join(sep)
    }

    pub(crate) fn single_char_labels(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }
}

/// A subset of taxon indices `0..64`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TaxonSet(u64);

impl TaxonSet {
    pub const EMPTY: TaxonSet = TaxonSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        TaxonSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// The set `{0, ..., n-1}`.
    pub const fn full(n: usize) -> Self {
        if n >= 64 {
            TaxonSet(u64::MAX)
        } else {
            TaxonSet((1u64 << n) - 1)
        }
    }

    pub const fn singleton(taxon: usize) -> Self {
        TaxonSet(1u64 << taxon)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        indices.into_iter().fold(Self::EMPTY, |s, i| s.with(i))
    }

    #[must_use]
    pub const fn with(self, taxon: usize) -> Self {
        TaxonSet(self.0 | (1u64 << taxon))
    }

    #[must_use]
    pub const fn without(self, taxon: usize) -> Self {
        TaxonSet(self.0 & !(1u64 << taxon))
    }

    pub const fn contains(self, taxon: usize) -> bool {
        taxon < 64 && self.0 & (1u64 << taxon) != 0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn union(self, other: Self) -> Self {
        TaxonSet(self.0 | other.0)
    }

    pub const fn intersection(self, other: Self) -> Self {
        TaxonSet(self.0 & other.0)
    }

    pub const fn difference(self, other: Self) -> Self {
        TaxonSet(self.0 & !other.0)
    }

    /// Complement relative to `within`.
    pub const fn complement_in(self, within: Self) -> Self {
        TaxonSet(within.0 & !self.0)
    }

    pub const fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub const fn intersects(self, other: Self) -> bool {
        self.0 & other.0 != 0
    }

    /// Smallest member, if any.
    pub const fn min(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }
}

impl std::ops::BitOr for TaxonSet {
    type Output = TaxonSet;
    fn bitor(self, rhs: Self) -> Self {
        self.union(rhs)
    }
}

impl std::ops::BitAnd for TaxonSet {
    type Output = TaxonSet;
    fn bitand(self, rhs: Self) -> Self {
        self.intersection(rhs)
    }
}

impl std::ops::Sub for TaxonSet {
    type Output = TaxonSet;
    fn sub(self, rhs: Self) -> Self {
        self.difference(rhs)
    }
}

impl fmt::Debug for TaxonSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl IntoIterator for TaxonSet {
    type Item = usize;
    type IntoIter = Iter;
    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl FromIterator<usize> for TaxonSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::from_indices(iter)
    }
}

/// Ascending iterator over the members of a [`TaxonSet`].
#[derive(Clone)]
pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}
