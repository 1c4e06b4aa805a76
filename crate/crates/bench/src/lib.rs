//! Input fixtures shared by the benchmarks.

use std::sync::Arc;

use splitclosure::{PartialSplit, SplitSystem, TaxonSet, TaxonUniverse};

/// The five-taxon system whose guarded Y-closure is the standard example.
pub fn worked_example() -> SplitSystem {
    let x = Arc::new(TaxonUniverse::numbered(5).unwrap());
    SplitSystem::parse(x, ["12|34", "23|14", "15|24", "45|13"]).unwrap()
}

/// Every partial split `A|B` with `|A| = |B| = 2` on `n` taxa.
pub fn all_two_by_two(n: usize) -> SplitSystem {
    let x = Arc::new(TaxonUniverse::numbered(n).unwrap());
    let mut sys = SplitSystem::new(x);
    for a in 0..n {
        for b in a + 1..n {
            for c in 0..n {
                for d in c + 1..n {
                    let (l, r) = (
                        TaxonSet::from_indices([a, b]),
                        TaxonSet::from_indices([c, d]),
                    );
                    if let Ok(s) = PartialSplit::new(l, r) {
                        sys.insert(s).unwrap();
                    }
                }
            }
        }
    }
    sys
}

/// Splits of a circular arrangement: every arc of `0..n` in natural
/// order, cut down to the support `keep`.
pub fn circular_arcs(n: usize, keep: TaxonSet) -> SplitSystem {
    let x = Arc::new(TaxonUniverse::numbered(n).unwrap());
    let mut sys = SplitSystem::new(x);
    for start in 0..n {
        for len in 2..n - 1 {
            let arc = TaxonSet::from_indices((0..len).map(|i| (start + i) % n));
            let rest = TaxonSet::full(n) - arc;
            if let Some(s) = PartialSplit::new(arc, rest)
                .ok()
                .and_then(|s| s.restrict(keep))
            {
                sys.insert(s).unwrap();
            }
        }
    }
    sys.reduce()
}
