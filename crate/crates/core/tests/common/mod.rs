//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use splitclosure::{CyclicOrdering, PartialSplit, SplitSystem, TaxonSet, TaxonUniverse};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn universe(n: usize) -> Arc<TaxonUniverse> {
    Arc::new(TaxonUniverse::numbered(n).unwrap())
}

/// Uniform random subset of `within`, each taxon kept with probability `p`.
pub fn random_subset<R: Rng>(rng: &mut R, within: TaxonSet, p: f64) -> TaxonSet {
    within.iter().filter(|_| rng.gen_bool(p)).collect()
}

/// Random partial split on `0..n`: each taxon lands in side A, side B or
/// outside the support.
pub fn random_split<R: Rng>(rng: &mut R, n: usize) -> PartialSplit {
    loop {
        let (mut a, mut b) = (TaxonSet::EMPTY, TaxonSet::EMPTY);
        for t in 0..n {
            match rng.gen_range(0..3) {
                0 => a = a.with(t),
                1 => b = b.with(t),
                _ => {}
            }
        }
        if let Ok(s) = PartialSplit::new(a, b) {
            return s;
        }
    }
}

/// Random full split of `0..n`.
pub fn random_full_split<R: Rng>(rng: &mut R, n: usize) -> PartialSplit {
    loop {
        let a = random_subset(rng, TaxonSet::full(n), 0.5);
        if let Ok(s) = PartialSplit::new(a, TaxonSet::full(n) - a) {
            return s;
        }
    }
}

pub fn random_system<R: Rng>(rng: &mut R, n: usize, k: usize) -> SplitSystem {
    let splits: Vec<PartialSplit> = (0..k).map(|_| random_split(rng, n)).collect();
    SplitSystem::from_splits(universe(n), splits).unwrap()
}

pub fn random_order<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    order
}

pub fn random_cycle<R: Rng>(rng: &mut R, n: usize) -> CyclicOrdering {
    CyclicOrdering::new(random_order(rng, n)).unwrap()
}

/// A split displayed by `order`: a random arc against the rest, cut down
/// to a random support that keeps both sides nonempty.
pub fn random_arc_split<R: Rng>(rng: &mut R, order: &[usize]) -> PartialSplit {
    let n = order.len();
    loop {
        let start = rng.gen_range(0..n);
        let len = rng.gen_range(1..n);
        let arc: TaxonSet = (0..len).map(|i| order[(start + i) % n]).collect();
        let rest = TaxonSet::full(n) - arc;
        let keep = random_subset(rng, TaxonSet::full(n), 0.7);
        if let Ok(s) = PartialSplit::new(arc & keep, rest & keep) {
            return s;
        }
    }
}

/// Random irreducible system displayed by `order`.
pub fn random_circular_system<R: Rng>(rng: &mut R, order: &[usize], k: usize) -> SplitSystem {
    let splits: Vec<PartialSplit> = (0..k).map(|_| random_arc_split(rng, order)).collect();
    SplitSystem::from_splits(universe(order.len()), splits)
        .unwrap()
        .reduce()
}

/// Every canonical ordering of `0..n` (taxon 0 first, second < last).
pub fn all_canonical_orders(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            if cur[1] < cur[n - 1] {
                out.push(cur.clone());
            }
            return;
        }
        for t in 1..n {
            if !used[t] {
                used[t] = true;
                cur.push(t);
                rec(n, cur, used, out);
                cur.pop();
                used[t] = false;
            }
        }
    }
    let mut out = Vec::new();
    let mut used = vec![false; n];
    used[0] = true;
    rec(n, &mut vec![0], &mut used, &mut out);
    out
}

/// Brute-force display test: the sides are contiguous around the cycle,
/// checked by looking for a rotation where the restricted sequence reads
/// A...AB...B.
pub fn brute_displayed(s: &PartialSplit, order: &[usize]) -> bool {
    let seq: Vec<bool> = order
        .iter()
        .filter(|t| s.support().contains(**t))
        .map(|t| s.first().contains(*t))
        .collect();
    let m = seq.len();
    (0..m).any(|r| {
        let rot: Vec<bool> = (0..m).map(|i| seq[(r + i) % m]).collect();
        let k = rot.iter().take_while(|x| **x).count();
        k > 0 && rot[k..].iter().all(|x| !*x)
    })
}

/// Brute-force circularity oracle: first canonical ordering displaying
/// every member.
pub fn brute_find_cycle(sigma: &SplitSystem) -> Option<Vec<usize>> {
    all_canonical_orders(sigma.universe().len())
        .into_iter()
        .find(|o| sigma.iter().all(|s| brute_displayed(s, o)))
}

/// Rooted test tree: leaves carry taxon indices.
#[derive(Debug, Clone)]
pub enum Tree {
    Leaf(usize),
    Node(Vec<Tree>),
}

impl Tree {
    pub fn newick(&self, u: &TaxonUniverse) -> String {
        fn rec(t: &Tree, u: &TaxonUniverse, out: &mut String) {
            match t {
                Tree::Leaf(i) => out.push_str(u.name(*i)),
                Tree::Node(cs) => {
                    out.push('(');
                    for (k, c) in cs.iter().enumerate() {
                        if k > 0 {
                            out.push(',');
                        }
                        rec(c, u, out);
                    }
                    out.push(')');
                }
            }
        }
        let mut s = String::new();
        rec(self, u, &mut s);
        s.push(';');
        s
    }

    /// Undirected adjacency with leaf labels; degree-2 vertices suppressed,
    /// a degree-2 root included.
    pub fn graph(&self) -> (Vec<Vec<usize>>, Vec<Option<usize>>) {
        fn rec(t: &Tree, adj: &mut Vec<Vec<usize>>, lab: &mut Vec<Option<usize>>) -> usize {
            let id = adj.len();
            adj.push(Vec::new());
            lab.push(None);
            match t {
                Tree::Leaf(i) => lab[id] = Some(*i),
                Tree::Node(cs) => {
                    for c in cs {
                        let cid = rec(c, adj, lab);
                        adj[id].push(cid);
                        adj[cid].push(id);
                    }
                }
            }
            id
        }
        let (mut adj, mut lab) = (Vec::new(), Vec::new());
        rec(self, &mut adj, &mut lab);
        (adj, lab)
    }
}

/// Random rooted tree over `leaves`, each interior vertex with 2 or 3
/// children.
pub fn random_tree<R: Rng>(rng: &mut R, leaves: &[usize]) -> Tree {
    let mut ls = leaves.to_vec();
    ls.shuffle(rng);
    random_planar_tree(rng, &ls)
}

/// Random rooted tree whose leaves, read left to right, are `leaves` in
/// that order. Every cluster is then an interval, so the tree's splits are
/// displayed by the cycle through `leaves`.
pub fn random_planar_tree<R: Rng>(rng: &mut R, leaves: &[usize]) -> Tree {
    if leaves.len() == 1 {
        return Tree::Leaf(leaves[0]);
    }
    let parts = if leaves.len() >= 3 && rng.gen_bool(0.3) {
        3
    } else {
        2
    };
    let mut cuts: Vec<usize> = (1..leaves.len()).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(parts - 1).collect();
    cuts.sort();
    let mut children = Vec::new();
    let mut start = 0;
    for c in cuts.into_iter().chain(std::iter::once(leaves.len())) {
        children.push(random_planar_tree(rng, &leaves[start..c]));
        start = c;
    }
    Tree::Node(children)
}

/// Edge-deletion oracle on the generator's own graph: for every edge,
/// the leaf sets of the two components.
pub fn edge_deletion_splits(
    adj: &[Vec<usize>],
    lab: &[Option<usize>],
) -> Vec<(TaxonSet, TaxonSet)> {
    let all: TaxonSet = lab.iter().flatten().copied().collect();
    let mut out = Vec::new();
    for u in 0..adj.len() {
        for &v in &adj[u] {
            if u < v {
                let mut seen = vec![false; adj.len()];
                seen[u] = true;
                let mut stack = vec![v];
                let mut side = TaxonSet::EMPTY;
                while let Some(x) = stack.pop() {
                    if seen[x] {
                        continue;
                    }
                    seen[x] = true;
                    if let Some(t) = lab[x] {
                        side = side.with(t);
                    }
                    stack.extend(adj[x].iter().copied());
                }
                out.push((side, all - side));
            }
        }
    }
    out
}

/// The system of splits produced by [`edge_deletion_splits`].
pub fn oracle_tree_splits(
    tree: &Tree,
    u: &Arc<TaxonUniverse>,
    include_trivial: bool,
) -> SplitSystem {
    let (adj, lab) = tree.graph();
    let mut sys = SplitSystem::new(u.clone());
    for (a, b) in edge_deletion_splits(&adj, &lab) {
        if let Ok(s) = PartialSplit::new(a, b) {
            if include_trivial || (a.len() > 1 && b.len() > 1) {
                sys.insert(s).unwrap();
            }
        }
    }
    sys
}
