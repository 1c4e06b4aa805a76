//! Newick input, leaf pruning, and extraction of the splits a tree displays.
//!
//! Dialect: labels are bare words or single-quoted strings (`''` escapes a
//! quote); `:length` suffixes and interior labels are parsed and discarded;
//! `[...]` comments are skipped. Trees are treated as unrooted: a degree-2
//! root, like any degree-2 interior vertex, is suppressed.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::error::Error;
use crate::split::{PartialSplit, SplitSystem};
use crate::taxa::{TaxonSet, TaxonUniverse};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NewickErrorKind {
    #[error("unbalanced parentheses")]
    Unbalanced,
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("missing ';' at end of tree")]
    MissingSemicolon,
    #[error("unterminated {0}")]
    Unterminated(&'static str),
    #[error("leaf without a label")]
    MissingLabel,
    #[error("invalid branch length {0:?}")]
    InvalidLength(String),
    #[error("empty tree")]
    EmptyTree,
    #[error("leaf label {0:?} occurs twice in one tree")]
    DuplicateLabel(String),
    #[error("unknown taxon {0:?}")]
    UnknownLabel(String),
    #[error("{0}")]
    Universe(Error),
}

/// A Newick syntax or resolution error at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct NewickError {
    pub line: usize,
    pub column: usize,
    pub kind: NewickErrorKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

impl Pos {
    fn err(self, kind: NewickErrorKind) -> NewickError {
        NewickError {
            line: self.line,
            column: self.column,
            kind,
        }
    }
}

/// Parsed but unresolved subtree.
#[derive(Debug)]
struct RawNode {
    label: Option<String>,
    children: Vec<RawNode>,
    pos: Pos,
}

struct Parser {
    chars: Vec<char>,
    positions: Vec<Pos>,
    at: usize,
}

const DELIMS: &[char] = &['(', ')', '[', ']', '\'', ',', ';', ':'];

impl Parser {
    fn new(text: &str) -> Self {
        let chars: Vec<char> = text.chars().collect();
        let mut positions = Vec::with_capacity(chars.len() + 1);
        let (mut line, mut column) = (1, 1);
        for &c in &chars {
            positions.push(Pos { line, column });
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        positions.push(Pos { line, column });
        Parser {
            chars,
            positions,
            at: 0,
        }
    }

    fn pos(&self) -> Pos {
        self.positions[self.at]
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).copied()
    }

    fn bump(&mut self) {
        self.at += 1;
    }

    fn skip_blank(&mut self) -> Result<(), NewickError> {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '[' {
                let start = self.pos();
                while self.peek().is_some_and(|c| c != ']') {
                    self.bump();
                }
                if self.peek().is_none() {
                    return Err(start.err(NewickErrorKind::Unterminated("comment")));
                }
                self.bump();
            } else {
                break;
            }
        }
        Ok(())
    }

    fn trees(&mut self) -> Result<Vec<RawNode>, NewickError> {
        let mut out = Vec::new();
        loop {
            self.skip_blank()?;
            match self.peek() {
                None => return Ok(out),
                Some(';') => return Err(self.pos().err(NewickErrorKind::EmptyTree)),
                Some(_) => {}
            }
            let root = self.subtree()?;
            self.skip_blank()?;
            match self.peek() {
                Some(';') => self.bump(),
                Some(')') => return Err(self.pos().err(NewickErrorKind::Unbalanced)),
                Some(c) => return Err(self.pos().err(NewickErrorKind::UnexpectedChar(c))),
                None => return Err(self.pos().err(NewickErrorKind::MissingSemicolon)),
            }
            out.push(root);
        }
    }

    fn subtree(&mut self) -> Result<RawNode, NewickError> {
        self.skip_blank()?;
        let pos = self.pos();
        let mut node = RawNode {
            label: None,
            children: Vec::new(),
            pos,
        };
        if self.peek() == Some('(') {
            self.bump();
            self.skip_blank()?;
            if self.peek() == Some(')') {
                return Err(self.pos().err(NewickErrorKind::EmptyTree));
            }
            node.children.push(self.subtree()?);
            loop {
                self.skip_blank()?;
                match self.peek() {
                    Some(',') => {
                        self.bump();
                        node.children.push(self.subtree()?);
                    }
                    Some(')') => {
                        self.bump();
                        break;
                    }
                    Some(';') | None => return Err(self.pos().err(NewickErrorKind::Unbalanced)),
                    Some(c) => return Err(self.pos().err(NewickErrorKind::UnexpectedChar(c))),
                }
            }
            // Interior labels carry no taxon.
            self.skip_blank()?;
            self.label()?;
        } else {
            self.skip_blank()?;
            node.pos = self.pos();
            node.label = self.label()?;
            if node.label.is_none() {
                return Err(node.pos.err(NewickErrorKind::MissingLabel));
            }
        }
        self.skip_blank()?;
        if self.peek() == Some(':') {
            self.bump();
            self.skip_blank()?;
            let start = self.pos();
            let mut text = String::new();
            while let Some(c) = self.peek() {
                if c.is_whitespace() || DELIMS.contains(&c) {
                    break;
                }
                text.push(c);
                self.bump();
            }
            if text.parse::<f64>().is_err() {
                return Err(start.err(NewickErrorKind::InvalidLength(text)));
            }
        }
        Ok(node)
    }

    fn label(&mut self) -> Result<Option<String>, NewickError> {
        let start = self.pos();
        if self.peek() == Some('\'') {
            self.bump();
            let mut s = String::new();
            loop {
                match self.peek() {
                    None => return Err(start.err(NewickErrorKind::Unterminated("quoted label"))),
                    Some('\'') => {
                        self.bump();
                        if self.peek() == Some('\'') {
                            s.push('\'');
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    Some(c) => {
                        s.push(c);
                        self.bump();
                    }
                }
            }
            return Ok(if s.is_empty() { None } else { Some(s) });
        }
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_whitespace() || DELIMS.contains(&c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        Ok(if s.is_empty() { None } else { Some(s) })
    }
}

fn collect_leaf_labels<'a>(node: &'a RawNode, out: &mut Vec<(&'a str, Pos)>) {
    if node.children.is_empty() {
        if let Some(l) = &node.label {
            out.push((l, node.pos));
        }
    }
    for c in &node.children {
        collect_leaf_labels(c, out);
    }
}

/// Extends `base` with the leaf labels of `text` not already present, in
/// order of first appearance.
pub fn grow_universe(base: &[String], text: &str) -> Result<TaxonUniverse, NewickError> {
    let raw = Parser::new(text).trees()?;
    let mut names: Vec<String> = base.to_vec();
    let mut first_pos = Pos { line: 1, column: 1 };
    for tree in &raw {
        let mut labels = Vec::new();
        collect_leaf_labels(tree, &mut labels);
        for (l, pos) in labels {
            if !names.iter().any(|n| n == l) {
                if names.len() == base.len() {
                    first_pos = pos;
                }
                names.push(l.to_string());
            }
        }
    }
    if names.is_empty() {
        return Err(first_pos.err(NewickErrorKind::EmptyTree));
    }
    TaxonUniverse::new(names).map_err(|e| first_pos.err(NewickErrorKind::Universe(e)))
}

/// Parses one or more `;`-terminated trees whose leaves are taxa of
/// `universe`.
pub fn parse_newick(
    text: &str,
    universe: &Arc<TaxonUniverse>,
) -> Result<Vec<PhyloTree>, NewickError> {
    let raw = Parser::new(text).trees()?;
    raw.iter()
        .map(|r| PhyloTree::from_raw(r, universe))
        .collect()
}

/// An unrooted tree whose leaves carry distinct taxa; interior vertices are
/// unlabelled and have degree at least 3.
#[derive(Clone)]
pub struct PhyloTree {
    universe: Arc<TaxonUniverse>,
    adj: Vec<Vec<usize>>,
    taxon: Vec<Option<usize>>,
}

impl PhyloTree {
    fn from_raw(raw: &RawNode, universe: &Arc<TaxonUniverse>) -> Result<Self, NewickError> {
        let mut adj: Vec<Vec<usize>> = Vec::new();
        let mut taxon: Vec<Option<usize>> = Vec::new();
        let mut seen = TaxonSet::EMPTY;

        fn build(
            node: &RawNode,
            universe: &TaxonUniverse,
            adj: &mut Vec<Vec<usize>>,
            taxon: &mut Vec<Option<usize>>,
            seen: &mut TaxonSet,
        ) -> Result<usize, NewickError> {
            let id = adj.len();
            adj.push(Vec::new());
            taxon.push(None);
            if node.children.is_empty() {
                let label = node.label.as_deref().unwrap_or_default();
                let t = universe.index_of(label).map_err(|_| {
                    node.pos
                        .err(NewickErrorKind::UnknownLabel(label.to_string()))
                })?;
                if seen.contains(t) {
                    return Err(node
                        .pos
                        .err(NewickErrorKind::DuplicateLabel(label.to_string())));
                }
                *seen = seen.with(t);
                taxon[id] = Some(t);
            }
            for child in &node.children {
                let c = build(child, universe, adj, taxon, seen)?;
                adj[id].push(c);
                adj[c].push(id);
            }
            Ok(id)
        }

        build(raw, universe, &mut adj, &mut taxon, &mut seen)?;
        Ok(PhyloTree::normalized(Arc::clone(universe), adj, taxon))
    }

    /// Removes unlabelled leaves and suppresses unlabelled degree-2
    /// vertices, then renumbers.
    fn normalized(
        universe: Arc<TaxonUniverse>,
        mut adj: Vec<Vec<usize>>,
        taxon: Vec<Option<usize>>,
    ) -> Self {
        let n = adj.len();
        let mut alive = vec![true; n];
        let mut work: Vec<usize> = (0..n).collect();
        while let Some(v) = work.pop() {
            if !alive[v] || taxon[v].is_some() {
                continue;
            }
            match adj[v].len() {
                0 if alive.iter().filter(|a| **a).count() > 1 => alive[v] = false,
                1 => {
                    let u = adj[v][0];
                    adj[u].retain(|&w| w != v);
                    adj[v].clear();
                    alive[v] = false;
                    work.push(u);
                }
                2 => {
                    let (a, b) = (adj[v][0], adj[v][1]);
                    for (x, y) in [(a, b), (b, a)] {
                        for w in adj[x].iter_mut() {
                            if *w == v {
                                *w = y;
                            }
                        }
                    }
                    adj[v].clear();
                    alive[v] = false;
                }
                _ => {}
            }
        }
        let mut remap = vec![usize::MAX; n];
        let mut next = 0;
        for v in 0..n {
            if alive[v] {
                remap[v] = next;
                next += 1;
            }
        }
        let mut new_adj = vec![Vec::new(); next];
        let mut new_taxon = vec![None; next];
        for v in 0..n {
            if alive[v] {
                new_adj[remap[v]] = adj[v].iter().map(|&w| remap[w]).collect();
                new_taxon[remap[v]] = taxon[v];
            }
        }
        PhyloTree {
            universe,
            adj: new_adj,
            taxon: new_taxon,
        }
    }

    pub fn universe(&self) -> &Arc<TaxonUniverse> {
        &self.universe
    }

    /// Taxa labelling the leaves.
    pub fn leaves(&self) -> TaxonSet {
        self.taxon.iter().flatten().copied().collect()
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    fn side(&self, from: usize, avoid: usize) -> TaxonSet {
        let mut set = TaxonSet::EMPTY;
        let mut stack = vec![(from, avoid)];
        while let Some((v, parent)) = stack.pop() {
            if let Some(t) = self.taxon[v] {
                set = set.with(t);
            }
            for &w in &self.adj[v] {
                if w != parent {
                    stack.push((w, v));
                }
            }
        }
        set
    }

    /// One partial split per edge: the leaf sets of the two components left
    /// by deleting it. With `include_trivial` off, splits with a singleton
    /// side are dropped.
    pub fn extract_splits(&self, include_trivial: bool) -> SplitSystem {
        let leaves = self.leaves();
        let mut sys = SplitSystem::new(Arc::clone(&self.universe));
        for u in 0..self.adj.len() {
            for &v in &self.adj[u] {
                if u < v {
                    let side = self.side(v, u);
                    if let Ok(s) = PartialSplit::new(side, leaves - side) {
                        if include_trivial || !s.is_trivial() {
                            // Leaves come from the universe, so this cannot fail.
                            let _ = sys.insert(s);
                        }
                    }
                }
            }
        }
        sys.reduce()
    }

    /// Removes the leaves in `drop` with their incident edges and suppresses
    /// the resulting degree-2 vertices.
    pub fn prune(&self, drop: TaxonSet) -> Result<PhyloTree, Error> {
        let leaves = self.leaves();
        if let Some(t) = (drop - leaves).min() {
            let name = if t < self.universe.len() {
                self.universe.name(t).to_string()
            } else {
                format!("#{t}")
            };
            return Err(Error::NotInTree(name));
        }
        if drop == leaves {
            return Err(Error::PruneAll);
        }
        let mut adj = self.adj.clone();
        let mut taxon = self.taxon.clone();
        for v in 0..adj.len() {
            if taxon[v].is_some_and(|t| drop.contains(t)) {
                taxon[v] = None;
                for w in std::mem::take(&mut adj[v]) {
                    adj[w].retain(|&x| x != v);
                }
            }
        }
        Ok(PhyloTree::normalized(
            Arc::clone(&self.universe),
            adj,
            taxon,
        ))
    }

    /// Newick text for the tree, rooted at an interior vertex.
    pub fn to_newick(&self) -> String {
        let mut out = String::new();
        match self.adj.iter().position(|a| a.len() > 1) {
            Some(root) => self.write_node(root, usize::MAX, &mut out),
            None if self.adj.len() == 2 => {
                out.push('(');
                self.write_node(0, usize::MAX, &mut out);
                out.push(',');
                self.write_node(1, usize::MAX, &mut out);
                out.push(')');
            }
            None => self.write_node(0, usize::MAX, &mut out),
        }
        out.push(';');
        out
    }

    fn write_node(&self, v: usize, parent: usize, out: &mut String) {
        if let Some(t) = self.taxon[v] {
            out.push_str(&quote_label(self.universe.name(t)));
            return;
        }
        out.push('(');
        let mut first = true;
        for &w in &self.adj[v] {
            if w == parent {
                continue;
            }
            if !first {
                out.push(',');
            }
            first = false;
            self.write_node(w, v, out);
        }
        out.push(')');
    }
}

fn quote_label(label: &str) -> String {
    if label
        .chars()
        .any(|c| c.is_whitespace() || DELIMS.contains(&c))
    {
        format!("'{}'", label.replace('\'', "''"))
    } else {
        label.to_string()
    }
}

impl fmt::Debug for PhyloTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_newick())
    }
}
