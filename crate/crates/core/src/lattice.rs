//! Finite distributive lattices as lattices of down-sets.
//!
//! Every element is stored as the down-set (ideal) of the base poset it
//! corresponds to. Elements are kept in a canonical global order: by rank,
//! then by the lexicographic order of the ascending member lists. Element
//! `0` is the bottom and the last element is the top.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::set::ElemSet;

/// Default cap on the number of lattice elements.
pub const DEFAULT_LATTICE_CAP: usize = 1_000_000;

#[derive(Clone, Debug)]
pub struct DistLattice {
    base: Poset,
    ideals: Vec<ElemSet>,
    index: HashMap<ElemSet, usize>,
    rank_start: Vec<usize>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
}

/// A cover pair whose two ranks each hold a single element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CutEdge {
    pub lower: usize,
    pub upper: usize,
}

/// An interval `[lower, upper]` of a parent lattice, rebuilt as a lattice in
/// its own right over the convex subposet `upper \ lower`.
#[derive(Clone, Debug)]
pub struct Block {
    pub lattice: DistLattice,
    /// Bottom of the interval, as an element of the parent.
    pub lower: usize,
    /// Top of the interval, as an element of the parent.
    pub upper: usize,
    base_map: Vec<usize>,
}

impl Block {
    /// The parent element corresponding to element `sub` of the block.
    pub fn lift(&self, parent: &DistLattice, sub: usize) -> usize {
        let extra: ElemSet = self.lattice.ideal(sub).iter().map(|k| self.base_map[k]).collect();
        parent
            .index_of(parent.ideal(self.lower).union(extra))
            .expect("block elements lie in the parent")
    }

    /// Base-poset indices (in the parent) of the block's join-irreducibles.
    pub fn base_elements(&self) -> &[usize] {
        &self.base_map
    }
}

/// The split of a lattice at all of its cut edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub cut_edges: Vec<CutEdge>,
    /// Intervals between consecutive cut edges, bottom to top, including
    /// single-point segments.
    pub segments: Vec<(usize, usize)>,
}

impl DistLattice {
    /// Lattice of down-sets of `base`, capped at [`DEFAULT_LATTICE_CAP`].
    pub fn birkhoff(base: &Poset) -> Result<Self> {
        Self::birkhoff_with_cap(base, DEFAULT_LATTICE_CAP)
    }

    pub fn birkhoff_with_cap(base: &Poset, cap: usize) -> Result<Self> {
        let n = base.len();
        let mut ideals = vec![ElemSet::EMPTY];
        let mut rank_start = vec![0, 1];
        let mut level = vec![ElemSet::EMPTY];
        for _ in 0..n {
            let mut next: HashSet<ElemSet> = HashSet::new();
            for &ideal in &level {
                for p in base.addable(ideal).iter() {
                    next.insert(ideal.with(p));
                }
            }
            if ideals.len() + next.len() > cap {
                return Err(Error::LatticeTooLarge { cap });
            }
            let mut next: Vec<ElemSet> = next.into_iter().collect();
            next.sort_unstable_by(|a, b| a.cmp_lex(*b));
            ideals.extend_from_slice(&next);
            rank_start.push(ideals.len());
            level = next;
        }

        let index: HashMap<ElemSet, usize> = ideals.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut up = vec![Vec::new(); ideals.len()];
        let mut down = vec![Vec::new(); ideals.len()];
        for (i, &ideal) in ideals.iter().enumerate() {
            for p in base.addable(ideal).iter() {
                let j = index[&ideal.with(p)];
                up[i].push(j);
                down[j].push(i);
            }
            up[i].sort_unstable();
        }
        for d in &mut down {
            d.sort_unstable();
        }
        Ok(DistLattice { base: base.clone(), ideals, index, rank_start, up, down })
    }

    /// The poset of join-irreducibles this lattice was built from.
    pub fn base(&self) -> &Poset {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.ideals.len() - 1
    }

    /// Rank of the top element, `|P|`.
    pub fn height(&self) -> usize {
        self.base.len()
    }

    pub fn ideal(&self, i: usize) -> ElemSet {
        self.ideals[i]
    }

    pub fn index_of(&self, ideal: ElemSet) -> Option<usize> {
        self.index.get(&ideal).copied()
    }

    pub fn rank(&self, i: usize) -> usize {
        self.ideals[i].len()
    }

    /// Indices of the elements of rank `r`.
    pub fn rank_range(&self, r: usize) -> Range<usize> {
        self.rank_start[r]..self.rank_start[r + 1]
    }

    /// Elements covering `i`, ascending.
    pub fn up(&self, i: usize) -> &[usize] {
        &self.up[i]
    }

    /// Elements covered by `i`, ascending.
    pub fn down(&self, i: usize) -> &[usize] {
        &self.down[i]
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.ideals[a].is_subset(self.ideals[b])
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.le(a, b) || self.le(b, a)
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.index[&self.ideals[a].union(self.ideals[b])]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.index[&self.ideals[a].intersection(self.ideals[b])]
    }

    /// Hasse edges `(lower, upper)` in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.up.iter().enumerate().flat_map(|(i, ups)| ups.iter().map(move |&j| (i, j)))
    }

    /// Unordered incomparable pairs `(a, b)` with `a < b` as indices.
    pub fn incomparable_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            for b in a + 1..self.len() {
                if !self.comparable(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Element name built from base names, e.g. `{p1,p3}`.
    pub fn element_name(&self, i: usize) -> String {
        self.base.format_set(self.ideals[i])
    }

    /// Index-derived key: `0_2` for the ideal `{0, 2}`, `bot` for the bottom.
    pub fn element_key(&self, i: usize) -> String {
        let ideal = self.ideals[i];
        if ideal.is_empty() {
            return "bot".to_string();
        }
        ideal.iter().map(|k| k.to_string()).collect::<Vec<_>>().join("_")
    }

    /// The induced subposet on the elements covering exactly one element.
    /// Elements are named after the base element they generate.
    pub fn join_irreducibles(&self) -> Poset {
        let irr: Vec<usize> = (0..self.len()).filter(|&i| self.down[i].len() == 1).collect();
        let names = irr
            .iter()
            .map(|&i| {
                let gen = self.ideals[i].difference(self.ideals[self.down[i][0]]);
                self.base.name(gen.first().expect("cover adds one element")).to_string()
            })
            .collect();
        let below = irr
            .iter()
            .map(|&i| {
                irr.iter()
                    .enumerate()
                    .filter(|&(_, &j)| j != i && self.le(j, i))
                    .map(|(k, _)| k)
                    .collect()
            })
            .collect();
        Poset::from_down_sets(names, below)
    }

    /// Cut edges in increasing rank order.
    pub fn cut_edges(&self) -> Vec<CutEdge> {
        (0..self.height())
            .filter(|&r| self.rank_range(r).len() == 1 && self.rank_range(r + 1).len() == 1)
            .map(|r| CutEdge { lower: self.rank_start[r], upper: self.rank_start[r + 1] })
            .collect()
    }

    pub fn is_simple(&self) -> bool {
        self.cut_edges().is_empty()
    }

    pub fn decomposition(&self) -> Decomposition {
        let cut_edges = self.cut_edges();
        let mut segments = Vec::with_capacity(cut_edges.len() + 1);
        let mut start = self.bottom();
        for e in &cut_edges {
            segments.push((start, e.lower));
            start = e.upper;
        }
        segments.push((start, self.top()));
        Decomposition { cut_edges, segments }
    }

    /// Non-degenerate simple blocks, bottom to top. Points and single edges
    /// are dropped; they contribute nothing to the regularity.
    pub fn simple_blocks(&self) -> Vec<Block> {
        self.decomposition()
            .segments
            .into_iter()
            .filter(|&(lo, hi)| self.rank(hi) - self.rank(lo) >= 2)
            .map(|(lo, hi)| self.interval_block(lo, hi).expect("segment endpoints are comparable"))
            .collect()
    }

    /// The interval `[x, y]` as a lattice over its own join-irreducibles.
    pub fn interval(&self, x: usize, y: usize) -> Result<DistLattice> {
        Ok(self.interval_block(x, y)?.lattice)
    }

    pub fn interval_block(&self, x: usize, y: usize) -> Result<Block> {
        if !self.le(x, y) {
            return Err(Error::IncomparableEndpoints);
        }
        let diff = self.ideals[y].difference(self.ideals[x]);
        if diff.is_empty() {
            // A single point: the lattice of down-sets of nothing.
            let lattice = DistLattice {
                base: Poset::from_down_sets(Vec::new(), Vec::new()),
                ideals: vec![ElemSet::EMPTY],
                index: HashMap::from([(ElemSet::EMPTY, 0)]),
                rank_start: vec![0, 1],
                up: vec![Vec::new()],
                down: vec![Vec::new()],
            };
            return Ok(Block { lattice, lower: x, upper: y, base_map: Vec::new() });
        }
        let (sub, base_map) = self.base.induced(diff);
        let lattice = DistLattice::birkhoff_with_cap(&sub, usize::MAX)?;
        Ok(Block { lattice, lower: x, upper: y, base_map })
    }

    /// Text listing: one line per element (index and sorted member indices),
    /// then the cover pairs.
    pub fn canonical_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "elements {}", self.len()).unwrap();
        for (i, ideal) in self.ideals.iter().enumerate() {
            let members: Vec<String> = ideal.iter().map(|k| k.to_string()).collect();
            writeln!(out, "{} {{{}}}", i, members.join(",")).unwrap();
        }
        writeln!(out, "covers {}", self.edges().count()).unwrap();
        for (a, b) in self.edges() {
            writeln!(out, "{a} {b}").unwrap();
        }
        out
    }

    /// Same shape: equal element counts and identical canonical listings
    /// after mapping both onto index sets.
    pub fn same_shape(&self, other: &DistLattice) -> bool {
        self.canonical_text() == other.canonical_text()
    }
}
