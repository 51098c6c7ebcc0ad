//! Planar distributive lattices: embedding into the quarter plane, the
//! "most upper" chain, the column/row edge-labeling built from it, and the
//! two combinatorial routes to the regularity (maximal descent count of a
//! maximal chain, maximal number of squares in a cyclic sublattice).
//!
//! A distributive lattice is planar exactly when its join-irreducibles split
//! into two chains `C1`, `C2`; the element with ideal `I` then sits at
//! `(|I ∩ C1|, |I ∩ C2|)`. Horizontal edges increase the first coordinate,
//! vertical edges the second.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::DistLattice;
use crate::poset::{DescentSet, Poset};
use crate::set::ElemSet;

pub type Coord = (usize, usize);

/// Partition search state `(position, last horizontal, last vertical)`.
type Memo = HashMap<(usize, Option<usize>, Option<usize>), Option<usize>>;

#[derive(Clone, Debug)]
pub struct PlanarEmbedding {
    coords: Vec<Coord>,
    by_coord: HashMap<Coord, usize>,
    horizontal: Vec<usize>,
    vertical: Vec<usize>,
}

#[derive(Clone, Debug)]
pub enum Planarity {
    Planar(PlanarEmbedding),
    /// Three pairwise incomparable join-irreducibles (base indices).
    NotPlanar { witness: ElemSet },
}

impl Planarity {
    pub fn embedding(&self) -> Option<&PlanarEmbedding> {
        match self {
            Planarity::Planar(e) => Some(e),
            Planarity::NotPlanar { .. } => None,
        }
    }

    pub fn is_planar(&self) -> bool {
        matches!(self, Planarity::Planar(_))
    }
}

impl PlanarEmbedding {
    pub fn coord(&self, x: usize) -> Coord {
        self.coords[x]
    }

    pub fn at(&self, i: usize, j: usize) -> Option<usize> {
        self.by_coord.get(&(i, j)).copied()
    }

    /// Base elements assigned to the horizontal chain, bottom to top.
    pub fn horizontal_chain(&self) -> &[usize] {
        &self.horizontal
    }

    /// Base elements assigned to the vertical chain, bottom to top.
    pub fn vertical_chain(&self) -> &[usize] {
        &self.vertical
    }

    /// `(element-name, i, j)` triples in element order.
    pub fn triples(&self, l: &DistLattice) -> Vec<(String, usize, usize)> {
        (0..l.len())
            .map(|x| {
                let (i, j) = self.coords[x];
                (l.element_name(x), i, j)
            })
            .collect()
    }

    /// Checks injectivity, the origin, unit-step covers, rank = i + j and
    /// `x <= y iff coord(x) <= coord(y)`. Rank = i + j with unit-step covers
    /// makes every interval saturated-chain connected.
    pub fn validate(&self, l: &DistLattice) -> Result<()> {
        let bad = |msg: String| Err(Error::CorruptEmbedding(msg));
        if self.coords.len() != l.len() || self.by_coord.len() != l.len() {
            return bad("embedding is not injective".into());
        }
        if self.coords[l.bottom()] != (0, 0) {
            return bad("bottom is not at the origin".into());
        }
        for x in 0..l.len() {
            let (i, j) = self.coords[x];
            if i + j != l.rank(x) {
                return bad(format!("element {x} at ({i},{j}) has rank {}", l.rank(x)));
            }
        }
        for (a, b) in l.edges() {
            let (ai, aj) = self.coords[a];
            let (bi, bj) = self.coords[b];
            if !((bi == ai + 1 && bj == aj) || (bi == ai && bj == aj + 1)) {
                return bad(format!("edge {a}->{b} is not a unit step"));
            }
        }
        for a in 0..l.len() {
            for b in 0..l.len() {
                let (ai, aj) = self.coords[a];
                let (bi, bj) = self.coords[b];
                if l.le(a, b) != (ai <= bi && aj <= bj) {
                    return bad(format!("order mismatch between {a} and {b}"));
                }
            }
        }
        Ok(())
    }
}

/// Embeds `l` into the quarter plane if its join-irreducibles have width at
/// most two.
///
/// Among all splittings into two chains the one with the longest horizontal
/// chain is used; further ties go to putting earlier elements (in canonical
/// extension order) on the horizontal chain.
pub fn try_embed(l: &DistLattice) -> Planarity {
    let base = l.base();
    let Some((horizontal, vertical)) = two_chain_partition(base) else {
        let witness = base.max_antichain().iter().take(3).collect();
        return Planarity::NotPlanar { witness };
    };
    let h_set: ElemSet = horizontal.iter().copied().collect();
    let v_set: ElemSet = vertical.iter().copied().collect();
    let coords: Vec<Coord> = (0..l.len())
        .map(|x| {
            let ideal = l.ideal(x);
            (ideal.intersection(h_set).len(), ideal.intersection(v_set).len())
        })
        .collect();
    let by_coord = coords.iter().enumerate().map(|(x, &c)| (c, x)).collect();
    let emb = PlanarEmbedding { coords, by_coord, horizontal, vertical };
    debug_assert!(emb.validate(l).is_ok());
    Planarity::Planar(emb)
}

/// Exact two-chain partition by dynamic programming over the canonical
/// linear extension. State: last element placed on each chain.
fn two_chain_partition(base: &Poset) -> Option<(Vec<usize>, Vec<usize>)> {
    if base.is_empty() {
        return Some((Vec::new(), Vec::new()));
    }
    let order = base.canonical_extension().as_slice().to_vec();
    let mut memo: HashMap<(usize, Option<usize>, Option<usize>), Option<usize>> = HashMap::new();

    fn best(
        base: &Poset,
        order: &[usize],
        k: usize,
        last_h: Option<usize>,
        last_v: Option<usize>,
        memo: &mut Memo,
    ) -> Option<usize> {
        if k == order.len() {
            return Some(0);
        }
        if let Some(&v) = memo.get(&(k, last_h, last_v)) {
            return v;
        }
        let e = order[k];
        let fits = |last: Option<usize>| last.is_none_or(|a| base.lt(a, e));
        let on_h = if fits(last_h) {
            best(base, order, k + 1, Some(e), last_v, memo).map(|v| v + 1)
        } else {
            None
        };
        let on_v = if fits(last_v) {
            best(base, order, k + 1, last_h, Some(e), memo)
        } else {
            None
        };
        let result = on_h.max(on_v);
        memo.insert((k, last_h, last_v), result);
        result
    }

    let target = best(base, &order, 0, None, None, &mut memo)?;
    let (mut horizontal, mut vertical) = (Vec::new(), Vec::new());
    let (mut last_h, mut last_v) = (None, None);
    let mut remaining = target;
    for (k, &e) in order.iter().enumerate() {
        let h_ok = last_h.is_none_or(|a| base.lt(a, e));
        let take_h = h_ok
            && remaining > 0
            && best(base, &order, k + 1, Some(e), last_v, &mut memo) == Some(remaining - 1);
        if take_h {
            horizontal.push(e);
            last_h = Some(e);
            remaining -= 1;
        } else {
            vertical.push(e);
            last_v = Some(e);
        }
    }
    Some((horizontal, vertical))
}

/// A saturated chain from the bottom to the top of a lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MaximalChain(Vec<usize>);

impl MaximalChain {
    pub fn new(l: &DistLattice, vertices: Vec<usize>) -> Result<Self> {
        if vertices.first() != Some(&l.bottom()) || vertices.last() != Some(&l.top()) {
            return Err(Error::InvalidChain("must run from bottom to top".into()));
        }
        for w in vertices.windows(2) {
            if !l.up(w[0]).contains(&w[1]) {
                return Err(Error::InvalidChain(format!("{} -> {} is not a cover", w[0], w[1])));
            }
        }
        Ok(MaximalChain(vertices))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn names(&self, l: &DistLattice) -> Vec<String> {
        self.0.iter().map(|&x| l.element_name(x)).collect()
    }
}

/// The chain that climbs each column as far as possible before stepping
/// right.
pub fn upper_chain(l: &DistLattice, emb: &PlanarEmbedding) -> MaximalChain {
    let mut chain = vec![l.bottom()];
    let mut cur = l.bottom();
    while cur != l.top() {
        let (i, j) = emb.coord(cur);
        cur = emb
            .at(i, j + 1)
            .or_else(|| emb.at(i + 1, j))
            .expect("a non-top element has an upper cover");
        chain.push(cur);
    }
    MaximalChain(chain)
}

/// Labels on Hasse edges, keyed by `(lower, upper)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EdgeLabeling {
    labels: HashMap<(usize, usize), usize>,
}

impl EdgeLabeling {
    pub fn from_fn(l: &DistLattice, mut f: impl FnMut(usize, usize) -> usize) -> Self {
        EdgeLabeling { labels: l.edges().map(|(a, b)| ((a, b), f(a, b))).collect() }
    }

    pub fn label(&self, a: usize, b: usize) -> Option<usize> {
        self.labels.get(&(a, b)).copied()
    }

    fn get(&self, a: usize, b: usize) -> usize {
        self.labels[&(a, b)]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Sequence of labels along a chain.
    pub fn along(&self, vertices: &[usize]) -> Vec<usize> {
        vertices.windows(2).map(|w| self.get(w[0], w[1])).collect()
    }
}

/// The edge-labeling induced by the upper chain `c0`: its `t`-th edge gets
/// label `t + 1`, and every other edge copies the label of the `c0` edge in
/// the same column (horizontal edges) or the same row (vertical edges).
pub fn build_labeling(l: &DistLattice, emb: &PlanarEmbedding) -> Result<EdgeLabeling> {
    let c0 = upper_chain(l, emb);
    let mut column: HashMap<usize, usize> = HashMap::new();
    let mut row: HashMap<usize, usize> = HashMap::new();
    for (t, w) in c0.vertices().windows(2).enumerate() {
        let (i0, j0) = emb.coord(w[0]);
        let (i1, _) = emb.coord(w[1]);
        if i1 == i0 + 1 {
            column.insert(i0, t + 1);
        } else {
            row.insert(j0, t + 1);
        }
    }
    let mut labels = HashMap::new();
    for (a, b) in l.edges() {
        let (ai, aj) = emb.coord(a);
        let (bi, _) = emb.coord(b);
        let label = if bi == ai + 1 { column.get(&ai) } else { row.get(&aj) };
        let label = label.ok_or_else(|| {
            Error::CorruptEmbedding(format!("edge {a}->{b} has no parallel edge on the upper chain"))
        })?;
        labels.insert((a, b), *label);
    }
    Ok(EdgeLabeling { labels })
}

/// Positions `i` (1-based) where the label strictly drops at `x_i`.
pub fn chain_descents(vertices: &[usize], lam: &EdgeLabeling) -> DescentSet {
    let labels = lam.along(vertices);
    DescentSet::from_positions((1..labels.len()).filter(|&i| labels[i - 1] > labels[i]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Corner {
    /// Vertical step in, horizontal step out.
    Upper,
    /// Horizontal step in, vertical step out.
    Lower,
    Straight,
}

/// Classifies interior vertex `t` of a saturated chain.
pub fn classify_corner(vertices: &[usize], t: usize, emb: &PlanarEmbedding) -> Result<Corner> {
    let max = vertices.len().saturating_sub(2);
    if t == 0 || t > max {
        return Err(Error::PositionOutOfRange { position: t, max });
    }
    let (pi, pj) = emb.coord(vertices[t - 1]);
    let (ci, cj) = emb.coord(vertices[t]);
    let (ni, _) = emb.coord(vertices[t + 1]);
    let in_vertical = cj == pj + 1 && ci == pi;
    let out_horizontal = ni == ci + 1;
    Ok(match (in_vertical, out_horizontal) {
        (true, true) => Corner::Upper,
        (false, false) => Corner::Lower,
        _ => Corner::Straight,
    })
}

/// Result of [`straighten`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Straightened {
    pub vertices: Vec<usize>,
    pub replacements: usize,
}

/// Repeatedly flips the first descent (always a lower corner `x_t`) to the
/// opposite corner `(i_{t-1}, j_{t+1})` until no descent is left.
///
/// Works on any saturated chain; the endpoints never move. Every flip
/// raises the sum of the second coordinates, which bounds the number of
/// rounds.
pub fn straighten(vertices: &[usize], lam: &EdgeLabeling, emb: &PlanarEmbedding) -> Result<Straightened> {
    let mut chain = vertices.to_vec();
    let mut replacements = 0;
    let limit = chain.len() * chain.len() + 1;
    loop {
        let descents = chain_descents(&chain, lam);
        let Some(t) = descents.positions().next() else {
            return Ok(Straightened { vertices: chain, replacements });
        };
        if classify_corner(&chain, t, emb)? != Corner::Lower {
            return Err(Error::CorruptEmbedding(format!("descent at position {t} is not a lower corner")));
        }
        let (pi, _) = emb.coord(chain[t - 1]);
        let (_, nj) = emb.coord(chain[t + 1]);
        chain[t] = emb
            .at(pi, nj)
            .ok_or_else(|| Error::CorruptEmbedding(format!("corner replacement ({pi},{nj}) is missing")))?;
        replacements += 1;
        if replacements > limit {
            return Err(Error::CorruptEmbedding("straightening does not terminate".into()));
        }
    }
}

/// Why an interval breaks the EL property.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElFailureKind {
    MissingLabel,
    NoIncreasingChain,
    SeveralIncreasingChains,
    /// The increasing chain is not the unique lexicographically first one.
    NotLexFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ElFailure {
    pub lower: usize,
    pub upper: usize,
    pub kind: ElFailureKind,
}

/// Verdict of an EL check: `Ok` or the first failing interval, ordered by
/// `(lower, upper)`.
pub type ElVerdict = std::result::Result<(), ElFailure>;

/// Checks the EL property on every interval `[x, y]` with `x < y`.
///
/// For each upper endpoint `y` a backward pass computes, for every `z <= y`,
/// the lexicographically least label sequence from `z` to `y` together with
/// the number of chains realizing it, and the number of weakly increasing
/// chains grouped by first label. Upper endpoints are independent and run
/// in parallel.
pub fn verify_el(l: &DistLattice, lam: &EdgeLabeling) -> ElVerdict {
    if let Some((a, b)) = l.edges().find(|&(a, b)| lam.label(a, b).is_none()) {
        return Err(ElFailure { lower: a, upper: b, kind: ElFailureKind::MissingLabel });
    }
    let max_label = l.edges().map(|(a, b)| lam.get(a, b)).max().unwrap_or(0);
    let failures: Vec<ElFailure> = (0..l.len())
        .into_par_iter()
        .filter_map(|y| check_upper_endpoint(l, lam, y, max_label))
        .collect();
    match failures.into_iter().min_by_key(|f| (f.lower, f.upper)) {
        Some(f) => Err(f),
        None => Ok(()),
    }
}

fn check_upper_endpoint(l: &DistLattice, lam: &EdgeLabeling, y: usize, max_label: usize) -> Option<ElFailure> {
    let mut lexmin: HashMap<usize, (Vec<usize>, u64)> = HashMap::new();
    let mut increasing: HashMap<usize, Vec<u64>> = HashMap::new();
    lexmin.insert(y, (Vec::new(), 1));
    let mut first_failure = None;

    // Indices are rank-sorted, so a descending sweep sees covers first.
    for z in (0..y).rev() {
        if !l.le(z, y) {
            continue;
        }
        let mut best: Option<(Vec<usize>, u64)> = None;
        let mut inc = vec![0u64; max_label + 2];
        for &w in l.up(z) {
            if !l.le(w, y) {
                continue;
            }
            let a = lam.get(z, w);
            let (tail, count) = &lexmin[&w];
            let mut seq = Vec::with_capacity(tail.len() + 1);
            seq.push(a);
            seq.extend_from_slice(tail);
            match &mut best {
                Some((s, c)) if *s == seq => *c = c.saturating_add(*count),
                Some((s, _)) if *s < seq => {}
                _ => best = Some((seq, *count)),
            }
            let continuing = if w == y {
                1
            } else {
                increasing[&w][a..].iter().fold(0u64, |acc, &c| acc.saturating_add(c))
            };
            inc[a] = inc[a].saturating_add(continuing);
        }
        let (seq, count) = best.expect("z < y has a cover inside [z, y]");
        let total_inc = inc.iter().fold(0u64, |acc, &c| acc.saturating_add(c));
        let kind = if total_inc == 0 {
            Some(ElFailureKind::NoIncreasingChain)
        } else if total_inc > 1 {
            Some(ElFailureKind::SeveralIncreasingChains)
        } else if count != 1 || seq.windows(2).any(|w| w[0] > w[1]) {
            Some(ElFailureKind::NotLexFirst)
        } else {
            None
        };
        if let Some(kind) = kind {
            first_failure = Some(ElFailure { lower: z, upper: y, kind });
        }
        lexmin.insert(z, (seq, count));
        increasing.insert(z, inc);
    }
    first_failure
}

/// All saturated chains from `x` to `y`, by depth-first search. Errors once
/// more than `cap` chains have been produced.
pub fn saturated_chains(l: &DistLattice, x: usize, y: usize, cap: u64) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    if !l.le(x, y) {
        return Ok(out);
    }
    let mut stack = vec![x];
    fn walk(l: &DistLattice, y: usize, cap: u64, stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) -> Result<()> {
        let cur = *stack.last().unwrap();
        if cur == y {
            if out.len() as u64 >= cap {
                return Err(Error::EnumerationCap { cap });
            }
            out.push(stack.clone());
            return Ok(());
        }
        for &w in l.up(cur) {
            if l.le(w, y) {
                stack.push(w);
                walk(l, y, cap, stack, out)?;
                stack.pop();
            }
        }
        Ok(())
    }
    walk(l, y, cap, &mut stack, &mut out)?;
    Ok(out)
}

/// Reference EL check by exhaustive enumeration of the chains of every
/// interval. Only for small lattices.
pub fn verify_el_exhaustive(l: &DistLattice, lam: &EdgeLabeling, cap: u64) -> Result<ElVerdict> {
    for x in 0..l.len() {
        for y in x + 1..l.len() {
            if !l.le(x, y) {
                continue;
            }
            let chains = saturated_chains(l, x, y, cap)?;
            let mut labelled = Vec::with_capacity(chains.len());
            for c in &chains {
                match c.windows(2).map(|w| lam.label(w[0], w[1])).collect::<Option<Vec<_>>>() {
                    Some(seq) => labelled.push(seq),
                    None => return Ok(Err(ElFailure { lower: x, upper: y, kind: ElFailureKind::MissingLabel })),
                }
            }
            let increasing: Vec<&Vec<usize>> =
                labelled.iter().filter(|s| s.windows(2).all(|w| w[0] <= w[1])).collect();
            let fail = |kind| Ok(Err(ElFailure { lower: x, upper: y, kind }));
            match increasing.len() {
                0 => return fail(ElFailureKind::NoIncreasingChain),
                1 => {}
                _ => return fail(ElFailureKind::SeveralIncreasingChains),
            }
            let inc = increasing[0];
            let strictly_first = labelled.iter().filter(|s| *s != inc).all(|s| s > inc)
                && labelled.iter().filter(|s| *s == inc).count() == 1;
            if !strictly_first {
                return fail(ElFailureKind::NotLexFirst);
            }
        }
    }
    Ok(Ok(()))
}

/// Maximum number of descents of a maximal chain, with the lexicographically
/// smallest (by element index) chain attaining it.
///
/// Dynamic programming over Hasse edges: for each edge, the best number of
/// descents achievable strictly after it on the way to the top.
pub fn max_descent_cardinality(l: &DistLattice, lam: &EdgeLabeling) -> (usize, MaximalChain) {
    if l.len() == 1 {
        return (0, MaximalChain(vec![l.bottom()]));
    }
    let top = l.top();
    let mut suffix: HashMap<(usize, usize), usize> = HashMap::new();
    for v in (0..l.len()).rev() {
        for &u in l.down(v) {
            let a = lam.get(u, v);
            let best = if v == top {
                0
            } else {
                l.up(v)
                    .iter()
                    .map(|&w| usize::from(a > lam.get(v, w)) + suffix[&(v, w)])
                    .max()
                    .expect("non-top element has a cover")
            };
            suffix.insert((u, v), best);
        }
    }
    let bottom = l.bottom();
    let total = l.up(bottom).iter().map(|&w| suffix[&(bottom, w)]).max().unwrap();

    let mut chain = vec![bottom];
    let mut prev = bottom;
    let mut cur = *l.up(bottom).iter().find(|&&w| suffix[&(bottom, w)] == total).unwrap();
    let mut remaining = total;
    chain.push(cur);
    while cur != top {
        let a = lam.get(prev, cur);
        let next = *l
            .up(cur)
            .iter()
            .find(|&&w| usize::from(a > lam.get(cur, w)) + suffix[&(cur, w)] == remaining)
            .unwrap();
        remaining -= usize::from(a > lam.get(cur, next));
        prev = cur;
        cur = next;
        chain.push(cur);
    }
    (total, MaximalChain(chain))
}

/// Four elements `a -> b -> d`, `a -> c -> d` with `b`, `c` incomparable.
/// In an embedding `b` is the right neighbour and `c` the upper neighbour
/// of `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Square {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl Square {
    pub fn bottom(&self) -> usize {
        self.a
    }

    pub fn top(&self) -> usize {
        self.d
    }

    pub fn is_valid(&self, l: &DistLattice) -> bool {
        l.up(self.a).contains(&self.b)
            && l.up(self.a).contains(&self.c)
            && l.up(self.b).contains(&self.d)
            && l.up(self.c).contains(&self.d)
            && !l.comparable(self.b, self.c)
    }
}

/// Squares stacked corner to corner, joined by saturated connector chains.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CyclicSublattice {
    pub squares: Vec<Square>,
    /// `connectors[k]` runs from the top of square `k` to the bottom of
    /// square `k + 1` (a single vertex when they coincide).
    pub connectors: Vec<Vec<usize>>,
}

impl CyclicSublattice {
    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }

    /// All elements, ascending.
    pub fn elements(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .squares
            .iter()
            .flat_map(|s| [s.a, s.b, s.c, s.d])
            .chain(self.connectors.iter().flatten().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Squares valid, connectors saturated and correctly attached, and the
    /// union closed under join and meet.
    pub fn validate(&self, l: &DistLattice) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidChain(m.to_string()));
        if self.connectors.len() + 1 != self.squares.len().max(1) {
            return bad("connector count does not match square count");
        }
        if self.squares.iter().any(|s| !s.is_valid(l)) {
            return bad("invalid square");
        }
        for (k, conn) in self.connectors.iter().enumerate() {
            if conn.first() != Some(&self.squares[k].top()) || conn.last() != Some(&self.squares[k + 1].bottom()) {
                return bad("connector endpoints do not match squares");
            }
            if conn.windows(2).any(|w| !l.up(w[0]).contains(&w[1])) {
                return bad("connector is not saturated");
            }
        }
        let elems = self.elements();
        for &x in &elems {
            for &y in &elems {
                if elems.binary_search(&l.join(x, y)).is_err() || elems.binary_search(&l.meet(x, y)).is_err() {
                    return bad("not a sublattice");
                }
            }
        }
        Ok(())
    }
}

/// All squares of an embedded lattice, by bottom element.
pub fn squares(l: &DistLattice, emb: &PlanarEmbedding) -> Vec<Square> {
    (0..l.len())
        .filter_map(|a| {
            let (i, j) = emb.coord(a);
            Some(Square { a, b: emb.at(i + 1, j)?, c: emb.at(i, j + 1)?, d: emb.at(i + 1, j + 1)? })
        })
        .collect()
}

/// Saturated chain from `from` up to `to`, stepping vertically whenever the
/// target allows it.
pub fn connector(emb: &PlanarEmbedding, from: usize, to: usize) -> Option<Vec<usize>> {
    let (ti, tj) = emb.coord(to);
    let mut cur = from;
    let mut path = vec![from];
    while cur != to {
        let (i, j) = emb.coord(cur);
        if i > ti || j > tj {
            return None;
        }
        cur = (j < tj).then(|| emb.at(i, j + 1)).flatten().or_else(|| (i < ti).then(|| emb.at(i + 1, j)).flatten())?;
        path.push(cur);
    }
    Some(path)
}

/// Longest sequence of squares in which each square starts above the end of
/// the previous one, with its witness.
pub fn max_cyclic_squares(l: &DistLattice, emb: &PlanarEmbedding) -> Result<(usize, CyclicSublattice)> {
    let sq = squares(l, emb);
    if sq.is_empty() {
        return Ok((0, CyclicSublattice::default()));
    }
    let below = |s: &Square, t: &Square| {
        let (ti, tj) = emb.coord(s.top());
        let (bi, bj) = emb.coord(t.bottom());
        ti <= bi && tj <= bj
    };
    let mut best = vec![1usize; sq.len()];
    let mut pred: Vec<Option<usize>> = vec![None; sq.len()];
    for k in 0..sq.len() {
        for p in 0..k {
            if below(&sq[p], &sq[k]) && best[p] + 1 > best[k] {
                best[k] = best[p] + 1;
                pred[k] = Some(p);
            }
        }
    }
    let max = *best.iter().max().unwrap();
    let mut k = best.iter().position(|&b| b == max).unwrap();
    let mut picked = vec![sq[k]];
    while let Some(p) = pred[k] {
        picked.push(sq[p]);
        k = p;
    }
    picked.reverse();
    let connectors = picked
        .windows(2)
        .map(|w| {
            connector(emb, w[0].top(), w[1].bottom()).ok_or_else(|| {
                Error::CorruptEmbedding("comparable squares without a saturated connector".into())
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((max, CyclicSublattice { squares: picked, connectors }))
}

/// The cyclic sublattice spanned by a chain and the opposite corners of its
/// descents. Every descent must sit at a lower corner whose opposite corner
/// lies in `l`.
pub fn cyclic_from_chain(
    l: &DistLattice,
    vertices: &[usize],
    lam: &EdgeLabeling,
    emb: &PlanarEmbedding,
) -> Result<CyclicSublattice> {
    let mut squares_found = Vec::new();
    for t in chain_descents(vertices, lam).positions() {
        if classify_corner(vertices, t, emb)? != Corner::Lower {
            return Err(Error::CorruptEmbedding(format!("descent at {t} is not a lower corner")));
        }
        let (pi, _) = emb.coord(vertices[t - 1]);
        let (_, nj) = emb.coord(vertices[t + 1]);
        let opposite = emb
            .at(pi, nj)
            .ok_or_else(|| Error::CorruptEmbedding(format!("opposite corner of {t} is missing")))?;
        squares_found.push((t, Square { a: vertices[t - 1], b: vertices[t], c: opposite, d: vertices[t + 1] }));
    }
    // Descents are never adjacent, so consecutive squares share at least the
    // vertex between them.
    let connectors = squares_found
        .windows(2)
        .map(|w| vertices[w[0].0 + 1..w[1].0].to_vec())
        .collect();
    let out = CyclicSublattice { squares: squares_found.into_iter().map(|(_, s)| s).collect(), connectors };
    out.validate(l)?;
    Ok(out)
}
