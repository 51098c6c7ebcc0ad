//! Finite posets, linear extensions, descent sets and width.
//!
//! Elements are dense indices `0..n`; the user-facing names from the input
//! text are kept alongside. The order is stored as one strict down-set and
//! one strict up-set bitmask per element, i.e. the rows and columns of the
//! comparability table.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::set::{ElemSet, MAX_ELEMENTS};

#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    below: Vec<ElemSet>,
    above: Vec<ElemSet>,
    covers: Vec<(usize, usize)>,
}

impl Poset {
    /// Builds the poset generated by `relations` (pairs `(a, b)` meaning
    /// `a < b`) on the named ground set. The order is the reflexive-transitive
    /// closure; cycles are rejected.
    pub fn new(names: Vec<String>, relations: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::EmptyPoset);
        }
        if n > MAX_ELEMENTS {
            return Err(Error::TooManyElements(n));
        }
        let mut preds = vec![ElemSet::EMPTY; n];
        let mut indegree = vec![0usize; n];
        let mut succs = vec![Vec::new(); n];
        for &(a, b) in relations {
            if a == b {
                return Err(Error::Cycle(names[a].clone()));
            }
            if !preds[b].contains(a) {
                preds[b].insert(a);
                indegree[b] += 1;
                succs[a].push(b);
            }
        }

        // Kahn's algorithm; leftovers lie on a cycle.
        let mut order = Vec::with_capacity(n);
        let mut ready: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).rev().collect();
        while let Some(v) = ready.pop() {
            order.push(v);
            for &w in &succs[v] {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    ready.push(w);
                }
            }
        }
        if order.len() < n {
            let stuck = (0..n).find(|&v| indegree[v] > 0).unwrap();
            return Err(Error::Cycle(names[stuck].clone()));
        }

        let mut below = vec![ElemSet::EMPTY; n];
        for &v in &order {
            let mut acc = ElemSet::EMPTY;
            for u in preds[v].iter() {
                acc = acc.union(below[u]).with(u);
            }
            below[v] = acc;
        }
        Ok(Self::from_down_sets(names, below))
    }

    /// Builds a poset from already transitively closed strict down-sets.
    pub(crate) fn from_down_sets(names: Vec<String>, below: Vec<ElemSet>) -> Self {
        let n = names.len();
        let mut above = vec![ElemSet::EMPTY; n];
        for (v, b) in below.iter().enumerate() {
            for u in b.iter() {
                above[u].insert(v);
            }
        }
        let mut covers = Vec::new();
        for (v, &b) in below.iter().enumerate() {
            for u in b.iter() {
                if above[u].intersection(b).is_empty() {
                    covers.push((u, v));
                }
            }
        }
        covers.sort_unstable();
        Poset { names, below, above, covers }
    }

    /// Poset with default names `p1, .., pn`.
    pub fn with_default_names(n: usize, relations: &[(usize, usize)]) -> Result<Self> {
        Self::new(default_names(n), relations)
    }

    pub fn chain(n: usize) -> Result<Self> {
        let rel: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::with_default_names(n, &rel)
    }

    pub fn antichain(n: usize) -> Result<Self> {
        Self::with_default_names(n, &[])
    }

    /// Ordinal sum: every element of `self` lies below every element of `other`.
    /// Elements are renamed `p1, ..`.
    pub fn ordinal_sum(&self, other: &Poset) -> Result<Self> {
        let n = self.len();
        let mut rel: Vec<_> = self.covers.clone();
        rel.extend(other.covers.iter().map(|&(a, b)| (a + n, b + n)));
        for a in 0..n {
            for b in 0..other.len() {
                rel.push((a, b + n));
            }
        }
        Self::with_default_names(n + other.len(), &rel)
    }

    /// Disjoint union, renamed `p1, ..`.
    pub fn disjoint_union(&self, other: &Poset) -> Result<Self> {
        let n = self.len();
        let mut rel: Vec<_> = self.covers.clone();
        rel.extend(other.covers.iter().map(|&(a, b)| (a + n, b + n)));
        Self::with_default_names(n + other.len(), &rel)
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

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The whole ground set as a bitmask.
    pub fn ground(&self) -> ElemSet {
        ElemSet::full(self.len())
    }

    /// Strict down-set of `i`.
    pub fn below(&self, i: usize) -> ElemSet {
        self.below[i]
    }

    /// Strict up-set of `i`.
    pub fn above(&self, i: usize) -> ElemSet {
        self.above[i]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.below[b].contains(a)
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        a == b || self.lt(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.le(a, b) || self.le(b, a)
    }

    /// Cover pairs `(a, b)` with `b` covering `a`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Elements incomparable to `i` (excluding `i`).
    pub fn incomparable_to(&self, i: usize) -> ElemSet {
        self.ground()
            .difference(self.below[i].union(self.above[i]))
            .difference(ElemSet::singleton(i))
    }

    pub fn is_chain(&self) -> bool {
        (0..self.len()).all(|i| self.incomparable_to(i).is_empty())
    }

    pub fn is_antichain(&self) -> bool {
        self.covers.is_empty()
    }

    pub fn is_down_set(&self, set: ElemSet) -> bool {
        set.iter().all(|i| self.below[i].is_subset(set))
    }

    /// Minimal elements of `P \ placed`, assuming `placed` is a down-set.
    pub fn addable(&self, placed: ElemSet) -> ElemSet {
        self.ground()
            .difference(placed)
            .iter()
            .filter(|&i| self.below[i].is_subset(placed))
            .collect()
    }

    /// Induced subposet on `subset`, keeping names. Also returns the original
    /// index of each new element.
    pub fn induced(&self, subset: ElemSet) -> (Poset, Vec<usize>) {
        let map: Vec<usize> = subset.iter().collect();
        let mut pos = HashMap::new();
        for (k, &i) in map.iter().enumerate() {
            pos.insert(i, k);
        }
        let names = map.iter().map(|&i| self.names[i].clone()).collect();
        let below = map
            .iter()
            .map(|&i| {
                self.below[i]
                    .intersection(subset)
                    .iter()
                    .map(|j| pos[&j])
                    .collect()
            })
            .collect();
        (Poset::from_down_sets(names, below), map)
    }

    /// Linear extensions, in the order produced by backtracking over the
    /// currently-minimal elements in index order.
    pub fn linear_extensions(&self) -> LinearExtensions<'_> {
        LinearExtensions {
            poset: self,
            seq: Vec::with_capacity(self.len()),
            placed: ElemSet::EMPTY,
            started: false,
            done: false,
        }
    }

    /// The extension obtained by repeatedly removing the smallest-index
    /// minimal element. This is the first extension yielded by
    /// [`Poset::linear_extensions`].
    pub fn canonical_extension(&self) -> LinearExtension {
        let mut placed = ElemSet::EMPTY;
        let mut seq = Vec::with_capacity(self.len());
        while seq.len() < self.len() {
            let next = self.addable(placed).first().expect("poset order is acyclic");
            seq.push(next);
            placed.insert(next);
        }
        LinearExtension(seq)
    }

    /// Size of a largest antichain (the width).
    pub fn max_antichain_size(&self) -> usize {
        self.max_antichain().len()
    }

    /// A largest antichain, found by branch-and-bound over the
    /// incomparability graph. Among maximum antichains the one found first
    /// in index order is returned.
    pub fn max_antichain(&self) -> ElemSet {
        let incomparable: Vec<ElemSet> = (0..self.len()).map(|i| self.incomparable_to(i)).collect();
        let mut best = ElemSet::singleton(0);
        grow_antichain(&incomparable, ElemSet::EMPTY, self.ground(), &mut best);
        best
    }

    /// Up to `k` distinct natural labelings; the first is the canonical one.
    pub fn natural_labelings_sample(&self, k: usize) -> Vec<NaturalLabeling> {
        self.linear_extensions()
            .take(k.max(1))
            .map(|ext| NaturalLabeling::from_extension(&ext))
            .collect()
    }

    /// Serializes in the input grammar; parsing the result reproduces the
    /// same indices.
    pub fn to_text(&self) -> String {
        let mut out = self.names.join("; ");
        if !self.covers.is_empty() {
            out.push('\n');
            let rels: Vec<String> = self
                .covers
                .iter()
                .map(|&(a, b)| format!("{}<{}", self.names[a], self.names[b]))
                .collect();
            out.push_str(&rels.join("; "));
        }
        out
    }

    /// Human-readable set of element names, e.g. `{p1,p3}`.
    pub fn format_set(&self, set: ElemSet) -> String {
        let parts: Vec<&str> = set.iter().map(|i| self.name(i)).collect();
        format!("{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poset({})", self.to_text().replace('\n', "; "))
    }
}

impl fmt::Display for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn grow_antichain(incomparable: &[ElemSet], current: ElemSet, candidates: ElemSet, best: &mut ElemSet) {
    if current.len() > best.len() {
        *best = current;
    }
    let mut candidates = candidates;
    while let Some(v) = candidates.first() {
        if current.len() + candidates.len() <= best.len() {
            return;
        }
        candidates.remove(v);
        grow_antichain(
            incomparable,
            current.with(v),
            candidates.intersection(incomparable[v]),
            best,
        );
    }
}

pub(crate) fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("p{i}")).collect()
}

/// Parses the poset text grammar: statements separated by newlines or `;`,
/// each either a bare name or a chain of names joined by `<`. `#` starts a
/// comment. Names match `[A-Za-z0-9_]+` and are indexed by first appearance.
pub fn parse_poset(text: &str) -> Result<Poset> {
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut relations = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        for stmt in content.split(';') {
            let stmt = stmt.trim();
            if stmt.is_empty() {
                continue;
            }
            let parts: Vec<&str> = stmt.split('<').map(str::trim).collect();
            for part in &parts {
                if !is_valid_name(part) {
                    return Err(Error::Syntax {
                        line,
                        message: format!("invalid element name `{part}` in `{stmt}`"),
                    });
                }
            }
            if parts.len() == 1 {
                let name = parts[0];
                if index.contains_key(name) {
                    return Err(Error::DuplicateName(name.to_string()));
                }
                index.insert(name.to_string(), names.len());
                names.push(name.to_string());
                continue;
            }
            let ids: Vec<usize> = parts
                .iter()
                .map(|&p| {
                    *index.entry(p.to_string()).or_insert_with(|| {
                        names.push(p.to_string());
                        names.len() - 1
                    })
                })
                .collect();
            relations.extend(ids.windows(2).map(|w| (w[0], w[1])));
        }
    }
    Poset::new(names, &relations)
}

fn is_valid_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// An order-preserving arrangement of all elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearExtension(Vec<usize>);

impl LinearExtension {
    pub fn new(poset: &Poset, sequence: Vec<usize>) -> Result<Self> {
        if sequence.len() != poset.len() {
            return Err(Error::SizeMismatch { expected: poset.len(), found: sequence.len() });
        }
        let mut placed = ElemSet::EMPTY;
        for &e in &sequence {
            if e >= poset.len() || placed.contains(e) || !poset.below(e).is_subset(placed) {
                return Err(Error::NotLinearExtension);
            }
            placed.insert(e);
        }
        Ok(LinearExtension(sequence))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Backtracking enumerator behind [`Poset::linear_extensions`].
pub struct LinearExtensions<'a> {
    poset: &'a Poset,
    seq: Vec<usize>,
    placed: ElemSet,
    started: bool,
    done: bool,
}

impl LinearExtensions<'_> {
    fn push(&mut self, e: usize) {
        self.seq.push(e);
        self.placed.insert(e);
    }

    fn fill_smallest(&mut self) {
        while self.seq.len() < self.poset.len() {
            let e = self.poset.addable(self.placed).first().expect("acyclic");
            self.push(e);
        }
    }
}

impl Iterator for LinearExtensions<'_> {
    type Item = LinearExtension;

    fn next(&mut self) -> Option<LinearExtension> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.fill_smallest();
            return Some(LinearExtension(self.seq.clone()));
        }
        loop {
            let Some(last) = self.seq.pop() else {
                self.done = true;
                return None;
            };
            self.placed.remove(last);
            let mask = if last + 1 >= 128 { 0 } else { u128::MAX << (last + 1) };
            let later = ElemSet::from_bits(self.poset.addable(self.placed).bits() & mask);
            if let Some(e) = later.first() {
                self.push(e);
                self.fill_smallest();
                return Some(LinearExtension(self.seq.clone()));
            }
        }
    }
}

/// A bijection from elements to `1..=n` that preserves the order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NaturalLabeling(Vec<usize>);

impl NaturalLabeling {
    pub fn new(poset: &Poset, labels: Vec<usize>) -> Result<Self> {
        let n = poset.len();
        if labels.len() != n {
            return Err(Error::SizeMismatch { expected: n, found: labels.len() });
        }
        let mut seen = vec![false; n + 1];
        for &l in &labels {
            if l == 0 || l > n || seen[l] {
                return Err(Error::NotNaturalLabeling);
            }
            seen[l] = true;
        }
        if poset.covers().iter().any(|&(a, b)| labels[a] >= labels[b]) {
            return Err(Error::NotNaturalLabeling);
        }
        Ok(NaturalLabeling(labels))
    }

    /// Labels elements by their position in `ext` (1-based).
    pub fn from_extension(ext: &LinearExtension) -> Self {
        let mut labels = vec![0; ext.len()];
        for (pos, &e) in ext.as_slice().iter().enumerate() {
            labels[e] = pos + 1;
        }
        NaturalLabeling(labels)
    }

    /// The labeling induced by [`Poset::canonical_extension`].
    pub fn canonical(poset: &Poset) -> Self {
        Self::from_extension(&poset.canonical_extension())
    }

    pub fn label(&self, element: usize) -> usize {
        self.0[element]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A set of descent positions, each in `1..=n-1`.
///
/// Ordered by cardinality first, then lexicographically by members, which is
/// the order used in reports.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct DescentSet(ElemSet);

impl DescentSet {
    pub fn from_positions<I: IntoIterator<Item = usize>>(positions: I) -> Self {
        DescentSet(positions.into_iter().collect())
    }

    pub(crate) fn from_set(set: ElemSet) -> Self {
        DescentSet(set)
    }

    pub fn positions(&self) -> impl Iterator<Item = usize> {
        self.0.iter()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(i)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.iter().last()
    }
}

impl Ord for DescentSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp_lex(other.0))
    }
}

impl PartialOrd for DescentSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DescentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for DescentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Descent positions `i` (1-based) with `lab(ext[i-1]) > lab(ext[i])`.
pub fn descent_set(ext: &LinearExtension, lab: &NaturalLabeling) -> Result<DescentSet> {
    if ext.len() != lab.len() {
        return Err(Error::SizeMismatch { expected: lab.len(), found: ext.len() });
    }
    let seq = ext.as_slice();
    Ok(DescentSet(
        (1..seq.len())
            .filter(|&i| lab.label(seq[i - 1]) > lab.label(seq[i]))
            .collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> Poset {
        parse_poset("p1<p4; p2<p4; p2<p5; p3<p5").unwrap()
    }

    #[test]
    fn parses_example() {
        let p = example();
        assert_eq!(p.len(), 5);
        assert_eq!(p.covers().len(), 4);
        assert_eq!(p.names(), &["p1", "p4", "p2", "p5", "p3"]);
    }

    #[test]
    fn parses_single_and_comments() {
        let p = parse_poset("# a comment\na   # trailing\n").unwrap();
        assert_eq!(p.len(), 1);
        assert!(p.is_antichain());
    }

    #[test]
    fn rejects_cycles_and_duplicates() {
        assert!(matches!(parse_poset("a<b; b<a"), Err(Error::Cycle(_))));
        assert!(matches!(parse_poset("a<a"), Err(Error::Cycle(_))));
        assert!(matches!(parse_poset("a; a"), Err(Error::DuplicateName(_))));
        assert!(matches!(parse_poset("a<"), Err(Error::Syntax { line: 1, .. })));
        assert!(matches!(parse_poset("x\na-b"), Err(Error::Syntax { line: 2, .. })));
        assert!(matches!(parse_poset("  \n# nothing"), Err(Error::EmptyPoset)));
    }

    #[test]
    fn transitive_closure_and_covers() {
        let p = parse_poset("a<b; b<c; a<c").unwrap();
        assert!(p.lt(0, 2));
        assert_eq!(p.covers(), &[(0, 1), (1, 2)]);
        assert!(p.is_chain());
    }

    #[test]
    fn text_round_trip_keeps_indices() {
        let p = example();
        assert_eq!(parse_poset(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn extension_counts() {
        assert_eq!(Poset::antichain(2).unwrap().linear_extensions().count(), 2);
        assert_eq!(Poset::chain(3).unwrap().linear_extensions().count(), 1);
        assert_eq!(Poset::antichain(3).unwrap().linear_extensions().count(), 6);
    }

    #[test]
    fn extensions_are_distinct_and_first_is_canonical() {
        let p = example();
        let all: Vec<_> = p.linear_extensions().collect();
        let set: std::collections::HashSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), all.len());
        assert_eq!(all[0], p.canonical_extension());
        for ext in &all {
            LinearExtension::new(&p, ext.as_slice().to_vec()).unwrap();
        }
    }

    #[test]
    fn descent_examples() {
        let chain = Poset::chain(4).unwrap();
        let ext = chain.canonical_extension();
        let lab = NaturalLabeling::canonical(&chain);
        assert!(descent_set(&ext, &lab).unwrap().is_empty());

        let anti = Poset::antichain(3).unwrap();
        let lab = NaturalLabeling::new(&anti, vec![1, 2, 3]).unwrap();
        let rev = LinearExtension::new(&anti, vec![2, 1, 0]).unwrap();
        assert_eq!(descent_set(&rev, &lab).unwrap(), DescentSet::from_positions([1, 2]));
        let swap = LinearExtension::new(&anti, vec![1, 0, 2]).unwrap();
        assert_eq!(descent_set(&swap, &lab).unwrap(), DescentSet::from_positions([1]));

        let other = NaturalLabeling::canonical(&chain);
        assert!(matches!(descent_set(&rev, &other), Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn invalid_labelings_and_extensions() {
        let p = Poset::chain(2).unwrap();
        assert!(NaturalLabeling::new(&p, vec![2, 1]).is_err());
        assert!(NaturalLabeling::new(&p, vec![1, 1]).is_err());
        assert!(LinearExtension::new(&p, vec![1, 0]).is_err());
    }

    #[test]
    fn antichain_width() {
        assert_eq!(Poset::chain(6).unwrap().max_antichain_size(), 1);
        assert_eq!(Poset::antichain(6).unwrap().max_antichain_size(), 6);
        let p = example();
        assert_eq!(p.max_antichain_size(), 3);
        let a = p.max_antichain();
        for i in a.iter() {
            for j in a.iter() {
                assert!(i == j || !p.comparable(i, j));
            }
        }
    }

    #[test]
    fn labeling_samples() {
        assert_eq!(Poset::chain(4).unwrap().natural_labelings_sample(5).len(), 1);
        assert_eq!(Poset::antichain(2).unwrap().natural_labelings_sample(5).len(), 2);
        let three = Poset::antichain(3).unwrap().natural_labelings_sample(2);
        assert_eq!(three.len(), 2);
        assert_ne!(three[0], three[1]);
    }

    #[test]
    fn descent_set_order() {
        let a = DescentSet::from_positions([3]);
        let b = DescentSet::from_positions([1, 2]);
        let c = DescentSet::from_positions([1, 3]);
        assert!(DescentSet::default() < a && a < b && b < c);
        assert_eq!(c.to_string(), "{1,3}");
    }
}
