//! Canonical forms of small posets and the census of all posets up to
//! isomorphism.
//!
//! The canonical form is the lexicographically largest relation code over
//! all orderings of the elements that respect an equitable colouring
//! (iterated refinement by down/up-degree and neighbour colours). Codes are
//! built position by position so that a prefix which already loses to the
//! best code found so far is pruned.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::lattice::DistLattice;
use crate::poset::{default_names, Poset};
use crate::set::ElemSet;

/// Largest poset size with a canonical code (`n(n-1)` bits must fit in 128).
pub const MAX_CANONICAL: usize = 11;

/// A poset up to isomorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub size: usize,
    pub code: u128,
}

impl CanonicalForm {
    /// The canonical representative, named `p1..pn` in canonical order.
    pub fn to_poset(self) -> Poset {
        let n = self.size;
        let mut below = vec![ElemSet::EMPTY; n];
        let total = n * n.saturating_sub(1);
        let mut bit = total;
        for k in 1..n {
            for a in 0..k {
                bit -= 1;
                if self.code >> bit & 1 == 1 {
                    below[k].insert(a);
                }
                bit -= 1;
                if self.code >> bit & 1 == 1 {
                    below[a].insert(k);
                }
            }
        }
        Poset::from_down_sets(default_names(n), below)
    }
}

fn refine_colours(p: &Poset) -> Vec<usize> {
    let n = p.len();
    let mut colour: Vec<usize> = {
        let keys: Vec<(usize, usize)> = (0..n).map(|i| (p.below(i).len(), p.above(i).len())).collect();
        rank_keys(&keys)
    };
    loop {
        let keys: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..n)
            .map(|i| {
                let mut down: Vec<usize> = p.below(i).iter().map(|j| colour[j]).collect();
                let mut up: Vec<usize> = p.above(i).iter().map(|j| colour[j]).collect();
                down.sort_unstable();
                up.sort_unstable();
                (colour[i], down, up)
            })
            .collect();
        let next = rank_keys(&keys);
        let classes = |c: &[usize]| c.iter().collect::<BTreeSet<_>>().len();
        if classes(&next) == classes(&colour) {
            return next;
        }
        colour = next;
    }
}

fn rank_keys<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let distinct: Vec<K> = keys.iter().cloned().collect::<BTreeSet<K>>().into_iter().collect();
    keys.iter().map(|k| distinct.binary_search(k).expect("present")).collect()
}

struct Search<'a> {
    poset: &'a Poset,
    slot_cell: Vec<usize>,
    cells: Vec<Vec<usize>>,
    total_bits: usize,
    best: Option<(u128, Vec<usize>)>,
}

impl Search<'_> {
    fn run(&mut self, order: &mut Vec<usize>, placed: ElemSet, prefix: u128) {
        let k = order.len();
        if k == self.poset.len() {
            if self.best.as_ref().is_none_or(|(b, _)| prefix > *b) {
                self.best = Some((prefix, order.clone()));
            }
            return;
        }
        let members = self.cells[self.slot_cell[k]].clone();
        for e in members {
            if placed.contains(e) {
                continue;
            }
            let mut code = prefix;
            for &a in order.iter() {
                code = code << 2 | u128::from(self.poset.lt(a, e)) << 1 | u128::from(self.poset.lt(e, a));
            }
            if let Some((b, _)) = &self.best {
                let len = (k + 1) * k;
                let best_prefix = if len == 0 { 0 } else { b >> (self.total_bits - len) };
                if code < best_prefix {
                    continue;
                }
            }
            order.push(e);
            self.run(order, placed.with(e), code);
            order.pop();
        }
    }
}

/// Canonical form and the element order realizing it.
pub fn canonical_labeling(p: &Poset) -> (CanonicalForm, Vec<usize>) {
    let n = p.len();
    assert!(n <= MAX_CANONICAL, "canonical forms support at most {MAX_CANONICAL} elements");
    let colour = refine_colours(p);
    let ncolours = colour.iter().max().map_or(0, |m| m + 1);
    let mut cells = vec![Vec::new(); ncolours];
    for (i, &c) in colour.iter().enumerate() {
        cells[c].push(i);
    }
    let slot_cell: Vec<usize> = cells.iter().enumerate().flat_map(|(c, m)| std::iter::repeat_n(c, m.len())).collect();
    let mut search = Search { poset: p, slot_cell, cells, total_bits: n * n.saturating_sub(1), best: None };
    search.run(&mut Vec::with_capacity(n), ElemSet::EMPTY, 0);
    let (code, order) = search.best.expect("at least one ordering");
    (CanonicalForm { size: n, code }, order)
}

pub fn canonical_form(p: &Poset) -> CanonicalForm {
    canonical_labeling(p).0
}

pub fn isomorphic(p: &Poset, q: &Poset) -> bool {
    p.len() == q.len() && canonical_form(p) == canonical_form(q)
}

/// All posets with `1..=max_size` elements up to isomorphism; entry `k`
/// holds the posets of size `k + 1`, sorted by canonical code.
///
/// Each poset of size `n + 1` arises from one of size `n` by adding a new
/// maximal element above some down-set, so the census grows size by size.
pub fn census(max_size: usize) -> Vec<Vec<Poset>> {
    assert!(max_size <= MAX_CANONICAL);
    let mut out: Vec<Vec<Poset>> = Vec::new();
    if max_size == 0 {
        return out;
    }
    out.push(vec![Poset::antichain(1).expect("one element")]);
    for _ in 1..max_size {
        let prev = out.last().unwrap();
        let forms: BTreeSet<CanonicalForm> = prev
            .par_iter()
            .flat_map_iter(|q| extensions_by_maximal_element(q).into_iter())
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        out.push(forms.into_iter().map(CanonicalForm::to_poset).collect());
    }
    out
}

fn extensions_by_maximal_element(q: &Poset) -> Vec<CanonicalForm> {
    let n = q.len();
    let lattice = DistLattice::birkhoff(q).expect("small poset");
    (0..lattice.len())
        .map(|x| {
            let mut below: Vec<ElemSet> = (0..n).map(|i| q.below(i)).collect();
            below.push(lattice.ideal(x));
            canonical_form(&Poset::from_down_sets(default_names(n + 1), below))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::parse_poset;

    #[test]
    fn census_counts() {
        let c = census(6);
        let counts: Vec<usize> = c.iter().map(Vec::len).collect();
        assert_eq!(counts, vec![1, 2, 5, 16, 63, 318]);
    }

    #[test]
    fn canonical_form_is_invariant_under_relabeling() {
        let a = parse_poset("a<b; c<b; c<d").unwrap();
        let b = parse_poset("x<y; x<w; z<w").unwrap();
        assert!(isomorphic(&a, &b));
        let c = parse_poset("a<b; c<b; a<d").unwrap();
        assert!(isomorphic(&a, &c));
        let d = parse_poset("a<b; b<c; d").unwrap();
        assert!(!isomorphic(&a, &d));
    }

    #[test]
    fn decoded_form_round_trips() {
        for p in census(5).into_iter().flatten() {
            let f = canonical_form(&p);
            assert_eq!(canonical_form(&f.to_poset()), f);
        }
    }
}
