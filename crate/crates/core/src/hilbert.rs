//! The h-vector of the Hibi ring, two ways.
//!
//! * Flag route: `h_k` is the number of linear extensions of `P` with `k`
//!   descents under a fixed natural labeling; the per-set tallies form the
//!   flag vector `beta(S)`.
//! * Order-complex route: count chains of `L` by cardinality (the f-vector
//!   of the order complex, whose facets are the maximal chains) and apply
//!   the f-to-h transform.
//!
//! The regularity is the degree of the h-vector.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::DistLattice;
use crate::planar::EdgeLabeling;
use crate::poset::{DescentSet, LinearExtension, NaturalLabeling, Poset};
use crate::set::ElemSet;

/// Default cap on enumerated extensions or chains.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// Number of objects (extensions or maximal chains) per descent set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagBeta {
    d: usize,
    counts: BTreeMap<DescentSet, BigUint>,
}

impl FlagBeta {
    pub fn new(d: usize, counts: BTreeMap<DescentSet, BigUint>) -> Self {
        FlagBeta { d, counts }
    }

    /// Descent sets live in `1..=d`.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn get(&self, s: &DescentSet) -> BigUint {
        self.counts.get(s).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DescentSet, &BigUint)> {
        self.counts.iter()
    }

    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    /// One `beta {1,3}: 5` line per nonzero entry.
    pub fn report_lines(&self) -> Vec<String> {
        self.counts.iter().map(|(s, c)| format!("beta {s}: {c}")).collect()
    }
}

/// h-vector stored without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HVector(Vec<BigUint>);

impl HVector {
    pub fn new(mut h: Vec<BigUint>) -> Self {
        while h.len() > 1 && h.last().is_some_and(Zero::is_zero) {
            h.pop();
        }
        HVector(h)
    }

    pub fn coefficients(&self) -> &[BigUint] {
        &self.0
    }

    /// Index of the last nonzero coefficient.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn sum(&self) -> BigUint {
        self.0.iter().sum()
    }
}

impl fmt::Display for HVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "h: {}", parts.join(" "))
    }
}

/// `counts[k]` is the number of chains of `L` with `k` elements, so
/// `counts[0] = 1` is the empty face and `f_i = counts[i + 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FVector(Vec<BigUint>);

impl FVector {
    pub fn counts(&self) -> &[BigUint] {
        &self.0
    }

    /// Number of `i`-dimensional faces, for `i >= -1`.
    pub fn f(&self, i: isize) -> BigUint {
        self.0.get((i + 1) as usize).cloned().unwrap_or_default()
    }

    /// Cardinality of a facet.
    pub fn facet_size(&self) -> usize {
        self.0.len() - 1
    }
}

impl fmt::Display for FVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "f: {}", parts.join(" "))
    }
}

/// Flag vector together with the first extension (in enumeration order)
/// attaining the largest descent count.
#[derive(Clone, Debug)]
pub struct FlagRun {
    pub beta: FlagBeta,
    pub witness: LinearExtension,
    pub witness_descents: DescentSet,
}

#[derive(Default)]
struct Tally {
    counts: HashMap<ElemSet, u64>,
    best: Option<(Vec<usize>, ElemSet)>,
}

struct Walk<'a> {
    poset: &'a Poset,
    labels: &'a NaturalLabeling,
    seen: &'a AtomicU64,
    stop: &'a AtomicBool,
    cap: u64,
}

impl Walk<'_> {
    fn run(&self, placed: ElemSet, seq: &mut Vec<usize>, desc: ElemSet, tally: &mut Tally) -> Result<()> {
        if seq.len() == self.poset.len() {
            if self.stop.load(Ordering::Relaxed) || self.seen.fetch_add(1, Ordering::Relaxed) >= self.cap {
                self.stop.store(true, Ordering::Relaxed);
                return Err(Error::EnumerationCap { cap: self.cap });
            }
            *tally.counts.entry(desc).or_insert(0) += 1;
            if tally.best.as_ref().is_none_or(|(_, d)| d.len() < desc.len()) {
                tally.best = Some((seq.clone(), desc));
            }
            return Ok(());
        }
        let pos = seq.len();
        for e in self.poset.addable(placed).iter() {
            let dropped = pos > 0 && self.labels.label(seq[pos - 1]) > self.labels.label(e);
            let next = if dropped { desc.with(pos) } else { desc };
            seq.push(e);
            let r = self.run(placed.with(e), seq, next, tally);
            seq.pop();
            r?;
        }
        Ok(())
    }
}

/// Tallies descent sets of all linear extensions under the canonical
/// natural labeling. Fails once more than `cap` extensions are seen.
pub fn flag_beta(p: &Poset, cap: u64) -> Result<FlagBeta> {
    Ok(flag_run(p, cap)?.beta)
}

/// [`flag_beta`] plus a witness extension of maximal descent count. The
/// enumeration is split by first element and merged in branch order.
pub fn flag_run(p: &Poset, cap: u64) -> Result<FlagRun> {
    let labels = NaturalLabeling::canonical(p);
    let seen = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let walk = Walk { poset: p, labels: &labels, seen: &seen, stop: &stop, cap };
    let firsts: Vec<usize> = p.addable(ElemSet::EMPTY).iter().collect();
    let tallies: Vec<Tally> = firsts
        .par_iter()
        .map(|&e| {
            let mut tally = Tally::default();
            let mut seq = vec![e];
            walk.run(ElemSet::singleton(e), &mut seq, ElemSet::EMPTY, &mut tally)?;
            Ok(tally)
        })
        .collect::<Result<_>>()?;

    let mut merged: HashMap<ElemSet, u64> = HashMap::new();
    let mut best: Option<(Vec<usize>, ElemSet)> = None;
    for t in tallies {
        for (k, v) in t.counts {
            *merged.entry(k).or_insert(0) += v;
        }
        if let Some((seq, d)) = t.best {
            if best.as_ref().is_none_or(|(_, b)| b.len() < d.len()) {
                best = Some((seq, d));
            }
        }
    }
    let counts = merged
        .into_iter()
        .map(|(k, v)| (DescentSet::from_set(k), BigUint::from(v)))
        .collect();
    let (seq, desc) = best.expect("every poset has a linear extension");
    Ok(FlagRun {
        beta: FlagBeta::new(p.len() - 1, counts),
        witness: LinearExtension::new(p, seq)?,
        witness_descents: DescentSet::from_set(desc),
    })
}

/// `h_k = sum of beta(S) over |S| = k`.
pub fn h_from_beta(fb: &FlagBeta) -> HVector {
    let mut h = vec![BigUint::zero(); fb.d() + 1];
    for (s, c) in fb.iter() {
        h[s.len()] += c;
    }
    HVector::new(h)
}

/// Chain counts of `L` by cardinality. The dynamic program visits every
/// comparable pair, so it is refused when `|L|^2` exceeds `cap`.
pub fn f_vector(l: &DistLattice, cap: u64) -> Result<FVector> {
    let work = (l.len() as u64).saturating_mul(l.len() as u64);
    if work > cap {
        return Err(Error::EnumerationCap { cap });
    }
    let size = l.height() + 2;
    let counts = match chain_counts_u128(l, size) {
        Some(c) => c.into_iter().map(BigUint::from).collect(),
        None => chain_counts_big(l, size),
    };
    Ok(FVector(counts))
}

fn chain_counts_u128(l: &DistLattice, size: usize) -> Option<Vec<u128>> {
    // ends[z][k]: chains with k elements whose largest element is z.
    let mut ends: Vec<Vec<u128>> = Vec::with_capacity(l.len());
    let mut total = vec![0u128; size];
    total[0] = 1;
    for z in 0..l.len() {
        let mut row = vec![0u128; size];
        row[1] = 1;
        for (y, prev) in ends.iter().enumerate() {
            if l.le(y, z) {
                for k in 1..size - 1 {
                    row[k + 1] = row[k + 1].checked_add(prev[k])?;
                }
            }
        }
        for k in 1..size {
            total[k] = total[k].checked_add(row[k])?;
        }
        ends.push(row);
    }
    Some(total)
}

fn chain_counts_big(l: &DistLattice, size: usize) -> Vec<BigUint> {
    let mut ends: Vec<Vec<BigUint>> = Vec::with_capacity(l.len());
    let mut total = vec![BigUint::zero(); size];
    total[0] = BigUint::one();
    for z in 0..l.len() {
        let mut row = vec![BigUint::zero(); size];
        row[1] = BigUint::one();
        for (y, prev) in ends.iter().enumerate() {
            if l.le(y, z) {
                for k in 1..size - 1 {
                    row[k + 1] += &prev[k];
                }
            }
        }
        for k in 1..size {
            total[k] += &row[k];
        }
        ends.push(row);
    }
    total
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `h_j = sum_{i=0..j} (-1)^(j-i) C(D-i, j-i) f_{i-1}`, with `D` the facet
/// cardinality.
pub fn h_from_f(fv: &FVector) -> Result<HVector> {
    let dim = fv.facet_size();
    let counts = fv.counts();
    let mut h = Vec::with_capacity(dim + 1);
    for j in 0..=dim {
        let mut acc = BigInt::zero();
        for (i, c) in counts.iter().enumerate().take(j + 1) {
            let term = binomial(dim - i, j - i) * BigInt::from(c.clone());
            if (j - i) % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        if acc.is_negative() {
            return Err(Error::NegativeH { index: j });
        }
        h.push(acc.to_biguint().expect("nonnegative"));
    }
    Ok(HVector::new(h))
}

pub fn regularity_from_h(h: &HVector) -> usize {
    h.degree()
}

/// Number of maximal chains of `L`, by a pass over the Hasse diagram.
pub fn count_maximal_chains(l: &DistLattice) -> BigUint {
    let mut paths = vec![BigUint::zero(); l.len()];
    paths[l.bottom()] = BigUint::one();
    for x in 0..l.len() {
        let here = paths[x].clone();
        for &y in l.up(x) {
            paths[y] += &here;
        }
    }
    paths[l.top()].clone()
}

/// Tallies the descent sets of all maximal chains of `L` under `lam`.
pub fn beta_via_chains(l: &DistLattice, lam: &EdgeLabeling, cap: u64) -> Result<FlagBeta> {
    let mut counts: HashMap<ElemSet, u64> = HashMap::new();
    let mut seen = 0u64;
    let mut stack = vec![(l.bottom(), usize::MAX, ElemSet::EMPTY, 0usize)];
    while let Some((x, prev_label, desc, pos)) = stack.pop() {
        if x == l.top() {
            seen += 1;
            if seen > cap {
                return Err(Error::EnumerationCap { cap });
            }
            *counts.entry(desc).or_insert(0) += 1;
            continue;
        }
        for &y in l.up(x) {
            let a = lam.label(x, y).ok_or_else(|| Error::InvalidChain(format!("edge {x}->{y} is unlabeled")))?;
            let next = if pos > 0 && prev_label > a { desc.with(pos) } else { desc };
            stack.push((y, a, next, pos + 1));
        }
    }
    let counts = counts
        .into_iter()
        .map(|(k, v)| (DescentSet::from_set(k), BigUint::from(v)))
        .collect();
    Ok(FlagBeta::new(l.height().saturating_sub(1), counts))
}

/// Convenience: `h` as machine integers, for tests and reports.
pub fn h_as_u64(h: &HVector) -> Vec<u64> {
    h.coefficients().iter().map(|c| c.to_u64().unwrap_or(u64::MAX)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::{build_labeling, try_embed};

    fn h(p: &Poset) -> Vec<u64> {
        h_as_u64(&h_from_beta(&flag_beta(p, DEFAULT_ENUMERATION_CAP).unwrap()))
    }

    fn hf(p: &Poset) -> Vec<u64> {
        let l = DistLattice::birkhoff(p).unwrap();
        h_as_u64(&h_from_f(&f_vector(&l, DEFAULT_ENUMERATION_CAP).unwrap()).unwrap())
    }

    #[test]
    fn flag_examples() {
        let fb = flag_beta(&Poset::antichain(2).unwrap(), 100).unwrap();
        assert_eq!(fb.report_lines(), vec!["beta {}: 1", "beta {1}: 1"]);
        let fb = flag_beta(&Poset::chain(4).unwrap(), 100).unwrap();
        assert_eq!(fb.report_lines(), vec!["beta {}: 1"]);
        assert_eq!(h(&Poset::antichain(3).unwrap()), vec![1, 4, 1]);
    }

    #[test]
    fn f_examples() {
        let d = DistLattice::birkhoff(&Poset::antichain(2).unwrap()).unwrap();
        assert_eq!(f_vector(&d, 1000).unwrap().to_string(), "f: 1 4 5 2");
        let c = DistLattice::birkhoff(&Poset::chain(1).unwrap()).unwrap();
        assert_eq!(f_vector(&c, 1000).unwrap().to_string(), "f: 1 2 1");
        let b3 = DistLattice::birkhoff(&Poset::antichain(3).unwrap()).unwrap();
        let fv = f_vector(&b3, 1000).unwrap();
        assert_eq!(*fv.counts().last().unwrap(), BigUint::from(6u32));
        assert_eq!(fv.f(-1), BigUint::one());
        assert_eq!(fv.f(0), BigUint::from(8u32));
    }

    #[test]
    fn f_to_h_examples() {
        assert_eq!(hf(&Poset::antichain(2).unwrap()), vec![1, 1]);
        assert_eq!(hf(&Poset::chain(3).unwrap()), vec![1]);
        assert_eq!(hf(&Poset::antichain(3).unwrap()), vec![1, 4, 1]);
    }

    #[test]
    fn regularity_examples() {
        assert_eq!(regularity_from_h(&HVector::new(vec![BigUint::one()])), 0);
        let h141 = HVector::new([1u32, 4, 1].map(BigUint::from).to_vec());
        assert_eq!(regularity_from_h(&h141), 2);
        assert_eq!(h141.to_string(), "h: 1 4 1");
        let trailing = HVector::new([1u32, 2, 0, 0].map(BigUint::from).to_vec());
        assert_eq!(trailing.degree(), 1);
    }

    #[test]
    fn inconsistent_f_vector_is_rejected() {
        let bogus = FVector([1u32, 1, 5].map(BigUint::from).to_vec());
        assert_eq!(h_from_f(&bogus).unwrap_err(), Error::NegativeH { index: 1 });
    }

    #[test]
    fn caps() {
        let p = Poset::antichain(6).unwrap();
        assert_eq!(flag_beta(&p, 100).unwrap_err(), Error::EnumerationCap { cap: 100 });
        let l = DistLattice::birkhoff(&p).unwrap();
        assert!(f_vector(&l, 100).is_err());
    }

    #[test]
    fn chains_route_matches_on_diamond_and_grid() {
        for p in [
            Poset::antichain(2).unwrap(),
            Poset::chain(3).unwrap(),
            Poset::chain(1).unwrap().disjoint_union(&Poset::chain(2).unwrap()).unwrap(),
        ] {
            let l = DistLattice::birkhoff(&p).unwrap();
            let emb = try_embed(&l).embedding().cloned().unwrap();
            let lam = build_labeling(&l, &emb).unwrap();
            assert_eq!(beta_via_chains(&l, &lam, 1000).unwrap(), flag_beta(&p, 1000).unwrap());
        }
        let p = Poset::antichain(2).unwrap();
        let l = DistLattice::birkhoff(&p).unwrap();
        let emb = try_embed(&l).embedding().cloned().unwrap();
        let lam = build_labeling(&l, &emb).unwrap();
        assert_eq!(beta_via_chains(&l, &lam, 1000).unwrap().report_lines(), vec!["beta {}: 1", "beta {1}: 1"]);
    }

    #[test]
    fn witness_has_max_descents() {
        let run = flag_run(&Poset::antichain(4).unwrap(), 1000).unwrap();
        assert_eq!(run.witness_descents.len(), 3);
        let chains = count_maximal_chains(&DistLattice::birkhoff(&Poset::antichain(4).unwrap()).unwrap());
        assert_eq!(chains, BigUint::from(24u32));
        assert_eq!(run.beta.total(), chains);
    }
}
