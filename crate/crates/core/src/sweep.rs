//! Exhaustive verification over all posets up to a given size.
//!
//! Every poset is checked independently; results are collected in census
//! order, so the summary is identical across runs and thread counts.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::census::{canonical_form, census, CanonicalForm};
use crate::engine::{has_linear_resolution, nonplanar_bounds, regularity, Budget, Method, Mode};
use crate::fixtures;
use crate::hilbert::{beta_via_chains, f_vector, flag_beta, h_from_beta, h_from_f, regularity_from_h};
use crate::lattice::DistLattice;
use crate::planar::{
    build_labeling, chain_descents, max_cyclic_squares, max_descent_cardinality, try_embed, upper_chain, verify_el,
};
use crate::poset::{DescentSet, Poset};

/// Largest size accepted by [`sweep_corpus`].
pub const MAX_SWEEP_SIZE: usize = 8;

/// Planar lattices above this size skip the EL and chain-enumeration checks.
pub const EL_CHECK_LIMIT: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckFailure {
    pub check: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetOutcome {
    pub form: CanonicalForm,
    pub poset: String,
    pub elements: usize,
    pub reg: usize,
    pub lower_bound: usize,
    pub upper_bound: usize,
    pub planar: bool,
    pub simple: bool,
    pub linear: bool,
    pub method: Method,
    pub failures: Vec<CheckFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub size: usize,
    pub posets: usize,
    pub planar: usize,
    pub simple: usize,
    pub linear: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepSummary {
    pub rows: Vec<SweepRow>,
    pub outcomes: Vec<PosetOutcome>,
}

impl SweepSummary {
    pub fn total_posets(&self) -> usize {
        self.outcomes.len()
    }

    pub fn total_failures(&self) -> usize {
        self.rows.iter().map(|r| r.failures).sum()
    }

    pub fn failed(&self) -> impl Iterator<Item = &PosetOutcome> {
        self.outcomes.iter().filter(|o| !o.failures.is_empty())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{:>4} {:>8} {:>8} {:>8} {:>8} {:>8}", "size", "posets", "planar", "simple", "linear", "failures")
            .unwrap();
        for r in &self.rows {
            writeln!(
                out,
                "{:>4} {:>8} {:>8} {:>8} {:>8} {:>8}",
                r.size, r.posets, r.planar, r.simple, r.linear, r.failures
            )
            .unwrap();
        }
        writeln!(out, "total: {} posets, {} failures", self.total_posets(), self.total_failures()).unwrap();
        for o in self.failed() {
            writeln!(out, "failed poset:").unwrap();
            for line in o.poset.lines() {
                writeln!(out, "  {line}").unwrap();
            }
            for f in &o.failures {
                writeln!(out, "  {}: {}", f.check, f.detail).unwrap();
            }
        }
        out
    }

    /// One `key=value` line per poset, then one per size, then totals.
    pub fn to_records(&self) -> String {
        let mut out = String::new();
        for o in &self.outcomes {
            writeln!(
                out,
                "poset={}:{:x} elements={} reg={} lower_bound={} upper_bound={} planar={} simple={} linear={} method={} failures={}",
                o.form.size,
                o.form.code,
                o.elements,
                o.reg,
                o.lower_bound,
                o.upper_bound,
                o.planar,
                o.simple,
                o.linear,
                o.method,
                o.failures.len()
            )
            .unwrap();
        }
        for r in &self.rows {
            writeln!(
                out,
                "size={} posets={} planar={} simple={} linear={} failures={}",
                r.size, r.posets, r.planar, r.simple, r.linear, r.failures
            )
            .unwrap();
        }
        writeln!(out, "total_posets={}", self.total_posets()).unwrap();
        writeln!(out, "total_failures={}", self.total_failures()).unwrap();
        out
    }
}

/// Runs [`check_poset`] on every poset with `1..=max_size` elements.
///
/// # Panics
/// When `max_size` exceeds [`MAX_SWEEP_SIZE`].
pub fn sweep_corpus(max_size: usize, budget: &Budget) -> SweepSummary {
    assert!(max_size <= MAX_SWEEP_SIZE, "sweep size is capped at {MAX_SWEEP_SIZE}");
    let mut rows = Vec::new();
    let mut outcomes = Vec::new();
    for (k, level) in census(max_size).into_iter().enumerate() {
        let results: Vec<PosetOutcome> = level.par_iter().map(|p| check_poset(p, budget)).collect();
        rows.push(SweepRow {
            size: k + 1,
            posets: results.len(),
            planar: results.iter().filter(|o| o.planar).count(),
            simple: results.iter().filter(|o| o.simple).count(),
            linear: results.iter().filter(|o| o.linear).count(),
            failures: results.iter().filter(|o| !o.failures.is_empty()).count(),
        });
        outcomes.extend(results);
    }
    SweepSummary { rows, outcomes }
}

/// Every regularity route on a single poset, plus the structural claims
/// tied to it.
pub fn check_poset(p: &Poset, budget: &Budget) -> PosetOutcome {
    let mut failures = Vec::new();
    let mut fail = |check: &str, detail: String| failures.push(CheckFailure { check: check.to_string(), detail });
    let form = canonical_form(p);
    let poset = p.to_text();
    let l = match DistLattice::birkhoff_with_cap(p, budget.max_lattice) {
        Ok(l) => l,
        Err(e) => {
            fail("lattice", e.to_string());
            return PosetOutcome {
                form,
                poset,
                elements: 0,
                reg: 0,
                lower_bound: 0,
                upper_bound: 0,
                planar: false,
                simple: false,
                linear: false,
                method: Method::BoundsOnly,
                failures,
            };
        }
    };

    let beta = flag_beta(p, budget.max_enumeration);
    let h = beta.as_ref().map(h_from_beta);
    let reg = match &h {
        Ok(h) => regularity_from_h(h),
        Err(e) => {
            fail("flag-beta", e.to_string());
            0
        }
    };
    match (h.as_ref(), f_vector(&l, budget.max_enumeration).and_then(|f| h_from_f(&f))) {
        (Ok(hb), Ok(hf)) if *hb == hf => {}
        (Ok(hb), Ok(hf)) => fail("h-oracles", format!("{hb} vs {hf}")),
        (_, Err(e)) => fail("h-from-f", e.to_string()),
        _ => {}
    }

    let report = regularity(&l, budget, Mode::Verify);
    if report.value != Some(reg) {
        fail("engine-value", format!("{:?} vs {reg}", report.value));
    }
    for c in report.checks().filter(|c| !c.passed) {
        fail(&format!("engine:{}", c.name), c.detail.clone());
    }
    if !(report.lower_bound <= reg && reg <= report.upper_bound) {
        fail("report-bounds", format!("{} <= {reg} <= {}", report.lower_bound, report.upper_bound));
    }
    let (lower, upper) = nonplanar_bounds(p);
    if !(lower <= reg && reg <= upper) {
        fail("width-bounds", format!("{lower} <= {reg} <= {upper}"));
    }

    let planarity = try_embed(&l);
    if let Some(emb) = planarity.embedding() {
        match build_labeling(&l, emb) {
            Ok(lam) => {
                let squares = max_cyclic_squares(&l, emb).map(|(r, _)| r);
                let (descents, _) = max_descent_cardinality(&l, &lam);
                if squares.as_ref().ok() != Some(&reg) || descents != reg {
                    fail("planar-three-way", format!("squares {squares:?}, descents {descents}, deg h {reg}"));
                }
                if l.len() <= EL_CHECK_LIMIT {
                    if let Err(f) = verify_el(&l, &lam) {
                        fail("el-labeling", format!("{f:?}"));
                    }
                    if !chain_descents(upper_chain(&l, emb).vertices(), &lam).is_empty() {
                        fail("upper-chain", "the upper chain has a descent".into());
                    }
                    match (beta_via_chains(&l, &lam, budget.max_enumeration), beta.as_ref()) {
                        (Ok(bc), Ok(bp)) => {
                            if bc.get(&DescentSet::default()) != 1u32.into() {
                                fail("upper-chain-unique", format!("{} increasing chains", bc.get(&DescentSet::default())));
                            }
                            if &bc != bp {
                                fail("chain-flag-vector", "differs from the extension flag vector".into());
                            }
                        }
                        (Err(e), _) => fail("chain-flag-vector", e.to_string()),
                        _ => {}
                    }
                }
            }
            Err(e) => fail("labeling", e.to_string()),
        }
    }

    let simple = l.is_simple();
    if !simple {
        let mut sum = 0;
        for b in l.simple_blocks() {
            match flag_beta(b.lattice.base(), budget.max_enumeration) {
                Ok(fb) => sum += regularity_from_h(&h_from_beta(&fb)),
                Err(e) => fail("additivity", e.to_string()),
            }
        }
        if sum != reg {
            fail("additivity", format!("blocks sum to {sum}, lattice has {reg}"));
        }
    }

    let linres = has_linear_resolution(&l);
    if simple {
        let expected = reg == 1 && !l.incomparable_pairs().is_empty();
        if linres.holds() != expected {
            fail("linear-resolution", format!("{linres} but reg {reg}"));
        }
        if let crate::engine::LinearResolution::Grid { a } = linres {
            let grid = fixtures::divisor_lattice_2_3a(a).expect("a >= 1");
            if canonical_form(&grid) != form {
                fail("linear-resolution-shape", format!("claimed a = {a}"));
            }
        }
    }

    PosetOutcome {
        form,
        poset,
        elements: l.len(),
        reg,
        lower_bound: report.lower_bound,
        upper_bound: report.upper_bound,
        planar: planarity.is_planar(),
        simple,
        linear: linres.holds(),
        method: report.method,
        failures,
    }
}
