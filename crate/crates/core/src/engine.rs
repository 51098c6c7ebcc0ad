//! Regularity dispatcher.
//!
//! A lattice is split at its cut edges into simple blocks; the regularity is
//! the sum over blocks. Each block is resolved by the first method that
//! applies: the Boolean closed form, the planar formula (squares of a cyclic
//! sublattice, cross-checked against the maximal descent count), the degree
//! of the h-vector when the extension count fits the budget, and otherwise
//! only the width bounds.

use std::fmt::{self, Write as _};

use rayon::prelude::*;

use crate::error::Error;
use crate::hilbert::{
    f_vector, flag_run, h_from_beta, h_from_f, regularity_from_h, DEFAULT_ENUMERATION_CAP,
};
use crate::lattice::{Block, DistLattice, DEFAULT_LATTICE_CAP};
use crate::planar::{
    build_labeling, chain_descents, cyclic_from_chain, max_cyclic_squares, max_descent_cardinality,
    try_embed, upper_chain, verify_el, PlanarEmbedding,
};
use crate::poset::Poset;

/// Caps on the work a single analysis may do.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest lattice that will be built.
    pub max_lattice: usize,
    /// Largest number of linear extensions (or `|L|^2` pairs) enumerated.
    pub max_enumeration: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_lattice: DEFAULT_LATTICE_CAP, max_enumeration: DEFAULT_ENUMERATION_CAP }
    }
}

/// `Production` trusts closed forms; `Verify` recomputes them independently
/// and records the comparison as a [`CrossCheck`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Production,
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    PlanarFormula,
    HVector,
    BoundsOnly,
    BooleanClosedForm,
    AdditiveComposition,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::PlanarFormula => "planar-formula",
            Method::HVector => "h-vector",
            Method::BoundsOnly => "bounds-only",
            Method::BooleanClosedForm => "boolean-closed-form",
            Method::AdditiveComposition => "additive-composition",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Recognized block shapes with a closed-form regularity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// Lattice of subsets of an `n`-set.
    Boolean { n: usize },
    /// A staircase of squares covering the whole block.
    Cyclic { squares: usize },
    /// Product of chains with `rows <= cols` elements.
    Grid { rows: usize, cols: usize },
    General,
}

impl Shape {
    pub fn closed_form(self) -> Option<usize> {
        match self {
            Shape::Boolean { n } => Some(boolean_regularity(n)),
            Shape::Cyclic { squares } => Some(cyclic_regularity(squares)),
            Shape::Grid { rows, cols } => Some(rows.min(cols) - 1),
            Shape::General => None,
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Boolean { n } => write!(f, "boolean({n})"),
            Shape::Cyclic { squares } => write!(f, "cyclic({squares})"),
            Shape::Grid { rows, cols } => write!(f, "grid({rows}x{cols})"),
            Shape::General => f.write_str("general"),
        }
    }
}

/// Witness data; element names refer to the analysed lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Maximal chain of the block with `descents` descents.
    Chain { elements: Vec<String>, descents: usize },
    /// Cyclic sublattice with `squares` squares.
    Cyclic { squares: usize, elements: Vec<String> },
    /// Linear extension of the block's join-irreducibles with the largest
    /// descent count.
    Extension { sequence: Vec<String>, descents: String },
    /// Pairwise incomparable join-irreducibles behind the lower bound.
    Antichain { elements: String },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Chain { .. } => "chain",
            Certificate::Cyclic { .. } => "cyclic",
            Certificate::Extension { .. } => "extension",
            Certificate::Antichain { .. } => "antichain",
        }
    }

    fn body(&self) -> String {
        match self {
            Certificate::Chain { elements, descents } => format!("{} (descents: {descents})", elements.join(" ")),
            Certificate::Cyclic { squares, elements } => format!("{} (squares: {squares})", elements.join(" ")),
            Certificate::Extension { sequence, descents } => format!("{} (descents {descents})", sequence.join(" ")),
            Certificate::Antichain { elements } => elements.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CrossCheck {
    fn equal(name: &str, left: usize, right: usize) -> Self {
        CrossCheck { name: name.to_string(), passed: left == right, detail: format!("{left} vs {right}") }
    }

    fn flag(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        CrossCheck { name: name.to_string(), passed, detail: detail.into() }
    }
}

#[derive(Clone, Debug)]
pub struct BlockReport {
    /// Bottom and top of the block, as names in the analysed lattice.
    pub lower: String,
    pub upper: String,
    pub size: usize,
    pub join_irreducibles: usize,
    pub planar: bool,
    pub shape: Shape,
    pub value: Option<usize>,
    pub lower_bound: usize,
    pub upper_bound: usize,
    pub method: Method,
    pub certificates: Vec<Certificate>,
    pub checks: Vec<CrossCheck>,
}

#[derive(Clone, Debug)]
pub struct RegularityReport {
    pub value: Option<usize>,
    pub lower_bound: usize,
    pub upper_bound: usize,
    pub method: Method,
    pub elements: usize,
    pub join_irreducibles: usize,
    pub cut_edges: usize,
    pub blocks: Vec<BlockReport>,
}

impl RegularityReport {
    pub fn certificates(&self) -> impl Iterator<Item = &Certificate> {
        self.blocks.iter().flat_map(|b| b.certificates.iter())
    }

    pub fn checks(&self) -> impl Iterator<Item = &CrossCheck> {
        self.blocks.iter().flat_map(|b| b.checks.iter())
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks().all(|c| c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "lattice: {} elements, {} join-irreducibles, {} cut edges",
            self.elements, self.join_irreducibles, self.cut_edges
        )
        .unwrap();
        match self.value {
            Some(v) => writeln!(out, "value: {v} ({})", self.method).unwrap(),
            None => writeln!(out, "value: unknown ({})", self.method).unwrap(),
        }
        writeln!(out, "bounds: [{}, {}]", self.lower_bound, self.upper_bound).unwrap();
        for (k, b) in self.blocks.iter().enumerate() {
            let value = b.value.map_or_else(|| "unknown".to_string(), |v| v.to_string());
            writeln!(
                out,
                "block {k}: [{}, {}] {} elements, {}, {}, value {value} ({}), bounds [{}, {}]",
                b.lower,
                b.upper,
                b.size,
                if b.planar { "planar" } else { "not planar" },
                b.shape,
                b.method,
                b.lower_bound,
                b.upper_bound
            )
            .unwrap();
            for c in &b.certificates {
                writeln!(out, "  certificate {}: {}", c.kind(), c.body()).unwrap();
            }
            for c in &b.checks {
                writeln!(out, "  check {}: {} ({})", c.name, if c.passed { "pass" } else { "FAIL" }, c.detail).unwrap();
            }
        }
        out
    }

    /// Line-oriented `key=value` form.
    pub fn to_records(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: &dyn fmt::Display| writeln!(out, "{k}={v}").unwrap();
        put("method", &self.method);
        put("value", &self.value.map_or_else(|| "none".to_string(), |v| v.to_string()));
        put("lower_bound", &self.lower_bound);
        put("upper_bound", &self.upper_bound);
        put("elements", &self.elements);
        put("join_irreducibles", &self.join_irreducibles);
        put("cut_edges", &self.cut_edges);
        put("blocks", &self.blocks.len());
        for (k, b) in self.blocks.iter().enumerate() {
            let p = format!("block.{k}");
            put(&format!("{p}.lower"), &b.lower);
            put(&format!("{p}.upper"), &b.upper);
            put(&format!("{p}.size"), &b.size);
            put(&format!("{p}.planar"), &b.planar);
            put(&format!("{p}.shape"), &b.shape);
            put(&format!("{p}.method"), &b.method);
            put(&format!("{p}.value"), &b.value.map_or_else(|| "none".to_string(), |v| v.to_string()));
            put(&format!("{p}.lower_bound"), &b.lower_bound);
            put(&format!("{p}.upper_bound"), &b.upper_bound);
            for (j, c) in b.certificates.iter().enumerate() {
                put(&format!("{p}.certificate.{j}.{}", c.kind()), &c.body());
            }
            for (j, c) in b.checks.iter().enumerate() {
                put(&format!("{p}.check.{j}.{}", c.name), &c.passed);
            }
        }
        out
    }
}

pub fn boolean_regularity(n: usize) -> usize {
    n.saturating_sub(1)
}

pub fn cyclic_regularity(r: usize) -> usize {
    r
}

/// `(width - 1, |P| - 1)`, clamped at zero for the empty poset.
pub fn nonplanar_bounds(p: &Poset) -> (usize, usize) {
    (p.max_antichain_size().saturating_sub(1), p.len().saturating_sub(1))
}

/// Regularity of the lattice of down-sets of `p`, or a bounds-only report
/// when the lattice exceeds the budget.
pub fn regularity_of_poset(p: &Poset, budget: &Budget, mode: Mode) -> RegularityReport {
    match DistLattice::birkhoff_with_cap(p, budget.max_lattice) {
        Ok(l) => regularity(&l, budget, mode),
        Err(_) => {
            let (lower_bound, upper_bound) = nonplanar_bounds(p);
            RegularityReport {
                value: None,
                lower_bound,
                upper_bound,
                method: Method::BoundsOnly,
                elements: 0,
                join_irreducibles: p.len(),
                cut_edges: 0,
                blocks: Vec::new(),
            }
        }
    }
}

pub fn regularity(l: &DistLattice, budget: &Budget, mode: Mode) -> RegularityReport {
    let decomposition = l.decomposition();
    let blocks = l.simple_blocks();
    let reports: Vec<BlockReport> = blocks.par_iter().map(|b| block_report(l, b, budget, mode)).collect();

    let value = reports.iter().map(|b| b.value).sum::<Option<usize>>();
    let lower_bound = reports.iter().map(|b| b.lower_bound).sum();
    let upper_bound = reports.iter().map(|b| b.upper_bound).sum();
    let method = if decomposition.cut_edges.is_empty() && reports.len() == 1 {
        reports[0].method
    } else if value.is_none() {
        Method::BoundsOnly
    } else {
        Method::AdditiveComposition
    };
    RegularityReport {
        value,
        lower_bound,
        upper_bound,
        method,
        elements: l.len(),
        join_irreducibles: l.height(),
        cut_edges: decomposition.cut_edges.len(),
        blocks: reports,
    }
}

fn block_report(parent: &DistLattice, block: &Block, budget: &Budget, mode: Mode) -> BlockReport {
    let l = &block.lattice;
    let base = l.base();
    let (lower_bound, upper_bound) = nonplanar_bounds(base);
    let lift_names = |vs: &[usize]| -> Vec<String> {
        vs.iter().map(|&x| parent.element_name(block.lift(parent, x))).collect()
    };
    let parent_base_names = |set: crate::set::ElemSet| -> String {
        let lifted = set.iter().map(|k| block.base_elements()[k]).collect();
        parent.base().format_set(lifted)
    };
    let mut certificates = vec![Certificate::Antichain { elements: parent_base_names(base.max_antichain()) }];
    let mut checks = Vec::new();
    let planarity = try_embed(l);
    let emb = planarity.embedding();
    let shape = classify_shape(l, emb);

    let mut value = None;
    let mut method = Method::BoundsOnly;

    if let Shape::Boolean { n } = shape {
        value = Some(boolean_regularity(n));
        method = Method::BooleanClosedForm;
    }

    if let Some(emb) = emb {
        if let Some(planar) = planar_analysis(l, emb, mode, &mut checks) {
            certificates.push(Certificate::Cyclic { squares: planar.squares, elements: lift_names(&planar.cyclic) });
            certificates.push(Certificate::Chain { elements: lift_names(&planar.chain), descents: planar.descents });
            if value.is_none() {
                value = Some(planar.squares);
                method = Method::PlanarFormula;
            }
        }
    }

    let want_h = value.is_none() || mode == Mode::Verify;
    if want_h {
        match flag_run(base, budget.max_enumeration) {
            Ok(run) => {
                let h = h_from_beta(&run.beta);
                let reg = regularity_from_h(&h);
                let seq = run
                    .witness
                    .as_slice()
                    .iter()
                    .map(|&k| parent.base().name(block.base_elements()[k]).to_string())
                    .collect();
                certificates.push(Certificate::Extension { sequence: seq, descents: run.witness_descents.to_string() });
                match value {
                    None => {
                        value = Some(reg);
                        method = Method::HVector;
                    }
                    Some(v) => checks.push(CrossCheck::equal(&format!("{method}-equals-h-degree"), v, reg)),
                }
                if mode == Mode::Verify {
                    match f_vector(l, budget.max_enumeration).and_then(|f| h_from_f(&f)) {
                        Ok(hf) => checks.push(CrossCheck::flag(
                            "flag-and-chain-h-agree",
                            hf == h,
                            format!("{h} vs {hf}"),
                        )),
                        Err(Error::EnumerationCap { .. }) => {}
                        Err(e) => checks.push(CrossCheck::flag("flag-and-chain-h-agree", false, e.to_string())),
                    }
                }
            }
            Err(Error::EnumerationCap { .. }) => {}
            Err(e) => checks.push(CrossCheck::flag("h-vector", false, e.to_string())),
        }
    }

    if mode == Mode::Verify {
        if let (Some(closed), Some(v)) = (shape.closed_form(), value) {
            checks.push(CrossCheck::equal("closed-form", closed, v));
        }
        if let Some(v) = value {
            checks.push(CrossCheck::flag(
                "within-bounds",
                lower_bound <= v && v <= upper_bound,
                format!("{lower_bound} <= {v} <= {upper_bound}"),
            ));
        }
    }

    BlockReport {
        lower: parent.element_name(block.lower),
        upper: parent.element_name(block.upper),
        size: l.len(),
        join_irreducibles: base.len(),
        planar: planarity.is_planar(),
        shape,
        value,
        lower_bound,
        upper_bound,
        method,
        certificates,
        checks,
    }
}

struct PlanarOutcome {
    squares: usize,
    cyclic: Vec<usize>,
    descents: usize,
    chain: Vec<usize>,
}

fn planar_analysis(
    l: &DistLattice,
    emb: &PlanarEmbedding,
    mode: Mode,
    checks: &mut Vec<CrossCheck>,
) -> Option<PlanarOutcome> {
    let fail = |checks: &mut Vec<CrossCheck>, name: &str, e: Error| {
        checks.push(CrossCheck::flag(name, false, e.to_string()));
    };
    let lam = match build_labeling(l, emb) {
        Ok(lam) => lam,
        Err(e) => {
            fail(checks, "labeling", e);
            return None;
        }
    };
    let (squares, cyc) = match max_cyclic_squares(l, emb) {
        Ok(x) => x,
        Err(e) => {
            fail(checks, "cyclic-sublattice", e);
            return None;
        }
    };
    let (descents, chain) = max_descent_cardinality(l, &lam);
    checks.push(CrossCheck::equal("squares-equal-descents", squares, descents));
    if mode == Mode::Verify {
        checks.push(CrossCheck::flag(
            "cyclic-sublattice-valid",
            cyc.validate(l).is_ok(),
            format!("squares: {}", cyc.len()),
        ));
        match cyclic_from_chain(l, chain.vertices(), &lam, emb) {
            Ok(c) => checks.push(CrossCheck::equal("descent-chain-spans-cyclic", c.len(), descents)),
            Err(e) => fail(checks, "descent-chain-spans-cyclic", e),
        }
        let el = verify_el(l, &lam);
        checks.push(CrossCheck::flag("el-labeling", el.is_ok(), el.err().map_or("ok".into(), |f| format!("{f:?}"))));
        let c0 = upper_chain(l, emb);
        checks.push(CrossCheck::flag(
            "upper-chain-increasing",
            chain_descents(c0.vertices(), &lam).is_empty(),
            "descents of the upper chain",
        ));
    }
    Some(PlanarOutcome { squares, cyclic: cyc.elements(), descents, chain: chain.vertices().to_vec() })
}

fn classify_shape(l: &DistLattice, emb: Option<&PlanarEmbedding>) -> Shape {
    let base = l.base();
    if base.is_antichain() {
        return Shape::Boolean { n: base.len() };
    }
    let Some(emb) = emb else {
        return Shape::General;
    };
    if let Ok((r, cyc)) = max_cyclic_squares(l, emb) {
        if r > 0 && cyc.elements().len() == l.len() {
            return Shape::Cyclic { squares: r };
        }
    }
    match grid_sides(base, emb) {
        Some((rows, cols)) => Shape::Grid { rows, cols },
        None => Shape::General,
    }
}

/// Sides of the grid when the join-irreducibles are two mutually
/// incomparable chains, smaller side first.
fn grid_sides(base: &Poset, emb: &PlanarEmbedding) -> Option<(usize, usize)> {
    let (h, v) = (emb.horizontal_chain(), emb.vertical_chain());
    if h.is_empty() || v.is_empty() {
        return None;
    }
    let separate = h.iter().all(|&a| v.iter().all(|&b| !base.comparable(a, b)));
    separate.then(|| {
        let (x, y) = (h.len() + 1, v.len() + 1);
        (x.min(y), x.max(y))
    })
}

/// Outcome of the linear-resolution test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearResolution {
    /// The single block is the `2 × (a+1)` grid.
    Grid { a: usize },
    /// No incomparable pairs: the defining ideal is zero.
    NoGenerators,
    /// Three pairwise incomparable join-irreducibles force regularity at
    /// least two.
    WideAntichain { witness: String },
    /// Two or more non-trivial blocks, each contributing at least one.
    MultipleBlocks { count: usize },
    /// A single planar block that is not a `2 × (a+1)` grid.
    NotGrid { reg: usize },
}

impl LinearResolution {
    pub fn holds(&self) -> bool {
        matches!(self, LinearResolution::Grid { .. })
    }
}

impl fmt::Display for LinearResolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinearResolution::Grid { a } => write!(f, "linear: 2x{} grid (a = {a})", a + 1),
            LinearResolution::NoGenerators => f.write_str("no generators (zero ideal)"),
            LinearResolution::WideAntichain { witness } => write!(f, "not linear: antichain {witness}"),
            LinearResolution::MultipleBlocks { count } => write!(f, "not linear: {count} blocks"),
            LinearResolution::NotGrid { reg } => write!(f, "not linear: regularity {reg}"),
        }
    }
}

pub fn has_linear_resolution(l: &DistLattice) -> LinearResolution {
    let base = l.base();
    if base.is_chain() {
        return LinearResolution::NoGenerators;
    }
    let antichain = base.max_antichain();
    if antichain.len() >= 3 {
        return LinearResolution::WideAntichain { witness: base.format_set(antichain) };
    }
    let blocks = l.simple_blocks();
    if blocks.len() != 1 {
        return LinearResolution::MultipleBlocks { count: blocks.len() };
    }
    let block = &blocks[0].lattice;
    let emb = try_embed(block).embedding().cloned().expect("width two is planar");
    match grid_sides(block.base(), &emb) {
        Some((2, cols)) => LinearResolution::Grid { a: cols - 1 },
        _ => {
            let reg = max_cyclic_squares(block, &emb).map(|(r, _)| r).unwrap_or(0);
            LinearResolution::NotGrid { reg }
        }
    }
}
