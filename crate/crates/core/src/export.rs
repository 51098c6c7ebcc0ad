//! Join-meet binomials, their reverse-lex initial ideal, and exports to
//! computer-algebra scripts and Hasse-diagram graph files.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::lattice::DistLattice;
use crate::planar::{EdgeLabeling, PlanarEmbedding};

/// `x_a x_b - x_{a∨b} x_{a∧b}` for an incomparable pair `a < b` (as
/// indices).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BinomialGenerator {
    pub a: usize,
    pub b: usize,
    pub join: usize,
    pub meet: usize,
}

/// The squarefree monomial `x_a x_b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MonomialGenerator {
    pub a: usize,
    pub b: usize,
}

/// A total order on the lattice elements used for the variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableOrder(Vec<usize>);

impl VariableOrder {
    /// Canonical element order: rank, then subset-lex.
    pub fn canonical(l: &DistLattice) -> Self {
        VariableOrder((0..l.len()).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Whether `x < y` in `L` always puts `x` first.
    pub fn is_linear_extension(&self, l: &DistLattice) -> bool {
        let mut pos = vec![usize::MAX; l.len()];
        for (k, &x) in self.0.iter().enumerate() {
            if x >= l.len() || pos[x] != usize::MAX {
                return false;
            }
            pos[x] = k;
        }
        pos.iter().all(|&p| p != usize::MAX) && l.edges().all(|(a, b)| pos[a] < pos[b])
    }
}

pub fn joinmeet_generators(l: &DistLattice) -> Vec<BinomialGenerator> {
    l.incomparable_pairs()
        .into_iter()
        .map(|(a, b)| BinomialGenerator { a, b, join: l.join(a, b), meet: l.meet(a, b) })
        .collect()
}

pub fn initial_ideal(l: &DistLattice) -> Vec<MonomialGenerator> {
    l.incomparable_pairs().into_iter().map(|(a, b)| MonomialGenerator { a, b }).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Dialect {
    #[default]
    Generic,
    Macaulay2,
    Singular,
}

impl Dialect {
    pub fn name(self) -> &'static str {
        match self {
            Dialect::Generic => "generic",
            Dialect::Macaulay2 => "macaulay2",
            Dialect::Singular => "singular",
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Dialect::Generic => "txt",
            Dialect::Macaulay2 => "m2",
            Dialect::Singular => "sing",
        }
    }

    fn comment(self) -> &'static str {
        match self {
            Dialect::Generic => "#",
            Dialect::Macaulay2 => "--",
            Dialect::Singular => "//",
        }
    }

    /// Variable name for element `i`. Macaulay2 reads `_` as subscripting,
    /// so it gets `x0x2` in place of `x_0_2`.
    pub fn variable(self, l: &DistLattice, i: usize) -> String {
        let key = l.element_key(i);
        match self {
            Dialect::Macaulay2 => format!("x{}", key.replace('_', "x")),
            _ => format!("x_{key}"),
        }
    }
}

impl FromStr for Dialect {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "generic" => Ok(Dialect::Generic),
            "macaulay2" | "m2" => Ok(Dialect::Macaulay2),
            "singular" => Ok(Dialect::Singular),
            _ => Err(Error::UnsupportedDialect(s.to_string())),
        }
    }
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Hex SHA-256 of the canonical text of `L`.
pub fn content_hash(l: &DistLattice) -> String {
    let digest = Sha256::digest(l.canonical_text().as_bytes());
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        write!(s, "{b:02x}").unwrap();
        s
    })
}

/// `<stem>-<first 12 hex digits of the content hash>.<ext>`.
pub fn file_name(l: &DistLattice, stem: &str, ext: &str) -> String {
    format!("{stem}-{}.{ext}", &content_hash(l)[..12])
}

/// Script declaring one variable per element in canonical order, the
/// join-meet ideal, and a regularity query.
pub fn export_cas_script(l: &DistLattice, dialect: Dialect) -> String {
    let c = dialect.comment();
    let order = VariableOrder::canonical(l);
    let vars: Vec<String> = order.as_slice().iter().map(|&i| dialect.variable(l, i)).collect();
    let gens = joinmeet_generators(l);
    let v = |i: usize| dialect.variable(l, i);
    let binomials: Vec<String> =
        gens.iter().map(|g| format!("{}*{} - {}*{}", v(g.a), v(g.b), v(g.join), v(g.meet))).collect();

    let mut out = String::new();
    writeln!(out, "{c} join-meet ideal of a distributive lattice").unwrap();
    writeln!(out, "{c} dialect: {dialect}").unwrap();
    writeln!(out, "{c} elements: {}, join-irreducibles: {}", l.len(), l.height()).unwrap();
    writeln!(out, "{c} content hash: {}", content_hash(l)).unwrap();
    writeln!(out, "{c} variable order (rank, then subset-lex; a linear extension of the lattice):").unwrap();
    for &i in order.as_slice() {
        writeln!(out, "{c}   {} = {}", v(i), l.element_name(i)).unwrap();
    }
    writeln!(out, "{c} generators: {}", gens.len()).unwrap();
    if gens.is_empty() {
        writeln!(out, "{c} zero ideal: the lattice is a chain, there are no incomparable pairs").unwrap();
    }
    match dialect {
        Dialect::Generic => {
            writeln!(out, "variables: {}", vars.join(", ")).unwrap();
            writeln!(out, "order: grevlex").unwrap();
            if binomials.is_empty() {
                writeln!(out, "ideal: 0").unwrap();
            } else {
                writeln!(out, "ideal:").unwrap();
                for b in &binomials {
                    writeln!(out, "  {b}").unwrap();
                }
            }
            writeln!(out, "initial:").unwrap();
            for m in initial_ideal(l) {
                writeln!(out, "  {}*{}", v(m.a), v(m.b)).unwrap();
            }
            writeln!(out, "query: regularity(quotient)").unwrap();
        }
        Dialect::Macaulay2 => {
            writeln!(out, "R = QQ[{}, MonomialOrder => GRevLex];", vars.join(", ")).unwrap();
            if binomials.is_empty() {
                writeln!(out, "I = ideal(0_R);").unwrap();
            } else {
                writeln!(out, "I = ideal({});", binomials.join(", ")).unwrap();
            }
            writeln!(out, "print regularity(R/I);").unwrap();
        }
        Dialect::Singular => {
            writeln!(out, "ring R = 0, ({}), dp;", vars.join(", ")).unwrap();
            if binomials.is_empty() {
                writeln!(out, "ideal I = 0;").unwrap();
            } else {
                writeln!(out, "ideal I = {};", binomials.join(", ")).unwrap();
            }
            writeln!(out, "{c} regularity of R/I is one less than that of I").unwrap();
            writeln!(out, "resolution re = mres(I, 0);").unwrap();
            writeln!(out, "print(regularity(re) - 1);").unwrap();
        }
    }
    out
}

/// Graphviz description of the Hasse diagram. Nodes are grouped by rank;
/// an embedding pins positions and a labeling annotates edges.
pub fn export_hasse_graph(l: &DistLattice, emb: Option<&PlanarEmbedding>, lam: Option<&EdgeLabeling>) -> String {
    let mut out = String::new();
    writeln!(out, "digraph hasse {{").unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=box, fontsize=10];").unwrap();
    for r in 0..=l.height() {
        let ids: Vec<String> = l.rank_range(r).map(|i| format!("n{i}")).collect();
        writeln!(out, "  {{ rank=same; {}; }}", ids.join("; ")).unwrap();
    }
    for i in 0..l.len() {
        let mut attrs = format!("label=\"{}\"", l.element_name(i));
        if let Some(e) = emb {
            let (x, y) = e.coord(i);
            write!(attrs, ", pos=\"{x},{y}!\"").unwrap();
        }
        writeln!(out, "  n{i} [{attrs}];").unwrap();
    }
    for (a, b) in l.edges() {
        match lam.and_then(|lam| lam.label(a, b)) {
            Some(k) => writeln!(out, "  n{a} -> n{b} [label=\"{k}\"];").unwrap(),
            None => writeln!(out, "  n{a} -> n{b};").unwrap(),
        }
    }
    writeln!(out, "}}").unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::planar::{build_labeling, try_embed};
    use crate::poset::Poset;

    fn lattice(p: Poset) -> DistLattice {
        DistLattice::birkhoff(&p).unwrap()
    }

    #[test]
    fn generator_counts() {
        assert!(joinmeet_generators(&lattice(Poset::chain(3).unwrap())).is_empty());
        let d = lattice(Poset::antichain(2).unwrap());
        assert_eq!(joinmeet_generators(&d), vec![BinomialGenerator { a: 1, b: 2, join: 3, meet: 0 }]);
        assert_eq!(initial_ideal(&d), vec![MonomialGenerator { a: 1, b: 2 }]);
        let b3 = lattice(Poset::antichain(3).unwrap());
        assert_eq!(joinmeet_generators(&b3).len(), 9);
        assert_eq!(initial_ideal(&b3).len(), 9);
    }

    #[test]
    fn canonical_order_is_linear_extension() {
        let l = lattice(fixtures::example());
        assert!(VariableOrder::canonical(&l).is_linear_extension(&l));
        assert!(!VariableOrder((0..l.len()).rev().collect()).is_linear_extension(&l));
    }

    #[test]
    fn diamond_script() {
        let d = lattice(Poset::antichain(2).unwrap());
        let s = export_cas_script(&d, Dialect::Generic);
        assert!(s.contains("variables: x_bot, x_0, x_1, x_0_1\n"));
        assert!(s.contains("  x_0*x_1 - x_0_1*x_bot\n"));
        assert!(s.contains("query: regularity"));
        assert_eq!(s, export_cas_script(&d, Dialect::Generic));
        let m2 = export_cas_script(&d, Dialect::Macaulay2);
        assert!(m2.contains("I = ideal(x0*x1 - x0x1*xbot);"));
        let sg = export_cas_script(&d, Dialect::Singular);
        assert!(sg.contains("ring R = 0, (x_bot, x_0, x_1, x_0_1), dp;"));
    }

    #[test]
    fn chain_script_flags_zero_ideal() {
        let s = export_cas_script(&lattice(Poset::chain(2).unwrap()), Dialect::Generic);
        assert!(s.contains("# zero ideal"));
        assert!(s.contains("ideal: 0\n"));
    }

    #[test]
    fn dialect_parsing() {
        assert_eq!("M2".parse::<Dialect>().unwrap(), Dialect::Macaulay2);
        assert_eq!("generic".parse::<Dialect>().unwrap(), Dialect::Generic);
        assert_eq!("maple".parse::<Dialect>().unwrap_err(), Error::UnsupportedDialect("maple".into()));
    }

    #[test]
    fn hasse_graph_of_diamond() {
        let d = lattice(Poset::antichain(2).unwrap());
        let emb = try_embed(&d).embedding().cloned().unwrap();
        let lam = build_labeling(&d, &emb).unwrap();
        let g = export_hasse_graph(&d, Some(&emb), Some(&lam));
        assert_eq!(g.matches(" -> ").count(), 4);
        assert_eq!(g.matches("pos=").count(), 4);
        let labels: std::collections::BTreeSet<&str> =
            g.lines().filter_map(|l| l.split("label=\"").nth(1)).filter(|l| l.ends_with("\"];") && l.len() < 5).collect();
        assert_eq!(labels.len(), 2);
        let plain = export_hasse_graph(&d, None, None);
        assert!(!plain.contains("pos="));
        assert!(plain.contains("{ rank=same; n1; n2; }"));
    }

    #[test]
    fn hash_and_file_name_are_stable() {
        let d = lattice(Poset::antichain(2).unwrap());
        assert_eq!(content_hash(&d).len(), 64);
        assert_eq!(content_hash(&d), content_hash(&lattice(Poset::antichain(2).unwrap())));
        assert_ne!(content_hash(&d), content_hash(&lattice(Poset::chain(2).unwrap())));
        assert!(file_name(&d, "diamond", "dot").starts_with("diamond-"));
    }
}
