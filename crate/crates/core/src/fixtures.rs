//! Named posets whose down-set lattices are the standard test shapes.

use crate::error::{Error, Result};
use crate::poset::{parse_poset, Poset};

/// The 5-element poset `p1<p4, p2<p4, p2<p5, p3<p5`: width 3, regularity 3.
pub fn example() -> Poset {
    parse_poset("p1; p2; p3; p4; p5\np1<p4; p2<p4; p2<p5; p3<p5").expect("fixture parses")
}

/// Join-irreducibles of the Boolean lattice `B_n`.
pub fn boolean(n: usize) -> Result<Poset> {
    Poset::antichain(n)
}

/// Join-irreducibles of the `a × b` grid (product of chains with `a` and
/// `b` elements).
pub fn grid(a: usize, b: usize) -> Result<Poset> {
    match (a.saturating_sub(1), b.saturating_sub(1)) {
        (0, 0) => Err(Error::EmptyPoset),
        (0, k) | (k, 0) => Poset::chain(k),
        (x, y) => Poset::chain(x)?.disjoint_union(&Poset::chain(y)?),
    }
}

/// Join-irreducibles of the `2 × (a+1)` grid, the divisor lattice of `2·3^a`.
pub fn divisor_lattice_2_3a(a: usize) -> Result<Poset> {
    grid(2, a + 1)
}

/// A staircase of `squares` diamonds, consecutive ones joined by a chain of
/// `connector` cut edges (`0` glues them corner to corner). Zero squares
/// gives a single edge.
pub fn cyclic(squares: usize, connector: usize) -> Result<Poset> {
    if squares == 0 {
        return Poset::chain(connector.max(1));
    }
    let diamond = Poset::antichain(2)?;
    let mut p = diamond.clone();
    for _ in 1..squares {
        if connector > 0 {
            p = p.ordinal_sum(&Poset::chain(connector)?)?;
        }
        p = p.ordinal_sum(&diamond)?;
    }
    Ok(p)
}

/// Resolves builtin names such as `antichain 4`, `chain:3`, `grid 2x3`,
/// `boolean 3`, `cyclic 3` / `cyclic 3,1` (squares, connector length) and
/// `example`.
pub fn builtin(name: &str) -> Result<Poset> {
    let spec = name.trim();
    let split = spec.find(|c: char| c.is_ascii_digit() || c.is_whitespace() || c == ':' || c == '=');
    let (name, args) = match split {
        Some(k) => (&spec[..k], spec[k..].trim_start_matches(|c: char| c.is_whitespace() || c == ':' || c == '=')),
        None => (spec, ""),
    };
    let unknown = || Error::UnknownBuiltin(spec.to_string());
    let number = |s: &str| s.trim().parse::<usize>().map_err(|_| unknown());
    match name.to_ascii_lowercase().as_str() {
        "example" => Ok(example()),
        "antichain" => Poset::antichain(number(args)?),
        "chain" => Poset::chain(number(args)?),
        "boolean" => boolean(number(args)?),
        "grid" => {
            let (a, b) = args.split_once(['x', 'X']).ok_or_else(unknown)?;
            grid(number(a)?, number(b)?)
        }
        "cyclic" => match args.split_once(',') {
            Some((r, c)) => cyclic(number(r)?, number(c)?),
            None => cyclic(number(args)?, 0),
        },
        _ => Err(unknown()),
    }
}
