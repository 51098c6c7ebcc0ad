//! Acceptance gate. Prints one line per criterion and exits nonzero when
//! any criterion fails. All comparisons are exact integer equalities; the
//! wall-clock limit of each criterion is part of its pass condition.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hibireg_core::census::{canonical_form, census, CanonicalForm};
use hibireg_core::engine::{has_linear_resolution, regularity, Budget, Mode};
use hibireg_core::hilbert::{
    beta_via_chains, f_vector, flag_beta, h_as_u64, h_from_beta, h_from_f, regularity_from_h, DEFAULT_ENUMERATION_CAP,
};
use hibireg_core::planar::{
    build_labeling, chain_descents, max_cyclic_squares, max_descent_cardinality, saturated_chains, try_embed,
    upper_chain, verify_el, verify_el_exhaustive,
};
use hibireg_core::sweep::sweep_corpus;
use hibireg_core::{fixtures, DistLattice, Poset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CAP: u64 = DEFAULT_ENUMERATION_CAP;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn deg_h(p: &Poset) -> usize {
    regularity_from_h(&h_from_beta(&flag_beta(p, CAP).expect("within cap")))
}

fn lattice(p: &Poset) -> DistLattice {
    DistLattice::birkhoff(p).expect("small lattice")
}

/// Largest antichain by checking every subset.
fn brute_width(p: &Poset) -> usize {
    let n = p.len();
    (0u32..1 << n)
        .filter(|&mask| {
            let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            members.iter().all(|&a| members.iter().all(|&b| a == b || !p.comparable(a, b)))
        })
        .map(|mask| mask.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Descent counts over all permutations of `n` letters.
fn eulerian(n: usize) -> Vec<u64> {
    fn walk(n: usize, perm: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut [u64]) {
        if perm.len() == n {
            let d = perm.windows(2).filter(|w| w[0] > w[1]).count();
            out[d] += 1;
            return;
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                perm.push(x);
                walk(n, perm, used, out);
                perm.pop();
                used[x] = false;
            }
        }
    }
    let mut out = vec![0; n.max(1)];
    walk(n, &mut Vec::new(), &mut vec![false; n], &mut out);
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    out
}

fn criterion_boolean() -> Outcome {
    for n in 1..=6 {
        let p = fixtures::boolean(n).unwrap();
        let hb = h_from_beta(&flag_beta(&p, CAP).unwrap());
        let hf = h_from_f(&f_vector(&lattice(&p), CAP).unwrap()).unwrap();
        ensure(hb == hf, || format!("B_{n}: {hb} vs {hf}"))?;
        ensure(h_as_u64(&hb) == eulerian(n), || format!("B_{n}: {hb} is not Eulerian"))?;
        ensure(regularity_from_h(&hb) == n - 1, || format!("B_{n}: deg h = {}", hb.degree()))?;
        let r = regularity(&lattice(&p), &Budget::default(), Mode::Verify);
        ensure(r.value == Some(n - 1) && r.all_checks_pass(), || format!("B_{n}: engine {:?}", r.value))?;
    }
    Ok("deg h(B_n) = n-1 for n = 1..6, both h routes equal the Eulerian distribution".into())
}

fn criterion_planar(corpus: &[Vec<Poset>]) -> Outcome {
    let mut checked = 0;
    for p in corpus.iter().take(8).flatten().filter(|p| brute_width(p) <= 2) {
        let l = lattice(p);
        let emb = try_embed(&l).embedding().cloned().ok_or_else(|| format!("width 2 not embedded:\n{}", p.to_text()))?;
        if !l.is_simple() {
            continue;
        }
        let lam = build_labeling(&l, &emb).map_err(|e| e.to_string())?;
        let (squares, _) = max_cyclic_squares(&l, &emb).map_err(|e| e.to_string())?;
        let (descents, _) = max_descent_cardinality(&l, &lam);
        let h = deg_h(p);
        ensure(squares == descents && descents == h, || {
            format!("squares {squares}, descents {descents}, deg h {h} on\n{}", p.to_text())
        })?;
        checked += 1;
    }
    Ok(format!("{checked} planar simple lattices, squares = descents = deg h"))
}

fn criterion_cyclic() -> Outcome {
    for r in 1..=4 {
        for k in 0..=2 {
            let p = fixtures::cyclic(r, k).unwrap();
            let rep = regularity(&lattice(&p), &Budget::default(), Mode::Verify);
            ensure(rep.value == Some(r) && rep.all_checks_pass(), || format!("r={r} k={k}: {:?}", rep.value))?;
            ensure(deg_h(&p) == r, || format!("r={r} k={k}: deg h = {}", deg_h(&p)))?;
        }
    }
    Ok("reg = r for r = 1..4, connector lengths 0..2".into())
}

fn criterion_example() -> Outcome {
    let p = fixtures::example();
    let rep = regularity(&lattice(&p), &Budget::default(), Mode::Verify);
    ensure(rep.value == Some(3), || format!("value {:?}", rep.value))?;
    ensure((rep.lower_bound, rep.upper_bound) == (2, 4), || format!("bounds ({}, {})", rep.lower_bound, rep.upper_bound))?;
    ensure(deg_h(&p) == 3 && brute_width(&p) == 3, || "independent recomputation disagrees".into())?;
    ensure(rep.all_checks_pass(), || rep.to_text())?;
    Ok("value 3, bounds [2, 4], both strict".into())
}

fn criterion_nonplanar(corpus: &[Vec<Poset>]) -> Outcome {
    let mut checked = 0;
    for p in corpus.iter().take(7).flatten() {
        let w = brute_width(p);
        if w <= 2 {
            continue;
        }
        ensure(!try_embed(&lattice(p)).is_planar(), || format!("width {w} embedded:\n{}", p.to_text()))?;
        let h = deg_h(p);
        ensure(w - 1 <= h && h < p.len(), || format!("{} <= {h} <= {} fails on\n{}", w - 1, p.len() - 1, p.to_text()))?;
        checked += 1;
    }
    Ok(format!("{checked} non-planar lattices within [width-1, |P|-1]"))
}

fn criterion_linear(corpus: &[Vec<Poset>]) -> Outcome {
    let grids: BTreeSet<CanonicalForm> =
        (1..=6).map(|a| canonical_form(&fixtures::divisor_lattice_2_3a(a).unwrap())).collect();
    let mut found = BTreeSet::new();
    for p in corpus.iter().take(7).flatten() {
        let l = lattice(p);
        if !l.is_simple() {
            continue;
        }
        let linear = deg_h(p) == 1 && !l.incomparable_pairs().is_empty();
        ensure(has_linear_resolution(&l).holds() == linear, || {
            format!("classifier says {} on\n{}", has_linear_resolution(&l), p.to_text())
        })?;
        if linear {
            found.insert(canonical_form(p));
        }
    }
    ensure(found == grids, || format!("{} reg-1 simple lattices, {} grids", found.len(), grids.len()))?;
    Ok(format!("reg-1 simple lattices are exactly the {} grids 2x(a+1), a = 1..6", grids.len()))
}

fn criterion_oracles(corpus: &[Vec<Poset>]) -> Outcome {
    let mut checked = 0;
    for p in corpus.iter().take(7).flatten() {
        let hb = h_from_beta(&flag_beta(p, CAP).map_err(|e| e.to_string())?);
        let hf = h_from_f(&f_vector(&lattice(p), CAP).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(hb == hf, || format!("{hb} vs {hf} on\n{}", p.to_text()))?;
        checked += 1;
    }
    Ok(format!("h_from_beta = h_from_f on {checked} posets"))
}

fn criterion_el(corpus: &[Vec<Poset>]) -> Outcome {
    let mut checked = 0;
    for p in corpus.iter().take(8).flatten().filter(|p| brute_width(p) <= 2) {
        let l = lattice(p);
        if l.len() > 200 {
            continue;
        }
        let emb = try_embed(&l).embedding().cloned().ok_or("not embedded")?;
        let lam = build_labeling(&l, &emb).map_err(|e| e.to_string())?;
        verify_el(&l, &lam).map_err(|f| format!("{f:?} on\n{}", p.to_text()))?;
        if l.len() <= 12 {
            let ex = verify_el_exhaustive(&l, &lam, CAP).map_err(|e| e.to_string())?;
            ensure(ex.is_ok(), || format!("exhaustive check fails on\n{}", p.to_text()))?;
        }
        let c0 = upper_chain(&l, &emb);
        ensure(chain_descents(c0.vertices(), &lam).is_empty(), || "upper chain has a descent".into())?;
        let increasing = if l.len() <= 60 {
            let chains = saturated_chains(&l, l.bottom(), l.top(), CAP).map_err(|e| e.to_string())?;
            let inc: Vec<_> = chains.iter().filter(|c| chain_descents(c, &lam).is_empty()).collect();
            ensure(inc.len() != 1 || inc[0].as_slice() == c0.vertices(), || "increasing chain is not c0".into())?;
            inc.len()
        } else {
            let beta = beta_via_chains(&l, &lam, CAP).map_err(|e| e.to_string())?;
            usize::try_from(beta.get(&Default::default()).to_u64_digits().first().copied().unwrap_or(0)).unwrap()
        };
        ensure(increasing == 1, || format!("{increasing} increasing maximal chains on\n{}", p.to_text()))?;
        checked += 1;
    }
    Ok(format!("{checked} planar lattices: EL verified, c0 the unique increasing chain"))
}

fn criterion_additivity(corpus: &[Vec<Poset>]) -> Outcome {
    let pool: Vec<&Poset> = corpus.iter().take(5).flatten().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2024);
    for trial in 0..50 {
        let a = pool[rng.gen_range(0..pool.len())];
        let b = pool[rng.gen_range(0..pool.len())];
        let k = rng.gen_range(1..=3);
        let glued = a.ordinal_sum(&Poset::chain(k).unwrap()).unwrap().ordinal_sum(b).unwrap();
        let l = lattice(&glued);
        ensure(l.cut_edges().len() >= k, || format!("trial {trial}: no cut edge"))?;
        let expected = deg_h(a) + deg_h(b);
        let rep = regularity(&l, &Budget::default(), Mode::Production);
        ensure(rep.value == Some(expected) && deg_h(&glued) == expected, || {
            format!("trial {trial}: engine {:?}, deg h {}, parts sum {expected}", rep.value, deg_h(&glued))
        })?;
    }
    Ok("50 seeded glueings P1 + chain(k) + P2: reg = reg P1 + reg P2".into())
}

fn criterion_determinism() -> Outcome {
    let budget = Budget::default();
    let first = sweep_corpus(5, &budget).to_records();
    let second = sweep_corpus(5, &budget).to_records();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().map_err(|e| e.to_string())?;
    let third = pool.install(|| sweep_corpus(5, &budget).to_records());
    ensure(first == second && second == third, || "sweep records differ between runs".into())?;
    ensure(first.contains("total_failures=0\n"), || "sweep reported failures".into())?;
    Ok(format!("3 sweeps of size 5 byte-identical ({} bytes)", first.len()))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let corpus = census(8);
    println!("corpus: {} posets with at most 8 elements ({:.1?})", corpus.iter().map(Vec::len).sum::<usize>(), start.elapsed());

    type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;
    let criteria: Vec<(&str, u64, Check)> = vec![
        ("boolean lattices", 30, Box::new(criterion_boolean)),
        ("planar three-way equality", 300, Box::new(|| criterion_planar(&corpus))),
        ("cyclic lattices", 10, Box::new(criterion_cyclic)),
        ("width-three example", 1, Box::new(criterion_example)),
        ("non-planar bounds", 300, Box::new(|| criterion_nonplanar(&corpus))),
        ("linear resolution", 300, Box::new(|| criterion_linear(&corpus))),
        ("h-vector oracles", 300, Box::new(|| criterion_oracles(&corpus))),
        ("EL-labeling and upper chain", 120, Box::new(|| criterion_el(&corpus))),
        ("additivity over cut edges", 60, Box::new(|| criterion_additivity(&corpus))),
        ("sweep determinism", 60, Box::new(criterion_determinism)),
    ];

    let mut failed = 0;
    for (k, (name, limit, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let elapsed = t.elapsed();
        let result = result.and_then(|msg| {
            ensure(elapsed <= Duration::from_secs(*limit), || format!("took {elapsed:.1?}, limit {limit}s")).map(|_| msg)
        });
        match result {
            Ok(msg) => println!("criterion {:>2} PASS {name}: {msg} [exact; {elapsed:.2?} <= {limit}s]", k + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {msg} [exact; {elapsed:.2?}, limit {limit}s]", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
