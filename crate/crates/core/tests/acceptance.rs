//! Acceptance suite: one PASS/FAIL line per criterion, with wall-clock limits.
//!
//! Run with `cargo test --release --test acceptance`.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use starcode::code::{intersection_stats, stab1_code};
use starcode::group::{coset_partition, is_sharply_3_transitive, pgl2, PermutationSet, Side};
use starcode::perm::{factorial, Permutation};
use starcode::search::{
    build_code_cover, embed_bitrade, enumerate_bitrades, solve_exact_cover, Embedding, SolveOptions,
};
use starcode::star::feng_map;
use starcode::{Bitrade, Code, Stab1Certificate};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Every perfect code and bitrade produced along the way, for the property checks.
#[derive(Default)]
struct Harvest {
    codes: Vec<Code>,
    trades: Vec<Bitrade>,
}

fn perm(word: &[usize]) -> Permutation {
    Permutation::from_word(word).unwrap()
}

fn pgl_code() -> Code {
    Code::from_set(&pgl2(5).unwrap()).unwrap()
}

fn empty(n: usize) -> Code {
    Code::from_ranks(n, []).unwrap()
}

fn identity_code(n: usize) -> Code {
    Code::from_perms(n, [Permutation::identity(n).unwrap()].iter()).unwrap()
}

/// Tiling oracle: every vertex lies in exactly one closed ball, computed by
/// swapping values 1 and i in each codeword's word.
fn tiles(code: &Code) -> bool {
    let n = code.degree();
    let mut hits = vec![0u8; factorial(n) as usize];
    for c in code.perms() {
        let word = c.word();
        let mut mark = |w: &[usize]| {
            let r = Permutation::from_word(w).unwrap().rank() as usize;
            hits[r] += 1;
        };
        mark(&word);
        for i in 2..=n {
            let swapped: Vec<usize> = word
                .iter()
                .map(|&x| {
                    if x == 1 {
                        i
                    } else if x == i {
                        1
                    } else {
                        x
                    }
                })
                .collect();
            mark(&swapped);
        }
    }
    hits.iter().all(|&h| h == 1)
}

fn c1_stab1(h: &mut Harvest) -> Outcome {
    for n in 3..=8 {
        let code = stab1_code(n).map_err(|e| e.to_string())?;
        ensure!(
            code.len() as u64 == factorial(n - 1),
            "stab1({n}) has {} words",
            code.len()
        );
        ensure!(code.is_perfect(), "stab1({n}) not perfect");
        h.codes.push(code);
    }
    Ok("stab1(n) perfect for n = 3..8".into())
}

fn c2_pgl(h: &mut Harvest) -> Outcome {
    let group = pgl2(5).map_err(|e| e.to_string())?;
    ensure!(group.len() == 120, "|PGL(2,5)| = {}", group.len());
    ensure!(group.is_group(), "PGL(2,5) not closed");
    // oracle: each (source triple, image triple) pair is hit exactly once
    let triples: Vec<[usize; 3]> = (1..=6)
        .flat_map(|a| (1..=6).flat_map(move |b| (1..=6).map(move |c| [a, b, c])))
        .filter(|[a, b, c]| a != b && b != c && a != c)
        .collect();
    let index = |t: [usize; 3]| triples.iter().position(|&s| s == t).unwrap();
    let mut hits = vec![0u32; triples.len() * triples.len()];
    for g in group.iter() {
        for (s, t) in triples.iter().enumerate() {
            let image = [g.apply(t[0]), g.apply(t[1]), g.apply(t[2])];
            hits[s * triples.len() + index(image)] += 1;
        }
    }
    ensure!(hits.iter().all(|&x| x == 1), "triple counts not all 1");
    ensure!(is_sharply_3_transitive(&group), "library check disagrees");
    let pure = group
        .iter()
        .filter(|g| g.is_pure_cycle_of_length(2) || g.is_pure_cycle_of_length(3))
        .count();
    ensure!(pure == 0, "{pure} pure 2- or 3-cycles");
    let code = pgl_code();
    ensure!(code.is_perfect(), "PGL(2,5) not perfect in S_6");
    h.codes.push(code);
    Ok(format!(
        "order 120, {} triple pairs each hit once, no pure 2/3-cycles, perfect",
        hits.len()
    ))
}

fn c3_cosets(h: &mut Harvest) -> Outcome {
    let group = pgl2(5).map_err(|e| e.to_string())?;
    let mut partitions = Vec::new();
    for side in [Side::Left, Side::Right] {
        let cosets = coset_partition(&group, side).map_err(|e| e.to_string())?;
        ensure!(cosets.len() == 6, "{side:?}: {} cosets", cosets.len());
        let mut seen = BTreeSet::new();
        for c in &cosets {
            let code = Code::from_set(c).map_err(|e| e.to_string())?;
            ensure!(code.is_perfect(), "{side:?} coset not perfect");
            seen.extend(code.ranks().iter().copied());
            h.codes.push(code);
        }
        ensure!(seen.len() == 720, "{side:?} cosets do not cover Sym_6");
        let set: BTreeSet<Vec<u64>> = cosets.iter().map(PermutationSet::ranks).collect();
        partitions.push(set);
    }
    ensure!(
        partitions[0] != partitions[1],
        "left and right partitions coincide"
    );
    Ok("6 left + 6 right cosets perfect, partitions differ".into())
}

fn c4_classification(h: &mut Harvest) -> Outcome {
    let parallel = SolveOptions {
        limit: None,
        budget: None,
        parallel: true,
    };
    let mut counts = Vec::new();
    let mut six = Vec::new();
    for n in [4, 5, 6] {
        let inst = build_code_cover(n, &identity_code(n), &empty(n)).map_err(|e| e.to_string())?;
        let report = solve_exact_cover(&inst, &parallel);
        ensure!(report.complete, "n = {n} incomplete");
        for code in &report.solutions {
            ensure!(code.is_perfect(), "n = {n}: non-perfect solution");
        }
        counts.push(report.solutions.len());
        if n == 5 {
            ensure!(
                report.solutions == vec![stab1_code(5).unwrap()],
                "n = 5: not Stab1"
            );
        }
        if n == 6 {
            six = report.solutions.clone();
        }
        h.codes.extend(report.solutions);
    }
    ensure!(counts == [1, 1, 7], "identity-forced counts {counts:?}");
    let mut forms: Vec<Vec<u64>> = Vec::new();
    let mut sizes: Vec<usize> = Vec::new();
    for code in &six {
        let form = code.canonical_form().map_err(|e| e.to_string())?;
        match forms.iter().position(|f| *f == form) {
            Some(k) => sizes[k] += 1,
            None => {
                forms.push(form);
                sizes.push(1);
            }
        }
    }
    sizes.sort();
    ensure!(sizes == [1, 6], "class sizes {sizes:?}");
    let inst = build_code_cover(6, &empty(6), &empty(6)).map_err(|e| e.to_string())?;
    let free = solve_exact_cover(&inst, &parallel);
    ensure!(free.complete, "unforced enumeration incomplete");
    ensure!(
        free.solutions.len() == 42,
        "unforced count {}",
        free.solutions.len()
    );
    // oracle: each of the 42 codes is a right translate of a forced one
    for code in &free.solutions {
        let c = code.perms().next().unwrap();
        let shifted = code
            .coset_code(&c.inverse(), Side::Right)
            .map_err(|e| e.to_string())?;
        ensure!(
            six.contains(&shifted),
            "unforced code not a translate of a forced one"
        );
    }
    h.codes.extend(free.solutions);
    Ok(format!(
        "forced counts {counts:?}, classes {sizes:?}, unforced 42 ({} nodes)",
        free.nodes
    ))
}

fn c5_lift_chain(h: &mut Harvest) -> Outcome {
    let mut code = pgl_code();
    for (n, size) in [(7, 720), (8, 5040)] {
        code = code
            .embed(n)
            .and_then(|c| c.lift())
            .map_err(|e| e.to_string())?;
        ensure!(code.len() == size, "lift to S_{n} has {} words", code.len());
        ensure!(code.is_perfect(), "lift to S_{n} not perfect");
        ensure!(
            matches!(
                code.stab1_class_certificate(),
                Stab1Certificate::NotInClass { .. }
            ),
            "lift to S_{n} reported in the Stab1 class"
        );
        h.codes.push(code.clone());
    }
    Ok("720 and 5040 codewords, perfect, NotInClass".into())
}

fn c6_lift_oracle(_: &mut Harvest) -> Outcome {
    let lifted = stab1_code(3)
        .and_then(|c| c.embed(4))
        .and_then(|c| c.lift())
        .map_err(|e| e.to_string())?;
    ensure!(
        lifted == stab1_code(4).unwrap(),
        "lift(stab1(3)) != stab1(4)"
    );
    Ok("lift(stab1(3) in degree 4) == stab1(4)".into())
}

fn paper_bitrades() -> Vec<(Code, Code, usize, usize)> {
    let stab = stab1_code(6).unwrap();
    let moved = stab
        .coset_code(&perm(&[6, 2, 3, 4, 5, 1]), Side::Right)
        .unwrap();
    let pgl = pgl_code();
    let conj = pgl.conjugate(&perm(&[2, 1, 3, 4, 5, 6])).unwrap();
    vec![
        (stab.clone(), moved, 120, 0),
        (stab, pgl.clone(), 100, 20),
        (pgl, conj, 96, 24),
    ]
}

fn c7_bitrades(h: &mut Harvest) -> Outcome {
    let mut summary = Vec::new();
    for (a, b, volume, common) in paper_bitrades() {
        ensure!(a.is_perfect() && b.is_perfect(), "input code not perfect");
        let stats = intersection_stats(&a, &b).map_err(|e| e.to_string())?;
        ensure!(
            stats.common == common,
            "intersection {} != {common}",
            stats.common
        );
        let trade = Bitrade::from_codes(&a, &b).map_err(|e| e.to_string())?;
        ensure!(trade.verify(), "volume {volume} pair does not verify");
        ensure!(
            trade.volume() == volume,
            "volume {} != {volume}",
            trade.volume()
        );
        summary.push(format!("{volume}/{common}"));
        h.codes.extend([a, b]);
        h.trades.push(trade);
    }
    // every nontrivial conjugate of PGL(2,5) gives volume 96
    let pgl = pgl_code();
    let mut conjugates = BTreeSet::new();
    for g in starcode::perm::all_permutations(6).unwrap() {
        conjugates.insert(pgl.conjugate(&g).unwrap());
    }
    ensure!(conjugates.len() == 6, "{} conjugates", conjugates.len());
    for c in conjugates.iter().filter(|c| **c != pgl) {
        let trade = Bitrade::from_codes(&pgl, c).map_err(|e| e.to_string())?;
        ensure!(
            trade.verify() && trade.volume() == 96,
            "a conjugate pair fails"
        );
    }
    Ok(format!("volume/intersection {}", summary.join(", ")))
}

fn c8_embed(h: &mut Harvest) -> Outcome {
    let mut trades: Vec<Bitrade> = paper_bitrades()
        .iter()
        .map(|(a, b, _, _)| Bitrade::from_codes(a, b).unwrap())
        .collect();
    let four = enumerate_bitrades(4, None).map_err(|e| e.to_string())?;
    ensure!(!four.bitrades.is_empty(), "no bitrades at n = 4");
    trades.extend(four.bitrades.iter().cloned());
    for trade in &trades {
        match embed_bitrade(trade, Some(Duration::from_secs(120))).map_err(|e| e.to_string())? {
            Embedding::Embedded { code, partner } => {
                ensure!(
                    code.is_perfect() && partner.is_perfect(),
                    "switched pair not perfect"
                );
                ensure!(
                    trade.t0().ranks().iter().all(|&r| code.contains_rank(r)),
                    "code misses T0"
                );
                ensure!(
                    trade.t1().ranks().iter().all(|&r| partner.contains_rank(r)),
                    "partner misses T1"
                );
                h.codes.extend([code, partner]);
            }
            other => return Err(format!("volume {}: {other:?}", trade.volume())),
        }
    }
    h.trades.extend(four.bitrades);
    Ok(format!(
        "{} bitrades embedded (3 at n = 6, {} at n = 4)",
        trades.len(),
        trades.len() - 3
    ))
}

fn c9_spectra(h: &mut Harvest) -> Outcome {
    let four = enumerate_bitrades(4, Some(Duration::from_secs(600))).map_err(|e| e.to_string())?;
    ensure!(
        four.volume_list() == [6] && four.complete(),
        "n = 4: {:?}",
        four.volume_list()
    );
    let five = enumerate_bitrades(5, Some(Duration::from_secs(600))).map_err(|e| e.to_string())?;
    ensure!(
        five.volume_list() == [24] && five.complete(),
        "n = 5: {:?}",
        five.volume_list()
    );
    let six = enumerate_bitrades(6, Some(Duration::from_secs(600))).map_err(|e| e.to_string())?;
    for (a, b, volume, _) in paper_bitrades() {
        let witness = Bitrade::from_codes(&a, &b).unwrap();
        ensure!(witness.verify(), "witness for {volume} fails");
        ensure!(
            six.volumes.contains_key(&volume),
            "search missed volume {volume}"
        );
    }
    for trade in four
        .bitrades
        .iter()
        .chain(&five.bitrades)
        .chain(&six.bitrades)
    {
        ensure!(trade.verify(), "search returned an invalid bitrade");
    }
    let flag = if six.complete() {
        "complete".to_string()
    } else {
        "incomplete (inconclusive, exit 3)".to_string()
    };
    let detail = format!(
        "n=4 {:?} complete, n=5 {:?} complete, n=6 {:?} {flag} ({} nodes)",
        four.volume_list(),
        five.volume_list(),
        six.volume_list(),
        six.nodes
    );
    h.trades.extend(four.bitrades);
    h.trades.extend(five.bitrades);
    h.trades.extend(six.bitrades);
    Ok(detail)
}

fn c10_properties(h: &mut Harvest) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ac0de);
    let random = |rng: &mut ChaCha8Rng, n: usize| {
        Permutation::unrank(n, rng.gen_range(0..factorial(n))).unwrap()
    };

    // group laws: exhaustive on Sym_4, random on Sym_7
    let sym4: Vec<Permutation> = starcode::perm::all_permutations(4).unwrap().collect();
    let id4 = Permutation::identity(4).unwrap();
    for a in &sym4 {
        ensure!(a.compose(&a.inverse()).unwrap() == id4, "inverse law");
        ensure!(
            a.compose(&id4).unwrap() == *a && id4.compose(a).unwrap() == *a,
            "identity law"
        );
        for b in &sym4 {
            for c in &sym4 {
                let left = a.compose(b).unwrap().compose(c).unwrap();
                let right = a.compose(&b.compose(c).unwrap()).unwrap();
                ensure!(left == right, "associativity on Sym_4");
            }
        }
    }
    for _ in 0..1000 {
        let (a, b, c) = (
            random(&mut rng, 7),
            random(&mut rng, 7),
            random(&mut rng, 7),
        );
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        ensure!(
            left == a.compose(&b.compose(&c).unwrap()).unwrap(),
            "associativity on Sym_7"
        );
        ensure!(
            (1..=7).all(|x| a.compose(&b).unwrap().apply(x) == a.apply(b.apply(x))),
            "composition order"
        );
    }

    // rank/unrank: exhaustive to n = 7, random at n = 12 and n = 20
    for n in 1..=7 {
        for r in 0..factorial(n) {
            let p = Permutation::unrank(n, r).unwrap();
            ensure!(p.rank() == r, "roundtrip at n = {n}, rank {r}");
        }
    }
    for n in [12, 20] {
        for _ in 0..1000 {
            let r = rng.gen_range(0..factorial(n));
            ensure!(
                Permutation::unrank(n, r).unwrap().rank() == r,
                "roundtrip at n = {n}"
            );
        }
    }

    // Feng maps preserve adjacency: images of g and (1 i)∘g differ by a (1 j)
    for _ in 0..1000 {
        let mut l = random(&mut rng, 6);
        let fix = Permutation::transposition(6, 1, l.preimage(1));
        if let Ok(t) = fix {
            l = l.compose(&t).unwrap();
        }
        ensure!(l.apply(1) == 1, "l must fix 1");
        let (r, g) = (random(&mut rng, 6), random(&mut rng, 6));
        let i = rng.gen_range(2..=6);
        let neighbor = Permutation::transposition(6, 1, i)
            .unwrap()
            .compose(&g)
            .unwrap();
        let a = feng_map(&l, &r, &g).unwrap();
        let b = feng_map(&l, &r, &neighbor).unwrap();
        let diff = b.compose(&a.inverse()).unwrap();
        let moved: Vec<usize> = (1..=6).filter(|&x| diff.apply(x) != x).collect();
        ensure!(moved.len() == 2 && moved[0] == 1, "adjacency lost: {diff}");
    }

    // tiling for every perfect code produced
    for code in &h.codes {
        ensure!(
            tiles(code),
            "a code of degree {} does not tile",
            code.degree()
        );
    }

    // double counting for every bitrade
    for trade in &h.trades {
        ensure!(trade.t0().len() == trade.t1().len(), "|T0| != |T1|");
    }
    Ok(format!(
        "group laws, rank roundtrips, 1000 Feng checks, {} tilings, {} bitrades",
        h.codes.len(),
        h.trades.len()
    ))
}

type Criterion = (u32, &'static str, Duration, fn(&mut Harvest) -> Outcome);

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria: [Criterion; 10] = [
        (1, "stab1 perfect codes", secs(10), c1_stab1),
        (2, "PGL(2,5) facts", secs(5), c2_pgl),
        (3, "coset partitions", secs(5), c3_cosets),
        (4, "classification", secs(300), c4_classification),
        (5, "lift chain", secs(30), c5_lift_chain),
        (6, "lift sanity oracle", secs(1), c6_lift_oracle),
        (7, "bitrade constructions", secs(5), c7_bitrades),
        (8, "embeddability", secs(600), c8_embed),
        (9, "bitrade spectra", secs(1200), c9_spectra),
        (10, "property suites", secs(120), c10_properties),
    ];
    let mut harvest = Harvest::default();
    let mut failures = 0;
    for (num, name, limit, check) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(|| check(&mut harvest)))
            .unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = match result {
            Ok(_) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            other => other,
        };
        match result {
            Ok(detail) => {
                println!("criterion {num:>2} PASS  {name} [{elapsed:.2?} / {limit:?}]: {detail}")
            }
            Err(why) => {
                failures += 1;
                println!("criterion {num:>2} FAIL  {name} [{elapsed:.2?} / {limit:?}]: {why}");
            }
        }
    }
    println!("{} passed, {failures} failed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
