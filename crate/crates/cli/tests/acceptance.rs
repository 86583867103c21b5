//! End-to-end acceptance suite. Each criterion prints one PASS/FAIL line and
//! the test fails if any criterion does.
//!
//! Independent oracles used here: a direct bit-string action of the
//! generators, a breadth-first search over integer pairs, and span closure
//! by enumeration for vector spaces over `Z_p`.

use std::collections::{HashSet, VecDeque};
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use prgraph_core::group::{FreeAbelianElement, ModVector};
use prgraph_core::prp::{ball, components_finite, BallOptions};
use prgraph_core::schreier::{
    build_certificate, check_cubic_bruteforce, check_cubic_by_support, conjugate_family, growth_report, rw_speed,
    spanning_walk, verify_certificate, Certificate, SchreierGraph, WalkOptions,
};
use prgraph_core::witness::{classical_t, relabel_for_d, verify_classical, verify_generalized};
use prgraph_core::{Bits, Error, GrigorchukGroup, Letter, OmegaSequence, TreeWord, Zd};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LETTERS: [Letter; 4] = [Letter::A, Letter::B, Letter::C, Letter::D];
const SEED: u64 = 20_240_917;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------- oracles ----------

/// Action of one generator at `offset` on a bit string, straight from the
/// recursive definitions: `a` flips the first bit; `x ∈ {b, c, d}` walks down
/// the 1-branch and, at the first 0, flips the next bit unless `x = ω_j`.
fn oracle_letter(omega: &OmegaSequence, x: Letter, offset: usize, s: &mut [u8]) {
    if x == Letter::A {
        if let Some(b) = s.first_mut() {
            *b ^= 1;
        }
        return;
    }
    for j in 0..s.len() {
        if s[j] == 0 {
            if x != omega.letter_at(offset + j) && j + 1 < s.len() {
                s[j + 1] ^= 1;
            }
            return;
        }
    }
}

/// Action of a word; the rightmost letter acts first.
fn oracle_act(omega: &OmegaSequence, word: &[Letter], offset: usize, s: &[u8]) -> Vec<u8> {
    let mut v = s.to_vec();
    for &x in word.iter().rev() {
        oracle_letter(omega, x, offset, &mut v);
    }
    v
}

fn index_of(s: &[u8]) -> usize {
    s.iter().fold(0, |acc, &b| acc << 1 | b as usize)
}

fn string_of(i: usize, len: usize) -> Vec<u8> {
    (0..len).map(|j| (i >> (len - 1 - j) & 1) as u8).collect()
}

fn oracle_perm(omega: &OmegaSequence, w: &TreeWord, level: usize) -> Vec<u32> {
    (0..1usize << level)
        .map(|i| index_of(&oracle_act(omega, w.letters(), w.offset(), &string_of(i, level))) as u32)
        .collect()
}

fn random_word(rng: &mut ChaCha8Rng, max: usize) -> TreeWord {
    let n = rng.gen_range(0..=max);
    TreeWord::reduce((0..n).map(|_| LETTERS[rng.gen_range(0..4)]), 0)
}

fn random_bits(rng: &mut ChaCha8Rng, len: usize) -> Vec<u8> {
    (0..len).map(|_| rng.gen_range(0..2u8)).collect()
}

fn random_omega(rng: &mut ChaCha8Rng, non_constant: bool) -> OmegaSequence {
    loop {
        let (np, nc) = (rng.gen_range(0..=3), rng.gen_range(1..=4));
        let mut pick = |n: usize| -> Vec<Letter> { (0..n).map(|_| Letter::BCD[rng.gen_range(0..3)]).collect() };
        let prefix = pick(np);
        let cycle = pick(nc);
        let w = OmegaSequence::new(prefix, cycle).unwrap();
        if !non_constant || !w.is_eventually_constant() {
            return w;
        }
    }
}

fn bits(s: &[u8]) -> Bits {
    Bits::new(s.to_vec()).unwrap()
}

fn abcd() -> Vec<TreeWord> {
    LETTERS.iter().map(|&x| TreeWord::letter(x, 0)).collect()
}

// ---------- criteria ----------

fn relations_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut omegas = vec![OmegaSequence::classical()];
    omegas.extend((0..5).map(|_| random_omega(&mut rng, false)));
    let depth = 12;
    for w in &omegas {
        let g = GrigorchukGroup::new(w.clone());
        let act = |u: &TreeWord, s: &[u8]| oracle_act(w, u.letters(), 0, s);
        for _ in 0..10_000 {
            let (u, v, x) = (
                random_word(&mut rng, 40),
                random_word(&mut rng, 40),
                random_word(&mut rng, 40),
            );
            let s = random_bits(&mut rng, depth);
            let lib = g.act(&u, &bits(&s));
            ensure(lib.as_slice() == act(&u, &s).as_slice(), || {
                format!("{w}: act({u}, {}) disagrees", bits(&s))
            })?;
            let uv_x = u.multiply(&v).unwrap().multiply(&x).unwrap();
            let u_vx = u.multiply(&v.multiply(&x).unwrap()).unwrap();
            ensure(act(&uv_x, &s) == act(&u, &act(&v, &act(&x, &s))), || {
                format!("{w}: homomorphism fails")
            })?;
            ensure(act(&uv_x, &s) == act(&u_vx, &s), || format!("{w}: associativity fails"))?;
            ensure(g.equals(&uv_x, &u_vx).unwrap(), || format!("{w}: (uv)x != u(vx)"))?;
            ensure(g.is_identity(&u.multiply(&u.invert()).unwrap()), || {
                format!("{w}: u u^-1 != 1 for {u}")
            })?;
            ensure(act(&u.invert(), &act(&u, &s)) == s, || {
                format!("{w}: inverse action fails for {u}")
            })?;
            for &l in &LETTERS {
                ensure(oracle_act(w, &[l, l], 0, &s) == s, || {
                    format!("{w}: {l}^2 acts nontrivially")
                })?;
                let sq = TreeWord::letter(l, 0).multiply(&TreeWord::letter(l, 0)).unwrap();
                ensure(g.is_identity(&sq), || format!("{w}: {l}^2 != 1"))?;
            }
            let bc = TreeWord::parse("bc", 0).unwrap();
            ensure(g.equals(&bc, &TreeWord::parse("d", 0).unwrap()).unwrap(), || {
                format!("{w}: bc != d")
            })?;
            ensure(
                oracle_act(w, &[Letter::B, Letter::C], 0, &s) == oracle_act(w, &[Letter::D], 0, &s),
                || format!("{w}: bc and d act differently"),
            )?;
            // g(b t) = (b ^ swap) g|_b(t)
            let top = s[0] ^ u8::from(u.swaps_root());
            let sec = g.section(&u, s[0]);
            let mut expect = vec![top];
            expect.extend(oracle_act(w, sec.letters(), sec.offset(), &s[1..]));
            ensure(act(&u, &s) == expect, || format!("{w}: section/act mismatch for {u}"))?;
        }
    }
    Ok(())
}

fn pinned_value() -> Outcome {
    let g = GrigorchukGroup::classical();
    let t0 = TreeWord::parse("abab", 0).unwrap();
    let sq = t0.multiply(&t0).unwrap();
    let got = g.act(&sq, &"111".parse().unwrap());
    ensure(got.to_string() == "110", || format!("act((abab)^2, 111) = {got}"))
}

/// Strings of level `depth` outside the cone of `prefix` are fixed, the
/// level of `prefix` is fixed, and something inside the cone moves.
fn oracle_rist_nontrivial(omega: &OmegaSequence, g: &TreeWord, prefix_len: usize, depth: usize) -> bool {
    let mut moved_inside = false;
    for i in 0..1usize << depth {
        let s = string_of(i, depth);
        let img = oracle_act(omega, g.letters(), 0, &s);
        if img[..prefix_len] != s[..prefix_len] {
            return false;
        }
        let inside = s[..prefix_len].iter().all(|&b| b == 1);
        if img != s {
            if !inside {
                return false;
            }
            moved_inside = true;
        }
    }
    moved_inside
}

fn classical_witnesses() -> Outcome {
    let g = GrigorchukGroup::classical();
    let w = OmegaSequence::classical();
    for m in 0..=6 {
        let r = verify_classical(&g, m).map_err(|e| e.to_string())?;
        ensure(r.nontrivial && r.rist_ok && r.structure_ok, || {
            format!("m = {m}: {r:?}")
        })?;
        ensure(r.letters_abc <= 1 << (m + 4), || {
            format!("m = {m}: {} letters", r.letters_abc)
        })?;
        let sq = r.square();
        ensure(oracle_rist_nontrivial(&w, &sq, m, m + 4), || {
            format!("m = {m}: oracle rejects t^2")
        })?;
        let t = classical_t(m).unwrap();
        let down = g.section_along(&t, &Bits::ones(m));
        let t0 = TreeWord::parse("abab", 0).unwrap();
        ensure(g.same_automorphism(&down, &t0), || {
            format!("m = {m}: t_m at 1^m is {down}")
        })?;
        let agree = (0..1usize << 10).all(|i| {
            let s = string_of(i, 10);
            oracle_act(&w, down.letters(), m, &s) == oracle_act(&w, t0.letters(), 0, &s)
        });
        ensure(agree, || format!("m = {m}: oracle separates t_m at 1^m from t_0"))?;
    }
    Ok(())
}

fn generalized_omegas(rng: &mut ChaCha8Rng) -> Vec<OmegaSequence> {
    let mut ws: Vec<OmegaSequence> = ["dcb", "db", "dc", "bcd"].iter().map(|s| s.parse().unwrap()).collect();
    ws.extend((0..3).map(|_| random_omega(rng, true)));
    ws
}

fn generalized_witnesses() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    for w in generalized_omegas(&mut rng) {
        for n in 1..=6 {
            let r = verify_generalized(&w, n).map_err(|e| format!("{w}, n = {n}: {e}"))?;
            ensure(r.is_valid(), || format!("{w}, n = {n}: {r:?}"))?;
            ensure(r.word.len() <= 1 << (n + 2), || {
                format!("{w}, n = {n}: |t| = {}", r.word.len())
            })?;
            // A run of equal letters in ω delays the first moved string.
            let depth = (n + 3 + w.num_positions()).min(16);
            ensure(oracle_rist_nontrivial(&w, &r.square(), n, depth), || {
                format!("{w}, n = {n}: oracle rejects t^2")
            })?;
        }
    }
    for s in ["(b)", "(c)", "dc(b)", "bcd(d)"] {
        let w: OmegaSequence = s.parse().unwrap();
        ensure(verify_generalized(&w, 3).err() == Some(Error::NoWitness), || {
            format!("{s} was not routed to the no-witness error")
        })?;
    }
    Ok(())
}

fn ad_order() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    for w in generalized_omegas(&mut rng) {
        for n in 1..=6 {
            let (rw, _) = relabel_for_d(&w, n).unwrap();
            ensure(rw.letter_at(n - 1) == Letter::D, || {
                format!("{w}, n = {n}: relabel failed")
            })?;
            let g = GrigorchukGroup::new(rw.clone());
            for k in 0..n {
                let p = TreeWord::reduce([Letter::A, Letter::D], k).pow(1 << (n - k + 1));
                ensure(g.is_identity(&p), || format!("{rw}: (a d_{k})^(2^{}) != 1", n - k + 1))?;
                let trivial = (0..1usize << 10).all(|i| {
                    let s = string_of(i, 10);
                    oracle_act(&rw, p.letters(), k, &s) == s
                });
                ensure(trivial, || format!("{rw}: (a d_{k}) power moves a string"))?;
            }
        }
    }
    Ok(())
}

fn transitivity() -> Outcome {
    let g = GrigorchukGroup::classical();
    let w = OmegaSequence::classical();
    for m in 0..=12 {
        let sg = SchreierGraph::new(&g, &abcd(), m).map_err(|e| e.to_string())?;
        // Oracle BFS over the direct action.
        let mut seen = vec![false; 1 << m];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(i) = queue.pop_front() {
            for &x in &LETTERS {
                let j = index_of(&oracle_act(&w, &[x], 0, &string_of(i, m)));
                if !std::mem::replace(&mut seen[j], true) {
                    queue.push_back(j);
                }
            }
        }
        let oracle_connected = seen.iter().all(|&b| b);
        ensure(oracle_connected && sg.is_connected(), || {
            format!("level {m} is not connected")
        })?;
        if m <= 10 {
            let walk = spanning_walk(&sg, &Bits::ones(m)).map_err(|e| e.to_string())?;
            let bound = (2usize << m) - 2;
            ensure(walk.cost() <= bound, || {
                format!("m = {m}: cost {} > {bound}", walk.cost())
            })?;
            let distinct: HashSet<_> = walk.visits.iter().collect();
            ensure(distinct.len() == 1 << m && walk.visits.len() == 1 << m, || {
                format!("m = {m}: walk misses")
            })?;
            for (i, step) in walk.steps.iter().enumerate() {
                let img = oracle_act(&w, step.letters(), 0, walk.visits[i].as_slice());
                ensure(img.as_slice() == walk.visits[i + 1].as_slice(), || {
                    format!("m = {m}: step {i} is wrong")
                })?;
            }
        }
    }
    Ok(())
}

/// Whether all `2^k` ordered products are distinct on level `level`.
fn oracle_products_distinct(omega: &OmegaSequence, elems: &[TreeWord], level: usize) -> bool {
    let perms: Vec<Vec<u32>> = elems.iter().map(|g| oracle_perm(omega, g, level)).collect();
    let mut seen = HashSet::new();
    let mut stack = vec![(0usize, (0..1u32 << level).collect::<Vec<u32>>())];
    while let Some((d, p)) = stack.pop() {
        if d == elems.len() {
            if !seen.insert(p) {
                return false;
            }
            continue;
        }
        let with: Vec<u32> = perms[d].iter().map(|&i| p[i as usize]).collect();
        stack.push((d + 1, with));
        stack.push((d + 1, p));
    }
    true
}

fn cubic_family(g: &GrigorchukGroup, m: usize) -> Vec<TreeWord> {
    let t = classical_t(m).unwrap();
    let sq = t.multiply(&t).unwrap();
    let walk = spanning_walk(&SchreierGraph::new(g, &abcd(), m).unwrap(), &Bits::ones(m)).unwrap();
    conjugate_family(g, &sq, &walk).unwrap()
}

fn cubicity() -> Outcome {
    let g = GrigorchukGroup::classical();
    let w = OmegaSequence::classical();
    for m in 0..=4 {
        let fam = cubic_family(&g, m);
        ensure(fam.len() == 1 << m, || format!("m = {m}: family of size {}", fam.len()))?;
        let support = check_cubic_by_support(&g, &fam, m).ok;
        let brute = check_cubic_bruteforce(&g, &fam, m + 4).map_err(|e| e.to_string())?;
        let oracle = oracle_products_distinct(&w, &fam, m + 4);
        ensure(support && brute && oracle, || {
            format!("m = {m}: support {support}, brute force {brute}, oracle {oracle}")
        })?;
        if (1..=3).contains(&m) {
            let mut dup = fam.clone();
            dup[1] = dup[0].clone();
            let mut with_trivial = fam.clone();
            with_trivial[0] = TreeWord::identity(0);
            for bad in [dup, with_trivial] {
                let s = check_cubic_by_support(&g, &bad, m).ok;
                let b = check_cubic_bruteforce(&g, &bad, m + 4).unwrap();
                ensure(!s && !b, || format!("m = {m}: broken family accepted ({s}, {b})"))?;
            }
        }
    }
    Ok(())
}

fn check_certificate(omega: &OmegaSequence, m: usize) -> Outcome {
    let c = build_certificate(omega, m, &LETTERS).map_err(|e| format!("{omega}, m = {m}: {e}"))?;
    let parsed: Certificate = c.to_string().parse().map_err(|e: Error| e.to_string())?;
    ensure(parsed == c, || {
        format!("{omega}, m = {m}: certificate does not round trip")
    })?;
    let check = verify_certificate(&parsed);
    ensure(check.is_valid(), || {
        format!("{omega}, m = {m}: {:?}", check.diagnostics)
    })?;
    let bound = (c.alpha + 4) << m;
    ensure(c.moves.len() <= bound && check.path_len == c.moves.len(), || {
        format!("{omega}, m = {m}: path {} exceeds {bound}", c.moves.len())
    })?;
    let mut tampered = Vec::new();
    let mut t = c.clone();
    t.moves.remove(t.moves.len() / 2);
    tampered.push(("deleted move", t));
    let mut t = c.clone();
    t.witness = TreeWord::identity(0);
    tampered.push(("identity witness", t));
    let mut t = c.clone();
    t.alpha = c.alpha.saturating_sub(1);
    tampered.push(("lowered alpha", t));
    if let Some(first) = c.steps.first() {
        let mut t = c.clone();
        t.steps[0] = first.multiply(&TreeWord::parse("a", 0).unwrap()).unwrap();
        tampered.push(("altered step", t));
    }
    for (what, t) in tampered {
        ensure(!verify_certificate(&t).is_valid(), || {
            format!("{omega}, m = {m}: {what} accepted")
        })?;
    }
    Ok(())
}

fn certificates() -> Outcome {
    let classical = OmegaSequence::classical();
    for m in 2..=6 {
        check_certificate(&classical, m)?;
    }
    for s in ["db", "bcd", "c(dcb)"] {
        let w: OmegaSequence = s.parse().unwrap();
        for m in 2..=5 {
            check_certificate(&w, m)?;
        }
    }
    Ok(())
}

/// Size of the subgroup of `(Z_p)^n` spanned by `vectors`, by closure.
fn span_size(p: i64, n: usize, vectors: &[Vec<i64>]) -> usize {
    let mut seen = HashSet::from([vec![0i64; n]]);
    let mut queue = vec![vec![0i64; n]];
    while let Some(x) = queue.pop() {
        for v in vectors {
            let y: Vec<i64> = x.iter().zip(v).map(|(a, b)| (a + b) % p).collect();
            if seen.insert(y.clone()) {
                queue.push(y);
            }
        }
    }
    seen.len()
}

/// Generating `m`-tuples of `(Z_p)^n` by direct enumeration.
fn count_generating(p: i64, n: usize, m: usize) -> usize {
    let q = (p as usize).pow(n as u32);
    let vec_of = |mut i: usize| -> Vec<i64> {
        (0..n)
            .map(|_| {
                let c = (i % p as usize) as i64;
                i /= p as usize;
                c
            })
            .collect()
    };
    (0..q.pow(m as u32))
        .filter(|&code| {
            let vs: Vec<Vec<i64>> = (0..m).map(|j| vec_of(code / q.pow(j as u32) % q)).collect();
            span_size(p, n, &vs) == q
        })
        .count()
}

fn gl_formula(p: usize, n: usize, m: usize) -> usize {
    (0..n).map(|i| p.pow(m as u32) - p.pow(i as u32)).product()
}

fn finite_examples() -> Outcome {
    for (p, n, m, comps) in [
        (3u32, 2usize, 2usize, Some(2usize)),
        (5, 2, 2, Some(4)),
        (2, 3, 3, Some(1)),
        (2, 3, 4, Some(1)),
    ] {
        let g = ModVector::new(p, n).map_err(|e| e.to_string())?;
        let c = components_finite(&g, m).map_err(|e| e.to_string())?;
        let formula = gl_formula(p as usize, n, m);
        let enumerated = count_generating(p as i64, n, m);
        ensure(c.generating_tuples == formula && formula == enumerated, || {
            format!(
                "Z_{p}^{n}, m = {m}: census {} formula {formula} enumeration {enumerated}",
                c.generating_tuples
            )
        })?;
        ensure(c.components.iter().sum::<usize>() == formula, || {
            format!("Z_{p}^{n}: component sizes")
        })?;
        if let Some(k) = comps {
            ensure(c.components.len() == k, || {
                format!("Z_{p}^{n}, m = {m}: {} components, expected {k}", c.components.len())
            })?;
        }
    }
    Ok(())
}

fn z_growth() -> Outcome {
    let origin = vec![FreeAbelianElement::from_i64s(&[1]), FreeAbelianElement::from_i64s(&[1])];
    let ex = ball(&Zd::new(1), &origin, BallOptions::new(18));
    ensure(!ex.table.truncated, || "ball truncated".into())?;
    let rep = growth_report(&ex.table, &[4, 8, 16], 2.0).map_err(|e| e.to_string())?;
    // Oracle: plain BFS over integer pairs.
    let mut seen = HashSet::from([(1i64, 1i64)]);
    let mut frontier = vec![(1i64, 1i64)];
    let mut counts = vec![1usize];
    for _ in 0..18 {
        let mut next = Vec::new();
        for (x, y) in frontier {
            for t in [(x, y + x), (x, y - x), (x + y, y), (x - y, y)] {
                if seen.insert(t) {
                    next.push(t);
                }
            }
        }
        counts.push(seen.len());
        frontier = next;
    }
    for row in &rep.rows {
        ensure(row.count == counts[row.radius], || {
            format!("|B({})| = {} vs {}", row.radius, row.count, counts[row.radius])
        })?;
        ensure(row.count as f64 >= 1.05f64.powi(row.radius as i32), || {
            format!("|B({})| too small", row.radius)
        })?;
    }
    Ok(())
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_prgraph"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn reproducibility() -> Outcome {
    let runs: [&[&str]; 2] = [
        &[
            "rw-speed", "--group", "zd", "--d", "1", "--tuple", "1;1", "--steps", "12", "--trials", "100", "--radius",
            "12", "--seed", "11",
        ],
        &[
            "rw-speed", "--pad", "1", "--steps", "10", "--trials", "40", "--radius", "3", "--budget", "200000",
            "--seed", "11",
        ],
    ];
    for (i, args) in runs.iter().enumerate() {
        let reference = run_cli(args)?;
        for threads in ["1", "2", "4"] {
            let mut a = args.to_vec();
            a.extend(["--threads", threads]);
            ensure(run_cli(&a)? == reference, || {
                format!("run {i}: output differs with --threads {threads}")
            })?;
        }
        ensure(run_cli(args)? == reference, || {
            format!("run {i}: output differs between runs")
        })?;
        let text = String::from_utf8(reference).unwrap();
        let steps: usize = args[args.iter().position(|&a| a == "--steps").unwrap() + 1]
            .parse()
            .unwrap();
        let mut rows = 0;
        for line in text.lines().filter(|l| !l.starts_with('#')).skip(1) {
            let (_, d) = line.split_once(',').ok_or_else(|| format!("bad row {line:?}"))?;
            if let Ok(d) = d.parse::<usize>() {
                ensure(d <= steps, || format!("run {i}: dist {d} > {steps}"))?;
            } else if i == 0 {
                return Err(format!("run {i}: censored row {line:?} inside a ball of radius >= t"));
            }
            rows += 1;
        }
        ensure(rows > 0, || format!("run {i}: no trials"))?;
    }
    // Library level: the same statistics under differently sized pools.
    let b = Zd::new(1);
    let origin = vec![FreeAbelianElement::from_i64s(&[1]), FreeAbelianElement::from_i64s(&[1])];
    let opts = WalkOptions {
        steps: 15,
        trials: 64,
        radius: 15,
        budget: 1_000_000,
        seed: 5,
    };
    let stats: Vec<_> = [1, 2, 4]
        .iter()
        .map(|&n| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
            pool.install(|| rw_speed(&b, &origin, opts))
        })
        .collect();
    ensure(stats.windows(2).all(|w| w[0] == w[1]), || {
        "library stats depend on the pool size".into()
    })?;
    ensure(
        stats[0].distances.iter().all(|d| matches!(d, Some(d) if *d <= 15)),
        || "dist(t) > t".into(),
    )
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 11] = [
        ("relations suite", relations_suite, Duration::from_secs(10)),
        ("pinned action value", pinned_value, Duration::from_secs(1)),
        ("classical witnesses", classical_witnesses, Duration::from_secs(30)),
        ("generalized witnesses", generalized_witnesses, Duration::from_secs(60)),
        ("order of a d_k", ad_order, Duration::from_secs(60)),
        ("transitivity", transitivity, Duration::from_secs(60)),
        ("cubicity oracle equivalence", cubicity, Duration::from_secs(300)),
        ("certificates", certificates, Duration::from_secs(300)),
        ("finite examples", finite_examples, Duration::from_secs(120)),
        ("growth of the Z graph", z_growth, Duration::from_secs(60)),
        ("reproducibility", reproducibility, Duration::from_secs(300)),
    ];
    let mut failed = Vec::new();
    let mut stdout = std::io::stdout().lock();
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run().and_then(|()| {
            let took = start.elapsed();
            ensure(took <= *limit, || format!("took {took:.1?}, limit {limit:?}"))
        });
        let took = start.elapsed();
        let line = match &outcome {
            Ok(()) => format!("criterion {}: PASS  {name} ({took:.2?})", i + 1),
            Err(e) => format!("criterion {}: FAIL  {name} ({took:.2?}): {e}", i + 1),
        };
        // Bypass the test harness capture so the summary is always shown.
        let _ = writeln!(stdout, "{line}");
        if outcome.is_err() {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
