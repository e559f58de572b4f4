//! Acceptance suite: ten end-to-end criteria, one PASS/FAIL line each.
//!
//! Every criterion compares the library against an oracle written here
//! from first principles (enumeration, brute-force prefix action, lasso
//! shifts, exact-cover search). A criterion listed in `UNATTAINABLE` is
//! still run and reported, but its failure does not fail the suite; the
//! reason is printed with it.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;
use std::time::Instant;

use kght_core::literal::format_pairs;
use kght_core::periodicity::hermite_basis;
use kght_core::sample::{
    random_complete_family, random_cylinder_set, random_kernel_element, random_path, random_pis,
    random_two_graph, random_unitary, rng,
};
use kght_core::{
    action, extend_with, i_mu, i_mu_preimage, in_kernel_n, in_rigid_stabilizer, is_aperiodic,
    is_period, make_pis, make_unitary, per_group_generators, periodicity, CylinderSet, Degree,
    Error, ExtendMethod, ExtendOptions, KGraph, Pair, Path, PeriodCandidate, PisElement, Preset,
    UTable, Verdict,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// Criteria whose literal statement is false; see the printed reason.
const UNATTAINABLE: &[(usize, &str)] = &[(
    1,
    "on the 2-cycle, tables such as [e2.e1 -> v:v1, v:v2 -> v:v2] are unitary but not powers \
     of the generator, so the unitary group is not cyclic; parts (i) and (ii) are exact",
)];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn preset(spec: &str) -> Arc<KGraph> {
    Arc::new(Preset::from_spec(spec).expect("valid preset").graph())
}

fn err(e: Error) -> String {
    e.to_string()
}

// ---------------------------------------------------------------------------
// Brute-force oracles.

/// `w` mapped through the unique pair whose right path is a prefix of `w`,
/// or `None` if no pair or several pairs match.
fn oracle_apply(g: &KGraph, pairs: &[Pair], w: &Path) -> Option<Path> {
    let mut hits = pairs.iter().filter(|(_, b)| {
        b.range() == w.range()
            && b.degree().le(w.degree())
            && g.factorize(w, b.degree()).map(|(h, _)| h == *b).unwrap_or(false)
    });
    let (a, b) = hits.next()?;
    if hits.next().is_some() {
        return None;
    }
    let (_, tail) = g.factorize(w, b.degree()).ok()?;
    g.compose(a, &tail).ok()
}

/// Completeness by explicit refinement: the family refined to its join
/// degree lists every path of that degree exactly once.
fn oracle_complete(g: &KGraph, family: &[Path]) -> bool {
    if family.is_empty() {
        return false;
    }
    let d = Degree::join_all(g.rank(), family.iter().map(|p| p.degree()));
    let mut refined: Vec<Path> = family
        .iter()
        .flat_map(|p| g.extensions(p, &d.checked_sub(p.degree()).expect("join")))
        .collect();
    refined.sort();
    let mut all = g.enumerate_all(&d);
    all.sort();
    refined == all
}

/// Whether prefix exchange at the right-column join depth is a bijection:
/// every depth-Q path is under exactly one right path, and the images,
/// refined to a common degree, list every path of that degree once.
fn oracle_bijective(g: &KGraph, pairs: &[Pair]) -> bool {
    let q = Degree::join_all(g.rank(), pairs.iter().map(|(_, b)| b.degree()));
    let mut images = Vec::new();
    for w in g.enumerate_all(&q) {
        match oracle_apply(g, pairs, &w) {
            Some(img) => images.push(img),
            None => return false,
        }
    }
    // Duplicated images make the refinement longer than the full list.
    oracle_complete(g, &images)
}

// ---------------------------------------------------------------------------
// 1. The 2-cycle.

fn word(g: &KGraph, names: &[&str]) -> Path {
    let ids: Vec<_> = names.iter().map(|n| g.edge_by_name(n).expect("edge")).collect();
    g.path_from_word(&ids).expect("composable")
}

/// `(e2e1)^m` or `(e1e2)^m`, optionally followed by one more edge.
fn alternating(g: &KGraph, first: &str, second: &str, m: usize, extra: bool) -> Path {
    let mut names = Vec::new();
    for _ in 0..m {
        names.push(first);
        names.push(second);
    }
    if extra {
        names.push(first);
    }
    if names.is_empty() {
        // The empty word at the range of `first`.
        let e = g.edge(g.edge_by_name(first).expect("edge"));
        return g.vertex_path(e.range);
    }
    word(g, &names)
}

fn criterion_1() -> Outcome {
    let g = preset("twocycle");
    let v = |n: &str| g.vertex_path(g.vertex_id(n).expect("vertex"));
    let u = make_unitary(&g, vec![(word(&g, &["e1"]), v("v1")), (word(&g, &["e2"]), v("v2"))]).map_err(err)?;

    // (i) Powers, computed by raw products and by `pow`.
    let mut raw = UTable::identity(&g);
    for j in 0..=11usize {
        let m = j / 2;
        let expected = if j % 2 == 0 {
            vec![(alternating(&g, "e2", "e1", m, false), v("v1")), (alternating(&g, "e1", "e2", m, false), v("v2"))]
        } else {
            vec![(alternating(&g, "e2", "e1", m, true), v("v2")), (alternating(&g, "e1", "e2", m, true), v("v1"))]
        };
        let expected = make_unitary(&g, expected).map_err(err)?;
        ensure(raw.pairs() == expected.pairs(), || {
            format!("U^{j} expands to {} instead of {}", raw.to_literal(), expected.to_literal())
        })?;
        ensure(u.pow(j as i64).pairs() == expected.pairs(), || format!("pow({j}) differs"))?;
        raw = raw.multiply(&u).map_err(err)?;
    }

    // (ii) Kernel membership.
    for j in -10..=10i64 {
        let k = in_kernel_n(&u.pow(j)).map_err(err)?;
        ensure(k == (j % 2 == 0), || format!("in_kernel_n(U^{j}) = {k}"))?;
    }

    // (iii) Every table whose paths have length at most 4: all subsets of
    // at most three same-source pairs, validated by the library and by the
    // refinement oracle, then compared with U^j for |j| <= 8.
    let paths: Vec<Path> = (0..=4).flat_map(|l| g.enumerate_all(&Degree::from_slice(&[l]))).collect();
    let candidates: Vec<Pair> = paths
        .iter()
        .flat_map(|a| paths.iter().filter(move |b| b.source() == a.source()).map(move |b| (a.clone(), b.clone())))
        .collect();
    let powers: Vec<UTable> = (-8..=8).map(|j| u.pow(j)).collect();
    let (mut unitaries, mut non_powers, mut example) = (0usize, 0usize, None);
    let n = candidates.len();
    let mut subsets: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            subsets.push(vec![i, j]);
            for k in (j + 1)..n {
                subsets.push(vec![i, j, k]);
            }
        }
    }
    for s in subsets {
        let pairs: Vec<Pair> = s.iter().map(|&i| candidates[i].clone()).collect();
        let left: Vec<Path> = pairs.iter().map(|p| p.0.clone()).collect();
        let right: Vec<Path> = pairs.iter().map(|p| p.1.clone()).collect();
        let oracle = oracle_complete(&g, &left) && oracle_complete(&g, &right);
        let lib = make_unitary(&g, pairs.clone());
        ensure(lib.is_ok() == oracle, || format!("unitarity of {} disagrees", format_pairs(&g, &pairs)))?;
        if let Ok(t) = lib {
            unitaries += 1;
            if !powers.iter().any(|p| p.equals(&t).unwrap_or(false)) {
                non_powers += 1;
                example.get_or_insert_with(|| t.to_literal());
            }
        }
    }
    ensure(non_powers == 0, || {
        format!(
            "(i),(ii) exact; (iii) {unitaries} unitaries found, {non_powers} not powers of U, e.g. {}",
            example.clone().unwrap_or_default()
        )
    })?;
    Ok(format!("powers exact for m <= 5, kernel exact for |j| <= 10, {unitaries} unitaries all powers"))
}

// ---------------------------------------------------------------------------
// 2. Unitary criterion.

fn random_family(g: &Arc<KGraph>, r: &mut ChaCha8Rng, kind: usize) -> Vec<Pair> {
    let atoms = r.gen_range(1..=2);
    let u = random_unitary(g, r, atoms, 3);
    let mut pairs = u.pairs().to_vec();
    match kind {
        0 => pairs,
        1 => random_pis(g, r, 1, 3).pairs().to_vec(),
        2 => {
            if pairs.len() > 1 {
                pairs.remove(r.gen_range(0..pairs.len()));
            }
            pairs
        }
        _ => {
            // Shrink one right cylinder: the left column stays complete.
            let i = r.gen_range(0..pairs.len());
            let (a, b) = pairs[i].clone();
            let c = r.gen_range(0..g.rank());
            let ext = g.extensions(&b, &Degree::unit(g.rank(), c));
            let pick = ext.choose(r).expect("source-free").clone();
            let tail = g.factorize(&pick, b.degree()).expect("extension").1;
            pairs[i] = (if r.gen_bool(0.5) { a } else { g.compose(&a, &tail).expect("composable") }, pick);
            pairs
        }
    }
}

fn criterion_2() -> Outcome {
    let graphs: Vec<Arc<KGraph>> = ["higman:2,1", "higman:3,2", "kv:2", "flip:2,2"].iter().map(|s| preset(s)).collect();
    let mut r = rng(2);
    let (mut yes, mut no, mut skipped) = (0, 0, 0);
    let mut i = 0;
    while yes + no < 200 {
        let g = &graphs[i % graphs.len()];
        let pairs = random_family(g, &mut r, (i / graphs.len()) % 4);
        i += 1;
        if make_pis(g, pairs.clone()).is_err() {
            skipped += 1;
            continue;
        }
        let lib = make_unitary(g, pairs.clone()).is_ok();
        let left: Vec<Path> = pairs.iter().map(|p| p.0.clone()).collect();
        let right: Vec<Path> = pairs.iter().map(|p| p.1.clone()).collect();
        let complete = oracle_complete(g, &left) && oracle_complete(g, &right);
        let bijective = oracle_bijective(g, &pairs);
        ensure(lib == complete && complete == bijective, || {
            format!(
                "make_unitary={lib} complete={complete} bijective={bijective} for {}",
                format_pairs(g, &pairs)
            )
        })?;
        if lib {
            yes += 1
        } else {
            no += 1
        }
    }
    Ok(format!("200 families ({yes} unitary, {no} not, {skipped} non-orthogonal skipped), 0 discrepancies"))
}

// ---------------------------------------------------------------------------
// 3. Group and inverse-semigroup laws.

fn diagonal(g: &Arc<KGraph>, r: &mut ChaCha8Rng) -> PisElement {
    let s = random_cylinder_set(g, r, 3, false);
    PisElement::Table(make_pis(g, s.paths().iter().map(|p| (p.clone(), p.clone())).collect()).expect("diagonal"))
}

fn criterion_3() -> Outcome {
    let graphs: Vec<Arc<KGraph>> =
        ["twocycle", "higman:2,1", "higman:3,2", "kv:2", "flip:2,2"].iter().map(|s| preset(s)).collect();
    let mut r = rng(3);
    for i in 0..1000 {
        let g = &graphs[i % graphs.len()];
        let law = (i / graphs.len()) % 5;
        let id = UTable::identity(g);
        let ok = match law {
            0 => {
                let (u, v, w) = (random_unitary(g, &mut r, 2, 3), random_unitary(g, &mut r, 2, 3), random_unitary(g, &mut r, 2, 3));
                let lhs = u.multiply(&v).and_then(|x| x.multiply(&w)).map_err(err)?;
                let rhs = v.multiply(&w).and_then(|x| u.multiply(&x)).map_err(err)?;
                lhs.equals(&rhs).map_err(err)?
            }
            1 => {
                let u = random_unitary(g, &mut r, 2, 3);
                u.multiply(&id).map_err(err)?.equals(&u).map_err(err)? && id.multiply(&u).map_err(err)?.equals(&u).map_err(err)?
            }
            2 => {
                let u = random_unitary(g, &mut r, 2, 3);
                u.multiply(&u.inverse()).map_err(err)?.equals(&id).map_err(err)?
                    && u.inverse().multiply(&u).map_err(err)?.equals(&id).map_err(err)?
            }
            3 => {
                let w = PisElement::Table(random_pis(g, &mut r, 2, 3));
                w.multiply(&w.adjoint()).and_then(|x| x.multiply(&w)).map_err(err)?.equals(&w).map_err(err)?
            }
            _ => {
                let (e, f) = if r.gen_bool(0.5) {
                    (diagonal(g, &mut r), diagonal(g, &mut r))
                } else {
                    let (a, b) = (PisElement::Table(random_pis(g, &mut r, 1, 3)), PisElement::Table(random_pis(g, &mut r, 1, 3)));
                    (a.adjoint().multiply(&a).map_err(err)?, b.multiply(&b.adjoint()).map_err(err)?)
                };
                e.multiply(&f).map_err(err)?.equals(&f.multiply(&e).map_err(err)?).map_err(err)?
            }
        };
        ensure(ok, || format!("law {law} failed on instance {i}"))?;
    }
    Ok("1000 instances (associativity, identity, inverse, W W* W = W, commuting idempotents), 0 failures".into())
}

// ---------------------------------------------------------------------------
// 4. Cocycle identity of the prefix action.

fn criterion_4() -> Outcome {
    let graphs: Vec<Arc<KGraph>> =
        ["twocycle", "higman:2,1", "higman:3,2", "kv:2", "flip:2,2"].iter().map(|s| preset(s)).collect();
    let mut r = rng(4);
    for i in 0..500 {
        let g = &graphs[i % graphs.len()];
        let (u, v) = (random_unitary(g, &mut r, 1, 3), random_unitary(g, &mut r, 1, 3));
        let uv = u.multiply(&v).map_err(err)?;
        let qu = u.as_pis().right_degree();
        let qv = v.as_pis().right_degree();
        let d = (&qv + &qu).join(&uv.as_pis().right_degree());
        let start = r.gen_range(0..g.vertex_count()) as u32;
        let w = random_path(g, &mut r, start, &d);
        let lhs = action::apply_prefix(&uv, &w).map_err(err)?;
        let rhs = action::apply_prefix(&v, &w).and_then(|x| action::apply_prefix(&u, &x)).map_err(err)?;
        ensure(lhs == rhs, || format!("instance {i}: {} vs {}", g.format_path(&lhs), g.format_path(&rhs)))?;
        ensure(oracle_apply(g, uv.pairs(), &w).as_ref() == Some(&lhs), || format!("instance {i}: oracle differs"))?;
    }
    Ok("500 instances, 0 failures".into())
}

// ---------------------------------------------------------------------------
// 5. Periodicity against a lasso oracle.

/// All eventually periodic paths with `head + cycle <= depth` blocks, as
/// block lists with the head length.
fn lassos(g: &KGraph, depth: usize) -> Vec<(Vec<Path>, usize)> {
    let blocks = g.enumerate_all(&Degree::ones(g.rank()));
    let mut out = Vec::new();
    let mut stack: Vec<Vec<Path>> = blocks.iter().map(|b| vec![b.clone()]).collect();
    while let Some(seq) = stack.pop() {
        for a in 0..seq.len() {
            // Cycle seq[a..] must close up.
            if seq[seq.len() - 1].source() == seq[a].range() {
                out.push((seq.clone(), a));
            }
        }
        if seq.len() < depth {
            for b in &blocks {
                if seq[seq.len() - 1].source() == b.range() {
                    let mut next = seq.clone();
                    next.push(b.clone());
                    stack.push(next);
                }
            }
        }
    }
    out
}

/// The first `count` blocks of the lasso, joined into one path.
fn unroll(g: &KGraph, seq: &[Path], head: usize, count: usize) -> Path {
    let period = seq.len() - head;
    let mut word = Vec::new();
    for j in 0..count {
        let b = if j < seq.len() { &seq[j] } else { &seq[head + (j - head) % period] };
        word.extend_from_slice(b.edges());
    }
    g.path_from_word(&word).expect("blocks compose")
}

/// `σ^m x = σ^n x` for every listed lasso: both shifts have head at most
/// `a` and period `b`, so the first `a + b` blocks decide equality.
fn oracle_period(g: &KGraph, m: &Degree, n: &Degree, unrolled: &[(Path, usize)]) -> bool {
    let c = Degree::ones(g.rank());
    unrolled.iter().all(|(p, ab)| {
        (0..*ab as u32).all(|j| {
            let (mj, nj) = (m + &c.scale(j), n + &c.scale(j));
            g.segment(p, &mj, &(&mj + &c)).expect("inside") == g.segment(p, &nj, &(&nj + &c)).expect("inside")
        })
    })
}

fn classes(rank: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (-bound..=bound).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out.into_iter()
        .filter(|v| v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0))
        .collect()
}

fn cross_validate(g: &KGraph, bound: i64) -> Result<usize, String> {
    let depth = 4;
    let unrolled: Vec<(Path, usize)> = lassos(g, depth)
        .into_iter()
        .map(|(seq, head)| {
            let count = seq.len();
            (unroll(g, &seq, head, 2 * bound as usize + count + 1), count)
        })
        .collect();
    let mut periods = 0;
    for class in classes(g.rank(), bound) {
        let cand = PeriodCandidate::from_class(&class);
        let lib = is_period(g, &cand).map_err(err)?;
        let oracle = oracle_period(g, cand.m(), cand.n(), &unrolled);
        ensure(lib == oracle, || format!("class {cand}: is_period={lib}, oracle={oracle}\n{}", g.to_text()))?;
        periods += lib as usize;
    }
    Ok(periods)
}

fn criterion_5() -> Outcome {
    let presets = [
        ("twocycle", 3),
        ("higman:2,1", 3),
        ("higman:3,2", 3),
        ("kv:2", 2),
        ("kv:3", 1),
        ("flip:2,2", 2),
        ("flip:3,2", 1),
    ];
    let mut report = Vec::new();
    for (spec, bound) in presets {
        let periods = cross_validate(&preset(spec), bound)?;
        report.push(format!("{spec}:{periods}"));
    }
    let mut r = rng(5);
    let mut periodic = 0;
    for _ in 0..50 {
        let (n1, n2) = loop {
            let pair = (r.gen_range(1..=3), r.gen_range(1..=3));
            if pair != (1, 1) {
                break pair;
            }
        };
        let g = random_two_graph(&mut r, n1, n2);
        periodic += (cross_validate(&g, 2)? > 0) as usize;
    }
    for (k, n) in [(2, 2), (2, 3), (3, 2)] {
        let g = preset(&format!("flip:{k},{n}"));
        let gens = per_group_generators(&g, 3).map_err(err)?;
        let expected: Vec<Vec<i64>> = (0..k - 1)
            .map(|i| (0..k).map(|c| if c == i { 1 } else if c == i + 1 { -1 } else { 0 }).collect())
            .collect();
        let got = hermite_basis(gens.iter().map(|c| c.class()).collect());
        ensure(got == hermite_basis(expected), || format!("flip({k},{n}) lattice {got:?}"))?;
    }
    for spec in ["kv:2", "higman:2,1", "higman:3,2", "higman:2,3"] {
        let g = preset(spec);
        ensure(is_aperiodic(&g, 3).map_err(err)? == Verdict::NoPeriodUpToBound(3), || format!("{spec} reports a period"))?;
        ensure(per_group_generators(&g, 3).map_err(err)?.is_empty(), || format!("{spec} has generators"))?;
    }
    Ok(format!(
        "presets agree (periods found {}), 50 random 2-graphs agree ({periodic} periodic), flip lattices exact, kv/higman aperiodic",
        report.join(" ")
    ))
}

// ---------------------------------------------------------------------------
// 6. Kernel structure on flip(2,2).

fn criterion_6() -> Outcome {
    let g = preset("flip:2,2");
    let mut r = rng(6);
    let kernel: Vec<UTable> = (0..100).map(|_| random_kernel_element(&g, &mut r, 3)).collect();
    for k in &kernel {
        ensure(in_kernel_n(k).map_err(err)?, || format!("sampled {} not in kernel", k.to_literal()))?;
    }
    for (i, a) in kernel.iter().enumerate() {
        for b in &kernel[i + 1..] {
            let ab = a.multiply(b).map_err(err)?;
            let ba = b.multiply(a).map_err(err)?;
            ensure(ab.equals(&ba).map_err(err)?, || format!("{} and {} do not commute", a.to_literal(), b.to_literal()))?;
        }
    }
    for k in &kernel {
        let x = random_unitary(&g, &mut r, 2, 3);
        let conj = x.multiply(k).and_then(|y| y.multiply(&x.inverse())).map_err(err)?;
        ensure(in_kernel_n(&conj).map_err(err)?, || "conjugate left the kernel".into())?;
    }
    for _ in 0..200 {
        let a = random_unitary(&g, &mut r, 2, 3);
        let b = if r.gen_bool(0.5) { random_unitary(&g, &mut r, 2, 3) } else { kernel.choose(&mut r).expect("nonempty").clone() };
        let lhs = periodicity::flip_quotient(&a.multiply(&b).map_err(err)?).map_err(err)?;
        let rhs = periodicity::flip_quotient(&a)
            .and_then(|x| periodicity::flip_quotient(&b).and_then(|y| x.multiply(&y)))
            .map_err(err)?;
        ensure(lhs.equals(&rhs).map_err(err)?, || "quotient not multiplicative".into())?;
    }
    let (mut inside, mut outside) = (0, 0);
    for i in 0..200 {
        let u = match i % 3 {
            0 => random_unitary(&g, &mut r, 2, 3),
            1 => kernel.choose(&mut r).expect("nonempty").clone(),
            _ => {
                let x = random_unitary(&g, &mut r, 1, 3);
                x.multiply(kernel.choose(&mut r).expect("nonempty")).map_err(err)?
            }
        };
        let q = periodicity::flip_quotient(&u).map_err(err)?.is_identity();
        let n = in_kernel_n(&u).map_err(err)?;
        ensure(q == n, || format!("quotient identity={q} but in_kernel_n={n} for {}", u.to_literal()))?;
        if n {
            inside += 1
        } else {
            outside += 1
        }
    }
    Ok(format!("4950 commuting pairs, 100 conjugates, 200 products, 200 kernel checks ({inside} in, {outside} out)"))
}

// ---------------------------------------------------------------------------
// 7. Extension to unitaries.

fn power(g: &KGraph, d: &Degree) -> u128 {
    g.count_paths(0, d)
}

fn leftover(g: &KGraph, column: &[Path]) -> (Degree, u128) {
    let total = column.iter().fold(Degree::zero(g.rank()), |acc, p| &acc + p.degree());
    let covered: u128 = column.iter().map(|p| power(g, &total.checked_sub(p.degree()).expect("sum"))).sum();
    (total.clone(), power(g, &total) - covered)
}

/// The sizes of exact covers of the complement of `column` by paths of
/// total degree at most 3, computed on cells of a common refinement.
fn cover_sizes(g: &KGraph, column: &[Path]) -> BTreeSet<usize> {
    let small: Vec<Path> = (0..=3u32)
        .flat_map(|t| compositions(g.rank(), t))
        .flat_map(|d| g.enumerate_all(&d))
        .collect();
    let d = Degree::join_all(g.rank(), small.iter().chain(column).map(|p| p.degree()));
    let cells = g.enumerate_all(&d);
    assert!(cells.len() <= 64, "cell space too large for the oracle");
    let index: HashMap<Path, usize> = cells.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let mask = |p: &Path| -> u64 {
        g.extensions(p, &d.checked_sub(p.degree()).expect("join"))
            .iter()
            .fold(0u64, |m, w| m | 1 << index[w])
    };
    let full: u64 = if cells.len() == 64 { u64::MAX } else { (1u64 << cells.len()) - 1 };
    let used = column.iter().fold(0u64, |m, p| m | mask(p));
    let pieces: Vec<u64> = small.iter().map(mask).filter(|m| m & used == 0).collect();
    let mut memo = HashMap::new();
    sizes(full & !used, &pieces, &mut memo)
}

fn sizes(rest: u64, pieces: &[u64], memo: &mut HashMap<u64, BTreeSet<usize>>) -> BTreeSet<usize> {
    if rest == 0 {
        return BTreeSet::from([0]);
    }
    if let Some(s) = memo.get(&rest) {
        return s.clone();
    }
    let low = rest & rest.wrapping_neg();
    let mut out = BTreeSet::new();
    for &p in pieces {
        if p & low != 0 && p & !rest == 0 {
            out.extend(sizes(rest & !p, pieces, memo).into_iter().map(|k| k + 1));
        }
    }
    memo.insert(rest, out.clone());
    out
}

fn compositions(rank: usize, total: u32) -> Vec<Degree> {
    if rank == 1 {
        return vec![Degree::from_slice(&[total])];
    }
    (0..=total)
        .flat_map(|first| {
            compositions(rank - 1, total - first).into_iter().map(move |rest| {
                let mut v = vec![first];
                v.extend_from_slice(rest.components());
                Degree::from_slice(&v)
            })
        })
        .collect()
}

fn general_input(g: &Arc<KGraph>, r: &mut ChaCha8Rng, i: usize) -> Vec<Pair> {
    match i % 3 {
        0 => random_pis(g, r, 1, 2).pairs().to_vec(),
        1 => {
            // Left complete, right a proper subfamily of a larger family.
            let left = random_complete_family(g, r, 1);
            let mut right = random_complete_family(g, r, 2);
            right.shuffle(r);
            if right.len() <= left.len() {
                return random_pis(g, r, 1, 2).pairs().to_vec();
            }
            left.into_iter().zip(right).collect()
        }
        _ => {
            let mut left = random_complete_family(g, r, 2);
            let mut right = random_complete_family(g, r, 2);
            left.shuffle(r);
            right.shuffle(r);
            let n = r.gen_range(1..=left.len().min(right.len()));
            left.into_iter().zip(right).take(n).collect()
        }
    }
}

fn criterion_7() -> Outcome {
    let graphs: Vec<Arc<KGraph>> = ["higman:2,1", "kv:2", "flip:2,2"].iter().map(|s| preset(s)).collect();
    let mut r = rng(7);
    let mut done = 0;
    let mut attempts = 0;
    while done < 100 {
        attempts += 1;
        let g = &graphs[attempts % graphs.len()];
        let u = random_unitary(g, &mut r, 1, 2);
        let mut pairs = u.pairs().to_vec();
        pairs.shuffle(&mut r);
        pairs.truncate(r.gen_range(1..=2));
        let left: Vec<Path> = pairs.iter().map(|p| p.0.clone()).collect();
        let right: Vec<Path> = pairs.iter().map(|p| p.1.clone()).collect();
        let ((m, s), (n_deg, t)) = (leftover(g, &left), leftover(g, &right));
        let n = pairs.len() as u128;
        if s < n + 1 || t < n + 1 {
            continue;
        }
        let (out, method) = extend_with(g, pairs.clone(), &ExtendOptions::default()).map_err(err)?;
        let expected = power(g, &m) + power(g, &n_deg) - 1;
        ensure(method == ExtendMethod::Interleaved, || format!("method {method:?} in regime"))?;
        ensure(out.len() as u128 == expected, || format!("{} entries, expected {expected}", out.len()))?;
        ensure(pairs.iter().all(|p| out.pairs().contains(p)), || "inputs missing".into())?;
        let (ol, or): (Vec<Path>, Vec<Path>) = out.pairs().iter().cloned().unzip();
        ensure(oracle_complete(g, &ol) && oracle_complete(g, &or), || "output not complete".into())?;
        done += 1;
    }

    let (mut extended, mut refused) = (0, 0);
    for i in 0..100 {
        let g = &graphs[i % graphs.len()];
        let pairs = general_input(g, &mut r, i);
        match extend_with(g, pairs.clone(), &ExtendOptions::default()) {
            Ok((out, _)) => {
                let (ol, or): (Vec<Path>, Vec<Path>) = out.pairs().iter().cloned().unzip();
                ensure(oracle_complete(g, &ol) && oracle_complete(g, &or), || "output not complete".into())?;
                ensure(pairs.iter().all(|p| out.pairs().contains(p)), || "inputs missing".into())?;
                extended += 1;
            }
            Err(Error::NotExtendable { .. }) => {
                let left: Vec<Path> = pairs.iter().map(|p| p.0.clone()).collect();
                let right: Vec<Path> = pairs.iter().map(|p| p.1.clone()).collect();
                let common = cover_sizes(g, &left).intersection(&cover_sizes(g, &right)).count();
                ensure(common == 0, || format!("{} refused but completable", format_pairs(g, &pairs)))?;
                refused += 1;
            }
            Err(e) => return Err(format!("{} failed: {e}", format_pairs(g, &pairs))),
        }
    }
    Ok(format!("100 regime inputs exact; 100 general inputs ({extended} extended, {refused} correctly refused)"))
}

// ---------------------------------------------------------------------------
// 8. Interior of the fixed-point set.

fn criterion_8() -> Outcome {
    let graphs: Vec<Arc<KGraph>> = ["higman:2,1", "higman:3,2", "kv:2"].iter().map(|s| preset(s)).collect();
    let mut r = rng(8);
    let mut nonempty = 0;
    for i in 0..100 {
        let g = &graphs[i % graphs.len()];
        let u = random_unitary(g, &mut r, 1 + i % 2, 3).reduce();
        let m = u.certificate() + &Degree::ones(g.rank());
        let fixed: BTreeSet<Path> = g
            .enumerate_all(&m)
            .into_iter()
            .filter(|w| oracle_apply(g, u.pairs(), w).as_ref() == Some(w))
            .collect();
        let interior = action::fix_interior(&u);
        let refined: BTreeSet<Path> = interior
            .paths()
            .iter()
            .flat_map(|p| g.extensions(p, &m.checked_sub(p.degree()).expect("certificate dominates")))
            .collect();
        ensure(fixed == refined, || format!("table {}: interior {}", u.to_literal(), interior.to_literal()))?;
        nonempty += !interior.is_empty() as usize;
    }
    Ok(format!("100 reduced tables, 0 discrepancies ({nonempty} with nonempty interior)"))
}

// ---------------------------------------------------------------------------
// 9. Transport and compression.

/// `⊔ α·σ^{d(β)}(Z(β) ∩ Y)` over the pairs.
fn image(g: &Arc<KGraph>, pairs: &[Pair], y: &CylinderSet) -> Result<CylinderSet, String> {
    let mut out = Vec::new();
    for (alpha, beta) in pairs {
        let piece = CylinderSet::new(g.clone(), vec![beta.clone()]).map_err(err)?.intersection(y);
        // Members may be written under a different but equal cylinder, so
        // refine them below `β` first.
        for p in piece.paths() {
            let rest = p.degree().join(beta.degree()).checked_sub(p.degree()).expect("join");
            for w in g.extensions(p, &rest) {
                let (head, tail) = g.factorize(&w, beta.degree()).map_err(err)?;
                ensure(head == *beta, || format!("{} is not under {}", g.format_path(&w), g.format_path(beta)))?;
                out.push(g.compose(alpha, &tail).map_err(err)?);
            }
        }
    }
    CylinderSet::new(g.clone(), out).map_err(err)
}

fn criterion_9() -> Outcome {
    let connected: Vec<Arc<KGraph>> =
        ["twocycle", "higman:2,1", "higman:3,2", "kv:2", "flip:2,2"].iter().map(|s| preset(s)).collect();
    let mut r = rng(9);
    let mut no_room = 0;
    for i in 0..100 {
        let g = &connected[i % connected.len()];
        let a = random_cylinder_set(g, &mut r, 3, false);
        let b = random_cylinder_set(g, &mut r, 3, false);
        match action::transport(&a, &b) {
            Ok(t) => {
                ensure(t.source_set().same_set(&a), || "s(U) != A".into())?;
                ensure(t.range_set().is_subset(&b), || "r(U) not in B".into())?;
                ensure(image(g, t.pairs(), &a)?.same_set(&t.range_set()), || "image mismatch".into())?;
            }
            Err(Error::InsufficientRoom) => {
                // Only the 2-cycle has cylinders that cannot be subdivided.
                ensure(g.edges().len() == g.vertex_count() && a.paths().len() > b.paths().len(), || {
                    format!("no room for {} in {}", a.to_literal(), b.to_literal())
                })?;
                no_room += 1;
            }
            Err(e) => return Err(e.to_string()),
        }
    }
    let single: Vec<Arc<KGraph>> = ["higman:2,1", "kv:2", "flip:2,2"].iter().map(|s| preset(s)).collect();
    for i in 0..100 {
        let g = &single[i % single.len()];
        let y = random_cylinder_set(g, &mut r, 2, true);
        let d = Degree::from_slice(&(0..g.rank()).map(|_| r.gen_range(0..=1)).collect::<Vec<_>>());
        let target = random_path(g, &mut r, 0, &d);
        let u = action::compress(&y, &target)
            .map_err(|e| format!("compress({}, {}): {e}", y.to_literal(), g.format_path(&target)))?;
        let z = CylinderSet::new(g.clone(), vec![target.clone()]).map_err(err)?;
        let img = image(g, u.pairs(), &y)?;
        ensure(img.is_subset(&z), || format!("g·Y = {} not inside Z({})", img.to_literal(), g.format_path(&target)))?;
    }
    Ok(format!("100 transports ({no_room} without room on the 2-cycle), 100 compressions, 0 failures"))
}

// ---------------------------------------------------------------------------
// 10. The embeddings I_mu.

fn criterion_10() -> Outcome {
    let graphs: Vec<Arc<KGraph>> = ["higman:2,1", "kv:2", "flip:2,2"].iter().map(|s| preset(s)).collect();
    let mut r = rng(10);
    let mut equal_pairs = 0;
    for i in 0..200 {
        let g = &graphs[i % graphs.len()];
        let d = Degree::from_slice(&(0..g.rank()).map(|_| r.gen_range(0..=1)).collect::<Vec<_>>());
        let mu = random_path(g, &mut r, 0, &d);
        let a = random_unitary(g, &mut r, 1, 3);
        let b = if i % 4 == 0 {
            // Same element, different representation.
            let q = &a.as_pis().right_degree() + &Degree::ones(g.rank());
            make_unitary(g, a.as_pis().refine_right(&q)).map_err(err)?
        } else {
            random_unitary(g, &mut r, 1, 3)
        };
        let (ia, ib) = (i_mu(&mu, &a).map_err(err)?, i_mu(&mu, &b).map_err(err)?);
        let iab = i_mu(&mu, &a.multiply(&b).map_err(err)?).map_err(err)?;
        ensure(iab.equals(&ia.multiply(&ib).map_err(err)?).map_err(err)?, || "not multiplicative".into())?;
        let same = a.equals(&b).map_err(err)?;
        ensure(ia.equals(&ib).map_err(err)? == same, || "not injective".into())?;
        equal_pairs += same as usize;
        let z = CylinderSet::new(g.clone(), vec![mu.clone()]).map_err(err)?;
        ensure(in_rigid_stabilizer(&ia, &z), || "outside the rigid stabilizer".into())?;
        // Independently: every deep enough path outside Z(mu) is fixed.
        let m = ia.certificate().clone();
        for w in g.enumerate_all(&m) {
            if !g.is_prefix(&mu, &w) {
                ensure(oracle_apply(g, ia.pairs(), &w).as_ref() == Some(&w), || "moves a point outside Z(mu)".into())?;
            }
        }
    }
    for i in 0..50 {
        let g = &graphs[i % graphs.len()];
        let d = Degree::from_slice(&(0..g.rank()).map(|_| r.gen_range(0..=1)).collect::<Vec<_>>());
        let mu = random_path(g, &mut r, 0, &d);
        let a = random_unitary(g, &mut r, 2, 3);
        let u = i_mu(&mu, &a).map_err(err)?;
        let back = i_mu_preimage(&mu, &u).map_err(err)?;
        ensure(back.equals(&a).map_err(err)?, || "preimage differs".into())?;
        ensure(i_mu(&mu, &back).map_err(err)?.equals(&u).map_err(err)?, || "not recovered".into())?;
    }
    Ok(format!("200 pairs multiplicative and injective ({equal_pairs} equal pairs), 50 recovered"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("2-cycle reproduction", criterion_1),
        ("unitary criterion", criterion_2),
        ("group and semigroup laws", criterion_3),
        ("action cocycle", criterion_4),
        ("periodicity cross-validation", criterion_5),
        ("kernel structure", criterion_6),
        ("extension", criterion_7),
        ("fix interior", criterion_8),
        ("transport and compress", criterion_9),
        ("embeddings and rigid stabilizers", criterion_10),
    ];
    let mut unexpected = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = i + 1;
        let start = Instant::now();
        let result = f();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {id:>2} {name} ({secs:.2}s): {detail}"),
            Err(detail) => {
                let known = UNATTAINABLE.iter().find(|(k, _)| *k == id);
                match known {
                    Some((_, why)) => println!("FAIL {id:>2} {name} ({secs:.2}s): {detail} [unattainable as stated: {why}]"),
                    None => {
                        unexpected += 1;
                        println!("FAIL {id:>2} {name} ({secs:.2}s): {detail}");
                    }
                }
            }
        }
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}
