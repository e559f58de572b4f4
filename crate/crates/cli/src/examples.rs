//! `examples`: replays the documented claims for the loaded graph.
//!
//! The graph is classified structurally (cycle graph, flip graph, other
//! aperiodic graphs) and each applicable claim prints one PASS/FAIL line.
//! Randomized claims draw from `KGHT_SEED`.

use std::sync::Arc;

use kght_core::sample::{
    random_atom, random_complete_family, random_cylinder_set, random_kernel_element, random_pis,
    random_unitary, rng,
};
use kght_core::table::is_complete;
use kght_core::{
    action, extend_to_unitary, i_mu, i_mu_preimage, in_kernel_n, in_rigid_stabilizer,
    is_aperiodic, make_unitary, paths_equivalent, per_group_generators, periodicity,
    CylinderSet, Degree, Error, KGraph, Path, PisElement, Result, UTable, Verdict,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::{Record, Session};

const SAMPLES: usize = 20;

struct Claim {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn claim(name: &'static str, pass: bool, detail: impl Into<String>) -> Claim {
    Claim {
        name,
        pass,
        detail: detail.into(),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Family {
    Cycle,
    Flip,
    Aperiodic,
    Other,
}

fn classify(g: &KGraph) -> Family {
    if g.rank() == 1 && g.is_strongly_connected() {
        let one_in = g.vertices().all(|v| g.incoming(v, 0).len() == 1);
        return if one_in { Family::Cycle } else { Family::Aperiodic };
    }
    if g.is_flip() {
        return Family::Flip;
    }
    let trivial = (0..g.rank()).all(|i| {
        ((i + 1)..g.rank()).all(|j| {
            let (ni, nj) = (g.color_counts()[i], g.color_counts()[j]);
            (0..ni).all(|s| (0..nj).all(|t| g.theta(i, j, s, t) == (s, t)))
        })
    });
    if g.is_single_vertex() && trivial && g.color_counts().iter().all(|&c| c >= 2) {
        Family::Aperiodic
    } else {
        Family::Other
    }
}

pub(crate) fn replay(session: &Session) -> Result<String> {
    let g = session.graph().clone();
    let seed = session.config().seed;
    let mut r = rng(seed);
    let family = classify(&g);
    let mut claims = Vec::new();
    claims.push(unitary_criterion(&g, &mut r)?);
    claims.push(group_laws(&g, &mut r)?);
    claims.push(inverse_semigroup(&g, &mut r)?);
    match family {
        Family::Cycle => claims.extend(cycle_claims(&g)?),
        Family::Flip => claims.extend(flip_claims(&g, &mut r, session.config().bound)?),
        Family::Aperiodic => claims.extend(aperiodic_claims(&g, &mut r, session.config().bound)?),
        Family::Other => {}
    }
    let mut out = String::new();
    for c in &claims {
        out += &Record::claim(c.name, c.pass).kv("detail", &c.detail).line();
    }
    let passed = claims.iter().filter(|c| c.pass).count();
    let name = match family {
        Family::Cycle => "cycle",
        Family::Flip => "flip",
        Family::Aperiodic => "aperiodic",
        Family::Other => "other",
    };
    out += &Record::new("examples")
        .kv("family", name)
        .kv("seed", seed)
        .kv("passed", passed)
        .kv("failed", claims.len() - passed)
        .line();
    Ok(out)
}

/// Tables built from complete families are unitary exactly when both
/// columns are complete; dropping a pair breaks both.
fn unitary_criterion(g: &Arc<KGraph>, r: &mut ChaCha8Rng) -> Result<Claim> {
    let mut bad = 0;
    for _ in 0..SAMPLES {
        let w = if r.gen_bool(0.5) {
            random_atom(g, r, 3).into_pis()
        } else {
            random_pis(g, r, 1, 3)
        };
        let complete = is_complete(g, &w.left()) && is_complete(g, &w.right());
        if make_unitary(g, w.pairs().to_vec()).is_ok() != complete {
            bad += 1;
        }
    }
    Ok(claim("unitary_iff_complete_columns", bad == 0, format!("samples={SAMPLES} mismatches={bad}")))
}

fn group_laws(g: &Arc<KGraph>, r: &mut ChaCha8Rng) -> Result<Claim> {
    let mut bad = 0;
    let id = UTable::identity(g);
    for _ in 0..SAMPLES {
        let (u, v, w) = (random_unitary(g, r, 1, 3), random_unitary(g, r, 1, 3), random_unitary(g, r, 1, 3));
        let assoc = u.multiply(&v)?.multiply(&w)?.equals(&u.multiply(&v.multiply(&w)?)?)?;
        let unit = u.multiply(&id)?.equals(&u)? && id.multiply(&u)?.equals(&u)?;
        let inv = u.multiply(&u.inverse())?.is_identity() && u.inverse().multiply(&u)?.is_identity();
        if !(assoc && unit && inv) {
            bad += 1;
        }
    }
    Ok(claim("group_laws", bad == 0, format!("samples={SAMPLES} failures={bad}")))
}

fn inverse_semigroup(g: &Arc<KGraph>, r: &mut ChaCha8Rng) -> Result<Claim> {
    let mut bad = 0;
    for _ in 0..SAMPLES {
        let w = PisElement::Table(random_pis(g, r, 1, 3));
        if !w.multiply(&w.adjoint())?.multiply(&w)?.equals(&w)? {
            bad += 1;
        }
    }
    Ok(claim("partial_isometry_identity", bad == 0, format!("samples={SAMPLES} failures={bad}")))
}

/// The unique path of length `len` with source `v` on a cycle graph.
fn cycle_path(g: &KGraph, v: u32, len: u32) -> Path {
    let d = Degree::from_slice(&[len]);
    g.enumerate_all(&d)
        .into_iter()
        .find(|p| p.source() == v)
        .expect("every vertex of a cycle starts one path of each length")
}

fn cycle_claims(g: &Arc<KGraph>) -> Result<Vec<Claim>> {
    let n = g.vertex_count() as i64;
    let gen_pairs = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| (g.path_from_word(&[i as u32]).expect("edge"), g.vertex_path(e.source)))
        .collect();
    let u = make_unitary(g, gen_pairs)?;
    let mut out = Vec::new();

    let mut bad = Vec::new();
    for j in 0..=11u32 {
        let expected = make_unitary(g, g.vertices().map(|v| (cycle_path(g, v, j), g.vertex_path(v))).collect())?;
        let power = u.pow(j as i64);
        if power.pairs() != expected.pairs() {
            bad.push(j.to_string());
        }
    }
    out.push(claim("generator_powers", bad.is_empty(), format!("exponents=0..11 mismatched={}", bad.join(","))));

    let mut bad = Vec::new();
    for j in -10..=10i64 {
        if in_kernel_n(&u.pow(j))? != (j % n == 0) {
            bad.push(j.to_string());
        }
    }
    out.push(claim(
        "kernel_is_multiples_of_cycle_length",
        bad.is_empty(),
        format!("exponents=-10..10 mismatched={}", bad.join(",")),
    ));

    let finite = (0..=6).all(|l| g.enumerate_all(&Degree::from_slice(&[l])).len() == g.vertex_count());
    out.push(claim("finitely_many_infinite_paths", finite, format!("points={}", g.vertex_count())));

    let mut equiv = true;
    for v in g.vertices() {
        equiv &= paths_equivalent(g, &cycle_path(g, v, n as u32), &g.vertex_path(v))?;
        if n > 1 {
            equiv &= !paths_equivalent(g, &cycle_path(g, v, 1), &g.vertex_path(v))?;
        }
    }
    out.push(claim("round_trip_equivalent_to_vertex", equiv, format!("cycle_length={n}")));

    // Every unitary whose paths have length at most 2: one path per range
    // vertex in each column.
    let (found, example) = cycle_truncation(g, &u, 2)?;
    let detail = match &example {
        Some(e) => format!("max_length=2 unitaries={found} counterexample={e}"),
        None => format!("max_length=2 unitaries={found}"),
    };
    out.push(claim("only_generator_powers_at_truncation", example.is_none(), detail));
    Ok(out)
}

/// Counts the unitaries with path lengths at most `max_len` and returns one
/// that is not a power of `u`, if any.
fn cycle_truncation(g: &Arc<KGraph>, u: &UTable, max_len: u32) -> Result<(usize, Option<String>)> {
    let n = g.vertex_count();
    let choices = (max_len as usize + 1).pow(n as u32);
    let column = |code: usize| -> Vec<Path> {
        (0..n)
            .map(|i| {
                let len = ((code / (max_len as usize + 1).pow(i as u32)) % (max_len as usize + 1)) as u32;
                // The path of length `len` with range vertex `i`.
                g.enumerate(i as u32, &Degree::from_slice(&[len]))[0].clone()
            })
            .collect()
    };
    let powers: Vec<UTable> = (-(2 * max_len as i64)..=2 * max_len as i64).map(|j| u.pow(j)).collect();
    let (mut found, mut example) = (0, None);
    for lc in 0..choices {
        for rc in 0..choices {
            let (left, right) = (column(lc), column(rc));
            // Sources are distinct within a column, so pairing is forced.
            let pairs: Option<Vec<_>> = left
                .iter()
                .map(|a| right.iter().find(|b| b.source() == a.source()).map(|b| (a.clone(), b.clone())))
                .collect();
            if let Some(Ok(t)) = pairs.map(|p| make_unitary(g, p)) {
                found += 1;
                let is_power = powers.iter().any(|p| p.equals(&t).unwrap_or(false));
                if !is_power && example.is_none() {
                    example = Some(t.to_literal());
                }
            }
        }
    }
    Ok((found, example))
}

fn flip_claims(g: &Arc<KGraph>, r: &mut ChaCha8Rng, bound: u32) -> Result<Vec<Claim>> {
    let (k, n) = (g.rank(), g.color_counts()[0]);
    let mut out = Vec::new();

    let mut relations = true;
    for i in 0..k {
        for j in (i + 1)..k {
            for s in 0..n {
                for t in 0..n {
                    let a = g.path_from_word(&[g.colored_edge(i, s), g.colored_edge(j, t)])?;
                    let b = g.path_from_word(&[g.colored_edge(j, s), g.colored_edge(i, t)])?;
                    relations &= a == b;
                }
            }
        }
    }
    out.push(claim("flip_relations", relations, format!("colors={k} edges_per_color={n}")));

    let gens = per_group_generators(g, bound)?;
    let expected: Vec<Vec<i64>> = (0..k - 1)
        .map(|i| (0..k).map(|c| if c == i { 1 } else if c == i + 1 { -1 } else { 0 }).collect())
        .collect();
    let got = periodicity::hermite_basis(gens.iter().map(|c| c.class()).collect());
    let listed: Vec<String> = gens.iter().map(|c| c.to_string()).collect();
    out.push(claim(
        "period_lattice",
        got == periodicity::hermite_basis(expected),
        format!("bound={bound} generators={}", listed.join(";")),
    ));

    let kernel: Vec<UTable> = (0..8).map(|_| random_kernel_element(g, r, 3)).collect();
    let mut commute = true;
    for a in &kernel {
        for b in &kernel {
            commute &= a.multiply(b)?.equals(&b.multiply(a)?)?;
        }
    }
    out.push(claim("kernel_abelian", commute, format!("samples={}", kernel.len())));

    let mut normal = true;
    for k in &kernel {
        let x = random_unitary(g, r, 1, 3);
        normal &= in_kernel_n(&x.multiply(k)?.multiply(&x.inverse())?)?;
    }
    out.push(claim("kernel_normal", normal, format!("samples={}", kernel.len())));

    let mut hom = true;
    for _ in 0..SAMPLES {
        let (a, b) = (random_unitary(g, r, 1, 3), random_unitary(g, r, 1, 3));
        let lhs = periodicity::flip_quotient(&a.multiply(&b)?)?;
        let rhs = periodicity::flip_quotient(&a)?.multiply(&periodicity::flip_quotient(&b)?)?;
        hom &= lhs.equals(&rhs)?;
        hom &= periodicity::flip_quotient(&a)?.is_identity() == in_kernel_n(&a)?;
    }
    for k in &kernel {
        hom &= periodicity::flip_quotient(k)?.is_identity();
    }
    out.push(claim("quotient_homomorphism_with_kernel_n", hom, format!("samples={SAMPLES}")));
    Ok(out)
}

fn aperiodic_claims(g: &Arc<KGraph>, r: &mut ChaCha8Rng, bound: u32) -> Result<Vec<Claim>> {
    let mut out = Vec::new();
    let verdict = is_aperiodic(g, bound)?;
    out.push(claim(
        "aperiodic",
        matches!(verdict, Verdict::NoPeriodUpToBound(_)),
        format!("bound={bound}"),
    ));

    let mut bad = 0;
    for _ in 0..SAMPLES {
        let u = random_unitary(g, r, 1, 3).reduce();
        let m = u.certificate() + &Degree::ones(g.rank());
        let brute = CylinderSet::new(g.clone(), action::fixed_prefixes(&u, &m)?)?;
        if !brute.same_set(&action::fix_interior(&u)) {
            bad += 1;
        }
    }
    out.push(claim("fix_interior_matches_fixed_prefixes", bad == 0, format!("samples={SAMPLES}")));

    let mut bad = 0;
    for _ in 0..SAMPLES {
        let a = random_cylinder_set(g, r, 3, false);
        let b = random_cylinder_set(g, r, 3, false);
        match action::transport(&a, &b) {
            Ok(t) if t.source_set().same_set(&a) && t.range_set().is_subset(&b) => {}
            _ => bad += 1,
        }
    }
    out.push(claim("transport", bad == 0, format!("samples={SAMPLES} failures={bad}")));

    if !g.is_single_vertex() {
        return Ok(out);
    }
    let mut bad = 0;
    for _ in 0..SAMPLES {
        let y = random_cylinder_set(g, r, 2, true);
        let target = &random_complete_family(g, r, 1)[0];
        let ok = action::compress(&y, target).map(|u| maps_into(g, &u, &y, target)).unwrap_or(Ok(false))?;
        if !ok {
            bad += 1;
        }
    }
    out.push(claim("compress", bad == 0, format!("samples={SAMPLES} failures={bad}")));

    let mut bad = 0;
    for _ in 0..SAMPLES {
        let w = random_pis(g, r, 1, 2);
        let ok = match extend_to_unitary(g, w.pairs().to_vec()) {
            Ok(u) => w.pairs().iter().all(|p| u.pairs().contains(p)),
            Err(Error::NotExtendable { .. }) => {
                is_complete(g, &w.left()) != is_complete(g, &w.right())
            }
            Err(_) => false,
        };
        if !ok {
            bad += 1;
        }
    }
    out.push(claim("extension", bad == 0, format!("samples={SAMPLES} failures={bad}")));

    let mut bad = 0;
    for _ in 0..SAMPLES {
        let mu = &random_complete_family(g, r, 2)[0];
        let (a, b) = (random_unitary(g, r, 1, 2), random_unitary(g, r, 1, 2));
        let z = CylinderSet::new(g.clone(), vec![mu.clone()])?;
        let ia = i_mu(mu, &a)?;
        let ok = i_mu(mu, &a.multiply(&b)?)?.equals(&ia.multiply(&i_mu(mu, &b)?)?)?
            && in_rigid_stabilizer(&ia, &z)
            && i_mu_preimage(mu, &ia)?.equals(&a)?;
        if !ok {
            bad += 1;
        }
    }
    out.push(claim("embedding_into_rigid_stabilizer", bad == 0, format!("samples={SAMPLES} failures={bad}")));
    Ok(out)
}

/// Whether `u` maps `Y` into `Z(target)`: every refinement of `Y` deep
/// enough to be acted on lands in `Z(target)`.
fn maps_into(g: &Arc<KGraph>, u: &UTable, y: &CylinderSet, target: &Path) -> Result<bool> {
    let q = u.as_pis().right_degree();
    for p in y.paths() {
        let rest = q.join(p.degree()).checked_sub(p.degree()).expect("join dominates");
        for w in g.extensions(p, &rest) {
            if !g.is_prefix(target, &action::apply_prefix(u, &w)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
