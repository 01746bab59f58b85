//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use cckit::coherent::{ColorMatrix, Configuration};
use cckit::constructions::{chain_check, coset_action, cyclic_scheme, orbitals, schurian_consequences, wreath_cpcp};
use cckit::fixtures;
use cckit::hadamard::{
    bound_check, build_frame, exponent_matrix, is_generalized_hadamard, mub_family, product_scalar,
    scalar_from_coefficients, FrameChoice,
};
use cckit::regularity::{check_hypothesis, split_rn, verify_products, verify_triple_coefficients, Verdict};
use cckit::stabilization::{thin_residue_extension, wl_closure, Coloring};
use cckit::structure::{factor_scheme, isomorphic, recognize_wreath_cpcp, thin_radical, thin_residue};
use cckit::{build_configuration, check_lemma_int};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Outcome {
    let mut slowest = Duration::ZERO;
    for p in [2, 3, 5] {
        let start = Instant::now();
        let c = wreath_cpcp(p);
        ensure(c.degree() == p * p, || format!("p={p}: degree {}", c.degree()))?;
        ensure(c.rank() == 2 * p - 1, || format!("p={p}: rank {}", c.rank()))?;
        let radical = thin_radical(&c).map_err(|e| e.to_string())?;
        let residue = thin_residue(&c).map_err(|e| e.to_string())?;
        ensure(radical.colors() == residue.colors(), || format!("p={p}: radical != residue"))?;
        ensure(residue.valency() == p, || format!("p={p}: residue valency {}", residue.valency()))?;
        let f = factor_scheme(&c, &residue).map_err(|e| e.to_string())?;
        ensure(isomorphic(f.matrix(), cyclic_scheme(p).matrix()), || format!("p={p}: factor not C_p"))?;
        let t = start.elapsed();
        ensure(t < Duration::from_secs(1), || format!("p={p}: {t:?} >= 1 s"))?;
        slowest = slowest.max(t);
    }
    Ok(format!("p in {{2,3,5}}, slowest {slowest:?}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for (name, g) in fixtures::perm_groups().into_iter().filter(|(_, g)| g.degree() <= 30) {
        let c = build_configuration(cckit::constructions::orbital_matrix(&g)).map_err(|e| format!("{name}: {e}"))?;
        let r = check_lemma_int(&c);
        ensure(r.holds(), || format!("{name}: {:?}", r.violations))?;
        count += 1;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(5), || format!("{t:?} >= 5 s"))?;
    Ok(format!("{count} permutation groups, {t:?}"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let g = fixtures::heisenberg(3);
    let hs: Vec<Vec<usize>> = g.cyclic_subgroups(3).into_iter().filter(|h| !g.is_normal(h)).collect();
    ensure(!hs.is_empty(), || "no non-normal subgroup of order 3".into())?;
    let mut failed: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    let mut closure_orders = BTreeSet::new();
    for h in &hs {
        let r = chain_check(&g, h, 3).map_err(|e| e.to_string())?;
        let chain = (r.h_order, r.normalizer_order, r.second_normalizer_order);
        ensure(r.chain_holds && chain == (3, 9, 27), || format!("H={h:?}: chain {chain:?}"))?;
        closure_orders.insert(r.normal_closure_order);
        for (name, ok) in &r.consequences {
            if !ok {
                failed.entry(name).or_default().push(format!("{h:?}"));
            }
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(5), || format!("{t:?} >= 5 s"))?;
    ensure(failed.is_empty(), || {
        let detail: Vec<String> = failed
            .iter()
            .map(|(name, list)| format!("{name} fails for {} of {} subgroups", list.len(), hs.len()))
            .collect();
        format!(
            "chain 3 < 9 < 27 holds for all {} subgroups; {}; normal closure orders {closure_orders:?}, N_G(N_G(H)) order 27",
            hs.len(),
            detail.join(", ")
        )
    })?;
    Ok(format!("{} subgroups, {t:?}", hs.len()))
}

/// The first order-81 fixture with a chain-verified subgroup of order 3.
fn chain_fixture() -> Result<(&'static str, Configuration), String> {
    for (name, pg) in fixtures::order81_groups() {
        let (g, _) = pg.to_cayley().map_err(|e| e.to_string())?;
        for h in g.cyclic_subgroups(3) {
            if chain_check(&g, &h, 3).map_err(|e| e.to_string())?.holds() {
                let ca = coset_action(&g, &h).map_err(|e| e.to_string())?;
                return Ok((name, orbitals(&ca.action)));
            }
        }
    }
    Err("no order-81 fixture satisfies the chain".into())
}

struct FrameVerdict {
    gh: Vec<bool>,
    mub_bases: usize,
    mub_unbiased: bool,
    mub_orthogonal: bool,
    bound_holds: bool,
}

impl FrameVerdict {
    fn key(&self) -> (bool, usize, usize, bool, bool, bool) {
        (
            self.gh.iter().all(|&x| x),
            self.gh.len(),
            self.mub_bases,
            self.mub_unbiased,
            self.mub_orthogonal,
            self.bound_holds,
        )
    }
}

fn frame_verdict(e: &Configuration, choice: &FrameChoice) -> Result<FrameVerdict, String> {
    let ctx = check_hypothesis(e, 3).map_err(|x| x.to_string())?;
    let split = split_rn(&ctx).map_err(|x| x.to_string())?;
    let frame = build_frame(&ctx, &split, choice).map_err(|x| x.to_string())?;
    let gh = ctx
        .inter_fiber_colors()
        .into_iter()
        .map(|s| exponent_matrix(&frame, s).map(|h| is_generalized_hadamard(&h)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|x| x.to_string())?;
    let mub = mub_family(&frame).map_err(|x| x.to_string())?;
    Ok(FrameVerdict {
        gh,
        mub_bases: mub.bases.len(),
        mub_unbiased: mub.pairs.iter().all(|p| p.unbiased),
        mub_orthogonal: mub.orthogonal.iter().all(|&o| o),
        bound_holds: mub.bound_holds,
    })
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let (name, coset) = chain_fixture()?;
    ensure(coset.degree() == 27, || format!("{name}: coset degree {}", coset.degree()))?;
    let sc = schurian_consequences(&coset, 3).map_err(|e| e.to_string())?;
    ensure(sc.holds(), || format!("{name}: {:?}", sc.violations))?;
    let e = thin_residue_extension(&coset.canonical()).map_err(|e| e.to_string())?;
    ensure(e.fiber_count() == 3, || format!("{} fibers", e.fiber_count()))?;
    for f in e.fibers() {
        let sub = build_configuration(e.matrix().restrict(f)).map_err(|e| e.to_string())?;
        ensure(recognize_wreath_cpcp(&sub, 3).map_err(|e| e.to_string())?, || "fiber is not C_3 wr C_3".into())?;
    }
    let ctx = check_hypothesis(&e, 3).map_err(|e| e.to_string())?;
    for s in ctx.inter_fiber_colors() {
        ensure(e.valency(s) == 3, || format!("inter-fiber color {s} has valency {}", e.valency(s)))?;
    }
    let split = split_rn(&ctx).map_err(|e| e.to_string())?;
    ensure(split.verdict == Verdict::AllN, || format!("verdict {:?}", split.verdict))?;
    let products = verify_products(&ctx).map_err(|e| e.to_string())?;
    let frame = build_frame(&ctx, &split, &FrameChoice::default()).map_err(|e| e.to_string())?;
    let mut entries = 0;
    for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)] {
        let report = verify_triple_coefficients(&ctx, &split, i, j, k).map_err(|e| e.to_string())?;
        for entry in &report.entries {
            let a = &entry.coefficients;
            let sum: u32 = a.iter().sum();
            let squares: u32 = a.iter().map(|x| x * x).sum();
            let shifted = |d: usize| (0..3).map(|t| a[t] * a[(t + d) % 3]).sum::<u32>();
            ensure(sum == 3 && squares == 5 && shifted(1) == 2 && shifted(2) == 2, || format!("a = {a:?}"))?;
            let z = product_scalar(&frame, entry.s1, entry.s2, entry.s3).map_err(|e| e.to_string())?;
            ensure(z.norm_square().as_integer() == Some(3), || format!("|{z}|^2 != 3"))?;
            ensure(z == scalar_from_coefficients(&frame, entry), || format!("{z} differs from coefficient form"))?;
            entries += 1;
        }
    }
    let verdict = frame_verdict(&e, &FrameChoice::default())?;
    ensure(verdict.gh.iter().all(|&x| x), || "an exponent matrix is not GH(3)".into())?;
    ensure(verdict.mub_bases == 3 && verdict.mub_bases <= 3 + 1, || format!("{} bases", verdict.mub_bases))?;
    ensure(verdict.mub_unbiased && verdict.mub_orthogonal, || "MUB family is not unbiased".into())?;
    let bound = bound_check(&coset, 3).map_err(|e| e.to_string())?;
    ensure(bound.degree == 27 && bound.bound == 36, || format!("{bound:?}"))?;
    ensure(bound.corollary_applies && bound.corollary_holds, || format!("{bound:?}"))?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(30), || format!("{t:?} >= 30 s"))?;
    Ok(format!(
        "{name}; {} product colors, {entries} triple entries and scalars, {} GH matrices, {t:?}",
        products.colors_checked,
        verdict.gh.len()
    ))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let (_, coset) = chain_fixture()?;
    let e = thin_residue_extension(&coset.canonical()).map_err(|e| e.to_string())?;
    let ctx = check_hypothesis(&e, 3).map_err(|e| e.to_string())?;
    let one = e.diagonal_color(0);
    let t1s: Vec<usize> = ctx.thin_radical(0).iter().copied().filter(|&t| t != one).collect();
    ensure(t1s.len() == 2, || format!("thin colors {t1s:?}"))?;
    let fibers = e.fibers();
    let bases: Vec<Vec<usize>> = vec![
        fibers.iter().map(|f| f[0]).collect(),
        fibers.iter().map(|f| f[4]).collect(),
        fibers.iter().map(|f| f[8]).collect(),
        fibers.iter().enumerate().map(|(i, f)| f[(3 * i + 1) % f.len()]).collect(),
    ];
    let mut reference = None;
    let mut runs = 0;
    for &t1 in &t1s {
        for base in &bases {
            let choice = FrameChoice {
                t1: Some(t1),
                base_points: Some(base.clone()),
                representatives: None,
            };
            let key = frame_verdict(&e, &choice)?.key();
            let reference = reference.get_or_insert(key);
            ensure(*reference == key, || format!("t1={t1} base={base:?}: {key:?} != {reference:?}"))?;
            runs += 1;
        }
    }
    let bound = bound_check(&coset, 3).map_err(|e| e.to_string())?;
    ensure(bound.corollary_holds, || format!("{bound:?}"))?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), || format!("{t:?} >= 60 s"))?;
    Ok(format!("{runs} frame choices agree, {t:?}"))
}

fn wl_inputs() -> Vec<(String, ColorMatrix)> {
    let mut v: Vec<(String, ColorMatrix)> = fixtures::fixture_files()
        .into_iter()
        .filter(|(n, _)| n.ends_with(".ccm"))
        .map(|(n, text)| (n.to_string(), ColorMatrix::parse(&text).expect("fixture parses")))
        .collect();
    let graphs: Vec<(&str, usize, Vec<(usize, usize)>)> = vec![
        ("petersen", 10, {
            let mut e: Vec<_> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
            e.extend((0..5).map(|i| (i, i + 5)));
            e.extend((0..5).map(|i| (i + 5, (i + 2) % 5 + 5)));
            e
        }),
        ("hexagon", 6, (0..6).map(|i| (i, (i + 1) % 6)).collect()),
        ("star5", 5, (1..5).map(|i| (0, i)).collect()),
        ("path5", 5, (0..4).map(|i| (i, i + 1)).collect()),
        ("k33", 6, (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect()),
        ("cube", 8, (0..8usize).flat_map(|a| (0..3).map(move |k| (a, a ^ (1 << k)))).filter(|&(a, b)| a < b).collect()),
        ("two_triangles", 6, vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]),
        ("asymmetric7", 7, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (2, 6), (6, 3), (1, 6)]),
        ("paley9", 9, (0..9usize).flat_map(|a| (0..9).map(move |b| (a, b))).filter(|&(a, b)| {
            let d = ((b / 3 + 3 - a / 3) % 3, (b % 3 + 3 - a % 3) % 3);
            a < b && matches!(d, (1, 0) | (2, 0) | (0, 1) | (0, 2))
        }).collect()),
        ("directed_cycle5", 5, (0..5).map(|i| (i, (i + 1) % 5)).collect()),
    ];
    for (name, n, edges) in graphs {
        v.push((name.to_string(), Coloring::from_graph(n, &edges).matrix().clone()));
    }
    v.push(("wreath5".into(), wreath_cpcp(5).matrix().clone()));
    v
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let inputs = wl_inputs();
    ensure(inputs.len() >= 20, || format!("only {} inputs", inputs.len()))?;
    let mut coherent = 0;
    for (name, m) in &inputs {
        let out = wl_closure(&Coloring::from_matrix(m.clone()));
        let again = wl_closure(&Coloring::from_matrix(out.matrix().clone()));
        ensure(again.matrix() == out.matrix(), || format!("{name}: not idempotent"))?;
        let n = m.n();
        let mut parent = vec![None; out.rank()];
        for a in 0..n {
            for b in 0..n {
                let p = *parent[out.relation(a, b)].get_or_insert(m.get(a, b));
                ensure(p == m.get(a, b), || format!("{name}: output color {} spans two input colors", out.relation(a, b)))?;
            }
        }
        if build_configuration(m.clone()).is_ok() {
            ensure(out.rank() == m.rank(), || format!("{name}: coherent input was refined"))?;
            coherent += 1;
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(10), || format!("{t:?} >= 10 s"))?;
    Ok(format!("{} inputs ({coherent} coherent), {t:?}", inputs.len()))
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn criterion_7() -> Outcome {
    let cases: [(&str, Vec<String>, &str); 4] = [
        ("perturbed C_3", vec!["verify".into(), fixture("c3_perturbed.ccm")], "coherence"),
        ("thin C_9", vec!["hadamard".into(), fixture("c9.ccm"), "--p".into(), "3".into()], "hypothesis"),
        (
            "Z_27",
            ["chain", "--cayley", &fixture("z27.cay"), "--subgroup", "0,9,18", "--p", "3"].map(String::from).to_vec(),
            "chain",
        ),
        ("repeated row", vec!["gh-check".into(), fixture("repeated_row.gh")], "generalized hadamard"),
    ];
    let mut stages = Vec::new();
    for (label, args, stage) in cases {
        let out = Command::new(env!("CARGO_BIN_EXE_cckit")).args(&args).output().map_err(|e| e.to_string())?;
        let code = out.status.code();
        ensure(code == Some(1), || format!("{label}: exit {code:?}"))?;
        let report: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        let failed = report["failed_stage"].as_str().unwrap_or_default().to_string();
        ensure(failed == stage, || format!("{label}: failed stage {failed:?}"))?;
        if label == "perturbed C_3" {
            ensure(!report["witness"].is_null(), || "no witness".into())?;
        }
        stages.push(format!("{label} -> {failed}"));
    }
    Ok(stages.join(", "))
}

fn criterion_8() -> Outcome {
    let mut cases: Vec<(String, usize, Configuration)> = fixtures::multi_orbit_fixtures()
        .into_iter()
        .map(|(n, c)| (n.to_string(), 3, c))
        .collect();
    let ext = thin_residue_extension(&fixtures::coset27_scheme().canonical()).map_err(|e| e.to_string())?;
    cases.push(("ext27".into(), 3, ext));
    for p in [2, 3, 5] {
        cases.push((format!("wreath_cpcp({p})"), p, wreath_cpcp(p)));
    }
    let mut verdicts = Vec::new();
    for (name, p, c) in &cases {
        let ctx = check_hypothesis(c, *p).map_err(|e| format!("{name}: {e}"))?;
        let split = split_rn(&ctx).map_err(|e| format!("{name}: {e}"))?;
        ensure(split.verdict != Verdict::Mixed, || format!("{name}: Mixed"))?;
        verdicts.push(format!("{name}={:?}", split.verdict));
    }
    Ok(verdicts.join(", "))
}

fn main() -> ExitCode {
    let criteria: [fn() -> Outcome; 8] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
    ];
    let mut failures = 0;
    for (i, run) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS ({detail})", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {}: FAIL ({why})", i + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
