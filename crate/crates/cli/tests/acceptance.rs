//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use gcrossed_core::checks::check_all;
use gcrossed_core::diagram::validate_coloring;
use gcrossed_core::evaluator::{conjugate_diagram, evaluate, evaluate_special_forms};
use gcrossed_core::fusion::modular_report;
use gcrossed_core::kirby::{kirby_fuzz, random_presentation};
use gcrossed_core::moves::{apply_move, random_diagram, random_move_fuzz, MoveKind};
use gcrossed_core::surgery::{canonical_coloring_at, link_form, parse_link, tau, verlinde_rank, GLinkPresentation};
use gcrossed_core::{CategoryData, CycNumber};
use rand_chacha::rand_core::SeedableRng;
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;

const ALL: [&str; 7] = ["trivial", "z3", "z2_bichar", "z6_over_z2", "z6_over_z2_gauged", "s3_z3", "s3_z3_gauged"];

type Outcome = Result<String, String>;

fn data() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn load(name: &str) -> CategoryData {
    let text = std::fs::read_to_string(data().join("categories").join(format!("{name}.cat"))).expect("category file");
    CategoryData::load(&text).expect("category loads")
}

fn link(name: &str, c: &CategoryData) -> GLinkPresentation {
    let text = std::fs::read_to_string(data().join("links").join(format!("{name}.link"))).expect("link file");
    parse_link(&text, c).expect("link parses")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// ω^k for ω = ζ_3, written in Q(ζ_12).
fn omega3(k: i64) -> CycNumber {
    CycNumber::zeta_pow(12, 4 * k.rem_euclid(3))
}

fn axioms() -> Outcome {
    for name in ["trivial", "z3", "z2_bichar"] {
        let r = check_all(&load(name));
        ensure(r.passed(), || format!("{name}: {:?}", r.failing_axioms()))?;
    }
    let c = load("z3");
    let two = CycNumber::from_int(12, 2);
    let mut n = 0;
    for key in c.scalar_keys() {
        let mut bad = c.clone();
        bad.set(key, c.get(key) * &two);
        let r = check_all(&bad);
        let total: usize = r.checked.iter().map(|p| p.1).sum();
        ensure(!r.passed(), || format!("corruption of {} passed", c.key_name(key)))?;
        ensure(r.failures.iter().all(|f| !f.instance.is_empty()) && r.failures.len() < total, || {
            format!("corruption of {} not localized", c.key_name(key))
        })?;
        n += 1;
    }
    Ok(format!("3 categories certified, {n} corruptions localized"))
}

fn derived_identities() -> Outcome {
    let ids = [
        "Yang-Baxter",
        "braiding with unit (right)",
        "braiding with unit (left)",
        "braiding inverse (first form)",
        "braiding inverse (second form)",
        "twist invertible",
        "twist right curl",
        "twist left curl",
        "twist of product",
        "twist under action",
        "graded dimension",
    ];
    for name in ALL {
        let r = check_all(&load(name));
        for id in ids {
            let count = r.checked.iter().find(|(a, _)| a == id).map(|p| p.1).unwrap_or(0);
            ensure(count > 0, || format!("{name}: {id} not checked"))?;
        }
        ensure(r.passed(), || format!("{name}: {:?}", r.failing_axioms()))?;
    }
    Ok(format!("{} identities in {} categories", ids.len(), ALL.len()))
}

fn move_fuzz() -> Outcome {
    let mut least = usize::MAX;
    for name in ALL {
        let c = load(name);
        let mut kinds = BTreeSet::new();
        let mut total = 0;
        for seed in 0..8u64 {
            let d = random_diagram(&c, seed, 14);
            let before = evaluate(&d, &c).map_err(|e| e.to_string())?;
            let (_, log) = random_move_fuzz(&d, &c, seed + 100, 130);
            let mut cur = d.sparse();
            for spec in &log {
                cur = apply_move(&cur, &c, spec).map_err(|e| format!("{name}: {e}"))?;
                ensure(validate_coloring(&cur, &c).passed(), || format!("{name}: invalid coloring after {spec:?}"))?;
                let m = evaluate(&cur, &c).map_err(|e| e.to_string())?;
                ensure(m == before, || format!("{name} seed {seed}: value changed by {spec:?}"))?;
                kinds.insert(spec.kind);
            }
            total += log.len();
        }
        ensure(total >= 1000, || format!("{name}: only {total} moves"))?;
        for k in MoveKind::ALL {
            ensure(kinds.contains(&k), || format!("{name}: {k:?} never applied"))?;
        }
        least = least.min(total);
    }
    Ok(format!("at least {least} moves per category, all move types and stabilization"))
}

fn closed_forms() -> Outcome {
    for name in ALL {
        let r = evaluate_special_forms(&load(name));
        ensure(r.passed(), || format!("{name}: {:?}", r.failing_axioms()))?;
        ensure(r.checked.len() == 12, || format!("{name}: {} forms checked", r.checked.len()))?;
    }
    Ok("8 crossings and 4 curl forms in every category".into())
}

fn z3_golden() -> Outcome {
    let c = load("z3");
    let m = modular_report(&c);
    for (j, row) in m.s_matrix.iter().enumerate() {
        for (k, v) in row.iter().enumerate() {
            ensure(*v == omega3(2 * (j * k) as i64), || format!("S[{j}][{k}] = {v}"))?;
        }
    }
    let one = CycNumber::one(12);
    let two = CycNumber::from_int(12, 2);
    ensure(!m.determinant.is_zero(), || "singular S".into())?;
    ensure(m.delta_plus == &one + &two * omega3(1), || format!("Δ₊ = {}", m.delta_plus))?;
    ensure(m.delta_minus == &one + &two * omega3(2), || format!("Δ₋ = {}", m.delta_minus))?;
    let prod = &m.delta_plus * &m.delta_minus;
    ensure(prod == CycNumber::from_int(12, 3) && prod == c.rank() * c.rank(), || format!("Δ₊Δ₋ = {prod}"))?;
    Ok(format!("det S = {}", m.determinant))
}

fn surgery_golden() -> Outcome {
    for name in ALL {
        let c = load(name);
        let inv_rank = c.rank().inv();
        let t = tau(&link("empty", &c), &c).map_err(|e| e.to_string())?.tau;
        ensure(t == inv_rank, || format!("{name}: τ(empty) = {t}"))?;
        for g in 0..c.group.len() {
            let mut b = gcrossed_core::kirby::LinkBuilder::new(&c);
            b.cup(0, true, 0, g).and_then(|b| b.cap(0)).map_err(|e| e.to_string())?;
            let l = b.finish().map_err(|e| e.to_string())?;
            let t = tau(&l, &c).map_err(|e| e.to_string())?.tau;
            ensure(t.is_one(), || format!("{name}: τ(0-framed unknot, {}) = {t}", c.group.name(g)))?;
        }
        let m = modular_report(&c);
        let fp = link_form(&link("unknot_pos1", &c), &c).map_err(|e| e.to_string())?;
        let fm = link_form(&link("unknot_neg1", &c), &c).map_err(|e| e.to_string())?;
        ensure(fp == m.delta_plus && fm == m.delta_minus, || format!("{name}: link form of ℓ± = {fp}, {fm}"))?;
    }
    let c = load("z3");
    let t = tau(&link("lens_p2", &c), &c).map_err(|e| e.to_string())?.tau;
    ensure(t == -c.rank().inv(), || format!("τ(+2 unknot) = {t}"))?;
    Ok(format!("τ(+2 unknot, Z/3) = {t}"))
}

fn kirby_invariance() -> Outcome {
    let mut least = usize::MAX;
    for (i, name) in ALL.iter().enumerate() {
        let c = load(name);
        let r = kirby_fuzz(&c, 500, 1000 + i as u64, 3);
        ensure(r.passed(), || format!("{name}: {}", r.failures[0]))?;
        for kind in ["first", "fenn-rourke", "reverse"] {
            ensure(r.moves.get(kind).copied().unwrap_or(0) > 0, || format!("{name}: no {kind} moves"))?;
        }
        ensure(r.regaugings > 0, || format!("{name}: no regauging"))?;
        least = least.min(r.pairs);
    }
    Ok(format!("{least} pairs per category"))
}

fn conjugation() -> Outcome {
    let mut checked = 0;
    for name in ALL {
        let c = load(name);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for _ in 0..6 {
            let l = random_presentation(&c, &mut rng, 2, 4);
            let want = tau(&l, &c).map_err(|e| e.to_string())?.tau;
            let sites = l.default_sites();
            let base: Vec<usize> = sites.iter().map(|&(k, p)| c.labels_of_grade(l.levels()[k][p].g)[0]).collect();
            let d = canonical_coloring_at(&l, &base, &sites, &c).map_err(|e| e.to_string())?;
            let v = evaluate(&d, &c).map_err(|e| e.to_string())?.value;
            for eta in 0..c.group.len() {
                let t = tau(&l.conjugate(eta, &c), &c).map_err(|e| e.to_string())?.tau;
                ensure(t == want, || format!("{name}: τ moved under η={}", c.group.name(eta)))?;
                let w = evaluate(&conjugate_diagram(&d, eta, &c), &c).map_err(|e| e.to_string())?.value;
                ensure(w == v, || format!("{name}: closed value moved under η={}", c.group.name(eta)))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (presentation, η) pairs"))
}

fn verlinde() -> Outcome {
    for name in ALL {
        let c = load(name);
        ensure(verlinde_rank(&c, &[], &[]) == Ok(1), || format!("{name}: genus 0"))?;
    }
    let z3 = load("z3");
    ensure(verlinde_rank(&z3, &[0], &[0]) == Ok(3), || "Z/3 genus 1".into())?;
    let c = load("z2_bichar");
    let one = c.group.index("1").expect("element 1");
    ensure(verlinde_rank(&c, &[one], &[one]) == Ok(1), || "bicharacter genus 1".into())?;
    // counting oracle: every commuting pair over every label
    for a in 0..c.group.len() {
        for b in 0..c.group.len() {
            let want = (0..c.num_labels())
                .filter(|&j| c.grade(j) == b)
                .filter(|&j| {
                    let jinv = (0..c.num_labels()).find(|&y| c.labels.mul(y, j) == c.labels.unit()).expect("inverse");
                    c.labels.mul(c.act(a, jinv), j) == c.labels.unit()
                })
                .count() as u64;
            ensure(verlinde_rank(&c, &[a], &[b]) == Ok(want), || format!("bicharacter α={a} β={b}"))?;
        }
    }
    Ok("genus 0, Z/3 and bicharacter counts".into())
}

fn cli_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_gcrossed");
    let cat = |n: &str| data().join("categories").join(format!("{n}.cat")).display().to_string();
    let lnk = |n: &str| data().join("links").join(format!("{n}.link")).display().to_string();
    let dgm = data().join("diagrams").join("hopf_z3.dgm").display().to_string();
    let runs: Vec<Vec<String>> = vec![
        vec!["check".into(), cat("s3_z3")],
        vec!["--json".into(), "check".into(), cat("z3")],
        vec!["smatrix".into(), cat("s3_z3")],
        vec!["omega".into(), cat("s3_z3"), "r".into()],
        vec!["gauss".into(), cat("z6_over_z2")],
        vec!["eval-diagram".into(), cat("z3"), dgm],
        vec!["tau".into(), cat("z3"), lnk("lens_p2"), "--terms".into()],
        vec!["--json".into(), "tau".into(), cat("s3_z3"), lnk("hopf"), "--terms".into()],
        vec!["kirby-fuzz".into(), cat("s3_z3"), "--seed".into(), "5".into(), "--steps".into(), "30".into()],
        vec!["verlinde".into(), cat("z3"), "--alpha".into(), "0".into(), "--beta".into(), "0".into()],
    ];
    for args in &runs {
        let mut outs = Vec::new();
        for threads in ["1", "1", "4", "4"] {
            let o = Command::new(bin).args(args).env("RAYON_NUM_THREADS", threads).output().map_err(|e| e.to_string())?;
            ensure(o.status.success(), || format!("{args:?} exited with {:?}", o.status.code()))?;
            outs.push(o.stdout);
        }
        ensure(outs.windows(2).all(|w| w[0] == w[1]), || format!("{args:?} output differs"))?;
    }
    Ok(format!("{} invocations byte-identical over 2 runs and 2 thread counts", runs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("axiom certification and corruption detection", axioms),
        ("derived identities", derived_identities),
        ("fuzzed diagram moves", move_fuzz),
        ("closed-form crossings and curls", closed_forms),
        ("Z/3 modular data", z3_golden),
        ("surgery golden values", surgery_golden),
        ("Kirby invariance", kirby_invariance),
        ("conjugation invariance", conjugation),
        ("Verlinde ranks", verlinde),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(note) => println!("PASS {}: {title} ({note})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}: {title}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
