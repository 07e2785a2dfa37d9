//! Acceptance gate: one line per criterion, non-zero exit if any fails.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use common::exact::{self, Q};
use common::{container_files, container_names, dsl_source, fixture_zip, mutations, raw_zip, scenes, xml_fixtures};
use i2gatp::container::{canonicalize_container, pack, read_manifest, strip_to_i2g, unpack, INTERGEO_XML};
use i2gatp::convert::{emit_dsl, parse_dsl};
use i2gatp::eval::{check_conjecture, eval_predicate, NumericScene, SplitMix64, Tolerance, Verdict};
use i2gatp::xml::{self, DocumentKind};
use i2gatp::Predicate;

type Result = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn secs(d: Duration) -> String {
    format!("{:.3} s", d.as_secs_f64())
}

fn ac1() -> Result {
    let names = container_names();
    ensure!(names.len() >= 10, "only {} containers", names.len());
    let zips: Vec<(String, Vec<u8>)> = names.iter().map(|n| (n.clone(), fixture_zip(n))).collect();
    let start = Instant::now();
    let mut with_three = false;
    let mut with_opaque = false;
    for (name, z) in &zips {
        let p = unpack(z).map_err(|e| format!("{name}: {e}"))?;
        with_three |= p.proofs.len() == 3;
        with_opaque |= p.construction.first_opaque().is_some();
        let repacked = pack(&p).map_err(|e| format!("{name}: {e}"))?.bytes;
        let canonical = canonicalize_container(z).map_err(|e| format!("{name}: {e}"))?;
        ensure!(repacked == canonical, "{name}: pack(unpack(z)) differs from canonical(z)");
    }
    let took = start.elapsed();
    for required in ["varignon", "midpoint_thm"] {
        ensure!(names.iter().any(|n| n == required), "{required} missing from the corpus");
    }
    ensure!(with_three, "no container with 3 proof attempts");
    ensure!(with_opaque, "no container with an opaque constraint");
    ensure!(took < Duration::from_secs(2), "took {}", secs(took));
    Ok(format!("{} containers byte-identical, {}", zips.len(), secs(took)))
}

fn ac2() -> Result {
    let extra = |p: &str| ["information", "conjecture", "proofs"].contains(&p.split('/').next().unwrap());
    let mut removed = 0;
    for name in container_names() {
        let files = container_files(&name);
        let z = raw_zip(&files);
        let stripped = strip_to_i2g(&z).map_err(|e| format!("{name}: {e}"))?.bytes;
        let m = read_manifest(&stripped).map_err(|e| format!("{name}: {e}"))?;
        let kept: Vec<_> = files.iter().filter(|f| !extra(&f.path)).collect();
        removed += files.len() - kept.len();
        ensure!(m.files.iter().all(|f| !extra(&f.path)), "{name}: extra part left behind");
        ensure!(m.dirs.iter().all(|d| !extra(d)), "{name}: extra directory left behind");
        ensure!(m.files.iter().collect::<Vec<_>>() == kept, "{name}: kept files changed");
        let intergeo = files.iter().find(|f| f.path == INTERGEO_XML).unwrap();
        ensure!(m.file(INTERGEO_XML) == Some(intergeo), "{name}: intergeo.xml bytes changed");
        let again = strip_to_i2g(&stripped).map_err(|e| format!("{name}: {e}"))?.bytes;
        ensure!(again == stripped, "{name}: not idempotent");
    }
    Ok(format!("{removed} i2gatp-only files removed, intergeo.xml unchanged, idempotent"))
}

fn ac3() -> Result {
    let docs = xml_fixtures();
    ensure!(docs.len() >= 20, "only {} documents", docs.len());
    for kind in DocumentKind::ALL {
        ensure!(docs.iter().any(|d| d.kind == kind), "no {kind:?} document");
    }
    for d in &docs {
        let typed = match d.kind {
            DocumentKind::Information => xml::parse_information(&d.bytes).map(|v| xml::serialize_information(&v)),
            DocumentKind::Construction => xml::parse_construction(&d.bytes).map(|v| xml::serialize_construction(&v)),
            DocumentKind::Conjecture => xml::parse_conjecture(&d.bytes).map(|v| xml::serialize_conjecture(&v)),
            DocumentKind::ProofInfo => xml::parse_proof_info(&d.bytes).map(|v| xml::serialize_proof_info(&v)),
        }
        .map_err(|e| format!("{}: {e}", d.name))?;
        let tree = xml::canonicalize(d.kind, &d.bytes).map_err(|e| format!("{}: {e}", d.name))?;
        ensure!(typed == tree, "{}: serialize(parse(d)) != canonicalize(d)", d.name);
    }
    let classes = mutations::classes();
    ensure!(classes.len() >= 15, "only {} mutation classes", classes.len());
    let outcomes = mutations::run_all();
    for m in &classes {
        ensure!(outcomes.iter().any(|o| o.class == m.class), "{} applies to nothing", m.class);
    }
    let false_accepts = outcomes.iter().filter(|o| o.false_accept()).count();
    ensure!(false_accepts == 0, "{false_accepts} false accepts");
    if let Some(o) = outcomes.iter().find(|o| !o.has_expected()) {
        return Err(format!("{} on {}: expected {}, got {:?}", o.class, o.subject, o.expected, common::codes(&o.violations)));
    }
    Ok(format!(
        "{} documents, {} mutation classes over {} mutants, 0 false accepts",
        docs.len(),
        classes.len(),
        outcomes.len()
    ))
}

fn ac4() -> Result {
    let tol = Tolerance::new(1e-9).unwrap();
    let start = Instant::now();
    let cases = scenes::integer_cases(10_000, 2024);
    let mut disagreements = 0;
    for case in &cases {
        let want = exact::truth(&case.exact_scene(), &case.predicate).unwrap();
        let got = eval_predicate(&case.float_scene(), &case.predicate, tol).map_err(|e| e.to_string())?;
        disagreements += usize::from(got.truth != want);
    }
    let took = start.elapsed();
    ensure!(disagreements == 0, "{disagreements} disagreements");
    ensure!(took < Duration::from_secs(5), "took {}", secs(took));
    Ok(format!("{} instances, 0 disagreements, {}", cases.len(), secs(took)))
}

fn ac5() -> Result {
    let p = parse_dsl(&dsl_source("varignon")).unwrap();
    let start = Instant::now();
    let r = check_conjecture(&p, 1000, 42, Tolerance::default()).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    let again = check_conjecture(&p, 1000, 42, Tolerance::default()).unwrap();
    ensure!(r.verdict == Verdict::ConsistentOverSamples, "verdict {}", r.verdict.as_str());
    ensure!(r.samples_checked >= 990, "{} samples checked", r.samples_checked);
    ensure!(r.witness.is_none(), "falsified");
    ensure!(format!("{r:?}") == format!("{again:?}"), "reports differ between runs");
    ensure!(took < Duration::from_secs(1), "took {}", secs(took));
    Ok(format!("{} of {} samples checked, reproducible, {}", r.samples_checked, r.samples_total, secs(took)))
}

fn ac6() -> Result {
    let p = parse_dsl(&dsl_source("collinear_false")).unwrap();
    let pred = &p.conjecture.as_ref().unwrap().conclusion[0];
    let mut latest = 0;
    for seed in 1..=20 {
        let r = check_conjecture(&p, 100, seed, Tolerance::default()).map_err(|e| e.to_string())?;
        let Some(w) = r.witness else { return Err(format!("seed {seed}: not falsified")) };
        ensure!(r.verdict == Verdict::Falsified, "seed {seed}: verdict {}", r.verdict.as_str());
        ensure!(w.trial < 5, "seed {seed}: falsified only at sample {}", w.trial);
        latest = latest.max(w.trial);
        let free: BTreeMap<String, (Q, Q)> = w
            .assignment
            .iter()
            .map(|(id, (x, y))| (id.clone(), (exact::from_f64(*x), exact::from_f64(*y))))
            .collect();
        let scene = exact::instantiate(&p.construction, &free).map_err(|e| format!("seed {seed}: {e:?}"))?;
        ensure!(exact::truth(&scene, pred) == Some(false), "seed {seed}: witness is collinear");
    }
    Ok(format!("20 seeds falsified by sample {}, witnesses non-collinear exactly", latest))
}

fn ac7() -> Result {
    let scene = NumericScene::from_points([("A", (0.0, 0.0)), ("B", (3.0, 0.0)), ("C", (1.0, 0.0)), ("D", (-3.0, 0.0))]);
    let p = Predicate::Harmonic(scenes::ids("A B C D"));
    let e = eval_predicate(&scene, &p, Tolerance::default()).map_err(|e| e.to_string())?;
    let q = exact::cross_ratio(&(exact::int(0), exact::int(0)), &(exact::int(3), exact::int(0)), &(exact::int(1), exact::int(0)), &(exact::int(-3), exact::int(0)));
    ensure!(q == Some(exact::int(-1)), "exact cross ratio {q:?}");
    ensure!(e.truth, "evaluated false");
    ensure!(e.residual < 1e-12, "residual {:e}", e.residual);
    Ok(format!("true, residual {:e}", e.residual))
}

fn ac8() -> Result {
    let mut reports = 0;
    for name in common::DSL_FIXTURES {
        let src = dsl_source(name);
        let p = parse_dsl(&src).map_err(|e| format!("{name}: {e}"))?;
        let z = pack(&p).map_err(|e| format!("{name}: {e}"))?.bytes;
        let q = unpack(&z).map_err(|e| format!("{name}: {e}"))?;
        let text = emit_dsl(&q).map_err(|e| format!("{name}: {e}"))?;
        ensure!(text == src, "{name}: text changed through the container");
        if p.conjecture.is_some() {
            let a = check_conjecture(&p, 1000, 42, Tolerance::default()).map_err(|e| format!("{name}: {e}"))?;
            let b = check_conjecture(&q, 1000, 42, Tolerance::default()).map_err(|e| format!("{name}: {e}"))?;
            ensure!(format!("{a:?}") == format!("{b:?}"), "{name}: reports differ");
            reports += 1;
        }
    }
    Ok(format!("{} fixtures reproduced, {reports} report pairs identical", common::DSL_FIXTURES.len()))
}

fn ac9() -> Result {
    let tol = Tolerance::default();
    let mut rng = SplitMix64::new(9);
    let mut scenes_done = 0;
    let mut drawn = 0;
    let mut checks = 0;
    while scenes_done < 1000 {
        drawn += 1;
        ensure!(drawn < 20_000, "only {scenes_done} clear scenes in {drawn} draws");
        let s = scenes::float_scene(&mut rng);
        let theta = rng.next_symmetric(std::f64::consts::PI);
        let lambda = 10f64.powf(rng.next_symmetric(2.0));
        let t = (rng.next_symmetric(100.0), rng.next_symmetric(100.0));
        let moved = s.transformed(theta, lambda, t);
        let (Some(before), Some(after)) = (scenes::clear_truths(&s, tol), scenes::clear_truths(&moved, tol)) else {
            continue;
        };
        ensure!(before == after, "scene {drawn}: truth changed under similarity");
        for (scene, truths) in [(&s, &before), (&moved, &after)] {
            for (i, p) in scene.predicates.iter().enumerate() {
                let Predicate::Parallel(ids) = p else { continue };
                let j = scene
                    .predicates
                    .iter()
                    .position(|q| *q == Predicate::NotParallel(ids.clone()))
                    .ok_or("missing negation")?;
                ensure!(truths[i] != truths[j], "scene {drawn}: parallel and not_parallel agree");
                checks += 1;
            }
        }
        scenes_done += 1;
    }
    Ok(format!("{scenes_done} scenes from {drawn} draws, {checks} negation pairs, 0 violations"))
}

fn main() {
    let criteria: [(&str, fn() -> Result); 9] = [
        ("container round-trip", ac1),
        ("i2g backwards compatibility", ac2),
        ("XML round-trip and validation", ac3),
        ("predicate/oracle equivalence", ac4),
        ("true-theorem consistency", ac5),
        ("false-conjecture falsification", ac6),
        ("harmonic exactness", ac7),
        ("cross-format equivalence", ac8),
        ("invariance suite", ac9),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let took = secs(start.elapsed());
        match outcome {
            Ok(detail) => println!("[PASS] AC{} {title}: {detail} (wall {took})", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] AC{} {title}: {why} (wall {took})", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
