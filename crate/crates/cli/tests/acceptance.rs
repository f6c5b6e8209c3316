//! Acceptance criteria for the library and the `treejoint` binary. Prints one
//! PASS/FAIL line per criterion. Exits nonzero when the set of failing
//! criteria differs from `KNOWN_FAILURES`.

use std::collections::BTreeSet;
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use treejoint::gluing::{GlueFamily, Policy};
use treejoint::io::{parse_choices, parse_instance, ResultFile, Value};
use treejoint::oracle::{admissible, assemble_system, feasible, scan_interval, verify_joint, Feasibility};
use treejoint::sample::{perturb_at_vertex, random_consistent_model};
use treejoint::{
    build_tree, canonical_joint, canonical_params, general_schedule, glue_pair, ratio, star_schedule, Choices,
    Interval, JointDist, MarginalModel, Rational, TreeGraph,
};

const STAR: &str = include_str!("../fixtures/fig4_star.toml");
const STAR_CHOICES: &str = include_str!("../fixtures/star_choices.toml");

/// The stated star entry 4/225 equals (1/5)^3 / (9/20), which divides by the
/// center marginal once instead of twice; the product formula gives 16/405.
const KNOWN_FAILURES: [usize; 1] = [1];

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn r(items: &[(i64, i64)]) -> Vec<Rational> {
    items.iter().map(|&(n, d)| ratio(n, d)).collect()
}

fn iv(lo: (i64, i64), hi: (i64, i64)) -> Interval {
    Interval::new(ratio(lo.0, lo.1), ratio(hi.0, hi.1))
}

fn star() -> MarginalModel {
    parse_instance(STAR).expect("bundled star parses")
}

#[rustfmt::skip]
fn eq14() -> Vec<Rational> {
    r(&[
        (1, 20), (1, 20), (0, 1), (1, 10), (1, 10), (0, 1), (1, 20), (1, 10),
        (1, 20), (3, 20), (3, 20), (1, 20), (1, 20), (1, 10), (0, 1), (0, 1),
    ])
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn show(xs: &[Rational]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn first_family() -> GlueFamily {
    let m = star();
    glue_pair(&m.edge_dist("1", "0").unwrap(), &m.edge_dist("0", "2").unwrap(), &["0"]).unwrap()
}

fn chain_102() -> MarginalModel {
    let m = star();
    let g = build_tree(&["1", "0", "2"], &[("1", "0"), ("0", "2")]).unwrap();
    MarginalModel::new(g, vec![m.edge_dist("1", "0").unwrap(), m.edge_dist("0", "2").unwrap()]).unwrap()
}

fn criterion_1() -> Outcome {
    let chain = canonical_joint(&chain_102()).map_err(|e| e.to_string())?;
    ensure(chain.get(&[0, 0, 0]) == &ratio(4, 45), || {
        format!("chain 000 = {}", chain.get(&[0, 0, 0]))
    })?;
    ensure(chain.get(&[0, 1, 0]) == &ratio(14, 55), || {
        format!("chain 010 = {}", chain.get(&[0, 1, 0]))
    })?;
    let s = canonical_joint(&star()).map_err(|e| e.to_string())?;
    let got = s.get(&[0, 0, 0, 0]);
    ensure(got == &ratio(4, 225), || {
        format!("chain 4/45 and 14/55 match; star 0000 = {got}, expected 4/225")
    })?;
    Ok("4/45, 14/55, 4/225".into())
}

fn criterion_2() -> Outcome {
    let f = first_family();
    let want = [iv((0, 1), (1, 5)), iv((1, 5), (7, 20))];
    ensure(f.bounds() == want, || format!("boxes {:?}", f.bounds()))?;
    Ok("[0, 1/5] x [1/5, 7/20]".into())
}

fn criterion_3() -> Outcome {
    let f = first_family();
    let x3 = f.reconstruct(&r(&[(1, 10), (1, 5)])).map_err(|e| e.to_string())?;
    let want3 = r(&[(1, 10), (1, 10), (1, 5), (1, 5), (1, 10), (3, 20), (3, 20), (0, 1)]);
    ensure(x3.probs() == want3.as_slice(), || {
        format!("first = {}", show(x3.probs()))
    })?;
    let m = star();
    let g = glue_pair(&m.edge_dist("2", "0").unwrap(), &m.edge_dist("0", "3").unwrap(), &["0"]).unwrap();
    let x1 = g.reconstruct(&r(&[(3, 20), (1, 10)])).map_err(|e| e.to_string())?;
    let want1 = r(&[(3, 20), (1, 20), (1, 10), (1, 4), (1, 20), (1, 5), (3, 20), (1, 20)]);
    ensure(x1.probs() == want1.as_slice(), || {
        format!("second = {}", show(x1.probs()))
    })?;
    Ok("both 8-entry vectors exact".into())
}

fn final_family() -> Result<GlueFamily, String> {
    let f = first_family();
    let x3 = f.reconstruct(&r(&[(1, 10), (1, 5)])).map_err(|e| e.to_string())?;
    let m = star();
    let g = glue_pair(&m.edge_dist("2", "0").unwrap(), &m.edge_dist("0", "3").unwrap(), &["0"]).unwrap();
    let x1 = g.reconstruct(&r(&[(3, 20), (1, 10)])).map_err(|e| e.to_string())?;
    let left = x3.permute(&["0", "1", "2"]).map_err(|e| e.to_string())?;
    let right = x1.permute(&["0", "2", "3"]).map_err(|e| e.to_string())?;
    let fam = glue_pair(&left, &right, &["0", "2"]).map_err(|e| e.to_string())?;
    fam.permuted(&["0", "1", "2", "3"]).map_err(|e| e.to_string())
}

fn criterion_4() -> Outcome {
    let fam = final_family()?;
    ensure(fam.param_coords() == [0, 2, 8, 10], || {
        format!("coords {:?}", fam.param_coords())
    })?;
    let want = [
        iv((1, 20), (1, 10)),
        iv((0, 1), (1, 20)),
        iv((0, 1), (1, 10)),
        iv((3, 20), (3, 20)),
    ];
    ensure(fam.bounds() == want, || format!("boxes {:?}", fam.bounds()))?;
    let scan = scan_interval(&fam, 3, 400, Policy::Midpoint).map_err(|e| e.to_string())?;
    ensure(scan.as_ref() == Some(&want[3]), || {
        format!("scan of last parameter = {scan:?}")
    })?;
    Ok("four intervals exact; last is the point 3/20, confirmed by scan".into())
}

fn criterion_5() -> Outcome {
    let fam = final_family()?;
    let z = fam
        .reconstruct(&r(&[(1, 20), (0, 1), (1, 20), (3, 20)]))
        .map_err(|e| e.to_string())?;
    ensure(z.probs() == eq14().as_slice(), || {
        format!("joint = {}", show(z.probs()))
    })?;
    let report = verify_joint(&z, &star());
    ensure(report.ok(), || format!("verify: {:?}", report.violations))?;
    let scheduled = star_schedule(&star(), &parse_choices(STAR_CHOICES).unwrap()).map_err(|e| e.to_string())?;
    ensure(scheduled.joint == z, || {
        "schedule disagrees with direct reconstruction".into()
    })?;
    Ok("16-entry vector exact and reproduces all three edges".into())
}

fn criterion_6() -> Outcome {
    let c = canonical_joint(&star()).map_err(|e| e.to_string())?;
    let built = eq14();
    ensure(c.probs()[0] != built[0], || "canonical first entry equals 1/20".into())?;
    Ok(format!("canonical first entry {} differs from 1/20", c.probs()[0]))
}

/// The model restricted to `vars`, which must span a subtree.
fn induced(m: &MarginalModel, vars: &[String]) -> MarginalModel {
    let edges: Vec<(String, String)> = m
        .graph()
        .edges()
        .iter()
        .filter(|(u, v)| vars.contains(u) && vars.contains(v))
        .cloned()
        .collect();
    let dists = edges.iter().map(|(u, v)| m.edge_dist(u, v).unwrap()).collect();
    MarginalModel::new(TreeGraph::new(vars, &edges).unwrap(), dists).unwrap()
}

const EXHAUSTIVE_CORNERS: usize = 64;

/// Corners of the box: all of them when there are at most
/// `EXHAUSTIVE_CORNERS`, otherwise the two extreme corners and a random sample.
fn corners(f: &GlueFamily, rng: &mut ChaCha8Rng) -> Vec<Vec<Rational>> {
    let p = f.num_params();
    let pick = |mask: u64| -> Vec<Rational> {
        f.bounds()
            .iter()
            .enumerate()
            .map(|(i, b)| if mask >> i & 1 == 1 { b.hi.clone() } else { b.lo.clone() })
            .collect()
    };
    if 1usize << p <= EXHAUSTIVE_CORNERS {
        (0..1u64 << p).map(pick).collect()
    } else {
        let mut out = vec![f.lower(), f.upper()];
        out.extend((0..EXHAUSTIVE_CORNERS).map(|_| pick(rng.gen::<u64>() & ((1 << p) - 1))));
        out
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7ee);
    let (mut models, mut boxes, mut recon) = (0, 0, 0);
    for _ in 0..200 {
        let n = rng.gen_range(3..=6);
        let (m, _) = random_consistent_model(&mut rng, n);
        models += 1;
        let s = general_schedule(&m, &Choices::default()).map_err(|e| e.to_string())?;
        for (i, step) in s.steps.iter().enumerate() {
            let f = &step.family;
            boxes += 1;
            ensure(f.is_nonempty(), || format!("empty box at step {i}"))?;
            let c = canonical_params(&m, f).map_err(|e| e.to_string())?;
            ensure(f.contains(&c), || format!("canonical outside box at step {i}"))?;
            let sub = induced(&m, f.vars());
            let mut candidates = corners(f, &mut rng);
            candidates.push(f.midpoint());
            for params in candidates {
                let z = f.reconstruct(&params).map_err(|e| e.to_string())?;
                recon += 1;
                let report = verify_joint(&z, &sub);
                ensure(report.ok(), || {
                    format!("step {i} reconstruction fails: {:?}", report.violations)
                })?;
            }
        }
        for policy in [Policy::Lower, Policy::Upper, Policy::Midpoint] {
            let s = general_schedule(&m, &Choices::Policy(policy)).map_err(|e| e.to_string())?;
            recon += 1;
            ensure(verify_joint(&s.joint, &m).ok(), || {
                format!("{} schedule fails", policy.name())
            })?;
        }
        let sys = assemble_system(&m).map_err(|e| e.to_string())?;
        match feasible(&sys).map_err(|e| e.to_string())? {
            Feasibility::Feasible(z) => {
                let w = JointDist::new(sys.vars.clone(), z).map_err(|e| e.to_string())?;
                ensure(verify_joint(&w, &m).ok(), || "oracle witness fails".into())?;
            }
            Feasibility::Infeasible => return Err("oracle declared a consistent model infeasible".into()),
        }
    }
    Ok(format!(
        "{models} models, {boxes} boxes, {recon} reconstructions (corners exhaustive up to {EXHAUSTIVE_CORNERS} per box, sampled beyond)"
    ))
}

fn criterion_8() -> Outcome {
    const RES: u32 = 400;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ca7);
    let (mut scans, mut outside) = (0, 0);
    for trial in 0..40 {
        let n = 3 + trial % 2;
        let (m, _) = random_consistent_model(&mut rng, n);
        let s = general_schedule(&m, &Choices::default()).map_err(|e| e.to_string())?;
        for step in &s.steps {
            let f = &step.family;
            for (c, b) in f.bounds().iter().enumerate() {
                scans += 1;
                let scan = scan_interval(f, c, RES, Policy::Midpoint).map_err(|e| e.to_string())?;
                let on_grid = |x: &Rational| (x * Rational::from_integer(RES.into())).is_integer();
                if let Some(sc) = &scan {
                    ensure(b.contains_interval(sc), || format!("scan {sc} exceeds box {b}"))?;
                }
                for end in [&b.lo, &b.hi] {
                    if on_grid(end) {
                        let mut p = f.midpoint();
                        p[c] = end.clone();
                        ensure(admissible(f, &p).unwrap(), || {
                            format!("endpoint {end} of {b} infeasible")
                        })?;
                    }
                }
                if on_grid(&b.lo) && on_grid(&b.hi) {
                    ensure(scan.as_ref() == Some(b), || format!("scan {scan:?} != box {b}"))?;
                }
                for i in 0..=RES {
                    let g = Rational::new(i.into(), RES.into());
                    if b.contains(&g) {
                        continue;
                    }
                    let mut p = f.midpoint();
                    p[c] = g.clone();
                    let z = f.evaluate(&p).map_err(|e| e.to_string())?;
                    outside += 1;
                    ensure(z.iter().any(|x| x < &Rational::from_integer(0.into())), || {
                        format!("grid point {g} outside {b} has no negative entry")
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "{scans} scans at resolution {RES}, {outside} outside grid points negative"
    ))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xbad);
    let mut count = 0;
    while count < 50 {
        let n = rng.gen_range(3..=6);
        let (m, _) = random_consistent_model(&mut rng, n);
        let Some(bad) = perturb_at_vertex(&mut rng, &m) else {
            continue;
        };
        count += 1;
        let rejected = !bad.check_consistency().ok();
        let sys = assemble_system(&bad).map_err(|e| e.to_string())?;
        let infeasible = !feasible(&sys).map_err(|e| e.to_string())?.is_feasible();
        ensure(rejected && infeasible, || {
            format!("disagreement: check_consistency rejects={rejected}, oracle infeasible={infeasible}")
        })?;
    }
    Ok(format!("{count} inconsistent models rejected by both paths"))
}

fn criterion_10() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_treejoint"))
        .arg("demo")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("demo exited with {}", out.status))?;
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    let parsed = ResultFile::parse_text(&text).map_err(|e| e.to_string())?;
    let checks = parsed.find("checks").ok_or("no checks section")?;
    ensure(checks.get("all") == Some(&Value::Bool(true)), || {
        "demo self-checks failed".into()
    })?;
    let lines = [
        "X1: [0, 1/5]",
        "X3: [1/5, 7/20]",
        "canonical: (4/45, 14/55)",
        "output: (1/10, 1/10, 1/5, 1/5, 1/10, 3/20, 3/20, 0)",
        "ordered: (1/10, 1/10, 1/10, 3/20, 1/5, 1/5, 3/20, 0)",
        "output: (3/20, 1/20, 1/10, 1/4, 1/20, 1/5, 3/20, 1/20)",
        "ordered: (3/20, 1/20, 1/20, 1/5, 1/10, 1/4, 3/20, 1/20)",
        "Y1: [1/20, 1/10]",
        "Y3: [0, 1/20]",
        "Y9: [0, 1/10]",
        "Y11: [3/20, 3/20]",
        "scanned: [3/20, 3/20]",
    ];
    for line in lines {
        ensure(text.lines().any(|l| l == line), || format!("missing line {line:?}"))?;
    }
    let last = text.lines().last().unwrap_or_default();
    ensure(last.contains(&show(&eq14())), || format!("last line is {last:?}"))?;
    Ok("exit 0, every intermediate printed exactly".into())
}

fn main() {
    let criteria: [(&str, Check); 10] = [
        ("canonical entries on chain and star", criterion_1),
        ("first glue box", criterion_2),
        ("three-variable reconstructions", criterion_3),
        ("four-variable box with singleton", criterion_4),
        ("end-to-end sixteen-entry joint", criterion_5),
        ("built joint differs from canonical", criterion_6),
        ("random-model property suite", criterion_7),
        ("oracle scan agrees with boxes", criterion_8),
        ("inconsistent models rejected", criterion_9),
        ("demo command", criterion_10),
    ];
    let mut failed = BTreeSet::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let n = i + 1;
        let started = std::time::Instant::now();
        let outcome = std::panic::catch_unwind(check);
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(Ok(detail)) => println!("PASS criterion {n} ({secs:.2}s): {name}: {detail}"),
            Ok(Err(reason)) => {
                failed.insert(n);
                println!("FAIL criterion {n} ({secs:.2}s): {name}: {reason}");
            }
            Err(_) => {
                failed.insert(n);
                println!("FAIL criterion {n} ({secs:.2}s): {name}: panicked");
            }
        }
    }
    let known: BTreeSet<usize> = KNOWN_FAILURES.into_iter().collect();
    println!(
        "{} of {} criteria passed; known failures {:?}",
        criteria.len() - failed.len(),
        criteria.len(),
        known
    );
    if failed != known {
        println!("unexpected result: failing {failed:?}, expected {known:?}");
        std::process::exit(1);
    }
}
