//! End-to-end run on the bundled star, checked against known values.

use treejoint::gluing::Policy;
use treejoint::io::{parse_choices, parse_instance, ResultFile, Section, Value};
use treejoint::oracle::{scan_interval, verify_joint};
use treejoint::{canonical_joint, canonical_params, ratio, star_schedule, Interval, Rational};

use crate::commands::{Failure, Outcome};
use crate::fixtures;
use crate::report;

type Frac = (i64, i64);

fn r(items: &[Frac]) -> Vec<Rational> {
    items.iter().map(|&(n, d)| ratio(n, d)).collect()
}

fn box_of(items: &[(Frac, Frac)]) -> Vec<Interval> {
    items
        .iter()
        .map(|&((a, b), (c, d))| Interval::new(ratio(a, b), ratio(c, d)))
        .collect()
}

struct Expected {
    first_box: Vec<Interval>,
    first_canonical: Vec<Rational>,
    first_raw: Vec<Rational>,
    first_ordered: Vec<Rational>,
    second_raw: Vec<Rational>,
    second_ordered: Vec<Rational>,
    final_box: Vec<Interval>,
    joint: Vec<Rational>,
}

#[rustfmt::skip]
fn expected() -> Expected {
    Expected {
        first_box: box_of(&[((0, 1), (1, 5)), ((1, 5), (7, 20))]),
        first_canonical: r(&[(4, 45), (14, 55)]),
        first_raw: r(&[(1, 10), (1, 10), (1, 5), (1, 5), (1, 10), (3, 20), (3, 20), (0, 1)]),
        first_ordered: r(&[(1, 10), (1, 10), (1, 10), (3, 20), (1, 5), (1, 5), (3, 20), (0, 1)]),
        second_raw: r(&[(3, 20), (1, 20), (1, 10), (1, 4), (1, 20), (1, 5), (3, 20), (1, 20)]),
        second_ordered: r(&[(3, 20), (1, 20), (1, 20), (1, 5), (1, 10), (1, 4), (3, 20), (1, 20)]),
        final_box: box_of(&[
            ((1, 20), (1, 10)),
            ((0, 1), (1, 20)),
            ((0, 1), (1, 10)),
            ((3, 20), (3, 20)),
        ]),
        joint: r(&[
            (1, 20), (1, 20), (0, 1), (1, 10), (1, 10), (0, 1), (1, 20), (1, 10),
            (1, 20), (3, 20), (3, 20), (1, 20), (1, 20), (1, 10), (0, 1), (0, 1),
        ]),
    }
}

pub fn run(echo: &[String]) -> Result<Outcome, Failure> {
    let want = expected();
    let m = parse_instance(fixtures::STAR)?;
    let choices = parse_choices(fixtures::STAR_CHOICES)?;
    let mut out = ResultFile::new(echo);
    let mut checks: Vec<(&str, bool)> = Vec::new();

    let sec = out.section("model");
    sec.push("vertices", report::labels(m.vertices()));
    for (u, v, d) in m.edges() {
        sec.push(format!("P{u}{v}"), report::vector(d.probs()));
    }
    let center = m.vertex_marginal("0")?;
    sec.push("P0", report::vector(center.probs()))
        .push("consistent", Value::Bool(m.is_consistent()));
    checks.push(("center-marginal", center.probs() == r(&[(9, 20), (11, 20)])));

    let s = star_schedule(&m, &choices)?;
    let views = [("0", "1", "2"), ("0", "2", "3")];
    for (i, step) in s.steps.iter().enumerate() {
        let f = &step.family;
        let sec = out.section(format!("step {i}"));
        sec.push("left", report::input(&step.left))
            .push("right", report::input(&step.right))
            .push("vars", report::labels(f.vars()));
        for (p, b) in f.bounds().iter().enumerate() {
            sec.push(s.param_label(i, p), Value::Interval(b.clone()));
        }
        if i == 0 {
            let c = canonical_params(&m, f)?;
            sec.push("canonical", report::vector(&c))
                .push("canonical-in-box", Value::Bool(f.contains(&c)));
            checks.push(("first-box", f.bounds() == want.first_box.as_slice()));
            checks.push(("first-canonical", c == want.first_canonical && f.contains(&c)));
        }
        sec.push("chosen", report::vector(&step.params))
            .push("output", report::vector(step.output.probs()));
        if let Some(&(a, b, c)) = views.get(i) {
            let ordered = step.output.permute(&[a, b, c])?;
            sec.push("ordered-vars", report::labels(ordered.vars()))
                .push("ordered", report::vector(ordered.probs()));
            let (raw, sorted) = if i == 0 {
                (&want.first_raw, &want.first_ordered)
            } else {
                (&want.second_raw, &want.second_ordered)
            };
            checks.push((
                if i == 0 { "first-output" } else { "second-output" },
                step.output.probs() == raw.as_slice() && ordered.probs() == sorted.as_slice(),
            ));
        }
    }

    let last = s.steps.last().expect("a star on four vertices has three steps");
    checks.push(("final-box", last.family.bounds() == want.final_box.as_slice()));
    let fixed = last.family.num_params() - 1;
    let scanned = scan_interval(&last.family, fixed, 400, Policy::Midpoint)?;
    let sec = out.section("scan");
    sec.push("parameter", report::text(s.param_label(s.steps.len() - 1, fixed)))
        .push("resolution", report::count(400));
    if let Some(i) = &scanned {
        sec.push("scanned", Value::Interval(i.clone()));
    }
    checks.push(("scan-singleton", scanned.as_ref() == Some(&want.final_box[fixed])));

    let canonical = canonical_joint(&m)?;
    let first = &s.joint.probs()[0];
    let sec = out.section("canonical");
    sec.push("first-entry", Value::Rational(canonical.probs()[0].clone()))
        .push("built-first-entry", Value::Rational(first.clone()))
        .push("differs", Value::Bool(&canonical.probs()[0] != first));
    checks.push(("non-unique", &canonical.probs()[0] != first));

    let verdict = verify_joint(&s.joint, &m);
    checks.push(("verify", verdict.ok()));
    checks.push(("joint", s.joint.probs() == want.joint.as_slice()));

    let mut sec = Section::new("checks");
    for (name, pass) in &checks {
        sec.push(*name, Value::Bool(*pass));
    }
    let ok = checks.iter().all(|(_, pass)| *pass);
    sec.push("all", Value::Bool(ok));
    out.sections.push(sec);
    report::joint(out.section("joint"), "joint", &s.joint);
    Ok(Outcome { result: out, ok })
}
