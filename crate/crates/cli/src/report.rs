use treejoint::io::{Section, Value};
use treejoint::schedule::{GlueSchedule, StepInput};
use treejoint::{JointDist, ProbReport, Rational};

pub fn text(s: impl Into<String>) -> Value {
    Value::Text(s.into())
}

pub fn vector(xs: &[Rational]) -> Value {
    Value::Vector(xs.to_vec())
}

pub fn labels(ls: &[String]) -> Value {
    Value::Labels(ls.to_vec())
}

pub fn count(n: usize) -> Value {
    Value::Rational(Rational::from_integer(n.into()))
}

pub fn joint(section: &mut Section, key: &str, j: &JointDist) {
    section
        .push(format!("{key}-vars"), labels(j.vars()))
        .push(key, vector(j.probs()));
}

pub fn input(i: &StepInput) -> Value {
    text(match i {
        StepInput::Edge(u, v) => format!("edge ({u}, {v})"),
        StepInput::Step(s) => format!("step {s}"),
        StepInput::Marginal { step, vars } => format!("step {step} marginal on ({})", vars.join(", ")),
    })
}

/// One section per step with inputs, box and chosen parameters, then the
/// resulting joint.
pub fn schedule(sections: &mut Vec<Section>, s: &GlueSchedule, with_outputs: bool) {
    let mut head = Section::new("schedule");
    head.push("kind", text(s.kind.name()))
        .push("order", labels(&s.order))
        .push("steps", count(s.steps.len()))
        .push("parameters", count(s.num_params()));
    sections.push(head);
    for (i, step) in s.steps.iter().enumerate() {
        let f = &step.family;
        let mut sec = Section::new(format!("step {i}"));
        sec.push("left", input(&step.left))
            .push("right", input(&step.right))
            .push("vars", labels(f.vars()))
            .push("overlap", labels(f.overlap()));
        for (p, b) in f.bounds().iter().enumerate() {
            sec.push(s.param_label(i, p), Value::Interval(b.clone()));
        }
        sec.push("chosen", vector(&step.params));
        if with_outputs {
            sec.push("output", vector(step.output.probs()));
        }
        sections.push(sec);
    }
}

pub fn consistency(sections: &mut Vec<Section>, name: &str, r: &ProbReport) {
    let mut sec = Section::new(name);
    sec.push("ok", Value::Bool(r.ok()))
        .push("violations", count(r.violations.len()));
    sections.push(sec);
    for (i, v) in r.violations.iter().enumerate() {
        let mut sec = Section::new(format!("violation {i}"));
        sec.push("constraint", text(v.constraint.clone()))
            .push("lhs", Value::Rational(v.lhs.clone()))
            .push("rhs", Value::Rational(v.rhs.clone()));
        sections.push(sec);
    }
}
