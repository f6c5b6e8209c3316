use std::fmt;
use std::path::Path;

use treejoint::gluing::Policy;
use treejoint::io::{parse_choices, parse_instance, parse_joint, ResultFile, Value};
use treejoint::oracle::{assemble_system, feasible, scan_interval, verify_joint, Feasibility};
use treejoint::{canonical_joint, schedule_with, Choices, Error, MarginalModel, ScheduleShape};

use crate::report;
use crate::{fixtures, Command, Plan, PolicyArg, ShapeArg};

pub struct Outcome {
    pub result: ResultFile,
    pub ok: bool,
}

pub enum Failure {
    /// A file could not be read or a bundled name is unknown.
    Io(String),
    Domain(Error),
}

impl Failure {
    pub fn kind(&self) -> &'static str {
        match self {
            Failure::Io(_) => "io",
            Failure::Domain(e) if is_usage(e) => "input",
            Failure::Domain(_) => "validation",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.kind() {
            "validation" => 1,
            _ => 2,
        }
    }
}

fn is_usage(e: &Error) -> bool {
    matches!(
        e,
        Error::Syntax { .. }
            | Error::Semantic { .. }
            | Error::Format(_)
            | Error::Parse { .. }
            | Error::ZeroDenominator { .. }
            | Error::NotAPath
            | Error::NotAStar
            | Error::TooLarge { .. }
            | Error::NoSuchParam { .. }
            | Error::ResolutionZero
    )
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Io(m) => f.write_str(m),
            Failure::Domain(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Run<T> = Result<T, Failure>;

/// Reads `path`, or the bundled fixture of that name if no such file exists.
pub fn read_input(path: &Path) -> Run<String> {
    match std::fs::read_to_string(path) {
        Ok(text) => Ok(text),
        Err(e) if !path.exists() => path
            .to_str()
            .and_then(fixtures::bundled)
            .map(str::to_string)
            .ok_or_else(|| {
                let known: Vec<&str> = fixtures::names().collect();
                Failure::Io(format!("{}: {e} (bundled names: {})", path.display(), known.join(", ")))
            }),
        Err(e) => Err(Failure::Io(format!("{}: {e}", path.display()))),
    }
}

fn load_model(path: &Path) -> Run<MarginalModel> {
    Ok(parse_instance(&read_input(path)?)?)
}

fn shape(arg: ShapeArg) -> ScheduleShape {
    match arg {
        ShapeArg::Chain => ScheduleShape::Chain,
        ShapeArg::Star => ScheduleShape::Star,
        ShapeArg::Auto => ScheduleShape::Auto,
    }
}

fn choices(plan: &Plan) -> Run<Choices> {
    if let Some(path) = &plan.choices {
        return Ok(parse_choices(&read_input(path)?)?);
    }
    Ok(Choices::Policy(match plan.policy.unwrap_or(PolicyArg::Canonical) {
        PolicyArg::Canonical => Policy::Canonical,
        PolicyArg::Midpoint => Policy::Midpoint,
        PolicyArg::Lower => Policy::Lower,
        PolicyArg::Upper => Policy::Upper,
    }))
}

fn require_consistent(m: &MarginalModel) -> Run<()> {
    if m.is_consistent() {
        Ok(())
    } else {
        Err(Failure::Domain(Error::InconsistentModel))
    }
}

pub fn run(command: Command, echo: &[String]) -> Run<Outcome> {
    let mut r = ResultFile::new(echo);
    let mut ok = true;
    match command {
        Command::Validate { instance } => {
            let m = load_model(&instance)?;
            r.section("instance")
                .push("vertices", report::labels(m.vertices()))
                .push("edges", report::count(m.graph().edges().len()));
            let check = m.check_consistency();
            ok = check.ok();
            report::consistency(&mut r.sections, "consistency", &check);
        }
        Command::Canonical { instance } => {
            let m = load_model(&instance)?;
            require_consistent(&m)?;
            let j = canonical_joint(&m)?;
            report::joint(r.section("canonical"), "joint", &j);
        }
        Command::Bounds { instance, plan } => {
            let m = load_model(&instance)?;
            require_consistent(&m)?;
            let s = schedule_with(&m, shape(plan.schedule), &choices(&plan)?)?;
            report::schedule(&mut r.sections, &s, false);
        }
        Command::Build { instance, plan } => {
            let m = load_model(&instance)?;
            require_consistent(&m)?;
            let s = schedule_with(&m, shape(plan.schedule), &choices(&plan)?)?;
            report::schedule(&mut r.sections, &s, true);
            let check = verify_joint(&s.joint, &m);
            ok = check.ok();
            report::consistency(&mut r.sections, "verify", &check);
            report::joint(r.section("joint"), "joint", &s.joint);
        }
        Command::Verify { instance, joint } => {
            let m = load_model(&instance)?;
            let j = parse_joint(&read_input(&joint)?)?;
            let check = verify_joint(&j, &m);
            ok = check.ok();
            report::consistency(&mut r.sections, "verify", &check);
        }
        Command::Oracle {
            instance,
            scan,
            resolution,
            plan,
        } => {
            let m = load_model(&instance)?;
            let sys = assemble_system(&m)?;
            let verdict = feasible(&sys)?;
            let sec = r.section("system");
            sec.push("vars", report::labels(&sys.vars))
                .push("unknowns", report::count(sys.num_unknowns))
                .push("equations", report::count(sys.num_equations()))
                .push("rank", report::count(sys.rank()))
                .push("dimension", report::count(sys.solution_dimension()));
            let sec = r.section("feasibility");
            sec.push("feasible", Value::Bool(verdict.is_feasible()));
            match verdict {
                Feasibility::Feasible(z) => {
                    sec.push("witness-checked", Value::Bool(sys.is_solution(&z)))
                        .push("witness", report::vector(&z));
                }
                Feasibility::Infeasible => ok = false,
            }
            if let Some((step, index)) = scan {
                require_consistent(&m)?;
                let s = schedule_with(&m, shape(plan.schedule), &choices(&plan)?)?;
                let target = s.steps.get(step).ok_or(Error::NoSuchParam {
                    coord: step,
                    count: s.steps.len(),
                })?;
                let f = &target.family;
                let scanned = scan_interval(f, index, resolution, Policy::Midpoint)?;
                let analytic = f.bounds()[index].clone();
                let agrees = scanned.as_ref().is_some_and(|i| analytic.contains_interval(i));
                ok &= agrees;
                let sec = r.section("scan");
                sec.push("step", report::count(step))
                    .push("parameter", report::text(s.param_label(step, index)))
                    .push("resolution", report::count(resolution as usize))
                    .push("box", Value::Interval(analytic));
                if let Some(i) = scanned {
                    sec.push("scanned", Value::Interval(i));
                }
                sec.push("within-box", Value::Bool(agrees));
            }
        }
        Command::Demo => return crate::demo::run(echo),
    }
    Ok(Outcome { result: r, ok })
}
