mod commands;
mod demo;
mod fixtures;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use treejoint::io::ResultFile;

#[derive(Parser)]
#[command(
    name = "treejoint",
    version,
    about = "Exact joint distributions from pairwise marginals on trees"
)]
struct Cli {
    /// Print results as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that incident edges agree on every vertex marginal.
    Validate { instance: PathBuf },
    /// Print the conditional-independence joint.
    Canonical { instance: PathBuf },
    /// Print the parameter box of every glue step.
    Bounds {
        instance: PathBuf,
        #[command(flatten)]
        plan: Plan,
    },
    /// Build a full joint from per-step choices.
    Build {
        instance: PathBuf,
        #[command(flatten)]
        plan: Plan,
    },
    /// Check a joint file against an instance.
    Verify {
        instance: PathBuf,
        #[arg(long)]
        joint: PathBuf,
    },
    /// Solve the marginal problem as an exact linear feasibility system.
    Oracle {
        instance: PathBuf,
        /// Scan one glue parameter, given as STEP:INDEX (both 0-based).
        #[arg(long, value_name = "STEP:INDEX", value_parser = parse_coord)]
        scan: Option<(usize, usize)>,
        #[arg(long, default_value_t = 400, requires = "scan")]
        resolution: u32,
        #[command(flatten)]
        plan: Plan,
    },
    /// Run the bundled four-variable star end to end and check every result.
    Demo,
}

#[derive(Args)]
struct Plan {
    #[arg(long, value_enum, default_value_t = ShapeArg::Auto)]
    schedule: ShapeArg,
    /// Choices file with per-step parameters.
    #[arg(long, conflicts_with = "policy")]
    choices: Option<PathBuf>,
    /// Parameter policy used for every step.
    #[arg(long, value_enum)]
    policy: Option<PolicyArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    Chain,
    Star,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Canonical,
    Midpoint,
    Lower,
    Upper,
}

fn parse_coord(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(':').ok_or("expected STEP:INDEX")?;
    let step = a.parse().map_err(|_| format!("bad step {a:?}"))?;
    let index = b.parse().map_err(|_| format!("bad index {b:?}"))?;
    Ok((step, index))
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let mut echo = vec!["treejoint".to_string()];
    echo.extend(argv.into_iter().skip(1));
    let (result, code) = match commands::run(cli.command, &echo) {
        Ok(outcome) => (outcome.result, if outcome.ok { 0 } else { 1 }),
        Err(failure) => {
            let mut r = ResultFile::new(&echo);
            r.section("error")
                .push("kind", report::text(failure.kind()))
                .push("message", report::text(failure.to_string()));
            (r, failure.exit_code())
        }
    };
    let rendered = if cli.json {
        result.to_json() + "\n"
    } else {
        result.to_text()
    };
    let _ = std::io::stdout().lock().write_all(rendered.as_bytes());
    ExitCode::from(code)
}
