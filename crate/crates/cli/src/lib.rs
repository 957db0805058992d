//! Command-line surface over the `coalg` library. [`run_command`] does all
//! the work so tests can drive it without spawning a process.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use coalg::format::{parse_order, parse_partition, parse_relation, render_partition, render_relation, render_system};
use coalg::transforms::{alpha_image, canonical_representation, enumerate_representations, DEFAULT_ENUM_CAP};
use coalg::verify::{run_check, run_fixture_suite, CheckReport, GenParams, PropertyId};
use coalg::{
    bisimilarity, is_bisimulation, is_prob_bisimulation, is_simulation, largest_simulation, prob_bisimilarity,
    AlphaKind, Error, OrderSpec, Relation, System, Verdict,
};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

/// Failures kept in the rendered report of one property.
const SHOWN_FAILURES: usize = 3;

#[derive(Debug, Parser)]
#[command(name = "coalg", about = "Bisimulation and simulation checks for finite transition systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a given relation or partition.
    #[command(subcommand)]
    Check(Check),
    /// Compute the largest relation of some kind.
    #[command(subcommand)]
    Compute(Compute),
    /// Apply a natural transformation to a system.
    Image {
        #[arg(long)]
        sys: PathBuf,
        #[arg(long, value_enum)]
        alpha: Alpha,
    },
    /// Representations of a system along the transformation onto its kind.
    Represent {
        #[arg(long)]
        sys: PathBuf,
        #[arg(long, conflicts_with = "bound", required_unless_present = "bound")]
        canonical: bool,
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Run the property checks and the worked-example suite.
    Verify {
        /// `all`, `fixtures`, or a property id such as `P2` or `S3`.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Instances per property.
        #[arg(long, default_value_t = 200)]
        seeds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Debug, Args)]
struct Pair {
    #[arg(long)]
    sys1: PathBuf,
    #[arg(long)]
    sys2: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Check {
    Bisim {
        #[command(flatten)]
        systems: Pair,
        #[arg(long)]
        rel: PathBuf,
    },
    Sim {
        #[command(flatten)]
        systems: Pair,
        #[arg(long)]
        rel: PathBuf,
        /// eq, incl, kernel-support, kernel-dm, kernel-dma or file:PATH
        #[arg(long, default_value = "eq")]
        order: String,
    },
    ProbBisim {
        #[arg(long)]
        sys: PathBuf,
        #[arg(long)]
        partition: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum Compute {
    Bisimilarity {
        #[command(flatten)]
        systems: Pair,
    },
    Similarity {
        #[command(flatten)]
        systems: Pair,
        #[arg(long, default_value = "eq")]
        order: String,
    },
    ProbPartition {
        #[arg(long)]
        sys: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Alpha {
    Support,
    Dm,
    Dma,
}

impl From<Alpha> for AlphaKind {
    fn from(a: Alpha) -> AlphaKind {
        match a {
            Alpha::Support => AlphaKind::Support,
            Alpha::Dm => AlphaKind::Dm,
            Alpha::Dma => AlphaKind::Dma,
        }
    }
}

/// What went wrong, already mapped to an exit code.
struct Failed(i32, String);

impl From<Error> for Failed {
    fn from(e: Error) -> Failed {
        let code = match e {
            Error::UnknownProperty(_) | Error::GenParams(_) | Error::InvalidArgument(_) => EXIT_USAGE,
            _ => EXIT_INVALID,
        };
        Failed(code, format!("error: {e}\n"))
    }
}

type Outcome = Result<(i32, String), Failed>;

/// Runs one command line (including the program name) and returns the exit
/// code with everything that would be printed.
pub fn run_command<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_HOLDS };
            return (code, e.render().to_string());
        }
    };
    match dispatch(cli.command) {
        Ok(done) => done,
        Err(Failed(code, text)) => (code, text),
    }
}

fn read(path: &Path) -> Result<String, Failed> {
    fs::read_to_string(path).map_err(|e| Failed(EXIT_INVALID, format!("error: cannot read {}: {e}\n", path.display())))
}

fn load_system(path: &Path) -> Result<System, Failed> {
    let text = read(path)?;
    coalg::format::parse_system(&text).map_err(|e| Failed(EXIT_INVALID, format!("error: {}: {e}\n", path.display())))
}

fn load_pair(p: &Pair) -> Result<(System, System), Failed> {
    Ok((load_system(&p.sys1)?, load_system(&p.sys2)?))
}

fn load_relation(path: &Path, c: &System, d: &System) -> Result<Relation, Failed> {
    let text = read(path)?;
    parse_relation(&text, &c.state_set(), &d.state_set())
        .map_err(|e| Failed(EXIT_INVALID, format!("error: {}: {e}\n", path.display())))
}

fn parse_order_arg(arg: &str) -> Result<OrderSpec, Failed> {
    Ok(match arg {
        "eq" => OrderSpec::Equality,
        "incl" => OrderSpec::PowersetInclusion,
        "kernel-support" => OrderSpec::KernelOf(AlphaKind::Support),
        "kernel-dm" => OrderSpec::KernelOf(AlphaKind::Dm),
        "kernel-dma" => OrderSpec::KernelOf(AlphaKind::Dma),
        _ => match arg.strip_prefix("file:") {
            Some(path) => {
                let text = read(Path::new(path))?;
                OrderSpec::Extensional(
                    parse_order(&text).map_err(|e| Failed(EXIT_INVALID, format!("error: {path}: {e}\n")))?,
                )
            }
            None => {
                return Err(Failed(
                    EXIT_USAGE,
                    format!("error: unknown order `{arg}`; expected eq, incl, kernel-support, kernel-dm, kernel-dma or file:PATH\n"),
                ))
            }
        },
    })
}

fn verdict(v: Verdict) -> (i32, String) {
    match v.counterexample {
        None => (EXIT_HOLDS, "holds\n".into()),
        Some(c) => (EXIT_REFUTED, format!("refuted at ({}, {}): {}\n", c.left, c.right, c.detail)),
    }
}

fn enum_cap() -> Result<usize, Failed> {
    match std::env::var("COALG_MAX_ENUM") {
        Err(_) => Ok(DEFAULT_ENUM_CAP),
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Failed(EXIT_USAGE, format!("error: COALG_MAX_ENUM must be a non-negative integer, found `{v}`\n"))),
    }
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Check(Check::Bisim { systems, rel }) => {
            let (c, d) = load_pair(&systems)?;
            let rel = load_relation(&rel, &c, &d)?;
            Ok(verdict(is_bisimulation(&c, &d, &rel)?))
        }
        Command::Check(Check::Sim { systems, rel, order }) => {
            let ord = parse_order_arg(&order)?;
            let (c, d) = load_pair(&systems)?;
            let rel = load_relation(&rel, &c, &d)?;
            Ok(verdict(is_simulation(&c, &d, &rel, &ord)?))
        }
        Command::Check(Check::ProbBisim { sys, partition }) => {
            let s = load_system(&sys)?;
            let text = read(&partition)?;
            let part = parse_partition(&text, &s.state_set())
                .map_err(|e| Failed(EXIT_INVALID, format!("error: {}: {e}\n", partition.display())))?;
            Ok(verdict(is_prob_bisimulation(&s, &part)?))
        }
        Command::Compute(Compute::Bisimilarity { systems }) => {
            let (c, d) = load_pair(&systems)?;
            Ok((EXIT_HOLDS, render_relation(&bisimilarity(&c, &d)?)))
        }
        Command::Compute(Compute::Similarity { systems, order }) => {
            let ord = parse_order_arg(&order)?;
            let (c, d) = load_pair(&systems)?;
            Ok((EXIT_HOLDS, render_relation(&largest_simulation(&c, &d, &ord)?)))
        }
        Command::Compute(Compute::ProbPartition { sys }) => {
            let s = load_system(&sys)?;
            Ok((EXIT_HOLDS, render_partition(&prob_bisimilarity(&s)?)))
        }
        Command::Image { sys, alpha } => {
            let s = load_system(&sys)?;
            Ok((EXIT_HOLDS, render_system(&alpha_image(alpha.into(), &s)?)))
        }
        Command::Represent { sys, canonical, bound } => {
            let s = load_system(&sys)?;
            if canonical {
                return Ok((EXIT_HOLDS, render_system(&canonical_representation(&s)?)));
            }
            let bound = bound.expect("clap requires --canonical or --bound");
            if bound == 0 {
                return Err(Failed(EXIT_USAGE, "error: --bound must be at least 1\n".into()));
            }
            let reps = enumerate_representations(&s, bound, enum_cap()?)?;
            Ok((EXIT_HOLDS, reps.iter().map(render_system).collect::<Vec<_>>().join("\n")))
        }
        Command::Verify { suite, seeds, seed, jobs } => {
            let run = || verify(&suite, seeds, seed);
            match jobs {
                None => run(),
                Some(0) => Err(Failed(EXIT_USAGE, "error: --jobs must be at least 1\n".into())),
                Some(n) => rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Failed(EXIT_USAGE, format!("error: {e}\n")))?
                    .install(run),
            }
        }
    }
}

fn verify(suite: &str, instances: usize, seed: u64) -> Outcome {
    let mut reports: Vec<CheckReport> = Vec::new();
    let params = GenParams::default().with_seed(seed);
    let props: Vec<PropertyId> = match suite.to_ascii_lowercase().as_str() {
        "all" => PropertyId::ALL.to_vec(),
        "fixtures" => Vec::new(),
        other => vec![other.parse::<PropertyId>()?],
    };
    if matches!(suite.to_ascii_lowercase().as_str(), "all" | "fixtures") {
        reports.push(run_fixture_suite());
    }
    for p in props {
        reports.push(run_check(p, &params, instances)?);
    }
    let mut out = String::new();
    for r in &reports {
        let _ = writeln!(out, "{r}");
    }
    for r in reports.iter().filter(|r| !r.passed()) {
        for f in r.failures.iter().take(SHOWN_FAILURES) {
            let _ = writeln!(out, "\n{} failure: {}\n{}", r.property, f.detail, f.instance.trim_end());
        }
    }
    let code = if reports.iter().all(CheckReport::passed) { EXIT_HOLDS } else { EXIT_REFUTED };
    Ok((code, out))
}
