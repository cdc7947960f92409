use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde::Serialize;

use dgalois::fixtures::{reproduce, FixtureOptions, FIXTURE_IDS};
use dgalois::roots::{Kind, RootSystem};
use dgalois::system::{assemble_group_equation, ActionKind, ActionSpec, Factor, SystemRecord};
use dgalois::verify::{check_system, mutate, Mutation, Status, VerificationBundle};
use dgalois::weyl::{
    enumerate_cycle_types, find_strictly_transitive, weyl_action, WeylReport, MEM_CAP_ENV,
};
use dgalois::Error;

/// Exact construction and verification of linear differential systems with
/// prescribed semisimple Galois groups.
#[derive(Parser)]
#[command(name = "dgalois", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Weyl group action on a minuscule weight orbit.
    Weyl(WeylArgs),
    /// Assemble an equivariant system for a product of classical groups.
    Build(BuildArgs),
    /// Re-check every hypothesis recorded in a system file.
    Verify(VerifyArgs),
    /// Reproduce a worked example or table.
    Reproduce(ReproduceArgs),
}

#[derive(Args)]
struct WeylArgs {
    /// Root system type: A, B, C, D, E.
    #[arg(long = "type")]
    kind: String,
    #[arg(long)]
    rank: usize,
    /// Highest weight in fundamental coordinates, e.g. 0,0,1. Defaults to the
    /// first minuscule weight.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    weight: Option<Vec<i64>>,
    /// List every cycle type with a witness word.
    #[arg(long)]
    enumerate: bool,
    /// Search for minimal strictly transitive sets of cycle types.
    #[arg(long)]
    find_transitive: bool,
    /// Largest set size tried by --find-transitive.
    #[arg(long)]
    max_set: Option<usize>,
    /// Cap on stored group elements (default from the memory budget in
    /// DGALOIS_ENUM_MAX_MIB, 1024 MiB if unset).
    #[arg(long)]
    cap: Option<usize>,
    /// Print JSON instead of a summary.
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BuildArgs {
    /// Comma-separated factors: sl<n>, sp<2l>, so<2l>, or A1, C2, D4.
    #[arg(long, value_delimiter = ',')]
    group: Vec<String>,
    /// trivial, conjugation or transpose-inverse.
    #[arg(long, default_value = "trivial")]
    action: String,
    /// Order n of the action, which is the degree of K = F(x, x^{1/n}).
    /// Defaults to 1 for trivial and 2 for transpose-inverse.
    #[arg(long)]
    order: Option<u32>,
    /// Marked points x_i, rationals with rational n-th roots, consumed in plan order.
    #[arg(long, value_delimiter = ',')]
    points: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// System JSON written by `build`.
    file: PathBuf,
    /// Write the verification bundle here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Apply a mutation before verifying: rationalize-eigenvalue,
    /// zero-nilpotent, shift-point-into-bad-set, flip-action-sign.
    #[arg(long)]
    mutate: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ReproduceArgs {
    /// sl2-sqrtx, sl2-toric, e6-weyl, e7-weyl, b-ell-table or section5.
    #[arg(long, visible_alias = "example")]
    fixture: String,
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// For sl2-sqrtx: also write the system record here.
    #[arg(long)]
    system_out: Option<PathBuf>,
}

enum Failure {
    Lib(Error),
    Io(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CliResult = Result<(), Failure>;

fn to_json<T: Serialize>(v: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(v).map(|s| s + "\n").map_err(|e| Failure::Io(e.to_string()))
}

fn emit(text: &str, out: Option<&Path>) -> CliResult {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_kind(kind: &str, rank: usize) -> Result<Kind, Error> {
    match kind.trim().to_ascii_uppercase().as_str() {
        "E" => match rank {
            6 => Ok(Kind::E6),
            7 => Ok(Kind::E7),
            _ => Err(Error::unsupported(format!("E{rank}"))),
        },
        other => other.parse(),
    }
}

fn run_weyl(a: WeylArgs) -> CliResult {
    let kind = parse_kind(&a.kind, a.rank)?;
    let rs = RootSystem::new(kind, a.rank)?;
    let highest = match a.weight {
        Some(w) => w,
        None => rs.minuscule_weights().into_iter().next().ok_or_else(|| Error::invalid("no minuscule weight"))?,
    };
    let cap = a.cap;
    let (_, orbit, gens) = weyl_action(kind, a.rank, &highest)?;
    let (enumeration, sets, proven) = if a.find_transitive {
        let s = find_strictly_transitive(kind, a.rank, &highest, a.max_set, cap)?;
        let proven = s.sets.is_empty() && s.exhaustive;
        (s.enumeration, Some(s.sets), Some(proven))
    } else {
        (enumerate_cycle_types(&gens, cap)?, None, None)
    };
    let report = WeylReport {
        kind,
        rank: a.rank,
        highest_weight: highest,
        orbit_size: orbit.len(),
        orbit,
        group_order: enumeration.order,
        cycle_types: if a.enumerate || a.find_transitive { enumeration.types.clone() } else { Vec::new() },
        strictly_transitive_sets: sets.clone(),
        nonexistence_proven: proven,
    };
    if a.json {
        return emit(&to_json(&report)?, a.out.as_deref());
    }
    let mut s = format!(
        "{}{} weight {:?}: orbit {}, group order {}, {} cycle types\n",
        kind, a.rank, report.highest_weight, report.orbit_size, report.group_order, enumeration.types.len()
    );
    if a.enumerate {
        for t in &enumeration.types {
            s += &format!("  {}  word {:?}\n", t.parts, t.witness_word);
        }
    }
    if let Some(sets) = &sets {
        if sets.is_empty() {
            let why = if proven == Some(true) { "none exist" } else { "none found within the size bound" };
            s += &format!("strictly transitive sets: {why}\n");
        }
        for set in sets {
            let parts: Vec<String> = set.iter().map(|&i| enumeration.types[i].parts.to_string()).collect();
            s += &format!("  {{{}}}\n", parts.join(", "));
        }
    }
    emit(&s, a.out.as_deref())
}

fn run_build(a: BuildArgs) -> CliResult {
    if a.group.is_empty() {
        return Err(Error::invalid("--group is required").into());
    }
    let factors: Vec<Factor> = a.group.iter().map(|g| g.parse()).collect::<Result<_, _>>()?;
    let kind: ActionKind = a.action.parse()?;
    let order = match (a.order, kind) {
        (Some(o), _) => o,
        (None, ActionKind::Trivial) => 1,
        (None, ActionKind::TransposeInverse) => 2,
        (None, ActionKind::Conjugation) => return Err(Error::invalid("conjugation needs --order").into()),
    };
    let xs: Vec<BigRational> = a
        .points
        .iter()
        .map(|p| p.trim().parse::<BigRational>().map_err(|_| Error::invalid(format!("bad point {p:?}"))))
        .collect::<Result<_, _>>()?;
    let mut rec = assemble_group_equation(&factors, &ActionSpec { kind, order }, &xs)?;
    let bundle = check_system(&rec)?;
    rec.verification = Some(serde_json::to_value(&bundle).map_err(|e| Failure::Io(e.to_string()))?);
    emit(&to_json(&rec)?, a.out.as_deref())?;
    print_summary(&bundle, a.out.is_none());
    if bundle.passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn print_summary(b: &VerificationBundle, to_stderr: bool) {
    let mut s = String::new();
    for c in &b.checks {
        let tag = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        s += &format!("{tag}  {}\n", c.id);
    }
    s += &format!("{}\n", if b.passed { "all checks passed" } else { "verification FAILED" });
    if to_stderr {
        eprint!("{s}");
    } else {
        print!("{s}");
    }
}

fn run_verify(a: VerifyArgs) -> CliResult {
    let text = fs::read_to_string(&a.file).map_err(|e| Failure::Io(format!("{}: {e}", a.file.display())))?;
    let mut rec: SystemRecord =
        serde_json::from_str(&text).map_err(|e| Error::invalid(format!("{}: {e}", a.file.display())))?;
    if let Some(m) = &a.mutate {
        let m: Mutation = m.parse()?;
        rec = mutate(&rec, m)?.0;
    }
    let bundle = check_system(&rec)?;
    if let Some(p) = &a.report {
        emit(&to_json(&bundle)?, Some(p))?;
    }
    if a.json {
        emit(&to_json(&bundle)?, None)?;
    } else {
        print_summary(&bundle, false);
    }
    if bundle.passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn run_reproduce(a: ReproduceArgs) -> CliResult {
    if !FIXTURE_IDS.contains(&a.fixture.as_str()) {
        return Err(Error::invalid(format!("unknown fixture {:?}; known: {}", a.fixture, FIXTURE_IDS.join(", "))).into());
    }
    let log = reproduce(&a.fixture, FixtureOptions { cap: a.cap })?;
    if let Some(p) = &a.system_out {
        if a.fixture != "sl2-sqrtx" {
            return Err(Error::invalid("--system-out is only available for sl2-sqrtx").into());
        }
        emit(&to_json(&dgalois::system::sl2_sqrtx::record()?)?, Some(p))?;
    }
    if a.json {
        emit(&to_json(&log)?, a.out.as_deref())?;
    } else {
        let mut s = format!("fixture {}\n", log.id);
        for c in &log.checks {
            let tag = if c.status == Status::Pass { "PASS" } else { "FAIL" };
            s += &format!("{tag}  {}\n", c.id);
        }
        s += &format!("{}\n", if log.passed { "all checks passed" } else { "some checks FAILED" });
        emit(&s, a.out.as_deref())?;
    }
    if log.passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.cmd {
        Cmd::Weyl(a) => run_weyl(a),
        Cmd::Build(a) => run_build(a),
        Cmd::Verify(a) => run_verify(a),
        Cmd::Reproduce(a) => run_reproduce(a),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::ResourceCap(_) => {
                    eprintln!("hint: raise --cap or {MEM_CAP_ENV}");
                    ExitCode::from(3)
                }
                Error::Internal(_) => ExitCode::from(4),
                _ => ExitCode::from(2),
            }
        }
    }
}
