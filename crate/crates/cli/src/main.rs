//! Command-line front end: batch verification with reproducible reports.
//!
//! Every command reads its inputs from flags (optionally seeded by a JSON
//! config file; explicit flags always win), runs an exact computation in the
//! core crate, and emits exactly one report to stdout or `--out`. Reports
//! are byte-stable for identical inputs. The only environment influence is
//! `RAZAK_FORGE_THREADS` (worker count for enumeration, default available
//! parallelism), and worker counts never change report bytes.
//!
//! Exit codes: 0 when the command succeeded and anything it verified held;
//! 1 when a verification failed or a tower verdict stayed uncertified under
//! `--require-certified`; 2 for usage errors, bad input files, unwritable
//! output, or searches refused by the work limit.

mod config;
mod report;

use std::collections::BTreeMap;
use std::num::NonZeroUsize;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use razak_forge_core::arith::parse_rational;
use razak_forge_core::blocks::derive_unital_obstruction;
use razak_forge_core::rank::{perforation_rank_demo, Grid, RankFunction};
use razak_forge_core::solve::{
    enumerate_corrected, enumerate_unital, family, verify_family_symbolic, EnumerateOptions,
    SearchBounds,
};
use razak_forge_core::tower::{
    build, perforation_report, search_schedule, telescope, DPolicy, PerforationVerdict,
    ReportOptions, Schedule, Stage, StageParams, UPolicy,
};

use config::FileConfig;
use report::{
    render_demo, EnumerateReport, FamilyReport, Format, IdentityStatus, ObstructionReport,
    SolutionSet, TowerBuildReport, TowerReportDoc, TowerSearchReport,
};

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "razak-forge",
    version,
    about = "Exact admissibility, obstruction, and perforation certificates \
             for diagonal maps between generalized Razak blocks"
)]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// JSON file with flag defaults; explicit flags always win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the closed-form solution family, symbolically and by sweep.
    VerifyFamily {
        /// Sweep radius N: verify every instance with parameters in [1, N]^3.
        #[arg(long)]
        sweep: Option<u64>,
    },
    /// List every admissibility solution inside a bounding box.
    Enumerate {
        /// Which equation system to solve.
        #[arg(long, value_enum)]
        system: System,
        /// Box `k=2,l=4,m=10,s=2`, optionally capping p, r, q, a0, a1, b0, b1.
        #[arg(long)]
        bounds: String,
        /// Refuse searches whose projected step count exceeds this.
        #[arg(long)]
        work_limit: Option<u64>,
    },
    /// Certify that every unital solution has b0 = 0 and a0 = m.
    CertifyObstruction {
        /// Box for the enumeration check; default k=6,l=6,m=60,s=5.
        #[arg(long)]
        bounds: Option<String>,
        /// Refuse searches whose projected step count exceeds this.
        #[arg(long)]
        work_limit: Option<u64>,
    },
    /// Build towers and evaluate the perforation product criterion.
    #[command(subcommand)]
    Tower(TowerCommand),
    /// Rank-model comparisons on a stage cube.
    #[command(subcommand)]
    Rank(RankCommand),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum System {
    Unital,
    Corrected,
}

#[derive(Subcommand)]
enum TowerCommand {
    /// Print the stage table of a tower.
    Build(TowerArgs),
    /// Build a tower and evaluate the product criterion on it.
    Report(TowerReportArgs),
    /// Evaluate several stage rules and pick the best certified one.
    Search(TowerSearchArgs),
}

#[derive(Args)]
struct TowerArgs {
    /// First block parameter.
    #[arg(long)]
    k1: Option<u64>,

    /// Rule for the stage parameter u: `u=k`, `u=2k`, or a constant `u=1`.
    #[arg(long)]
    policy: Option<String>,

    /// Stage parameter s, constant across stages.
    #[arg(long)]
    s: Option<u64>,

    /// Explicit per-stage `s:u` pairs, e.g. `1:1,1:2,2:1`; replaces --policy.
    #[arg(long, conflicts_with_all = ["policy", "s"])]
    explicit: Option<String>,

    /// Number of stages to build.
    #[arg(long)]
    stages: Option<usize>,

    /// Which coordinate projections count toward the stage count d.
    #[arg(long, value_enum)]
    d_policy: Option<DPolicyArg>,

    /// Regroup the built tower by composing consecutive connecting maps in
    /// groups of this size; must divide the stage count.
    #[arg(long)]
    telescope: Option<usize>,
}

#[derive(Args)]
struct TowerReportArgs {
    #[command(flatten)]
    tower: TowerArgs,

    /// Deficit ratio threshold as `num/den`, strictly between 0 and 1.
    #[arg(long)]
    rho: Option<String>,

    /// Exit 1 unless the verdict is certified positive.
    #[arg(long)]
    require_certified: bool,
}

#[derive(Args)]
struct TowerSearchArgs {
    /// First block parameter.
    #[arg(long)]
    k1: Option<u64>,

    /// Number of stages to build per candidate.
    #[arg(long)]
    stages: Option<usize>,

    /// Candidate rule `u=<rule>,s=<n>`; repeat the flag for more candidates.
    /// Defaults to comparing `u=k,s=1`, `u=1,s=1`, and `u=2k,s=1`.
    #[arg(long = "candidate")]
    candidates: Vec<String>,

    /// Which coordinate projections count toward the stage count d.
    #[arg(long, value_enum)]
    d_policy: Option<DPolicyArg>,

    /// Deficit ratio threshold as `num/den`, strictly between 0 and 1.
    #[arg(long)]
    rho: Option<String>,

    /// Exit 1 unless some candidate certifies.
    #[arg(long)]
    require_certified: bool,
}

#[derive(Subcommand)]
enum RankCommand {
    /// Compare two rank witnesses at weights (k+1, k) and (1, n).
    Demo(RankDemoArgs),
}

#[derive(Args)]
struct RankDemoArgs {
    /// First block parameter of the tower providing the stage.
    #[arg(long)]
    k1: Option<u64>,

    /// Rule for the stage parameter u, as in `tower build`.
    #[arg(long)]
    policy: Option<String>,

    /// Stage parameter s, constant across stages.
    #[arg(long)]
    s: Option<u64>,

    /// Stage whose connecting map the demo uses (1-based).
    #[arg(long)]
    stage: Option<usize>,

    /// Witness grid resolution (odd, at least 3).
    #[arg(long)]
    resolution: Option<u64>,

    /// Witness grid dimension.
    #[arg(long)]
    dim: Option<usize>,

    /// Weight of the necessary comparison (k+1)*rank(a) <= k*rank(b);
    /// defaults to the stage's k.
    #[arg(long)]
    k: Option<u64>,

    /// Copies on the right of the direct comparison rank(a) <= n*rank(b).
    #[arg(long)]
    n: Option<u64>,

    /// JSON file with the left witness: {"grid": {"dimension": D,
    /// "resolution": G}, "values": [...], "fiber_bound": B}.
    #[arg(long, conflicts_with_all = ["a_const", "b_const"], requires = "b")]
    a: Option<PathBuf>,

    /// JSON file with the right witness.
    #[arg(long, requires = "a")]
    b: Option<PathBuf>,

    /// Constant left witness value; default is the comparison weight k.
    #[arg(long)]
    a_const: Option<u64>,

    /// Constant right witness value; default k+1.
    #[arg(long)]
    b_const: Option<u64>,

    /// Fiber bound for constant witnesses; must be a multiple of k+1 for
    /// the pushforward check. Default: the smallest such multiple that
    /// dominates both constants.
    #[arg(long)]
    fiber_bound: Option<u64>,

    /// Also push both witnesses through the stage map and compare there.
    #[arg(long)]
    check_pushforward: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DPolicyArg {
    /// Only unflipped coordinate projections.
    CoordinateOnly,
    /// Unflipped and flipped projections together.
    IncludeFlipped,
}

impl From<DPolicyArg> for DPolicy {
    fn from(arg: DPolicyArg) -> DPolicy {
        match arg {
            DPolicyArg::CoordinateOnly => DPolicy::CoordinateOnly,
            DPolicyArg::IncludeFlipped => DPolicy::IncludeFlipped,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

/// Per-invocation context shared by the command handlers.
struct Ctx {
    format: Format,
    out: Option<PathBuf>,
    cfg: FileConfig,
}

impl Ctx {
    fn emit(&self, text: String) -> Result<(), String> {
        report::emit(&text, self.out.as_deref())
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    let cfg = config::load(cli.config.as_deref())?;
    let ctx = Ctx {
        format: cli.format.or(cfg.format).unwrap_or(Format::Text),
        out: cli.out.or_else(|| cfg.out.clone()),
        cfg,
    };
    match cli.command {
        Command::VerifyFamily { sweep } => run_verify_family(sweep, &ctx),
        Command::Enumerate {
            system,
            bounds,
            work_limit,
        } => run_enumerate(system, &bounds, work_limit, &ctx),
        Command::CertifyObstruction { bounds, work_limit } => {
            run_certify_obstruction(bounds.as_deref(), work_limit, &ctx)
        }
        Command::Tower(TowerCommand::Build(args)) => run_tower_build(&args, &ctx),
        Command::Tower(TowerCommand::Report(args)) => run_tower_report(&args, &ctx),
        Command::Tower(TowerCommand::Search(args)) => run_tower_search(&args, &ctx),
        Command::Rank(RankCommand::Demo(args)) => run_rank_demo(&args, &ctx),
    }
}

fn run_verify_family(sweep: Option<u64>, ctx: &Ctx) -> Result<u8, String> {
    let sweep = sweep.or(ctx.cfg.sweep).unwrap_or(20);
    if sweep == 0 {
        return Err("--sweep must be at least 1".to_string());
    }
    let certificate = verify_family_symbolic();
    let identities: Vec<IdentityStatus> = certificate
        .identities()
        .iter()
        .map(|(name, zero)| IdentityStatus {
            name: (*name).to_string(),
            zero: *zero,
        })
        .collect();

    let total = sweep
        .checked_pow(3)
        .ok_or_else(|| format!("sweep {sweep} cubed overflows"))?;
    let mut pass: u64 = 0;
    for s in 1..=sweep {
        for k in 1..=sweep {
            for u in 1..=sweep {
                let inst = family(s, k, u)
                    .map_err(|e| format!("family({s}, {k}, {u}) failed to build: {e}"))?;
                if inst.verify().ok {
                    pass += 1;
                }
            }
        }
    }

    let certified = pass == total && identities.iter().all(|i| i.zero);
    let doc = FamilyReport {
        sweep,
        instances_total: total,
        instances_pass: pass,
        identities,
        certified,
    };
    ctx.emit(doc.render(ctx.format))?;
    Ok(if doc.certified { 0 } else { EXIT_FAILED })
}

fn run_enumerate(
    system: System,
    bounds: &str,
    work_limit: Option<u64>,
    ctx: &Ctx,
) -> Result<u8, String> {
    let bounds = parse_bounds(bounds)?;
    let opts = enumerate_options(work_limit, ctx)?;
    let solutions = match system {
        System::Unital => {
            SolutionSet::Unital(enumerate_unital(&bounds, &opts).map_err(|e| e.to_string())?)
        }
        System::Corrected => {
            SolutionSet::Corrected(enumerate_corrected(&bounds, &opts).map_err(|e| e.to_string())?)
        }
    };
    let count = match &solutions {
        SolutionSet::Unital(list) => list.len(),
        SolutionSet::Corrected(list) => list.len(),
    };
    let doc = EnumerateReport {
        bounds,
        count,
        solutions,
    };
    ctx.emit(doc.render(ctx.format))?;
    Ok(0)
}

fn run_certify_obstruction(
    bounds: Option<&str>,
    work_limit: Option<u64>,
    ctx: &Ctx,
) -> Result<u8, String> {
    let bounds = match bounds {
        Some(text) => parse_bounds(text)?,
        None => SearchBounds::grid(6, 6, 60, 5),
    };
    let certificate = derive_unital_obstruction();
    let identities: Vec<IdentityStatus> = certificate
        .identities()
        .iter()
        .map(|identity| IdentityStatus {
            name: identity.name.clone(),
            zero: identity.is_zero(),
        })
        .collect();
    let symbolic_certified = certificate.is_certified();

    let opts = enumerate_options(work_limit, ctx)?;
    let solutions = enumerate_unital(&bounds, &opts).map_err(|e| e.to_string())?;
    let violations: Vec<_> = solutions
        .iter()
        .filter(|inst| inst.b0 != 0 || inst.a0 != inst.m)
        .copied()
        .collect();

    let collapse_holds = violations.is_empty();
    let doc = ObstructionReport {
        bounds,
        identities,
        symbolic_certified,
        solutions_checked: solutions.len(),
        collapse_holds,
        violations,
        certified: symbolic_certified && collapse_holds,
    };
    ctx.emit(doc.render(ctx.format))?;
    Ok(if doc.certified { 0 } else { EXIT_FAILED })
}

fn run_tower_build(args: &TowerArgs, ctx: &Ctx) -> Result<u8, String> {
    let (schedule, stages, group) = resolve_schedule(args, &ctx.cfg)?;
    let stages = build_stages(&schedule, stages, group)?;
    let doc = TowerBuildReport {
        schedule,
        telescope: group,
        stages,
    };
    ctx.emit(doc.render(ctx.format))?;
    Ok(0)
}

fn run_tower_report(args: &TowerReportArgs, ctx: &Ctx) -> Result<u8, String> {
    let (schedule, stage_count, group) = resolve_schedule(&args.tower, &ctx.cfg)?;
    let stages = build_stages(&schedule, stage_count, group)?;
    let options = report_options(args.rho.as_deref(), ctx)?;
    let perforation = perforation_report(&stages, &options).map_err(|e| e.to_string())?;
    let certified = perforation.verdict == PerforationVerdict::CertifiedPositive;
    let doc = TowerReportDoc {
        schedule,
        telescope: group,
        stages,
        report: perforation,
    };
    ctx.emit(doc.render(ctx.format))?;
    let require = args.require_certified || ctx.cfg.require_certified.unwrap_or(false);
    Ok(if require && !certified { EXIT_FAILED } else { 0 })
}

fn run_tower_search(args: &TowerSearchArgs, ctx: &Ctx) -> Result<u8, String> {
    let k1 = args.k1.unwrap_or(2);
    let stages = args.stages.or(ctx.cfg.stages).unwrap_or(10);
    let candidates = if args.candidates.is_empty() {
        vec![
            StageParams::Policy {
                u: UPolicy::TimesK(1),
                s: 1,
            },
            StageParams::Policy {
                u: UPolicy::Const(1),
                s: 1,
            },
            StageParams::Policy {
                u: UPolicy::TimesK(2),
                s: 1,
            },
        ]
    } else {
        args.candidates
            .iter()
            .map(|text| parse_candidate(text))
            .collect::<Result<Vec<_>, _>>()?
    };
    let d_policy = args
        .d_policy
        .map(DPolicy::from)
        .unwrap_or(DPolicy::IncludeFlipped);
    let options = report_options(args.rho.as_deref(), ctx)?;
    let outcome =
        search_schedule(k1, stages, &candidates, d_policy, &options).map_err(|e| e.to_string())?;
    let found = outcome.best.is_some();
    let doc = TowerSearchReport {
        k1,
        stages,
        outcome,
    };
    ctx.emit(doc.render(ctx.format))?;
    let require = args.require_certified || ctx.cfg.require_certified.unwrap_or(false);
    Ok(if require && !found { EXIT_FAILED } else { 0 })
}

fn run_rank_demo(args: &RankDemoArgs, ctx: &Ctx) -> Result<u8, String> {
    let stage_index = args.stage.unwrap_or(1);
    if stage_index == 0 {
        return Err("--stage is 1-based".to_string());
    }
    let schedule = Schedule {
        k1: args.k1.unwrap_or(2),
        params: StageParams::Policy {
            u: parse_u_policy(args.policy.as_deref().unwrap_or("u=k"))?,
            s: args.s.unwrap_or(1),
        },
        d_policy: DPolicy::IncludeFlipped,
    };
    let tower = build(&schedule, stage_index).map_err(|e| e.to_string())?;
    let stage = tower.last().expect("at least one stage was built");
    let stage_k = u64::try_from(&stage.map.k)
        .map_err(|_| "the stage parameter k exceeds machine words".to_string())?;
    let k = args.k.unwrap_or(stage_k);
    let n = args.n.unwrap_or(1);

    let (a, b) = load_witnesses(args, k)?;
    let demo =
        perforation_rank_demo(stage, k, n, &a, &b, args.check_pushforward).map_err(|e| {
            format!("rank demo failed: {e}")
        })?;
    ctx.emit(render_demo(&demo, ctx.format))?;
    Ok(if demo.weighted.holds { 0 } else { EXIT_FAILED })
}

/// Builds the two witnesses, either from JSON files or as constants on a
/// fresh grid.
fn load_witnesses(args: &RankDemoArgs, k: u64) -> Result<(RankFunction, RankFunction), String> {
    let read = |path: &PathBuf| -> Result<RankFunction, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read witness {}: {e}", path.display()))?;
        serde_json::from_str(&text)
            .map_err(|e| format!("invalid witness {}: {e}", path.display()))
    };
    match (&args.a, &args.b) {
        (Some(a), Some(b)) => Ok((read(a)?, read(b)?)),
        (None, None) => {
            let grid = Grid::new(args.dim.unwrap_or(1), args.resolution.unwrap_or(3))
                .map_err(|e| e.to_string())?;
            let a_value = args.a_const.unwrap_or(k);
            let b_value = args.b_const.unwrap_or(k + 1);
            let fiber_bound = match args.fiber_bound {
                Some(bound) => bound,
                None => {
                    // Smallest multiple of k+1 covering both witness values.
                    let top = a_value.max(b_value).max(1);
                    top.div_ceil(k + 1) * (k + 1)
                }
            };
            let a = RankFunction::constant(grid, a_value, fiber_bound).map_err(|e| e.to_string())?;
            let b = RankFunction::constant(grid, b_value, fiber_bound).map_err(|e| e.to_string())?;
            Ok((a, b))
        }
        // clap already rejects mixing --a with the constant flags; this
        // remains reachable by giving exactly one of --a/--b.
        _ => Err("witness files come in pairs: give both --a and --b".to_string()),
    }
}

/// Resolves shared tower flags into a schedule, stage count, and telescope
/// group size.
fn resolve_schedule(
    args: &TowerArgs,
    cfg: &FileConfig,
) -> Result<(Schedule, usize, Option<usize>), String> {
    let stages = args.stages.or(cfg.stages).unwrap_or(10);
    if stages == 0 {
        return Err("--stages must be at least 1".to_string());
    }
    let params = match &args.explicit {
        Some(text) => StageParams::Explicit(parse_explicit(text)?),
        None => StageParams::Policy {
            u: parse_u_policy(args.policy.as_deref().unwrap_or("u=k"))?,
            s: args.s.unwrap_or(1),
        },
    };
    let schedule = Schedule {
        k1: args.k1.unwrap_or(2),
        params,
        d_policy: args
            .d_policy
            .map(DPolicy::from)
            .unwrap_or(DPolicy::IncludeFlipped),
    };
    Ok((schedule, stages, args.telescope))
}

fn build_stages(
    schedule: &Schedule,
    stages: usize,
    group: Option<usize>,
) -> Result<Vec<Stage>, String> {
    let tower = build(schedule, stages).map_err(|e| e.to_string())?;
    match group {
        Some(group) => telescope(&tower, group).map_err(|e| e.to_string()),
        None => Ok(tower),
    }
}

fn report_options(rho: Option<&str>, ctx: &Ctx) -> Result<ReportOptions, String> {
    let text = match (rho, &ctx.cfg.rho) {
        (Some(flag), _) => Some(flag.to_string()),
        (None, Some(cfg)) => Some(cfg.clone()),
        (None, None) => None,
    };
    match text {
        None => Ok(ReportOptions::default()),
        Some(text) => Ok(ReportOptions {
            rho: parse_rational(&text).map_err(|e| format!("invalid --rho: {e}"))?,
        }),
    }
}

fn enumerate_options(work_limit: Option<u64>, ctx: &Ctx) -> Result<EnumerateOptions, String> {
    let mut opts = EnumerateOptions::default();
    if let Some(limit) = work_limit.or(ctx.cfg.work_limit) {
        opts.work_limit = limit;
    }
    opts.threads = thread_count()?;
    Ok(opts)
}

/// Worker count: `RAZAK_FORGE_THREADS` when set, available parallelism
/// otherwise. This never changes report bytes, only wall time.
fn thread_count() -> Result<usize, String> {
    match std::env::var("RAZAK_FORGE_THREADS") {
        Ok(text) => text
            .trim()
            .parse::<usize>()
            .map_err(|_| format!("RAZAK_FORGE_THREADS must be an unsigned integer, got `{text}`")),
        Err(std::env::VarError::NotPresent) => Ok(std::thread::available_parallelism()
            .map(NonZeroUsize::get)
            .unwrap_or(1)),
        Err(err) => Err(format!("RAZAK_FORGE_THREADS: {err}")),
    }
}

/// Parses `k=6,l=6,m=60,s=5` with optional caps on the derived counts.
fn parse_bounds(text: &str) -> Result<SearchBounds, String> {
    let mut values: BTreeMap<&'static str, u64> = BTreeMap::new();
    for part in text.split(',') {
        let part = part.trim();
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("bound `{part}` is not of the form key=value"))?;
        let value: u64 = value
            .trim()
            .parse()
            .map_err(|_| format!("bound `{part}` needs an unsigned integer value"))?;
        let canonical = match key.trim() {
            "k" => "k",
            "l" | "ell" => "l",
            "m" => "m",
            "s" => "s",
            "p" => "p",
            "r" => "r",
            "q" => "q",
            "a0" => "a0",
            "a1" => "a1",
            "b0" => "b0",
            "b1" => "b1",
            other => {
                return Err(format!(
                    "unknown bound key `{other}` (known: k, l, m, s, p, r, q, a0, a1, b0, b1)"
                ))
            }
        };
        if values.insert(canonical, value).is_some() {
            return Err(format!("duplicate bound key `{canonical}`"));
        }
    }
    let grid = |key: &str| -> Result<u64, String> {
        values
            .get(key)
            .copied()
            .ok_or_else(|| format!("bounds must set `{key}` (for example {key}=6)"))
    };
    Ok(SearchBounds {
        k: grid("k")?,
        ell: grid("l")?,
        m: grid("m")?,
        s: grid("s")?,
        p: values.get("p").copied(),
        r: values.get("r").copied(),
        q: values.get("q").copied(),
        a0: values.get("a0").copied(),
        a1: values.get("a1").copied(),
        b0: values.get("b0").copied(),
        b1: values.get("b1").copied(),
    })
}

/// Parses a u rule: `u=k`, `u=2k`, `u=3`, with or without the `u=` prefix.
fn parse_u_policy(raw: &str) -> Result<UPolicy, String> {
    let text = raw.trim();
    let text = text.strip_prefix("u=").unwrap_or(text).trim();
    let policy = if let Some(scale) = text.strip_suffix('k') {
        let scale = scale.trim();
        let c: u64 = if scale.is_empty() {
            1
        } else {
            scale
                .parse()
                .map_err(|_| format!("policy `{raw}`: the k coefficient must be an integer"))?
        };
        UPolicy::TimesK(c)
    } else {
        let c: u64 = text
            .parse()
            .map_err(|_| format!("policy `{raw}` is neither a constant nor a multiple of k"))?;
        UPolicy::Const(c)
    };
    match policy {
        UPolicy::Const(0) | UPolicy::TimesK(0) => {
            Err(format!("policy `{raw}` would set u = 0; u must be positive"))
        }
        _ => Ok(policy),
    }
}

/// Parses explicit stage parameters `s:u,s:u,...`.
fn parse_explicit(text: &str) -> Result<Vec<(u64, u64)>, String> {
    text.split(',')
        .map(|pair| {
            let pair = pair.trim();
            let (s, u) = pair
                .split_once(':')
                .ok_or_else(|| format!("stage `{pair}` is not of the form s:u"))?;
            let parse = |part: &str, name: &str| -> Result<u64, String> {
                let value: u64 = part
                    .trim()
                    .parse()
                    .map_err(|_| format!("stage `{pair}`: {name} must be an unsigned integer"))?;
                if value == 0 {
                    return Err(format!("stage `{pair}`: {name} must be positive"));
                }
                Ok(value)
            };
            Ok((parse(s, "s")?, parse(u, "u")?))
        })
        .collect()
}

/// Parses a search candidate `u=<rule>` or `u=<rule>,s=<n>`.
fn parse_candidate(text: &str) -> Result<StageParams, String> {
    let mut u: Option<UPolicy> = None;
    let mut s: Option<u64> = None;
    for part in text.split(',') {
        let part = part.trim();
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("candidate part `{part}` is not of the form key=value"))?;
        match key.trim() {
            "u" => {
                if u.replace(parse_u_policy(value)?).is_some() {
                    return Err(format!("candidate `{text}` sets u twice"));
                }
            }
            "s" => {
                let value: u64 = value
                    .trim()
                    .parse()
                    .map_err(|_| format!("candidate `{text}`: s must be an unsigned integer"))?;
                if value == 0 {
                    return Err(format!("candidate `{text}`: s must be positive"));
                }
                if s.replace(value).is_some() {
                    return Err(format!("candidate `{text}` sets s twice"));
                }
            }
            other => return Err(format!("candidate `{text}`: unknown key `{other}`")),
        }
    }
    Ok(StageParams::Policy {
        u: u.ok_or_else(|| format!("candidate `{text}` must set u"))?,
        s: s.unwrap_or(1),
    })
}
