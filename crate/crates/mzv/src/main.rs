//! Command-line front end: every operation the library exposes, one
//! subcommand each, JSON on stdout. Exit codes: 0 success, 1 for
//! mathematical findings (refuted identity, sweep mismatch, failed
//! verification, no or non-unique solution), 2 for usage or internal
//! errors. Timing goes to stderr so written artifacts stay byte-stable.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mzv::cache::DiskCache;
use mzv::ffield::FieldCtx;
use mzv::prover::{prove_identity, ProofResult};
use mzv::recipes::{self, RecipeChoice};
use mzv::solver::{ShuffleSet, ShuffleSolver, SolveMode, SolveOptions};
use mzv::sweep::{run_sweep, SweepSpec};
use mzv::{MzvError, Result};

#[derive(Parser)]
#[command(
    name = "mzv",
    about = "Exact workbench for power sums and shuffle relations over F_q[t]",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve the shuffle expansion of Δ_d(a, b) and certify it.
    Solve(SolveArgs),
    /// Predict the expansion from a recipe, without solving.
    Predict(PredictArgs),
    /// Prove a relation for every d as a bivariate identity.
    Prove(ProveArgs),
    /// Check a relation numerically at d = 1..=d-checks.
    Verify(VerifyArgs),
    /// Compare recipe predictions against the solver over a grid.
    Sweep(SweepArgs),
    /// Run the built-in cross-check suites.
    Selftest(SelftestArgs),
    /// Inspect or clear the disk cache.
    Cache(CacheArgs),
}

#[derive(Args)]
struct FieldArgs {
    /// Prime characteristic p.
    #[arg(short)]
    p: u64,
    /// Extension degree n; q = p^n.
    #[arg(short, default_value_t = 1)]
    n: usize,
    /// Modulus for F_q over F_p: comma-separated coefficients,
    /// constant term first, degree-n term last.
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u64>>,
}

impl FieldArgs {
    fn ctx(&self) -> Result<FieldCtx> {
        match &self.modulus {
            Some(coeffs) => FieldCtx::with_modulus(self.p, self.n, coeffs.clone()),
            None => FieldCtx::new(self.p, self.n),
        }
    }
}

fn parse_recipe(s: &str) -> std::result::Result<RecipeChoice, String> {
    match s {
        "auto" => Ok(RecipeChoice::Auto),
        "main" => Ok(RecipeChoice::Main),
        "full" => Ok(RecipeChoice::Full),
        "q4" => Ok(RecipeChoice::Q4),
        "large-index" => Ok(RecipeChoice::LargeIndex),
        other => Err(format!(
            "unknown recipe '{other}' (expected auto|main|full|q4|large-index)"
        )),
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(short)]
    a: u64,
    #[arg(short)]
    b: u64,
    /// Numeric confirmation depth.
    #[arg(long, default_value_t = 3)]
    d_checks: u32,
    /// Keep only candidates with even second index; no fallback.
    #[arg(long)]
    restrict_even: bool,
    /// Cross-check route: solve per degree instead of bivariately.
    #[arg(long)]
    per_d: bool,
    /// Cache directory (default: $MZV_CACHE_DIR if set).
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct PredictArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(short)]
    a: u64,
    #[arg(short)]
    b: u64,
    #[arg(long, value_parser = parse_recipe, default_value = "auto")]
    recipe: RecipeChoice,
    /// Never consult the solver for initial values.
    #[arg(long)]
    no_solver_initials: bool,
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct ProveArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(short)]
    a: Option<u64>,
    #[arg(short)]
    b: Option<u64>,
    /// Relation JSON to prove; omitted means solve (a, b) first.
    #[arg(long)]
    relation: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    d_checks: u32,
    #[arg(long)]
    restrict_even: bool,
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(short)]
    a: Option<u64>,
    #[arg(short)]
    b: Option<u64>,
    /// Relation JSON to check.
    #[arg(long)]
    relation: PathBuf,
    #[arg(long, default_value_t = 3)]
    d_checks: u32,
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// First indices, comma separated.
    #[arg(long, value_delimiter = ',')]
    a_list: Vec<u64>,
    #[arg(long, default_value_t = 2)]
    b_min: u64,
    #[arg(long)]
    b_max: u64,
    #[arg(long, value_parser = parse_recipe, default_value = "auto")]
    recipe: RecipeChoice,
    #[arg(long, default_value_t = 3)]
    d_checks: u32,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Write the CSV here instead of stdout (summary JSON then goes
    /// to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit the full report as JSON instead of CSV.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct CacheArgs {
    #[command(subcommand)]
    action: CacheAction,
}

#[derive(Subcommand)]
enum CacheAction {
    /// Report the cache location and entry count.
    Stats {
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Remove every cache entry.
    Clear {
        #[arg(long)]
        cache: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                MzvError::NoSolution { .. } | MzvError::NonUniqueSolution { .. } => {
                    ExitCode::from(1)
                }
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Solve(args) => cmd_solve(args),
        Cmd::Predict(args) => cmd_predict(args),
        Cmd::Prove(args) => cmd_prove(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Sweep(args) => cmd_sweep(args),
        Cmd::Selftest(args) => cmd_selftest(args),
        Cmd::Cache(args) => cmd_cache(args),
    }
}

fn solver_for(field: &FieldArgs, cache: Option<&PathBuf>) -> Result<(FieldCtx, ShuffleSolver)> {
    let ctx = field.ctx()?;
    let disk = DiskCache::resolve(cache.map(|p| p.as_path()));
    let solver = ShuffleSolver::with_cache(&ctx, disk);
    Ok((ctx, solver))
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode> {
    let (_ctx, solver) = solver_for(&args.field, args.cache.as_ref())?;
    let opts = SolveOptions {
        d_checks: args.d_checks,
        restrict_even: args.restrict_even,
        mode: if args.per_d {
            SolveMode::PerD
        } else {
            SolveMode::Bivariate
        },
    };
    let set = solver.solve(args.a, args.b, &opts)?;
    println!("{}", serde_json::to_string(&set).expect("serializable"));
    Ok(ExitCode::SUCCESS)
}

fn cmd_predict(args: PredictArgs) -> Result<ExitCode> {
    let (_ctx, solver) = solver_for(&args.field, args.cache.as_ref())?;
    let pred = recipes::predict(
        &solver,
        args.a,
        args.b,
        args.recipe,
        !args.no_solver_initials,
    )?;
    println!("{}", serde_json::to_string(&pred).expect("serializable"));
    Ok(ExitCode::SUCCESS)
}

fn load_relation(
    path: &PathBuf,
    ctx: &FieldCtx,
    a: Option<u64>,
    b: Option<u64>,
) -> Result<ShuffleSet> {
    let text = std::fs::read_to_string(path)?;
    let set: ShuffleSet = serde_json::from_str(&text).map_err(|e| MzvError::Parse {
        detail: format!("relation file {}: {e}", path.display()),
    })?;
    if set.q != ctx.q() || set.p != ctx.p() || set.n != ctx.n() {
        return Err(MzvError::DegreeMismatch {
            detail: format!(
                "relation file is for q = {} (p = {}, n = {}), flags give q = {}",
                set.q,
                set.p,
                set.n,
                ctx.q()
            ),
        });
    }
    if a.is_some_and(|x| x != set.a) || b.is_some_and(|x| x != set.b) {
        return Err(MzvError::DegreeMismatch {
            detail: format!(
                "relation file is for (a, b) = ({}, {}), flags disagree",
                set.a, set.b
            ),
        });
    }
    Ok(set)
}

fn cmd_prove(args: ProveArgs) -> Result<ExitCode> {
    let (ctx, solver) = solver_for(&args.field, args.cache.as_ref())?;
    let set = match &args.relation {
        Some(path) => load_relation(path, &ctx, args.a, args.b)?,
        None => {
            let (a, b) = match (args.a, args.b) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    return Err(MzvError::InvalidIndex {
                        detail: "prove needs -a and -b, or --relation".into(),
                    })
                }
            };
            let opts = SolveOptions {
                d_checks: args.d_checks,
                restrict_even: args.restrict_even,
                ..SolveOptions::default()
            };
            solver.solve(a, b, &opts)?
        }
    };
    let result = prove_identity(solver.hg(), &set)?;
    println!("{}", result.to_json());
    Ok(match result {
        ProofResult::Refuted { .. } => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    })
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let (ctx, solver) = solver_for(&args.field, args.cache.as_ref())?;
    let set = load_relation(&args.relation, &ctx, args.a, args.b)?;
    let mut checked = Vec::new();
    let mut failing = None;
    for d in 1..=args.d_checks.max(1) {
        checked.push(d);
        if !solver.verify_at_d(&set, d)? {
            failing = Some(d);
            break;
        }
    }
    let verdict = serde_json::json!({
        "verified": failing.is_none(),
        "checked_d": checked,
        "first_failing_d": failing,
    });
    println!("{verdict}");
    Ok(if failing.is_none() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode> {
    if args.field.modulus.is_some() {
        return Err(MzvError::NotApplicable {
            detail: "sweep always uses the default modulus".into(),
        });
    }
    let spec = SweepSpec {
        fields: vec![(args.field.p, args.field.n)],
        a_values: args.a_list.clone(),
        b_min: args.b_min,
        b_max: args.b_max,
        recipe: args.recipe,
        d_checks: args.d_checks,
        jobs: args.jobs,
        cache_dir: args.cache.clone(),
    };
    let report = run_sweep(&spec)?;
    eprintln!(
        "swept {} cells in {} ms: {} matched, {} mismatched, {} partial, {} ambiguous, {} errors",
        report.summary.cells,
        report.wall_ms,
        report.summary.matched,
        report.summary.mismatched,
        report.summary.partial,
        report.summary.ambiguous,
        report.summary.errors
    );
    let body = if args.json {
        serde_json::to_string(&report.to_json()).expect("serializable")
    } else {
        report.to_csv()
    };
    match &args.out {
        Some(path) => {
            std::fs::write(path, &body)?;
            println!(
                "{}",
                serde_json::to_string(&report.summary).expect("serializable")
            );
        }
        None => print!("{body}"),
    }
    let clean = report.summary.mismatched == 0 && report.summary.errors == 0;
    Ok(if clean {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_selftest(args: SelftestArgs) -> Result<ExitCode> {
    let mut all_ok = true;
    let mut suite = |name: &str, body: &dyn Fn() -> Result<()>| {
        match body() {
            Ok(()) => println!("{name}: pass"),
            Err(e) => {
                all_ok = false;
                println!("{name}: FAIL ({e})");
            }
        }
    };

    suite("oracle-equivalence", &|| {
        for (p, n) in [(2u64, 1usize), (3, 1), (2, 2), (5, 1)] {
            let ctx = FieldCtx::new(p, n)?;
            let ps = mzv::powersums::CarlitzCache::new(&ctx);
            for d in 0..=2u32 {
                for k in 1..=12u64 {
                    let fast = ps.power_sum(d, k)?;
                    let slow = ps.power_sum_oracle(d, k)?;
                    if fast != slow {
                        return Err(MzvError::VerificationFailed {
                            detail: format!("S_{d}({k}) routes disagree over q = {}", ctx.q()),
                        });
                    }
                }
            }
        }
        Ok(())
    });

    suite("frobenius-scaling", &|| {
        for (p, n) in [(2u64, 1usize), (3, 1), (5, 1)] {
            let ctx = FieldCtx::new(p, n)?;
            let ps = mzv::powersums::CarlitzCache::new(&ctx);
            for d in 0..=2u32 {
                for s in 1..=8u64 {
                    let lhs = ps.power_sum(d, p * s)?;
                    let rhs = ps.power_sum(d, s)?.pow(&ctx, p);
                    if lhs != rhs {
                        return Err(MzvError::VerificationFailed {
                            detail: format!("S_{d}({}) != S_{d}({s})^{p} over q = {}", p * s, ctx.q()),
                        });
                    }
                }
            }
        }
        Ok(())
    });

    suite("reciprocal-ell", &|| {
        for (p, n) in [(2u64, 1usize), (3, 1), (2, 2), (5, 1)] {
            let ctx = FieldCtx::new(p, n)?;
            let ps = mzv::powersums::CarlitzCache::new(&ctx);
            for d in 1..=4u32 {
                let lhs = ps.power_sum(d, 1)?;
                let ell = mzv::RatFunc::from_poly(&ctx, ps.ell(d)?);
                if lhs.mul(&ctx, &ell) != mzv::RatFunc::one(&ctx) {
                    return Err(MzvError::VerificationFailed {
                        detail: format!("S_{d}(1)·ℓ_{d} != 1 over q = {}", ctx.q()),
                    });
                }
            }
        }
        Ok(())
    });

    suite("hg-evaluation", &|| {
        for (p, n) in [(2u64, 1usize), (3, 1)] {
            let ctx = FieldCtx::new(p, n)?;
            let q = ctx.q();
            let hg = mzv::hg::HgSession::new(&ctx);
            let ps = hg.powersums();
            for k in 1..=10u64 {
                let hk = hg.compute_h(k)?;
                for d in 0..=2u32 {
                    let lhs = hk.eval_at_t_qd(&ctx, d)?;
                    let ell_k = mzv::RatFunc::from_poly(&ctx, ps.ell(d)?.pow(&ctx, k));
                    let rhs = ell_k.mul(&ctx, &ps.power_sum(d, k)?);
                    if lhs != rhs {
                        return Err(MzvError::VerificationFailed {
                            detail: format!("H_{k} evaluation fails at d = {d} over q = {q}"),
                        });
                    }
                }
                if k % (q - 1) == 0 {
                    let gk = hg.compute_g(k)?;
                    for d in 0..=2u32 {
                        let lhs = gk.eval_at_t_qd(&ctx, d)?;
                        let ell_k = mzv::RatFunc::from_poly(&ctx, ps.ell(d)?.pow(&ctx, k));
                        let rhs = ell_k.mul(&ctx, &ps.power_sum_less(d, k)?);
                        if lhs != rhs {
                            return Err(MzvError::VerificationFailed {
                                detail: format!("G_{k} evaluation fails at d = {d} over q = {q}"),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    });

    suite("frozen-example", &|| {
        let ctx = FieldCtx::new(5, 1)?;
        let disk = DiskCache::resolve(args.cache.as_deref());
        let solver = ShuffleSolver::with_cache(&ctx, disk);
        let set = solver.solve(2, 30, &SolveOptions::default())?;
        let expect: Vec<(u64, u64)> =
            vec![(3, 4), (2, 8), (1, 12), (4, 20), (3, 24), (2, 28)];
        let got: Vec<(u64, u64)> = set.pairs.iter().map(|pr| (pr.c, pr.aj)).collect();
        if got != expect {
            return Err(MzvError::VerificationFailed {
                detail: format!("frozen set disagrees: {got:?}"),
            });
        }
        match prove_identity(solver.hg(), &set)? {
            ProofResult::Proved { .. } => Ok(()),
            other => Err(MzvError::VerificationFailed {
                detail: format!("frozen set not proved: {}", other.to_json()),
            }),
        }
    });

    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_cache(args: CacheArgs) -> Result<ExitCode> {
    let (action, dir) = match args.action {
        CacheAction::Stats { cache } => ("stats", cache),
        CacheAction::Clear { cache } => ("clear", cache),
    };
    let disk = DiskCache::resolve(dir.as_deref()).ok_or_else(|| MzvError::InvalidIndex {
        detail: "no cache directory: pass --cache or set MZV_CACHE_DIR".into(),
    })?;
    match action {
        "stats" => {
            let keys = disk.keys()?;
            println!(
                "{}",
                serde_json::json!({
                    "dir": disk.dir().display().to_string(),
                    "entries": keys.len(),
                })
            );
        }
        _ => {
            let removed = disk.clear()?;
            println!("{}", serde_json::json!({ "removed": removed }));
        }
    }
    Ok(ExitCode::SUCCESS)
}
