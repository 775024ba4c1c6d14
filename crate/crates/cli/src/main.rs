//! `meanforge` — compute matrix means, apply positive unital maps, and run
//! the randomized operator-inequality verification suite.
//!
//! Exit codes: `0` every evaluated check passed; `1` at least one
//! theorem-status check failed; `2` usage or configuration error; `3` a
//! solver failed to converge and aborted the run.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use meanforge::checks::{evaluate_check_with_tol, CheckId, CheckParams, Constants};
use meanforge::hpd::HpdMatrix;
use meanforge::maps::{make_map, MapKind};
use meanforge::means::{karcher_mean, power_mean, two_mean, MatrixTuple, MeanKind, WeightVector};

use meanforge_cli::config::{resolve_tol, TrialConfig};
use meanforge_cli::gen::{map_by_name, random_hpd, random_weights, trial_rng, MAP_KIND_NAMES};
use meanforge_cli::io::{read_matrices, read_weights, MapJson, MatrixJson, WeightsJson};
use meanforge_cli::suite::{run_suite, SuiteSelection};

#[derive(Parser)]
#[command(
    name = "meanforge",
    version,
    about = "Matrix power and Karcher means, positive unital maps, and a \
             randomized verifier for the operator inequalities relating them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a weighted mean of a tuple of positive definite matrices.
    Mean(MeanArgs),
    /// Run randomized trials of the inequality catalog and write a report.
    Verify(VerifyArgs),
    /// Run the falsification probes and print the discrepancy notes.
    Ledger(LedgerArgs),
    /// Generate a random instance (matrices, weights, map) as JSON files.
    Gen(GenArgs),
    /// Print the constants appearing in the reverse inequalities.
    Constants(ConstantsArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            let no_convergence = err.chain().any(|cause| {
                matches!(
                    cause.downcast_ref::<meanforge::Error>(),
                    Some(meanforge::Error::NoConvergence { .. })
                )
            });
            if no_convergence {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Mean(args) => run_mean(args),
        Command::Verify(args) => run_verify(args),
        Command::Ledger(args) => run_ledger(args),
        Command::Gen(args) => run_gen(args),
        Command::Constants(args) => run_constants(args),
    }
}

fn write_text(out: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

// ---------------------------------------------------------------- mean ----

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MeanOp {
    /// Power mean P_t at the order given by --t.
    Power,
    /// Karcher mean (the t -> 0 limit of the power means).
    Karcher,
    /// Arithmetic mean; identical to the power mean at t = 1.
    Arith,
    /// Harmonic mean; identical to the power mean at t = -1.
    Harm,
}

#[derive(Args)]
struct MeanArgs {
    /// Which mean to compute.
    #[arg(value_enum)]
    kind: MeanOp,
    /// JSON file holding an array of matrices ({"dim", "re", "im"?}).
    #[arg(long)]
    matrices: PathBuf,
    /// JSON file holding {"w": [...]}; uniform weights when omitted.
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Power-mean order in [-1, 1] excluding 0; only valid with `power`.
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    /// Write the result here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct MeanOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<f64>,
    dim: usize,
    mean: MatrixJson,
    iterations: usize,
    final_step: f64,
    residual: f64,
    converged: bool,
}

fn run_mean(args: MeanArgs) -> anyhow::Result<ExitCode> {
    if args.t.is_some() && !matches!(args.kind, MeanOp::Power) {
        anyhow::bail!("--t applies only to the power mean");
    }
    let raw = read_matrices(&args.matrices)?;
    anyhow::ensure!(!raw.is_empty(), "the matrix file holds an empty array");
    let n = raw.len();
    let weights = match &args.weights {
        Some(path) => read_weights(path, n)?,
        None => WeightVector::uniform(n),
    };
    let matrices = raw
        .into_iter()
        .enumerate()
        .map(|(k, m)| HpdMatrix::new(m).with_context(|| format!("matrix {k}")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let tuple = MatrixTuple::new(matrices, weights)?;

    let (t, mean, report) = match args.kind {
        MeanOp::Power => {
            let t = args
                .t
                .ok_or_else(|| anyhow::anyhow!("the power mean needs --t"))?;
            let (x, r) = power_mean(&tuple, t)?;
            (Some(t), x, r)
        }
        MeanOp::Arith => {
            let (x, r) = power_mean(&tuple, 1.0)?;
            (Some(1.0), x, r)
        }
        MeanOp::Harm => {
            let (x, r) = power_mean(&tuple, -1.0)?;
            (Some(-1.0), x, r)
        }
        MeanOp::Karcher => {
            let (x, r) = karcher_mean(&tuple)?;
            (None, x, r)
        }
    };

    let output = MeanOutput {
        t,
        dim: mean.dim(),
        mean: MatrixJson::from_matrix(mean.matrix()),
        iterations: report.iterations,
        final_step: report.final_step,
        residual: report.residual,
        converged: report.converged,
    };
    let text = serde_json::to_string_pretty(&output)? + "\n";
    write_text(args.out.as_ref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

// -------------------------------------------------------------- verify ----

#[derive(Args)]
struct VerifyArgs {
    /// "all" or a single check id (e.g. interp_power).
    #[arg(long, default_value = "all")]
    suite: String,
    /// Matrix dimensions to cycle through (comma separated).
    #[arg(long, value_delimiter = ',')]
    dim: Vec<usize>,
    /// Tuple sizes to cycle through (comma separated).
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Lower spectral bound; with --M selects a single bounds pair instead
    /// of the default set {(1,2), (1,10), (0.1,1)}.
    #[arg(long, requires = "big_m")]
    m: Option<f64>,
    /// Upper spectral bound; requires --m.
    #[arg(long = "M", id = "big_m", requires = "m")]
    big_m: Option<f64>,
    /// Trials per bounds configuration.
    #[arg(long)]
    trials: Option<usize>,
    /// Base seed for the per-trial random streams.
    #[arg(long)]
    seed: Option<u64>,
    /// Power-mean orders to sweep (comma separated, in [-1,1] excluding 0).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    t: Vec<f64>,
    /// Outer exponents to sweep (comma separated, positive).
    #[arg(long, value_delimiter = ',')]
    p: Vec<f64>,
    /// Norms to sweep: spectral, trace, frobenius, kyfan:k (comma separated).
    #[arg(long, value_delimiter = ',')]
    norm: Vec<String>,
    /// Relative tolerance; overrides the MEANFORGE_TOL environment variable
    /// and the default 1e-8.
    #[arg(long)]
    tol: Option<f64>,
    /// Force the endpoint eigenvalues m and M into every generated spectrum.
    #[arg(long)]
    tight: bool,
    /// Aggregate report file; per-trial lines go next to it with a .jsonl
    /// extension. Standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run_verify(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    let selection = if args.suite == "all" {
        SuiteSelection::All
    } else {
        SuiteSelection::One(args.suite.parse::<CheckId>()?)
    };
    let tol = resolve_tol(args.tol)?;

    let mut configs = match (args.m, args.big_m) {
        (Some(m), Some(big_m)) => vec![TrialConfig::standard((m, big_m))],
        _ => TrialConfig::default_set(),
    };
    for cfg in &mut configs {
        if !args.dim.is_empty() {
            cfg.dims = args.dim.clone();
        }
        if !args.n.is_empty() {
            cfg.tuple_sizes = args.n.clone();
        }
        if let Some(trials) = args.trials {
            cfg.trials = trials;
        }
        if let Some(seed) = args.seed {
            cfg.seed = seed;
        }
        if !args.t.is_empty() {
            cfg.t_grid = args.t.clone();
        }
        if !args.p.is_empty() {
            cfg.p_grid = args.p.clone();
        }
        if !args.norm.is_empty() {
            cfg.norms = args
                .norm
                .iter()
                .map(|s| s.parse())
                .collect::<meanforge::Result<Vec<_>>>()?;
        }
        cfg.tol_rel = tol;
        cfg.tight = args.tight;
        cfg.validate()?;
    }

    let mut jsonl_file = match &args.out {
        Some(path) => {
            let sidecar = path.with_extension("jsonl");
            Some(
                fs::File::create(&sidecar)
                    .with_context(|| format!("creating {}", sidecar.display()))?,
            )
        }
        None => None,
    };
    let report = run_suite(
        &configs,
        selection,
        jsonl_file.as_mut().map(|f| f as &mut dyn Write),
    )?;

    let text = serde_json::to_string_pretty(&report)? + "\n";
    write_text(args.out.as_ref(), &text)?;

    eprintln!(
        "suite {}: {} trials, {} evaluations ({} passes, {} failures, {} skips) in {} ms",
        report.suite,
        report.totals.trials,
        report.totals.evaluations,
        report.totals.passes,
        report.totals.failures,
        report.totals.skips,
        report.wall_ms
    );
    let failures = report.theorem_failures();
    if failures > 0 {
        eprintln!("{failures} theorem-status failure(s); fingerprints are in the report");
        Ok(ExitCode::from(1))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

// -------------------------------------------------------------- ledger ----

#[derive(Args)]
struct LedgerArgs {
    /// Seed for the random-pair probe.
    #[arg(long, default_value_t = 2024)]
    seed: u64,
}

fn run_ledger(args: LedgerArgs) -> anyhow::Result<ExitCode> {
    let tol = resolve_tol(None)?;
    let mut out = String::new();

    out.push_str("== falsification probes ==\n\n");

    // Scalar probe: equal-weight pair (1, 9).
    let tuple = MatrixTuple::new(
        vec![HpdMatrix::diag(&[1.0])?, HpdMatrix::diag(&[9.0])?],
        WeightVector::uniform(2),
    )?;
    let map = make_map(MapKind::Identity(1))?;
    out.push_str("ledger_fact_p30 on the scalar pair (1, 9), weights (1/2, 1/2):\n");
    for t in [0.5, 1.0] {
        let verdict = evaluate_check_with_tol(
            CheckId::LedgerFactP30,
            &tuple,
            &map,
            &CheckParams::new().with_t(t),
            tol,
        )?;
        let (power, _) = power_mean(&tuple, t)?;
        let geo = two_mean(
            &tuple.matrices()[0],
            &tuple.matrices()[1],
            0.5,
            MeanKind::Geometric,
        )?;
        out.push_str(&format!(
            "  t = {t:<4} power mean {:.6}  geometric mean {:.6}  Thompson distance {:.6}\n",
            power.matrix()[(0, 0)].re,
            geo.matrix()[(0, 0)].re,
            verdict.slack
        ));
    }
    out.push_str(&format!(
        "  at t = 1 the sides are 5 and 3, distance log(5/3) = {:.6}: the substituted\n  \
         identity is false, so the probe never gates the exit code.\n",
        (5.0f64 / 3.0).ln()
    ));

    // The reverse inequality that motivated the probe still holds on the
    // same pair.
    let mut min_rel = f64::INFINITY;
    let mut all_hold = true;
    let p_grid = [2.0, 2.5, 3.0, 4.0];
    for p in p_grid {
        let verdict = evaluate_check_with_tol(
            CheckId::GeoReverseP,
            &tuple,
            &map,
            &CheckParams::new().with_p(p),
            tol,
        )?;
        all_hold &= verdict.holds;
        min_rel = min_rel.min(verdict.relative_slack);
    }
    out.push_str(&format!(
        "  geo_reverse_p on the same pair at p in {{2, 2.5, 3, 4}}: {} \
         (smallest relative slack {:.3e})\n\n",
        if all_hold { "all hold" } else { "FAILED" },
        min_rel
    ));

    // Random-pair probe: the identity gap survives away from scalars.
    let mut rng = trial_rng(args.seed, 0);
    let a = random_hpd(2, 1.0, 10.0, true, &mut rng)?;
    let b = random_hpd(2, 1.0, 10.0, true, &mut rng)?;
    let pair = MatrixTuple::with_bounds(vec![a, b], WeightVector::uniform(2), 1.0, 10.0)?;
    let map2 = make_map(MapKind::Identity(2))?;
    let mut max_distance = 0.0f64;
    for t in [0.5, 1.0] {
        let verdict = evaluate_check_with_tol(
            CheckId::LedgerFactP30,
            &pair,
            &map2,
            &CheckParams::new().with_t(t),
            tol,
        )?;
        max_distance = max_distance.max(verdict.slack);
    }
    out.push_str(&format!(
        "ledger_fact_p30 on a random 2x2 pair with spectra in [1, 10] (seed {}):\n  \
         max Thompson distance over t in {{0.5, 1}}: {max_distance:.6}\n\n",
        args.seed
    ));

    out.push_str("== discrepancy notes ==\n\n");
    let notes = [
        "The anticommutator checks read the bound with the mean taken of the mapped \
         tuple. Reading them with the map applied to the mean of the original tuple \
         instead makes the bound false: on the pair diag(1,2), diag(2,1) with m = 1, \
         M = 2 and the depolarizing map at t = p = 1, the anticommutator's largest \
         eigenvalue reaches 8/3 while the bound is 2 * alpha = 9/4.",
        "Two distinct sharpened constants are easy to conflate: the order-comparison \
         constant uses (m+M)^2 / (4^(2/p) mM) inside its maximum while the \
         anticommutator constant uses (m+M)^2 / (4^(1/p) mM). The constants \
         subcommand prints both so the exponent bookkeeping stays visible.",
        "The eigenvalue-shrinking implication 'B <= alpha A implies lambda_k(B) <= \
         alpha lambda_k(A)' is certified only for alpha >= 1. For alpha < 1 it \
         already fails for scalars (b <= alpha a forces b < a, but the implication \
         direction reverses), so the suite sweeps alpha over the grid points >= 1 \
         and records the rest as skips.",
        "ledger_fact_p30 never counts as a failure. It measures the Thompson \
         distance between the equal-weight power mean and the geometric mean of the \
         first two tuple members, a substitution step that is not an identity \
         (5 versus 3 on the scalar pair (1, 9) at t = 1) even though the reverse \
         inequality certified by geo_reverse_p holds on the same instances.",
        "The two-sided chain arith_below_* / chain_13 is certified for every \
         admissible order t in [-1, 1] excluding 0, including negative t, by \
         routing its second link through the harmonic mean rather than only \
         through positive orders.",
    ];
    for (k, note) in notes.iter().enumerate() {
        out.push_str(&format!("{}. {}\n\n", k + 1, note));
    }

    print!("{out}");
    Ok(ExitCode::SUCCESS)
}

// ----------------------------------------------------------------- gen ----

#[derive(Args)]
struct GenArgs {
    /// Matrix dimension.
    #[arg(long, default_value_t = 3)]
    dim: usize,
    /// Tuple size.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Lower spectral bound.
    #[arg(long, default_value_t = 1.0)]
    m: f64,
    /// Upper spectral bound.
    #[arg(long = "M", id = "big_m", default_value_t = 10.0)]
    big_m: f64,
    /// Seed for the instance.
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// Force the endpoint eigenvalues m and M into every spectrum.
    #[arg(long)]
    tight: bool,
    /// Map kind: identity, unitary, pinching, depolarizing, compression,
    /// convex, or random.
    #[arg(long, default_value = "random")]
    map_kind: String,
    /// Directory receiving matrices.json, weights.json, and map.json.
    #[arg(long)]
    out: PathBuf,
}

fn run_gen(args: GenArgs) -> anyhow::Result<ExitCode> {
    anyhow::ensure!(args.dim >= 1, "--dim must be at least 1");
    anyhow::ensure!(args.n >= 1, "--n must be at least 1");
    anyhow::ensure!(
        args.m.is_finite() && args.big_m.is_finite() && args.m > 0.0 && args.m <= args.big_m,
        "bounds must satisfy 0 < m <= M, got m = {}, M = {}",
        args.m,
        args.big_m
    );
    anyhow::ensure!(
        MAP_KIND_NAMES.contains(&args.map_kind.as_str()),
        "unknown map kind {:?} (expected one of {MAP_KIND_NAMES:?})",
        args.map_kind
    );

    let mut rng = trial_rng(args.seed, 0);
    let weights = random_weights(args.n, &mut rng)?;
    let mut matrices = Vec::with_capacity(args.n);
    for _ in 0..args.n {
        matrices.push(random_hpd(args.dim, args.m, args.big_m, args.tight, &mut rng)?);
    }
    let map = map_by_name(&args.map_kind, args.dim, &mut rng)?;

    fs::create_dir_all(&args.out)
        .with_context(|| format!("creating directory {}", args.out.display()))?;
    let matrices_json: Vec<MatrixJson> =
        matrices.iter().map(|a| MatrixJson::from_matrix(a.matrix())).collect();
    let weights_json = WeightsJson { w: weights.as_slice().to_vec() };
    let map_json = MapJson::from_map(&map);

    for (name, text) in [
        ("matrices.json", serde_json::to_string_pretty(&matrices_json)? + "\n"),
        ("weights.json", serde_json::to_string_pretty(&weights_json)? + "\n"),
        ("map.json", serde_json::to_string_pretty(&map_json)? + "\n"),
    ] {
        let path = args.out.join(name);
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

// ----------------------------------------------------------- constants ----

#[derive(Args)]
struct ConstantsArgs {
    /// Lower spectral bound.
    #[arg(long)]
    m: f64,
    /// Upper spectral bound.
    #[arg(long = "M", id = "big_m")]
    big_m: f64,
    /// Exponent entering the p-dependent constants.
    #[arg(long, default_value_t = 2.0)]
    p: f64,
}

fn run_constants(args: ConstantsArgs) -> anyhow::Result<ExitCode> {
    let c = Constants::new(args.m, args.big_m, args.p)?;
    println!("m = {}", c.m);
    println!("M = {}", c.big_m);
    println!("p = {}", c.p);
    println!("K = {}", c.kantorovich);
    println!("alpha_order = {}", c.alpha_order);
    println!("alpha_anticommutator = {}", c.alpha_anticommutator);
    println!("reverse_power_factor = {}", c.reverse_power_factor);
    println!("refined_reverse_factor = {}", c.refined_reverse_factor);
    println!("geo_reverse_base = {}", c.geo_reverse_base);
    Ok(ExitCode::SUCCESS)
}
