use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mubpp_core::bounds::{build_report_for, BasisSubset, BoundReport};
use mubpp_core::protocol::Session;
use mubpp_core::{verify_mub, AttackSpec, Error, MubSet, SessionConfig, SessionStats};

const SEED_ENV: &str = "MUBPP_SEED";
const FIG1_DIMS: [usize; 6] = [3, 5, 7, 9, 11, 13];

#[derive(Parser)]
#[command(name = "mubpp", version, about = "Mutually unbiased bases and ping-pong protocol security bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the complete MUB set for dimension N and write it as JSON.
    GenMub {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a MUB set JSON file for mutual unbiasedness.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = VerifyFormat::Text)]
        format: VerifyFormat,
    },
    /// Exact non-detection maxima and analytic bounds, one row per N.
    BoundsTable(TableArgs),
    /// Bounds table over N = 3,5,7,9,11,13 with the complete set.
    Fig1 {
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a seeded protocol session.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum AttackArg {
    None,
    Optimal,
}

#[derive(Args)]
struct TableArgs {
    /// Comma-separated dimensions.
    #[arg(long, value_delimiter = ',', required = true)]
    n_list: Vec<usize>,
    /// "all", "no-computational" or an explicit list such as "0;1".
    #[arg(long, default_value = "all")]
    bases: BasisSubset,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Session configuration JSON; excludes the per-field flags below.
    #[arg(long, conflicts_with_all = ["n", "bases", "weights", "attack", "cycles", "control_fraction", "alpha"])]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    bases: Option<BasisSubset>,
    #[arg(long, value_delimiter = ',')]
    weights: Vec<f64>,
    #[arg(long, value_enum)]
    attack: Option<AttackArg>,
    #[arg(long, default_value_t = 10_000)]
    cycles: u64,
    #[arg(long, default_value_t = 0.5)]
    control_fraction: f64,
    /// Pin the control-mode input state.
    #[arg(long)]
    alpha: Option<usize>,
    /// Overrides the config file and MUBPP_SEED.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    /// Bad input or configuration; exit code 2.
    Usage(anyhow::Error),
    /// A check ran and did not pass; exit code 1.
    Check(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonConvergence { .. } | Error::Ambiguous { .. } | Error::Structure(_) => Failure::Check(e.into()),
            _ => Failure::Usage(e.into()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

fn write_output(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(Failure::Check),
        None => io::stdout().write_all(text.as_bytes()).context("writing stdout").map_err(Failure::Check),
    }
}

fn gen_mub(n: usize, out: Option<&Path>) -> CmdResult {
    let set = MubSet::for_dimension(n)?;
    let mut json = set.to_json()?;
    json.push('\n');
    write_output(out, &json)
}

fn verify(file: &Path, tol: f64, format: VerifyFormat) -> CmdResult {
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display())).map_err(usage)?;
    let set = MubSet::from_json(&text).with_context(|| format!("parsing {}", file.display())).map_err(usage)?;
    let report = verify_mub(&set, tol);
    let line = match format {
        VerifyFormat::Json => serde_json::to_string_pretty(&report).map_err(usage)? + "\n",
        VerifyFormat::Text => {
            let (m, k, n, l) = report.worst;
            format!(
                "{} dim={} bases={} max_deviation={:.3e} at (m={m}, k={k}, n={n}, l={l}) tol={:.1e}\n",
                if report.passed { "PASS" } else { "FAIL" },
                report.dim,
                report.bases,
                report.max_deviation,
                report.tol
            )
        }
    };
    write_output(None, &line)?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Check(anyhow!("max deviation {:.3e} exceeds tolerance {:.1e}", report.max_deviation, tol)))
    }
}

fn bounds_table(dims: &[usize], subset: &BasisSubset, format: Format, out: Option<&Path>) -> CmdResult {
    // everything is validated before the first row is computed
    let mut sets = Vec::with_capacity(dims.len());
    for &n in dims {
        let set = MubSet::for_dimension(n)?;
        subset.indices(&set).with_context(|| format!("basis subset {subset} for N={n}")).map_err(usage)?;
        sets.push(set);
    }
    let mut rows: Vec<(BoundReport, Vec<String>)> = Vec::with_capacity(sets.len());
    for set in &sets {
        let report = build_report_for(set, subset)?;
        let violations = report.ordering_violations();
        rows.push((report, violations));
    }
    let failed = rows.iter().filter(|(_, v)| !v.is_empty()).count();
    let text = match format {
        Format::Csv => {
            let mut s = format!("{},status\n", BoundReport::CSV_HEADER);
            for (r, v) in &rows {
                let status = if v.is_empty() { "ok".to_string() } else { format!("FAIL: {}", v.join("; ")) };
                s.push_str(&format!("{},{status}\n", r.csv_row()));
            }
            s
        }
        Format::Json => {
            let values = rows
                .iter()
                .map(|(r, v)| {
                    let mut value = serde_json::to_value(r)?;
                    value["violations"] = serde_json::json!(v);
                    Ok(value)
                })
                .collect::<Result<Vec<_>, serde_json::Error>>()
                .map_err(usage)?;
            serde_json::to_string_pretty(&values).map_err(usage)? + "\n"
        }
    };
    write_output(out, &text)?;
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Check(anyhow!("{failed} row(s) violate the bound ordering")))
    }
}

fn env_seed() -> Result<Option<u64>, Failure> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s.trim().parse().map(Some).map_err(|e| usage(anyhow!("{SEED_ENV}={s:?}: {e}"))),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(usage(anyhow!("{SEED_ENV}: {e}"))),
    }
}

fn session_config(args: &SimulateArgs) -> Result<SessionConfig, Failure> {
    let env = env_seed()?;
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(usage)?;
        let raw: serde_json::Value =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display())).map_err(usage)?;
        let has_seed = raw.get("seed").is_some();
        let mut cfg: SessionConfig =
            serde_json::from_value(raw).with_context(|| format!("invalid config {}", path.display())).map_err(usage)?;
        cfg.seed = args.seed.or(has_seed.then_some(cfg.seed)).or(env).unwrap_or(0);
        return Ok(cfg);
    }
    let n = args.n.ok_or_else(|| usage(anyhow!("simulate needs --config or --n")))?;
    let bases = match &args.bases {
        None | Some(BasisSubset::All) => Vec::new(),
        Some(subset) => subset.indices(&MubSet::for_dimension(n)?)?,
    };
    let attack = match args.attack {
        None | Some(AttackArg::None) => AttackSpec::None,
        Some(AttackArg::Optimal) => AttackSpec::Optimal,
    };
    Ok(SessionConfig {
        n,
        cycles: args.cycles,
        control_fraction: args.control_fraction,
        bases,
        weights: args.weights.clone(),
        attack,
        seed: args.seed.or(env).unwrap_or(0),
        alpha: args.alpha,
    })
}

fn simulate(args: &SimulateArgs) -> CmdResult {
    let config = session_config(args)?;
    let resolved = config.resolve()?;
    let mut session = Session::new(&resolved.set, &resolved.cfg, &resolved.policy)?;
    session.fixed_alpha = config.alpha;
    let stats = session.run(config.cycles, config.control_fraction, config.seed)?;
    let text = match args.format {
        Format::Csv => format!("{}\n{}\n", SessionStats::CSV_HEADER, stats.csv_row()),
        Format::Json => {
            let analytic = resolved.policy.expected_nondetection(&resolved.set, &resolved.cfg, config.alpha)?;
            let mut value = serde_json::to_value(&stats).map_err(usage)?;
            value["analytic_nondetection"] = serde_json::json!(analytic);
            serde_json::to_string_pretty(&value).map_err(usage)? + "\n"
        }
    };
    write_output(args.out.as_deref(), &text)
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::GenMub { n, out } => gen_mub(n, out.as_deref()),
        Command::Verify { file, tol, format } => verify(&file, tol, format),
        Command::BoundsTable(t) => bounds_table(&t.n_list, &t.bases, t.format, t.out.as_deref()),
        Command::Fig1 { format, out } => bounds_table(&FIG1_DIMS, &BasisSubset::All, format, out.as_deref()),
        Command::Simulate(args) => simulate(&args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
