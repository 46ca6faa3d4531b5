use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use linecaptcha::attack::format_table;
use linecaptcha::{evaluate, generate_challenge, grade, Attacker, ChallengeKind, ChallengeSpec, GroundTruth, Trace};
use linecaptcha_server::ServiceConfig;

#[derive(Parser)]
#[command(name = "linecaptcha", version, about = "Line CAPTCHA generator, grader, attack harness and server")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one challenge image and its ground truth.
    Gen {
        #[arg(long)]
        kind: ChallengeKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        truth: PathBuf,
    },
    /// Grade a trace against ground truth. Exit status 0 on pass, 1 on fail.
    Grade {
        #[arg(long)]
        truth: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        /// Override the tolerance band, in pixels.
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Run an attacker against a pool of challenges and report its success rate.
    Attack {
        #[arg(long, value_enum)]
        attacker: AttackerArg,
        /// Pointer noise for the synthetic human, in pixels.
        #[arg(long, default_value_t = 2.0)]
        jitter: f64,
        /// Repeatable; all kinds when omitted.
        #[arg(long)]
        kind: Vec<ChallengeKind>,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 500)]
        pool: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print one JSON report per line instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AttackerArg {
    RandomCurve,
    StraightLine,
    ColorClusterChain,
    SyntheticHuman,
}

fn read(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn run_gen(kind: ChallengeKind, seed: u64, out: PathBuf, truth_path: PathBuf) -> Result<ExitCode, String> {
    let (challenge, truth) = generate_challenge(&ChallengeSpec::new(kind, seed)).map_err(|e| e.to_string())?;
    let png = challenge.image.to_png().map_err(|e| e.to_string())?;
    std::fs::write(&out, png).map_err(|e| format!("{}: {e}", out.display()))?;
    std::fs::write(&truth_path, truth.to_json() + "\n").map_err(|e| format!("{}: {e}", truth_path.display()))?;
    println!("{}", serde_json::json!({ "id": challenge.id, "instruction": challenge.instruction }));
    Ok(ExitCode::SUCCESS)
}

fn run_grade(truth: PathBuf, trace: PathBuf, epsilon: Option<f64>) -> Result<ExitCode, String> {
    let truth = GroundTruth::from_json(&read(&truth)?).map_err(|e| e.to_string())?;
    let trace: Trace = serde_json::from_str(&read(&trace)?).map_err(|e| format!("trace: {e}"))?;
    let mut policy = linecaptcha::GradingPolicy::default();
    if let Some(eps) = epsilon {
        policy = policy.with_epsilon(eps);
        policy.validate().map_err(|e| e.to_string())?;
    }
    let verdict = grade(&trace, &truth, &policy);
    println!("{}", serde_json::to_string(&verdict).map_err(|e| e.to_string())?);
    Ok(if verdict.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[allow(clippy::too_many_arguments)]
fn run_attack(
    attacker: AttackerArg,
    jitter: f64,
    kinds: Vec<ChallengeKind>,
    trials: u64,
    pool: usize,
    seed: u64,
    json: bool,
) -> Result<ExitCode, String> {
    let attacker = match attacker {
        AttackerArg::RandomCurve => Attacker::random_curve(),
        AttackerArg::StraightLine => Attacker::straight_line(),
        AttackerArg::ColorClusterChain => Attacker::color_cluster_chain(),
        AttackerArg::SyntheticHuman => Attacker::synthetic_human(jitter).map_err(|e| e.to_string())?,
    };
    let kinds = if kinds.is_empty() { ChallengeKind::ALL.to_vec() } else { kinds };
    let mut reports = Vec::new();
    for kind in kinds {
        let report = evaluate(&attacker, &ChallengeSpec::new(kind, seed), trials, pool).map_err(|e| e.to_string())?;
        if json {
            println!("{}", serde_json::to_string(&report).map_err(|e| e.to_string())?);
        }
        reports.push(report);
    }
    if !json {
        print!("{}", format_table(&reports));
    }
    Ok(ExitCode::SUCCESS)
}

fn run_serve(config: Option<PathBuf>) -> Result<ExitCode, String> {
    let config = ServiceConfig::load(config.as_deref()).map_err(|e| e.to_string())?;
    let rt = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    rt.block_on(linecaptcha_server::serve(config)).map_err(|e| e.to_string())?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .with_writer(std::io::stderr)
        .init();

    let result = match Cli::parse().command {
        Command::Gen { kind, seed, out, truth } => run_gen(kind, seed, out, truth),
        Command::Grade { truth, trace, epsilon } => run_grade(truth, trace, epsilon),
        Command::Attack { attacker, jitter, kind, trials, pool, seed, json } => {
            run_attack(attacker, jitter, kind, trials, pool, seed, json)
        }
        Command::Serve { config } => run_serve(config),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}
