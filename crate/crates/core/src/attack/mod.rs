//! Automated attackers, a synthetic human, and the Monte Carlo harness that
//! measures their success rates against generated challenges.

mod chain;
mod traces;

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::challenge::{generate_challenge, Challenge, ChallengeKind, ChallengeSpec, GroundTruth};
use crate::error::{Error, Result};
use crate::grader::{grade, GradingPolicy, Trace};
use crate::rng::{derive_seed, SeedRng};

pub use chain::{color_cluster_chain, extract_chords, ComponentChord, MAX_LINK_GAP, MAX_TURN_DEG};
pub use traces::{random_curve_trace, straight_line_trace, synthetic_human};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum AttackerStrategy {
    /// Guesses a curve from the generator's own line distribution.
    RandomCurve,
    /// Guesses a straight stroke across the canvas.
    StraightLine,
    /// Color-separation attack on the image.
    ColorClusterChain,
    /// Noisy copy of the true line, standing in for a person.
    SyntheticHuman { jitter_sigma: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Attacker {
    pub name: String,
    pub strategy: AttackerStrategy,
}

impl Attacker {
    pub fn new(strategy: AttackerStrategy) -> Result<Self> {
        let name = match strategy {
            AttackerStrategy::RandomCurve => "random_curve".to_string(),
            AttackerStrategy::StraightLine => "straight_line".to_string(),
            AttackerStrategy::ColorClusterChain => "color_cluster_chain".to_string(),
            AttackerStrategy::SyntheticHuman { jitter_sigma } => {
                if !(jitter_sigma >= 0.0 && jitter_sigma.is_finite()) {
                    return Err(Error::invalid("jitter_sigma must be >= 0"));
                }
                format!("synthetic_human({jitter_sigma})")
            }
        };
        Ok(Self { name, strategy })
    }

    pub fn random_curve() -> Self {
        Self::new(AttackerStrategy::RandomCurve).expect("valid")
    }

    pub fn straight_line() -> Self {
        Self::new(AttackerStrategy::StraightLine).expect("valid")
    }

    pub fn color_cluster_chain() -> Self {
        Self::new(AttackerStrategy::ColorClusterChain).expect("valid")
    }

    pub fn synthetic_human(jitter_sigma: f64) -> Result<Self> {
        Self::new(AttackerStrategy::SyntheticHuman { jitter_sigma })
    }

    /// Produces one attempt. Only the synthetic human looks at the ground
    /// truth; the attackers see what a client sees. `None` is a give-up.
    pub fn attempt(
        &self,
        challenge: &Challenge,
        truth: &GroundTruth,
        spec: &ChallengeSpec,
        rng: &mut SeedRng,
    ) -> Option<Trace<f64>> {
        let (w, h) = (challenge.image.width(), challenge.image.height());
        match self.strategy {
            AttackerStrategy::RandomCurve => Some(random_curve_trace(rng, w, h, spec.waypoint_count)),
            AttackerStrategy::StraightLine => Some(straight_line_trace(rng, w, h)),
            AttackerStrategy::ColorClusterChain => color_cluster_chain(&challenge.image, &challenge.instruction),
            AttackerStrategy::SyntheticHuman { jitter_sigma } => Some(synthetic_human(truth, rng, jitter_sigma)),
        }
    }
}

/// Aggregate result of one attacker against one challenge kind.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub kind: ChallengeKind,
    pub attacker: String,
    pub trials: u64,
    pub successes: u64,
    pub success_rate: f64,
    /// Seconds spent on the attempts and their grading, excluding challenge
    /// generation.
    pub wall_time: f64,
    /// Mean time of one attacker attempt in milliseconds.
    pub attempt_ms: f64,
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// True when the deterministic fields agree (timings excluded).
    pub fn same_outcome(&self, other: &EvalReport) -> bool {
        self.kind == other.kind
            && self.attacker == other.attacker
            && self.trials == other.trials
            && self.successes == other.successes
            && self.success_rate == other.success_rate
    }
}

/// Aligned text table, one row per report.
pub fn format_table(reports: &[EvalReport]) -> String {
    let headers = ["kind", "attacker", "trials", "successes", "rate", "wall_s", "attempt_ms"];
    let rows: Vec<[String; 7]> = reports
        .iter()
        .map(|r| {
            [
                r.kind.to_string(),
                r.attacker.clone(),
                r.trials.to_string(),
                r.successes.to_string(),
                format!("{:.4}", r.success_rate),
                format!("{:.2}", r.wall_time),
                format!("{:.3}", r.attempt_ms),
            ]
        })
        .collect();
    let mut widths = headers.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &[String]| {
        let mut parts = Vec::with_capacity(cells.len());
        for (i, c) in cells.iter().enumerate() {
            if i < 2 {
                parts.push(format!("{c:<width$}", width = widths[i]));
            } else {
                parts.push(format!("{c:>width$}", width = widths[i]));
            }
        }
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(&headers.map(String::from));
    for row in &rows {
        line(row);
    }
    out
}

/// Seed of the `index`-th pool challenge under `master`.
pub fn pool_seed(master: u64, index: u64) -> u64 {
    derive_seed(master, "pool", index)
}

/// Generates `pool_size` challenges from seeds split off `spec.seed`, runs
/// `trials` attempts round-robin over them and grades each with the default
/// policy. Parallel and serial execution give the same counts.
pub fn evaluate(attacker: &Attacker, spec: &ChallengeSpec, trials: u64, pool_size: usize) -> Result<EvalReport> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    if pool_size == 0 {
        return Err(Error::invalid("pool size must be at least 1"));
    }
    let master = SeedRng::new(spec.seed);
    let pool: Vec<(Challenge, GroundTruth)> = (0..pool_size as u64)
        .into_par_iter()
        .map(|k| generate_challenge(&spec.with_seed(pool_seed(spec.seed, k))))
        .collect::<Result<_>>()?;

    let policy = GradingPolicy::default();
    let started = Instant::now();
    let (successes, attempt_ns): (u64, u128) = (0..trials)
        .into_par_iter()
        .map(|i| {
            let (challenge, truth) = &pool[(i % pool_size as u64) as usize];
            let mut rng = master.split_indexed("trial", i);
            let t0 = Instant::now();
            let trace = attacker.attempt(challenge, truth, spec, &mut rng);
            let spent = t0.elapsed().as_nanos();
            let pass = trace.is_some_and(|t| grade(&t, truth, &policy).pass);
            (u64::from(pass), spent)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let wall_time = started.elapsed().as_secs_f64();

    Ok(EvalReport {
        kind: spec.kind,
        attacker: attacker.name.clone(),
        trials,
        successes,
        success_rate: successes as f64 / trials as f64,
        wall_time,
        attempt_ms: attempt_ns as f64 / 1e6 / trials as f64,
    })
}
