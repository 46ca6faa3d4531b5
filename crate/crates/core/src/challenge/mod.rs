//! Seed-driven challenge generation: background, line, distraction, and the
//! ground truth kept for grading.

mod background;
mod line;
mod segment;
mod spec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Polyline;
use crate::raster::{apply_blur, hsv_to_rgb, render_chords, render_line, Chord, RasterImage, Rgb};
use crate::rng::{derive_seed, SeedRng};

pub use background::{generate_background, paint_background, plan_background, random_color, BackgroundPlan, Shape};
pub use line::{generate_line, sample_waypoints, self_intersects, MAX_LINE_ATTEMPTS};
pub use segment::{
    generate_distractors, segment_line, ArcInterval, Distractors, Segmentation, DISTRACTOR_ATTEMPTS,
    DISTRACTOR_CLEARANCE, PALETTE, SEGMENTED_BASE,
};
pub use spec::{ChallengeKind, ChallengeSpec, CountRange, LengthRange, MARGIN};

/// What the solver is asked to do.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum InstructionHint {
    TraceLine,
    /// Trace the line drawn in this color.
    TraceColor { rgb: Rgb },
}

/// Secret data needed to grade a challenge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub challenge_id: String,
    pub kind: ChallengeKind,
    pub reference: Polyline<f64>,
    pub target_color: Option<Rgb>,
    pub image_width: u32,
    pub image_height: u32,
    pub seed: u64,
    /// Unix milliseconds; zero until the challenge is issued.
    pub created_at: u64,
}

impl GroundTruth {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ground truth serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::invalid(format!("ground truth json: {e}")))
    }
}

/// The public half of a generated challenge.
#[derive(Clone, Debug, PartialEq)]
pub struct Challenge {
    pub id: String,
    pub image: RasterImage,
    pub instruction: InstructionHint,
    /// Unix milliseconds; zero until the challenge is issued.
    pub expires_at: u64,
}

/// Intermediate geometry of a generated challenge, for tests and analysis.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Layers {
    /// Every drawn line (only one except for the multi-line kind).
    pub lines: Vec<Polyline<f64>>,
    pub line_colors: Vec<Rgb>,
    /// Kept chords of the segmented kinds, with their colors.
    pub kept: Vec<Chord>,
    pub kept_colors: Vec<Rgb>,
    pub distractors: Vec<Chord>,
    pub distractors_requested: usize,
}

/// Full output of [`generate_challenge_detailed`].
#[derive(Clone, Debug)]
pub struct Generated {
    pub challenge: Challenge,
    pub truth: GroundTruth,
    pub layers: Layers,
}

/// Deterministic id derived from kind and seed. Issuing services replace
/// it with a fresh random token.
pub fn seed_challenge_id(kind: ChallengeKind, seed: u64) -> String {
    format!(
        "{:016x}{:016x}",
        derive_seed(seed, kind.as_str(), 0),
        derive_seed(seed, kind.as_str(), 1)
    )
}

/// Generates a challenge and its ground truth. A pure function of `spec`.
pub fn generate_challenge(spec: &ChallengeSpec) -> Result<(Challenge, GroundTruth)> {
    let g = generate_challenge_detailed(spec)?;
    Ok((g.challenge, g.truth))
}

/// Hues spaced evenly around the wheel from a random start, each jittered by
/// at most a sixth of the spacing.
fn line_hues(rng: &mut SeedRng, count: usize) -> Vec<f64> {
    let step = 360.0 / count as f64;
    let base = rng.uniform(0.0, 360.0);
    (0..count)
        .map(|k| (base + k as f64 * step + rng.uniform(-1.0, 1.0) * step / 6.0).rem_euclid(360.0))
        .collect()
}

pub fn generate_challenge_detailed(spec: &ChallengeSpec) -> Result<Generated> {
    spec.validate()?;
    let root = SeedRng::new(spec.seed);
    let mut layers = Layers::default();
    let (image, reference, instruction, target_color) = match spec.kind {
        ChallengeKind::BlurredLine => {
            let bg = generate_background(&mut root.split("background"), spec);
            let (_, line) = generate_line(&mut root.split("line"), spec)?;
            let mut colors = root.split("line-color");
            let color = hsv_to_rgb(
                colors.uniform(0.0, 360.0),
                colors.uniform(0.7, 1.0),
                colors.uniform(0.15, 0.45),
            );
            let drawn = render_line(&bg, &line, spec.stroke_width, color);
            let image = apply_blur(&drawn, spec.blur_sigma)?;
            layers.lines.push(line.clone());
            layers.line_colors.push(color);
            (image, line, InstructionHint::TraceLine, None)
        }
        ChallengeKind::SegmentedLine | ChallengeKind::MultiColorSegmentedLine => {
            let (_, line) = generate_line(&mut root.split("line"), spec)?;
            let seg = segment_line(&line, &mut root.split("segments"), spec);
            let distractors = generate_distractors(&mut root.split("distractors"), spec, &line);

            let mut img = RasterImage::new(spec.width, spec.height, SEGMENTED_BASE);
            let mut dcolors = root.split("distractor-colors");
            let distractor_colors: Vec<Rgb> = distractors
                .chords
                .iter()
                .map(|_| PALETTE[dcolors.index(PALETTE.len())])
                .collect();
            render_chords(&mut img, &distractors.chords, spec.stroke_width, |i| distractor_colors[i]);

            let mut ccolors = root.split("chord-colors");
            let single = PALETTE[ccolors.index(PALETTE.len())];
            let kept_colors: Vec<Rgb> = if spec.kind == ChallengeKind::SegmentedLine {
                vec![single; seg.kept.len()]
            } else {
                seg.kept
                    .iter()
                    .map(|_| PALETTE[ccolors.index(PALETTE.len())])
                    .collect()
            };
            render_chords(&mut img, &seg.kept, spec.stroke_width, |i| kept_colors[i]);

            layers.lines.push(line.clone());
            layers.kept = seg.kept;
            layers.kept_colors = kept_colors;
            layers.distractors = distractors.chords;
            layers.distractors_requested = distractors.requested;
            (img, line, InstructionHint::TraceLine, None)
        }
        ChallengeKind::MultiLineColored => {
            let mut img = generate_background(&mut root.split("background"), spec);
            let count = spec.line_count as usize;
            let mut colors = root.split("line-color");
            let hues = line_hues(&mut colors, count);
            for (k, hue) in hues.iter().enumerate() {
                let (_, line) = generate_line(&mut root.split_indexed("line", k as u64), spec)?;
                let color = hsv_to_rgb(*hue, colors.uniform(0.85, 1.0), colors.uniform(0.75, 0.95));
                img = render_line(&img, &line, spec.stroke_width, color);
                layers.lines.push(line);
                layers.line_colors.push(color);
            }
            let target = root.split("target").index(count);
            let color = layers.line_colors[target];
            (
                img,
                layers.lines[target].clone(),
                InstructionHint::TraceColor { rgb: color },
                Some(color),
            )
        }
    };

    let id = seed_challenge_id(spec.kind, spec.seed);
    let truth = GroundTruth {
        challenge_id: id.clone(),
        kind: spec.kind,
        reference,
        target_color,
        image_width: spec.width,
        image_height: spec.height,
        seed: spec.seed,
        created_at: 0,
    };
    let challenge = Challenge {
        id,
        image,
        instruction,
        expires_at: 0,
    };
    Ok(Generated {
        challenge,
        truth,
        layers,
    })
}
