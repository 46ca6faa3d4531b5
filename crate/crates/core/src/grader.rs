//! Grading of pointer traces against a stored reference line.
//!
//! A trace passes when it covers the reference (coverage), stays on it
//! (precision) and moves along it in one direction (monotonicity). The
//! metrics are computed on a canonical orientation of the trace so that a
//! trace and its reversal always receive the same verdict.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::challenge::GroundTruth;
use crate::error::{Error, Result};
use crate::geometry::{nearest_with_arcs, resample, Point, Polyline};
use crate::scalar::Scalar;

/// One pointer sample; `t` is milliseconds since the challenge was issued.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint<T> {
    pub x: T,
    pub y: T,
    pub t: f64,
}

impl<T: Scalar> TracePoint<T> {
    pub fn new(x: T, y: T, t: f64) -> Self {
        Self { x, y, t }
    }

    pub fn position(&self) -> Point<T> {
        Point::new(self.x, self.y)
    }
}

/// Timestamped pointer path. Wire form: `{"points": [{"x", "y", "t"}, ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "RawTrace<T>",
    bound = "T: Scalar + Serialize + serde::de::DeserializeOwned"
)]
pub struct Trace<T> {
    points: Vec<TracePoint<T>>,
}

#[derive(Deserialize)]
struct RawTrace<T> {
    points: Vec<TracePoint<T>>,
}

impl<T: Scalar> TryFrom<RawTrace<T>> for Trace<T> {
    type Error = Error;
    fn try_from(raw: RawTrace<T>) -> Result<Self> {
        Trace::new(raw.points)
    }
}

impl<T: Scalar> Trace<T> {
    pub fn new(points: Vec<TracePoint<T>>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid("trace needs at least 2 points"));
        }
        if !points
            .iter()
            .all(|p| p.x.is_finite() && p.y.is_finite() && p.t.is_finite())
        {
            return Err(Error::invalid("trace contains a non-finite value"));
        }
        if points.windows(2).any(|w| w[1].t < w[0].t) {
            return Err(Error::invalid("trace timestamps decrease"));
        }
        Ok(Self { points })
    }

    /// Builds a trace from positions with evenly spaced timestamps.
    pub fn from_positions(points: &[Point<T>], dt_ms: f64) -> Result<Self> {
        Self::new(
            points
                .iter()
                .enumerate()
                .map(|(i, p)| TracePoint::new(p.x, p.y, i as f64 * dt_ms))
                .collect(),
        )
    }

    pub fn points(&self) -> &[TracePoint<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn positions(&self) -> Vec<Point<T>> {
        self.points.iter().map(TracePoint::position).collect()
    }

    /// Same path walked backwards; timestamps are re-based so they still
    /// increase.
    pub fn reversed(&self) -> Self {
        let end = self.points.last().map_or(0.0, |p| p.t);
        let points = self
            .points
            .iter()
            .rev()
            .map(|p| TracePoint::new(p.x, p.y, end - p.t))
            .collect();
        Self { points }
    }
}

/// Thresholds used by [`grade`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    default,
    bound = "T: Scalar + Serialize + serde::de::DeserializeOwned"
)]
pub struct GradingPolicy<T> {
    pub epsilon: T,
    pub coverage_min: f64,
    pub precision_min: f64,
    pub monotone_min: f64,
    pub backtrack_allowance: T,
    pub resample_spacing: T,
    pub min_trace_points: usize,
}

impl<T: Scalar> Default for GradingPolicy<T> {
    fn default() -> Self {
        Self {
            epsilon: T::lit(10.0),
            coverage_min: 0.90,
            precision_min: 0.80,
            monotone_min: 0.90,
            backtrack_allowance: T::lit(6.0),
            resample_spacing: T::lit(2.0),
            min_trace_points: 8,
        }
    }
}

impl<T: Scalar> GradingPolicy<T> {
    pub fn with_epsilon(&self, epsilon: T) -> Self {
        Self {
            epsilon,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let frac = |v: f64| v > 0.0 && v <= 1.0;
        if !(self.epsilon > T::zero()) {
            return Err(Error::invalid("epsilon must be positive"));
        }
        if !(frac(self.coverage_min) && frac(self.precision_min) && frac(self.monotone_min)) {
            return Err(Error::invalid("policy fractions must lie in (0, 1]"));
        }
        if !(self.resample_spacing > T::zero()) {
            return Err(Error::invalid("resample_spacing must be positive"));
        }
        if !(self.backtrack_allowance >= T::zero()) {
            return Err(Error::invalid("backtrack_allowance must be non-negative"));
        }
        Ok(())
    }

    /// The pass rule: every metric at or above its threshold.
    pub fn passes(&self, coverage: f64, precision: f64, monotonicity: f64) -> bool {
        coverage >= self.coverage_min
            && precision >= self.precision_min
            && monotonicity >= self.monotone_min
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictReason {
    Ok,
    LowCoverage,
    LowPrecision,
    NonMonotone,
    TraceTooShort,
    OutOfBounds,
}

/// Grading outcome.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    pub coverage: f64,
    pub precision: f64,
    pub monotonicity: f64,
    pub reason: VerdictReason,
}

impl Verdict {
    fn rejected(reason: VerdictReason) -> Self {
        Self {
            pass: false,
            coverage: 0.0,
            precision: 0.0,
            monotonicity: 0.0,
            reason,
        }
    }
}

/// Fraction of `targets` whose nearest point of `probe` lies within `epsilon`.
fn fraction_within<T: Scalar>(targets: &[Point<T>], probe: &[Point<T>], epsilon: T) -> f64 {
    if targets.is_empty() {
        return 0.0;
    }
    let e2 = epsilon * epsilon;
    let hits = targets
        .iter()
        .filter(|t| probe.iter().any(|p| p.dist_sq(**t) <= e2))
        .count();
    hits as f64 / targets.len() as f64
}

/// Fraction of reference points with a trace point within `epsilon`.
pub fn coverage_metric<T: Scalar>(trace_pts: &Polyline<T>, reference: &Polyline<T>, epsilon: T) -> f64 {
    fraction_within(reference.points(), trace_pts.points(), epsilon)
}

/// Fraction of trace points with a reference point within `epsilon`.
pub fn precision_metric<T: Scalar>(trace_pts: &Polyline<T>, reference: &Polyline<T>, epsilon: T) -> f64 {
    fraction_within(trace_pts.points(), reference.points(), epsilon)
}

/// Best, over both walking directions, of the fraction of consecutive trace
/// points whose projections onto the reference do not move back by more
/// than `backtrack_allowance`.
pub fn monotonicity_metric<T: Scalar>(
    trace_pts: &Polyline<T>,
    reference: &Polyline<T>,
    backtrack_allowance: T,
) -> f64 {
    let cumulative = reference.cumulative_lengths();
    let arcs: Vec<T> = trace_pts
        .points()
        .iter()
        .map(|p| nearest_with_arcs(*p, reference.points(), &cumulative).1)
        .collect();
    let pairs = arcs.len().saturating_sub(1);
    if pairs == 0 {
        return 0.0;
    }
    let forward = arcs
        .windows(2)
        .filter(|w| w[1] >= w[0] - backtrack_allowance)
        .count();
    let backward = arcs
        .windows(2)
        .filter(|w| w[0] >= w[1] - backtrack_allowance)
        .count();
    forward.max(backward) as f64 / pairs as f64
}

/// Orders a path so that it and its reversal map to the same sequence.
fn canonical_orientation<T: Scalar>(mut pts: Vec<Point<T>>) -> Vec<Point<T>> {
    let cmp = |a: &Point<T>, b: &Point<T>| {
        a.x.partial_cmp(&b.x)
            .unwrap_or(Ordering::Equal)
            .then(a.y.partial_cmp(&b.y).unwrap_or(Ordering::Equal))
    };
    let n = pts.len();
    let reversed_first = (0..n)
        .map(|i| cmp(&pts[n - 1 - i], &pts[i]))
        .find(|o| *o != Ordering::Equal)
        == Some(Ordering::Less);
    if reversed_first {
        pts.reverse();
    }
    pts
}

/// Grades `trace` against a reference polyline on a `width` x `height` canvas.
pub fn grade_against<T: Scalar>(
    trace: &Trace<T>,
    reference: &Polyline<T>,
    width: u32,
    height: u32,
    policy: &GradingPolicy<T>,
) -> Verdict {
    if trace.len() < policy.min_trace_points {
        return Verdict::rejected(VerdictReason::TraceTooShort);
    }
    let (w, h) = (T::lit(f64::from(width)), T::lit(f64::from(height)));
    let inside = |p: &TracePoint<T>| p.x >= T::zero() && p.x <= w && p.y >= T::zero() && p.y <= h;
    if !trace.points().iter().all(inside) {
        return Verdict::rejected(VerdictReason::OutOfBounds);
    }
    let path = canonical_orientation(trace.positions());
    let Ok(sampled) = resample(path.as_slice(), policy.resample_spacing) else {
        // Zero-length drag.
        return Verdict::rejected(VerdictReason::TraceTooShort);
    };

    let coverage = coverage_metric(&sampled, reference, policy.epsilon);
    let precision = precision_metric(&sampled, reference, policy.epsilon);
    let monotonicity = monotonicity_metric(&sampled, reference, policy.backtrack_allowance);
    let pass = policy.passes(coverage, precision, monotonicity);
    let reason = if pass {
        VerdictReason::Ok
    } else if coverage < policy.coverage_min {
        VerdictReason::LowCoverage
    } else if precision < policy.precision_min {
        VerdictReason::LowPrecision
    } else {
        VerdictReason::NonMonotone
    };
    Verdict {
        pass,
        coverage,
        precision,
        monotonicity,
        reason,
    }
}

/// Grades a trace against a challenge's ground truth.
pub fn grade(trace: &Trace<f64>, truth: &GroundTruth, policy: &GradingPolicy<f64>) -> Verdict {
    grade_against(trace, &truth.reference, truth.image_width, truth.image_height, policy)
}
