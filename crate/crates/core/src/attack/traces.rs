use std::f64::consts::{PI, TAU};

use crate::challenge::{sample_waypoints, GroundTruth, MARGIN};
use crate::geometry::{resample, spline_through, Point, Polyline, DEFAULT_SPACING, DEFAULT_TENSION};
use crate::grader::{Trace, TracePoint};
use crate::rng::SeedRng;

/// Milliseconds between consecutive synthetic samples.
const SAMPLE_INTERVAL_MS: f64 = 8.0;

fn timed(points: &[Point<f64>]) -> Trace<f64> {
    Trace::from_positions(points, SAMPLE_INTERVAL_MS).expect("synthetic traces are valid")
}

/// Smooth random curve drawn from the same waypoint distribution the
/// generator uses for real lines.
pub fn random_curve_trace(rng: &mut SeedRng, width: u32, height: u32, waypoint_count: u32) -> Trace<f64> {
    let waypoints = sample_waypoints(rng, width, height, (waypoint_count as usize).max(3));
    let spline = spline_through(&waypoints, DEFAULT_TENSION).expect("waypoints are finite");
    let line = resample(&spline, DEFAULT_SPACING).expect("curve has positive length");
    timed(line.points())
}

/// Straight stroke from near the left margin to near the right margin at
/// random heights.
pub fn straight_line_trace(rng: &mut SeedRng, width: u32, height: u32) -> Trace<f64> {
    let (w, h) = (f64::from(width), f64::from(height));
    let a = Point::new(MARGIN + rng.uniform(0.0, 20.0), rng.uniform(MARGIN, h - MARGIN));
    let b = Point::new(w - MARGIN - rng.uniform(0.0, 20.0), rng.uniform(MARGIN, h - MARGIN));
    let line = resample(&Polyline::new(vec![a, b], DEFAULT_SPACING).expect("finite"), DEFAULT_SPACING)
        .expect("segment has positive length");
    timed(line.points())
}

/// Stand-in for a person tracing the line: the reference with independent
/// Gaussian noise per point plus one slow sinusoidal drift of magnitude at
/// most `jitter_sigma`, walked in a random direction with irregular
/// sample intervals.
pub fn synthetic_human(truth: &GroundTruth, rng: &mut SeedRng, jitter_sigma: f64) -> Trace<f64> {
    let sigma = jitter_sigma.max(0.0);
    let reference = &truth.reference;
    let total = reference.total_length().max(1.0);
    let amplitude = sigma * rng.uniform(0.0, 1.0);
    let freq = rng.uniform(0.5, 2.0);
    let phase = rng.uniform(0.0, TAU);
    let heading = rng.uniform(0.0, PI);
    let drift_dir = Point::new(heading.cos(), heading.sin());

    let arcs = reference.cumulative_lengths();
    let mut pts: Vec<Point<f64>> = reference
        .points()
        .iter()
        .zip(&arcs)
        .map(|(p, s)| {
            let drift = drift_dir * (amplitude * (TAU * freq * s / total + phase).sin());
            *p + drift + Point::new(rng.gaussian(sigma), rng.gaussian(sigma))
        })
        .collect();
    if rng.chance(0.5) {
        pts.reverse();
    }
    let mut t = 0.0;
    let points = pts
        .iter()
        .map(|p| {
            let tp = TracePoint::new(p.x, p.y, t);
            t += rng.uniform(6.0, 14.0);
            tp
        })
        .collect();
    Trace::new(points).expect("synthetic traces are valid")
}
