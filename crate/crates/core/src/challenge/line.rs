use super::{ChallengeSpec, MARGIN};
use crate::error::{Error, Result};
use crate::geometry::{resample, spline_through, Point, Polyline, Spline, DEFAULT_SPACING, DEFAULT_TENSION};
use crate::rng::SeedRng;

/// Candidate lines rejected before generation gives up.
pub const MAX_LINE_ATTEMPTS: usize = 20;

/// Extra vertical padding for waypoints; the spline may overshoot them.
const WAYPOINT_Y_PAD: f64 = 15.0;

/// Samples `count` waypoints left to right: x strictly increasing around an
/// even grid between the margins, y uniform in the padded band.
pub fn sample_waypoints(rng: &mut SeedRng, width: u32, height: u32, count: usize) -> Vec<Point<f64>> {
    let (w, h) = (f64::from(width), f64::from(height));
    let count = count.max(2);
    let step = (w - 2.0 * MARGIN) / (count - 1) as f64;
    let (y_lo, y_hi) = (MARGIN + WAYPOINT_Y_PAD, h - MARGIN - WAYPOINT_Y_PAD);
    (0..count)
        .map(|i| {
            let x = if i == 0 {
                MARGIN + rng.uniform(0.0, 0.25) * step
            } else if i == count - 1 {
                w - MARGIN - rng.uniform(0.0, 0.25) * step
            } else {
                MARGIN + (i as f64 + rng.uniform(-0.3, 0.3)) * step
            };
            Point::new(x, rng.uniform(y_lo, y_hi))
        })
        .collect()
}

/// Arc separation, in multiples of the clearance, below which two samples
/// count as neighbours for the self-intersection test.
const NEIGHBOUR_ARC_FACTOR: f64 = 4.0;

/// True when two samples that are far apart along the line come closer
/// than `clearance` in the plane.
pub fn self_intersects(line: &Polyline<f64>, clearance: f64) -> bool {
    let pts = line.points();
    let skip = ((NEIGHBOUR_ARC_FACTOR * clearance) / line.spacing()).ceil() as usize;
    let c2 = clearance * clearance;
    for i in 0..pts.len() {
        for j in (i + skip.max(1))..pts.len() {
            if pts[i].dist_sq(pts[j]) < c2 {
                return true;
            }
        }
    }
    false
}

fn within_margins(line: &Polyline<f64>, width: u32, height: u32) -> bool {
    let (w, h) = (f64::from(width), f64::from(height));
    line.points()
        .iter()
        .all(|p| p.x >= MARGIN && p.x <= w - MARGIN && p.y >= MARGIN && p.y <= h - MARGIN)
}

/// Builds one random line: waypoints, interpolating spline and its 2 px
/// resampling. Candidates that leave the margins, are too short or come
/// close to crossing themselves are redrawn.
pub fn generate_line(rng: &mut SeedRng, spec: &ChallengeSpec) -> Result<(Spline<f64>, Polyline<f64>)> {
    let clearance = 2.0 * spec.stroke_width;
    let min_len = 0.7 * f64::from(spec.width);
    for _ in 0..MAX_LINE_ATTEMPTS {
        let waypoints = sample_waypoints(rng, spec.width, spec.height, spec.waypoint_count as usize);
        let spline = spline_through(&waypoints, DEFAULT_TENSION)?;
        let line = resample(&spline, DEFAULT_SPACING)?;
        if within_margins(&line, spec.width, spec.height)
            && line.total_length() >= min_len
            && !self_intersects(&line, clearance)
        {
            return Ok((spline, line));
        }
    }
    Err(Error::Generation(format!(
        "no acceptable line after {MAX_LINE_ATTEMPTS} attempts"
    )))
}
