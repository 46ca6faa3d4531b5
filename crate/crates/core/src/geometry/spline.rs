use serde::{Deserialize, Serialize};

use super::{CubicSegment, Point};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default tangent scale; 0.5 gives the uniform Catmull-Rom spline.
pub const DEFAULT_TENSION: f64 = 0.5;

/// C0-continuous chain of cubic Bézier segments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar + Serialize + serde::de::DeserializeOwned")]
pub struct Spline<T> {
    segments: Vec<CubicSegment<T>>,
}

impl<T: Scalar> Spline<T> {
    /// Builds a spline from segments whose endpoints coincide exactly.
    pub fn new(segments: Vec<CubicSegment<T>>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::invalid("spline needs at least one segment"));
        }
        if segments.windows(2).any(|w| w[0].p3 != w[1].p0) {
            return Err(Error::invalid("spline segments are not C0-continuous"));
        }
        Ok(Self { segments })
    }

    pub fn segments(&self) -> &[CubicSegment<T>] {
        &self.segments
    }

    pub fn start(&self) -> Point<T> {
        self.segments[0].p0
    }

    pub fn end(&self) -> Point<T> {
        self.segments[self.segments.len() - 1].p3
    }

    pub fn arc_length(&self) -> T {
        self.segments
            .iter()
            .fold(T::zero(), |acc, s| acc + s.arc_length())
    }

    /// Dense point sequence along the curve. Each segment is split into at
    /// least `min_per_segment` pieces and finer when it is long, so chords
    /// stay within a small fraction of a pixel of the curve.
    pub fn flatten(&self, min_per_segment: usize) -> Vec<Point<T>> {
        let mut out = Vec::new();
        for (i, seg) in self.segments.iter().enumerate() {
            let approx = seg.arc_length().to_f64_lossy();
            let n = min_per_segment.max((approx * 2.0).ceil() as usize);
            seg.flatten_into(n, &mut out, i == 0);
        }
        out
    }
}

/// Interpolating spline through `waypoints` with Catmull-Rom style tangents
/// `m_i = tension * (w[i+1] - w[i-1])`, converted to Bézier form. End
/// tangents use reflected phantom points.
pub fn spline_through<T: Scalar>(waypoints: &[Point<T>], tension: T) -> Result<Spline<T>> {
    if waypoints.len() < 3 {
        return Err(Error::invalid(format!(
            "spline needs at least 3 waypoints, got {}",
            waypoints.len()
        )));
    }
    if !waypoints.iter().all(Point::is_finite) {
        return Err(Error::invalid("waypoint is not finite"));
    }
    if !tension.is_finite() {
        return Err(Error::invalid("tension is not finite"));
    }
    let n = waypoints.len();
    let two = T::lit(2.0);
    let tangent = |i: usize| -> Point<T> {
        let prev = if i == 0 {
            waypoints[0] * two - waypoints[1]
        } else {
            waypoints[i - 1]
        };
        let next = if i == n - 1 {
            waypoints[n - 1] * two - waypoints[n - 2]
        } else {
            waypoints[i + 1]
        };
        (next - prev) * tension
    };
    let third = T::lit(3.0).recip();
    let segments = (0..n - 1)
        .map(|i| {
            let a = waypoints[i];
            let b = waypoints[i + 1];
            CubicSegment::new(a, a + tangent(i) * third, b - tangent(i + 1) * third, b)
        })
        .collect::<Result<Vec<_>>>()?;
    Spline::new(segments)
}
