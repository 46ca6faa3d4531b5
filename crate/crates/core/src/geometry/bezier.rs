use serde::{Deserialize, Serialize};

use super::Point;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Number of chords used per segment when measuring arc length.
pub const ARC_LENGTH_SUBDIVISIONS: usize = 32;

/// Cubic Bézier segment.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar + Serialize + serde::de::DeserializeOwned")]
pub struct CubicSegment<T> {
    pub p0: Point<T>,
    pub p1: Point<T>,
    pub p2: Point<T>,
    pub p3: Point<T>,
}

impl<T: Scalar> CubicSegment<T> {
    pub fn new(p0: Point<T>, p1: Point<T>, p2: Point<T>, p3: Point<T>) -> Result<Self> {
        let seg = Self { p0, p1, p2, p3 };
        if !seg.controls().iter().all(Point::is_finite) {
            return Err(Error::invalid("cubic control point is not finite"));
        }
        Ok(seg)
    }

    pub fn controls(&self) -> [Point<T>; 4] {
        [self.p0, self.p1, self.p2, self.p3]
    }

    /// Evaluates the curve at `t`, which must lie in `[0, 1]`.
    pub fn eval(&self, t: T) -> Result<Point<T>> {
        if !(t >= T::zero() && t <= T::one()) {
            return Err(Error::Domain(format!("bezier parameter {t} outside [0, 1]")));
        }
        Ok(self.eval_unchecked(t))
    }

    /// Bernstein-form evaluation. The endpoints are reproduced exactly at
    /// `t = 0` and `t = 1`.
    #[inline]
    pub(crate) fn eval_unchecked(&self, t: T) -> Point<T> {
        let three = T::lit(3.0);
        let u = T::one() - t;
        let b0 = u * u * u;
        let b1 = three * u * u * t;
        let b2 = three * u * t * t;
        let b3 = t * t * t;
        Point::new(
            b0 * self.p0.x + b1 * self.p1.x + b2 * self.p2.x + b3 * self.p3.x,
            b0 * self.p0.y + b1 * self.p1.y + b2 * self.p2.y + b3 * self.p3.y,
        )
    }

    /// Samples `n + 1` points at uniform parameter steps, endpoints included.
    pub fn flatten_into(&self, n: usize, out: &mut Vec<Point<T>>, include_start: bool) {
        let n = n.max(1);
        let inv = T::from_usize_lossy(n).recip();
        if include_start {
            out.push(self.p0);
        }
        for i in 1..n {
            out.push(self.eval_unchecked(T::from_usize_lossy(i) * inv));
        }
        out.push(self.p3);
    }

    /// Arc length by chord summation over [`ARC_LENGTH_SUBDIVISIONS`] pieces.
    pub fn arc_length(&self) -> T {
        let mut pts = Vec::with_capacity(ARC_LENGTH_SUBDIVISIONS + 1);
        self.flatten_into(ARC_LENGTH_SUBDIVISIONS, &mut pts, true);
        pts.windows(2).fold(T::zero(), |acc, w| acc + w[0].dist(w[1]))
    }
}

/// Free-function form of [`CubicSegment::eval`].
pub fn eval_cubic<T: Scalar>(seg: &CubicSegment<T>, t: T) -> Result<Point<T>> {
    seg.eval(t)
}
