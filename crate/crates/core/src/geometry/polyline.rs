use std::borrow::Cow;

use serde::{Deserialize, Serialize};

use super::{Point, Spline};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default arc-length step for stored references and resampled traces.
pub const DEFAULT_SPACING: f64 = 2.0;

/// Ordered point sequence with a nominal step length.
///
/// Construction only checks that there are at least two finite points and a
/// positive spacing, so raw pointer paths are representable too. Outputs of
/// [`resample`] additionally satisfy [`Polyline::has_regular_spacing`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "RawPolyline<T>",
    bound = "T: Scalar + Serialize + serde::de::DeserializeOwned"
)]
pub struct Polyline<T> {
    points: Vec<Point<T>>,
    spacing: T,
}

#[derive(Deserialize)]
struct RawPolyline<T> {
    points: Vec<Point<T>>,
    spacing: T,
}

impl<T: Scalar> TryFrom<RawPolyline<T>> for Polyline<T> {
    type Error = Error;
    fn try_from(raw: RawPolyline<T>) -> Result<Self> {
        Polyline::new(raw.points, raw.spacing)
    }
}

impl<T: Scalar> Polyline<T> {
    pub fn new(points: Vec<Point<T>>, spacing: T) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid("polyline needs at least 2 points"));
        }
        if !points.iter().all(Point::is_finite) {
            return Err(Error::invalid("polyline point is not finite"));
        }
        if !(spacing > T::zero() && spacing.is_finite()) {
            return Err(Error::invalid("polyline spacing must be positive"));
        }
        Ok(Self { points, spacing })
    }

    /// Wraps a raw path, using its mean step as the nominal spacing.
    pub fn from_path(points: Vec<Point<T>>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid("polyline needs at least 2 points"));
        }
        let len = path_length(&points);
        let spacing = if len > T::zero() {
            len / T::from_usize_lossy(points.len() - 1)
        } else {
            T::one()
        };
        Self::new(points, spacing)
    }

    pub fn points(&self) -> &[Point<T>] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Point<T>> {
        self.points
    }

    pub fn spacing(&self) -> T {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first(&self) -> Point<T> {
        self.points[0]
    }

    pub fn last(&self) -> Point<T> {
        self.points[self.points.len() - 1]
    }

    pub fn total_length(&self) -> T {
        path_length(&self.points)
    }

    /// Cumulative arc length at every vertex; starts at zero.
    pub fn cumulative_lengths(&self) -> Vec<T> {
        let mut acc = T::zero();
        let mut out = Vec::with_capacity(self.points.len());
        out.push(acc);
        for w in self.points.windows(2) {
            acc = acc + w[0].dist(w[1]);
            out.push(acc);
        }
        out
    }

    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        Self {
            points,
            spacing: self.spacing,
        }
    }

    /// Every step lies within `[0.5, 1.5] * spacing`, except the final one
    /// which may be shorter.
    pub fn has_regular_spacing(&self) -> bool {
        let lo = self.spacing * T::lit(0.5);
        let hi = self.spacing * T::lit(1.5);
        let n = self.points.len();
        self.points.windows(2).enumerate().all(|(i, w)| {
            let d = w[0].dist(w[1]);
            if i == n - 2 {
                d <= hi
            } else {
                d >= lo && d <= hi
            }
        })
    }

    /// Point at arc length `s` from the start, clamped to the ends.
    pub fn point_at_arc(&self, s: T) -> Point<T> {
        if s <= T::zero() {
            return self.first();
        }
        let mut acc = T::zero();
        for w in self.points.windows(2) {
            let d = w[0].dist(w[1]);
            if acc + d >= s {
                if d == T::zero() {
                    return w[0];
                }
                return w[0].lerp(w[1], (s - acc) / d);
            }
            acc = acc + d;
        }
        self.last()
    }
}

fn path_length<T: Scalar>(points: &[Point<T>]) -> T {
    points
        .windows(2)
        .fold(T::zero(), |acc, w| acc + w[0].dist(w[1]))
}

/// Curves that can be turned into a dense point sequence.
pub trait Flatten<T: Scalar> {
    fn flattened(&self) -> Cow<'_, [Point<T>]>;
}

impl<T: Scalar> Flatten<T> for Polyline<T> {
    fn flattened(&self) -> Cow<'_, [Point<T>]> {
        Cow::Borrowed(&self.points)
    }
}

impl<T: Scalar> Flatten<T> for Spline<T> {
    fn flattened(&self) -> Cow<'_, [Point<T>]> {
        Cow::Owned(self.flatten(super::ARC_LENGTH_SUBDIVISIONS))
    }
}

impl<T: Scalar> Flatten<T> for [Point<T>] {
    fn flattened(&self) -> Cow<'_, [Point<T>]> {
        Cow::Borrowed(self)
    }
}

/// Resamples a curve into points spaced `spacing` apart (straight-line
/// distance between neighbours), walking the curve from its start. Output
/// points lie on the flattened input; the first and last input points are
/// kept exactly.
pub fn resample<T: Scalar, C: Flatten<T> + ?Sized>(input: &C, spacing: T) -> Result<Polyline<T>> {
    if !(spacing > T::zero() && spacing.is_finite()) {
        return Err(Error::invalid("resample spacing must be positive"));
    }
    let dense = input.flattened();
    if dense.len() < 2 || !dense.iter().all(Point::is_finite) {
        return Err(Error::invalid("resample input needs at least 2 finite points"));
    }
    if path_length(&dense) <= T::zero() {
        return Err(Error::invalid("resample input has zero length"));
    }

    let spacing_sq = spacing * spacing;
    let last = dense[dense.len() - 1];
    let mut out = vec![dense[0]];
    let mut cur = dense[0];
    let mut seg = 0usize;

    'walk: loop {
        for k in seg..dense.len() - 1 {
            let a = if k == seg { cur } else { dense[k] };
            let b = dense[k + 1];
            if b.dist_sq(cur) < spacing_sq {
                continue;
            }
            // `a` is strictly inside the circle around `cur`, `b` is not; the
            // exit point is the larger root of |a + t(b - a) - cur| = spacing.
            let d = b - a;
            let f = a - cur;
            let qa = d.norm_sq();
            let qb = T::lit(2.0) * f.dot(d);
            let qc = f.norm_sq() - spacing_sq;
            let disc = (qb * qb - T::lit(4.0) * qa * qc).max(T::zero());
            let t = ((-qb + disc.sqrt()) / (T::lit(2.0) * qa))
                .max(T::zero())
                .min(T::one());
            cur = if t == T::one() { b } else { a.lerp(b, t) };
            seg = k;
            out.push(cur);
            continue 'walk;
        }
        break;
    }

    let tail = cur.dist(last);
    if out.len() == 1 || tail > spacing * T::lit(1e-6) {
        out.push(last);
    } else {
        let n = out.len();
        out[n - 1] = last;
    }
    Polyline::new(out, spacing)
}

/// Closest point on `line` to `p`: returns the distance and the arc length
/// from the start of `line` to that closest point.
pub fn nearest_on_polyline<T: Scalar>(p: Point<T>, line: &Polyline<T>) -> (T, T) {
    nearest_with_arcs(p, line.points(), &line.cumulative_lengths())
}

/// As [`nearest_on_polyline`], with `arcs` the cumulative lengths of `pts`.
pub(crate) fn nearest_with_arcs<T: Scalar>(p: Point<T>, pts: &[Point<T>], arcs: &[T]) -> (T, T) {
    let mut best = T::infinity();
    let mut best_arc = T::zero();
    for (i, w) in pts.windows(2).enumerate() {
        let ab = w[1] - w[0];
        let len_sq = ab.norm_sq();
        let t = if len_sq > T::zero() {
            ((p - w[0]).dot(ab) / len_sq).max(T::zero()).min(T::one())
        } else {
            T::zero()
        };
        let d_sq = p.dist_sq(w[0] + ab * t);
        if d_sq < best {
            best = d_sq;
            best_arc = arcs[i] + (arcs[i + 1] - arcs[i]) * t;
        }
    }
    let total = arcs[arcs.len() - 1];
    (best.sqrt(), best_arc.min(total))
}
