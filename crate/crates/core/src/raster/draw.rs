use serde::{Deserialize, Serialize};

use super::{RasterImage, Rgb};
use crate::geometry::{point_segment_distance, Point, Polyline};

/// Straight segment drawn as part of a segmented line or as a distractor.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Chord {
    pub a: Point<f64>,
    pub b: Point<f64>,
}

impl Chord {
    pub fn new(a: Point<f64>, b: Point<f64>) -> Self {
        Self { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn midpoint(&self) -> Point<f64> {
        self.a.lerp(self.b, 0.5)
    }
}

#[inline]
fn pixel_center(x: i64, y: i64) -> Point<f64> {
    Point::new(x as f64 + 0.5, y as f64 + 0.5)
}

/// Clamped integer pixel range covering `[lo, hi]` in continuous coordinates.
fn span(lo: f64, hi: f64, limit: u32) -> std::ops::Range<i64> {
    let a = (lo.floor() as i64).max(0);
    let b = (hi.ceil() as i64 + 1).min(i64::from(limit));
    a..b.max(a)
}

/// Paints every pixel whose center is within `width / 2` of the segment.
pub fn stroke_segment(img: &mut RasterImage, a: Point<f64>, b: Point<f64>, width: f64, color: Rgb) {
    let r = width * 0.5;
    let xs = span(a.x.min(b.x) - r, a.x.max(b.x) + r, img.width());
    let ys = span(a.y.min(b.y) - r, a.y.max(b.y) + r, img.height());
    for y in ys {
        for x in xs.clone() {
            if point_segment_distance(pixel_center(x, y), a, b).0 <= r {
                img.set(x as u32, y as u32, color);
            }
        }
    }
}

/// Draws `line` as a disc-swept stroke of the given width.
pub fn render_line(image: &RasterImage, line: &Polyline<f64>, stroke_width: f64, color: Rgb) -> RasterImage {
    let mut out = image.clone();
    for w in line.points().windows(2) {
        stroke_segment(&mut out, w[0], w[1], stroke_width, color);
    }
    out
}

/// Draws each chord with the color chosen by `color_of(index)`.
pub fn render_chords(
    img: &mut RasterImage,
    chords: &[Chord],
    stroke_width: f64,
    mut color_of: impl FnMut(usize) -> Rgb,
) {
    for (i, c) in chords.iter().enumerate() {
        stroke_segment(img, c.a, c.b, stroke_width, color_of(i));
    }
}

/// Axis-aligned filled rectangle with corners `a` and `b`.
pub fn fill_rect(img: &mut RasterImage, a: Point<f64>, b: Point<f64>, color: Rgb) {
    let (x0, x1) = (a.x.min(b.x), a.x.max(b.x));
    let (y0, y1) = (a.y.min(b.y), a.y.max(b.y));
    for y in span(y0, y1, img.height()) {
        for x in span(x0, x1, img.width()) {
            let c = pixel_center(x, y);
            if c.x >= x0 && c.x <= x1 && c.y >= y0 && c.y <= y1 {
                img.set(x as u32, y as u32, color);
            }
        }
    }
}

/// Filled ellipse with semi-axes `rx`, `ry`, rotated by `angle` radians.
pub fn fill_ellipse(img: &mut RasterImage, center: Point<f64>, rx: f64, ry: f64, angle: f64, color: Rgb) {
    if rx <= 0.0 || ry <= 0.0 {
        return;
    }
    let (sin, cos) = angle.sin_cos();
    let reach = rx.max(ry);
    for y in span(center.y - reach, center.y + reach, img.height()) {
        for x in span(center.x - reach, center.x + reach, img.width()) {
            let d = pixel_center(x, y) - center;
            let u = d.x * cos + d.y * sin;
            let v = -d.x * sin + d.y * cos;
            if (u / rx).powi(2) + (v / ry).powi(2) <= 1.0 {
                img.set(x as u32, y as u32, color);
            }
        }
    }
}

/// Circular arc of radius `radius` starting at angle `start` and sweeping
/// `sweep` radians counter-clockwise, stroked with the given width.
pub fn stroke_arc(
    img: &mut RasterImage,
    center: Point<f64>,
    radius: f64,
    start: f64,
    sweep: f64,
    width: f64,
    color: Rgb,
) {
    let half = width * 0.5;
    let reach = radius + half;
    let tau = std::f64::consts::TAU;
    for y in span(center.y - reach, center.y + reach, img.height()) {
        for x in span(center.x - reach, center.x + reach, img.width()) {
            let d = pixel_center(x, y) - center;
            if (d.norm() - radius).abs() > half {
                continue;
            }
            let rel = (d.y.atan2(d.x) - start).rem_euclid(tau);
            if rel <= sweep {
                img.set(x as u32, y as u32, color);
            }
        }
    }
}
