use std::f64::consts::{PI, TAU};

use super::ChallengeSpec;
use crate::geometry::Point;
use crate::raster::{fill_ellipse, fill_rect, hsv_to_rgb, stroke_arc, RasterImage, Rgb};
use crate::rng::SeedRng;

/// One background primitive.
#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    Ellipse {
        center: Point<f64>,
        rx: f64,
        ry: f64,
        angle: f64,
        color: Rgb,
    },
    Rect {
        a: Point<f64>,
        b: Point<f64>,
        color: Rgb,
    },
    Arc {
        center: Point<f64>,
        radius: f64,
        start: f64,
        sweep: f64,
        width: f64,
        color: Rgb,
    },
}

/// Base fill plus the shapes painted over it, in paint order.
#[derive(Clone, Debug, PartialEq)]
pub struct BackgroundPlan {
    pub base: Rgb,
    pub shapes: Vec<Shape>,
}

/// Random color with saturation and value in `[0.3, 1.0]`.
pub fn random_color(rng: &mut SeedRng) -> Rgb {
    let h = rng.uniform(0.0, 360.0);
    let s = rng.uniform(0.3, 1.0);
    let v = rng.uniform(0.3, 1.0);
    hsv_to_rgb(h, s, v)
}

/// Draws the background layout. The first draw is the shape count, taken
/// uniformly from `spec.background_shape_count`.
pub fn plan_background(rng: &mut SeedRng, spec: &ChallengeSpec) -> BackgroundPlan {
    let count = rng.int_inclusive(spec.background_shape_count.min, spec.background_shape_count.max);
    let base = random_color(rng);
    let (w, h) = (f64::from(spec.width), f64::from(spec.height));
    let size = w.min(h);
    let shapes = (0..count)
        .map(|_| {
            let center = Point::new(rng.uniform(0.0, w), rng.uniform(0.0, h));
            match rng.index(3) {
                0 => Shape::Ellipse {
                    center,
                    rx: rng.uniform(0.04, 0.3) * size,
                    ry: rng.uniform(0.04, 0.3) * size,
                    angle: rng.uniform(0.0, PI),
                    color: random_color(rng),
                },
                1 => {
                    let hw = rng.uniform(0.04, 0.3) * size;
                    let hh = rng.uniform(0.04, 0.3) * size;
                    Shape::Rect {
                        a: Point::new(center.x - hw, center.y - hh),
                        b: Point::new(center.x + hw, center.y + hh),
                        color: random_color(rng),
                    }
                }
                _ => Shape::Arc {
                    center,
                    radius: rng.uniform(0.05, 0.35) * size,
                    start: rng.uniform(0.0, TAU),
                    sweep: rng.uniform(0.5, TAU),
                    width: rng.uniform(2.0, 8.0),
                    color: random_color(rng),
                },
            }
        })
        .collect();
    BackgroundPlan { base, shapes }
}

pub fn paint_background(plan: &BackgroundPlan, width: u32, height: u32) -> RasterImage {
    let mut img = RasterImage::new(width, height, plan.base);
    for shape in &plan.shapes {
        match *shape {
            Shape::Ellipse {
                center,
                rx,
                ry,
                angle,
                color,
            } => fill_ellipse(&mut img, center, rx, ry, angle, color),
            Shape::Rect { a, b, color } => fill_rect(&mut img, a, b, color),
            Shape::Arc {
                center,
                radius,
                start,
                sweep,
                width,
                color,
            } => stroke_arc(&mut img, center, radius, start, sweep, width, color),
        }
    }
    img
}

/// Random shapes with random colors over a random base fill.
pub fn generate_background(rng: &mut SeedRng, spec: &ChallengeSpec) -> RasterImage {
    let plan = plan_background(rng, spec);
    paint_background(&plan, spec.width, spec.height)
}
