//! Spline construction, arc-length resampling and point/polyline distance.
//!
//! Everything here is generic over [`Scalar`](crate::Scalar) and pure.

mod bezier;
mod point;
mod polyline;
mod spline;

pub use bezier::{eval_cubic, CubicSegment, ARC_LENGTH_SUBDIVISIONS};
pub use point::{point_segment_distance, Point};
pub use polyline::{nearest_on_polyline, resample, Flatten, Polyline, DEFAULT_SPACING};
pub(crate) use polyline::nearest_with_arcs;
pub use spline::{spline_through, Spline, DEFAULT_TENSION};
