//! Line-tracing CAPTCHAs.
//!
//! A challenge is an image hiding one line (blurred, broken into chords, or
//! drawn among other colored lines). The solver drags the pointer along the
//! line; the trace is graded against the line's stored reference polyline.
//!
//! The geometry and grading layers are generic over [`Scalar`]; the rest of
//! the crate works in `f64` pixel coordinates through the aliases below.

pub mod attack;
pub mod challenge;
mod error;
pub mod geometry;
pub mod grader;
pub mod raster;
pub mod rng;
mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use attack::{evaluate, Attacker, AttackerStrategy, EvalReport};
pub use challenge::{
    generate_challenge, Challenge, ChallengeKind, ChallengeSpec, GroundTruth, InstructionHint,
};
pub use grader::{grade, Verdict, VerdictReason};
pub use raster::{RasterImage, Rgb};
pub use rng::SeedRng;

pub type Point = geometry::Point<f64>;
pub type CubicSegment = geometry::CubicSegment<f64>;
pub type Spline = geometry::Spline<f64>;
pub type Polyline = geometry::Polyline<f64>;
pub type Trace = grader::Trace<f64>;
pub type TracePoint = grader::TracePoint<f64>;
pub type GradingPolicy = grader::GradingPolicy<f64>;
