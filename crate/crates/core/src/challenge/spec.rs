use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{DEFAULT_HEIGHT, DEFAULT_WIDTH};

/// The four challenge variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChallengeKind {
    /// A line on a busy shape background, whole image blurred.
    #[serde(rename = "blurred")]
    BlurredLine,
    /// Line broken into chords of one color among same-looking distractors.
    #[serde(rename = "segmented")]
    SegmentedLine,
    /// As [`ChallengeKind::SegmentedLine`], but every chord gets its own color.
    #[serde(rename = "multicolor_segmented")]
    MultiColorSegmentedLine,
    /// Several colored lines; the user traces the one matching a swatch.
    #[serde(rename = "multiline")]
    MultiLineColored,
}

impl ChallengeKind {
    pub const ALL: [ChallengeKind; 4] = [
        ChallengeKind::BlurredLine,
        ChallengeKind::SegmentedLine,
        ChallengeKind::MultiColorSegmentedLine,
        ChallengeKind::MultiLineColored,
    ];

    /// Wire name, as used by the HTTP API and the CLI.
    pub fn as_str(self) -> &'static str {
        match self {
            ChallengeKind::BlurredLine => "blurred",
            ChallengeKind::SegmentedLine => "segmented",
            ChallengeKind::MultiColorSegmentedLine => "multicolor_segmented",
            ChallengeKind::MultiLineColored => "multiline",
        }
    }

    pub fn is_segmented(self) -> bool {
        matches!(
            self,
            ChallengeKind::SegmentedLine | ChallengeKind::MultiColorSegmentedLine
        )
    }
}

impl std::fmt::Display for ChallengeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ChallengeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ChallengeKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown challenge kind '{s}'")))
    }
}

/// Inclusive integer range, serialized as `[min, max]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "[u32; 2]", into = "[u32; 2]")]
pub struct CountRange {
    pub min: u32,
    pub max: u32,
}

impl CountRange {
    pub const fn new(min: u32, max: u32) -> Self {
        Self { min, max }
    }
}

impl From<[u32; 2]> for CountRange {
    fn from([min, max]: [u32; 2]) -> Self {
        Self { min, max }
    }
}

impl From<CountRange> for [u32; 2] {
    fn from(r: CountRange) -> Self {
        [r.min, r.max]
    }
}

/// Closed real range in pixels, serialized as `[min, max]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct LengthRange {
    pub min: f64,
    pub max: f64,
}

impl LengthRange {
    pub const fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.min + self.max)
    }
}

impl From<[f64; 2]> for LengthRange {
    fn from([min, max]: [f64; 2]) -> Self {
        Self { min, max }
    }
}

impl From<LengthRange> for [f64; 2] {
    fn from(r: LengthRange) -> Self {
        [r.min, r.max]
    }
}

/// Distance kept between every reference point and the image border.
pub const MARGIN: f64 = 10.0;

/// Generation parameters. Together with `seed`, fully determines a challenge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChallengeSpec {
    pub kind: ChallengeKind,
    pub seed: u64,
    pub width: u32,
    pub height: u32,
    pub background_shape_count: CountRange,
    pub waypoint_count: u32,
    pub stroke_width: f64,
    /// Only used by [`ChallengeKind::BlurredLine`].
    pub blur_sigma: f64,
    /// Segmented kinds: kept chord arc lengths.
    pub segment_len: LengthRange,
    /// Segmented kinds: gap arc lengths.
    pub gap_len: LengthRange,
    /// Segmented kinds: number of distractor chords.
    pub distractor_count: CountRange,
    /// Only used by [`ChallengeKind::MultiLineColored`].
    pub line_count: u32,
}

impl Default for ChallengeSpec {
    fn default() -> Self {
        Self {
            kind: ChallengeKind::BlurredLine,
            seed: 0,
            width: DEFAULT_WIDTH,
            height: DEFAULT_HEIGHT,
            background_shape_count: CountRange::new(15, 40),
            waypoint_count: 6,
            stroke_width: 3.0,
            blur_sigma: 2.0,
            segment_len: LengthRange::new(12.0, 24.0),
            gap_len: LengthRange::new(6.0, 14.0),
            distractor_count: CountRange::new(120, 200),
            line_count: 5,
        }
    }
}

impl ChallengeSpec {
    /// Default parameters for `kind`.
    pub fn new(kind: ChallengeKind, seed: u64) -> Self {
        Self {
            kind,
            seed,
            ..Self::default()
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::invalid(m));
        if self.width < 200 || self.height < 100 {
            return fail(format!(
                "canvas {}x{} is below the 200x100 minimum",
                self.width, self.height
            ));
        }
        if self.waypoint_count < 4 {
            return fail(format!("waypoint_count {} < 4", self.waypoint_count));
        }
        if !(self.stroke_width >= 2.0) || !self.stroke_width.is_finite() {
            return fail(format!("stroke_width {} < 2", self.stroke_width));
        }
        if !(self.blur_sigma >= 0.0) || !self.blur_sigma.is_finite() {
            return fail(format!("blur_sigma {} < 0", self.blur_sigma));
        }
        for (name, r) in [
            ("background_shape_count", self.background_shape_count),
            ("distractor_count", self.distractor_count),
        ] {
            if r.min > r.max {
                return fail(format!("{name} range has min > max"));
            }
        }
        for (name, r) in [("segment_len", self.segment_len), ("gap_len", self.gap_len)] {
            if !(r.min >= 0.0 && r.min <= r.max && r.max.is_finite()) {
                return fail(format!("{name} range is invalid"));
            }
        }
        if self.kind.is_segmented() && !(self.segment_len.min > 0.0) {
            return fail("segment_len must be positive".into());
        }
        if self.kind == ChallengeKind::MultiLineColored && self.line_count == 0 {
            return fail("line_count must be at least 1".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_names_round_trip() {
        for k in ChallengeKind::ALL {
            assert_eq!(k.as_str().parse::<ChallengeKind>().unwrap(), k);
            assert_eq!(serde_json::to_string(&k).unwrap(), format!("\"{}\"", k.as_str()));
        }
        assert!("triangle".parse::<ChallengeKind>().is_err());
    }

    #[test]
    fn default_spec_is_valid() {
        for k in ChallengeKind::ALL {
            ChallengeSpec::new(k, 1).validate().unwrap();
        }
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let base = ChallengeSpec::new(ChallengeKind::SegmentedLine, 1);
        let cases = [
            ChallengeSpec { width: 199, ..base.clone() },
            ChallengeSpec { height: 99, ..base.clone() },
            ChallengeSpec { waypoint_count: 3, ..base.clone() },
            ChallengeSpec { stroke_width: 1.5, ..base.clone() },
            ChallengeSpec { distractor_count: CountRange::new(5, 4), ..base.clone() },
            ChallengeSpec { gap_len: LengthRange::new(3.0, 2.0), ..base.clone() },
            ChallengeSpec { segment_len: LengthRange::new(0.0, 0.0), ..base.clone() },
            ChallengeSpec { blur_sigma: -1.0, ..base.clone() },
        ];
        for c in cases {
            assert!(c.validate().is_err(), "{c:?}");
        }
    }

    #[test]
    fn partial_spec_json_fills_defaults() {
        let s: ChallengeSpec = serde_json::from_str(r#"{"kind":"multiline","line_count":3}"#).unwrap();
        assert_eq!(s.kind, ChallengeKind::MultiLineColored);
        assert_eq!(s.line_count, 3);
        assert_eq!(s.width, 400);
    }
}
