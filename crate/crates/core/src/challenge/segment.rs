use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{ChallengeSpec, MARGIN};
use crate::geometry::{nearest_on_polyline, Point, Polyline};
use crate::raster::{Chord, Rgb};
use crate::rng::SeedRng;

/// Minimum distance from a distractor midpoint to the reference line.
pub const DISTRACTOR_CLEARANCE: f64 = 10.0;

/// Placement attempts per distractor before it is skipped.
pub const DISTRACTOR_ATTEMPTS: usize = 50;

/// Colors shared by distractors and line chords in the segmented kinds.
/// Distinct after quantizing each channel to 16 levels.
pub const PALETTE: [Rgb; 8] = [
    Rgb::new(214, 39, 40),
    Rgb::new(44, 160, 44),
    Rgb::new(31, 80, 220),
    Rgb::new(240, 140, 14),
    Rgb::new(148, 60, 200),
    Rgb::new(23, 174, 190),
    Rgb::new(220, 70, 160),
    Rgb::new(120, 90, 45),
];

/// Light neutral base for the segmented kinds.
pub const SEGMENTED_BASE: Rgb = Rgb::new(236, 234, 226);

/// Arc-length interval `[start, end]` along a polyline.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcInterval {
    pub start: f64,
    pub end: f64,
}

impl ArcInterval {
    pub fn len(&self) -> f64 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }
}

/// Kept chords with the kept and gap intervals that produced them.
#[derive(Clone, Debug, PartialEq)]
pub struct Segmentation {
    pub kept: Vec<Chord>,
    pub kept_intervals: Vec<ArcInterval>,
    pub gaps: Vec<ArcInterval>,
}

impl Segmentation {
    /// Fraction of the line length that is drawn.
    pub fn kept_fraction(&self) -> f64 {
        let kept: f64 = self.kept_intervals.iter().map(ArcInterval::len).sum();
        let gaps: f64 = self.gaps.iter().map(ArcInterval::len).sum();
        kept / (kept + gaps)
    }
}

/// Splits `line` into alternating kept and gap intervals starting with a
/// kept one. Each kept interval becomes a straight chord between the curve
/// points at its ends. Zero-length gaps are not recorded.
pub fn segment_line(line: &Polyline<f64>, rng: &mut SeedRng, spec: &ChallengeSpec) -> Segmentation {
    let total = line.total_length();
    let mut kept = Vec::new();
    let mut kept_intervals = Vec::new();
    let mut gaps = Vec::new();
    let mut s = 0.0;
    while s < total {
        let end = (s + rng.uniform(spec.segment_len.min, spec.segment_len.max)).min(total);
        kept_intervals.push(ArcInterval { start: s, end });
        kept.push(Chord::new(line.point_at_arc(s), line.point_at_arc(end)));
        s = end;
        if s >= total {
            break;
        }
        let end = (s + rng.uniform(spec.gap_len.min, spec.gap_len.max)).min(total);
        if end > s {
            gaps.push(ArcInterval { start: s, end });
        }
        s = end;
    }
    Segmentation {
        kept,
        kept_intervals,
        gaps,
    }
}

/// Distractor chords plus how many were requested.
#[derive(Clone, Debug, PartialEq)]
pub struct Distractors {
    pub chords: Vec<Chord>,
    pub requested: usize,
}

/// Chords with the real segments' length distribution, uniform
/// orientation and midpoints at least [`DISTRACTOR_CLEARANCE`] from the
/// reference. Placements that keep failing are dropped.
pub fn generate_distractors(rng: &mut SeedRng, spec: &ChallengeSpec, reference: &Polyline<f64>) -> Distractors {
    let requested = rng.int_inclusive(spec.distractor_count.min, spec.distractor_count.max) as usize;
    let (w, h) = (f64::from(spec.width), f64::from(spec.height));
    let mut chords = Vec::with_capacity(requested);
    for _ in 0..requested {
        for _ in 0..DISTRACTOR_ATTEMPTS {
            let len = rng.uniform(spec.segment_len.min, spec.segment_len.max);
            let theta = rng.uniform(0.0, PI);
            let half = Point::new(theta.cos(), theta.sin()) * (0.5 * len);
            let mx = rng.uniform(MARGIN + half.x.abs(), w - MARGIN - half.x.abs());
            let my = rng.uniform(MARGIN + half.y.abs(), h - MARGIN - half.y.abs());
            let mid = Point::new(mx, my);
            if nearest_on_polyline(mid, reference).0 >= DISTRACTOR_CLEARANCE {
                chords.push(Chord::new(mid - half, mid + half));
                break;
            }
        }
    }
    Distractors { chords, requested }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::challenge::{ChallengeKind, CountRange, LengthRange};
    use crate::geometry::resample;

    fn curve(len: f64) -> Polyline<f64> {
        // Gentle arc of roughly the requested length.
        let pts: Vec<_> = (0..=200)
            .map(|i| {
                let t = i as f64 / 200.0;
                Point::new(50.0 + t * len, 100.0 + 20.0 * (t * PI).sin())
            })
            .collect();
        resample(&Polyline::new(pts, 1.0).unwrap(), 2.0).unwrap()
    }

    #[test]
    fn zero_gaps_cover_the_curve() {
        let spec = ChallengeSpec {
            gap_len: LengthRange::new(0.0, 0.0),
            ..ChallengeSpec::new(ChallengeKind::SegmentedLine, 0)
        };
        let line = curve(300.0);
        let seg = segment_line(&line, &mut SeedRng::new(3), &spec);
        assert!(seg.gaps.is_empty());
        let kept: f64 = seg.kept_intervals.iter().map(ArcInterval::len).sum();
        assert!((kept - line.total_length()).abs() < 1e-9);
        assert!(seg.kept_intervals.windows(2).all(|w| w[0].end == w[1].start));
    }

    #[test]
    fn intervals_tile_the_curve() {
        let spec = ChallengeSpec::new(ChallengeKind::SegmentedLine, 0);
        let line = curve(300.0);
        for seed in 0..100 {
            let seg = segment_line(&line, &mut SeedRng::new(seed), &spec);
            let kept: f64 = seg.kept_intervals.iter().map(ArcInterval::len).sum();
            let gaps: f64 = seg.gaps.iter().map(ArcInterval::len).sum();
            assert!((kept + gaps - line.total_length()).abs() <= 1.0);
            for (c, iv) in seg.kept.iter().zip(&seg.kept_intervals) {
                assert!(nearest_on_polyline(c.a, &line).0 < 0.5);
                assert!(nearest_on_polyline(c.b, &line).0 < 0.5);
                assert!(iv.len() <= 24.0 + 1e-9);
            }
        }
    }

    #[test]
    fn mean_kept_fraction_in_expected_band() {
        let spec = ChallengeSpec::new(ChallengeKind::SegmentedLine, 0);
        let line = curve(300.0);
        let mean = (0..1000)
            .map(|seed| segment_line(&line, &mut SeedRng::new(seed), &spec).kept_fraction())
            .sum::<f64>()
            / 1000.0;
        assert!(mean >= 12.0 / 26.0 && mean <= 24.0 / 30.0, "{mean}");
    }

    #[test]
    fn zero_distractors() {
        let spec = ChallengeSpec {
            distractor_count: CountRange::new(0, 0),
            ..ChallengeSpec::new(ChallengeKind::SegmentedLine, 0)
        };
        let d = generate_distractors(&mut SeedRng::new(1), &spec, &curve(300.0));
        assert!(d.chords.is_empty());
        assert_eq!(d.requested, 0);
    }

    #[test]
    fn distractors_keep_clear_of_the_line() {
        let spec = ChallengeSpec::new(ChallengeKind::SegmentedLine, 0);
        let line = curve(300.0);
        for seed in 0..20 {
            let d = generate_distractors(&mut SeedRng::new(seed), &spec, &line);
            assert!(d.chords.len() <= d.requested);
            assert!((120..=200).contains(&d.requested));
            for c in &d.chords {
                assert!(nearest_on_polyline(c.midpoint(), &line).0 >= DISTRACTOR_CLEARANCE);
                for p in [c.a, c.b] {
                    assert!(p.x >= MARGIN - 1e-9 && p.x <= 390.0 + 1e-9);
                    assert!(p.y >= MARGIN - 1e-9 && p.y <= 190.0 + 1e-9);
                }
            }
        }
    }

    #[test]
    fn distractor_lengths_follow_segment_range() {
        let spec = ChallengeSpec {
            distractor_count: CountRange::new(200, 200),
            ..ChallengeSpec::new(ChallengeKind::SegmentedLine, 0)
        };
        let line = curve(300.0);
        let mut lens = Vec::new();
        let mut seed = 0;
        while lens.len() < 10_000 {
            let d = generate_distractors(&mut SeedRng::new(seed), &spec, &line);
            lens.extend(d.chords.iter().map(Chord::length));
            seed += 1;
        }
        let mean = lens.iter().sum::<f64>() / lens.len() as f64;
        assert!(lens.iter().all(|&l| (12.0 - 1e-9..=24.0 + 1e-9).contains(&l)));
        assert!((mean - 18.0).abs() <= 0.05 * 18.0, "{mean}");
    }

    #[test]
    fn palette_is_distinct_after_quantization() {
        let q = |c: Rgb| (c.r >> 4, c.g >> 4, c.b >> 4);
        for (i, a) in PALETTE.iter().enumerate() {
            assert_ne!(q(*a), q(SEGMENTED_BASE));
            for b in &PALETTE[i + 1..] {
                assert_ne!(q(*a), q(*b));
            }
        }
    }
}
