use linecaptcha::challenge::sample_waypoints;
use linecaptcha::geometry::{
    eval_cubic, nearest_on_polyline, resample, spline_through, CubicSegment, Point, Polyline,
};
use linecaptcha::grader::{grade_against, GradingPolicy, Trace, TracePoint};
use linecaptcha::SeedRng;
use proptest::prelude::*;

fn point() -> impl Strategy<Value = Point<f64>> {
    (-1000.0..1000.0f64, -1000.0..1000.0f64).prop_map(|(x, y)| Point::new(x, y))
}

fn segment() -> impl Strategy<Value = CubicSegment<f64>> {
    (point(), point(), point(), point()).prop_map(|(a, b, c, d)| CubicSegment::new(a, b, c, d).unwrap())
}

/// A line shaped like generated challenge lines.
fn reference_line(seed: u64) -> Polyline<f64> {
    let w = sample_waypoints(&mut SeedRng::new(seed), 400, 200, 6);
    resample(&spline_through(&w, 0.5).unwrap(), 2.0).unwrap()
}

/// Reference points perturbed by noise and a constant offset, with timestamps.
fn noisy_trace(reference: &Polyline<f64>, seed: u64, sigma: f64, offset: (f64, f64)) -> Trace<f64> {
    let mut rng = SeedRng::new(seed);
    let pts: Vec<_> = reference
        .points()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let x = (p.x + offset.0 + rng.gaussian(sigma)).clamp(0.0, 400.0);
            let y = (p.y + offset.1 + rng.gaussian(sigma)).clamp(0.0, 200.0);
            TracePoint::new(x, y, i as f64 * 9.0)
        })
        .collect();
    Trace::new(pts).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn cubic_endpoints_are_exact(seg in segment()) {
        let [p0, _, _, p3] = seg.controls();
        prop_assert_eq!(eval_cubic(&seg, 0.0).unwrap(), p0);
        prop_assert_eq!(eval_cubic(&seg, 1.0).unwrap(), p3);
    }

    #[test]
    fn cubic_stays_in_control_box(seg in segment(), t in 0.0..=1.0f64) {
        let c = seg.controls();
        let q = eval_cubic(&seg, t).unwrap();
        let slack = 1e-9;
        let (lo_x, hi_x) = c.iter().fold((f64::MAX, f64::MIN), |(a, b), p| (a.min(p.x), b.max(p.x)));
        let (lo_y, hi_y) = c.iter().fold((f64::MAX, f64::MIN), |(a, b), p| (a.min(p.y), b.max(p.y)));
        prop_assert!(q.x >= lo_x - slack && q.x <= hi_x + slack);
        prop_assert!(q.y >= lo_y - slack && q.y <= hi_y + slack);
    }

    #[test]
    fn cubic_rejects_out_of_range_parameter(seg in segment(), t in prop_oneof![-10.0..-1e-9f64, 1.0 + 1e-9..10.0f64]) {
        prop_assert!(eval_cubic(&seg, t).is_err());
    }

    #[test]
    fn resample_advances_strictly_along_source(seed in any::<u64>(), spacing in 1.0..6.0f64) {
        let w = sample_waypoints(&mut SeedRng::new(seed), 400, 200, 6);
        let spline = spline_through(&w, 0.5).unwrap();
        let dense = resample(&spline, 0.25).unwrap();
        let line = resample(&spline, spacing).unwrap();
        prop_assert!(line.has_regular_spacing());
        prop_assert_eq!(line.first(), spline.start());
        prop_assert_eq!(line.last(), spline.end());
        let arcs: Vec<f64> = line.points().iter().map(|p| nearest_on_polyline(*p, &dense).1).collect();
        prop_assert!(arcs.windows(2).all(|a| a[1] > a[0]));
        for q in line.points() {
            prop_assert!(nearest_on_polyline(*q, &dense).0 < 0.1);
        }
    }

    #[test]
    fn resample_count_is_idempotent(seed in any::<u64>(), spacing in 1.0..6.0f64) {
        let w = sample_waypoints(&mut SeedRng::new(seed), 400, 200, 5);
        let once = resample(&spline_through(&w, 0.5).unwrap(), spacing).unwrap();
        let twice = resample(&once, spacing).unwrap();
        prop_assert_eq!(once.len(), twice.len());
    }

    #[test]
    fn resample_is_pure(seed in any::<u64>()) {
        let w = sample_waypoints(&mut SeedRng::new(seed), 400, 200, 6);
        let s = spline_through(&w, 0.5).unwrap();
        prop_assert_eq!(resample(&s, 2.0).unwrap(), resample(&s, 2.0).unwrap());
    }

    #[test]
    fn nearest_is_symmetric_under_reversal(seed in any::<u64>(), x in 0.0..400.0f64, y in 0.0..200.0f64) {
        let line = reference_line(seed);
        let rev = line.reversed();
        let q = Point::new(x, y);
        let (d, s) = nearest_on_polyline(q, &line);
        let (dr, sr) = nearest_on_polyline(q, &rev);
        prop_assert!((d - dr).abs() < 1e-9);
        // Equidistant far-apart feet are possible but have measure zero.
        prop_assert!((s - (line.total_length() - sr)).abs() <= line.spacing());
    }

    #[test]
    fn grade_is_invariant_under_reversal(
        seed in any::<u64>(),
        sigma in 0.0..12.0f64,
        dx in -15.0..15.0f64,
        dy in -15.0..15.0f64,
    ) {
        let reference = reference_line(seed);
        let trace = noisy_trace(&reference, seed ^ 0x55, sigma, (dx, dy));
        let policy = GradingPolicy::default();
        let fwd = grade_against(&trace, &reference, 400, 200, &policy);
        let back = grade_against(&trace.reversed(), &reference, 400, 200, &policy);
        prop_assert_eq!(fwd, back);
        prop_assert_eq!(fwd.pass, policy.passes(fwd.coverage, fwd.precision, fwd.monotonicity));
    }

    #[test]
    fn larger_epsilon_never_turns_pass_into_fail(
        seed in any::<u64>(),
        sigma in 0.0..12.0f64,
        dx in -15.0..15.0f64,
        e1 in 1.0..30.0f64,
        extra in 0.0..30.0f64,
    ) {
        let reference = reference_line(seed);
        let trace = noisy_trace(&reference, seed, sigma, (dx, 0.0));
        let base = GradingPolicy::default();
        let lo = grade_against(&trace, &reference, 400, 200, &base.with_epsilon(e1));
        let hi = grade_against(&trace, &reference, 400, 200, &base.with_epsilon(e1 + extra));
        prop_assert!(hi.coverage >= lo.coverage);
        prop_assert!(hi.precision >= lo.precision);
        prop_assert_eq!(hi.monotonicity, lo.monotonicity);
        prop_assert!(!lo.pass || hi.pass);
    }

    #[test]
    fn timestamps_do_not_change_metrics(seed in any::<u64>(), sigma in 0.0..8.0f64, scale in 0.1..10.0f64) {
        let reference = reference_line(seed);
        let trace = noisy_trace(&reference, seed, sigma, (0.0, 0.0));
        let stretched = Trace::new(
            trace.points().iter().map(|p| TracePoint::new(p.x, p.y, p.t * scale)).collect(),
        )
        .unwrap();
        let policy = GradingPolicy::default();
        prop_assert_eq!(
            grade_against(&trace, &reference, 400, 200, &policy),
            grade_against(&stretched, &reference, 400, 200, &policy)
        );
    }
}
