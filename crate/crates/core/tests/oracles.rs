//! Independent reference computations checked against the library.

use linecaptcha::challenge::{
    generate_challenge_detailed, generate_line, sample_waypoints, ChallengeKind, ChallengeSpec,
};
use linecaptcha::geometry::{
    eval_cubic, nearest_on_polyline, resample, spline_through, CubicSegment, Point, Polyline, Spline,
};
use linecaptcha::grader::{coverage_metric, precision_metric};
use linecaptcha::raster::{render_line, stroke_segment, RasterImage, Rgb};
use linecaptcha::SeedRng;

fn p(x: f64, y: f64) -> Point<f64> {
    Point::new(x, y)
}

fn de_casteljau(ctrl: [Point<f64>; 4], t: f64) -> Point<f64> {
    let mut pts = ctrl.to_vec();
    while pts.len() > 1 {
        pts = pts.windows(2).map(|w| w[0] + (w[1] - w[0]) * t).collect();
    }
    pts[0]
}

#[test]
fn eval_cubic_matches_de_casteljau() {
    let mut rng = SeedRng::new(101);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let ctrl = [(); 4].map(|_| p(rng.uniform(-500.0, 500.0), rng.uniform(-500.0, 500.0)));
        let seg = CubicSegment::new(ctrl[0], ctrl[1], ctrl[2], ctrl[3]).unwrap();
        for k in 0..=16 {
            let t = if k == 16 { rng.uniform(0.0, 1.0) } else { k as f64 / 15.0 };
            worst = worst.max(eval_cubic(&seg, t).unwrap().dist(de_casteljau(ctrl, t)));
        }
    }
    assert!(worst < 1e-9, "worst deviation {worst}");
}

#[test]
fn collinear_controls_stay_on_axis() {
    let ctrl = [p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0), p(3.0, 0.0)];
    let seg = CubicSegment::new(ctrl[0], ctrl[1], ctrl[2], ctrl[3]).unwrap();
    let got = eval_cubic(&seg, 0.25).unwrap();
    assert_eq!(got.y, 0.0);
    assert!((got.x - de_casteljau(ctrl, 0.25).x).abs() < 1e-12);
}

fn random_walk(rng: &mut SeedRng, n: usize) -> Polyline<f64> {
    let mut pts = vec![p(rng.uniform(100.0, 300.0), rng.uniform(50.0, 150.0))];
    let mut heading = rng.uniform(0.0, std::f64::consts::TAU);
    while pts.len() < n {
        heading += rng.uniform(-0.6, 0.6);
        let step = rng.uniform(1.5, 2.5);
        let last = *pts.last().unwrap();
        pts.push(last + p(heading.cos(), heading.sin()) * step);
    }
    Polyline::new(pts, 2.0).unwrap()
}

/// Minimum distance over about 10^4 points spread along the polyline.
fn dense_scan(q: Point<f64>, line: &Polyline<f64>) -> f64 {
    let per = 10_000 / (line.len() - 1) + 1;
    let mut best = f64::INFINITY;
    for w in line.points().windows(2) {
        for k in 0..=per {
            best = best.min(q.dist(w[0].lerp(w[1], k as f64 / per as f64)));
        }
    }
    best
}

#[test]
fn nearest_matches_dense_scan() {
    let mut rng = SeedRng::new(202);
    for _ in 0..1000 {
        let line = random_walk(&mut rng, 50);
        let q = p(rng.uniform(50.0, 350.0), rng.uniform(0.0, 200.0));
        let (d, s) = nearest_on_polyline(q, &line);
        assert!((d - dense_scan(q, &line)).abs() < 0.05);
        assert!(s >= 0.0 && s <= line.total_length());
        assert!((line.point_at_arc(s).dist(q) - d).abs() < 1e-6);
    }
}

#[test]
fn quarter_circle_length_matches_fine_quadrature() {
    let r = 100.0;
    let k = 0.552_284_749_830_793_4 * r;
    let ctrl = [p(r, 0.0), p(r, k), p(k, r), p(0.0, r)];
    let speed = |t: f64| {
        let u = 1.0 - t;
        ((ctrl[1] - ctrl[0]) * (3.0 * u * u)
            + (ctrl[2] - ctrl[1]) * (6.0 * u * t)
            + (ctrl[3] - ctrl[2]) * (3.0 * t * t))
            .norm()
    };
    let n = 1_000_000;
    let h = 1.0 / n as f64;
    let integral: f64 = (0..n).map(|i| speed((i as f64 + 0.5) * h) * h).sum();
    assert!((integral - std::f64::consts::FRAC_PI_2 * r).abs() / integral < 0.001);

    let seg = CubicSegment::new(ctrl[0], ctrl[1], ctrl[2], ctrl[3]).unwrap();
    let curve = resample(&Spline::new(vec![seg]).unwrap(), 1.0).unwrap();
    let rel = (curve.total_length() - integral).abs() / integral;
    assert!(rel < 0.01, "relative error {rel}");
}

/// Hermite form with tangents 0.5 (w[i+1] - w[i-1]) and mirrored phantom ends.
fn hermite_oracle(w: &[Point<f64>], i: usize, t: f64) -> Point<f64> {
    let n = w.len();
    let at = |j: isize| -> Point<f64> {
        if j < 0 {
            w[0] * 2.0 - w[1]
        } else if j as usize >= n {
            w[n - 1] * 2.0 - w[n - 2]
        } else {
            w[j as usize]
        }
    };
    let i = i as isize;
    let m0 = (at(i + 1) - at(i - 1)) * 0.5;
    let m1 = (at(i + 2) - at(i)) * 0.5;
    let (t2, t3) = (t * t, t * t * t);
    at(i) * (2.0 * t3 - 3.0 * t2 + 1.0)
        + m0 * (t3 - 2.0 * t2 + t)
        + at(i + 1) * (-2.0 * t3 + 3.0 * t2)
        + m1 * (t3 - t2)
}

#[test]
fn spline_matches_direct_hermite_construction() {
    let mut rng = SeedRng::new(303);
    for _ in 0..200 {
        let w: Vec<_> = (0..5).map(|_| p(rng.uniform(0.0, 400.0), rng.uniform(0.0, 200.0))).collect();
        let s = spline_through(&w, 0.5).unwrap();
        for (i, seg) in s.segments().iter().enumerate() {
            assert_eq!(eval_cubic(seg, 0.0).unwrap(), w[i]);
            assert_eq!(eval_cubic(seg, 1.0).unwrap(), w[i + 1]);
            for k in 1..10 {
                let t = k as f64 / 10.0;
                assert!(eval_cubic(seg, t).unwrap().dist(hermite_oracle(&w, i, t)) < 1e-9);
            }
        }
    }
}

fn all_pairs_fraction(a: &[Point<f64>], b: &[Point<f64>], eps: f64) -> f64 {
    let hit = a
        .iter()
        .filter(|x| b.iter().map(|y| x.dist(*y)).fold(f64::INFINITY, f64::min) <= eps)
        .count();
    hit as f64 / a.len() as f64
}

#[test]
fn coverage_and_precision_match_all_pairs() {
    let mut rng = SeedRng::new(404);
    for _ in 0..200 {
        let reference = random_walk(&mut rng, 120);
        let trace = random_walk(&mut rng, 80);
        let eps = rng.uniform(2.0, 40.0);
        assert_eq!(
            coverage_metric(&trace, &reference, eps),
            all_pairs_fraction(reference.points(), trace.points(), eps)
        );
        assert_eq!(
            precision_metric(&trace, &reference, eps),
            all_pairs_fraction(trace.points(), reference.points(), eps)
        );
    }
}

#[test]
fn accepted_lines_pass_pairwise_clearance_brute_force() {
    let spec = ChallengeSpec::new(ChallengeKind::BlurredLine, 0);
    let clearance = 2.0 * spec.stroke_width;
    for seed in 0..1000 {
        let (_, line) = generate_line(&mut SeedRng::new(seed), &spec).unwrap();
        let pts = line.points();
        let arc = line.cumulative_lengths();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                // Samples this far apart along the curve are not neighbours.
                if arc[j] - arc[i] >= 4.0 * clearance + 2.0 * line.spacing() {
                    assert!(pts[i].dist(pts[j]) >= clearance, "seed {seed}: samples {i} and {j}");
                }
            }
        }
    }
}

#[test]
fn rendered_curve_is_covered_by_stroke_pixels() {
    let ink = Rgb::new(200, 10, 10);
    let mut rng = SeedRng::new(505);
    for _ in 0..50 {
        let w = sample_waypoints(&mut rng, 400, 200, 6);
        let line = resample(&spline_through(&w, 0.5).unwrap(), 2.0).unwrap();
        let img = render_line(&RasterImage::new(400, 200, Rgb::WHITE), &line, 3.0, ink);
        for q in line.points() {
            let mut found = false;
            for y in (q.y - 2.0).floor() as i64..=(q.y + 2.0).ceil() as i64 {
                for x in (q.x - 2.0).floor() as i64..=(q.x + 2.0).ceil() as i64 {
                    if x < 0 || y < 0 || x >= 400 || y >= 200 {
                        continue;
                    }
                    let center = p(x as f64 + 0.5, y as f64 + 0.5);
                    // Within 1 px of q, measured from the pixel square.
                    let dx = ((q.x - center.x).abs() - 0.5).max(0.0);
                    let dy = ((q.y - center.y).abs() - 0.5).max(0.0);
                    if dx.hypot(dy) <= 1.0 && img.get(x as u32, y as u32) == ink {
                        found = true;
                    }
                }
            }
            assert!(found, "no stroke pixel near {q:?}");
        }
    }
}

#[test]
fn kept_chord_pixels_lie_in_the_reference_tube() {
    for seed in 0..20 {
        let spec = ChallengeSpec::new(ChallengeKind::SegmentedLine, seed);
        let g = generate_challenge_detailed(&spec).unwrap();
        let mut canvas = RasterImage::new(spec.width, spec.height, Rgb::WHITE);
        for c in &g.layers.kept {
            stroke_segment(&mut canvas, c.a, c.b, spec.stroke_width, Rgb::BLACK);
        }
        for y in 0..spec.height {
            for x in 0..spec.width {
                if canvas.get(x, y) != Rgb::BLACK {
                    continue;
                }
                let q = p(f64::from(x) + 0.5, f64::from(y) + 0.5);
                let d = g
                    .truth
                    .reference
                    .points()
                    .iter()
                    .map(|r| r.dist(q))
                    .fold(f64::INFINITY, f64::min);
                assert!(d <= 10.0, "seed {seed}: pixel ({x}, {y}) at {d}");
            }
        }
    }
}
