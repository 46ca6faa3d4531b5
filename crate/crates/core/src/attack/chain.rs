//! Color-separation attack.
//!
//! Pixels are quantized to 16 levels per channel, split into 8-connected
//! components of equal color, and thin straight components are kept as
//! chords. Chords of one color class are then chained end to end, turning
//! at most 45 degrees per link, and the longest chain is emitted as a trace.

use std::collections::{HashMap, VecDeque};

use crate::challenge::InstructionHint;
use crate::geometry::Point;
use crate::grader::Trace;
use crate::raster::{RasterImage, Rgb};

/// Largest gap bridged between consecutive chords.
pub const MAX_LINK_GAP: f64 = 20.0;
/// Largest direction change per link, in degrees.
pub const MAX_TURN_DEG: f64 = 45.0;
/// Thickest component still treated as a stroke (std. dev. across it).
const MAX_MINOR_STD: f64 = 1.6;
const MIN_CHORD_LEN: f64 = 5.0;
const MIN_PIXELS: usize = 6;
const SAMPLE_STEP: f64 = 2.0;

/// Straight, thin connected component.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComponentChord {
    pub class: u16,
    pub a: Point<f64>,
    pub b: Point<f64>,
}

impl ComponentChord {
    fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    /// Start, end and unit direction when walked in the given orientation.
    fn oriented(&self, flipped: bool) -> (Point<f64>, Point<f64>, Point<f64>) {
        let (s, e) = if flipped { (self.b, self.a) } else { (self.a, self.b) };
        (s, e, (e - s).normalized().unwrap_or(Point::new(1.0, 0.0)))
    }
}

fn quantize(c: Rgb) -> u16 {
    (u16::from(c.r >> 4) << 8) | (u16::from(c.g >> 4) << 4) | u16::from(c.b >> 4)
}

fn class_color(class: u16) -> Rgb {
    let lvl = |v: u16| ((v & 0xf) << 4 | 0x8) as u8;
    Rgb::new(lvl(class >> 8), lvl(class >> 4), lvl(class))
}

/// Extracts chord-like components from the quantized image.
pub fn extract_chords(image: &RasterImage) -> Vec<ComponentChord> {
    let (w, h) = (image.width() as usize, image.height() as usize);
    let keys: Vec<u16> = image.pixels().iter().map(|&c| quantize(c)).collect();
    let mut seen = vec![false; keys.len()];
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    let mut members = Vec::new();

    for start in 0..keys.len() {
        if seen[start] {
            continue;
        }
        let key = keys[start];
        seen[start] = true;
        queue.push_back(start);
        members.clear();
        while let Some(i) = queue.pop_front() {
            members.push(i);
            let (x, y) = ((i % w) as i64, (i / w) as i64);
            for dy in -1..=1 {
                for dx in -1..=1 {
                    let (nx, ny) = (x + dx, y + dy);
                    if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                        continue;
                    }
                    let j = ny as usize * w + nx as usize;
                    if !seen[j] && keys[j] == key {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
        }
        if let Some(chord) = fit_chord(&members, w, key) {
            out.push(chord);
        }
    }
    out
}

/// Principal-axis fit of a pixel set; `None` unless it is thin and long.
fn fit_chord(members: &[usize], w: usize, class: u16) -> Option<ComponentChord> {
    if members.len() < MIN_PIXELS {
        return None;
    }
    let n = members.len() as f64;
    let coord = |i: usize| ((i % w) as f64 + 0.5, (i / w) as f64 + 0.5);
    let (mut sx, mut sy) = (0.0, 0.0);
    for &i in members {
        let (x, y) = coord(i);
        sx += x;
        sy += y;
    }
    let (cx, cy) = (sx / n, sy / n);
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &i in members {
        let (x, y) = coord(i);
        let (dx, dy) = (x - cx, y - cy);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let (sxx, sxy, syy) = (sxx / n, sxy / n, syy / n);
    let tr = sxx + syy;
    let det = sxx * syy - sxy * sxy;
    let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
    let minor = (tr / 2.0 - disc).max(0.0);
    if minor.sqrt() > MAX_MINOR_STD {
        return None;
    }
    let angle = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let axis = Point::new(angle.cos(), angle.sin());
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &i in members {
        let (x, y) = coord(i);
        let s = (x - cx) * axis.x + (y - cy) * axis.y;
        lo = lo.min(s);
        hi = hi.max(s);
    }
    if hi - lo < MIN_CHORD_LEN {
        return None;
    }
    let c = Point::new(cx, cy);
    Some(ComponentChord {
        class,
        a: c + axis * lo,
        b: c + axis * hi,
    })
}

fn angle_between(u: Point<f64>, v: Point<f64>) -> f64 {
    u.dot(v).clamp(-1.0, 1.0).acos().to_degrees()
}

/// Greedy longest chain within one color class. Returns the chain as
/// `(chord index, flipped)` pairs together with its length.
fn longest_chain(chords: &[ComponentChord]) -> (Vec<(usize, bool)>, f64) {
    let n = chords.len();
    // Candidate successors of every (chord, orientation), nearest first.
    let mut successors: Vec<Vec<(f64, usize, bool)>> = vec![Vec::new(); 2 * n];
    for i in 0..n {
        for fi in [false, true] {
            let (_, tail, dir) = chords[i].oriented(fi);
            let list = &mut successors[2 * i + usize::from(fi)];
            for j in (0..n).filter(|&j| j != i) {
                for fj in [false, true] {
                    let (head, _, next_dir) = chords[j].oriented(fj);
                    let gap = tail.dist(head);
                    if gap > MAX_LINK_GAP || angle_between(dir, next_dir) > MAX_TURN_DEG {
                        continue;
                    }
                    if gap > 1.0 && angle_between(dir, (head - tail) * gap.recip()) > MAX_TURN_DEG {
                        continue;
                    }
                    list.push((gap, j, fj));
                }
            }
            list.sort_by(|a, b| a.0.total_cmp(&b.0));
        }
    }

    let mut best: (Vec<(usize, bool)>, f64) = (Vec::new(), 0.0);
    let mut used = vec![false; n];
    for start in 0..n {
        for flipped in [false, true] {
            used.iter_mut().for_each(|u| *u = false);
            used[start] = true;
            let mut chain = vec![(start, flipped)];
            let mut length = chords[start].length();
            let (mut cur, mut cur_f) = (start, flipped);
            while let Some(&(gap, j, fj)) = successors[2 * cur + usize::from(cur_f)]
                .iter()
                .find(|(_, j, _)| !used[*j])
            {
                used[j] = true;
                chain.push((j, fj));
                length += gap + chords[j].length();
                (cur, cur_f) = (j, fj);
            }
            if length > best.1 {
                best = (chain, length);
            }
        }
    }
    best
}

/// Runs the attack. `None` means no chain was found.
pub fn color_cluster_chain(image: &RasterImage, instruction: &InstructionHint) -> Option<Trace<f64>> {
    let chords = extract_chords(image);
    let mut classes: HashMap<u16, Vec<ComponentChord>> = HashMap::new();
    for c in chords {
        classes.entry(c.class).or_default().push(c);
    }
    if let InstructionHint::TraceColor { rgb } = instruction {
        let target = *classes
            .keys()
            .min_by_key(|k| (class_color(**k).dist_sq(*rgb), **k))?;
        classes.retain(|k, _| *k == target);
    }

    // Iterate classes in a fixed order so ties resolve deterministically.
    let mut keys: Vec<u16> = classes.keys().copied().collect();
    keys.sort_unstable();
    let mut best: Option<(Vec<Point<f64>>, f64)> = None;
    for key in keys {
        let members = &classes[&key];
        let (chain, length) = longest_chain(members);
        if chain.is_empty() || best.as_ref().is_some_and(|b| b.1 >= length) {
            continue;
        }
        let mut pts = Vec::new();
        for (i, flipped) in chain {
            let (s, e, _) = members[i].oriented(flipped);
            let steps = (s.dist(e) / SAMPLE_STEP).ceil().max(1.0) as usize;
            pts.extend((0..=steps).map(|k| s.lerp(e, k as f64 / steps as f64)));
        }
        best = Some((pts, length));
    }
    let (pts, _) = best?;
    Trace::from_positions(&pts, 8.0).ok()
}
