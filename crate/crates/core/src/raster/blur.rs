use super::{RasterImage, Rgb};
use crate::error::{Error, Result};

/// Normalized 1D Gaussian kernel of radius `ceil(3 * sigma)`.
pub fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as i64;
    let mut k: Vec<f64> = (-radius..=radius)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = k.iter().sum();
    k.iter_mut().for_each(|w| *w /= sum);
    k
}

/// Separable Gaussian blur with clamped edges. `sigma == 0` returns the
/// image unchanged.
pub fn apply_blur(image: &RasterImage, sigma: f64) -> Result<RasterImage> {
    if sigma.is_nan() || sigma < 0.0 {
        return Err(Error::invalid(format!("blur sigma must be >= 0, got {sigma}")));
    }
    if sigma == 0.0 {
        return Ok(image.clone());
    }
    let kernel = gaussian_kernel(sigma);
    let radius = (kernel.len() / 2) as i64;
    let (w, h) = (image.width() as i64, image.height() as i64);
    let src: Vec<[f64; 3]> = image
        .pixels()
        .iter()
        .map(|p| [f64::from(p.r), f64::from(p.g), f64::from(p.b)])
        .collect();

    let idx = |x: i64, y: i64| (y * w + x) as usize;
    let mut tmp = vec![[0.0; 3]; src.len()];
    for y in 0..h {
        for x in 0..w {
            let mut acc = [0.0; 3];
            for (k, wk) in kernel.iter().enumerate() {
                let sx = (x + k as i64 - radius).clamp(0, w - 1);
                let s = src[idx(sx, y)];
                for c in 0..3 {
                    acc[c] += wk * s[c];
                }
            }
            tmp[idx(x, y)] = acc;
        }
    }

    let q = |v: f64| v.round().clamp(0.0, 255.0) as u8;
    let mut out = Vec::with_capacity(src.len());
    for y in 0..h {
        for x in 0..w {
            let mut acc = [0.0; 3];
            for (k, wk) in kernel.iter().enumerate() {
                let sy = (y + k as i64 - radius).clamp(0, h - 1);
                let s = tmp[idx(x, sy)];
                for c in 0..3 {
                    acc[c] += wk * s[c];
                }
            }
            out.push(Rgb::new(q(acc[0]), q(acc[1]), q(acc[2])));
        }
    }
    RasterImage::from_pixels(image.width(), image.height(), out)
}
