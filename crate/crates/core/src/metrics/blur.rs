//! Separable Gaussian blur with reflecting boundaries.

use crate::image::GrayImage;

/// Reflect an out-of-range index back into `0..n` (symmetric padding that
/// repeats the edge sample: ..., 1, 0 | 0, 1, ..., n-1 | n-1, n-2, ...).
fn reflect(mut i: i64, n: i64) -> usize {
    loop {
        if i < 0 {
            i = -i - 1;
        } else if i >= n {
            i = 2 * n - i - 1;
        } else {
            return i as usize;
        }
    }
}

fn kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as i64;
    let mut k: Vec<f64> = (-radius..=radius)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = k.iter().sum();
    for v in &mut k {
        *v /= sum;
    }
    k
}

/// Convolve with a normalized Gaussian of the given standard deviation.
/// Kernel radius is `ceil(3 * sigma)`; boundaries reflect.
pub fn gaussian_blur(image: &GrayImage, sigma: f64) -> GrayImage {
    assert!(sigma > 0.0, "sigma must be positive");
    let k = kernel(sigma);
    let radius = (k.len() / 2) as i64;
    let (w, h) = (image.width() as i64, image.height() as i64);

    // horizontal pass
    let mut tmp = vec![0.0f64; image.area()];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (t, kv) in k.iter().enumerate() {
                let sx = reflect(x + t as i64 - radius, w);
                acc += kv * image.get(sx as u32, y as u32);
            }
            tmp[(y * w + x) as usize] = acc;
        }
    }
    // vertical pass
    let mut out = vec![0.0f64; image.area()];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (t, kv) in k.iter().enumerate() {
                let sy = reflect(y + t as i64 - radius, h);
                acc += kv * tmp[(sy as i64 * w + x) as usize];
            }
            out[(y * w + x) as usize] = acc;
        }
    }
    GrayImage::new(image.width(), image.height(), out.iter().map(|v| v.max(0.0)).collect())
        .expect("blur preserves image geometry")
}
