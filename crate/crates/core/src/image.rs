//! Grayscale images and binary masks, with PNG/PGM loading.
//!
//! Pixel values keep their native integer range (0..=255 for 8-bit sources,
//! 0..=65535 for 16-bit) as `f64`. Masks treat any nonzero pixel as
//! foreground.

use std::path::Path;

use crate::{Error, Result};

/// Row-major grayscale image with finite, nonnegative intensities.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: u32,
    height: u32,
    pixels: Vec<f64>,
}

impl GrayImage {
    pub fn new(width: u32, height: u32, pixels: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage("zero-sized image".into()));
        }
        if pixels.len() != (width as usize) * (height as usize) {
            return Err(Error::InvalidImage(format!(
                "{}x{} image needs {} pixels, got {}",
                width,
                height,
                (width as usize) * (height as usize),
                pixels.len()
            )));
        }
        if let Some(p) = pixels.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidImage(format!("invalid pixel value {p}")));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Constant-intensity image.
    pub fn filled(width: u32, height: u32, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; (width as usize) * (height as usize)])
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn area(&self) -> usize {
        (self.width as usize) * (self.height as usize)
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn get(&self, x: u32, y: u32) -> f64 {
        self.pixels[(y as usize) * (self.width as usize) + x as usize]
    }

    pub fn set(&mut self, x: u32, y: u32, value: f64) {
        self.pixels[(y as usize) * (self.width as usize) + x as usize] = value;
    }

    pub fn crop(&self, x: u32, y: u32, w: u32, h: u32) -> Result<Self> {
        if x + w > self.width || y + h > self.height {
            return Err(Error::InvalidImage(format!(
                "crop {w}x{h}+{x}+{y} exceeds {}x{}",
                self.width, self.height
            )));
        }
        let mut pixels = Vec::with_capacity((w as usize) * (h as usize));
        for row in y..y + h {
            let start = (row as usize) * (self.width as usize) + x as usize;
            pixels.extend_from_slice(&self.pixels[start..start + w as usize]);
        }
        GrayImage::new(w, h, pixels)
    }

    /// Load an 8/16-bit grayscale PNG or PGM, keeping native intensity range.
    pub fn open<P: AsRef<Path>>(path: P) -> Result<Self> {
        let path = path.as_ref();
        let dynamic = image::open(path)?;
        use image::DynamicImage::*;
        let (w, h, pixels) = match &dynamic {
            ImageLuma8(b) => (b.width(), b.height(), b.pixels().map(|p| f64::from(p.0[0])).collect()),
            ImageLumaA8(b) => (b.width(), b.height(), b.pixels().map(|p| f64::from(p.0[0])).collect()),
            ImageLuma16(b) => (b.width(), b.height(), b.pixels().map(|p| f64::from(p.0[0])).collect()),
            ImageLumaA16(b) => (b.width(), b.height(), b.pixels().map(|p| f64::from(p.0[0])).collect()),
            other => {
                return Err(Error::UnsupportedColor {
                    path: path.display().to_string(),
                    color: format!("{:?}", other.color()),
                })
            }
        };
        GrayImage::new(w, h, pixels)
    }
}

/// Row-major binary mask; `true` marks vessel/foreground pixels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: u32,
    height: u32,
    bits: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: u32, height: u32, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != (width as usize) * (height as usize) {
            return Err(Error::InvalidImage(format!(
                "{}x{} mask needs {} bits, got {}",
                width,
                height,
                (width as usize) * (height as usize),
                bits.len()
            )));
        }
        Ok(Self {
            width,
            height,
            bits,
        })
    }

    pub fn filled(width: u32, height: u32, value: bool) -> Self {
        Self {
            width,
            height,
            bits: vec![value; (width as usize) * (height as usize)],
        }
    }

    /// Build from pixel coordinates set to foreground.
    pub fn from_points(width: u32, height: u32, points: &[(u32, u32)]) -> Self {
        let mut mask = Self::filled(width, height, false);
        for &(x, y) in points {
            mask.set(x, y, true);
        }
        mask
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, x: u32, y: u32) -> bool {
        self.bits[(y as usize) * (self.width as usize) + x as usize]
    }

    pub fn set(&mut self, x: u32, y: u32, value: bool) {
        self.bits[(y as usize) * (self.width as usize) + x as usize] = value;
    }

    pub fn count_foreground(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn crop(&self, x: u32, y: u32, w: u32, h: u32) -> Result<Self> {
        if x + w > self.width || y + h > self.height {
            return Err(Error::InvalidImage(format!(
                "crop {w}x{h}+{x}+{y} exceeds {}x{}",
                self.width, self.height
            )));
        }
        let mut bits = Vec::with_capacity((w as usize) * (h as usize));
        for row in y..y + h {
            let start = (row as usize) * (self.width as usize) + x as usize;
            bits.extend_from_slice(&self.bits[start..start + w as usize]);
        }
        BinaryMask::new(w, h, bits)
    }

    /// Load a mask image; any nonzero pixel (in any supported color type)
    /// becomes foreground.
    pub fn open<P: AsRef<Path>>(path: P) -> Result<Self> {
        let dynamic = image::open(path.as_ref())?;
        let luma = dynamic.to_luma16();
        let bits = luma.pixels().map(|p| p.0[0] != 0).collect();
        BinaryMask::new(luma.width(), luma.height(), bits)
    }
}

/// Require matching dimensions between an image and its mask.
pub fn check_dims(image: &GrayImage, mask: &BinaryMask) -> Result<()> {
    if image.width() != mask.width() || image.height() != mask.height() {
        return Err(Error::InvalidImage(format!(
            "image {}x{} and mask {}x{} differ in size",
            image.width(),
            image.height(),
            mask.width(),
            mask.height()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_validate() {
        assert!(GrayImage::new(2, 2, vec![0.0; 3]).is_err());
        assert!(GrayImage::new(2, 2, vec![0.0, 1.0, 2.0, f64::NAN]).is_err());
        assert!(GrayImage::new(2, 2, vec![0.0, 1.0, 2.0, -1.0]).is_err());
        assert!(GrayImage::new(0, 2, vec![]).is_err());
        assert!(BinaryMask::new(2, 2, vec![true; 5]).is_err());
    }

    #[test]
    fn crop_window() {
        let mut img = GrayImage::filled(4, 3, 0.0).unwrap();
        img.set(2, 1, 9.0);
        let c = img.crop(1, 1, 3, 2).unwrap();
        assert_eq!(c.width(), 3);
        assert_eq!(c.height(), 2);
        assert_eq!(c.get(1, 0), 9.0);
        assert!(img.crop(2, 2, 3, 2).is_err());
    }

    #[test]
    fn png_roundtrip_8_and_16_bit() {
        let dir = tempfile::tempdir().unwrap();
        let p8 = dir.path().join("g8.png");
        let p16 = dir.path().join("g16.png");
        let buf8 = image::GrayImage::from_fn(5, 4, |x, y| image::Luma([(x * 10 + y) as u8]));
        buf8.save(&p8).unwrap();
        let buf16 = image::ImageBuffer::<image::Luma<u16>, Vec<u16>>::from_fn(3, 3, |x, y| {
            image::Luma([(x * 1000 + y * 7) as u16])
        });
        buf16.save(&p16).unwrap();

        let g8 = GrayImage::open(&p8).unwrap();
        assert_eq!(g8.get(3, 2), 32.0);
        let g16 = GrayImage::open(&p16).unwrap();
        assert_eq!(g16.get(2, 1), 2007.0);
    }

    #[test]
    fn pgm_loads() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("img.pgm");
        let buf = image::GrayImage::from_fn(4, 2, |x, y| image::Luma([(x + 4 * y) as u8 * 10]));
        buf.save(&path).unwrap();
        let g = GrayImage::open(&path).unwrap();
        assert_eq!(g.get(1, 1), 50.0);
    }

    #[test]
    fn rgb_image_is_rejected_for_gray() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rgb.png");
        let buf = image::RgbImage::from_pixel(2, 2, image::Rgb([1, 2, 3]));
        buf.save(&path).unwrap();
        assert!(matches!(
            GrayImage::open(&path).unwrap_err(),
            Error::UnsupportedColor { .. }
        ));
        // masks are lenient: nonzero luma becomes foreground
        let m = BinaryMask::open(&path).unwrap();
        assert_eq!(m.count_foreground(), 4);
    }

    #[test]
    fn mask_from_points() {
        let m = BinaryMask::from_points(3, 3, &[(0, 0), (2, 2)]);
        assert!(m.get(0, 0));
        assert!(m.get(2, 2));
        assert!(!m.get(1, 1));
        assert_eq!(m.count_foreground(), 2);
    }
}
