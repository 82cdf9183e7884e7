//! Loading and saving segmentation masks, and rendering annotated overlays.

use std::path::Path;

use image::{GrayImage, ImageReader, Luma, Rgb, RgbImage};

use crate::error::{Error, Result};
use crate::graph::{AngleMeasurement, ParticularPoints};
use crate::morphology::Skeleton;
use crate::raster::{line_pixels, BitRaster, Pixel};

pub const DEFAULT_THRESHOLD: u8 = 127;

/// Smallest accepted mask side, in pixels.
pub const MIN_SIDE: usize = 3;

/// A binary vessel segmentation. `true` marks a vessel pixel.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMask {
    raster: BitRaster,
}

impl BinaryMask {
    pub fn new(raster: BitRaster) -> Result<Self> {
        if raster.width() < MIN_SIDE || raster.height() < MIN_SIDE {
            return Err(Error::Validation(format!(
                "mask must be at least {MIN_SIDE}x{MIN_SIDE}, got {}x{}",
                raster.width(),
                raster.height()
            )));
        }
        Ok(Self { raster })
    }

    pub fn empty(width: usize, height: usize) -> Result<Self> {
        Self::new(BitRaster::new(width, height))
    }

    pub fn from_fn(width: usize, height: usize, f: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        Self::new(BitRaster::from_fn(width, height, f))
    }

    pub fn from_pixels(
        width: usize,
        height: usize,
        pixels: impl IntoIterator<Item = Pixel>,
    ) -> Result<Self> {
        Self::new(BitRaster::from_pixels(width, height, pixels))
    }

    pub fn width(&self) -> usize {
        self.raster.width()
    }

    pub fn height(&self) -> usize {
        self.raster.height()
    }

    pub fn raster(&self) -> &BitRaster {
        &self.raster
    }

    pub fn into_raster(self) -> BitRaster {
        self.raster
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.raster.get(Pixel::new(row, col))
    }

    pub fn vessel_count(&self) -> usize {
        self.raster.count()
    }

    pub fn is_empty(&self) -> bool {
        self.raster.is_empty()
    }

    /// Decodes an in-memory image; a pixel is vessel iff its luminance
    /// exceeds `threshold`.
    pub fn from_image(img: &image::DynamicImage, threshold: u8) -> Result<Self> {
        let luma = img.to_luma8();
        let (w, h) = luma.dimensions();
        if w == 0 || h == 0 {
            return Err(Error::Validation("image has zero size".into()));
        }
        Self::from_fn(w as usize, h as usize, |row, col| {
            luma.get_pixel(col as u32, row as u32).0[0] > threshold
        })
    }

    /// Vessel pixels as 255, background as 0.
    pub fn to_gray_image(&self) -> GrayImage {
        GrayImage::from_fn(self.width() as u32, self.height() as u32, |x, y| {
            Luma([if self.get(y as usize, x as usize) { 255 } else { 0 }])
        })
    }
}

pub fn load_mask(path: impl AsRef<Path>, threshold: u8) -> Result<BinaryMask> {
    let path = path.as_ref();
    let reader = ImageReader::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let reader = reader.with_guessed_format().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let img = reader.decode().map_err(|source| Error::Decode {
        path: path.to_path_buf(),
        source,
    })?;
    BinaryMask::from_image(&img, threshold)
}

/// Writes the mask as an 8-bit grayscale PNG (vessel = 255).
pub fn save_mask(mask: &BinaryMask, path: impl AsRef<Path>) -> Result<()> {
    mask.to_gray_image()
        .save_with_format(path, image::ImageFormat::Png)?;
    Ok(())
}

pub mod palette {
    pub const BACKGROUND: [u8; 3] = [0, 0, 0];
    pub const VESSEL: [u8; 3] = [90, 90, 90];
    pub const SKELETON: [u8; 3] = [255, 255, 255];
    pub const ENDPOINT: [u8; 3] = [0, 255, 0];
    pub const INTERSECTION: [u8; 3] = [255, 0, 0];
    pub const ANGLE: [u8; 3] = [255, 255, 0];
}

/// RGB rendering of a mask with its skeleton and graph annotations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlayImage {
    image: RgbImage,
}

impl OverlayImage {
    pub fn width(&self) -> usize {
        self.image.width() as usize
    }

    pub fn height(&self) -> usize {
        self.image.height() as usize
    }

    pub fn pixel(&self, row: usize, col: usize) -> [u8; 3] {
        self.image.get_pixel(col as u32, row as u32).0
    }

    pub fn count_color(&self, color: [u8; 3]) -> usize {
        self.image.pixels().filter(|p| p.0 == color).count()
    }

    pub fn as_image(&self) -> &RgbImage {
        &self.image
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.image.save_with_format(path, image::ImageFormat::Png)?;
        Ok(())
    }

    /// PNG encoding of the overlay.
    pub fn to_png_bytes(&self) -> Result<Vec<u8>> {
        let mut buf = std::io::Cursor::new(Vec::new());
        self.image.write_to(&mut buf, image::ImageFormat::Png)?;
        Ok(buf.into_inner())
    }
}

/// Draws, bottom to top: vessel pixels, skeleton, angle arms, then the
/// particular points.
pub fn render_overlay(
    mask: &BinaryMask,
    skeleton: &Skeleton,
    points: &ParticularPoints,
    angles: &[AngleMeasurement],
) -> Result<OverlayImage> {
    let (w, h) = (mask.width(), mask.height());
    if skeleton.width() != w || skeleton.height() != h {
        return Err(Error::Validation(format!(
            "skeleton is {}x{} but mask is {w}x{h}",
            skeleton.width(),
            skeleton.height()
        )));
    }
    let in_bounds = |p: &Pixel| p.row < h && p.col < w;
    if !points.endpoints.iter().chain(&points.intersections).all(in_bounds) {
        return Err(Error::Validation("particular point outside the mask".into()));
    }

    let mut image = RgbImage::from_pixel(w as u32, h as u32, Rgb(palette::BACKGROUND));
    let mut put = |p: Pixel, color: [u8; 3]| image.put_pixel(p.col as u32, p.row as u32, Rgb(color));

    for p in mask.raster().pixels() {
        put(p, palette::VESSEL);
    }
    for p in skeleton.raster().pixels() {
        put(p, palette::SKELETON);
    }
    for angle in angles {
        if !in_bounds(&angle.vertex) {
            return Err(Error::Validation("angle vertex outside the mask".into()));
        }
        for sample in [angle.sample_a, angle.sample_b] {
            let from = (angle.vertex.row as isize, angle.vertex.col as isize);
            let to = (sample.row as isize, sample.col as isize);
            for (r, c) in line_pixels(from, to) {
                if r >= 0 && c >= 0 && (r as usize) < h && (c as usize) < w {
                    put(Pixel::new(r as usize, c as usize), palette::ANGLE);
                }
            }
        }
    }
    for &p in &points.endpoints {
        put(p, palette::ENDPOINT);
    }
    for &p in &points.intersections {
        put(p, palette::INTERSECTION);
    }
    Ok(OverlayImage { image })
}

#[cfg(test)]
mod tests {
    use super::*;
    use image::DynamicImage;

    fn gray(w: u32, h: u32, f: impl Fn(u32, u32) -> u8) -> DynamicImage {
        DynamicImage::ImageLuma8(GrayImage::from_fn(w, h, |x, y| Luma([f(x, y)])))
    }

    #[test]
    fn white_image_is_all_vessel() {
        let m = BinaryMask::from_image(&gray(10, 10, |_, _| 255), 127).unwrap();
        assert_eq!(m.vessel_count(), 100);
    }

    #[test]
    fn black_image_is_empty() {
        let m = BinaryMask::from_image(&gray(10, 10, |_, _| 0), 127).unwrap();
        assert_eq!(m.vessel_count(), 0);
    }

    #[test]
    fn single_bright_pixel() {
        let m = BinaryMask::from_image(&gray(10, 10, |x, y| if (x, y) == (7, 2) { 200 } else { 0 }), 127)
            .unwrap();
        assert_eq!(m.vessel_count(), 1);
        assert!(m.get(2, 7));
    }

    #[test]
    fn threshold_is_strict() {
        let m = BinaryMask::from_image(&gray(4, 4, |_, _| 127), 127).unwrap();
        assert!(m.is_empty());
    }

    #[test]
    fn rgb_uses_luminance() {
        let img = DynamicImage::ImageRgb8(RgbImage::from_pixel(5, 5, Rgb([255, 255, 255])));
        assert_eq!(BinaryMask::from_image(&img, 127).unwrap().vessel_count(), 25);
    }

    #[test]
    fn too_small_mask_rejected() {
        assert!(BinaryMask::empty(2, 10).is_err());
        assert!(BinaryMask::from_image(&gray(0, 0, |_, _| 0), 127).is_err());
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_mask("/nonexistent/mask.png", 127).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }

    #[test]
    fn corrupt_file_is_decode_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.png");
        std::fs::write(&path, b"\x89PNG\r\n\x1a\nnot really").unwrap();
        assert!(matches!(load_mask(&path, 127).unwrap_err(), Error::Decode { .. }));
    }

    #[test]
    fn overlay_rejects_mismatched_skeleton() {
        let mask = BinaryMask::empty(10, 10).unwrap();
        let skel = Skeleton::from_raster(BitRaster::new(11, 10));
        let points = ParticularPoints::default();
        assert!(render_overlay(&mask, &skel, &points, &[]).is_err());
    }
}
