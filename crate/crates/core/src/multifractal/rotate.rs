use crate::raster::BitRaster;

/// Nearest-neighbor rotation by `degrees` counterclockwise about the raster
/// center. The output canvas is the rotated bounding box, so nothing is
/// cropped; binarity is preserved. A zero angle returns an identical copy.
pub fn rotate_nearest(raster: &BitRaster, degrees: f64) -> BitRaster {
    if degrees == 0.0 {
        return raster.clone();
    }
    let (h, w) = (raster.height() as f64, raster.width() as f64);
    let snap = |v: f64| if v.abs() < 1e-12 { 0.0 } else { v };
    let (sin, cos) = degrees.to_radians().sin_cos();
    let (sin, cos) = (snap(sin), snap(cos));
    let out_w = (w * cos.abs() + h * sin.abs()).ceil() as usize;
    let out_h = (w * sin.abs() + h * cos.abs()).ceil() as usize;
    let (ocx, ocy) = (out_w as f64 / 2.0, out_h as f64 / 2.0);
    let (icx, icy) = (w / 2.0, h / 2.0);
    BitRaster::from_fn(out_w, out_h, |row, col| {
        // Offsets from the output center, y pointing down.
        let x = col as f64 + 0.5 - ocx;
        let y = row as f64 + 0.5 - ocy;
        // Inverse of a counterclockwise turn in image coordinates.
        let sx = cos * x - sin * y + icx;
        let sy = sin * x + cos * y + icy;
        sx >= 0.0 && sy >= 0.0 && raster.get_signed(sy.floor() as isize, sx.floor() as isize)
    })
}
