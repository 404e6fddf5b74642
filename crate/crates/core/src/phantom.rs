//! Deterministic piecewise-smooth test image.

use crate::image::Image;

/// A `size x size` integer-valued phantom with values in `[16, 240]`:
/// a shaded background, an ellipse with a radial gradient, a flat
/// rectangle, a bright disk, a triangle and a patch of smooth stripes.
pub fn piecewise_smooth(size: usize) -> Image {
    assert!(size >= 8, "phantom needs at least 8x8 pixels");
    let n = size as f64;
    Image::from_fn(size, size, |r, c| {
        let y = (r as f64 + 0.5) / n;
        let x = (c as f64 + 0.5) / n;
        let mut v = 60.0 + 50.0 * x + 30.0 * y;

        let (ex, ey) = ((x - 0.38) / 0.26, (y - 0.42) / 0.2);
        let e = ex * ex + ey * ey;
        if e < 1.0 {
            v = 200.0 - 60.0 * e;
        }
        if (0.62..0.9).contains(&x) && (0.12..0.4).contains(&y) {
            v = 110.0;
        }
        let (dx, dy) = (x - 0.75, y - 0.72);
        if dx * dx + dy * dy < 0.1 * 0.1 {
            v = 235.0;
        }
        if y > 0.62 && y < 0.92 && x > 0.1 && x < 0.5 && (x - 0.1) < (y - 0.62) * 1.3 {
            v = 40.0;
        }
        if (0.55..0.9).contains(&x) && (0.45..0.58).contains(&y) {
            v = 150.0 + 25.0 * (2.0 * std::f64::consts::PI * x * 16.0).sin();
        }
        v.round().clamp(16.0, 240.0)
    })
}
