//! sRGB ↔ CIE L*C*h (D65, 2° observer).

use nalgebra::{DVector, Matrix3, Vector3};

use crate::image::Image;
use crate::manifolds::wrap_angle;

/// Linear sRGB to XYZ.
const RGB_TO_XYZ: [f64; 9] = [
    0.4124564, 0.3575761, 0.1804375, //
    0.2126729, 0.7151522, 0.0721750, //
    0.0193339, 0.1191920, 0.9503041,
];

/// Reference white: the XYZ image of linear RGB (1, 1, 1), so that white
/// maps to L = 100 exactly.
pub const WHITE_POINT: [f64; 3] = [
    0.4124564 + 0.3575761 + 0.1804375,
    0.2126729 + 0.7151522 + 0.0721750,
    0.0193339 + 0.1191920 + 0.9503041,
];

const DELTA: f64 = 6.0 / 29.0;

/// Below this chroma the hue is set to 0.
const GRAY_CHROMA: f64 = 1e-8;

const GAMUT_SLACK: f64 = 1e-9;

fn forward() -> Matrix3<f64> {
    Matrix3::from_row_slice(&RGB_TO_XYZ)
}

fn to_linear(c: f64) -> f64 {
    if c <= 0.04045 {
        c / 12.92
    } else {
        ((c + 0.055) / 1.055).powf(2.4)
    }
}

fn to_gamma(l: f64) -> f64 {
    if l <= 0.0031308 {
        12.92 * l
    } else {
        1.055 * l.powf(1.0 / 2.4) - 0.055
    }
}

fn lab_f(t: f64) -> f64 {
    if t > DELTA.powi(3) {
        t.cbrt()
    } else {
        t / (3.0 * DELTA * DELTA) + 4.0 / 29.0
    }
}

fn lab_f_inv(u: f64) -> f64 {
    if u > DELTA {
        u.powi(3)
    } else {
        3.0 * DELTA * DELTA * (u - 4.0 / 29.0)
    }
}

/// Returns `(L, C, h)` for an sRGB colour with components in [0, 1].
pub fn rgb_to_lch(rgb: &Vector3<f64>) -> (f64, f64, f64) {
    let xyz = forward() * rgb.map(to_linear);
    let [fx, fy, fz] = [0, 1, 2].map(|i| lab_f(xyz[i] / WHITE_POINT[i]));
    let l = 116.0 * fy - 16.0;
    let a = 500.0 * (fx - fy);
    let b = 200.0 * (fy - fz);
    let c = a.hypot(b);
    let h = if c < GRAY_CHROMA { 0.0 } else { wrap_angle(b.atan2(a)) };
    (l, c, h)
}

/// Inverse of [`rgb_to_lch`]. Components are clamped to [0, 1]; the flag
/// reports whether any clamping happened.
pub fn lch_to_rgb(l: f64, c: f64, h: f64) -> (Vector3<f64>, bool) {
    let (a, b) = if c == 0.0 { (0.0, 0.0) } else { (c * h.cos(), c * h.sin()) };
    let fy = (l + 16.0) / 116.0;
    let f = [fy + a / 500.0, fy, fy - b / 200.0];
    let xyz = Vector3::from_fn(|i, _| WHITE_POINT[i] * lab_f_inv(f[i]));
    let inv = forward().try_inverse().expect("sRGB matrix is invertible");
    let lin = inv * xyz;
    let mut clamped = false;
    let rgb = lin.map(|v| {
        let g = to_gamma(v);
        // rounding noise at the gamut boundary is not reported
        if !(g > -GAMUT_SLACK && g < 1.0 + GAMUT_SLACK) {
            clamped = true;
        }
        if g.is_nan() { 0.0 } else { g.clamp(0.0, 1.0) }
    });
    (rgb, clamped)
}

pub fn rgb_image_to_lch(img: &Image<Vector3<f64>>) -> Image<(DVector<f64>, f64)> {
    img.map(|p| {
        let (l, c, h) = rgb_to_lch(p);
        (DVector::from_column_slice(&[l, c]), h)
    })
}

/// Converts back to sRGB, returning the number of clamped pixels.
pub fn lch_image_to_rgb(img: &Image<(DVector<f64>, f64)>) -> (Image<Vector3<f64>>, usize) {
    let mut count = 0;
    let out = img.map(|(lc, h)| {
        let (rgb, clamped) = lch_to_rgb(lc[0], lc[1], *h);
        count += clamped as usize;
        rgb
    });
    (out, count)
}
