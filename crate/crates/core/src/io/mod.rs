//! File formats: the MVF container, CSV, PPM rasters, glyph JSON, and
//! sRGB/LCh colour conversion.

mod color;
mod export;
mod mvf;

pub use color::{lch_image_to_rgb, lch_to_rgb, rgb_image_to_lch, rgb_to_lch, WHITE_POINT};
pub use export::{
    coordinate_names, read_csv, read_ppm, write_csv, write_glyph_json, write_hue_ppm, write_ppm,
    GLYPH_SCHEMA,
};
pub use mvf::{read_image, read_mvf, write_image, write_mvf, RawMvf, MVF_MAGIC};

/// Runs `$body` with `$m` bound to the concrete manifold described by a
/// [`ManifoldKind`](crate::ManifoldKind) reference. Products other than LCh
/// yield a format error.
#[macro_export]
macro_rules! with_manifold {
    ($kind:expr, $m:ident => $body:expr) => {{
        match $kind {
            $crate::ManifoldKind::Circle => {
                let $m = $crate::Circle;
                $body
            }
            $crate::ManifoldKind::Sphere => {
                let $m = $crate::Sphere;
                $body
            }
            $crate::ManifoldKind::Rotations => {
                let $m = $crate::Rotations;
                $body
            }
            $crate::ManifoldKind::Spd => {
                let $m = $crate::Spd;
                $body
            }
            $crate::ManifoldKind::Euclidean(k) => {
                let $m = $crate::Euclidean::new(*k);
                $body
            }
            other if *other == $crate::ManifoldKind::lch() => {
                let $m = $crate::Lch::new();
                $body
            }
            other => Err($crate::Error::Format(format!("unsupported manifold {other}")).into()),
        }
    }};
}
