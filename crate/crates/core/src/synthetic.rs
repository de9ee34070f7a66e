//! Deterministic synthetic scenes for tests, benches and demos.
//!
//! Every generator takes a seed and produces bit-identical output for it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{Image, ScalarField};
use crate::imgcore::box_filter;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform noise field in `[0, 1)`.
pub fn noise(w: usize, h: usize, seed: u64) -> ScalarField {
    let mut r = rng(seed);
    ScalarField::from_raw(w, h, (0..w * h).map(|_| r.random::<f64>()).collect())
}

/// Three box passes, close to a Gaussian of standard deviation `radius`.
pub fn blur(field: &ScalarField, radius: usize) -> ScalarField {
    let mut out = field.clone();
    for _ in 0..3 {
        out = box_filter(&out, radius).expect("blur radius fits the field");
    }
    out
}

/// Mid-grey scene with smooth shading, a few hard-edged blocks and fine
/// texture. Values stay inside `[0.05, 0.95]`.
pub fn textured(w: usize, h: usize, channels: usize, seed: u64) -> Image {
    let mut r = rng(seed);
    let blocks: Vec<(f64, f64, f64, f64, f64)> = (0..6)
        .map(|_| {
            let x0 = r.random::<f64>() * w as f64;
            let y0 = r.random::<f64>() * h as f64;
            let bw = (0.1 + 0.3 * r.random::<f64>()) * w as f64;
            let bh = (0.1 + 0.3 * r.random::<f64>()) * h as f64;
            (x0, y0, bw, bh, r.random_range(-0.2..0.2))
        })
        .collect();
    let (fx, fy) = (r.random_range(0.02..0.08), r.random_range(0.02..0.08));
    let shading = ScalarField::from_fn(w, h, |x, y| {
        let mut v = 0.5 + 0.12 * (fx * x as f64).sin() * (fy * y as f64).cos();
        for &(x0, y0, bw, bh, dv) in &blocks {
            if (x as f64) >= x0 && (x as f64) < x0 + bw && (y as f64) >= y0 && (y as f64) < y0 + bh {
                v += dv;
            }
        }
        v
    });
    let fine = blur(&noise(w, h, r.random()), 1);
    let planes = (0..channels)
        .map(|c| {
            let tint = 0.85 + 0.1 * c as f64 / channels.max(1) as f64;
            shading.zip_map(&fine, move |s, n| (tint * s + 0.6 * (n - 0.5)).clamp(0.05, 0.95))
        })
        .collect();
    Image::from_planes(planes).expect("1, 3 or 4 channels")
}

/// Flash/no-flash pair: the flash shot is the clean scene, the no-flash
/// shot is a darker rendition with additive noise.
pub fn flash_pair(w: usize, h: usize, seed: u64) -> (Image, Image) {
    let flash = textured(w, h, 3, seed);
    let mut r = rng(seed ^ 0x9e37_79b9);
    let noflash = Image::from_planes(
        flash
            .planes()
            .iter()
            .map(|p| p.zip_map(&noise(w, h, r.random()), |v, n| (0.35 * v + 0.08 * (n - 0.5)).clamp(0.0, 1.0)))
            .collect(),
    )
    .expect("three planes");
    (noflash, flash)
}

/// Textured image with a near square (depth 0) in front of a far
/// background (depth 1). Returns the image, its depth map and the near mask.
pub fn two_plane_scene(w: usize, h: usize, seed: u64) -> (Image, ScalarField, ScalarField) {
    let img = textured(w, h, 3, seed);
    let near = ScalarField::from_fn(w, h, |x, y| {
        let inside = x >= w / 4 && x < 3 * w / 4 && y >= h / 4 && y < 3 * h / 4;
        inside as u8 as f64
    });
    let depth = near.map(|n| 1.0 - n);
    (img, depth, near)
}

/// Left half: blurred low-contrast texture. Right half: full-contrast noise.
/// Returns the image and a mask that is 1 on the blurred half.
pub fn half_blurred(w: usize, h: usize, seed: u64) -> (Image, ScalarField) {
    let soft = blur(&noise(w, h, seed), 3).map(|v| 0.3 + 0.4 * v);
    let sharp = noise(w, h, seed.wrapping_add(1));
    let mask = ScalarField::from_fn(w, h, |x, _| (x < w / 2) as u8 as f64);
    let plane = ScalarField::from_fn(w, h, |x, y| if x < w / 2 { soft.get(x, y) } else { sharp.get(x, y) });
    (Image::from_planes(vec![plane.clone(), plane.clone(), plane]).expect("three planes"), mask)
}

/// Checkerboard of `cell`-sized squares, 1 on the cell containing the origin.
pub fn checkerboard(w: usize, h: usize, cell: usize) -> ScalarField {
    let cell = cell.max(1);
    ScalarField::from_fn(w, h, |x, y| (x / cell + y / cell).is_multiple_of(2) as u8 as f64)
}

/// Ground-truth multispectral scene: coloured regions whose edges follow the
/// luminance structure, modulated by shared fine texture. All band means
/// are well above zero.
pub fn multispectral(w: usize, h: usize, bands: usize, seed: u64) -> Image {
    let mut r = rng(seed);
    let centres: Vec<(f64, f64, Vec<f64>)> = (0..8)
        .map(|_| {
            let colour = (0..bands).map(|_| r.random_range(0.2..0.8)).collect();
            (r.random::<f64>() * w as f64, r.random::<f64>() * h as f64, colour)
        })
        .collect();
    // nearest-centre regions
    let label: Vec<usize> = (0..w * h)
        .map(|i| {
            let (x, y) = ((i % w) as f64, (i / w) as f64);
            (0..centres.len())
                .min_by(|&a, &b| {
                    let d = |k: usize| (centres[k].0 - x).powi(2) + (centres[k].1 - y).powi(2);
                    d(a).total_cmp(&d(b))
                })
                .unwrap_or(0)
        })
        .collect();
    let fine = blur(&noise(w, h, r.random()), 1);
    let planes = (0..bands)
        .map(|b| {
            let data = (0..w * h)
                .map(|i| (centres[label[i]].2[b] * (0.8 + 0.5 * (fine.data()[i] - 0.5))).clamp(0.02, 1.0))
                .collect();
            ScalarField::from_raw(w, h, data)
        })
        .collect();
    Image::from_planes(planes).expect("band count of 1, 3 or 4")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(textured(16, 12, 3, 7), textured(16, 12, 3, 7));
        assert_ne!(textured(16, 12, 3, 7), textured(16, 12, 3, 8));
        assert_eq!(flash_pair(16, 16, 1).0, flash_pair(16, 16, 1).0);
        assert_eq!(multispectral(16, 16, 4, 2), multispectral(16, 16, 4, 2));
    }

    #[test]
    fn ranges() {
        let img = textured(32, 32, 3, 1);
        for p in img.planes() {
            let (lo, hi) = p.min_max();
            assert!(lo >= 0.05 && hi <= 0.95);
        }
        let ms = multispectral(32, 32, 3, 3);
        assert!(ms.planes().iter().all(|p| p.mean() > 0.1));
    }

    #[test]
    fn checkerboard_alternates() {
        let c = checkerboard(4, 4, 2);
        assert_eq!(c.row(0), &[1.0, 1.0, 0.0, 0.0]);
        assert_eq!(c.row(2), &[0.0, 0.0, 1.0, 1.0]);
    }

    #[test]
    fn flash_shot_is_brighter() {
        let (noflash, flash) = flash_pair(32, 32, 4);
        assert!(flash.plane(0).mean() > 2.0 * noflash.plane(0).mean());
    }
}
