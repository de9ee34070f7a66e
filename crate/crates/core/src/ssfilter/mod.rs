//! The smoothing-sharpening filter.
//!
//! Each window is modelled as a blend between its pixels and its mean; the
//! blend weight is the MAP estimate under a generalised Gamma prior whose
//! shape is set by `kappa`. With a self guide, `kappa < 1` gives
//! edge-preserving smoothing, `kappa = 1` leaves the image unchanged and
//! `kappa > 1` gives halo-free sharpening. With an external guide the window
//! detail is borrowed from the guide, sign-corrected by the window covariance.
//! `kappa = 0` with uniform weights is exactly the classic guided filter.

pub mod aggregate;
pub mod alpha;
pub mod diagnostics;
pub mod guided;
pub mod params;

pub use aggregate::{aggregate_guided, aggregate_self, window_weights};
pub use alpha::{alpha_guided, alpha_self, AlphaField};
pub use diagnostics::{predicted_variance_ratio, variance_ratio};
pub use guided::guided_filter;
pub use params::{ColorMode, FilterParams, Kappa, Weighting};

use crate::error::{Error, Result};
use crate::field::{Image, ScalarField};
use crate::imgcore::{box_filter, hsv_to_rgb, mean_and_variance, patch_stats, rgb_to_hsv};
use crate::par;

/// Self-guided filtering of one plane, `params.iterations` times.
pub fn filter_plane_self(plane: &ScalarField, params: &FilterParams) -> Result<ScalarField> {
    params.validate_for(plane.width(), plane.height())?;
    let mut current = plane.clone();
    for _ in 0..params.iterations {
        let (mu, sigma2) = mean_and_variance(&current, params.radius)?;
        let field = alpha_self(&sigma2, params)?;
        current = aggregate_self(&current, &field, &mu, &sigma2, params)?;
    }
    Ok(current)
}

/// Guided filtering of one plane against a fixed guide plane.
///
/// Each iteration filters the previous output against the same guide.
pub fn filter_plane_guided(
    plane: &ScalarField,
    guide: &ScalarField,
    params: &FilterParams,
) -> Result<ScalarField> {
    params.validate_for(plane.width(), plane.height())?;
    plane.check_dims(guide)?;
    let mut current = plane.clone();
    for _ in 0..params.iterations {
        let stats = patch_stats(&current, guide, params.radius)?;
        let field = alpha_guided(&stats, params)?;
        current = aggregate_guided(guide, &field, &stats, params)?;
    }
    Ok(current)
}

fn filter_plane(plane: &ScalarField, guide: Option<&ScalarField>, params: &FilterParams) -> Result<ScalarField> {
    match guide {
        None => filter_plane_self(plane, params),
        Some(g) => filter_plane_guided(plane, g, params),
    }
}

/// Filters `image`, self-guided when `guide` is `None`.
///
/// In [`ColorMode::PerChannel`] an external guide must have either the same
/// channel count (channels pair up by index) or a single channel (shared by
/// all). In [`ColorMode::HsvValue`] only the value channel is filtered, against
/// the guide's value channel or its single plane; a fourth (alpha) channel is
/// carried through untouched.
pub fn filter(image: &Image, guide: Option<&Image>, params: &FilterParams) -> Result<Image> {
    params.validate_for(image.width(), image.height())?;
    if let Some(g) = guide {
        image.check_dims(g)?;
    }
    match params.color_mode {
        ColorMode::PerChannel => {
            let guides: Vec<Option<&ScalarField>> = match guide {
                None => vec![None; image.channels()],
                Some(g) if g.channels() == image.channels() => g.planes().iter().map(Some).collect(),
                Some(g) if g.channels() == 1 => vec![Some(g.plane(0)); image.channels()],
                Some(g) => {
                    return Err(Error::ChannelMismatch(format!(
                        "guide has {} channels, image has {}",
                        g.channels(),
                        image.channels()
                    )))
                }
            };
            let jobs: Vec<(&ScalarField, Option<&ScalarField>)> =
                image.planes().iter().zip(guides).collect();
            let planes = par::map_items(&jobs, |(p, g)| filter_plane(p, *g, params))
                .into_iter()
                .collect::<Result<Vec<_>>>()?;
            Image::from_planes(planes)
        }
        ColorMode::HsvValue => {
            let (hsv, extra) = split_hsv(image)?;
            let guide_v = match guide {
                None => None,
                Some(g) if g.channels() == 1 => Some(g.plane(0).clone()),
                Some(g) => Some(split_hsv(g)?.0.plane(2).clone()),
            };
            let v = filter_plane(hsv.plane(2), guide_v.as_ref(), params)?;
            let mut planes = hsv.into_planes();
            planes[2] = v;
            let mut rgb = hsv_to_rgb(&Image::from_planes(planes)?)?.into_planes();
            rgb.extend(extra);
            Image::from_planes(rgb)
        }
    }
}

fn split_hsv(image: &Image) -> Result<(Image, Option<ScalarField>)> {
    if image.channels() < 3 {
        return Err(Error::ChannelMismatch(format!(
            "HSV mode needs 3 or 4 channels, got {}",
            image.channels()
        )));
    }
    let rgb = Image::from_planes(image.planes()[..3].to_vec())?;
    Ok((rgb_to_hsv(&rgb)?, image.planes().get(3).cloned()))
}

/// Non-adaptive blend `J = alpha I + (1 - alpha) box(I)` of every channel.
///
/// Below 1 this is a low-pass filter, above 1 it is unsharp masking.
pub fn filter_fixed_alpha(image: &Image, alpha: f64, radius: usize) -> Result<Image> {
    if !alpha.is_finite() {
        return Err(Error::param("alpha", "must be finite"));
    }
    let planes = image
        .planes()
        .iter()
        .map(|p| {
            let mean = box_filter(p, radius)?;
            Ok(p.zip_map(&mean, |v, m| alpha * v + (1.0 - alpha) * m))
        })
        .collect::<Result<Vec<_>>>()?;
    Image::from_planes(planes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imgcore::mean_and_variance;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_image(w: usize, h: usize, c: usize, seed: u64) -> Image {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Image::from_planes(
            (0..c)
                .map(|_| ScalarField::new(w, h, (0..w * h).map(|_| rng.random::<f64>()).collect()).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn kappa_one_self_guided_is_identity() {
        let img = random_image(24, 20, 3, 1);
        for r in [1, 3] {
            let out = filter(&img, None, &FilterParams::new(r, 0.01, 1.0)).unwrap();
            assert!(out.max_abs_diff(&img) < 1e-12);
        }
    }

    #[test]
    fn kappa_zero_uniform_is_guided_filter() {
        let img = random_image(20, 20, 1, 2);
        let p = FilterParams::new(2, 0.02, 0.0).uniform();
        let ours = filter(&img, None, &p).unwrap();
        let gf = guided_filter(img.plane(0), img.plane(0), 2, 0.02).unwrap();
        assert!(ours.plane(0).max_abs_diff(&gf) < 1e-12);
        let guide = random_image(20, 20, 1, 3);
        let ours = filter(&img, Some(&guide), &p).unwrap();
        let gf = guided_filter(img.plane(0), guide.plane(0), 2, 0.02).unwrap();
        assert!(ours.plane(0).max_abs_diff(&gf) < 1e-12);
    }

    #[test]
    fn large_kappa_raises_variance_on_quiet_windows() {
        let img = random_image(64, 64, 1, 4);
        let r = 3;
        let out = filter(&img, None, &FilterParams::new(r, 0.01, 5.0)).unwrap();
        let (_, before) = mean_and_variance(img.plane(0), r).unwrap();
        let (_, after) = mean_and_variance(out.plane(0), r).unwrap();
        let median = {
            let mut v = before.data().to_vec();
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            v[v.len() / 2]
        };
        let quiet: Vec<usize> = (0..before.len()).filter(|&i| before.data()[i] <= median).collect();
        assert!(quiet.iter().all(|&i| after.data()[i] > before.data()[i]));
    }

    #[test]
    fn small_kappa_smooths() {
        let img = random_image(32, 32, 1, 5);
        let out = filter(&img, None, &FilterParams::new(2, 0.05, 0.1)).unwrap();
        let (_, before) = mean_and_variance(img.plane(0), 2).unwrap();
        let (_, after) = mean_and_variance(out.plane(0), 2).unwrap();
        assert!(after.mean() < before.mean());
    }

    #[test]
    fn gray_guide_is_broadcast_and_bad_guides_rejected() {
        let img = random_image(16, 16, 3, 6);
        let gray = random_image(16, 16, 1, 7);
        let p = FilterParams::new(1, 0.01, 2.0);
        let out = filter(&img, Some(&gray), &p).unwrap();
        for c in 0..3 {
            let single = filter_plane_guided(img.plane(c), gray.plane(0), &p).unwrap();
            assert_eq!(out.plane(c), &single);
        }
        let four = random_image(16, 16, 4, 8);
        assert!(filter(&img, Some(&four), &p).is_err());
        assert!(filter(&img, Some(&random_image(15, 16, 3, 9)), &p).is_err());
    }

    #[test]
    fn hsv_mode_keeps_hue_and_alpha_channel() {
        let img = random_image(16, 16, 4, 10);
        let p = FilterParams::new(1, 0.01, 3.0).with_color_mode(ColorMode::HsvValue);
        let out = filter(&img, None, &p).unwrap();
        assert_eq!(out.plane(3), img.plane(3));
        let identity = filter(&img, None, &p.clone().with_kappa(1.0)).unwrap();
        assert!(identity.max_abs_diff(&img) < 1e-9);
        assert!(filter(&random_image(8, 8, 1, 11), None, &p).is_err());
    }

    #[test]
    fn iterations_compose() {
        let img = random_image(16, 16, 1, 12);
        let p = FilterParams::new(1, 0.01, 0.3);
        let once = filter(&img, None, &p).unwrap();
        let twice = filter(&once, None, &p).unwrap();
        let both = filter(&img, None, &p.clone().with_iterations(2)).unwrap();
        assert_eq!(twice, both);
    }

    #[test]
    fn fixed_alpha_identity_and_impulse_response() {
        let img = random_image(9, 4, 1, 13);
        assert!(filter_fixed_alpha(&img, 1.0, 1).unwrap().max_abs_diff(&img) < 1e-15);
        // rows are identical, so the vertical pass is a no-op and the rows
        // see the 1-D kernel {(1-a), (1+2a), (1-a)} / 3
        let alpha = 0.4;
        let impulse = Image::gray(ScalarField::from_fn(9, 3, |x, _| if x == 4 { 1.0 } else { 0.0 }));
        let out = filter_fixed_alpha(&impulse, alpha, 1).unwrap();
        let row = out.plane(0).row(1);
        assert!((row[3] - (1.0 - alpha) / 3.0).abs() < 1e-15);
        assert!((row[4] - (1.0 + 2.0 * alpha) / 3.0).abs() < 1e-15);
        assert!((row[5] - (1.0 - alpha) / 3.0).abs() < 1e-15);
        assert!(row[2].abs() < 1e-15 && row[6].abs() < 1e-15);
    }
}
