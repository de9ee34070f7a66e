//! Weighted averaging of the overlapping window estimates of each pixel.
//!
//! Every pixel lies in the windows centred on its `(2r+1)^2` neighbours, and
//! each window produces one estimate. Sums over those windows are box filters
//! of per-window quantities, so
//! `J = (I * box(alpha w) + box((1 - alpha) mu w)) / box(w)`.

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::imgcore::{box_filter, PatchStats};
use crate::ssfilter::alpha::AlphaField;
use crate::ssfilter::params::{FilterParams, Weighting};

/// Unnormalised window weights derived from the window variance of the guide.
pub fn window_weights(variance: &ScalarField, weighting: Weighting) -> ScalarField {
    match weighting {
        Weighting::Uniform => ScalarField::filled(variance.width(), variance.height(), 1.0),
        Weighting::Adaptive { scale } => {
            let mean = variance.mean();
            if mean <= 0.0 {
                // flat image: every window is equally (un)informative
                return ScalarField::filled(variance.width(), variance.height(), 1.0);
            }
            let denom = scale * mean;
            variance.map(|v| {
                let t = v / denom;
                1.0 / (1.0 + t * t)
            })
        }
    }
}

fn check(fields: &[&ScalarField]) -> Result<()> {
    for f in &fields[1..] {
        fields[0].check_dims(f)?;
    }
    Ok(())
}

pub fn aggregate_self(
    image: &ScalarField,
    field: &AlphaField,
    mu: &ScalarField,
    sigma2: &ScalarField,
    params: &FilterParams,
) -> Result<ScalarField> {
    check(&[image, &field.alpha, mu, sigma2])?;
    let r = params.radius;
    let w = window_weights(sigma2, params.weighting);
    let aw = field.alpha.zip_map(&w, |a, w| a * w);
    let bw = ScalarField::from_fn(image.width(), image.height(), |x, y| {
        (1.0 - field.alpha.get(x, y)) * mu.get(x, y) * w.get(x, y)
    });
    let big_a = box_filter(&aw, r)?;
    let big_b = box_filter(&bw, r)?;
    let nor = box_filter(&w, r)?;
    Ok(ScalarField::from_fn(image.width(), image.height(), |x, y| {
        (image.get(x, y) * big_a.get(x, y) + big_b.get(x, y)) / nor.get(x, y)
    }))
}

pub fn aggregate_guided(
    guide: &ScalarField,
    field: &AlphaField,
    stats: &PatchStats,
    params: &FilterParams,
) -> Result<ScalarField> {
    let beta = field
        .beta
        .as_ref()
        .ok_or_else(|| Error::param("field", "guided aggregation needs signed weights"))?;
    check(&[guide, beta, &stats.mu, &stats.nu, &stats.varsigma2])?;
    let r = params.radius;
    let w = window_weights(&stats.varsigma2, params.weighting);
    let bw = beta.zip_map(&w, |b, w| b * w);
    let cw = ScalarField::from_fn(guide.width(), guide.height(), |x, y| {
        (stats.mu.get(x, y) - beta.get(x, y) * stats.nu.get(x, y)) * w.get(x, y)
    });
    let big_a = box_filter(&bw, r)?;
    let big_b = box_filter(&cw, r)?;
    let nor = box_filter(&w, r)?;
    Ok(ScalarField::from_fn(guide.width(), guide.height(), |x, y| {
        (guide.get(x, y) * big_a.get(x, y) + big_b.get(x, y)) / nor.get(x, y)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imgcore::{patch_stats, reflect};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(w: usize, h: usize, seed: u64, lo: f64, hi: f64) -> ScalarField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ScalarField::new(w, h, (0..w * h).map(|_| rng.random_range(lo..hi)).collect()).unwrap()
    }

    /// Visits the centres of all windows covering `(x, y)` in reflected coordinates.
    fn covering_windows(w: usize, h: usize, x: usize, y: usize, r: usize) -> Vec<(usize, usize)> {
        let ri = r as isize;
        let mut out = Vec::new();
        for dy in -ri..=ri {
            for dx in -ri..=ri {
                out.push((reflect(x as isize + dx, w), reflect(y as isize + dy, h)));
            }
        }
        out
    }

    fn alpha_only(alpha: ScalarField) -> AlphaField {
        AlphaField {
            a: alpha.clone(),
            alpha,
            beta: None,
        }
    }

    #[test]
    fn unit_alpha_returns_input() {
        let img = random_field(9, 8, 1, 0.0, 1.0);
        let p = FilterParams::new(2, 0.01, 1.0);
        let (mu, s2) = crate::imgcore::mean_and_variance(&img, 2).unwrap();
        let j = aggregate_self(&img, &alpha_only(ScalarField::filled(9, 8, 1.0)), &mu, &s2, &p).unwrap();
        assert!(j.max_abs_diff(&img) < 1e-14);
    }

    #[test]
    fn zero_alpha_uniform_is_mean_of_means() {
        let img = random_field(9, 8, 2, 0.0, 1.0);
        let p = FilterParams::new(2, 0.01, 0.0).uniform();
        let (mu, s2) = crate::imgcore::mean_and_variance(&img, 2).unwrap();
        let j = aggregate_self(&img, &alpha_only(ScalarField::filled(9, 8, 0.0)), &mu, &s2, &p).unwrap();
        assert!(j.max_abs_diff(&box_filter(&mu, 2).unwrap()) < 1e-14);
    }

    #[test]
    fn self_matches_explicit_window_sum() {
        let (w, h, r) = (10, 10, 1);
        let img = random_field(w, h, 3, 0.0, 1.0);
        let alpha = random_field(w, h, 4, 0.0, 2.0);
        let mu = random_field(w, h, 5, 0.0, 1.0);
        let s2 = random_field(w, h, 6, 0.0, 0.1);
        let p = FilterParams::new(r, 0.01, 1.0).with_scale(0.7);
        let j = aggregate_self(&img, &alpha_only(alpha.clone()), &mu, &s2, &p).unwrap();
        let mean_s2 = s2.mean();
        for y in 0..h {
            for x in 0..w {
                let (mut num, mut den) = (0.0, 0.0);
                for (kx, ky) in covering_windows(w, h, x, y, r) {
                    let wk = 1.0 / (1.0 + (s2.get(kx, ky) / (0.7 * mean_s2)).powi(2));
                    let ak = alpha.get(kx, ky);
                    num += wk * (ak * img.get(x, y) + (1.0 - ak) * mu.get(kx, ky));
                    den += wk;
                }
                assert!((j.get(x, y) - num / den).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn guided_matches_explicit_window_sum() {
        let (w, h, r) = (10, 10, 1);
        let img = random_field(w, h, 7, 0.0, 1.0);
        let guide = random_field(w, h, 8, 0.0, 1.0);
        let stats = patch_stats(&img, &guide, r).unwrap();
        let p = FilterParams::new(r, 0.02, 2.5).with_scale(1.3);
        let field = crate::ssfilter::alpha::alpha_guided(&stats, &p).unwrap();
        let beta = field.beta.clone().unwrap();
        let j = aggregate_guided(&guide, &field, &stats, &p).unwrap();
        let mean_v = stats.varsigma2.mean();
        for y in 0..h {
            for x in 0..w {
                let (mut num, mut den) = (0.0, 0.0);
                for (kx, ky) in covering_windows(w, h, x, y, r) {
                    let wk = 1.0 / (1.0 + (stats.varsigma2.get(kx, ky) / (1.3 * mean_v)).powi(2));
                    let est = stats.mu.get(kx, ky) + beta.get(kx, ky) * (guide.get(x, y) - stats.nu.get(kx, ky));
                    num += wk * est;
                    den += wk;
                }
                assert!((j.get(x, y) - num / den).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn zero_beta_is_weighted_local_mean() {
        let (w, h, r) = (8, 8, 1);
        let img = random_field(w, h, 9, 0.0, 1.0);
        let guide = random_field(w, h, 10, 0.0, 1.0);
        let stats = patch_stats(&img, &guide, r).unwrap();
        let p = FilterParams::new(r, 0.01, 1.0);
        let zero = ScalarField::filled(w, h, 0.0);
        let field = AlphaField {
            alpha: zero.clone(),
            beta: Some(zero.clone()),
            a: zero,
        };
        let j = aggregate_guided(&guide, &field, &stats, &p).unwrap();
        let wts = window_weights(&stats.varsigma2, p.weighting);
        let num = box_filter(&stats.mu.zip_map(&wts, |m, w| m * w), r).unwrap();
        let den = box_filter(&wts, r).unwrap();
        assert!(j.max_abs_diff(&num.zip_map(&den, |n, d| n / d)) < 1e-14);
    }

    #[test]
    fn flat_variance_gives_unit_weights() {
        let w = window_weights(&ScalarField::filled(3, 3, 0.0), Weighting::Adaptive { scale: 1.0 });
        assert!(w.data().iter().all(|&v| v == 1.0));
    }
}
