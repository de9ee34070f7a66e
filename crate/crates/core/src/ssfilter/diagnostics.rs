//! Variance-ratio diagnostics for telling smoothing windows from sharpening ones.
//!
//! A window is smoothed when the filtered output varies less around the
//! input's window mean than the input does (`tau2 / sigma2 <= 1`), and
//! sharpened otherwise.

use crate::error::Result;
use crate::field::ScalarField;
use crate::imgcore::{box_filter, mean_and_variance, PatchStats};

/// Floor applied to the input window variance before dividing.
pub const VARIANCE_FLOOR: f64 = 1e-12;

/// Measured per-window ratio `tau2 / sigma2`, where
/// `tau2 = mean over the window of (J - mu)^2` with `mu` the window mean of `image`.
pub fn variance_ratio(image: &ScalarField, filtered: &ScalarField, radius: usize) -> Result<ScalarField> {
    image.check_dims(filtered)?;
    let (mu, sigma2) = mean_and_variance(image, radius)?;
    let mean_j = box_filter(filtered, radius)?;
    let mean_j2 = box_filter(&filtered.map(|v| v * v), radius)?;
    Ok(ScalarField::from_fn(image.width(), image.height(), |x, y| {
        let m = mu.get(x, y);
        let tau2 = (mean_j2.get(x, y) - 2.0 * m * mean_j.get(x, y) + m * m).max(0.0);
        tau2 / sigma2.get(x, y).max(VARIANCE_FLOOR)
    }))
}

/// Ratio predicted for the guided window model `J_k = mu_k + alpha_k (G - nu_k)`
/// from the window moments alone:
///
/// `tau2 / sigma2 = (x + sqrt(x^2 + 4 x e)) / 2 + e`
///
/// with `s = v2 / (v2 + eps)`, `x = rho^2 s^2` and `e = kappa eps s / sigma2`;
/// at `kappa = 0` it collapses to `rho^2 s^2`.
/// The analytic weight is used, so windows with zero covariance predict
/// `kappa eps s / sigma2` even though the filter zeroes them.
pub fn predicted_variance_ratio(sigma2: f64, varsigma2: f64, rho: f64, epsilon: f64, kappa: f64) -> f64 {
    let s = varsigma2 / (varsigma2 + epsilon);
    let sigma2 = sigma2.max(VARIANCE_FLOOR);
    let x = rho * rho * s * s;
    let extra = kappa * epsilon * s / sigma2;
    0.5 * (x + (x * x + 4.0 * x * extra).sqrt()) + extra
}

/// [`predicted_variance_ratio`] evaluated on every window of `stats`.
pub fn predicted_ratio_field(stats: &PatchStats, epsilon: f64, kappa: f64) -> ScalarField {
    let (w, h) = (stats.sigma2.width(), stats.sigma2.height());
    let data = (0..w * h)
        .map(|i| {
            predicted_variance_ratio(
                stats.sigma2.data()[i],
                stats.varsigma2.data()[i],
                stats.rho(i),
                epsilon,
                kappa,
            )
        })
        .collect();
    ScalarField::from_raw(w, h, data)
}
