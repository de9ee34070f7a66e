use crate::error::Result;
use crate::field::ScalarField;
use crate::imgcore::boxfilter::{box_filter, check_radius};

/// Per-pixel moments of the windows centred on each pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchStats {
    /// Window mean of the filtered image.
    pub mu: ScalarField,
    /// Window mean of the guide.
    pub nu: ScalarField,
    /// Window variance of the filtered image, clamped at zero.
    pub sigma2: ScalarField,
    /// Window variance of the guide, clamped at zero.
    pub varsigma2: ScalarField,
    /// Window covariance between image and guide.
    pub phi: ScalarField,
    pub radius: usize,
}

impl PatchStats {
    /// Correlation coefficient of the window at index `i`, 0 on flat windows.
    pub fn rho(&self, i: usize) -> f64 {
        let d = (self.sigma2.data()[i] * self.varsigma2.data()[i]).sqrt();
        if d > 0.0 {
            self.phi.data()[i] / d
        } else {
            0.0
        }
    }
}

/// Window mean and clamped variance of a single field.
pub fn mean_and_variance(src: &ScalarField, radius: usize) -> Result<(ScalarField, ScalarField)> {
    let mu = box_filter(src, radius)?;
    let sq = box_filter(&src.map(|v| v * v), radius)?;
    let var = sq.zip_map(&mu, |s, m| (s - m * m).max(0.0));
    Ok((mu, var))
}

/// Window means, variances and covariance of `image` and `guide`.
///
/// Computed as `E[XY] - E[X]E[Y]` through box filters. Negative variances from
/// round-off are clamped to zero and the covariance is clamped into its
/// Cauchy-Schwarz bound, so `|rho| <= 1` holds exactly.
pub fn patch_stats(image: &ScalarField, guide: &ScalarField, radius: usize) -> Result<PatchStats> {
    image.check_dims(guide)?;
    check_radius(image.width(), image.height(), radius)?;
    if image.data() == guide.data() {
        let (mu, sigma2) = mean_and_variance(image, radius)?;
        return Ok(PatchStats {
            nu: mu.clone(),
            varsigma2: sigma2.clone(),
            phi: sigma2.clone(),
            mu,
            sigma2,
            radius,
        });
    }
    let (mu, sigma2) = mean_and_variance(image, radius)?;
    let (nu, varsigma2) = mean_and_variance(guide, radius)?;
    let cross = box_filter(&image.zip_map(guide, |a, b| a * b), radius)?;
    let mut phi = vec![0.0; cross.len()];
    for (i, p) in phi.iter_mut().enumerate() {
        let raw = cross.data()[i] - mu.data()[i] * nu.data()[i];
        let bound = (sigma2.data()[i] * varsigma2.data()[i]).sqrt();
        *p = raw.clamp(-bound, bound);
    }
    Ok(PatchStats {
        phi: ScalarField::from_raw(image.width(), image.height(), phi),
        mu,
        nu,
        sigma2,
        varsigma2,
        radius,
    })
}
