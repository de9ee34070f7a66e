//! Per-pixel gain maps from feature maps.
//!
//! A feature map `t` (nominally in `[0, 1]`) is pushed through a Gompertz
//! sigmoid
//!
//! `kappa(t) = (kappa_max - kappa_min) exp(-0.69 exp(-c (t - t0))) + kappa_min`
//!
//! so that low-feature pixels get gains near `kappa_min` and high-feature
//! pixels gains near `kappa_max`. The constant 0.69 (close to `ln 2`) puts
//! the curve's value at `t0` about half way between the two limits.

use log::warn;

use crate::error::{Error, Result};
use crate::field::{Image, ScalarField};
use crate::imgcore::local_entropy;
use crate::ssfilter::guided_filter;

/// Displacement coefficient of the Gompertz curve.
pub const GOMPERTZ_DISPLACEMENT: f64 = 0.69;

/// Parameters of the feature-to-gain transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NltParams {
    pub kappa_min: f64,
    pub kappa_max: f64,
    /// Growth rate `c`; positive values make the gain increase with `t`.
    pub growth: f64,
    /// Feature value `t0` at the curve's midpoint.
    pub midpoint: f64,
}

impl Default for NltParams {
    fn default() -> Self {
        Self {
            kappa_min: 0.5,
            kappa_max: 1.5,
            growth: 10.0,
            midpoint: 0.3,
        }
    }
}

impl NltParams {
    pub fn new(kappa_min: f64, kappa_max: f64, growth: f64, midpoint: f64) -> Self {
        Self {
            kappa_min,
            kappa_max,
            growth,
            midpoint,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa_min.is_finite() && self.kappa_min >= 0.0) {
            return Err(Error::param("kappa_min", format!("must be finite and >= 0, got {}", self.kappa_min)));
        }
        if !self.kappa_max.is_finite() {
            return Err(Error::param("kappa_max", "must be finite"));
        }
        if self.kappa_min > self.kappa_max {
            return Err(Error::param(
                "kappa_min",
                format!(
                    "kappa_min ({}) exceeds kappa_max ({})",
                    self.kappa_min, self.kappa_max
                ),
            ));
        }
        if !self.growth.is_finite() {
            return Err(Error::param("growth", "must be finite"));
        }
        if !(0.0..=1.0).contains(&self.midpoint) {
            return Err(Error::param("midpoint", format!("must lie in [0, 1], got {}", self.midpoint)));
        }
        Ok(())
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        let range = self.kappa_max - self.kappa_min;
        let inner = (-self.growth * (t - self.midpoint)).exp();
        range * (-GOMPERTZ_DISPLACEMENT * inner).exp() + self.kappa_min
    }
}

/// Pointwise Gompertz transform of a feature map.
pub fn gompertz_kappa(t: &ScalarField, params: &NltParams) -> Result<ScalarField> {
    params.validate()?;
    // exp(-c (t - t0)) overflows to +inf far below the midpoint, which still
    // evaluates to exactly kappa_min
    Ok(t.map(|v| params.eval(v)))
}

/// Depth (0 = nearest) to feature (1 = nearest): `t = 1 - D`.
pub fn depth_to_feature(depth: &ScalarField) -> ScalarField {
    let (lo, hi) = depth.min_max();
    if lo < 0.0 || hi > 1.0 {
        warn!("depth map spans [{lo}, {hi}]; clamping to [0, 1]");
    }
    depth.map(|d| 1.0 - d.clamp(0.0, 1.0))
}

/// Settings of the local-entropy focus measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlurFeatureParams {
    /// Odd side length of the entropy window.
    pub window: usize,
    pub refine_radius: usize,
    pub refine_epsilon: f64,
}

impl Default for BlurFeatureParams {
    fn default() -> Self {
        Self {
            window: 33,
            refine_radius: 32,
            refine_epsilon: 0.01,
        }
    }
}

/// Focus feature: local entropy of the luma, refined by a guided filter
/// against the luma, divided by the largest entropy the window can hold
/// (`log2(min(window^2, 256))`) and clamped to `[0, 1]`.
///
/// In-focus texture scores near 1, defocused or flat regions near 0.
pub fn blur_to_feature(img: &Image, params: &BlurFeatureParams) -> Result<ScalarField> {
    if !(params.refine_epsilon.is_finite() && params.refine_epsilon > 0.0) {
        return Err(Error::param("refine_epsilon", "must be finite and > 0"));
    }
    let luma = img.luma();
    let entropy = local_entropy(&luma, params.window)?;
    if entropy.data().iter().all(|&e| e == 0.0) {
        return Ok(ScalarField::filled(img.width(), img.height(), 0.0));
    }
    let refined = guided_filter(&entropy, &luma, params.refine_radius, params.refine_epsilon)?;
    let cap = ((params.window * params.window).min(256) as f64).log2();
    Ok(refined.map(|e| (e / cap).clamp(0.0, 1.0)))
}

/// Guided-filter feathering applied to a binary mask.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaskRefine {
    pub radius: usize,
    pub epsilon: f64,
}

impl Default for MaskRefine {
    fn default() -> Self {
        Self {
            radius: 4,
            epsilon: 0.01,
        }
    }
}

/// Protection mask (1 = protect, e.g. skin) to feature `t = 1 - mask`,
/// optionally feathered against the image luma.
pub fn mask_to_feature(mask: &ScalarField, refine: Option<MaskRefine>, guide: &Image) -> Result<ScalarField> {
    guide.check_field_dims(mask)?;
    let (lo, hi) = mask.min_max();
    if lo < 0.0 || hi > 1.0 {
        return Err(Error::param("mask", format!("values must lie in [0, 1], found [{lo}, {hi}]")));
    }
    let t = mask.map(|m| 1.0 - m);
    match refine {
        None => Ok(t),
        Some(MaskRefine { radius, epsilon }) => {
            let feathered = guided_filter(&t, &guide.luma(), radius, epsilon)?;
            Ok(feathered.clamp01())
        }
    }
}
