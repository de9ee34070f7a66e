//! Closed-form MAP interpolation weights.
//!
//! Each window `k` blends its pixels with the window mean,
//! `J_k(q) = alpha_k I(q) + (1 - alpha_k) mu_k` (self-guided) or
//! `J_k(q) = mu_k + sign(phi_k) alpha_k (G(q) - nu_k)` (guided), and `alpha_k`
//! minimises a Gaussian data term plus the negative log of a generalised
//! Gamma prior `p(alpha) ~ alpha^(kappa eps) exp(-eps alpha^2 / 2)`:
//!
//! * self-guided: `D = s2 (alpha - 1)^2 / 2 + eps alpha^2 / 2 - kappa eps ln alpha`
//! * guided: `D = v2 alpha^2 / 2 - |phi| alpha + eps alpha^2 / 2 - kappa eps ln alpha`
//!
//! Both costs are convex for `alpha > 0` and the stationary point is the
//! positive root of a quadratic.

use crate::error::Result;
use crate::field::ScalarField;
use crate::imgcore::PatchStats;
use crate::par;
use crate::ssfilter::params::FilterParams;

/// Per-window weights for one plane.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaField {
    /// MAP interpolation weight, always `>= 0`.
    pub alpha: ScalarField,
    /// Signed weight `sign(phi) * alpha` of the guided form; `None` when self-guided.
    pub beta: Option<ScalarField>,
    /// Classic guided-filter coefficient for the same window.
    pub a: ScalarField,
}

impl AlphaField {
    /// Sharpening gain `alpha - 1`.
    pub fn gain(&self) -> ScalarField {
        self.alpha.map(|a| a - 1.0)
    }
}

/// Self-guided weight for one window: returns `(a, alpha)`.
#[inline]
pub fn alpha_self_value(sigma2: f64, epsilon: f64, kappa: f64) -> (f64, f64) {
    let denom = sigma2 + epsilon;
    let a = sigma2 / denom;
    let one_minus_a = epsilon / denom;
    let alpha = 0.5 * (a + (a * a + 4.0 * kappa * one_minus_a).sqrt());
    (a, alpha)
}

/// Guided weight for one window: returns `(a, alpha, beta)`.
///
/// `beta` takes the sign of the covariance with `sign(0) = 0`, so windows
/// uncorrelated with the guide collapse to their mean.
#[inline]
pub fn alpha_guided_value(phi: f64, varsigma2: f64, epsilon: f64, kappa: f64) -> (f64, f64, f64) {
    let denom = varsigma2 + epsilon;
    let a = phi / denom;
    let alpha = 0.5 * (a.abs() + (a * a + 4.0 * kappa * epsilon / denom).sqrt());
    let beta = if phi > 0.0 {
        alpha
    } else if phi < 0.0 {
        -alpha
    } else {
        0.0
    };
    (a, alpha, beta)
}

pub fn alpha_self(sigma2: &ScalarField, params: &FilterParams) -> Result<AlphaField> {
    params.validate_for(sigma2.width(), sigma2.height())?;
    let (w, h) = (sigma2.width(), sigma2.height());
    let mut a = vec![0.0; w * h];
    let mut alpha = vec![0.0; w * h];
    par::fill_indexed(&mut a, |i| sigma2.data()[i] / (sigma2.data()[i] + params.epsilon));
    par::fill_indexed(&mut alpha, |i| {
        alpha_self_value(sigma2.data()[i], params.epsilon, params.kappa.at(i)).1
    });
    Ok(AlphaField {
        alpha: ScalarField::from_raw(w, h, alpha),
        beta: None,
        a: ScalarField::from_raw(w, h, a),
    })
}

pub fn alpha_guided(stats: &PatchStats, params: &FilterParams) -> Result<AlphaField> {
    let (w, h) = (stats.phi.width(), stats.phi.height());
    params.validate_for(w, h)?;
    let (phi, v2) = (stats.phi.data(), stats.varsigma2.data());
    let eps = params.epsilon;
    let mut a = vec![0.0; w * h];
    let mut alpha = vec![0.0; w * h];
    let mut beta = vec![0.0; w * h];
    par::fill_indexed(&mut a, |i| phi[i] / (v2[i] + eps));
    par::fill_indexed(&mut alpha, |i| alpha_guided_value(phi[i], v2[i], eps, params.kappa.at(i)).1);
    par::fill_indexed(&mut beta, |i| alpha_guided_value(phi[i], v2[i], eps, params.kappa.at(i)).2);
    Ok(AlphaField {
        alpha: ScalarField::from_raw(w, h, alpha),
        beta: Some(ScalarField::from_raw(w, h, beta)),
        a: ScalarField::from_raw(w, h, a),
    })
}
