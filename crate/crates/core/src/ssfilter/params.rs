use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::imgcore::boxfilter::check_radius;

/// Smoothing/sharpening gain: below 1 smooths, 1 leaves a self-guided image
/// untouched, above 1 sharpens.
#[derive(Debug, Clone, PartialEq)]
pub enum Kappa {
    Scalar(f64),
    /// Per-pixel gain, read at the centre of each window.
    Field(ScalarField),
}

impl Kappa {
    #[inline]
    pub fn at(&self, i: usize) -> f64 {
        match self {
            Kappa::Scalar(k) => *k,
            Kappa::Field(f) => f.data()[i],
        }
    }
}

impl From<f64> for Kappa {
    fn from(k: f64) -> Self {
        Kappa::Scalar(k)
    }
}

impl From<ScalarField> for Kappa {
    fn from(f: ScalarField) -> Self {
        Kappa::Field(f)
    }
}

/// How the overlapping window estimates of a pixel are averaged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weighting {
    /// Plain mean over all windows, as in the classic guided filter.
    Uniform,
    /// `w = 1 / (1 + (v / (scale * mean(v)))^2)` where `v` is the window
    /// variance of the guide; high-variance windows count less.
    Adaptive { scale: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ColorMode {
    /// Filter every channel on its own.
    #[default]
    PerChannel,
    /// Filter only the HSV value channel and recombine with hue and saturation.
    HsvValue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterParams {
    pub radius: usize,
    /// Regularisation, the inverse squared scale of the gain prior.
    pub epsilon: f64,
    pub kappa: Kappa,
    pub weighting: Weighting,
    pub iterations: usize,
    pub color_mode: ColorMode,
}

impl Default for FilterParams {
    fn default() -> Self {
        Self {
            radius: 11,
            epsilon: 0.01,
            kappa: Kappa::Scalar(1.0),
            weighting: Weighting::Adaptive { scale: 1.0 },
            iterations: 1,
            color_mode: ColorMode::PerChannel,
        }
    }
}

impl FilterParams {
    pub fn new(radius: usize, epsilon: f64, kappa: impl Into<Kappa>) -> Self {
        Self {
            radius,
            epsilon,
            kappa: kappa.into(),
            ..Self::default()
        }
    }

    pub fn with_kappa(mut self, kappa: impl Into<Kappa>) -> Self {
        self.kappa = kappa.into();
        self
    }

    pub fn with_weighting(mut self, weighting: Weighting) -> Self {
        self.weighting = weighting;
        self
    }

    pub fn with_scale(self, scale: f64) -> Self {
        self.with_weighting(Weighting::Adaptive { scale })
    }

    pub fn uniform(self) -> Self {
        self.with_weighting(Weighting::Uniform)
    }

    pub fn with_iterations(mut self, iterations: usize) -> Self {
        self.iterations = iterations;
        self
    }

    pub fn with_color_mode(mut self, mode: ColorMode) -> Self {
        self.color_mode = mode;
        self
    }

    /// Checks the scalar parameters, independent of any image.
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::param("epsilon", format!("must be finite and > 0, got {}", self.epsilon)));
        }
        if self.iterations == 0 {
            return Err(Error::param("iterations", "must be at least 1"));
        }
        if let Weighting::Adaptive { scale } = self.weighting {
            if !(scale.is_finite() && scale > 0.0) {
                return Err(Error::param("scale", format!("must be finite and > 0, got {scale}")));
            }
        }
        match &self.kappa {
            Kappa::Scalar(k) if !(k.is_finite() && *k >= 0.0) => {
                Err(Error::param("kappa", format!("must be finite and >= 0, got {k}")))
            }
            Kappa::Field(f) if f.data().iter().any(|&k| k < 0.0) => {
                Err(Error::param("kappa", "kappa map has negative entries"))
            }
            _ => Ok(()),
        }
    }

    /// Full validation against the dimensions of the image to be filtered.
    pub fn validate_for(&self, width: usize, height: usize) -> Result<()> {
        self.validate()?;
        check_radius(width, height, self.radius)?;
        if let Kappa::Field(f) = &self.kappa {
            if f.width() != width || f.height() != height {
                return Err(Error::DimensionMismatch {
                    expected_w: width,
                    expected_h: height,
                    got_w: f.width(),
                    got_h: f.height(),
                });
            }
        }
        Ok(())
    }
}
