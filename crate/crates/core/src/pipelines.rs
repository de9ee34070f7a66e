//! End-to-end applications built on the filter and the gain maps.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::{Image, ScalarField};
use crate::imgcore::{histogram_match, upsample_nearest};
use crate::kappamap::{
    blur_to_feature, depth_to_feature, gompertz_kappa, mask_to_feature, BlurFeatureParams, MaskRefine, NltParams,
};
use crate::ssfilter::{filter, ColorMode, FilterParams, Kappa};

/// Everything a pipeline needs besides its images.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub filter: FilterParams,
    pub nlt: NltParams,
    pub blur: BlurFeatureParams,
    /// Feathering of protection masks; `None` uses the mask as is.
    pub mask_refine: Option<MaskRefine>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            filter: FilterParams::default(),
            nlt: NltParams::default(),
            blur: BlurFeatureParams::default(),
            mask_refine: Some(MaskRefine::default()),
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        self.filter.validate()?;
        self.nlt.validate()?;
        if self.blur.window.is_multiple_of(2) {
            return Err(Error::param("window", format!("must be odd, got {}", self.blur.window)));
        }
        if !(self.blur.refine_epsilon.is_finite() && self.blur.refine_epsilon > 0.0) {
            return Err(Error::param("refine_epsilon", "must be finite and > 0"));
        }
        if let Some(m) = self.mask_refine {
            if !(m.epsilon.is_finite() && m.epsilon > 0.0) {
                return Err(Error::param("mask_refine_epsilon", "must be finite and > 0"));
            }
        }
        Ok(())
    }

    fn with_kappa_field(&self, kappa: ScalarField) -> FilterParams {
        self.filter.clone().with_kappa(Kappa::Field(kappa))
    }
}

/// Named parameter sets for the built-in applications.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Smoothing,
    PortraitSdof,
    DistantSdof,
    Face,
    Blur,
    FlashFusion,
    GuidedBaseline,
    Pansharpen,
}

impl Preset {
    pub const ALL: [Preset; 8] = [
        Preset::Smoothing,
        Preset::PortraitSdof,
        Preset::DistantSdof,
        Preset::Face,
        Preset::Blur,
        Preset::FlashFusion,
        Preset::GuidedBaseline,
        Preset::Pansharpen,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Smoothing => "smoothing",
            Preset::PortraitSdof => "portrait-sdof",
            Preset::DistantSdof => "distant-sdof",
            Preset::Face => "face",
            Preset::Blur => "blur",
            Preset::FlashFusion => "flash",
            Preset::GuidedBaseline => "guided-baseline",
            Preset::Pansharpen => "pansharpen",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Preset::Smoothing => "strong edge-preserving smoothing: r=11 eps=0.01 kappa=0.01 scale=1",
            Preset::PortraitSdof => "depth-of-field on a close subject: r=3 eps=10 iters=1 kappa 0..2",
            Preset::DistantSdof => "depth-of-field on a distant subject: r=1 eps=100 iters=10 kappa 0..2",
            Preset::Face => "portrait enhancement sparing skin: r=3 eps=0.01 iters=1 kappa 0.1..5",
            Preset::Blur => "defocus-guided smoothing/sharpening: r=3 eps=0.01 kappa 0..3 window=33 refine r=32 eps=0.01",
            Preset::FlashFusion => "flash/no-flash detail transfer: r=25 eps=1e-6 iters=10 scale=1 kappa=10",
            Preset::GuidedBaseline => "classic guided filter: r=8 eps=0.004 kappa=0 uniform weights",
            Preset::Pansharpen => "pan-sharpening: r=11 eps=0.1 kappa=1.2 scale=0.5",
        }
    }

    pub fn config(self) -> PipelineConfig {
        let base = PipelineConfig::default();
        let (filter, nlt) = match self {
            Preset::Smoothing => (FilterParams::new(11, 0.01, 0.01).with_scale(1.0), base.nlt),
            Preset::PortraitSdof => (FilterParams::new(3, 10.0, 1.0), NltParams::new(0.0, 2.0, 10.0, 0.5)),
            Preset::DistantSdof => (
                FilterParams::new(1, 100.0, 1.0).with_iterations(10),
                NltParams::new(0.0, 2.0, 10.0, 0.5),
            ),
            Preset::Face => (FilterParams::new(3, 0.01, 1.0), NltParams::new(0.1, 5.0, 10.0, 0.5)),
            Preset::Blur => (FilterParams::new(3, 0.01, 1.0), NltParams::new(0.0, 3.0, 20.0, 0.6)),
            Preset::FlashFusion => (
                FilterParams::new(25, 1e-6, 10.0).with_scale(1.0).with_iterations(10),
                base.nlt,
            ),
            Preset::GuidedBaseline => (FilterParams::new(8, 0.004, 0.0).uniform(), base.nlt),
            Preset::Pansharpen => (FilterParams::new(11, 0.1, 1.2).with_scale(0.5), base.nlt),
        };
        PipelineConfig { filter, nlt, ..base }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Preset> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Preset::ALL.iter().map(|p| p.name()).collect();
                Error::param("preset", format!("unknown preset `{s}` (expected one of {})", names.join(", ")))
            })
    }
}

/// Gain map for the depth-of-field effect: near pixels toward `kappa_max`.
pub fn sdof_kappa(depth: &ScalarField, cfg: &PipelineConfig) -> Result<ScalarField> {
    gompertz_kappa(&depth_to_feature(depth), &cfg.nlt)
}

/// Smooths with distance and sharpens near objects.
pub fn sdof(img: &Image, depth: &ScalarField, cfg: &PipelineConfig) -> Result<Image> {
    cfg.validate()?;
    img.check_field_dims(depth)?;
    filter(img, None, &cfg.with_kappa_field(sdof_kappa(depth, cfg)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlurMode {
    /// Defocused regions get `kappa < 1`, in-focus regions stay at 1.
    SmoothDefocus,
    /// Defocused regions get `kappa > 1`, in-focus regions stay at 1.
    SharpenDefocus,
}

/// Gain map for defocus-guided filtering.
///
/// The focus feature `t` runs from 0 (defocused) to 1 (sharp). Smoothing
/// maps `t` onto `[kappa_min, 1]`; sharpening maps `1 - t` onto
/// `[1, kappa_max]` with the midpoint mirrored, so `midpoint` and `growth`
/// keep their meaning in both modes.
pub fn blur_kappa(img: &Image, cfg: &PipelineConfig, mode: BlurMode) -> Result<ScalarField> {
    cfg.validate()?;
    let t = blur_to_feature(img, &cfg.blur)?;
    let nlt = &cfg.nlt;
    match mode {
        BlurMode::SmoothDefocus => {
            if nlt.kappa_min > 1.0 {
                return Err(Error::param("kappa_min", "must be <= 1 when smoothing defocused regions"));
            }
            gompertz_kappa(&t, &NltParams { kappa_max: 1.0, ..*nlt })
        }
        BlurMode::SharpenDefocus => {
            if nlt.kappa_max < 1.0 {
                return Err(Error::param("kappa_max", "must be >= 1 when sharpening defocused regions"));
            }
            let mirrored = NltParams {
                kappa_min: 1.0,
                midpoint: 1.0 - nlt.midpoint,
                ..*nlt
            };
            gompertz_kappa(&t.map(|v| 1.0 - v), &mirrored)
        }
    }
}

pub fn blur_guided(img: &Image, cfg: &PipelineConfig, mode: BlurMode) -> Result<Image> {
    let kappa = blur_kappa(img, cfg, mode)?;
    filter(img, None, &cfg.with_kappa_field(kappa))
}

/// Gain map for face enhancement: protected (mask = 1) pixels toward `kappa_min`.
pub fn face_kappa(img: &Image, skin_mask: &ScalarField, cfg: &PipelineConfig) -> Result<ScalarField> {
    gompertz_kappa(&mask_to_feature(skin_mask, cfg.mask_refine, img)?, &cfg.nlt)
}

/// Sharpens everything outside the mask while gently smoothing inside it.
pub fn face_enhance(img: &Image, skin_mask: &ScalarField, cfg: &PipelineConfig) -> Result<Image> {
    cfg.validate()?;
    let kappa = face_kappa(img, skin_mask, cfg)?;
    filter(img, None, &cfg.with_kappa_field(kappa))
}

/// Iteratively filters the no-flash shot against the flash shot.
pub fn flash_noflash(noflash: &Image, flash: &Image, cfg: &PipelineConfig) -> Result<Image> {
    cfg.validate()?;
    noflash.check_dims(flash)?;
    filter(noflash, Some(flash), &cfg.filter)
}

/// Nearest-neighbour upsampling of `ms` to the PAN grid, per-band filtering
/// against PAN, then per-band histogram matching back onto `ms`.
pub fn pansharpen(ms: &Image, pan: &ScalarField, cfg: &PipelineConfig) -> Result<Image> {
    cfg.validate()?;
    if pan.width() < ms.width() || pan.height() < ms.height() {
        return Err(Error::param(
            "pan",
            format!(
                "PAN is {}x{} but must be at least the MS size {}x{}",
                pan.width(),
                pan.height(),
                ms.width(),
                ms.height()
            ),
        ));
    }
    let up = upsample_nearest(ms, pan.width(), pan.height())?;
    let params = cfg.filter.clone().with_color_mode(ColorMode::PerChannel);
    let fused = filter(&up, Some(&Image::gray(pan.clone())), &params)?;
    histogram_match(&fused, ms)
}
