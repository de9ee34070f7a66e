//! Parameter overlays from config files and flags.
//!
//! A config file holds `key = value` lines; `#` starts a comment. Settings
//! are layered preset, then file, then flags, and the result is validated
//! once.

use std::path::Path;
use std::str::FromStr;

use ssfilt_core::kappamap::MaskRefine;
use ssfilt_core::pipelines::{PipelineConfig, Preset};
use ssfilt_core::{ColorMode, Kappa, Weighting};

use crate::error::{CliError, CliResult};

pub const KEYS: &[&str] = &[
    "preset",
    "radius",
    "epsilon",
    "kappa",
    "scale",
    "weights",
    "iterations",
    "hsv",
    "kappa_min",
    "kappa_max",
    "growth",
    "midpoint",
    "window",
    "refine_radius",
    "refine_epsilon",
    "mask_refine",
    "mask_radius",
    "mask_epsilon",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum WeightsArg {
    Uniform,
    Adaptive,
}

impl FromStr for WeightsArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "uniform" => Ok(WeightsArg::Uniform),
            "adaptive" => Ok(WeightsArg::Adaptive),
            _ => Err(format!("expected `uniform` or `adaptive`, got `{s}`")),
        }
    }
}

/// Optional settings; `None` leaves the underlying value alone.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub preset: Option<Preset>,
    pub radius: Option<usize>,
    pub epsilon: Option<f64>,
    pub kappa: Option<f64>,
    pub scale: Option<f64>,
    pub weights: Option<WeightsArg>,
    pub iterations: Option<usize>,
    pub hsv: Option<bool>,
    pub kappa_min: Option<f64>,
    pub kappa_max: Option<f64>,
    pub growth: Option<f64>,
    pub midpoint: Option<f64>,
    pub window: Option<usize>,
    pub refine_radius: Option<usize>,
    pub refine_epsilon: Option<f64>,
    pub mask_refine: Option<bool>,
    pub mask_radius: Option<usize>,
    pub mask_epsilon: Option<f64>,
}

fn parse_value<T: FromStr>(key: &str, raw: &str, expected: &str) -> CliResult<T> {
    raw.parse()
        .map_err(|_| CliError::usage(format!("`{key}`: expected {expected}, got `{raw}`")))
}

impl Overrides {
    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, raw: &str) -> CliResult<()> {
        const INT: &str = "a non-negative integer";
        const REAL: &str = "a number";
        const BOOL: &str = "`true` or `false`";
        match key {
            "preset" => self.preset = Some(raw.parse().map_err(|e: ssfilt_core::Error| CliError::usage(e.to_string()))?),
            "radius" => self.radius = Some(parse_value(key, raw, INT)?),
            "epsilon" => self.epsilon = Some(parse_value(key, raw, REAL)?),
            "kappa" => self.kappa = Some(parse_value(key, raw, REAL)?),
            "scale" => self.scale = Some(parse_value(key, raw, REAL)?),
            "weights" => self.weights = Some(parse_value(key, raw, "`uniform` or `adaptive`")?),
            "iterations" | "iters" => self.iterations = Some(parse_value(key, raw, INT)?),
            "hsv" => self.hsv = Some(parse_value(key, raw, BOOL)?),
            "kappa_min" => self.kappa_min = Some(parse_value(key, raw, REAL)?),
            "kappa_max" => self.kappa_max = Some(parse_value(key, raw, REAL)?),
            "growth" => self.growth = Some(parse_value(key, raw, REAL)?),
            "midpoint" => self.midpoint = Some(parse_value(key, raw, REAL)?),
            "window" => self.window = Some(parse_value(key, raw, INT)?),
            "refine_radius" => self.refine_radius = Some(parse_value(key, raw, INT)?),
            "refine_epsilon" => self.refine_epsilon = Some(parse_value(key, raw, REAL)?),
            "mask_refine" => self.mask_refine = Some(parse_value(key, raw, BOOL)?),
            "mask_radius" => self.mask_radius = Some(parse_value(key, raw, INT)?),
            "mask_epsilon" => self.mask_epsilon = Some(parse_value(key, raw, REAL)?),
            _ => return Err(CliError::usage(format!("unknown config key `{key}` (known keys: {})", KEYS.join(", ")))),
        }
        Ok(())
    }

    /// Values in `top` win over values in `self`.
    pub fn layered(self, top: Overrides) -> Overrides {
        macro_rules! pick {
            ($($f:ident),*) => { Overrides { $($f: top.$f.or(self.$f)),* } };
        }
        pick!(
            preset, radius, epsilon, kappa, scale, weights, iterations, hsv, kappa_min, kappa_max, growth,
            midpoint, window, refine_radius, refine_epsilon, mask_refine, mask_radius, mask_epsilon
        )
    }

    /// Starts from the chosen preset (or `fallback`) and applies every set value.
    pub fn resolve(&self, fallback: Option<Preset>) -> CliResult<PipelineConfig> {
        let mut cfg = self.preset.or(fallback).map(Preset::config).unwrap_or_default();
        let f = &mut cfg.filter;
        if let Some(v) = self.radius {
            f.radius = v;
        }
        if let Some(v) = self.epsilon {
            f.epsilon = v;
        }
        if let Some(v) = self.kappa {
            f.kappa = Kappa::Scalar(v);
        }
        if let Some(v) = self.iterations {
            f.iterations = v;
        }
        if let Some(hsv) = self.hsv {
            f.color_mode = if hsv { ColorMode::HsvValue } else { ColorMode::PerChannel };
        }
        let current_scale = match f.weighting {
            Weighting::Adaptive { scale } => scale,
            Weighting::Uniform => 1.0,
        };
        match (self.weights, self.scale) {
            (Some(WeightsArg::Uniform), Some(_)) => {
                return Err(CliError::usage("`scale`: only meaningful with adaptive weights"));
            }
            (Some(WeightsArg::Uniform), None) => f.weighting = Weighting::Uniform,
            (Some(WeightsArg::Adaptive), s) => f.weighting = Weighting::Adaptive { scale: s.unwrap_or(current_scale) },
            (None, Some(s)) => f.weighting = Weighting::Adaptive { scale: s },
            (None, None) => {}
        }
        let n = &mut cfg.nlt;
        n.kappa_min = self.kappa_min.unwrap_or(n.kappa_min);
        n.kappa_max = self.kappa_max.unwrap_or(n.kappa_max);
        n.growth = self.growth.unwrap_or(n.growth);
        n.midpoint = self.midpoint.unwrap_or(n.midpoint);
        let b = &mut cfg.blur;
        b.window = self.window.unwrap_or(b.window);
        b.refine_radius = self.refine_radius.unwrap_or(b.refine_radius);
        b.refine_epsilon = self.refine_epsilon.unwrap_or(b.refine_epsilon);
        let touched = self.mask_radius.is_some() || self.mask_epsilon.is_some();
        cfg.mask_refine = match self.mask_refine {
            Some(false) if touched => {
                return Err(CliError::usage("`mask_radius`/`mask_epsilon`: mask refinement is switched off"))
            }
            Some(false) => None,
            _ => {
                let base = cfg.mask_refine.unwrap_or_default();
                Some(MaskRefine {
                    radius: self.mask_radius.unwrap_or(base.radius),
                    epsilon: self.mask_epsilon.unwrap_or(base.epsilon),
                })
            }
        };
        if cfg.nlt.kappa_min > cfg.nlt.kappa_max {
            return Err(CliError::usage(format!(
                "`kappa_min` ({}) must not exceed `kappa_max` ({})",
                cfg.nlt.kappa_min, cfg.nlt.kappa_max
            )));
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parses config text; errors carry the line number and the offending key.
pub fn parse_config_str(text: &str) -> CliResult<Overrides> {
    let mut out = Overrides::default();
    let mut seen: Vec<&str> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("config line {}: expected `key = value`", i + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        if seen.contains(&key) {
            return Err(CliError::usage(format!("config line {}: `{key}` set twice", i + 1)));
        }
        seen.push(key);
        out.set(key, value)
            .map_err(|e| CliError::usage(format!("config line {}: {e}", i + 1)))?;
    }
    Ok(out)
}

pub fn parse_config(path: &Path) -> CliResult<Overrides> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn msg(r: CliResult<impl std::fmt::Debug>) -> String {
        r.unwrap_err().to_string()
    }

    #[test]
    fn empty_file_gives_defaults() {
        let o = parse_config_str("").unwrap();
        assert_eq!(o, Overrides::default());
        assert_eq!(o.resolve(None).unwrap(), PipelineConfig::default());
        let o = parse_config_str("# only a comment\n\n   \n").unwrap();
        assert_eq!(o.resolve(Some(Preset::Face)).unwrap(), Preset::Face.config());
    }

    #[test]
    fn flash_parameters_parse_to_the_preset_values() {
        let o = parse_config_str("radius = 25\nepsilon = 1e-6\niters = 10\nscale = 1\nkappa = 10 # strong\n").unwrap();
        let f = o.resolve(None).unwrap().filter;
        assert_eq!((f.radius, f.epsilon, f.iterations), (25, 1e-6, 10));
        assert_eq!(f.kappa, Kappa::Scalar(10.0));
        assert_eq!(f.weighting, Weighting::Adaptive { scale: 1.0 });
        assert_eq!(f, Preset::FlashFusion.config().filter);
    }

    #[test]
    fn inverted_kappa_limits_name_both_keys() {
        let m = msg(parse_config_str("kappa_min = 2\nkappa_max = 1").unwrap().resolve(None));
        assert!(m.contains("kappa_min") && m.contains("kappa_max"), "{m}");
    }

    #[test]
    fn errors_name_the_key() {
        let m = msg(parse_config_str("radius = 3\nsmoothness = 4"));
        assert!(m.contains("smoothness") && m.contains("line 2"), "{m}");
        let m = msg(parse_config_str("radius = three"));
        assert!(m.contains("radius") && m.contains("three"), "{m}");
        let m = msg(parse_config_str("epsilon = -1").unwrap().resolve(None));
        assert!(m.contains("epsilon"), "{m}");
        let m = msg(parse_config_str("midpoint = 2").unwrap().resolve(None));
        assert!(m.contains("midpoint"), "{m}");
        let m = msg(parse_config_str("radius = 1\nradius = 2"));
        assert!(m.contains("radius"), "{m}");
        assert!(parse_config_str("radius 3").is_err());
        let m = msg(parse_config_str("weights = uniform\nscale = 2").unwrap().resolve(None));
        assert!(m.contains("scale"), "{m}");
    }

    #[test]
    fn flags_win_over_file_and_file_over_preset() {
        let file = parse_config_str("preset = face\nradius = 7\nepsilon = 0.5").unwrap();
        let flags = Overrides {
            radius: Some(2),
            ..Overrides::default()
        };
        let cfg = file.layered(flags).resolve(Some(Preset::Smoothing)).unwrap();
        assert_eq!((cfg.filter.radius, cfg.filter.epsilon), (2, 0.5));
        assert_eq!(cfg.nlt, Preset::Face.config().nlt);
    }

    #[test]
    fn weights_and_mask_switches() {
        let cfg = parse_config_str("weights = uniform\nhsv = true\nmask_refine = false").unwrap().resolve(None).unwrap();
        assert_eq!(cfg.filter.weighting, Weighting::Uniform);
        assert_eq!(cfg.filter.color_mode, ColorMode::HsvValue);
        assert_eq!(cfg.mask_refine, None);
        let cfg = parse_config_str("preset = guided-baseline\nweights = adaptive").unwrap().resolve(None).unwrap();
        assert_eq!(cfg.filter.weighting, Weighting::Adaptive { scale: 1.0 });
        let cfg = parse_config_str("mask_radius = 9").unwrap().resolve(None).unwrap();
        assert_eq!(cfg.mask_refine.unwrap().radius, 9);
        assert!(parse_config_str("mask_refine = false\nmask_radius = 2").unwrap().resolve(None).is_err());
    }

    #[test]
    fn every_listed_key_is_accepted() {
        for key in KEYS {
            let value = match *key {
                "preset" => "face",
                "weights" => "adaptive",
                "hsv" | "mask_refine" => "true",
                _ => "1",
            };
            Overrides::default().set(key, value).unwrap();
        }
    }
}
