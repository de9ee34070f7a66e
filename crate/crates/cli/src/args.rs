use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ssfilt_core::pipelines::Preset;

use crate::config::{Overrides, WeightsArg};

fn presets_help() -> String {
    let mut s = String::from("Presets (--preset NAME or `preset = NAME` in a config file):\n");
    for p in Preset::ALL {
        s.push_str(&format!("  {:<16} {}\n", p.name(), p.describe()));
    }
    s.push_str("\nSettings are layered: preset, then --config file, then flags.");
    s
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    s.parse().map_err(|e: ssfilt_core::Error| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "ssfilt", version, about = "Edge-aware smoothing and sharpening with a single gain kappa")]
#[command(after_help = presets_help())]
pub struct Cli {
    /// Worker threads; 0 picks one per core
    #[arg(long, global = true, env = "SSFILT_THREADS", default_value_t = 0)]
    pub threads: usize,

    /// More log output (repeatable)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    /// Errors only
    #[arg(short, long, global = true, conflicts_with = "verbose")]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

/// Filter, NLT, blur-feature and mask settings shared by every image command.
#[derive(Debug, Args, Default)]
pub struct ParamArgs {
    /// Named parameter set to start from
    #[arg(long, value_parser = parse_preset, help_heading = "Parameters")]
    pub preset: Option<Preset>,

    /// `key = value` file applied over the preset
    #[arg(long, value_name = "PATH", help_heading = "Parameters")]
    pub config: Option<PathBuf>,

    /// Window radius r (window side 2r+1)
    #[arg(long, help_heading = "Filter")]
    pub radius: Option<usize>,

    /// Regularisation epsilon (> 0)
    #[arg(long, help_heading = "Filter")]
    pub epsilon: Option<f64>,

    /// Scalar gain: <1 smooths, 1 is identity when self-guided, >1 sharpens
    #[arg(long, help_heading = "Filter")]
    pub kappa: Option<f64>,

    /// Per-pixel gain map (PFM, same size as the input)
    #[arg(long, value_name = "PATH", conflicts_with = "kappa", help_heading = "Filter")]
    pub kappa_map: Option<PathBuf>,

    /// Adaptive-weight scale s (> 0)
    #[arg(long, help_heading = "Filter")]
    pub scale: Option<f64>,

    /// Window weighting
    #[arg(long, value_enum, help_heading = "Filter")]
    pub weights: Option<WeightsArg>,

    /// Repeat the filter N times
    #[arg(long, help_heading = "Filter")]
    pub iterations: Option<usize>,

    /// Filter only the HSV value channel
    #[arg(long, help_heading = "Filter")]
    pub hsv: bool,

    /// Gain at low feature values
    #[arg(long, help_heading = "Gain map")]
    pub kappa_min: Option<f64>,

    /// Gain at high feature values
    #[arg(long, help_heading = "Gain map")]
    pub kappa_max: Option<f64>,

    /// Sigmoid growth rate c
    #[arg(long, help_heading = "Gain map")]
    pub growth: Option<f64>,

    /// Sigmoid midpoint t0 in [0, 1]
    #[arg(long, help_heading = "Gain map")]
    pub midpoint: Option<f64>,

    /// Local-entropy window side (odd)
    #[arg(long, help_heading = "Gain map")]
    pub window: Option<usize>,

    /// Guided-filter radius refining the blur feature
    #[arg(long, help_heading = "Gain map")]
    pub refine_radius: Option<usize>,

    /// Guided-filter epsilon refining the blur feature
    #[arg(long, help_heading = "Gain map")]
    pub refine_epsilon: Option<f64>,

    /// Use the mask as is, without guided feathering
    #[arg(long, help_heading = "Gain map")]
    pub no_mask_refine: bool,

    /// Guided-filter radius feathering the mask
    #[arg(long, conflicts_with = "no_mask_refine", help_heading = "Gain map")]
    pub mask_radius: Option<usize>,

    /// Guided-filter epsilon feathering the mask
    #[arg(long, conflicts_with = "no_mask_refine", help_heading = "Gain map")]
    pub mask_epsilon: Option<f64>,
}

impl ParamArgs {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            preset: self.preset,
            radius: self.radius,
            epsilon: self.epsilon,
            kappa: self.kappa,
            scale: self.scale,
            weights: self.weights,
            iterations: self.iterations,
            hsv: self.hsv.then_some(true),
            kappa_min: self.kappa_min,
            kappa_max: self.kappa_max,
            growth: self.growth,
            midpoint: self.midpoint,
            window: self.window,
            refine_radius: self.refine_radius,
            refine_epsilon: self.refine_epsilon,
            mask_refine: self.no_mask_refine.then_some(false),
            mask_radius: self.mask_radius,
            mask_epsilon: self.mask_epsilon,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BlurModeArg {
    /// Smooth defocused regions, keep in-focus ones
    Smooth,
    /// Sharpen defocused regions, keep in-focus ones
    Sharpen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KappaSource {
    /// Depth map, near = 0 (default preset portrait-sdof)
    Depth,
    /// Defocus estimated from the image itself (default preset blur)
    Blur,
    /// Protection mask in [0, 1], needs --guide (default preset face)
    Mask,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the filter once over an image
    #[command(after_help = presets_help())]
    Filter {
        /// Self-guided (the default)
        #[arg(long = "self", conflicts_with = "guide")]
        self_guided: bool,
        /// External guide image (1 channel or as many as the input)
        #[arg(long, value_name = "PATH")]
        guide: Option<PathBuf>,
        #[command(flatten)]
        params: ParamArgs,
        input: PathBuf,
        output: PathBuf,
    },
    /// Write a per-pixel gain map as PFM
    #[command(after_help = presets_help())]
    Kappa {
        #[arg(value_enum)]
        source: KappaSource,
        /// Depth map, image or mask, depending on the source
        input: PathBuf,
        /// Output .pfm
        output: PathBuf,
        /// Image guiding the mask refinement
        #[arg(long, value_name = "PATH")]
        guide: Option<PathBuf>,
        /// Which regions get the strong gain (blur source only)
        #[arg(long, value_enum, default_value_t = BlurModeArg::Smooth)]
        mode: BlurModeArg,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Synthetic shallow depth of field from a depth map (default preset portrait-sdof)
    #[command(after_help = presets_help())]
    Sdof {
        input: PathBuf,
        /// Depth map in [0, 1], 0 nearest
        depth: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Defocus-guided smoothing or sharpening (default preset blur)
    #[command(after_help = presets_help())]
    Blur {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = BlurModeArg::Smooth)]
        mode: BlurModeArg,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Sharpen everything except a protected region (default preset face)
    #[command(after_help = presets_help())]
    Face {
        input: PathBuf,
        /// Skin mask in [0, 1], 1 protected
        mask: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Transfer flash detail onto a no-flash image (default preset flash)
    #[command(after_help = presets_help())]
    Flashfusion {
        noflash: PathBuf,
        flash: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Fuse low-resolution bands with a panchromatic plane (default preset pansharpen)
    #[command(after_help = presets_help())]
    Pansharpen {
        /// Multispectral image
        ms: PathBuf,
        /// Panchromatic plane (multichannel files are reduced to luma)
        pan: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Print evaluation metrics
    Metric {
        #[command(subcommand)]
        metric: MetricCommand,
        /// CSV rows with a header instead of key = value lines
        #[arg(long, global = true)]
        csv: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum MetricCommand {
    /// Total variation, optionally inside a mask
    Tv {
        image: PathBuf,
        #[arg(long, value_name = "PATH")]
        mask: Option<PathBuf>,
    },
    /// Relative dimensionless global error against a reference
    Ergas {
        fused: PathBuf,
        reference: PathBuf,
        /// Resolution ratio prefactor
        #[arg(long, default_value_t = 4.0)]
        ratio: f64,
    },
    /// Mean, variance and total variation inside a mask
    Region { image: PathBuf, mask: PathBuf },
}
