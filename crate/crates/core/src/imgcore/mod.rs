//! Image substrate: padding, box filtering, window statistics, colour,
//! resampling, histogram specification and local entropy.

pub mod boxfilter;
pub mod color;
pub mod entropy;
pub mod histogram;
pub mod resample;
pub mod stats;

pub use boxfilter::{box_filter, pad_symmetric, reflect};
pub use color::{hsv_to_rgb, rgb_to_hsv};
pub use entropy::local_entropy;
pub use histogram::histogram_match;
pub use resample::{decimate, upsample_nearest};
pub use stats::{mean_and_variance, patch_stats, PatchStats};
