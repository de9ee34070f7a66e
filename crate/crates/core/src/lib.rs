//! Edge-aware smoothing-sharpening filter.
//!
//! A single gain `kappa` moves the filter from edge-preserving smoothing
//! (`kappa < 1`) through the identity (`kappa = 1`, self-guided) to halo-free
//! sharpening (`kappa > 1`). The crate provides the filter itself
//! ([`ssfilter`]), its image substrate ([`imgcore`]), per-pixel gain maps
//! ([`kappamap`]), end-to-end applications ([`pipelines`]) and evaluation
//! metrics ([`metrics`]).
//!
//! All per-pixel work runs row-parallel on rayon when the `parallel` feature
//! is enabled (the default). Results are bit-identical either way.

pub mod error;
pub mod field;
pub mod imgcore;
pub mod io;
pub mod kappamap;
pub mod metrics;
pub(crate) mod par;
pub mod pipelines;
pub mod ssfilter;
pub mod synthetic;

pub use error::{Error, Result};
pub use field::{Image, ScalarField};
pub use ssfilter::{filter, filter_fixed_alpha, ColorMode, FilterParams, Kappa, Weighting};
