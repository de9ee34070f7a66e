//! Raster containers: single-plane [`ScalarField`] and planar multi-channel [`Image`].

use crate::error::{Error, Result};
use crate::par;

/// A single-channel `f64` raster stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl ScalarField {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::param("dimensions", "width and height must be at least 1"));
        }
        if data.len() != width * height {
            return Err(Error::param(
                "data",
                format!("expected {} samples, got {}", width * height, data.len()),
            ));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("data", "samples must be finite"));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        assert!(width > 0 && height > 0, "empty field");
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f64 + Send + Sync) -> Self {
        let mut out = Self::filled(width, height, 0.0);
        par::for_each_row(&mut out.data, width, |y, row| {
            for (x, v) in row.iter_mut().enumerate() {
                *v = f(x, y);
            }
        });
        out
    }

    /// Internal constructor for buffers produced by our own kernels.
    pub(crate) fn from_raw(width: usize, height: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), width * height);
        Self {
            width,
            height,
            data,
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: f64) {
        self.data[y * self.width + x] = v;
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    pub fn same_dims(&self, other: &ScalarField) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub(crate) fn check_dims(&self, other: &ScalarField) -> Result<()> {
        if self.same_dims(other) {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected_w: self.width,
                expected_h: self.height,
                got_w: other.width,
                got_h: other.height,
            })
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64 + Send + Sync) -> ScalarField {
        let mut out = vec![0.0; self.data.len()];
        par::fill_indexed(&mut out, |i| f(self.data[i]));
        ScalarField::from_raw(self.width, self.height, out)
    }

    /// Pointwise combination of two equally sized fields.
    ///
    /// Panics on a dimension mismatch; callers validate beforehand.
    pub fn zip_map(&self, other: &ScalarField, f: impl Fn(f64, f64) -> f64 + Send + Sync) -> ScalarField {
        assert!(self.same_dims(other), "zip_map on mismatched fields");
        let mut out = vec![0.0; self.data.len()];
        par::fill_indexed(&mut out, |i| f(self.data[i], other.data[i]));
        ScalarField::from_raw(self.width, self.height, out)
    }

    /// Arithmetic mean, summed in index order.
    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.data
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }

    pub fn max_abs_diff(&self, other: &ScalarField) -> f64 {
        assert!(self.same_dims(other));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn clamp01(&self) -> ScalarField {
        self.map(|v| v.clamp(0.0, 1.0))
    }
}

/// Planar image with 1, 3 or 4 channels of nominally `[0, 1]` samples.
///
/// Values may leave `[0, 1]` mid-pipeline; clamping happens at encode time.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    planes: Vec<ScalarField>,
}

impl Image {
    pub fn from_planes(planes: Vec<ScalarField>) -> Result<Self> {
        let Some(first) = planes.first() else {
            return Err(Error::ChannelMismatch("image needs at least one plane".into()));
        };
        if !matches!(planes.len(), 1 | 3 | 4) {
            return Err(Error::ChannelMismatch(format!(
                "unsupported channel count {}",
                planes.len()
            )));
        }
        for p in &planes[1..] {
            first.check_dims(p)?;
        }
        Ok(Self { planes })
    }

    pub fn gray(plane: ScalarField) -> Self {
        Self {
            planes: vec![plane],
        }
    }

    pub fn filled(width: usize, height: usize, channels: usize, value: f64) -> Self {
        Self::from_planes(vec![ScalarField::filled(width, height, value); channels])
            .expect("valid channel count")
    }

    pub fn width(&self) -> usize {
        self.planes[0].width()
    }

    pub fn height(&self) -> usize {
        self.planes[0].height()
    }

    pub fn channels(&self) -> usize {
        self.planes.len()
    }

    pub fn plane(&self, c: usize) -> &ScalarField {
        &self.planes[c]
    }

    pub fn plane_mut(&mut self, c: usize) -> &mut ScalarField {
        &mut self.planes[c]
    }

    pub fn planes(&self) -> &[ScalarField] {
        &self.planes
    }

    pub fn into_planes(self) -> Vec<ScalarField> {
        self.planes
    }

    pub fn same_dims(&self, other: &Image) -> bool {
        self.width() == other.width() && self.height() == other.height()
    }

    pub(crate) fn check_dims(&self, other: &Image) -> Result<()> {
        self.planes[0].check_dims(&other.planes[0])
    }

    pub fn check_field_dims(&self, field: &ScalarField) -> Result<()> {
        self.planes[0].check_dims(field)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64 + Send + Sync + Copy) -> Image {
        Image {
            planes: self.planes.iter().map(|p| p.map(f)).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Image) -> f64 {
        assert_eq!(self.channels(), other.channels());
        self.planes
            .iter()
            .zip(&other.planes)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    /// ITU-R BT.601 luma of the first three channels; gray images pass through.
    pub fn luma(&self) -> ScalarField {
        match self.channels() {
            1 => self.planes[0].clone(),
            _ => {
                let (r, g, b) = (&self.planes[0], &self.planes[1], &self.planes[2]);
                let mut out = vec![0.0; r.len()];
                par::fill_indexed(&mut out, |i| {
                    0.299 * r.data()[i] + 0.587 * g.data()[i] + 0.114 * b.data()[i]
                });
                ScalarField::from_raw(r.width(), r.height(), out)
            }
        }
    }
}
