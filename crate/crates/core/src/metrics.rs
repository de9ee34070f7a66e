//! Total variation, ERGAS and masked region statistics.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::{Image, ScalarField};

/// A named scalar result with optional per-channel breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub name: String,
    pub value: f64,
    pub per_channel: Option<Vec<f64>>,
    /// Label of the mask the metric was restricted to.
    pub region: Option<String>,
}

impl MetricReport {
    pub fn new(name: impl Into<String>, value: f64) -> Self {
        Self {
            name: name.into(),
            value,
            per_channel: None,
            region: None,
        }
    }

    pub fn with_channels(mut self, values: Vec<f64>) -> Self {
        self.per_channel = Some(values);
        self
    }

    pub fn with_region(mut self, label: impl Into<String>) -> Self {
        self.region = Some(label.into());
        self
    }

    /// `key = value` lines; channel values appear as `channel.<i>`.
    pub fn to_key_value(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "metric = {}", self.name);
        if let Some(region) = &self.region {
            let _ = writeln!(out, "region = {region}");
        }
        let _ = writeln!(out, "value = {}", self.value);
        for (i, v) in self.per_channel.iter().flatten().enumerate() {
            let _ = writeln!(out, "channel.{i} = {v}");
        }
        out
    }

    pub const CSV_HEADER: &'static str = "metric,region,value,per_channel";

    /// One CSV row matching [`Self::CSV_HEADER`]; channel values are `;`-separated.
    pub fn to_csv_row(&self) -> String {
        let channels = self
            .per_channel
            .iter()
            .flatten()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(";");
        format!(
            "{},{},{},{}",
            self.name,
            self.region.as_deref().unwrap_or(""),
            self.value,
            channels
        )
    }
}

/// Mask pixels count as inside when above one half.
#[inline]
fn inside(mask: Option<&ScalarField>, i: usize) -> bool {
    mask.is_none_or(|m| m.data()[i] > 0.5)
}

fn plane_tv(p: &ScalarField, mask: Option<&ScalarField>) -> f64 {
    let (w, h) = (p.width(), p.height());
    let d = p.data();
    let mut total = 0.0;
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if !inside(mask, i) {
                continue;
            }
            if x + 1 < w {
                total += (d[i + 1] - d[i]).abs();
            }
            if y + 1 < h {
                total += (d[i + w] - d[i]).abs();
            }
        }
    }
    total
}

/// Sum over channels and pixels of `|dx| + |dy|` with forward differences
/// (zero past the last row and column), counted at pixels inside `mask`.
pub fn total_variation(img: &Image, mask: Option<&ScalarField>) -> Result<MetricReport> {
    if let Some(m) = mask {
        img.check_field_dims(m)?;
    }
    let per: Vec<f64> = img.planes().iter().map(|p| plane_tv(p, mask)).collect();
    Ok(MetricReport::new("tv", per.iter().sum()).with_channels(per))
}

/// `100 ratio sqrt(mean_b (rmse_b / mean_b)^2)`, with `mean_b` taken over the
/// reference band. `per_channel` holds each band's `rmse_b / mean_b`.
pub fn ergas(fused: &Image, reference: &Image, ratio: f64) -> Result<MetricReport> {
    fused.check_dims(reference)?;
    if fused.channels() != reference.channels() {
        return Err(Error::ChannelMismatch(format!(
            "fused has {} channels, reference has {}",
            fused.channels(),
            reference.channels()
        )));
    }
    if !(ratio.is_finite() && ratio > 0.0) {
        return Err(Error::param("ratio", format!("must be finite and > 0, got {ratio}")));
    }
    let mut rel = Vec::with_capacity(fused.channels());
    for (b, (f, r)) in fused.planes().iter().zip(reference.planes()).enumerate() {
        let mean = r.mean();
        if mean <= 0.0 {
            return Err(Error::Degenerate(format!("reference band {b} has mean {mean}; ERGAS is undefined")));
        }
        let mse = f.data().iter().zip(r.data()).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / f.len() as f64;
        rel.push(mse.sqrt() / mean);
    }
    let mean_sq = rel.iter().map(|v| v * v).sum::<f64>() / rel.len() as f64;
    Ok(MetricReport::new("ergas", 100.0 * ratio * mean_sq.sqrt()).with_channels(rel))
}

/// Statistics over the pixels where the mask exceeds one half, pooled over channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionStats {
    pub pixels: usize,
    pub mean: f64,
    pub variance: f64,
    pub tv: f64,
}

impl RegionStats {
    pub fn reports(&self, region: &str) -> Vec<MetricReport> {
        [("mean", self.mean), ("variance", self.variance), ("tv", self.tv)]
            .into_iter()
            .map(|(n, v)| MetricReport::new(n, v).with_region(region))
            .collect()
    }
}

pub fn region_stats(img: &Image, mask: &ScalarField) -> Result<RegionStats> {
    img.check_field_dims(mask)?;
    let idx: Vec<usize> = (0..mask.len()).filter(|&i| inside(Some(mask), i)).collect();
    if idx.is_empty() {
        return Err(Error::Degenerate("mask selects no pixels".into()));
    }
    let n = (idx.len() * img.channels()) as f64;
    let values = || img.planes().iter().flat_map(|p| idx.iter().map(move |&i| p.data()[i]));
    let mean = values().sum::<f64>() / n;
    let variance = values().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    Ok(RegionStats {
        pixels: idx.len(),
        mean,
        variance,
        tv: total_variation(img, Some(mask))?.value,
    })
}
