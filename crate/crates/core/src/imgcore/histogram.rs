use crate::error::{Error, Result};
use crate::field::{Image, ScalarField};

pub const BINS: usize = 256;

/// Bin of a sample after clamping to `[0, 1]` and rounding to 8 bits.
#[inline]
pub fn quantize(v: f64) -> usize {
    (v.clamp(0.0, 1.0) * 255.0).round() as usize
}

pub fn histogram(field: &ScalarField) -> [u64; BINS] {
    let mut h = [0u64; BINS];
    for &v in field.data() {
        h[quantize(v)] += 1;
    }
    h
}

/// Normalised cumulative distribution; `cdf[i]` is the mass of bins `0..=i`.
pub fn cdf(hist: &[u64; BINS]) -> [f64; BINS] {
    let total: u64 = hist.iter().sum();
    let mut out = [0.0; BINS];
    let mut acc = 0u64;
    for (o, &c) in out.iter_mut().zip(hist) {
        acc += c;
        *o = acc as f64 / total as f64;
    }
    out
}

/// Monotone lookup table sending each source bin to the reference bin whose
/// CDF first reaches the source bin's mid-mass.
fn matching_lut(src: &ScalarField, reference: &ScalarField) -> [f64; BINS] {
    let cs = cdf(&histogram(src));
    let cr = cdf(&histogram(reference));
    let mut lut = [0.0; BINS];
    let mut j = 0;
    for i in 0..BINS {
        let below = if i == 0 { 0.0 } else { cs[i - 1] };
        let mid = 0.5 * (below + cs[i]);
        // mid is nondecreasing in i, so the search resumes where it stopped
        while j < BINS - 1 && cr[j] < mid {
            j += 1;
        }
        lut[i] = j as f64 / 255.0;
    }
    lut
}

/// Per-channel histogram specification onto `reference` (any dimensions).
pub fn histogram_match(src: &Image, reference: &Image) -> Result<Image> {
    if src.channels() != reference.channels() {
        return Err(Error::ChannelMismatch(format!(
            "source has {} channels, reference has {}",
            src.channels(),
            reference.channels()
        )));
    }
    let planes = src
        .planes()
        .iter()
        .zip(reference.planes())
        .map(|(s, r)| {
            let lut = matching_lut(s, r);
            s.map(|v| lut[quantize(v)])
        })
        .collect();
    Image::from_planes(planes)
}

/// Largest absolute gap between the 8-bit empirical CDFs of two fields.
pub fn ks_distance(a: &ScalarField, b: &ScalarField) -> f64 {
    let (ca, cb) = (cdf(&histogram(a)), cdf(&histogram(b)));
    ca.iter().zip(&cb).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
