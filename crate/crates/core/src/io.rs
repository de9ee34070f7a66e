//! Image and float-field codecs.
//!
//! PNG (8/16-bit) and binary PGM/PPM go through the `image` crate. PFM is
//! handled here: `Pf` for one plane, `PF` for three, little-endian (negative
//! scale) on write, either byte order on read, rows stored bottom to top.
//!
//! Integer samples map to `[0, 1]` by dividing by the format maximum. Encoding
//! clamps to `[0, 1]` and rounds half up.

use std::io::Cursor;
use std::path::{Path, PathBuf};

use image::{DynamicImage, ImageFormat};

use crate::error::{Error, Result};
use crate::field::{Image, ScalarField};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Png,
    /// Binary PGM (one channel) or PPM (three channels).
    Pnm,
    Pfm,
}

impl Format {
    /// Format implied by the file extension (case-insensitive).
    pub fn from_path(path: &Path) -> Result<Format> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .unwrap_or_default();
        match ext.as_str() {
            "png" => Ok(Format::Png),
            "pgm" | "ppm" | "pnm" => Ok(Format::Pnm),
            "pfm" => Ok(Format::Pfm),
            _ => Err(Error::param(
                "path",
                format!("{}: unsupported extension `{ext}` (expected png, pgm, ppm, pnm or pfm)", path.display()),
            )),
        }
    }
}

/// Sample precision of a decoded file, reused when writing results back.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BitDepth {
    #[default]
    Eight,
    Sixteen,
    Float,
}

#[derive(Debug, Clone)]
pub struct Loaded {
    pub image: Image,
    pub depth: BitDepth,
}

fn decode_err(path: &Path, reason: impl Into<String>) -> Error {
    Error::Decode {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

fn encode_err(path: &Path, reason: impl Into<String>) -> Error {
    Error::Encode {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_image(path: &Path) -> Result<Loaded> {
    let format = Format::from_path(path)?;
    decode(&read_bytes(path)?, format, path)
}

/// Reads a single-plane field (mask, depth map, gain map). Colour files are
/// reduced to luma.
pub fn read_field(path: &Path) -> Result<ScalarField> {
    let loaded = read_image(path)?;
    Ok(match loaded.image.channels() {
        1 => loaded.image.into_planes().swap_remove(0),
        _ => loaded.image.luma(),
    })
}

/// Decodes `bytes`; `path` only labels errors.
pub fn decode(bytes: &[u8], format: Format, path: &Path) -> Result<Loaded> {
    match format {
        Format::Pfm => Ok(Loaded {
            image: decode_pfm(bytes, path)?,
            depth: BitDepth::Float,
        }),
        Format::Png | Format::Pnm => {
            let fmt = if format == Format::Png { ImageFormat::Png } else { ImageFormat::Pnm };
            let dynimg = image::load_from_memory_with_format(bytes, fmt).map_err(|e| decode_err(path, e.to_string()))?;
            from_dynamic(dynimg, path)
        }
    }
}

fn planes_from<T: Copy + Into<f64>>(raw: &[T], w: usize, h: usize, channels: usize, max: f64) -> Vec<ScalarField> {
    (0..channels)
        .map(|c| {
            let data = raw.iter().skip(c).step_by(channels).map(|&v| v.into() / max).collect();
            ScalarField::from_raw(w, h, data)
        })
        .collect()
}

fn from_dynamic(img: DynamicImage, path: &Path) -> Result<Loaded> {
    let (w, h) = (img.width() as usize, img.height() as usize);
    if w == 0 || h == 0 {
        return Err(decode_err(path, "empty image"));
    }
    use image::ColorType as C;
    let sixteen = matches!(img.color(), C::L16 | C::La16 | C::Rgb16 | C::Rgba16);
    let alpha = img.color().has_alpha();
    let gray = !img.color().has_color();
    // gray+alpha is widened to RGBA so that channel counts stay in {1, 3, 4}
    let channels = match (gray, alpha) {
        (true, false) => 1,
        (false, false) => 3,
        (_, true) => 4,
    };
    let planes = if sixteen {
        let raw: Vec<u16> = match channels {
            1 => img.into_luma16().into_raw(),
            3 => img.into_rgb16().into_raw(),
            _ => img.into_rgba16().into_raw(),
        };
        planes_from(&raw, w, h, channels, 65535.0)
    } else {
        let raw: Vec<u8> = match channels {
            1 => img.into_luma8().into_raw(),
            3 => img.into_rgb8().into_raw(),
            _ => img.into_rgba8().into_raw(),
        };
        planes_from(&raw, w, h, channels, 255.0)
    };
    Ok(Loaded {
        image: Image::from_planes(planes)?,
        depth: if sixteen { BitDepth::Sixteen } else { BitDepth::Eight },
    })
}

/// Clamp to `[0, 1]`, scale to `[0, max]` and round half up.
#[inline]
pub fn quantize(v: f64, max: f64) -> f64 {
    (v.clamp(0.0, 1.0) * max + 0.5).floor()
}

fn interleave<T>(img: &Image, f: impl Fn(f64) -> T) -> Vec<T> {
    let c = img.channels();
    let n = img.width() * img.height();
    let mut out = Vec::with_capacity(n * c);
    for i in 0..n {
        for p in img.planes() {
            out.push(f(p.data()[i]));
        }
    }
    out
}

/// Encodes `img`; `path` only labels errors. `BitDepth::Float` is only valid with PFM.
pub fn encode(img: &Image, format: Format, depth: BitDepth, path: &Path) -> Result<Vec<u8>> {
    if format == Format::Pfm {
        return encode_pfm(img, path);
    }
    let (w, h) = (img.width() as u32, img.height() as u32);
    let c = img.channels();
    if format == Format::Pnm && c == 4 {
        return Err(encode_err(path, "PGM/PPM cannot store an alpha channel"));
    }
    let dynimg = match depth {
        BitDepth::Eight => {
            let raw = interleave(img, |v| quantize(v, 255.0) as u8);
            match c {
                1 => image::GrayImage::from_raw(w, h, raw).map(DynamicImage::ImageLuma8),
                3 => image::RgbImage::from_raw(w, h, raw).map(DynamicImage::ImageRgb8),
                _ => image::RgbaImage::from_raw(w, h, raw).map(DynamicImage::ImageRgba8),
            }
        }
        BitDepth::Sixteen => {
            let raw = interleave(img, |v| quantize(v, 65535.0) as u16);
            match c {
                1 => image::ImageBuffer::from_raw(w, h, raw).map(DynamicImage::ImageLuma16),
                3 => image::ImageBuffer::from_raw(w, h, raw).map(DynamicImage::ImageRgb16),
                _ => image::ImageBuffer::from_raw(w, h, raw).map(DynamicImage::ImageRgba16),
            }
        }
        BitDepth::Float => return Err(encode_err(path, "float samples need a .pfm output")),
    }
    .ok_or_else(|| encode_err(path, "buffer size does not match dimensions"))?;
    let fmt = if format == Format::Png { ImageFormat::Png } else { ImageFormat::Pnm };
    let mut buf = Cursor::new(Vec::new());
    dynimg.write_to(&mut buf, fmt).map_err(|e| encode_err(path, e.to_string()))?;
    Ok(buf.into_inner())
}

/// Writes `img` to `path` in place (not atomically).
pub fn write_image(path: &Path, img: &Image, depth: BitDepth) -> Result<()> {
    let bytes = encode(img, Format::from_path(path)?, depth, path)?;
    std::fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn encode_pfm(img: &Image, path: &Path) -> Result<Vec<u8>> {
    let tag = match img.channels() {
        1 => "Pf",
        3 => "PF",
        c => return Err(encode_err(path, format!("PFM stores 1 or 3 channels, got {c}"))),
    };
    let (w, h) = (img.width(), img.height());
    let mut out = format!("{tag}\n{w} {h}\n-1.0\n").into_bytes();
    out.reserve(w * h * img.channels() * 4);
    for y in (0..h).rev() {
        for x in 0..w {
            for p in img.planes() {
                out.extend_from_slice(&(p.get(x, y) as f32).to_le_bytes());
            }
        }
    }
    Ok(out)
}

pub fn encode_field_pfm(field: &ScalarField) -> Vec<u8> {
    encode_pfm(&Image::gray(field.clone()), Path::new("")).expect("single plane is always encodable")
}

/// Splits off the next whitespace-delimited header token.
fn token<'a>(bytes: &'a [u8], pos: &mut usize) -> Option<&'a str> {
    while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    (start < *pos).then(|| std::str::from_utf8(&bytes[start..*pos]).ok()).flatten()
}

pub fn decode_pfm(bytes: &[u8], path: &Path) -> Result<Image> {
    let mut pos = 0;
    let channels = match token(bytes, &mut pos) {
        Some("Pf") => 1,
        Some("PF") => 3,
        other => return Err(decode_err(path, format!("bad PFM magic {other:?}"))),
    };
    let mut num = |what: &str| -> Result<&str> { token(bytes, &mut pos).ok_or_else(|| decode_err(path, format!("missing {what}"))) };
    let w: usize = num("width")?.parse().map_err(|_| decode_err(path, "bad width"))?;
    let h: usize = num("height")?.parse().map_err(|_| decode_err(path, "bad height"))?;
    let scale: f64 = num("scale")?.parse().map_err(|_| decode_err(path, "bad scale"))?;
    if w == 0 || h == 0 || scale == 0.0 || !scale.is_finite() {
        return Err(decode_err(path, "degenerate PFM header"));
    }
    // exactly one whitespace byte separates the header from the samples
    pos += 1;
    let need = w
        .checked_mul(h)
        .and_then(|n| n.checked_mul(channels * 4))
        .ok_or_else(|| decode_err(path, "PFM dimensions overflow"))?;
    let body = bytes.get(pos..).unwrap_or_default();
    if body.len() < need {
        return Err(decode_err(path, format!("truncated PFM: need {need} bytes, found {}", body.len())));
    }
    let little = scale < 0.0;
    let mut planes = vec![vec![0.0; w * h]; channels];
    for (k, chunk) in body[..need].chunks_exact(4).enumerate() {
        let raw = [chunk[0], chunk[1], chunk[2], chunk[3]];
        let v = if little { f32::from_le_bytes(raw) } else { f32::from_be_bytes(raw) } as f64;
        if !v.is_finite() {
            return Err(decode_err(path, "non-finite sample"));
        }
        let pixel = k / channels;
        let (x, row) = (pixel % w, pixel / w);
        planes[k % channels][(h - 1 - row) * w + x] = v;
    }
    Image::from_planes(planes.into_iter().map(|d| ScalarField::from_raw(w, h, d)).collect())
}

/// Placeholder path for in-memory codec calls.
pub fn memory_path() -> PathBuf {
    PathBuf::from("<memory>")
}
