use crate::error::{Error, Result};
use crate::field::{Image, ScalarField};

/// Nearest-neighbour enlargement: output `(x, y)` copies source
/// `(floor(x * w / new_w), floor(y * h / new_h))`.
pub fn upsample_nearest(img: &Image, new_w: usize, new_h: usize) -> Result<Image> {
    let (w, h) = (img.width(), img.height());
    if new_w < w || new_h < h {
        return Err(Error::param(
            "size",
            format!("upsampling {w}x{h} to {new_w}x{new_h} would shrink the image"),
        ));
    }
    let planes = img
        .planes()
        .iter()
        .map(|p| ScalarField::from_fn(new_w, new_h, |x, y| p.get(x * w / new_w, y * h / new_h)))
        .collect();
    Image::from_planes(planes)
}

/// Keeps every `factor`-th sample starting at the origin.
pub fn decimate(img: &Image, factor: usize) -> Result<Image> {
    if factor == 0 || img.width() < factor || img.height() < factor {
        return Err(Error::param("factor", format!("cannot decimate by {factor}")));
    }
    let (nw, nh) = (img.width() / factor, img.height() / factor);
    let planes = img
        .planes()
        .iter()
        .map(|p| ScalarField::from_fn(nw, nh, |x, y| p.get(x * factor, y * factor)))
        .collect();
    Image::from_planes(planes)
}
