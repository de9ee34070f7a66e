//! Hexcone HSV conversion. Hue is stored as a fraction of a full turn in `[0, 1)`.

use crate::error::{Error, Result};
use crate::field::{Image, ScalarField};
use crate::par;

fn require_rgb(img: &Image) -> Result<()> {
    if img.channels() == 3 {
        Ok(())
    } else {
        Err(Error::ChannelMismatch(format!(
            "expected 3 channels, got {}",
            img.channels()
        )))
    }
}

pub fn rgb_to_hsv_pixel(r: f64, g: f64, b: f64) -> (f64, f64, f64) {
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let delta = max - min;
    let v = max;
    let s = if max > 0.0 { delta / max } else { 0.0 };
    if delta <= 0.0 {
        return (0.0, s, v);
    }
    let sector = if max == r {
        (g - b) / delta
    } else if max == g {
        (b - r) / delta + 2.0
    } else {
        (r - g) / delta + 4.0
    };
    let h = (sector / 6.0).rem_euclid(1.0);
    (h, s, v)
}

pub fn hsv_to_rgb_pixel(h: f64, s: f64, v: f64) -> (f64, f64, f64) {
    let h6 = h.rem_euclid(1.0) * 6.0;
    let sector = h6.floor();
    let f = h6 - sector;
    let p = v * (1.0 - s);
    let q = v * (1.0 - s * f);
    let t = v * (1.0 - s * (1.0 - f));
    match sector as i64 {
        0 => (v, t, p),
        1 => (q, v, p),
        2 => (p, v, t),
        3 => (p, q, v),
        4 => (t, p, v),
        _ => (v, p, q),
    }
}

fn convert(img: &Image, f: fn(f64, f64, f64) -> (f64, f64, f64)) -> Image {
    let (w, h) = (img.width(), img.height());
    let (a, b, c) = (img.plane(0).data(), img.plane(1).data(), img.plane(2).data());
    let mut out = vec![0.0; 3 * w * h];
    // interleaved scratch, one row of triples at a time
    par::for_each_row(&mut out, 3 * w, |y, row| {
        for x in 0..w {
            let i = y * w + x;
            let (p, q, r) = f(a[i], b[i], c[i]);
            row[3 * x] = p;
            row[3 * x + 1] = q;
            row[3 * x + 2] = r;
        }
    });
    let planes = (0..3)
        .map(|k| ScalarField::from_raw(w, h, out.iter().skip(k).step_by(3).copied().collect()))
        .collect();
    Image::from_planes(planes).expect("three planes of equal size")
}

pub fn rgb_to_hsv(img: &Image) -> Result<Image> {
    require_rgb(img)?;
    Ok(convert(img, rgb_to_hsv_pixel))
}

pub fn hsv_to_rgb(img: &Image) -> Result<Image> {
    require_rgb(img)?;
    Ok(convert(img, hsv_to_rgb_pixel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pure_red_and_gray() {
        assert_eq!(rgb_to_hsv_pixel(1.0, 0.0, 0.0), (0.0, 1.0, 1.0));
        let (_, s, v) = rgb_to_hsv_pixel(0.42, 0.42, 0.42);
        assert_eq!((s, v), (0.0, 0.42));
    }

    #[test]
    fn random_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 100;
        let planes: Vec<ScalarField> = (0..3)
            .map(|_| ScalarField::new(n, 1, (0..n).map(|_| rng.random::<f64>()).collect()).unwrap())
            .collect();
        let img = Image::from_planes(planes).unwrap();
        let back = hsv_to_rgb(&rgb_to_hsv(&img).unwrap()).unwrap();
        assert!(img.max_abs_diff(&back) < 1e-6);
    }

    #[test]
    fn wrong_channel_count() {
        let img = Image::filled(2, 2, 1, 0.5);
        assert!(rgb_to_hsv(&img).is_err());
        assert!(hsv_to_rgb(&img).is_err());
    }
}
