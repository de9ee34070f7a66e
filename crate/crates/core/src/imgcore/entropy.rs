use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::imgcore::boxfilter::reflect;
use crate::imgcore::histogram::{quantize, BINS};
use crate::par;

/// Shannon entropy (bits) of the 8-bit histogram in the `window x window`
/// neighbourhood of every pixel, with symmetric borders.
pub fn local_entropy(img: &ScalarField, window: usize) -> Result<ScalarField> {
    if window == 0 || window.is_multiple_of(2) {
        return Err(Error::param("window", format!("must be odd and positive, got {window}")));
    }
    let (w, h) = (img.width(), img.height());
    let half = window / 2;
    if half >= w.min(h) {
        return Err(Error::TooLarge {
            size: window,
            width: w,
            height: h,
        });
    }
    let bins: Vec<u8> = img.data().iter().map(|&v| quantize(v) as u8).collect();
    let n = (window * window) as f64;
    // c * log2(c) for every possible bin count
    let clogc: Vec<f64> = (0..=window * window)
        .map(|c| if c == 0 { 0.0 } else { c as f64 * (c as f64).log2() })
        .collect();
    let hw = half as isize;
    let mut out = vec![0.0; w * h];
    par::for_each_row(&mut out, w, |y, row| {
        let rows: Vec<usize> = (-hw..=hw).map(|d| reflect(y as isize + d, h)).collect();
        let mut hist = [0u32; BINS];
        let mut s = 0.0;
        let bump = |hist: &mut [u32; BINS], s: &mut f64, b: u8, add: bool| {
            let c = &mut hist[b as usize];
            *s -= clogc[*c as usize];
            if add {
                *c += 1;
            } else {
                *c -= 1;
            }
            *s += clogc[*c as usize];
        };
        for dx in -hw..=hw {
            let sx = reflect(dx, w);
            for &sy in &rows {
                bump(&mut hist, &mut s, bins[sy * w + sx], true);
            }
        }
        for (x, o) in row.iter_mut().enumerate() {
            if x > 0 {
                let gone = reflect(x as isize - hw - 1, w);
                let come = reflect(x as isize + hw, w);
                for &sy in &rows {
                    bump(&mut hist, &mut s, bins[sy * w + gone], false);
                    bump(&mut hist, &mut s, bins[sy * w + come], true);
                }
            }
            *o = (n.log2() - s / n).max(0.0);
        }
    });
    Ok(ScalarField::from_raw(w, h, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn direct_entropy(img: &ScalarField, x: usize, y: usize, window: usize) -> f64 {
        let hw = (window / 2) as isize;
        let mut hist = [0usize; BINS];
        for dy in -hw..=hw {
            for dx in -hw..=hw {
                let v = img.get(
                    reflect(x as isize + dx, img.width()),
                    reflect(y as isize + dy, img.height()),
                );
                hist[quantize(v)] += 1;
            }
        }
        let n = (window * window) as f64;
        -hist
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / n;
                p * p.log2()
            })
            .sum::<f64>()
    }

    #[test]
    fn constant_image_has_zero_entropy() {
        let e = local_entropy(&ScalarField::filled(9, 9, 0.3), 5).unwrap();
        assert!(e.data().iter().all(|&v| v.abs() < 1e-12));
    }

    #[test]
    fn equally_frequent_levels_give_log2() {
        // the centre 3x3 window covers 9 distinct levels exactly once
        let img = ScalarField::from_fn(3, 3, |x, y| (y * 3 + x) as f64 * 20.0 / 255.0);
        let e = local_entropy(&img, 3).unwrap();
        assert!((e.get(1, 1) - 9f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn matches_direct_histogram_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let img = ScalarField::new(20, 20, (0..400).map(|_| rng.random::<f64>() * 0.3).collect()).unwrap();
        let e = local_entropy(&img, 5).unwrap();
        for y in 0..20 {
            for x in 0..20 {
                assert!((e.get(x, y) - direct_entropy(&img, x, y, 5)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn rejects_even_or_oversized_window() {
        let img = ScalarField::filled(6, 6, 0.0);
        assert!(local_entropy(&img, 4).is_err());
        assert!(local_entropy(&img, 0).is_err());
        assert!(local_entropy(&img, 13).is_err());
    }
}
