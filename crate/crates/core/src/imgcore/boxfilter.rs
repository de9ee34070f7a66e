//! Mean filtering over square windows with half-sample symmetric borders.
//!
//! The filter is separable: a horizontal pass of per-row prefix sums, a
//! transpose, the same horizontal pass, and a transpose back. Each output
//! sample costs a constant number of operations whatever the radius.

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::par;

/// Maps a possibly out-of-range index onto `0..n` by mirroring with the edge
/// sample duplicated: `-1 -> 0`, `-2 -> 1`, `n -> n - 1`.
///
/// Valid for `-n <= i < 2n`.
#[inline]
pub fn reflect(i: isize, n: usize) -> usize {
    let n = n as isize;
    debug_assert!(i >= -n && i < 2 * n, "reflection index {i} out of range for {n}");
    if i < 0 {
        (-i - 1) as usize
    } else if i >= n {
        (2 * n - i - 1) as usize
    } else {
        i as usize
    }
}

/// Pads a field by `margin` samples on every side using symmetric reflection.
pub fn pad_symmetric(src: &ScalarField, margin: usize) -> Result<ScalarField> {
    let (w, h) = (src.width(), src.height());
    if margin >= w.min(h) {
        return Err(Error::TooLarge {
            size: margin,
            width: w,
            height: h,
        });
    }
    let (pw, ph) = (w + 2 * margin, h + 2 * margin);
    let m = margin as isize;
    Ok(ScalarField::from_fn(pw, ph, |x, y| {
        src.get(reflect(x as isize - m, w), reflect(y as isize - m, h))
    }))
}

pub(crate) fn check_radius(width: usize, height: usize, radius: usize) -> Result<()> {
    if 2 * radius + 1 > 2 * width.min(height) {
        Err(Error::TooLarge {
            size: radius,
            width,
            height,
        })
    } else {
        Ok(())
    }
}

/// Mean over the `(2r+1) x (2r+1)` window centred on each sample.
pub fn box_filter(src: &ScalarField, radius: usize) -> Result<ScalarField> {
    let (w, h) = (src.width(), src.height());
    check_radius(w, h, radius)?;
    if radius == 0 {
        return Ok(src.clone());
    }
    let horiz = box_rows(src.data(), w, radius);
    let t = transpose(&horiz, w, h);
    let vert = box_rows(&t, h, radius);
    Ok(ScalarField::from_raw(w, h, transpose(&vert, h, w)))
}

/// Horizontal window mean of every `width`-long row.
///
/// Sums are accumulated relative to the row's first sample, which keeps
/// constant rows exactly constant and shrinks prefix-sum magnitudes.
fn box_rows(src: &[f64], width: usize, radius: usize) -> Vec<f64> {
    let n = (2 * radius + 1) as f64;
    let r = radius as isize;
    let mut out = vec![0.0; src.len()];
    par::for_each_row(&mut out, width, |y, dst| {
        let row = &src[y * width..(y + 1) * width];
        let base = row[0];
        let mut prefix = Vec::with_capacity(width + 2 * radius + 1);
        let mut acc = 0.0;
        prefix.push(acc);
        for j in 0..(width + 2 * radius) as isize {
            acc += row[reflect(j - r, width)] - base;
            prefix.push(acc);
        }
        for (x, d) in dst.iter_mut().enumerate() {
            *d = base + (prefix[x + 2 * radius + 1] - prefix[x]) / n;
        }
    });
    out
}

/// Transposes a row-major `width x height` buffer.
fn transpose(src: &[f64], width: usize, height: usize) -> Vec<f64> {
    let mut out = vec![0.0; src.len()];
    par::for_each_row(&mut out, height, |x, dst| {
        for (y, d) in dst.iter_mut().enumerate() {
            *d = src[y * width + x];
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(w: usize, h: usize, seed: u64) -> ScalarField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ScalarField::new(w, h, (0..w * h).map(|_| rng.random::<f64>()).collect()).unwrap()
    }

    /// Direct windowed sum through the padded field.
    fn naive_box(src: &ScalarField, r: usize) -> ScalarField {
        let (w, h) = (src.width(), src.height());
        let ri = r as isize;
        ScalarField::from_fn(w, h, |x, y| {
            let mut s = 0.0;
            for dy in -ri..=ri {
                for dx in -ri..=ri {
                    s += src.get(reflect(x as isize + dx, w), reflect(y as isize + dy, h));
                }
            }
            s / ((2 * r + 1) * (2 * r + 1)) as f64
        })
    }

    #[test]
    fn reflect_matches_symmetric_definition() {
        let got: Vec<usize> = (-3..6).map(|i| reflect(i, 3)).collect();
        assert_eq!(got, vec![2, 1, 0, 0, 1, 2, 2, 1, 0]);
    }

    #[test]
    fn pad_row_example() {
        // [a,b,c] with margin 2 -> [b,a,a,b,c,c,b]
        let src = ScalarField::new(3, 3, vec![1.0, 2.0, 3.0, 1.0, 2.0, 3.0, 1.0, 2.0, 3.0]).unwrap();
        let p = pad_symmetric(&src, 2).unwrap();
        assert_eq!(p.width(), 7);
        assert_eq!(p.row(0), &[2.0, 1.0, 1.0, 2.0, 3.0, 3.0, 2.0]);
    }

    #[test]
    fn pad_margin_zero_is_identity_and_large_margin_rejected() {
        let f = random_field(4, 5, 1);
        assert_eq!(pad_symmetric(&f, 0).unwrap(), f);
        assert!(pad_symmetric(&f, 4).is_err());
        assert!(pad_symmetric(&f, 3).is_ok());
    }

    #[test]
    fn pad_3x3_enumerated() {
        let f = random_field(3, 3, 2);
        let p = pad_symmetric(&f, 1).unwrap();
        // hand-unrolled: padded index 0 -> 0, 1..=3 -> 0..=2, 4 -> 2
        let map = [0usize, 0, 1, 2, 2];
        for py in 0..5 {
            for px in 0..5 {
                assert_eq!(p.get(px, py), f.get(map[px], map[py]));
            }
        }
    }

    #[test]
    fn constant_field_stays_exactly_constant() {
        let f = ScalarField::filled(13, 9, 0.7);
        for r in 0..5 {
            let b = box_filter(&f, r).unwrap();
            assert!(b.data().iter().all(|&v| v == 0.7), "r={r}");
        }
    }

    #[test]
    fn radius_zero_is_identity() {
        let f = random_field(7, 5, 3);
        assert_eq!(box_filter(&f, 0).unwrap(), f);
    }

    #[test]
    fn matches_naive_windowed_mean() {
        let f = random_field(16, 16, 4);
        let fast = box_filter(&f, 3).unwrap();
        assert!(fast.max_abs_diff(&naive_box(&f, 3)) < 1e-12);
        let g = random_field(11, 6, 5);
        for r in 0..=5 {
            assert!(box_filter(&g, r).unwrap().max_abs_diff(&naive_box(&g, r)) < 1e-12);
        }
    }

    #[test]
    fn rejects_radius_beyond_padding() {
        let f = random_field(6, 4, 6);
        assert!(box_filter(&f, 3).is_ok());
        assert!(box_filter(&f, 4).is_err());
    }
}
