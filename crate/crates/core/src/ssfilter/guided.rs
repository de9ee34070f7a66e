use crate::error::Result;
use crate::field::ScalarField;
use crate::imgcore::{box_filter, patch_stats};

/// The classic guided filter: per-window linear fit `J = a G + b` with
/// `a = cov(I, G) / (var(G) + eps)`, averaged uniformly over windows.
///
/// Used for refining feature maps and as the `kappa = 0` reference.
pub fn guided_filter(
    input: &ScalarField,
    guide: &ScalarField,
    radius: usize,
    epsilon: f64,
) -> Result<ScalarField> {
    let stats = patch_stats(input, guide, radius)?;
    let a = stats.phi.zip_map(&stats.varsigma2, |c, v| c / (v + epsilon));
    let b = ScalarField::from_fn(input.width(), input.height(), |x, y| {
        stats.mu.get(x, y) - a.get(x, y) * stats.nu.get(x, y)
    });
    let mean_a = box_filter(&a, radius)?;
    let mean_b = box_filter(&b, radius)?;
    Ok(ScalarField::from_fn(input.width(), input.height(), |x, y| {
        mean_a.get(x, y) * guide.get(x, y) + mean_b.get(x, y)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_input_is_fixed_point() {
        let input = ScalarField::filled(8, 8, 0.4);
        let guide = ScalarField::from_fn(8, 8, |x, y| (x + y) as f64 / 14.0);
        let out = guided_filter(&input, &guide, 2, 0.01).unwrap();
        assert!(out.data().iter().all(|v| (v - 0.4).abs() < 1e-14));
    }

    #[test]
    fn huge_epsilon_approaches_mean_of_means() {
        let input = ScalarField::from_fn(8, 8, |x, _| x as f64 / 7.0);
        let out = guided_filter(&input, &input, 1, 1e12).unwrap();
        let mm = box_filter(&box_filter(&input, 1).unwrap(), 1).unwrap();
        assert!(out.max_abs_diff(&mm) < 1e-9);
    }
}
