//! Income distribution statistics.

use crate::scalar::Scalar;

pub fn mean<F: Scalar>(xs: &[F]) -> F {
    if xs.is_empty() {
        return F::zero();
    }
    xs.iter().copied().sum::<F>() / F::lit(xs.len() as f64)
}

/// Population standard deviation (divides by `n`).
pub fn population_sd<F: Scalar>(xs: &[F]) -> F {
    if xs.is_empty() {
        return F::zero();
    }
    let m = mean(xs);
    let var = xs.iter().map(|&x| (x - m) * (x - m)).sum::<F>() / F::lit(xs.len() as f64);
    var.sqrt()
}

/// Gini coefficient of non-negative values; 0 when all values are zero.
pub fn gini<F: Scalar>(xs: &[F]) -> F {
    let n = xs.len();
    let total: F = xs.iter().copied().sum();
    if n == 0 || total <= F::zero() {
        return F::zero();
    }
    let mut sorted = xs.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite incomes"));
    // G = sum_i (2i - n - 1) x_(i) / (n * sum x), i = 1..n
    let weighted = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| F::lit((2 * (i + 1)) as f64 - n as f64 - 1.0) * x)
        .sum::<F>();
    let g = weighted / (F::lit(n as f64) * total);
    g.max(F::zero()).min(F::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn uniform_incomes() {
        let xs = [10.0; 6];
        assert_eq!(mean(&xs), 10.0);
        assert_eq!(population_sd(&xs), 0.0);
        assert_eq!(gini(&xs), 0.0);
    }

    #[test]
    fn two_point_incomes() {
        let xs = [0.0, 10.0];
        assert_eq!(mean(&xs), 5.0);
        assert_eq!(population_sd(&xs), 5.0);
        // Mean absolute difference 5, over twice the mean: 0.5
        assert_eq!(gini(&xs), 0.5);
    }

    #[test]
    fn empty_and_zero() {
        assert_eq!(mean::<f64>(&[]), 0.0);
        assert_eq!(population_sd::<f64>(&[]), 0.0);
        assert_eq!(gini(&[0.0f32, 0.0]), 0.0);
    }

    proptest! {
        #[test]
        fn gini_matches_pairwise_definition(xs in prop::collection::vec(0.0f64..1000.0, 1..30)) {
            let n = xs.len() as f64;
            let total: f64 = xs.iter().sum();
            prop_assume!(total > 0.0);
            let pairwise: f64 = xs.iter().flat_map(|a| xs.iter().map(move |b| (a - b).abs())).sum();
            let expected = pairwise / (2.0 * n * total);
            let g = gini(&xs);
            prop_assert!((g - expected).abs() < 1e-9, "{} vs {}", g, expected);
            prop_assert!((0.0..=1.0).contains(&g));
        }
    }
}
