use proptest::prelude::*;
use qualimeter_core::stats::{spearman, z_normalize};

/// Closed form for untied ranks.
fn sum_d2(x: &[usize], y: &[usize]) -> f64 {
    let n = x.len() as f64;
    let d2: f64 = x.iter().zip(y).map(|(a, b)| (*a as f64 - *b as f64).powi(2)).sum();
    1.0 - 6.0 * d2 / (n * (n * n - 1.0))
}

#[test]
fn identity_and_reversal() {
    for n in 2..=50 {
        let x: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let rev: Vec<f64> = x.iter().rev().copied().collect();
        assert_eq!(spearman(&x, &x).unwrap(), 1.0, "n = {n}");
        assert_eq!(spearman(&x, &rev).unwrap(), -1.0, "n = {n}");
    }
}

#[test]
fn too_short_or_mismatched_is_an_error() {
    assert!(spearman(&[1.0], &[1.0]).is_err());
    assert!(spearman(&[1.0, 2.0], &[1.0]).is_err());
}

#[test]
fn ties_use_average_ranks() {
    // ranks (1.5, 1.5, 3) against (1, 2, 3): d² sums to 0.5, so 1 - 3/24
    let r = spearman(&[5.0, 5.0, 9.0], &[1.0, 2.0, 3.0]).unwrap();
    assert!((r - 0.875).abs() < 1e-12, "{r}");
}

#[test]
fn swapped_pairs() {
    // d² sums to 4 over n = 4
    let r = spearman(&[1.0, 2.0, 3.0, 4.0], &[2.0, 1.0, 4.0, 3.0]).unwrap();
    assert!((r - 0.6).abs() < 1e-12, "{r}");
}

fn permutation() -> impl Strategy<Value = Vec<usize>> {
    (2..=100usize).prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn permutations_match_closed_form(p in permutation(), scale in 0.1..100.0f64) {
        let x: Vec<f64> = (0..p.len()).map(|i| i as f64 * scale).collect();
        let y: Vec<f64> = p.iter().map(|v| *v as f64).collect();
        let ident: Vec<usize> = (0..p.len()).collect();
        let r = spearman(&x, &y).unwrap();
        prop_assert!((r - sum_d2(&ident, &p)).abs() < 1e-12);
        prop_assert!((-1.0..=1.0).contains(&r));
        prop_assert_eq!(r, spearman(&y, &x).unwrap());
    }

    #[test]
    fn z_scores_have_zero_mean_unit_variance(v in prop::collection::vec(-1e3..1e3f64, 2..50)) {
        prop_assume!(v.iter().any(|x| *x != v[0]));
        let z = z_normalize(&v).unwrap();
        let n = z.len() as f64;
        let mean = z.iter().sum::<f64>() / n;
        let var = z.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        prop_assert!(mean.abs() < 1e-9);
        prop_assert!((var - 1.0).abs() < 1e-9);
    }
}
