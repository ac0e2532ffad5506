//! Small shared statistics helpers.

/// Arithmetic mean. Panics on empty input (callers validate).
pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (n-1 denominator); 0 for a single value.
pub fn sample_sd(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (xs.len() - 1) as f64).sqrt()
}

/// Quantile by linear interpolation between order statistics.
///
/// For a sorted sample `v_1..v_n` and probability `q`, the estimate is taken
/// at rank `h = (n-1)q`: `v[floor(h)]` and `v[floor(h)+1]` blended by the
/// fractional part. This is the rule the whole crate uses for credible bands,
/// so band endpoints are reproducible from stored draws.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty sample");
    assert!((0.0..=1.0).contains(&q), "quantile probability out of range");
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = h - lo as f64;
    sorted[lo] * (1.0 - frac) + sorted[hi] * frac
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_two_points_interpolates() {
        let v = [10.0, 30.0];
        assert!((quantile_sorted(&v, 0.025) - 10.5).abs() < 1e-12);
        assert!((quantile_sorted(&v, 0.975) - 29.5).abs() < 1e-12);
        assert!((quantile_sorted(&v, 0.5) - 20.0).abs() < 1e-12);
    }

    #[test]
    fn quantile_endpoints() {
        let v = [1.0, 2.0, 3.0];
        assert_eq!(quantile_sorted(&v, 0.0), 1.0);
        assert_eq!(quantile_sorted(&v, 1.0), 3.0);
    }

    #[test]
    fn sd_of_single_value_is_zero() {
        assert_eq!(sample_sd(&[20.0]), 0.0);
    }
}
