//! Least-squares fits used by the report.

/// Best `c` in `depth ≈ c · n⁴` by ordinary least squares through the
/// origin: `c = Σ n⁴·p / Σ n⁸`.
pub fn quartic_coefficient(sizes: &[usize], depths: &[usize]) -> Option<f64> {
    if sizes.len() != depths.len() || sizes.is_empty() {
        return None;
    }
    let (num, den) = sizes.iter().zip(depths).fold((0.0, 0.0), |(num, den), (&n, &p)| {
        let x = (n as f64).powi(4);
        (num + x * p as f64, den + x * x)
    });
    (den > 0.0).then(|| num / den)
}

/// Root-mean-square residual of `c · n⁴` against the depths.
pub fn quartic_rms(sizes: &[usize], depths: &[usize], c: f64) -> f64 {
    let sum: f64 = sizes
        .iter()
        .zip(depths)
        .map(|(&n, &p)| (c * (n as f64).powi(4) - p as f64).powi(2))
        .sum();
    (sum / sizes.len() as f64).sqrt()
}

/// Mean and population standard deviation.
pub fn mean_sd(values: impl IntoIterator<Item = f64>) -> (f64, f64) {
    let v: Vec<f64> = values.into_iter().collect();
    if v.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / v.len() as f64;
    (mean, var.sqrt())
}

/// Median of a non-empty slice (mean of the two middle values for even
/// lengths).
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}
