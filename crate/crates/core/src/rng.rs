//! Seeded random streams and small statistics helpers.
//!
//! Worker `i` of a run with seed `s` always draws from stream `(s, i)`, so
//! results depend on the seed and the worker count but not on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent stream `shard` of the generator seeded by `seed`.
pub fn stream(seed: u64, shard: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    rng
}

/// Split `total` items into `parts` counts differing by at most one.
pub fn split_evenly(total: u64, parts: usize) -> Vec<u64> {
    let parts = parts.max(1) as u64;
    (0..parts).map(|i| total / parts + u64::from(i < total % parts)).collect()
}

/// Mean and standard error of the mean.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Median of the group means, with a spread-based standard error.
///
/// The groups are independent batch means; the error is the standard error
/// of their mean scaled by `sqrt(π/2)`, the asymptotic efficiency loss of the
/// median relative to the mean.
pub fn median_of_means(group_means: &[f64]) -> (f64, f64) {
    let mut sorted = group_means.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let k = sorted.len();
    if k == 0 {
        return (0.0, 0.0);
    }
    let median = if k % 2 == 1 { sorted[k / 2] } else { 0.5 * (sorted[k / 2 - 1] + sorted[k / 2]) };
    let (_, se) = mean_stderr(group_means);
    (median, se * std::f64::consts::FRAC_PI_2.sqrt())
}
