use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

/// Two-sided percentile interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub low: f64,
    pub high: f64,
}

impl ConfidenceInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.low <= x && x <= self.high
    }

    pub fn overlaps(&self, other: &ConfidenceInterval) -> bool {
        self.low <= other.high && other.low <= self.high
    }

    pub fn scaled(&self, factor: f64) -> ConfidenceInterval {
        ConfidenceInterval { low: self.low * factor, high: self.high * factor }
    }
}

pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let h = q * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Percentile-bootstrap 95% intervals for the means of several series sharing one
/// resampling of the trial indices.
pub fn bootstrap_mean_cis(series: &[Vec<f64>], resamples: usize, rng: &mut ChaCha20Rng) -> Vec<Option<ConfidenceInterval>> {
    let n = series.first().map_or(0, Vec::len);
    debug_assert!(series.iter().all(|s| s.len() == n));
    if n == 0 || resamples == 0 {
        return vec![None; series.len()];
    }
    let mut means = vec![Vec::with_capacity(resamples); series.len()];
    let mut idx = vec![0usize; n];
    for _ in 0..resamples {
        for i in idx.iter_mut() {
            *i = rng.gen_range(0..n);
        }
        for (s, m) in series.iter().zip(means.iter_mut()) {
            m.push(idx.iter().map(|&i| s[i]).sum::<f64>() / n as f64);
        }
    }
    means
        .into_iter()
        .map(|mut m| {
            m.sort_by(f64::total_cmp);
            Some(ConfidenceInterval { low: quantile_sorted(&m, 0.025), high: quantile_sorted(&m, 0.975) })
        })
        .collect()
}

/// `½ Σ |P(x) - Q(x)|` over the union of supports.
pub fn total_variation<K: Ord>(a: &BTreeMap<K, f64>, b: &BTreeMap<K, f64>) -> f64 {
    let mut sum = 0.0;
    for (k, pa) in a {
        sum += (pa - b.get(k).copied().unwrap_or(0.0)).abs();
    }
    for (k, pb) in b {
        if !a.contains_key(k) {
            sum += pb;
        }
    }
    sum / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn tv_extremes() {
        let a: BTreeMap<i32, f64> = [(0, 0.5), (1, 0.5)].into();
        assert_eq!(total_variation(&a, &a), 0.0);
        let x: BTreeMap<i32, f64> = [(0, 1.0)].into();
        let y: BTreeMap<i32, f64> = [(1, 1.0)].into();
        assert_eq!(total_variation(&x, &y), 1.0);
        assert!((total_variation(&a, &x) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn quantiles() {
        let s = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(quantile_sorted(&s, 0.0), 1.0);
        assert_eq!(quantile_sorted(&s, 0.5), 3.0);
        assert_eq!(quantile_sorted(&s, 0.125), 1.5);
    }

    #[test]
    fn bootstrap_brackets_the_mean() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let data: Vec<f64> = (0..500).map(|i| f64::from(i % 7)).collect();
        let ci = bootstrap_mean_cis(std::slice::from_ref(&data), 1000, &mut rng)[0].unwrap();
        assert!(ci.contains(mean(&data)));
        assert!(ci.high - ci.low < 0.6);
        let constant = vec![2.0; 10];
        let ci = bootstrap_mean_cis(&[constant], 100, &mut rng)[0].unwrap();
        assert_eq!((ci.low, ci.high), (2.0, 2.0));
        assert_eq!(bootstrap_mean_cis(&[vec![]], 100, &mut rng), vec![None]);
    }
}
