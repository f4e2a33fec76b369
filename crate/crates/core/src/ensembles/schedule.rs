use serde::{Deserialize, Serialize};

/// `k(m) = max(2, round(p^{m - ζ}))`, so that `{-log_p k(m)}` approaches `ζ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KSchedule {
    pub p: u64,
    pub zeta_target: f64,
    pub m_range: Vec<u32>,
}

impl KSchedule {
    pub fn new(p: u64, zeta_target: f64, m_range: Vec<u32>) -> Self {
        KSchedule { p, zeta_target, m_range }
    }

    pub fn k_for(&self, m: u32) -> u64 {
        let k = (self.p as f64).powf(f64::from(m) - self.zeta_target).round();
        (k as u64).max(2)
    }

    /// `(m, k(m))` over the range.
    pub fn realized(&self) -> Vec<(u32, u64)> {
        self.m_range.iter().map(|&m| (m, self.k_for(m))).collect()
    }

    /// `{-log_p k}` in `[0, 1)`.
    pub fn fractional_offset(&self, k: u64) -> f64 {
        let x = -(k as f64).ln() / (self.p as f64).ln();
        x - x.floor()
    }

    /// Distance from `{-log_p k(m)}` to `ζ` on the circle `R/Z`.
    pub fn offset_error(&self, m: u32) -> f64 {
        let d = (self.fractional_offset(self.k_for(m)) - self.zeta_target).abs();
        d.min(1.0 - d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_of_p_at_zero_offset() {
        let s = KSchedule::new(2, 0.0, vec![1, 2, 3, 4]);
        assert_eq!(s.realized(), vec![(1, 2), (2, 4), (3, 8), (4, 16)]);
        assert_eq!(KSchedule::new(3, 0.0, vec![0]).k_for(0), 2);
    }

    #[test]
    fn offset_converges() {
        for p in [2u64, 3, 5] {
            for zeta in [0.0, 0.25, 0.5, 0.9] {
                let s = KSchedule::new(p, zeta, (3..=14).collect());
                for &m in &s.m_range {
                    assert!(s.offset_error(m) <= 2.0 * (p as f64).powi(-(m as i32)), "p={p} zeta={zeta} m={m}");
                }
            }
        }
    }
}
