//! Dyadic refinement bookkeeping: errors at `t_k = t₀ 2^{−k}` and the
//! observed orders `log₂(e_{k−1}/e_k)` between them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Errors below this are roundoff and carry no order information.
pub const ERROR_FLOOR: f64 = 1e-12;

/// `o_k = log₂(e_{k−1}/e_k)` for consecutive entries.
pub fn observed_order<T: Real>(errors: &[T]) -> Result<Vec<T>> {
    if errors.len() < 2 {
        return Err(Error::Domain(format!("observed_order needs at least two errors, got {}", errors.len())));
    }
    if let Some(e) = errors.iter().find(|e| !(**e > T::zero()) || !e.is_finite()) {
        return Err(Error::Domain(format!("observed_order needs positive finite errors, got {e}")));
    }
    Ok(errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect())
}

/// `t₀, t₀/2, …` with `levels` entries.
pub fn dyadic_steps(t0: f64, levels: usize) -> Vec<f64> {
    (0..levels).map(|k| t0 * 0.5f64.powi(k as i32)).collect()
}

/// One refinement level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub level: usize,
    pub t: f64,
    /// `None` when the level was skipped (step too large).
    pub error: Option<f64>,
    /// Order against the previous level; `None` unless both are unfloored.
    pub order: Option<f64>,
    /// Below [`ERROR_FLOOR`] or skipped.
    pub floored: bool,
}

/// Error sequence for one method over a dyadic sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceSeries {
    pub levels: Vec<Level>,
}

impl ConvergenceSeries {
    /// `errors[k]` belongs to `t = t0 · 2^{−k}`.
    pub fn from_errors(t0: f64, errors: &[Option<f64>]) -> Self {
        let ts = dyadic_steps(t0, errors.len());
        let floored = |e: Option<f64>| e.is_none_or(|e| !(e >= ERROR_FLOOR) || !e.is_finite());
        let levels = errors
            .iter()
            .zip(&ts)
            .enumerate()
            .map(|(k, (&error, &t))| {
                let prev = k.checked_sub(1).and_then(|j| errors[j]);
                let order = match (prev, error) {
                    (Some(a), Some(b)) if !floored(Some(a)) && !floored(Some(b)) => Some((a / b).log2()),
                    _ => None,
                };
                Level { level: k, t, error, order, floored: floored(error) }
            })
            .collect();
        Self { levels }
    }

    pub fn errors(&self) -> Vec<Option<f64>> {
        self.levels.iter().map(|l| l.error).collect()
    }

    /// Orders that enter the acceptance statistic.
    ///
    /// Only the unfloored prefix counts. When a floored level ends that
    /// prefix, its last level is already touched by roundoff and is dropped.
    pub fn valid_orders(&self) -> Vec<f64> {
        let first_floored = self.levels.iter().position(|l| l.floored);
        let end = match first_floored {
            Some(f) => f.saturating_sub(1),
            None => self.levels.len(),
        };
        self.levels[..end].iter().filter_map(|l| l.order).collect()
    }

    pub fn mean_order(&self) -> Option<f64> {
        let o = self.valid_orders();
        (!o.is_empty()).then(|| o.iter().sum::<f64>() / o.len() as f64)
    }

    pub fn max_error(&self) -> Option<f64> {
        self.levels.iter().filter_map(|l| l.error).reduce(f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_examples() {
        assert_eq!(observed_order(&[1.0, 0.125, 1.0 / 64.0]).unwrap(), vec![3.0, 3.0]);
        assert_eq!(observed_order(&[1.0, 0.5]).unwrap(), vec![1.0]);
        let o: Vec<f64> = observed_order(&[1e-3, 1.25e-4, 1.5625e-5]).unwrap();
        assert!(o.iter().all(|x| (x - 3.0).abs() < 1e-12));
    }

    #[test]
    fn order_rejects_bad_input() {
        assert!(observed_order(&[1.0]).is_err());
        assert!(observed_order(&[1.0, 0.0]).is_err());
        assert!(observed_order(&[1.0, -0.5]).is_err());
        assert!(observed_order(&[f64::NAN, 0.5]).is_err());
    }

    #[test]
    fn series_floors_and_orders() {
        let errs = [Some(1e-6), Some(1.25e-7), Some(1.5625e-8), Some(1e-13), Some(1e-14)];
        let s = ConvergenceSeries::from_errors(0.01, &errs);
        assert_eq!(s.levels[0].order, None);
        assert!(s.levels[3].floored && s.levels[4].floored);
        assert_eq!(s.levels[3].order, None);
        assert!((s.levels[2].t - 0.0025).abs() < 1e-18);
        // level 2 precedes the floor, so only the 0→1 order counts
        assert_eq!(s.valid_orders().len(), 1);
        assert!((s.mean_order().unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn series_without_floor_uses_all_orders() {
        let errs: Vec<_> = (0..6).map(|k| Some(0.5f64.powi(5 * k))).collect();
        let s = ConvergenceSeries::from_errors(0.01, &errs);
        assert_eq!(s.valid_orders().len(), 5);
        assert!((s.mean_order().unwrap() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn skipped_levels_are_floored() {
        let s = ConvergenceSeries::from_errors(0.01, &[None, Some(1e-3), Some(1.25e-4)]);
        assert!(s.levels[0].floored);
        assert_eq!(s.mean_order(), None);
        assert_eq!(s.levels[2].order.map(|o| (o * 1e9).round() / 1e9), Some(3.0));
    }
}
