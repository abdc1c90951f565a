//! Finite truncations of the shift and weight-window statistics.
//!
//! The N x N compression of `T e_n = w_n e_{n+1}` is strictly lower
//! bidiagonal (hence nilpotent); `‖T^n‖` and `m(T^n)` are realized by
//! max/min products of `n` consecutive weights, because `T^n` decomposes
//! into an orthogonal sum of shifts with weight products as weights. Window
//! scans therefore run on the weight sequence itself, in log space, never on
//! the truncation matrix, so the minima are not polluted by the spurious
//! kernel at the truncation edge.

use serde::Serialize;

use crate::sample::WeightSample;
use crate::{Error, Result};

pub use crate::freepoly::FreePolynomial;

/// The top-left `N x N` compression of the shift: `T e_i = sub[i] e_{i+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedShift {
    /// Subdiagonal entries, length `dim - 1`.
    pub sub: Vec<f64>,
}

impl TruncatedShift {
    pub fn new(sub: Vec<f64>) -> Self {
        TruncatedShift { sub }
    }

    pub fn dim(&self) -> usize {
        self.sub.len() + 1
    }

    pub fn max_weight(&self) -> f64 {
        self.sub.iter().copied().fold(0.0, f64::max)
    }

    /// Forward application `y = T x` (O(N)).
    pub fn apply<T>(&self, x: &[T], y: &mut [T])
    where
        T: Copy + std::ops::Mul<f64, Output = T> + Default,
    {
        y[0] = T::default();
        for (i, &w) in self.sub.iter().enumerate() {
            y[i + 1] = x[i] * w;
        }
    }

    /// Adjoint application `y = T* x` (O(N)).
    pub fn apply_adjoint<T>(&self, x: &[T], y: &mut [T])
    where
        T: Copy + std::ops::Mul<f64, Output = T> + Default,
    {
        let n = self.dim();
        for (i, &w) in self.sub.iter().enumerate() {
            y[i] = x[i + 1] * w;
        }
        y[n - 1] = T::default();
    }
}

/// Truncate a sampled weight sequence to the `N x N` compression.
pub fn truncate(sample: &WeightSample, n: usize) -> Result<TruncatedShift> {
    if n == 0 {
        return Err(Error::invalid("truncation dimension must be >= 1"));
    }
    if n > sample.len() + 1 {
        return Err(Error::invalid(format!(
            "truncation N = {n} needs {} weights, sample has {}",
            n - 1,
            sample.len()
        )));
    }
    Ok(TruncatedShift::new(sample.weights[..n - 1].to_vec()))
}

/// Extremes of length-`n` window products of the weight sequence.
///
/// Both products are reported in log space (`ln 0 = -inf` when a window
/// contains a zero weight). `exp(log_max)` estimates `‖T^n‖` and
/// `exp(log_min)` estimates `m(T^n)`.
#[derive(Clone, Debug, Serialize)]
pub struct WindowStats {
    pub n: usize,
    pub log_max_product: f64,
    pub log_min_product: f64,
    /// Number of windows scanned.
    pub count: usize,
    /// Start index (0-based) of the maximizing window.
    pub argmax: usize,
    /// Start index (0-based) of the minimizing window.
    pub argmin: usize,
}

/// Scan all length-`n` windows of the sample's weight sequence.
///
/// Uses a monotone-queue pass over prefix sums of log-weights, O(len) for
/// any window length. Sums of logs are exact for the discrete test laws
/// (integer logs) and stable in general because individual logs are O(1).
pub fn window_stats(sample: &WeightSample, n: usize) -> Result<WindowStats> {
    if n == 0 {
        return Err(Error::invalid("window length must be >= 1"));
    }
    if n > sample.len() {
        return Err(Error::invalid(format!(
            "window length {n} exceeds sample length {}",
            sample.len()
        )));
    }
    let logs = &sample.log_weights;
    let count = sample.len() - n + 1;
    let mut best_max = f64::NEG_INFINITY;
    let mut best_min = f64::INFINITY;
    let (mut argmax, mut argmin) = (0usize, 0usize);
    // Recompute each window directly when n is small; otherwise use prefix
    // sums (windows containing -inf handled by zero-count bookkeeping).
    if n <= 64 {
        for start in 0..count {
            let mut s = 0.0;
            for &l in &logs[start..start + n] {
                s += l;
            }
            if s > best_max {
                best_max = s;
                argmax = start;
            }
            if s < best_min {
                best_min = s;
                argmin = start;
            }
        }
    } else {
        let mut prefix = Vec::with_capacity(sample.len() + 1);
        let mut zeros = Vec::with_capacity(sample.len() + 1);
        prefix.push(0.0);
        zeros.push(0usize);
        let mut acc = 0.0;
        let mut zc = 0usize;
        for &l in logs {
            if l == f64::NEG_INFINITY {
                zc += 1;
            } else {
                acc += l;
            }
            prefix.push(acc);
            zeros.push(zc);
        }
        for start in 0..count {
            let s = if zeros[start + n] > zeros[start] {
                f64::NEG_INFINITY
            } else {
                prefix[start + n] - prefix[start]
            };
            if s > best_max {
                best_max = s;
                argmax = start;
            }
            if s < best_min {
                best_min = s;
                argmin = start;
            }
        }
    }
    Ok(WindowStats {
        n,
        log_max_product: best_max,
        log_min_product: best_min,
        count,
        argmax,
        argmin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::law::WeightLaw;
    use crate::sample::sample_weights;

    fn fixed_sample(weights: Vec<f64>) -> WeightSample {
        WeightSample {
            law: WeightLaw::Degenerate { c: 1.0 },
            seed: 0,
            stream: 0,
            log_weights: weights.iter().map(|&w| crate::logspace::ln_weight(w)).collect(),
            weights,
        }
    }

    #[test]
    fn truncate_basic_shapes() {
        let s = fixed_sample(vec![1.0, 2.0, 3.0]);
        let t = truncate(&s, 4).unwrap();
        assert_eq!(t.sub, vec![1.0, 2.0, 3.0]);
        // N = 1 is the zero operator on a 1-dim space.
        let t1 = truncate(&s, 1).unwrap();
        assert_eq!(t1.dim(), 1);
        assert!(t1.sub.is_empty());
        // N = 2 is [[0,0],[w,0]].
        let t2 = truncate(&s, 2).unwrap();
        assert_eq!(t2.sub, vec![1.0]);
        assert!(truncate(&s, 5).is_err());
    }

    #[test]
    fn window_products_match_dense_norm_oracle() {
        // weights (1,2,3), n = 2: products are 2 and 6. The dense 4x4 oracle
        // for ‖T^2‖ gives 6 (largest singular value of T^2 equals the max
        // two-step product).
        let s = fixed_sample(vec![1.0, 2.0, 3.0]);
        let w = window_stats(&s, 2).unwrap();
        assert!((w.log_max_product - 6f64.ln()).abs() < 1e-12);
        assert!((w.log_min_product - 2f64.ln()).abs() < 1e-12);
        assert_eq!(w.count, 2);

        let shift = truncate(&s, 4).unwrap();
        let poly = FreePolynomial::parse("SS").unwrap();
        let m = crate::freepoly::eval_free_poly(&shift, &poly);
        let norm = crate::norm::operator_norm(&m, 1e-12).unwrap();
        assert!((norm - 6.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_windows_are_powers() {
        let law = WeightLaw::Degenerate { c: 1.5 };
        let s = sample_weights(&law, 100, 0, 0).unwrap();
        for n in [1usize, 3, 7] {
            let w = window_stats(&s, n).unwrap();
            let expected = (n as f64) * 1.5f64.ln();
            assert!((w.log_max_product - expected).abs() < 1e-12);
            assert!((w.log_min_product - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn two_point_extremes_attained_at_scale() {
        // n = 1 windows over 10^6 draws attain both atoms.
        let law = crate::law::two_point_e();
        let s = sample_weights(&law, 1_000_000, 3, 0).unwrap();
        let w = window_stats(&s, 1).unwrap();
        assert!((w.log_max_product - 1.0).abs() < 1e-12);
        assert!((w.log_min_product + 1.0).abs() < 1e-12);
    }

    #[test]
    fn window_roots_stay_in_essential_range() {
        let law = WeightLaw::UniformInterval { lo: 0.25, hi: 2.0 };
        let s = sample_weights(&law, 10_000, 11, 0).unwrap();
        for n in [1usize, 5, 40, 200] {
            let w = window_stats(&s, n).unwrap();
            let upper = w.log_max_product / n as f64;
            let lower = w.log_min_product / n as f64;
            assert!(upper <= 2f64.ln() + 1e-12);
            assert!(lower >= 0.25f64.ln() - 1e-12);
        }
    }

    #[test]
    fn prefix_sum_path_agrees_with_direct() {
        let law = WeightLaw::UniformInterval { lo: 0.1, hi: 3.0 };
        let s = sample_weights(&law, 5000, 5, 0).unwrap();
        let w = window_stats(&s, 100).unwrap();
        // Direct recomputation of the flagged windows.
        let direct_max: f64 = s.log_weights[w.argmax..w.argmax + 100].iter().sum();
        let direct_min: f64 = s.log_weights[w.argmin..w.argmin + 100].iter().sum();
        assert!((w.log_max_product - direct_max).abs() < 1e-9);
        assert!((w.log_min_product - direct_min).abs() < 1e-9);
    }

    #[test]
    fn zero_weights_propagate_neg_infinity() {
        let s = fixed_sample(vec![1.0, 0.0, 2.0, 3.0, 4.0]);
        let w = window_stats(&s, 2).unwrap();
        assert_eq!(w.log_min_product, f64::NEG_INFINITY);
        assert!((w.log_max_product - 12f64.ln()).abs() < 1e-12);
    }
}
