//! The Aluthge transform on weight sequences and its iteration.
//!
//! One transform replaces each weight by the geometric mean of its two
//! neighbours; n iterations replace `ln w_k` by the binomially weighted
//! average
//!
//! ```text
//! ln Y_k(n) = Σ_{i=0}^{n} (C(n,i)/2^n) ln w_{k+i}
//! ```
//!
//! which is the closed form used as the primary path (O(n) per index versus
//! O(n²) for literal iteration, which is kept as the oracle). The averages
//! converge to `E ln X` pointwise — the iterates approach `r0 · S` strongly —
//! while the sup over k stays pinned at `R` for every depth, which is
//! exactly why the convergence is not in norm.

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::logspace::normalized_binomial;
use crate::sample::WeightSample;
use crate::{Error, Result};

/// One Aluthge step on a finite weight window: length shrinks by one.
pub fn aluthge_step(weights: &[f64]) -> Result<Vec<f64>> {
    if weights.len() < 2 {
        return Err(Error::invalid("Aluthge step needs at least 2 weights"));
    }
    Ok(weights
        .windows(2)
        .map(|w| {
            // Geometric mean in log space; zeros absorb and fixed points
            // stay exact.
            if w[0] == 0.0 || w[1] == 0.0 {
                0.0
            } else if w[0] == w[1] {
                w[0]
            } else {
                (0.5 * (w[0].ln() + w[1].ln())).exp()
            }
        })
        .collect())
}

/// `Y_k(n)`: the k-th weight after n transforms, by the closed form.
/// `k` is 0-based; requires `k + n < sample.len()`.
pub fn closed_form_weight(sample: &WeightSample, n: usize, k: usize) -> Result<f64> {
    if k + n >= sample.len() + 1 && n > 0 || k + n > sample.len().saturating_sub(1) {
        return Err(Error::invalid(format!(
            "Y_{k}({n}) needs weight index {} but sample has {}",
            k + n,
            sample.len()
        )));
    }
    let kernel = normalized_binomial(n);
    let logs = &sample.log_weights[k..=k + n];
    let mut acc = 0.0f64;
    for (c, l) in kernel.iter().zip(logs) {
        if *l == f64::NEG_INFINITY {
            return Ok(0.0);
        }
        acc += c * l;
    }
    Ok(acc.exp())
}

/// Batch `ln Y_k(n)` for `k = 0..count` (0-based indices into the sample).
///
/// Direct O(count·n) evaluation for small jobs; overlap-save FFT convolution
/// with the binomial kernel for large ones (exact to roundoff, checked
/// against the direct path in tests). Zero weights force `-inf` through the
/// affected windows.
pub fn batch_log_weights(sample: &WeightSample, n: usize, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::invalid("batch needs count >= 1"));
    }
    if count + n > sample.len() {
        return Err(Error::invalid(format!(
            "batch of {count} depth-{n} weights needs {} samples, have {}",
            count + n,
            sample.len()
        )));
    }
    let kernel = normalized_binomial(n);
    let logs = &sample.log_weights[..count + n];
    if logs.iter().any(|l| *l == f64::NEG_INFINITY) {
        // Rare path: fall back to direct evaluation with -inf propagation.
        return Ok((0..count)
            .into_par_iter()
            .map(|k| {
                let mut acc = 0.0f64;
                for (c, l) in kernel.iter().zip(&logs[k..=k + n]) {
                    if *l == f64::NEG_INFINITY {
                        return f64::NEG_INFINITY;
                    }
                    acc += c * l;
                }
                acc
            })
            .collect());
    }
    if (count as u64) * (n as u64 + 1) <= (1 << 26) {
        return Ok((0..count)
            .into_par_iter()
            .map(|k| kernel.iter().zip(&logs[k..=k + n]).map(|(c, l)| c * l).sum())
            .collect());
    }
    Ok(fft_correlate(logs, &kernel, count))
}

/// Overlap-save cross-correlation `out[k] = Σ_i kernel[i]·signal[k+i]`.
fn fft_correlate(signal: &[f64], kernel: &[f64], count: usize) -> Vec<f64> {
    let klen = kernel.len();
    let chunk = (4 * klen.next_power_of_two()).max(1 << 15);
    let fft_len = (chunk + klen).next_power_of_two();
    let step = fft_len - klen + 1;
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(fft_len);
    let inv = planner.plan_fft_inverse(fft_len);

    // Reversed kernel turns convolution into correlation.
    let mut kbuf = vec![Complex::new(0.0, 0.0); fft_len];
    for (i, &c) in kernel.iter().enumerate() {
        kbuf[klen - 1 - i] = Complex::new(c, 0.0);
    }
    fwd.process(&mut kbuf);

    let mut out = vec![0.0f64; count];
    let starts: Vec<usize> = (0..count).step_by(step).collect();
    let results: Vec<(usize, Vec<f64>)> = starts
        .par_iter()
        .map(|&start| {
            let take = step.min(count - start);
            let mut buf = vec![Complex::new(0.0, 0.0); fft_len];
            let end = (start + take + klen - 1).min(signal.len());
            for (i, &s) in signal[start..end].iter().enumerate() {
                buf[i] = Complex::new(s, 0.0);
            }
            let mut planner = FftPlanner::<f64>::new();
            let fwd = planner.plan_fft_forward(fft_len);
            let inv2 = planner.plan_fft_inverse(fft_len);
            fwd.process(&mut buf);
            for (b, k) in buf.iter_mut().zip(&kbuf) {
                *b *= k;
            }
            inv2.process(&mut buf);
            let scale = 1.0 / fft_len as f64;
            // Correlation value for index start+j sits at position klen-1+j.
            let vals: Vec<f64> = (0..take).map(|j| buf[klen - 1 + j].re * scale).collect();
            (start, vals)
        })
        .collect();
    drop(inv);
    for (start, vals) in results {
        out[start..start + vals.len()].copy_from_slice(&vals);
    }
    out
}

/// Convergence diagnostics per depth.
#[derive(Clone, Debug, Serialize)]
pub struct DepthReport {
    pub n: usize,
    /// Median over `k < K` of `|Y_k(n) - r0|` (against 0 when the law
    /// charges 0 and `r0 = 0`).
    pub median_dev: f64,
    /// Max of `Y_k(n)` over `min(K·2^n, available)` indices.
    pub sup_weight: f64,
    /// Number of indices the sup scanned.
    pub sup_indices: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct AluthgeReport {
    pub r0: f64,
    pub depths: Vec<DepthReport>,
}

/// Scan the iterated transform at the requested depths.
///
/// Depth n consumes n extra trailing weights, so the usable index window
/// shrinks with depth; `sup_indices` reports what was actually scanned.
pub fn convergence_report(
    sample: &WeightSample,
    n_values: &[usize],
    k_median: usize,
) -> Result<AluthgeReport> {
    if k_median == 0 {
        return Err(Error::invalid("median window must be nonempty"));
    }
    let stats = crate::law::law_stats(&sample.law)?;
    let r0 = stats.r0;
    let mut depths = Vec::with_capacity(n_values.len());
    for &n in n_values {
        if k_median + n > sample.len() {
            return Err(Error::invalid(format!(
                "depth {n} needs at least {} weights, sample has {}",
                k_median + n,
                sample.len()
            )));
        }
        let sup_count = sample
            .len()
            .saturating_sub(n)
            .min(k_median.saturating_mul(1usize << n.min(40)));
        let logs = batch_log_weights(sample, n, sup_count.max(k_median))?;
        let mut devs: Vec<f64> = logs[..k_median]
            .iter()
            .map(|l| (l.exp() - r0).abs())
            .collect();
        devs.sort_by(f64::total_cmp);
        let median_dev = if k_median % 2 == 1 {
            devs[k_median / 2]
        } else {
            0.5 * (devs[k_median / 2 - 1] + devs[k_median / 2])
        };
        let sup_log = logs[..sup_count]
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        depths.push(DepthReport {
            n,
            median_dev,
            sup_weight: sup_log.exp(),
            sup_indices: sup_count,
        });
    }
    Ok(AluthgeReport { r0, depths })
}
