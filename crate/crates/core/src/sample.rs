//! Reproducible i.i.d. weight sampling.
//!
//! All randomness in the crate flows through a single 64-bit master seed.
//! Independent sequences are drawn on numbered ChaCha streams (a counter
//! keyed into the block cipher), so Monte Carlo trials can run in parallel
//! with results invariant to scheduling: trial `k` always reads stream
//! `stream_for(label, k)` regardless of which thread runs it.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::law::WeightLaw;
use crate::logspace::ln_weight;
use crate::{Error, Result};

/// A finite, seeded realization of the i.i.d. weight sequence (one sample
/// point of the underlying probability space).
#[derive(Clone, Debug, Serialize)]
pub struct WeightSample {
    pub law: WeightLaw,
    pub seed: u64,
    pub stream: u64,
    pub weights: Vec<f64>,
    pub log_weights: Vec<f64>,
}

impl WeightSample {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Deterministic generator positioned on `(seed, stream)`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Label-keyed stream index, used by commands to keep per-purpose streams
/// disjoint without coordinating ranges. FNV-1a over the label bytes mixed
/// with the trial index.
pub fn stream_for(label: &str, trial: u64) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h ^= trial;
    h = h.wrapping_mul(0x100000001b3);
    h
}

/// Draw one weight from the law.
///
/// Discrete laws invert the CDF on a single uniform draw, so the sampled
/// value is bit-reproducible across platforms and rand versions used here.
#[inline]
pub fn draw(law: &WeightLaw, rng: &mut ChaCha8Rng) -> f64 {
    match law {
        WeightLaw::Degenerate { c } => *c,
        WeightLaw::TwoPoint { a, b, p } => {
            let u: f64 = rng.gen();
            if u < *p {
                *a
            } else {
                *b
            }
        }
        WeightLaw::UniformInterval { lo, hi } => {
            let u: f64 = rng.gen();
            lo + (hi - lo) * u
        }
        WeightLaw::FiniteDiscrete { atoms, probs } => {
            let u: f64 = rng.gen();
            let mut acc = 0.0;
            for (a, p) in atoms.iter().zip(probs) {
                acc += p;
                if u < acc {
                    return *a;
                }
            }
            *atoms.last().unwrap()
        }
    }
}

/// Sample `length` i.i.d. weights on the given stream.
pub fn sample_weights(law: &WeightLaw, length: usize, seed: u64, stream: u64) -> Result<WeightSample> {
    law.validate()?;
    if length == 0 {
        return Err(Error::invalid("sample length must be >= 1"));
    }
    let mut rng = stream_rng(seed, stream);
    let mut weights = Vec::with_capacity(length);
    let mut log_weights = Vec::with_capacity(length);
    for _ in 0..length {
        let w = draw(law, &mut rng);
        weights.push(w);
        log_weights.push(ln_weight(w));
    }
    Ok(WeightSample {
        law: law.clone(),
        seed,
        stream,
        weights,
        log_weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::law::{law_stats, two_point_e};

    #[test]
    fn degenerate_sampling_is_constant() {
        let s = sample_weights(&WeightLaw::Degenerate { c: 2.0 }, 3, 1, 0).unwrap();
        assert_eq!(s.weights, vec![2.0, 2.0, 2.0]);
    }

    #[test]
    fn same_seed_same_stream_is_bit_identical() {
        let law = WeightLaw::UniformInterval { lo: 0.0, hi: 1.0 };
        let a = sample_weights(&law, 4096, 42, 7).unwrap();
        let b = sample_weights(&law, 4096, 42, 7).unwrap();
        assert_eq!(a.weights, b.weights);
        let c = sample_weights(&law, 4096, 42, 8).unwrap();
        assert_ne!(a.weights, c.weights);
    }

    #[test]
    fn zero_length_rejected() {
        assert!(sample_weights(&WeightLaw::Degenerate { c: 1.0 }, 0, 0, 0).is_err());
    }

    #[test]
    fn uniform_discrete_frequencies_within_binomial_band() {
        // Each atom frequency within 1/3 ± 0.005 at n = 10^6 (a 6-sigma band:
        // sd of the empirical frequency is sqrt(2/9)/1000 ≈ 4.7e-4).
        let law = WeightLaw::FiniteDiscrete {
            atoms: vec![0.0, 1.0, 2.0],
            probs: vec![1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
        };
        let n = 1_000_000;
        let s = sample_weights(&law, n, 20240901, 0).unwrap();
        for atom in [0.0, 1.0, 2.0] {
            let count = s.weights.iter().filter(|&&w| w == atom).count();
            let freq = count as f64 / n as f64;
            assert!(
                (freq - 1.0 / 3.0).abs() < 0.005,
                "atom {atom} frequency {freq}"
            );
        }
    }

    #[test]
    fn empirical_range_and_log_mean_match_law() {
        let n = 1_000_000;
        // Continuous law: min/max within delta = 0.01 of [r, R].
        let ulaw = WeightLaw::UniformInterval { lo: 0.0, hi: 1.0 };
        let us = sample_weights(&ulaw, n, 7, 0).unwrap();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &w in &us.weights {
            lo = lo.min(w);
            hi = hi.max(w);
        }
        assert!(lo >= -1e-12 && lo <= 0.01);
        assert!(hi >= 0.99 && hi <= 1.0 + 1e-12);

        // Discrete law: extremes attained exactly.
        let dlaw = two_point_e();
        let ds = sample_weights(&dlaw, n, 7, 1).unwrap();
        let stats = law_stats(&dlaw).unwrap();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &w in &ds.weights {
            lo = lo.min(w);
            hi = hi.max(w);
        }
        assert_eq!(lo, stats.r);
        assert_eq!(hi, stats.big_r);

        // Mean of log-weights approximates E ln X within 5 standard errors.
        // For the two-point law ln X = ±1, so SE = 1/sqrt(n).
        let mean: f64 = ds.log_weights.iter().sum::<f64>() / n as f64;
        let se = 1.0 / (n as f64).sqrt();
        assert!(
            (mean - stats.mean_log).abs() <= 5.0 * se,
            "mean {mean} vs {} (se {se})",
            stats.mean_log
        );
    }
}
