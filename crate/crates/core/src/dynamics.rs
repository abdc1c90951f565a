//! Linear dynamics of the backward shift `T*`.
//!
//! All verdicts below concern the adjoint (the backward shift) — the forward
//! shift is never hypercyclic — and are exact functions of the law
//! statistics under the hypotheses "non-degenerate" and `P(X = 0) = 0`:
//!
//! ```text
//! supercyclic            always
//! hypercyclic            iff E ln X >= 0     (sup of weight products infinite)
//! Li-Yorke chaotic       iff R > 1           (sup of ‖(T*)^n‖ infinite)
//! topologically mixing   iff E ln X > 0      (weight products -> infinity)
//! chaotic = frequently
//!   hypercyclic          iff E ln X > 0      (Σ (w_1…w_n)^{-2} < infinity)
//! ```
//!
//! The empirical orbit statistics mirror the three product criteria; they
//! are diagnostics only — verdicts come from the closed-form statistics,
//! since sampling adds no information to them.

use serde::Serialize;

use crate::law::LawStats;
use crate::logspace::LogSumExp;
use crate::sample::WeightSample;
use crate::{Error, Result};

/// Per-property almost-sure verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DynVerdict {
    AlmostSurelyYes,
    AlmostSurelyNo,
    /// The classifying theorem assumes a non-degenerate law with no zero
    /// atom; outside that region no verdict is claimed.
    HypothesisNotMet,
}

#[derive(Clone, Debug, Serialize)]
pub struct DynamicsVerdict {
    pub supercyclic: DynVerdict,
    pub hypercyclic: DynVerdict,
    pub li_yorke: DynVerdict,
    pub mixing: DynVerdict,
    pub chaotic: DynVerdict,
    pub freq_hypercyclic: DynVerdict,
    pub non_degenerate: bool,
    pub p_zero_is_zero: bool,
}

/// Classify the dynamics of `T*` from law statistics.
pub fn classify_dynamics(stats: &LawStats) -> DynamicsVerdict {
    let non_degenerate = !stats.degenerate;
    let p_zero_is_zero = stats.p_zero == 0.0;
    if !(non_degenerate && p_zero_is_zero) {
        return DynamicsVerdict {
            supercyclic: DynVerdict::HypothesisNotMet,
            hypercyclic: DynVerdict::HypothesisNotMet,
            li_yorke: DynVerdict::HypothesisNotMet,
            mixing: DynVerdict::HypothesisNotMet,
            chaotic: DynVerdict::HypothesisNotMet,
            freq_hypercyclic: DynVerdict::HypothesisNotMet,
            non_degenerate,
            p_zero_is_zero,
        };
    }
    let yes_if = |b: bool| {
        if b {
            DynVerdict::AlmostSurelyYes
        } else {
            DynVerdict::AlmostSurelyNo
        }
    };
    let positive_drift = yes_if(stats.mean_log > 0.0);
    DynamicsVerdict {
        supercyclic: DynVerdict::AlmostSurelyYes,
        hypercyclic: yes_if(stats.mean_log >= 0.0),
        li_yorke: yes_if(stats.big_r > 1.0),
        mixing: positive_drift,
        chaotic: positive_drift,
        freq_hypercyclic: positive_drift,
        non_degenerate,
        p_zero_is_zero,
    }
}

/// Orbit statistics behind the dynamics criteria, all in log space.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitStatistics {
    /// Running sup of `ln Π_{i<=n} w_i` (hypercyclicity witness).
    pub salas_sup: f64,
    /// `ln Σ_{n<=N} (w_1…w_n)^{-2}` at N/2 and N (chaos series).
    pub chaos_series_half: f64,
    pub chaos_series_full: f64,
    /// `ln Π_{i<=n} w_i` at n = N (strong-convergence-to-0 witness).
    pub c00_decay: f64,
}

/// Scan one sample for the orbit statistics.
pub fn orbit_statistics(sample: &WeightSample, n: usize) -> Result<OrbitStatistics> {
    let stats = crate::law::law_stats(&sample.law)?;
    if stats.p_zero > 0.0 {
        return Err(Error::hypothesis(
            "orbit statistics need P(X = 0) = 0 (with a zero atom the sample splits into nilpotent blocks and the point-spectrum picture applies instead)",
        ));
    }
    if n < 1000 || n > sample.len() {
        return Err(Error::invalid(format!(
            "orbit scan length must lie in [1000, {}]",
            sample.len()
        )));
    }
    let mut s = 0.0f64;
    let mut salas_sup = f64::NEG_INFINITY;
    let mut chaos = LogSumExp::new();
    let mut chaos_half = 0.0;
    for k in 1..=n {
        s += sample.log_weights[k - 1];
        salas_sup = salas_sup.max(s);
        chaos.push(-2.0 * s);
        if k == n / 2 {
            chaos_half = chaos.value();
        }
    }
    Ok(OrbitStatistics {
        salas_sup,
        chaos_series_half: chaos_half,
        chaos_series_full: chaos.value(),
        c00_decay: s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::law::{law_stats, two_point_e, WeightLaw};
    use crate::sample::sample_weights;

    fn verdicts(v: &DynamicsVerdict) -> [DynVerdict; 6] {
        [
            v.supercyclic,
            v.hypercyclic,
            v.li_yorke,
            v.mixing,
            v.chaotic,
            v.freq_hypercyclic,
        ]
    }

    #[test]
    fn uniform_law_row() {
        // E ln X = -1 < 0, R = 1.
        let stats = law_stats(&WeightLaw::UniformInterval { lo: 0.0, hi: 1.0 }).unwrap();
        let v = classify_dynamics(&stats);
        assert_eq!(v.supercyclic, DynVerdict::AlmostSurelyYes);
        assert_eq!(v.hypercyclic, DynVerdict::AlmostSurelyNo);
        assert_eq!(v.li_yorke, DynVerdict::AlmostSurelyNo);
        assert_eq!(v.mixing, DynVerdict::AlmostSurelyNo);
        assert_eq!(v.chaotic, DynVerdict::AlmostSurelyNo);
        assert_eq!(v.freq_hypercyclic, DynVerdict::AlmostSurelyNo);
    }

    #[test]
    fn critical_two_point_row() {
        // E ln X = 0, R = e > 1.
        let stats = law_stats(&two_point_e()).unwrap();
        let v = classify_dynamics(&stats);
        assert_eq!(v.supercyclic, DynVerdict::AlmostSurelyYes);
        assert_eq!(v.hypercyclic, DynVerdict::AlmostSurelyYes);
        assert_eq!(v.li_yorke, DynVerdict::AlmostSurelyYes);
        assert_eq!(v.mixing, DynVerdict::AlmostSurelyNo);
        assert_eq!(v.chaotic, DynVerdict::AlmostSurelyNo);
        assert_eq!(v.freq_hypercyclic, DynVerdict::AlmostSurelyNo);
    }

    #[test]
    fn positive_drift_row_all_yes() {
        // 0.75 ln 2 + 0.25 ln(1/2) = 0.5 ln 2 > 0.
        let stats = law_stats(&WeightLaw::TwoPoint { a: 2.0, b: 0.5, p: 0.75 }).unwrap();
        assert!((stats.mean_log - 0.5 * 2f64.ln()).abs() < 1e-15);
        let v = classify_dynamics(&stats);
        for d in verdicts(&v) {
            assert_eq!(d, DynVerdict::AlmostSurelyYes);
        }
    }

    #[test]
    fn hypothesis_flags_disable_verdicts() {
        let stats = law_stats(&WeightLaw::Degenerate { c: 2.0 }).unwrap();
        let v = classify_dynamics(&stats);
        assert!(!v.non_degenerate);
        for d in verdicts(&v) {
            assert_eq!(d, DynVerdict::HypothesisNotMet);
        }
        let stats = law_stats(&WeightLaw::FiniteDiscrete {
            atoms: vec![0.0, 2.0],
            probs: vec![0.5, 0.5],
        })
        .unwrap();
        let v = classify_dynamics(&stats);
        assert!(!v.p_zero_is_zero);
        assert_eq!(v.hypercyclic, DynVerdict::HypothesisNotMet);
    }

    #[test]
    fn verdict_lattice_over_catalog() {
        // chaotic => mixing-equivalent => hypercyclic => supercyclic.
        let laws = vec![
            WeightLaw::UniformInterval { lo: 0.0, hi: 1.0 },
            WeightLaw::UniformInterval { lo: 0.5, hi: 3.0 },
            two_point_e(),
            WeightLaw::TwoPoint { a: 2.0, b: 0.5, p: 0.75 },
            WeightLaw::TwoPoint { a: 2.0, b: 0.5, p: 0.25 },
            WeightLaw::FiniteDiscrete {
                atoms: vec![0.5, 1.0, 4.0],
                probs: vec![0.25, 0.5, 0.25],
            },
        ];
        let rank = |d: DynVerdict| d == DynVerdict::AlmostSurelyYes;
        for law in laws {
            let v = classify_dynamics(&law_stats(&law).unwrap());
            if v.non_degenerate && v.p_zero_is_zero {
                assert_eq!(v.chaotic, v.mixing);
                assert_eq!(v.chaotic, v.freq_hypercyclic);
                if rank(v.chaotic) {
                    assert!(rank(v.hypercyclic));
                }
                if rank(v.hypercyclic) {
                    assert!(rank(v.supercyclic));
                }
            }
        }
    }

    #[test]
    fn orbit_statistics_degenerate_two() {
        // Degenerate(2): salas sup = N ln 2; chaos series = Σ 4^{-n} = 1/3.
        let law = WeightLaw::Degenerate { c: 2.0 };
        let sample = sample_weights(&law, 2000, 0, 0).unwrap();
        let o = orbit_statistics(&sample, 2000).unwrap();
        assert!((o.salas_sup - 2000.0 * 2f64.ln()).abs() < 1e-9);
        assert!((o.chaos_series_full - (1.0f64 / 3.0).ln()).abs() < 1e-12);
        assert!((o.chaos_series_full - o.chaos_series_half).abs() < 1e-12);
        assert!((o.c00_decay - 2000.0 * 2f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn orbit_statistics_negative_drift_decay() {
        // Uniform(0,1): per-step drift -1; by N = 1e4 the basis-orbit log is
        // deep below -1e3·ln(10).
        let law = WeightLaw::UniformInterval { lo: 0.0, hi: 1.0 };
        let n = 10_000;
        for stream in 0..5 {
            let sample = sample_weights(&law, n, 40, stream).unwrap();
            let o = orbit_statistics(&sample, n).unwrap();
            assert!(o.c00_decay / 10f64.ln() <= -1e3, "{}", o.c00_decay);
        }
    }

    #[test]
    fn orbit_statistics_rejects_zero_atom() {
        let law = WeightLaw::FiniteDiscrete {
            atoms: vec![0.0, 1.0],
            probs: vec![0.5, 0.5],
        };
        let sample = sample_weights(&law, 2000, 0, 0).unwrap();
        match orbit_statistics(&sample, 2000) {
            Err(crate::Error::Hypothesis(_)) => {}
            other => panic!("expected hypothesis violation, got {other:?}"),
        }
    }

    #[test]
    fn recurrent_walk_running_sup_grows() {
        // Critical law: the running sup of the log-product walk reaches
        // ~sqrt(N) scales; at N = 1e6 it exceeds 100 in the vast majority of
        // samples (reflection principle).
        let law = two_point_e();
        let mut hits = 0;
        for stream in 0..20 {
            let sample = sample_weights(&law, 1_000_000, 77, stream).unwrap();
            let o = orbit_statistics(&sample, 1_000_000).unwrap();
            if o.salas_sup >= 100.0 {
                hits += 1;
            }
        }
        assert!(hits >= 19, "only {hits}/20 samples reached 100");
    }
}
