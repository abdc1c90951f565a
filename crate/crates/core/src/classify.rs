//! Empirical statistics behind the sample-classification results and the
//! structure diagnostics: pattern recurrence, window-distance functionals,
//! similarity walks, self-commutator and hyponormality probes, the
//! m-convexity moment identity, and the moment-sequence iterated-logarithm
//! statistic.

use rayon::prelude::*;
use serde::Serialize;

use crate::law::{law_stats, WeightLaw};
use crate::logspace::LogSumExp;
use crate::sample::{draw, stream_for, stream_rng, WeightSample};
use crate::{Error, Result};

/// Hits of a finite pattern inside the weight sequence.
#[derive(Clone, Debug, Serialize)]
pub struct RecurrenceReport {
    pub pattern: Vec<f64>,
    pub tol: f64,
    pub hits: Vec<usize>,
    pub first_hit: Option<usize>,
}

/// Scan all overlapping windows for max-norm matches of `pattern`.
///
/// For discrete laws with `tol` below the atom gap this is exact matching.
/// Patterns outside the essential range are allowed — they simply never
/// (or rarely) hit, and the report says so.
pub fn pattern_recurrence(
    sample: &WeightSample,
    pattern: &[f64],
    tol: f64,
) -> Result<RecurrenceReport> {
    if pattern.is_empty() {
        return Err(Error::invalid("pattern must be nonempty"));
    }
    if pattern.len() > sample.len() {
        return Err(Error::invalid("pattern longer than sample"));
    }
    let w = &sample.weights;
    let k = pattern.len();
    let mut hits = Vec::new();
    'outer: for s in 0..=(w.len() - k) {
        for (a, b) in w[s..].iter().zip(pattern) {
            if (a - b).abs() > tol {
                continue 'outer;
            }
        }
        hits.push(s);
    }
    Ok(RecurrenceReport {
        pattern: pattern.to_vec(),
        tol,
        first_hit: hits.first().copied(),
        hits,
    })
}

/// Best max-norm approximation of a target prefix by sample windows.
#[derive(Clone, Debug, Serialize)]
pub struct WindowDistance {
    pub distance: f64,
    pub argmin: usize,
}

/// `min_{s <= N-k} max_i |w_{s+i} - target_i|` with the minimizing index.
pub fn window_distance_profile(
    sample: &WeightSample,
    target: &[f64],
    n: usize,
) -> Result<WindowDistance> {
    let k = target.len();
    if k == 0 || k > n || n > sample.len() {
        return Err(Error::invalid("target/window sizes out of range"));
    }
    let w = &sample.weights;
    let mut best = f64::INFINITY;
    let mut argmin = 0usize;
    for s in 0..=(n - k) {
        let mut d = 0.0f64;
        for (a, b) in w[s..].iter().zip(target) {
            d = d.max((a - b).abs());
            if d >= best {
                break;
            }
        }
        if d < best {
            best = d;
            argmin = s;
        }
    }
    Ok(WindowDistance {
        distance: best,
        argmin,
    })
}

/// Running sup of the absolute log-ratio walk between two samples — the
/// similarity obstruction: two injective shifts are similar only when the
/// weight-product ratios stay bounded away from 0 and infinity.
pub fn similarity_walk(a: &WeightSample, b: &WeightSample, n: usize) -> Result<f64> {
    let sa = law_stats(&a.law)?;
    let sb = law_stats(&b.law)?;
    if sa.p_zero > 0.0 || sb.p_zero > 0.0 {
        return Err(Error::hypothesis(
            "similarity walk needs P(X = 0) = 0 for both laws",
        ));
    }
    if n > a.len().min(b.len()) {
        return Err(Error::invalid("walk length exceeds a sample"));
    }
    let mut s = 0.0f64;
    let mut sup = 0.0f64;
    for i in 0..n {
        s += a.log_weights[i] - b.log_weights[i];
        sup = sup.max(s.abs());
    }
    Ok(sup)
}

/// Self-commutator diagonal and hyponormality-prefix diagnostics.
#[derive(Clone, Debug, Serialize)]
pub struct StructureDiagnostics {
    /// `max_{2 <= k <= N-1} |w_k^2 - w_{k-1}^2|` — the interior diagonal of
    /// `T*T - TT*`; stays away from 0 for non-degenerate laws (essential
    /// non-normality).
    pub self_comm_diag_max: f64,
    /// The boundary entry `w_1^2` (the Fredholm-index witness), kept apart
    /// from the interior statistic.
    pub boundary_entry: f64,
    /// Monte Carlo estimate of `P(X_1 <= … <= X_{m+1})` with a binomial
    /// 95% half-width.
    pub hypo_prefix_prob: f64,
    pub hypo_prefix_ci: f64,
    pub hypo_prefix_len: usize,
}

/// Compute the diagnostics for one sample; the hyponormality prefix
/// probability is estimated over fresh trials on labeled streams.
pub fn structure_diagnostics(
    sample: &WeightSample,
    n: usize,
    prefix_len: usize,
    trials: u64,
    seed: u64,
) -> Result<StructureDiagnostics> {
    if n < 2 || n > sample.len() {
        return Err(Error::invalid("diagnostics need 2 <= N <= sample length"));
    }
    if prefix_len == 0 || trials == 0 {
        return Err(Error::invalid("prefix length and trials must be >= 1"));
    }
    let w = &sample.weights;
    let mut interior = 0.0f64;
    for k in 1..n - 1 {
        interior = interior.max((w[k] * w[k] - w[k - 1] * w[k - 1]).abs());
    }
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream_rng(seed, stream_for("hypo-prefix", t));
            let mut prev = f64::NEG_INFINITY;
            for _ in 0..=prefix_len {
                let x = draw(&sample.law, &mut rng);
                if x < prev {
                    return 0u64;
                }
                prev = x;
            }
            1u64
        })
        .sum();
    let p = hits as f64 / trials as f64;
    let ci = 1.96 * (p * (1.0 - p) / trials as f64).sqrt();
    Ok(StructureDiagnostics {
        self_comm_diag_max: interior,
        boundary_entry: w[0] * w[0],
        hypo_prefix_prob: p,
        hypo_prefix_ci: ci,
        hypo_prefix_len: prefix_len,
    })
}

/// Monte Carlo check of the m-convexity identity
/// `E Σ_{l=0}^m (-1)^l C(m,l) Π_{i<=m-l} X_i^2 = (E X^2 - 1)^m`.
#[derive(Clone, Debug, Serialize)]
pub struct MConvexReport {
    pub m: usize,
    pub estimate: f64,
    pub standard_error: f64,
    /// `(E X^2 - 1)^m` evaluated directly.
    pub target: f64,
    /// The same target through the binomial expansion
    /// `Σ_l (-1)^l C(m,l) (E X^2)^{m-l}` — an independent algebraic route.
    pub target_binomial: f64,
    pub within_4_se: bool,
}

pub fn m_convex_check(law: &WeightLaw, m: usize, trials: u64, seed: u64) -> Result<MConvexReport> {
    law.validate()?;
    if m == 0 || m > 20 {
        return Err(Error::invalid("m must lie in 1..=20"));
    }
    if trials < 10_000 {
        return Err(Error::invalid("need at least 1e4 trials"));
    }
    // Binomial coefficients C(m, l), exact in f64 for m <= 20.
    let mut binom = vec![1.0f64; m + 1];
    for l in 1..=m {
        binom[l] = binom[l - 1] * (m - l + 1) as f64 / l as f64;
    }
    let m2 = law.moment(2.0);
    let target = (m2 - 1.0).powi(m as i32);
    let target_binomial: f64 = (0..=m)
        .map(|l| {
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            sign * binom[l] * m2.powi((m - l) as i32)
        })
        .sum();
    let sums: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream_rng(seed, stream_for("m-convex", t));
            // products[j] = Π_{i<=j} X_i^2, products[0] = 1.
            let mut prod = 1.0f64;
            let mut acc = if m % 2 == 0 { binom[m] } else { -binom[m] };
            for j in 1..=m {
                let x = draw(law, &mut rng);
                prod *= x * x;
                let l = m - j;
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * binom[l] * prod;
            }
            acc
        })
        .collect();
    let mean = sums.iter().sum::<f64>() / trials as f64;
    let var = sums.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
        / (trials as f64 - 1.0);
    let se = (var / trials as f64).sqrt();
    Ok(MConvexReport {
        m,
        estimate: mean,
        standard_error: se,
        target,
        target_binomial,
        within_4_se: (mean - target).abs() <= 4.0 * se.max(1e-300),
    })
}

/// Running extremes of the moment-sequence LIL statistic
/// `G_n = ln ‖T^n x‖^2 / sqrt(2 σ² n ln ln n)` over `n ∈ [16, n_max]`.
#[derive(Clone, Debug, Serialize)]
pub struct MomentLilReport {
    pub run_max: f64,
    pub run_min: f64,
    pub argmax: usize,
    pub argmin: usize,
    /// Whether the scan used a general coefficient vector (exploratory: the
    /// basis-vector statement is a theorem, the general one is open).
    pub general_vector: bool,
}

/// Moment LIL scan for the basis vector `e_k` (`coeffs = None`) or for a
/// finitely supported `x = Σ a_j e_{k+j}` (`coeffs = Some(...)`,
/// exploratory).
pub fn moment_lil(
    sample: &WeightSample,
    k: usize,
    coeffs: Option<&[f64]>,
    n_max: usize,
) -> Result<MomentLilReport> {
    let stats = law_stats(&sample.law)?;
    if !stats.lil_normalized() {
        return Err(Error::hypothesis(
            "moment LIL needs a normalized law (E ln X = 0, sigma2 > 0)",
        ));
    }
    let sigma_sq = stats.sigma2.unwrap();
    let support = coeffs.map_or(1, |c| c.len());
    if support == 0 {
        return Err(Error::invalid("coefficient vector must be nonempty"));
    }
    if k + n_max + support - 1 > sample.len() {
        return Err(Error::invalid(format!(
            "scan needs {} weights, sample has {}",
            k + n_max + support - 1,
            sample.len()
        )));
    }
    if n_max < 16 {
        return Err(Error::invalid("n_max must be >= 16"));
    }
    // Prefix sums of 2 ln w over the touched range.
    let lo = k;
    let hi = k + n_max + support - 1;
    let mut prefix = Vec::with_capacity(hi - lo + 1);
    prefix.push(0.0f64);
    let mut acc = 0.0;
    for i in lo..hi {
        acc += 2.0 * sample.log_weights[i];
        prefix.push(acc);
    }
    let log_norm_sq = |n: usize| -> f64 {
        match coeffs {
            None => prefix[n],
            Some(c) => {
                let mut lse = LogSumExp::new();
                for (j, &a) in c.iter().enumerate() {
                    if a == 0.0 {
                        continue;
                    }
                    // |a_j|^2 X_{k+j}^2 … X_{k+j+n-1}^2
                    lse.push(2.0 * a.abs().ln() + prefix[j + n] - prefix[j]);
                }
                lse.value()
            }
        }
    };
    let mut run_max = f64::NEG_INFINITY;
    let mut run_min = f64::INFINITY;
    let (mut argmax, mut argmin) = (16usize, 16usize);
    for n in 16..=n_max {
        let denom = (2.0 * sigma_sq * n as f64 * (n as f64).ln().ln()).sqrt();
        let g = log_norm_sq(n) / denom;
        if g > run_max {
            run_max = g;
            argmax = n;
        }
        if g < run_min {
            run_min = g;
            argmin = n;
        }
    }
    Ok(MomentLilReport {
        run_max,
        run_min,
        argmax,
        argmin,
        general_vector: coeffs.is_some(),
    })
}
