//! Log-space arithmetic helpers.
//!
//! Weight products over 10^6-long windows range over scales like
//! `exp(±sqrt(n))`, far outside f64. Every product of weights in this crate
//! is therefore a sum of logs, with `ln 0 = -inf` as an explicit sentinel
//! that propagates through sums (never an error).

/// Natural log of a nonnegative weight, with `ln 0 = -inf`.
#[inline]
pub fn ln_weight(w: f64) -> f64 {
    if w == 0.0 {
        f64::NEG_INFINITY
    } else {
        w.ln()
    }
}

/// `ln(exp(a) + exp(b))` without overflow.
#[inline]
pub fn logsumexp2(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY && b == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if a > b {
        a + (b - a).exp().ln_1p()
    } else {
        b + (a - b).exp().ln_1p()
    }
}

/// Streaming log-sum-exp accumulator.
///
/// Maintains `ln Σ exp(l_i)` over a stream of log-terms without ever leaving
/// log space. Rescales lazily when a new maximum arrives, so accumulation is
/// O(1) per term and stable for terms spanning hundreds of orders of
/// magnitude in either direction.
#[derive(Clone, Debug)]
pub struct LogSumExp {
    max: f64,
    /// Σ exp(l_i - max); stays in [0, count].
    scaled: f64,
}

impl LogSumExp {
    pub fn new() -> Self {
        LogSumExp {
            max: f64::NEG_INFINITY,
            scaled: 0.0,
        }
    }

    pub fn push(&mut self, log_term: f64) {
        if log_term == f64::NEG_INFINITY {
            return;
        }
        if log_term <= self.max {
            self.scaled += (log_term - self.max).exp();
        } else {
            self.scaled = self.scaled * (self.max - log_term).exp() + 1.0;
            self.max = log_term;
        }
    }

    /// Current value of `ln Σ exp(l_i)`; `-inf` when empty.
    pub fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled.ln()
        }
    }

    /// Largest log-term seen so far.
    pub fn max_term(&self) -> f64 {
        self.max
    }
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self::new()
    }
}

/// Normalized binomial kernel `C(n,i)/2^n`, `i = 0..=n`, by the stable
/// recurrence `c_0 = 2^-n`, `c_{i+1} = c_i (n-i)/(i+1)`.
///
/// Raw binomials overflow past n = 1029; the normalized recurrence never
/// leaves [0, 1] on the way up for the n used here (ratios are applied to an
/// already-normalized start). The entries sum to 1 up to roundoff.
pub fn normalized_binomial(n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n + 1];
    // 2^-n underflows beyond n ~ 1074; track the start in log space and
    // exponentiate per entry instead when n is large.
    if n < 900 {
        let mut cur = 0.5f64.powi(n as i32);
        for (i, slot) in c.iter_mut().enumerate() {
            *slot = cur;
            cur *= (n - i) as f64 / (i + 1) as f64;
        }
    } else {
        let ln2 = std::f64::consts::LN_2;
        let mut ln_cur = -(n as f64) * ln2;
        for (i, slot) in c.iter_mut().enumerate() {
            *slot = ln_cur.exp();
            ln_cur += ((n - i) as f64).ln() - ((i + 1) as f64).ln();
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logsumexp_matches_naive_in_range() {
        let a = 0.5f64;
        let b = 2.0f64;
        let expected = (a.exp() + b.exp()).ln();
        assert!((logsumexp2(a, b) - expected).abs() < 1e-15);
    }

    #[test]
    fn logsumexp_survives_huge_terms() {
        let v = logsumexp2(1234.0, 1232.0);
        // ln(e^1234 + e^1232) = 1232 + ln(e^2 + 1)
        let expected = 1232.0 + (2f64.exp() + 1.0).ln();
        assert!((v - expected).abs() < 1e-12);
        assert_eq!(logsumexp2(f64::NEG_INFINITY, f64::NEG_INFINITY), f64::NEG_INFINITY);
    }

    #[test]
    fn streaming_accumulator_matches_pairwise() {
        let terms = [-700.0, 3.0, 2.9, -1.0, 750.0, 749.5, 0.0];
        let mut acc = LogSumExp::new();
        let mut folded = f64::NEG_INFINITY;
        for &t in &terms {
            acc.push(t);
            folded = logsumexp2(folded, t);
        }
        assert!((acc.value() - folded).abs() < 1e-12);
        assert_eq!(acc.max_term(), 750.0);
    }

    #[test]
    fn binomial_kernel_sums_to_one() {
        for &n in &[0usize, 1, 2, 7, 30, 256, 1024, 2048] {
            let c = normalized_binomial(n);
            let sum: f64 = c.iter().sum();
            assert!((sum - 1.0).abs() < 1e-12, "n={n} sum={sum}");
        }
        // Spot values: C(4,2)/16 = 6/16.
        let c4 = normalized_binomial(4);
        assert!((c4[2] - 0.375).abs() < 1e-15);
    }
}
