//! Weight distributions and their exact statistics.
//!
//! Only laws with closed-form moments are supported, because every verdict
//! downstream (set containments, membership thresholds, dynamics tables)
//! consumes the essential range and the log-moments analytically. The four
//! radii attached to a law are
//!
//! ```text
//! r  = min essran X      (lower edge of the essential spectrum)
//! r0 = exp(E ln X)       (geometric mean; 0 when P(X = 0) > 0)
//! r_p = (E X^p)^(1/p)    (moment norm, p >= 1)
//! R  = max essran X      (operator norm)
//! ```
//!
//! and satisfy `r <= r0 <= r_p <= R`, with all four equal exactly in the
//! degenerate (single-atom) case.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const PROB_SUM_TOL: f64 = 1e-12;

/// A supported weight distribution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum WeightLaw {
    /// Point mass at `c >= 0`.
    Degenerate { c: f64 },
    /// `P(X = a) = p`, `P(X = b) = 1 - p`.
    TwoPoint { a: f64, b: f64, p: f64 },
    /// Uniform on `[lo, hi]`.
    UniformInterval { lo: f64, hi: f64 },
    /// Finitely many atoms with matching probabilities.
    FiniteDiscrete { atoms: Vec<f64>, probs: Vec<f64> },
}

/// Essential range of a law: either a finite atom list or a closed interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum EssentialRange {
    Atoms(Vec<f64>),
    Interval(f64, f64),
}

impl EssentialRange {
    pub fn min(&self) -> f64 {
        match self {
            EssentialRange::Atoms(a) => a[0],
            EssentialRange::Interval(lo, _) => *lo,
        }
    }

    pub fn max(&self) -> f64 {
        match self {
            EssentialRange::Atoms(a) => *a.last().unwrap(),
            EssentialRange::Interval(_, hi) => *hi,
        }
    }

    /// Whether `x` lies in the essential range, up to `tol`.
    pub fn contains(&self, x: f64, tol: f64) -> bool {
        match self {
            EssentialRange::Atoms(a) => a.iter().any(|&v| (v - x).abs() <= tol),
            EssentialRange::Interval(lo, hi) => x >= lo - tol && x <= hi + tol,
        }
    }

    /// Whether the closed band `[m1, m2]` is contained in the range.
    pub fn contains_band(&self, m1: f64, m2: f64, tol: f64) -> bool {
        match self {
            EssentialRange::Atoms(a) => {
                m2 - m1 <= 2.0 * tol && a.iter().any(|&v| (v - 0.5 * (m1 + m2)).abs() <= tol)
            }
            EssentialRange::Interval(lo, hi) => m1 >= lo - tol && m2 <= hi + tol,
        }
    }

    pub fn is_single_point(&self) -> bool {
        match self {
            EssentialRange::Atoms(a) => a.len() == 1,
            EssentialRange::Interval(lo, hi) => lo == hi,
        }
    }

    /// Whether 0 is an isolated point of the range (as opposed to absent or
    /// an accumulation point).
    pub fn zero_is_isolated(&self) -> bool {
        match self {
            EssentialRange::Atoms(a) => a[0] == 0.0,
            EssentialRange::Interval(lo, hi) => *lo == 0.0 && *hi == 0.0,
        }
    }
}

impl WeightLaw {
    /// Validate the type invariants: finite nonnegative atoms/endpoints,
    /// probabilities in (0, 1] summing to 1.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::invalid(m));
        match self {
            WeightLaw::Degenerate { c } => {
                if !c.is_finite() || *c < 0.0 {
                    return bad(format!("degenerate atom must be finite and >= 0, got {c}"));
                }
            }
            WeightLaw::TwoPoint { a, b, p } => {
                if !a.is_finite() || !b.is_finite() || *a < 0.0 || *b < 0.0 {
                    return bad(format!("two-point atoms must be finite and >= 0, got {a}, {b}"));
                }
                if a == b {
                    return bad("two-point atoms must be distinct (use degenerate)".into());
                }
                if !(*p > 0.0 && *p < 1.0) {
                    return bad(format!("two-point probability must lie in (0,1), got {p}"));
                }
            }
            WeightLaw::UniformInterval { lo, hi } => {
                if !lo.is_finite() || !hi.is_finite() || *lo < 0.0 || hi <= lo {
                    return bad(format!("uniform interval needs 0 <= lo < hi, got [{lo}, {hi}]"));
                }
            }
            WeightLaw::FiniteDiscrete { atoms, probs } => {
                if atoms.is_empty() || atoms.len() != probs.len() {
                    return bad("discrete law needs matching nonempty atoms/probs".into());
                }
                for w in atoms.windows(2) {
                    if w[1] <= w[0] {
                        return bad("discrete atoms must be strictly increasing".into());
                    }
                }
                if atoms[0] < 0.0 || !atoms.iter().all(|a| a.is_finite()) {
                    return bad("discrete atoms must be finite and >= 0".into());
                }
                if !probs.iter().all(|&p| p > 0.0 && p <= 1.0) {
                    return bad("discrete probabilities must lie in (0,1]".into());
                }
                let s: f64 = probs.iter().sum();
                if (s - 1.0).abs() > PROB_SUM_TOL {
                    return bad(format!("discrete probabilities sum to {s}, expected 1"));
                }
            }
        }
        Ok(())
    }

    /// Atom/probability pairs for discrete laws, `None` for intervals.
    pub fn atoms(&self) -> Option<Vec<(f64, f64)>> {
        match self {
            WeightLaw::Degenerate { c } => Some(vec![(*c, 1.0)]),
            WeightLaw::TwoPoint { a, b, p } => {
                let mut v = vec![(*a, *p), (*b, 1.0 - *p)];
                v.sort_by(|x, y| x.0.total_cmp(&y.0));
                Some(v)
            }
            WeightLaw::FiniteDiscrete { atoms, probs } => {
                Some(atoms.iter().copied().zip(probs.iter().copied()).collect())
            }
            WeightLaw::UniformInterval { .. } => None,
        }
    }

    pub fn essential_range(&self) -> EssentialRange {
        match self {
            WeightLaw::UniformInterval { lo, hi } => EssentialRange::Interval(*lo, *hi),
            _ => EssentialRange::Atoms(self.atoms().unwrap().iter().map(|&(a, _)| a).collect()),
        }
    }

    /// Probability mass at 0. Interval laws carry none even when lo = 0.
    pub fn p_zero(&self) -> f64 {
        match self.atoms() {
            Some(atoms) => atoms.iter().filter(|&&(a, _)| a == 0.0).map(|&(_, p)| p).sum(),
            None => 0.0,
        }
    }

    /// `E X^p` in closed form (p > 0).
    pub fn moment(&self, p: f64) -> f64 {
        match self {
            WeightLaw::UniformInterval { lo, hi } => {
                // ∫ x^p dx / (hi - lo) = (hi^{p+1} - lo^{p+1}) / ((p+1)(hi - lo))
                (hi.powf(p + 1.0) - lo.powf(p + 1.0)) / ((p + 1.0) * (hi - lo))
            }
            _ => self
                .atoms()
                .unwrap()
                .iter()
                .map(|&(a, pr)| pr * a.powf(p))
                .sum(),
        }
    }

    /// `E ln X`, with `-inf` when the law charges 0.
    pub fn mean_log(&self) -> f64 {
        match self {
            WeightLaw::UniformInterval { lo, hi } => {
                // ∫ ln x dx = x ln x - x; the lo = 0 endpoint contributes 0.
                let f = |x: f64| if x == 0.0 { 0.0 } else { x * x.ln() - x };
                (f(*hi) - f(*lo)) / (hi - lo)
            }
            _ => self
                .atoms()
                .unwrap()
                .iter()
                .map(|&(a, pr)| {
                    if a == 0.0 {
                        f64::NEG_INFINITY
                    } else {
                        pr * a.ln()
                    }
                })
                .sum(),
        }
    }

    /// `E (ln X^2)^2 = 4 E (ln X)^2`; `+inf` when the law charges 0.
    pub fn mean_log_sq_squared(&self) -> f64 {
        match self {
            WeightLaw::UniformInterval { lo, hi } => {
                // ∫ (ln x)^2 dx = x((ln x)^2 - 2 ln x + 2), -> 0 as x -> 0.
                let f = |x: f64| {
                    if x == 0.0 {
                        0.0
                    } else {
                        let l = x.ln();
                        x * (l * l - 2.0 * l + 2.0)
                    }
                };
                4.0 * (f(*hi) - f(*lo)) / (hi - lo)
            }
            _ => self
                .atoms()
                .unwrap()
                .iter()
                .map(|&(a, pr)| {
                    if a == 0.0 {
                        f64::INFINITY
                    } else {
                        let l = 2.0 * a.ln();
                        pr * l * l
                    }
                })
                .sum(),
        }
    }
}

/// Closed-form statistics of a weight law.
#[derive(Clone, Debug, Serialize)]
pub struct LawStats {
    pub law: WeightLaw,
    /// `min essran X`.
    pub r: f64,
    /// `max essran X`.
    pub big_r: f64,
    /// `exp(E ln X)`, 0 when the law charges 0.
    pub r0: f64,
    /// `E ln X`; `-inf` sentinel when the law charges 0.
    pub mean_log: f64,
    /// `E (ln X^2)^2`, populated only when `E ln X = 0` (within 1e-12).
    pub sigma2: Option<f64>,
    /// Probability mass at 0.
    pub p_zero: f64,
    pub ess_range: EssentialRange,
    pub degenerate: bool,
}

impl LawStats {
    /// `‖X‖_p = (E X^p)^{1/p}` for `p >= 1`.
    pub fn rp(&self, p: f64) -> f64 {
        self.law.moment(p).powf(1.0 / p)
    }

    /// Whether `E ln X = 0` and `sigma2` is finite and positive, the
    /// hypotheses of every iterated-logarithm statistic here.
    pub fn lil_normalized(&self) -> bool {
        matches!(self.sigma2, Some(s) if s > 0.0)
    }
}

/// Compute all closed-form statistics of a law. No sampling is involved.
pub fn law_stats(law: &WeightLaw) -> Result<LawStats> {
    law.validate()?;
    let ess_range = law.essential_range();
    let p_zero = law.p_zero();
    let mean_log = law.mean_log();
    let r0 = if p_zero > 0.0 { 0.0 } else { mean_log.exp() };
    let sigma2 = if p_zero == 0.0 && mean_log.abs() <= 1e-12 {
        Some(law.mean_log_sq_squared())
    } else {
        None
    };
    Ok(LawStats {
        r: ess_range.min(),
        big_r: ess_range.max(),
        r0,
        mean_log,
        sigma2,
        p_zero,
        degenerate: ess_range.is_single_point(),
        ess_range,
        law: law.clone(),
    })
}

/// Parse the law mini-grammar:
///
/// ```text
/// degenerate:c=1
/// two_point:a=2.718281828,b=0.367879441,p=0.5
/// uniform:lo=0,hi=1
/// discrete:atoms=0|1|2;probs=0.333333|0.333333|0.333334
/// ```
pub fn parse_law(text: &str) -> Result<WeightLaw> {
    let text = text.trim();
    let (kind, rest) = match text.split_once(':') {
        Some((k, r)) => (k.trim(), r.trim()),
        None => (text, ""),
    };
    let law = match kind {
        "degenerate" => WeightLaw::Degenerate {
            c: get_param(rest, "c")?,
        },
        "two_point" => WeightLaw::TwoPoint {
            a: get_param(rest, "a")?,
            b: get_param(rest, "b")?,
            p: get_param(rest, "p")?,
        },
        "uniform" => WeightLaw::UniformInterval {
            lo: get_param(rest, "lo")?,
            hi: get_param(rest, "hi")?,
        },
        "discrete" => {
            let mut atoms = None;
            let mut probs = None;
            for part in rest.split(';') {
                let (k, v) = part
                    .split_once('=')
                    .ok_or_else(|| Error::parse(format!("expected key=value in '{part}'")))?;
                let list = v
                    .split('|')
                    .map(|s| parse_f64(s.trim()))
                    .collect::<Result<Vec<f64>>>()?;
                match k.trim() {
                    "atoms" => atoms = Some(list),
                    "probs" => probs = Some(list),
                    other => return Err(Error::parse(format!("unknown discrete key '{other}'"))),
                }
            }
            WeightLaw::FiniteDiscrete {
                atoms: atoms.ok_or_else(|| Error::parse("discrete law missing atoms"))?,
                probs: probs.ok_or_else(|| Error::parse("discrete law missing probs"))?,
            }
        }
        other => {
            return Err(Error::parse(format!(
                "unknown law kind '{other}' (expected degenerate, two_point, uniform, discrete)"
            )))
        }
    };
    law.validate()?;
    Ok(law)
}

fn parse_f64(s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| Error::parse(format!("expected a number, got '{s}'")))
}

fn get_param(rest: &str, key: &str) -> Result<f64> {
    for part in rest.split(',') {
        if let Some((k, v)) = part.split_once('=') {
            if k.trim() == key {
                return parse_f64(v.trim());
            }
        }
    }
    Err(Error::parse(format!("missing parameter '{key}' in '{rest}'")))
}

/// Render a law back into grammar form (17 significant digits).
pub fn law_to_string(law: &WeightLaw) -> String {
    match law {
        WeightLaw::Degenerate { c } => format!("degenerate:c={c:.16e}"),
        WeightLaw::TwoPoint { a, b, p } => format!("two_point:a={a:.16e},b={b:.16e},p={p:.16e}"),
        WeightLaw::UniformInterval { lo, hi } => format!("uniform:lo={lo:.16e},hi={hi:.16e}"),
        WeightLaw::FiniteDiscrete { atoms, probs } => {
            let fmt = |v: &[f64]| {
                v.iter()
                    .map(|x| format!("{x:.16e}"))
                    .collect::<Vec<_>>()
                    .join("|")
            };
            format!("discrete:atoms={};probs={}", fmt(atoms), fmt(probs))
        }
    }
}

/// The standard two-point test law `P(X = e) = P(X = 1/e) = 1/2`: normalized
/// (`E ln X = 0`) with `sigma^2 = E (ln X^2)^2 = 4`.
pub fn two_point_e() -> WeightLaw {
    WeightLaw::TwoPoint {
        a: std::f64::consts::E,
        b: 1.0 / std::f64::consts::E,
        p: 0.5,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stats(law: WeightLaw) -> LawStats {
        law_stats(&law).unwrap()
    }

    #[test]
    fn degenerate_all_radii_equal() {
        let s = stats(WeightLaw::Degenerate { c: 1.0 });
        assert_eq!((s.r, s.r0, s.big_r), (1.0, 1.0, 1.0));
        for p in [1.0, 2.0, 4.0] {
            assert!((s.rp(p) - 1.0).abs() < 1e-15);
        }
        assert!(s.degenerate);
        assert_eq!(s.sigma2, Some(0.0));
    }

    #[test]
    fn two_point_e_exact_statistics() {
        // E X = cosh(1), E ln X = 0, (ln X^2)^2 = 4 identically.
        let s = stats(two_point_e());
        assert!((s.r - (-1f64).exp()).abs() < 1e-15);
        assert!((s.big_r - 1f64.exp()).abs() < 1e-15);
        assert!((s.r0 - 1.0).abs() < 1e-15);
        assert!((s.rp(1.0) - 1f64.cosh()).abs() < 1e-15);
        assert!((s.rp(1.0) - 1.5430806348152437).abs() < 1e-12);
        assert_eq!(s.sigma2, Some(4.0));
        assert_eq!(s.p_zero, 0.0);
    }

    #[test]
    fn uniform_unit_interval_statistics() {
        // ∫_0^1 ln x dx = -1, so r0 = 1/e; E X = 1/2.
        let s = stats(WeightLaw::UniformInterval { lo: 0.0, hi: 1.0 });
        assert_eq!(s.r, 0.0);
        assert_eq!(s.big_r, 1.0);
        assert!((s.r0 - (-1f64).exp()).abs() < 1e-15);
        assert!((s.rp(1.0) - 0.5).abs() < 1e-15);
        assert!((s.mean_log + 1.0).abs() < 1e-15);
        assert_eq!(s.p_zero, 0.0);
        assert!(s.sigma2.is_none());
    }

    #[test]
    fn zero_atom_forces_sentinels() {
        let s = stats(WeightLaw::FiniteDiscrete {
            atoms: vec![0.0, 1.0, 2.0],
            probs: vec![1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
        });
        assert!((s.p_zero - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(s.r0, 0.0);
        assert_eq!(s.mean_log, f64::NEG_INFINITY);
        assert!(s.sigma2.is_none());
    }

    #[test]
    fn radii_chain_for_catalog() {
        let laws = vec![
            WeightLaw::Degenerate { c: 0.7 },
            WeightLaw::Degenerate { c: 2.0 },
            two_point_e(),
            WeightLaw::TwoPoint { a: 2.0, b: 0.5, p: 0.75 },
            WeightLaw::UniformInterval { lo: 0.0, hi: 1.0 },
            WeightLaw::UniformInterval { lo: 0.5, hi: 2.5 },
            WeightLaw::FiniteDiscrete {
                atoms: vec![0.0, 1.0, 2.0],
                probs: vec![0.25, 0.5, 0.25],
            },
            WeightLaw::FiniteDiscrete {
                atoms: vec![1.0, 2.0],
                probs: vec![0.5, 0.5],
            },
        ];
        for law in laws {
            let s = stats(law.clone());
            let mut prev = s.r;
            for p in [1.0, 2.0, 4.0] {
                let rp = s.rp(p);
                assert!(
                    prev <= rp + 1e-12,
                    "chain violated for {law:?}: {prev} > {rp} at p={p}"
                );
                prev = rp;
            }
            assert!(prev <= s.big_r + 1e-12);
            assert!(s.r <= s.r0 + 1e-12);
            assert!(s.r0 <= s.rp(1.0) + 1e-12);
            // All equal iff degenerate.
            let all_equal = (s.big_r - s.r).abs() < 1e-12;
            assert_eq!(all_equal, s.degenerate);
        }
    }

    #[test]
    fn grammar_round_trip() {
        let texts = [
            "degenerate:c=1",
            "two_point:a=2.718281828,b=0.367879441,p=0.5",
            "uniform:lo=0,hi=1",
            "discrete:atoms=0|1|2;probs=0.333333|0.333333|0.333334",
        ];
        for t in texts {
            let law = parse_law(t).unwrap();
            let round = parse_law(&law_to_string(&law)).unwrap();
            assert_eq!(law, round);
        }
    }

    #[test]
    fn grammar_rejects_garbage() {
        assert!(parse_law("gaussian:mu=0").is_err());
        assert!(parse_law("two_point:a=1,b=1,p=0.5").is_err());
        assert!(parse_law("uniform:lo=1,hi=0.5").is_err());
        assert!(parse_law("discrete:atoms=1|2;probs=0.9|0.2").is_err());
        assert!(parse_law("degenerate:c=-1").is_err());
    }
}
