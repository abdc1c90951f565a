//! Subcommand dispatch and manifest assembly.

use std::collections::HashMap;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use num_complex::Complex64;
use serde_json::Value;

use rwslab_core::hardy::{self, CoefficientSequence};
use rwslab_core::law::{law_stats, parse_law, WeightLaw};
use rwslab_core::sample::{sample_weights, stream_for, WeightSample};
use rwslab_core::shift::FreePolynomial;
use rwslab_core::vonneumann::{self, Direction, ModulusSet};
use rwslab_core::{classify, dynamics, spectral, Error};

use crate::jsonfmt::{float, floats, int, obj};
use crate::{Cli, Cmd};

type Result<T> = std::result::Result<T, Error>;

struct Ctx {
    cfg: HashMap<String, String>,
    seed: u64,
    out: Option<PathBuf>,
}

impl Ctx {
    /// Flag value, else config value, else default.
    fn get<T: FromStr + Clone>(&self, flag: &Option<T>, key: &str, default: T) -> Result<T> {
        if let Some(v) = flag {
            return Ok(v.clone());
        }
        match self.cfg.get(key) {
            Some(text) => text
                .parse::<T>()
                .map_err(|_| Error::parse(format!("bad config value for '{key}': '{text}'"))),
            None => Ok(default),
        }
    }

    fn get_req<T: FromStr + Clone>(&self, flag: &Option<T>, key: &str) -> Result<T> {
        if let Some(v) = flag {
            return Ok(v.clone());
        }
        match self.cfg.get(key) {
            Some(text) => text
                .parse::<T>()
                .map_err(|_| Error::parse(format!("bad config value for '{key}': '{text}'"))),
            None => Err(Error::invalid(format!("missing required option --{key}"))),
        }
    }

    fn law(&self, flag: &Option<String>) -> Result<WeightLaw> {
        let text: String = self.get_req(flag, "law")?;
        parse_law(&text)
    }

    fn sample(
        &self,
        law: &WeightLaw,
        length: usize,
        label: &str,
        stream: u64,
    ) -> Result<WeightSample> {
        sample_weights(law, length, self.seed, stream_for(label, stream))
    }
}

fn parse_complex(text: &str) -> Result<Complex64> {
    let (re, im) = match text.split_once(',') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (text.trim(), "0"),
    };
    Ok(Complex64::new(
        re.parse()
            .map_err(|_| Error::parse(format!("bad real part '{re}'")))?,
        im.parse()
            .map_err(|_| Error::parse(format!("bad imaginary part '{im}'")))?,
    ))
}

fn parse_f64_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::parse(format!("bad number '{s}'")))
        })
        .collect()
}

fn parse_usize_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::parse(format!("bad integer '{s}'")))
        })
        .collect()
}

/// Emit the run manifest; `results` is the determinism-critical block.
fn emit(
    ctx: &Ctx,
    command: &str,
    law: Option<&WeightLaw>,
    parameters: Value,
    results: Value,
    started: Instant,
    to_out: bool,
) -> Result<()> {
    let manifest = obj(vec![
        ("toolVersion", Value::String(env!("CARGO_PKG_VERSION").into())),
        ("command", Value::String(command.into())),
        (
            "law",
            law.map_or(Value::Null, |l| {
                Value::String(rwslab_core::law::law_to_string(l))
            }),
        ),
        ("seed", int(ctx.seed)),
        ("parameters", parameters),
        (
            "startedAt",
            int(SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_millis() as u64)
                .unwrap_or(0)),
        ),
        ("durationMs", int(started.elapsed().as_millis() as u64)),
        ("results", results),
    ]);
    let text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| Error::invalid(format!("manifest serialization failed: {e}")))?;
    match (&ctx.out, to_out) {
        (Some(path), true) => std::fs::write(path, text + "\n")
            .map_err(|e| Error::invalid(format!("cannot write '{}': {e}", path.display()))),
        _ => {
            println!("{text}");
            Ok(())
        }
    }
}

fn law_stats_value(stats: &rwslab_core::LawStats) -> Value {
    let ess = match &stats.ess_range {
        rwslab_core::EssentialRange::Atoms(a) => obj(vec![
            ("kind", Value::String("atoms".into())),
            ("atoms", floats(a)),
        ]),
        rwslab_core::EssentialRange::Interval(lo, hi) => obj(vec![
            ("kind", Value::String("interval".into())),
            ("lo", float(*lo)),
            ("hi", float(*hi)),
        ]),
    };
    obj(vec![
        ("r", float(stats.r)),
        ("R", float(stats.big_r)),
        ("r0", float(stats.r0)),
        ("meanLog", float(stats.mean_log)),
        (
            "sigma2",
            stats.sigma2.map_or(Value::Null, float),
        ),
        ("pZero", float(stats.p_zero)),
        ("degenerate", Value::Bool(stats.degenerate)),
        ("essRange", ess),
    ])
}

fn verdict_str(v: vonneumann::Verdict) -> Value {
    Value::String(
        match v {
            vonneumann::Verdict::AlmostSurelyYes => "almostSurelyYes",
            vonneumann::Verdict::AlmostSurelyNo => "almostSurelyNo",
            vonneumann::Verdict::UndecidedAtDepth => "undecidedAtDepth",
        }
        .into(),
    )
}

fn dyn_str(v: dynamics::DynVerdict) -> Value {
    Value::String(
        match v {
            dynamics::DynVerdict::AlmostSurelyYes => "almostSurelyYes",
            dynamics::DynVerdict::AlmostSurelyNo => "almostSurelyNo",
            dynamics::DynVerdict::HypothesisNotMet => "hypothesisNotMet",
        }
        .into(),
    )
}

fn sequence(ctx: &Ctx, flag: &Option<String>, law: &WeightLaw) -> Result<CoefficientSequence> {
    let text: String = ctx.get_req(flag, "seq")?;
    let default_sigma = law_stats(law)?.sigma2;
    hardy::parse_sequence(&text, default_sigma)
}

pub fn run(cli: Cli, cfg: HashMap<String, String>) -> Result<()> {
    let started = Instant::now();
    let seed = cli
        .seed
        .or_else(|| cfg.get("seed").and_then(|s| s.parse().ok()))
        .unwrap_or(0);
    let ctx = Ctx {
        cfg,
        seed,
        out: cli.out.clone(),
    };
    match cli.cmd {
        Cmd::Stats { law } => {
            let law = ctx.law(&law)?;
            let stats = law_stats(&law)?;
            let mut results = law_stats_value(&stats);
            if let Value::Object(m) = &mut results {
                m.insert("rp1".into(), float(stats.rp(1.0)));
                m.insert("rp2".into(), float(stats.rp(2.0)));
                m.insert("rp4".into(), float(stats.rp(4.0)));
            }
            emit(&ctx, "stats", Some(&law), obj(vec![]), results, started, true)
        }
        Cmd::Radii { law, p } => {
            let law = ctx.law(&law)?;
            let stats = law_stats(&law)?;
            let ps = parse_f64_list(&ctx.get(&p, "p", "1,2,4".to_string())?)?;
            let rps: Vec<f64> = ps.iter().map(|&q| stats.rp(q)).collect();
            let mut chain = vec![stats.r, stats.r0];
            chain.extend(&rps);
            chain.push(stats.big_r);
            let ok = chain.windows(2).all(|w| w[0] <= w[1] + 1e-12);
            let results = obj(vec![
                ("r", float(stats.r)),
                ("r0", float(stats.r0)),
                ("p", floats(&ps)),
                ("rp", floats(&rps)),
                ("R", float(stats.big_r)),
                ("chainHolds", Value::Bool(ok)),
            ]);
            let params = obj(vec![("p", floats(&ps))]);
            emit(&ctx, "radii", Some(&law), params, results, started, true)
        }
        Cmd::Sample { law, length, stream } => {
            let law = ctx.law(&law)?;
            let length = ctx.get(&length, "length", 16usize)?;
            let stream = ctx.get(&stream, "stream", 0u64)?;
            let s = ctx.sample(&law, length, "sample", stream)?;
            let results = obj(vec![
                ("length", int(length as u64)),
                ("stream", int(stream)),
                ("weights", floats(&s.weights)),
            ]);
            let params = obj(vec![
                ("length", int(length as u64)),
                ("stream", int(stream)),
            ]);
            emit(&ctx, "sample", Some(&law), params, results, started, true)
        }
        Cmd::Pseudospectrum { law, n, grid, stream } => {
            let law = ctx.law(&law)?;
            let n = ctx.get(&n, "n", 500usize)?;
            let side = ctx.get(&grid, "grid", 201usize)?;
            let stream = ctx.get(&stream, "stream", 0u64)?;
            let stats = law_stats(&law)?;
            let s = ctx.sample(&law, n.saturating_sub(1).max(1), "pseudospectrum", stream)?;
            let shift = rwslab_core::shift::truncate(&s, n)?;
            let grid_pts = spectral::default_grid(stats.big_r, side);
            let ps = spectral::smin_grid(&shift, &grid_pts)?;
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for p in &ps.points {
                lo = lo.min(p.smin);
                hi = hi.max(p.smin);
            }
            let params = obj(vec![
                ("N", int(n as u64)),
                ("grid", int(side as u64)),
                ("stream", int(stream)),
            ]);
            match &ctx.out {
                Some(path) => {
                    let mut body = String::with_capacity(ps.points.len() * 64);
                    body.push_str("re,im,smin\n");
                    for p in &ps.points {
                        body.push_str(&format!(
                            "{:.16e},{:.16e},{:.16e}\n",
                            p.re, p.im, p.smin
                        ));
                    }
                    std::fs::write(path, body).map_err(|e| {
                        Error::invalid(format!("cannot write '{}': {e}", path.display()))
                    })?;
                    let results = obj(vec![
                        ("rows", int(ps.points.len() as u64)),
                        ("sminMin", float(lo)),
                        ("sminMax", float(hi)),
                        ("csv", Value::String(path.display().to_string())),
                    ]);
                    emit(&ctx, "pseudospectrum", Some(&law), params, results, started, false)
                }
                None => {
                    let rows: Vec<Value> = ps
                        .points
                        .iter()
                        .map(|p| Value::Array(vec![float(p.re), float(p.im), float(p.smin)]))
                        .collect();
                    let results = obj(vec![
                        ("rows", int(ps.points.len() as u64)),
                        ("sminMin", float(lo)),
                        ("sminMax", float(hi)),
                        ("points", Value::Array(rows)),
                    ]);
                    emit(&ctx, "pseudospectrum", Some(&law), params, results, started, false)
                }
            }
        }
        Cmd::Pointspec { law, lambda, n, eta, stream } => {
            let law = ctx.law(&law)?;
            let lambda = parse_complex(&ctx.get_req(&lambda, "lambda")?)?;
            let n = ctx.get(&n, "n", 2000usize)?;
            let eta = ctx.get(&eta, "eta", 1e-6f64)?;
            let stream = ctx.get(&stream, "stream", 0u64)?;
            let s = ctx.sample(&law, n, "pointspec", stream)?;
            let test = spectral::adjoint_point_test(&s, lambda, n, eta)?;
            let stats = law_stats(&law)?;
            let kernel = if lambda.norm() < stats.r0 {
                let kv = spectral::adjoint_kernel_vector(&s, lambda, n)?;
                obj(vec![
                    ("logNorm", float(kv.log_norm)),
                    ("logResidual", float(kv.log_residual)),
                ])
            } else {
                Value::Null
            };
            let checkpoints: Vec<Value> = test
                .checkpoints
                .iter()
                .map(|&(k, v)| Value::Array(vec![int(k as u64), float(v)]))
                .collect();
            let results = obj(vec![
                (
                    "verdict",
                    Value::String(
                        match test.verdict {
                            spectral::SeriesVerdict::Inside => "inside",
                            spectral::SeriesVerdict::Outside => "outside",
                            spectral::SeriesVerdict::Critical => "critical",
                        }
                        .into(),
                    ),
                ),
                ("partialSums", Value::Array(checkpoints)),
                ("maxTermLog", float(test.max_term_log)),
                ("maxTermN", int(test.max_term_n as u64)),
                ("kernelVector", kernel),
            ]);
            let params = obj(vec![
                ("lambdaRe", float(lambda.re)),
                ("lambdaIm", float(lambda.im)),
                ("N", int(n as u64)),
                ("eta", float(eta)),
                ("stream", int(stream)),
            ]);
            emit(&ctx, "pointspec", Some(&law), params, results, started, true)
        }
        Cmd::Numrange { law, n, angles, stream } => {
            let law = ctx.law(&law)?;
            let n = ctx.get(&n, "n", 2000usize)?;
            let angles = ctx.get(&angles, "angles", 16usize)?;
            let stream = ctx.get(&stream, "stream", 0u64)?;
            let s = ctx.sample(&law, n.saturating_sub(1).max(1), "numrange", stream)?;
            let shift = rwslab_core::shift::truncate(&s, n)?;
            let nr = spectral::numerical_range(&shift, angles)?;
            let results = obj(vec![
                ("radius", float(nr.radius)),
                ("theta", floats(&nr.theta)),
                ("support", floats(&nr.support)),
                ("maxWeight", float(shift.max_weight())),
            ]);
            let params = obj(vec![
                ("N", int(n as u64)),
                ("angles", int(angles as u64)),
                ("stream", int(stream)),
            ]);
            emit(&ctx, "numrange", Some(&law), params, results, started, true)
        }
        Cmd::Hardy {
            law,
            seq,
            p,
            mc_trials,
            mc_n,
            sandwich_p,
            sandwich_trials,
            sandwich_n,
        } => {
            let law = ctx.law(&law)?;
            let seq = sequence(&ctx, &seq, &law)?;
            let p = ctx.get(&p, "p", 1.0f64)?;
            let verdict = hardy::classify_membership(&seq, &law, p)?;
            let mut entries = vec![
                (
                    "verdict",
                    Value::String(
                        match verdict.verdict {
                            hardy::Membership::Member => "member",
                            hardy::Membership::NonMember => "nonMember",
                            hardy::Membership::Indeterminate => "indeterminate",
                        }
                        .into(),
                    ),
                ),
                ("reason", Value::String(format!("{:?}", verdict.reason))),
                ("radiusOfF", float(verdict.radius_of_f)),
                (
                    "sizeClass",
                    Value::String(
                        match verdict.size_class {
                            hardy::SizeClass::Small => "small",
                            hardy::SizeClass::Large => "large",
                            hardy::SizeClass::Critical => "critical",
                        }
                        .into(),
                    ),
                ),
                ("sizeExponent", float(verdict.size_exponent)),
                (
                    "lilLimits",
                    verdict.lil_limits.map_or(Value::Null, |(sup, inf)| {
                        obj(vec![("limsup", float(sup)), ("liminf", float(inf))])
                    }),
                ),
            ];
            let mc_trials = ctx.get(&mc_trials, "mc_trials", 0u64)?;
            if mc_trials > 0 {
                let n = ctx.get(&mc_n, "mc_n", 1_000_000usize)?;
                let mc = hardy::norm_monte_carlo(&seq, &law, n, mc_trials, ctx.seed)?;
                let trials: Vec<Value> = mc
                    .trials
                    .iter()
                    .map(|t| {
                        obj(vec![
                            ("trial", int(t.trial)),
                            ("logPartialSum", float(t.log_partial_sum)),
                            ("maxTermLog", float(t.max_term_log)),
                            ("maxTermN", int(t.max_term_n as u64)),
                            ("countNonneg", int(t.count_nonneg as u64)),
                            ("tailMaxTermLog", float(t.tail_max_term_log)),
                            ("divergent", Value::Bool(t.divergent)),
                        ])
                    })
                    .collect();
                entries.push((
                    "monteCarlo",
                    obj(vec![
                        ("N", int(n as u64)),
                        ("trials", Value::Array(trials)),
                        ("divergentFraction", float(mc.divergent_fraction)),
                    ]),
                ));
            }
            let sandwich_p = ctx.get(&sandwich_p, "sandwich_p", 0.0f64)?;
            if sandwich_p > 0.0 {
                let trials = ctx.get(&sandwich_trials, "sandwich_trials", 10_000u64)?;
                let n = ctx.get(&sandwich_n, "sandwich_n", 4096usize)?;
                let rep = hardy::expectation_sandwich(&seq, &law, sandwich_p, n, trials, ctx.seed)?;
                entries.push((
                    "sandwich",
                    obj(vec![
                        ("p", float(rep.p)),
                        ("lowerBound", float(rep.lower_bound)),
                        ("upperBound", float(rep.upper_bound)),
                        (
                            "exactSecondMoment",
                            rep.exact_second_moment.map_or(Value::Null, float),
                        ),
                        ("empiricalMean", float(rep.empirical_mean)),
                        ("standardError", float(rep.standard_error)),
                        ("withinBounds", Value::Bool(rep.within_bounds)),
                    ]),
                ));
            }
            let params = obj(vec![
                ("p", float(p)),
                ("mcTrials", int(mc_trials)),
                ("sandwichP", float(sandwich_p)),
            ]);
            emit(&ctx, "hardy", Some(&law), params, obj(entries), started, true)
        }
        Cmd::Lil { law, seq, nmin, nmax } => {
            let law = ctx.law(&law)?;
            let seq = sequence(&ctx, &seq, &law)?;
            let nmin = ctx.get(&nmin, "nmin", 16u64)?;
            let nmax = ctx.get(&nmax, "nmax", 1_000_000u64)?;
            let scan = hardy::lil_statistic(&seq, &law, nmin, nmax)?;
            let results = obj(vec![
                ("runMax", float(scan.run_max)),
                ("runMin", float(scan.run_min)),
                ("argmax", int(scan.argmax)),
                ("argmin", int(scan.argmin)),
            ]);
            let params = obj(vec![("nmin", int(nmin)), ("nmax", int(nmax))]);
            emit(&ctx, "lil", Some(&law), params, results, started, true)
        }
        Cmd::Vn {
            law,
            op,
            shift,
            direction,
            smax,
            eps,
            normal,
            poly,
            random_polys,
            max_deg,
            m,
            n,
            tol,
            universal,
            stream,
        } => run_vn(
            &ctx, started, law, op, shift, direction, smax, eps, normal, poly, random_polys,
            max_deg, m, n, tol, universal, stream,
        ),
        Cmd::Nspectrum {
            law,
            shift,
            n,
            eps,
            length,
            targets,
            stream,
        } => {
            let n = ctx.get(&n, "n", 2usize)?;
            if let Some(desc) = &shift {
                let a = vonneumann::parse_shift(desc)?;
                let spec = vonneumann::n_spectrum_exact(&a, n)?;
                let tuples: Vec<Value> = spec.tuples.iter().map(|t| floats(t)).collect();
                let results = obj(vec![
                    ("n", int(n as u64)),
                    ("count", int(spec.tuples.len() as u64)),
                    ("tuples", Value::Array(tuples)),
                ]);
                let params = obj(vec![
                    ("shift", Value::String(desc.clone())),
                    ("n", int(n as u64)),
                ]);
                return emit(&ctx, "nspectrum", None, params, results, started, true);
            }
            let law = ctx.law(&law)?;
            let eps = ctx.get(&eps, "eps", 0.05f64)?;
            let length = ctx.get(&length, "length", 100_000usize)?;
            let stream = ctx.get(&stream, "stream", 0u64)?;
            let targets_text: String = ctx.get_req(&targets, "targets")?;
            let targets = parse_targets(&targets_text, n)?;
            let s = ctx.sample(&law, length, "nspectrum", stream)?;
            let cov = vonneumann::n_spectrum_empirical(&s, n, eps, &targets)?;
            let results = obj(vec![
                ("n", int(n as u64)),
                ("eps", float(eps)),
                ("covered", int(cov.covered as u64)),
                ("total", int(cov.total as u64)),
                ("fraction", float(cov.fraction)),
            ]);
            let params = obj(vec![
                ("n", int(n as u64)),
                ("eps", float(eps)),
                ("length", int(length as u64)),
                ("stream", int(stream)),
                ("targets", Value::String(targets_text)),
            ]);
            emit(&ctx, "nspectrum", Some(&law), params, results, started, true)
        }
        Cmd::Dynamics { law } => {
            let law = ctx.law(&law)?;
            let v = dynamics::classify_dynamics(&law_stats(&law)?);
            let results = obj(vec![
                ("supercyclic", dyn_str(v.supercyclic)),
                ("hypercyclic", dyn_str(v.hypercyclic)),
                ("liYorke", dyn_str(v.li_yorke)),
                ("mixing", dyn_str(v.mixing)),
                ("chaotic", dyn_str(v.chaotic)),
                ("freqHypercyclic", dyn_str(v.freq_hypercyclic)),
                ("nonDegenerate", Value::Bool(v.non_degenerate)),
                ("pZeroIsZero", Value::Bool(v.p_zero_is_zero)),
            ]);
            emit(&ctx, "dynamics", Some(&law), obj(vec![]), results, started, true)
        }
        Cmd::Orbit { law, n, stream } => {
            let law = ctx.law(&law)?;
            let n = ctx.get(&n, "n", 100_000usize)?;
            let stream = ctx.get(&stream, "stream", 0u64)?;
            let s = ctx.sample(&law, n, "orbit", stream)?;
            let o = dynamics::orbit_statistics(&s, n)?;
            let results = obj(vec![
                ("salasSup", float(o.salas_sup)),
                ("chaosSeriesHalf", float(o.chaos_series_half)),
                ("chaosSeriesFull", float(o.chaos_series_full)),
                ("c00Decay", float(o.c00_decay)),
            ]);
            let params = obj(vec![("N", int(n as u64)), ("stream", int(stream))]);
            emit(&ctx, "orbit", Some(&law), params, results, started, true)
        }
        Cmd::Aluthge {
            law,
            length,
            depths,
            k,
            stream,
            csv,
        } => {
            let law = ctx.law(&law)?;
            let depths = parse_usize_list(&ctx.get(&depths, "depths", "16,1024".to_string())?)?;
            let k = ctx.get(&k, "k", 100usize)?;
            let length = ctx.get(&length, "length", 1_000_000usize)?;
            let stream = ctx.get(&stream, "stream", 0u64)?;
            let s = ctx.sample(&law, length, "aluthge", stream)?;
            let rep = rwslab_core::aluthge::convergence_report(&s, &depths, k)?;
            if let Some(path) = &csv {
                let mut body = String::from("n,medianDev,supWeight\n");
                for d in &rep.depths {
                    body.push_str(&format!(
                        "{},{:.16e},{:.16e}\n",
                        d.n, d.median_dev, d.sup_weight
                    ));
                }
                std::fs::write(path, body).map_err(|e| {
                    Error::invalid(format!("cannot write '{}': {e}", path.display()))
                })?;
            }
            let rows: Vec<Value> = rep
                .depths
                .iter()
                .map(|d| {
                    obj(vec![
                        ("n", int(d.n as u64)),
                        ("medianDev", float(d.median_dev)),
                        ("supWeight", float(d.sup_weight)),
                        ("supIndices", int(d.sup_indices as u64)),
                    ])
                })
                .collect();
            let results = obj(vec![("r0", float(rep.r0)), ("depths", Value::Array(rows))]);
            let params = obj(vec![
                ("length", int(length as u64)),
                ("K", int(k as u64)),
                ("stream", int(stream)),
                (
                    "depths",
                    Value::Array(depths.iter().map(|&d| int(d as u64)).collect()),
                ),
            ]);
            emit(&ctx, "aluthge", Some(&law), params, results, started, true)
        }
        Cmd::Classify {
            law,
            op,
            pattern,
            tol,
            length,
            stream,
            stream_b,
            prefix_len,
            trials,
        } => {
            let law = ctx.law(&law)?;
            let op: String = ctx.get(&op, "op", "recurrence".to_string())?;
            let length = ctx.get(&length, "length", 100_000usize)?;
            let stream = ctx.get(&stream, "stream", 0u64)?;
            let tol = ctx.get(&tol, "tol", 1e-9f64)?;
            let results = match op.as_str() {
                "recurrence" => {
                    let pattern = parse_f64_list(&ctx.get_req(&pattern, "pattern")?)?;
                    let s = ctx.sample(&law, length, "classify", stream)?;
                    let rep = classify::pattern_recurrence(&s, &pattern, tol)?;
                    obj(vec![
                        ("hits", int(rep.hits.len() as u64)),
                        (
                            "firstHit",
                            rep.first_hit.map_or(Value::Null, |h| int(h as u64)),
                        ),
                        ("pattern", floats(&rep.pattern)),
                        ("tol", float(rep.tol)),
                    ])
                }
                "window-distance" => {
                    let target = parse_f64_list(&ctx.get_req(&pattern, "pattern")?)?;
                    let s = ctx.sample(&law, length, "classify", stream)?;
                    let rep = classify::window_distance_profile(&s, &target, length)?;
                    obj(vec![
                        ("distance", float(rep.distance)),
                        ("argmin", int(rep.argmin as u64)),
                    ])
                }
                "similarity" => {
                    let stream_b = ctx.get(&stream_b, "stream_b", stream + 1)?;
                    let a = ctx.sample(&law, length, "classify", stream)?;
                    let b = ctx.sample(&law, length, "classify", stream_b)?;
                    let sup = classify::similarity_walk(&a, &b, length)?;
                    obj(vec![("supLogRatio", float(sup))])
                }
                "structure" => {
                    let prefix_len = ctx.get(&prefix_len, "prefix_len", 2usize)?;
                    let trials = ctx.get(&trials, "trials", 100_000u64)?;
                    let s = ctx.sample(&law, length, "classify", stream)?;
                    let rep =
                        classify::structure_diagnostics(&s, length, prefix_len, trials, ctx.seed)?;
                    obj(vec![
                        ("selfCommDiagMax", float(rep.self_comm_diag_max)),
                        ("boundaryEntry", float(rep.boundary_entry)),
                        ("hypoPrefixProb", float(rep.hypo_prefix_prob)),
                        ("hypoPrefixCi", float(rep.hypo_prefix_ci)),
                        ("hypoPrefixLen", int(rep.hypo_prefix_len as u64)),
                    ])
                }
                other => {
                    return Err(Error::invalid(format!(
                        "unknown classify op '{other}' (recurrence, window-distance, similarity, structure)"
                    )))
                }
            };
            let params = obj(vec![
                ("op", Value::String(op)),
                ("length", int(length as u64)),
                ("stream", int(stream)),
            ]);
            emit(&ctx, "classify", Some(&law), params, results, started, true)
        }
        Cmd::Mconvex { law, m, trials } => {
            let law = ctx.law(&law)?;
            let m = ctx.get(&m, "m", 1usize)?;
            let trials = ctx.get(&trials, "trials", 1_000_000u64)?;
            let rep = classify::m_convex_check(&law, m, trials, ctx.seed)?;
            let results = obj(vec![
                ("m", int(m as u64)),
                ("estimate", float(rep.estimate)),
                ("standardError", float(rep.standard_error)),
                ("target", float(rep.target)),
                ("targetBinomial", float(rep.target_binomial)),
                ("within4Se", Value::Bool(rep.within_4_se)),
            ]);
            let params = obj(vec![("m", int(m as u64)), ("trials", int(trials))]);
            emit(&ctx, "mconvex", Some(&law), params, results, started, true)
        }
        Cmd::Momentlil {
            law,
            k,
            nmax,
            coeffs,
            stream,
        } => {
            let law = ctx.law(&law)?;
            let k = ctx.get(&k, "k", 1usize)?;
            if k == 0 {
                return Err(Error::invalid("basis index k is 1-based"));
            }
            let nmax = ctx.get(&nmax, "nmax", 1_000_000usize)?;
            let stream = ctx.get(&stream, "stream", 0u64)?;
            let coeffs = match &coeffs {
                Some(text) => Some(parse_f64_list(text)?),
                None => None,
            };
            let support = coeffs.as_ref().map_or(1, |c| c.len());
            let s = ctx.sample(&law, k - 1 + nmax + support, "momentlil", stream)?;
            let rep = classify::moment_lil(&s, k - 1, coeffs.as_deref(), nmax)?;
            let results = obj(vec![
                ("runMax", float(rep.run_max)),
                ("runMin", float(rep.run_min)),
                ("argmax", int(rep.argmax as u64)),
                ("argmin", int(rep.argmin as u64)),
                ("generalVector", Value::Bool(rep.general_vector)),
            ]);
            let params = obj(vec![
                ("k", int(k as u64)),
                ("nmax", int(nmax as u64)),
                ("stream", int(stream)),
            ]);
            emit(&ctx, "momentlil", Some(&law), params, results, started, true)
        }
    }
}

fn parse_targets(text: &str, n: usize) -> Result<Vec<Vec<f64>>> {
    if let Some(atoms) = text.strip_prefix("product:") {
        let atoms: Vec<f64> = atoms
            .split('|')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::parse(format!("bad atom '{s}'")))
            })
            .collect::<Result<_>>()?;
        let mut out = Vec::new();
        let mut idx = vec![0usize; n];
        loop {
            out.push(idx.iter().map(|&i| atoms[i]).collect());
            let mut k = n;
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < atoms.len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }
    text.split(';').map(parse_f64_list).collect()
}

#[allow(clippy::too_many_arguments)]
fn run_vn(
    ctx: &Ctx,
    started: Instant,
    law: Option<String>,
    op: Option<String>,
    shift: Option<String>,
    direction: Option<String>,
    smax: Option<usize>,
    eps: Option<f64>,
    normal: Option<String>,
    poly: Vec<String>,
    random_polys: Option<usize>,
    max_deg: Option<usize>,
    m: Option<usize>,
    n: Option<usize>,
    tol: Option<f64>,
    universal: Option<String>,
    stream: Option<u64>,
) -> Result<()> {
    let op: String = ctx.get(&op, "op", "verdict".to_string())?;
    let smax = ctx.get(&smax, "smax", 6usize)?;
    let eps = ctx.get(&eps, "eps", 0.01f64)?;
    let tol = ctx.get(&tol, "tol", 1e-3f64)?;
    let stream = ctx.get(&stream, "stream", 0u64)?;
    match op.as_str() {
        "verdict" => {
            let law = ctx.law(&law)?;
            let a = vonneumann::parse_shift(&ctx.get_req(&shift, "shift")?)?;
            let dir_text: String = ctx.get_req(&direction, "direction")?;
            let dir = match dir_text.as_str() {
                "a-under-t" => Direction::AUnderT,
                "t-under-a" => Direction::TUnderA,
                other => {
                    return Err(Error::invalid(format!(
                        "direction must be a-under-t or t-under-a, got '{other}'"
                    )))
                }
            };
            let rep = vonneumann::shift_domination_verdict(&a, &law, dir, smax, eps)?;
            let results = obj(vec![
                ("verdict", verdict_str(rep.verdict)),
                ("clause", Value::String(rep.clause)),
                (
                    "witness",
                    rep.witness.map_or(Value::Null, Value::String),
                ),
                ("checkedDepth", int(rep.checked_depth as u64)),
            ]);
            let params = obj(vec![
                ("direction", Value::String(dir_text)),
                ("smax", int(smax as u64)),
                ("eps", float(eps)),
            ]);
            emit(ctx, "vn", Some(&law), params, results, started, true)
        }
        "normal" => {
            let law = ctx.law(&law)?;
            let text: String = ctx.get_req(&normal, "normal")?;
            let spectrum = parse_modulus_set(&text)?;
            let (n_t, t_n) = vonneumann::normal_domination_verdict(&law, &spectrum)?;
            let results = obj(vec![
                ("nUnderT", verdict_str(n_t)),
                ("tUnderN", verdict_str(t_n)),
            ]);
            let params = obj(vec![("normal", Value::String(text))]);
            emit(ctx, "vn", Some(&law), params, results, started, true)
        }
        "numeric" => {
            let law = ctx.law(&law)?;
            let a = vonneumann::parse_shift(&ctx.get_req(&shift, "shift")?)?;
            let mut polys: Vec<FreePolynomial> = poly
                .iter()
                .map(|t| FreePolynomial::parse(t))
                .collect::<Result<_>>()?;
            let count = ctx.get(&random_polys, "random_polys", 0usize)?;
            let deg = ctx.get(&max_deg, "max_deg", 3usize)?;
            if count > 0 {
                polys.extend(random_free_polys(ctx.seed, count, deg));
            }
            if polys.is_empty() {
                return Err(Error::invalid("numeric check needs --poly or --random-polys"));
            }
            let m = ctx.get(&m, "m", 64usize)?;
            let n = ctx.get(&n, "n", 4096usize)?;
            let sample = ctx.sample(&law, n.saturating_sub(1).max(1), "vn-numeric", stream)?;
            let chk = vonneumann::numeric_domination_check(&a, &sample, &polys, m, n, tol)?;
            let rows: Vec<Value> = chk
                .comparisons
                .iter()
                .map(|c| {
                    obj(vec![
                        ("poly", Value::String(c.poly.clone())),
                        ("normA", float(c.norm_a)),
                        ("normT", float(c.norm_t)),
                        ("violatesAUnderT", Value::Bool(c.violates_a_under_t)),
                        ("violatesTUnderA", Value::Bool(c.violates_t_under_a)),
                    ])
                })
                .collect();
            let results = obj(vec![
                ("counterexamplesAUnderT", int(chk.counterexamples_a_under_t as u64)),
                ("counterexamplesTUnderA", int(chk.counterexamples_t_under_a as u64)),
                ("comparisons", Value::Array(rows)),
            ]);
            let params = obj(vec![
                ("M", int(m as u64)),
                ("N", int(n as u64)),
                ("tol", float(tol)),
                ("randomPolys", int(count as u64)),
                ("maxDeg", int(deg as u64)),
                ("stream", int(stream)),
            ]);
            emit(ctx, "vn", Some(&law), params, results, started, true)
        }
        "disk-algebra" => {
            let law = ctx.law(&law)?;
            let q = FreePolynomial::parse(
                poly.first()
                    .ok_or_else(|| Error::invalid("disk-algebra check needs --poly"))?,
            )?;
            let n = ctx.get(&n, "n", 10_000usize)?;
            let sample = ctx.sample(&law, n.saturating_sub(1).max(1), "vn-disk", stream)?;
            let rep = vonneumann::disk_algebra_check(&sample, &q, n)?;
            let results = obj(vec![
                ("truncNorm", float(rep.trunc_norm)),
                ("supNorm", float(rep.sup_norm)),
                ("gap", float(rep.gap)),
            ]);
            let params = obj(vec![("N", int(n as u64)), ("stream", int(stream))]);
            emit(ctx, "vn", Some(&law), params, results, started, true)
        }
        "hereditary" => {
            let law = ctx.law(&law)?;
            let hp = FreePolynomial::parse(
                poly.first()
                    .ok_or_else(|| Error::invalid("hereditary check needs --poly"))?,
            )?;
            let n = ctx.get(&n, "n", 1000usize)?;
            let sample = ctx.sample(&law, n.saturating_sub(1).max(1), "vn-hered", stream)?;
            let rep = vonneumann::hereditary_check(&sample, &hp, n, ctx.get(&tol.into(), "tol", 1e-6)?)?;
            let results = obj(vec![
                ("normT", float(rep.norm_t)),
                ("normS", float(rep.norm_s)),
                ("holds", Value::Bool(rep.holds)),
            ]);
            let params = obj(vec![("N", int(n as u64)), ("stream", int(stream))]);
            emit(ctx, "vn", Some(&law), params, results, started, true)
        }
        "universal" => {
            let law = ctx.law(&law)?;
            let text: String = ctx.get(&universal, "universal", "maxlen=2,step=0.01".to_string())?;
            let mut maxlen = 2usize;
            let mut step = 0.01f64;
            for part in text.split(',') {
                if let Some((k, v)) = part.split_once('=') {
                    match k.trim() {
                        "maxlen" => {
                            maxlen = v
                                .trim()
                                .parse()
                                .map_err(|_| Error::parse("bad maxlen".to_string()))?
                        }
                        "step" => {
                            step = v
                                .trim()
                                .parse()
                                .map_err(|_| Error::parse("bad step".to_string()))?
                        }
                        other => return Err(Error::parse(format!("unknown key '{other}'"))),
                    }
                }
            }
            let w = vonneumann::universal_shift(&law, maxlen, step)?;
            let head = w.weights(32);
            let period_len = match &w.source {
                vonneumann::WeightSource::Periodic { period, .. } => period.len(),
                _ => 0,
            };
            let results = obj(vec![
                ("head", floats(&head)),
                ("periodLength", int(period_len as u64)),
            ]);
            let params = obj(vec![
                ("maxlen", int(maxlen as u64)),
                ("step", float(step)),
            ]);
            emit(ctx, "vn", Some(&law), params, results, started, true)
        }
        other => Err(Error::invalid(format!(
            "unknown vn op '{other}' (verdict, normal, numeric, disk-algebra, hereditary, universal)"
        ))),
    }
}

fn parse_modulus_set(text: &str) -> Result<Vec<ModulusSet>> {
    text.split(';')
        .map(|part| {
            let part = part.trim();
            if let Some(v) = part.strip_prefix("circle:") {
                Ok(ModulusSet::Circle(v.trim().parse().map_err(|_| {
                    Error::parse(format!("bad circle modulus '{v}'"))
                })?))
            } else if let Some(v) = part.strip_prefix("band:") {
                let (a, b) = v
                    .split_once(',')
                    .ok_or_else(|| Error::parse("band needs m1,m2".to_string()))?;
                Ok(ModulusSet::Band(
                    a.trim()
                        .parse()
                        .map_err(|_| Error::parse(format!("bad band start '{a}'")))?,
                    b.trim()
                        .parse()
                        .map_err(|_| Error::parse(format!("bad band end '{b}'")))?,
                ))
            } else {
                Err(Error::parse(format!(
                    "modulus parts are circle:M or band:M1,M2, got '{part}'"
                )))
            }
        })
        .collect()
}

/// Deterministic random free polynomials on a labeled stream.
pub fn random_free_polys(seed: u64, count: usize, max_deg: usize) -> Vec<FreePolynomial> {
    use rand::Rng;
    use rwslab_core::freepoly::Letter;
    let mut rng = rwslab_core::sample::stream_rng(seed, stream_for("vn-random-polys", 0));
    (0..count)
        .map(|_| {
            let terms = rng.gen_range(1..=3);
            FreePolynomial::new(
                (0..terms)
                    .map(|_| {
                        let len = rng.gen_range(0..=max_deg);
                        let word: Vec<Letter> = (0..len)
                            .map(|_| {
                                if rng.gen::<bool>() {
                                    Letter::S
                                } else {
                                    Letter::Star
                                }
                            })
                            .collect();
                        (
                            word,
                            num_complex::Complex64::new(2.0 * rng.gen::<f64>() - 1.0, 0.0),
                        )
                    })
                    .collect(),
            )
        })
        .collect()
}

// Ensure Write stays imported for CSV paths on all toolchains.
#[allow(dead_code)]
fn _write_sink(w: &mut dyn Write) {
    let _ = w;
}
