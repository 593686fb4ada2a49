//! Monte-Carlo and exact harnesses confronting the concentration
//! statements with data at desk scale.
//!
//! Reports never assert asymptotic claims: they emit observed values next
//! to the corresponding bands and leave the judgement to the reader (the
//! acceptance suite pins only the exact and statistical rows). Every
//! report is deterministic given `(config, seed)`: trials derive their
//! generators from `(seed, trial index)` and reductions run in trial
//! order, so thread count cannot change any output byte.

use crate::colored::ColoredInstance;
use crate::enumerate::{self, Constraint};
use crate::graph::{BipartiteGraph, Edge, Vertex};
use crate::matching;
use crate::numeric::ln_u128;
use crate::params::BiregularParams;
use crate::sample::{self, stream_rng};
use crate::schedule;
use crate::stats;
use num_traits::ToPrimitive;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    BadConfig(String),
    #[error("A and B must have size p*n2 at most n1")]
    SizeMismatch,
    #[error(transparent)]
    Enumerate(#[from] enumerate::EnumerateError),
    #[error("sampling failed: {0}")]
    Sample(String),
}

impl From<sample::SampleError> for ExperimentError {
    fn from(e: sample::SampleError) -> Self {
        ExperimentError::Sample(e.to_string())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub trials: u64,
    pub seed: u64,
    pub t_grid: Vec<u128>,
    /// The free concentration parameter; defaults to `log N`.
    pub lambda: Option<f64>,
    pub threads: Option<usize>,
    /// Burn-in/thinning when the instance exceeds the exact-sampler cap.
    pub mcmc_burn_in: u64,
    pub mcmc_thin: u64,
    pub cap: u128,
}

impl ExperimentConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        ExperimentConfig {
            trials,
            seed,
            t_grid: Vec::new(),
            lambda: None,
            threads: None,
            mcmc_burn_in: 20_000,
            mcmc_thin: 10,
            cap: enumerate::DEFAULT_CAP,
        }
    }

    pub fn with_grid(mut self, grid: Vec<u128>) -> Self {
        self.t_grid = grid;
        self
    }

    fn lambda_or_default(&self, params: &BiregularParams) -> f64 {
        self.lambda.unwrap_or_else(|| ln_u128(params.pair_count().max(2)))
    }

    fn validate(&self, params: &BiregularParams) -> Result<(), ExperimentError> {
        if self.trials == 0 {
            return Err(ExperimentError::BadConfig("trials must be at least 1".into()));
        }
        if self.t_grid.iter().any(|&t| t > params.edge_count()) {
            return Err(ExperimentError::BadConfig("t grid entry exceeds M".into()));
        }
        Ok(())
    }
}

/// One report line in the common CSV schema.
#[derive(Debug, Clone, Serialize)]
pub struct CsvRow {
    pub t: u128,
    pub tau: f64,
    pub stat: String,
    pub observed: f64,
    pub band: f64,
    pub violated: u64,
    pub trials: u64,
}

pub fn rows_to_csv(rows: &[CsvRow]) -> String {
    let mut out = String::from("t,tau,stat,observed,band,violated,trials\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.t, r.tau, r.stat, r.observed, r.band, r.violated, r.trials
        ));
    }
    out
}

/// Map trial indices through `f` with per-trial generator streams,
/// optionally on a bounded worker pool; results come back in trial order.
fn run_trials<T, F>(cfg: &ExperimentConfig, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, ChaCha8Rng) -> T + Sync,
{
    let work = || {
        (0..cfg.trials)
            .into_par_iter()
            .map(|trial| f(trial, stream_rng(cfg.seed, trial)))
            .collect::<Vec<T>>()
    };
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(work),
        None => work(),
    }
}

fn draw_h(
    params: &BiregularParams,
    cfg: &ExperimentConfig,
    rng: &mut ChaCha8Rng,
) -> Result<BipartiteGraph, ExperimentError> {
    if params.pair_count() <= cfg.cap {
        Ok(sample::sample_biregular_exact_capped(params, cfg.cap, rng)?)
    } else {
        Ok(sample::sample_biregular_mcmc(params, rng, cfg.mcmc_burn_in, cfg.mcmc_thin)?)
    }
}

/// Co-degree of a fixed V1 pair in the biregular graph vs the
/// concentration band `20(p̂^3 n2 I + p̂ n2/n̂ + sqrt(λ p̂^2 n2)) + λ`
/// around `p^2 n2`.
#[derive(Debug, Clone, Serialize)]
pub struct CodegreeReport {
    pub lambda: f64,
    pub center: f64,
    pub band: f64,
    /// The three band addends, reported separately (at desk scale they are
    /// all the same order, so no single term dominates).
    pub band_terms: [f64; 3],
    pub histogram: Vec<u64>,
    pub violations: u64,
    pub trials: u64,
    /// Exact law `r_k / sum r` when the instance is within the cap.
    pub exact_probs: Option<Vec<f64>>,
    pub exact_mean: Option<f64>,
    pub rows: Vec<CsvRow>,
}

pub fn exp_codegree(
    params: &BiregularParams,
    cfg: &ExperimentConfig,
) -> Result<CodegreeReport, ExperimentError> {
    cfg.validate(params)?;
    let lambda = cfg.lambda_or_default(params);
    let p_hat = params.p_hat_f64();
    let n2 = params.n2() as f64;
    let n_hat = params.n_hat() as f64;
    let indicator = schedule::balance_indicator(params) as f64;
    let center = params.p_f64() * params.p_f64() * n2;
    let band_terms = [
        20.0 * p_hat.powi(3) * n2 * indicator,
        20.0 * p_hat * n2 / n_hat,
        20.0 * (lambda * p_hat * p_hat * n2).sqrt(),
    ];
    let band = band_terms.iter().sum::<f64>() + lambda;
    let d1 = params.d1() as usize;
    let samples = run_trials(cfg, |_, mut rng| {
        let h = draw_h(params, cfg, &mut rng).expect("sampler available");
        h.codegree(Vertex::v1(0), Vertex::v1(1)).expect("distinct vertices")
    });
    let mut histogram = vec![0u64; d1 + 1];
    let mut violations = 0u64;
    for k in samples {
        histogram[k] += 1;
        if (k as f64 - center).abs() > band {
            violations += 1;
        }
    }
    let (exact_probs, exact_mean) = if params.pair_count() <= cfg.cap {
        let table = enumerate::codegree_class_counts_capped(params, 0, 1, cfg.cap)?;
        let total = table.total().to_f64().unwrap_or(f64::NAN);
        let probs: Vec<f64> =
            table.counts.iter().map(|c| c.to_f64().unwrap_or(f64::NAN) / total).collect();
        let mean = probs.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
        (Some(probs), Some(mean))
    } else {
        (None, None)
    };
    let observed_mean = histogram
        .iter()
        .enumerate()
        .map(|(k, &c)| k as f64 * c as f64)
        .sum::<f64>()
        / cfg.trials as f64;
    let rows = vec![CsvRow {
        t: params.edge_count(),
        tau: 0.0,
        stat: "codegree_mean".into(),
        observed: observed_mean,
        band,
        violated: violations,
        trials: cfg.trials,
    }];
    Ok(CodegreeReport {
        lambda,
        center,
        band,
        band_terms,
        histogram,
        violations,
        trials: cfg.trials,
        exact_probs,
        exact_mean,
        rows,
    })
}

/// Degrees along the revealing process vs the band `3 sqrt(λ τ d_i)`
/// around `(1-τ) d_i`.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeProcessReport {
    pub lambda: f64,
    pub rows: Vec<CsvRow>,
}

pub fn exp_degree_process(
    params: &BiregularParams,
    cfg: &ExperimentConfig,
) -> Result<DegreeProcessReport, ExperimentError> {
    cfg.validate(params)?;
    let lambda = cfg.lambda_or_default(params);
    let m = params.edge_count();
    let d1 = params.d1() as f64;
    let d2 = params.d2() as f64;
    let grid = if cfg.t_grid.is_empty() { vec![0, m / 2, m] } else { cfg.t_grid.clone() };
    struct TrialOut {
        per_t: Vec<(f64, f64, f64)>, // (max dev v1, max dev v2, deg of v0)
    }
    let outs = run_trials(cfg, |_, mut rng| {
        let h = draw_h(params, cfg, &mut rng).expect("sampler available");
        let proc = sample::reveal_process(params, &h, &mut rng).expect("h biregular");
        let per_t = grid
            .iter()
            .map(|&t| {
                let r = proc.revealed(t as usize);
                let tau = 1.0 - t as f64 / m as f64;
                let dev1 = (0..r.n1())
                    .map(|i| (r.degree_v1(i) as f64 - (1.0 - tau) * d1).abs())
                    .fold(0.0, f64::max);
                let dev2 = (0..r.n2())
                    .map(|j| (r.degree_v2(j) as f64 - (1.0 - tau) * d2).abs())
                    .fold(0.0, f64::max);
                (dev1, dev2, r.degree_v1(0) as f64)
            })
            .collect();
        TrialOut { per_t }
    });
    let mut rows = Vec::new();
    for (gi, &t) in grid.iter().enumerate() {
        let tau = 1.0 - t as f64 / m as f64;
        let band1 = 3.0 * (lambda * tau * d1).sqrt();
        let band2 = 3.0 * (lambda * tau * d2).sqrt();
        let mut sum1 = 0.0;
        let mut sum2 = 0.0;
        let mut viol = 0u64;
        let mut deg_sum = 0.0;
        for o in &outs {
            let (v1, v2, deg) = o.per_t[gi];
            sum1 += v1;
            sum2 += v2;
            deg_sum += deg;
            if v1 > band1 || v2 > band2 {
                viol += 1;
            }
        }
        let n = cfg.trials as f64;
        rows.push(CsvRow {
            t,
            tau,
            stat: "max_degree_dev_v1".into(),
            observed: sum1 / n,
            band: band1,
            violated: viol,
            trials: cfg.trials,
        });
        rows.push(CsvRow {
            t,
            tau,
            stat: "max_degree_dev_v2".into(),
            observed: sum2 / n,
            band: band2,
            violated: viol,
            trials: cfg.trials,
        });
        // hypergeometric reference for the degree of a fixed vertex:
        // deg_{R(t)}(v) ~ Hyp(M, d1, t)
        let mean = stats::hypergeometric_mean(m as u64, params.d1(), t as u64);
        let var = stats::hypergeometric_var(m as u64, params.d1(), t as u64);
        let sigma_mean = (var / n).sqrt();
        let observed_mean = deg_sum / n;
        rows.push(CsvRow {
            t,
            tau,
            stat: "mean_degree_v0".into(),
            observed: observed_mean,
            band: 3.0 * sigma_mean,
            violated: u64::from((observed_mean - mean).abs() > 3.0 * sigma_mean),
            trials: cfg.trials,
        });
    }
    Ok(DegreeProcessReport { lambda, rows })
}

/// Max co-degree along the process vs the band
/// `(1-τ)^2 p^2 n2 + 20 q^3 n2 I + 15 sqrt(λ n2)`. Requires `n1 >= n2`
/// (enforced by relabeling the sides).
pub fn exp_codegree_process(
    params: &BiregularParams,
    cfg: &ExperimentConfig,
) -> Result<DegreeProcessReport, ExperimentError> {
    cfg.validate(params)?;
    // relabel so that n1 >= n2
    let flipped = params.n1() < params.n2();
    let work_params = if flipped {
        BiregularParams::new(params.n2(), params.n1(), params.p().clone())
            .expect("swap keeps integrality")
    } else {
        params.clone()
    };
    let lambda = cfg.lambda_or_default(&work_params);
    let m = work_params.edge_count();
    let n2 = work_params.n2() as f64;
    let p = work_params.p_f64();
    let q = work_params.q_f64();
    let indicator = schedule::balance_indicator(&work_params) as f64;
    let grid = if cfg.t_grid.is_empty() { vec![0, m / 2, m] } else { cfg.t_grid.clone() };
    let outs = run_trials(cfg, |_, mut rng| {
        let h0 = draw_h(params, cfg, &mut rng).expect("sampler available");
        let h = if flipped { h0.transpose() } else { h0 };
        let proc = sample::reveal_process(&work_params, &h, &mut rng).expect("biregular");
        grid.iter()
            .map(|&t| {
                let r = proc.revealed(t as usize);
                let mut max_cod = 0usize;
                for u in 0..r.n1() {
                    for v in (u + 1)..r.n1() {
                        max_cod = max_cod
                            .max(r.codegree(Vertex::v1(u), Vertex::v1(v)).expect("distinct"));
                    }
                }
                max_cod as f64
            })
            .collect::<Vec<f64>>()
    });
    let mut rows = Vec::new();
    for (gi, &t) in grid.iter().enumerate() {
        let tau = 1.0 - t as f64 / m as f64;
        let band = (1.0 - tau).powi(2) * p * p * n2
            + 20.0 * q.powi(3) * n2 * indicator
            + 15.0 * (lambda * n2).sqrt();
        let mut sum = 0.0;
        let mut viol = 0u64;
        for o in &outs {
            sum += o[gi];
            if o[gi] > band {
                viol += 1;
            }
        }
        rows.push(CsvRow {
            t,
            tau,
            stat: "max_codegree".into(),
            observed: sum / cfg.trials as f64,
            band,
            violated: viol,
            trials: cfg.trials,
        });
    }
    Ok(DegreeProcessReport { lambda, rows })
}

/// Exact typicality audit of admissible prefixes with `t` edges: for every
/// unrevealed edge pair `(e, f)` the conditional probability that some
/// theta ratio strays more than `delta` from 1, against the `tau^2 delta`
/// budget; plus the minimum of `P(e in R, f not in R | G)` over the pairs.
#[derive(Debug, Clone, Serialize)]
pub struct TypicalityReport {
    pub t: u128,
    pub tau: f64,
    pub delta_grid: Vec<f64>,
    pub prefixes: Vec<PrefixTypicality>,
    /// Exact pmf of the path statistic `theta(u0, u1)` over the extensions
    /// of the first prefix, next to its center `tau * q * d1`.
    pub theta_pmf: Vec<f64>,
    pub theta_center: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PrefixTypicality {
    pub edges: Vec<Edge>,
    /// worst conditional deviation probability per delta in the grid
    pub worst_prob: Vec<f64>,
    pub typical: Vec<bool>,
    /// `min_{e, f} P(e in R, f not in R | G)`.
    pub min_pair_prob: f64,
}

pub fn exp_typicality(
    params: &BiregularParams,
    t: u128,
    delta_grid: &[f64],
    cfg: &ExperimentConfig,
) -> Result<TypicalityReport, ExperimentError> {
    if t >= params.edge_count() {
        return Err(ExperimentError::BadConfig("t must be below M".into()));
    }
    let (n1, n2) = params.dims().ok_or(ExperimentError::SizeMismatch)?;
    let m = params.edge_count();
    let tau = 1.0 - t as f64 / m as f64;
    let q = params.q_f64();
    // enumerate admissible prefixes with t edges by sampling reveal
    // prefixes (deduplicated), or exhaustively for t <= 2
    let mut prefixes: Vec<BipartiteGraph> = Vec::new();
    if t <= 2 {
        let all_edges: Vec<Edge> =
            (0..n1).flat_map(|i| (0..n2).map(move |j| (i, j))).collect();
        let mut push_if_admissible = |edges: &[Edge]| {
            let g = BipartiteGraph::from_edges(n1, n2, edges).expect("in range");
            if enumerate::count_biregular_capped(params, &Constraint::containing(&g), cfg.cap)
                .map(|c| !num_traits::Zero::is_zero(&c))
                .unwrap_or(false)
            {
                prefixes.push(g);
            }
        };
        match t {
            0 => push_if_admissible(&[]),
            1 => {
                for &e in &all_edges {
                    push_if_admissible(&[e]);
                }
            }
            _ => {
                for (a, &e) in all_edges.iter().enumerate() {
                    for &f in &all_edges[a + 1..] {
                        push_if_admissible(&[e, f]);
                    }
                }
            }
        }
    } else {
        let mut seen = std::collections::HashSet::new();
        for trial in 0..cfg.trials {
            let mut rng = stream_rng(cfg.seed, trial);
            let h = draw_h(params, cfg, &mut rng)?;
            let proc = sample::reveal_process(params, &h, &mut rng)?;
            let g = proc.revealed(t as usize);
            if seen.insert(g.edges()) {
                prefixes.push(g);
            }
        }
    }
    let mut theta_pmf = Vec::new();
    let theta_center = tau * q * params.d1() as f64;
    let mut out = Vec::new();
    for (gi, g) in prefixes.iter().enumerate() {
        let extensions = enumerate::list_biregular(params, &Constraint::containing(g))?;
        if gi == 0 {
            // exact law of theta(u0, u1) over the extensions of the first
            // prefix, for the report
            let mut hist = vec![0u64; params.d1() as usize + 1];
            for h in &extensions {
                let inst = ColoredInstance::new(g.clone(), h.clone()).expect("nested");
                let th = inst.theta(Vertex::v1(0), Vertex::v1(1)).expect("distinct");
                hist[th.min(params.d1() as usize)] += 1;
            }
            theta_pmf =
                hist.iter().map(|&c| c as f64 / extensions.len() as f64).collect();
        }
        let total = extensions.len() as f64;
        let unrevealed: Vec<Edge> = (0..n1)
            .flat_map(|i| (0..n2).map(move |j| (i, j)))
            .filter(|&(i, j)| !g.has_edge(i, j))
            .collect();
        let mut worst = vec![0.0f64; delta_grid.len()];
        let mut min_pair_prob = f64::INFINITY;
        for &e in &unrevealed {
            for &f in &unrevealed {
                if e == f {
                    continue;
                }
                // class R_{G, e, not f}
                let class: Vec<&BipartiteGraph> = extensions
                    .iter()
                    .filter(|h| h.has_edge(e.0, e.1) && !h.has_edge(f.0, f.1))
                    .collect();
                min_pair_prob = min_pair_prob.min(class.len() as f64 / total);
                if class.is_empty() {
                    continue;
                }
                let mut dev_counts = vec![0u64; delta_grid.len()];
                for h in &class {
                    let inst = ColoredInstance::new(g.clone(), (*h).clone()).expect("nested");
                    let mut max_ratio_dev = 0.0f64;
                    // e = v1 v2, f = u1 u2; theta(u_i, v_i) for distinct ends
                    let (v1, v2) = e;
                    let (u1, u2) = f;
                    if u1 != v1 {
                        let th = inst.theta(Vertex::v1(u1), Vertex::v1(v1)).expect("distinct");
                        let center = tau * q * params.d1() as f64;
                        max_ratio_dev = max_ratio_dev.max((th as f64 / center - 1.0).abs());
                    }
                    if u2 != v2 {
                        let th = inst.theta(Vertex::v2(u2), Vertex::v2(v2)).expect("distinct");
                        let center = tau * q * params.d2() as f64;
                        max_ratio_dev = max_ratio_dev.max((th as f64 / center - 1.0).abs());
                    }
                    for (di, &delta) in delta_grid.iter().enumerate() {
                        if max_ratio_dev > delta {
                            dev_counts[di] += 1;
                        }
                    }
                }
                for (di, &c) in dev_counts.iter().enumerate() {
                    worst[di] = worst[di].max(c as f64 / class.len() as f64);
                }
            }
        }
        let typical: Vec<bool> = delta_grid
            .iter()
            .zip(&worst)
            .map(|(&delta, &w)| w <= tau * tau * delta)
            .collect();
        out.push(PrefixTypicality {
            edges: g.edges(),
            worst_prob: worst,
            typical,
            min_pair_prob,
        });
    }
    Ok(TypicalityReport {
        t,
        tau,
        delta_grid: delta_grid.to_vec(),
        prefixes: out,
        theta_pmf,
        theta_center,
    })
}

/// Perfect matchings between the fixed subsets `A = first p*n2 of V1`,
/// `B = first p*n2 of V2`: Monte-Carlo frequency, the exact probability at
/// enumeration scale, and the growth signal `p^2 n2 - log(p n2)`.
#[derive(Debug, Clone, Serialize)]
pub struct MatchingReport {
    pub subset_size: usize,
    pub frequency: f64,
    pub exact_probability: Option<f64>,
    pub signal: f64,
    pub trials: u64,
    pub rows: Vec<CsvRow>,
}

pub fn exp_matching(
    params: &BiregularParams,
    cfg: &ExperimentConfig,
) -> Result<MatchingReport, ExperimentError> {
    cfg.validate(params)?;
    let k = params.d1() as usize; // p * n2
    if k as u64 > params.n1() || k as u64 > params.n2() {
        return Err(ExperimentError::SizeMismatch);
    }
    let left: Vec<usize> = (0..k).collect();
    let right: Vec<usize> = (0..k).collect();
    let hits: u64 = run_trials(cfg, |_, mut rng| {
        let h = draw_h(params, cfg, &mut rng).expect("sampler available");
        u64::from(matching::has_perfect_matching_on(&h, &left, &right))
    })
    .into_iter()
    .sum();
    let frequency = hits as f64 / cfg.trials as f64;
    let exact_probability = if params.pair_count() <= cfg.cap {
        let mut with_matching = 0u64;
        let mut total = 0u64;
        enumerate::visit_biregular_capped(
            params,
            &Constraint::none(),
            cfg.cap,
            enumerate::LISTING_CAP,
            |h| {
                total += 1;
                if matching::has_perfect_matching_on(h, &left, &right) {
                    with_matching += 1;
                }
            },
        )?;
        Some(with_matching as f64 / total as f64)
    } else {
        None
    };
    let pn2 = params.p_f64() * params.n2() as f64;
    let signal = params.p_f64() * pn2 - pn2.ln();
    let rows = vec![CsvRow {
        t: params.edge_count(),
        tau: 0.0,
        stat: "perfect_matching_freq".into(),
        observed: frequency,
        band: exact_probability.unwrap_or(f64::NAN),
        violated: 0,
        trials: cfg.trials,
    }];
    Ok(MatchingReport {
        subset_size: k,
        frequency,
        exact_probability,
        signal,
        trials: cfg.trials,
        rows,
    })
}

/// Maximum-degree floor for the binomial model: frequency that the max
/// V1-degree of `G(n1, n2, p')` reaches
/// `kappa = min(ceil(p' n2 + sqrt(p'(1-p') n2 log n1)), n2)`.
#[derive(Debug, Clone, Serialize)]
pub struct MaxDegreeReport {
    pub kappa: u64,
    pub frequency: f64,
    pub soft_floor: f64,
    pub meets_floor: bool,
    pub hypotheses_hold: bool,
    pub trials: u64,
    pub rows: Vec<CsvRow>,
}

pub fn exp_maxdegree_gnp(
    n1: usize,
    n2: usize,
    p_prime: f64,
    cfg: &ExperimentConfig,
    soft_floor: f64,
) -> Result<MaxDegreeReport, ExperimentError> {
    if !(0.0..=1.0).contains(&p_prime) {
        return Err(ExperimentError::BadConfig(format!("p' = {p_prime}")));
    }
    if cfg.trials == 0 {
        return Err(ExperimentError::BadConfig("trials must be at least 1".into()));
    }
    let hypotheses_hold = p_prime <= 0.25 && n2 <= n1;
    let kappa_raw =
        (p_prime * n2 as f64 + (p_prime * (1.0 - p_prime) * n2 as f64 * (n1 as f64).ln()).sqrt())
            .ceil() as u64;
    let kappa = kappa_raw.min(n2 as u64);
    let hits: u64 = run_trials(cfg, |_, mut rng| {
        let g = sample::sample_gnp_f64(n1, n2, p_prime, &mut rng).expect("p in range");
        let max_deg = (0..n1).map(|i| g.degree_v1(i)).max().unwrap_or(0) as u64;
        u64::from(max_deg >= kappa)
    })
    .into_iter()
    .sum();
    let frequency = hits as f64 / cfg.trials as f64;
    let rows = vec![CsvRow {
        t: 0,
        tau: 1.0,
        stat: "maxdeg_reaches_kappa".into(),
        observed: frequency,
        band: soft_floor,
        violated: u64::from(frequency < soft_floor),
        trials: cfg.trials,
    }];
    Ok(MaxDegreeReport {
        kappa,
        frequency,
        soft_floor,
        meets_floor: frequency >= soft_floor,
        hypotheses_hold,
        trials: cfg.trials,
        rows,
    })
}
