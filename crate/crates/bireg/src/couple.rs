//! The edge-by-edge coupling of the uniform edge ordering of a biregular
//! graph with the Erdős–Rényi edge process, and the sandwich extraction.
//!
//! One step, given the revealed prefix `R_t` and the Erdős–Rényi prefix
//! `G_t`: draw `epsilon` uniform on `K \ G_t` and an independent Bernoulli
//! `xi` with success probability `1 - gamma_t`. If the near-uniformity
//! event `A(t, gamma_t)` holds (every conditional edge probability is at
//! least `(1 - gamma_t)/(N - t)`), the next revealed edge is `epsilon`
//! itself when `xi = 1` and `epsilon` is new, the bijection image of
//! `epsilon` when `xi = 1` but `epsilon` was already revealed, and a draw
//! from the residual distribution when `xi = 0`. If the event fails, the
//! next edge is drawn directly from the conditional law. Either way the
//! revealed process keeps exactly its unconditional law, and on the event
//! `xi = 1` with `A` holding the Erdős–Rényi edge lands inside `R(t+1)` —
//! which is what makes `G(m) ⊆ H` extraction work.
//!
//! All step distributions are exact rationals; sampling draws a uniform
//! integer below the common denominator, so a run is reproducible bit for
//! bit from its seed.

use crate::enumerate::{self, ConditionalTable, Constraint, EnumerateError};
use crate::graph::{BipartiteGraph, Edge};
use crate::numeric::{rational_from_f64, uniform_biguint_below};
use crate::params::BiregularParams;
use crate::sample;
use crate::schedule::Schedule;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::collections::HashMap;
use std::sync::{Arc, RwLock};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CoupleError {
    #[error("exact oracle unavailable: {0}")]
    OracleUnavailable(#[from] EnumerateError),
    #[error("prefix graph is not admissible")]
    Inadmissible,
    #[error("residual probability negative although A held; exact arithmetic rules this out")]
    NumericalNegativity,
    #[error("infeasible schedule: {0}")]
    InfeasibleSchedule(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
}

/// Cache of exact conditional edge-probability tables keyed by the
/// revealed prefix. Counting calls are pure, so concurrent readers plus
/// racy duplicate inserts are harmless.
pub struct ProbOracle {
    params: BiregularParams,
    cap: u128,
    cache: RwLock<HashMap<BipartiteGraph, Arc<ConditionalTable>>>,
}

impl ProbOracle {
    pub fn new(params: &BiregularParams) -> Self {
        Self::with_cap(params, enumerate::DEFAULT_CAP)
    }

    pub fn with_cap(params: &BiregularParams, cap: u128) -> Self {
        ProbOracle { params: params.clone(), cap, cache: RwLock::new(HashMap::new()) }
    }

    pub fn params(&self) -> &BiregularParams {
        &self.params
    }

    pub fn table(&self, g: &BipartiteGraph) -> Result<Arc<ConditionalTable>, CoupleError> {
        if let Some(hit) = self.cache.read().expect("lock").get(g) {
            return Ok(hit.clone());
        }
        let table = match enumerate::conditional_table_capped(&self.params, g, self.cap) {
            Ok(t) => Arc::new(t),
            Err(EnumerateError::Inadmissible) => return Err(CoupleError::Inadmissible),
            Err(e) => return Err(e.into()),
        };
        self.cache.write().expect("lock").insert(g.clone(), table.clone());
        Ok(table)
    }
}

/// Does `A(t, chi)` hold at prefix `g`: `p_{t+1}(e, g) >= (1-chi)/(N-t)`
/// for every unrevealed edge, compared exactly.
pub fn check_event_a(
    oracle: &ProbOracle,
    g: &BipartiteGraph,
    chi: &BigRational,
) -> Result<bool, CoupleError> {
    let table = oracle.table(g)?;
    Ok(event_a_from_table(&table, oracle.params.pair_count(), g.edge_count() as u128, chi))
}

fn event_a_from_table(
    table: &ConditionalTable,
    pair_count: u128,
    t: u128,
    chi: &BigRational,
) -> bool {
    let slots = pair_count - t;
    let threshold = (BigRational::one() - chi) / BigRational::from_integer(BigInt::from(slots));
    match table.min_prob() {
        Some(min) => min >= threshold,
        None => true,
    }
}

/// Convenience wrapper taking chi as a float.
pub fn check_event_a_f64(
    oracle: &ProbOracle,
    g: &BipartiteGraph,
    chi: f64,
) -> Result<bool, CoupleError> {
    let chi = rational_from_f64(chi)
        .ok_or_else(|| CoupleError::BadParameter(format!("chi = {chi}")))?;
    check_event_a(oracle, g, &chi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BranchKind {
    /// `xi = 1` and `epsilon` was not yet revealed: keep it.
    EpsilonKept,
    /// `xi = 1` but `epsilon` was already revealed: bijection image.
    BijectionMapped,
    /// `xi = 0`: residual distribution.
    Residual,
    /// `A(t, gamma_t)` failed: drawn directly from the conditional law.
    DirectConditional,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepRecord {
    /// 1-based step index (this record describes the step producing the
    /// `t`-th revealed edge).
    pub t: u64,
    pub epsilon: Edge,
    pub xi: bool,
    pub a_held: bool,
    pub branch: BranchKind,
    pub eta: Edge,
}

/// State of one coupling run.
pub struct CouplingRun {
    pub revealed: BipartiteGraph,
    pub er_prefix: BipartiteGraph,
    pub epsilons: Vec<Edge>,
    /// 1-based step indices with `xi = 1`.
    pub success_steps: Vec<u64>,
    pub a_failures: usize,
    pub history: Vec<StepRecord>,
    record_history: bool,
}

impl CouplingRun {
    pub fn new(params: &BiregularParams, record_history: bool) -> Self {
        let (n1, n2) = params.dims().expect("desk scale");
        CouplingRun {
            revealed: BipartiteGraph::empty(n1, n2),
            er_prefix: BipartiteGraph::empty(n1, n2),
            epsilons: Vec::new(),
            success_steps: Vec::new(),
            a_failures: 0,
            history: Vec::new(),
            record_history,
        }
    }

    pub fn t(&self) -> u128 {
        self.epsilons.len() as u128
    }
}

fn complement_edges(g: &BipartiteGraph) -> Vec<Edge> {
    let mut out = Vec::new();
    for i in 0..g.n1() {
        for j in 0..g.n2() {
            if !g.has_edge(i, j) {
                out.push((i, j));
            }
        }
    }
    out
}

/// The deterministic bijection between `R_t \ G_t` and `G_t \ R_t`: both
/// sides in row-major order, matched by position. Any bijection preserves
/// the marginal; a fixed one keeps runs replayable.
fn bijection_image(revealed: &BipartiteGraph, er: &BipartiteGraph, e: Edge) -> Edge {
    let from = revealed.minus(er).edges();
    let to = er.minus(revealed).edges();
    debug_assert_eq!(from.len(), to.len());
    let pos = from.iter().position(|&x| x == e).expect("edge in R \\ G");
    to[pos]
}

/// Draw from an exact rational distribution (weights need not be
/// normalized; they are put over a common denominator).
fn sample_rational<R: Rng>(weights: &[(Edge, BigRational)], rng: &mut R) -> Edge {
    let denom = weights
        .iter()
        .fold(BigUint::one(), |acc, (_, w)| acc.lcm(&w.denom().to_biguint().expect("positive")));
    let scaled: Vec<(Edge, BigUint)> = weights
        .iter()
        .map(|(e, w)| {
            let num = w.numer().to_biguint().expect("nonnegative weight");
            let d = w.denom().to_biguint().expect("positive");
            (*e, num * (&denom / d))
        })
        .collect();
    let total: BigUint = scaled.iter().map(|(_, w)| w).sum();
    let mut draw = uniform_biguint_below(rng, &total);
    for (e, w) in &scaled {
        if &draw < w {
            return *e;
        }
        draw -= w;
    }
    unreachable!("draw below total")
}

/// Execute one coupling step with the given `gamma_t`.
pub fn couple_step<R: Rng>(
    run: &mut CouplingRun,
    gamma_t: &BigRational,
    oracle: &ProbOracle,
    rng: &mut R,
) -> Result<(), CoupleError> {
    if gamma_t.is_negative() || gamma_t > &BigRational::one() {
        return Err(CoupleError::BadParameter(format!("gamma_t = {gamma_t} outside [0,1]")));
    }
    let t = run.t();
    let pair_count = oracle.params.pair_count();
    if t >= oracle.params.edge_count() {
        return Err(CoupleError::InfeasibleSchedule("step past t = M".to_string()));
    }
    // epsilon uniform on K \ G_t
    let free = complement_edges(&run.er_prefix);
    debug_assert_eq!(free.len() as u128, pair_count - t);
    let epsilon = free[sample::uniform_u64_below(rng, free.len() as u64) as usize];
    // xi ~ Bernoulli(1 - gamma_t), exactly
    let gn = gamma_t.numer().to_biguint().expect("nonnegative");
    let gd = gamma_t.denom().to_biguint().expect("positive");
    let xi = !(uniform_biguint_below(rng, &gd) < gn);

    let table = oracle.table(&run.revealed)?;
    let a_held = event_a_from_table(&table, pair_count, t, gamma_t);
    let slots = pair_count - t;
    let unit = (BigRational::one() - gamma_t) / BigRational::from_integer(BigInt::from(slots));

    let (eta, branch) = if a_held {
        if xi {
            if !run.revealed.has_edge(epsilon.0, epsilon.1) {
                (epsilon, BranchKind::EpsilonKept)
            } else {
                (bijection_image(&run.revealed, &run.er_prefix, epsilon), BranchKind::BijectionMapped)
            }
        } else {
            // residual distribution (p_e - unit)/gamma_t; gamma_t > 0 here
            // because xi = 0 has probability gamma_t
            let mut weights = Vec::with_capacity(table.entries.len());
            let mut total = BigRational::zero();
            for (e, prob) in table.probs() {
                let w = prob - &unit;
                if w.is_negative() {
                    return Err(CoupleError::NumericalNegativity);
                }
                total += &w;
                weights.push((e, w));
            }
            debug_assert_eq!(total, gamma_t.clone(), "residual mass must be exactly gamma_t");
            (sample_rational(&weights, rng), BranchKind::Residual)
        }
    } else {
        run.a_failures += 1;
        (sample_rational(&table.probs(), rng), BranchKind::DirectConditional)
    };

    run.revealed.add_edge(eta.0, eta.1);
    run.er_prefix.add_edge(epsilon.0, epsilon.1);
    run.epsilons.push(epsilon);
    let step = run.epsilons.len() as u64;
    if xi {
        run.success_steps.push(step);
    }
    if run.record_history {
        run.history.push(StepRecord { t: step, epsilon, xi, a_held, branch, eta });
    }
    Ok(())
}

/// The exact one-step law of the next revealed edge: the probability each
/// edge receives when the branch probabilities are summed in rational
/// arithmetic. Coupling correctness says this equals the conditional law
/// `p_{t+1}(·, R_t)` for every prefix pair, every `gamma_t`.
pub fn one_step_law(
    revealed: &BipartiteGraph,
    er_prefix: &BipartiteGraph,
    gamma_t: &BigRational,
    oracle: &ProbOracle,
) -> Result<BTreeMap<Edge, BigRational>, CoupleError> {
    if revealed.edge_count() != er_prefix.edge_count() {
        return Err(CoupleError::BadParameter("|R_t| != |G_t|".to_string()));
    }
    let t = revealed.edge_count() as u128;
    let pair_count = oracle.params.pair_count();
    let table = oracle.table(revealed)?;
    let a_held = event_a_from_table(&table, pair_count, t, gamma_t);
    let mut law: BTreeMap<Edge, BigRational> = BTreeMap::new();
    if !a_held {
        for (e, p) in table.probs() {
            law.insert(e, p);
        }
        return Ok(law);
    }
    let slots = pair_count - t;
    let atom = (BigRational::one() - gamma_t) / BigRational::from_integer(BigInt::from(slots));
    // xi = 1 branch: epsilon uniform on K \ G_t, mapped through the
    // bijection when it lands inside R_t
    for epsilon in complement_edges(er_prefix) {
        let target = if revealed.has_edge(epsilon.0, epsilon.1) {
            bijection_image(revealed, er_prefix, epsilon)
        } else {
            epsilon
        };
        *law.entry(target).or_insert_with(BigRational::zero) += &atom;
    }
    // xi = 0 branch: gamma_t * residual = p_e - atom
    let mut residual_total = BigRational::zero();
    for (e, p) in table.probs() {
        let w = p - &atom;
        if w.is_negative() {
            return Err(CoupleError::NumericalNegativity);
        }
        residual_total += &w;
        *law.entry(e).or_insert_with(BigRational::zero) += w;
    }
    debug_assert_eq!(residual_total, gamma_t.clone());
    law.retain(|_, v| !v.is_zero());
    Ok(law)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOpts {
    /// Override the extraction size `m` (default: the schedule's `m`).
    pub m: Option<u128>,
    /// Override `t0` (default: the schedule's `t0`). The theorem pins `t0`
    /// through `tau0`; at desk scale with overridden constants it is
    /// configuration.
    pub t0: Option<u128>,
    pub record_history: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SandwichOutcome {
    pub success: bool,
    pub s_size: usize,
    pub a_failures: usize,
    pub used_fallback: bool,
    pub m: u128,
    pub t0: u128,
    #[serde(skip)]
    pub h: BipartiteGraph,
    #[serde(skip)]
    pub g_m: BipartiteGraph,
    #[serde(skip)]
    pub history: Vec<StepRecord>,
}

/// One full sandwich run: couple for `t0` steps, complete the revealed
/// prefix to a biregular `H` by uniform extension, extract `G(m)` from the
/// Erdős–Rényi side (the `epsilon` edges indexed by the smallest `m`
/// success steps, or the first `m` epsilons as fallback when there are too
/// few), and report whether `G(m) ⊆ H`.
pub fn run_sandwich<R: Rng>(
    schedule: &Schedule,
    oracle: &ProbOracle,
    rng: &mut R,
    opts: &RunOpts,
) -> Result<SandwichOutcome, CoupleError> {
    let params = &schedule.params;
    if oracle.params() != params {
        return Err(CoupleError::BadParameter("oracle built for different parameters".into()));
    }
    let m_edges = params.edge_count();
    let pair_count = params.pair_count();
    let t0 = opts.t0.unwrap_or(schedule.t0);
    if t0 > m_edges {
        return Err(CoupleError::InfeasibleSchedule(format!("t0 = {t0} exceeds M = {m_edges}")));
    }
    let m = opts.m.unwrap_or(schedule.m);
    if m > pair_count {
        return Err(CoupleError::InfeasibleSchedule(format!("m = {m} exceeds N = {pair_count}")));
    }
    let mut run = CouplingRun::new(params, opts.record_history);
    for t in 0..t0 {
        let gamma_t = rational_from_f64(schedule.gamma_t(t))
            .ok_or_else(|| CoupleError::BadParameter("gamma_t not finite".into()))?;
        couple_step(&mut run, &gamma_t, oracle, rng)?;
    }
    // complete R(t0) to a biregular H by uniform extension over R_{R(t0)}
    let h = enumerate::sample_constrained_capped(
        params,
        &Constraint::containing(&run.revealed),
        oracle.cap,
        rng,
    )
    .map_err(CoupleError::OracleUnavailable)?;
    // the epsilon process continues past t0 if the fallback needs more edges
    while (run.epsilons.len() as u128) < m {
        let free = complement_edges(&run.er_prefix);
        let epsilon = free[sample::uniform_u64_below(rng, free.len() as u64) as usize];
        run.er_prefix.add_edge(epsilon.0, epsilon.1);
        run.epsilons.push(epsilon);
    }
    let s_size = run.success_steps.len();
    let used_fallback = (s_size as u128) < m;
    let mut g_m = BipartiteGraph::empty(h.n1(), h.n2());
    if used_fallback {
        for &(i, j) in run.epsilons.iter().take(m as usize) {
            g_m.add_edge(i, j);
        }
    } else {
        for &step in run.success_steps.iter().take(m as usize) {
            let (i, j) = run.epsilons[step as usize - 1];
            g_m.add_edge(i, j);
        }
    }
    let success = g_m.is_subgraph_of(&h);
    Ok(SandwichOutcome {
        success,
        s_size,
        a_failures: run.a_failures,
        used_fallback,
        m,
        t0,
        h,
        g_m,
        history: std::mem::take(&mut run.history),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct UpperOutcome {
    /// `R ⊆ G(m_bar)`.
    pub success: bool,
    pub m_bar: u128,
    #[serde(skip)]
    pub r: BipartiteGraph,
    #[serde(skip)]
    pub g_bar: BipartiteGraph,
    pub inner: SandwichOutcome,
}

/// The upper (complement) embedding: run the sandwich on the complement
/// parameters with `m = N - m_bar` and complement both graphs. Success of
/// `R ⊆ G(m_bar)` is bitwise-equivalent to the inner run's success.
pub fn run_upper_embedding<R: Rng>(
    schedule_complement: &Schedule,
    oracle_complement: &ProbOracle,
    m_bar: u128,
    rng: &mut R,
    opts: &RunOpts,
) -> Result<UpperOutcome, CoupleError> {
    let pair_count = schedule_complement.params.pair_count();
    if m_bar > pair_count {
        return Err(CoupleError::InfeasibleSchedule(format!("m_bar = {m_bar} exceeds N")));
    }
    let mut inner_opts = *opts;
    inner_opts.m = Some(pair_count - m_bar);
    let inner = run_sandwich(schedule_complement, oracle_complement, rng, &inner_opts)?;
    let r = inner.h.complement();
    let g_bar = inner.g_m.complement();
    let success = r.is_subgraph_of(&g_bar);
    debug_assert_eq!(success, inner.success);
    Ok(UpperOutcome { success, m_bar, r, g_bar, inner })
}

#[derive(Debug, Clone)]
pub struct EmbedOutcome {
    pub x: u64,
    pub m: u64,
    pub success: bool,
    pub small: BipartiteGraph,
    pub big: BipartiteGraph,
}

/// Couple `G(n1,n2,p')` with `G(n1,n2,m)`: when the binomial edge count
/// lands at or below `m`, the smaller graph is a uniform subset of the
/// bigger one; otherwise the draws are independent and the coupling fails.
pub fn embed_gnp_into_gnm<R: Rng>(
    n1: usize,
    n2: usize,
    p_prime: &BigRational,
    m: u64,
    rng: &mut R,
) -> Result<EmbedOutcome, CoupleError> {
    let total = n1 as u64 * n2 as u64;
    if m > total {
        return Err(CoupleError::BadParameter(format!("m = {m} exceeds N = {total}")));
    }
    let draw = sample::sample_gnp(n1, n2, p_prime, rng)
        .map_err(|e| CoupleError::BadParameter(e.to_string()))?;
    let x = draw.edge_count() as u64;
    let big = sample::sample_gnm(n1, n2, m, rng)
        .map_err(|e| CoupleError::BadParameter(e.to_string()))?;
    if x <= m {
        // uniform x-subset of the big draw is a copy of G(n1,n2,p') given
        // its edge count
        let mut edges = big.edges();
        for t in 0..x as usize {
            let pick = t + sample::uniform_u64_below(rng, (edges.len() - t) as u64) as usize;
            edges.swap(t, pick);
        }
        let small = BipartiteGraph::from_edges(n1, n2, &edges[..x as usize])
            .expect("edges from big draw");
        debug_assert!(small.is_subgraph_of(&big));
        Ok(EmbedOutcome { x, m, success: true, small, big })
    } else {
        Ok(EmbedOutcome { x, m, success: false, small: draw, big })
    }
}
