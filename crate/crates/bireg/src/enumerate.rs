//! Exact enumeration of biregular graphs under containment/exclusion
//! constraints.
//!
//! Counting goes row by row over the bit matrix. The state after `i` rows
//! is the multiset of column descriptors (residual column demand plus the
//! column's future forced/forbidden pattern); columns with identical
//! descriptors are interchangeable, so a row choice is a composition of
//! `d1` over descriptor classes weighted by binomials. Memoizing on the
//! collapsed state makes 6x6 instant, and the same table drives exactly
//! uniform sampling by unranking.

use crate::graph::{BipartiteGraph, Edge};
use crate::numeric::uniform_biguint_below;
use crate::params::BiregularParams;
use crate::pseudo;
use crate::ColoredInstance;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;
use std::collections::HashMap;
use thiserror::Error;

/// Default cap on `N = n1*n2` for exact enumeration (6x6).
pub const DEFAULT_CAP: u128 = 36;

/// Cap on the number of graphs a listing call may visit.
pub const LISTING_CAP: u64 = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnumerateError {
    #[error("instance too large for exact enumeration: N = {n} exceeds cap {cap}")]
    TooLarge { n: u128, cap: u128 },
    #[error("inconsistent constraint: {0}")]
    InconsistentConstraint(String),
    #[error("prefix graph is not admissible (no biregular extension)")]
    Inadmissible,
    #[error("edge already belongs to the prefix graph")]
    EdgeInG,
    #[error("the two vertices coincide")]
    SameVertex,
    #[error("degree sequences have different sums")]
    DegreeSumMismatch,
    #[error("degree sequence entry out of range: {0}")]
    DegreeOutOfRange(String),
    #[error("listing would exceed the cap of {0} graphs")]
    ListingCapExceeded(u64),
    #[error("the class of biregular graphs is empty")]
    EmptyClass,
}

/// A containment/exclusion constraint: `forced ⊆ H` and `forbidden ∩ H = ∅`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Constraint {
    pub forced: Vec<Edge>,
    pub forbidden: Vec<Edge>,
}

impl Constraint {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn forcing(edges: &[Edge]) -> Self {
        Constraint { forced: edges.to_vec(), forbidden: Vec::new() }
    }

    /// Force every edge of `g`.
    pub fn containing(g: &BipartiteGraph) -> Self {
        Constraint { forced: g.edges(), forbidden: Vec::new() }
    }

    pub fn with_forced(mut self, e: Edge) -> Self {
        self.forced.push(e);
        self
    }

    pub fn with_forbidden(mut self, e: Edge) -> Self {
        self.forbidden.push(e);
        self
    }

    fn validate(&self, n1: usize, n2: usize) -> Result<(), EnumerateError> {
        for &(i, j) in self.forced.iter().chain(&self.forbidden) {
            if i >= n1 || j >= n2 {
                return Err(EnumerateError::InconsistentConstraint(format!(
                    "edge ({i}, {j}) out of range for {n1}x{n2}"
                )));
            }
        }
        for &e in &self.forced {
            if self.forbidden.contains(&e) {
                return Err(EnumerateError::InconsistentConstraint(format!(
                    "edge {e:?} both forced and forbidden"
                )));
            }
        }
        Ok(())
    }
}

/// Counts of biregular graphs by co-degree class: `counts[k]` is the number
/// of graphs in which the two marked vertices have exactly `k` common
/// neighbors, for `k = 0..=d1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub counts: Vec<BigUint>,
}

impl CountTable {
    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// Consecutive-class ratios `r_k / r_{k-1}` next to the switching
    /// reference `(d1-k+1)^2 / (k (n2 - 2 d1 + k))`. Report only: the
    /// switching bounds need `p_hat * n_hat` large.
    pub fn ratio_report(&self, params: &BiregularParams) -> Vec<(usize, Option<f64>, Option<f64>)> {
        let d1 = params.d1() as f64;
        let n2 = params.n2() as f64;
        (1..self.counts.len())
            .map(|k| {
                let ratio = if self.counts[k - 1].is_zero() {
                    None
                } else {
                    Some(
                        self.counts[k].to_f64().unwrap_or(f64::NAN)
                            / self.counts[k - 1].to_f64().unwrap_or(f64::NAN),
                    )
                };
                let kf = k as f64;
                let denom = kf * (n2 - 2.0 * d1 + kf);
                let reference = if denom > 0.0 {
                    Some((d1 - kf + 1.0).powi(2) / denom)
                } else {
                    None
                };
                (k, ratio, reference)
            })
            .collect()
    }
}

fn check_cap(params: &BiregularParams, cap: u128) -> Result<(usize, usize), EnumerateError> {
    let n = params.pair_count();
    if n > cap {
        return Err(EnumerateError::TooLarge { n, cap });
    }
    let (n1, n2) = params.dims().ok_or(EnumerateError::TooLarge { n, cap })?;
    if n1 > 64 || n2 > 64 {
        return Err(EnumerateError::TooLarge { n, cap });
    }
    Ok((n1, n2))
}

/// A descriptor class: columns sharing residual demand and future
/// forced/forbidden row patterns (bit 0 = the row about to be filled).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Class {
    residual: u8,
    forced: u64,
    forbidden: u64,
    size: u16,
}

struct Counter {
    d1: usize,
    memo: HashMap<(usize, Vec<Class>), BigUint>,
    binom: Vec<Vec<BigUint>>,
}

impl Counter {
    fn new(n1: usize, n2: usize, d1: usize) -> Self {
        let dim = n1.max(n2) + 1;
        let mut binom = vec![vec![BigUint::zero(); dim]; dim];
        for n in 0..dim {
            binom[n][0] = BigUint::one();
            for k in 1..=n {
                let a = binom[n - 1][k - 1].clone();
                let b = if k < n { binom[n - 1][k].clone() } else { BigUint::zero() };
                binom[n][k] = a + b;
            }
        }
        Counter { d1, memo: HashMap::new(), binom }
    }

    fn count(&mut self, rows_left: usize, classes: &[Class]) -> BigUint {
        if rows_left == 0 {
            return if classes.iter().all(|c| c.residual == 0) {
                BigUint::one()
            } else {
                BigUint::zero()
            };
        }
        for c in classes {
            // residual demand must fit in the remaining rows, net of
            // forbidden ones, and must cover the future forced cells
            if c.residual as usize > rows_left {
                return BigUint::zero();
            }
            if c.forced.count_ones() > c.residual as u32 {
                return BigUint::zero();
            }
            if (rows_left - c.forbidden.count_ones() as usize) < c.residual as usize {
                return BigUint::zero();
            }
        }
        let key = (rows_left, classes.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let mut total = BigUint::zero();
        let mut ks = vec![0u16; classes.len()];
        self.compose(0, self.d1, classes, rows_left, &BigUint::one(), &mut ks, &mut total);
        self.memo.insert(key, total.clone());
        total
    }

    /// Distribute the remaining row quota over classes `idx..`.
    #[allow(clippy::too_many_arguments)]
    fn compose(
        &mut self,
        idx: usize,
        quota: usize,
        classes: &[Class],
        rows_left: usize,
        weight: &BigUint,
        ks: &mut Vec<u16>,
        total: &mut BigUint,
    ) {
        if idx == classes.len() {
            if quota == 0 {
                let next = advance(classes, ks);
                *total += weight * self.count(rows_left - 1, &next);
            }
            return;
        }
        let c = classes[idx];
        let s = c.size as usize;
        let (lo, hi) = if c.forbidden & 1 != 0 || c.residual == 0 {
            (0usize, 0usize)
        } else if c.forced & 1 != 0 {
            (s, s)
        } else {
            (0, s.min(quota))
        };
        // capacity of the remaining classes, for pruning
        let rest_cap: usize = classes[idx + 1..]
            .iter()
            .filter(|c| c.forbidden & 1 == 0 && c.residual > 0)
            .map(|c| c.size as usize)
            .sum();
        for k in lo..=hi {
            if k > quota || quota - k > rest_cap {
                continue;
            }
            ks[idx] = k as u16;
            let w = weight * &self.binom[s][k];
            self.compose(idx + 1, quota - k, classes, rows_left, &w, ks, total);
        }
        ks[idx] = 0;
    }
}

/// Split each class into its chosen/unchosen parts, shift the constraint
/// masks past the processed row, and re-canonicalize.
fn advance(classes: &[Class], ks: &[u16]) -> Vec<Class> {
    let mut next = Vec::with_capacity(classes.len() * 2);
    for (c, &k) in classes.iter().zip(ks) {
        let forced = c.forced >> 1;
        let forbidden = c.forbidden >> 1;
        if k > 0 {
            next.push(Class { residual: c.residual - 1, forced, forbidden, size: k });
        }
        if k < c.size {
            next.push(Class { residual: c.residual, forced, forbidden, size: c.size - k });
        }
    }
    canonicalize(&mut next);
    next
}

fn canonicalize(classes: &mut Vec<Class>) {
    classes.sort_unstable();
    let mut out: Vec<Class> = Vec::with_capacity(classes.len());
    for c in classes.iter() {
        match out.last_mut() {
            Some(last)
                if (last.residual, last.forced, last.forbidden)
                    == (c.residual, c.forced, c.forbidden) =>
            {
                last.size += c.size;
            }
            _ => out.push(*c),
        }
    }
    *classes = out;
}

/// Per-column initial descriptors plus the concrete column ids per class.
fn initial_groups(
    params: &BiregularParams,
    constraint: &Constraint,
    _n1: usize,
    n2: usize,
) -> Vec<(Class, Vec<usize>)> {
    let d2 = params.d2() as u8;
    let mut forced_col = vec![0u64; n2];
    let mut forbidden_col = vec![0u64; n2];
    for &(i, j) in &constraint.forced {
        forced_col[j] |= 1 << i;
    }
    for &(i, j) in &constraint.forbidden {
        forbidden_col[j] |= 1 << i;
    }
    let mut groups: Vec<(Class, Vec<usize>)> = Vec::new();
    for j in 0..n2 {
        let class = Class { residual: d2, forced: forced_col[j], forbidden: forbidden_col[j], size: 1 };
        match groups.iter_mut().find(|(c, _)| {
            (c.residual, c.forced, c.forbidden) == (class.residual, class.forced, class.forbidden)
        }) {
            Some((c, ids)) => {
                c.size += 1;
                ids.push(j);
            }
            None => groups.push((class, vec![j])),
        }
    }
    groups.sort_by_key(|(c, _)| *c);
    groups
}

/// Exact number of biregular graphs satisfying the constraint.
pub fn count_biregular(
    params: &BiregularParams,
    constraint: &Constraint,
) -> Result<BigUint, EnumerateError> {
    count_biregular_capped(params, constraint, DEFAULT_CAP)
}

pub fn count_biregular_capped(
    params: &BiregularParams,
    constraint: &Constraint,
    cap: u128,
) -> Result<BigUint, EnumerateError> {
    let (n1, n2) = check_cap(params, cap)?;
    constraint.validate(n1, n2)?;
    let groups = initial_groups(params, constraint, n1, n2);
    let classes: Vec<Class> = groups.iter().map(|(c, _)| *c).collect();
    let mut counter = Counter::new(n1, n2, params.d1() as usize);
    Ok(counter.count(n1, &classes))
}

/// Visit every biregular graph satisfying the constraint, in a
/// deterministic (row-major lexicographic) order. Returns the number
/// visited. Errors out past [`LISTING_CAP`].
pub fn visit_biregular<F: FnMut(&BipartiteGraph)>(
    params: &BiregularParams,
    constraint: &Constraint,
    f: F,
) -> Result<u64, EnumerateError> {
    visit_biregular_capped(params, constraint, DEFAULT_CAP, LISTING_CAP, f)
}

pub fn visit_biregular_capped<F: FnMut(&BipartiteGraph)>(
    params: &BiregularParams,
    constraint: &Constraint,
    cap: u128,
    listing_cap: u64,
    mut f: F,
) -> Result<u64, EnumerateError> {
    let (n1, n2) = check_cap(params, cap)?;
    constraint.validate(n1, n2)?;
    let mut forced_row = vec![0u64; n1];
    let mut forbidden_row = vec![0u64; n1];
    for &(i, j) in &constraint.forced {
        forced_row[i] |= 1 << j;
    }
    for &(i, j) in &constraint.forbidden {
        forbidden_row[i] |= 1 << j;
    }
    let mut visitor = Visitor {
        n1,
        n2,
        d1: params.d1() as usize,
        forced_row,
        forbidden_row,
        residual: vec![params.d2() as usize; n2],
        graph: BipartiteGraph::empty(n1, n2),
        row_cols: Vec::new(),
        visited: 0,
        listing_cap,
        f: &mut f,
    };
    visitor.rows(0)?;
    Ok(visitor.visited)
}

struct Visitor<'a, F: FnMut(&BipartiteGraph)> {
    n1: usize,
    n2: usize,
    d1: usize,
    forced_row: Vec<u64>,
    forbidden_row: Vec<u64>,
    residual: Vec<usize>,
    graph: BipartiteGraph,
    row_cols: Vec<usize>,
    visited: u64,
    listing_cap: u64,
    f: &'a mut F,
}

impl<F: FnMut(&BipartiteGraph)> Visitor<'_, F> {
    fn rows(&mut self, i: usize) -> Result<(), EnumerateError> {
        if i == self.n1 {
            if self.visited >= self.listing_cap {
                return Err(EnumerateError::ListingCapExceeded(self.listing_cap));
            }
            self.visited += 1;
            (self.f)(&self.graph);
            return Ok(());
        }
        let rows_left = self.n1 - i;
        if self.residual.iter().any(|&r| r > rows_left) {
            return Ok(());
        }
        self.columns(i, 0, self.d1)
    }

    /// Choose the remaining columns of row `i`, scanning from `j`.
    fn columns(&mut self, i: usize, j: usize, need: usize) -> Result<(), EnumerateError> {
        if need == 0 {
            // the columns not scanned yet must not include forced ones
            if (j..self.n2).any(|jj| self.forced_row[i] >> jj & 1 == 1) {
                return Ok(());
            }
            // commit this row's picks; the next row starts a fresh pick list
            let picks = std::mem::take(&mut self.row_cols);
            for &c in &picks {
                self.graph.add_edge(i, c);
                self.residual[c] -= 1;
            }
            let result = self.rows(i + 1);
            for &c in &picks {
                self.graph.remove_edge(i, c);
                self.residual[c] += 1;
            }
            self.row_cols = picks;
            return result;
        }
        if self.n2 - j < need {
            return Ok(());
        }
        // take column j
        if self.forbidden_row[i] >> j & 1 == 0 && self.residual[j] > 0 {
            self.row_cols.push(j);
            self.columns(i, j + 1, need - 1)?;
            self.row_cols.pop();
        }
        // skip column j unless it is forced
        if self.forced_row[i] >> j & 1 == 0 {
            self.columns(i, j + 1, need)?;
        }
        Ok(())
    }
}

pub fn list_biregular(
    params: &BiregularParams,
    constraint: &Constraint,
) -> Result<Vec<BipartiteGraph>, EnumerateError> {
    let mut out = Vec::new();
    visit_biregular(params, constraint, |g| out.push(g.clone()))?;
    Ok(out)
}

/// Is `g` extendable to a biregular graph?
pub fn is_admissible(params: &BiregularParams, g: &BipartiteGraph) -> Result<bool, EnumerateError> {
    let count = count_biregular(params, &Constraint::containing(g))?;
    Ok(!count.is_zero())
}

/// Exactly uniform sample from the constrained class, by unranking against
/// the counting table row by row.
pub fn sample_constrained<R: Rng>(
    params: &BiregularParams,
    constraint: &Constraint,
    rng: &mut R,
) -> Result<BipartiteGraph, EnumerateError> {
    sample_constrained_capped(params, constraint, DEFAULT_CAP, rng)
}

pub fn sample_constrained_capped<R: Rng>(
    params: &BiregularParams,
    constraint: &Constraint,
    cap: u128,
    rng: &mut R,
) -> Result<BipartiteGraph, EnumerateError> {
    let (n1, n2) = check_cap(params, cap)?;
    constraint.validate(n1, n2)?;
    let mut groups = initial_groups(params, constraint, n1, n2);
    let mut counter = Counter::new(n1, n2, params.d1() as usize);
    let classes: Vec<Class> = groups.iter().map(|(c, _)| *c).collect();
    let total = counter.count(n1, &classes);
    if total.is_zero() {
        return Err(EnumerateError::EmptyClass);
    }
    let mut graph = BipartiteGraph::empty(n1, n2);
    for i in 0..n1 {
        let rows_left = n1 - i;
        let classes: Vec<Class> = groups.iter().map(|(c, _)| *c).collect();
        // enumerate the row compositions with their weights
        let mut options: Vec<(Vec<u16>, BigUint)> = Vec::new();
        let mut ks = vec![0u16; classes.len()];
        enumerate_compositions(
            &mut counter,
            0,
            params.d1() as usize,
            &classes,
            rows_left,
            &BigUint::one(),
            &mut ks,
            &mut options,
        );
        let total: BigUint = options.iter().map(|(_, w)| w).sum();
        debug_assert!(!total.is_zero());
        let mut draw = uniform_biguint_below(rng, &total);
        let chosen = options
            .iter()
            .find(|(_, w)| {
                if &draw < w {
                    true
                } else {
                    draw -= w;
                    false
                }
            })
            .map(|(ks, _)| ks.clone())
            .expect("draw below total");
        // materialize the composition: uniform k-subset of each class
        let mut next_groups: Vec<(Class, Vec<usize>)> = Vec::new();
        for (gi, (class, ids)) in groups.iter().enumerate() {
            let k = chosen[gi] as usize;
            let mut ids = ids.clone();
            // partial Fisher-Yates: the first k entries become the choice
            for t in 0..k {
                let pick = t + rng.gen_range(0..ids.len() - t);
                ids.swap(t, pick);
            }
            let (take, keep) = ids.split_at(k);
            for &j in take {
                graph.add_edge(i, j);
            }
            let forced = class.forced >> 1;
            let forbidden = class.forbidden >> 1;
            if !take.is_empty() {
                let mut v = take.to_vec();
                v.sort_unstable();
                next_groups.push((
                    Class { residual: class.residual - 1, forced, forbidden, size: k as u16 },
                    v,
                ));
            }
            if !keep.is_empty() {
                let mut v = keep.to_vec();
                v.sort_unstable();
                next_groups.push((
                    Class { residual: class.residual, forced, forbidden, size: keep.len() as u16 },
                    v,
                ));
            }
        }
        // merge classes that became identical
        next_groups.sort_by_key(|(c, _)| *c);
        let mut merged: Vec<(Class, Vec<usize>)> = Vec::new();
        for (c, ids) in next_groups {
            match merged.last_mut() {
                Some((lc, lids))
                    if (lc.residual, lc.forced, lc.forbidden) == (c.residual, c.forced, c.forbidden) =>
                {
                    lc.size += c.size;
                    lids.extend(ids);
                    lids.sort_unstable();
                }
                _ => merged.push((c, ids)),
            }
        }
        groups = merged;
    }
    debug_assert!(graph.is_biregular(params));
    Ok(graph)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_compositions(
    counter: &mut Counter,
    idx: usize,
    quota: usize,
    classes: &[Class],
    rows_left: usize,
    weight: &BigUint,
    ks: &mut Vec<u16>,
    options: &mut Vec<(Vec<u16>, BigUint)>,
) {
    if idx == classes.len() {
        if quota == 0 {
            let next = advance(classes, ks);
            let w = weight * counter.count(rows_left - 1, &next);
            if !w.is_zero() {
                options.push((ks.clone(), w));
            }
        }
        return;
    }
    let c = classes[idx];
    let s = c.size as usize;
    let (lo, hi) = if c.forbidden & 1 != 0 || c.residual == 0 {
        (0usize, 0usize)
    } else if c.forced & 1 != 0 {
        (s, s)
    } else {
        (0, s.min(quota))
    };
    for k in lo..=hi {
        if k > quota {
            continue;
        }
        ks[idx] = k as u16;
        let w = weight * &counter.binom[s][k];
        enumerate_compositions(counter, idx + 1, quota - k, classes, rows_left, &w, ks, options);
    }
    ks[idx] = 0;
}

/// Exact counts behind the conditional edge probabilities at one prefix:
/// `base = |R_G|`, and for every `e ∈ K\G` the count `|R_{G,e}|`.
/// `p_{t+1}(e, G) = |R_{G,e}| / (|R_G| * (M - t))`.
#[derive(Debug, Clone)]
pub struct ConditionalTable {
    pub base: BigUint,
    pub remaining: u64,
    pub entries: Vec<(Edge, BigUint)>,
}

impl ConditionalTable {
    pub fn prob(&self, e: Edge) -> Option<BigRational> {
        let count = &self.entries.iter().find(|(g, _)| *g == e)?.1;
        Some(self.ratio(count))
    }

    pub fn probs(&self) -> Vec<(Edge, BigRational)> {
        self.entries.iter().map(|(e, c)| (*e, self.ratio(c))).collect()
    }

    pub fn min_prob(&self) -> Option<BigRational> {
        self.entries.iter().map(|(_, c)| self.ratio(c)).min()
    }

    fn ratio(&self, count: &BigUint) -> BigRational {
        BigRational::new(
            count.clone().into(),
            (&self.base * BigUint::from(self.remaining)).into(),
        )
    }
}

/// Build the whole conditional table at prefix `g`.
pub fn conditional_table(
    params: &BiregularParams,
    g: &BipartiteGraph,
) -> Result<ConditionalTable, EnumerateError> {
    conditional_table_capped(params, g, DEFAULT_CAP)
}

pub fn conditional_table_capped(
    params: &BiregularParams,
    g: &BipartiteGraph,
    cap: u128,
) -> Result<ConditionalTable, EnumerateError> {
    let (n1, n2) = check_cap(params, cap)?;
    let t = g.edge_count() as u128;
    if t >= params.edge_count() {
        return Err(EnumerateError::EdgeInG);
    }
    let base_constraint = Constraint::containing(g);
    let base = count_biregular_capped(params, &base_constraint, cap)?;
    if base.is_zero() {
        return Err(EnumerateError::Inadmissible);
    }
    let remaining = (params.edge_count() - t) as u64;
    let mut entries = Vec::with_capacity((params.pair_count() as usize) - t as usize);
    for i in 0..n1 {
        for j in 0..n2 {
            if g.has_edge(i, j) {
                continue;
            }
            let c = count_biregular_capped(
                params,
                &base_constraint.clone().with_forced((i, j)),
                cap,
            )?;
            entries.push(((i, j), c));
        }
    }
    debug_assert_eq!(
        entries.iter().map(|(_, c)| c).sum::<BigUint>(),
        &base * BigUint::from(remaining),
        "per-edge counts must add up to |R_G| * (M - t)"
    );
    Ok(ConditionalTable { base, remaining, entries })
}

/// `P(eta_{t+1} = e | R(t) = G)` as an exact rational.
pub fn conditional_edge_prob(
    params: &BiregularParams,
    g: &BipartiteGraph,
    e: Edge,
) -> Result<BigRational, EnumerateError> {
    let (n1, n2) = check_cap(params, DEFAULT_CAP)?;
    if e.0 >= n1 || e.1 >= n2 {
        return Err(EnumerateError::InconsistentConstraint(format!("edge {e:?} out of range")));
    }
    if g.has_edge(e.0, e.1) {
        return Err(EnumerateError::EdgeInG);
    }
    let t = g.edge_count() as u128;
    if t >= params.edge_count() {
        return Err(EnumerateError::EdgeInG);
    }
    let base = count_biregular(params, &Constraint::containing(g))?;
    if base.is_zero() {
        return Err(EnumerateError::Inadmissible);
    }
    let with_e = count_biregular(params, &Constraint::containing(g).with_forced(e))?;
    let remaining = BigUint::from((params.edge_count() - t) as u64);
    Ok(BigRational::new(with_e.into(), (base * remaining).into()))
}

/// Classify all biregular graphs by the co-degree of two V1 vertices.
pub fn codegree_class_counts(
    params: &BiregularParams,
    u: usize,
    v: usize,
) -> Result<CountTable, EnumerateError> {
    codegree_class_counts_capped(params, u, v, DEFAULT_CAP)
}

pub fn codegree_class_counts_capped(
    params: &BiregularParams,
    u: usize,
    v: usize,
    cap: u128,
) -> Result<CountTable, EnumerateError> {
    let (n1, _) = check_cap(params, cap)?;
    if u == v {
        return Err(EnumerateError::SameVertex);
    }
    if u >= n1 || v >= n1 {
        return Err(EnumerateError::InconsistentConstraint(format!(
            "vertex index {u} or {v} out of range"
        )));
    }
    let mut counts = vec![BigUint::zero(); params.d1() as usize + 1];
    visit_biregular_capped(params, &Constraint::none(), cap, LISTING_CAP, |h| {
        let k: usize = h
            .row(u)
            .iter()
            .zip(h.row(v))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum();
        counts[k] += BigUint::one();
    })?;
    Ok(CountTable { counts })
}

/// The Canfield–Greenhill–McKay estimate for the number of bipartite
/// graphs with the given degree sequences, with the error term dropped.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CgmEstimate {
    pub ln_estimate: f64,
    pub estimate: f64,
    pub p: f64,
    pub spread1: f64,
    pub spread2: f64,
}

/// Which of the estimate's three validity conditions hold for the supplied
/// constants `(a, b, c)` and exponent `eps` (the theorem merely asserts
/// such an `eps` exists, so it is an input here).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CgmConditions {
    pub max_deviation: bool,
    pub balance: bool,
    pub density: bool,
}

pub fn cgm_estimate(dd1: &[u64], dd2: &[u64]) -> Result<CgmEstimate, EnumerateError> {
    let n1 = dd1.len() as u64;
    let n2 = dd2.len() as u64;
    if n1 == 0 || n2 == 0 {
        return Err(EnumerateError::DegreeOutOfRange("empty side".into()));
    }
    let s1: u64 = dd1.iter().sum();
    let s2: u64 = dd2.iter().sum();
    if s1 != s2 {
        return Err(EnumerateError::DegreeSumMismatch);
    }
    if dd1.iter().any(|&d| d > n2) {
        return Err(EnumerateError::DegreeOutOfRange("V1 degree exceeds n2".into()));
    }
    if dd2.iter().any(|&d| d > n1) {
        return Err(EnumerateError::DegreeOutOfRange("V2 degree exceeds n1".into()));
    }
    let n_pairs = n1 as f64 * n2 as f64;
    let dbar1 = s1 as f64 / n1 as f64;
    let dbar2 = s2 as f64 / n2 as f64;
    let p = dbar1 / n2 as f64;
    let q = 1.0 - p;
    let spread1: f64 = dd1.iter().map(|&d| (d as f64 - dbar1).powi(2)).sum();
    let spread2: f64 = dd2.iter().map(|&d| (d as f64 - dbar2).powi(2)).sum();
    let ln_choose = |n: f64, k: f64| {
        crate::stats::ln_gamma(n + 1.0) - crate::stats::ln_gamma(k + 1.0)
            - crate::stats::ln_gamma(n - k + 1.0)
    };
    let mut ln_est = -ln_choose(n_pairs, s1 as f64);
    for &d in dd1 {
        ln_est += ln_choose(n2 as f64, d as f64);
    }
    for &d in dd2 {
        ln_est += ln_choose(n1 as f64, d as f64);
    }
    // regular sequences have zero spread; the factor is then exactly 1
    // even at p in {0, 1} where pq vanishes
    let rel = |spread: f64| if spread == 0.0 { 0.0 } else { spread / (p * q * n_pairs) };
    ln_est += -0.5 * (1.0 - rel(spread1)) * (1.0 - rel(spread2));
    Ok(CgmEstimate { ln_estimate: ln_est, estimate: ln_est.exp(), p, spread1, spread2 })
}

pub fn cgm_conditions(dd1: &[u64], dd2: &[u64], a: f64, c: f64, eps: f64) -> CgmConditions {
    let n1 = dd1.len() as f64;
    let n2 = dd2.len() as f64;
    let dbar1 = dd1.iter().sum::<u64>() as f64 / n1;
    let dbar2 = dd2.iter().sum::<u64>() as f64 / n2;
    let p = dbar1 / n2;
    let q = 1.0 - p;
    let dev1 = dd1.iter().map(|&d| (d as f64 - dbar1).abs()).fold(0.0, f64::max);
    let dev2 = dd2.iter().map(|&d| (d as f64 - dbar2).abs()).fold(0.0, f64::max);
    let max_deviation = dev1 <= c * n2.powf(0.5 + eps) && dev2 <= c * n1.powf(0.5 + eps);
    let balance = n1.max(n2) <= c * (p * q).powi(2) * n1.min(n2).powf(1.0 + eps);
    let density = if p == 0.0 || q == 0.0 {
        false
    } else {
        (1.0 - 2.0 * p).powi(2) / (4.0 * p * q)
            * (1.0 + 5.0 * n1 / (6.0 * n2) + 5.0 * n2 / (6.0 * n1))
            <= a * n1.max(n2).ln()
    };
    CgmConditions { max_deviation, balance, density }
}

/// Everything the switching bound of the `R_{G,¬e}` vs `R_{G,e}` classes
/// can be confronted with at exact scale.
#[derive(Debug, Clone)]
pub struct SwitchingReport {
    pub with_e: BigUint,
    pub without_e: BigUint,
    pub both_nonempty: bool,
    /// `|R_{G,¬e}| / |R_{G,e}|`, when defined.
    pub ratio: Option<BigRational>,
    /// `N^D - 1`.
    pub bound: BigUint,
    pub within_bounds: Option<bool>,
    /// Does every `H ⊇ G` contain an alternating cycle through `e` of
    /// length at most `2D`? (The proposition's hypothesis; conditional,
    /// so reported rather than asserted.)
    pub hypothesis_holds: bool,
    pub hypothesis_counterexample: Option<BipartiteGraph>,
}

pub fn switching_ratio_check(
    params: &BiregularParams,
    g: &BipartiteGraph,
    e: Edge,
    d: u32,
) -> Result<SwitchingReport, EnumerateError> {
    let (n1, n2) = check_cap(params, DEFAULT_CAP)?;
    if e.0 >= n1 || e.1 >= n2 {
        return Err(EnumerateError::InconsistentConstraint(format!("edge {e:?} out of range")));
    }
    if g.has_edge(e.0, e.1) {
        return Err(EnumerateError::EdgeInG);
    }
    let base = Constraint::containing(g);
    let total = count_biregular(params, &base)?;
    if total.is_zero() {
        return Err(EnumerateError::Inadmissible);
    }
    let with_e = count_biregular(params, &base.clone().with_forced(e))?;
    let without_e = count_biregular(params, &base.clone().with_forbidden(e))?;
    debug_assert_eq!(&with_e + &without_e, total);
    let bound = BigUint::from(params.pair_count()).pow(d) - BigUint::one();
    let ratio = if with_e.is_zero() {
        None
    } else {
        Some(BigRational::new(without_e.clone().into(), with_e.clone().into()))
    };
    let within_bounds = ratio.as_ref().map(|r| {
        if bound.is_zero() {
            return false;
        }
        let upper = BigRational::from_integer(bound.clone().into());
        let lower = BigRational::new(BigUint::one().into(), bound.clone().into());
        &lower <= r && r <= &upper
    });
    // Exhaustive hypothesis check: find an alternating cycle through e in
    // every extension H of G.
    let mut hypothesis_holds = true;
    let mut counterexample = None;
    visit_biregular(params, &base, |h| {
        if !hypothesis_holds {
            return;
        }
        let inst = ColoredInstance::new(g.clone(), h.clone()).expect("G ⊆ H by construction");
        let found = pseudo::find_alternating_cycle(&inst.blue_red(), e, 2 * d as usize)
            .ok()
            .flatten();
        if found.is_none() {
            hypothesis_holds = false;
            counterexample = Some(h.clone());
        }
    })?;
    let both_nonempty = !with_e.is_zero() && !without_e.is_zero();
    Ok(SwitchingReport {
        with_e,
        without_e,
        both_nonempty,
        ratio,
        bound,
        within_bounds,
        hypothesis_holds,
        hypothesis_counterexample: counterexample,
    })
}
