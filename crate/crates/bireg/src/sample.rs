//! Samplers: exactly uniform biregular graphs (by unranking), the 4-cycle
//! swap chain, the `G(n1,n2,m)` and `G(n1,n2,p)` models, and the uniform
//! edge-revealing process.
//!
//! Randomness is counter-style and splittable: every Monte-Carlo trial
//! derives its own ChaCha8 stream from `(master seed, stream index)`, so
//! parallel and serial runs of the same experiment produce identical
//! results on every platform.

use crate::enumerate::{self, Constraint, EnumerateError};
use crate::graph::{BipartiteGraph, Edge};
use crate::numeric::uniform_biguint_below;
use crate::params::BiregularParams;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Documented default seed used by the CLI when `--seed` is absent.
pub const DEFAULT_SEED: u64 = 0xB1;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SampleError {
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("no biregular graph exists for these parameters")]
    EmptyClass,
    #[error("graph is not biregular for the given parameters")]
    NotBiregular,
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive an independent ChaCha8 stream for `(master, stream)`.
pub fn stream_rng(master: u64, stream: u64) -> ChaCha8Rng {
    let mut state = master ^ stream.wrapping_mul(0xA076_1D64_78BD_642F);
    let mut seed = [0u8; 32];
    for chunk in seed.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(seed)
}

/// Exactly uniform sample from the class of biregular graphs.
pub fn sample_biregular_exact<R: Rng>(
    params: &BiregularParams,
    rng: &mut R,
) -> Result<BipartiteGraph, SampleError> {
    sample_biregular_exact_capped(params, enumerate::DEFAULT_CAP, rng)
}

pub fn sample_biregular_exact_capped<R: Rng>(
    params: &BiregularParams,
    cap: u128,
    rng: &mut R,
) -> Result<BipartiteGraph, SampleError> {
    match enumerate::sample_constrained_capped(params, &Constraint::none(), cap, rng) {
        Ok(g) => Ok(g),
        Err(EnumerateError::EmptyClass) => Err(SampleError::EmptyClass),
        Err(e) => Err(e.into()),
    }
}

/// The lazy 4-cycle swap chain on biregular graphs. Each attempt picks
/// `u != u'` in V1 and `w != w'` in V2 uniformly and swaps the alternating
/// 4-cycle when `uw, u'w'` are present and `uw', u'w` absent; otherwise it
/// holds. The chain is symmetric, so its stationary distribution is
/// uniform; no mixing-time claim is made — burn-in and thinning are
/// validated empirically.
pub struct McmcSampler {
    graph: BipartiteGraph,
    burn_in: u64,
    thin: u64,
    started: bool,
}

impl McmcSampler {
    /// Start from the canonical cyclic biregular graph: cells are laid out
    /// in row-major order with columns cycling mod `n2`, which hits every
    /// column exactly `d2` times.
    pub fn new(params: &BiregularParams, burn_in: u64, thin: u64) -> Result<Self, SampleError> {
        let (n1, n2) = params
            .dims()
            .ok_or_else(|| SampleError::OutOfRange("side too large".into()))?;
        let d1 = params.d1() as usize;
        let mut graph = BipartiteGraph::empty(n1, n2);
        for i in 0..n1 {
            for k in 0..d1 {
                graph.add_edge(i, (i * d1 + k) % n2);
            }
        }
        debug_assert!(graph.is_biregular(params));
        Ok(McmcSampler { graph, burn_in, thin, started: false })
    }

    pub fn graph(&self) -> &BipartiteGraph {
        &self.graph
    }

    /// One swap attempt; returns whether a swap was applied.
    pub fn step<R: Rng>(&mut self, rng: &mut R) -> bool {
        let (n1, n2) = (self.graph.n1(), self.graph.n2());
        if n1 < 2 || n2 < 2 {
            return false;
        }
        let u = rng.gen_range(0..n1);
        let u2 = {
            let x = rng.gen_range(0..n1 - 1);
            if x >= u {
                x + 1
            } else {
                x
            }
        };
        let w = rng.gen_range(0..n2);
        let w2 = {
            let x = rng.gen_range(0..n2 - 1);
            if x >= w {
                x + 1
            } else {
                x
            }
        };
        let eligible = self.graph.has_edge(u, w)
            && self.graph.has_edge(u2, w2)
            && !self.graph.has_edge(u, w2)
            && !self.graph.has_edge(u2, w);
        if eligible {
            self.graph.remove_edge(u, w);
            self.graph.remove_edge(u2, w2);
            self.graph.add_edge(u, w2);
            self.graph.add_edge(u2, w);
        }
        eligible
    }

    pub fn run<R: Rng>(&mut self, steps: u64, rng: &mut R) {
        for _ in 0..steps {
            self.step(rng);
        }
    }

    /// Next thinned sample: the first call runs the burn-in, later calls
    /// run `thin` attempts.
    pub fn sample<R: Rng>(&mut self, rng: &mut R) -> BipartiteGraph {
        let steps = if self.started { self.thin } else { self.burn_in };
        self.started = true;
        self.run(steps, rng);
        self.graph.clone()
    }
}

/// State of the chain after `burn_in` swap attempts from the canonical
/// start; `thin` is recorded for subsequent draws via [`McmcSampler`].
pub fn sample_biregular_mcmc<R: Rng>(
    params: &BiregularParams,
    rng: &mut R,
    burn_in: u64,
    thin: u64,
) -> Result<BipartiteGraph, SampleError> {
    let mut sampler = McmcSampler::new(params, burn_in, thin)?;
    Ok(sampler.sample(rng))
}

/// A biregular graph together with a uniformly random ordering of its
/// edges; prefixes are the revealed graphs `R(t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeProcess {
    h: BipartiteGraph,
    order: Vec<Edge>,
}

impl EdgeProcess {
    pub fn h(&self) -> &BipartiteGraph {
        &self.h
    }

    pub fn order(&self) -> &[Edge] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// `R(t)`: the graph of the first `t` revealed edges.
    pub fn revealed(&self, t: usize) -> BipartiteGraph {
        assert!(t <= self.order.len());
        let mut g = BipartiteGraph::empty(self.h.n1(), self.h.n2());
        for &(i, j) in &self.order[..t] {
            g.add_edge(i, j);
        }
        g
    }
}

/// Uniformly random edge ordering of a biregular graph (Fisher-Yates over
/// the deterministic row-major edge list).
pub fn reveal_process<R: Rng>(
    params: &BiregularParams,
    h: &BipartiteGraph,
    rng: &mut R,
) -> Result<EdgeProcess, SampleError> {
    if !h.is_biregular(params) {
        return Err(SampleError::NotBiregular);
    }
    let mut order = h.edges();
    for i in (1..order.len()).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
    }
    Ok(EdgeProcess { h: h.clone(), order })
}

/// Uniform `m`-edge subgraph of `K_{n1,n2}` (partial Fisher-Yates over the
/// edge indices).
pub fn sample_gnm<R: Rng>(
    n1: usize,
    n2: usize,
    m: u64,
    rng: &mut R,
) -> Result<BipartiteGraph, SampleError> {
    let total = n1 as u64 * n2 as u64;
    if m > total {
        return Err(SampleError::OutOfRange(format!("m = {m} exceeds N = {total}")));
    }
    let mut indices: Vec<u64> = (0..total).collect();
    let mut g = BipartiteGraph::empty(n1, n2);
    for t in 0..m as usize {
        let pick = t + rng.gen_range(0..indices.len() - t);
        indices.swap(t, pick);
        let e = indices[t];
        g.add_edge((e / n2 as u64) as usize, (e % n2 as u64) as usize);
    }
    Ok(g)
}

/// Independent Bernoulli(p') edges, with exact rational p'.
pub fn sample_gnp<R: Rng>(
    n1: usize,
    n2: usize,
    p: &BigRational,
    rng: &mut R,
) -> Result<BipartiteGraph, SampleError> {
    if p.is_negative() || p > &BigRational::from_integer(1.into()) {
        return Err(SampleError::OutOfRange(format!("p' = {p} outside [0, 1]")));
    }
    let num = p.numer().to_biguint().expect("non-negative");
    let den = p.denom().to_biguint().expect("positive");
    let mut g = BipartiteGraph::empty(n1, n2);
    for i in 0..n1 {
        for j in 0..n2 {
            if uniform_biguint_below(rng, &den) < num {
                g.add_edge(i, j);
            }
        }
    }
    Ok(g)
}

/// Bernoulli(p') edges for float p' (convenience for experiment sweeps).
pub fn sample_gnp_f64<R: Rng>(
    n1: usize,
    n2: usize,
    p: f64,
    rng: &mut R,
) -> Result<BipartiteGraph, SampleError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(SampleError::OutOfRange(format!("p' = {p} outside [0, 1]")));
    }
    let mut g = BipartiteGraph::empty(n1, n2);
    for i in 0..n1 {
        for j in 0..n2 {
            if rng.gen::<f64>() < p {
                g.add_edge(i, j);
            }
        }
    }
    Ok(g)
}

/// Uniform integer below `n` for plain u64 ranges via the shared exact path.
pub fn uniform_u64_below<R: Rng>(rng: &mut R, n: u64) -> u64 {
    uniform_biguint_below(rng, &BigUint::from(n)).to_u64().expect("fits")
}
