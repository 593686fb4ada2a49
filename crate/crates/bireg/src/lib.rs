//! Random biregular bipartite graphs at desk scale.
//!
//! A `p`-biregular graph is a subgraph of the complete bipartite graph
//! `K_{n1,n2}` in which every left vertex has degree `d1 = p*n2` and every
//! right vertex has degree `d2 = p*n1`. This crate provides the machinery
//! needed to study couplings between the uniform biregular model and the
//! Erdős–Rényi models `G(n1,n2,m)` / `G(n1,n2,p)` with everything that can
//! be checked exactly checked exactly:
//!
//! * [`enumerate`] — exact counting, listing and unranking of biregular
//!   graphs under forced/forbidden edge constraints, exact conditional
//!   edge probabilities, co-degree class counts, switching-ratio checks,
//!   and the Canfield–Greenhill–McKay asymptotic estimate.
//! * [`sample`] — exactly uniform sampling (by unranking), a 4-cycle swap
//!   Markov chain, the `G(n1,n2,m)`/`G(n1,n2,p)` models, and the uniform
//!   edge-revealing process `R(t)`.
//! * [`schedule`] — every parameter of the coupling schedule (balance
//!   indicator, `tau0`, `t0`, `gamma_t`, `delta(t)`, `lambda(t)`, `theta`,
//!   `gamma`, `m`) with an explicit constant-override mode for desk scale.
//! * [`couple`] — the edge-by-edge coupling of the uniform edge ordering of
//!   a biregular graph with the Erdős–Rényi edge process, the sandwich
//!   extraction `G(m) ⊆ H`, and its complement (upper) counterpart.
//! * [`pseudo`] — pseudorandomness verifiers: (pi,delta)-jumbledness,
//!   Thomason's degree/co-degree criterion, (r,b,delta)-regularity of
//!   blue-red colorings, alternating-walk reachability and alternating
//!   cycle search.
//! * [`experiments`] — Monte-Carlo and exact harnesses confronting the
//!   concentration statements with data, emitting CSV/JSON reports.
//!
//! Exact quantities are kept in exact arithmetic end to end: probabilities
//! are `BigRational`s, counts are `BigUint`s, and the only floating point
//! appears where formulas genuinely involve logs or roots.

pub mod colored;
pub mod couple;
pub mod enumerate;
pub mod experiments;
pub mod graph;
pub mod matching;
pub mod numeric;
pub mod params;
pub mod pseudo;
pub mod sample;
pub mod schedule;
pub mod stats;

pub use colored::{AltWalk, BlueRed, Color, ColoredInstance};
pub use graph::{BipartiteGraph, Edge, Side, Vertex};
pub use params::BiregularParams;
