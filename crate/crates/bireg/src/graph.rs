//! Bitset bipartite graphs.
//!
//! The adjacency is a row-major bit matrix: row `i` holds the V2-neighbors
//! of the left vertex `i`. Co-degrees and the blue-red path statistic are
//! AND+popcount over rows, which is the innermost kernel of every
//! experiment, so rows are kept in machine words.

use crate::params::BiregularParams;
use serde::Serialize;
use std::fmt;
use std::io::{self, BufRead, Write};
use thiserror::Error;

/// An edge `(i, j)` with `i` in V1 and `j` in V2.
pub type Edge = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    V1,
    V2,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::V1 => Side::V2,
            Side::V2 => Side::V1,
        }
    }
}

/// A vertex of the bipartition, identified by side and dense index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Vertex {
    pub side: Side,
    pub index: usize,
}

impl Vertex {
    pub fn v1(index: usize) -> Self {
        Vertex { side: Side::V1, index }
    }

    pub fn v2(index: usize) -> Self {
        Vertex { side: Side::V2, index }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::V1 => write!(f, "u{}", self.index),
            Side::V2 => write!(f, "w{}", self.index),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex index out of range: {0:?}")]
    VertexOutOfRange(Vertex),
    #[error("edge ({0}, {1}) out of range")]
    EdgeOutOfRange(usize, usize),
    #[error("the two vertices coincide")]
    SameVertex,
    #[error("the two vertices lie on different sides")]
    SideMismatch,
    #[error("dimension mismatch: ({0}, {1}) vs ({2}, {3})")]
    DimMismatch(usize, usize, usize, usize),
    #[error("bad edge-list input: {0}")]
    BadEdgeList(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<io::Error> for GraphError {
    fn from(e: io::Error) -> Self {
        GraphError::Io(e.to_string())
    }
}

/// Subgraph of the complete bipartite graph `K_{n1,n2}` as a bit matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BipartiteGraph {
    n1: usize,
    n2: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl BipartiteGraph {
    pub fn empty(n1: usize, n2: usize) -> Self {
        let stride = n2.div_ceil(64).max(1);
        BipartiteGraph { n1, n2, stride, bits: vec![0; stride * n1] }
    }

    pub fn complete(n1: usize, n2: usize) -> Self {
        let mut g = Self::empty(n1, n2);
        for i in 0..n1 {
            for j in 0..n2 {
                g.add_edge(i, j);
            }
        }
        g
    }

    pub fn from_edges(n1: usize, n2: usize, edges: &[Edge]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n1, n2);
        for &(i, j) in edges {
            if i >= n1 || j >= n2 {
                return Err(GraphError::EdgeOutOfRange(i, j));
            }
            g.add_edge(i, j);
        }
        Ok(g)
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn same_dims(&self, other: &Self) -> bool {
        self.n1 == other.n1 && self.n2 == other.n2
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.n1 && j < self.n2);
        self.bits[i * self.stride + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn add_edge(&mut self, i: usize, j: usize) {
        debug_assert!(i < self.n1 && j < self.n2);
        self.bits[i * self.stride + j / 64] |= 1 << (j % 64);
    }

    #[inline]
    pub fn remove_edge(&mut self, i: usize, j: usize) {
        debug_assert!(i < self.n1 && j < self.n2);
        self.bits[i * self.stride + j / 64] &= !(1 << (j % 64));
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.stride..(i + 1) * self.stride]
    }

    /// Edge count = popcount of the bit matrix.
    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degree_v1(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degree_v2(&self, j: usize) -> usize {
        (0..self.n1).filter(|&i| self.has_edge(i, j)).count()
    }

    pub fn degree(&self, v: Vertex) -> usize {
        match v.side {
            Side::V1 => self.degree_v1(v.index),
            Side::V2 => self.degree_v2(v.index),
        }
    }

    /// Edges in deterministic row-major order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.n1 {
            for j in 0..self.n2 {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Every row has popcount `d1` and every column popcount `d2`.
    pub fn is_biregular(&self, params: &BiregularParams) -> bool {
        let Some((n1, n2)) = params.dims() else { return false };
        if (self.n1, self.n2) != (n1, n2) {
            return false;
        }
        let d1 = params.d1() as usize;
        let d2 = params.d2() as usize;
        (0..self.n1).all(|i| self.degree_v1(i) == d1)
            && (0..self.n2).all(|j| self.degree_v2(j) == d2)
    }

    /// `K \ self`. The complement of a p-biregular graph is q-biregular.
    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.n1 {
            let base = i * self.stride;
            for w in 0..self.stride {
                out.bits[base + w] = !self.bits[base + w];
            }
            // mask tail bits beyond n2
            let tail = self.n2 % 64;
            if tail != 0 {
                let last = base + (self.n2 - 1) / 64;
                out.bits[last] &= (1u64 << tail) - 1;
            }
        }
        out
    }

    pub fn union(&self, other: &Self) -> Self {
        assert!(self.same_dims(other));
        let mut out = self.clone();
        for (w, o) in out.bits.iter_mut().zip(&other.bits) {
            *w |= o;
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        assert!(self.same_dims(other));
        let mut out = self.clone();
        for (w, o) in out.bits.iter_mut().zip(&other.bits) {
            *w &= !o;
        }
        out
    }

    pub fn intersect(&self, other: &Self) -> Self {
        assert!(self.same_dims(other));
        let mut out = self.clone();
        for (w, o) in out.bits.iter_mut().zip(&other.bits) {
            *w &= o;
        }
        out
    }

    pub fn is_subgraph_of(&self, other: &Self) -> bool {
        self.same_dims(other) && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint_from(&self, other: &Self) -> bool {
        self.same_dims(other) && self.bits.iter().zip(&other.bits).all(|(a, b)| a & b == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut out = BipartiteGraph::empty(self.n2, self.n1);
        for i in 0..self.n1 {
            for j in 0..self.n2 {
                if self.has_edge(i, j) {
                    out.add_edge(j, i);
                }
            }
        }
        out
    }

    /// Number of common neighbors of two same-side vertices.
    pub fn codegree(&self, u: Vertex, v: Vertex) -> Result<usize, GraphError> {
        if u.side != v.side {
            return Err(GraphError::SideMismatch);
        }
        if u == v {
            return Err(GraphError::SameVertex);
        }
        let bound = match u.side {
            Side::V1 => self.n1,
            Side::V2 => self.n2,
        };
        if u.index >= bound || v.index >= bound {
            let bad = if u.index >= bound { u } else { v };
            return Err(GraphError::VertexOutOfRange(bad));
        }
        Ok(match u.side {
            Side::V1 => row_and_popcount(self.row(u.index), self.row(v.index)),
            Side::V2 => (0..self.n1)
                .filter(|&i| self.has_edge(i, u.index) && self.has_edge(i, v.index))
                .count(),
        })
    }

    /// Edge count between `A ⊆ V1` (given as a bitmask over rows, n1 ≤ 64)
    /// and `B ⊆ V2` (bitmask over columns, n2 ≤ 64).
    pub fn edges_between_masks(&self, a: u64, b: u64) -> usize {
        debug_assert!(self.n1 <= 64 && self.n2 <= 64);
        let mut total = 0usize;
        let mut rows = a;
        while rows != 0 {
            let i = rows.trailing_zeros() as usize;
            rows &= rows - 1;
            total += (self.row_mask(i) & b).count_ones() as usize;
        }
        total
    }

    /// First word of row `i`; only meaningful when n2 ≤ 64.
    #[inline]
    pub fn row_mask(&self, i: usize) -> u64 {
        self.bits[i * self.stride]
    }

    /// Header line `n1 n2`, then one `i j` line per edge in row-major order.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<(), GraphError> {
        writeln!(w, "{} {}", self.n1, self.n2)?;
        for (i, j) in self.edges() {
            writeln!(w, "{} {}", i, j)?;
        }
        Ok(())
    }

    pub fn read_edge_list<R: BufRead>(r: R) -> Result<Self, GraphError> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| GraphError::BadEdgeList("empty input".into()))??;
        let (n1, n2) = parse_pair(&header)?;
        let mut g = BipartiteGraph::empty(n1, n2);
        for line in lines {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let (i, j) = parse_pair(trimmed)?;
            if i >= n1 || j >= n2 {
                return Err(GraphError::EdgeOutOfRange(i, j));
            }
            g.add_edge(i, j);
        }
        Ok(g)
    }
}

fn parse_pair(s: &str) -> Result<(usize, usize), GraphError> {
    let mut it = s.split_whitespace();
    let a = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| GraphError::BadEdgeList(s.to_string()))?;
    let b = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| GraphError::BadEdgeList(s.to_string()))?;
    if it.next().is_some() {
        return Err(GraphError::BadEdgeList(s.to_string()));
    }
    Ok((a, b))
}

fn row_and_popcount(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

// Compact debug rendering: rows as 0/1 strings.
impl fmt::Debug for BipartiteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BipartiteGraph({}x{})[", self.n1, self.n2)?;
        for i in 0..self.n1 {
            if i > 0 {
                write!(f, "|")?;
            }
            for j in 0..self.n2 {
                write!(f, "{}", if self.has_edge(i, j) { '1' } else { '0' })?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::BiregularParams;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn params(n1: u64, n2: u64, a: u64, b: u64) -> BiregularParams {
        BiregularParams::new(n1, n2, BigRational::new(BigInt::from(a), BigInt::from(b))).unwrap()
    }

    #[test]
    fn complement_of_empty_is_complete() {
        let g = BipartiteGraph::empty(3, 3);
        assert_eq!(g.complement(), BipartiteGraph::complete(3, 3));
    }

    #[test]
    fn codegree_of_complete_and_empty() {
        let k = BipartiteGraph::complete(3, 3);
        assert_eq!(k.codegree(Vertex::v1(0), Vertex::v1(2)).unwrap(), 3);
        assert_eq!(k.codegree(Vertex::v2(0), Vertex::v2(1)).unwrap(), 3);
        let e = BipartiteGraph::empty(3, 3);
        assert_eq!(e.codegree(Vertex::v1(0), Vertex::v1(1)).unwrap(), 0);
    }

    #[test]
    fn codegree_errors() {
        let k = BipartiteGraph::complete(3, 3);
        assert_eq!(
            k.codegree(Vertex::v1(0), Vertex::v1(0)),
            Err(GraphError::SameVertex)
        );
        assert_eq!(
            k.codegree(Vertex::v1(0), Vertex::v2(1)),
            Err(GraphError::SideMismatch)
        );
    }

    #[test]
    fn biregular_flag() {
        let p = params(4, 4, 1, 2);
        let g = BipartiteGraph::from_edges(
            4,
            4,
            &[(0, 0), (0, 1), (1, 2), (1, 3), (2, 0), (2, 2), (3, 1), (3, 3)],
        )
        .unwrap();
        assert!(g.is_biregular(&p));
        let mut h = g.clone();
        h.remove_edge(0, 0);
        h.add_edge(0, 2);
        assert!(!h.is_biregular(&p));
    }

    #[test]
    fn edge_list_round_trip() {
        let g = BipartiteGraph::from_edges(3, 5, &[(0, 4), (2, 0), (1, 3)]).unwrap();
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        // header + row-major deterministic order
        assert_eq!(text, "3 5\n0 4\n1 3\n2 0\n");
        let back = BipartiteGraph::read_edge_list(buf.as_slice()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn wide_rows_cross_word_boundary() {
        let mut g = BipartiteGraph::empty(2, 130);
        g.add_edge(0, 0);
        g.add_edge(0, 64);
        g.add_edge(0, 129);
        g.add_edge(1, 129);
        assert_eq!(g.degree_v1(0), 3);
        assert_eq!(g.degree_v2(129), 2);
        assert_eq!(g.complement().degree_v1(0), 127);
        assert_eq!(
            g.codegree(Vertex::v1(0), Vertex::v1(1)).unwrap(),
            1
        );
    }

    proptest! {
        #[test]
        fn complement_is_involution(edges in proptest::collection::vec((0usize..5, 0usize..7), 0..20)) {
            let g = BipartiteGraph::from_edges(5, 7, &edges).unwrap();
            prop_assert_eq!(g.complement().complement(), g);
        }

        #[test]
        fn degree_sums_match_edge_count(edges in proptest::collection::vec((0usize..6, 0usize..6), 0..25)) {
            let g = BipartiteGraph::from_edges(6, 6, &edges).unwrap();
            let s1: usize = (0..6).map(|i| g.degree_v1(i)).sum();
            let s2: usize = (0..6).map(|j| g.degree_v2(j)).sum();
            prop_assert_eq!(s1, g.edge_count());
            prop_assert_eq!(s2, g.edge_count());
        }

        #[test]
        fn codegree_complement_duality(edges in proptest::collection::vec((0usize..6, 0usize..6), 0..25)) {
            // cod_F(u,v) = deg_F(u) + deg_F(v) - (n2 - cod_{K\F}(u,v))
            let f = BipartiteGraph::from_edges(6, 6, &edges).unwrap();
            let co = f.complement();
            for u in 0..6 {
                for v in (u + 1)..6 {
                    let lhs = f.codegree(Vertex::v1(u), Vertex::v1(v)).unwrap() as i64;
                    let rhs = f.degree_v1(u) as i64 + f.degree_v1(v) as i64
                        - (6 - co.codegree(Vertex::v1(u), Vertex::v1(v)).unwrap( ) as i64);
                    prop_assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
