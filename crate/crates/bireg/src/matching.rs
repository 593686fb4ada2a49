//! Hopcroft–Karp maximum matching for the perfect-matching application.

use crate::graph::BipartiteGraph;
use std::collections::VecDeque;

const NIL: usize = usize::MAX;

/// Size of a maximum matching of the bipartite graph.
pub fn maximum_matching(g: &BipartiteGraph) -> usize {
    let (n1, n2) = (g.n1(), g.n2());
    let adj: Vec<Vec<usize>> = (0..n1)
        .map(|i| (0..n2).filter(|&j| g.has_edge(i, j)).collect())
        .collect();
    let mut match_left = vec![NIL; n1];
    let mut match_right = vec![NIL; n2];
    let mut dist = vec![0usize; n1];
    let mut matching = 0;
    loop {
        // BFS layering from the free left vertices
        let mut queue = VecDeque::new();
        for u in 0..n1 {
            if match_left[u] == NIL {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found_free = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                match match_right[v] {
                    NIL => found_free = true,
                    w if dist[w] == usize::MAX => {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                    _ => {}
                }
            }
        }
        if !found_free {
            break;
        }
        // DFS augmentation along the layers
        fn try_augment(
            u: usize,
            adj: &[Vec<usize>],
            match_left: &mut [usize],
            match_right: &mut [usize],
            dist: &mut [usize],
        ) -> bool {
            for idx in 0..adj[u].len() {
                let v = adj[u][idx];
                let w = match_right[v];
                if w == NIL
                    || (dist[w] == dist[u] + 1
                        && try_augment(w, adj, match_left, match_right, dist))
                {
                    match_left[u] = v;
                    match_right[v] = u;
                    return true;
                }
            }
            dist[u] = usize::MAX;
            false
        }
        for u in 0..n1 {
            if match_left[u] == NIL
                && try_augment(u, &adj, &mut match_left, &mut match_right, &mut dist)
            {
                matching += 1;
            }
        }
    }
    matching
}

/// Does the subgraph induced by the given vertex subsets contain a perfect
/// matching (saturating both)?
pub fn has_perfect_matching_on(g: &BipartiteGraph, left: &[usize], right: &[usize]) -> bool {
    if left.len() != right.len() {
        return false;
    }
    let mut induced = BipartiteGraph::empty(left.len(), right.len());
    for (a, &i) in left.iter().enumerate() {
        for (b, &j) in right.iter().enumerate() {
            if g.has_edge(i, j) {
                induced.add_edge(a, b);
            }
        }
    }
    maximum_matching(&induced) == left.len()
}
