//! Successive-shortest-path min-cost flow on small dense graphs.
//!
//! Costs are `f64`. Initial potentials come from Bellman-Ford, so negative
//! edge costs are allowed as long as there is no negative cycle.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone)]
struct Edge {
    to: usize,
    cap: i64,
    cost: f64,
}

#[derive(Debug, Clone)]
pub struct MinCostFlow {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl MinCostFlow {
    pub fn new(nodes: usize) -> Self {
        Self {
            edges: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    /// Adds `from -> to`; returns the edge id (its twin is `id ^ 1`).
    pub fn add_edge(&mut self, from: usize, to: usize, cap: i64, cost: f64) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge { to, cap, cost });
        self.edges.push(Edge {
            to: from,
            cap: 0,
            cost: -cost,
        });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }

    /// Flow currently pushed through edge `id`.
    pub fn flow(&self, id: usize) -> i64 {
        self.edges[id ^ 1].cap
    }

    fn bellman_ford(&self, source: usize) -> Vec<f64> {
        let n = self.adj.len();
        let mut dist = vec![f64::INFINITY; n];
        dist[source] = 0.0;
        for _ in 0..n {
            let mut changed = false;
            for u in 0..n {
                if dist[u] == f64::INFINITY {
                    continue;
                }
                for &e in &self.adj[u] {
                    let edge = &self.edges[e];
                    if edge.cap > 0 && dist[u] + edge.cost < dist[edge.to] {
                        dist[edge.to] = dist[u] + edge.cost;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        dist
    }

    /// Pushes up to `demand` units from `source` to `sink` at minimum cost.
    /// Returns `(flow, cost)`.
    pub fn run(&mut self, source: usize, sink: usize, demand: i64) -> (i64, f64) {
        let n = self.adj.len();
        let mut potential: Vec<f64> = self
            .bellman_ford(source)
            .into_iter()
            .map(|d| if d.is_finite() { d } else { 0.0 })
            .collect();
        let (mut flow, mut cost) = (0i64, 0.0f64);
        let mut dist = vec![f64::INFINITY; n];
        let mut prev_edge = vec![usize::MAX; n];
        let mut done = vec![false; n];

        while flow < demand {
            dist.iter_mut().for_each(|d| *d = f64::INFINITY);
            prev_edge.iter_mut().for_each(|p| *p = usize::MAX);
            done.iter_mut().for_each(|d| *d = false);
            dist[source] = 0.0;
            loop {
                let mut u = usize::MAX;
                let mut best = f64::INFINITY;
                for v in 0..n {
                    if !done[v] && dist[v] < best {
                        best = dist[v];
                        u = v;
                    }
                }
                if u == usize::MAX {
                    break;
                }
                done[u] = true;
                for &e in &self.adj[u] {
                    let edge = &self.edges[e];
                    if edge.cap <= 0 || done[edge.to] {
                        continue;
                    }
                    // Reduced costs are non-negative up to rounding.
                    let reduced = (edge.cost + potential[u] - potential[edge.to]).max(0.0);
                    let nd = dist[u] + reduced;
                    if nd < dist[edge.to] {
                        dist[edge.to] = nd;
                        prev_edge[edge.to] = e;
                    }
                }
            }
            if dist[sink] == f64::INFINITY {
                break;
            }
            for v in 0..n {
                if dist[v].is_finite() {
                    potential[v] += dist[v];
                }
            }
            let mut push = demand - flow;
            let mut v = sink;
            while v != source {
                let e = prev_edge[v];
                push = push.min(self.edges[e].cap);
                v = self.edges[e ^ 1].to;
            }
            let mut v = sink;
            while v != source {
                let e = prev_edge[v];
                self.edges[e].cap -= push;
                self.edges[e ^ 1].cap += push;
                cost += push as f64 * self.edges[e].cost;
                v = self.edges[e ^ 1].to;
            }
            flow += push;
        }
        (flow, cost)
    }
}

/// Min-cost assignment of every row to a distinct column (`rows <= cols`).
/// `cost[r][c] = +inf` forbids the pair. Returns the column of each row.
pub fn assign_rows(cost: &[Vec<f64>], cols: usize) -> Option<Vec<usize>> {
    let rows = cost.len();
    if rows > cols {
        return None;
    }
    let source = 0;
    let sink = 1 + rows + cols;
    let mut g = MinCostFlow::new(sink + 1);
    for r in 0..rows {
        g.add_edge(source, 1 + r, 1, 0.0);
    }
    for c in 0..cols {
        g.add_edge(1 + rows + c, sink, 1, 0.0);
    }
    let mut pair_edges = Vec::new();
    for (r, row) in cost.iter().enumerate() {
        for (c, &w) in row.iter().enumerate() {
            if w.is_finite() {
                pair_edges.push((r, c, g.add_edge(1 + r, 1 + rows + c, 1, w)));
            }
        }
    }
    let (flow, _) = g.run(source, sink, rows as i64);
    if flow < rows as i64 {
        return None;
    }
    let mut out = vec![usize::MAX; rows];
    for (r, c, e) in pair_edges {
        if g.flow(e) > 0 {
            out[r] = c;
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(cost: &[Vec<f64>], cols: usize) -> f64 {
        fn go(cost: &[Vec<f64>], r: usize, used: &mut Vec<bool>, acc: f64, best: &mut f64) {
            if r == cost.len() {
                *best = best.min(acc);
                return;
            }
            for c in 0..used.len() {
                if !used[c] && cost[r][c].is_finite() {
                    used[c] = true;
                    go(cost, r + 1, used, acc + cost[r][c], best);
                    used[c] = false;
                }
            }
        }
        let mut best = f64::INFINITY;
        go(cost, 0, &mut vec![false; cols], 0.0, &mut best);
        best
    }

    #[test]
    fn matches_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let rows = rng.gen_range(1..=4);
            let cols = rng.gen_range(rows..=6);
            let cost: Vec<Vec<f64>> = (0..rows)
                .map(|_| {
                    (0..cols)
                        .map(|_| {
                            if rng.gen_bool(0.1) {
                                f64::INFINITY
                            } else {
                                rng.gen_range(0.0..10.0)
                            }
                        })
                        .collect()
                })
                .collect();
            let expect = brute(&cost, cols);
            match assign_rows(&cost, cols) {
                Some(cols_of) => {
                    let got: f64 = cols_of.iter().enumerate().map(|(r, &c)| cost[r][c]).sum();
                    assert!((got - expect).abs() < 1e-9, "{got} vs {expect}");
                    let mut seen = cols_of.clone();
                    seen.sort();
                    seen.dedup();
                    assert_eq!(seen.len(), rows);
                }
                None => assert!(expect.is_infinite()),
            }
        }
    }

    #[test]
    fn negative_costs() {
        let mut g = MinCostFlow::new(4);
        g.add_edge(0, 1, 1, -5.0);
        g.add_edge(0, 2, 1, 1.0);
        g.add_edge(1, 3, 1, 2.0);
        g.add_edge(2, 3, 1, -1.0);
        let (f, c) = g.run(0, 3, 2);
        assert_eq!(f, 2);
        assert!((c - (-3.0)).abs() < 1e-12);
    }

    #[test]
    fn too_many_rows() {
        assert_eq!(assign_rows(&[vec![1.0], vec![2.0]], 1), None);
    }
}
