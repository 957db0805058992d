//! Exact maximum flow (Edmonds–Karp) over rational capacities.
//!
//! With integral capacities every augmenting path carries an integral amount,
//! so the same solver yields integer couplings for multisets and rational
//! couplings for distributions.

use std::collections::VecDeque;

use crate::rat::Rat;

#[derive(Debug, Clone)]
struct Edge {
    to: usize,
    rev: usize,
    cap: Rat,
}

#[derive(Debug, Clone)]
pub struct FlowNetwork {
    adj: Vec<Vec<Edge>>,
    // (node, index in adj[node], original capacity) for every forward edge
    forward: Vec<(usize, usize, Rat)>,
}

/// Handle to an edge added with [`FlowNetwork::add_edge`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeId(usize);

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork { adj: vec![Vec::new(); nodes], forward: Vec::new() }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, cap: Rat) -> EdgeId {
        let (fi, ti) = (self.adj[from].len(), self.adj[to].len() + usize::from(from == to));
        self.adj[from].push(Edge { to, rev: ti, cap });
        self.adj[to].push(Edge { to: from, rev: fi, cap: Rat::ZERO });
        self.forward.push((from, fi, cap));
        EdgeId(self.forward.len() - 1)
    }

    /// Flow currently routed through `edge`.
    pub fn flow(&self, edge: EdgeId) -> Rat {
        let (node, idx, cap) = self.forward[edge.0];
        cap - self.adj[node][idx].cap
    }

    pub fn max_flow(&mut self, source: usize, sink: usize) -> Rat {
        let mut total = Rat::ZERO;
        if source == sink {
            return total;
        }
        loop {
            // BFS for a shortest augmenting path
            let mut prev: Vec<Option<(usize, usize)>> = vec![None; self.adj.len()];
            let mut queue = VecDeque::from([source]);
            let mut reached = false;
            while let Some(v) = queue.pop_front() {
                for (i, e) in self.adj[v].iter().enumerate() {
                    if e.cap.is_positive() && prev[e.to].is_none() && e.to != source {
                        prev[e.to] = Some((v, i));
                        if e.to == sink {
                            reached = true;
                            break;
                        }
                        queue.push_back(e.to);
                    }
                }
                if reached {
                    break;
                }
            }
            if !reached {
                return total;
            }
            let mut bottleneck: Option<Rat> = None;
            let mut v = sink;
            while let Some((u, i)) = prev[v] {
                let c = self.adj[u][i].cap;
                bottleneck = Some(bottleneck.map_or(c, |b| b.min(c)));
                v = u;
            }
            let f = bottleneck.unwrap_or(Rat::ZERO);
            let mut v = sink;
            while let Some((u, i)) = prev[v] {
                self.adj[u][i].cap -= f;
                let rev = self.adj[u][i].rev;
                self.adj[v][rev].cap += f;
                v = u;
            }
            total += f;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_bipartite_flow() {
        // 1/2,1/2 against 1/3,1/3,1/3 with a complete bipartite middle
        let mut net = FlowNetwork::new(7);
        let (s, t) = (0, 6);
        net.add_edge(s, 1, Rat::new(1, 2));
        net.add_edge(s, 2, Rat::new(1, 2));
        for l in 1..=2 {
            for r in 3..=5 {
                net.add_edge(l, r, Rat::ONE);
            }
        }
        for r in 3..=5 {
            net.add_edge(r, t, Rat::new(1, 3));
        }
        assert_eq!(net.max_flow(s, t), Rat::ONE);
    }

    #[test]
    fn integral_capacities_give_integral_flows() {
        let mut net = FlowNetwork::new(4);
        let a = net.add_edge(0, 1, Rat::from(3));
        let b = net.add_edge(0, 2, Rat::from(2));
        let c = net.add_edge(1, 2, Rat::from(1));
        net.add_edge(1, 3, Rat::from(2));
        net.add_edge(2, 3, Rat::from(5));
        assert_eq!(net.max_flow(0, 3), Rat::from(5));
        for e in [a, b, c] {
            assert!(net.flow(e).is_integer());
        }
    }
}
