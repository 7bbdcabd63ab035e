//! Shortest-augmenting-path (Edmonds–Karp) maximum flow.

use std::collections::VecDeque;

use crate::set::Subset;

/// Residual capacities at or below this value are treated as saturated.
pub const RESIDUAL_EPS: f64 = 1e-12;

/// A directed network with distinguished source and sink.
#[derive(Debug, Clone)]
pub struct StNetwork {
    pub n: usize,
    pub source: usize,
    pub sink: usize,
    pub arcs: Vec<(usize, usize, f64)>,
}

impl StNetwork {
    pub fn new(n: usize, source: usize, sink: usize) -> Self {
        assert!(source < n && sink < n && source != sink, "invalid terminals");
        StNetwork { n, source, sink, arcs: Vec::new() }
    }

    /// Adds an arc; zero capacities and self-loops are ignored.
    pub fn add_arc(&mut self, u: usize, v: usize, cap: f64) {
        assert!(cap >= 0.0, "negative capacity");
        if cap > 0.0 && u != v {
            self.arcs.push((u, v, cap));
        }
    }

    /// Capacity of the cut `(S, V∖S)`.
    pub fn cut_capacity(&self, side: &Subset) -> f64 {
        self.arcs.iter().filter(|&&(u, v, _)| side.contains(u) && !side.contains(v)).map(|a| a.2).sum()
    }
}

#[derive(Debug, Clone)]
pub struct MaxFlowResult {
    pub value: f64,
    /// Flow on each arc of the network, in input order.
    pub flows: Vec<f64>,
    /// Vertices reachable from the source in the residual graph (smallest minimum cut).
    pub minimal_source_side: Subset,
    /// Vertices that cannot reach the sink in the residual graph (largest minimum cut).
    pub maximal_source_side: Subset,
}

struct Residual {
    head: Vec<usize>,
    cap: Vec<f64>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn build(net: &StNetwork) -> Self {
        let m = net.arcs.len();
        let mut r = Residual { head: Vec::with_capacity(2 * m), cap: Vec::with_capacity(2 * m), adj: vec![Vec::new(); net.n] };
        for &(u, v, c) in &net.arcs {
            r.adj[u].push(r.head.len());
            r.head.push(v);
            r.cap.push(c);
            r.adj[v].push(r.head.len());
            r.head.push(u);
            r.cap.push(0.0);
        }
        r
    }
}

/// Maximum `source → sink` flow and the extreme minimum cuts.
pub fn max_flow(net: &StNetwork) -> MaxFlowResult {
    let mut r = Residual::build(net);
    let (s, t) = (net.source, net.sink);
    let mut value = 0.0;
    let mut pred = vec![usize::MAX; net.n];
    loop {
        pred.iter_mut().for_each(|x| *x = usize::MAX);
        let mut queue = VecDeque::from([s]);
        let mut seen = vec![false; net.n];
        seen[s] = true;
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for &e in &r.adj[u] {
                let v = r.head[e];
                if !seen[v] && r.cap[e] > RESIDUAL_EPS {
                    seen[v] = true;
                    pred[v] = e;
                    queue.push_back(v);
                }
            }
        }
        if !seen[t] {
            break;
        }
        let mut bottleneck = f64::INFINITY;
        let mut v = t;
        while v != s {
            let e = pred[v];
            bottleneck = bottleneck.min(r.cap[e]);
            v = r.head[e ^ 1];
        }
        if !bottleneck.is_finite() {
            // an infinite-capacity path: the cut is unbounded
            value = f64::INFINITY;
            break;
        }
        let mut v = t;
        while v != s {
            let e = pred[v];
            r.cap[e] -= bottleneck;
            r.cap[e ^ 1] += bottleneck;
            v = r.head[e ^ 1];
        }
        value += bottleneck;
    }
    let flows = (0..net.arcs.len()).map(|i| r.cap[2 * i + 1]).collect();
    let minimal = reach(&r, net.n, s, false);
    let to_sink = reach(&r, net.n, t, true);
    MaxFlowResult { value, flows, minimal_source_side: minimal, maximal_source_side: to_sink.complement() }
}

/// Vertices reachable from `root` through residual arcs (or reaching it when `reverse`).
fn reach(r: &Residual, n: usize, root: usize, reverse: bool) -> Subset {
    let mut seen = Subset::empty(n);
    seen.insert(root);
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        for &e in &r.adj[u] {
            let v = r.head[e];
            // forward: arc u->v usable if cap[e] > eps; reverse: arc v->u usable if cap[e^1] > eps
            let usable = if reverse { r.cap[e ^ 1] > RESIDUAL_EPS } else { r.cap[e] > RESIDUAL_EPS };
            if usable && !seen.contains(v) {
                seen.insert(v);
                stack.push(v);
            }
        }
    }
    seen
}

/// Largest violation of capacity or conservation constraints by `flows`.
pub fn flow_violation(net: &StNetwork, flows: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    let mut excess = vec![0.0; net.n];
    for (&(u, v, c), &f) in net.arcs.iter().zip(flows) {
        worst = worst.max(-f).max(f - c);
        excess[u] -= f;
        excess[v] += f;
    }
    for (i, e) in excess.iter().enumerate() {
        if i != net.source && i != net.sink {
            worst = worst.max(e.abs());
        }
    }
    worst
}
