//! Temporal TSP with costs in {1, 2}.
//!
//! The instance is a complete undirected graph available at every time
//! `1..=L`; traversing `{u, v}` at time `t` costs `c(u, v, t) ∈ {1, 2}`. A
//! tour visits every node once and returns to its start with strictly
//! increasing times (waiting is free).

use std::fmt::Write as _;

use rayon::prelude::*;

use super::matching::{conflict_graph, greedy_independent_set};
use crate::error::{Error, Result};
use crate::format::{content_lines, field};
use crate::graph::{NodeId, TemporalGraph, Time};

pub const TTSP_MAX_NODES: usize = 8;
pub const TTSP_MAX_LIFETIME: Time = 200;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TtspInstance {
    n: usize,
    lifetime: Time,
    /// `cost[pair][t − 1]`, pairs indexed by [`pair_index`].
    cost: Vec<Vec<u8>>,
}

fn pair_index(n: usize, u: NodeId, v: NodeId) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    a * n + b
}

impl TtspInstance {
    /// Every cost defaults to 2.
    pub fn new(n: usize, lifetime: Time) -> Result<Self> {
        if n < 2 {
            return Err(Error::Invalid("a tour needs at least 2 nodes".into()));
        }
        if lifetime > TTSP_MAX_LIFETIME * 1000 {
            return Err(Error::TooLarge(format!("lifetime {lifetime}")));
        }
        Ok(TtspInstance { n, lifetime, cost: vec![vec![2; lifetime as usize]; n * n] })
    }

    pub fn uniform(n: usize, lifetime: Time, c: u8) -> Result<Self> {
        let mut inst = Self::new(n, lifetime)?;
        for row in &mut inst.cost {
            row.fill(c);
        }
        Ok(inst)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn lifetime(&self) -> Time {
        self.lifetime
    }

    pub fn cost(&self, u: NodeId, v: NodeId, t: Time) -> u8 {
        self.cost[pair_index(self.n, u, v)][(t - 1) as usize]
    }

    pub fn set_cost(&mut self, u: NodeId, v: NodeId, t: Time, c: u8) -> Result<()> {
        if u >= self.n || v >= self.n || u == v {
            return Err(Error::InvalidEdge(format!("({u}, {v})")));
        }
        if t == 0 || t > self.lifetime {
            return Err(Error::Invalid(format!("time {t} outside 1..={}", self.lifetime)));
        }
        if c != 1 && c != 2 {
            return Err(Error::Invalid(format!("cost {c} is not 1 or 2")));
        }
        self.cost[pair_index(self.n, u, v)][(t - 1) as usize] = c;
        Ok(())
    }

    /// Undirected temporal graph of the cost-1 time-edges.
    pub fn cheap_graph(&self) -> TemporalGraph {
        let specs = (0..self.n).flat_map(|u| {
            (u + 1..self.n).map(move |v| {
                let labels: Vec<Time> = (1..=self.lifetime).filter(|&t| self.cost(u, v, t) == 1).collect();
                (u, v, labels)
            })
        });
        TemporalGraph::build(self.n, false, specs).expect("valid pairs")
    }
}

/// `ttsp <n> <L>` then `u v t c` lines; unlisted entries cost 2.
pub fn parse_ttsp(text: &str) -> Result<TtspInstance> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing `ttsp` header"))?;
    if header.len() != 3 || header[0] != "ttsp" {
        return Err(Error::parse(hline, "expected `ttsp <n> <L>`"));
    }
    let n: usize = field(hline, "node count", header[1])?;
    let lifetime: Time = field(hline, "lifetime", header[2])?;
    let mut inst = TtspInstance::new(n, lifetime).map_err(|e| Error::parse(hline, e.to_string()))?;
    for (line, f) in lines {
        if f.len() != 4 {
            return Err(Error::parse(line, "expected `u v t c`"));
        }
        let u: NodeId = field(line, "node", f[0])?;
        let v: NodeId = field(line, "node", f[1])?;
        let t: Time = field(line, "time", f[2])?;
        let c: u8 = field(line, "cost", f[3])?;
        inst.set_cost(u, v, t, c).map_err(|e| Error::parse(line, e.to_string()))?;
    }
    Ok(inst)
}

/// Canonical form listing every entry.
pub fn to_ttsp(inst: &TtspInstance) -> String {
    let mut out = format!("ttsp {} {}\n", inst.n, inst.lifetime);
    for u in 0..inst.n {
        for v in u + 1..inst.n {
            for t in 1..=inst.lifetime {
                let _ = writeln!(out, "{u} {v} {t} {}", inst.cost(u, v, t));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalTour {
    /// A permutation; hop `i` goes from `nodes[i]` to `nodes[(i + 1) % n]`.
    pub nodes: Vec<NodeId>,
    /// Strictly increasing, one per hop.
    pub times: Vec<Time>,
    pub cost: u64,
}

impl std::fmt::Display for TemporalTour {
    /// `node t node t ... node t` followed by the start node.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (v, t) in self.nodes.iter().zip(&self.times) {
            write!(f, "{v} {t} ")?;
        }
        write!(f, "{}", self.nodes[0])
    }
}

/// Validates the tour and returns its cost.
pub fn tour_cost(inst: &TtspInstance, nodes: &[NodeId], times: &[Time]) -> Result<u64> {
    let n = inst.n;
    let mut seen = vec![false; n];
    if nodes.len() != n || times.len() != n || nodes.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true)) {
        return Err(Error::Invalid("tour is not a permutation with one time per hop".into()));
    }
    if times.windows(2).any(|w| w[0] >= w[1]) || times[0] == 0 || times[n - 1] > inst.lifetime {
        return Err(Error::Invalid("tour times must strictly increase within 1..=L".into()));
    }
    Ok((0..n).map(|i| inst.cost(nodes[i], nodes[(i + 1) % n], times[i]) as u64).sum())
}

/// Cheapest strictly increasing times for a fixed node order.
fn best_times(inst: &TtspInstance, nodes: &[NodeId]) -> Option<(u64, Vec<Time>)> {
    let n = nodes.len();
    let l = inst.lifetime as usize;
    if l < n {
        return None;
    }
    // dp[i][t]: min cost of hops 0..=i with hop i at time t+1.
    const INF: u64 = u64::MAX / 2;
    let mut dp = vec![vec![INF; l]; n];
    for (t, cell) in dp[0].iter_mut().enumerate() {
        *cell = inst.cost(nodes[0], nodes[1 % n], t as Time + 1) as u64;
    }
    for i in 1..n {
        let mut prefix = INF;
        for t in 0..l {
            if t > 0 {
                prefix = prefix.min(dp[i - 1][t - 1]);
            }
            if prefix < INF {
                dp[i][t] = prefix + inst.cost(nodes[i], nodes[(i + 1) % n], t as Time + 1) as u64;
            }
        }
    }
    let (mut t, &cost) = dp[n - 1].iter().enumerate().min_by_key(|&(t, c)| (*c, t))?;
    let mut times = vec![0; n];
    for i in (0..n).rev() {
        times[i] = t as Time + 1;
        if i > 0 {
            let want = dp[i][t] - inst.cost(nodes[i], nodes[(i + 1) % n], t as Time + 1) as u64;
            t = (0..t).rev().find(|&s| dp[i - 1][s] == want).unwrap();
        }
    }
    Some((cost, times))
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn check_feasible(inst: &TtspInstance) -> Result<()> {
    if inst.lifetime < inst.n as Time {
        return Err(Error::Infeasible(format!(
            "lifetime {} is shorter than the {} hops of a tour",
            inst.lifetime, inst.n
        )));
    }
    Ok(())
}

/// Minimum-cost tour: every node order, each with its optimal time
/// assignment. Ties go to the lexicographically smallest order.
pub fn ttsp_exact(inst: &TtspInstance) -> Result<TemporalTour> {
    check_feasible(inst)?;
    if inst.n > TTSP_MAX_NODES || inst.lifetime > TTSP_MAX_LIFETIME {
        return Err(Error::TooLarge(format!(
            "exact TTSP supports n ≤ {TTSP_MAX_NODES} and L ≤ {TTSP_MAX_LIFETIME}"
        )));
    }
    let n = inst.n;
    (0..n)
        .into_par_iter()
        .filter_map(|first| {
            let mut rest: Vec<NodeId> = (0..n).filter(|&v| v != first).collect();
            let mut best: Option<TemporalTour> = None;
            loop {
                let mut nodes = vec![first];
                nodes.extend(&rest);
                if let Some((cost, times)) = best_times(inst, &nodes) {
                    if best.as_ref().is_none_or(|b| cost < b.cost) {
                        best = Some(TemporalTour { nodes, times, cost });
                    }
                }
                if !next_permutation(&mut rest) {
                    return best;
                }
            }
        })
        .collect::<Vec<_>>()
        .into_iter()
        .reduce(|a, b| if b.cost < a.cost { b } else { a })
        .ok_or_else(|| Error::Infeasible("no tour".into()))
}

/// Matching-and-patching: a greedy gap-2 temporal matching over the cost-1
/// time-edges gives fragments `u → v` ordered by time; consecutive
/// fragments are joined in between their times (the gap leaves room), the
/// unmatched nodes are inserted one at a time where they raise the cost
/// least, and the final order gets its optimal time assignment.
pub fn ttsp_approx(inst: &TtspInstance) -> Result<TemporalTour> {
    check_feasible(inst)?;
    let n = inst.n;
    let cheap = inst.cheap_graph();
    let cg = conflict_graph(&cheap, 2);
    let picks: Vec<_> = greedy_independent_set(&cg).into_iter().map(|i| cg.picks[i]).collect();
    let mut order: Vec<NodeId> = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    for p in &picks {
        order.extend([p.u, p.v]);
        placed[p.u] = true;
        placed[p.v] = true;
    }
    for v in (0..n).filter(|&v| !placed[v]) {
        let mut best: Option<(u64, usize)> = None;
        for pos in 0..=order.len() {
            let mut trial = order.clone();
            trial.insert(pos, v);
            let cost = if trial.len() < 2 { 0 } else { best_times(inst, &trial).map_or(u64::MAX, |b| b.0) };
            if best.is_none_or(|(c, _)| cost < c) {
                best = Some((cost, pos));
            }
        }
        order.insert(best.unwrap().1, v);
    }
    let (cost, times) =
        best_times(inst, &order).ok_or_else(|| Error::Internal("patched order has no time assignment".into()))?;
    Ok(TemporalTour { nodes: order, times, cost })
}
