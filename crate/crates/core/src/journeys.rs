//! Journeys, foremost journeys, temporal distance and temporal diameter.
//!
//! Conventions:
//! - a foremost journey "from time `t`" may depart at any label `>= t`;
//! - the temporal distance from `(u, t)` to `v` is the duration of the
//!   shortest-duration journey among the foremost ones, i.e. the foremost
//!   arrival minus the latest departure that still achieves it, plus one.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{NodeId, TemporalGraph, Time};

/// Alternating sequence `(u_1, t_1, u_2, ..., t_{k-1}, u_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Journey {
    nodes: Vec<NodeId>,
    times: Vec<Time>,
}

impl Journey {
    pub fn new(nodes: Vec<NodeId>, times: Vec<Time>) -> Result<Self> {
        if nodes.is_empty() || times.len() + 1 != nodes.len() {
            return Err(Error::Invalid(format!(
                "a journey over {} nodes needs {} times, got {}",
                nodes.len(),
                nodes.len().saturating_sub(1),
                times.len()
            )));
        }
        Ok(Journey { nodes, times })
    }

    /// The empty journey sitting at `node`.
    pub fn trivial(node: NodeId) -> Self {
        Journey { nodes: vec![node], times: Vec::new() }
    }

    /// Builds from a start node and `(time, next node)` hops.
    pub fn from_hops(start: NodeId, hops: &[(Time, NodeId)]) -> Self {
        let mut nodes = vec![start];
        let mut times = Vec::with_capacity(hops.len());
        for &(t, v) in hops {
            times.push(t);
            nodes.push(v);
        }
        Journey { nodes, times }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn times(&self) -> &[Time] {
        &self.times
    }

    pub fn source(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn target(&self) -> NodeId {
        *self.nodes.last().unwrap()
    }

    pub fn hop_count(&self) -> usize {
        self.times.len()
    }

    pub fn departure(&self) -> Option<Time> {
        self.times.first().copied()
    }

    pub fn arrival(&self) -> Option<Time> {
        self.times.last().copied()
    }

    /// `arrival − departure + 1`; zero for the empty journey.
    pub fn duration(&self) -> Time {
        match (self.departure(), self.arrival()) {
            (Some(d), Some(a)) => a - d + 1,
            _ => 0,
        }
    }

    /// `(node, time)` pairs at which the journey leaves a node.
    pub fn departures(&self) -> impl Iterator<Item = (NodeId, Time)> + '_ {
        self.nodes.iter().copied().zip(self.times.iter().copied())
    }

    /// Hops as `(from, to, time)`.
    pub fn hops(&self) -> impl Iterator<Item = (NodeId, NodeId, Time)> + '_ {
        self.nodes
            .windows(2)
            .zip(&self.times)
            .map(|(w, &t)| (w[0], w[1], t))
    }

    /// Turns a walk into a journey by cutting at the first visit of `target`
    /// and splicing out cycles. The result uses a subset of the walk's hops.
    pub fn shortcut_to(&self, target: NodeId) -> Option<Journey> {
        let end = self.nodes.iter().position(|&v| v == target)?;
        let mut nodes: Vec<NodeId> = Vec::new();
        let mut times: Vec<Time> = Vec::new();
        for i in 0..=end {
            let v = self.nodes[i];
            if let Some(p) = nodes.iter().position(|&x| x == v) {
                nodes.truncate(p + 1);
                times.truncate(p);
            } else {
                nodes.push(v);
            }
            if i < end {
                times.push(self.times[i]);
            }
        }
        Some(Journey { nodes, times })
    }
}

impl std::fmt::Display for Journey {
    /// `u1 t1 u2 t2 ... uk`
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.nodes[0])?;
        for (i, t) in self.times.iter().enumerate() {
            write!(f, " {} {}", t, self.nodes[i + 1])?;
        }
        Ok(())
    }
}

/// Time-edges exist and times strictly increase.
pub fn is_walk(g: &TemporalGraph, j: &Journey) -> bool {
    if j.nodes.iter().any(|&v| v >= g.node_count()) {
        return false;
    }
    j.times.windows(2).all(|w| w[0] < w[1]) && j.hops().all(|(u, v, t)| g.has_time_edge(u, v, t))
}

/// A walk whose nodes are pairwise distinct.
pub fn is_journey(g: &TemporalGraph, j: &Journey) -> bool {
    if !is_walk(g, j) {
        return false;
    }
    let mut seen = vec![false; g.node_count()];
    j.nodes.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
}

/// Output of [`foremost_journeys`]: a tree of foremost journeys from one
/// source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForemostTree {
    pub source: NodeId,
    pub start: Time,
    arrival: Vec<Option<Time>>,
    parent: Vec<Option<(NodeId, Time)>>,
}

impl ForemostTree {
    /// Foremost arrival at `w`; `None` for the source and unreachable nodes.
    pub fn arrival(&self, w: NodeId) -> Option<Time> {
        self.arrival[w]
    }

    pub fn is_reached(&self, w: NodeId) -> bool {
        w == self.source || self.arrival[w].is_some()
    }

    /// The foremost journey to `w`; the empty journey for the source.
    pub fn journey(&self, w: NodeId) -> Option<Journey> {
        if w == self.source {
            return Some(Journey::trivial(w));
        }
        self.arrival[w]?;
        let mut hops = Vec::new();
        let mut cur = w;
        while let Some((p, t)) = self.parent[cur] {
            hops.push((t, cur));
            cur = p;
        }
        hops.reverse();
        Some(Journey::from_hops(self.source, &hops))
    }
}

fn check_node(g: &TemporalGraph, v: NodeId) -> Result<()> {
    if v >= g.node_count() {
        Err(Error::InvalidNode { node: v, n: g.node_count() })
    } else {
        Ok(())
    }
}

/// Foremost journeys from `s` to every node, departing at labels `>= start`.
///
/// A single sweep over the time-sorted traversals, i.e. a level-by-level
/// BFS of the static expansion. Among traversals reaching a node at the same
/// earliest time, the one from the smallest predecessor id wins. Runs in
/// `O(|λ| + n)` after the graph's construction-time sort.
pub fn foremost_journeys(g: &TemporalGraph, s: NodeId, start: Time) -> Result<ForemostTree> {
    check_node(g, s)?;
    let n = g.node_count();
    let mut arrival = vec![None; n];
    let mut parent = vec![None; n];
    let mut remaining = n - 1;
    for a in g.arcs_from(start) {
        if remaining == 0 {
            break;
        }
        if a.to == s || arrival[a.to].is_some() {
            continue;
        }
        let can_leave = a.from == s || arrival[a.from].is_some_and(|t| t < a.t);
        if can_leave {
            arrival[a.to] = Some(a.t);
            parent[a.to] = Some((a.from, a.t));
            remaining -= 1;
        }
    }
    Ok(ForemostTree { source: s, start, arrival, parent })
}

/// Foremost arrival times only, with `u64::MAX` for unreachable nodes and 0
/// for the source.
fn earliest_arrivals(g: &TemporalGraph, s: NodeId, start: Time, out: &mut [Time]) {
    out.fill(Time::MAX);
    out[s] = 0;
    let mut remaining = g.node_count() - 1;
    for a in g.arcs_from(start) {
        if remaining == 0 {
            break;
        }
        if out[a.to] != Time::MAX || a.to == s {
            continue;
        }
        if a.from == s || out[a.from] < a.t {
            out[a.to] = a.t;
            remaining -= 1;
        }
    }
}

/// Latest label `>= start` at which `u` can depart and still reach `v` by
/// time `deadline`.
fn latest_departure(g: &TemporalGraph, u: NodeId, v: NodeId, start: Time, deadline: Time) -> Option<Time> {
    // latest[x]: latest label at which x can leave; v "leaves" after deadline.
    let mut latest: Vec<Option<Time>> = vec![None; g.node_count()];
    latest[v] = Some(deadline + 1);
    let arcs = g.arcs_from(start);
    let end = arcs.partition_point(|a| a.t <= deadline);
    for a in arcs[..end].iter().rev() {
        if a.from == v {
            continue;
        }
        if latest[a.to].is_some_and(|l| a.t < l) && latest[a.from].is_none_or(|l| l < a.t) {
            latest[a.from] = Some(a.t);
        }
    }
    latest[u]
}

/// Temporal distance from `u` at time `t` to `v`; `None` means infinite.
pub fn temporal_distance(g: &TemporalGraph, u: NodeId, t: Time, v: NodeId) -> Result<Option<Time>> {
    check_node(g, u)?;
    check_node(g, v)?;
    if u == v {
        return Ok(Some(0));
    }
    let tree = foremost_journeys(g, u, t)?;
    let Some(arrival) = tree.arrival(v) else {
        return Ok(None);
    };
    let departure = latest_departure(g, u, v, t, arrival)
        .ok_or_else(|| Error::Internal("foremost journey has no latest departure".into()))?;
    Ok(Some(arrival - departure + 1))
}

/// Distances `dist[t][v]` from `u` for every start `t ∈ 0..=horizon`, using
/// the arrival profile: the latest departure achieving the foremost arrival
/// from `t` is the largest `τ >= t` with the same foremost arrival.
/// Exact only when `horizon >= λ_max` (no departures lie beyond it).
fn distance_profile(g: &TemporalGraph, u: NodeId, horizon: Time) -> Vec<Vec<Option<Time>>> {
    let n = g.node_count();
    let h = horizon as usize;
    let mut ea = vec![vec![Time::MAX; n]; h + 2];
    for (tau, row) in ea.iter_mut().enumerate().take(h + 1) {
        earliest_arrivals(g, u, tau as Time, row);
    }
    // Row h+1 is a sentinel "never equal".
    let mut dist = vec![vec![None; n]; h + 1];
    let mut latest = vec![0 as Time; n];
    for tau in (0..=h).rev() {
        for v in 0..n {
            if v == u {
                dist[tau][v] = Some(0);
                continue;
            }
            let a = ea[tau][v];
            if a == Time::MAX {
                continue;
            }
            if tau == h || ea[tau + 1][v] != a {
                latest[v] = tau as Time;
            }
            dist[tau][v] = Some(a - latest[v].max(1) + 1);
        }
    }
    dist
}

/// Smallest `d` such that from every time-node `(u, t)` with
/// `t ∈ {0, ..., α − d}` every node is within temporal distance `d`.
/// Labels are first shifted so that `λ_min = 1`. `None` means infinite.
pub fn temporal_diameter(g: &TemporalGraph) -> Option<Time> {
    let n = g.node_count();
    if n == 1 {
        return Some(0);
    }
    let g = g.normalized();
    let alpha = g.lambda_max()?;
    // worst[t] = max over (u, v) of dist from (u, t); None = infinite.
    let per_source: Vec<Vec<Option<Time>>> = (0..n)
        .into_par_iter()
        .map(|u| {
            distance_profile(&g, u, alpha)
                .into_iter()
                .map(|row| row.into_iter().try_fold(0, |m, d| d.map(|d| m.max(d))))
                .collect()
        })
        .collect();
    let mut prefix_worst: Vec<Option<Time>> = Vec::with_capacity(alpha as usize);
    let mut acc = Some(0);
    for t in 0..alpha as usize {
        let here = per_source
            .iter()
            .try_fold(0, |m, row| row[t].map(|d| m.max(d)));
        acc = match (acc, here) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        prefix_worst.push(acc);
    }
    (1..=alpha).find(|&d| prefix_worst[(alpha - d) as usize].is_some_and(|w| w <= d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn g(n: usize, directed: bool, edges: &[(usize, usize, &[u64])]) -> TemporalGraph {
        TemporalGraph::build(n, directed, edges.iter().map(|&(u, v, l)| (u, v, l.to_vec()))).unwrap()
    }

    /// Every journey from `s` (exhaustive DFS).
    fn all_journeys(g: &TemporalGraph, s: NodeId) -> Vec<Journey> {
        fn rec(g: &TemporalGraph, path: &mut Vec<NodeId>, times: &mut Vec<Time>, out: &mut Vec<Journey>) {
            out.push(Journey::new(path.clone(), times.clone()).unwrap());
            let u = *path.last().unwrap();
            let last = times.last().copied().unwrap_or(0);
            for &(v, _) in g.out_neighbors(u) {
                if path.contains(&v) {
                    continue;
                }
                for &t in g.labels(u, v) {
                    if t > last {
                        path.push(v);
                        times.push(t);
                        rec(g, path, times, out);
                        path.pop();
                        times.pop();
                    }
                }
            }
        }
        let mut out = Vec::new();
        rec(g, &mut vec![s], &mut Vec::new(), &mut out);
        out
    }

    fn brute_distance(g: &TemporalGraph, u: NodeId, t: Time, v: NodeId) -> Option<Time> {
        if u == v {
            return Some(0);
        }
        let js: Vec<Journey> = all_journeys(g, u)
            .into_iter()
            .filter(|j| j.target() == v && j.departure().is_some_and(|d| d >= t))
            .collect();
        let best = js.iter().filter_map(|j| j.arrival()).min()?;
        js.iter().filter(|j| j.arrival() == Some(best)).map(|j| j.duration()).min()
    }

    fn brute_diameter(g: &TemporalGraph) -> Option<Time> {
        let n = g.node_count();
        let g = g.normalized();
        let alpha = g.lambda_max()?;
        (1..=alpha).find(|&d| {
            (0..n).all(|u| {
                (0..=alpha - d).all(|t| {
                    (0..n).all(|v| brute_distance(&g, u, t, v).is_some_and(|x| x <= d))
                })
            })
        })
    }

    #[test]
    fn journey_validity() {
        let h = g(3, false, &[(0, 1, &[1, 2]), (1, 2, &[3])]);
        assert!(is_journey(&h, &Journey::new(vec![0, 1, 2], vec![1, 3]).unwrap()));
        let flat = g(3, false, &[(0, 1, &[2]), (1, 2, &[2])]);
        assert!(!is_journey(&flat, &Journey::new(vec![0, 1, 2], vec![2, 2]).unwrap()));
        let back = Journey::new(vec![0, 1, 0], vec![1, 2]).unwrap();
        assert!(!is_journey(&h, &back));
        assert!(is_walk(&h, &back));
        assert_eq!(Journey::trivial(2).duration(), 0);
        assert!(Journey::new(vec![0, 1], vec![]).is_err());
    }

    #[test]
    fn foremost_waits_for_later_label() {
        // a=0, b=1, c=2
        let h = g(3, false, &[(0, 1, &[2]), (1, 2, &[1, 4])]);
        let tree = foremost_journeys(&h, 0, 1).unwrap();
        let j = tree.journey(2).unwrap();
        assert_eq!(j.arrival(), Some(4));
        assert_eq!(j.duration(), 3);
        assert!(is_journey(&h, &j));
    }

    #[test]
    fn foremost_respects_start() {
        let h = g(2, false, &[(0, 1, &[3])]);
        let j = foremost_journeys(&h, 0, 1).unwrap().journey(1).unwrap();
        assert_eq!((j.arrival(), j.duration()), (Some(3), 1));
        assert!(foremost_journeys(&h, 0, 4).unwrap().journey(1).is_none());
        assert!(foremost_journeys(&h, 0, 3).unwrap().journey(1).is_some());
        assert!(foremost_journeys(&h, 5, 1).is_err());
    }

    #[test]
    fn ties_prefer_smaller_predecessor() {
        let h = g(4, true, &[(0, 2, &[1]), (0, 1, &[1]), (1, 3, &[2]), (2, 3, &[2])]);
        let j = foremost_journeys(&h, 0, 1).unwrap().journey(3).unwrap();
        assert_eq!(j.nodes(), &[0, 1, 3]);
    }

    #[test]
    fn distances() {
        let h = g(3, false, &[(0, 1, &[2]), (1, 2, &[4])]);
        assert_eq!(temporal_distance(&h, 1, 1, 1).unwrap(), Some(0));
        assert_eq!(temporal_distance(&h, 0, 1, 2).unwrap(), Some(3));
        let split = g(4, false, &[(0, 1, &[1]), (2, 3, &[1])]);
        assert_eq!(temporal_distance(&split, 0, 1, 3).unwrap(), None);
    }

    #[test]
    fn distance_uses_latest_departure_among_foremost() {
        // 0->1 at 1 or 5; 1->2 at 6. Foremost arrival 6, latest departure 5.
        let h = g(3, true, &[(0, 1, &[1, 5]), (1, 2, &[6])]);
        assert_eq!(temporal_distance(&h, 0, 1, 2).unwrap(), Some(2));
    }

    #[test]
    fn diameter_examples() {
        let alpha = 4;
        let labels: Vec<u64> = (1..=alpha).collect();
        let k4 = TemporalGraph::build(
            4,
            false,
            (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v))).map(|(u, v)| (u, v, labels.clone())),
        )
        .unwrap();
        assert_eq!(temporal_diameter(&k4), Some(1));
        let one_way = g(2, true, &[(0, 1, &[1, 2])]);
        assert_eq!(temporal_diameter(&one_way), None);
        assert_eq!(temporal_diameter(&g(1, false, &[])), Some(0));
    }

    #[test]
    fn shortcut_removes_cycles() {
        let w = Journey::new(vec![0, 1, 2, 1, 3, 4], vec![1, 2, 3, 4, 5]).unwrap();
        let j = w.shortcut_to(3).unwrap();
        assert_eq!(j.nodes(), &[0, 1, 3]);
        assert_eq!(j.times(), &[1, 4]);
    }

    fn random_graph(rng: &mut impl rand::Rng, n: usize, alpha: u64, directed: bool) -> TemporalGraph {
        let mut specs = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if u == v || (!directed && v < u) || !rng.gen_bool(0.45) {
                    continue;
                }
                let k = rng.gen_range(1..=2);
                specs.push((u, v, (0..k).map(|_| rng.gen_range(1..=alpha)).collect::<Vec<_>>()));
            }
        }
        TemporalGraph::build(n, directed, specs).unwrap()
    }

    #[test]
    fn distance_routes_agree_with_brute_force() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..150 {
            let n = rng.gen_range(2..=6);
            let directed = rng.gen_bool(0.5);
            let h = random_graph(&mut rng, n, 5, directed);
            for u in 0..n {
                let profile = distance_profile(&h, u, 5);
                for (t, row) in (0..=5).zip(&profile) {
                    for (v, &got) in row.iter().enumerate() {
                        let brute = brute_distance(&h, u, t, v);
                        assert_eq!(temporal_distance(&h, u, t, v).unwrap(), brute);
                        assert_eq!(got, brute, "u={u} t={t} v={v}");
                    }
                }
            }
        }
    }

    #[test]
    fn diameter_matches_definition_scan() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for _ in 0..150 {
            let n = rng.gen_range(2..=5);
            let directed = rng.gen_bool(0.5);
            let h = random_graph(&mut rng, n, 6, directed);
            assert_eq!(temporal_diameter(&h), brute_diameter(&h));
        }
    }

    #[test]
    fn foremost_is_monotone_in_start() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let n = rng.gen_range(2..=7);
            let directed = rng.gen_bool(0.5);
            let h = random_graph(&mut rng, n, 6, directed);
            for t in 1..6 {
                let a = foremost_journeys(&h, 0, t).unwrap();
                let b = foremost_journeys(&h, 0, t + 1).unwrap();
                for w in 1..n {
                    if let Some(later) = b.arrival(w) {
                        assert!(a.arrival(w).unwrap() <= later);
                    }
                    if let Some(j) = a.journey(w) {
                        assert!(is_journey(&h, &j));
                        assert!(j.departure().unwrap() >= t);
                    }
                }
            }
        }
    }

    #[test]
    fn foremost_matches_enumeration() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(14);
        for _ in 0..200 {
            let n = rng.gen_range(2..=7);
            let directed = rng.gen_bool(0.5);
            let h = random_graph(&mut rng, n, 6, directed);
            let s = rng.gen_range(0..n);
            let t0 = rng.gen_range(1..=3);
            let tree = foremost_journeys(&h, s, t0).unwrap();
            let all = all_journeys(&h, s);
            for w in (0..n).filter(|&w| w != s) {
                let best = all
                    .iter()
                    .filter(|j| j.target() == w && j.departure().is_some_and(|d| d >= t0))
                    .filter_map(|j| j.arrival())
                    .min();
                assert_eq!(tree.arrival(w), best);
            }
        }
    }
}
