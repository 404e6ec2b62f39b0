//! Brute-force reference implementations. They read graphs only through
//! their edge lists and share no code with the library's algorithms.

#![allow(dead_code)]

use std::collections::BTreeSet;

use chronograph::{NodeId, TemporalGraph, Time};

/// Every traversal `(from, to, t)`; undirected edges go both ways.
pub fn time_arcs(g: &TemporalGraph) -> Vec<(NodeId, NodeId, Time)> {
    let mut arcs = Vec::new();
    for e in g.edges() {
        for &t in &e.labels {
            arcs.push((e.u, e.v, t));
            if !g.is_directed() {
                arcs.push((e.v, e.u, t));
            }
        }
    }
    arcs
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    pub nodes: Vec<NodeId>,
    pub times: Vec<Time>,
}

impl Walk {
    pub fn departures(&self) -> impl Iterator<Item = (NodeId, Time)> + '_ {
        self.nodes.iter().copied().zip(self.times.iter().copied())
    }

    pub fn arrival(&self) -> Option<Time> {
        self.times.last().copied()
    }
}

/// All journeys (distinct nodes, strictly increasing times) leaving `s` no
/// earlier than `start`, including the empty one.
pub fn journeys_from(g: &TemporalGraph, s: NodeId, start: Time) -> Vec<Walk> {
    let arcs = time_arcs(g);
    let mut out = Vec::new();
    let mut walk = Walk { nodes: vec![s], times: Vec::new() };
    fn go(arcs: &[(NodeId, NodeId, Time)], min_t: Time, walk: &mut Walk, out: &mut Vec<Walk>) {
        out.push(walk.clone());
        let here = *walk.nodes.last().unwrap();
        for &(u, v, t) in arcs {
            if u == here && t >= min_t && !walk.nodes.contains(&v) {
                walk.nodes.push(v);
                walk.times.push(t);
                go(arcs, t + 1, walk, out);
                walk.nodes.pop();
                walk.times.pop();
            }
        }
    }
    go(&arcs, start, &mut walk, &mut out);
    out
}

pub fn journeys_between(g: &TemporalGraph, s: NodeId, z: NodeId) -> Vec<Walk> {
    journeys_from(g, s, 0).into_iter().filter(|w| *w.nodes.last().unwrap() == z && s != z).collect()
}

/// Earliest arrival per node over all enumerated journeys.
pub fn foremost_by_enumeration(g: &TemporalGraph, s: NodeId, start: Time) -> Vec<Option<Time>> {
    let mut best = vec![None; g.node_count()];
    for w in journeys_from(g, s, start) {
        if let Some(a) = w.arrival() {
            let v = *w.nodes.last().unwrap();
            best[v] = Some(best[v].map_or(a, |b: Time| b.min(a)));
        }
    }
    best
}

/// Earliest arrival by fixpoint relaxation; polynomial, for larger graphs.
pub fn foremost_by_relaxation(g: &TemporalGraph, s: NodeId, start: Time) -> Vec<Option<Time>> {
    let arcs = time_arcs(g);
    // ready[v]: earliest time v can depart.
    let mut ready: Vec<Option<Time>> = vec![None; g.node_count()];
    ready[s] = Some(start);
    let mut arrival: Vec<Option<Time>> = vec![None; g.node_count()];
    loop {
        let mut changed = false;
        for &(u, v, t) in &arcs {
            if v == s || !ready[u].is_some_and(|r| t >= r) {
                continue;
            }
            if arrival[v].is_none_or(|a| t < a) {
                arrival[v] = Some(t);
                ready[v] = Some(t + 1);
                changed = true;
            }
        }
        if !changed {
            return arrival;
        }
    }
}

/// Time-edges exist, times strictly increase; `simple` also demands
/// distinct nodes.
pub fn is_valid_walk(g: &TemporalGraph, nodes: &[NodeId], times: &[Time], simple: bool) -> bool {
    let arcs: BTreeSet<(NodeId, NodeId, Time)> = time_arcs(g).into_iter().collect();
    if nodes.len() != times.len() + 1 {
        return false;
    }
    let hops_ok = (0..times.len()).all(|i| arcs.contains(&(nodes[i], nodes[i + 1], times[i])));
    let increasing = times.windows(2).all(|w| w[0] < w[1]);
    let distinct = !simple || nodes.iter().collect::<BTreeSet<_>>().len() == nodes.len();
    hops_ok && increasing && distinct
}

/// Drops masks that contain another mask; such sets never help a packing
/// and are hit whenever the smaller one is.
pub fn minimal_masks(masks: &[u128]) -> Vec<u128> {
    let mut sorted: Vec<u128> = masks.to_vec();
    sorted.sort_by_key(|m| (m.count_ones(), *m));
    sorted.dedup();
    let mut keep: Vec<u128> = Vec::new();
    for m in sorted {
        if !keep.iter().any(|&k| k & !m == 0) {
            keep.push(m);
        }
    }
    keep
}

/// Largest number of pairwise disjoint masks.
pub fn max_packing(masks: &[u128]) -> usize {
    fn go(masks: &[u128], used: u128, best: &mut usize, size: usize) {
        *best = (*best).max(size);
        let rest: Vec<u128> = masks.iter().copied().filter(|m| m & used == 0).collect();
        if rest.is_empty() || size + rest.len() <= *best {
            return;
        }
        // Branch on the first remaining mask: take it, or drop it.
        go(&rest[1..], used | rest[0], best, size + 1);
        go(&rest[1..], used, best, size);
    }
    if masks.contains(&0) {
        // An empty set is disjoint from everything but counts once.
        let others: Vec<u128> = masks.iter().copied().filter(|&m| m != 0).collect();
        return 1 + max_packing(&others);
    }
    let masks = minimal_masks(masks);
    let mut best = 0;
    go(&masks, 0, &mut best, 0);
    best
}

/// Smallest number of elements meeting every mask; `None` if some mask is
/// empty.
pub fn min_hitting_set(masks: &[u128]) -> Option<usize> {
    fn hits(masks: &[u128], chosen: u128, budget: usize) -> bool {
        let Some(&open) = masks.iter().find(|&&m| m & chosen == 0) else {
            return true;
        };
        budget > 0
            && (0..128).filter(|b| open >> b & 1 == 1).any(|b| hits(masks, chosen | 1u128 << b, budget - 1))
    }
    let masks = minimal_masks(masks);
    if masks.contains(&0) {
        return None;
    }
    (0..=128).find(|&k| hits(&masks, 0, k))
}

/// Interns items as bit positions.
#[derive(Default)]
pub struct Universe<T: Ord + Clone> {
    items: Vec<T>,
}

impl<T: Ord + Clone> Universe<T> {
    pub fn bit(&mut self, item: &T) -> u128 {
        let i = match self.items.iter().position(|x| x == item) {
            Some(i) => i,
            None => {
                self.items.push(item.clone());
                self.items.len() - 1
            }
        };
        assert!(i < 128, "universe too large for the oracle");
        1 << i
    }
}

/// Maximum temporal matching by exhaustive include/exclude search.
pub fn max_matching(g: &TemporalGraph, gap: Time) -> usize {
    let picks: Vec<(NodeId, NodeId, Time)> =
        g.edges().iter().flat_map(|e| e.labels.iter().map(move |&t| (e.u, e.v, t))).collect();
    fn go(picks: &[(NodeId, NodeId, Time)], i: usize, chosen: &mut Vec<(NodeId, NodeId, Time)>, gap: Time) -> usize {
        if i == picks.len() {
            return chosen.len();
        }
        let skip = go(picks, i + 1, chosen, gap);
        let (u, v, t) = picks[i];
        let fits = chosen
            .iter()
            .all(|&(a, b, s)| a != u && a != v && b != u && b != v && s.abs_diff(t) >= gap);
        if !fits {
            return skip;
        }
        chosen.push(picks[i]);
        let take = go(picks, i + 1, chosen, gap);
        chosen.pop();
        skip.max(take)
    }
    go(&picks, 0, &mut Vec::new(), gap)
}

/// Whether some vertex has `claw` pairwise non-adjacent neighbors.
pub fn has_claw(adj: &[BTreeSet<usize>], claw: usize) -> bool {
    fn independent(adj: &[BTreeSet<usize>], cand: &[usize], need: usize) -> bool {
        need == 0
            || cand.iter().enumerate().any(|(i, &x)| {
                let rest: Vec<usize> = cand[i + 1..].iter().copied().filter(|y| !adj[x].contains(y)).collect();
                independent(adj, &rest, need - 1)
            })
    }
    (0..adj.len()).any(|v| independent(adj, &adj[v].iter().copied().collect::<Vec<_>>(), claw))
}

/// Cheapest tour over every node order (each rotation is a different
/// tour) and every increasing choice of hop times in `1..=L`.
pub fn ttsp_brute(n: usize, lifetime: Time, cost: impl Fn(NodeId, NodeId, Time) -> u8) -> Option<u64> {
    fn perms(rest: &mut Vec<NodeId>, k: usize, out: &mut Vec<Vec<NodeId>>) {
        if k == rest.len() {
            out.push(rest.clone());
            return;
        }
        for i in k..rest.len() {
            rest.swap(k, i);
            perms(rest, k + 1, out);
            rest.swap(k, i);
        }
    }
    fn times(n: usize, lo: Time, hi: Time, cur: &mut Vec<Time>, f: &mut dyn FnMut(&[Time])) {
        if cur.len() == n {
            f(cur);
            return;
        }
        for t in lo..=hi {
            cur.push(t);
            times(n, t + 1, hi, cur, f);
            cur.pop();
        }
    }
    let mut orders = Vec::new();
    perms(&mut (0..n).collect(), 0, &mut orders);
    let mut best: Option<u64> = None;
    for tour in orders {
        times(n, 1, lifetime, &mut Vec::new(), &mut |ts| {
            let c: u64 = (0..n).map(|i| cost(tour[i], tour[(i + 1) % n], ts[i]) as u64).sum();
            best = Some(best.map_or(c, |b| b.min(c)));
        });
    }
    best
}

/// Every simple path of the static graph can pick increasing labels.
pub fn all_paths_realizable(n: usize, labeled: &[(NodeId, NodeId, Vec<Time>)]) -> bool {
    fn go(labeled: &[(NodeId, NodeId, Vec<Time>)], v: NodeId, after: Time, seen: &mut Vec<bool>) -> bool {
        let next: Vec<(NodeId, Option<Time>)> = labeled
            .iter()
            .filter(|(u, w, _)| *u == v && !seen[*w])
            // Taking the earliest usable label is never worse.
            .map(|(_, w, labels)| (*w, labels.iter().copied().filter(|&t| t > after).min()))
            .collect();
        next.into_iter().all(|(w, t)| {
            let Some(t) = t else { return false };
            seen[w] = true;
            let ok = go(labeled, w, t, seen);
            seen[w] = false;
            ok
        })
    }
    (0..n).all(|s| {
        let mut seen = vec![false; n];
        seen[s] = true;
        go(labeled, s, 0, &mut seen)
    })
}

/// Static reachability by repeated closure.
pub fn static_reach(n: usize, arcs: &[(NodeId, NodeId)], s: NodeId) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[s] = true;
    loop {
        let mut changed = false;
        for &(u, v) in arcs {
            if seen[u] && !seen[v] {
                seen[v] = true;
                changed = true;
            }
        }
        if !changed {
            return seen;
        }
    }
}

/// Earliest `r` in `1..=limit` with every `(a, b)` available at `r`.
pub fn scan_coexist(specs: &[(u64, u64)], limit: u64) -> Option<u64> {
    (1..=limit).find(|&r| specs.iter().all(|&(a, b)| if a == 0 { r == b } else { r >= b && (r - b) % a == 0 }))
}
