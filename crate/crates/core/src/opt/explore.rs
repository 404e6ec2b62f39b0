//! Temporal exploration: a walk from a start node, revisits allowed, that
//! sees every node as early as possible. The walk starts at time 0, so its
//! first hop may use any label.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::{NodeId, TemporalGraph, Time};
use crate::journeys::{foremost_journeys, Journey};

pub const EXPLORE_MAX_NODES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exploration {
    /// Time at which the last new node is reached; 0 when `n == 1`.
    pub arrival: Time,
    pub walk: Journey,
}

fn check_start(g: &TemporalGraph, start: NodeId) -> Result<()> {
    if start >= g.node_count() {
        return Err(Error::InvalidNode { node: start, n: g.node_count() });
    }
    Ok(())
}

/// Earliest-arrival search over `(visited set, current node)` states.
/// Arriving earlier never hurts since waiting is free, so one time per state
/// suffices and states settle in Dijkstra order.
pub fn explore_exact(g: &TemporalGraph, start: NodeId, force: bool) -> Result<Exploration> {
    check_start(g, start)?;
    let n = g.node_count();
    if n > 63 || (n > EXPLORE_MAX_NODES && !force) {
        return Err(Error::TooLarge(format!("exact exploration supports n ≤ {EXPLORE_MAX_NODES}")));
    }
    let full = (1u64 << n) - 1;
    let states = (1usize << n)
        .checked_mul(n)
        .filter(|&s| s <= 1 << 28)
        .ok_or_else(|| Error::TooLarge(format!("{n} nodes")))?;
    let id = |mask: u64, v: NodeId| mask as usize * n + v;
    let mut best = vec![Time::MAX; states];
    let mut parent: Vec<(usize, Time)> = vec![(usize::MAX, 0); states];
    let mut heap = BinaryHeap::new();
    let s0 = id(1 << start, start);
    best[s0] = 0;
    heap.push(Reverse((0, 1u64 << start, start)));
    while let Some(Reverse((t, mask, v))) = heap.pop() {
        let sid = id(mask, v);
        if t > best[sid] {
            continue;
        }
        if mask == full {
            let mut hops = Vec::new();
            let mut cur = sid;
            while cur != s0 {
                let (p, label) = parent[cur];
                hops.push((label, cur % n));
                cur = p;
            }
            hops.reverse();
            return Ok(Exploration { arrival: t, walk: Journey::from_hops(start, &hops) });
        }
        for &(w, _) in g.out_neighbors(v) {
            let Some(label) = g.next_label(v, w, t + 1) else { continue };
            let next = mask | 1 << w;
            let nid = id(next, w);
            if label < best[nid] {
                best[nid] = label;
                parent[nid] = (sid, label);
                heap.push(Reverse((label, next, w)));
            }
        }
    }
    Err(Error::Infeasible(format!("no temporal walk from {start} visits every node")))
}

/// Repeatedly follows a foremost journey to the earliest-reachable
/// unvisited node (ties to the smallest id); every node passed on the way
/// counts as visited.
pub fn explore_greedy(g: &TemporalGraph, start: NodeId) -> Result<Exploration> {
    check_start(g, start)?;
    let n = g.node_count();
    let mut visited = vec![false; n];
    visited[start] = true;
    let mut left = n - 1;
    let (mut cur, mut t) = (start, 0);
    let mut hops: Vec<(Time, NodeId)> = Vec::new();
    while left > 0 {
        let tree = foremost_journeys(g, cur, t + 1)?;
        let next = (0..n)
            .filter(|&w| !visited[w])
            .filter_map(|w| tree.arrival(w).map(|a| (a, w)))
            .min()
            .ok_or_else(|| Error::Incomplete(format!("{left} nodes unreachable after time {t}")))?;
        let j = tree.journey(next.1).expect("reached");
        for (_, v, label) in j.hops() {
            hops.push((label, v));
            if !std::mem::replace(&mut visited[v], true) {
                left -= 1;
            }
        }
        (t, cur) = next;
    }
    Ok(Exploration { arrival: t, walk: Journey::from_hops(start, &hops) })
}
