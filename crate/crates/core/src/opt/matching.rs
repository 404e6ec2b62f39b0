//! Temporal matchings: time-edges pairwise sharing no node, with labels
//! pairwise at least `gap` apart.

use crate::error::{Error, Result};
use crate::graph::{NodeId, TemporalGraph, Time};

pub const MATCHING_MAX_LABELS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pick {
    pub t: Time,
    pub edge: usize,
    pub u: NodeId,
    pub v: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalMatching {
    pub gap: Time,
    /// Sorted by time.
    pub picks: Vec<Pick>,
}

impl TemporalMatching {
    pub fn len(&self) -> usize {
        self.picks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.picks.is_empty()
    }
}

fn conflicts(a: &Pick, b: &Pick, gap: Time) -> bool {
    a.t.abs_diff(b.t) < gap || a.u == b.u || a.u == b.v || a.v == b.u || a.v == b.v
}

/// Picks are time-edges of `g`, pairwise node-disjoint and `gap` apart.
pub fn is_valid_matching(g: &TemporalGraph, picks: &[Pick], gap: Time) -> bool {
    picks.iter().all(|p| {
        g.edges()
            .get(p.edge)
            .is_some_and(|e| (e.u, e.v) == (p.u, p.v) && e.labels.binary_search(&p.t).is_ok())
    }) && picks
        .iter()
        .enumerate()
        .all(|(i, a)| picks[i + 1..].iter().all(|b| !conflicts(a, b, gap)))
}

/// Vertices are time-edges; two conflict when they share a node or their
/// labels are less than `gap` apart. Independent sets are exactly the
/// temporal matchings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictGraph {
    pub picks: Vec<Pick>,
    pub adj: Vec<Vec<usize>>,
}

pub fn conflict_graph(g: &TemporalGraph, gap: Time) -> ConflictGraph {
    let mut picks: Vec<Pick> = g
        .edges()
        .iter()
        .enumerate()
        .flat_map(|(edge, e)| e.labels.iter().map(move |&t| Pick { t, edge, u: e.u, v: e.v }))
        .collect();
    picks.sort();
    let adj = (0..picks.len())
        .map(|i| {
            (0..picks.len())
                .filter(|&j| j != i && conflicts(&picks[i], &picks[j], gap))
                .collect()
        })
        .collect();
    ConflictGraph { picks, adj }
}

/// No vertex has `claw` pairwise non-adjacent neighbors.
pub fn is_claw_free(cg: &ConflictGraph, claw: usize) -> bool {
    fn has_independent(cg: &ConflictGraph, cand: &[usize], need: usize) -> bool {
        if need == 0 {
            return true;
        }
        cand.iter().enumerate().any(|(i, &x)| {
            let rest: Vec<usize> = cand[i + 1..].iter().copied().filter(|y| !cg.adj[x].contains(y)).collect();
            has_independent(cg, &rest, need - 1)
        })
    }
    (0..cg.picks.len()).all(|v| !has_independent(cg, &cg.adj[v], claw))
}

/// Greedy maximal independent set in ascending degree order, ties by
/// `(time, edge)`. In a graph without `(d+1)`-claws any maximal independent
/// set has at least `1/d` of the maximum size.
pub fn greedy_independent_set(cg: &ConflictGraph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..cg.picks.len()).collect();
    order.sort_by_key(|&i| (cg.adj[i].len(), cg.picks[i].t, cg.picks[i].edge));
    let mut blocked = vec![false; cg.picks.len()];
    let mut chosen = Vec::new();
    for i in order {
        if blocked[i] {
            continue;
        }
        chosen.push(i);
        for &j in &cg.adj[i] {
            blocked[j] = true;
        }
    }
    chosen.sort_unstable();
    chosen
}

pub fn temporal_matching_approx(g: &TemporalGraph, gap: Time) -> TemporalMatching {
    let cg = conflict_graph(g, gap);
    let picks = greedy_independent_set(&cg).into_iter().map(|i| cg.picks[i]).collect();
    TemporalMatching { gap, picks }
}

/// Maximum independent set of the conflict graph by branch and bound over
/// bitmasks.
pub fn temporal_matching_exact(g: &TemporalGraph, gap: Time) -> Result<TemporalMatching> {
    if gap == 0 {
        return Err(Error::Invalid("gap must be at least 1".into()));
    }
    let cg = conflict_graph(g, gap);
    let p = cg.picks.len();
    if p > MATCHING_MAX_LABELS {
        return Err(Error::TooLarge(format!("{p} time-edges; exact matching supports {MATCHING_MAX_LABELS}")));
    }
    let closed: Vec<u64> = (0..p)
        .map(|i| cg.adj[i].iter().fold(1u64 << i, |m, &j| m | 1 << j))
        .collect();
    let cap = (g.node_count() / 2) as u32;
    fn search(closed: &[u64], cand: u64, size: u32, chosen: u64, cap: u32, best: &mut (u32, u64)) {
        if size > best.0 {
            *best = (size, chosen);
        }
        if cand == 0 || size + cand.count_ones() <= best.0 || size >= cap {
            return;
        }
        let v = cand.trailing_zeros() as usize;
        search(closed, cand & !closed[v], size + 1, chosen | 1 << v, cap, best);
        // Skipping v only helps if some neighbor can take its place.
        if cand & closed[v] & !(1 << v) != 0 {
            search(closed, cand & !(1 << v), size, chosen, cap, best);
        }
    }
    let full = if p == 64 { u64::MAX } else { (1u64 << p) - 1 };
    let mut best = (0, 0);
    search(&closed, full, 0, 0, cap, &mut best);
    let picks = (0..p).filter(|i| best.1 >> i & 1 == 1).map(|i| cg.picks[i]).collect();
    Ok(TemporalMatching { gap, picks })
}
