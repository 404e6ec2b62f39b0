//! Disjoint journeys and temporal separators.
//!
//! Three notions of disjointness:
//! - node-disjoint journeys vs node separators: brute force only, and the two
//!   optima can differ (see [`menger_gap_gadget`]);
//! - edge-disjoint journeys on single-labeled graphs: max-flow over an
//!   edge-gadget network where each node is split per incident arc, so flow
//!   may only pass a node from an earlier arc to a later one;
//! - out-disjoint journeys (never leaving the same node at the same time) vs
//!   departure-time separators: max-flow over the static expansion, where a
//!   time-node with several departures routes them through a unit-capacity
//!   split node. The two optima coincide.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::graph::{NodeId, TemporalGraph, Time};
use crate::journeys::{is_journey, Journey};

pub const BRUTE_MAX_NODES: usize = 10;
pub const BRUTE_MAX_LABELS: usize = 24;

/// Size guard shared by the exponential routines.
pub fn check_brute_size(g: &TemporalGraph, force: bool) -> Result<()> {
    if g.node_count() > 64 {
        return Err(Error::TooLarge(format!("{} nodes; brute force supports at most 64", g.node_count())));
    }
    if !force && (g.node_count() > BRUTE_MAX_NODES || g.label_count() > BRUTE_MAX_LABELS) {
        return Err(Error::TooLarge(format!(
            "n={} |λ|={} exceeds the brute-force guard (n ≤ {BRUTE_MAX_NODES}, |λ| ≤ {BRUTE_MAX_LABELS})",
            g.node_count(),
            g.label_count()
        )));
    }
    Ok(())
}

fn check_endpoints(g: &TemporalGraph, s: NodeId, z: NodeId) -> Result<()> {
    for v in [s, z] {
        if v >= g.node_count() {
            return Err(Error::InvalidNode { node: v, n: g.node_count() });
        }
    }
    if s == z {
        return Err(Error::Invalid("source equals sink".into()));
    }
    Ok(())
}

/// Every `s → z` journey, by exhaustive search.
pub fn all_journeys_between(g: &TemporalGraph, s: NodeId, z: NodeId) -> Vec<Journey> {
    fn rec(
        g: &TemporalGraph,
        z: NodeId,
        nodes: &mut Vec<NodeId>,
        times: &mut Vec<Time>,
        on_path: &mut [bool],
        out: &mut Vec<Journey>,
    ) {
        let u = *nodes.last().unwrap();
        if u == z {
            out.push(Journey::from_hops(nodes[0], &hops(nodes, times)));
            return;
        }
        let last = times.last().copied().unwrap_or(0);
        for &(v, e) in g.out_neighbors(u) {
            if on_path[v] {
                continue;
            }
            let labels = &g.edges()[e].labels;
            let from = labels.partition_point(|&t| t <= last);
            for &t in &labels[from..] {
                nodes.push(v);
                times.push(t);
                on_path[v] = true;
                rec(g, z, nodes, times, on_path, out);
                on_path[v] = false;
                nodes.pop();
                times.pop();
            }
        }
    }
    fn hops(nodes: &[NodeId], times: &[Time]) -> Vec<(Time, NodeId)> {
        times.iter().copied().zip(nodes[1..].iter().copied()).collect()
    }
    let mut on_path = vec![false; g.node_count()];
    on_path[s] = true;
    let mut out = Vec::new();
    rec(g, z, &mut vec![s], &mut Vec::new(), &mut on_path, &mut out);
    out
}

fn inner_mask(j: &Journey) -> u64 {
    let nodes = j.nodes();
    nodes[1..nodes.len() - 1].iter().fold(0, |m, &v| m | 1 << v)
}

/// Keeps one representative per inner node set, dropping sets that strictly
/// contain a non-empty other (they never help a packing nor need separate
/// hitting).
fn minimal_masks(journeys: &[Journey]) -> BTreeMap<u64, Journey> {
    let mut by_mask: BTreeMap<u64, Journey> = BTreeMap::new();
    for j in journeys {
        by_mask.entry(inner_mask(j)).or_insert_with(|| j.clone());
    }
    let masks: Vec<u64> = by_mask.keys().copied().collect();
    by_mask.retain(|&m, _| !masks.iter().any(|&o| o != m && o != 0 && o & m == o));
    by_mask
}

fn max_packing(masks: &[u64], chosen: &mut Vec<u64>, best: &mut Vec<u64>) {
    if chosen.len() > best.len() {
        *best = chosen.clone();
    }
    if chosen.len() + masks.len() <= best.len() {
        return;
    }
    let Some((&first, rest)) = masks.split_first() else {
        return;
    };
    let compatible: Vec<u64> = rest.iter().copied().filter(|&m| m & first == 0).collect();
    chosen.push(first);
    max_packing(&compatible, chosen, best);
    chosen.pop();
    max_packing(rest, chosen, best);
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeDisjoint {
    pub count: usize,
    pub journeys: Vec<Journey>,
}

/// Maximum number of `s → z` journeys pairwise sharing only `s` and `z`.
/// Journeys with the same inner node set count once; in particular all
/// direct `s → z` traversals together count as one.
pub fn max_node_disjoint_journeys(g: &TemporalGraph, s: NodeId, z: NodeId, force: bool) -> Result<NodeDisjoint> {
    check_endpoints(g, s, z)?;
    check_brute_size(g, force)?;
    let reps = minimal_masks(&all_journeys_between(g, s, z));
    let masks: Vec<u64> = reps.keys().copied().collect();
    let mut best = Vec::new();
    max_packing(&masks, &mut Vec::new(), &mut best);
    let journeys: Vec<Journey> = best.iter().map(|m| reps[m].clone()).collect();
    Ok(NodeDisjoint { count: journeys.len(), journeys })
}

fn hitting_set(masks: &[u64], budget: usize, chosen: u64) -> Option<u64> {
    let Some(&open) = masks.iter().find(|&&m| m & chosen == 0) else {
        return Some(chosen);
    };
    if budget == 0 {
        return None;
    }
    (0..64)
        .filter(|b| open >> b & 1 == 1)
        .find_map(|b| hitting_set(masks, budget - 1, chosen | 1 << b))
}

/// Minimum set of nodes other than `s, z` whose removal leaves no `s → z`
/// journey. Empty when no journey exists; [`Error::Inseparable`] when a
/// direct `s → z` journey exists.
pub fn min_node_separator(g: &TemporalGraph, s: NodeId, z: NodeId, force: bool) -> Result<Vec<NodeId>> {
    check_endpoints(g, s, z)?;
    check_brute_size(g, force)?;
    let masks: Vec<u64> = minimal_masks(&all_journeys_between(g, s, z)).into_keys().collect();
    if masks.contains(&0) {
        return Err(Error::Inseparable);
    }
    let found = (0..=g.node_count())
        .find_map(|k| hitting_set(&masks, k, 0))
        .ok_or_else(|| Error::Internal("no node separator found".into()))?;
    Ok((0..g.node_count()).filter(|v| found >> v & 1 == 1).collect())
}

/// Minimum set of edges whose removal leaves no `s → z` journey, by subset
/// enumeration in order of size.
pub fn min_edge_separator_brute(
    g: &TemporalGraph,
    s: NodeId,
    z: NodeId,
    force: bool,
) -> Result<Vec<(NodeId, NodeId)>> {
    check_endpoints(g, s, z)?;
    check_brute_size(g, force)?;
    if g.edges().len() > 64 {
        return Err(Error::TooLarge("more than 64 edges".into()));
    }
    let edge_sets: Vec<u64> = all_journeys_between(g, s, z)
        .iter()
        .map(|j| j.hops().fold(0u64, |m, (u, v, _)| m | 1 << g.edge_index(u, v).unwrap()))
        .collect();
    let found = (0..=g.edges().len())
        .find_map(|k| hitting_set(&edge_sets, k, 0))
        .ok_or_else(|| Error::Internal("no edge separator found".into()))?;
    Ok((0..g.edges().len())
        .filter(|e| found >> e & 1 == 1)
        .map(|e| (g.edges()[e].u, g.edges()[e].v))
        .collect())
}

/// Maximum number of pairwise edge-disjoint `s → z` journeys in a graph
/// where every labeled edge has exactly one label.
///
/// Each edge becomes a unit-capacity gadget: for an undirected edge `{u, v}`
/// at time `t`, both endpoints feed a node `x` (time `3t`), `x → y` has
/// capacity 1 (time `3t + 1`), and `y` feeds both endpoints (time `3t + 2`).
/// Every original node is then split into one entry node per incoming arc
/// and one exit node per outgoing arc, with entry → exit iff the incoming
/// time is below the outgoing time. Flow paths are walks using each edge at
/// most once, and every such walk shortcuts to a journey.
pub fn max_edge_disjoint_journeys(g: &TemporalGraph, s: NodeId, z: NodeId) -> Result<u64> {
    check_endpoints(g, s, z)?;
    if g.edges().iter().any(|e| e.labels.len() > 1) {
        return Err(Error::Unsupported("edge-disjoint journeys need a single-labeled graph".into()));
    }
    let mut net = FlowNetwork::new(2);
    let (src, sink) = (0, 1);
    // Per node: entry nodes (time, id) and exit nodes (time, id).
    let mut entries: Vec<Vec<(Time, usize)>> = vec![Vec::new(); g.node_count()];
    let mut exits: Vec<Vec<(Time, usize)>> = vec![Vec::new(); g.node_count()];
    for e in g.edges() {
        let Some(&t) = e.labels.first() else { continue };
        let ends: &[(NodeId, NodeId)] = if g.is_directed() { &[(e.u, e.v)] } else { &[(e.u, e.v), (e.v, e.u)] };
        let x = net.add_node();
        let y = net.add_node();
        net.add_arc(x, y, 1);
        for &(from, to) in ends {
            let out = net.add_node();
            net.add_arc(out, x, 1);
            exits[from].push((t, out));
            let inn = net.add_node();
            net.add_arc(y, inn, 1);
            entries[to].push((t, inn));
        }
    }
    let unbounded = g.edges().len() as u64 + 1;
    for v in 0..g.node_count() {
        for &(t_in, inn) in &entries[v] {
            for &(t_out, out) in &exits[v] {
                if t_in < t_out {
                    net.add_arc(inn, out, unbounded);
                }
            }
            if v == z {
                net.add_arc(inn, sink, unbounded);
            }
        }
        if v == s {
            for &(_, out) in &exits[v] {
                net.add_arc(src, out, unbounded);
            }
        }
    }
    net.max_flow(src, sink)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ArcKind {
    Vertical,
    Sink,
    /// A unit arc representing departure `(node, time)`.
    Departure { node: NodeId, time: Time, to: Option<NodeId> },
}

/// The out-disjoint flow network over the static expansion.
struct DepartureNetwork {
    net: FlowNetwork,
    kinds: Vec<ArcKind>,
    src: usize,
    sink: usize,
}

fn departure_network(g: &TemporalGraph, s: NodeId, z: NodeId) -> Option<DepartureNetwork> {
    let x = g.static_expansion(true).ok()?;
    let lambda_max = x.last_level;
    let mut net = FlowNetwork::new(x.time_node_count() + 1);
    let sink = x.time_node_count();
    let mut kinds = Vec::new();
    // Departures grouped by tail time-node, i.e. (level of head, from).
    let mut departures: BTreeMap<(Time, NodeId), Vec<NodeId>> = BTreeMap::new();
    for d in &x.diagonal {
        departures.entry((d.level, d.from)).or_default().push(d.to);
    }
    for level in x.first_level..=x.last_level {
        for j in 0..x.n {
            let here = x.time_node(level, j);
            if j == z {
                net.add_arc(here, sink, lambda_max);
                kinds.push(ArcKind::Sink);
            }
            if let Some(targets) = departures.get(&(level + 1, j)) {
                let time = level + 1;
                if targets.len() == 1 {
                    let to = targets[0];
                    net.add_arc(here, x.time_node(time, to), 1);
                    kinds.push(ArcKind::Departure { node: j, time, to: Some(to) });
                } else {
                    let w = net.add_node();
                    net.add_arc(here, w, 1);
                    kinds.push(ArcKind::Departure { node: j, time, to: None });
                    for &to in targets {
                        net.add_arc(w, x.time_node(time, to), 1);
                        kinds.push(ArcKind::Departure { node: j, time, to: Some(to) });
                    }
                }
            }
            if level < x.last_level {
                net.add_arc(here, x.time_node(level + 1, j), lambda_max);
                kinds.push(ArcKind::Vertical);
            }
        }
    }
    Some(DepartureNetwork { net, kinds, src: x.time_node(x.first_level, s), sink })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutDisjoint {
    pub count: u64,
    /// Pairwise out-disjoint journeys, one per unit of flow.
    pub journeys: Vec<Journey>,
    /// A minimum departure-time separator, of size `count`.
    pub separator: Vec<(NodeId, Time)>,
}

/// Maximum number of out-disjoint `s → z` journeys, with a decomposition
/// and a matching minimum departure-time separator.
pub fn max_out_disjoint_journeys(g: &TemporalGraph, s: NodeId, z: NodeId) -> Result<OutDisjoint> {
    check_endpoints(g, s, z)?;
    let Some(mut dn) = departure_network(g, s, z) else {
        return Ok(OutDisjoint { count: 0, journeys: Vec::new(), separator: Vec::new() });
    };
    let count = dn.net.max_flow(dn.src, dn.sink)?;
    let journeys = decompose(g, &dn, s, z, count)?;

    let kinds = &dn.kinds;
    let side = dn
        .net
        .residual_reachable(dn.src, |a| matches!(kinds[a], ArcKind::Vertical | ArcKind::Sink));
    let separator: BTreeSet<(NodeId, Time)> = dn
        .net
        .cut_arcs(&side)
        .into_iter()
        .filter_map(|a| match kinds[a] {
            ArcKind::Departure { node, time, .. } => Some((node, time)),
            _ => None,
        })
        .collect();
    if separator.len() as u64 != count {
        return Err(Error::Internal(format!(
            "departure separator of size {} disagrees with flow {count}",
            separator.len()
        )));
    }
    Ok(OutDisjoint { count, journeys, separator: separator.into_iter().collect() })
}

/// Peels unit flow paths, preferring the sink, then departures, then waiting.
fn decompose(g: &TemporalGraph, dn: &DepartureNetwork, s: NodeId, z: NodeId, count: u64) -> Result<Vec<Journey>> {
    let mut left: Vec<u64> = (0..dn.net.arc_count()).map(|a| dn.net.arc(a).flow).collect();
    let mut journeys = Vec::new();
    for _ in 0..count {
        let mut hops = Vec::new();
        let mut at = dn.src;
        while at != dn.sink {
            let a = dn
                .net
                .out_arcs(at)
                .find(|&a| left[a] > 0)
                .ok_or_else(|| Error::Internal("flow decomposition stalled".into()))?;
            left[a] -= 1;
            if let ArcKind::Departure { time, to: Some(to), .. } = dn.kinds[a] {
                hops.push((time, to));
            }
            at = dn.net.arc(a).to;
        }
        let j = Journey::from_hops(s, &hops)
            .shortcut_to(z)
            .filter(|j| is_journey(g, j))
            .ok_or_else(|| Error::Internal("flow path does not decode to a journey".into()))?;
        journeys.push(j);
    }
    Ok(journeys)
}

/// Minimum set of departures `(node, time)` whose removal (all traversals
/// leaving `node` at `time`) leaves no `s → z` journey.
pub fn min_departure_time_separator(g: &TemporalGraph, s: NodeId, z: NodeId) -> Result<Vec<(NodeId, Time)>> {
    Ok(max_out_disjoint_journeys(g, s, z)?.separator)
}

/// Whether an `s → z` journey exists that never leaves a node at a blocked
/// `(node, time)`.
pub fn has_journey_avoiding(g: &TemporalGraph, s: NodeId, z: NodeId, blocked: &BTreeSet<(NodeId, Time)>) -> bool {
    let mut arrival: Vec<Option<Time>> = vec![None; g.node_count()];
    for a in g.arcs() {
        if a.to == s || arrival[a.to].is_some() || blocked.contains(&(a.from, a.t)) {
            continue;
        }
        if a.from == s || arrival[a.from].is_some_and(|t| t < a.t) {
            arrival[a.to] = Some(a.t);
        }
    }
    s == z || arrival[z].is_some()
}

/// A single-labeled undirected graph on five nodes where the maximum number
/// of node-disjoint journeys from `s` to `z` is 1 but every node separator
/// needs 2 nodes. Returns `(graph, s, z)`.
///
/// Nodes `s=0, z=1, a=2, b=3, c=4`; the journeys pass through `{b,c}`,
/// `{a,b}`, `{a,c}` and `{a,b,c}`: any two meet, yet no single inner node
/// lies on all of them.
pub fn menger_gap_gadget() -> (TemporalGraph, NodeId, NodeId) {
    let edges = [(0, 3, 1), (0, 4, 4), (1, 2, 6), (1, 4, 3), (2, 3, 3), (2, 4, 5), (3, 4, 2)];
    let g = TemporalGraph::build(5, false, edges.iter().map(|&(u, v, t)| (u, v, [t]))).unwrap();
    (g, 0, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, directed: bool, edges: &[(usize, usize, &[u64])]) -> TemporalGraph {
        TemporalGraph::build(n, directed, edges.iter().map(|&(u, v, l)| (u, v, l.to_vec()))).unwrap()
    }

    #[test]
    fn direct_journey_counts_once() {
        let h = g(3, false, &[(0, 1, &[1, 2]), (0, 2, &[1]), (2, 1, &[2])]);
        assert_eq!(max_node_disjoint_journeys(&h, 0, 1, false).unwrap().count, 2);
    }

    #[test]
    fn node_disjoint_examples() {
        let two = g(4, false, &[(0, 2, &[1]), (2, 1, &[2]), (0, 3, &[1]), (3, 1, &[2])]);
        assert_eq!(max_node_disjoint_journeys(&two, 0, 1, false).unwrap().count, 2);
        assert_eq!(min_node_separator(&two, 0, 1, false).unwrap(), vec![2, 3]);
        let path = g(3, false, &[(0, 2, &[1]), (2, 1, &[2])]);
        assert_eq!(max_node_disjoint_journeys(&path, 0, 1, false).unwrap().count, 1);
        let none = g(3, false, &[(0, 2, &[2]), (2, 1, &[1])]);
        assert_eq!(min_node_separator(&none, 0, 1, false).unwrap(), Vec::<NodeId>::new());
        assert_eq!(max_node_disjoint_journeys(&none, 0, 1, false).unwrap().count, 0);
    }

    #[test]
    fn menger_gap_gadget_violates_menger() {
        let (k, s, z) = menger_gap_gadget();
        assert!(k.is_single_labeled());
        let masks: BTreeSet<u64> = all_journeys_between(&k, s, z).iter().map(inner_mask).collect();
        let b = |v: usize| 1u64 << v;
        let expected: BTreeSet<u64> =
            [b(3) | b(4), b(2) | b(3), b(2) | b(3) | b(4), b(2) | b(4)].into_iter().collect();
        assert_eq!(masks, expected);
        assert_eq!(max_node_disjoint_journeys(&k, s, z, false).unwrap().count, 1);
        assert_eq!(min_node_separator(&k, s, z, false).unwrap().len(), 2);
    }

    #[test]
    fn direct_edge_is_inseparable() {
        let h = g(2, false, &[(0, 1, &[1])]);
        assert_eq!(min_node_separator(&h, 0, 1, false), Err(Error::Inseparable));
    }

    #[test]
    fn size_guard() {
        let big = TemporalGraph::build(12, false, [(0, 1, [1])]).unwrap();
        assert!(matches!(max_node_disjoint_journeys(&big, 0, 1, false), Err(Error::TooLarge(_))));
        assert!(max_node_disjoint_journeys(&big, 0, 1, true).is_ok());
    }

    #[test]
    fn edge_disjoint_examples() {
        let tri = g(3, false, &[(0, 2, &[1]), (2, 1, &[2]), (0, 1, &[1])]);
        assert_eq!(max_edge_disjoint_journeys(&tri, 0, 1).unwrap(), 2);
        assert_eq!(min_edge_separator_brute(&tri, 0, 1, false).unwrap().len(), 2);
        let path = g(3, false, &[(0, 2, &[1]), (2, 1, &[2])]);
        assert_eq!(max_edge_disjoint_journeys(&path, 0, 1).unwrap(), 1);
        let none = g(3, false, &[(0, 2, &[2]), (2, 1, &[1])]);
        assert_eq!(max_edge_disjoint_journeys(&none, 0, 1).unwrap(), 0);
        let multi = g(2, false, &[(0, 1, &[1, 2])]);
        assert!(matches!(max_edge_disjoint_journeys(&multi, 0, 1), Err(Error::Unsupported(_))));
    }

    #[test]
    fn edge_disjoint_shares_nodes() {
        // Two journeys through the hub 2, at different times.
        let hub = g(5, true, &[(0, 2, &[1]), (2, 1, &[2]), (0, 3, &[3]), (3, 2, &[4]), (2, 4, &[5]), (4, 1, &[6])]);
        assert_eq!(max_edge_disjoint_journeys(&hub, 0, 1).unwrap(), 2);
        assert_eq!(max_node_disjoint_journeys(&hub, 0, 1, false).unwrap().count, 1);
    }

    #[test]
    fn out_disjoint_examples() {
        let two = g(4, true, &[(0, 2, &[1]), (0, 3, &[2]), (2, 1, &[2]), (3, 1, &[3])]);
        let r = max_out_disjoint_journeys(&two, 0, 1).unwrap();
        assert_eq!(r.count, 2);
        assert_eq!(r.separator.len(), 2);
        let blocked: BTreeSet<_> = r.separator.iter().copied().collect();
        assert!(!has_journey_avoiding(&two, 0, 1, &blocked));

        let path = g(3, false, &[(0, 2, &[1]), (2, 1, &[2])]);
        assert_eq!(max_out_disjoint_journeys(&path, 0, 1).unwrap().count, 1);
        let none = g(3, false, &[(0, 2, &[2]), (2, 1, &[1])]);
        let r = max_out_disjoint_journeys(&none, 0, 1).unwrap();
        assert_eq!((r.count, r.separator.len()), (0, 0));
    }

    #[test]
    fn same_time_departures_collapse() {
        // s leaves at time 1 to both a and b: only one out-disjoint journey.
        let fan = g(4, true, &[(0, 2, &[1]), (0, 3, &[1]), (2, 1, &[2]), (3, 1, &[2])]);
        let r = max_out_disjoint_journeys(&fan, 0, 1).unwrap();
        assert_eq!(r.count, 1);
        assert_eq!(r.separator, vec![(0, 1)]);
    }

    /// Departure sets of all journeys; packing and hitting by plain search.
    fn brute_out_disjoint(g: &TemporalGraph, s: NodeId, z: NodeId) -> (usize, usize) {
        let sets: Vec<BTreeSet<(NodeId, Time)>> =
            all_journeys_between(g, s, z).iter().map(|j| j.departures().collect()).collect();
        fn pack(sets: &[BTreeSet<(NodeId, Time)>], used: &BTreeSet<(NodeId, Time)>) -> usize {
            let Some((first, rest)) = sets.split_first() else { return 0 };
            let skip = pack(rest, used);
            if first.is_disjoint(used) {
                let mut more = used.clone();
                more.extend(first.iter().copied());
                skip.max(1 + pack(rest, &more))
            } else {
                skip
            }
        }
        let universe: BTreeSet<(NodeId, Time)> = sets.iter().flatten().copied().collect();
        let universe: Vec<_> = universe.into_iter().collect();
        let hit = (0..=universe.len())
            .find(|&k| {
                subsets(universe.len(), k).any(|idx| {
                    let cut: BTreeSet<_> = idx.iter().map(|&i| universe[i]).collect();
                    sets.iter().all(|d| !d.is_disjoint(&cut))
                })
            })
            .unwrap();
        (pack(&sets, &BTreeSet::new()), hit)
    }

    fn subsets(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
        let mut idx: Vec<usize> = (0..k).collect();
        let mut done = k > n;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = idx.clone();
            done = true;
            for i in (0..k).rev() {
                if idx[i] < n - k + i {
                    idx[i] += 1;
                    for j in i + 1..k {
                        idx[j] = idx[j - 1] + 1;
                    }
                    done = false;
                    break;
                }
            }
            Some(out)
        })
    }

    #[test]
    fn out_disjoint_duality_small_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..120 {
            let n = rng.gen_range(2..=5);
            let directed = rng.gen_bool(0.5);
            let mut specs = Vec::new();
            for u in 0..n {
                for v in 0..n {
                    if u != v && (directed || u < v) && rng.gen_bool(0.5) {
                        let k = rng.gen_range(1..=2);
                        specs.push((u, v, (0..k).map(|_| rng.gen_range(1..=4)).collect::<Vec<u64>>()));
                    }
                }
            }
            let h = TemporalGraph::build(n, directed, specs).unwrap();
            let r = max_out_disjoint_journeys(&h, 0, n - 1).unwrap();
            let (pack, hit) = brute_out_disjoint(&h, 0, n - 1);
            assert_eq!((r.count as usize, r.separator.len()), (pack, hit), "{}", crate::format::to_tg(&h));
            let blocked: BTreeSet<_> = r.separator.iter().copied().collect();
            assert!(!has_journey_avoiding(&h, 0, n - 1, &blocked));
            let mut used = BTreeSet::new();
            for j in &r.journeys {
                assert!(is_journey(&h, j));
                for d in j.departures() {
                    assert!(used.insert(d));
                }
            }
        }
    }
}
