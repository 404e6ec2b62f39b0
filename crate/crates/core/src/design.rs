//! Temporal network design: labelings of a static digraph that preserve all
//! simple paths as journeys, or all reachabilities, with few labels per edge.

use std::collections::{BTreeSet, HashSet, VecDeque};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{NodeId, StaticGraph, TemporalGraph, Time};
use crate::journeys::foremost_journeys;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    /// Every simple path of the graph is realizable as a journey.
    AllPaths,
    /// Every statically reachable ordered pair is joined by a journey.
    Reachability,
}

impl std::str::FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all-paths" | "all_paths" | "ALL_PATHS" => Ok(Property::AllPaths),
            "reachability" | "REACHABILITY" => Ok(Property::Reachability),
            other => Err(Error::Invalid(format!("unknown property `{other}`"))),
        }
    }
}

pub const ALL_PATHS_MAX_NODES: usize = 20;
pub const EXACT_MAX_NODES: usize = 8;
pub const EXACT_MAX_EDGES: usize = 16;
pub const KERNEL_MAX_EDGES: usize = 8;

/// Kahn's algorithm, smallest ready node first.
fn topological_order(g: &StaticGraph) -> Option<Vec<NodeId>> {
    let mut indeg = vec![0usize; g.n];
    for &(_, v) in &g.edges {
        indeg[v] += 1;
    }
    let adj = g.out_adjacency();
    let mut ready: BTreeSet<NodeId> = (0..g.n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(g.n);
    while let Some(u) = ready.pop_first() {
        order.push(u);
        for &v in &adj[u] {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                ready.insert(v);
            }
        }
    }
    (order.len() == g.n).then_some(order)
}

fn require_directed(g: &StaticGraph) -> Result<()> {
    if g.directed {
        Ok(())
    } else {
        Err(Error::Unsupported("labeling design expects a directed graph".into()))
    }
}

/// Every edge gets the topological rank (from 1) of its tail, so labels
/// strictly increase along every path.
pub fn label_dag_all_paths(g: &StaticGraph) -> Result<TemporalGraph> {
    require_directed(g)?;
    let order = topological_order(g).ok_or(Error::NotADag)?;
    let mut rank = vec![0; g.n];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i as Time + 1;
    }
    let labels: Vec<Vec<Time>> = g.edges.iter().map(|&(u, _)| vec![rank[u]]).collect();
    g.with_labels(&labels)
}

/// The directed ring `u_1 → u_2 → … → u_n → u_1` (node `i` is `u_{i+1}`)
/// where edge `(u_i, u_{i+1})` carries `{i, n + i}`.
pub fn label_ring_all_paths(n: usize) -> Result<TemporalGraph> {
    if n < 3 {
        return Err(Error::Invalid(format!("a ring needs at least 3 nodes, got {n}")));
    }
    let ring = StaticGraph::directed_ring(n)?;
    let labels: Vec<Vec<Time>> = ring
        .edges
        .iter()
        .map(|&(u, _)| vec![u as Time + 1, (n + u) as Time + 1])
        .collect();
    ring.with_labels(&labels)
}

/// BFS tree towards (`reverse`) or away from `root`: per node its tree
/// parent edge index and depth.
fn bfs_tree(g: &StaticGraph, root: NodeId, reverse: bool) -> (Vec<Option<usize>>, Vec<usize>) {
    let mut adj: Vec<Vec<(NodeId, usize)>> = vec![Vec::new(); g.n];
    for (e, &(u, v)) in g.edges.iter().enumerate() {
        if reverse {
            adj[v].push((u, e));
        } else {
            adj[u].push((v, e));
        }
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    let mut parent_edge = vec![None; g.n];
    let mut depth = vec![usize::MAX; g.n];
    depth[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &(v, e) in &adj[u] {
            if depth[v] == usize::MAX {
                depth[v] = depth[u] + 1;
                parent_edge[v] = Some(e);
                queue.push_back(v);
            }
        }
    }
    (parent_edge, depth)
}

/// At most two labels per edge preserving all reachabilities of a strongly
/// connected digraph: a BFS in-tree into node 0 labeled by level counting
/// from the leaves (`1..=h`), then a BFS out-tree from node 0 labeled from
/// the root downwards starting at `h + 1`.
pub fn label_reachability(g: &StaticGraph) -> Result<TemporalGraph> {
    require_directed(g)?;
    if !g.is_strongly_connected() {
        return Err(Error::Unsupported("reachability labeling needs a strongly connected digraph".into()));
    }
    let mut labels: Vec<Vec<Time>> = vec![Vec::new(); g.edges.len()];
    let (in_parent, in_depth) = bfs_tree(g, 0, true);
    let height = in_depth.iter().copied().max().unwrap_or(0) as Time;
    for v in 0..g.n {
        if let Some(e) = in_parent[v] {
            labels[e].push(height - in_depth[v] as Time + 1);
        }
    }
    let (out_parent, out_depth) = bfs_tree(g, 0, false);
    for v in 0..g.n {
        if let Some(e) = out_parent[v] {
            labels[e].push(height + out_depth[v] as Time);
        }
    }
    g.with_labels(&labels)
}

/// Adjacency `(head, edge index)` honoring directedness.
fn edge_adjacency(g: &StaticGraph) -> Vec<Vec<(NodeId, usize)>> {
    let mut adj = vec![Vec::new(); g.n];
    for (e, &(u, v)) in g.edges.iter().enumerate() {
        adj[u].push((v, e));
        if !g.directed {
            adj[v].push((u, e));
        }
    }
    adj
}

/// Every simple path over edges with `Some` labels is realizable. A path is
/// realizable iff taking the earliest usable label at each step succeeds, so
/// a DFS over `(visited set, end, earliest time)` states decides it.
fn all_paths_realizable(n: usize, adj: &[Vec<(NodeId, usize)>], labels: &[Option<&[Time]>]) -> bool {
    fn dfs(
        adj: &[Vec<(NodeId, usize)>],
        labels: &[Option<&[Time]>],
        mask: u32,
        end: NodeId,
        t: Time,
        seen: &mut HashSet<(u32, NodeId, Time)>,
    ) -> bool {
        if !seen.insert((mask, end, t)) {
            return true;
        }
        for &(v, e) in &adj[end] {
            if mask >> v & 1 == 1 {
                continue;
            }
            let Some(ls) = labels[e] else { continue };
            let i = ls.partition_point(|&x| x <= t);
            let Some(&next) = ls.get(i) else { return false };
            if !dfs(adj, labels, mask | 1 << v, v, next, seen) {
                return false;
            }
        }
        true
    }
    let mut seen = HashSet::new();
    (0..n).all(|s| dfs(adj, labels, 1 << s, s, 0, &mut seen))
}

fn labels_of(g: &StaticGraph, labeling: &TemporalGraph) -> Result<Vec<Vec<Time>>> {
    if labeling.node_count() != g.n || labeling.is_directed() != g.directed {
        return Err(Error::Invalid("labeling does not match the graph's nodes or orientation".into()));
    }
    let known: BTreeSet<(NodeId, NodeId)> = g
        .edges
        .iter()
        .map(|&(u, v)| if g.directed || u < v { (u, v) } else { (v, u) })
        .collect();
    for e in labeling.edges() {
        if !known.contains(&(e.u, e.v)) {
            return Err(Error::Invalid(format!("labeled edge ({}, {}) is not in the graph", e.u, e.v)));
        }
    }
    Ok(g.edges.iter().map(|&(u, v)| labeling.labels(u, v).to_vec()).collect())
}

/// Checks a labeling of `g` against `property`.
pub fn verify_labeling(g: &StaticGraph, labeling: &TemporalGraph, property: Property) -> Result<bool> {
    let labels = labels_of(g, labeling)?;
    match property {
        Property::AllPaths => {
            if g.n > ALL_PATHS_MAX_NODES {
                return Err(Error::TooLarge(format!(
                    "all-paths verification supports at most {ALL_PATHS_MAX_NODES} nodes"
                )));
            }
            let refs: Vec<Option<&[Time]>> = labels.iter().map(|l| Some(l.as_slice())).collect();
            Ok(all_paths_realizable(g.n, &edge_adjacency(g), &refs))
        }
        Property::Reachability => Ok((0..g.n).all(|u| {
            let reach = g.reachable_from(u);
            let tree = foremost_journeys(labeling, u, 0).expect("node in range");
            (0..g.n).all(|v| !reach[v] || tree.is_reached(v))
        })),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Temporality {
    pub value: usize,
    /// A labeling attaining `value`.
    pub witness: TemporalGraph,
}

/// Lexicographic `k`-subsets of `1..=universe`.
fn label_sets(universe: Time, k: usize) -> Vec<Vec<Time>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(next: Time, universe: Time, k: usize, cur: &mut Vec<Time>, out: &mut Vec<Vec<Time>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let need = (k - cur.len()) as Time;
        for t in next..=universe + 1 - need {
            cur.push(t);
            rec(t + 1, universe, k, cur, out);
            cur.pop();
        }
    }
    if k as Time <= universe {
        rec(1, universe, k, &mut cur, &mut out);
    }
    out
}

struct Search<'a> {
    g: &'a StaticGraph,
    adj: Vec<Vec<(NodeId, usize)>>,
    /// Edge indices in assignment order.
    order: Vec<usize>,
    candidates: Vec<Vec<Time>>,
    property: Property,
}

impl Search<'_> {
    fn feasible(&self, assigned: &mut Vec<Option<usize>>, depth: usize) -> bool {
        if self.property == Property::AllPaths || depth == self.order.len() {
            let refs: Vec<Option<&[Time]>> =
                assigned.iter().map(|c| c.map(|c| self.candidates[c].as_slice())).collect();
            let ok = match self.property {
                Property::AllPaths => all_paths_realizable(self.g.n, &self.adj, &refs),
                Property::Reachability => self.reachability_ok(&refs),
            };
            if !ok {
                return false;
            }
        }
        if depth == self.order.len() {
            return true;
        }
        let e = self.order[depth];
        for c in 0..self.candidates.len() {
            assigned[e] = Some(c);
            if self.feasible(assigned, depth + 1) {
                return true;
            }
        }
        assigned[e] = None;
        false
    }

    fn reachability_ok(&self, refs: &[Option<&[Time]>]) -> bool {
        let labels: Vec<Vec<Time>> = refs.iter().map(|l| l.unwrap_or(&[]).to_vec()).collect();
        let labeling = self.g.with_labels(&labels).expect("labels come from the graph");
        verify_labeling(self.g, &labeling, Property::Reachability).unwrap_or(false)
    }

    /// First feasible assignment, exploring the first edge's choices in
    /// parallel but reporting the lexicographically first success.
    fn solve(&self) -> Option<Vec<Vec<Time>>> {
        let m = self.g.edges.len();
        let first = *self.order.first()?;
        (0..self.candidates.len()).into_par_iter().find_map_first(|c| {
            let mut assigned = vec![None; m];
            assigned[first] = Some(c);
            self.feasible(&mut assigned, 1).then(|| {
                assigned.iter().map(|c| self.candidates[c.unwrap()].clone()).collect()
            })
        })
    }
}

/// Edge order for the search: by BFS rank of the tail (topological rank for
/// DAGs), so consecutive path edges are assigned close together.
fn search_order(g: &StaticGraph) -> Vec<usize> {
    let node_order = topological_order(g).unwrap_or_else(|| {
        let adj = g.out_adjacency();
        let mut seen = vec![false; g.n];
        let mut order = Vec::new();
        for s in 0..g.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                order.push(u);
                for &v in &adj[u] {
                    if !std::mem::replace(&mut seen[v], true) {
                        queue.push_back(v);
                    }
                }
            }
        }
        order
    });
    let mut rank = vec![0; g.n];
    for (i, &v) in node_order.iter().enumerate() {
        rank[v] = i;
    }
    let mut order: Vec<usize> = (0..g.edges.len()).collect();
    order.sort_by_key(|&e| (rank[g.edges[e].0], rank[g.edges[e].1]));
    order
}

/// Minimum over labelings of the maximum number of labels per edge such that
/// `property` holds, by exhaustive search for `k = 1, 2, …`.
///
/// With `max_age` labels range over `1..=max_age`. Without it they range
/// over `1..=m·k`: only the relative order of the at most `m·k` labels
/// matters, so any labeling can be compressed into that range. Labeling
/// every edge `1..=n−1` preserves every simple path, so `k ≤ n − 1`.
pub fn temporality_exact(g: &StaticGraph, property: Property, max_age: Option<Time>) -> Result<Temporality> {
    if g.n > EXACT_MAX_NODES || g.edges.len() > EXACT_MAX_EDGES {
        return Err(Error::TooLarge(format!(
            "exact temporality supports n ≤ {EXACT_MAX_NODES} and m ≤ {EXACT_MAX_EDGES}"
        )));
    }
    if max_age == Some(0) {
        return Err(Error::Invalid("max age must be at least 1".into()));
    }
    let m = g.edges.len();
    if m == 0 {
        return Ok(Temporality { value: 0, witness: g.with_labels(&[])? });
    }
    let adj = edge_adjacency(g);
    let order = search_order(g);
    let cap = (g.n - 1).max(1);
    for k in 1..=cap {
        let universe = max_age.unwrap_or((m * k) as Time);
        if (k as Time) > universe {
            break;
        }
        let search = Search {
            g,
            adj: adj.clone(),
            order: order.clone(),
            candidates: label_sets(universe, k),
            property,
        };
        if let Some(labels) = search.solve() {
            return Ok(Temporality { value: k, witness: g.with_labels(&labels)? });
        }
    }
    Err(Error::Infeasible(match max_age {
        Some(a) => format!("no labeling with labels in 1..={a} satisfies the property"),
        None => "no labeling satisfies the property".into(),
    }))
}

fn kernel_orientations(g: &StaticGraph, kernel: &[(NodeId, NodeId)]) -> Result<Vec<Vec<(NodeId, NodeId)>>> {
    let present: BTreeSet<(NodeId, NodeId)> = g.edges.iter().copied().collect();
    let mut seen = BTreeSet::new();
    kernel
        .iter()
        .map(|&(u, v)| {
            let canon = if g.directed || u < v { (u, v) } else { (v, u) };
            if !present.contains(&canon) && !present.contains(&(u, v)) {
                return Err(Error::InvalidEdge(format!("({u}, {v}) is not an edge of the graph")));
            }
            if !seen.insert(canon) {
                return Err(Error::InvalidEdge(format!("({u}, {v}) appears twice in the kernel")));
            }
            Ok(if g.directed { vec![(u, v)] } else { vec![(u, v), (v, u)] })
        })
        .collect()
}

/// A simple path traversing the given edges in order (each in one of its
/// allowed orientations), connecting consecutive ones by arbitrary detours.
fn ordered_path_exists(adj: &[Vec<NodeId>], steps: &[&Vec<(NodeId, NodeId)>]) -> bool {
    fn connect(adj: &[Vec<NodeId>], at: NodeId, steps: &[&Vec<(NodeId, NodeId)>], used: &mut Vec<bool>) -> bool {
        let Some((step, rest)) = steps.split_first() else {
            return true;
        };
        for &(a, b) in step.iter() {
            if used[b] {
                continue;
            }
            // Walk from `at` to `a` through unused nodes, then take (a, b).
            if (a == at || !used[a])
                && reach(adj, at, a, b, rest, used) {
                    return true;
                }
        }
        false
    }
    fn reach(
        adj: &[Vec<NodeId>],
        at: NodeId,
        a: NodeId,
        b: NodeId,
        rest: &[&Vec<(NodeId, NodeId)>],
        used: &mut Vec<bool>,
    ) -> bool {
        if at == a {
            used[b] = true;
            let ok = connect(adj, b, rest, used);
            used[b] = false;
            return ok;
        }
        for &v in &adj[at] {
            if used[v] || v == b {
                continue;
            }
            used[v] = true;
            let ok = reach(adj, v, a, b, rest, used);
            used[v] = false;
            if ok {
                return true;
            }
        }
        false
    }
    let n = adj.len();
    let Some((first, rest)) = steps.split_first() else {
        return true;
    };
    first.iter().any(|&(a, b)| {
        let mut used = vec![false; n];
        used[a] = true;
        used[b] = true;
        connect(adj, b, rest, &mut used)
    })
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

/// Whether every ordering of `kernel` is followed by some simple path of
/// `g`, each edge traversed in its own direction.
pub fn is_edge_kernel(g: &StaticGraph, kernel: &[(NodeId, NodeId)]) -> Result<bool> {
    if kernel.len() > KERNEL_MAX_EDGES {
        return Err(Error::TooLarge(format!("kernels of more than {KERNEL_MAX_EDGES} edges")));
    }
    let orientations = kernel_orientations(g, kernel)?;
    let adj = g.out_adjacency();
    let mut perm: Vec<usize> = (0..kernel.len()).collect();
    loop {
        let steps: Vec<&Vec<(NodeId, NodeId)>> = perm.iter().map(|&i| &orientations[i]).collect();
        if !ordered_path_exists(&adj, &steps) {
            return Ok(false);
        }
        if !next_permutation(&mut perm) {
            return Ok(true);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelSearch {
    /// Size of the largest kernel found; a lower bound on the all-paths
    /// temporality.
    pub size: usize,
    pub kernel: Vec<(NodeId, NodeId)>,
    /// Kernel checks spent.
    pub checks: usize,
    /// Whether the search finished before the budget ran out.
    pub complete: bool,
}

/// Level-wise growth of edge kernels. Being a kernel is inherited by
/// subsets, so a size-`j+1` candidate is only checked when all of its
/// size-`j` subsets are kernels. `budget` bounds the number of checks.
pub fn edge_kernel_lower_bound(g: &StaticGraph, budget: usize) -> KernelSearch {
    let m = g.edges.len();
    if m == 0 {
        return KernelSearch { size: 0, kernel: Vec::new(), checks: 0, complete: true };
    }
    let mut level: Vec<Vec<usize>> = (0..m).map(|e| vec![e]).collect();
    let mut best = vec![0];
    let mut checks = 0;
    while !level.is_empty() && level[0].len() < KERNEL_MAX_EDGES {
        let known: HashSet<Vec<usize>> = level.iter().cloned().collect();
        let mut next = Vec::new();
        for set in &level {
            for e in set.last().unwrap() + 1..m {
                let mut cand = set.clone();
                cand.push(e);
                let closed = (0..cand.len() - 1).all(|skip| {
                    let sub: Vec<usize> =
                        cand.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &x)| x).collect();
                    known.contains(&sub)
                });
                if !closed {
                    continue;
                }
                if checks == budget {
                    return KernelSearch { size: best.len(), kernel: edges_of(g, &best), checks, complete: false };
                }
                checks += 1;
                let edges = edges_of(g, &cand);
                if is_edge_kernel(g, &edges).unwrap_or(false) {
                    next.push(cand);
                }
            }
        }
        if let Some(first) = next.first() {
            best = first.clone();
        }
        level = next;
    }
    KernelSearch { size: best.len(), kernel: edges_of(g, &best), checks, complete: true }
}

fn edges_of(g: &StaticGraph, ids: &[usize]) -> Vec<(NodeId, NodeId)> {
    ids.iter().map(|&e| g.edges[e]).collect()
}
