//! Temporal graph data model.
//!
//! A [`TemporalGraph`] is a static (di)graph whose edges carry ascending sets
//! of positive integer time labels. An edge is available exactly at the times
//! in its label set; an edge with no labels is kept but never available.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};

pub type NodeId = usize;
pub type Time = u64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    /// Strictly ascending, all `>= 1`.
    pub labels: Vec<Time>,
}

/// A single availability `(u, v, t)`. For undirected graphs `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TimeEdge {
    pub u: NodeId,
    pub v: NodeId,
    pub t: Time,
}

/// A traversal of an edge at a given time, `from -> to`. Undirected edges
/// yield one arc per direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arc {
    pub t: Time,
    pub from: NodeId,
    pub to: NodeId,
    pub edge: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalGraph {
    n: usize,
    directed: bool,
    edges: Vec<Edge>,
    index: BTreeMap<(NodeId, NodeId), usize>,
    /// Every traversal, sorted by `(t, from, to)`.
    arcs: Vec<Arc>,
    /// Per node: `(neighbor, edge index)` for edges leaving the node.
    out: Vec<Vec<(NodeId, usize)>>,
}

fn key(directed: bool, u: NodeId, v: NodeId) -> (NodeId, NodeId) {
    if directed || u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl TemporalGraph {
    /// Builds a normalized temporal graph.
    ///
    /// Labels are sorted and deduplicated, and repeated records of the same
    /// node pair are merged by label-set union.
    pub fn build<I, L>(n: usize, directed: bool, specs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId, L)>,
        L: IntoIterator<Item = Time>,
    {
        if n == 0 {
            return Err(Error::Invalid("node count must be positive".into()));
        }
        let mut merged: BTreeMap<(NodeId, NodeId), Vec<Time>> = BTreeMap::new();
        for (u, v, labels) in specs {
            for node in [u, v] {
                if node >= n {
                    return Err(Error::InvalidNode { node, n });
                }
            }
            if u == v {
                return Err(Error::InvalidEdge(format!("self-loop at node {u}")));
            }
            let entry = merged.entry(key(directed, u, v)).or_default();
            for t in labels {
                if t == 0 {
                    return Err(Error::InvalidEdge(format!(
                        "edge ({u},{v}) has label 0; labels must be >= 1"
                    )));
                }
                entry.push(t);
            }
        }
        let edges = merged
            .into_iter()
            .map(|((u, v), mut labels)| {
                labels.sort_unstable();
                labels.dedup();
                Edge { u, v, labels }
            })
            .collect();
        Ok(Self::from_normalized(n, directed, edges))
    }

    fn from_normalized(n: usize, directed: bool, edges: Vec<Edge>) -> Self {
        let mut index = BTreeMap::new();
        let mut out = vec![Vec::new(); n];
        let mut arcs = Vec::new();
        for (i, e) in edges.iter().enumerate() {
            index.insert((e.u, e.v), i);
            out[e.u].push((e.v, i));
            if !directed {
                out[e.v].push((e.u, i));
            }
            for &t in &e.labels {
                arcs.push(Arc { t, from: e.u, to: e.v, edge: i });
                if !directed {
                    arcs.push(Arc { t, from: e.v, to: e.u, edge: i });
                }
            }
        }
        arcs.sort_unstable();
        for list in &mut out {
            list.sort_unstable();
        }
        TemporalGraph { n, directed, edges, index, arcs, out }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_index(&self, u: NodeId, v: NodeId) -> Option<usize> {
        self.index.get(&key(self.directed, u, v)).copied()
    }

    /// Labels of the edge usable from `u` to `v`; empty if there is none.
    pub fn labels(&self, u: NodeId, v: NodeId) -> &[Time] {
        match self.edge_index(u, v) {
            Some(i) => &self.edges[i].labels,
            None => &[],
        }
    }

    pub fn has_time_edge(&self, u: NodeId, v: NodeId, t: Time) -> bool {
        self.labels(u, v).binary_search(&t).is_ok()
    }

    /// Smallest label of edge `u -> v` that is `>= t`.
    pub fn next_label(&self, u: NodeId, v: NodeId, t: Time) -> Option<Time> {
        let labels = self.labels(u, v);
        let i = labels.partition_point(|&l| l < t);
        labels.get(i).copied()
    }

    /// Out-neighbors as `(neighbor, edge index)`, sorted by neighbor.
    pub fn out_neighbors(&self, u: NodeId) -> &[(NodeId, usize)] {
        &self.out[u]
    }

    /// All traversals sorted by time.
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Traversals with time `>= t`.
    pub fn arcs_from(&self, t: Time) -> &[Arc] {
        let i = self.arcs.partition_point(|a| a.t < t);
        &self.arcs[i..]
    }

    pub fn time_edges(&self) -> impl Iterator<Item = TimeEdge> + '_ {
        self.edges
            .iter()
            .flat_map(|e| e.labels.iter().map(move |&t| TimeEdge { u: e.u, v: e.v, t }))
    }

    pub fn lambda_min(&self) -> Option<Time> {
        self.edges.iter().filter_map(|e| e.labels.first()).min().copied()
    }

    pub fn lambda_max(&self) -> Option<Time> {
        self.edges.iter().filter_map(|e| e.labels.last()).max().copied()
    }

    /// `λ_max − λ_min + 1`.
    pub fn age(&self) -> Result<Time> {
        match (self.lambda_min(), self.lambda_max()) {
            (Some(lo), Some(hi)) => Ok(hi - lo + 1),
            _ => Err(Error::Undefined("age of a temporal graph without labels")),
        }
    }

    /// `|λ|`, the total number of labels.
    pub fn label_count(&self) -> usize {
        self.edges.iter().map(|e| e.labels.len()).sum()
    }

    pub fn max_labels_per_edge(&self) -> usize {
        self.edges.iter().map(|e| e.labels.len()).max().unwrap_or(0)
    }

    pub fn is_single_labeled(&self) -> bool {
        self.edges.iter().all(|e| e.labels.len() == 1)
    }

    /// Distinct label values in ascending order.
    pub fn distinct_times(&self) -> Vec<Time> {
        let mut times: Vec<Time> = self.arcs.iter().map(|a| a.t).collect();
        times.dedup();
        times
    }

    /// The edge set `A(t)` of the `t`-th instance.
    pub fn instance(&self, t: Time) -> Vec<(NodeId, NodeId)> {
        self.edges
            .iter()
            .filter(|e| e.labels.binary_search(&t).is_ok())
            .map(|e| (e.u, e.v))
            .collect()
    }

    /// Rebuilds the graph with every label passed through `f`; labels mapped
    /// to `None` are dropped.
    pub fn map_labels(&self, mut f: impl FnMut(Time) -> Option<Time>) -> Result<Self> {
        let specs: Vec<_> = self
            .edges
            .iter()
            .map(|e| (e.u, e.v, e.labels.iter().filter_map(|&t| f(t)).collect::<Vec<_>>()))
            .collect();
        Self::build(self.n, self.directed, specs)
    }

    /// Shifts labels so that `λ_min` becomes 1. Graphs without labels are
    /// returned unchanged.
    pub fn normalized(&self) -> Self {
        match self.lambda_min() {
            Some(lo) if lo > 1 => self
                .map_labels(|t| Some(t - (lo - 1)))
                .expect("shifting preserves validity"),
            _ => self.clone(),
        }
    }

    /// The graph restricted to labels satisfying `keep`.
    pub fn filter_labels(&self, mut keep: impl FnMut(Time) -> bool) -> Self {
        self.map_labels(|t| keep(t).then_some(t))
            .expect("filtering preserves validity")
    }

    /// The same graph with every undirected edge replaced by two arcs.
    pub fn to_directed(&self) -> Self {
        if self.directed {
            return self.clone();
        }
        let specs = self.edges.iter().flat_map(|e| {
            [(e.u, e.v, e.labels.clone()), (e.v, e.u, e.labels.clone())]
        });
        Self::build(self.n, true, specs).expect("orientation preserves validity")
    }

    pub fn underlying(&self) -> StaticGraph {
        StaticGraph {
            n: self.n,
            directed: self.directed,
            edges: self.edges.iter().map(|e| (e.u, e.v)).collect(),
        }
    }

    /// True iff every instance `t ∈ [λ_min, λ_max]` is connected over all
    /// nodes (strongly connected for digraphs).
    pub fn is_continuously_connected(&self) -> bool {
        if self.n == 1 {
            return true;
        }
        let (Some(lo), Some(hi)) = (self.lambda_min(), self.lambda_max()) else {
            return false;
        };
        let times = self.distinct_times();
        if (times.len() as u64) < hi - lo + 1 {
            return false;
        }
        times.into_iter().all(|t| {
            let edges = self.instance(t);
            if self.directed {
                is_strongly_connected(self.n, &edges)
            } else {
                is_connected(self.n, &edges)
            }
        })
    }

    pub fn static_expansion(&self, include_vertical: bool) -> Result<StaticExpansion> {
        let (Some(lo), Some(hi)) = (self.lambda_min(), self.lambda_max()) else {
            return Err(Error::Undefined("static expansion of a graph without labels"));
        };
        let diagonal = self
            .arcs
            .iter()
            .map(|a| DiagonalArc { level: a.t, from: a.from, to: a.to })
            .collect();
        Ok(StaticExpansion {
            n: self.n,
            first_level: lo - 1,
            last_level: hi,
            include_vertical,
            diagonal,
        })
    }
}

/// A plain (di)graph without labels; the input of design problems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaticGraph {
    pub n: usize,
    pub directed: bool,
    pub edges: Vec<(NodeId, NodeId)>,
}

impl StaticGraph {
    pub fn new(n: usize, directed: bool, edges: Vec<(NodeId, NodeId)>) -> Result<Self> {
        // Validation goes through the temporal builder.
        let g = TemporalGraph::build(n, directed, edges.iter().map(|&(u, v)| (u, v, [])))?;
        Ok(g.underlying())
    }

    pub fn directed_ring(n: usize) -> Result<Self> {
        Self::new(n, true, (0..n).map(|i| (i, (i + 1) % n)).collect())
    }

    pub fn complete_digraph(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        StaticGraph { n, directed: true, edges }
    }

    /// Attaches one label list per edge (in edge order).
    pub fn with_labels(&self, labels: &[Vec<Time>]) -> Result<TemporalGraph> {
        if labels.len() != self.edges.len() {
            return Err(Error::Invalid(format!(
                "{} label lists for {} edges",
                labels.len(),
                self.edges.len()
            )));
        }
        TemporalGraph::build(
            self.n,
            self.directed,
            self.edges.iter().zip(labels).map(|(&(u, v), l)| (u, v, l.clone())),
        )
    }

    pub fn out_adjacency(&self) -> Vec<Vec<NodeId>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            if !self.directed {
                adj[v].push(u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Nodes reachable from `s` (including `s`).
    pub fn reachable_from(&self, s: NodeId) -> Vec<bool> {
        bfs_reach(&self.out_adjacency(), s)
    }

    pub fn is_strongly_connected(&self) -> bool {
        if self.directed {
            is_strongly_connected(self.n, &self.edges)
        } else {
            is_connected(self.n, &self.edges)
        }
    }
}

fn bfs_reach(adj: &[Vec<NodeId>], s: NodeId) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

pub(crate) fn is_connected(n: usize, edges: &[(NodeId, NodeId)]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    bfs_reach(&adj, 0).into_iter().all(|b| b)
}

pub(crate) fn is_strongly_connected(n: usize, edges: &[(NodeId, NodeId)]) -> bool {
    let mut fwd = vec![Vec::new(); n];
    let mut bwd = vec![Vec::new(); n];
    for &(u, v) in edges {
        fwd[u].push(v);
        bwd[v].push(u);
    }
    bfs_reach(&fwd, 0).into_iter().all(|b| b) && bfs_reach(&bwd, 0).into_iter().all(|b| b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct DiagonalArc {
    /// Level of the head; the tail sits at `level - 1`.
    pub level: Time,
    pub from: NodeId,
    pub to: NodeId,
}

/// Layered DAG with a copy of the node set for every level
/// `λ_min − 1 ..= λ_max`. Time-node `(i, j)` has id `(i − first_level)·n + j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaticExpansion {
    pub n: usize,
    pub first_level: Time,
    pub last_level: Time,
    pub include_vertical: bool,
    pub diagonal: Vec<DiagonalArc>,
}

impl StaticExpansion {
    pub fn level_count(&self) -> usize {
        (self.last_level - self.first_level + 1) as usize
    }

    pub fn time_node_count(&self) -> usize {
        self.level_count() * self.n
    }

    pub fn time_node(&self, level: Time, node: NodeId) -> usize {
        debug_assert!(level >= self.first_level && level <= self.last_level);
        (level - self.first_level) as usize * self.n + node
    }

    /// Inverse of [`time_node`](Self::time_node).
    pub fn level_and_node(&self, id: usize) -> (Time, NodeId) {
        (self.first_level + (id / self.n) as u64, id % self.n)
    }

    pub fn vertical_arc_count(&self) -> usize {
        if self.include_vertical {
            (self.level_count() - 1) * self.n
        } else {
            0
        }
    }

    pub fn diagonal_arc_count(&self) -> usize {
        self.diagonal.len()
    }

    /// Every arc as a pair of time-node ids, verticals first.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut arcs = Vec::with_capacity(self.vertical_arc_count() + self.diagonal.len());
        if self.include_vertical {
            for level in self.first_level + 1..=self.last_level {
                for j in 0..self.n {
                    arcs.push((self.time_node(level - 1, j), self.time_node(level, j)));
                }
            }
        }
        for d in &self.diagonal {
            arcs.push((self.time_node(d.level - 1, d.from), self.time_node(d.level, d.to)));
        }
        arcs
    }

    pub fn has_path(&self, from: usize, to: usize) -> bool {
        let mut adj = vec![Vec::new(); self.time_node_count()];
        for (a, b) in self.arcs() {
            adj[a].push(b);
        }
        bfs_reach(&adj, from)[to]
    }
}
