//! Integral max-flow (Dinic) on explicit networks.

use std::collections::VecDeque;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlowArc {
    pub from: usize,
    pub to: usize,
    pub cap: u64,
    pub flow: u64,
}

/// Arcs are stored in pairs: arc `2i` is the user arc, `2i + 1` its residual
/// twin. Arc ids returned by [`add_arc`](Self::add_arc) index user arcs.
#[derive(Debug, Clone, Default)]
pub struct FlowNetwork {
    arcs: Vec<FlowArc>,
    adj: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork { arcs: Vec::new(), adj: vec![Vec::new(); nodes] }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn add_node(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn add_arc(&mut self, from: usize, to: usize, cap: u64) -> usize {
        let id = self.arcs.len();
        self.arcs.push(FlowArc { from, to, cap, flow: 0 });
        self.arcs.push(FlowArc { from: to, to: from, cap: 0, flow: 0 });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id / 2
    }

    pub fn arc(&self, id: usize) -> FlowArc {
        self.arcs[2 * id]
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len() / 2
    }

    /// User arcs leaving `node`, in insertion order.
    pub fn out_arcs(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[node].iter().filter(|&&a| a % 2 == 0).map(|&a| a / 2)
    }

    fn residual(&self, a: usize) -> u64 {
        let arc = &self.arcs[a];
        if a.is_multiple_of(2) {
            arc.cap - arc.flow
        } else {
            self.arcs[a - 1].flow
        }
    }

    fn push(&mut self, a: usize, amount: u64) {
        if a.is_multiple_of(2) {
            self.arcs[a].flow += amount;
        } else {
            self.arcs[a - 1].flow -= amount;
        }
    }

    fn levels(&self, src: usize) -> Vec<u32> {
        let mut level = vec![u32::MAX; self.adj.len()];
        level[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let v = self.arcs[a].to;
                if level[v] == u32::MAX && self.residual(a) > 0 {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        level
    }

    /// Blocking-flow augmentation, iterative to survive long layered paths.
    fn augment(&mut self, src: usize, sink: usize, level: &[u32], next: &mut [usize]) -> u64 {
        let mut total = 0;
        let mut path: Vec<usize> = Vec::new();
        let mut u = src;
        loop {
            if u == sink {
                let amount = path.iter().map(|&a| self.residual(a)).min().unwrap_or(0);
                for &a in &path {
                    self.push(a, amount);
                }
                total += amount;
                // Restart from the tail of the first saturated arc.
                let cut = path.iter().position(|&a| self.residual(a) == 0).unwrap_or(0);
                path.truncate(cut);
                u = path.last().map_or(src, |&a| self.arcs[a].to);
                continue;
            }
            let mut advanced = false;
            while next[u] < self.adj[u].len() {
                let a = self.adj[u][next[u]];
                let v = self.arcs[a].to;
                if self.residual(a) > 0 && level[v] == level[u] + 1 {
                    path.push(a);
                    u = v;
                    advanced = true;
                    break;
                }
                next[u] += 1;
            }
            if !advanced {
                // Dead end: retreat.
                match path.pop() {
                    Some(a) => {
                        u = self.arcs[a].from;
                        next[u] += 1;
                    }
                    None => return total,
                }
            }
        }
    }

    /// Maximum `src → sink` flow; the flow stays stored on the arcs.
    pub fn max_flow(&mut self, src: usize, sink: usize) -> Result<u64> {
        let n = self.adj.len();
        if src >= n || sink >= n {
            return Err(Error::Invalid(format!("flow endpoint out of range (network has {n} nodes)")));
        }
        if src == sink {
            return Err(Error::Invalid("flow source equals sink".into()));
        }
        let mut value = 0;
        loop {
            let level = self.levels(src);
            if level[sink] == u32::MAX {
                return Ok(value);
            }
            let mut next = vec![0; n];
            value += self.augment(src, sink, &level, &mut next);
        }
    }

    /// Nodes reachable from `src` in the residual network. Arcs for which
    /// `infinite` holds are treated as having unbounded capacity.
    pub fn residual_reachable(&self, src: usize, infinite: impl Fn(usize) -> bool) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[src] = true;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let v = self.arcs[a].to;
                let open = self.residual(a) > 0 || (a % 2 == 0 && infinite(a / 2));
                if !seen[v] && open {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    /// User arcs crossing from a source side to its complement.
    pub fn cut_arcs(&self, source_side: &[bool]) -> Vec<usize> {
        (0..self.arc_count())
            .filter(|&id| {
                let a = self.arc(id);
                source_side[a.from] && !source_side[a.to]
            })
            .collect()
    }
}
