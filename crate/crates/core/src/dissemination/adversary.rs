use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{DisseminationState, Token};
use crate::graph::NodeId;

/// Reveals the round's topology after seeing every node's choice. Must
/// return a connected graph over all nodes.
pub trait Adversary {
    fn reveal(&mut self, state: &DisseminationState, choices: &[Option<Token>]) -> Vec<(NodeId, NodeId)>;

    /// Whether the last round's expensive/cheap matching succeeded, for
    /// adversaries that build one.
    fn matched(&self) -> Option<bool> {
        None
    }
}

/// The same topology every round.
#[derive(Debug, Clone)]
pub struct StaticAdversary {
    edges: Vec<(NodeId, NodeId)>,
}

impl StaticAdversary {
    pub fn new(edges: Vec<(NodeId, NodeId)>) -> Self {
        StaticAdversary { edges }
    }
}

impl Adversary for StaticAdversary {
    fn reveal(&mut self, _: &DisseminationState, _: &[Option<Token>]) -> Vec<(NodeId, NodeId)> {
        self.edges.clone()
    }
}

/// A fresh uniformly shuffled random-attachment spanning tree each round.
#[derive(Debug, Clone)]
pub struct RandomTreeAdversary {
    n: usize,
    rng: ChaCha8Rng,
}

impl RandomTreeAdversary {
    pub fn new(n: usize, seed: u64) -> Self {
        RandomTreeAdversary { n, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn tree(&mut self) -> Vec<(NodeId, NodeId)> {
        let mut order: Vec<NodeId> = (0..self.n).collect();
        order.shuffle(&mut self.rng);
        (1..self.n)
            .map(|i| (order[self.rng.gen_range(0..i)], order[i]))
            .collect()
    }
}

impl Adversary for RandomTreeAdversary {
    fn reveal(&mut self, _: &DisseminationState, _: &[Option<Token>]) -> Vec<(NodeId, NodeId)> {
        self.tree()
    }
}

/// Keeps the potential increase per round bounded:
///
/// 1. every free edge (each endpoint already knows what the other sends) is
///    included; its components get their smallest node as representative;
/// 2. with `l` components, a representative missing at most `l/6` tokens is
///    expensive, any other cheap (all cheap when `l/6 < 1`);
/// 3. cheap representatives form a line in ascending id order;
/// 4. each expensive representative is matched to a distinct cheap one whose
///    token it already knows. If no such matching covers every expensive
///    node, the expensive nodes are appended to the line instead.
#[derive(Debug, Clone, Default)]
pub struct PotentialAdversary {
    last_matched: Option<bool>,
}

impl PotentialAdversary {
    pub fn new() -> Self {
        Self::default()
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut x = x;
    while parent[x] != r {
        x = std::mem::replace(&mut parent[x], r);
    }
    r
}

/// Kuhn's augmenting paths; `allowed[e]` lists candidate partners.
fn bipartite_matching(allowed: &[Vec<usize>], right: usize) -> Vec<Option<usize>> {
    fn try_assign(e: usize, allowed: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &c in &allowed[e] {
            if std::mem::replace(&mut seen[c], true) {
                continue;
            }
            if owner[c].is_none_or(|o| try_assign(o, allowed, seen, owner)) {
                owner[c] = Some(e);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; right];
    for e in 0..allowed.len() {
        let mut seen = vec![false; right];
        try_assign(e, allowed, &mut seen, &mut owner);
    }
    let mut partner = vec![None; allowed.len()];
    for (c, o) in owner.iter().enumerate() {
        if let Some(e) = *o {
            partner[e] = Some(c);
        }
    }
    partner
}

impl Adversary for PotentialAdversary {
    fn reveal(&mut self, state: &DisseminationState, choices: &[Option<Token>]) -> Vec<(NodeId, NodeId)> {
        let n = state.node_count();
        let k = state.token_count();
        let mut edges = Vec::new();
        let mut parent: Vec<usize> = (0..n).collect();
        for u in 0..n {
            for v in u + 1..n {
                if state.knows_choice(v, choices[u]) && state.knows_choice(u, choices[v]) {
                    edges.push((u, v));
                    let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        // Roots are the smallest ids of their components.
        let reps: Vec<NodeId> = (0..n).filter(|&v| find(&mut parent, v) == v).collect();
        let l = reps.len();
        let (expensive, cheap): (Vec<NodeId>, Vec<NodeId>) = if l < 6 {
            (Vec::new(), reps)
        } else {
            reps.into_iter().partition(|&v| 6 * (k - state.known_count(v)) <= l)
        };
        let allowed: Vec<Vec<usize>> = expensive
            .iter()
            .map(|&e| (0..cheap.len()).filter(|&i| state.knows_choice(e, choices[cheap[i]])).collect())
            .collect();
        let partner = bipartite_matching(&allowed, cheap.len());
        let matched = partner.iter().all(Option::is_some);
        self.last_matched = Some(matched);
        let mut line = cheap.clone();
        if matched {
            for (i, p) in partner.iter().enumerate() {
                edges.push((expensive[i], cheap[p.unwrap()]));
            }
        } else {
            line.extend(&expensive);
        }
        edges.extend(line.windows(2).map(|w| (w[0], w[1])));
        edges
    }

    fn matched(&self) -> Option<bool> {
        self.last_matched
    }
}

#[cfg(test)]
mod tests {
    use super::super::{simulate, FloodPhaseForwarder};
    use super::*;

    #[test]
    fn same_token_everywhere_is_free() {
        let state = DisseminationState::new(4, 2, &[vec![0, 1], vec![0], vec![0], vec![0]]).unwrap();
        let choices = vec![Some(0); 4];
        let mut adv = PotentialAdversary::new();
        let edges = adv.reveal(&state, &choices);
        assert_eq!(edges.len(), 6);
        assert_eq!(adv.matched(), Some(true));
    }

    #[test]
    fn matching_prefers_known_tokens() {
        let allowed = vec![vec![0, 1], vec![0]];
        assert_eq!(bipartite_matching(&allowed, 2), vec![Some(1), Some(0)]);
        assert_eq!(bipartite_matching(&[vec![0], vec![0]], 1), vec![Some(0), None]);
    }

    #[test]
    fn trees_span() {
        let mut adv = RandomTreeAdversary::new(9, 4);
        for _ in 0..20 {
            let t = adv.tree();
            assert_eq!(t.len(), 8);
            let mut parent: Vec<usize> = (0..9).collect();
            for (u, v) in t {
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                assert_ne!(a, b);
                parent[a] = b;
            }
        }
    }

    #[test]
    fn flood_against_potential_adversary() {
        let (n, k) = (8, 8);
        let sim = simulate(
            &mut FloodPhaseForwarder::new(n, k),
            &mut PotentialAdversary::new(),
            DisseminationState::canonical(n, k).unwrap(),
            k * (n - 1),
        )
        .unwrap();
        assert!(sim.rounds <= k * (n - 1));
        assert!(sim.trace.iter().all(|r| r.matched.is_some()));
    }
}
