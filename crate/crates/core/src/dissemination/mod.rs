//! Round-based `k`-token dissemination in dynamic networks.
//!
//! Each round every node first picks one token it already knows (or none),
//! then the adversary reveals a connected topology, and every node receives
//! the tokens picked by its neighbors.

mod adversary;
mod forwarder;
mod gather;

pub use adversary::{Adversary, PotentialAdversary, RandomTreeAdversary, StaticAdversary};
pub use forwarder::{FloodPhaseForwarder, Forwarder, RandomForwarder};
pub use gather::{offline_gather, Delivery, GatherSchedule};

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::NodeId;

pub type Token = usize;

/// Per-node learning history plus the round counter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisseminationState {
    n: usize,
    k: usize,
    round: usize,
    /// `(token, round learned)` in learning order; round 0 = initial.
    history: Vec<Vec<(Token, usize)>>,
    knows: Vec<Vec<bool>>,
}

impl DisseminationState {
    /// `assignment[v]` lists the tokens node `v` starts with; together they
    /// must cover exactly the tokens `0..k`.
    pub fn new(n: usize, k: usize, assignment: &[Vec<Token>]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("dissemination needs at least one node".into()));
        }
        if assignment.len() != n {
            return Err(Error::Invalid(format!("assignment covers {} nodes, expected {n}", assignment.len())));
        }
        let mut state = DisseminationState {
            n,
            k,
            round: 0,
            history: vec![Vec::new(); n],
            knows: vec![vec![false; k]; n],
        };
        let mut covered = vec![false; k];
        for (v, tokens) in assignment.iter().enumerate() {
            for &t in tokens {
                if t >= k {
                    return Err(Error::Invalid(format!("token {t} out of range 0..{k}")));
                }
                covered[t] = true;
                state.learn(v, t);
            }
        }
        if covered.iter().any(|&c| !c) {
            return Err(Error::Invalid("initial assignment must cover every token".into()));
        }
        Ok(state)
    }

    /// Token `i` at node `i`; needs `k <= n`.
    pub fn canonical(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::Invalid(format!("canonical assignment needs k ≤ n (k={k}, n={n})")));
        }
        let assignment: Vec<Vec<Token>> = (0..n).map(|v| if v < k { vec![v] } else { Vec::new() }).collect();
        Self::new(n, k, &assignment)
    }

    fn learn(&mut self, v: NodeId, t: Token) -> bool {
        if self.knows[v][t] {
            return false;
        }
        self.knows[v][t] = true;
        self.history[v].push((t, self.round));
        true
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn token_count(&self) -> usize {
        self.k
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn knows(&self, v: NodeId, t: Token) -> bool {
        self.knows[v][t]
    }

    /// Whether `v` knows the token `choice`; "nothing" is known by everyone.
    pub fn knows_choice(&self, v: NodeId, choice: Option<Token>) -> bool {
        choice.is_none_or(|t| self.knows[v][t])
    }

    pub fn history(&self, v: NodeId) -> &[(Token, usize)] {
        &self.history[v]
    }

    pub fn known_count(&self, v: NodeId) -> usize {
        self.history[v].len()
    }

    pub fn is_complete(&self) -> bool {
        self.history.iter().all(|h| h.len() == self.k)
    }
}

/// `Σ_v Σ_{j=1..m_v} 1/(k − j + 1)` where node `v` knows `m_v` tokens: the
/// first token learned costs `1/k`, the last costs `1`.
pub fn potential(state: &DisseminationState) -> BigRational {
    let k = state.k;
    let mut tail = vec![BigRational::zero(); k + 1];
    for m in 1..=k {
        tail[m] = &tail[m - 1] + BigRational::new(BigInt::from(1), BigInt::from(k - m + 1));
    }
    let mut count = vec![0usize; k + 1];
    for v in 0..state.n {
        count[state.known_count(v)] += 1;
    }
    count
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .fold(BigRational::zero(), |acc, (m, &c)| acc + &tail[m] * BigInt::from(c))
}

/// Harmonic number `H_k` as an exact rational.
pub fn harmonic(k: usize) -> BigRational {
    (1..=k).fold(BigRational::zero(), |acc, i| acc + BigRational::new(BigInt::from(1), BigInt::from(i)))
}

/// `p/q`, also for integers.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRecord {
    pub round: usize,
    pub choices: Vec<Option<Token>>,
    /// Normalized `u < v`, sorted.
    pub edges: Vec<(NodeId, NodeId)>,
    /// `(node, token)` pairs learned this round.
    pub deliveries: Vec<(NodeId, Token)>,
    /// Potential after the round.
    pub potential: BigRational,
    pub increase: BigRational,
    /// Adversary-specific: whether its expensive/cheap matching succeeded.
    pub matched: Option<bool>,
}

impl RoundRecord {
    /// `round=<r> edges=<u-v,...> choices=<node:token|_,...> potential=<p/q>`
    pub fn trace_line(&self) -> String {
        let mut line = format!("round={} edges=", self.round);
        for (i, (u, v)) in self.edges.iter().enumerate() {
            let _ = write!(line, "{}{u}-{v}", if i > 0 { "," } else { "" });
        }
        line.push_str(" choices=");
        for (v, c) in self.choices.iter().enumerate() {
            let sep = if v > 0 { "," } else { "" };
            match c {
                Some(t) => {
                    let _ = write!(line, "{sep}{v}:{t}");
                }
                None => {
                    let _ = write!(line, "{sep}{v}:_");
                }
            }
        }
        let _ = write!(line, " potential={}", format_rational(&self.potential));
        line
    }
}

#[derive(Debug, Clone)]
pub struct Simulation {
    /// Rounds until every node knew every token.
    pub rounds: usize,
    pub trace: Vec<RoundRecord>,
    pub initial_potential: BigRational,
    pub state: DisseminationState,
}

fn is_connected(n: usize, edges: &[(NodeId, NodeId)]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !std::mem::replace(&mut seen[v], true) {
                stack.push(v);
            }
        }
    }
    seen.into_iter().all(|b| b)
}

/// Runs rounds until completion. Each round: choices (validated), topology
/// (validated connected), broadcast delivery.
pub fn simulate(
    forwarder: &mut dyn Forwarder,
    adversary: &mut dyn Adversary,
    mut state: DisseminationState,
    max_rounds: usize,
) -> Result<Simulation> {
    let n = state.n;
    let initial_potential = potential(&state);
    let mut before = initial_potential.clone();
    let mut trace = Vec::new();
    while !state.is_complete() {
        if state.round == max_rounds {
            return Err(Error::Timeout { rounds: max_rounds });
        }
        state.round += 1;
        let round = state.round;
        let choices: Vec<Option<Token>> = (0..n)
            .map(|v| forwarder.choose(v, state.history(v), round))
            .collect();
        for (v, &c) in choices.iter().enumerate() {
            if let Some(t) = c {
                if t >= state.k || !state.knows[v][t] {
                    return Err(Error::ForwarderViolation { round, node: v, token: t });
                }
            }
        }
        let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
        for (u, v) in adversary.reveal(&state, &choices) {
            if u >= n || v >= n || u == v {
                return Err(Error::AdversaryViolation { round });
            }
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        edges.dedup();
        if !is_connected(n, &edges) {
            return Err(Error::AdversaryViolation { round });
        }
        let mut deliveries = Vec::new();
        for &(u, v) in &edges {
            for (from, to) in [(u, v), (v, u)] {
                if let Some(t) = choices[from] {
                    if !state.knows[to][t] {
                        deliveries.push((to, t));
                    }
                }
            }
        }
        deliveries.sort_unstable();
        deliveries.dedup();
        for &(v, t) in &deliveries {
            state.learn(v, t);
        }
        let after = potential(&state);
        let increase = &after - &before;
        trace.push(RoundRecord {
            round,
            choices,
            edges,
            deliveries,
            potential: after.clone(),
            increase,
            matched: adversary.matched(),
        });
        before = after;
    }
    Ok(Simulation { rounds: state.round, trace, initial_potential, state })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(d))
    }

    #[test]
    fn potential_examples() {
        assert_eq!(potential(&DisseminationState::canonical(5, 5).unwrap()), q(1, 1));
        let all = DisseminationState::new(3, 4, &[vec![0, 1, 2, 3], vec![], vec![]]).unwrap();
        assert_eq!(potential(&all), q(25, 12));
        let done = DisseminationState::new(2, 2, &[vec![0, 1], vec![0, 1]]).unwrap();
        assert_eq!(potential(&done), q(3, 1));
        assert_eq!(harmonic(2) * BigInt::from(2), q(3, 1));
    }

    #[test]
    fn state_validation() {
        assert!(DisseminationState::new(2, 2, &[vec![0], vec![]]).is_err());
        assert!(DisseminationState::new(2, 1, &[vec![3], vec![]]).is_err());
        assert!(DisseminationState::canonical(2, 3).is_err());
    }

    #[test]
    fn two_nodes_one_round() {
        let mut f = FloodPhaseForwarder::new(2, 1);
        let mut a = StaticAdversary::new(vec![(0, 1)]);
        let sim = simulate(&mut f, &mut a, DisseminationState::canonical(2, 1).unwrap(), 10).unwrap();
        assert_eq!(sim.rounds, 1);
        assert_eq!(sim.trace[0].trace_line(), "round=1 edges=0-1 choices=0:0,1:_ potential=2/1");
    }

    #[test]
    fn line_from_endpoint_takes_two_rounds() {
        let mut f = FloodPhaseForwarder::new(3, 1);
        let mut a = StaticAdversary::new(vec![(0, 1), (1, 2)]);
        let sim = simulate(&mut f, &mut a, DisseminationState::canonical(3, 1).unwrap(), 10).unwrap();
        assert_eq!(sim.rounds, 2);
    }

    #[test]
    fn single_node_is_immediately_done() {
        let mut f = FloodPhaseForwarder::new(1, 1);
        let mut a = StaticAdversary::new(vec![]);
        let sim = simulate(&mut f, &mut a, DisseminationState::canonical(1, 1).unwrap(), 10).unwrap();
        assert_eq!(sim.rounds, 0);
    }

    #[test]
    fn disconnected_topology_is_rejected() {
        let mut f = FloodPhaseForwarder::new(3, 1);
        let mut a = StaticAdversary::new(vec![(0, 1)]);
        let err = simulate(&mut f, &mut a, DisseminationState::canonical(3, 1).unwrap(), 10).unwrap_err();
        assert_eq!(err, Error::AdversaryViolation { round: 1 });
    }

    #[test]
    fn timeout() {
        // Nobody transmits.
        struct Silent;
        impl Forwarder for Silent {
            fn choose(&mut self, _: NodeId, _: &[(Token, usize)], _: usize) -> Option<Token> {
                None
            }
        }
        let mut a = StaticAdversary::new(vec![(0, 1)]);
        let err = simulate(&mut Silent, &mut a, DisseminationState::canonical(2, 1).unwrap(), 5).unwrap_err();
        assert_eq!(err, Error::Timeout { rounds: 5 });
    }

    #[test]
    fn flood_meets_bound_against_random_trees() {
        let (n, k) = (8, 4);
        for seed in 0..20 {
            let mut f = FloodPhaseForwarder::new(n, k);
            let mut a = RandomTreeAdversary::new(n, seed);
            let sim = simulate(&mut f, &mut a, DisseminationState::canonical(n, k).unwrap(), 1000).unwrap();
            assert!(sim.rounds <= k * (n - 1));
            assert_eq!(potential(&sim.state), harmonic(k) * BigInt::from(n));
            let mut prev = sim.initial_potential.clone();
            for r in &sim.trace {
                assert!(r.potential >= prev);
                prev = r.potential.clone();
            }
        }
    }
}
