use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Token;
use crate::graph::NodeId;

/// Token-forwarding rule. Called for every node before the round's topology
/// is revealed, with the node's own learning history only.
pub trait Forwarder {
    fn choose(&mut self, node: NodeId, history: &[(Token, usize)], round: usize) -> Option<Token>;
}

/// Phase `p = 1..=k` lasts `n − 1` rounds; during phase `p` every node that
/// knows token `p − 1` sends it. Any connected round brings the token to at
/// least one new node, so each phase completes its token and all tokens are
/// spread within `k(n − 1)` rounds.
#[derive(Debug, Clone)]
pub struct FloodPhaseForwarder {
    n: usize,
    k: usize,
}

impl FloodPhaseForwarder {
    pub fn new(n: usize, k: usize) -> Self {
        FloodPhaseForwarder { n, k }
    }

    fn phase_token(&self, round: usize) -> Option<Token> {
        let len = self.n.saturating_sub(1).max(1);
        let token = (round - 1) / len;
        (token < self.k).then_some(token)
    }
}

impl Forwarder for FloodPhaseForwarder {
    fn choose(&mut self, _node: NodeId, history: &[(Token, usize)], round: usize) -> Option<Token> {
        let t = self.phase_token(round)?;
        history.iter().any(|&(x, _)| x == t).then_some(t)
    }
}

/// Sends a uniformly random known token; silent while knowing nothing.
#[derive(Debug, Clone)]
pub struct RandomForwarder {
    rng: ChaCha8Rng,
}

impl RandomForwarder {
    pub fn new(seed: u64) -> Self {
        RandomForwarder { rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl Forwarder for RandomForwarder {
    fn choose(&mut self, _node: NodeId, history: &[(Token, usize)], _round: usize) -> Option<Token> {
        history.choose(&mut self.rng).map(|&(t, _)| t)
    }
}
