//! Offline gathering of `k` tokens at a sink over a continuously connected
//! temporal graph.
//!
//! A supersource `S` gets an arc to the source of token `i` labeled `i`
//! (tokens numbered from 1 here), and every original label is shifted up by
//! `k`. Out-disjoint `S → z` journeys then leave `S` once per token and never
//! make a node send two tokens in the same round; with age at least `n + k`
//! there are `k` of them.

use super::Token;
use crate::error::{Error, Result};
use crate::graph::{NodeId, TemporalGraph, Time};
use crate::journeys::Journey;
use crate::menger::max_out_disjoint_journeys;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Delivery {
    pub token: Token,
    pub source: NodeId,
    /// Source → sink, in the original graph's times.
    pub journey: Journey,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GatherSchedule {
    /// Sorted by token.
    pub deliveries: Vec<Delivery>,
}

/// Token ids are assigned in order: the first `count` of `sources[0]` get ids
/// `0..count`, and so on.
pub fn offline_gather(g: &TemporalGraph, sources: &[(NodeId, usize)], z: NodeId) -> Result<GatherSchedule> {
    let n = g.node_count();
    for &v in sources.iter().map(|(v, _)| v).chain([&z]) {
        if v >= n {
            return Err(Error::InvalidNode { node: v, n });
        }
    }
    let k: usize = sources.iter().map(|&(_, c)| c).sum();
    if k == 0 {
        return Ok(GatherSchedule::default());
    }
    if k > n {
        return Err(Error::Invalid(format!("{k} tokens exceed {n} nodes")));
    }
    if !g.is_continuously_connected() {
        return Err(Error::Invalid("gathering needs a continuously connected graph".into()));
    }
    let age = g.age()?;
    let required = (n + k) as Time;
    if age < required {
        return Err(Error::InfeasibleAge { age, required });
    }

    let shift = k as Time;
    let mut owner = Vec::with_capacity(k);
    let mut specs: Vec<(NodeId, NodeId, Vec<Time>)> = Vec::new();
    for &(v, count) in sources {
        let labels: Vec<Time> = (owner.len()..owner.len() + count).map(|i| i as Time + 1).collect();
        owner.extend(std::iter::repeat_n(v, count));
        specs.push((n, v, labels));
    }
    for e in g.to_directed().edges() {
        specs.push((e.u, e.v, e.labels.iter().map(|t| t + shift).collect()));
    }
    let lifted = TemporalGraph::build(n + 1, true, specs)?;
    let flow = max_out_disjoint_journeys(&lifted, n, z)?;
    if flow.count < k as u64 {
        return Err(Error::Internal(format!("only {} of {k} tokens can be gathered", flow.count)));
    }
    let mut deliveries = Vec::with_capacity(k);
    for j in flow.journeys {
        let token = (j.times()[0] - 1) as Token;
        let source = j.nodes()[1];
        if owner[token] != source {
            return Err(Error::Internal(format!("token {token} left from the wrong source")));
        }
        let times: Vec<Time> = j.times()[1..].iter().map(|t| t - shift).collect();
        let journey = Journey::new(j.nodes()[1..].to_vec(), times)?;
        deliveries.push(Delivery { token, source, journey });
    }
    deliveries.sort_by_key(|d| d.token);
    Ok(GatherSchedule { deliveries })
}
