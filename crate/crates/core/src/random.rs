//! Random temporal graphs with one uniform label per edge, the closed forms
//! that describe them, and seeded Monte Carlo estimators to check those.
//!
//! Every estimator draws trial `i` from `ChaCha8Rng` seeded with `seed` on
//! stream `i`, evaluates trials in parallel and sums them in trial order, so
//! the report depends only on `(kind, seed, trials)` and never on `jobs`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{NodeId, TemporalGraph, Time};
use crate::journeys::{foremost_journeys, temporal_diameter};

pub const DEFAULT_SEED: u64 = 2015;

fn check_range(r: Time) -> Result<()> {
    if r == 0 {
        return Err(Error::Invalid("label range r must be at least 1".into()));
    }
    Ok(())
}

/// Complete (di)graph, each edge one label uniform on `1..=r`. Edges are
/// drawn in `(u, v)` order.
pub fn gen_uniform_single_label_with<R: Rng>(n: usize, r: Time, directed: bool, rng: &mut R) -> Result<TemporalGraph> {
    check_range(r)?;
    let mut specs = Vec::with_capacity(n * n.saturating_sub(1));
    for u in 0..n {
        for v in 0..n {
            if u != v && (directed || u < v) {
                specs.push((u, v, [rng.gen_range(1..=r)]));
            }
        }
    }
    TemporalGraph::build(n, directed, specs)
}

pub fn gen_uniform_single_label(n: usize, r: Time, directed: bool, seed: u64) -> Result<TemporalGraph> {
    gen_uniform_single_label_with(n, r, directed, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// Probability that `k` i.i.d. uniform labels on `1..=r` strictly increase:
/// `C(r, k) / r^k`.
pub fn p_journey_closed_form(k: u32, r: Time) -> Result<BigRational> {
    check_range(r)?;
    if k == 0 {
        return Err(Error::Invalid("a path needs at least one edge".into()));
    }
    if k as Time > r {
        return Ok(BigRational::zero());
    }
    let r = BigInt::from(r);
    Ok(ratio(binomial(r.clone(), BigInt::from(k)), r.pow(k)))
}

/// Splitting `[r]` into a lower and an upper half, an increasing labeling
/// never has an upper-half label followed by a lower-half one. Of the `2^k`
/// half-patterns exactly `k + 1` avoid that, giving `(k + 1) / 2^k`.
pub fn p_journey_upper_bound(k: u32) -> BigRational {
    ratio(BigInt::from(k + 1), BigInt::one() << k)
}

/// `k / 2^k`, one pattern fewer than [`p_journey_upper_bound`]. Reported
/// alongside it; at `k = 1` it is below the true probability.
pub fn p_journey_bound_k_over_2k(k: u32) -> BigRational {
    ratio(BigInt::from(k), BigInt::one() << k)
}

/// Expected number of `k`-hop journeys in the directed model:
/// `n(n−1)…(n−k) · C(r, k) / r^k`.
pub fn expected_journeys(n: usize, k: u32, r: Time) -> Result<BigRational> {
    if k as usize >= n {
        return Err(Error::Invalid(format!("a {k}-hop journey needs more than {n} nodes")));
    }
    let falling: BigInt = (0..=k as usize).map(|i| BigInt::from(n - i)).product();
    Ok(p_journey_closed_form(k, r)? * BigRational::from_integer(falling))
}

/// Probability that the foremost journey between two fixed nodes of the
/// directed model arrives by time 2: `1 − ((r−2)/r)·(1 − r^−2)^(n−2)`, and
/// 1 when `r <= 2`.
pub fn p_arrival_by_2(n: usize, r: Time) -> Result<BigRational> {
    check_range(r)?;
    if n < 2 {
        return Err(Error::Invalid("need two distinct nodes".into()));
    }
    if r <= 2 {
        return Ok(BigRational::one());
    }
    let rr = BigInt::from(r);
    let miss_direct = ratio(&rr - 2, rr.clone());
    let miss_relay = ratio(&rr * &rr - 1, &rr * &rr);
    Ok(BigRational::one() - miss_direct * num_traits::pow(miss_relay, n - 2))
}

/// `((ln n + c) / n) · r`: with labels only up to about this value the
/// undirected model is still disconnected.
pub fn diameter_threshold(n: usize, r: Time, c: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Invalid("need at least 2 nodes".into()));
    }
    Ok(((n as f64).ln() + c) / n as f64 * r as f64)
}

/// Whether the static graph of edges labeled `<= k` is disconnected.
pub fn prefix_disconnected(g: &TemporalGraph, k: Time) -> bool {
    let edges = g.edges().iter().filter(|e| e.labels.first().is_some_and(|&t| t <= k)).map(|e| (e.u, e.v)).collect();
    let und = crate::graph::StaticGraph::new(g.node_count(), false, edges).expect("same nodes");
    und.reachable_from(0).iter().any(|&r| !r)
}

/// Whether some node, starting at time 1, cannot reach some other node by
/// time `k`.
pub fn some_arrival_exceeds(g: &TemporalGraph, k: Time) -> bool {
    (0..g.node_count()).any(|u| {
        let tree = foremost_journeys(g, u, 1).expect("valid node");
        (0..g.node_count()).any(|v| v != u && tree.arrival(v).is_none_or(|a| a > k))
    })
}

/// Number of `k`-hop journeys (distinct nodes, increasing labels).
pub fn count_journeys(g: &TemporalGraph, k: usize) -> u64 {
    fn go(g: &TemporalGraph, v: NodeId, after: Time, left: usize, seen: &mut [bool]) -> u64 {
        if left == 0 {
            return 1;
        }
        let mut total = 0;
        for &(w, e) in g.out_neighbors(v) {
            if seen[w] {
                continue;
            }
            seen[w] = true;
            for &t in g.edges()[e].labels.iter().filter(|&&t| t > after) {
                total += go(g, w, t, left - 1, seen);
            }
            seen[w] = false;
        }
        total
    }
    let mut seen = vec![false; g.node_count()];
    (0..g.node_count())
        .map(|s| {
            seen[s] = true;
            let c = go(g, s, 0, k, &mut seen);
            seen[s] = false;
            c
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EstimatorKind {
    /// Labels of a fixed `k`-edge path strictly increase.
    Journey { k: u32, r: Time },
    /// Foremost arrival from node 0 to node 1 is at most 2 (directed).
    /// Only the `2n − 3` labels that matter are drawn.
    ArrivalBy2 { n: usize, r: Time },
    /// Number of `k`-hop journeys in a directed sample.
    JourneyCount { n: usize, k: u32, r: Time },
    /// Labels `<= k` leave the undirected sample disconnected.
    PrefixDisconnected { n: usize, r: Time, k: Time },
    /// Temporal diameter of an undirected sample; samples without one are
    /// counted separately.
    Diameter { n: usize, r: Time },
}

impl EstimatorKind {
    pub fn name(&self) -> &'static str {
        match self {
            EstimatorKind::Journey { .. } => "journey",
            EstimatorKind::ArrivalBy2 { .. } => "arrival2",
            EstimatorKind::JourneyCount { .. } => "journey-count",
            EstimatorKind::PrefixDisconnected { .. } => "prefix-disconnected",
            EstimatorKind::Diameter { .. } => "diameter",
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            EstimatorKind::Journey { k, r } => p_journey_closed_form(k, r).map(drop),
            EstimatorKind::ArrivalBy2 { n, r } => p_arrival_by_2(n, r).map(drop),
            EstimatorKind::JourneyCount { n, k, r } => expected_journeys(n, k, r).map(drop),
            EstimatorKind::PrefixDisconnected { n, r, .. } | EstimatorKind::Diameter { n, r } => {
                check_range(r)?;
                if n < 2 {
                    return Err(Error::Invalid("need at least 2 nodes".into()));
                }
                Ok(())
            }
        }
    }

    /// One trial's value; `None` marks an undefined diameter.
    fn sample(&self, rng: &mut ChaCha8Rng) -> Option<f64> {
        let indicator = |b: bool| Some(if b { 1.0 } else { 0.0 });
        match *self {
            EstimatorKind::Journey { k, r } => {
                let labels: Vec<Time> = (0..k).map(|_| rng.gen_range(1..=r)).collect();
                indicator(labels.windows(2).all(|w| w[0] < w[1]))
            }
            EstimatorKind::ArrivalBy2 { n, r } => {
                let direct = rng.gen_range(1..=r);
                let mut hit = direct <= 2;
                for _ in 2..n {
                    let (first, second) = (rng.gen_range(1..=r), rng.gen_range(1..=r));
                    hit |= first == 1 && second == 2;
                }
                indicator(hit)
            }
            EstimatorKind::JourneyCount { n, k, r } => {
                let g = gen_uniform_single_label_with(n, r, true, rng).expect("validated");
                Some(count_journeys(&g, k as usize) as f64)
            }
            EstimatorKind::PrefixDisconnected { n, r, k } => {
                let g = gen_uniform_single_label_with(n, r, false, rng).expect("validated");
                indicator(prefix_disconnected(&g, k))
            }
            EstimatorKind::Diameter { n, r } => {
                let g = gen_uniform_single_label_with(n, r, false, rng).expect("validated");
                temporal_diameter(&g).map(|d| d as f64)
            }
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parses `name:key=value,...`, e.g. `journey:k=2,r=10`.
impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut params = std::collections::BTreeMap::new();
        for pair in rest.split(',').filter(|p| !p.is_empty()) {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("expected key=value, got `{pair}`")))?;
            let value: u64 = value.parse().map_err(|_| Error::Invalid(format!("invalid number `{value}`")))?;
            params.insert(key, value);
        }
        let mut get = |key: &str| {
            params.remove(key).ok_or_else(|| Error::Invalid(format!("estimator `{name}` needs `{key}`")))
        };
        let kind = match name {
            "journey" => EstimatorKind::Journey { k: get("k")? as u32, r: get("r")? },
            "arrival2" => EstimatorKind::ArrivalBy2 { n: get("n")? as usize, r: get("r")? },
            "journey-count" => EstimatorKind::JourneyCount { n: get("n")? as usize, k: get("k")? as u32, r: get("r")? },
            "prefix-disconnected" => {
                EstimatorKind::PrefixDisconnected { n: get("n")? as usize, r: get("r")?, k: get("k")? }
            }
            "diameter" => EstimatorKind::Diameter { n: get("n")? as usize, r: get("r")? },
            other => return Err(Error::Invalid(format!("unknown estimator `{other}`"))),
        };
        if let Some(key) = params.keys().next() {
            return Err(Error::Invalid(format!("estimator `{name}` takes no `{key}`")));
        }
        Ok(kind)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub kind: EstimatorKind,
    /// Mean over defined samples.
    pub estimate: f64,
    /// Population standard deviation over `sqrt(samples)`; for indicators
    /// this is the binomial standard error.
    pub stderr: f64,
    pub trials: usize,
    pub seed: u64,
    /// Trials whose value was undefined (only for `diameter`).
    pub undefined: usize,
}

impl fmt::Display for Estimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "kind={} estimate={:.6} stderr={:.6} trials={} seed={}",
            self.kind, self.estimate, self.stderr, self.trials, self.seed
        )?;
        if matches!(self.kind, EstimatorKind::Diameter { .. }) {
            write!(f, " undefined={}", self.undefined)?;
        }
        Ok(())
    }
}

/// RNG for trial `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// `jobs = 0` uses rayon's default pool.
pub fn monte_carlo(kind: EstimatorKind, trials: usize, seed: u64, jobs: usize) -> Result<Estimate> {
    kind.validate()?;
    if trials == 0 {
        return Err(Error::Invalid("need at least one trial".into()));
    }
    let run = || -> Vec<Option<f64>> {
        (0..trials)
            .into_par_iter()
            .map(|i| kind.sample(&mut trial_rng(seed, i as u64)))
            .collect()
    };
    let values = if jobs == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Internal(e.to_string()))?
            .install(run)
    };
    let defined: Vec<f64> = values.iter().flatten().copied().collect();
    let undefined = trials - defined.len();
    let (estimate, stderr) = if defined.is_empty() {
        (f64::NAN, f64::NAN)
    } else {
        let m = defined.len() as f64;
        let mean = defined.iter().sum::<f64>() / m;
        let var = defined.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / m;
        (mean, (var / m).sqrt())
    };
    Ok(Estimate { kind, estimate, stderr, trials, seed, undefined })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    /// Fraction of all `r^k` labelings that strictly increase, by enumeration.
    fn enumerate_increasing(k: u32, r: u64) -> BigRational {
        let total = r.pow(k);
        let hits = (0..total)
            .filter(|&code| {
                let labels: Vec<u64> = (0..k).map(|i| code / r.pow(i) % r).collect();
                labels.windows(2).all(|w| w[0] < w[1])
            })
            .count();
        q(hits as i64, total as i64)
    }

    #[test]
    fn closed_form_matches_enumeration() {
        assert_eq!(p_journey_closed_form(2, 10).unwrap(), q(9, 20));
        assert_eq!(p_journey_closed_form(3, 3).unwrap(), q(1, 27));
        assert_eq!(p_journey_closed_form(4, 3).unwrap(), q(0, 1));
        for r in 1..=6 {
            assert_eq!(p_journey_closed_form(1, r).unwrap(), q(1, 1));
            for k in 1..=4 {
                assert_eq!(p_journey_closed_form(k, r).unwrap(), enumerate_increasing(k, r));
            }
        }
    }

    #[test]
    fn bounds() {
        // Count half-patterns without an upper-half label before a lower one.
        for k in 1..=12u32 {
            let ok = (0u32..1 << k)
                .filter(|p| (0..k - 1).all(|i| !(p >> i & 1 == 1 && p >> (i + 1) & 1 == 0)))
                .count();
            assert_eq!(q(ok as i64, 1 << k), p_journey_upper_bound(k));
        }
        assert_eq!(p_journey_upper_bound(6), q(7, 64));
        assert_eq!(p_journey_bound_k_over_2k(6).to_f64().unwrap(), 0.09375);
        assert_eq!(p_journey_upper_bound(1), q(1, 1));
        for r in 1..=20u64 {
            for k in 1..=r as u32 {
                assert!(p_journey_closed_form(k, r).unwrap() <= p_journey_upper_bound(k));
            }
        }
    }

    #[test]
    fn expectations() {
        for r in 1..=5 {
            assert_eq!(expected_journeys(3, 1, r).unwrap(), q(6, 1));
        }
        for r in 1..=6u64 {
            for k in 1..=r as u32 {
                let n = r as usize + k as usize;
                let c = BigRational::from_integer(binomial(BigInt::from(r), BigInt::from(k)));
                assert!(expected_journeys(n, k, r).unwrap() >= c);
            }
        }
        assert!(expected_journeys(3, 3, 4).is_err());
    }

    #[test]
    fn arrival_by_2() {
        assert_eq!(p_arrival_by_2(10, 2).unwrap(), q(1, 1));
        let big = p_arrival_by_2(10_000, 25).unwrap().to_f64().unwrap();
        assert!((1.0 - big).abs() < 1e-6);
        // n = 3, r = 3 by enumerating the three relevant labels.
        let mut hits = 0;
        for d in 1..=3 {
            for a in 1..=3 {
                for b in 1..=3 {
                    hits += (d <= 2 || (a == 1 && b == 2)) as i64;
                }
            }
        }
        assert_eq!(p_arrival_by_2(3, 3).unwrap(), q(hits, 27));
    }

    #[test]
    fn arrival_estimator_matches_full_graph() {
        // The lazy sampler draws the same event as a full foremost search.
        let (n, r) = (6, 4);
        let mut full_hits = 0;
        for i in 0..2000u64 {
            let g = gen_uniform_single_label_with(n, r, true, &mut trial_rng(9, i)).unwrap();
            let tree = foremost_journeys(&g, 0, 1).unwrap();
            full_hits += tree.arrival(1).is_some_and(|a| a <= 2) as u32;
        }
        let p = p_arrival_by_2(n, r).unwrap().to_f64().unwrap();
        let se = (p * (1.0 - p) / 2000.0).sqrt();
        assert!((full_hits as f64 / 2000.0 - p).abs() < 4.0 * se);
    }

    #[test]
    fn prefix_connectivity() {
        // Path 0-1-2 labeled 1 then 3.
        let g = TemporalGraph::build(3, false, [(0, 1, [1]), (1, 2, [3])]).unwrap();
        assert!(prefix_disconnected(&g, 2));
        assert!(!prefix_disconnected(&g, 3));
        assert!(some_arrival_exceeds(&g, 2));
    }

    #[test]
    fn generator() {
        let g = gen_uniform_single_label(2, 7, true, 1).unwrap();
        assert_eq!(g.edges().len(), 2);
        assert!(g.time_edges().all(|e| (1..=7).contains(&e.t)));
        assert_eq!(g, gen_uniform_single_label(2, 7, true, 1).unwrap());
        assert_eq!(gen_uniform_single_label(5, 3, false, 2).unwrap().edges().len(), 10);
        assert!(gen_uniform_single_label(3, 0, true, 0).is_err());
    }

    #[test]
    fn journey_counting() {
        let g = TemporalGraph::build(3, true, [(0, 1, vec![1]), (1, 2, vec![2]), (2, 0, vec![1])]).unwrap();
        assert_eq!(count_journeys(&g, 1), 3);
        // Only 0→1→2; 2→0→1 would reuse time 1.
        assert_eq!(count_journeys(&g, 2), 1);
    }

    #[test]
    fn estimator_parsing() {
        assert_eq!("journey:k=2,r=10".parse::<EstimatorKind>().unwrap(), EstimatorKind::Journey { k: 2, r: 10 });
        assert!("journey:k=2".parse::<EstimatorKind>().is_err());
        assert!("journey:k=2,r=3,n=4".parse::<EstimatorKind>().is_err());
        assert!("bogus".parse::<EstimatorKind>().is_err());
    }

    #[test]
    fn estimates_are_independent_of_jobs() {
        let kind = EstimatorKind::JourneyCount { n: 5, k: 2, r: 4 };
        let a = monte_carlo(kind, 500, 3, 1).unwrap();
        let b = monte_carlo(kind, 500, 3, 4).unwrap();
        assert_eq!(a.to_string(), b.to_string());
        let want = expected_journeys(5, 2, 4).unwrap().to_f64().unwrap();
        assert!((a.estimate - want).abs() < 4.0 * a.stderr);
    }
}
