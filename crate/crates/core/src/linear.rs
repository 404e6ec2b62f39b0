//! Temporal graphs with linear availabilities: edge `e` exists exactly at
//! times `a_e·x + b_e`, `x = 0, 1, 2, ...`. The lifetime `L` is a big
//! integer, so nothing here iterates over time; everything reduces to
//! modular linear equations and the Chinese remainder theorem.
//!
//! Common-instance queries report the earliest time `>= 1`; time 0 is not a
//! label anywhere else in the crate.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::format::{content_lines, field};
use crate::graph::NodeId;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearEdgeSpec {
    pub a: BigUint,
    pub b: BigUint,
}

impl LinearEdgeSpec {
    pub fn new(a: impl Into<BigUint>, b: impl Into<BigUint>) -> Self {
        LinearEdgeSpec { a: a.into(), b: b.into() }
    }

    /// `r = a·x + b` for some `x >= 0`; for `a = 0` only `r = b`.
    pub fn available_at(&self, r: &BigUint) -> bool {
        if self.a.is_zero() {
            return *r == self.b;
        }
        r >= &self.b && ((r - &self.b) % &self.a).is_zero()
    }

    /// Smallest availability time `>= t`.
    pub fn earliest_at_or_after(&self, t: &BigUint) -> Option<BigUint> {
        if self.a.is_zero() {
            return (self.b >= *t).then(|| self.b.clone());
        }
        if self.b >= *t {
            return Some(self.b.clone());
        }
        let steps = (t - &self.b).div_ceil(&self.a);
        Some(&self.b + steps * &self.a)
    }
}

/// `ax+b`, `ax` or `b` (a constant edge), e.g. `3x+4`.
impl FromStr for LinearEdgeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("expected `ax+b`, got `{s}`"));
        let num = |t: &str| t.trim().parse::<BigUint>().map_err(|_| bad());
        match s.split_once('x') {
            None => Ok(LinearEdgeSpec { a: BigUint::zero(), b: num(s)? }),
            Some((a, rest)) => {
                let a = if a.trim().is_empty() { BigUint::one() } else { num(a)? };
                let rest = rest.trim();
                let b = match rest.strip_prefix('+') {
                    Some(b) => num(b)?,
                    None if rest.is_empty() => BigUint::zero(),
                    None => return Err(bad()),
                };
                Ok(LinearEdgeSpec { a, b })
            }
        }
    }
}

impl fmt::Display for LinearEdgeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x+{}", self.a, self.b)
    }
}

/// The residue class `x ≡ residue (mod modulus)`, with `0 <= residue < modulus`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SolutionClass {
    pub residue: BigUint,
    pub modulus: BigUint,
}

impl SolutionClass {
    /// Smallest member `>= lower`.
    pub fn least_at_least(&self, lower: &BigUint) -> BigUint {
        if *lower <= self.residue {
            return self.residue.clone();
        }
        &self.residue + (lower - &self.residue).div_ceil(&self.modulus) * &self.modulus
    }

    /// Representatives modulo `m`, a multiple of the class modulus.
    pub fn members_mod(&self, m: &BigUint) -> Vec<BigUint> {
        let count = m / &self.modulus;
        let mut out = Vec::new();
        let mut x = self.residue.clone();
        let mut i = BigUint::zero();
        while i < count {
            out.push(x.clone());
            x += &self.modulus;
            i += 1u32;
        }
        out
    }
}

/// All `x` with `a·x ≡ b (mod c)`: none unless `gcd(a, c) | b`, otherwise
/// one class modulo `c / gcd(a, c)`, i.e. `gcd(a, c)` solutions modulo `c`.
pub fn solve_modular_linear(a: &BigUint, b: &BigUint, c: &BigUint) -> Result<Option<SolutionClass>> {
    if a.is_zero() || c.is_zero() {
        return Err(Error::Invalid("coefficient and modulus must be positive".into()));
    }
    let g = a.gcd(c);
    if !(b % &g).is_zero() {
        return Ok(None);
    }
    let m = c / &g;
    let (a, b) = (BigInt::from(a / &g), BigInt::from(b / &g));
    let mi = BigInt::from(m.clone());
    let inverse = a.extended_gcd(&mi).x;
    let x = (b * inverse).mod_floor(&mi);
    Ok(Some(SolutionClass { residue: x.to_biguint().expect("non-negative"), modulus: m }))
}

/// `t ≡ residue (mod modulus)` for each pair; solvable iff residues agree
/// pairwise modulo the gcd of their moduli, and then unique modulo the lcm.
pub fn solve_congruence_system(equations: &[(BigUint, BigUint)]) -> Result<SolutionClass> {
    let mut acc = SolutionClass { residue: BigUint::zero(), modulus: BigUint::one() };
    for (i, (r, m)) in equations.iter().enumerate() {
        if m.is_zero() {
            return Err(Error::Invalid(format!("equation {i} has modulus 0")));
        }
        let r = r % m;
        // acc.residue + acc.modulus·k ≡ r (mod m)
        let rhs = (BigInt::from(r) - BigInt::from(acc.residue.clone())).mod_floor(&BigInt::from(m.clone()));
        let rhs = rhs.to_biguint().expect("non-negative");
        let Some(k) = solve_modular_linear(&acc.modulus, &rhs, m)? else {
            return Err(Error::Infeasible(format!("equation {i} contradicts the earlier ones")));
        };
        let lcm = acc.modulus.lcm(m);
        let residue = (&acc.residue + &acc.modulus * k.residue) % &lcm;
        acc = SolutionClass { residue, modulus: lcm };
    }
    Ok(acc)
}

/// Earliest time in `1..=L` at which both edges exist.
pub fn coexist_pair(s1: &LinearEdgeSpec, s2: &LinearEdgeSpec, lifetime: &BigUint) -> Result<Option<BigUint>> {
    if s1.a.is_zero() || s2.a.is_zero() {
        return coexist(&[s1.clone(), s2.clone()], lifetime);
    }
    // a1·x + b1 = a2·y + b2  ⇔  a1·x ≡ b2 − b1 (mod a2).
    let diff = (BigInt::from(s2.b.clone()) - BigInt::from(s1.b.clone())).mod_floor(&BigInt::from(s2.a.clone()));
    let Some(x) = solve_modular_linear(&s1.a, &diff.to_biguint().expect("non-negative"), &s2.a)? else {
        return Ok(None);
    };
    let modulus = s1.a.lcm(&s2.a);
    let class = SolutionClass { residue: (&s1.a * x.residue + &s1.b) % &modulus, modulus };
    let lower = s1.b.clone().max(s2.b.clone()).max(BigUint::one());
    let r = class.least_at_least(&lower);
    Ok((r <= *lifetime).then_some(r))
}

/// Earliest time in `1..=L` at which every edge exists. Constant edges
/// (`a = 0`) pin the answer to their `b`; otherwise the residues `b_i mod
/// a_i` form a congruence system whose least solution at or above
/// `max(b_i)` is the answer (every `x_i` is then non-negative).
pub fn coexist(specs: &[LinearEdgeSpec], lifetime: &BigUint) -> Result<Option<BigUint>> {
    if let Some(fixed) = specs.iter().find(|s| s.a.is_zero()) {
        let r = &fixed.b;
        let ok = !r.is_zero() && r <= lifetime && specs.iter().all(|s| s.available_at(r));
        return Ok(ok.then(|| r.clone()));
    }
    let equations: Vec<(BigUint, BigUint)> = specs.iter().map(|s| (s.b.clone(), s.a.clone())).collect();
    let class = match solve_congruence_system(&equations) {
        Ok(c) => c,
        Err(Error::Infeasible(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let lower = specs.iter().map(|s| s.b.clone()).max().unwrap_or_default().max(BigUint::one());
    let r = class.least_at_least(&lower);
    Ok((r <= *lifetime).then_some(r))
}

/// Undirected graph on `n` nodes with a linear availability per present
/// edge; absent pairs are never available.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearTemporalGraph {
    n: usize,
    lifetime: BigUint,
    edges: BTreeMap<(NodeId, NodeId), LinearEdgeSpec>,
}

impl LinearTemporalGraph {
    pub fn new(n: usize, lifetime: BigUint) -> Self {
        LinearTemporalGraph { n, lifetime, edges: BTreeMap::new() }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn lifetime(&self) -> &BigUint {
        &self.lifetime
    }

    fn key(&self, u: NodeId, v: NodeId) -> Result<(NodeId, NodeId)> {
        for w in [u, v] {
            if w >= self.n {
                return Err(Error::InvalidNode { node: w, n: self.n });
            }
        }
        if u == v {
            return Err(Error::InvalidEdge(format!("self-loop at {u}")));
        }
        Ok((u.min(v), u.max(v)))
    }

    pub fn set_edge(&mut self, u: NodeId, v: NodeId, spec: LinearEdgeSpec) -> Result<()> {
        let key = self.key(u, v)?;
        self.edges.insert(key, spec);
        Ok(())
    }

    pub fn spec(&self, u: NodeId, v: NodeId) -> Result<Option<&LinearEdgeSpec>> {
        Ok(self.edges.get(&self.key(u, v)?))
    }

    /// `(u, v, spec)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, &LinearEdgeSpec)> {
        self.edges.iter().map(|(&(u, v), s)| (u, v, s))
    }

    /// Edges present at time `r`; empty outside `1..=L`.
    pub fn instance(&self, r: &BigUint) -> Vec<(NodeId, NodeId)> {
        if r.is_zero() || *r > self.lifetime {
            return Vec::new();
        }
        self.edges().filter(|(_, _, s)| s.available_at(r)).map(|(u, v, _)| (u, v)).collect()
    }

    /// Next time `>= t` (and `<= L`) that edge `{u, v}` is available.
    pub fn earliest_at_or_after(&self, u: NodeId, v: NodeId, t: &BigUint) -> Result<Option<BigUint>> {
        let Some(spec) = self.spec(u, v)? else { return Ok(None) };
        Ok(spec.earliest_at_or_after(t).filter(|r| *r <= self.lifetime))
    }
}

/// Earliest time in `1..=L` at which all listed edges exist together.
pub fn coexist_set(g: &LinearTemporalGraph, edges: &[(NodeId, NodeId)]) -> Result<Option<BigUint>> {
    let mut specs = Vec::with_capacity(edges.len());
    for &(u, v) in edges {
        match g.spec(u, v)? {
            Some(s) => specs.push(s.clone()),
            None => return Ok(None),
        }
    }
    coexist(&specs, &g.lifetime)
}

/// `ltg <n> <L>` then `u v a b` lines.
pub fn parse_ltg(text: &str) -> Result<LinearTemporalGraph> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing `ltg` header"))?;
    if header.len() != 3 || header[0] != "ltg" {
        return Err(Error::parse(hline, "expected `ltg <n> <L>`"));
    }
    let n: usize = field(hline, "node count", header[1])?;
    let lifetime: BigUint = field(hline, "lifetime", header[2])?;
    let mut g = LinearTemporalGraph::new(n, lifetime);
    for (line, f) in lines {
        if f.len() != 4 {
            return Err(Error::parse(line, "expected `u v a b`"));
        }
        let u: NodeId = field(line, "node", f[0])?;
        let v: NodeId = field(line, "node", f[1])?;
        let a: BigUint = field(line, "coefficient", f[2])?;
        let b: BigUint = field(line, "offset", f[3])?;
        let key = g.key(u, v).map_err(|e| Error::parse(line, e.to_string()))?;
        if g.edges.insert(key, LinearEdgeSpec { a, b }).is_some() {
            return Err(Error::parse(line, format!("duplicate edge ({u}, {v})")));
        }
    }
    Ok(g)
}

pub fn to_ltg(g: &LinearTemporalGraph) -> String {
    let mut out = format!("ltg {} {}\n", g.n, g.lifetime);
    for (u, v, s) in g.edges() {
        let _ = writeln!(out, "{u} {v} {} {}", s.a, s.b);
    }
    out
}
