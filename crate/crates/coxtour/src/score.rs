//! Tournaments on signed graphs, their mean score sequences, the
//! edge-counting bound `h`, and membership tests for realizable mean scores.
//!
//! A (random) tournament assigns each edge of a signed graph a probability
//! in `[0, 1]`, stored once per edge:
//!
//! * negative edge `{i, j}` with `i > j`: the probability that `i` beats `j`,
//! * positive edge: the probability that the pair wins (both) rather than
//!   loses (both),
//! * half-edge / loop: the probability that the solitaire game is won.
//!
//! The mean score sequence is `x = Σ_e (p_e − 1/2) γ(e)` with `γ` the root
//! vector of the edge. The achievable `x` form a zonotope, so realizability
//! of a target reduces to the support bounds `⟨σ, x⟩ ≤ ½ Σ_e |⟨σ, γ(e)⟩|`
//! over sign vectors `σ ∈ {0, ±1}ⁿ`. On complete graphs the unsigned family
//! `Σ_{i∈S} |x_i| ≤ h(S)` is equivalent, but on sparser graphs the bound
//! genuinely depends on the signs, not just on the support `S`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::majorize::weak_submajorizes;
use crate::rational::{abs, format_rational, frac, parse_rational, rat, Rat};
use crate::roots::{rho_complete, RootKind, RootType};
use crate::sgraph::{Edge, SignedGraph};
use crate::{Error, Result};

/// A mean score sequence, one rational per player.
pub type ScoreSequence = Vec<Rat>;

/// Largest rank accepted by the exhaustive membership test, which visits
/// all `3ⁿ` sign vectors.
pub const DEFAULT_SUBSET_CAP: usize = 12;

/// A random tournament: a probability per edge of a signed graph, stored in
/// canonical edge order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TournamentJson", into = "TournamentJson")]
pub struct Tournament {
    graph: SignedGraph,
    probs: Vec<Rat>,
}

impl Tournament {
    /// Builds a tournament from probabilities listed in canonical edge
    /// order. Rejects wrong lengths and values outside `[0, 1]`.
    pub fn new(graph: SignedGraph, probs: Vec<Rat>) -> Result<Self> {
        if probs.len() != graph.edge_count() {
            return Err(Error::Invalid(format!(
                "{} probabilities supplied for {} edges",
                probs.len(),
                graph.edge_count()
            )));
        }
        let one = rat(1);
        for (e, p) in graph.edges().iter().zip(&probs) {
            if p < &Rat::zero() || p > &one {
                return Err(Error::Invalid(format!(
                    "probability {} for edge {e} is outside [0, 1]",
                    format_rational(p)
                )));
            }
        }
        Ok(Tournament { graph, probs })
    }

    /// Builds a tournament from an edge-id-keyed map; the key set must be
    /// exactly the edge ids of the graph.
    pub fn from_prob_map(graph: SignedGraph, probs: &BTreeMap<String, Rat>) -> Result<Self> {
        let edges = graph.edges();
        if probs.len() != edges.len() {
            let known: BTreeSet<String> = edges.iter().map(|e| e.id()).collect();
            if let Some(extra) = probs.keys().find(|k| !known.contains(*k)) {
                return Err(Error::Invalid(format!("unknown edge id {extra}")));
            }
        }
        let values = edges
            .iter()
            .map(|e| {
                probs
                    .get(&e.id())
                    .cloned()
                    .ok_or_else(|| Error::Invalid(format!("missing probability for edge {e}")))
            })
            .collect::<Result<Vec<Rat>>>()?;
        Tournament::new(graph, values)
    }

    pub fn graph(&self) -> &SignedGraph {
        &self.graph
    }

    /// Probabilities in canonical edge order.
    pub fn probs(&self) -> &[Rat] {
        &self.probs
    }

    /// The probability attached to one edge.
    pub fn prob(&self, e: &Edge) -> Result<Rat> {
        let pos = self
            .graph
            .edges()
            .iter()
            .position(|f| f == e)
            .ok_or_else(|| Error::NotFound(format!("edge {e} is not in the graph")))?;
        Ok(self.probs[pos].clone())
    }

    pub fn prob_map(&self) -> BTreeMap<String, Rat> {
        self.graph
            .edges()
            .iter()
            .zip(&self.probs)
            .map(|(e, p)| (e.id(), p.clone()))
            .collect()
    }

    /// The reversed tournament: every probability `p` becomes `1 − p`. Its
    /// mean score sequence is the negation of this one's.
    pub fn complement(&self) -> Tournament {
        let one = rat(1);
        Tournament {
            graph: self.graph.clone(),
            probs: self.probs.iter().map(|p| &one - p).collect(),
        }
    }

    /// True iff every probability is 0 or 1.
    pub fn is_deterministic(&self) -> bool {
        let one = rat(1);
        self.probs.iter().all(|p| p.is_zero() || *p == one)
    }

    /// The mean score sequence `Σ_e (p_e − 1/2) γ(e)`, exactly.
    pub fn mean_score(&self) -> ScoreSequence {
        let mut x = vec![Rat::zero(); self.graph.n()];
        let half = frac(1, 2);
        for (col, p) in self.graph.gamma_columns().iter().zip(&self.probs) {
            let w = p - &half;
            for (xi, &c) in x.iter_mut().zip(col) {
                *xi += &w * rat(c);
            }
        }
        x
    }
}

#[derive(Serialize, Deserialize)]
struct TournamentJson {
    graph: SignedGraph,
    probs: BTreeMap<String, String>,
}

impl TryFrom<TournamentJson> for Tournament {
    type Error = Error;

    fn try_from(j: TournamentJson) -> Result<Self> {
        let mut parsed = BTreeMap::new();
        for (k, v) in &j.probs {
            parsed.insert(k.clone(), parse_rational(v)?);
        }
        Tournament::from_prob_map(j.graph, &parsed)
    }
}

impl From<Tournament> for TournamentJson {
    fn from(t: Tournament) -> Self {
        TournamentJson {
            probs: t
                .prob_map()
                .into_iter()
                .map(|(k, v)| (k, format_rational(&v)))
                .collect(),
            graph: t.graph,
        }
    }
}

/// The coalition bound `h(S) = ½E₁⁻(S) + ½E₁⁺(S) + E₂⁺(S)` plus `½H(S)` in
/// type B or `L(S)` in type C, where `E_k^±` counts pair edges with exactly
/// `k` endpoints in `S` and `H`, `L` count solitaire games inside `S`.
///
/// This is the largest joint score `Σ_{i∈S} x_i` any mean score sequence
/// can give the players of `S`: competitive games inside `S` cancel, games
/// with one endpoint in `S` are worth at most half a point to it, and
/// cooperative and solitaire games inside pay in full. Equivalently it is
/// the support value of the score zonotope in the direction `Σ_{i∈S} e_i`.
/// On complete graphs, `Σ_{i∈S} |x_i| ≤ h(S)` over all subsets already
/// characterizes mean scores; in general membership needs the bounds for
/// every sign vector, as in [`is_mean_score`].
pub fn h_value(g: &SignedGraph, s: &[usize]) -> Result<Rat> {
    g.root_type().require_bcd()?;
    let n = g.n();
    let mut set = BTreeSet::new();
    for &i in s {
        if i < 1 || i > n {
            return Err(Error::Invalid(format!("player {i} is outside 1..={n}")));
        }
        set.insert(i);
    }
    let inside = |i: usize| set.contains(&i);
    let mut e1 = 0i64;
    let mut e2p = 0i64;
    for &(hi, lo) in g.neg_edges() {
        if inside(hi) != inside(lo) {
            e1 += 1;
        }
    }
    for &(hi, lo) in g.pos_edges() {
        match (inside(hi), inside(lo)) {
            (true, true) => e2p += 1,
            (true, false) | (false, true) => e1 += 1,
            (false, false) => {}
        }
    }
    let solo = match g.root_type().kind {
        RootKind::B => frac(
            g.half_edges().iter().filter(|&&i| inside(i)).count() as i64,
            2,
        ),
        RootKind::C => rat(g.loops().iter().filter(|&&i| inside(i)).count() as i64),
        RootKind::D => Rat::zero(),
        RootKind::A => unreachable!("require_bcd passed"),
    };
    Ok(frac(e1, 2) + rat(e2p) + solo)
}

/// Exhaustive membership test with a caller-chosen rank cap: `x` is a mean
/// score sequence on `g` iff `⟨σ, x⟩ ≤ ½ Σ_e |⟨σ, γ(e)⟩|` for every sign
/// vector `σ ∈ {0, ±1}ⁿ`.
///
/// One inequality per plain subset (all signs positive, the bound of
/// [`h_value`]) is not enough in general: a cooperative edge inside the
/// support contributes a point only when its endpoints carry equal signs,
/// a competitive edge only when they differ. The test therefore walks all
/// `3ⁿ` signed coalitions. Sufficiency of these finitely many directions
/// follows because every `γ(e)` is a root, so the zonotope's support
/// function is linear on each chamber of the reflection arrangement.
pub fn is_mean_score_capped(g: &SignedGraph, x: &[Rat], cap: usize) -> Result<bool> {
    g.root_type().require_bcd()?;
    let n = g.n();
    if x.len() != n {
        return Err(Error::Invalid(format!(
            "score vector has length {}, graph has {n} players",
            x.len()
        )));
    }
    if n > cap || n > 60 {
        return Err(Error::Budget(format!(
            "membership test needs 3^{n} signed coalitions, cap is {cap}"
        )));
    }

    // Zero-based endpoints per edge class; bit i stands for player i+1.
    let zero_pair = |&(hi, lo): &(usize, usize)| (hi - 1, lo - 1);
    let neg: Vec<(usize, usize)> = g.neg_edges().iter().map(zero_pair).collect();
    let pos: Vec<(usize, usize)> = g.pos_edges().iter().map(zero_pair).collect();
    let half: Vec<usize> = g.half_edges().iter().map(|&i| i - 1).collect();
    let loops: Vec<usize> = g.loops().iter().map(|&i| i - 1).collect();

    for mask in 1u64..(1u64 << n) {
        // Players with a bit in `plus` get sign +1, the rest of `mask`
        // sign −1; the submask walk visits every split exactly once.
        let mut plus = mask;
        loop {
            let sgn = |i: usize| -> i64 {
                if mask >> i & 1 == 0 {
                    0
                } else if plus >> i & 1 == 1 {
                    1
                } else {
                    -1
                }
            };
            // Σ_e |⟨σ, γ(e)⟩|, an integer: twice the bound on ⟨σ, x⟩.
            let mut units = 0i64;
            for &(hi, lo) in &neg {
                units += (sgn(hi) - sgn(lo)).abs();
            }
            for &(hi, lo) in &pos {
                units += (sgn(hi) + sgn(lo)).abs();
            }
            for &i in &half {
                units += sgn(i).abs();
            }
            for &i in &loops {
                units += 2 * sgn(i).abs();
            }
            let mut lhs = Rat::zero();
            for (i, v) in x.iter().enumerate() {
                match sgn(i) {
                    1 => lhs += v,
                    -1 => lhs -= v,
                    _ => {}
                }
            }
            if &lhs + &lhs > rat(units) {
                return Ok(false);
            }
            if plus == 0 {
                break;
            }
            plus = (plus - 1) & mask;
        }
    }
    Ok(true)
}

/// [`is_mean_score_capped`] with the default rank cap.
pub fn is_mean_score(g: &SignedGraph, x: &[Rat]) -> Result<bool> {
    is_mean_score_capped(g, x, DEFAULT_SUBSET_CAP)
}

/// Membership for the complete graph of a type, via weak sub-majorization
/// of `|x|` by `(δ, 1+δ, …, n−1+δ)`. Agrees with [`is_mean_score`] on
/// `complete_graph(t)` but runs in `O(n log n)`.
pub fn is_mean_score_complete(t: RootType, x: &[Rat]) -> Result<bool> {
    t.require_bcd()?;
    let xa: Vec<Rat> = x.iter().map(abs).collect();
    weak_submajorizes(&xa, &rho_complete(t)?)
}

/// True iff the integer vector lies in the translated zonotope of the
/// graph, that is, `tvec − ρ_G` is a mean score sequence.
pub fn is_translated_lattice_point(g: &SignedGraph, tvec: &[i64]) -> Result<bool> {
    if tvec.len() != g.n() {
        return Err(Error::Invalid(format!(
            "lattice vector has length {}, graph has {} players",
            tvec.len(),
            g.n()
        )));
    }
    let x: Vec<Rat> = tvec
        .iter()
        .zip(g.rho_g())
        .map(|(&t, r)| rat(t) - r)
        .collect();
    is_mean_score(g, &x)
}
