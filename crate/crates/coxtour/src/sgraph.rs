//! Signed graphs, their root vectors, complete graphs, balance checking and
//! the incidence matrix.
//!
//! A signed graph on players `1..=n` has negative edges (competitive games),
//! positive edges (cooperative games), half-edges (half-point solitaire
//! games, type B) and loops (full-point solitaire games, type C). A pair of
//! players may carry both a negative and a positive edge; the two are
//! distinct games. Each edge maps to an integer root vector:
//!
//! * negative edge `{i, j}` with `i > j` maps to `e_i - e_j`,
//! * positive edge `{i, j}` maps to `e_i + e_j`,
//! * half-edge at `i` maps to `e_i`,
//! * loop at `i` maps to `2 e_i`.
//!
//! Naming note: in this crate negative edges are the competitive games and
//! positive edges the cooperative games. Part of the signed-graph literature
//! uses the opposite convention; files produced here always follow this one.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rational::{frac, rat, Rat};
use crate::roots::{RootKind, RootType};
use crate::{Error, Result};

/// One game slot of a signed graph. Pair edges store `(hi, lo)` with
/// `hi > lo`; all indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Edge {
    Neg(usize, usize),
    Pos(usize, usize),
    Half(usize),
    Loop(usize),
}

impl Edge {
    /// Canonical text id, for example `neg:2-1`, `pos:3-1`, `half:1`,
    /// `loop:2`. These are the keys of serialized tournaments.
    pub fn id(&self) -> String {
        match self {
            Edge::Neg(i, j) => format!("neg:{i}-{j}"),
            Edge::Pos(i, j) => format!("pos:{i}-{j}"),
            Edge::Half(i) => format!("half:{i}"),
            Edge::Loop(i) => format!("loop:{i}"),
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// A signed graph. Immutable after construction; edge lists are normalized
/// (pairs stored as `(hi, lo)`, sorted, duplicates removed).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SignedGraphJson", into = "SignedGraphJson")]
pub struct SignedGraph {
    root_type: RootType,
    neg_edges: Vec<(usize, usize)>,
    pos_edges: Vec<(usize, usize)>,
    half_edges: Vec<usize>,
    loops: Vec<usize>,
}

impl SignedGraph {
    /// Builds a graph, normalizing edge order and removing duplicates.
    /// Structural problems (wrong solitaire kind for the type, endpoints
    /// outside `1..=n`) are not rejected here; [`SignedGraph::validate`]
    /// reports them.
    pub fn new(
        root_type: RootType,
        neg_edges: &[(usize, usize)],
        pos_edges: &[(usize, usize)],
        half_edges: &[usize],
        loops: &[usize],
    ) -> Self {
        let norm_pairs = |pairs: &[(usize, usize)]| -> Vec<(usize, usize)> {
            let set: BTreeSet<(usize, usize)> =
                pairs.iter().map(|&(a, b)| (a.max(b), a.min(b))).collect();
            set.into_iter().collect()
        };
        let norm_verts = |vs: &[usize]| -> Vec<usize> {
            let set: BTreeSet<usize> = vs.iter().copied().collect();
            set.into_iter().collect()
        };
        SignedGraph {
            root_type,
            neg_edges: norm_pairs(neg_edges),
            pos_edges: norm_pairs(pos_edges),
            half_edges: norm_verts(half_edges),
            loops: norm_verts(loops),
        }
    }

    pub fn root_type(&self) -> RootType {
        self.root_type
    }

    /// Number of players.
    pub fn n(&self) -> usize {
        self.root_type.n
    }

    pub fn neg_edges(&self) -> &[(usize, usize)] {
        &self.neg_edges
    }

    pub fn pos_edges(&self) -> &[(usize, usize)] {
        &self.pos_edges
    }

    pub fn half_edges(&self) -> &[usize] {
        &self.half_edges
    }

    pub fn loops(&self) -> &[usize] {
        &self.loops
    }

    /// Lists the violated structural invariants; empty means valid.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.n();
        match self.root_type.kind {
            RootKind::B => {
                if !self.loops.is_empty() {
                    out.push("loops forbidden in type B".into());
                }
            }
            RootKind::C => {
                if !self.half_edges.is_empty() {
                    out.push("half-edges forbidden in type C".into());
                }
            }
            RootKind::D => {
                if !self.half_edges.is_empty() {
                    out.push("half-edges forbidden in type D".into());
                }
                if !self.loops.is_empty() {
                    out.push("loops forbidden in type D".into());
                }
            }
            RootKind::A => {
                if !self.pos_edges.is_empty() {
                    out.push("positive edges forbidden in type A".into());
                }
                if !self.half_edges.is_empty() {
                    out.push("half-edges forbidden in type A".into());
                }
                if !self.loops.is_empty() {
                    out.push("loops forbidden in type A".into());
                }
            }
        }
        let in_range = |i: usize| i >= 1 && i <= n;
        for &(hi, lo) in self.neg_edges.iter().chain(self.pos_edges.iter()) {
            if hi == lo {
                out.push(format!("pair edge endpoints must differ, got {hi}-{lo}"));
            }
            if !in_range(hi) || !in_range(lo) {
                out.push(format!("pair edge {hi}-{lo} leaves 1..={n}"));
            }
        }
        for &i in self.half_edges.iter().chain(self.loops.iter()) {
            if !in_range(i) {
                out.push(format!("solitaire vertex {i} leaves 1..={n}"));
            }
        }
        out
    }

    /// Errors with the full violation list unless the graph is valid.
    pub fn check_valid(&self) -> Result<()> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(violations.join("; ")))
        }
    }

    /// All edges in canonical order: negative pairs sorted by `(hi, lo)`,
    /// then positive pairs, then half-edges, then loops. This order defines
    /// the columns of the incidence matrix and the probability layout of
    /// tournaments.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.edge_count());
        out.extend(self.neg_edges.iter().map(|&(i, j)| Edge::Neg(i, j)));
        out.extend(self.pos_edges.iter().map(|&(i, j)| Edge::Pos(i, j)));
        out.extend(self.half_edges.iter().map(|&i| Edge::Half(i)));
        out.extend(self.loops.iter().map(|&i| Edge::Loop(i)));
        out
    }

    pub fn edge_count(&self) -> usize {
        self.neg_edges.len() + self.pos_edges.len() + self.half_edges.len() + self.loops.len()
    }

    fn contains(&self, e: &Edge) -> bool {
        match *e {
            Edge::Neg(i, j) => self.neg_edges.binary_search(&(i, j)).is_ok(),
            Edge::Pos(i, j) => self.pos_edges.binary_search(&(i, j)).is_ok(),
            Edge::Half(i) => self.half_edges.binary_search(&i).is_ok(),
            Edge::Loop(i) => self.loops.binary_search(&i).is_ok(),
        }
    }

    /// The root vector of an edge of this graph, as an integer vector of
    /// length `n` (entries in `-2..=2`).
    pub fn gamma(&self, e: &Edge) -> Result<Vec<i64>> {
        if !self.contains(e) {
            return Err(Error::NotFound(format!("edge {e} is not in the graph")));
        }
        Ok(gamma_vector(self.n(), e))
    }

    /// The root vectors of all edges, one integer column per edge, in
    /// canonical edge order.
    pub fn gamma_columns(&self) -> Vec<Vec<i64>> {
        self.edges()
            .iter()
            .map(|e| gamma_vector(self.n(), e))
            .collect()
    }

    /// The `n x |E|` incidence matrix whose columns are the root vectors of
    /// the edges in canonical order.
    pub fn incidence_matrix(&self) -> Vec<Vec<Rat>> {
        let cols = self.gamma_columns();
        let n = self.n();
        (0..n)
            .map(|r| cols.iter().map(|c| rat(c[r])).collect())
            .collect()
    }

    /// Half the sum of all root vectors. Adding this vector to a score
    /// sequence translates the feasible region to a lattice polytope; it is
    /// also the mean of the incidence columns at probability one.
    pub fn rho_g(&self) -> Vec<Rat> {
        let mut out = vec![rat(0); self.n()];
        for col in self.gamma_columns() {
            for (o, c) in out.iter_mut().zip(col) {
                *o += frac(c, 2);
            }
        }
        out
    }

    /// True iff the graph (after optionally dropping half-edges) has no
    /// solitaire games and admits a sign assignment `sigma` on the players
    /// with `sigma_i = sigma_j` across every negative edge and
    /// `sigma_i = -sigma_j` across every positive edge. Equivalently, every
    /// cycle contains an even number of positive edges.
    pub fn is_balanced(&self, drop_half_edges: bool) -> bool {
        if !self.loops.is_empty() {
            return false;
        }
        if !drop_half_edges && !self.half_edges.is_empty() {
            return false;
        }
        // BFS sign propagation per component. Adjacency entries carry
        // whether the endpoint signs must agree (negative edge) or differ
        // (positive edge).
        let n = self.n();
        let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n + 1];
        for &(hi, lo) in &self.neg_edges {
            adj[hi].push((lo, true));
            adj[lo].push((hi, true));
        }
        for &(hi, lo) in &self.pos_edges {
            adj[hi].push((lo, false));
            adj[lo].push((hi, false));
        }
        let mut sign: Vec<Option<bool>> = vec![None; n + 1];
        for start in 1..=n {
            if sign[start].is_some() {
                continue;
            }
            sign[start] = Some(true);
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let sv = sign[v].unwrap();
                for &(w, same) in &adj[v] {
                    let expected = if same { sv } else { !sv };
                    match sign[w] {
                        None => {
                            sign[w] = Some(expected);
                            queue.push_back(w);
                        }
                        Some(sw) if sw != expected => return false,
                        Some(_) => {}
                    }
                }
            }
        }
        true
    }

    /// Flips the polarity of every pair edge at the given player. Balance is
    /// invariant under this operation.
    pub fn switched_at(&self, v: usize) -> SignedGraph {
        let touches = |&(hi, lo): &(usize, usize)| hi == v || lo == v;
        let mut neg: Vec<(usize, usize)> = Vec::new();
        let mut pos: Vec<(usize, usize)> = Vec::new();
        for &e in &self.neg_edges {
            if touches(&e) {
                pos.push(e);
            } else {
                neg.push(e);
            }
        }
        for &e in &self.pos_edges {
            if touches(&e) {
                neg.push(e);
            } else {
                pos.push(e);
            }
        }
        SignedGraph::new(self.root_type, &neg, &pos, &self.half_edges, &self.loops)
    }
}

fn gamma_vector(n: usize, e: &Edge) -> Vec<i64> {
    let mut v = vec![0i64; n];
    match *e {
        Edge::Neg(i, j) => {
            v[i - 1] = 1;
            v[j - 1] = -1;
        }
        Edge::Pos(i, j) => {
            v[i - 1] = 1;
            v[j - 1] = 1;
        }
        Edge::Half(i) => v[i - 1] = 1,
        Edge::Loop(i) => v[i - 1] = 2,
    }
    v
}

/// The complete graph of the type: every pair carries both a negative and a
/// positive edge, every player a half-edge (B) or a loop (C).
pub fn complete_graph(t: RootType) -> Result<SignedGraph> {
    t.require_bcd()?;
    let n = t.n;
    let mut pairs = Vec::new();
    for hi in 2..=n {
        for lo in 1..hi {
            pairs.push((hi, lo));
        }
    }
    let all: Vec<usize> = (1..=n).collect();
    let (half, loops): (&[usize], &[usize]) = match t.kind {
        RootKind::B => (&all, &[]),
        RootKind::C => (&[], &all),
        RootKind::D => (&[], &[]),
        RootKind::A => unreachable!(),
    };
    Ok(SignedGraph::new(t, &pairs, &pairs, half, loops))
}

#[derive(Serialize, Deserialize)]
struct SignedGraphJson {
    root_type: RootType,
    #[serde(default)]
    neg_edges: Vec<[usize; 2]>,
    #[serde(default)]
    pos_edges: Vec<[usize; 2]>,
    #[serde(default)]
    half_edges: Vec<usize>,
    #[serde(default)]
    loops: Vec<usize>,
}

impl TryFrom<SignedGraphJson> for SignedGraph {
    type Error = Error;

    fn try_from(j: SignedGraphJson) -> Result<Self> {
        let pairs =
            |v: &[[usize; 2]]| -> Vec<(usize, usize)> { v.iter().map(|&[a, b]| (a, b)).collect() };
        Ok(SignedGraph::new(
            j.root_type,
            &pairs(&j.neg_edges),
            &pairs(&j.pos_edges),
            &j.half_edges,
            &j.loops,
        ))
    }
}

impl From<SignedGraph> for SignedGraphJson {
    fn from(g: SignedGraph) -> Self {
        SignedGraphJson {
            root_type: g.root_type,
            neg_edges: g.neg_edges.iter().map(|&(a, b)| [a, b]).collect(),
            pos_edges: g.pos_edges.iter().map(|&(a, b)| [a, b]).collect(),
            half_edges: g.half_edges,
            loops: g.loops,
        }
    }
}
