//! Root-system metadata: type tags, the solitaire offset, and the extreme
//! score vector of complete graphs.
//!
//! Players are indexed `1..=n` in every public interface. The per-type
//! solitaire offset `delta` is `1/2` for B (half-edges), `1` for C (loops)
//! and `0` for D (no solitaire games). The vector `rho = (delta, 1 + delta,
//! ..., n - 1 + delta)` is the mean score sequence of the tournament on the
//! complete graph in which every player wins every game; it bounds all
//! feasible score sequences in the weak sub-majorization order.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rational::{frac, rat, Rat};
use crate::{Error, Result};

/// The four supported root-system families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootKind {
    A,
    B,
    C,
    D,
}

impl fmt::Display for RootKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RootKind::A => "A",
            RootKind::B => "B",
            RootKind::C => "C",
            RootKind::D => "D",
        };
        f.write_str(s)
    }
}

/// A root-system family together with its rank (the number of players).
///
/// Kind A is accepted only by the graph, score and oracle layers; the
/// complete-graph theory implemented here is specific to B, C and D.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootType {
    pub kind: RootKind,
    pub n: usize,
}

impl RootType {
    pub fn new(kind: RootKind, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("rank must be at least 1".into()));
        }
        if kind == RootKind::A && n < 2 {
            return Err(Error::Invalid("kind A needs at least two players".into()));
        }
        Ok(RootType { kind, n })
    }

    /// Errors unless the kind is B, C or D.
    pub fn require_bcd(&self) -> Result<()> {
        match self.kind {
            RootKind::B | RootKind::C | RootKind::D => Ok(()),
            RootKind::A => Err(Error::Unsupported(
                "operation is defined for kinds B, C and D only".into(),
            )),
        }
    }
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.kind, self.n)
    }
}

/// A subset of the signed index set `{1, ..., n, -1, ..., -n}` that contains
/// no pair `{i, -i}`. `plus` holds the positive members and `minus` the
/// indices whose negatives are members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleSubset {
    plus: BTreeSet<usize>,
    minus: BTreeSet<usize>,
}

impl AdmissibleSubset {
    pub fn new(plus: BTreeSet<usize>, minus: BTreeSet<usize>) -> Result<Self> {
        if let Some(i) = plus.intersection(&minus).next() {
            return Err(Error::Invalid(format!("index {i} appears with both signs")));
        }
        Ok(AdmissibleSubset { plus, minus })
    }

    pub fn plus(&self) -> &BTreeSet<usize> {
        &self.plus
    }

    pub fn minus(&self) -> &BTreeSet<usize> {
        &self.minus
    }
}

/// The solitaire offset of the type: `1/2` for B, `1` for C, `0` for D.
pub fn delta_of(t: RootType) -> Result<Rat> {
    t.require_bcd()?;
    Ok(match t.kind {
        RootKind::B => frac(1, 2),
        RootKind::C => rat(1),
        RootKind::D => rat(0),
        RootKind::A => unreachable!(),
    })
}

/// The vector `(0, 1, ..., n - 1) + delta * (1, ..., 1)`, the upper bound of
/// all mean score sequences on the complete graph in sorted absolute value.
pub fn rho_complete(t: RootType) -> Result<Vec<Rat>> {
    let delta = delta_of(t)?;
    Ok((0..t.n).map(|i| rat(i as i64) + &delta).collect())
}

/// Forgets signs: returns the set of indices appearing in the subset.
pub fn reduce_subset(s: &AdmissibleSubset) -> BTreeSet<usize> {
    s.plus.union(&s.minus).copied().collect()
}
