//! Small brute-force and LP reference oracles.
//!
//! These are deliberately naive: they enumerate all deterministic
//! tournaments, or hand the membership question to the exact LP feasibility
//! routine, and exist so that the structural algorithms elsewhere in the
//! crate can be cross-checked on small instances. Hard budgets keep them
//! from being called on inputs where enumeration would blow up.

use std::collections::BTreeSet;

use crate::rational::{frac, rat, Rat};
use crate::sgraph::SignedGraph;
use crate::simplex::feasible_box;
use crate::{Error, Result};

/// Size limits for the enumeration and LP oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_edges: usize,
    pub max_n: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_edges: 20,
            max_n: 6,
        }
    }
}

fn check_budget(g: &SignedGraph, budget: OracleBudget) -> Result<()> {
    if g.edge_count() > budget.max_edges {
        return Err(Error::Budget(format!(
            "graph has {} edges, oracle budget allows {}",
            g.edge_count(),
            budget.max_edges
        )));
    }
    if g.n() > budget.max_n {
        return Err(Error::Budget(format!(
            "graph has {} players, oracle budget allows {}",
            g.n(),
            budget.max_n
        )));
    }
    Ok(())
}

/// Mean scores of all `2^|E|` deterministic tournaments on `g`.
///
/// Doubling every score keeps the whole walk in integer arithmetic: the
/// doubled score of an outcome set `W` is `Σ_{e∈W} 2γ(e) − Σ_e γ(e)`.
/// Outcomes are visited in Gray-code order so each step updates a single
/// edge.
pub fn enumerate_deterministic_scores(
    g: &SignedGraph,
    budget: OracleBudget,
) -> Result<BTreeSet<Vec<Rat>>> {
    g.check_valid()?;
    check_budget(g, budget)?;
    let cols = g.gamma_columns();
    let n = g.n();
    let m = cols.len();

    let mut twice = vec![0i64; n];
    for col in &cols {
        for (t, c) in twice.iter_mut().zip(col) {
            *t -= c;
        }
    }
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    seen.insert(twice.clone());
    let mut state: u64 = 0;
    for i in 1u64..(1u64 << m) {
        let e = i.trailing_zeros() as usize;
        state ^= 1 << e;
        let sign: i64 = if state & (1 << e) != 0 { 2 } else { -2 };
        for (t, c) in twice.iter_mut().zip(&cols[e]) {
            *t += sign * c;
        }
        seen.insert(twice.clone());
    }
    Ok(seen
        .into_iter()
        .map(|d| d.into_iter().map(|v| frac(v, 2)).collect())
        .collect())
}

/// LP membership test: is `x` the mean score of some tournament on `g`?
///
/// Writing `p_e ∈ [0, 1]` for the win probabilities, `x` is a mean score
/// exactly when `Σ_e p_e γ(e) = x + ρ_G` has a solution in the box.
pub fn lp_member(g: &SignedGraph, x: &[Rat], budget: OracleBudget) -> Result<bool> {
    g.check_valid()?;
    check_budget(g, budget)?;
    if x.len() != g.n() {
        return Err(Error::Invalid(format!(
            "score vector has length {}, graph has {} players",
            x.len(),
            g.n()
        )));
    }
    let cols: Vec<Vec<Rat>> = g
        .gamma_columns()
        .iter()
        .map(|col| col.iter().map(|&v| rat(v)).collect())
        .collect();
    let rhs: Vec<Rat> = x.iter().zip(g.rho_g()).map(|(xi, ri)| xi + ri).collect();
    Ok(feasible_box(&cols, &rhs).is_some())
}

/// Is `x` a convex combination of the given points?
///
/// Solved as an exact LP: weights `λ_i ∈ [0, 1]` with `Σ λ_i = 1` and
/// `Σ λ_i points_i = x`.
pub fn convex_hull_member(points: &[Vec<Rat>], x: &[Rat]) -> Result<bool> {
    for p in points {
        if p.len() != x.len() {
            return Err(Error::Invalid(format!(
                "hull point has length {}, query has length {}",
                p.len(),
                x.len()
            )));
        }
    }
    if points.is_empty() {
        return Ok(false);
    }
    let cols: Vec<Vec<Rat>> = points
        .iter()
        .map(|p| {
            let mut col = p.clone();
            col.push(rat(1));
            col
        })
        .collect();
    let mut rhs = x.to_vec();
    rhs.push(rat(1));
    Ok(feasible_box(&cols, &rhs).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::{RootKind, RootType};
    use crate::score::is_mean_score;
    use crate::sgraph::{complete_graph, SignedGraph};

    fn rv(vals: &[(i64, i64)]) -> Vec<Rat> {
        vals.iter().map(|&(n, d)| frac(n, d)).collect()
    }

    fn digon() -> SignedGraph {
        SignedGraph::new(
            RootType::new(RootKind::C, 2).unwrap(),
            &[(1, 2)],
            &[(1, 2)],
            &[],
            &[],
        )
    }

    #[test]
    fn enumerates_digon_scores() {
        let set = enumerate_deterministic_scores(&digon(), OracleBudget::default()).unwrap();
        let want: BTreeSet<Vec<Rat>> = [
            rv(&[(-1, 1), (0, 1)]),
            rv(&[(0, 1), (-1, 1)]),
            rv(&[(0, 1), (1, 1)]),
            rv(&[(1, 1), (0, 1)]),
        ]
        .into_iter()
        .collect();
        assert_eq!(set, want);
    }

    #[test]
    fn enumerates_loop_scores() {
        let g = SignedGraph::new(RootType::new(RootKind::C, 1).unwrap(), &[], &[], &[], &[1]);
        let set = enumerate_deterministic_scores(&g, OracleBudget::default()).unwrap();
        let want: BTreeSet<Vec<Rat>> = [rv(&[(-1, 1)]), rv(&[(1, 1)])].into_iter().collect();
        assert_eq!(set, want);
        // Translating by the zonotope center lands on {0, 2}.
        let rho = g.rho_g();
        let translated: BTreeSet<Vec<Rat>> = set
            .iter()
            .map(|s| s.iter().zip(&rho).map(|(a, b)| a + b).collect())
            .collect();
        let want_tr: BTreeSet<Vec<Rat>> = [rv(&[(0, 1)]), rv(&[(2, 1)])].into_iter().collect();
        assert_eq!(translated, want_tr);
    }

    #[test]
    fn enumerates_edgeless_graph() {
        let g = SignedGraph::new(RootType::new(RootKind::D, 1).unwrap(), &[], &[], &[], &[]);
        let set = enumerate_deterministic_scores(&g, OracleBudget::default()).unwrap();
        assert_eq!(set.len(), 1);
        assert!(set.contains(&vec![rat(0)]));
    }

    #[test]
    fn lp_membership_on_the_digon() {
        let g = digon();
        let budget = OracleBudget::default();
        assert!(lp_member(&g, &rv(&[(0, 1), (0, 1)]), budget).unwrap());
        assert!(lp_member(&g, &rv(&[(1, 1), (0, 1)]), budget).unwrap());
        assert!(lp_member(&g, &rv(&[(-1, 2), (1, 2)]), budget).unwrap());
        assert!(!lp_member(&g, &rv(&[(1, 1), (1, 1)]), budget).unwrap());
        assert!(!lp_member(&g, &rv(&[(0, 1), (3, 2)]), budget).unwrap());
        assert!(lp_member(&g, &rv(&[(0, 1)]), budget).is_err());
    }

    #[test]
    fn budgets_are_enforced() {
        let big = complete_graph(RootType::new(RootKind::C, 7).unwrap()).unwrap();
        assert!(matches!(
            enumerate_deterministic_scores(&big, OracleBudget::default()),
            Err(Error::Budget(_))
        ));
        let tall = complete_graph(RootType::new(RootKind::D, 7).unwrap()).unwrap();
        let loose = OracleBudget {
            max_edges: 100,
            max_n: 6,
        };
        assert!(matches!(
            lp_member(&tall, &vec![rat(0); 7], loose),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn hull_membership_examples() {
        let square = vec![
            rv(&[(0, 1), (0, 1)]),
            rv(&[(1, 1), (0, 1)]),
            rv(&[(0, 1), (1, 1)]),
            rv(&[(1, 1), (1, 1)]),
        ];
        assert!(convex_hull_member(&square, &rv(&[(1, 2), (1, 2)])).unwrap());
        assert!(convex_hull_member(&square, &rv(&[(1, 1), (1, 1)])).unwrap());
        assert!(!convex_hull_member(&square, &rv(&[(3, 2), (1, 2)])).unwrap());
        assert!(!convex_hull_member(&[], &rv(&[(0, 1)])).unwrap());
        assert!(convex_hull_member(&square, &rv(&[(1, 2)])).is_err());
    }

    #[test]
    fn oracles_agree_with_the_subset_test() {
        let budget = OracleBudget::default();
        let graphs = vec![
            digon(),
            complete_graph(RootType::new(RootKind::B, 2).unwrap()).unwrap(),
            complete_graph(RootType::new(RootKind::D, 3).unwrap()).unwrap(),
            SignedGraph::new(
                RootType::new(RootKind::C, 3).unwrap(),
                &[(1, 2), (2, 3)],
                &[(1, 3)],
                &[],
                &[2],
            ),
        ];
        for g in &graphs {
            let hull: Vec<Vec<Rat>> = enumerate_deterministic_scores(g, budget)
                .unwrap()
                .into_iter()
                .collect();
            let n = g.n();
            for trial in 0..40u64 {
                // A deterministic pseudo-random grid point in [-2, 2]^n.
                let x: Vec<Rat> = (0..n)
                    .map(|i| {
                        let v = ((trial * 37 + i as u64 * 13) % 17) as i64 - 8;
                        frac(v, 4)
                    })
                    .collect();
                let by_lp = lp_member(g, &x, budget).unwrap();
                let by_hull = convex_hull_member(&hull, &x).unwrap();
                let by_subsets = is_mean_score(g, &x).unwrap();
                assert_eq!(by_lp, by_hull, "lp vs hull disagree on {x:?}");
                assert_eq!(by_lp, by_subsets, "lp vs subset test disagree on {x:?}");
            }
        }
    }
}
