//! Deterministic tournaments hitting prescribed integer score targets.
//!
//! On a balanced graph (no loops, every cycle with an even number of
//! cooperative edges) the incidence matrix is totally unimodular, so any
//! integer point of the translated score zonotope is hit by a deterministic
//! tournament: a fractional realization from the exact LP can be rounded
//! along kernel directions without ever leaving the zonotope.
//! [`random_only_points`] measures how badly this fails on unbalanced
//! graphs by listing the integer points no deterministic tournament
//! reaches.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::oracle::{enumerate_deterministic_scores, OracleBudget};
use crate::rational::{rat, Rat};
use crate::score::{h_value, is_translated_lattice_point, Tournament};
use crate::sgraph::SignedGraph;
use crate::simplex::feasible_box;
use crate::{Error, Result};

/// Converts an integer rational to `i64`; all callers are behind size
/// budgets that keep scores tiny.
fn small_int(v: Rat) -> i64 {
    debug_assert!(v.is_integer());
    i64::try_from(v.to_integer()).expect("score fits in i64")
}

/// A nonzero exact kernel vector of the matrix with the given columns, or
/// `None` when the columns are linearly independent. Plain Gaussian
/// elimination over the rationals.
fn kernel_vector(cols: &[Vec<Rat>]) -> Option<Vec<Rat>> {
    let k = cols.len();
    if k == 0 {
        return None;
    }
    let n = cols[0].len();
    let mut m: Vec<Vec<Rat>> = (0..n)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect();
    let mut pivot_row_of_col: Vec<Option<usize>> = vec![None; k];
    let mut r = 0usize;
    for c in 0..k {
        if r == n {
            break;
        }
        let Some(pr) = (r..n).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].clone();
        for v in &mut m[r] {
            *v = &*v / &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (cell, p) in row.iter_mut().zip(&pivot_row) {
                    *cell -= &f * p;
                }
            }
        }
        pivot_row_of_col[c] = Some(r);
        r += 1;
    }
    let free = (0..k).find(|&c| pivot_row_of_col[c].is_none())?;
    let mut kv = vec![Rat::zero(); k];
    kv[free] = rat(1);
    for c in 0..k {
        if let Some(row) = pivot_row_of_col[c] {
            kv[c] = -m[row][free].clone();
        }
    }
    Some(kv)
}

/// Finds a deterministic tournament on `g` whose translated score
/// `x + ρ_G` equals `target`, when the graph is balanced (half-edges are
/// disregarded for balance; loops always break it).
///
/// A fractional solution of `Σ_e p_e γ(e) = target` is found first; while
/// any `p_e` is fractional, a kernel vector of the fractional columns is
/// followed to a bound, which strictly shrinks the fractional support.
/// Total unimodularity guarantees such a kernel vector exists whenever
/// fractional entries remain.
pub fn realize_deterministic(g: &SignedGraph, target: &[i64]) -> Result<Tournament> {
    g.check_valid()?;
    if target.len() != g.n() {
        return Err(Error::Invalid(format!(
            "target has length {}, graph has {} players",
            target.len(),
            g.n()
        )));
    }
    if !g.is_balanced(true) {
        return Err(Error::Precondition(
            "integer realization requires a balanced graph".into(),
        ));
    }
    let cols: Vec<Vec<Rat>> = g
        .gamma_columns()
        .iter()
        .map(|col| col.iter().map(|&v| rat(v)).collect())
        .collect();
    let rhs: Vec<Rat> = target.iter().map(|&v| rat(v)).collect();
    let Some(mut p) = feasible_box(&cols, &rhs) else {
        return Err(Error::Infeasible(
            "target lies outside the translated score zonotope".into(),
        ));
    };

    let is_integral = |v: &Rat| v.is_zero() || *v == rat(1);
    let mut steps = 0usize;
    loop {
        let frac: Vec<usize> = (0..p.len()).filter(|&e| !is_integral(&p[e])).collect();
        if frac.is_empty() {
            break;
        }
        steps += 1;
        if steps > p.len() {
            return Err(Error::Internal(
                "rounding did not terminate within the edge count".into(),
            ));
        }
        let sub: Vec<Vec<Rat>> = frac.iter().map(|&e| cols[e].clone()).collect();
        let Some(kv) = kernel_vector(&sub) else {
            // Independent columns with an integer right-hand side have a
            // unique solution, and by total unimodularity it is integral,
            // contradicting a nonempty fractional support.
            return Err(Error::Internal(
                "fractional support has independent columns on a balanced graph".into(),
            ));
        };
        let mut lambda: Option<Rat> = None;
        for (idx, &e) in frac.iter().enumerate() {
            let c = &kv[idx];
            let room = if c.is_positive() {
                (rat(1) - &p[e]) / c
            } else if c.is_negative() {
                &p[e] / -c
            } else {
                continue;
            };
            let better = match &lambda {
                None => true,
                Some(l) => &room < l,
            };
            if better {
                lambda = Some(room);
            }
        }
        let lambda = lambda.expect("kernel vector is nonzero");
        debug_assert!(
            lambda.is_positive(),
            "fractional entries sit strictly inside"
        );
        for (idx, &e) in frac.iter().enumerate() {
            let delta = &lambda * &kv[idx];
            p[e] += delta;
        }
    }

    let tournament = Tournament::new(g.clone(), p)?;
    debug_assert!(tournament.is_deterministic());
    debug_assert_eq!(
        tournament
            .mean_score()
            .iter()
            .zip(g.rho_g())
            .map(|(a, b)| a + b)
            .collect::<Vec<Rat>>(),
        rhs
    );
    Ok(tournament)
}

/// Integer points of the translated score zonotope that no deterministic
/// tournament reaches. Balanced graphs always return an empty list; the
/// interesting cases are unbalanced ones, where randomness genuinely
/// enlarges the set of achievable integer scores.
pub fn random_only_points(g: &SignedGraph) -> Result<Vec<Vec<i64>>> {
    g.check_valid()?;
    let n = g.n();
    if n > 4 || g.edge_count() > 8 {
        return Err(Error::Budget(format!(
            "lattice scan supports at most 4 players and 8 edges, got {} and {}",
            n,
            g.edge_count()
        )));
    }
    let rho = g.rho_g();
    let mut lo_i = Vec::with_capacity(n);
    let mut hi_i = Vec::with_capacity(n);
    for (i, r) in rho.iter().enumerate() {
        let h = h_value(g, &[i + 1])?;
        lo_i.push(small_int((r - &h).ceil()));
        hi_i.push(small_int((r + &h).floor()));
    }

    let deterministic: BTreeSet<Vec<i64>> =
        enumerate_deterministic_scores(g, OracleBudget::default())?
            .into_iter()
            .map(|s| {
                s.iter()
                    .zip(&rho)
                    .map(|(a, b)| {
                        let t = a + b;
                        debug_assert!(
                            t.is_integer(),
                            "translated deterministic scores are integral"
                        );
                        small_int(t)
                    })
                    .collect::<Vec<i64>>()
            })
            .collect();

    // Directions and their bounds depend on the graph alone, so hoist them
    // out of the scan: `t` lies in the translated zonotope iff
    // `⟨σ, 2t − Σγ⟩ ≤ Σ_e |⟨σ, γ(e)⟩|` for every σ ∈ {0, ±1}ⁿ, and both
    // sides are small integers.
    let cols = g.gamma_columns();
    let mut sum_gamma = vec![0i64; n];
    for col in &cols {
        for (s, &c) in sum_gamma.iter_mut().zip(col) {
            *s += c;
        }
    }
    let codes = 3usize.pow(n as u32);
    let mut dirs: Vec<(Vec<i64>, i64)> = Vec::with_capacity(codes);
    for code in 0..codes {
        let mut c = code;
        let mut sigma = vec![0i64; n];
        for s in sigma.iter_mut() {
            *s = (c % 3) as i64 - 1;
            c /= 3;
        }
        let units: i64 = cols
            .iter()
            .map(|col| {
                sigma
                    .iter()
                    .zip(col)
                    .map(|(s, &g)| s * g)
                    .sum::<i64>()
                    .abs()
            })
            .sum();
        dirs.push((sigma, units));
    }
    let member = |point: &[i64]| {
        dirs.iter().all(|(sigma, units)| {
            let lhs: i64 = sigma
                .iter()
                .zip(point.iter().zip(&sum_gamma))
                .map(|(s, (&p, &g))| s * (2 * p - g))
                .sum();
            lhs <= *units
        })
    };

    let mut out = Vec::new();
    let mut point: Vec<i64> = lo_i.clone();
    if point.iter().zip(&hi_i).any(|(a, b)| a > b) {
        return Ok(out);
    }
    loop {
        if member(&point) && !deterministic.contains(&point) {
            debug_assert!(matches!(is_translated_lattice_point(g, &point), Ok(true)));
            out.push(point.clone());
        }
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if point[k] < hi_i[k] {
                point[k] += 1;
                break;
            }
            point[k] = lo_i[k];
        }
    }
}
