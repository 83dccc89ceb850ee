//! Exact-rational feasibility solver for box-constrained linear systems.
//!
//! Answers whether `Σ_j p_j · col_j = rhs` has a solution with every
//! `p_j ∈ [0, 1]`, and produces one when it does. This is a phase-one
//! simplex over bounded variables: artificial variables with unit cost are
//! minimized to zero, Bland's smallest-index rule prevents cycling, and
//! upper bounds are handled by the standard substitution `p = 1 − p′`
//! (flip a column instead of adding a row).

use num_traits::{Signed, Zero};

use crate::rational::{rat, Rat};

/// Which variable leaves (or flips) in one ratio-test step.
enum Step {
    /// Entering variable travels all the way to its own upper bound.
    FlipEntering,
    /// Basic variable in this row drops to zero; pivot there.
    LeaveAtZero(usize),
    /// Basic structural variable in this row rises to one; flip it, then
    /// pivot there.
    LeaveAtUpper(usize),
}

/// Index of the variable a step would move out of the basis, used for
/// Bland-style tie breaking (structural j → j, artificial i → m + i).
fn leaving_index(step: &Step, entering: usize, basis: &[Basis], m: usize) -> usize {
    match step {
        Step::FlipEntering => entering,
        Step::LeaveAtZero(r) | Step::LeaveAtUpper(r) => match basis[*r] {
            Basis::Structural(j) => j,
            Basis::Artificial(i) => m + i,
        },
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Basis {
    Structural(usize),
    Artificial(usize),
}

/// Finds `p ∈ [0, 1]^m` with `Σ_j p_j · cols[j] = rhs`, if any exists.
/// All arithmetic is exact; there is no tolerance anywhere.
pub(crate) fn feasible_box(cols: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let n = rhs.len();
    let m = cols.len();
    debug_assert!(cols.iter().all(|c| c.len() == n));

    // Rows are negated as needed so the right side starts nonnegative and
    // the artificial basis is feasible.
    let mut tab: Vec<Vec<Rat>> = Vec::with_capacity(n);
    let mut b: Vec<Rat> = Vec::with_capacity(n);
    for i in 0..n {
        let negate = rhs[i].is_negative();
        tab.push(
            (0..m)
                .map(|j| {
                    if negate {
                        -&cols[j][i]
                    } else {
                        cols[j][i].clone()
                    }
                })
                .collect(),
        );
        b.push(if negate { -&rhs[i] } else { rhs[i].clone() });
    }
    let mut basis: Vec<Basis> = (0..n).map(Basis::Artificial).collect();
    let mut flipped = vec![false; m];
    // Reduced costs of the structural columns under the artificial-sum
    // objective, and the current objective value.
    let mut reduced: Vec<Rat> = (0..m)
        .map(|j| -tab.iter().map(|row| &row[j]).sum::<Rat>())
        .collect();
    let mut obj: Rat = b.iter().sum();

    let mut pivots = 0usize;
    loop {
        if obj.is_zero() {
            break;
        }
        // Bland: smallest structural index with negative reduced cost.
        // Artificial columns never re-enter, which only shrinks the search
        // space of bases and keeps the anti-cycling argument intact.
        let e = (0..m).find(|&j| reduced[j].is_negative())?;

        // Ratio test over three kinds of blocking events; ties broken by
        // the smallest leaving-variable index.
        let mut best_t = rat(1);
        let mut best = Step::FlipEntering;
        for i in 0..n {
            let a = &tab[i][e];
            if a.is_positive() {
                let t = &b[i] / a;
                let step = Step::LeaveAtZero(i);
                if t < best_t
                    || (t == best_t
                        && leaving_index(&step, e, &basis, m) < leaving_index(&best, e, &basis, m))
                {
                    best_t = t;
                    best = step;
                }
            } else if a.is_negative() {
                if let Basis::Structural(_) = basis[i] {
                    let t = (rat(1) - &b[i]) / -a;
                    let step = Step::LeaveAtUpper(i);
                    if t < best_t
                        || (t == best_t
                            && leaving_index(&step, e, &basis, m)
                                < leaving_index(&best, e, &basis, m))
                    {
                        best_t = t;
                        best = step;
                    }
                }
            }
        }

        match best {
            Step::FlipEntering => {
                // p_e = 1 − p′_e: shift the right side, negate the column.
                obj += &reduced[e];
                for i in 0..n {
                    let shift = tab[i][e].clone();
                    b[i] -= &shift;
                    tab[i][e] = -shift;
                }
                reduced[e] = -reduced[e].clone();
                flipped[e] ^= true;
            }
            Step::LeaveAtUpper(r) => {
                // Substitute the basic variable of row r at its upper
                // bound, then fall through to an ordinary pivot.
                let Basis::Structural(v) = basis[r] else {
                    unreachable!("upper-bound exit only for structural vars")
                };
                for entry in tab[r].iter_mut() {
                    *entry = -entry.clone();
                }
                // The leaving column picks up two sign changes, one from
                // the substitution and one from the row negation, so it
                // keeps its unit coefficient.
                tab[r][v] = rat(1);
                b[r] = rat(1) - &b[r];
                flipped[v] ^= true;
                pivot(&mut tab, &mut b, &mut reduced, &mut obj, r, e);
                basis[r] = Basis::Structural(e);
            }
            Step::LeaveAtZero(r) => {
                pivot(&mut tab, &mut b, &mut reduced, &mut obj, r, e);
                basis[r] = Basis::Structural(e);
            }
        }

        pivots += 1;
        assert!(
            pivots <= 200_000,
            "bounded simplex exceeded its pivot budget (n={n}, m={m})"
        );
    }

    // Objective zero: all artificial values vanish, the structural values
    // solve the system. Undo the upper-bound substitutions.
    let mut p = vec![Rat::zero(); m];
    for (i, bas) in basis.iter().enumerate() {
        if let Basis::Structural(j) = bas {
            p[*j] = b[i].clone();
        }
    }
    for j in 0..m {
        if flipped[j] {
            p[j] = rat(1) - &p[j];
        }
        debug_assert!(!p[j].is_negative() && p[j] <= rat(1));
    }
    Some(p)
}

/// Gauss pivot on (row, col), updating the reduced-cost row and objective.
fn pivot(
    tab: &mut [Vec<Rat>],
    b: &mut [Rat],
    reduced: &mut [Rat],
    obj: &mut Rat,
    r: usize,
    e: usize,
) {
    let piv = tab[r][e].clone();
    debug_assert!(piv.is_positive());
    for entry in tab[r].iter_mut() {
        *entry = &*entry / &piv;
    }
    b[r] = &b[r] / &piv;
    let (pivot_row, b_r) = (tab[r].clone(), b[r].clone());
    for i in 0..tab.len() {
        if i == r || tab[i][e].is_zero() {
            continue;
        }
        let f = tab[i][e].clone();
        for (entry, p_entry) in tab[i].iter_mut().zip(&pivot_row) {
            *entry -= &f * p_entry;
        }
        b[i] -= &f * &b_r;
        debug_assert!(!b[i].is_negative());
    }
    let f = reduced[e].clone();
    if !f.is_zero() {
        for (entry, p_entry) in reduced.iter_mut().zip(&pivot_row) {
            *entry -= &f * p_entry;
        }
        *obj += &f * &b_r;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn check_solution(cols: &[Vec<Rat>], rhs: &[Rat], p: &[Rat]) {
        assert_eq!(p.len(), cols.len());
        let one = rat(1);
        for v in p {
            assert!(!v.is_negative() && *v <= one, "p = {p:?} leaves the box");
        }
        for (i, r) in rhs.iter().enumerate() {
            let got: Rat = cols.iter().zip(p).map(|(c, v)| &c[i] * v).sum();
            assert_eq!(got, *r, "row {i} mismatched");
        }
    }

    #[test]
    fn solves_small_systems() {
        // p1 - p2 = 1/2 with both in [0,1].
        let cols = vec![vec![rat(1)], vec![rat(-1)]];
        let rhs = vec![frac(1, 2)];
        let p = feasible_box(&cols, &rhs).unwrap();
        check_solution(&cols, &rhs, &p);
        // Boundary value reachable only with p = (1, 0).
        let rhs = vec![rat(1)];
        let p = feasible_box(&cols, &rhs).unwrap();
        check_solution(&cols, &rhs, &p);
        // Out of reach.
        assert!(feasible_box(&cols, &[frac(3, 2)]).is_none());
        assert!(feasible_box(&cols, &[rat(-2)]).is_none());
    }

    #[test]
    fn degenerate_and_empty_inputs() {
        assert_eq!(feasible_box(&[], &[]), Some(vec![]));
        assert_eq!(feasible_box(&[], &[rat(0)]), Some(vec![]));
        assert!(feasible_box(&[], &[rat(1)]).is_none());
        // Zero column must take some value in [0,1]; any works.
        let cols = vec![vec![rat(0)]];
        let p = feasible_box(&cols, &[rat(0)]).unwrap();
        check_solution(&cols, &[rat(0)], &p);
    }

    #[test]
    fn negative_rhs_rows() {
        // Rows that need negation before the artificial start.
        let cols = vec![vec![rat(2), rat(-1)], vec![rat(0), rat(-1)]];
        let rhs = vec![rat(1), rat(-3)];
        assert!(feasible_box(&cols, &rhs).is_none());
        let rhs = vec![rat(1), rat(-1)];
        let p = feasible_box(&cols, &rhs).unwrap();
        check_solution(&cols, &rhs, &p);
    }

    #[test]
    fn requires_upper_bound_handling() {
        // Σ p_i = 5/2 over three variables: infeasible without caps at 1
        // would be trivially feasible; with caps it needs two variables at
        // or near their upper bound.
        let cols = vec![vec![rat(1)]; 3];
        let p = feasible_box(&cols, &[frac(5, 2)]).unwrap();
        check_solution(&cols, &[frac(5, 2)], &p);
        assert!(feasible_box(&cols, &[frac(7, 2)]).is_none());
    }

    #[test]
    fn random_systems_match_interior_seed() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let n = rng.gen_range(1..=4);
            let m = rng.gen_range(0..=7);
            let cols: Vec<Vec<Rat>> = (0..m)
                .map(|_| (0..n).map(|_| rat(rng.gen_range(-2..=2))).collect())
                .collect();
            // Build rhs from a known box point, so feasibility is forced.
            let seed: Vec<Rat> = (0..m).map(|_| frac(rng.gen_range(0..=4), 4)).collect();
            let rhs: Vec<Rat> = (0..n)
                .map(|i| cols.iter().zip(&seed).map(|(c, s)| &c[i] * s).sum())
                .collect();
            let p =
                feasible_box(&cols, &rhs).expect("constructed-feasible system reported infeasible");
            check_solution(&cols, &rhs, &p);
        }
    }
}
