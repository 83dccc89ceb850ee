//! Weak sub-majorization tests and constructive transfer matrices.
//!
//! `x` is weakly sub-majorized by `y` (written `x ≼_w y`) when for every `k`
//! the sum of the `k` largest entries of `x` is at most the sum of the `k`
//! largest entries of `y`. The constructive half of this module produces,
//! for nonnegative `x ≼_w y`, a doubly sub-stochastic matrix `S` with
//! `S y = x`, built from a chain of two-point averaging (T-transform) steps
//! followed by a row scaling.
//!
//! All arithmetic in this module is exact rational; partial-sum comparisons
//! are too brittle for floating point.

use num_traits::{Signed, Zero};

use crate::rational::{abs, frac, rat, Rat};
use crate::roots::{delta_of, RootType};
use crate::{Error, Result};

/// A doubly sub-stochastic matrix: entries nonnegative, every row and
/// column sum at most one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferMatrix {
    pub entries: Vec<Vec<Rat>>,
}

impl TransferMatrix {
    pub fn n(&self) -> usize {
        self.entries.len()
    }

    /// Matrix-vector product `S y`.
    pub fn apply(&self, y: &[Rat]) -> Vec<Rat> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(y).map(|(s, v)| s * v).sum())
            .collect()
    }

    pub fn is_doubly_substochastic(&self) -> bool {
        let n = self.n();
        if self.entries.iter().any(|row| row.len() != n) {
            return false;
        }
        let one = rat(1);
        let all_ok = self
            .entries
            .iter()
            .all(|row| row.iter().all(|e| !e.is_negative()) && row.iter().sum::<Rat>() <= one);
        all_ok && (0..n).all(|c| self.entries.iter().map(|row| &row[c]).sum::<Rat>() <= one)
    }
}

fn check_same_len(x: &[Rat], y: &[Rat]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::Invalid(format!(
            "vector lengths differ: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    Ok(())
}

fn sorted_desc(xs: &[Rat]) -> Vec<Rat> {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| b.cmp(a));
    v
}

/// True iff `x ≼_w y`: every partial sum of the sorted-descending `x` is at
/// most the corresponding partial sum of `y`.
pub fn weak_submajorizes(x: &[Rat], y: &[Rat]) -> Result<bool> {
    check_same_len(x, y)?;
    Ok(submajorization_violation(x, y).is_none())
}

/// Describes the first violated partial-sum bound of `x ≼_w y`, if any.
/// Shared by the error paths that must cite the failing inequality.
pub(crate) fn submajorization_violation(x: &[Rat], y: &[Rat]) -> Option<String> {
    let xs = sorted_desc(x);
    let ys = sorted_desc(y);
    let mut sx = Rat::zero();
    let mut sy = Rat::zero();
    for (k, (a, b)) in xs.iter().zip(&ys).enumerate() {
        sx += a;
        sy += b;
        if sx > sy {
            return Some(format!(
                "sum of the {} largest entries is {}, exceeding the bound {}",
                k + 1,
                crate::rational::format_rational(&sx),
                crate::rational::format_rational(&sy)
            ));
        }
    }
    None
}

/// True iff every partial-sum comparison of [`weak_submajorizes`] holds
/// strictly.
pub fn strict_weak_submajorizes(x: &[Rat], y: &[Rat]) -> Result<bool> {
    check_same_len(x, y)?;
    let xs = sorted_desc(x);
    let ys = sorted_desc(y);
    let mut sx = Rat::zero();
    let mut sy = Rat::zero();
    for (a, b) in xs.iter().zip(&ys) {
        sx += a;
        sy += b;
        if sx >= sy {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Feasibility of `x` against the complete graph of type `t`, tested
/// through the threshold family: for every `ℓ ∈ {δ, 1+δ, …, n−1+δ}` the sum
/// `Σ_i (|x_i| − ℓ)⁺` must not exceed `C(n − (ℓ−δ), 2)`. Equivalent to
/// `|x| ≼_w (δ, 1+δ, …, n−1+δ)`.
pub fn phi_ell_feasible(x: &[Rat], t: RootType) -> Result<bool> {
    let delta = delta_of(t)?;
    let n = t.n;
    if x.len() != n {
        return Err(Error::Invalid(format!(
            "score vector has length {}, type has rank {n}",
            x.len()
        )));
    }
    let xa: Vec<Rat> = x.iter().map(abs).collect();
    for m in 0..n {
        let ell = &delta + rat(m as i64);
        let lhs: Rat = xa
            .iter()
            .map(|v| if *v > ell { v - &ell } else { Rat::zero() })
            .sum();
        let remaining = (n - m) as i64;
        let rhs = frac(remaining * (remaining - 1), 2);
        if lhs > rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Raises coordinates of a nonnegative `x_abs ≼_w y` until the total matches
/// `Σ y`, returning `u` with `x_abs ≤ u` componentwise and `u` majorized by
/// `y` (prefix-sum dominated with equal total). The output is not unique;
/// only this postcondition is promised.
///
/// Works on the sorted-descending copy: add as much mass as possible to the
/// current leading entry without violating a prefix-sum bound of `y`; once a
/// prefix-sum bound becomes tight that prefix can never absorb more mass, so
/// it is frozen and the loop continues on the suffix.
pub fn dominating_vector(x_abs: &[Rat], y: &[Rat]) -> Result<Vec<Rat>> {
    check_same_len(x_abs, y)?;
    if x_abs.iter().chain(y).any(|v| v.is_negative()) {
        return Err(Error::Invalid("inputs must be nonnegative".into()));
    }
    if let Some(violation) = submajorization_violation(x_abs, y) {
        return Err(Error::Infeasible(violation));
    }
    let n = x_abs.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| x_abs[j].cmp(&x_abs[i]));
    let mut a: Vec<Rat> = order.iter().map(|&i| x_abs[i].clone()).collect();
    let b = sorted_desc(y);

    let mut start = 0;
    while start < n {
        let deficit: Rat = b[start..].iter().sum::<Rat>() - a[start..].iter().sum::<Rat>();
        if deficit.is_zero() {
            break;
        }
        // Smallest slack over the proper prefixes of the suffix, and where
        // it is attained. Raising a[start] by t shrinks every slack by t.
        let mut slack = Rat::zero();
        let mut best: Option<(Rat, usize)> = None;
        for k in start..n - 1 {
            slack += &b[k] - &a[k];
            if best.as_ref().is_none_or(|(s, _)| slack < *s) {
                best = Some((slack.clone(), k));
            }
        }
        match best {
            Some((s, k)) if s < deficit => {
                a[start] += s;
                start = k + 1;
            }
            _ => {
                a[start] += deficit;
                break;
            }
        }
    }

    let mut u = vec![Rat::zero(); n];
    for (pos, &orig) in order.iter().enumerate() {
        u[orig] = a[pos].clone();
    }
    Ok(u)
}

/// Chain of T-transforms carrying the sorted-descending `z` onto the
/// sorted-descending target `w` with `w` majorized by `z`. Returns the
/// product matrix `D` (doubly stochastic) with `D z = w` and the number of
/// transforms used (at most `n − 1`).
///
/// Each step picks the leftmost index `j` where the vectors disagree (there
/// the current entry is still too large), the first later index `k` where
/// the current entry is too small, and averages the pair just enough to fix
/// one of the two coordinates.
fn t_transform_chain(z0: &[Rat], w: &[Rat]) -> (Vec<Vec<Rat>>, usize) {
    let n = z0.len();
    let mut z = z0.to_vec();
    let mut d: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| rat((i == j) as i64)).collect())
        .collect();
    let mut steps = 0;
    loop {
        let Some(j) = (0..n).find(|&i| z[i] != w[i]) else {
            return (d, steps);
        };
        debug_assert!(z[j] > w[j], "prefix domination lost in transform chain");
        let k = (j + 1..n)
            .find(|&i| z[i] < w[i])
            .expect("equal totals guarantee a deficient later coordinate");
        let give = &z[j] - &w[j];
        let need = &w[k] - &z[k];
        let delta = give.min(need);
        let lambda = &delta / (&z[j] - &z[k]);
        let keep = rat(1) - &lambda;
        let old_j = d[j].clone();
        let old_k = d[k].clone();
        for (cell, (dj, dk)) in d[j].iter_mut().zip(old_j.iter().zip(&old_k)) {
            *cell = &keep * dj + &lambda * dk;
        }
        for (cell, (dj, dk)) in d[k].iter_mut().zip(old_j.iter().zip(&old_k)) {
            *cell = &lambda * dj + &keep * dk;
        }
        let zk = z[k].clone();
        z[k] = &z[k] + &delta;
        z[j] = &z[j] - &delta;
        debug_assert!(z[j] >= zk);
        steps += 1;
    }
}

/// Builds a doubly sub-stochastic `S` with `S y = x_abs` for nonnegative
/// `x_abs ≼_w y`. A doubly stochastic `D` first carries `y` onto a
/// dominating vector `u` (T-transform chain between the sorted copies,
/// conjugated by the sorting permutations); scaling row `i` by
/// `x_abs_i / u_i` then shrinks `u` back onto `x_abs` (a zero row where
/// `u_i = 0`).
pub fn transfer_matrix(x_abs: &[Rat], y: &[Rat]) -> Result<TransferMatrix> {
    let u = dominating_vector(x_abs, y)?;
    let n = u.len();

    let perm_sorting = |v: &[Rat]| -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        p.sort_by(|&i, &j| v[j].cmp(&v[i]));
        p
    };
    let perm_y = perm_sorting(y);
    let perm_u = perm_sorting(&u);
    let y_desc: Vec<Rat> = perm_y.iter().map(|&i| y[i].clone()).collect();
    let u_desc: Vec<Rat> = perm_u.iter().map(|&i| u[i].clone()).collect();

    let (chain, steps) = t_transform_chain(&y_desc, &u_desc);
    debug_assert!(steps < n.max(1));

    // Undo the sorting permutations: row i of D is the chain row that
    // produced u_i, and column c the chain column that consumed y_c.
    let mut inv_y = vec![0usize; n];
    let mut inv_u = vec![0usize; n];
    for r in 0..n {
        inv_y[perm_y[r]] = r;
        inv_u[perm_u[r]] = r;
    }
    let entries: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let row = &chain[inv_u[i]];
            if u[i].is_zero() {
                return vec![Rat::zero(); n];
            }
            let scale = &x_abs[i] / &u[i];
            (0..n).map(|c| &scale * &row[inv_y[c]]).collect()
        })
        .collect();
    let s = TransferMatrix { entries };
    debug_assert_eq!(s.apply(y), x_abs);
    debug_assert!(s.is_doubly_substochastic());
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use crate::roots::{rho_complete, RootKind, RootType};
    use rand::{Rng, SeedableRng};

    fn rv(vals: &[i64]) -> Vec<Rat> {
        vals.iter().map(|&v| rat(v)).collect()
    }

    fn t(kind: RootKind, n: usize) -> RootType {
        RootType::new(kind, n).unwrap()
    }

    /// Full majorization: prefix domination plus equal totals.
    fn majorized(x: &[Rat], y: &[Rat]) -> bool {
        weak_submajorizes(x, y).unwrap() && x.iter().sum::<Rat>() == y.iter().sum::<Rat>()
    }

    #[test]
    fn weak_submajorization_examples() {
        let y = rv(&[1, 2, 3, 4, 5, 6, 7]);
        assert!(weak_submajorizes(&vec![rat(0); 7], &y).unwrap());
        let x = vec![
            frac(2, 5),
            frac(1, 2),
            frac(23, 10),
            frac(17, 5),
            frac(41, 10),
            frac(49, 10),
            frac(26, 5),
        ];
        assert!(weak_submajorizes(&x, &y).unwrap());
        assert!(!weak_submajorizes(&rv(&[3, 3]), &rv(&[1, 2])).unwrap());
        assert!(weak_submajorizes(&rv(&[1]), &rv(&[1, 2])).is_err());
    }

    #[test]
    fn strict_weak_submajorization_examples() {
        assert!(strict_weak_submajorizes(&rv(&[0, 0]), &rv(&[1, 2])).unwrap());
        assert!(!strict_weak_submajorizes(&rv(&[1, 2]), &rv(&[1, 2])).unwrap());
        let halves = vec![frac(1, 2); 3];
        assert!(strict_weak_submajorizes(&halves, &rv(&[1, 2, 3])).unwrap());
    }

    #[test]
    fn phi_ell_at_the_extreme_vector() {
        for kind in [RootKind::B, RootKind::C, RootKind::D] {
            for n in 1..=6 {
                let rt = t(kind, n);
                let rho = rho_complete(rt).unwrap();
                assert!(phi_ell_feasible(&rho, rt).unwrap());
                // Every threshold bound is tight at the extreme vector, so
                // any single raise breaks feasibility.
                for i in 0..n {
                    let mut bumped = rho.clone();
                    bumped[i] += frac(1, 1000);
                    assert!(
                        !phi_ell_feasible(&bumped, rt).unwrap(),
                        "bump at {i} stayed feasible for {rt}"
                    );
                }
            }
        }
    }

    #[test]
    fn phi_ell_examples() {
        assert!(phi_ell_feasible(&rv(&[0, 0, 0]), t(RootKind::B, 3)).unwrap());
        // (0, 5/2) against (1, 2): threshold 1 needs 3/2 <= 1.
        assert!(!phi_ell_feasible(&[rat(0), frac(5, 2)], t(RootKind::C, 2)).unwrap());
        // Negative entries feed in through absolute values.
        assert!(!phi_ell_feasible(&[rat(0), frac(-5, 2)], t(RootKind::C, 2)).unwrap());
        assert!(phi_ell_feasible(&rv(&[0, 0]), t(RootKind::A, 2)).is_err());
        assert!(phi_ell_feasible(&rv(&[0]), t(RootKind::C, 2)).is_err());
    }

    #[test]
    fn phi_ell_matches_weak_submajorization() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..600 {
            let n = rng.gen_range(1..=8);
            let kind = [RootKind::B, RootKind::C, RootKind::D][rng.gen_range(0..3)];
            let rt = t(kind, n);
            let x: Vec<Rat> = (0..n)
                .map(|_| frac(rng.gen_range(-4 * n as i64..=4 * n as i64), 4))
                .collect();
            let xa: Vec<Rat> = x.iter().map(abs).collect();
            let rho = rho_complete(rt).unwrap();
            assert_eq!(
                phi_ell_feasible(&x, rt).unwrap(),
                weak_submajorizes(&xa, &rho).unwrap(),
                "x = {x:?}, type {rt}"
            );
        }
    }

    fn check_dominating(x: &[Rat], y: &[Rat]) {
        let u = dominating_vector(x, y).unwrap();
        assert!(x.iter().zip(&u).all(|(a, b)| a <= b), "x={x:?} u={u:?}");
        assert!(majorized(&u, y), "u={u:?} not majorized by y={y:?}");
    }

    #[test]
    fn dominating_vector_examples() {
        let y = rv(&[1, 2]);
        let u = dominating_vector(&y, &y).unwrap();
        assert_eq!(u, y);
        check_dominating(&rv(&[0, 0]), &y);
        check_dominating(&rv(&[1, 0]), &y);
        assert!(matches!(
            dominating_vector(&rv(&[3, 3]), &y),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn dominating_vector_regressions() {
        // A raise-the-maximum greedy overfills the first coordinate here
        // (raising past 3 breaks the k = 1 bound of y sorted descending).
        check_dominating(&rv(&[2, 2, 0]), &rv(&[4, 1, 1]));
        // A slack-based greedy that ignores frozen prefixes emits (3, 1, 2)
        // here, which is not dominated by y at k = 2.
        check_dominating(&rv(&[1, 1, 0]), &rv(&[3, 1, 1]));
    }

    #[test]
    fn dominating_vector_random() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..400 {
            let n = rng.gen_range(1..=7);
            let y: Vec<Rat> = (0..n).map(|_| frac(rng.gen_range(0..=12), 3)).collect();
            // Shrink a random convex mix of y entries to get a feasible x.
            let x: Vec<Rat> = y
                .iter()
                .map(|v| v * frac(rng.gen_range(0..=4), 4))
                .collect();
            if weak_submajorizes(&x, &y).unwrap() {
                check_dominating(&x, &y);
            }
        }
    }

    #[test]
    fn transfer_matrix_examples() {
        let y = rv(&[1, 2]);
        let id = transfer_matrix(&y, &y).unwrap();
        assert_eq!(id.entries, vec![rv(&[1, 0]), rv(&[0, 1])]);
        let zero = transfer_matrix(&rv(&[0, 0]), &y).unwrap();
        assert_eq!(zero.entries, vec![rv(&[0, 0]); 2]);
        let halves = vec![frac(3, 2), frac(3, 2)];
        let s = transfer_matrix(&halves, &y).unwrap();
        assert_eq!(s.entries, vec![vec![frac(1, 2), frac(1, 2)]; 2]);
        assert_eq!(s.apply(&y), halves);
    }

    #[test]
    fn transfer_matrix_random_postconditions() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..300 {
            let n = rng.gen_range(1..=7);
            let y: Vec<Rat> = (0..n).map(|_| frac(rng.gen_range(0..=12), 2)).collect();
            let x: Vec<Rat> = y
                .iter()
                .map(|v| v * frac(rng.gen_range(0..=4), 4))
                .collect();
            if !weak_submajorizes(&x, &y).unwrap() {
                continue;
            }
            let s = transfer_matrix(&x, &y).unwrap();
            assert_eq!(s.apply(&y), x, "S y != x for y={y:?}");
            assert!(s.is_doubly_substochastic());
        }
    }

    #[test]
    fn transform_chain_is_short() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..300 {
            let n: usize = rng.gen_range(1..=8);
            let y: Vec<Rat> = (0..n).map(|_| frac(rng.gen_range(0..=10), 2)).collect();
            let x: Vec<Rat> = y
                .iter()
                .map(|v| v * frac(rng.gen_range(1..=4), 4))
                .collect();
            if !weak_submajorizes(&x, &y).unwrap() {
                continue;
            }
            let u = dominating_vector(&x, &y).unwrap();
            let (chain, steps) = t_transform_chain(&sorted_desc(&y), &sorted_desc(&u));
            assert!(
                steps <= n.saturating_sub(1),
                "chain used {steps} steps at n={n}"
            );
            let prod: Vec<Rat> = chain
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(sorted_desc(&y).iter())
                        .map(|(a, b)| a * b)
                        .sum()
                })
                .collect();
            assert_eq!(prod, sorted_desc(&u));
        }
    }
}
