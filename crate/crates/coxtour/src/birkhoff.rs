//! Mean scores as mixtures of deterministic rank assignments.
//!
//! A signed permutation assigns every player a signed rank; playing out all
//! games accordingly gives a deterministic tournament whose mean score is
//! the corresponding signed permutation of the complete graph's score
//! bound. Any feasible mean score is a convex combination of such
//! tournaments; [`birkhoff_decompose`] finds one by peeling perfect
//! matchings off an exact doubly stochastic capacity matrix.
//!
//! [`strassen_construct`] takes the complementary route: it turns the same
//! capacity rows into per-player probability measures on signed ranks and
//! lets every game be decided by comparing independent draws.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::majorize::transfer_matrix;
use crate::rational::{abs, frac, rat, Rat};
use crate::roots::{rho_complete, RootKind, RootType};
use crate::score::Tournament;
use crate::sgraph::{complete_graph, Edge};
use crate::{Error, Result};

/// A bijection of `{1, …, n}` onto itself combined with per-element sign
/// flips, stored in one-line notation: `images[i]` is the signed image of
/// player `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SignedPermutation {
    images: Vec<i64>,
}

impl SignedPermutation {
    pub fn new(images: Vec<i64>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            let a = v.unsigned_abs() as usize;
            if a == 0 || a > n {
                return Err(Error::Invalid(format!(
                    "image {v} is out of range for n = {n}"
                )));
            }
            if seen[a - 1] {
                return Err(Error::Invalid(format!(
                    "absolute image {a} appears more than once"
                )));
            }
            seen[a - 1] = true;
        }
        Ok(SignedPermutation { images })
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// Signed image of 1-based player `i`.
    pub fn image(&self, i: usize) -> i64 {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[i64] {
        &self.images
    }

    /// The matrix with `±1` at `(i, |images[i]| - 1)` and zeros elsewhere;
    /// applying it to a column vector permutes and flips entries.
    pub fn matrix(&self) -> Vec<Vec<Rat>> {
        let n = self.n();
        let mut m = vec![vec![Rat::zero(); n]; n];
        for (i, &v) in self.images.iter().enumerate() {
            m[i][v.unsigned_abs() as usize - 1] = rat(v.signum());
        }
        m
    }

    /// All `2^n n!` signed permutations of `{1, …, n}`, in a deterministic
    /// order: permutations lexicographically, sign patterns in binary.
    pub fn all(n: usize) -> Vec<SignedPermutation> {
        let mut perms: Vec<Vec<i64>> = Vec::new();
        let mut current: Vec<i64> = Vec::new();
        let mut used = vec![false; n];
        fn rec(n: usize, current: &mut Vec<i64>, used: &mut Vec<bool>, out: &mut Vec<Vec<i64>>) {
            if current.len() == n {
                out.push(current.clone());
                return;
            }
            for v in 1..=n {
                if !used[v - 1] {
                    used[v - 1] = true;
                    current.push(v as i64);
                    rec(n, current, used, out);
                    current.pop();
                    used[v - 1] = false;
                }
            }
        }
        rec(n, &mut current, &mut used, &mut perms);
        let mut all = Vec::with_capacity(perms.len() << n);
        for p in perms {
            for mask in 0u64..(1u64 << n) {
                let images = p
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| if mask & (1 << i) != 0 { -v } else { v })
                    .collect();
                all.push(SignedPermutation { images });
            }
        }
        all
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.images.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// The deterministic tournament in which every game is played out according
/// to the signed ranks `phi`: higher signed rank wins competitive games, a
/// positive rank sum wins cooperative games, and a positive own rank wins
/// solitaire games.
pub fn vertex_tournament(t: RootType, phi: &SignedPermutation) -> Result<Tournament> {
    t.require_bcd()?;
    if phi.n() != t.n {
        return Err(Error::Invalid(format!(
            "permutation has {} entries, type has rank {}",
            phi.n(),
            t.n
        )));
    }
    let g = complete_graph(t)?;
    let probs: Vec<Rat> = g
        .edges()
        .iter()
        .map(|e| {
            let won = match *e {
                Edge::Neg(hi, lo) => phi.image(hi) > phi.image(lo),
                Edge::Pos(hi, lo) => phi.image(hi) + phi.image(lo) > 0,
                Edge::Half(i) | Edge::Loop(i) => phi.image(i) > 0,
            };
            rat(won as i64)
        })
        .collect();
    Tournament::new(g, probs)
}

/// The signed row-scaled transfer matrix `A` with `A ρ = x`: row `i` is
/// `sign(x_i)` times the corresponding row of the plain transfer matrix for
/// `|x|`. Errors when `x` is not a feasible mean score.
pub fn signed_transfer(t: RootType, x: &[Rat]) -> Result<Vec<Vec<Rat>>> {
    t.require_bcd()?;
    if x.len() != t.n {
        return Err(Error::Invalid(format!(
            "score vector has length {}, type has rank {}",
            x.len(),
            t.n
        )));
    }
    let xa: Vec<Rat> = x.iter().map(abs).collect();
    let s = transfer_matrix(&xa, &rho_complete(t)?)?;
    let a = s
        .entries
        .iter()
        .zip(x)
        .map(|(row, xi)| {
            let sign = rat(if xi.is_negative() { -1 } else { 1 });
            row.iter().map(|v| &sign * v).collect()
        })
        .collect();
    Ok(a)
}

/// Completes a doubly substochastic matrix to a doubly stochastic one:
/// returns the nonnegative `E` with `B + E` doubly stochastic.
///
/// Deficits are filled in a single northwest-corner pass, so at most
/// `2n - 1` entries of `E` are nonzero and the result is deterministic.
pub fn pad_to_doubly_stochastic(b: &[Vec<Rat>]) -> Result<Vec<Vec<Rat>>> {
    let n = b.len();
    let mut row_def = Vec::with_capacity(n);
    let mut col_def = vec![rat(1); n];
    for row in b {
        if row.len() != n {
            return Err(Error::Invalid("matrix must be square".into()));
        }
        let mut sum = Rat::zero();
        for (j, v) in row.iter().enumerate() {
            if v.is_negative() {
                return Err(Error::Invalid("matrix entries must be nonnegative".into()));
            }
            sum += v;
            col_def[j] -= v;
        }
        if sum > rat(1) {
            return Err(Error::Invalid("row sums must be at most 1".into()));
        }
        row_def.push(rat(1) - sum);
    }
    if col_def.iter().any(|d| d.is_negative()) {
        return Err(Error::Invalid("column sums must be at most 1".into()));
    }
    let mut e = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let add = std::cmp::min(row_def[i].clone(), col_def[j].clone());
            if add.is_zero() {
                continue;
            }
            row_def[i] -= &add;
            col_def[j] -= &add;
            e[i][j] = add;
        }
    }
    debug_assert!(row_def.iter().all(Zero::is_zero) && col_def.iter().all(Zero::is_zero));
    Ok(e)
}

/// A convex combination of signed permutations.
#[derive(Debug, Clone)]
pub struct SignedDecomposition {
    /// Positive weights summing to 1, each attached to a signed
    /// permutation.
    pub terms: Vec<(Rat, SignedPermutation)>,
    /// Number of matching rounds used to produce the terms.
    pub rounds: usize,
}

/// One row's assignment in a matching round: the column and whether the
/// signed or the neutral capacity is consumed.
struct Assignment {
    col: usize,
    signed: bool,
}

/// Finds a perfect matching of rows to columns on the cells with positive
/// remaining capacity, via augmenting paths. Rows are processed in order
/// and columns tried ascending, so the result is deterministic.
fn perfect_matching(signed_rem: &[Vec<Rat>], neutral_rem: &[Vec<Rat>]) -> Option<Vec<usize>> {
    let n = signed_rem.len();
    let admissible =
        |i: usize, j: usize| !signed_rem[i][j].is_zero() || !neutral_rem[i][j].is_zero();
    let mut row_of_col: Vec<Option<usize>> = vec![None; n];
    fn augment(
        i: usize,
        admissible: &dyn Fn(usize, usize) -> bool,
        row_of_col: &mut Vec<Option<usize>>,
        visited: &mut Vec<bool>,
        n: usize,
    ) -> bool {
        for j in 0..n {
            if !visited[j] && admissible(i, j) {
                visited[j] = true;
                let free = match row_of_col[j] {
                    None => true,
                    Some(prev) => augment(prev, admissible, row_of_col, visited, n),
                };
                if free {
                    row_of_col[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    for i in 0..n {
        let mut visited = vec![false; n];
        if !augment(i, &admissible, &mut row_of_col, &mut visited, n) {
            return None;
        }
    }
    let mut col_of_row = vec![0usize; n];
    for (j, r) in row_of_col.iter().enumerate() {
        col_of_row[(*r)?] = j;
    }
    Some(col_of_row)
}

/// Writes a feasible mean score as a convex combination of signed
/// permutations applied to the complete graph's score bound.
///
/// Capacity that stems from padding carries no sign; a matching that uses
/// such a neutral cell is emitted twice at half weight, once with the cell
/// read as positive and once as negative, so the two copies cancel there
/// and the combination still reproduces the signed transfer matrix.
pub fn birkhoff_decompose(t: RootType, x: &[Rat]) -> Result<SignedDecomposition> {
    let a = signed_transfer(t, x)?;
    let n = t.n;
    let signs: Vec<Vec<i64>> = a
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| if v.is_negative() { -1 } else { 1 })
                .collect()
        })
        .collect();
    let mut signed_rem: Vec<Vec<Rat>> = a.iter().map(|row| row.iter().map(abs).collect()).collect();
    let mut neutral_rem = pad_to_doubly_stochastic(&signed_rem)?;

    let mut remaining = rat(1);
    let mut terms: Vec<(Rat, SignedPermutation)> = Vec::new();
    let mut rounds = 0usize;
    while !remaining.is_zero() {
        rounds += 1;
        if rounds > n * n + 2 * n {
            return Err(Error::Internal(
                "matching rounds exceeded the capacity-cell bound".into(),
            ));
        }
        let cols = perfect_matching(&signed_rem, &neutral_rem).ok_or_else(|| {
            Error::Internal("remaining capacity admits no perfect matching".into())
        })?;
        // Each matched cell consumes signed capacity when any is left,
        // neutral capacity otherwise.
        let assignments: Vec<Assignment> = cols
            .iter()
            .enumerate()
            .map(|(i, &j)| Assignment {
                col: j,
                signed: !signed_rem[i][j].is_zero(),
            })
            .collect();
        let lambda = assignments
            .iter()
            .enumerate()
            .map(|(i, asg)| {
                if asg.signed {
                    signed_rem[i][asg.col].clone()
                } else {
                    neutral_rem[i][asg.col].clone()
                }
            })
            .min()
            .expect("n >= 1");
        debug_assert!(lambda.is_positive());
        for (i, asg) in assignments.iter().enumerate() {
            if asg.signed {
                signed_rem[i][asg.col] -= &lambda;
            } else {
                neutral_rem[i][asg.col] -= &lambda;
            }
        }
        remaining -= &lambda;

        let base: Vec<i64> = assignments
            .iter()
            .enumerate()
            .map(|(i, asg)| {
                if asg.signed {
                    signs[i][asg.col] * (asg.col as i64 + 1)
                } else {
                    asg.col as i64 + 1
                }
            })
            .collect();
        if assignments.iter().any(|asg| !asg.signed) {
            let flipped: Vec<i64> = base
                .iter()
                .zip(&assignments)
                .map(|(&v, asg)| if asg.signed { v } else { -v })
                .collect();
            let half = &lambda / rat(2);
            terms.push((half.clone(), SignedPermutation { images: base }));
            terms.push((half, SignedPermutation { images: flipped }));
        } else {
            terms.push((lambda, SignedPermutation { images: base }));
        }
    }
    Ok(SignedDecomposition { terms, rounds })
}

/// The tournament whose every game probability is the convex combination of
/// the vertex tournaments of the given signed permutations.
pub fn mixture_tournament(t: RootType, terms: &[(Rat, SignedPermutation)]) -> Result<Tournament> {
    t.require_bcd()?;
    if terms.is_empty() {
        return Err(Error::Invalid("mixture needs at least one term".into()));
    }
    let mut total = Rat::zero();
    for (w, _) in terms {
        if !w.is_positive() || w > &rat(1) {
            return Err(Error::Invalid("mixture weights must lie in (0, 1]".into()));
        }
        total += w;
    }
    if total != rat(1) {
        return Err(Error::Invalid("mixture weights must sum to 1".into()));
    }
    let g = complete_graph(t)?;
    let mut probs = vec![Rat::zero(); g.edge_count()];
    for (w, phi) in terms {
        let vt = vertex_tournament(t, phi)?;
        for (acc, p) in probs.iter_mut().zip(vt.probs()) {
            *acc += w * p;
        }
    }
    Tournament::new(g, probs)
}

/// A probability measure with finite support on the nonzero integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitelySupportedMeasure {
    mass: BTreeMap<i64, Rat>,
}

impl FinitelySupportedMeasure {
    pub fn new(mass: BTreeMap<i64, Rat>) -> Result<Self> {
        let mut total = Rat::zero();
        for (&k, v) in &mass {
            if k == 0 {
                return Err(Error::Invalid("support points must be nonzero".into()));
            }
            if v.is_negative() {
                return Err(Error::Invalid("masses must be nonnegative".into()));
            }
            total += v;
        }
        if total != rat(1) {
            return Err(Error::Invalid("masses must sum to 1".into()));
        }
        let mass = mass.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(FinitelySupportedMeasure { mass })
    }

    pub fn mass(&self) -> &BTreeMap<i64, Rat> {
        &self.mass
    }

    pub fn prob(&self, point: i64) -> Rat {
        self.mass.get(&point).cloned().unwrap_or_else(Rat::zero)
    }
}

/// `½ P(X - X̂ > 0) - ½ P(X - X̂ < 0)` for independent draws `X ~ nu`,
/// `X̂ ~ nu_hat`: the centered probability that the first draw is larger.
pub fn psi_minus(nu: &FinitelySupportedMeasure, nu_hat: &FinitelySupportedMeasure) -> Rat {
    signed_comparison(nu, nu_hat, |a, b| a - b)
}

/// `½ P(X + X̂ > 0) - ½ P(X + X̂ < 0)` for independent draws: the centered
/// probability that the two draws jointly land positive.
pub fn psi_plus(nu: &FinitelySupportedMeasure, nu_hat: &FinitelySupportedMeasure) -> Rat {
    signed_comparison(nu, nu_hat, |a, b| a + b)
}

/// `P(X > 0) - P(X < 0)` for a single draw.
pub fn psi_solo(nu: &FinitelySupportedMeasure) -> Rat {
    let mut out = Rat::zero();
    for (&a, w) in nu.mass() {
        if a > 0 {
            out += w;
        } else {
            out -= w;
        }
    }
    out
}

fn signed_comparison(
    nu: &FinitelySupportedMeasure,
    nu_hat: &FinitelySupportedMeasure,
    combine: impl Fn(i64, i64) -> i64,
) -> Rat {
    let mut out = Rat::zero();
    for (&a, wa) in nu.mass() {
        for (&b, wb) in nu_hat.mass() {
            let c = combine(a, b);
            if c > 0 {
                out += wa * wb;
            } else if c < 0 {
                out -= wa * wb;
            }
        }
    }
    out / rat(2)
}

/// Per-player measures on signed ranks: player `i` draws rank `j + 1` with
/// probability `S_ij + E_ij/2` on the side matching `sign(x_i)` and
/// `E_ij/2` on the other side, where `S` is the transfer matrix for `|x|`
/// and `E` its doubly stochastic padding.
pub fn strassen_measures(t: RootType, x: &[Rat]) -> Result<Vec<FinitelySupportedMeasure>> {
    if t.kind != RootKind::C {
        return Err(Error::Unsupported(
            "rank-coupling measures are only defined for type C".into(),
        ));
    }
    if x.len() != t.n {
        return Err(Error::Invalid(format!(
            "score vector has length {}, type has rank {}",
            x.len(),
            t.n
        )));
    }
    let xa: Vec<Rat> = x.iter().map(abs).collect();
    let s = transfer_matrix(&xa, &rho_complete(t)?)?;
    let e = pad_to_doubly_stochastic(&s.entries)?;
    let mut measures = Vec::with_capacity(t.n);
    for i in 0..t.n {
        let mut mass: BTreeMap<i64, Rat> = BTreeMap::new();
        for (j, (padding, signed)) in e[i].iter().zip(&s.entries[i]).enumerate() {
            let neutral_half = padding / rat(2);
            let mut plus = neutral_half.clone();
            let mut minus = neutral_half;
            if x[i].is_positive() {
                plus += signed;
            } else if x[i].is_negative() {
                minus += signed;
            } else {
                debug_assert!(
                    signed.is_zero(),
                    "a zero score must have a zero transfer row"
                );
            }
            let point = j as i64 + 1;
            if !plus.is_zero() {
                *mass.entry(point).or_insert_with(Rat::zero) += plus;
            }
            if !minus.is_zero() {
                *mass.entry(-point).or_insert_with(Rat::zero) += minus;
            }
        }
        measures.push(FinitelySupportedMeasure::new(mass)?);
    }
    Ok(measures)
}

/// Builds the tournament in which every player independently draws a signed
/// rank from its measure and each game compares the draws: competitive
/// games go to the larger rank and cooperative games to a positive rank
/// sum, with exact ties split evenly. Solitaire games mix two rules with
/// equal weight: a positive own rank, and a positive sum of the own rank
/// with an independent second draw from the same measure.
pub fn strassen_construct(t: RootType, x: &[Rat]) -> Result<Tournament> {
    let measures = strassen_measures(t, x)?;
    let g = complete_graph(t)?;
    let half = frac(1, 2);
    let probs: Vec<Rat> = g
        .edges()
        .iter()
        .map(|edge| match *edge {
            Edge::Neg(hi, lo) => psi_minus(&measures[hi - 1], &measures[lo - 1]) + &half,
            Edge::Pos(hi, lo) => psi_plus(&measures[hi - 1], &measures[lo - 1]) + &half,
            Edge::Loop(i) => {
                // Summing the pairwise win rates over the other players and
                // applying the column condition leaves a gap of exactly
                // ½ psi_solo(nu) + psi_plus(nu, nu) between the pairwise
                // games and the target score, so the loop must pay out that
                // amount. Paying psi_solo(nu) alone matches it only when nu
                // is carried by a single absolute rank.
                let nu = &measures[i - 1];
                (rat(2) + psi_solo(nu) + rat(2) * psi_plus(nu, nu)) / rat(4)
            }
            Edge::Half(_) => unreachable!("type C has no half-edges"),
        })
        .collect();
    Tournament::new(g, probs)
}
