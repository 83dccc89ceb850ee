//! Constructive realization of a feasible mean score sequence on the
//! complete graph, peeling one extreme player at a time.
//!
//! Players are sorted by absolute score. The player with the largest
//! absolute score is "extreme"; a single slider parameter `γ*` fixes all of
//! its game probabilities at once, its games are removed, the remaining
//! scores are updated, and the procedure recurses. Each opponent `j`
//! carries the unit interval `I_j = [|x_j|−1, |x_j|]`, and the probability
//! mass handed to `j` is read off from the two lengths
//!
//! ```text
//! ℓ_j(γ) = len(I_j ∩ [γ, ∞)) + len(I_j ∩ [γ, 0]).
//! ```
//!
//! `γ*` solves `Σ_j ℓ_j(γ*) = target` exactly; because the sum is piecewise
//! linear in `γ`, scanning its breakpoints needs no numeric root finding.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::majorize::submajorization_violation;
use crate::rational::{abs, format_rational, frac, rat, Rat};
use crate::roots::{delta_of, rho_complete, RootKind, RootType};
use crate::score::Tournament;
use crate::sgraph::complete_graph;
use crate::{Error, Result};

/// Which rule produced one peel-off step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    /// Extreme score negative: the extreme player loses its solitaire game
    /// and the slider lengths are its win probabilities directly.
    Losing,
    /// Extreme score positive: the extreme player wins its solitaire game
    /// and the slider lengths are its loss probabilities (complements).
    Winning,
    /// Extreme score zero, hence all remaining scores zero: every
    /// remaining game of the extreme player is a fair coin.
    Fair,
    /// Single player left: only the solitaire game (if the type has one)
    /// remains.
    Solo,
}

/// The games of one extreme player, plus the reduced score sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HhStep {
    pub kind: StepKind,
    /// Right side of the slider equation, when one was solved.
    pub target: Option<Rat>,
    /// The solved slider position, when one was solved.
    pub gamma_star: Option<Rat>,
    /// Probability that the extreme player wins the competitive game
    /// against opponent `j`, aligned with the input order.
    pub minus: Vec<Rat>,
    /// Probability that the cooperative game with opponent `j` is won.
    pub plus: Vec<Rat>,
    /// Probability that the extreme player wins its solitaire game; `None`
    /// for types without solitaire games.
    pub solitaire: Option<Rat>,
    /// Scores of the remaining players after the extreme player's games
    /// are removed; stays sorted by absolute value.
    pub reduced: Vec<Rat>,
}

/// One entry of the per-step construction trace.
#[derive(Debug, Clone)]
pub struct HhTrace {
    /// 1-based id of the player peeled at this step.
    pub player: usize,
    /// That player's score when peeled.
    pub score: Rat,
    /// 1-based ids of the remaining opponents, aligned with the step's
    /// probability arrays.
    pub opponents: Vec<usize>,
    pub step: HhStep,
}

fn clamp01(v: Rat) -> Rat {
    v.clamp(Rat::zero(), rat(1))
}

/// `ℓ_j(γ)` for the interval `[a−1, a]` with `a = |x_j| ≥ 0`.
fn slider_length(a: &Rat, gamma: &Rat) -> Rat {
    let right = clamp01(a - gamma);
    let below_zero = if gamma.is_negative() {
        clamp01(std::cmp::min(rat(1) - a, -gamma))
    } else {
        Rat::zero()
    };
    right + below_zero
}

/// Solves `Σ_j ℓ_j(γ*) = target` for the minimal `γ* ≥ −1`, exactly.
///
/// The sum is continuous, non-increasing and piecewise linear with kinks
/// only at `−1`, `0`, `|x_j|` and `|x_j| − 1`, so evaluating it on that
/// grid and interpolating inside the bracketing segment is exact.
pub fn solve_gamma_star(abs_scores: &[Rat], target: &Rat) -> Result<Rat> {
    for (k, a) in abs_scores.iter().enumerate() {
        if a.is_negative() {
            return Err(Error::Invalid("absolute scores must be nonnegative".into()));
        }
        if k > 0 && abs_scores[k - 1] > *a {
            return Err(Error::Invalid(
                "absolute scores must be sorted ascending".into(),
            ));
        }
    }
    if target.is_negative() {
        return Err(Error::Infeasible(format!(
            "slider target {} is negative",
            format_rational(target)
        )));
    }
    let total = |g: &Rat| -> Rat { abs_scores.iter().map(|a| slider_length(a, g)).sum() };

    let mut grid: BTreeSet<Rat> = BTreeSet::new();
    grid.insert(rat(-1));
    grid.insert(Rat::zero());
    for a in abs_scores {
        grid.insert(a.clone());
        grid.insert(a - rat(1));
    }

    let mut prev: Option<(Rat, Rat)> = None;
    for g in grid {
        let f = total(&g);
        if let Some((pg, pf)) = &prev {
            if *target > f && target < pf {
                // Linear on [pg, g]; land exactly on the crossing.
                return Ok(pg + (pf - target) / (pf - &f) * (&g - pg));
            }
        } else if target > &f {
            return Err(Error::Infeasible(format!(
                "slider target {} exceeds the maximum reachable sum {}",
                format_rational(target),
                format_rational(&f)
            )));
        }
        if f == *target {
            return Ok(g);
        }
        prev = Some((g, f));
    }
    unreachable!("breakpoint scan brackets every in-range target")
}

/// Peels the extreme player off a score sequence sorted by absolute value:
/// returns its game probabilities and the reduced sequence.
pub fn hh_step(t: RootType, x: &[Rat]) -> Result<HhStep> {
    t.require_bcd()?;
    let n = t.n;
    if x.len() != n {
        return Err(Error::Invalid(format!(
            "score vector has length {}, type has rank {n}",
            x.len()
        )));
    }
    let xa: Vec<Rat> = x.iter().map(abs).collect();
    for k in 1..n {
        if xa[k - 1] > xa[k] {
            return Err(Error::Invalid(
                "scores must be sorted by absolute value".into(),
            ));
        }
    }
    if let Some(violation) = submajorization_violation(&xa, &rho_complete(t)?) {
        return Err(Error::Infeasible(violation));
    }
    let delta = delta_of(t)?;
    let has_solo = t.kind != RootKind::D;
    let extreme = &x[n - 1];

    if n == 1 {
        let solitaire = match t.kind {
            RootKind::B => Some(extreme + frac(1, 2)),
            RootKind::C => Some((extreme + rat(1)) / rat(2)),
            RootKind::D => {
                debug_assert!(extreme.is_zero(), "feasibility forces a zero score");
                None
            }
            RootKind::A => unreachable!("require_bcd passed"),
        };
        return Ok(HhStep {
            kind: StepKind::Solo,
            target: None,
            gamma_star: None,
            minus: Vec::new(),
            plus: Vec::new(),
            solitaire,
            reduced: Vec::new(),
        });
    }

    if extreme.is_zero() {
        // The largest absolute score is zero, so every score is zero and
        // fair coins keep it that way.
        let half = frac(1, 2);
        return Ok(HhStep {
            kind: StepKind::Fair,
            target: None,
            gamma_star: None,
            minus: vec![half.clone(); n - 1],
            plus: vec![half.clone(); n - 1],
            solitaire: has_solo.then_some(half),
            reduced: vec![Rat::zero(); n - 1],
        });
    }

    let kind = if extreme.is_negative() {
        StepKind::Losing
    } else {
        StepKind::Winning
    };
    let target = rat((n - 1) as i64) + &delta - &xa[n - 1];
    let gamma = solve_gamma_star(&xa[..n - 1], &target)?;

    let mut minus = Vec::with_capacity(n - 1);
    let mut plus = Vec::with_capacity(n - 1);
    let mut reduced = Vec::with_capacity(n - 1);
    for j in 0..n - 1 {
        let r = clamp01(&xa[j] - &gamma);
        let s = if gamma.is_negative() {
            clamp01(std::cmp::min(rat(1) - &xa[j], -&gamma))
        } else {
            Rat::zero()
        };
        // For a negative extreme the lengths are win probabilities; for a
        // positive extreme they are loss probabilities. Which of the two
        // game kinds takes the right-of-γ length depends on the opponent's
        // sign; a zero opponent score makes the lengths coincide, so the
        // nonnegative branch is taken there.
        let (p_minus, p_plus) = match (kind, x[j].is_negative()) {
            (StepKind::Losing, true) => (r, s),
            (StepKind::Losing, false) => (s, r),
            (StepKind::Winning, true) => (rat(1) - s, rat(1) - r),
            (StepKind::Winning, false) => (rat(1) - r, rat(1) - s),
            _ => unreachable!(),
        };
        reduced.push(&x[j] + &p_minus - &p_plus);
        minus.push(p_minus);
        plus.push(p_plus);
    }
    let solitaire = has_solo.then(|| {
        if kind == StepKind::Losing {
            Rat::zero()
        } else {
            rat(1)
        }
    });

    // The extreme player's mean score must come out exactly; anything else
    // is an internal bug worth aborting on.
    let half = frac(1, 2);
    let mut balance: Rat = minus.iter().chain(plus.iter()).map(|p| p - &half).sum();
    balance += match (t.kind, &solitaire) {
        (RootKind::B, Some(p)) => p - &half,
        (RootKind::C, Some(p)) => rat(2) * (p - &half),
        _ => Rat::zero(),
    };
    assert_eq!(
        &balance, extreme,
        "extreme player balance violated at rank {n}"
    );
    for k in 1..n - 1 {
        assert!(
            abs(&reduced[k - 1]) <= abs(&reduced[k]),
            "absolute-value order not preserved by the reduction at rank {n}"
        );
    }

    Ok(HhStep {
        kind,
        target: Some(target),
        gamma_star: Some(gamma),
        minus,
        plus,
        solitaire,
        reduced,
    })
}

/// Builds a tournament on the complete graph of `t` whose mean score
/// sequence is exactly `x`, together with the per-step trace.
///
/// Ties in absolute score are broken by original player index (stable
/// sort), so the output is fully deterministic.
pub fn hh_construct_traced(t: RootType, x: &[Rat]) -> Result<(Tournament, Vec<HhTrace>)> {
    t.require_bcd()?;
    let n = t.n;
    if x.len() != n {
        return Err(Error::Invalid(format!(
            "score vector has length {}, type has rank {n}",
            x.len()
        )));
    }
    let xa: Vec<Rat> = x.iter().map(abs).collect();
    if let Some(violation) = submajorization_violation(&xa, &rho_complete(t)?) {
        return Err(Error::Infeasible(violation));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| xa[i].cmp(&xa[j]));
    let mut w: Vec<Rat> = order.iter().map(|&i| x[i].clone()).collect();

    let mut probs = std::collections::BTreeMap::new();
    let mut traces = Vec::with_capacity(n);
    for k in (1..=n).rev() {
        let sub = RootType::new(t.kind, k)?;
        let step = hh_step(sub, &w)?;
        let extreme_id = order[k - 1] + 1;
        let score_at_peel = w[k - 1].clone();
        if let Some(p) = &step.solitaire {
            let key = match t.kind {
                RootKind::B => format!("half:{extreme_id}"),
                RootKind::C => format!("loop:{extreme_id}"),
                _ => unreachable!("solitaire probability in a type without one"),
            };
            probs.insert(key, p.clone());
        }
        for (j, &opp) in order[..k - 1].iter().enumerate() {
            let opp_id = opp + 1;
            let (hi, lo) = (extreme_id.max(opp_id), extreme_id.min(opp_id));
            // Competitive probabilities are stored for the higher player
            // id; flip when the extreme player is the lower one.
            let stored_minus = if extreme_id > opp_id {
                step.minus[j].clone()
            } else {
                rat(1) - &step.minus[j]
            };
            probs.insert(format!("neg:{hi}-{lo}"), stored_minus);
            probs.insert(format!("pos:{hi}-{lo}"), step.plus[j].clone());
        }
        w = step.reduced.clone();
        traces.push(HhTrace {
            player: extreme_id,
            score: score_at_peel,
            opponents: order[..k - 1].iter().map(|&i| i + 1).collect(),
            step,
        });
    }

    let tournament = Tournament::from_prob_map(complete_graph(t)?, &probs)?;
    debug_assert_eq!(tournament.mean_score(), x);
    Ok((tournament, traces))
}

/// [`hh_construct_traced`] without the trace.
pub fn hh_construct(t: RootType, x: &[Rat]) -> Result<Tournament> {
    hh_construct_traced(t, x).map(|(tournament, _)| tournament)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use crate::roots::RootKind::*;

    fn t(kind: RootKind, n: usize) -> RootType {
        RootType::new(kind, n).unwrap()
    }

    fn rv(vals: &[(i64, i64)]) -> Vec<Rat> {
        vals.iter().map(|&(n, d)| frac(n, d)).collect()
    }

    /// The seven-player fixture: scores sorted ascending by absolute value.
    fn fixture_x() -> Vec<Rat> {
        rv(&[
            (-2, 5),
            (1, 2),
            (23, 10),
            (17, 5),
            (-41, 10),
            (49, 10),
            (-26, 5),
        ])
    }

    #[test]
    fn gamma_star_examples() {
        let aa: Vec<Rat> = fixture_x()[..6].iter().map(abs).collect();
        assert_eq!(solve_gamma_star(&aa, &frac(9, 5)).unwrap(), frac(67, 20));
        assert_eq!(solve_gamma_star(&aa, &rat(0)).unwrap(), frac(49, 10));
        // A single interval [-1, 0]: the sum is -2γ on [-1, 0].
        let zero = vec![rat(0)];
        assert_eq!(solve_gamma_star(&zero, &rat(2)).unwrap(), rat(-1));
        assert_eq!(solve_gamma_star(&zero, &rat(1)).unwrap(), frac(-1, 2));
        assert!(matches!(
            solve_gamma_star(&zero, &frac(5, 2)),
            Err(Error::Infeasible(_))
        ));
        assert!(matches!(
            solve_gamma_star(&zero, &frac(-1, 10)),
            Err(Error::Infeasible(_))
        ));
        // Empty opponent list: only target 0 is solvable.
        assert_eq!(solve_gamma_star(&[], &rat(0)).unwrap(), rat(-1));
        assert!(solve_gamma_star(&[], &rat(1)).is_err());
        // Contract violations.
        assert!(solve_gamma_star(&rv(&[(2, 1), (1, 1)]), &rat(0)).is_err());
        assert!(solve_gamma_star(&rv(&[(-1, 2)]), &rat(0)).is_err());
    }

    #[test]
    fn gamma_star_picks_minimal_solution_on_flat_segments() {
        // Intervals [1, 2] and [-1, 0]: for γ in [0, 1] the sum is
        // constant 1. The minimal solution is γ = 0.
        let aa = vec![rat(0), rat(2)];
        assert_eq!(solve_gamma_star(&aa, &rat(1)).unwrap(), rat(0));
    }

    #[test]
    fn step_on_negative_extreme() {
        let step = hh_step(t(C, 7), &fixture_x()).unwrap();
        assert_eq!(step.kind, StepKind::Losing);
        assert_eq!(step.solitaire, Some(rat(0)));
        assert_eq!(step.target, Some(frac(9, 5)));
        assert_eq!(step.gamma_star, Some(frac(67, 20)));
        assert_eq!(
            step.minus,
            rv(&[(0, 1), (0, 1), (0, 1), (0, 1), (3, 4), (0, 1)])
        );
        assert_eq!(
            step.plus,
            rv(&[(0, 1), (0, 1), (0, 1), (1, 20), (0, 1), (1, 1)])
        );
        assert_eq!(
            step.reduced,
            rv(&[(-2, 5), (1, 2), (23, 10), (67, 20), (-67, 20), (39, 10)])
        );
    }

    #[test]
    fn step_on_positive_extreme() {
        let x = rv(&[(-2, 5), (1, 2), (23, 10), (67, 20), (-67, 20), (39, 10)]);
        let step = hh_step(t(C, 6), &x).unwrap();
        assert_eq!(step.kind, StepKind::Winning);
        assert_eq!(step.solitaire, Some(rat(1)));
        assert_eq!(step.target, Some(frac(21, 10)));
        assert_eq!(step.gamma_star, Some(frac(11, 5)));
        assert_eq!(step.minus, rv(&[(1, 1), (1, 1), (9, 10), (0, 1), (1, 1)]));
        assert_eq!(step.plus, rv(&[(1, 1), (1, 1), (1, 1), (1, 1), (0, 1)]));
        assert_eq!(
            step.reduced,
            rv(&[(-2, 5), (1, 2), (11, 5), (47, 20), (-47, 20)])
        );
    }

    #[test]
    fn base_cases() {
        let step = hh_step(t(C, 1), &[frac(1, 2)]).unwrap();
        assert_eq!(step.kind, StepKind::Solo);
        assert_eq!(step.solitaire, Some(frac(3, 4)));
        let step = hh_step(t(B, 1), &[frac(-1, 2)]).unwrap();
        assert_eq!(step.solitaire, Some(rat(0)));
        let step = hh_step(t(D, 1), &[rat(0)]).unwrap();
        assert_eq!(step.solitaire, None);
        assert!(matches!(
            hh_step(t(D, 1), &[frac(1, 2)]),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn zero_scores_give_fair_coins() {
        let step = hh_step(t(B, 4), &vec![rat(0); 4]).unwrap();
        assert_eq!(step.kind, StepKind::Fair);
        assert!(step.minus.iter().all(|p| *p == frac(1, 2)));
        assert_eq!(step.solitaire, Some(frac(1, 2)));
        let (tournament, _) = hh_construct_traced(t(C, 3), &vec![rat(0); 3]).unwrap();
        assert!(tournament.probs().iter().all(|p| *p == frac(1, 2)));
        assert_eq!(tournament.mean_score(), vec![rat(0); 3]);
    }

    #[test]
    fn extreme_vector_gives_all_wins() {
        for kind in [B, C, D] {
            for n in 1..=4 {
                let rt = t(kind, n);
                let rho = rho_complete(rt).unwrap();
                let tournament = hh_construct(rt, &rho).unwrap();
                assert!(
                    tournament.probs().iter().all(|p| *p == rat(1)),
                    "{rt} not all-win"
                );
                assert_eq!(tournament.mean_score(), rho);
            }
        }
    }

    #[test]
    fn signed_extreme_permutation_is_deterministic() {
        // Scores (-2, 1) on C_2: a vertex of the feasible region.
        let x = vec![rat(-2), rat(1)];
        let tournament = hh_construct(t(C, 2), &x).unwrap();
        assert!(tournament.is_deterministic());
        assert_eq!(tournament.mean_score(), x);
    }

    #[test]
    fn construct_round_trips_small_fixtures() {
        let cases: Vec<(RootKind, Vec<Rat>)> = vec![
            (B, rv(&[(1, 2), (-1, 3), (5, 4)])),
            (C, rv(&[(0, 1), (-3, 2), (2, 1), (-1, 5)])),
            (D, rv(&[(1, 4), (-5, 4), (9, 8)])),
            (C, fixture_x()),
        ];
        for (kind, x) in cases {
            let rt = t(kind, x.len());
            let tournament = hh_construct(rt, &x).unwrap();
            assert_eq!(tournament.mean_score(), x, "{rt} mean score mismatch");
        }
    }

    #[test]
    fn infeasible_scores_cite_a_partial_sum() {
        let err = hh_construct(t(C, 2), &[rat(0), frac(5, 2)]).unwrap_err();
        match err {
            Error::Infeasible(msg) => assert!(msg.contains("exceeding"), "{msg}"),
            other => panic!("expected infeasible, got {other}"),
        }
    }

    #[test]
    fn tie_breaking_is_stable_by_player_index() {
        // Players 2 and 3 tie in absolute score; the later index is peeled
        // first, so the trace order is deterministic.
        let x = rv(&[(2, 1), (-1, 1), (1, 1)]);
        let (tournament, traces) = hh_construct_traced(t(C, 3), &x).unwrap();
        assert_eq!(traces[0].player, 1);
        assert_eq!(traces[1].player, 3);
        assert_eq!(traces[2].player, 2);
        assert_eq!(tournament.mean_score(), x);
    }
}
