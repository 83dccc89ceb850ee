//! Logistic strength fitting: maps mean scores to player strengths.
//!
//! Each player carries a real strength `λ_i`. A competitive game is won
//! with probability `σ(λ_i - λ_j)`, a cooperative game with
//! `σ(λ_i + λ_j)`, a solitaire game with `σ(λ_i)`, where `σ` is the
//! logistic function. [`bt_forward`] evaluates the resulting mean score on
//! the complete graph, and [`bt_fit`] inverts it with a damped Newton
//! iteration. This is the one corner of the crate that works in floating
//! point: the forward map is transcendental, so exact arithmetic has
//! nothing to grab onto. The strict-interior precondition, by contrast, is
//! checked exactly on the rational inputs.

use num_traits::ToPrimitive;

use crate::majorize::strict_weak_submajorizes;
use crate::rational::{abs, Rat};
use crate::roots::{rho_complete, RootKind, RootType};
use crate::{Error, Result};

fn sigmoid(u: f64) -> f64 {
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

fn sigmoid_slope(u: f64) -> f64 {
    let s = sigmoid(u);
    s * (1.0 - s)
}

fn check_rank(t: RootType, len: usize) -> Result<()> {
    t.require_bcd()?;
    if len != t.n {
        return Err(Error::Invalid(format!(
            "vector has length {len}, type has rank {}",
            t.n
        )));
    }
    Ok(())
}

/// Mean score of the logistic-strength tournament on the complete graph.
pub fn bt_forward(lambda: &[f64], t: RootType) -> Result<Vec<f64>> {
    check_rank(t, lambda.len())?;
    let n = lambda.len();
    let mut x = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            if j != i {
                x[i] += sigmoid(lambda[i] - lambda[j]) - 0.5;
                x[i] += sigmoid(lambda[i] + lambda[j]) - 0.5;
            }
        }
        match t.kind {
            RootKind::B => x[i] += sigmoid(lambda[i]) - 0.5,
            RootKind::C => x[i] += 2.0 * (sigmoid(lambda[i]) - 0.5),
            RootKind::D => {}
            RootKind::A => unreachable!("require_bcd passed"),
        }
    }
    Ok(x)
}

/// Jacobian of [`bt_forward`] with respect to the strengths.
pub fn bt_jacobian(lambda: &[f64], t: RootType) -> Result<Vec<Vec<f64>>> {
    check_rank(t, lambda.len())?;
    let n = lambda.len();
    let mut jac = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if j == i {
                continue;
            }
            let d = sigmoid_slope(lambda[i] - lambda[j]);
            let s = sigmoid_slope(lambda[i] + lambda[j]);
            jac[i][i] += d + s;
            jac[i][j] = s - d;
        }
        match t.kind {
            RootKind::B => jac[i][i] += sigmoid_slope(lambda[i]),
            RootKind::C => jac[i][i] += 2.0 * sigmoid_slope(lambda[i]),
            RootKind::D | RootKind::A => {}
        }
    }
    Ok(jac)
}

/// Solves a dense linear system by LU with partial pivoting; `None` when
/// the matrix is numerically singular.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs()))
            .unwrap();
        if a[pivot][col].abs() < 1e-14 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        let pivot_row = a[col].clone();
        let pivot_rhs = b[col];
        for row in col + 1..n {
            let f = a[row][col] / pivot_row[col];
            if f == 0.0 {
                continue;
            }
            for (cell, p) in a[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *cell -= f * p;
            }
            b[row] -= f * pivot_rhs;
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Some(x)
}

fn residual_norm(lambda: &[f64], target: &[f64], t: RootType) -> Result<(Vec<f64>, f64)> {
    let fx = bt_forward(lambda, t)?;
    let r: Vec<f64> = fx.iter().zip(target).map(|(a, b)| a - b).collect();
    let norm = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok((r, norm))
}

/// Recovers strengths whose logistic tournament has mean score `x`.
///
/// The forward map covers exactly the strict interior of the feasible
/// region, so the interior condition is verified exactly on the rational
/// input before any floating point happens; boundary or exterior scores
/// are rejected. Newton steps are halved until the residual decreases, and
/// the iteration stops once the sup-norm residual drops below `tol`.
pub fn bt_fit(x: &[Rat], t: RootType, tol: f64) -> Result<Vec<f64>> {
    check_rank(t, x.len())?;
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::Invalid("tolerance must be positive".into()));
    }
    let xa: Vec<Rat> = x.iter().map(abs).collect();
    if !strict_weak_submajorizes(&xa, &rho_complete(t)?)? {
        return Err(Error::Precondition(
            "mean score must lie strictly inside the feasible region".into(),
        ));
    }
    let target: Vec<f64> = x
        .iter()
        .map(|v| v.to_f64().expect("rational converts to f64"))
        .collect();
    let n = x.len();
    let mut lambda = vec![0.0; n];
    let (mut r, mut norm) = residual_norm(&lambda, &target, t)?;
    for _ in 0..200 {
        if norm < tol {
            return Ok(lambda);
        }
        let jac = bt_jacobian(&lambda, t)?;
        let Some(step) = solve_dense(jac, r.clone()) else {
            return Err(Error::Internal(
                "Jacobian is singular despite diagonal dominance".into(),
            ));
        };
        let mut scale = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let trial: Vec<f64> = lambda
                .iter()
                .zip(&step)
                .map(|(l, s)| l - scale * s)
                .collect();
            let (tr, tn) = residual_norm(&trial, &target, t)?;
            if tn < norm {
                accepted = Some((trial, tr, tn));
                break;
            }
            scale *= 0.5;
        }
        let Some((trial, tr, tn)) = accepted else {
            return Err(Error::NoConvergence { residual: norm });
        };
        lambda = trial;
        r = tr;
        norm = tn;
    }
    if norm < tol {
        Ok(lambda)
    } else {
        Err(Error::NoConvergence { residual: norm })
    }
}
