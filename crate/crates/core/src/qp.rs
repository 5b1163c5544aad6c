//! Strictly convex QP by the Goldfarb–Idnani dual active-set method:
//! `min ½ xᵀGx + aᵀx` subject to `n_j·x ≥ b_j`, `G` positive definite.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct QpSolution {
    pub x: Vec<f64>,
    /// Indices of active constraints and their multipliers.
    pub active: Vec<(usize, f64)>,
    pub iterations: usize,
}

#[derive(Clone, Debug)]
pub enum QpOutcome {
    Optimal(QpSolution),
    Infeasible,
}

pub fn solve(
    g: &DMatrix<f64>,
    a: &DVector<f64>,
    constraints: &[(Vec<f64>, f64)],
    tol: f64,
    max_iter: usize,
) -> Result<QpOutcome> {
    let n = g.nrows();
    let chol = g.clone().cholesky().ok_or_else(|| Error::Solver("QP matrix is not positive definite".into()))?;
    let ginv = chol.inverse();

    // Unit-normal rows keep the violation scale comparable across rows.
    let cons: Vec<(DVector<f64>, f64)> = constraints
        .iter()
        .map(|(row, b)| {
            let v = DVector::from_column_slice(row);
            let norm = v.norm();
            if norm == 0.0 {
                (v, *b)
            } else {
                (v / norm, b / norm)
            }
        })
        .collect();
    for (v, b) in &cons {
        if v.norm() == 0.0 && *b > tol {
            return Ok(QpOutcome::Infeasible);
        }
    }

    let mut x = -(&ginv * a);
    let mut active: Vec<usize> = Vec::new();
    let mut u: Vec<f64> = Vec::new();
    let slack = |x: &DVector<f64>, j: usize| cons[j].0.dot(x) - cons[j].1;
    let mut iterations = 0;

    loop {
        let violated = (0..cons.len())
            .filter(|j| !active.contains(j) && cons[*j].0.norm() > 0.0)
            .map(|j| (j, slack(&x, j)))
            .filter(|(_, s)| *s < -tol)
            .min_by(|a, b| a.1.total_cmp(&b.1));
        let Some((p, _)) = violated else {
            let active = active.iter().copied().zip(u.iter().copied()).collect();
            return Ok(QpOutcome::Optimal(QpSolution { x: x.iter().copied().collect(), active, iterations }));
        };
        let np = cons[p].0.clone();
        let mut up = 0.0;

        loop {
            iterations += 1;
            if iterations > max_iter {
                return Err(Error::Solver(format!("QP did not converge in {max_iter} iterations")));
            }
            let (z, r) = directions(&ginv, &cons, &active, &np, n)?;
            let mut t1 = f64::INFINITY;
            let mut drop = None;
            for (k, rk) in r.iter().enumerate() {
                if *rk > tol {
                    let ratio = u[k] / rk;
                    if ratio < t1 {
                        t1 = ratio;
                        drop = Some(k);
                    }
                }
            }
            let zn = z.dot(&np);
            let t2 = if z.norm() <= tol * 1e-3 || zn <= 0.0 { f64::INFINITY } else { -slack(&x, p) / zn };
            let t = t1.min(t2);
            if !t.is_finite() {
                return Ok(QpOutcome::Infeasible);
            }
            for (k, rk) in r.iter().enumerate() {
                u[k] -= t * rk;
            }
            up += t;
            if t2.is_finite() {
                x += &z * t;
            }
            // Full step: p joins the active set.
            if t2 <= t1 {
                active.push(p);
                u.push(up);
                break;
            }
            let k = drop.expect("partial step implies a blocking constraint");
            active.remove(k);
            u.remove(k);
        }
    }
}

fn directions(
    ginv: &DMatrix<f64>,
    cons: &[(DVector<f64>, f64)],
    active: &[usize],
    np: &DVector<f64>,
    n: usize,
) -> Result<(DVector<f64>, Vec<f64>)> {
    if active.is_empty() {
        return Ok((ginv * np, Vec::new()));
    }
    let k = active.len();
    let mut nmat = DMatrix::<f64>::zeros(n, k);
    for (c, &j) in active.iter().enumerate() {
        nmat.set_column(c, &cons[j].0);
    }
    let gn = ginv * &nmat;
    let m = nmat.transpose() * &gn;
    let minv = m.try_inverse().ok_or_else(|| Error::Solver("active constraints became dependent".into()))?;
    let nstar = &minv * gn.transpose();
    let r = &nstar * np;
    let z = ginv * np - &gn * &r;
    Ok((z, r.iter().copied().collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opt(o: QpOutcome) -> QpSolution {
        match o {
            QpOutcome::Optimal(s) => s,
            QpOutcome::Infeasible => panic!("infeasible"),
        }
    }

    #[test]
    fn halfspace_projection() {
        // min |x|² s.t. x + y ≥ 2 → (1, 1).
        let g = DMatrix::identity(2, 2);
        let a = DVector::zeros(2);
        let s = opt(solve(&g, &a, &[(vec![1.0, 1.0], 2.0)], 1e-12, 100).unwrap());
        assert!((s.x[0] - 1.0).abs() < 1e-12 && (s.x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn corner_and_redundant() {
        // min |x|² s.t. x ≥ 1, y ≥ 2, x + y ≥ 1 → (1, 2).
        let g = DMatrix::identity(2, 2);
        let a = DVector::zeros(2);
        let cons = [(vec![1.0, 0.0], 1.0), (vec![0.0, 1.0], 2.0), (vec![1.0, 1.0], 1.0)];
        let s = opt(solve(&g, &a, &cons, 1e-12, 100).unwrap());
        assert!((s.x[0] - 1.0).abs() < 1e-12 && (s.x[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn touching_constraints() {
        // x - y ≥ 2 alone gives (1, -1), which also sits on y ≥ -1 and x ≥ 1.
        let g = DMatrix::identity(2, 2);
        let a = DVector::zeros(2);
        let cons = [(vec![1.0, -1.0], 2.0), (vec![0.0, 1.0], -1.0), (vec![1.0, 0.0], 1.0)];
        let s = opt(solve(&g, &a, &cons, 1e-12, 100).unwrap());
        assert!((s.x[0] - 1.0).abs() < 1e-10 && (s.x[1] + 1.0).abs() < 1e-10, "{:?}", s.x);
    }

    #[test]
    fn infeasible() {
        let g = DMatrix::identity(1, 1);
        let a = DVector::zeros(1);
        let cons = [(vec![1.0], 2.0), (vec![-1.0], -1.0)];
        assert!(matches!(solve(&g, &a, &cons, 1e-12, 100).unwrap(), QpOutcome::Infeasible));
    }

    #[test]
    fn weighted_metric() {
        // min 2x² + y² s.t. x + y ≥ 3 → (1, 2).
        let g = DMatrix::from_row_slice(2, 2, &[4.0, 0.0, 0.0, 2.0]);
        let a = DVector::zeros(2);
        let s = opt(solve(&g, &a, &[(vec![1.0, 1.0], 3.0)], 1e-12, 100).unwrap());
        assert!((s.x[0] - 1.0).abs() < 1e-12 && (s.x[1] - 2.0).abs() < 1e-12);
    }
}
