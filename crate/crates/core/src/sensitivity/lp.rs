// SPDX-License-Identifier: Apache-2.0

//! Small dense linear programs in standard form,
//! `min cᵀx  s.t.  Ax = b, x ≥ 0`, by the two-phase primal simplex method
//! with Bland's rule.

use crate::error::{Error, Result};

pub const FEASIBILITY_TOL: f64 = 1e-9;
pub const MAX_PIVOTS: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, objective: f64 },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> f64 {
        self.rows[r][self.width]
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let p = self.rows[pr][pc];
        for v in self.rows[pr].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[pr].clone();
        for (r, row) in self.rows.iter_mut().enumerate() {
            if r == pr {
                continue;
            }
            let f = row[pc];
            if f != 0.0 {
                for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[pc] = 0.0;
            }
        }
        self.basis[pr] = pc;
    }

    /// Minimise `cost` over the columns flagged in `allowed`.
    fn optimise(&mut self, cost: &[f64], allowed: &[bool], tol: f64, pivots: &mut usize) -> Result<bool> {
        loop {
            // Reduced costs c_j - c_Bᵀ B⁻¹ A_j.
            let mut entering = None;
            for j in 0..self.width {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut rc = cost[j];
                for (r, &b) in self.basis.iter().enumerate() {
                    rc -= cost[b] * self.rows[r][j];
                }
                if rc < -tol {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else { return Ok(true) };

            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows.len() {
                let a = self.rows[r][j];
                if a > tol {
                    let ratio = self.rhs(r) / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio - tol || (ratio <= lratio + tol && self.basis[r] < self.basis[lr]) {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else { return Ok(false) };
            *pivots += 1;
            if *pivots > MAX_PIVOTS {
                return Err(Error::IterationCap(MAX_PIVOTS));
            }
            self.pivot(r, j);
        }
    }
}

/// Solve `min cᵀx, Ax = b, x ≥ 0`. Pass `c = None` for a pure feasibility check.
pub fn solve(a: &[Vec<f64>], b: &[f64], c: Option<&[f64]>, tol: f64) -> Result<LpOutcome> {
    let m = a.len();
    if b.len() != m {
        return Err(Error::Shape(format!("{m} constraint rows but {} right-hand sides", b.len())));
    }
    let n = a.first().map_or(0, |r| r.len());
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::Shape("ragged constraint matrix".into()));
    }
    if let Some(c) = c {
        if c.len() != n {
            return Err(Error::Shape(format!("{n} variables but {} costs", c.len())));
        }
    }

    // Columns: n structural, m artificial, then the right-hand side.
    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (ar, &bi)) in a.iter().zip(b).enumerate() {
        let sign = if bi < 0.0 { -1.0 } else { 1.0 };
        let mut row = vec![0.0; width + 1];
        for (j, &v) in ar.iter().enumerate() {
            row[j] = sign * v;
        }
        row[n + i] = 1.0;
        row[width] = sign * bi;
        rows.push(row);
    }
    let mut t = Tableau {
        rows,
        basis: (n..n + m).collect(),
        width,
    };
    let mut pivots = 0usize;

    let mut phase1 = vec![0.0; width];
    phase1[n..].iter_mut().for_each(|v| *v = 1.0);
    let all = vec![true; width];
    t.optimise(&phase1, &all, tol, &mut pivots)?;
    let infeas: f64 = (0..m).filter(|&r| t.basis[r] >= n).map(|r| t.rhs(r)).sum();
    let scale = 1.0 + b.iter().map(|v| v.abs()).sum::<f64>();
    if infeas > tol * scale {
        return Ok(LpOutcome::Infeasible);
    }

    // Drive zero-level artificials out of the basis; drop redundant rows.
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= n {
            match (0..n).find(|&j| t.rows[r][j].abs() > tol) {
                Some(j) => {
                    t.pivot(r, j);
                    r += 1;
                }
                None => {
                    t.rows.remove(r);
                    t.basis.remove(r);
                }
            }
        } else {
            r += 1;
        }
    }

    let structural: Vec<bool> = (0..width).map(|j| j < n).collect();
    let objective_cost: Vec<f64> = match c {
        Some(c) => c.iter().copied().chain(std::iter::repeat_n(0.0, m)).collect(),
        None => vec![0.0; width],
    };
    if !t.optimise(&objective_cost, &structural, tol, &mut pivots)? {
        return Ok(LpOutcome::Unbounded);
    }
    let mut x = vec![0.0; n];
    for (r, &bcol) in t.basis.iter().enumerate() {
        if bcol < n {
            x[bcol] = t.rhs(r).max(0.0);
        }
    }
    let objective = objective_cost[..n].iter().zip(&x).map(|(c, x)| c * x).sum();
    Ok(LpOutcome::Optimal { x, objective })
}

/// Is `point` a convex combination of `vertices` (all in the same coordinates)?
pub fn in_convex_hull(vertices: &[Vec<f64>], point: &[f64], tol: f64) -> Result<bool> {
    let d = point.len();
    if vertices.iter().any(|v| v.len() != d) {
        return Err(Error::Shape("vertex and point dimensions differ".into()));
    }
    if vertices.is_empty() {
        return Ok(false);
    }
    let mut a: Vec<Vec<f64>> = (0..d).map(|i| vertices.iter().map(|v| v[i]).collect()).collect();
    a.push(vec![1.0; vertices.len()]);
    let mut b = point.to_vec();
    b.push(1.0);
    Ok(matches!(solve(&a, &b, None, tol)?, LpOutcome::Optimal { .. }))
}

/// `min Σλ` subject to `Σ λ_i v_i = point`, `λ ≥ 0`; `None` when infeasible.
pub fn conic_gauge(vertices: &[Vec<f64>], point: &[f64], tol: f64) -> Result<Option<f64>> {
    let d = point.len();
    if vertices.iter().any(|v| v.len() != d) {
        return Err(Error::Shape("vertex and point dimensions differ".into()));
    }
    let a: Vec<Vec<f64>> = (0..d).map(|i| vertices.iter().map(|v| v[i]).collect()).collect();
    let c = vec![1.0; vertices.len()];
    match solve(&a, point, Some(&c), tol)? {
        LpOutcome::Optimal { objective, .. } => Ok(Some(objective)),
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => Err(Error::Domain("gauge program is unbounded".into())),
    }
}
