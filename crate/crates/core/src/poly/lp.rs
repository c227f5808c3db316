//! Dense linear programs `min c.x  s.t.  G x <= h` through clarabel.

use clarabel::algebra::CscMatrix;
use clarabel::solver::{DefaultSettingsBuilder, DefaultSolver, IPSolver, NonnegativeConeT, SolverStatus};
use nalgebra::DMatrix;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal,
    Infeasible,
}

/// Returns the minimizer, or `Infeasible` with an empty vector.
pub fn solve_lp(c: &[f64], g: &DMatrix<f64>, h: &[f64]) -> Result<(LpOutcome, Vec<f64>)> {
    let (m, n) = g.shape();
    assert_eq!(c.len(), n);
    assert_eq!(h.len(), m);
    let mut colptr = Vec::with_capacity(n + 1);
    let mut rowval = Vec::new();
    let mut nzval = Vec::new();
    colptr.push(0);
    for j in 0..n {
        for i in 0..m {
            let v = g[(i, j)];
            if v != 0.0 {
                rowval.push(i);
                nzval.push(v);
            }
        }
        colptr.push(rowval.len());
    }
    let a = CscMatrix::new(m, n, colptr, rowval, nzval);
    let p = CscMatrix::<f64>::zeros((n, n));
    let settings = DefaultSettingsBuilder::default()
        .verbose(false)
        .max_iter(400)
        .tol_gap_abs(1e-10)
        .tol_gap_rel(1e-10)
        .tol_feas(1e-10)
        .build()
        .map_err(|e| Error::SolverFailure(format!("{e:?}")))?;
    let cones = [NonnegativeConeT(m)];
    let mut solver =
        DefaultSolver::new(&p, c, &a, h, &cones, settings).map_err(|e| Error::SolverFailure(format!("{e:?}")))?;
    solver.solve();
    match solver.solution.status {
        SolverStatus::Solved | SolverStatus::AlmostSolved => Ok((LpOutcome::Optimal, solver.solution.x.clone())),
        SolverStatus::PrimalInfeasible | SolverStatus::AlmostPrimalInfeasible => Ok((LpOutcome::Infeasible, Vec::new())),
        s => Err(Error::SolverFailure(format!("{s:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_lp() {
        // min x - y on the unit box
        let g = DMatrix::from_row_slice(4, 2, &[1.0, 0.0, 0.0, 1.0, -1.0, 0.0, 0.0, -1.0]);
        let (st, x) = solve_lp(&[1.0, -1.0], &g, &[1.0; 4]).unwrap();
        assert_eq!(st, LpOutcome::Optimal);
        assert!((x[0] + 1.0).abs() < 1e-7 && (x[1] - 1.0).abs() < 1e-7);
    }

    #[test]
    fn infeasible_lp() {
        let g = DMatrix::from_row_slice(2, 1, &[1.0, -1.0]);
        let (st, _) = solve_lp(&[1.0], &g, &[-1.0, -1.0]).unwrap();
        assert_eq!(st, LpOutcome::Infeasible);
    }
}
