//! Primal and dual solvers and the duality-gap report.
//!
//! The primal is solved exactly: by the simplex method when `Q = 0`, by the
//! active-set QP method otherwise. The dual is solved as its own program,
//! the Wolfe dual
//!
//! ```text
//!     maximize    c - ½ x'Qx - b'w - d'μ
//!     subject to  Qx + A'w + H'μ = -q,   w ≥ 0
//! ```
//!
//! in the row form `Ax ≤ b`, `Hx = d` of the primal, and its value is
//! re-evaluated by [`dual_value`] at the recovered multipliers. Rows are
//! reweighted before the dual solve: cone rows by `1 / ⟨a_k, e⟩` and box rows
//! by `1 / (x_b - x_a)`, so the frame multipliers measure `⟨y*, e⟩` and the
//! box multipliers against the box width. Multipliers are reported in the
//! original frame.

use serde::{Deserialize, Serialize};

use super::{dual_value, BoxProgram, Multipliers, SlaterReport};
use crate::error::{check_dim, Error, Result};
use crate::numkernel::{solve_lp, solve_qp, FarkasCertificate, LpProblem, QpProblem, Status};
use crate::tolerance::Tolerances;
use crate::vector::{dot, ExtendedReal};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimalSolution {
    pub status: Status,
    pub x: Vec<f64>,
    pub value: ExtendedReal,
    pub multipliers: Option<Multipliers>,
    pub kkt_residual: f64,
    pub iterations: usize,
    /// Infeasibility proof for the constraint system of [`BoxProgram::to_qp`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub farkas: Option<FarkasCertificate>,
}

impl PrimalSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}

pub fn solve_primal(prog: &BoxProgram) -> Result<PrimalSolution> {
    let qp = prog.to_qp();
    let k = prog.num_equalities();
    let (status, x, w, mu, iterations, farkas) = if prog.objective().is_affine() {
        let mut lp = qp.feasibility_lp();
        lp.cost = qp.linear.clone();
        let r = solve_lp(&lp)?;
        match (r.status, r.duals) {
            (Status::Optimal, Some(d)) => {
                let mu: Vec<f64> = d.eq.iter().map(|v| -v).collect();
                (Status::Optimal, r.point, d.ineq, mu, r.iterations, None)
            }
            (Status::Infeasible, _) => (
                Status::Infeasible,
                Vec::new(),
                Vec::new(),
                Vec::new(),
                r.iterations,
                r.farkas,
            ),
            (other, _) => {
                return Err(Error::Solver(format!(
                    "primal LP ended with status {other:?}"
                )))
            }
        }
    } else {
        let s = solve_qp(&qp)?;
        match s.status {
            Status::Optimal => (
                Status::Optimal,
                s.x,
                s.ineq_multipliers,
                s.eq_multipliers,
                s.iterations,
                None,
            ),
            Status::Infeasible => (
                Status::Infeasible,
                Vec::new(),
                Vec::new(),
                Vec::new(),
                s.iterations,
                s.farkas,
            ),
            other => {
                return Err(Error::Solver(format!(
                    "primal QP ended with status {other:?}"
                )))
            }
        }
    };
    if status == Status::Infeasible {
        return Ok(PrimalSolution {
            status,
            x,
            value: ExtendedReal::PosInfinity,
            multipliers: None,
            kkt_residual: f64::INFINITY,
            iterations,
            farkas,
        });
    }
    debug_assert_eq!(mu.len(), k);
    // box bounds are exact data; snap rounding-level overshoot back onto them
    let x: Vec<f64> = x
        .iter()
        .zip(prog.lower().iter().zip(prog.upper()))
        .map(|(v, (a, b))| v.clamp(*a, *b))
        .collect();
    let kkt = qp.kkt_residual(&x, &w, &mu);
    Ok(PrimalSolution {
        status,
        value: ExtendedReal::Finite(prog.objective().value(&x)),
        multipliers: Some(prog.multipliers_from_rows(&w, &mu)),
        x,
        kkt_residual: kkt,
        iterations,
        farkas: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualSolution {
    pub status: Status,
    pub multipliers: Option<Multipliers>,
    /// Infimum of the Lagrangian at `multipliers`.
    pub value: ExtendedReal,
    /// Optimal value reported by the dual solver itself.
    pub solver_value: ExtendedReal,
    /// Row multipliers in the reweighted frame.
    pub frame_multipliers: Vec<f64>,
    pub iterations: usize,
}

/// Row scaling `s_i` with reweighted rows `s_i a_i`.
fn row_scaling(prog: &BoxProgram, e: &[f64]) -> Result<Vec<f64>> {
    let mut s = Vec::new();
    if let Some(cone) = prog.constraint_cone() {
        check_dim(cone.dim(), e.len())?;
        for a in cone.halfspaces() {
            let d = dot(a, e);
            if d <= 0.0 {
                return Err(Error::Precondition(
                    "e must lie in the interior of the constraint cone".into(),
                ));
            }
            s.push(1.0 / d);
        }
    } else {
        check_dim(0, e.len())?;
    }
    for _ in 0..2 {
        for (a, b) in prog.lower().iter().zip(prog.upper()) {
            s.push(1.0 / (b - a));
        }
    }
    Ok(s)
}

pub fn solve_dual(prog: &BoxProgram, e: &[f64]) -> Result<DualSolution> {
    let n = prog.dim();
    let scale = row_scaling(prog, e)?;
    let rows = prog.inequality_rows();
    let eqs = prog.equality_rows();
    let (r, k) = (rows.len(), eqs.len());
    let q = &prog.objective().q_mat;
    let quadratic = !prog.objective().is_affine();
    // variables: [x (n, only when Q ≠ 0)] [w' (r)] [μ (k)]
    let nx = if quadratic { n } else { 0 };
    let nv = nx + r + k;
    let mut cost = vec![0.0; nv];
    for (i, row) in rows.iter().enumerate() {
        cost[nx + i] = scale[i] * row.rhs;
    }
    for (j, row) in eqs.iter().enumerate() {
        cost[nx + r + j] = row.rhs;
    }
    let mut stationarity = Vec::with_capacity(n);
    for l in 0..n {
        let mut coeffs = vec![0.0; nv];
        if quadratic {
            coeffs[..n].copy_from_slice(&q[l]);
        }
        for (i, row) in rows.iter().enumerate() {
            coeffs[nx + i] = scale[i] * row.coeffs[l];
        }
        for (j, row) in eqs.iter().enumerate() {
            coeffs[nx + r + j] = row.coeffs[l];
        }
        stationarity.push((coeffs, -prog.objective().q[l]));
    }
    let c = prog.objective().c;
    let (status, point, opt, iterations) = if quadratic {
        let mut hess = vec![vec![0.0; nv]; nv];
        for i in 0..n {
            hess[i][..n].copy_from_slice(&q[i]);
        }
        let mut p = QpProblem::new(hess, cost);
        for (coeffs, rhs) in stationarity {
            p.equal(coeffs, rhs);
        }
        for i in 0..r {
            let mut coeffs = vec![0.0; nv];
            coeffs[nx + i] = -1.0;
            p.leq(coeffs, 0.0);
        }
        let s = solve_qp(&p)?;
        (s.status, s.x, s.value, s.iterations)
    } else {
        let mut p = LpProblem::new(cost);
        for (coeffs, rhs) in stationarity {
            p.equal(coeffs, rhs);
        }
        for i in 0..r {
            p.bound(nx + i, Some(0.0), None);
        }
        let s = solve_lp(&p)?;
        (s.status, s.point, s.value, s.iterations)
    };
    match status {
        Status::Optimal => {
            let frame: Vec<f64> = point[nx..nx + r].iter().map(|v| v.max(0.0)).collect();
            let w: Vec<f64> = frame.iter().zip(&scale).map(|(v, s)| v * s).collect();
            let mu = point[nx + r..].to_vec();
            let mult = prog.multipliers_from_rows(&w, &mu);
            let value = dual_value(prog, &mult)?;
            Ok(DualSolution {
                status,
                multipliers: Some(mult),
                value,
                solver_value: ExtendedReal::Finite(c - opt),
                frame_multipliers: frame,
                iterations,
            })
        }
        // the dual is unbounded above: the primal is infeasible
        Status::Unbounded => Ok(DualSolution {
            status,
            multipliers: None,
            value: ExtendedReal::PosInfinity,
            solver_value: ExtendedReal::PosInfinity,
            frame_multipliers: Vec::new(),
            iterations,
        }),
        other => Err(Error::Solver(format!(
            "dual solve ended with status {other:?}"
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    pub primal: ExtendedReal,
    pub dual: ExtendedReal,
    /// `primal - dual`.
    pub gap: ExtendedReal,
    pub slater: SlaterReport,
    /// The gap bound is asserted only under the modified Slater condition.
    pub asserted: bool,
    pub gap_tolerance: f64,
    /// `dual ≤ primal + 1e-9 (1 + |primal|)`.
    pub weak_duality: bool,
    pub passed: bool,
    /// Absent when the primal is infeasible.
    pub primal_kkt_residual: Option<f64>,
    pub x: Vec<f64>,
    pub multipliers: Option<Multipliers>,
}

pub fn duality_gap_report(
    prog: &BoxProgram,
    e: &[f64],
    tols: &Tolerances,
) -> Result<DualityReport> {
    let slater = super::check_modified_slater(prog, e)?;
    let primal = solve_primal(prog)?;
    let dual = solve_dual(prog, e)?;
    let gap = match (primal.value, dual.value) {
        (ExtendedReal::Finite(p), ExtendedReal::Finite(d)) => ExtendedReal::Finite(p - d),
        (ExtendedReal::PosInfinity, ExtendedReal::PosInfinity) => ExtendedReal::Finite(0.0),
        (_, ExtendedReal::NegInfinity) | (ExtendedReal::PosInfinity, _) => {
            ExtendedReal::PosInfinity
        }
        _ => ExtendedReal::NegInfinity,
    };
    let weak_duality = match (primal.value, dual.value) {
        (ExtendedReal::Finite(p), ExtendedReal::Finite(d)) => d <= p + 1e-9 * (1.0 + p.abs()),
        (ExtendedReal::Finite(_), ExtendedReal::PosInfinity) => false,
        _ => true,
    };
    let asserted = slater.holds;
    let within = matches!(gap, ExtendedReal::Finite(g) if g.abs() <= tols.duality_gap);
    Ok(DualityReport {
        primal: primal.value,
        dual: dual.value,
        gap,
        asserted,
        gap_tolerance: tols.duality_gap,
        weak_duality,
        passed: weak_duality && (!asserted || within),
        primal_kkt_residual: primal
            .kkt_residual
            .is_finite()
            .then_some(primal.kkt_residual),
        x: primal.x,
        multipliers: dual.multipliers,
        slater,
    })
}
