//! Deterministic numerical kernels shared by the other modules: a dense
//! simplex solver, an active-set QP solver, projections, projected-gradient iteration and a
//! brute-force dominance oracle.

pub mod gradient;
pub mod linalg;
pub mod lp;
pub mod oracle;
pub mod project;
pub mod qp;

use serde::{Deserialize, Serialize};

pub use gradient::{projected_gradient, GradientOptions, Projector, SmoothObjective, StepRule};
pub use lp::{
    solve_lp, solve_lp_with, FarkasCertificate, LinearRow, LpDuals, LpOptions, LpProblem,
};
pub use oracle::{brute_force_grid_min, GridSpec};
pub use project::{project_box, BoxProjector};
pub use qp::{solve_qp, solve_qp_with, QpOptions, QpProblem, QpSolution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
    IterationCap,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Residuals {
    /// Largest constraint violation.
    pub primal: f64,
    /// Dual infeasibility (simplex) or gradient-mapping norm (first-order methods).
    pub optimality: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub status: Status,
    pub point: Vec<f64>,
    pub value: f64,
    pub residuals: Residuals,
    pub iterations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duals: Option<LpDuals>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub farkas: Option<FarkasCertificate>,
    /// Direction of unbounded descent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ray: Option<Vec<f64>>,
}

impl SolveReport {
    pub(crate) fn infeasible(cert: FarkasCertificate, iterations: usize) -> Self {
        Self {
            status: Status::Infeasible,
            point: Vec::new(),
            value: f64::INFINITY,
            residuals: Residuals::default(),
            iterations,
            duals: None,
            farkas: Some(cert),
            ray: None,
        }
    }

    pub(crate) fn unbounded(ray: Vec<f64>, iterations: usize) -> Self {
        Self {
            status: Status::Unbounded,
            point: Vec::new(),
            value: f64::NEG_INFINITY,
            residuals: Residuals::default(),
            iterations,
            duals: None,
            farkas: None,
            ray: Some(ray),
        }
    }

    pub(crate) fn capped(iterations: usize) -> Self {
        Self {
            status: Status::IterationCap,
            point: Vec::new(),
            value: f64::NAN,
            residuals: Residuals {
                primal: f64::INFINITY,
                optimality: f64::INFINITY,
            },
            iterations,
            duals: None,
            farkas: None,
            ray: None,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}
