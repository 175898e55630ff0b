//! Primal active-set method for convex quadratic programs
//!
//! ```text
//!     minimize    ½ x'Hx + l'x
//!     subject to  a_i'x <= b_i      (inequality rows)
//!                 a_j'x  = b_j      (equality rows)
//! ```
//!
//! with `H` symmetric positive semidefinite. A feasible start comes from the
//! simplex phase one; every subsequent step is an exact subspace solve, so
//! the final point satisfies the KKT conditions to rounding error. Singular
//! reduced Hessians produce ray steps that stop at the first blocking row.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::linalg::{lstsq, symmetric_eigen};
use super::lp::{solve_lp, FarkasCertificate, LinearRow, LpProblem};
use super::Status;
use crate::error::{check_dim, check_finite, Error, Result};
use crate::tolerance::SolverLimits;
use crate::vector::{dot, norm_inf};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QpProblem {
    /// Symmetric positive semidefinite, given by rows.
    pub hessian: Vec<Vec<f64>>,
    pub linear: Vec<f64>,
    /// Rows `coeffs · x <= rhs`.
    pub ineq: Vec<LinearRow>,
    /// Rows `coeffs · x == rhs`.
    pub eq: Vec<LinearRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QpSolution {
    pub status: Status,
    pub x: Vec<f64>,
    pub value: f64,
    /// Nonnegative, with `Hx + l + Σ w_i a_i + Σ μ_j a_j = 0`.
    pub ineq_multipliers: Vec<f64>,
    pub eq_multipliers: Vec<f64>,
    /// Max of stationarity, feasibility and complementarity violations.
    pub kkt_residual: f64,
    pub iterations: usize,
    /// Infeasibility proof for [`QpProblem::feasibility_lp`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub farkas: Option<FarkasCertificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ray: Option<Vec<f64>>,
}

impl QpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}

impl QpProblem {
    pub fn new(hessian: Vec<Vec<f64>>, linear: Vec<f64>) -> Self {
        Self {
            hessian,
            linear,
            ineq: Vec::new(),
            eq: Vec::new(),
        }
    }

    pub fn leq(&mut self, coeffs: Vec<f64>, rhs: f64) -> &mut Self {
        self.ineq.push(LinearRow { coeffs, rhs });
        self
    }

    pub fn equal(&mut self, coeffs: Vec<f64>, rhs: f64) -> &mut Self {
        self.eq.push(LinearRow { coeffs, rhs });
        self
    }

    pub fn num_vars(&self) -> usize {
        self.linear.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        check_finite(&self.linear)?;
        check_dim(n, self.hessian.len())?;
        for row in &self.hessian {
            check_dim(n, row.len())?;
            check_finite(row)?;
        }
        for row in self.ineq.iter().chain(&self.eq) {
            check_dim(n, row.coeffs.len())?;
            check_finite(&row.coeffs)?;
            check_finite(&[row.rhs])?;
        }
        Ok(())
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        let hx: Vec<f64> = self.hessian.iter().map(|r| dot(r, x)).collect();
        0.5 * dot(&hx, x) + dot(&self.linear, x)
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        self.hessian
            .iter()
            .zip(&self.linear)
            .map(|(r, l)| dot(r, x) + l)
            .collect()
    }

    /// The constraint system as an LP over free variables with zero cost;
    /// inequality rows are stored as `-a_i x >= -b_i`.
    pub fn feasibility_lp(&self) -> LpProblem {
        let mut lp = LpProblem::new(vec![0.0; self.num_vars()]);
        for r in &self.ineq {
            lp.leq(r.coeffs.clone(), r.rhs);
        }
        for r in &self.eq {
            lp.equal(r.coeffs.clone(), r.rhs);
        }
        lp
    }

    /// Stationarity, feasibility and complementarity violations at `(x, w, μ)`.
    pub fn kkt_residual(&self, x: &[f64], w: &[f64], mu: &[f64]) -> f64 {
        let mut g = self.gradient(x);
        for (r, &wi) in self.ineq.iter().zip(w) {
            for (gj, a) in g.iter_mut().zip(&r.coeffs) {
                *gj += wi * a;
            }
        }
        for (r, &mi) in self.eq.iter().zip(mu) {
            for (gj, a) in g.iter_mut().zip(&r.coeffs) {
                *gj += mi * a;
            }
        }
        let mut res = norm_inf(&g);
        for (r, &wi) in self.ineq.iter().zip(w) {
            let slack = r.rhs - dot(&r.coeffs, x);
            res = res.max(-slack).max((wi * slack).abs()).max(-wi);
        }
        for r in &self.eq {
            res = res.max((dot(&r.coeffs, x) - r.rhs).abs());
        }
        res
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QpOptions {
    pub max_iterations: usize,
}

impl Default for QpOptions {
    fn default() -> Self {
        Self {
            max_iterations: SolverLimits::default().simplex_iterations,
        }
    }
}

pub fn solve_qp(p: &QpProblem) -> Result<QpSolution> {
    solve_qp_with(p, &QpOptions::default())
}

#[derive(Clone, Copy, PartialEq, Debug)]
enum Active {
    Eq(usize),
    Ineq(usize),
}

struct Workspace<'a> {
    p: &'a QpProblem,
    n: usize,
    hess: DMatrix<f64>,
    hess_scale: f64,
}

impl Workspace<'_> {
    fn row(&self, a: Active) -> &[f64] {
        match a {
            Active::Eq(j) => &self.p.eq[j].coeffs,
            Active::Ineq(i) => &self.p.ineq[i].coeffs,
        }
    }

    /// Orthonormal basis (columns) of the null space of the working rows.
    fn null_space(&self, work: &[Active]) -> DMatrix<f64> {
        let n = self.n;
        if work.is_empty() {
            return DMatrix::identity(n, n);
        }
        let mut m = DMatrix::zeros(n, n);
        for &a in work {
            let r = self.row(a);
            let s = r.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] += r[i] * r[j] / (s * s);
                }
            }
        }
        let eig = symmetric_eigen(&m);
        let cols: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] < 1e-10).collect();
        DMatrix::from_fn(n, cols.len(), |i, k| eig.eigenvectors[(i, cols[k])])
    }

    fn independent(&self, work: &[Active], cand: Active) -> bool {
        let z = self.null_space(work);
        if z.ncols() == 0 {
            return false;
        }
        let r = DVector::from_column_slice(self.row(cand));
        let proj = z.transpose() * &r;
        proj.norm() > 1e-9 * r.norm().max(1e-300)
    }
}

/// Search direction in the null space `Z`: a Newton step on the reduced
/// problem, or a unit descent ray when the reduced Hessian is singular along
/// the gradient.
fn direction(ws: &Workspace, z: &DMatrix<f64>, grad: &[f64]) -> (Vec<f64>, bool) {
    let n = ws.n;
    if z.ncols() == 0 {
        return (vec![0.0; n], false);
    }
    let g = DVector::from_column_slice(grad);
    let gr = z.transpose() * &g;
    let hr = z.transpose() * &ws.hess * z;
    let eig = symmetric_eigen(&hr);
    let thresh = 1e-10 * ws.hess_scale.max(1.0);
    let gscale = 1.0 + norm_inf(grad);
    let mut ray = DVector::zeros(z.ncols());
    let mut newton = DVector::zeros(z.ncols());
    for k in 0..z.ncols() {
        let v = eig.eigenvectors.column(k);
        let c = v.dot(&gr);
        if eig.eigenvalues[k] <= thresh {
            ray -= v * c;
        } else {
            newton -= v * (c / eig.eigenvalues[k]);
        }
    }
    if ray.norm() > 1e-11 * gscale {
        let p = z * ray;
        let nrm = p.norm();
        return (p.iter().map(|v| v / nrm).collect(), true);
    }
    ((z * newton).as_slice().to_vec(), false)
}

pub fn solve_qp_with(p: &QpProblem, opts: &QpOptions) -> Result<QpSolution> {
    p.validate()?;
    let n = p.num_vars();
    let lp = p.feasibility_lp();
    let start = solve_lp(&lp)?;
    match start.status {
        Status::Optimal => {}
        Status::Infeasible => {
            return Ok(QpSolution {
                status: Status::Infeasible,
                x: Vec::new(),
                value: f64::INFINITY,
                ineq_multipliers: Vec::new(),
                eq_multipliers: Vec::new(),
                kkt_residual: f64::INFINITY,
                iterations: start.iterations,
                farkas: start.farkas,
                ray: None,
            })
        }
        other => {
            return Err(Error::Solver(format!(
                "QP phase one ended with status {other:?}"
            )))
        }
    }
    let hess = DMatrix::from_fn(n, n, |i, j| 0.5 * (p.hessian[i][j] + p.hessian[j][i]));
    let hess_scale = hess.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let ws = Workspace {
        p,
        n,
        hess,
        hess_scale,
    };
    let mut x = start.point;

    let mut work: Vec<Active> = Vec::new();
    for j in 0..p.eq.len() {
        if ws.independent(&work, Active::Eq(j)) {
            work.push(Active::Eq(j));
        }
    }
    for (i, r) in p.ineq.iter().enumerate() {
        let scale = 1.0 + r.rhs.abs();
        if (r.rhs - dot(&r.coeffs, &x)).abs() <= 1e-9 * scale
            && ws.independent(&work, Active::Ineq(i))
        {
            work.push(Active::Ineq(i));
        }
    }

    let mut stalls = 0usize;
    for iter in 0..opts.max_iterations {
        let grad = p.gradient(&x);
        let z = ws.null_space(&work);
        let (dir, is_ray) = direction(&ws, &z, &grad);
        let xscale = 1.0 + norm_inf(&x);
        if !is_ray && norm_inf(&dir) <= 1e-12 * xscale {
            // Subspace minimizer: check multiplier signs.
            let mut w = vec![0.0; p.ineq.len()];
            let mut mu = vec![0.0; p.eq.len()];
            if !work.is_empty() {
                let a = DMatrix::from_fn(n, work.len(), |i, k| ws.row(work[k])[i]);
                let rhs = -DVector::from_column_slice(&grad);
                let lam = lstsq(&a, &rhs)
                    .ok_or_else(|| Error::Solver("multiplier solve failed".into()))?;
                for (k, &act) in work.iter().enumerate() {
                    match act {
                        Active::Eq(j) => mu[j] = lam[k],
                        Active::Ineq(i) => w[i] = lam[k],
                    }
                }
            }
            let mtol = 1e-10 * (1.0 + norm_inf(&grad));
            let negative: Vec<(usize, f64)> = work
                .iter()
                .enumerate()
                .filter_map(|(k, &a)| match a {
                    Active::Ineq(i) if w[i] < -mtol => Some((k, w[i])),
                    _ => None,
                })
                .collect();
            if negative.is_empty() {
                for wi in &mut w {
                    *wi = wi.max(0.0);
                }
                let value = p.objective(&x);
                let kkt = p.kkt_residual(&x, &w, &mu);
                return Ok(QpSolution {
                    status: Status::Optimal,
                    x,
                    value,
                    ineq_multipliers: w,
                    eq_multipliers: mu,
                    kkt_residual: kkt,
                    iterations: iter,
                    farkas: None,
                    ray: None,
                });
            }
            // Most negative multiplier; lowest index once steps stall.
            let drop = if stalls > 2 * (p.ineq.len() + n) {
                negative.iter().min_by_key(|(k, _)| match work[*k] {
                    Active::Ineq(i) => i,
                    Active::Eq(j) => j,
                })
            } else {
                negative.iter().min_by(|a, b| a.1.total_cmp(&b.1))
            };
            let k = drop.expect("nonempty").0;
            work.remove(k);
            continue;
        }
        // Ratio test over inactive inequality rows, lowest index on ties.
        let mut alpha = if is_ray { f64::INFINITY } else { 1.0 };
        let mut block = None;
        let dnorm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        for (i, r) in p.ineq.iter().enumerate() {
            if work.contains(&Active::Ineq(i)) {
                continue;
            }
            let s = dot(&r.coeffs, &dir);
            let anorm = r.coeffs.iter().map(|v| v * v).sum::<f64>().sqrt();
            if s <= 1e-13 * anorm * dnorm {
                continue;
            }
            let t = ((r.rhs - dot(&r.coeffs, &x)) / s).max(0.0);
            if t < alpha {
                alpha = t;
                block = Some(i);
            }
        }
        if alpha.is_infinite() {
            return Ok(QpSolution {
                status: Status::Unbounded,
                x,
                value: f64::NEG_INFINITY,
                ineq_multipliers: Vec::new(),
                eq_multipliers: Vec::new(),
                kkt_residual: f64::INFINITY,
                iterations: iter,
                farkas: None,
                ray: Some(dir),
            });
        }
        stalls = if alpha == 0.0 { stalls + 1 } else { 0 };
        for (xi, di) in x.iter_mut().zip(&dir) {
            *xi += alpha * di;
        }
        if let Some(i) = block {
            work.push(Active::Ineq(i));
        }
    }
    Ok(QpSolution {
        status: Status::IterationCap,
        value: p.objective(&x),
        kkt_residual: f64::INFINITY,
        x,
        ineq_multipliers: Vec::new(),
        eq_multipliers: Vec::new(),
        iterations: opts.max_iterations,
        farkas: None,
        ray: None,
    })
}
