//! Box-constrained convex programs
//!
//! ```text
//!     minimize    f(x) = ½ x'Qx + q'x + c
//!     subject to  g(x) = Gx + g0 ∈ -Y⁺,   h(x) = Hx + h0 = 0,   x_a ≤ x ≤ x_b
//! ```
//!
//! with their Lagrangian duals, a modified Slater check, gap reports and
//! Fermat-rule stationarity certificates. The Lagrangian is
//!
//! ```text
//!     f(x) + ⟨y*, g(x)⟩ + ⟨x1*, x_a - x⟩ + ⟨x2*, x - x_b⟩ + ⟨z*, h(x)⟩
//! ```
//!
//! with `y* ∈ (Y⁺)*`, `x1*, x2* ≥ 0` and `z*` free.

mod certificate;
mod demos;
mod slater;
mod solve;

pub use certificate::{
    stationarity_certificate, CertificateOutcome, Refusal, StationarityCertificate,
};
pub use demos::{torsion_demo, torsion_oracle_value, vi_demo, TorsionReport, ViReport};
pub use slater::{check_modified_slater, SlaterReport};
pub use solve::{
    duality_gap_report, solve_dual, solve_primal, DualSolution, DualityReport, PrimalSolution,
};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::cones::PolyhedralCone;
use crate::error::{check_dim, check_finite, Error, Result};
use crate::numkernel::linalg::{mat_t_vec, mat_vec, symmetric_eigen};
use crate::numkernel::{LinearRow, QpProblem};
use crate::scalarization::in_dual_cone;
use crate::vector::{dot, norm_inf, ExtendedReal};

/// Eigenvalue floor accepted as positive semidefinite.
pub const PSD_FLOOR: f64 = -1e-10;

/// `½ x'Qx + q'x + c` with `Q` symmetric positive semidefinite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticForm {
    pub q_mat: Vec<Vec<f64>>,
    pub q: Vec<f64>,
    pub c: f64,
}

impl QuadraticForm {
    pub fn new(q_mat: Vec<Vec<f64>>, q: Vec<f64>, c: f64) -> Result<Self> {
        let n = q.len();
        check_finite(&q)?;
        check_finite(&[c])?;
        check_dim(n, q_mat.len())?;
        for row in &q_mat {
            check_dim(n, row.len())?;
            check_finite(row)?;
        }
        let scale = q_mat.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
        for i in 0..n {
            for j in 0..i {
                if (q_mat[i][j] - q_mat[j][i]).abs() > 1e-12 * scale {
                    return Err(Error::InvalidProgram(
                        "quadratic term is not symmetric".into(),
                    ));
                }
            }
        }
        if n > 0 {
            let eig = symmetric_eigen(&DMatrix::from_fn(n, n, |i, j| q_mat[i][j]));
            let min = eig.eigenvalues.iter().fold(f64::INFINITY, |m, &v| m.min(v));
            if min < PSD_FLOOR * scale {
                return Err(Error::InvalidProgram(format!(
                    "quadratic term is not positive semidefinite (eigenvalue {min})"
                )));
            }
        }
        Ok(Self { q_mat, q, c })
    }

    /// `q'x + c`.
    pub fn affine(q: Vec<f64>, c: f64) -> Result<Self> {
        let n = q.len();
        Self::new(vec![vec![0.0; n]; n], q, c)
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    pub fn is_affine(&self) -> bool {
        self.q_mat.iter().flatten().all(|&v| v == 0.0)
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        0.5 * dot(&mat_vec(&self.q_mat, x), x) + dot(&self.q, x) + self.c
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        mat_vec(&self.q_mat, x)
            .iter()
            .zip(&self.q)
            .map(|(a, b)| a + b)
            .collect()
    }
}

/// `Mx + m0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub mat: Vec<Vec<f64>>,
    pub offset: Vec<f64>,
}

impl AffineMap {
    pub fn new(mat: Vec<Vec<f64>>, offset: Vec<f64>, n: usize) -> Result<Self> {
        check_dim(mat.len(), offset.len())?;
        check_finite(&offset)?;
        for row in &mat {
            check_dim(n, row.len())?;
            check_finite(row)?;
        }
        Ok(Self { mat, offset })
    }

    pub fn out_dim(&self) -> usize {
        self.offset.len()
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        mat_vec(&self.mat, x)
            .iter()
            .zip(&self.offset)
            .map(|(a, b)| a + b)
            .collect()
    }

    /// `M'y`.
    pub fn adjoint(&self, y: &[f64], n: usize) -> Vec<f64> {
        mat_t_vec(&self.mat, y, n)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxProgram {
    f: QuadraticForm,
    g: Option<(AffineMap, PolyhedralCone)>,
    h: Option<AffineMap>,
    xa: Vec<f64>,
    xb: Vec<f64>,
}

impl BoxProgram {
    /// Requires `x_a < x_b` componentwise.
    pub fn new(f: QuadraticForm, xa: Vec<f64>, xb: Vec<f64>) -> Result<Self> {
        let n = f.dim();
        if n == 0 {
            return Err(Error::InvalidProgram("program has no variables".into()));
        }
        check_dim(n, xa.len())?;
        check_dim(n, xb.len())?;
        check_finite(&xa)?;
        check_finite(&xb)?;
        if xa.iter().zip(&xb).any(|(a, b)| a >= b) {
            return Err(Error::InvalidProgram(
                "box needs x_a < x_b in every coordinate".into(),
            ));
        }
        Ok(Self {
            f,
            g: None,
            h: None,
            xa,
            xb,
        })
    }

    /// Adds `Gx + g0 ∈ -Y⁺`.
    pub fn with_inequalities(mut self, g: AffineMap, cone: PolyhedralCone) -> Result<Self> {
        check_dim(cone.dim(), g.out_dim())?;
        for row in &g.mat {
            check_dim(self.dim(), row.len())?;
        }
        self.g = Some((g, cone));
        Ok(self)
    }

    /// Adds `Hx + h0 = 0`.
    pub fn with_equalities(mut self, h: AffineMap) -> Result<Self> {
        for row in &h.mat {
            check_dim(self.dim(), row.len())?;
        }
        if h.out_dim() > 0 {
            self.h = Some(h);
        }
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    pub fn objective(&self) -> &QuadraticForm {
        &self.f
    }

    pub fn constraint_map(&self) -> Option<&AffineMap> {
        self.g.as_ref().map(|(g, _)| g)
    }

    pub fn constraint_cone(&self) -> Option<&PolyhedralCone> {
        self.g.as_ref().map(|(_, c)| c)
    }

    pub fn equality_map(&self) -> Option<&AffineMap> {
        self.h.as_ref()
    }

    pub fn lower(&self) -> &[f64] {
        &self.xa
    }

    pub fn upper(&self) -> &[f64] {
        &self.xb
    }

    /// `m`, the dimension of the constraint space.
    pub fn num_inequalities(&self) -> usize {
        self.g.as_ref().map_or(0, |(g, _)| g.out_dim())
    }

    pub fn num_equalities(&self) -> usize {
        self.h.as_ref().map_or(0, |h| h.out_dim())
    }

    pub fn g(&self, x: &[f64]) -> Vec<f64> {
        self.g.as_ref().map_or(Vec::new(), |(g, _)| g.eval(x))
    }

    pub fn h(&self, x: &[f64]) -> Vec<f64> {
        self.h.as_ref().map_or(Vec::new(), |h| h.eval(x))
    }

    /// Largest violation of the constraints at `x`.
    pub fn violation(&self, x: &[f64]) -> f64 {
        let mut v = 0.0f64;
        for (i, &xi) in x.iter().enumerate() {
            v = v.max(self.xa[i] - xi).max(xi - self.xb[i]);
        }
        if let Some((g, cone)) = &self.g {
            let gx = g.eval(x);
            for a in cone.halfspaces() {
                v = v.max(dot(a, &gx));
            }
        }
        v.max(norm_inf(&self.h(x)))
    }

    /// Inequality rows `a'x <= b`: one per halfspace `a_k` of `Y⁺`
    /// (`a = G'a_k`, `b = -⟨a_k, g0⟩`), then lower and upper box rows.
    pub(crate) fn inequality_rows(&self) -> Vec<LinearRow> {
        let n = self.dim();
        let mut rows = Vec::new();
        if let Some((g, cone)) = &self.g {
            for a in cone.halfspaces() {
                rows.push(LinearRow {
                    coeffs: g.adjoint(a, n),
                    rhs: -dot(a, &g.offset),
                });
            }
        }
        for i in 0..n {
            let mut r = vec![0.0; n];
            r[i] = -1.0;
            rows.push(LinearRow {
                coeffs: r,
                rhs: -self.xa[i],
            });
        }
        for i in 0..n {
            let mut r = vec![0.0; n];
            r[i] = 1.0;
            rows.push(LinearRow {
                coeffs: r,
                rhs: self.xb[i],
            });
        }
        rows
    }

    pub(crate) fn equality_rows(&self) -> Vec<LinearRow> {
        self.h.as_ref().map_or(Vec::new(), |h| {
            h.mat
                .iter()
                .zip(&h.offset)
                .map(|(r, o)| LinearRow {
                    coeffs: r.clone(),
                    rhs: -o,
                })
                .collect()
        })
    }

    pub(crate) fn cone_rows(&self) -> usize {
        self.g.as_ref().map_or(0, |(_, c)| c.halfspaces().len())
    }

    /// The program as a QP in row form.
    pub fn to_qp(&self) -> QpProblem {
        let mut p = QpProblem::new(self.f.q_mat.clone(), self.f.q.clone());
        p.ineq = self.inequality_rows();
        p.eq = self.equality_rows();
        p
    }

    /// Multipliers from row multipliers (ordered as [`Self::inequality_rows`]).
    pub(crate) fn multipliers_from_rows(&self, w: &[f64], mu: &[f64]) -> Multipliers {
        let n = self.dim();
        let k = self.cone_rows();
        let y = match &self.g {
            Some((g, cone)) => {
                let mut y = vec![0.0; g.out_dim()];
                for (a, &wk) in cone.halfspaces().iter().zip(&w[..k]) {
                    for (yi, ai) in y.iter_mut().zip(a.iter()) {
                        *yi += wk * ai;
                    }
                }
                y
            }
            None => Vec::new(),
        };
        Multipliers {
            y,
            x1: w[k..k + n].to_vec(),
            x2: w[k + n..k + 2 * n].to_vec(),
            z: mu.to_vec(),
        }
    }

    fn check_multipliers(&self, m: &Multipliers) -> Result<()> {
        check_dim(self.num_inequalities(), m.y.len())?;
        check_dim(self.dim(), m.x1.len())?;
        check_dim(self.dim(), m.x2.len())?;
        check_dim(self.num_equalities(), m.z.len())?;
        for v in [&m.y, &m.x1, &m.x2, &m.z] {
            check_finite(v)?;
        }
        Ok(())
    }

    /// `r = q + G'y - x1 + x2 + H'z` and `k = c + ⟨y, g0⟩ + ⟨x1, x_a⟩ - ⟨x2, x_b⟩ + ⟨z, h0⟩`,
    /// so that the Lagrangian is `½ x'Qx + r'x + k`.
    fn lagrangian_affine_part(&self, m: &Multipliers) -> (Vec<f64>, f64, f64) {
        let n = self.dim();
        let mut r = self.f.q.clone();
        let mut k = self.f.c + dot(&m.x1, &self.xa) - dot(&m.x2, &self.xb);
        let mut scale = 1.0 + norm_inf(&self.f.q) + norm_inf(&m.x1) + norm_inf(&m.x2);
        if let Some((g, _)) = &self.g {
            let gt = g.adjoint(&m.y, n);
            scale += norm_inf(&gt);
            r = r.iter().zip(&gt).map(|(a, b)| a + b).collect();
            k += dot(&m.y, &g.offset);
        }
        if let Some(h) = &self.h {
            let ht = h.adjoint(&m.z, n);
            scale += norm_inf(&ht);
            r = r.iter().zip(&ht).map(|(a, b)| a + b).collect();
            k += dot(&m.z, &h.offset);
        }
        for i in 0..n {
            r[i] += m.x2[i] - m.x1[i];
        }
        (r, k, scale)
    }
}

/// Lagrange multipliers `(y*, x1*, x2*, z*)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Multipliers {
    pub y: Vec<f64>,
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub z: Vec<f64>,
}

impl Multipliers {
    pub fn zeros(prog: &BoxProgram) -> Self {
        Self {
            y: vec![0.0; prog.num_inequalities()],
            x1: vec![0.0; prog.dim()],
            x2: vec![0.0; prog.dim()],
            z: vec![0.0; prog.num_equalities()],
        }
    }

    /// `y* ∈ (Y⁺)*` to `tol` and `x1*, x2* ≥ -1e-12`.
    pub fn is_valid(&self, prog: &BoxProgram, tol: f64) -> Result<bool> {
        prog.check_multipliers(self)?;
        let signs = self.x1.iter().chain(&self.x2).all(|&v| v >= -1e-12);
        let dual = match prog.constraint_cone() {
            Some(c) => in_dual_cone(c, &self.y, tol)?,
            None => true,
        };
        Ok(signs && dual)
    }
}

/// Literal evaluation of the Lagrangian.
pub fn lagrangian_value(prog: &BoxProgram, x: &[f64], m: &Multipliers) -> Result<f64> {
    check_dim(prog.dim(), x.len())?;
    check_finite(x)?;
    prog.check_multipliers(m)?;
    let mut v = prog.f.value(x);
    v += dot(&m.y, &prog.g(x));
    v +=
        m.x1.iter()
            .zip(&prog.xa)
            .zip(x)
            .map(|((w, a), xi)| w * (a - xi))
            .sum::<f64>();
    v +=
        m.x2.iter()
            .zip(&prog.xb)
            .zip(x)
            .map(|((w, b), xi)| w * (xi - b))
            .sum::<f64>();
    v += dot(&m.z, &prog.h(x));
    Ok(v)
}

/// `inf_x` of the Lagrangian over `ℝⁿ`: `k - ½ r'Q⁺r` when the linear part
/// `r` lies in the range of `Q`, `-∞` otherwise. Components of `r` in the
/// null space of `Q` below `1e-9` relative to the data are treated as zero.
pub fn dual_value(prog: &BoxProgram, m: &Multipliers) -> Result<ExtendedReal> {
    prog.check_multipliers(m)?;
    let n = prog.dim();
    let (r, k, scale) = prog.lagrangian_affine_part(m);
    let q = DMatrix::from_fn(n, n, |i, j| prog.f.q_mat[i][j]);
    let eig = symmetric_eigen(&q);
    let qscale = eig.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let mut null_sq = 0.0;
    let mut quad = 0.0;
    for i in 0..n {
        let v = eig.eigenvectors.column(i);
        let c: f64 = v.iter().zip(&r).map(|(a, b)| a * b).sum();
        if eig.eigenvalues[i] <= 1e-10 * qscale.max(1e-300) || qscale == 0.0 {
            null_sq += c * c;
        } else {
            quad += c * c / eig.eigenvalues[i];
        }
    }
    if null_sq.sqrt() > 1e-9 * scale {
        return Ok(ExtendedReal::NegInfinity);
    }
    Ok(ExtendedReal::Finite(k - 0.5 * quad))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(super) fn scalar_program(q: f64, lin: f64, xa: f64, xb: f64) -> BoxProgram {
        BoxProgram::new(
            QuadraticForm::new(vec![vec![q]], vec![lin], 0.0).unwrap(),
            vec![xa],
            vec![xb],
        )
        .unwrap()
    }

    #[test]
    fn lagrangian_examples() {
        // f = x, g = x - 1 on [0,2], y* = 1, x = 0 → -1
        let p = scalar_program(0.0, 1.0, 0.0, 2.0)
            .with_inequalities(
                AffineMap::new(vec![vec![1.0]], vec![-1.0], 1).unwrap(),
                PolyhedralCone::coordinate(1).unwrap(),
            )
            .unwrap();
        let mut m = Multipliers::zeros(&p);
        assert_eq!(lagrangian_value(&p, &[0.7], &m).unwrap(), 0.7);
        m.y = vec![1.0];
        assert_eq!(lagrangian_value(&p, &[0.0], &m).unwrap(), -1.0);
        // complementary multipliers leave f unchanged at a feasible point
        let m2 = Multipliers {
            y: vec![0.0],
            x1: vec![3.0],
            x2: vec![0.0],
            z: vec![],
        };
        assert_eq!(lagrangian_value(&p, &[0.0], &m2).unwrap(), 0.0);
    }

    #[test]
    fn dual_value_examples() {
        let f =
            QuadraticForm::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![0.0; 2], 0.0).unwrap();
        let p = BoxProgram::new(f, vec![-1.0; 2], vec![1.0; 2]).unwrap();
        assert_eq!(
            dual_value(&p, &Multipliers::zeros(&p)).unwrap(),
            ExtendedReal::Finite(0.0)
        );
        let lp = scalar_program(0.0, 1.0, 0.0, 1.0);
        assert_eq!(
            dual_value(&lp, &Multipliers::zeros(&lp)).unwrap(),
            ExtendedReal::NegInfinity
        );
        // ½x² + (x - 1) → -3/2
        let p = scalar_program(1.0, 0.0, -5.0, 5.0)
            .with_inequalities(
                AffineMap::new(vec![vec![1.0]], vec![-1.0], 1).unwrap(),
                PolyhedralCone::coordinate(1).unwrap(),
            )
            .unwrap();
        let m = Multipliers {
            y: vec![1.0],
            x1: vec![0.0],
            x2: vec![0.0],
            z: vec![],
        };
        assert_eq!(dual_value(&p, &m).unwrap(), ExtendedReal::Finite(-1.5));
    }

    #[test]
    fn program_validation() {
        assert!(
            QuadraticForm::new(vec![vec![1.0, 2.0], vec![0.0, 1.0]], vec![0.0; 2], 0.0).is_err()
        );
        assert!(QuadraticForm::new(vec![vec![-1.0]], vec![0.0], 0.0).is_err());
        let f = QuadraticForm::affine(vec![1.0], 0.0).unwrap();
        assert!(BoxProgram::new(f.clone(), vec![1.0], vec![1.0]).is_err());
        assert!(BoxProgram::new(f, vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
    }
}
