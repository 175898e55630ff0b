//! Order-interval gauges `‖x‖_u = inf{λ > 0 : -λu ≤_C x ≤_C λu}`, Minkowski
//! gauges of polytopes, equivalence constants and the sup-norm isometry.

use serde::Serialize;

use crate::cones::PolyhedralCone;
use crate::error::{check_dim, check_finite, Error, Result};
use crate::numkernel::{solve_lp, LpProblem, Status};
use crate::vector::{dot, norm_inf, AmbientNorm, ExtendedReal, Vector};

/// The symmetric order interval `[-u, u]` of a cone, used as the unit ball of
/// the space generated by `u`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaugeBody {
    cone: PolyhedralCone,
    u: Vector,
    /// `⟨a_k, u⟩`, all strictly positive.
    scales: Vec<f64>,
}

impl GaugeBody {
    pub fn new(cone: PolyhedralCone, u: Vector) -> Result<Self> {
        check_dim(cone.dim(), u.dim())?;
        if !cone.interior_contains(&u)? {
            return Err(Error::InvalidBody(
                "generating element must lie in the interior of the cone".into(),
            ));
        }
        let scales = cone.halfspace_values(&u);
        Ok(Self { cone, u, scales })
    }

    pub fn cone(&self) -> &PolyhedralCone {
        &self.cone
    }

    pub fn u(&self) -> &Vector {
        &self.u
    }

    /// `true` when the closed form `max_i |x_i| / u_i` applies.
    pub fn has_closed_form(&self) -> bool {
        self.cone.is_orthant()
    }

    /// `‖x‖_u`. Orthants use the closed form, other cones the LP.
    pub fn gauge(&self, x: &[f64]) -> Result<ExtendedReal> {
        check_dim(self.cone.dim(), x.len())?;
        check_finite(x)?;
        if self.has_closed_form() {
            let v = x
                .iter()
                .zip(self.u.iter())
                .map(|(a, b)| a.abs() / b)
                .fold(0.0, f64::max);
            return Ok(ExtendedReal::Finite(v));
        }
        self.gauge_lp(x)
    }

    /// `‖x‖_u` as the LP `min λ s.t. λu - x ∈ C, λu + x ∈ C`.
    pub fn gauge_lp(&self, x: &[f64]) -> Result<ExtendedReal> {
        check_dim(self.cone.dim(), x.len())?;
        check_finite(x)?;
        if x.iter().all(|&v| v == 0.0) {
            return Ok(ExtendedReal::Finite(0.0));
        }
        let mut p = LpProblem::new(vec![1.0]);
        for (a, s) in self.cone.halfspaces().iter().zip(&self.scales) {
            let ax = dot(a, x);
            p.geq(vec![*s], ax);
            p.geq(vec![*s], -ax);
        }
        p.bound(0, Some(0.0), None);
        let r = solve_lp(&p)?;
        match r.status {
            Status::Optimal => Ok(ExtendedReal::Finite(r.value.max(0.0))),
            Status::Infeasible => Ok(ExtendedReal::PosInfinity),
            other => Err(Error::Solver(format!(
                "gauge LP ended with status {other:?}"
            ))),
        }
    }

    /// `(x_i / u_i)_i`, available for orthants. Its sup-norm equals `‖x‖_u`.
    pub fn isometry(&self, x: &[f64]) -> Result<Vector> {
        if !self.has_closed_form() {
            return Err(Error::UnsupportedRepresentation(
                "the coordinate isometry needs an orthant".into(),
            ));
        }
        linfty_isometry(&self.u, x)
    }

    /// `‖x‖_u · ‖u‖ - ‖x‖` in the given ambient norm. Nonnegative for monotone
    /// norms on orthants; reported rather than assumed elsewhere.
    pub fn dominance_gap(&self, norm: &AmbientNorm, x: &[f64]) -> Result<f64> {
        let g = self.gauge(x)?.to_f64();
        Ok(g * norm.norm(&self.u) - norm.norm(x))
    }
}

/// Gauge of `conv(vertices)`: `min Σβ_j s.t. Σβ_j v_j = x, β ≥ 0`.
/// `+∞` when `x` is outside the cone spanned by the vertices.
pub fn minkowski_gauge(vertices: &[Vector], x: &[f64]) -> Result<ExtendedReal> {
    let first = vertices.first().ok_or(Error::EmptyInput("vertex list"))?;
    let n = first.dim();
    for v in vertices {
        check_dim(n, v.dim())?;
    }
    check_dim(n, x.len())?;
    check_finite(x)?;
    if x.iter().all(|&v| v == 0.0) {
        return Ok(ExtendedReal::Finite(0.0));
    }
    let m = vertices.len();
    let mut p = LpProblem::new(vec![1.0; m]);
    for i in 0..n {
        p.equal(vertices.iter().map(|v| v[i]).collect(), x[i]);
    }
    p.nonnegative();
    let r = solve_lp(&p)?;
    match r.status {
        Status::Optimal => Ok(ExtendedReal::Finite(r.value.max(0.0))),
        Status::Infeasible => Ok(ExtendedReal::PosInfinity),
        other => Err(Error::Solver(format!(
            "gauge LP ended with status {other:?}"
        ))),
    }
}

/// Least `c ≥ 1` with `c⁻¹[-u,u] ⊂ [-v,v] ⊂ c[-u,u]`, namely
/// `max(‖v‖_u, ‖u‖_v, 1)`.
pub fn equivalence_constant(cone: &PolyhedralCone, u: &Vector, v: &Vector) -> Result<f64> {
    let bu = GaugeBody::new(cone.clone(), u.clone())?;
    let bv = GaugeBody::new(cone.clone(), v.clone())?;
    let a = bu.gauge(v)?.to_f64();
    let b = bv.gauge(u)?.to_f64();
    Ok(a.max(b).max(1.0))
}

/// `(x_i / u_i)_i` for strictly positive `u`.
pub fn linfty_isometry(u: &[f64], x: &[f64]) -> Result<Vector> {
    check_dim(u.len(), x.len())?;
    check_finite(u)?;
    check_finite(x)?;
    if u.iter().any(|&v| v <= 0.0) {
        return Err(Error::InvalidBody(
            "generating element must be strictly positive".into(),
        ));
    }
    Vector::new(x.iter().zip(u).map(|(a, b)| a / b).collect())
}

/// Sup-norm of the isometry image; equals `‖x‖_u` on orthants.
pub fn isometry_norm(u: &[f64], x: &[f64]) -> Result<f64> {
    Ok(norm_inf(&linfty_isometry(u, x)?))
}
