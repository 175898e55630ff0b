//! Gerstewitz scalarization `φ_{e,C}(y) = inf{t ∈ ℝ : te - y ∈ C}`.

use serde::Serialize;

use crate::cones::{PolyhedralCone, ENUMERATION_MAX_DIM};
use crate::error::{check_dim, check_finite, Error, Result};
use crate::numkernel::linalg::{rank, solve};
use crate::numkernel::{solve_lp, LpProblem, Status};
use crate::tolerance::Tolerances;
use crate::vector::{axpy, dot, norm2, scale, ExtendedReal, Vector};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GerstewitzFn {
    cone: PolyhedralCone,
    e: Vector,
    /// `⟨a_k, e⟩`; all positive when `e` is interior.
    denominators: Vec<f64>,
    interior: bool,
}

impl GerstewitzFn {
    /// `e` must be a nonzero element of the cone, so `C + [0,∞)e ⊂ C` and,
    /// the cone being pointed, `ℝe ⊄ C`.
    pub fn new(cone: PolyhedralCone, e: Vector) -> Result<Self> {
        check_dim(cone.dim(), e.dim())?;
        let tol = Tolerances::default().membership;
        if norm2(&e) == 0.0 || !cone.contains(&e, tol)? {
            return Err(Error::InvalidBody(
                "direction e must be a nonzero element of the cone".into(),
            ));
        }
        let interior = cone.interior_contains(&e)?;
        let denominators = cone.halfspace_values(&e);
        Ok(Self {
            cone,
            e,
            denominators,
            interior,
        })
    }

    pub fn cone(&self) -> &PolyhedralCone {
        &self.cone
    }

    pub fn e(&self) -> &Vector {
        &self.e
    }

    /// `true` when `e` is an interior point, so `φ` is finite and continuous.
    pub fn is_interior(&self) -> bool {
        self.interior
    }

    fn check(&self, y: &[f64]) -> Result<()> {
        check_dim(self.cone.dim(), y.len())?;
        check_finite(y)
    }

    /// `φ(y)`. Interior `e` uses `max_k ⟨a_k, y⟩ / ⟨a_k, e⟩` (for orthants
    /// `max_i y_i / e_i`); boundary `e` solves the defining LP.
    pub fn value(&self, y: &[f64]) -> Result<ExtendedReal> {
        self.check(y)?;
        if !self.interior {
            return self.value_via_lp(y);
        }
        let v = self
            .cone
            .halfspaces()
            .iter()
            .zip(&self.denominators)
            .map(|(a, d)| dot(a, y) / d)
            .fold(f64::NEG_INFINITY, f64::max);
        Ok(ExtendedReal::Finite(v))
    }

    /// `φ(y)` as the LP `min t s.t. ⟨a_k, te - y⟩ ≥ 0`; `+∞` when infeasible.
    pub fn value_via_lp(&self, y: &[f64]) -> Result<ExtendedReal> {
        self.check(y)?;
        let mut p = LpProblem::new(vec![1.0]);
        for (a, d) in self.cone.halfspaces().iter().zip(&self.denominators) {
            p.geq(vec![*d], dot(a, y));
        }
        let r = solve_lp(&p)?;
        match r.status {
            Status::Optimal => Ok(ExtendedReal::Finite(r.value)),
            Status::Infeasible => Ok(ExtendedReal::PosInfinity),
            Status::Unbounded => Ok(ExtendedReal::NegInfinity),
            Status::IterationCap => Err(Error::Solver(
                "scalarization LP hit the iteration cap".into(),
            )),
        }
    }

    /// `φ(y) ≤ r`, decided by `re - y ∈ C`.
    pub fn sublevel(&self, y: &[f64], r: f64, tol: f64) -> Result<bool> {
        self.check(y)?;
        let z = axpy(&scale(&self.e, r), -1.0, y);
        self.cone.contains(&z, tol)
    }

    fn finite_value(&self, y: &[f64]) -> Result<f64> {
        self.value(y)?.finite().ok_or(Error::OutsideDomain)
    }

    /// LP over `μ ≥ 0` describing `y* = Σ μ_k a_k` with `⟨y*, e⟩ = 1` and
    /// `⟨y*, y⟩ = φ(y)`; the objective is `⟨y*, d⟩` to be maximized.
    fn multiplier_lp(&self, y: &[f64], phi: f64, d: Option<&[f64]>) -> LpProblem {
        let hs = self.cone.halfspaces();
        let cost = match d {
            Some(d) => hs.iter().map(|a| -dot(a, d)).collect(),
            None => vec![0.0; hs.len()],
        };
        let mut p = LpProblem::new(cost);
        p.equal(self.denominators.clone(), 1.0);
        p.equal(hs.iter().map(|a| dot(a, y)).collect(), phi);
        p.nonnegative();
        p
    }

    fn combine(&self, mu: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cone.dim()];
        for (a, m) in self.cone.halfspaces().iter().zip(mu) {
            for (o, c) in out.iter_mut().zip(a.iter()) {
                *o += m * c;
            }
        }
        out
    }

    /// `∂φ(y) = {y* ∈ C* : ⟨y*, e⟩ = 1, ⟨y*, y⟩ = φ(y)}`. Exact vertices in
    /// dimension ≤ 3 with interior `e`, otherwise one element plus a
    /// membership test.
    pub fn subdifferential(&self, y: &[f64]) -> Result<Subdifferential> {
        let phi = self.finite_value(y)?;
        let r = solve_lp(&self.multiplier_lp(y, phi, None))?;
        if !r.is_optimal() {
            return Err(Error::Solver(format!(
                "subdifferential LP ended with status {:?}",
                r.status
            )));
        }
        let element = Vector::new(self.combine(&r.point))?;
        let vertices = if self.interior && self.cone.dim() <= ENUMERATION_MAX_DIM {
            Some(self.enumerate_vertices(y, phi)?)
        } else {
            None
        };
        Ok(Subdifferential {
            y: Vector::from_slice(y)?,
            value: phi,
            element,
            vertices,
            cone: self.cone.clone(),
            e: self.e.clone(),
        })
    }

    fn enumerate_vertices(&self, y: &[f64], phi: f64) -> Result<Vec<Vector>> {
        let n = self.cone.dim();
        let gens: Vec<Vec<f64>> = self
            .cone
            .require_generators()?
            .iter()
            .map(|g| g.to_vec())
            .collect();
        let mut eq_rows = vec![self.e.to_vec()];
        let mut eq_rhs = vec![1.0];
        if rank(&[self.e.to_vec(), y.to_vec()], n, 1e-10) == 2 {
            eq_rows.push(y.to_vec());
            eq_rhs.push(phi);
        }
        let free = n - eq_rows.len();
        let mut out: Vec<Vector> = Vec::new();
        for subset in combinations(gens.len(), free) {
            let mut rows = eq_rows.clone();
            let mut rhs = eq_rhs.clone();
            for &j in &subset {
                rows.push(gens[j].clone());
                rhs.push(0.0);
            }
            let Some(cand) = solve(&rows, &rhs) else {
                continue;
            };
            let scale_ref = 1.0 + norm2(&cand);
            let feasible = gens
                .iter()
                .all(|g| dot(g, &cand) >= -1e-10 * norm2(g) * scale_ref)
                && (dot(&self.e, &cand) - 1.0).abs() <= 1e-9 * scale_ref
                && (dot(y, &cand) - phi).abs() <= 1e-9 * scale_ref * (1.0 + norm2(y));
            if !feasible {
                continue;
            }
            let cand: Vec<f64> = cand
                .into_iter()
                .map(|c| if c.abs() < 1e-15 { 0.0 } else { c })
                .collect();
            if !out
                .iter()
                .any(|v| v.iter().zip(&cand).all(|(a, b)| (a - b).abs() < 1e-9))
            {
                out.push(Vector::new(cand)?);
            }
        }
        if out.is_empty() {
            return Err(Error::Solver(
                "subdifferential vertex enumeration found no vertex".into(),
            ));
        }
        Ok(out)
    }

    /// `φ'(y; d) = max{⟨y*, d⟩ : y* ∈ ∂φ(y)}`.
    pub fn directional_derivative(&self, y: &[f64], d: &[f64]) -> Result<ExtendedReal> {
        self.check(d)?;
        let phi = self.finite_value(y)?;
        let r = solve_lp(&self.multiplier_lp(y, phi, Some(d)))?;
        match r.status {
            Status::Optimal => Ok(ExtendedReal::Finite(-r.value)),
            Status::Unbounded => Ok(ExtendedReal::PosInfinity),
            other => Err(Error::Solver(format!(
                "directional derivative LP ended with status {other:?}"
            ))),
        }
    }

    /// One-sided difference quotient `(φ(y + sd) - φ(y)) / s`.
    pub fn difference_quotient(&self, y: &[f64], d: &[f64], s: f64) -> Result<f64> {
        let yp = axpy(y, s, d);
        Ok((self.finite_value(&yp)? - self.finite_value(y)?) / s)
    }
}

/// Subdifferential of `φ` at `y`: one element, the vertex list when it was
/// enumerated, and a membership test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Subdifferential {
    pub y: Vector,
    pub value: f64,
    pub element: Vector,
    pub vertices: Option<Vec<Vector>>,
    #[serde(skip)]
    cone: PolyhedralCone,
    #[serde(skip)]
    e: Vector,
}

impl Subdifferential {
    pub fn is_exact(&self) -> bool {
        self.vertices.is_some()
    }

    /// `y* ∈ C*`, `⟨y*, e⟩ = 1` and `⟨y*, y⟩ = φ(y)` up to `tol`.
    pub fn contains(&self, ystar: &[f64], tol: f64) -> Result<bool> {
        check_dim(self.cone.dim(), ystar.len())?;
        if (dot(ystar, &self.e) - 1.0).abs() > tol || (dot(ystar, &self.y) - self.value).abs() > tol
        {
            return Ok(false);
        }
        in_dual_cone(&self.cone, ystar, tol)
    }
}

/// `f ∈ C*`: checked on generators when known, else by expressing `f` as a
/// nonnegative combination of halfspace normals.
pub fn in_dual_cone(cone: &PolyhedralCone, f: &[f64], tol: f64) -> Result<bool> {
    check_dim(cone.dim(), f.len())?;
    if let Some(gens) = cone.generators() {
        return Ok(gens.iter().all(|g| dot(g, f) >= -tol * norm2(g)));
    }
    let hs = cone.halfspaces();
    let mut p = LpProblem::new(vec![0.0; hs.len()]);
    for i in 0..cone.dim() {
        p.equal(hs.iter().map(|a| a[i]).collect(), f[i]);
    }
    p.nonnegative();
    Ok(solve_lp(&p)?.is_optimal())
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}
