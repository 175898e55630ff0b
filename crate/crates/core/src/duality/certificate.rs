//! Fermat-rule stationarity certificates for vector objectives on a box:
//! `y* ∈ (Y⁺)*` with `⟨y*, e⟩ = 1` and `-∇⟨y*, F⟩(x̄) ∈ N(x̄, [x_a, x_b])`.

use serde::{Deserialize, Serialize};

use super::QuadraticForm;
use crate::cones::PolyhedralCone;
use crate::error::{check_dim, check_finite, Error, Result};
use crate::numkernel::{solve_lp, FarkasCertificate, LpProblem, Status};
use crate::scalarization::in_dual_cone;
use crate::vector::dot;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Activity {
    Interior,
    Lower,
    Upper,
}

fn activity(x: f64, lo: f64, hi: f64, tol: f64) -> Activity {
    if (x - lo).abs() <= tol * (1.0 + lo.abs()) {
        Activity::Lower
    } else if (x - hi).abs() <= tol * (1.0 + hi.abs()) {
        Activity::Upper
    } else {
        Activity::Interior
    }
}

/// `y*` and the normal vector `ν = -J'y*`, where `J` is the Jacobian of `F`
/// at `x̄`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationarityCertificate {
    pub point: Vec<f64>,
    pub ystar: Vec<f64>,
    pub normal: Vec<f64>,
}

impl StationarityCertificate {
    /// Re-checks the defining conditions from scratch: `y* ∈ (Y⁺)*`,
    /// `⟨y*, e⟩ = 1`, `J'y* + ν = 0` and `ν ∈ N(x̄, box)`, each to `tol`.
    pub fn verify(
        &self,
        objectives: &[QuadraticForm],
        cone: &PolyhedralCone,
        e: &[f64],
        xa: &[f64],
        xb: &[f64],
        tol: f64,
    ) -> Result<bool> {
        if !in_dual_cone(cone, &self.ystar, tol)? || (dot(&self.ystar, e) - 1.0).abs() > tol {
            return Ok(false);
        }
        let n = self.point.len();
        let mut grad = vec![0.0; n];
        for (f, &y) in objectives.iter().zip(&self.ystar) {
            for (g, d) in grad.iter_mut().zip(f.gradient(&self.point)) {
                *g += y * d;
            }
        }
        let scale = 1.0 + grad.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 0..n {
            if (grad[i] + self.normal[i]).abs() > tol * scale {
                return Ok(false);
            }
            let x = self.point[i];
            if x < xa[i] || x > xb[i] {
                return Ok(false);
            }
            let ok = match activity(x, xa[i], xb[i], 1e-9) {
                Activity::Interior => self.normal[i].abs() <= tol * scale,
                Activity::Lower => self.normal[i] <= tol * scale,
                Activity::Upper => self.normal[i] >= -tol * scale,
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Refusal {
    pub reason: String,
    /// The LP over `μ ≥ 0` (`y* = Σ μ_k a_k`) that was found infeasible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lp: Option<LpProblem>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub farkas: Option<FarkasCertificate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum CertificateOutcome {
    Certificate(StationarityCertificate),
    Refusal(Refusal),
}

/// Searches for a stationarity certificate of `F = (F_1, …, F_m)` ordered by
/// `Y⁺` at `x̄` over the box. Interior coordinates need `|(J'y*)_i| ≤ tol`,
/// active lower bounds `(J'y*)_i ≥ -tol`, active upper bounds `≤ tol`.
pub fn stationarity_certificate(
    objectives: &[QuadraticForm],
    cone: &PolyhedralCone,
    e: &[f64],
    xa: &[f64],
    xb: &[f64],
    x: &[f64],
    tol: f64,
) -> Result<CertificateOutcome> {
    let n = x.len();
    check_dim(cone.dim(), objectives.len())?;
    check_dim(cone.dim(), e.len())?;
    check_dim(n, xa.len())?;
    check_dim(n, xb.len())?;
    check_finite(x)?;
    for f in objectives {
        check_dim(n, f.dim())?;
    }
    if !cone.contains(e, 0.0)? || e.iter().all(|&v| v == 0.0) {
        return Err(Error::Precondition(
            "e must be a nonzero element of the cone".into(),
        ));
    }
    if x.iter()
        .zip(xa.iter().zip(xb))
        .any(|(v, (a, b))| *v < a - tol * (1.0 + a.abs()) || *v > b + tol * (1.0 + b.abs()))
    {
        return Ok(CertificateOutcome::Refusal(Refusal {
            reason: "point lies outside the box, where the normal cone is empty".into(),
            lp: None,
            farkas: None,
        }));
    }
    // Jacobian rows J_j = ∇F_j(x̄); (J'a_k)_i = Σ_j a_kj J_ji
    let jac: Vec<Vec<f64>> = objectives.iter().map(|f| f.gradient(x)).collect();
    let hs = cone.halfspaces();
    let cols: Vec<Vec<f64>> = hs
        .iter()
        .map(|a| {
            (0..n)
                .map(|i| a.iter().zip(&jac).map(|(ak, row)| ak * row[i]).sum())
                .collect()
        })
        .collect();
    let scale = 1.0 + jac.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let t = tol * scale;
    let mut lp = LpProblem::new(vec![0.0; hs.len()]);
    lp.nonnegative();
    lp.equal(hs.iter().map(|a| dot(a, e)).collect(), 1.0);
    for i in 0..n {
        let row: Vec<f64> = cols.iter().map(|c| c[i]).collect();
        match activity(x[i], xa[i], xb[i], 1e-9) {
            Activity::Interior => {
                lp.geq(row.clone(), -t);
                lp.leq(row, t);
            }
            Activity::Lower => {
                lp.geq(row, -t);
            }
            Activity::Upper => {
                lp.leq(row, t);
            }
        }
    }
    let r = solve_lp(&lp)?;
    match r.status {
        Status::Optimal => {
            let mut ystar = vec![0.0; cone.dim()];
            for (a, &mu) in hs.iter().zip(&r.point) {
                for (y, ak) in ystar.iter_mut().zip(a.iter()) {
                    *y += mu * ak;
                }
            }
            let mut normal = vec![0.0; n];
            for (row, &y) in jac.iter().zip(&ystar) {
                for (v, d) in normal.iter_mut().zip(row) {
                    *v -= y * d;
                }
            }
            Ok(CertificateOutcome::Certificate(StationarityCertificate {
                point: x.to_vec(),
                ystar,
                normal,
            }))
        }
        Status::Infeasible => Ok(CertificateOutcome::Refusal(Refusal {
            reason: "no multiplier in the dual cone makes the point stationary".into(),
            farkas: r.farkas,
            lp: Some(lp),
        })),
        other => Err(Error::Solver(format!(
            "certificate LP ended with status {other:?}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cert(o: CertificateOutcome) -> StationarityCertificate {
        match o {
            CertificateOutcome::Certificate(c) => c,
            CertificateOutcome::Refusal(r) => panic!("refused: {}", r.reason),
        }
    }

    #[test]
    fn scalar_left_bound() {
        let f = QuadraticForm::new(vec![vec![2.0]], vec![0.0], 0.0).unwrap();
        let c1 = PolyhedralCone::coordinate(1).unwrap();
        let c = cert(
            stationarity_certificate(
                std::slice::from_ref(&f),
                &c1,
                &[1.0],
                &[1.0],
                &[2.0],
                &[1.0],
                1e-9,
            )
            .unwrap(),
        );
        assert_eq!(
            (c.ystar.as_slice(), c.normal.as_slice()),
            (&[1.0][..], &[-2.0][..])
        );
        assert!(c.verify(&[f], &c1, &[1.0], &[1.0], &[2.0], 1e-8).unwrap());
    }

    #[test]
    fn interior_nonstationary_point_is_refused() {
        let f = QuadraticForm::new(vec![vec![2.0]], vec![0.0], 0.0).unwrap();
        let c1 = PolyhedralCone::coordinate(1).unwrap();
        match stationarity_certificate(&[f], &c1, &[1.0], &[1.0], &[2.0], &[1.5], 1e-9).unwrap() {
            CertificateOutcome::Refusal(r) => {
                assert!(r.farkas.unwrap().verify(r.lp.as_ref().unwrap(), 1e-9));
            }
            _ => panic!("expected refusal"),
        }
        let f = QuadraticForm::affine(vec![1.0], 0.0).unwrap();
        match stationarity_certificate(&[f], &c1, &[1.0], &[1.0], &[2.0], &[3.0], 1e-9).unwrap() {
            CertificateOutcome::Refusal(r) => assert!(r.farkas.is_none()),
            _ => panic!("expected refusal"),
        }
    }

    #[test]
    fn opposing_objectives_balance() {
        // F = (x, -x) into ℝ²₊, e = (1,1), interior x̄ → y* = (½, ½)
        let fs = vec![
            QuadraticForm::affine(vec![1.0], 0.0).unwrap(),
            QuadraticForm::affine(vec![-1.0], 0.0).unwrap(),
        ];
        let c2 = PolyhedralCone::coordinate(2).unwrap();
        let c = cert(
            stationarity_certificate(&fs, &c2, &[1.0, 1.0], &[0.0], &[1.0], &[0.5], 1e-9).unwrap(),
        );
        assert!((c.ystar[0] - 0.5).abs() < 1e-8 && (c.ystar[1] - 0.5).abs() < 1e-8);
        assert!(c
            .verify(&fs, &c2, &[1.0, 1.0], &[0.0], &[1.0], 1e-8)
            .unwrap());
    }
}
