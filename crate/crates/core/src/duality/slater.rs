//! Modified Slater condition: a feasible `x̄` and `λ > 0` with
//! `-λg(x̄) - e` in the interior of `Y⁺`.

use serde::{Deserialize, Serialize};

use super::BoxProgram;
use crate::error::{check_dim, Error, Result};
use crate::numkernel::linalg::rank;
use crate::numkernel::{solve_lp, LpProblem, Status};
use crate::tolerance::Tolerances;
use crate::vector::dot;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlaterReport {
    /// Strict feasibility and the equality-image check both hold.
    pub holds: bool,
    /// `max_{x̄ feasible for h and the box} min_k ⟨a_k, -g(x̄)⟩ > 0`.
    pub strict: bool,
    /// The optimal value of that max-min LP (absent when h has no zero in the box).
    pub margin: Option<f64>,
    pub witness: Option<Vec<f64>>,
    /// `2 max_k ⟨a_k, e⟩ / ⟨a_k, -g(x̄)⟩`; absent without inequality constraints.
    pub lambda: Option<f64>,
    /// `h(Ω)` contains a neighborhood of 0: `H` has full row rank and a zero
    /// of `h` lies strictly inside the box. Qualitative; no radius is claimed.
    pub neighborhood: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnosis: Option<String>,
}

fn box_lp(prog: &BoxProgram, extra: usize) -> LpProblem {
    let n = prog.dim();
    let mut cost = vec![0.0; n + extra];
    if extra > 0 {
        cost[n] = -1.0;
    }
    let mut p = LpProblem::new(cost);
    for i in 0..n {
        p.bound(i, Some(prog.lower()[i]), Some(prog.upper()[i]));
    }
    if let Some(h) = prog.equality_map() {
        for (row, o) in h.mat.iter().zip(&h.offset) {
            let mut r = row.clone();
            r.resize(n + extra, 0.0);
            p.equal(r, -o);
        }
    }
    p
}

pub fn check_modified_slater(prog: &BoxProgram, e: &[f64]) -> Result<SlaterReport> {
    let n = prog.dim();
    let tols = Tolerances::default();
    check_dim(prog.num_inequalities(), e.len())?;
    if let Some(cone) = prog.constraint_cone() {
        if !cone.interior_contains(e)? {
            return Err(Error::Precondition(
                "e must lie in the interior of the constraint cone".into(),
            ));
        }
    }

    // max s s.t. ⟨a_k, -(Gx + g0)⟩ ≥ s, h(x) = 0, x in the box
    let (strict, margin, witness, lambda, diagnosis) =
        match (prog.constraint_map(), prog.constraint_cone()) {
            (Some(g), Some(cone)) => {
                let mut p = box_lp(prog, 1);
                for a in cone.halfspaces() {
                    let mut r: Vec<f64> = g.adjoint(a, n).iter().map(|v| -v).collect();
                    r.push(-1.0);
                    p.geq(r, dot(a, &g.offset));
                }
                let res = solve_lp(&p)?;
                match res.status {
                    Status::Optimal => {
                        let x = res.point[..n].to_vec();
                        let s = res.point[n];
                        let strict = s > tols.lp;
                        let lambda = strict.then(|| {
                            let gx = g.eval(&x);
                            2.0 * cone
                                .halfspaces()
                                .iter()
                                .map(|a| dot(a, e) / -dot(a, &gx))
                                .fold(0.0f64, f64::max)
                        });
                        let diag = (!strict).then(|| {
                            "no point makes every constraint strictly negative".to_string()
                        });
                        (strict, Some(s), Some(x), lambda, diag)
                    }
                    Status::Infeasible => (
                        false,
                        None,
                        None,
                        None,
                        Some("h(x) = 0 has no solution in the box".into()),
                    ),
                    other => {
                        return Err(Error::Solver(format!(
                            "Slater LP ended with status {other:?}"
                        )))
                    }
                }
            }
            _ => {
                let res = solve_lp(&box_lp(prog, 0))?;
                match res.status {
                    Status::Optimal => (true, None, Some(res.point), None, None),
                    Status::Infeasible => (
                        false,
                        None,
                        None,
                        None,
                        Some("h(x) = 0 has no solution in the box".into()),
                    ),
                    other => {
                        return Err(Error::Solver(format!(
                            "Slater LP ended with status {other:?}"
                        )))
                    }
                }
            }
        };

    let neighborhood = match prog.equality_map() {
        None => true,
        Some(h) => {
            let full_rank = rank(&h.mat, n, 1e-10) == h.out_dim();
            // max t s.t. x_a + t ≤ x ≤ x_b - t, h(x) = 0
            let mut p = box_lp(prog, 1);
            for i in 0..n {
                let mut lo = vec![0.0; n + 1];
                lo[i] = 1.0;
                lo[n] = -1.0;
                p.geq(lo, prog.lower()[i]);
                let mut hi = vec![0.0; n + 1];
                hi[i] = -1.0;
                hi[n] = -1.0;
                p.geq(hi, -prog.upper()[i]);
            }
            let res = solve_lp(&p)?;
            full_rank && res.is_optimal() && res.point[n] > tols.lp
        }
    };
    let diagnosis = diagnosis
        .or_else(|| (!neighborhood).then(|| "h(Ω) does not contain a neighborhood of 0".into()));
    Ok(SlaterReport {
        holds: strict && neighborhood,
        strict,
        margin,
        witness,
        lambda,
        neighborhood,
        diagnosis,
    })
}
