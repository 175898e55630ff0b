//! Exhaustive reference computations used to cross-check the solvers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cartesian grid: axis `i` runs over `steps[i]` evenly spaced points of `[lo[i], hi[i]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub steps: Vec<usize>,
}

impl GridSpec {
    pub fn points(&self) -> Vec<Vec<f64>> {
        let d = self.lo.len();
        let total: usize = self.steps.iter().product();
        let mut out = Vec::with_capacity(total);
        for flat in 0..total {
            let mut rem = flat;
            let mut p = vec![0.0; d];
            for i in (0..d).rev() {
                let k = rem % self.steps[i];
                rem /= self.steps[i];
                p[i] = if self.steps[i] == 1 {
                    self.lo[i]
                } else {
                    self.lo[i] + (self.hi[i] - self.lo[i]) * k as f64 / (self.steps[i] - 1) as f64
                };
            }
            out.push(p);
        }
        out
    }
}

/// All grid points whose value is not strictly dominated, where `w` strictly
/// dominates `v` when `v - w` satisfies every halfspace inequality (within
/// `tol`) and `max |v - w| > strict_tol`.
///
/// This deliberately repeats the dominance loop instead of calling into the
/// penalty module, so the two can be checked against each other.
pub fn brute_force_grid_min<F>(
    evaluator: F,
    grid: &GridSpec,
    halfspaces: &[Vec<f64>],
    tol: f64,
    strict_tol: f64,
) -> Result<Vec<(Vec<f64>, Vec<f64>)>>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    if grid.steps.contains(&0) || grid.steps.is_empty() {
        return Err(Error::EmptyInput("grid"));
    }
    let pts = grid.points();
    let vals: Vec<Vec<f64>> = pts.iter().map(|p| evaluator(p)).collect();
    let mut out = Vec::new();
    for (i, vi) in vals.iter().enumerate() {
        let mut dominated = false;
        for (j, vj) in vals.iter().enumerate() {
            if i == j {
                continue;
            }
            let diff: Vec<f64> = vi.iter().zip(vj).map(|(a, b)| a - b).collect();
            let in_cone = halfspaces
                .iter()
                .all(|h| h.iter().zip(&diff).map(|(a, b)| a * b).sum::<f64>() >= -tol);
            let big = diff.iter().any(|d| d.abs() > strict_tol);
            if in_cone && big {
                dominated = true;
                break;
            }
        }
        if !dominated {
            out.push((pts[i].clone(), vi.clone()));
        }
    }
    Ok(out)
}
