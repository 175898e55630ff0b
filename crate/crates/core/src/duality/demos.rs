//! Worked programs: a discretized elastic-plastic torsion problem and a
//! box-constrained variational inequality.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    duality_gap_report, solve_primal, stationarity_certificate, AffineMap, BoxProgram,
    CertificateOutcome, DualityReport, QuadraticForm,
};
use crate::cones::PolyhedralCone;
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

/// One-dimensional torsion on `N` interior nodes with zero boundary values:
///
/// ```text
///     minimize  ½ Σ_j h ((u_{j+1} - u_j)/h)² - Σ_i h c u_i
///     s.t.      |(u_{j+1} - u_j)/h| ≤ 1,   0 ≤ u ≤ 1,   h = 1/(N+1)
/// ```
pub fn torsion_program(grid: usize, load: f64) -> Result<(BoxProgram, Vec<f64>)> {
    if grid == 0 {
        return Err(Error::InvalidProgram("grid needs at least one node".into()));
    }
    let n = grid;
    let h = 1.0 / (n as f64 + 1.0);
    let mut q = vec![vec![0.0; n]; n];
    for i in 0..n {
        q[i][i] = 2.0 / h;
        if i + 1 < n {
            q[i][i + 1] = -1.0 / h;
            q[i + 1][i] = -1.0 / h;
        }
    }
    let f = QuadraticForm::new(q, vec![-h * load; n], 0.0)?;
    let mut rows = Vec::with_capacity(2 * (n + 1));
    for j in 0..=n {
        // slope (u_{j+1} - u_j)/h with u_0 = u_{N+1} = 0
        let mut r = vec![0.0; n];
        if j < n {
            r[j] = 1.0 / h;
        }
        if j > 0 {
            r[j - 1] = -1.0 / h;
        }
        rows.push(r.clone());
        rows.push(r.iter().map(|v| -v).collect());
    }
    let m = rows.len();
    let g = AffineMap::new(rows, vec![-1.0; m], n)?;
    let prog = BoxProgram::new(f, vec![0.0; n], vec![1.0; n])?
        .with_inequalities(g, PolyhedralCone::coordinate(m)?)?;
    let e = vec![1.0 / (m as f64).sqrt(); m];
    Ok((prog, e))
}

/// Reference value of the torsion program by an independent route: in slope
/// variables `s_j` the problem separates as
/// `min Σ ½ h s_j² - c h² (N - j) s_j` s.t. `Σ s_j = 0`, `|s_j| ≤ 1`, solved by
/// bisection on the multiplier of the sum constraint. Returns the value and
/// the nodal values `u_i = h Σ_{j<i} s_j`.
pub fn torsion_oracle_value(grid: usize, load: f64) -> (f64, Vec<f64>) {
    let n = grid;
    let h = 1.0 / (n as f64 + 1.0);
    let a: Vec<f64> = (0..=n).map(|j| load * h * h * (n - j) as f64).collect();
    let slopes = |lam: f64| -> Vec<f64> {
        a.iter()
            .map(|aj| ((aj - lam) / h).clamp(-1.0, 1.0))
            .collect()
    };
    let amax = a.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let amin = a.iter().cloned().fold(f64::INFINITY, f64::min);
    let (mut lo, mut hi) = (amin - 2.0 * h, amax + 2.0 * h);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if slopes(mid).iter().sum::<f64>() > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s = slopes(0.5 * (lo + hi));
    let value = s
        .iter()
        .zip(&a)
        .map(|(sj, aj)| 0.5 * h * sj * sj - aj * sj)
        .sum();
    let mut u = Vec::with_capacity(n);
    let mut acc = 0.0;
    for sj in &s[..n] {
        acc += h * sj;
        u.push(acc);
    }
    (value, u)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorsionReport {
    pub grid: usize,
    pub load: f64,
    pub u: Vec<f64>,
    pub value: f64,
    pub oracle_value: f64,
    pub abs_error: f64,
    pub duality: DualityReport,
    pub passed: bool,
}

pub fn torsion_demo(grid: usize, load: f64, tols: &Tolerances) -> Result<TorsionReport> {
    let (prog, e) = torsion_program(grid, load)?;
    let duality = duality_gap_report(&prog, &e, tols)?;
    let value = duality
        .primal
        .finite()
        .ok_or_else(|| Error::Solver("torsion program reported infeasible".into()))?;
    let (oracle_value, _) = torsion_oracle_value(grid, load);
    let abs_error = (value - oracle_value).abs();
    Ok(TorsionReport {
        grid,
        load,
        u: duality.x.clone(),
        value,
        oracle_value,
        abs_error,
        passed: abs_error <= 1e-6 && duality.passed,
        duality,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViReport {
    pub seed: u64,
    pub n: usize,
    pub point: Vec<f64>,
    /// `T x̄ = A x̄ + b`.
    pub operator: Vec<f64>,
    /// Probability weights of the discrete measure.
    pub weights: Vec<f64>,
    pub certificate: CertificateOutcome,
    pub certificate_verified: bool,
    /// `min_{y in box} Σ w_i (T x̄)_i (y_i - x̄_i)`, computed exactly.
    pub vi_min: f64,
    pub passed: bool,
}

/// Variational inequality `⟨T x̄, y - x̄⟩ ≥ 0` on `[0,1]ⁿ` for the monotone
/// affine operator `T x = A x + b` with `A = B'B/n + I` drawn from `seed`,
/// in the weighted inner product of a uniform probability measure.
pub fn vi_demo(seed: u64, n: usize, tols: &Tolerances) -> Result<ViReport> {
    if n == 0 {
        return Err(Error::InvalidProgram("dimension must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bm: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            a[i][j] = (0..n).map(|k| bm[k][i] * bm[k][j]).sum::<f64>() / n as f64;
        }
        a[i][i] += 1.0;
    }
    // symmetric A: the solution of the inequality minimizes ½x'Ax + b'x
    let f = QuadraticForm::new(a.clone(), b.clone(), 0.0)?;
    let (xa, xb) = (vec![0.0; n], vec![1.0; n]);
    let prog = BoxProgram::new(f.clone(), xa.clone(), xb.clone())?;
    let sol = solve_primal(&prog)?;
    if !sol.is_optimal() {
        return Err(Error::Solver("variational inequality solve failed".into()));
    }
    let x = sol.x;
    let tx = f.gradient(&x);
    let weights = vec![1.0 / n as f64; n];
    let lin: Vec<f64> = tx.iter().zip(&weights).map(|(t, w)| t * w).collect();
    let offset = -lin.iter().zip(&x).map(|(l, xi)| l * xi).sum::<f64>();
    let linearized = QuadraticForm::affine(lin.clone(), offset)?;
    let cone = PolyhedralCone::coordinate(1)?;
    let certificate = stationarity_certificate(
        std::slice::from_ref(&linearized),
        &cone,
        &[1.0],
        &xa,
        &xb,
        &x,
        tols.stationarity,
    )?;
    let certificate_verified = match &certificate {
        CertificateOutcome::Certificate(c) => {
            c.verify(&[linearized], &cone, &[1.0], &xa, &xb, 1e-8)?
        }
        CertificateOutcome::Refusal(_) => false,
    };
    let vi_min = lin
        .iter()
        .zip(&x)
        .map(|(l, xi)| (l * (0.0 - xi)).min(l * (1.0 - xi)))
        .sum::<f64>();
    Ok(ViReport {
        seed,
        n,
        point: x,
        operator: tx,
        weights,
        certificate,
        certificate_verified,
        vi_min,
        passed: certificate_verified && vi_min >= -1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torsion_matches_slope_oracle() {
        let tols = Tolerances::default();
        for grid in [1, 3, 12] {
            let r = torsion_demo(grid, 8.0, &tols).unwrap();
            assert!(
                r.abs_error <= 1e-6,
                "grid {grid}: {} vs {}",
                r.value,
                r.oracle_value
            );
            assert!(r.duality.slater.holds && r.passed);
        }
        // the oracle's nodal values solve the same program
        let (prog, _) = torsion_program(12, 8.0).unwrap();
        let (v, u) = torsion_oracle_value(12, 8.0);
        assert!(prog.violation(&u) <= 1e-12);
        assert!((prog.objective().value(&u) - v).abs() <= 1e-12);
    }

    #[test]
    fn light_load_leaves_slopes_inactive() {
        // c = 1: unconstrained solution u = x(1-x)/2 has slopes ≤ ½
        let (v, u) = torsion_oracle_value(12, 1.0);
        let r = torsion_demo(12, 1.0, &Tolerances::default()).unwrap();
        assert!((r.value - v).abs() <= 1e-9);
        for (a, b) in r.u.iter().zip(&u) {
            assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn vi_point_certifies() {
        for seed in 0..5 {
            let r = vi_demo(seed, 6, &Tolerances::default()).unwrap();
            assert!(r.passed, "seed {seed}");
        }
    }
}
