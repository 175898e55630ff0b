//! Dense two-phase tableau simplex with Bland's rule.
//!
//! Problems are stated as
//!
//! ```text
//!     minimize    c'x
//!     subject to  a_i'x >= b_i      (inequality rows)
//!                 a_j'x  = b_j      (equality rows)
//!                 l <= x <= u       (optional per-variable bounds)
//! ```
//!
//! Infeasible problems carry a Farkas certificate stated in terms of the
//! original rows and bounds, so it can be checked without the solver.

use serde::{Deserialize, Serialize};

use super::{SolveReport, Status};
use crate::error::{check_dim, check_finite, Error, Result};
use crate::tolerance::{SolverLimits, Tolerances};
use crate::vector::dot;

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearRow {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpProblem {
    pub cost: Vec<f64>,
    /// Rows `coeffs · x >= rhs`.
    pub ineq: Vec<LinearRow>,
    /// Rows `coeffs · x == rhs`.
    pub eq: Vec<LinearRow>,
    pub lower: Vec<Option<f64>>,
    pub upper: Vec<Option<f64>>,
}

impl LpProblem {
    /// A problem over `cost.len()` free variables with no rows.
    pub fn new(cost: Vec<f64>) -> Self {
        let n = cost.len();
        Self {
            cost,
            ineq: Vec::new(),
            eq: Vec::new(),
            lower: vec![None; n],
            upper: vec![None; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.cost.len()
    }

    pub fn geq(&mut self, coeffs: Vec<f64>, rhs: f64) -> &mut Self {
        self.ineq.push(LinearRow { coeffs, rhs });
        self
    }

    pub fn leq(&mut self, coeffs: Vec<f64>, rhs: f64) -> &mut Self {
        let coeffs = coeffs.into_iter().map(|v| -v).collect();
        self.ineq.push(LinearRow { coeffs, rhs: -rhs });
        self
    }

    pub fn equal(&mut self, coeffs: Vec<f64>, rhs: f64) -> &mut Self {
        self.eq.push(LinearRow { coeffs, rhs });
        self
    }

    pub fn bound(&mut self, j: usize, lower: Option<f64>, upper: Option<f64>) -> &mut Self {
        self.lower[j] = lower;
        self.upper[j] = upper;
        self
    }

    pub fn nonnegative(&mut self) -> &mut Self {
        self.lower.iter_mut().for_each(|l| *l = Some(0.0));
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        check_finite(&self.cost)?;
        check_dim(n, self.lower.len())?;
        check_dim(n, self.upper.len())?;
        for row in self.ineq.iter().chain(&self.eq) {
            check_dim(n, row.coeffs.len())?;
            check_finite(&row.coeffs)?;
            if !row.rhs.is_finite() {
                return Err(Error::Precondition("non-finite right-hand side".into()));
            }
        }
        for b in self.lower.iter().chain(&self.upper).flatten() {
            if !b.is_finite() {
                return Err(Error::Precondition("non-finite variable bound".into()));
            }
        }
        Ok(())
    }

    /// Largest violation of rows and bounds at `x`.
    pub fn primal_violation(&self, x: &[f64]) -> f64 {
        let mut v: f64 = 0.0;
        for row in &self.ineq {
            v = v.max(row.rhs - dot(&row.coeffs, x));
        }
        for row in &self.eq {
            v = v.max((dot(&row.coeffs, x) - row.rhs).abs());
        }
        for (j, &xj) in x.iter().enumerate() {
            if let Some(l) = self.lower[j] {
                v = v.max(l - xj);
            }
            if let Some(u) = self.upper[j] {
                v = v.max(xj - u);
            }
        }
        v.max(0.0)
    }
}

/// Multipliers of an optimal LP solution; `cost = Σ ineq_i a_i + Σ eq_j a_j + lower - upper`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpDuals {
    pub ineq: Vec<f64>,
    pub eq: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

/// Proof of infeasibility: nonnegative multipliers (free on equalities) with
/// `Σ ineq_i a_i + Σ eq_j a_j + lower - upper = 0` and
/// `Σ ineq_i b_i + Σ eq_j b_j + lower·l - upper·u > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FarkasCertificate {
    pub ineq: Vec<f64>,
    pub eq: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl FarkasCertificate {
    /// The certified positive quantity `Σ y b + lower·l - upper·u`.
    pub fn gap(&self, p: &LpProblem) -> f64 {
        let mut v = 0.0;
        for (y, row) in self.ineq.iter().zip(&p.ineq) {
            v += y * row.rhs;
        }
        for (y, row) in self.eq.iter().zip(&p.eq) {
            v += y * row.rhs;
        }
        for j in 0..p.num_vars() {
            if let Some(l) = p.lower[j] {
                v += self.lower[j] * l;
            }
            if let Some(u) = p.upper[j] {
                v -= self.upper[j] * u;
            }
        }
        v
    }

    /// Residual of the combination `Σ y a + lower - upper` (should vanish).
    pub fn combination_residual(&self, p: &LpProblem) -> f64 {
        let n = p.num_vars();
        let mut comb = vec![0.0; n];
        for (y, row) in self
            .ineq
            .iter()
            .zip(&p.ineq)
            .chain(self.eq.iter().zip(&p.eq))
        {
            for (c, a) in comb.iter_mut().zip(&row.coeffs) {
                *c += y * a;
            }
        }
        for j in 0..n {
            comb[j] += self.lower[j] - self.upper[j];
        }
        comb.iter().fold(0.0, |m: f64, v| m.max(v.abs()))
    }

    /// Independent check of the certificate against the problem data.
    pub fn verify(&self, p: &LpProblem, tol: f64) -> bool {
        let n = p.num_vars();
        if self.ineq.len() != p.ineq.len()
            || self.eq.len() != p.eq.len()
            || self.lower.len() != n
            || self.upper.len() != n
        {
            return false;
        }
        let signs_ok = self
            .ineq
            .iter()
            .chain(&self.lower)
            .chain(&self.upper)
            .all(|&v| v >= -tol);
        let unused_ok = (0..n).all(|j| {
            (p.lower[j].is_some() || self.lower[j].abs() <= tol)
                && (p.upper[j].is_some() || self.upper[j].abs() <= tol)
        });
        let scale = self
            .ineq
            .iter()
            .chain(&self.eq)
            .chain(&self.lower)
            .chain(&self.upper)
            .fold(1.0f64, |m, v| m.max(v.abs()));
        signs_ok
            && unused_ok
            && self.combination_residual(p) <= tol * scale
            && self.gap(p) > tol * scale
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LpOptions {
    pub tol: f64,
    pub max_iterations: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        Self {
            tol: Tolerances::default().lp,
            max_iterations: SolverLimits::default().simplex_iterations,
        }
    }
}

pub fn solve_lp(p: &LpProblem) -> Result<SolveReport> {
    solve_lp_with(p, &LpOptions::default())
}

#[derive(Debug, Clone, Copy)]
enum ColMap {
    /// `x = l + z`
    Shift(f64),
    /// `x = u - z`
    Reflect(f64),
    /// `x = z+ - z-`
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum RowOrigin {
    Ineq(usize),
    Upper(usize),
    Eq(usize),
}

const PIVOT_TOL: f64 = 1e-10;
const COST_TOL: f64 = 1e-10;

struct Tableau {
    rows: usize,
    cols: usize,
    /// Row-major `rows × (cols + 1)`; the last column holds the right-hand side.
    data: Vec<f64>,
    /// Reduced costs, length `cols + 1`; the last entry is minus the objective.
    cost: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * (self.cols + 1) + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.cols)
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let w = self.cols + 1;
        let p = self.data[r * w + q];
        for j in 0..w {
            self.data[r * w + j] /= p;
        }
        self.data[r * w + q] = 1.0;
        let pivot_row: Vec<f64> = self.data[r * w..(r + 1) * w].to_vec();
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.data[i * w + q];
            if f != 0.0 {
                for j in 0..w {
                    self.data[i * w + j] -= f * pivot_row[j];
                }
                self.data[i * w + q] = 0.0;
            }
        }
        let f = self.cost[q];
        if f != 0.0 {
            for j in 0..w {
                self.cost[j] -= f * pivot_row[j];
            }
            self.cost[q] = 0.0;
        }
        self.basis[r] = q;
    }

    /// Bland's rule over columns `0..allowed`. Returns `Err(q)` when column `q`
    /// has no positive entry (unbounded direction).
    fn run(&mut self, allowed: usize, max_iter: usize, iterations: &mut usize) -> PhaseOutcome {
        loop {
            let Some(q) = (0..allowed).find(|&j| self.cost[j] < -COST_TOL) else {
                return PhaseOutcome::Optimal;
            };
            if *iterations >= max_iter {
                return PhaseOutcome::Cap;
            }
            let mut best: Option<(usize, f64)> = None;
            for i in 0..self.rows {
                let a = self.at(i, q);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(i).max(0.0) / a;
                    best = match best {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            let tie = (ratio - br).abs() <= 1e-12 * (1.0 + br.abs());
                            if ratio < br && !tie || tie && self.basis[i] < self.basis[bi] {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            match best {
                None => return PhaseOutcome::Unbounded(q),
                Some((r, _)) => {
                    self.pivot(r, q);
                    *iterations += 1;
                }
            }
        }
    }
}

enum PhaseOutcome {
    Optimal,
    Unbounded(usize),
    Cap,
}

pub fn solve_lp_with(p: &LpProblem, opts: &LpOptions) -> Result<SolveReport> {
    p.validate()?;
    let n = p.num_vars();

    // Crossed bounds are infeasible on their own.
    for j in 0..n {
        if let (Some(l), Some(u)) = (p.lower[j], p.upper[j]) {
            if l > u + opts.tol {
                let mut cert = FarkasCertificate {
                    ineq: vec![0.0; p.ineq.len()],
                    eq: vec![0.0; p.eq.len()],
                    lower: vec![0.0; n],
                    upper: vec![0.0; n],
                };
                cert.lower[j] = 1.0;
                cert.upper[j] = 1.0;
                return Ok(SolveReport::infeasible(cert, 0));
            }
        }
    }

    // Column mapping x -> z >= 0.
    let mut maps = Vec::with_capacity(n);
    let mut col_start = Vec::with_capacity(n);
    let mut nz = 0;
    for j in 0..n {
        col_start.push(nz);
        let m = match (p.lower[j], p.upper[j]) {
            (Some(l), _) => ColMap::Shift(l),
            (None, Some(u)) => ColMap::Reflect(u),
            (None, None) => ColMap::Free,
        };
        nz += if matches!(m, ColMap::Free) { 2 } else { 1 };
        maps.push(m);
    }

    // Rows over x: (coeffs, rhs, is_eq, origin)
    let mut rows: Vec<(Vec<f64>, f64, bool, RowOrigin)> = Vec::new();
    for (i, r) in p.ineq.iter().enumerate() {
        rows.push((r.coeffs.clone(), r.rhs, false, RowOrigin::Ineq(i)));
    }
    for j in 0..n {
        if let (Some(_), Some(u)) = (p.lower[j], p.upper[j]) {
            let mut c = vec![0.0; n];
            c[j] = -1.0;
            rows.push((c, -u, false, RowOrigin::Upper(j)));
        }
    }
    for (i, r) in p.eq.iter().enumerate() {
        rows.push((r.coeffs.clone(), r.rhs, true, RowOrigin::Eq(i)));
    }
    let m = rows.len();
    let slack_count = rows.iter().filter(|r| !r.2).count();
    let cols = nz + slack_count + m;
    let art0 = nz + slack_count;

    // Standard-form matrix (before sign flips) and rhs.
    let mut a_std = vec![0.0; m * cols];
    let mut b_std = vec![0.0; m];
    let mut sign = vec![1.0; m];
    let mut slack_idx = nz;
    for (i, (coeffs, rhs, is_eq, _)) in rows.iter().enumerate() {
        let mut shifted = *rhs;
        for j in 0..n {
            let a = coeffs[j];
            if a == 0.0 {
                continue;
            }
            let c = col_start[j];
            match maps[j] {
                ColMap::Shift(l) => {
                    a_std[i * cols + c] = a;
                    shifted -= a * l;
                }
                ColMap::Reflect(u) => {
                    a_std[i * cols + c] = -a;
                    shifted -= a * u;
                }
                ColMap::Free => {
                    a_std[i * cols + c] = a;
                    a_std[i * cols + c + 1] = -a;
                }
            }
        }
        if !is_eq {
            a_std[i * cols + slack_idx] = -1.0;
            slack_idx += 1;
        }
        if shifted < 0.0 {
            sign[i] = -1.0;
        }
        b_std[i] = shifted;
    }
    for i in 0..m {
        if sign[i] < 0.0 {
            for j in 0..art0 {
                a_std[i * cols + j] = -a_std[i * cols + j];
            }
            b_std[i] = -b_std[i];
        }
        a_std[i * cols + art0 + i] = 1.0;
    }

    let w = cols + 1;
    let mut data = vec![0.0; m * w];
    for i in 0..m {
        data[i * w..i * w + cols].copy_from_slice(&a_std[i * cols..(i + 1) * cols]);
        data[i * w + cols] = b_std[i];
    }
    // Phase-one reduced costs: cost 1 on artificials, basis = artificials.
    let mut cost = vec![0.0; w];
    for i in 0..m {
        for j in 0..art0 {
            cost[j] -= data[i * w + j];
        }
        cost[cols] -= data[i * w + cols];
    }
    let mut tab = Tableau {
        rows: m,
        cols,
        data,
        cost,
        basis: (art0..art0 + m).collect(),
    };
    let mut iterations = 0;

    match tab.run(art0, opts.max_iterations, &mut iterations) {
        PhaseOutcome::Cap => return Ok(SolveReport::capped(iterations)),
        PhaseOutcome::Unbounded(_) => {
            return Err(Error::Solver(
                "phase one reported an unbounded direction".into(),
            ))
        }
        PhaseOutcome::Optimal => {}
    }
    let infeasibility = -tab.cost[cols];
    let b_scale = b_std.iter().fold(1.0f64, |s, v| s.max(v.abs()));
    if infeasibility > opts.tol * b_scale {
        // y_i = 1 - (reduced cost of artificial i), then undo the sign flips.
        let y: Vec<f64> = (0..m)
            .map(|i| sign[i] * (1.0 - tab.cost[art0 + i]))
            .collect();
        let cert = farkas_from_rows(p, &rows, &maps, &col_start, &y, &a_std, &sign, cols);
        return Ok(SolveReport::infeasible(cert, iterations));
    }

    // Drive artificials out of the basis where possible.
    for i in 0..m {
        if tab.basis[i] >= art0 {
            if let Some(q) = (0..art0).find(|&j| tab.at(i, j).abs() > 1e-9) {
                tab.data[i * w + cols] = 0.0;
                tab.pivot(i, q);
            }
        }
    }

    // Phase two.
    let mut c_std = vec![0.0; cols];
    for j in 0..n {
        let c = col_start[j];
        match maps[j] {
            ColMap::Shift(_) => c_std[c] = p.cost[j],
            ColMap::Reflect(_) => c_std[c] = -p.cost[j],
            ColMap::Free => {
                c_std[c] = p.cost[j];
                c_std[c + 1] = -p.cost[j];
            }
        }
    }
    let mut cost = vec![0.0; w];
    cost[..cols].copy_from_slice(&c_std);
    for i in 0..m {
        let cb = c_std[tab.basis[i]];
        if cb != 0.0 {
            for j in 0..w {
                cost[j] -= cb * tab.data[i * w + j];
            }
        }
    }
    tab.cost = cost;

    match tab.run(art0, opts.max_iterations, &mut iterations) {
        PhaseOutcome::Cap => return Ok(SolveReport::capped(iterations)),
        PhaseOutcome::Unbounded(q) => {
            let mut dz = vec![0.0; cols];
            dz[q] = 1.0;
            for i in 0..m {
                dz[tab.basis[i]] = -tab.at(i, q);
            }
            let ray = z_to_x(&maps, &col_start, &dz, true);
            return Ok(SolveReport::unbounded(ray, iterations));
        }
        PhaseOutcome::Optimal => {}
    }

    // Recover z from the final basis using the original data (refines the tableau values).
    let mut z = vec![0.0; cols];
    let mut y = vec![0.0; m];
    let refined = refine_basis(&a_std, &b_std, &c_std, &tab.basis, m, cols);
    match refined {
        Some((zb, yb)) if zb.iter().all(|&v| v >= -1e-9) => {
            for (i, &bj) in tab.basis.iter().enumerate() {
                z[bj] = zb[i].max(0.0);
            }
            y = yb;
        }
        _ => {
            for i in 0..m {
                z[tab.basis[i]] = tab.rhs(i).max(0.0);
            }
            // y_i = -(reduced cost of artificial i) since artificials cost 0 in phase two.
            for i in 0..m {
                y[i] = -tab.cost[art0 + i];
            }
        }
    }
    let x = z_to_x(&maps, &col_start, &z, false);
    let y_orig: Vec<f64> = (0..m).map(|i| sign[i] * y[i]).collect();

    // Reduced costs of the structural columns from the refined duals.
    let mut min_reduced: f64 = 0.0;
    let mut reduced = vec![0.0; nz];
    for j in 0..art0 {
        let mut r = c_std[j];
        for i in 0..m {
            r -= y[i] * a_std[i * cols + j];
        }
        min_reduced = min_reduced.min(r);
        if j < nz {
            reduced[j] = r;
        }
    }

    let mut duals = LpDuals {
        ineq: vec![0.0; p.ineq.len()],
        eq: vec![0.0; p.eq.len()],
        lower: vec![0.0; n],
        upper: vec![0.0; n],
    };
    for (i, row) in rows.iter().enumerate() {
        match row.3 {
            RowOrigin::Ineq(k) => duals.ineq[k] = y_orig[i],
            RowOrigin::Eq(k) => duals.eq[k] = y_orig[i],
            RowOrigin::Upper(j) => duals.upper[j] = y_orig[i],
        }
    }
    for j in 0..n {
        match maps[j] {
            ColMap::Shift(_) => duals.lower[j] = reduced[col_start[j]],
            ColMap::Reflect(_) => duals.upper[j] = reduced[col_start[j]],
            ColMap::Free => {}
        }
    }

    let value = dot(&p.cost, &x);
    let primal = p.primal_violation(&x);
    Ok(SolveReport {
        status: Status::Optimal,
        value,
        residuals: super::Residuals {
            primal,
            optimality: (-min_reduced).max(0.0),
        },
        point: x,
        iterations,
        duals: Some(duals),
        farkas: None,
        ray: None,
    })
}

fn z_to_x(maps: &[ColMap], col_start: &[usize], z: &[f64], direction: bool) -> Vec<f64> {
    maps.iter()
        .zip(col_start)
        .map(|(m, &c)| match *m {
            ColMap::Shift(l) => {
                if direction {
                    z[c]
                } else {
                    l + z[c]
                }
            }
            ColMap::Reflect(u) => {
                if direction {
                    -z[c]
                } else {
                    u - z[c]
                }
            }
            ColMap::Free => z[c] - z[c + 1],
        })
        .collect()
}

fn refine_basis(
    a_std: &[f64],
    b_std: &[f64],
    c_std: &[f64],
    basis: &[usize],
    m: usize,
    cols: usize,
) -> Option<(Vec<f64>, Vec<f64>)> {
    if m == 0 {
        return Some((Vec::new(), Vec::new()));
    }
    let bmat = DMatrix::from_fn(m, m, |i, k| a_std[i * cols + basis[k]]);
    let lu = bmat.clone().lu();
    let zb = lu.solve(&DVector::from_column_slice(b_std))?;
    let cb = DVector::from_iterator(
        m,
        basis.iter().map(|&j| c_std.get(j).copied().unwrap_or(0.0)),
    );
    let y = bmat.transpose().lu().solve(&cb)?;
    if zb.iter().chain(y.iter()).any(|v| !v.is_finite()) {
        return None;
    }
    Some((zb.as_slice().to_vec(), y.as_slice().to_vec()))
}

#[allow(clippy::too_many_arguments)]
fn farkas_from_rows(
    p: &LpProblem,
    rows: &[(Vec<f64>, f64, bool, RowOrigin)],
    maps: &[ColMap],
    col_start: &[usize],
    y: &[f64],
    a_std: &[f64],
    sign: &[f64],
    cols: usize,
) -> FarkasCertificate {
    let n = p.num_vars();
    let mut cert = FarkasCertificate {
        ineq: vec![0.0; p.ineq.len()],
        eq: vec![0.0; p.eq.len()],
        lower: vec![0.0; n],
        upper: vec![0.0; n],
    };
    for (i, row) in rows.iter().enumerate() {
        match row.3 {
            RowOrigin::Ineq(k) => cert.ineq[k] = y[i].max(0.0),
            RowOrigin::Eq(k) => cert.eq[k] = y[i],
            RowOrigin::Upper(j) => cert.upper[j] = y[i].max(0.0),
        }
    }
    for j in 0..n {
        // y' (unflipped standard column) for the first column of variable j.
        let c = col_start[j];
        let col_dot: f64 = (0..rows.len())
            .map(|i| y[i] * sign[i] * a_std[i * cols + c])
            .sum();
        match maps[j] {
            ColMap::Shift(_) => cert.lower[j] = (-col_dot).max(0.0),
            ColMap::Reflect(_) => cert.upper[j] = (-col_dot).max(0.0),
            ColMap::Free => {}
        }
    }
    let g = cert.gap(p);
    if g > 0.0 {
        for v in cert
            .ineq
            .iter_mut()
            .chain(&mut cert.eq)
            .chain(&mut cert.lower)
            .chain(&mut cert.upper)
        {
            *v /= g;
        }
    }
    cert
}
