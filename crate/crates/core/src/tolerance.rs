//! Centralized numerical tolerances and iteration limits.

use serde::{Deserialize, Serialize};

/// Environment variable overriding the default membership tolerance.
pub const TOL_ENV: &str = "CONEGEN_TOL";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Absolute slack in halfspace tests `⟨a, x⟩ ≥ -tol`.
    pub membership: f64,
    /// Strict margin for interior tests `⟨a, x⟩ > margin`.
    pub interior_margin: f64,
    /// Norm threshold realizing `C \ {0}` in strict dominance tests.
    pub strict_norm: f64,
    /// Feasibility / optimality tolerance of the simplex solver.
    pub lp: f64,
    /// Step of finite-difference checks of directional derivatives.
    pub fd_step: f64,
    /// Acceptance tolerance of finite-difference checks.
    pub fd_tol: f64,
    /// Largest duality gap accepted under the modified Slater condition.
    pub duality_gap: f64,
    /// Margin by which a penalty parameter must exceed the cone-Lipschitz rank.
    pub rank_margin: f64,
    /// Activity and residual tolerance of stationarity certificates.
    pub stationarity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            membership: 1e-9,
            interior_margin: 1e-12,
            strict_norm: 1e-8,
            lp: 1e-9,
            fd_step: 1e-5,
            fd_tol: 1e-4,
            duality_gap: 1e-5,
            rank_margin: 1e-9,
            stationarity: 1e-9,
        }
    }
}

impl Tolerances {
    /// Defaults, with the membership tolerance taken from `CONEGEN_TOL` when set.
    pub fn from_env() -> std::result::Result<Self, String> {
        let mut t = Self::default();
        if let Ok(raw) = std::env::var(TOL_ENV) {
            t.membership = parse_tol(&raw).map_err(|e| format!("{TOL_ENV}: {e}"))?;
        }
        Ok(t)
    }

    pub fn with_membership(mut self, tol: f64) -> Self {
        self.membership = tol;
        self
    }
}

pub fn parse_tol(raw: &str) -> std::result::Result<f64, String> {
    let v: f64 = raw
        .trim()
        .parse()
        .map_err(|_| format!("not a number: {raw:?}"))?;
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(format!(
            "tolerance must be finite and nonnegative, got {raw:?}"
        ))
    }
}

/// Iteration caps of the iterative solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverLimits {
    pub simplex_iterations: usize,
    pub gradient_iterations: usize,
    pub dual_iterations: usize,
    pub augmented_lagrangian_rounds: usize,
}

impl Default for SolverLimits {
    fn default() -> Self {
        Self {
            simplex_iterations: 50_000,
            gradient_iterations: 200_000,
            dual_iterations: 50_000,
            augmented_lagrangian_rounds: 60,
        }
    }
}
