//! Projected (sub)gradient iteration with optional Nesterov acceleration.

use super::{Residuals, SolveReport, Status};
use crate::vector::dot;

pub trait SmoothObjective {
    fn value(&self, x: &[f64]) -> f64;
    /// Writes a (sub)gradient at `x` into `g`.
    fn gradient(&self, x: &[f64], g: &mut [f64]);
}

pub trait Projector {
    fn project(&self, x: &mut [f64]);
}

impl<F: Fn(&mut [f64])> Projector for F {
    fn project(&self, x: &mut [f64]) {
        self(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepRule {
    /// Fixed step, typically `1 / L` for an `L`-smooth objective.
    Constant(f64),
    /// `a / k` along the normalized subgradient.
    Diminishing(f64),
    /// Polyak step toward a known optimal value, falling back to `a / k`
    /// once the target is reached.
    Polyak { target: f64, fallback: f64 },
}

#[derive(Debug, Clone, Copy)]
pub struct GradientOptions {
    pub step: StepRule,
    /// Nesterov momentum with gradient-based adaptive restart. Only used
    /// with a constant step.
    pub accelerated: bool,
    /// Stop once the gradient mapping norm falls below this.
    pub tol: f64,
    pub max_iterations: usize,
}

impl GradientOptions {
    pub fn smooth(lipschitz: f64) -> Self {
        Self {
            step: StepRule::Constant(1.0 / lipschitz.max(1e-300)),
            accelerated: true,
            tol: 1e-7,
            max_iterations: crate::tolerance::SolverLimits::default().gradient_iterations,
        }
    }
}

fn gradient_mapping_norm<O: SmoothObjective + ?Sized, P: Projector + ?Sized>(
    obj: &O,
    proj: &P,
    x: &[f64],
    t: f64,
    g: &mut [f64],
) -> f64 {
    obj.gradient(x, g);
    let mut y: Vec<f64> = x.iter().zip(g.iter()).map(|(a, b)| a - t * b).collect();
    proj.project(&mut y);
    let s: f64 = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum();
    s.sqrt() / t
}

/// Minimize `obj` over the range of `proj` starting from `x0`.
///
/// The reported point is the best iterate seen, so the best-value sequence is
/// monotone non-increasing regardless of the step rule.
pub fn projected_gradient<O, P>(
    obj: &O,
    proj: &P,
    x0: &[f64],
    opts: &GradientOptions,
) -> SolveReport
where
    O: SmoothObjective + ?Sized,
    P: Projector + ?Sized,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    proj.project(&mut x);
    let mut g = vec![0.0; n];
    let t_ref = match opts.step {
        StepRule::Constant(t) => t,
        _ => 1.0,
    };
    let mut best_x = x.clone();
    let mut best_v = obj.value(&x);
    let mut y = x.clone();
    let mut momentum = 1.0f64;
    let mut gm = f64::INFINITY;
    let mut iterations = 0;

    while iterations < opts.max_iterations {
        gm = gradient_mapping_norm(obj, proj, &x, t_ref, &mut g);
        if gm <= opts.tol {
            break;
        }
        iterations += 1;
        let k = iterations as f64;
        let x_next: Vec<f64> = match opts.step {
            StepRule::Constant(t) if opts.accelerated => {
                obj.gradient(&y, &mut g);
                let mut z: Vec<f64> = y.iter().zip(&g).map(|(a, b)| a - t * b).collect();
                proj.project(&mut z);
                z
            }
            StepRule::Constant(t) => {
                let mut z: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a - t * b).collect();
                proj.project(&mut z);
                z
            }
            StepRule::Diminishing(a) => {
                let gn = dot(&g, &g).sqrt().max(1e-300);
                let mut z: Vec<f64> = x
                    .iter()
                    .zip(&g)
                    .map(|(xi, gi)| xi - a / k * gi / gn)
                    .collect();
                proj.project(&mut z);
                z
            }
            StepRule::Polyak { target, fallback } => {
                let gg = dot(&g, &g).max(1e-300);
                let excess = obj.value(&x) - target;
                let t = if excess > 0.0 {
                    excess / gg
                } else {
                    fallback / k / gg.sqrt()
                };
                let mut z: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi - t * gi).collect();
                proj.project(&mut z);
                z
            }
        };

        if opts.accelerated && matches!(opts.step, StepRule::Constant(_)) {
            // Restart when the momentum direction opposes the gradient step.
            let restart: f64 = y
                .iter()
                .zip(&x_next)
                .zip(&x)
                .map(|((yi, xn), xo)| (yi - xn) * (xn - xo))
                .sum();
            if restart > 0.0 {
                momentum = 1.0;
                y = x_next.clone();
            } else {
                let next = 0.5 * (1.0 + (1.0 + 4.0 * momentum * momentum).sqrt());
                let beta = (momentum - 1.0) / next;
                y = x_next
                    .iter()
                    .zip(&x)
                    .map(|(xn, xo)| xn + beta * (xn - xo))
                    .collect();
                momentum = next;
            }
        }
        x = x_next;
        let v = obj.value(&x);
        if v <= best_v {
            best_v = v;
            best_x.clone_from(&x);
        }
    }

    let final_gm = gradient_mapping_norm(obj, proj, &best_x, t_ref, &mut g);
    let status = if final_gm <= opts.tol || gm <= opts.tol {
        Status::Optimal
    } else {
        Status::IterationCap
    };
    SolveReport {
        status,
        value: best_v,
        point: best_x,
        residuals: Residuals {
            primal: 0.0,
            optimality: final_gm.min(gm),
        },
        iterations,
        duals: None,
        farkas: None,
        ray: None,
    }
}
