//! Seeded random instances for tests, benchmarks and the command line.
//!
//! Every generator takes a seed and is deterministic across platforms
//! (ChaCha stream). Instances are built so that their preconditions hold:
//! interior generating elements, Slater points, nonempty feasible sets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cones::PolyhedralCone;
use crate::duality::{AffineMap, BoxProgram, QuadraticForm};
use crate::error::Result;
use crate::penalty::PenaltyInstance;
use crate::vector::{norm2, AmbientNorm, Vector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn uniform_vec<R: Rng>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(lo..hi)).collect()
}

fn uniform_mat<R: Rng>(rng: &mut R, rows: usize, cols: usize, lo: f64, hi: f64) -> Vec<Vec<f64>> {
    (0..rows).map(|_| uniform_vec(rng, cols, lo, hi)).collect()
}

fn unit(v: Vec<f64>) -> Vec<f64> {
    let s = norm2(&v);
    v.into_iter().map(|x| x / s).collect()
}

/// A pointed full-dimensional cone with an interior unit (Euclidean)
/// element. Dimensions 2 and 3 draw skewed generator cones, sometimes with
/// an extra generator; other dimensions use the orthant.
pub fn random_cone<R: Rng>(rng: &mut R, dim: usize) -> Result<(PolyhedralCone, Vec<f64>)> {
    if (2..=3).contains(&dim) && rng.gen_bool(0.5) {
        let count = dim + usize::from(dim == 3 && rng.gen_bool(0.5));
        let gens: Vec<Vec<f64>> = (0..count)
            .map(|i| {
                (0..dim)
                    .map(|j| if i % dim == j { 1.0 } else { 0.0 } + rng.gen_range(0.0..0.4))
                    .collect()
            })
            .collect();
        if let Ok(cone) = PolyhedralCone::from_generators(gens.clone()) {
            let sum: Vec<f64> = (0..dim).map(|j| gens.iter().map(|g| g[j]).sum()).collect();
            let e = unit(sum);
            if cone.interior_contains_with(&e, 1e-6)? {
                return Ok((cone, e));
            }
        }
    }
    Ok((
        PolyhedralCone::coordinate(dim)?,
        vec![1.0 / (dim as f64).sqrt(); dim],
    ))
}

/// Finite penalty instance: `|S|` in `50..400` points of `[-1,1]^d`
/// (`d ≤ 3`), values `f(x) = A x + 0.3 sin(B x)` in `ℝ^m` (`m ≤ 3`), feasible
/// set a random sup-norm ball cut from `S`, Euclidean distances, rank
/// measured on the sample.
pub fn random_penalty_instance(seed: u64) -> Result<PenaltyInstance> {
    let mut rng = rng(seed);
    let d = rng.gen_range(1..=3);
    let m = rng.gen_range(1..=3);
    let size = rng.gen_range(50..400);
    let a = uniform_mat(&mut rng, m, d, -1.0, 1.0);
    let b = uniform_mat(&mut rng, m, d, -3.0, 3.0);
    let center = uniform_vec(&mut rng, d, -0.5, 0.5);
    let radius = rng.gen_range(0.3..0.7);
    let (cone, e) = random_cone(&mut rng, m)?;

    let mut points: Vec<Vector> = (0..size)
        .map(|_| Vector::new(uniform_vec(&mut rng, d, -1.0, 1.0)))
        .collect::<Result<_>>()?;
    // one point on each side of the feasibility boundary
    points[0] = Vector::new(center.clone())?;
    points[1] = Vector::new(center.iter().map(|c| c + radius + 0.1).collect())?;
    let feasible = points
        .iter()
        .map(|p| {
            p.as_slice()
                .iter()
                .zip(&center)
                .all(|(x, c)| (x - c).abs() <= radius)
        })
        .collect();
    let f = move |x: &[f64]| -> Vec<f64> {
        (0..m)
            .map(|i| {
                let lin: f64 = a[i].iter().zip(x).map(|(u, v)| u * v).sum();
                let arg: f64 = b[i].iter().zip(x).map(|(u, v)| u * v).sum();
                lin + 0.3 * arg.sin()
            })
            .collect()
    };
    PenaltyInstance::from_fn(
        points,
        feasible,
        f,
        cone,
        Vector::new(e)?,
        AmbientNorm::euclidean(),
        None,
    )
}

/// Box program with a Slater point by construction, and its generating
/// element. `n ≤ 6` variables, `m ≤ 4` cone constraints, up to two equality
/// rows through the Slater point; half the objectives are strongly convex
/// quadratics, half linear.
pub fn random_duality_instance(seed: u64) -> Result<(BoxProgram, Vec<f64>)> {
    let mut rng = rng(seed);
    let n = rng.gen_range(1..=6);
    let m = rng.gen_range(1..=4);
    let k = rng.gen_range(0..=usize::min(2, n - 1));
    let xa = uniform_vec(&mut rng, n, -2.0, 0.0);
    let xb: Vec<f64> = xa.iter().map(|a| a + rng.gen_range(0.5..3.0)).collect();
    let xbar: Vec<f64> = xa
        .iter()
        .zip(&xb)
        .map(|(a, b)| a + (b - a) * rng.gen_range(0.2..0.8))
        .collect();

    let f = if rng.gen_bool(0.5) {
        let bm = uniform_mat(&mut rng, n, n, -1.0, 1.0);
        let mut q = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                q[i][j] = (0..n).map(|r| bm[r][i] * bm[r][j]).sum();
            }
            q[i][i] += 0.1;
        }
        QuadraticForm::new(
            q,
            uniform_vec(&mut rng, n, -2.0, 2.0),
            rng.gen_range(-1.0..1.0),
        )?
    } else {
        QuadraticForm::affine(
            uniform_vec(&mut rng, n, -2.0, 2.0),
            rng.gen_range(-1.0..1.0),
        )?
    };

    let (cone, e) = random_cone(&mut rng, m)?;
    let gm = uniform_mat(&mut rng, m, n, -1.0, 1.0);
    // g(x̄) = -(e + s) with s in the cone: strictly inside -C
    let s = 0.5 * rng.gen::<f64>();
    let offset: Vec<f64> = (0..m)
        .map(|i| -(1.0 + s) * e[i] - gm[i].iter().zip(&xbar).map(|(a, x)| a * x).sum::<f64>())
        .collect();
    let mut prog =
        BoxProgram::new(f, xa, xb)?.with_inequalities(AffineMap::new(gm, offset, n)?, cone)?;
    if k > 0 {
        let hm = uniform_mat(&mut rng, k, n, -1.0, 1.0);
        let h0: Vec<f64> = hm
            .iter()
            .map(|r| -r.iter().zip(&xbar).map(|(a, x)| a * x).sum::<f64>())
            .collect();
        prog = prog.with_equalities(AffineMap::new(hm, h0, n)?)?;
    }
    Ok((prog, e))
}

/// Vector objectives on a box with a cone-ordered value space.
#[derive(Debug, Clone)]
pub struct CertificateInstance {
    pub objectives: Vec<QuadraticForm>,
    pub cone: PolyhedralCone,
    pub e: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Positive weights, strictly positive on the cone; minimizers of
    /// `Σ w_i f_i` over the box are stationary.
    pub weights: Vec<f64>,
}

impl CertificateInstance {
    /// The scalarized objective `Σ w_i f_i`.
    pub fn weighted_objective(&self) -> Result<QuadraticForm> {
        let n = self.lower.len();
        let mut q = vec![vec![0.0; n]; n];
        let mut lin = vec![0.0; n];
        let mut c = 0.0;
        for (w, f) in self.weights.iter().zip(&self.objectives) {
            for i in 0..n {
                for j in 0..n {
                    q[i][j] += w * f.q_mat[i][j];
                }
                lin[i] += w * f.q[i];
            }
            c += w * f.c;
        }
        QuadraticForm::new(q, lin, c)
    }
}

/// `p ≤ 3` convex objectives in `n ≤ 5` variables (a mix of quadratics and
/// linear functions) on a random box. `p = 1` gives the scalar case.
pub fn random_certificate_instance(seed: u64) -> Result<CertificateInstance> {
    let mut rng = rng(seed);
    let n = rng.gen_range(1..=5);
    let p = rng.gen_range(1..=3);
    let lower = uniform_vec(&mut rng, n, -2.0, 0.0);
    let upper: Vec<f64> = lower.iter().map(|a| a + rng.gen_range(0.5..3.0)).collect();
    let objectives = (0..p)
        .map(|_| {
            let lin = uniform_vec(&mut rng, n, -3.0, 3.0);
            if rng.gen_bool(0.6) {
                let d: Vec<f64> = uniform_vec(&mut rng, n, 0.0, 2.0);
                let bm = uniform_mat(&mut rng, n, n, -0.5, 0.5);
                let mut q = vec![vec![0.0; n]; n];
                for i in 0..n {
                    for j in 0..n {
                        q[i][j] = (0..n).map(|r| bm[r][i] * bm[r][j]).sum();
                    }
                    q[i][i] += d[i];
                }
                QuadraticForm::new(q, lin, 0.0)
            } else {
                QuadraticForm::affine(lin, 0.0)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let (cone, e) = random_cone(&mut rng, p)?;
    // cones from `random_cone` sit inside the orthant, so positive weights
    // are strictly positive on them and keep `Σ w_i f_i` convex
    let weights = uniform_vec(&mut rng, p, 0.2, 1.0);
    Ok(CertificateInstance {
        objectives,
        cone,
        e,
        lower,
        upper,
        weights,
    })
}

/// Random planar point cloud of `1..=max` points in `[-5, 5]²`, kept as a
/// vertex list (interior points allowed).
pub fn random_polytope_2d<R: Rng>(rng: &mut R, max: usize) -> Vec<Vec<f64>> {
    let k = rng.gen_range(1..=max);
    (0..k).map(|_| uniform_vec(rng, 2, -5.0, 5.0)).collect()
}
