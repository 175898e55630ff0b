//! Direction grids on the Euclidean unit sphere.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `n` equally spaced directions on the circle starting at angle 0.
pub fn circle_directions(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            vec![t.cos(), t.sin()]
        })
        .collect()
}

/// Fibonacci lattice of `n` points on the 2-sphere.
pub fn fibonacci_sphere(n: usize) -> Vec<Vec<f64>> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let t = golden * k as f64;
            vec![r * t.cos(), r * t.sin(), z]
        })
        .collect()
}

/// Normalized Gaussian directions in dimension `dim`.
pub fn random_sphere(dim: usize, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| loop {
            let v: Vec<f64> = (0..dim).map(|_| standard_normal(&mut rng)).collect();
            let s = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if s > 1e-12 {
                break v.iter().map(|x| x / s).collect();
            }
        })
        .collect()
}

/// Quasi-uniform grid: circle in 2-D, Fibonacci sphere in 3-D, seeded
/// Gaussian directions above; `±1` in 1-D.
pub fn direction_grid(dim: usize, n: usize, seed: u64) -> Vec<Vec<f64>> {
    match dim {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => circle_directions(n),
        3 => fibonacci_sphere(n),
        _ => random_sphere(dim, n, seed),
    }
}

/// Covering radius of the grid (largest Euclidean distance from a unit
/// vector to the nearest grid direction). Exact on the circle and in 1-D;
/// elsewhere estimated from a probe set 16 times denser, hence reported as
/// an estimate.
pub fn covering_radius(dim: usize, grid: &[Vec<f64>], seed: u64) -> (f64, bool) {
    match dim {
        1 => (0.0, true),
        2 => (
            2.0 * (std::f64::consts::PI / (2.0 * grid.len() as f64)).sin(),
            true,
        ),
        _ => {
            let probes = if dim == 3 {
                fibonacci_sphere(16 * grid.len() + 1)
            } else {
                random_sphere(dim, 16 * grid.len(), seed ^ 0x9e37)
            };
            let last = dim - 1;
            let mut order: Vec<usize> = (0..grid.len()).collect();
            order.sort_by(|&a, &b| grid[a][last].total_cmp(&grid[b][last]));
            let keys: Vec<f64> = order.iter().map(|&i| grid[i][last]).collect();
            let r = probes
                .iter()
                .map(|p| nearest_sorted(grid, &order, &keys, p))
                .fold(0.0, f64::max);
            (r, false)
        }
    }
}

/// Nearest grid point by scanning outward in the last coordinate from the
/// probe's position; a gap in one coordinate bounds the distance from below.
fn nearest_sorted(grid: &[Vec<f64>], order: &[usize], keys: &[f64], p: &[f64]) -> f64 {
    let z = p[p.len() - 1];
    let start = keys.partition_point(|&k| k < z);
    let dist2 = |i: usize| {
        grid[i]
            .iter()
            .zip(p)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
    };
    let mut best = f64::INFINITY;
    let (mut lo, mut hi) = (start, start);
    loop {
        let down = lo > 0 && (z - keys[lo - 1]).powi(2) < best;
        let up = hi < keys.len() && (keys[hi] - z).powi(2) < best;
        if !down && !up {
            break;
        }
        if down {
            lo -= 1;
            best = best.min(dist2(order[lo]));
        }
        if up {
            best = best.min(dist2(order[hi]));
            hi += 1;
        }
    }
    best.sqrt()
}

/// Box-Muller standard normal sample.
fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}
