//! Support-function embedding of compact convex sets.
//!
//! A polytope is a nonempty vertex list (any spanning set of its points
//! works). `h_A(d) = max_{v ∈ A} ⟨d, v⟩`, and for compact convex sets the
//! Hausdorff distance is the sup-norm distance of support functions over
//! the unit sphere. In the plane that supremum is attained on a finite
//! direction set and is computed exactly; in other dimensions it is sampled
//! and the sampling error is bounded in the result.

pub mod hull;
pub mod sampling;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, check_finite, Error, Result};
use crate::exec::Execution;
use crate::numkernel::{solve_qp, QpProblem};
use crate::vector::{dot, norm2};

pub use hull::{convex_hull_2d, edge_normals, facet_normals};
pub use sampling::{covering_radius, direction_grid};

/// Default number of sampled directions outside the plane.
pub const DEFAULT_SAMPLES: usize = 1024;
/// Default seed for random direction grids (dimension ≥ 4).
pub const DEFAULT_SEED: u64 = 0x5eed;
/// Agreement tolerance of the exact planar path.
pub const EXACT_TOL: f64 = 1e-9;

/// Checks a vertex list and returns its dimension.
pub fn polytope_dim(vertices: &[Vec<f64>]) -> Result<usize> {
    let first = vertices.first().ok_or(Error::EmptyInput("polytope"))?;
    let n = first.len();
    if n == 0 {
        return Err(Error::EmptyInput("polytope vertex"));
    }
    for v in vertices {
        check_dim(n, v.len())?;
        check_finite(v)?;
    }
    Ok(n)
}

/// `max_v ⟨d, v⟩` over the vertex list.
pub fn support_function(vertices: &[Vec<f64>], d: &[f64]) -> Result<f64> {
    let n = polytope_dim(vertices)?;
    check_dim(n, d.len())?;
    check_finite(d)?;
    Ok(support_unchecked(vertices, d))
}

fn support_unchecked(vertices: &[Vec<f64>], d: &[f64]) -> f64 {
    vertices
        .iter()
        .map(|v| dot(d, v))
        .fold(f64::NEG_INFINITY, f64::max)
}

fn argmax_vertex<'a>(vertices: &'a [Vec<f64>], d: &[f64]) -> &'a [f64] {
    let mut best = &vertices[0];
    let mut val = dot(d, best);
    for v in &vertices[1..] {
        let s = dot(d, v);
        if s > val {
            val = s;
            best = v;
        }
    }
    best
}

/// Where sampled values came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SupportSource {
    /// Exact support function of the convex hull of these vertices.
    Polytope { vertices: Vec<Vec<f64>> },
    /// Values supplied externally, assumed to be a support function.
    Sampled,
    /// Pointwise min or mixed lattice result; an element of the function
    /// lattice that need not be the support function of any set.
    FunctionLattice,
}

/// Support values on a grid of unit directions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportSample {
    pub source: SupportSource,
    pub directions: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

fn normalize_directions(directions: &[Vec<f64>], n: usize) -> Result<Vec<Vec<f64>>> {
    if directions.is_empty() {
        return Err(Error::EmptyInput("direction grid"));
    }
    directions
        .iter()
        .map(|d| {
            check_dim(n, d.len())?;
            check_finite(d)?;
            let s = norm2(d);
            if s == 0.0 {
                return Err(Error::Precondition("zero direction".into()));
            }
            Ok(d.iter().map(|x| x / s).collect())
        })
        .collect()
}

impl SupportSample {
    /// Exact support values of `conv(vertices)`; directions are normalized.
    pub fn from_polytope(vertices: &[Vec<f64>], directions: &[Vec<f64>]) -> Result<Self> {
        let n = polytope_dim(vertices)?;
        let directions = normalize_directions(directions, n)?;
        let values = directions
            .iter()
            .map(|d| support_unchecked(vertices, d))
            .collect();
        Ok(Self {
            source: SupportSource::Polytope {
                vertices: vertices.to_vec(),
            },
            directions,
            values,
        })
    }

    /// Externally supplied values; directions are normalized and values
    /// rescaled by positive homogeneity.
    pub fn from_values(directions: &[Vec<f64>], values: &[f64]) -> Result<Self> {
        let n = directions
            .first()
            .ok_or(Error::EmptyInput("direction grid"))?
            .len();
        check_dim(directions.len(), values.len())?;
        check_finite(values)?;
        let scales: Vec<f64> = directions.iter().map(|d| norm2(d)).collect();
        let directions = normalize_directions(directions, n)?;
        let values = values.iter().zip(&scales).map(|(v, s)| v / s).collect();
        Ok(Self {
            source: SupportSource::Sampled,
            directions,
            values,
        })
    }

    pub fn dim(&self) -> usize {
        self.directions[0].len()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sup-norm distance to another sample on the same grid.
    pub fn sup_distance(&self, other: &Self) -> Result<f64> {
        check_same_grid(self, other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

fn check_same_grid(a: &SupportSample, b: &SupportSample) -> Result<()> {
    let same = a.directions.len() == b.directions.len()
        && a.directions.iter().zip(&b.directions).all(|(p, q)| {
            p.len() == q.len() && p.iter().zip(q).all(|(x, y)| (x - y).abs() <= 1e-12)
        });
    if same {
        Ok(())
    } else {
        Err(Error::Precondition(
            "support samples live on different direction grids".into(),
        ))
    }
}

/// Pointwise max. Two polytope sources give the polytope source of the union
/// of their vertex lists, whose hull is `conv(A ∪ B)`.
pub fn lattice_join(a: &SupportSample, b: &SupportSample) -> Result<SupportSample> {
    check_same_grid(a, b)?;
    let source = match (&a.source, &b.source) {
        (SupportSource::Polytope { vertices: va }, SupportSource::Polytope { vertices: vb }) => {
            SupportSource::Polytope {
                vertices: va.iter().chain(vb).cloned().collect(),
            }
        }
        (SupportSource::FunctionLattice, _) | (_, SupportSource::FunctionLattice) => {
            SupportSource::FunctionLattice
        }
        _ => SupportSource::Sampled,
    };
    let values = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| x.max(*y))
        .collect();
    Ok(SupportSample {
        source,
        directions: a.directions.clone(),
        values,
    })
}

/// Pointwise min, always tagged as a function-lattice element: the min of
/// two support functions is generally not sublinear.
pub fn lattice_meet(a: &SupportSample, b: &SupportSample) -> Result<SupportSample> {
    check_same_grid(a, b)?;
    let values = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| x.min(*y))
        .collect();
    Ok(SupportSample {
        source: SupportSource::FunctionLattice,
        directions: a.directions.clone(),
        values,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HausdorffMode {
    /// Finite direction set on which the supremum is attained.
    Exact,
    /// Quasi-uniform direction sample.
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HausdorffResult {
    pub distance: f64,
    /// Unit direction attaining the maximum of `|h_A - h_B|`.
    pub direction: Vec<f64>,
    pub mode: HausdorffMode,
    /// Number of directions evaluated.
    pub directions_checked: usize,
    /// Upper bound on `true distance - distance`; zero in exact mode.
    pub resolution_bound: f64,
    /// Whether `resolution_bound` is rigorous or estimated from a probe set.
    pub bound_is_rigorous: bool,
}

fn angle_of(d: &[f64]) -> f64 {
    d[1].atan2(d[0]).rem_euclid(std::f64::consts::TAU)
}

fn unit_at(t: f64) -> Vec<f64> {
    vec![t.cos(), t.sin()]
}

/// Finite set of planar directions containing a maximizer of
/// `|h_A - h_B|`: the edge normals of both hulls split the circle into arcs
/// on which both maximizing vertices are fixed, so the difference is
/// `⟨d, v_A - v_B⟩` there and peaks at an arc end or at `±(v_A - v_B)`.
pub fn critical_directions_2d(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    use std::f64::consts::TAU;
    let pa: Vec<[f64; 2]> = a.iter().map(|v| [v[0], v[1]]).collect();
    let pb: Vec<[f64; 2]> = b.iter().map(|v| [v[0], v[1]]).collect();
    let mut angles: Vec<f64> = edge_normals(&convex_hull_2d(&pa))
        .into_iter()
        .chain(edge_normals(&convex_hull_2d(&pb)))
        .map(|n| angle_of(&n))
        .collect();
    if angles.is_empty() {
        angles.push(0.0);
    }
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|x, y| (*x - *y).abs() <= 1e-15);

    let mut out: Vec<Vec<f64>> = angles.iter().map(|&t| unit_at(t)).collect();
    let k = angles.len();
    for i in 0..k {
        let lo = angles[i];
        let hi = if i + 1 < k {
            angles[i + 1]
        } else {
            angles[0] + TAU
        };
        let mid = unit_at(0.5 * (lo + hi));
        let w: Vec<f64> = argmax_vertex(a, &mid)
            .iter()
            .zip(argmax_vertex(b, &mid))
            .map(|(x, y)| x - y)
            .collect();
        if norm2(&w) == 0.0 {
            continue;
        }
        let neg: Vec<f64> = w.iter().map(|x| -x).collect();
        // Both signs through atan2 so that swapping A and B yields the same set.
        for cand in [angle_of(&w), angle_of(&neg)] {
            let shifted = if cand < lo { cand + TAU } else { cand };
            if shifted > lo && shifted < hi {
                out.push(unit_at(cand));
            }
        }
    }
    out
}

fn max_gap(a: &[Vec<f64>], b: &[Vec<f64>], dirs: &[Vec<f64>], exec: Execution) -> (f64, usize) {
    let gaps = exec.map(dirs, |d| {
        (support_unchecked(a, d) - support_unchecked(b, d)).abs()
    });
    gaps.iter().enumerate().fold(
        (0.0, 0),
        |(m, j), (i, &g)| if g > m { (g, i) } else { (m, j) },
    )
}

/// Lipschitz constant of `h_A - h_B` on the sphere: the largest distance
/// between a vertex of `A` and a vertex of `B`.
fn difference_lipschitz(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .flat_map(|p| {
            b.iter().map(move |q| {
                p.iter()
                    .zip(q)
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum::<f64>()
                    .sqrt()
            })
        })
        .fold(0.0, f64::max)
}

/// Hausdorff distance for the Euclidean ball. Exact in dimensions 1 and 2;
/// sampled with [`DEFAULT_SAMPLES`] directions otherwise.
pub fn hausdorff_distance(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<HausdorffResult> {
    hausdorff_distance_with(a, b, DEFAULT_SAMPLES, DEFAULT_SEED, Execution::default())
}

/// As [`hausdorff_distance`], with the sample size and seed of the sampled
/// path and the execution strategy over directions.
pub fn hausdorff_distance_with(
    a: &[Vec<f64>],
    b: &[Vec<f64>],
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<HausdorffResult> {
    let n = polytope_dim(a)?;
    check_dim(n, polytope_dim(b)?)?;
    let (dirs, mode, bound, rigorous) = match n {
        1 => (direction_grid(1, 2, seed), HausdorffMode::Exact, 0.0, true),
        2 => (
            critical_directions_2d(a, b),
            HausdorffMode::Exact,
            0.0,
            true,
        ),
        _ => {
            if samples == 0 {
                return Err(Error::EmptyInput("direction grid"));
            }
            let dirs = direction_grid(n, samples, seed);
            let (r, rigorous) = covering_radius(n, &dirs, seed);
            let bound = difference_lipschitz(a, b) * r;
            (dirs, HausdorffMode::Sampled, bound, rigorous)
        }
    };
    let (distance, j) = max_gap(a, b, &dirs, exec);
    Ok(HausdorffResult {
        distance,
        direction: dirs[j].clone(),
        mode,
        directions_checked: dirs.len(),
        resolution_bound: bound,
        bound_is_rigorous: rigorous,
    })
}

/// Euclidean distance from `p` to `conv(vertices)` and the nearest point,
/// from the quadratic program over convex weights.
pub fn distance_to_hull(vertices: &[Vec<f64>], p: &[f64]) -> Result<(f64, Vec<f64>)> {
    let n = polytope_dim(vertices)?;
    check_dim(n, p.len())?;
    check_finite(p)?;
    let k = vertices.len();
    let gram: Vec<Vec<f64>> = vertices
        .iter()
        .map(|u| vertices.iter().map(|v| dot(u, v)).collect())
        .collect();
    let linear: Vec<f64> = vertices.iter().map(|v| -dot(v, p)).collect();
    let mut qp = QpProblem::new(gram, linear);
    for i in 0..k {
        let mut row = vec![0.0; k];
        row[i] = -1.0;
        qp.leq(row, 0.0);
    }
    qp.equal(vec![1.0; k], 1.0);
    let sol = solve_qp(&qp)?;
    if !sol.is_optimal() {
        return Err(Error::Solver(format!(
            "nearest-point program ended with status {:?}",
            sol.status
        )));
    }
    let mut x = vec![0.0; n];
    for (lam, v) in sol.x.iter().zip(vertices) {
        for (xi, vi) in x.iter_mut().zip(v) {
            *xi += lam.max(0.0) * vi;
        }
    }
    let s: f64 = sol.x.iter().map(|l| l.max(0.0)).sum();
    x.iter_mut().for_each(|xi| *xi /= s);
    let d = p
        .iter()
        .zip(&x)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    Ok((d, x))
}

/// Hausdorff distance straight from the definition: the farthest a vertex
/// of either set lies from the other hull. Independent of support functions.
pub fn hausdorff_definitional(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<f64> {
    let n = polytope_dim(a)?;
    check_dim(n, polytope_dim(b)?)?;
    let mut best = 0.0f64;
    for v in a {
        best = best.max(distance_to_hull(b, v)?.0);
    }
    for v in b {
        best = best.max(distance_to_hull(a, v)?.0);
    }
    Ok(best)
}

/// Whether every vertex of `a` lies within `tol` of `conv(b)`.
pub fn hull_contains(b: &[Vec<f64>], a: &[Vec<f64>], tol: f64) -> Result<bool> {
    for v in a {
        if distance_to_hull(b, v)?.0 > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderIsometryReport {
    pub dim: usize,
    pub mode: HausdorffMode,
    /// Definitional Hausdorff distance.
    pub hausdorff: f64,
    /// Max of `|h_A - h_B|` over the direction set.
    pub support_sup: f64,
    pub difference: f64,
    /// `EXACT_TOL`, plus the sampling bound in sampled mode.
    pub tolerance: f64,
    pub isometry_holds: bool,
    pub a_subset_b: bool,
    pub h_a_le_h_b: bool,
    pub b_subset_a: bool,
    pub h_b_le_h_a: bool,
    /// Inclusion ⟺ support inequality in the plane; only the forward
    /// implication is checkable on a sampled grid.
    pub order_preserved: bool,
    pub witness: Vec<f64>,
}

/// Compares the definitional Hausdorff distance with the support-function
/// sup-norm and checks that inclusion matches the pointwise support order.
pub fn verify_order_isometry(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<OrderIsometryReport> {
    let hd = hausdorff_distance(a, b)?;
    let n = hd.direction.len();
    let hausdorff = hausdorff_definitional(a, b)?;

    let mut dirs = match hd.mode {
        HausdorffMode::Exact if n == 2 => critical_directions_2d(a, b),
        _ => direction_grid(n, DEFAULT_SAMPLES, DEFAULT_SEED),
    };
    if n == 1 {
        dirs = direction_grid(1, 2, DEFAULT_SEED);
    }
    if n == 2 {
        for poly in [a, b] {
            let pts: Vec<[f64; 2]> = poly.iter().map(|v| [v[0], v[1]]).collect();
            dirs.extend(
                facet_normals(&convex_hull_2d(&pts))
                    .into_iter()
                    .map(|d| d.to_vec()),
            );
        }
    }
    let le = |p: &[Vec<f64>], q: &[Vec<f64>]| {
        dirs.iter()
            .all(|d| support_unchecked(p, d) <= support_unchecked(q, d) + EXACT_TOL)
    };
    let (h_a_le_h_b, h_b_le_h_a) = (le(a, b), le(b, a));
    let a_subset_b = hull_contains(b, a, EXACT_TOL)?;
    let b_subset_a = hull_contains(a, b, EXACT_TOL)?;
    let order_preserved = match hd.mode {
        HausdorffMode::Exact => a_subset_b == h_a_le_h_b && b_subset_a == h_b_le_h_a,
        HausdorffMode::Sampled => (!a_subset_b || h_a_le_h_b) && (!b_subset_a || h_b_le_h_a),
    };

    let difference = (hausdorff - hd.distance).abs();
    let tolerance = EXACT_TOL * (1.0 + hausdorff) + hd.resolution_bound;
    Ok(OrderIsometryReport {
        dim: n,
        mode: hd.mode,
        hausdorff,
        support_sup: hd.distance,
        difference,
        tolerance,
        isometry_holds: difference <= tolerance
            && hd.distance <= hausdorff + EXACT_TOL * (1.0 + hausdorff),
        a_subset_b,
        h_a_le_h_b,
        b_subset_a,
        h_b_le_h_a,
        order_preserved,
        witness: hd.direction,
    })
}
