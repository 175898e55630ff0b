//! Exact penalization of vector programs over finite ground sets.
//!
//! A ground set `S`, a feasible subset `Ω ⊂ S` and precomputed objective
//! values `f(x) ∈ ℝᵐ` ordered by a cone `C`. With `L` above the
//! cone-Lipschitz rank of `f`, the `C`-minimal points of `f` on `Ω` coincide
//! with the `C`-minimal points of `f(x) + L d(x, Ω) e` on `S`. Everything is
//! decided by exhaustive enumeration, so set equality is exact.

use serde::{Deserialize, Serialize};

use crate::cones::PolyhedralCone;
use crate::error::{check_dim, check_finite, Error, Result};
use crate::exec::Execution;
use crate::scalarization::GerstewitzFn;
use crate::tolerance::Tolerances;
use crate::vector::{axpy, norm2, sub, AmbientNorm, ExtendedReal, Vector};

/// Nearest point of a finite set and its distance.
pub fn distance_to_points(
    x: &[f64],
    omega: &[Vector],
    norm: &AmbientNorm,
) -> Result<(f64, Vector)> {
    let mut best: Option<(f64, &Vector)> = None;
    for z in omega {
        check_dim(x.len(), z.dim())?;
        let d = norm.distance(x, z);
        if best.is_none_or(|(b, _)| d < b) {
            best = Some((d, z));
        }
    }
    best.map(|(d, z)| (d, z.clone()))
        .ok_or(Error::EmptyInput("feasible set"))
}

/// Distance to the box `[lo, hi]`; the componentwise clamp is the nearest
/// point for every weighted ℓp norm.
pub fn distance_to_box(
    x: &[f64],
    lo: &[f64],
    hi: &[f64],
    norm: &AmbientNorm,
) -> Result<(f64, Vector)> {
    let w = crate::numkernel::project_box(x, lo, hi)?;
    Ok((norm.distance(x, &w), w))
}

/// Least `L` with `f(x) - f(y) ≤_C L‖x - y‖e` over all ordered pairs, i.e.
/// `max φ_{e,C}(f(x) - f(y)) / ‖x - y‖` (floored at 0). A certified rank on
/// the sample and only a lower bound for the rank on a continuum. `+∞` when
/// two coincident points carry different values.
pub fn cone_lipschitz_rank(
    points: &[Vector],
    values: &[Vector],
    scal: &GerstewitzFn,
    norm: &AmbientNorm,
    exec: Execution,
) -> Result<ExtendedReal> {
    if points.len() != values.len() {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            found: values.len(),
        });
    }
    if points.len() < 2 {
        return Err(Error::EmptyInput("point pairs"));
    }
    if !scal.is_interior() {
        return Err(Error::Precondition(
            "the rank needs an interior direction e".into(),
        ));
    }
    let rows: Vec<Result<ExtendedReal>> = exec.map_range(points.len(), |i| {
        let mut best = 0.0f64;
        for j in 0..points.len() {
            if i == j {
                continue;
            }
            let phi = scal.value(&sub(&values[i], &values[j]))?.to_f64();
            let dist = norm.distance(&points[i], &points[j]);
            if dist == 0.0 {
                if phi > 0.0 {
                    return Ok(ExtendedReal::PosInfinity);
                }
                continue;
            }
            best = best.max(phi / dist);
        }
        Ok(ExtendedReal::Finite(best))
    });
    let mut out = ExtendedReal::Finite(0.0);
    for r in rows {
        let r = r?;
        if r > out {
            out = r;
        }
    }
    Ok(out)
}

/// `w` strictly dominates `v` when `v - w ∈ C` and `‖v - w‖₂ > strict`.
fn dominates(cone: &PolyhedralCone, w: &[f64], v: &[f64], tol: f64, strict: f64) -> bool {
    let diff = sub(v, w);
    norm2(&diff) > strict
        && cone
            .halfspaces()
            .iter()
            .all(|a| crate::vector::dot(a, &diff) >= -tol)
}

/// Indices (ascending) of the values not strictly dominated by another value:
/// no `v` with `v - f(x̄) ∈ -C \ {0}`.
pub fn cone_minimal_points(
    values: &[Vector],
    cone: &PolyhedralCone,
    tol: f64,
    strict: f64,
    exec: Execution,
) -> Result<Vec<usize>> {
    for v in values {
        check_dim(cone.dim(), v.dim())?;
    }
    let keep = exec.map_range(values.len(), |i| {
        !values
            .iter()
            .enumerate()
            .any(|(j, w)| j != i && dominates(cone, w, &values[i], tol, strict))
    });
    Ok(keep
        .iter()
        .enumerate()
        .filter(|(_, &k)| k)
        .map(|(i, _)| i)
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PenaltyInstance {
    points: Vec<Vector>,
    values: Vec<Vector>,
    feasible: Vec<bool>,
    scal: GerstewitzFn,
    norm: AmbientNorm,
    rank: f64,
}

impl PenaltyInstance {
    /// Validates the data and the rank. `rank = None` uses the measured rank;
    /// a declared rank must dominate the measured one.
    ///
    /// `norm` measures distances in the ground set; `‖e‖ = 1` is checked in the
    /// unweighted norm of the same kind on the value space.
    pub fn new(
        points: Vec<Vector>,
        values: Vec<Vector>,
        feasible: Vec<bool>,
        cone: PolyhedralCone,
        e: Vector,
        norm: AmbientNorm,
        rank: Option<f64>,
    ) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyInput("ground set"))?;
        let d = first.dim();
        for p in &points {
            check_dim(d, p.dim())?;
        }
        if values.len() != points.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                found: values.len(),
            });
        }
        if feasible.len() != points.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                found: feasible.len(),
            });
        }
        for v in &values {
            check_dim(cone.dim(), v.dim())?;
        }
        if !feasible.iter().any(|&f| f) {
            return Err(Error::EmptyInput("feasible set"));
        }
        let value_norm = AmbientNorm {
            kind: norm.kind,
            weights: None,
        };
        let en = value_norm.norm(&e);
        if (en - 1.0).abs() > 1e-9 {
            return Err(Error::Precondition(format!(
                "direction e must have unit norm, found {en}"
            )));
        }
        let scal = GerstewitzFn::new(cone, e)?;
        if !scal.is_interior() {
            return Err(Error::Precondition(
                "direction e must be an interior point of the cone".into(),
            ));
        }
        let measured = if points.len() < 2 {
            0.0
        } else {
            match cone_lipschitz_rank(&points, &values, &scal, &norm, Execution::default())? {
                ExtendedReal::Finite(r) => r,
                _ => {
                    return Err(Error::Precondition(
                        "objective is not cone-Lipschitz on the ground set".into(),
                    ))
                }
            }
        };
        let rank = match rank {
            Some(r) => {
                check_finite(&[r])?;
                if measured > r + Tolerances::default().rank_margin * (1.0 + r.abs()) {
                    return Err(Error::Precondition(format!(
                        "declared rank {r} is below the measured rank {measured}"
                    )));
                }
                r
            }
            None => measured,
        };
        Ok(Self {
            points,
            values,
            feasible,
            scal,
            norm,
            rank,
        })
    }

    /// Builds values from an evaluator.
    pub fn from_fn<F>(
        points: Vec<Vector>,
        feasible: Vec<bool>,
        f: F,
        cone: PolyhedralCone,
        e: Vector,
        norm: AmbientNorm,
        rank: Option<f64>,
    ) -> Result<Self>
    where
        F: Fn(&[f64]) -> Vec<f64>,
    {
        let values = points
            .iter()
            .map(|p| Vector::new(f(p)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(points, values, feasible, cone, e, norm, rank)
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn values(&self) -> &[Vector] {
        &self.values
    }

    pub fn feasible(&self) -> &[bool] {
        &self.feasible
    }

    pub fn cone(&self) -> &PolyhedralCone {
        self.scal.cone()
    }

    pub fn e(&self) -> &Vector {
        self.scal.e()
    }

    pub fn rank(&self) -> f64 {
        self.rank
    }

    pub fn norm(&self) -> &AmbientNorm {
        &self.norm
    }

    fn feasible_points(&self) -> Vec<Vector> {
        self.points
            .iter()
            .zip(&self.feasible)
            .filter(|(_, &f)| f)
            .map(|(p, _)| p.clone())
            .collect()
    }

    /// `d(x, Ω)` for every ground point.
    pub fn distances(&self) -> Result<Vec<f64>> {
        let omega = self.feasible_points();
        self.points
            .iter()
            .map(|p| distance_to_points(p, &omega, &self.norm).map(|(d, _)| d))
            .collect()
    }

    /// `f(x) + L d(x, Ω) e` for an arbitrary point with value `fx`.
    pub fn penalized_objective(&self, l: f64, x: &[f64], fx: &[f64]) -> Result<Vector> {
        if l.is_nan() || l < 0.0 {
            return Err(Error::Precondition(
                "penalty parameter must be nonnegative".into(),
            ));
        }
        let (d, _) = distance_to_points(x, &self.feasible_points(), &self.norm)?;
        Vector::new(axpy(fx, l * d, self.e()))
    }

    /// Penalized values over the ground set.
    pub fn penalized_values(&self, l: f64) -> Result<Vec<Vector>> {
        if l.is_nan() || l < 0.0 {
            return Err(Error::Precondition(
                "penalty parameter must be nonnegative".into(),
            ));
        }
        let dist = self.distances()?;
        self.values
            .iter()
            .zip(dist)
            .map(|(v, d)| Vector::new(axpy(v, l * d, self.e())))
            .collect()
    }

    fn minimal_sets(
        &self,
        l: f64,
        tol: f64,
        strict: f64,
        exec: Execution,
    ) -> Result<(Vec<usize>, Vec<usize>)> {
        let omega: Vec<usize> = (0..self.points.len())
            .filter(|&i| self.feasible[i])
            .collect();
        let fo: Vec<Vector> = omega.iter().map(|&i| self.values[i].clone()).collect();
        let m1 = cone_minimal_points(&fo, self.cone(), tol, strict, exec)?
            .into_iter()
            .map(|k| omega[k])
            .collect();
        let m2 = cone_minimal_points(&self.penalized_values(l)?, self.cone(), tol, strict, exec)?;
        Ok((m1, m2))
    }

    /// Compares the minimal points of `f` on `Ω` with those of the penalized
    /// objective on `S` for a parameter `L` strictly above the rank, and checks
    /// the inclusion of the former in the latter at `L = rank`.
    pub fn verify_equivalence(
        &self,
        l: f64,
        tols: &Tolerances,
        exec: Execution,
    ) -> Result<PenaltyReport> {
        check_finite(&[l])?;
        if l <= self.rank + tols.rank_margin {
            return Err(Error::Precondition(format!(
                "penalty parameter {l} must exceed the cone-Lipschitz rank {} by {}",
                self.rank, tols.rank_margin
            )));
        }
        let (tol, strict) = (tols.membership, tols.strict_norm);
        let (m1, m2) = self.minimal_sets(l, tol, strict, exec)?;
        let (_, m2_rank) = self.minimal_sets(self.rank, tol, strict, exec)?;
        let inclusion = m1.iter().all(|i| m2_rank.binary_search(i).is_ok());
        let mut tol_sensitive = false;
        for factor in [10.0, 0.1] {
            let (a, b) = self.minimal_sets(l, tol * factor, strict * factor, exec)?;
            tol_sensitive |= a != m1 || b != m2;
        }
        Ok(PenaltyReport {
            l,
            rank: self.rank,
            equal: m1 == m2,
            minimal_constrained: m1,
            minimal_penalized: m2,
            minimal_penalized_at_rank: m2_rank,
            inclusion_at_rank: inclusion,
            tol_sensitive,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenaltyReport {
    pub l: f64,
    /// Rank on the sample; a lower bound for the rank on a continuum.
    pub rank: f64,
    /// Indices into the ground set.
    pub minimal_constrained: Vec<usize>,
    pub minimal_penalized: Vec<usize>,
    pub equal: bool,
    pub minimal_penalized_at_rank: Vec<usize>,
    /// Every constrained minimizer is a penalized minimizer at `L = rank`.
    pub inclusion_at_rank: bool,
    /// The minimal sets change when tolerances are scaled by 10 or 0.1.
    pub tol_sensitive: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{brute_force_grid_min, GridSpec};
    use proptest::prelude::*;

    fn v(x: &[f64]) -> Vector {
        Vector::from_slice(x).unwrap()
    }

    fn abs_instance(l_rank: Option<f64>, all_feasible: bool) -> PenaltyInstance {
        let points: Vec<Vector> = (0..=16).map(|k| v(&[-2.0 + 0.25 * k as f64])).collect();
        let feasible = points
            .iter()
            .map(|p| all_feasible || (1.0..=2.0).contains(&p[0]))
            .collect();
        PenaltyInstance::from_fn(
            points,
            feasible,
            |x| vec![x[0].abs()],
            PolyhedralCone::coordinate(1).unwrap(),
            v(&[1.0]),
            AmbientNorm::euclidean(),
            l_rank,
        )
        .unwrap()
    }

    #[test]
    fn distance_examples() {
        let n = AmbientNorm::euclidean();
        let (d, w) = distance_to_box(&[0.0], &[1.0], &[2.0], &n).unwrap();
        assert_eq!((d, w.as_slice()), (1.0, &[1.0][..]));
        let (d, w) = distance_to_box(&[3.0, 0.0], &[-1.0, -1.0], &[1.0, 1.0], &n).unwrap();
        assert_eq!((d, w.as_slice()), (2.0, &[1.0, 0.0][..]));
        let (d, w) =
            distance_to_points(&[0.0, 0.0], &[v(&[1.0, 1.0]), v(&[2.0, 0.0])], &n).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-15 && w.as_slice() == [1.0, 1.0]);
        assert!(distance_to_points(&[0.0], &[], &n).is_err());
    }

    #[test]
    fn rank_examples() {
        let pts: Vec<Vector> = (-4..=4).map(|k| v(&[k as f64 * 0.5])).collect();
        let ortho = PolyhedralCone::coordinate(2).unwrap();
        let scal = GerstewitzFn::new(ortho, v(&[1.0, 1.0])).unwrap();
        let sup = AmbientNorm::sup();
        let rank = |f: &dyn Fn(f64) -> Vec<f64>| {
            let vals: Vec<Vector> = pts.iter().map(|p| v(&f(p[0]))).collect();
            cone_lipschitz_rank(&pts, &vals, &scal, &sup, Execution::Sequential)
                .unwrap()
                .to_f64()
        };
        assert!((rank(&|x| vec![x, x]) - 1.0).abs() < 1e-12);
        assert_eq!(rank(&|_| vec![3.0, -1.0]), 0.0);
        // ratio oracle over all pairs
        let f = |x: f64| vec![x.abs(), 2.0 * x.abs()];
        let mut oracle = 0.0f64;
        for p in &pts {
            for q in &pts {
                if p[0] != q[0] {
                    let (a, b) = (f(p[0]), f(q[0]));
                    oracle = oracle.max(((a[0] - b[0]).max(a[1] - b[1])) / (p[0] - q[0]).abs());
                }
            }
        }
        assert_eq!(oracle, 2.0);
        assert!((rank(&f) - oracle).abs() < 1e-12);
        let dup = vec![v(&[0.0]), v(&[0.0])];
        let vals = vec![v(&[1.0, 0.0]), v(&[0.0, 0.0])];
        assert_eq!(
            cone_lipschitz_rank(&dup, &vals, &scal, &sup, Execution::Sequential).unwrap(),
            ExtendedReal::PosInfinity
        );
    }

    #[test]
    fn penalized_objective_examples() {
        let inst = abs_instance(Some(1.0), false);
        assert_eq!(
            inst.penalized_objective(2.0, &[1.5], &[1.5])
                .unwrap()
                .as_slice(),
            &[1.5]
        );
        assert_eq!(
            inst.penalized_objective(2.0, &[0.0], &[0.0])
                .unwrap()
                .as_slice(),
            &[2.0]
        );
        assert_eq!(
            inst.penalized_objective(2.0, &[1.0], &[1.0])
                .unwrap()
                .as_slice(),
            &[1.0]
        );
    }

    #[test]
    fn minimal_point_examples() {
        let c = PolyhedralCone::coordinate(2).unwrap();
        let vals = vec![v(&[0.0, 1.0]), v(&[1.0, 0.0]), v(&[1.0, 1.0])];
        let m = cone_minimal_points(&vals, &c, 1e-9, 1e-8, Execution::Sequential).unwrap();
        assert_eq!(m, vec![0, 1]);
        assert_eq!(
            cone_minimal_points(&vals[..1], &c, 1e-9, 1e-8, Execution::Sequential).unwrap(),
            vec![0]
        );
        let same = vec![v(&[1.0, 2.0]); 3];
        assert_eq!(
            cone_minimal_points(&same, &c, 1e-9, 1e-8, Execution::Sequential).unwrap(),
            vec![0, 1, 2]
        );
    }

    #[test]
    fn equivalence_on_abs_grid() {
        let inst = abs_instance(None, false);
        assert!((inst.rank() - 1.0).abs() < 1e-12);
        let tols = Tolerances::default();
        let r = inst
            .verify_equivalence(1.5, &tols, Execution::Sequential)
            .unwrap();
        let one = 12; // -2 + 0.25 * 12 = 1
        assert_eq!(r.minimal_constrained, vec![one]);
        assert_eq!(r.minimal_penalized, vec![one]);
        assert!(r.equal && r.inclusion_at_rank && !r.tol_sensitive);
        // at L = rank the penalized minimal set is [0, 1] on the grid
        assert_eq!(r.minimal_penalized_at_rank, (8..=12).collect::<Vec<_>>());
        assert!(matches!(
            inst.verify_equivalence(1.0, &tols, Execution::Sequential),
            Err(Error::Precondition(_))
        ));
        let full = abs_instance(None, true);
        let r = full
            .verify_equivalence(1.5, &tols, Execution::Parallel)
            .unwrap();
        assert!(r.equal && r.minimal_constrained == vec![8]);
    }

    #[test]
    fn declared_rank_is_checked() {
        let points: Vec<Vector> = (0..5).map(|k| v(&[k as f64])).collect();
        let res = PenaltyInstance::from_fn(
            points,
            vec![true; 5],
            |x| vec![2.0 * x[0]],
            PolyhedralCone::coordinate(1).unwrap(),
            v(&[1.0]),
            AmbientNorm::euclidean(),
            Some(1.0),
        );
        assert!(matches!(res, Err(Error::Precondition(_))));
    }

    #[test]
    fn minimal_points_agree_with_grid_oracle() {
        let f = |x: &[f64]| vec![(x[0] - 1.0).powi(2) + x[1], x[0] + (x[1] - 0.5).powi(2)];
        let grid = GridSpec {
            lo: vec![-1.0, -1.0],
            hi: vec![2.0, 2.0],
            steps: vec![13, 13],
        };
        let pts = grid.points();
        let vals: Vec<Vector> = pts.iter().map(|p| v(&f(p))).collect();
        let c = PolyhedralCone::coordinate(2).unwrap();
        let ours = cone_minimal_points(&vals, &c, 1e-9, 1e-8, Execution::Parallel).unwrap();
        let hs: Vec<Vec<f64>> = c.halfspaces().iter().map(|a| a.to_vec()).collect();
        let oracle = brute_force_grid_min(f, &grid, &hs, 1e-9, 1e-8).unwrap();
        let ours_pts: Vec<Vec<f64>> = ours.iter().map(|&i| pts[i].clone()).collect();
        let oracle_pts: Vec<Vec<f64>> = oracle.into_iter().map(|(p, _)| p).collect();
        assert_eq!(ours_pts, oracle_pts);
    }

    proptest! {
        #[test]
        fn minimal_points_are_order_independent(
            raw in prop::collection::vec((0i32..6, 0i32..6), 1..30),
            seed in any::<u64>(),
        ) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let c = PolyhedralCone::coordinate(2).unwrap();
            let vals: Vec<Vector> = raw.iter().map(|&(a, b)| v(&[a as f64, b as f64])).collect();
            let m = cone_minimal_points(&vals, &c, 1e-9, 1e-8, Execution::Sequential).unwrap();
            let minimal: Vec<Vector> = m.iter().map(|&i| vals[i].clone()).collect();
            let again = cone_minimal_points(&minimal, &c, 1e-9, 1e-8, Execution::Sequential).unwrap();
            prop_assert_eq!(again.len(), minimal.len());
            let mut perm: Vec<usize> = (0..vals.len()).collect();
            perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let shuffled: Vec<Vector> = perm.iter().map(|&i| vals[i].clone()).collect();
            let ms = cone_minimal_points(&shuffled, &c, 1e-9, 1e-8, Execution::Sequential).unwrap();
            let mut a: Vec<usize> = ms.iter().map(|&k| perm[k]).collect();
            a.sort();
            prop_assert_eq!(a, m);
        }

        #[test]
        fn distance_triangle(x in prop::collection::vec(-3.0..3.0f64, 2),
                             y in prop::collection::vec(-3.0..3.0f64, 2),
                             omega in prop::collection::vec(prop::collection::vec(-3.0..3.0f64, 2), 1..8)) {
            let omega: Vec<Vector> = omega.iter().map(|p| v(p)).collect();
            for n in [AmbientNorm::euclidean(), AmbientNorm::sup()] {
                let (dx, _) = distance_to_points(&x, &omega, &n).unwrap();
                let (dy, _) = distance_to_points(&y, &omega, &n).unwrap();
                prop_assert!(dx <= n.distance(&x, &y) + dy + 1e-12);
            }
        }
    }
}
