//! Polyhedral ordering cones.
//!
//! A cone is stored by its inward halfspace normals (`x ∈ C ⟺ ⟨a_k, x⟩ ≥ 0`)
//! and, when known, its generators. Conversion between the two is done by
//! exhaustive enumeration in dimension at most three; above that both must be
//! supplied when an operation needs the generators.

mod enumerate;

pub use enumerate::extreme_rays;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, check_finite, Error, Result};
use crate::numkernel::linalg::rank;
use crate::numkernel::{solve_lp, LpProblem};
use crate::tolerance::Tolerances;
use crate::vector::{dot, norm2, Vector};

/// Largest dimension handled by facet / extreme-ray enumeration.
pub const ENUMERATION_MAX_DIM: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConeKind {
    Coordinate,
    WeightedCoordinate,
    General,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolyhedralCone {
    dim: usize,
    halfspaces: Vec<Vector>,
    generators: Option<Vec<Vector>>,
    kind: ConeKind,
}

fn to_vectors(rows: Vec<Vec<f64>>, dim: usize, what: &'static str) -> Result<Vec<Vector>> {
    if rows.is_empty() {
        return Err(Error::EmptyInput(what));
    }
    rows.into_iter()
        .map(|r| {
            check_dim(dim, r.len())?;
            let v = Vector::new(r)?;
            if v.iter().all(|&c| c == 0.0) {
                return Err(Error::InvalidCone(format!("zero vector among {what}")));
            }
            Ok(v)
        })
        .collect()
}

impl PolyhedralCone {
    /// The nonnegative orthant `ℝⁿ₊`.
    pub fn coordinate(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidCone("dimension must be positive".into()));
        }
        let basis: Vec<Vector> = (0..dim).map(|i| Vector::basis(dim, i)).collect();
        Ok(Self {
            dim,
            halfspaces: basis.clone(),
            generators: Some(basis),
            kind: ConeKind::Coordinate,
        })
    }

    /// The orthant described by scaled normals `w_i e_i` (`w_i > 0`).
    pub fn weighted_coordinate(weights: &[f64]) -> Result<Self> {
        let dim = weights.len();
        if dim == 0 {
            return Err(Error::InvalidCone("dimension must be positive".into()));
        }
        check_finite(weights)?;
        if weights.iter().any(|&w| w <= 0.0) {
            return Err(Error::InvalidCone(
                "coordinate weights must be positive".into(),
            ));
        }
        let halfspaces = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| {
                let mut v = vec![0.0; dim];
                v[i] = w;
                Vector::from_vec_unchecked(v)
            })
            .collect();
        let generators = (0..dim).map(|i| Vector::basis(dim, i)).collect();
        Ok(Self {
            dim,
            halfspaces,
            generators: Some(generators),
            kind: ConeKind::WeightedCoordinate,
        })
    }

    /// A general cone from its halfspace normals, with optional generators.
    /// In dimension ≤ 3 missing generators are enumerated.
    pub fn new(halfspaces: Vec<Vec<f64>>, generators: Option<Vec<Vec<f64>>>) -> Result<Self> {
        let dim = halfspaces
            .first()
            .map(|r| r.len())
            .ok_or(Error::EmptyInput("halfspaces"))?;
        if dim == 0 {
            return Err(Error::InvalidCone("dimension must be positive".into()));
        }
        let halfspaces = to_vectors(halfspaces, dim, "halfspaces")?;
        let rows: Vec<Vec<f64>> = halfspaces.iter().map(|v| v.to_vec()).collect();
        if rank(&rows, dim, 1e-10) < dim {
            return Err(Error::InvalidCone(
                "halfspaces do not have full rank: the cone contains a nontrivial subspace".into(),
            ));
        }
        let generators = match generators {
            Some(g) => Some(to_vectors(g, dim, "generators")?),
            None if dim <= ENUMERATION_MAX_DIM => {
                let rays = extreme_rays(&rows, dim).expect("dimension checked");
                if rays.is_empty() {
                    return Err(Error::InvalidCone("the cone is {0}".into()));
                }
                Some(rays.into_iter().map(Vector::from_vec_unchecked).collect())
            }
            None => None,
        };
        let cone = Self {
            dim,
            halfspaces,
            generators,
            kind: ConeKind::General,
        };
        if let Some(gens) = &cone.generators {
            for (j, g) in gens.iter().enumerate() {
                for (k, a) in cone.halfspaces.iter().enumerate() {
                    if dot(a, g) < -1e-9 * norm2(a) * norm2(g) {
                        return Err(Error::InvalidCone(format!(
                            "generator {j} violates halfspace {k} (cross-consistency)"
                        )));
                    }
                }
            }
        } else if !cone.is_nontrivial_by_lp() {
            return Err(Error::InvalidCone("the cone is {0}".into()));
        }
        Ok(cone)
    }

    /// A full-dimensional cone from its generators (dimension ≤ 3).
    pub fn from_generators(generators: Vec<Vec<f64>>) -> Result<Self> {
        let dim = generators
            .first()
            .map(|r| r.len())
            .ok_or(Error::EmptyInput("generators"))?;
        if dim > ENUMERATION_MAX_DIM {
            return Err(Error::UnsupportedRepresentation(format!(
                "halfspace enumeration is only available up to dimension {ENUMERATION_MAX_DIM}; \
                 supply halfspaces for dimension {dim}"
            )));
        }
        let gens = to_vectors(generators, dim, "generators")?;
        let rows: Vec<Vec<f64>> = gens.iter().map(|v| v.to_vec()).collect();
        if rank(&rows, dim, 1e-10) < dim {
            return Err(Error::UnsupportedRepresentation(
                "generators span a proper subspace; supply halfspaces explicitly".into(),
            ));
        }
        let normals = extreme_rays(&rows, dim).expect("dimension checked");
        if normals.is_empty() {
            return Err(Error::InvalidCone(
                "generators do not span a pointed cone".into(),
            ));
        }
        Self::new(normals, Some(rows))
    }

    fn is_nontrivial_by_lp(&self) -> bool {
        // Pointed cone: x ≠ 0 in C iff A x ≥ 0 with 1ᵀA x = 1 is feasible.
        let mut p = LpProblem::new(vec![0.0; self.dim]);
        for a in &self.halfspaces {
            p.geq(a.to_vec(), 0.0);
        }
        let sum: Vec<f64> = (0..self.dim)
            .map(|j| self.halfspaces.iter().map(|a| a[j]).sum())
            .collect();
        p.equal(sum, 1.0);
        solve_lp(&p).map(|r| r.is_optimal()).unwrap_or(false)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> ConeKind {
        self.kind
    }

    pub fn halfspaces(&self) -> &[Vector] {
        &self.halfspaces
    }

    pub fn generators(&self) -> Option<&[Vector]> {
        self.generators.as_deref()
    }

    pub fn is_orthant(&self) -> bool {
        matches!(
            self.kind,
            ConeKind::Coordinate | ConeKind::WeightedCoordinate
        )
    }

    pub(crate) fn require_generators(&self) -> Result<&[Vector]> {
        self.generators().ok_or_else(|| {
            Error::UnsupportedRepresentation(format!(
                "generators are required for this operation in dimension {}",
                self.dim
            ))
        })
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        check_dim(self.dim, x.len())?;
        check_finite(x)
    }

    /// `⟨a_k, x⟩` for every halfspace.
    pub fn halfspace_values(&self, x: &[f64]) -> Vec<f64> {
        self.halfspaces.iter().map(|a| dot(a, x)).collect()
    }

    /// `⟨a_k, x⟩ ≥ -tol` for every halfspace.
    pub fn contains(&self, x: &[f64], tol: f64) -> Result<bool> {
        self.check_point(x)?;
        Ok(self.halfspaces.iter().all(|a| dot(a, x) >= -tol))
    }

    /// Cone order `x ≤_C y ⟺ y - x ∈ C`.
    pub fn leq(&self, x: &[f64], y: &[f64], tol: f64) -> Result<bool> {
        self.check_point(x)?;
        self.check_point(y)?;
        let d: Vec<f64> = y.iter().zip(x).map(|(a, b)| a - b).collect();
        self.contains(&d, tol)
    }

    /// Strict halfspace test; in finite dimension the nonsupport points of a
    /// cone are exactly its interior.
    pub fn interior_contains(&self, x: &[f64]) -> Result<bool> {
        self.interior_contains_with(x, Tolerances::default().interior_margin)
    }

    pub fn interior_contains_with(&self, x: &[f64], margin: f64) -> Result<bool> {
        self.check_point(x)?;
        Ok(self.halfspaces.iter().all(|a| dot(a, x) > margin))
    }

    /// The cone of positive functionals `C* = {f : ⟨f, x⟩ ≥ 0 ∀ x ∈ C}`.
    /// Its halfspaces are the generators of `self`, its generators the
    /// halfspace normals of `self`.
    pub fn dual(&self) -> Result<PolyhedralCone> {
        if self.is_orthant() {
            return Self::coordinate(self.dim);
        }
        let gens = self.require_generators()?;
        let h: Vec<Vec<f64>> = gens.iter().map(|g| g.to_vec()).collect();
        let g: Vec<Vec<f64>> = self.halfspaces.iter().map(|a| a.to_vec()).collect();
        Self::new(h, Some(g)).map_err(|e| match e {
            Error::InvalidCone(m) => {
                Error::InvalidCone(format!("dual cone is not an ordering cone: {m}"))
            }
            other => other,
        })
    }

    /// `⟨f, g⟩ > 0` for every generator `g`, i.e. `f` is positive on `C \ {0}`.
    pub fn is_strictly_positive(&self, f: &[f64]) -> Result<bool> {
        self.check_point(f)?;
        let margin = Tolerances::default().interior_margin;
        Ok(self
            .require_generators()?
            .iter()
            .all(|g| dot(f, g) > margin))
    }
}
