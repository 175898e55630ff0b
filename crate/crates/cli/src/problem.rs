//! Problem files: one JSON object with a version tag, an optional ambient
//! norm, a cone and exactly one program block. Unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use conegen::duality::{AffineMap, BoxProgram, QuadraticForm};
use conegen::{AmbientNorm, NormKind, PolyhedralCone, Vector};

use crate::InputError;

pub const PROBLEM_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<NormSpec>,
    pub cone: ConeSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauge: Option<GaugeBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalarize: Option<ScalarizeBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub penalty: Option<PenaltyBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimal: Option<MinimalBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duality: Option<DualityBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certify: Option<CertifyBlock>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormSpec {
    /// `"1"`, `"2"` or `"inf"`.
    pub p: NormKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ConeSpec {
    Coordinate {
        dim: usize,
    },
    WeightedCoordinate {
        weights: Vec<f64>,
    },
    General {
        halfspaces: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<Vec<f64>>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeBlock {
    pub u: Vec<f64>,
    /// Second generating element for the equivalence constant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalarizeBlock {
    pub e: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PenaltyBlock {
    pub points: Vec<Vec<f64>>,
    pub feasible: Vec<bool>,
    pub values: Vec<Vec<f64>>,
    pub e: Vec<f64>,
    /// Declared cone-Lipschitz rank; must dominate the measured one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MinimalBlock {
    pub values: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectiveSpec {
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    pub q_mat: Option<Vec<Vec<f64>>>,
    pub q: Vec<f64>,
    #[serde(default)]
    pub c: f64,
}

/// `min ½x'Qx + q'x + c` s.t. `Gx + g0 ∈ -C`, `Hx + h0 = 0`, `xa ≤ x ≤ xb`,
/// with `C` the file's cone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualityBlock {
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    pub q_mat: Option<Vec<Vec<f64>>>,
    pub q: Vec<f64>,
    #[serde(default)]
    pub c: f64,
    #[serde(rename = "G")]
    pub g: Vec<Vec<f64>>,
    pub g0: Vec<f64>,
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h0: Option<Vec<f64>>,
    pub xa: Vec<f64>,
    pub xb: Vec<f64>,
    pub e: Vec<f64>,
}

/// Objectives `F_1..F_m` on the box `[xa, xb]`, ordered by the file's cone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifyBlock {
    pub objectives: Vec<ObjectiveSpec>,
    pub xa: Vec<f64>,
    pub xb: Vec<f64>,
    pub e: Vec<f64>,
}

/// Name of the program block a file carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    Gauge,
    Scalarize,
    Penalty,
    Minimal,
    Duality,
    Certify,
}

impl BlockKind {
    pub fn key(self) -> &'static str {
        match self {
            Self::Gauge => "gauge",
            Self::Scalarize => "scalarize",
            Self::Penalty => "penalty",
            Self::Minimal => "minimal",
            Self::Duality => "duality",
            Self::Certify => "certify",
        }
    }
}

fn check_len(key: &str, found: usize, expected: usize, what: &str) -> Result<(), InputError> {
    if found == expected {
        Ok(())
    } else {
        Err(InputError::Schema(format!(
            "{key}: expected {expected} entries ({what}), found {found}"
        )))
    }
}

fn check_rows(key: &str, rows: &[Vec<f64>], cols: usize, what: &str) -> Result<(), InputError> {
    for (i, r) in rows.iter().enumerate() {
        check_len(&format!("{key}[{i}]"), r.len(), cols, what)?;
    }
    Ok(())
}

impl ProblemFile {
    /// Parses and validates; diagnostics name the offending key.
    pub fn from_json(text: &str) -> Result<Self, InputError> {
        let p: ProblemFile =
            serde_json::from_str(text).map_err(|e| InputError::Schema(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn block(&self) -> BlockKind {
        self.blocks()[0]
    }

    fn blocks(&self) -> Vec<BlockKind> {
        let mut out = Vec::new();
        if self.gauge.is_some() {
            out.push(BlockKind::Gauge);
        }
        if self.scalarize.is_some() {
            out.push(BlockKind::Scalarize);
        }
        if self.penalty.is_some() {
            out.push(BlockKind::Penalty);
        }
        if self.minimal.is_some() {
            out.push(BlockKind::Minimal);
        }
        if self.duality.is_some() {
            out.push(BlockKind::Duality);
        }
        if self.certify.is_some() {
            out.push(BlockKind::Certify);
        }
        out
    }

    /// Structural checks that do not need any numerics beyond cone
    /// construction: version, block count, dimensions.
    pub fn validate(&self) -> Result<(), InputError> {
        if self.version != PROBLEM_VERSION {
            return Err(InputError::Schema(format!(
                "version: unsupported value {}, expected {PROBLEM_VERSION}",
                self.version
            )));
        }
        let blocks = self.blocks();
        if blocks.len() != 1 {
            let names: Vec<&str> = blocks.iter().map(|b| b.key()).collect();
            return Err(InputError::Schema(format!(
                "exactly one of gauge/scalarize/penalty/minimal/duality/certify must be present, found [{}]",
                names.join(", ")
            )));
        }
        let cone = self.cone()?;
        let n = cone.dim();
        if let Some(ns) = &self.norm {
            AmbientNorm::new(ns.p, ns.weights.clone())
                .map_err(|e| InputError::Schema(format!("norm: {e}")))?;
        }
        match blocks[0] {
            BlockKind::Gauge => {
                let b = self.gauge.as_ref().expect("present");
                check_len("gauge.u", b.u.len(), n, "cone dimension")?;
                if let Some(v) = &b.v {
                    check_len("gauge.v", v.len(), n, "cone dimension")?;
                }
            }
            BlockKind::Scalarize => check_len(
                "scalarize.e",
                self.scalarize.as_ref().expect("present").e.len(),
                n,
                "cone dimension",
            )?,
            BlockKind::Penalty => {
                let b = self.penalty.as_ref().expect("present");
                let d = b.points.first().map_or(0, |p| p.len());
                check_rows("penalty.points", &b.points, d, "ground-set dimension")?;
                check_len(
                    "penalty.feasible",
                    b.feasible.len(),
                    b.points.len(),
                    "one flag per point",
                )?;
                check_len(
                    "penalty.values",
                    b.values.len(),
                    b.points.len(),
                    "one value per point",
                )?;
                check_rows("penalty.values", &b.values, n, "cone dimension")?;
                check_len("penalty.e", b.e.len(), n, "cone dimension")?;
            }
            BlockKind::Minimal => check_rows(
                "minimal.values",
                &self.minimal.as_ref().expect("present").values,
                n,
                "cone dimension",
            )?,
            BlockKind::Duality => {
                let b = self.duality.as_ref().expect("present");
                let dim = b.q.len();
                if let Some(q) = &b.q_mat {
                    check_len("duality.Q", q.len(), dim, "length of q")?;
                    check_rows("duality.Q", q, dim, "length of q")?;
                }
                check_len("duality.G", b.g.len(), n, "cone dimension")?;
                check_rows("duality.G", &b.g, dim, "length of q")?;
                check_len("duality.g0", b.g0.len(), n, "cone dimension")?;
                match (&b.h, &b.h0) {
                    (Some(h), Some(h0)) => {
                        check_rows("duality.H", h, dim, "length of q")?;
                        check_len("duality.h0", h0.len(), h.len(), "rows of H")?;
                    }
                    (None, None) => {}
                    _ => {
                        return Err(InputError::Schema(
                            "duality: H and h0 must be given together".into(),
                        ))
                    }
                }
                check_len("duality.xa", b.xa.len(), dim, "length of q")?;
                check_len("duality.xb", b.xb.len(), dim, "length of q")?;
                check_len("duality.e", b.e.len(), n, "cone dimension")?;
            }
            BlockKind::Certify => {
                let b = self.certify.as_ref().expect("present");
                check_len(
                    "certify.objectives",
                    b.objectives.len(),
                    n,
                    "cone dimension",
                )?;
                let dim = b.xa.len();
                for (i, f) in b.objectives.iter().enumerate() {
                    check_len(
                        &format!("certify.objectives[{i}].q"),
                        f.q.len(),
                        dim,
                        "length of xa",
                    )?;
                }
                check_len("certify.xb", b.xb.len(), dim, "length of xa")?;
                check_len("certify.e", b.e.len(), n, "cone dimension")?;
            }
        }
        Ok(())
    }

    pub fn cone(&self) -> Result<PolyhedralCone, InputError> {
        let r = match &self.cone {
            ConeSpec::Coordinate { dim } => PolyhedralCone::coordinate(*dim),
            ConeSpec::WeightedCoordinate { weights } => {
                PolyhedralCone::weighted_coordinate(weights)
            }
            ConeSpec::General {
                halfspaces,
                generators,
            } => PolyhedralCone::new(halfspaces.clone(), generators.clone()),
        };
        r.map_err(|e| InputError::Schema(format!("cone: {e}")))
    }

    pub fn norm(&self) -> AmbientNorm {
        match &self.norm {
            Some(ns) => AmbientNorm::new(ns.p, ns.weights.clone()).expect("validated"),
            None => AmbientNorm::euclidean(),
        }
    }
}

pub fn parse_problem(path: &Path) -> Result<ProblemFile, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError::Io(format!("{}: {e}", path.display())))?;
    ProblemFile::from_json(&text).map_err(|e| match e {
        InputError::Schema(m) => InputError::Schema(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn objective(spec: &ObjectiveSpec) -> conegen::Result<QuadraticForm> {
    match &spec.q_mat {
        Some(q) => QuadraticForm::new(q.clone(), spec.q.clone(), spec.c),
        None => QuadraticForm::affine(spec.q.clone(), spec.c),
    }
}

impl DualityBlock {
    pub fn program(&self, cone: PolyhedralCone) -> conegen::Result<BoxProgram> {
        let n = self.q.len();
        let f = objective(&ObjectiveSpec {
            q_mat: self.q_mat.clone(),
            q: self.q.clone(),
            c: self.c,
        })?;
        let mut prog = BoxProgram::new(f, self.xa.clone(), self.xb.clone())?
            .with_inequalities(AffineMap::new(self.g.clone(), self.g0.clone(), n)?, cone)?;
        if let (Some(h), Some(h0)) = (&self.h, &self.h0) {
            prog = prog.with_equalities(AffineMap::new(h.clone(), h0.clone(), n)?)?;
        }
        Ok(prog)
    }
}

/// Vectors of a block as library vectors.
pub fn vectors(rows: &[Vec<f64>]) -> conegen::Result<Vec<Vector>> {
    rows.iter().map(|r| Vector::from_slice(r)).collect()
}

/// Polytope files: a bare vertex array or `{"vertices": [...]}`.
pub fn parse_polytope(path: &Path) -> Result<Vec<Vec<f64>>, InputError> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Wrapped {
        vertices: Vec<Vec<f64>>,
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError::Io(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| InputError::Schema(format!("{}: {e}", path.display())))?;
    let parsed = if value.is_array() {
        serde_json::from_value::<Vec<Vec<f64>>>(value)
    } else {
        serde_json::from_value::<Wrapped>(value).map(|w| w.vertices)
    };
    parsed.map_err(|e| InputError::Schema(format!("{}: {e}", path.display())))
}
