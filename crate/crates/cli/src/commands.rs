//! One handler per subcommand. Each returns the report body, whether it
//! passed its own verification, and a one-line human summary.

use std::path::Path;

use conegen::duality::{
    duality_gap_report, stationarity_certificate, torsion_demo, vi_demo, CertificateOutcome,
};
use conegen::gauge::equivalence_constant;
use conegen::lattice::{
    hausdorff_distance_with, verify_order_isometry, DEFAULT_SAMPLES, DEFAULT_SEED,
};
use conegen::penalty::{cone_minimal_points, PenaltyInstance};
use conegen::{AmbientNorm, Execution, ExtendedReal, GaugeBody, GerstewitzFn, Tolerances, Vector};

use crate::problem::{objective, parse_polytope, parse_problem, vectors, ProblemFile};
use crate::report::{
    CertifyReport, EquivalenceReport, GaugeReport, HausdorffReport, MinimalReport, ReportBody,
    ScalarizeReport, SubdiffReport,
};
use crate::{Command, Demo, InputError};

pub type Outcome = (ReportBody, bool, String);

pub fn parse_point(raw: &str, dim: usize) -> Result<Vec<f64>, InputError> {
    let x: Vec<f64> = raw
        .trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| {
                    InputError::Argument(format!("--point: {s:?} is not a finite number"))
                })
        })
        .collect::<Result<_, _>>()?;
    if x.len() != dim {
        return Err(InputError::Argument(format!(
            "--point: expected {dim} coordinates, found {}",
            x.len()
        )));
    }
    Ok(x)
}

fn need<'a, T>(
    block: Option<&'a T>,
    p: &ProblemFile,
    command: &str,
    key: &str,
) -> Result<&'a T, InputError> {
    block.ok_or_else(|| {
        InputError::Schema(format!(
            "`{command}` needs a `{key}` block; the file carries `{}`",
            p.block().key()
        ))
    })
}

fn norm_for(p: &ProblemFile, dim: usize) -> Result<AmbientNorm, InputError> {
    let norm = p.norm();
    match &norm.weights {
        Some(w) if w.len() != dim => Err(InputError::Schema(format!(
            "norm.weights: expected {dim} entries (dimension of the normed space), found {}",
            w.len()
        ))),
        _ => Ok(norm),
    }
}

fn agree(a: ExtendedReal, b: ExtendedReal) -> bool {
    match (a, b) {
        (ExtendedReal::Finite(x), ExtendedReal::Finite(y)) => {
            (x - y).abs() <= 1e-9 * (1.0 + x.abs())
        }
        _ => a == b,
    }
}

pub fn execute(cmd: &Command, tols: &Tolerances) -> Result<Outcome, InputError> {
    match cmd {
        Command::Gauge(a) => gauge(&a.problem, &a.point),
        Command::Scalarize(a) => scalarize(&a.problem, &a.point, tols),
        Command::Subdiff(a) => subdiff(&a.problem, &a.point),
        Command::Penalize { problem, l } => penalize(problem, *l, tols),
        Command::Minimal(a) => minimal(&a.problem, tols),
        Command::Duality(a) => duality(&a.problem, tols),
        Command::Certify(a) => certify(&a.problem, &a.point, tols),
        Command::Hausdorff { a, b, grid, seed } => hausdorff(a, b, *grid, *seed),
        Command::Demo(Demo::Torsion { grid, load }) => {
            let r = torsion_demo(*grid, *load, tols)?;
            let s = format!(
                "torsion: value {:.12} vs oracle {:.12} (error {:.1e})",
                r.value, r.oracle_value, r.abs_error
            );
            Ok((ReportBody::DemoTorsion(r.clone()), r.passed, s))
        }
        Command::Demo(Demo::Vi { seed, dim }) => {
            let r = vi_demo(*seed, *dim, tols)?;
            let s = format!(
                "vi: certificate {}, min linearized gap {:.3e}",
                if r.certificate_verified {
                    "verified"
                } else {
                    "not verified"
                },
                r.vi_min
            );
            Ok((ReportBody::DemoVi(r.clone()), r.passed, s))
        }
    }
}

fn gauge(path: &Path, point: &str) -> Result<Outcome, InputError> {
    let p = parse_problem(path)?;
    let b = need(p.gauge.as_ref(), &p, "gauge", "gauge")?;
    let cone = p.cone()?;
    let x = parse_point(point, cone.dim())?;
    let norm = norm_for(&p, cone.dim())?;
    let u = Vector::from_slice(&b.u)?;
    let body = GaugeBody::new(cone.clone(), u.clone())?;
    let g = body.gauge(&x)?;
    let g_lp = body.gauge_lp(&x)?;
    let paths_agree = agree(g, g_lp);
    let isometry = if body.has_closed_form() {
        Some(body.isometry(&x)?.into_inner())
    } else {
        None
    };
    let equivalence = match &b.v {
        Some(v) => {
            let v = Vector::from_slice(v)?;
            let c = equivalence_constant(&cone, &u, &v)?;
            let gv = GaugeBody::new(cone.clone(), v.clone())?.gauge(&x)?.to_f64();
            let gu = g.to_f64();
            let slack = 1e-9 * (1.0 + gu.abs() + gv.abs());
            Some(EquivalenceReport {
                v: v.into_inner(),
                constant: c,
                gauge_v: gv,
                sandwich_holds: gu / c <= gv + slack && gv <= c * gu + slack,
            })
        }
        None => None,
    };
    let passed = paths_agree && equivalence.as_ref().is_none_or(|e| e.sandwich_holds);
    let summary = format!(
        "gauge: |x|_u = {g}{}{}",
        if paths_agree {
            ""
        } else {
            " (LP path disagrees)"
        },
        equivalence.as_ref().map_or(String::new(), |e| format!(
            ", |x|_v = {}, c = {}",
            e.gauge_v, e.constant
        ))
    );
    let report = GaugeReport {
        point: x.clone(),
        u: b.u.clone(),
        closed_form: body.has_closed_form(),
        gauge: g,
        gauge_lp: g_lp,
        paths_agree,
        isometry,
        ambient_norm: norm.norm(&x),
        dominance_gap: body.dominance_gap(&norm, &x)?,
        equivalence,
    };
    Ok((ReportBody::Gauge(report), passed, summary))
}

fn scalarization(p: &ProblemFile, command: &str) -> Result<GerstewitzFn, InputError> {
    let b = need(p.scalarize.as_ref(), p, command, "scalarize")?;
    Ok(GerstewitzFn::new(p.cone()?, Vector::from_slice(&b.e)?)?)
}

fn scalarize(path: &Path, point: &str, tols: &Tolerances) -> Result<Outcome, InputError> {
    let p = parse_problem(path)?;
    let phi = scalarization(&p, "scalarize")?;
    let y = parse_point(point, phi.cone().dim())?;
    let value = phi.value(&y)?;
    let value_lp = phi.value_via_lp(&y)?;
    let paths_agree = agree(value, value_lp);
    let neg: Vec<f64> = y.iter().map(|v| -v).collect();
    let in_negative_cone = phi.cone().contains(&neg, tols.membership)?;
    // φ(y) ≤ 0 ⟺ y ∈ -C, checked away from the boundary
    let consistent = match value {
        ExtendedReal::Finite(v)
            if v.abs() > tols.membership * (1.0 + y.iter().map(|a| a.abs()).sum::<f64>()) =>
        {
            (v <= 0.0) == in_negative_cone
        }
        _ => true,
    };
    let summary = format!(
        "scalarize: phi(y) = {value}{}",
        if in_negative_cone { ", y in -C" } else { "" }
    );
    let report = ScalarizeReport {
        point: y,
        e: phi.e().to_vec(),
        interior: phi.is_interior(),
        value,
        value_lp,
        paths_agree,
        in_negative_cone,
    };
    Ok((
        ReportBody::Scalarize(report),
        paths_agree && consistent,
        summary,
    ))
}

fn subdiff(path: &Path, point: &str) -> Result<Outcome, InputError> {
    let p = parse_problem(path)?;
    let phi = scalarization(&p, "subdiff")?;
    let y = parse_point(point, phi.cone().dim())?;
    let sub = phi.subdifferential(&y)?;
    let vertices: Option<Vec<Vec<f64>>> = sub
        .vertices
        .as_ref()
        .map(|v| v.iter().map(|x| x.to_vec()).collect());
    let mut verified = true;
    for ys in vertices
        .iter()
        .flatten()
        .chain(std::iter::once(&sub.element.to_vec()))
    {
        let scale = 1.0
            + ys.iter().map(|a| a.abs()).sum::<f64>()
                * (1.0 + y.iter().map(|a| a.abs()).sum::<f64>());
        verified &= sub.contains(ys, 1e-9 * scale)?;
    }
    let summary = format!(
        "subdiff: phi(y) = {}, {} subgradient(s){}",
        sub.value,
        vertices.as_ref().map_or(1, |v| v.len()),
        if sub.is_exact() {
            " (exact vertex list)"
        } else {
            " (one element)"
        }
    );
    let report = SubdiffReport {
        point: y,
        value: sub.value,
        exact: sub.is_exact(),
        element: sub.element.to_vec(),
        vertices,
        verified,
    };
    Ok((ReportBody::Subdiff(report), verified, summary))
}

fn penalize(path: &Path, l: Option<f64>, tols: &Tolerances) -> Result<Outcome, InputError> {
    let p = parse_problem(path)?;
    let b = need(p.penalty.as_ref(), &p, "penalize", "penalty")?;
    let d = b.points.first().map_or(0, |x| x.len());
    let inst = PenaltyInstance::new(
        vectors(&b.points)?,
        vectors(&b.values)?,
        b.feasible.clone(),
        p.cone()?,
        Vector::from_slice(&b.e)?,
        norm_for(&p, d)?,
        b.rank,
    )?;
    let l = l.unwrap_or(1.1 * inst.rank() + 10.0 * tols.rank_margin);
    let r = inst.verify_equivalence(l, tols, Execution::default())?;
    let passed = r.equal && r.inclusion_at_rank;
    let summary = format!(
        "penalize: L = {l}, rank = {}, {} constrained vs {} penalized minimal points, sets {}",
        r.rank,
        r.minimal_constrained.len(),
        r.minimal_penalized.len(),
        if r.equal { "equal" } else { "differ" }
    );
    Ok((ReportBody::Penalize(r), passed, summary))
}

fn minimal(path: &Path, tols: &Tolerances) -> Result<Outcome, InputError> {
    let p = parse_problem(path)?;
    let b = need(p.minimal.as_ref(), &p, "minimal", "minimal")?;
    let values = vectors(&b.values)?;
    let idx = cone_minimal_points(
        &values,
        &p.cone()?,
        tols.membership,
        tols.strict_norm,
        Execution::default(),
    )?;
    let summary = format!(
        "minimal: {} of {} values are minimal",
        idx.len(),
        values.len()
    );
    let report = MinimalReport {
        values: idx.iter().map(|&i| b.values[i].clone()).collect(),
        indices: idx,
    };
    Ok((ReportBody::Minimal(report), true, summary))
}

fn duality(path: &Path, tols: &Tolerances) -> Result<Outcome, InputError> {
    let p = parse_problem(path)?;
    let b = need(p.duality.as_ref(), &p, "duality", "duality")?;
    let prog = b.program(p.cone()?)?;
    let r = duality_gap_report(&prog, &b.e, tols)?;
    let summary = format!(
        "duality: primal {}, dual {}, gap {} ({}; Slater {})",
        r.primal,
        r.dual,
        r.gap,
        if r.asserted {
            "asserted"
        } else {
            "reported only"
        },
        if r.slater.holds { "holds" } else { "fails" }
    );
    Ok((ReportBody::Duality(r.clone()), r.passed, summary))
}

fn certify(path: &Path, point: &str, tols: &Tolerances) -> Result<Outcome, InputError> {
    let p = parse_problem(path)?;
    let b = need(p.certify.as_ref(), &p, "certify", "certify")?;
    let cone = p.cone()?;
    let objectives = b
        .objectives
        .iter()
        .map(objective)
        .collect::<conegen::Result<Vec<_>>>()?;
    let x = parse_point(point, b.xa.len())?;
    let outcome = stationarity_certificate(
        &objectives,
        &cone,
        &b.e,
        &b.xa,
        &b.xb,
        &x,
        tols.stationarity,
    )?;
    let verified = match &outcome {
        CertificateOutcome::Certificate(c) => {
            Some(c.verify(&objectives, &cone, &b.e, &b.xa, &b.xb, 1e-8)?)
        }
        CertificateOutcome::Refusal(_) => None,
    };
    let summary = match (&outcome, verified) {
        (CertificateOutcome::Certificate(c), Some(true)) => {
            format!("certify: stationary, y* = {:?}", c.ystar)
        }
        (CertificateOutcome::Certificate(_), _) => {
            "certify: certificate failed its re-check".to_string()
        }
        (CertificateOutcome::Refusal(r), _) => format!("certify: refused ({})", r.reason),
    };
    let passed = verified != Some(false);
    Ok((
        ReportBody::Certify(CertifyReport { outcome, verified }),
        passed,
        summary,
    ))
}

fn hausdorff(
    a: &Path,
    b: &Path,
    grid: Option<usize>,
    seed: Option<u64>,
) -> Result<Outcome, InputError> {
    let pa = parse_polytope(a)?;
    let pb = parse_polytope(b)?;
    let distance = hausdorff_distance_with(
        &pa,
        &pb,
        grid.unwrap_or(DEFAULT_SAMPLES),
        seed.unwrap_or(DEFAULT_SEED),
        Execution::default(),
    )?;
    let isometry = verify_order_isometry(&pa, &pb)?;
    let passed = isometry.isometry_holds && isometry.order_preserved;
    let summary = format!(
        "hausdorff: d = {} ({:?} mode, direction {:?}), definitional {}",
        distance.distance, distance.mode, distance.direction, isometry.hausdorff
    );
    Ok((
        ReportBody::Hausdorff(HausdorffReport { distance, isometry }),
        passed,
        summary,
    ))
}
