//! Exit gate: one PASS/FAIL line per acceptance criterion, each checked
//! against independent oracles with pinned tolerances and a runtime limit.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use conegen::duality::{
    dual_value, duality_gap_report, lagrangian_value, solve_primal, stationarity_certificate,
    torsion_demo, vi_demo, BoxProgram, CertificateOutcome, Multipliers, StationarityCertificate,
};
use conegen::gauge::{equivalence_constant, linfty_isometry};
use conegen::instances::{
    random_certificate_instance, random_cone, random_duality_instance, random_penalty_instance,
    random_polytope_2d, rng, CertificateInstance,
};
use conegen::lattice::{
    convex_hull_2d, direction_grid, hausdorff_definitional, hausdorff_distance, lattice_join,
    verify_order_isometry, SupportSample,
};
use conegen::vector::{dot, norm2, norm_inf};
use conegen::{Execution, GaugeBody, GerstewitzFn, PolyhedralCone, Tolerances, Vector};
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn vecu(x: Vec<f64>) -> Vector {
    Vector::new(x).expect("finite")
}

fn finite(v: conegen::ExtendedReal) -> f64 {
    v.finite().expect("finite value")
}

/// Strictly positive combination of the generators: an interior point.
fn interior_point<R: Rng>(rng: &mut R, cone: &PolyhedralCone) -> Vec<f64> {
    let gens = cone.generators().expect("generators");
    let mut out = vec![0.0; cone.dim()];
    for g in gens {
        let t = rng.gen_range(0.05..2.0);
        for (o, x) in out.iter_mut().zip(g.as_slice()) {
            *o += t * x;
        }
    }
    out
}

fn gauge_isometry() -> Outcome {
    let mut r = rng(1);
    let (mut iso_err, mut lp_err) = (0.0f64, 0.0f64);
    for _ in 0..500 {
        let n = r.gen_range(1..=20);
        let u: Vec<f64> = (0..n).map(|_| r.gen_range(0.05..3.0)).collect();
        let x: Vec<f64> = (0..n).map(|_| r.gen_range(-5.0..5.0)).collect();
        let body = GaugeBody::new(PolyhedralCone::coordinate(n).unwrap(), vecu(u.clone())).unwrap();
        let g = finite(body.gauge(&x).unwrap());
        iso_err = iso_err.max((norm_inf(&linfty_isometry(&u, &x).unwrap()) - g).abs());
        lp_err = lp_err.max((finite(body.gauge_lp(&x).unwrap()) - g).abs());
    }
    ensure(iso_err <= 1e-12, || format!("isometry error {iso_err:e}"))?;
    ensure(lp_err <= 1e-9, || format!("LP vs closed form {lp_err:e}"))?;
    for n in 1..=20usize {
        let u: Vec<f64> = (1..=n).map(|i| 0.5f64.powi(i as i32)).collect();
        let body = GaugeBody::new(PolyhedralCone::coordinate(n).unwrap(), vecu(u.clone())).unwrap();
        for signs in [0u32, 0b1010_1010_1010_1010_1010, u32::MAX] {
            let x: Vec<f64> = u
                .iter()
                .enumerate()
                .map(|(i, v)| if signs >> i & 1 == 1 { -v } else { *v })
                .collect();
            let g = finite(body.gauge(&x).unwrap());
            ensure(g == 1.0, || format!("n={n}: signed halves have gauge {g}"))?;
        }
        for k in 1..=n {
            let g = finite(body.gauge(Vector::basis(n, k - 1).as_slice()).unwrap());
            ensure(g == 2f64.powi(k as i32), || {
                format!("n={n}: gauge of e_{k} is {g}")
            })?;
        }
    }
    Ok(format!(
        "500 instances, isometry error {iso_err:.1e}, LP error {lp_err:.1e}, dyadic examples exact"
    ))
}

fn equivalence_sandwich() -> Outcome {
    let mut r = rng(2);
    let mut worst_slack = 0.0f64;
    let mut worst_tight = 0.0f64;
    for i in 0..200 {
        let dim = r.gen_range(1..=4);
        let (cone, _) = random_cone(&mut r, dim).unwrap();
        let cone = if i % 4 == 0 {
            PolyhedralCone::coordinate(r.gen_range(1..=8)).unwrap()
        } else {
            cone
        };
        let u = interior_point(&mut r, &cone);
        let v = interior_point(&mut r, &cone);
        let c = equivalence_constant(&cone, &vecu(u.clone()), &vecu(v.clone())).unwrap();
        let bu = GaugeBody::new(cone.clone(), vecu(u.clone())).unwrap();
        let bv = GaugeBody::new(cone.clone(), vecu(v.clone())).unwrap();
        for _ in 0..100 {
            let x: Vec<f64> = (0..cone.dim()).map(|_| r.gen_range(-4.0..4.0)).collect();
            let (nu, nv) = (finite(bu.gauge(&x).unwrap()), finite(bv.gauge(&x).unwrap()));
            let slack = (nu / c - nv).max(nv - c * nu);
            worst_slack = worst_slack.max(slack);
            ensure(slack <= 1e-9, || {
                format!("pair {i}: sandwich broken by {slack:e} (c = {c})")
            })?;
        }
        // the constant is attained on one of the generating elements
        let at_v = (finite(bu.gauge(&v).unwrap()) / c - 1.0).abs();
        let at_u = (finite(bv.gauge(&u).unwrap()) - c).abs();
        let tight = at_v.min(at_u);
        worst_tight = worst_tight.max(tight);
        ensure(tight <= 1e-9, || {
            format!("pair {i}: constant {c} not attained (gaps {at_v:e}, {at_u:e})")
        })?;
    }
    Ok(format!(
        "200 pairs x 100 points, max slack {worst_slack:.1e}, max tightness gap {worst_tight:.1e}"
    ))
}

fn test_cones() -> Vec<(String, PolyhedralCone, Vec<f64>)> {
    let unit = |v: Vec<f64>| {
        let s = norm2(&v);
        v.into_iter().map(|x| x / s).collect::<Vec<_>>()
    };
    let mut out = vec![
        (
            "orthant R^2".to_string(),
            PolyhedralCone::coordinate(2).unwrap(),
            unit(vec![1.0, 2.0]),
        ),
        (
            "orthant R^5".to_string(),
            PolyhedralCone::coordinate(5).unwrap(),
            unit(vec![1.0, 0.5, 2.0, 1.0, 3.0]),
        ),
        (
            "weighted orthant R^3".to_string(),
            PolyhedralCone::weighted_coordinate(&[1.0, 2.0, 0.5]).unwrap(),
            unit(vec![1.0, 1.0, 1.0]),
        ),
        (
            "wedge R^2".to_string(),
            PolyhedralCone::from_generators(vec![vec![1.0, 0.2], vec![-0.3, 1.0]]).unwrap(),
            unit(vec![0.35, 0.6]),
        ),
        (
            "square cone R^3".to_string(),
            PolyhedralCone::from_generators(vec![
                vec![1.0, 0.0, 1.0],
                vec![0.0, 1.0, 1.0],
                vec![-1.0, 0.0, 1.0],
                vec![0.0, -1.0, 1.0],
            ])
            .unwrap(),
            unit(vec![0.1, 0.2, 1.0]),
        ),
    ];
    let mut r = rng(3);
    for k in 0..4 {
        let (cone, e) = random_cone(&mut r, 3).unwrap();
        out.push((format!("random cone R^3 #{k}"), cone, e));
    }
    out
}

fn gerstewitz_suite() -> Outcome {
    let mut r = rng(4);
    let mut vertices_checked = 0usize;
    let mut worst_fd = 0.0f64;
    for (name, cone, e) in test_cones() {
        let phi = GerstewitzFn::new(cone.clone(), vecu(e.clone())).unwrap();
        let n = cone.dim();
        let gens: Vec<Vec<f64>> = cone
            .generators()
            .unwrap()
            .iter()
            .map(|g| g.to_vec())
            .collect();
        let val = |y: &[f64]| finite(phi.value(y).unwrap());
        let rand_y = |r: &mut rand_chacha::ChaCha8Rng| -> Vec<f64> {
            (0..n).map(|_| r.gen_range(-3.0..3.0)).collect()
        };
        let in_cone = |r: &mut rand_chacha::ChaCha8Rng| -> Vec<f64> {
            let mut c = vec![0.0; n];
            for g in &gens {
                let t = if r.gen_bool(0.5) {
                    r.gen_range(0.0..2.0)
                } else {
                    0.0
                };
                for (ci, gi) in c.iter_mut().zip(g) {
                    *ci += t * gi;
                }
            }
            c
        };
        for i in 0..1000 {
            let y = rand_y(&mut r);
            let y2 = rand_y(&mut r);
            let fy = val(&y);
            let scale = 1.0 + norm2(&y);

            let s = r.gen_range(-3.0..3.0);
            let shifted: Vec<f64> = y.iter().zip(&e).map(|(a, b)| a + s * b).collect();
            ensure((val(&shifted) - fy - s).abs() <= 1e-9 * scale, || {
                format!("{name}: translation at sample {i}")
            })?;

            let c = in_cone(&mut r);
            let above: Vec<f64> = y.iter().zip(&c).map(|(a, b)| a + b).collect();
            ensure(fy <= val(&above) + 1e-9 * scale, || {
                format!("{name}: monotonicity at sample {i}")
            })?;

            let sum: Vec<f64> = y.iter().zip(&y2).map(|(a, b)| a + b).collect();
            ensure(val(&sum) <= fy + val(&y2) + 1e-9 * scale, || {
                format!("{name}: subadditivity at sample {i}")
            })?;
            let alpha = r.gen_range(0.0..5.0);
            let scaled: Vec<f64> = y.iter().map(|a| alpha * a).collect();
            ensure(
                (val(&scaled) - alpha * fy).abs() <= 1e-9 * scale * (1.0 + alpha),
                || format!("{name}: homogeneity at sample {i}"),
            )?;

            ensure(phi.sublevel(&y, fy, 1e-9).unwrap(), || {
                format!("{name}: y not in its own sublevel set")
            })?;
            ensure(!phi.sublevel(&y, fy - 1e-6, 1e-9).unwrap(), || {
                format!("{name}: sublevel set too large at {i}")
            })?;

            // y ∈ -C exactly for the negated cone element; random y decides by membership
            let neg: Vec<f64> = c.iter().map(|x| -x).collect();
            ensure(val(&neg) <= 1e-9 * (1.0 + norm2(&c)), || {
                format!("{name}: φ > 0 on -C at sample {i}")
            })?;
            let minus_y: Vec<f64> = y.iter().map(|x| -x).collect();
            if fy.abs() > 1e-7 {
                ensure(
                    (fy <= 0.0) == cone.contains(&minus_y, 1e-9).unwrap(),
                    || format!("{name}: nonpositivity mismatch at sample {i}"),
                )?;
            }

            // kinks: y = t e (all facets tie) and y = t e - s g (facets through g tie)
            let t = r.gen_range(-2.0..2.0);
            let probe = match i % 3 {
                0 => e.iter().map(|x| t * x).collect(),
                1 => {
                    let g = &gens[i % gens.len()];
                    e.iter().zip(g).map(|(a, b)| t * a - 0.7 * b).collect()
                }
                _ => y.clone(),
            };
            let fp = val(&probe);
            let sub = phi.subdifferential(&probe).unwrap();
            let verts: Vec<Vec<f64>> = match &sub.vertices {
                Some(v) => v.iter().map(|x| x.to_vec()).collect(),
                None => vec![sub.element.to_vec()],
            };
            for ys in &verts {
                let ps = 1.0 + norm2(ys);
                ensure(
                    gens.iter().all(|g| dot(g, ys) >= -1e-9 * norm2(g) * ps),
                    || format!("{name}: subgradient {ys:?} outside the dual cone"),
                )?;
                ensure((dot(ys, &e) - 1.0).abs() <= 1e-9 * ps, || {
                    format!("{name}: <y*, e> != 1 for {ys:?}")
                })?;
                ensure(
                    (dot(ys, &probe) - fp).abs() <= 1e-9 * ps * (1.0 + norm2(&probe)),
                    || format!("{name}: <y*, y> != φ(y) for {ys:?}"),
                )?;
            }
            vertices_checked += verts.len();

            let d: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
            let dd = finite(phi.directional_derivative(&probe, &d).unwrap());
            let fd = phi.difference_quotient(&probe, &d, 1e-5).unwrap();
            worst_fd = worst_fd.max((dd - fd).abs());
            ensure((dd - fd).abs() <= 1e-4, || {
                format!("{name}: φ'(y; d) = {dd} but difference quotient {fd}")
            })?;
        }
    }
    Ok(format!(
        "9 cones x 1000 samples, {vertices_checked} subgradients checked, max derivative gap {worst_fd:.1e}"
    ))
}

fn penalty_suite() -> Outcome {
    let tols = Tolerances::default();
    let mut sizes = 0usize;
    let mut sensitive = 0usize;
    for seed in 0..200 {
        let inst = random_penalty_instance(seed).unwrap();
        sizes += inst.points().len();
        let rep = inst
            .verify_equivalence(1.1 * inst.rank(), &tols, Execution::default())
            .unwrap();
        ensure(rep.equal, || {
            format!(
                "seed {seed}: constrained {:?} vs penalized {:?}",
                rep.minimal_constrained, rep.minimal_penalized
            )
        })?;
        ensure(rep.inclusion_at_rank, || {
            format!("seed {seed}: inclusion fails at L = rank")
        })?;
        sensitive += usize::from(rep.tol_sensitive);
    }
    Ok(format!("200 instances ({sizes} points), exact set equality, inclusion at rank; {sensitive} tolerance-sensitive"))
}

/// A multiplier with `y ∈ C*`, `x1, x2 ≥ 0`; `balanced` chooses the box
/// multipliers to cancel the linear part so the dual value is finite for
/// linear objectives too.
fn sample_multipliers<R: Rng>(r: &mut R, prog: &BoxProgram, balanced: bool) -> Multipliers {
    let n = prog.dim();
    let mut y = vec![0.0; prog.num_inequalities()];
    if let Some(cone) = prog.constraint_cone() {
        for a in cone.halfspaces() {
            let t = r.gen_range(0.0..2.0);
            for (yi, ai) in y.iter_mut().zip(a.as_slice()) {
                *yi += t * ai;
            }
        }
    }
    let z: Vec<f64> = (0..prog.num_equalities())
        .map(|_| r.gen_range(-2.0..2.0))
        .collect();
    let (x1, x2) = if balanced {
        let mut s = prog.objective().q.clone();
        if let Some(g) = prog.constraint_map() {
            for (si, v) in s.iter_mut().zip(g.adjoint(&y, n)) {
                *si += v;
            }
        }
        if let Some(h) = prog.equality_map() {
            for (si, v) in s.iter_mut().zip(h.adjoint(&z, n)) {
                *si += v;
            }
        }
        (
            s.iter().map(|v| v.max(0.0)).collect(),
            s.iter().map(|v| (-v).max(0.0)).collect(),
        )
    } else {
        (
            (0..n).map(|_| r.gen_range(0.0..2.0)).collect(),
            (0..n).map(|_| r.gen_range(0.0..2.0)).collect(),
        )
    };
    Multipliers { y, x1, x2, z }
}

fn duality_suite() -> Outcome {
    let tols = Tolerances::default();
    let mut r = rng(5);
    let mut worst_gap = 0.0f64;
    let mut samples = 0usize;
    for seed in 0..100 {
        let (prog, e) = random_duality_instance(seed).unwrap();
        let rep = duality_gap_report(&prog, &e, &tols).unwrap();
        ensure(rep.slater.holds, || {
            format!("seed {seed}: Slater point not detected")
        })?;
        let gap = rep
            .gap
            .finite()
            .ok_or_else(|| format!("seed {seed}: infinite gap"))?;
        worst_gap = worst_gap.max(gap.abs());
        ensure(gap.abs() <= 1e-5, || format!("seed {seed}: gap {gap:e}"))?;
        let primal = finite(rep.primal);
        // the primal point is feasible, so the Lagrangian there bounds every dual value
        ensure(prog.violation(&rep.x) <= 1e-9, || {
            format!("seed {seed}: primal point infeasible")
        })?;
        for k in 0..40 {
            let m = sample_multipliers(&mut r, &prog, k % 2 == 1);
            let dv = dual_value(&prog, &m).unwrap();
            let bound = lagrangian_value(&prog, &rep.x, &m).unwrap();
            samples += 1;
            if let Some(d) = dv.finite() {
                let tol = 1e-9 * (1.0 + primal.abs() + d.abs());
                ensure(d <= primal + tol, || {
                    format!("seed {seed}: dual {d} above primal {primal}")
                })?;
                ensure(d <= bound + tol, || {
                    format!("seed {seed}: dual {d} above Lagrangian {bound}")
                })?;
            }
        }
    }
    Ok(format!(
        "100 instances, max |gap| {worst_gap:.1e}, weak duality on {samples} sampled multipliers"
    ))
}

/// Re-checks a certificate from the raw data without library helpers.
fn recheck(
    inst: &CertificateInstance,
    c: &StationarityCertificate,
    x: &[f64],
    tol: f64,
) -> Result<(), String> {
    ensure(c.point.iter().zip(x).all(|(a, b)| a == b), || {
        "certificate is for another point".into()
    })?;
    let gens = inst.cone.generators().expect("generators");
    ensure(
        gens.iter()
            .all(|g| dot(g.as_slice(), &c.ystar) >= -tol * norm2(g.as_slice())),
        || format!("y* = {:?} outside the dual cone", c.ystar),
    )?;
    ensure((dot(&c.ystar, &inst.e) - 1.0).abs() <= tol, || {
        "<y*, e> != 1".into()
    })?;
    let n = x.len();
    let mut grad = vec![0.0; n];
    let mut scale = 1.0f64;
    for (f, &y) in inst.objectives.iter().zip(&c.ystar) {
        for (i, g) in grad.iter_mut().enumerate() {
            let gi = dot(&f.q_mat[i], x) + f.q[i];
            *g += y * gi;
            scale = scale.max(y.abs() * gi.abs());
        }
    }
    for i in 0..n {
        let nu = c.normal[i];
        ensure((grad[i] + nu).abs() <= tol * scale, || {
            format!("J'y* + ν != 0 in coordinate {i}")
        })?;
        let at_lo = x[i] <= inst.lower[i] + 1e-9;
        let at_hi = x[i] >= inst.upper[i] - 1e-9;
        let ok = match (at_lo, at_hi) {
            (true, true) => true,
            (true, false) => nu <= tol * scale,
            (false, true) => nu >= -tol * scale,
            (false, false) => nu.abs() <= tol * scale,
        };
        ensure(ok, || {
            format!("ν_{i} = {nu} is not a box normal at x_{i} = {}", x[i])
        })?;
    }
    Ok(())
}

fn certificate_suite() -> Outcome {
    let tols = Tolerances::default();
    let mut r = rng(6);
    let (mut issued, mut scalar, mut refused) = (0usize, 0usize, 0usize);
    for seed in 0..100 {
        let inst = random_certificate_instance(seed).unwrap();
        let (lo, hi) = (&inst.lower, &inst.upper);
        // every objective on its own is a scalar instance whose box minimizer must certify
        for f in &inst.objectives {
            let single = CertificateInstance {
                objectives: vec![f.clone()],
                cone: PolyhedralCone::coordinate(1).unwrap(),
                e: vec![1.0],
                lower: lo.clone(),
                upper: hi.clone(),
                weights: vec![1.0],
            };
            let sol =
                solve_primal(&BoxProgram::new(f.clone(), lo.clone(), hi.clone()).unwrap()).unwrap();
            ensure(sol.is_optimal(), || {
                format!("seed {seed}: scalar box minimization failed")
            })?;
            match stationarity_certificate(
                &single.objectives,
                &single.cone,
                &single.e,
                lo,
                hi,
                &sol.x,
                tols.stationarity,
            )
            .unwrap()
            {
                CertificateOutcome::Certificate(c) => {
                    recheck(&single, &c, &sol.x, 1e-8)
                        .map_err(|m| format!("seed {seed}: scalar {m}"))?;
                    scalar += 1;
                    issued += 1;
                }
                CertificateOutcome::Refusal(rf) => {
                    return Err(format!(
                        "seed {seed}: scalar minimizer refused: {}",
                        rf.reason
                    ))
                }
            }
        }
        let f = if inst.objectives.len() == 1 {
            inst.objectives[0].clone()
        } else {
            inst.weighted_objective().unwrap()
        };
        let sol = solve_primal(&BoxProgram::new(f, lo.clone(), hi.clone()).unwrap()).unwrap();
        ensure(sol.is_optimal(), || {
            format!("seed {seed}: box minimization failed")
        })?;
        let mut points = vec![(sol.x.clone(), true)];
        for _ in 0..3 {
            let p: Vec<f64> = lo
                .iter()
                .zip(hi)
                .map(|(a, b)| match r.gen_range(0..4) {
                    0 => *a,
                    1 => *b,
                    _ => r.gen_range(*a..*b),
                })
                .collect();
            points.push((p, false));
        }
        for (x, must_certify) in points {
            let out = stationarity_certificate(
                &inst.objectives,
                &inst.cone,
                &inst.e,
                lo,
                hi,
                &x,
                tols.stationarity,
            )
            .unwrap();
            match out {
                CertificateOutcome::Certificate(c) => {
                    recheck(&inst, &c, &x, 1e-8).map_err(|m| format!("seed {seed}: {m}"))?;
                    ensure(
                        c.verify(&inst.objectives, &inst.cone, &inst.e, lo, hi, 1e-8)
                            .unwrap(),
                        || format!("seed {seed}: library verification disagrees"),
                    )?;
                    issued += 1;
                }
                CertificateOutcome::Refusal(rf) => {
                    ensure(!must_certify, || {
                        format!("seed {seed}: minimizer refused: {}", rf.reason)
                    })?;
                    refused += 1;
                }
            }
        }
    }
    Ok(format!("100 instances, {issued} certificates rechecked (including {scalar} scalar minimizers), {refused} refusals"))
}

fn lattice_suite() -> Outcome {
    let mut r = rng(7);
    let mut worst = 0.0f64;
    let grid = direction_grid(2, 64, 0);
    for i in 0..200 {
        let a = random_polytope_2d(&mut r, 9);
        let b = random_polytope_2d(&mut r, 9);
        let c = random_polytope_2d(&mut r, 9);
        let h = hausdorff_distance(&a, &b).unwrap().distance;
        let d = hausdorff_definitional(&a, &b).unwrap();
        worst = worst.max((h - d).abs());
        ensure((h - d).abs() <= 1e-9, || {
            format!("pair {i}: support sup {h} vs definitional {d}")
        })?;
        let rep = verify_order_isometry(&a, &b).unwrap();
        ensure(rep.isometry_holds && rep.order_preserved, || {
            format!("pair {i}: order isometry report {rep:?}")
        })?;

        let ba = hausdorff_distance(&b, &a).unwrap().distance;
        ensure(h == ba, || format!("pair {i}: asymmetric {h} vs {ba}"))?;
        let bc = hausdorff_distance(&b, &c).unwrap().distance;
        let ac = hausdorff_distance(&a, &c).unwrap().distance;
        ensure(ac <= h + bc + 1e-9, || {
            format!("triple {i}: triangle inequality")
        })?;
        ensure(hausdorff_distance(&a, &a).unwrap().distance == 0.0, || {
            format!("polytope {i}: d(A, A) != 0")
        })?;

        let ha = SupportSample::from_polytope(&a, &grid).unwrap();
        let hb = SupportSample::from_polytope(&b, &grid).unwrap();
        let join = lattice_join(&ha, &hb).unwrap();
        let union: Vec<[f64; 2]> = a.iter().chain(&b).map(|v| [v[0], v[1]]).collect();
        let hull: Vec<Vec<f64>> = convex_hull_2d(&union).iter().map(|p| p.to_vec()).collect();
        let direct = SupportSample::from_polytope(&hull, &grid).unwrap();
        let err = join.sup_distance(&direct).unwrap();
        ensure(err <= 1e-12, || {
            format!("pair {i}: join differs from hull support by {err:e}")
        })?;
    }
    Ok(format!(
        "200 pairs, max Hörmander gap {worst:.1e}, metric axioms and join hull agreement"
    ))
}

fn demos() -> Outcome {
    let tols = Tolerances::default();
    let t = torsion_demo(12, 8.0, &tols).unwrap();
    ensure(t.abs_error <= 1e-6, || {
        format!("torsion value {} vs oracle {}", t.value, t.oracle_value)
    })?;
    let mut worst_vi = f64::INFINITY;
    for seed in 0..10 {
        let v = vi_demo(seed, 8, &tols).unwrap();
        ensure(v.certificate_verified && v.passed, || {
            format!("VI seed {seed}: certificate failed")
        })?;
        worst_vi = worst_vi.min(v.vi_min);
    }
    Ok(format!("torsion error {:.1e} at 12 nodes; 10 VI points certified (min linearized gap {worst_vi:.1e})", t.abs_error))
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "gauge and isometry suite",
            gauge_isometry,
            Duration::from_secs(10),
        ),
        (
            "norm equivalence suite",
            equivalence_sandwich,
            Duration::from_secs(10),
        ),
        (
            "scalarization suite",
            gerstewitz_suite,
            Duration::from_secs(20),
        ),
        (
            "exact penalty suite",
            penalty_suite,
            Duration::from_secs(60),
        ),
        ("duality suite", duality_suite, Duration::from_secs(120)),
        (
            "stationarity certificate suite",
            certificate_suite,
            Duration::from_secs(120),
        ),
        ("lattice suite", lattice_suite, Duration::from_secs(20)),
        ("demos", demos, Duration::from_secs(120)),
    ];
    let mut failed = 0;
    for (k, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(m) if took > *limit => Err(format!("{m}; runtime {took:.2?} exceeds {limit:?}")),
            other => other,
        };
        let (tag, msg) = match &outcome {
            Ok(m) => ("PASS", m),
            Err(m) => {
                failed += 1;
                ("FAIL", m)
            }
        };
        println!(
            "acceptance {} [{tag}] {name}: {msg} ({took:.2?}, limit {limit:?})",
            k + 1
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
