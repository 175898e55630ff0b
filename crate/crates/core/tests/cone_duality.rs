//! Duality and interior properties of random polyhedral cones.

use conegen::instances::{random_cone, rng};
use conegen::vector::{dot, norm2};
use conegen::PolyhedralCone;
use rand::Rng;

fn random_generated_cone<R: Rng>(r: &mut R, dim: usize) -> PolyhedralCone {
    loop {
        let axis: Vec<f64> = (0..dim).map(|_| r.gen_range(-1.0..1.0)).collect();
        if norm2(&axis) < 0.3 {
            continue;
        }
        // rays scattered around a random axis stay in an open half-space
        let count = r.gen_range(dim..=dim + 3);
        let gens: Vec<Vec<f64>> = (0..count)
            .map(|_| {
                axis.iter()
                    .map(|a| 2.0 * a + r.gen_range(-1.0..1.0) * norm2(&axis))
                    .collect()
            })
            .collect();
        if let Ok(c) = PolyhedralCone::from_generators(gens) {
            return c;
        }
    }
}

fn same_cone(a: &PolyhedralCone, b: &PolyhedralCone) -> bool {
    let unit = |v: &[f64]| v.iter().map(|x| x / norm2(v)).collect::<Vec<_>>();
    let contains = |xs: &PolyhedralCone, ys: &PolyhedralCone| {
        ys.halfspaces().iter().all(|h| {
            let h = unit(h.as_slice());
            xs.halfspaces().iter().any(|k| {
                unit(k.as_slice())
                    .iter()
                    .zip(&h)
                    .all(|(p, q)| (p - q).abs() < 1e-9)
            })
        })
    };
    contains(a, b) && contains(b, a)
}

#[test]
fn double_dual_is_the_cone() {
    let mut r = rng(11);
    for _ in 0..200 {
        let dim = r.gen_range(2..=3);
        let c = random_generated_cone(&mut r, dim);
        let cc = c.dual().unwrap().dual().unwrap();
        assert!(same_cone(&c, &cc), "{c:?} vs {cc:?}");
        for _ in 0..20 {
            let x: Vec<f64> = (0..dim).map(|_| r.gen_range(-2.0..2.0)).collect();
            let margin = c
                .halfspace_values(&x)
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            if margin.abs() > 1e-6 {
                assert_eq!(
                    c.contains(&x, 1e-9).unwrap(),
                    cc.contains(&x, 1e-9).unwrap()
                );
            }
        }
    }
}

#[test]
fn interior_points_survive_small_perturbations() {
    let mut r = rng(12);
    for _ in 0..200 {
        let dim = r.gen_range(2..=3);
        let c = random_generated_cone(&mut r, dim);
        let gens: Vec<Vec<f64>> = c.generators().unwrap().iter().map(|g| g.to_vec()).collect();
        let mut x = vec![0.0; dim];
        for g in &gens {
            let t = r.gen_range(0.1..1.0);
            x.iter_mut().zip(g).for_each(|(xi, gi)| *xi += t * gi);
        }
        assert!(c.interior_contains(&x).unwrap());
        let slack = c
            .halfspaces()
            .iter()
            .map(|a| dot(a.as_slice(), &x) / norm2(a.as_slice()))
            .fold(f64::INFINITY, f64::min);
        for _ in 0..20 {
            let d: Vec<f64> = (0..dim).map(|_| r.gen_range(-1.0..1.0)).collect();
            let eps = 0.5 * slack / norm2(&d);
            let y: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + eps * b).collect();
            assert!(c.interior_contains(&y).unwrap());
        }
        // extreme rays are boundary points
        let extreme = gens
            .iter()
            .find(|g| {
                c.halfspace_values(g)
                    .iter()
                    .zip(c.halfspaces())
                    .any(|(v, a)| v.abs() <= 1e-12 * norm2(a.as_slice()) * norm2(g))
            })
            .expect("an extreme generator");
        assert!(c.contains(extreme, 1e-9).unwrap());
        assert!(!c.interior_contains(extreme).unwrap());
    }
}

#[test]
fn strict_positivity_is_dual_interiority() {
    let mut r = rng(13);
    let mut hits = [0usize; 2];
    for k in 0..200 {
        let dim = r.gen_range(2..=3);
        let c = if k % 2 == 0 {
            random_generated_cone(&mut r, dim)
        } else {
            random_cone(&mut r, dim).unwrap().0
        };
        let dual = c.dual().unwrap();
        for _ in 0..20 {
            let f: Vec<f64> = (0..dim).map(|_| r.gen_range(-1.0..1.0)).collect();
            let nearest = c
                .generators()
                .unwrap()
                .iter()
                .map(|g| dot(g.as_slice(), &f) / norm2(g.as_slice()))
                .fold(f64::INFINITY, f64::min);
            if nearest.abs() < 1e-6 {
                continue;
            }
            let strict = c.is_strictly_positive(&f).unwrap();
            assert_eq!(strict, dual.interior_contains(&f).unwrap());
            hits[usize::from(strict)] += 1;
        }
    }
    assert!(hits[0] > 0 && hits[1] > 0, "{hits:?}");
}
