//! Extreme-ray enumeration for cones in dimension at most three.

use crate::vector::{dot, norm2};

fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Extreme rays (unit length) of `{x : ⟨a, x⟩ >= 0 for all a in rows}` for a
/// pointed cone in dimension 1, 2 or 3. Returns `None` above dimension 3.
pub fn extreme_rays(rows: &[Vec<f64>], dim: usize) -> Option<Vec<Vec<f64>>> {
    let mut candidates: Vec<Vec<f64>> = Vec::new();
    match dim {
        1 => {
            candidates.push(vec![1.0]);
            candidates.push(vec![-1.0]);
        }
        2 => {
            for a in rows {
                candidates.push(vec![-a[1], a[0]]);
                candidates.push(vec![a[1], -a[0]]);
            }
        }
        3 => {
            for (i, a) in rows.iter().enumerate() {
                for b in &rows[i + 1..] {
                    let c = cross(a, b);
                    if norm2(&c) > 1e-12 * norm2(a) * norm2(b) {
                        candidates.push(c.to_vec());
                        candidates.push(c.iter().map(|v| -v).collect());
                    }
                }
            }
        }
        _ => return None,
    }
    let mut rays: Vec<Vec<f64>> = Vec::new();
    for c in candidates {
        let n = norm2(&c);
        if n == 0.0 {
            continue;
        }
        let r: Vec<f64> = c.iter().map(|v| v / n).collect();
        let feasible = rows.iter().all(|a| dot(a, &r) >= -1e-10 * norm2(a));
        if !feasible {
            continue;
        }
        let dup = rays
            .iter()
            .any(|q| q.iter().zip(&r).all(|(x, y)| (x - y).abs() < 1e-9));
        if !dup {
            rays.push(r);
        }
    }
    Some(rays)
}
