//! Planar convex hulls and outer normals.

/// Counter-clockwise hull by the monotone chain, collinear points dropped.
/// Returns one point for a singleton and two for a segment.
pub fn convex_hull_2d(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Unit outer normals of the hull edges. A segment yields its two normals;
/// a point yields none.
pub fn edge_normals(hull: &[[f64; 2]]) -> Vec<[f64; 2]> {
    if hull.len() < 2 {
        return Vec::new();
    }
    let k = hull.len();
    let edges = if k == 2 { 2 } else { k };
    (0..edges)
        .filter_map(|i| {
            let (p, q) = (hull[i], hull[(i + 1) % k]);
            let (dx, dy) = (q[0] - p[0], q[1] - p[1]);
            let len = (dx * dx + dy * dy).sqrt();
            (len > 0.0).then(|| [dy / len, -dx / len])
        })
        .collect()
}

/// Normals whose halfplanes cut out the hull exactly: edge normals, plus the
/// segment direction both ways for a segment, or the axes for a point.
pub fn facet_normals(hull: &[[f64; 2]]) -> Vec<[f64; 2]> {
    match hull.len() {
        0 => Vec::new(),
        1 => vec![[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]],
        2 => {
            let mut out = edge_normals(hull);
            let (dx, dy) = (hull[1][0] - hull[0][0], hull[1][1] - hull[0][1]);
            let len = (dx * dx + dy * dy).sqrt();
            out.push([dx / len, dy / len]);
            out.push([-dx / len, -dy / len]);
            out
        }
        _ => edge_normals(hull),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_with_interior_and_collinear_points() {
        let pts = [
            [0.0, 0.0],
            [1.0, 0.0],
            [1.0, 1.0],
            [0.0, 1.0],
            [0.5, 0.5],
            [0.5, 0.0],
        ];
        let h = convex_hull_2d(&pts);
        assert_eq!(h, vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        let n = edge_normals(&h);
        assert_eq!(n, vec![[0.0, -1.0], [1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]]);
    }

    #[test]
    fn degenerate_hulls() {
        assert_eq!(convex_hull_2d(&[[1.0, 1.0], [1.0, 1.0]]), vec![[1.0, 1.0]]);
        let seg = convex_hull_2d(&[[0.0, 0.0], [2.0, 0.0], [1.0, 0.0]]);
        assert_eq!(seg, vec![[0.0, 0.0], [2.0, 0.0]]);
        assert_eq!(edge_normals(&seg).len(), 2);
        assert_eq!(facet_normals(&seg).len(), 4);
        assert!(edge_normals(&[[1.0, 2.0]]).is_empty());
    }
}
