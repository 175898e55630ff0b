use super::gradient::Projector;
use crate::error::{check_dim, check_finite, Error, Result};
use crate::vector::Vector;

/// Componentwise clamp of `x` onto the box `[lo, hi]`.
pub fn project_box(x: &[f64], lo: &[f64], hi: &[f64]) -> Result<Vector> {
    let b = BoxProjector::new(lo.to_vec(), hi.to_vec())?;
    check_dim(b.lo.len(), x.len())?;
    check_finite(x)?;
    let mut y = x.to_vec();
    b.project(&mut y);
    Ok(Vector::from_vec_unchecked(y))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxProjector {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoxProjector {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        check_dim(lo.len(), hi.len())?;
        check_finite(&lo)?;
        check_finite(&hi)?;
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(Error::Precondition(
                "box requires lo <= hi componentwise".into(),
            ));
        }
        Ok(Self { lo, hi })
    }
}

impl Projector for BoxProjector {
    fn project(&self, x: &mut [f64]) {
        for ((v, &l), &h) in x.iter_mut().zip(&self.lo).zip(&self.hi) {
            *v = v.clamp(l, h);
        }
    }
}

/// Nonnegativity on the first `count` coordinates, the rest free.
#[derive(Debug, Clone, Copy)]
pub struct LeadingNonnegative {
    pub count: usize,
}

impl Projector for LeadingNonnegative {
    fn project(&self, x: &mut [f64]) {
        for v in x.iter_mut().take(self.count) {
            *v = v.max(0.0);
        }
    }
}

/// Euclidean projection onto the probability simplex.
#[derive(Debug, Clone, Copy)]
pub struct SimplexProjector;

impl Projector for SimplexProjector {
    fn project(&self, x: &mut [f64]) {
        let mut s = x.to_vec();
        s.sort_by(|a, b| b.total_cmp(a));
        let mut cum = 0.0;
        let mut theta = 0.0;
        for (k, v) in s.iter().enumerate() {
            cum += v;
            let t = (cum - 1.0) / (k as f64 + 1.0);
            if v - t > 0.0 {
                theta = t;
            }
        }
        for v in x.iter_mut() {
            *v = (*v - theta).max(0.0);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::norm2;
    use proptest::prelude::*;

    #[test]
    fn clamps_outside_points() {
        let p = project_box(&[3.0, -3.0], &[-1.0, -1.0], &[1.0, 1.0]).unwrap();
        assert_eq!(p.as_slice(), &[1.0, -1.0]);
        let q = project_box(&[0.5, 0.0], &[-1.0, -1.0], &[1.0, 1.0]).unwrap();
        assert_eq!(q.as_slice(), &[0.5, 0.0]);
        let twice = project_box(&p, &[-1.0, -1.0], &[1.0, 1.0]).unwrap();
        assert_eq!(twice, p);
    }

    #[test]
    fn rejects_inverted_box() {
        assert!(project_box(&[0.0], &[1.0], &[0.0]).is_err());
    }

    #[test]
    fn simplex_projection_lands_on_simplex() {
        let mut x = vec![0.3, 2.0, -1.0, 0.1];
        SimplexProjector.project(&mut x);
        assert!((x.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(x.iter().all(|&v| v >= 0.0));
        assert_eq!(x, vec![0.0, 1.0, 0.0, 0.0]);
    }

    proptest! {
        #[test]
        fn box_projection_is_nonexpansive(
            a in prop::collection::vec(-5.0f64..5.0, 4),
            b in prop::collection::vec(-5.0f64..5.0, 4),
        ) {
            let lo = vec![-1.0, 0.0, -2.0, 1.0];
            let hi = vec![1.0, 0.5, 2.0, 3.0];
            let pa = project_box(&a, &lo, &hi).unwrap();
            let pb = project_box(&b, &lo, &hi).unwrap();
            let d_in = norm2(&crate::vector::sub(&a, &b));
            let d_out = norm2(&crate::vector::sub(&pa, &pb));
            prop_assert!(d_out <= d_in + 1e-12);
            prop_assert_eq!(project_box(&pa, &lo, &hi).unwrap(), pa);
        }
    }
}
