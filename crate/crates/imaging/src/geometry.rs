use crate::buffer::Point2;

/// True when any three of `pts` lie on a common line, judged by triangle area
/// relative to the spread of the points.
pub fn are_collinear(pts: &[Point2]) -> bool {
    let scale = pts
        .iter()
        .flat_map(|a| pts.iter().map(move |b| a.distance(*b)))
        .fold(0.0f64, f64::max);
    if scale == 0.0 {
        return true;
    }
    let tol = 1e-6 * scale * scale;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                let (a, b, c) = (pts[i], pts[j], pts[k]);
                let cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
                if cross.abs() <= tol {
                    return true;
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detects_collinear_triples() {
        let p = |x, y| Point2::new(x, y);
        assert!(are_collinear(&[p(0., 0.), p(1., 1.), p(2., 2.), p(0., 5.)]));
        assert!(!are_collinear(&[p(0., 0.), p(1., 0.), p(1., 1.), p(0., 1.)]));
        assert!(are_collinear(&[p(3., 3.), p(3., 3.), p(1., 0.), p(0., 9.)]));
    }
}
