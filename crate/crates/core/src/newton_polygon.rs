//! Lower convex hull of the points `(k, v(f_k))`.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::Valuation;
use crate::poly::PAdicPoly;

/// One edge of the polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    #[serde(with = "crate::exponent::rational_str")]
    pub slope: Rational64,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    /// Hull vertices `(index, valuation)`, increasing in index.
    pub vertices: Vec<(usize, u32)>,
    /// Edges with strictly increasing slopes.
    pub segments: Vec<Segment>,
}

impl NewtonPolygon {
    /// Index of the leftmost vertex: the order of vanishing of `f` at 0.
    pub fn first_index(&self) -> usize {
        self.vertices[0].0
    }

    /// Number of roots in `C_p` of absolute value at most 1, with multiplicity.
    ///
    /// A segment of slope `-lambda` and length `n` accounts for `n` roots of
    /// valuation `lambda`; the offset of the first vertex counts roots at zero.
    pub fn unit_ball_roots(&self) -> usize {
        self.first_index()
            + self
                .segments
                .iter()
                .filter(|s| s.slope <= Rational64::from_integer(0))
                .map(|s| s.length)
                .sum::<usize>()
    }
}

fn cross(o: (usize, u32), a: (usize, u32), b: (usize, u32)) -> i128 {
    let (ox, oy) = (o.0 as i128, o.1 as i128);
    (a.0 as i128 - ox) * (b.1 as i128 - oy) - (a.1 as i128 - oy) * (b.0 as i128 - ox)
}

/// Computes the Newton polygon from the coefficients with known valuation.
///
/// A coefficient that vanishes to precision (`AtLeast(b)`) is left out only if
/// no value it could take changes the answer:
/// - strictly inside the hull's index range, `(j, b)` must lie strictly above the hull;
/// - outside that range, `b` must exceed the minimum known valuation, which
///   keeps the count of unit-ball roots fixed whatever its true value is.
///
/// Anything else is reported as `PrecisionExhausted`.
pub fn newton_polygon(f: &PAdicPoly) -> Result<NewtonPolygon> {
    let vals = f.valuations();
    let points: Vec<(usize, u32)> = vals
        .iter()
        .enumerate()
        .filter_map(|(k, v)| v.known().map(|v| (k, v)))
        .collect();
    if points.is_empty() {
        return Err(Error::exhausted("no coefficient has a known valuation"));
    }

    let mut hull: Vec<(usize, u32)> = Vec::with_capacity(points.len());
    for &pt in &points {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], pt) <= 0 {
            hull.pop();
        }
        hull.push(pt);
    }

    let first = hull[0].0;
    let last = hull[hull.len() - 1].0;
    let min_val = points.iter().map(|p| p.1).min().expect("non-empty");
    for (j, v) in vals.iter().enumerate() {
        let Valuation::AtLeast(b) = *v else { continue };
        let unresolved = if j < first || j > last {
            b <= min_val
        } else {
            !strictly_above(&hull, j, b)
        };
        if unresolved {
            return Err(Error::exhausted(format!(
                "coefficient {j} vanishes to precision {b} and could touch the Newton polygon"
            )));
        }
    }

    let segments = hull
        .windows(2)
        .map(|w| {
            let (k0, v0) = w[0];
            let (k1, v1) = w[1];
            let length = k1 - k0;
            Segment {
                slope: Rational64::new(v1 as i64 - v0 as i64, length as i64),
                length,
            }
        })
        .collect();
    Ok(NewtonPolygon { vertices: hull, segments })
}

fn strictly_above(hull: &[(usize, u32)], j: usize, b: u32) -> bool {
    let i = hull.partition_point(|&(k, _)| k <= j);
    if i == 0 {
        return false;
    }
    let (k0, v0) = hull[i - 1];
    if k0 == j {
        return false;
    }
    let (k1, v1) = hull[i];
    // b > v0 + (v1 - v0) (j - k0) / (k1 - k0)
    let lhs = b as i128 * (k1 - k0) as i128;
    let rhs = v0 as i128 * (k1 - k0) as i128 + (v1 as i128 - v0 as i128) * (j - k0) as i128;
    lhs > rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prime::Prime;

    fn poly(c: &[i64], p: u64, b: u32) -> PAdicPoly {
        PAdicPoly::from_i64s(c, Prime::new(p).unwrap(), b).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn single_segment() {
        let np = newton_polygon(&poly(&[3, 3, 1], 3, 8)).unwrap();
        assert_eq!(np.vertices, vec![(0, 1), (2, 0)]);
        assert_eq!(np.segments, vec![Segment { slope: r(-1, 2), length: 2 }]);
        assert_eq!(np.unit_ball_roots(), 2);
    }

    #[test]
    fn monomial() {
        let np = newton_polygon(&poly(&[0, 1], 5, 8)).unwrap();
        assert_eq!(np.vertices, vec![(1, 0)]);
        assert!(np.segments.is_empty());
        assert_eq!(np.unit_ball_roots(), 1);
    }

    #[test]
    fn root_at_zero_plus_segment() {
        let np = newton_polygon(&poly(&[0, 2, 1], 2, 8)).unwrap();
        assert_eq!(np.vertices, vec![(1, 1), (2, 0)]);
        assert_eq!(np.segments, vec![Segment { slope: r(-1, 1), length: 1 }]);
        assert_eq!(np.unit_ball_roots(), 2);
    }

    #[test]
    fn slopes_increase_and_mixed_signs() {
        // vals 3, 1, 0, 2 (p = 2): 8 + 2T + T^2 + 4T^3
        let np = newton_polygon(&poly(&[8, 2, 1, 4], 2, 10)).unwrap();
        assert_eq!(np.vertices, vec![(0, 3), (1, 1), (2, 0), (3, 2)]);
        let slopes: Vec<_> = np.segments.iter().map(|s| s.slope).collect();
        assert_eq!(slopes, vec![r(-2, 1), r(-1, 1), r(2, 1)]);
        assert_eq!(np.unit_ball_roots(), 2);
    }

    #[test]
    fn collinear_points_merge() {
        // vals 2, 1, 0 lie on one line
        let np = newton_polygon(&poly(&[9, 3, 1], 3, 8)).unwrap();
        assert_eq!(np.vertices, vec![(0, 2), (2, 0)]);
        assert_eq!(np.segments[0].length, 2);
    }

    #[test]
    fn interior_vanishing_coefficient() {
        // 1 + 0 T + 1 T^2 at precision 4: the middle point (1, >=4) is far above
        assert!(newton_polygon(&poly(&[1, 0, 1], 2, 4)).is_ok());
        // 16 + 0 T + 16 T^2 at precision 5: (1, >=5) vs hull height 4
        assert!(newton_polygon(&poly(&[16, 0, 16], 2, 5)).is_ok());
        // 16 + 0 T + 16 T^2 at precision 4 is the zero polynomial to precision
        assert!(newton_polygon(&poly(&[16, 0, 16], 2, 4)).is_err());
        // 8 + 0 T + 8 T^2 with precision 4: (1, >=4) is above height 3
        assert!(newton_polygon(&poly(&[8, 0, 8], 2, 4)).is_ok());
        // 8 + 0 T + 1 T^2 with precision 2 on the middle: line height 1.5 < 2 OK, but
        // precision 1 is ambiguous
        let f = PAdicPoly::new(
            Prime::new(2).unwrap(),
            vec![
                crate::PAdicInt::from_i64(8, Prime::new(2).unwrap(), 8).unwrap(),
                crate::PAdicInt::from_i64(0, Prime::new(2).unwrap(), 1).unwrap(),
                crate::PAdicInt::from_i64(1, Prime::new(2).unwrap(), 8).unwrap(),
            ],
        )
        .unwrap();
        assert!(newton_polygon(&f).is_err());
    }
}
