use num_rational::Ratio;

use super::{normalized_valuation, LPolynomial};

/// Lower convex hull of `{(i, v_p(C_i)/r) : C_i != 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<(u64, Ratio<i64>)>,
    /// `(slope, horizontal length)` with nondecreasing slopes.
    pub slopes: Vec<(Ratio<i64>, u64)>,
}

pub fn newton_polygon(l: &LPolynomial) -> NewtonPolygon {
    let points: Vec<(u64, Ratio<i64>)> = l
        .coeffs
        .iter()
        .enumerate()
        .filter_map(|(i, c)| normalized_valuation(c, l.p, l.r).map(|v| (i as u64, v)))
        .collect();
    // monotone chain, lower hull only
    let mut hull: Vec<(u64, Ratio<i64>)> = Vec::new();
    for pt in points {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // drop the middle point if it is on or above the chord
            let cross = (y2 - y1) * Ratio::from_integer((pt.0 - x1) as i64)
                - (pt.1 - y1) * Ratio::from_integer((x2 - x1) as i64);
            if cross >= Ratio::from_integer(0) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let slopes = hull
        .windows(2)
        .map(|w| {
            let dx = w[1].0 - w[0].0;
            ((w[1].1 - w[0].1) / Ratio::from_integer(dx as i64), dx)
        })
        .collect();
    NewtonPolygon {
        vertices: hull,
        slopes,
    }
}

/// Whether the Newton polygon is a single segment of slope 1/2.
pub fn is_supersingular(l: &LPolynomial) -> bool {
    newton_polygon(l)
        .slopes
        .iter()
        .all(|(s, _)| *s == Ratio::new(1, 2))
}
