//! Exact membership test for digital straight segments, independent of the
//! recognizer.
//!
//! A first-octant sequence `(x_j, y_j)` with unit x steps is a DSS iff some
//! `m in [0, 1]` and `c` satisfy `y_j - 1/2 <= m*x_j + c < y_j + 1/2` for all
//! `j`. Eliminating `c` leaves, for every pair `j < k` with `d = x_k - x_j`
//! and `e = y_k - y_j`, the open interval `(e - 1)/d < m < (e + 1)/d`.

use crate::error::{Error, Result};
use crate::geometry::GridPoint;

/// True iff `points` are the optimal digitization of some real line of slope
/// in `[0, 1]`.
pub fn oracle_is_dss(points: &[GridPoint]) -> Result<bool> {
    if let Some(index) = points.windows(2).position(|w| w[1].x != w[0].x + 1) {
        return Err(Error::Unnormalized { index: index + 1 });
    }
    // running bounds kept as unreduced (num, den) pairs with den > 0
    let mut lo: Option<(i128, i128)> = None;
    let mut hi: Option<(i128, i128)> = None;
    let less = |a: (i128, i128), b: (i128, i128)| a.0 * b.1 < b.0 * a.1;
    for (j, p) in points.iter().enumerate() {
        for q in &points[j + 1..] {
            let (d, e) = ((q.x - p.x) as i128, (q.y - p.y) as i128);
            let (l, u) = ((e - 1, d), (e + 1, d));
            if lo.is_none_or(|v| less(v, l)) {
                lo = Some(l);
            }
            if hi.is_none_or(|v| less(u, v)) {
                hi = Some(u);
            }
        }
    }
    Ok(match (lo, hi) {
        (Some(l), Some(u)) => less(l, u) && less(l, (1, 1)) && less((0, 1), u),
        _ => true,
    })
}
