//! Exact slope bounds for digital straight segments.
//!
//! For a segment of slope `m`, the gap between vertically adjacent targets at
//! chessboard distance `n` is `1/n`; optimal points keep `|m - μ(n)| <= 1/(2n)`
//! and any digitization keeps `|m - μ(n)| <= 1/n`. Fitting the two lines that
//! sandwich a segment gives per-anchor bounds `m - (b+k)/i` and `m + (a-k)/i`.

use crate::error::{Error, Result};
use crate::gen::{period_length, Dss};
use crate::geometry::GridPoint;
use crate::rational::Rational;

/// Slope gap between `(n, j)` and `(n, j+1)` seen from the origin.
pub fn lemma1_gap(n: i64) -> Rational {
    assert!(n >= 1, "distance must be positive");
    Rational::new(1, n)
}

/// Deviation bound `1/(2n)` for optimal segments.
pub fn optimal_bound(n: i64) -> Rational {
    assert!(n >= 1, "distance must be positive");
    Rational::new(1, 2 * n)
}

/// Deviation bound `1/n` for any digital straight segment.
pub fn general_bound(n: i64) -> Rational {
    assert!(n >= 1, "distance must be positive");
    Rational::new(1, n)
}

/// Reference line `y = m*x + c` and the offsets `a` (above) and `b` (below)
/// enclosing every point of a segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryLines {
    pub m: Rational,
    pub c: Rational,
    pub a: Rational,
    pub b: Rational,
    /// False when the segment was shorter than a period, so `a` and `b` may
    /// underestimate the offsets of the infinite line.
    pub tight: bool,
}

impl BoundaryLines {
    /// Signed offset of `p` above the reference line.
    pub fn offset_of(&self, p: GridPoint) -> Rational {
        Rational::integer(p.y) - self.m * Rational::integer(p.x) - self.c
    }

    /// True if `p` lies between the lower and upper lines, inclusive.
    pub fn contains(&self, p: GridPoint) -> bool {
        let k = self.offset_of(p);
        -self.b <= k && k <= self.a
    }
}

/// Lower and upper slope bound at chessboard distance `i` from an anchor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SlopeBoundsAt {
    pub lower: Rational,
    pub upper: Rational,
    pub i: i64,
}

impl SlopeBoundsAt {
    pub fn contains(&self, mu: Rational) -> bool {
        self.lower <= mu && mu <= self.upper
    }
}

/// Fits the boundary lines of an exact-slope segment, with the reference
/// line through its first point.
pub fn fit_boundary_lines(seg: &Dss) -> Result<BoundaryLines> {
    let m = seg.slope.exact().ok_or(Error::InexactSlope)?;
    let first = *seg.points.first().ok_or(Error::EmptyInput)?;
    let c = Rational::integer(first.y) - m * Rational::integer(first.x);
    let mut lines = BoundaryLines {
        m,
        c,
        a: Rational::ZERO,
        b: Rational::ZERO,
        tight: false,
    };
    for &p in &seg.points {
        let k = lines.offset_of(p);
        lines.a = lines.a.max(k);
        lines.b = lines.b.max(-k);
    }
    let span = seg.points.last().map_or(0, |l| l.x - first.x);
    lines.tight = span >= period_length(m);
    Ok(lines)
}

/// Slope bounds seen from `anchor` at distance `i`:
/// `[m - (b+k)/i, m + (a-k)/i]` where `k` is the anchor's offset.
pub fn slope_bounds_at(lines: &BoundaryLines, anchor: GridPoint, i: i64) -> Result<SlopeBoundsAt> {
    assert!(i >= 1, "distance must be positive");
    let k = lines.offset_of(anchor);
    if k < -lines.b || k > lines.a {
        return Err(Error::OffsetOutOfRange {
            k: k.to_string(),
            a: lines.a.to_string(),
            b: lines.b.to_string(),
        });
    }
    let inv = Rational::new(1, i);
    Ok(SlopeBoundsAt {
        lower: lines.m - (lines.b + k) * inv,
        upper: lines.m + (lines.a - k) * inv,
        i,
    })
}

/// Width `(a+b)/i` of the per-anchor bounds.
pub fn bounds_width(lines: &BoundaryLines, i: i64) -> Rational {
    assert!(i >= 1, "distance must be positive");
    (lines.a + lines.b) * Rational::new(1, i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{basic_sets, generate_from_basic_set, generate_optimal};
    use crate::geometry::{mu_series, SlopeValue};

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn s1() -> Dss {
        generate_optimal(GridPoint::ORIGIN, r(2, 7), 14).unwrap()
    }

    fn s3() -> Dss {
        generate_from_basic_set(&basic_sets(r(2, 7)).unwrap()[2], 2)
    }

    #[test]
    fn gaps_and_bounds() {
        assert_eq!(lemma1_gap(7), r(1, 7));
        assert_eq!(lemma1_gap(1), Rational::ONE);
        assert_eq!(optimal_bound(7), r(1, 14));
        assert_eq!(general_bound(1), Rational::ONE);
    }

    #[test]
    fn adjacent_target_gap_by_enumeration() {
        let o = GridPoint::ORIGIN;
        for n in 1..=100 {
            let slopes: Vec<_> = (0..=n)
                .map(|j| crate::geometry::slope_between(o, GridPoint::new(n, j)).unwrap())
                .collect();
            for (j, s) in slopes.iter().enumerate() {
                assert_eq!(*s, r(j as i64, n));
            }
            assert!(slopes.windows(2).all(|w| w[1] - w[0] == lemma1_gap(n)));
        }
    }

    #[test]
    fn optimal_one_third_at_two() {
        let d = generate_optimal(GridPoint::ORIGIN, r(1, 3), 6).unwrap();
        let mu = mu_series(&d.points, 0).unwrap();
        assert_eq!(mu.get(2), Some(r(1, 2)));
        assert_eq!((r(1, 3) - r(1, 2)).abs(), r(1, 6));
        assert!(r(1, 6) <= optimal_bound(2));
    }

    #[test]
    fn s1_lines_are_three_sevenths() {
        let lines = fit_boundary_lines(&s1()).unwrap();
        assert_eq!((lines.a, lines.b), (r(3, 7), r(3, 7)));
        assert!(lines.tight);
        assert_eq!(bounds_width(&lines, 7), r(6, 49));
        assert!(bounds_width(&lines, 7) <= general_bound(7));
    }

    #[test]
    fn s1_bounds_at_seven() {
        let lines = fit_boundary_lines(&s1()).unwrap();
        let b = slope_bounds_at(&lines, GridPoint::ORIGIN, 7).unwrap();
        assert_eq!(b.lower, r(2, 7) - r(3, 49));
        assert_eq!(b.upper, r(2, 7) + r(3, 49));
    }

    #[test]
    fn s3_bounds() {
        let seg = s3();
        let lines = fit_boundary_lines(&seg).unwrap();
        assert_eq!(lines.a + lines.b, r(6, 7));
        for i in 1..=14 {
            let b = slope_bounds_at(&lines, seg.points[0], i).unwrap();
            assert_eq!(b.lower, r(2, 7) - r(6, 7 * i));
            assert_eq!(b.upper, r(2, 7));
        }
        assert_eq!(bounds_width(&lines, 7), r(6, 49));
    }

    #[test]
    fn horizontal_has_zero_offsets() {
        let d = generate_optimal(GridPoint::new(3, 3), Rational::ZERO, 9).unwrap();
        let lines = fit_boundary_lines(&d).unwrap();
        assert_eq!((lines.a, lines.b), (Rational::ZERO, Rational::ZERO));
        for i in [1, 5, 40] {
            let b = slope_bounds_at(&lines, d.points[4], i).unwrap();
            assert_eq!((b.lower, b.upper), (Rational::ZERO, Rational::ZERO));
        }
    }

    #[test]
    fn boundary_case_width() {
        let lines = BoundaryLines {
            m: Rational::ZERO,
            c: Rational::ZERO,
            a: r(1, 2),
            b: r(1, 2),
            tight: true,
        };
        assert_eq!(bounds_width(&lines, 4), r(1, 4));
    }

    #[test]
    fn short_segments_are_flagged() {
        let d = generate_optimal(GridPoint::ORIGIN, r(2, 7), 4).unwrap();
        assert!(!fit_boundary_lines(&d).unwrap().tight);
    }

    #[test]
    fn errors() {
        let d = generate_optimal(
            GridPoint::ORIGIN,
            SlopeValue::Approximate(0.3f64.sqrt() / 2.0),
            10,
        )
        .unwrap();
        assert_eq!(fit_boundary_lines(&d), Err(Error::InexactSlope));
        let lines = fit_boundary_lines(&s1()).unwrap();
        assert!(matches!(
            slope_bounds_at(&lines, GridPoint::new(0, 5), 3),
            Err(Error::OffsetOutOfRange { .. })
        ));
    }

    /// Per-anchor bounds on every anchor of every basic-set variant.
    #[test]
    fn anchor_bounds_hold_exhaustively() {
        for s in 1..=9 {
            for num in 0..=s {
                let m = r(num, s);
                if m.den() != s {
                    continue;
                }
                for bs in basic_sets(m).unwrap() {
                    let seg = generate_from_basic_set(&bs, 2);
                    let lines = fit_boundary_lines(&seg).unwrap();
                    assert!(lines.a + lines.b < Rational::ONE);
                    for (ai, &anchor) in seg.points.iter().enumerate() {
                        assert!(lines.contains(anchor));
                        let mu = mu_series(&seg.points, ai).unwrap();
                        for (i, v) in mu.values {
                            let b = slope_bounds_at(&lines, anchor, i).unwrap();
                            assert!(b.contains(v), "m={m} anchor={ai} i={i}");
                            assert!(bounds_width(&lines, i) <= general_bound(i));
                        }
                    }
                }
            }
        }
    }
}
