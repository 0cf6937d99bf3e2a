//! Digital straight segment generation: optimal rasterization, basic sets
//! and tiling.

use crate::error::{Error, Result};
use crate::geometry::{GridPoint, SlopeValue};
use crate::rational::Rational;

/// Fixed-point threshold for approximate slopes: `m*dx + 1/2` must stay at
/// least `2^-40` away from an integer.
pub const PRECISION_GUARD_BITS: u32 = 40;

/// A first-octant digital straight segment.
#[derive(Clone, Debug, PartialEq)]
pub struct Dss {
    pub points: Vec<GridPoint>,
    pub slope: SlopeValue,
    pub origin: GridPoint,
}

impl Dss {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// One period of a rational DSS, translated so it starts at the origin.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasicSet {
    pub slope: Rational,
    pub points: Vec<GridPoint>,
}

/// Rounded rise `floor(m*dx + 1/2)` for an exact slope.
fn exact_rise(m: Rational, dx: i64) -> i64 {
    // floor((2*r*dx + s) / (2*s))
    let r = m.num() as i128;
    let s = m.den() as i128;
    let v = (2 * r * dx as i128 + s).div_euclid(2 * s);
    i64::try_from(v).expect("coordinate overflow")
}

/// Rounded rise for an approximate slope.
///
/// The `f64` is a dyadic rational, so `m*dx + 1/2` is evaluated exactly in
/// fixed point; the guard then rejects values within `2^-40` of an integer,
/// where the tiny error in computing `m` itself could flip the pixel.
fn approx_rise(m: f64, dx: i64) -> Result<i64> {
    if m == 0.0 {
        return Ok(0);
    }
    let bits = m.to_bits();
    let neg = bits >> 63 == 1;
    let raw_exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = (bits & ((1u64 << 52) - 1)) as i128;
    let (mant, exp) = if raw_exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1i128 << 52), raw_exp - 1075)
    };
    let mant = if neg { -mant } else { mant };
    // value = mant * 2^exp * dx + 1/2 = num / 2^scale
    let scale = (-exp).max(1);
    if scale > 100 {
        return Err(Error::Precision { dx });
    }
    let scaled_product = if exp >= 0 {
        (mant * dx as i128) << (exp + scale)
    } else {
        mant * dx as i128
    };
    let num = scaled_product + (1i128 << (scale - 1));
    let unit = 1i128 << scale;
    let floor = num.div_euclid(unit);
    let rem = num.rem_euclid(unit);
    let dist = rem.min(unit - rem);
    let too_close = if scale as u32 >= PRECISION_GUARD_BITS {
        dist < 1i128 << (scale as u32 - PRECISION_GUARD_BITS)
    } else {
        dist == 0
    };
    if too_close {
        return Err(Error::Precision { dx });
    }
    i64::try_from(floor).map_err(|_| Error::Precision { dx })
}

/// `floor(m*dx + 1/2)`, the optimal rise at horizontal offset `dx`.
pub fn optimal_rise(m: SlopeValue, dx: i64) -> Result<i64> {
    match m {
        SlopeValue::Exact(r) => Ok(exact_rise(r, dx)),
        SlopeValue::Approximate(v) => approx_rise(v, dx),
    }
}

fn check_unit_slope(m: SlopeValue) -> Result<()> {
    let inside = match m {
        SlopeValue::Exact(r) => r >= Rational::ZERO && r <= Rational::ONE,
        SlopeValue::Approximate(v) => (0.0..=1.0).contains(&v),
    };
    if inside {
        Ok(())
    } else {
        Err(Error::SlopeOutOfRange(m.to_string()))
    }
}

/// The origin followed by `n` optimal successors:
/// `y = floor(m*(x - x0) + y0 + 1/2)`.
pub fn generate_optimal(origin: GridPoint, m: impl Into<SlopeValue>, n: usize) -> Result<Dss> {
    let m = m.into();
    check_unit_slope(m)?;
    let points = (0..=n as i64)
        .map(|dx| Ok(origin.offset(dx, optimal_rise(m, dx)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Dss {
        points,
        slope: m,
        origin,
    })
}

/// Period length: the reduced denominator.
pub fn period_length(m: Rational) -> i64 {
    m.den()
}

/// All basic sets of `m = r/s`, in path order: the `s` windows of `s+1`
/// points starting at offsets `0..s` of the optimal two-period segment.
pub fn basic_sets(m: Rational) -> Result<Vec<BasicSet>> {
    let s = period_length(m) as usize;
    let two = generate_optimal(GridPoint::ORIGIN, m, 2 * s)?;
    let mut sets: Vec<BasicSet> = Vec::with_capacity(s);
    for offset in 0..s {
        let window = &two.points[offset..=offset + s];
        let base = window[0];
        let points = window
            .iter()
            .map(|p| GridPoint::new(p.x - base.x, p.y - base.y))
            .collect();
        let set = BasicSet { slope: m, points };
        if sets.contains(&set) {
            log::warn!("basic set at offset {offset} of slope {m} duplicates an earlier window");
            continue;
        }
        sets.push(set);
    }
    Ok(sets)
}

/// Tiles a basic set by the translation `(s, r)`.
pub fn generate_from_basic_set(bs: &BasicSet, periods: usize) -> Dss {
    let s = bs.points.len() - 1;
    let (step_x, step_y) = (bs.slope.den(), bs.slope.num());
    let mut points = Vec::with_capacity(periods * s + 1);
    points.push(bs.points[0]);
    for p in 0..periods as i64 {
        points.extend(
            bs.points[1..]
                .iter()
                .map(|q| q.offset(p * step_x, p * step_y)),
        );
    }
    Dss {
        points,
        slope: SlopeValue::Exact(bs.slope),
        origin: bs.points[0],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaincode::encode;

    fn ys(d: &Dss) -> Vec<i64> {
        d.points.iter().map(|p| p.y).collect()
    }

    #[test]
    fn optimal_two_sevenths() {
        let d = generate_optimal(GridPoint::ORIGIN, Rational::new(2, 7), 14).unwrap();
        // floor(2x/7 + 1/2) evaluated by hand for x = 0..14
        assert_eq!(ys(&d), vec![0, 0, 1, 1, 1, 1, 2, 2, 2, 3, 3, 3, 3, 4, 4]);
        assert!(d.points.iter().enumerate().all(|(x, p)| p.x == x as i64));
    }

    #[test]
    fn optimal_horizontal_and_diagonal() {
        let d = generate_optimal(GridPoint::ORIGIN, Rational::ZERO, 5).unwrap();
        assert_eq!(ys(&d), vec![0; 6]);
        let d = generate_optimal(GridPoint::ORIGIN, Rational::ONE, 3).unwrap();
        let want: Vec<_> = (0..=3).map(|i| GridPoint::new(i, i)).collect();
        assert_eq!(d.points, want);
    }

    #[test]
    fn optimal_respects_origin() {
        let d = generate_optimal(GridPoint::new(10, -4), Rational::new(1, 2), 3).unwrap();
        assert_eq!(d.points[0], GridPoint::new(10, -4));
        assert_eq!(d.points[1], GridPoint::new(11, -3));
    }

    #[test]
    fn rejects_slopes_outside_unit_interval() {
        assert!(matches!(
            generate_optimal(GridPoint::ORIGIN, Rational::new(3, 2), 3),
            Err(Error::SlopeOutOfRange(_))
        ));
        assert!(generate_optimal(GridPoint::ORIGIN, SlopeValue::Approximate(-0.1), 3).is_err());
    }

    #[test]
    fn approximate_matches_float_away_from_ties() {
        let m = (20f64).to_radians().tan();
        let d = generate_optimal(GridPoint::ORIGIN, SlopeValue::Approximate(m), 200).unwrap();
        for (x, p) in d.points.iter().enumerate() {
            assert_eq!(p.y, (m * x as f64 + 0.5).floor() as i64);
        }
    }

    #[test]
    fn approximate_half_integer_is_a_precision_error() {
        assert_eq!(
            optimal_rise(SlopeValue::Approximate(0.5), 1),
            Err(Error::Precision { dx: 1 })
        );
        let nudged = 0.5 + 1e-15;
        assert_eq!(
            optimal_rise(SlopeValue::Approximate(nudged), 3),
            Err(Error::Precision { dx: 3 })
        );
        assert_eq!(optimal_rise(SlopeValue::Approximate(0.5), 2), Ok(1));
    }

    #[test]
    fn period_lengths() {
        assert_eq!(period_length(Rational::new(2, 7)), 7);
        assert_eq!(period_length(Rational::ZERO), 1);
        assert_eq!(period_length(Rational::new(21, 43)), 43);
    }

    #[test]
    fn basic_sets_counts() {
        assert_eq!(basic_sets(Rational::new(2, 7)).unwrap().len(), 7);
        let zero = basic_sets(Rational::ZERO).unwrap();
        assert_eq!(zero.len(), 1);
        assert_eq!(
            zero[0].points,
            vec![GridPoint::new(0, 0), GridPoint::new(1, 0)]
        );
        let half = basic_sets(Rational::new(1, 2)).unwrap();
        assert_eq!(half.len(), 2);
        assert_eq!(
            half[1].points,
            vec![
                GridPoint::new(0, 0),
                GridPoint::new(1, 0),
                GridPoint::new(2, 1)
            ]
        );
    }

    #[test]
    fn basic_set_invariants() {
        for s in 1..=12 {
            for r in 0..=s {
                let m = Rational::new(r, s);
                for bs in basic_sets(m).unwrap() {
                    let n = bs.points.len() - 1;
                    assert_eq!(n as i64, m.den());
                    assert_eq!(bs.points[n], GridPoint::new(m.den(), m.num()));
                    assert!(bs
                        .points
                        .windows(2)
                        .all(|w| w[1].x == w[0].x + 1 && (w[1].y - w[0].y).abs() <= 1));
                }
            }
        }
    }

    #[test]
    fn tiling_first_set_is_optimal() {
        let m = Rational::new(2, 7);
        let sets = basic_sets(m).unwrap();
        let tiled = generate_from_basic_set(&sets[0], 2);
        let opt = generate_optimal(GridPoint::ORIGIN, m, 14).unwrap();
        assert_eq!(tiled.points, opt.points);
        assert_eq!(generate_from_basic_set(&sets[3], 1).points, sets[3].points);
    }

    #[test]
    fn tiling_is_periodic() {
        let m = Rational::new(3, 8);
        for bs in basic_sets(m).unwrap() {
            let d = generate_from_basic_set(&bs, 4);
            assert_eq!(d.len(), 33);
            for i in 0..d.len() - 8 {
                assert_eq!(d.points[i + 8], d.points[i].offset(8, 3));
            }
        }
    }

    #[test]
    fn optimal_chains_use_only_zero_and_one() {
        for s in 1..=20 {
            for r in 0..=s {
                let d = generate_optimal(GridPoint::ORIGIN, Rational::new(r, s), 3 * s as usize)
                    .unwrap();
                assert!(encode(&d.points).unwrap().symbols.iter().all(|&c| c <= 1));
            }
        }
    }
}
