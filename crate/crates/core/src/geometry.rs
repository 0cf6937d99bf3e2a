//! Lattice points, the chessboard metric, exact slopes and octant handling.

use std::fmt;

use crate::chaincode::{symbol_between, DIRECTIONS};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// A point of the integer lattice.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GridPoint {
    pub x: i64,
    pub y: i64,
}

impl GridPoint {
    pub const ORIGIN: GridPoint = GridPoint { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        GridPoint { x, y }
    }

    pub fn offset(self, dx: i64, dy: i64) -> Self {
        GridPoint::new(self.x + dx, self.y + dy)
    }
}

impl fmt::Debug for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl From<(i64, i64)> for GridPoint {
    fn from((x, y): (i64, i64)) -> Self {
        GridPoint::new(x, y)
    }
}

/// Chessboard (L∞) distance.
pub fn d8(p: GridPoint, q: GridPoint) -> i64 {
    (q.x - p.x).abs().max((q.y - p.y).abs())
}

/// Exact slope `(q.y - p.y) / (q.x - p.x)`.
pub fn slope_between(p: GridPoint, q: GridPoint) -> Result<Rational> {
    if q.x == p.x {
        return Err(Error::VerticalPair);
    }
    Ok(Rational::new(q.y - p.y, q.x - p.x))
}

/// A slope that is either an exact fraction or a finite real approximation.
///
/// Approximate slopes only appear when rasterizing irrational directions
/// (the benchmark's `tan` slopes); everything on the recognition path is exact.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SlopeValue {
    Exact(Rational),
    Approximate(f64),
}

impl SlopeValue {
    pub fn approximate(v: f64) -> Option<Self> {
        v.is_finite().then_some(SlopeValue::Approximate(v))
    }

    pub fn exact(self) -> Option<Rational> {
        match self {
            SlopeValue::Exact(r) => Some(r),
            SlopeValue::Approximate(_) => None,
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            SlopeValue::Exact(r) => r.to_f64(),
            SlopeValue::Approximate(v) => v,
        }
    }
}

impl From<Rational> for SlopeValue {
    fn from(r: Rational) -> Self {
        SlopeValue::Exact(r)
    }
}

impl fmt::Display for SlopeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlopeValue::Exact(r) => write!(f, "{r}"),
            SlopeValue::Approximate(v) => write!(f, "~{v}"),
        }
    }
}

/// Slopes from an anchor to its successors, keyed by chessboard distance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuSeries {
    pub anchor: GridPoint,
    pub values: Vec<(i64, Rational)>,
}

impl MuSeries {
    pub fn get(&self, i: i64) -> Option<Rational> {
        usize::try_from(i - 1)
            .ok()
            .and_then(|k| self.values.get(k))
            .map(|&(_, mu)| mu)
    }
}

/// Checks that consecutive points are 8-adjacent and distinct.
pub fn check_connected(points: &[GridPoint]) -> Result<()> {
    match points.windows(2).position(|w| d8(w[0], w[1]) != 1) {
        Some(index) => Err(Error::NotConnected { index }),
        None => Ok(()),
    }
}

/// The μ series of `points[anchor_index]` over all following points.
///
/// Successors must move strictly rightwards, so the i-th successor sits at
/// chessboard distance i.
pub fn mu_series(points: &[GridPoint], anchor_index: usize) -> Result<MuSeries> {
    if anchor_index >= points.len() {
        return Err(Error::TooShort {
            needed: anchor_index + 1,
            got: points.len(),
        });
    }
    check_connected(points)?;
    let anchor = points[anchor_index];
    let mut values = Vec::with_capacity(points.len() - anchor_index - 1);
    for (offset, w) in points[anchor_index..].windows(2).enumerate() {
        if w[1].x <= w[0].x {
            return Err(Error::NonMonotone {
                index: anchor_index + offset + 1,
            });
        }
        let i = offset as i64 + 1;
        values.push((i, slope_between(anchor, w[1])?));
    }
    Ok(MuSeries { anchor, values })
}

/// One of the eight lattice symmetries: an optional x/y swap followed by
/// optional negation of each axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct OctantTransform {
    pub swap: bool,
    pub negate_x: bool,
    pub negate_y: bool,
}

impl OctantTransform {
    pub const IDENTITY: OctantTransform = OctantTransform {
        swap: false,
        negate_x: false,
        negate_y: false,
    };

    pub fn all() -> impl Iterator<Item = OctantTransform> {
        (0..8u8).map(|bits| OctantTransform {
            swap: bits & 1 != 0,
            negate_x: bits & 2 != 0,
            negate_y: bits & 4 != 0,
        })
    }

    pub fn apply(self, p: GridPoint) -> GridPoint {
        let (mut x, mut y) = if self.swap { (p.y, p.x) } else { (p.x, p.y) };
        if self.negate_x {
            x = -x;
        }
        if self.negate_y {
            y = -y;
        }
        GridPoint::new(x, y)
    }

    pub fn invert(self, p: GridPoint) -> GridPoint {
        let x = if self.negate_x { -p.x } else { p.x };
        let y = if self.negate_y { -p.y } else { p.y };
        if self.swap {
            GridPoint::new(y, x)
        } else {
            GridPoint::new(x, y)
        }
    }

    /// Transform sending the octant spanned by chain symbols `o` and `o+1`
    /// onto the first octant (symbols 0 and 1).
    pub fn for_octant(octant: u8) -> OctantTransform {
        let lo = DIRECTIONS[(octant % 8) as usize];
        let hi = DIRECTIONS[((octant + 1) % 8) as usize];
        let targets = [DIRECTIONS[0], DIRECTIONS[1]];
        Self::all()
            .find(|t| {
                let (a, b) = (t.apply(lo.into()), t.apply(hi.into()));
                targets.contains(&(a.x, a.y)) && targets.contains(&(b.x, b.y))
            })
            .expect("every octant has a symmetry onto the first")
    }
}

/// Maps 8-connected points into the first octant.
///
/// The octant is the pair of adjacent chain symbols `{o, o+1}` covering the
/// most steps (ties go to the smaller `o`), so a horizontal run stays put and
/// a vertical run is swapped onto the x axis.
pub fn octant_normalize(points: &[GridPoint]) -> Result<(Vec<GridPoint>, OctantTransform)> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut counts = [0usize; 8];
    for (index, w) in points.windows(2).enumerate() {
        let s = symbol_between(w[0], w[1]).ok_or(Error::NotConnected { index })?;
        counts[s as usize] += 1;
    }
    let octant = (0..8u8)
        .max_by_key(|&o| {
            (
                counts[o as usize] + counts[((o + 1) % 8) as usize],
                std::cmp::Reverse(o),
            )
        })
        .unwrap_or(0);
    let transform = if points.len() < 2 {
        OctantTransform::IDENTITY
    } else {
        OctantTransform::for_octant(octant)
    };
    Ok((
        points.iter().map(|&p| transform.apply(p)).collect(),
        transform,
    ))
}
