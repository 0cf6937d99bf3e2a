//! Segmentation of 8-connected point sequences into digital straight
//! segments.
//!
//! Each run starts at the last vertex found. Every new point is first pushed
//! through the chain-code property checks; if those pass, its slope `μ(i)`
//! relative to the anchor is folded into the running envelope
//!
//! ```text
//! l(i) = max_j (μ(j) - 1/j)      u(i) = min_j (μ(j) + 1/j)
//! ```
//!
//! Inside one digital straight segment `u(i) - l(i) >= 1/i` always holds, so
//! the first point breaking it marks the previous point as a vertex. When the
//! run is steeper than the diagonal, `μ` is taken as `Δx/Δy` instead.

use crate::benchmark::oracle_is_dss;
use crate::chaincode::{symbol_between, ChainProperty, PropertyState};
use crate::error::{Error, Result};
use crate::geometry::{check_connected, d8, octant_normalize, GridPoint};
use crate::rational::Rational;

/// Slope from `anchor` to `p`, reciprocal when `inverted`.
pub fn mu_relative(anchor: GridPoint, p: GridPoint, inverted: bool) -> Result<Rational> {
    let (dx, dy) = (p.x - anchor.x, p.y - anchor.y);
    let (num, den) = if inverted { (dx, dy) } else { (dy, dx) };
    if den == 0 {
        return Err(Error::VerticalPair);
    }
    Ok(Rational::new(num, den))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Inside,
    Vertex,
}

/// Running lower/upper slope bounds from an anchor vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SlopeEnvelope {
    pub anchor: GridPoint,
    pub last: GridPoint,
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
    pub i: i64,
    pub inverted: bool,
}

impl SlopeEnvelope {
    pub fn new(anchor: GridPoint) -> Self {
        SlopeEnvelope {
            anchor,
            last: anchor,
            lower: None,
            upper: None,
            i: 0,
            inverted: false,
        }
    }

    pub fn with_inverted(mut self, inverted: bool) -> Self {
        self.inverted = inverted;
        self
    }

    /// `u - l`, once at least one point has been folded in.
    pub fn width(&self) -> Option<Rational> {
        Some(self.upper? - self.lower?)
    }

    /// Folds `next` into the envelope.
    ///
    /// The returned envelope always includes `next`, even on a vertex verdict,
    /// so callers can inspect the values that triggered it.
    pub fn update(&self, next: GridPoint) -> Result<(SlopeEnvelope, Verdict)> {
        if d8(self.last, next) != 1 {
            return Err(Error::NotAdjacent);
        }
        let i = d8(self.anchor, next);
        if i != self.i + 1 {
            return Err(Error::DistanceMismatch {
                expected: self.i + 1,
                got: i,
            });
        }
        let mu = mu_relative(self.anchor, next, self.inverted)?;
        let step = Rational::new(1, i);
        let lower = match self.lower {
            Some(l) => l.max(mu - step),
            None => mu - step,
        };
        let upper = match self.upper {
            Some(u) => u.min(mu + step),
            None => mu + step,
        };
        let env = SlopeEnvelope {
            last: next,
            lower: Some(lower),
            upper: Some(upper),
            i,
            ..*self
        };
        let verdict = if upper - lower < step {
            Verdict::Vertex
        } else {
            Verdict::Inside
        };
        Ok((env, verdict))
    }
}

/// Free-function form of [`SlopeEnvelope::update`].
pub fn envelope_update(env: &SlopeEnvelope, next: GridPoint) -> Result<(SlopeEnvelope, Verdict)> {
    env.update(next)
}

/// Why a vertex was emitted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexCause {
    ChainProperty1,
    ChainProperty2,
    SlopeEnvelope,
    /// The run crossed back below the diagonal after switching to reciprocal slopes.
    DirectionFlip,
}

impl VertexCause {
    pub const ALL: [VertexCause; 4] = [
        VertexCause::ChainProperty1,
        VertexCause::ChainProperty2,
        VertexCause::SlopeEnvelope,
        VertexCause::DirectionFlip,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            VertexCause::ChainProperty1 => "chain-property-1",
            VertexCause::ChainProperty2 => "chain-property-2",
            VertexCause::SlopeEnvelope => "slope-envelope",
            VertexCause::DirectionFlip => "direction-flip",
        }
    }

    pub fn is_chain_property(self) -> bool {
        matches!(
            self,
            VertexCause::ChainProperty1 | VertexCause::ChainProperty2
        )
    }
}

impl From<ChainProperty> for VertexCause {
    fn from(p: ChainProperty) -> Self {
        match p {
            ChainProperty::TwoAdjacentSymbols => VertexCause::ChainProperty1,
            ChainProperty::SingleOccurrence => VertexCause::ChainProperty2,
        }
    }
}

impl std::str::FromStr for VertexCause {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        VertexCause::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown vertex cause {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub index: usize,
    pub point: GridPoint,
    pub cause: VertexCause,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SegmentationResult {
    pub vertices: Vec<Vertex>,
    /// Inclusive index ranges; neighbours share their vertex.
    pub segments: Vec<(usize, usize)>,
    /// Segments that failed the exact straightness check. Only filled by
    /// [`segment_audited`].
    pub heuristic_segments: Vec<usize>,
}

/// One envelope update, for plotting and debugging.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceRow {
    pub index: usize,
    pub i: i64,
    pub mu: Rational,
    pub lower: Rational,
    pub upper: Rational,
}

struct Run {
    props: PropertyState,
    env: SlopeEnvelope,
}

impl Run {
    fn start(anchor: GridPoint) -> Run {
        Run {
            props: PropertyState::new(),
            env: SlopeEnvelope::new(anchor),
        }
    }
}

fn segment_impl(
    points: &[GridPoint],
    mut trace: Option<&mut Vec<TraceRow>>,
) -> Result<SegmentationResult> {
    if points.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: points.len(),
        });
    }
    check_connected(points)?;

    let mut vertices = Vec::new();
    let mut run = Run::start(points[0]);
    let mut idx = 1;
    while idx < points.len() {
        let (prev, p) = (points[idx - 1], points[idx]);
        let symbol = symbol_between(prev, p).expect("adjacency checked");
        let props = run.props.step(symbol);
        let mut cause = props.violation().map(VertexCause::from);

        let mut env = run.env;
        if cause.is_none() {
            let (dx, dy) = ((p.x - env.anchor.x).abs(), (p.y - env.anchor.y).abs());
            if env.inverted && dx > dy {
                cause = Some(VertexCause::DirectionFlip);
            } else if !env.inverted && dy > dx {
                env.inverted = true;
            }
        }
        if cause.is_none() {
            let (next, verdict) = env.update(p)?;
            if let Some(t) = trace.as_deref_mut() {
                t.push(TraceRow {
                    index: idx,
                    i: next.i,
                    mu: mu_relative(next.anchor, p, next.inverted)?,
                    lower: next.lower.expect("set by update"),
                    upper: next.upper.expect("set by update"),
                });
            }
            if verdict == Verdict::Vertex {
                cause = Some(VertexCause::SlopeEnvelope);
            } else {
                run = Run { props, env: next };
            }
        }

        if let Some(cause) = cause {
            // the previous point closes the current segment and anchors the
            // next one; re-examine `p` from there
            vertices.push(Vertex {
                index: idx - 1,
                point: prev,
                cause,
            });
            run = Run::start(prev);
            continue;
        }
        idx += 1;
    }

    let mut segments = Vec::with_capacity(vertices.len() + 1);
    let mut start = 0;
    for v in &vertices {
        segments.push((start, v.index));
        start = v.index;
    }
    segments.push((start, points.len() - 1));
    Ok(SegmentationResult {
        vertices,
        segments,
        heuristic_segments: Vec::new(),
    })
}

/// Splits an 8-connected sequence into digital straight segments.
pub fn segment(points: &[GridPoint]) -> Result<SegmentationResult> {
    segment_impl(points, None)
}

/// [`segment`] plus the per-step envelope values.
pub fn segment_with_trace(points: &[GridPoint]) -> Result<(SegmentationResult, Vec<TraceRow>)> {
    let mut trace = Vec::new();
    let result = segment_impl(points, Some(&mut trace))?;
    Ok((result, trace))
}

/// Exact straightness check of one recognized run, in any octant.
pub fn is_exact_segment(points: &[GridPoint]) -> bool {
    let Ok((normalized, _)) = octant_normalize(points) else {
        return false;
    };
    oracle_is_dss(&normalized).unwrap_or(false)
}

/// [`segment`], then checks every emitted segment with the exact oracle and
/// lists the ones that are not digital straight segments.
pub fn segment_audited(points: &[GridPoint]) -> Result<SegmentationResult> {
    let mut result = segment(points)?;
    result.heuristic_segments = result
        .segments
        .iter()
        .enumerate()
        .filter(|(_, &(a, b))| !is_exact_segment(&points[a..=b]))
        .map(|(k, _)| k)
        .collect();
    Ok(result)
}
