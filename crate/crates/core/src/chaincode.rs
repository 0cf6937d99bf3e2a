//! Freeman chain codes and incremental checks of the first two straightness
//! properties of chains.
//!
//! Symbols follow the usual counter-clockwise numbering starting at +x:
//!
//! ```text
//!   3 2 1
//!   4 . 0
//!   5 6 7
//! ```
//!
//! Freeman's third property (uniform spacing of the single symbol) is not
//! checked here; the recognizer's slope envelope covers that ground.

use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{check_connected, GridPoint};

/// Unit moves indexed by chain symbol.
pub const DIRECTIONS: [(i64, i64); 8] = [
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
];

/// Chain symbol of the unit move `p -> q`, or `None` if the points are not 8-adjacent.
pub fn symbol_between(p: GridPoint, q: GridPoint) -> Option<u8> {
    let d = (q.x - p.x, q.y - p.y);
    DIRECTIONS.iter().position(|&m| m == d).map(|s| s as u8)
}

/// A start point followed by unit moves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainCode {
    pub start: GridPoint,
    pub symbols: Vec<u8>,
}

impl ChainCode {
    /// Parses an ASCII digit string of symbols.
    pub fn from_digits(start: GridPoint, digits: &str) -> Result<ChainCode> {
        let symbols = digits
            .bytes()
            .map(|b| match b {
                b'0'..=b'7' => Ok(b - b'0'),
                other => Err(Error::InvalidSymbol(other)),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ChainCode { start, symbols })
    }

    pub fn digits(&self) -> String {
        self.symbols.iter().map(|&s| char::from(b'0' + s)).collect()
    }
}

impl fmt::Display for ChainCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.digits())
    }
}

pub fn encode(points: &[GridPoint]) -> Result<ChainCode> {
    let start = *points.first().ok_or(Error::EmptyInput)?;
    check_connected(points)?;
    let symbols = points
        .windows(2)
        .map(|w| symbol_between(w[0], w[1]).expect("adjacency checked"))
        .collect();
    Ok(ChainCode { start, symbols })
}

pub fn decode(chain: &ChainCode) -> Result<Vec<GridPoint>> {
    let mut out = Vec::with_capacity(chain.symbols.len() + 1);
    let mut p = chain.start;
    out.push(p);
    for &s in &chain.symbols {
        let (dx, dy) = *DIRECTIONS.get(s as usize).ok_or(Error::InvalidSymbol(s))?;
        p = p.offset(dx, dy);
        out.push(p);
    }
    Ok(out)
}

/// Which straightness property a chain broke.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChainProperty {
    /// At most two symbols, differing by one modulo eight.
    TwoAdjacentSymbols,
    /// One of the two symbols always occurs singly.
    SingleOccurrence,
}

/// Running evaluation of properties 1 and 2 over a chain prefix.
///
/// The first symbol seen twice in a row becomes the run symbol; from then on
/// the other symbol may only occur singly. Once a property fails the state
/// stays failed until replaced by a fresh one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct PropertyState {
    seen: [Option<u8>; 2],
    run_symbol: Option<u8>,
    last_symbol: Option<u8>,
    violation: Option<ChainProperty>,
}

impl PropertyState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn ok(&self) -> bool {
        self.violation.is_none()
    }

    pub fn violation(&self) -> Option<ChainProperty> {
        self.violation
    }

    pub fn seen_symbols(&self) -> impl Iterator<Item = u8> + '_ {
        self.seen.iter().flatten().copied()
    }

    pub fn last_symbol(&self) -> Option<u8> {
        self.last_symbol
    }

    /// The symbol that must occur singly, once a run symbol is known.
    pub fn single_symbol(&self) -> Option<u8> {
        let run = self.run_symbol?;
        self.seen_symbols().find(|&s| s != run)
    }

    /// Folds one symbol into the state.
    pub fn step(self, symbol: u8) -> PropertyState {
        if !self.ok() {
            return self;
        }
        let mut next = self;
        next.last_symbol = Some(symbol);
        let fail = |mut s: PropertyState, p| {
            s.violation = Some(p);
            s
        };

        match self.seen {
            [None, _] => next.seen[0] = Some(symbol),
            [Some(a), None] if a != symbol => {
                let diff = (symbol + 8 - a) % 8;
                if diff != 1 && diff != 7 {
                    return fail(next, ChainProperty::TwoAdjacentSymbols);
                }
                next.seen[1] = Some(symbol);
            }
            [Some(a), Some(b)] if a != symbol && b != symbol => {
                return fail(next, ChainProperty::TwoAdjacentSymbols);
            }
            _ => {}
        }

        if self.last_symbol == Some(symbol) {
            match self.run_symbol {
                None => next.run_symbol = Some(symbol),
                Some(r) if r != symbol => return fail(next, ChainProperty::SingleOccurrence),
                Some(_) => {}
            }
        }
        next
    }
}

/// Free-function form of [`PropertyState::step`].
pub fn property_step(state: PropertyState, symbol: u8) -> PropertyState {
    state.step(symbol)
}
