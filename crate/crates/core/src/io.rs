//! Text formats shared by the CLI and fixtures.
//!
//! * point list: one `x y` integer pair per line
//! * chain file: `x y` start point on line 1, ASCII digit symbols on line 2

use crate::chaincode::ChainCode;
use crate::error::{Error, Result};
use crate::geometry::GridPoint;

fn parse_pair(line: &str, line_no: usize) -> Result<GridPoint> {
    let mut it = line.split_whitespace();
    let mut next = |what: &str| -> Result<i64> {
        let tok = it.next().ok_or_else(|| Error::Parse {
            line: line_no,
            msg: format!("missing {what} coordinate"),
        })?;
        tok.parse().map_err(|_| Error::Parse {
            line: line_no,
            msg: format!("{tok:?} is not an integer"),
        })
    };
    let p = GridPoint::new(next("x")?, next("y")?);
    if it.next().is_some() {
        return Err(Error::Parse {
            line: line_no,
            msg: "expected exactly two integers".into(),
        });
    }
    Ok(p)
}

/// Parses a point list. Blank lines are skipped.
pub fn parse_points(text: &str) -> Result<Vec<GridPoint>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_pair(l, i + 1))
        .collect()
}

pub fn format_points(points: &[GridPoint]) -> String {
    points
        .iter()
        .map(|p| format!("{} {}\n", p.x, p.y))
        .collect()
}

pub fn parse_chain(text: &str) -> Result<ChainCode> {
    let mut lines = text.lines();
    let first = lines
        .next()
        .filter(|l| !l.trim().is_empty())
        .ok_or(Error::Parse {
            line: 1,
            msg: "missing start point".into(),
        })?;
    let start = parse_pair(first, 1)?;
    let digits = lines.next().unwrap_or("").trim();
    if let Some(extra) = lines.find(|l| !l.trim().is_empty()) {
        return Err(Error::Parse {
            line: 3,
            msg: format!("unexpected trailing content {extra:?}"),
        });
    }
    ChainCode::from_digits(start, digits).map_err(|e| Error::Parse {
        line: 2,
        msg: e.to_string(),
    })
}

pub fn format_chain(chain: &ChainCode) -> String {
    format!("{} {}\n{}\n", chain.start.x, chain.start.y, chain.digits())
}

/// Which text format a file appears to be in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputFormat {
    Points,
    Chain,
}

/// A chain file has exactly two non-empty lines, the second all digits 0-7
/// with no spaces; anything else is read as a point list.
pub fn detect_format(text: &str) -> InputFormat {
    let lines: Vec<_> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    match lines.as_slice() {
        [_, second]
            if !second.trim().contains(char::is_whitespace)
                && second.trim().bytes().all(|b| (b'0'..=b'7').contains(&b)) =>
        {
            InputFormat::Chain
        }
        _ => InputFormat::Points,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_list_round_trip() {
        let pts = vec![GridPoint::new(0, 0), GridPoint::new(-3, 12)];
        let text = format_points(&pts);
        assert_eq!(text, "0 0\n-3 12\n");
        assert_eq!(parse_points(&text).unwrap(), pts);
    }

    #[test]
    fn point_list_errors() {
        assert!(matches!(
            parse_points("0 0\n1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_points("0 x\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_points("0 0 0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert_eq!(parse_points("").unwrap(), vec![]);
    }

    #[test]
    fn chain_file_round_trip() {
        let c = ChainCode::from_digits(GridPoint::new(2, -1), "0117").unwrap();
        let text = format_chain(&c);
        assert_eq!(text, "2 -1\n0117\n");
        assert_eq!(parse_chain(&text).unwrap(), c);
        assert_eq!(detect_format(&text), InputFormat::Chain);
    }

    #[test]
    fn chain_file_errors() {
        assert!(parse_chain("").is_err());
        assert!(matches!(
            parse_chain("0 0\n0192\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_chain("0 0\n01\n5 5\n").is_err());
    }

    #[test]
    fn detection() {
        assert_eq!(detect_format("0 0\n1 0\n"), InputFormat::Points);
        assert_eq!(detect_format("0 0\n"), InputFormat::Points);
        assert_eq!(detect_format("0 0\n1 0\n2 0\n"), InputFormat::Points);
        assert_eq!(detect_format("0 0\n01234567\n"), InputFormat::Chain);
    }
}
