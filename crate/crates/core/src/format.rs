//! Text formats: the polynomial grammar, matrix files and game files.
//!
//! Polynomials: `poly := term (('+'|'-') term)*`, `term := rational |
//! rational? 'e' ('^' natural)?`, `rational := integer ('/' positive-integer)?`.
//! Whitespace is insignificant; a leading sign, an optional `*` between
//! coefficient and `e`, `ε` for `e` and finite decimals such as `0.5` are
//! also accepted.
//!
//! Matrix files hold one row per line, entries separated by commas:
//!
//! ```text
//! # comment
//! dim 2
//! orientation column      # optional; `row` for row-stochastic input
//! labels a b              # optional state labels
//! 1 - e, e^2
//! e, 1 - e^2
//! ```
//!
//! Game files list the action labels of each player and then one line of
//! `u1,u2` payoff pairs per row action:
//!
//! ```text
//! p1: D Q
//! p2: d q
//! 5,5 0,0
//! 0,0 4,4
//! ```

use std::fmt::Write as _;

use num::{BigInt, One, Zero};

use crate::adaptive::NormalFormGame;
use crate::error::{Error, ParseError, Result};
use crate::matrix::{write_grid, PolyMatrix};
use crate::poly::EpsPoly;
use crate::rational::{self, Rational};

struct Cursor {
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Cursor {
    fn new(src: &str) -> Self {
        Cursor {
            chars: src.chars().enumerate().collect(),
            pos: 0,
        }
    }

    fn column(&self) -> usize {
        self.chars.get(self.pos).map_or(self.chars.len(), |c| c.0) + 1
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(0, self.column(), message)
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().map(|c| c.1).collect())
    }

    fn at_eps(&self) -> bool {
        matches!(self.peek(), Some('e' | 'ε'))
    }

    /// Unsigned rational or finite decimal.
    fn unsigned_rational(&mut self) -> Result<Rational, ParseError> {
        let whole = self.digits().ok_or_else(|| self.err("expected a number"))?;
        let mut value = Rational::from_integer(whole.parse::<BigInt>().expect("digits"));
        if self.eat('.') {
            let frac = self.digits().ok_or_else(|| self.err("expected digits after '.'"))?;
            let scale = BigInt::from(10u32).pow(frac.len() as u32);
            value += Rational::new(frac.parse::<BigInt>().expect("digits"), scale);
        }
        let save = self.pos;
        self.skip_ws();
        if self.eat('/') {
            self.skip_ws();
            let col = self.column();
            let denom = self
                .digits()
                .ok_or_else(|| self.err("expected a positive integer denominator"))?
                .parse::<BigInt>()
                .expect("digits");
            if denom.is_zero() {
                return Err(ParseError::new(0, col, "denominator must be positive"));
            }
            value /= Rational::from_integer(denom);
        } else {
            self.pos = save;
        }
        Ok(value)
    }

    fn eps_power(&mut self) -> Result<usize, ParseError> {
        self.pos += 1; // 'e'
        let save = self.pos;
        self.skip_ws();
        if !self.eat('^') {
            self.pos = save;
            return Ok(1);
        }
        self.skip_ws();
        let exp = self
            .digits()
            .ok_or_else(|| self.err("expected a natural-number exponent"))?;
        if matches!(self.peek(), Some('/' | '.')) {
            return Err(self.err("exponents must be natural numbers"));
        }
        exp.parse::<usize>()
            .map_err(|_| self.err("exponent is too large"))
    }

    fn term(&mut self) -> Result<EpsPoly, ParseError> {
        self.skip_ws();
        if self.at_eps() {
            let k = self.eps_power()?;
            return Ok(EpsPoly::monomial(Rational::one(), k));
        }
        let coeff = self.unsigned_rational()?;
        let save = self.pos;
        self.skip_ws();
        let starred = self.eat('*');
        if starred {
            self.skip_ws();
        }
        if self.at_eps() {
            let k = self.eps_power()?;
            return Ok(EpsPoly::monomial(coeff, k));
        }
        if starred {
            return Err(self.err("expected 'e' after '*'"));
        }
        self.pos = save;
        Ok(EpsPoly::constant(coeff))
    }

    fn poly(&mut self) -> Result<EpsPoly, ParseError> {
        self.skip_ws();
        let mut negative = false;
        if self.eat('-') {
            negative = true;
        } else {
            self.eat('+');
        }
        let mut acc = EpsPoly::zero();
        loop {
            let t = self.term()?;
            acc = if negative { &acc - &t } else { &acc + &t };
            self.skip_ws();
            match self.peek() {
                None => return Ok(acc),
                Some('+') => negative = false,
                Some('-') => negative = true,
                Some(c) => return Err(self.err(format!("unexpected character '{c}'"))),
            }
            self.pos += 1;
        }
    }
}

pub fn parse_poly(s: &str) -> Result<EpsPoly, ParseError> {
    let mut c = Cursor::new(s);
    if c.chars.iter().all(|x| x.1.is_whitespace()) {
        return Err(ParseError::new(0, 1, "empty polynomial"));
    }
    c.poly()
}

/// Rational in the grammar above, with an optional sign.
pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    let mut c = Cursor::new(s);
    c.skip_ws();
    let negative = c.eat('-');
    if !negative {
        c.eat('+');
    }
    c.skip_ws();
    let v = c.unsigned_rational()?;
    c.skip_ws();
    if let Some(ch) = c.peek() {
        return Err(c.err(format!("unexpected character '{ch}'")));
    }
    Ok(if negative { -v } else { v })
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

/// Parses one comma-separated row, reporting errors at `line_no`.
fn parse_row(line: &str, line_no: usize) -> Result<Vec<EpsPoly>, ParseError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for cell in line.split(',') {
        out.push(parse_poly(cell).map_err(|e| e.at_line(line_no, offset))?);
        offset += cell.chars().count() + 1;
    }
    Ok(out)
}

fn square_from_rows(rows: Vec<(usize, Vec<EpsPoly>)>, n: usize) -> Result<PolyMatrix, ParseError> {
    if rows.len() != n {
        let line = rows.last().map_or(0, |r| r.0);
        return Err(ParseError::new(line, 1, format!("expected {n} rows, found {}", rows.len())));
    }
    let mut data = Vec::with_capacity(n * n);
    for (line, row) in rows {
        if row.len() != n {
            return Err(ParseError::new(line, 1, format!("expected {n} entries, found {}", row.len())));
        }
        data.extend(row);
    }
    Ok(PolyMatrix::from_vec(n, n, data).expect("checked shape"))
}

/// Square grid of comma-separated polynomials without any header lines.
pub fn parse_poly_matrix(text: &str) -> Result<PolyMatrix, ParseError> {
    let rows = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !strip_comment(l).trim().is_empty())
        .map(|(k, l)| parse_row(strip_comment(l), k + 1).map(|r| (k + 1, r)))
        .collect::<Result<Vec<_>, _>>()?;
    let n = rows.len();
    square_from_rows(rows, n)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Orientation {
    /// Entry `(i, j)` is the probability of `j -> i`.
    #[default]
    Column,
    /// Entry `(i, j)` is the probability of `i -> j`; transposed on input.
    Row,
}

/// A transition matrix read from or written to a file, always stored
/// column-stochastic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFile {
    pub matrix: PolyMatrix,
    pub labels: Option<Vec<String>>,
}

impl MatrixFile {
    pub fn new(matrix: PolyMatrix) -> Self {
        MatrixFile {
            matrix,
            labels: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        MatrixFile::parse_with(text, None)
    }

    /// `force` overrides the orientation recorded in the file.
    pub fn parse_with(text: &str, force: Option<Orientation>) -> Result<Self, ParseError> {
        let mut dim = None;
        let mut orientation = Orientation::Column;
        let mut labels = None;
        let mut rows = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = strip_comment(raw);
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let mut words = trimmed.split_whitespace();
            let keyword = words.next().expect("nonempty");
            match keyword {
                "dim" if dim.is_none() && rows.is_empty() => {
                    let value: Vec<&str> = words.collect();
                    let n = match value.as_slice() {
                        [v] => v.parse::<usize>().ok().filter(|&n| n > 0),
                        _ => None,
                    };
                    dim = Some(n.ok_or_else(|| {
                        ParseError::new(line_no, 1, "expected `dim <positive integer>`")
                    })?);
                }
                "orientation" if rows.is_empty() => {
                    orientation = match words.collect::<Vec<_>>().as_slice() {
                        ["column"] => Orientation::Column,
                        ["row"] => Orientation::Row,
                        _ => {
                            return Err(ParseError::new(
                                line_no,
                                1,
                                "expected `orientation column` or `orientation row`",
                            ))
                        }
                    };
                }
                "labels" if rows.is_empty() => {
                    labels = Some(words.map(str::to_string).collect::<Vec<_>>());
                }
                _ => {
                    if dim.is_none() {
                        return Err(ParseError::new(line_no, 1, "missing `dim <n>` header"));
                    }
                    rows.push((line_no, parse_row(line, line_no)?));
                }
            }
        }
        let n = dim.ok_or_else(|| ParseError::new(0, 1, "missing `dim <n>` header"))?;
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(ParseError::new(0, 1, format!("expected {n} labels, found {}", l.len())));
            }
        }
        let mut matrix = square_from_rows(rows, n)?;
        if force.unwrap_or(orientation) == Orientation::Row {
            matrix = matrix.transpose();
        }
        Ok(MatrixFile { matrix, labels })
    }

    /// Exact rendering in column orientation; parses back to the same matrix.
    pub fn render(&self) -> String {
        let n = self.matrix.rows();
        let mut out = format!("dim {n}\n");
        if let Some(labels) = &self.labels {
            let _ = writeln!(out, "labels {}", labels.join(" "));
        }
        for r in 0..n {
            let row: Vec<String> = self.matrix.row(r).iter().map(|p| p.to_string()).collect();
            out.push_str(&row.join(", "));
            out.push('\n');
        }
        out
    }

    /// Column-aligned rendering for display, with `--decimal` support.
    pub fn render_grid(matrix: &PolyMatrix, decimal: Option<usize>) -> String {
        let cells: Vec<String> = matrix
            .entries()
            .map(|(_, p)| match (decimal, p.is_constant()) {
                (Some(k), true) => rational::render_decimal(&p.constant_term(), k),
                _ => p.to_string(),
            })
            .collect();
        let mut out = String::new();
        let _ = write_grid(&mut out, matrix.rows(), matrix.cols(), &cells);
        out
    }
}

pub fn parse_game(text: &str) -> Result<NormalFormGame, Error> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, strip_comment(l).trim()))
        .filter(|(_, l)| !l.is_empty());

    let mut labels = |prefix: &str| -> Result<Vec<String>, ParseError> {
        let (line_no, line) = lines
            .next()
            .ok_or_else(|| ParseError::new(0, 1, format!("missing `{prefix}` line")))?;
        let rest = line
            .strip_prefix(prefix)
            .ok_or_else(|| ParseError::new(line_no, 1, format!("expected `{prefix}` followed by action labels")))?;
        let actions: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
        if actions.is_empty() {
            return Err(ParseError::new(line_no, prefix.len() + 1, "no action labels"));
        }
        Ok(actions)
    };
    let p1 = labels("p1:")?;
    let p2 = labels("p2:")?;

    let mut payoffs = Vec::new();
    for (line_no, line) in lines {
        let mut row = Vec::new();
        let mut column = 1;
        let raw = line;
        for cell in raw.split_whitespace() {
            let offset = raw[column - 1..].find(cell).unwrap_or(0) + column - 1;
            let (a, b) = cell.split_once(',').ok_or_else(|| {
                ParseError::new(line_no, offset + 1, format!("expected `u1,u2`, found `{cell}`"))
            })?;
            let u1 = parse_rational(a).map_err(|e| e.at_line(line_no, offset))?;
            let u2 = parse_rational(b).map_err(|e| e.at_line(line_no, offset + a.len() + 1))?;
            row.push((u1, u2));
            column = offset + cell.len() + 1;
        }
        if row.len() != p2.len() {
            return Err(ParseError::new(
                line_no,
                1,
                format!("expected {} payoff pairs, found {}", p2.len(), row.len()),
            )
            .into());
        }
        payoffs.push(row);
    }
    if payoffs.len() != p1.len() {
        return Err(ParseError::new(
            0,
            1,
            format!("expected {} payoff rows, found {}", p1.len(), payoffs.len()),
        )
        .into());
    }
    NormalFormGame::new(p1, p2, payoffs)
}

pub fn looks_like_game(text: &str) -> bool {
    text.lines()
        .map(|l| strip_comment(l).trim())
        .find(|l| !l.is_empty())
        .is_some_and(|l| l.starts_with("p1:"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adaptive::Player;
    use crate::rational::{int, rat};

    #[test]
    fn grammar_examples() {
        let p = parse_poly("1/2 - 1/2 e^5").unwrap();
        assert_eq!(p.coeff(0), rat(1, 2));
        assert_eq!(p.coeff(5), rat(-1, 2));
        assert_eq!(parse_poly("e").unwrap(), EpsPoly::eps());
        assert!(parse_poly("0").unwrap().is_zero());
        assert_eq!(parse_poly("0.5 - e^3").unwrap(), parse_poly("1/2-e^3").unwrap());
        assert_eq!(parse_poly("-2*e + e^2").unwrap().coeff(1), int(-2));
        assert_eq!(parse_poly("2ε").unwrap().coeff(1), int(2));
        assert_eq!(parse_poly("1 - e + e").unwrap(), EpsPoly::one());
    }

    #[test]
    fn grammar_errors() {
        let err = parse_poly("e^1/2").unwrap_err();
        assert!(err.message.contains("natural"), "{err}");
        assert!(parse_poly("1/0").is_err());
        assert!(parse_poly("").is_err());
        assert!(parse_poly("1 +").is_err());
        let err = parse_poly("1 x").unwrap_err();
        assert_eq!(err.column, 3);
    }

    #[test]
    fn matrix_file_with_header() {
        let text = "# two states\ndim 2\nlabels a b\n1 - e, e^2\ne, 1 - e^2\n";
        let f = MatrixFile::parse(text).unwrap();
        assert_eq!(f.labels, Some(vec!["a".into(), "b".into()]));
        assert_eq!(f.matrix[(1, 0)], EpsPoly::eps());
        assert_eq!(MatrixFile::parse(&f.render()).unwrap(), f);
    }

    #[test]
    fn row_orientation_transposes() {
        let text = "dim 2\norientation row\n1/4, 3/4\n1, 0\n";
        let f = MatrixFile::parse(text).unwrap();
        assert_eq!(f.matrix[(0, 1)], EpsPoly::one());
        assert_eq!(f.matrix[(1, 0)], EpsPoly::constant(rat(3, 4)));
        let forced = MatrixFile::parse_with("dim 2\n1/4, 3/4\n1, 0\n", Some(Orientation::Row)).unwrap();
        assert_eq!(forced, f);
    }

    #[test]
    fn matrix_file_errors_carry_positions() {
        let err = MatrixFile::parse("dim 2\n1, 0\n0, 1 +* e\n").unwrap_err();
        assert_eq!(err.line, 3);
        assert!(err.column > 3, "{err}");
        let err = MatrixFile::parse("1, 0\n0, 1\n").unwrap_err();
        assert!(err.message.contains("dim"));
        let err = MatrixFile::parse("dim 2\n1, 0, 0\n0, 1\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(MatrixFile::parse("dim 2\n1, 0\n").is_err());
    }

    #[test]
    fn game_file() {
        let g = parse_game("p1: D Q\np2: d q\n5,5 0,0\n0,0 4,4\n").unwrap();
        assert_eq!(g.actions(Player::One), &["D".to_string(), "Q".to_string()]);
        assert_eq!(g.payoff(1, 1), &(int(4), int(4)));
        assert!(looks_like_game("# c\np1: A B\n"));
        assert!(!looks_like_game("dim 2\n"));
    }

    #[test]
    fn game_file_errors() {
        let err = parse_game("p1: D Q\np2: d q\n5,5 0;0\n0,0 4,4\n").unwrap_err();
        match err {
            Error::Parse(p) => assert_eq!((p.line, p.column), (3, 5)),
            other => panic!("{other}"),
        }
        assert!(parse_game("p1: D Q\np2: d q\n5,5 0,0\n").is_err());
        assert!(parse_game("p2: d q\n").is_err());
    }
}
