//! Text formats for games.
//!
//! `.bgame`: a line `m n`, then `m` rows of `A`, a blank line, and `m` rows of `B`.
//! `.uvg`: a line `m n`, a line with the `n` labels `ell(1..n)`, then `m` rows of `B`.
//! Entries are `p/q` or integers separated by whitespace.

use crate::error::{Error, Result};
use crate::game::{BimatrixGame, MixedProfile, UnitVectorGame};
use crate::matrix::Matrix;
use crate::rational::{format_rational, parse_rational, Rational};

struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &text[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &text[s..]));
    }
    out
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            lines: text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect(),
            pos: 0,
        }
    }

    /// Next non-blank line, skipping `#` comments.
    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        while self.pos < self.lines.len() {
            let (no, line) = self.lines[self.pos];
            self.pos += 1;
            let trimmed = line.trim();
            if !trimmed.is_empty() && !trimmed.starts_with('#') {
                return Some((no, line));
            }
        }
        None
    }

    fn last_line(&self) -> usize {
        self.lines.len() + 1
    }

    fn header(&mut self) -> Result<(usize, usize)> {
        let (no, line) = self.next_content().ok_or_else(|| parse_err(1, 1, "missing `m n` header"))?;
        let toks = tokens(line);
        if toks.len() != 2 {
            return Err(parse_err(no, 1, "header must be `m n`"));
        }
        let mut dims = [0usize; 2];
        for (d, (col, t)) in dims.iter_mut().zip(&toks) {
            *d = t.parse().ok().filter(|&v: &usize| v >= 1).ok_or_else(|| parse_err(no, *col, format!("expected a positive integer, found `{t}`")))?;
        }
        Ok((dims[0], dims[1]))
    }

    fn rational_row(&mut self, width: usize, what: &str) -> Result<Vec<Rational>> {
        let last = self.last_line();
        let (no, line) = self.next_content().ok_or_else(|| parse_err(last, 1, format!("missing row of {what}")))?;
        let toks = tokens(line);
        if toks.len() != width {
            return Err(parse_err(no, 1, format!("expected {width} entries in {what}, found {}", toks.len())));
        }
        toks.into_iter()
            .map(|(col, t)| parse_rational(t).ok_or_else(|| parse_err(no, col, format!("invalid rational `{t}`"))))
            .collect()
    }

    fn matrix(&mut self, rows: usize, cols: usize, what: &str) -> Result<Matrix> {
        let rows = (0..rows).map(|_| self.rational_row(cols, what)).collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(rows)
    }

    fn expect_end(&mut self) -> Result<()> {
        match self.next_content() {
            Some((no, _)) => Err(parse_err(no, 1, "unexpected trailing content")),
            None => Ok(()),
        }
    }
}

pub fn parse_bgame(text: &str) -> Result<BimatrixGame> {
    let mut lines = Lines::new(text);
    let (m, n) = lines.header()?;
    let a = lines.matrix(m, n, "A")?;
    let b = lines.matrix(m, n, "B")?;
    lines.expect_end()?;
    BimatrixGame::new(a, b)
}

pub fn parse_uvg(text: &str) -> Result<UnitVectorGame> {
    let mut lines = Lines::new(text);
    let (m, n) = lines.header()?;
    let last = lines.last_line();
    let (no, line) = lines.next_content().ok_or_else(|| parse_err(last, 1, "missing label line"))?;
    let toks = tokens(line);
    if toks.len() != n {
        return Err(parse_err(no, 1, format!("expected {n} labels, found {}", toks.len())));
    }
    let mut ell = Vec::with_capacity(n);
    for (col, t) in toks {
        let l: usize = t.parse().map_err(|_| parse_err(no, col, format!("invalid label `{t}`")))?;
        if l == 0 || l > m {
            return Err(parse_err(no, col, format!("label {l} outside 1..={m}")));
        }
        ell.push(l);
    }
    let b = lines.matrix(m, n, "B")?;
    lines.expect_end()?;
    UnitVectorGame::new(m, ell, b)
}

/// Reads either format, deciding by whether the second content line holds labels
/// followed by exactly `m` rows.
pub fn parse_any(text: &str) -> Result<BimatrixGame> {
    match parse_bgame(text) {
        Ok(g) => Ok(g),
        Err(bgame_err) => parse_uvg(text).map(|u| crate::game::unit_vector_game(&u)).map_err(|_| bgame_err),
    }
}

/// Parses a profile `x1 ... xm ; y1 ... yn` on one line, checking it against the game.
pub fn parse_profile(line: &str, m: usize, n: usize) -> Result<MixedProfile> {
    let Some(split) = line.find(';') else {
        return Err(parse_err(1, 1, "profile must be `x1 ... xm ; y1 ... yn`"));
    };
    let part = |offset: usize, text: &str, len: usize, who: &str| -> Result<Vec<Rational>> {
        let toks = tokens(text);
        if toks.len() != len {
            return Err(parse_err(1, offset + 1, format!("expected {len} entries for {who}, found {}", toks.len())));
        }
        toks.into_iter()
            .map(|(col, t)| parse_rational(t).ok_or_else(|| parse_err(1, offset + col, format!("invalid rational `{t}`"))))
            .collect()
    };
    let x = part(0, &line[..split], m, "x")?;
    let y = part(split + 1, &line[split + 1..], n, "y")?;
    MixedProfile::new(x, y)
}

fn write_matrix(out: &mut String, m: &Matrix) {
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(format_rational).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
}

pub fn write_bgame(game: &BimatrixGame) -> String {
    let mut out = format!("{} {}\n", game.m(), game.n());
    write_matrix(&mut out, game.a());
    out.push('\n');
    write_matrix(&mut out, game.b());
    out
}

pub fn write_uvg(u: &UnitVectorGame) -> String {
    let labels: Vec<String> = u.ell().iter().map(ToString::to_string).collect();
    let mut out = format!("{} {}\n{}\n", u.m(), u.n(), labels.join(" "));
    write_matrix(&mut out, u.b());
    out
}
