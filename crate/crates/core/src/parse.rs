//! A small reader for polynomial expressions and `{{…},{…}}` matrix literals
//! with integer coefficients.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::poly::{SparsePoly, WeightedRing};
use crate::polymat::PolyMatrix;

struct Parser<'a, F> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Arc<WeightedRing>,
    resolve: F,
}

impl<'a, F: Fn(&str) -> Option<usize>> Parser<'a, F> {
    fn err(&self, what: &str) -> Error {
        Error::InvalidArgument(format!("parse error at byte {}: {what}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<SparsePoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<SparsePoly> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<SparsePoly> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.factor()?)
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = core::str::from_utf8(&self.src[start..self.pos]).map_err(|_| self.err("utf8"))?;
                let v: u64 = text.parse().map_err(|_| self.err("integer"))?;
                Ok(SparsePoly::constant(self.ring, self.ring.field().from_u64(v)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = core::str::from_utf8(&self.src[start..self.pos]).map_err(|_| self.err("utf8"))?;
                let idx = (self.resolve)(name).ok_or_else(|| self.err(&format!("unknown variable {name}")))?;
                Ok(SparsePoly::var(self.ring, idx))
            }
            _ => Err(self.err("expected a factor")),
        }
    }
}

/// Parses a single polynomial expression.
pub fn parse_poly(ring: &Arc<WeightedRing>, text: &str, resolve: impl Fn(&str) -> Option<usize>) -> Result<SparsePoly> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, ring, resolve };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Parses `{{a, b}, {c, d}}` into a matrix.
pub fn parse_matrix(ring: &Arc<WeightedRing>, text: &str, resolve: impl Fn(&str) -> Option<usize>) -> Result<PolyMatrix> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, ring, resolve };
    let mut rows: Vec<Vec<SparsePoly>> = Vec::new();
    p.expect(b'{')?;
    loop {
        p.expect(b'{')?;
        let mut row = Vec::new();
        loop {
            row.push(p.expr()?);
            match p.peek() {
                Some(b',') => p.pos += 1,
                Some(b'}') => {
                    p.pos += 1;
                    break;
                }
                _ => return Err(p.err("expected ',' or '}'")),
            }
        }
        rows.push(row);
        match p.peek() {
            Some(b',') => p.pos += 1,
            Some(b'}') => {
                p.pos += 1;
                break;
            }
            _ => return Err(p.err("expected ',' or '}'")),
        }
    }
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    let ncols = rows[0].len();
    if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
        return Err(Error::DimensionMismatch { expected: ncols, found: bad.len() });
    }
    let nrows = rows.len();
    let flat: Vec<SparsePoly> = rows.into_iter().flatten().collect();
    Ok(PolyMatrix::from_fn(ring, nrows, ncols, |r, c| flat[r * ncols + c].clone()))
}

/// Resolver for names of the form `{prefix}{k}` or `{prefix}_{k}`, 1-based.
pub fn indexed_names(prefix: &str, n: usize) -> impl Fn(&str) -> Option<usize> + '_ {
    move |name: &str| {
        let rest = name.strip_prefix(prefix)?;
        let rest = rest.strip_prefix('_').unwrap_or(rest);
        let k: usize = rest.parse().ok()?;
        (1..=n).contains(&k).then(|| k - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn parses_nested_expressions() {
        let f = make_field(313).unwrap();
        let r = WeightedRing::standard(f, "y", 3);
        let p = parse_poly(&r, "2*(y_1*y_2 - y_3) + -y_1", indexed_names("y", 3)).unwrap();
        let y = |i| SparsePoly::var(&r, i);
        let expect = &(&(&y(0) * &y(1)) - &y(2)).scale(f.from_u64(2)) - &y(0);
        assert_eq!(p, expect);
    }

    #[test]
    fn parses_matrix_literal() {
        let f = make_field(313).unwrap();
        let r = WeightedRing::standard(f, "y", 2);
        let m = parse_matrix(&r, "{{y_1, 0},\n{1, y_2*y_2}}", indexed_names("y", 2)).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 2));
        assert!(m.get(0, 1).is_zero());
        assert!(parse_matrix(&r, "{{y_1},{y_2, y_1}}", indexed_names("y", 2)).is_err());
        assert!(parse_poly(&r, "y_7", indexed_names("y", 2)).is_err());
    }
}
