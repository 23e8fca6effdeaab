//! Element expressions: tree-pair text, interval-map text, or words in named
//! generators such as `A*B^-1*C`.
//!
//! Words compose like functions: `X*Y` applies `Y` first.

use cloneforge_core::intmap::{generator, h1, h2, rotation, v_n, x0, x1};
use cloneforge_core::{Error, PLMap, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Map(PLMap),
    /// A `pair ...` form, parsed later against the system it names.
    Pair(String),
}

pub fn parse_element(text: &str, d: u32) -> Result<Expr> {
    let trimmed = text.trim_start();
    if trimmed.starts_with("pair") {
        return Ok(Expr::Pair(text.to_string()));
    }
    if text.contains("->") {
        return PLMap::parse(text, d).map(Expr::Map);
    }
    parse_word(text, d).map(Expr::Map)
}

/// Names understood in words, for help texts.
pub const NAMES: &str = "A, B, C, pi0 (d = 2 only), x0, x1, h1, h2, rot, v<n>, id";

pub fn named(name: &str, d: u32) -> Option<Result<PLMap>> {
    let m = match name {
        "A" | "B" | "C" | "pi0" => {
            if d != 2 {
                return Some(Err(Error::InvalidElement(format!("{name} is defined for d = 2 only"))));
            }
            generator(name)
        }
        "id" => Ok(PLMap::identity(d)),
        "x0" => Ok(x0(d)),
        "x1" => Ok(x1(d)),
        "h1" => Ok(h1(d)),
        "h2" => Ok(h2(d)),
        "rot" => Ok(rotation(d)),
        _ => {
            let n: u32 = name.strip_prefix('v')?.parse().ok()?;
            v_n(d, n)
        }
    };
    Some(m)
}

pub fn parse_word(text: &str, d: u32) -> Result<PLMap> {
    let mut p = Parser {
        s: text.as_bytes(),
        pos: 0,
        d,
    };
    let m = p.word()?;
    p.skip_ws();
    if p.pos < p.s.len() {
        return Err(Error::parse(p.pos, format!("unexpected {:?}", p.s[p.pos] as char)));
    }
    Ok(m)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    d: u32,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn word(&mut self) -> Result<PLMap> {
        let mut acc = self.term()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.compose(&self.term()?)?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<PLMap> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        if self.s.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.s.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        let e: i64 = digits
            .parse()
            .map_err(|_| Error::parse(start, "expected an integer exponent"))?;
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<PLMap> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let m = self.word()?;
                if self.peek() != Some(b')') {
                    return Err(Error::parse(self.pos, "expected ')'"));
                }
                self.pos += 1;
                Ok(m)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self
                    .s
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                match named(name, self.d) {
                    Some(m) => m.map_err(|e| match e {
                        Error::Parse { .. } => e.at_offset(start),
                        other => Error::parse(start, other.to_string()),
                    }),
                    None => Err(Error::parse(
                        start,
                        format!("unknown generator {name:?}; known: {NAMES}"),
                    )),
                }
            }
            Some(c) => Err(Error::parse(self.pos, format!("unexpected {:?}", c as char))),
            None => Err(Error::parse(self.pos, "expected a generator")),
        }
    }
}
