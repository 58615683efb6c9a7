//! Structure-equation text and JSON input.
//!
//! Two text forms are accepted:
//! * a Salamon tuple `(0,0,0,0,13+42,3/2*14-23)`: six slots, each `0` or a signed sum of
//!   two-digit index tokens with an optional `p/q*` multiplier;
//! * newline-separated equations `de5 = 3/2 e13 - e24` (missing generators are closed).
//!
//! Reversed index pairs such as `42` are normalized by sign.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exterior::{Form, DIM};
use crate::lie::LieAlgebra;
use crate::scalar::{parse_rational, re, Q};

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { chars: src.chars().collect(), pos: 0, line: 1, col: 1, _src: src }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    /// Skip spaces and tabs (not newlines).
    fn skip_inline_ws(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t' | '\r')) {
            self.bump();
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { line: self.line, col: self.col, msg: msg.into() })
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(x) if x == c => {
                self.bump();
                Ok(())
            }
            Some(x) => self.err(format!("expected '{c}', found '{x}'")),
            None => self.err(format!("expected '{c}', found end of input")),
        }
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|c| c.is_ascii_digit()) {
            s.push(c);
            self.bump();
        }
        s
    }

    /// Integer or p/q literal.
    fn rational(&mut self) -> Result<Q> {
        let (line, col) = (self.line, self.col);
        let p = self.digits();
        if p.is_empty() {
            return self.err("expected a number");
        }
        let mut text = p;
        if self.peek() == Some('/') {
            self.bump();
            let q = self.digits();
            if q.is_empty() {
                return self.err("expected a denominator");
            }
            text = format!("{text}/{q}");
        }
        parse_rational(&text).map_err(|msg| Error::Parse { line, col, msg })
    }

    /// A two-index token such as "13"; returns (i, j, sign of reordering).
    fn index_pair(&mut self) -> Result<(usize, usize)> {
        let mut idx = [0usize; 2];
        for slot in idx.iter_mut() {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let v = c.to_digit(10).unwrap() as usize;
                    if !(1..=DIM).contains(&v) {
                        return self.err(format!("index {v} out of range 1..{DIM}"));
                    }
                    *slot = v;
                    self.bump();
                }
                _ => return self.err("expected a two-digit index pair"),
            }
        }
        if idx[0] == idx[1] {
            return self.err(format!("repeated index in {}{}", idx[0], idx[1]));
        }
        Ok((idx[0], idx[1]))
    }
}

fn sign_of(c: &mut Cursor<'_>) -> Option<bool> {
    match c.peek() {
        Some('+') => {
            c.bump();
            Some(false)
        }
        Some('-') => {
            c.bump();
            Some(true)
        }
        _ => None,
    }
}

fn pair_term(i: usize, j: usize, coef: Q) -> Form<Q> {
    Form::term(&[i, j], re(coef))
}

/// One tuple slot: "0" or a signed sum of [p/q*]IJ tokens.
fn salamon_slot(c: &mut Cursor<'_>) -> Result<Form<Q>> {
    c.skip_ws();
    let mut form = Form::zero(2);
    let mut first = true;
    loop {
        c.skip_ws();
        let neg = match sign_of(c) {
            Some(n) => n,
            None if first => false,
            None => break,
        };
        c.skip_ws();
        // lone "0" slot
        if first && !neg && c.peek() == Some('0') {
            let save = (c.pos, c.line, c.col);
            c.bump();
            c.skip_ws();
            if matches!(c.peek(), Some(',' | ')')) {
                return Ok(form);
            }
            (c.pos, c.line, c.col) = save;
        }
        // either p/q*IJ or IJ: look ahead for '*' or '/'
        let start = c.pos;
        let mut k = start;
        while k < c.chars.len() && c.chars[k].is_ascii_digit() {
            k += 1;
        }
        let has_mult = matches!(c.chars.get(k), Some('*' | '/'));
        let coef = if has_mult {
            let q = c.rational()?;
            c.skip_ws();
            c.expect('*')?;
            c.skip_ws();
            q
        } else {
            Q::one()
        };
        let (i, j) = c.index_pair()?;
        let coef = if neg { -coef } else { coef };
        form = form + pair_term(i, j, coef);
        first = false;
    }
    Ok(form)
}

fn parse_salamon(c: &mut Cursor<'_>) -> Result<LieAlgebra<Q>> {
    c.skip_ws();
    c.expect('(')?;
    let mut de = Vec::new();
    for k in 0..DIM {
        de.push(salamon_slot(c)?);
        c.skip_ws();
        if k + 1 < DIM {
            if c.peek() == Some(')') {
                return c.err(format!("tuple has {} slots, expected {DIM}", k + 1));
            }
            c.expect(',')?;
        }
    }
    c.skip_ws();
    if c.peek() == Some(',') {
        return c.err(format!("tuple has more than {DIM} slots"));
    }
    c.expect(')')?;
    c.skip_ws();
    if let Some(x) = c.peek() {
        return c.err(format!("unexpected trailing '{x}'"));
    }
    LieAlgebra::new(de)
}

/// Right-hand side "3/2 e13 - e24" or "0".
fn equation_rhs(c: &mut Cursor<'_>) -> Result<Form<Q>> {
    let mut form = Form::zero(2);
    let mut first = true;
    loop {
        c.skip_inline_ws();
        if matches!(c.peek(), None | Some('\n' | '#')) {
            if first {
                return c.err("empty right-hand side");
            }
            break;
        }
        let neg = match sign_of(c) {
            Some(n) => n,
            None if first => false,
            None => return c.err("expected '+' or '-' between terms"),
        };
        c.skip_inline_ws();
        let mut coef = Q::one();
        if matches!(c.peek(), Some(d) if d.is_ascii_digit()) {
            coef = c.rational()?;
            c.skip_inline_ws();
            if c.peek() == Some('*') {
                c.bump();
                c.skip_inline_ws();
            }
            if first && coef.is_zero() && matches!(c.peek(), None | Some('\n' | '#')) {
                return Ok(form);
            }
        }
        c.expect('e')?;
        let (i, j) = c.index_pair()?;
        form = form + pair_term(i, j, if neg { -coef } else { coef });
        first = false;
    }
    Ok(form)
}

fn parse_equations(c: &mut Cursor<'_>) -> Result<LieAlgebra<Q>> {
    let mut de: Vec<Option<Form<Q>>> = vec![None; DIM];
    loop {
        c.skip_ws();
        match c.peek() {
            None => break,
            Some('#') => {
                while !matches!(c.peek(), None | Some('\n')) {
                    c.bump();
                }
                continue;
            }
            _ => {}
        }
        let (line, col) = (c.line, c.col);
        c.expect('d')?;
        c.expect('e')?;
        let k = c.digits();
        let k: usize = match k.parse() {
            Ok(v) if (1..=DIM).contains(&v) => v,
            Ok(v) => return Err(Error::Parse { line, col, msg: format!("generator de{v} out of range 1..{DIM}") }),
            Err(_) => return c.err("expected generator number after 'de'"),
        };
        c.skip_inline_ws();
        c.expect('=')?;
        let rhs = equation_rhs(c)?;
        if de[k - 1].is_some() {
            return Err(Error::Parse { line, col, msg: format!("duplicate equation for de{k}") });
        }
        de[k - 1] = Some(rhs);
        c.skip_inline_ws();
        if c.peek() == Some('#') {
            while !matches!(c.peek(), None | Some('\n')) {
                c.bump();
            }
        }
    }
    LieAlgebra::new(de.into_iter().map(|f| f.unwrap_or_else(|| Form::zero(2))).collect())
}

/// Parse a real form such as "-2 e1234 + 3/2*e1256"; every term must have the same degree.
pub fn parse_form(text: &str) -> Result<Form<Q>> {
    let mut c = Cursor::new(text);
    let mut form: Option<Form<Q>> = None;
    loop {
        c.skip_ws();
        if c.peek().is_none() {
            break;
        }
        let neg = match sign_of(&mut c) {
            Some(n) => n,
            None if form.is_none() => false,
            None => return c.err("expected '+' or '-' between terms"),
        };
        c.skip_ws();
        let mut coef = Q::one();
        if matches!(c.peek(), Some(d) if d.is_ascii_digit()) {
            coef = c.rational()?;
            c.skip_ws();
            if c.peek() == Some('*') {
                c.bump();
                c.skip_ws();
            }
        }
        if form.is_none() && coef.is_zero() && c.peek().is_none() {
            return Err(Error::Parse { line: c.line, col: c.col, msg: "degree of the zero form is ambiguous; write 0 e1234".into() });
        }
        let (line, col) = (c.line, c.col);
        c.expect('e')?;
        let idx: Vec<usize> = c.digits().chars().map(|d| d.to_digit(10).unwrap() as usize).collect();
        if idx.is_empty() || idx.iter().any(|i| !(1..=DIM).contains(i)) {
            return Err(Error::Parse { line, col, msg: format!("indices must be digits in 1..{DIM}") });
        }
        let mut sorted = idx.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != idx.len() {
            return Err(Error::Parse { line, col, msg: "repeated index".into() });
        }
        let t = Form::term(&idx, re(if neg { -coef } else { coef }));
        form = Some(match form {
            None => t,
            Some(f) if f.degree() == idx.len() => f + t,
            Some(_) => return Err(Error::Parse { line, col, msg: "terms of different degree".into() }),
        });
    }
    form.ok_or_else(|| Error::Parse { line: 1, col: 1, msg: "empty form".into() })
}

/// Parse a Salamon tuple or an equation list.
pub fn parse_structure_equations(text: &str) -> Result<LieAlgebra<Q>> {
    let mut c = Cursor::new(text);
    c.skip_ws();
    if c.peek() == Some('(') {
        parse_salamon(&mut c)
    } else {
        parse_equations(&mut c)
    }
}

/// Parse the JSON mirror {"de":[[[i,j,"p/q"],…],…]}.
pub fn parse_structure_json(value: &serde_json::Value) -> Result<LieAlgebra<Q>> {
    let bad = |m: String| Error::Input(format!("structure JSON: {m}"));
    let de = value.get("de").and_then(|v| v.as_array()).ok_or_else(|| bad("missing \"de\" array".into()))?;
    if de.len() != DIM {
        return Err(bad(format!("expected {DIM} entries, got {}", de.len())));
    }
    let mut forms = Vec::new();
    for (k, terms) in de.iter().enumerate() {
        let terms = terms.as_array().ok_or_else(|| bad(format!("de{} is not an array", k + 1)))?;
        let mut f = Form::zero(2);
        for t in terms {
            let t = t.as_array().filter(|t| t.len() == 3).ok_or_else(|| bad(format!("de{}: terms are [i,j,coeff]", k + 1)))?;
            let idx = |v: &serde_json::Value| {
                v.as_u64()
                    .map(|x| x as usize)
                    .filter(|x| (1..=DIM).contains(x))
                    .ok_or_else(|| bad(format!("de{}: index out of range", k + 1)))
            };
            let (i, j) = (idx(&t[0])?, idx(&t[1])?);
            if i == j {
                return Err(bad(format!("de{}: repeated index", k + 1)));
            }
            let coef = match &t[2] {
                serde_json::Value::String(s) => parse_rational(s).map_err(bad)?,
                serde_json::Value::Number(n) if n.is_i64() => Q::from_integer(BigInt::from(n.as_i64().unwrap())),
                _ => return Err(bad(format!("de{}: coefficient must be a rational string", k + 1))),
            };
            f = f + pair_term(i, j, coef);
        }
        forms.push(f);
    }
    LieAlgebra::new(forms)
}
