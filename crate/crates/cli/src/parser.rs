//! Operator expressions: a small recursive-descent parser producing `DifferentialOperator`s.
//!
//! ```text
//! op      := sum | "p(Dx)=" sum ";" "q(Dt)=" sum
//! sum     := ["+"|"-"] term (("+"|"-") term)*
//! term    := factor (["*"] factor)*          coefficients precede derivatives
//! factor  := atom ("^" int)? | "-" factor
//! atom    := rational | "i" | "Dt" | "Dx" | "sin(" [int] "t)" | "cos(" [int] "t)" | "(" sum ")"
//! ```
//!
//! Juxtaposition is multiplication, so `(3/2)i`, `3/2 i` and `1/2i` all mean
//! `3/2 * i`. Decimal literals are accepted only with a rationalization tolerance.
//! A sum normalizes to `Dt + a(t) Dx + q(t)`, `c1 Dt + c2 Dx + c3`, or a
//! separable polynomial operator; in the `p(Dx)=...; q(Dt)=...` form the two
//! polynomials are the symbol polynomials `p(xi)`, `q(k)` themselves.

use std::collections::BTreeMap;
use std::fmt;

use cylfourier::operator::DifferentialOperator;
use cylfourier::poly::CPoly;
use cylfourier::scalar::{parse_rational, rationalize};
use cylfourier::trig::TrigPolynomial;
use cylfourier::{ComplexRational, Rational};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub expected: Vec<String>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: {}", self.offset, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected one of: {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ParseOptions {
    /// Converts decimal literals to rationals within this tolerance.
    pub rationalize: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Parsed {
    pub operator: DifferentialOperator,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    I,
    Dt,
    Dx,
    Trig { sin: bool, n: i64 },
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(q) => format!("number {q}"),
            Tok::I => "`i`".into(),
            Tok::Dt => "`Dt`".into(),
            Tok::Dx => "`Dx`".into(),
            Tok::Trig { sin, n } => format!("`{}({}t)`", if *sin { "sin" } else { "cos" }, n),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self, Tok::Num(_) | Tok::I | Tok::Dt | Tok::Dx | Tok::Trig { .. } | Tok::LParen)
    }
}

const FACTOR_START: &[&str] = &["number", "`i`", "`Dt`", "`Dx`", "`sin(t)`", "`cos(t)`", "`(`"];

fn err(offset: usize, expected: &[&str], message: impl Into<String>) -> ParseError {
    ParseError { offset, expected: expected.iter().map(|s| s.to_string()).collect(), message: message.into() }
}

/// Tokens with their byte offsets.
type Tokens = Vec<(usize, Tok)>;

struct Lexer<'a> {
    src: &'a str,
    base: usize,
    opts: ParseOptions,
    warnings: Vec<String>,
}

impl<'a> Lexer<'a> {
    fn run(mut self) -> Result<(Tokens, Vec<String>), ParseError> {
        let bytes = self.src.as_bytes();
        let mut out = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let at = self.base + i;
            let rest = &self.src[i..];
            let c = bytes[i];
            if c.is_ascii_whitespace() {
                i += 1;
                continue;
            }
            let single = match c {
                b'+' => Some(Tok::Plus),
                b'-' => Some(Tok::Minus),
                b'*' => Some(Tok::Star),
                b'^' => Some(Tok::Caret),
                b'(' => Some(Tok::LParen),
                b')' => Some(Tok::RParen),
                b'i' if !rest[1..].starts_with(|ch: char| ch.is_ascii_alphanumeric()) => Some(Tok::I),
                _ => None,
            };
            if let Some(t) = single {
                out.push((at, t));
                i += 1;
                continue;
            }
            if rest.starts_with("Dt") || rest.starts_with("Dx") {
                out.push((at, if rest.starts_with("Dt") { Tok::Dt } else { Tok::Dx }));
                i += 2;
                continue;
            }
            if rest.starts_with("sin(") || rest.starts_with("cos(") {
                let close = rest.find(')').ok_or_else(|| err(at, &["`)`"], "unterminated trigonometric atom"))?;
                let inner = rest[4..close].trim();
                let digits = inner.strip_suffix('t').ok_or_else(|| err(at + 4, &["`t`"], format!("expected `t` inside `{}`", &rest[..=close])))?;
                let n = if digits.trim().is_empty() {
                    1
                } else {
                    digits.trim().parse::<i64>().ok().filter(|&n| n > 0).ok_or_else(|| {
                        err(at + 4, &["positive integer", "`t`"], format!("bad harmonic in `{}`", &rest[..=close]))
                    })?
                };
                out.push((at, Tok::Trig { sin: rest.starts_with("sin"), n }));
                i += close + 1;
                continue;
            }
            if c.is_ascii_digit() || c == b'.' {
                let (tok, len) = self.number(rest, at)?;
                out.push((at, tok));
                i += len;
                continue;
            }
            let ch = rest.chars().next().unwrap();
            return Err(err(at, FACTOR_START, format!("unexpected character `{ch}`")));
        }
        Ok((out, self.warnings))
    }

    fn number(&mut self, rest: &str, at: usize) -> Result<(Tok, usize), ParseError> {
        let digits = |s: &str| s.bytes().take_while(u8::is_ascii_digit).count();
        let int_len = digits(rest);
        let after = &rest[int_len..];
        if let Some(frac) = after.strip_prefix('.') {
            let len = int_len + 1 + digits(frac);
            let text = &rest[..len];
            let tol = self.opts.rationalize.ok_or_else(|| {
                err(at, &["rational literal"], format!("decimal literal `{text}` needs --rationalize=TOL"))
            })?;
            let x: f64 = text.parse().map_err(|_| err(at, &["number"], format!("bad decimal `{text}`")))?;
            let q = rationalize(x, tol).map_err(|e| err(at, &["number"], e.to_string()))?;
            self.warnings.push(format!("decimal {text} rationalized to {q} (tolerance {tol:e})"));
            return Ok((Tok::Num(q), len));
        }
        if let Some(den) = after.strip_prefix('/') {
            let dl = digits(den);
            if dl == 0 {
                return Err(err(at + int_len + 1, &["integer denominator"], "missing denominator"));
            }
            let len = int_len + 1 + dl;
            let q = parse_rational(&rest[..len]).map_err(|_| err(at, &["nonzero denominator"], "zero denominator"))?;
            return Ok((Tok::Num(q), len));
        }
        Ok((Tok::Num(parse_rational(&rest[..int_len]).expect("digits")), int_len))
    }
}

/// Polynomial in commuting `Dt`, `Dx` with trigonometric-polynomial coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
struct Expr(BTreeMap<(u32, u32), TrigPolynomial>);

impl Expr {
    fn constant(c: TrigPolynomial) -> Self {
        Self(BTreeMap::from([((0, 0), c)])).trim()
    }

    fn monomial(dt: u32, dx: u32) -> Self {
        Self(BTreeMap::from([((dt, dx), TrigPolynomial::constant(ComplexRational::one()))]))
    }

    fn trim(mut self) -> Self {
        self.0.retain(|_, c| !c.is_zero());
        self
    }

    fn has_derivative(&self) -> bool {
        self.0.keys().any(|&(a, b)| a + b > 0)
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.0.clone();
        for (k, c) in &other.0 {
            let e = out.entry(*k).or_insert_with(TrigPolynomial::zero);
            *e = e.add(c);
        }
        Self(out).trim()
    }

    fn neg(&self) -> Self {
        Self(self.0.iter().map(|(k, c)| (*k, c.neg())).collect())
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out: BTreeMap<(u32, u32), TrigPolynomial> = BTreeMap::new();
        for ((a1, b1), c1) in &self.0 {
            for ((a2, b2), c2) in &other.0 {
                let e = out.entry((a1 + a2, b1 + b2)).or_insert_with(TrigPolynomial::zero);
                *e = e.add(&c1.mul(c2));
            }
        }
        Self(out).trim()
    }

    fn coeff(&self, dt: u32, dx: u32) -> TrigPolynomial {
        self.0.get(&(dt, dx)).cloned().unwrap_or_else(TrigPolynomial::zero)
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

const MAX_POWER: u32 = 64;

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        match self.peek() {
            Some(t) => err(self.offset(), expected, format!("unexpected {}", t.describe())),
            None => err(self.end, expected, "unexpected end of input"),
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut acc = match self.peek() {
            Some(Tok::Plus) => {
                self.pos += 1;
                self.term()?
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                self.term()?.neg()
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        loop {
            let explicit = matches!(self.peek(), Some(Tok::Star));
            if explicit {
                self.pos += 1;
            } else if !self.peek().is_some_and(Tok::starts_factor) {
                return Ok(acc);
            }
            let at = self.offset();
            let next = self.factor()?;
            if acc.has_derivative() && !next.has_derivative() {
                return Err(err(at, &["`Dt`", "`Dx`", "`+`", "`-`"], "coefficients must precede derivatives"));
            }
            acc = acc.mul(&next);
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.pos += 1;
            return Ok(self.factor()?.neg());
        }
        let base = self.atom()?;
        if !matches!(self.peek(), Some(Tok::Caret)) {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.offset();
        match self.peek() {
            Some(Tok::Num(q)) if q.is_integer() => {
                let e = q.to_integer().try_into().ok().filter(|&e: &u32| e <= MAX_POWER).ok_or_else(|| {
                    err(at, &["integer exponent 0..=64"], format!("exponent {q} out of range"))
                })?;
                self.pos += 1;
                Ok((0..e).fold(Expr::constant(TrigPolynomial::constant(ComplexRational::one())), |acc, _| acc.mul(&base)))
            }
            _ => Err(self.unexpected(&["integer exponent"])),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.unexpected(FACTOR_START));
        };
        self.pos += 1;
        Ok(match tok {
            Tok::Num(q) => Expr::constant(TrigPolynomial::constant(ComplexRational::real(q))),
            Tok::I => Expr::constant(TrigPolynomial::constant(ComplexRational::i())),
            Tok::Dt => Expr::monomial(1, 0),
            Tok::Dx => Expr::monomial(0, 1),
            Tok::Trig { sin: true, n } => Expr::constant(TrigPolynomial::sin(n)),
            Tok::Trig { sin: false, n } => Expr::constant(TrigPolynomial::cos(n)),
            Tok::LParen => {
                let inner = self.sum()?;
                if !matches!(self.peek(), Some(Tok::RParen)) {
                    return Err(self.unexpected(&["`)`", "`+`", "`-`"]));
                }
                self.pos += 1;
                inner
            }
            _ => {
                self.pos -= 1;
                return Err(self.unexpected(FACTOR_START));
            }
        })
    }
}

fn parse_sum(src: &str, base: usize, opts: ParseOptions, warnings: &mut Vec<String>) -> Result<Expr, ParseError> {
    let (toks, w) = Lexer { src, base, opts, warnings: Vec::new() }.run()?;
    warnings.extend(w);
    let mut p = Parser { toks, pos: 0, end: base + src.len() };
    let e = p.sum()?;
    if p.pos < p.toks.len() {
        return Err(p.unexpected(&["`+`", "`-`", "end of input"]));
    }
    Ok(e)
}

fn constant_coeff(e: &Expr, key: (u32, u32), at: usize) -> Result<ComplexRational, ParseError> {
    let c = e.coeff(key.0, key.1);
    if !c.is_constant() {
        return Err(err(at, &[], format!("coefficient {c} must be constant here")));
    }
    Ok(c.mean())
}

fn normalize(e: &Expr, at: usize) -> Result<DifferentialOperator, ParseError> {
    if e.0.keys().any(|&(a, b)| a > 0 && b > 0) {
        return Err(err(at, &[], "mixed Dt*Dx products are not supported; only separable operators"));
    }
    let semantic = |m: String| err(at, &[], m);
    let max_dt = e.0.keys().map(|k| k.0).max().unwrap_or(0);
    let max_dx = e.0.keys().map(|k| k.1).max().unwrap_or(0);
    let variable = e.0.values().any(|c| !c.is_constant());
    if variable {
        if max_dt > 1 || max_dx > 1 {
            return Err(semantic("trigonometric coefficients are only supported in Dt + a(t) Dx + q(t)".into()));
        }
        if e.coeff(1, 0) != TrigPolynomial::constant(ComplexRational::one()) {
            return Err(semantic("variable-coefficient operators need the Dt coefficient to be exactly 1".into()));
        }
        return DifferentialOperator::first_order_variable(e.coeff(0, 1), e.coeff(0, 0)).map_err(|x| semantic(x.to_string()));
    }
    if max_dt <= 1 && max_dx <= 1 {
        let c = |k| constant_coeff(e, k, at);
        return DifferentialOperator::first_order(c((1, 0))?, c((0, 1))?, c((0, 0))?).map_err(|x| semantic(x.to_string()));
    }
    // i (p(D_x) + q(D_t)) with D = -i d: d^n carries i^n = i * i^{n-1}
    let i_pow = |n: u32| ComplexRational::i().pow(n - 1);
    let mut p = vec![ComplexRational::zero(); max_dx as usize + 1];
    let mut q = vec![ComplexRational::zero(); max_dt as usize + 1];
    for (&(a, b), c) in &e.0 {
        let c = c.mean();
        match (a, b) {
            (0, 0) => q[0] = -c.mul_i(),
            (0, b) => p[b as usize] = &c * &i_pow(b),
            (a, _) => q[a as usize] = &c * &i_pow(a),
        }
    }
    // the constant sits in q unless that would leave neither side real
    let (mut p, mut q) = (CPoly::new(&p), CPoly::new(&q));
    if !p.is_real() && !q.is_real() {
        let c0 = q.coeff(0);
        q = q.add_constant(&-c0.clone());
        p = p.add_constant(&c0);
    }
    DifferentialOperator::separable(p, q).map_err(|x| semantic(x.to_string()))
}

fn symbol_poly(e: &Expr, dt: bool, at: usize) -> Result<CPoly, ParseError> {
    let mut cs = Vec::new();
    for (&(a, b), c) in &e.0 {
        let (deg, other) = if dt { (a, b) } else { (b, a) };
        if other > 0 {
            let var = if dt { "Dx" } else { "Dt" };
            return Err(err(at, &[], format!("`{var}` cannot appear in this polynomial")));
        }
        if !c.is_constant() {
            return Err(err(at, &[], format!("coefficient {c} must be constant")));
        }
        if cs.len() <= deg as usize {
            cs.resize(deg as usize + 1, ComplexRational::zero());
        }
        cs[deg as usize] = c.mean();
    }
    Ok(CPoly::new(&cs))
}

fn strip_header<'a>(s: &'a str, offset: usize, header: &str) -> Result<(&'a str, usize), ParseError> {
    let trimmed = s.trim_start();
    let lead = s.len() - trimmed.len();
    let compact: String = header.chars().filter(|c| !c.is_whitespace()).collect();
    // allow spaces around `=`
    let mut idx = 0;
    let bytes = trimmed.as_bytes();
    for want in compact.bytes() {
        while idx < bytes.len() && bytes[idx].is_ascii_whitespace() {
            idx += 1;
        }
        if idx >= bytes.len() || bytes[idx] != want {
            return Err(err(offset + lead + idx, &[header], format!("expected `{header}`")));
        }
        idx += 1;
    }
    Ok((&trimmed[idx..], offset + lead + idx))
}

pub fn parse_operator(text: &str, opts: ParseOptions) -> Result<Parsed, ParseError> {
    let mut warnings = Vec::new();
    let operator = if text.trim_start().starts_with("p(") {
        let (semi, _) = text.char_indices().find(|&(_, c)| c == ';').ok_or_else(|| err(text.len(), &["`;`"], "missing `;` before q(Dt)="))?;
        let (p_src, p_at) = strip_header(&text[..semi], 0, "p(Dx)=")?;
        let (q_src, q_at) = strip_header(&text[semi + 1..], semi + 1, "q(Dt)=")?;
        let p = symbol_poly(&parse_sum(p_src, p_at, opts, &mut warnings)?, false, p_at)?;
        let q = symbol_poly(&parse_sum(q_src, q_at, opts, &mut warnings)?, true, q_at)?;
        DifferentialOperator::separable(p, q).map_err(|e| err(0, &[], e.to_string()))?
    } else {
        normalize(&parse_sum(text, 0, opts, &mut warnings)?, 0)?
    };
    Ok(Parsed { operator, warnings })
}

/// Exact parse without decimal support.
pub fn parse(text: &str) -> Result<DifferentialOperator, ParseError> {
    parse_operator(text, ParseOptions::default()).map(|p| p.operator)
}
