//! Expression grammar for Chow and K classes.
//!
//! ```text
//! expr   := term { ("+" | "-") term }
//! term   := factor { "*" factor }
//! factor := atom [ "^" nat ]
//! atom   := int | "h" nat | "O" "(" ints ")" | "L" "(" ints ")" | "OL" "(" ints ")"
//!         | ident "(" args ")" | "(" expr ")"
//! ```
//!
//! Integers inside `O(..)`, `L(..)` and `OL(..)` may carry a leading `-`.

use std::fmt;

use num_bigint::BigInt;

/// Registered functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Todd,
    Ch,
    ChHom,
    Psi,
    Theta,
    R,
    T,
    Tc,
    S,
    TPrime,
}

impl Func {
    pub const ALL: [Func; 10] =
        [Func::Todd, Func::Ch, Func::ChHom, Func::Psi, Func::Theta, Func::R, Func::T, Func::Tc, Func::S, Func::TPrime];

    pub fn name(self) -> &'static str {
        match self {
            Func::Todd => "td",
            Func::Ch => "ch",
            Func::ChHom => "chh",
            Func::Psi => "psi",
            Func::Theta => "theta",
            Func::R => "r",
            Func::T => "T",
            Func::Tc => "Tc",
            Func::S => "S",
            Func::TPrime => "Tp",
        }
    }

    pub fn from_name(s: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == s)
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Todd | Func::Ch | Func::ChHom | Func::S | Func::TPrime => 1,
            Func::Psi | Func::Theta | Func::R | Func::T | Func::Tc => 2,
        }
    }

    pub fn signature(self) -> &'static str {
        match self {
            Func::Todd => "td(bundle)",
            Func::Ch => "ch(k-class)",
            Func::ChHom => "chh(k-class)",
            Func::Psi => "psi(l, k-class)",
            Func::Theta => "theta(l, bundle)",
            Func::R => "r(p, bundle)",
            Func::T => "T(i, chow-class)",
            Func::Tc => "Tc(i, chow-class)",
            Func::S => "S(chow-class)",
            Func::TPrime => "Tp(chow-class)",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    /// Byte offset of the node's first token.
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Int(BigInt),
    /// `h<j>`, one-based factor number.
    Hyperplane(u32),
    Line(Vec<i64>),
    Cycle(Vec<i64>),
    KCycle(Vec<i64>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(Func, Vec<Expr>),
}

/// Offsets are positional metadata and do not take part in equality.
impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Expr {
    pub fn new(kind: ExprKind, offset: usize) -> Self {
        Expr { kind, offset }
    }

    fn is_atom(&self) -> bool {
        !matches!(self.kind, ExprKind::Add(..) | ExprKind::Sub(..) | ExprKind::Mul(..) | ExprKind::Pow(..))
    }

    fn is_sum(&self) -> bool {
        matches!(self.kind, ExprKind::Add(..) | ExprKind::Sub(..))
    }
}

fn join(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

/// Canonical rendering: minimal parentheses, spaces around `+` and `-`.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &Expr, paren: bool| {
            if paren {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match &self.kind {
            ExprKind::Int(n) => write!(f, "{n}"),
            ExprKind::Hyperplane(j) => write!(f, "h{j}"),
            ExprKind::Line(a) => write!(f, "O({})", join(a)),
            ExprKind::Cycle(a) => write!(f, "L({})", join(a)),
            ExprKind::KCycle(a) => write!(f, "OL({})", join(a)),
            ExprKind::Add(a, b) | ExprKind::Sub(a, b) => {
                let op = if matches!(self.kind, ExprKind::Add(..)) { "+" } else { "-" };
                write!(f, "{a} {op} ")?;
                wrap(f, b, b.is_sum())
            }
            ExprKind::Mul(a, b) => {
                wrap(f, a, a.is_sum())?;
                write!(f, "*")?;
                wrap(f, b, !b.is_atom() && !matches!(b.kind, ExprKind::Pow(..)))
            }
            ExprKind::Pow(a, e) => {
                wrap(f, a, !a.is_atom())?;
                write!(f, "^{e}")
            }
            ExprKind::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at offset {}: expected ", self.offset)?;
        match self.expected.as_slice() {
            [one] => write!(f, "{one}")?,
            many => write!(f, "one of {}", many.join(", "))?,
        }
        write!(f, ", found {}", self.found)
    }
}

impl std::error::Error for SyntaxError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Caret,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer {n}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(src[start..i].parse().expect("digits")), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().expect("in bounds");
                return Err(SyntaxError {
                    offset: start,
                    expected: vec!["a token".into()],
                    found: format!("character {ch:?}"),
                });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> SyntaxError {
        SyntaxError {
            offset: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, tok: Tok, name: &str) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[name]))
        }
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.term()?;
        loop {
            let kind: fn(Box<Expr>, Box<Expr>) -> ExprKind = match self.peek() {
                Tok::Plus => ExprKind::Add,
                Tok::Minus => ExprKind::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            let offset = lhs.offset;
            lhs = Expr::new(kind(Box::new(lhs), Box::new(rhs)), offset);
        }
    }

    fn term(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let rhs = self.factor()?;
            let offset = lhs.offset;
            lhs = Expr::new(ExprKind::Mul(Box::new(lhs), Box::new(rhs)), offset);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, SyntaxError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let e = self.nat("exponent")?;
        let offset = base.offset;
        Ok(Expr::new(ExprKind::Pow(Box::new(base), e), offset))
    }

    fn nat(&mut self, what: &str) -> Result<u32, SyntaxError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                let v = u32::try_from(&n).map_err(|_| SyntaxError {
                    offset: self.offset(),
                    expected: vec![format!("{what} below 2^32")],
                    found: format!("integer {n}"),
                })?;
                self.bump();
                Ok(v)
            }
            _ => Err(self.error(&[what])),
        }
    }

    fn signed(&mut self) -> Result<i64, SyntaxError> {
        let negative = *self.peek() == Tok::Minus;
        if negative {
            self.bump();
        }
        match self.peek().clone() {
            Tok::Int(n) => {
                let n = if negative { -n } else { n };
                let v = i64::try_from(&n).map_err(|_| SyntaxError {
                    offset: self.offset(),
                    expected: vec!["a 64-bit integer".into()],
                    found: format!("integer {n}"),
                })?;
                self.bump();
                Ok(v)
            }
            _ => Err(self.error(&["integer"])),
        }
    }

    fn ints(&mut self) -> Result<Vec<i64>, SyntaxError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut v = vec![self.signed()?];
        loop {
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                    v.push(self.signed()?);
                }
                Tok::RParen => {
                    self.bump();
                    return Ok(v);
                }
                _ => return Err(self.error(&["`,`", "`)`"])),
            }
        }
    }

    fn atom(&mut self) -> Result<Expr, SyntaxError> {
        let offset = self.offset();
        let kind = match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                ExprKind::Int(n)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                return Ok(Expr::new(inner.kind, offset));
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "O" => ExprKind::Line(self.ints()?),
                    "L" => ExprKind::Cycle(self.ints()?),
                    "OL" => ExprKind::KCycle(self.ints()?),
                    _ => {
                        if let Some(digits) = name.strip_prefix('h').filter(|d| !d.is_empty()) {
                            if digits.bytes().all(|b| b.is_ascii_digit()) {
                                let j = digits.parse::<u32>().map_err(|_| SyntaxError {
                                    offset,
                                    expected: vec!["hyperplane index below 2^32".into()],
                                    found: format!("identifier `{name}`"),
                                })?;
                                return Ok(Expr::new(ExprKind::Hyperplane(j), offset));
                            }
                        }
                        let func = Func::from_name(&name).ok_or_else(|| SyntaxError {
                            offset,
                            expected: vec!["`h<j>`, `O`, `L`, `OL` or a registered function".into()],
                            found: format!("identifier `{name}`"),
                        })?;
                        ExprKind::Call(func, self.args()?)
                    }
                }
            }
            _ => return Err(self.error(&["integer", "`h<j>`", "`O(`", "`L(`", "`OL(`", "function", "`(`"])),
        };
        Ok(Expr::new(kind, offset))
    }

    fn args(&mut self) -> Result<Vec<Expr>, SyntaxError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut v = vec![self.expr()?];
        loop {
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                    v.push(self.expr()?);
                }
                Tok::RParen => {
                    self.bump();
                    return Ok(v);
                }
                _ => return Err(self.error(&["`,`", "`)`"])),
            }
        }
    }
}

/// Parse a complete expression.
pub fn parse(src: &str) -> Result<Expr, SyntaxError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    if *p.peek() == Tok::End {
        return Err(p.error(&["expression"]));
    }
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error(&["`+`", "`-`", "`*`", "`^`", "end of input"]));
    }
    Ok(e)
}
