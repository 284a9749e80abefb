//! Boolean filter expressions over [`WilfReport`] fields.
//!
//! ```text
//! expr    := and ( "||" and )*
//! and     := unary ( "&&" unary )*
//! unary   := "!" unary | "(" expr ")" | compare
//! compare := operand ( "<" | "<=" | "==" | "!=" | ">=" | ">" ) operand
//! operand := field | integer | "-" integer
//! ```
//!
//! Field names are case-insensitive: `m c q rho g e L PL Dq W W0 Csize` and
//! `a1, a2, …` for profile entries (`0` past the end of the profile).

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::wilf::WilfReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("predicate error at position {position} near {token}: {message}")]
pub struct PredicateParse {
    /// Byte offset into the source text.
    pub position: usize,
    pub token: String,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    M,
    C,
    Q,
    Rho,
    G,
    E,
    L,
    PL,
    Dq,
    W,
    W0,
    Csize,
    /// 1-based profile entry.
    Alpha(usize),
}

impl Field {
    fn parse(name: &str) -> Option<Field> {
        let lower = name.to_ascii_lowercase();
        Some(match lower.as_str() {
            "m" => Field::M,
            "c" => Field::C,
            "q" => Field::Q,
            "rho" => Field::Rho,
            "g" => Field::G,
            "e" => Field::E,
            "l" => Field::L,
            "pl" => Field::PL,
            "dq" => Field::Dq,
            "w" => Field::W,
            "w0" => Field::W0,
            "csize" => Field::Csize,
            _ => {
                let k: usize = lower.strip_prefix('a')?.parse().ok()?;
                if k == 0 || lower[1..].starts_with('0') {
                    return None;
                }
                Field::Alpha(k)
            }
        })
    }

    pub fn value(self, r: &WilfReport) -> i64 {
        match self {
            Field::M => r.m.into(),
            Field::C => r.c.into(),
            Field::Q => r.q.into(),
            Field::Rho => r.rho.into(),
            Field::G => r.g.into(),
            Field::E => r.e.into(),
            Field::L => r.left_count.into(),
            Field::PL => r.p_left_count.into(),
            Field::Dq => r.dq_count.into(),
            Field::W => r.w,
            Field::W0 => r.w0,
            Field::Csize => r.c_size.into(),
            Field::Alpha(k) => r.profile.get(k).map_or(0, i64::from),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Field::M => "m",
            Field::C => "c",
            Field::Q => "q",
            Field::Rho => "rho",
            Field::G => "g",
            Field::E => "e",
            Field::L => "L",
            Field::PL => "PL",
            Field::Dq => "Dq",
            Field::W => "W",
            Field::W0 => "W0",
            Field::Csize => "Csize",
            Field::Alpha(k) => return write!(f, "a{k}"),
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operand {
    Field(Field),
    Int(i64),
}

impl Operand {
    fn value(self, r: &WilfReport) -> i64 {
        match self {
            Operand::Field(f) => f.value(r),
            Operand::Int(v) => v,
        }
    }
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::Field(x) => x.fmt(f),
            Operand::Int(v) => v.fmt(f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl CmpOp {
    fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
        }
    }

    fn apply(self, a: i64, b: i64) -> bool {
        match self {
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
            CmpOp::Ge => a >= b,
            CmpOp::Gt => a > b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Or(Box<Expr>, Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
    Cmp(Operand, CmpOp, Operand),
}

impl Expr {
    pub fn eval(&self, r: &WilfReport) -> bool {
        match self {
            Expr::Or(a, b) => a.eval(r) || b.eval(r),
            Expr::And(a, b) => a.eval(r) && b.eval(r),
            Expr::Not(a) => !a.eval(r),
            Expr::Cmp(a, op, b) => op.apply(a.value(r), b.value(r)),
        }
    }
}

/// Fully parenthesized canonical form; equal ASTs print identically.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Or(a, b) => write!(f, "({a} || {b})"),
            Expr::And(a, b) => write!(f, "({a} && {b})"),
            Expr::Not(a) => write!(f, "!{a}"),
            Expr::Cmp(a, op, b) => write!(f, "({a} {} {b})", op.symbol()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Cmp(CmpOp),
    And,
    Or,
    Not,
    Minus,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "{s:?}"),
            Tok::Int(v) => write!(f, "{v}"),
            Tok::Cmp(op) => write!(f, "{:?}", op.symbol()),
            Tok::And => f.write_str("\"&&\""),
            Tok::Or => f.write_str("\"||\""),
            Tok::Not => f.write_str("\"!\""),
            Tok::Minus => f.write_str("\"-\""),
            Tok::LParen => f.write_str("\"(\""),
            Tok::RParen => f.write_str("\")\""),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn err(position: usize, token: impl fmt::Display, message: &str) -> PredicateParse {
    PredicateParse {
        position,
        token: token.to_string(),
        message: message.to_string(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, PredicateParse> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let two = bytes.get(i..i + 2);
        let tok = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'-' => Tok::Minus,
            _ if two == Some(b"&&") => Tok::And,
            _ if two == Some(b"||") => Tok::Or,
            _ if two == Some(b"<=") => Tok::Cmp(CmpOp::Le),
            _ if two == Some(b">=") => Tok::Cmp(CmpOp::Ge),
            _ if two == Some(b"==") => Tok::Cmp(CmpOp::Eq),
            _ if two == Some(b"!=") => Tok::Cmp(CmpOp::Ne),
            b'<' => Tok::Cmp(CmpOp::Lt),
            b'>' => Tok::Cmp(CmpOp::Gt),
            b'!' => Tok::Not,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &text[start..i];
                let v = digits
                    .parse()
                    .map_err(|_| err(start, digits, "integer literal out of range"))?;
                out.push((start, Tok::Int(v)));
                continue;
            }
            _ if b.is_ascii_alphabetic() || b == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(err(start, format!("{ch:?}"), "unexpected character"));
            }
        };
        i += match tok {
            Tok::And | Tok::Or | Tok::Cmp(CmpOp::Le | CmpOp::Ge | CmpOp::Eq | CmpOp::Ne) => 2,
            _ => 1,
        };
        out.push((start, tok));
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &(usize, Tok) {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> (usize, Tok) {
        let t = self.toks[self.pos].clone();
        if t.1 != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr, PredicateParse> {
        let mut lhs = self.and()?;
        while self.peek().1 == Tok::Or {
            self.next();
            lhs = Expr::Or(Box::new(lhs), Box::new(self.and()?));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Expr, PredicateParse> {
        let mut lhs = self.unary()?;
        while self.peek().1 == Tok::And {
            self.next();
            lhs = Expr::And(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, PredicateParse> {
        match self.peek().1 {
            Tok::Not => {
                self.next();
                Ok(Expr::Not(Box::new(self.unary()?)))
            }
            Tok::LParen => {
                self.next();
                let inner = self.expr()?;
                match self.next() {
                    (_, Tok::RParen) => Ok(inner),
                    (p, t) => Err(err(p, t, "expected \")\"")),
                }
            }
            _ => self.compare(),
        }
    }

    fn compare(&mut self) -> Result<Expr, PredicateParse> {
        let lhs = self.operand()?;
        let op = match self.next() {
            (_, Tok::Cmp(op)) => op,
            (p, t) => return Err(err(p, t, "expected a comparison operator")),
        };
        let rhs = self.operand()?;
        Ok(Expr::Cmp(lhs, op, rhs))
    }

    fn operand(&mut self) -> Result<Operand, PredicateParse> {
        match self.next() {
            (_, Tok::Int(v)) => Ok(Operand::Int(v)),
            (_, Tok::Minus) => match self.next() {
                (_, Tok::Int(v)) => Ok(Operand::Int(-v)),
                (p, t) => Err(err(p, t, "expected an integer after \"-\"")),
            },
            (p, Tok::Ident(name)) => Field::parse(&name)
                .map(Operand::Field)
                .ok_or_else(|| err(p, format!("{name:?}"), "unknown field")),
            (p, t) => Err(err(p, t, "expected a field or integer")),
        }
    }
}

/// A parsed filter together with its source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Predicate {
    source: String,
    expr: Expr,
}

impl Predicate {
    pub fn parse(text: &str) -> Result<Self, PredicateParse> {
        let mut p = Parser {
            toks: lex(text)?,
            pos: 0,
        };
        let expr = p.expr()?;
        match p.next() {
            (_, Tok::End) => Ok(Predicate {
                source: text.to_string(),
                expr,
            }),
            (pos, t) => Err(err(pos, t, "unexpected trailing input")),
        }
    }

    pub fn matches(&self, r: &WilfReport) -> bool {
        self.expr.eval(r)
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    /// Whitespace- and case-independent rendering, used for hashing.
    pub fn canonical(&self) -> String {
        self.expr.to_string()
    }
}

impl FromStr for Predicate {
    type Err = PredicateParse;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Predicate::parse(s)
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::NumericalSemigroup;
    use crate::wilf::report;
    use proptest::prelude::*;

    fn exception() -> WilfReport {
        report(&NumericalSemigroup::from_generators_with_tail(&[14, 22, 23], 56).unwrap()).unwrap()
    }

    #[test]
    fn evaluates_fields() {
        let r = exception();
        for (text, want) in [
            ("w0 < 0", true),
            ("W0 == -1", true),
            ("L <= 12 && q >= 4", false),
            ("L == 13 && q == 4 && a1 == 2 && a2 == 0 && a3 == 3", true),
            ("a4 == 0 && a17 == 0", true),
            ("PL == 3 && Dq == 10 && Csize == 0 && rho == 0", true),
            ("m == 14 || bogusfree == 1", false),
            ("!(w < 0)", true),
            ("!w < 0", true),
            ("!(w > 0)", false),
            ("e == 7 && g == 43 && c == 56 && W == 35", true),
            ("-1 == w0", true),
        ] {
            match Predicate::parse(text) {
                Ok(p) => assert_eq!(p.matches(&r), want, "{text}"),
                Err(e) => assert!(text.contains("bogus"), "{text}: {e}"),
            }
        }
    }

    #[test]
    fn precedence() {
        let p = Predicate::parse("m == 1 || m == 14 && q == 0").unwrap();
        assert_eq!(p.canonical(), "((m == 1) || ((m == 14) && (q == 0)))");
        let p = Predicate::parse("!m == 1 && q == 4").unwrap();
        assert_eq!(p.canonical(), "(!(m == 1) && (q == 4))");
        let p = Predicate::parse("a == 1 || b == 2 || c == 3");
        assert!(p.is_err());
        let p = Predicate::parse("m < 1 || m < 2 || m < 3").unwrap();
        assert_eq!(p.canonical(), "(((m < 1) || (m < 2)) || (m < 3))");
    }

    #[test]
    fn errors_carry_position_and_token() {
        let e = Predicate::parse("w0 <").unwrap_err();
        assert_eq!((e.position, e.token.as_str()), (4, "end of input"));
        let e = Predicate::parse("bogus < 1").unwrap_err();
        assert_eq!((e.position, e.token.as_str()), (0, "\"bogus\""));
        assert_eq!(e.message, "unknown field");
        let e = Predicate::parse("(w0 < 0").unwrap_err();
        assert_eq!(e.position, 7);
        let e = Predicate::parse("w0 < 0 )").unwrap_err();
        assert_eq!((e.position, e.token.as_str()), (7, "\")\""));
        assert!(Predicate::parse("a0 == 1").is_err());
        assert!(Predicate::parse("w0 # 1").is_err());
        assert!(Predicate::parse("").is_err());
        assert!(Predicate::parse("w0 < 99999999999999999999").is_err());
    }

    #[test]
    fn canonical_ignores_spacing_and_case() {
        let a = Predicate::parse("L<=12&&Q>=4").unwrap();
        let b = Predicate::parse("  l <= 12 &&  q >= 4 ").unwrap();
        assert_eq!(a.canonical(), b.canonical());
        assert_ne!(a.source(), b.source());
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let field = prop_oneof![
            Just(Field::M),
            Just(Field::W0),
            Just(Field::PL),
            (1usize..5).prop_map(Field::Alpha)
        ];
        let operand = prop_oneof![
            field.prop_map(Operand::Field),
            (-50i64..50).prop_map(Operand::Int)
        ];
        let op = prop_oneof![
            Just(CmpOp::Lt),
            Just(CmpOp::Le),
            Just(CmpOp::Eq),
            Just(CmpOp::Ne),
            Just(CmpOp::Ge),
            Just(CmpOp::Gt)
        ];
        let leaf = (operand.clone(), op, operand).prop_map(|(a, o, b)| Expr::Cmp(a, o, b));
        leaf.prop_recursive(4, 16, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::And(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::Or(Box::new(a), Box::new(b))),
                inner.prop_map(|a| Expr::Not(Box::new(a))),
            ]
        })
    }

    proptest! {
        #[test]
        fn canonical_form_reparses_to_same_ast(e in arb_expr()) {
            let text = e.to_string();
            let p = Predicate::parse(&text).unwrap();
            prop_assert_eq!(p.expr(), &e);
        }
    }
}
