//! Formal multiplicative symbols for abelianized Kummer classes.
//!
//! An [`Expr`] is a nonzero rational times a product of integer powers of
//! atoms; an atom is a named field element or a difference `(p-q)` of two
//! names. Differences are stored with `p < q`, so `(q-p)` reads `-1·(p-q)`.
//! No other relations are applied.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Symbol(String),
    /// `(p - q)` with `p < q`.
    Difference(String, String),
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Symbol(s) => write!(f, "{s}"),
            Atom::Difference(p, q) => write!(f, "({p}-{q})"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Expr {
    coeff: Ratio<i64>,
    atoms: BTreeMap<Atom, i32>,
}

impl Expr {
    pub fn one() -> Self {
        Expr::number(1).expect("1 is nonzero")
    }

    pub fn minus_one() -> Self {
        Expr::number(-1).expect("-1 is nonzero")
    }

    pub fn number(n: i64) -> Result<Self> {
        Expr::rational(Ratio::from_integer(n))
    }

    pub fn rational(q: Ratio<i64>) -> Result<Self> {
        if q == Ratio::from_integer(0) {
            return Err(Error::BadPoint("0 is not in the multiplicative group".into()));
        }
        Ok(Expr { coeff: q, atoms: BTreeMap::new() })
    }

    pub fn symbol(name: &str) -> Result<Self> {
        if name.parse::<i64>().is_ok() {
            return Expr::number(name.parse().unwrap());
        }
        check_name(name)?;
        Ok(Expr::atom(Atom::Symbol(name.to_string())))
    }

    fn atom(a: Atom) -> Self {
        Expr { coeff: Ratio::from_integer(1), atoms: [(a, 1)].into_iter().collect() }
    }

    /// `p - q` for names or integers; `0` is rejected.
    pub fn difference(p: &str, q: &str) -> Result<Self> {
        let (p, q) = (p.trim(), q.trim());
        match (p.parse::<i64>(), q.parse::<i64>()) {
            (Ok(a), Ok(b)) => {
                return Expr::number(a - b).map_err(|_| Error::DegenerateConfiguration(format!("{p} - {q} = 0")));
            }
            (_, Ok(0)) => return Expr::symbol(p),
            (Ok(0), _) => return Ok(Expr::minus_one().mul(&Expr::symbol(q)?)),
            _ => {}
        }
        if p == q {
            return Err(Error::DegenerateConfiguration(format!("{p} - {q} = 0")));
        }
        for s in [p, q] {
            if s.parse::<i64>().is_err() {
                check_name(s)?;
            }
        }
        Ok(if p < q {
            Expr::atom(Atom::Difference(p.into(), q.into()))
        } else {
            Expr::minus_one().mul(&Expr::atom(Atom::Difference(q.into(), p.into())))
        })
    }

    pub fn coefficient(&self) -> Ratio<i64> {
        self.coeff
    }

    pub fn atoms(&self) -> &BTreeMap<Atom, i32> {
        &self.atoms
    }

    pub fn is_one(&self) -> bool {
        *self == Expr::one()
    }

    /// `Some(q)` when the expression is a bare rational.
    pub fn as_rational(&self) -> Option<Ratio<i64>> {
        self.atoms.is_empty().then_some(self.coeff)
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        let mut atoms = self.atoms.clone();
        for (a, &e) in &other.atoms {
            let slot = atoms.entry(a.clone()).or_insert(0);
            *slot += e;
            if *slot == 0 {
                atoms.remove(a);
            }
        }
        Expr { coeff: self.coeff * other.coeff, atoms }
    }

    pub fn inv(&self) -> Expr {
        Expr { coeff: self.coeff.recip(), atoms: self.atoms.iter().map(|(a, &e)| (a.clone(), -e)).collect() }
    }

    pub fn div(&self, other: &Expr) -> Expr {
        self.mul(&other.inv())
    }

    pub fn pow(&self, e: i32) -> Expr {
        let coeff = self.coeff.pow(e);
        let atoms = if e == 0 { BTreeMap::new() } else { self.atoms.iter().map(|(a, &x)| (a.clone(), x * e)).collect() };
        Expr { coeff, atoms }
    }

    pub fn neg(&self) -> Expr {
        Expr::minus_one().mul(self)
    }

    /// `1 - self`; a bare name `x` gives the atom `(1-x)`, anything else
    /// that is not a rational becomes an opaque difference.
    pub fn one_minus(&self) -> Result<Expr> {
        if let Some(q) = self.as_rational() {
            return Expr::rational(Ratio::from_integer(1) - q).map_err(|_| Error::BadPoint("1 - 1 = 0".into()));
        }
        let inner = if self.coeff == Ratio::from_integer(1) && self.atoms.len() == 1 {
            let (a, &e) = self.atoms.iter().next().unwrap();
            match (a, e) {
                (Atom::Symbol(s), 1) => s.clone(),
                _ => format!("({self})"),
            }
        } else {
            format!("({self})")
        };
        Ok(if "1" < inner.as_str() {
            Expr::atom(Atom::Difference("1".into(), inner))
        } else {
            Expr::minus_one().mul(&Expr::atom(Atom::Difference(inner, "1".into())))
        })
    }

    /// Exponents of `-1` and of each prime dividing the coefficient, then of
    /// each atom, keyed by their rendering.
    pub fn factor_exponents(&self) -> BTreeMap<String, i64> {
        let mut out = BTreeMap::new();
        let (num, den) = (*self.coeff.numer(), *self.coeff.denom());
        if (num < 0) != (den < 0) {
            out.insert("-1".to_string(), 1);
        }
        for (value, sign) in [(num.unsigned_abs(), 1i64), (den.unsigned_abs(), -1)] {
            let mut v = value;
            let mut p = 2;
            while p * p <= v {
                while v % p == 0 {
                    *out.entry(p.to_string()).or_insert(0) += sign;
                    v /= p;
                }
                p += 1;
            }
            if v > 1 {
                *out.entry(v.to_string()).or_insert(0) += sign;
            }
        }
        for (a, &e) in &self.atoms {
            *out.entry(a.to_string()).or_insert(0) += e as i64;
        }
        out.retain(|_, e| *e != 0);
        out
    }
}

fn check_name(name: &str) -> Result<()> {
    let mut chars = name.chars();
    let ok = chars.next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_');
    if ok {
        Ok(())
    } else {
        Err(Error::Parse(format!("bad symbol name {name:?}")))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (mut num, den) = (*self.coeff.numer(), *self.coeff.denom());
        // a sign is absorbed by reversing the first difference in the numerator
        let flip = if num < 0 {
            self.atoms.iter().find(|(a, &e)| e == 1 && matches!(a, Atom::Difference(..))).map(|(a, _)| a)
        } else {
            None
        };
        if flip.is_some() {
            num = -num;
        }
        let render = |a: &Atom| match (a, Some(a) == flip) {
            (Atom::Difference(p, q), true) => format!("({q}-{p})"),
            _ => a.to_string(),
        };
        if num == 1 && den == 1 && self.atoms.len() == 1 {
            let (a, &e) = self.atoms.iter().next().expect("one atom");
            if e == 1 {
                let text = render(a);
                return write!(f, "{}", text.trim_start_matches('(').trim_end_matches(')'));
            }
        }
        let mut top = Vec::new();
        let mut bottom = Vec::new();
        if num.abs() != 1 {
            top.push(num.abs().to_string());
        }
        if den != 1 {
            bottom.push(den.to_string());
        }
        for (a, &e) in &self.atoms {
            let target = if e > 0 { &mut top } else { &mut bottom };
            target.push(if e.abs() == 1 { render(a) } else { format!("{}^{}", render(a), e.abs()) });
        }
        if num < 0 {
            write!(f, "-")?;
        }
        if top.is_empty() {
            write!(f, "1")?;
        } else {
            write!(f, "{}", top.join("*"))?;
        }
        match bottom.len() {
            0 => Ok(()),
            1 => write!(f, "/{}", bottom[0]),
            _ => write!(f, "/({})", bottom.join("*")),
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

impl From<Expr> for String {
    fn from(e: Expr) -> String {
        e.to_string()
    }
}

impl TryFrom<String> for Expr {
    type Error = Error;
    fn try_from(s: String) -> Result<Expr> {
        s.parse()
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(i64),
    Name(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Token::Int(text.parse().map_err(|_| Error::Parse(format!("integer {text} too large")))?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Name(chars[start..i].iter().collect()));
        } else if "()*/-^".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self, k: usize) -> Option<&Token> {
        self.tokens.get(self.pos + k)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek(0) == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<()> {
        if self.eat(op) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected {op:?} at token {}", self.pos)))
        }
    }

    fn term_text(t: &Token) -> Option<String> {
        match t {
            Token::Int(n) => Some(n.to_string()),
            Token::Name(s) => Some(s.clone()),
            Token::Op(_) => None,
        }
    }

    // expr := ['-'] factor (('*' | '/') factor)*
    fn expr(&mut self) -> Result<Expr> {
        let negative = self.eat('-');
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.factor()?);
            } else if self.eat('/') {
                acc = acc.div(&self.factor()?);
            } else {
                break;
            }
        }
        Ok(if negative { acc.neg() } else { acc })
    }

    // factor := primary ['^' ['-'] int]
    fn factor(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.eat('^') {
            let negative = self.eat('-');
            let e = match self.peek(0) {
                Some(Token::Int(n)) => *n,
                _ => return Err(Error::Parse("exponent must be an integer".into())),
            };
            self.pos += 1;
            let e = i32::try_from(e).map_err(|_| Error::Parse("exponent too large".into()))?;
            return Ok(base.pow(if negative { -e } else { e }));
        }
        Ok(base)
    }

    // primary := int | name | '(' term '-' term ')' | '(' expr ')'
    fn primary(&mut self) -> Result<Expr> {
        match self.peek(0).cloned() {
            Some(Token::Int(n)) => {
                self.pos += 1;
                Expr::number(n)
            }
            Some(Token::Name(s)) => {
                self.pos += 1;
                Expr::symbol(&s)
            }
            Some(Token::Op('(')) => {
                let diff = match (self.peek(1), self.peek(2), self.peek(3), self.peek(4)) {
                    (Some(a), Some(Token::Op('-')), Some(b), Some(Token::Op(')'))) => {
                        Self::term_text(a).zip(Self::term_text(b))
                    }
                    _ => None,
                };
                if let Some((p, q)) = diff {
                    self.pos += 5;
                    return Expr::difference(&p, &q);
                }
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            other => Err(Error::Parse(format!("unexpected {other:?}"))),
        }
    }
}

impl FromStr for Expr {
    type Err = Error;

    /// Products and quotients of integers, names and differences `(p-q)`,
    /// with integer exponents, e.g. `v2/(a1-a2)` or `(1-x)^-1`. A bare
    /// `p-q` is read as a single difference.
    fn from_str(s: &str) -> Result<Expr> {
        let tokens = tokenize(s)?;
        if let [a, Token::Op('-'), b] = tokens.as_slice() {
            if let Some((p, q)) = Parser::term_text(a).zip(Parser::term_text(b)) {
                return Expr::difference(&p, &q);
            }
        }
        let mut p = Parser { tokens, pos: 0 };
        let e = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse(format!("trailing input in {s:?}")));
        }
        Ok(e)
    }
}

/// Base points whose abelianized Kummer classes are tabulated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BasePoint {
    /// A rational point `x ∉ {0, 1}`.
    Rational { x: Expr },
    /// The tangential point `1 + vε`.
    TangentialAtOne { v: Expr },
    /// The tangential point `0 + vε`.
    TangentialAtZero { v: Expr },
    /// `ι(0 + vε)`.
    IotaTangentialAtZero { v: Expr },
}

/// A pair of formal Kummer classes, written multiplicatively.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolPair {
    pub first: Expr,
    pub second: Expr,
}

impl SymbolPair {
    pub fn new(first: Expr, second: Expr) -> Self {
        SymbolPair { first, second }
    }

    /// `-(X, Y)` in additive notation, i.e. both inverted.
    pub fn negate(&self) -> SymbolPair {
        SymbolPair { first: self.first.inv(), second: self.second.inv() }
    }
}

impl fmt::Display for SymbolPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.first, self.second)
    }
}

/// The abelianized Kummer pair of a base point.
pub fn kappa_ab(point: &BasePoint) -> Result<SymbolPair> {
    match point {
        BasePoint::Rational { x } => {
            if x.is_one() {
                return Err(Error::BadPoint("x = 1".into()));
            }
            Ok(SymbolPair::new(x.clone(), x.one_minus()?))
        }
        BasePoint::TangentialAtOne { v } => Ok(SymbolPair::new(Expr::one(), v.neg())),
        BasePoint::TangentialAtZero { v } => Ok(SymbolPair::new(v.clone(), Expr::one())),
        BasePoint::IotaTangentialAtZero { v } => Ok(SymbolPair::new(v.inv(), v.inv().neg())),
    }
}

/// The `j`-th abelianized coordinate of `𝔣_i` for branch points `a` and
/// tangent scales `v`, both indexed from 1.
pub fn f_ab_coefficients(a: &[String], v: &[Expr], i: usize, j: usize) -> Result<Expr> {
    let m = a.len();
    if v.len() != m {
        return Err(Error::DegenerateConfiguration(format!("{m} branch points but {} tangent scales", v.len())));
    }
    if i < 2 || i > m || j < 1 || j > m {
        return Err(Error::DegenerateConfiguration(format!("indices (i, j) = ({i}, {j}) need 2 ≤ i ≤ {m}, 1 ≤ j ≤ {m}")));
    }
    for p in 0..m {
        for q in p + 1..m {
            Expr::difference(&a[p], &a[q])?;
        }
    }
    if j == i {
        Ok(v[i - 1].div(&Expr::difference(&a[0], &a[i - 1])?))
    } else if j == 1 {
        Ok(Expr::difference(&a[i - 1], &a[0])?.div(&v[0]))
    } else {
        Ok(Expr::difference(&a[i - 1], &a[j - 1])?.div(&Expr::difference(&a[0], &a[j - 1])?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetKind {
    Rational,
    TangentialIota,
}

/// The pair `(X, Y)` whose Massey products with a single `Y` are asserted
/// to vanish, with the base point whose Kummer pair is `-(X, Y)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryTarget {
    pub kind: TargetKind,
    pub pair: SymbolPair,
    pub source: BasePoint,
}

pub fn vanishing_corollary_targets(kind: TargetKind, x: &Expr) -> Result<CorollaryTarget> {
    match kind {
        TargetKind::Rational => {
            if x.is_one() {
                return Err(Error::BadPoint("x = 1".into()));
            }
            Ok(CorollaryTarget {
                kind,
                pair: SymbolPair::new(x.inv(), x.one_minus()?.inv()),
                source: BasePoint::Rational { x: x.clone() },
            })
        }
        TargetKind::TangentialIota => Ok(CorollaryTarget {
            kind,
            pair: SymbolPair::new(x.clone(), x.neg()),
            source: BasePoint::IotaTangentialAtZero { v: x.clone() },
        }),
    }
}
