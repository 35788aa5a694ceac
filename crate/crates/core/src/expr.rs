//! Text form of sums, polylogarithms, moments and identity queries.
//!
//! ```text
//! expr      := sum | single | polylog | moment | count | query
//! sum       := "S" "[" ints | triples "]" [ "(" [ "{" nums "}" [";" arg] | arg ] ")" ]
//! single    := "S0" "[" "(" uint "," uint "," int ")" "]" [ "(" arg ")" ]
//! polylog   := ("H" | "H*") "[" [ letter ("," letter)* ] "]" [ "(" num ")" ]
//! letter    := num | "{" uint "," uint "}" | "w12" | "w13" | "w17" | "w18"
//! moment    := "M" "[" integrand "]" [ "(" uint ")" ]
//! integrand := "T(x)" | factor ("*" factor)* [ "/" denom ]
//! factor    := "1" | "x" [ "^" uint ] | "H" "[" ints "]" "(x)"
//! denom     := lin | "(" lin ("*" lin)* ")"        lin := "x" | "(x" ("+"|"-") num ")"
//! count     := ("N_all" | "N_A" | "N_D" | "N_H" | "N_ADH") "(" uint ")"
//! query     := "eq7(" uint ")" | "eq9" | "eq18(" num ")" | "eq27(" uint ")" | "dup(" int "," uint ")"
//! arg       := uint | "inf" | num | num "i" | num ("+"|"-") num "i"
//! num       := ["-"] digits ["." digits | "/" digits]
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{
    count_a, count_adh, count_all, count_d, count_h, CyclotomicIndex, CyclotomicLetter, GeneralIndex, GeneralLetter, HarmonicIndex, SumIndex,
};
use crate::continuation::{continue_single_with, ContinuationConfig, Parity};
use crate::error::{Error, Result};
use crate::exact::{format_rational_decimal, BigFloat, ComplexBig, Precision, Rational};
use crate::polylog::{
    alternating_211_limit, eval_polylog, mellin_moment, t_moment_closed_form, verify_arg_transform, verify_mellin_identity, MellinIntegrand,
    PolyLetter, PolyLogWord, SqrtLetter, Verification,
};
use crate::sums::{duplication_sides, eval_cyclotomic_single, eval_sum, limit_to_infinity_general, LimitOutcome};

/// Upper argument of a sum.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Arg {
    Int(u64),
    Infinity,
    /// Any other real or complex number.
    Number { re: Rational, im: Rational },
}

impl Arg {
    /// Non-negative integers become `Int`.
    pub fn number(re: Rational, im: Rational) -> Self {
        if im.is_zero() && re.is_integer() && !re.is_negative() {
            if let Some(n) = re.to_integer().to_u64() {
                return Arg::Int(n);
            }
        }
        Arg::Number { re, im }
    }
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Int(n) => write!(f, "{n}"),
            Arg::Infinity => write!(f, "inf"),
            Arg::Number { re, im } => {
                if im.is_zero() {
                    write!(f, "{}", format_rational_decimal(re))
                } else if re.is_zero() {
                    write!(f, "{}i", format_rational_decimal(im))
                } else {
                    let sign = if im.is_negative() { '-' } else { '+' };
                    write!(f, "{}{sign}{}i", format_rational_decimal(re), format_rational_decimal(&im.abs()))
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CountFamily {
    All,
    A,
    D,
    H,
    Adh,
}

impl CountFamily {
    pub fn name(self) -> &'static str {
        match self {
            CountFamily::All => "N_all",
            CountFamily::A => "N_A",
            CountFamily::D => "N_D",
            CountFamily::H => "N_H",
            CountFamily::Adh => "N_ADH",
        }
    }

    pub fn count(self, weight: u32) -> Result<BigInt> {
        match self {
            CountFamily::All => count_all(weight),
            CountFamily::A => count_a(weight),
            CountFamily::D => count_d(weight),
            CountFamily::H => count_h(weight),
            CountFamily::Adh => count_adh(weight),
        }
    }
}

/// The built-in identity checks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Query {
    /// Mellin representation of S₋₂,₁,₁(N).
    MellinRepresentation(u64),
    /// Closed form of S₋₂,₁,₁(∞).
    AlternatingLimit,
    /// H₋₁,₀,₁ at (1−x)/(1+x) against weight-three polylogarithms at x.
    ArgumentTransform(Rational),
    /// Mellin moment of T(x) against its closed form.
    TMoment(u64),
    /// S_a(2N) + S₋ₐ(2N) = 2^{1−a} S_a(N).
    Duplication { a: i64, n: u64 },
}

impl Query {
    pub fn name(&self) -> &'static str {
        match self {
            Query::MellinRepresentation(_) => "eq7",
            Query::AlternatingLimit => "eq9",
            Query::ArgumentTransform(_) => "eq18",
            Query::TMoment(_) => "eq27",
            Query::Duplication { .. } => "dup",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Sum { index: SumIndex, arg: Option<Arg> },
    /// Σ_{k=0}^N sign(n)^k/(l k + m)^{|n|}.
    SingleCyclotomic { l: u32, m: u32, n: i64, arg: Option<Arg> },
    Polylog { star: bool, word: PolyLogWord, arg: Option<Rational> },
    Moment { integrand: MellinIntegrand, n: Option<u64> },
    Count { family: CountFamily, weight: u32 },
    Query(Query),
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|t| t.to_string()).collect::<Vec<_>>().join(",")
}

fn write_arg(f: &mut fmt::Formatter<'_>, arg: &Option<Arg>) -> fmt::Result {
    match arg {
        Some(a) => write!(f, "({a})"),
        None => Ok(()),
    }
}

fn write_weighted(f: &mut fmt::Formatter<'_>, weights: &[&Rational], arg: &Option<Arg>) -> fmt::Result {
    write!(f, "({{{}}}", join(weights.iter().map(|w| format_rational_decimal(w))))?;
    if let Some(a) = arg {
        write!(f, ";{a}")?;
    }
    write!(f, ")")
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Sum { index: SumIndex::Harmonic(h), arg } => {
                write!(f, "S[{}]", join(h.entries()))?;
                write_arg(f, arg)
            }
            Expr::Sum { index: SumIndex::General(g), arg } => {
                write!(f, "S[{}]", join(g.letters().iter().map(|l| l.exponent)))?;
                write_weighted(f, &g.letters().iter().map(|l| &l.weight).collect::<Vec<_>>(), arg)
            }
            Expr::Sum { index: SumIndex::Cyclotomic(c), arg } => {
                let triples = c.letters().iter().map(|l| format!("({},{},{})", l.a, l.b, l.c));
                write!(f, "S[{}]", join(triples))?;
                if c.letters().iter().all(|l| l.weight.is_one()) {
                    write_arg(f, arg)
                } else {
                    write_weighted(f, &c.letters().iter().map(|l| &l.weight).collect::<Vec<_>>(), arg)
                }
            }
            Expr::SingleCyclotomic { l, m, n, arg } => {
                write!(f, "S0[({l},{m},{n})]")?;
                write_arg(f, arg)
            }
            Expr::Polylog { star, word, arg } => {
                let letters = word.letters().iter().map(|l| match l {
                    PolyLetter::Root(b) => format_rational_decimal(b),
                    other => other.to_string(),
                });
                write!(f, "{}[{}]", if *star { "H*" } else { "H" }, join(letters))?;
                match arg {
                    Some(x) => write!(f, "({})", format_rational_decimal(x)),
                    None => Ok(()),
                }
            }
            Expr::Moment { integrand, n } => {
                write!(f, "M[{integrand}]")?;
                match n {
                    Some(n) => write!(f, "({n})"),
                    None => Ok(()),
                }
            }
            Expr::Count { family, weight } => write!(f, "{}({weight})", family.name()),
            Expr::Query(q) => match q {
                Query::MellinRepresentation(n) => write!(f, "eq7({n})"),
                Query::AlternatingLimit => write!(f, "eq9"),
                Query::ArgumentTransform(x) => write!(f, "eq18({})", format_rational_decimal(x)),
                Query::TMoment(n) => write!(f, "eq27({n})"),
                Query::Duplication { a, n } => write!(f, "dup({a},{n})"),
            },
        }
    }
}

const HEADS: &[&str] = &["S", "S0", "H", "H*", "M", "N_all", "N_A", "N_D", "N_H", "N_ADH", "eq7", "eq9", "eq18", "eq27", "dup"];

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn syntax(&self, expected: &[&str]) -> Error {
        Error::Syntax { offset: self.pos, expected: expected.iter().map(|s| format!("`{s}`")).collect() }
    }

    fn semantic(&self, at: usize, msg: impl fmt::Display) -> Error {
        Error::Domain(format!("{msg} (at byte {at})"))
    }

    fn peek(&mut self, lit: &str) -> bool {
        self.ws();
        self.rest().starts_with(lit)
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.peek(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.eat(lit) {
            Ok(())
        } else {
            Err(self.syntax(&[lit]))
        }
    }

    fn ident(&mut self) -> &'a str {
        self.ws();
        let rest = self.rest();
        let mut len = rest.bytes().take_while(|b| b.is_ascii_alphanumeric() || *b == b'_').count();
        if len > 0 && rest[len..].starts_with('*') {
            len += 1;
        }
        self.pos += len;
        &rest[..len]
    }

    fn digits(&mut self) -> &'a str {
        let rest = self.rest();
        let len = rest.bytes().take_while(|b| b.is_ascii_digit()).count();
        self.pos += len;
        &rest[..len]
    }

    fn number(&mut self) -> Result<Rational> {
        self.ws();
        let neg = self.rest().starts_with('-');
        if neg {
            self.pos += 1;
        }
        self.unsigned_number().map(|r| if neg { -r } else { r })
    }

    fn unsigned_number(&mut self) -> Result<Rational> {
        self.ws();
        let start = self.pos;
        let ip = self.digits();
        if ip.is_empty() {
            return Err(self.syntax(&["number"]));
        }
        let int: BigInt = ip.parse().expect("digits");
        if self.rest().starts_with('.') {
            self.pos += 1;
            let fp = self.digits();
            if fp.is_empty() {
                return Err(self.syntax(&["digit"]));
            }
            let n: BigInt = format!("{ip}{fp}").parse().expect("digits");
            return Ok(Rational::new(n, num_traits::pow(BigInt::from(10), fp.len())));
        }
        if self.rest().starts_with('/') && self.rest()[1..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
            let d: BigInt = self.digits().parse().expect("digits");
            if d.is_zero() {
                return Err(self.semantic(start, "zero denominator"));
            }
            return Ok(Rational::new(int, d));
        }
        Ok(Rational::from_integer(int))
    }

    fn int(&mut self) -> Result<i64> {
        self.ws();
        let at = self.pos;
        let r = self.number()?;
        if !r.is_integer() {
            return Err(self.semantic(at, "an integer is required"));
        }
        r.to_integer().to_i64().ok_or_else(|| self.semantic(at, "integer out of range"))
    }

    fn uint(&mut self) -> Result<u64> {
        self.ws();
        let at = self.pos;
        let v = self.int()?;
        u64::try_from(v).map_err(|_| self.semantic(at, "a non-negative integer is required"))
    }

    fn small(&mut self) -> Result<u32> {
        self.ws();
        let at = self.pos;
        let v = self.uint()?;
        u32::try_from(v).map_err(|_| self.semantic(at, "integer out of range"))
    }

    fn number_list(&mut self, close: &str) -> Result<Vec<(usize, Rational)>> {
        let mut out = Vec::new();
        loop {
            self.ws();
            out.push((self.pos, self.number()?));
            if self.eat(close) {
                return Ok(out);
            }
            if !self.eat(",") {
                return Err(self.syntax(&[",", close]));
            }
        }
    }

    fn arg(&mut self) -> Result<Arg> {
        if self.eat("inf") || self.eat("∞") {
            return Ok(Arg::Infinity);
        }
        let a = self.number()?;
        if self.eat("i") {
            return Ok(Arg::number(Rational::zero(), a));
        }
        let sign = if self.eat("+") {
            1
        } else if self.eat("-") {
            -1
        } else {
            return Ok(Arg::number(a, Rational::zero()));
        };
        let b = self.unsigned_number()?;
        self.expect("i")?;
        Ok(Arg::number(a, if sign < 0 { -b } else { b }))
    }

    fn optional_arg(&mut self) -> Result<Option<Arg>> {
        if !self.eat("(") {
            return Ok(None);
        }
        let a = self.arg()?;
        self.expect(")")?;
        Ok(Some(a))
    }

    fn triple(&mut self) -> Result<(usize, u64, u64, i64)> {
        self.ws();
        let at = self.pos;
        self.expect("(")?;
        let a = self.uint()?;
        self.expect(",")?;
        let b = self.uint()?;
        self.expect(",")?;
        let c = self.int()?;
        self.expect(")")?;
        Ok((at, a, b, c))
    }

    fn sum(&mut self) -> Result<Expr> {
        self.expect("[")?;
        let cyclotomic = self.peek("(");
        let mut ints = Vec::new();
        let mut triples = Vec::new();
        loop {
            self.ws();
            if cyclotomic {
                triples.push(self.triple()?);
            } else {
                ints.push((self.pos, self.int()?));
            }
            if self.eat("]") {
                break;
            }
            if !self.eat(",") {
                return Err(self.syntax(&[",", "]"]));
            }
        }
        let mut weights = None;
        let mut arg = None;
        if self.eat("(") {
            if self.eat("{") {
                weights = Some(self.number_list("}")?);
                if self.eat(";") {
                    arg = Some(self.arg()?);
                }
            } else {
                arg = Some(self.arg()?);
            }
            self.expect(")")?;
        }
        let count = if cyclotomic { triples.len() } else { ints.len() };
        if let Some(w) = &weights {
            if w.len() != count {
                return Err(self.semantic(w[0].0, format!("{count} indices but {} weights", w.len())));
            }
            if let Some((at, _)) = w.iter().find(|(_, r)| r.is_zero()) {
                return Err(self.semantic(*at, "weights must be nonzero"));
            }
        }
        let index = if cyclotomic {
            let mut letters = Vec::new();
            for (i, &(at, a, b, c)) in triples.iter().enumerate() {
                let w = weights.as_ref().map_or_else(Rational::one, |w| w[i].1.clone());
                if c <= 0 {
                    return Err(self.semantic(at, "cyclotomic exponent must be positive"));
                }
                let (a, b, c) = (a.try_into().ok(), b.try_into().ok(), c.try_into().ok());
                let (Some(a), Some(b), Some(c)) = (a, b, c) else {
                    return Err(self.semantic(at, "integer out of range"));
                };
                letters.push(CyclotomicLetter::new(a, b, c, w).map_err(|e| self.semantic(at, strip(e)))?);
            }
            SumIndex::Cyclotomic(CyclotomicIndex::new(letters)?)
        } else if let Some(w) = weights {
            let mut letters = Vec::new();
            for (&(at, e), (_, wt)) in ints.iter().zip(w) {
                if e <= 0 {
                    return Err(self.semantic(at, "generalized sum exponents must be positive"));
                }
                letters.push(GeneralLetter::new(e as u32, wt));
            }
            SumIndex::General(GeneralIndex::new(letters)?)
        } else {
            if let Some((at, _)) = ints.iter().find(|(_, a)| *a == 0) {
                return Err(self.semantic(*at, "zero index entry"));
            }
            SumIndex::Harmonic(HarmonicIndex::new(ints.into_iter().map(|(_, a)| a).collect())?)
        };
        Ok(Expr::Sum { index, arg })
    }

    fn single(&mut self) -> Result<Expr> {
        self.expect("[")?;
        let (at, l, m, n) = self.triple()?;
        self.expect("]")?;
        let (Ok(l), Ok(m)) = (u32::try_from(l), u32::try_from(m)) else {
            return Err(self.semantic(at, "integer out of range"));
        };
        if l <= m || n == 0 {
            return Err(self.semantic(at, format!("single cyclotomic sum ({l},{m},{n}) needs l > m and n ≠ 0")));
        }
        let arg = self.optional_arg()?;
        Ok(Expr::SingleCyclotomic { l, m, n, arg })
    }

    fn letter(&mut self) -> Result<PolyLetter> {
        self.ws();
        let at = self.pos;
        if self.eat("{") {
            let k = self.small()?;
            self.expect(",")?;
            let l = self.small()?;
            self.expect("}")?;
            return PolyLetter::cyclotomic(k, l).map_err(|e| self.semantic(at, strip(e)));
        }
        if self.peek("w") {
            let name = self.ident();
            return SqrtLetter::from_name(name).map(PolyLetter::Sqrt).ok_or_else(|| {
                self.pos = at;
                self.syntax(&["w12", "w13", "w17", "w18"])
            });
        }
        if self.peek("-") || self.rest().starts_with(|c: char| c.is_ascii_digit()) {
            return Ok(PolyLetter::Root(self.number()?));
        }
        Err(self.syntax(&["number", "{", "w12", "w13", "w17", "w18"]))
    }

    fn polylog(&mut self, star: bool) -> Result<Expr> {
        self.expect("[")?;
        let mut letters = Vec::new();
        if !self.eat("]") {
            loop {
                letters.push(self.letter()?);
                if self.eat("]") {
                    break;
                }
                if !self.eat(",") {
                    return Err(self.syntax(&[",", "]"]));
                }
            }
        }
        let arg = if self.eat("(") {
            let x = self.number()?;
            self.expect(")")?;
            Some(x)
        } else {
            None
        };
        Ok(Expr::Polylog { star, word: PolyLogWord::new(letters), arg })
    }

    fn linear(&mut self) -> Result<Rational> {
        if self.eat("x") {
            return Ok(Rational::zero());
        }
        self.expect("(")?;
        self.expect("x")?;
        let neg = if self.eat("+") {
            false
        } else if self.eat("-") {
            true
        } else {
            return Err(self.syntax(&["+", "-"]));
        };
        let r = self.unsigned_number()?;
        self.expect(")")?;
        Ok(if neg { r } else { -r })
    }

    fn integrand(&mut self) -> Result<MellinIntegrand> {
        if self.eat("T") {
            self.expect("(")?;
            self.expect("x")?;
            self.expect(")")?;
            return Ok(MellinIntegrand::T);
        }
        let mut power = 0u32;
        let mut word: Option<Vec<i64>> = None;
        loop {
            self.ws();
            let at = self.pos;
            if self.eat("x") {
                power += if self.eat("^") { self.small()? } else { 1 };
            } else if self.eat("H") {
                if word.is_some() {
                    return Err(self.semantic(at, "at most one polylogarithm factor"));
                }
                self.expect("[")?;
                let mut w = Vec::new();
                if !self.eat("]") {
                    loop {
                        self.ws();
                        let la = self.pos;
                        let a = self.int()?;
                        if !(-1..=1).contains(&a) {
                            return Err(self.semantic(la, "moment integrands use the letters 0, 1, -1"));
                        }
                        w.push(a);
                        if self.eat("]") {
                            break;
                        }
                        if !self.eat(",") {
                            return Err(self.syntax(&[",", "]"]));
                        }
                    }
                }
                self.expect("(")?;
                self.expect("x")?;
                self.expect(")")?;
                word = Some(w);
            } else if self.peek("1") {
                let one = self.number()?;
                if !one.is_one() {
                    return Err(self.semantic(at, "the only constant factor is 1"));
                }
            } else {
                return Err(self.syntax(&["x", "H", "1", "T"]));
            }
            if !self.eat("*") {
                break;
            }
        }
        let mut poles = Vec::new();
        if self.eat("/") {
            self.ws();
            let rest = self.rest();
            let single = rest.starts_with('x') || {
                let inner = rest[1..].trim_start();
                inner.starts_with('x') && inner[1..].trim_start().starts_with(['+', '-'])
            };
            if single {
                poles.push(self.linear()?);
            } else {
                self.expect("(")?;
                loop {
                    poles.push(self.linear()?);
                    if self.eat(")") {
                        break;
                    }
                    if !self.eat("*") {
                        return Err(self.syntax(&["*", ")"]));
                    }
                }
            }
        }
        Ok(MellinIntegrand::Rational { word: word.unwrap_or_default(), power, poles })
    }

    fn moment(&mut self) -> Result<Expr> {
        self.expect("[")?;
        let integrand = self.integrand()?;
        self.expect("]")?;
        let n = if self.eat("(") {
            let n = self.uint()?;
            self.expect(")")?;
            Some(n)
        } else {
            None
        };
        Ok(Expr::Moment { integrand, n })
    }

    fn in_parens<T>(&mut self, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        self.expect("(")?;
        let v = f(self)?;
        self.expect(")")?;
        Ok(v)
    }

    fn expr(&mut self) -> Result<Expr> {
        self.ws();
        let start = self.pos;
        let head = self.ident();
        let e = match head {
            "S" => self.sum()?,
            "S0" => self.single()?,
            "H" => self.polylog(false)?,
            "H*" => self.polylog(true)?,
            "M" => self.moment()?,
            "N_all" | "N_A" | "N_D" | "N_H" | "N_ADH" => {
                let family = match head {
                    "N_all" => CountFamily::All,
                    "N_A" => CountFamily::A,
                    "N_D" => CountFamily::D,
                    "N_H" => CountFamily::H,
                    _ => CountFamily::Adh,
                };
                let weight = self.in_parens(|p| p.small())?;
                Expr::Count { family, weight }
            }
            "eq7" => Expr::Query(Query::MellinRepresentation(self.in_parens(|p| p.uint())?)),
            "eq9" => Expr::Query(Query::AlternatingLimit),
            "eq18" => Expr::Query(Query::ArgumentTransform(self.in_parens(|p| p.number())?)),
            "eq27" => Expr::Query(Query::TMoment(self.in_parens(|p| p.uint())?)),
            "dup" => {
                let (a, n) = self.in_parens(|p| {
                    let a = p.int()?;
                    p.expect(",")?;
                    Ok((a, p.uint()?))
                })?;
                Expr::Query(Query::Duplication { a, n })
            }
            _ => {
                self.pos = start;
                return Err(self.syntax(HEADS));
            }
        };
        self.ws();
        if self.pos != self.src.len() {
            return Err(self.syntax(&["end of input"]));
        }
        Ok(e)
    }
}

fn strip(e: Error) -> String {
    match e {
        Error::Domain(m) => m,
        other => other.to_string(),
    }
}

/// Parses one expression. Syntax errors carry the byte offset and the
/// accepted tokens; well-formed input with invalid content is a domain error.
pub fn parse(input: &str) -> Result<Expr> {
    Parser { src: input, pos: 0 }.expr()
}

/// Parses a bare argument such as `20`, `inf` or `0.5+2i`.
pub fn parse_arg(input: &str) -> Result<Arg> {
    let mut p = Parser { src: input, pos: 0 };
    let a = p.arg()?;
    p.ws();
    if p.pos != input.len() {
        return Err(p.syntax(&["end of input"]));
    }
    Ok(a)
}

/// Outcome of evaluating an expression.
#[derive(Debug, Clone)]
pub enum Value {
    Exact(Rational),
    Integer(BigInt),
    Real(BigFloat),
    Complex(ComplexBig),
    Check(Verification),
    ExactCheck { lhs: Rational, rhs: Rational },
}

impl Value {
    pub fn passed(&self) -> Option<bool> {
        match self {
            Value::Check(v) => Some(v.passed()),
            Value::ExactCheck { lhs, rhs } => Some(lhs == rhs),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EvalOptions {
    /// Stands for (−1)^N when alternating sums are continued to complex N.
    pub parity: Parity,
}

fn missing(what: &str) -> Error {
    Error::Domain(format!("the expression has no {what}"))
}

fn rat_complex(re: &Rational, im: &Rational, prec: Precision) -> ComplexBig {
    ComplexBig::new(BigFloat::from_rational(re, prec), BigFloat::from_rational(im, prec))
}

pub fn evaluate(expr: &Expr, prec: Precision) -> Result<Value> {
    evaluate_with(expr, prec, &EvalOptions::default())
}

pub fn evaluate_with(expr: &Expr, prec: Precision, opts: &EvalOptions) -> Result<Value> {
    match expr {
        Expr::Sum { index, arg } => match arg.as_ref().ok_or_else(|| missing("upper limit"))? {
            Arg::Int(n) => Ok(Value::Exact(eval_sum(index, *n))),
            Arg::Infinity => {
                let g = match index {
                    SumIndex::Harmonic(h) => GeneralIndex::from(h),
                    SumIndex::General(g) => g.clone(),
                    SumIndex::Cyclotomic(_) => return Err(Error::Unsupported("limits of cyclotomic sums".into())),
                };
                match limit_to_infinity_general(&g, prec) {
                    LimitOutcome::Converged(r) => Ok(Value::Real(r.value)),
                    LimitOutcome::Divergent(d) => Err(Error::Domain(d.to_string())),
                }
            }
            Arg::Number { re, im } => match index {
                SumIndex::Harmonic(h) if h.depth() == 1 => {
                    let cfg = ContinuationConfig { parity: opts.parity, ..Default::default() };
                    Ok(Value::Complex(continue_single_with(h.entries()[0], &rat_complex(re, im, prec), &cfg, prec)?))
                }
                _ => Err(Error::Unsupported("only single harmonic sums are continued to non-integer N".into())),
            },
        },
        Expr::SingleCyclotomic { l, m, n, arg } => match arg.as_ref().ok_or_else(|| missing("upper limit"))? {
            Arg::Int(upper) => Ok(Value::Exact(eval_cyclotomic_single(*l, *m, *n, *upper)?)),
            _ => Err(Error::Unsupported("single cyclotomic sums are evaluated at integer N".into())),
        },
        Expr::Polylog { star, word, arg } => {
            let x = arg.as_ref().ok_or_else(|| missing("argument"))?;
            let wp = Precision::digits(prec.decimal_digits() + 5);
            Ok(Value::Real(eval_polylog(word, &BigFloat::from_rational(x, wp), *star, prec)?))
        }
        Expr::Moment { integrand, n } => {
            let n = n.ok_or_else(|| missing("moment N"))?;
            Ok(Value::Real(mellin_moment(integrand, n, prec)?))
        }
        Expr::Count { family, weight } => Ok(Value::Integer(family.count(*weight)?)),
        Expr::Query(q) => evaluate_query(q, prec),
    }
}

fn evaluate_query(q: &Query, prec: Precision) -> Result<Value> {
    match q {
        Query::MellinRepresentation(n) => Ok(Value::Check(verify_mellin_identity(*n, prec)?)),
        Query::AlternatingLimit => {
            let idx = GeneralIndex::from(&HarmonicIndex::new(vec![-2, 1, 1])?);
            let lhs = match limit_to_infinity_general(&idx, prec) {
                LimitOutcome::Converged(r) => r.value,
                LimitOutcome::Divergent(d) => return Err(Error::Domain(d.to_string())),
            };
            Ok(Value::Check(Verification { lhs, rhs: alternating_211_limit(prec), tolerance: 1e-8 }))
        }
        Query::ArgumentTransform(x) => Ok(Value::Check(verify_arg_transform(&BigFloat::from_rational(x, prec), prec)?)),
        Query::TMoment(n) => {
            let lhs = mellin_moment(&MellinIntegrand::T, *n, prec)?;
            let rhs = BigFloat::from_rational(&t_moment_closed_form(*n), prec);
            Ok(Value::Check(Verification { lhs, rhs, tolerance: 1e-6 }))
        }
        Query::Duplication { a, n } => {
            let (lhs, rhs) = duplication_sides(*a, *n)?;
            Ok(Value::ExactCheck { lhs, rhs })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn round_trip(s: &str) {
        let e = parse(s).unwrap_or_else(|err| panic!("{s}: {err}"));
        assert_eq!(e.to_string(), s);
        assert_eq!(parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn printed_forms() {
        for s in [
            "S[-2,1,1](20)",
            "S[1,2]({0.5,-1};5)",
            "S[1,2]({1/3,2})",
            "S[(2,1,1)](10)",
            "S[(2,1,1),(3,2,2)]({-1,1};4)",
            "S0[(2,1,-3)](6)",
            "S[1](0.5+2i)",
            "S[-1](-1/3-0.25i)",
            "S[2](2i)",
            "S[2,1](inf)",
            "H[0,1,1](0.3)",
            "H[{4,1},0](0.5)",
            "H[0.5,-1](0.25)",
            "H*[w17,-1,0](0.5)",
            "H[]",
            "M[H[0,1,1](x)/(x+1)](3)",
            "M[x^3](2)",
            "M[x*H[-1](x)/(x*(x-1/3))]",
            "M[T(x)](4)",
            "N_ADH(8)",
            "eq7(3)",
            "eq9",
            "eq18(0.3)",
            "eq27(2)",
            "dup(2,5)",
        ] {
            round_trip(s);
        }
    }

    #[test]
    fn lenient_input() {
        assert_eq!(parse(" S[ 1 , 2 ]( 3 ) ").unwrap().to_string(), "S[1,2](3)");
        assert_eq!(parse("S[1](∞)").unwrap().to_string(), "S[1](inf)");
        assert_eq!(parse("M[1/(x+1)](0)").unwrap().to_string(), "M[1/(x+1)](0)");
    }

    #[test]
    fn diagnostics() {
        match parse("S[1,2") {
            Err(Error::Syntax { offset, expected }) => {
                assert_eq!(offset, 5);
                assert!(expected.contains(&"`]`".to_string()));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("Q[1]"), Err(Error::Syntax { offset: 0, .. })));
        assert!(matches!(parse("S[1](3) x"), Err(Error::Syntax { offset: 8, .. })));
        let e = parse("S[0,1](3)").unwrap_err();
        assert!(matches!(e, Error::Domain(ref m) if m.contains("zero index entry") && m.contains("byte 2")));
        assert!(matches!(parse("S[(1,2,1)](3)"), Err(Error::Domain(_))));
        assert!(matches!(parse("H[{4,2}](0.5)"), Err(Error::Domain(_))));
        assert!(matches!(parse("S[1,2]({1};3)"), Err(Error::Domain(_))));
    }

    #[test]
    fn evaluation() {
        let p = Precision::digits(20);
        match evaluate(&parse("S[1](3)").unwrap(), p).unwrap() {
            Value::Exact(r) => assert_eq!(r, rat(11, 6)),
            other => panic!("{other:?}"),
        }
        match evaluate(&parse("N_ADH(8)").unwrap(), p).unwrap() {
            Value::Integer(n) => assert_eq!(n, BigInt::from(486)),
            other => panic!("{other:?}"),
        }
        assert_eq!(evaluate(&parse("eq7(3)").unwrap(), p).unwrap().passed(), Some(true));
        assert_eq!(evaluate(&parse("dup(3,4)").unwrap(), p).unwrap().passed(), Some(true));
        assert!(matches!(evaluate(&parse("S[1](inf)").unwrap(), p), Err(Error::Domain(_))));
        assert!(matches!(evaluate(&parse("S[1]").unwrap(), p), Err(Error::Domain(_))));
    }
}
