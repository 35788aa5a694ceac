//! High-precision floating point with an explicit working precision.
//!
//! A thin wrapper over `astro_float` that carries its precision along with
//! the value: binary operations round to the larger of the two operand
//! precisions. Values built by `Zero::zero()`/`One::one()` carry precision 0
//! and adopt whatever they are combined with.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use astro_float::{BigFloat as Raw, Consts, Radix, RoundingMode, Sign};
use num_complex::Complex;
use num_traits::{Num, One, Zero};

use super::Rational;

pub const DEFAULT_DIGITS: u32 = 50;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Working precision in significant decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(u32);

impl Precision {
    pub fn digits(d: u32) -> Self {
        Precision(d.max(1))
    }

    pub fn decimal_digits(self) -> u32 {
        self.0
    }

    /// Binary precision with a guard margin, rounded up to whole words.
    pub fn bits(self) -> usize {
        let raw = (self.0 as f64 * std::f64::consts::LOG2_10).ceil() as usize + 24;
        raw.div_ceil(64) * 64
    }

    /// 10^(−digits) as a float (underflows to 0 beyond ~300 digits).
    pub fn epsilon(self) -> f64 {
        10f64.powi(-(self.0 as i32))
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision(DEFAULT_DIGITS)
    }
}

#[derive(Clone)]
pub struct BigFloat {
    raw: Raw,
    bits: usize,
}

fn op_bits(a: usize, b: usize) -> usize {
    match a.max(b) {
        0 => Precision::default().bits(),
        p => p,
    }
}

impl BigFloat {
    fn wrap(raw: Raw, bits: usize) -> Self {
        BigFloat { raw, bits }
    }

    pub fn zero_with(prec: Precision) -> Self {
        Self::wrap(Raw::from_f64(0.0, prec.bits()), prec.bits())
    }

    pub fn from_f64(f: f64, prec: Precision) -> Self {
        Self::wrap(Raw::from_f64(f, prec.bits()), prec.bits())
    }

    pub fn from_i64(i: i64, prec: Precision) -> Self {
        Self::wrap(Raw::from_i64(i, prec.bits()), prec.bits())
    }

    pub fn from_u64(i: u64, prec: Precision) -> Self {
        Self::wrap(Raw::from_u64(i, prec.bits()), prec.bits())
    }

    pub fn from_rational(r: &Rational, prec: Precision) -> Self {
        let p = prec.bits();
        let parse = |s: String| with_consts(|cc| Raw::parse(&s, Radix::Dec, p + 64, RM, cc));
        let n = parse(r.numer().to_string());
        let d = parse(r.denom().to_string());
        Self::wrap(n.div(&d, p, RM), p)
    }

    /// Parses a decimal literal such as `0.3`, `-2.5e-3` or `17`.
    pub fn parse(s: &str, prec: Precision) -> Option<Self> {
        let t = s.trim();
        let ok = !t.is_empty()
            && t.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'))
            && t.chars().any(|c| c.is_ascii_digit());
        if !ok {
            return None;
        }
        let raw = with_consts(|cc| Raw::parse(t, Radix::Dec, prec.bits(), RM, cc));
        if raw.is_nan() || raw.is_inf() {
            return None;
        }
        Some(Self::wrap(raw, prec.bits()))
    }

    /// The same value carried at a different precision.
    pub fn with_precision(&self, prec: Precision) -> Self {
        let mut raw = self.raw.clone();
        let _ = raw.set_precision(prec.bits(), RM);
        Self::wrap(raw, prec.bits())
    }

    pub fn precision_bits(&self) -> usize {
        self.bits
    }

    /// Working precision in decimal digits (the default for exact constants).
    pub fn precision(&self) -> Precision {
        let bits = op_bits(self.bits, 0);
        Precision::digits((((bits - 24) as f64) / std::f64::consts::LOG2_10).floor() as u32)
    }

    fn p(&self) -> usize {
        op_bits(self.bits, 0)
    }

    pub fn pi(prec: Precision) -> Self {
        Self::wrap(with_consts(|cc| cc.pi(prec.bits(), RM)), prec.bits())
    }

    pub fn ln2(prec: Precision) -> Self {
        Self::wrap(with_consts(|cc| cc.ln_2(prec.bits(), RM)), prec.bits())
    }

    pub fn is_zero(&self) -> bool {
        self.raw.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.raw.is_negative()
    }

    pub fn is_finite(&self) -> bool {
        !self.raw.is_nan() && !self.raw.is_inf()
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.raw.abs(), self.bits)
    }

    pub fn sqrt(&self) -> Self {
        let p = self.p();
        Self::wrap(self.raw.sqrt(p, RM), p)
    }

    pub fn ln(&self) -> Self {
        let p = self.p();
        Self::wrap(with_consts(|cc| self.raw.ln(p, RM, cc)), p)
    }

    pub fn exp(&self) -> Self {
        let p = self.p();
        Self::wrap(with_consts(|cc| self.raw.exp(p, RM, cc)), p)
    }

    pub fn atan(&self) -> Self {
        let p = self.p();
        Self::wrap(with_consts(|cc| self.raw.atan(p, RM, cc)), p)
    }

    pub fn sin(&self) -> Self {
        let p = self.p();
        Self::wrap(with_consts(|cc| self.raw.sin(p, RM, cc)), p)
    }

    pub fn cos(&self) -> Self {
        let p = self.p();
        Self::wrap(with_consts(|cc| self.raw.cos(p, RM, cc)), p)
    }

    /// Angle of the point (x, y) = (self, y), in (−π, π].
    pub fn atan2(y: &Self, x: &Self) -> Self {
        let p = op_bits(y.bits, x.bits);
        let prec = Precision::digits(((p - 24) as f64 / std::f64::consts::LOG2_10) as u32);
        if x.is_zero() {
            if y.is_zero() {
                return Self::zero_with(prec);
            }
            let half = Self::pi(prec) / Self::from_i64(2, prec);
            return if y.is_negative() { -half } else { half };
        }
        let base = (y / x).atan();
        if !x.is_negative() {
            base
        } else if y.is_negative() {
            base - Self::pi(prec)
        } else {
            base + Self::pi(prec)
        }
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, n: i64) -> Self {
        let mut result = Self::wrap(Raw::from_i64(1, self.p()), self.p());
        let mut base = self.clone();
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        if n < 0 {
            Self::wrap(Raw::from_i64(1, self.p()), self.p()) / result
        } else {
            result
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.raw.is_nan() {
            return f64::NAN;
        }
        if self.raw.is_inf() {
            return if self.raw.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        let Some((words, _bits, sign, exp, _)) = self.raw.as_raw_parts() else {
            return f64::NAN;
        };
        if words.iter().all(|w| *w == 0) {
            return 0.0;
        }
        // mantissa is 0.m with the most significant bit at the top of the last word
        let top = *words.last().expect("nonempty mantissa") as f64;
        let next = if words.len() > 1 { words[words.len() - 2] as f64 } else { 0.0 };
        let frac = (top + next / 18446744073709551616.0) / 18446744073709551616.0;
        let v = frac * 2f64.powi(exp);
        if sign == Sign::Neg {
            -v
        } else {
            v
        }
    }

    /// Decimal representation `(negative, digits, exponent)` meaning
    /// ±0.d₁d₂… × 10^exponent; `None` for zero or non-finite values.
    fn decimal_parts(&self) -> Option<(bool, Vec<u8>, i64)> {
        if self.raw.is_zero() || !self.is_finite() {
            return None;
        }
        let s = with_consts(|cc| self.raw.format(Radix::Dec, RM, cc)).ok()?;
        let (neg, body) = match s.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, s.as_str()),
        };
        let (mant, exp) = match body.split_once('e') {
            Some((m, e)) => (m, e.parse::<i64>().ok()?),
            None => (body, 0),
        };
        let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
        let mut digits: Vec<u8> = ip.bytes().chain(fp.bytes()).map(|b| b - b'0').collect();
        let mut e = exp + ip.len() as i64;
        while digits.first() == Some(&0) {
            digits.remove(0);
            e -= 1;
        }
        while digits.last() == Some(&0) {
            digits.pop();
        }
        if digits.is_empty() {
            return None;
        }
        Some((neg, digits, e))
    }

    /// Fixed-point notation rounded to `sig` significant digits, with
    /// trailing zeros removed.
    pub fn to_fixed(&self, sig: usize) -> String {
        if !self.is_finite() {
            return format!("{}", self.raw);
        }
        let Some((neg, mut digits, mut e)) = self.decimal_parts() else {
            return "0".into();
        };
        let sig = sig.max(1);
        if digits.len() > sig {
            let round_up = digits[sig] >= 5;
            digits.truncate(sig);
            if round_up {
                let mut i = sig;
                loop {
                    if i == 0 {
                        digits.insert(0, 1);
                        e += 1;
                        break;
                    }
                    i -= 1;
                    if digits[i] == 9 {
                        digits[i] = 0;
                    } else {
                        digits[i] += 1;
                        break;
                    }
                }
                digits.truncate(sig);
            }
            while digits.last() == Some(&0) {
                digits.pop();
            }
        }
        let text: String = digits.iter().map(|d| char::from(b'0' + d)).collect();
        let body = if e <= 0 {
            format!("0.{}{}", "0".repeat((-e) as usize), text)
        } else if e as usize >= text.len() {
            format!("{}{}", text, "0".repeat(e as usize - text.len()))
        } else {
            let (a, b) = text.split_at(e as usize);
            format!("{a}.{b}")
        };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }

    /// Scientific notation with `sig` significant digits.
    pub fn to_sci(&self, sig: usize) -> String {
        let Some((neg, _, e)) = self.decimal_parts() else {
            return "0".into();
        };
        let scale = BigFloat::from_i64(10, self.precision()).powi(-(e - 1));
        let m = (self * &scale).abs().to_fixed(sig);
        // rounding can carry into a second integer digit
        let (m, e) = if m.starts_with("10") { ("1".to_string(), e) } else { (m, e - 1) };
        format!("{}{}e{}", if neg { "-" } else { "" }, m, e)
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_fixed(20))
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = f.precision().unwrap_or(15);
        write!(f, "{}", self.to_fixed(sig))
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.raw.cmp(&other.raw) == Some(0)
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.raw.cmp(&other.raw).map(|c| c.cmp(&0))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr<&BigFloat> for &BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: &BigFloat) -> BigFloat {
                let p = op_bits(self.bits, rhs.bits);
                BigFloat::wrap(self.raw.$m(&rhs.raw, p, RM), if self.bits == 0 && rhs.bits == 0 { 0 } else { p })
            }
        }
        impl $tr<BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: BigFloat) -> BigFloat {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: &BigFloat) -> BigFloat {
                (&self).$m(rhs)
            }
        }
        impl $tr<BigFloat> for &BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: BigFloat) -> BigFloat {
                self.$m(&rhs)
            }
        }
        impl $atr<&BigFloat> for BigFloat {
            fn $am(&mut self, rhs: &BigFloat) {
                *self = (&*self).$m(rhs);
            }
        }
        impl $atr<BigFloat> for BigFloat {
            fn $am(&mut self, rhs: BigFloat) {
                *self = (&*self).$m(&rhs);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);
binop!(Div, div, DivAssign, div_assign);

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat::wrap(self.raw.neg(), self.bits)
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat::wrap(self.raw.clone().neg(), self.bits)
    }
}

/// Truncated remainder: `a − trunc(a/b)·b`.
impl std::ops::Rem for BigFloat {
    type Output = BigFloat;
    fn rem(self, rhs: BigFloat) -> BigFloat {
        let q = &self / &rhs;
        let t = BigFloat::wrap(q.raw.int(), q.bits);
        &self - &(&t * &rhs)
    }
}

impl Zero for BigFloat {
    fn zero() -> Self {
        BigFloat::wrap(Raw::from_f64(0.0, 64), 0)
    }
    fn is_zero(&self) -> bool {
        self.raw.is_zero()
    }
}

impl One for BigFloat {
    fn one() -> Self {
        BigFloat::wrap(Raw::from_f64(1.0, 64), 0)
    }
}

impl Num for BigFloat {
    type FromStrRadixErr = String;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, String> {
        if radix != 10 {
            return Err(format!("unsupported radix {radix}"));
        }
        BigFloat::parse(s, Precision::default()).ok_or_else(|| format!("invalid number `{s}`"))
    }
}

/// Complex number with high-precision parts.
pub type ComplexBig = Complex<BigFloat>;

pub fn complex_abs(z: &ComplexBig) -> BigFloat {
    (&z.re * &z.re + &z.im * &z.im).sqrt()
}

/// Principal branch of the complex logarithm.
pub fn complex_ln(z: &ComplexBig) -> ComplexBig {
    Complex::new(complex_abs(z).ln(), BigFloat::atan2(&z.im, &z.re))
}

pub fn complex_powi(z: &ComplexBig, n: i64) -> ComplexBig {
    let one = Complex::new(BigFloat::one().with_precision(z.re.precision()), BigFloat::zero_with(z.re.precision()));
    let mut result = one.clone();
    let mut base = z.clone();
    let mut e = n.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            result = &result * &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    if n < 0 {
        one / result
    } else {
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn basic_arithmetic_and_functions() {
        let p = Precision::default();
        let half = BigFloat::from_f64(0.5, p);
        assert_eq!(half.ln().to_fixed(20), "-0.69314718055994530942");
        let third = BigFloat::from_rational(&rat(1, 3), p);
        assert_eq!(third.to_fixed(10), "0.3333333333");
        assert_eq!((&third * BigFloat::from_i64(3, p)).to_fixed(40), "1");
        assert_eq!(BigFloat::pi(p).to_fixed(30), "3.14159265358979323846264338328");
        assert_eq!(BigFloat::from_i64(2, p).sqrt().to_fixed(20), "1.4142135623730950488");
        assert!((BigFloat::from_f64(1.0, p).exp().to_f64() - std::f64::consts::E).abs() < 1e-15);
    }

    #[test]
    fn formatting() {
        let p = Precision::default();
        assert_eq!(BigFloat::from_rational(&rat(7381, 2520), p).to_fixed(15), "2.92896825396825");
        assert_eq!(BigFloat::from_f64(0.0, p).to_fixed(15), "0");
        assert_eq!(BigFloat::from_f64(-1234.5, p).to_fixed(15), "-1234.5");
        assert_eq!(BigFloat::from_f64(0.00125, p).to_fixed(2), "0.0013");
        assert_eq!(BigFloat::from_f64(9.9996, p).to_fixed(4), "10");
        assert_eq!(BigFloat::parse("0.3", p).unwrap().to_fixed(15), "0.3");
        assert!(BigFloat::parse("abc", p).is_none());
    }

    #[test]
    fn f64_round_trip() {
        let p = Precision::default();
        for &x in &[1.0, -2.5, 1e-30, 123456.789, -7e12] {
            assert_eq!(BigFloat::from_f64(x, p).to_f64(), x);
        }
    }

    #[test]
    fn precision_inheritance() {
        let p = Precision::digits(80);
        let x = BigFloat::from_i64(1, p);
        let y = x.clone() / (BigFloat::one() + BigFloat::one() + BigFloat::one());
        assert_eq!(y.precision_bits(), p.bits());
        assert_eq!(y.to_fixed(75), format!("0.{}", "3".repeat(75)));
    }

    #[test]
    fn complex_helpers() {
        let p = Precision::default();
        let z = Complex::new(BigFloat::from_i64(-1, p), BigFloat::zero_with(p));
        let l = complex_ln(&z);
        assert!(l.re.abs().to_f64() < 1e-40);
        assert!((l.im.to_f64() - std::f64::consts::PI).abs() < 1e-15);
        let w = Complex::new(BigFloat::from_i64(1, p), BigFloat::from_i64(1, p));
        let w4 = complex_powi(&w, 4);
        assert!((w4.re.to_f64() + 4.0).abs() < 1e-30);
        let winv = complex_powi(&w, -1);
        assert!((winv.re.to_f64() - 0.5).abs() < 1e-30 && (winv.im.to_f64() + 0.5).abs() < 1e-30);
    }
}
