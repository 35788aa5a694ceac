//! Exact integer and rational arithmetic plus the number-theoretic helpers
//! (Möbius, totient, cyclotomic polynomials, binomials) the rest of the crate
//! builds on.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

mod bigfloat;
pub use bigfloat::{complex_abs, complex_ln, complex_powi, BigFloat, ComplexBig, Precision, DEFAULT_DIGITS};

/// Exact rational number, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Builds `n / d` (normalized).
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer `n` as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"`, `"p/q"` or a terminating decimal such as `"-0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        if fp.is_empty() && ip.is_empty() {
            return Err(bad());
        }
        if !ip.chars().all(|c| c.is_ascii_digit()) || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let r = Rational::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Formats a rational as a terminating decimal when the denominator is of the
/// form `2^a 5^b`, and as `p/q` otherwise.
pub fn format_rational_decimal(r: &Rational) -> String {
    let mut d = r.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let mut places = 0usize;
    let (mut a, mut b) = (0usize, 0usize);
    while (&d % &two).is_zero() {
        d /= &two;
        a += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        b += 1;
    }
    if !d.is_one() {
        return r.to_string();
    }
    places = places.max(a).max(b);
    if places == 0 {
        return r.numer().to_string();
    }
    let scaled = r * Rational::from_integer(num_traits::pow(BigInt::from(10), places));
    let n = scaled.to_integer();
    let neg = n.is_negative();
    let digits = n.abs().to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (ip, fp) = digits.split_at(digits.len() - places);
    format!("{}{}.{}", if neg { "-" } else { "" }, ip, fp)
}

/// Möbius function μ(n).
pub fn mobius(n: u64) -> Result<i8> {
    if n == 0 {
        return Err(Error::Domain("mobius(0) is undefined".into()));
    }
    let mut m = n;
    let mut sign = 1i8;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return Ok(0);
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    Ok(sign)
}

/// Euler's totient φ(n).
pub fn totient(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Domain("totient(0) is undefined".into()));
    }
    let mut m = n;
    let mut result = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    Ok(result)
}

/// Positive divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Binomial coefficient C(n, k); zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Dense polynomial with arbitrary-precision integer coefficients in
/// ascending degree order. The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `x^n - 1`
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut c = vec![BigInt::zero(); n + 1];
        c[0] = BigInt::from(-1);
        c[n] += 1;
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    /// Exact division by a monic (or ±1-leading) divisor. Fails if the
    /// division leaves a remainder or the leading coefficient is not a unit.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let dl = divisor
            .leading()
            .ok_or_else(|| Error::Domain("division by the zero polynomial".into()))?;
        if !dl.abs().is_one() {
            return Err(Error::Domain("divisor leading coefficient must be ±1".into()));
        }
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return if self.is_zero() { Ok(Self::zero()) } else { Err(Error::Domain("inexact polynomial division".into())) };
        }
        let mut q = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &rem[i + dd] * dl;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            q[i] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::Domain("inexact polynomial division".into()));
        }
        Ok(Self::new(q))
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Rational::from_integer(c.clone());
        }
        acc
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = !mag.is_one() || i == 0;
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u64, IntPolynomial>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, IntPolynomial>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The n-th cyclotomic polynomial, obtained by dividing `x^n - 1` by the
/// product of Φ_d over the proper divisors d of n. Results are memoized.
pub fn cyclotomic_poly(n: u64) -> Result<IntPolynomial> {
    if n == 0 {
        return Err(Error::Domain("cyclotomic_poly(0) is undefined".into()));
    }
    if let Some(p) = cyclotomic_cache().lock().unwrap().get(&n) {
        return Ok(p.clone());
    }
    let mut denom = IntPolynomial::one();
    for d in divisors(n) {
        if d < n {
            denom = denom.mul(&cyclotomic_poly(d)?);
        }
    }
    let len = usize::try_from(n).map_err(|_| Error::Domain("cyclotomic index too large".into()))?;
    let phi = IntPolynomial::x_pow_minus_one(len).div_exact(&denom)?;
    cyclotomic_cache().lock().unwrap().insert(n, phi.clone());
    Ok(phi)
}

/// Bernoulli numbers B_0..=B_n (with B_1 = -1/2), memoized.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    let mut b = CACHE.get_or_init(|| Mutex::new(vec![Rational::one()])).lock().expect("bernoulli cache");
    while b.len() <= n {
        let m = b.len();
        // Σ_{k<m} C(m+1, k) B_k, walking the binomial row incrementally
        let mut acc = Rational::zero();
        let mut c = BigInt::one();
        for (k, bk) in b.iter().enumerate() {
            acc += Rational::from_integer(c.clone()) * bk;
            c = c * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-acc / rat_int(m as i64 + 1));
    }
    b[..=n].to_vec()
}

/// `base^exp` for a rational base and a nonnegative exponent.
pub fn rat_pow(base: &Rational, exp: u64) -> Rational {
    let mut result = Rational::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result *= &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    result
}

/// Rational to `f64` (lossy).
pub fn rat_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Greatest common divisor of two machine integers.
pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}
