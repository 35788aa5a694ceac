//! Single harmonic sums S_a(N) at complex N.
//!
//! The large-N expansion is applied once Re N is above a threshold; smaller
//! arguments are shifted up with S_a(N) = S_a(N+1) − sign(a)^{N+1}/(N+1)^{|a|}.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Signed, Zero};

use crate::constants::ConstantSymbol;
use crate::error::{Error, Result};
use crate::exact::{bernoulli_numbers, complex_ln, complex_powi, format_rational_decimal, rat, rat_to_f64, BigFloat, ComplexBig, Precision, Rational};

pub const MAX_INDEX: i64 = 5;
pub const MAX_ORDER: usize = 20;

/// Replacement for (−1)^N in alternating sums: continuation from even or from odd N.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Parity {
    #[default]
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: i64) -> Self {
        if n.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    fn sign(self) -> i64 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContinuationConfig {
    /// Minimal Re N at which the expansion is used.
    pub n0: u32,
    pub order: usize,
    pub parity: Parity,
}

impl Default for ContinuationConfig {
    fn default() -> Self {
        ContinuationConfig { n0: 20, order: 15, parity: Parity::Even }
    }
}

/// S_a(N) ≈ constant + log·ln N + ε Σ_j c_j N^{−j}, ε = (−1)^N for a < 0.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticSeries {
    pub index: i64,
    /// The N → ∞ limit as a combination of named constants.
    pub constant: Vec<(Rational, ConstantSymbol)>,
    pub log_coefficient: Rational,
    /// coefficients[j] multiplies N^{−j}; coefficients[0] is unused.
    pub coefficients: Vec<Rational>,
    pub order: usize,
    pub alternating: bool,
    /// Below this Re N the truncation error is not controlled.
    pub threshold: f64,
}

fn rising(m: u64, len: u64) -> BigInt {
    (0..len).fold(BigInt::one(), |acc, i| acc * BigInt::from(m + i))
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

fn raw_coefficients(a: i64, order: usize) -> Vec<Rational> {
    let mut c = vec![Rational::zero(); order + 1];
    let m = a.unsigned_abs();
    let bern = bernoulli_numbers(order + 2);
    let put = |c: &mut Vec<Rational>, j: u64, v: Rational| {
        if (j as usize) <= order {
            c[j as usize] += v;
        }
    };
    if a == 1 {
        put(&mut c, 1, rat(1, 2));
        for k in 1..=(order as u64 / 2) {
            put(&mut c, 2 * k, -bern[2 * k as usize].clone() / rat(2 * k as i64, 1));
        }
    } else if a > 1 {
        put(&mut c, m - 1, rat(-1, m as i64 - 1));
        put(&mut c, m, rat(1, 2));
        for k in 1..=(order as u64 / 2 + 1) {
            let t = bern[2 * k as usize].clone() * Rational::new(rising(m, 2 * k - 1), factorial(2 * k));
            put(&mut c, m + 2 * k - 1, -t);
        }
    } else {
        put(&mut c, m, rat(1, 2));
        for k in 1..=(order as u64 / 2 + 1) {
            let pow4 = Rational::from_integer(BigInt::from(4).pow(k as u32) - 1);
            let t = pow4 * bern[2 * k as usize].clone() * Rational::new(rising(m, 2 * k - 1), factorial(2 * k));
            put(&mut c, m + 2 * k - 1, -t);
        }
    }
    c
}

fn check_index(a: i64) -> Result<()> {
    if a == 0 || a.abs() > MAX_INDEX {
        return Err(Error::Unsupported(format!("continuation is implemented for 1 ≤ |a| ≤ {MAX_INDEX} (got {a})")));
    }
    Ok(())
}

/// Euler–Maclaurin (a > 0) or Boole (a < 0) expansion of S_a(N) to N^{−order}.
pub fn asymptotic_coeffs(a: i64, order: usize) -> Result<AsymptoticSeries> {
    check_index(a)?;
    if order == 0 || order > MAX_ORDER {
        return Err(Error::Unsupported(format!("expansion order must be in 1..={MAX_ORDER}")));
    }
    let m = a.unsigned_abs() as u32;
    let constant = match a {
        1 => vec![(Rational::one(), ConstantSymbol::EulerGamma)],
        -1 => vec![(rat(-1, 1), ConstantSymbol::Ln2)],
        a if a > 1 => vec![(Rational::one(), ConstantSymbol::Zeta(m))],
        // −η(m) = −(1 − 2^{1−m}) ζ_m
        _ => vec![(rat(1, 1 << (m - 1)) - Rational::one(), ConstantSymbol::Zeta(m))],
    };
    // first omitted terms fix where the truncation error is negligible
    let extra = raw_coefficients(a, order + 2);
    let mut threshold = 1.0f64;
    for (j, c) in extra.iter().enumerate().skip(order + 1) {
        let v = rat_to_f64(c).abs();
        if v > 0.0 {
            threshold = threshold.max((v * 1e17).powf(1.0 / j as f64));
        }
    }
    Ok(AsymptoticSeries {
        index: a,
        constant,
        log_coefficient: if a == 1 { Rational::one() } else { Rational::zero() },
        coefficients: raw_coefficients(a, order),
        order,
        alternating: a < 0,
        threshold,
    })
}

impl AsymptoticSeries {
    /// Value at complex N; `parity` stands for (−1)^N in alternating sums.
    pub fn eval(&self, n: &ComplexBig, parity: Parity, prec: Precision) -> Result<ComplexBig> {
        let zero = BigFloat::zero_with(prec);
        let mut constant = BigFloat::zero_with(prec);
        for (r, c) in &self.constant {
            constant += BigFloat::from_rational(r, prec) * c.eval(prec)?;
        }
        let w = ComplexBig::new(BigFloat::from_i64(1, prec), zero.clone()) / n;
        let mut acc = ComplexBig::new(zero.clone(), zero.clone());
        for c in self.coefficients.iter().skip(1).rev() {
            acc = (acc + ComplexBig::new(BigFloat::from_rational(c, prec), zero.clone())) * &w;
        }
        if self.alternating && parity == Parity::Odd {
            acc = -acc;
        }
        let mut v = acc + ComplexBig::new(constant, zero.clone());
        if !self.log_coefficient.is_zero() {
            let l = BigFloat::from_rational(&self.log_coefficient, prec);
            v = v + complex_ln(n).scale(l);
        }
        Ok(v)
    }
}

impl fmt::Display for AsymptoticSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .constant
            .iter()
            .map(|(r, c)| if r.is_one() { c.to_string() } else { format!("{}*{c}", format_rational_decimal(r)) })
            .collect();
        if !self.log_coefficient.is_zero() {
            parts.push("ln(N)".into());
        }
        let eps = if self.alternating { "(-1)^N*" } else { "" };
        for (j, c) in self.coefficients.iter().enumerate().skip(1) {
            if !c.is_zero() {
                let sign = if c.is_negative() { "-" } else { "+" };
                parts.push(format!("{sign} {eps}{}/N^{j}", format_rational_decimal(&c.abs())));
            }
        }
        write!(f, "{}", parts.join(" ").replace(" + -", " - "))
    }
}

fn nearest_pole(n: &ComplexBig) -> (i64, f64) {
    let re = n.re.to_f64();
    let im = n.im.to_f64();
    let k = (re.round() as i64).min(-1);
    (k, (re - k as f64).hypot(im))
}

/// S_a(N) at complex N with the default configuration.
pub fn continue_single(a: i64, n: &ComplexBig, prec: Precision) -> Result<ComplexBig> {
    continue_single_with(a, n, &ContinuationConfig::default(), prec)
}

pub fn continue_single_with(a: i64, n: &ComplexBig, config: &ContinuationConfig, prec: Precision) -> Result<ComplexBig> {
    check_index(a)?;
    let (pole, distance) = nearest_pole(n);
    if distance < 1e-8 {
        return Err(Error::Pole { pole, distance });
    }
    let series = asymptotic_coeffs(a, config.order)?;
    let wp = Precision::digits(prec.decimal_digits() + 10);
    // truncation below 10^{−digits}
    let digits = wp.decimal_digits() as f64;
    let start = series.threshold.max(config.n0 as f64) * 10f64.powf((digits - 17.0).max(0.0) / (config.order + 1) as f64);
    let re = n.re.to_f64();
    let shifts = if re >= start { 0 } else { (start - re).ceil() as i64 };
    let n = ComplexBig::new(n.re.with_precision(wp), n.im.with_precision(wp));
    let zero = BigFloat::zero_with(wp);
    let m = a.abs();
    let mut terms = ComplexBig::new(zero.clone(), zero.clone());
    let mut z = n.clone();
    for j in 1..=shifts {
        z = ComplexBig::new(&z.re + &BigFloat::from_i64(1, wp), z.im.clone());
        let t = ComplexBig::new(BigFloat::from_i64(1, wp), zero.clone()) / complex_powi(&z, m);
        if a < 0 && (config.parity.sign() * if j % 2 == 0 { 1 } else { -1 }) < 0 {
            terms = terms - t;
        } else {
            terms = terms + t;
        }
    }
    let parity = if shifts % 2 == 0 { config.parity } else { config.parity.flip() };
    let v = series.eval(&z, parity, wp)? - terms;
    Ok(Complex::new(v.re.with_precision(prec), v.im.with_precision(prec)))
}
