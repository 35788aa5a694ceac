//! Integration letters and their local power-series expansions.

use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{cyclotomic_poly, format_rational_decimal, gcd, rat_int, rat_to_f64, totient, BigFloat, Precision, Rational};

/// The square-root valued letters of the nested binomial sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SqrtLetter {
    /// 1/√(y(8−y))
    W12,
    /// 1/((2−y)√(y(8−y)))
    W13,
    /// 1/√(y(8+y))
    W17,
    /// 1/((2+y)√(y(8+y)))
    W18,
}

impl SqrtLetter {
    pub fn name(self) -> &'static str {
        match self {
            SqrtLetter::W12 => "w12",
            SqrtLetter::W13 => "w13",
            SqrtLetter::W17 => "w17",
            SqrtLetter::W18 => "w18",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "w12" => Some(SqrtLetter::W12),
            "w13" => Some(SqrtLetter::W13),
            "w17" => Some(SqrtLetter::W17),
            "w18" => Some(SqrtLetter::W18),
            _ => None,
        }
    }

    pub fn eval_f64(self, y: f64) -> f64 {
        match self {
            SqrtLetter::W12 => 1.0 / (y * (8.0 - y)).sqrt(),
            SqrtLetter::W13 => 1.0 / ((2.0 - y) * (y * (8.0 - y)).sqrt()),
            SqrtLetter::W17 => 1.0 / (y * (8.0 + y)).sqrt(),
            SqrtLetter::W18 => 1.0 / ((2.0 + y) * (y * (8.0 + y)).sqrt()),
        }
    }
}

/// One letter of a generalized iterated integral, taken literally.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PolyLetter {
    /// 1/(y − b); b = 0 gives 1/y.
    Root(Rational),
    /// y^l/Φ_k(y) with l < φ(k); k = 0 (with l = 0) stands for 1/y.
    Cyclotomic { k: u32, l: u32 },
    Sqrt(SqrtLetter),
}

impl PolyLetter {
    pub fn cyclotomic(k: u32, l: u32) -> Result<Self> {
        if k == 0 {
            if l != 0 {
                return Err(Error::Domain(format!("letter {{0,{l}}}: only {{0,0}} = 1/y is defined for k = 0")));
            }
        } else {
            let phi = totient(k as u64)?;
            if l as u64 >= phi {
                return Err(Error::Domain(format!("letter {{{k},{l}}} needs l < φ({k}) = {phi}")));
            }
        }
        Ok(PolyLetter::Cyclotomic { k, l })
    }

    pub(crate) fn kernel(&self) -> Result<Kernel> {
        Ok(match self {
            PolyLetter::Root(b) => Kernel::rational(
                vec![Rational::one()],
                vec![-b.clone(), Rational::one()],
                vec![Complex64::new(rat_to_f64(b), 0.0)],
                vec![b.clone()],
            ),
            PolyLetter::Cyclotomic { k: 0, .. } => Kernel::standard(0),
            PolyLetter::Cyclotomic { k, l } => {
                let phi = cyclotomic_poly(*k as u64)?;
                let den: Vec<Rational> = phi.coeffs().iter().map(|c| Rational::from_integer(c.clone())).collect();
                let mut num = vec![Rational::zero(); *l as usize];
                num.push(Rational::one());
                let k = *k;
                let poles = (1..=k)
                    .filter(|j| gcd(*j as u64, k as u64) == 1)
                    .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / k as f64))
                    .collect();
                let real = match k {
                    1 => vec![Rational::one()],
                    2 => vec![-Rational::one()],
                    _ => vec![],
                };
                Kernel::rational(num, den, poles, real)
            }
            PolyLetter::Sqrt(s) => Kernel::Sqrt(*s),
        })
    }
}

impl fmt::Display for PolyLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyLetter::Root(b) => write!(f, "{b}"),
            PolyLetter::Cyclotomic { k, l } => write!(f, "{{{k},{l}}}"),
            PolyLetter::Sqrt(s) => write!(f, "{}", s.name()),
        }
    }
}

/// A letter as an analytic function: a rational function with known poles,
/// or one of the square-root forms.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Kernel {
    Rational {
        num: Vec<Rational>,
        den: Vec<Rational>,
        poles: Vec<Complex64>,
        real_poles: Vec<Rational>,
    },
    Sqrt(SqrtLetter),
}

impl Kernel {
    pub(crate) fn rational(num: Vec<Rational>, den: Vec<Rational>, poles: Vec<Complex64>, real_poles: Vec<Rational>) -> Self {
        Kernel::Rational { num, den, poles, real_poles }
    }

    /// Standard harmonic letters: 1/y, 1/(1−y), 1/(1+y).
    pub(crate) fn standard(letter: i64) -> Self {
        let one = Rational::one;
        match letter {
            0 => Kernel::rational(vec![one()], vec![Rational::zero(), one()], vec![Complex64::new(0.0, 0.0)], vec![Rational::zero()]),
            1 => Kernel::rational(vec![one()], vec![one(), -one()], vec![Complex64::new(1.0, 0.0)], vec![one()]),
            -1 => Kernel::rational(vec![one()], vec![one(), one()], vec![Complex64::new(-1.0, 0.0)], vec![-one()]),
            _ => unreachable!("standard letters are 0, 1, -1"),
        }
    }

    /// All singular points in the complex plane.
    pub(crate) fn singularities(&self) -> Vec<Complex64> {
        match self {
            Kernel::Rational { poles, .. } => poles.clone(),
            Kernel::Sqrt(s) => {
                let mut v = vec![Complex64::new(0.0, 0.0)];
                match s {
                    SqrtLetter::W12 => v.push(Complex64::new(8.0, 0.0)),
                    SqrtLetter::W13 => v.extend([Complex64::new(8.0, 0.0), Complex64::new(2.0, 0.0)]),
                    SqrtLetter::W17 => v.push(Complex64::new(-8.0, 0.0)),
                    SqrtLetter::W18 => v.extend([Complex64::new(-8.0, 0.0), Complex64::new(-2.0, 0.0)]),
                }
                v
            }
        }
    }

    /// Exact real singular points.
    pub(crate) fn real_singularities(&self) -> Vec<Rational> {
        match self {
            Kernel::Rational { real_poles, .. } => real_poles.clone(),
            Kernel::Sqrt(s) => {
                let mut v = vec![Rational::zero()];
                match s {
                    SqrtLetter::W12 => v.push(rat_int(8)),
                    SqrtLetter::W13 => v.extend([rat_int(8), rat_int(2)]),
                    SqrtLetter::W17 => v.push(rat_int(-8)),
                    SqrtLetter::W18 => v.extend([rat_int(-8), rat_int(-2)]),
                }
                v
            }
        }
    }

    /// Taylor coefficients of f(c + σt) in t at a regular point c.
    pub(crate) fn taylor(&self, c: &BigFloat, sigma: i8, order: usize, prec: Precision) -> Vec<BigFloat> {
        let mut coeffs = match self {
            Kernel::Rational { num, den, .. } => {
                let to_big = |p: &[Rational]| p.iter().map(|r| BigFloat::from_rational(r, prec)).collect::<Vec<_>>();
                let n = taylor_shift(&to_big(num), c);
                let d = taylor_shift(&to_big(den), c);
                series_divide(&n, &d, order)
            }
            Kernel::Sqrt(s) => sqrt_letter_series(*s, c, order, prec),
        };
        if sigma < 0 {
            for c in coeffs.iter_mut().skip(1).step_by(2) {
                *c = -&*c;
            }
        }
        coeffs
    }

    /// Laurent expansion of f(p + σt) at an exact point p: the coefficient
    /// of 1/t (if p is a simple pole) and the regular part.
    pub(crate) fn laurent(&self, p: &Rational, sigma: i8, order: usize, prec: Precision) -> Result<(Option<BigFloat>, Vec<BigFloat>)> {
        match self {
            Kernel::Sqrt(s) => {
                if self.real_singularities().contains(p) {
                    return Err(Error::Unsupported(format!(
                        "letter {} has a branch point at {}; it is only integrated away from it",
                        s.name(),
                        format_rational_decimal(p)
                    )));
                }
                let c = BigFloat::from_rational(p, prec);
                Ok((None, self.taylor(&c, sigma, order, prec)))
            }
            Kernel::Rational { num, den, .. } => {
                let n = rational_taylor_shift(num, p);
                let mut d = rational_taylor_shift(den, p);
                let pole = d.first().is_some_and(|c| c.is_zero());
                if pole {
                    if d.get(1).map_or(true, |c| c.is_zero()) {
                        return Err(Error::Unsupported(format!(
                            "higher-order pole at {}",
                            format_rational_decimal(p)
                        )));
                    }
                    d.remove(0);
                }
                let to_big = |v: &[Rational]| v.iter().map(|r| BigFloat::from_rational(r, prec)).collect::<Vec<_>>();
                let mut g = series_divide(&to_big(&n), &to_big(&d), order + 1);
                if sigma < 0 {
                    for c in g.iter_mut().skip(1).step_by(2) {
                        *c = -&*c;
                    }
                }
                if pole {
                    // f = g(t)/(σ t): residue g₀·σ, regular part g_{n+1}·σ
                    let scale = |x: &BigFloat| if sigma < 0 { -x } else { x.clone() };
                    let residue = scale(&g[0]);
                    let regular = g[1..].iter().map(scale).collect();
                    Ok((Some(residue), regular))
                } else {
                    g.truncate(order);
                    Ok((None, g))
                }
            }
        }
    }
}

/// Coefficients of p(c + t) from those of p(y).
fn taylor_shift(p: &[BigFloat], c: &BigFloat) -> Vec<BigFloat> {
    let mut a = p.to_vec();
    let n = a.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let delta = c * &a[j + 1];
            a[j] += delta;
        }
    }
    a
}

fn rational_taylor_shift(p: &[Rational], c: &Rational) -> Vec<Rational> {
    let mut a = p.to_vec();
    let n = a.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let delta = c * &a[j + 1];
            a[j] += delta;
        }
    }
    a
}

/// Power series of num/den truncated to `order` terms; den[0] ≠ 0.
fn series_divide(num: &[BigFloat], den: &[BigFloat], order: usize) -> Vec<BigFloat> {
    let prec = den[0].precision();
    let mut g: Vec<BigFloat> = Vec::with_capacity(order);
    let inv0 = BigFloat::from_i64(1, prec) / &den[0];
    for n in 0..order {
        let mut acc = num.get(n).cloned().unwrap_or_else(|| BigFloat::zero_with(prec));
        for i in 1..den.len().min(n + 1) {
            acc -= &den[i] * &g[n - i];
        }
        g.push(acc * &inv0);
    }
    g
}

/// Series of q(c+t)^(−1/2)/ℓ(c+t) for the square-root letters.
fn sqrt_letter_series(s: SqrtLetter, c: &BigFloat, order: usize, prec: Precision) -> Vec<BigFloat> {
    let big = |v: i64| BigFloat::from_i64(v, prec);
    // q(y) = y(8 + εy) = 8y + εy²
    let eps = match s {
        SqrtLetter::W12 | SqrtLetter::W13 => -1,
        SqrtLetter::W17 | SqrtLetter::W18 => 1,
    };
    let q0 = c * &(big(8) + &(c * &big(eps)));
    let q1 = big(8) + &(c * &big(2 * eps));
    let q2 = big(eps);
    // G = q^α with q·G' = α q'·G, α = −1/2
    let mut g: Vec<BigFloat> = Vec::with_capacity(order);
    g.push(BigFloat::from_i64(1, prec) / q0.sqrt());
    let half = BigFloat::from_f64(0.5, prec);
    for n in 0..order.saturating_sub(1) {
        let nf = big(n as i64);
        let mut acc = (-&half - &nf) * &q1 * &g[n];
        if n >= 1 {
            acc += (big(-1) - &nf + big(1)) * &q2 * &g[n - 1];
        }
        g.push(acc / (&q0 * &big(n as i64 + 1)));
    }
    match s {
        SqrtLetter::W12 | SqrtLetter::W17 => g,
        SqrtLetter::W13 | SqrtLetter::W18 => {
            // divide by 2 − y or 2 + y
            let l0 = big(2) + &(c * &big(eps));
            let l1 = big(eps);
            series_divide(&g, &[l0, l1], order)
        }
    }
}

/// Distance from `c` to the nearest singularity in `sing`, ignoring those
/// closer than `skip` (the expansion point itself).
pub(crate) fn radius(c: f64, sing: &[Complex64], skip: f64) -> f64 {
    sing.iter()
        .map(|s| (s - Complex64::new(c, 0.0)).norm())
        .filter(|d| *d > skip)
        .fold(f64::INFINITY, f64::min)
}
