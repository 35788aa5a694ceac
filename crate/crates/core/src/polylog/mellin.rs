//! Mellin moments M[f](N) = ∫₀¹ xᴺ f(x) dx and the convolution T(x).

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use super::engine::{integrate, Origin};
use super::letters::Kernel;
use super::{check_weight, working, Verification};
use crate::constants::{polylog_half, zeta};
use crate::error::{Error, Result};
use crate::exact::{binomial, format_rational_decimal, rat_to_f64, BigFloat, Precision, Rational};
use crate::numeric::tanh_sinh;
use crate::sums::eval_harmonic;
use crate::algebra::HarmonicIndex;

/// Integrands with a Mellin moment.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MellinIntegrand {
    /// x^power · H_word(x) / Π(x − pole); empty word means 1.
    Rational { word: Vec<i64>, power: u32, poles: Vec<Rational> },
    /// The convolution T(x) = ∫ₓ¹ dy/(y √(1−y) √(1−x/y)).
    T,
}

impl fmt::Display for MellinIntegrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MellinIntegrand::T => write!(f, "T(x)"),
            MellinIntegrand::Rational { word, power, poles } => {
                let mut num: Vec<String> = Vec::new();
                if *power == 1 {
                    num.push("x".into());
                } else if *power > 1 {
                    num.push(format!("x^{power}"));
                }
                if !word.is_empty() {
                    let letters: Vec<String> = word.iter().map(|a| a.to_string()).collect();
                    num.push(format!("H[{}](x)", letters.join(",")));
                }
                let num = if num.is_empty() { "1".to_string() } else { num.join("*") };
                if poles.is_empty() {
                    return write!(f, "{num}");
                }
                let factors: Vec<String> = poles
                    .iter()
                    .map(|r| {
                        if r.is_zero() {
                            "x".to_string()
                        } else if *r < Rational::zero() {
                            format!("(x+{})", format_rational_decimal(&-r.clone()))
                        } else {
                            format!("(x-{})", format_rational_decimal(r))
                        }
                    })
                    .collect();
                if factors.len() == 1 {
                    write!(f, "{num}/{}", factors[0])
                } else {
                    write!(f, "{num}/({})", factors.join("*"))
                }
            }
        }
    }
}

/// M[f](N) to the requested precision.
pub fn mellin_moment(f: &MellinIntegrand, n: u64, prec: Precision) -> Result<BigFloat> {
    match f {
        MellinIntegrand::T => {
            let wp = Precision::digits(prec.decimal_digits() + 5);
            let v = tanh_sinh(|x, _| x.powi(n as i64) * eval_t_unchecked(x, wp), wp);
            Ok(v.with_precision(prec))
        }
        MellinIntegrand::Rational { word, power, poles } => {
            if let Some(a) = word.iter().find(|a| !matches!(a, -1..=1)) {
                return Err(Error::Domain(format!("harmonic polylogarithm letters are 0, 1, -1 (got {a})")));
            }
            check_weight(word.len())?;
            for (i, r) in poles.iter().enumerate() {
                if poles[..i].contains(r) {
                    return Err(Error::Unsupported("repeated denominator factors".into()));
                }
            }
            let wp = working(prec);
            // numerator y^(N+power), denominator Π(y − r)
            let mut num = vec![Rational::zero(); (n + *power as u64) as usize];
            num.push(Rational::one());
            let mut den = vec![Rational::one()];
            for r in poles {
                let mut next = vec![Rational::zero(); den.len() + 1];
                for (i, c) in den.iter().enumerate() {
                    next[i + 1] += c;
                    next[i] -= c * r;
                }
                den = next;
            }
            let outer = Kernel::rational(
                num,
                den,
                poles.iter().map(|r| Complex64::new(rat_to_f64(r), 0.0)).collect(),
                poles.clone(),
            );
            let mut kernels = vec![outer];
            kernels.extend(word.iter().map(|&a| Kernel::standard(a)));
            let one = Rational::one();
            let r = integrate(&kernels, Origin::Zero, &BigFloat::from_i64(1, wp), Some(&one), wp)
                .map_err(|e| match e {
                    Error::Singular(msg) => Error::Domain(format!("integrand not integrable on (0, 1): {msg}")),
                    other => other,
                })?;
            if r.outer_regularized {
                return Err(Error::Domain("integrand not integrable at x = 0".into()));
            }
            r.values[0]
                .clone()
                .map(|v| v.with_precision(prec))
                .ok_or_else(|| Error::Domain("integrand not integrable at x = 1".into()))
        }
    }
}

/// T(x) for 0 < x < 1.
///
/// With y = x + (1−x) sin²θ both inverse square roots cancel against the
/// Jacobian, T(x) = 2∫₀^{π/2} dθ/√(x cos²θ + sin²θ); then s = tan θ = e^v
/// gives an integrand over the real line that decays exponentially at both
/// ends and is analytic in the strip |Im v| < π/2, where the trapezoidal
/// rule converges geometrically in the step size.
pub fn eval_t(x: &BigFloat, prec: Precision) -> Result<BigFloat> {
    let one = BigFloat::from_i64(1, x.precision());
    if x.is_negative() || x.is_zero() || *x >= one {
        return Err(Error::Domain(format!("T(x) needs 0 < x < 1 (got {})", x.to_fixed(15))));
    }
    let wp = Precision::digits(prec.decimal_digits() + 5);
    Ok(eval_t_unchecked(&x.with_precision(wp), wp).with_precision(prec))
}

fn eval_t_unchecked(x: &BigFloat, prec: Precision) -> BigFloat {
    let digits = prec.decimal_digits() as f64 + 2.0;
    let ln10 = std::f64::consts::LN_10;
    let h = std::f64::consts::PI.powi(2) / (digits * ln10 + 5.0);
    // tails: s/√x below s_min, 1/s above s_max
    let ln_x = x.ln().to_f64();
    let v_min = -digits * ln10 + 0.5 * ln_x - 3.0;
    let v_max = digits * ln10 + 3.0;
    let steps = ((v_max - v_min) / h).ceil() as u64;
    let step = BigFloat::from_f64(h, prec);
    let growth = step.exp();
    let mut s = BigFloat::from_f64(v_min, prec).exp();
    let one = BigFloat::from_i64(1, prec);
    let mut sum = BigFloat::zero_with(prec);
    for _ in 0..=steps {
        let s2 = &s * &s;
        sum += &s / ((&one + &s2) * (x + &s2)).sqrt();
        s = &s * &growth;
    }
    sum * step * BigFloat::from_i64(2, prec)
}

/// 4^{2N}/(C(2N,N)²(N+1/2)²) as an exact rational.
pub fn t_moment_closed_form(n: u64) -> Rational {
    let c = binomial(2 * n, n);
    let num = BigInt::from(4) * BigInt::from(16).pow(n as u32);
    let den = &c * &c * BigInt::from(2 * n + 1).pow(2);
    Rational::new(num, den)
}

/// −Li₄(1/2) − ln⁴2/24 + ln²2 ζ₂/4 − 7 ln2 ζ₃/8 + ζ₂²/8, the N → ∞ limit of S₋₂,₁,₁(N).
pub fn alternating_211_limit(prec: Precision) -> BigFloat {
    let ln2 = BigFloat::ln2(prec);
    let z2 = zeta(2, prec);
    let z3 = zeta(3, prec);
    let int = |v: i64| BigFloat::from_i64(v, prec);
    let mut c = -polylog_half(4, prec);
    c -= ln2.powi(4) / int(24);
    c += ln2.powi(2) * &z2 / int(4);
    c -= int(7) * &ln2 * &z3 / int(8);
    c += &z2 * &z2 / int(8);
    c
}

/// The Mellin representation of S₋₂,₁,₁(N), compared within 1e−8.
pub fn verify_mellin_identity(n: u64, prec: Precision) -> Result<Verification> {
    if n == 0 {
        return Err(Error::Domain("the identity is stated for N ≥ 1".into()));
    }
    let wp = working(prec);
    let idx = HarmonicIndex::new(vec![-2, 1, 1])?;
    let lhs = BigFloat::from_rational(&eval_harmonic(&idx, n), wp);
    let m1 = mellin_moment(&MellinIntegrand::Rational { word: vec![0, 1, 1], power: 0, poles: vec![-Rational::one()] }, n, wp)?;
    let m2 = mellin_moment(&MellinIntegrand::Rational { word: vec![], power: 0, poles: vec![-Rational::one()] }, n, wp)?;
    let sign = if n % 2 == 0 { BigFloat::from_i64(1, wp) } else { BigFloat::from_i64(-1, wp) };
    let z3 = zeta(3, wp);
    let rhs = -(&sign * &m1) + &sign * &z3 * &m2 + alternating_211_limit(wp);
    Ok(Verification { lhs: lhs.with_precision(prec), rhs: rhs.with_precision(prec), tolerance: 1e-8 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn rational_moments() {
        let p = Precision::digits(25);
        let recip = MellinIntegrand::Rational { word: vec![], power: 0, poles: vec![rat(-1, 1)] };
        let v = mellin_moment(&recip, 0, p).unwrap();
        assert!((v - BigFloat::ln2(p)).abs().to_f64() < 1e-23);
        let cube = MellinIntegrand::Rational { word: vec![], power: 3, poles: vec![] };
        let v = mellin_moment(&cube, 1, p).unwrap();
        assert!((v.to_f64() - 0.2).abs() < 1e-23);
        // ∫ xᴺ/x diverges at N = 0
        let inv = MellinIntegrand::Rational { word: vec![], power: 0, poles: vec![rat(0, 1)] };
        assert!(mellin_moment(&inv, 0, p).is_err());
        assert!((mellin_moment(&inv, 2, p).unwrap().to_f64() - 0.5).abs() < 1e-23);
    }

    #[test]
    fn hpl_moment_oracle() {
        // frozen quadrature oracle for M[H₀,₁,₁(x)/(1+x)](2)
        let f = MellinIntegrand::Rational { word: vec![0, 1, 1], power: 0, poles: vec![rat(-1, 1)] };
        let v = mellin_moment(&f, 2, Precision::digits(25)).unwrap();
        assert!((v.to_f64() - 0.074_329_044_864_105_83).abs() < 1e-16);
    }

    #[test]
    fn t_function() {
        let p = Precision::digits(20);
        for xv in [0.1, 0.5, 0.9] {
            let t = eval_t(&BigFloat::from_f64(xv, p), p).unwrap();
            // π/AGM(1, √x)
            let (mut a, mut b) = (1.0f64, xv.sqrt());
            for _ in 0..30 {
                let (an, bn) = ((a + b) / 2.0, (a * b).sqrt());
                a = an;
                b = bn;
            }
            assert!(t.to_f64() > 0.0);
            assert!((t.to_f64() - std::f64::consts::PI / a).abs() < 1e-14);
        }
        assert!(eval_t(&BigFloat::from_f64(1.0, p), p).is_err());
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(t_moment_closed_form(0), rat(4, 1));
        assert_eq!(t_moment_closed_form(1), rat(16, 9));
    }

    #[test]
    fn display() {
        let f = MellinIntegrand::Rational { word: vec![0, 1, 1], power: 0, poles: vec![rat(-1, 1)] };
        assert_eq!(f.to_string(), "H[0,1,1](x)/(x+1)");
        let f = MellinIntegrand::Rational { word: vec![], power: 3, poles: vec![] };
        assert_eq!(f.to_string(), "x^3");
    }
}
