//! Named special constants and their numerical values.

use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{bernoulli_numbers, format_rational_decimal, BigFloat, Precision, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConstantSymbol {
    /// ζ_k, k ≥ 2.
    Zeta(u32),
    Ln2,
    Pi,
    /// Li_k(1/2).
    PolyLogHalf(u32),
    /// The divergent harmonic series Σ 1/k; symbolic only.
    Sigma0,
    /// Catalan's constant, Ti₂(1).
    Catalan,
    /// Ti_l(1) = Σ_{k≥0} (−1)^k/(2k+1)^l.
    Ti(u32),
    EulerGamma,
    /// ψ^{(order)}(arg) for a positive rational argument.
    Psi { order: u32, arg: Rational },
}

impl fmt::Display for ConstantSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstantSymbol::Zeta(k) => write!(f, "ζ{k}"),
            ConstantSymbol::Ln2 => write!(f, "ln2"),
            ConstantSymbol::Pi => write!(f, "π"),
            ConstantSymbol::PolyLogHalf(k) => write!(f, "Li{k}(1/2)"),
            ConstantSymbol::Sigma0 => write!(f, "σ₀"),
            ConstantSymbol::Catalan => write!(f, "Catalan"),
            ConstantSymbol::Ti(l) => write!(f, "Ti{l}(1)"),
            ConstantSymbol::EulerGamma => write!(f, "γ"),
            ConstantSymbol::Psi { order: 0, arg } => write!(f, "ψ({})", format_rational_decimal(arg)),
            ConstantSymbol::Psi { order, arg } => write!(f, "ψ^({order})({})", format_rational_decimal(arg)),
        }
    }
}

impl ConstantSymbol {
    pub fn eval(&self, prec: Precision) -> Result<BigFloat> {
        let work = Precision::digits(prec.decimal_digits() + 10);
        let v = match self {
            ConstantSymbol::Zeta(k) => {
                if *k < 2 {
                    return Err(Error::Domain(format!("ζ_{k} is not defined (k ≥ 2 required)")));
                }
                zeta(*k, work)
            }
            ConstantSymbol::Ln2 => BigFloat::ln2(work),
            ConstantSymbol::Pi => BigFloat::pi(work),
            ConstantSymbol::PolyLogHalf(k) => {
                if *k == 0 {
                    return Err(Error::Domain("Li_0(1/2) requested; k ≥ 1 required".into()));
                }
                polylog_half(*k, work)
            }
            ConstantSymbol::Sigma0 => {
                return Err(Error::Domain("σ₀ is the divergent harmonic series and has no numerical value".into()))
            }
            ConstantSymbol::Catalan => ti(2, work)?,
            ConstantSymbol::Ti(l) => ti(*l, work)?,
            ConstantSymbol::EulerGamma => -digamma(&BigFloat::from_i64(1, work), work),
            ConstantSymbol::Psi { order, arg } => {
                if *arg <= Rational::from_integer(0.into()) {
                    return Err(Error::Domain("ψ is evaluated at positive arguments only".into()));
                }
                let a = BigFloat::from_rational(arg, work);
                if *order == 0 {
                    digamma(&a, work)
                } else {
                    // ψ^{(m)}(a) = (−1)^{m+1} m! ζ(m+1, a)
                    let mut fact = BigFloat::from_i64(1, work);
                    for i in 2..=*order as i64 {
                        fact = fact * BigFloat::from_i64(i, work);
                    }
                    let z = hurwitz_zeta(order + 1, &a, work);
                    if order % 2 == 1 {
                        fact * z
                    } else {
                        -(fact * z)
                    }
                }
            }
        };
        Ok(v.with_precision(prec))
    }
}

/// ζ(s) for integer s ≥ 2.
pub fn zeta(s: u32, prec: Precision) -> BigFloat {
    hurwitz_zeta(s, &BigFloat::from_i64(1, prec), prec)
}

/// Dirichlet eta η(s) = Σ (−1)^{k+1}/k^s; η(1) = ln 2.
pub fn eta(s: u32, prec: Precision) -> BigFloat {
    if s == 1 {
        return BigFloat::ln2(prec);
    }
    let factor = BigFloat::from_i64(1, prec) - BigFloat::from_i64(2, prec).powi(1 - s as i64);
    factor * zeta(s, prec)
}

fn em_sizes(prec: Precision) -> (u64, usize) {
    let d = prec.decimal_digits() as u64;
    (d + 10, d as usize / 2 + 10)
}

/// Hurwitz ζ(s, a) = Σ_{n≥0} (n + a)^{−s} for s ≥ 2, a > 0, by Euler–Maclaurin.
pub fn hurwitz_zeta(s: u32, a: &BigFloat, prec: Precision) -> BigFloat {
    let (n_direct, terms) = em_sizes(prec);
    let one = BigFloat::from_i64(1, prec);
    let mut sum = BigFloat::zero_with(prec);
    for n in 0..n_direct {
        let base = a + &BigFloat::from_u64(n, prec);
        sum += &one / base.powi(s as i64);
    }
    let z = a + &BigFloat::from_u64(n_direct, prec);
    let s_big = BigFloat::from_u64(s as u64, prec);
    let zs = z.powi(s as i64);
    sum += &z / (&zs * (&s_big - &one));
    sum += &one / (&zs * BigFloat::from_i64(2, prec));
    let bern = bernoulli_numbers(2 * terms + 2);
    // term_j = B_{2j}/(2j)! · s(s+1)…(s+2j−2) · z^{−s−2j+1}
    let z2 = &z * &z;
    let mut rising = s_big.clone(); // s (s+1) … (s + 2j − 2)
    let mut fact = BigFloat::from_i64(2, prec); // (2j)!
    let mut zpow = &zs * &z; // z^{s+2j−1}
    for j in 1..=terms {
        let b = BigFloat::from_rational(&bern[2 * j], prec);
        sum += &b * &rising / (&fact * &zpow);
        let jj = j as i64;
        rising = rising * (&s_big + &BigFloat::from_i64(2 * jj - 1, prec)) * (&s_big + &BigFloat::from_i64(2 * jj, prec));
        fact = fact * BigFloat::from_i64((2 * jj + 1) * (2 * jj + 2), prec);
        zpow = &zpow * &z2;
    }
    sum
}

/// ψ(a) for a > 0.
pub fn digamma(a: &BigFloat, prec: Precision) -> BigFloat {
    let (n_direct, terms) = em_sizes(prec);
    let one = BigFloat::from_i64(1, prec);
    let mut sum = BigFloat::zero_with(prec);
    for n in 0..n_direct {
        sum -= &one / (a + &BigFloat::from_u64(n, prec));
    }
    let z = a + &BigFloat::from_u64(n_direct, prec);
    sum += z.ln() - &one / (&z * BigFloat::from_i64(2, prec));
    let bern = bernoulli_numbers(2 * terms + 2);
    let z2 = &z * &z;
    let mut zpow = z2.clone();
    for j in 1..=terms {
        let b = BigFloat::from_rational(&bern[2 * j], prec);
        sum -= b / (BigFloat::from_u64(2 * j as u64, prec) * &zpow);
        zpow = &zpow * &z2;
    }
    sum
}

/// Li_k(1/2) = Σ 2^{−n}/n^k.
pub fn polylog_half(k: u32, prec: Precision) -> BigFloat {
    let terms = (prec.decimal_digits() as f64 * std::f64::consts::LOG2_10) as u64 + 20;
    let mut sum = BigFloat::zero_with(prec);
    let half = BigFloat::from_f64(0.5, prec);
    let mut pw = BigFloat::from_i64(1, prec);
    for n in 1..=terms {
        pw = &pw * &half;
        sum += &pw / BigFloat::from_u64(n, prec).powi(k as i64);
    }
    sum
}

/// Ti_l(1) = 4^{−l}[ζ(l, 1/4) − ζ(l, 3/4)] for l ≥ 2, π/4 for l = 1.
pub fn ti(l: u32, prec: Precision) -> Result<BigFloat> {
    match l {
        0 => Err(Error::Domain("Ti_0(1) does not converge".into())),
        1 => Ok(BigFloat::pi(prec) / BigFloat::from_i64(4, prec)),
        _ => {
            let q = BigFloat::from_f64(0.25, prec);
            let tq = BigFloat::from_f64(0.75, prec);
            let diff = hurwitz_zeta(l, &q, prec) - hurwitz_zeta(l, &tq, prec);
            Ok(diff / BigFloat::from_i64(4, prec).powi(l as i64))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn val(c: ConstantSymbol) -> BigFloat {
        c.eval(Precision::digits(40)).unwrap()
    }

    #[test]
    fn zeta_values_against_series() {
        let p = Precision::digits(40);
        let pi2 = BigFloat::pi(p).powi(2);
        let z2 = &pi2 / BigFloat::from_i64(6, p);
        assert!((val(ConstantSymbol::Zeta(2)) - z2).abs().to_f64() < 1e-38);
        let z4 = (&pi2 * &pi2) / BigFloat::from_i64(90, p);
        assert!((val(ConstantSymbol::Zeta(4)) - z4).abs().to_f64() < 1e-38);
        assert_eq!(val(ConstantSymbol::Zeta(3)).to_fixed(30), "1.20205690315959428539973816151");
    }

    #[test]
    fn other_constants() {
        assert_eq!(val(ConstantSymbol::EulerGamma).to_fixed(30), "0.577215664901532860606512090082");
        assert_eq!(val(ConstantSymbol::Catalan).to_fixed(30), "0.915965594177219015054603514932");
        // Li₁(1/2) = ln 2, Li₂(1/2) = ζ₂/2 − ln²2/2
        let p = Precision::digits(40);
        let ln2 = BigFloat::ln2(p);
        assert!((val(ConstantSymbol::PolyLogHalf(1)) - &ln2).abs().to_f64() < 1e-38);
        let li2 = val(ConstantSymbol::Zeta(2)) / BigFloat::from_i64(2, p) - &ln2 * &ln2 / BigFloat::from_i64(2, p);
        assert!((val(ConstantSymbol::PolyLogHalf(2)) - li2).abs().to_f64() < 1e-38);
        // ψ(1/2) = −γ − 2 ln 2, ψ'(1) = ζ₂
        let psi = val(ConstantSymbol::Psi { order: 0, arg: rat(1, 2) });
        let want = -val(ConstantSymbol::EulerGamma) - &ln2 * BigFloat::from_i64(2, p);
        assert!((psi - want).abs().to_f64() < 1e-38);
        let trigamma = val(ConstantSymbol::Psi { order: 1, arg: rat(1, 1) });
        assert!((trigamma - val(ConstantSymbol::Zeta(2))).abs().to_f64() < 1e-38);
        assert!(ConstantSymbol::Sigma0.eval(Precision::default()).is_err());
        assert!(ConstantSymbol::Zeta(1).eval(Precision::default()).is_err());
    }

    #[test]
    fn eta_values() {
        let p = Precision::digits(30);
        assert!((eta(2, p) - zeta(2, p) / BigFloat::from_i64(2, p)).abs().to_f64() < 1e-28);
        assert_eq!(eta(1, p).to_fixed(20), BigFloat::ln2(p).to_fixed(20));
    }
}
