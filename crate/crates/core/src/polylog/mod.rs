//! Numerical evaluation of harmonic, cyclotomic and generalized
//! polylogarithms, Mellin moments and the identities that tie them to sums.
//!
//! Standard harmonic polylogarithms use the letters f₀ = 1/y,
//! f₁ = 1/(1−y), f₋₁ = 1/(1+y), so that H₁(x) = −ln(1−x) and
//! H₀,₁(x) = Li₂(x). Generalized words take their letters literally:
//! a root letter b is 1/(y−b) and a cyclotomic letter {k,l} is y^l/Φ_k(y).

mod engine;
mod letters;
mod mellin;

use std::fmt;

use num_traits::{One, Signed, Zero};

pub use letters::{PolyLetter, SqrtLetter};
pub use mellin::{alternating_211_limit, t_moment_closed_form, eval_t, mellin_moment, verify_mellin_identity, MellinIntegrand};

use crate::algebra::shuffle;
use crate::constants::zeta;
use crate::error::{Error, Result};
use crate::exact::{BigFloat, Precision, Rational};
use engine::{integrate, Origin};
use letters::Kernel;

/// Longest word accepted by the evaluators.
pub const MAX_WORD_WEIGHT: usize = 8;

/// A word of generalized letters, outermost letter first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PolyLogWord {
    letters: Vec<PolyLetter>,
}

impl PolyLogWord {
    pub fn new(letters: Vec<PolyLetter>) -> Self {
        PolyLogWord { letters }
    }

    pub fn letters(&self) -> &[PolyLetter] {
        &self.letters
    }

    pub fn weight(&self) -> usize {
        self.letters.len()
    }

    /// Number of trailing 1/y letters.
    pub fn trailing_zeros(&self) -> usize {
        self.letters
            .iter()
            .rev()
            .take_while(|l| match l {
                PolyLetter::Root(b) => b.is_zero(),
                PolyLetter::Cyclotomic { k, .. } => *k == 0,
                PolyLetter::Sqrt(_) => false,
            })
            .count()
    }

    /// The word over {0, 1, −1} when every letter is such a root; these words
    /// are read with the standard letters.
    pub fn standard_letters(&self) -> Option<Vec<i64>> {
        self.letters
            .iter()
            .map(|l| match l {
                PolyLetter::Root(b) if b.is_integer() && b.abs() <= Rational::one() => b.to_integer().try_into().ok(),
                _ => None,
            })
            .collect()
    }

    fn kernels(&self) -> Result<Vec<Kernel>> {
        self.letters.iter().map(|l| l.kernel()).collect()
    }

    fn has_sqrt(&self) -> bool {
        self.letters.iter().any(|l| matches!(l, PolyLetter::Sqrt(_)))
    }
}

impl fmt::Display for PolyLogWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Result of comparing two numerically evaluated sides of an identity.
#[derive(Debug, Clone)]
pub struct Verification {
    pub lhs: BigFloat,
    pub rhs: BigFloat,
    pub tolerance: f64,
}

impl Verification {
    pub fn delta(&self) -> f64 {
        (&self.lhs - &self.rhs).abs().to_f64()
    }

    pub fn passed(&self) -> bool {
        self.delta() < self.tolerance
    }
}

fn working(prec: Precision) -> Precision {
    Precision::digits(prec.decimal_digits() + 10)
}

fn check_weight(w: usize) -> Result<()> {
    if w > MAX_WORD_WEIGHT {
        return Err(Error::WeightTooLarge { weight: w as u32, max: MAX_WORD_WEIGHT as u32 });
    }
    Ok(())
}

fn check_unit_interval(x: &BigFloat, allow_one: bool) -> Result<()> {
    let v = x.to_f64();
    let one = BigFloat::from_i64(1, x.precision());
    if x.is_negative() || x.is_zero() || *x > one || (!allow_one && *x == one) {
        return Err(Error::Domain(format!("argument {v} outside (0, 1{}", if allow_one { "]" } else { ")" })));
    }
    Ok(())
}

fn divergent_at(x: &BigFloat) -> Error {
    Error::Domain(format!("the iterated integral diverges at x = {}", x.to_fixed(15)))
}

/// H_w(x) for a word over {0, 1, −1} with the standard letters, 0 < x ≤ 1.
pub fn hpl_eval(word: &[i64], x: &BigFloat, prec: Precision) -> Result<BigFloat> {
    if let Some(a) = word.iter().find(|a| !matches!(a, -1..=1)) {
        return Err(Error::Domain(format!("harmonic polylogarithm letters are 0, 1, -1 (got {a})")));
    }
    check_weight(word.len())?;
    check_unit_interval(x, true)?;
    if word.is_empty() {
        return Ok(BigFloat::from_i64(1, prec));
    }
    let wp = working(prec);
    let kernels: Vec<Kernel> = word.iter().map(|&a| Kernel::standard(a)).collect();
    let r = integrate(&kernels, Origin::Zero, &x.with_precision(wp), None, wp)?;
    r.values[0].clone().map(|v| v.with_precision(prec)).ok_or_else(|| divergent_at(x))
}

/// Iterated integral from 0 to x of a generalized word.
pub fn hpl_eval_general(word: &PolyLogWord, x: &BigFloat, prec: Precision) -> Result<BigFloat> {
    check_weight(word.weight())?;
    if word.has_sqrt() {
        return Err(Error::Unsupported("square-root letters are integrated over [x, 1]; use the H* form".into()));
    }
    if x.is_negative() || x.is_zero() {
        return Err(Error::Domain("the argument must be positive".into()));
    }
    if word.weight() == 0 {
        return Ok(BigFloat::from_i64(1, prec));
    }
    let wp = working(prec);
    let r = integrate(&word.kernels()?, Origin::Zero, &x.with_precision(wp), None, wp)?;
    r.values[0].clone().map(|v| v.with_precision(prec)).ok_or_else(|| divergent_at(x))
}

/// H*_w(x): the iterated integral over [x, 1], H*_{a,w}(x) = ∫ₓ¹ dy f_a(y) H*_w(y).
pub fn hstar_eval(word: &PolyLogWord, x: &BigFloat, prec: Precision) -> Result<BigFloat> {
    check_weight(word.weight())?;
    check_unit_interval(x, false)?;
    if word.weight() == 0 {
        return Ok(BigFloat::from_i64(1, prec));
    }
    let wp = working(prec);
    let r = integrate(&word.kernels()?, Origin::One, &x.with_precision(wp), None, wp)?;
    if r.any_regularized {
        return Err(Error::Domain("the integral diverges at y = 1".into()));
    }
    r.values[0].clone().map(|v| v.with_precision(prec)).ok_or_else(|| divergent_at(x))
}

/// H_w(x), or H*_w(x) when `star` is set. Words made only of the roots 0, 1, −1
/// use the standard letters; any other letter makes every letter literal.
pub fn eval_polylog(word: &PolyLogWord, x: &BigFloat, star: bool, prec: Precision) -> Result<BigFloat> {
    match (word.standard_letters(), star) {
        (Some(w), false) => hpl_eval(&w, x, prec),
        (Some(w), true) => {
            let v = hstar_eval(word, x, prec)?;
            // f₁ = 1/(1−y) is minus the literal root letter 1/(y−1)
            Ok(if w.iter().filter(|&&a| a == 1).count() % 2 == 1 { -v } else { v })
        }
        (None, false) => hpl_eval_general(word, x, prec),
        (None, true) => hstar_eval(word, x, prec),
    }
}

/// Checks H_u(x)·H_v(x) = Σ (u ⧢ v)(x) within 1e−10.
pub fn verify_shuffle(u: &[i64], v: &[i64], x: &BigFloat, prec: Precision) -> Result<Verification> {
    check_weight(u.len() + v.len())?;
    let lhs = hpl_eval(u, x, prec)? * hpl_eval(v, x, prec)?;
    let mut rhs = BigFloat::zero_with(prec);
    for (w, c) in shuffle(u, v).iter() {
        let coeff = BigFloat::from_rational(c, prec);
        rhs += coeff * hpl_eval(w, x, prec)?;
    }
    Ok(Verification { lhs, rhs, tolerance: 1e-10 })
}

/// Both sides of the x → (1−x)/(1+x) identity for H₋₁,₀,₁, compared within 1e−10.
pub fn verify_arg_transform(x: &BigFloat, prec: Precision) -> Result<Verification> {
    check_unit_interval(x, false)?;
    let wp = working(prec);
    let x = x.with_precision(wp);
    let one = BigFloat::from_i64(1, wp);
    let y = (&one - &x) / (&one + &x);
    let lhs = hpl_eval(&[-1, 0, 1], &y, wp)?;
    let h = |w: &[i64]| hpl_eval(w, &x, wp);
    let ln2 = BigFloat::ln2(wp);
    let z2 = zeta(2, wp);
    let z3 = zeta(3, wp);
    let h_m1 = h(&[-1])?;
    let h_0 = h(&[0])?;
    let h_m1_1 = h(&[-1, 1])?;
    let int = |v: i64| BigFloat::from_i64(v, wp);
    let mut rhs = -(&h_m1_1 * &(&h_0 + &ln2));
    rhs += &h_m1 * &(&h_m1_1 + &h(&[0, -1])? + h(&[0, 1])? - &z2);
    rhs -= int(2) * h(&[-1, -1, 1])?;
    rhs -= h(&[0, -1, -1])?;
    rhs -= h(&[0, 1, -1])?;
    rhs -= &h_m1 * &h_m1 * (&h_0 + &ln2) / int(2);
    rhs += h_m1.powi(3) / int(6);
    rhs += &ln2 * &z2;
    rhs -= int(5) * &z3 / int(8);
    Ok(Verification { lhs: lhs.with_precision(prec), rhs: rhs.with_precision(prec), tolerance: 1e-10 })
}
