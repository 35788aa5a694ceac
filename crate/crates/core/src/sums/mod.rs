//! Exact evaluation of nested sums at integer upper limit, the depth-one
//! duplication check and numerical limits N → ∞.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{CyclotomicIndex, GeneralIndex, HarmonicIndex, SumIndex};
use crate::error::{Error, Result};
use crate::exact::{binomial, rat_int, rat_pow, Rational};

mod limit;

pub use limit::{limit_to_infinity, limit_to_infinity_general, Divergence, LimitOutcome, LimitReport};

// Tables are only cached up to this length; longer evaluations are computed
// directly.
const CACHE_LIMIT: u64 = 4096;

fn harmonic_cache() -> &'static Mutex<HashMap<Vec<i64>, Vec<Rational>>> {
    static CACHE: OnceLock<Mutex<HashMap<Vec<i64>, Vec<Rational>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn signed_unit_term(a: i64, k: u64) -> Rational {
    let denom = num_traits::pow(BigInt::from(k), a.unsigned_abs() as usize);
    let sign = if a < 0 && k % 2 == 1 { -1 } else { 1 };
    Rational::new(BigInt::from(sign), denom)
}

/// Values S_idx(0), ..., S_idx(n), built innermost-first so that every
/// level reuses the prefix sums of the level below.
pub fn harmonic_table(idx: &HarmonicIndex, n: u64) -> Vec<Rational> {
    let key = idx.entries().to_vec();
    if n <= CACHE_LIMIT {
        if let Some(t) = harmonic_cache().lock().unwrap().get(&key) {
            if t.len() as u64 > n {
                return t[..=n as usize].to_vec();
            }
        }
    }
    let len = n as usize + 1;
    let mut inner = vec![Rational::one(); len];
    for &a in idx.entries().iter().rev() {
        let mut outer = Vec::with_capacity(len);
        outer.push(Rational::zero());
        for k in 1..len {
            let term = signed_unit_term(a, k as u64) * &inner[k];
            let next = &outer[k - 1] + term;
            outer.push(next);
        }
        inner = outer;
    }
    if n <= CACHE_LIMIT {
        harmonic_cache().lock().unwrap().insert(key, inner.clone());
    }
    inner
}

/// S_idx(N) by the defining recursion.
pub fn eval_harmonic(idx: &HarmonicIndex, n: u64) -> Rational {
    if n == 0 {
        return Rational::zero();
    }
    harmonic_table(idx, n).pop().expect("nonempty table")
}

/// Values of a generalized sum S_{e_1,...}(x_1,...; k) for k = 0..=n.
pub fn general_table(idx: &GeneralIndex, n: u64) -> Vec<Rational> {
    let len = n as usize + 1;
    let mut inner = vec![Rational::one(); len];
    for l in idx.letters().iter().rev() {
        let mut outer = Vec::with_capacity(len);
        outer.push(Rational::zero());
        let mut xpow = Rational::one();
        for k in 1..len {
            xpow *= &l.weight;
            let denom = num_traits::pow(BigInt::from(k), l.exponent as usize);
            let term = &xpow * &inner[k] / Rational::from_integer(denom);
            let next = &outer[k - 1] + term;
            outer.push(next);
        }
        inner = outer;
    }
    inner
}

/// Generalized (S-)sum at integer N.
pub fn eval_ssum(idx: &GeneralIndex, n: u64) -> Rational {
    if n == 0 {
        return Rational::zero();
    }
    if let Some(h) = idx.as_harmonic() {
        return eval_harmonic(&h, n);
    }
    general_table(idx, n).pop().expect("nonempty table")
}

/// Nested cyclotomic sum with the outer summation starting at k = 1:
/// Σ_{k=1}^N s^k/(a k + b)^c · S_rest(k).
pub fn eval_cyclotomic(idx: &CyclotomicIndex, n: u64) -> Rational {
    let len = n as usize + 1;
    let mut inner = vec![Rational::one(); len];
    for l in idx.letters().iter().rev() {
        let mut outer = Vec::with_capacity(len);
        outer.push(Rational::zero());
        let mut spow = Rational::one();
        for k in 1..len {
            spow *= &l.weight;
            let base = BigInt::from(l.a) * BigInt::from(k) + BigInt::from(l.b);
            let denom = num_traits::pow(base, l.c as usize);
            let term = &spow * &inner[k] / Rational::from_integer(denom);
            let next = &outer[k - 1] + term;
            outer.push(next);
        }
        inner = outer;
    }
    inner.pop().expect("nonempty table")
}

/// Single cyclotomic sum with the summation starting at k = 0:
/// Σ_{k=0}^N sign(n)^k/(l k + m)^|n|.
pub fn eval_cyclotomic_single(l: u32, m: u32, n: i64, upper: u64) -> Result<Rational> {
    if l == 0 || n == 0 {
        return Err(Error::Domain("single cyclotomic sum needs l ≥ 1 and n ≠ 0".into()));
    }
    if l <= m {
        return Err(Error::Domain(format!("single cyclotomic sum ({l},{m},{n}) violates l > m")));
    }
    if m == 0 {
        return Err(Error::Domain("single cyclotomic sum starting at k = 0 needs m ≥ 1".into()));
    }
    let mut acc = Rational::zero();
    for k in 0..=upper {
        let base = BigInt::from(l) * BigInt::from(k) + BigInt::from(m);
        let denom = num_traits::pow(base, n.unsigned_abs() as usize);
        let sign = if n < 0 && k % 2 == 1 { -1 } else { 1 };
        acc += Rational::new(BigInt::from(sign), denom);
    }
    Ok(acc)
}

/// Exact value of any family-tagged sum at integer N.
pub fn eval_sum(idx: &SumIndex, n: u64) -> Rational {
    match idx {
        SumIndex::Harmonic(h) => eval_harmonic(h, n),
        SumIndex::General(g) => eval_ssum(g, n),
        SumIndex::Cyclotomic(c) => eval_cyclotomic(c, n),
    }
}

/// Placement of a central binomial coefficient C(2i, i) at one nesting level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinomialPlacement {
    None,
    Numerator,
    Denominator,
}

/// One nesting level of a binomially weighted sum:
/// prefactor · [C(2i,i)]^{±1} · base^i / (alpha·i + beta)^power.
#[derive(Clone, Debug, PartialEq)]
pub struct BinomialLevel {
    pub binomial: BinomialPlacement,
    pub base: Rational,
    pub prefactor: Rational,
    pub alpha: i64,
    pub beta: i64,
    pub power: u32,
}

impl BinomialLevel {
    pub fn new(binomial: BinomialPlacement, base: Rational) -> Self {
        BinomialLevel { binomial, base, prefactor: Rational::one(), alpha: 1, beta: 0, power: 0 }
    }

    pub fn with_denominator(mut self, alpha: i64, beta: i64, power: u32) -> Self {
        self.alpha = alpha;
        self.beta = beta;
        self.power = power;
        self
    }

    pub fn with_prefactor(mut self, prefactor: Rational) -> Self {
        self.prefactor = prefactor;
        self
    }

    fn term(&self, i: u64, base_pow: &Rational) -> Rational {
        let mut t = &self.prefactor * base_pow;
        let c = Rational::from_integer(binomial(2 * i, i));
        match self.binomial {
            BinomialPlacement::None => {}
            BinomialPlacement::Numerator => t *= c,
            BinomialPlacement::Denominator => t /= c,
        }
        if self.power > 0 {
            let lin = BigInt::from(self.alpha) * BigInt::from(i) + BigInt::from(self.beta);
            t /= Rational::from_integer(num_traits::pow(lin, self.power as usize));
        }
        t
    }
}

/// Nested binomial sum: levels from outermost to innermost, with an optional
/// generalized S-sum evaluated at the innermost summation variable.
#[derive(Clone, Debug, PartialEq)]
pub struct BinomialSumSpec {
    levels: Vec<BinomialLevel>,
    inner: Option<GeneralIndex>,
}

impl BinomialSumSpec {
    pub fn new(levels: Vec<BinomialLevel>, inner: Option<GeneralIndex>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Domain("binomial sum needs at least one level".into()));
        }
        for l in &levels {
            if l.base.is_zero() {
                return Err(Error::Domain("binomial sum base must be nonzero".into()));
            }
            if l.power > 0 {
                let vanishes = if l.alpha == 0 {
                    l.beta == 0
                } else {
                    l.beta % l.alpha == 0 && -l.beta / l.alpha >= 1
                };
                if vanishes {
                    return Err(Error::Domain(format!(
                        "denominator ({}·i + {}) vanishes for some i ≥ 1",
                        l.alpha, l.beta
                    )));
                }
            }
        }
        Ok(BinomialSumSpec { levels, inner })
    }

    pub fn levels(&self) -> &[BinomialLevel] {
        &self.levels
    }

    /// Σ_i C(2i,i)(−2)^i Σ_{j≤i} 1/(j C(2j,j)) S_{1,2}(1/2,−1; j)
    pub fn example_two_level() -> Self {
        use crate::exact::rat;
        let outer = BinomialLevel::new(BinomialPlacement::Numerator, rat_int(-2));
        let inner_level =
            BinomialLevel::new(BinomialPlacement::Denominator, rat_int(1)).with_denominator(1, 0, 1);
        let s12 = GeneralIndex::from_parts(&[1, 2], &[rat(1, 2), rat_int(-1)]).expect("valid index");
        BinomialSumSpec::new(vec![outer, inner_level], Some(s12)).expect("valid spec")
    }
}

/// Exact value of a nested binomial sum at integer N.
pub fn eval_binomial_nested(spec: &BinomialSumSpec, n: u64) -> Rational {
    let len = n as usize + 1;
    let mut inner = match &spec.inner {
        Some(g) => general_table(g, n),
        None => vec![Rational::one(); len],
    };
    for level in spec.levels.iter().rev() {
        let mut outer = Vec::with_capacity(len);
        outer.push(Rational::zero());
        let mut bpow = Rational::one();
        for i in 1..len {
            bpow *= &level.base;
            let term = level.term(i as u64, &bpow) * &inner[i];
            let next = &outer[i - 1] + term;
            outer.push(next);
        }
        inner = outer;
    }
    inner.pop().expect("nonempty table")
}

/// Both sides of the depth-one duplication relation
/// S_a(2N) + S_{−a}(2N) = 2^{1−a} S_a(N) for a = |a| ≥ 1.
pub fn duplication_sides(a: i64, n: u64) -> Result<(Rational, Rational)> {
    if a == 0 {
        return Err(Error::Domain("duplication needs a nonzero index".into()));
    }
    let m = a.abs();
    let pos = HarmonicIndex::new(vec![m])?;
    let neg = HarmonicIndex::new(vec![-m])?;
    let lhs = eval_harmonic(&pos, 2 * n) + eval_harmonic(&neg, 2 * n);
    let scale = rat_pow(&Rational::new(BigInt::one(), BigInt::from(2)), (m - 1) as u64);
    Ok((lhs, scale * eval_harmonic(&pos, n)))
}

/// Exact check of the depth-one duplication relation.
pub fn duplication_check(a: i64, n: u64) -> bool {
    duplication_check_perturbed(a, n, &Rational::zero())
}

/// Duplication check with `delta` added to the right-hand side.
pub fn duplication_check_perturbed(a: i64, n: u64, delta: &Rational) -> bool {
    match duplication_sides(a, n) {
        Ok((lhs, rhs)) => lhs == rhs + delta,
        Err(_) => false,
    }
}

/// Flat nested-loop evaluation, independent of the table recursion.
pub fn eval_harmonic_flat(idx: &HarmonicIndex, n: u64) -> Rational {
    fn rec(entries: &[i64], upper: u64) -> Rational {
        let Some((&a, rest)) = entries.split_first() else {
            return Rational::one();
        };
        let mut acc = Rational::zero();
        for k in 1..=upper {
            acc += signed_unit_term(a, k) * rec(rest, k);
        }
        acc
    }
    rec(idx.entries(), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn h(v: &[i64]) -> HarmonicIndex {
        HarmonicIndex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(eval_harmonic(&h(&[1]), 3), rat(11, 6));
        assert_eq!(eval_harmonic(&h(&[-2, 1, 1]), 2), rat(-9, 16));
        assert_eq!(eval_harmonic(&h(&[1, 1]), 2), rat(7, 4));
        assert_eq!(eval_harmonic(&h(&[5]), 0), Rational::zero());
        // cache prefix reuse returns consistent values
        let t = harmonic_table(&h(&[2, 1]), 40);
        assert_eq!(eval_harmonic(&h(&[2, 1]), 17), t[17]);
    }

    #[test]
    fn ssum_examples() {
        let g = GeneralIndex::from_parts(&[1, 2], &[rat(1, 2), rat_int(-1)]).unwrap();
        assert_eq!(eval_ssum(&g, 1), rat(-1, 2));
        let g = GeneralIndex::from_parts(&[1], &[rat_int(2)]).unwrap();
        assert_eq!(eval_ssum(&g, 3), rat(20, 3));
        let g = GeneralIndex::from_parts(&[2], &[rat_int(1)]).unwrap();
        for n in 1..=50 {
            assert_eq!(eval_ssum(&g, n), eval_harmonic(&h(&[2]), n));
            assert_eq!(general_table(&g, n)[n as usize], eval_harmonic(&h(&[2]), n));
        }
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(eval_cyclotomic_single(2, 1, 1, 1).unwrap(), rat(4, 3));
        assert_eq!(eval_cyclotomic_single(2, 1, 1, 0).unwrap(), rat_int(1));
        assert!(eval_cyclotomic_single(2, 2, 1, 3).is_err());
        assert!(eval_cyclotomic_single(1, 0, 1, 3).is_err());
        use crate::algebra::CyclotomicLetter;
        let c = CyclotomicIndex::new(vec![CyclotomicLetter::new(1, 0, 2, rat_int(1)).unwrap()]).unwrap();
        for n in 1..=20 {
            assert_eq!(eval_cyclotomic(&c, n), eval_harmonic(&h(&[2]), n));
        }
        // (2,1,-1) in the nested form: Σ (−1)^k/(2k+1)
        let c = CyclotomicIndex::new(vec![CyclotomicLetter::new(2, 1, 1, rat_int(-1)).unwrap()]).unwrap();
        assert_eq!(eval_cyclotomic(&c, 2), rat(-1, 3) + rat(1, 5));
    }

    fn binomial_oracle(n: u64) -> Rational {
        // direct double loop, no shared tables
        let mut total = Rational::zero();
        for i in 1..=n {
            let mut inner = Rational::zero();
            for j in 1..=i {
                let mut s12 = Rational::zero();
                for k in 1..=j {
                    let mut s2 = Rational::zero();
                    for l in 1..=k {
                        let sign = if l % 2 == 1 { -1 } else { 1 };
                        s2 += rat(sign, (l * l) as i64);
                    }
                    s12 += rat_pow(&rat(1, 2), k) / rat_int(k as i64) * s2;
                }
                inner += s12 / (rat_int(j as i64) * Rational::from_integer(binomial(2 * j, j)));
            }
            total += Rational::from_integer(binomial(2 * i, i)) * rat_pow(&rat_int(-2), i) * inner;
        }
        total
    }

    #[test]
    fn binomial_nested_examples() {
        let spec = BinomialSumSpec::example_two_level();
        assert_eq!(eval_binomial_nested(&spec, 1), rat_int(1));
        assert_eq!(eval_binomial_nested(&spec, 0), Rational::zero());
        for n in 1..=6 {
            assert_eq!(eval_binomial_nested(&spec, n), binomial_oracle(n), "N = {n}");
        }
        let bad = BinomialLevel::new(BinomialPlacement::None, rat_int(1)).with_denominator(1, -3, 1);
        assert!(BinomialSumSpec::new(vec![bad], None).is_err());
    }

    #[test]
    fn duplication() {
        let (l, r) = duplication_sides(2, 1).unwrap();
        assert_eq!(l, rat(1, 2));
        assert_eq!(r, rat(1, 2));
        assert!(duplication_check(2, 1));
        assert!(duplication_check(3, 2));
        assert!(duplication_check(-4, 7));
        assert!((1..=10).all(|n| duplication_check(1, n)));
        assert!(!duplication_check_perturbed(2, 1, &rat(1, 1000)));
    }

    #[test]
    fn flat_matches_recursion() {
        for idx in [&[2, -1, 1][..], &[-3, 2], &[1, 1, -1], &[-1, -1, -1]] {
            for n in 1..=8 {
                assert_eq!(eval_harmonic_flat(&h(idx), n), eval_harmonic(&h(idx), n));
            }
        }
    }
}
