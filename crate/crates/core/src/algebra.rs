//! Index words, shuffle and quasi-shuffle (stuffle) products, Lyndon words,
//! the counting formulas for independent sums and reduction of harmonic sums
//! to a polynomial in Lyndon-indexed sums.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{divisors, mobius, Rational};

/// Index of a harmonic sum S_{a_1,...,a_k}: nonzero signed integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HarmonicIndex(Vec<i64>);

impl HarmonicIndex {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Domain("harmonic index must be nonempty".into()));
        }
        if entries.contains(&0) {
            return Err(Error::Domain("harmonic index entries must be nonzero".into()));
        }
        Ok(HarmonicIndex(entries))
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(|a| a.unsigned_abs() as u32).sum()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    /// A harmonic sum has a finite limit iff its first entry is not 1.
    pub fn is_convergent(&self) -> bool {
        self.0[0] != 1
    }
}

impl fmt::Display for HarmonicIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S[{}]", join(&self.0))
    }
}

/// One letter of a generalized (S-)sum: `x^k / k^exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneralLetter {
    pub exponent: u32,
    pub weight: Rational,
}

impl GeneralLetter {
    pub fn new(exponent: u32, weight: Rational) -> Self {
        GeneralLetter { exponent, weight }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneralIndex(Vec<GeneralLetter>);

impl GeneralIndex {
    pub fn new(letters: Vec<GeneralLetter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::Domain("generalized index must be nonempty".into()));
        }
        if letters.iter().any(|l| l.exponent == 0) {
            return Err(Error::Domain("generalized sum exponents must be ≥ 1".into()));
        }
        if letters.iter().any(|l| l.weight.is_zero()) {
            return Err(Error::Domain("generalized sum weights must be nonzero".into()));
        }
        Ok(GeneralIndex(letters))
    }

    /// Convenience constructor from parallel exponent and weight lists.
    pub fn from_parts(exponents: &[u32], weights: &[Rational]) -> Result<Self> {
        if exponents.len() != weights.len() {
            return Err(Error::Domain(format!(
                "{} exponents but {} weights",
                exponents.len(),
                weights.len()
            )));
        }
        Self::new(
            exponents
                .iter()
                .zip(weights)
                .map(|(&e, w)| GeneralLetter::new(e, w.clone()))
                .collect(),
        )
    }

    pub fn letters(&self) -> &[GeneralLetter] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(|l| l.exponent).sum()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    /// The equivalent harmonic index when every weight is ±1.
    pub fn as_harmonic(&self) -> Option<HarmonicIndex> {
        let mut out = Vec::with_capacity(self.0.len());
        for l in &self.0 {
            if l.weight.is_one() {
                out.push(l.exponent as i64);
            } else if (-&l.weight).is_one() {
                out.push(-(l.exponent as i64));
            } else {
                return None;
            }
        }
        Some(HarmonicIndex(out))
    }
}

impl From<&HarmonicIndex> for GeneralIndex {
    fn from(h: &HarmonicIndex) -> Self {
        GeneralIndex(
            h.0.iter()
                .map(|&a| {
                    let w = if a > 0 { Rational::one() } else { -Rational::one() };
                    GeneralLetter::new(a.unsigned_abs() as u32, w)
                })
                .collect(),
        )
    }
}

impl fmt::Display for GeneralIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.0.iter().map(|l| l.exponent.to_string()).collect();
        let w: Vec<String> = self.0.iter().map(|l| l.weight.to_string()).collect();
        write!(f, "S[{}]({{{}}})", e.join(","), w.join(","))
    }
}

/// One level of a cyclotomic sum: `s^k / (a k + b)^c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclotomicLetter {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub weight: Rational,
}

impl CyclotomicLetter {
    pub fn new(a: u32, b: u32, c: u32, weight: Rational) -> Result<Self> {
        if a == 0 || c == 0 {
            return Err(Error::Domain("cyclotomic letter needs a ≥ 1 and c ≥ 1".into()));
        }
        if a <= b {
            return Err(Error::Domain(format!("cyclotomic letter ({a},{b},{c}) violates a > b")));
        }
        if weight.is_zero() {
            return Err(Error::Domain("cyclotomic weight must be nonzero".into()));
        }
        Ok(CyclotomicLetter { a, b, c, weight })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclotomicIndex(Vec<CyclotomicLetter>);

impl CyclotomicIndex {
    pub fn new(letters: Vec<CyclotomicLetter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::Domain("cyclotomic index must be nonempty".into()));
        }
        Ok(CyclotomicIndex(letters))
    }

    pub fn letters(&self) -> &[CyclotomicLetter] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(|l| l.c).sum()
    }
}

/// Any of the nested-sum index families.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SumIndex {
    Harmonic(HarmonicIndex),
    General(GeneralIndex),
    Cyclotomic(CyclotomicIndex),
}

impl SumIndex {
    pub fn family(&self) -> &'static str {
        match self {
            SumIndex::Harmonic(_) => "harmonic",
            SumIndex::General(_) => "generalized",
            SumIndex::Cyclotomic(_) => "cyclotomic",
        }
    }
}

/// Finite linear combination with exact rational coefficients. Zero
/// coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinComb<K: Ord> {
    terms: BTreeMap<K, Rational>,
}

impl<K: Ord> Default for LinComb<K> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_term(key: K, coeff: Rational) -> Self {
        let mut lc = Self::new();
        lc.add_term(key, coeff);
        lc
    }

    pub fn add_term(&mut self, key: K, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(c) => {
                *c += coeff;
                if c.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, coeff);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, scale: &Rational) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c * scale);
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::new();
        out.add_scaled(self, s);
        out
    }

    pub fn coeff(&self, key: &K) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn map_keys<K2: Ord + Clone>(&self, f: impl Fn(&K) -> K2) -> LinComb<K2> {
        let mut out = LinComb::new();
        for (k, c) in &self.terms {
            out.add_term(f(k), c.clone());
        }
        out
    }
}

impl<K: Ord + Clone> std::ops::Add for &LinComb<K> {
    type Output = LinComb<K>;
    fn add(self, rhs: Self) -> LinComb<K> {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl<K: Ord + Clone> std::ops::Sub for &LinComb<K> {
    type Output = LinComb<K>;
    fn sub(self, rhs: Self) -> LinComb<K> {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl<K: Ord + Clone + fmt::Display> fmt::Display for LinComb<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mag.is_one() {
                write!(f, "{k}")?;
            } else {
                write!(f, "{mag}*{k}")?;
            }
        }
        Ok(())
    }
}

/// Keys that know how to render themselves in the JSON term shape.
pub trait TermKey {
    /// Name of the field carrying the key (`"word"` or `"factors"`).
    const FIELD: &'static str;
    fn to_json(&self) -> Value;
}

impl TermKey for Vec<i64> {
    const FIELD: &'static str = "word";
    fn to_json(&self) -> Value {
        json!(self)
    }
}

impl TermKey for HarmonicIndex {
    const FIELD: &'static str = "word";
    fn to_json(&self) -> Value {
        json!(self.0)
    }
}

impl TermKey for GeneralIndex {
    const FIELD: &'static str = "word";
    fn to_json(&self) -> Value {
        Value::Array(
            self.0
                .iter()
                .map(|l| json!({"exponent": l.exponent, "weight": l.weight.to_string()}))
                .collect(),
        )
    }
}

impl TermKey for SumIndex {
    const FIELD: &'static str = "word";
    fn to_json(&self) -> Value {
        match self {
            SumIndex::Harmonic(h) => h.to_json(),
            SumIndex::General(g) => g.to_json(),
            SumIndex::Cyclotomic(c) => Value::Array(
                c.0.iter()
                    .map(|l| json!({"a": l.a, "b": l.b, "c": l.c, "weight": l.weight.to_string()}))
                    .collect(),
            ),
        }
    }
}

impl<K: Ord + Clone + TermKey> LinComb<K> {
    /// `{"terms":[{"coeff":"-1/2","word":[...]}, ...]}`
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let mut m = serde_json::Map::new();
                m.insert("coeff".into(), Value::String(c.to_string()));
                m.insert(K::FIELD.into(), k.to_json());
                Value::Object(m)
            })
            .collect();
        json!({ "terms": terms })
    }
}

/// Letters of a quasi-shuffle algebra: two colliding letters contract to one.
pub trait QuasiLetter: Clone + Ord {
    fn merge(&self, other: &Self) -> Self;
}

impl QuasiLetter for i64 {
    /// |a|+|b| with sign(a)·sign(b).
    fn merge(&self, other: &Self) -> Self {
        let mag = self.abs() + other.abs();
        if (*self < 0) != (*other < 0) {
            -mag
        } else {
            mag
        }
    }
}

impl QuasiLetter for GeneralLetter {
    fn merge(&self, other: &Self) -> Self {
        GeneralLetter::new(self.exponent + other.exponent, &self.weight * &other.weight)
    }
}

/// Only valid when both letters share the denominator a k + b.
impl QuasiLetter for CyclotomicLetter {
    fn merge(&self, other: &Self) -> Self {
        CyclotomicLetter { a: self.a, b: self.b, c: self.c + other.c, weight: &self.weight * &other.weight }
    }
}

/// Quasi-shuffle product for sums with non-strict nesting (`S`-sums):
/// S_u(N)·S_v(N) = Σ coeff·S_w(N). Contracted letters carry coefficient −1.
pub fn quasi_shuffle<L: QuasiLetter>(u: &[L], v: &[L]) -> LinComb<Vec<L>> {
    let mut memo = HashMap::new();
    quasi_shuffle_rec(u, v, 0, 0, &mut memo)
}

fn quasi_shuffle_rec<L: QuasiLetter>(
    u: &[L],
    v: &[L],
    i: usize,
    j: usize,
    memo: &mut HashMap<(usize, usize), LinComb<Vec<L>>>,
) -> LinComb<Vec<L>> {
    if i == u.len() {
        return LinComb::from_term(v[j..].to_vec(), Rational::one());
    }
    if j == v.len() {
        return LinComb::from_term(u[i..].to_vec(), Rational::one());
    }
    if let Some(r) = memo.get(&(i, j)) {
        return r.clone();
    }
    let mut out = LinComb::new();
    let prepend = |out: &mut LinComb<Vec<L>>, head: &L, tail: &LinComb<Vec<L>>, sign: Rational| {
        for (w, c) in tail.iter() {
            let mut word = Vec::with_capacity(w.len() + 1);
            word.push(head.clone());
            word.extend_from_slice(w);
            out.add_term(word, c * &sign);
        }
    };
    let a = quasi_shuffle_rec(u, v, i + 1, j, memo);
    prepend(&mut out, &u[i], &a, Rational::one());
    let b = quasi_shuffle_rec(u, v, i, j + 1, memo);
    prepend(&mut out, &v[j], &b, Rational::one());
    let c = quasi_shuffle_rec(u, v, i + 1, j + 1, memo);
    prepend(&mut out, &u[i].merge(&v[j]), &c, -Rational::one());
    memo.insert((i, j), out.clone());
    out
}

/// Stuffle product of two harmonic indices.
pub fn stuffle_harmonic(u: &HarmonicIndex, v: &HarmonicIndex) -> LinComb<HarmonicIndex> {
    quasi_shuffle(&u.0, &v.0).map_keys(|w| HarmonicIndex(w.clone()))
}

/// Stuffle product of two generalized indices (exponents add, weights
/// multiply on contraction).
pub fn stuffle_general(u: &GeneralIndex, v: &GeneralIndex) -> LinComb<GeneralIndex> {
    quasi_shuffle(&u.0, &v.0).map_keys(|w| GeneralIndex(w.clone()))
}

/// Stuffle product on the family-tagged index type; both factors must belong
/// to the same family.
pub fn stuffle(u: &SumIndex, v: &SumIndex) -> Result<LinComb<SumIndex>> {
    match (u, v) {
        (SumIndex::Harmonic(a), SumIndex::Harmonic(b)) => {
            Ok(stuffle_harmonic(a, b).map_keys(|w| SumIndex::Harmonic(w.clone())))
        }
        (SumIndex::General(a), SumIndex::General(b)) => {
            Ok(stuffle_general(a, b).map_keys(|w| SumIndex::General(w.clone())))
        }
        (SumIndex::Cyclotomic(a), SumIndex::Cyclotomic(b)) => {
            let first = &a.0[0];
            if a.0.iter().chain(&b.0).any(|l| (l.a, l.b) != (first.a, first.b)) {
                return Err(Error::Unsupported(
                    "quasi-shuffle of cyclotomic sums needs partial fractioning of distinct denominators".into(),
                ));
            }
            Ok(quasi_shuffle(&a.0, &b.0).map_keys(|w| SumIndex::Cyclotomic(CyclotomicIndex(w.clone()))))
        }
        _ => Err(Error::MixedFamilies(u.family(), v.family())),
    }
}

/// Shuffle product: all order-preserving interleavings, with multiplicity.
pub fn shuffle<L: Clone + Ord>(u: &[L], v: &[L]) -> LinComb<Vec<L>> {
    let mut memo = HashMap::new();
    shuffle_rec(u, v, 0, 0, &mut memo)
}

fn shuffle_rec<L: Clone + Ord>(
    u: &[L],
    v: &[L],
    i: usize,
    j: usize,
    memo: &mut HashMap<(usize, usize), LinComb<Vec<L>>>,
) -> LinComb<Vec<L>> {
    if i == u.len() {
        return LinComb::from_term(v[j..].to_vec(), Rational::one());
    }
    if j == v.len() {
        return LinComb::from_term(u[i..].to_vec(), Rational::one());
    }
    if let Some(r) = memo.get(&(i, j)) {
        return r.clone();
    }
    let mut out = LinComb::new();
    for (head, tail) in [(&u[i], shuffle_rec(u, v, i + 1, j, memo)), (&v[j], shuffle_rec(u, v, i, j + 1, memo))] {
        for (w, c) in tail.iter() {
            let mut word = Vec::with_capacity(w.len() + 1);
            word.push(head.clone());
            word.extend_from_slice(w);
            out.add_term(word, c.clone());
        }
    }
    memo.insert((i, j), out.clone());
    out
}

/// Letter order on the harmonic alphabet: 1 < −1 < 2 < −2 < ...
pub fn harmonic_letter_cmp(a: &i64, b: &i64) -> Ordering {
    (a.unsigned_abs(), *a < 0).cmp(&(b.unsigned_abs(), *b < 0))
}

fn word_cmp_by<L>(a: &[L], b: &[L], cmp: &impl Fn(&L, &L) -> Ordering) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match cmp(x, y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// Lyndon test under an explicit letter order: the word must be strictly
/// smaller than each of its proper rotations.
pub fn is_lyndon_by<L>(w: &[L], cmp: impl Fn(&L, &L) -> Ordering) -> Result<bool> {
    if w.is_empty() {
        return Err(Error::Domain("the empty word has no Lyndon status".into()));
    }
    let n = w.len();
    for r in 1..n {
        let rotated: Vec<&L> = w[r..].iter().chain(&w[..r]).collect();
        let orig: Vec<&L> = w.iter().collect();
        if word_cmp_by(&orig, &rotated, &|a: &&L, b: &&L| cmp(a, b)) != Ordering::Less {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_lyndon<L: Ord>(w: &[L]) -> Result<bool> {
    is_lyndon_by(w, |a, b| a.cmp(b))
}

pub fn is_lyndon_harmonic(w: &[i64]) -> Result<bool> {
    is_lyndon_by(w, harmonic_letter_cmp)
}

/// Harmonic letters of weight ≤ `max_abs` in the Lyndon letter order,
/// paired with their weights.
pub fn harmonic_alphabet(max_abs: u32) -> Vec<(i64, u32)> {
    (1..=max_abs as i64).flat_map(|a| [(a, a as u32), (-a, a as u32)]).collect()
}

/// All Lyndon words of exact total `weight` over a weighted alphabet, in
/// lexicographic order.
pub fn lyndon_words_by<L: Clone>(
    alphabet: &[(L, u32)],
    weight: u32,
    cmp: impl Fn(&L, &L) -> Ordering,
) -> Vec<Vec<L>> {
    let mut letters: Vec<(L, u32)> = alphabet.iter().filter(|(_, w)| *w >= 1).cloned().collect();
    letters.sort_by(|a, b| cmp(&a.0, &b.0));
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    lyndon_dfs(&letters, weight, &mut prefix, &mut out, &cmp);
    out
}

fn lyndon_dfs<L: Clone>(
    letters: &[(L, u32)],
    remaining: u32,
    prefix: &mut Vec<L>,
    out: &mut Vec<Vec<L>>,
    cmp: &impl Fn(&L, &L) -> Ordering,
) {
    if remaining == 0 {
        if is_lyndon_by(prefix, cmp).unwrap_or(false) {
            out.push(prefix.clone());
        }
        return;
    }
    for (l, w) in letters {
        if *w <= remaining {
            prefix.push(l.clone());
            lyndon_dfs(letters, remaining - w, prefix, out, cmp);
            prefix.pop();
        }
    }
}

/// Lyndon words of the given weight over the harmonic alphabet.
pub fn harmonic_lyndon_words(weight: u32) -> Vec<HarmonicIndex> {
    lyndon_words_by(&harmonic_alphabet(weight), weight, harmonic_letter_cmp)
        .into_iter()
        .map(HarmonicIndex)
        .collect()
}

/// Chen–Fox–Lyndon factorization (Duval's algorithm): factors are Lyndon
/// and nonincreasing.
pub fn lyndon_factorization_by<L: Clone>(w: &[L], cmp: impl Fn(&L, &L) -> Ordering) -> Vec<Vec<L>> {
    let n = w.len();
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        let mut k = i;
        while j < n && cmp(&w[k], &w[j]) != Ordering::Greater {
            if cmp(&w[k], &w[j]) == Ordering::Less {
                k = i;
            } else {
                k += 1;
            }
            j += 1;
        }
        while i <= k {
            out.push(w[i..i + j - k].to_vec());
            i += j - k;
        }
    }
    out
}

fn check_weight(w: u32) -> Result<()> {
    if w == 0 {
        Err(Error::Domain("weight must be ≥ 1".into()))
    } else {
        Ok(())
    }
}

fn pow_big(base: u32, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

/// (1/w) Σ_{d|w} μ(w/d) f(d), exact.
fn mobius_average(w: u32, f: impl Fn(u32) -> BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for d in divisors(w as u64) {
        let mu = mobius(w as u64 / d).expect("nonzero");
        acc += f(d as u32) * BigInt::from(mu);
    }
    acc / BigInt::from(w)
}

/// Number of harmonic sums of weight w: 2·3^(w−1).
pub fn count_all(w: u32) -> Result<BigInt> {
    check_weight(w)?;
    Ok(pow_big(3, w - 1) * 2)
}

/// Number of sums independent under the algebraic (quasi-shuffle) relations,
/// i.e. the number of Lyndon words of weight w. For w ≥ 2 this is
/// (1/w) Σ_{d|w} μ(w/d) 3^d; the extra −[w = 1] accounts for the two
/// weight-one sums.
pub fn count_a(w: u32) -> Result<BigInt> {
    check_weight(w)?;
    Ok(mobius_average(w, |d| pow_big(3, d) - 1))
}

/// Independent sums under the differentiation relations: 4·3^(w−2).
pub fn count_d(w: u32) -> Result<BigInt> {
    if w < 2 {
        return Err(Error::Domain("count_D needs weight ≥ 2".into()));
    }
    Ok(pow_big(3, w - 2) * 4)
}

/// Independent sums under the duplication relations: 2·3^(w−1) − 2^(w−1).
pub fn count_h(w: u32) -> Result<BigInt> {
    check_weight(w)?;
    Ok(pow_big(3, w - 1) * 2 - pow_big(2, w - 1))
}

/// Independent sums when algebraic, differentiation and duplication relations
/// are all applied.
pub fn count_adh(w: u32) -> Result<BigInt> {
    if w < 2 {
        return Err(Error::Domain("count_ADH needs weight ≥ 2".into()));
    }
    let f = |d: u32| pow_big(3, d) - pow_big(2, d);
    Ok(mobius_average(w, f) - mobius_average(w - 1, f))
}

/// A product of Lyndon-indexed harmonic sums (a multiset, kept sorted).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisMonomial(Vec<HarmonicIndex>);

impl BasisMonomial {
    pub fn new(mut factors: Vec<HarmonicIndex>) -> Self {
        factors.sort();
        BasisMonomial(factors)
    }

    pub fn factors(&self) -> &[HarmonicIndex] {
        &self.0
    }
}

impl fmt::Display for BasisMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let mut j = i;
            while j < self.0.len() && self.0[j] == self.0[i] {
                j += 1;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if j - i > 1 {
                write!(f, "{}^{}", self.0[i], j - i)?;
            } else {
                write!(f, "{}", self.0[i])?;
            }
            i = j;
        }
        Ok(())
    }
}

impl TermKey for BasisMonomial {
    const FIELD: &'static str = "factors";
    fn to_json(&self) -> Value {
        Value::Array(self.0.iter().map(|h| json!(h.0)).collect())
    }
}

pub type BasisPolynomial = LinComb<BasisMonomial>;

/// Reduction order: longer words are larger; equal lengths compare
/// lexicographically in the Lyndon letter order.
#[derive(Clone, Debug, PartialEq, Eq)]
struct ReductionKey(Vec<i64>);

impl Ord for ReductionKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| word_cmp_by(&self.0, &other.0, &harmonic_letter_cmp))
    }
}

impl PartialOrd for ReductionKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub const DEFAULT_MAX_REDUCTION_WEIGHT: u32 = 5;

/// Rewrites harmonic sums as polynomials in Lyndon-indexed sums using only
/// quasi-shuffle identities. Results are cached per index.
pub struct Reducer {
    max_weight: u32,
    cache: Mutex<HashMap<HarmonicIndex, BasisPolynomial>>,
}

impl Default for Reducer {
    fn default() -> Self {
        Self::new(DEFAULT_MAX_REDUCTION_WEIGHT)
    }
}

impl Reducer {
    pub fn new(max_weight: u32) -> Self {
        Reducer { max_weight, cache: Mutex::new(HashMap::new()) }
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }

    pub fn reduce(&self, idx: &HarmonicIndex) -> Result<BasisPolynomial> {
        let weight = idx.weight();
        if weight > self.max_weight {
            return Err(Error::WeightTooLarge { weight, max: self.max_weight });
        }
        if let Some(p) = self.cache.lock().unwrap().get(idx) {
            return Ok(p.clone());
        }
        let p = reduce_words(idx)?;
        self.cache.lock().unwrap().insert(idx.clone(), p.clone());
        Ok(p)
    }
}

// Repeatedly takes the largest pending word. Lyndon words are basis elements;
// any other word w = l1 l2 ... lk (nonincreasing Lyndon factors) satisfies
// l1 * ... * lk = c·w + (smaller words), with c the product of factorials of
// the factor multiplicities.
fn reduce_words(idx: &HarmonicIndex) -> Result<BasisPolynomial> {
    let mut pending: BTreeMap<ReductionKey, Rational> = BTreeMap::new();
    pending.insert(ReductionKey(idx.0.clone()), Rational::one());
    let mut result = BasisPolynomial::new();
    while let Some((ReductionKey(word), alpha)) = pending.pop_last() {
        if alpha.is_zero() {
            continue;
        }
        if is_lyndon_harmonic(&word)? {
            result.add_term(BasisMonomial::new(vec![HarmonicIndex(word)]), alpha);
            continue;
        }
        let factors = lyndon_factorization_by(&word, harmonic_letter_cmp);
        let mut product = LinComb::from_term(factors[0].clone(), Rational::one());
        for f in &factors[1..] {
            let mut next = LinComb::new();
            for (w, c) in product.iter() {
                next.add_scaled(&quasi_shuffle(w, f), c);
            }
            product = next;
        }
        let lead = product.coeff(&word);
        if lead.is_zero() {
            return Err(Error::Domain(format!("reduction failed to isolate {:?}", word)));
        }
        let scale = &alpha / &lead;
        result.add_term(
            BasisMonomial::new(factors.into_iter().map(HarmonicIndex).collect()),
            scale.clone(),
        );
        let key = ReductionKey(word.clone());
        for (w, c) in product.iter() {
            if *w == word {
                continue;
            }
            let wk = ReductionKey(w.clone());
            debug_assert!(wk < key, "non-decreasing reduction step");
            let entry = pending.entry(wk).or_insert_with(Rational::zero);
            *entry -= c * &scale;
        }
    }
    Ok(result)
}

/// Reduces with the shared default [`Reducer`] (maximum weight 5).
pub fn reduce_to_basis(idx: &HarmonicIndex) -> Result<BasisPolynomial> {
    static DEFAULT: OnceLock<Reducer> = OnceLock::new();
    DEFAULT.get_or_init(Reducer::default).reduce(idx)
}

/// Every harmonic index of exactly the given weight.
pub fn all_harmonic_indices(weight: u32) -> Vec<HarmonicIndex> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    fn rec(rem: u32, prefix: &mut Vec<i64>, out: &mut Vec<HarmonicIndex>) {
        if rem == 0 {
            out.push(HarmonicIndex(prefix.clone()));
            return;
        }
        for a in 1..=rem as i64 {
            for s in [a, -a] {
                prefix.push(s);
                rec(rem - a as u32, prefix, out);
                prefix.pop();
            }
        }
    }
    if weight > 0 {
        rec(weight, &mut prefix, &mut out);
    }
    out
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    fn h(v: &[i64]) -> HarmonicIndex {
        HarmonicIndex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn index_validation() {
        assert!(HarmonicIndex::new(vec![]).is_err());
        assert!(HarmonicIndex::new(vec![0, 1]).is_err());
        assert!(h(&[-2, 1, 1]).is_convergent());
        assert!(!h(&[1, 2]).is_convergent());
        assert_eq!(h(&[-2, 1, 1]).weight(), 4);
        assert!(CyclotomicLetter::new(2, 2, 1, rat_int(1)).is_err());
        assert!(GeneralIndex::from_parts(&[1, 2], &[rat(1, 2)]).is_err());
    }

    #[test]
    fn stuffle_examples() {
        let p = stuffle_harmonic(&h(&[2]), &h(&[3]));
        let mut want = LinComb::new();
        want.add_term(h(&[2, 3]), rat_int(1));
        want.add_term(h(&[3, 2]), rat_int(1));
        want.add_term(h(&[5]), rat_int(-1));
        assert_eq!(p, want);

        let p = stuffle_harmonic(&h(&[1]), &h(&[1]));
        assert_eq!(p.coeff(&h(&[1, 1])), rat_int(2));
        assert_eq!(p.coeff(&h(&[2])), rat_int(-1));
        assert_eq!(p.len(), 2);

        let p = stuffle_harmonic(&h(&[-2]), &h(&[1]));
        assert_eq!(p.coeff(&h(&[-2, 1])), rat_int(1));
        assert_eq!(p.coeff(&h(&[1, -2])), rat_int(1));
        assert_eq!(p.coeff(&h(&[-3])), rat_int(-1));
    }

    #[test]
    fn mixed_families_rejected() {
        let a = SumIndex::Harmonic(h(&[1]));
        let b = SumIndex::General(GeneralIndex::from_parts(&[1], &[rat(1, 2)]).unwrap());
        assert!(matches!(stuffle(&a, &b), Err(Error::MixedFamilies(..))));
    }

    #[test]
    fn shuffle_examples() {
        let p = shuffle(&['a'], &['b', 'c', 'd']);
        assert_eq!(p.len(), 4);
        for w in ["abcd", "bacd", "bcad", "bcda"] {
            assert_eq!(p.coeff(&w.chars().collect()), rat_int(1));
        }
        let e: [char; 0] = [];
        assert_eq!(shuffle(&['a'], &e), LinComb::from_term(vec!['a'], rat_int(1)));
        assert_eq!(shuffle(&['a'], &['a']), LinComb::from_term(vec!['a', 'a'], rat_int(2)));
    }

    #[test]
    fn lyndon_basics() {
        assert!(is_lyndon(&[1, 2]).unwrap());
        assert!(!is_lyndon(&[2, 1]).unwrap());
        assert!(!is_lyndon(&[1, 1]).unwrap());
        let e: [i64; 0] = [];
        assert!(is_lyndon(&e).is_err());
        // 1 < -1 in the harmonic order
        assert!(is_lyndon_harmonic(&[1, -1]).unwrap());
        assert!(!is_lyndon_harmonic(&[-1, 1]).unwrap());
    }

    #[test]
    fn lyndon_counts() {
        assert_eq!(harmonic_lyndon_words(1).len(), 2);
        let w2 = harmonic_lyndon_words(2);
        assert_eq!(w2, vec![h(&[1, -1]), h(&[2]), h(&[-2])]);
        assert_eq!(harmonic_lyndon_words(3).len(), 8);
    }

    #[test]
    fn counting_formulas() {
        assert_eq!(count_all(8).unwrap(), BigInt::from(4374));
        assert_eq!(count_adh(8).unwrap(), BigInt::from(486));
        assert_eq!(count_a(2).unwrap(), BigInt::from(3));
        assert_eq!(count_a(3).unwrap(), BigInt::from(8));
        assert_eq!(count_d(3).unwrap(), BigInt::from(12));
        assert_eq!(count_h(3).unwrap(), BigInt::from(14));
        assert!(count_all(0).is_err());
        assert!(count_adh(1).is_err());
    }

    #[test]
    fn factorization() {
        let f = lyndon_factorization_by(&[2, 1, 1], harmonic_letter_cmp);
        assert_eq!(f, vec![vec![2], vec![1], vec![1]]);
        let f = lyndon_factorization_by(&[1, -1, 1], harmonic_letter_cmp);
        assert_eq!(f, vec![vec![1, -1], vec![1]]);
    }

    #[test]
    fn reduce_small() {
        let p = reduce_to_basis(&h(&[1, 1])).unwrap();
        let sq = BasisMonomial::new(vec![h(&[1]), h(&[1])]);
        let s2 = BasisMonomial::new(vec![h(&[2])]);
        assert_eq!(p.coeff(&sq), rat(1, 2));
        assert_eq!(p.coeff(&s2), rat(1, 2));
        assert_eq!(p.len(), 2);
        let p = reduce_to_basis(&h(&[2])).unwrap();
        assert_eq!(p, LinComb::from_term(s2, rat_int(1)));
        assert!(matches!(reduce_to_basis(&h(&[3, 3])), Err(Error::WeightTooLarge { .. })));
        let r = Reducer::new(6);
        assert!(r.reduce(&h(&[3, 3])).is_ok());
    }

    #[test]
    fn json_shape() {
        let p = stuffle_harmonic(&h(&[1]), &h(&[1]));
        let v = p.to_json();
        assert_eq!(v["terms"][0]["coeff"], "2");
        assert_eq!(v["terms"][0]["word"], json!([1, 1]));
        assert_eq!(p.to_string(), "2*S[1,1] - S[2]");
    }
}
