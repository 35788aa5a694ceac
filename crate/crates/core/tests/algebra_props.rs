mod common;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use nestsum::algebra::{
    all_harmonic_indices, count_a, harmonic_lyndon_words, quasi_shuffle, reduce_to_basis, shuffle,
    stuffle_harmonic, BasisPolynomial, LinComb,
};
use nestsum::exact::{binomial, Rational};
use nestsum::sums::{eval_harmonic, harmonic_table};

fn letters() -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-2i64..=2, 0..=3)
}

fn eval_basis(p: &BasisPolynomial, n: u64) -> Rational {
    let mut acc = Rational::zero();
    for (m, c) in p.iter() {
        let mut term = c.clone();
        for f in m.factors() {
            term *= eval_harmonic(f, n);
        }
        acc += term;
    }
    acc
}

fn mul_lincomb(a: &LinComb<Vec<i64>>, b: &LinComb<Vec<i64>>, f: impl Fn(&[i64], &[i64]) -> LinComb<Vec<i64>>) -> LinComb<Vec<i64>> {
    let mut out = LinComb::new();
    for (u, cu) in a.iter() {
        for (v, cv) in b.iter() {
            out.add_scaled(&f(u, v), &(cu * cv));
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn stuffle_matches_direct_sums(u in common::harmonic_index(5, 3), v in common::harmonic_index(5, 3)) {
        prop_assume!(u.weight() + v.weight() <= 10);
        let prod = stuffle_harmonic(&u, &v);
        let tu = harmonic_table(&u, 20);
        let tv = harmonic_table(&v, 20);
        let tables: Vec<(Vec<Rational>, Rational)> = prod.iter().map(|(w, c)| (harmonic_table(w, 20), c.clone())).collect();
        for n in 1..=20usize {
            let rhs: Rational = tables.iter().map(|(t, c)| c * &t[n]).fold(Rational::zero(), |a, b| a + b);
            prop_assert_eq!(&tu[n] * &tv[n], rhs, "N = {}", n);
        }
    }
}

proptest! {
    #[test]
    fn products_commute(u in letters(), v in letters()) {
        prop_assert_eq!(quasi_shuffle(&u, &v), quasi_shuffle(&v, &u));
        prop_assert_eq!(shuffle(&u, &v), shuffle(&v, &u));
    }

    #[test]
    fn products_associate(u in letters(), v in letters(), w in letters()) {
        let one = |x: &[i64]| LinComb::from_term(x.to_vec(), Rational::one());
        let qs = |a: &[i64], b: &[i64]| quasi_shuffle(a, b);
        let sh = |a: &[i64], b: &[i64]| shuffle(a, b);
        prop_assert_eq!(
            mul_lincomb(&qs(&u, &v), &one(&w), qs),
            mul_lincomb(&one(&u), &qs(&v, &w), qs)
        );
        prop_assert_eq!(
            mul_lincomb(&sh(&u, &v), &one(&w), sh),
            mul_lincomb(&one(&u), &sh(&v, &w), sh)
        );
    }

    #[test]
    fn shuffle_multiplicity(u in letters(), v in letters()) {
        let total = shuffle(&u, &v).iter().fold(Rational::zero(), |a, (_, c)| a + c);
        let n = binomial((u.len() + v.len()) as u64, u.len() as u64);
        prop_assert_eq!(total, Rational::from_integer(n));
    }
}

#[test]
fn lyndon_count_matches_formula() {
    for w in 1..=6 {
        assert_eq!(BigInt::from(harmonic_lyndon_words(w).len()), count_a(w).unwrap(), "w = {w}");
    }
}

#[test]
fn reduction_is_exact_and_idempotent() {
    for w in 1..=4 {
        for idx in all_harmonic_indices(w) {
            let p = reduce_to_basis(&idx).unwrap();
            let table = harmonic_table(&idx, 30);
            for n in 1..=30u64 {
                assert_eq!(eval_basis(&p, n), table[n as usize], "{idx} at N = {n}");
            }
        }
    }
    // weight-four basis sums used across all weight-four reductions
    let mut used = std::collections::BTreeSet::new();
    for idx in all_harmonic_indices(4) {
        for (m, _) in reduce_to_basis(&idx).unwrap().iter() {
            used.extend(m.factors().iter().filter(|f| f.weight() == 4).cloned());
        }
    }
    assert_eq!(BigInt::from(used.len()), count_a(4).unwrap());
    assert_eq!(used.len(), 18);
    for idx in harmonic_lyndon_words(4) {
        let p = reduce_to_basis(&idx).unwrap();
        assert_eq!(p.len(), 1);
        let (m, c) = p.iter().next().unwrap();
        assert_eq!(m.factors(), &[idx.clone()]);
        assert!(c.is_one());
    }
}
