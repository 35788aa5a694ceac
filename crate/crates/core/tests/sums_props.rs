mod common;

use num_traits::{One, Zero};
use proptest::prelude::*;

use nestsum::algebra::{stuffle_harmonic, HarmonicIndex};
use nestsum::exact::{rat_pow, BigFloat, Precision, Rational};
use nestsum::sums::{eval_harmonic, eval_harmonic_flat, harmonic_table, limit_to_infinity, LimitOutcome};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn recursion_matches_flat_loops(idx in common::harmonic_index(5, 3)) {
        for n in 1..=15 {
            prop_assert_eq!(eval_harmonic(&idx, n), eval_harmonic_flat(&idx, n));
        }
    }

    #[test]
    fn shift_property(b in prop_oneof![-3i64..=-1, 1i64..=3], rest in common::harmonic_index(4, 2)) {
        let mut entries = vec![b];
        entries.extend_from_slice(rest.entries());
        let outer = HarmonicIndex::new(entries).unwrap();
        let t = harmonic_table(&outer, 16);
        let inner = harmonic_table(&rest, 16);
        for n in 0..15usize {
            let k = Rational::from_integer((n as i64 + 1).into());
            let mut step = Rational::one() / rat_pow(&k, b.unsigned_abs());
            if b < 0 && n % 2 == 0 {
                step = -step;
            }
            prop_assert_eq!(&t[n + 1] - &t[n], step * &inner[n + 1]);
        }
    }

    #[test]
    fn stuffle_consistency(u in common::harmonic_index(3, 2), v in common::harmonic_index(3, 2), n in 1u64..=12) {
        let rhs = stuffle_harmonic(&u, &v)
            .iter()
            .fold(Rational::zero(), |acc, (w, c)| acc + c * eval_harmonic(w, n));
        prop_assert_eq!(eval_harmonic(&u, n) * eval_harmonic(&v, n), rhs);
    }
}

#[test]
fn limits_of_positive_sums_bound_partial_sums() {
    let p = Precision::digits(30);
    for entries in [vec![2], vec![3], vec![2, 1], vec![2, 2], vec![3, 1, 1], vec![2, 1, 1]] {
        let idx = HarmonicIndex::new(entries).unwrap();
        let table = harmonic_table(&idx, 400);
        assert!(table.windows(2).skip(1).all(|w| w[1] > w[0]), "{idx} not increasing");
        let LimitOutcome::Converged(r) = limit_to_infinity(&idx, p) else { panic!("{idx} diverges") };
        let last = BigFloat::from_rational(&table[400], p);
        assert!(r.value > last, "{idx}: limit below S(400)");
        let (a, b) = &r.last_iterates;
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        assert!(&r.value >= lo && &r.value <= hi);
        assert!(r.error_estimate() < 1e-20, "{idx}: spread {}", r.error_estimate());
        assert!((&r.value - &r.last_iterates.1).abs().to_f64() == 0.0);
    }
}

#[test]
fn alternating_limits_are_bracketed() {
    // consecutive partial sums of an alternating sum enclose the limit
    let p = Precision::digits(30);
    for entries in [vec![-1], vec![-2], vec![-2, 1], vec![-3, 1, 1]] {
        let idx = HarmonicIndex::new(entries).unwrap();
        let t = harmonic_table(&idx, 201);
        let v = limit_to_infinity(&idx, p).value().unwrap().clone();
        let a = BigFloat::from_rational(&t[200], p);
        let b = BigFloat::from_rational(&t[201], p);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        assert!(v > lo && v < hi, "{idx}");
    }
}
