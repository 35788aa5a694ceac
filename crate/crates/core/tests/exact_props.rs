use num_bigint::{BigInt, Sign};
use num_traits::{One, Zero};
use proptest::prelude::*;

use nestsum::exact::{cyclotomic_poly, divisors, mobius, totient, IntPolynomial, Rational};

fn big() -> impl Strategy<Value = BigInt> {
    (any::<bool>(), proptest::collection::vec(any::<u8>(), 1..=32)).prop_map(|(neg, bytes)| {
        BigInt::from_bytes_be(if neg { Sign::Minus } else { Sign::Plus }, &bytes)
    })
}

fn rational() -> impl Strategy<Value = Rational> {
    (big(), big()).prop_filter_map("zero denominator", |(n, d)| (!d.is_zero()).then(|| Rational::new(n, d)))
}

proptest! {
    #[test]
    fn addition_associates(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
    }

    #[test]
    fn multiplication_distributes(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
    }

    #[test]
    fn normalized(a in rational()) {
        let g = num_integer::Integer::gcd(a.numer(), a.denom());
        prop_assert!(g.is_one());
        prop_assert!(a.denom() > &BigInt::zero());
    }
}

#[test]
fn cyclotomic_product_is_x_n_minus_one() {
    for n in 1..=30u64 {
        let mut p = IntPolynomial::one();
        for d in divisors(n) {
            p = p.mul(&cyclotomic_poly(d).unwrap());
        }
        assert_eq!(p, IntPolynomial::x_pow_minus_one(n as usize), "n = {n}");
    }
}

#[test]
fn divisor_sums() {
    for n in 1..=10_000u64 {
        let mu: i64 = divisors(n).iter().map(|&d| mobius(d).unwrap() as i64).sum();
        assert_eq!(mu, (n == 1) as i64, "n = {n}");
        let phi: u64 = divisors(n).iter().map(|&d| totient(d).unwrap()).sum();
        assert_eq!(phi, n);
    }
}

#[test]
fn cyclotomic_degree_is_totient() {
    for n in 1..=100u64 {
        assert_eq!(cyclotomic_poly(n).unwrap().degree(), Some(totient(n).unwrap() as usize));
    }
}
