use num_complex::Complex;
use proptest::prelude::*;

use nestsum::continuation::{continue_single, continue_single_with, ContinuationConfig, Parity};
use nestsum::exact::{complex_abs, complex_powi, BigFloat, ComplexBig, Precision};
use nestsum::Error;

fn c(re: f64, im: f64, p: Precision) -> ComplexBig {
    Complex::new(BigFloat::from_f64(re, p), BigFloat::from_f64(im, p))
}

fn at(a: i64, n: &ComplexBig, parity: Parity, p: Precision) -> ComplexBig {
    let cfg = ContinuationConfig { parity, ..ContinuationConfig::default() };
    continue_single_with(a, n, &cfg, p).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn shift_at_complex_arguments(
        a in prop_oneof![-3i64..=-1, 1i64..=3],
        re in 0.01f64..9.99,
        im in -5.0f64..5.0,
        odd in any::<bool>(),
    ) {
        let p = Precision::digits(25);
        let n = c(re, im, p);
        let one = c(1.0, 0.0, p);
        let n1 = &n + &one;
        let parity = if odd { Parity::Odd } else { Parity::Even };
        // (−1)^(N+1) becomes −(−1)^N under the chosen parity
        let (next_parity, sign) = if a > 0 {
            (parity, 1)
        } else {
            (parity.flip(), if odd { 1 } else { -1 })
        };
        let lhs = at(a, &n1, next_parity, p) - at(a, &n, parity, p);
        let step = one.clone() / complex_powi(&n1, a.unsigned_abs() as i64);
        let rhs = if sign < 0 { -step } else { step };
        let d = complex_abs(&(lhs - rhs)).to_f64();
        prop_assert!(d < 1e-11, "a = {}, N = {}+{}i: {}", a, re, im, d);
    }
}

#[test]
fn simple_pole_at_minus_one() {
    let p = Precision::digits(25);
    let eps = 1e-4;
    for (dr, di) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
        let n = c(-1.0 + eps * dr, eps * di, p);
        let v = continue_single(1, &n, p).unwrap();
        let r = complex_abs(&v).to_f64() * eps;
        assert!((r - 1.0).abs() < 0.05, "direction ({dr}, {di}): {r}");
    }
}

#[test]
fn poles_are_reported() {
    let p = Precision::digits(20);
    for k in [-1.0, -2.0, -7.0] {
        assert!(matches!(continue_single(2, &c(k, 0.0, p), p), Err(Error::Pole { .. })));
    }
    assert!(continue_single(2, &c(-2.5, 0.0, p), p).is_ok());
}

#[test]
fn deterministic() {
    let p = Precision::digits(30);
    let n = c(3.25, -1.5, p);
    let a = continue_single(-2, &n, p).unwrap();
    let b = continue_single(-2, &n, p).unwrap();
    assert_eq!(a.re.to_fixed(30), b.re.to_fixed(30));
    assert_eq!(a.im.to_fixed(30), b.im.to_fixed(30));
}
