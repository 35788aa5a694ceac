//! Small dense linear algebra and quadrature helpers on `BigFloat`.

use crate::exact::{BigFloat, Precision};

/// Solves `a · x = b` by Gaussian elimination with partial pivoting.
/// Returns `None` for a (numerically) singular matrix.
pub(crate) fn solve_linear(mut a: Vec<Vec<BigFloat>>, mut b: Vec<BigFloat>) -> Option<Vec<BigFloat>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[pivot][col].is_zero() {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = &a[row][col] / &a[col][col];
            if factor.is_zero() {
                continue;
            }
            for k in col..n {
                let delta = &factor * &a[col][k];
                a[row][k] -= delta;
            }
            let delta = &factor * &b[col];
            b[row] -= delta;
        }
    }
    let mut x = vec![BigFloat::zero_with(b[0].precision()); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for k in row + 1..n {
            acc -= &a[row][k] * &x[k];
        }
        x[row] = acc / &a[row][row];
    }
    Some(x)
}

/// Double-exponential (tanh-sinh) quadrature of `f` over (0, 1).
///
/// `f` receives both `x` and `1 − x`, computed without cancellation, so that
/// integrands singular at either endpoint can be evaluated accurately.
pub(crate) fn tanh_sinh<F>(f: F, prec: Precision) -> BigFloat
where
    F: Fn(&BigFloat, &BigFloat) -> BigFloat,
{
    let one = BigFloat::from_i64(1, prec);
    let two = BigFloat::from_i64(2, prec);
    let half_pi = BigFloat::pi(prec) / &two;
    let eps = BigFloat::from_i64(10, prec).powi(-(prec.decimal_digits() as i64));
    // Nodes are symmetric about 1/2: x = (1 ± tanh(π/2 sinh t))/2.
    let sample = |t: &BigFloat| -> BigFloat {
        let et = t.exp();
        let sinh = (&et - &one / &et) / &two;
        let cosh = (&et + &one / &et) / &two;
        let u = &half_pi * &sinh;
        let eu = u.exp();
        let e2u = &eu * &eu;
        // 1 − tanh(u) = 2/(e^{2u}+1), 1 + tanh(u) = 2 e^{2u}/(e^{2u}+1)
        let denom = &e2u + &one;
        let small = &one / &denom;
        let large = &e2u / &denom;
        let cosh_u = (&eu + &one / &eu) / &two;
        let weight = &half_pi * &cosh / (&cosh_u * &cosh_u) / &two;
        let right = f(&large, &small);
        let left = f(&small, &large);
        (right + left) * weight
    };
    let mut h = BigFloat::from_f64(0.5, prec);
    let t_max = ((prec.decimal_digits() as f64 * std::f64::consts::LN_10).ln() * 1.1 + 1.5).max(3.0);
    let zero = BigFloat::zero_with(prec);
    let centre = f(&(&one / &two), &(&one / &two)) * (&half_pi / &two);
    let mut sum = centre + {
        let mut acc = zero.clone();
        let mut k = 1;
        loop {
            let t = BigFloat::from_i64(k, prec) * &h;
            if t.to_f64() > t_max {
                break;
            }
            acc += sample(&t);
            k += 1;
        }
        acc
    };
    let mut estimate = &sum * &h;
    for _level in 0..12 {
        h = &h / &two;
        let mut acc = zero.clone();
        let mut k = 1;
        loop {
            let t = BigFloat::from_i64(k, prec) * &h;
            if t.to_f64() > t_max {
                break;
            }
            acc += sample(&t);
            k += 2;
        }
        sum += acc;
        let next = &sum * &h;
        let diff = (&next - &estimate).abs();
        estimate = next;
        if diff <= &eps * &estimate.abs().max(one.clone()) * BigFloat::from_i64(1000, prec) {
            break;
        }
    }
    estimate
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let p = Precision::default();
        let f = |x: i64| BigFloat::from_i64(x, p);
        let a = vec![vec![f(0), f(2), f(1)], vec![f(1), f(1), f(1)], vec![f(2), f(1), f(0)]];
        let b = vec![f(7), f(6), f(4)];
        let x = solve_linear(a, b).unwrap();
        for (v, want) in x.iter().zip([1.0, 2.0, 3.0]) {
            assert!((v.to_f64() - want).abs() < 1e-40);
        }
    }

    #[test]
    fn singular_system_is_rejected() {
        let p = Precision::default();
        let f = |x: i64| BigFloat::from_i64(x, p);
        let a = vec![vec![f(1), f(2)], vec![f(2), f(4)]];
        assert!(solve_linear(a, vec![f(1), f(2)]).is_none());
    }

    #[test]
    fn tanh_sinh_endpoint_singularities() {
        let p = Precision::digits(30);
        // ∫ ln(x) = −1 and ∫ 1/√(x(1−x)) = π
        let v = tanh_sinh(|x, _| x.ln(), p);
        assert!((v.to_f64() + 1.0).abs() < 1e-25);
        let v = tanh_sinh(|x, y| BigFloat::from_i64(1, p) / (x * y).sqrt(), p);
        assert!((v - BigFloat::pi(p)).abs().to_f64() < 1e-20);
    }
}
