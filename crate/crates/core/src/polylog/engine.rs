//! Path integration of iterated integrals by local series expansions.
//!
//! A word f₁…fₙ defines F_j(t) = ∫₀ᵗ f_j(p + σs) F_{j+1}(s) ds, F_{n+1} = 1,
//! along the real path y = p + σt. Near the starting point all F_j are
//! expanded as Σ_k ln^k(t) Σ_m c_{k,m} t^m (the log terms come from poles of
//! the letters at p; integrating 1/t · ln^k t gives ln^{k+1} t/(k+1), which is
//! the usual regularization of trailing 1/y letters). Between singular points
//! the functions are carried by Taylor series, each step at most half the
//! distance to the nearest singularity. If the end point is itself singular
//! the functions are expanded there as well, with integration constants fixed
//! by matching, and the value is the constant term.

use num_complex::Complex64;
use num_traits::Zero;

use super::letters::{radius, Kernel};
use crate::error::{Error, Result};
use crate::exact::{format_rational_decimal, rat_to_f64, BigFloat, Precision, Rational};

/// Coefficients c[k][m] of Σ ln^k(t) t^m.
#[derive(Debug, Clone)]
struct LogSeries {
    c: Vec<Vec<BigFloat>>,
}

impl LogSeries {
    fn constant(v: BigFloat, order: usize) -> Self {
        let prec = v.precision();
        let mut row = vec![BigFloat::zero_with(prec); order + 1];
        row[0] = v;
        LogSeries { c: vec![row] }
    }

    fn eval(&self, t: &BigFloat) -> BigFloat {
        let prec = t.precision();
        let ln = t.ln();
        let mut total = BigFloat::zero_with(prec);
        let mut lpow = BigFloat::from_i64(1, prec);
        for row in &self.c {
            total += &lpow * &horner(row, t);
            lpow = &lpow * &ln;
        }
        total
    }

    /// Largest |c[k][0]| over k ≥ 1: the divergent part at t → 0.
    fn divergent_part(&self) -> f64 {
        self.c.iter().skip(1).map(|row| row[0].abs().to_f64()).fold(0.0, f64::max)
    }
}

fn horner(coeffs: &[BigFloat], t: &BigFloat) -> BigFloat {
    let mut acc = BigFloat::zero_with(t.precision());
    for c in coeffs.iter().rev() {
        acc = &acc * t + c;
    }
    acc
}

/// ∫₀ᵗ (a₋₁/s + Σ a_m s^m)·G(s) ds with the regularization ∫ ln^k(s)/s = ln^{k+1}/(k+1).
/// Returns the series and whether a 1/s term had to be regularized.
fn integrate_product(residue: Option<&BigFloat>, regular: &[BigFloat], g: &LogSeries, order: usize, threshold: f64) -> (LogSeries, bool) {
    let prec = regular[0].precision();
    let zero = BigFloat::zero_with(prec);
    let kmax = g.c.len() - 1;
    let mut out = vec![vec![zero.clone(); order + 1]; kmax + 2];
    let mut regularized = false;
    for (k, row) in g.c.iter().enumerate() {
        // product coefficients for s^m, m = 0..order-1
        for m in 0..order {
            let mut acc = zero.clone();
            for i in 0..=m.min(regular.len() - 1) {
                if !row[m - i].is_zero() {
                    acc += &regular[i] * &row[m - i];
                }
            }
            if let Some(r) = residue {
                if m + 1 <= order && !row[m + 1].is_zero() {
                    acc += r * &row[m + 1];
                }
            }
            if acc.is_zero() {
                continue;
            }
            // ∫ s^m ln^k s = t^{m+1} Σ_j (−1)^j k!/(k−j)! ln^{k−j} t/(m+1)^{j+1}
            let mp1 = BigFloat::from_u64(m as u64 + 1, prec);
            let mut factor = &acc / &mp1;
            for j in 0..=k {
                out[k - j][m + 1] += &factor;
                factor = -(&factor * &BigFloat::from_u64((k - j) as u64, prec) / &mp1);
            }
        }
        if let Some(r) = residue {
            let a = r * &row[0];
            if a.abs().to_f64() > threshold {
                regularized = true;
            }
            out[k + 1][0] += a / BigFloat::from_u64(k as u64 + 1, prec);
        }
    }
    while out.len() > 1 && out.last().is_some_and(|row| row.iter().all(|c| c.is_zero())) {
        out.pop();
    }
    (LogSeries { c: out }, regularized)
}

/// Where the path starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Origin {
    /// y = 0, integrating upward, with the trailing-zero regularization.
    Zero,
    /// y = 1, integrating downward.
    One,
}

#[derive(Debug, Clone)]
pub(crate) struct PathResult {
    /// F_j at the end point, outermost first; `None` where the value is
    /// divergent at a singular end point.
    pub values: Vec<Option<BigFloat>>,
    /// The outermost letter needed the 1/t regularization at the start.
    pub outer_regularized: bool,
    /// Some letter needed it.
    pub any_regularized: bool,
}

fn series_order(ratio: f64, prec: Precision, depth: usize) -> usize {
    let digits = prec.decimal_digits() as f64 + 5.0;
    let r = ratio.clamp(1e-6, 0.75);
    (digits * std::f64::consts::LN_10 / (1.0 / r).ln()).ceil() as usize + 8 + 4 * depth
}

/// Integrates the word along the path from the origin to `end` (given
/// exactly when it is a rational number).
pub(crate) fn integrate(kernels: &[Kernel], origin: Origin, end: &BigFloat, end_exact: Option<&Rational>, prec: Precision) -> Result<PathResult> {
    let n = kernels.len();
    if n == 0 {
        return Ok(PathResult { values: vec![], outer_regularized: false, any_regularized: false });
    }
    let (p, sigma): (Rational, i8) = match origin {
        Origin::Zero => (Rational::zero(), 1),
        Origin::One => (Rational::from_integer(1.into()), -1),
    };
    let p_big = BigFloat::from_rational(&p, prec);
    let t_end = if sigma > 0 { end - &p_big } else { &p_big - end };
    let t_end_f = t_end.to_f64();
    if t_end_f <= 0.0 {
        return Err(Error::Domain("the end point must lie strictly inside the integration range".into()));
    }
    let sing: Vec<Complex64> = kernels.iter().flat_map(|k| k.singularities()).collect();
    let tol = 10f64.powi(-(prec.decimal_digits() as i32) + 5).max(1e-290);
    let p_f = rat_to_f64(&p);
    let sig_f = sigma as f64;

    // real singular points on the path
    let mut end_singular: Option<Rational> = None;
    for r in kernels.iter().flat_map(|k| k.real_singularities()) {
        let tr = sig_f * (rat_to_f64(&r) - p_f);
        if tr.abs() < 1e-300 {
            continue;
        }
        let at_end = match end_exact {
            Some(e) => *e == r,
            None => {
                let rb = BigFloat::from_rational(&r, prec);
                (&rb - end).abs().to_f64() < tol
            }
        };
        if at_end {
            end_singular = Some(r);
        } else if tr > 0.0 && tr < t_end_f {
            return Err(Error::Singular(format!(
                "letter singular at y = {} inside the integration path",
                format_rational_decimal(&r)
            )));
        }
    }

    let threshold = tol;
    let one = BigFloat::from_i64(1, prec);

    // expansion at the start
    let rs = radius(p_f, &sing, 1e-300);
    let (t_stop, u_match) = match &end_singular {
        None => (t_end.clone(), None),
        Some(e) => {
            let re = radius(rat_to_f64(e), &sing, 1e-300);
            let u = (re / 2.0).min(t_end_f / 2.0);
            let u_big = BigFloat::from_f64(u, prec);
            (&t_end - &u_big, Some(u_big))
        }
    };
    let t_stop_f = t_stop.to_f64();
    let first = (rs / 2.0).min(t_stop_f);
    let t_first = if first >= t_stop_f { t_stop.clone() } else { BigFloat::from_f64(first, prec) };
    let order = series_order(first / rs, prec, n);
    let mut g = LogSeries::constant(one.clone(), order);
    let mut values = vec![BigFloat::zero_with(prec); n];
    let mut outer_regularized = false;
    let mut any_regularized = false;
    for j in (0..n).rev() {
        let (res, reg) = kernels[j].laurent(&p, sigma, order + 1, prec)?;
        let (next, regularized) = integrate_product(res.as_ref(), &reg, &g, order, threshold);
        if j == 0 {
            outer_regularized = regularized;
        }
        any_regularized |= regularized;
        values[j] = next.eval(&t_first);
        g = next;
    }

    // Taylor steps
    let mut t = t_first;
    while (&t_stop - &t).to_f64() > 0.0 {
        let y = &p_big + &(if sigma > 0 { t.clone() } else { -&t });
        let y_f = y.to_f64();
        let r = radius(y_f, &sing, 0.0);
        let remaining = (&t_stop - &t).to_f64();
        let (h, last) = if remaining <= r / 2.0 { ((&t_stop - &t), true) } else { (BigFloat::from_f64(r / 2.0, prec), false) };
        let order = series_order(h.to_f64() / r, prec, n);
        let mut below: Vec<BigFloat> = vec![one.clone()];
        for j in (0..n).rev() {
            let s = kernels[j].taylor(&y, sigma, order, prec);
            let mut integrated = Vec::with_capacity(order + 1);
            integrated.push(values[j].clone());
            for m in 0..order {
                let mut acc = BigFloat::zero_with(prec);
                for i in 0..=m.min(below.len() - 1) {
                    acc += &s[m - i] * &below[i];
                }
                integrated.push(acc / BigFloat::from_u64(m as u64 + 1, prec));
            }
            values[j] = horner(&integrated, &h);
            below = integrated;
        }
        t = if last { t_stop.clone() } else { &t + &h };
        if last {
            break;
        }
    }

    // expansion at a singular end point
    let Some(e) = end_singular else {
        return Ok(PathResult { values: values.into_iter().map(Some).collect(), outer_regularized, any_regularized });
    };
    let u = u_match.expect("matching distance");
    let re = radius(rat_to_f64(&e), &sing, 1e-300);
    let order = series_order(u.to_f64() / re, prec, n);
    let mut f = LogSeries::constant(one, order);
    let mut out = vec![None; n];
    for j in (0..n).rev() {
        let (res, reg) = kernels[j].laurent(&e, -sigma, order + 1, prec)?;
        let (mut ej, _) = integrate_product(res.as_ref(), &reg, &f, order, threshold);
        for row in ej.c.iter_mut() {
            for c in row.iter_mut() {
                *c = -&*c;
            }
        }
        let constant = &values[j] - &ej.eval(&u);
        let scale = constant.abs().to_f64().max(1.0);
        out[j] = if ej.divergent_part() > threshold * scale { None } else { Some(constant.clone()) };
        ej.c[0][0] = constant;
        f = ej;
    }
    Ok(PathResult { values: out, outer_regularized, any_regularized })
}
