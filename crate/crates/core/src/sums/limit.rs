//! Numerical limits N → ∞ of convergent harmonic and generalized sums.
//!
//! Partial sums are accumulated in `BigFloat`. Three regimes:
//! - outer weight of modulus below one: the terms decay geometrically and
//!   the sum is simply truncated;
//! - outer sign −1 with non-oscillating inner sums: repeated averaging of
//!   consecutive partial sums (Euler transformation);
//! - everything else: the even partial sums S(2M) admit an expansion in
//!   ln^l(N)/N^j, which is fitted at geometrically spaced N and evaluated
//!   at N = ∞.

use std::fmt;

use num_traits::{One, Signed};

use crate::algebra::{GeneralIndex, HarmonicIndex};
use crate::exact::{BigFloat, Precision, Rational};
use crate::numeric::solve_linear;

/// Why a limit does not exist.
#[derive(Debug, Clone, PartialEq)]
pub enum Divergence {
    /// Leading letters `1` make the sum grow like a polynomial in ln N; in
    /// the constant algebra the divergence is carried by σ₀.
    Logarithmic { sigma0_power: usize },
    /// A letter weight of modulus above one.
    Exponential { weight: Rational },
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Divergence::Logarithmic { sigma0_power: 1 } => write!(f, "divergent: logarithmic, carried by σ₀"),
            Divergence::Logarithmic { sigma0_power } => {
                write!(f, "divergent: logarithmic, carried by σ₀^{sigma0_power}")
            }
            Divergence::Exponential { weight } => {
                write!(f, "divergent: exponential growth from weight {weight} (|x| > 1)")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct LimitReport {
    pub value: BigFloat,
    /// The two most refined estimates; `value` is the second.
    pub last_iterates: (BigFloat, BigFloat),
    /// Number of terms of the outermost sum that were added.
    pub terms_used: u64,
    pub method: &'static str,
}

impl LimitReport {
    /// Spread of the last two estimates, a rough error indicator.
    pub fn error_estimate(&self) -> f64 {
        (&self.last_iterates.1 - &self.last_iterates.0).abs().to_f64()
    }
}

#[derive(Debug, Clone)]
pub enum LimitOutcome {
    Converged(LimitReport),
    Divergent(Divergence),
}

impl LimitOutcome {
    pub fn value(&self) -> Option<&BigFloat> {
        match self {
            LimitOutcome::Converged(r) => Some(&r.value),
            LimitOutcome::Divergent(_) => None,
        }
    }
}

/// σ for a harmonic index.
pub fn limit_to_infinity(idx: &HarmonicIndex, prec: Precision) -> LimitOutcome {
    limit_to_infinity_general(&GeneralIndex::from(idx), prec)
}

/// σ for a generalized index; weights must satisfy |x| ≤ 1.
pub fn limit_to_infinity_general(idx: &GeneralIndex, prec: Precision) -> LimitOutcome {
    let letters = idx.letters();
    if let Some(l) = letters.iter().find(|l| l.weight.abs() > Rational::one()) {
        return LimitOutcome::Divergent(Divergence::Exponential { weight: l.weight.clone() });
    }
    let leading_ones = letters.iter().take_while(|l| l.exponent == 1 && l.weight.is_one()).count();
    if leading_ones > 0 {
        return LimitOutcome::Divergent(Divergence::Logarithmic { sigma0_power: leading_ones });
    }
    let work = Precision::digits(prec.decimal_digits() + 20);
    let first = &letters[0].weight;
    let report = if first.abs() < Rational::one() {
        geometric(idx, work)
    } else if first.is_negative() && letters[1..].iter().all(|l| l.weight.is_positive()) {
        euler_averaging(idx, prec, work)
    } else {
        log_fit(idx, prec, work)
    };
    LimitOutcome::Converged(LimitReport {
        value: report.value.with_precision(prec),
        last_iterates: (report.last_iterates.0.with_precision(prec), report.last_iterates.1.with_precision(prec)),
        ..report
    })
}

/// Incremental evaluation of S(1), S(2), … for a fixed index.
struct PartialSums {
    exponents: Vec<u32>,
    weights: Vec<BigFloat>,
    powers: Vec<BigFloat>,
    // inner[j] holds S over letters j.. at the current k
    inner: Vec<BigFloat>,
    k: u64,
    prec: Precision,
}

impl PartialSums {
    fn new(idx: &GeneralIndex, prec: Precision) -> Self {
        let letters = idx.letters();
        let zero = BigFloat::zero_with(prec);
        PartialSums {
            exponents: letters.iter().map(|l| l.exponent).collect(),
            weights: letters.iter().map(|l| BigFloat::from_rational(&l.weight, prec)).collect(),
            powers: vec![BigFloat::from_i64(1, prec); letters.len()],
            inner: vec![zero; letters.len()],
            k: 0,
            prec,
        }
    }

    /// Advances to k + 1 and returns (S(k+1), outermost term).
    fn step(&mut self) -> (BigFloat, BigFloat) {
        self.k += 1;
        let inv = BigFloat::from_i64(1, self.prec) / BigFloat::from_u64(self.k, self.prec);
        let depth = self.exponents.len();
        let mut below = BigFloat::from_i64(1, self.prec);
        let mut outer_term = below.clone();
        for j in (0..depth).rev() {
            self.powers[j] = &self.powers[j] * &self.weights[j];
            let term = &self.powers[j] * &inv.powi(self.exponents[j] as i64) * &below;
            self.inner[j] += &term;
            below = self.inner[j].clone();
            outer_term = term;
        }
        (self.inner[0].clone(), outer_term)
    }

    fn advance_to(&mut self, n: u64) -> BigFloat {
        while self.k + 1 < n {
            self.step();
        }
        self.step().0
    }
}

fn geometric(idx: &GeneralIndex, work: Precision) -> LimitReport {
    let mut sums = PartialSums::new(idx, work);
    let eps = BigFloat::from_i64(10, work).powi(-(work.decimal_digits() as i64));
    let mut prev = BigFloat::zero_with(work);
    let mut small_run = 0;
    loop {
        let (s, term) = sums.step();
        if term.abs() <= &eps * &s.abs().max(BigFloat::from_i64(1, work)) {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if small_run >= 8 {
            return LimitReport { value: s.clone(), last_iterates: (prev, s), terms_used: sums.k, method: "direct" };
        }
        prev = s;
    }
}

/// Repeated averaging of m + 1 consecutive partial sums starting at n.
fn averaged(partials: &[BigFloat], levels: usize) -> BigFloat {
    let mut row = partials[..=levels].to_vec();
    let two = BigFloat::from_i64(2, partials[0].precision());
    for _ in 0..levels {
        row = row.windows(2).map(|w| (&w[0] + &w[1]) / &two).collect();
    }
    row.pop().expect("nonempty row")
}

fn euler_averaging(idx: &GeneralIndex, prec: Precision, work: Precision) -> LimitReport {
    // the error after m averagings from n is about (m/(2e n))^m·f(n)
    let levels = (prec.decimal_digits() as usize + 15).max(20);
    let start = 4 * levels as u64;
    let mut sums = PartialSums::new(idx, work);
    let mut partials = vec![sums.advance_to(start)];
    for _ in 0..levels + 1 {
        partials.push(sums.step().0);
    }
    let coarse = averaged(&partials, levels - 1);
    let fine = averaged(&partials[1..], levels);
    LimitReport { value: fine.clone(), last_iterates: (coarse, fine), terms_used: sums.k, method: "euler-averaging" }
}

fn log_fit(idx: &GeneralIndex, prec: Precision, work: Precision) -> LimitReport {
    let logs = idx.depth() - 1;
    let per_order = logs + 1;
    let orders = ((prec.decimal_digits() as usize + 10) / (2 + logs)).clamp(4, 24);
    let unknowns = 1 + orders * per_order;
    // geometric sampling of even N over a factor of `span`
    let low = 60.0 * per_order as f64;
    let span: f64 = 40.0;
    let mut points: Vec<u64> = Vec::with_capacity(unknowns);
    for i in 0..unknowns {
        let n = low * span.powf(i as f64 / (unknowns - 1) as f64);
        let mut n = (n as u64 / 2) * 2;
        if let Some(&last) = points.last() {
            n = n.max(last + 2);
        }
        points.push(n);
    }
    let fit_prec = Precision::digits(work.decimal_digits() + 4 * unknowns as u32);
    let mut sums = PartialSums::new(idx, fit_prec);
    let values: Vec<BigFloat> = points.iter().map(|&n| sums.advance_to(n)).collect();
    let rows: Vec<Vec<BigFloat>> = points
        .iter()
        .map(|&n| {
            let nf = BigFloat::from_u64(n, fit_prec);
            let inv = BigFloat::from_i64(1, fit_prec) / &nf;
            let ln = nf.ln();
            basis_row(&inv, &ln, orders, logs, fit_prec)
        })
        .collect();
    let fit = |orders_used: usize| -> BigFloat {
        let m = 1 + orders_used * per_order;
        let skip = unknowns - m;
        let a: Vec<Vec<BigFloat>> = rows[skip..].iter().map(|r| r[..m].to_vec()).collect();
        let b = values[skip..].to_vec();
        solve_linear(a, b).map(|x| x[0].clone()).unwrap_or_else(|| values[unknowns - 1].clone())
    };
    let coarse = fit(orders - 1);
    let fine = fit(orders);
    LimitReport {
        value: fine.with_precision(work),
        last_iterates: (coarse.with_precision(work), fine.with_precision(work)),
        terms_used: sums.k,
        method: "log-extrapolation",
    }
}

fn basis_row(inv: &BigFloat, ln: &BigFloat, orders: usize, logs: usize, prec: Precision) -> Vec<BigFloat> {
    let mut row = vec![BigFloat::from_i64(1, prec)];
    let mut inv_pow = BigFloat::from_i64(1, prec);
    for _ in 0..orders {
        inv_pow = &inv_pow * inv;
        let mut term = inv_pow.clone();
        for _ in 0..=logs {
            row.push(term.clone());
            term = &term * ln;
        }
    }
    row
}
