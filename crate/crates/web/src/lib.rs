//! wasm-bindgen entry points for the demo page in `www/`.
//!
//! Each function returns display text or an error message; all of them run
//! natively as well, which is how they are tested.

use nestsum::algebra::{shuffle, stuffle};
use nestsum::exact::{BigFloat, Precision};
use nestsum::expr::{self, Expr, Value};
use wasm_bindgen::prelude::*;

const MAX_DIGITS: u32 = 60;

fn format_value(v: &Value, digits: usize) -> String {
    match v {
        Value::Exact(r) => {
            let p = Precision::digits(digits as u32 + 5);
            format!("{r} ≈ {}", BigFloat::from_rational(r, p).to_fixed(digits))
        }
        Value::Integer(n) => n.to_string(),
        Value::Real(x) => x.to_fixed(digits),
        Value::Complex(z) => {
            let im = z.im.abs().to_fixed(digits);
            let sign = if z.im.is_negative() { '-' } else { '+' };
            format!("{}{sign}{im}i", z.re.to_fixed(digits))
        }
        Value::Check(c) => {
            let status = if c.passed() { "OK" } else { "FAIL" };
            format!("{status}: {} vs {} (tolerance {:e})", c.lhs.to_fixed(digits), c.rhs.to_fixed(digits), c.tolerance)
        }
        Value::ExactCheck { lhs, rhs } => {
            if lhs == rhs {
                format!("OK: {lhs}")
            } else {
                format!("FAIL: {lhs} ≠ {rhs}")
            }
        }
    }
}

/// Evaluate an expression such as `S[2,1](10)`, `H[0,1](0.5)` or `N_ADH(8)`.
#[wasm_bindgen]
pub fn evaluate(input: &str, digits: u32) -> Result<String, String> {
    let digits = digits.clamp(1, MAX_DIGITS);
    let e = expr::parse(input).map_err(|e| e.to_string())?;
    if let Expr::Moment { integrand: nestsum::polylog::MellinIntegrand::T, .. } = e {
        return Err("moments of T(x) are too slow for the page; use the command-line tool".into());
    }
    let v = expr::evaluate(&e, Precision::digits(digits.max(15) + 5)).map_err(|e| e.to_string())?;
    Ok(format_value(&v, digits as usize))
}

/// Stuffle product of two sums or shuffle product of two words.
#[wasm_bindgen]
pub fn product(left: &str, right: &str) -> Result<String, String> {
    let l = expr::parse(left).map_err(|e| e.to_string())?;
    let r = expr::parse(right).map_err(|e| e.to_string())?;
    match (l, r) {
        (Expr::Sum { index: u, arg: None }, Expr::Sum { index: v, arg: None }) => {
            let comb = stuffle(&u, &v).map_err(|e| e.to_string())?;
            Ok(comb.map_keys(|k| Expr::Sum { index: k.clone(), arg: None }.to_string()).to_string())
        }
        (Expr::Polylog { star: false, word: u, arg: None }, Expr::Polylog { star: false, word: v, arg: None }) => {
            match (u.standard_letters(), v.standard_letters()) {
                (Some(u), Some(v)) => Ok(shuffle(&u, &v)
                    .map_keys(|w| format!("H[{}]", w.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")))
                    .to_string()),
                _ => Err("shuffle products are formed for words over 0, 1, -1".into()),
            }
        }
        _ => Err("enter two sums like S[1,2] or two words like H[0,1], without arguments".into()),
    }
}

/// One-line summary of the basis counts at a weight.
#[wasm_bindgen]
pub fn counts(weight: u32) -> Result<String, String> {
    use nestsum::expr::CountFamily::*;
    if weight == 0 || weight > 12 {
        return Err("weight must be between 1 and 12".into());
    }
    let parts: Result<Vec<String>, String> = [All, A, D, H, Adh]
        .iter()
        .map(|f| f.count(weight).map(|n| format!("{} = {n}", f.name())).map_err(|e| e.to_string()))
        .collect();
    Ok(parts?.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluate_text() {
        assert_eq!(evaluate("S[1](3)", 15).unwrap(), "11/6 ≈ 1.83333333333333");
        assert_eq!(evaluate("H[0,1](0.5)", 10).unwrap(), "0.5822405265");
        assert_eq!(evaluate("N_ADH(8)", 15).unwrap(), "486");
        assert!(evaluate("S[1", 15).unwrap_err().contains("byte 3"));
    }

    #[test]
    fn products() {
        assert_eq!(product("S[1]", "S[2]").unwrap(), "S[1,2] + S[2,1] - S[3]");
        assert_eq!(product("H[1]", "H[0]").unwrap(), "H[0,1] + H[1,0]");
        assert!(product("S[1]", "H[0]").is_err());
    }

    #[test]
    fn count_line() {
        let s = counts(3).unwrap();
        assert!(s.starts_with("N_all = 18"), "{s}");
        assert!(counts(0).is_err());
    }
}
