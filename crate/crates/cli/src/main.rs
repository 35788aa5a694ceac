use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value as Json};

use nestsum::algebra::{reduce_to_basis, shuffle, stuffle, LinComb, SumIndex};
use nestsum::continuation::Parity;
use nestsum::exact::{BigFloat, ComplexBig, Precision, Rational};
use num_bigint::BigInt;
use num_traits::Zero;
use nestsum::expr::{self, Arg, CountFamily, EvalOptions, Expr, Query, Value};
use nestsum::polylog::{MellinIntegrand, Verification};
use nestsum::sums::{limit_to_infinity_general, LimitOutcome};
use nestsum::Error;

#[derive(Parser)]
#[command(name = "nestsum", version, about = "Nested harmonic sums, polylogarithms and their identities")]
struct Cli {
    /// Print one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Significant digits of decimal output; working precision follows.
    #[arg(long = "prec", value_name = "d", global = true, env = "NESTSUM_PREC", default_value_t = 15)]
    prec: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Upper {
    /// Upper limit (or moment, or complex argument for `continue`).
    #[arg(long = "N", value_name = "N", allow_hyphen_values = true)]
    n: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a sum, polylogarithm, moment, count or identity query.
    Eval {
        expr: String,
        #[command(flatten)]
        upper: Upper,
        /// Continue alternating sums from odd N.
        #[arg(long)]
        odd: bool,
    },
    /// The N → ∞ limit of a harmonic or generalized sum.
    Limit { expr: String },
    /// Stuffle product of two sums or shuffle product of two harmonic polylogarithm words.
    Product { left: String, right: String },
    /// Rewrite a harmonic sum in the Lyndon basis.
    Reduce { expr: String },
    /// Number of harmonic sums of a given weight.
    Count {
        /// Weight, or a query such as N_A(5).
        weight: String,
        /// Count the basis after algebraic, duplication and half-integer relations.
        #[arg(long)]
        adh: bool,
        #[arg(long, value_enum)]
        family: Option<Family>,
    },
    /// Check one of the built-in identities: eq7, eq9, eq18, eq27, dup.
    Verify {
        identity: String,
        #[command(flatten)]
        upper: Upper,
        /// Argument of eq18.
        #[arg(long)]
        x: Option<String>,
        /// Index of dup.
        #[arg(long, allow_hyphen_values = true)]
        a: Option<i64>,
    },
    /// Mellin moment ∫₀¹ x^N f(x) dx.
    Mellin {
        integrand: String,
        #[command(flatten)]
        upper: Upper,
    },
    /// A single harmonic sum at complex N.
    Continue {
        expr: String,
        #[command(flatten)]
        upper: Upper,
        #[arg(long)]
        odd: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    All,
    A,
    D,
    H,
    Adh,
}

/// Failures, split by exit code.
enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

struct Output {
    text: String,
    json: Map<String, Json>,
    ok: bool,
}

impl Output {
    fn new(text: String, json: Json) -> Self {
        let Json::Object(json) = json else { unreachable!("result objects") };
        Output { text, json, ok: true }
    }
}

struct Ctx {
    digits: usize,
    prec: Precision,
}

impl Ctx {
    fn fixed(&self, v: &BigFloat) -> String {
        v.to_fixed(self.digits)
    }

    fn complex(&self, z: &ComplexBig) -> String {
        let re = self.fixed(&z.re);
        let im = self.fixed(&z.im.abs());
        if z.im.is_zero() {
            re
        } else {
            format!("{re}{}{im}i", if z.im.is_negative() { '-' } else { '+' })
        }
    }
}

fn parse_expr(s: &str) -> Result<Expr, Failure> {
    expr::parse(s).map_err(Failure::Core)
}

fn upper_int(upper: &Upper) -> Result<Option<u64>, Failure> {
    upper
        .n
        .as_ref()
        .map(|s| s.trim().parse::<u64>().map_err(|_| Failure::Usage(format!("--N expects a non-negative integer, got `{s}`"))))
        .transpose()
}

fn with_upper(e: Expr, upper: &Upper) -> Result<Expr, Failure> {
    let Some(raw) = &upper.n else { return Ok(e) };
    let arg = expr::parse_arg(raw).map_err(|_| Failure::Usage(format!("--N: cannot read `{raw}`")))?;
    Ok(match e {
        Expr::Sum { index, arg: None } => Expr::Sum { index, arg: Some(arg) },
        Expr::SingleCyclotomic { l, m, n, arg: None } => Expr::SingleCyclotomic { l, m, n, arg: Some(arg) },
        Expr::Moment { integrand, n: None } => match arg {
            Arg::Int(n) => Expr::Moment { integrand, n: Some(n) },
            _ => return Err(Failure::Usage("the moment N must be a non-negative integer".into())),
        },
        Expr::Polylog { star, word, arg: None } => match arg {
            Arg::Int(n) => Expr::Polylog { star, word, arg: Some(Rational::from_integer(BigInt::from(n))) },
            Arg::Number { re, im } if im.is_zero() => Expr::Polylog { star, word, arg: Some(re) },
            _ => return Err(Failure::Usage("polylogarithms take a real argument".into())),
        },
        _ => return Err(Failure::Usage("--N given, but the expression already has an argument".into())),
    })
}

fn check_output(ctx: &Ctx, v: &Verification) -> Output {
    let delta = v.delta();
    let passed = v.passed();
    let text = if passed {
        format!("OK (|Δ| < {:e})", v.tolerance)
    } else {
        format!("FAIL (|Δ| = {delta:.3e}, tolerance {:e})", v.tolerance)
    };
    let mut o = Output::new(
        text,
        json!({
            "kind": "check",
            "passed": passed,
            "exact": false,
            "lhs": ctx.fixed(&v.lhs),
            "rhs": ctx.fixed(&v.rhs),
            "delta": format!("{delta:.3e}"),
            "tolerance": format!("{:e}", v.tolerance),
        }),
    );
    o.ok = passed;
    o
}

fn value_output(ctx: &Ctx, v: Value) -> Output {
    match v {
        Value::Exact(r) => Output::new(
            r.to_string(),
            json!({"kind": "exact", "value": r.to_string(), "decimal": ctx.fixed(&BigFloat::from_rational(&r, ctx.prec))}),
        ),
        Value::Integer(n) => Output::new(n.to_string(), json!({"kind": "integer", "value": n.to_string()})),
        Value::Real(x) => {
            let s = ctx.fixed(&x);
            Output::new(s.clone(), json!({"kind": "real", "value": s, "digits": ctx.digits}))
        }
        Value::Complex(z) => Output::new(
            ctx.complex(&z),
            json!({"kind": "complex", "re": ctx.fixed(&z.re), "im": ctx.fixed(&z.im), "digits": ctx.digits}),
        ),
        Value::Check(c) => check_output(ctx, &c),
        Value::ExactCheck { lhs, rhs } => {
            let passed = lhs == rhs;
            let text = if passed { "OK (exact)".to_string() } else { format!("FAIL ({lhs} ≠ {rhs})") };
            let mut o = Output::new(
                text,
                json!({"kind": "check", "passed": passed, "exact": true, "lhs": lhs.to_string(), "rhs": rhs.to_string()}),
            );
            o.ok = passed;
            o
        }
    }
}

fn lincomb_output<K>(comb: &LinComb<K>, text: String) -> Output
where
    K: Ord + Clone + nestsum::algebra::TermKey,
{
    let mut j = comb.to_json();
    j["kind"] = json!("lincomb");
    j["text"] = json!(text);
    Output::new(text, j)
}

fn sum_key(index: &SumIndex) -> String {
    Expr::Sum { index: index.clone(), arg: None }.to_string()
}

fn run(cli: &Cli, ctx: &Ctx) -> Result<Output, Failure> {
    match &cli.command {
        Command::Eval { expr, upper, odd } => {
            let e = with_upper(parse_expr(expr)?, upper)?;
            let opts = EvalOptions { parity: if *odd { Parity::Odd } else { Parity::Even } };
            Ok(value_output(ctx, expr::evaluate_with(&e, ctx.prec, &opts)?))
        }
        Command::Limit { expr } => {
            let index = match parse_expr(expr)? {
                Expr::Sum { index, arg: None | Some(Arg::Infinity) } => index,
                _ => return Err(Failure::Usage("limit expects a sum such as S[2,1] or S[2,1](inf)".into())),
            };
            let g = match &index {
                SumIndex::Harmonic(h) => h.into(),
                SumIndex::General(g) => g.clone(),
                SumIndex::Cyclotomic(_) => return Err(Error::Unsupported("limits of cyclotomic sums".into()).into()),
            };
            match limit_to_infinity_general(&g, ctx.prec) {
                LimitOutcome::Converged(r) => {
                    let s = ctx.fixed(&r.value);
                    Ok(Output::new(
                        s.clone(),
                        json!({
                            "kind": "limit",
                            "value": s,
                            "digits": ctx.digits,
                            "method": r.method,
                            "terms_used": r.terms_used,
                            "error_estimate": format!("{:.3e}", r.error_estimate()),
                        }),
                    ))
                }
                LimitOutcome::Divergent(d) => Err(Error::Domain(d.to_string()).into()),
            }
        }
        Command::Product { left, right } => match (parse_expr(left)?, parse_expr(right)?) {
            (Expr::Sum { index: u, arg: None }, Expr::Sum { index: v, arg: None }) => {
                let comb = stuffle(&u, &v)?;
                let text = comb.map_keys(sum_key).to_string();
                Ok(lincomb_output(&comb, text))
            }
            (Expr::Polylog { star: false, word: u, arg: None }, Expr::Polylog { star: false, word: v, arg: None }) => {
                let (Some(u), Some(v)) = (u.standard_letters(), v.standard_letters()) else {
                    return Err(Error::Unsupported("shuffle products are formed for words over 0, 1, -1".into()).into());
                };
                let comb = shuffle(&u, &v);
                let text = comb.map_keys(|w| format!("H[{}]", w.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","))).to_string();
                Ok(lincomb_output(&comb, text))
            }
            _ => Err(Failure::Usage("product expects two sums like S[1,2] or two words like H[0,1], without arguments".into())),
        },
        Command::Reduce { expr } => match parse_expr(expr)? {
            Expr::Sum { index: SumIndex::Harmonic(h), arg: None } => {
                let poly = reduce_to_basis(&h)?;
                let text = poly.to_string();
                Ok(lincomb_output(&poly, text))
            }
            _ => Err(Failure::Usage("reduce expects a harmonic sum without argument, such as S[2,1,1]".into())),
        },
        Command::Count { weight, adh, family } => {
            let (family, weight) = match weight.trim().parse::<u32>() {
                Ok(w) => {
                    let f = match (family, adh) {
                        (Some(_), true) => return Err(Failure::Usage("use either --adh or --family".into())),
                        (_, true) | (Some(Family::Adh), _) => CountFamily::Adh,
                        (Some(Family::A), _) => CountFamily::A,
                        (Some(Family::D), _) => CountFamily::D,
                        (Some(Family::H), _) => CountFamily::H,
                        (Some(Family::All), _) | (None, false) => CountFamily::All,
                    };
                    (f, w)
                }
                Err(_) => match parse_expr(weight)? {
                    Expr::Count { family, weight } => (family, weight),
                    _ => return Err(Failure::Usage("count expects a weight or a query such as N_ADH(8)".into())),
                },
            };
            let n = family.count(weight)?;
            Ok(Output::new(
                n.to_string(),
                json!({"kind": "integer", "value": n.to_string(), "family": family.name(), "weight": weight}),
            ))
        }
        Command::Verify { identity, upper, x, a } => {
            let need_n = || upper_int(upper)?.ok_or_else(|| Failure::Usage(format!("{identity} needs --N")));
            let query = match identity.as_str() {
                "eq7" => Query::MellinRepresentation(need_n()?),
                "eq9" => Query::AlternatingLimit,
                "eq18" => {
                    let x = x.as_ref().ok_or_else(|| Failure::Usage("eq18 needs --x".into()))?;
                    let x = nestsum::exact::parse_rational(x).map_err(|_| Failure::Usage(format!("--x: cannot read `{x}`")))?;
                    Query::ArgumentTransform(x)
                }
                "eq27" => Query::TMoment(need_n()?),
                "dup" => Query::Duplication { a: a.ok_or_else(|| Failure::Usage("dup needs --a".into()))?, n: need_n()? },
                other => match parse_expr(other)? {
                    Expr::Query(q) => q,
                    _ => return Err(Failure::Usage(format!("unknown identity `{other}`; use eq7, eq9, eq18, eq27 or dup"))),
                },
            };
            Ok(value_output(ctx, expr::evaluate(&Expr::Query(query), ctx.prec)?))
        }
        Command::Mellin { integrand, upper } => {
            let e = match parse_expr(&format!("M[{integrand}]")) {
                Ok(e) => e,
                Err(_) => parse_expr(integrand)?,
            };
            let e = match e {
                Expr::Moment { .. } => with_upper(e, upper)?,
                _ => return Err(Failure::Usage("mellin expects an integrand such as H[0,1,1](x)/(x+1) or T(x)".into())),
            };
            if let Expr::Moment { integrand: MellinIntegrand::T, n: Some(n) } = &e {
                if *n > 64 {
                    return Err(Error::Unsupported("moments of T(x) are computed for N ≤ 64".into()).into());
                }
            }
            Ok(value_output(ctx, expr::evaluate(&e, ctx.prec)?))
        }
        Command::Continue { expr, upper, odd } => {
            let e = with_upper(parse_expr(expr)?, upper)?;
            let e = match e {
                Expr::Sum { index: SumIndex::Harmonic(ref h), arg: Some(ref a) } if h.depth() == 1 => match a {
                    Arg::Infinity => return Err(Failure::Usage("continue needs a finite argument".into())),
                    Arg::Int(n) => Expr::Sum { index: SumIndex::Harmonic(h.clone()), arg: Some(Arg::Number { re: Rational::from_integer(BigInt::from(*n)), im: Rational::zero() }) },
                    _ => e.clone(),
                },
                _ => return Err(Failure::Usage("continue expects a single sum with an argument, such as S[1](0.5+2i)".into())),
            };
            let opts = EvalOptions { parity: if *odd { Parity::Odd } else { Parity::Even } };
            let v = expr::evaluate_with(&e, ctx.prec, &opts)?;
            Ok(value_output(ctx, v))
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Eval { .. } => "eval",
        Command::Limit { .. } => "limit",
        Command::Product { .. } => "product",
        Command::Reduce { .. } => "reduce",
        Command::Count { .. } => "count",
        Command::Verify { .. } => "verify",
        Command::Mellin { .. } => "mellin",
        Command::Continue { .. } => "continue",
    }
}

fn error_json(f: &Failure) -> (Json, u8) {
    match f {
        Failure::Usage(m) => (json!({"kind": "usage", "message": m}), 2),
        Failure::Core(e) => {
            let kind = match e {
                Error::Parse(_) => "parse",
                Error::Syntax { .. } => "syntax",
                Error::Domain(_) => "domain",
                Error::WeightTooLarge { .. } => "weight",
                Error::MixedFamilies(..) => "mixed_families",
                Error::Singular(_) => "singular",
                Error::Pole { .. } => "pole",
                Error::Unsupported(_) => "unsupported",
            };
            let mut j = json!({"kind": kind, "message": e.to_string()});
            if let Error::Syntax { offset, expected } = e {
                j["offset"] = json!(offset);
                j["expected"] = json!(expected);
            }
            let code = if matches!(e, Error::Parse(_) | Error::Syntax { .. }) { 2 } else { 1 };
            (j, code)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    if cli.prec == 0 || cli.prec > 1000 {
        eprintln!("error: --prec must be between 1 and 1000");
        return ExitCode::from(2);
    }
    let digits = cli.prec as usize;
    let ctx = Ctx { digits, prec: Precision::digits(cli.prec.max(15) + 5) };
    let name = command_name(&cli.command);
    let mut stdout = std::io::stdout().lock();
    match run(&cli, &ctx) {
        Ok(out) => {
            let code = if out.ok { 0 } else { 1 };
            if cli.json {
                let mut j = Map::new();
                j.insert("command".into(), json!(name));
                j.insert("ok".into(), json!(out.ok));
                j.insert("result".into(), Json::Object(out.json));
                let _ = writeln!(stdout, "{}", Json::Object(j));
            } else {
                let _ = writeln!(stdout, "{}", out.text);
            }
            ExitCode::from(code)
        }
        Err(f) => {
            let (err, code) = error_json(&f);
            if cli.json {
                let _ = writeln!(stdout, "{}", json!({"command": name, "ok": false, "error": err}));
            } else {
                eprintln!("error: {}", err["message"].as_str().unwrap_or("unknown"));
            }
            ExitCode::from(code)
        }
    }
}
