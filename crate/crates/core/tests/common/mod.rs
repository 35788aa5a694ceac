//! Generators shared by the integration tests.
#![allow(dead_code)]

use proptest::prelude::*;

use nestsum::algebra::HarmonicIndex;

fn pick(xs: &'static [&'static str]) -> impl Strategy<Value = String> + Clone {
    proptest::sample::select(xs).prop_map(str::to_string)
}

fn join(v: Vec<String>) -> String {
    v.join(",")
}

fn harmonic() -> impl Strategy<Value = String> {
    proptest::collection::vec(prop_oneof![-4i64..=-1, 1i64..=4], 1..=4)
        .prop_map(|v| join(v.into_iter().map(|a| a.to_string()).collect()))
}

fn complex_arg() -> impl Strategy<Value = String> {
    (pick(&["0", "0.5", "-1/3", "2", "7.25"]), pick(&["1", "-2", "0.5", "1/3"]))
        .prop_map(|(re, im)| {
            let im = if im.starts_with('-') { im } else { format!("+{im}") };
            if re == "0" { format!("{}i", im.trim_start_matches('+')) } else { format!("{re}{im}i") }
        })
}

fn sum_arg() -> impl Strategy<Value = String> {
    prop_oneof![
        Just(String::new()),
        (0u64..200).prop_map(|n| format!("({n})")),
        Just("(inf)".to_string()),
        complex_arg().prop_map(|z| format!("({z})")),
    ]
}

fn sum() -> impl Strategy<Value = String> {
    let weights = pick(&["0.5", "-1", "1/3", "2", "-0.25", "3/7"]);
    prop_oneof![
        (harmonic(), sum_arg()).prop_map(|(i, a)| format!("S[{i}]{a}")),
        (proptest::collection::vec((1u32..=4, weights), 1..=3), 0u64..50).prop_map(|(l, n)| {
            let idx = join(l.iter().map(|(e, _)| e.to_string()).collect());
            let w = join(l.into_iter().map(|(_, w)| w).collect());
            format!("S[{idx}]({{{w}}};{n})")
        }),
        (proptest::collection::vec((1u32..=5, 0u32..5, 1u32..=3), 1..=3), 0u64..30).prop_map(|(l, n)| {
            let t: Vec<String> = l.into_iter().map(|(a, b, c)| format!("({},{},{c})", a, b % a)).collect();
            format!("S[{}]({n})", join(t))
        }),
        (1u32..=4, 0u32..4, prop_oneof![-3i64..=-1, 1i64..=3], 0u64..20)
            .prop_map(|(l, m, n, up)| format!("S0[({l},{},{n})]({up})", m % l)),
    ]
}

fn polylog() -> impl Strategy<Value = String> {
    let letter = pick(&["0", "1", "-1", "{4,1}", "{3,0}", "{6,1}", "0.5", "-2", "1/3"]);
    let x = pick(&["0.3", "0.5", "1/3", "0.25", "0.9"]);
    prop_oneof![
        (proptest::collection::vec(letter.clone(), 0..=5), proptest::option::of(x.clone())).prop_map(|(w, x)| {
            format!("H[{}]{}", join(w), x.map(|x| format!("({x})")).unwrap_or_default())
        }),
        (proptest::collection::vec(prop_oneof![letter, pick(&["w12", "w13", "w17", "w18"])], 1..=4), x)
            .prop_map(|(w, x)| format!("H*[{}]({x})", join(w))),
    ]
}

fn moment() -> impl Strategy<Value = String> {
    let integrand = pick(&[
        "x^3",
        "x",
        "1/(x+1)",
        "H[0,1,1](x)/(x+1)",
        "x*H[-1](x)/(x*(x-1/3))",
        "H[1,0](x)",
        "x^2*H[0](x)/(x+2)",
        "T(x)",
    ]);
    (integrand, proptest::option::of(0u64..10))
        .prop_map(|(f, n)| format!("M[{f}]{}", n.map(|n| format!("({n})")).unwrap_or_default()))
}

fn other() -> impl Strategy<Value = String> {
    prop_oneof![
        (pick(&["N_all", "N_A", "N_D", "N_H", "N_ADH"]), 1u32..=10).prop_map(|(f, w)| format!("{f}({w})")),
        (1u64..10).prop_map(|n| format!("eq7({n})")),
        Just("eq9".to_string()),
        pick(&["0.1", "0.3", "1/7"]).prop_map(|x| format!("eq18({x})")),
        (0u64..5).prop_map(|n| format!("eq27({n})")),
        (prop_oneof![-3i64..=-1, 1i64..=3], 1u64..20).prop_map(|(a, n)| format!("dup({a},{n})")),
    ]
}

pub fn expression() -> impl Strategy<Value = String> {
    prop_oneof![3 => sum(), 3 => polylog(), 1 => moment(), 1 => other()]
}

/// Signed harmonic indices with entries up to 3 in modulus.
pub fn harmonic_index(max_weight: u32, max_depth: usize) -> impl Strategy<Value = HarmonicIndex> {
    proptest::collection::vec((1i64..=3, any::<bool>()), 1..=max_depth).prop_filter_map("weight", move |v| {
        let w: Vec<i64> = v.into_iter().map(|(a, neg)| if neg { -a } else { a }).collect();
        let idx = HarmonicIndex::new(w).ok()?;
        (idx.weight() <= max_weight).then_some(idx)
    })
}
