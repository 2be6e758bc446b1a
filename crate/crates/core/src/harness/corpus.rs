//! Built-in test functions. All live on [0, 2] and carry their analytic
//! second derivative; the x^s family (2 < s < 3) keeps |f''|^q inside the
//! fractional-power convexity classes the bounds target.

use crate::bounds::FunctionSpec;

pub const FUNCTION_IDS: [&str; 8] = [
    "quadratic",
    "cubic",
    "quartic",
    "exp",
    "pow_2_25",
    "pow_2_5",
    "pow_2_75",
    "linear",
];

const B_STAR: f64 = 2.0;

pub fn builtin_corpus() -> Vec<FunctionSpec> {
    let power = |s: f64| move |x: f64| x.powf(s);
    let specs = vec![
        FunctionSpec::new("quadratic", B_STAR, |x| x * x, |_| 2.0),
        FunctionSpec::new("cubic", B_STAR, |x| x * x * x, |x| 6.0 * x),
        FunctionSpec::new("quartic", B_STAR, |x| x * x * x * x, |x| 12.0 * x * x),
        FunctionSpec::new("exp", B_STAR, f64::exp, f64::exp),
        FunctionSpec::new("pow_2_25", B_STAR, power(2.25), move |x| {
            2.8125 * x.powf(0.25)
        }),
        FunctionSpec::new("pow_2_5", B_STAR, power(2.5), |x| 3.75 * x.sqrt()),
        FunctionSpec::new("pow_2_75", B_STAR, power(2.75), move |x| {
            4.8125 * x.powf(0.75)
        }),
        FunctionSpec::new("linear", B_STAR, |x| 2.0 * x + 1.0, |_| 0.0),
    ];
    specs
        .into_iter()
        .map(|s| s.expect("corpus constants are valid"))
        .collect()
}
