//! Reduce a coupling and print it in every output format.
//!
//! cargo run --example reduce -- "[Y[2](a) x [Y[1](c) x Y[1](d)][2]][0]"

use cartensor::parser::parse;
use cartensor::reduce::reduce;
use cartensor::render::{result_json, result_latex, result_text};

fn main() {
    let src = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "[Y[2](a) x [Y[1](c) x Y[1](d)][2]][0]".into());
    let expr = match parse(&src) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("{}", e.diagnostic(&src));
            std::process::exit(2);
        }
    };
    let r = reduce(&expr).expect("parsed expressions satisfy the triangle rule");

    println!("input   {expr}");
    println!("rank    {}  parity {}", r.rank(), r.parity.as_str());
    for step in &r.factor_trace {
        println!("  {step}");
    }
    println!("text    {}", result_text(&r));
    println!("latex   {}", result_latex(&r));
    println!("json    {}", result_json(&r));
}
