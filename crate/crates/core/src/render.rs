//! Text, LaTeX and JSON output.
//!
//! The text form is also an input format: [`crate::scalar::parse_scalar`]
//! reads back any scalar result printed by [`result_text`].

use std::cmp::Reverse;

use num_traits::{One, Signed};
use serde_json::{json, Value};

use crate::coeff::{CoeffAtom, CoeffSum, Rational};
use crate::reduce::{CouplingExpr, FactorStep, ReductionResult};
use crate::scalar::ScalarPoly;
use crate::tensor::{Leg, Monomial, TensorPoly};

/// Display order: higher total degree first, then canonical order.
fn display_order<'a, T>(it: impl Iterator<Item = (&'a Monomial, T)>) -> Vec<(&'a Monomial, T)> {
    let mut v: Vec<_> = it.collect();
    v.sort_by_key(|(m, _)| Reverse(degree(m)));
    v
}

fn degree(m: &Monomial) -> u32 {
    m.dot_degree() + 3 * m.boxes.len() as u32 + m.vectors.len() as u32 + m.eps.len() as u32
}

fn leg_text(l: &Leg) -> String {
    match l {
        Leg::Slot(s) => format!("i{}", s + 1),
        Leg::Vec(v) => v.to_string(),
    }
}

/// Factors of a monomial joined by `*`; empty for the constant monomial.
pub fn monomial_text(m: &Monomial) -> String {
    let mut parts = Vec::new();
    for ((a, b), e) in &m.dots {
        if *e == 1 {
            parts.push(format!("({a}.{b})"));
        } else {
            parts.push(format!("({a}.{b})^{e}"));
        }
    }
    for [a, b, c] in &m.boxes {
        parts.push(format!("box({a},{b},{c})"));
    }
    for (v, s) in &m.vectors {
        parts.push(format!("{v}[i{}]", s + 1));
    }
    for (s, t) in &m.deltas {
        parts.push(format!("delta[i{},i{}]", s + 1, t + 1));
    }
    for e in &m.eps {
        parts.push(format!("eps[{}]", e.iter().map(leg_text).collect::<Vec<_>>().join(",")));
    }
    parts.join("*")
}

fn join_signed(terms: impl IntoIterator<Item = (bool, String)>) -> String {
    let mut out = String::new();
    for (i, (neg, body)) in terms.into_iter().enumerate() {
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn rational_term(c: &Rational, m: &Monomial) -> (bool, String) {
    let mono = monomial_text(m);
    let mag = c.abs();
    let body = match (mono.is_empty(), mag.is_one()) {
        (true, _) => mag.to_string(),
        (false, true) => mono,
        (false, false) => format!("{mag}*{mono}"),
    };
    (c.is_negative(), body)
}

/// Rational-coefficient tensor polynomial.
pub fn poly_text(p: &TensorPoly) -> String {
    join_signed(display_order(p.terms()).into_iter().map(|(m, c)| rational_term(c, m)))
}

/// Exact scalar polynomial with possibly multi-term coefficients.
pub fn scalar_text(p: &ScalarPoly) -> String {
    join_signed(display_order(p.terms()).into_iter().map(|(m, c)| sum_term(c, m)))
}

fn sum_term(c: &CoeffSum, m: &Monomial) -> (bool, String) {
    let mono = monomial_text(m);
    if let Some(a) = c.as_atom() {
        let s = a.to_string();
        let (neg, mag) = match s.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, s),
        };
        return match (mono.is_empty(), mag == "1") {
            (true, _) => (neg, mag),
            (false, true) => (neg, mono),
            (false, false) => (neg, format!("{mag}*{mono}")),
        };
    }
    if mono.is_empty() {
        (false, format!("({c})"))
    } else {
        (false, format!("({c})*{mono}"))
    }
}

/// Overall coefficient, made positive, and the primitive polynomial.
pub fn display_factors(r: &ReductionResult) -> (CoeffAtom, TensorPoly) {
    let (c, p) = r.factored();
    if c.rat().is_negative() {
        (c.neg(), p.scale(&-Rational::one()))
    } else {
        (c, p)
    }
}

/// `sqrt(3)/(8*sqrt(2)*pi^(3/2)) * (3*(a.c)*(b.c) - (a.b))`
pub fn result_text(r: &ReductionResult) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let (c, p) = display_factors(r);
    let inner = poly_text(&p);
    let single = p.len() == 1;
    let constant = single
        && p.terms()
            .next()
            .map(|(m, _)| *m == Monomial::default())
            .unwrap_or(false);
    if constant {
        return c.to_string();
    }
    if c == CoeffAtom::one() {
        return inner;
    }
    let cs = c.to_string();
    if cs == "-1" {
        return if single {
            format!("-{inner}")
        } else {
            format!("-({inner})")
        };
    }
    if single {
        format!("{cs} * {inner}")
    } else {
        format!("{cs} * ({inner})")
    }
}

fn latex_atom(a: &CoeffAtom) -> String {
    let p = a.display_parts();
    let mut num = Vec::new();
    let mut den = Vec::new();
    if !p.num.is_one() {
        num.push(p.num.to_string());
    }
    if !p.sqrt_num.is_one() {
        num.push(format!("\\sqrt{{{}}}", p.sqrt_num));
    }
    if p.imaginary {
        num.push("i".into());
    }
    if !p.den.is_one() {
        den.push(p.den.to_string());
    }
    if !p.sqrt_den.is_one() {
        den.push(format!("\\sqrt{{{}}}", p.sqrt_den));
    }
    let pi = |k: i32| {
        if k == 2 {
            "\\pi".to_string()
        } else if k % 2 == 0 {
            format!("\\pi^{{{}}}", k / 2)
        } else {
            format!("\\pi^{{{k}/2}}")
        }
    };
    if p.pi_half > 0 {
        num.push(pi(p.pi_half));
    } else if p.pi_half < 0 {
        den.push(pi(-p.pi_half));
    }
    let sign = if p.negative { "-" } else { "" };
    let n = if num.is_empty() { "1".to_string() } else { num.join(" ") };
    if den.is_empty() {
        format!("{sign}{n}")
    } else {
        format!("{sign}\\frac{{{n}}}{{{}}}", den.join(" "))
    }
}

fn latex_vec(v: &crate::tensor::VectorSymbol) -> String {
    format!("\\mathbf{{{v}}}")
}

fn latex_leg(l: &Leg) -> String {
    match l {
        Leg::Slot(s) => format!("i_{{{}}}", s + 1),
        Leg::Vec(v) => latex_vec(v),
    }
}

fn latex_monomial(m: &Monomial) -> String {
    let mut parts = Vec::new();
    for ((a, b), e) in &m.dots {
        let d = format!("({} \\cdot {})", latex_vec(a), latex_vec(b));
        parts.push(if *e == 1 { d } else { format!("{d}^{{{e}}}") });
    }
    for [a, b, c] in &m.boxes {
        parts.push(format!(
            "{} \\cdot ({} \\times {})",
            latex_vec(a),
            latex_vec(b),
            latex_vec(c)
        ));
    }
    for (v, s) in &m.vectors {
        parts.push(format!("{}_{{i_{{{}}}}}", latex_vec(v), s + 1));
    }
    for (s, t) in &m.deltas {
        parts.push(format!("\\delta_{{i_{{{}}} i_{{{}}}}}", s + 1, t + 1));
    }
    for e in &m.eps {
        parts.push(format!(
            "\\varepsilon_{{{}}}",
            e.iter().map(latex_leg).collect::<Vec<_>>().join(" ")
        ));
    }
    parts.join(" ")
}

/// `[Y^{2}(\mathbf{a}) \otimes Y^{1}(\mathbf{b})]^{1}`
pub fn expr_latex(e: &CouplingExpr) -> String {
    match e {
        CouplingExpr::Harmonic { l, v } => format!("Y^{{{l}}}({})", latex_vec(v)),
        CouplingExpr::Couple { left, right, l } => {
            format!("[{} \\otimes {}]^{{{l}}}", expr_latex(left), expr_latex(right))
        }
    }
}

pub fn result_latex(r: &ReductionResult) -> String {
    let lhs = expr_latex(&r.expr);
    if r.is_zero() {
        return format!("{lhs} = 0");
    }
    let (c, p) = display_factors(r);
    let terms: Vec<(bool, String)> = display_order(p.terms())
        .into_iter()
        .map(|(m, k)| {
            let mono = latex_monomial(m);
            let mag = k.abs();
            let body = match (mono.is_empty(), mag.is_one()) {
                (true, _) => mag.to_string(),
                (false, true) => mono,
                (false, false) => format!("{mag} {mono}"),
            };
            (k.is_negative(), body)
        })
        .collect();
    let single = terms.len() == 1;
    let inner = join_signed(terms);
    let cl = latex_atom(&c);
    let rhs = if inner == "1" {
        cl
    } else if cl == "1" {
        inner
    } else if single {
        format!("{cl} {inner}")
    } else {
        format!("{cl} \\left\\{{ {inner} \\right\\}}")
    };
    format!("{lhs} = {rhs}")
}

fn step_text(s: &FactorStep) -> String {
    match s {
        FactorStep::Even { l1, l2, l3 } => format!("q({l1},{l2},{l3})"),
        FactorStep::Odd { l1, l2, l3 } => format!("r({l1},{l2},{l3})"),
        FactorStep::Scalar { rank } => format!("S({rank})"),
        FactorStep::CartesianRescale { rank } => format!("n({rank})"),
    }
}

pub fn result_json(r: &ReductionResult) -> Value {
    let terms: Vec<Value> = r
        .poly
        .terms()
        .map(|(m, c)| {
            json!({
                "coeff": r.prefactor.scale(c).to_json(),
                "dots": m.dots.iter().map(|((a, b), e)| json!([a.name(), b.name(), e])).collect::<Vec<_>>(),
                "boxes": m.boxes.iter().map(|b| json!([b[0].name(), b[1].name(), b[2].name()])).collect::<Vec<_>>(),
                "free_slots": {
                    "vectors": m.vectors.iter().map(|(v, s)| json!([v.name(), s])).collect::<Vec<_>>(),
                    "deltas": m.deltas.iter().map(|(s, t)| json!([s, t])).collect::<Vec<_>>(),
                    "eps": m.eps.iter().map(|e| e.iter().map(|l| match l {
                        Leg::Slot(s) => json!(s),
                        Leg::Vec(v) => json!(v.name()),
                    }).collect::<Vec<_>>()).collect::<Vec<_>>(),
                },
            })
        })
        .collect();
    json!({
        "schema": 1,
        "expr": r.expr.to_string(),
        "rank": r.rank(),
        "parity": r.parity.as_str(),
        "prefactor": r.prefactor.to_json(),
        "factor_trace": r.factor_trace.iter().map(|f| json!({
            "step": step_text(&f.step),
            "factor": f.factor.to_json(),
            "text": f.factor.to_string(),
        })).collect::<Vec<_>>(),
        "text": result_text(r),
        "terms": terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduce::reduce;
    use crate::scalar::parse_scalar;

    fn y(l: u32, v: &str) -> CouplingExpr {
        CouplingExpr::harmonic(l, v)
    }

    #[test]
    fn scalar_text_round_trips() {
        let e = CouplingExpr::couple(
            CouplingExpr::couple(y(1, "a"), y(1, "b"), 2),
            CouplingExpr::couple(y(1, "c"), y(1, "c"), 2),
            0,
        );
        let r = reduce(&e).unwrap();
        let text = result_text(&r);
        assert_eq!(parse_scalar(&text).unwrap(), r.to_scalar_poly().unwrap(), "{text}");
    }

    #[test]
    fn tensor_text_uses_free_indices() {
        let r = reduce(&y(1, "a")).unwrap();
        assert_eq!(result_text(&r), "sqrt(3)/(2*pi^(1/2)) * a[i1]");
        assert_eq!(result_text(&reduce(&y(0, "a")).unwrap()), "1/(2*pi^(1/2))");
    }

    #[test]
    fn latex_and_json_shapes() {
        let e = CouplingExpr::couple(y(1, "a"), y(1, "b"), 0);
        let r = reduce(&e).unwrap();
        let l = result_latex(&r);
        assert!(
            l.starts_with("[Y^{1}(\\mathbf{a}) \\otimes Y^{1}(\\mathbf{b})]^{0} = "),
            "{l}"
        );
        let j = result_json(&r);
        assert_eq!(j["schema"], 1);
        assert_eq!(j["rank"], 0);
        assert_eq!(j["terms"].as_array().unwrap().len(), 1);
        assert_eq!(j["terms"][0]["dots"][0], json!(["a", "b", 1]));
    }
}
