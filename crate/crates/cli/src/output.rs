//! Text and JSON renderers. Everything printed here is deterministic:
//! collections are pre-sorted by the core library and JSON objects render
//! with sorted keys.

use std::fmt::Write as _;

use serde_json::{json, Value};

use liouville_core::diffpoly::DifferentialPolynomial;
use liouville_core::kovacic::{
    Classification, Decomposition, DecompositionKind, EquationInput, Sign, Signs, SurveyEntry,
};
use liouville_core::laurent::LaurentPolynomial;
use liouville_core::pipeline::{
    CandidateDetail, SpectralSystem, Verdict, VerdictStatus,
};

fn sign_value(s: Sign) -> Value {
    json!(s.to_string())
}

fn signs_values(signs: Signs) -> (Value, Value) {
    let s0 = match signs.s0 {
        Some(s) => sign_value(s),
        None => Value::Null,
    };
    (sign_value(signs.s_inf), s0)
}

fn finish(mut obj: Value, timing: Option<f64>) -> String {
    if let (Some(t), Value::Object(map)) = (timing, &mut obj) {
        map.insert("timings".into(), json!({ "total_seconds": t }));
    }
    format!("{}\n", serde_json::to_string_pretty(&obj).expect("serializable"))
}

pub fn json_classify(r: i64, m: i64, class: Classification, timing: Option<f64>) -> String {
    finish(
        json!({
            "command": "classify",
            "input": { "r": r, "m": m },
            "class": class.to_string(),
        }),
        timing,
    )
}

fn decomposition_value(dec: &Decomposition) -> Value {
    let mut v = json!({
        "case": dec.case_number(),
        "p": dec.p,
        "c": dec.c.to_string(),
        "A": dec.sqrt_inf.to_string(),
        "B": dec.residue.to_string(),
        "L": dec.l.to_string(),
    });
    let map = v.as_object_mut().unwrap();
    match &dec.kind {
        DecompositionKind::Case1 { pole1 } => {
            map.insert("a".into(), json!(pole1.to_string()));
        }
        DecompositionKind::Case2 { pole2, pole1 } => {
            map.insert("a".into(), json!(pole1.to_string()));
            map.insert("b".into(), json!(pole2.to_string()));
        }
        DecompositionKind::Case3 { sqrt_zero } => {
            map.insert("q".into(), json!(dec.q));
            map.insert("R".into(), json!(sqrt_zero.to_string()));
        }
    }
    v
}

pub fn json_decompose(dec: &Decomposition, timing: Option<f64>) -> String {
    finish(
        json!({
            "command": "decompose",
            "input": dec.l.to_string(),
            "decomposition": decomposition_value(dec),
        }),
        timing,
    )
}

pub fn text_decompose(dec: &Decomposition) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "case: {}", dec.case_number());
    let _ = writeln!(out, "p: {}", dec.p);
    let _ = writeln!(out, "c: {}", dec.c);
    let _ = writeln!(out, "A: {}", dec.sqrt_inf);
    let _ = writeln!(out, "B: {}", dec.residue);
    match &dec.kind {
        DecompositionKind::Case1 { pole1 } => {
            let _ = writeln!(out, "a: {pole1}");
        }
        DecompositionKind::Case2 { pole2, pole1 } => {
            let _ = writeln!(out, "b: {pole2}");
            let _ = writeln!(out, "a: {pole1}");
        }
        DecompositionKind::Case3 { sqrt_zero } => {
            let _ = writeln!(out, "q: {}", dec.q);
            let _ = writeln!(out, "R: {sqrt_zero}");
        }
    }
    let _ = writeln!(out, "L: {}", dec.l);
    out
}

fn survey_entry_value(entry: &SurveyEntry) -> Value {
    let (s_inf, s0) = signs_values(entry.signs);
    match &entry.outcome {
        Ok(c) => json!({
            "s_inf": s_inf,
            "s0": s0,
            "d": c.d,
            "lambda": c.lambda.to_string(),
            "omega": c.omega.to_string(),
            "outcome": "admissible",
        }),
        Err(reason) => json!({
            "s_inf": s_inf,
            "s0": s0,
            "outcome": format!("inadmissible: {reason}"),
        }),
    }
}

pub fn json_candidates(dec: &Decomposition, survey: &[SurveyEntry], timing: Option<f64>) -> String {
    finish(
        json!({
            "command": "candidates",
            "input": dec.l.to_string(),
            "case": dec.case_number(),
            "candidates": survey.iter().map(survey_entry_value).collect::<Vec<_>>(),
        }),
        timing,
    )
}

pub fn text_candidates(dec: &Decomposition, survey: &[SurveyEntry]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "case: {}", dec.case_number());
    for entry in survey {
        match &entry.outcome {
            Ok(c) => {
                let _ = writeln!(
                    out,
                    "{}: d={} lambda={} omega={}",
                    entry.signs, c.d, c.lambda, c.omega
                );
            }
            Err(reason) => {
                let _ = writeln!(out, "{}: inadmissible ({reason})", entry.signs);
            }
        }
    }
    out
}

pub fn json_delta_universal(d: usize, poly: &DifferentialPolynomial, timing: Option<f64>) -> String {
    finish(
        json!({
            "command": "delta",
            "input": { "universal": true, "d": d },
            "delta": poly.to_string(),
            "terms": poly.term_count(),
        }),
        timing,
    )
}

pub fn json_delta_evaluated(d: usize, value: &LaurentPolynomial, timing: Option<f64>) -> String {
    finish(
        json!({
            "command": "delta",
            "input": { "universal": false, "d": d },
            "delta": value.to_string(),
        }),
        timing,
    )
}

fn detail_value(detail: &CandidateDetail) -> Value {
    match detail {
        CandidateDetail::Solved { d, lambda, omega, p } => json!({
            "d": d,
            "lambda": lambda.to_string(),
            "omega": omega.to_string(),
            "P": p.to_string(),
            "outcome": "solved",
        }),
        CandidateDetail::NoPolynomialSolution { d, lambda, omega } => json!({
            "d": d,
            "lambda": lambda.to_string(),
            "omega": omega.to_string(),
            "outcome": "no polynomial solution",
        }),
        CandidateDetail::Inadmissible(reason) => json!({
            "outcome": format!("inadmissible: {reason}"),
        }),
    }
}

pub fn json_solve(eq: &EquationInput, verdict: &Verdict, d_max: usize, timing: Option<f64>) -> String {
    let (status, extra): (&str, Value) = match &verdict.status {
        VerdictStatus::Integrable(sols) => (
            "integrable",
            json!(sols
                .iter()
                .map(|s| {
                    let (s_inf, s0) = signs_values(s.signs);
                    let mut v = json!({
                        "variable": s.variable.to_string(),
                        "s_inf": s_inf,
                        "s0": s0,
                        "d": s.d,
                        "lambda": s.lambda.to_string(),
                        "P": s.p.to_string(),
                        "omega": s.omega.to_string(),
                        "antiderivative": s.antiderivative.to_string(),
                    });
                    if let Some(note) = s.pullback_note() {
                        v.as_object_mut().unwrap().insert("pullback".into(), json!(note));
                    }
                    v
                })
                .collect::<Vec<_>>()),
        ),
        VerdictStatus::NotIntegrableUpTo(d) => ("not-integrable-up-to", json!(d)),
        VerdictStatus::EmptyClass => ("empty-class", Value::Null),
        VerdictStatus::NeedsExtension(reason) => ("needs-extension", json!(reason)),
    };
    let candidates: Vec<Value> = verdict
        .candidates_examined
        .iter()
        .map(|rep| {
            let (s_inf, s0) = signs_values(rep.signs);
            let mut v = detail_value(&rep.detail);
            let map = v.as_object_mut().unwrap();
            map.insert("variable".into(), json!(rep.variable.to_string()));
            map.insert("s_inf".into(), s_inf);
            map.insert("s0".into(), s0);
            v
        })
        .collect();
    let verdict_value = match &verdict.status {
        VerdictStatus::Integrable(_) => json!({ "status": status, "solutions": extra }),
        VerdictStatus::NotIntegrableUpTo(_) => json!({ "status": status, "d_max": extra }),
        VerdictStatus::EmptyClass => json!({ "status": status }),
        VerdictStatus::NeedsExtension(_) => json!({ "status": status, "reason": extra }),
    };
    finish(
        json!({
            "command": "solve",
            "input": eq.coefficient().to_string(),
            "d_max": d_max,
            "class": eq.classification().to_string(),
            "verdict": verdict_value,
            "candidates": candidates,
        }),
        timing,
    )
}

pub fn text_solve(eq: &EquationInput, verdict: &Verdict, d_max: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "class: {}", eq.classification());
    match &verdict.status {
        VerdictStatus::Integrable(sols) => {
            let _ = writeln!(out, "verdict: integrable");
            for s in sols {
                let _ = writeln!(
                    out,
                    "solution: variable={} {} d={} lambda={} P={} omega={} integral={}",
                    s.variable, s.signs, s.d, s.lambda, s.p, s.omega, s.antiderivative
                );
                if let Some(note) = s.pullback_note() {
                    let _ = writeln!(out, "  pullback: {note}");
                }
            }
        }
        VerdictStatus::NotIntegrableUpTo(d) => {
            let _ = writeln!(out, "verdict: not integrable up to d_max={d}");
        }
        VerdictStatus::EmptyClass => {
            let _ = writeln!(out, "verdict: empty class (C4)");
        }
        VerdictStatus::NeedsExtension(reason) => {
            let _ = writeln!(out, "verdict: needs extension ({reason})");
        }
    }
    if !verdict.candidates_examined.is_empty() {
        let _ = writeln!(out, "candidates examined:");
        for rep in &verdict.candidates_examined {
            let line = match &rep.detail {
                CandidateDetail::Solved { d, lambda, p, .. } => {
                    format!("solved d={d} lambda={lambda} P={p}")
                }
                CandidateDetail::NoPolynomialSolution { d, lambda, .. } => {
                    format!("no polynomial solution at d={d} lambda={lambda}")
                }
                CandidateDetail::Inadmissible(reason) => format!("inadmissible ({reason})"),
            };
            let _ = writeln!(out, "  [{}] {}: {}", rep.variable, rep.signs, line);
        }
    }
    out
}

pub fn json_variety(sys: &SpectralSystem, timing: Option<f64>) -> String {
    let (s_inf, s0) = signs_values(sys.signs);
    finish(
        json!({
            "command": "variety",
            "case": sys.case,
            "d": sys.d,
            "s_inf": s_inf,
            "s0": s0,
            "variety": {
                "lambda": sys.lambda.to_string(),
                "condition_a": sys.condition_a.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                "delta_coeffs": sys.delta_coeffs.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            },
        }),
        timing,
    )
}

pub fn text_variety(sys: &SpectralSystem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "case: {}", sys.case);
    let _ = writeln!(out, "d: {}", sys.d);
    let _ = writeln!(out, "signs: {}", sys.signs);
    let _ = writeln!(out, "lambda: {}", sys.lambda);
    let _ = writeln!(out, "condition_a:");
    for eq in &sys.condition_a {
        let _ = writeln!(out, "  {eq} = 0");
    }
    let _ = writeln!(out, "delta_coeffs:");
    for eq in &sys.delta_coeffs {
        let _ = writeln!(out, "  {eq} = 0");
    }
    out
}
