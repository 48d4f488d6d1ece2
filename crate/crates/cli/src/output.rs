//! Rendering of command results: aligned text and schema-stable JSON.
//!
//! JSON keys are serialized through `serde_json`'s default BTree maps, so
//! output is byte-deterministic for identical inputs.

use serde_json::{json, Value as Json};
use std::collections::BTreeSet;

use wittkit_core::graded::{EndoReport, SpectrumReport};
use wittkit_core::pseudomonoid::{IdealSubset, SelfContainingWitness, Verdict3};
use wittkit_core::scalar::{format_scalar, Scalar};
use wittkit_core::series::{LaurentSeries, Precision};
use wittkit_core::verify::SuiteReport;
use wittkit_core::weyl::{OrderValue, WeylElement};
use wittkit_core::witt::{CandidateOutcome, MembershipVerdict, SpectrumClassification, WittElement};

pub struct Render {
    pub text: String,
    pub json: String,
    /// Exit with 1 even though the command ran (e.g. a failing verify suite).
    pub failed: bool,
}

fn render(command: &str, text: String, body: Json, failed: bool) -> Render {
    let mut obj = serde_json::Map::new();
    obj.insert("command".into(), json!(command));
    if let Json::Object(m) = body {
        for (k, v) in m {
            obj.insert(k, v);
        }
    }
    Render { text, json: Json::Object(obj).to_string(), failed }
}

fn prec_json(p: Precision) -> Json {
    match p {
        Precision::Exact => json!("exact"),
        Precision::Trunc(k) => json!(k),
    }
}

pub fn series_result(command: &str, s: &LaurentSeries) -> Render {
    render(
        command,
        s.to_string(),
        json!({"value": s.to_string(), "prec": prec_json(s.prec())}),
        false,
    )
}

pub fn weyl_result(op: &WeylElement) -> Render {
    let order = match op.order() {
        OrderValue::NegInfinity => json!("-inf"),
        OrderValue::Finite(n) => json!(n),
    };
    render(
        "weyl-normalize",
        format!("{}\norder: {}", op, order),
        json!({"value": op.to_string(), "order": order}),
        false,
    )
}

pub fn witt_result(command: &str, v: &WittElement) -> Render {
    render(
        command,
        v.to_string(),
        json!({"value": v.to_string(), "coefficient": v.coeff.to_string(), "prec": prec_json(v.coeff.prec())}),
        false,
    )
}

fn membership_json(v: &MembershipVerdict) -> Json {
    match v {
        MembershipVerdict::No(e) => json!({"verdict": "No", "witnessExponent": e}),
        MembershipVerdict::YesWithinBounds { degree_bound, prec } => {
            json!({"verdict": "YesWithinBounds", "degreeBound": degree_bound, "prec": prec})
        }
        MembershipVerdict::YesExact => json!({"verdict": "YesExact"}),
    }
}

pub fn spectrum_result(
    classification: &SpectrumClassification,
    rows: &[(Scalar, CandidateOutcome)],
) -> Render {
    let class_str = match classification {
        SpectrumClassification::TrivialSpectrum => "trivial".to_string(),
        SpectrumClassification::AllScalars => "all-scalars".to_string(),
        SpectrumClassification::IntegerMultiples(s) => {
            format!("integer-multiples-of:{}", format_scalar(s))
        }
    };
    let mut lines = vec![format!("classification: {}", class_str)];
    let mut jrows = Vec::new();
    for (a, outcome) in rows {
        let (text, j) = match outcome {
            CandidateOutcome::Membership(m) => {
                let t = match m {
                    MembershipVerdict::No(e) => format!("No (exponent {})", e),
                    MembershipVerdict::YesWithinBounds { prec, .. } => {
                        format!("Yes (within bounds, prec {})", prec)
                    }
                    MembershipVerdict::YesExact => "Yes (exact)".to_string(),
                };
                (t, membership_json(m))
            }
            CandidateOutcome::NoEigenvector => {
                ("no eigenvector".to_string(), json!({"verdict": "NoEigenvector"}))
            }
            CandidateOutcome::NotIntegerMultiple => (
                "not an integer multiple of f'(0)".to_string(),
                json!({"verdict": "NotIntegerMultiple"}),
            ),
        };
        lines.push(format!("{:>8}  {}", format_scalar(a), text));
        let mut row = serde_json::Map::new();
        row.insert("eigenvalue".into(), json!(format_scalar(a)));
        if let Json::Object(m) = j {
            for (k, v) in m {
                row.insert(k, v);
            }
        }
        jrows.push(Json::Object(row));
    }
    render(
        "witt-spec",
        lines.join("\n"),
        json!({"classification": class_str, "results": jrows}),
        false,
    )
}

fn grades_json(grades: &BTreeSet<Scalar>) -> Json {
    json!(grades.iter().map(format_scalar).collect::<Vec<_>>())
}

pub fn ideals_result(ideals: &[IdealSubset]) -> Render {
    let mut lines = vec![format!("{} ideal subsets", ideals.len())];
    let jrows: Vec<Json> = ideals
        .iter()
        .map(|i| {
            lines.push(format!(
                "{{{}}}{}",
                i.grades.iter().map(format_scalar).collect::<Vec<_>>().join(","),
                if i.extends_upward { "  (extends upward)" } else { "" }
            ));
            json!({"grades": grades_json(&i.grades), "extendsUpward": i.extends_upward})
        })
        .collect();
    render(
        "pm-ideals",
        lines.join("\n"),
        json!({"count": ideals.len(), "ideals": jrows}),
        false,
    )
}

pub fn simplicity_result(v: &Verdict3<String, BTreeSet<Scalar>>) -> Render {
    let (text, body) = match v {
        Verdict3::Yes(reason) => (
            format!("simple: yes ({})", reason),
            json!({"verdict": "Yes", "reason": reason, "complete": true}),
        ),
        Verdict3::No(witness) => (
            format!(
                "simple: no — witness ideal {{{}}}",
                witness.iter().map(format_scalar).collect::<Vec<_>>().join(",")
            ),
            json!({"verdict": "No", "witness": grades_json(witness), "complete": true}),
        ),
        Verdict3::UnknownWithinWindow => (
            "simple: unknown within window".to_string(),
            json!({"verdict": "UnknownWithinWindow", "complete": false}),
        ),
    };
    render("pm-simple", text, body, false)
}

pub fn self_containing_result(v: &Verdict3<SelfContainingWitness, String>) -> Render {
    let (text, body) = match v {
        Verdict3::Yes(w) => {
            let missing = w.missing.as_ref().map(format_scalar);
            (
                format!(
                    "self-containing: yes with a = {}{}",
                    format_scalar(&w.a),
                    missing
                        .as_ref()
                        .map(|m| format!(" ({} is not in aG)", m))
                        .unwrap_or_default()
                ),
                json!({"verdict": "Yes", "witness": format_scalar(&w.a), "missing": missing, "complete": true}),
            )
        }
        Verdict3::No(reason) => (
            format!("self-containing: no ({})", reason),
            json!({"verdict": "No", "reason": reason, "complete": true}),
        ),
        Verdict3::UnknownWithinWindow => (
            "self-containing: unknown within window".to_string(),
            json!({"verdict": "UnknownWithinWindow", "complete": false}),
        ),
    };
    render("pm-self-containing", text, body, false)
}

pub fn equiv_result(v: &Verdict3<Scalar, String>) -> Render {
    let (text, body) = match v {
        Verdict3::Yes(k) => (
            format!("equivalent: yes with G1 = k*G2, k = {}", format_scalar(k)),
            json!({"verdict": "Yes", "witness": format_scalar(k), "complete": true}),
        ),
        Verdict3::No(reason) => (
            format!("equivalent: no ({})", reason),
            json!({"verdict": "No", "reason": reason, "complete": true}),
        ),
        Verdict3::UnknownWithinWindow => (
            "equivalent: unknown within window".to_string(),
            json!({"verdict": "UnknownWithinWindow", "complete": false}),
        ),
    };
    render("pm-equiv", text, body, false)
}

pub fn graded_spectrum_result(r: &SpectrumReport) -> Render {
    let values: Vec<String> = r.values.iter().map(format_scalar).collect();
    let missing: Vec<String> = r.missing.iter().map(format_scalar).collect();
    let excluded: Vec<String> = r.excluded_grades.iter().map(format_scalar).collect();
    let mut lines = vec![format!("spectrum: {{{}}}", values.join(","))];
    if !missing.is_empty() {
        lines.push(format!("empty kernels at: {{{}}}", missing.join(",")));
    }
    if !excluded.is_empty() {
        lines.push(format!("overflow-excluded grades: {{{}}}", excluded.join(",")));
    }
    render(
        "graded-spec",
        lines.join("\n"),
        json!({"values": values, "missing": missing, "excludedGrades": excluded}),
        false,
    )
}

pub fn endo_result(r: &EndoReport) -> Render {
    let image: Vec<String> = r.image_grades.iter().map(format_scalar).collect();
    let counterexample = r
        .counterexample
        .as_ref()
        .map(|(a, b)| format!("[e_{}, e_{}]", format_scalar(a), format_scalar(b)));
    let text = format!(
        "{} ({} pairs checked){}\nimage grades: {{{}}}\ninjective on window: {}\nonto window: {}",
        if r.pass { "pass" } else { "FAIL" },
        r.pairs_checked,
        counterexample
            .as_ref()
            .map(|c| format!("\ncounterexample: {}", c))
            .unwrap_or_default(),
        image.join(","),
        r.injective_on_window,
        r.onto_window
    );
    render(
        "graded-endo",
        text,
        json!({
            "pass": r.pass,
            "pairsChecked": r.pairs_checked,
            "counterexample": counterexample,
            "imageGrades": image,
            "injectiveOnWindow": r.injective_on_window,
            "ontoWindow": r.onto_window,
        }),
        !r.pass,
    )
}

pub fn verify_result(seed: u64, reports: &[SuiteReport]) -> Render {
    let mut lines = Vec::new();
    let mut jrows = Vec::new();
    let mut all_pass = true;
    for r in reports {
        all_pass &= r.passed();
        lines.push(format!(
            "{:<26} {} ({} cases{})",
            r.name,
            if r.passed() { "PASS" } else { "FAIL" },
            r.cases,
            if r.failures > 0 {
                format!(", {} failures", r.failures)
            } else {
                String::new()
            }
        ));
        jrows.push(json!({
            "suite": r.name,
            "pass": r.passed(),
            "cases": r.cases,
            "failures": r.failures,
            "firstFailure": r.first_failure,
        }));
    }
    lines.push(format!(
        "verify: {} ({} suites, seed {})",
        if all_pass { "PASS" } else { "FAIL" },
        reports.len(),
        seed
    ));
    render(
        "verify",
        lines.join("\n"),
        json!({"seed": seed, "pass": all_pass, "suites": jrows}),
        !all_pass,
    )
}
