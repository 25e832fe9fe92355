use super::*;
use crate::calculus::Orientation;

fn form(m: &Model, src: &str) -> Form {
    m.eval(src).unwrap().into_form()
}

fn elem(m: &Model, src: &str) -> Element {
    m.eval(src).unwrap().into_element().unwrap()
}

fn scalar(m: &Model, src: &str) -> Coeff {
    m.eval(src).unwrap().into_scalar().unwrap()
}

fn failing(r: &Report) -> Vec<&str> {
    r.failures().map(|c| c.check_name.as_str()).collect()
}

#[test]
fn torus_basis_forms_from_differentials() {
    let m = build_quantum_torus();
    assert_eq!(form(&m, "t1"), form(&m, "1/(1 - r)*d(x)*x^-1"));
    assert_eq!(
        form(&m, "t2"),
        form(&m, "1/(1 - r)*(d(y)*y^-1 - d(x)*x^-1)")
    );
    assert_eq!(form(&m, "mc()"), form(&m, "t1 + t2"));
    assert!(form(&m, "mc()*mc()").is_zero());
    assert_eq!(m.render(&m.eval("y*x").unwrap()), "q^-1 * x*y");
}

#[test]
fn torus_twists_pass_through_basis() {
    let m = build_quantum_torus();
    let calc = m.calculus.as_ref().unwrap();
    for (s, phi) in ["phi1", "phi2"].iter().enumerate() {
        for g in ["x", "y", "x^-1", "y^-1"] {
            let lhs = form(&m, &format!("t{}*{g}", s + 1));
            let img = m.automorphisms[*phi].apply(&m.algebra, &elem(&m, g));
            assert_eq!(lhs, calc.left_mul(&img, &Form::theta(s)), "{phi} {g}");
        }
    }
}

#[test]
fn wess_zumino_relations_are_derived() {
    let m = build_quantum_torus();
    let calc = m.calculus.as_ref().unwrap();
    let forms = vec![
        ("dx".to_string(), m.forms["dx"].clone()),
        ("dy".to_string(), m.forms["dy"].clone()),
    ];
    let elements = vec![
        ("x".to_string(), elem(&m, "x")),
        ("y".to_string(), elem(&m, "y")),
    ];
    let rels = calc
        .commutation_relations(&forms, &elements, Orientation::ElementFirst)
        .unwrap();
    let shown: Vec<String> = rels.iter().map(ToString::to_string).collect();
    assert_eq!(
        shown,
        [
            "x*dx = r * dx*x",
            "x*dy = (r - 1) * dx*y + q * dy*x",
            "y*dx = q^-1*r * dx*y",
            "y*dy = r * dy*y",
        ]
    );
}

#[test]
fn gl_presentation() {
    let m = build_glpq(false);
    let lhs = elem(&m, "a*d - d*a");
    assert_eq!(lhs, elem(&m, "(p - 1/q)*b*c"));
    assert!(m.algebra.check_confluence().unresolved.is_empty());
    // r is replaced by p*q everywhere
    assert_eq!(scalar(&m, "r"), scalar(&m, "p*q"));
}

#[test]
fn gl_rescaled_forms_pass_with_tilde_twists() {
    let m = build_glpq(false);
    let calc = m.calculus.as_ref().unwrap();
    for s in 1..=4 {
        let tt = m.forms[format!("tt{s}").as_str()].clone();
        let psi = &m.automorphisms[format!("psi{s}").as_str()];
        for g in ["a", "b", "c", "d"] {
            let g = elem(&m, g);
            assert_eq!(
                calc.right_mul(&tt, &g),
                calc.left_mul(&psi.apply(&m.algebra, &g), &tt),
                "tt{s}"
            );
        }
    }
    assert_eq!(form(&m, "tt1*a"), form(&m, "r^-1*a*tt1"));
    assert_eq!(form(&m, "tt1*b"), form(&m, "b*tt1"));
    assert_eq!(form(&m, "tt1*c"), form(&m, "r^-1*c*tt1"));
    assert_eq!(form(&m, "tt1*d"), form(&m, "d*tt1"));
}

#[test]
fn gl_v4_against_b() {
    let m = build_glpq(false);
    let calc = m.calculus.as_ref().unwrap();
    let forms: Vec<(String, Form)> = ["v1", "v2", "v3", "v4"]
        .iter()
        .map(|n| (n.to_string(), m.forms[*n].clone()))
        .collect();
    let elements: Vec<(String, Element)> = ["a", "b", "c", "d"]
        .iter()
        .map(|n| (n.to_string(), elem(&m, n)))
        .collect();
    let rels = calc
        .commutation_relations(&forms, &elements, Orientation::FormFirst)
        .unwrap();
    let rel = rels
        .iter()
        .find(|r| r.form == "v4" && r.element == "b")
        .unwrap();
    let want = [
        (scalar(&m, "(1 - r)/r"), "v2", "a"),
        (scalar(&m, "1/r"), "v4", "b"),
    ];
    assert_eq!(rel.terms.len(), want.len());
    for (c, f, e) in want {
        assert!(
            rel.terms
                .iter()
                .any(|(c2, f2, e2)| *c2 == c && f2 == f && e2 == e),
            "{rel}"
        );
    }
}

#[test]
fn gl_inner_form_matches_weights() {
    let m = build_glpq(false);
    let want = "-(q*r/(1 - r))*D*t1 - (q*r/(1 - r))*a*t2 + q/(1 - r)*d*t3 + q^2/(1 - r)*t4";
    assert_eq!(form(&m, "mc()"), form(&m, want));
}

#[test]
fn determinant_inverse_adjoined() {
    let m = build_glpq(true);
    assert_eq!(elem(&m, "D*Di"), Element::one());
    assert_eq!(elem(&m, "Di*D"), Element::one());
    assert_eq!(elem(&m, "Di*b"), elem(&m, "(q/p)*b*Di"));
    assert_eq!(elem(&m, "a*Di"), elem(&m, "Di*a"));
    // the localized model still passes its presentation checks
    let r = run_suite(&m, 1);
    assert!(r.get("presentation: confluent").unwrap().status == Status::Pass);
    assert!(r.get("presentation: relations reduce to 0").unwrap().status == Status::Pass);
}

#[test]
fn torus_suite_passes() {
    let r = run_suite(&build_quantum_torus(), 7);
    assert!(r.all_passed(), "{}", r.render(ReportFormat::Plain));
    assert!(r.checks.len() > 30);
}

#[test]
fn gl_suite_fails_only_on_d_squared() {
    let r = run_suite(&build_glpq(false), 7);
    assert_eq!(
        failing(&r),
        ["calc: d^2 = 0"],
        "{}",
        r.render(ReportFormat::Plain)
    );
    let w = r.get("calc: d^2 = 0").unwrap().witness.as_deref().unwrap();
    assert!(w.starts_with("ϑ∧ϑ against "), "{w}");
}

#[test]
fn symmetric_gl_variant_passes() {
    let r = run_suite(&build_glpq_sym(), 7);
    assert!(r.all_passed(), "{}", r.render(ReportFormat::Plain));
}

#[test]
fn free_r_breaks_the_first_relation() {
    let r = run_suite(&build_glpq_r_free(), 7);
    let fails = failing(&r);
    assert!(fails.contains(&"v1 a"));
    assert!(fails.contains(&"calc: twists agree with wedge rules"));
    assert!(!fails.contains(&"presentation: confluent"));
    assert_eq!(r.model, "glpq2-r-free");
}

#[test]
fn suites_are_deterministic() {
    let m = build_glpq(false);
    let a = run_suite(&m, 3).render(ReportFormat::Json);
    let b = run_suite(&m, 3).render(ReportFormat::Json);
    assert_eq!(a, b);
}

#[test]
fn exported_model_rebuilds() {
    for m in [build_quantum_torus(), build_glpq(false)] {
        let again = Model::parse(&m.export()).unwrap();
        assert_eq!(again.name, m.name);
        assert_eq!(again.forms, m.forms);
        assert_eq!(
            run_suite(&again, 5).render(ReportFormat::Plain),
            run_suite(&m, 5).render(ReportFormat::Plain)
        );
    }
}

fn sample_report() -> Report {
    Report {
        model: "m".into(),
        seed: 4,
        checks: vec![
            CheckResult::pass("first", Some("here".into())),
            CheckResult::fail("second_one", None, "x*y != y*x & more"),
        ],
    }
}

#[test]
fn plain_report() {
    let text = sample_report().render(ReportFormat::Plain);
    assert_eq!(
        text,
        "model m (seed 4)\nPASS  first  [here]\nFAIL  second_one\n      witness: x*y != y*x & more\n1 passed, 1 failed\n"
    );
}

#[test]
fn json_report() {
    let text = sample_report().render(ReportFormat::Json);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["passed"], 1);
    assert_eq!(v["failed"], 1);
    assert_eq!(v["checks"][0]["check_name"], "first");
    assert_eq!(v["checks"][0]["anchor"], "here");
    assert_eq!(v["checks"][0]["status"], "pass");
    assert!(v["checks"][0].get("witness").is_none());
    assert_eq!(v["checks"][1]["status"], "fail");
    assert!(v["checks"][1]["anchor"].is_null());
    assert_eq!(v["checks"][1]["witness"], "x*y != y*x & more");
}

#[test]
fn latex_report_escapes() {
    let text = sample_report().render(ReportFormat::Latex);
    assert!(text.contains("\\begin{tabular}{lll}"));
    assert!(text.contains("second\\_one &  & \\textbf{fail}: \\texttt{x*y != y*x \\& more} \\\\"));
    assert!(text.contains("first & here & pass \\\\"));
}
