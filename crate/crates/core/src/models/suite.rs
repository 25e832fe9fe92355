use super::{CheckKind, CheckResult, Model, Report};
use crate::calculus::{Calculus, Form};
use crate::geometry::Geometry;
use crate::sample::Sampler;

/// Random pairs per twisted-Leibniz check and random elements per
/// innerness check.
pub const SAMPLES: usize = 20;

fn sampler(model: &Model, seed: u64, salt: u64) -> Sampler {
    Sampler::new(
        seed.wrapping_add(salt),
        Sampler::standard_pool(&model.algebra),
    )
}

/// Runs the built-in checks followed by the model's own checks and
/// derivations. Randomized checks draw from `seed`.
pub fn run_suite(model: &Model, seed: u64) -> Report {
    let mut out = Vec::new();
    presentation(model, &mut out);
    if let Some(calc) = &model.calculus {
        calculus(model, calc, seed, &mut out);
    }
    let geometry = model.geometry().transpose();
    match &geometry {
        Ok(Some(geo)) => extensions(model, geo, &mut out),
        Ok(None) => {}
        Err(e) => out.push(CheckResult::fail(
            "geometry: extensions invertible",
            None,
            e.to_string(),
        )),
    }
    let geo = geometry.ok().flatten();
    for check in &model.checks {
        out.push(user_check(model, geo.as_ref(), check));
    }
    for d in &model.derivations {
        derivation(model, d, &mut out);
    }
    Report {
        model: model.name.clone(),
        seed,
        checks: out,
    }
}

fn presentation(model: &Model, out: &mut Vec<CheckResult>) {
    let alg = &model.algebra;
    let bad = alg.unsound_relations();
    let witness = bad.first().map(|&i| {
        let src = model.relation_sources.get(i).cloned().unwrap_or_default();
        format!("relation `{src}` does not reduce to 0")
    });
    out.push(CheckResult::from_witness(
        "presentation: relations reduce to 0",
        None,
        witness,
    ));

    let conf = alg.check_confluence();
    let witness = conf.unresolved.first().map(|o| {
        format!(
            "{} unresolved overlap(s); {}: {} vs {}",
            conf.unresolved.len(),
            o.word.display(alg.table()),
            o.via_left.display(alg.table()),
            o.via_right.display(alg.table())
        )
    });
    out.push(CheckResult::from_witness(
        "presentation: confluent",
        None,
        witness,
    ));

    for (name, phi) in &model.automorphisms {
        let witness = phi.broken_relation(alg).map(|i| {
            let src = model
                .relation_sources
                .get(i)
                .cloned()
                .unwrap_or_else(|| format!("rule {i}"));
            format!("breaks `{src}`")
        });
        out.push(CheckResult::from_witness(
            format!("auto {name}: respects relations"),
            None,
            witness,
        ));
        if phi.declared_inverse().is_some() {
            let witness = match phi.verify_inverse(alg) {
                Ok(true) => None,
                Ok(false) => Some("composite with the inverse is not the identity".to_string()),
                Err(e) => Some(e.to_string()),
            };
            out.push(CheckResult::from_witness(
                format!("auto {name}: invertible"),
                None,
                witness,
            ));
        }
    }
}

fn calculus(model: &Model, calc: &Calculus, seed: u64, out: &mut Vec<CheckResult>) {
    let alg = calc.algebra();
    let table = alg.table();
    let conflicts = calc.twist_conflicts();
    let witness = conflicts.first().map(ToString::to_string);
    out.push(CheckResult::from_witness(
        "calc: twists agree with wedge rules",
        None,
        witness,
    ));

    for (s, label) in calc.labels().iter().enumerate() {
        let mut witness = None;
        for g in alg.generators() {
            let lhs = calc.wedge(&Form::theta(s), &calc.element(&g));
            let rhs = calc.left_mul(&calc.twist(s).apply(alg, &g), &Form::theta(s));
            if lhs != rhs {
                witness = Some(format!(
                    "{label}*{}: {} != {}",
                    g.display(table),
                    calc.render(&lhs),
                    calc.render(&rhs)
                ));
                break;
            }
        }
        out.push(CheckResult::from_witness(
            format!("calc: {label} passes generators"),
            None,
            witness,
        ));
    }

    for (s, label) in calc.labels().iter().enumerate() {
        let mut rng = sampler(model, seed, 100 + s as u64);
        let e = calc.derivation(s);
        let phi = calc.twist(s);
        let mut witness = None;
        for _ in 0..SAMPLES {
            let x = rng.element(alg, 3);
            let y = rng.element(alg, 3);
            let lhs = e.apply(alg, &alg.mul(&x, &y));
            let rhs = alg
                .mul(&e.apply(alg, &x), &phi.apply(alg, &y))
                .add(&alg.mul(&x, &e.apply(alg, &y)));
            if lhs != rhs {
                witness = Some(format!(
                    "x = {}, y = {}",
                    x.display(table),
                    y.display(table)
                ));
                break;
            }
        }
        out.push(CheckResult::from_witness(
            format!("calc: twisted Leibniz for {label}"),
            None,
            witness,
        ));
    }

    let mut rng = sampler(model, seed, 200);
    let witness = calc
        .inner_mismatch(&mut rng, SAMPLES)
        .map(|m| m.to_string());
    out.push(CheckResult::from_witness("calc: inner", None, witness));

    let witness = calc.d_squared_mismatch().map(|m| m.to_string());
    out.push(CheckResult::from_witness("calc: d^2 = 0", None, witness));
}

fn extensions(model: &Model, geo: &Geometry<'_>, out: &mut Vec<CheckResult>) {
    let calc = geo.calculus();
    for (name, ext) in &model.extensions {
        let witness = ext.differentiability_mismatch(calc).map(|m| m.to_string());
        out.push(CheckResult::from_witness(
            format!("geometry: {name} differentiable"),
            None,
            witness,
        ));
        let witness = match ext.inverse() {
            Ok(inv) => inv.differentiability_mismatch(calc).map(|m| m.to_string()),
            Err(e) => Some(e.to_string()),
        };
        out.push(CheckResult::from_witness(
            format!("geometry: {name}^-1 differentiable"),
            None,
            witness,
        ));
    }
}

fn render(model: &Model, f: &Form) -> String {
    match &model.calculus {
        Some(calc) => calc.render(f),
        None => f
            .as_element()
            .map(|e| e.display(model.algebra.table()).to_string())
            .unwrap_or_default(),
    }
}

fn user_check(model: &Model, geo: Option<&Geometry<'_>>, check: &super::Check) -> CheckResult {
    let name = check.name.clone();
    let anchor = check.anchor.clone();
    let witness = match &check.kind {
        CheckKind::Equal(a, b) => (a != b).then(|| {
            format!(
                "{}: {} != {}",
                check.source,
                render(model, a),
                render(model, b)
            )
        }),
        CheckKind::Passes(w, auto) => {
            let calc = model.calculus.as_ref().expect("checked at build");
            let alg = calc.algebra();
            let phi = &model.automorphisms[auto];
            alg.generators().into_iter().find_map(|g| {
                let lhs = calc.right_mul(w, &g);
                let rhs = calc.left_mul(&phi.apply(alg, &g), w);
                (lhs != rhs).then(|| {
                    format!(
                        "against {}: {} != {}",
                        g.display(alg.table()),
                        calc.render(&lhs),
                        calc.render(&rhs)
                    )
                })
            })
        }
        CheckKind::Compatible {
            negated,
            connection,
            metric,
        } => match geo {
            None => Some("no geometry: extend every twist first".to_string()),
            Some(geo) => {
                let conn = &model.connections[connection];
                let g = &model.metrics[metric];
                let a = geo.metric_compatible(conn, g);
                let b = geo.metric_compatible_entrywise(conn, g);
                if a != b {
                    Some("the two evaluations of the transport disagree".to_string())
                } else if a == *negated {
                    let failing =
                        (0..geo.calculus().dim()).find(|&s| geo.transport_tensor(conn, s, g) != *g);
                    Some(match failing {
                        Some(s) => format!(
                            "transport by {} gives {}",
                            geo.calculus().labels()[s],
                            geo.render(&geo.transport_tensor(conn, s, g))
                        ),
                        None => format!("{metric} is preserved by {connection}"),
                    })
                } else {
                    None
                }
            }
        },
        CheckKind::TorsionFree {
            negated,
            connection,
        } => match geo {
            None => Some("no geometry: extend every twist first".to_string()),
            Some(geo) => {
                let conn = &model.connections[connection];
                let calc = geo.calculus();
                let bad = (0..calc.dim())
                    .map(|s| (s, geo.torsion(conn, &Form::theta(s))))
                    .find(|(_, t)| !t.is_zero());
                match (bad, negated) {
                    (None, false) | (Some(_), true) => None,
                    (Some((s, t)), false) => {
                        Some(format!("T({}) = {}", calc.labels()[s], calc.render(&t)))
                    }
                    (None, true) => Some(format!("{connection} is torsion free")),
                }
            }
        },
    };
    CheckResult::from_witness(name, anchor, witness)
}

fn derivation(model: &Model, d: &super::Derivation, out: &mut Vec<CheckResult>) {
    let calc = model.calculus.as_ref().expect("checked at build");
    match calc.commutation_relations(&d.forms, &d.elements, d.orientation) {
        Err(e) => out.push(CheckResult::fail(
            d.name.clone(),
            d.anchor.clone(),
            e.to_string(),
        )),
        Ok(rels) => {
            let shown: Vec<String> = rels.iter().map(ToString::to_string).collect();
            for want in &d.expect {
                let witness = (!shown.contains(want)).then(|| {
                    let lhs = want.split(" = ").next().unwrap_or_default();
                    match shown.iter().find(|s| s.split(" = ").next() == Some(lhs)) {
                        Some(got) => format!("derived {got}"),
                        None => "no such relation derived".to_string(),
                    }
                });
                out.push(CheckResult::from_witness(
                    format!("{}: {want}", d.name),
                    d.anchor.clone(),
                    witness,
                ));
            }
            let extra: Vec<&String> = shown.iter().filter(|s| !d.expect.contains(s)).collect();
            let witness = (!d.expect.is_empty() && !extra.is_empty()).then(|| {
                format!(
                    "unexpected: {}",
                    extra
                        .iter()
                        .map(|s| s.as_str())
                        .collect::<Vec<_>>()
                        .join("; ")
                )
            });
            out.push(CheckResult::from_witness(
                format!("{}: complete", d.name),
                d.anchor.clone(),
                witness,
            ));
        }
    }
}
