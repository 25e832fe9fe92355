use super::*;
use crate::fixtures::*;
use crate::sample::Sampler;

fn sampler(calc: &Calculus, seed: u64) -> Sampler {
    Sampler::new(seed, Sampler::standard_pool(calc.algebra()))
}

#[test]
fn qplane_wedge_rules() {
    let calc = qplane_calc();
    let t1 = Form::theta(0);
    let t2 = Form::theta(1);
    assert_eq!(calc.wedge(&t2, &t1), calc.wedge(&t1, &t2).neg());
    assert!(calc.wedge(&t1, &t1).is_zero());
    assert!(calc.wedge(&t2, &t2).is_zero());
    let x = calc.algebra().generator("x").unwrap();
    let moved = calc.right_mul(&t1, &x);
    assert_eq!(calc.render(&moved), "r^-1 * x*t1");
}

#[test]
fn gl_wedge_rule_and_completion() {
    let calc = gl_calc();
    let t = |s: usize| Form::theta(s - 1);
    let lhs = calc.wedge(&t(4), &t(1));
    let r = r_pq();
    let rhs = calc.wedge(&t(1), &t(4)).scale(&r.neg()).add(
        &calc
            .wedge(&t(2), &t(3))
            .scale(&par("p").sub(&par("q").inv().unwrap())),
    );
    assert_eq!(lhs, rhs);
    // the overlap t4 t4 t1 forces t2 t3 t4 = 0
    let t234 = calc.wedge(&calc.wedge(&t(2), &t(3)), &t(4));
    assert!(t234.is_zero());
    let basis = calc.theta().basis();
    assert!(!basis.contains(&Mono::from_indices(&[1, 2, 3]).unwrap()));
    assert!(basis.contains(&Mono::from_indices(&[0, 1, 2]).unwrap()));
}

#[test]
fn theta_passes_through_generators() {
    for calc in [qplane_calc(), gl_calc()] {
        let alg = calc.algebra();
        for s in 0..calc.dim() {
            for g in alg.generators() {
                let lhs = calc.wedge(&Form::theta(s), &calc.element(&g));
                let rhs = calc.left_mul(&calc.twist(s).apply(alg, &g), &Form::theta(s));
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn missing_rule_is_reported() {
    let alg = std::sync::Arc::new(qplane());
    let mut spec = qplane_spec(&alg);
    spec.theta_rules.pop();
    assert_eq!(
        Calculus::new(alg, spec).unwrap_err(),
        CalculusError::MissingThetaRule(1, 0)
    );
}

#[test]
fn qplane_differentials() {
    let calc = qplane_calc();
    let alg = calc.algebra();
    let x = alg.generator("x").unwrap();
    let y = alg.generator("y").unwrap();
    let k = par("r").inv().unwrap().sub(&c(1));
    assert_eq!(
        calc.d_zero(&x),
        calc.left_mul(&x.scale(&k), &Form::theta(0))
    );
    let expected = calc.left_mul(&y.scale(&k), &Form::theta(0).add(&Form::theta(1)));
    assert_eq!(calc.d_zero(&y), expected);
    assert!(calc.d_zero(&Element::one()).is_zero());
    assert_eq!(calc.d(&calc.element(&x)), calc.d_zero(&x));
}

#[test]
fn qplane_mc_form_is_closed() {
    let calc = qplane_calc();
    assert_eq!(*calc.mc_form(), Form::theta(0).add(&Form::theta(1)));
    assert!(calc.d(calc.mc_form()).is_zero());
    let x = calc.algebra().generator("x").unwrap();
    assert!(calc.d(&calc.d_zero(&x)).is_zero());
    assert!(calc.wedge(calc.mc_form(), calc.mc_form()).is_zero());
}

#[test]
fn zero_weights_give_zero_mc_form() {
    let alg = std::sync::Arc::new(qplane());
    let mut spec = qplane_spec(&alg);
    spec.weights = vec![Element::zero(), Element::zero()];
    let calc = Calculus::new(alg, spec).unwrap();
    assert!(calc.mc_form().is_zero());
}

#[test]
fn gl_mc_form_matches_weights() {
    let calc = gl_calc();
    let alg = calc.algebra();
    let q = par("q");
    let r = r_pq();
    let k = q.div(&c(1).sub(&r)).unwrap();
    let t = |s: usize| Form::theta(s - 1);
    let a = alg.generator("a").unwrap();
    let d = alg.generator("d").unwrap();
    let expected = calc
        .left_mul(&det(alg).scale(&r.neg()), &t(1))
        .add(&calc.left_mul(&a.scale(&r.neg()), &t(2)))
        .add(&calc.left_mul(&d, &t(3)))
        .add(&t(4).scale(&q))
        .scale(&k);
    assert_eq!(*calc.mc_form(), expected);
    // ϑ = r/(1-r) (r ϑ¹ + ϑ⁴)
    let v = gl_mc_forms(&calc);
    let alt = v[0]
        .scale(&r)
        .add(&v[3])
        .scale(&r.div(&c(1).sub(&r)).unwrap());
    assert_eq!(*calc.mc_form(), alt);
}

#[test]
fn innerness() {
    let q = qplane_calc();
    assert_eq!(q.inner_mismatch(&mut sampler(&q, 1), 20), None);
    let g = gl_calc();
    assert_eq!(g.inner_mismatch(&mut sampler(&g, 1), 20), None);
}

#[test]
fn perturbed_weight_breaks_innerness() {
    let calc = gl_calc_with(&r_pq(), |spec| {
        spec.weights[3] = spec.weights[3].add(&Element::one());
    });
    let m = calc
        .inner_mismatch(&mut sampler(&calc, 1), 20)
        .expect("mismatch");
    assert_eq!(m.context, "d(b)");
}

#[test]
fn d_squared() {
    assert!(qplane_calc().verify_d_squared());
    let alg = std::sync::Arc::new(qplane());
    let mut spec = qplane_spec(&alg);
    spec.theta_rules[2].rhs[0].0 = c(-2);
    let broken = Calculus::new(alg, spec).unwrap();
    assert!(!broken.verify_d_squared());
}

#[test]
fn twists_are_compatible_with_wedge_rules() {
    assert!(qplane_calc().twist_conflicts().is_empty());
    assert!(gl_calc().twist_conflicts().is_empty());
    let free = gl_calc_with(&par("r"), |_| {});
    assert!(!free.twist_conflicts().is_empty());
}

#[test]
fn wess_zumino_relations() {
    let calc = qplane_calc();
    let alg = calc.algebra();
    let x = alg.generator("x").unwrap();
    let y = alg.generator("y").unwrap();
    let forms = vec![
        ("dx".to_string(), calc.d_zero(&x)),
        ("dy".to_string(), calc.d_zero(&y)),
    ];
    let elements = vec![("x".to_string(), x), ("y".to_string(), y)];
    let rels = calc
        .commutation_relations(&forms, &elements, Orientation::ElementFirst)
        .unwrap();
    let shown: Vec<String> = rels.iter().map(ToString::to_string).collect();
    // p := r/q, so pq = r
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
fn relation_against_unit_is_trivial() {
    let calc = qplane_calc();
    let x = calc.algebra().generator("x").unwrap();
    let forms = vec![("dx".to_string(), calc.d_zero(&x))];
    let elements = vec![("1".to_string(), Element::one())];
    let rels = calc
        .commutation_relations(&forms, &elements, Orientation::ElementFirst)
        .unwrap();
    assert_eq!(rels[0].to_string(), "dx = dx");
}

#[test]
fn inexpressible_relation() {
    let calc = qplane_calc();
    let x = calc.algebra().generator("x").unwrap();
    let y = calc.algebra().generator("y").unwrap();
    let forms = vec![("dy".to_string(), calc.d_zero(&y))];
    let elements = vec![("x".to_string(), x)];
    let err = calc
        .commutation_relations(&forms, &elements, Orientation::ElementFirst)
        .unwrap_err();
    assert!(matches!(err, CalculusError::Inexpressible { .. }));
}

fn vartheta_relations(calc: &Calculus, pair: [&str; 2]) -> Vec<String> {
    let alg = calc.algebra();
    let forms: Vec<(String, Form)> = gl_mc_forms(calc)
        .into_iter()
        .enumerate()
        .map(|(i, f)| (format!("v{}", i + 1), f))
        .collect();
    let elements: Vec<(String, Element)> = pair
        .iter()
        .map(|g| (g.to_string(), alg.generator(g).unwrap()))
        .collect();
    calc.commutation_relations(&forms, &elements, Orientation::FormFirst)
        .unwrap()
        .iter()
        .map(ToString::to_string)
        .collect()
}

#[test]
fn second_calculus_relations() {
    let calc = gl_calc();
    let rels = vartheta_relations(&calc, ["a", "b"]);
    for r in &rels {
        println!("{r}");
    }
    assert_eq!(rels.len(), 8);
    let mirrored = vartheta_relations(&calc, ["c", "d"]);
    let swapped: Vec<String> = rels
        .iter()
        .map(|r| {
            r.replace('a', "C")
                .replace('b', "D")
                .replace('C', "c")
                .replace('D', "d")
        })
        .collect();
    assert_eq!(mirrored, swapped);
}

#[test]
fn leibniz_and_associativity_on_random_input() {
    for calc in [qplane_calc(), gl_calc()] {
        let alg = calc.algebra();
        let mut s = sampler(&calc, 5);
        for _ in 0..5 {
            let a = s.element(alg, 3);
            let b = s.element(alg, 3);
            let lhs = calc.d_zero(&alg.mul(&a, &b));
            let rhs = calc
                .right_mul(&calc.d_zero(&a), &b)
                .add(&calc.left_mul(&a, &calc.d_zero(&b)));
            assert_eq!(lhs, rhs);

            let w = calc.left_mul(&a, &Form::theta(0));
            let v = calc.d_zero(&b);
            let dw = calc.d(&w);
            let lhs = calc.d(&calc.wedge(&w, &v));
            let rhs = calc.wedge(&dw, &v).sub(&calc.wedge(&w, &calc.d(&v)));
            assert_eq!(lhs, rhs);

            let u = calc.left_mul(&s.element(alg, 2), &Form::theta(calc.dim() - 1));
            assert_eq!(
                calc.wedge(&calc.wedge(&w, &v), &u),
                calc.wedge(&w, &calc.wedge(&v, &u))
            );
        }
    }
}

#[test]
fn gl_d_squared_with_displayed_rules() {
    // With t4*t2 = -r t2*t4, ϑ∧ϑ is a multiple of a*t2*t4 and fails to
    // commute with b.
    let calc = gl_calc();
    let big = calc.wedge(calc.mc_form(), calc.mc_form());
    let t24 = Mono::from_indices(&[1, 3]).unwrap();
    let a = calc.algebra().generator("a").unwrap();
    let r = r_pq();
    let k = par("q").pow(3).unwrap().mul(&r).div(&r.sub(&c(1))).unwrap();
    assert_eq!(big, Form::term(a.scale(&k), t24));
    let m = calc.d_squared_mismatch().expect("mismatch");
    assert_eq!(m.context, "ϑ∧ϑ against b");

    // t4*t2 = -t2*t4 instead gives ϑ∧ϑ = 0 and keeps t2*t3*t4.
    let alt = gl_calc_with(&r, |spec| spec.theta_rules[8].rhs[0].0 = c(-1));
    assert!(alt.wedge(alt.mc_form(), alt.mc_form()).is_zero());
    assert!(alt.verify_d_squared());
    assert_eq!(alt.theta().basis().len(), 16);
}
