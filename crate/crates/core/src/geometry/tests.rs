use super::*;
use crate::fixtures::*;
use crate::sample::Sampler;

fn derived(calc: &Calculus) -> Vec<FormExtension> {
    (0..calc.dim())
        .map(|s| {
            let base = calc.twist(s).clone();
            let m = derive_theta_action(calc, &base).unwrap();
            FormExtension::new(base, m)
        })
        .collect()
}

fn diag(entries: &[Coeff]) -> Matrix {
    let mut m = Matrix::zeros(entries.len(), entries.len());
    for (i, c) in entries.iter().enumerate() {
        m.set(i, i, c.clone());
    }
    m
}

fn one_form(calc: &Calculus, s: &mut Sampler) -> Form {
    let mut out = Form::zero();
    for t in 0..calc.dim() {
        out.add_assign(&calc.left_mul(&s.element(calc.algebra(), 2), &Form::theta(t)));
    }
    out
}

#[test]
fn qplane_twists_act_trivially_on_thetas() {
    let calc = qplane_calc();
    for e in derived(&calc) {
        assert_eq!(e.matrix, Matrix::identity(2));
        assert!(e.verify_differentiable(&calc));
    }
}

#[test]
fn gl_theta_action() {
    let calc = gl_calc();
    let r = r_pq();
    let expected = diag(&[r.clone(), c(1), r, c(1)]);
    for e in derived(&calc) {
        assert_eq!(e.matrix, expected);
        assert_eq!(e.differentiability_mismatch(&calc), None);
    }
    // the identity action is not compatible with d
    let naive = FormExtension::identity_action(calc.twist(0).clone(), 4);
    let m = naive.differentiability_mismatch(&calc).expect("mismatch");
    assert!(m.context.starts_with("φ(d "), "{m}");
}

#[test]
fn extension_inverse_undoes_action() {
    let calc = gl_calc();
    let mut s = Sampler::new(3, Sampler::standard_pool(calc.algebra()));
    for e in derived(&calc) {
        let inv = e.inverse().unwrap();
        assert!(inv.verify_differentiable(&calc));
        let w = one_form(&calc, &mut s);
        assert_eq!(inv.apply(&calc, &e.apply(&calc, &w)), w);
    }
}

#[test]
fn extension_is_multiplicative() {
    let calc = gl_calc();
    let mut s = Sampler::new(4, Sampler::standard_pool(calc.algebra()));
    let e = &derived(&calc)[1];
    let w = one_form(&calc, &mut s);
    let v = one_form(&calc, &mut s);
    assert_eq!(
        e.apply(&calc, &calc.wedge(&w, &v)),
        calc.wedge(&e.apply(&calc, &w), &e.apply(&calc, &v))
    );
    let a = s.element(calc.algebra(), 3);
    assert_eq!(
        e.apply(&calc, &calc.d(&calc.element(&a))),
        calc.d(&e.apply(&calc, &calc.element(&a)))
    );
}

#[test]
fn tensor_products_agree() {
    for calc in [qplane_calc(), gl_calc()] {
        let geo = Geometry::new(&calc, derived(&calc)).unwrap();
        let mut s = Sampler::new(7, Sampler::standard_pool(calc.algebra()));
        for _ in 0..3 {
            let w = one_form(&calc, &mut s);
            let v = one_form(&calc, &mut s);
            assert_eq!(geo.tensor_l(&w, &v), geo.tensor_l_via_a(&w, &v));
            // the product map on ⊗_A is the wedge
            assert_eq!(geo.wedge_project(&geo.tensor_a(&w, &v)), calc.wedge(&w, &v));
            // ⊗_A is balanced
            let a = s.element(calc.algebra(), 2);
            assert_eq!(
                geo.tensor_a(&calc.right_mul(&w, &a), &v),
                geo.tensor_a(&w, &calc.left_mul(&a, &v))
            );
        }
    }
}

#[test]
fn connection_leibniz_rule() {
    let calc = gl_calc();
    let geo = Geometry::new(&calc, derived(&calc)).unwrap();
    let conn = Connection::trivial(4);
    let mut s = Sampler::new(9, Sampler::standard_pool(calc.algebra()));
    let w = one_form(&calc, &mut s);
    let a = s.element(calc.algebra(), 2);
    let lhs = geo.nabla(&conn, &calc.left_mul(&a, &w));
    let da = calc.d(&calc.element(&a));
    let rhs = geo
        .tensor_a(&da, &w)
        .add(&geo.left_mul(&a, &geo.nabla(&conn, &w)));
    assert_eq!(lhs, rhs);
}

#[test]
fn trivial_connection_on_qplane_is_torsion_free() {
    let calc = qplane_calc();
    let geo = Geometry::new(&calc, derived(&calc)).unwrap();
    let conn = Connection::trivial(2);
    assert!(geo.torsion(&conn, &Form::theta(0)).is_zero());
    assert!(geo.torsion_free(&conn));
}

#[test]
fn metric_compatibility_two_ways() {
    let calc = qplane_calc();
    let geo = Geometry::new(&calc, derived(&calc)).unwrap();
    let conn = Connection::trivial(2);
    let g = TensorForm::basis(0, 0).add(&TensorForm::basis(1, 1));
    assert!(geo.metric_compatible(&conn, &g));
    assert!(geo.metric_compatible_entrywise(&conn, &g));
    let x = calc.algebra().generator("x").unwrap();
    let bad = TensorForm::term(0, 0, x);
    assert!(!geo.metric_compatible(&conn, &bad));
    assert!(!geo.metric_compatible_entrywise(&conn, &bad));
    assert_eq!(geo.render(&bad), "x*[t1,t1]");

    // a quarter turn of the θ plane preserves g
    let mut flip = Connection::trivial(2);
    flip.transport[0][0] = Form::theta(1);
    flip.transport[0][1] = Form::theta(0).neg();
    assert!(geo.metric_compatible(&flip, &g));
    let mut s = Sampler::new(2, Sampler::standard_pool(calc.algebra()));
    for _ in 0..3 {
        let mut tf = TensorForm::zero();
        tf.add_term(0, 1, &s.element(calc.algebra(), 2));
        tf.add_term(1, 1, &s.element(calc.algebra(), 2));
        for k in 0..2 {
            assert_eq!(
                geo.transport_tensor(&flip, k, &tf),
                geo.transport_tensor_entrywise(&flip, k, &tf)
            );
        }
    }
}

#[test]
fn geometry_needs_one_extension_per_twist() {
    let calc = qplane_calc();
    let err = Geometry::new(&calc, vec![]).unwrap_err();
    assert_eq!(
        err,
        GeometryError::Arity {
            what: "extensions",
            expected: 2,
            got: 0
        }
    );
}
