use std::sync::OnceLock;

use ncdiff_core::coeff::Param;
use ncdiff_core::models::{build_glpq, build_quantum_torus};
use ncdiff_core::{Coeff, Connection, Element, Form, Model, Word};
use num_rational::BigRational;
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = Coeff> {
    let leaf = prop_oneof![
        (-4i64..=4).prop_map(Coeff::from_integer),
        prop::sample::select(vec!["p", "q", "r"]).prop_map(Coeff::param),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.add(&b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.mul(&b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.sub(&b)),
            (inner.clone(), inner).prop_map(|(a, b)| a.div(&b).unwrap_or(a)),
        ]
    })
}

fn torus() -> &'static Model {
    static M: OnceLock<Model> = OnceLock::new();
    M.get_or_init(build_quantum_torus)
}

fn gl() -> &'static Model {
    static M: OnceLock<Model> = OnceLock::new();
    M.get_or_init(|| build_glpq(false))
}

/// Up to three terms with coefficients from a small pool and words over
/// every symbol of `m`.
fn element(m: &'static Model) -> impl Strategy<Value = Element> {
    let n = m.algebra.table().symbol_count() as u16;
    let term = (
        prop::sample::select(vec![1i64, -1, 2, 3]),
        prop::collection::vec(0..n, 0..=3),
    );
    prop::collection::vec(term, 1..=3).prop_map(move |terms| {
        let mut out = Element::zero();
        for (c, letters) in terms {
            let w = Word::from_letters(letters.into_iter().map(|s| s as _));
            out.add_scaled(&Coeff::from_integer(c), &m.algebra.word(&w));
        }
        out
    })
}

fn one_form(m: &'static Model) -> impl Strategy<Value = Form> {
    let dim = m.calculus.as_ref().unwrap().dim();
    prop::collection::vec(element(m), dim).prop_map(move |coeffs| {
        let calc = m.calculus.as_ref().unwrap();
        let mut out = Form::zero();
        for (s, a) in coeffs.iter().enumerate() {
            out.add_assign(&calc.left_mul(a, &Form::theta(s)));
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in coeff(), b in coeff(), c in coeff()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in coeff(), b in coeff(), p in 2i64..9, q in 2i64..9, r in 11i64..19) {
        let pt = [("p", p), ("q", q), ("r", r)]
            .into_iter()
            .map(|(n, v)| (Param::new(n), BigRational::from_integer(v.into())))
            .collect();
        if let (Ok(x), Ok(y)) = (a.eval(&pt), b.eval(&pt)) {
            prop_assert_eq!(a.add(&b).eval(&pt).unwrap(), &x + &y);
            prop_assert_eq!(a.mul(&b).eval(&pt).unwrap(), &x * &y);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn multiplication_is_associative(x in element(gl()), y in element(gl()), z in element(gl())) {
        let alg = &gl().algebra;
        prop_assert_eq!(alg.mul(&alg.mul(&x, &y), &z), alg.mul(&x, &alg.mul(&y, &z)));
    }

    #[test]
    fn forms_are_a_bimodule(x in element(gl()), y in element(gl()), w in one_form(gl())) {
        let calc = gl().calculus.as_ref().unwrap();
        prop_assert_eq!(
            calc.right_mul(&calc.left_mul(&x, &w), &y),
            calc.left_mul(&x, &calc.right_mul(&w, &y))
        );
        prop_assert_eq!(
            calc.right_mul(&calc.right_mul(&w, &x), &y),
            calc.right_mul(&w, &gl().algebra.mul(&x, &y))
        );
    }

    #[test]
    fn leibniz_for_d(x in element(torus()), y in element(torus())) {
        let m = torus();
        let calc = m.calculus.as_ref().unwrap();
        let xy = m.algebra.mul(&x, &y);
        let lhs = calc.d(&calc.element(&xy));
        let rhs = calc.right_mul(&calc.d(&calc.element(&x)), &y).add(&calc.left_mul(&x, &calc.d(&calc.element(&y))));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn transport_is_twisted_linear(a in element(torus()), w in one_form(torus()), s in 0usize..2) {
        let m = torus();
        let calc = m.calculus.as_ref().unwrap();
        let geo = m.geometry().unwrap().unwrap();
        let mut conn = Connection::trivial(2);
        conn.transport[0][1] = Form::theta(0).add(&Form::theta(1));
        let inv = geo.inverse_extension(s).base.apply(&m.algebra, &a);
        prop_assert_eq!(
            geo.transport_form(&conn, s, &calc.left_mul(&a, &w)),
            calc.left_mul(&inv, &geo.transport_form(&conn, s, &w))
        );
    }

    #[test]
    fn tensor_products_are_left_linear(a in element(torus()), b in element(torus()), w in one_form(torus()), v in one_form(torus())) {
        let m = torus();
        let calc = m.calculus.as_ref().unwrap();
        let geo = m.geometry().unwrap().unwrap();
        let w2 = calc.left_mul(&a, &w).add(&calc.left_mul(&b, &v));
        let lhs = geo.tensor_l(&w2, &v);
        let rhs = geo.left_mul(&a, &geo.tensor_l(&w, &v)).add(&geo.left_mul(&b, &geo.tensor_l(&v, &v)));
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(lhs, geo.tensor_l_via_a(&w2, &v));
    }
}
