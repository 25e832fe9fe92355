use proptest::prelude::*;

use super::*;
use crate::algebra::Algebra;
use crate::fixtures::*;

fn scaling(alg: &Algebra, factors: &[(&str, Coeff)]) -> Endomorphism {
    let images: Vec<(&str, Element)> = factors
        .iter()
        .map(|(g, c)| (*g, alg.generator(g).unwrap().scale(c)))
        .collect();
    Endomorphism::new(alg, &images).unwrap()
}

fn rinv() -> Coeff {
    par("r").inv().unwrap()
}

fn qplane_phis(alg: &Algebra) -> [Endomorphism; 2] {
    [
        scaling(alg, &[("x", rinv()), ("y", rinv())]),
        scaling(alg, &[("y", rinv())]),
    ]
}

/// GL twists with `r = pq` already substituted.
fn gl_phis(alg: &Algebra) -> Vec<Endomorphism> {
    let p = par("p");
    let q = par("q");
    let ri = p.mul(&q).inv().unwrap();
    let inv = |c: &Coeff| c.inv().unwrap();
    let phi23 = scaling(alg, &[("b", inv(&p)), ("c", inv(&q)), ("d", ri.clone())]);
    vec![
        scaling(
            alg,
            &[
                ("b", q.div(&p).unwrap()),
                ("c", q.pow(-2).unwrap()),
                ("d", ri.clone()),
            ],
        ),
        phi23.clone(),
        phi23,
        scaling(alg, &[("b", ri.clone()), ("d", ri)]),
    ]
}

#[test]
fn qplane_apply() {
    let alg = qplane();
    let [phi1, phi2] = qplane_phis(&alg);
    let xy = word(&alg, "xy");
    assert_eq!(phi1.apply(&alg, &xy), xy.scale(&par("r").pow(-2).unwrap()));
    let id = Endomorphism::identity(&alg);
    assert_eq!(id.apply(&alg, &xy), xy);
    assert!(phi1.verify_respects_relations(&alg));
    assert!(phi2.verify_respects_relations(&alg));
    // inverse symbols: φ1(x^-1) = r x^-1
    let x = alg.table().lookup("x").unwrap();
    let xi = alg.table().inverse(x).unwrap();
    assert_eq!(*phi1.symbol_image(xi), alg.symbol(xi).scale(&par("r")));
}

#[test]
fn gl_apply_and_scalings() {
    let alg = glpq();
    let phis = gl_phis(&alg);
    let bc = word(&alg, "bc");
    let ri = par("p").mul(&par("q")).inv().unwrap();
    assert_eq!(phis[3].apply(&alg, &bc), bc.scale(&ri));
    assert!(phis.iter().all(|f| f.verify_respects_relations(&alg)));

    let (al, be, ga) = (par("p"), par("q"), par("r"));
    let good = scaling(
        &alg,
        &[
            ("a", al.clone()),
            ("b", be.clone()),
            ("c", ga.clone()),
            ("d", be.mul(&ga).div(&al).unwrap()),
        ],
    );
    assert!(good.verify_respects_relations(&alg));
    let bad = scaling(
        &alg,
        &[
            ("a", al),
            ("b", be),
            ("c", ga),
            ("d", Coeff::from_integer(2)),
        ],
    );
    assert!(!bad.verify_respects_relations(&alg));
    assert_eq!(bad.broken_relation(&alg), Some(5));
}

#[test]
fn swap_breaks_qplane() {
    let alg = qplane();
    let x = alg.generator("x").unwrap();
    let y = alg.generator("y").unwrap();
    let swap = Endomorphism::new(&alg, &[("x", y), ("y", x)]).unwrap();
    assert!(!swap.verify_respects_relations(&alg));
}

#[test]
fn compose_and_inverse() {
    let alg = qplane();
    let [phi1, phi2] = qplane_phis(&alg);
    let y = alg.generator("y").unwrap();
    let both = phi1.compose(&alg, &phi2);
    assert_eq!(both.apply(&alg, &y), y.scale(&par("r").pow(-2).unwrap()));
    let inv = phi1.declared_inverse().unwrap().clone();
    let id = phi1.compose(&alg, &inv);
    assert!(id.is_identity(&alg));
    assert!(phi1.verify_inverse(&alg).unwrap());
    assert!(both.verify_inverse(&alg).unwrap());
}

#[test]
fn missing_inverse_is_an_error() {
    let alg = qplane();
    let x = alg.generator("x").unwrap();
    let sq = alg.mul(&x, &x);
    let f = Endomorphism::new(&alg, &[("x", sq)]).unwrap();
    assert_eq!(f.verify_inverse(&alg), Err(MorphismError::MissingInverse));
}

#[test]
fn non_invertible_image_is_rejected() {
    let alg = qplane();
    let x = alg.generator("x").unwrap();
    let y = alg.generator("y").unwrap();
    let err = Endomorphism::new(&alg, &[("x", x.add(&y))]).unwrap_err();
    assert!(matches!(err, MorphismError::NotInvertibleImage(_)));
}

#[test]
fn derivations() {
    let alg = qplane();
    let [phi1, _] = qplane_phis(&alg);
    let e1 = TwistedDerivation::discrete(phi1);
    let x = alg.generator("x").unwrap();
    assert_eq!(e1.apply(&alg, &x), x.scale(&rinv().sub(&Coeff::one())));
    assert!(e1.apply(&alg, &Element::one()).is_zero());

    let gl = glpq();
    let phi4 = gl_phis(&gl).pop().unwrap();
    let a4 = par("q")
        .pow(2)
        .unwrap()
        .div(&Coeff::one().sub(&par("r")))
        .unwrap();
    let e4 = TwistedDerivation::new(Element::scalar(a4.clone()), phi4.clone());
    for g in ["a", "b", "c", "d"] {
        let x = gl.generator(g).unwrap();
        let expected = phi4.apply(&gl, &x).sub(&x).scale(&a4);
        assert_eq!(e4.apply(&gl, &x), expected);
    }
}

#[test]
fn localized_images_are_forced() {
    let alg = glpq().localize(&det(&glpq()), "Di").unwrap();
    let phis = gl_phis(&alg);
    for f in &phis {
        assert!(f.verify_respects_relations(&alg));
        assert!(f.verify_inverse(&alg).unwrap());
    }
    let di = alg.table().lookup("Di").unwrap();
    // φ1(D) = q^2/r... = r^-1 D under r = pq
    let pq = par("p").mul(&par("q"));
    assert_eq!(*phis[0].symbol_image(di), alg.symbol(di).scale(&pq));
}

fn element_from(alg: &Algebra, spec: &[(usize, Vec<u16>)]) -> Element {
    let pool = crate::sample::Sampler::standard_pool(alg);
    let n = alg.table().symbol_count() as u16;
    let mut out = Element::zero();
    for (c, letters) in spec {
        let w = Word::from_letters(letters.iter().map(|s| s % n).collect::<Vec<_>>());
        out.add_scaled(&pool[c % pool.len()], &alg.word(&w));
    }
    out
}

fn spec_strategy() -> impl Strategy<Value = Vec<(usize, Vec<u16>)>> {
    prop::collection::vec((0usize..4, prop::collection::vec(0u16..16, 0..=3)), 1..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn twisted_leibniz_gl(xs in spec_strategy(), ys in spec_strategy(), s in 0usize..4) {
        let alg = glpq();
        let phi = gl_phis(&alg).swap_remove(s);
        let weight = alg.generator("a").unwrap();
        let e = TwistedDerivation::new(weight, phi.clone());
        let x = element_from(&alg, &xs);
        let y = element_from(&alg, &ys);
        let lhs = e.apply(&alg, &alg.mul(&x, &y));
        let rhs = alg.mul(&e.apply(&alg, &x), &phi.apply(&alg, &y)).add(&alg.mul(&x, &e.apply(&alg, &y)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn automorphism_is_multiplicative(xs in spec_strategy(), ys in spec_strategy(), s in 0usize..2) {
        let alg = qplane();
        let phi = qplane_phis(&alg)[s].clone();
        let x = element_from(&alg, &xs);
        let y = element_from(&alg, &ys);
        prop_assert_eq!(
            phi.apply(&alg, &alg.mul(&x, &y)),
            alg.mul(&phi.apply(&alg, &x), &phi.apply(&alg, &y))
        );
    }
}
