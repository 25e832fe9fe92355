use crate::algebra::{Algebra, Element, FreeSum, GeneratorTable, Relation, Sym, Word};
use crate::coeff::{Coeff, ParameterSet};

pub fn par(n: &str) -> Coeff {
    Coeff::param(n)
}

pub fn rel(alg_table: &GeneratorTable, lhs: &[(Coeff, &str)], rhs: &[(Coeff, &str)]) -> Relation {
    let conv = |side: &[(Coeff, &str)]| -> FreeSum {
        side.iter()
            .map(|(c, w)| {
                let letters = w
                    .chars()
                    .map(|ch| alg_table.lookup(&ch.to_string()).unwrap());
                (c.clone(), Word::from_letters(letters))
            })
            .collect()
    };
    Relation {
        lhs: conv(lhs),
        rhs: conv(rhs),
    }
}

pub fn qplane() -> Algebra {
    let table = GeneratorTable::new(&["x", "y"], &["x", "y"]).unwrap();
    let r = rel(&table, &[(Coeff::one(), "xy")], &[(par("q"), "yx")]);
    Algebra::new(ParameterSet::new(["q", "r"]).unwrap(), table, vec![r]).unwrap()
}

pub fn glpq() -> Algebra {
    let table = GeneratorTable::new(&["a", "b", "c", "d"], &["b", "c"]).unwrap();
    let one = Coeff::one;
    let p = par("p");
    let q = par("q");
    let pq = p.sub(&q.inv().unwrap());
    let rels = vec![
        rel(&table, &[(one(), "ab")], &[(p.clone(), "ba")]),
        rel(&table, &[(one(), "ac")], &[(q.clone(), "ca")]),
        rel(&table, &[(one(), "bc")], &[(q.div(&p).unwrap(), "cb")]),
        rel(&table, &[(one(), "bd")], &[(q.clone(), "db")]),
        rel(&table, &[(one(), "cd")], &[(p.clone(), "dc")]),
        rel(&table, &[(one(), "ad")], &[(one(), "da"), (pq, "bc")]),
    ];
    Algebra::new(ParameterSet::new(["p", "q", "r"]).unwrap(), table, rels).unwrap()
}

pub fn det(alg: &Algebra) -> Element {
    let w = |s: &str| {
        let letters: Vec<Sym> = s
            .chars()
            .map(|ch| alg.table().lookup(&ch.to_string()).unwrap())
            .collect();
        alg.word(&Word::from_letters(letters))
    };
    w("ad").sub(&w("bc").scale(&par("p")))
}

pub fn word(alg: &Algebra, s: &str) -> Element {
    let letters: Vec<Sym> = s
        .chars()
        .map(|ch| alg.table().lookup(&ch.to_string()).unwrap())
        .collect();
    alg.word(&Word::from_letters(letters))
}

pub fn show(alg: &Algebra, e: &Element) -> String {
    e.display(alg.table()).to_string()
}

use std::sync::Arc;

use crate::calculus::{Calculus, CalculusSpec, Form, ThetaRule};
use crate::morphism::Endomorphism;

pub fn c(n: i64) -> Coeff {
    Coeff::from_integer(n)
}

pub fn scaling(alg: &Algebra, factors: &[(&str, Coeff)]) -> Endomorphism {
    let images: Vec<(&str, Element)> = factors
        .iter()
        .map(|(g, c)| (*g, alg.generator(g).unwrap().scale(c)))
        .collect();
    Endomorphism::new(alg, &images).unwrap()
}

fn rule(hi: usize, lo: usize, rhs: &[(Coeff, usize, usize)]) -> ThetaRule {
    ThetaRule {
        lhs: (hi - 1, lo - 1),
        rhs: rhs
            .iter()
            .map(|(c, i, j)| (c.clone(), (i - 1, j - 1)))
            .collect(),
    }
}

pub fn labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("t{i}")).collect()
}

pub fn qplane_spec(alg: &Algebra) -> CalculusSpec {
    let ri = par("r").inv().unwrap();
    CalculusSpec {
        labels: labels(2),
        twists: vec![
            scaling(alg, &[("x", ri.clone()), ("y", ri.clone())]),
            scaling(alg, &[("y", ri)]),
        ],
        weights: vec![Element::one(), Element::one()],
        theta_rules: vec![
            rule(1, 1, &[]),
            rule(2, 2, &[]),
            rule(2, 1, &[(c(-1), 1, 2)]),
        ],
        differentials: Vec::new(),
    }
}

/// The quantum torus calculus, with `dx`, `dy` given by inverting the
/// expressions of `θ^1`, `θ^2` through `dx x^-1` and `dy y^-1`.
pub fn qplane_calc() -> Calculus {
    let alg = Arc::new(qplane());
    let bare = Calculus::new(alg.clone(), qplane_spec(&alg)).unwrap();
    let one_minus_r = c(1).sub(&par("r"));
    let x = alg.generator("x").unwrap();
    let y = alg.generator("y").unwrap();
    let dx = bare.right_mul(&Form::theta(0), &x).scale(&one_minus_r);
    let dy = bare
        .right_mul(&Form::theta(0).add(&Form::theta(1)), &y)
        .scale(&one_minus_r);
    let mut spec = qplane_spec(&alg);
    spec.differentials = vec![Some(dx), Some(dy)];
    Calculus::new(alg, spec).unwrap()
}

/// `r` with `r = pq` imposed.
pub fn r_pq() -> Coeff {
    par("p").mul(&par("q"))
}

pub fn gl_spec(alg: &Algebra, r: &Coeff) -> CalculusSpec {
    let p = par("p");
    let q = par("q");
    let ri = r.inv().unwrap();
    let inv = |c: &Coeff| c.inv().unwrap();
    let phi23 = scaling(alg, &[("b", inv(&p)), ("c", inv(&q)), ("d", ri.clone())]);
    let k = c(1).sub(r).inv().unwrap();
    let qr = q.mul(r).mul(&k).neg();
    let a = alg.generator("a").unwrap();
    let d = alg.generator("d").unwrap();
    CalculusSpec {
        labels: labels(4),
        twists: vec![
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
        ],
        weights: vec![
            det(alg).scale(&qr),
            a.scale(&qr),
            d.scale(&q.mul(&k)),
            Element::scalar(q.pow(2).unwrap().mul(&k)),
        ],
        theta_rules: vec![
            rule(1, 1, &[]),
            rule(2, 2, &[]),
            rule(3, 3, &[]),
            rule(4, 4, &[]),
            rule(2, 1, &[(r.neg(), 1, 2)]),
            rule(3, 1, &[(c(-1), 1, 3)]),
            rule(3, 2, &[(c(-1), 2, 3)]),
            rule(4, 1, &[(r.neg(), 1, 4), (p.sub(&q.inv().unwrap()), 2, 3)]),
            rule(4, 2, &[(r.neg(), 2, 4)]),
            rule(4, 3, &[(r.neg(), 3, 4)]),
        ],
        differentials: Vec::new(),
    }
}

/// The Maurer-Cartan forms in the `θ` basis.
pub fn gl_mc_forms(calc: &Calculus) -> Vec<Form> {
    let alg = calc.algebra();
    let p = par("p");
    let q = par("q");
    let t = |s: usize| Form::theta(s - 1);
    let el = |s: &str| word(alg, s);
    let lm = |e: Element, f: Form| calc.left_mul(&e, &f);
    vec![
        lm(el("bc"), t(1)),
        lm(el("b"), lm(el("d"), t(1)).add(&t(2))).scale(&q.div(&p).unwrap()),
        lm(el("ac"), t(1)).scale(&p.neg()).add(&lm(el("c"), t(3))),
        lm(el("ad"), t(1))
            .scale(&q.neg())
            .sub(&lm(el("a"), t(2)).scale(&q))
            .add(&lm(el("d"), t(3)).scale(&p.inv().unwrap()))
            .add(&t(4).scale(&q.div(&p).unwrap())),
    ]
}

/// GL calculus with `dT = T ϑ` as generator differentials.
pub fn gl_calc_with(r: &Coeff, tweak: impl Fn(&mut CalculusSpec)) -> Calculus {
    let alg = Arc::new(glpq());
    let mut spec = gl_spec(&alg, r);
    tweak(&mut spec);
    let bare = Calculus::new(alg.clone(), spec.clone()).unwrap();
    let v = gl_mc_forms(&bare);
    let el = |s: &str| word(&alg, s);
    let lm = |e: Element, f: &Form| bare.left_mul(&e, f);
    spec.differentials = vec![
        Some(lm(el("a"), &v[0]).add(&lm(el("b"), &v[2]))),
        Some(lm(el("a"), &v[1]).add(&lm(el("b"), &v[3]))),
        Some(lm(el("c"), &v[0]).add(&lm(el("d"), &v[2]))),
        Some(lm(el("c"), &v[1]).add(&lm(el("d"), &v[3]))),
    ];
    Calculus::new(alg, spec).unwrap()
}

pub fn gl_calc() -> Calculus {
    gl_calc_with(&r_pq(), |_| {})
}
