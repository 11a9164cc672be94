mod common;

use std::f64::consts::PI;

use mubpp_core::{Complex64, FieldElement, FieldSpec};

const ORDERS: [usize; 7] = [2, 3, 5, 7, 9, 11, 13];

#[test]
fn ring_axioms_exhaustive() {
    for n in ORDERS {
        let f = FieldSpec::for_order(n).unwrap();
        let els: Vec<FieldElement> = FieldElement::all(&f).collect();
        for a in &els {
            for b in &els {
                assert_eq!(a.add(b).unwrap(), b.add(a).unwrap());
                assert_eq!(a.mul(b).unwrap(), b.mul(a).unwrap());
                assert_eq!(a.sub(b).unwrap().add(b).unwrap(), *a);
                for c in &els {
                    let ab_c = a.mul(b).unwrap().mul(c).unwrap();
                    let a_bc = a.mul(&b.mul(c).unwrap()).unwrap();
                    assert_eq!(ab_c, a_bc, "GF({n}) associativity");
                    assert_eq!(a.add(b).unwrap().add(c).unwrap(), a.add(&b.add(c).unwrap()).unwrap());
                    let lhs = a.mul(&b.add(c).unwrap()).unwrap();
                    let rhs = a.mul(b).unwrap().add(&a.mul(c).unwrap()).unwrap();
                    assert_eq!(lhs, rhs, "GF({n}) distributivity");
                }
            }
        }
    }
}

#[test]
fn unique_inverses() {
    for n in ORDERS {
        let f = FieldSpec::for_order(n).unwrap();
        let one = FieldElement::one(&f);
        for a in FieldElement::all(&f).filter(|a| !a.is_zero()) {
            assert_eq!(a.div(&a).unwrap(), one);
            assert_eq!(a.mul(&one.div(&a).unwrap()).unwrap(), one);
            let count = FieldElement::all(&f).filter(|b| a.mul(b).unwrap() == one).count();
            assert_eq!(count, 1, "GF({n}) inverse of {a:?}");
        }
    }
}

#[test]
fn extension_inverse_matches_fermat() {
    for n in [9, 25, 27, 49, 81, 121, 125, 169] {
        let f = FieldSpec::for_order(n).unwrap();
        for a in FieldElement::all(&f).filter(|a| !a.is_zero()) {
            assert_eq!(a.inv().unwrap(), a.pow(n as u64 - 2), "GF({n})");
        }
    }
}

#[test]
fn multiplicative_group_order() {
    for n in [9, 27, 81] {
        let f = FieldSpec::for_order(n).unwrap();
        let one = FieldElement::one(&f);
        for a in FieldElement::all(&f).filter(|a| !a.is_zero()) {
            assert_eq!(a.pow(n as u64 - 1), one);
        }
    }
}

#[test]
fn trace_matches_hand_rolled_gf9() {
    let f = FieldSpec::for_order(9).unwrap();
    for i in 0..9 {
        let a = FieldElement::from_index(&f, i).unwrap();
        assert_eq!(a.char_exponent(), common::gf9::trace(common::gf9::from_index(i)), "index {i}");
    }
}

#[test]
fn gf9_products_match_hand_rolled() {
    let f = FieldSpec::for_order(9).unwrap();
    for i in 0..9 {
        for j in 0..9 {
            let got = FieldElement::from_index(&f, i).unwrap().mul(&FieldElement::from_index(&f, j).unwrap()).unwrap();
            let (a, b) = common::gf9::mul(common::gf9::from_index(i), common::gf9::from_index(j));
            assert_eq!(got.coeffs(), &[a, b]);
        }
    }
}

#[test]
fn character_exponent_is_additive() {
    for n in [3, 5, 9, 13, 25, 27] {
        let f = FieldSpec::for_order(n).unwrap();
        let p = f.p();
        let els: Vec<FieldElement> = FieldElement::all(&f).collect();
        for a in &els {
            for b in &els {
                let lhs = a.add(b).unwrap().char_exponent();
                assert_eq!(lhs, (a.char_exponent() + b.char_exponent()) % p, "GF({n})");
            }
        }
    }
}

#[test]
fn character_sum_identity() {
    // sum_k w^{chi(k l)} = N [l = 0]
    for n in [3, 5, 7, 9, 11, 13, 25, 27] {
        let f = FieldSpec::for_order(n).unwrap();
        let p = f64::from(f.p());
        for l in FieldElement::all(&f) {
            let s: Complex64 = FieldElement::all(&f)
                .map(|k| Complex64::from_polar(1.0, 2.0 * PI * f64::from(k.mul(&l).unwrap().char_exponent()) / p))
                .sum();
            let expected = if l.is_zero() { n as f64 } else { 0.0 };
            assert!((s - Complex64::new(expected, 0.0)).norm() < 1e-10, "GF({n}) l={l:?}: {s}");
        }
    }
}
