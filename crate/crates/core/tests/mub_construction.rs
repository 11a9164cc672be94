mod common;

use mubpp_core::mub::{build_mub_set, conjugate_basis, verify_mub, MubSet};
use mubpp_core::protocol::{conjugate_correlation, prepare_epr};
use mubpp_core::{CMatrix, Complex64, FieldSpec};

const DIMS: [usize; 7] = [2, 3, 5, 7, 9, 11, 13];

#[test]
fn all_supported_dimensions_are_unbiased() {
    for n in DIMS {
        let set = MubSet::for_dimension(n).unwrap();
        let expected = if n == 2 { 3 } else { n + 1 };
        assert_eq!(set.len(), expected);
        for b in set.bases() {
            assert!(b.unitarity_defect() < 1e-10, "N={n} basis {}", b.label);
        }
        let report = verify_mub(&set, 1e-10);
        assert!(report.passed, "N={n}: {report:?}");
    }
}

#[test]
fn larger_extension_fields() {
    for n in [25, 27] {
        let report = verify_mub(&MubSet::for_dimension(n).unwrap(), 1e-10);
        assert!(report.passed, "N={n}: {report:?}");
    }
}

#[test]
fn dimension_five_matches_direct_formula() {
    // Independent of the field module: integer arithmetic mod 5.
    let set = MubSet::for_dimension(5).unwrap();
    for l in 1..=5 {
        for k in 0..5 {
            let oracle = common::prime_mub_vector(5, l, k);
            let got = set.basis(l).unwrap().vector(k);
            for q in 0..5 {
                assert!((got[q] - oracle[q]).norm() < 1e-12, "l={l} k={k} q={q}");
            }
        }
    }
    // exhaustive 6*5*6*5 overlap check on the oracle vectors
    let vecs: Vec<Vec<Vec<Complex64>>> = (0..=5)
        .map(|l| {
            (0..5)
                .map(|k| {
                    if l == 0 {
                        (0..5).map(|q| Complex64::new(if q == k { 1.0 } else { 0.0 }, 0.0)).collect()
                    } else {
                        common::prime_mub_vector(5, l, k)
                    }
                })
                .collect()
        })
        .collect();
    let mut worst = 0.0f64;
    for m in 0..6 {
        for k in 0..5 {
            for n in 0..6 {
                for l in 0..5 {
                    let target = if m == n { if k == l { 1.0 } else { 0.0 } } else { 0.2 };
                    worst = worst.max((common::inner(&vecs[m][k], &vecs[n][l]).norm_sqr() - target).abs());
                }
            }
        }
    }
    assert!(worst < 1e-12);
}

#[test]
fn gf9_bases_match_hand_rolled_trace() {
    use common::gf9;
    let set = MubSet::for_dimension(9).unwrap();
    let inv2: gf9::El = (2, 0); // 2 * 2 = 4 = 1 in Z_3
    for l in 1..=9 {
        let slope = gf9::from_index(l - 1);
        for k in 0..9 {
            let neg_k = gf9::mul((2, 0), gf9::from_index(k));
            for q in 0..9 {
                let eq = gf9::from_index(q);
                let e = gf9::trace(gf9::mul(neg_k, eq)) + gf9::trace(gf9::mul(slope, gf9::mul(gf9::mul(eq, eq), inv2)));
                let expect = Complex64::from_polar(1.0 / 3.0, 2.0 * std::f64::consts::PI * f64::from(e % 3) / 3.0);
                assert!((set.basis(l).unwrap().coeff(k, q) - expect).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn seven_reports_tiny_deviation() {
    let report = verify_mub(&MubSet::for_dimension(7).unwrap(), 1e-10);
    assert!(report.max_deviation < 1e-12, "{}", report.max_deviation);
}

#[test]
fn conjugate_basis_gives_perfect_correlation() {
    let epr = prepare_epr(3).unwrap();
    let set = MubSet::for_dimension(3).unwrap();
    for l in 0..4 {
        for k in 0..3 {
            let p = conjugate_correlation(&epr, &set, l, k).unwrap();
            assert!((p - 1.0).abs() < 1e-10, "l={l} k={k}: {p}");
        }
    }
    // Bob's conditional home state is the conjugate of Alice's vector, so
    // measuring in the unconjugated Fourier basis misses for k = 1.
    let b = set.basis(1).unwrap();
    let home = conjugate_basis(b).vector(1);
    let p = b.vector(1).inner(&home).unwrap().norm_sqr();
    assert!(p < 1e-12, "{p}");
}

#[test]
fn corrupted_entry_detected() {
    let set = MubSet::for_dimension(5).unwrap();
    let mut m = set.basis(2).unwrap().matrix.clone();
    m[(1, 1)] += Complex64::new(0.05, 0.0);
    let broken = set.with_basis_replaced(2, m).unwrap();
    let report = verify_mub(&broken, 1e-10);
    assert!(!report.passed);
    assert!(report.max_deviation > 1e-3);
}

#[test]
fn bit_identical_rebuilds_and_json() {
    let f = FieldSpec::for_order(9).unwrap();
    let a = build_mub_set(&f).unwrap();
    let b = build_mub_set(&f).unwrap();
    for (x, y) in a.bases().iter().zip(b.bases()) {
        let bits = |m: &CMatrix| m.as_slice().iter().flat_map(|z| [z.re.to_bits(), z.im.to_bits()]).collect::<Vec<_>>();
        assert_eq!(bits(&x.matrix), bits(&y.matrix));
    }
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    let back = MubSet::from_json(&a.to_json().unwrap()).unwrap();
    assert!(verify_mub(&back, 1e-10).passed);
}
