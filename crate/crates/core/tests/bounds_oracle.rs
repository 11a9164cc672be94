mod common;

use mubpp_core::bounds::{
    bound_two_basis, build_report, build_v_matrix, exact_max_nondetection, pq_structure_report, verify_pq_structure,
    BasisSubset,
};
use mubpp_core::MubSet;

/// Pairs (mu, nu) in GF(p)^2 with (mu - nu)(mu + nu) = 0, by integer arithmetic.
fn support_oracle(p: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for mu in 0..p {
        for nu in 0..p {
            if ((mu + p - nu) * (mu + nu)) % p == 0 {
                out.push((mu, nu));
            }
        }
    }
    out
}

#[test]
fn pq_support_matches_enumeration() {
    for p in [3, 5, 7] {
        let support = support_oracle(p);
        // diagonal plus the anti-diagonal pairs nu = -mu, sharing (0, 0)
        assert_eq!(support.len(), 2 * p - 1);
        let set = MubSet::for_dimension(p).unwrap();
        for alpha in 0..p {
            let report = verify_pq_structure(&set, alpha).unwrap();
            assert_eq!(report.support, support.len(), "p={p} alpha={alpha}");
            assert!(report.sigma1_q <= 2.0 + 1e-9);
            assert!(report.schur_q <= 2.0 + 1e-9);
        }
    }
}

#[test]
fn pq_holds_for_extension_field() {
    let set = MubSet::for_dimension(9).unwrap();
    for alpha in 0..9 {
        let r = pq_structure_report(&set, alpha).unwrap();
        assert!(r.passed, "{r:?}");
    }
}

#[test]
fn exact_optimum_matches_eigen_oracle() {
    for n in common::ODD_PRIMES {
        let set = MubSet::for_dimension(n).unwrap();
        for subset in [BasisSubset::All, BasisSubset::NoComputational, BasisSubset::Explicit(vec![0, 1])] {
            let idx = subset.indices(&set).unwrap();
            for alpha in 0..n {
                let v = build_v_matrix(alpha, &set, &idx).unwrap();
                let (d, _) = exact_max_nondetection(&v).unwrap();
                let oracle = common::sigma1_sq_oracle(&v.rows) / idx.len() as f64;
                assert!((d - oracle).abs() <= 1e-9 * oracle, "N={n} {subset} alpha={alpha}");
            }
        }
    }
}

#[test]
fn report_examples() {
    let r3 = build_report(3, &BasisSubset::All).unwrap();
    assert!(r3.d_exact <= 0.683 && 0.683 <= 0.75);
    assert!(r3.d_exact <= r3.bound_eq13.unwrap() + 1e-9);
    assert!(r3.d_exact <= r3.bound_thm3.unwrap() + 1e-9);
    assert!(r3.ordering_violations().is_empty(), "{:?}", r3.ordering_violations());

    let r7 = build_report(7, &BasisSubset::NoComputational).unwrap();
    assert!(r7.d_exact <= 2.0 / 7.0 + 1e-9);
    assert_eq!(r7.bound_corollary, Some(2.0 / 7.0));

    let r5 = build_report(5, &BasisSubset::All).unwrap();
    assert!((1.0..=3.0).contains(&r5.sigma1_sq));
    assert!(r5.bound_thm1 <= 0.5);
}

#[test]
fn two_basis_curve_is_exact() {
    for n in common::ODD_PRIMES {
        let r = build_report(n, &BasisSubset::Explicit(vec![0, 1])).unwrap();
        assert!((r.d_exact - bound_two_basis(n)).abs() < 1e-9, "N={n}");
        assert!(r.alpha_spread < 1e-9);
    }
}

#[test]
fn gram_structure_and_schur() {
    for n in common::ODD_PRIMES {
        let set = MubSet::for_dimension(n).unwrap();
        let all: Vec<usize> = (0..=n).collect();
        for alpha in 0..n {
            let v = build_v_matrix(alpha, &set, &all).unwrap();
            assert!(v.gram_offdiag_deviation() < 1e-10);
            let w = v.gram();
            let schur = w.schur_singular_bound();
            let expected = 1.0 + n as f64 / (n as f64).sqrt();
            assert!((schur - expected).abs() < 1e-9);
            assert!(v.sigma1_sq().unwrap() <= schur + 1e-9);
        }
    }
}

#[test]
fn moduli_of_w_do_not_depend_on_alpha() {
    let set = MubSet::for_dimension(7).unwrap();
    let all: Vec<usize> = (0..=7).collect();
    let base = build_v_matrix(0, &set, &all).unwrap().gram();
    for alpha in 1..7 {
        let w = build_v_matrix(alpha, &set, &all).unwrap().gram();
        for i in 0..8 {
            for j in 0..8 {
                assert!((w[(i, j)].norm() - base[(i, j)].norm()).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn excluding_computational_basis_helps() {
    for n in common::ODD_PRIMES {
        let full = build_report(n, &BasisSubset::All).unwrap();
        let reduced = build_report(n, &BasisSubset::NoComputational).unwrap();
        assert!(reduced.d_exact <= 2.0 / n as f64 + 1e-9);
        // 2/N < 2.618/(N+1) only once N > 3.24, so N = 3 is the exception
        if n >= 5 {
            assert!(reduced.d_exact < full.d_exact, "N={n}");
        } else {
            assert!(reduced.d_exact > full.d_exact, "N={n}");
        }
    }
}
