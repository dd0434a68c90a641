use proptest::prelude::*;

use freearr::arrangement::{lattice, Arrangement, UniPoly};
use freearr::certify::{
    certificate_from_json, certificate_to_json, certify_inductive, lift_inductive, verify_cert,
};
use freearr::dsolve::{
    free_hilbert_dim, freeness_oracle, freeness_oracle_with, graded_dim, FreenessVerdict,
    SolverOptions,
};
use freearr::exactlin::rat;
use freearr::multi::{rank2_exponents, triple, ziegler_multiplicity, Multiarrangement};

fn build(dim: usize, rows: &[Vec<i64>]) -> Option<Arrangement> {
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    Arrangement::from_ints(dim, &refs).ok()
}

fn arrangement(dim: usize, max_len: usize) -> impl Strategy<Value = Arrangement> {
    proptest::collection::vec(proptest::collection::vec(-2i64..=2, dim), 2..=max_len)
        .prop_filter_map("distinct nonzero forms", move |rows| build(dim, &rows))
}

fn multi(dim: usize, max_len: usize, max_mult: u32) -> impl Strategy<Value = Multiarrangement> {
    arrangement(dim, max_len).prop_flat_map(move |a| {
        let n = a.len();
        proptest::collection::vec(1..=max_mult, n)
            .prop_map(move |m| Multiarrangement::new(a.clone(), m).unwrap())
    })
}

/// Forms pulled back along an invertible integer matrix.
fn transformed(a: &Arrangement, t: &[Vec<i64>]) -> Option<Arrangement> {
    let l = a.dim();
    let rows: Vec<Vec<_>> = a
        .forms()
        .iter()
        .map(|f| {
            let c = f.to_rationals();
            (0..l)
                .map(|j| (0..l).map(|i| &c[i] * rat(t[i][j])).sum())
                .collect()
        })
        .collect();
    Arrangement::new(l, &rows).ok()
}

fn invertible3() -> impl Strategy<Value = Vec<Vec<i64>>> {
    proptest::collection::vec(proptest::collection::vec(-2i64..=2, 3), 3).prop_filter(
        "invertible",
        |t| {
            let d = t[0][0] * (t[1][1] * t[2][2] - t[1][2] * t[2][1])
                - t[0][1] * (t[1][0] * t[2][2] - t[1][2] * t[2][0])
                + t[0][2] * (t[1][0] * t[2][1] - t[1][1] * t[2][0]);
            d != 0
        },
    )
}

fn chi(a: &Arrangement) -> UniPoly {
    lattice(a).unwrap().char_poly()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn deletion_restriction_identity(a in arrangement(3, 6)) {
        for h in 0..a.len() {
            let d = chi(&a.deletion(h).unwrap());
            let r = chi(&a.restriction(h).unwrap().arrangement);
            prop_assert_eq!(chi(&a), d.sub(&r));
        }
    }

    #[test]
    fn char_poly_is_coordinate_free(a in arrangement(3, 6), t in invertible3()) {
        let b = transformed(&a, &t).unwrap();
        prop_assert_eq!(chi(&a), chi(&b));
    }

    #[test]
    fn ziegler_order_is_one_less(a in arrangement(3, 6)) {
        for h in 0..a.len() {
            prop_assert_eq!(ziegler_multiplicity(&a, h).unwrap().multi.order(), a.len() as u64 - 1);
        }
    }

    #[test]
    fn free_verdicts_factor_and_match_hilbert(a in arrangement(3, 6)) {
        let ma = Multiarrangement::simple(a.clone());
        if let FreenessVerdict::Free { exponents, .. } = freeness_oracle(&ma, None) {
            prop_assert_eq!(chi(&a), UniPoly::from_roots(exponents.as_slice()));
            for d in 0..=exponents.as_slice().last().copied().unwrap_or(0) + 1 {
                prop_assert_eq!(graded_dim(&ma, d) as u64, free_hilbert_dim(&exponents, d));
            }
        }
    }

    #[test]
    fn rank_two_exponents_sum_to_order(ma in multi(2, 5, 4)) {
        let e = rank2_exponents(&ma).unwrap();
        prop_assert_eq!(e.sum(), ma.order());
        let v = freeness_oracle(&ma, None);
        prop_assert_eq!(v.exponents(), Some(&e));
    }

    #[test]
    fn verdict_ignores_monomial_order(ma in multi(3, 5, 2)) {
        let rev = SolverOptions { reverse_monomials: true };
        let a = freeness_oracle(&ma, None);
        let b = freeness_oracle_with(&ma, None, rev).verdict;
        prop_assert_eq!(a.is_free(), b.is_free());
        prop_assert_eq!(a.is_not_free(), b.is_not_free());
        prop_assert_eq!(a.exponents(), b.exponents());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn free_triples_differ_in_one_step(ma in multi(3, 5, 2)) {
        let Some(e) = freeness_oracle(&ma, None).exponents().cloned() else {
            return Ok(());
        };
        for h in ma.support() {
            let d = ma.deletion(h).unwrap();
            if let Some(ed) = freeness_oracle(&d, None).exponents() {
                prop_assert!(e.differs_by_one_step(ed), "{} vs {}", e, ed);
            }
        }
    }

    #[test]
    fn euler_multiplicity_is_coordinate_free(ma in multi(3, 5, 3), t in invertible3()) {
        let b = transformed(ma.arrangement(), &t).unwrap();
        let mb = Multiarrangement::new(b, ma.mult().to_vec()).unwrap();
        for h in ma.support() {
            let mut x = triple(&ma, h).unwrap().restriction.mult().to_vec();
            let mut y = triple(&mb, h).unwrap().restriction.mult().to_vec();
            x.sort();
            y.sort();
            prop_assert_eq!(x, y);
        }
    }

    #[test]
    fn certificates_round_trip_and_lift(a in arrangement(3, 6)) {
        let Some(c) = certify_inductive(&a).unwrap() else {
            return Ok(());
        };
        prop_assert_eq!(verify_cert(&c), Ok(()));
        let v = certificate_to_json(&c);
        let back = certificate_from_json(&v).unwrap();
        prop_assert_eq!(certificate_to_json(&back), v);
        let rest = c.exponents().without_one(1);
        for h0 in 0..a.len() {
            let l = lift_inductive(&c, h0).unwrap();
            prop_assert_eq!(verify_cert(&l), Ok(()));
            prop_assert_eq!(Some(l.exponents()), rest.as_ref());
        }
    }
}
