use arithsurf::cohomology::{h0_dim, h0_dim_over, h0_matrices};
use arithsurf::exactlat::{determinantal_content, Base};
use arithsurf::graded::Form;
use arithsurf::hirzebruch::{bundle_from_normal_form, degree_profile, reduce_coefficients, NormalForm};
use num_integer::Integer;
use num_traits::Zero;
use proptest::prelude::*;

fn normal_form(max_n: i64, c: i64) -> impl Strategy<Value = NormalForm> {
    (0..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(-c..=c, (n + 1) as usize)
            .prop_map(move |v| NormalForm::new(n, Form::from_coeffs(n, v)).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn bundle_has_degree_n(nf in normal_form(4, 30)) {
        let b = bundle_from_normal_form(&nf).unwrap();
        prop_assert_eq!((b.rank(), b.degree()), (2, nf.n()));
    }

    #[test]
    fn profile_invariant_under_reduction(nf in normal_form(4, 12)) {
        prop_assert_eq!(degree_profile(&nf).unwrap(), degree_profile(&reduce_coefficients(&nf)).unwrap());
    }

    #[test]
    fn jumps_even_and_certified(nf in normal_form(4, 12)) {
        let b = bundle_from_normal_form(&nf).unwrap();
        let prof = degree_profile(&nf).unwrap();
        let generic = prof.generic;
        let twist = -generic.b() - 1;
        let contents: Vec<_> = h0_matrices(b.presentation(), twist)
            .unwrap()
            .iter()
            .map(determinantal_content)
            .collect();
        let q_dim = h0_dim(&b.presentation().over_rationals(), twist).unwrap();
        for (p, t) in &prof.jumps {
            prop_assert_eq!((t.type_number() - generic.type_number()).rem_euclid(2), 0);
            prop_assert!(t.type_number() > generic.type_number());
            prop_assert!(contents.iter().any(|c| !c.is_zero() && c.is_multiple_of(p.value())));
            let fiber = b.presentation().reduce_mod(p).unwrap();
            prop_assert!(h0_dim_over(&fiber, &Base::Prime(p.clone()), twist).unwrap() > q_dim);
        }
    }

    #[test]
    fn degree_one_is_constant(c in prop::collection::vec(-50i64..=50, 2)) {
        let nf = NormalForm::new(1, Form::from_coeffs(1, c)).unwrap();
        let prof = degree_profile(&nf).unwrap();
        prop_assert!(prof.is_constant());
        prop_assert_eq!(prof.generic.type_number(), 1);
    }
}
