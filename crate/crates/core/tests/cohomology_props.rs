use arithsurf::cohomology::{h0_dim, h1, lattice_family, sheaf_rank_degree};
use arithsurf::graded::GradedPresentation;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn split_bundles_follow_serre_duality(twists in prop::collection::vec(-5i64..5, 1..4), d in -6i64..6) {
        let p = GradedPresentation::split(&twists);
        let h0: i64 = twists.iter().map(|a| (a + d + 1).max(0)).sum();
        let h1v: i64 = twists.iter().map(|a| (-a - d - 1).max(0)).sum();
        prop_assert_eq!(h0_dim(&p, d).unwrap() as i64, h0);
        prop_assert_eq!(h1(&p, d).unwrap() as i64, h1v);
        let (r, e) = sheaf_rank_degree(&p).unwrap();
        prop_assert_eq!(h0 - h1v, r as i64 * (d + 1) + e);
    }

    #[test]
    fn family_ranks_and_inclusions(twists in prop::collection::vec(-3i64..3, 1..3)) {
        let p = GradedPresentation::split(&twists);
        let fam = lattice_family(&p, -2, 2).unwrap();
        for d in -2..=2 {
            prop_assert_eq!(fam.rank(d), h0_dim(&p, d).unwrap());
            prop_assert!(fam.lattice(d).is_saturated());
        }
    }
}
