mod common;

use arithsurf::exactlat::Prime;
use arithsurf::graded::{degree_piece, monomial_basis, GradedPresentation};
use num_integer::Integer;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn composition_commutes_with_pieces(
        (phi, psi) in (common::twists(1..=3, -3, 3), common::twists(1..=3, -3, 3), common::twists(1..=3, -3, 3))
            .prop_flat_map(|(a, b, c)| (common::map_with(b.clone(), c, 4), common::map_with(a, b, 4))),
        d in -4i64..5,
    ) {
        let comp = phi.compose(&psi).unwrap();
        prop_assert_eq!(degree_piece(&comp, d), degree_piece(&phi, d).mul(&degree_piece(&psi, d)));
    }

    #[test]
    fn reduction_commutes_with_pieces(
        phi in (common::twists(1..=3, -3, 2), common::twists(1..=3, -3, 2))
            .prop_flat_map(|(a, b)| common::map_with(a, b, 50)),
        p in prop::sample::select(vec![2u32, 3, 5, 13]),
        d in -3i64..5,
    ) {
        let p = Prime::new(p).unwrap();
        let red = GradedPresentation::over_integers(phi.clone()).reduce_mod(&p).unwrap();
        let lhs = degree_piece(red.map(), d);
        let rhs = degree_piece(&phi, d);
        for (x, y) in lhs.entries().iter().zip(rhs.entries()) {
            prop_assert_eq!(x.clone(), y.mod_floor(p.value()));
        }
    }

    #[test]
    fn monomial_basis_length(d in -20i64..20) {
        prop_assert_eq!(monomial_basis(d).len() as i64, (d + 1).max(0));
    }
}
