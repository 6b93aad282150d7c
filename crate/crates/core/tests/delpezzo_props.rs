use arithsurf::delpezzo::{
    general_position, no_six_on_conic_everywhere, standard_configuration, standardize, PointConfiguration,
    ProjectivePoint, Verdict, Witness,
};
use arithsurf::exactlat::{mod_p_rank, IntegerMatrix, Prime};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn point(range: i64) -> impl Strategy<Value = ProjectivePoint> {
    prop::array::uniform3(-range..=range)
        .prop_filter("nonzero", |c| c.iter().any(|&x| x != 0))
        .prop_map(|[a, b, c]| ProjectivePoint::from_i64(a, b, c).unwrap())
}

fn config(len: usize, range: i64) -> impl Strategy<Value = PointConfiguration> {
    prop::collection::vec(point(range), len).prop_map(|v| PointConfiguration::new(v).unwrap())
}

/// Random element of `GL_3(Z)` as a product of elementary moves.
fn unimodular() -> impl Strategy<Value = [[i64; 3]; 3]> {
    prop::collection::vec((0usize..3, 0usize..3, -3i64..=3, any::<bool>()), 1..8).prop_map(|ops| {
        let mut m = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        for (i, j, k, neg) in ops {
            if i != j {
                let src = m[j];
                for (x, y) in m[i].iter_mut().zip(src) {
                    *x += k * y;
                }
            }
            if neg {
                m[i] = m[i].map(|x| -x);
            }
        }
        m
    })
}

fn apply(m: &[[i64; 3]; 3], p: &ProjectivePoint) -> ProjectivePoint {
    let c = p.coords();
    let v: [BigInt; 3] = std::array::from_fn(|i| (0..3).map(|j| BigInt::from(m[i][j]) * &c[j]).sum());
    ProjectivePoint::new(v).unwrap()
}

fn det(rows: [&[BigInt; 3]; 3]) -> BigInt {
    let m = rows;
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn standardize_moved_standard_configs(r in 0usize..=4, m in unimodular()) {
        let moved = PointConfiguration::new(
            standard_configuration(r).points().iter().map(|p| apply(&m, p)).collect(),
        ).unwrap();
        prop_assert!(general_position(&moved).passed());
        let s = standardize(&moved).unwrap();
        prop_assert_eq!(&s.standard, &standard_configuration(r));
        let again = standardize(&s.standard).unwrap();
        prop_assert_eq!(&again.standard, &s.standard);
        prop_assert!(general_position(&s.standard).passed());
    }

    #[test]
    fn fourth_point_lands_in_torus(m in unimodular(), v in prop::array::uniform3(-1i64..=1)) {
        prop_assume!(v.iter().any(|&x| x != 0));
        let mut pts: Vec<ProjectivePoint> = standard_configuration(3).points().iter().map(|p| apply(&m, p)).collect();
        pts.push(apply(&m, &ProjectivePoint::from_i64(v[0], v[1], v[2]).unwrap()));
        let c = PointConfiguration::new(pts).unwrap();
        prop_assume!(general_position(&c).passed());
        let p = c.points();
        let d = det([p[0].coords(), p[1].coords(), p[2].coords()]);
        prop_assert!(d.abs().is_one());
        // Cramer's rule for A^-1 Z4 with A = [Z1 Z2 Z3]
        let w = [
            det([p[3].coords(), p[1].coords(), p[2].coords()]),
            det([p[0].coords(), p[3].coords(), p[2].coords()]),
            det([p[0].coords(), p[1].coords(), p[3].coords()]),
        ];
        prop_assert!(w.iter().all(|x| x.abs().is_one()));
        prop_assert_eq!(standardize(&c).unwrap().standard, standard_configuration(4));
    }

    #[test]
    fn five_points_never_pass(c in config(5, 20)) {
        prop_assert!(!general_position(&c).passed());
    }

    #[test]
    fn witnesses_reverify(c in config(4, 6)) {
        if let Verdict::Fail { witness } = general_position(&c) {
            prop_assert!(witness.reverify(&c), "{:?}", witness);
        }
    }

    #[test]
    fn conic_verdict_matches_rank_mod_p(c in config(6, 3)) {
        let rows: Vec<Vec<BigInt>> = c
            .points()
            .iter()
            .map(|p| {
                let [x, y, z] = p.coords();
                vec![x * x, y * y, z * z, x * y, x * z, y * z]
            })
            .collect();
        let v = IntegerMatrix::from_rows(&rows);
        let small: Vec<Prime> = [2u32, 3, 5, 7, 11, 13].iter().map(|&p| Prime::new(p).unwrap()).collect();
        match no_six_on_conic_everywhere(&c) {
            Verdict::Pass => {
                for p in &small {
                    prop_assert_eq!(mod_p_rank(&v, p), 6);
                }
            }
            Verdict::Fail { witness: Witness::Sextuple { determinant, primes, .. } } => {
                if determinant.is_zero() {
                    prop_assert!(arithsurf::exactlat::rational_rank(&v) < 6);
                } else {
                    for p in &primes {
                        prop_assert!(mod_p_rank(&v, p) < 6);
                    }
                    for p in small.iter().filter(|p| !primes.contains(p)) {
                        prop_assert_eq!(mod_p_rank(&v, p), 6);
                    }
                }
            }
            other => prop_assert!(false, "unexpected {:?}", other),
        }
    }
}

#[test]
fn zero_is_not_a_point() {
    assert!(ProjectivePoint::new([BigInt::zero(), BigInt::zero(), BigInt::zero()]).is_err());
    assert!(ProjectivePoint::new([BigInt::one(), BigInt::zero(), BigInt::zero()]).is_ok());
}
