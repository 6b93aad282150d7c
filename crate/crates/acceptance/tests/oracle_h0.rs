use arithsurf::cohomology::{h0_dim, h0_dim_over, sheaf_rank_degree};
use arithsurf::exactlat::{Base, Prime};
use arithsurf::graded::BaseRing;
use arithsurf_acceptance::{oracles, random};

fn bases() -> Vec<BaseRing> {
    let mut out = vec![BaseRing::Rationals];
    out.extend([2, 3, 5, 13].map(|p| BaseRing::Prime(Prime::new(p).unwrap())));
    out
}

#[test]
fn stabilized_h0_matches_power_ideal_oracle() {
    let bases = bases();
    let mut rng = random::rng(0x5eed);
    for i in 0..200 {
        let base = &bases[i % bases.len()];
        let p = random::presentation(&mut rng, base);
        for d in -6..=6 {
            let want = oracles::h0_power_ideal(&p, &base.field(), d);
            assert_eq!(h0_dim(&p, d).unwrap(), want, "instance {i} over {base} at d={d}: {p:?}");
        }
    }
}

#[test]
fn semicontinuity_under_reduction() {
    let mut rng = random::rng(17);
    for i in 0..60 {
        let pz = random::locally_free_rank2(&mut rng);
        for q in [2u32, 3, 5] {
            let q = Prime::new(q).unwrap();
            let fiber = pz.reduce_mod(&q).unwrap();
            for d in -4..=4 {
                let generic = h0_dim_over(&pz, &Base::Rationals, d).unwrap();
                let special = h0_dim(&fiber, d).unwrap();
                assert!(special >= generic, "instance {i} at {q}, d={d}");
            }
        }
    }
}

#[test]
fn oracle_agrees_on_euler_characteristic_range() {
    let mut rng = random::rng(99);
    for _ in 0..30 {
        let p = random::presentation(&mut rng, &BaseRing::Rationals);
        let (r, e) = sheaf_rank_degree(&p).unwrap();
        // h0 = chi for large twists
        let d = 20;
        assert_eq!(
            oracles::h0_power_ideal(&p, &Base::Rationals, d) as i64,
            r as i64 * (d + 1) + e
        );
    }
}

#[test]
fn cech_and_power_ideal_oracles_agree() {
    let bases = bases();
    let mut rng = random::rng(4242);
    for i in 0..60 {
        let base = &bases[i % bases.len()];
        let p = random::presentation(&mut rng, base);
        for d in -5..=5 {
            let f = base.field();
            assert_eq!(
                oracles::h0_cech(&p, &f, d),
                oracles::h0_power_ideal(&p, &f, d),
                "instance {i} at d={d}"
            );
        }
    }
}

#[test]
fn brute_force_minus_one_small_cases() {
    assert_eq!(oracles::minus_one_classes_brute(1), vec![(0, vec![-1])]);
    assert_eq!(oracles::minus_one_classes_brute(2).len(), 3);
}
