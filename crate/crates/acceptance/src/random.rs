//! Seeded random instances.

use arithsurf::exactlat::{rank_over, Prime};
use arithsurf::graded::{BaseRing, Form, FreeGraded, GradedMap, GradedPresentation};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn coeff(rng: &mut ChaCha8Rng, base: &BaseRing) -> i64 {
    match base {
        BaseRing::Prime(p) => rng.gen_range(0..p.as_u64().unwrap() as i64),
        _ => rng.gen_range(-3..=3),
    }
}

/// A presentation with 1 to 3 generators, at most as many relations, twists
/// in `[-6, 6]`, and a presentation map that is injective over `base`.
pub fn presentation(rng: &mut ChaCha8Rng, base: &BaseRing) -> GradedPresentation {
    loop {
        let r = rng.gen_range(1..=3usize);
        let k = rng.gen_range(0..=r);
        let gens: Vec<i64> = (0..r).map(|_| rng.gen_range(-6..=6)).collect();
        let amax = *gens.iter().max().unwrap();
        let amin = *gens.iter().min().unwrap();
        let rels: Vec<i64> = (0..k).map(|_| rng.gen_range((amin - 3).max(-6)..=amax)).collect();
        let entries: Vec<Vec<Form>> = gens
            .iter()
            .map(|a| {
                rels.iter()
                    .map(|b| {
                        let deg = a - b;
                        let cs: Vec<i64> = (0..(deg + 1).max(0)).map(|_| coeff(rng, base)).collect();
                        Form::from_coeffs(deg, cs)
                    })
                    .collect()
            })
            .collect();
        let map = GradedMap::new(FreeGraded::new(rels), FreeGraded::new(gens), entries).unwrap();
        let p = GradedPresentation::new(base.clone(), map).unwrap();
        let big = p.degree_piece(40);
        if rank_over(&big, &base.field()) == big.cols() {
            return p;
        }
    }
}

pub fn small_prime(rng: &mut ChaCha8Rng, primes: &[u64]) -> Prime {
    Prime::new(primes[rng.gen_range(0..primes.len())]).unwrap()
}

/// Random form of degree `deg` with coefficients in `[-c, c]`.
pub fn form(rng: &mut ChaCha8Rng, deg: i64, c: i64) -> Form {
    Form::from_coeffs(deg, (0..(deg + 1).max(0)).map(|_| rng.gen_range(-c..=c)).collect())
}

/// Rank-2 bundle over `Z`: cokernel of the column `(x0^m1, x1^m2 + x0 h, f)`
/// from twist `-b` into generators `(m1 - b, m2 - b, a3)`. The first two
/// entries share no zero over any field, so the sheaf is locally free.
pub fn locally_free_rank2(rng: &mut ChaCha8Rng) -> GradedPresentation {
    let b = rng.gen_range(1..=3i64);
    let m1 = rng.gen_range(0..=2i64) + b;
    let m2 = rng.gen_range(0..=2i64) + b;
    let a3 = rng.gen_range(-1..=2i64);
    let shift = rng.gen_range(-2..=2i64);
    let h = form(rng, m2 - 1, 2);
    let x1m = Form::x1_pow(m2 as u32);
    let second = if m2 >= 1 {
        x1m.add(&Form::x0_pow(1).mul(&h))
    } else {
        x1m
    };
    let third = if a3 + b >= 0 {
        form(rng, a3 + b, 6)
    } else {
        Form::zero(a3 + b)
    };
    let col = vec![Form::x0_pow(m1 as u32), second, third];
    let map = GradedMap::from_columns(
        FreeGraded::new(vec![-b]),
        FreeGraded::new(vec![m1 - b, m2 - b, a3]),
        vec![col],
    )
    .unwrap();
    GradedPresentation::over_integers(map).twist(shift)
}
