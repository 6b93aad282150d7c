#![allow(dead_code)]

use arithsurf::graded::{Form, FreeGraded, GradedMap};
use num_bigint::BigInt;
use proptest::prelude::*;

/// Random map between free modules with the given twists, coefficients in `[-c, c]`.
pub fn map_with(source: Vec<i64>, target: Vec<i64>, c: i64) -> impl Strategy<Value = GradedMap> {
    let shapes: Vec<i64> = target.iter().flat_map(|a| source.iter().map(move |b| a - b)).collect();
    let cols = source.len();
    let strategies: Vec<_> = shapes
        .iter()
        .map(|&deg| {
            prop::collection::vec(-c..=c, (deg + 1).max(0) as usize).prop_map(move |v| Form::from_coeffs(deg, v))
        })
        .collect();
    strategies.prop_map(move |forms| {
        let entries: Vec<Vec<Form>> = forms.chunks(cols.max(1)).map(|r| r.to_vec()).collect();
        let entries = if cols == 0 {
            vec![Vec::new(); target.len()]
        } else {
            entries
        };
        GradedMap::new(
            FreeGraded::new(source.clone()),
            FreeGraded::new(target.clone()),
            entries,
        )
        .unwrap()
    })
}

pub fn twists(len: std::ops::RangeInclusive<usize>, lo: i64, hi: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(lo..=hi, len)
}

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}
