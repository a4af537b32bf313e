#![allow(dead_code)]

use cantor::rational::ratio;
use cantor::{BasisSpec, Rational};
use num_bigint::BigInt;
use proptest::prelude::*;

pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

pub fn b(text: &str) -> BasisSpec {
    text.parse().unwrap()
}

fn small_terms() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(2u64..13, 1..5)
}

/// Bases whose radices eventually repeat.
pub fn periodic_basis() -> impl Strategy<Value = BasisSpec> {
    prop_oneof![
        3 => small_terms().prop_map(|c| BasisSpec::periodic(c).unwrap()),
        1 => (small_terms(), small_terms())
            .prop_map(|(p, c)| BasisSpec::prefix_then(p, BasisSpec::periodic(c).unwrap()).unwrap()),
    ]
}

/// Bases from every family, optionally behind a prefix.
pub fn any_basis() -> impl Strategy<Value = BasisSpec> {
    let family = prop_oneof![
        small_terms().prop_map(|c| BasisSpec::periodic(c).unwrap()),
        (1u64..5, -2i64..6)
            .prop_filter("q_1 >= 2", |&(a, b)| a as i64 + b >= 2)
            .prop_map(|(a, b)| BasisSpec::affine(a, b).unwrap()),
        (1u64..4).prop_map(|c| BasisSpec::factorial(c).unwrap()),
    ];
    (family, prop::collection::vec(2u64..9, 0..3))
        .prop_map(|(tail, prefix)| BasisSpec::prefix_then(prefix, tail).unwrap())
}

/// `u/v` in `[0, 1]` with `v <= max_den`.
pub fn unit_rational(max_den: i64) -> impl Strategy<Value = Rational> {
    (1..=max_den).prop_flat_map(|v| (0..=v).prop_map(move |u| ratio(u, v)))
}

/// `u/v` in `[−1, 1]` with `v <= max_den`.
pub fn signed_rational(max_den: i64) -> impl Strategy<Value = Rational> {
    (1..=max_den).prop_flat_map(|v| (-v..=v).prop_map(move |u| ratio(u, v)))
}

/// `lo + (hi − lo)·u/v`, a rational in `[lo, hi]`.
pub fn between(lo: &Rational, hi: &Rational, t: &Rational) -> Rational {
    lo + (hi - lo) * t
}

/// A terminating digit list valid over `basis` whose last digit is nonzero,
/// built from raw draws.
pub fn finite_digits(basis: &BasisSpec, raw: &[u64]) -> Vec<u64> {
    let n = raw.len();
    raw.iter()
        .enumerate()
        .map(|(i, &r)| {
            let q = basis.q_at(i as u64 + 1);
            if i + 1 == n { 1 + r % (q - 1) } else { r % q }
        })
        .collect()
}

pub fn big(n: u64) -> BigInt {
    BigInt::from(n)
}
