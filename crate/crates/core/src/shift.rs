//! The shift operator `σ` and rationality certificates built from it.
//!
//! `σ^n(x)` is the exact remainder after `n` digits, so that
//! `x = Σ_{i≤n} ε_i/Q_i + σ^n(x)/Q_n`. For `x = u/v` every `v·σ^n(x)` is an
//! integer in `{0, …, v}`, so two of the first `v + 2` remainders coincide.
//! A [`Certificate`] records such a coincidence, and [`reconstruct`] turns one
//! back into `x` without looking at `x`.

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::basis::BasisSpec;
use crate::decoder::solve_periodic;
use crate::digits::check_digit;
use crate::encoder::GreedyEncoder;
use crate::error::{CantorError, Result};
use crate::rational::{check_unit_interval, in_unit_interval, Rational};
use crate::remainder::Remainder;

/// Witness that `σ^n(x) = σ^{n+m}(x) = value`, with the first `n + m`
/// digits of `x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub n: u64,
    pub m: u64,
    #[serde(with = "crate::rational::serde_text")]
    pub value: Rational,
    pub digits: Vec<u64>,
}

/// `σ^n(x)` by `n` exact greedy steps.
pub fn sigma(x: &Rational, basis: &BasisSpec, n: u64) -> Result<Rational> {
    let mut enc = GreedyEncoder::new(x, basis)?;
    for _ in 0..n {
        enc.next();
    }
    Ok(enc.remainder())
}

/// The earliest coincidence in the remainder orbit of `x`.
///
/// Remainders are walked in order and the first index `n + m` whose value
/// was already seen (at `n`) is returned, so `n + m` is as small as
/// possible and never exceeds `v + 1` for `x = u/v`. Over a periodic basis
/// this is also the least `n` and then the least `m`.
pub fn certify_rational(x: &Rational, basis: &BasisSpec) -> Result<Certificate> {
    let mut enc = GreedyEncoder::new(x, basis)?;
    let mut seen: HashMap<Remainder, u64> = HashMap::new();
    let mut digits = Vec::new();
    loop {
        let here = enc.index();
        if let Some(&first) = seen.get(enc.remainder_state()) {
            return Ok(Certificate { n: first, m: here - first, value: enc.remainder(), digits });
        }
        seen.insert(enc.remainder_state().clone(), here);
        digits.push(enc.next().expect("encoder never ends"));
    }
}

/// Recovers `x` from a certificate by solving `t = T + t/Π` for the tail
/// `t = σ^n(x)`, where `T` sums the `m` window digits and `Π` is the product
/// of the window's `q`'s.
pub fn reconstruct(cert: &Certificate, basis: &BasisSpec) -> Result<Rational> {
    if cert.m == 0 {
        return Err(CantorError::MalformedCertificate("m must be at least 1".into()));
    }
    if cert.digits.len() as u64 != cert.n + cert.m {
        return Err(CantorError::MalformedCertificate(format!(
            "expected {} digits, found {}",
            cert.n + cert.m,
            cert.digits.len()
        )));
    }
    for (i, &e) in cert.digits.iter().enumerate() {
        check_digit(basis, i as u64 + 1, e)?;
    }
    let coeffs: Vec<BigInt> = cert.digits.iter().map(|&e| BigInt::from(e)).collect();
    solve_periodic(basis, &coeffs, cert.n as usize)
}

/// `q_1 ⋯ q_n (q_{n+1} ⋯ q_{n+m} − 1) ≡ 0 (mod v)` for `x = u/v`.
pub fn verify_divisibility(x: &Rational, cert: &Certificate, basis: &BasisSpec) -> bool {
    let head = basis.product_range(0, cert.n);
    let window = basis.product_range(cert.n, cert.n + cert.m);
    let lhs = head * (window - 1u32);
    (lhs % x.denom()) == BigInt::from(0)
}

/// Whether `v·σ^k(x)` is an integer for every `k <= steps`, with the
/// remainders computed exactly and independently of `v`. Inputs outside
/// `[0, 1]` give `false`.
pub fn remainder_integrality(x: &Rational, basis: &BasisSpec, steps: u64) -> bool {
    if !in_unit_interval(x) {
        return false;
    }
    let v = x.denom().clone();
    let mut rem = Remainder::new(x);
    for k in 0..=steps {
        if !rem.scaled_is_integer(&v) {
            return false;
        }
        if k < steps {
            rem.step(basis.q_at(k + 1));
        }
    }
    true
}

/// Where the remainder orbit becomes periodic: `σ^{start+j} = σ^{start+j+period}`
/// for every `j >= 0`, with `start` and then `period` minimal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPeriod {
    pub start: u64,
    pub period: u64,
    /// `σ^start(x)`.
    pub value: Rational,
}

/// Eventual periodicity of the whole remainder sequence.
///
/// A single coincidence `σ^n = σ^{n+m}` only repeats forever when the basis
/// does too. Here the state is the pair `(phase, σ^k)` where `phase` indexes
/// `q_k mod v`, which is eventually periodic for every supported family. Once
/// a state recurs the orbit is periodic for good, and the value period and
/// start are then shrunk to their minima.
pub fn eventual_period(x: &Rational, basis: &BasisSpec) -> Result<OrbitPeriod> {
    check_unit_interval(x)?;
    let v = x.denom().magnitude().clone();
    let (offset, phase_len) = basis.residue_period(&v).ok_or_else(|| {
        CantorError::OutOfRange(format!("the basis residue period for denominator {v} overflows u64"))
    })?;
    let mut enc = GreedyEncoder::new(x, basis)?;
    let mut values: Vec<Remainder> = Vec::new();
    let mut seen: HashMap<(u64, Remainder), u64> = HashMap::new();
    let (first, again) = loop {
        let k = enc.index();
        values.push(enc.remainder_state().clone());
        if k >= offset {
            let key = ((k - offset) % phase_len, enc.remainder_state().clone());
            if let Some(&j) = seen.get(&key) {
                break (j, k);
            }
            seen.insert(key, k);
        }
        enc.next();
    };
    let span = again - first;
    let at = |i: u64| &values[i as usize];
    let period = (1..=span)
        .filter(|d| span % d == 0)
        .find(|&d| (0..span).all(|i| at(first + i) == at(first + (i + d) % span)))
        .expect("span itself is a period");
    let mut start = first;
    while start > 0 && at(start - 1) == at(start - 1 + period) {
        start -= 1;
    }
    Ok(OrbitPeriod { start, period, value: at(start).to_rational() })
}
