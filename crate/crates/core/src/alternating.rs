//! Alternating Cantor series `x = Σ (−1)^n ε_n / (q_1 ⋯ q_n)`.
//!
//! Values fill `[−1 + a_0, a_0]` with `a_0 = Σ_{n even} (q_n − 1)/Q_n`. The
//! fold `ε_n = q_n − 1 − δ_n` (odd `n`), `ε_n = δ_n` (even `n`) turns the
//! ordinary expansion `δ` of `x + 1 − a_0` into alternating digits of `x`,
//! and the shift `φ̂(x) = −q_1 x − ε_1` plays the role of `σ`.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::basis::BasisSpec;
use crate::decoder::{horner, solve_periodic, unroll, Enclosure};
use crate::digits::{check_digit, DigitSpec};
use crate::encoder::{divisor_index, encode_exact, FiniteExpansion};
use crate::error::{CantorError, Result};
use crate::rational::Rational;
use crate::shift::Certificate;

/// How far [`alt_encode`] looks for `r | Q_n` over a basis without a
/// repeating tail.
pub const FINITE_SEARCH_LIMIT: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AltValueRange {
    #[serde(with = "crate::rational::serde_text")]
    pub a0: Rational,
    #[serde(with = "crate::rational::serde_text")]
    pub lo: Rational,
    #[serde(with = "crate::rational::serde_text")]
    pub hi: Rational,
}

impl AltValueRange {
    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

fn sign(k: u64) -> i32 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Exact value range. The basis must repeat so `a_0` has a closed form.
pub fn alt_bounds(basis: &BasisSpec) -> Result<AltValueRange> {
    let (offset, span) = unroll(0, 1, basis, 2, 2)?;
    let coeffs: Vec<BigInt> = (1..=offset + span)
        .map(|k| if k % 2 == 0 { BigInt::from(basis.q_at(k) - 1) } else { BigInt::zero() })
        .collect();
    let a0 = solve_periodic(basis, &coeffs, offset as usize)?;
    let lo = &a0 - Rational::one();
    Ok(AltValueRange { hi: a0.clone(), lo, a0 })
}

/// The `n` alternating digits of `x` when `x·Q_n` is an integer, or `None`
/// when `x` lies outside the range. Digits come off the bottom like a signed
/// mixed-radix numeral.
fn peel(x: &Rational, basis: &BasisSpec, n: u64) -> Option<Vec<u64>> {
    let mut big = (x * Rational::from(basis.product_range(0, n))).to_integer();
    let mut digits = vec![0; n as usize];
    for k in (1..=n).rev() {
        let q = BigInt::from(basis.q_at(k));
        let e = (&big * sign(k)).mod_floor(&q);
        big = (big - &e * sign(k)) / &q;
        digits[k as usize - 1] = e.to_u64().expect("digit is below q");
    }
    big.is_zero().then_some(digits)
}

/// Alternating digits of `x`, as a finite or eventually periodic spec.
///
/// Over a repeating basis this is the fold of the greedy expansion of
/// `x + 1 − a_0`. Otherwise `a_0` is usually irrational, and only values
/// whose denominator divides some `Q_n` (found within
/// [`FINITE_SEARCH_LIMIT`]) are handled, by exact peeling into a finite
/// expansion.
pub fn alt_encode(x: &Rational, basis: &BasisSpec) -> Result<DigitSpec> {
    if basis.periodic_view().is_none() {
        let r: BigUint = x.denom().magnitude().clone();
        return match divisor_index(&r, basis, FINITE_SEARCH_LIMIT) {
            FiniteExpansion::At(n) => peel(x, basis, n)
                .map(|digits| DigitSpec::settled(digits, vec![0]))
                .ok_or_else(|| CantorError::OutOfRange(format!("{x} is outside the alternating range of {basis}"))),
            _ => Err(CantorError::BasisNotPeriodic(format!(
                "{basis} has no repeating tail and {x} has no finite alternating expansion within {FINITE_SEARCH_LIMIT} terms"
            ))),
        };
    }
    let range = alt_bounds(basis)?;
    if !range.contains(x) {
        return Err(CantorError::OutOfRange(format!("{x} is outside [{}, {}]", range.lo, range.hi)));
    }
    let delta = encode_exact(&(x + Rational::one() - &range.a0), basis)?;
    let (prefix_len, cycle_len) = match &delta {
        DigitSpec::EventuallyPeriodic { prefix, cycle } => (prefix.len(), cycle.len()),
        DigitSpec::Finite(digits) => (digits.len(), 1),
        DigitSpec::Generated(_) => unreachable!("exact encoding"),
    };
    // an even window keeps odd positions odd from one pass to the next
    let (offset, span) = unroll(prefix_len, cycle_len, basis, 1, 2)?;
    let folded: Vec<u64> = (1..=offset + span)
        .map(|k| if k % 2 == 1 { basis.q_at(k) - 1 - delta.raw(k) } else { delta.raw(k) })
        .collect();
    let (head, cycle) = folded.split_at(offset as usize);
    Ok(DigitSpec::settled(head.to_vec(), cycle.to_vec()))
}

fn signed_coeffs(d: &DigitSpec, basis: &BasisSpec, n: u64) -> Result<Vec<BigInt>> {
    (1..=n).map(|k| d.digit_at(basis, k).map(|e| BigInt::from(e) * sign(k))).collect()
}

/// Exact alternating sum of a finite or eventually periodic digit spec.
/// Finite specs work over any basis; periodic ones need a repeating basis.
pub fn alt_decode(d: &DigitSpec, basis: &BasisSpec) -> Result<Rational> {
    if let Some(digits) = d.as_terminating() {
        for (i, &e) in digits.iter().enumerate() {
            check_digit(basis, i as u64 + 1, e)?;
        }
        let coeffs = signed_coeffs(&DigitSpec::Finite(digits.clone()), basis, digits.len() as u64)?;
        let (acc, prod) = horner(basis, 0, &coeffs);
        return Ok(Rational::new(acc, prod));
    }
    let DigitSpec::EventuallyPeriodic { prefix, cycle } = d else {
        return Err(CantorError::NotExactlyDecodable("generated streams have no closed form".into()));
    };
    // even offset and span keep the sign pattern in step with the window
    let (offset, span) = unroll(prefix.len(), cycle.len(), basis, 2, 2)?;
    let coeffs = signed_coeffs(d, basis, offset + span)?;
    solve_periodic(basis, &coeffs, offset as usize)
}

/// `φ̂^k` applied to a digit expansion.
#[derive(Debug, Clone)]
pub struct AltShifted {
    pub value: Rational,
    /// Digits of the shifted value over `basis.shifted(k)`.
    pub digits: DigitSpec,
}

/// `φ̂^k(x) = (−1)^k Q_k (x − S_k)`, which is the alternating value of the
/// remaining digits over the shifted basis.
pub fn alt_shift(d: &DigitSpec, basis: &BasisSpec, k: u64) -> Result<AltShifted> {
    let digits = d.skip(k);
    let value = alt_decode(&digits, &basis.shifted(k))?;
    Ok(AltShifted { value, digits })
}

/// `φ̂^k(x)` from the value, iterating `y ↦ −q y − ε` with the digits of
/// [`alt_encode`].
pub fn alt_shift_value(x: &Rational, basis: &BasisSpec, k: u64) -> Result<Rational> {
    let digits = alt_encode(x, basis)?.take(basis, k)?;
    Ok(digits.iter().zip(1u64..).fold(x.clone(), |y, (&e, j)| step(&y, basis.q_at(j), e)))
}

fn step(y: &Rational, q: u64, e: u64) -> Rational {
    -(y * Rational::from_integer(BigInt::from(q))) - Rational::from_integer(BigInt::from(e))
}

/// Least `n_0 <= bound` with `r | q_1 ⋯ q_{n_0}` for `x = p/r`, which is
/// where the alternating expansion of `x` stops.
pub fn alt_finite_criterion(x: &Rational, basis: &BasisSpec, bound: u64) -> FiniteExpansion {
    divisor_index(x.denom().magnitude(), basis, bound)
}

/// The first repeat `φ̂^n(x) = φ̂^{n+m}(x)` of the alternating orbit.
pub fn alt_certify(x: &Rational, basis: &BasisSpec) -> Result<Certificate> {
    let d = alt_encode(x, basis)?;
    let mut seen: HashMap<Rational, u64> = HashMap::new();
    let mut digits = Vec::new();
    let mut y = x.clone();
    for k in 0u64.. {
        if let Some(&first) = seen.get(&y) {
            return Ok(Certificate { n: first, m: k - first, value: y, digits });
        }
        seen.insert(y.clone(), k);
        let e = d.digit_at(basis, k + 1)?;
        digits.push(e);
        y = step(&y, basis.q_at(k + 1), e);
    }
    unreachable!("the orbit of a rational repeats")
}

/// `[S_n − 1/Q_n, S_n + 1/Q_n]` from the first `n` alternating digits.
pub fn alt_enclose_prefix(d: &DigitSpec, basis: &BasisSpec, n: u64) -> Result<Enclosure> {
    let coeffs = signed_coeffs(d, basis, n)?;
    let (acc, prod) = horner(basis, 0, &coeffs);
    Ok(Enclosure::new(Rational::new(&acc - 1u32, prod.clone()), Rational::new(acc + 1u32, prod)))
}
