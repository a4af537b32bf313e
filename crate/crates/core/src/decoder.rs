//! Digits back to exact values, or to rational enclosures when no exact
//! closed form is available.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::basis::BasisSpec;
use crate::digits::{check_digit, DigitSpec};
use crate::error::{CantorError, Result};
use crate::rational::{format_rational, Rational};

/// Longest unrolled period the exact periodic solvers will build.
pub const MAX_UNROLL: u64 = 1 << 20;

/// Positions past the split that [`decode_with_max_tail`] inspects.
pub const MAX_TAIL_CHECK: u64 = 64;

/// A closed rational interval known to contain some value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Enclosure {
    #[serde(with = "crate::rational::serde_text")]
    pub lo: Rational,
    #[serde(with = "crate::rational::serde_text")]
    pub hi: Rational,
}

impl Enclosure {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "enclosure bounds out of order");
        Enclosure { lo, hi }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn is_subset_of(&self, other: &Enclosure) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersects(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

impl std::fmt::Display for Enclosure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", format_rational(&self.lo), format_rational(&self.hi))
    }
}

/// `(Σ_{k≤n} c_k Q_n/Q_k, Q_n)` by Horner's rule over `q_{from+1} ... q_{from+n}`.
pub(crate) fn horner<'a>(basis: &BasisSpec, from: u64, coeffs: impl IntoIterator<Item = &'a BigInt>) -> (BigInt, BigInt) {
    let mut acc = BigInt::zero();
    let mut prod = BigInt::one();
    for (k, c) in (from + 1..).zip(coeffs) {
        let q = basis.q_at(k);
        acc = acc * q + c;
        prod *= q;
    }
    (acc, prod)
}

/// Value of `Σ_k c_k / Q_k` when the tail after position `offset` satisfies
/// `t = T + t/Π`, where `T` and `Π` come from the window
/// `coeffs[offset..]`. This is the case both for a remainder that returns to
/// itself after the window and for coefficients and basis that repeat with
/// the window's length.
pub(crate) fn solve_periodic(basis: &BasisSpec, coeffs: &[BigInt], offset: usize) -> Result<Rational> {
    let (head, window) = coeffs.split_at(offset);
    let (acc, q_head) = horner(basis, 0, head);
    let (w, pi) = horner(basis, offset as u64, window);
    let pi_minus = pi - 1u32;
    if pi_minus.is_zero() {
        return Err(CantorError::DegeneratePeriod);
    }
    Ok(Rational::new(acc * &pi_minus + w, q_head * pi_minus))
}

/// Exact `Σ_{i≤m} ε_i / (q_1 ⋯ q_i)`.
pub fn decode_finite(digits: &[u64], basis: &BasisSpec) -> Result<Rational> {
    for (i, &e) in digits.iter().enumerate() {
        check_digit(basis, i as u64 + 1, e)?;
    }
    let coeffs: Vec<BigInt> = digits.iter().map(|&e| BigInt::from(e)).collect();
    let (acc, prod) = horner(basis, 0, &coeffs);
    Ok(Rational::new(acc, prod))
}

/// `(offset, span)` unrolling a digit pattern against a periodic basis so
/// both repeat from `offset` with period `span`. `span` is rounded up to a
/// multiple of `span_multiple` and `offset` to a multiple of
/// `offset_multiple`.
pub(crate) fn unroll(
    prefix_len: usize,
    cycle_len: usize,
    basis: &BasisSpec,
    offset_multiple: u64,
    span_multiple: u64,
) -> Result<(u64, u64)> {
    let view = basis
        .periodic_view()
        .ok_or_else(|| CantorError::BasisNotPeriodic(format!("{basis} has no repeating tail")))?;
    let offset = (prefix_len.max(view.prefix.len()) as u64).next_multiple_of(offset_multiple);
    let span = (cycle_len as u64).lcm(&(view.cycle.len() as u64)).lcm(&span_multiple);
    if span > MAX_UNROLL {
        return Err(CantorError::CycleMisaligned(format!(
            "aligning a digit cycle of length {cycle_len} with a basis cycle of length {} needs {span} digits",
            view.cycle.len()
        )));
    }
    Ok((offset, span))
}

/// Exact value of an eventually periodic digit pattern.
///
/// Needs a basis that is itself eventually periodic: the digit cycle and
/// basis cycle are unrolled to a common offset and their lcm length. A cycle
/// of zeros is a finite expansion and works over any basis.
pub fn decode_eventually_periodic(d: &DigitSpec, basis: &BasisSpec) -> Result<Rational> {
    if let Some(digits) = d.as_terminating() {
        return decode_finite(&digits, basis);
    }
    let DigitSpec::EventuallyPeriodic { prefix, cycle } = d else {
        return Err(CantorError::NotExactlyDecodable("generated streams have no closed form".into()));
    };
    let (offset, span) = unroll(prefix.len(), cycle.len(), basis, 1, 1)?;
    let coeffs = (1..=offset + span)
        .map(|k| d.digit_at(basis, k).map(BigInt::from))
        .collect::<Result<Vec<_>>>()?;
    solve_periodic(basis, &coeffs, offset as usize)
}

/// Exact value of any finite or eventually periodic spec.
pub fn decode_exact(d: &DigitSpec, basis: &BasisSpec) -> Result<Rational> {
    decode_eventually_periodic(d, basis)
}

/// Exact value of a stream whose digits after `split` are `q_k − 1` forever:
/// the tail telescopes to `1 / Q_split`. The claim is checked on the next
/// [`MAX_TAIL_CHECK`] positions; this is how the co-finite half of a
/// [`crate::digits::DualPair`] is evaluated over unbounded bases.
pub fn decode_with_max_tail(d: &DigitSpec, basis: &BasisSpec, split: u64) -> Result<Rational> {
    for k in split + 1..=split + MAX_TAIL_CHECK {
        if d.digit_at(basis, k)? != basis.q_at(k) - 1 {
            return Err(CantorError::NotExactlyDecodable(format!("digit {k} is not maximal")));
        }
    }
    let head = d.take(basis, split)?;
    let coeffs: Vec<BigInt> = head.into_iter().map(BigInt::from).collect();
    let (acc, prod) = horner(basis, 0, &coeffs);
    Ok(Rational::new(acc + 1u32, prod))
}

/// `[S_n, S_n + 1/Q_n]` from the first `n` digits.
pub fn enclose_prefix(d: &DigitSpec, basis: &BasisSpec, n: u64) -> Result<Enclosure> {
    let coeffs: Vec<BigInt> = d.take(basis, n)?.into_iter().map(BigInt::from).collect();
    let (acc, prod) = horner(basis, 0, &coeffs);
    let lo = Rational::new(acc.clone(), prod.clone());
    let hi = Rational::new(acc + 1u32, prod);
    Ok(Enclosure { lo, hi })
}
