//! Rationals in `[0, 1]` to Cantor digits.
//!
//! Two procedures are provided and they agree digit for digit:
//!
//! * [`GreedyEncoder`] peels `ε_k = ⌊q_k σ^{k−1}(x)⌋` off the exact remainder.
//! * [`DeltaEncoder`] runs the integer recursion `Δ_1 = p q_1`,
//!   `Δ_n = q_n (Δ_{n−1} − r ε_{n−1})`, `ε_n = ⌊Δ_n / r⌋` for `x = p/r`.
//!
//! `Δ_n / r = q_n σ^{n−1}(x)`, which is why the two coincide.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::basis::BasisSpec;
use crate::digits::{DigitSpec, DigitStream};
use crate::error::{CantorError, Result};
use crate::rational::{check_unit_interval, Rational};
use crate::remainder::Remainder;

/// Greedy digit producer. After `k` digits, [`GreedyEncoder::remainder`]
/// is `σ^k(x)`.
#[derive(Debug, Clone)]
pub struct GreedyEncoder {
    basis: BasisSpec,
    index: u64,
    rem: Remainder,
}

impl GreedyEncoder {
    pub fn new(x: &Rational, basis: &BasisSpec) -> Result<Self> {
        check_unit_interval(x)?;
        Ok(GreedyEncoder { basis: basis.clone(), index: 0, rem: Remainder::new(x) })
    }

    /// Number of digits emitted so far.
    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn remainder(&self) -> Rational {
        self.rem.to_rational()
    }

    pub(crate) fn remainder_state(&self) -> &Remainder {
        &self.rem
    }
}

impl Iterator for GreedyEncoder {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        self.index += 1;
        Some(self.rem.step(self.basis.q_at(self.index)))
    }
}

/// Snapshot of the integer recursion after `index` digits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodeState {
    pub delta: BigInt,
    pub index: u64,
    /// `σ^index(x) = (Δ_index − r ε_index) / r`.
    pub remainder: Rational,
}

#[derive(Debug, Clone)]
pub struct DeltaEncoder {
    basis: BasisSpec,
    numer: BigInt,
    denom: BigInt,
    delta: BigInt,
    last_digit: BigInt,
    index: u64,
}

impl DeltaEncoder {
    pub fn new(x: &Rational, basis: &BasisSpec) -> Result<Self> {
        check_unit_interval(x)?;
        Ok(DeltaEncoder {
            basis: basis.clone(),
            numer: x.numer().clone(),
            denom: x.denom().clone(),
            delta: BigInt::zero(),
            last_digit: BigInt::zero(),
            index: 0,
        })
    }

    pub fn state(&self) -> EncodeState {
        let rest = &self.delta - &self.denom * &self.last_digit;
        let remainder = if self.index == 0 {
            Rational::new(self.numer.clone(), self.denom.clone())
        } else {
            Rational::new(rest, self.denom.clone())
        };
        EncodeState { delta: self.delta.clone(), index: self.index, remainder }
    }
}

impl Iterator for DeltaEncoder {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        self.index += 1;
        let q = self.basis.q_at(self.index);
        self.delta = if self.index == 1 {
            &self.numer * q
        } else {
            (&self.delta - &self.denom * &self.last_digit) * q
        };
        // The cap only bites at x = 1, where Δ_n = r q_n for every n and the
        // expansion is q_n − 1 throughout.
        let digit = self.delta.div_floor(&self.denom).min(BigInt::from(q - 1));
        self.last_digit = digit.clone();
        Some(digit.to_u64().expect("digit is below q"))
    }
}

fn generated<I>(source: I, count: u64) -> DigitSpec
where
    I: Iterator<Item = u64> + Send + 'static,
{
    let stream = DigitStream::new(source);
    stream.materialize(count);
    DigitSpec::Generated(stream)
}

/// Greedy digits of `x`, the first `count` produced eagerly. The rest of the
/// stream stays lazy.
pub fn encode_greedy(x: &Rational, basis: &BasisSpec, count: u64) -> Result<DigitSpec> {
    Ok(generated(GreedyEncoder::new(x, basis)?, count))
}

/// Digits of `x` by the `Δ_n` recursion.
pub fn encode_delta(x: &Rational, basis: &BasisSpec, count: u64) -> Result<DigitSpec> {
    Ok(generated(DeltaEncoder::new(x, basis)?, count))
}

/// The whole greedy expansion of `x`, as a finite or eventually periodic
/// spec. The basis must repeat; the expansion then repeats once the pair
/// (basis phase, remainder) does.
pub fn encode_exact(x: &Rational, basis: &BasisSpec) -> Result<DigitSpec> {
    let view = basis
        .periodic_view()
        .ok_or_else(|| CantorError::BasisNotPeriodic(format!("{basis} has no repeating tail")))?;
    let (offset, len) = (view.prefix.len() as u64, view.cycle.len() as u64);
    let mut enc = GreedyEncoder::new(x, basis)?;
    let mut seen = HashMap::new();
    let mut digits = Vec::new();
    loop {
        let k = enc.index();
        if k >= offset {
            let key = ((k - offset) % len, enc.remainder_state().clone());
            if let Some(&first) = seen.get(&key) {
                let cycle = digits.split_off(first as usize);
                return Ok(DigitSpec::settled(digits, cycle));
            }
            seen.insert(key, k);
        }
        digits.push(enc.next().expect("encoder never ends"));
    }
}

/// Outcome of searching for `n_0` with `r | q_1 ⋯ q_{n_0}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "index", rename_all = "kebab-case")]
pub enum FiniteExpansion {
    At(u64),
    NoneWithin(u64),
    ProvablyNever,
}

/// Smallest `n_0 <= bound` with `r | Q_{n_0}` for a denominator `r`.
pub(crate) fn divisor_index(r: &BigUint, basis: &BasisSpec, bound: u64) -> FiniteExpansion {
    if r.is_one() {
        return FiniteExpansion::At(0);
    }
    let blocked = basis.unreachable_part(r);
    if !blocked.is_one() && !(basis.prefix_product() % &blocked).is_zero() {
        return FiniteExpansion::ProvablyNever;
    }
    let mut left = r.clone();
    for k in 1..=bound {
        let g = left.gcd(&BigUint::from(basis.q_at(k)));
        left /= g;
        if left.is_one() {
            return FiniteExpansion::At(k);
        }
    }
    FiniteExpansion::NoneWithin(bound)
}

/// Where the expansion of `x = p/r` stops, if it ever does: the smallest
/// `n_0 <= bound` with `r | q_1 ⋯ q_{n_0}`.
///
/// `ProvablyNever` is reported when some prime power of `r` can only come from
/// finitely many basis terms and those do not supply it. `x = 1` gives
/// `At(0)` since its denominator is 1, even though its in-interval expansion
/// is the co-finite one.
pub fn finite_expansion_index(x: &Rational, basis: &BasisSpec, bound: u64) -> FiniteExpansion {
    divisor_index(&x.denom().magnitude().clone(), basis, bound)
}
