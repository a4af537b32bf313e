//! One step of the shift map on an exact remainder in `[0, 1]`.
//!
//! Orbits of `u/v` stay on denominators dividing `v`, so for every realistic
//! input the state fits in `i128` and avoids heap traffic. Inputs with huge
//! denominators fall back to `BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive};

use crate::rational::Rational;

const SMALL_LIMIT: i128 = 1 << 62;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum Remainder {
    Small(Ratio<i128>),
    Big(Rational),
}

impl Remainder {
    /// `x` must already be known to lie in `[0, 1]`.
    pub(crate) fn new(x: &Rational) -> Self {
        match (x.numer().to_i128(), x.denom().to_i128()) {
            (Some(n), Some(d)) if d < SMALL_LIMIT && n < SMALL_LIMIT => Remainder::Small(Ratio::new_raw(n, d)),
            _ => Remainder::Big(x.clone()),
        }
    }

    pub(crate) fn to_rational(&self) -> Rational {
        match self {
            Remainder::Small(r) => Rational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            Remainder::Big(r) => r.clone(),
        }
    }

    /// Whether `v * self` is an integer.
    pub(crate) fn scaled_is_integer(&self, v: &BigInt) -> bool {
        match self {
            Remainder::Small(r) => v.is_multiple_of(&BigInt::from(*r.denom())),
            Remainder::Big(r) => v.is_multiple_of(r.denom()),
        }
    }

    /// Emits `ε = ⌊q·r⌋` and replaces `r` by `q·r − ε`. The endpoint 1 maps
    /// to itself with digit `q − 1`.
    pub(crate) fn step(&mut self, q: u64) -> u64 {
        match self {
            Remainder::Small(r) => {
                let (n, d) = (*r.numer(), *r.denom());
                if n == d {
                    return q - 1;
                }
                let (digit, rest) = (n * i128::from(q)).div_rem(&d);
                *r = Ratio::new(rest, d);
                digit as u64
            }
            Remainder::Big(r) => {
                if r.is_one() {
                    return q - 1;
                }
                let (digit, rest) = (r.numer() * q).div_rem(r.denom());
                *r = Rational::new(rest, r.denom().clone());
                digit.to_u64().expect("digit is below q")
            }
        }
    }

}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn small_and_big_paths_agree() {
        let x = ratio(5, 7);
        let mut small = Remainder::new(&x);
        let mut big = Remainder::Big(x);
        assert!(matches!(small, Remainder::Small(_)));
        for q in [2u64, 3, 10, 7, 7, 11, 1 << 40] {
            assert_eq!(small.step(q), big.step(q));
            assert_eq!(small.to_rational(), big.to_rational());
        }
    }

    #[test]
    fn one_is_fixed() {
        let mut r = Remainder::new(&ratio(1, 1));
        assert_eq!(r.step(5), 4);
        assert_eq!(r.to_rational(), ratio(1, 1));
    }

    #[test]
    fn huge_denominators_use_big_path() {
        let x = Rational::new(BigInt::one(), BigInt::from(3u8).pow(80));
        let mut r = Remainder::new(&x);
        assert!(matches!(r, Remainder::Big(_)));
        assert_eq!(r.step(3), 0);
        assert_eq!(r.to_rational(), Rational::new(BigInt::one(), BigInt::from(3u8).pow(79)));
    }
}
