//! Structural rationality tests: condensations, constant tail ratios and the
//! Marques criterion.

use num_bigint::BigInt;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::basis::{BasisKind, BasisSpec};
use crate::decoder::horner;
use crate::digits::{check_digit, DigitSpec};
use crate::encoder::GreedyEncoder;
use crate::error::{CantorError, Result};
use crate::rational::{check_unit_interval, format_rational, Rational};
use crate::shift::eventual_period;

/// Blocks checked by [`find_condensation`] before it reports.
pub const CONDENSATION_BLOCKS: u64 = 10;

/// Uniform regrouping of the basis from `start` into blocks of `block_len`
/// terms, with `A_i = (h/k)(B_i − 1)` on every block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condensation {
    pub start: u64,
    pub block_len: u64,
    pub h: BigInt,
    pub k: BigInt,
    pub blocks_checked: u64,
}

impl Condensation {
    pub fn ratio(&self) -> Rational {
        Rational::new(self.h.clone(), self.k.clone())
    }
}

impl Serialize for Condensation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Condensation", 5)?;
        st.serialize_field("start", &self.start)?;
        st.serialize_field("block_len", &self.block_len)?;
        st.serialize_field("h", &self.h.to_string())?;
        st.serialize_field("k", &self.k.to_string())?;
        st.serialize_field("blocks_checked", &self.blocks_checked)?;
        st.end()
    }
}

/// Builds a condensation from the point where the remainder orbit turns
/// periodic: if `σ^N(x) = t` repeats every `m` steps then each block of `m`
/// digits satisfies `A_i = t(B_i − 1)`.
pub fn find_condensation(x: &Rational, basis: &BasisSpec) -> Result<Condensation> {
    check_unit_interval(x)?;
    let orbit = eventual_period(x, basis)?;
    let mut c = Condensation {
        start: orbit.start,
        block_len: orbit.period,
        h: orbit.value.numer().clone(),
        k: orbit.value.denom().clone(),
        blocks_checked: 0,
    };
    let digits = DigitSpec::Finite(
        GreedyEncoder::new(x, basis)?.take((c.start + CONDENSATION_BLOCKS * c.block_len) as usize).collect(),
    );
    assert!(verify_condensation(&c, &digits, basis, CONDENSATION_BLOCKS)?, "periodic orbit gives a condensation");
    c.blocks_checked = CONDENSATION_BLOCKS;
    Ok(c)
}

/// Whether `A_i·k = h·(B_i − 1)` on each of the first `blocks` blocks.
pub fn verify_condensation(c: &Condensation, d: &DigitSpec, basis: &BasisSpec, blocks: u64) -> Result<bool> {
    for i in 0..blocks {
        let from = c.start + i * c.block_len;
        let coeffs = (from + 1..=from + c.block_len)
            .map(|j| d.digit_at(basis, j).map(BigInt::from))
            .collect::<Result<Vec<_>>>()?;
        let (a, b) = horner(basis, from, &coeffs);
        if a * &c.k != &c.h * (b - 1u32) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TailRatio {
    /// `σ^k(x) = c` and `ε_k = c(q_k − 1)` for every `k > n0`.
    Constant { n0: u64, c: Rational },
    NotConstant,
}

/// Least `n0` after which the remainder is a fixed point `c`, so that
/// `ε_k/(q_k − 1) = c` from there on.
pub fn tail_ratio_const(x: &Rational, basis: &BasisSpec) -> Result<TailRatio> {
    check_unit_interval(x)?;
    let orbit = eventual_period(x, basis)?;
    if orbit.period != 1 {
        return Ok(TailRatio::NotConstant);
    }
    if !basis.shifted(orbit.start).all_congruent_one(orbit.value.denom()) {
        return Ok(TailRatio::NotConstant);
    }
    Ok(TailRatio::Constant { n0: orbit.start, c: orbit.value })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MarquesVerdict {
    Rational,
    Irrational,
    Inapplicable,
}

/// For a basis where every prime divides infinitely many `q_k`, the value is
/// irrational exactly when `ε_k > 0` and `ε_k < q_k − 1` each hold infinitely
/// often.
///
/// All such bases are unbounded, so any fixed cycle digit eventually sits
/// below `q_k − 1`. The verdict then depends only on whether the digit cycle
/// has a nonzero entry.
pub fn marques_classify(d: &DigitSpec, basis: &BasisSpec) -> Result<MarquesVerdict> {
    if !basis.prime_divides_io() {
        return Ok(MarquesVerdict::Inapplicable);
    }
    match d {
        DigitSpec::Finite(digits) => {
            for (i, &e) in digits.iter().enumerate() {
                check_digit(basis, i as u64 + 1, e)?;
            }
            Ok(MarquesVerdict::Rational)
        }
        DigitSpec::EventuallyPeriodic { prefix, cycle } => {
            let basis_prefix = match basis.kind() {
                BasisKind::PrefixThen { prefix, .. } => prefix.len(),
                _ => 0,
            };
            let reach = prefix.len().max(basis_prefix) + cycle.len();
            // q_k never shrinks past the explicit terms, so one pass of the
            // cycle settles every later position
            for k in 1..=reach as u64 {
                d.digit_at(basis, k)?;
            }
            debug_assert!(basis.is_unbounded());
            Ok(if cycle.iter().any(|&e| e > 0) { MarquesVerdict::Irrational } else { MarquesVerdict::Rational })
        }
        DigitSpec::Generated(_) => Err(CantorError::NotExactlyDecodable(
            "\"infinitely often\" cannot be decided from a generated stream".into(),
        )),
    }
}

/// A criterion's verdict, tagged with the criterion that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "criterion", rename_all = "kebab-case")]
pub enum Classification {
    /// Eventually periodic remainder orbit turned into uniform blocks.
    Condensation(Condensation),
    /// Constant `ε_k/(q_k − 1)` from some index on.
    TailRatio { constant: bool, n0: Option<u64>, c: Option<String> },
    Marques { verdict: MarquesVerdict },
}

impl From<TailRatio> for Classification {
    fn from(t: TailRatio) -> Self {
        match t {
            TailRatio::Constant { n0, c } => {
                Classification::TailRatio { constant: true, n0: Some(n0), c: Some(format_rational(&c)) }
            }
            TailRatio::NotConstant => Classification::TailRatio { constant: false, n0: None, c: None },
        }
    }
}

/// Condensation and tail-ratio verdicts for a rational in `[0, 1]`.
pub fn classify_rational(x: &Rational, basis: &BasisSpec) -> Result<Vec<Classification>> {
    Ok(vec![
        Classification::Condensation(find_condensation(x, basis)?),
        tail_ratio_const(x, basis)?.into(),
    ])
}

/// Marques verdict for a digit expansion.
pub fn classify_digits(d: &DigitSpec, basis: &BasisSpec) -> Result<Classification> {
    Ok(Classification::Marques { verdict: marques_classify(d, basis)? })
}

impl TailRatio {
    pub fn is_constant(&self) -> bool {
        matches!(self, TailRatio::Constant { .. })
    }

    pub fn constant(&self) -> Option<&Rational> {
        match self {
            TailRatio::Constant { c, .. } => Some(c),
            TailRatio::NotConstant => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::shift::sigma;
    use num_traits::Zero;

    fn b(text: &str) -> BasisSpec {
        text.parse().unwrap()
    }

    #[test]
    fn condensation_examples() {
        let c = find_condensation(&ratio(1, 3), &b("periodic:2")).unwrap();
        assert_eq!((c.start, c.block_len, c.ratio()), (0, 2, ratio(1, 3)));
        let c = find_condensation(&ratio(1, 2), &b("affine:2,1")).unwrap();
        assert_eq!((c.start, c.block_len, c.ratio()), (0, 1, ratio(1, 2)));
        let c = find_condensation(&ratio(0, 1), &b("factorial:1")).unwrap();
        assert_eq!((c.h.clone(), c.k.clone()), (BigInt::zero(), BigInt::from(1)));
        assert_eq!(c.blocks_checked, CONDENSATION_BLOCKS);
    }

    #[test]
    fn condensation_over_unbounded_bases() {
        for (x, basis) in [(ratio(2, 9), "affine:2,1"), (ratio(5, 11), "factorial:1"), (ratio(3, 10), "affine:3,2")] {
            let basis = b(basis);
            let c = find_condensation(&x, &basis).unwrap();
            let digits = DigitSpec::Finite(GreedyEncoder::new(&x, &basis).unwrap().take(400).collect());
            let room = (400 - c.start) / c.block_len;
            assert!(verify_condensation(&c, &digits, &basis, room.min(40)).unwrap());
        }
    }

    #[test]
    fn verify_rejects_wrong_ratio() {
        let two = b("periodic:2");
        let thirds = DigitSpec::eventually_periodic(vec![], vec![0, 1]).unwrap();
        let wrong = Condensation { start: 0, block_len: 2, h: 1.into(), k: 2.into(), blocks_checked: 0 };
        assert!(!verify_condensation(&wrong, &thirds, &two, 10).unwrap());
        let zero = Condensation { start: 0, block_len: 3, h: 0.into(), k: 1.into(), blocks_checked: 0 };
        assert!(verify_condensation(&zero, &DigitSpec::Finite(vec![]), &two, 10).unwrap());
    }

    #[test]
    fn tail_ratio_examples() {
        assert_eq!(
            tail_ratio_const(&ratio(1, 2), &b("affine:2,1")).unwrap(),
            TailRatio::Constant { n0: 0, c: ratio(1, 2) }
        );
        assert_eq!(tail_ratio_const(&ratio(1, 3), &b("periodic:2")).unwrap(), TailRatio::NotConstant);
        assert_eq!(tail_ratio_const(&ratio(0, 1), &b("factorial:1")).unwrap(), TailRatio::Constant { n0: 0, c: ratio(0, 1) });
        // 1/2 over periodic:3 is 0.111... so c = 1/2 from the start
        assert_eq!(tail_ratio_const(&ratio(1, 2), &b("periodic:3")).unwrap(), TailRatio::Constant { n0: 0, c: ratio(1, 2) });
    }

    #[test]
    fn tail_ratio_is_a_fixed_point() {
        let basis = b("affine:2,1");
        let x = ratio(1, 6);
        if let TailRatio::Constant { n0, c } = tail_ratio_const(&x, &basis).unwrap() {
            for k in n0..n0 + 20 {
                assert_eq!(sigma(&x, &basis, k).unwrap(), c);
            }
        }
    }

    #[test]
    fn marques_examples() {
        let fact = b("factorial:1");
        let ones = DigitSpec::eventually_periodic(vec![], vec![1]).unwrap();
        assert_eq!(marques_classify(&ones, &fact).unwrap(), MarquesVerdict::Irrational);
        assert_eq!(marques_classify(&DigitSpec::Finite(vec![1, 2]), &fact).unwrap(), MarquesVerdict::Rational);
        assert_eq!(marques_classify(&ones, &b("periodic:2,3")).unwrap(), MarquesVerdict::Inapplicable);
        let zeros = DigitSpec::eventually_periodic(vec![1], vec![0]).unwrap();
        assert_eq!(marques_classify(&zeros, &fact).unwrap(), MarquesVerdict::Rational);
        let wide = DigitSpec::eventually_periodic(vec![], vec![2]).unwrap();
        assert!(matches!(marques_classify(&wide, &fact), Err(CantorError::DigitOutOfRange { .. })));
        // the cycle digit fits the leading 100 but not the tail's q = 2
        let big = DigitSpec::eventually_periodic(vec![], vec![50]).unwrap();
        assert!(matches!(
            marques_classify(&big, &b("prefix:100;factorial:1")),
            Err(CantorError::DigitOutOfRange { index: 2, .. })
        ));
    }

    #[test]
    fn classification_json() {
        let v = serde_json::to_value(classify_rational(&ratio(1, 2), &b("affine:2,1")).unwrap()).unwrap();
        assert_eq!(v[0]["criterion"], "condensation");
        assert_eq!(v[0]["h"], "1");
        assert_eq!(v[1]["criterion"], "tail-ratio");
        assert_eq!(v[1]["c"], "1/2");
        let m = serde_json::to_value(classify_digits(&DigitSpec::Finite(vec![1]), &b("factorial:1")).unwrap()).unwrap();
        assert_eq!(m, serde_json::json!({"criterion": "marques", "verdict": "rational"}));
    }
}
