//! Finitely described basis sequences `(q_k)`.
//!
//! Four families are supported, each with `q_k >= 2` for every `k >= 1`:
//!
//! | text form            | terms                                   |
//! |----------------------|-----------------------------------------|
//! | `periodic:c1,..,cL`  | the cycle repeated forever              |
//! | `affine:a,b`         | `q_k = a*k + b`                         |
//! | `factorial:c`        | `q_k = k + c` (so `factorial:1` is 2,3,4,..) |
//! | `prefix:p1,..;TAIL`  | the listed terms, then the tail family  |
//!
//! Indices are 1-based everywhere, matching `q_1 q_2 q_3 ...`.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{CantorError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BasisKind {
    Periodic(Vec<u64>),
    /// `q_k = a*k + b`.
    Affine { a: u64, b: i64 },
    /// `q_k = k + c`.
    Factorial { c: u64 },
    /// Finitely many explicit terms followed by a non-prefix family.
    PrefixThen { prefix: Vec<u64>, tail: Box<BasisSpec> },
}

/// A validated basis sequence. Construct through [`BasisSpec::periodic`],
/// [`BasisSpec::affine`], [`BasisSpec::factorial`],
/// [`BasisSpec::prefix_then`] or by parsing the text form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisSpec {
    kind: BasisKind,
}

/// `q_1 q_2 ... q_n`, with the empty product `Q_0 = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisProduct {
    pub n: u64,
    pub value: BigInt,
}

/// The eventually periodic shape of a basis: `prefix` then `cycle` forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicView {
    pub prefix: Vec<u64>,
    pub cycle: Vec<u64>,
}

fn check_terms(terms: &[u64]) -> Result<()> {
    match terms.iter().position(|&q| q < 2) {
        Some(i) => Err(CantorError::InvalidBasis(format!(
            "term {} is {}, every q_k must be at least 2",
            i + 1,
            terms[i]
        ))),
        None => Ok(()),
    }
}

/// Removes from `x` every prime factor that also divides `y`.
fn strip_common(mut x: BigUint, y: &BigUint) -> BigUint {
    loop {
        let g = x.gcd(y);
        if g.is_one() || x.is_zero() {
            return x;
        }
        x /= g;
    }
}

impl BasisSpec {
    pub fn periodic(cycle: Vec<u64>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(CantorError::InvalidBasis("periodic cycle is empty".into()));
        }
        check_terms(&cycle)?;
        Ok(BasisSpec { kind: BasisKind::Periodic(cycle) })
    }

    pub fn affine(a: u64, b: i64) -> Result<Self> {
        if i128::from(a) + i128::from(b) < 2 {
            return Err(CantorError::InvalidBasis(format!(
                "affine:{a},{b} has q_1 = {} < 2",
                i128::from(a) + i128::from(b)
            )));
        }
        Ok(BasisSpec { kind: BasisKind::Affine { a, b } })
    }

    pub fn factorial(c: u64) -> Result<Self> {
        if c < 1 {
            return Err(CantorError::InvalidBasis("factorial:c needs c >= 1".into()));
        }
        Ok(BasisSpec { kind: BasisKind::Factorial { c } })
    }

    /// Prepends explicit terms. Nested prefixes are flattened so the tail is
    /// never itself a prefix; an empty prefix returns `tail` unchanged.
    pub fn prefix_then(prefix: Vec<u64>, tail: BasisSpec) -> Result<Self> {
        check_terms(&prefix)?;
        if prefix.is_empty() {
            return Ok(tail);
        }
        Ok(match tail.kind {
            BasisKind::PrefixThen { prefix: inner, tail } => {
                let mut all = prefix;
                all.extend(inner);
                BasisSpec { kind: BasisKind::PrefixThen { prefix: all, tail } }
            }
            kind => BasisSpec {
                kind: BasisKind::PrefixThen { prefix, tail: Box::new(BasisSpec { kind }) },
            },
        })
    }

    pub fn kind(&self) -> &BasisKind {
        &self.kind
    }

    /// `q_k` for `k >= 1`.
    pub fn q_at(&self, k: u64) -> u64 {
        assert!(k >= 1, "basis terms are indexed from 1");
        match &self.kind {
            BasisKind::Periodic(cycle) => cycle[((k - 1) % cycle.len() as u64) as usize],
            BasisKind::Affine { a, b } => {
                let q = i128::from(*a) * i128::from(k) + i128::from(*b);
                u64::try_from(q).expect("basis term overflows u64")
            }
            BasisKind::Factorial { c } => k.checked_add(*c).expect("basis term overflows u64"),
            BasisKind::PrefixThen { prefix, tail } => {
                let len = prefix.len() as u64;
                if k <= len {
                    prefix[(k - 1) as usize]
                } else {
                    tail.q_at(k - len)
                }
            }
        }
    }

    /// Iterator over `q_{from+1}, q_{from+2}, ...`.
    pub fn terms_from(&self, from: u64) -> impl Iterator<Item = u64> + '_ {
        (from + 1..).map(move |k| self.q_at(k))
    }

    pub fn product_prefix(&self, n: u64) -> BasisProduct {
        BasisProduct { n, value: self.product_range(0, n) }
    }

    /// `q_{from+1} ... q_{to}`; the empty product when `to <= from`.
    pub fn product_range(&self, from: u64, to: u64) -> BigInt {
        let mut acc = BigInt::one();
        for k in from + 1..=to {
            acc *= self.q_at(k);
        }
        acc
    }

    /// The basis seen after dropping `n` terms: `shifted(n).q_at(k) == q_at(n + k)`.
    pub fn shifted(&self, n: u64) -> BasisSpec {
        if n == 0 {
            return self.clone();
        }
        let kind = match &self.kind {
            BasisKind::Periodic(cycle) => {
                let mut c = cycle.clone();
                c.rotate_left((n % cycle.len() as u64) as usize);
                BasisKind::Periodic(c)
            }
            BasisKind::Affine { a, b } => {
                let shift = i128::from(*a) * i128::from(n) + i128::from(*b);
                BasisKind::Affine { a: *a, b: i64::try_from(shift).expect("affine offset overflows i64") }
            }
            BasisKind::Factorial { c } => BasisKind::Factorial { c: c + n },
            BasisKind::PrefixThen { prefix, tail } => {
                let len = prefix.len() as u64;
                if n >= len {
                    return tail.shifted(n - len);
                }
                BasisKind::PrefixThen {
                    prefix: prefix[n as usize..].to_vec(),
                    tail: tail.clone(),
                }
            }
        };
        BasisSpec { kind }
    }

    /// Whether every prime divides infinitely many `q_k`, decided by family.
    pub fn prime_divides_io(&self) -> bool {
        match &self.kind {
            BasisKind::Factorial { .. } => true,
            BasisKind::Periodic(_) => false,
            BasisKind::Affine { a: 0, .. } => false,
            // p | a*k + b for infinitely many k unless p | a and p ∤ b.
            BasisKind::Affine { a, b } => {
                strip_common(BigUint::from(*a), &BigUint::from(b.unsigned_abs())).is_one()
            }
            BasisKind::PrefixThen { tail, .. } => tail.prime_divides_io(),
        }
    }

    /// `Some` for periodic families (including `affine:0,b` and prefixed
    /// periodic tails).
    pub fn periodic_view(&self) -> Option<PeriodicView> {
        match &self.kind {
            BasisKind::Periodic(cycle) => Some(PeriodicView { prefix: vec![], cycle: cycle.clone() }),
            BasisKind::Affine { a: 0, b } => Some(PeriodicView {
                prefix: vec![],
                cycle: vec![u64::try_from(*b).expect("validated positive")],
            }),
            BasisKind::PrefixThen { prefix, tail } => tail.periodic_view().map(|v| {
                let mut p = prefix.clone();
                p.extend(v.prefix);
                PeriodicView { prefix: p, cycle: v.cycle }
            }),
            _ => None,
        }
    }

    /// True when `q_k -> infinity`.
    pub fn is_unbounded(&self) -> bool {
        match &self.kind {
            BasisKind::Periodic(_) => false,
            BasisKind::Affine { a, .. } => *a > 0,
            BasisKind::Factorial { .. } => true,
            BasisKind::PrefixThen { tail, .. } => tail.is_unbounded(),
        }
    }

    /// First index `k` with `q_k < bound`, if any.
    pub fn first_index_below(&self, bound: u64) -> Option<u64> {
        match &self.kind {
            BasisKind::Periodic(cycle) => cycle.iter().position(|&q| q < bound).map(|i| i as u64 + 1),
            // Both remaining families are non-decreasing, so q_1 is the minimum.
            BasisKind::Affine { .. } | BasisKind::Factorial { .. } => {
                (self.q_at(1) < bound).then_some(1)
            }
            BasisKind::PrefixThen { prefix, tail } => {
                match prefix.iter().position(|&q| q < bound) {
                    Some(i) => Some(i as u64 + 1),
                    None => tail.first_index_below(bound).map(|k| k + prefix.len() as u64),
                }
            }
        }
    }

    /// Whether `q_k ≡ 1 (mod modulus)` for every `k >= 1`.
    pub fn all_congruent_one(&self, modulus: &BigInt) -> bool {
        if modulus.is_one() {
            return true;
        }
        let fits = |q: u64| (BigInt::from(q) - 1u32).is_multiple_of(modulus);
        match &self.kind {
            BasisKind::Periodic(cycle) => cycle.iter().all(|&q| fits(q)),
            BasisKind::Affine { a, b } => {
                BigInt::from(*a).is_multiple_of(modulus)
                    && (BigInt::from(*b) - 1u32).is_multiple_of(modulus)
            }
            BasisKind::Factorial { .. } => false,
            BasisKind::PrefixThen { prefix, tail } => {
                prefix.iter().all(|&q| fits(q)) && tail.all_congruent_one(modulus)
            }
        }
    }

    /// The product of the explicit prefix terms (1 when there is no prefix).
    pub(crate) fn prefix_product(&self) -> BigUint {
        match &self.kind {
            BasisKind::PrefixThen { prefix, .. } => prefix.iter().map(|&q| BigUint::from(q)).product(),
            _ => BigUint::one(),
        }
    }

    /// The part of `r` made of primes that divide only finitely many terms
    /// of the (non-prefix) family. Those prime powers can only come from an
    /// explicit prefix.
    pub(crate) fn unreachable_part(&self, r: &BigUint) -> BigUint {
        match &self.kind {
            BasisKind::Periodic(cycle) => {
                let c: BigUint = cycle.iter().map(|&q| BigUint::from(q)).product();
                strip_common(r.clone(), &c)
            }
            BasisKind::Affine { a: 0, b } => strip_common(r.clone(), &BigUint::from(b.unsigned_abs())),
            BasisKind::Affine { a, b } => {
                let bad = strip_common(BigUint::from(*a), &BigUint::from(b.unsigned_abs()));
                r / strip_common(r.clone(), &bad)
            }
            BasisKind::Factorial { .. } => BigUint::one(),
            BasisKind::PrefixThen { tail, .. } => tail.unreachable_part(r),
        }
    }

    /// `(offset, period)` such that `q_k mod v` depends only on
    /// `(k - offset) mod period` for `k > offset`. `None` if the period does
    /// not fit in `u64`.
    pub(crate) fn residue_period(&self, v: &BigUint) -> Option<(u64, u64)> {
        match &self.kind {
            BasisKind::Periodic(cycle) => Some((0, cycle.len() as u64)),
            BasisKind::Affine { a: 0, .. } => Some((0, 1)),
            BasisKind::Affine { a, .. } => (v / v.gcd(&BigUint::from(*a))).to_u64().map(|p| (0, p)),
            BasisKind::Factorial { .. } => v.to_u64().map(|p| (0, p)),
            BasisKind::PrefixThen { prefix, tail } => {
                tail.residue_period(v).map(|(o, p)| (o + prefix.len() as u64, p))
            }
        }
    }
}

fn join(terms: &[u64]) -> String {
    terms.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for BasisSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            BasisKind::Periodic(cycle) => write!(f, "periodic:{}", join(cycle)),
            BasisKind::Affine { a, b } => write!(f, "affine:{a},{b}"),
            BasisKind::Factorial { c } => write!(f, "factorial:{c}"),
            BasisKind::PrefixThen { prefix, tail } => write!(f, "prefix:{};{tail}", join(prefix)),
        }
    }
}

fn parse_list<T: FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CantorError::ParseError(format!("bad {what} entry {s:?}")))
        })
        .collect()
}

impl FromStr for BasisSpec {
    type Err = CantorError;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let (family, args) = text
            .split_once(':')
            .ok_or_else(|| CantorError::ParseError(format!("basis {text:?} lacks a family prefix")))?;
        match family.trim() {
            "periodic" => BasisSpec::periodic(parse_list(args, "periodic")?),
            "affine" => {
                let parts: Vec<&str> = args.split(',').collect();
                if parts.len() != 2 {
                    return Err(CantorError::ParseError(format!("affine needs a,b; got {args:?}")));
                }
                let a = parts[0].trim().parse().map_err(|_| {
                    CantorError::ParseError(format!("affine slope {:?} is not a non-negative integer", parts[0]))
                })?;
                let b = parts[1]
                    .trim()
                    .parse()
                    .map_err(|_| CantorError::ParseError(format!("affine offset {:?} is not an integer", parts[1])))?;
                BasisSpec::affine(a, b)
            }
            "factorial" => {
                let c = args
                    .trim()
                    .parse()
                    .map_err(|_| CantorError::ParseError(format!("factorial offset {args:?} is not an integer")))?;
                BasisSpec::factorial(c)
            }
            "prefix" => {
                let (prefix, tail) = args
                    .split_once(';')
                    .ok_or_else(|| CantorError::ParseError("prefix needs ';' before the tail".into()))?;
                let tail: BasisSpec = tail.parse()?;
                if matches!(tail.kind, BasisKind::PrefixThen { .. }) {
                    return Err(CantorError::ParseError("prefix tails cannot nest".into()));
                }
                BasisSpec::prefix_then(parse_list(prefix, "prefix")?, tail)
            }
            other => Err(CantorError::ParseError(format!("unknown basis family {other:?}"))),
        }
    }
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;
    use proptest::prelude::*;

    pub fn arb_family() -> impl Strategy<Value = BasisSpec> {
        prop_oneof![
            prop::collection::vec(2u64..12, 1..5).prop_map(|c| BasisSpec::periodic(c).unwrap()),
            (0u64..5, -3i64..8)
                .prop_filter("q_1 >= 2", |(a, b)| (*a as i64) + b >= 2)
                .prop_map(|(a, b)| BasisSpec::affine(a, b).unwrap()),
            (1u64..5).prop_map(|c| BasisSpec::factorial(c).unwrap()),
        ]
    }

    pub fn arb_basis() -> impl Strategy<Value = BasisSpec> {
        (arb_family(), prop::collection::vec(2u64..12, 0..4))
            .prop_map(|(tail, prefix)| BasisSpec::prefix_then(prefix, tail).unwrap())
    }
}
