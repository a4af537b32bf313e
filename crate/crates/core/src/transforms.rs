//! Digit maps between Cantor systems and the Liu Wen function.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::basis::{BasisKind, BasisSpec};
use crate::decoder::{enclose_prefix, unroll, Enclosure};
use crate::digits::{DigitSpec, DigitStream};
use crate::error::{CantorError, Result};
use crate::rational::Rational;

fn fits(d: &DigitSpec, q: &BasisSpec, k: u64) -> u64 {
    d.raw(k).min(q.q_at(k) - 1)
}

/// Rejects expansions that end in maximal digits over `p`, which the map
/// is not defined on. Also validates every digit the tail check looks at.
fn check_canonical(d: &DigitSpec, p: &BasisSpec) -> Result<()> {
    let DigitSpec::EventuallyPeriodic { prefix, cycle } = d else {
        return match d {
            DigitSpec::Finite(digits) => d.take(p, digits.len() as u64).map(|_| ()),
            _ => Ok(()),
        };
    };
    if cycle.iter().all(|&e| e == 0) {
        return d.take(p, prefix.len() as u64).map(|_| ());
    }
    match unroll(prefix.len(), cycle.len(), p, 1, 1) {
        Ok((offset, span)) => {
            let window = d.take(p, offset + span)?;
            let maximal = (offset + 1..=offset + span).all(|k| window[k as usize - 1] == p.q_at(k) - 1);
            if maximal {
                return Err(CantorError::NonCanonicalInput(format!(
                    "digits are maximal over {p} from position {} on",
                    offset + 1
                )));
            }
            Ok(())
        }
        // an unbounded basis outgrows any fixed cycle digit, and q_k only
        // increases once past the prefixes
        Err(CantorError::BasisNotPeriodic(_)) => {
            let basis_prefix = match p.kind() {
                BasisKind::PrefixThen { prefix, .. } => prefix.len(),
                _ => 0,
            };
            d.take(p, (prefix.len().max(basis_prefix) + cycle.len()) as u64).map(|_| ())
        }
        Err(e) => Err(e),
    }
}

/// `ψ_{P,Q}`: output digit `k` is `min(E_k, q_k − 1)`. The first `count`
/// digits are produced eagerly when the result is a stream.
///
/// Generated inputs skip the canonicity check, since an all-maximal tail
/// cannot be ruled out from a prefix.
pub fn psi_map(d: &DigitSpec, p: &BasisSpec, q: &BasisSpec, count: u64) -> Result<DigitSpec> {
    check_canonical(d, p)?;
    match d {
        DigitSpec::Finite(digits) => {
            Ok(DigitSpec::Finite((1..=digits.len() as u64).map(|k| fits(d, q, k)).collect()))
        }
        DigitSpec::EventuallyPeriodic { prefix, cycle } if q.periodic_view().is_some() => {
            let (offset, span) = unroll(prefix.len(), cycle.len(), q, 1, 1)?;
            let out: Vec<u64> = (1..=offset + span).map(|k| fits(d, q, k)).collect();
            let (head, tail) = out.split_at(offset as usize);
            DigitSpec::eventually_periodic(head.to_vec(), tail.to_vec())
        }
        _ => {
            let (src, p, q) = (d.clone(), p.clone(), q.clone());
            let stream = DigitStream::from_fn(move |k| {
                let e = src.digit_at(&p, k).expect("digit out of range for the source basis");
                e.min(q.q_at(k) - 1)
            });
            stream.materialize(count);
            Ok(DigitSpec::Generated(stream))
        }
    }
}

/// Enclosure of `ψ_{P,Q}(x)` no wider than `1/precision`.
pub fn psi_eval(d: &DigitSpec, p: &BasisSpec, q: &BasisSpec, precision: u64) -> Result<Enclosure> {
    let out = psi_map(d, p, q, 0)?;
    let target = BigInt::from(precision);
    let mut n = 0;
    let mut prod = BigInt::one();
    while prod < target {
        n += 1;
        prod *= q.q_at(n);
    }
    enclose_prefix(&out, q, n)
}

/// Liu Wen function after `k` terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiuWenState {
    pub k: u64,
    /// `u_k`.
    pub u: Rational,
    /// `Σ_{j≤k} u_j/(j(j+1))`.
    pub partial: Rational,
}

/// Runs the `u_k` recursion for `k` terms. Stretches of constant `u`
/// telescope, `Σ_{j=a}^{b} u/(j(j+1)) = u(1/a − 1/(b+1))`.
pub fn liu_wen_state(d: &DigitSpec, basis: &BasisSpec, k: u64) -> Result<LiuWenState> {
    assert!(k >= 1, "the Liu Wen sum starts at k = 1");
    if let Some(index) = basis.first_index_below(3) {
        return Err(CantorError::BasisDigitTooSmall { index, radix: basis.q_at(index) });
    }
    let run = |u: &Rational, a: u64, b: u64| u * (Rational::new(1.into(), a.into()) - Rational::new(1.into(), (b + 1).into()));
    let mut u = Rational::one();
    let mut partial = Rational::zero();
    let mut run_start = 1;
    let mut prev = d.digit_at(basis, 1)?;
    for j in 1..k {
        let next = d.digit_at(basis, j + 1)?;
        let (q_prev, q_next) = (basis.q_at(j) - 1, basis.q_at(j + 1) - 1);
        if (next == 0 && prev != 0) || (next == q_next && prev != q_prev) {
            partial += run(&u, run_start, j);
            u = -u / Rational::from_integer(BigInt::from(j));
            assert!(u.abs() <= Rational::one(), "|u_k| never grows");
            run_start = j + 1;
        }
        prev = next;
    }
    partial += run(&u, run_start, k);
    Ok(LiuWenState { k, u, partial })
}

/// Enclosure of `f(x) = Σ u_k/(k(k+1))` no wider than `1/precision`: the
/// first `K = 2·precision − 1` terms, plus or minus the tail bound
/// `Σ_{k>K} 1/(k(k+1)) = 1/(K+1)`.
pub fn liu_wen_eval(d: &DigitSpec, basis: &BasisSpec, precision: u64) -> Result<Enclosure> {
    let k = 2 * precision.max(1) - 1;
    let state = liu_wen_state(d, basis, k)?;
    let tail = Rational::new(BigInt::one(), BigInt::from(k + 1));
    Ok(Enclosure::new(&state.partial - &tail, state.partial + tail))
}
