//! Digit streams `ε_1 ε_2 ...` and their text form.
//!
//! Text grammar: digits are decimal integers separated by `.`, an optional
//! repeating cycle sits in parentheses at the end. `0.3.5.2.2.9.11.4` is a
//! finite stream, `1.0(2.3)` is `1, 0, 2, 3, 2, 3, ...`. A group containing
//! `[` is read in the compact form where each character is one digit and
//! `[11]` is the multi-digit value 11, so `035229[11]4` is the same stream as
//! `0.3.5.2.2.9.11.4`. A trailing `...` is ignored.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_integer::Integer;

use crate::basis::BasisSpec;
use crate::error::{CantorError, Result};

type Source = Box<dyn Iterator<Item = u64> + Send>;

struct Shared {
    produced: Vec<u64>,
    source: Source,
}

/// A lazily produced, memoized digit sequence.
///
/// Clones share the memo, so every clone sees the same digits. Reads lock an
/// internal mutex; `digit` is deterministic and idempotent from any thread.
/// A source that runs dry is padded with zeros.
#[derive(Clone)]
pub struct DigitStream {
    shared: Arc<Mutex<Shared>>,
    offset: u64,
}

impl DigitStream {
    pub fn new<I>(source: I) -> Self
    where
        I: Iterator<Item = u64> + Send + 'static,
    {
        DigitStream {
            shared: Arc::new(Mutex::new(Shared { produced: Vec::new(), source: Box::new(source) })),
            offset: 0,
        }
    }

    /// Stream whose `k`-th digit is `f(k)`, `k` starting at 1.
    pub fn from_fn<F>(f: F) -> Self
    where
        F: FnMut(u64) -> u64 + Send + 'static,
    {
        DigitStream::new((1..).map(f))
    }

    fn with_shared<T>(&self, f: impl FnOnce(&mut Shared) -> T) -> T {
        let mut guard = self.shared.lock().unwrap_or_else(|e| e.into_inner());
        f(&mut guard)
    }

    /// Ensures the first `n` digits (relative to this view) are produced.
    pub fn materialize(&self, n: u64) {
        let want = (self.offset + n) as usize;
        self.with_shared(|s| {
            while s.produced.len() < want {
                let next = s.source.next().unwrap_or(0);
                s.produced.push(next);
            }
        });
    }

    /// How many digits past this view's start are already produced.
    pub fn materialized(&self) -> u64 {
        self.with_shared(|s| (s.produced.len() as u64).saturating_sub(self.offset))
    }

    /// Digit `k >= 1`.
    pub fn digit(&self, k: u64) -> u64 {
        assert!(k >= 1, "digits are indexed from 1");
        self.materialize(k);
        self.with_shared(|s| s.produced[(self.offset + k - 1) as usize])
    }

    pub fn prefix(&self, n: u64) -> Vec<u64> {
        self.materialize(n);
        self.with_shared(|s| s.produced[self.offset as usize..(self.offset + n) as usize].to_vec())
    }

    /// The same stream with its first `k` digits dropped.
    pub fn skip(&self, k: u64) -> DigitStream {
        DigitStream { shared: Arc::clone(&self.shared), offset: self.offset + k }
    }
}

impl fmt::Debug for DigitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DigitStream")
            .field("offset", &self.offset)
            .field("materialized", &self.materialized())
            .finish()
    }
}

impl PartialEq for DigitStream {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.shared, &other.shared) && self.offset == other.offset
    }
}

/// A digit sequence in one of three shapes.
#[derive(Debug, Clone, PartialEq)]
pub enum DigitSpec {
    /// Listed digits followed by zeros.
    Finite(Vec<u64>),
    /// `prefix` once, then `cycle` forever. The cycle is never empty when
    /// built through [`DigitSpec::eventually_periodic`] or the parser.
    EventuallyPeriodic { prefix: Vec<u64>, cycle: Vec<u64> },
    Generated(DigitStream),
}

impl DigitSpec {
    pub fn eventually_periodic(prefix: Vec<u64>, cycle: Vec<u64>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(CantorError::EmptyCycle);
        }
        Ok(DigitSpec::EventuallyPeriodic { prefix, cycle })
    }

    /// Digit `k >= 1` with no range check against any basis.
    pub fn raw(&self, k: u64) -> u64 {
        assert!(k >= 1, "digits are indexed from 1");
        match self {
            DigitSpec::Finite(d) => d.get((k - 1) as usize).copied().unwrap_or(0),
            DigitSpec::EventuallyPeriodic { prefix, cycle } => {
                let len = prefix.len() as u64;
                if k <= len {
                    prefix[(k - 1) as usize]
                } else if cycle.is_empty() {
                    0
                } else {
                    cycle[((k - len - 1) % cycle.len() as u64) as usize]
                }
            }
            DigitSpec::Generated(s) => s.digit(k),
        }
    }

    /// Digit `k`, checked against `Θ_k = {0, ..., q_k - 1}` of `basis`.
    pub fn digit_at(&self, basis: &BasisSpec, k: u64) -> Result<u64> {
        let e = self.raw(k);
        check_digit(basis, k, e)?;
        Ok(e)
    }

    /// The first `n` digits, each range-checked.
    pub fn take(&self, basis: &BasisSpec, n: u64) -> Result<Vec<u64>> {
        if let DigitSpec::Generated(s) = self {
            s.materialize(n);
        }
        (1..=n).map(|k| self.digit_at(basis, k)).collect()
    }

    /// Drops the first `k` digits.
    pub fn skip(&self, k: u64) -> DigitSpec {
        match self {
            DigitSpec::Finite(d) => DigitSpec::Finite(d.iter().skip(k as usize).copied().collect()),
            DigitSpec::EventuallyPeriodic { prefix, cycle } => {
                let len = prefix.len() as u64;
                if k <= len {
                    DigitSpec::EventuallyPeriodic { prefix: prefix[k as usize..].to_vec(), cycle: cycle.clone() }
                } else {
                    let mut c = cycle.clone();
                    if !c.is_empty() {
                        let turn = ((k - len) % c.len() as u64) as usize;
                        c.rotate_left(turn);
                    }
                    DigitSpec::EventuallyPeriodic { prefix: vec![], cycle: c }
                }
            }
            DigitSpec::Generated(s) => DigitSpec::Generated(s.skip(k)),
        }
    }

    /// `Finite` with trailing zeros dropped when the cycle is all zeros,
    /// otherwise `EventuallyPeriodic`. The cycle must be nonempty.
    pub(crate) fn settled(mut prefix: Vec<u64>, cycle: Vec<u64>) -> Self {
        debug_assert!(!cycle.is_empty());
        if cycle.iter().all(|&e| e == 0) {
            while prefix.last() == Some(&0) {
                prefix.pop();
            }
            return DigitSpec::Finite(prefix);
        }
        DigitSpec::EventuallyPeriodic { prefix, cycle }
    }

    /// `Some(prefix)` when the digits are eventually all zero and this is
    /// visible from the representation.
    pub fn as_terminating(&self) -> Option<Vec<u64>> {
        match self {
            DigitSpec::Finite(d) => Some(d.clone()),
            DigitSpec::EventuallyPeriodic { prefix, cycle } if cycle.iter().all(|&e| e == 0) => Some(prefix.clone()),
            _ => None,
        }
    }
}

pub(crate) fn check_digit(basis: &BasisSpec, k: u64, e: u64) -> Result<()> {
    let q = basis.q_at(k);
    if e >= q {
        return Err(CantorError::DigitOutOfRange { index: k, digit: e, radix: q });
    }
    Ok(())
}

/// Free-function form of [`DigitSpec::digit_at`].
pub fn digit_at(d: &DigitSpec, basis: &BasisSpec, k: u64) -> Result<u64> {
    d.digit_at(basis, k)
}

/// The two expansions of a Q-rational number.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPair {
    /// `ε_1 ... ε_m 0 0 0 ...` with `ε_m >= 1`.
    pub high: DigitSpec,
    /// `ε_1 ... (ε_m - 1) (q_{m+1} - 1) (q_{m+2} - 1) ...`
    pub low: DigitSpec,
    /// The position `m` where the two forms part ways.
    pub split: u64,
}

/// Completes a Q-rational expansion into its pair of representations.
///
/// `d` may be the terminating form, or the co-finite form whose tail is
/// `q_k - 1` forever (which needs a periodic basis to be visible from a
/// finite description).
pub fn dual_of(d: &DigitSpec, basis: &BasisSpec) -> Result<DualPair> {
    if let Some(mut digits) = d.as_terminating() {
        while digits.last() == Some(&0) {
            digits.pop();
        }
        if digits.is_empty() {
            return Err(CantorError::NotQRational("0 has a single representation".into()));
        }
        for (i, &e) in digits.iter().enumerate() {
            check_digit(basis, i as u64 + 1, e)?;
        }
        let m = digits.len() as u64;
        let mut low_prefix = digits.clone();
        *low_prefix.last_mut().expect("non-empty") -= 1;
        let rest = basis.shifted(m);
        let low = match rest.periodic_view() {
            Some(view) => {
                low_prefix.extend(view.prefix.iter().map(|q| q - 1));
                DigitSpec::EventuallyPeriodic { prefix: low_prefix, cycle: view.cycle.iter().map(|q| q - 1).collect() }
            }
            None => {
                let basis = basis.clone();
                DigitSpec::Generated(DigitStream::from_fn(move |k| {
                    if k <= m {
                        low_prefix[(k - 1) as usize]
                    } else {
                        basis.q_at(k) - 1
                    }
                }))
            }
        };
        return Ok(DualPair { high: DigitSpec::Finite(digits), low, split: m });
    }

    let DigitSpec::EventuallyPeriodic { prefix, cycle } = d else {
        return Err(CantorError::NotQRational("a generated stream has no decidable tail".into()));
    };
    if cycle.is_empty() {
        return Err(CantorError::EmptyCycle);
    }
    let view = basis.periodic_view().ok_or_else(|| {
        CantorError::NotQRational("a periodic digit tail cannot stay maximal over an unbounded basis".into())
    })?;
    let start = prefix.len().max(view.prefix.len()) as u64;
    let span = (cycle.len() as u64).lcm(&(view.cycle.len() as u64));
    for k in 1..=start + span {
        check_digit(basis, k, d.raw(k))?;
    }
    if (start + 1..=start + span).any(|k| d.raw(k) != basis.q_at(k) - 1) {
        return Err(CantorError::NotQRational("the digit tail is neither all zero nor all maximal".into()));
    }
    let m = (1..=start).rev().find(|&k| d.raw(k) != basis.q_at(k) - 1).ok_or_else(|| {
        CantorError::NotQRational("1 has a single representation in [0, 1]".into())
    })?;
    let mut high: Vec<u64> = (1..=m).map(|k| d.raw(k)).collect();
    *high.last_mut().expect("m >= 1") += 1;
    Ok(DualPair { high: DigitSpec::Finite(high), low: d.clone(), split: m })
}

fn join(digits: &[u64]) -> String {
    digits.iter().map(u64::to_string).collect::<Vec<_>>().join(".")
}

/// Renders digits in the dotted text form. Finite and periodic specs are
/// written exactly; generated streams contribute their first `count` digits.
pub fn format_digits(d: &DigitSpec, count: u64) -> String {
    match d {
        DigitSpec::Finite(digits) => join(digits),
        DigitSpec::EventuallyPeriodic { prefix, cycle } => format!("{}({})", join(prefix), join(cycle)),
        DigitSpec::Generated(s) => join(&s.prefix(count)),
    }
}

fn parse_group(text: &str) -> Result<Vec<u64>> {
    let bad = |why: &str| CantorError::ParseError(format!("{why} in digit text {text:?}"));
    if text.is_empty() {
        return Ok(vec![]);
    }
    if !text.contains('[') {
        return text
            .split('.')
            .map(|part| part.parse::<u64>().map_err(|_| bad("bad digit")))
            .collect();
    }
    let mut out = Vec::new();
    let mut chars = text.chars();
    while let Some(c) = chars.next() {
        match c {
            '0'..='9' => out.push(u64::from(c.to_digit(10).expect("decimal"))),
            '[' => {
                let mut group = String::new();
                loop {
                    match chars.next() {
                        Some(']') => break,
                        Some(c) => group.push(c),
                        None => return Err(bad("unclosed bracket group")),
                    }
                }
                out.push(group.parse::<u64>().map_err(|_| bad("bad bracket group"))?);
            }
            _ => return Err(bad("unexpected character")),
        }
    }
    Ok(out)
}

/// Parses the dotted (or compact bracket) digit text.
pub fn parse_digits(text: &str) -> Result<DigitSpec> {
    let mut body = text.trim();
    for ellipsis in ["...", "\u{2026}"] {
        if let Some(stripped) = body.strip_suffix(ellipsis) {
            body = stripped.trim_end();
        }
    }
    match body.split_once('(') {
        None => Ok(DigitSpec::Finite(parse_group(body)?)),
        Some((prefix, rest)) => {
            let cycle = rest
                .strip_suffix(')')
                .ok_or_else(|| CantorError::ParseError(format!("unclosed cycle in {text:?}")))?;
            if cycle.contains(['(', ')']) {
                return Err(CantorError::ParseError(format!("nested cycle in {text:?}")));
            }
            DigitSpec::eventually_periodic(parse_group(prefix)?, parse_group(cycle)?)
        }
    }
}
