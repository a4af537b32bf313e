//! Exact arithmetic on Cantor series
//! `x = Σ ε_k / (q_1 q_2 ⋯ q_k)` with digits `0 <= ε_k < q_k`.
//!
//! A [`BasisSpec`] describes the radix sequence `(q_k)`. Rationals are turned
//! into digits by [`encode_greedy`] (or the integer recursion in
//! [`encode_delta`]) and back by [`decode_exact`]. The shift operator
//! [`sigma`] drives the rationality machinery: [`certify_rational`] finds a
//! repeat in the remainder orbit and [`reconstruct`] recovers the value from
//! it alone.
//!
//! ```
//! use cantor::{certify_rational, encode_greedy, reconstruct, BasisSpec};
//! use cantor::rational::ratio;
//!
//! let odd: BasisSpec = "affine:2,1".parse()?; // q_k = 2k + 1
//! let digits = encode_greedy(&ratio(1, 4), &odd, 8)?.take(&odd, 8)?;
//! assert_eq!(digits, [0, 3, 5, 2, 2, 9, 11, 4]);
//!
//! let cert = certify_rational(&ratio(1, 4), &odd)?;
//! assert_eq!(reconstruct(&cert, &odd)?, ratio(1, 4));
//! # Ok::<(), cantor::CantorError>(())
//! ```
//!
//! The alternating system `Σ (−1)^k ε_k/Q_k` lives in [`alternating`], the
//! Diananda–Oppenheim, Hančl–Tijdeman and Marques criteria in [`classify`],
//! and the `ψ` digit map and Liu Wen function in [`transforms`].

pub mod alternating;
pub mod basis;
pub mod classify;
pub mod cli;
pub mod decoder;
pub mod digits;
pub mod encoder;
pub mod error;
pub mod rational;
mod remainder;
pub mod shift;
pub mod transforms;

pub use alternating::{alt_bounds, alt_certify, alt_decode, alt_encode, alt_finite_criterion, AltValueRange};
pub use basis::{BasisKind, BasisSpec};
pub use classify::{find_condensation, marques_classify, tail_ratio_const, Condensation, MarquesVerdict, TailRatio};
pub use decoder::{decode_exact, decode_finite, enclose_prefix, Enclosure};
pub use digits::{dual_of, format_digits, parse_digits, DigitSpec, DigitStream, DualPair};
pub use encoder::{encode_delta, encode_exact, encode_greedy, finite_expansion_index, FiniteExpansion};
pub use error::{CantorError, Result};
pub use rational::Rational;
pub use shift::{certify_rational, reconstruct, sigma, verify_divisibility, Certificate};
pub use transforms::{liu_wen_eval, psi_eval, psi_map};

// Every chapter of the guide, and the README, is compiled and run as a doc test.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/bases.md")]
    mod bases {}
    #[doc = include_str!("../../../book/src/encoding.md")]
    mod encoding {}
    #[doc = include_str!("../../../book/src/shift.md")]
    mod shift {}
    #[doc = include_str!("../../../book/src/classification.md")]
    mod classification {}
    #[doc = include_str!("../../../book/src/alternating.md")]
    mod alternating {}
    #[doc = include_str!("../../../book/src/transforms.md")]
    mod transforms {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
