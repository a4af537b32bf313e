//! The `cantor` command line.
//!
//! ```text
//! cantor <verb> --basis <spec> (--value <u/v> | --digits <digit-text>)
//!        [--count N] [--precision D] [--format text|json]
//! ```
//!
//! Output is a pure function of the arguments. Exit status is 0 on success,
//! 1 on domain errors and 2 on usage errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::alternating::{alt_bounds, alt_certify, alt_decode, alt_encode, alt_finite_criterion};
use crate::basis::BasisSpec;
use crate::classify::{classify_digits, classify_rational, Classification};
use crate::decoder::{decode_exact, decode_finite, Enclosure};
use crate::digits::{dual_of, format_digits, parse_digits, DigitSpec};
use crate::encoder::{encode_delta, encode_greedy, finite_expansion_index, FiniteExpansion};
use crate::error::{CantorError, Result};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::shift::{certify_rational, reconstruct, remainder_integrality, verify_divisibility, Certificate};
use crate::transforms::{liu_wen_eval, psi_eval, psi_map};

pub const GRAMMAR: &str = "usage: cantor <verb> --basis <spec> (--value <u/v> | --digits <digit-text>) \
[--count N] [--precision D] [--format text|json]
verbs: encode decode certify reconstruct classify alt-encode alt-decode alt-certify psi liuwen bounds
bases: periodic:q1,...,qL | affine:a,b | factorial:c | prefix:p1,...;<periodic|affine|factorial>
digits: 0.3.5.2 | 1(0.1) for a repeating cycle | 0352 and 10[11]4 compact form";

/// How far `encode` searches for a terminating expansion.
const FINITE_BOUND: u64 = 10_000;

#[derive(Debug, Parser)]
#[command(name = "cantor", version, about = "Exact Cantor series arithmetic", after_help = GRAMMAR)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Digits of a rational in [0, 1].
    Encode(Opts),
    /// Exact value of finite or eventually periodic digits.
    Decode(Opts),
    /// Rationality certificate from the shift orbit.
    Certify(Opts),
    /// Value from certificate digits written as prefix(cycle).
    Reconstruct(Opts),
    /// Condensation and tail ratio for a value, Marques test for digits.
    Classify(Opts),
    /// Alternating-series digits.
    AltEncode(Opts),
    /// Alternating-series value.
    AltDecode(Opts),
    /// First repeat of the alternating shift orbit.
    AltCertify(Opts),
    /// The min(E_k, q_k - 1) digit map into the basis given by --to.
    Psi(Opts),
    /// Enclosure of the Liu Wen function.
    Liuwen(Opts),
    /// Value range of the alternating series.
    Bounds(Opts),
}

#[derive(Debug, Args)]
struct Opts {
    #[arg(long)]
    basis: String,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "digits")]
    value: Option<String>,
    #[arg(long)]
    digits: Option<String>,
    #[arg(long, default_value_t = 20)]
    count: u64,
    #[arg(long, default_value_t = 1000)]
    precision: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Target basis for `psi`.
    #[arg(long)]
    to: Option<String>,
    /// Encoding procedure for `encode`.
    #[arg(long, value_enum, default_value_t = Method::Greedy)]
    method: Method,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Greedy,
    Delta,
}

/// Exit status and the text to print, on stdout for status 0 and on stderr
/// otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub text: String,
}

fn is_usage(e: &CantorError) -> bool {
    matches!(e, CantorError::ParseError(_) | CantorError::InvalidBasis(_) | CantorError::EmptyCycle)
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return CliOutput { code, text: e.render().to_string() };
        }
    };
    match execute(cli.verb) {
        Ok(text) => CliOutput { code: 0, text },
        Err(e) if is_usage(&e) => CliOutput { code: 2, text: format!("{e}\n{GRAMMAR}\n") },
        Err(e) => CliOutput { code: 1, text: format!("{e}\n") },
    }
}

struct Input {
    basis: BasisSpec,
    opts: Opts,
}

impl Input {
    fn value(&self) -> Result<Rational> {
        let text = self.opts.value.as_deref().ok_or_else(|| missing("--value"))?;
        parse_rational(text)
    }

    fn digits(&self) -> Result<DigitSpec> {
        let text = self.opts.digits.as_deref().ok_or_else(|| missing("--digits"))?;
        parse_digits(text)
    }

    fn render(&self, text: String, json: Value) -> String {
        match self.opts.format {
            Format::Text => text + "\n",
            Format::Json => json.to_string() + "\n",
        }
    }
}

fn missing(flag: &str) -> CantorError {
    CantorError::ParseError(format!("this verb needs {flag}"))
}

fn execute(verb: Verb) -> Result<String> {
    let (opts, handler): (Opts, fn(&Input) -> Result<String>) = match verb {
        Verb::Encode(o) => (o, encode),
        Verb::Decode(o) => (o, decode),
        Verb::Certify(o) => (o, certify),
        Verb::Reconstruct(o) => (o, reconstruct_cmd),
        Verb::Classify(o) => (o, classify),
        Verb::AltEncode(o) => (o, alt_encode_cmd),
        Verb::AltDecode(o) => (o, alt_decode_cmd),
        Verb::AltCertify(o) => (o, alt_certify_cmd),
        Verb::Psi(o) => (o, psi),
        Verb::Liuwen(o) => (o, liuwen),
        Verb::Bounds(o) => (o, bounds),
    };
    handler(&Input { basis: opts.basis.parse()?, opts })
}

fn finite_json(f: FiniteExpansion) -> Value {
    serde_json::to_value(f).expect("plain enum")
}

fn enclosure_json(e: &Enclosure) -> Value {
    serde_json::to_value(e).expect("plain struct")
}

fn encode(input: &Input) -> Result<String> {
    let x = input.value()?;
    let count = input.opts.count;
    let d = match input.opts.method {
        Method::Greedy => encode_greedy(&x, &input.basis, count)?,
        Method::Delta => encode_delta(&x, &input.basis, count)?,
    };
    let digits = d.take(&input.basis, count)?;
    let finite = finite_expansion_index(&x, &input.basis, FINITE_BOUND);
    Ok(input.render(
        format_digits(&d, count),
        json!({
            "basis": input.basis.to_string(),
            "value": format_rational(&x),
            "digits": digits,
            "finite_expansion": finite_json(finite),
        }),
    ))
}

fn decode(input: &Input) -> Result<String> {
    let d = input.digits()?;
    let x = match decode_exact(&d, &input.basis) {
        Err(CantorError::BasisNotPeriodic(why)) => match dual_of(&d, &input.basis) {
            Ok(pair) => decode_exact(&pair.high, &input.basis)?,
            Err(_) => return Err(CantorError::BasisNotPeriodic(why)),
        },
        other => other?,
    };
    let mut json = json!({ "basis": input.basis.to_string(), "value": format_rational(&x) });
    if let Ok(pair) = dual_of(&d, &input.basis) {
        json["dual"] = json!({
            "high": format_digits(&pair.high, input.opts.count),
            "low": format_digits(&pair.low, input.opts.count),
            "split": pair.split,
        });
    }
    Ok(input.render(format_rational(&x), json))
}

fn cert_text(c: &Certificate) -> String {
    let digits = DigitSpec::Finite(c.digits.clone());
    format!("n={} m={} value={} digits={}", c.n, c.m, format_rational(&c.value), format_digits(&digits, 0))
}

fn certify(input: &Input) -> Result<String> {
    let x = input.value()?;
    let c = certify_rational(&x, &input.basis)?;
    let mut json = serde_json::to_value(&c).expect("plain struct");
    let v = x.denom().clone();
    let steps: u64 = (v * 2u32).try_into().unwrap_or(u64::MAX).min(1 << 16);
    json["divisibility"] = verify_divisibility(&x, &c, &input.basis).into();
    json["integrality"] = remainder_integrality(&x, &input.basis, steps).into();
    json["reconstructed"] = format_rational(&reconstruct(&c, &input.basis)?).into();
    Ok(input.render(cert_text(&c), json))
}

fn reconstruct_cmd(input: &Input) -> Result<String> {
    let DigitSpec::EventuallyPeriodic { prefix, cycle } = input.digits()? else {
        return Err(CantorError::MalformedCertificate("write certificate digits as prefix(cycle)".into()));
    };
    let (n, m) = (prefix.len() as u64, cycle.len() as u64);
    let digits: Vec<u64> = prefix.into_iter().chain(cycle).collect();
    let value = decode_finite(&digits, &input.basis)?;
    // the value field plays no part in reconstruction
    let c = Certificate { n, m, value, digits };
    let x = reconstruct(&c, &input.basis)?;
    Ok(input.render(
        format_rational(&x),
        json!({ "basis": input.basis.to_string(), "n": n, "m": m, "value": format_rational(&x) }),
    ))
}

fn classification_text(c: &Classification) -> String {
    match c {
        Classification::Condensation(c) => format!(
            "condensation: start={} block_len={} h/k={}/{} blocks_checked={}",
            c.start, c.block_len, c.h, c.k, c.blocks_checked
        ),
        Classification::TailRatio { constant: true, n0: Some(n0), c: Some(c) } => {
            format!("tail-ratio: constant c={c} from n0={n0}")
        }
        Classification::TailRatio { .. } => "tail-ratio: not constant".to_string(),
        Classification::Marques { verdict } => {
            format!("marques: {}", serde_json::to_value(verdict).expect("plain enum").as_str().expect("string"))
        }
    }
}

fn classify(input: &Input) -> Result<String> {
    let found = if input.opts.value.is_some() {
        classify_rational(&input.value()?, &input.basis)?
    } else {
        vec![classify_digits(&input.digits()?, &input.basis)?]
    };
    let text = found.iter().map(classification_text).collect::<Vec<_>>().join("\n");
    Ok(input.render(text, serde_json::to_value(&found).expect("plain enums")))
}

fn alt_encode_cmd(input: &Input) -> Result<String> {
    let x = input.value()?;
    let d = alt_encode(&x, &input.basis)?;
    let finite = alt_finite_criterion(&x, &input.basis, FINITE_BOUND);
    // zero has no digits at all
    let shown = match format_digits(&d, 0) {
        s if s.is_empty() => "0".to_string(),
        s => s,
    };
    Ok(input.render(
        shown.clone(),
        json!({
            "basis": input.basis.to_string(),
            "value": format_rational(&x),
            "digits": shown,
            "finite_expansion": finite_json(finite),
        }),
    ))
}

fn alt_decode_cmd(input: &Input) -> Result<String> {
    let x = alt_decode(&input.digits()?, &input.basis)?;
    Ok(input.render(
        format_rational(&x),
        json!({ "basis": input.basis.to_string(), "value": format_rational(&x) }),
    ))
}

fn alt_certify_cmd(input: &Input) -> Result<String> {
    let c = alt_certify(&input.value()?, &input.basis)?;
    Ok(input.render(cert_text(&c), serde_json::to_value(&c).expect("plain struct")))
}

fn psi(input: &Input) -> Result<String> {
    let to: BasisSpec = input.opts.to.as_deref().ok_or_else(|| missing("--to"))?.parse()?;
    let d = input.digits()?;
    let count = input.opts.count;
    let out = psi_map(&d, &input.basis, &to, count)?;
    let enclosure = psi_eval(&d, &input.basis, &to, input.opts.precision)?;
    let shown = format_digits(&out, count);
    Ok(input.render(
        format!("{shown}\n{enclosure}"),
        json!({
            "basis": input.basis.to_string(),
            "to": to.to_string(),
            "digits": out.take(&to, count)?,
            "enclosure": enclosure_json(&enclosure),
        }),
    ))
}

fn liuwen(input: &Input) -> Result<String> {
    let e = liu_wen_eval(&input.digits()?, &input.basis, input.opts.precision)?;
    Ok(input.render(
        e.to_string(),
        json!({ "basis": input.basis.to_string(), "enclosure": enclosure_json(&e) }),
    ))
}

fn bounds(input: &Input) -> Result<String> {
    let r = alt_bounds(&input.basis)?;
    Ok(input.render(
        format!("a0={} range=[{}, {}]", format_rational(&r.a0), format_rational(&r.lo), format_rational(&r.hi)),
        serde_json::to_value(&r).expect("plain struct"),
    ))
}
