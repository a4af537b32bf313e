//! One line per acceptance criterion, at the stated tolerances and time
//! budgets. Exits non-zero if any criterion fails.

use std::time::{Duration, Instant};

use cantor::alternating::FINITE_SEARCH_LIMIT;
use cantor::classify::{verify_condensation, CONDENSATION_BLOCKS};
use cantor::decoder::decode_with_max_tail;
use cantor::rational::ratio;
use cantor::shift::remainder_integrality;
use cantor::*;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::Rng;
use proptest::test_runner::{RngAlgorithm, TestRng};

type Outcome = std::result::Result<String, String>;

fn b(text: &str) -> BasisSpec {
    text.parse().unwrap()
}

fn ensure(ok: bool, why: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

fn rng() -> TestRng {
    TestRng::deterministic_rng(RngAlgorithm::ChaCha)
}

fn below(rng: &mut TestRng, n: u64) -> u64 {
    rng.next_u64() % n
}

fn corpus_bases() -> Vec<BasisSpec> {
    ["periodic:2", "periodic:2,3", "affine:2,1", "factorial:1"].iter().map(|t| b(t)).collect()
}

/// All reduced `u/v` with `1 <= u <= v <= max`.
fn reduced(max: i64) -> Vec<Rational> {
    (1..=max)
        .flat_map(|v| (1..=v).filter(move |u| u.gcd(&v) == 1).map(move |u| ratio(u, v)))
        .collect()
}

/// Random terminating digits over `basis`, last digit nonzero.
fn random_finite(rng: &mut TestRng, basis: &BasisSpec, max_len: u64) -> Vec<u64> {
    let len = 1 + below(rng, max_len);
    let mut digits: Vec<u64> = (1..=len).map(|k| below(rng, basis.q_at(k))).collect();
    let last = digits.len() - 1;
    digits[last] = 1 + below(rng, basis.q_at(len) - 1);
    digits
}

struct Run {
    failed: usize,
}

impl Run {
    fn check(&mut self, id: u32, budget: Option<Duration>, body: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let result = body();
        let took = start.elapsed();
        let result = match (result, budget) {
            (Ok(_), Some(limit)) if took > limit => Err(format!("took {took:?}, budget {limit:?}")),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("criterion {id:>2}: PASS  {detail} ({took:.2?})"),
            Err(why) => {
                self.failed += 1;
                println!("criterion {id:>2}: FAIL  {why} ({took:.2?})");
            }
        }
    }
}

struct Certified {
    x: Rational,
    basis: BasisSpec,
    cert: Certificate,
}

fn main() {
    let mut run = Run { failed: 0 };
    let ms = Duration::from_millis;

    run.check(1, Some(ms(1)), || {
        let odd = b("affine:2,1");
        let want = [0, 3, 5, 2, 2, 9, 11, 4];
        let g = encode_greedy(&ratio(1, 4), &odd, 8).and_then(|d| d.take(&odd, 8)).map_err(|e| e.to_string())?;
        let d = encode_delta(&ratio(1, 4), &odd, 8).and_then(|d| d.take(&odd, 8)).map_err(|e| e.to_string())?;
        ensure(g == want && d == want, || format!("greedy {g:?}, delta {d:?}"))?;
        Ok("1/4 -> 0.3.5.2.2.9.11.4 by both encoders".into())
    });

    run.check(2, Some(ms(1)), || {
        let odd = b("affine:2,1");
        let want = [1, 0, 4, 3, 4, 1, 9, 6, 7];
        let g = encode_greedy(&ratio(3, 8), &odd, 9).and_then(|d| d.take(&odd, 9)).map_err(|e| e.to_string())?;
        let d = encode_delta(&ratio(3, 8), &odd, 9).and_then(|d| d.take(&odd, 9)).map_err(|e| e.to_string())?;
        ensure(g == want && d == want, || format!("greedy {g:?}, delta {d:?}"))?;
        Ok("3/8 -> 1.0.4.3.4.1.9.6.7 by both encoders".into())
    });

    run.check(3, Some(ms(10)), || {
        let odd = b("affine:2,1");
        let half = ratio(1, 2);
        // the series with ε_k = k is pinned to 1/2 by its prefix enclosures
        let series = DigitSpec::Generated(DigitStream::from_fn(|k| k));
        let e = enclose_prefix(&series, &odd, 50).map_err(|e| e.to_string())?;
        ensure(e.contains(&half), || format!("Σ k/Q_k enclosure {e} misses 1/2"))?;
        let digits = encode_greedy(&half, &odd, 50).and_then(|d| d.take(&odd, 50)).map_err(|e| e.to_string())?;
        ensure(digits.iter().zip(1..).all(|(&d, k)| d == k), || "digits of 1/2 are not ε_k = k".into())?;
        let c = certify_rational(&half, &odd).map_err(|e| e.to_string())?;
        ensure((c.n, c.m, &c.value) == (0, 1, &half), || format!("certificate n={} m={} value={}", c.n, c.m, c.value))?;
        for n in 0..=50 {
            let s = sigma(&half, &odd, n).map_err(|e| e.to_string())?;
            ensure(s == half, || format!("σ^{n} = {s}"))?;
        }
        Ok("certificate (0, 1, 1/2) and σ^n = 1/2 for n <= 50".into())
    });

    let mut corpus: Vec<Certified> = Vec::new();
    run.check(4, Some(Duration::from_secs(30)), || {
        let xs = reduced(300);
        for basis in corpus_bases() {
            for x in &xs {
                let cert = certify_rational(x, &basis).map_err(|e| format!("{x} over {basis}: {e}"))?;
                let v: u64 = x.denom().try_into().expect("small denominator");
                ensure(cert.n + cert.m <= v + 1, || format!("{x} over {basis}: n+m = {}", cert.n + cert.m))?;
                let back = reconstruct(&cert, &basis).map_err(|e| e.to_string())?;
                ensure(&back == x, || format!("{x} over {basis} reconstructs to {back}"))?;
                corpus.push(Certified { x: x.clone(), basis: basis.clone(), cert });
            }
        }
        Ok(format!("{} certificates, n+m <= v+1, all reconstruct exactly", corpus.len()))
    });

    run.check(5, None, || {
        ensure(!corpus.is_empty(), || "no corpus from criterion 4".into())?;
        for c in &corpus {
            ensure(verify_divisibility(&c.x, &c.cert, &c.basis), || format!("{} over {}", c.x, c.basis))?;
        }
        Ok(format!("Q_n(q_(n+1)⋯q_(n+m) − 1) ≡ 0 mod v for all {}", corpus.len()))
    });

    run.check(6, None, || {
        ensure(!corpus.is_empty(), || "no corpus from criterion 4".into())?;
        for c in &corpus {
            let v: u64 = c.x.denom().try_into().expect("small denominator");
            ensure(remainder_integrality(&c.x, &c.basis, 2 * v), || format!("{} over {}", c.x, c.basis))?;
        }
        Ok(format!("v·σ^k(u/v) ∈ ℤ for k <= 2v across {}", corpus.len()))
    });

    run.check(7, None, || {
        let mut rng = rng();
        let bases = corpus_bases();
        for i in 0..200 {
            let basis = &bases[i % bases.len()];
            let high = DigitSpec::Finite(random_finite(&mut rng, basis, 8));
            let pair = dual_of(&high, basis).map_err(|e| e.to_string())?;
            let hi = decode_exact(&pair.high, basis).map_err(|e| e.to_string())?;
            let lo = match basis.periodic_view() {
                Some(_) => decode_exact(&pair.low, basis),
                None => decode_with_max_tail(&pair.low, basis, pair.split),
            }
            .map_err(|e| e.to_string())?;
            ensure(hi == lo, || format!("{high:?} over {basis}: high {hi}, low {lo}"))?;
        }
        Ok("200 Q-rationals, high and low forms decode equal".into())
    });

    run.check(8, None, || {
        ensure(!corpus.is_empty(), || "no corpus from criterion 4".into())?;
        for c in &corpus {
            let found = find_condensation(&c.x, &c.basis).map_err(|e| format!("{} over {}: {e}", c.x, c.basis))?;
            let digits = encode_greedy(&c.x, &c.basis, 0).map_err(|e| e.to_string())?;
            let holds = verify_condensation(&found, &digits, &c.basis, CONDENSATION_BLOCKS).map_err(|e| e.to_string())?;
            ensure(holds && found.blocks_checked >= 10, || format!("{} over {}", c.x, c.basis))?;
        }
        let half = find_condensation(&ratio(1, 2), &b("affine:2,1")).map_err(|e| e.to_string())?;
        let want = (BigInt::one(), BigInt::from(2), 1);
        ensure((half.h.clone(), half.k.clone(), half.block_len) == want, || {
            format!("1/2 gives h/k = {}/{} block {}", half.h, half.k, half.block_len)
        })?;
        Ok(format!("{} condensations hold on 10 blocks; 1/2 gives h/k = 1/2, block 1", corpus.len()))
    });

    run.check(9, Some(Duration::from_secs(10)), || {
        let fact = b("factorial:1");
        // 1/e lies between consecutive partial sums of Σ (−1)^j / j!
        let (mut s, mut term) = (Rational::zero(), Rational::one());
        let mut sums = Vec::new();
        for j in 0..=21i64 {
            if j > 0 {
                term /= BigInt::from(j);
            }
            s = if j % 2 == 0 { s + &term } else { s - &term };
            sums.push(s.clone());
        }
        let (a, c) = (&sums[20], &sums[21]);
        let (a0_lo, a0_hi) = if a < c { (a, c) } else { (c, a) };
        let mut checked = 0;
        for v in 1..=200i64 {
            for u in -v..=v {
                if u.gcd(&v) != 1 {
                    continue;
                }
                let x = ratio(u, v);
                let inside = x >= a0_hi - Rational::one() && &x <= a0_lo;
                let outside = x < a0_lo - Rational::one() || &x > a0_hi;
                let n0 = match alt_finite_criterion(&x, &fact, FINITE_SEARCH_LIMIT) {
                    FiniteExpansion::At(n0) if n0 <= v as u64 => n0,
                    other => return Err(format!("{x}: {other:?}")),
                };
                match alt_encode(&x, &fact) {
                    Ok(d) => {
                        ensure(!outside, || format!("{x} is out of range yet encoded"))?;
                        let len = d.as_terminating().map(|f| f.len() as u64);
                        ensure(len == Some(n0), || format!("{x}: n0 = {n0}, digits {d:?}"))?;
                        let back = alt_decode(&d, &fact).map_err(|e| e.to_string())?;
                        ensure(back == x, || format!("{x} decodes back to {back}"))?;
                        checked += 1;
                    }
                    Err(CantorError::OutOfRange(_)) => ensure(!inside, || format!("{x} rejected as out of range"))?,
                    Err(e) => return Err(format!("{x}: {e}")),
                }
            }
        }
        let odd = b("affine:2,1");
        let mut never = 0;
        for j in 1..=7u32 {
            let v = 2i64.pow(j);
            for u in (-v + 1..v).filter(|u| u % 2 != 0) {
                let f = alt_finite_criterion(&ratio(u, v), &odd, FINITE_SEARCH_LIMIT);
                ensure(f == FiniteExpansion::ProvablyNever, || format!("{u}/{v}: {f:?}"))?;
                never += 1;
            }
        }
        Ok(format!("{checked} finite expansions stop at n0 <= v over factorial:1; {never} dyadic values ProvablyNever"))
    });

    run.check(10, None, || {
        let bases: Vec<BasisSpec> =
            ["periodic:2", "periodic:3", "periodic:2,3", "periodic:5,2,7", "prefix:5;periodic:2,3,4"]
                .iter()
                .map(|t| b(t))
                .collect();
        let mut rng = rng();
        for i in 0..300 {
            let basis = &bases[i % bases.len()];
            let range = alt_bounds(basis).map_err(|e| e.to_string())?;
            let den = 1 + below(&mut rng, 10_000) as i64;
            let t = ratio(below(&mut rng, den as u64 + 1) as i64, den);
            let x = &range.lo + (&range.hi - &range.lo) * t;
            let d = alt_encode(&x, basis).map_err(|e| format!("{x} over {basis}: {e}"))?;
            let back = alt_decode(&d, basis).map_err(|e| e.to_string())?;
            ensure(back == x, || format!("{x} over {basis} came back as {back}"))?;
        }
        let two = alt_bounds(&b("periodic:2")).map_err(|e| e.to_string())?;
        ensure(two.lo == ratio(-2, 3) && two.hi == ratio(1, 3), || format!("periodic:2 range [{}, {}]", two.lo, two.hi))?;
        Ok("300 alternating round trips exact; periodic:2 range [-2/3, 1/3]".into())
    });

    run.check(11, None, || {
        let fact = b("factorial:1");
        let ones = DigitSpec::eventually_periodic(vec![], vec![1]).unwrap();
        let v = marques_classify(&ones, &fact).map_err(|e| e.to_string())?;
        ensure(v == MarquesVerdict::Irrational, || format!("all ones: {v:?}"))?;
        let mut rng = rng();
        for _ in 0..100 {
            let d = DigitSpec::Finite(random_finite(&mut rng, &fact, 12));
            let v = marques_classify(&d, &fact).map_err(|e| e.to_string())?;
            ensure(v == MarquesVerdict::Rational, || format!("{d:?}: {v:?}"))?;
        }
        let mixed = b("periodic:2,3");
        let samples = [
            ones,
            DigitSpec::Finite(vec![1, 2]),
            DigitSpec::eventually_periodic(vec![0], vec![1, 0]).unwrap(),
            DigitSpec::Generated(DigitStream::from_fn(|k| k % 2)),
        ];
        for d in &samples {
            let v = marques_classify(d, &mixed).map_err(|e| e.to_string())?;
            ensure(v == MarquesVerdict::Inapplicable, || format!("{d:?} over periodic:2,3: {v:?}"))?;
        }
        Ok("all ones irrational, finite rational, periodic:2,3 inapplicable".into())
    });

    run.check(12, Some(Duration::from_secs(5)), || {
        let three = b("periodic:3");
        let ones = DigitSpec::eventually_periodic(vec![], vec![1]).unwrap();
        let mut last: Option<Enclosure> = None;
        for d in [10u64, 100, 1_000, 10_000] {
            let e = liu_wen_eval(&ones, &three, d).map_err(|e| e.to_string())?;
            ensure(e.contains(&Rational::one()), || format!("D = {d}: {e} misses 1"))?;
            ensure(e.width() <= ratio(1, d as i64), || format!("D = {d}: width {}", e.width()))?;
            if let Some(prev) = &last {
                ensure(e.is_subset_of(prev), || format!("D = {d}: {e} not inside {prev}"))?;
            }
            last = Some(e);
        }
        let bases = [b("periodic:3"), b("periodic:4"), b("periodic:3,5")];
        let mut rng = rng();
        for i in 0..50 {
            let basis = &bases[i % bases.len()];
            let high = DigitSpec::Finite(random_finite(&mut rng, basis, 6));
            let pair = dual_of(&high, basis).map_err(|e| e.to_string())?;
            for d in [100u64, 10_000] {
                let a = liu_wen_eval(&pair.high, basis, d).map_err(|e| e.to_string())?;
                let c = liu_wen_eval(&pair.low, basis, d).map_err(|e| e.to_string())?;
                ensure(a.intersects(&c), || format!("{high:?} over {basis}: {a} and {c} are disjoint"))?;
            }
        }
        Ok("all-ones encloses 1 within 1/D and nests; 50 dual pairs intersect".into())
    });

    if run.failed > 0 {
        println!("{} criteria failed", run.failed);
        std::process::exit(1);
    }
    println!("all 12 criteria pass");
}
