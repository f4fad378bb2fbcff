//! Seeded generation of semiprime benchmark datasets: n = a * b of a fixed
//! decimal length r, with both factors probable primes and the smaller one
//! above the cube root of n.
//!
//! The smaller factor is drawn from a stratified mixture over its window
//! (n^(1/3), n^(1/2)): mostly magnitude-uniform (equal weight per bit
//! length), partly value-uniform, plus a small near-balanced stratum where
//! b is forced close to a. The mixture gives the factor-gap distribution
//! both a heavy bulk and the thin near-square tail that real factor bases
//! exhibit; the tail is what separates the multiplier methods at large r.
//!
//! Each record is produced from its own sub-stream keyed by (seed, index),
//! so a dataset is byte-identical however generation is parallelised.

use std::io::{BufRead, Write};

use num_bigint::RandBigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::{decimal_length, integer_root, is_probable_prime, isqrt_floor, Natural};
use crate::error::{Error, Result};

/// One generated semiprime with its ground-truth factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetRecord {
    pub n: Natural,
    /// Smaller prime factor.
    pub a: Natural,
    /// Larger prime factor.
    pub b: Natural,
    /// Decimal length r of n.
    pub digits: u32,
}

/// Parameters of one dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub digits: u32,
    pub count: usize,
    pub seed: u64,
}

pub const MIN_DIGITS: u32 = 3;
const RETRY_BUDGET: u32 = 10_000;

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        if self.digits < MIN_DIGITS {
            return Err(Error::InvalidInput(format!(
                "digits must be >= {MIN_DIGITS}, got {}",
                self.digits
            )));
        }
        if self.count == 0 {
            return Err(Error::InvalidInput("count must be >= 1".into()));
        }
        Ok(())
    }
}

/// Checks every DatasetRecord invariant, naming the first violation.
pub fn validate_record(rec: &DatasetRecord) -> Result<()> {
    let fail = |msg: String| Err(Error::InvalidInput(msg));
    if &rec.a * &rec.b != rec.n {
        return fail(format!("n != a*b for n={}", rec.n));
    }
    if rec.a > rec.b {
        return fail(format!("a > b for n={}", rec.n));
    }
    if decimal_length(&rec.n) != rec.digits as usize {
        return fail(format!(
            "decimal length of n={} is {} but record says {}",
            rec.n,
            decimal_length(&rec.n),
            rec.digits
        ));
    }
    if &rec.a * &rec.a * &rec.a <= rec.n {
        return fail(format!("a^3 <= n for n={} (a={})", rec.n, rec.a));
    }
    if !is_probable_prime(&rec.a) {
        return fail(format!("a={} is not prime (n={})", rec.a, rec.n));
    }
    if !is_probable_prime(&rec.b) {
        return fail(format!("b={} is not prime (n={})", rec.b, rec.n));
    }
    Ok(())
}

/// Uniform sample from [lo, hi] advanced upward to the next probable prime
/// still inside the interval; resamples on overshoot. Deterministic for a
/// given stream state.
pub fn random_probable_prime(
    lo: &Natural,
    hi: &Natural,
    rng: &mut ChaCha8Rng,
) -> Result<Natural> {
    if lo > hi {
        return Err(Error::InvalidInput(format!("empty interval [{lo}, {hi}]")));
    }
    for _ in 0..RETRY_BUDGET {
        let mut c = rng.gen_biguint_range(lo, &(hi + 1u32));
        if is_probable_prime(&c) {
            return Ok(c);
        }
        // advance on odd numbers only
        if c.is_even() {
            c += 1u32;
        } else {
            c += 2u32;
        }
        while c <= *hi {
            if is_probable_prime(&c) {
                return Ok(c);
            }
            c += 2u32;
        }
    }
    Err(Error::GenerationFailed {
        attempts: RETRY_BUDGET,
    })
}

/// Stratum weights, in percent, for the position of the smaller factor
/// within its window: equal-weight-per-bit-length, value-uniform, and
/// near-balanced (b forced within a/512 of a).
const WEIGHT_LOG_UNIFORM: u32 = 59;
const WEIGHT_UNIFORM: u32 = 40;

/// One record of decimal length `digits`: sample prime a against the
/// magnitude window (10^((r-1)/3), 10^(r/2)) using the stratified mixture
/// described in the module docs, prime b so that n = a*b has r digits, then
/// enforce the exact constraints (r digits, a^3 > n, a <= b) by rejection.
pub fn generate_record(digits: u32, rng: &mut ChaCha8Rng) -> Result<DatasetRecord> {
    if digits < MIN_DIGITS {
        return Err(Error::InvalidInput(format!(
            "digits must be >= {MIN_DIGITS}, got {digits}"
        )));
    }
    let ten = Natural::from(10u32);
    let low_pow = ten.pow(digits - 1); // 10^(r-1)
    let high = ten.pow(digits) - 1u32; // 10^r - 1
    let lo_a = integer_root(&low_pow, 3) + 1u32;
    let hi_a = isqrt_floor(&high);
    let (lo_bits, hi_bits) = (lo_a.bits(), hi_a.bits());

    for _ in 0..RETRY_BUDGET {
        use rand::Rng;
        let stratum = rng.gen_range(0u32..100);
        let (a_lo, a_hi, near_balanced) = if stratum < WEIGHT_LOG_UNIFORM {
            // uniform over bit lengths, then uniform within the class
            let bits = rng.gen_range(lo_bits..=hi_bits);
            let class_lo = (Natural::one() << (bits - 1)).max(lo_a.clone());
            let class_hi = ((Natural::one() << bits) - 1u32).min(hi_a.clone());
            (class_lo, class_hi, false)
        } else if stratum < WEIGHT_LOG_UNIFORM + WEIGHT_UNIFORM {
            (lo_a.clone(), hi_a.clone(), false)
        } else {
            // near-balanced: a above sqrt(10^(r-1)) so b can sit next to it
            (isqrt_floor(&low_pow).max(lo_a.clone()), hi_a.clone(), true)
        };
        if a_lo > a_hi {
            continue;
        }
        let a = match random_probable_prime(&a_lo, &a_hi, rng) {
            Ok(a) => a,
            Err(Error::GenerationFailed { .. }) => continue,
            Err(e) => return Err(e),
        };
        let mut lo_b = (&low_pow + &a - 1u32) / &a; // ceil(10^(r-1) / a)
        let mut hi_b = &high / &a;
        if near_balanced {
            lo_b = lo_b.max(a.clone());
            hi_b = hi_b.min(&a + (&a >> 9u32) + 1u32);
        }
        if lo_b > hi_b {
            continue;
        }
        let b = match random_probable_prime(&lo_b, &hi_b, rng) {
            Ok(b) => b,
            Err(Error::GenerationFailed { .. }) => continue,
            Err(e) => return Err(e),
        };
        let n = &a * &b;
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        if decimal_length(&n) != digits as usize {
            continue;
        }
        if &a * &a * &a <= n {
            continue;
        }
        return Ok(DatasetRecord { n, a, b, digits });
    }
    Err(Error::GenerationFailed {
        attempts: RETRY_BUDGET,
    })
}

fn record_stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&index.to_le_bytes());
    key[16..24].copy_from_slice(b"semiprim");
    ChaCha8Rng::from_seed(key)
}

/// Generates `spec.count` records. Record i comes from the sub-stream
/// (seed, i), so the output is independent of how the work is split across
/// threads. Duplicates are permitted.
pub fn generate_dataset(spec: &GeneratorSpec) -> Result<Vec<DatasetRecord>> {
    spec.validate()?;
    (0..spec.count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = record_stream(spec.seed, i);
            generate_record(spec.digits, &mut rng)
        })
        .collect()
}

pub const DATASET_HEADER: &str = "n,a,b,digits";

/// Writes the line-oriented dataset format: a header line `n,a,b,digits`
/// followed by one comma-separated decimal record per line.
pub fn write_dataset<W: Write>(mut w: W, records: &[DatasetRecord]) -> Result<()> {
    writeln!(w, "{DATASET_HEADER}")?;
    for rec in records {
        writeln!(w, "{},{},{},{}", rec.n, rec.a, rec.b, rec.digits)?;
    }
    Ok(())
}

/// Reads a dataset file, reporting the 1-based line number of any malformed
/// line.
pub fn read_dataset<R: BufRead>(r: R) -> Result<Vec<DatasetRecord>> {
    let mut records = Vec::new();
    let mut lines = r.lines().enumerate();
    match lines.next() {
        Some((_, Ok(header))) if header.trim_end() == DATASET_HEADER => {}
        Some((_, Ok(header))) => {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header '{DATASET_HEADER}', got '{header}'"),
            })
        }
        Some((_, Err(e))) => return Err(e.into()),
        None => {
            return Err(Error::Parse {
                line: 1,
                message: "empty file".into(),
            })
        }
    }
    for (idx, line) in lines {
        let line = line?;
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.trim_end().split(',').collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected 4 fields, got {}", fields.len()),
            });
        }
        let parse_nat = |s: &str| -> Result<Natural> {
            s.parse::<Natural>().map_err(|e| Error::Parse {
                line: lineno,
                message: format!("bad integer '{s}': {e}"),
            })
        };
        let n = parse_nat(fields[0])?;
        let a = parse_nat(fields[1])?;
        let b = parse_nat(fields[2])?;
        let digits = parse_nat(fields[3])?.to_u32().ok_or_else(|| Error::Parse {
            line: lineno,
            message: format!("digit count '{}' out of range", fields[3]),
        })?;
        records.push(DatasetRecord { n, a, b, digits });
    }
    Ok(records)
}
