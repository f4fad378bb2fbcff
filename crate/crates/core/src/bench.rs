//! Runs factoring methods over datasets, verifies every returned factor
//! against the generation ground truth, and aggregates the floored mean
//! iteration count per (digit length, method, multiplier) cell.

use std::io::Write;
use std::time::Instant;

use num_traits::One;
use rayon::prelude::*;

use crate::arith::Natural;
use crate::dataset::DatasetRecord;
use crate::error::{Error, Result};
use crate::factor::{factor_with, FactorOutcome, Method, MethodConfig, Verdict};

/// Aggregated statistics for one (digits, method, multiplier) cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub digits: u32,
    pub method: Method,
    pub multiplier_m: Natural,
    pub count: usize,
    /// Floored mean of the per-number iteration counts.
    pub mean_iterations_floor: u64,
    pub failures: usize,
    pub wall_time_ms: u64,
}

/// A record whose outcome did not reproduce the generated factors.
#[derive(Debug, Clone)]
pub struct Mismatch {
    pub index: usize,
    pub n: Natural,
    pub detail: String,
}

/// Floor of the arithmetic mean.
pub fn mean_iterations(samples: &[u64]) -> Result<u64> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("mean of empty sample set".into()));
    }
    let sum: u128 = samples.iter().map(|&s| s as u128).sum();
    Ok((sum / samples.len() as u128) as u64)
}

/// Round-half-up alternative kept for comparison against the floor reading.
pub fn mean_iterations_round_half_up(samples: &[u64]) -> Result<u64> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("mean of empty sample set".into()));
    }
    let sum: u128 = samples.iter().map(|&s| s as u128).sum();
    let count = samples.len() as u128;
    Ok(((sum + count / 2) / count) as u64)
}

/// The digit length r* from which SM's iteration cost provably exceeds RM's
/// for matched multipliers: the smallest r with 10^r >= m_rm^6.
pub fn predicted_crossover(m_rm: &Natural) -> u32 {
    let sixth = m_rm.pow(6);
    if sixth.is_one() {
        return 0;
    }
    let digits = crate::arith::decimal_length(&sixth) as u32;
    if Natural::from(10u32).pow(digits - 1) == sixth {
        digits - 1
    } else {
        digits
    }
}

/// Checks each outcome against its record: the factor must be a or b;
/// ProbablePrime or Aborted on a semiprime record is a mismatch.
pub fn verify_outcomes(dataset: &[DatasetRecord], outcomes: &[FactorOutcome]) -> Vec<Mismatch> {
    dataset
        .iter()
        .zip(outcomes.iter())
        .enumerate()
        .filter_map(|(index, (rec, out))| {
            let detail = match &out.verdict {
                Verdict::Factored(f) if *f == rec.a || *f == rec.b => return None,
                Verdict::Factored(f) => format!("factor {f} is neither {} nor {}", rec.a, rec.b),
                Verdict::ProbablePrime => "reported probable prime for a semiprime".to_string(),
                Verdict::Aborted => "aborted at safety cap".to_string(),
            };
            Some(Mismatch {
                index,
                n: rec.n.clone(),
                detail,
            })
        })
        .collect()
}

/// Factors every record with every configuration and aggregates one row per
/// configuration. Per-record work fans out over `workers` threads (0 = rayon
/// default); the reduction is a commutative sum, so results do not depend on
/// scheduling.
pub fn run_benchmark(
    dataset: &[DatasetRecord],
    cfgs: &[MethodConfig],
    workers: usize,
) -> Result<Vec<BenchRow>> {
    if dataset.is_empty() {
        return Err(Error::InvalidInput("empty dataset".into()));
    }
    let digits = dataset[0].digits;
    if dataset.iter().any(|r| r.digits != digits) {
        return Err(Error::InvalidInput(
            "all dataset records must share the same digit count".into(),
        ));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot build worker pool: {e}")))?;

    let mut rows = Vec::with_capacity(cfgs.len());
    for cfg in cfgs {
        let started = Instant::now();
        let outcomes: Result<Vec<FactorOutcome>> = pool.install(|| {
            dataset
                .par_iter()
                .map(|rec| factor_with(&rec.n, cfg))
                .collect()
        });
        let outcomes = outcomes?;
        let wall_time_ms = started.elapsed().as_millis() as u64;
        let iterations: Vec<u64> = outcomes.iter().map(|o| o.iterations).collect();
        let failures = verify_outcomes(dataset, &outcomes).len();
        rows.push(BenchRow {
            digits,
            method: cfg.method,
            multiplier_m: cfg.multiplier_m.clone(),
            count: dataset.len(),
            mean_iterations_floor: mean_iterations(&iterations)?,
            failures,
            wall_time_ms,
        });
    }
    Ok(rows)
}

pub const REPORT_HEADER: &str =
    "digits,method,multiplier,count,mean_iterations_floor,failures,wall_time_ms";

/// Machine-readable report: header plus one comma-separated line per row.
pub fn write_report<W: Write>(mut w: W, rows: &[BenchRow]) -> Result<()> {
    writeln!(w, "{REPORT_HEADER}")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            row.digits,
            row.method,
            row.multiplier_m,
            row.count,
            row.mean_iterations_floor,
            row.failures,
            row.wall_time_ms
        )?;
    }
    Ok(())
}

/// Human-readable table of the same rows.
pub fn format_table(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:>6} {:>8} {:>12} {:>8} {:>12} {:>9} {:>12}\n",
        "digits", "method", "multiplier", "count", "mean_iters", "failures", "wall_ms"
    ));
    for row in rows {
        out.push_str(&format!(
            "{:>6} {:>8} {:>12} {:>8} {:>12} {:>9} {:>12}\n",
            row.digits,
            row.method.as_str(),
            row.multiplier_m.to_string(),
            row.count,
            row.mean_iterations_floor,
            row.failures,
            row.wall_time_ms
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::Phase;

    #[test]
    fn mean_examples() {
        assert_eq!(mean_iterations(&[3, 4, 5]).unwrap(), 4);
        assert_eq!(mean_iterations(&[1, 2]).unwrap(), 1);
        assert_eq!(mean_iterations(&[7]).unwrap(), 7);
        assert!(mean_iterations(&[]).is_err());
        assert_eq!(mean_iterations_round_half_up(&[1, 2]).unwrap(), 2);
    }

    #[test]
    fn crossover_examples() {
        assert_eq!(predicted_crossover(&Natural::from(120u32)), 13);
        assert_eq!(predicted_crossover(&Natural::from(10u32)), 6);
        assert_eq!(predicted_crossover(&Natural::from(1u32)), 0);
    }

    fn record(n: u64, a: u64, b: u64, digits: u32) -> DatasetRecord {
        DatasetRecord {
            n: Natural::from(n),
            a: Natural::from(a),
            b: Natural::from(b),
            digits,
        }
    }

    fn outcome(verdict: Verdict) -> FactorOutcome {
        FactorOutcome {
            verdict,
            iterations: 1,
            phase: Phase::MultiplierSearch,
        }
    }

    #[test]
    fn verify_accepts_either_factor() {
        let data = vec![record(91, 7, 13, 2)];
        assert!(verify_outcomes(&data, &[outcome(Verdict::Factored(Natural::from(7u32)))])
            .is_empty());
        assert!(verify_outcomes(&data, &[outcome(Verdict::Factored(Natural::from(13u32)))])
            .is_empty());
        assert_eq!(verify_outcomes(&data, &[outcome(Verdict::ProbablePrime)]).len(), 1);
        assert_eq!(
            verify_outcomes(&data, &[outcome(Verdict::Factored(Natural::from(9u32)))]).len(),
            1
        );
    }

    #[test]
    fn single_record_sm_bench() {
        let data = vec![record(91, 7, 13, 2)];
        let cfg = MethodConfig::new(Method::Sm, 1);
        let rows = run_benchmark(&data, &[cfg], 1).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].mean_iterations_floor, 1);
        assert_eq!(rows[0].failures, 0);
    }

    #[test]
    fn report_round_trip_shape() {
        let rows = vec![BenchRow {
            digits: 12,
            method: Method::Rm,
            multiplier_m: Natural::from(120u32),
            count: 20000,
            mean_iterations_floor: 1134,
            failures: 0,
            wall_time_ms: 1234,
        }];
        let mut buf = Vec::new();
        write_report(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(REPORT_HEADER));
        assert!(text.contains("12,rm,120,20000,1134,0,1234"));
    }
}
