//! Factoring of natural numbers by multiplier search, with the related
//! Fermat-family methods, instrumented iteration counts, a seeded semiprime
//! dataset generator and a benchmark harness.
//!
//! The flagship method (`rm`) premultiplies n by 4*m and searches a bounded
//! recursive tree of composite multipliers K = k_1 * ... * k_g, testing at
//! each leaf whether ceil(sqrt(4*m*n*K))^2 - 4*m*n*K is a perfect square.
//! A successful leaf yields a factor via gcd. The related `sm` method runs
//! the same leaf test over k = 1, 2, 3, ... with a constant multiplier.

pub mod arith;
pub mod bench;
pub mod dataset;
pub mod error;
pub mod factor;

pub use arith::Natural;
pub use bench::BenchRow;
pub use dataset::{DatasetRecord, GeneratorSpec};
pub use error::{Error, Result};
pub use factor::{FactorOutcome, Method, MethodConfig, Phase, Verdict};
