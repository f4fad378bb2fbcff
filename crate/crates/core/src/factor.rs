//! The five instrumented factoring procedures: trial division, Fermat,
//! Lehman, SM (constant-multiplier search) and RM (recursive multiplier
//! search with a duplicate sieve).
//!
//! Every algorithm reports `iterations`, the number of perfect-square
//! candidate tests it performed. Divisibility probes in the trial-division
//! phase are never counted, and the residue fast path inside square
//! detection never changes the counter.
//!
//! Inputs that fit machine words run on `u64`/`u128` kernels; larger inputs
//! fall back to arbitrary-precision loops with identical semantics.

use std::collections::HashSet;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{
    integer_root, is_perfect_square, isqrt_ceil, isqrt_ceil_u128, isqrt_floor, isqrt_floor_u128,
    recursion_depth, sqrt_if_square_u128, Natural,
};
use crate::error::{Error, Result};

/// Algorithm selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Trial,
    Fermat,
    Lehman,
    Sm,
    Rm,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Trial => "trial",
            Method::Fermat => "fermat",
            Method::Lehman => "lehman",
            Method::Sm => "sm",
            Method::Rm => "rm",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "trial" => Ok(Method::Trial),
            "fermat" => Ok(Method::Fermat),
            "lehman" => Ok(Method::Lehman),
            "sm" => Ok(Method::Sm),
            "rm" => Ok(Method::Rm),
            other => Err(Error::InvalidInput(format!("unknown method '{other}'"))),
        }
    }
}

pub const DEFAULT_SAFETY_CAP: u64 = 1_000_000_000;

/// Configuration for one factorization call.
///
/// `multiplier_m` is the RM multiplier m (the leaf test uses 4*m); for SM it
/// is the full constant multiplier M.
#[derive(Debug, Clone)]
pub struct MethodConfig {
    pub method: Method,
    pub multiplier_m: Natural,
    pub sieve_enabled: bool,
    pub depth_override: Option<u32>,
    pub safety_cap: u64,
}

impl MethodConfig {
    pub fn new(method: Method, multiplier_m: u64) -> Self {
        MethodConfig {
            method,
            multiplier_m: Natural::from(multiplier_m),
            sieve_enabled: true,
            depth_override: None,
            safety_cap: DEFAULT_SAFETY_CAP,
        }
    }

    /// RM with the recommended defaults (m = 120, sieve on).
    pub fn rm_default() -> Self {
        Self::new(Method::Rm, 120)
    }

    fn validate(&self) -> Result<()> {
        if self.multiplier_m.is_zero() {
            return Err(Error::InvalidInput("multiplier must be >= 1".into()));
        }
        if self.safety_cap == 0 {
            return Err(Error::InvalidInput("safety cap must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Factored(Natural),
    ProbablePrime,
    Aborted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    TrialDivision,
    MultiplierSearch,
}

/// Result of one instrumented factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorOutcome {
    pub verdict: Verdict,
    /// Count of perfect-square candidate tests performed.
    pub iterations: u64,
    pub phase: Phase,
}

impl FactorOutcome {
    fn trial(f: Natural) -> Self {
        FactorOutcome {
            verdict: Verdict::Factored(f),
            iterations: 0,
            phase: Phase::TrialDivision,
        }
    }

    fn prime_immediate() -> Self {
        FactorOutcome {
            verdict: Verdict::ProbablePrime,
            iterations: 0,
            phase: Phase::TrialDivision,
        }
    }

    pub fn factor(&self) -> Option<&Natural> {
        match &self.verdict {
            Verdict::Factored(f) => Some(f),
            _ => None,
        }
    }
}

/// Intermediate values of one successful leaf square test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafWitness {
    /// Composite multiplier K.
    pub k: Natural,
    /// s = ceil(sqrt(4*m*n*K)).
    pub s: Natural,
    /// d = s^2 - 4*m*n*K.
    pub d: Natural,
    /// D = sqrt(d).
    pub root_d: Natural,
    /// A = (s - D) / 2 when parities match, else s - D.
    pub a: Natural,
}

fn require_at_least(n: &Natural, min: u32, what: &str) -> Result<()> {
    if *n < Natural::from(min) {
        return Err(Error::InvalidInput(format!("{what} requires n >= {min}, got {n}")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Trial division
// ---------------------------------------------------------------------------

/// Smallest divisor f of `n` with 2 <= f <= bound, if any. Probes are not
/// counted as iterations.
pub fn trial_division(n: &Natural, bound: &Natural) -> Result<Option<Natural>> {
    require_at_least(n, 2, "trial_division")?;
    if let (Some(n64), Some(b64)) = (n.to_u64(), bound.to_u64().or(Some(u64::MAX))) {
        return Ok(trial_division_u64(n64, b64).map(Natural::from));
    }
    // big path: probe 2, 3, then 6k +/- 1
    for p in [2u32, 3u32] {
        if Natural::from(p) > *bound {
            return Ok(None);
        }
        if (n % p).is_zero() {
            return Ok(Some(Natural::from(p)));
        }
    }
    let root = isqrt_floor(n);
    let probe_limit = if *bound < root { bound.clone() } else { root };
    let mut f = Natural::from(5u32);
    while f <= probe_limit {
        if (n % &f).is_zero() {
            return Ok(Some(f));
        }
        let f2 = &f + 2u32;
        if f2 <= probe_limit && (n % &f2).is_zero() {
            return Ok(Some(f2));
        }
        f += 6u32;
    }
    if n <= bound {
        return Ok(Some(n.clone()));
    }
    Ok(None)
}

fn trial_division_u64(n: u64, bound: u64) -> Option<u64> {
    for p in [2u64, 3] {
        if p > bound {
            return None;
        }
        if n % p == 0 {
            return Some(p);
        }
    }
    let mut f = 5u64;
    while f <= bound && f * f <= n {
        if n % f == 0 {
            return Some(f);
        }
        if f + 2 <= bound && n % (f + 2) == 0 {
            return Some(f + 2);
        }
        f += 6;
    }
    if n <= bound {
        return Some(n);
    }
    None
}

fn phase1_bound(n: &Natural) -> Natural {
    let b = integer_root(n, 3);
    if b < Natural::from(2u32) {
        Natural::from(2u32)
    } else {
        b
    }
}

// ---------------------------------------------------------------------------
// Fermat
// ---------------------------------------------------------------------------

/// Classic difference-of-squares search. Requires odd n >= 9; trivial
/// representations (x - y = 1) are skipped and the search continues.
pub fn fermat_factor(n: &Natural, safety_cap: u64) -> Result<FactorOutcome> {
    if n.is_even() {
        return Err(Error::InvalidInput(
            "fermat_factor requires odd n (remove factors of 2 first)".into(),
        ));
    }
    require_at_least(n, 9, "fermat_factor")?;
    if n.bits() <= 110 {
        return Ok(fermat_small(n.to_u128().unwrap(), safety_cap));
    }
    Ok(fermat_big(n, safety_cap))
}

fn fermat_small(n: u128, cap: u64) -> FactorOutcome {
    let mut x = isqrt_ceil_u128(n);
    let mut t = x * x - n;
    let mut iterations = 0u64;
    loop {
        iterations += 1;
        if let Some(y) = sqrt_if_square_u128(t) {
            let f = x - y;
            if f > 1 && f < n {
                return FactorOutcome {
                    verdict: Verdict::Factored(Natural::from(f)),
                    iterations,
                    phase: Phase::MultiplierSearch,
                };
            }
        }
        if iterations >= cap {
            return FactorOutcome {
                verdict: Verdict::Aborted,
                iterations,
                phase: Phase::MultiplierSearch,
            };
        }
        t += 2 * x + 1;
        x += 1;
    }
}

fn fermat_big(n: &Natural, cap: u64) -> FactorOutcome {
    let mut x = isqrt_ceil(n);
    let mut t = &x * &x - n;
    let mut iterations = 0u64;
    loop {
        iterations += 1;
        if let Some(y) = is_perfect_square(&t) {
            let f = &x - &y;
            if f > Natural::one() && f < *n {
                return FactorOutcome {
                    verdict: Verdict::Factored(f),
                    iterations,
                    phase: Phase::MultiplierSearch,
                };
            }
        }
        if iterations >= cap {
            return FactorOutcome {
                verdict: Verdict::Aborted,
                iterations,
                phase: Phase::MultiplierSearch,
            };
        }
        t += (&x << 1) + 1u32;
        x += 1u32;
    }
}

// ---------------------------------------------------------------------------
// Leaf square test (shared by SM and RM)
// ---------------------------------------------------------------------------

/// One multiplier candidate test: with s = ceil(sqrt(fourm*n*K)) and
/// d = s^2 - fourm*n*K, a square d = D^2 yields A = (s - D)/2 (or s - D when
/// the parities differ) and the candidate factor gcd(n, A).
///
/// Returns the witness and factor only when the factor is nontrivial.
/// Exactly one square test is performed; the caller owns the counter.
pub fn leaf_square_test(
    n: &Natural,
    fourm: &Natural,
    k: &Natural,
) -> Option<(LeafWitness, Natural)> {
    let radicand = fourm * n * k;
    let s = isqrt_ceil(&radicand);
    let d = &s * &s - radicand;
    let root_d = is_perfect_square(&d)?;
    let sd = &s - &root_d;
    let a = if sd.is_even() { &sd >> 1 } else { sd };
    let f = n.gcd(&a);
    if f > Natural::one() && f < *n {
        Some((
            LeafWitness {
                k: k.clone(),
                s,
                d,
                root_d,
                a,
            },
            f,
        ))
    } else {
        None
    }
}

#[inline]
fn leaf_test_u128(n: u128, radicand: u128) -> Option<u128> {
    let s = isqrt_ceil_u128(radicand);
    let d = s * s - radicand;
    let root_d = sqrt_if_square_u128(d)?;
    let sd = s - root_d;
    let a = if sd & 1 == 0 { sd >> 1 } else { sd };
    let f = n.gcd(&a);
    if f > 1 && f < n {
        Some(f)
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// SM — constant multiplier, unbounded k search
// ---------------------------------------------------------------------------

/// Constant-multiplier search: after the trial phase, tests k = 1, 2, 3, ...
/// with the full multiplier `big_m` until a factor appears or the cap is hit.
pub fn sm_factor(n: &Natural, big_m: &Natural, safety_cap: u64) -> Result<FactorOutcome> {
    require_at_least(n, 2, "sm_factor")?;
    if big_m.is_zero() {
        return Err(Error::InvalidInput("multiplier must be >= 1".into()));
    }
    if *n < Natural::from(4u32) {
        return Ok(FactorOutcome::prime_immediate());
    }
    if let Some(f) = trial_division(n, &phase1_bound(n))? {
        return Ok(FactorOutcome::trial(f));
    }
    let fits = n.bits() + big_m.bits() + 64 - (safety_cap.leading_zeros() as u64) <= 126;
    if fits {
        let n128 = n.to_u128().unwrap();
        let mn = big_m.to_u128().unwrap() * n128;
        let mut iterations = 0u64;
        for k in 1..=safety_cap {
            iterations += 1;
            if let Some(f) = leaf_test_u128(n128, mn * k as u128) {
                return Ok(FactorOutcome {
                    verdict: Verdict::Factored(Natural::from(f)),
                    iterations,
                    phase: Phase::MultiplierSearch,
                });
            }
        }
        return Ok(FactorOutcome {
            verdict: Verdict::Aborted,
            iterations,
            phase: Phase::MultiplierSearch,
        });
    }
    let mn = big_m * n;
    let mut radicand = Natural::zero();
    let mut iterations = 0u64;
    for _ in 0..safety_cap {
        iterations += 1;
        radicand += &mn;
        if let Some(f) = leaf_square_test_radicand(n, &radicand) {
            return Ok(FactorOutcome {
                verdict: Verdict::Factored(f),
                iterations,
                phase: Phase::MultiplierSearch,
            });
        }
    }
    Ok(FactorOutcome {
        verdict: Verdict::Aborted,
        iterations,
        phase: Phase::MultiplierSearch,
    })
}

fn leaf_square_test_radicand(n: &Natural, radicand: &Natural) -> Option<Natural> {
    let s = isqrt_ceil(radicand);
    let d = &s * &s - radicand;
    let root_d = is_perfect_square(&d)?;
    let sd = &s - &root_d;
    let a = if sd.is_even() { &sd >> 1 } else { sd };
    let f = n.gcd(&a);
    if f > Natural::one() && f < *n {
        Some(f)
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Lehman
// ---------------------------------------------------------------------------

/// Lehman's method: trial division to the cube root, then for each k the
/// window x in [ceil(sqrt(4kn)), sqrt(4kn) + n^(1/6)/(4 sqrt(k))] is scanned
/// for x^2 - 4kn being a perfect square.
///
/// The window endpoint is evaluated in exact integer arithmetic via the
/// squared inequality 16*k*x^2 <= 64*k^2*n + 16*k*n^(2/3) + n^(1/3), widened
/// by one so floor roots can only add candidates, never lose them.
pub fn lehman_factor(n: &Natural, safety_cap: u64) -> Result<FactorOutcome> {
    require_at_least(n, 2, "lehman_factor")?;
    if *n < Natural::from(4u32) {
        return Ok(FactorOutcome::prime_immediate());
    }
    // Trial to the rounded-up cube root so divisors sitting just above the
    // floor root (e.g. 3 for n = 21) still land in phase 1.
    let floor_root = integer_root(n, 3);
    let bound = if &floor_root * &floor_root * &floor_root == *n {
        floor_root
    } else {
        floor_root + 1u32
    };
    let bound = if bound < Natural::from(2u32) {
        Natural::from(2u32)
    } else {
        bound
    };
    if let Some(f) = trial_division(n, &bound)? {
        if f < *n {
            return Ok(FactorOutcome::trial(f));
        }
        return Ok(FactorOutcome::prime_immediate());
    }
    if n.bits() <= 62 {
        return Ok(lehman_small(n.to_u128().unwrap(), safety_cap));
    }
    Ok(lehman_big(n, safety_cap))
}

fn lehman_small(n: u128, cap: u64) -> FactorOutcome {
    let c1 = cube_root_u128(n);
    let c2 = cube_root_u128(n * n);
    let mut iterations = 0u64;
    for k in 1..=(c1 + 1) {
        let fourkn = 4 * k * n;
        let x_min = isqrt_ceil_u128(fourkn);
        let budget = 64 * k * k * n + 16 * k * c2 + c1;
        let x_max = (isqrt_floor_u128(budget / (16 * k)) + 1).max(x_min);
        let mut x = x_min;
        while x <= x_max {
            iterations += 1;
            let d = x * x - fourkn;
            if let Some(y) = sqrt_if_square_u128(d) {
                let f = n.gcd(&(x + y));
                if f > 1 && f < n {
                    return FactorOutcome {
                        verdict: Verdict::Factored(Natural::from(f)),
                        iterations,
                        phase: Phase::MultiplierSearch,
                    };
                }
            }
            if iterations >= cap {
                return FactorOutcome {
                    verdict: Verdict::Aborted,
                    iterations,
                    phase: Phase::MultiplierSearch,
                };
            }
            x += 1;
        }
    }
    FactorOutcome {
        verdict: Verdict::ProbablePrime,
        iterations,
        phase: Phase::MultiplierSearch,
    }
}

fn cube_root_u128(x: u128) -> u128 {
    let mut r = (x as f64).cbrt() as u128;
    while r > 0 && r.checked_mul(r).and_then(|s| s.checked_mul(r)).map_or(true, |c| c > x) {
        r -= 1;
    }
    while (r + 1)
        .checked_mul(r + 1)
        .and_then(|s| s.checked_mul(r + 1))
        .map_or(false, |c| c <= x)
    {
        r += 1;
    }
    r
}

fn lehman_big(n: &Natural, cap: u64) -> FactorOutcome {
    let c1 = integer_root(n, 3);
    let c2 = integer_root(&(n * n), 3);
    let mut iterations = 0u64;
    let k_limit = &c1 + 1u32;
    let mut k = Natural::one();
    while k <= k_limit {
        let fourkn = 4u32 * &k * n;
        let x_min = isqrt_ceil(&fourkn);
        let budget = 64u32 * &k * &k * n + 16u32 * &k * &c2 + &c1;
        let x_cap = isqrt_floor(&(budget / (16u32 * &k))) + 1u32;
        let x_max = if x_cap < x_min { x_min.clone() } else { x_cap };
        let mut x = x_min;
        while x <= x_max {
            iterations += 1;
            let d = &x * &x - &fourkn;
            if let Some(y) = is_perfect_square(&d) {
                let f = n.gcd(&(&x + &y));
                if f > Natural::one() && f < *n {
                    return FactorOutcome {
                        verdict: Verdict::Factored(f),
                        iterations,
                        phase: Phase::MultiplierSearch,
                    };
                }
            }
            if iterations >= cap {
                return FactorOutcome {
                    verdict: Verdict::Aborted,
                    iterations,
                    phase: Phase::MultiplierSearch,
                };
            }
            x += 1u32;
        }
        k += 1u32;
    }
    FactorOutcome {
        verdict: Verdict::ProbablePrime,
        iterations,
        phase: Phase::MultiplierSearch,
    }
}

// ---------------------------------------------------------------------------
// RM — recursive multiplier search
// ---------------------------------------------------------------------------

/// Per-level factor bound: floor((m*n)^(1/3^i)).
pub fn level_limit(mn: &Natural, i: u32) -> Result<Natural> {
    if i == 0 {
        return Err(Error::InvalidInput("level index must be >= 1".into()));
    }
    require_at_least(mn, 2, "level_limit")?;
    if i > 20 {
        // 3^i no longer fits a u32 exponent; the root of any representable
        // value is 1 by then.
        return Ok(Natural::one());
    }
    Ok(integer_root(mn, 3u32.pow(i)))
}

/// Per-invocation sieve of already-tested composite multipliers K.
#[derive(Debug, Default)]
pub struct DuplicateFilter {
    seen: HashSet<Natural>,
}

impl DuplicateFilter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns true (skip) iff `k` was already presented; records it otherwise.
    pub fn check(&mut self, k: &Natural) -> bool {
        !self.seen.insert(k.clone())
    }

    pub fn len(&self) -> usize {
        self.seen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seen.is_empty()
    }
}

enum SearchHit {
    Found(Natural),
    CapReached,
}

/// Recursive-multiplication factoring: trial phase to the cube root, then a
/// depth-g enumeration of multiplier chains f_g <= ... <= f_1 (factor f_i
/// bounded by level_limit(m*n, i)) with the leaf square test applied to each
/// distinct product K.
pub fn rm_factor(n: &Natural, cfg: &MethodConfig) -> Result<FactorOutcome> {
    cfg.validate()?;
    require_at_least(n, 2, "rm_factor")?;
    if *n < Natural::from(4u32) {
        return Ok(FactorOutcome::prime_immediate());
    }
    if let Some(f) = trial_division(n, &phase1_bound(n))? {
        return Ok(FactorOutcome::trial(f));
    }
    let mn = &cfg.multiplier_m * n;
    let depth = match cfg.depth_override {
        Some(g) if g >= 1 => g,
        Some(_) => return Err(Error::InvalidInput("depth override must be >= 1".into())),
        None => recursion_depth(&mn)?,
    };
    let limits: Vec<Natural> = (1..=depth)
        .map(|i| level_limit(&mn, i))
        .collect::<Result<_>>()?;
    let fourm = 4u32 * &cfg.multiplier_m;

    // K never exceeds the product of the level limits; if the full radicand
    // fits u128 the whole search runs on machine words.
    let k_bound: Natural = limits.iter().product();
    let radicand_bits = fourm.bits() + n.bits() + k_bound.bits();
    let (hit, iterations) = if radicand_bits <= 126 {
        let mut search = RmSearchSmall {
            n: n.to_u128().unwrap(),
            mn4: fourm.to_u128().unwrap() * n.to_u128().unwrap(),
            cap: cfg.safety_cap,
            limits: limits.iter().map(|l| l.to_u64().unwrap()).collect(),
            sieve: cfg.sieve_enabled.then(HashSet::new),
            iterations: 0,
        };
        let hit = search.recurse(depth, 1, 1);
        (hit, search.iterations)
    } else {
        let mut search = RmSearchBig {
            n,
            fourm: &fourm,
            cap: cfg.safety_cap,
            limits: &limits,
            sieve: cfg.sieve_enabled.then(DuplicateFilter::new),
            iterations: 0,
        };
        let hit = search.recurse(depth, Natural::one(), Natural::one());
        (hit, search.iterations)
    };
    Ok(match hit {
        Some(SearchHit::Found(f)) => FactorOutcome {
            verdict: Verdict::Factored(f),
            iterations,
            phase: Phase::MultiplierSearch,
        },
        Some(SearchHit::CapReached) => FactorOutcome {
            verdict: Verdict::Aborted,
            iterations,
            phase: Phase::MultiplierSearch,
        },
        None => FactorOutcome {
            verdict: Verdict::ProbablePrime,
            iterations,
            phase: Phase::MultiplierSearch,
        },
    })
}

struct RmSearchSmall {
    n: u128,
    mn4: u128,
    cap: u64,
    limits: Vec<u64>,
    sieve: Option<HashSet<u128>>,
    iterations: u64,
}

impl RmSearchSmall {
    fn recurse(&mut self, level: u32, k_min: u64, k: u128) -> Option<SearchHit> {
        let lim = self.limits[(level - 1) as usize];
        for f in k_min..=lim {
            let k_next = k * f as u128;
            if level > 1 {
                if let Some(hit) = self.recurse(level - 1, f, k_next) {
                    return Some(hit);
                }
            } else {
                if let Some(seen) = self.sieve.as_mut() {
                    if !seen.insert(k_next) {
                        continue;
                    }
                }
                self.iterations += 1;
                if let Some(found) = leaf_test_u128(self.n, self.mn4 * k_next) {
                    return Some(SearchHit::Found(Natural::from(found)));
                }
                if self.iterations >= self.cap {
                    return Some(SearchHit::CapReached);
                }
            }
        }
        None
    }
}

struct RmSearchBig<'a> {
    n: &'a Natural,
    fourm: &'a Natural,
    cap: u64,
    limits: &'a [Natural],
    sieve: Option<DuplicateFilter>,
    iterations: u64,
}

impl RmSearchBig<'_> {
    fn recurse(&mut self, level: u32, k_min: Natural, k: Natural) -> Option<SearchHit> {
        let lim = self.limits[(level - 1) as usize].clone();
        let mut f = k_min;
        while f <= lim {
            let k_next = &k * &f;
            if level > 1 {
                if let Some(hit) = self.recurse(level - 1, f.clone(), k_next) {
                    return Some(hit);
                }
            } else {
                let skip = self
                    .sieve
                    .as_mut()
                    .map_or(false, |filter| filter.check(&k_next));
                if !skip {
                    self.iterations += 1;
                    if let Some((_, found)) = leaf_square_test(self.n, self.fourm, &k_next) {
                        return Some(SearchHit::Found(found));
                    }
                    if self.iterations >= self.cap {
                        return Some(SearchHit::CapReached);
                    }
                }
            }
            f += 1u32;
        }
        None
    }
}

/// The ordered sequence of K values RM would submit to the leaf square test
/// (after sieving), truncated at `limit`, with no early exit on success.
pub fn rm_candidate_sequence(
    n: &Natural,
    cfg: &MethodConfig,
    limit: usize,
) -> Result<Vec<Natural>> {
    cfg.validate()?;
    require_at_least(n, 2, "rm_candidate_sequence")?;
    let mn = &cfg.multiplier_m * n;
    let depth = match cfg.depth_override {
        Some(g) if g >= 1 => g,
        Some(_) => return Err(Error::InvalidInput("depth override must be >= 1".into())),
        None => recursion_depth(&mn)?,
    };
    let limits: Vec<Natural> = (1..=depth)
        .map(|i| level_limit(&mn, i))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    let mut sieve = cfg.sieve_enabled.then(DuplicateFilter::new);
    collect_candidates(
        depth,
        Natural::one(),
        Natural::one(),
        &limits,
        &mut sieve,
        limit,
        &mut out,
    );
    Ok(out)
}

fn collect_candidates(
    level: u32,
    k_min: Natural,
    k: Natural,
    limits: &[Natural],
    sieve: &mut Option<DuplicateFilter>,
    limit: usize,
    out: &mut Vec<Natural>,
) {
    if out.len() >= limit {
        return;
    }
    let lim = limits[(level - 1) as usize].clone();
    let mut f = k_min;
    while f <= lim {
        let k_next = &k * &f;
        if level > 1 {
            collect_candidates(level - 1, f.clone(), k_next, limits, sieve, limit, out);
            if out.len() >= limit {
                return;
            }
        } else {
            let skip = sieve.as_mut().map_or(false, |filter| filter.check(&k_next));
            if !skip {
                out.push(k_next);
                if out.len() >= limit {
                    return;
                }
            }
        }
        f += 1u32;
    }
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

/// Runs the configured method on `n`.
pub fn factor_with(n: &Natural, cfg: &MethodConfig) -> Result<FactorOutcome> {
    cfg.validate()?;
    match cfg.method {
        Method::Trial => {
            require_at_least(n, 2, "trial factoring")?;
            if *n < Natural::from(4u32) {
                return Ok(FactorOutcome::prime_immediate());
            }
            match trial_division(n, &isqrt_floor(n))? {
                Some(f) => Ok(FactorOutcome::trial(f)),
                None => Ok(FactorOutcome::prime_immediate()),
            }
        }
        Method::Fermat => fermat_factor(n, cfg.safety_cap),
        Method::Lehman => lehman_factor(n, cfg.safety_cap),
        Method::Sm => sm_factor(n, &cfg.multiplier_m, cfg.safety_cap),
        Method::Rm => rm_factor(n, cfg),
    }
}
