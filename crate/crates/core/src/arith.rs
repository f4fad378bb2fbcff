//! Exact arbitrary-precision integer primitives shared by every factoring
//! algorithm: integer square roots, perfect-square detection, n-th roots,
//! gcd, probable-primality and the recursion-depth formula.
//!
//! Everything here is pure integer arithmetic; no floating point is used
//! where exactness matters. Fixed-width (`u64`/`u128`) mirrors of the hot
//! primitives are provided for the fast paths in the search loops.

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Arbitrary-precision unsigned integer used for every number-theoretic value.
pub type Natural = BigUint;

/// Floor integer square root: the r with r^2 <= x < (r+1)^2.
pub fn isqrt_floor(x: &Natural) -> Natural {
    x.sqrt()
}

/// Ceiling integer square root: the smallest r with r^2 >= x.
pub fn isqrt_ceil(x: &Natural) -> Natural {
    if x.is_zero() {
        return Natural::zero();
    }
    let r = x.sqrt();
    if &r * &r == *x {
        r
    } else {
        r + 1u32
    }
}

// Quadratic-residue tables for the perfect-square fast path. A square must
// be a residue modulo each of 64, 63, 65 and 11; only ~1% of uniform
// non-squares survive all four filters.
const fn square_mask(modulus: u32) -> u128 {
    let mut mask = 0u128;
    let mut i = 0u64;
    while i < modulus as u64 {
        mask |= 1u128 << ((i * i) % modulus as u64);
        i += 1;
    }
    mask
}

const MASK64: u128 = square_mask(64);
const MASK63: u128 = square_mask(63);
const MASK65: u128 = square_mask(65);
const MASK11: u128 = square_mask(11);
const FILTER_MODULUS: u32 = 64 * 63 * 65 * 11;

#[inline]
fn passes_square_filter(residue: u32) -> bool {
    MASK64 & (1u128 << (residue % 64)) != 0
        && MASK63 & (1u128 << (residue % 63)) != 0
        && MASK65 & (1u128 << (residue % 65)) != 0
        && MASK11 & (1u128 << (residue % 11)) != 0
}

/// Tests whether `x` is a perfect square, returning its root when it is.
/// `0` counts as a square with root `0`.
///
/// The residue filter is a pure fast path: results are identical with or
/// without it, and it performs no candidate counting of its own.
pub fn is_perfect_square(x: &Natural) -> Option<Natural> {
    let residue = (x % FILTER_MODULUS).to_u32().unwrap();
    if !passes_square_filter(residue) {
        return None;
    }
    let r = x.sqrt();
    if &r * &r == *x {
        Some(r)
    } else {
        None
    }
}

/// Floor t-th root: the r with r^t <= x < (r+1)^t. Requires t >= 1.
pub fn integer_root(x: &Natural, t: u32) -> Natural {
    assert!(t >= 1, "integer_root requires t >= 1");
    x.nth_root(t)
}

/// Greatest common divisor; gcd(0, y) = y.
pub fn gcd(x: &Natural, y: &Natural) -> Natural {
    x.gcd(y)
}

/// Decimal digit count of `x` (1 for zero).
pub fn decimal_length(x: &Natural) -> usize {
    x.to_str_radix(10).len()
}

// Bases proven deterministic for all inputs below 3,317,044,064,679,887,385,961,981.
const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97,
];

fn mr_witness(n: &BigUint, base: &BigUint, d: &BigUint, s: u64) -> bool {
    // true = composite witness found
    let n_minus_1 = n - 1u32;
    let mut x = base.modpow(d, n);
    if x.is_one() || x == n_minus_1 {
        return false;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == n_minus_1 {
            return false;
        }
    }
    true
}

/// Strong probable-prime test.
///
/// Below the published deterministic threshold (~3.3e24) the fixed base set
/// is a proof; above it, 64 extra rounds with bases drawn from a stream
/// seeded by the input keep the test reproducible run to run.
pub fn is_probable_prime(x: &Natural) -> bool {
    if let Some(v) = x.to_u64() {
        return is_probable_prime_u64(v);
    }
    for &p in SMALL_PRIMES.iter() {
        if (x % p).is_zero() {
            return *x == BigUint::from(p);
        }
    }
    let d0 = x - 1u32;
    let s = d0.trailing_zeros().unwrap();
    let d = &d0 >> s;
    for &b in MR_BASES.iter() {
        if mr_witness(x, &BigUint::from(b), &d, s) {
            return false;
        }
    }
    let deterministic_limit: BigUint = "3317044064679887385961981".parse().unwrap();
    if *x < deterministic_limit {
        return true;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(x.to_u64_digits()[0] ^ x.bits());
    let hi = x - 2u32;
    for _ in 0..64 {
        let base = rng.gen_biguint_range(&BigUint::from(2u32), &hi);
        if mr_witness(x, &base, &d, s) {
            return false;
        }
    }
    true
}

/// Search-tree depth g for a given multiplied input m*n: the smallest g >= 1
/// with 3^g >= bit_length(m*n). This is the ceiling reading of
/// log3(log2(m*n)), which matches the boundary cases g = 3 for inputs below
/// 2^27 and g = 4 below 2^81.
pub fn recursion_depth(mn: &Natural) -> Result<u32> {
    let bits = depth_bits(mn)?;
    let mut g = 1u32;
    let mut pow = 3u64;
    while pow < bits {
        g += 1;
        pow *= 3;
    }
    Ok(g)
}

/// Floor reading of the depth formula, kept as an experimentation switch:
/// the largest g >= 1 with 3^g <= floor(log2(m*n)).
pub fn recursion_depth_floor(mn: &Natural) -> Result<u32> {
    let log2 = depth_bits(mn)? - 1;
    let mut g = 1u32;
    while 3u64.pow(g + 1) <= log2 {
        g += 1;
    }
    Ok(g)
}

fn depth_bits(mn: &Natural) -> Result<u64> {
    if *mn < BigUint::from(2u32) {
        return Err(Error::InvalidInput(format!(
            "recursion depth undefined for {mn} (need >= 2)"
        )));
    }
    Ok(mn.bits())
}

// ---------------------------------------------------------------------------
// Fixed-width mirrors used by the hot search loops. Semantics match the
// arbitrary-precision versions exactly (property-tested against them).
// ---------------------------------------------------------------------------

/// Floor integer square root of a `u128`.
pub fn isqrt_floor_u128(x: u128) -> u128 {
    if x < 2 {
        return x;
    }
    let mut r = (x as f64).sqrt() as u128;
    // Newton refinement from the float seed, then exact correction.
    for _ in 0..2 {
        if r == 0 {
            r = 1;
        }
        r = (r + x / r) >> 1;
    }
    while r.checked_mul(r).map_or(true, |s| s > x) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).map_or(false, |s| s <= x) {
        r += 1;
    }
    r
}

/// Ceiling integer square root of a `u128`.
pub fn isqrt_ceil_u128(x: u128) -> u128 {
    let r = isqrt_floor_u128(x);
    if r * r == x {
        r
    } else {
        r + 1
    }
}

/// Exact square detection on `u128`, returning the root.
#[inline]
pub fn sqrt_if_square_u128(x: u128) -> Option<u128> {
    if MASK64 & (1u128 << (x % 64)) == 0 {
        return None;
    }
    if MASK63 & (1u128 << (x % 63)) == 0 {
        return None;
    }
    if MASK65 & (1u128 << (x % 65)) == 0 {
        return None;
    }
    if MASK11 & (1u128 << (x % 11)) == 0 {
        return None;
    }
    let r = isqrt_floor_u128(x);
    if r * r == x {
        Some(r)
    } else {
        None
    }
}

#[inline]
fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u64(acc, base, m);
        }
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for `u64` inputs.
pub fn is_probable_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in SMALL_PRIMES.iter() {
        let p = p as u64;
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros() as u64;
    let d = (n - 1) >> s;
    'bases: for &b in MR_BASES.iter() {
        let mut x = powmod_u64(b as u64, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod_u64(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}
