//! Rigorous rational enclosures of π, e and (πe)².
//!
//! Every series is summed in binary fixed point with floor division, so each
//! partial term is `floor(2^p · term)` exactly and the accumulated rounding
//! error is bounded by the number of terms. The returned intervals always
//! contain the true constant.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Closed interval `[lo, hi]` with rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn point(q: BigRational) -> Self {
        Interval {
            lo: q.clone(),
            hi: q,
        }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn scale(&self, q: &BigRational) -> Interval {
        let a = q * &self.lo;
        let b = q * &self.hi;
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    /// Product of two intervals with non-negative endpoints.
    pub fn mul_nonneg(&self, other: &Interval) -> Interval {
        debug_assert!(!self.lo.is_negative_like() && !other.lo.is_negative_like());
        Interval {
            lo: &self.lo * &other.lo,
            hi: &self.hi * &other.hi,
        }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive_like() && !self.hi.is_negative_like()
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

trait SignLike {
    fn is_negative_like(&self) -> bool;
    fn is_positive_like(&self) -> bool;
}

impl SignLike for BigRational {
    fn is_negative_like(&self) -> bool {
        *self < BigRational::zero()
    }
    fn is_positive_like(&self) -> bool {
        *self > BigRational::zero()
    }
}

fn fixed_to_interval(lo: BigInt, hi: BigInt, bits: u32) -> Interval {
    let den = BigInt::one() << bits;
    Interval {
        lo: BigRational::new(lo, den.clone()),
        hi: BigRational::new(hi, den),
    }
}

/// `e` enclosed from the series Σ 1/k!.
fn e_fixed(bits: u32) -> (BigInt, BigInt) {
    let mut term = BigInt::one() << bits;
    let mut sum = term.clone();
    let mut count: u64 = 0;
    let mut k: u64 = 1;
    loop {
        term /= k;
        if term.is_zero() {
            break;
        }
        sum += &term;
        count += 1;
        k += 1;
    }
    // floor loss < 1 per term, tail < 2
    let hi = &sum + BigInt::from(count + 3);
    (sum, hi)
}

/// `atan(1/x)` enclosed from its alternating Taylor series.
fn atan_inv_fixed(x: u64, bits: u32) -> (BigInt, BigInt) {
    let x2 = BigInt::from(x * x);
    let mut power = (BigInt::one() << bits) / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !power.is_zero() {
        let t = &power / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += t;
        } else {
            sum -= t;
        }
        power /= &x2;
        k += 1;
    }
    let slack = BigInt::from(k + 1);
    (&sum - &slack, &sum + &slack)
}

/// `π = 16·atan(1/5) − 4·atan(1/239)`.
fn pi_fixed(bits: u32) -> (BigInt, BigInt) {
    let (lo5, hi5) = atan_inv_fixed(5, bits);
    let (lo239, hi239) = atan_inv_fixed(239, bits);
    let lo = BigInt::from(16) * lo5 - BigInt::from(4) * hi239;
    let hi = BigInt::from(16) * hi5 - BigInt::from(4) * lo239;
    (lo, hi)
}

pub fn pi(bits: u32) -> Interval {
    let (lo, hi) = pi_fixed(bits);
    fixed_to_interval(lo, hi, bits)
}

pub fn e(bits: u32) -> Interval {
    let (lo, hi) = e_fixed(bits);
    fixed_to_interval(lo, hi, bits)
}

fn compute_pe2(bits: u32) -> Interval {
    let pe = pi(bits).mul_nonneg(&e(bits));
    pe.mul_nonneg(&pe)
}

/// Enclosure of `(πe)²` whose width is roughly `2^-bits` relative.
///
/// Results are cached per precision; the cache only ever holds values that
/// are pure functions of `bits`.
pub fn pe2(bits: u32) -> Arc<Interval> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Interval>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("bounds cache poisoned").get(&bits) {
        return Arc::clone(hit);
    }
    let fresh = Arc::new(compute_pe2(bits));
    cache
        .lock()
        .expect("bounds cache poisoned")
        .entry(bits)
        .or_insert(fresh)
        .clone()
}
