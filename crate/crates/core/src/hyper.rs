//! The hyperoperation ladder `∘ₘ` for `m = 0..4`, its inverses, signed
//! iteration counts and the rank recursions.
//!
//! Rank 0 is Kis restricted to reals (successor of the larger operand, or of
//! the first on a tie). Rank 4 is tetration, nested to the right.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{EscherError, Result};
use crate::numeric::Numeric;
use crate::scalar::PrecisionConfig;

/// Cap on the height of an explicitly built tower.
const MAX_TOWER: u64 = 1 << 16;

/// Cap on `|n|` for explicit iteration.
const MAX_ITER: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct HyperRank(u8);

impl HyperRank {
    pub const KIS: HyperRank = HyperRank(0);
    pub const ADD: HyperRank = HyperRank(1);
    pub const MUL: HyperRank = HyperRank(2);
    pub const POW: HyperRank = HyperRank(3);
    pub const TET: HyperRank = HyperRank(4);

    pub fn new(m: u32) -> Result<HyperRank> {
        if m <= 4 {
            Ok(HyperRank(m as u8))
        } else {
            Err(EscherError::Unsupported(format!(
                "rank {m} is above tetration"
            )))
        }
    }

    pub fn get(self) -> u32 {
        self.0 as u32
    }

    pub fn next(self) -> Result<HyperRank> {
        HyperRank::new(self.get() + 1)
    }

    pub fn symbol(self) -> &'static str {
        ["kis", "+", "*", "^", "^^"][self.0 as usize]
    }
}

impl fmt::Display for HyperRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn bits(cfg: &PrecisionConfig) -> usize {
    cfg.numeric_bits() as usize
}

fn iteration_count(n: &Numeric, what: &str) -> Result<BigInt> {
    n.as_integer()
        .ok_or_else(|| EscherError::Unsupported(format!("{what} must be an exact integer")))
}

fn rank0(a: &Numeric, b: &Numeric, cfg: &PrecisionConfig) -> Result<Numeric> {
    let one = Numeric::from_i64(1);
    let w = if a.cmp_value(b, bits(cfg)) == Ordering::Less {
        b
    } else {
        a
    };
    w.add(&one, bits(cfg))
}

fn tetration(a: &Numeric, b: &Numeric, cfg: &PrecisionConfig) -> Result<Numeric> {
    let height = iteration_count(b, "tetration height")?;
    if height == -BigInt::one() {
        return Ok(Numeric::from_i64(0));
    }
    if height.is_negative() {
        return Err(EscherError::Domain(format!(
            "tetration height {height} below -1"
        )));
    }
    let h = height
        .to_u64()
        .filter(|h| *h <= MAX_TOWER)
        .ok_or_else(|| EscherError::ResourceLimit(format!("tower of height {height}")))?;
    let mut x = Numeric::from_i64(1);
    for _ in 0..h {
        x = a.pow(&x, bits(cfg))?;
    }
    Ok(x)
}

/// `a ∘ₘ b`.
pub fn hyper_apply(
    m: HyperRank,
    a: &Numeric,
    b: &Numeric,
    cfg: &PrecisionConfig,
) -> Result<Numeric> {
    let p = bits(cfg);
    match m.get() {
        0 => rank0(a, b, cfg),
        1 => a.add(b, p),
        2 => a.mul(b, p),
        3 => a.pow(b, p),
        _ => tetration(a, b, cfg),
    }
}

/// Right inverse: the `x` with `x ∘ₘ b = c`.
pub fn hyper_rinv(
    m: HyperRank,
    c: &Numeric,
    b: &Numeric,
    cfg: &PrecisionConfig,
) -> Result<Numeric> {
    let p = bits(cfg);
    match m.get() {
        0 => rank0_inverse(c, b, cfg),
        1 => c.sub(b, p),
        2 => c.div(b, p),
        3 => c.root(b, p),
        _ => {
            if b.as_integer().is_some_and(|k| k.is_one()) {
                Ok(c.clone())
            } else {
                Err(EscherError::Unsupported(
                    "tetration right inverse beyond height 1".into(),
                ))
            }
        }
    }
}

/// Left inverse: the `x` with `a ∘ₘ x = c`.
pub fn hyper_linv(
    m: HyperRank,
    a: &Numeric,
    c: &Numeric,
    cfg: &PrecisionConfig,
) -> Result<Numeric> {
    let p = bits(cfg);
    match m.get() {
        0 => rank0_inverse(c, a, cfg),
        1 => c.sub(a, p),
        2 => c.div(a, p),
        3 => c.log(a, p),
        _ => Err(EscherError::Unsupported("tetration left inverse".into())),
    }
}

/// Sik on reals: `c − 1` when `x < c − 1`. At `x = c − 1` any value up to
/// `c − 1` solves it and `c − 1` is returned; above that no real solves it.
fn rank0_inverse(c: &Numeric, x: &Numeric, cfg: &PrecisionConfig) -> Result<Numeric> {
    let g = c.sub(&Numeric::from_i64(1), bits(cfg))?;
    if x.cmp_value(&g, bits(cfg)) == Ordering::Greater {
        Err(EscherError::NotReal(format!(
            "{c} sik {x} is stigmareal, not real"
        )))
    } else {
        Ok(g)
    }
}

fn iterations(n: i64) -> Result<u64> {
    let k = n.unsigned_abs();
    if k > MAX_ITER {
        return Err(EscherError::ResourceLimit(format!("{n} iterations")));
    }
    Ok(k)
}

/// `(a∘)ⁿ a`: for `n ≥ 1` the right-nested `a ∘ (a ∘ (… a))` with `n`
/// operators; for `n < 0` repeated left inverses `a ⁻¹∘ (…)`.
pub fn iter_left(m: HyperRank, a: &Numeric, n: i64, cfg: &PrecisionConfig) -> Result<Numeric> {
    let mut x = a.clone();
    for _ in 0..iterations(n)? {
        x = if n > 0 {
            hyper_apply(m, a, &x, cfg)?
        } else {
            hyper_linv(m, a, &x, cfg)?
        };
    }
    Ok(x)
}

/// `a (∘a)ⁿ`: for `n ≥ 1` the left-nested `((a ∘ a) ∘ a) … ∘ a`; for
/// `n < 0` repeated right inverses `(…) ∘⁻¹ a`.
pub fn iter_right(m: HyperRank, a: &Numeric, n: i64, cfg: &PrecisionConfig) -> Result<Numeric> {
    let mut x = a.clone();
    for _ in 0..iterations(n)? {
        x = if n > 0 {
            hyper_apply(m, &x, a, cfg)?
        } else {
            hyper_rinv(m, &x, a, cfg)?
        };
    }
    Ok(x)
}

/// Outcome of comparing `n` copies of `a` joined by `∘ₘ` with the two
/// closed forms from the next rank up.
#[derive(Debug, Clone, PartialEq)]
pub struct RankRecursionReport {
    pub m: HyperRank,
    pub a: Numeric,
    pub n: i64,
    /// `a ∘ₘ a ∘ₘ … ∘ₘ a` with `n` operands.
    pub chain: Numeric,
    /// `a ∘ₘ₊₁ n`.
    pub direct: Numeric,
    /// `(a ∘ₘ₊₁ n) ∘⁻¹ₘ₊₁ 1`.
    pub corrected: Numeric,
    pub direct_holds: bool,
    pub corrected_holds: bool,
}

pub fn rank_recursion_check(
    m: HyperRank,
    a: &Numeric,
    n: i64,
    cfg: &PrecisionConfig,
) -> Result<RankRecursionReport> {
    if m.get() > 3 {
        return Err(EscherError::Unsupported(
            "rank recursion above rank 3".into(),
        ));
    }
    if n < 1 {
        return Err(EscherError::Domain(format!(
            "operand count {n} must be at least 1"
        )));
    }
    let up = m.next()?;
    let chain = iter_left(m, a, n - 1, cfg)?;
    let count = Numeric::from_i64(n);
    let direct = hyper_apply(up, a, &count, cfg)?;
    let corrected = hyper_rinv(up, &direct, &Numeric::from_i64(1), cfg)?;
    let tol = 1e-20;
    let p = bits(cfg);
    Ok(RankRecursionReport {
        m,
        a: a.clone(),
        n,
        direct_holds: chain.approx_eq(&direct, tol, p),
        corrected_holds: chain.approx_eq(&corrected, tol, p),
        chain,
        direct,
        corrected,
    })
}
