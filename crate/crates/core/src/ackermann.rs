//! The two-argument Ackermann function and the shifted variant whose rows
//! are `2 ∘ₘ n`.
//!
//! Both recursions only ever query the level below at increasing
//! arguments, so each level is kept as a single frontier `(n, value)` that
//! is advanced in place. Memory is one pair per level and the work is
//! linear in the size of the intermediate values.

use num_bigint::BigInt;

use crate::error::{EscherError, Result};

/// Largest `(m, n)` an evaluation may request.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AckermannBudget {
    pub max_m: u32,
    pub max_n: u64,
}

impl Default for AckermannBudget {
    fn default() -> Self {
        AckermannBudget {
            max_m: 3,
            max_n: 20,
        }
    }
}

impl AckermannBudget {
    fn admit(&self, m: u32, n: u64) -> Result<()> {
        if m > self.max_m || n > self.max_n {
            return Err(EscherError::ResourceLimit(format!(
                "({m}, {n}) exceeds the budget m <= {}, n <= {}",
                self.max_m, self.max_n
            )));
        }
        Ok(())
    }
}

/// Recursion shape shared by both functions:
/// `F(0, n) = n + 1`, `F(m, n₀) = F(m − 1, seed)`,
/// `F(m, n) = F(m − 1, F(m, n − 1))` for `n > n₀`.
struct Frontier {
    start: u64,
    seed: u64,
    /// `levels[k]` holds `(n, F(k + 1, n))` for the last `n` reached.
    levels: Vec<Option<(u64, u64)>>,
}

impl Frontier {
    fn new(depth: u32, start: u64, seed: u64) -> Frontier {
        Frontier {
            start,
            seed,
            levels: vec![None; depth as usize],
        }
    }

    fn overflow() -> EscherError {
        EscherError::ResourceLimit("value exceeds 64 bits".into())
    }

    /// `F(m, n)`, advancing frontiers as needed. Arguments at each level
    /// must be non-decreasing across calls; callers only go upward.
    fn eval(&mut self, m: u32, n: u64) -> Result<u64> {
        // explicit stack of pending (level, target) requests
        let mut stack: Vec<(u32, u64)> = vec![(m, n)];
        let mut answer: Option<u64> = None;
        while let Some(&(level, target)) = stack.last() {
            if level == 0 {
                answer = Some(target.checked_add(1).ok_or_else(Self::overflow)?);
                stack.pop();
                continue;
            }
            let slot = (level - 1) as usize;
            match (self.levels[slot], answer.take()) {
                (None, None) => stack.push((level - 1, self.seed)),
                (None, Some(v)) => self.levels[slot] = Some((self.start, v)),
                (Some((at, v)), _) if at == target => {
                    answer = Some(v);
                    stack.pop();
                }
                (Some((at, _)), _) if at > target => {
                    return Err(EscherError::Domain(format!(
                        "frontier at level {level} already past {target}"
                    )));
                }
                (Some((_, v)), None) => stack.push((level - 1, v)),
                (Some((at, _)), Some(next)) => self.levels[slot] = Some((at + 1, next)),
            }
        }
        answer.ok_or_else(|| EscherError::Domain("empty evaluation".into()))
    }
}

/// `A(0, n) = n + 1`, `A(m, 0) = A(m − 1, 1)`,
/// `A(m, n) = A(m − 1, A(m, n − 1))`.
pub fn ackermann(m: u32, n: u64) -> Result<BigInt> {
    ackermann_with(m, n, AckermannBudget::default())
}

pub fn ackermann_with(m: u32, n: u64, budget: AckermannBudget) -> Result<BigInt> {
    budget.admit(m, n)?;
    Frontier::new(m, 0, 1).eval(m, n).map(BigInt::from)
}

/// `A′(0, n) = n + 1`, `A′(m, 3) = A′(m − 1, 4)`,
/// `A′(m, n) = A′(m − 1, A′(m, n − 1))`, all for `n ≥ 3`.
pub fn ackermann_mod(m: u32, n: u64) -> Result<BigInt> {
    ackermann_mod_with(m, n, AckermannBudget::default())
}

pub fn ackermann_mod_with(m: u32, n: u64, budget: AckermannBudget) -> Result<BigInt> {
    if n < 3 {
        return Err(EscherError::Domain(format!(
            "A'(m, n) needs n >= 3, got {n}"
        )));
    }
    budget.admit(m, n)?;
    Frontier::new(m, 3, 4).eval(m, n).map(BigInt::from)
}
