//! Small expression trees for the two sides of a law, and their evaluation
//! over Escherian value sets or over reals.

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{add, div_by_rational, mul, naive_add, negate};
use crate::cxe::CxE;
use crate::error::{EscherError, Result};
use crate::hyper::{hyper_apply, hyper_linv, hyper_rinv, HyperRank};
use crate::numeric::Numeric;
use crate::rank0::{kis_with, sik, TieBreak, ValueSet};
use crate::scalar::PrecisionConfig;

pub type Bindings = BTreeMap<String, CxE>;

/// How addition reduces the imaginary coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Addition {
    /// Modulo 2, as the embedding requires.
    #[default]
    Reduced,
    /// Plain component-wise sum. Wrong on purpose; a negative control.
    Naive,
}

/// The choices a law evaluation is parameterized over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Ops {
    pub tie: TieBreak,
    pub addition: Addition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    /// `x ∘ₘ y`.
    Apply(u32),
    /// `c ∘⁻¹ₘ b`: the `x` with `x ∘ₘ b = c`. Operands are `(c, b)`.
    Rinv(u32),
    /// `a ⁻¹∘ₘ c`: the `x` with `a ∘ₘ x = c`. Operands are `(a, c)`.
    Linv(u32),
}

impl Op {
    pub fn rank(self) -> u32 {
        match self {
            Op::Apply(m) | Op::Rinv(m) | Op::Linv(m) => m,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    Var(&'static str),
    Int(i64),
    Bin(Op, Box<Term>, Box<Term>),
    /// `a₁ ∘ₘ a₂ ∘ₘ … ∘ₘ a_k` over the rank-`m` progression with first
    /// term `first`, step `step` and `count` terms, folded from the left.
    Progression {
        m: u32,
        first: &'static str,
        step: &'static str,
        count: &'static str,
    },
}

pub fn var(name: &'static str) -> Term {
    Term::Var(name)
}

pub fn int(n: i64) -> Term {
    Term::Int(n)
}

pub fn ap(m: u32, x: Term, y: Term) -> Term {
    Term::Bin(Op::Apply(m), Box::new(x), Box::new(y))
}

pub fn rinv(m: u32, c: Term, b: Term) -> Term {
    Term::Bin(Op::Rinv(m), Box::new(c), Box::new(b))
}

pub fn linv(m: u32, a: Term, c: Term) -> Term {
    Term::Bin(Op::Linv(m), Box::new(a), Box::new(c))
}

impl Term {
    /// Highest rank of any operator in the term.
    pub fn max_rank(&self) -> u32 {
        match self {
            Term::Var(_) | Term::Int(_) => 0,
            Term::Bin(op, x, y) => op.rank().max(x.max_rank()).max(y.max_rank()),
            Term::Progression { m, .. } => *m,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Term::Var(_) | Term::Int(_) => 9,
            Term::Progression { .. } => 0,
            Term::Bin(op, _, _) => match op {
                Op::Apply(0) | Op::Rinv(0) | Op::Linv(0) => 1,
                Op::Apply(1) | Op::Rinv(1) | Op::Linv(1) => 2,
                Op::Apply(2) | Op::Rinv(2) | Op::Linv(2) => 3,
                Op::Apply(_) => 4,
                _ => 9,
            },
        }
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

const APPLY_SYMBOLS: [&str; 5] = ["kis", "+", "*", "^", "^^"];

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Int(n) if *n < 0 => write!(f, "({n})"),
            Term::Int(n) => write!(f, "{n}"),
            Term::Progression {
                m,
                first,
                step,
                count,
            } => write!(
                f,
                "[{first} {op} ... ({count} terms, step {step})]",
                op = APPLY_SYMBOLS[*m as usize]
            ),
            Term::Bin(op, x, y) => {
                let p = self.precedence();
                let infix =
                    |f: &mut fmt::Formatter<'_>, l: &Term, sym: &str, r: &Term, right_assoc| {
                        // kis chains are not associative; always bracket them
                        let (lmin, rmin) = if p == 1 {
                            (p + 1, p + 1)
                        } else if right_assoc {
                            (p + 1, p)
                        } else {
                            (p, p + 1)
                        };
                        l.fmt_operand(f, lmin)?;
                        write!(f, " {sym} ")?;
                        r.fmt_operand(f, rmin)
                    };
                match *op {
                    Op::Apply(m) => infix(f, x, APPLY_SYMBOLS[m as usize], y, m >= 3),
                    Op::Rinv(0) => infix(f, x, "sik", y, false),
                    Op::Linv(0) => infix(f, y, "sik", x, false),
                    Op::Rinv(1) => infix(f, x, "-", y, false),
                    Op::Linv(1) => infix(f, y, "-", x, false),
                    Op::Rinv(2) => infix(f, x, "/", y, false),
                    Op::Linv(2) => infix(f, y, "/", x, false),
                    Op::Rinv(3) => write!(f, "root({x}, {y})"),
                    Op::Linv(3) => write!(f, "log({x}, {y})"),
                    Op::Rinv(m) => write!(f, "rinv{m}({x}, {y})"),
                    Op::Linv(m) => write!(f, "linv{m}({x}, {y})"),
                }
            }
        }
    }
}

fn lookup<'a>(b: &'a Bindings, name: &str) -> Result<&'a CxE> {
    b.get(name)
        .ok_or_else(|| EscherError::Domain(format!("missing binding for `{name}`")))
}

fn small_count(b: &Bindings, name: &str) -> Result<u32> {
    lookup(b, name)?
        .as_real_rational()
        .filter(|q| q.is_integer())
        .and_then(|q| u32::try_from(q.to_integer()).ok())
        .filter(|k| (1..=64).contains(k))
        .ok_or_else(|| EscherError::Domain(format!("`{name}` must be an integer in 1..=64")))
}

/// Evaluation over `CxE` value sets. Only ranks 0..2 exist here.
pub struct EscherEval<'a> {
    pub bindings: &'a Bindings,
    pub ops: Ops,
    pub cfg: &'a PrecisionConfig,
}

impl EscherEval<'_> {
    fn plus(&self, x: &CxE, y: &CxE) -> Result<CxE> {
        match self.ops.addition {
            Addition::Reduced => add(x, y),
            Addition::Naive => naive_add(x, y),
        }
    }

    fn minus(&self, x: &CxE, y: &CxE) -> Result<CxE> {
        self.plus(x, &negate(y)?)
    }

    fn quotient(&self, x: &CxE, y: &CxE) -> Result<CxE> {
        let q = y
            .as_real_rational()
            .ok_or_else(|| EscherError::Unsupported(format!("division by non-rational {y}")))?;
        Ok(div_by_rational(x, &q)?.into_principal())
    }

    fn apply(&self, op: Op, x: &ValueSet, y: &ValueSet) -> Result<ValueSet> {
        let cfg = self.cfg;
        match op {
            Op::Apply(0) => kis_with(x.principal(), y.principal(), self.ops.tie, cfg),
            Op::Apply(1) => x.zip_with(y, |a, b| self.plus(a, b)),
            Op::Apply(2) => x.zip_with(y, mul),
            Op::Rinv(0) => x.zip_with(y, |c, b| sik(c, b, cfg)),
            Op::Linv(0) => x.zip_with(y, |a, c| sik(c, a, cfg)),
            Op::Rinv(1) => x.zip_with(y, |c, b| self.minus(c, b)),
            Op::Linv(1) => x.zip_with(y, |a, c| self.minus(c, a)),
            Op::Rinv(2) => x.zip_with(y, |c, b| self.quotient(c, b)),
            Op::Linv(2) => x.zip_with(y, |a, c| self.quotient(c, a)),
            other => Err(EscherError::Unsupported(format!(
                "rank {} has no Escherian evaluation",
                other.rank()
            ))),
        }
    }

    pub fn eval(&self, t: &Term) -> Result<ValueSet> {
        match t {
            Term::Var(v) => Ok(ValueSet::single(lookup(self.bindings, v)?.clone())),
            Term::Int(n) => Ok(ValueSet::single(CxE::integer(*n))),
            Term::Bin(op, x, y) => self.apply(*op, &self.eval(x)?, &self.eval(y)?),
            Term::Progression {
                m,
                first,
                step,
                count,
            } => {
                let k = small_count(self.bindings, count)?;
                let step = ValueSet::single(lookup(self.bindings, step)?.clone());
                let mut term = ValueSet::single(lookup(self.bindings, first)?.clone());
                let mut acc = term.clone();
                for _ in 1..k {
                    term = self.apply(Op::Apply(*m), &term, &step)?;
                    acc = self.apply(Op::Apply(*m), &acc, &term)?;
                }
                Ok(acc)
            }
        }
    }
}

/// Evaluation over reals through the hyperoperation ladder.
pub struct RealEval<'a> {
    pub bindings: &'a Bindings,
    pub cfg: &'a PrecisionConfig,
}

impl RealEval<'_> {
    fn value(&self, name: &str) -> Result<Numeric> {
        let x = lookup(self.bindings, name)?;
        x.as_real_rational()
            .map(Numeric::Exact)
            .ok_or_else(|| EscherError::NotReal(format!("`{name}` = {x}")))
    }

    fn apply(&self, op: Op, x: &Numeric, y: &Numeric) -> Result<Numeric> {
        match op {
            Op::Apply(m) => hyper_apply(HyperRank::new(m)?, x, y, self.cfg),
            Op::Rinv(m) => hyper_rinv(HyperRank::new(m)?, x, y, self.cfg),
            Op::Linv(m) => hyper_linv(HyperRank::new(m)?, x, y, self.cfg),
        }
    }

    pub fn eval(&self, t: &Term) -> Result<Numeric> {
        match t {
            Term::Var(v) => self.value(v),
            Term::Int(n) => Ok(Numeric::from_i64(*n)),
            Term::Bin(op, x, y) => self.apply(*op, &self.eval(x)?, &self.eval(y)?),
            Term::Progression {
                m,
                first,
                step,
                count,
            } => {
                let k = small_count(self.bindings, count)?;
                let step = self.value(step)?;
                let mut term = self.value(first)?;
                let mut acc = term.clone();
                for _ in 1..k {
                    term = self.apply(Op::Apply(*m), &term, &step)?;
                    acc = self.apply(Op::Apply(*m), &acc, &term)?;
                }
                Ok(acc)
            }
        }
    }
}
