//! The rank-shifting identities, one entry per law and rank.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::term::{ap, int, linv, rinv, var, Term};
use crate::cxe::CxE;
use crate::scalar::ExactScalar;

/// Where a variable is drawn from, and what a supplied binding must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// Any rational.
    Rational,
    /// Rational, nonzero.
    NonZero,
    /// Rational, strictly positive.
    Positive,
    /// Rational, strictly positive and not 1 (a logarithm base).
    LogBase,
    /// Rational in `(0, 4]`, not 1 (a tower base small enough to build).
    TowerBase,
    /// Rational or stigma-rational.
    Escherian,
    /// Integer in the inclusive range.
    Int(i64, i64),
}

impl Domain {
    pub fn describe(self) -> String {
        match self {
            Domain::Rational => "rational".into(),
            Domain::NonZero => "nonzero rational".into(),
            Domain::Positive => "positive rational".into(),
            Domain::LogBase => "positive rational, not 1".into(),
            Domain::TowerBase => "rational in (0, 4], not 1".into(),
            Domain::Escherian => "rational or stigma-rational".into(),
            Domain::Int(lo, hi) => format!("integer in {lo}..={hi}"),
        }
    }

    pub fn contains(self, x: &CxE) -> bool {
        if self == Domain::Escherian {
            return x.is_escherian() && x.re().as_rational().is_some();
        }
        let Some(q) = x.as_real_rational() else {
            return false;
        };
        let one = BigRational::one();
        match self {
            Domain::Rational | Domain::Escherian => true,
            Domain::NonZero => !q.is_zero(),
            Domain::Positive => q.is_positive(),
            Domain::LogBase => q.is_positive() && q != one,
            Domain::TowerBase => {
                q.is_positive() && q != one && q <= BigRational::from_integer(4.into())
            }
            Domain::Int(lo, hi) => {
                q.is_integer()
                    && q >= BigRational::from_integer(lo.into())
                    && q <= BigRational::from_integer(hi.into())
            }
        }
    }

    pub fn sample<R: Rng>(self, rng: &mut R) -> CxE {
        let small = |rng: &mut R, lo: i64, hi: i64| {
            let den = *[1i64, 1, 1, 2, 3, 4].get(rng.gen_range(0..6)).unwrap_or(&1);
            BigRational::new(rng.gen_range(lo..=hi).into(), den.into())
        };
        let q = match self {
            Domain::Rational => small(rng, -12, 12),
            Domain::NonZero => loop {
                let q = small(rng, -12, 12);
                if !q.is_zero() {
                    break q;
                }
            },
            Domain::Positive => small(rng, 1, 12),
            Domain::LogBase => loop {
                let q = small(rng, 1, 12);
                if !q.is_one() {
                    break q;
                }
            },
            Domain::TowerBase => loop {
                let q = small(rng, 1, 16);
                if !q.is_one() && q <= BigRational::from_integer(4.into()) {
                    break q;
                }
            },
            Domain::Escherian => {
                let q = small(rng, -12, 12);
                return if rng.gen_bool(0.5) {
                    CxE::stigmareal(ExactScalar::from_rational(q))
                } else {
                    CxE::rational(q)
                };
            }
            Domain::Int(lo, hi) => BigRational::from_integer(rng.gen_range(lo..=hi).into()),
        };
        CxE::rational(q)
    }
}

/// Whether a law is evaluated on Escherian value sets or on reals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Carrier {
    Escherian,
    Real,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum EqualityMode {
    /// Exact equality. On value sets: same principal and same members.
    Exact,
    /// Exact equality of principal values only.
    Principal,
    /// Within relative tolerance at the configured working precision.
    Numeric { rel_tol: f64 },
}

impl EqualityMode {
    pub fn name(self) -> &'static str {
        match self {
            EqualityMode::Exact => "exact",
            EqualityMode::Principal => "principal",
            EqualityMode::Numeric { .. } => "numeric",
        }
    }
}

pub const NUMERIC_TOLERANCE: f64 = 1e-20;

/// One checkable identity.
#[derive(Debug, Clone)]
pub struct Law {
    pub id: String,
    /// Rank parameter for the generic families.
    pub rank: Option<u32>,
    pub lhs: Term,
    pub rhs: Term,
    pub vars: Vec<(&'static str, Domain)>,
    pub carrier: Carrier,
    pub mode: EqualityMode,
    /// Fixed bindings; such a law has nothing to randomize.
    pub fixed: Option<Vec<(&'static str, CxE)>>,
}

impl Law {
    pub fn statement(&self) -> String {
        format!("{} = {}", self.lhs, self.rhs)
    }
}

/// Valid ranks of each generic family.
pub const GENERIC_WINDOWS: [(&str, u32, u32); 4] = [
    ("14.0", 1, 2),
    ("15.0", 0, 2),
    ("16.0", 1, 3),
    ("21.0", 1, 2),
];

fn law(id: &str, rank: Option<u32>, lhs: Term, rhs: Term, vars: &[(&'static str, Domain)]) -> Law {
    let numeric = lhs.max_rank().max(rhs.max_rank()) >= 3;
    Law {
        id: id.to_string(),
        rank,
        lhs,
        rhs,
        vars: vars.to_vec(),
        carrier: if numeric {
            Carrier::Real
        } else {
            Carrier::Escherian
        },
        mode: if numeric {
            EqualityMode::Numeric {
                rel_tol: NUMERIC_TOLERANCE,
            }
        } else {
            EqualityMode::Exact
        },
        fixed: None,
    }
}

fn exact_real(mut l: Law) -> Law {
    l.carrier = Carrier::Real;
    l.mode = EqualityMode::Exact;
    l
}

fn a() -> Term {
    var("a")
}
fn b() -> Term {
    var("b")
}
fn c() -> Term {
    var("c")
}
fn d() -> Term {
    var("d")
}

use Domain::*;

/// `a₁ ∘ₘ … ∘ₘ a_k = ((a₁ ∘ₘ a_k) ∘ₘ₊₁ k) ∘⁻¹ₘ₊₁ 2` with
/// `a_k = a₁ ∘ₘ (r ∘ₘ₊₁ (k − 1))`.
fn progression(id: &str, rank: Option<u32>, m: u32) -> Law {
    let lhs = Term::Progression {
        m,
        first: "a1",
        step: "r",
        count: "k",
    };
    let last = ap(m, var("a1"), ap(m + 1, var("r"), rinv(1, var("k"), int(1))));
    let rhs = rinv(m + 1, ap(m + 1, ap(m, var("a1"), last), var("k")), int(2));
    let vars: &[(&'static str, Domain)] = if m == 1 {
        &[("a1", Rational), ("r", Rational), ("k", Int(1, 8))]
    } else {
        &[("a1", Positive), ("r", Positive), ("k", Int(1, 6))]
    };
    law(id, rank, lhs, rhs, vars)
}

fn distributive(id: &str, rank: Option<u32>, m: u32) -> Law {
    let lhs = ap(m, ap(m + 1, a(), b()), ap(m + 1, c(), b()));
    let rhs = ap(m + 1, ap(m, a(), c()), b());
    let vars: &[(&'static str, Domain)] = match m {
        0 => &[("a", Escherian), ("b", Escherian), ("c", Escherian)],
        1 => &[("a", Rational), ("b", Rational), ("c", Rational)],
        _ => &[("a", Positive), ("b", Rational), ("c", Positive)],
    };
    law(id, rank, lhs, rhs, vars)
}

fn commutation(id: &str, rank: Option<u32>, m: u32) -> Law {
    let lhs = rinv(m, ap(m, b(), c()), a());
    let rhs = ap(m, rinv(m, b(), a()), c());
    let vars: &[(&'static str, Domain)] = match m {
        1 => &[("a", Escherian), ("b", Escherian), ("c", Escherian)],
        2 => &[("a", NonZero), ("b", Rational), ("c", Rational)],
        _ => &[("a", NonZero), ("b", Positive), ("c", Rational)],
    };
    law(id, rank, lhs, rhs, vars)
}

/// `a ∘ₘ₊₂ b + a = a ∘ₘ₊₁ (a ∘ₘ₊₂ (b − 1) + a ⁻¹∘ₘ₊₁ a)` with the middle
/// operator written as a literal `+`.
fn mixed_rank(id: &str, rank: Option<u32>, m: u32, middle: u32) -> Law {
    let lhs = ap(m, ap(m + 2, a(), b()), a());
    let inner = ap(
        middle,
        ap(m + 2, a(), rinv(1, b(), int(1))),
        linv(m + 1, a(), a()),
    );
    let rhs = ap(m + 1, a(), inner);
    let vars: &[(&'static str, Domain)] = match m {
        0 => &[("a", Escherian), ("b", Int(-6, 6))],
        1 => &[("a", NonZero), ("b", Int(-4, 5))],
        _ => &[("a", TowerBase), ("b", Int(1, 3))],
    };
    law(id, rank, lhs, rhs, vars)
}

/// Every registered law, in suite order.
pub fn all_laws() -> Vec<Law> {
    let mut v = Vec::new();

    for m in 1..=2 {
        v.push(progression(&format!("14.0@{m}"), Some(m), m));
    }
    v.push(progression("14.1", None, 1));
    v.push(progression("14.2", None, 2));

    for m in 0..=2 {
        v.push(distributive(&format!("15.0@{m}"), Some(m), m));
    }
    v.push(distributive("15.1", None, 2));
    v.push(distributive("15.2", None, 1));
    v.push(distributive("15.3", None, 0));

    for m in 1..=3 {
        v.push(commutation(&format!("16.0@{m}"), Some(m), m));
    }
    v.push(commutation("16.1", None, 3));
    v.push(commutation("16.2", None, 2));
    v.push(commutation("16.3", None, 1));

    // binomial product
    v.push(law(
        "17.1",
        None,
        ap(3, ap(2, a(), b()), ap(1, c(), d())),
        ap(
            2,
            ap(2, ap(3, a(), c()), ap(3, a(), d())),
            ap(2, ap(3, b(), c()), ap(3, b(), d())),
        ),
        &[
            ("a", Positive),
            ("b", Positive),
            ("c", Rational),
            ("d", Rational),
        ],
    ));
    v.push(law(
        "17.2",
        None,
        ap(2, ap(1, a(), b()), ap(1, c(), d())),
        ap(
            1,
            ap(1, ap(2, a(), c()), ap(2, a(), d())),
            ap(1, ap(2, b(), c()), ap(2, b(), d())),
        ),
        &[
            ("a", Rational),
            ("b", Rational),
            ("c", Rational),
            ("d", Rational),
        ],
    ));
    v.push(law(
        "17.3",
        None,
        ap(1, ap(0, a(), b()), ap(0, c(), d())),
        ap(
            0,
            ap(0, ap(1, a(), c()), ap(1, a(), d())),
            ap(0, ap(1, b(), c()), ap(1, b(), d())),
        ),
        &[
            ("a", Escherian),
            ("b", Escherian),
            ("c", Escherian),
            ("d", Escherian),
        ],
    ));

    // left-inverse distribution
    v.push(law(
        "18.1",
        None,
        linv(3, a(), ap(2, b(), c())),
        ap(1, linv(3, a(), b()), linv(3, a(), c())),
        &[("a", LogBase), ("b", Positive), ("c", Positive)],
    ));
    v.push(law(
        "18.2",
        None,
        rinv(2, ap(1, b(), c()), a()),
        ap(1, rinv(2, b(), a()), rinv(2, c(), a())),
        &[("a", NonZero), ("b", Rational), ("c", Rational)],
    ));
    v.push(law(
        "18.3",
        None,
        rinv(1, ap(0, b(), c()), a()),
        ap(0, rinv(1, b(), a()), rinv(1, c(), a())),
        &[("a", Escherian), ("b", Escherian), ("c", Escherian)],
    ));

    // logarithm and commutation
    v.push(law(
        "19.1",
        None,
        linv(3, a(), ap(3, b(), c())),
        ap(2, c(), linv(3, a(), b())),
        &[("a", LogBase), ("b", Positive), ("c", Rational)],
    ));
    v.push(law(
        "19.2",
        None,
        rinv(2, ap(2, b(), c()), a()),
        ap(2, c(), rinv(2, b(), a())),
        &[("a", NonZero), ("b", Rational), ("c", Rational)],
    ));
    v.push(law(
        "19.3",
        None,
        rinv(1, ap(1, b(), c()), a()),
        ap(1, c(), rinv(1, b(), a())),
        &[("a", Escherian), ("b", Escherian), ("c", Escherian)],
    ));

    // fraction sum
    v.push(law(
        "20.1",
        None,
        ap(2, rinv(3, a(), b()), rinv(3, c(), d())),
        rinv(3, ap(2, ap(3, a(), d()), ap(3, c(), b())), ap(2, b(), d())),
        &[
            ("a", Positive),
            ("b", NonZero),
            ("c", Positive),
            ("d", NonZero),
        ],
    ));
    v.push(law(
        "20.2",
        None,
        ap(1, rinv(2, a(), b()), rinv(2, c(), d())),
        rinv(2, ap(1, ap(2, a(), d()), ap(2, b(), c())), ap(2, b(), d())),
        &[
            ("a", Rational),
            ("b", NonZero),
            ("c", Rational),
            ("d", NonZero),
        ],
    ));
    let fraction_vars: &[(&'static str, Domain)] = &[
        ("a", Escherian),
        ("b", Escherian),
        ("c", Escherian),
        ("d", Escherian),
    ];
    v.push(law(
        "20.3",
        None,
        ap(0, rinv(1, a(), b()), rinv(1, c(), d())),
        rinv(1, ap(0, ap(1, a(), d()), ap(1, b(), c())), ap(1, b(), d())),
        fraction_vars,
    ));
    v.push(law(
        "20.3S",
        None,
        rinv(0, rinv(1, a(), b()), rinv(1, c(), d())),
        rinv(
            1,
            rinv(0, ap(1, a(), d()), ap(1, b(), c())),
            ap(1, b(), d()),
        ),
        fraction_vars,
    ));

    // mixed-rank recursion
    for m in 1..=2 {
        let l = mixed_rank(&format!("21.0@{m}"), Some(m), m, 1);
        v.push(if m == 1 { exact_real(l) } else { l });
    }
    v.push(mixed_rank("21.1", None, 2, 1));
    v.push(exact_real(mixed_rank("21.2", None, 1, 1)));
    v.push(mixed_rank("21.3", None, 0, 0));

    let mut special = mixed_rank("21.3S", None, 0, 0);
    special.mode = EqualityMode::Principal;
    special.fixed = Some(vec![
        ("a", CxE::stigmareal(ExactScalar::zero())),
        ("b", CxE::zero()),
    ]);
    v.push(special);

    v
}
