//! Addition, negation, multiplication and branch-aware division on `CxE`.
//!
//! Everything follows the embedding `x = re + iπe·t` with the imaginary
//! axis taken modulo `2πe`: stigmareal addition falls out of the `t`
//! arithmetic, and products pick up `−t₁t₂·(πe)²` in the real part.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::cxe::CxE;
use crate::error::{EscherError, Result};
use crate::rank0::ValueSet;
use crate::scalar::ExactScalar;

pub fn add(x: &CxE, y: &CxE) -> Result<CxE> {
    CxE::new(x.re() + y.re(), x.im() + y.im())
}

/// Component-wise sum with no reduction of the imaginary coefficient.
///
/// Deliberately wrong; exists so the law suite can show that it notices.
#[doc(hidden)]
pub fn naive_add(x: &CxE, y: &CxE) -> Result<CxE> {
    Ok(CxE::from_parts_unreduced(x.re() + y.re(), x.im() + y.im()))
}

pub fn negate(x: &CxE) -> Result<CxE> {
    CxE::new(-x.re(), -x.im())
}

pub fn sub(x: &CxE, y: &CxE) -> Result<CxE> {
    add(x, &negate(y)?)
}

/// Complex product: `re = x.re·y.re − x.t·y.t·P`, `t = x.re·y.t + x.t·y.re`.
pub fn mul(x: &CxE, y: &CxE) -> Result<CxE> {
    let p = ExactScalar::pe2();
    let re = &(x.re() * y.re()) - &(&(x.im() * y.im()) * &p);
    let im = &(x.re() * y.im()) + &(x.im() * y.re());
    CxE::new(re, im)
}

/// The `|p|` quotients of `x` by `q = p/n`, principal branch first.
///
/// Imaginary coefficients are `(x.t + 2k)/q mod 2` for `k = 0..|p|`. These
/// are exactly the `w` with `w · p = x · n`; for integer `q` that is the
/// plain `w · q = x`. A fractional factor is not well defined on `t mod 2`,
/// so `w · q` itself only lands on `x` for some branches.
pub fn div_by_rational(x: &CxE, q: &BigRational) -> Result<ValueSet> {
    if q.is_zero() {
        return Err(EscherError::ZeroDivisor);
    }
    let re = x.re().div_rational(q)?;
    let branches = q.numer().abs();
    let mut members = Vec::new();
    let mut k = BigInt::zero();
    while k < branches {
        let shift = ExactScalar::from_bigint(&k * BigInt::from(2));
        let im = (x.im() + &shift).div_rational(q)?;
        members.push(CxE::new(re.clone(), im)?);
        k += 1;
    }
    let principal = members.remove(0);
    Ok(ValueSet::new(principal, members))
}

/// Class of `ςa · ςb` for integers under the two competing product rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductClassReport {
    pub a: BigInt,
    pub b: BigInt,
    /// `true` when the embedding product is stigmareal.
    pub embedding_stigmareal: bool,
    /// `true` when the parity rule (`a + b` odd) calls it stigmareal.
    pub parity_stigmareal: bool,
    /// Real part of the embedding product (`ab − P`).
    pub embedding_re: ExactScalar,
    /// Real part the parity rule would give (`ab`).
    pub parity_re: ExactScalar,
}

impl ProductClassReport {
    pub fn classes_agree(&self) -> bool {
        self.embedding_stigmareal == self.parity_stigmareal
    }

    pub fn values_agree(&self) -> bool {
        self.classes_agree() && self.embedding_re == self.parity_re
    }
}

/// Compares the embedding product of `ςa · ςb` against the parity rule.
///
/// The two always agree on whether the result is real or stigmareal and
/// always disagree on its real part, by exactly `P`.
pub fn stigma_product_class(a: i64, b: i64) -> Result<ProductClassReport> {
    let sa = CxE::stigmareal(ExactScalar::from_integer(a));
    let sb = CxE::stigmareal(ExactScalar::from_integer(b));
    let prod = mul(&sa, &sb)?;
    if !prod.is_escherian() {
        return Err(EscherError::NotEscherian(prod.to_string()));
    }
    let ab = BigInt::from(a) * BigInt::from(b);
    Ok(ProductClassReport {
        a: a.into(),
        b: b.into(),
        embedding_stigmareal: prod.is_stigmareal(),
        parity_stigmareal: (BigInt::from(a) + BigInt::from(b)).is_odd(),
        embedding_re: prod.re().clone(),
        parity_re: ExactScalar::from_bigint(ab),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> CxE {
        s.parse().unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn add_examples() {
        assert_eq!(add(&c("3"), &c("s(4)")).unwrap(), c("s(7)"));
        assert_eq!(add(&c("s(3)"), &c("s(4)")).unwrap(), c("7"));
        assert_eq!(add(&c("cx(1; 1/2)"), &c("cx(1; 3/2)")).unwrap(), c("2"));
    }

    #[test]
    fn negate_examples() {
        assert_eq!(negate(&c("s(4)")).unwrap(), c("s(-4)"));
        assert_eq!(negate(&c("s(0)")).unwrap(), c("s(0)"));
        assert_eq!(negate(&c("cx(0; 1/2)")).unwrap(), c("cx(0; 3/2)"));
        // ς4 + ς(−4) = 0
        assert_eq!(
            add(&c("s(4)"), &negate(&c("s(4)")).unwrap()).unwrap(),
            c("0")
        );
    }

    #[test]
    fn sub_examples() {
        assert_eq!(sub(&c("11"), &c("s(7)")).unwrap(), c("s(4)"));
        assert_eq!(sub(&c("s(4)"), &c("s(4)")).unwrap(), c("0"));
        assert_eq!(sub(&c("5"), &c("1")).unwrap(), c("4"));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(mul(&c("s(2)"), &c("3")).unwrap(), c("s(6)"));
        // repeated addition ς2 + ς2 + ς2
        let sum = add(&add(&c("s(2)"), &c("s(2)")).unwrap(), &c("s(2)")).unwrap();
        assert_eq!(sum, c("s(6)"));
        assert_eq!(mul(&c("s(2)"), &c("2")).unwrap(), c("4"));
        assert_eq!(mul(&c("s(1)"), &c("s(1)")).unwrap(), c("1 - PE2"));
    }

    #[test]
    fn division_examples() {
        let vs = div_by_rational(&c("s(6)"), &q(3, 1)).unwrap();
        assert_eq!(vs.principal(), &c("cx(2; 1/3)"));
        assert_eq!(vs.alternates(), &[c("s(2)"), c("cx(2; 5/3)")]);

        let vs = div_by_rational(&c("6"), &q(3, 1)).unwrap();
        assert_eq!(vs.principal(), &c("2"));
        assert_eq!(vs.alternates(), &[c("cx(2; 2/3)"), c("cx(2; 4/3)")]);

        let vs = div_by_rational(&c("s(4)"), &q(1, 1)).unwrap();
        assert_eq!(vs.principal(), &c("s(4)"));
        assert!(vs.alternates().is_empty());

        assert_eq!(
            div_by_rational(&c("1"), &q(0, 1)),
            Err(EscherError::ZeroDivisor)
        );
    }

    #[test]
    fn division_by_fraction_and_negative() {
        // for q = p/n the branches are exactly the w with w·p = x·n
        let x = c("cx(1; 1/5)");
        for divisor in [q(3, 2), q(-2, 3), q(-1, 7), q(-4, 1)] {
            let vs = div_by_rational(&x, &divisor).unwrap();
            let p = CxE::rational(BigRational::from(divisor.numer().clone()));
            let n = CxE::rational(BigRational::from(divisor.denom().clone()));
            assert_eq!(BigInt::from(vs.len()), divisor.numer().abs());
            for w in vs.members() {
                assert_eq!(mul(w, &p).unwrap(), mul(&x, &n).unwrap());
            }
        }
    }

    #[test]
    fn integer_division_round_trips() {
        let x = c("cx(3/4; 7/5)");
        for d in [-5i64, -1, 2, 7] {
            let vs = div_by_rational(&x, &q(d, 1)).unwrap();
            for w in vs.members() {
                assert_eq!(mul(w, &CxE::integer(d)).unwrap(), x);
            }
        }
    }

    #[test]
    fn product_class_diagnostic() {
        let r = stigma_product_class(1, 1).unwrap();
        assert!(r.classes_agree());
        assert!(!r.embedding_stigmareal);
        assert!(!r.values_agree());
        let r = stigma_product_class(2, 3).unwrap();
        assert!(r.embedding_stigmareal && r.parity_stigmareal);
        assert_eq!(&r.parity_re - &r.embedding_re, ExactScalar::pe2());
    }

    #[test]
    fn naive_add_leaves_band() {
        let x = naive_add(&c("s(1)"), &c("s(1)")).unwrap();
        assert_ne!(x, c("2"));
        assert_eq!(x.im(), &ExactScalar::from_integer(2));
    }
}
