//! Rank-0 operations: incrementation (Kis), decrementation (Sik) and the
//! zeration it replaces.

use std::cmp::Ordering;
use std::fmt;

use crate::arith::{add, sub};
use crate::cxe::{pseudo_cmp, CxE, PseudoCmp};
use crate::error::{EscherError, Result};
use crate::scalar::{ExactScalar, PrecisionConfig};

/// A principal value plus its ordered alternates. Members are distinct.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ValueSet {
    principal: CxE,
    alternates: Vec<CxE>,
}

impl ValueSet {
    /// Drops duplicates and any alternate equal to the principal.
    pub fn new(principal: CxE, alternates: Vec<CxE>) -> ValueSet {
        let mut kept: Vec<CxE> = Vec::with_capacity(alternates.len());
        for a in alternates {
            if a != principal && !kept.contains(&a) {
                kept.push(a);
            }
        }
        ValueSet {
            principal,
            alternates: kept,
        }
    }

    pub fn single(x: CxE) -> ValueSet {
        ValueSet {
            principal: x,
            alternates: Vec::new(),
        }
    }

    pub fn principal(&self) -> &CxE {
        &self.principal
    }

    pub fn alternates(&self) -> &[CxE] {
        &self.alternates
    }

    pub fn into_principal(self) -> CxE {
        self.principal
    }

    /// Principal first, then alternates in order.
    pub fn members(&self) -> impl Iterator<Item = &CxE> {
        std::iter::once(&self.principal).chain(self.alternates.iter())
    }

    pub fn len(&self) -> usize {
        1 + self.alternates.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: &CxE) -> bool {
        self.members().any(|m| m == x)
    }

    /// Equality of member sets, ignoring which member is principal.
    pub fn same_members(&self, other: &ValueSet) -> bool {
        self.len() == other.len() && self.members().all(|m| other.contains(m))
    }

    /// Applies `f` to every member; the principal maps to the principal.
    pub fn map(&self, mut f: impl FnMut(&CxE) -> Result<CxE>) -> Result<ValueSet> {
        let principal = f(&self.principal)?;
        let alternates = self.alternates.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(ValueSet::new(principal, alternates))
    }

    /// Applies `f` to every pair of members; principal pairs with principal.
    pub fn zip_with(
        &self,
        other: &ValueSet,
        mut f: impl FnMut(&CxE, &CxE) -> Result<CxE>,
    ) -> Result<ValueSet> {
        let principal = f(&self.principal, &other.principal)?;
        let mut alternates = Vec::new();
        for a in self.members() {
            for b in other.members() {
                alternates.push(f(a, b)?);
            }
        }
        Ok(ValueSet::new(principal, alternates))
    }
}

impl fmt::Display for ValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{ ")?;
        for (i, m) in self.members().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str(" }")
    }
}

impl fmt::Debug for ValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ValueSet{self}")
    }
}

impl From<CxE> for ValueSet {
    fn from(x: CxE) -> ValueSet {
        ValueSet::single(x)
    }
}

/// Which operand Kis takes the successor of when the operands are
/// pseudoequal but distinct (`x` and `ςx`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum TieBreak {
    /// Successor of the first operand. The adopted convention.
    #[default]
    FirstOperand,
    /// Successor of the second operand.
    SecondOperand,
    /// Successor of whichever operand has `t ∈ [0, 1)`. Commutative, and
    /// known to break `ςa ⊙ a = ς(a ⊙ ςa)`; kept for negative controls.
    LowerBand,
}

fn successor_pair(w: &CxE) -> Result<ValueSet> {
    let one = CxE::one();
    let principal = add(w, &one)?;
    let alternate = add(&w.stigma()?, &one)?;
    Ok(ValueSet::new(principal, vec![alternate]))
}

/// `x ⊙ y`: the successor of the pseudogreater operand, as the pair
/// `{w + 1, ςw + 1}`.
pub fn kis(x: &CxE, y: &CxE, cfg: &PrecisionConfig) -> Result<ValueSet> {
    kis_with(x, y, TieBreak::FirstOperand, cfg)
}

pub fn kis_with(x: &CxE, y: &CxE, tie: TieBreak, cfg: &PrecisionConfig) -> Result<ValueSet> {
    let w = match pseudo_cmp(x, y, cfg)? {
        PseudoCmp::PseudoGreater => x,
        PseudoCmp::PseudoLess => y,
        PseudoCmp::PseudoEqual => match tie {
            TieBreak::FirstOperand => x,
            TieBreak::SecondOperand => y,
            TieBreak::LowerBand => {
                if x.im().cmp_numeric(&ExactScalar::one(), cfg)? == Ordering::Less {
                    x
                } else {
                    y
                }
            }
        },
    };
    successor_pair(w)
}

/// `z ⊘ x`, the principal decrementation.
///
/// With `g = z − 1`: the result is `g` when `x ≺ g` or `x = g`, and `ςg`
/// when `x ≻ g` or `x = ςg`.
pub fn sik(z: &CxE, x: &CxE, cfg: &PrecisionConfig) -> Result<CxE> {
    let g = sub(z, &CxE::one())?;
    match pseudo_cmp(x, &g, cfg)? {
        PseudoCmp::PseudoLess => Ok(g),
        PseudoCmp::PseudoEqual if *x == g => Ok(g),
        _ => g.stigma(),
    }
}

/// Decrementation through stigmamoduli, defined on `E` only:
/// `z ⊘ x = ∤x + z − 1∤ − x` when `∤x∤ ≤ ∤z − 1∤`, else `… − ςx`.
pub fn sik_by_cases(z: &CxE, x: &CxE, cfg: &PrecisionConfig) -> Result<CxE> {
    for v in [z, x] {
        if !v.is_escherian() {
            return Err(EscherError::NotEscherian(v.to_string()));
        }
    }
    let one = CxE::one();
    let z_minus_one = sub(z, &one)?;
    let mod_x = x.stigmamodulo()?;
    let mod_g = z_minus_one.stigmamodulo()?;
    let folded = add(x, &z_minus_one)?.stigmamodulo()?;
    if mod_x.re().cmp_numeric(mod_g.re(), cfg)? != Ordering::Greater {
        sub(&folded, x)
    } else {
        sub(&folded, &x.stigma()?)
    }
}

/// The discontinuous rank-0 operation on reals: `a ⊙ a = a + 2`.
pub fn zeration_reference(a: &CxE, b: &CxE, cfg: &PrecisionConfig) -> Result<CxE> {
    for v in [a, b] {
        if !v.is_real() {
            return Err(EscherError::NotReal(v.to_string()));
        }
    }
    match a.re().cmp_numeric(b.re(), cfg)? {
        Ordering::Greater => add(a, &CxE::one()),
        Ordering::Less => add(b, &CxE::one()),
        Ordering::Equal => add(a, &CxE::integer(2)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> CxE {
        s.parse().unwrap()
    }

    fn cfg() -> PrecisionConfig {
        PrecisionConfig::default()
    }

    #[test]
    fn kis_examples() {
        let r = kis(&c("7"), &c("3"), &cfg()).unwrap();
        assert_eq!(r.principal(), &c("8"));
        assert_eq!(r.alternates(), &[c("s(8)")]);

        let r = kis(&c("3"), &c("s(7)"), &cfg()).unwrap();
        assert_eq!(r.principal(), &c("4"));
        assert_eq!(r.alternates(), &[c("s(4)")]);

        let r = kis(&c("2"), &c("s(2)"), &cfg()).unwrap();
        assert_eq!((r.principal(), r.alternates()), (&c("3"), &[c("s(3)")][..]));
        let r = kis(&c("s(2)"), &c("2"), &cfg()).unwrap();
        assert_eq!((r.principal(), r.alternates()), (&c("s(3)"), &[c("3")][..]));
    }

    #[test]
    fn tie_break_variants() {
        let second = kis_with(&c("2"), &c("s(2)"), TieBreak::SecondOperand, &cfg()).unwrap();
        assert_eq!(second.principal(), &c("s(3)"));
        let lower_a = kis_with(&c("2"), &c("s(2)"), TieBreak::LowerBand, &cfg()).unwrap();
        let lower_b = kis_with(&c("s(2)"), &c("2"), TieBreak::LowerBand, &cfg()).unwrap();
        assert_eq!(lower_a.principal(), lower_b.principal());
    }

    #[test]
    fn sik_examples() {
        assert_eq!(sik(&c("5"), &c("2"), &cfg()).unwrap(), c("4"));
        assert_eq!(sik(&c("5"), &c("7"), &cfg()).unwrap(), c("s(4)"));
        assert_eq!(sik(&c("s(5)"), &c("2"), &cfg()).unwrap(), c("4"));
        // cross-check: kis(2, 4) contains ς5
        assert!(kis(&c("2"), &c("4"), &cfg()).unwrap().contains(&c("s(5)")));
    }

    #[test]
    fn sik_degenerate_points() {
        // x = z − 1 keeps the real branch, x = ς(z − 1) the stigma branch
        assert_eq!(sik(&c("5"), &c("4"), &cfg()).unwrap(), c("4"));
        assert_eq!(sik(&c("5"), &c("s(4)"), &cfg()).unwrap(), c("s(4)"));
        assert_eq!(sik(&c("s(5)"), &c("4"), &cfg()).unwrap(), c("4"));
    }

    #[test]
    fn sik_by_cases_examples() {
        assert_eq!(sik_by_cases(&c("5"), &c("7"), &cfg()).unwrap(), c("s(4)"));
        assert_eq!(
            sik_by_cases(&c("s(5)"), &c("s(2)"), &cfg()).unwrap(),
            c("s(4)")
        );
        assert_eq!(sik_by_cases(&c("5"), &c("2"), &cfg()).unwrap(), c("4"));
        assert!(matches!(
            sik_by_cases(&c("cx(5; 1/2)"), &c("2"), &cfg()),
            Err(EscherError::NotEscherian(_))
        ));
    }

    #[test]
    fn zeration_examples() {
        assert_eq!(
            zeration_reference(&c("3"), &c("2"), &cfg()).unwrap(),
            c("4")
        );
        assert_eq!(
            zeration_reference(&c("3"), &c("3"), &cfg()).unwrap(),
            c("5")
        );
        assert_eq!(
            zeration_reference(&c("2"), &c("3"), &cfg()).unwrap(),
            c("4")
        );
        assert!(matches!(
            zeration_reference(&c("s(2)"), &c("3"), &cfg()),
            Err(EscherError::NotReal(_))
        ));
    }

    #[test]
    fn non_associativity_witness() {
        // a < b < c − 1
        let (a, b, cc) = (c("1"), c("2"), c("5"));
        let left = kis(kis(&a, &b, &cfg()).unwrap().principal(), &cc, &cfg()).unwrap();
        let right = kis(&a, kis(&b, &cc, &cfg()).unwrap().principal(), &cfg()).unwrap();
        assert_eq!(left.principal(), &c("6"));
        assert_eq!(right.principal(), &c("7"));
    }

    #[test]
    fn value_set_display() {
        let r = kis(&c("7"), &c("3"), &cfg()).unwrap();
        assert_eq!(r.to_string(), "{ 8, s(8) }");
    }
}
