//! Exact scalars: polynomials over ℚ in the formal symbol `P = (πe)²`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bounds::{self, Interval};
use crate::error::{EscherError, Result};

/// Textual name of the symbol `P = (πe)²`.
pub const PE2: &str = "PE2";

/// Working precisions used when a decision needs numeric evaluation.
///
/// `start_bits`/`cap_bits` drive the escalation loop for sign decisions;
/// `numeric_bits` is the working precision of the approximate backend
/// (roots, logarithms, tetration).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionConfig {
    start_bits: u32,
    cap_bits: u32,
    numeric_bits: u32,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig {
            start_bits: 128,
            cap_bits: 4096,
            numeric_bits: 256,
        }
    }
}

impl PrecisionConfig {
    pub fn new(start_bits: u32, cap_bits: u32) -> Result<Self> {
        Self::with_numeric(
            start_bits,
            cap_bits,
            PrecisionConfig::default().numeric_bits,
        )
    }

    pub fn with_numeric(start_bits: u32, cap_bits: u32, numeric_bits: u32) -> Result<Self> {
        if start_bits == 0 || numeric_bits < 16 {
            return Err(EscherError::InvalidConfig(
                "precisions must be positive (numeric at least 16 bits)".into(),
            ));
        }
        if cap_bits < start_bits {
            return Err(EscherError::InvalidConfig(format!(
                "cap {cap_bits} below start {start_bits}"
            )));
        }
        Ok(PrecisionConfig {
            start_bits,
            cap_bits,
            numeric_bits,
        })
    }

    pub(crate) const fn from_parts_unchecked(
        start_bits: u32,
        cap_bits: u32,
        numeric_bits: u32,
    ) -> Self {
        PrecisionConfig {
            start_bits,
            cap_bits,
            numeric_bits,
        }
    }

    pub fn start_bits(&self) -> u32 {
        self.start_bits
    }

    pub fn cap_bits(&self) -> u32 {
        self.cap_bits
    }

    pub fn numeric_bits(&self) -> u32 {
        self.numeric_bits
    }
}

/// `q₀ + q₁P + … + q_dP^d` with exact rational coefficients.
///
/// Trailing zero coefficients are always stripped, so structural equality is
/// symbolic equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactScalar {
    coeffs: Vec<BigRational>,
}

fn strip(mut coeffs: Vec<BigRational>) -> Vec<BigRational> {
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    coeffs
}

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(n))
    }

    pub fn from_rational(q: BigRational) -> Self {
        ExactScalar {
            coeffs: strip(vec![q]),
        }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(num.into(), den.into()))
    }

    /// The symbol `P` itself.
    pub fn pe2() -> Self {
        ExactScalar {
            coeffs: vec![BigRational::zero(), BigRational::one()],
        }
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        ExactScalar {
            coeffs: strip(coeffs),
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Degree in `P`; zero has degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// The value as a plain rational if no power of `P` occurs.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|q| q.is_integer())
            .map(|q| q.to_integer())
    }

    pub fn constant(&self) -> BigRational {
        self.coeffs
            .first()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * q).collect())
    }

    /// Exact division by a non-zero rational.
    pub fn div_rational(&self, q: &BigRational) -> Result<Self> {
        if q.is_zero() {
            return Err(EscherError::ZeroDivisor);
        }
        Ok(self.scale(&q.recip()))
    }

    fn shift_constant(&self, delta: &BigRational) -> Self {
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(BigRational::zero());
        }
        coeffs[0] += delta;
        Self::from_coeffs(coeffs)
    }

    /// Rational enclosure of the numeric value using a `bits`-precision
    /// enclosure of `P`.
    pub fn enclose(&self, bits: u32) -> Interval {
        match self.as_rational() {
            Some(q) => Interval::point(q),
            None => {
                let p = bounds::pe2(bits);
                let mut power = Interval::point(BigRational::one());
                let mut acc = Interval::point(BigRational::zero());
                for (k, c) in self.coeffs.iter().enumerate() {
                    if k > 0 {
                        power = power.mul_nonneg(&p);
                    }
                    if !c.is_zero() {
                        acc = acc.add(&power.scale(c));
                    }
                }
                acc
            }
        }
    }

    /// Visits precisions `start, 2·start, …, cap` until `decide` succeeds.
    fn escalate<T>(
        &self,
        cfg: &PrecisionConfig,
        mut decide: impl FnMut(&Interval) -> Option<T>,
    ) -> Result<T> {
        let mut bits = cfg.start_bits;
        loop {
            if let Some(out) = decide(&self.enclose(bits)) {
                return Ok(out);
            }
            if bits >= cfg.cap_bits {
                return Err(EscherError::AmbiguousComparison {
                    cap_bits: cfg.cap_bits,
                });
            }
            bits = bits.saturating_mul(2).min(cfg.cap_bits);
        }
    }

    /// Sign of the numeric value. Rational values are decided exactly.
    pub fn signum(&self, cfg: &PrecisionConfig) -> Result<Ordering> {
        if let Some(q) = self.as_rational() {
            return Ok(q.cmp(&BigRational::zero()));
        }
        self.escalate(cfg, |iv| {
            if iv.contains_zero() {
                None
            } else if iv.lo > BigRational::zero() {
                Some(Ordering::Greater)
            } else {
                Some(Ordering::Less)
            }
        })
    }

    /// Numeric order; symbolic equality short-circuits to `Equal`.
    pub fn cmp_numeric(&self, other: &ExactScalar, cfg: &PrecisionConfig) -> Result<Ordering> {
        if self == other {
            return Ok(Ordering::Equal);
        }
        (self - other).signum(cfg)
    }

    /// Largest integer not above the numeric value.
    pub fn floor(&self, cfg: &PrecisionConfig) -> Result<BigInt> {
        match self.as_rational() {
            Some(q) => Ok(q.floor().to_integer()),
            None => self.escalate(cfg, |iv| {
                let lo = iv.lo.floor().to_integer();
                let hi = iv.hi.floor().to_integer();
                (lo == hi).then_some(lo)
            }),
        }
    }

    /// Splits `x` into `2k + r` with the numeric value of `r` in `[0, 2)`.
    /// Only the constant coefficient changes.
    pub fn floor_half_band(&self, cfg: &PrecisionConfig) -> Result<(BigInt, ExactScalar)> {
        let two = BigRational::from_integer(BigInt::from(2));
        let k = self.scale(&two.recip()).floor(cfg)?;
        let r = self.shift_constant(&-(&two * BigRational::from_integer(k.clone())));
        Ok((k, r))
    }

    /// `f64` approximation, for display and plotting only.
    pub fn approx_f64(&self) -> f64 {
        let iv = self.enclose(64);
        let mid = (&iv.lo + &iv.hi) / BigRational::from_integer(BigInt::from(2));
        mid.to_f64().unwrap_or(f64::NAN)
    }
}

pub(crate) fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let body = match k {
                0 => fmt_rational(&c.abs()),
                1 => format!("{}*{PE2}", fmt_rational(&c.abs())),
                _ => format!("{}*{PE2}^{k}", fmt_rational(&c.abs())),
            };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
                first = false;
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            f.write_str(&body)?;
        }
        Ok(())
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactScalar({self})")
    }
}

/// Parses a rational literal: `7`, `-3`, `22/7`, `0.125`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || EscherError::Syntax {
        pos: 0,
        msg: format!("bad rational literal `{s}`"),
    };
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(EscherError::ZeroDivisor);
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.trim_start().starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        let den = BigInt::from(10).pow(frac.len() as u32);
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let mag = int_part.abs() * &den + frac_part;
        let num = if negative { -mag } else { mag };
        return Ok(BigRational::new(num, den));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

impl FromStr for ExactScalar {
    type Err = EscherError;

    /// Accepts the canonical text form, e.g. `1/2 - 3*PE2 + PE2^2`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(EscherError::Syntax {
                pos: 0,
                msg: "empty scalar".into(),
            });
        }
        let mut coeffs: Vec<BigRational> = Vec::new();
        let bytes = compact.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let mut negative = false;
            while i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
                negative ^= bytes[i] == b'-';
                i += 1;
            }
            let start = i;
            while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
                i += 1;
            }
            let term = &compact[start..i];
            let (coef, degree) =
                parse_term(term).map_err(|msg| EscherError::Syntax { pos: start, msg })?;
            let coef = if negative { -coef } else { coef };
            if coeffs.len() <= degree {
                coeffs.resize(degree + 1, BigRational::zero());
            }
            coeffs[degree] += coef;
        }
        Ok(ExactScalar::from_coeffs(coeffs))
    }
}

fn parse_term(term: &str) -> std::result::Result<(BigRational, usize), String> {
    if term.is_empty() {
        return Err("missing term".into());
    }
    let (coef_text, sym) = match term.find(PE2) {
        None => (term, None),
        Some(at) => {
            let coef = term[..at].strip_suffix('*').unwrap_or(&term[..at]);
            (coef, Some(&term[at + PE2.len()..]))
        }
    };
    let coef = if coef_text.is_empty() {
        BigRational::one()
    } else {
        parse_rational(coef_text).map_err(|e| e.to_string())?
    };
    let degree = match sym {
        None => 0,
        Some("") => 1,
        Some(rest) => rest
            .strip_prefix('^')
            .and_then(|d| d.parse::<usize>().ok())
            .ok_or_else(|| format!("bad exponent in `{term}`"))?,
    };
    Ok((coef, degree))
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &'a ExactScalar) -> ExactScalar {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|k| {
                let a = self
                    .coeffs
                    .get(k)
                    .cloned()
                    .unwrap_or_else(BigRational::zero);
                match rhs.coeffs.get(k) {
                    Some(b) => a + b,
                    None => a,
                }
            })
            .collect();
        ExactScalar::from_coeffs(coeffs)
    }
}

impl<'a> Sub<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &'a ExactScalar) -> ExactScalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &'a ExactScalar) -> ExactScalar {
        if self.is_zero() || rhs.is_zero() {
            return ExactScalar::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        ExactScalar::from_coeffs(coeffs)
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: &'a ExactScalar) -> ExactScalar {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        ExactScalar::from_integer(n)
    }
}

impl From<BigRational> for ExactScalar {
    fn from(q: BigRational) -> Self {
        ExactScalar::from_rational(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> ExactScalar {
        text.parse().unwrap()
    }

    #[test]
    fn addition_examples() {
        assert_eq!(s("3") + s("1/2"), s("7/2"));
        assert_eq!(s("1 - PE2") + s("PE2"), s("1"));
        let r = s("2 + 3*PE2") + s("-2");
        assert_eq!(r, s("3*PE2"));
        assert_eq!(r.coeffs()[0], BigRational::zero());
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(s("2") * s("3/2"), s("3"));
        assert_eq!(s("1 + PE2") * s("1 - PE2"), s("1 - PE2^2"));
        assert_eq!(s("PE2") * s("PE2"), s("PE2^2"));
    }

    #[test]
    fn zero_is_canonical() {
        let z = s("PE2 - PE2");
        assert!(z.is_zero());
        assert_eq!(z, ExactScalar::zero());
        assert_eq!(z.to_string(), "0");
    }

    #[test]
    fn comparison_examples() {
        let cfg = PrecisionConfig::default();
        assert_eq!(s("1").cmp_numeric(&s("1"), &cfg).unwrap(), Ordering::Equal);
        // (πe)² = 72.927…
        assert_eq!(
            s("PE2").cmp_numeric(&s("72"), &cfg).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            s("PE2").cmp_numeric(&s("73"), &cfg).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            s("1 - PE2").cmp_numeric(&s("0"), &cfg).unwrap(),
            Ordering::Less
        );
    }

    #[test]
    fn ambiguity_reported_at_cap() {
        // differs from P by about 6e-7; an 8-bit enclosure of P is far wider
        let close = s("7292706/100000 - PE2");
        let cfg = PrecisionConfig::new(8, 8).unwrap();
        assert!(matches!(
            close.signum(&cfg),
            Err(EscherError::AmbiguousComparison { cap_bits: 8 })
        ));
        assert!(close.signum(&PrecisionConfig::default()).is_ok());
    }

    #[test]
    fn half_band_examples() {
        let cfg = PrecisionConfig::default();
        let (k, r) = s("3").floor_half_band(&cfg).unwrap();
        assert_eq!((k, r), (BigInt::from(1), s("1")));
        let (k, r) = s("-1/2").floor_half_band(&cfg).unwrap();
        assert_eq!((k, r), (BigInt::from(-1), s("3/2")));
        let (k, r) = s("5").floor_half_band(&cfg).unwrap();
        assert_eq!((k, r), (BigInt::from(2), s("1")));
        // 1/10·P ≈ 7.29 → k = 3, r = P/10 − 6
        let (k, r) = s("1/10*PE2").floor_half_band(&cfg).unwrap();
        assert_eq!(k, BigInt::from(3));
        assert_eq!(r, s("-6 + 1/10*PE2"));
    }

    #[test]
    fn display_forms() {
        assert_eq!(s("7/2").to_string(), "7/2");
        assert_eq!(s("1 - PE2").to_string(), "1 - 1*PE2");
        assert_eq!(s("-PE2^2 + 1/3*PE2").to_string(), "1/3*PE2 - 1*PE2^2");
        assert_eq!(s("-5").to_string(), "-5");
    }

    #[test]
    fn config_validation() {
        assert!(PrecisionConfig::new(256, 128).is_err());
        assert!(PrecisionConfig::new(0, 128).is_err());
        assert!(PrecisionConfig::new(64, 64).is_ok());
    }

    #[test]
    fn rational_literals() {
        assert_eq!(
            parse_rational("0.125").unwrap(),
            BigRational::new(1.into(), 8.into())
        );
        assert_eq!(
            parse_rational("-2.5").unwrap(),
            BigRational::new((-5).into(), 2.into())
        );
        assert_eq!(
            parse_rational("22/7").unwrap(),
            BigRational::new(22.into(), 7.into())
        );
        assert!(parse_rational("1/0").is_err());
    }
}
