//! Real values that are exact when they can be and high-precision floats
//! when they cannot (roots, logarithms, huge towers).

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{EscherError, Result};

const RM: RoundingMode = RoundingMode::ToEven;

/// Exact powers whose result would exceed this many bits fall back to
/// floating point.
const EXACT_BIT_LIMIT: u64 = 1 << 20;

thread_local! {
    static CONSTS: RefCell<Consts> =
        RefCell::new(Consts::new().expect("astro-float constant cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

fn bigint_to_float(n: &BigInt, bits: usize) -> BigFloat {
    let (sign, words) = n.to_u64_digits();
    // wide enough that every intermediate is exact
    let wide = 64 * (words.len() + 1);
    let base = BigFloat::from_u64(1 << 32, 64).mul(&BigFloat::from_u64(1 << 32, 64), 128, RM);
    let mut acc = BigFloat::from_u64(0, wide);
    for w in words.iter().rev() {
        acc = acc
            .mul(&base, wide, RM)
            .add(&BigFloat::from_u64(*w, 64), wide, RM);
    }
    let mut out = acc.add(&BigFloat::from_u64(0, 64), bits, RM);
    if sign == num_bigint::Sign::Minus {
        out.inv_sign();
    }
    out
}

fn rational_to_float(q: &BigRational, bits: usize) -> BigFloat {
    let guard = bits + 64;
    let n = bigint_to_float(q.numer(), guard);
    let d = bigint_to_float(q.denom(), guard);
    n.div(&d, bits, RM)
}

fn float_cmp_zero(x: &BigFloat) -> Ordering {
    if x.is_zero() {
        Ordering::Equal
    } else if x.is_negative() {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

fn check_finite(x: BigFloat, what: &str) -> Result<BigFloat> {
    if x.is_nan() {
        Err(EscherError::Domain(format!("{what} is undefined")))
    } else if x.is_inf() {
        Err(EscherError::ResourceLimit(format!("{what} overflows")))
    } else {
        Ok(x)
    }
}

/// `base^k` exactly if the result stays within `EXACT_BIT_LIMIT` bits.
fn exact_powi(base: &BigRational, k: &BigInt) -> Result<Option<BigRational>> {
    if base.is_zero() {
        return match k.sign() {
            num_bigint::Sign::Minus => Err(EscherError::ZeroDivisor),
            num_bigint::Sign::NoSign => Ok(Some(BigRational::one())),
            num_bigint::Sign::Plus => Ok(Some(BigRational::zero())),
        };
    }
    if base.abs().is_one() {
        let odd = (k % 2u32) != BigInt::zero();
        let v = if base.is_negative() && odd {
            -BigRational::one()
        } else {
            BigRational::one()
        };
        return Ok(Some(v));
    }
    let width = base.numer().bits().max(base.denom().bits());
    let Some(mag) = k.abs().to_u64() else {
        return Ok(None);
    };
    if mag.saturating_mul(width) > EXACT_BIT_LIMIT {
        return Ok(None);
    }
    let e = mag as usize;
    let p = BigRational::new(
        num_traits::pow(base.numer().clone(), e),
        num_traits::pow(base.denom().clone(), e),
    );
    Ok(Some(if k.is_negative() { p.recip() } else { p }))
}

fn exact_nth_root_int(n: &BigInt, q: u32) -> Option<BigInt> {
    let r = n.nth_root(q);
    (num_traits::pow(r.clone(), q as usize) == *n).then_some(r)
}

/// The non-negative rational `q`-th root of `x ≥ 0`, if rational.
fn exact_nth_root(x: &BigRational, q: &BigInt) -> Option<BigRational> {
    let q = q.to_u32()?;
    let n = exact_nth_root_int(x.numer(), q)?;
    let d = exact_nth_root_int(x.denom(), q)?;
    Some(BigRational::new(n, d))
}

/// A real number, either an exact rational or a float with its precision.
#[derive(Clone)]
pub enum Numeric {
    Exact(BigRational),
    Approx { value: BigFloat, bits: usize },
}

impl Numeric {
    pub fn from_i64(n: i64) -> Numeric {
        Numeric::Exact(BigRational::from_integer(n.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Numeric {
        Numeric::Exact(BigRational::new(n.into(), d.into()))
    }

    pub fn approx(value: BigFloat, bits: usize) -> Result<Numeric> {
        Ok(Numeric::Approx {
            value: check_finite(value, "value")?,
            bits,
        })
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Numeric::Exact(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Numeric::Exact(q) => Some(q),
            Numeric::Approx { .. } => None,
        }
    }

    /// The exact integer value, if this is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|q| q.is_integer())
            .map(|q| q.to_integer())
    }

    /// Working precision of an approximate value.
    pub fn precision(&self) -> Option<usize> {
        match self {
            Numeric::Exact(_) => None,
            Numeric::Approx { bits, .. } => Some(*bits),
        }
    }

    pub fn to_float(&self, bits: usize) -> BigFloat {
        match self {
            Numeric::Exact(q) => rational_to_float(q, bits),
            Numeric::Approx { value, .. } => value.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Numeric::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            Numeric::Approx { value, .. } => {
                let s = with_consts(|cc| value.format(Radix::Dec, RM, cc));
                s.ok().and_then(|s| s.parse().ok()).unwrap_or(f64::NAN)
            }
        }
    }

    pub fn signum(&self) -> Ordering {
        match self {
            Numeric::Exact(q) => q.cmp(&BigRational::zero()),
            Numeric::Approx { value, .. } => float_cmp_zero(value),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.signum() == Ordering::Equal
    }

    fn combine(
        &self,
        other: &Numeric,
        bits: usize,
        exact: impl FnOnce(&BigRational, &BigRational) -> Result<BigRational>,
        float: impl FnOnce(&BigFloat, &BigFloat, usize) -> BigFloat,
        what: &str,
    ) -> Result<Numeric> {
        match (self, other) {
            (Numeric::Exact(a), Numeric::Exact(b)) => Ok(Numeric::Exact(exact(a, b)?)),
            _ => {
                let v = float(&self.to_float(bits), &other.to_float(bits), bits);
                Numeric::approx(check_finite(v, what)?, bits)
            }
        }
    }

    pub fn add(&self, other: &Numeric, bits: usize) -> Result<Numeric> {
        self.combine(
            other,
            bits,
            |a, b| Ok(a + b),
            |a, b, p| a.add(b, p, RM),
            "sum",
        )
    }

    pub fn sub(&self, other: &Numeric, bits: usize) -> Result<Numeric> {
        self.combine(
            other,
            bits,
            |a, b| Ok(a - b),
            |a, b, p| a.sub(b, p, RM),
            "difference",
        )
    }

    pub fn mul(&self, other: &Numeric, bits: usize) -> Result<Numeric> {
        self.combine(
            other,
            bits,
            |a, b| Ok(a * b),
            |a, b, p| a.mul(b, p, RM),
            "product",
        )
    }

    pub fn div(&self, other: &Numeric, bits: usize) -> Result<Numeric> {
        if other.is_zero() {
            return Err(EscherError::ZeroDivisor);
        }
        self.combine(
            other,
            bits,
            |a, b| Ok(a / b),
            |a, b, p| a.div(b, p, RM),
            "quotient",
        )
    }

    pub fn neg(&self) -> Numeric {
        match self {
            Numeric::Exact(q) => Numeric::Exact(-q),
            Numeric::Approx { value, bits } => Numeric::Approx {
                value: value.neg(),
                bits: *bits,
            },
        }
    }

    /// `self^exp` over the reals.
    ///
    /// Negative bases need an exact integer exponent. Exact inputs give
    /// exact results when the value is rational and not too large.
    pub fn pow(&self, exp: &Numeric, bits: usize) -> Result<Numeric> {
        if let (Numeric::Exact(b), Some(k)) = (self, exp.as_integer()) {
            if let Some(v) = exact_powi(b, &k)? {
                return Ok(Numeric::Exact(v));
            }
        }
        if let (Numeric::Exact(b), Numeric::Exact(e)) = (self, exp) {
            if !b.is_negative() && !e.is_integer() {
                if b.is_zero() {
                    return if e.is_positive() {
                        Ok(Numeric::from_i64(0))
                    } else {
                        Err(EscherError::ZeroDivisor)
                    };
                }
                if let Some(r) = exact_nth_root(b, e.denom()) {
                    if let Some(v) = exact_powi(&r, e.numer())? {
                        return Ok(Numeric::Exact(v));
                    }
                }
            }
        }
        match self.signum() {
            Ordering::Greater => {
                let b = self.to_float(bits + 64);
                let e = exp.to_float(bits + 64);
                let v = with_consts(|cc| b.pow(&e, bits, RM, cc));
                Numeric::approx(check_finite(v, "power")?, bits)
            }
            Ordering::Equal => match exp.signum() {
                Ordering::Greater => Ok(Numeric::from_i64(0)),
                Ordering::Equal => Ok(Numeric::from_i64(1)),
                Ordering::Less => Err(EscherError::ZeroDivisor),
            },
            Ordering::Less => {
                let Some(k) = exp.as_integer() else {
                    return Err(EscherError::Domain(
                        "negative base needs an exact integer exponent".into(),
                    ));
                };
                let mag = self.neg().pow(exp, bits)?;
                Ok(if (&k % 2u32).is_zero() {
                    mag
                } else {
                    mag.neg()
                })
            }
        }
    }

    /// The real `b`-th root of `self`.
    pub fn root(&self, b: &Numeric, bits: usize) -> Result<Numeric> {
        if b.is_zero() {
            return Err(EscherError::Domain("zeroth root".into()));
        }
        if self.signum() == Ordering::Less {
            let odd = b.as_integer().is_some_and(|k| !(&k % 2u32).is_zero());
            if !odd {
                return Err(EscherError::Domain(
                    "root of a negative number needs an odd integer index".into(),
                ));
            }
            return Ok(self.neg().root(b, bits)?.neg());
        }
        let inv = Numeric::from_i64(1).div(b, bits + 64)?;
        self.pow(&inv, bits)
    }

    /// `log_a(self)`, with exact results for rational logarithms of small
    /// height.
    pub fn log(&self, a: &Numeric, bits: usize) -> Result<Numeric> {
        if a.signum() != Ordering::Greater || self.signum() != Ordering::Greater {
            return Err(EscherError::Domain(
                "logarithm needs positive arguments".into(),
            ));
        }
        if matches!(a, Numeric::Exact(q) if q.is_one()) {
            return Err(EscherError::Domain("logarithm base 1".into()));
        }
        let guard = bits + 64;
        let la = with_consts(|cc| a.to_float(guard).ln(guard, RM, cc));
        let lc = with_consts(|cc| self.to_float(guard).ln(guard, RM, cc));
        if la.is_zero() {
            return Err(EscherError::Domain("logarithm base 1".into()));
        }
        let v = check_finite(lc.div(&la, bits, RM), "logarithm")?;
        if let (Numeric::Exact(qa), Numeric::Exact(qc)) = (a, self) {
            if let Some(r) = exact_log(qa, qc, &v) {
                return Ok(Numeric::Exact(r));
            }
        }
        Numeric::approx(v, bits)
    }

    pub fn cmp_value(&self, other: &Numeric, bits: usize) -> Ordering {
        match (self, other) {
            (Numeric::Exact(a), Numeric::Exact(b)) => a.cmp(b),
            _ => {
                let d = self.to_float(bits).sub(&other.to_float(bits), bits, RM);
                float_cmp_zero(&d)
            }
        }
    }

    /// Equality within relative tolerance `rel_tol`; exact pairs compare
    /// exactly.
    pub fn approx_eq(&self, other: &Numeric, rel_tol: f64, bits: usize) -> bool {
        if let (Numeric::Exact(a), Numeric::Exact(b)) = (self, other) {
            return a == b;
        }
        let x = self.to_float(bits);
        let y = other.to_float(bits);
        let diff = x.sub(&y, bits, RM).abs();
        let scale = x.abs().max(&y.abs());
        let bound = scale.mul(&BigFloat::from_f64(rel_tol, 64), bits, RM);
        diff <= bound
    }

    /// Decimal rendering with `digits` significant digits for approximate
    /// values.
    pub fn display(&self, digits: usize) -> String {
        match self {
            Numeric::Exact(q) if q.is_integer() => q.to_integer().to_string(),
            Numeric::Exact(q) => format!("{}/{}", q.numer(), q.denom()),
            Numeric::Approx { value, .. } => format_float(value, digits),
        }
    }
}

/// Tries `log_a c = p/q` for small `q`, guided by the float estimate.
fn exact_log(a: &BigRational, c: &BigRational, estimate: &BigFloat) -> Option<BigRational> {
    let est = {
        let s = with_consts(|cc| estimate.format(Radix::Dec, RM, cc)).ok()?;
        s.parse::<f64>().ok()?
    };
    if !est.is_finite() || est.abs() > 1e6 {
        return None;
    }
    for q in 1..=12i64 {
        let p = (est * q as f64).round() as i64;
        if ((p as f64) / (q as f64) - est).abs() > 1e-9 {
            continue;
        }
        let lhs = exact_powi(a, &BigInt::from(p)).ok()??;
        let rhs = exact_powi(c, &BigInt::from(q)).ok()??;
        if lhs == rhs {
            return Some(BigRational::new(p.into(), q.into()));
        }
    }
    None
}

fn format_float(value: &BigFloat, digits: usize) -> String {
    if value.is_zero() {
        return "0".into();
    }
    let digits = digits.max(1);
    let Ok(raw) = with_consts(|cc| value.format(Radix::Dec, RM, cc)) else {
        return "NaN".into();
    };
    // raw looks like "-1.2345e+3"
    let (mant, exp) = raw.split_once('e').unwrap_or((&raw, "0"));
    let exp: i64 = exp.trim_start_matches('+').parse().unwrap_or(0);
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant),
    };
    let all: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let (lead, exp) = round_digits(&all, digits, exp);
    let body = if (-6..21).contains(&exp) {
        positional(&lead, exp)
    } else {
        let frac = lead[1..].trim_end_matches('0');
        if frac.is_empty() {
            format!("{}e{exp}", &lead[..1])
        } else {
            format!("{}.{frac}e{exp}", &lead[..1])
        }
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Rounds a digit string `d.ddd…` (value `d.ddd × 10^exp`) to `n` digits.
fn round_digits(all: &str, n: usize, exp: i64) -> (String, i64) {
    let mut d: Vec<u8> = all.bytes().map(|b| b - b'0').collect();
    d.resize(d.len().max(n + 1), 0);
    let round_up = d[n] >= 5;
    d.truncate(n);
    let mut exp = exp;
    if round_up {
        let mut i = n;
        loop {
            if i == 0 {
                d.insert(0, 1);
                d.truncate(n);
                exp += 1;
                break;
            }
            i -= 1;
            if d[i] == 9 {
                d[i] = 0;
            } else {
                d[i] += 1;
                break;
            }
        }
    }
    (d.iter().map(|x| (x + b'0') as char).collect(), exp)
}

fn positional(lead: &str, exp: i64) -> String {
    let (int, frac) = if exp >= 0 {
        let cut = (exp + 1) as usize;
        if cut >= lead.len() {
            (
                format!("{lead}{}", "0".repeat(cut - lead.len())),
                String::new(),
            )
        } else {
            (lead[..cut].to_string(), lead[cut..].to_string())
        }
    } else {
        let zeros = "0".repeat((-exp - 1) as usize);
        ("0".to_string(), format!("{zeros}{lead}"))
    };
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        int
    } else {
        format!("{int}.{frac}")
    }
}

impl fmt::Display for Numeric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display(30))
    }
}

impl fmt::Debug for Numeric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Numeric::Exact(_) => write!(f, "Exact({self})"),
            Numeric::Approx { bits, .. } => write!(f, "Approx({self}, {bits} bits)"),
        }
    }
}

impl PartialEq for Numeric {
    /// Exact values compare by value; approximate ones by bit pattern.
    fn eq(&self, other: &Numeric) -> bool {
        match (self, other) {
            (Numeric::Exact(a), Numeric::Exact(b)) => a == b,
            (Numeric::Approx { value: a, .. }, Numeric::Approx { value: b, .. }) => {
                a.cmp(b) == Some(0)
            }
            _ => false,
        }
    }
}

impl From<BigRational> for Numeric {
    fn from(q: BigRational) -> Numeric {
        Numeric::Exact(q)
    }
}

impl From<i64> for Numeric {
    fn from(n: i64) -> Numeric {
        Numeric::from_i64(n)
    }
}

impl From<BigInt> for Numeric {
    fn from(n: BigInt) -> Numeric {
        Numeric::Exact(BigRational::from_integer(n))
    }
}
