//! Escherian numbers and their complex completion.
//!
//! A value is stored as `re + i·πe·t`: the imaginary part is kept as the
//! coefficient `t` of `iπe`, reduced into `[0, 2)`. Reals have `t = 0`,
//! stigmareals `t = 1`, everything else is a general complex value.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{EscherError, Result};
use crate::scalar::{ExactScalar, PrecisionConfig};

/// Precision used to reduce imaginary coefficients that depend on `P`.
///
/// Only consulted when `t` is not a plain rational; the reduction is exact
/// in every other case.
pub(crate) const REDUCE_CFG: PrecisionConfig =
    PrecisionConfig::from_parts_unchecked(128, 1 << 16, 256);

/// A number `re + iπe·t` with `t ∈ [0, 2)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CxE {
    re: ExactScalar,
    im: ExactScalar,
}

/// Outcome of the pseudoorder comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PseudoCmp {
    PseudoLess,
    PseudoEqual,
    PseudoGreater,
}

impl PseudoCmp {
    pub fn reverse(self) -> PseudoCmp {
        match self {
            PseudoCmp::PseudoLess => PseudoCmp::PseudoGreater,
            PseudoCmp::PseudoEqual => PseudoCmp::PseudoEqual,
            PseudoCmp::PseudoGreater => PseudoCmp::PseudoLess,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            PseudoCmp::PseudoLess => "<~",
            PseudoCmp::PseudoEqual => "=~",
            PseudoCmp::PseudoGreater => ">~",
        }
    }
}

impl fmt::Display for PseudoCmp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

fn reduce_mod2(t: &ExactScalar, cfg: &PrecisionConfig) -> Result<ExactScalar> {
    if let Some(q) = t.as_rational() {
        let zero = BigRational::zero();
        let two = BigRational::from_integer(BigInt::from(2));
        if q >= zero && q < two {
            return Ok(t.clone());
        }
    }
    Ok(t.floor_half_band(cfg)?.1)
}

impl CxE {
    /// Builds a value, reducing `im` into `[0, 2)`.
    pub fn new(re: ExactScalar, im: ExactScalar) -> Result<CxE> {
        Self::new_with(re, im, &REDUCE_CFG)
    }

    pub fn new_with(re: ExactScalar, im: ExactScalar, cfg: &PrecisionConfig) -> Result<CxE> {
        let im = reduce_mod2(&im, cfg)?;
        Ok(CxE { re, im })
    }

    /// Rational parts never need numeric work.
    pub fn from_rationals(re: BigRational, im: BigRational) -> CxE {
        let two = BigRational::from_integer(BigInt::from(2));
        let k = (&im / &two).floor();
        CxE {
            re: ExactScalar::from_rational(re),
            im: ExactScalar::from_rational(im - two * k),
        }
    }

    /// Unreduced constructor for deliberately broken arithmetic in mutation
    /// tests. Values built here may violate the `[0, 2)` invariant.
    #[doc(hidden)]
    pub fn from_parts_unreduced(re: ExactScalar, im: ExactScalar) -> CxE {
        CxE { re, im }
    }

    pub fn real(re: ExactScalar) -> CxE {
        CxE {
            re,
            im: ExactScalar::zero(),
        }
    }

    pub fn stigmareal(re: ExactScalar) -> CxE {
        CxE {
            re,
            im: ExactScalar::one(),
        }
    }

    pub fn integer(n: i64) -> CxE {
        CxE::real(ExactScalar::from_integer(n))
    }

    pub fn rational(q: BigRational) -> CxE {
        CxE::real(ExactScalar::from_rational(q))
    }

    pub fn zero() -> CxE {
        CxE::integer(0)
    }

    pub fn one() -> CxE {
        CxE::integer(1)
    }

    pub fn re(&self) -> &ExactScalar {
        &self.re
    }

    /// Coefficient of `iπe`, in `[0, 2)`.
    pub fn im(&self) -> &ExactScalar {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_stigmareal(&self) -> bool {
        self.im.is_one()
    }

    pub fn is_escherian(&self) -> bool {
        self.is_real() || self.is_stigmareal()
    }

    /// Real part as a rational when `self` is a real with no `P` term.
    pub fn as_real_rational(&self) -> Option<BigRational> {
        if self.is_real() {
            self.re.as_rational()
        } else {
            None
        }
    }

    /// `ς x`: shifts the imaginary coefficient by one half-band.
    pub fn stigma(&self) -> Result<CxE> {
        CxE::new(self.re.clone(), &self.im + &ExactScalar::one())
    }

    /// `∤x∤`: strips the stigma mark. Defined on Escherian numbers only.
    pub fn stigmamodulo(&self) -> Result<CxE> {
        if !self.is_escherian() {
            return Err(EscherError::NotEscherian(self.to_string()));
        }
        Ok(CxE::real(self.re.clone()))
    }
}

/// `ς x`.
pub fn stigma(x: &CxE) -> Result<CxE> {
    x.stigma()
}

/// `∤x∤`.
pub fn stigmamodulo(x: &CxE) -> Result<CxE> {
    x.stigmamodulo()
}

/// Non-transitive comparison of `d` against `f`.
///
/// The difference of imaginary coefficients is taken in `(−1, 1]`, i.e. in
/// the band of height `2πe` centred on `f`. `d` is pseudoequal to `f` only at
/// `f` itself and at `ςf`.
pub fn pseudo_cmp(d: &CxE, f: &CxE, cfg: &PrecisionConfig) -> Result<PseudoCmp> {
    let dr = &d.re - &f.re;
    let one = ExactScalar::one();
    let mut dt = reduce_mod2(&(&d.im - &f.im), cfg)?;
    if dt.cmp_numeric(&one, cfg)? == Ordering::Greater {
        dt = &dt - &ExactScalar::from_integer(2);
    }
    if dr.is_zero() && (dt.is_zero() || dt.is_one()) {
        return Ok(PseudoCmp::PseudoEqual);
    }
    let half = ExactScalar::ratio(1, 2);
    let neg_half = ExactScalar::ratio(-1, 2);
    let greater = match dr.signum(cfg)? {
        Ordering::Equal => dt.signum(cfg)? == Ordering::Less,
        Ordering::Greater => {
            dt.cmp_numeric(&neg_half, cfg)? != Ordering::Less
                && dt.cmp_numeric(&half, cfg)? == Ordering::Less
        }
        Ordering::Less => {
            let less = dt.cmp_numeric(&neg_half, cfg)? == Ordering::Greater
                && dt.cmp_numeric(&half, cfg)? != Ordering::Greater;
            !less
        }
    };
    Ok(if greater {
        PseudoCmp::PseudoGreater
    } else {
        PseudoCmp::PseudoLess
    })
}

/// Cell classification in a region plot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    Major,
    Minor,
    Equal,
}

impl From<PseudoCmp> for Region {
    fn from(c: PseudoCmp) -> Region {
        match c {
            PseudoCmp::PseudoGreater => Region::Major,
            PseudoCmp::PseudoLess => Region::Minor,
            PseudoCmp::PseudoEqual => Region::Equal,
        }
    }
}

/// Rectangle of the `(re, t)` plane; `t` is in units of `πe`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub re_min: BigRational,
    pub re_max: BigRational,
    pub t_min: BigRational,
    pub t_max: BigRational,
}

impl Window {
    pub fn new(
        re_min: BigRational,
        re_max: BigRational,
        t_min: BigRational,
        t_max: BigRational,
    ) -> Result<Window> {
        if re_min >= re_max || t_min >= t_max {
            return Err(EscherError::Domain(
                "window bounds must be increasing".into(),
            ));
        }
        Ok(Window {
            re_min,
            re_max,
            t_min,
            t_max,
        })
    }

    pub fn from_ints(re_min: i64, re_max: i64, t_min: i64, t_max: i64) -> Result<Window> {
        let q = |n: i64| BigRational::from_integer(n.into());
        Window::new(q(re_min), q(re_max), q(t_min), q(t_max))
    }

    /// Translates the window vertically by `dt` half-bands.
    pub fn shifted_t(&self, dt: &BigRational) -> Window {
        Window {
            re_min: self.re_min.clone(),
            re_max: self.re_max.clone(),
            t_min: &self.t_min + dt,
            t_max: &self.t_max + dt,
        }
    }

    fn column_span(&self, i: usize, width: usize) -> (BigRational, BigRational) {
        let step = (&self.re_max - &self.re_min) / BigRational::from_integer(width.into());
        let lo = &self.re_min + &step * BigRational::from_integer(i.into());
        (lo.clone(), lo + step)
    }

    /// Row 0 is the top of the picture (largest `t`).
    fn row_span(&self, row: usize, height: usize) -> (BigRational, BigRational) {
        let j = height - 1 - row;
        let step = (&self.t_max - &self.t_min) / BigRational::from_integer(height.into());
        let lo = &self.t_min + &step * BigRational::from_integer(j.into());
        (lo.clone(), lo + step)
    }
}

/// Row-major grid of classifications, row 0 at the top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionGrid {
    pub width: usize,
    pub height: usize,
    pub cells: Vec<Region>,
}

impl RegionGrid {
    pub fn get(&self, col: usize, row: usize) -> Region {
        self.cells[row * self.width + col]
    }
}

fn midpoint(span: &(BigRational, BigRational)) -> BigRational {
    (&span.0 + &span.1) / BigRational::from_integer(2.into())
}

/// Classifies the centre of each cell of `window` against `f`.
pub fn classify_region(
    f: &CxE,
    window: &Window,
    resolution: (usize, usize),
    cfg: &PrecisionConfig,
) -> Result<RegionGrid> {
    let (width, height) = resolution;
    if width == 0 || height == 0 {
        return Err(EscherError::Domain(
            "resolution must be at least 1x1".into(),
        ));
    }
    let mut cells = Vec::with_capacity(width * height);
    for row in 0..height {
        let t = midpoint(&window.row_span(row, height));
        for col in 0..width {
            let re = midpoint(&window.column_span(col, width));
            let d = CxE::from_rationals(re, t.clone());
            cells.push(pseudo_cmp(&d, f, cfg)?.into());
        }
    }
    Ok(RegionGrid {
        width,
        height,
        cells,
    })
}

/// Whether some `x + n` (integer `n`) lies in `[lo, hi)`.
fn hits_lattice(
    x: &ExactScalar,
    lo: &BigRational,
    hi: &BigRational,
    cfg: &PrecisionConfig,
) -> Result<bool> {
    // smallest n with x + n >= lo is n = -floor(x - lo)
    let shift = x - &ExactScalar::from_rational(lo.clone());
    let n = -shift.floor(cfg)?;
    let candidate = x + &ExactScalar::from_bigint(n);
    Ok(candidate.cmp_numeric(&ExactScalar::from_rational(hi.clone()), cfg)? == Ordering::Less)
}

/// Cells of the grid that contain `f` or `ςf` (or their `2πe` translates).
pub fn pseudoequal_cells(
    f: &CxE,
    window: &Window,
    resolution: (usize, usize),
    cfg: &PrecisionConfig,
) -> Result<Vec<(usize, usize)>> {
    let (width, height) = resolution;
    let mut out = Vec::new();
    let mut cols = Vec::new();
    for col in 0..width {
        let (lo, hi) = window.column_span(col, width);
        let re_lo = ExactScalar::from_rational(lo);
        let re_hi = ExactScalar::from_rational(hi);
        if f.re.cmp_numeric(&re_lo, cfg)? != Ordering::Less
            && f.re.cmp_numeric(&re_hi, cfg)? == Ordering::Less
        {
            cols.push(col);
        }
    }
    if cols.is_empty() {
        return Ok(out);
    }
    for row in 0..height {
        let (lo, hi) = window.row_span(row, height);
        if hits_lattice(&f.im, &lo, &hi, cfg)? {
            out.extend(cols.iter().map(|&c| (c, row)));
        }
    }
    Ok(out)
}

/// Rows containing an edge of the `2πe` band centred on `f`, i.e. some
/// `t ≡ f.t + 1 (mod 2)`.
pub fn band_edge_rows(
    f: &CxE,
    window: &Window,
    height: usize,
    cfg: &PrecisionConfig,
) -> Result<Vec<usize>> {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let edge = (&f.im + &ExactScalar::one()).scale(&half);
    let mut rows = Vec::new();
    for row in 0..height {
        let (lo, hi) = window.row_span(row, height);
        // edge/2 + n in [lo/2, hi/2)  <=>  edge + 2n in [lo, hi)
        if hits_lattice(&edge, &(&lo * &half), &(&hi * &half), cfg)? {
            rows.push(row);
        }
    }
    Ok(rows)
}

impl fmt::Display for CxE {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_real() {
            write!(f, "{}", self.re)
        } else if self.is_stigmareal() {
            write!(f, "s({})", self.re)
        } else {
            write!(f, "cx({}; {})", self.re, self.im)
        }
    }
}

impl fmt::Debug for CxE {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CxE({self})")
    }
}

impl FromStr for CxE {
    type Err = EscherError;

    /// Accepts `4`, `s(4)`, `cx(2; 1/3)` with parts in the scalar canon.
    fn from_str(s: &str) -> Result<CxE> {
        let t = s.trim();
        if let Some(inner) = t.strip_prefix("s(").and_then(|r| r.strip_suffix(')')) {
            return Ok(CxE::stigmareal(inner.parse()?));
        }
        if let Some(inner) = t.strip_prefix("cx(").and_then(|r| r.strip_suffix(')')) {
            let (re, im) = inner.split_once(';').ok_or_else(|| EscherError::Syntax {
                pos: 3,
                msg: "expected `;` in cx(re; t)".into(),
            })?;
            return CxE::new(re.parse()?, im.parse()?);
        }
        Ok(CxE::real(t.parse()?))
    }
}

impl From<i64> for CxE {
    fn from(n: i64) -> CxE {
        CxE::integer(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use PseudoCmp::*;

    fn c(s: &str) -> CxE {
        s.parse().unwrap()
    }

    fn cmp(d: &str, f: &str) -> PseudoCmp {
        pseudo_cmp(&c(d), &c(f), &PrecisionConfig::default()).unwrap()
    }

    #[test]
    fn stigma_examples() {
        assert_eq!(c("4").stigma().unwrap(), c("s(4)"));
        assert_eq!(c("s(4)").stigma().unwrap(), c("4"));
        assert_eq!(c("cx(0; 1/2)").stigma().unwrap(), c("cx(0; 3/2)"));
    }

    #[test]
    fn stigmamodulo_examples() {
        assert_eq!(c("s(7)").stigmamodulo().unwrap(), c("7"));
        assert_eq!(c("7").stigmamodulo().unwrap(), c("7"));
        assert!(matches!(
            c("cx(1; 1/3)").stigmamodulo(),
            Err(EscherError::NotEscherian(_))
        ));
    }

    #[test]
    fn pseudo_cmp_examples() {
        assert_eq!(cmp("5", "2"), PseudoGreater);
        assert_eq!(cmp("s(2)", "5"), PseudoGreater);
        assert_eq!(cmp("s(3)", "3"), PseudoEqual);
        assert_eq!(cmp("cx(0; 1/4)", "0"), PseudoLess);
        assert_eq!(cmp("cx(0; 7/4)", "0"), PseudoGreater);
    }

    #[test]
    fn escher_cycle() {
        // a < b  ⇒  a ≺ b ≺ ςa ≺ ςb ≺ a
        let seq = ["2", "5", "s(2)", "s(5)", "2"];
        for w in seq.windows(2) {
            assert_eq!(cmp(w[0], w[1]), PseudoLess, "{} vs {}", w[0], w[1]);
        }
    }

    #[test]
    fn band_boundaries_follow_half_open_rule() {
        // Δr > 0: greater on [−1/2, 1/2)
        assert_eq!(cmp("cx(1; 3/2)", "0"), PseudoGreater);
        assert_eq!(cmp("cx(1; 1/2)", "0"), PseudoLess);
        // Δr < 0: less on (−1/2, 1/2]
        assert_eq!(cmp("cx(-1; 1/2)", "0"), PseudoLess);
        assert_eq!(cmp("cx(-1; 3/2)", "0"), PseudoGreater);
    }

    #[test]
    fn p_valued_parts_compare_numerically() {
        // 1 − P ≈ −71.9
        assert_eq!(cmp("1 - PE2", "-71"), PseudoLess);
        assert_eq!(cmp("1 - PE2", "-72"), PseudoGreater);
    }

    #[test]
    fn reduce_handles_p_valued_imaginary_part() {
        // P/10 ≈ 7.29 → reduced to P/10 − 6 ≈ 1.29
        let x = CxE::new(ExactScalar::zero(), "1/10*PE2".parse().unwrap()).unwrap();
        assert_eq!(x.im(), &"-6 + 1/10*PE2".parse::<ExactScalar>().unwrap());
    }

    #[test]
    fn display_and_parse() {
        for text in ["4", "s(4)", "cx(2; 1/3)", "s(1 - 1*PE2)", "-3/2"] {
            assert_eq!(c(text).to_string(), text);
        }
        assert_eq!(c("cx(2; 3)"), c("s(2)"));
    }

    #[test]
    fn classify_examples() {
        let cfg = PrecisionConfig::default();
        let single = |re: (i64, i64), t: (i64, i64)| {
            let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
            Window::new(q(re.0, 2), q(re.1, 2), q(t.0, 2), q(t.1, 2)).unwrap()
        };
        // one cell centred at (0, 1)
        let g = classify_region(&c("0"), &single((-1, 1), (1, 3)), (1, 1), &cfg).unwrap();
        assert_eq!(g.cells, vec![Region::Equal]);
        // one cell centred at (1, 0)
        let g = classify_region(&c("0"), &single((1, 3), (-1, 1)), (1, 1), &cfg).unwrap();
        assert_eq!(g.cells, vec![Region::Major]);
        assert!(classify_region(&c("0"), &single((1, 3), (-1, 1)), (0, 1), &cfg).is_err());
    }

    #[test]
    fn pseudoequal_cells_hit_f_and_stigma_f() {
        let cfg = PrecisionConfig::default();
        let w = Window::from_ints(-3, 3, 0, 2).unwrap();
        let cells = pseudoequal_cells(&c("0"), &w, (64, 64), &cfg).unwrap();
        // re = 0 starts column 32; t = 1 starts row 31 from the top, t = 0 is the bottom row
        assert_eq!(cells, vec![(32, 31), (32, 63)]);
        let rows = band_edge_rows(&c("0"), &w, 64, &cfg).unwrap();
        assert_eq!(rows, vec![31]);
    }
}
