//! A small expression language over Escherian values: lexer, Pratt parser,
//! evaluator and a session holding `let` bindings.
//!
//! Binding strength, loosest first: comparisons `<~ >~ =~`; `kis`/`sik`
//! (left-associative); `+ -`; `* /`; `^ ^^` (right-associative); prefix
//! `s` and `-`. Addition therefore binds tighter than incrementation, so
//! `7 - 3 kis 2` is `(7 - 3) kis 2`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::ackermann::{ackermann, ackermann_mod};
use crate::arith::{add, div_by_rational, mul, negate, sub};
use crate::bounds;
use crate::cxe::{pseudo_cmp, CxE, PseudoCmp};
use crate::error::{EscherError, Result};
use crate::hyper::{hyper_apply, hyper_linv, hyper_rinv, iter_left, iter_right, HyperRank};
use crate::numeric::Numeric;
use crate::rank0::{kis, sik, zeration_reference, ValueSet};
use crate::scalar::{parse_rational, ExactScalar, PrecisionConfig, PE2};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(&'static str),
}

const SYMBOLS: [&str; 14] = [
    "<~", ">~", "=~", "^^", "+", "-", "*", "/", "^", "(", ")", ",", ";", "=",
];

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            out.push((start, Tok::Num(text[start..i].to_string())));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &text[start..i];
            // `s3` is the stigma of 3
            if word.len() > 1
                && word.starts_with('s')
                && word[1..].bytes().all(|b| b.is_ascii_digit())
            {
                out.push((start, Tok::Ident("s".into())));
                out.push((start + 1, Tok::Num(word[1..].to_string())));
            } else {
                out.push((start, Tok::Ident(word.to_string())));
            }
            continue;
        }
        match SYMBOLS.iter().find(|s| text[i..].starts_with(**s)) {
            Some(s) => {
                out.push((i, Tok::Sym(s)));
                i += s.len();
            }
            None => {
                return Err(EscherError::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Kis,
    Sik,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Tet,
}

impl BinOp {
    fn name(self) -> &'static str {
        match self {
            BinOp::Kis => "kis",
            BinOp::Sik => "sik",
            BinOp::Add => "add",
            BinOp::Sub => "sub",
            BinOp::Mul => "mul",
            BinOp::Div => "div",
            BinOp::Pow => "pow",
            BinOp::Tet => "tet",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Less,
    Greater,
    Equal,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(BigRational),
    Pe2,
    Var(String),
    Neg(Box<Expr>),
    Stigma(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Cmp(CmpOp, Box<Expr>, Box<Expr>),
    Call(String, Vec<Expr>),
    /// Explicit parentheses; kept so chains can be told apart from groups.
    Group(Box<Expr>),
}

/// Prefix form, with groups dropped: `kis(sub(7, 3), 2)`.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(q) if q.is_integer() => write!(f, "{}", q.to_integer()),
            Expr::Num(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Expr::Pe2 => f.write_str(PE2),
            Expr::Var(v) => f.write_str(v),
            Expr::Neg(x) => write!(f, "neg({x})"),
            Expr::Stigma(x) => write!(f, "s({x})"),
            Expr::Bin(op, x, y) => write!(f, "{}({x}, {y})", op.name()),
            Expr::Cmp(op, x, y) => {
                let name = match op {
                    CmpOp::Less => "pless",
                    CmpOp::Greater => "pgreater",
                    CmpOp::Equal => "pequal",
                };
                write!(f, "{name}({x}, {y})")
            }
            Expr::Call(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Expr::Group(x) => write!(f, "{x}"),
        }
    }
}

const FUNCTIONS: [(&str, usize); 11] = [
    ("sm", 1),
    ("alts", 1),
    ("cx", 2),
    ("root", 2),
    ("log", 2),
    ("zer", 2),
    ("ack", 2),
    ("ackp", 2),
    ("hyper", 3),
    ("iterl", 3),
    ("iterr", 3),
];

const RESERVED: [&str; 5] = ["s", "kis", "sik", "let", "PE2"];

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    warnings: Vec<String>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(EscherError::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, sym: &str) -> Result<()> {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected `{sym}`"))
        }
    }

    /// Binding power and operator of the next infix token.
    fn infix(&self) -> Option<(u8, Infix)> {
        match self.peek()? {
            Tok::Sym("<~") => Some((1, Infix::Cmp(CmpOp::Less))),
            Tok::Sym(">~") => Some((1, Infix::Cmp(CmpOp::Greater))),
            Tok::Sym("=~") => Some((1, Infix::Cmp(CmpOp::Equal))),
            Tok::Ident(w) if w == "kis" => Some((2, Infix::Bin(BinOp::Kis))),
            Tok::Ident(w) if w == "sik" => Some((2, Infix::Bin(BinOp::Sik))),
            Tok::Sym("+") => Some((3, Infix::Bin(BinOp::Add))),
            Tok::Sym("-") => Some((3, Infix::Bin(BinOp::Sub))),
            Tok::Sym("*") => Some((4, Infix::Bin(BinOp::Mul))),
            Tok::Sym("/") => Some((4, Infix::Bin(BinOp::Div))),
            Tok::Sym("^") => Some((5, Infix::Bin(BinOp::Pow))),
            Tok::Sym("^^") => Some((5, Infix::Bin(BinOp::Tet))),
            _ => None,
        }
    }

    fn expr(&mut self, min_bp: u8) -> Result<Expr> {
        let mut lhs = self.prefix()?;
        while let Some((bp, op)) = self.infix() {
            if bp < min_bp {
                break;
            }
            let at = self.offset();
            self.pos += 1;
            // right-associative powers recurse at the same level
            let next = if bp == 5 { bp } else { bp + 1 };
            let rhs = self.expr(next)?;
            lhs = match op {
                Infix::Cmp(c) => Expr::Cmp(c, Box::new(lhs), Box::new(rhs)),
                Infix::Bin(b) => {
                    if matches!(b, BinOp::Kis | BinOp::Sik)
                        && matches!(lhs, Expr::Bin(BinOp::Kis | BinOp::Sik, _, _))
                    {
                        self.warnings.push(format!(
                            "at {at}: kis/sik is not associative; the chain groups to the left"
                        ));
                    }
                    Expr::Bin(b, Box::new(lhs), Box::new(rhs))
                }
            };
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Expr> {
        let Some((_, tok)) = self.toks.get(self.pos).cloned() else {
            return self.error("unexpected end of input");
        };
        self.pos += 1;
        match tok {
            Tok::Num(text) => {
                parse_rational(&text)
                    .map(Expr::Num)
                    .map_err(|_| EscherError::Syntax {
                        pos: self.toks[self.pos - 1].0,
                        msg: format!("bad number `{text}`"),
                    })
            }
            Tok::Sym("-") => Ok(Expr::Neg(Box::new(self.expr(6)?))),
            Tok::Sym("(") => {
                let inner = self.expr(0)?;
                self.expect(")")?;
                Ok(Expr::Group(Box::new(inner)))
            }
            Tok::Ident(w) if w == "s" => Ok(Expr::Stigma(Box::new(self.expr(6)?))),
            Tok::Ident(w) if w == PE2 => Ok(Expr::Pe2),
            Tok::Ident(w) => {
                if let Some((name, arity)) = FUNCTIONS.iter().find(|(n, _)| *n == w) {
                    self.call(name, *arity)
                } else if RESERVED.contains(&w.as_str()) {
                    self.pos -= 1;
                    self.error(format!("unexpected `{w}`"))
                } else {
                    Ok(Expr::Var(w))
                }
            }
            Tok::Sym(s) => {
                self.pos -= 1;
                self.error(format!("unexpected `{s}`"))
            }
        }
    }

    fn call(&mut self, name: &str, arity: usize) -> Result<Expr> {
        self.expect("(")?;
        let sep = if name == "cx" { ";" } else { "," };
        let mut args = Vec::with_capacity(arity);
        for i in 0..arity {
            if i > 0 {
                self.expect(sep)?;
            }
            args.push(self.expr(0)?);
        }
        self.expect(")")?;
        Ok(Expr::Call(name.to_string(), args))
    }
}

#[derive(Debug, Clone, Copy)]
enum Infix {
    Bin(BinOp),
    Cmp(CmpOp),
}

/// Parses an expression and collects warnings about ambiguous chains.
pub fn parse_with_warnings(text: &str) -> Result<(Expr, Vec<String>)> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        warnings: Vec::new(),
    };
    let e = p.expr(0)?;
    if p.pos < p.toks.len() {
        return p.error("unexpected trailing input");
    }
    Ok((e, p.warnings))
}

pub fn parse(text: &str) -> Result<Expr> {
    parse_with_warnings(text).map(|(e, _)| e)
}

/// Result of evaluating an expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    /// Exact value set; `show_all` asks for every member on display.
    Exact {
        set: ValueSet,
        show_all: bool,
    },
    /// A real known only to working precision.
    Approx(Numeric),
    Bool(bool),
}

impl Value {
    fn exact(x: CxE) -> Value {
        Value::Exact {
            set: ValueSet::single(x),
            show_all: false,
        }
    }

    fn from_set(set: ValueSet) -> Value {
        Value::Exact {
            set,
            show_all: false,
        }
    }

    fn from_numeric(n: Numeric) -> Value {
        match n {
            Numeric::Exact(q) => Value::exact(CxE::rational(q)),
            approx => Value::Approx(approx),
        }
    }

    /// The principal value, when exact.
    pub fn principal(&self) -> Option<&CxE> {
        match self {
            Value::Exact { set, .. } => Some(set.principal()),
            _ => None,
        }
    }

    pub fn display(&self, digits: usize) -> String {
        match self {
            Value::Exact {
                set,
                show_all: true,
            } => set.to_string(),
            Value::Exact { set, .. } => set.principal().to_string(),
            Value::Approx(n) => n.display(digits),
            Value::Bool(b) => b.to_string(),
        }
    }
}

/// Maps ASCII output to the operator symbols `⊙ ⊘ ς`.
pub fn unicode_form(text: &str) -> String {
    text.replace("s(", "ς(")
        .replace(" kis ", " ⊙ ")
        .replace(" sik ", " ⊘ ")
}

fn cxe_to_numeric(x: &CxE, bits: usize) -> Result<Numeric> {
    if !x.is_real() {
        return Err(EscherError::NotReal(x.to_string()));
    }
    if let Some(q) = x.re().as_rational() {
        return Ok(Numeric::Exact(q));
    }
    // polynomial in P: evaluate at the midpoint of a tight enclosure
    let p = bounds::pe2(bits as u32 + 64);
    let mid = Numeric::Exact((&p.lo + &p.hi) / BigRational::from_integer(2.into()));
    let mut acc = Numeric::from_i64(0);
    for c in x.re().coeffs().iter().rev() {
        acc = acc.mul(&mid, bits)?.add(&Numeric::Exact(c.clone()), bits)?;
    }
    Numeric::approx(acc.to_float(bits), bits)
}

fn with_context(op: &str, e: EscherError) -> EscherError {
    match e {
        EscherError::Domain(m) => EscherError::Domain(format!("{op}: {m}")),
        EscherError::NotReal(m) => EscherError::NotReal(format!("{op}: {m}")),
        EscherError::NotEscherian(m) => EscherError::NotEscherian(format!("{op}: {m}")),
        EscherError::Unsupported(m) => EscherError::Unsupported(format!("{op}: {m}")),
        EscherError::ResourceLimit(m) => EscherError::ResourceLimit(format!("{op}: {m}")),
        other => other,
    }
}

/// Evaluation state: precision, display digits and `let` bindings.
#[derive(Debug, Clone)]
pub struct Session {
    pub cfg: PrecisionConfig,
    pub digits: usize,
    pub unicode: bool,
    bindings: HashMap<String, Value>,
}

/// Printed result of one line plus any parser warnings.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub value: Option<Value>,
    pub warnings: Vec<String>,
}

impl Default for Session {
    fn default() -> Self {
        Session::new(PrecisionConfig::default())
    }
}

impl Session {
    pub fn new(cfg: PrecisionConfig) -> Session {
        Session {
            cfg,
            digits: 30,
            unicode: false,
            bindings: HashMap::new(),
        }
    }

    fn bits(&self) -> usize {
        self.cfg.numeric_bits() as usize
    }

    pub fn binding(&self, name: &str) -> Option<&Value> {
        self.bindings.get(name)
    }

    /// Evaluates `expr` or `let name = expr`.
    pub fn eval_line(&mut self, line: &str) -> Result<Outcome> {
        let trimmed = line.trim();
        if let Some(rest) = trimmed.strip_prefix("let ") {
            let offset = line.len() - rest.len();
            let (name, body) = rest.split_once('=').ok_or(EscherError::Syntax {
                pos: offset,
                msg: "expected `let name = expr`".into(),
            })?;
            let name = name.trim();
            let valid = !name.is_empty()
                && name
                    .chars()
                    .next()
                    .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                && !RESERVED.contains(&name)
                && !FUNCTIONS.iter().any(|(f, _)| *f == name)
                && !(name.starts_with('s') && name[1..].chars().all(|c| c.is_ascii_digit()));
            if !valid {
                return Err(EscherError::Syntax {
                    pos: offset,
                    msg: format!("`{name}` cannot be bound"),
                });
            }
            let (expr, warnings) = parse_with_warnings(body)
                .map_err(|e| shift(e, offset + rest.find('=').unwrap_or(0) + 1))?;
            let v = self.eval(&expr)?;
            let text = format!("{name} = {}", self.render(&v));
            self.bindings.insert(name.to_string(), v.clone());
            return Ok(Outcome {
                text,
                value: Some(v),
                warnings,
            });
        }
        let (expr, warnings) = parse_with_warnings(line)?;
        let v = self.eval(&expr)?;
        Ok(Outcome {
            text: self.render(&v),
            value: Some(v),
            warnings,
        })
    }

    pub fn render(&self, v: &Value) -> String {
        let s = v.display(self.digits);
        if self.unicode {
            unicode_form(&s)
        } else {
            s
        }
    }

    pub fn eval(&self, e: &Expr) -> Result<Value> {
        match e {
            Expr::Num(q) => Ok(Value::exact(CxE::rational(q.clone()))),
            Expr::Pe2 => Ok(Value::exact(CxE::real(ExactScalar::pe2()))),
            Expr::Var(v) => self
                .bindings
                .get(v)
                .cloned()
                .map(|v| match v {
                    Value::Exact { set, .. } => Value::from_set(set),
                    other => other,
                })
                .ok_or_else(|| EscherError::Domain(format!("unbound name `{v}`"))),
            Expr::Group(x) => self.eval(x),
            Expr::Neg(x) => match self.eval(x)? {
                Value::Exact { set, .. } => Ok(Value::from_set(set.map(negate)?)),
                Value::Approx(n) => Ok(Value::Approx(n.neg())),
                Value::Bool(_) => Err(EscherError::Domain("cannot negate a truth value".into())),
            },
            Expr::Stigma(x) => {
                let set = self.exact_set(&self.eval(x)?, "s")?;
                Ok(Value::from_set(set.map(CxE::stigma)?))
            }
            Expr::Bin(op, x, y) => {
                let (a, b) = (self.eval(x)?, self.eval(y)?);
                self.binary(*op, &a, &b)
                    .map_err(|e| with_context(op.name(), e))
            }
            Expr::Cmp(op, x, y) => {
                let (a, b) = (self.eval(x)?, self.eval(y)?);
                self.compare(*op, &a, &b)
            }
            Expr::Call(name, args) => {
                let vals = args
                    .iter()
                    .map(|a| self.eval(a))
                    .collect::<Result<Vec<_>>>()?;
                self.call(name, &vals).map_err(|e| with_context(name, e))
            }
        }
    }

    fn exact_set(&self, v: &Value, op: &str) -> Result<ValueSet> {
        match v {
            Value::Exact { set, .. } => Ok(set.clone()),
            Value::Approx(_) => Err(EscherError::Unsupported(format!(
                "{op} needs an exact operand"
            ))),
            Value::Bool(_) => Err(EscherError::Domain(format!("{op} of a truth value"))),
        }
    }

    fn numeric(&self, v: &Value) -> Result<Numeric> {
        match v {
            Value::Exact { set, .. } => cxe_to_numeric(set.principal(), self.bits()),
            Value::Approx(n) => Ok(n.clone()),
            Value::Bool(_) => Err(EscherError::Domain("truth value used as a number".into())),
        }
    }

    fn integer(&self, v: &Value, what: &str) -> Result<BigInt> {
        v.principal()
            .and_then(CxE::as_real_rational)
            .filter(|q| q.is_integer())
            .map(|q| q.to_integer())
            .ok_or_else(|| EscherError::Domain(format!("{what} must be an exact integer")))
    }

    fn small_integer<T: TryFrom<BigInt>>(&self, v: &Value, what: &str) -> Result<T> {
        let n = self.integer(v, what)?;
        T::try_from(n.clone())
            .map_err(|_| EscherError::ResourceLimit(format!("{what} = {n} is out of range")))
    }

    fn numeric_op(
        &self,
        a: &Value,
        b: &Value,
        f: impl FnOnce(&Numeric, &Numeric, usize) -> Result<Numeric>,
    ) -> Result<Value> {
        let x = self.numeric(a)?;
        let y = self.numeric(b)?;
        f(&x, &y, self.bits()).map(Value::from_numeric)
    }

    fn binary(&self, op: BinOp, a: &Value, b: &Value) -> Result<Value> {
        let cfg = &self.cfg;
        let both_exact = matches!((a, b), (Value::Exact { .. }, Value::Exact { .. }));
        match op {
            BinOp::Kis => {
                let (x, y) = (self.exact_set(a, "kis")?, self.exact_set(b, "kis")?);
                Ok(Value::from_set(kis(x.principal(), y.principal(), cfg)?))
            }
            BinOp::Sik => {
                let (x, y) = (self.exact_set(a, "sik")?, self.exact_set(b, "sik")?);
                Ok(Value::from_set(x.zip_with(&y, |z, w| sik(z, w, cfg))?))
            }
            BinOp::Add | BinOp::Sub | BinOp::Mul if both_exact => {
                let (x, y) = (self.exact_set(a, "")?, self.exact_set(b, "")?);
                let f = match op {
                    BinOp::Add => add,
                    BinOp::Sub => sub,
                    _ => mul,
                };
                Ok(Value::from_set(x.zip_with(&y, f)?))
            }
            BinOp::Add => self.numeric_op(a, b, |x, y, p| x.add(y, p)),
            BinOp::Sub => self.numeric_op(a, b, |x, y, p| x.sub(y, p)),
            BinOp::Mul => self.numeric_op(a, b, |x, y, p| x.mul(y, p)),
            BinOp::Div => {
                let divisor = b.principal().and_then(CxE::as_real_rational);
                match (a, divisor) {
                    (Value::Exact { set, .. }, Some(q)) => {
                        Ok(Value::from_set(divide_set(set, &q)?))
                    }
                    _ => self.numeric_op(a, b, |x, y, p| x.div(y, p)),
                }
            }
            BinOp::Pow => self.power(a, b),
            BinOp::Tet => self.numeric_op(a, b, |x, y, _| hyper_apply(HyperRank::TET, x, y, cfg)),
        }
    }

    /// Integer powers of exact values stay exact; anything else goes
    /// through the real power.
    fn power(&self, a: &Value, b: &Value) -> Result<Value> {
        let real_rational = a.principal().and_then(CxE::as_real_rational).is_some();
        if let (Value::Exact { set, .. }, false) = (a, real_rational) {
            if let Ok(k) = self.integer(b, "exponent") {
                let k = k.to_u32().filter(|k| *k <= 4096).ok_or_else(|| {
                    EscherError::Unsupported(
                        "exponent of a non-rational base must be in 0..=4096".into(),
                    )
                })?;
                return Ok(Value::from_set(set.map(|x| cxe_pow(x, k))?));
            }
        }
        let cfg = &self.cfg;
        self.numeric_op(a, b, |x, y, _| hyper_apply(HyperRank::POW, x, y, cfg))
    }

    fn compare(&self, op: CmpOp, a: &Value, b: &Value) -> Result<Value> {
        let ord = match (a, b) {
            (Value::Exact { set: x, .. }, Value::Exact { set: y, .. }) => {
                pseudo_cmp(x.principal(), y.principal(), &self.cfg)?
            }
            _ => match self.numeric(a)?.cmp_value(&self.numeric(b)?, self.bits()) {
                std::cmp::Ordering::Less => PseudoCmp::PseudoLess,
                std::cmp::Ordering::Equal => PseudoCmp::PseudoEqual,
                std::cmp::Ordering::Greater => PseudoCmp::PseudoGreater,
            },
        };
        let want = match op {
            CmpOp::Less => PseudoCmp::PseudoLess,
            CmpOp::Greater => PseudoCmp::PseudoGreater,
            CmpOp::Equal => PseudoCmp::PseudoEqual,
        };
        Ok(Value::Bool(ord == want))
    }

    fn rank(&self, v: &Value) -> Result<HyperRank> {
        HyperRank::new(self.small_integer::<u32>(v, "rank")?)
    }

    fn call(&self, name: &str, args: &[Value]) -> Result<Value> {
        let cfg = &self.cfg;
        match name {
            "sm" => Ok(Value::from_set(
                self.exact_set(&args[0], "sm")?.map(CxE::stigmamodulo)?,
            )),
            "alts" => match &args[0] {
                Value::Exact { set, .. } => Ok(Value::Exact {
                    set: set.clone(),
                    show_all: true,
                }),
                other => Ok(other.clone()),
            },
            "cx" => {
                let re = self.exact_set(&args[0], "cx")?.into_principal();
                let t = self.exact_set(&args[1], "cx")?.into_principal();
                if !re.is_real() {
                    return Err(EscherError::NotReal(format!("real part {re}")));
                }
                let t = t.as_real_rational().ok_or_else(|| {
                    EscherError::Domain(format!("imaginary coefficient {t} must be rational"))
                })?;
                Ok(Value::exact(CxE::new(
                    re.re().clone(),
                    ExactScalar::from_rational(t),
                )?))
            }
            "root" => self.numeric_op(&args[0], &args[1], |c, b, _| {
                hyper_rinv(HyperRank::POW, c, b, cfg)
            }),
            "log" => self.numeric_op(&args[0], &args[1], |a, c, _| {
                hyper_linv(HyperRank::POW, a, c, cfg)
            }),
            "zer" => {
                let (a, b) = (
                    self.exact_set(&args[0], "zer")?,
                    self.exact_set(&args[1], "zer")?,
                );
                Ok(Value::exact(zeration_reference(
                    a.principal(),
                    b.principal(),
                    cfg,
                )?))
            }
            "ack" | "ackp" => {
                let m = self.small_integer::<u32>(&args[0], "m")?;
                let n = self.small_integer::<u64>(&args[1], "n")?;
                let v = if name == "ack" {
                    ackermann(m, n)?
                } else {
                    ackermann_mod(m, n)?
                };
                Ok(Value::exact(CxE::real(ExactScalar::from_bigint(v))))
            }
            "hyper" => {
                let m = self.rank(&args[0])?;
                self.numeric_op(&args[1], &args[2], |a, b, _| hyper_apply(m, a, b, cfg))
            }
            "iterl" | "iterr" => {
                let m = self.rank(&args[0])?;
                let a = self.numeric(&args[1])?;
                let n = self.small_integer::<i64>(&args[2], "n")?;
                let r = if name == "iterl" {
                    iter_left(m, &a, n, cfg)?
                } else {
                    iter_right(m, &a, n, cfg)?
                };
                Ok(Value::from_numeric(r))
            }
            other => Err(EscherError::Domain(format!("unknown function `{other}`"))),
        }
    }
}

fn shift(e: EscherError, by: usize) -> EscherError {
    match e {
        EscherError::Syntax { pos, msg } => EscherError::Syntax { pos: pos + by, msg },
        other => other,
    }
}

/// All quotients of every member; the principal is the principal quotient
/// of the principal.
fn divide_set(set: &ValueSet, q: &BigRational) -> Result<ValueSet> {
    let head = div_by_rational(set.principal(), q)?;
    let principal = head.principal().clone();
    let mut rest: Vec<CxE> = head.alternates().to_vec();
    for m in set.alternates() {
        rest.extend(div_by_rational(m, q)?.members().cloned());
    }
    Ok(ValueSet::new(principal, rest))
}

fn cxe_pow(x: &CxE, k: u32) -> Result<CxE> {
    let mut acc = CxE::one();
    let mut base = x.clone();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            acc = mul(&acc, &base)?;
        }
        k >>= 1;
        if k > 0 {
            base = mul(&base, &base)?;
        }
    }
    Ok(acc)
}
