//! Exact scalar coefficients: rationals times monomials in named parameters
//! and square-root symbols, with Laurent exponents reserved for a designated
//! contraction scale.
//!
//! Every `Scalar` is kept in a canonical normal form at all times: no zero
//! coefficients, no zero exponents, and every radical symbol appearing with
//! exponent exactly one (even powers are rewritten through the radical's
//! defining square). Equality of normal forms is therefore structural
//! equality, which is what the rest of the crate relies on when it asserts
//! that two tensors agree exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

pub type Rat = BigRational;

/// Convenience constructor for an exact rational.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum CoeffError {
    #[error("cannot invert a sum: {0}")]
    InverseOfSum(String),
    #[error("unbound symbol: {0}")]
    UnboundSymbol(String),
    #[error("negative radicand: sqrt({0}) evaluated below zero")]
    NegativeRadicand(String),
    #[error("divergent contraction limit: term {0} keeps a negative scale exponent")]
    Divergent(String),
    #[error("radicand must be a single product term, got: {0}")]
    RadicandNotMonomial(String),
    #[error("radicand may not contain radicals: {0}")]
    NestedRadical(String),
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
#[error("scalar parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

/// A symbol occurring in a monomial. Radicals are identified by their
/// radicand, so two radicals over equal radicands are the same symbol and
/// `sqrt(m)^2` rewrites to `m` without any global registry.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sym {
    Param(String),
    /// Square root of a canonical single-term, radical-free scalar.
    Sqrt(Box<Scalar>),
}

impl Sym {
    fn is_radical(&self) -> bool {
        matches!(self, Sym::Sqrt(_))
    }
}

/// Product of symbol powers. Radical symbols carry exponent one only;
/// parameters may carry any nonzero integer exponent.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Monomial {
    exps: BTreeMap<Sym, i64>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponent(&self, s: &Sym) -> i64 {
        self.exps.get(s).copied().unwrap_or(0)
    }

    pub fn symbols(&self) -> impl Iterator<Item = (&Sym, i64)> {
        self.exps.iter().map(|(s, &e)| (s, e))
    }

    /// Rewrites even (and negative) radical powers through the defining
    /// squares, returning the canonical monomial and the rational carry the
    /// rewrite produced.
    fn normalize_raw(raw: BTreeMap<Sym, i64>) -> (Monomial, Rat) {
        let mut carry = Rat::one();
        let mut params: BTreeMap<Sym, i64> = BTreeMap::new();
        let mut radicals: Vec<(Scalar, i64)> = Vec::new();
        for (sym, e) in raw {
            if e == 0 {
                continue;
            }
            match sym {
                Sym::Param(_) => {
                    *params.entry(sym).or_insert(0) += e;
                }
                Sym::Sqrt(rad) => radicals.push((*rad, e)),
            }
        }
        for (rad, e) in radicals {
            let keep = e.rem_euclid(2);
            let half = e.div_euclid(2);
            if half != 0 {
                // rad is single-term and radical-free; raise it to `half`.
                let (c, m) = rad.single_term().expect("canonical radicand");
                carry *= rat_pow(c, half);
                for (s, pe) in m.exps.iter() {
                    *params.entry(s.clone()).or_insert(0) += pe * half;
                }
            }
            if keep == 1 {
                *params.entry(Sym::Sqrt(Box::new(rad))).or_insert(0) += 1;
            }
        }
        params.retain(|_, e| *e != 0);
        (Monomial { exps: params }, carry)
    }

    fn mul(&self, other: &Monomial) -> (Monomial, Rat) {
        let mut raw = self.exps.clone();
        for (s, e) in &other.exps {
            *raw.entry(s.clone()).or_insert(0) += e;
        }
        Monomial::normalize_raw(raw)
    }

    fn inverse(&self) -> (Monomial, Rat) {
        let raw = self.exps.iter().map(|(s, e)| (s.clone(), -e)).collect();
        Monomial::normalize_raw(raw)
    }
}

fn rat_pow(base: &Rat, e: i64) -> Rat {
    if e == 0 {
        return Rat::one();
    }
    let p = base.pow(e.unsigned_abs().min(i32::MAX as u64) as i32);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

/// Exact scalar: a finite sum of rational multiples of monomials.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Scalar {
    terms: BTreeMap<Monomial, Rat>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rat(rat(n, 1))
    }

    pub fn from_rat(r: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(Monomial::one(), r);
        }
        Scalar { terms }
    }

    pub fn rational(num: i64, den: i64) -> Self {
        Scalar::from_rat(rat(num, den))
    }

    pub fn param(name: &str) -> Self {
        let mut exps = BTreeMap::new();
        exps.insert(Sym::Param(name.to_string()), 1);
        let mut terms = BTreeMap::new();
        terms.insert(Monomial { exps }, Rat::one());
        Scalar { terms }
    }

    /// Square root of a single-term, radical-free scalar. Perfect-square
    /// rational factors and even parameter powers are pulled out of the
    /// radicand, so e.g. the root of `4*lambda^2` collapses to `2*lambda`
    /// and the root of `1/2` becomes `1/2 * sqrt(2)`.
    pub fn sqrt_of(rad: &Scalar) -> Result<Scalar, CoeffError> {
        if rad.is_zero() {
            return Ok(Scalar::zero());
        }
        let (coeff, mono) = rad
            .single_term()
            .ok_or_else(|| CoeffError::RadicandNotMonomial(rad.to_string()))?;
        if mono.exps.keys().any(|s| s.is_radical()) {
            return Err(CoeffError::NestedRadical(rad.to_string()));
        }
        // sqrt(p/q) = sqrt(p*q)/q: make the radicand an integer.
        let mut outer = Rat::new(BigInt::one(), coeff.denom().clone());
        let mut inner = coeff.numer() * coeff.denom();
        // Pull out perfect-square integer divisors.
        let mut d = BigInt::from(2);
        loop {
            let dd = &d * &d;
            if &dd > &inner.abs() {
                break;
            }
            while (&inner % &dd).is_zero() {
                inner /= &dd;
                outer *= Rat::from(d.clone());
            }
            d += 1;
        }
        // Even parameter powers move outside the root; odd ones leave a
        // single power inside.
        let mut inner_exps: BTreeMap<Sym, i64> = BTreeMap::new();
        let mut outside: BTreeMap<Sym, i64> = BTreeMap::new();
        for (s, e) in mono.exps.iter() {
            if e.rem_euclid(2) == 1 {
                inner_exps.insert(s.clone(), 1);
            }
            let half = e.div_euclid(2);
            if half != 0 {
                outside.insert(s.clone(), half);
            }
        }
        let inner_is_one = inner.is_one() && inner_exps.is_empty();
        if !inner_is_one {
            let mut rad_terms = BTreeMap::new();
            rad_terms.insert(Monomial { exps: inner_exps }, Rat::from(inner));
            let radicand = Scalar { terms: rad_terms };
            outside.insert(Sym::Sqrt(Box::new(radicand)), 1);
        }
        let (m, carry) = Monomial::normalize_raw(outside);
        let mut terms = BTreeMap::new();
        let c = outer * carry;
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Ok(Scalar { terms })
    }

    /// `sqrt(n)` for an integer radicand.
    pub fn sqrt_int(n: i64) -> Scalar {
        Scalar::sqrt_of(&Scalar::from_int(n)).expect("integer radicand")
    }

    /// `sqrt(p)` for a parameter radicand, optionally negated.
    pub fn sqrt_param(name: &str, negated: bool) -> Scalar {
        let mut rad = Scalar::param(name);
        if negated {
            rad = -&rad;
        }
        Scalar::sqrt_of(&rad).expect("parameter radicand")
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().map(|r| r.is_one()).unwrap_or(false)
    }

    /// Some(coeff, monomial) when the scalar has exactly one term.
    pub fn single_term(&self) -> Option<(&Rat, &Monomial)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (c, m))
        } else {
            None
        }
    }

    /// The rational value when the scalar is a pure rational.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        match self.single_term() {
            Some((c, m)) if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Idempotent canonicalization. The arithmetic in this module maintains
    /// the normal form, so this re-derives it from the raw term list and is
    /// exposed mainly so that tests can state idempotence directly.
    pub fn normalize(&self) -> Scalar {
        let mut out = Scalar::zero();
        for (m, c) in &self.terms {
            let (mm, carry) = Monomial::normalize_raw(m.exps.clone());
            out.add_term(mm, c * carry);
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn scale(&self, r: &Rat) -> Scalar {
        if r.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * r)).collect(),
        }
    }

    pub fn pow(&self, e: i64) -> Result<Scalar, CoeffError> {
        if e == 0 {
            return Ok(Scalar::one());
        }
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Scalar::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Multiplicative inverse, defined for single-term scalars only.
    pub fn inverse(&self) -> Result<Scalar, CoeffError> {
        match self.single_term() {
            Some((c, m)) => {
                let (mi, carry) = m.inverse();
                let mut terms = BTreeMap::new();
                terms.insert(mi, c.recip() * carry);
                Ok(Scalar { terms })
            }
            None => Err(CoeffError::InverseOfSum(self.to_string())),
        }
    }

    /// Numeric evaluation under parameter bindings.
    pub fn substitute_numeric(&self, bindings: &Bindings) -> Result<f64, CoeffError> {
        let mut total = 0.0;
        for (m, c) in &self.terms {
            let mut v = rat_to_f64(c);
            for (s, e) in m.exps.iter() {
                let base = match s {
                    Sym::Param(name) => *bindings
                        .map
                        .get(name)
                        .ok_or_else(|| CoeffError::UnboundSymbol(name.clone()))?,
                    Sym::Sqrt(rad) => {
                        let rv = rad.substitute_numeric(bindings)?;
                        if rv < 0.0 {
                            return Err(CoeffError::NegativeRadicand(rad.to_string()));
                        }
                        rv.sqrt()
                    }
                };
                v *= base.powi(*e as i32);
            }
            total += v;
        }
        Ok(total)
    }

    /// Exact substitution of one parameter by a scalar, recursing into
    /// radicands (whose substituted value must stay a single term).
    pub fn substitute_param(&self, name: &str, value: &Scalar) -> Result<Scalar, CoeffError> {
        let mut out = Scalar::zero();
        for (m, c) in &self.terms {
            let mut factor = Scalar::from_rat(c.clone());
            for (s, e) in m.exps.iter() {
                let piece = match s {
                    Sym::Param(p) if p == name => value.pow(*e)?,
                    Sym::Param(_) => {
                        let mut exps = BTreeMap::new();
                        exps.insert(s.clone(), *e);
                        Scalar {
                            terms: [(Monomial { exps }, Rat::one())].into_iter().collect(),
                        }
                    }
                    Sym::Sqrt(rad) => {
                        let new_rad = rad.substitute_param(name, value)?;
                        Scalar::sqrt_of(&new_rad)?.pow(*e)?
                    }
                };
                factor = &factor * &piece;
            }
            out = &out + &factor;
        }
        Ok(out)
    }

    /// Free symbols (parameter names, including those inside radicands).
    pub fn free_params(&self) -> Vec<String> {
        let mut names = std::collections::BTreeSet::new();
        for (m, _) in &self.terms {
            for (s, _) in m.exps.iter() {
                match s {
                    Sym::Param(p) => {
                        names.insert(p.clone());
                    }
                    Sym::Sqrt(rad) => {
                        names.extend(rad.free_params());
                    }
                }
            }
        }
        names.into_iter().collect()
    }

    /// Leading coefficient of the contraction limit: multiplies by
    /// `scale^k`, then keeps the scale-free part as the scale goes to zero.
    /// Terms with positive remaining scale degree vanish; any term with a
    /// negative remaining degree makes the limit divergent.
    pub fn laurent_leading(&self, k: i64, scale: &ContractionScale) -> Result<Scalar, CoeffError> {
        let base_sym = Sym::Param(scale.base.clone());
        let rad_sym = scale.radical_sym();
        let mut out = Scalar::zero();
        for (m, c) in &self.terms {
            let deg = m.exponent(&rad_sym) + 2 * m.exponent(&base_sym) + k;
            if deg < 0 {
                let mut t = Scalar::zero();
                t.add_term(m.clone(), c.clone());
                return Err(CoeffError::Divergent(t.to_string()));
            }
            if deg > 0 {
                continue;
            }
            let base_exp = m.exponent(&base_sym);
            let mut exps = m.exps.clone();
            exps.remove(&base_sym);
            exps.remove(&rad_sym);
            let (mm, carry) = Monomial::normalize_raw(exps);
            let sign = if scale.negated && base_exp.rem_euclid(2) == 1 {
                -Rat::one()
            } else {
                Rat::one()
            };
            out.add_term(mm, c * carry * sign);
        }
        Ok(out)
    }

    pub fn parse(src: &str) -> Result<Scalar, ParseError> {
        parse::parse(src)
    }
}

/// The designated contraction scale: a radical whose square is `base`
/// (or `-base` when `negated`), treated as the small quantity whose leading
/// Laurent order defines a contraction limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionScale {
    pub base: String,
    pub negated: bool,
}

impl ContractionScale {
    pub fn new(base: &str, negated: bool) -> Self {
        ContractionScale {
            base: base.to_string(),
            negated,
        }
    }

    /// The radical symbol `sqrt(base)` or `sqrt(-base)`.
    pub fn radical_sym(&self) -> Sym {
        let rad = if self.negated {
            -&Scalar::param(&self.base)
        } else {
            Scalar::param(&self.base)
        };
        Sym::Sqrt(Box::new(rad))
    }

    /// The scale as a scalar, for building expressions.
    pub fn scalar(&self) -> Scalar {
        Scalar::sqrt_param(&self.base, self.negated)
    }
}

/// Parameter bindings for numeric evaluation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Bindings {
    map: BTreeMap<String, f64>,
}

impl Bindings {
    pub fn new() -> Self {
        Bindings::default()
    }

    pub fn bind(mut self, name: &str, value: f64) -> Self {
        self.map.insert(name.to_string(), value);
        self
    }

    pub fn set(&mut self, name: &str, value: f64) {
        self.map.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.map.get(name).copied()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(|s| s.as_str())
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    // Good enough for the magnitudes in this crate; BigRational has no
    // direct lossless conversion.
    let n = r.numer();
    let d = r.denom();
    bigint_to_f64(n) / bigint_to_f64(d)
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    n.to_string().parse::<f64>().unwrap_or(f64::NAN)
}

impl std::ops::Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl std::ops::Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let (m, carry) = ma.mul(mb);
                out.add_term(m, ca * cb * carry);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| &a + &b)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut pieces: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_one() {
                pieces.push(format_rat(&mag));
            }
            for (s, e) in m.exps.iter() {
                let base = match s {
                    Sym::Param(p) => p.clone(),
                    Sym::Sqrt(rad) => format!("sqrt({})", rad),
                };
                if *e == 1 {
                    pieces.push(base);
                } else {
                    pieces.push(format!("{}^{}", base, e));
                }
            }
            write!(f, "{}", pieces.join("*"))?;
        }
        Ok(())
    }
}

fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

mod parse {
    use super::*;

    pub fn parse(src: &str) -> Result<Scalar, ParseError> {
        let mut p = Parser {
            bytes: src.as_bytes(),
            pos: 0,
        };
        p.skip_ws();
        let s = p.expr()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(p.err("trailing input"));
        }
        Ok(s)
    }

    struct Parser<'a> {
        bytes: &'a [u8],
        pos: usize,
    }

    impl<'a> Parser<'a> {
        fn err(&self, msg: &str) -> ParseError {
            ParseError {
                pos: self.pos,
                msg: msg.to_string(),
            }
        }

        fn skip_ws(&mut self) {
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
        }

        fn peek(&self) -> Option<u8> {
            self.bytes.get(self.pos).copied()
        }

        fn eat(&mut self, b: u8) -> bool {
            if self.peek() == Some(b) {
                self.pos += 1;
                true
            } else {
                false
            }
        }

        fn expr(&mut self) -> Result<Scalar, ParseError> {
            self.skip_ws();
            let mut negate = false;
            if self.eat(b'-') {
                negate = true;
            } else {
                let _ = self.eat(b'+');
            }
            let mut acc = self.term()?;
            if negate {
                acc = -&acc;
            }
            loop {
                self.skip_ws();
                match self.peek() {
                    Some(b'+') => {
                        self.pos += 1;
                        let t = self.term()?;
                        acc = &acc + &t;
                    }
                    Some(b'-') => {
                        self.pos += 1;
                        let t = self.term()?;
                        acc = &acc - &t;
                    }
                    _ => break,
                }
            }
            Ok(acc)
        }

        fn term(&mut self) -> Result<Scalar, ParseError> {
            let mut acc = self.factor()?;
            loop {
                self.skip_ws();
                if self.eat(b'*') {
                    let fac = self.factor()?;
                    acc = &acc * &fac;
                } else {
                    break;
                }
            }
            Ok(acc)
        }

        fn factor(&mut self) -> Result<Scalar, ParseError> {
            self.skip_ws();
            let mut negate = false;
            if self.eat(b'-') {
                negate = true;
            }
            self.skip_ws();
            let mut base = self.atom()?;
            self.skip_ws();
            if self.eat(b'^') {
                self.skip_ws();
                let e = self.integer()?;
                base = base
                    .pow(e)
                    .map_err(|e| self.err(&format!("exponent rejected: {e}")))?;
            }
            Ok(if negate { -&base } else { base })
        }

        fn atom(&mut self) -> Result<Scalar, ParseError> {
            self.skip_ws();
            match self.peek() {
                Some(b'(') => {
                    self.pos += 1;
                    let inner = self.expr()?;
                    self.skip_ws();
                    if !self.eat(b')') {
                        return Err(self.err("expected ')'"));
                    }
                    Ok(inner)
                }
                Some(c) if c.is_ascii_digit() => self.rational(),
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let name = self.ident();
                    if name == "sqrt" {
                        self.skip_ws();
                        if !self.eat(b'(') {
                            return Err(self.err("expected '(' after sqrt"));
                        }
                        let inner = self.expr()?;
                        self.skip_ws();
                        if !self.eat(b')') {
                            return Err(self.err("expected ')'"));
                        }
                        Scalar::sqrt_of(&inner)
                            .map_err(|e| self.err(&format!("bad radicand: {e}")))
                    } else {
                        Ok(Scalar::param(&name))
                    }
                }
                _ => Err(self.err("expected a number, symbol, sqrt(...), or '('")),
            }
        }

        fn ident(&mut self) -> String {
            let start = self.pos;
            while self
                .peek()
                .map(|c| c.is_ascii_alphanumeric() || c == b'_')
                .unwrap_or(false)
            {
                self.pos += 1;
            }
            String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned()
        }

        fn integer(&mut self) -> Result<i64, ParseError> {
            let mut neg = false;
            if self.eat(b'-') {
                neg = true;
            }
            let start = self.pos;
            while self.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
                self.pos += 1;
            }
            if self.pos == start {
                return Err(self.err("expected an integer"));
            }
            let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
            let v: i64 = text
                .parse()
                .map_err(|_| self.err("integer out of range"))?;
            Ok(if neg { -v } else { v })
        }

        fn rational(&mut self) -> Result<Scalar, ParseError> {
            let num = self.integer()?;
            self.skip_ws();
            let save = self.pos;
            if self.eat(b'/') {
                self.skip_ws();
                if self.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
                    let den = self.integer()?;
                    if den == 0 {
                        return Err(self.err("zero denominator"));
                    }
                    return Ok(Scalar::rational(num, den));
                }
                self.pos = save;
            }
            Ok(Scalar::from_int(num))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam() -> Scalar {
        Scalar::param("lambda")
    }

    #[test]
    fn radical_square_rewrites() {
        let s2 = Scalar::sqrt_int(2);
        assert_eq!(&s2 * &s2, Scalar::from_int(2));
        let sl = Scalar::sqrt_param("lambda", false);
        assert_eq!(&sl * &sl, lam());
        let sml = Scalar::sqrt_param("lambda", true);
        assert_eq!(&sml * &sml, -&lam());
        // sqrt(-1) is a formal symbol with square -1
        let i = Scalar::sqrt_of(&Scalar::from_int(-1)).unwrap();
        assert_eq!(&i * &i, Scalar::from_int(-1));
    }

    #[test]
    fn sqrt_extracts_squares() {
        assert_eq!(Scalar::sqrt_int(4), Scalar::from_int(2));
        assert_eq!(Scalar::sqrt_int(8), &Scalar::from_int(2) * &Scalar::sqrt_int(2));
        let q = Scalar::sqrt_of(&Scalar::rational(1, 2)).unwrap();
        assert_eq!(q, Scalar::rational(1, 2) * Scalar::sqrt_int(2));
        let r = Scalar::sqrt_of(&(&Scalar::from_int(4) * &lam())).unwrap();
        assert_eq!(r, &Scalar::from_int(2) * &Scalar::sqrt_param("lambda", false));
    }

    #[test]
    fn inverse_of_monomial() {
        let sl = Scalar::sqrt_param("lambda", false);
        let inv = sl.inverse().unwrap();
        // 1/sqrt(lambda) = sqrt(lambda)/lambda
        let expect = &sl * &lam().inverse().unwrap();
        assert_eq!(inv, expect);
        assert_eq!(&inv * &sl, Scalar::one());
        let sum = &lam() + &Scalar::one();
        assert!(matches!(sum.inverse(), Err(CoeffError::InverseOfSum(_))));
    }

    #[test]
    fn substitute_numeric_radicals() {
        let sml = Scalar::sqrt_param("lambda", true);
        let b = Bindings::new().bind("lambda", -1.0);
        assert!((sml.substitute_numeric(&b).unwrap() - 1.0).abs() < 1e-15);
        let b2 = Bindings::new().bind("lambda", 1.0);
        assert!(matches!(
            sml.substitute_numeric(&b2),
            Err(CoeffError::NegativeRadicand(_))
        ));
        let free = Scalar::param("omega");
        assert!(matches!(
            free.substitute_numeric(&Bindings::new()),
            Err(CoeffError::UnboundSymbol(_))
        ));
    }

    #[test]
    fn laurent_leading_basic() {
        let scale = ContractionScale::new("Lambda", false);
        let eta = scale.scalar();
        let eta_inv = eta.inverse().unwrap();
        // eta^-1 at k=1 -> 1
        assert_eq!(eta_inv.laurent_leading(1, &scale).unwrap(), Scalar::one());
        // eta at k=0 -> 0
        assert_eq!(eta.laurent_leading(0, &scale).unwrap(), Scalar::zero());
        // eta^-1 + 3 eta at k=0 -> divergent
        let s = &eta_inv + &(&Scalar::from_int(3) * &eta);
        assert!(matches!(
            s.laurent_leading(0, &scale),
            Err(CoeffError::Divergent(_))
        ));
        // Lambda * eta^-2 has scale degree 0: the limit keeps the stripped value.
        let t = &Scalar::param("Lambda") * &eta_inv.pow(2).unwrap();
        assert_eq!(t.laurent_leading(0, &scale).unwrap(), Scalar::one());
    }

    #[test]
    fn laurent_leading_negated_domain() {
        let scale = ContractionScale::new("Lambda", true);
        let nu = scale.scalar();
        // Lambda * nu^-1 = -nu: at k=0 it vanishes; at k=-1 it gives -1.
        let s = &Scalar::param("Lambda") * &nu.inverse().unwrap();
        assert_eq!(s.laurent_leading(0, &scale).unwrap(), Scalar::zero());
        assert_eq!(
            s.laurent_leading(-1, &scale).unwrap(),
            Scalar::from_int(-1)
        );
    }

    #[test]
    fn parse_round_trip() {
        let cases = [
            "0",
            "1/2",
            "-3",
            "lambda",
            "3/2*lambda^2*sqrt(2)",
            "1 - lambda",
            "sqrt(-lambda)",
            "-1/2*omega + 2*sqrt(2)*lambda^-1",
        ];
        for src in cases {
            let s = Scalar::parse(src).unwrap();
            let rt = Scalar::parse(&s.to_string()).unwrap();
            assert_eq!(s, rt, "round trip failed for {src}");
        }
    }

    #[test]
    fn parse_matches_construction() {
        let s = Scalar::parse("1/2 * lambda - sqrt(2)*omega^2").unwrap();
        let expect = &(&Scalar::rational(1, 2) * &lam())
            - &(&Scalar::sqrt_int(2) * &Scalar::param("omega").pow(2).unwrap());
        assert_eq!(s, expect);
    }

    #[test]
    fn normalize_idempotent() {
        let s = Scalar::parse("sqrt(2)*sqrt(2) + lambda - lambda + 1").unwrap();
        assert_eq!(s, Scalar::from_int(3));
        assert_eq!(s.normalize(), s);
    }

    #[test]
    fn substitute_param_exact() {
        // sqrt(Lambda) at Lambda = 1/1000000 -> 1/1000
        let s = Scalar::sqrt_param("Lambda", false);
        let v = s
            .substitute_param("Lambda", &Scalar::rational(1, 1_000_000))
            .unwrap();
        assert_eq!(v, Scalar::rational(1, 1000));
        // sqrt(-Lambda) at Lambda = -4 -> 2
        let n = Scalar::sqrt_param("Lambda", true);
        let v2 = n.substitute_param("Lambda", &Scalar::from_int(-4)).unwrap();
        assert_eq!(v2, Scalar::from_int(2));
    }
}
