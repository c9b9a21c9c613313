//! Scalars for Hecke algebras: Laurent polynomials and rational functions in
//! `v`, with the Hecke parameter `z = v²`.
//!
//! Hecke algebra structure constants live in `Z[v, v^{-1}]`, so elements of
//! the algebra carry [`Laurent`] coefficients with machine integers
//! (overflow panics). Module matrices and linear solves need the fraction
//! field, provided by [`RatFunc`] over exact rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar {0:?}: {1}")]
    Parse(String, String),
    #[error("denominator vanishes at the specialization point")]
    Pole,
    #[error("not a Laurent polynomial: {0}")]
    NotLaurent(String),
}

/// `Σ c_k v^k` with finitely many nonzero integer `c_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Laurent {
    // exponent -> nonzero coefficient
    terms: BTreeMap<i32, i64>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: i64, e: i32) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(e, c);
        }
        Laurent { terms }
    }

    pub fn v() -> Self {
        Self::monomial(1, 1)
    }

    /// `z = v²`.
    pub fn z() -> Self {
        Self::monomial(1, 2)
    }

    /// `z^k = v^{2k}`.
    pub fn z_pow(k: i32) -> Self {
        Self::monomial(1, 2 * k)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0) == Some(&1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn coeff(&self, e: i32) -> i64 {
        self.terms.get(&e).copied().unwrap_or(0)
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    fn add_term(&mut self, e: i32, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(e).or_insert(0);
        *entry = entry.checked_add(c).expect("Laurent coefficient overflow");
        if *entry == 0 {
            self.terms.remove(&e);
        }
    }

    pub fn add_assign_ref(&mut self, other: &Laurent) {
        for (e, c) in other.terms() {
            self.add_term(e, c);
        }
    }

    pub fn scale(&self, c: i64) -> Laurent {
        let mut out = Laurent::zero();
        for (e, x) in self.terms() {
            out.add_term(e, x.checked_mul(c).expect("Laurent coefficient overflow"));
        }
        out
    }

    /// Multiply by `v^k`.
    pub fn shift(&self, k: i32) -> Laurent {
        Laurent {
            terms: self.terms.iter().map(|(&e, &c)| (e + k, c)).collect(),
        }
    }

    /// `f(v) ↦ f(v^{-1})`.
    pub fn bar(&self) -> Laurent {
        Laurent {
            terms: self.terms.iter().map(|(&e, &c)| (-e, c)).collect(),
        }
    }

    pub fn to_ratfunc(&self) -> RatFunc {
        let Some(lo) = self.min_exp() else {
            return RatFunc::zero();
        };
        let shift = lo.min(0);
        let hi = self.max_exp().unwrap();
        let mut coeffs = vec![BigRational::zero(); (hi - shift + 1) as usize];
        for (e, c) in self.terms() {
            coeffs[(e - shift) as usize] = BigRational::from_integer(c.into());
        }
        let num = Poly::new(coeffs);
        let den = Poly::monomial(BigRational::one(), (-shift) as usize);
        RatFunc::from_parts(num, den).expect("v^k is nonzero")
    }

    pub fn eval(&self, v: &BigRational) -> Option<BigRational> {
        if v.is_zero() && self.min_exp().is_some_and(|e| e < 0) {
            return None;
        }
        let mut acc = BigRational::zero();
        for (e, c) in self.terms() {
            acc += BigRational::from_integer(c.into()) * pow_rat(v, e as i64);
        }
        Some(acc)
    }

    /// All exponents even, so the value is a Laurent polynomial in `z`.
    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|e| e % 2 == 0)
    }
}

fn pow_rat(x: &BigRational, e: i64) -> BigRational {
    let base = if e < 0 { x.recip() } else { x.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        out.add_assign_ref(&-rhs);
        out
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        self.scale(-1)
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1.checked_mul(c2).expect("Laurent coefficient overflow"));
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($t:ty, $tr:ident, $m:ident) => {
        impl $tr for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Laurent, Add, add);
forward_owned!(Laurent, Sub, sub);
forward_owned!(Laurent, Mul, mul);

fn write_terms<T: fmt::Display + PartialOrd + Zero + One + Neg<Output = T> + Clone>(
    f: &mut fmt::Formatter<'_>,
    terms: &[(i64, T)],
    var: &str,
) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (k, (e, c)) in terms.iter().enumerate() {
        let neg = *c < T::zero();
        let abs = if neg { -c.clone() } else { c.clone() };
        if k == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, "{}", if neg { "-" } else { "+" })?;
        }
        let unit = abs.is_one();
        if *e == 0 {
            write!(f, "{abs}")?;
            continue;
        }
        if !unit {
            write!(f, "{abs}")?;
        }
        if *e == 1 {
            write!(f, "{var}")?;
        } else {
            write!(f, "{var}^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Laurent {
    /// Written in `z` when every exponent is even, otherwise in `v`; highest
    /// power first, e.g. `z-1` or `v^3+2v^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let even = self.is_even();
        let terms: Vec<(i64, i64)> = self
            .terms
            .iter()
            .rev()
            .map(|(&e, &c)| (if even { e as i64 / 2 } else { e as i64 }, c))
            .collect();
        write_terms(f, &terms, if even { "z" } else { "v" })
    }
}

/// Dense polynomial in `v` over `Q`, coefficients from the constant term up,
/// no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    c: Vec<BigRational>,
}

impl Poly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn zero() -> Self {
        Poly { c: vec![] }
    }

    pub fn constant(x: BigRational) -> Self {
        Self::new(vec![x])
    }

    pub fn monomial(x: BigRational, deg: usize) -> Self {
        let mut c = vec![BigRational::zero(); deg + 1];
        c[deg] = x;
        Self::new(c)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn lead(&self) -> Option<&BigRational> {
        self.c.last()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn scale(&self, x: &BigRational) -> Poly {
        Poly::new(self.c.iter().map(|a| a * x).collect())
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            None => Poly::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let zero = BigRational::zero();
        Poly::new(
            (0..n)
                .map(|i| self.c.get(i).unwrap_or(&zero) + o.c.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.c.iter().map(|a| -a).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![BigRational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("polynomial division by zero");
        let lead_inv = d.lead().unwrap().recip();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = &r[k + dd] * &lead_inv;
            if coef.is_zero() {
                continue;
            }
            for (j, dc) in d.c.iter().enumerate() {
                r[k + j] -= &coef * dc;
            }
            q[k] = coef;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.c.iter().rev().fold(BigRational::zero(), |acc, a| acc * x + a)
    }

    /// Lowest exponent with nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|a| !a.is_zero())
    }
}

/// `num / den` in `Q(v)`, reduced with monic denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

/// Integer coefficient arrays, constant term first; `num` and `den` share no
/// common factor and the leading coefficient of `den` is positive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatFuncJson {
    pub num: Vec<String>,
    pub den: Vec<String>,
}

impl RatFunc {
    pub fn from_parts(num: Poly, den: Poly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let (n, _) = num.div_rem(&g);
        let (d, _) = den.div_rem(&g);
        let l = d.lead().unwrap().recip();
        Ok(RatFunc {
            num: n.scale(&l),
            den: d.scale(&l),
        })
    }

    pub fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::constant(BigRational::one()),
        }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(x: BigRational) -> Self {
        RatFunc {
            num: Poly::constant(x),
            den: Poly::constant(BigRational::one()),
        }
    }

    pub fn from_int(x: i64) -> Self {
        Self::from_rational(BigRational::from_integer(x.into()))
    }

    pub fn v() -> Self {
        Laurent::v().to_ratfunc()
    }

    pub fn z() -> Self {
        Laurent::z().to_ratfunc()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_constant() && self.num == self.den
    }

    /// Constant value, if the function does not depend on `v`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num.is_constant() && self.den.is_constant() {
            Some(self.num.coeffs().first().cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFunc::from_parts(self.num.add(&o.num), self.den.clone()).unwrap();
        }
        RatFunc::from_parts(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den)).unwrap()
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::from_parts(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }

    pub fn inv(&self) -> Result<RatFunc, ScalarError> {
        RatFunc::from_parts(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc, ScalarError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<RatFunc, ScalarError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut out = RatFunc::one();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    /// Value at `v = x`.
    pub fn eval(&self, x: &BigRational) -> Result<BigRational, ScalarError> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(ScalarError::Pole);
        }
        Ok(self.num.eval(x) / d)
    }

    /// Back to a Laurent polynomial when the denominator is a power of `v`
    /// and all coefficients are integers.
    pub fn to_laurent(&self) -> Result<Laurent, ScalarError> {
        let fail = || ScalarError::NotLaurent(self.to_string());
        let dd = self.den.degree().unwrap();
        if self.den.valuation() != Some(dd) {
            return Err(fail());
        }
        let mut out = Laurent::zero();
        for (i, c) in self.num.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !c.is_integer() {
                return Err(fail());
            }
            let c = c.to_integer().try_into().map_err(|_| fail())?;
            out.add_term(i as i32 - dd as i32, c);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> RatFuncJson {
        let (n, d) = self.primitive_parts();
        RatFuncJson {
            num: n.iter().map(|x| x.to_string()).collect(),
            den: d.iter().map(|x| x.to_string()).collect(),
        }
    }

    pub fn from_json(j: &RatFuncJson) -> Result<Self, ScalarError> {
        let parse = |v: &[String]| -> Result<Poly, ScalarError> {
            v.iter()
                .map(|s| {
                    s.parse::<BigInt>()
                        .map(BigRational::from_integer)
                        .map_err(|e| ScalarError::Parse(s.clone(), e.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Poly::new)
        };
        RatFunc::from_parts(parse(&j.num)?, parse(&j.den)?)
    }

    /// Integer numerator and denominator with no common content.
    pub fn primitive_parts(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        let all = self.num.coeffs().iter().chain(self.den.coeffs());
        let lcm = all.clone().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let to_int = |p: &Poly| -> Vec<BigInt> {
            p.coeffs()
                .iter()
                .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
                .collect()
        };
        let (mut n, mut d) = (to_int(&self.num), to_int(&self.den));
        let g = n.iter().chain(&d).fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if !g.is_zero() && !g.is_one() {
            n.iter_mut().for_each(|x| *x /= &g);
            d.iter_mut().for_each(|x| *x /= &g);
        }
        (n, d)
    }

    /// Parse expressions such as `v^4`, `z-1`, `3/2`, `(z+1)/(v^3-2)`, `z^-1`.
    pub fn parse(s: &str) -> Result<Self, ScalarError> {
        let mut p = Parser {
            src: s,
            chars: s.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
        };
        let out = p.expr()?;
        if p.pos != p.chars.len() {
            return Err(p.err("trailing input"));
        }
        Ok(out)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.primitive_parts();
        let even = n.iter().enumerate().all(|(i, x)| i % 2 == 0 || x.is_zero())
            && d.iter().enumerate().all(|(i, x)| i % 2 == 0 || x.is_zero());
        let var = if even { "z" } else { "v" };
        let step = if even { 2 } else { 1 };
        let collect = |p: &[BigInt]| -> Vec<(i64, BigInt)> {
            p.iter()
                .enumerate()
                .rev()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| ((i / step) as i64, x.clone()))
                .collect()
        };
        let (nt, dt) = (collect(&n), collect(&d));
        let den_one = dt.len() == 1 && dt[0].0 == 0 && dt[0].1.is_one();
        if den_one {
            return write_terms(f, &nt, var);
        }
        let wrap = |t: &[(i64, BigInt)]| t.len() > 1;
        if wrap(&nt) {
            write!(f, "(")?;
        }
        write_terms(f, &nt, var)?;
        if wrap(&nt) {
            write!(f, ")")?;
        }
        write!(f, "/")?;
        if wrap(&dt) || (dt.len() == 1 && dt[0].0 != 0 && !dt[0].1.is_one()) {
            write!(f, "(")?;
            write_terms(f, &dt, var)?;
            write!(f, ")")
        } else {
            write_terms(f, &dt, var)
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ScalarError {
        ScalarError::Parse(self.src.to_string(), format!("{msg} at position {}", self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RatFunc, ScalarError> {
        let mut neg = false;
        if let Some(c @ ('+' | '-')) = self.peek() {
            neg = c == '-';
            self.pos += 1;
        }
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc, ScalarError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some('/') => {
                    self.pos += 1;
                    let d = self.factor()?;
                    acc = acc.div(&d).map_err(|_| self.err("division by zero"))?;
                }
                // implicit product such as `3z` or `2(v+1)`
                Some('v' | 'z' | '(') => acc = acc.mul(&self.factor()?),
                _ => return Ok(acc),
            }
        }
    }

    fn integer(&mut self) -> Result<i64, ScalarError> {
        let mut neg = false;
        if self.peek() == Some('-') {
            neg = true;
            self.pos += 1;
        }
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        let x: i64 = s.parse().map_err(|_| self.err("integer too large"))?;
        Ok(if neg { -x } else { x })
    }

    fn exponent(&mut self) -> Result<i64, ScalarError> {
        if self.peek() == Some('^') {
            self.pos += 1;
            if self.peek() == Some('(') {
                self.pos += 1;
                let e = self.integer()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                return Ok(e);
            }
            self.integer()
        } else {
            Ok(1)
        }
    }

    fn factor(&mut self) -> Result<RatFunc, ScalarError> {
        let base = match self.peek() {
            Some('v') => {
                self.pos += 1;
                RatFunc::v()
            }
            Some('z') => {
                self.pos += 1;
                RatFunc::z()
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                e
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let s: String = self.chars[start..self.pos].iter().collect();
                let x: BigInt = s.parse().map_err(|_| self.err("bad number"))?;
                RatFunc::from_rational(BigRational::from_integer(x))
            }
            _ => return Err(self.err("expected a number, v, z or '('")),
        };
        let e = self.exponent()?;
        base.pow(e).map_err(|_| self.err("zero to a negative power"))
    }
}

/// Parse a rational number `p` or `p/q`.
pub fn parse_rational(s: &str) -> Result<BigRational, ScalarError> {
    let x = RatFunc::parse(s)?;
    x.as_rational()
        .ok_or_else(|| ScalarError::Parse(s.to_string(), "expected a rational number".into()))
}

/// `p/q` with `q > 0`, or `p` when integral.
pub fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
