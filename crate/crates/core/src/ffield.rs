//! Small finite fields in discrete-logarithm form.
//!
//! Nonzero elements are stored as exponents of a fixed primitive element `g`,
//! so multiplication is exponent addition. Addition goes through a Zech table:
//! `1 + g^e = g^{zech(e)}`, hence `g^a + g^b = g^{a + zech(b - a)}`.
//!
//! Construction picks the lexicographically smallest monic irreducible
//! polynomial of degree `k` over `F_p` and then scans elements in polynomial
//! index order for the first one of multiplicative order `q - 1`. Both choices
//! are deterministic, so the same `(p, k)` always yields the same tables.

use serde::Serialize;
use thiserror::Error;

/// Default cap on the field size. Tables are `O(q)`.
pub const DEFAULT_MAX_Q: u32 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field of size {p}^{k} exceeds the bound {bound}")]
    FieldTooLarge { p: u32, k: u32, bound: u32 },
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("discrete logarithm of zero")]
    ZeroArgument,
    #[error("element of F_{found} used with F_{expected}")]
    FieldMismatch { expected: u32, found: u32 },
    #[error("exponent {exp} out of range for F_{q}")]
    ExponentOutOfRange { exp: u32, q: u32 },
}

/// An element of a finite field: zero, or `g^log` for the field's generator.
///
/// The element records the cardinality of its field so that mixing elements
/// of different fields is caught at the operation boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FFElem {
    q: u32,
    log: Option<u32>,
}

impl FFElem {
    pub fn is_zero(&self) -> bool {
        self.log.is_none()
    }

    /// Exponent with respect to the field generator, `None` for zero.
    pub fn log(&self) -> Option<u32> {
        self.log
    }

    /// Cardinality of the field this element belongs to.
    pub fn field_size(&self) -> u32 {
        self.q
    }
}

/// Summary of how a field was built, for reproducible output.
#[derive(Debug, Clone, Serialize)]
pub struct FieldDescription {
    pub p: u32,
    pub k: u32,
    pub q: u32,
    /// Monic modulus, coefficients from constant term upward.
    pub modulus: Vec<u32>,
    /// Generator as polynomial coefficients, constant term first.
    pub generator: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct FiniteField {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: u32,
    // exp[e] = polynomial index of g^e
    exp: Vec<u32>,
    // log[idx] = e with g^e = idx; log[0] unused
    log: Vec<u32>,
    // zech[e] = log(1 + g^e), None when 1 + g^e = 0
    zech: Vec<Option<u32>>,
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Builds `F_{p^k}` with the default size bound.
pub fn make_field(p: u32, k: u32) -> Result<FiniteField, FieldError> {
    FiniteField::with_bound(p, k, DEFAULT_MAX_Q)
}

// Polynomials over F_p are encoded as base-p integers: coefficient of X^i is
// the i-th base-p digit.
fn digits(mut idx: u32, p: u32, k: u32) -> Vec<u32> {
    let mut out = vec![0; k as usize];
    for d in out.iter_mut() {
        *d = idx % p;
        idx /= p;
    }
    out
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn poly_rem(mut a: Vec<u32>, m: &[u32], p: u32) -> Vec<u32> {
    // m is monic of degree m.len() - 1
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - dm;
        if lead != 0 {
            for (i, &mc) in m.iter().enumerate() {
                let j = i + shift;
                a[j] = (a[j] + p - (lead * mc) % p) % p;
            }
        }
        a.pop();
    }
    a
}

fn poly_mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let mut r = poly_rem(prod, m, p);
    r.resize(m.len() - 1, 0);
    r
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    // trial division by every monic polynomial of degree 1..=deg/2
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut f = digits(low, p, d as u32);
            f.push(1);
            let r = poly_rem(m.to_vec(), &f, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    if k == 1 {
        return vec![0, 1];
    }
    let count = p.pow(k);
    for low in 0..count {
        let mut m = digits(low, p, k);
        m.push(1);
        if m[0] != 0 && is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FiniteField {
    pub fn with_bound(p: u32, k: u32, bound: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u64)
            .checked_pow(k)
            .filter(|&q| q <= bound as u64)
            .ok_or(FieldError::FieldTooLarge { p, k, bound })? as u32;

        let modulus = smallest_irreducible(p, k);
        let qm1 = q - 1;

        let mut generator = 0;
        let mut exp = Vec::new();
        for cand in 1..q {
            let c = digits(cand, p, k);
            let mut table = Vec::with_capacity(qm1 as usize);
            let mut cur = digits(1, p, k);
            loop {
                table.push(undigits(&cur, p));
                cur = poly_mul_mod(&cur, &c, &modulus, p);
                if undigits(&cur, p) == 1 {
                    break;
                }
            }
            if table.len() as u32 == qm1 {
                generator = cand;
                exp = table;
                break;
            }
        }

        let mut log = vec![0u32; q as usize];
        for (e, &idx) in exp.iter().enumerate() {
            log[idx as usize] = e as u32;
        }

        let one = digits(1, p, k);
        let zech = exp
            .iter()
            .map(|&idx| {
                let d = digits(idx, p, k);
                let sum: Vec<u32> = d.iter().zip(&one).map(|(a, b)| (a + b) % p).collect();
                let s = undigits(&sum, p);
                (s != 0).then(|| log[s as usize])
            })
            .collect();

        let field = FiniteField {
            p,
            k,
            q,
            modulus,
            generator,
            exp,
            log,
            zech,
        };
        field.spot_check();
        Ok(field)
    }

    // Distributivity on 100 deterministic triples; a failure here is a table bug.
    fn spot_check(&self) {
        let q = self.q as u64;
        for i in 0..100u64 {
            let a = self.from_index(((i * 7919 + 3) % q) as u32);
            let b = self.from_index(((i * 104_729 + 11) % q) as u32);
            let c = self.from_index(((i * 1_299_709 + 5) % q) as u32);
            let lhs = self.mul_unchecked(a, self.add_unchecked(b, c));
            let rhs = self.add_unchecked(self.mul_unchecked(a, b), self.mul_unchecked(a, c));
            assert_eq!(lhs, rhs, "Zech table of F_{} fails distributivity", self.q);
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn description(&self) -> FieldDescription {
        FieldDescription {
            p: self.p,
            k: self.k,
            q: self.q,
            modulus: self.modulus.clone(),
            generator: digits(self.generator, self.p, self.k),
        }
    }

    pub fn zero(&self) -> FFElem {
        FFElem { q: self.q, log: None }
    }

    pub fn one(&self) -> FFElem {
        self.from_log(0)
    }

    pub fn generator(&self) -> FFElem {
        self.from_log((1 % (self.q - 1).max(1)) as i64)
    }

    /// `g^e`, with `e` reduced modulo `q - 1`.
    pub fn from_log(&self, e: i64) -> FFElem {
        let m = (self.q - 1) as i64;
        FFElem {
            q: self.q,
            log: Some(e.rem_euclid(m) as u32),
        }
    }

    /// Checked variant of [`FiniteField::from_log`] for exponents read from input.
    pub fn try_from_log(&self, e: u32) -> Result<FFElem, FieldError> {
        if e >= self.q - 1 {
            return Err(FieldError::ExponentOutOfRange { exp: e, q: self.q });
        }
        Ok(self.from_log(e as i64))
    }

    /// Element with the given polynomial index (base-`p` digits are coefficients).
    pub fn from_index(&self, idx: u32) -> FFElem {
        let idx = idx % self.q;
        if idx == 0 {
            self.zero()
        } else {
            FFElem {
                q: self.q,
                log: Some(self.log[idx as usize]),
            }
        }
    }

    pub fn index_of(&self, x: FFElem) -> u32 {
        match x.log {
            None => 0,
            Some(e) => self.exp[e as usize],
        }
    }

    /// Iterator over every element, zero first.
    pub fn elements(&self) -> impl Iterator<Item = FFElem> + '_ {
        (0..self.q).map(move |i| self.from_index(i))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FFElem> + '_ {
        (0..self.q - 1).map(move |e| self.from_log(e as i64))
    }

    /// `log(1 + g^e)`, or `None` when `g^e = -1`.
    pub fn zech(&self, e: u32) -> Option<u32> {
        self.zech[(e % (self.q - 1)) as usize]
    }

    pub fn minus_one(&self) -> FFElem {
        if self.p == 2 {
            self.one()
        } else {
            self.from_log(((self.q - 1) / 2) as i64)
        }
    }

    fn check(&self, x: FFElem) -> Result<(), FieldError> {
        if x.q != self.q {
            return Err(FieldError::FieldMismatch {
                expected: self.q,
                found: x.q,
            });
        }
        Ok(())
    }

    fn add_unchecked(&self, x: FFElem, y: FFElem) -> FFElem {
        match (x.log, y.log) {
            (None, _) => y,
            (_, None) => x,
            (Some(a), Some(b)) => {
                let m = self.q - 1;
                let diff = (b + m - a) % m;
                match self.zech[diff as usize] {
                    None => self.zero(),
                    Some(z) => FFElem {
                        q: self.q,
                        log: Some((a + z) % m),
                    },
                }
            }
        }
    }

    fn mul_unchecked(&self, x: FFElem, y: FFElem) -> FFElem {
        match (x.log, y.log) {
            (Some(a), Some(b)) => FFElem {
                q: self.q,
                log: Some(((a as u64 + b as u64) % (self.q - 1) as u64) as u32),
            },
            _ => self.zero(),
        }
    }

    pub fn add(&self, x: FFElem, y: FFElem) -> Result<FFElem, FieldError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add_unchecked(x, y))
    }

    pub fn neg(&self, x: FFElem) -> Result<FFElem, FieldError> {
        self.check(x)?;
        Ok(self.mul_unchecked(x, self.minus_one()))
    }

    pub fn sub(&self, x: FFElem, y: FFElem) -> Result<FFElem, FieldError> {
        let ny = self.neg(y)?;
        self.add(x, ny)
    }

    pub fn mul(&self, x: FFElem, y: FFElem) -> Result<FFElem, FieldError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul_unchecked(x, y))
    }

    pub fn inv(&self, x: FFElem) -> Result<FFElem, FieldError> {
        self.check(x)?;
        match x.log {
            None => Err(FieldError::ZeroInverse),
            Some(e) => Ok(self.from_log(-(e as i64))),
        }
    }

    /// `x^k` for any integer `k`; `0^k` errors for negative `k`.
    pub fn pow(&self, x: FFElem, k: i64) -> Result<FFElem, FieldError> {
        self.check(x)?;
        match x.log {
            None if k < 0 => Err(FieldError::ZeroInverse),
            None if k == 0 => Ok(self.one()),
            None => Ok(self.zero()),
            Some(e) => {
                let m = (self.q - 1) as i128;
                Ok(self.from_log(((e as i128 * k as i128).rem_euclid(m)) as i64))
            }
        }
    }

    pub fn dlog(&self, x: FFElem) -> Result<u32, FieldError> {
        self.check(x)?;
        x.log.ok_or(FieldError::ZeroArgument)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f = make_field(5, 1).unwrap();
        assert_eq!(f.order(), 5);
        let g = f.generator();
        let two = f.add(f.one(), f.one()).unwrap();
        assert_eq!(f.index_of(two), 2);
        // generator has order exactly 4
        let orders: Vec<u32> = (1..=4).map(|k| f.index_of(f.pow(g, k).unwrap())).collect();
        assert_eq!(orders[3], 1);
        assert!(orders[..3].iter().all(|&i| i != 1));
        for x in f.nonzero_elements() {
            assert_eq!(f.mul(x, f.inv(x).unwrap()).unwrap(), f.one());
        }
    }

    #[test]
    fn f9_generator_order() {
        let f = make_field(3, 2).unwrap();
        let g = f.generator();
        let mut x = g;
        let mut ord = 1;
        while x != f.one() {
            x = f.mul(x, g).unwrap();
            ord += 1;
        }
        assert_eq!(ord, 8);
    }

    #[test]
    fn f7_dlog_of_two() {
        // generator of F_7 found by index scan is 3
        let f = make_field(7, 1).unwrap();
        assert_eq!(f.index_of(f.generator()), 3);
        assert_eq!(f.dlog(f.from_index(2)).unwrap(), 2);
        assert_eq!(f.dlog(f.one()).unwrap(), 0);
        assert_eq!(f.dlog(f.generator()).unwrap(), 1);
    }

    #[test]
    fn errors() {
        assert_eq!(make_field(6, 1).unwrap_err(), FieldError::NotPrime(6));
        assert!(matches!(make_field(2, 17), Err(FieldError::FieldTooLarge { .. })));
        let f = make_field(5, 1).unwrap();
        assert_eq!(f.inv(f.zero()), Err(FieldError::ZeroInverse));
        assert_eq!(f.dlog(f.zero()), Err(FieldError::ZeroArgument));
        let g = make_field(7, 1).unwrap();
        assert!(matches!(f.add(f.one(), g.one()), Err(FieldError::FieldMismatch { .. })));
    }

    #[test]
    fn minus_one_log() {
        for (p, k) in [(2, 3), (3, 2), (5, 1), (7, 1), (2, 4), (13, 1)] {
            let f = make_field(p, k).unwrap();
            let m1 = f.neg(f.one()).unwrap();
            let expected = if f.order() % 2 == 1 { (f.order() - 1) / 2 } else { 0 };
            assert_eq!(f.dlog(m1).unwrap(), expected);
        }
    }
}
