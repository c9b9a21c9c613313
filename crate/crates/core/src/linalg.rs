//! Dense exact linear algebra over `Q` and `Q(v)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::scalar::{Poly, RatFunc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("integer {0} is too large to factor for rational root search")]
    TooLarge(String),
}

/// The field operations the elimination routines need.
pub trait FieldElem: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Inverse of a nonzero element.
    fn inv(&self) -> Self;
    /// Rough size, used to prefer cheap pivots.
    fn weight(&self) -> usize;
}

impl FieldElem for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        self.recip()
    }
    fn weight(&self) -> usize {
        (self.numer().bits() + self.denom().bits()) as usize
    }
}

impl FieldElem for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        RatFunc::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RatFunc::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RatFunc::mul(self, o)
    }
    fn neg(&self) -> Self {
        RatFunc::neg(self)
    }
    fn inv(&self) -> Self {
        RatFunc::inv(self).expect("inverse of a nonzero rational function")
    }
    fn weight(&self) -> usize {
        self.num().degree().unwrap_or(0) + self.den().degree().unwrap_or(0)
    }
}

pub type Matrix<T> = Vec<Vec<T>>;

pub fn identity<T: FieldElem>(d: usize) -> Matrix<T> {
    (0..d)
        .map(|i| (0..d).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

pub fn zeros<T: FieldElem>(r: usize, c: usize) -> Matrix<T> {
    vec![vec![T::zero(); c]; r]
}

pub fn mat_mul<T: FieldElem>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = T::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc = acc.add(&row[k].mul(&b[k][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_add<T: FieldElem>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.add(y)).collect())
        .collect()
}

pub fn mat_scale<T: FieldElem>(a: &Matrix<T>, c: &T) -> Matrix<T> {
    a.iter().map(|r| r.iter().map(|x| x.mul(c)).collect()).collect()
}

pub fn mat_vec<T: FieldElem>(a: &Matrix<T>, v: &[T]) -> Vec<T> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(T::zero(), |acc, (x, y)| acc.add(&x.mul(y))))
        .collect()
}

pub fn transpose<T: FieldElem>(a: &Matrix<T>) -> Matrix<T> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn is_zero_matrix<T: FieldElem>(a: &Matrix<T>) -> bool {
    a.iter().all(|r| r.iter().all(FieldElem::is_zero))
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<T: FieldElem>(m: &mut Matrix<T>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows)
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| m[i][c].weight())
        else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv();
        for x in m[r].iter_mut() {
            if !x.is_zero() {
                *x = x.mul(&inv);
            }
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<T: FieldElem>(m: &Matrix<T>) -> usize {
    rref(&mut m.clone()).len()
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace<T: FieldElem>(m: &Matrix<T>, cols: usize) -> Vec<Vec<T>> {
    let mut r = m.clone();
    let pivots = rref(&mut r);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![T::zero(); cols];
            x[f] = T::one();
            for (i, &p) in pivots.iter().enumerate() {
                x[p] = r[i][f].neg();
            }
            x
        })
        .collect()
}

/// Outcome of solving `A x = b`.
#[derive(Debug, Clone, PartialEq)]
pub enum Solution<T> {
    Unique(Vec<T>),
    /// Consistent, with a free column (the columns are dependent).
    NotUnique,
    Inconsistent,
}

pub fn solve<T: FieldElem>(a: &Matrix<T>, b: &[T], cols: usize) -> Solution<T> {
    let mut aug: Matrix<T> = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return Solution::Inconsistent;
    }
    if pivots.len() < cols {
        return Solution::NotUnique;
    }
    Solution::Unique(aug.iter().take(cols).map(|r| r[cols].clone()).collect())
}

/// Inverse of a square matrix, if it is invertible.
pub fn inverse<T: FieldElem>(m: &Matrix<T>) -> Option<Matrix<T>> {
    let d = m.len();
    let mut aug: Matrix<T> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend((0..d).map(|j| if i == j { T::one() } else { T::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < d || pivots[d - 1] >= d {
        return None;
    }
    Some(aug.into_iter().map(|r| r[d..].to_vec()).collect())
}

/// Basis of the intersection of two subspaces given by spanning vectors.
pub fn intersect<T: FieldElem>(a: &[Vec<T>], b: &[Vec<T>], dim: usize) -> Vec<Vec<T>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // columns a_1..a_k, -b_1..-b_m; kernel vectors give common elements
    let k = a.len();
    let m: Matrix<T> = (0..dim)
        .map(|i| {
            a.iter()
                .map(|v| v[i].clone())
                .chain(b.iter().map(|v| v[i].neg()))
                .collect()
        })
        .collect();
    let mut span = SpanBuilder::new();
    for x in nullspace(&m, k + b.len()) {
        let v: Vec<T> = (0..dim)
            .map(|i| (0..k).fold(T::zero(), |acc, j| acc.add(&x[j].mul(&a[j][i]))))
            .collect();
        span.insert(&v);
    }
    span.rows
}

/// Echelon basis of the span of `vs`, with its pivot columns.
#[derive(Debug, Clone)]
pub struct SpanBuilder<T> {
    rows: Vec<Vec<T>>,
    pivots: Vec<usize>,
}

impl<T: FieldElem> SpanBuilder<T> {
    pub fn new() -> Self {
        SpanBuilder {
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Residue of `v` modulo the current span.
    pub fn reduce(&self, v: &[T]) -> Vec<T> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x = x.sub(&f.mul(y));
                    }
                }
            }
        }
        v
    }

    /// Add `v`; returns false when it already lies in the span.
    pub fn insert(&mut self, v: &[T]) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inv();
        for x in r.iter_mut() {
            *x = x.mul(&inv);
        }
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, y) in row.iter_mut().zip(&r) {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        self.rows.push(r);
        self.pivots.push(p);
        true
    }

    pub fn contains(&self, v: &[T]) -> bool {
        self.reduce(v).iter().all(FieldElem::is_zero)
    }

    pub fn basis(&self) -> &[Vec<T>] {
        &self.rows
    }
}

impl<T: FieldElem> Default for SpanBuilder<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// Smallest subspace containing `seeds` and stable under every matrix in `gens`.
pub fn spin<T: FieldElem>(seeds: &[Vec<T>], gens: &[Matrix<T>]) -> Vec<Vec<T>> {
    let mut span = SpanBuilder::new();
    let mut queue: Vec<Vec<T>> = Vec::new();
    for s in seeds {
        if span.insert(s) {
            queue.push(s.clone());
        }
    }
    while let Some(v) = queue.pop() {
        for g in gens {
            let w = mat_vec(g, &v);
            if span.insert(&w) {
                queue.push(w);
            }
        }
    }
    span.rows
}

/// Dimension of the unital algebra generated by `gens` (all `d × d`).
pub fn algebra_dimension<T: FieldElem>(gens: &[Matrix<T>], d: usize) -> usize {
    let flat = |m: &Matrix<T>| -> Vec<T> { m.iter().flatten().cloned().collect() };
    let mut span = SpanBuilder::new();
    let id = identity::<T>(d);
    span.insert(&flat(&id));
    let mut queue = vec![id];
    while let Some(x) = queue.pop() {
        for g in gens {
            let y = mat_mul(&x, g);
            if span.insert(&flat(&y)) {
                queue.push(y);
            }
        }
        if span.dim() == d * d {
            break;
        }
    }
    span.dim()
}

/// Characteristic polynomial `det(x I - m)` by Faddeev–LeVerrier.
pub fn charpoly(m: &Matrix<BigRational>) -> Poly {
    let n = m.len();
    let mut coeffs = vec![<BigRational as Zero>::zero(); n + 1];
    coeffs[n] = <BigRational as One>::one();
    let mut mk = zeros::<BigRational>(n, n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k
        let mut next = mat_mul(m, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] = &row[i] + &coeffs[n - k + 1];
        }
        mk = next;
        let am = mat_mul(m, &mk);
        let tr: BigRational = (0..n).map(|i| am[i][i].clone()).sum();
        coeffs[n - k] = -tr / BigRational::from_integer(BigInt::from(k));
    }
    Poly::new(coeffs)
}

const FACTOR_LIMIT: u64 = 1 << 40;

fn divisors(n: &BigInt) -> Result<Vec<BigInt>, LinalgError> {
    let n = n.abs();
    let v = n
        .to_u64()
        .filter(|&v| v <= FACTOR_LIMIT)
        .ok_or_else(|| LinalgError::TooLarge(n.to_string()))?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= v {
        if v % d == 0 {
            out.push(BigInt::from(d));
            if d * d != v {
                out.push(BigInt::from(v / d));
            }
        }
        d += 1;
    }
    Ok(out)
}

/// Distinct rational roots of `p`, sorted.
pub fn rational_roots(p: &Poly) -> Result<Vec<BigRational>, LinalgError> {
    let Some(deg) = p.degree() else {
        return Err(LinalgError::Dimension("zero polynomial".into()));
    };
    let mut roots = Vec::new();
    if deg == 0 {
        return Ok(roots);
    }
    // strip the factor x^k
    let val = p.valuation().unwrap_or(0);
    if val > 0 {
        roots.push(<BigRational as Zero>::zero());
    }
    let c: Vec<BigRational> = p.coeffs()[val..].to_vec();
    if c.len() <= 1 {
        return Ok(roots);
    }
    let lcm = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = c
        .iter()
        .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let a0 = ints.first().unwrap();
    let an = ints.last().unwrap();
    let q = Poly::new(c);
    for num in divisors(a0)? {
        for den in divisors(an)? {
            for sign in [1, -1] {
                let r = BigRational::new(BigInt::from(sign) * &num, den.clone());
                if Zero::is_zero(&q.eval(&r)) && !roots.contains(&r) {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort();
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn qm(rows: &[&[i64]]) -> Matrix<BigRational> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn rref_and_nullspace() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(rank(&m), 1);
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(mat_vec(&m, &v).iter().all(FieldElem::is_zero));
        }
    }

    #[test]
    fn solve_cases() {
        let a = qm(&[&[1, 1], &[1, -1]]);
        assert_eq!(solve(&a, &[q(3), q(1)], 2), Solution::Unique(vec![q(2), q(1)]));
        let b = qm(&[&[1, 1], &[2, 2]]);
        assert_eq!(solve(&b, &[q(1), q(3)], 2), Solution::Inconsistent);
        assert_eq!(solve(&b, &[q(1), q(2)], 2), Solution::NotUnique);
    }

    #[test]
    fn charpoly_and_roots() {
        let m = qm(&[&[2, 1], &[0, 3]]);
        let p = charpoly(&m);
        assert_eq!(p, Poly::from_ints(&[6, -5, 1]));
        assert_eq!(rational_roots(&p).unwrap(), vec![q(2), q(3)]);
        let r = rational_roots(&Poly::from_ints(&[0, -2, 0, 1])).unwrap();
        assert_eq!(r, vec![q(0)]);
    }

    #[test]
    fn burnside_dimension() {
        let e12 = qm(&[&[0, 1], &[0, 0]]);
        let e21 = qm(&[&[0, 0], &[1, 0]]);
        assert_eq!(algebra_dimension(&[e12.clone(), e21], 2), 4);
        assert_eq!(algebra_dimension(&[e12], 2), 2);
    }

    #[test]
    fn ratfunc_solve() {
        let v = RatFunc::v();
        let a = vec![vec![v.clone(), RatFunc::one()], vec![RatFunc::one(), RatFunc::zero()]];
        let Solution::Unique(x) = solve(&a, &[v.mul(&v), RatFunc::from_int(2)], 2) else {
            panic!("expected a unique solution");
        };
        assert_eq!(x[0], RatFunc::from_int(2));
        assert_eq!(x[1], v.mul(&v).sub(&RatFunc::from_int(2).mul(&v)));
    }
}
