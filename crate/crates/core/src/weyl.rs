//! Extended and twisted affine Weyl groups of type `A_{t-1}`.
//!
//! An element is `t_λ · σ` with `λ ∈ Z^t_{1/s} = Z^t + Z·(1/s, …, 1/s)` stored
//! as `num / s`, and `σ ∈ S_t`. Multiplication follows
//! `(λ, σ)(μ, τ) = (λ + σ·μ, στ)` with `(σ·μ)_j = μ_{σ^{-1}(j)}` and
//! `(στ)(i) = σ(τ(i))`.
//!
//! Distinguished elements:
//! - `ς_i = (i, i+1)` for `1 ≤ i < t`;
//! - `Π = t_{e_t} · c` with `c(i) = i - 1 mod t`, so that `Π ς_i Π^{-1} = ς_{i-1}`;
//! - `ς_0 = Π ς_1 Π^{-1} = t_{e_t - e_1} · (1 t)`;
//! - `ζ = t_{(1/s, …, 1/s)}`, central, with `Π^t = ζ^s`.
//!
//! Permutations are stored 0-based; JSON uses 1-based images.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("twist mismatch: {0} vs {1}")]
    TwistMismatch(u32, u32),
    #[error("not a permutation: {0:?}")]
    NotAPermutation(Vec<usize>),
    #[error("translation {0:?} is not in Z^t + Z(1/s,...,1/s) for s = {1}")]
    NotInLattice(Vec<i64>, u32),
    #[error("twist denominator must be positive")]
    ZeroTwist,
    #[error("simple reflection index {0} out of range for t = {1}")]
    BadReflection(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(t: usize) -> Self {
        Perm((0..t).collect())
    }

    /// From 0-based images.
    pub fn new(images: Vec<usize>) -> Result<Self, WeylError> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(WeylError::NotAPermutation(images));
            }
            seen[i] = true;
        }
        Ok(Perm(images))
    }

    /// From 1-based images.
    pub fn from_one_based(images: &[usize]) -> Result<Self, WeylError> {
        if images.contains(&0) {
            return Err(WeylError::NotAPermutation(images.to_vec()));
        }
        Self::new(images.iter().map(|&i| i - 1).collect())
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|&i| i + 1).collect()
    }

    /// Transposition of the 0-based positions `a` and `b`.
    pub fn transposition(t: usize, a: usize, b: usize) -> Self {
        let mut v: Vec<usize> = (0..t).collect();
        v.swap(a, b);
        Perm(v)
    }

    /// The cycle `c(i) = i - 1 mod t` (1-based), i.e. `i ↦ i + t - 1 mod t` 0-based.
    pub fn rotation(t: usize) -> Self {
        Perm((0..t).map(|i| (i + t - 1) % t).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `(σ·μ)_j = μ_{σ^{-1}(j)}`.
    pub fn act<T: Copy>(&self, mu: &[T]) -> Vec<T> {
        let mut out = mu.to_vec();
        for (i, &j) in self.0.iter().enumerate() {
            out[j] = mu[i];
        }
        out
    }

    /// Every permutation of `0..t` in lexicographic order of images.
    pub fn all(t: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..t).collect();
        loop {
            out.push(Perm(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (1..t).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..t).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }

    pub fn inversions(&self) -> usize {
        let v = &self.0;
        (0..v.len())
            .flat_map(|i| (i + 1..v.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| v[i] > v[j])
            .count()
    }
}

/// `t_{num/s} · perm`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwistedAffineWeylElem {
    s: u32,
    num: Vec<i64>,
    perm: Perm,
}

/// JSON form: `{"s": 2, "num": [1, 3], "perm": [2, 1]}` with 1-based images.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylJson {
    pub s: u32,
    pub num: Vec<i64>,
    pub perm: Vec<usize>,
}

/// Normal form `Π^a · ζ^b · ς_{w_1} ⋯ ς_{w_k}` with `0 ≤ b < s` and `k` minimal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedWord {
    pub a: i64,
    pub b: u32,
    pub word: Vec<usize>,
}

impl TwistedAffineWeylElem {
    pub fn new(s: u32, num: Vec<i64>, perm: Perm) -> Result<Self, WeylError> {
        if s == 0 {
            return Err(WeylError::ZeroTwist);
        }
        if num.len() != perm.len() {
            return Err(WeylError::RankMismatch(num.len(), perm.len()));
        }
        if let Some(&first) = num.first() {
            let r = first.rem_euclid(s as i64);
            if num.iter().any(|&x| x.rem_euclid(s as i64) != r) {
                return Err(WeylError::NotInLattice(num, s));
            }
        }
        Ok(TwistedAffineWeylElem { s, num, perm })
    }

    pub fn identity(t: usize, s: u32) -> Self {
        TwistedAffineWeylElem {
            s,
            num: vec![0; t],
            perm: Perm::identity(t),
        }
    }

    /// Translation by an integral vector.
    pub fn translation(s: u32, lambda: &[i64]) -> Self {
        TwistedAffineWeylElem {
            s,
            num: lambda.iter().map(|&x| x * s as i64).collect(),
            perm: Perm::identity(lambda.len()),
        }
    }

    /// Translation by `num / s`.
    pub fn translation_num(s: u32, num: Vec<i64>) -> Result<Self, WeylError> {
        let t = num.len();
        Self::new(s, num, Perm::identity(t))
    }

    pub fn from_perm(s: u32, perm: Perm) -> Self {
        TwistedAffineWeylElem {
            s,
            num: vec![0; perm.len()],
            perm,
        }
    }

    /// `ς_i` for `0 ≤ i < t`; `ς_0` is the affine reflection.
    pub fn simple(t: usize, s: u32, i: usize) -> Result<Self, WeylError> {
        if t < 2 || i >= t {
            return Err(WeylError::BadReflection(i, t));
        }
        if i == 0 {
            let mut num = vec![0; t];
            num[0] = -(s as i64);
            num[t - 1] = s as i64;
            return Ok(TwistedAffineWeylElem {
                s,
                num,
                perm: Perm::transposition(t, 0, t - 1),
            });
        }
        Ok(Self::from_perm(s, Perm::transposition(t, i - 1, i)))
    }

    pub fn pi(t: usize, s: u32) -> Self {
        let mut num = vec![0; t];
        num[t - 1] = s as i64;
        TwistedAffineWeylElem {
            s,
            num,
            perm: Perm::rotation(t),
        }
    }

    pub fn zeta(t: usize, s: u32) -> Self {
        TwistedAffineWeylElem {
            s,
            num: vec![1; t],
            perm: Perm::identity(t),
        }
    }

    pub fn from_json(j: &WeylJson) -> Result<Self, WeylError> {
        Self::new(j.s, j.num.clone(), Perm::from_one_based(&j.perm)?)
    }

    pub fn to_json(&self) -> WeylJson {
        WeylJson {
            s: self.s,
            num: self.num.clone(),
            perm: self.perm.one_based(),
        }
    }

    pub fn rank(&self) -> usize {
        self.num.len()
    }

    pub fn twist(&self) -> u32 {
        self.s
    }

    pub fn num(&self) -> &[i64] {
        &self.num
    }

    pub fn perm(&self) -> &Perm {
        &self.perm
    }

    pub fn is_identity(&self) -> bool {
        self.perm.is_identity() && self.num.iter().all(|&x| x == 0)
    }

    pub fn is_translation(&self) -> bool {
        self.perm.is_identity()
    }

    /// Whether the translation part is integral (the element lies in `Z^t ⋊ S_t`).
    pub fn is_integral(&self) -> bool {
        self.num.iter().all(|&x| x % self.s as i64 == 0)
    }

    /// Integral translation part; `None` if some entry is fractional.
    pub fn integral_translation(&self) -> Option<Vec<i64>> {
        self.is_integral()
            .then(|| self.num.iter().map(|&x| x / self.s as i64).collect())
    }

    fn compatible(&self, other: &Self) -> Result<(), WeylError> {
        if self.rank() != other.rank() {
            return Err(WeylError::RankMismatch(self.rank(), other.rank()));
        }
        if self.s != other.s {
            return Err(WeylError::TwistMismatch(self.s, other.s));
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, WeylError> {
        self.compatible(other)?;
        Ok(self.mul(other))
    }

    /// Product; panics on rank or twist mismatch (see [`Self::try_mul`]).
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.rank(), other.rank(), "rank mismatch");
        assert_eq!(self.s, other.s, "twist mismatch");
        let moved = self.perm.act(&other.num);
        TwistedAffineWeylElem {
            s: self.s,
            num: self.num.iter().zip(&moved).map(|(a, b)| a + b).collect(),
            perm: self.perm.compose(&other.perm),
        }
    }

    pub fn inv(&self) -> Self {
        let pinv = self.perm.inverse();
        let neg: Vec<i64> = self.num.iter().map(|&x| -x).collect();
        TwistedAffineWeylElem {
            s: self.s,
            num: pinv.act(&neg),
            perm: pinv,
        }
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut out = Self::identity(self.rank(), self.s);
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Length with respect to `{ς_0, …, ς_{t-1}}` after removing the
    /// length-zero part `Π^a ζ^b`:
    /// `ℓ(t_λ σ) = Σ_{i<j} |λ_{σ(i)} - λ_{σ(j)} - [σ(i) > σ(j)]|`.
    ///
    /// All differences `λ_a - λ_b` are integers, so the formula applies to
    /// twisted elements unchanged.
    pub fn length(&self) -> usize {
        let t = self.rank();
        let s = self.s as i64;
        let p = self.perm.images();
        let mut total = 0i64;
        for i in 0..t {
            for j in i + 1..t {
                let (a, b) = (p[i], p[j]);
                let diff = (self.num[a] - self.num[b]) / s;
                let ind = i64::from(a > b);
                total += (diff - ind).abs();
            }
        }
        total as usize
    }

    /// `Π^a ζ^b` part: `b` is the common residue of `num` mod `s`, `a` the
    /// sum of the remaining integral translation.
    pub fn pi_zeta_part(&self) -> (i64, u32) {
        let s = self.s as i64;
        let b = self.num.first().map_or(0, |x| x.rem_euclid(s));
        let a: i64 = self.num.iter().map(|&x| (x - b) / s).sum();
        (a, b as u32)
    }

    /// Reduced decomposition, descending greedily on the right with the
    /// smallest available index.
    pub fn reduced_word(&self) -> ReducedWord {
        self.reduced_word_by(|descents| descents[0])
    }

    /// Reduced decomposition where `choose` picks among the right descents
    /// (given in increasing order) at each step.
    pub fn reduced_word_by(&self, mut choose: impl FnMut(&[usize]) -> usize) -> ReducedWord {
        let t = self.rank();
        let (a, b) = self.pi_zeta_part();
        let head = Self::pi(t, self.s).pow(a).mul(&Self::zeta(t, self.s).pow(b as i64));
        let mut w = head.inv().mul(self);
        let mut word = Vec::new();
        let mut len = w.length();
        while len > 0 {
            let descents: Vec<usize> = (0..t).filter(|&i| w.mul_simple(i).length() < len).collect();
            let i = choose(&descents);
            w = w.mul_simple(i);
            len -= 1;
            word.push(i);
        }
        word.reverse();
        ReducedWord { a, b, word }
    }

    /// `w · ς_i`.
    pub fn mul_simple(&self, i: usize) -> Self {
        let t = self.rank();
        let mut out = self.clone();
        if i == 0 {
            // ς_0 = t_{e_t - e_1}·(1 t): translation lands at σ(t), σ(1)
            let s = self.s as i64;
            let (p1, pt) = (self.perm.apply(0), self.perm.apply(t - 1));
            out.num[pt] += s;
            out.num[p1] -= s;
            out.perm.0.swap(0, t - 1);
        } else {
            out.perm.0.swap(i - 1, i);
        }
        out
    }

    /// `w · Π^k`.
    pub fn mul_pi_pow(&self, k: i64) -> Self {
        self.mul(&Self::pi(self.rank(), self.s).pow(k))
    }

    /// `w · ζ^k`: shifts every entry of `num` by `k`.
    pub fn mul_zeta_pow(&self, k: i64) -> Self {
        let mut out = self.clone();
        for x in out.num.iter_mut() {
            *x += k;
        }
        out
    }

    /// Rebuild from a normal form.
    pub fn from_reduced(t: usize, s: u32, rw: &ReducedWord) -> Result<Self, WeylError> {
        let mut w = Self::pi(t, s).pow(rw.a).mul(&Self::zeta(t, s).pow(rw.b as i64));
        for &i in &rw.word {
            if t < 2 || i >= t {
                return Err(WeylError::BadReflection(i, t));
            }
            w = w.mul_simple(i);
        }
        Ok(w)
    }
}

impl fmt::Display for TwistedAffineWeylElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rw = self.reduced_word();
        let mut parts = Vec::new();
        if rw.a != 0 {
            parts.push(if rw.a == 1 {
                "pi".to_string()
            } else {
                format!("pi^{}", rw.a)
            });
        }
        if rw.b != 0 {
            parts.push(if rw.b == 1 {
                "zeta".to_string()
            } else {
                format!("zeta^{}", rw.b)
            });
        }
        parts.extend(rw.word.iter().map(|i| format!("s{i}")));
        if parts.is_empty() {
            write!(f, "id")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}
