//! Finite, affine and twisted affine Hecke algebras of type A in the
//! Iwahori–Matsumoto basis.
//!
//! Elements are finite sums `Σ c_w [w]` with `c_w ∈ Z[v, v^{-1}]`, `z = v²`.
//! Right multiplication by a generator is the only primitive:
//!
//! ```text
//! [w][ς_i] = [wς_i]                      if ℓ(wς_i) > ℓ(w)
//!          = z[wς_i] + (z-1)[w]          otherwise
//! [w][Π]   = [wΠ],   [w][ζ] = [wζ]
//! ```
//!
//! and `x·[w]` expands `[w] = [Π]^a [ζ]^b [ς_{i_1}]⋯[ς_{i_l}]` along its
//! reduced word.
//!
//! The commutative subalgebra is spanned by Bernstein elements
//! `θ_λ = [t_μ][t_ν]^{-1}` with `λ = μ - ν`, `μ, ν` dominant. The raw basis
//! elements `[t_λ]` do not commute with each other in general.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{Laurent, RatFuncJson};
use crate::weyl::{Perm, TwistedAffineWeylElem as W, WeylError, WeylJson};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeckeError {
    #[error("element {0} does not belong to the {1} algebra")]
    FlavorMismatch(String, Flavor),
    #[error("algebras differ: {0:?} vs {1:?}")]
    AlgebraMismatch(AlgebraId, AlgebraId),
    #[error("generator {0} is not available in this algebra")]
    NoSuchGenerator(String),
    #[error("cannot parse word {0:?}: {1}")]
    Parse(String, String),
    #[error(transparent)]
    Weyl(#[from] WeylError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// `H_0(t, z)`, spanned by `[σ]`, `σ ∈ S_t`.
    Finite,
    /// `H(t, z)`, spanned by `[w]`, `w ∈ Z^t ⋊ S_t`.
    Affine,
    /// `H̃(t, s, z)`, spanned by `[w]`, `w ∈ Z^t_{1/s} ⋊ S_t`.
    Twisted,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Finite => "finite",
            Flavor::Affine => "affine",
            Flavor::Twisted => "twisted",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraId {
    pub t: usize,
    pub s: u32,
    pub flavor: Flavor,
}

impl AlgebraId {
    pub fn finite(t: usize) -> Self {
        AlgebraId {
            t,
            s: 1,
            flavor: Flavor::Finite,
        }
    }

    pub fn affine(t: usize) -> Self {
        AlgebraId {
            t,
            s: 1,
            flavor: Flavor::Affine,
        }
    }

    pub fn twisted(t: usize, s: u32) -> Self {
        AlgebraId {
            t,
            s,
            flavor: Flavor::Twisted,
        }
    }

    pub fn contains(&self, w: &W) -> bool {
        if w.rank() != self.t || w.twist() != self.s {
            return false;
        }
        match self.flavor {
            Flavor::Finite => w.num().iter().all(|&x| x == 0),
            Flavor::Affine => w.is_integral(),
            Flavor::Twisted => true,
        }
    }

    fn check(&self, w: &W) -> Result<(), HeckeError> {
        if self.contains(w) {
            Ok(())
        } else {
            Err(HeckeError::FlavorMismatch(format!("{:?}", w.to_json()), self.flavor))
        }
    }

    fn has_pi(&self) -> bool {
        self.flavor != Flavor::Finite
    }
}

/// A generator of the algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    /// `ς_i`, `0 ≤ i < t`; `ς_0` is not available in the finite algebra.
    S(usize),
    Pi,
    Zeta,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeElement {
    alg: AlgebraId,
    terms: BTreeMap<W, Laurent>,
}

/// One term of the JSON dump.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub weyl: WeylJson,
    pub word: String,
    pub coeff: RatFuncJson,
}

impl HeckeElement {
    pub fn zero(alg: AlgebraId) -> Self {
        HeckeElement {
            alg,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(alg: AlgebraId) -> Self {
        Self::basis_unchecked(alg, W::identity(alg.t, alg.s))
    }

    fn basis_unchecked(alg: AlgebraId, w: W) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, Laurent::one());
        HeckeElement { alg, terms }
    }

    /// The basis vector `[w]`.
    pub fn basis_elem(alg: AlgebraId, w: &W) -> Result<Self, HeckeError> {
        alg.check(w)?;
        Ok(Self::basis_unchecked(alg, w.clone()))
    }

    pub fn generator(alg: AlgebraId, g: Generator) -> Result<Self, HeckeError> {
        let w = match g {
            Generator::S(i) => {
                if alg.flavor == Flavor::Finite && i == 0 {
                    return Err(HeckeError::NoSuchGenerator("s0".into()));
                }
                W::simple(alg.t, alg.s, i)?
            }
            Generator::Pi if alg.has_pi() => W::pi(alg.t, alg.s),
            Generator::Zeta if alg.flavor == Flavor::Twisted => W::zeta(alg.t, alg.s),
            Generator::Pi => return Err(HeckeError::NoSuchGenerator("pi".into())),
            Generator::Zeta => return Err(HeckeError::NoSuchGenerator("zeta".into())),
        };
        Self::basis_elem(alg, &w)
    }

    /// `[ς_i]^{-1} = z^{-1}[ς_i] + (z^{-1} - 1)`, `[Π]^{-1} = [Π^{-1}]`, `[ζ]^{-1} = [ζ^{-1}]`.
    pub fn generator_inverse(alg: AlgebraId, g: Generator) -> Result<Self, HeckeError> {
        let x = Self::generator(alg, g)?;
        Ok(match g {
            Generator::S(i) => Self::one(alg).right_mul_simple_inv(i),
            Generator::Pi => x.right_mul_pi_pow(-2),
            Generator::Zeta => x.right_mul_zeta_pow(-2),
        })
    }

    pub fn algebra(&self) -> AlgebraId {
        self.alg
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&W, &Laurent)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &W) -> Laurent {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, w: W, c: &Laurent) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign_ref(c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Adds `c·[w]`, checking membership.
    pub fn add_basis(&mut self, w: &W, c: &Laurent) -> Result<(), HeckeError> {
        self.alg.check(w)?;
        self.add_term(w.clone(), c);
        Ok(())
    }

    fn same_alg(&self, other: &Self) -> Result<(), HeckeError> {
        if self.alg != other.alg {
            return Err(HeckeError::AlgebraMismatch(self.alg, other.alg));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, HeckeError> {
        self.same_alg(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, HeckeError> {
        self.add(&other.scale(&Laurent::constant(-1)))
    }

    pub fn scale(&self, c: &Laurent) -> Self {
        let mut out = Self::zero(self.alg);
        for (w, x) in &self.terms {
            out.add_term(w.clone(), &(x * c));
        }
        out
    }

    /// `x·[ς_i]`.
    pub fn right_mul_simple(&self, i: usize) -> Self {
        let z = Laurent::z();
        let zm1 = &z - &Laurent::one();
        let mut out = Self::zero(self.alg);
        for (w, c) in &self.terms {
            let ws = w.mul_simple(i);
            if ws.length() > w.length() {
                out.add_term(ws, c);
            } else {
                out.add_term(ws, &(c * &z));
                out.add_term(w.clone(), &(c * &zm1));
            }
        }
        out
    }

    /// `x·[ς_i]^{-1}`.
    pub fn right_mul_simple_inv(&self, i: usize) -> Self {
        let zi = Laurent::z_pow(-1);
        let zim1 = &zi - &Laurent::one();
        let mut out = Self::zero(self.alg);
        for (w, c) in &self.terms {
            let ws = w.mul_simple(i);
            if ws.length() > w.length() {
                out.add_term(ws, &(c * &zi));
                out.add_term(w.clone(), &(c * &zim1));
            } else {
                out.add_term(ws, c);
            }
        }
        out
    }

    /// `x·[Π]^k`.
    pub fn right_mul_pi_pow(&self, k: i64) -> Self {
        let p = W::pi(self.alg.t, self.alg.s).pow(k);
        HeckeElement {
            alg: self.alg,
            terms: self.terms.iter().map(|(w, c)| (w.mul(&p), c.clone())).collect(),
        }
    }

    /// `x·[ζ]^k`.
    pub fn right_mul_zeta_pow(&self, k: i64) -> Self {
        HeckeElement {
            alg: self.alg,
            terms: self.terms.iter().map(|(w, c)| (w.mul_zeta_pow(k), c.clone())).collect(),
        }
    }

    /// `x·[w]`.
    pub fn right_mul_basis(&self, w: &W) -> Self {
        self.right_mul_word(&w.reduced_word())
    }

    /// `x·[Π]^a [ζ]^b [ς_{i_1}]⋯[ς_{i_l}]` for an arbitrary (not necessarily
    /// reduced) word; equals `x·[w]` when the word is reduced.
    pub fn right_mul_word(&self, rw: &crate::weyl::ReducedWord) -> Self {
        let mut x = self.right_mul_pi_pow(rw.a).right_mul_zeta_pow(rw.b as i64);
        for &i in &rw.word {
            x = x.right_mul_simple(i);
        }
        x
    }

    /// `x·[w]^{-1}`.
    pub fn right_mul_basis_inv(&self, w: &W) -> Self {
        let rw = w.reduced_word();
        let mut x = self.clone();
        for &i in rw.word.iter().rev() {
            x = x.right_mul_simple_inv(i);
        }
        x.right_mul_zeta_pow(-(rw.b as i64)).right_mul_pi_pow(-rw.a)
    }

    pub fn multiply(&self, other: &Self) -> Result<Self, HeckeError> {
        self.same_alg(other)?;
        let mut out = Self::zero(self.alg);
        for (w, c) in &other.terms {
            for (u, d) in self.right_mul_basis(w).terms {
                out.add_term(u, &(&d * c));
            }
        }
        Ok(out)
    }

    /// Product computed with an explicit word for each basis element of the
    /// right factor; `word_for(w)` must return a reduced word for `w`.
    pub fn multiply_with_words(
        &self,
        other: &Self,
        mut word_for: impl FnMut(&W) -> crate::weyl::ReducedWord,
    ) -> Result<Self, HeckeError> {
        self.same_alg(other)?;
        let mut out = Self::zero(self.alg);
        for (w, c) in &other.terms {
            for (u, d) in self.right_mul_word(&word_for(w)).terms {
                out.add_term(u, &(&d * c));
            }
        }
        Ok(out)
    }

    fn theta_parts(&self, num: &[i64]) -> Result<(W, W), HeckeError> {
        if self.alg.flavor == Flavor::Finite {
            return Err(HeckeError::FlavorMismatch(format!("{num:?}"), Flavor::Finite));
        }
        let (mu, nu) = dominant_split(num, self.alg.s)?;
        self.alg.check(&mu)?;
        Ok((mu, nu))
    }

    /// `x·θ_λ` with `λ = num / s`.
    pub fn right_mul_theta(&self, num: &[i64]) -> Result<Self, HeckeError> {
        let (mu, nu) = self.theta_parts(num)?;
        Ok(self.right_mul_basis(&mu).right_mul_basis_inv(&nu))
    }

    /// `θ_λ` for `λ = num / s`, where `num` has length `t` and its entries are
    /// congruent mod `s`.
    pub fn bernstein_theta(alg: AlgebraId, num: &[i64]) -> Result<Self, HeckeError> {
        Self::one(alg).right_mul_theta(num)
    }

    /// `[t_{λ+ν}][t_ν]^{-1}` for a caller-chosen integral `ν` with both `ν` and
    /// `λ + ν` dominant.
    pub fn theta_with(alg: AlgebraId, num: &[i64], nu: &[i64]) -> Result<Self, HeckeError> {
        let s = alg.s as i64;
        let mu_num: Vec<i64> = num.iter().zip(nu).map(|(a, b)| a + b * s).collect();
        if !is_dominant(&mu_num) || !is_dominant(nu) {
            return Err(HeckeError::FlavorMismatch(
                format!("{nu:?} does not give a dominant pair"),
                alg.flavor,
            ));
        }
        let mu = W::translation_num(alg.s, mu_num)?;
        alg.check(&mu)?;
        let nu = W::translation(alg.s, nu);
        Ok(Self::one(alg).right_mul_basis(&mu).right_mul_basis_inv(&nu))
    }

    /// `⟨x, y⟩ = Σ_w x_w · y_w · z^{ℓ(w)}` (coefficients are real, so no conjugation).
    pub fn hermitian_form(&self, other: &Self) -> Result<Laurent, HeckeError> {
        self.same_alg(other)?;
        let mut acc = Laurent::zero();
        for (w, c) in &self.terms {
            if let Some(d) = other.terms.get(w) {
                acc.add_assign_ref(&(&(c * d) * &Laurent::z_pow(w.length() as i32)));
            }
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(w, c)| TermJson {
                weyl: w.to_json(),
                word: w.to_string(),
                coeff: c.to_ratfunc().to_json(),
            })
            .collect()
    }

    /// Map from the word of each basis element to its coefficient, both as text.
    pub fn to_word_map(&self) -> BTreeMap<String, String> {
        self.terms.iter().map(|(w, c)| (w.to_string(), c.to_string())).collect()
    }

    /// Parse a product of generators such as `s1*s2*pi^-1*zeta^2`, or `id`.
    pub fn parse_word(alg: AlgebraId, text: &str) -> Result<Self, HeckeError> {
        let perr = |m: &str| HeckeError::Parse(text.to_string(), m.to_string());
        let mut x = Self::one(alg);
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(perr("empty word"));
        }
        for tok in cleaned.split('*') {
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => (n, e.parse::<i64>().map_err(|_| perr("bad exponent"))?),
                None => (tok, 1),
            };
            let g = match name {
                "id" | "1" => continue,
                "pi" => Generator::Pi,
                "zeta" => Generator::Zeta,
                _ => {
                    let i = name
                        .strip_prefix('s')
                        .and_then(|i| i.parse::<usize>().ok())
                        .ok_or_else(|| perr("unknown generator"))?;
                    Generator::S(i)
                }
            };
            Self::generator(alg, g)?;
            x = match g {
                Generator::Pi => x.right_mul_pi_pow(exp),
                Generator::Zeta => x.right_mul_zeta_pow(exp),
                Generator::S(i) => {
                    let mut y = x;
                    for _ in 0..exp.unsigned_abs() {
                        y = if exp > 0 {
                            y.right_mul_simple(i)
                        } else {
                            y.right_mul_simple_inv(i)
                        };
                    }
                    y
                }
            };
        }
        Ok(x)
    }
}

impl fmt::Display for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("({c})[{w}]")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Entries weakly decreasing.
pub fn is_dominant(v: &[i64]) -> bool {
    v.windows(2).all(|p| p[0] >= p[1])
}

/// The minimal integral dominant `ν` with `λ + ν` dominant (`ν_t = 0`), and
/// the translations `t_{λ+ν}`, `t_ν`.
pub fn dominant_split(num: &[i64], s: u32) -> Result<(W, W), HeckeError> {
    let t = num.len();
    let si = s as i64;
    let mut nu = vec![0i64; t];
    for i in (0..t.saturating_sub(1)).rev() {
        // λ_{i+1} - λ_i is integral, so its numerator is divisible by s
        let gap = (num[i + 1] - num[i]) / si;
        nu[i] = nu[i + 1] + gap.max(0);
    }
    let mu_num: Vec<i64> = num.iter().zip(&nu).map(|(a, b)| a + b * si).collect();
    let mu = W::translation_num(s, mu_num)?;
    Ok((mu, W::translation(s, &nu)))
}

/// Outcome of one defining relation.
#[derive(Debug, Clone, Serialize)]
pub struct RelationCheck {
    pub name: String,
    pub holds: bool,
}

/// Evaluate every defining relation of the algebra on its generators.
pub fn verify_relations(alg: AlgebraId) -> Result<Vec<RelationCheck>, HeckeError> {
    let t = alg.t;
    let one = HeckeElement::one(alg);
    let gen = |g| HeckeElement::generator(alg, g);
    let mut out = Vec::new();
    let mut push = |name: String, lhs: &HeckeElement, rhs: &HeckeElement| {
        out.push(RelationCheck {
            name,
            holds: lhs == rhs,
        });
    };
    let z = Laurent::z();
    for i in 1..t {
        for j in 1..t {
            if i.abs_diff(j) >= 2 {
                let (a, b) = (gen(Generator::S(i))?, gen(Generator::S(j))?);
                push(format!("(1) s{i} s{j} = s{j} s{i}"), &a.multiply(&b)?, &b.multiply(&a)?);
            }
        }
    }
    for i in 1..t.saturating_sub(1) {
        let (a, b) = (gen(Generator::S(i))?, gen(Generator::S(i + 1))?);
        push(
            format!("(2) braid s{i} s{}", i + 1),
            &a.multiply(&b)?.multiply(&a)?,
            &b.multiply(&a)?.multiply(&b)?,
        );
    }
    for i in 1..t {
        let a = gen(Generator::S(i))?;
        let lhs = a.sub(&one.scale(&z))?.multiply(&a.add(&one)?)?;
        push(format!("(3) quadratic s{i}"), &lhs, &HeckeElement::zero(alg));
    }
    if !alg.has_pi() {
        return Ok(out);
    }
    let pi = gen(Generator::Pi)?;
    let pi_inv = HeckeElement::generator_inverse(alg, Generator::Pi)?;
    push("(4) pi invertible".into(), &pi.multiply(&pi_inv)?, &one);
    push("(4) pi invertible (left)".into(), &pi_inv.multiply(&pi)?, &one);
    for i in 2..t {
        let a = gen(Generator::S(i))?;
        let b = gen(Generator::S(i - 1))?;
        push(
            format!("(5) pi s{i} = s{} pi", i - 1),
            &pi.multiply(&a)?,
            &b.multiply(&pi)?,
        );
    }
    if t >= 2 {
        let pi2 = pi.multiply(&pi)?;
        let s1 = gen(Generator::S(1))?;
        let st = gen(Generator::S(t - 1))?;
        push(
            "(6) pi^2 s1 = s(t-1) pi^2".into(),
            &pi2.multiply(&s1)?,
            &st.multiply(&pi2)?,
        );
        let s0 = gen(Generator::S(0))?;
        push("s0 = pi s1 pi^-1".into(), &s0, &pi.multiply(&s1)?.multiply(&pi_inv)?);
        push(
            "s0 = pi^-1 s(t-1) pi".into(),
            &s0,
            &pi_inv.multiply(&st)?.multiply(&pi)?,
        );
    }
    let pit = (0..t).try_fold(one.clone(), |acc, _| acc.multiply(&pi))?;
    let mut gens: Vec<HeckeElement> = (1..t).map(|i| gen(Generator::S(i))).collect::<Result<_, _>>()?;
    gens.push(pi.clone());
    let central = gens
        .iter()
        .map(|g| Ok(pit.multiply(g)? == g.multiply(&pit)?))
        .collect::<Result<Vec<bool>, HeckeError>>()?;
    out.push(RelationCheck {
        name: "pi^t central".into(),
        holds: central.iter().all(|&b| b),
    });
    if alg.flavor != Flavor::Twisted {
        return Ok(out);
    }
    let zeta = gen(Generator::Zeta)?;
    let zeta_inv = HeckeElement::generator_inverse(alg, Generator::Zeta)?;
    let central = gens
        .iter()
        .map(|g| Ok(zeta.multiply(g)? == g.multiply(&zeta)?))
        .collect::<Result<Vec<bool>, HeckeError>>()?;
    out.push(RelationCheck {
        name: "(7) zeta central".into(),
        holds: central.iter().all(|&b| b),
    });
    out.push(RelationCheck {
        name: "(7) zeta invertible".into(),
        holds: zeta.multiply(&zeta_inv)? == one && zeta_inv.multiply(&zeta)? == one,
    });
    let zs = (0..alg.s).try_fold(one.clone(), |acc, _| acc.multiply(&zeta))?;
    out.push(RelationCheck {
        name: "(8) zeta^s = pi^t".into(),
        holds: zs == pit,
    });
    Ok(out)
}

/// Every `σ ∈ S_t` as an element of the algebra's Weyl group.
pub fn finite_weyl(alg: AlgebraId) -> Vec<W> {
    Perm::all(alg.t).into_iter().map(|p| W::from_perm(alg.s, p)).collect()
}
