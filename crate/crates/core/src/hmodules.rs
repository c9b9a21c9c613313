//! Induced modules `Ind_A^H(C_x) = H ⊗_A C_x` of the affine and twisted
//! affine Hecke algebras, and irreducibility tests after specializing `v`.
//!
//! The module has basis `[σ] ⊗ 1`, `σ ∈ S_t`. A generator `g` acts on
//! `[σ] ⊗ 1` by rewriting `[g][σ]` as `Σ [τ] θ_λ c_{τ,λ}` and then sending
//! `θ_λ ↦ x^λ`. The rewriting is an exact linear solve against the
//! expansions of `[τ]θ_λ` for `λ` in a translation box that grows until the
//! solve succeeds.
//!
//! Irreducibility is decided after substituting a rational value for `v`,
//! via the dimension of the algebra spanned by the action matrices. A full
//! matrix algebra means the module is absolutely irreducible; a specialization
//! that happens to hit a reducibility point is the caller's concern.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hecke::{AlgebraId, Flavor, Generator, HeckeElement, HeckeError};
use crate::linalg::{
    algebra_dimension, charpoly, identity, intersect, inverse, mat_mul, mat_vec, nullspace, rational_roots, solve,
    spin, transpose, FieldElem, LinalgError, Matrix, Solution, SpanBuilder,
};
use crate::scalar::{format_rational, RatFunc, ScalarError};
use crate::typeparams::{invariants_n0_d0_s0, TypeError, TypeParams};
use crate::weyl::{Perm, TwistedAffineWeylElem as W};

/// Largest side of the translation box searched by [`induce`].
pub const MAX_BOX_SIDE: i64 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("translation box exceeded side {MAX_BOX_SIDE} while rewriting {0}")]
    BoxOverflow(String),
    #[error("Bernstein expansion is not unique for {0}")]
    SingularSolve(String),
    #[error("invalid character point: {0}")]
    BadCharacter(String),
    #[error("specialization hits a pole")]
    SpecializationPole,
    #[error("relation {0} fails on the constructed module")]
    RelationFailed(String),
    #[error("{0} needs an affine or twisted algebra")]
    NeedsAffine(&'static str),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Type(#[from] TypeError),
}

impl From<ScalarError> for ModuleError {
    fn from(_: ScalarError) -> Self {
        ModuleError::SpecializationPole
    }
}

/// Values of `X_1, …, X_t` and, for the twisted algebra, of `Z` with
/// `Z^s = X_1 ⋯ X_t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterPoint {
    pub x: Vec<RatFunc>,
    pub zval: Option<RatFunc>,
}

impl CharacterPoint {
    pub fn new(x: Vec<RatFunc>, zval: Option<RatFunc>) -> Self {
        CharacterPoint { x, zval }
    }

    pub fn validate(&self, alg: AlgebraId) -> Result<(), ModuleError> {
        let bad = |m: String| Err(ModuleError::BadCharacter(m));
        if self.x.len() != alg.t {
            return bad(format!("expected {} values, got {}", alg.t, self.x.len()));
        }
        if self.x.iter().any(RatFunc::is_zero) {
            return bad("character values must be nonzero".into());
        }
        match (alg.flavor, &self.zval) {
            (Flavor::Finite, _) => Err(ModuleError::NeedsAffine("induce")),
            (Flavor::Affine, Some(_)) => bad("zval is only meaningful for the twisted algebra".into()),
            (Flavor::Affine, None) => Ok(()),
            (Flavor::Twisted, None) => bad("twisted algebra needs zval".into()),
            (Flavor::Twisted, Some(z)) => {
                let prod = self.x.iter().fold(RatFunc::one(), |a, b| a.mul(b));
                if z.pow(alg.s as i64)? != prod {
                    return bad(format!(
                        "zval^{} = {} differs from x_1...x_t = {prod}",
                        alg.s,
                        z.pow(alg.s as i64)?
                    ));
                }
                Ok(())
            }
        }
    }

    /// Value of the unnormalized `θ_λ`, `λ = num / s`. The `X_i` are the
    /// normalized elements `v^{-⟨λ,2ρ⟩} θ_λ`, so `θ_λ ↦ v^{⟨λ,2ρ⟩} x^λ`; the
    /// integral part of `λ` goes to the `X_i`, the common fractional part
    /// `b/s` to `Z^b`.
    pub fn theta_value(&self, num: &[i64], s: u32) -> Result<RatFunc, ModuleError> {
        let si = s as i64;
        let t = num.len() as i64;
        let b = num[0].rem_euclid(si);
        let rho: i64 = num
            .iter()
            .enumerate()
            .map(|(i, &k)| (t - 1 - 2 * i as i64) * k)
            .sum::<i64>()
            / si;
        let mut acc = RatFunc::v().pow(rho)?.mul(&match &self.zval {
            Some(z) => z.pow(b)?,
            None if b == 0 => RatFunc::one(),
            None => return Err(ModuleError::BadCharacter("fractional weight without zval".into())),
        });
        for (xi, &k) in self.x.iter().zip(num) {
            acc = acc.mul(&xi.pow((k - b) / si)?);
        }
        Ok(acc)
    }
}

/// `H ⊗_A C_x` with symbolic action matrices over `Q(v)`.
#[derive(Debug, Clone)]
pub struct InducedModule {
    pub alg: AlgebraId,
    pub point: CharacterPoint,
    pub basis: Vec<Perm>,
    /// Generator name (`s1`, …, `pi`, `zeta`) and its matrix; column `j` is
    /// the image of basis vector `j`.
    pub action: Vec<(String, Matrix<RatFunc>)>,
}

type Key = (Perm, Vec<i64>);

struct Rewriter {
    alg: AlgebraId,
    cache: HashMap<Key, HeckeElement>,
}

impl Rewriter {
    fn expansion(&mut self, key: &Key) -> Result<&HeckeElement, ModuleError> {
        if !self.cache.contains_key(key) {
            let tau = W::from_perm(self.alg.s, key.0.clone());
            let e = HeckeElement::basis_elem(self.alg, &tau)?.right_mul_theta(&key.1)?;
            self.cache.insert(key.clone(), e);
        }
        Ok(&self.cache[key])
    }

    /// Coefficients `c_{τ,λ}` with `p = Σ [τ] θ_λ c_{τ,λ}`.
    fn rewrite(&mut self, p: &HeckeElement) -> Result<BTreeMap<Key, RatFunc>, ModuleError> {
        if p.is_zero() {
            return Ok(BTreeMap::new());
        }
        let s = self.alg.s as i64;
        let t = self.alg.t;
        let nums: Vec<&[i64]> = p.terms().map(|(w, _)| w.num()).collect();
        let mut lo = nums.iter().flat_map(|n| n.iter()).copied().min().unwrap();
        let mut hi = nums.iter().flat_map(|n| n.iter()).copied().max().unwrap();
        let mut sums: Vec<i64> = nums.iter().map(|n| n.iter().sum()).collect();
        sums.sort();
        sums.dedup();
        let perms = Perm::all(t);
        loop {
            let side = (hi - lo) / s + 1;
            if side > MAX_BOX_SIDE {
                return Err(ModuleError::BoxOverflow(format!("{p:?}")));
            }
            let lambdas = box_points(t, lo, hi, s, &sums);
            let keys: Vec<Key> = perms
                .iter()
                .flat_map(|pm| lambdas.iter().map(move |l| (pm.clone(), l.clone())))
                .collect();
            let mut rows: BTreeMap<W, usize> = BTreeMap::new();
            for (w, _) in p.terms() {
                let n = rows.len();
                rows.entry(w.clone()).or_insert(n);
            }
            for k in &keys {
                let ws: Vec<W> = self.expansion(k)?.terms().map(|(w, _)| w.clone()).collect();
                for w in ws {
                    let n = rows.len();
                    rows.entry(w).or_insert(n);
                }
            }
            let mut a = vec![vec![RatFunc::zero(); keys.len()]; rows.len()];
            for (j, k) in keys.iter().enumerate() {
                for (w, c) in self.expansion(k)?.terms() {
                    a[rows[w]][j] = c.to_ratfunc();
                }
            }
            let mut b = vec![RatFunc::zero(); rows.len()];
            for (w, c) in p.terms() {
                b[rows[w]] = c.to_ratfunc();
            }
            match solve(&a, &b, keys.len()) {
                Solution::Unique(x) => return Ok(keys.into_iter().zip(x).filter(|(_, c)| !c.is_zero()).collect()),
                Solution::NotUnique => return Err(ModuleError::SingularSolve(format!("{p:?}"))),
                Solution::Inconsistent => {
                    // double the side, keeping the box centred
                    let grow = side.max(1);
                    lo -= s * (grow / 2);
                    hi += s * (grow - grow / 2);
                }
            }
        }
    }
}

/// Numerators in `[lo, hi]` congruent to `lo` mod `s` with coordinate sum in `sums`.
fn box_points(t: usize, lo: i64, hi: i64, s: i64, sums: &[i64]) -> Vec<Vec<i64>> {
    let vals: Vec<i64> = (0..).map(|k| lo + k * s).take_while(|&x| x <= hi).collect();
    let mut out = Vec::new();
    let mut cur = vec![0usize; t];
    loop {
        let v: Vec<i64> = cur.iter().map(|&i| vals[i]).collect();
        if sums.contains(&v.iter().sum()) {
            out.push(v);
        }
        let mut i = 0;
        while i < t {
            cur[i] += 1;
            if cur[i] < vals.len() {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
        if i == t {
            return out;
        }
    }
}

fn generator_list(alg: AlgebraId) -> Vec<(String, Generator)> {
    let mut g: Vec<(String, Generator)> = (1..alg.t).map(|i| (format!("s{i}"), Generator::S(i))).collect();
    g.push(("pi".into(), Generator::Pi));
    if alg.flavor == Flavor::Twisted {
        g.push(("zeta".into(), Generator::Zeta));
    }
    g
}

/// Build `Ind_A^H(C_x)` and check the defining relations on it.
pub fn induce(alg: AlgebraId, point: CharacterPoint) -> Result<InducedModule, ModuleError> {
    point.validate(alg)?;
    let basis = Perm::all(alg.t);
    let index: HashMap<Perm, usize> = basis.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let d = basis.len();
    let mut rw = Rewriter {
        alg,
        cache: HashMap::new(),
    };
    let mut action = Vec::new();
    for (name, g) in generator_list(alg) {
        let gen = HeckeElement::generator(alg, g)?;
        let mut m = vec![vec![RatFunc::zero(); d]; d];
        for (j, sigma) in basis.iter().enumerate() {
            let prod = gen.right_mul_basis(&W::from_perm(alg.s, sigma.clone()));
            for ((tau, lambda), c) in rw.rewrite(&prod)? {
                let val = c.mul(&point.theta_value(&lambda, alg.s)?);
                let i = index[&tau];
                m[i][j] = m[i][j].add(&val);
            }
        }
        action.push((name, m));
    }
    let module = InducedModule {
        alg,
        point,
        basis,
        action,
    };
    if let Some(name) = module.failed_relation() {
        return Err(ModuleError::RelationFailed(name));
    }
    Ok(module)
}

fn pow_mat<T: FieldElem>(m: &Matrix<T>, k: u32) -> Matrix<T> {
    (0..k).fold(identity(m.len()), |acc, _| mat_mul(&acc, m))
}

fn scalar_mat<T: FieldElem>(d: usize, c: &T) -> Matrix<T> {
    (0..d)
        .map(|i| (0..d).map(|j| if i == j { c.clone() } else { T::zero() }).collect())
        .collect()
}

impl InducedModule {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn matrix(&self, name: &str) -> Option<&Matrix<RatFunc>> {
        self.action.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }

    fn s_mats(&self) -> Vec<&Matrix<RatFunc>> {
        (1..self.alg.t)
            .map(|i| self.matrix(&format!("s{i}")).unwrap())
            .collect()
    }

    /// Name of the first defining relation violated by the action, if any.
    pub fn failed_relation(&self) -> Option<String> {
        let t = self.alg.t;
        let d = self.dim();
        let z = RatFunc::z();
        let s = self.s_mats();
        let sub = |a: &Matrix<RatFunc>, c: &RatFunc| -> Matrix<RatFunc> {
            a.iter()
                .enumerate()
                .map(|(i, r)| {
                    r.iter()
                        .enumerate()
                        .map(|(j, x)| if i == j { x.sub(c) } else { x.clone() })
                        .collect()
                })
                .collect()
        };
        for (i, m) in s.iter().enumerate() {
            let q = mat_mul(&sub(m, &z), &sub(m, &RatFunc::from_int(-1)));
            if q.iter().flatten().any(|x| !x.is_zero()) {
                return Some(format!("quadratic s{}", i + 1));
            }
        }
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                let (a, b) = (s[i], s[j]);
                let ok = if j == i + 1 {
                    mat_mul(&mat_mul(a, b), a) == mat_mul(&mat_mul(b, a), b)
                } else {
                    mat_mul(a, b) == mat_mul(b, a)
                };
                if !ok {
                    return Some(format!("s{} s{}", i + 1, j + 1));
                }
            }
        }
        let pi = self.matrix("pi").unwrap();
        if inverse(pi).is_none() {
            return Some("pi invertible".into());
        }
        for i in 2..t {
            if mat_mul(pi, s[i - 1]) != mat_mul(s[i - 2], pi) {
                return Some(format!("pi s{i} = s{} pi", i - 1));
            }
        }
        if t >= 2 {
            let pi2 = mat_mul(pi, pi);
            if mat_mul(&pi2, s[0]) != mat_mul(s[t - 2], &pi2) {
                return Some("pi^2 s1 = s(t-1) pi^2".into());
            }
        }
        let pit = pow_mat(pi, t as u32);
        let prod = self.point.x.iter().fold(RatFunc::one(), |a, b| a.mul(b));
        if pit != scalar_mat(d, &prod) {
            return Some("pi^t = x_1...x_t".into());
        }
        if let Some(zm) = self.matrix("zeta") {
            let zv = self.point.zval.as_ref().unwrap();
            if *zm != scalar_mat(d, zv) {
                return Some("zeta = zval".into());
            }
            if pow_mat(zm, self.alg.s) != pit {
                return Some("zeta^s = pi^t".into());
            }
        }
        None
    }

    /// Action matrices with `v` replaced by a rational number.
    pub fn specialize(&self, v: &BigRational) -> Result<SpecializedModule, ModuleError> {
        let action = self
            .action
            .iter()
            .map(|(n, m)| {
                let m = m
                    .iter()
                    .map(|r| r.iter().map(|x| x.eval(v)).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                Ok((n.clone(), m))
            })
            .collect::<Result<Vec<_>, ModuleError>>()?;
        Ok(SpecializedModule {
            t: self.alg.t,
            z: v * v,
            action,
        })
    }

    pub fn to_json(&self) -> ModuleJson {
        ModuleJson {
            t: self.alg.t,
            s: self.alg.s,
            flavor: self.alg.flavor,
            basis: self.basis.iter().map(Perm::one_based).collect(),
            x: self.point.x.iter().map(ToString::to_string).collect(),
            zval: self.point.zval.as_ref().map(ToString::to_string),
            action: self
                .action
                .iter()
                .map(|(n, m)| {
                    (
                        n.clone(),
                        m.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect(),
                    )
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModuleJson {
    pub t: usize,
    pub s: u32,
    pub flavor: Flavor,
    /// One-based images of each basis permutation.
    pub basis: Vec<Vec<usize>>,
    pub x: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zval: Option<String>,
    pub action: BTreeMap<String, Vec<Vec<String>>>,
}

/// Action matrices over `Q` after specializing `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecializedModule {
    pub t: usize,
    /// The specialized value of `z = v²`.
    pub z: BigRational,
    pub action: Vec<(String, Matrix<BigRational>)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstituentKind {
    Sub,
    Quotient,
}

/// A one-dimensional sub or quotient; `values` lists the scalar by which each
/// generator acts, `multiplicity` is the dimension of the space of such
/// vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constituent {
    pub kind: ConstituentKind,
    pub values: BTreeMap<String, String>,
    pub multiplicity: usize,
}

impl SpecializedModule {
    pub fn dim(&self) -> usize {
        self.action.first().map_or(0, |(_, m)| m.len())
    }

    pub fn matrices(&self) -> Vec<Matrix<BigRational>> {
        self.action.iter().map(|(_, m)| m.clone()).collect()
    }

    pub fn matrix(&self, name: &str) -> Option<&Matrix<BigRational>> {
        self.action.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }

    /// Dimension of the algebra spanned by the action.
    pub fn algebra_dimension(&self) -> usize {
        algebra_dimension(&self.matrices(), self.dim())
    }

    /// Absolute irreducibility: the action spans all `d × d` matrices.
    pub fn is_irreducible(&self) -> bool {
        let d = self.dim();
        self.algebra_dimension() == d * d
    }

    /// A proper nonzero invariant subspace defined over `Q`, searched among
    /// the spans of rational eigenvectors of the generators and of a few
    /// fixed combinations of them.
    pub fn invariant_subspace(&self) -> Option<Vec<Vec<BigRational>>> {
        let d = self.dim();
        let gens = self.matrices();
        let mut probes = gens.clone();
        let mut combo = vec![vec![<BigRational as Zero>::zero(); d]; d];
        for (k, g) in gens.iter().enumerate() {
            let c = BigRational::from_integer((k as i64 + 2).into());
            for i in 0..d {
                for j in 0..d {
                    combo[i][j] = &combo[i][j] + &g[i][j] * &c;
                }
            }
            probes.push(mat_mul(&combo, g));
        }
        probes.push(combo);
        for p in &probes {
            let Ok(roots) = rational_roots(&charpoly(p)) else {
                continue;
            };
            for r in roots {
                let shifted = shift(p, &r);
                for v in nullspace(&shifted, d) {
                    let w = spin(&[v], &gens);
                    if w.len() < d {
                        return Some(w);
                    }
                }
            }
        }
        None
    }

    /// One-dimensional subs (common eigenvectors) and quotients (common
    /// eigenvectors of the transposed action) with rational eigenvalues.
    pub fn one_dim_constituents(&self) -> Result<Vec<Constituent>, ModuleError> {
        let mut out = Vec::new();
        for kind in [ConstituentKind::Sub, ConstituentKind::Quotient] {
            let action: Vec<(String, Matrix<BigRational>)> = match kind {
                ConstituentKind::Sub => self.action.clone(),
                ConstituentKind::Quotient => self.action.iter().map(|(n, m)| (n.clone(), transpose(m))).collect(),
            };
            out.extend(
                common_eigenlines(&action, self.dim(), &self.z)?
                    .into_iter()
                    .map(|(values, multiplicity)| Constituent {
                        kind,
                        values,
                        multiplicity,
                    }),
            );
        }
        Ok(out)
    }
}

fn shift(m: &Matrix<BigRational>, r: &BigRational) -> Matrix<BigRational> {
    m.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, x)| if i == j { x - r } else { x.clone() })
                .collect()
        })
        .collect()
}

fn full_space(d: usize) -> Vec<Vec<BigRational>> {
    identity::<BigRational>(d)
}

/// Common eigenvectors: the `s_i` must all act by `z` or all by `-1`; inside
/// that space take the largest subspace stable under the remaining
/// generators and split it into their rational eigenspaces.
fn common_eigenlines(
    action: &[(String, Matrix<BigRational>)],
    d: usize,
    z: &BigRational,
) -> Result<Vec<(BTreeMap<String, String>, usize)>, ModuleError> {
    let (simple, rest): (Vec<_>, Vec<_>) = action.iter().partition(|(n, _)| n.starts_with('s'));
    let candidates: Vec<Option<BigRational>> = if simple.is_empty() {
        vec![None]
    } else {
        vec![Some(z.clone()), Some(-<BigRational as One>::one())]
    };
    let mut out = Vec::new();
    for e in candidates {
        let mut space = full_space(d);
        if let Some(e) = &e {
            for (_, m) in &simple {
                space = intersect(&space, &nullspace(&shift(m, e), d), d);
            }
        }
        // largest subspace of `space` stable under the remaining generators
        loop {
            let before = space.len();
            for (_, m) in &rest {
                let inv = inverse(m).ok_or_else(|| ModuleError::RelationFailed("invertible generator".into()))?;
                let pre: Vec<Vec<BigRational>> = space.iter().map(|v| mat_vec(&inv, v)).collect();
                space = intersect(&space, &pre, d);
            }
            if space.len() == before {
                break;
            }
        }
        let mut pieces: Vec<(BTreeMap<String, String>, Vec<Vec<BigRational>>)> = vec![(BTreeMap::new(), space)];
        for (name, m) in &rest {
            let mut next = Vec::new();
            for (vals, sp) in pieces {
                if sp.is_empty() {
                    continue;
                }
                let restricted = restrict(m, &sp);
                for r in rational_roots(&charpoly(&restricted))? {
                    let eig = intersect(&sp, &nullspace(&shift(m, &r), d), d);
                    if !eig.is_empty() {
                        let mut vals = vals.clone();
                        vals.insert(name.clone(), format_rational(&r));
                        next.push((vals, eig));
                    }
                }
            }
            pieces = next;
        }
        for (mut vals, sp) in pieces {
            if sp.is_empty() {
                continue;
            }
            if let Some(e) = &e {
                for (n, _) in &simple {
                    vals.insert(n.clone(), format_rational(e));
                }
            }
            out.push((vals, sp.len()));
        }
    }
    Ok(out)
}

/// Matrix of `m` on an invariant subspace, in the given basis.
fn restrict(m: &Matrix<BigRational>, basis: &[Vec<BigRational>]) -> Matrix<BigRational> {
    let k = basis.len();
    let d = m.len();
    let cols: Matrix<BigRational> = (0..d).map(|i| basis.iter().map(|b| b[i].clone()).collect()).collect();
    let mut out = vec![vec![<BigRational as Zero>::zero(); k]; k];
    for (j, b) in basis.iter().enumerate() {
        let img = mat_vec(m, b);
        match solve(&cols, &img, k) {
            Solution::Unique(c) => {
                for (i, x) in c.into_iter().enumerate() {
                    out[i][j] = x;
                }
            }
            _ => unreachable!("subspace is invariant"),
        }
    }
    out
}

/// Is `v` in the span of `basis`?
pub fn in_span(basis: &[Vec<BigRational>], v: &[BigRational]) -> bool {
    let mut s = SpanBuilder::new();
    for b in basis {
        s.insert(b);
    }
    s.contains(v)
}

/// The `t = 2` affine module at `x = (1, ratio)`.
pub fn rank_two_module(ratio: RatFunc) -> Result<InducedModule, ModuleError> {
    induce(
        AlgebraId::affine(2),
        CharacterPoint::new(vec![RatFunc::one(), ratio], None),
    )
}

/// Verdict at one `s` for the rank-one induction `ν^{-s} ⊠ ν^{s}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCheck {
    pub s: String,
    /// `x_2 / x_1 = q0^{2 s n0}` as a function of `v`.
    pub ratio: String,
    pub reducible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducibilityReport {
    pub n0: u32,
    pub s_star: String,
    pub v: String,
    pub witnesses: Vec<WitnessCheck>,
    /// Reducible at `s*`, irreducible at `2s*` and `s*/2`.
    pub consistent: bool,
}

/// `s* = 1/(2 n0)`, with the induced module checked at `s*`, `2s*` and `s*/2`
/// after specializing `v`. The ratio `q0^{2 s n0}` at these points is
/// `v^2`, `v^4` and `v` respectively.
pub fn reducibility_point(tp: &TypeParams, v: &BigRational) -> Result<ReducibilityReport, ModuleError> {
    let inv = invariants_n0_d0_s0(tp)?;
    let n0 = inv.n0 as i64;
    let s_star = BigRational::new(1.into(), (2 * n0).into());
    let points = [
        (s_star.clone(), 2),
        (&s_star * BigRational::from_integer(2.into()), 4),
        (&s_star / BigRational::from_integer(2.into()), 1),
    ];
    let witnesses = points
        .into_par_iter()
        .map(|(s, k)| {
            let ratio = RatFunc::v().pow(k)?;
            let m = rank_two_module(ratio.clone())?.specialize(v)?;
            Ok(WitnessCheck {
                s: format_rational(&s),
                ratio: ratio.to_string(),
                reducible: !m.is_irreducible(),
            })
        })
        .collect::<Result<Vec<_>, ModuleError>>()?;
    let consistent = witnesses[0].reducible && !witnesses[1].reducible && !witnesses[2].reducible;
    Ok(ReducibilityReport {
        n0: inv.n0,
        s_star: format_rational(&s_star),
        v: format_rational(v),
        witnesses,
        consistent,
    })
}

/// Reducibility of the `t = 2` module at ratio `z^k` for each `k`.
pub fn locus_scan(ks: &[i64], v: &BigRational) -> Result<Vec<(i64, bool)>, ModuleError> {
    ks.par_iter()
        .map(|&k| {
            let m = rank_two_module(RatFunc::z().pow(k)?)?.specialize(v)?;
            Ok((k, !m.is_irreducible()))
        })
        .collect()
}

/// The point `(u v, u v^{-1})`, where the induced module has the trivial and
/// Steinberg characters as its one-dimensional constituents.
pub fn special_point(u: &BigRational) -> CharacterPoint {
    let u = RatFunc::from_rational(u.clone());
    let v = RatFunc::v();
    CharacterPoint::new(vec![u.mul(&v), u.div(&v).expect("v is nonzero")], None)
}
