//! Cocycle and commutator values of an n-fold cover of `GL_r(F)` on tori and
//! block-diagonal elements.
//!
//! The cover is fixed by `(c, d) ∈ Z/n × Z/n`, the cocycle being
//! `σ = σ_det^c · σ_KP^d`. All values are returned as exponents in `μ_n`, so
//! products of symbols become sums.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hilbert::{ElemJson, ExtKind, Extension, HilbertError, LocalField, LocalFieldElem, MuN};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CocycleError {
    #[error("cover degree must be positive")]
    ZeroCover,
    #[error("block structure mismatch: {0}")]
    BlockMismatch(String),
    #[error("determinant of block {0} is not a unit")]
    NonUnitDeterminant(usize),
    #[error("field has symbol order {field} but the cover has degree {cover}")]
    OrderMismatch { field: u32, cover: u32 },
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
}

/// Cover data `(n, c, d)` with `c, d` reduced into `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoverParams {
    pub n: u32,
    pub c: u32,
    pub d: u32,
}

impl CoverParams {
    pub fn new(n: u32, c: i64, d: i64) -> Result<Self, CocycleError> {
        if n == 0 {
            return Err(CocycleError::ZeroCover);
        }
        let m = n as i64;
        Ok(CoverParams {
            n,
            c: c.rem_euclid(m) as u32,
            d: d.rem_euclid(m) as u32,
        })
    }

    /// Kazhdan–Patterson family, `d = 1`.
    pub fn kp(n: u32, c: i64) -> Result<Self, CocycleError> {
        Self::new(n, c, 1)
    }

    /// Savin's cover, `(c, d) = (-1, 2)`.
    pub fn savin(n: u32) -> Result<Self, CocycleError> {
        Self::new(n, -1, 2)
    }

    pub fn is_kp(&self) -> bool {
        self.d == 1 % self.n
    }

    pub fn is_savin(&self) -> bool {
        let m = self.n as i64;
        self.c as i64 == (-1i64).rem_euclid(m) && self.d as i64 == 2 % m
    }

    /// `2c + d` reduced mod n.
    pub fn twist(&self) -> i64 {
        (2 * self.c as i64 + self.d as i64) % self.n as i64
    }

    pub fn c(&self) -> i64 {
        self.c as i64
    }

    pub fn d(&self) -> i64 {
        self.d as i64
    }
}

fn check_order(k: &LocalField, p: &CoverParams) -> Result<(), CocycleError> {
    if k.n() != p.n {
        return Err(CocycleError::OrderMismatch {
            field: k.n(),
            cover: p.n,
        });
    }
    Ok(())
}

/// `σ_det^c(g₁, g₂) = (det g₁, det g₂)_n^c`.
pub fn sigma_det(
    det_g1: &LocalFieldElem,
    det_g2: &LocalFieldElem,
    k: &LocalField,
    p: &CoverParams,
) -> Result<MuN, CocycleError> {
    check_order(k, p)?;
    Ok(k.hilbert_symbol(det_g1, det_g2)?.scale(p.c()))
}

/// `[λ I_r, g]_~ = (λ, det g)_n^{(2c+d) r - d}`.
pub fn commutator_center(
    lambda: &LocalFieldElem,
    det_g: &LocalFieldElem,
    r: u32,
    k: &LocalField,
    p: &CoverParams,
) -> Result<MuN, CocycleError> {
    check_order(k, p)?;
    let exp = p.twist() * r as i64 - p.d();
    Ok(k.hilbert_symbol(lambda, det_g)?.scale(exp))
}

/// Cross terms of `σ` on block-diagonal elements: with `D_i = det g_i`,
/// `D'_j = det g'_j`,
/// `(c+d)·Σ_{i<j} (D_i, D'_j) + c·Σ_{j<i} (D_i, D'_j)`.
pub fn block_correction(
    dets: &[LocalFieldElem],
    dets_prime: &[LocalFieldElem],
    k: &LocalField,
    p: &CoverParams,
) -> Result<MuN, CocycleError> {
    check_order(k, p)?;
    if dets.len() != dets_prime.len() {
        return Err(CocycleError::BlockMismatch(format!(
            "{} blocks vs {} blocks",
            dets.len(),
            dets_prime.len()
        )));
    }
    let mut acc = MuN::zero(p.n);
    for (i, a) in dets.iter().enumerate() {
        for (j, b) in dets_prime.iter().enumerate() {
            let coeff = match i.cmp(&j) {
                std::cmp::Ordering::Less => p.c() + p.d(),
                std::cmp::Ordering::Greater => p.c(),
                std::cmp::Ordering::Equal => continue,
            };
            acc = acc.add(k.hilbert_symbol(a, b)?.scale(coeff));
        }
    }
    Ok(acc)
}

/// `σ(diag(x), diag(y))` on the diagonal torus of `GL_k(F)`, assembled from
/// the rank-one values `σ(x_i, y_i) = (x_i, y_i)^c` and [`block_correction`].
pub fn sigma_diagonal(
    x: &[LocalFieldElem],
    y: &[LocalFieldElem],
    k: &LocalField,
    p: &CoverParams,
) -> Result<MuN, CocycleError> {
    let mut acc = block_correction(x, y, k, p)?;
    for (a, b) in x.iter().zip(y) {
        acc = acc.add(k.hilbert_symbol(a, b)?.scale(p.c()));
    }
    Ok(acc)
}

/// Commutator of two commuting block-diagonal elements, from the blockwise
/// commutators and their determinants:
/// `Σ_i [g_i, g'_i]_~ + (2c+d)·Σ_{i≠j} (det g_i, det g'_j)`.
pub fn commutator_block_diagonal(
    block_commutators: &[MuN],
    dets: &[LocalFieldElem],
    dets_prime: &[LocalFieldElem],
    k: &LocalField,
    p: &CoverParams,
) -> Result<MuN, CocycleError> {
    check_order(k, p)?;
    if dets.len() != dets_prime.len() || dets.len() != block_commutators.len() {
        return Err(CocycleError::BlockMismatch("block lists of different lengths".into()));
    }
    let mut acc = MuN::zero(p.n);
    for c in block_commutators {
        acc = acc.add(*c);
    }
    for (i, a) in dets.iter().enumerate() {
        for (j, b) in dets_prime.iter().enumerate() {
            if i != j {
                acc = acc.add(k.hilbert_symbol(a, b)?.scale(p.twist()));
            }
        }
    }
    Ok(acc)
}

/// One block `u_i ∈ E_i^×` of an element of `⊕ E_i^×`.
#[derive(Debug, Clone)]
pub struct TorusBlock {
    pub ext: Arc<Extension>,
    pub u: LocalFieldElem,
}

#[derive(Debug, Clone)]
pub struct BlockTorusElem {
    pub blocks: Vec<TorusBlock>,
}

impl BlockTorusElem {
    /// Diagonal element of the split torus, every block over `F` itself.
    pub fn diagonal(k: &LocalField, entries: &[LocalFieldElem]) -> Self {
        let ext = Arc::new(Extension::trivial(k));
        BlockTorusElem {
            blocks: entries
                .iter()
                .map(|u| TorusBlock {
                    ext: Arc::clone(&ext),
                    u: *u,
                })
                .collect(),
        }
    }

    /// `det_F` when each `E_i` is embedded as a maximal torus of `GL_{r_i}` with
    /// `r_i` copies, i.e. `∏_i N_{E_i/F}(u_i)^{ranks[i]}`.
    pub fn det_f_with_ranks(&self, ranks: &[u32]) -> LocalFieldElem {
        let base = &self.blocks[0].ext.base;
        self.blocks.iter().zip(ranks).fold(base.one(), |acc, (b, &r)| {
            base.mul(&acc, &base.pow(&b.ext.norm(&b.u), r as i64))
        })
    }

    /// `det_F(u) = ∏_i N_{E_i/F}(u_i)`.
    pub fn det_f(&self) -> LocalFieldElem {
        self.det_f_with_ranks(&vec![1; self.blocks.len()])
    }
}

/// Block `i` of `v ∈ ∏ GL_{r'_i}(E_i)`, seen through `det_{E_i}(v_i)`.
#[derive(Debug, Clone, Copy)]
pub struct LeviBlock {
    pub rank: u32,
    pub det: LocalFieldElem,
}

#[derive(Debug, Clone)]
pub struct LeviDetData {
    pub blocks: Vec<LeviBlock>,
}

fn same_ext(a: &Extension, b: &Extension) -> bool {
    a.degree == b.degree && a.kind == b.kind && a.field.q() == b.field.q() && a.base.q() == b.base.q()
}

fn check_blocks(u: &BlockTorusElem, v_exts: &[&Extension], p: &CoverParams) -> Result<(), CocycleError> {
    if u.blocks.is_empty() {
        return Err(CocycleError::BlockMismatch("no blocks".into()));
    }
    if u.blocks.len() != v_exts.len() {
        return Err(CocycleError::BlockMismatch(format!(
            "{} blocks vs {} blocks",
            u.blocks.len(),
            v_exts.len()
        )));
    }
    let base_q = u.blocks[0].ext.base.q();
    for (i, (b, e)) in u.blocks.iter().zip(v_exts).enumerate() {
        if !same_ext(&b.ext, e) {
            return Err(CocycleError::BlockMismatch(format!(
                "block {i} lives in different extensions"
            )));
        }
        if b.ext.base.q() != base_q {
            return Err(CocycleError::BlockMismatch(format!(
                "block {i} has a different base field"
            )));
        }
        check_order(&b.ext.field, p)?;
    }
    Ok(())
}

/// `[u, v]_~` for `u, v ∈ ⊕ E_i^×` with `[E_i : F] = r_i`:
/// `-d·Σ_i (u_i, v_i)_{E_i} + (2c+d)·(det_F u, det_F v)_F`.
pub fn commutator_field_torus(u: &BlockTorusElem, v: &BlockTorusElem, p: &CoverParams) -> Result<MuN, CocycleError> {
    let exts: Vec<&Extension> = v.blocks.iter().map(|b| b.ext.as_ref()).collect();
    check_blocks(u, &exts, p)?;
    let mut acc = MuN::zero(p.n);
    for (a, b) in u.blocks.iter().zip(&v.blocks) {
        acc = acc.add(a.ext.field.hilbert_symbol(&a.u, &b.u)?.scale(-p.d()));
    }
    let base = &u.blocks[0].ext.base;
    let cross = base.hilbert_symbol(&u.det_f(), &v.det_f())?;
    Ok(acc.add(cross.scale(p.twist())))
}

fn levi_exts<'a>(u: &'a BlockTorusElem, v: &LeviDetData) -> Result<Vec<&'a Extension>, CocycleError> {
    if u.blocks.len() != v.blocks.len() {
        return Err(CocycleError::BlockMismatch(format!(
            "{} blocks vs {} blocks",
            u.blocks.len(),
            v.blocks.len()
        )));
    }
    Ok(u.blocks.iter().map(|b| b.ext.as_ref()).collect())
}

/// `[u, v]_~` for `u ∈ ⊕ E_i^×` and `v` in its centralizer `∏ GL_{r'_i}(E_i)`:
/// `Σ_i (det_F(u)^{2c+d} · u_i^{-d}, det_{E_i} v_i)_{E_i}`, where
/// `det_F(u) = ∏ N(u_i)^{r'_i}`.
pub fn commutator_levi(u: &BlockTorusElem, v: &LeviDetData, p: &CoverParams) -> Result<MuN, CocycleError> {
    let exts = levi_exts(u, v)?;
    check_blocks(u, &exts, p)?;
    let ranks: Vec<u32> = v.blocks.iter().map(|b| b.rank).collect();
    let det_u = u.det_f_with_ranks(&ranks);
    let mut acc = MuN::zero(p.n);
    for (a, b) in u.blocks.iter().zip(&v.blocks) {
        let e = &a.ext.field;
        let left = e.mul(&e.pow(&a.ext.embed(&det_u), p.twist()), &e.pow(&a.u, -p.d()));
        acc = acc.add(e.hilbert_symbol(&left, &b.det)?);
    }
    Ok(acc)
}

/// The same commutator in its first form,
/// `-d·Σ_i (u_i, det_{E_i} v_i)_{E_i} + (2c+d)·(det_F u, det_F v)_F`.
pub fn commutator_levi_first_form(u: &BlockTorusElem, v: &LeviDetData, p: &CoverParams) -> Result<MuN, CocycleError> {
    let exts = levi_exts(u, v)?;
    check_blocks(u, &exts, p)?;
    let ranks: Vec<u32> = v.blocks.iter().map(|b| b.rank).collect();
    let base = &u.blocks[0].ext.base;
    let det_u = u.det_f_with_ranks(&ranks);
    let det_v = u
        .blocks
        .iter()
        .zip(&v.blocks)
        .fold(base.one(), |acc, (a, b)| base.mul(&acc, &a.ext.norm(&b.det)));
    let mut acc = MuN::zero(p.n);
    for (a, b) in u.blocks.iter().zip(&v.blocks) {
        acc = acc.add(a.ext.field.hilbert_symbol(&a.u, &b.det)?.scale(-p.d()));
    }
    Ok(acc.add(base.hilbert_symbol(&det_u, &det_v)?.scale(p.twist())))
}

/// Exponent of `(ϖ_E, det_E g_i)` in the character
/// `g ↦ [diag(ϖ_E^{s_1} I_{m_0}, …, ϖ_E^{s_t} I_{m_0}), g]_~`:
/// `(Σ_j s_j r_0)(2c+d) - s_i d`.
pub fn chi_h_exponents(s: &[i64], r0: u32, p: &CoverParams) -> Vec<i64> {
    let n = p.n as i64;
    let total: i64 = s.iter().map(|&x| x * r0 as i64).sum();
    s.iter()
        .map(|&si| (total * p.twist() - si * p.d()).rem_euclid(n))
        .collect()
}

/// `χ_h(g) = Σ_i [(Σ_j s_j r_0)(2c+d) - s_i d]·(ϖ_E, det_E g_i)_{n,E}` for
/// `g = diag(g_1, …, g_t)` with unit determinants.
///
/// `r0 = [E:F]·m0` is checked.
pub fn chi_h(
    s: &[i64],
    g_dets: &[LocalFieldElem],
    r0: u32,
    m0: u32,
    p: &CoverParams,
    ext: &Extension,
) -> Result<MuN, CocycleError> {
    check_order(&ext.field, p)?;
    if s.len() != g_dets.len() {
        return Err(CocycleError::BlockMismatch(format!(
            "{} exponents vs {} blocks",
            s.len(),
            g_dets.len()
        )));
    }
    if r0 != ext.degree * m0 {
        return Err(CocycleError::BlockMismatch(format!(
            "r0 = {r0} is not [E:F]·m0 = {}·{m0}",
            ext.degree
        )));
    }
    if let Some(i) = g_dets.iter().position(|g| g.v != 0) {
        return Err(CocycleError::NonUnitDeterminant(i));
    }
    let e = &ext.field;
    let pi = e.uniformizer();
    let mut acc = MuN::zero(p.n);
    for (k, g) in chi_h_exponents(s, r0, p).into_iter().zip(g_dets) {
        acc = acc.add(e.hilbert_symbol(&pi, g)?.scale(k));
    }
    Ok(acc)
}

/// JSON form of one torus block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusBlockJson {
    pub degree: u32,
    pub kind: ExtKind,
    #[serde(flatten)]
    pub elem: ElemJson,
}

impl BlockTorusElem {
    pub fn from_json(base: &LocalField, blocks: &[TorusBlockJson]) -> Result<Self, CocycleError> {
        let mut out = Vec::with_capacity(blocks.len());
        for b in blocks {
            let ext = Arc::new(Extension::new(base, b.degree, b.kind)?);
            let u = ext.field.from_json(b.elem)?;
            out.push(TorusBlock { ext, u });
        }
        Ok(BlockTorusElem { blocks: out })
    }
}
