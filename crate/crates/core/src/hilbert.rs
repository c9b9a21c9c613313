//! Tame local fields and the n-th Hilbert symbol.
//!
//! An element of `F^×` is recorded only through its valuation and the residue
//! of its unit part, which is all the tame symbol sees. With `x = ϖ^a u`,
//! `y = ϖ^b w`, the symbol is read off from
//!
//! ```text
//! t = (-1)^{ab} · ū^b · w̄^{-a}  ∈ k^×
//! ```
//!
//! by projecting `t` to `μ_n` via `t ↦ t^{(q-1)/n}`. Identifying `μ_n` with
//! `Z/n` through `ω = g^{(q-1)/n}`, where `g` is the residue field generator,
//! the exponent is simply `dlog(t) mod n`. Other normalizations differ from
//! this one by an automorphism of `Z/n`, which no identity tested here can see.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ffield::{make_field, FFElem, FieldError, FiniteField, DEFAULT_MAX_Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HilbertError {
    #[error("n = {n} does not divide q - 1 = {}", .q - 1)]
    ModulusMismatch { n: u32, q: u32 },
    #[error("extension degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("symbols of different orders: {0} and {1}")]
    OrderMismatch(u32, u32),
    #[error("evaluation routes disagree: {0} vs {1}")]
    RouteDisagreement(u32, u32),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// An element of `μ_n`, written additively as the exponent of `ω`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MuN {
    pub n: u32,
    pub e: u32,
}

impl MuN {
    pub fn new(n: u32, e: i64) -> Self {
        assert!(n > 0, "μ_0 is not defined");
        MuN {
            n,
            e: e.rem_euclid(n as i64) as u32,
        }
    }

    pub fn zero(n: u32) -> Self {
        MuN::new(n, 0)
    }

    pub fn is_trivial(&self) -> bool {
        self.e == 0
    }

    pub fn add(self, other: MuN) -> MuN {
        assert_eq!(self.n, other.n, "adding roots of unity of different orders");
        MuN::new(self.n, self.e as i64 + other.e as i64)
    }

    pub fn neg(self) -> MuN {
        MuN::new(self.n, -(self.e as i64))
    }

    /// `ζ ↦ ζ^k`.
    pub fn scale(self, k: i64) -> MuN {
        let n = self.n as i64;
        MuN::new(self.n, (self.e as i64 * k.rem_euclid(n)) % n)
    }
}

impl fmt::Display for MuN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ω^{} in μ_{}", self.e, self.n)
    }
}

/// `ϖ^v · u` with `u` a unit; only the residue of `u` is kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LocalFieldElem {
    pub v: i64,
    pub u: FFElem,
}

/// JSON form of a [`LocalFieldElem`]: valuation and discrete log of the unit residue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElemJson {
    pub v: i64,
    pub u: u32,
}

/// A non-archimedean local field with residue field `F_q`, together with the
/// symbol order `n`, `n | q - 1`.
#[derive(Debug, Clone)]
pub struct LocalField {
    residue: Arc<FiniteField>,
    n: u32,
}

impl LocalField {
    pub fn new(residue: Arc<FiniteField>, n: u32) -> Result<Self, HilbertError> {
        let q = residue.order();
        if n == 0 || (q - 1) % n != 0 {
            return Err(HilbertError::ModulusMismatch { n, q });
        }
        Ok(LocalField { residue, n })
    }

    /// Field with residue field `F_{p^k}`.
    pub fn build(p: u32, k: u32, n: u32) -> Result<Self, HilbertError> {
        Self::new(Arc::new(make_field(p, k)?), n)
    }

    pub fn residue(&self) -> &FiniteField {
        &self.residue
    }

    pub fn residue_arc(&self) -> Arc<FiniteField> {
        Arc::clone(&self.residue)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.residue.order()
    }

    /// Same residue field, different symbol order.
    pub fn with_n(&self, n: u32) -> Result<Self, HilbertError> {
        Self::new(self.residue_arc(), n)
    }

    /// `ϖ^v · g^u_log`.
    pub fn elem(&self, v: i64, u_log: i64) -> LocalFieldElem {
        LocalFieldElem {
            v,
            u: self.residue.from_log(u_log),
        }
    }

    pub fn from_json(&self, j: ElemJson) -> Result<LocalFieldElem, HilbertError> {
        Ok(LocalFieldElem {
            v: j.v,
            u: self.residue.try_from_log(j.u)?,
        })
    }

    pub fn to_json(&self, x: &LocalFieldElem) -> ElemJson {
        ElemJson {
            v: x.v,
            u: self.unit_log(x),
        }
    }

    pub fn one(&self) -> LocalFieldElem {
        self.elem(0, 0)
    }

    pub fn uniformizer(&self) -> LocalFieldElem {
        self.elem(1, 0)
    }

    pub fn minus_one(&self) -> LocalFieldElem {
        LocalFieldElem {
            v: 0,
            u: self.residue.minus_one(),
        }
    }

    fn unit_log(&self, x: &LocalFieldElem) -> u32 {
        x.u.log().expect("unit residue is never zero")
    }

    fn check(&self, x: &LocalFieldElem) -> Result<(), HilbertError> {
        if x.u.field_size() != self.q() {
            return Err(FieldError::FieldMismatch {
                expected: self.q(),
                found: x.u.field_size(),
            }
            .into());
        }
        Ok(())
    }

    pub fn mul(&self, x: &LocalFieldElem, y: &LocalFieldElem) -> LocalFieldElem {
        LocalFieldElem {
            v: x.v + y.v,
            u: self.residue.mul(x.u, y.u).expect("same residue field"),
        }
    }

    pub fn inv(&self, x: &LocalFieldElem) -> LocalFieldElem {
        LocalFieldElem {
            v: -x.v,
            u: self.residue.inv(x.u).expect("unit residue is never zero"),
        }
    }

    pub fn pow(&self, x: &LocalFieldElem, k: i64) -> LocalFieldElem {
        LocalFieldElem {
            v: x.v * k,
            u: self.residue.pow(x.u, k).expect("unit residue is never zero"),
        }
    }

    pub fn neg(&self, x: &LocalFieldElem) -> LocalFieldElem {
        self.mul(x, &self.minus_one())
    }

    /// `1 - x` when it is determined by the data we keep.
    ///
    /// Returns `None` for `v(x) = 0` with unit residue 1, where `1 - x` has
    /// positive valuation that depends on the higher digits of `x`; it also
    /// returns `None` for `x = 1` itself.
    pub fn one_minus(&self, x: &LocalFieldElem) -> Option<LocalFieldElem> {
        let f = &self.residue;
        match x.v {
            v if v > 0 => Some(self.one()),
            v if v < 0 => Some(self.neg(x)),
            _ => {
                let d = f.sub(f.one(), x.u).ok()?;
                (!d.is_zero()).then_some(LocalFieldElem { v: 0, u: d })
            }
        }
    }

    /// The tame Hilbert symbol `(x, y)_n`.
    pub fn hilbert_symbol(&self, x: &LocalFieldElem, y: &LocalFieldElem) -> Result<MuN, HilbertError> {
        self.check(x)?;
        self.check(y)?;
        let h = (self.q() - 1) as i128;
        let sign = if (x.v * y.v).rem_euclid(2) == 1 {
            self.residue.dlog(self.residue.minus_one())? as i128
        } else {
            0
        };
        let t = sign + y.v as i128 * self.unit_log(x) as i128 - x.v as i128 * self.unit_log(y) as i128;
        let t = t.rem_euclid(h);
        Ok(MuN::new(self.n, (t % self.n as i128) as i64))
    }
}

/// Convenience wrapper matching the operation signature `hilbert_symbol(x, y, K)`.
pub fn hilbert_symbol(x: &LocalFieldElem, y: &LocalFieldElem, k: &LocalField) -> Result<MuN, HilbertError> {
    k.hilbert_symbol(x, y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtKind {
    Unramified,
    Ramified,
}

/// A finite tame extension `E/F`, unramified or totally ramified.
///
/// For the unramified case of degree `f` the residue field of `E` is
/// `F_{q^f}` and `k_F^×` is identified with the subgroup generated by
/// `G^M`, `M = (q^f - 1)/(q - 1)`, where `G` generates `k_E^×`. Only the
/// multiplicative structure of the subfield is ever used, so this
/// identification is all the symbol needs. Uniformizers agree.
///
/// In the totally ramified case of degree `e`, `E = F(ϖ_E)` with
/// `ϖ_E^e = ϖ_F`, residue fields agree and `N(ϖ_E) = (-1)^{e+1} ϖ_F`.
#[derive(Debug, Clone)]
pub struct Extension {
    pub base: LocalField,
    pub field: LocalField,
    pub degree: u32,
    pub kind: ExtKind,
}

impl Extension {
    pub fn trivial(base: &LocalField) -> Self {
        Extension {
            base: base.clone(),
            field: base.clone(),
            degree: 1,
            kind: ExtKind::Unramified,
        }
    }

    pub fn unramified(base: &LocalField, f: u32) -> Result<Self, HilbertError> {
        Self::unramified_with_bound(base, f, DEFAULT_MAX_Q)
    }

    /// As [`Extension::unramified`], with an explicit cap on the residue field size.
    pub fn unramified_with_bound(base: &LocalField, f: u32, bound: u32) -> Result<Self, HilbertError> {
        if f == 0 {
            return Err(HilbertError::DegreeMismatch("degree must be positive".into()));
        }
        if f == 1 {
            return Ok(Self::trivial(base));
        }
        let res = base.residue();
        let big = FiniteField::with_bound(res.characteristic(), res.degree() * f, bound)?;
        Ok(Extension {
            base: base.clone(),
            field: LocalField::new(Arc::new(big), base.n())?,
            degree: f,
            kind: ExtKind::Unramified,
        })
    }

    pub fn ramified(base: &LocalField, e: u32) -> Result<Self, HilbertError> {
        if e == 0 {
            return Err(HilbertError::DegreeMismatch("degree must be positive".into()));
        }
        Ok(Extension {
            base: base.clone(),
            field: base.clone(),
            degree: e,
            kind: ExtKind::Ramified,
        })
    }

    pub fn new(base: &LocalField, degree: u32, kind: ExtKind) -> Result<Self, HilbertError> {
        match kind {
            ExtKind::Unramified => Self::unramified(base, degree),
            ExtKind::Ramified => Self::ramified(base, degree),
        }
    }

    fn subfield_index(&self) -> i64 {
        ((self.field.q() - 1) / (self.base.q() - 1)) as i64
    }

    /// The inclusion `F^× → E^×`.
    pub fn embed(&self, x: &LocalFieldElem) -> LocalFieldElem {
        let a = x.u.log().unwrap() as i64;
        match self.kind {
            ExtKind::Unramified => self.field.elem(x.v, a * self.subfield_index()),
            ExtKind::Ramified => self.field.elem(x.v * self.degree as i64, a),
        }
    }

    /// `N_{E/F}: E^× → F^×`.
    pub fn norm(&self, y: &LocalFieldElem) -> LocalFieldElem {
        let b = y.u.log().unwrap() as i64;
        match self.kind {
            // N(ϖ) = ϖ^f, and N(u) = u^M lands in the subgroup generated by G^M
            ExtKind::Unramified => self.base.elem(self.degree as i64 * y.v, b),
            ExtKind::Ramified => {
                let e = self.degree as i64;
                let unit = self.base.elem(0, b * e);
                let sign = if (e + 1) * y.v % 2 != 0 {
                    self.base.minus_one()
                } else {
                    self.base.one()
                };
                let u = self.base.mul(&unit, &sign);
                LocalFieldElem { v: y.v, u: u.u }
            }
        }
    }
}

/// Both evaluations of `(x, y)_{n,E}` for `x ∈ F^×`, `y ∈ E^×`, `E/F` unramified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct UnramifiedRoutes {
    /// Symbol computed directly in `E` after embedding `x`.
    pub in_extension: MuN,
    /// `(x, N_{E/F}(y))_{n,F}`.
    pub via_norm: MuN,
}

pub fn hilbert_symbol_unramified_routes(
    x: &LocalFieldElem,
    y: &LocalFieldElem,
    ext: &Extension,
) -> Result<UnramifiedRoutes, HilbertError> {
    if ext.kind != ExtKind::Unramified {
        return Err(HilbertError::DegreeMismatch("extension is ramified".into()));
    }
    let expect = (ext.base.q() as u64).pow(ext.degree);
    if ext.field.q() as u64 != expect {
        return Err(HilbertError::DegreeMismatch(format!(
            "residue field of size {} is not of size q^{} = {expect}",
            ext.field.q(),
            ext.degree
        )));
    }
    let in_extension = ext.field.hilbert_symbol(&ext.embed(x), y)?;
    let via_norm = ext.base.hilbert_symbol(x, &ext.norm(y))?;
    Ok(UnramifiedRoutes { in_extension, via_norm })
}

/// `(x, y)_{n,E}` for `x` over `F` and `y` over the unramified extension of
/// degree `f`, evaluated along both routes; a disagreement is reported as an error.
pub fn hilbert_symbol_unramified(x: &LocalFieldElem, y: &LocalFieldElem, ext: &Extension) -> Result<MuN, HilbertError> {
    let r = hilbert_symbol_unramified_routes(x, y, ext)?;
    if r.in_extension != r.via_norm {
        return Err(HilbertError::RouteDisagreement(r.in_extension.e, r.via_norm.e));
    }
    Ok(r.in_extension)
}
