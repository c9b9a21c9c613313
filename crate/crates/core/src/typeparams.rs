//! Arithmetic of simple-type parameters: the intertwining congruence system,
//! the invariants `n₀, d₀, s₀`, the twist invariant `l₀` from a regular
//! character exponent, and the lattices behind `W₀` and `W₀′`.
//!
//! The congruence system in `s ∈ Z^t` is
//!
//! ```text
//! l_i · [ (Σ_j s_j r_j)(2c + d) - s_i d ] ≡ 0  (mod n)     for every i,
//! ```
//!
//! i.e. `A s ≡ 0 (mod n)` with `A_ij = l_i (r_j (2c+d) - δ_ij d)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cocycle::{CocycleError, CoverParams};
use crate::lattice::{gcd, integer_kernel, CongruenceLattice};
use crate::weyl::{Perm, TwistedAffineWeylElem};

/// Enumeration route limits.
pub const ENUM_MAX_T: usize = 4;
pub const ENUM_MAX_N: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("profile lengths differ: l has {0} entries, r has {1}")]
    LengthMismatch(usize, usize),
    #[error("l_i = {0} does not divide n = {1}")]
    BadL(i64, u32),
    #[error("enumeration limited to t <= {ENUM_MAX_T}, n <= {ENUM_MAX_N}")]
    BoundExceeded,
    #[error("closed form for {0} does not apply to (c, d) = ({1}, {2})")]
    FlavorMismatch(&'static str, u32, u32),
    #[error("invalid type parameters: {0}")]
    InvalidParams(String),
    #[error("divisibility violated: {0}")]
    DivisibilityViolation(String),
    #[error("character exponent {xi} is not regular for q = {q}, m0 = {m0}")]
    NotRegular { xi: u64, q: u64, m0: u32 },
    #[error("W0' lattice is not contained in T0")]
    NotSublattice,
    #[error(transparent)]
    Cover(#[from] CocycleError),
}

fn check_profiles(n: u32, l: &[i64], r: &[i64]) -> Result<(), TypeError> {
    if l.len() != r.len() {
        return Err(TypeError::LengthMismatch(l.len(), r.len()));
    }
    for &li in l {
        if li <= 0 || n as i64 % li != 0 {
            return Err(TypeError::BadL(li, n));
        }
    }
    Ok(())
}

/// `A_ij = l_i (r_j (2c+d) - δ_ij d)`.
pub fn congruence_matrix(p: &CoverParams, l: &[i64], r: &[i64]) -> Vec<Vec<i64>> {
    let t = l.len();
    let tw = 2 * p.c() + p.d();
    (0..t)
        .map(|i| {
            (0..t)
                .map(|j| l[i] * (r[j] * tw - if i == j { p.d() } else { 0 }))
                .collect()
        })
        .collect()
}

/// Does `s` satisfy every congruence?
pub fn is_solution(p: &CoverParams, l: &[i64], r: &[i64], s: &[i64]) -> bool {
    let n = p.n as i64;
    congruence_matrix(p, l, r)
        .iter()
        .all(|row| row.iter().zip(s).map(|(a, b)| a * b).sum::<i64>().rem_euclid(n) == 0)
}

/// Solution lattice via the integer kernel of `[A | -n I]`.
pub fn solve_congruence(p: &CoverParams, l: &[i64], r: &[i64]) -> Result<CongruenceLattice, TypeError> {
    check_profiles(p.n, l, r)?;
    let t = l.len();
    let a = congruence_matrix(p, l, r);
    let n = p.n as i128;
    let b: Vec<Vec<i128>> = (0..t)
        .map(|i| {
            let mut row: Vec<i128> = a[i].iter().map(|&x| x as i128).collect();
            row.extend((0..t).map(|k| if k == i { -n } else { 0 }));
            row
        })
        .collect();
    let gens: Vec<Vec<i64>> = integer_kernel(&b, 2 * t)
        .into_iter()
        .map(|k| k[..t].iter().map(|&x| (x % n) as i64).collect())
        .chain((0..t).map(|i| (0..t).map(|j| if i == j { p.n as i64 } else { 0 }).collect()))
        .collect();
    Ok(CongruenceLattice::from_generators(t, &gens))
}

/// Solution lattice by scanning every residue vector in `[0, n)^t`.
pub fn solve_congruence_enumerate(p: &CoverParams, l: &[i64], r: &[i64]) -> Result<CongruenceLattice, TypeError> {
    check_profiles(p.n, l, r)?;
    let t = l.len();
    if t > ENUM_MAX_T || p.n > ENUM_MAX_N {
        return Err(TypeError::BoundExceeded);
    }
    let n = p.n as i64;
    let mut gens: Vec<Vec<i64>> = (0..t)
        .map(|i| (0..t).map(|j| if i == j { n } else { 0 }).collect())
        .collect();
    let mut lat = CongruenceLattice::from_generators(t, &gens);
    let total = (n as usize).pow(t as u32);
    for idx in 0..total {
        let mut s = vec![0i64; t];
        let mut k = idx;
        for x in s.iter_mut() {
            *x = (k % n as usize) as i64;
            k /= n as usize;
        }
        if !lat.contains(&s) && is_solution(p, l, r, &s) {
            gens = lat.basis.clone();
            gens.push(s);
            lat = CongruenceLattice::from_generators(t, &gens);
        }
    }
    Ok(lat)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverFamily {
    Kp,
    Savin,
}

/// Closed-form solution lattices for the two special families.
///
/// KP: generated by `(n/l_i) e_i` and `(2c+1) n / gcd(n, 2rc + r - 1) · (1,…,1)`
/// with `r = Σ r_i`; this equals the solution lattice when every `l_i | r_i`,
/// which holds for simple types since `l_i | m_i | r_i`.
/// Savin: generated by `(n / gcd(n, 2 l_i)) e_i`.
pub fn closed_form_solution(
    p: &CoverParams,
    l: &[i64],
    r: &[i64],
    family: CoverFamily,
) -> Result<CongruenceLattice, TypeError> {
    check_profiles(p.n, l, r)?;
    let t = l.len();
    let n = p.n as i64;
    let unit = |i: usize, k: i64| -> Vec<i64> { (0..t).map(|j| if i == j { k } else { 0 }).collect() };
    let gens: Vec<Vec<i64>> = match family {
        CoverFamily::Kp => {
            if !p.is_kp() {
                return Err(TypeError::FlavorMismatch("KP", p.c, p.d));
            }
            let rr: i64 = r.iter().sum();
            let c = p.c();
            let diag = (2 * c + 1) * n / gcd(n, 2 * rr * c + rr - 1);
            (0..t)
                .map(|i| unit(i, n / l[i]))
                .chain(std::iter::once(vec![diag; t]))
                .collect()
        }
        CoverFamily::Savin => {
            if !p.is_savin() {
                return Err(TypeError::FlavorMismatch("Savin", p.c, p.d));
            }
            (0..t).map(|i| unit(i, n / gcd(n, 2 * l[i]))).collect()
        }
    };
    Ok(CongruenceLattice::from_generators(t, &gens))
}

/// Parameters of a simple type: block `F`-dimension `r0`, block
/// `E`-dimension `m0`, twist invariant `l0`, number of blocks `t` and the
/// residue degree `f` of `E/F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeParams {
    pub cover: CoverParams,
    pub r0: u32,
    pub m0: u32,
    pub l0: u32,
    pub t: u32,
    pub f: u32,
}

impl TypeParams {
    pub fn new(cover: CoverParams, r0: u32, m0: u32, l0: u32, t: u32, f: u32) -> Result<Self, TypeError> {
        let bad = |m: String| Err(TypeError::InvalidParams(m));
        if r0 == 0 || m0 == 0 || l0 == 0 || t == 0 || f == 0 {
            return bad("r0, m0, l0, t, f must be positive".into());
        }
        if cover.n % l0 != 0 {
            return bad(format!("l0 = {l0} does not divide n = {}", cover.n));
        }
        if m0 % l0 != 0 {
            return bad(format!("l0 = {l0} does not divide m0 = {m0}"));
        }
        if r0 % m0 != 0 {
            return bad(format!("m0 = {m0} does not divide r0 = {r0}"));
        }
        Ok(TypeParams {
            cover,
            r0,
            m0,
            l0,
            t,
            f,
        })
    }

    /// Only the data entering the congruence system and `n0, d0, s0`: positivity
    /// and `l0 | n`. `m0` is set to `r0` and `f` to 1; `l0 | m0 | r0` is not
    /// enforced, see [`TypeParams::divisibility_issues`].
    pub fn for_invariants(cover: CoverParams, r0: u32, l0: u32, t: u32) -> Result<Self, TypeError> {
        if r0 == 0 || l0 == 0 || t == 0 {
            return Err(TypeError::InvalidParams("r0, l0, t must be positive".into()));
        }
        if cover.n % l0 != 0 {
            return Err(TypeError::InvalidParams(format!(
                "l0 = {l0} does not divide n = {}",
                cover.n
            )));
        }
        Ok(TypeParams {
            cover,
            r0,
            m0: r0,
            l0,
            t,
            f: 1,
        })
    }

    /// Violations of `l0 | m0 | r0`, as messages.
    pub fn divisibility_issues(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.m0 % self.l0 != 0 {
            out.push(format!("l0 = {} does not divide m0 = {}", self.l0, self.m0));
        }
        if self.r0 % self.m0 != 0 {
            out.push(format!("m0 = {} does not divide r0 = {}", self.m0, self.r0));
        }
        out
    }

    pub fn r(&self) -> u32 {
        self.r0 * self.t
    }

    pub fn l_profile(&self) -> Vec<i64> {
        vec![self.l0 as i64; self.t as usize]
    }

    pub fn r_profile(&self) -> Vec<i64> {
        vec![self.r0 as i64; self.t as usize]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invariants {
    pub n0: u32,
    pub d0: u32,
    pub s0: u32,
}

/// `n0 = n / gcd(n, (2c+d) r0 l0, d l0)`, `d0 = n / gcd(n, l0 (2cr + dr - d))`
/// with `r = r0 t`, and `s0 = n0 / d0`.
pub fn invariants_n0_d0_s0(tp: &TypeParams) -> Result<Invariants, TypeError> {
    let p = &tp.cover;
    let n = p.n as i64;
    let (c, d) = (p.c(), p.d());
    let (r0, l0, r) = (tp.r0 as i64, tp.l0 as i64, tp.r() as i64);
    let n0 = n / gcd(gcd(n, (2 * c + d) * r0 * l0), d * l0);
    let d0 = n / gcd(n, l0 * (2 * c * r + d * r - d));
    if n % n0 != 0 || n0 % d0 != 0 {
        return Err(TypeError::DivisibilityViolation(format!(
            "n = {n}, n0 = {n0}, d0 = {d0}"
        )));
    }
    Ok(Invariants {
        n0: n0 as u32,
        d0: d0 as u32,
        s0: (n0 / d0) as u32,
    })
}

fn order_in(e: u64, modulus: u64) -> u64 {
    modulus / gcd(modulus as i64, e as i64) as u64
}

/// Result of the twist-invariant computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreenL0 {
    pub o: u32,
    pub l: u32,
}

/// For a character of `F_{q^{m0}}^×` given by the exponent `xi` of a fixed
/// generator of its dual, find the least `o ≥ 1` such that
/// `ξ^{q^o - 1}` has order dividing `n`, and `l = m0 / o`.
///
/// `ξ` must be regular: its orbit under `e ↦ q e` has exactly `m0` elements.
pub fn l0_from_green(q: u64, m0: u32, n: u64, xi: u64) -> Result<GreenL0, TypeError> {
    if q < 2 || m0 == 0 || n == 0 {
        return Err(TypeError::InvalidParams("need q >= 2, m0 >= 1, n >= 1".into()));
    }
    let big = q
        .checked_pow(m0)
        .filter(|&b| b <= i64::MAX as u64)
        .ok_or_else(|| TypeError::InvalidParams("q^m0 too large".into()))?
        - 1;
    let xi = xi % big;
    if frobenius_orbit(xi, q, big) != m0 as u64 {
        return Err(TypeError::NotRegular { xi, q, m0 });
    }
    let mut qo = 1u128;
    for o in 1..=m0 {
        qo *= q as u128;
        let e = ((xi as u128 * (qo - 1)) % big as u128) as u64;
        if n % order_in(e, big) == 0 {
            if m0 % o != 0 {
                return Err(TypeError::DivisibilityViolation(format!(
                    "o = {o} does not divide m0 = {m0}"
                )));
            }
            return Ok(GreenL0 { o, l: m0 / o });
        }
    }
    unreachable!("o = m0 always works for a character of F_(q^m0)^x")
}

/// Size of the orbit of `xi` under multiplication by `q` modulo `big`.
pub fn frobenius_orbit(xi: u64, q: u64, big: u64) -> u64 {
    let mut e = xi % big;
    let start = e;
    let mut k = 0;
    loop {
        e = ((e as u128 * q as u128) % big as u128) as u64;
        k += 1;
        if e == start {
            return k;
        }
    }
}

/// `n0 Z^t + d0 (1,…,1) Z`.
pub fn w0prime_lattice(tp: &TypeParams) -> Result<CongruenceLattice, TypeError> {
    let inv = invariants_n0_d0_s0(tp)?;
    let t = tp.t as usize;
    let mut gens: Vec<Vec<i64>> = (0..t)
        .map(|i| (0..t).map(|j| if i == j { inv.n0 as i64 } else { 0 }).collect())
        .collect();
    gens.push(vec![inv.d0 as i64; t]);
    Ok(CongruenceLattice::from_generators(t, &gens))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct W0Comparison {
    pub equal: bool,
    pub index: i64,
    pub t0: CongruenceLattice,
    pub w0prime: CongruenceLattice,
}

/// Compare the congruence lattice `T0` (constant profiles) with the `W0′`
/// translation lattice; `index = [T0 : W0′]`.
pub fn w0_equals_w0prime(tp: &TypeParams) -> Result<W0Comparison, TypeError> {
    let t0 = solve_congruence(&tp.cover, &tp.l_profile(), &tp.r_profile())?;
    let w0prime = w0prime_lattice(tp)?;
    let index = w0prime.index_in(&t0).ok_or(TypeError::NotSublattice)?;
    Ok(W0Comparison {
        equal: index == 1,
        index,
        t0,
        w0prime,
    })
}

/// `Π_E = t_{n0 e_t} · c` and `ζ_E = t_{d0 (1,…,1)}` as elements of `Z^t ⋊ S_t`.
pub fn pi_zeta_e(tp: &TypeParams) -> Result<(TwistedAffineWeylElem, TwistedAffineWeylElem), TypeError> {
    let inv = invariants_n0_d0_s0(tp)?;
    let t = tp.t as usize;
    let mut shift = vec![0; t];
    shift[t - 1] = inv.n0 as i64;
    let pi = TwistedAffineWeylElem::translation(1, &shift).mul(&TwistedAffineWeylElem::from_perm(1, Perm::rotation(t)));
    let zeta = TwistedAffineWeylElem::translation(1, &vec![inv.d0 as i64; t]);
    Ok((pi, zeta))
}

/// One row of a `W0` scan.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ScanRow {
    pub n: u32,
    pub c: u32,
    pub d: u32,
    pub r0: u32,
    pub l0: u32,
    pub t: u32,
    pub index: i64,
    pub kp: bool,
    pub savin: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanBounds {
    pub n_max: u32,
    pub t_max: u32,
    pub r0_max: u32,
}

pub const SCAN_CAP: ScanBounds = ScanBounds {
    n_max: 24,
    t_max: 4,
    r0_max: 8,
};

/// Every cover `(c, d) ∈ (Z/n)²`, `n ≤ n_max`, every `t ≤ t_max`, `r0 ≤ r0_max`
/// and every `l0 | gcd(n, r0)` (taking `m0 = r0`), with the index `[T0 : W0′]`.
/// Rows are sorted.
pub fn scan_w0(b: ScanBounds) -> Result<Vec<ScanRow>, TypeError> {
    if b.n_max == 0 || b.t_max == 0 || b.r0_max == 0 {
        return Err(TypeError::InvalidParams("bounds must be positive".into()));
    }
    if b.n_max > SCAN_CAP.n_max || b.t_max > SCAN_CAP.t_max || b.r0_max > SCAN_CAP.r0_max {
        return Err(TypeError::BoundExceeded);
    }
    let mut points = Vec::new();
    for n in 1..=b.n_max {
        for c in 0..n {
            for d in 0..n {
                for r0 in 1..=b.r0_max {
                    for l0 in (1..=n).filter(|l| n % l == 0 && r0 % l == 0) {
                        for t in 1..=b.t_max {
                            points.push((n, c, d, r0, l0, t));
                        }
                    }
                }
            }
        }
    }
    let mut rows = points
        .into_par_iter()
        .map(|(n, c, d, r0, l0, t)| {
            let cover = CoverParams::new(n, c as i64, d as i64)?;
            let tp = TypeParams::new(cover, r0, r0, l0, t, 1)?;
            let cmp = w0_equals_w0prime(&tp)?;
            Ok(ScanRow {
                n,
                c,
                d,
                r0,
                l0,
                t,
                index: cmp.index,
                kp: cover.is_kp(),
                savin: cover.is_savin(),
            })
        })
        .collect::<Result<Vec<_>, TypeError>>()?;
    rows.sort();
    Ok(rows)
}
