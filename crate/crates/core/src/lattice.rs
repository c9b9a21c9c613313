//! Integer lattices in `Z^t` in row-style Hermite normal form.
//!
//! A lattice is stored by an upper-triangular basis with positive pivots and
//! entries above each pivot reduced into `[0, pivot)`, so two lattices are
//! equal exactly when their bases are.

use serde::{Deserialize, Serialize};

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    // returns (g, x, y) with a x + b y = g >= 0
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1i128, 0i128);
    let (mut y0, mut y1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    ext_gcd(a as i128, b as i128).0 as i64
}

/// Row echelon form by unimodular row operations; rows of `m` are reduced
/// in place and zero rows are dropped. Returns pivot columns.
fn echelon(m: &mut Vec<Vec<i128>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row >= m.len() {
            break;
        }
        // fold the gcd of column `col` (rows row..) into row `row`
        for k in row + 1..m.len() {
            if m[k][col] == 0 {
                continue;
            }
            let (a, b) = (m[row][col], m[k][col]);
            let (g, x, y) = ext_gcd(a, b);
            let (ag, bg) = (a / g, b / g);
            for j in 0..cols {
                let (p, q) = (m[row][j], m[k][j]);
                m[row][j] = x * p + y * q;
                m[k][j] = -bg * p + ag * q;
            }
        }
        if m[row][col] == 0 {
            continue;
        }
        if m[row][col] < 0 {
            for x in m[row].iter_mut() {
                *x = -*x;
            }
        }
        pivots.push(col);
        row += 1;
    }
    m.truncate(row);
    pivots
}

fn reduce_above(m: &mut [Vec<i128>], pivots: &[usize]) {
    for (i, &c) in pivots.iter().enumerate() {
        let p = m[i][c];
        for k in 0..i {
            let q = m[k][c].div_euclid(p);
            if q != 0 {
                for j in 0..m[k].len() {
                    m[k][j] -= q * m[i][j];
                }
            }
        }
    }
}

/// Sublattice of `Z^t` given by a basis in Hermite normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CongruenceLattice {
    pub t: usize,
    pub basis: Vec<Vec<i64>>,
}

impl CongruenceLattice {
    /// Lattice spanned by arbitrary integer generators.
    pub fn from_generators(t: usize, gens: &[Vec<i64>]) -> Self {
        let mut m: Vec<Vec<i128>> = gens
            .iter()
            .map(|g| {
                assert_eq!(g.len(), t, "generator of wrong length");
                g.iter().map(|&x| x as i128).collect()
            })
            .filter(|g: &Vec<i128>| g.iter().any(|&x| x != 0))
            .collect();
        let pivots = echelon(&mut m, t);
        reduce_above(&mut m, &pivots);
        CongruenceLattice {
            t,
            basis: m
                .into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|x| i64::try_from(x).expect("HNF entry overflow"))
                        .collect()
                })
                .collect(),
        }
    }

    /// `k·Z^t`.
    pub fn scalar(t: usize, k: i64) -> Self {
        let gens: Vec<Vec<i64>> = (0..t)
            .map(|i| (0..t).map(|j| if i == j { k } else { 0 }).collect())
            .collect();
        Self::from_generators(t, &gens)
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.t
    }

    /// Covolume, i.e. `[Z^t : L]` for full-rank lattices.
    pub fn det(&self) -> Option<i64> {
        self.is_full_rank()
            .then(|| (0..self.t).map(|i| self.basis[i][i]).product())
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        let mut v: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for row in &self.basis {
            let c = row.iter().position(|&x| x != 0).unwrap();
            let p = row[c] as i128;
            if v[c] % p != 0 {
                return false;
            }
            let q = v[c] / p;
            for (x, &r) in v.iter_mut().zip(row) {
                *x -= q * r as i128;
            }
        }
        v.iter().all(|&x| x == 0)
    }

    pub fn is_sublattice_of(&self, other: &Self) -> bool {
        self.t == other.t && self.basis.iter().all(|b| other.contains(b))
    }

    /// `[other : self]` when `self ⊆ other` and both are full rank.
    pub fn index_in(&self, other: &Self) -> Option<i64> {
        if !self.is_sublattice_of(other) {
            return None;
        }
        Some(self.det()? / other.det()?)
    }

    pub fn sum(&self, other: &Self) -> Self {
        let gens: Vec<Vec<i64>> = self.basis.iter().chain(&other.basis).cloned().collect();
        Self::from_generators(self.t, &gens)
    }
}

/// Basis of `{x ∈ Z^N : B x = 0}` for an `m × N` integer matrix `B`.
pub fn integer_kernel(b: &[Vec<i128>], ncols: usize) -> Vec<Vec<i128>> {
    // row-reduce [B^T | I]; rows whose left block vanishes span the kernel
    let m = b.len();
    let mut aug: Vec<Vec<i128>> = (0..ncols)
        .map(|j| {
            let mut row: Vec<i128> = b.iter().map(|r| r[j]).collect();
            row.extend((0..ncols).map(|k| i128::from(k == j)));
            row
        })
        .collect();
    let mut row = 0;
    for col in 0..m {
        if row >= aug.len() {
            break;
        }
        for k in row + 1..aug.len() {
            if aug[k][col] == 0 {
                continue;
            }
            let (a, bb) = (aug[row][col], aug[k][col]);
            let (g, x, y) = ext_gcd(a, bb);
            let (ag, bg) = (a / g, bb / g);
            for j in 0..aug[0].len() {
                let (p, q) = (aug[row][j], aug[k][j]);
                aug[row][j] = x * p + y * q;
                aug[k][j] = -bg * p + ag * q;
            }
        }
        if aug[row][col] != 0 {
            row += 1;
        }
    }
    aug.into_iter()
        .skip(row)
        .filter(|r| r[..m].iter().all(|&x| x == 0))
        .map(|r| r[m..].to_vec())
        .collect()
}
