use std::sync::Arc;

use metahecke::cocycle::{
    chi_h, commutator_block_diagonal, commutator_center, commutator_field_torus, commutator_levi,
    commutator_levi_first_form, sigma_det, sigma_diagonal, BlockTorusElem, LeviBlock, LeviDetData, TorusBlock,
};
use metahecke::typeparams::is_solution;
use metahecke::{CoverParams, Extension, LocalField, LocalFieldElem, MuN};
use proptest::prelude::*;

fn f5(n: u32) -> LocalField {
    LocalField::build(5, 1, n).unwrap()
}

#[test]
fn sigma_det_examples() {
    let k = f5(4);
    let w = k.uniformizer();
    let trivial = CoverParams::new(4, 0, 1).unwrap();
    assert!(sigma_det(&w, &k.elem(1, 3), &k, &trivial).unwrap().is_trivial());
    let c1 = CoverParams::new(4, 1, 0).unwrap();
    assert!(sigma_det(&k.elem(0, 1), &k.elem(0, 2), &k, &c1).unwrap().is_trivial());
    assert_eq!(sigma_det(&w, &w, &k, &c1).unwrap(), MuN::new(4, 2));
}

#[test]
fn commutator_center_examples() {
    let k = f5(4);
    let kp = CoverParams::kp(4, 0).unwrap();
    let w = k.uniformizer();
    assert!(commutator_center(&k.elem(0, 1), &k.elem(0, 3), 2, &k, &kp)
        .unwrap()
        .is_trivial());
    // exponent (2c+d)r - d = 1 times (ϖ, ϖ) = 2
    assert_eq!(commutator_center(&w, &w, 2, &k, &kp).unwrap(), MuN::new(4, 2));
}

#[test]
fn order_mismatch_is_rejected() {
    let k = f5(4);
    let p = CoverParams::kp(2, 0).unwrap();
    assert!(sigma_det(&k.one(), &k.one(), &k, &p).is_err());
}

fn torus(exts: &[Arc<Extension>], us: &[(i64, i64)]) -> BlockTorusElem {
    BlockTorusElem {
        blocks: exts
            .iter()
            .zip(us)
            .map(|(e, &(v, a))| TorusBlock {
                ext: Arc::clone(e),
                u: e.field.elem(v, a),
            })
            .collect(),
    }
}

fn mixed_exts(n: u32) -> (LocalField, Vec<Arc<Extension>>) {
    let base = LocalField::build(5, 1, n).unwrap();
    let exts = vec![
        Arc::new(Extension::trivial(&base)),
        Arc::new(Extension::unramified(&base, 2).unwrap()),
        Arc::new(Extension::ramified(&base, 2).unwrap()),
    ];
    (base, exts)
}

#[test]
fn unit_tori_commute() {
    let (_, exts) = mixed_exts(2);
    let p = CoverParams::new(2, 1, 1).unwrap();
    let u = torus(&exts, &[(0, 1), (0, 5), (0, 1)]);
    let v = torus(&exts, &[(0, 0), (0, 3), (0, 1)]);
    assert!(commutator_field_torus(&u, &v, &p).unwrap().is_trivial());
    let dets = LeviDetData {
        blocks: exts
            .iter()
            .map(|e| LeviBlock {
                rank: 2,
                det: e.field.elem(0, 1),
            })
            .collect(),
    };
    assert!(commutator_levi(&u, &dets, &p).unwrap().is_trivial());
}

#[test]
fn chi_h_zero_exponents() {
    let base = f5(4);
    let ext = Extension::unramified(&base, 2).unwrap();
    let p = CoverParams::kp(4, 1).unwrap();
    let g = [ext.field.elem(0, 7), ext.field.elem(0, 3)];
    assert!(chi_h(&[0, 0], &g, 2, 1, &p, &ext).unwrap().is_trivial());
    assert!(chi_h(&[0, 0], &g, 3, 1, &p, &ext).is_err());
    assert!(chi_h(&[0, 0], &[ext.field.uniformizer(), g[1]], 2, 1, &p, &ext).is_err());
}

#[test]
fn chi_h_direct_evaluation() {
    // n = 4, KP with c = 0, t = 2, r0 = 1, s = (1, 0), E = F with q = 5
    let k = f5(4);
    let ext = Extension::trivial(&k);
    let p = CoverParams::kp(4, 0).unwrap();
    let g = [k.elem(0, 1), k.one()];
    // exponents: Σ s_j r0 (2c+d) - s_i d = (0, 1); the second block is trivial
    let got = chi_h(&[1, 0], &g, 1, 1, &p, &ext).unwrap();
    assert!(got.is_trivial());
    let g = [k.one(), k.elem(0, 1)];
    let expect = k.hilbert_symbol(&k.uniformizer(), &k.elem(0, 1)).unwrap();
    assert_eq!(chi_h(&[1, 0], &g, 1, 1, &p, &ext).unwrap(), expect);
}

/// χ_h vanishes on every g with `det g_i` an `l_i`-th power exactly when `s`
/// solves the congruence system for the profiles `(l, r0)`.
#[test]
fn chi_h_bridges_to_the_congruence_system() {
    let base = f5(4);
    for f in 1..=2u32 {
        let ext = Extension::unramified(&base, f).unwrap();
        let h = ext.field.q() as i64 - 1;
        for (c, d) in [(0, 1), (1, 1), (3, 2), (1, 0), (2, 3)] {
            let p = CoverParams::new(4, c, d).unwrap();
            for m0 in 1..=2u32 {
                let r0 = f * m0;
                for l in [[1i64, 1], [2, 2], [1, 2], [4, 1]] {
                    for s0 in -2..=2 {
                        for s1 in -2..=2 {
                            let s = [s0, s1];
                            let vanishes = (0..2).all(|i| {
                                (0..h).all(|a| {
                                    let mut g = [ext.field.one(); 2];
                                    g[i] = ext.field.elem(0, a * l[i]);
                                    chi_h(&s, &g, r0, m0, &p, &ext).unwrap().is_trivial()
                                })
                            });
                            let r = [r0 as i64; 2];
                            assert_eq!(
                                vanishes,
                                is_solution(&p, &l, &r, &s),
                                "c={c} d={d} f={f} l={l:?} s={s:?}"
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn savin_cover_has_no_cross_terms() {
    let k = LocalField::build(7, 1, 6).unwrap();
    let p = CoverParams::savin(6).unwrap();
    assert_eq!(p.twist(), 0);
    let x = [k.elem(1, 2), k.elem(-1, 5), k.elem(2, 1)];
    let y = [k.elem(0, 4), k.elem(1, 1), k.elem(-2, 3)];
    let got = commutator_field_torus(&BlockTorusElem::diagonal(&k, &x), &BlockTorusElem::diagonal(&k, &y), &p).unwrap();
    let expect = x.iter().zip(&y).fold(MuN::zero(6), |acc, (a, b)| {
        acc.add(k.hilbert_symbol(a, b).unwrap().scale(-2))
    });
    assert_eq!(got, expect);
}

fn cover_strategy() -> impl Strategy<Value = CoverParams> {
    (0i64..6, 0i64..6).prop_map(|(c, d)| CoverParams::new(6, c, d).unwrap())
}

fn units(len: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-3i64..=3, 0i64..48), len)
}

proptest! {
    #[test]
    fn diagonal_commutator_routes(p in cover_strategy(), xs in units(4), ys in units(4)) {
        let k = LocalField::build(7, 1, 6).unwrap();
        let x: Vec<LocalFieldElem> = xs.iter().map(|&(v, a)| k.elem(v, a)).collect();
        let y: Vec<LocalFieldElem> = ys.iter().map(|&(v, a)| k.elem(v, a)).collect();
        let oracle = sigma_diagonal(&x, &y, &k, &p).unwrap().add(sigma_diagonal(&y, &x, &k, &p).unwrap().neg());
        let blocks: Vec<MuN> = x.iter().zip(&y).map(|(a, b)| k.hilbert_symbol(a, b).unwrap().scale(2 * p.c())).collect();
        prop_assert_eq!(commutator_block_diagonal(&blocks, &x, &y, &k, &p).unwrap(), oracle);
        let ft = commutator_field_torus(&BlockTorusElem::diagonal(&k, &x), &BlockTorusElem::diagonal(&k, &y), &p).unwrap();
        prop_assert_eq!(ft, oracle);
    }

    #[test]
    fn field_torus_laws(p in (0i64..4, 0i64..4).prop_map(|(c, d)| CoverParams::new(4, c, d).unwrap()),
                        a in units(3), b in units(3), c in units(3)) {
        let (_, exts) = mixed_exts(4);
        let (u1, u2, v) = (torus(&exts, &a), torus(&exts, &b), torus(&exts, &c));
        let prod = BlockTorusElem {
            blocks: u1.blocks.iter().zip(&u2.blocks)
                .map(|(x, y)| TorusBlock { ext: Arc::clone(&x.ext), u: x.ext.field.mul(&x.u, &y.u) })
                .collect(),
        };
        let comm = |x: &BlockTorusElem, y: &BlockTorusElem| commutator_field_torus(x, y, &p).unwrap();
        prop_assert_eq!(comm(&prod, &v), comm(&u1, &v).add(comm(&u2, &v)));
        prop_assert_eq!(comm(&v, &prod), comm(&v, &u1).add(comm(&v, &u2)));
        prop_assert!(comm(&u1, &v).add(comm(&v, &u1)).is_trivial());
    }

    #[test]
    fn levi_forms_agree(p in (0i64..4, 0i64..4).prop_map(|(c, d)| CoverParams::new(4, c, d).unwrap()),
                        a in units(3), dets in units(3), ranks in prop::collection::vec(1u32..4, 3)) {
        let (_, exts) = mixed_exts(4);
        let u = torus(&exts, &a);
        let v = LeviDetData {
            blocks: exts.iter().zip(&dets).zip(&ranks)
                .map(|((e, &(w, x)), &rank)| LeviBlock { rank, det: e.field.elem(w, x) })
                .collect(),
        };
        prop_assert_eq!(commutator_levi(&u, &v, &p).unwrap(), commutator_levi_first_form(&u, &v, &p).unwrap());
    }
}
