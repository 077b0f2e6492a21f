//! Total tensor products of complexes, tensor products of chain maps, the
//! symmetric monoidal structure maps, and change of rings.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact::module::{FinModule, TensorModule};
use crate::exact::{FiniteRing, RingMap};
use crate::linalg::{modp, Mat};

use super::complex::{ChainMap, Complex};

/// One summand `A^p ⊗ B^q` of a total degree.
pub struct Block {
    pub p: i64,
    pub q: i64,
    pub offset: usize,
    pub tm: TensorModule,
}

pub struct TensorInfo {
    pub left: Arc<Complex>,
    pub right: Arc<Complex>,
    /// `blocks[k]` lists the summands of total degree `lo + k`.
    pub blocks: Vec<Vec<Block>>,
    pub lo: i64,
}

impl TensorInfo {
    fn block(&self, n: i64, p: i64) -> Option<&Block> {
        let k = n - self.lo;
        if k < 0 || k as usize >= self.blocks.len() {
            return None;
        }
        self.blocks[k as usize].iter().find(|b| b.p == p)
    }

    fn total_dim(&self, n: i64) -> usize {
        let k = n - self.lo;
        if k < 0 || k as usize >= self.blocks.len() {
            return 0;
        }
        self.blocks[k as usize].iter().map(|b| b.tm.module().n()).sum()
    }

    /// Coordinates of `x ⊗ y ∈ A^p ⊗ B^{n−p}` inside total degree `n`.
    pub fn pure(&self, n: i64, p: i64, x: &[i64], y: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.total_dim(n)];
        if let Some(b) = self.block(n, p) {
            let v = b.tm.pure(x, y);
            out[b.offset..b.offset + v.len()].copy_from_slice(&v);
        }
        out
    }

    /// The block containing coordinate `i` of total degree `n`.
    fn locate(&self, n: i64, i: usize) -> (&Block, usize) {
        let blocks = &self.blocks[(n - self.lo) as usize];
        let b = blocks
            .iter()
            .find(|b| i >= b.offset && i < b.offset + b.tm.module().n())
            .expect("coordinate lies in a block");
        (b, i - b.offset)
    }
}

fn unit_vec(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn add_into(acc: &mut [i64], v: &[i64], c: i64, n: i64) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a = modp(*a + c * x, n);
    }
}

/// Total complex with `d(a ⊗ b) = da ⊗ b + (−1)^p a ⊗ db`.
pub fn tensor(a: &Arc<Complex>, b: &Arc<Complex>) -> Arc<Complex> {
    let ring = &a.ring;
    let n_char = ring.characteristic;
    if a.terms.is_empty() || b.terms.is_empty() {
        let info = TensorInfo {
            left: a.clone(),
            right: b.clone(),
            blocks: Vec::new(),
            lo: 0,
        };
        return Arc::new(Complex::new_unchecked(ring, 0, Vec::new(), Vec::new(), Some(Arc::new(info))));
    }
    let lo = a.lo + b.lo;
    let hi = a.hi() + b.hi();
    let mut blocks = Vec::new();
    let mut terms = Vec::new();
    for n in lo..=hi {
        let mut row = Vec::new();
        let mut offset = 0;
        for p in a.lo..=a.hi() {
            let q = n - p;
            if q < b.lo || q > b.hi() || a.term(p).is_zero() || b.term(q).is_zero() {
                continue;
            }
            let tm = TensorModule::new(a.term(p), b.term(q));
            let len = tm.module().n();
            row.push(Block { p, q, offset, tm });
            offset += len;
        }
        let parts: Vec<&FinModule> = row.iter().map(|b| b.tm.module()).collect();
        terms.push(FinModule::direct_sum(ring, &parts));
        blocks.push(row);
    }
    let info = TensorInfo {
        left: a.clone(),
        right: b.clone(),
        blocks,
        lo,
    };
    let mut diffs = Vec::new();
    for n in lo..hi {
        let tgt = &terms[(n + 1 - lo) as usize];
        let mut d = Mat::zeros(tgt.n(), terms[(n - lo) as usize].n());
        for blk in &info.blocks[(n - lo) as usize] {
            let (p, q) = (blk.p, blk.q);
            let (da, db) = (a.diff(p), b.diff(q));
            let sign = if p.rem_euclid(2) == 0 { 1 } else { -1 };
            let m = blk.tm.bilinear_map(&tgt.moduli, n_char, |i, j| {
                let ei = unit_vec(a.dim(p), i);
                let fj = unit_vec(b.dim(q), j);
                let mut v = info.pure(n + 1, p + 1, &da.column(i), &fj);
                add_into(&mut v, &info.pure(n + 1, p, &ei, &db.column(j)), sign, n_char);
                v
            });
            d.set_block(0, blk.offset, &m);
        }
        d.reduce_rows(&tgt.moduli);
        diffs.push(d);
    }
    Arc::new(Complex::new_unchecked(ring, lo, terms, diffs, Some(Arc::new(info))))
}

fn info_of(c: &Complex) -> Result<&TensorInfo> {
    c.tensor
        .as_deref()
        .ok_or_else(|| Error::InvalidInput("complex was not built as a tensor product".into()))
}

/// Builds a chain map out of a tensor complex from a bilinear rule on blocks:
/// `beta(block, i, j)` is the image of `e_i ⊗ f_j` in the target degree.
fn from_blocks(
    src: &Arc<Complex>,
    tgt: &Arc<Complex>,
    beta: impl Fn(&Block, i64, usize, usize) -> Vec<i64>,
) -> Result<ChainMap> {
    let info = info_of(src)?;
    let n_char = src.characteristic();
    let comps = (src.lo..=src.hi())
        .map(|n| {
            let t = tgt.term(n);
            let mut m = Mat::zeros(t.n(), src.dim(n));
            for blk in &info.blocks[(n - info.lo) as usize] {
                let part = blk.tm.bilinear_map(&t.moduli, n_char, |i, j| beta(blk, n, i, j));
                m.set_block(0, blk.offset, &part);
            }
            m
        })
        .collect();
    ChainMap::new(src, tgt, comps)
}

/// `f ⊗ g: A ⊗ B → A' ⊗ B'` between the given tensor complexes.
pub fn tensor_maps(f: &ChainMap, g: &ChainMap, src: &Arc<Complex>, tgt: &Arc<Complex>) -> Result<ChainMap> {
    let ti = info_of(tgt)?;
    from_blocks(src, tgt, |blk, n, i, j| {
        let x = f.at(blk.p).column(i);
        let y = g.at(blk.q).column(j);
        ti.pure(n, blk.p, &x, &y)
    })
}

/// `l: 𝒪 ⊗ A → A`, `s ⊗ a ↦ sa`.
pub fn left_unitor(src: &Arc<Complex>) -> Result<ChainMap> {
    let info = info_of(src)?;
    let a = info.right.clone();
    from_blocks(src, &a, |blk, _, i, j| a.term(blk.q).action[i].column(j))
}

/// `r: A ⊗ 𝒪 → A`, `a ⊗ s ↦ sa`.
pub fn right_unitor(src: &Arc<Complex>) -> Result<ChainMap> {
    let info = info_of(src)?;
    let a = info.left.clone();
    from_blocks(src, &a, |blk, _, i, j| a.term(blk.p).action[j].column(i))
}

/// `A ⊗ B → B ⊗ A`, `a ⊗ b ↦ (−1)^{pq} b ⊗ a`.
pub fn symmetry(src: &Arc<Complex>, tgt: &Arc<Complex>) -> Result<ChainMap> {
    let ti = info_of(tgt)?;
    let n_char = src.characteristic();
    from_blocks(src, tgt, |blk, n, i, j| {
        let x = unit_vec(blk.tm.left_n, i);
        let y = unit_vec(blk.tm.right_n, j);
        let v = ti.pure(n, blk.q, &y, &x);
        if (blk.p * blk.q).rem_euclid(2) == 1 {
            v.iter().map(|c| modp(-c, n_char)).collect()
        } else {
            v
        }
    })
}

/// `(A ⊗ B) ⊗ C → A ⊗ (B ⊗ C)`.
pub fn associator(src: &Arc<Complex>, tgt: &Arc<Complex>) -> Result<ChainMap> {
    let si = info_of(src)?;
    let ab = info_of(&si.left)?;
    let ti = info_of(tgt)?;
    let bc = info_of(&ti.right)?;
    let n_char = src.characteristic();
    let a = ab.left.clone();
    let b = ab.right.clone();
    from_blocks(src, tgt, |blk, n, i, j| {
        let (inner, i2) = ab.locate(blk.p, i);
        let mut acc = vec![0; tgt.dim(n)];
        for (ia, ib, c) in inner.tm.lift_terms(i2) {
            let x = unit_vec(a.dim(inner.p), ia);
            let y = unit_vec(b.dim(inner.q), ib);
            let z = unit_vec(blk.tm.right_n, j);
            let yz = bc.pure(inner.q + blk.q, inner.q, &y, &z);
            add_into(&mut acc, &ti.pure(n, inner.p, &x, &yz), c, n_char);
        }
        acc
    })
}

/// The restriction of scalars of a `T`-module along `ψ: S → T`.
pub fn restrict_module(psi: &RingMap, m: &FinModule) -> FinModule {
    let s = &psi.source;
    let action = (0..s.dim())
        .map(|i| m.action_of_element(psi.apply(s.basis_element(i))))
        .collect();
    FinModule::new_unchecked(s, m.moduli.clone(), action)
}

/// `T ⊗_S M` as a `T`-module.
pub fn extend_module(psi: &RingMap, m: &FinModule) -> TensorModule {
    let t = &psi.target;
    let t_mod = FinModule::ring_module(t);
    let t_as_s = restrict_module(psi, &t_mod);
    TensorModule::new_over(&t_as_s, m, t, &t_mod.action)
}

/// `ψ_*` applied degreewise.
pub fn restrict_complex(psi: &RingMap, c: &Complex) -> Complex {
    let terms = c.terms.iter().map(|t| restrict_module(psi, t)).collect();
    Complex::new_unchecked(&psi.source, c.lo, terms, c.diffs.clone(), None)
}

/// `ψ^* = T ⊗_S −` applied degreewise; exact on degreewise projective complexes.
pub fn extend_complex(psi: &RingMap, c: &Complex) -> (Complex, Vec<TensorModule>) {
    let t = &psi.target;
    let n_char = t.characteristic;
    let exts: Vec<TensorModule> = c.terms.iter().map(|m| extend_module(psi, m)).collect();
    let terms: Vec<FinModule> = exts.iter().map(|e| e.module().clone()).collect();
    let diffs = (0..c.diffs.len())
        .map(|k| {
            let d = &c.diffs[k];
            let tgt = &exts[k + 1];
            exts[k].bilinear_map(&tgt.module().moduli, n_char, |i, j| {
                tgt.pure(&unit_vec(t.dim(), i), &d.column(j))
            })
        })
        .collect();
    (Complex::new_unchecked(t, c.lo, terms, diffs, None), exts)
}

/// `ψ^*f: ψ^*A → ψ^*B` for a chain map `f`, with the extension data of both ends.
pub fn extend_map(
    psi: &RingMap,
    f: &ChainMap,
    src: (&Arc<Complex>, &[TensorModule]),
    tgt: (&Arc<Complex>, &[TensorModule]),
) -> Result<ChainMap> {
    let t = &psi.target;
    let n_char = t.characteristic;
    let comps = (src.0.lo..=src.0.hi())
        .map(|i| {
            let se = &src.1[(i - src.0.lo) as usize];
            let k = i - tgt.0.lo;
            let moduli = &tgt.0.term(i).moduli;
            if k < 0 || k as usize >= tgt.1.len() {
                return Mat::zeros(0, se.module().n());
            }
            let te = &tgt.1[k as usize];
            let fi = f.at(i);
            se.bilinear_map(moduli, n_char, |a, b| te.pure(&unit_vec(t.dim(), a), &fi.column(b)))
        })
        .collect();
    ChainMap::new(src.0, tgt.0, comps)
}

/// `T ⊗_S S → T`, `t ⊗ s ↦ t ψ(s)`, on an extended unit complex.
pub fn extended_unit_iso(psi: &RingMap, src: &Arc<Complex>, ext: &[TensorModule], unit: &Arc<Complex>) -> Result<ChainMap> {
    let (s, t) = (&psi.source, &psi.target);
    let comps = (src.lo..=src.hi())
        .map(|i| {
            let e = &ext[(i - src.lo) as usize];
            let m = unit.term(i);
            e.bilinear_map(&m.moduli, t.characteristic, |a, b| {
                let img = t.coords(psi.apply(s.basis_element(b)));
                t.mul_coords(&unit_vec(t.dim(), a), &img)
            })
        })
        .collect();
    ChainMap::new(src, unit, comps)
}

pub fn unit_complex(ring: &Arc<FiniteRing>) -> Arc<Complex> {
    Arc::new(Complex::unit(ring))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_term(ring: &Arc<FiniteRing>, d: i64) -> Arc<Complex> {
        let s = FinModule::ring_module(ring);
        Arc::new(Complex::new(ring, 0, vec![s.clone(), s], vec![Mat::from_rows(1, 1, vec![d])]).unwrap())
    }

    #[test]
    fn koszul_square_is_a_complex() {
        let r = FiniteRing::build("Z/8").unwrap();
        let k = two_term(&r, 2);
        let kk = tensor(&k, &k);
        assert_eq!((kk.lo, kk.hi()), (0, 2));
        assert_eq!(kk.dim(1), 2);
        assert!(Complex::new(&r, kk.lo, kk.terms.clone(), kk.diffs.clone()).is_ok());
        assert_eq!(kk.homology_order(2).value(), Some(2));
    }

    #[test]
    fn structure_maps_are_quasi_isomorphisms() {
        let r = FiniteRing::build("Z/6").unwrap();
        let k = two_term(&r, 2);
        let o = unit_complex(&r);
        let ok = tensor(&o, &k);
        let ko = tensor(&k, &o);
        assert!(left_unitor(&ok).unwrap().is_quasi_iso());
        assert!(right_unitor(&ko).unwrap().is_quasi_iso());
        let kk = tensor(&k, &k);
        let s = symmetry(&kk, &kk).unwrap();
        assert!(s.compose(&s).unwrap().strictly_equal(&ChainMap::identity(&kk)));
        let l = tensor(&kk, &k);
        let rr = tensor(&k, &kk);
        assert!(associator(&l, &rr).unwrap().is_quasi_iso());
    }
}
