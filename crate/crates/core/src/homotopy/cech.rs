//! Stable Koszul (Čech) complexes over a finite ring.
//!
//! For `t = (t_1, …, t_d)` the degree-`j` term is `⊕_{|T| = j} M[1/t_T]`
//! with `t_T = Π_{i∈T} t_i`, and the component `M[1/t_T] → M[1/t_{T∪i}]`
//! is the localization map with sign `(−1)^{#{k ∈ T : k < i}}`. Over a
//! finite ring `M[1/t]` is the summand `e_t M`.

use std::sync::Arc;

use crate::error::Result;
use crate::exact::localize::{localize_finite, Localization};
use crate::exact::module::FinModule;
use crate::exact::FiniteRing;
use crate::linalg::{modp, Mat};

use super::complex::{ChainMap, Complex};
use super::tensor::{left_unitor, tensor, tensor_maps};

pub struct Summand {
    pub subset: Vec<usize>,
    pub offset: usize,
    pub loc: Localization,
}

pub struct CechComplex {
    pub complex: Arc<Complex>,
    pub module: FinModule,
    /// `summands[j]` are the subsets of size `j` in lexicographic order.
    pub summands: Vec<Vec<Summand>>,
}

fn subsets_of_size(d: usize, j: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, d: usize, j: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == j {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i);
            rec(i + 1, d, j, cur, out);
            cur.pop();
        }
    }
    rec(0, d, j, &mut cur, &mut out);
    out
}

pub fn subset_product(ring: &FiniteRing, t: &[usize], subset: &[usize]) -> usize {
    subset.iter().fold(ring.one(), |acc, &i| ring.mul(acc, t[i]))
}

impl CechComplex {
    pub fn new(m: &FinModule, t: &[usize]) -> CechComplex {
        let ring = &m.ring;
        let d = t.len();
        let summands: Vec<Vec<Summand>> = (0..=d)
            .map(|j| {
                let mut offset = 0;
                subsets_of_size(d, j)
                    .into_iter()
                    .map(|subset| {
                        let loc = localize_finite(m, subset_product(ring, t, &subset));
                        let s = Summand { subset, offset, loc };
                        offset += s.loc.module().n();
                        s
                    })
                    .collect()
            })
            .collect();
        let terms: Vec<FinModule> = summands
            .iter()
            .map(|row| {
                let parts: Vec<&FinModule> = row.iter().map(|s| s.loc.module()).collect();
                FinModule::direct_sum(ring, &parts)
            })
            .collect();
        let n = ring.characteristic;
        let diffs = (0..d)
            .map(|j| {
                let mut mat = Mat::zeros(terms[j + 1].n(), terms[j].n());
                for src in &summands[j] {
                    for i in (0..d).filter(|i| !src.subset.contains(i)) {
                        let mut bigger = src.subset.clone();
                        bigger.push(i);
                        bigger.sort();
                        let tgt = summands[j + 1]
                            .iter()
                            .find(|s| s.subset == bigger)
                            .expect("every subset is listed");
                        let below = src.subset.iter().filter(|&&k| k < i).count();
                        let sign = if below % 2 == 0 { 1 } else { n - 1 };
                        let block = tgt.loc.map.mul_mod(&src.loc.image.lift, n).scale_mod(sign, n);
                        mat.set_block(tgt.offset, src.offset, &block);
                    }
                }
                mat.reduce_rows(&terms[j + 1].moduli);
                mat
            })
            .collect();
        CechComplex {
            complex: Arc::new(Complex::new_unchecked(ring, 0, terms, diffs, None)),
            module: m.clone(),
            summands,
        }
    }

    /// The augmentation onto `M` in degree 0, which must be the target's
    /// only degree.
    pub fn augmentation(&self, target: &Arc<Complex>) -> Result<ChainMap> {
        let c = &self.complex;
        ChainMap::new(c, target, (0..c.terms.len()).map(|j| {
            if j == 0 {
                self.summands[0][0].loc.image.lift.clone()
            } else {
                Mat::zeros(target.dim(j as i64), c.dim(j as i64))
            }
        }).collect())
    }

    /// Coordinates, in the degree-`|T|` term, of `e_T x` for `x ∈ M`.
    pub fn element(&self, subset: &[usize], x: &[i64]) -> Vec<i64> {
        let row = &self.summands[subset.len()];
        let s = row.iter().find(|s| s.subset == subset).expect("listed subset");
        let mut v = vec![0; self.complex.dim(subset.len() as i64)];
        let n = self.module.characteristic();
        let local = s.loc.map.apply_mod(x, n);
        for (k, c) in local.iter().enumerate() {
            v[s.offset + k] = modp(*c, s.loc.module().moduli[k]);
        }
        v
    }
}

/// The stable Koszul complex of `t` on the ring with its augmentation to the
/// unit complex.
pub fn koszul_stable(ring: &Arc<FiniteRing>, t: &[usize], unit: &Arc<Complex>) -> Result<(CechComplex, ChainMap)> {
    let c = CechComplex::new(&FinModule::ring_module(ring), t);
    let aug = c.augmentation(unit)?;
    Ok((c, aug))
}

/// `Č(t) ⊗ E → E`: the augmentation tensored with `E`, followed by the unitor.
pub fn cech_tensor_augmentation(
    cech: &Arc<Complex>,
    aug: &ChainMap,
    e: &Arc<Complex>,
) -> Result<(Arc<Complex>, ChainMap)> {
    let src = tensor(cech, e);
    let mid = tensor(&aug.tgt, e);
    let f = tensor_maps(aug, &ChainMap::identity(e), &src, &mid)?;
    let l = left_unitor(&mid)?;
    Ok((src, l.compose(&f)?))
}

/// Comparison of `Č(t ++ u; M)` with `Č(t) ⊗ (Č(u) ⊗ M)`.
pub struct DerivedIntersection {
    pub direct: Arc<Complex>,
    pub iterated: Arc<Complex>,
    pub comparison: ChainMap,
}

impl DerivedIntersection {
    pub fn is_quasi_iso(&self) -> bool {
        self.comparison.is_quasi_iso()
    }
}

/// Builds the reindexing map `e_W m ↦ e_T ⊗ (e_U ⊗ m)`, `W = T ⊔ U`.
pub fn derived_intersection(m: &FinModule, t: &[usize], u: &[usize]) -> Result<DerivedIntersection> {
    let ring = &m.ring;
    let mut tu = t.to_vec();
    tu.extend_from_slice(u);
    let direct = CechComplex::new(m, &tu);
    let s = FinModule::ring_module(ring);
    let ct = CechComplex::new(&s, t);
    let cu = CechComplex::new(&s, u);
    let mc = Arc::new(Complex::concentrated(m, 0));
    let inner = tensor(&cu.complex, &mc);
    let iterated = tensor(&ct.complex, &inner);
    let outer_info = iterated.tensor.clone().expect("tensor complex");
    let inner_info = inner.tensor.clone().expect("tensor complex");
    let one = ring.coords(ring.one());
    let dc = &direct.complex;
    let comps = (0..dc.terms.len())
        .map(|w| {
            let mut cols = Vec::new();
            for sm in &direct.summands[w] {
                let tpart: Vec<usize> = sm.subset.iter().copied().filter(|&k| k < t.len()).collect();
                let upart: Vec<usize> = sm.subset.iter().filter(|&&k| k >= t.len()).map(|k| k - t.len()).collect();
                let et = ct.element(&tpart, &one);
                let eu = cu.element(&upart, &one);
                for k in 0..sm.loc.module().n() {
                    let x = sm.loc.image.lift.column(k);
                    let ux = inner_info.pure(upart.len() as i64, upart.len() as i64, &eu, &x);
                    cols.push(outer_info.pure(w as i64, tpart.len() as i64, &et, &ux));
                }
            }
            Mat::from_columns(iterated.dim(w as i64), &cols)
        })
        .collect();
    let direct_arc = direct.complex.clone();
    let comparison = ChainMap::new(&direct_arc, &iterated, comps)?;
    Ok(DerivedIntersection {
        direct: direct_arc,
        iterated,
        comparison,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cech_of_two_over_z12() {
        let r = FiniteRing::build("Z/12").unwrap();
        let s = FinModule::ring_module(&r);
        let c = CechComplex::new(&s, &[2]);
        // Z/12 → Z/3
        assert_eq!(c.complex.dim(1), 1);
        assert_eq!(c.complex.homology_order(0).value(), Some(4));
        assert_eq!(c.complex.homology_order(1).value(), Some(1));
    }

    #[test]
    fn two_generators_is_a_complex() {
        let r = FiniteRing::build("Z/30").unwrap();
        let s = FinModule::ring_module(&r);
        let c = CechComplex::new(&s, &[6, 10]);
        assert!(Complex::new(&r, 0, c.complex.terms.clone(), c.complex.diffs.clone()).is_ok());
        assert_eq!(c.complex.homology_order(0).value(), Some(2));
    }

    #[test]
    fn augmentation_and_intersection() {
        let r = FiniteRing::build("Z/6").unwrap();
        let unit = Arc::new(Complex::unit(&r));
        let (c, aug) = koszul_stable(&r, &[3], &unit).unwrap();
        let e = Arc::new(Complex::concentrated(&FinModule::ring_quotient(&r, &[2]).module, 0));
        let (_, f) = cech_tensor_augmentation(&c.complex, &aug, &e).unwrap();
        // Z/2 has no 3-power torsion; Z/3 is all 3-power torsion.
        assert!(!f.is_quasi_iso());
        let e3 = Arc::new(Complex::concentrated(&FinModule::ring_quotient(&r, &[3]).module, 0));
        let (_, f) = cech_tensor_augmentation(&c.complex, &aug, &e3).unwrap();
        assert!(f.is_quasi_iso());
        let di = derived_intersection(&FinModule::ring_module(&r), &[2], &[3]).unwrap();
        assert!(di.is_quasi_iso());
    }
}
