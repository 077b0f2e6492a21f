//! Degreewise free resolutions of bounded complexes, built from the top
//! degree down and cut off below a chosen degree.

use std::sync::Arc;

use crate::exact::module::FinModule;
use crate::linalg::Mat;

use super::complex::{free_map, ChainMap, Complex};

/// A free complex `P` with a map `π: P → E` whose cone is acyclic in every
/// degree `≥ lo`; `P` vanishes below `lo`.
pub struct Resolution {
    pub complex: Arc<Complex>,
    /// `π` in each degree of `P`.
    comps: Vec<Mat>,
    pub lo: i64,
    /// `P = E` and `π = 1`.
    pub own: bool,
}

impl Resolution {
    pub fn map(&self, e: &Arc<Complex>) -> ChainMap {
        if self.own {
            return ChainMap::identity(e);
        }
        let p = &self.complex;
        ChainMap::from_fn(p, e, |i| self.comps[(i - p.lo) as usize].clone())
    }
}

/// Resolution of `e` valid in degrees `≥ l`. Degreewise projective
/// complexes resolve themselves.
pub fn resolve(e: &Arc<Complex>, l: i64) -> Arc<Resolution> {
    if e.is_degreewise_projective() {
        return Arc::new(Resolution {
            complex: e.clone(),
            comps: Vec::new(),
            lo: i64::MIN,
            own: true,
        });
    }
    let mut cache = e.resolution.lock().expect("resolution cache");
    if let Some(r) = cache.as_ref() {
        if r.lo <= l {
            return r.clone();
        }
    }
    let r = Arc::new(build(e, l));
    *cache = Some(r.clone());
    r
}

fn build(e: &Complex, l: i64) -> Resolution {
    let ring = &e.ring;
    let n = ring.characteristic;
    let hi = e.hi().max(l);
    // Built downwards, then reversed.
    let mut terms: Vec<FinModule> = Vec::new();
    let mut diffs: Vec<Mat> = Vec::new();
    let mut comps: Vec<Mat> = Vec::new();
    let mut above = FinModule::zero(ring);
    let mut above_d = Mat::zeros(0, 0);
    let mut above_pi = Mat::zeros(e.dim(hi + 1), 0);
    let mut above2 = FinModule::zero(ring);
    for i in (l..=hi).rev() {
        let ei = e.term(i);
        let x = FinModule::direct_sum(ring, &[&above, ei]);
        let y = FinModule::direct_sum(ring, &[&above2, e.term(i + 1)]);
        let (a, b) = (above.n(), ei.n());
        let mut phi = Mat::zeros(y.n(), x.n());
        phi.set_block(0, 0, &above_d);
        phi.set_block(above2.n(), 0, &above_pi);
        phi.set_block(above2.n(), a, &e.diff(i).scale_mod(-1, n));
        phi.reduce_rows(&y.moduli);
        let ker = x.kernel(&y, &phi);
        let gens = prune(&x, ker.generators());
        let p = FinModule::free(ring, gens.len());
        let top: Vec<Vec<i64>> = gens.iter().map(|g| g[..a].to_vec()).collect();
        let bottom: Vec<Vec<i64>> = gens.iter().map(|g| g[a..a + b].to_vec()).collect();
        let d = free_map(ring, &above, &top);
        let pi = free_map(ring, ei, &bottom);
        diffs.push(d.clone());
        comps.push(pi.clone());
        terms.push(p.clone());
        above2 = std::mem::replace(&mut above, p);
        above_d = d;
        above_pi = pi;
    }
    terms.reverse();
    comps.reverse();
    diffs.reverse();
    // The first pushed differential maps into the zero module above `hi`.
    diffs.pop();
    Resolution {
        complex: Arc::new(Complex::new_unchecked(ring, l, terms, diffs, None)),
        comps,
        lo: l,
        own: false,
    }
}

/// A generating set of the submodule spanned by `gens`, dropping redundant
/// generators.
fn prune(x: &FinModule, gens: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    let mut kept: Vec<Vec<i64>> = Vec::new();
    for g in gens {
        if x.is_zero_vec(&g) {
            continue;
        }
        if kept.is_empty() || !x.span(&kept).contains(&g) {
            kept.push(g);
        }
    }
    let mut k = 0;
    while k < kept.len() {
        let others: Vec<Vec<i64>> = kept.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, v)| v.clone()).collect();
        if !others.is_empty() && x.span(&others).contains(&kept[k]) {
            kept.remove(k);
        } else {
            k += 1;
        }
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::FiniteRing;

    #[test]
    fn residue_field_of_z4() {
        let r = FiniteRing::build("Z/4").unwrap();
        let k = FinModule::ring_quotient(&r, &[2]).module;
        let e = Arc::new(Complex::concentrated(&k, 0));
        let res = resolve(&e, -3);
        let p = &res.complex;
        assert_eq!((p.lo, p.hi()), (-3, 0));
        for i in -3..=0 {
            assert_eq!(p.dim(i), 1, "one free generator in degree {i}");
        }
        assert!(res.map(&e).is_quasi_iso_from(-3));
    }

    #[test]
    fn two_term_complex() {
        let r = FiniteRing::build("Z/8").unwrap();
        let k = FinModule::ring_quotient(&r, &[4]).module;
        let s = FinModule::ring_module(&r);
        // Z/8 --(x ↦ x mod 4)--> Z/4
        let e = Arc::new(Complex::new(&r, 0, vec![s, k], vec![Mat::from_rows(1, 1, vec![1])]).unwrap());
        let res = resolve(&e, -2);
        assert!(res.map(&e).is_quasi_iso_from(-2));
    }
}
