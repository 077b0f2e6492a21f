//! Bounded cochain complexes of finite modules and chain maps between them.

use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::exact::module::{FinModule, Order, Subquotient};
use crate::exact::FiniteRing;
use crate::linalg::Mat;

use super::tensor::TensorInfo;

/// `terms[k]` sits in degree `lo + k`; `diffs[k]: terms[k] → terms[k + 1]`.
pub struct Complex {
    pub ring: Arc<FiniteRing>,
    pub lo: i64,
    pub terms: Vec<FinModule>,
    pub diffs: Vec<Mat>,
    /// Block structure when the complex was built as a total tensor product.
    pub tensor: Option<Arc<TensorInfo>>,
    zero: FinModule,
    projective: OnceLock<bool>,
    pub(crate) resolution: Mutex<Option<Arc<super::resolution::Resolution>>>,
}

impl std::fmt::Debug for Complex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let orders: Vec<String> = self
            .terms
            .iter()
            .map(|t| t.order().value().map_or("?".into(), |v| v.to_string()))
            .collect();
        write!(f, "Complex(lo={}, |terms|=[{}])", self.lo, orders.join(", "))
    }
}

impl Complex {
    /// Builds and verifies a complex: each differential is a module map and
    /// consecutive differentials compose to zero.
    pub fn new(ring: &Arc<FiniteRing>, lo: i64, terms: Vec<FinModule>, diffs: Vec<Mat>) -> Result<Complex> {
        let c = Self::new_unchecked(ring, lo, terms, diffs, None);
        c.verify()?;
        Ok(c)
    }

    pub(crate) fn new_unchecked(
        ring: &Arc<FiniteRing>,
        lo: i64,
        terms: Vec<FinModule>,
        diffs: Vec<Mat>,
        tensor: Option<Arc<TensorInfo>>,
    ) -> Complex {
        assert_eq!(diffs.len(), terms.len().saturating_sub(1), "one differential between neighbours");
        Complex {
            ring: ring.clone(),
            lo,
            terms,
            diffs,
            tensor,
            zero: FinModule::zero(ring),
            projective: OnceLock::new(),
            resolution: Mutex::new(None),
        }
    }

    fn verify(&self) -> Result<()> {
        for (k, d) in self.diffs.iter().enumerate() {
            self.terms[k + 1].check_hom(&self.terms[k], d).map_err(|e| {
                Error::InvalidInput(format!("differential in degree {}: {e}", self.lo + k as i64))
            })?;
        }
        for k in 0..self.diffs.len().saturating_sub(1) {
            let dd = self.terms[k + 2].compose(&self.diffs[k + 1], &self.diffs[k]);
            if !dd.is_zero() {
                return Err(Error::InvalidInput(format!(
                    "d∘d ≠ 0 in degree {}",
                    self.lo + k as i64
                )));
            }
        }
        Ok(())
    }

    pub fn zero(ring: &Arc<FiniteRing>) -> Complex {
        Self::new_unchecked(ring, 0, Vec::new(), Vec::new(), None)
    }

    /// `M` placed in a single degree.
    pub fn concentrated(m: &FinModule, degree: i64) -> Complex {
        Self::new_unchecked(&m.ring, degree, vec![m.clone()], Vec::new(), None)
    }

    /// The unit object: the ring in degree 0.
    pub fn unit(ring: &Arc<FiniteRing>) -> Complex {
        Self::concentrated(&FinModule::ring_module(ring), 0)
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn term(&self, i: i64) -> &FinModule {
        if i < self.lo || i > self.hi() {
            &self.zero
        } else {
            &self.terms[(i - self.lo) as usize]
        }
    }

    pub fn dim(&self, i: i64) -> usize {
        self.term(i).n()
    }

    /// `d^i: C^i → C^{i+1}`.
    pub fn diff(&self, i: i64) -> Mat {
        if i >= self.lo && i < self.hi() {
            self.diffs[(i - self.lo) as usize].clone()
        } else {
            Mat::zeros(self.dim(i + 1), self.dim(i))
        }
    }

    pub fn characteristic(&self) -> i64 {
        self.ring.characteristic
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.is_zero())
    }

    pub fn is_degreewise_projective(&self) -> bool {
        *self
            .projective
            .get_or_init(|| self.terms.iter().all(|t| t.is_projective()))
    }

    /// Degrees in which the complex has a nonzero term.
    pub fn support_degrees(&self) -> Option<(i64, i64)> {
        let nz: Vec<i64> = (self.lo..=self.hi()).filter(|&i| !self.term(i).is_zero()).collect();
        Some((*nz.first()?, *nz.last()?))
    }

    /// `H^i = ker d^i / im d^{i−1}`.
    pub fn homology(&self, i: i64) -> Subquotient {
        let t = self.term(i);
        let ker = t.kernel(self.term(i + 1), &self.diff(i));
        Subquotient::new(t, &ker.lift, &self.diff(i - 1))
    }

    pub fn homology_order(&self, i: i64) -> Order {
        self.homology(i).module.order()
    }

    pub fn is_acyclic_at(&self, i: i64) -> bool {
        let t = self.term(i);
        if t.is_zero() {
            return true;
        }
        let ker = t.kernel(self.term(i + 1), &self.diff(i)).module.order();
        let im = t.submodule(&self.diff(i - 1)).module.order();
        ker == im
    }

    pub fn is_acyclic(&self) -> bool {
        (self.lo..=self.hi()).all(|i| self.is_acyclic_at(i))
    }

    /// Union of the supports of all homology modules.
    pub fn homology_support(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for i in self.lo..=self.hi() {
            for k in self.homology(i).module.support() {
                if !out.contains(&k) {
                    out.push(k);
                }
            }
        }
        out.sort();
        out
    }

    pub fn direct_sum(a: &Complex, b: &Complex) -> Complex {
        if a.terms.is_empty() {
            return b.plain_copy();
        }
        if b.terms.is_empty() {
            return a.plain_copy();
        }
        let lo = a.lo.min(b.lo);
        let hi = a.hi().max(b.hi());
        let ring = &a.ring;
        let terms: Vec<FinModule> = (lo..=hi)
            .map(|i| FinModule::direct_sum(ring, &[a.term(i), b.term(i)]))
            .collect();
        let diffs = (lo..hi).map(|i| a.diff(i).block_diag(&b.diff(i))).collect();
        Self::new_unchecked(ring, lo, terms, diffs, None)
    }

    /// A copy without tensor structure or caches.
    pub fn plain_copy(&self) -> Complex {
        Self::new_unchecked(&self.ring, self.lo, self.terms.clone(), self.diffs.clone(), None)
    }

    /// The stupid truncation `σ_{≥ l}`.
    pub fn truncate_below(&self, l: i64) -> Complex {
        if l <= self.lo {
            return self.plain_copy();
        }
        if l > self.hi() {
            return Self::zero(&self.ring);
        }
        let k = (l - self.lo) as usize;
        Self::new_unchecked(&self.ring, l, self.terms[k..].to_vec(), self.diffs[k..].to_vec(), None)
    }
}

/// A degree-zero chain map; `comps[k]` is the component in degree `src.lo + k`.
#[derive(Clone)]
pub struct ChainMap {
    pub src: Arc<Complex>,
    pub tgt: Arc<Complex>,
    comps: Vec<Mat>,
}

impl std::fmt::Debug for ChainMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ChainMap({:?} -> {:?})", self.src, self.tgt)
    }
}

impl ChainMap {
    /// Verifies that each component is a module map and that the map
    /// commutes with the differentials.
    pub fn new(src: &Arc<Complex>, tgt: &Arc<Complex>, comps: Vec<Mat>) -> Result<ChainMap> {
        let f = Self::new_unchecked(src, tgt, comps);
        f.verify()?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(src: &Arc<Complex>, tgt: &Arc<Complex>, mut comps: Vec<Mat>) -> ChainMap {
        assert_eq!(comps.len(), src.terms.len());
        for (k, c) in comps.iter_mut().enumerate() {
            let i = src.lo + k as i64;
            assert_eq!((c.rows(), c.cols()), (tgt.dim(i), src.dim(i)), "component shape in degree {i}");
            c.reduce_rows(&tgt.term(i).moduli);
        }
        ChainMap {
            src: src.clone(),
            tgt: tgt.clone(),
            comps,
        }
    }

    /// Builds from a rule giving the component in each source degree.
    pub fn from_fn(src: &Arc<Complex>, tgt: &Arc<Complex>, f: impl Fn(i64) -> Mat) -> ChainMap {
        let comps = (src.lo..=src.hi()).map(f).collect();
        Self::new_unchecked(src, tgt, comps)
    }

    pub fn verify(&self) -> Result<()> {
        let (s, t) = (&self.src, &self.tgt);
        for i in s.lo..=s.hi() {
            t.term(i)
                .check_hom(s.term(i), &self.at(i))
                .map_err(|e| Error::NotAMorphism(format!("degree {i}: {e}")))?;
        }
        for i in (s.lo - 1)..=s.hi() {
            let n = s.characteristic();
            let lhs = t.diff(i).mul_mod(&self.at(i), n);
            let rhs = self.at(i + 1).mul_mod(&s.diff(i), n);
            if !cols_zero(t.term(i + 1), &lhs.add_mod(&rhs.scale_mod(-1, n), n)) {
                return Err(Error::NotAMorphism(format!("does not commute with d in degree {i}")));
            }
        }
        Ok(())
    }

    pub fn at(&self, i: i64) -> Mat {
        if i >= self.src.lo && i <= self.src.hi() {
            self.comps[(i - self.src.lo) as usize].clone()
        } else {
            Mat::zeros(self.tgt.dim(i), self.src.dim(i))
        }
    }

    pub fn identity(c: &Arc<Complex>) -> ChainMap {
        Self::from_fn(c, c, |i| c.term(i).identity_matrix())
    }

    pub fn zero(src: &Arc<Complex>, tgt: &Arc<Complex>) -> ChainMap {
        Self::from_fn(src, tgt, |i| Mat::zeros(tgt.dim(i), src.dim(i)))
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ChainMap) -> Result<ChainMap> {
        if !Arc::ptr_eq(&first.tgt, &self.src) && !same_shape(&first.tgt, &self.src) {
            return Err(Error::NotAMorphism("maps are not composable".into()));
        }
        let n = self.src.characteristic();
        Ok(Self::from_fn(&first.src, &self.tgt, |i| {
            self.at(i).mul_mod(&first.at(i), n)
        }))
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        let n = self.src.characteristic();
        Self::from_fn(&self.src, &self.tgt, |i| self.at(i).add_mod(&other.at(i), n))
    }

    pub fn scale(&self, s: i64) -> ChainMap {
        let n = self.src.characteristic();
        Self::from_fn(&self.src, &self.tgt, |i| self.at(i).scale_mod(s, n))
    }

    /// Componentwise equality of reduced matrices.
    pub fn strictly_equal(&self, other: &ChainMap) -> bool {
        let lo = self.src.lo.min(other.src.lo);
        let hi = self.src.hi().max(other.src.hi());
        (lo..=hi).all(|i| {
            let m = self.tgt.term(i);
            let n = self.src.characteristic();
            cols_zero(m, &self.at(i).add_mod(&other.at(i).scale_mod(-1, n), n))
        })
    }

    /// Mapping cone: `Cone^k = C^{k+1} ⊕ D^k`, `d(x, y) = (−dx, fx + dy)`.
    pub fn cone(&self) -> Complex {
        let (c, d) = (&self.src, &self.tgt);
        let ring = &c.ring;
        if c.terms.is_empty() {
            return d.plain_copy();
        }
        let (lo, hi) = if d.terms.is_empty() {
            (c.lo - 1, c.hi() - 1)
        } else {
            ((c.lo - 1).min(d.lo), (c.hi() - 1).max(d.hi()))
        };
        let n = c.characteristic();
        let terms: Vec<FinModule> = (lo..=hi)
            .map(|k| FinModule::direct_sum(ring, &[c.term(k + 1), d.term(k)]))
            .collect();
        let diffs = (lo..hi)
            .map(|k| {
                let (a1, b1) = (c.dim(k + 1), d.dim(k));
                let (a2, b2) = (c.dim(k + 2), d.dim(k + 1));
                let mut m = Mat::zeros(a2 + b2, a1 + b1);
                m.set_block(0, 0, &c.diff(k + 1).scale_mod(-1, n));
                m.set_block(a2, 0, &self.at(k + 1));
                m.set_block(a2, a1, &d.diff(k));
                let mut m = m;
                m.reduce_rows(&terms[(k + 1 - lo) as usize].moduli);
                m
            })
            .collect();
        Complex::new_unchecked(ring, lo, terms, diffs, None)
    }

    pub fn is_quasi_iso(&self) -> bool {
        self.cone().is_acyclic()
    }

    /// Cone acyclic in every degree `≥ l`.
    pub fn is_quasi_iso_from(&self, l: i64) -> bool {
        let cone = self.cone();
        (l.max(cone.lo)..=cone.hi()).all(|i| cone.is_acyclic_at(i))
    }

    /// Induced map on `H^i`.
    pub fn on_homology(&self, i: i64) -> (Subquotient, Subquotient, Mat) {
        let hs = self.src.homology(i);
        let ht = self.tgt.homology(i);
        let m = hs.induced(&ht, &self.at(i)).expect("chain maps preserve cycles");
        (hs, ht, m)
    }
}

fn cols_zero(m: &FinModule, a: &Mat) -> bool {
    a.columns().iter().all(|c| m.is_zero_vec(c))
}

fn same_shape(a: &Complex, b: &Complex) -> bool {
    a.lo == b.lo
        && a.terms.len() == b.terms.len()
        && a.terms.iter().zip(&b.terms).all(|(x, y)| x.moduli == y.moduli)
}

/// Map from a free module `S^k` sending generator `j` to `images[j]`.
pub fn free_map(ring: &FiniteRing, target: &FinModule, images: &[Vec<i64>]) -> Mat {
    let mut cols = Vec::with_capacity(images.len() * ring.dim());
    for x in images {
        for l in 0..ring.dim() {
            cols.push(target.apply(&target.action[l], x));
        }
    }
    Mat::from_columns(target.n(), &cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplication_by_two_on_z6() {
        let r = FiniteRing::build("Z/6").unwrap();
        let s = FinModule::ring_module(&r);
        let c = Complex::new(&r, 0, vec![s.clone(), s.clone()], vec![Mat::from_rows(1, 1, vec![2])]).unwrap();
        assert_eq!(c.homology_order(0).value(), Some(2));
        assert_eq!(c.homology_order(1).value(), Some(2));
        let c = Arc::new(c);
        assert!(ChainMap::identity(&c).is_quasi_iso());
    }

    #[test]
    fn exact_identity_complex() {
        let r = FiniteRing::build("Z/2").unwrap();
        let s = FinModule::ring_module(&r);
        let c = Complex::new(&r, 0, vec![s.clone(), s], vec![Mat::identity(1)]).unwrap();
        assert!(c.is_acyclic());
    }

    #[test]
    fn rejects_nonzero_square() {
        let r = FiniteRing::build("Z/4").unwrap();
        let s = FinModule::ring_module(&r);
        let one = Mat::identity(1);
        assert!(Complex::new(&r, 0, vec![s.clone(), s.clone(), s], vec![one.clone(), one]).is_err());
    }
}
