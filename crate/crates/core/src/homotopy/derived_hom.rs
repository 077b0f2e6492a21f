//! Morphisms in the derived category as cohomology of Hom complexes out of a
//! free resolution, and `Ext` groups.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact::module::{FinModule, HomSpace, Subquotient};
use crate::linalg::{kernel_into, Mat};

use super::complex::{ChainMap, Complex};
use super::resolution::{resolve, Resolution};

/// Enumeration bound for Hom sets.
pub const HOM_LIMIT: u64 = 1 << 16;

struct HomBlock {
    i: i64,
    space: HomSpace,
    offset: usize,
}

/// `Hom^n(P, F) = Π_i Hom_Z(P^i, F^{i+n})` with the subgroup of module maps.
struct HomLevel {
    n: i64,
    blocks: Vec<HomBlock>,
    ambient: FinModule,
    linear: Mat,
}

impl HomLevel {
    fn new(p: &Complex, f: &Complex, n: i64) -> HomLevel {
        let ring = &p.ring;
        let mut blocks = Vec::new();
        let mut parts = Vec::new();
        let mut offset = 0;
        let mut linear_cols: Vec<Vec<i64>> = Vec::new();
        let mut pending: Vec<Mat> = Vec::new();
        for i in p.lo..=p.hi() {
            let (s, t) = (p.term(i), f.term(i + n));
            if s.is_zero() || t.is_zero() {
                continue;
            }
            let space = HomSpace::new(s, t);
            parts.push(space.as_module(t));
            pending.push(space.linear_maps(s, t));
            let dim = space.dim();
            blocks.push(HomBlock { i, space, offset });
            offset += dim;
        }
        for (blk, lin) in blocks.iter().zip(&pending) {
            for c in lin.columns() {
                let mut v = vec![0; offset];
                v[blk.offset..blk.offset + c.len()].copy_from_slice(&c);
                linear_cols.push(v);
            }
        }
        let refs: Vec<&FinModule> = parts.iter().collect();
        HomLevel {
            n,
            blocks,
            ambient: FinModule::direct_sum(ring, &refs),
            linear: Mat::from_columns(offset, &linear_cols),
        }
    }

    fn block(&self, i: i64) -> Option<&HomBlock> {
        self.blocks.iter().find(|b| b.i == i)
    }

    /// Coordinates of the family `φ_i: P^i → F^{i+n}`.
    fn coords_of(&self, phi: impl Fn(i64) -> Mat, f: &Complex) -> Vec<i64> {
        let mut v = vec![0; self.ambient.n()];
        for b in &self.blocks {
            let mut m = phi(b.i);
            m.reduce_rows(&f.term(b.i + self.n).moduli);
            let c = b.space.from_matrix(&m);
            v[b.offset..b.offset + c.len()].copy_from_slice(&c);
        }
        v
    }

    fn matrix_at(&self, v: &[i64], i: i64, p: &Complex, f: &Complex) -> Mat {
        match self.block(i) {
            Some(b) => {
                let mut m = b.space.to_matrix(&v[b.offset..b.offset + b.space.dim()]);
                m.reduce_rows(&f.term(i + self.n).moduli);
                m
            }
            None => Mat::zeros(f.dim(i + self.n), p.dim(i)),
        }
    }
}

/// `D φ = d_F φ − (−1)^n φ d_P` as a matrix between ambient coordinates.
fn differential(p: &Complex, f: &Complex, from: &HomLevel, to: &HomLevel) -> Mat {
    let n = from.n;
    let ch = p.characteristic();
    let sign = if n.rem_euclid(2) == 0 { -1 } else { 1 };
    let mut cols = Vec::with_capacity(from.ambient.n());
    for b in &from.blocks {
        for k in 0..b.space.dim() {
            let mut e = vec![0; b.space.dim()];
            e[k] = 1;
            let phi = b.space.to_matrix(&e);
            let col = to.coords_of(
                |i| {
                    let mut acc = Mat::zeros(f.dim(i + n + 1), p.dim(i));
                    if i == b.i {
                        acc = acc.add_mod(&f.diff(i + n).mul_mod(&phi, ch), ch);
                    }
                    if i == b.i - 1 {
                        acc = acc.add_mod(&phi.mul_mod(&p.diff(i), ch).scale_mod(sign, ch), ch);
                    }
                    acc
                },
                f,
            );
            cols.push(col);
        }
    }
    Mat::from_columns(to.ambient.n(), &cols)
}

/// `H^n Hom^•(P, F)` for a free complex `P`.
pub struct HomCohomology {
    pub p: Arc<Complex>,
    pub f: Arc<Complex>,
    level: HomLevel,
    pub sq: Subquotient,
}

impl HomCohomology {
    pub fn new(p: &Arc<Complex>, f: &Arc<Complex>, n: i64) -> HomCohomology {
        let ch = p.characteristic();
        let prev = HomLevel::new(p, f, n - 1);
        let level = HomLevel::new(p, f, n);
        let next = HomLevel::new(p, f, n + 1);
        let d0 = differential(p, f, &level, &next);
        let on_linear = d0.mul_mod(&level.linear, ch);
        let ker = kernel_into(&on_linear, &next.ambient.moduli, ch);
        let mut cycles = level.linear.mul_mod(&ker, ch);
        cycles.reduce_rows(&level.ambient.moduli);
        let mut bounds = differential(p, f, &prev, &level).mul_mod(&prev.linear, ch);
        bounds.reduce_rows(&level.ambient.moduli);
        let sq = Subquotient::new(&level.ambient, &cycles, &bounds);
        HomCohomology {
            p: p.clone(),
            f: f.clone(),
            level,
            sq,
        }
    }

    pub fn module(&self) -> &FinModule {
        &self.sq.module
    }

    /// The class of a degree-`n` cocycle given degreewise, or `None` if the
    /// family is not a cocycle.
    pub fn class_of(&self, phi: impl Fn(i64) -> Mat) -> Option<Vec<i64>> {
        let v = self.level.coords_of(phi, &self.f);
        self.sq.coords(&v)
    }

    /// A representative of the class with the given coordinates.
    pub fn representative(&self, coords: &[i64]) -> impl Fn(i64) -> Mat + '_ {
        let v = self
            .level
            .ambient
            .reduce(&self.sq.lift.apply_mod(coords, self.p.characteristic()));
        move |i| self.level.matrix_at(&v, i, &self.p, &self.f)
    }
}

/// `Hom_D(E, F) = H^0 Hom^•(P_E, F)`.
pub struct DerivedHom {
    pub src: Arc<Complex>,
    pub tgt: Arc<Complex>,
    pub res: Arc<Resolution>,
    pub h: HomCohomology,
}

impl DerivedHom {
    pub fn new(e: &Arc<Complex>, f: &Arc<Complex>) -> Result<DerivedHom> {
        if e.ring != f.ring {
            return Err(Error::RingMismatch(format!("{} vs {}", e.ring.spec, f.ring.spec)));
        }
        let res = resolve(e, f.lo - 1);
        let h = HomCohomology::new(&res.complex, f, 0);
        Ok(DerivedHom {
            src: e.clone(),
            tgt: f.clone(),
            res,
            h,
        })
    }

    pub fn order(&self) -> Option<u64> {
        self.h.module().order().value()
    }

    /// All classes, or `TooLarge` past the enumeration bound.
    pub fn elements(&self) -> Result<Vec<Vec<i64>>> {
        let m = self.h.module();
        m.elements(HOM_LIMIT).ok_or(Error::TooLarge {
            size: m.order().value().unwrap_or(u64::MAX),
            bound: HOM_LIMIT,
        })
    }

    pub fn morphism(&self, coords: &[i64]) -> DMor {
        let rep = self.h.representative(coords);
        let chain = ChainMap::from_fn(&self.res.complex, &self.tgt, rep);
        let strict = self.res.own.then(|| chain.clone());
        DMor {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            chain,
            strict,
        }
    }

    pub fn class_of(&self, f: &DMor) -> Result<Vec<i64>> {
        let chain = match &f.strict {
            Some(s) => s.compose(&self.res.map(&self.src))?,
            None => f.chain.clone(),
        };
        let p = &self.res.complex;
        self.h
            .class_of(|i| {
                let m = chain.at(i);
                if m.cols() == p.dim(i) {
                    m
                } else {
                    Mat::zeros(self.tgt.dim(i), p.dim(i))
                }
            })
            .ok_or_else(|| Error::NotAMorphism("representative is not a chain map".into()))
    }

    /// Matrix of `φ ↦ h ∘ φ` from this Hom group into `Hom_D(E, G)`.
    pub fn post_compose(&self, h: &ChainMap, other: &DerivedHom) -> Result<Mat> {
        let mut cols = Vec::new();
        let ch = self.src.characteristic();
        for k in 0..self.h.module().n() {
            let mut e = vec![0; self.h.module().n()];
            e[k] = 1;
            let phi = self.morphism(&e);
            let comp = h.compose(&phi.chain)?;
            let img = other.class_of(&DMor {
                src: self.src.clone(),
                tgt: other.tgt.clone(),
                chain: comp,
                strict: None,
            })?;
            cols.push(img);
        }
        let mut m = Mat::from_columns(other.h.module().n(), &cols);
        m.reduce(ch);
        m.reduce_rows(&other.h.module().moduli);
        Ok(m)
    }
}

/// A morphism in the derived category: a chain map out of the source's
/// resolution, plus an honest chain map when one is known.
#[derive(Clone)]
pub struct DMor {
    pub src: Arc<Complex>,
    pub tgt: Arc<Complex>,
    pub chain: ChainMap,
    pub strict: Option<ChainMap>,
}

impl std::fmt::Debug for DMor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DMor({:?} -> {:?}, strict={})", self.src, self.tgt, self.strict.is_some())
    }
}

impl DMor {
    pub fn from_chain(f: ChainMap) -> DMor {
        DMor {
            src: f.src.clone(),
            tgt: f.tgt.clone(),
            chain: f.clone(),
            strict: Some(f),
        }
    }

    pub fn identity(c: &Arc<Complex>) -> DMor {
        Self::from_chain(ChainMap::identity(c))
    }

    /// `self ∘ first`; the left factor must be an honest chain map.
    pub fn compose(&self, first: &DMor) -> Result<DMor> {
        let g = self.strict.as_ref().ok_or_else(|| {
            Error::NotImplemented("composition with a left factor out of a non-projective complex".into())
        })?;
        let chain = g.compose(&first.chain)?;
        let strict = match &first.strict {
            Some(f) => Some(g.compose(f)?),
            None => None,
        };
        Ok(DMor {
            src: first.src.clone(),
            tgt: self.tgt.clone(),
            chain,
            strict,
        })
    }

    pub fn is_iso(&self) -> bool {
        if let Some(s) = &self.strict {
            return s.is_quasi_iso();
        }
        let l = self.chain.src.lo;
        self.chain.is_quasi_iso_from(l)
            && (self.src.lo..=l).all(|j| self.src.is_acyclic_at(j))
    }

    pub fn equals(&self, other: &DMor) -> Result<bool> {
        if let (Some(a), Some(b)) = (&self.strict, &other.strict) {
            if a.strictly_equal(b) {
                return Ok(true);
            }
        }
        let hom = DerivedHom::new(&self.src, &self.tgt)?;
        Ok(hom.class_of(self)? == hom.class_of(other)?)
    }
}

/// `Ext^n(E, F) = H^n Hom^•(P_E, F)`.
pub fn ext(e: &Arc<Complex>, f: &Arc<Complex>, n: i64) -> Result<FinModule> {
    if e.ring != f.ring {
        return Err(Error::RingMismatch(format!("{} vs {}", e.ring.spec, f.ring.spec)));
    }
    let res = resolve(e, f.lo - n - 1);
    Ok(HomCohomology::new(&res.complex, f, n).module().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::FiniteRing;

    #[test]
    fn ext_of_residue_field_over_z4() {
        let r = FiniteRing::build("Z/4").unwrap();
        let k = Arc::new(Complex::concentrated(&FinModule::ring_quotient(&r, &[2]).module, 0));
        for n in 0..4 {
            assert_eq!(ext(&k, &k, n).unwrap().order().value(), Some(2), "Ext^{n}");
        }
        let s = Arc::new(Complex::unit(&r));
        assert_eq!(ext(&k, &s, 1).unwrap().order().value(), Some(1));
        assert_eq!(ext(&k, &s, 0).unwrap().order().value(), Some(2));
    }

    #[test]
    fn derived_hom_classes() {
        let r = FiniteRing::build("Z/6").unwrap();
        let s = Arc::new(Complex::unit(&r));
        let h = DerivedHom::new(&s, &s).unwrap();
        assert_eq!(h.order(), Some(6));
        let id = DMor::identity(&s);
        let c = h.class_of(&id).unwrap();
        assert_eq!(h.morphism(&c).chain.at(0), Mat::identity(1));
        assert!(id.is_iso());
    }
}
