//! Finitely presented modules over either backend, and their submodules.

use std::sync::Arc;

use super::finite_ring::FiniteRing;
use super::module::{FinModule, Subquotient};
use super::parse::parse_poly_ring;
use super::poly::{PolyRing, Polynomial};
use super::polymod::{format_vector, Encoding, VecModule, Vector};
use crate::error::{invalid, Error, Result};
use crate::linalg::Mat;

/// Ring of either backend.
#[derive(Clone, Debug)]
pub enum RingRef {
    Poly(Arc<PolyRing>),
    Finite(Arc<FiniteRing>),
}

impl RingRef {
    /// Polynomial rings look like `Q[x,y]` or `F5[x]`; everything else is a
    /// finite ring description.
    pub fn parse(spec: &str) -> Result<RingRef> {
        let s = spec.trim();
        let poly_like = s.ends_with(']') && !s.contains('/') && !s.contains('×');
        if poly_like {
            Ok(RingRef::Poly(parse_poly_ring(s)?))
        } else {
            Ok(RingRef::Finite(FiniteRing::build(s)?))
        }
    }

    pub fn spec(&self) -> String {
        match self {
            RingRef::Poly(r) => r.spec(),
            RingRef::Finite(r) => r.spec.clone(),
        }
    }
}

/// `S^n / F` over a polynomial ring.
#[derive(Clone, Debug)]
pub struct PolyModule {
    pub enc: Encoding,
    pub relations: VecModule,
}

impl PolyModule {
    pub fn new(ring: &Arc<PolyRing>, rank: usize, relations: &[Vector]) -> PolyModule {
        let enc = Encoding::new(ring, rank);
        PolyModule {
            relations: VecModule::new(&enc, relations),
            enc,
        }
    }

    /// `S / I`.
    pub fn cyclic(ring: &Arc<PolyRing>, gens: &[Polynomial]) -> PolyModule {
        let rel: Vec<Vector> = gens.iter().map(|g| vec![g.clone()]).collect();
        Self::new(ring, 1, &rel)
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.enc.base
    }

    pub fn rank(&self) -> usize {
        self.enc.rank
    }

    /// `M ⊕ N` with block diagonal relations.
    pub fn direct_sum(&self, other: &PolyModule) -> PolyModule {
        let ring = self.ring().clone();
        let (a, b) = (self.rank(), other.rank());
        let mut rels = Vec::new();
        for v in self.relations.basis() {
            let mut w = v.clone();
            w.extend(std::iter::repeat_n(ring.zero(), b));
            rels.push(w);
        }
        for v in other.relations.basis() {
            let mut w: Vector = std::iter::repeat_n(ring.zero(), a).collect();
            w.extend(v);
            rels.push(w);
        }
        PolyModule::new(&ring, a + b, &rels)
    }

    /// The cyclic ideal `F` when `n = 1`.
    pub fn annihilator_if_cyclic(&self) -> Option<super::ideal::Ideal> {
        if self.rank() != 1 {
            return None;
        }
        let gens = self.relations.basis().into_iter().map(|v| v[0].clone()).collect();
        Some(super::ideal::Ideal::new(self.ring(), gens))
    }

    /// Relation ideals of each coordinate when the presentation is diagonal.
    pub fn diagonal_annihilators(&self) -> Option<Vec<super::ideal::Ideal>> {
        let n = self.rank();
        let mut per: Vec<Vec<Polynomial>> = vec![Vec::new(); n];
        for v in self.relations.basis() {
            let nz: Vec<usize> = (0..n).filter(|&i| !v[i].is_zero()).collect();
            if nz.len() != 1 {
                return None;
            }
            per[nz[0]].push(v[nz[0]].clone());
        }
        Some(
            per.into_iter()
                .map(|g| super::ideal::Ideal::new(self.ring(), g))
                .collect(),
        )
    }
}

/// A finite module with names for its elements: each summand is a quotient of
/// the ring, and elements print as tuples of ring elements.
#[derive(Clone, Debug)]
pub struct FiniteModule {
    pub module: Arc<FinModule>,
    /// `(offset, length, lift to ring coordinates)` per cyclic summand.
    summands: Vec<(usize, usize, Mat)>,
}

impl FiniteModule {
    pub fn plain(module: FinModule) -> FiniteModule {
        FiniteModule {
            module: Arc::new(module),
            summands: Vec::new(),
        }
    }

    /// `⊕_k S / I_k`, each ideal given by generators.
    pub fn cyclic_sum(ring: &Arc<FiniteRing>, ideals: &[Vec<usize>]) -> FiniteModule {
        let mut parts = Vec::new();
        let mut summands = Vec::new();
        let mut off = 0;
        for gens in ideals {
            let q = FinModule::ring_quotient(ring, gens);
            summands.push((off, q.module.n(), q.lift.clone()));
            off += q.module.n();
            parts.push(q.module);
        }
        let refs: Vec<&FinModule> = parts.iter().collect();
        FiniteModule {
            module: Arc::new(FinModule::direct_sum(ring, &refs)),
            summands,
        }
    }

    /// An ideal `I ⊆ S` viewed as a module, named by its elements in `S`.
    pub fn ideal(ring: &Arc<FiniteRing>, gens: &[usize]) -> FiniteModule {
        let s = FinModule::ring_module(ring);
        let vecs: Vec<Vec<i64>> = gens.iter().map(|&g| ring.coords(g)).collect();
        let sq = s.span(&vecs);
        FiniteModule {
            summands: vec![(0, sq.module.n(), sq.lift.clone())],
            module: Arc::new(sq.module),
        }
    }

    pub fn name(&self, v: &[i64]) -> String {
        let ring = &self.module.ring;
        if self.summands.is_empty() {
            return format!("{v:?}");
        }
        let names: Vec<String> = self
            .summands
            .iter()
            .map(|(off, len, lift)| {
                let part = &v[*off..off + len];
                let c = lift.apply_mod(part, ring.characteristic);
                ring.name(ring.index(&c))
            })
            .collect();
        if names.len() == 1 {
            names[0].clone()
        } else {
            format!("({})", names.join(","))
        }
    }
}

#[derive(Clone, Debug)]
pub enum ModulePresentation {
    Poly(Arc<PolyModule>),
    Finite(FiniteModule),
}

impl ModulePresentation {
    /// Parses a module description over a ring:
    /// `self`, `free n`, `quot g1,g2` (the quotient `S/(g1,g2)`), `ideal g1,g2`
    /// (finite rings only), with `;` separating direct summands.
    pub fn parse(ring: &RingRef, desc: &str) -> Result<ModulePresentation> {
        let pieces: Vec<&str> = desc.split(';').map(|s| s.trim()).collect();
        match ring {
            RingRef::Poly(r) => {
                let mut acc: Option<PolyModule> = None;
                for p in pieces {
                    let m = parse_poly_piece(r, p)?;
                    acc = Some(match acc {
                        None => m,
                        Some(a) => a.direct_sum(&m),
                    });
                }
                Ok(ModulePresentation::Poly(Arc::new(acc.expect("nonempty"))))
            }
            RingRef::Finite(r) => {
                if pieces.len() == 1 {
                    if let Some(rest) = pieces[0].strip_prefix("ideal") {
                        let gens = parse_elements(r, rest)?;
                        return Ok(ModulePresentation::Finite(FiniteModule::ideal(r, &gens)));
                    }
                }
                let mut ideals = Vec::new();
                for p in pieces {
                    ideals.extend(parse_finite_piece(r, p)?);
                }
                Ok(ModulePresentation::Finite(FiniteModule::cyclic_sum(r, &ideals)))
            }
        }
    }

    pub fn ring(&self) -> RingRef {
        match self {
            ModulePresentation::Poly(m) => RingRef::Poly(m.ring().clone()),
            ModulePresentation::Finite(m) => RingRef::Finite(m.module.ring.clone()),
        }
    }

    /// The whole module as a submodule of itself.
    pub fn whole(&self) -> Submodule {
        match self {
            ModulePresentation::Poly(m) => Submodule::Poly {
                ambient: m.clone(),
                sub: VecModule::full(&m.enc),
            },
            ModulePresentation::Finite(m) => {
                let id = m.module.identity_matrix();
                Submodule::Finite {
                    ambient: m.clone(),
                    sq: Arc::new(m.module.submodule(&id)),
                }
            }
        }
    }

    pub fn direct_sum(&self, other: &ModulePresentation) -> Result<ModulePresentation> {
        match (self, other) {
            (ModulePresentation::Poly(a), ModulePresentation::Poly(b)) => {
                Ok(ModulePresentation::Poly(Arc::new(a.direct_sum(b))))
            }
            (ModulePresentation::Finite(a), ModulePresentation::Finite(b)) => {
                let ring = a.module.ring.clone();
                let m = FinModule::direct_sum(&ring, &[&a.module, &b.module]);
                let mut summands = a.summands.clone();
                let off = a.module.n();
                summands.extend(b.summands.iter().map(|(o, l, lift)| (o + off, *l, lift.clone())));
                if a.summands.is_empty() || b.summands.is_empty() {
                    summands.clear();
                }
                Ok(ModulePresentation::Finite(FiniteModule {
                    module: Arc::new(m),
                    summands,
                }))
            }
            _ => Err(Error::BackendMismatch("direct sum across backends".into())),
        }
    }

    pub fn finite(&self) -> Result<&FiniteModule> {
        match self {
            ModulePresentation::Finite(m) => Ok(m),
            _ => Err(Error::UnsupportedBackend("finite-ring module required".into())),
        }
    }
}

fn parse_poly_piece(r: &Arc<PolyRing>, p: &str) -> Result<PolyModule> {
    if p == "self" {
        return Ok(PolyModule::cyclic(r, &[]));
    }
    if let Some(rest) = p.strip_prefix("free") {
        let n: usize = rest.trim().parse().map_err(|_| invalid(format!("bad rank in '{p}'")))?;
        if n == 0 {
            return Err(invalid("free module of rank 0; use quot 1"));
        }
        let mut acc = PolyModule::cyclic(r, &[]);
        for _ in 1..n {
            acc = acc.direct_sum(&PolyModule::cyclic(r, &[]));
        }
        return Ok(acc);
    }
    if let Some(rest) = p.strip_prefix("quot") {
        let gens = rest
            .split(',')
            .map(|g| r.parse(g.trim()))
            .collect::<Result<Vec<_>>>()?;
        return Ok(PolyModule::cyclic(r, &gens));
    }
    Err(invalid(format!("unknown module description '{p}'")))
}

fn parse_elements(r: &Arc<FiniteRing>, s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    split_top(s).iter().map(|g| r.parse_element(g)).collect()
}

fn split_top(s: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if c == ',' && depth == 0 {
            parts.push(cur.trim().to_string());
            cur.clear();
        } else {
            cur.push(c);
        }
    }
    parts.push(cur.trim().to_string());
    parts
}

fn parse_finite_piece(r: &Arc<FiniteRing>, p: &str) -> Result<Vec<Vec<usize>>> {
    if p == "self" {
        return Ok(vec![Vec::new()]);
    }
    if let Some(rest) = p.strip_prefix("free") {
        let n: usize = rest.trim().parse().map_err(|_| invalid(format!("bad rank in '{p}'")))?;
        return Ok(vec![Vec::new(); n]);
    }
    if let Some(rest) = p.strip_prefix("quot") {
        return Ok(vec![parse_elements(r, rest)?]);
    }
    Err(invalid(format!("unknown module description '{p}'")))
}

/// A submodule of a presented module.
#[derive(Clone, Debug)]
pub enum Submodule {
    /// `K / F` with `F ⊆ K ⊆ S^n`.
    Poly { ambient: Arc<PolyModule>, sub: VecModule },
    Finite { ambient: FiniteModule, sq: Arc<Subquotient> },
}

impl Submodule {
    /// The submodule generated over the ring by the columns of `gens`.
    pub fn finite(ambient: &FiniteModule, gens: &Mat) -> Submodule {
        Submodule::Finite {
            ambient: ambient.clone(),
            sq: Arc::new(ambient.module.span(&gens.columns())),
        }
    }

    pub fn poly(ambient: &Arc<PolyModule>, gens: &[Vector]) -> Submodule {
        let k = VecModule::new(&ambient.enc, gens).sum(&ambient.relations);
        Submodule::Poly {
            ambient: ambient.clone(),
            sub: k,
        }
    }

    /// Generators that are nonzero in the ambient module, printed canonically.
    pub fn generator_strings(&self) -> Vec<String> {
        match self {
            Submodule::Poly { ambient, sub } => sub
                .basis()
                .iter()
                .filter(|v| !ambient.relations.contains(v))
                .map(|v| format_vector(&ambient.relations.normal_form(v)))
                .collect(),
            Submodule::Finite { ambient, sq } => sq
                .generators()
                .iter()
                .filter(|v| !ambient.module.is_zero_vec(v))
                .map(|v| ambient.name(v))
                .collect(),
        }
    }

    /// All elements, for small finite submodules.
    pub fn element_strings(&self, limit: u64) -> Option<Vec<String>> {
        match self {
            Submodule::Finite { ambient, sq } => {
                let els = sq.module.elements(limit)?;
                let n = ambient.module.characteristic();
                let mut names: Vec<(Vec<i64>, String)> = els
                    .iter()
                    .map(|c| {
                        let v = ambient.module.reduce(&sq.lift.apply_mod(c, n));
                        (v.clone(), ambient.name(&v))
                    })
                    .collect();
                names.sort();
                Some(names.into_iter().map(|(_, s)| s).collect())
            }
            Submodule::Poly { .. } => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Submodule::Poly { ambient, sub } => sub.is_subset(&ambient.relations),
            Submodule::Finite { sq, .. } => sq.module.is_zero(),
        }
    }

    pub fn is_subset(&self, other: &Submodule) -> Result<bool> {
        match (self, other) {
            (Submodule::Poly { sub: a, .. }, Submodule::Poly { sub: b, .. }) => Ok(a.is_subset(b)),
            (Submodule::Finite { sq: a, .. }, Submodule::Finite { sq: b, .. }) => {
                Ok(a.generators().iter().all(|v| b.contains(v)))
            }
            _ => Err(Error::BackendMismatch("submodules from different backends".into())),
        }
    }

    pub fn same_as(&self, other: &Submodule) -> Result<bool> {
        Ok(self.is_subset(other)? && other.is_subset(self)?)
    }

    pub fn intersection(&self, other: &Submodule) -> Result<Submodule> {
        match (self, other) {
            (Submodule::Poly { ambient, sub: a }, Submodule::Poly { sub: b, .. }) => Ok(Submodule::Poly {
                ambient: ambient.clone(),
                sub: a.intersection(b),
            }),
            (Submodule::Finite { ambient, sq: a }, Submodule::Finite { sq: b, .. }) => {
                let gens = intersect_finite(&ambient.module, &a.lift, &b.lift);
                Ok(Submodule::finite(ambient, &gens))
            }
            _ => Err(Error::BackendMismatch("submodules from different backends".into())),
        }
    }

    pub fn contains_vector(&self, v: &[i64]) -> bool {
        match self {
            Submodule::Finite { sq, .. } => sq.contains(v),
            Submodule::Poly { .. } => false,
        }
    }

    pub fn contains_poly(&self, v: &[Polynomial]) -> bool {
        match self {
            Submodule::Poly { sub, .. } => sub.contains(v),
            Submodule::Finite { .. } => false,
        }
    }
}

/// Generators of `span(a) ∩ span(b)` inside `m`.
pub fn intersect_finite(m: &FinModule, a: &Mat, b: &Mat) -> Mat {
    let n = m.characteristic();
    let neg_b = b.scale_mod(-1, n);
    let joint = a.hcat(&neg_b);
    let ker = crate::linalg::kernel_into(&joint, &m.moduli, n);
    let coeffs = ker.block(0, 0, a.cols(), ker.cols());
    let mut out = a.mul_mod(&coeffs, n);
    out.reduce_rows(&m.moduli);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_descriptions() {
        let ring = RingRef::parse("Z/6").unwrap();
        let m = ModulePresentation::parse(&ring, "quot 2; self").unwrap();
        assert_eq!(m.finite().unwrap().module.order().value(), Some(12));
        let i = ModulePresentation::parse(&ring, "ideal 3").unwrap();
        let whole = i.whole();
        assert_eq!(whole.element_strings(100).unwrap(), vec!["0", "3"]);
    }

    #[test]
    fn poly_descriptions() {
        let ring = RingRef::parse("Q[x,y]").unwrap();
        let m = ModulePresentation::parse(&ring, "quot xy").unwrap();
        match m {
            ModulePresentation::Poly(p) => {
                assert_eq!(p.annihilator_if_cyclic().unwrap().gens[0].to_string(), "x*y")
            }
            _ => panic!("expected polynomial module"),
        }
    }

    #[test]
    fn finite_cokernel_matches_brute_force() {
        // coset count of 4Z/12 ⊂ Z/12 equals the order of the presented quotient
        let r = FiniteRing::build("Z/12").unwrap();
        let m = FiniteModule::cyclic_sum(&r, &[vec![4]]);
        let ideal = r.ideal_generated(&[4]);
        assert_eq!(m.module.order().value(), Some((r.size() / ideal.len()) as u64));
    }
}
