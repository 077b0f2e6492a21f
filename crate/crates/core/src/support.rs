//! Specialization-stable sets, systems of supports and ideal bases over the
//! spectrum of a finite ring or of a polynomial ring.
//!
//! On a finite ring every prime is maximal, so every subset of primes is
//! stable and the three formalisms are all described by explicit prime sets.
//! Over a polynomial ring only closed sets `Z(P)` are represented, carried by
//! an ideal and compared up to radical.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exact::presentation::{ModulePresentation, RingRef};
use crate::exact::{FiniteRing, Ideal, PolyRing, Polynomial, RingMap};

/// The space a support notion lives on.
#[derive(Clone, Debug)]
pub enum SpecModel {
    Finite(Arc<FiniteRing>),
    Symbolic(Arc<PolyRing>),
}

impl SpecModel {
    pub fn of(ring: &RingRef) -> SpecModel {
        match ring {
            RingRef::Finite(r) => SpecModel::Finite(r.clone()),
            RingRef::Poly(r) => SpecModel::Symbolic(r.clone()),
        }
    }

    pub fn spec(&self) -> String {
        match self {
            SpecModel::Finite(r) => r.spec.clone(),
            SpecModel::Symbolic(r) => r.spec(),
        }
    }

    fn same(&self, other: &SpecModel) -> Result<()> {
        if self.spec() == other.spec() {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!("{} vs {}", self.spec(), other.spec())))
        }
    }

    pub fn full(&self) -> StableSet {
        match self {
            SpecModel::Finite(r) => StableSet::primes(r, 0..r.num_primes()),
            SpecModel::Symbolic(r) => StableSet::Closed(Ideal::zero(r)),
        }
    }

    pub fn empty(&self) -> StableSet {
        match self {
            SpecModel::Finite(r) => StableSet::primes(r, Vec::new()),
            SpecModel::Symbolic(r) => StableSet::Closed(Ideal::unit(r)),
        }
    }
}

/// A specialization-stable subset of Spec.
#[derive(Clone, Debug)]
pub enum StableSet {
    /// Sorted prime indices of a finite ring.
    Primes { ring: Arc<FiniteRing>, primes: Vec<usize> },
    /// The closed set `Z(P)`.
    Closed(Ideal),
}

impl StableSet {
    pub fn primes(ring: &Arc<FiniteRing>, primes: impl IntoIterator<Item = usize>) -> StableSet {
        let set: BTreeSet<usize> = primes.into_iter().collect();
        StableSet::Primes {
            ring: ring.clone(),
            primes: set.into_iter().collect(),
        }
    }

    pub fn model(&self) -> SpecModel {
        match self {
            StableSet::Primes { ring, .. } => SpecModel::Finite(ring.clone()),
            StableSet::Closed(i) => SpecModel::Symbolic(i.ring.clone()),
        }
    }

    /// Zero set of an ideal of a finite ring.
    pub fn zero_set_finite(ring: &Arc<FiniteRing>, gens: &[usize]) -> StableSet {
        let members = ring.ideal_generated(gens);
        let primes = (0..ring.num_primes()).filter(|&k| {
            let p = &ring.primes()[k].members;
            members.iter().all(|x| p.binary_search(x).is_ok())
        });
        StableSet::primes(ring, primes)
    }

    pub fn prime_list(&self) -> Result<&[usize]> {
        match self {
            StableSet::Primes { primes, .. } => Ok(primes),
            StableSet::Closed(_) => Err(Error::UnsupportedBackend(
                "symbolic stable sets have no prime list".into(),
            )),
        }
    }

    /// An ideal whose zero set is this set. On a finite ring this is the
    /// principal ideal of the idempotent supported on the complement.
    pub fn representative_finite(&self) -> Result<Vec<usize>> {
        match self {
            StableSet::Primes { ring, primes } => {
                let comp: Vec<usize> = (0..ring.num_primes()).filter(|k| !primes.contains(k)).collect();
                let e = ring.idempotent_of_primes(&comp);
                Ok(ring.canonical_generators(&ring.ideal_generated(&[e])))
            }
            StableSet::Closed(_) => Err(Error::UnsupportedBackend("finite ring required".into())),
        }
    }

    pub fn contains_prime(&self, k: usize) -> bool {
        match self {
            StableSet::Primes { primes, .. } => primes.contains(&k),
            StableSet::Closed(_) => false,
        }
    }

    pub fn is_subset(&self, other: &StableSet) -> Result<bool> {
        match (self, other) {
            (StableSet::Primes { ring: a, primes: p }, StableSet::Primes { ring: b, primes: q }) => {
                same_ring(a, b)?;
                Ok(p.iter().all(|k| q.contains(k)))
            }
            // Z(P) ⊆ Z(Q) iff √P ⊇ Q
            (StableSet::Closed(p), StableSet::Closed(q)) => q.radical_contains(p),
            _ => Err(Error::BackendMismatch("stable sets over different models".into())),
        }
    }

    pub fn same_as(&self, other: &StableSet) -> Result<bool> {
        Ok(self.is_subset(other)? && other.is_subset(self)?)
    }

    pub fn intersect(&self, other: &StableSet) -> Result<StableSet> {
        match (self, other) {
            (StableSet::Primes { ring, primes: p }, StableSet::Primes { ring: b, primes: q }) => {
                same_ring(ring, b)?;
                Ok(StableSet::primes(ring, p.iter().copied().filter(|k| q.contains(k))))
            }
            (StableSet::Closed(p), StableSet::Closed(q)) => Ok(StableSet::Closed(p.sum(q).with_groebner_gens())),
            _ => Err(Error::BackendMismatch("stable sets over different models".into())),
        }
    }

    pub fn union(&self, other: &StableSet) -> Result<StableSet> {
        match (self, other) {
            (StableSet::Primes { ring, primes: p }, StableSet::Primes { ring: b, primes: q }) => {
                same_ring(ring, b)?;
                Ok(StableSet::primes(ring, p.iter().chain(q).copied()))
            }
            (StableSet::Closed(p), StableSet::Closed(q)) => Ok(StableSet::Closed(p.product(q))),
            _ => Err(Error::BackendMismatch("stable sets over different models".into())),
        }
    }

    pub fn to_json(&self) -> StableSetJson {
        match self {
            StableSet::Primes { ring, primes } => StableSetJson {
                model: ring.spec.clone(),
                kind: "primes".into(),
                data: primes.iter().map(|&k| ring.prime_name(k)).collect(),
            },
            StableSet::Closed(i) => StableSetJson {
                model: i.ring.spec(),
                kind: "ideal".into(),
                data: i.groebner().iter().map(|g| g.to_string()).collect(),
            },
        }
    }

    pub fn from_json(j: &StableSetJson) -> Result<StableSet> {
        let model = SpecModel::of(&RingRef::parse(&j.model)?);
        match (j.kind.as_str(), &model) {
            ("primes", SpecModel::Finite(r)) => {
                let ks = j.data.iter().map(|s| r.parse_prime(s)).collect::<Result<Vec<_>>>()?;
                Ok(StableSet::primes(r, ks))
            }
            ("ideal", SpecModel::Finite(r)) => {
                let gens = j.data.iter().map(|s| r.parse_element(s)).collect::<Result<Vec<_>>>()?;
                Ok(StableSet::zero_set_finite(r, &gens))
            }
            ("ideal", SpecModel::Symbolic(r)) => {
                let refs: Vec<&str> = j.data.iter().map(|s| s.as_str()).collect();
                Ok(StableSet::Closed(Ideal::parse(r, &refs)?))
            }
            ("primes", SpecModel::Symbolic(_)) => Err(invalid("prime lists need a finite ring")),
            (k, _) => Err(invalid(format!("unknown stable set kind '{k}'"))),
        }
    }

    /// Parses `{(2),(5)}`, `(2),(5)` or `all`/`none` over a finite ring, or an
    /// ideal generator list `x,y` (meaning `Z(x,y)`) over a polynomial ring.
    pub fn parse(model: &SpecModel, s: &str) -> Result<StableSet> {
        let s = s.trim();
        if s == "all" {
            return Ok(model.full());
        }
        if s == "none" || s == "{}" {
            return Ok(model.empty());
        }
        let inner = s.strip_prefix('{').and_then(|r| r.strip_suffix('}')).unwrap_or(s);
        match model {
            SpecModel::Finite(r) => {
                let mut ks = Vec::new();
                let mut depth = 0;
                let mut cur = String::new();
                for c in inner.chars() {
                    match c {
                        '(' => depth += 1,
                        ')' => depth -= 1,
                        _ => {}
                    }
                    if c == ',' && depth == 0 {
                        ks.push(r.parse_prime(&cur)?);
                        cur.clear();
                    } else {
                        cur.push(c);
                    }
                }
                if !cur.trim().is_empty() {
                    ks.push(r.parse_prime(&cur)?);
                }
                Ok(StableSet::primes(r, ks))
            }
            SpecModel::Symbolic(r) => {
                let refs: Vec<&str> = inner.split(',').map(|g| g.trim()).collect();
                Ok(StableSet::Closed(Ideal::parse(r, &refs)?))
            }
        }
    }
}

fn same_ring(a: &Arc<FiniteRing>, b: &Arc<FiniteRing>) -> Result<()> {
    if a.spec == b.spec {
        Ok(())
    } else {
        Err(Error::RingMismatch(format!("{} vs {}", a.spec, b.spec)))
    }
}

/// JSON form `{"model": <ring spec>, "kind": "ideal"|"primes", "data": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableSetJson {
    pub model: String,
    pub kind: String,
    pub data: Vec<String>,
}

/// A closed set: an explicit prime set or `Z(I)`.
#[derive(Clone, Debug)]
pub enum ClosedSet {
    Primes(Vec<usize>),
    Zero(Ideal),
}

/// A system of supports, stored as an antichain of closed sets; it consists
/// of all closed subsets of their union.
#[derive(Clone, Debug)]
pub struct SupportSystem {
    pub model: SpecModel,
    pub members: Vec<ClosedSet>,
}

impl SupportSystem {
    pub fn new(model: &SpecModel, members: Vec<ClosedSet>) -> Result<SupportSystem> {
        let mut out = SupportSystem {
            model: model.clone(),
            members: Vec::new(),
        };
        for m in members {
            match (&m, model) {
                (ClosedSet::Primes(_), SpecModel::Finite(_)) | (ClosedSet::Zero(_), SpecModel::Symbolic(_)) => {}
                _ => return Err(Error::BackendMismatch("closed set over a different model".into())),
            }
            out.members.push(m);
        }
        out.canonicalize()?;
        Ok(out)
    }

    fn as_stable(&self, c: &ClosedSet) -> StableSet {
        match (c, &self.model) {
            (ClosedSet::Primes(p), SpecModel::Finite(r)) => StableSet::primes(r, p.clone()),
            (ClosedSet::Zero(i), _) => StableSet::Closed(i.clone()),
            _ => unreachable!("checked in new"),
        }
    }

    /// Drops members contained in other members; empty members go unless the
    /// system would be empty, in which case it is `{∅}`.
    fn canonicalize(&mut self) -> Result<()> {
        let sets: Vec<StableSet> = self.members.iter().map(|c| self.as_stable(c)).collect();
        let mut keep = vec![true; sets.len()];
        for i in 0..sets.len() {
            for j in 0..sets.len() {
                if i == j || !keep[j] {
                    continue;
                }
                if sets[i].is_subset(&sets[j])? && (!sets[j].is_subset(&sets[i])? || j < i) {
                    keep[i] = false;
                    break;
                }
            }
        }
        let mut members: Vec<ClosedSet> = self
            .members
            .drain(..)
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(m, _)| m)
            .collect();
        if members.is_empty() {
            members.push(match &self.model {
                SpecModel::Finite(_) => ClosedSet::Primes(Vec::new()),
                SpecModel::Symbolic(r) => ClosedSet::Zero(Ideal::unit(r)),
            });
        }
        self.members = members;
        Ok(())
    }

    /// The union of all members.
    pub fn stable_set(&self) -> StableSet {
        let mut acc = self.model.empty();
        for m in &self.members {
            acc = acc.union(&self.as_stable(m)).expect("same model");
        }
        if let StableSet::Closed(i) = acc {
            return StableSet::Closed(i.with_groebner_gens());
        }
        acc
    }

    /// `Z(J) ∈ Φ`, i.e. `Z(J) ⊆ Y`.
    pub fn contains_closed(&self, j: &ClosedSet) -> Result<bool> {
        self.as_stable(j).is_subset(&self.stable_set())
    }

    pub fn is_subset(&self, other: &SupportSystem) -> Result<bool> {
        self.model.same(&other.model)?;
        self.stable_set().is_subset(&other.stable_set())
    }

    pub fn same_as(&self, other: &SupportSystem) -> Result<bool> {
        Ok(self.is_subset(other)? && other.is_subset(self)?)
    }
}

/// An ideal base `{J : √J ⊇ P}` with its single representing ideal `P`.
#[derive(Clone, Debug)]
pub enum SupportBase {
    /// Generators of `P` in a finite ring.
    Finite { ring: Arc<FiniteRing>, gens: Vec<usize> },
    Poly(Ideal),
}

impl SupportBase {
    pub fn model(&self) -> SpecModel {
        match self {
            SupportBase::Finite { ring, .. } => SpecModel::Finite(ring.clone()),
            SupportBase::Poly(i) => SpecModel::Symbolic(i.ring.clone()),
        }
    }

    /// The base generated by a family of ideals is the one of their product.
    pub fn generated_by(family: &[Ideal]) -> Result<SupportBase> {
        let first = family.first().ok_or_else(|| invalid("empty family"))?;
        let mut p = Ideal::unit(&first.ring);
        for i in family {
            p = p.product(i);
        }
        Ok(SupportBase::Poly(p))
    }

    pub fn zero_set(&self) -> StableSet {
        match self {
            SupportBase::Finite { ring, gens } => StableSet::zero_set_finite(ring, gens),
            SupportBase::Poly(i) => StableSet::Closed(i.clone()),
        }
    }

    /// `J ∈ 𝓘` iff `√J ⊇ P`.
    pub fn contains(&self, j: &BaseElement) -> Result<bool> {
        match (self, j) {
            (SupportBase::Poly(p), BaseElement::Poly(j)) => p.radical_contains(j),
            (SupportBase::Finite { ring, .. }, BaseElement::Finite(j)) => {
                StableSet::zero_set_finite(ring, j).is_subset(&self.zero_set())
            }
            _ => Err(Error::BackendMismatch("ideal over a different model".into())),
        }
    }

    pub fn is_subset(&self, other: &SupportBase) -> Result<bool> {
        self.zero_set().is_subset(&other.zero_set())
    }

    pub fn same_as(&self, other: &SupportBase) -> Result<bool> {
        Ok(self.is_subset(other)? && other.is_subset(self)?)
    }

    pub fn representative_strings(&self) -> Vec<String> {
        match self {
            SupportBase::Finite { ring, gens } => gens.iter().map(|&g| ring.name(g)).collect(),
            SupportBase::Poly(i) => i.groebner().iter().map(|g| g.to_string()).collect(),
        }
    }
}

/// An ideal tested for membership in a base.
#[derive(Clone, Debug)]
pub enum BaseElement {
    Finite(Vec<usize>),
    Poly(Ideal),
}

pub fn base_to_sos(base: &SupportBase) -> SupportSystem {
    let member = match base {
        SupportBase::Finite { ring, gens } => match StableSet::zero_set_finite(ring, gens) {
            StableSet::Primes { primes, .. } => ClosedSet::Primes(primes),
            _ => unreachable!(),
        },
        SupportBase::Poly(p) => ClosedSet::Zero(p.with_groebner_gens()),
    };
    SupportSystem::new(&base.model(), vec![member]).expect("single member")
}

pub fn sos_to_base(sos: &SupportSystem) -> SupportBase {
    match sos.stable_set() {
        s @ StableSet::Primes { .. } => {
            let ring = match &sos.model {
                SpecModel::Finite(r) => r.clone(),
                _ => unreachable!(),
            };
            SupportBase::Finite {
                gens: s.representative_finite().expect("finite"),
                ring,
            }
        }
        StableSet::Closed(p) => SupportBase::Poly(p),
    }
}

pub fn stable_set_of_sos(sos: &SupportSystem) -> StableSet {
    sos.stable_set()
}

pub fn stable_set_of_base(base: &SupportBase) -> StableSet {
    base.zero_set()
}

pub fn from_stable_set(z: &StableSet) -> SupportSystem {
    let member = match z {
        StableSet::Primes { primes, .. } => ClosedSet::Primes(primes.clone()),
        StableSet::Closed(p) => ClosedSet::Zero(p.clone()),
    };
    SupportSystem::new(&z.model(), vec![member]).expect("single member")
}

/// Base of the stable set: the ideal whose zero set it is.
pub fn base_of_stable_set(z: &StableSet) -> SupportBase {
    match z {
        StableSet::Primes { ring, .. } => SupportBase::Finite {
            ring: ring.clone(),
            gens: z.representative_finite().expect("finite"),
        },
        StableSet::Closed(p) => SupportBase::Poly(p.clone()),
    }
}

pub fn meet_bases(a: &SupportBase, b: &SupportBase) -> Result<SupportBase> {
    a.model().same(&b.model())?;
    Ok(match (a, b) {
        (SupportBase::Finite { ring, gens: g }, SupportBase::Finite { gens: h, .. }) => {
            let all: Vec<usize> = g.iter().chain(h).copied().collect();
            SupportBase::Finite {
                ring: ring.clone(),
                gens: ring.canonical_generators(&ring.ideal_generated(&all)),
            }
        }
        (SupportBase::Poly(p), SupportBase::Poly(q)) => SupportBase::Poly(p.sum(q).with_groebner_gens()),
        _ => return Err(Error::BackendMismatch("bases over different models".into())),
    })
}

/// Pairwise intersections of members; the union of those is `Y_a ∩ Y_b`.
pub fn meet_sos(a: &SupportSystem, b: &SupportSystem) -> Result<SupportSystem> {
    a.model.same(&b.model)?;
    let mut members = Vec::new();
    for x in &a.members {
        for y in &b.members {
            let s = a.as_stable(x).intersect(&b.as_stable(y))?;
            members.push(match s {
                StableSet::Primes { primes, .. } => ClosedSet::Primes(primes),
                StableSet::Closed(i) => ClosedSet::Zero(i),
            });
        }
    }
    SupportSystem::new(&a.model, members)
}

/// A polynomial ring map given by the images of the source variables.
#[derive(Clone, Debug)]
pub struct PolyMap {
    pub source: Arc<PolyRing>,
    pub target: Arc<PolyRing>,
    pub images: Vec<Polynomial>,
}

impl PolyMap {
    pub fn new(source: &Arc<PolyRing>, target: &Arc<PolyRing>, images: Vec<Polynomial>) -> Result<PolyMap> {
        if images.len() != source.nvars() {
            return Err(invalid("one image per source variable is required"));
        }
        if source.field != target.field {
            return Err(Error::NotAHomomorphism("coefficient fields differ".into()));
        }
        if images.iter().any(|p| p.ring.vars != target.vars) {
            return Err(Error::NotAHomomorphism("image outside the target ring".into()));
        }
        Ok(PolyMap {
            source: source.clone(),
            target: target.clone(),
            images,
        })
    }

    /// The inclusion `k[x_1..x_m] → k[x_1..x_m, …]` matching variable names.
    pub fn inclusion(source: &Arc<PolyRing>, target: &Arc<PolyRing>) -> Result<PolyMap> {
        let images = source
            .vars
            .iter()
            .map(|v| {
                target
                    .var_index(v)
                    .map(|i| target.var(i))
                    .ok_or_else(|| invalid(format!("variable {v} missing from target")))
            })
            .collect::<Result<Vec<_>>>()?;
        PolyMap::new(source, target, images)
    }

    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        p.substitute(&self.images, &self.target)
    }

    pub fn compose(&self, first: &PolyMap) -> Result<PolyMap> {
        let images = first.images.iter().map(|p| self.apply(p)).collect();
        PolyMap::new(&first.source, &self.target, images)
    }

    /// The extended ideal `ψ(I)·T`.
    pub fn extend(&self, i: &Ideal) -> Ideal {
        Ideal::new(&self.target, i.gens.iter().map(|g| self.apply(g)).collect())
    }
}

/// Ring map of either backend.
#[derive(Clone, Debug)]
pub enum AnyRingMap {
    Finite(RingMap),
    Poly(PolyMap),
}

/// Inverse image of a stable set: `(Spec ψ)^{-1}(Z)`.
pub fn inverse_image_stable(psi: &AnyRingMap, z: &StableSet) -> Result<StableSet> {
    match (psi, z) {
        (AnyRingMap::Finite(f), StableSet::Primes { ring, primes }) => {
            same_ring(&f.source, ring)?;
            let t = &f.target;
            Ok(StableSet::primes(
                t,
                (0..t.num_primes()).filter(|&q| primes.contains(&f.pullback_prime(q))),
            ))
        }
        (AnyRingMap::Poly(f), StableSet::Closed(p)) => Ok(StableSet::Closed(f.extend(p))),
        _ => Err(Error::BackendMismatch("map and stable set over different models".into())),
    }
}

/// Base inverse image: the representative maps to its extension ideal.
pub fn inverse_image_base(psi: &AnyRingMap, base: &SupportBase) -> Result<SupportBase> {
    match (psi, base) {
        (AnyRingMap::Finite(f), SupportBase::Finite { ring, gens }) => {
            same_ring(&f.source, ring)?;
            let t = &f.target;
            let imgs: Vec<usize> = gens.iter().map(|&g| f.apply(g)).collect();
            Ok(SupportBase::Finite {
                ring: t.clone(),
                gens: t.canonical_generators(&t.ideal_generated(&imgs)),
            })
        }
        (AnyRingMap::Poly(f), SupportBase::Poly(p)) => Ok(SupportBase::Poly(f.extend(p))),
        _ => Err(Error::BackendMismatch("map and base over different models".into())),
    }
}

/// Members map to their preimage closed sets.
pub fn inverse_image_sos(psi: &AnyRingMap, sos: &SupportSystem) -> Result<SupportSystem> {
    let (model, members) = match psi {
        AnyRingMap::Finite(f) => (SpecModel::Finite(f.target.clone()), &sos.members),
        AnyRingMap::Poly(f) => (SpecModel::Symbolic(f.target.clone()), &sos.members),
    };
    let mut out = Vec::new();
    for m in members {
        let z = inverse_image_stable(psi, &sos.as_stable(m))?;
        out.push(match z {
            StableSet::Primes { primes, .. } => ClosedSet::Primes(primes),
            StableSet::Closed(i) => ClosedSet::Zero(i),
        });
    }
    SupportSystem::new(&model, out)
}

/// Support of a module: every listed prime where the localization is nonzero
/// (finite rings), or `Z(F)` for a cyclic polynomial module `S/F`.
pub fn support_module(m: &ModulePresentation) -> Result<StableSet> {
    match m {
        ModulePresentation::Finite(f) => Ok(StableSet::primes(&f.module.ring, f.module.support())),
        ModulePresentation::Poly(p) => match p.diagonal_annihilators() {
            // Supp ⊕ S/I_k = ∪ Z(I_k) = Z(∏ I_k)
            Some(anns) => {
                let mut acc = Ideal::unit(p.ring());
                for a in &anns {
                    acc = acc.product(a);
                }
                Ok(StableSet::Closed(acc))
            }
            None => Err(Error::NotImplemented(
                "support of a non-diagonal polynomial presentation".into(),
            )),
        },
    }
}

/// Given closed sets (prime subsets) whose intersection lies in `y`, returns
/// indices of a subfamily of size at most the number of primes whose
/// intersection already lies in `y`.
pub fn finite_subfamily(nprimes: usize, family: &[Vec<usize>], y: &[usize]) -> Option<Vec<usize>> {
    let mut cur: BTreeSet<usize> = (0..nprimes).collect();
    let mut chosen = Vec::new();
    let inside = |s: &BTreeSet<usize>| s.iter().all(|k| y.contains(k));
    for (i, f) in family.iter().enumerate() {
        if inside(&cur) {
            break;
        }
        let next: BTreeSet<usize> = cur.iter().copied().filter(|k| f.contains(k)).collect();
        if next.len() < cur.len() {
            chosen.push(i);
            cur = next;
        }
    }
    inside(&cur).then_some(chosen)
}

/// Bases and systems of supports on an affine noetherian scheme are
/// finitary; no flag is stored.
pub fn is_finitary<T>(_x: &T) -> bool {
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse::parse_poly_ring;

    #[test]
    fn finite_base_round_trip() {
        let r = FiniteRing::build("Z/6").unwrap();
        let base = SupportBase::Finite { ring: r.clone(), gens: vec![2] };
        let sos = base_to_sos(&base);
        let z = sos.stable_set();
        assert_eq!(z.prime_list().unwrap().len(), 1);
        assert_eq!(r.prime_name(z.prime_list().unwrap()[0]), "(2)");
        assert!(sos_to_base(&sos).same_as(&base).unwrap());
    }

    #[test]
    fn z30_representative() {
        let r = FiniteRing::build("Z/30").unwrap();
        let z = StableSet::parse(&SpecModel::Finite(r.clone()), "{(2),(5)}").unwrap();
        let rep = z.representative_finite().unwrap();
        assert_eq!(rep.iter().map(|&g| r.name(g)).collect::<Vec<_>>(), vec!["10"]);
    }

    #[test]
    fn symbolic_union_and_meet() {
        let r = parse_poly_ring("Q[x,y]").unwrap();
        let model = SpecModel::Symbolic(r.clone());
        let sos = SupportSystem::new(
            &model,
            vec![
                ClosedSet::Zero(Ideal::parse(&r, &["x"]).unwrap()),
                ClosedSet::Zero(Ideal::parse(&r, &["y"]).unwrap()),
            ],
        )
        .unwrap();
        let xy = StableSet::Closed(Ideal::parse(&r, &["x*y"]).unwrap());
        assert!(sos.stable_set().same_as(&xy).unwrap());
        let m = meet_bases(
            &SupportBase::Poly(Ideal::parse(&r, &["x"]).unwrap()),
            &SupportBase::Poly(Ideal::parse(&r, &["y"]).unwrap()),
        )
        .unwrap();
        assert!(m
            .zero_set()
            .same_as(&StableSet::Closed(Ideal::parse(&r, &["x", "y"]).unwrap()))
            .unwrap());
    }

    #[test]
    fn inverse_images() {
        let z6 = FiniteRing::build("Z/6").unwrap();
        let z3 = FiniteRing::build("Z/3").unwrap();
        let z2 = FiniteRing::build("Z/2").unwrap();
        let to3 = AnyRingMap::Finite(RingMap::parse(&z6, &z3, "1").unwrap());
        let z = StableSet::parse(&SpecModel::Finite(z6.clone()), "{(3)}").unwrap();
        let img = inverse_image_stable(&to3, &z).unwrap();
        assert_eq!(img.prime_list().unwrap(), &[0]);
        let to2 = AnyRingMap::Finite(RingMap::parse(&z6, &z2, "1").unwrap());
        let base = SupportBase::Finite { ring: z6.clone(), gens: vec![3] };
        let b2 = inverse_image_base(&to2, &base).unwrap();
        assert!(b2.zero_set().prime_list().unwrap().is_empty());
    }

    #[test]
    fn subfamily_witness() {
        let fam = vec![vec![0, 1, 2], vec![0, 1], vec![1, 2], vec![1]];
        let w = finite_subfamily(3, &fam, &[1]).unwrap();
        assert_eq!(w, vec![1, 2]);
    }
}
