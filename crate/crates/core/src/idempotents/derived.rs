//! The derived category of a finite ring as a monoidal context, and the
//! correspondence between stable sets of primes and idempotent classes.

use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::finite_ring::max_ring_size;
use crate::exact::module::FinModule;
use crate::exact::{FiniteRing, RingMap};
use crate::homotopy::cech::koszul_stable;
use crate::homotopy::complex::{ChainMap, Complex};
use crate::homotopy::derived_hom::{DMor, DerivedHom};
use crate::homotopy::tensor::{
    associator, extend_complex, extend_map, extended_unit_iso, left_unitor, restrict_complex, right_unitor, symmetry,
    tensor, tensor_maps,
};
use crate::support::StableSet;

use super::{hom_pairs, is_idempotent, iota, leq, membership, MonoidalContext, Pair};

pub type DPair = Pair<Arc<Complex>, DMor>;

/// Largest Hom group listed in full by [`MonoidalContext::hom_set`].
pub const HOM_SET_LIMIT: u64 = 4096;

type TensorCache = Vec<(Arc<Complex>, Arc<Complex>, Arc<Complex>)>;

/// Bounded complexes of finite modules up to quasi-isomorphism. Tensor
/// products need one degreewise projective factor.
pub struct DerivedContext {
    pub ring: Arc<FiniteRing>,
    unit: Arc<Complex>,
    tensors: Mutex<TensorCache>,
}

fn strict(f: &DMor) -> Result<&ChainMap> {
    f.strict
        .as_ref()
        .ok_or_else(|| Error::NotImplemented("tensor of morphisms out of a non-projective complex".into()))
}

impl DerivedContext {
    pub fn new(ring: &Arc<FiniteRing>) -> Result<DerivedContext> {
        let bound = max_ring_size();
        if ring.size() as u64 > bound {
            return Err(Error::TooLarge {
                size: ring.size() as u64,
                bound,
            });
        }
        Ok(DerivedContext {
            ring: ring.clone(),
            unit: Arc::new(Complex::unit(ring)),
            tensors: Mutex::new(Vec::new()),
        })
    }

    pub fn unit_pair(&self) -> DPair {
        Pair {
            obj: self.unit.clone(),
            alpha: DMor::identity(&self.unit),
        }
    }

    pub fn zero_pair(&self) -> DPair {
        let z = Arc::new(Complex::zero(&self.ring));
        Pair {
            alpha: DMor::from_chain(ChainMap::zero(&z, &self.unit)),
            obj: z,
        }
    }

    /// `(K_∞(t), augmentation)`.
    pub fn cech_pair(&self, t: &[usize]) -> Result<DPair> {
        let (c, aug) = koszul_stable(&self.ring, t, &self.unit)?;
        Ok(Pair {
            obj: c.complex,
            alpha: DMor::from_chain(aug),
        })
    }

    pub fn object(&self, c: Complex) -> Result<Arc<Complex>> {
        if c.ring != self.ring {
            return Err(Error::RingMismatch(format!("{} vs {}", c.ring.spec, self.ring.spec)));
        }
        Ok(Arc::new(c))
    }

    pub fn module_object(&self, m: &FinModule) -> Result<Arc<Complex>> {
        self.object(Complex::concentrated(m, 0))
    }

    /// The Čech pair on `t = (f)` where `f` is the sum of the local
    /// idempotents off `Z`; its zero set is exactly `Z`.
    pub fn topology_to_idempotent(&self, z: &StableSet) -> Result<DPair> {
        let primes = z.prime_list()?;
        let comp: Vec<usize> = (0..self.ring.num_primes()).filter(|k| !primes.contains(k)).collect();
        self.cech_pair(&[self.ring.idempotent_of_primes(&comp)])
    }

    /// The three support computations of a pair, one list of primes each.
    pub fn support_routes(&self, p: &DPair) -> Result<SupportRoutes> {
        let mut residue = Vec::new();
        let mut open = Vec::new();
        for k in 0..self.ring.num_primes() {
            let e = self.module_object(&FinModule::residue_field(&self.ring, k))?;
            if !self.tensor(&p.obj, &e)?.is_acyclic() {
                residue.push(k);
            }
            if membership(self, p, &e)? {
                open.push(k);
            }
        }
        Ok(SupportRoutes {
            residue,
            homology: p.obj.homology_support(),
            open,
        })
    }

    /// `{p : A ⊗ k(p) ≄ 0}`, checked against the homology support and the
    /// primes where `α ⊗ 1_{k(p)}` is invertible.
    pub fn idempotent_support(&self, p: &DPair) -> Result<StableSet> {
        let r = self.support_routes(p)?;
        if r.residue != r.homology || r.residue != r.open {
            return Err(Error::InconsistentSupport(format!(
                "residue fields {:?}, homology {:?}, open primes {:?}",
                r.residue, r.homology, r.open
            )));
        }
        Ok(StableSet::primes(&self.ring, r.residue))
    }

    /// `B ≼ A`, compared with containment of supports.
    pub fn leq_checked(&self, b: &DPair, a: &DPair) -> Result<bool> {
        let direct = leq(self, b, a)?;
        let by_support = self.idempotent_support(b)?.is_subset(&self.idempotent_support(a)?)?;
        if direct != by_support {
            return Err(Error::InconsistentSupport(format!(
                "leq is {direct} but support containment is {by_support}"
            )));
        }
        Ok(direct)
    }

    /// `E ∈ D_A`, compared with containment of the homology support of `E`.
    pub fn membership_checked(&self, a: &DPair, e: &Arc<Complex>) -> Result<bool> {
        let direct = membership(self, a, e)?;
        let supp = self.idempotent_support(a)?;
        let by_support = e.homology_support().iter().all(|&k| supp.contains_prime(k));
        if direct != by_support {
            return Err(Error::InconsistentSupport(format!(
                "membership is {direct} but support containment is {by_support}"
            )));
        }
        Ok(direct)
    }

    /// One pair per subset of primes, with the order between them.
    pub fn classify(&self) -> Result<Classification> {
        let k = self.ring.num_primes();
        let mut classes = Vec::new();
        for mask in 0u32..(1 << k) {
            let z = StableSet::primes(&self.ring, (0..k).filter(|i| mask >> i & 1 == 1));
            let pair = self.topology_to_idempotent(&z)?;
            let idempotent = is_idempotent(self, &pair)?.idempotent;
            let support = self.idempotent_support(&pair)?;
            let round_trip = support.same_as(&z)?;
            classes.push(IdempotentClass {
                stable_set: z,
                pair,
                idempotent,
                round_trip,
            });
        }
        let mut le = vec![vec![false; classes.len()]; classes.len()];
        for i in 0..classes.len() {
            for j in 0..classes.len() {
                le[i][j] = self.leq_checked(&classes[i].pair, &classes[j].pair)?;
            }
        }
        Ok(Classification { classes, le })
    }

    fn cached_tensor(&self, a: &Arc<Complex>, b: &Arc<Complex>) -> Arc<Complex> {
        let mut cache = self.tensors.lock().expect("tensor cache");
        if let Some((_, _, t)) = cache.iter().find(|(x, y, _)| Arc::ptr_eq(x, a) && Arc::ptr_eq(y, b)) {
            return t.clone();
        }
        let t = tensor(a, b);
        cache.push((a.clone(), b.clone(), t.clone()));
        t
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportRoutes {
    pub residue: Vec<usize>,
    pub homology: Vec<usize>,
    pub open: Vec<usize>,
}

pub struct IdempotentClass {
    pub stable_set: StableSet,
    pub pair: DPair,
    pub idempotent: bool,
    /// The support of the pair is the stable set it was built from.
    pub round_trip: bool,
}

pub struct Classification {
    pub classes: Vec<IdempotentClass>,
    /// `le[i][j]`: class `i` ≼ class `j`.
    pub le: Vec<Vec<bool>>,
}

impl Classification {
    /// No two distinct classes are ≼ each other both ways.
    pub fn pairwise_distinct(&self) -> bool {
        let n = self.classes.len();
        (0..n).all(|i| (0..n).all(|j| i == j || !(self.le[i][j] && self.le[j][i])))
    }

    pub fn order_matches_supports(&self) -> Result<bool> {
        for (i, a) in self.classes.iter().enumerate() {
            for (j, b) in self.classes.iter().enumerate() {
                if self.le[i][j] != a.stable_set.is_subset(&b.stable_set)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

impl MonoidalContext for DerivedContext {
    type Obj = Arc<Complex>;
    type Mor = DMor;

    fn unit(&self) -> Arc<Complex> {
        self.unit.clone()
    }

    fn same_object(&self, a: &Arc<Complex>, b: &Arc<Complex>) -> bool {
        Arc::ptr_eq(a, b)
            || (a.ring == b.ring
                && a.lo == b.lo
                && a.terms.len() == b.terms.len()
                && a.terms.iter().zip(&b.terms).all(|(x, y)| x.moduli == y.moduli && x.action == y.action)
                && a.diffs == b.diffs)
    }

    fn tensor(&self, a: &Arc<Complex>, b: &Arc<Complex>) -> Result<Arc<Complex>> {
        if a.ring != self.ring || b.ring != self.ring {
            return Err(Error::RingMismatch("tensor factors over another ring".into()));
        }
        if !a.is_degreewise_projective() && !b.is_degreewise_projective() {
            return Err(Error::NotFlat);
        }
        Ok(self.cached_tensor(a, b))
    }

    fn tensor_mor(&self, f: &DMor, g: &DMor) -> Result<DMor> {
        let src = self.tensor(&f.src, &g.src)?;
        let tgt = self.tensor(&f.tgt, &g.tgt)?;
        Ok(DMor::from_chain(tensor_maps(strict(f)?, strict(g)?, &src, &tgt)?))
    }

    fn compose(&self, g: &DMor, f: &DMor) -> Result<DMor> {
        g.compose(f)
    }

    fn identity(&self, a: &Arc<Complex>) -> DMor {
        DMor::identity(a)
    }

    fn source(&self, f: &DMor) -> Arc<Complex> {
        f.src.clone()
    }

    fn target(&self, f: &DMor) -> Arc<Complex> {
        f.tgt.clone()
    }

    fn left_unitor(&self, a: &Arc<Complex>) -> Result<DMor> {
        Ok(DMor::from_chain(left_unitor(&self.tensor(&self.unit, a)?)?))
    }

    fn right_unitor(&self, a: &Arc<Complex>) -> Result<DMor> {
        Ok(DMor::from_chain(right_unitor(&self.tensor(a, &self.unit)?)?))
    }

    fn symmetry(&self, a: &Arc<Complex>, b: &Arc<Complex>) -> Result<DMor> {
        Ok(DMor::from_chain(symmetry(&self.tensor(a, b)?, &self.tensor(b, a)?)?))
    }

    fn associator(&self, a: &Arc<Complex>, b: &Arc<Complex>, c: &Arc<Complex>) -> Result<DMor> {
        let src = self.tensor(&self.tensor(a, b)?, c)?;
        let tgt = self.tensor(a, &self.tensor(b, c)?)?;
        Ok(DMor::from_chain(associator(&src, &tgt)?))
    }

    fn is_iso(&self, f: &DMor) -> Result<bool> {
        Ok(f.is_iso())
    }

    fn mor_eq(&self, f: &DMor, g: &DMor) -> Result<bool> {
        f.equals(g)
    }

    fn hom_set(&self, a: &Arc<Complex>, b: &Arc<Complex>) -> Result<Option<Vec<DMor>>> {
        let hom = DerivedHom::new(a, b)?;
        match hom.order() {
            Some(n) if n <= HOM_SET_LIMIT => {}
            _ => return Ok(None),
        }
        Ok(Some(hom.elements()?.iter().map(|c| hom.morphism(c)).collect()))
    }

    fn post_compose_bijectivity(&self, x: &Arc<Complex>, h: &DMor) -> Result<Option<(bool, bool)>> {
        let Some(hs) = &h.strict else {
            return Ok(None);
        };
        let dom = DerivedHom::new(x, &h.src)?;
        let cod = DerivedHom::new(x, &h.tgt)?;
        let m = dom.post_compose(hs, &cod)?;
        let (dm, cm) = (dom.h.module(), cod.h.module());
        let injective = dm.kernel(cm, &m).module.is_zero();
        let surjective = cm.image(&m).module.order() == cm.order();
        Ok(Some((injective, surjective)))
    }
}

/// The conditions equivalent to continuity of `ψ: S → T` for the stable
/// sets `Z_S ⊆ Spec S` and `Z_T ⊆ Spec T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContinuityReport {
    /// `B ≼ ψ*A` through a map of pairs.
    pub hom_pairs: bool,
    /// `α ⊗_ψ 1_B: ψ*A ⊗ B → B` is an isomorphism.
    pub extended_iso: bool,
    /// `A ⊗ ψ_*B → ψ_*B` is an isomorphism in `D(S)`.
    pub restricted_iso: bool,
    /// `ψ_*E ∈ D_A` for a family of `T`-objects supported in `Z_T`.
    pub pushforward_family: bool,
    /// Every prime of `Z_T` pulls back into `Z_S`.
    pub prime_pullback: bool,
    pub consistent: bool,
    pub witnesses: Vec<String>,
}

impl ContinuityReport {
    pub fn continuous(&self) -> bool {
        self.consistent && self.prime_pullback
    }
}

/// `ψ*A` with `ψ*α` followed by `T ⊗_S S ≅ T`.
pub fn extend_pair(psi: &RingMap, a: &DPair, t_ctx: &DerivedContext) -> Result<DPair> {
    let alpha = a
        .alpha
        .strict
        .as_ref()
        .ok_or_else(|| Error::NotImplemented("extension of a map out of a non-projective complex".into()))?;
    let (ea, ea_ext) = extend_complex(psi, &a.obj);
    let ea = Arc::new(ea);
    let (eu, eu_ext) = extend_complex(psi, &alpha.tgt);
    let eu = Arc::new(eu);
    let f = extend_map(psi, alpha, (&ea, &ea_ext), (&eu, &eu_ext))?;
    let iso = extended_unit_iso(psi, &eu, &eu_ext, &t_ctx.unit)?;
    Ok(Pair {
        alpha: DMor::from_chain(iso.compose(&f)?),
        obj: ea,
    })
}

pub fn continuity_check(psi: &RingMap, z_s: &StableSet, z_t: &StableSet) -> Result<ContinuityReport> {
    let s_ctx = DerivedContext::new(&psi.source)?;
    let t_ctx = DerivedContext::new(&psi.target)?;
    let a = s_ctx.topology_to_idempotent(z_s)?;
    let b = t_ctx.topology_to_idempotent(z_t)?;
    let ea = extend_pair(psi, &a, &t_ctx)?;
    let mut witnesses = Vec::new();

    let pairs = hom_pairs(&t_ctx, &b, &ea)?;
    if pairs.len() > 1 {
        witnesses.push(format!("{} maps of pairs B → ψ*A", pairs.len()));
    }
    let hom_pairs_ok = pairs.len() == 1;
    let extended_iso = t_ctx.is_iso(&iota(&t_ctx, &ea, &b.obj)?)?;
    let pushed_b = s_ctx.object(restrict_complex(psi, &b.obj))?;
    let restricted_iso = membership(&s_ctx, &a, &pushed_b)?;

    let zt = z_t.prime_list()?;
    let mut family = vec![("B".to_string(), pushed_b.clone())];
    for &q in zt {
        let k = FinModule::residue_field(&psi.target, q);
        family.push((
            format!("k({})", psi.target.prime_name(q)),
            s_ctx.object(restrict_complex(psi, &Complex::concentrated(&k, 0)))?,
        ));
    }
    let e = psi.target.idempotent_of_primes(zt);
    let et = FinModule::ring_module(&psi.target).scaled_submodule(e).module;
    family.push(("eT".into(), s_ctx.object(restrict_complex(psi, &Complex::concentrated(&et, 0)))?));
    let mut pushforward_family = true;
    for (name, obj) in &family {
        if !membership(&s_ctx, &a, obj)? {
            pushforward_family = false;
            let supp: Vec<String> = obj.homology_support().iter().map(|&k| psi.source.prime_name(k)).collect();
            witnesses.push(format!("ψ_*{name} has support {{{}}} outside D_A", supp.join(", ")));
        }
    }
    let zs = z_s.prime_list()?;
    let mut prime_pullback = true;
    for &q in zt {
        let p = psi.pullback_prime(q);
        if !zs.contains(&p) {
            prime_pullback = false;
            witnesses.push(format!(
                "ψ⁻¹({}) = {} is not in Z_S",
                psi.target.prime_name(q),
                psi.source.prime_name(p)
            ));
        }
    }
    let all = [hom_pairs_ok, extended_iso, restricted_iso, pushforward_family, prime_pullback];
    Ok(ContinuityReport {
        hom_pairs: hom_pairs_ok,
        extended_iso,
        restricted_iso,
        pushforward_family,
        prime_pullback,
        consistent: all.iter().all(|&x| x == all[0]),
        witnesses,
    })
}

/// Whether the maps `α: A → 𝒪` making `(A, α)` idempotent form one orbit
/// under `Aut(A)`; returns the number of such maps and the verdict.
pub fn orbit_check(ctx: &DerivedContext, a: &Arc<Complex>) -> Result<(usize, bool)> {
    let unit = ctx.unit();
    let maps = ctx
        .hom_set(a, &unit)?
        .ok_or(Error::TooLarge { size: u64::MAX, bound: HOM_SET_LIMIT })?;
    let mut idem = Vec::new();
    for alpha in maps {
        let p = Pair { obj: a.clone(), alpha };
        if is_idempotent(ctx, &p)?.idempotent {
            idem.push(p.alpha);
        }
    }
    let Some(first) = idem.first() else {
        return Ok((0, true));
    };
    let autos: Vec<DMor> = ctx
        .hom_set(a, a)?
        .ok_or(Error::TooLarge { size: u64::MAX, bound: HOM_SET_LIMIT })?
        .into_iter()
        .filter(|l| l.is_iso())
        .collect();
    let mut orbit = Vec::new();
    for l in &autos {
        orbit.push(ctx.compose(first, l)?);
    }
    for alpha in &idem {
        let mut hit = false;
        for o in &orbit {
            if ctx.mor_eq(alpha, o)? {
                hit = true;
                break;
            }
        }
        if !hit {
            return Ok((idem.len(), false));
        }
    }
    Ok((idem.len(), true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::idempotents::{coherence_violations, coreflection_check, tensor_pairs};

    fn z6() -> DerivedContext {
        DerivedContext::new(&FiniteRing::build("Z/6").unwrap()).unwrap()
    }

    fn prime(ctx: &DerivedContext, name: &str) -> usize {
        ctx.ring.parse_prime(name).unwrap()
    }

    #[test]
    fn cech_two_is_idempotent() {
        let ctx = z6();
        let a = ctx.cech_pair(&[2]).unwrap();
        let r = is_idempotent(&ctx, &a).unwrap();
        assert!(r.idempotent && r.symmetry_identity);
        assert_eq!(r.j_criterion, Some(true));
        assert!(is_idempotent(&ctx, &ctx.unit_pair()).unwrap().idempotent);
        let supp = ctx.idempotent_support(&a).unwrap();
        assert_eq!(supp.prime_list().unwrap(), &[prime(&ctx, "(2)")]);
    }

    #[test]
    fn fold_is_not_idempotent() {
        let ctx = DerivedContext::new(&FiniteRing::build("Z/2").unwrap()).unwrap();
        let s = FinModule::ring_module(&ctx.ring);
        let a = ctx.module_object(&FinModule::direct_sum(&ctx.ring, &[&s, &s])).unwrap();
        let fold = ChainMap::new(&a, &ctx.unit(), vec![crate::linalg::Mat::from_rows(1, 2, vec![1, 1])]).unwrap();
        let p = Pair { obj: a, alpha: DMor::from_chain(fold) };
        let r = is_idempotent(&ctx, &p).unwrap();
        assert!(!r.idempotent);
        assert_eq!(r.j_criterion, Some(false));
        let samples = vec![ctx.unit(), p.obj.clone()];
        assert!(!coreflection_check(&ctx, &p, &samples).unwrap().is_empty());
    }

    #[test]
    fn order_and_membership() {
        let ctx = z6();
        let two = ctx.topology_to_idempotent(&StableSet::primes(&ctx.ring, [prime(&ctx, "(2)")])).unwrap();
        let three = ctx.topology_to_idempotent(&StableSet::primes(&ctx.ring, [prime(&ctx, "(3)")])).unwrap();
        assert!(!ctx.leq_checked(&two, &three).unwrap());
        assert!(ctx.leq_checked(&two, &ctx.unit_pair()).unwrap());
        assert!(ctx.leq_checked(&ctx.zero_pair(), &two).unwrap());
        assert!(hom_pairs(&ctx, &two, &three).unwrap().is_empty());
        assert_eq!(hom_pairs(&ctx, &two, &two).unwrap().len(), 1);
        assert_eq!(hom_pairs(&ctx, &ctx.zero_pair(), &two).unwrap().len(), 1);
        let z2 = ctx.module_object(&FinModule::ring_quotient(&ctx.ring, &[2]).module).unwrap();
        let z3 = ctx.module_object(&FinModule::ring_quotient(&ctx.ring, &[3]).module).unwrap();
        assert!(ctx.membership_checked(&two, &z2).unwrap());
        assert!(!ctx.membership_checked(&two, &z3).unwrap());
        let meet = tensor_pairs(&ctx, &two, &three).unwrap();
        assert!(meet.obj.is_acyclic());
        let sq = tensor_pairs(&ctx, &two, &two).unwrap();
        assert!(ctx.leq_checked(&sq, &two).unwrap() && ctx.leq_checked(&two, &sq).unwrap());
        let samples = vec![ctx.unit(), z2, z3, three.obj.clone()];
        assert!(coreflection_check(&ctx, &two, &samples).unwrap().is_empty());
    }

    #[test]
    fn classification_counts() {
        let c = z6().classify().unwrap();
        assert_eq!(c.classes.len(), 4);
        assert!(c.pairwise_distinct() && c.order_matches_supports().unwrap());
        assert!(c.classes.iter().all(|k| k.idempotent && k.round_trip));
    }

    #[test]
    fn coherence_on_cech_objects() {
        let ctx = z6();
        let objs = vec![ctx.cech_pair(&[2]).unwrap().obj, ctx.unit()];
        assert!(coherence_violations(&ctx, &objs).unwrap().is_empty());
    }

    #[test]
    fn continuity_examples() {
        let s = FiniteRing::build("Z/6").unwrap();
        let t = FiniteRing::build("Z/3").unwrap();
        let psi = RingMap::enumerate(&s, &t).into_iter().next().unwrap();
        let zt = StableSet::primes(&t, [0]);
        let three = StableSet::primes(&s, [s.parse_prime("(3)").unwrap()]);
        let two = StableSet::primes(&s, [s.parse_prime("(2)").unwrap()]);
        let r = continuity_check(&psi, &three, &zt).unwrap();
        assert!(r.consistent && r.prime_pullback, "{r:?}");
        let r = continuity_check(&psi, &two, &zt).unwrap();
        assert!(r.consistent && !r.prime_pullback, "{r:?}");
        let id = RingMap::identity(&s);
        let r = continuity_check(&id, &two, &two).unwrap();
        assert!(r.consistent && r.prime_pullback);
    }

    #[test]
    fn single_orbit() {
        let ctx = z6();
        let a = ctx.cech_pair(&[2]).unwrap().obj;
        let (n, ok) = orbit_check(&ctx, &a).unwrap();
        assert!(n >= 1 && ok);
    }
}
