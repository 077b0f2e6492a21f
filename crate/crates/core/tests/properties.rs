use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use torsor::exact::presentation::{FiniteModule, ModulePresentation, RingRef};
use torsor::exact::{FiniteRing, Ideal, PolyRing};
use torsor::homotopy::local_cohomology::{ext_local_cohomology, local_cohomology};
use torsor::idempotents::{is_idempotent, leq, DerivedContext};
use torsor::support::{from_stable_set, inverse_image_stable, meet_sos, AnyRingMap, StableSet};
use torsor::torsion::{gamma, gamma_of_submodule, AnyIdeal};

fn ring(spec: &str) -> Arc<FiniteRing> {
    FiniteRing::build(spec).unwrap()
}

fn z30() -> &'static Arc<FiniteRing> {
    static R: OnceLock<Arc<FiniteRing>> = OnceLock::new();
    R.get_or_init(|| ring("Z/30"))
}

fn z6_ctx() -> &'static DerivedContext {
    static C: OnceLock<DerivedContext> = OnceLock::new();
    C.get_or_init(|| DerivedContext::new(&ring("Z/6")).unwrap())
}

fn primes_of(r: &Arc<FiniteRing>, mask: u8) -> StableSet {
    StableSet::primes(r, (0..r.num_primes()).filter(|k| mask >> k & 1 == 1))
}

fn finite_ideal(r: &Arc<FiniteRing>, g: usize) -> AnyIdeal {
    AnyIdeal::Finite {
        ring: r.clone(),
        gens: vec![g],
    }
}

fn cyclic_sum(r: &Arc<FiniteRing>, anns: &[usize]) -> ModulePresentation {
    let ideals: Vec<Vec<usize>> = anns.iter().map(|&a| vec![a]).collect();
    ModulePresentation::Finite(FiniteModule::cyclic_sum(r, &ideals))
}

fn monomial() -> impl Strategy<Value = String> {
    (1i64..4, 0u32..3, 0u32..3).prop_map(|(c, a, b)| format!("{c}*x^{a}*y^{b}"))
}

fn polynomial() -> impl Strategy<Value = String> {
    prop::collection::vec(monomial(), 1..4).prop_map(|ms| ms.join(" + "))
}

fn qxy() -> Arc<PolyRing> {
    match RingRef::parse("Q[x,y]").unwrap() {
        RingRef::Poly(r) => r,
        RingRef::Finite(_) => unreachable!(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stable_set_meets_form_a_semilattice(a in 0u8..8, b in 0u8..8, c in 0u8..8) {
        let r = z30();
        let (x, y, z) = (primes_of(r, a), primes_of(r, b), primes_of(r, c));
        let xy = x.intersect(&y).unwrap();
        prop_assert!(xy.same_as(&y.intersect(&x).unwrap()).unwrap());
        prop_assert!(x.intersect(&x).unwrap().same_as(&x).unwrap());
        let left = xy.intersect(&z).unwrap();
        let right = x.intersect(&y.intersect(&z).unwrap()).unwrap();
        prop_assert!(left.same_as(&right).unwrap());
        prop_assert!(xy.is_subset(&x).unwrap() && xy.is_subset(&y).unwrap());
        let via_systems = meet_sos(&from_stable_set(&x), &from_stable_set(&y)).unwrap().stable_set();
        prop_assert!(via_systems.same_as(&xy).unwrap());
    }

    #[test]
    fn inverse_images_preserve_meets(a in 0u8..8, b in 0u8..8, map in 0usize..4) {
        let s = z30().clone();
        let t = ring("Z/6");
        let maps = torsor::exact::RingMap::enumerate(&s, &t);
        let psi = AnyRingMap::Finite(maps[map % maps.len()].clone());
        let (x, y) = (primes_of(&s, a), primes_of(&s, b));
        let lhs = inverse_image_stable(&psi, &x.intersect(&y).unwrap()).unwrap();
        let rhs = inverse_image_stable(&psi, &x).unwrap().intersect(&inverse_image_stable(&psi, &y).unwrap()).unwrap();
        prop_assert!(lhs.same_as(&rhs).unwrap());
    }

    #[test]
    fn gamma_is_idempotent(spec in prop::sample::select(vec!["Z/12", "Z/8", "Z/30"]), g in 0usize..30, anns in prop::collection::vec(0usize..30, 1..3)) {
        let r = ring(spec);
        let n = r.size();
        let anns: Vec<usize> = anns.into_iter().map(|a| a % n).collect();
        let i = finite_ideal(&r, g % n);
        let m = cyclic_sum(&r, &anns);
        let once = gamma(&i, &m).unwrap().result().clone();
        let twice = gamma_of_submodule(&i, &once).unwrap();
        prop_assert!(twice.same_as(&once).unwrap());
    }

    #[test]
    fn gamma_composes_over_sums(g in 0usize..12, h in 0usize..12, anns in prop::collection::vec(0usize..12, 1..3)) {
        let r = ring("Z/12");
        let (i, j) = (finite_ideal(&r, g), finite_ideal(&r, h));
        let m = cyclic_sum(&r, &anns);
        let inner = gamma(&j, &m).unwrap().result().clone();
        let composed = gamma_of_submodule(&i, &inner).unwrap();
        let direct = gamma(&i.sum(&j).unwrap(), &m).unwrap().result().clone();
        prop_assert!(composed.same_as(&direct).unwrap());
    }

    #[test]
    fn cech_and_ext_routes_agree(g in 0usize..12, anns in prop::collection::vec(0usize..12, 1..3), d in 0i64..3) {
        let r = ring("Z/12");
        let i = finite_ideal(&r, g);
        let m = cyclic_sum(&r, &anns);
        let a = local_cohomology(&i, &m, d, None).unwrap().profile();
        let b = ext_local_cohomology(&i, &m, d).unwrap().profile();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn normal_forms_are_canonical(f in polynomial(), g1 in polynomial(), g2 in polynomial()) {
        let r = qxy();
        let i = Ideal::parse(&r, &[&g1, &g2]).unwrap();
        let f = r.parse(&f).unwrap();
        let nf = i.normal_form(&f).unwrap();
        prop_assert_eq!(i.normal_form(&nf).unwrap(), nf.clone());
        let diff = Ideal::new(&r, vec![f.sub(&nf)]);
        prop_assert!(i.op("sum".parse().unwrap(), &diff).unwrap().same_as(&i));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn order_on_idempotents_is_a_preorder(a in 0u8..4, b in 0u8..4, c in 0u8..4) {
        let ctx = z6_ctx();
        let pair = |m| ctx.topology_to_idempotent(&primes_of(&ctx.ring, m)).unwrap();
        let (x, y, z) = (pair(a), pair(b), pair(c));
        prop_assert!(leq(ctx, &x, &x).unwrap());
        if leq(ctx, &x, &y).unwrap() && leq(ctx, &y, &z).unwrap() {
            prop_assert!(leq(ctx, &x, &z).unwrap());
        }
        prop_assert_eq!(leq(ctx, &x, &y).unwrap(), primes_of(&ctx.ring, a).is_subset(&primes_of(&ctx.ring, b)).unwrap());
    }

    #[test]
    fn separate_local_idempotents_give_the_same_class(mask in 0u8..4) {
        let ctx = z6_ctx();
        let z = primes_of(&ctx.ring, mask);
        let joined = ctx.topology_to_idempotent(&z).unwrap();
        let off: Vec<usize> = (0..ctx.ring.num_primes())
            .filter(|k| mask >> k & 1 == 0)
            .map(|k| ctx.ring.idempotent_of_primes(&[k]))
            .collect();
        let separate = ctx.cech_pair(&off).unwrap();
        prop_assert!(is_idempotent(ctx, &separate).unwrap().idempotent);
        prop_assert!(leq(ctx, &joined, &separate).unwrap());
        prop_assert!(leq(ctx, &separate, &joined).unwrap());
        prop_assert!(ctx.idempotent_support(&separate).unwrap().same_as(&z).unwrap());
    }
}
