//! The acceptance suite: each criterion is a sweep over generated or
//! exhaustive inputs compared against an independent computation.

use std::sync::Arc;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::exact::module::{FinModule, HomModule};
use crate::exact::parse::parse_poly_ring;
use crate::exact::presentation::{FiniteModule, ModulePresentation, PolyModule};
use crate::exact::{FiniteRing, Ideal, RingMap};
use crate::homotopy::cech::{cech_tensor_augmentation, derived_intersection, koszul_stable};
use crate::homotopy::complex::Complex;
use crate::homotopy::graded::{graded_local_cohomology, MonomialQuotient, Window};
use crate::homotopy::local_cohomology::{ext_local_cohomology, local_cohomology};
use crate::homotopy::profile::{isomorphic, InvariantProfile};
use crate::idempotents::derived::{continuity_check, DPair, DerivedContext};
use crate::idempotents::{coreflection_check, hom_pairs, is_idempotent, Pair};
use crate::linalg::Mat;
use crate::support::StableSet;
use crate::torsion::{gamma, gamma_colimit_check, gamma_of_submodule, AnyIdeal, ModuleChain};

/// Finite rings used by the sweeps.
pub const FLEET: [&str; 8] = ["Z/4", "Z/6", "Z/8", "Z/9", "Z/12", "Z/30", "F2[x]/(x^2)", "F2×F4"];

const DEFAULT_SEED: u64 = 0x7015;

/// Seed for generated corpora, from `TORSOR_SEED` when set.
pub fn seed() -> u64 {
    std::env::var("TORSOR_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub seconds: f64,
    pub bound_seconds: Option<f64>,
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let bound = self.bound_seconds.map(|b| format!(" (bound {b} s)")).unwrap_or_default();
        let mut s = format!(
            "[{verdict}] {:>2} {}: {} cases in {:.2} s{bound}",
            self.id, self.name, self.cases, self.seconds
        );
        if let Some(f) = self.failures.first() {
            s.push_str(&format!("; first failure: {f}"));
        }
        s
    }
}

/// Failures found by one sweep and the number of cases it checked.
#[derive(Default)]
struct Tally {
    cases: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn result(&mut self, r: Result<bool>, what: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.check(ok, what),
            Err(e) => {
                self.cases += 1;
                self.failures.push(format!("{}: {e}", what()));
            }
        }
    }
}

pub const NAMES: [&str; 11] = [
    "composition law",
    "idempotence of torsion",
    "Koszul and Ext routes agree",
    "graded local cohomology of the maximal ideal",
    "derived intersection",
    "idempotent axioms and coreflections",
    "classification bijection",
    "uniqueness of maps of pairs",
    "continuity coherence",
    "colimit and direct sum commutation",
    "membership criterion",
];

const BOUNDS: [Option<f64>; 11] = [
    Some(60.0),
    Some(60.0),
    Some(30.0),
    Some(5.0),
    Some(30.0),
    None,
    None,
    None,
    Some(120.0),
    None,
    Some(60.0),
];

pub fn run(id: u32) -> Outcome {
    let start = Instant::now();
    let mut t = Tally::default();
    let seed = seed();
    match id {
        1 => torsion_laws(&mut t, seed, false),
        2 => torsion_laws(&mut t, seed, true),
        3 => koszul_vs_ext(&mut t),
        4 => graded_maximal(&mut t),
        5 => intersections(&mut t, seed),
        6 => idempotent_axioms(&mut t),
        7 => classification(&mut t),
        8 => uniqueness(&mut t),
        9 => continuity(&mut t),
        10 => colimits(&mut t, seed),
        11 => membership_criterion(&mut t),
        _ => t.check(false, || format!("no criterion {id}")),
    }
    let seconds = start.elapsed().as_secs_f64();
    let idx = (id as usize).saturating_sub(1).min(10);
    let bound = BOUNDS[idx];
    if let Some(b) = bound {
        if seconds > b {
            t.failures.push(format!("took {seconds:.1} s, bound {b} s"));
        }
    }
    Outcome {
        id,
        name: NAMES[idx].to_string(),
        passed: t.failures.is_empty() && t.cases > 0,
        cases: t.cases,
        seconds,
        bound_seconds: bound,
        failures: t.failures,
    }
}

pub fn run_all() -> Vec<Outcome> {
    (1..=11).map(run).collect()
}

fn ring(spec: &str) -> Arc<FiniteRing> {
    FiniteRing::build(spec).expect("fleet rings build")
}

/// One generator for each distinct principal ideal, the zero ideal included.
pub fn principal_generators(r: &FiniteRing) -> Vec<usize> {
    let mut seen: Vec<Vec<usize>> = Vec::new();
    let mut out = Vec::new();
    for x in 0..r.size() {
        let id = r.ideal_generated(&[x]);
        if !seen.contains(&id) {
            seen.push(id);
            out.push(x);
        }
    }
    out
}

fn finite_ideal(r: &Arc<FiniteRing>, gens: &[usize]) -> AnyIdeal {
    AnyIdeal::Finite {
        ring: r.clone(),
        gens: gens.to_vec(),
    }
}

fn quotient(r: &Arc<FiniteRing>, summands: &[usize]) -> ModulePresentation {
    let ideals: Vec<Vec<usize>> = summands.iter().map(|&g| vec![g]).collect();
    ModulePresentation::Finite(FiniteModule::cyclic_sum(r, &ideals))
}

/// Cyclic modules `S/(g)` for every principal ideal and a few sums of two.
fn finite_modules(r: &Arc<FiniteRing>) -> Vec<(String, ModulePresentation)> {
    let gens = principal_generators(r);
    let mut out: Vec<(String, ModulePresentation)> =
        gens.iter().map(|&g| (format!("S/({})", r.name(g)), quotient(r, &[g]))).collect();
    for (i, &a) in gens.iter().enumerate() {
        for &b in &gens[i..] {
            out.push((format!("S/({}) ⊕ S/({})", r.name(a), r.name(b)), quotient(r, &[a, b])));
        }
    }
    out
}

fn monomial(vars: &[&str], exps: &[u32]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(exps)
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn random_exps(rng: &mut ChaCha8Rng, max_deg: u32, min_deg: u32) -> Vec<u32> {
    let d = rng.gen_range(min_deg..=max_deg);
    let a = rng.gen_range(0..=d);
    vec![a, d - a]
}

/// A monomial or binomial in `x, y` of degree at most `max_deg`.
fn random_poly(rng: &mut ChaCha8Rng, max_deg: u32) -> String {
    let vars = ["x", "y"];
    let m = monomial(&vars, &random_exps(rng, max_deg, 1));
    if rng.gen_bool(0.5) {
        return m;
    }
    let n = monomial(&vars, &random_exps(rng, max_deg, 0));
    if n == m {
        return m;
    }
    let sign = if rng.gen_bool(0.5) { "+" } else { "-" };
    format!("{m} {sign} {n}")
}

pub struct PolyCase {
    pub i: AnyIdeal,
    pub j: AnyIdeal,
    pub m: ModulePresentation,
    pub label: String,
}

pub fn poly_corpus(seed: u64, count: usize) -> Vec<PolyCase> {
    let r = parse_poly_ring("Q[x,y]").expect("ring");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let ideal = |rng: &mut ChaCha8Rng| {
        let k = rng.gen_range(1..=2);
        (0..k).map(|_| random_poly(rng, 3)).collect::<Vec<_>>()
    };
    for _ in 0..count {
        let ig = ideal(&mut rng);
        let jg = ideal(&mut rng);
        let k = rng.gen_range(1..=2);
        let mg: Vec<String> = (0..k).map(|_| random_poly(&mut rng, 4)).collect();
        let parse = |g: &[String]| -> Vec<_> { g.iter().map(|s| r.parse(s).expect("generated polynomial")).collect() };
        out.push(PolyCase {
            i: AnyIdeal::Poly(Ideal::new(&r, parse(&ig))),
            j: AnyIdeal::Poly(Ideal::new(&r, parse(&jg))),
            m: ModulePresentation::Poly(Arc::new(PolyModule::cyclic(&r, &parse(&mg)))),
            label: format!("I = ({}), J = ({}), M = S/({})", ig.join(", "), jg.join(", "), mg.join(", ")),
        });
    }
    out
}

fn finite_corpus() -> Vec<PolyCase> {
    let mut out = Vec::new();
    for spec in ["Z/6", "Z/12"] {
        let r = ring(spec);
        let gens = principal_generators(&r);
        for (mname, m) in finite_modules(&r) {
            for &a in &gens {
                for &b in &gens {
                    out.push(PolyCase {
                        i: finite_ideal(&r, &[a]),
                        j: finite_ideal(&r, &[b]),
                        m: m.clone(),
                        label: format!("{spec}: I = ({}), J = ({}), M = {mname}", r.name(a), r.name(b)),
                    });
                }
            }
        }
    }
    out
}

/// `Γ_I Γ_J = Γ_{I+J}`, or `Γ_I Γ_I = Γ_I` when `idempotence` is set.
fn torsion_laws(t: &mut Tally, seed: u64, idempotence: bool) {
    let mut corpus = poly_corpus(seed, 200);
    corpus.extend(finite_corpus());
    for c in &corpus {
        let r = (|| -> Result<bool> {
            if idempotence {
                let g = gamma(&c.i, &c.m)?;
                let gg = gamma_of_submodule(&c.i, g.result())?;
                gg.same_as(g.result())
            } else {
                let inner = gamma(&c.j, &c.m)?;
                let lhs = gamma_of_submodule(&c.i, inner.result())?;
                let rhs = gamma(&c.i.sum(&c.j)?, &c.m)?;
                lhs.same_as(rhs.result())
            }
        })();
        t.result(r, || c.label.clone());
    }
}

fn koszul_vs_ext(t: &mut Tally) {
    for spec in FLEET {
        let r = ring(spec);
        for g in principal_generators(&r) {
            let i = finite_ideal(&r, &[g]);
            for (mname, m) in finite_modules(&r).into_iter().take(8) {
                for d in 0..=1 {
                    let res = (|| -> Result<bool> {
                        let a = local_cohomology(&i, &m, d, None)?;
                        let b = ext_local_cohomology(&i, &m, d)?;
                        Ok(a.profile() == b.profile())
                    })();
                    t.result(res, || format!("{spec}: I = ({}), M = {mname}, H^{d}", r.name(g)));
                }
            }
        }
    }
}

fn graded_maximal(t: &mut Tally) {
    for (spec, vars) in [("Q[x]", vec!["x"]), ("Q[x,y]", vec!["x", "y"]), ("Q[x,y,z]", vec!["x", "y", "z"])] {
        let r = parse_poly_ring(spec).expect("ring");
        let n = vars.len();
        let m = MonomialQuotient::new(&r, &[]).expect("free module");
        let gens: Vec<_> = vars.iter().map(|v| r.parse(v).expect("variable")).collect();
        let window = Window::cube(n, -2, 0);
        let h = match graded_local_cohomology(&m, &gens, &window) {
            Ok(h) => h,
            Err(e) => {
                t.check(false, || format!("{spec}: {e}"));
                continue;
            }
        };
        for a in window.points() {
            for (i, hi) in h.iter().enumerate() {
                let got = hi.get(&a).copied().unwrap_or(0);
                let want = usize::from(i == n && a.iter().all(|&x| x <= -1));
                t.check(got == want, || format!("{spec}: dim H^{i} at {a:?} is {got}, expected {want}"));
            }
        }
    }
}

fn intersections(t: &mut Tally, seed: u64) {
    for spec in FLEET {
        let r = ring(spec);
        let s = FinModule::ring_module(&r);
        let gens = principal_generators(&r);
        for &a in &gens {
            for &b in &gens {
                let res = derived_intersection(&s, &[a], &[b]).map(|d| d.is_quasi_iso());
                t.result(res, || format!("{spec}: t = ({}), u = ({})", r.name(a), r.name(b)));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5);
    for _ in 0..50 {
        let spec = FLEET.choose(&mut rng).expect("fleet");
        let r = ring(spec);
        let pick = |rng: &mut ChaCha8Rng| rng.gen_range(0..r.size());
        let (a, b) = (pick(&mut rng), pick(&mut rng));
        let gens = principal_generators(&r);
        let g = *gens.choose(&mut rng).expect("nonempty");
        let m = FinModule::ring_quotient(&r, &[g]).module;
        let res = derived_intersection(&m, &[a], &[b]).map(|d| d.is_quasi_iso());
        t.result(res, || format!("{spec}: t = ({}), u = ({}), M = S/({})", r.name(a), r.name(b), r.name(g)));
    }
}

/// `(S ⊕ S, fold)` over `Z/2`.
pub fn fold_pair(ctx: &DerivedContext) -> Result<DPair> {
    use crate::homotopy::complex::ChainMap;
    use crate::homotopy::derived_hom::DMor;
    use crate::idempotents::MonoidalContext;
    let s = FinModule::ring_module(&ctx.ring);
    let a = ctx.module_object(&FinModule::direct_sum(&ctx.ring, &[&s, &s]))?;
    let fold = ChainMap::new(&a, &ctx.unit(), vec![Mat::from_rows(1, 2, vec![1, 1])])?;
    Ok(Pair {
        obj: a,
        alpha: DMor::from_chain(fold),
    })
}

fn idempotent_and_coreflection(ctx: &DerivedContext, p: &DPair, samples: &[Arc<Complex>]) -> Result<(bool, bool)> {
    let idem = is_idempotent(ctx, p)?.idempotent;
    let clean = coreflection_check(ctx, p, samples)?.is_empty();
    Ok((idem, clean))
}

fn idempotent_axioms(t: &mut Tally) {
    for spec in FLEET {
        let r = ring(spec);
        let ctx = match DerivedContext::new(&r) {
            Ok(c) => c,
            Err(e) => {
                t.check(false, || format!("{spec}: {e}"));
                continue;
            }
        };
        for g in principal_generators(&r) {
            let res = (|| -> Result<bool> {
                let p = ctx.cech_pair(&[g])?;
                let quot = ctx.module_object(&FinModule::ring_quotient(&r, &[g]).module)?;
                let samples = vec![crate::idempotents::MonoidalContext::unit(&ctx), quot, p.obj.clone()];
                let (idem, clean) = idempotent_and_coreflection(&ctx, &p, &samples)?;
                Ok(idem && clean)
            })();
            t.result(res, || format!("{spec}: Čech({})", r.name(g)));
        }
    }
    let res = (|| -> Result<bool> {
        let ctx = DerivedContext::new(&ring("Z/2"))?;
        let p = fold_pair(&ctx)?;
        let samples = vec![crate::idempotents::MonoidalContext::unit(&ctx), p.obj.clone()];
        let (idem, clean) = idempotent_and_coreflection(&ctx, &p, &samples)?;
        Ok(!idem && !clean)
    })();
    t.result(res, || "Z/2: (S ⊕ S, fold) should fail both checks".into());
}

fn classification(t: &mut Tally) {
    for (spec, expected) in [("Z/6", 4), ("Z/30", 8), ("Z/4", 2), ("F2", 2)] {
        let res = (|| -> Result<bool> {
            let c = DerivedContext::new(&ring(spec))?.classify()?;
            Ok(c.classes.len() == expected
                && c.pairwise_distinct()
                && c.order_matches_supports()?
                && c.classes.iter().all(|k| k.idempotent && k.round_trip))
        })();
        t.result(res, || format!("{spec}: expected {expected} distinct classes with matching order"));
    }
}

fn uniqueness(t: &mut Tally) {
    for spec in FLEET {
        let res = (|| -> Result<Vec<String>> {
            let ctx = DerivedContext::new(&ring(spec))?;
            let c = ctx.classify()?;
            let mut bad = Vec::new();
            for (i, b) in c.classes.iter().enumerate() {
                for (j, a) in c.classes.iter().enumerate() {
                    let n = hom_pairs(&ctx, &b.pair, &a.pair)?.len();
                    if n > 1 || (n == 1) != c.le[i][j] {
                        bad.push(format!("{spec}: {n} maps from class {i} to class {j}, leq = {}", c.le[i][j]));
                    }
                }
            }
            Ok(bad)
        })();
        match res {
            Ok(bad) => {
                let first = bad.first().cloned();
                t.check(bad.is_empty(), || first.unwrap_or_default());
            }
            Err(e) => t.check(false, || format!("{spec}: {e}")),
        }
    }
}

fn subsets(r: &Arc<FiniteRing>) -> Vec<StableSet> {
    let k = r.num_primes();
    (0u32..1 << k)
        .map(|m| StableSet::primes(r, (0..k).filter(|i| m >> i & 1 == 1)))
        .collect()
}

fn continuity(t: &mut Tally) {
    let rings: Vec<Arc<FiniteRing>> = ["Z/6", "Z/4", "Z/3", "Z/2", "F4"].iter().map(|s| ring(s)).collect();
    for s in &rings {
        for tr in &rings {
            for psi in RingMap::enumerate(s, tr) {
                for zs in subsets(s) {
                    for zt in subsets(tr) {
                        let res = continuity_check(&psi, &zs, &zt).map(|r| r.consistent);
                        t.result(res, || {
                            format!(
                                "{} → {} on {:?}: Z_S = {:?}, Z_T = {:?}",
                                s.spec,
                                tr.spec,
                                psi.basis_images(),
                                zs.prime_list().unwrap_or(&[]),
                                zt.prime_list().unwrap_or(&[])
                            )
                        });
                    }
                }
            }
        }
    }
}

fn colimits(t: &mut Tally, seed: u64) {
    use crate::exact::presentation::Submodule;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xC0);
    for k in 0..50 {
        let spec = FLEET.choose(&mut rng).expect("fleet");
        let r = ring(spec);
        let gens = principal_generators(&r);
        let g = *gens.choose(&mut rng).expect("nonempty");
        let i = finite_ideal(&r, &[g]);
        let len = rng.gen_range(2..=4);
        let res = if k % 2 == 0 {
            let base = match quotient(&r, &[*gens.choose(&mut rng).unwrap(), *gens.choose(&mut rng).unwrap()]) {
                ModulePresentation::Finite(f) => f.module.as_ref().clone(),
                _ => unreachable!(),
            };
            let maps: Vec<Mat> = (1..len).map(|_| base.action_of_element(rng.gen_range(0..r.size()))).collect();
            let chain = ModuleChain::Finite {
                modules: vec![base; len],
                maps,
            };
            gamma_colimit_check(&i, &chain)
        } else {
            let m = quotient(&r, &[0, *gens.choose(&mut rng).unwrap()]);
            let f = m.finite().expect("finite").clone();
            let mut cols: Vec<Vec<i64>> = Vec::new();
            let mut subs = Vec::new();
            for _ in 0..len {
                let v: Vec<i64> = f.module.moduli.iter().map(|&q| rng.gen_range(0..q)).collect();
                cols.push(v);
                subs.push(Submodule::finite(&f, &Mat::from_columns(f.module.n(), &cols)));
            }
            gamma_colimit_check(&i, &ModuleChain::Inclusions(subs))
        };
        t.result(res, || format!("{spec}: chain {k} along ({})", r.name(g)));
    }
    for spec in FLEET {
        let r = ring(spec);
        let mods: Vec<(String, ModulePresentation)> = finite_modules(&r).into_iter().take(4).collect();
        for g in principal_generators(&r) {
            let i = finite_ideal(&r, &[g]);
            for (an, a) in &mods {
                for (bn, b) in &mods {
                    for d in 0..=1 {
                        let res = (|| -> Result<bool> {
                            let sum = local_cohomology(&i, &a.direct_sum(b)?, d, None)?;
                            let ha = local_cohomology(&i, a, d, None)?;
                            let hb = local_cohomology(&i, b, d, None)?;
                            let (
                                crate::homotopy::local_cohomology::LocalCohomology::Finite { module: s, .. },
                                crate::homotopy::local_cohomology::LocalCohomology::Finite { module: x, .. },
                                crate::homotopy::local_cohomology::LocalCohomology::Finite { module: y, .. },
                            ) = (sum, ha, hb)
                            else {
                                return Ok(false);
                            };
                            let split = FinModule::direct_sum(&r, &[&x, &y]);
                            Ok(match isomorphic(&s, &split) {
                                Some(v) => v,
                                None => InvariantProfile::of(&s) == InvariantProfile::of(&split),
                            })
                        })();
                        t.result(res, || format!("{spec}: H^{d}_({}) of {an} ⊕ {bn}", r.name(g)));
                    }
                }
            }
        }
    }
}

/// Bounded complexes over `Z/6` with terms in `{0, Z/2, Z/3, Z/6}` in
/// degrees 0 and 1 and every differential.
pub fn z6_complexes(r: &Arc<FiniteRing>) -> Vec<Arc<Complex>> {
    let terms = [
        FinModule::zero(r),
        FinModule::ring_quotient(r, &[2]).module,
        FinModule::ring_quotient(r, &[3]).module,
        FinModule::ring_module(r),
    ];
    let mut out = Vec::new();
    for a in &terms {
        out.push(Arc::new(Complex::concentrated(a, 0)));
        for b in &terms {
            let hom = HomModule::new(a, b);
            for c in hom.module().elements(1 << 12).expect("small hom group") {
                let d = hom.matrix_of(&c);
                if let Ok(cx) = Complex::new(r, 0, vec![a.clone(), b.clone()], vec![d]) {
                    out.push(Arc::new(cx));
                }
            }
        }
    }
    out
}

fn membership_criterion(t: &mut Tally) {
    let r = ring("Z/6");
    let unit = Arc::new(Complex::unit(&r));
    let complexes = z6_complexes(&r);
    for g in 0..r.size() {
        let z = StableSet::zero_set_finite(&r, &[g]);
        let (c, aug) = match koszul_stable(&r, &[g], &unit) {
            Ok(x) => x,
            Err(e) => {
                t.check(false, || format!("t = {g}: {e}"));
                continue;
            }
        };
        for (k, e) in complexes.iter().enumerate() {
            let res = (|| -> Result<bool> {
                let contained = e.homology_support().iter().all(|&p| z.contains_prime(p));
                let (_, f) = cech_tensor_augmentation(&c.complex, &aug, e)?;
                Ok(contained == f.is_quasi_iso())
            })();
            t.result(res, || format!("t = ({}), complex {k}", r.name(g)));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn principal_ideals_of_z12() {
        assert_eq!(principal_generators(&ring("Z/12")).len(), 6);
    }

    #[test]
    fn corpus_is_reproducible() {
        let a: Vec<String> = poly_corpus(3, 5).into_iter().map(|c| c.label).collect();
        let b: Vec<String> = poly_corpus(3, 5).into_iter().map(|c| c.label).collect();
        assert_eq!(a, b);
    }
}
