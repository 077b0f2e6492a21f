//! The torsion functor `Γ_I M = {m : I^t m = 0 for some t}`.
//!
//! Two computations are provided. The annihilator path builds the ascending
//! chain `(0 :_M I^t)` until it stabilizes; the support path keeps the
//! elements that vanish at every prime outside a stable set.

use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::exact::ideal::SATURATION_CAP;
use crate::exact::module::FinModule;
use crate::exact::polymod::VecModule;
use crate::exact::presentation::{FiniteModule, ModulePresentation, RingRef, Submodule};
use crate::exact::{FiniteRing, Ideal};
use crate::linalg::Mat;
use crate::support::StableSet;

/// An ideal of either backend.
#[derive(Clone, Debug)]
pub enum AnyIdeal {
    Poly(Ideal),
    Finite { ring: Arc<FiniteRing>, gens: Vec<usize> },
}

impl AnyIdeal {
    pub fn parse(ring: &RingRef, gens: &[&str]) -> Result<AnyIdeal> {
        match ring {
            RingRef::Poly(r) => Ok(AnyIdeal::Poly(Ideal::parse(r, gens)?)),
            RingRef::Finite(r) => Ok(AnyIdeal::Finite {
                ring: r.clone(),
                gens: gens.iter().map(|g| r.parse_element(g)).collect::<Result<_>>()?,
            }),
        }
    }

    pub fn sum(&self, other: &AnyIdeal) -> Result<AnyIdeal> {
        match (self, other) {
            (AnyIdeal::Poly(a), AnyIdeal::Poly(b)) => Ok(AnyIdeal::Poly(a.sum(b))),
            (AnyIdeal::Finite { ring, gens: a }, AnyIdeal::Finite { gens: b, .. }) => Ok(AnyIdeal::Finite {
                ring: ring.clone(),
                gens: a.iter().chain(b).copied().collect(),
            }),
            _ => Err(Error::BackendMismatch("ideals over different backends".into())),
        }
    }

    pub fn strings(&self) -> Vec<String> {
        match self {
            AnyIdeal::Poly(i) => i.gens.iter().map(|g| g.to_string()).collect(),
            AnyIdeal::Finite { ring, gens } => gens.iter().map(|&g| ring.name(g)).collect(),
        }
    }
}

/// The ascending chain `(0 :_M I^t)`, `t = 0, 1, …`, up to and including the
/// first repeated entry.
#[derive(Clone, Debug)]
pub struct TorsionChain {
    pub entries: Vec<Submodule>,
    /// `t*`: entries `t*` and `t* + 1` coincide.
    pub stable_index: usize,
}

impl TorsionChain {
    pub fn result(&self) -> &Submodule {
        &self.entries[self.stable_index]
    }
}

/// `(0 :_M I)` inside a finite module, relative to a submodule `k`:
/// `{m : g m ∈ K for every generator g}`.
fn colon_finite(m: &FinModule, gens: &[usize], k: &Mat) -> Mat {
    let q = m.quotient(k);
    let proj = q.coords_matrix(&m.identity_matrix()).expect("quotient of the whole module");
    let n = m.characteristic();
    let mut stacked = Mat::zeros(0, m.n());
    let mut moduli = Vec::new();
    for &g in gens {
        stacked = stacked.vcat(&proj.mul_mod(&m.action_of_element(g), n));
        moduli.extend(&q.module.moduli);
    }
    if gens.is_empty() {
        return m.identity_matrix();
    }
    let mut ker = crate::linalg::kernel_into(&stacked, &moduli, n);
    ker.reduce_rows(&m.moduli);
    ker
}

fn gamma_finite_chain(gens: &[usize], m: &FiniteModule) -> Result<TorsionChain> {
    let module = &m.module;
    let mut k = Mat::zeros(module.n(), 0);
    let mut entries = vec![Submodule::finite(m, &k)];
    for t in 0..SATURATION_CAP {
        let next = colon_finite(module, gens, &k);
        let sub = Submodule::finite(m, &next);
        if sub.same_as(&entries[t])? {
            entries.push(sub);
            return Ok(TorsionChain { entries, stable_index: t });
        }
        entries.push(sub);
        k = next;
    }
    Err(Error::StabilizationCapExceeded(SATURATION_CAP))
}

fn gamma_poly_chain(i: &Ideal, ambient: &Arc<crate::exact::presentation::PolyModule>) -> Result<TorsionChain> {
    let chain = ambient.relations.saturation_chain(i)?;
    let mut entries: Vec<Submodule> = chain
        .into_iter()
        .map(|k| Submodule::Poly {
            ambient: ambient.clone(),
            sub: k,
        })
        .collect();
    let stable_index = entries.len() - 1;
    entries.push(entries[stable_index].clone());
    Ok(TorsionChain { entries, stable_index })
}

/// `Γ_I(M)` with its stabilization certificate.
pub fn gamma(i: &AnyIdeal, m: &ModulePresentation) -> Result<TorsionChain> {
    match (i, m) {
        (AnyIdeal::Poly(i), ModulePresentation::Poly(p)) => {
            if i.ring.vars != p.ring().vars || i.ring.field != p.ring().field {
                return Err(Error::RingMismatch("ideal and module over different rings".into()));
            }
            gamma_poly_chain(i, p)
        }
        (AnyIdeal::Finite { ring, gens }, ModulePresentation::Finite(f)) => {
            if ring.spec != f.module.ring.spec {
                return Err(Error::RingMismatch("ideal and module over different rings".into()));
            }
            gamma_finite_chain(gens, f)
        }
        _ => Err(Error::BackendMismatch("ideal and module over different backends".into())),
    }
}

/// `Γ_I(N)` for a submodule `N ⊆ M`, as a submodule of `M`.
///
/// Over a finite ring the submodule is treated as a module in its own right
/// and the result is pushed back along the inclusion. Over a polynomial ring
/// with `N = K/F` the result is `K ∩ (F : I^∞)`.
pub fn gamma_of_submodule(i: &AnyIdeal, n: &Submodule) -> Result<Submodule> {
    match (i, n) {
        (AnyIdeal::Finite { gens, .. }, Submodule::Finite { ambient, sq }) => {
            let inner = FiniteModule::plain(sq.module.clone());
            let chain = gamma_finite_chain(gens, &inner)?;
            let local = match chain.result() {
                Submodule::Finite { sq: g, .. } => g.lift.clone(),
                _ => unreachable!(),
            };
            let gens_amb = sq.lift.mul_mod(&local, ambient.module.characteristic());
            let mut g = gens_amb;
            g.reduce_rows(&ambient.module.moduli);
            Ok(Submodule::finite(ambient, &g))
        }
        (AnyIdeal::Poly(i), Submodule::Poly { ambient, sub }) => {
            let chain = ambient.relations.saturation_chain(i)?;
            let sat = chain.last().expect("nonempty chain");
            Ok(Submodule::Poly {
                ambient: ambient.clone(),
                sub: sub.intersection(sat),
            })
        }
        _ => Err(Error::BackendMismatch("ideal and submodule over different backends".into())),
    }
}

/// Support path: elements vanishing at every prime outside `z`, i.e. killed
/// by the local idempotent of each such prime.
pub fn gamma_by_support(z: &StableSet, m: &ModulePresentation) -> Result<Submodule> {
    let f = match m {
        ModulePresentation::Finite(f) => f,
        ModulePresentation::Poly(_) => {
            return Err(Error::UnsupportedBackend("support path needs a finite ring".into()))
        }
    };
    let (ring, primes) = match z {
        StableSet::Primes { ring, primes } => (ring, primes),
        StableSet::Closed(_) => return Err(Error::UnsupportedBackend("symbolic stable set".into())),
    };
    let module = &f.module;
    if ring.spec != module.ring.spec {
        return Err(Error::RingMismatch("stable set and module over different rings".into()));
    }
    let n = module.characteristic();
    let mut stacked = Mat::zeros(0, module.n());
    let mut moduli = Vec::new();
    for k in 0..ring.num_primes() {
        if primes.contains(&k) {
            continue;
        }
        stacked = stacked.vcat(&module.action_of_element(ring.primes()[k].idempotent));
        moduli.extend(&module.moduli);
    }
    if moduli.is_empty() {
        return Ok(m.whole());
    }
    let mut ker = crate::linalg::kernel_into(&stacked, &moduli, n);
    ker.reduce_rows(&module.moduli);
    Ok(Submodule::finite(f, &ker))
}

/// A finite chain standing in for a filtered system.
pub enum ModuleChain {
    /// `M_1 → M_2 → ⋯` over a finite ring; `maps[j]: modules[j] → modules[j+1]`.
    Finite { modules: Vec<FinModule>, maps: Vec<Mat> },
    /// An ascending chain of submodules of one ambient module.
    Inclusions(Vec<Submodule>),
}

/// Does `Γ_I` commute with the colimit of the chain?
///
/// For finite rings the colimit is built explicitly as `⊕ M_j` modulo
/// `x − f_j(x)`; the image of `⊕ Γ_I M_j` must equal `Γ_I` of the colimit and
/// the induced map from `colim Γ_I M_j` must be injective.
pub fn gamma_colimit_check(i: &AnyIdeal, chain: &ModuleChain) -> Result<bool> {
    match (i, chain) {
        (AnyIdeal::Finite { ring, gens }, ModuleChain::Finite { modules, maps }) => {
            if modules.is_empty() || maps.len() + 1 != modules.len() {
                return Err(invalid("a chain needs one map between consecutive modules"));
            }
            for (j, f) in maps.iter().enumerate() {
                modules[j + 1].check_hom(&modules[j], f)?;
            }
            let refs: Vec<&FinModule> = modules.iter().collect();
            let total = FinModule::direct_sum(ring, &refs);
            let off = offsets(modules);
            let rel = chain_relations(&total, &off, modules, maps);
            let colim = total.quotient(&rel);
            let proj = colim.coords_matrix(&total.identity_matrix()).expect("quotient");
            let colim_m = FiniteModule::plain(colim.module.clone());
            let gamma_colim = gamma_finite_chain(gens, &colim_m)?;
            // torsion of each stage, placed into the direct sum
            let n = total.characteristic();
            let mut tors_cols = Mat::zeros(total.n(), 0);
            let mut stage_tors = Vec::new();
            for (j, m) in modules.iter().enumerate() {
                let c = gamma_finite_chain(gens, &FiniteModule::plain(m.clone()))?;
                let g = match c.result() {
                    Submodule::Finite { sq, .. } => sq.lift.clone(),
                    _ => unreachable!(),
                };
                let mut placed = Mat::zeros(total.n(), g.cols());
                placed.set_block(off[j], 0, &g);
                tors_cols = tors_cols.hcat(&placed);
                stage_tors.push(g);
            }
            let image = proj.mul_mod(&tors_cols, n);
            let image_sub = Submodule::finite(&colim_m, &reduce(image, &colim_m.module.moduli));
            if !image_sub.same_as(gamma_colim.result())? {
                return Ok(false);
            }
            // colim Γ M_j computed on its own, then compared by order
            let tmods: Vec<FinModule> = stage_tors
                .iter()
                .zip(modules)
                .map(|(g, m)| m.submodule(g).module)
                .collect();
            let tmaps: Vec<Mat> = (0..maps.len())
                .map(|j| {
                    let src = modules[j].submodule(&stage_tors[j]);
                    let dst = modules[j + 1].submodule(&stage_tors[j + 1]);
                    src.induced(&dst, &maps[j]).expect("maps preserve torsion")
                })
                .collect();
            let trefs: Vec<&FinModule> = tmods.iter().collect();
            let ttotal = FinModule::direct_sum(ring, &trefs);
            let toff = offsets(&tmods);
            let trel = chain_relations(&ttotal, &toff, &tmods, &tmaps);
            let tcolim = ttotal.quotient(&trel);
            let image_order = match &image_sub {
                Submodule::Finite { sq, .. } => sq.module.order(),
                _ => unreachable!(),
            };
            Ok(tcolim.module.order() == image_order)
        }
        (_, ModuleChain::Inclusions(subs)) => {
            let last = subs.last().ok_or_else(|| invalid("empty chain"))?;
            for w in subs.windows(2) {
                if !w[0].is_subset(&w[1])? {
                    return Err(invalid("chain is not ascending"));
                }
            }
            // the colimit of an ascending chain is its union, the last member
            let rhs = gamma_of_submodule(i, last)?;
            let mut lhs = gamma_of_submodule(i, &subs[0])?;
            for s in &subs[1..] {
                lhs = sum_submodules(&lhs, &gamma_of_submodule(i, s)?)?;
            }
            lhs.same_as(&rhs)
        }
        _ => Err(Error::BackendMismatch("ideal and chain over different backends".into())),
    }
}

fn offsets(modules: &[FinModule]) -> Vec<usize> {
    let mut off = Vec::with_capacity(modules.len());
    let mut acc = 0;
    for m in modules {
        off.push(acc);
        acc += m.n();
    }
    off
}

/// Columns `ι_j(e_k) − ι_{j+1}(f_j e_k)` in the direct sum.
fn chain_relations(total: &FinModule, off: &[usize], modules: &[FinModule], maps: &[Mat]) -> Mat {
    let n = total.characteristic();
    let mut cols = Vec::new();
    for (j, f) in maps.iter().enumerate() {
        for k in 0..modules[j].n() {
            let mut v = vec![0i64; total.n()];
            v[off[j] + k] = 1;
            let img = f.column(k);
            for (r, x) in img.iter().enumerate() {
                v[off[j + 1] + r] = crate::linalg::modp(-x, n);
            }
            cols.push(v);
        }
    }
    Mat::from_columns(total.n(), &cols)
}

fn reduce(mut m: Mat, moduli: &[i64]) -> Mat {
    m.reduce_rows(moduli);
    m
}

pub fn sum_submodules(a: &Submodule, b: &Submodule) -> Result<Submodule> {
    match (a, b) {
        (Submodule::Poly { ambient, sub: x }, Submodule::Poly { sub: y, .. }) => Ok(Submodule::Poly {
            ambient: ambient.clone(),
            sub: VecModule::sum(x, y),
        }),
        (Submodule::Finite { ambient, sq: x }, Submodule::Finite { sq: y, .. }) => {
            Ok(Submodule::finite(ambient, &x.lift.hcat(&y.lift)))
        }
        _ => Err(Error::BackendMismatch("submodules over different backends".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::presentation::RingRef;

    #[test]
    fn gamma_examples() {
        let r = RingRef::parse("Q[x,y]").unwrap();
        let m = ModulePresentation::parse(&r, "quot xy").unwrap();
        let x = AnyIdeal::parse(&r, &["x"]).unwrap();
        let c = gamma(&x, &m).unwrap();
        assert_eq!(c.result().generator_strings(), vec!["y"]);
        let one = AnyIdeal::parse(&r, &["1"]).unwrap();
        assert!(gamma(&one, &m).unwrap().result().is_zero());

        let z6 = RingRef::parse("Z/6").unwrap();
        let s = ModulePresentation::parse(&z6, "self").unwrap();
        let two = AnyIdeal::parse(&z6, &["2"]).unwrap();
        let g = gamma(&two, &s).unwrap();
        assert_eq!(g.result().element_strings(100).unwrap(), vec!["0", "3"]);
    }

    #[test]
    fn support_path_matches() {
        let z6 = RingRef::parse("Z/6").unwrap();
        let s = ModulePresentation::parse(&z6, "self").unwrap();
        let model = crate::support::SpecModel::of(&z6);
        let z = StableSet::parse(&model, "{(2)}").unwrap();
        let g = gamma_by_support(&z, &s).unwrap();
        assert_eq!(g.element_strings(100).unwrap(), vec!["0", "3"]);
        assert!(gamma_by_support(&model.empty(), &s).unwrap().is_zero());
    }

    #[test]
    fn colimit_examples() {
        let z6 = match RingRef::parse("Z/6").unwrap() {
            RingRef::Finite(r) => r,
            _ => unreachable!(),
        };
        let a = FinModule::ring_quotient(&z6, &[2]).module;
        let s = FinModule::ring_module(&z6);
        // Z/2 → Z/6, 1 ↦ 3
        let f = Mat::from_rows(1, 1, vec![3]);
        let i = AnyIdeal::Finite { ring: z6.clone(), gens: vec![2] };
        let chain = ModuleChain::Finite { modules: vec![a, s], maps: vec![f] };
        assert!(gamma_colimit_check(&i, &chain).unwrap());

        let r = RingRef::parse("Q[x]").unwrap();
        let m = match ModulePresentation::parse(&r, "quot x^3").unwrap() {
            ModulePresentation::Poly(p) => p,
            _ => unreachable!(),
        };
        let rp = m.ring().clone();
        let x = AnyIdeal::parse(&r, &["x"]).unwrap();
        let subs = vec![
            Submodule::poly(&m, &[vec![rp.parse("x^2").unwrap()]]),
            Submodule::poly(&m, &[vec![rp.parse("x").unwrap()]]),
            Submodule::poly(&m, &[vec![rp.one()]]),
        ];
        assert!(gamma_colimit_check(&x, &ModuleChain::Inclusions(subs)).unwrap());
    }
}
