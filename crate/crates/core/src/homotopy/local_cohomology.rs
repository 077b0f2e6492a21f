//! Local cohomology along two independent routes: the stable Koszul complex
//! and the colimit of `Ext(S/I^t, M)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::module::FinModule;
use crate::exact::presentation::ModulePresentation;
use crate::exact::FiniteRing;
use crate::torsion::AnyIdeal;

use super::cech::CechComplex;
use super::complex::Complex;
use super::derived_hom::ext;
use super::graded::{format_degree, graded_local_cohomology, MonomialQuotient, Window};
use super::profile::InvariantProfile;

#[derive(Clone, Debug)]
pub enum LocalCohomology {
    Finite { degree: i64, module: FinModule },
    Graded { degree: i64, dims: BTreeMap<Vec<i64>, usize> },
}

#[derive(Serialize)]
#[serde(untagged)]
pub enum LocalCohomologyJson {
    Finite {
        i: i64,
        invariant_factors: Vec<i64>,
        generator_actions: Vec<Vec<i64>>,
    },
    Graded {
        i: i64,
        dims: BTreeMap<String, usize>,
    },
}

impl LocalCohomology {
    pub fn profile(&self) -> Option<InvariantProfile> {
        match self {
            LocalCohomology::Finite { module, .. } => Some(InvariantProfile::of(module)),
            LocalCohomology::Graded { .. } => None,
        }
    }

    pub fn to_json(&self) -> LocalCohomologyJson {
        match self {
            LocalCohomology::Finite { degree, module } => {
                let p = InvariantProfile::of(module);
                LocalCohomologyJson::Finite {
                    i: *degree,
                    invariant_factors: p.invariant_factors,
                    generator_actions: p.generator_actions,
                }
            }
            LocalCohomology::Graded { degree, dims } => LocalCohomologyJson::Graded {
                i: *degree,
                dims: dims.iter().map(|(a, d)| (format_degree(a), *d)).collect(),
            },
        }
    }
}

fn finite_parts<'a>(i: &'a AnyIdeal, m: &'a ModulePresentation) -> Result<(&'a Arc<FiniteRing>, &'a [usize], &'a FinModule)> {
    let AnyIdeal::Finite { ring, gens } = i else {
        return Err(Error::BackendMismatch("finite module with a polynomial ideal".into()));
    };
    let fm = m.finite()?;
    if fm.module.ring != *ring {
        return Err(Error::RingMismatch("ideal and module live over different rings".into()));
    }
    Ok((ring, gens, &fm.module))
}

/// `H^i(Č(t) ⊗ M)`; polynomial modules need a window.
pub fn local_cohomology(
    i: &AnyIdeal,
    m: &ModulePresentation,
    degree: i64,
    window: Option<&Window>,
) -> Result<LocalCohomology> {
    match (i, m) {
        (AnyIdeal::Poly(ideal), ModulePresentation::Poly(pm)) => {
            let window = window.ok_or(Error::WindowRequired)?;
            if pm.rank() != 1 {
                return Err(Error::UnsupportedBackend("graded slices need a cyclic module".into()));
            }
            let ann = pm
                .annihilator_if_cyclic()
                .ok_or_else(|| Error::UnsupportedBackend("graded slices need a cyclic module".into()))?;
            let mq = MonomialQuotient::new(pm.ring(), &ann.gens)?;
            let t: Vec<_> = ideal.gens.iter().map(|g| g.reorder(pm.ring())).collect();
            let all = graded_local_cohomology(&mq, &t, window)?;
            let dims = if degree >= 0 && (degree as usize) < all.len() {
                all[degree as usize].clone()
            } else {
                BTreeMap::new()
            };
            Ok(LocalCohomology::Graded { degree, dims })
        }
        (AnyIdeal::Finite { .. }, ModulePresentation::Finite(_)) => {
            let (_, gens, module) = finite_parts(i, m)?;
            let c = CechComplex::new(module, gens);
            Ok(LocalCohomology::Finite {
                degree,
                module: c.complex.homology(degree).module,
            })
        }
        _ => Err(Error::BackendMismatch("ideal and module use different backends".into())),
    }
}

/// `I^t` for the first `t` with `I^t = I^{t+1}`, as canonical generators.
pub fn stable_power(ring: &FiniteRing, gens: &[usize]) -> (Vec<usize>, usize) {
    let base = ring.canonical_generators(&ring.ideal_generated(gens));
    let mut cur = ring.canonical_generators(&ring.ideal_generated(&[ring.one()]));
    let mut t = 0;
    loop {
        let mut next: Vec<usize> = Vec::new();
        for &a in &cur {
            for &b in &base {
                next.push(ring.mul(a, b));
            }
        }
        let next = ring.canonical_generators(&ring.ideal_generated(&next));
        if ring.ideal_generated(&next) == ring.ideal_generated(&cur) {
            return (cur, t);
        }
        cur = next;
        t += 1;
    }
}

/// `colim_t Ext^i(S/I^t, M)`; the system is constant from the stable power on.
pub fn ext_local_cohomology(i: &AnyIdeal, m: &ModulePresentation, degree: i64) -> Result<LocalCohomology> {
    if let AnyIdeal::Poly(_) = i {
        return Err(Error::UnsupportedBackend("the Ext route runs over finite rings".into()));
    }
    let (ring, gens, module) = finite_parts(i, m)?;
    let (power, _) = stable_power(ring, gens);
    let quotient = FinModule::ring_quotient(ring, &power).module;
    let e = Arc::new(Complex::concentrated(&quotient, 0));
    let f = Arc::new(Complex::concentrated(module, 0));
    Ok(LocalCohomology::Finite {
        degree,
        module: ext(&e, &f, degree)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::presentation::RingRef;

    fn both(ring: &str, ideal: &str, module: &str, degree: i64) -> (InvariantProfile, InvariantProfile) {
        let r = RingRef::parse(ring).unwrap();
        let i = AnyIdeal::parse(&r, &[ideal]).unwrap();
        let m = ModulePresentation::parse(&r, module).unwrap();
        let a = local_cohomology(&i, &m, degree, None).unwrap().profile().unwrap();
        let b = ext_local_cohomology(&i, &m, degree).unwrap().profile().unwrap();
        (a, b)
    }

    #[test]
    fn routes_agree_on_small_cases() {
        for (ring, ideal, module) in [("Z/6", "2", "self"), ("Z/12", "2", "self"), ("Z/4", "2", "quot 2"), ("Z/30", "6", "quot 10")] {
            for d in 0..3 {
                let (a, b) = both(ring, ideal, module, d);
                assert_eq!(a, b, "{ring} {ideal} {module} H^{d}");
            }
        }
    }

    #[test]
    fn z4_residue_field() {
        let (a, _) = both("Z/4", "2", "quot 2", 1);
        assert!(a.invariant_factors.is_empty());
        let (a, _) = both("Z/4", "2", "quot 2", 0);
        assert_eq!(a.invariant_factors, vec![2]);
    }

    #[test]
    fn graded_needs_window() {
        let r = RingRef::parse("Q[x]").unwrap();
        let i = AnyIdeal::parse(&r, &["x"]).unwrap();
        let m = ModulePresentation::parse(&r, "self").unwrap();
        assert_eq!(local_cohomology(&i, &m, 1, None).unwrap_err(), Error::WindowRequired);
    }
}
