//! Isomorphism invariants of finite modules and an exhaustive isomorphism
//! test for small ones.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::exact::module::{factorize, FinModule, HomModule};

/// Largest module order for which [`isomorphic`] searches all maps.
pub const ISO_SEARCH_LIMIT: u64 = 256;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantProfile {
    /// Invariant factors `d_1 | d_2 | …` of the underlying group.
    pub invariant_factors: Vec<i64>,
    /// Invariant factors of the kernel of each ring basis element.
    pub generator_actions: Vec<Vec<i64>>,
}

/// Invariant factors of `⊕ Z/m_i`, ascending in divisibility order.
pub fn invariant_factors(moduli: &[i64]) -> Vec<i64> {
    let mut powers: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
    for &m in moduli {
        for (p, e) in factorize(m) {
            powers.entry(p).or_default().push(p.pow(e));
        }
    }
    let len = powers.values().map(|v| v.len()).max().unwrap_or(0);
    let mut out = vec![1i64; len];
    for v in powers.values_mut() {
        v.sort_unstable_by(|a, b| b.cmp(a));
        for (k, q) in v.iter().enumerate() {
            out[len - 1 - k] *= q;
        }
    }
    out
}

impl InvariantProfile {
    pub fn of(m: &FinModule) -> InvariantProfile {
        let generator_actions = (0..m.ring.dim())
            .map(|i| invariant_factors(&m.kernel(m, &m.action[i]).module.moduli))
            .collect();
        InvariantProfile {
            invariant_factors: invariant_factors(&m.moduli),
            generator_actions,
        }
    }
}

/// Decides `M ≅ N`: different profiles refute it; otherwise every module map
/// is tried when the orders are at most [`ISO_SEARCH_LIMIT`].
pub fn isomorphic(m: &FinModule, n: &FinModule) -> Option<bool> {
    if InvariantProfile::of(m) != InvariantProfile::of(n) {
        return Some(false);
    }
    let size = m.order().value()?;
    if size > ISO_SEARCH_LIMIT {
        return None;
    }
    if size == 1 {
        return Some(true);
    }
    let hom = HomModule::new(m, n);
    let maps = hom.module().elements(1 << 20)?;
    Some(maps.iter().any(|c| {
        let f = hom.matrix_of(c);
        m.kernel(n, &f).module.is_zero()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::FiniteRing;

    #[test]
    fn factors() {
        assert_eq!(invariant_factors(&[2, 3]), vec![6]);
        assert_eq!(invariant_factors(&[2, 4, 3]), vec![2, 12]);
        assert_eq!(invariant_factors(&[1]), Vec::<i64>::new());
    }

    #[test]
    fn distinguishes_modules_with_equal_groups() {
        let r = FiniteRing::build("F2[x]/(x^2)").unwrap();
        let s = FinModule::ring_module(&r);
        let k = FinModule::ring_quotient(&r, &[r.parse_element("x").unwrap()]).module;
        let kk = FinModule::direct_sum(&r, &[&k, &k]);
        assert_eq!(s.order(), kk.order());
        assert_eq!(isomorphic(&s, &kk), Some(false));
        assert_eq!(isomorphic(&s, &s.clone()), Some(true));
    }
}
