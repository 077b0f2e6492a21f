//! Localization of finite modules at a single element.

use super::module::{FinModule, Subquotient};
use crate::linalg::Mat;

/// `M[1/t]` realized as the stable image `t^N M ⊆ M`.
pub struct Localization {
    /// `t^N M` with its own coordinates.
    pub image: Subquotient,
    /// Least `N` with `t^N M = t^{N+1} M`.
    pub steps: usize,
    /// The localization map `M → M[1/t]`, multiplication by the idempotent
    /// `e_t`, in the image's coordinates.
    pub map: Mat,
    /// `e_t`.
    pub idempotent: usize,
}

impl Localization {
    pub fn module(&self) -> &FinModule {
        &self.image.module
    }
}

pub fn localize_finite(m: &FinModule, t: usize) -> Localization {
    let ring = &m.ring;
    let n = m.characteristic();
    let at = m.action_of_element(t);
    let mut power = m.identity_matrix();
    let mut cur = m.submodule(&power);
    let mut steps = 0;
    loop {
        power = at.mul_mod(&power, n);
        power.reduce_rows(&m.moduli);
        let next = m.submodule(&power);
        if next.module.order() == cur.module.order() {
            break;
        }
        cur = next;
        steps += 1;
    }
    let e = ring.idempotent_power(t);
    let ae = m.action_of_element(e);
    let map = cur
        .coords_matrix(&ae)
        .expect("e_t M lies in the stable image t^N M");
    debug_assert_eq!(m.submodule(&ae).module.order(), cur.module.order());
    Localization {
        image: cur,
        steps,
        map,
        idempotent: e,
    }
}

/// Does `t` act bijectively on `M`?
pub fn acts_invertibly(m: &FinModule, t: usize) -> bool {
    let a = m.action_of_element(t);
    m.kernel(m, &a).module.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::FiniteRing;

    #[test]
    fn examples() {
        let z6 = FiniteRing::build("Z/6").unwrap();
        let s = FinModule::ring_module(&z6);
        let l = localize_finite(&s, 2);
        assert_eq!(l.module().order().value(), Some(3));
        assert_eq!(z6.name(l.idempotent), "4");
        assert!(acts_invertibly(l.module(), 2));
        let z4 = FiniteRing::build("Z/4").unwrap();
        let l = localize_finite(&FinModule::ring_module(&z4), 2);
        assert!(l.module().is_zero());
        let l = localize_finite(&s, 1);
        assert_eq!(l.steps, 0);
        assert_eq!(l.module().order().value(), Some(6));
    }
}
