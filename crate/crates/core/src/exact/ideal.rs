//! Ideals of polynomial rings with a lazily computed reduced Gröbner basis.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use super::groebner::{groebner_basis, reduce};
use super::poly::{ensure_same_ring, MonomialOrder, PolyRing, Polynomial};
use crate::error::{invalid, Result};

/// Upper bound on quotient steps when saturating.
pub const SATURATION_CAP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdealOp {
    Sum,
    Product,
    Intersection,
    Quotient,
    Saturation,
}

impl std::str::FromStr for IdealOp {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "sum" => IdealOp::Sum,
            "product" => IdealOp::Product,
            "intersection" => IdealOp::Intersection,
            "quotient" => IdealOp::Quotient,
            "saturation" => IdealOp::Saturation,
            _ => return Err(invalid(format!("unknown ideal operation '{s}'"))),
        })
    }
}

pub struct Ideal {
    pub ring: Arc<PolyRing>,
    pub gens: Vec<Polynomial>,
    gb: OnceLock<Vec<Polynomial>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let gb = OnceLock::new();
        if let Some(b) = self.gb.get() {
            let _ = gb.set(b.clone());
        }
        Ideal {
            ring: self.ring.clone(),
            gens: self.gens.clone(),
            gb,
        }
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.gens.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", g.join(", "))
    }
}

/// JSON form `{"ring": "Q[x,y]", "gens": ["x^2", "x*y"]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealJson {
    pub ring: String,
    pub gens: Vec<String>,
}

impl Ideal {
    pub fn new(ring: &Arc<PolyRing>, gens: Vec<Polynomial>) -> Ideal {
        for g in &gens {
            assert!(
                g.ring.vars == ring.vars && g.ring.field == ring.field,
                "generator from a different ring"
            );
        }
        let gens = gens
            .into_iter()
            .filter(|g| !g.is_zero())
            .map(|g| g.reorder(ring))
            .collect();
        Ideal {
            ring: ring.clone(),
            gens,
            gb: OnceLock::new(),
        }
    }

    pub fn parse(ring: &Arc<PolyRing>, gens: &[&str]) -> Result<Ideal> {
        let polys = gens
            .iter()
            .map(|s| ring.parse(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ideal::new(ring, polys))
    }

    pub fn from_json(j: &IdealJson) -> Result<Ideal> {
        let ring = super::parse::parse_poly_ring(&j.ring)?;
        let refs: Vec<&str> = j.gens.iter().map(|s| s.as_str()).collect();
        Ideal::parse(&ring, &refs)
    }

    pub fn to_json(&self) -> IdealJson {
        IdealJson {
            ring: self.ring.spec(),
            gens: self.gens.iter().map(|g| g.to_string()).collect(),
        }
    }

    pub fn zero(ring: &Arc<PolyRing>) -> Ideal {
        Ideal::new(ring, Vec::new())
    }

    pub fn unit(ring: &Arc<PolyRing>) -> Ideal {
        Ideal::new(ring, vec![ring.one()])
    }

    /// The reduced Gröbner basis, computed once. Racing first calls compute
    /// the same canonical basis, so whichever result is published is correct.
    pub fn groebner(&self) -> &[Polynomial] {
        self.gb.get_or_init(|| groebner_basis(&self.gens))
    }

    /// An ideal whose generators are its reduced Gröbner basis.
    pub fn with_groebner_gens(&self) -> Ideal {
        let gb = self.groebner().to_vec();
        let out = Ideal::new(&self.ring, gb.clone());
        let _ = out.gb.set(gb);
        out
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        ensure_same_ring(&f.ring, &self.ring)?;
        Ok(reduce(&f.reorder(&self.ring), self.groebner()))
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        reduce(&f.reorder(&self.ring), self.groebner()).is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.groebner().first().is_some_and(|g| g.is_constant())
    }

    pub fn is_zero(&self) -> bool {
        self.groebner().is_empty()
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &Ideal) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    pub fn same_as(&self, other: &Ideal) -> bool {
        self.groebner() == other.groebner()
    }

    pub fn op(&self, kind: IdealOp, other: &Ideal) -> Result<Ideal> {
        ensure_same_ring(&self.ring, &other.ring)?;
        Ok(match kind {
            IdealOp::Sum => self.sum(other),
            IdealOp::Product => self.product(other),
            IdealOp::Intersection => self.intersection(other),
            IdealOp::Quotient => self.quotient(other),
            IdealOp::Saturation => self.saturation(other)?,
        })
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        let mut g = self.gens.clone();
        g.extend(other.gens.iter().map(|p| p.reorder(&self.ring)));
        Ideal::new(&self.ring, g)
    }

    pub fn product(&self, other: &Ideal) -> Ideal {
        let mut g = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                g.push(a.mul(&b.reorder(&self.ring)));
            }
        }
        Ideal::new(&self.ring, g).with_groebner_gens()
    }

    pub fn power(&self, t: u32) -> Ideal {
        let mut acc = Ideal::unit(&self.ring);
        for _ in 0..t {
            acc = acc.product(self);
        }
        acc
    }

    /// `I ∩ J` as `(t·I + (1 − t)·J) ∩ k[vars]` under an order eliminating `t`.
    pub fn intersection(&self, other: &Ideal) -> Ideal {
        if self.is_zero() || other.is_zero() {
            return Ideal::zero(&self.ring);
        }
        if self.is_unit() {
            return other.with_groebner_gens();
        }
        if other.is_unit() {
            return self.with_groebner_gens();
        }
        let big = self.ring.prepend_vars(&["_t"], MonomialOrder::Elim(1));
        let n = self.ring.nvars();
        let shift: Vec<usize> = (1..=n).collect();
        let t = big.var(0);
        let one_minus_t = big.one().sub(&t);
        let mut gens = Vec::new();
        for g in &self.gens {
            gens.push(t.mul(&g.embed(&big, &shift)));
        }
        for g in &other.gens {
            gens.push(one_minus_t.mul(&g.embed(&big, &shift)));
        }
        let gb = groebner_basis(&gens);
        let kept: Vec<Polynomial> = gb
            .iter()
            .filter(|p| p.only_uses(|i| i != 0))
            .map(|p| {
                let terms = p
                    .terms
                    .iter()
                    .map(|(m, c)| (m[1..].to_vec(), c.clone()))
                    .collect();
                Polynomial::from_terms(&self.ring, terms)
            })
            .collect();
        Ideal::new(&self.ring, kept).with_groebner_gens()
    }

    /// `(I : g) = (I ∩ (g)) / g`.
    pub fn quotient_by(&self, g: &Polynomial) -> Ideal {
        let g = g.reorder(&self.ring);
        if g.is_zero() {
            return Ideal::unit(&self.ring);
        }
        let inter = self.intersection(&Ideal::new(&self.ring, vec![g.clone()]));
        let gens = inter
            .gens
            .iter()
            .map(|h| h.exact_div(&g).expect("intersection with (g) is divisible by g"))
            .collect();
        Ideal::new(&self.ring, gens).with_groebner_gens()
    }

    /// `(I : J) = ∩_k (I : g_k)` over generators of `J`.
    pub fn quotient(&self, other: &Ideal) -> Ideal {
        let mut acc = Ideal::unit(&self.ring);
        for g in &other.gens {
            acc = acc.intersection(&self.quotient_by(g));
        }
        acc.with_groebner_gens()
    }

    /// `(I : J^∞)`, the stabilized chain `I, (I : J), ((I : J) : J), …`.
    pub fn saturation(&self, other: &Ideal) -> Result<Ideal> {
        Ok(self.saturation_chain(other)?.0)
    }

    /// Saturation together with the number of quotient steps taken.
    pub fn saturation_chain(&self, other: &Ideal) -> Result<(Ideal, usize)> {
        let mut cur = self.with_groebner_gens();
        for step in 1..=SATURATION_CAP {
            let next = cur.quotient(other);
            if next.same_as(&cur) {
                return Ok((cur, step));
            }
            cur = next;
        }
        Err(crate::error::Error::StabilizationCapExceeded(SATURATION_CAP))
    }

    /// Decides `√J ⊇ I` where `self = I`, by `(J : g^∞) = (1)` per generator.
    pub fn radical_contains(&self, j: &Ideal) -> Result<bool> {
        ensure_same_ring(&self.ring, &j.ring)?;
        for g in &self.gens {
            if j.contains(g) {
                continue;
            }
            let sat = j.saturation(&Ideal::new(&j.ring, vec![g.clone()]))?;
            if !sat.is_unit() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality up to radical.
    pub fn same_radical(&self, other: &Ideal) -> Result<bool> {
        Ok(self.radical_contains(other)? && other.radical_contains(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse::parse_poly_ring;

    fn ring() -> Arc<PolyRing> {
        parse_poly_ring("Q[x,y]").unwrap()
    }

    #[test]
    fn normal_form_examples() {
        let r = ring();
        let i = Ideal::parse(&r, &["x^2", "x*y"]).unwrap();
        assert_eq!(i.normal_form(&r.parse("x^3 + y").unwrap()).unwrap().to_string(), "y");
        assert!(i.normal_form(&r.zero()).unwrap().is_zero());
        assert!(i.normal_form(&r.parse("x^2").unwrap()).unwrap().is_zero());
        let other = parse_poly_ring("Q[x,z]").unwrap();
        assert!(i.normal_form(&other.parse("z").unwrap()).is_err());
    }

    #[test]
    fn ideal_op_examples() {
        let r = ring();
        let x = Ideal::parse(&r, &["x"]).unwrap();
        let y = Ideal::parse(&r, &["y"]).unwrap();
        let xy = Ideal::parse(&r, &["x*y"]).unwrap();
        assert!(x.intersection(&y).same_as(&xy));
        assert!(x.sum(&Ideal::zero(&r)).same_as(&x));
        let i = Ideal::parse(&r, &["x^2*y"]).unwrap();
        let (sat, steps) = i.saturation_chain(&x).unwrap();
        assert!(sat.same_as(&y));
        assert_eq!(steps, 3);
    }

    #[test]
    fn radical_examples() {
        let r = ring();
        let x = Ideal::parse(&r, &["x"]).unwrap();
        let x2 = Ideal::parse(&r, &["x^2"]).unwrap();
        assert!(x.radical_contains(&x2).unwrap());
        let xpy = Ideal::parse(&r, &["x + y"]).unwrap();
        assert!(!xpy.radical_contains(&x).unwrap());
        let one = Ideal::unit(&r);
        assert!(one.radical_contains(&one).unwrap());
    }
}
