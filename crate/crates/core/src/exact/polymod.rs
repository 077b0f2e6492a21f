//! Submodules of free modules `S^n` over a polynomial ring.
//!
//! A submodule `K ⊆ S^n` is encoded as the ideal `Σ k_i e_i + (e_i e_j)` in
//! `S[e_1, …, e_n]`; the elements of degree one in the `e` variables of its
//! reduced Gröbner basis form a Gröbner basis of `K`. For `n = 1` no extra
//! variables are added and the encoding is the ideal itself.

use std::fmt;
use std::sync::Arc;

use super::groebner::groebner_basis;
use super::ideal::{Ideal, SATURATION_CAP};
use super::poly::{MonomialOrder, PolyRing, Polynomial};
use crate::error::{Error, Result};

pub type Vector = Vec<Polynomial>;

#[derive(Clone, Debug)]
pub struct Encoding {
    pub base: Arc<PolyRing>,
    pub rank: usize,
    ering: Arc<PolyRing>,
}

fn e_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("_e{i}")).collect()
}

impl Encoding {
    pub fn new(base: &Arc<PolyRing>, rank: usize) -> Encoding {
        let ering = if rank == 1 {
            base.clone()
        } else {
            let names = e_names(rank);
            let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            base.prepend_vars(&refs, MonomialOrder::Grevlex)
        };
        Encoding {
            base: base.clone(),
            rank,
            ering,
        }
    }

    fn offset(&self) -> usize {
        if self.rank == 1 {
            0
        } else {
            self.rank
        }
    }

    fn base_map(&self) -> Vec<usize> {
        (0..self.base.nvars()).map(|i| i + self.offset()).collect()
    }

    pub fn encode(&self, v: &[Polynomial]) -> Polynomial {
        assert_eq!(v.len(), self.rank);
        if self.rank == 1 {
            return v[0].reorder(&self.ering);
        }
        let map = self.base_map();
        let mut acc = self.ering.zero();
        for (i, p) in v.iter().enumerate() {
            acc = acc.add(&self.ering.var(i).mul(&p.embed(&self.ering, &map)));
        }
        acc
    }

    /// Inverse of [`Encoding::encode`] on elements of `e`-degree one.
    pub fn decode(&self, p: &Polynomial) -> Option<Vector> {
        if self.rank == 1 {
            return Some(vec![p.reorder(&self.base)]);
        }
        let off = self.offset();
        let mut parts: Vec<Vec<(Vec<u32>, super::scalar::Scalar)>> = vec![Vec::new(); self.rank];
        for (m, c) in &p.terms {
            let edeg: u32 = m[..off].iter().sum();
            if edeg != 1 {
                return None;
            }
            let i = m[..off].iter().position(|&x| x == 1).expect("degree one");
            parts[i].push((m[off..].to_vec(), c.clone()));
        }
        Some(
            parts
                .into_iter()
                .map(|t| Polynomial::from_terms(&self.base, t))
                .collect(),
        )
    }

    fn squares(&self) -> Vec<Polynomial> {
        let mut out = Vec::new();
        if self.rank > 1 {
            for i in 0..self.rank {
                for j in i..self.rank {
                    out.push(self.ering.var(i).mul(&self.ering.var(j)));
                }
            }
        }
        out
    }

    pub fn zero_vector(&self) -> Vector {
        vec![self.base.zero(); self.rank]
    }

    pub fn unit_vector(&self, i: usize) -> Vector {
        let mut v = self.zero_vector();
        v[i] = self.base.one();
        v
    }

    fn ideal_of(&self, gens: &[Vector]) -> Ideal {
        let mut g: Vec<Polynomial> = gens.iter().map(|v| self.encode(v)).collect();
        g.extend(self.squares());
        Ideal::new(&self.ering, g)
    }

    fn module_part(&self, gb: &[Polynomial]) -> Vec<Vector> {
        gb.iter().filter_map(|p| self.decode(p)).collect()
    }
}

/// A submodule of `S^n` with a cached Gröbner basis.
#[derive(Clone)]
pub struct VecModule {
    pub enc: Encoding,
    ideal: Ideal,
}

impl fmt::Debug for VecModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.basis().iter().map(|v| format_vector(v)).collect();
        write!(f, "<{}>", g.join(", "))
    }
}

pub fn format_vector(v: &[Polynomial]) -> String {
    if v.len() == 1 {
        v[0].to_string()
    } else {
        let parts: Vec<String> = v.iter().map(|p| p.to_string()).collect();
        format!("[{}]", parts.join(", "))
    }
}

impl VecModule {
    pub fn new(enc: &Encoding, gens: &[Vector]) -> VecModule {
        VecModule {
            enc: enc.clone(),
            ideal: enc.ideal_of(gens),
        }
    }

    pub fn zero(enc: &Encoding) -> VecModule {
        Self::new(enc, &[])
    }

    pub fn full(enc: &Encoding) -> VecModule {
        let gens: Vec<Vector> = (0..enc.rank).map(|i| enc.unit_vector(i)).collect();
        Self::new(enc, &gens)
    }

    /// Reduced Gröbner basis of the submodule.
    pub fn basis(&self) -> Vec<Vector> {
        self.enc.module_part(self.ideal.groebner())
    }

    pub fn contains(&self, v: &[Polynomial]) -> bool {
        self.ideal.contains(&self.enc.encode(v))
    }

    pub fn normal_form(&self, v: &[Polynomial]) -> Vector {
        let nf = self
            .ideal
            .normal_form(&self.enc.encode(v))
            .expect("same ring");
        self.enc.decode(&nf).expect("reduction preserves e-degree")
    }

    pub fn is_subset(&self, other: &VecModule) -> bool {
        self.basis().iter().all(|v| other.contains(v))
    }

    pub fn same_as(&self, other: &VecModule) -> bool {
        self.ideal.same_as(&other.ideal)
    }

    pub fn sum(&self, other: &VecModule) -> VecModule {
        let mut g = self.basis();
        g.extend(other.basis());
        Self::new(&self.enc, &g)
    }

    pub fn intersection(&self, other: &VecModule) -> VecModule {
        let a = self.basis();
        let b = other.basis();
        if a.is_empty() || b.is_empty() {
            return Self::zero(&self.enc);
        }
        let enc = &self.enc;
        let big = enc.ering.prepend_vars(&["_t"], MonomialOrder::Elim(1));
        let shift: Vec<usize> = (1..=enc.ering.nvars()).collect();
        let t = big.var(0);
        let one_minus_t = big.one().sub(&t);
        let mut gens = Vec::new();
        for v in &a {
            gens.push(t.mul(&enc.encode(v).embed(&big, &shift)));
        }
        for v in &b {
            gens.push(one_minus_t.mul(&enc.encode(v).embed(&big, &shift)));
        }
        for q in enc.squares() {
            gens.push(q.embed(&big, &shift));
        }
        let gb = groebner_basis(&gens);
        let kept: Vec<Vector> = gb
            .iter()
            .filter(|p| p.only_uses(|i| i != 0))
            .map(|p| {
                let terms = p
                    .terms
                    .iter()
                    .map(|(m, c)| (m[1..].to_vec(), c.clone()))
                    .collect();
                Polynomial::from_terms(&enc.ering, terms)
            })
            .filter_map(|p| enc.decode(&p))
            .collect();
        Self::new(enc, &kept)
    }

    /// `(K : g) = {v : g v ∈ K}`.
    pub fn quotient_by(&self, g: &Polynomial) -> VecModule {
        if g.is_zero() {
            return Self::full(&self.enc);
        }
        let enc = &self.enc;
        let gs: Vec<Vector> = (0..enc.rank)
            .map(|i| {
                let mut v = enc.zero_vector();
                v[i] = g.clone();
                v
            })
            .collect();
        let inter = self.intersection(&Self::new(enc, &gs));
        let gens: Vec<Vector> = inter
            .basis()
            .iter()
            .map(|v| {
                v.iter()
                    .map(|p| p.exact_div(g).expect("components divisible by g"))
                    .collect()
            })
            .collect();
        Self::new(enc, &gens)
    }

    /// `(K : I) = ∩_k (K : g_k)`.
    pub fn quotient(&self, i: &Ideal) -> VecModule {
        let mut acc = Self::full(&self.enc);
        for g in &i.gens {
            acc = acc.intersection(&self.quotient_by(&g.reorder(&self.enc.base)));
        }
        acc
    }

    /// `(K : I^∞)` with the chain `(K : I^t)` recorded stage by stage.
    pub fn saturation_chain(&self, i: &Ideal) -> Result<Vec<VecModule>> {
        let mut chain = vec![self.clone()];
        for _ in 0..SATURATION_CAP {
            let next = chain.last().unwrap().quotient(i);
            if next.same_as(chain.last().unwrap()) {
                return Ok(chain);
            }
            chain.push(next);
        }
        Err(Error::StabilizationCapExceeded(SATURATION_CAP))
    }

    /// Multiplies every component by `g`.
    pub fn scale_vector(v: &[Polynomial], g: &Polynomial) -> Vector {
        v.iter().map(|p| p.mul(g)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse::parse_poly_ring;

    #[test]
    fn rank_one_matches_ideals() {
        let r = parse_poly_ring("Q[x,y]").unwrap();
        let enc = Encoding::new(&r, 1);
        let k = VecModule::new(&enc, &[vec![r.parse("x*y").unwrap()]]);
        let x = Ideal::parse(&r, &["x"]).unwrap();
        let chain = k.saturation_chain(&x).unwrap();
        let last = chain.last().unwrap();
        assert_eq!(last.basis(), vec![vec![r.parse("y").unwrap()]]);
    }

    #[test]
    fn rank_two_quotient() {
        let r = parse_poly_ring("Q[x,y]").unwrap();
        let enc = Encoding::new(&r, 2);
        // K = x S ⊕ y S
        let k = VecModule::new(
            &enc,
            &[
                vec![r.parse("x").unwrap(), r.zero()],
                vec![r.zero(), r.parse("y").unwrap()],
            ],
        );
        let q = k.quotient_by(&r.parse("x").unwrap());
        assert!(q.contains(&[r.one(), r.zero()]));
        assert!(!q.contains(&[r.zero(), r.one()]));
        assert!(q.contains(&[r.zero(), r.parse("y").unwrap()]));
        let both = k.intersection(&VecModule::new(&enc, &[vec![r.one(), r.one()]]));
        assert!(both.contains(&[r.parse("x*y").unwrap(), r.parse("x*y").unwrap()]));
        assert!(!both.contains(&[r.parse("x").unwrap(), r.parse("x").unwrap()]));
    }
}
