//! Buchberger's algorithm with the product and chain criteria.

use super::poly::{monomial_divides, monomial_lcm, spoly, Polynomial};

/// Fully reduces `f` against `basis` (any generating set with nonzero members).
pub fn reduce(f: &Polynomial, basis: &[Polynomial]) -> Polynomial {
    let ring = f.ring.clone();
    let mut p = f.clone();
    let mut rem_terms = Vec::new();
    while !p.is_zero() {
        let lm = p.lm().clone();
        let divisor = basis.iter().find(|g| monomial_divides(g.lm(), &lm));
        match divisor {
            Some(g) => {
                let m: Vec<u32> = lm.iter().zip(g.lm()).map(|(a, b)| a - b).collect();
                let c = p.lc().div(g.lc());
                p = p.sub(&g.mul_term(&m, &c));
            }
            None => {
                rem_terms.push(p.terms.remove(0));
            }
        }
    }
    Polynomial {
        ring,
        terms: rem_terms,
    }
}

/// The reduced Gröbner basis of the span of `gens`, sorted ascending by leading
/// monomial, every element monic.
pub fn groebner_basis(gens: &[Polynomial]) -> Vec<Polynomial> {
    let mut basis: Vec<Polynomial> = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        if g.is_constant() {
            return vec![g.ring.one()];
        }
        basis.push(g.monic());
    }
    if basis.is_empty() {
        return basis;
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    let order = basis[0].ring.order;
    while let Some(idx) = select_pair(&basis, &pairs, order) {
        let (i, j) = pairs.swap_remove(idx);
        let (fi, fj) = (&basis[i], &basis[j]);
        let l = monomial_lcm(fi.lm(), fj.lm());
        // product criterion: coprime leading monomials
        if fi.lm().iter().zip(fj.lm()).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        // chain criterion: some k with lm_k | lcm and both pairs already handled
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && monomial_divides(basis[k].lm(), &l)
                && !pairs.contains(&(i.min(k), i.max(k)))
                && !pairs.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let h = reduce(&spoly(fi, fj), &basis);
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return vec![h.ring.one()];
        }
        let n = basis.len();
        basis.push(h.monic());
        for k in 0..n {
            pairs.push((k, n));
        }
    }
    reduce_basis(basis)
}

fn select_pair(
    basis: &[Polynomial],
    pairs: &[(usize, usize)],
    order: super::poly::MonomialOrder,
) -> Option<usize> {
    // normal selection strategy: smallest lcm first
    let mut best: Option<(usize, Vec<u32>)> = None;
    for (idx, &(i, j)) in pairs.iter().enumerate() {
        let l = monomial_lcm(basis[i].lm(), basis[j].lm());
        let better = match &best {
            None => true,
            Some((_, bl)) => order.cmp(&l, bl) == std::cmp::Ordering::Less,
        };
        if better {
            best = Some((idx, l));
        }
    }
    best.map(|(i, _)| i)
}

fn reduce_basis(mut basis: Vec<Polynomial>) -> Vec<Polynomial> {
    let order = basis[0].ring.order;
    basis.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    // drop elements whose leading monomial is divisible by another's
    let mut minimal: Vec<Polynomial> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(m, h)| {
            m != k && monomial_divides(h.lm(), g.lm()) && (h.lm() != g.lm() || m < k)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter(|(m, _)| *m != k)
            .map(|(_, p)| p.clone())
            .collect();
        let g = &minimal[k];
        let tail = Polynomial {
            ring: g.ring.clone(),
            terms: g.terms[1..].to_vec(),
        };
        let head = Polynomial {
            ring: g.ring.clone(),
            terms: vec![g.terms[0].clone()],
        };
        out.push(head.add(&reduce(&tail, &others)).monic());
    }
    out.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    out
}

/// Certificate check: every S-polynomial of basis pairs reduces to zero.
pub fn is_groebner(basis: &[Polynomial]) -> bool {
    for j in 0..basis.len() {
        for i in 0..j {
            if !reduce(&spoly(&basis[i], &basis[j]), basis).is_zero() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse::parse_poly_ring;

    #[test]
    fn monomial_ideal_basis() {
        let r = parse_poly_ring("Q[x,y]").unwrap();
        let gb = groebner_basis(&[r.parse("x^2").unwrap(), r.parse("x*y").unwrap()]);
        let printed: Vec<String> = gb.iter().map(|g| g.to_string()).collect();
        assert_eq!(printed, vec!["x*y", "x^2"]);
        assert!(is_groebner(&gb));
    }

    #[test]
    fn unit_and_zero_ideals() {
        let r = parse_poly_ring("Q[x,y]").unwrap();
        assert!(groebner_basis(&[r.zero()]).is_empty());
        let gb = groebner_basis(&[r.parse("x").unwrap(), r.parse("x+1").unwrap()]);
        assert_eq!(gb, vec![r.one()]);
    }

    #[test]
    fn twisted_cubic() {
        let r = parse_poly_ring("Q[x,y,z,w]").unwrap();
        let gens: Vec<_> = ["x*z - y^2", "y*w - z^2", "x*w - y*z"]
            .iter()
            .map(|s| r.parse(s).unwrap())
            .collect();
        let gb = groebner_basis(&gens);
        assert!(is_groebner(&gb));
        for g in &gens {
            assert!(reduce(g, &gb).is_zero());
        }
    }
}
