//! A finite preordered set with meets and a top, viewed as a thin symmetric
//! monoidal category with `⊗ = meet` and `𝒪 = top`.

use crate::error::{Error, Result};

use super::derived::Classification;
use super::MonoidalContext;

#[derive(Clone, Debug)]
pub struct PreorderedContext {
    pub names: Vec<String>,
    /// `le[a][b]`: `a ≤ b`.
    pub le: Vec<Vec<bool>>,
    meet: Vec<Vec<usize>>,
    top: usize,
}

/// A morphism `src → tgt`; there is at most one.
pub type Arrow = (usize, usize);

impl PreorderedContext {
    pub fn new(names: Vec<String>, le: Vec<Vec<bool>>) -> Result<PreorderedContext> {
        let n = names.len();
        if n == 0 || le.len() != n || le.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("order relation must be a square matrix".into()));
        }
        for a in 0..n {
            if !le[a][a] {
                return Err(Error::NotASemilattice(format!("{} is not ≤ itself", names[a])));
            }
            for b in 0..n {
                for c in 0..n {
                    if le[a][b] && le[b][c] && !le[a][c] {
                        return Err(Error::NotASemilattice(format!(
                            "{} ≤ {} ≤ {} but not {} ≤ {}",
                            names[a], names[b], names[c], names[a], names[c]
                        )));
                    }
                }
            }
        }
        let top = (0..n)
            .find(|&t| (0..n).all(|x| le[x][t]))
            .ok_or_else(|| Error::NotASemilattice("no largest element".into()))?;
        let mut meet = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let lower: Vec<usize> = (0..n).filter(|&c| le[c][a] && le[c][b]).collect();
                meet[a][b] = *lower
                    .iter()
                    .find(|&&m| lower.iter().all(|&c| le[c][m]))
                    .ok_or_else(|| Error::NotASemilattice(format!("{} and {} have no meet", names[a], names[b])))?;
            }
        }
        Ok(PreorderedContext { names, le, meet, top })
    }

    /// `0 ≤ 1 ≤ … ≤ n−1`.
    pub fn chain(n: usize) -> Result<PreorderedContext> {
        let names = (0..n).map(|i| i.to_string()).collect();
        let le = (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect();
        Self::new(names, le)
    }

    /// Subsets of `atoms` ordered by inclusion, indexed by bitmask.
    pub fn boolean(atoms: &[&str]) -> Result<PreorderedContext> {
        let n = 1usize << atoms.len();
        let names = (0..n)
            .map(|m| {
                let parts: Vec<&str> = atoms.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, a)| *a).collect();
                format!("{{{}}}", parts.join(","))
            })
            .collect();
        let le = (0..n).map(|a| (0..n).map(|b| a & b == a).collect()).collect();
        Self::new(names, le)
    }

    /// The preorder of idempotent classes found by a classification.
    pub fn from_classification(c: &Classification) -> Result<PreorderedContext> {
        let names = c.classes.iter().map(|k| format!("{:?}", k.stable_set.prime_list().unwrap_or(&[]))).collect();
        Self::new(names, c.le.clone())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// The unique map `a → 𝒪`.
    pub fn to_top(&self, a: usize) -> Arrow {
        (a, self.top)
    }

    fn arrow(&self, a: usize, b: usize) -> Result<Arrow> {
        if self.le[a][b] {
            Ok((a, b))
        } else {
            Err(Error::NotAMorphism(format!("{} is not ≤ {}", self.names[a], self.names[b])))
        }
    }
}

/// Whether some bijection between the two carriers preserves and reflects
/// the order.
pub fn order_isomorphic(p: &PreorderedContext, q: &PreorderedContext) -> bool {
    let n = p.len();
    if n != q.len() {
        return false;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    fn search(k: usize, perm: &mut Vec<usize>, p: &PreorderedContext, q: &PreorderedContext) -> bool {
        let n = perm.len();
        if k == n {
            return true;
        }
        for i in k..n {
            perm.swap(k, i);
            let ok = (0..=k).all(|j| p.le[j][k] == q.le[perm[j]][perm[k]] && p.le[k][j] == q.le[perm[k]][perm[j]]);
            if ok && search(k + 1, perm, p, q) {
                return true;
            }
            perm.swap(k, i);
        }
        false
    }
    search(0, &mut perm, p, q)
}

impl MonoidalContext for PreorderedContext {
    type Obj = usize;
    type Mor = Arrow;

    fn unit(&self) -> usize {
        self.top
    }

    fn same_object(&self, a: &usize, b: &usize) -> bool {
        a == b
    }

    fn tensor(&self, a: &usize, b: &usize) -> Result<usize> {
        Ok(self.meet[*a][*b])
    }

    fn tensor_mor(&self, f: &Arrow, g: &Arrow) -> Result<Arrow> {
        self.arrow(self.meet[f.0][g.0], self.meet[f.1][g.1])
    }

    fn compose(&self, g: &Arrow, f: &Arrow) -> Result<Arrow> {
        if f.1 != g.0 {
            return Err(Error::NotAMorphism("composable arrows must meet".into()));
        }
        self.arrow(f.0, g.1)
    }

    fn identity(&self, a: &usize) -> Arrow {
        (*a, *a)
    }

    fn source(&self, f: &Arrow) -> usize {
        f.0
    }

    fn target(&self, f: &Arrow) -> usize {
        f.1
    }

    fn left_unitor(&self, a: &usize) -> Result<Arrow> {
        self.arrow(self.meet[self.top][*a], *a)
    }

    fn right_unitor(&self, a: &usize) -> Result<Arrow> {
        self.arrow(self.meet[*a][self.top], *a)
    }

    fn symmetry(&self, a: &usize, b: &usize) -> Result<Arrow> {
        self.arrow(self.meet[*a][*b], self.meet[*b][*a])
    }

    fn associator(&self, a: &usize, b: &usize, c: &usize) -> Result<Arrow> {
        self.arrow(self.meet[self.meet[*a][*b]][*c], self.meet[*a][self.meet[*b][*c]])
    }

    fn is_iso(&self, f: &Arrow) -> Result<bool> {
        Ok(self.le[f.1][f.0])
    }

    fn mor_eq(&self, f: &Arrow, g: &Arrow) -> Result<bool> {
        Ok(f == g)
    }

    fn hom_set(&self, a: &usize, b: &usize) -> Result<Option<Vec<Arrow>>> {
        Ok(Some(if self.le[*a][*b] { vec![(*a, *b)] } else { Vec::new() }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::idempotents::{coherence_violations, is_idempotent, leq, Pair};

    fn all_idempotent(ctx: &PreorderedContext) -> bool {
        (0..ctx.len()).all(|a| is_idempotent(ctx, &Pair { obj: a, alpha: ctx.to_top(a) }).unwrap().idempotent)
    }

    #[test]
    fn chain_and_boolean() {
        let c = PreorderedContext::chain(2).unwrap();
        assert!(all_idempotent(&c));
        assert_eq!(c.meet(0, 1), 0);
        let b = PreorderedContext::boolean(&["p", "q"]).unwrap();
        assert_eq!(b.len(), 4);
        assert!(all_idempotent(&b));
        assert_eq!(b.meet(1, 2), 0);
        let objs: Vec<usize> = (0..4).collect();
        assert!(coherence_violations(&b, &objs).unwrap().is_empty());
        for x in 0..4 {
            for y in 0..4 {
                let px = Pair { obj: x, alpha: b.to_top(x) };
                let py = Pair { obj: y, alpha: b.to_top(y) };
                assert_eq!(leq(&b, &px, &py).unwrap(), b.le[x][y]);
            }
        }
        assert!(!order_isomorphic(&b, &PreorderedContext::chain(4).unwrap()));
    }

    #[test]
    fn rejects_missing_meet() {
        // two incomparable minimal elements below a top, no bottom
        let le = vec![vec![true, false, true], vec![false, true, true], vec![false, false, true]];
        let e = PreorderedContext::new(vec!["a".into(), "b".into(), "t".into()], le).unwrap_err();
        assert_eq!(e.code(), "not-a-semilattice");
    }
}
