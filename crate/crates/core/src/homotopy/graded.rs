//! Multigraded slices of stable Koszul complexes over a polynomial ring.
//!
//! For `M = S/J` with `J` monomial and monomial generators `t`, the
//! localization `M[1/t_T]` inverts the variables `V(T)` occurring in the
//! generators indexed by `T`. Its slice in degree `a` is spanned by `x^a`
//! when `a_i ≥ 0` off `V(T)` and `x^a` stays outside `J` after multiplying
//! by a large power of `Π_{i∈V(T)} x_i`; otherwise it is zero. The
//! localization maps send `x^a` to `x^a`, so each slice complex is a complex
//! of `0/1`-dimensional spaces with signed incidence maps.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact::poly::{monomial_divides, PolyRing, Polynomial};
use crate::exact::scalar::Scalar;

/// A box `lo ≤ a ≤ hi` of multidegrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl Window {
    pub fn cube(n: usize, lo: i64, hi: i64) -> Window {
        Window {
            lo: vec![lo; n],
            hi: vec![hi; n],
        }
    }

    /// Parses `lo,hi` (the same range in every variable) or
    /// `lo1:hi1,lo2:hi2,…`.
    pub fn parse(s: &str, nvars: usize) -> Result<Window> {
        let bad = || Error::InvalidInput(format!("bad window {s:?}"));
        let s = s.trim().trim_start_matches('[').trim_end_matches(']');
        if s.contains(':') {
            let mut lo = Vec::new();
            let mut hi = Vec::new();
            for part in s.split(',') {
                let (a, b) = part.split_once(':').ok_or_else(bad)?;
                lo.push(a.trim().parse().map_err(|_| bad())?);
                hi.push(b.trim().parse().map_err(|_| bad())?);
            }
            if lo.len() != nvars {
                return Err(bad());
            }
            return Ok(Window { lo, hi });
        }
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 2 {
            return Err(bad());
        }
        let lo = parts[0].trim().parse().map_err(|_| bad())?;
        let hi = parts[1].trim().parse().map_err(|_| bad())?;
        Ok(Window::cube(nvars, lo, hi))
    }

    pub fn points(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for (l, h) in self.lo.iter().zip(&self.hi) {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (*l..=*h).map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        out
    }
}

pub fn format_degree(a: &[i64]) -> String {
    let parts: Vec<String> = a.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// `M = S/J` for a monomial ideal `J`, listed by its generators' exponents.
#[derive(Clone, Debug)]
pub struct MonomialQuotient {
    pub ring: Arc<PolyRing>,
    pub gens: Vec<Vec<u32>>,
}

impl MonomialQuotient {
    pub fn new(ring: &Arc<PolyRing>, gens: &[Polynomial]) -> Result<MonomialQuotient> {
        let mut out = Vec::new();
        for g in gens {
            if g.is_zero() {
                continue;
            }
            if !g.is_monomial() {
                return Err(Error::UnsupportedBackend(format!(
                    "graded slices need monomial relations, got {g}"
                )));
            }
            out.push(g.lm().clone());
        }
        Ok(MonomialQuotient {
            ring: ring.clone(),
            gens: out,
        })
    }

    pub fn contains(&self, m: &[u32]) -> bool {
        self.gens.iter().any(|g| monomial_divides(g, m))
    }

    fn max_exponent(&self) -> u32 {
        self.gens.iter().flatten().copied().max().unwrap_or(0)
    }

    /// The slice rule: is `x^a` nonzero in `M[1/x_V]`?
    pub fn slice_nonzero(&self, a: &[i64], inverted: &[bool]) -> bool {
        let big = self.max_exponent() + 1;
        let mut m = Vec::with_capacity(a.len());
        for (i, &ai) in a.iter().enumerate() {
            if inverted[i] {
                m.push(big);
            } else if ai < 0 {
                return false;
            } else {
                m.push(ai as u32);
            }
        }
        !self.contains(&m)
    }

    /// The same question answered by multiplying `x^a` by `x_V^k` for every
    /// `k` up to `k_max` and reading off the last answer.
    pub fn slice_nonzero_brute(&self, a: &[i64], inverted: &[bool], k_max: u32) -> bool {
        if a.iter().zip(inverted).any(|(&ai, &inv)| !inv && ai < 0) {
            return false;
        }
        let mut last = None;
        for k in 0..=k_max {
            let shifted: Vec<i64> = a
                .iter()
                .zip(inverted)
                .map(|(&ai, &inv)| if inv { ai + k as i64 } else { ai })
                .collect();
            if shifted.iter().any(|&e| e < 0) {
                continue;
            }
            let m: Vec<u32> = shifted.iter().map(|&e| e as u32).collect();
            last = Some(!self.contains(&m));
        }
        last.unwrap_or(false)
    }
}

/// Variables inverted by the generators indexed by `subset`.
fn inverted_vars(t: &[Vec<u32>], subset: &[usize], n: usize) -> Vec<bool> {
    let mut v = vec![false; n];
    for &k in subset {
        for (i, &e) in t[k].iter().enumerate() {
            if e > 0 {
                v[i] = true;
            }
        }
    }
    v
}

fn subsets(d: usize) -> Vec<Vec<Vec<usize>>> {
    let mut by_size = vec![Vec::new(); d + 1];
    for mask in 0u32..(1 << d) {
        let s: Vec<usize> = (0..d).filter(|i| mask >> i & 1 == 1).collect();
        by_size[s.len()].push(s);
    }
    for row in &mut by_size {
        row.sort();
    }
    by_size
}

fn rank(mut rows: Vec<Vec<Scalar>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv();
        let pivot: Vec<Scalar> = rows[r].iter().map(|x| x.mul(&inv)).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        rows[r] = pivot;
        r += 1;
    }
    r
}

/// The slice of `Č(t) ⊗ M` in degree `a`: the nonzero summands per
/// cohomological degree and the differentials between them.
pub struct GradedSlice {
    pub degree: Vec<i64>,
    pub basis: Vec<Vec<Vec<usize>>>,
    pub diffs: Vec<Vec<Vec<Scalar>>>,
}

impl GradedSlice {
    pub fn new(m: &MonomialQuotient, t: &[Vec<u32>], a: &[i64]) -> GradedSlice {
        let field = &m.ring.field;
        let n = m.ring.nvars();
        let basis: Vec<Vec<Vec<usize>>> = subsets(t.len())
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .filter(|s| m.slice_nonzero(a, &inverted_vars(t, s, n)))
                    .collect()
            })
            .collect();
        let diffs = (0..t.len())
            .map(|j| {
                basis[j + 1]
                    .iter()
                    .map(|tgt| {
                        basis[j]
                            .iter()
                            .map(|src| {
                                let extra: Vec<usize> = tgt.iter().copied().filter(|k| !src.contains(k)).collect();
                                if extra.len() != 1 || !src.iter().all(|k| tgt.contains(k)) {
                                    return field.zero();
                                }
                                let below = src.iter().filter(|&&k| k < extra[0]).count();
                                if below % 2 == 0 {
                                    field.one()
                                } else {
                                    field.one().neg()
                                }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        GradedSlice {
            degree: a.to_vec(),
            basis,
            diffs,
        }
    }

    pub fn cohomology_dims(&self) -> Vec<usize> {
        let d = self.basis.len() - 1;
        let ranks: Vec<usize> = self.diffs.iter().map(|m| rank(m.clone())).collect();
        (0..=d)
            .map(|j| {
                let out = if j < d { ranks[j] } else { 0 };
                let inc = if j > 0 { ranks[j - 1] } else { 0 };
                self.basis[j].len() - out - inc
            })
            .collect()
    }
}

/// `dim H^i(Č(t) ⊗ M)_a` for every `a` in the window and every `i`, keeping
/// only nonzero dimensions.
pub fn graded_local_cohomology(
    m: &MonomialQuotient,
    t: &[Polynomial],
    window: &Window,
) -> Result<Vec<BTreeMap<Vec<i64>, usize>>> {
    let n = m.ring.nvars();
    if window.lo.len() != n || window.hi.len() != n {
        return Err(Error::InvalidInput("window has the wrong number of coordinates".into()));
    }
    let mut exps = Vec::new();
    for g in t {
        if !g.is_monomial() {
            return Err(Error::UnsupportedBackend(format!(
                "graded slices need monomial generators, got {g}"
            )));
        }
        exps.push(g.lm().clone());
    }
    let mut out = vec![BTreeMap::new(); exps.len() + 1];
    for a in window.points() {
        let slice = GradedSlice::new(m, &exps, &a);
        for (i, dim) in slice.cohomology_dims().into_iter().enumerate() {
            if dim > 0 {
                out[i].insert(a.clone(), dim);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse::parse_poly_ring;

    #[test]
    fn one_variable() {
        let r = parse_poly_ring("Q[x]").unwrap();
        let m = MonomialQuotient::new(&r, &[]).unwrap();
        let h = graded_local_cohomology(&m, &[r.parse("x").unwrap()], &Window::cube(1, -3, 1)).unwrap();
        assert!(h[0].is_empty());
        let degs: Vec<i64> = h[1].keys().map(|a| a[0]).collect();
        assert_eq!(degs, vec![-3, -2, -1]);
    }

    #[test]
    fn slice_rule_matches_brute_force() {
        let r = parse_poly_ring("Q[x,y]").unwrap();
        let m = MonomialQuotient::new(&r, &[r.parse("x^2*y").unwrap(), r.parse("y^3").unwrap()]).unwrap();
        for a in Window::cube(2, -3, 4).points() {
            for inv in [[false, false], [true, false], [false, true], [true, true]] {
                assert_eq!(m.slice_nonzero(&a, &inv), m.slice_nonzero_brute(&a, &inv, 12), "{a:?} {inv:?}");
            }
        }
    }

    #[test]
    fn torsion_quotient() {
        // S/(x^2) is x-torsion: H^0 = S/(x^2) in degrees 0, 1 and H^1 = 0.
        let r = parse_poly_ring("Q[x]").unwrap();
        let m = MonomialQuotient::new(&r, &[r.parse("x^2").unwrap()]).unwrap();
        let h = graded_local_cohomology(&m, &[r.parse("x").unwrap()], &Window::cube(1, -2, 3)).unwrap();
        assert_eq!(h[0].keys().map(|a| a[0]).collect::<Vec<_>>(), vec![0, 1]);
        assert!(h[1].is_empty());
    }
}
