//! Sparse multivariate polynomials with exact coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

pub type Monomial = Vec<u32>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Grevlex,
    Lex,
    /// Eliminates the first `k` variables: compares their total degree first,
    /// then falls back to grevlex on all variables.
    Elim(usize),
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Grevlex => grevlex(a, b),
            MonomialOrder::Elim(k) => {
                let da: u32 = a[..*k].iter().sum();
                let db: u32 = b[..*k].iter().sum();
                da.cmp(&db).then_with(|| grevlex(a, b))
            }
        }
    }
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

/// Variable names, coefficient field and monomial order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    pub vars: Vec<String>,
    pub field: Field,
    pub order: MonomialOrder,
}

impl PolyRing {
    pub fn new(vars: &[&str], field: Field) -> Arc<PolyRing> {
        Arc::new(PolyRing {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            field,
            order: MonomialOrder::Grevlex,
        })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn with_order(&self, order: MonomialOrder) -> Arc<PolyRing> {
        Arc::new(PolyRing {
            order,
            ..self.clone()
        })
    }

    /// Adds fresh variables in front, returning the new ring. Names starting with
    /// an underscore never collide with parsed variables.
    pub fn prepend_vars(&self, names: &[&str], order: MonomialOrder) -> Arc<PolyRing> {
        let mut vars: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        vars.extend(self.vars.iter().cloned());
        Arc::new(PolyRing {
            vars,
            field: self.field.clone(),
            order,
        })
    }

    pub fn spec(&self) -> String {
        format!("{}[{}]", self.field.name(), self.vars.join(","))
    }

    pub fn zero(self: &Arc<Self>) -> Polynomial {
        Polynomial {
            ring: self.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(self: &Arc<Self>, c: Scalar) -> Polynomial {
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![(vec![0; self.nvars()], c)]
        };
        Polynomial {
            ring: self.clone(),
            terms,
        }
    }

    pub fn one(self: &Arc<Self>) -> Polynomial {
        self.constant(self.field.one())
    }

    pub fn var(self: &Arc<Self>, i: usize) -> Polynomial {
        let mut m = vec![0; self.nvars()];
        m[i] = 1;
        self.monomial(m, self.field.one())
    }

    pub fn monomial(self: &Arc<Self>, m: Monomial, c: Scalar) -> Polynomial {
        assert_eq!(m.len(), self.nvars());
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        Polynomial {
            ring: self.clone(),
            terms,
        }
    }

    pub fn parse(self: &Arc<Self>, s: &str) -> Result<Polynomial> {
        super::parse::parse_poly(self, s)
    }
}

#[derive(Clone, Debug)]
pub struct Polynomial {
    pub ring: Arc<PolyRing>,
    /// Sorted strictly descending under the ring's order, no zero coefficients.
    pub terms: Vec<(Monomial, Scalar)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}
impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state)
    }
}

pub fn monomial_divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn monomial_lcm(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn monomial_mul(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn monomial_div(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

impl Polynomial {
    pub fn from_terms(ring: &Arc<PolyRing>, mut terms: Vec<(Monomial, Scalar)>) -> Polynomial {
        let order = ring.order;
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, Scalar)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = lc.add(&c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Polynomial {
            ring: ring.clone(),
            terms: out,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.iter().all(|&e| e == 0)
    }

    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &Scalar {
        &self.terms[0].1
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    fn check_ring(&self, other: &Polynomial) {
        assert!(
            self.ring.vars == other.ring.vars && self.ring.field == other.ring.field,
            "polynomials from different rings"
        );
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.check_ring(other);
        let order = self.ring.order;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (a, b) = (&self.terms[i], &other.terms[j]);
            match order.cmp(&a.0, &b.0) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b.clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = a.1.add(&b.1);
                    if !c.is_zero() {
                        out.push((a.0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Polynomial {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return self.ring.zero();
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d.mul(c))).collect(),
        }
    }

    /// Multiplies by `c * x^m`; the order is preserved so no sort is needed.
    pub fn mul_term(&self, m: &[u32], c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return self.ring.zero();
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(n, d)| (monomial_mul(n, m), d.mul(c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.check_ring(other);
        let mut acc = self.ring.zero();
        for (m, c) in &other.terms {
            acc = acc.add(&self.mul_term(m, c));
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut r = self.ring.one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn monic(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().inv())
    }

    /// Re-expresses the polynomial in a ring with the same variables but a
    /// different order.
    pub fn reorder(&self, ring: &Arc<PolyRing>) -> Polynomial {
        assert_eq!(self.ring.vars, ring.vars);
        Polynomial::from_terms(ring, self.terms.clone())
    }

    /// Maps variable `i` of `self.ring` to variable `map[i]` of `ring`.
    pub fn embed(&self, ring: &Arc<PolyRing>, map: &[usize]) -> Polynomial {
        let n = ring.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0; n];
                for (i, &x) in m.iter().enumerate() {
                    e[map[i]] += x;
                }
                (e, c.clone())
            })
            .collect();
        Polynomial::from_terms(ring, terms)
    }

    /// Substitutes polynomials (all in one target ring) for the variables.
    pub fn substitute(&self, images: &[Polynomial], target: &Arc<PolyRing>) -> Polynomial {
        assert_eq!(images.len(), self.ring.nvars());
        let mut acc = target.zero();
        for (m, c) in &self.terms {
            let mut t = target.constant(c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&images[i].pow(e));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Exact division by `d`; `None` if the remainder is nonzero.
    pub fn exact_div(&self, d: &Polynomial) -> Option<Polynomial> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut q = self.ring.zero();
        while !rem.is_zero() {
            if !monomial_divides(d.lm(), rem.lm()) {
                return None;
            }
            let m = monomial_div(rem.lm(), d.lm());
            let c = rem.lc().div(d.lc());
            q = q.add(&self.ring.monomial(m.clone(), c.clone()));
            rem = rem.sub(&d.mul_term(&m, &c));
        }
        Some(q)
    }

    /// True if no variable outside `keep` occurs.
    pub fn only_uses(&self, keep: impl Fn(usize) -> bool) -> bool {
        self.terms
            .iter()
            .all(|(m, _)| m.iter().enumerate().all(|(i, &e)| e == 0 || keep(i)))
    }

    /// Support of the leading monomial of a monomial; used for graded slices.
    pub fn monomial_support(&self) -> Vec<usize> {
        assert!(self.is_monomial());
        self.lm()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
            .collect()
    }
}

pub(crate) fn spoly(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let l = monomial_lcm(f.lm(), g.lm());
    let a = f.mul_term(&monomial_div(&l, f.lm()), &f.lc().inv());
    let b = g.mul_term(&monomial_div(&l, g.lm()), &g.lc().inv());
    a.sub(&b)
}

pub(crate) fn ensure_same_ring(a: &PolyRing, b: &PolyRing) -> Result<()> {
    if a.vars != b.vars || a.field != b.field {
        return Err(Error::RingMismatch(format!("{} vs {}", a.spec(), b.spec())));
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { c.neg() } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let factors: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        self.ring.vars[i].clone()
                    } else {
                        format!("{}^{}", self.ring.vars[i], e)
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{abs}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_ordering() {
        let o = MonomialOrder::Grevlex;
        // x^2 > xy > y^2 > x > y
        assert_eq!(o.cmp(&[2, 0], &[1, 1]), Ordering::Greater);
        assert_eq!(o.cmp(&[1, 1], &[0, 2]), Ordering::Greater);
        assert_eq!(o.cmp(&[0, 2], &[1, 0]), Ordering::Greater);
        assert_eq!(o.cmp(&[1, 0], &[0, 1]), Ordering::Greater);
        // x*z^2 < y^3 in grevlex
        assert_eq!(o.cmp(&[1, 0, 2], &[0, 3, 0]), Ordering::Less);
    }

    #[test]
    fn printing_is_canonical() {
        let r = PolyRing::new(&["x", "y"], Field::Rational);
        let p = r.parse("-3/2*y + x^2*y").unwrap();
        assert_eq!(p.to_string(), "x^2*y - 3/2*y");
        assert_eq!(r.parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn exact_division() {
        let r = PolyRing::new(&["x", "y"], Field::Rational);
        let f = r.parse("x^2 - y^2").unwrap();
        let g = r.parse("x + y").unwrap();
        assert_eq!(f.exact_div(&g).unwrap(), r.parse("x - y").unwrap());
        assert!(r.parse("x^2 + 1").unwrap().exact_div(&g).is_none());
    }
}
