//! Explicit finite commutative rings.
//!
//! A ring is stored as a finite abelian group `⊕ Z/m_i` (an additive basis
//! `b_i` with moduli `m_i`) together with structure constants for `b_i b_j`.
//! Elements are indexed in mixed radix with coordinate 0 most significant.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::exact::parse::is_prime;
use crate::exact::poly::PolyRing;
use crate::exact::scalar::Field;
use crate::linalg::{lcm, modp, Mat};

pub const DEFAULT_MAX_RING_SIZE: u64 = 4096;
const TABLE_LIMIT: usize = 1024;
const EXHAUSTIVE_AXIOM_LIMIT: usize = 128;

pub fn max_ring_size() -> u64 {
    std::env::var("TORSOR_MAX_RING_SIZE")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_RING_SIZE)
}

/// How elements of a ring are named, mirroring the ring description.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Shape {
    /// `Z/n`, one basis element.
    Cyclic(i64),
    /// `(Z/n)[x]/(f)` with `f` monic of degree `d`; basis `1, x, …, x^{d-1}`.
    Quotient { n: i64, modulus: Vec<i64> },
    /// Product of factors, each occupying a contiguous block of the basis.
    Product(Vec<(Shape, usize)>),
}

impl Shape {
    fn dim(&self) -> usize {
        match self {
            Shape::Cyclic(_) => 1,
            Shape::Quotient { modulus, .. } => modulus.len() - 1,
            Shape::Product(parts) => parts.iter().map(|(s, _)| s.dim()).sum(),
        }
    }
}

/// A maximal ideal of a finite ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prime {
    /// Sorted element indices.
    pub members: Vec<usize>,
    /// Canonical generator list: greedily the smallest missing member.
    pub generators: Vec<usize>,
    /// The local idempotent `e` with `p = {x : ex is not a unit of eS}`.
    pub idempotent: usize,
}

pub struct FiniteRing {
    pub spec: String,
    /// Additive order of 1; every module over the ring is a `Z/n`-module.
    pub characteristic: i64,
    pub moduli: Vec<i64>,
    /// `basis_mul[i]` is multiplication by `b_i` on coordinates.
    basis_mul: Vec<Mat>,
    one_coords: Vec<i64>,
    size: usize,
    shape: Shape,
    mul_table: Option<Vec<u16>>,
    add_table: Option<Vec<u16>>,
    idempotents: Vec<usize>,
    local_idempotents: Vec<usize>,
    primes: Vec<Prime>,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRing({})", self.spec)
    }
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

fn split_top_level(s: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if depth == 0 && (c == '×' || c == '*') {
            parts.push(cur.trim().to_string());
            cur.clear();
        } else {
            cur.push(c);
        }
    }
    parts.push(cur.trim().to_string());
    parts
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut k = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

/// Coefficients low-to-high of `a mod b` over `Z/p`, `b` monic.
fn poly_rem(a: &[i64], b: &[i64], p: i64) -> Vec<i64> {
    let mut r: Vec<i64> = a.iter().map(|c| modp(*c, p)).collect();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        for (i, &c) in b.iter().enumerate() {
            r[shift + i] = modp(r[shift + i] - lead * c, p);
        }
        r.pop();
    }
    r
}

fn is_irreducible(f: &[i64], p: i64) -> bool {
    let d = f.len() - 1;
    for deg in 1..=d / 2 {
        let count = (p as usize).pow(deg as u32);
        for v in 0..count {
            let mut g = Vec::with_capacity(deg + 1);
            let mut x = v;
            for _ in 0..deg {
                g.push((x % p as usize) as i64);
                x /= p as usize;
            }
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// First monic irreducible of degree `k` over `F_p`, ordered by coefficient
/// value `c_0 + c_1 p + …`.
fn first_irreducible(p: i64, k: u32) -> Vec<i64> {
    let count = (p as usize).pow(k);
    for v in 0..count {
        let mut f = Vec::with_capacity(k as usize + 1);
        let mut x = v;
        for _ in 0..k {
            f.push((x % p as usize) as i64);
            x /= p as usize;
        }
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn parse_factor(s: &str) -> Result<Shape> {
    if let Some(rest) = s.strip_prefix("Z/") {
        if let Some(pos) = rest.find('[') {
            let n: i64 = rest[..pos]
                .trim()
                .parse()
                .map_err(|_| invalid(format!("bad modulus in {s}")))?;
            return parse_quotient(n, &rest[pos..], s);
        }
        let n: i64 = rest
            .trim()
            .parse()
            .map_err(|_| invalid(format!("bad modulus in {s}")))?;
        if n < 2 {
            return Err(Error::NotARing(format!("{s}: modulus must be at least 2")));
        }
        return Ok(Shape::Cyclic(n));
    }
    if let Some(rest) = s.strip_prefix('F') {
        if let Some(pos) = rest.find('[') {
            let p: i64 = rest[..pos]
                .parse()
                .map_err(|_| invalid(format!("bad field in {s}")))?;
            if !is_prime(p as u64) {
                return Err(invalid(format!("{s}: F{p} with a variable needs p prime")));
            }
            return parse_quotient(p, &rest[pos..], s);
        }
        let q: u64 = rest.parse().map_err(|_| invalid(format!("bad field {s}")))?;
        let (p, k) = prime_power(q).ok_or_else(|| invalid(format!("{s}: q must be a prime power")))?;
        if k == 1 {
            return Ok(Shape::Cyclic(p as i64));
        }
        return Ok(Shape::Quotient {
            n: p as i64,
            modulus: first_irreducible(p as i64, k),
        });
    }
    Err(invalid(format!("unrecognized ring description '{s}'")))
}

fn parse_quotient(n: i64, rest: &str, whole: &str) -> Result<Shape> {
    let rest = rest.trim();
    let body = rest
        .strip_prefix("[x]/(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| invalid(format!("expected [x]/(f) in {whole}")))?;
    let qx = PolyRing::new(&["x"], Field::Rational);
    let f = qx.parse(body)?;
    let mut coeffs = vec![0i64; f.total_degree() as usize + 1];
    for (m, c) in &f.terms {
        let num = match c {
            crate::exact::scalar::Scalar::Q(q) if q.denom() == &1.into() => {
                let r = q.numer() % num_bigint::BigInt::from(n);
                i64::try_from(r).expect("small")
            }
            _ => return Err(invalid(format!("{whole}: coefficients must be integers"))),
        };
        coeffs[m[0] as usize] = modp(num, n);
    }
    while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
        coeffs.pop();
    }
    let lead = *coeffs.last().unwrap();
    if coeffs.len() < 2 {
        return Err(Error::NotARing(format!(
            "{whole}: the relation leaves no finite nonzero ring"
        )));
    }
    let inv = crate::linalg::inv_mod(lead, n).ok_or_else(|| {
        Error::NotARing(format!("{whole}: leading coefficient must be a unit"))
    })?;
    let monic: Vec<i64> = coeffs.iter().map(|c| modp(c * inv, n)).collect();
    Ok(Shape::Quotient { n, modulus: monic })
}

/// Additive moduli and structure constants of a shape.
fn structure(shape: &Shape) -> (Vec<i64>, Vec<Vec<Vec<i64>>>, Vec<i64>) {
    match shape {
        Shape::Cyclic(n) => (vec![*n], vec![vec![vec![1]]], vec![1]),
        Shape::Quotient { n, modulus } => {
            let d = modulus.len() - 1;
            let mut mult = vec![vec![vec![0; d]; d]; d];
            for (i, row) in mult.iter_mut().enumerate() {
                for (j, entry) in row.iter_mut().enumerate() {
                    let mut a = vec![0; i + j + 1];
                    a[i + j] = 1;
                    let r = poly_rem(&a, modulus, *n);
                    for (k, c) in r.iter().enumerate() {
                        entry[k] = *c;
                    }
                }
            }
            let mut one = vec![0; d];
            one[0] = 1;
            (vec![*n; d], mult, one)
        }
        Shape::Product(parts) => {
            let d = shape.dim();
            let mut moduli = Vec::new();
            let mut mult = vec![vec![vec![0; d]; d]; d];
            let mut one = Vec::new();
            for (s, off) in parts {
                let (m, t, o) = structure(s);
                moduli.extend(m);
                one.extend(o);
                let k = s.dim();
                for i in 0..k {
                    for j in 0..k {
                        for (l, c) in t[i][j].iter().enumerate() {
                            mult[off + i][off + j][off + l] = *c;
                        }
                    }
                }
            }
            (moduli, mult, one)
        }
    }
}

impl FiniteRing {
    pub fn build(spec: &str) -> Result<Arc<FiniteRing>> {
        Self::build_bounded(spec, max_ring_size())
    }

    pub fn build_bounded(spec: &str, bound: u64) -> Result<Arc<FiniteRing>> {
        let parts = split_top_level(spec.trim());
        let shape = if parts.len() == 1 {
            parse_factor(&parts[0])?
        } else {
            let mut off = 0;
            let mut v = Vec::new();
            for p in &parts {
                let s = parse_factor(p)?;
                let d = s.dim();
                v.push((s, off));
                off += d;
            }
            Shape::Product(v)
        };
        let (moduli, mult, one) = structure(&shape);
        let mut size: u64 = 1;
        for &m in &moduli {
            size = size.saturating_mul(m as u64);
            if size > bound {
                return Err(Error::TooLarge {
                    size: moduli.iter().fold(1u64, |a, &m| a.saturating_mul(m as u64)),
                    bound,
                });
            }
        }
        let canonical = canonical_spec(&shape);
        Self::from_structure(canonical, shape, moduli, mult, one)
    }

    fn from_structure(
        spec: String,
        shape: Shape,
        moduli: Vec<i64>,
        mult: Vec<Vec<Vec<i64>>>,
        one: Vec<i64>,
    ) -> Result<Arc<FiniteRing>> {
        let d = moduli.len();
        let characteristic = moduli.iter().fold(1, |a, &m| lcm(a, m));
        let mut basis_mul = Vec::with_capacity(d);
        for row in mult.iter() {
            let cols: Vec<Vec<i64>> = row.to_vec();
            let mut m = Mat::from_columns(d, &cols);
            m.reduce_rows(&moduli);
            basis_mul.push(m);
        }
        let size = moduli.iter().product::<i64>() as usize;
        let mut ring = FiniteRing {
            spec,
            characteristic,
            moduli,
            basis_mul,
            one_coords: one,
            size,
            shape,
            mul_table: None,
            add_table: None,
            idempotents: Vec::new(),
            local_idempotents: Vec::new(),
            primes: Vec::new(),
        };
        ring.verify_basis_axioms()?;
        if size <= TABLE_LIMIT {
            ring.build_tables();
        }
        if size <= EXHAUSTIVE_AXIOM_LIMIT {
            ring.verify_exhaustive()?;
        }
        ring.find_idempotents()?;
        ring.find_primes();
        Ok(Arc::new(ring))
    }

    fn verify_basis_axioms(&self) -> Result<()> {
        let d = self.dim();
        let bad = |msg: String| Err(Error::NotARing(format!("{}: {msg}", self.spec)));
        for i in 0..d {
            let bi = self.basis_vec(i);
            for j in 0..d {
                let col = self.basis_mul[i].column(j);
                if col.iter().zip(&self.moduli).any(|(c, m)| modp(c * self.moduli[i], *m) != 0) {
                    return bad(format!("b{i}*b{j} is not killed by the order of b{i}"));
                }
                if self.mul_coords(&bi, &self.basis_vec(j)) != self.mul_coords(&self.basis_vec(j), &bi)
                {
                    return bad(format!("b{i}*b{j} != b{j}*b{i}"));
                }
                for k in 0..d {
                    let bj = self.basis_vec(j);
                    let bk = self.basis_vec(k);
                    let left = self.mul_coords(&self.mul_coords(&bi, &bj), &bk);
                    let right = self.mul_coords(&bi, &self.mul_coords(&bj, &bk));
                    if left != right {
                        return bad(format!("associativity fails on b{i}, b{j}, b{k}"));
                    }
                }
            }
            if self.mul_coords(&self.one_coords, &bi) != bi {
                return bad(format!("1*b{i} != b{i}"));
            }
        }
        Ok(())
    }

    fn verify_exhaustive(&self) -> Result<()> {
        let n = self.size;
        for a in 0..n {
            if self.mul(self.one(), a) != a {
                return Err(Error::NotARing(format!("{}: 1 is not neutral", self.spec)));
            }
            for b in 0..n {
                if self.mul(a, b) != self.mul(b, a) {
                    return Err(Error::NotARing(format!("{}: not commutative", self.spec)));
                }
                for c in 0..n {
                    let ab = self.mul(a, b);
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c))
                        || self.mul(a, self.add(b, c)) != self.add(ab, self.mul(a, c))
                    {
                        return Err(Error::NotARing(format!(
                            "{}: axioms fail on ({a}, {b}, {c})",
                            self.spec
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn build_tables(&mut self) {
        let n = self.size;
        let mut mt = vec![0u16; n * n];
        let mut at = vec![0u16; n * n];
        let coords: Vec<Vec<i64>> = (0..n).map(|i| self.coords(i)).collect();
        for a in 0..n {
            for b in a..n {
                let m = self.index(&self.mul_coords(&coords[a], &coords[b])) as u16;
                let s: Vec<i64> = coords[a]
                    .iter()
                    .zip(&coords[b])
                    .zip(&self.moduli)
                    .map(|((x, y), m)| (x + y) % m)
                    .collect();
                let s = self.index(&s) as u16;
                mt[a * n + b] = m;
                mt[b * n + a] = m;
                at[a * n + b] = s;
                at[b * n + a] = s;
            }
        }
        self.mul_table = Some(mt);
        self.add_table = Some(at);
    }

    fn find_idempotents(&mut self) -> Result<()> {
        self.idempotents = (0..self.size).filter(|&e| self.mul(e, e) == e).collect();
        let nonzero: Vec<usize> = self.idempotents.iter().copied().filter(|&e| e != 0).collect();
        self.local_idempotents = nonzero
            .iter()
            .copied()
            .filter(|&e| {
                !nonzero
                    .iter()
                    .any(|&f| f != e && self.mul(f, e) == f)
            })
            .collect();
        let mut sum = self.zero();
        for (k, &e) in self.local_idempotents.iter().enumerate() {
            sum = self.add(sum, e);
            for &f in &self.local_idempotents[k + 1..] {
                if self.mul(e, f) != 0 {
                    return Err(Error::NotARing(format!("{}: primitive idempotents not orthogonal", self.spec)));
                }
            }
        }
        if sum != self.one() {
            return Err(Error::NotARing(format!(
                "{}: primitive idempotents do not sum to 1",
                self.spec
            )));
        }
        Ok(())
    }

    fn find_primes(&mut self) {
        let mut primes = Vec::new();
        for &e in &self.local_idempotents {
            let members: Vec<usize> = (0..self.size)
                .filter(|&x| self.is_nilpotent(self.mul(e, x)))
                .collect();
            let generators = self.canonical_generators(&members);
            primes.push(Prime {
                members,
                generators,
                idempotent: e,
            });
        }
        primes.sort_by(|a, b| a.generators.cmp(&b.generators).then(a.idempotent.cmp(&b.idempotent)));
        self.primes = primes;
    }

    /// Greedy generator list of an ideal given by its members.
    pub fn canonical_generators(&self, members: &[usize]) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut cur: BTreeSet<usize> = BTreeSet::from([0]);
        for &x in members {
            if cur.len() == members.len() {
                break;
            }
            if !cur.contains(&x) {
                gens.push(x);
                cur = self.ideal_generated(&gens).into_iter().collect();
            }
        }
        gens
    }

    fn is_nilpotent(&self, x: usize) -> bool {
        let mut y = x;
        let mut steps = 1usize;
        while steps <= self.size {
            if y == 0 {
                return true;
            }
            y = self.mul(y, y);
            steps *= 2;
        }
        y == 0
    }

    pub fn dim(&self) -> usize {
        self.moduli.len()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn one(&self) -> usize {
        self.index(&self.one_coords)
    }

    pub fn one_coords(&self) -> &[i64] {
        &self.one_coords
    }

    pub fn basis_vec(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }

    pub fn basis_element(&self, i: usize) -> usize {
        self.index(&self.basis_vec(i))
    }

    /// Multiplication by `b_i` on coordinates.
    pub fn basis_action(&self, i: usize) -> &Mat {
        &self.basis_mul[i]
    }

    pub fn coords(&self, mut idx: usize) -> Vec<i64> {
        let mut c = vec![0i64; self.dim()];
        for k in (0..self.dim()).rev() {
            let m = self.moduli[k] as usize;
            c[k] = (idx % m) as i64;
            idx /= m;
        }
        c
    }

    pub fn index(&self, coords: &[i64]) -> usize {
        let mut idx = 0usize;
        for (k, &c) in coords.iter().enumerate() {
            let m = self.moduli[k];
            idx = idx * m as usize + modp(c, m) as usize;
        }
        idx
    }

    pub fn mul_coords(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.dim()];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            let col = self.basis_mul[i].apply_mod(b, self.characteristic);
            for k in 0..out.len() {
                out[k] += ai * col[k];
            }
        }
        for (k, o) in out.iter_mut().enumerate() {
            *o = modp(*o, self.moduli[k]);
        }
        out
    }

    /// Multiplication by the element with coordinates `a`, as a matrix.
    pub fn mult_matrix_coords(&self, a: &[i64]) -> Mat {
        let d = self.dim();
        let mut m = Mat::zeros(d, d);
        for (i, &ai) in a.iter().enumerate() {
            if ai != 0 {
                m = m.add_mod(&self.basis_mul[i].scale_mod(ai, self.characteristic), self.characteristic);
            }
        }
        m.reduce_rows(&self.moduli);
        m
    }

    pub fn mult_matrix(&self, x: usize) -> Mat {
        self.mult_matrix_coords(&self.coords(x))
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.mul_table {
            Some(t) => t[a * self.size + b] as usize,
            None => self.index(&self.mul_coords(&self.coords(a), &self.coords(b))),
        }
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        match &self.add_table {
            Some(t) => t[a * self.size + b] as usize,
            None => {
                let s: Vec<i64> = self
                    .coords(a)
                    .iter()
                    .zip(self.coords(b))
                    .map(|(x, y)| x + y)
                    .collect();
                self.index(&s)
            }
        }
    }

    pub fn neg(&self, a: usize) -> usize {
        let c: Vec<i64> = self.coords(a).iter().map(|x| -x).collect();
        self.index(&c)
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn scalar(&self, k: i64) -> usize {
        let c: Vec<i64> = self.one_coords.iter().map(|x| x * k).collect();
        self.index(&c)
    }

    pub fn pow(&self, a: usize, e: usize) -> usize {
        let mut r = self.one();
        for _ in 0..e {
            r = self.mul(r, a);
        }
        r
    }

    pub fn is_unit(&self, a: usize) -> bool {
        self.primes.iter().all(|p| p.members.binary_search(&a).is_err())
    }

    pub fn idempotents(&self) -> &[usize] {
        &self.idempotents
    }

    pub fn local_idempotents(&self) -> &[usize] {
        &self.local_idempotents
    }

    pub fn primes(&self) -> &[Prime] {
        &self.primes
    }

    pub fn num_primes(&self) -> usize {
        self.primes.len()
    }

    /// Indices of primes containing `x`.
    pub fn primes_containing(&self, x: usize) -> Vec<usize> {
        (0..self.primes.len())
            .filter(|&k| self.primes[k].members.binary_search(&x).is_ok())
            .collect()
    }

    /// Sorted members of the ideal generated by `gens`.
    pub fn ideal_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut span: Vec<usize> = Vec::new();
        for &g in gens {
            for i in 0..self.dim() {
                let v = self.mul(g, self.basis_element(i));
                if v != 0 {
                    span.push(v);
                }
            }
        }
        let mut seen = vec![false; self.size];
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(x) = stack.pop() {
            for &s in &span {
                let y = self.add(x, s);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..self.size).filter(|&x| seen[x]).collect()
    }

    /// The idempotent `e_t` with `t^k S = e_t S` for large `k`; `M[1/t] = e_t M`.
    pub fn idempotent_power(&self, t: usize) -> usize {
        let u = self.pow(t, self.size);
        let mut x = u;
        for _ in 0..=self.size {
            if self.mul(x, x) == x {
                return x;
            }
            x = self.mul(x, u);
        }
        unreachable!("some power of an element of a finite ring is idempotent")
    }

    /// Prime indices in the complement of `t`'s zero set: `{p : t ∉ p}`.
    pub fn open_set(&self, t: usize) -> Vec<usize> {
        (0..self.primes.len())
            .filter(|&k| self.primes[k].members.binary_search(&t).is_err())
            .collect()
    }

    /// Sum of the local idempotents of the listed primes.
    pub fn idempotent_of_primes(&self, primes: &[usize]) -> usize {
        primes
            .iter()
            .fold(self.zero(), |acc, &k| self.add(acc, self.primes[k].idempotent))
    }

    pub fn name(&self, x: usize) -> String {
        name_coords(&self.shape, &self.coords(x))
    }

    pub fn prime_name(&self, k: usize) -> String {
        let g: Vec<String> = self.primes[k].generators.iter().map(|&x| self.name(x)).collect();
        if g.is_empty() {
            "(0)".into()
        } else {
            format!("({})", g.join(", "))
        }
    }

    pub fn parse_element(&self, s: &str) -> Result<usize> {
        let c = parse_coords(&self.shape, s.trim())?;
        Ok(self.index(&c))
    }

    /// Looks up a prime by printed name or by any of its generators.
    pub fn parse_prime(&self, s: &str) -> Result<usize> {
        let s = s.trim();
        if let Some(k) = (0..self.primes.len()).find(|&k| self.prime_name(k) == s) {
            return Ok(k);
        }
        let inner = s.trim_start_matches('(').trim_end_matches(')');
        let gens: Vec<usize> = split_commas(inner)
            .iter()
            .map(|g| self.parse_element(g))
            .collect::<Result<_>>()?;
        let members = self.ideal_generated(&gens);
        (0..self.primes.len())
            .find(|&k| self.primes[k].members == members)
            .ok_or_else(|| invalid(format!("{s} is not a prime of {}", self.spec)))
    }
}

fn split_commas(s: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if c == ',' && depth == 0 {
            parts.push(cur.trim().to_string());
            cur.clear();
        } else {
            cur.push(c);
        }
    }
    if !cur.trim().is_empty() {
        parts.push(cur.trim().to_string());
    }
    parts
}

fn canonical_spec(shape: &Shape) -> String {
    match shape {
        Shape::Cyclic(n) => format!("Z/{n}"),
        Shape::Quotient { n, modulus } => {
            let qx = PolyRing::new(&["x"], Field::Rational);
            let terms = modulus
                .iter()
                .enumerate()
                .map(|(k, &c)| (vec![k as u32], Field::Rational.from_i64(c)))
                .collect();
            let f = crate::exact::poly::Polynomial::from_terms(&qx, terms);
            if is_prime(*n as u64) {
                format!("F{n}[x]/({f})")
            } else {
                format!("Z/{n}[x]/({f})")
            }
        }
        Shape::Product(parts) => parts
            .iter()
            .map(|(s, _)| canonical_spec(s))
            .collect::<Vec<_>>()
            .join("×"),
    }
}

fn name_coords(shape: &Shape, c: &[i64]) -> String {
    match shape {
        Shape::Cyclic(_) => c[0].to_string(),
        Shape::Quotient { .. } => {
            let mut terms = Vec::new();
            for k in (0..c.len()).rev() {
                let a = c[k];
                if a == 0 {
                    continue;
                }
                let mono = match k {
                    0 => String::new(),
                    1 => "x".to_string(),
                    _ => format!("x^{k}"),
                };
                terms.push(if mono.is_empty() {
                    a.to_string()
                } else if a == 1 {
                    mono
                } else {
                    format!("{a}*{mono}")
                });
            }
            if terms.is_empty() {
                "0".into()
            } else {
                terms.join(" + ")
            }
        }
        Shape::Product(parts) => {
            let names: Vec<String> = parts
                .iter()
                .map(|(s, off)| name_coords(s, &c[*off..off + s.dim()]))
                .collect();
            format!("({})", names.join(","))
        }
    }
}

fn parse_coords(shape: &Shape, s: &str) -> Result<Vec<i64>> {
    match shape {
        Shape::Cyclic(n) => {
            let qx = PolyRing::new(&[], Field::Rational);
            let p = qx.parse(s)?;
            Ok(vec![modp(constant_value(&p, *n, s)?, *n)])
        }
        Shape::Quotient { n, modulus } => {
            let qx = PolyRing::new(&["x"], Field::Rational);
            let p = qx.parse(s)?;
            let mut coeffs = vec![0i64; p.total_degree() as usize + 1];
            for (m, c) in &p.terms {
                let single = qx.constant(c.clone());
                coeffs[m[0] as usize] = constant_value(&single, *n, s)?;
            }
            let r = poly_rem(&coeffs, modulus, *n);
            let mut out = vec![0; modulus.len() - 1];
            for (k, v) in r.iter().enumerate() {
                out[k] = *v;
            }
            Ok(out)
        }
        Shape::Product(parts) => {
            let inner = s.strip_prefix('(').and_then(|r| r.strip_suffix(')'));
            match inner {
                Some(inner) if split_commas(inner).len() == parts.len() => {
                    let mut out = Vec::new();
                    for ((sh, _), piece) in parts.iter().zip(split_commas(inner)) {
                        out.extend(parse_coords(sh, &piece)?);
                    }
                    Ok(out)
                }
                _ => {
                    // a bare integer k means k·1
                    let mut out = Vec::new();
                    for (sh, _) in parts {
                        out.extend(parse_coords(sh, s)?);
                    }
                    Ok(out)
                }
            }
        }
    }
}

fn constant_value(p: &crate::exact::poly::Polynomial, n: i64, src: &str) -> Result<i64> {
    if p.is_zero() {
        return Ok(0);
    }
    if !(p.is_constant()) {
        return Err(invalid(format!("'{src}' is not an integer")));
    }
    match p.lc() {
        crate::exact::scalar::Scalar::Q(q) => {
            let num = q.numer() % num_bigint::BigInt::from(n);
            let num = i64::try_from(num).expect("small");
            let den = q.denom() % num_bigint::BigInt::from(n);
            let den = i64::try_from(den).expect("small");
            let inv = crate::linalg::inv_mod(den, n)
                .ok_or_else(|| invalid(format!("'{src}': denominator not invertible mod {n}")))?;
            Ok(modp(num * inv, n))
        }
        _ => unreachable!("parsed over Q"),
    }
}

/// A ring map between finite rings, given by the images of the source's
/// additive basis.
#[derive(Clone)]
pub struct RingMap {
    pub source: Arc<FiniteRing>,
    pub target: Arc<FiniteRing>,
    basis_images: Vec<usize>,
    table: Vec<usize>,
}

impl fmt::Debug for RingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingMap({} -> {}: {:?})", self.source.spec, self.target.spec, self.basis_images)
    }
}

impl RingMap {
    /// Builds and exhaustively verifies a unital ring homomorphism.
    pub fn new(
        source: &Arc<FiniteRing>,
        target: &Arc<FiniteRing>,
        basis_images: Vec<usize>,
    ) -> Result<RingMap> {
        assert_eq!(basis_images.len(), source.dim());
        let t = target;
        for (i, &img) in basis_images.iter().enumerate() {
            let c: Vec<i64> = t.coords(img).iter().map(|x| x * source.moduli[i]).collect();
            if t.index(&c) != 0 {
                return Err(Error::NotAHomomorphism(format!(
                    "order of basis element {i} does not kill its image"
                )));
            }
        }
        let table: Vec<usize> = (0..source.size())
            .map(|x| {
                source
                    .coords(x)
                    .iter()
                    .zip(&basis_images)
                    .fold(t.zero(), |acc, (&c, &img)| {
                        let scaled: Vec<i64> = t.coords(img).iter().map(|v| v * c).collect();
                        t.add(acc, t.index(&scaled))
                    })
            })
            .collect();
        let map = RingMap {
            source: source.clone(),
            target: target.clone(),
            basis_images,
            table,
        };
        map.verify()?;
        Ok(map)
    }

    /// Builds from an explicit element table (checked exhaustively).
    pub fn from_table(source: &Arc<FiniteRing>, target: &Arc<FiniteRing>, table: Vec<usize>) -> Result<RingMap> {
        let images = (0..source.dim()).map(|i| table[source.basis_element(i)]).collect();
        let map = RingMap::new(source, target, images)?;
        if map.table != table {
            return Err(Error::NotAHomomorphism("map is not additive".into()));
        }
        Ok(map)
    }

    fn verify(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        if self.apply(s.one()) != t.one() {
            return Err(Error::NotAHomomorphism("1 does not map to 1".into()));
        }
        for a in 0..s.size() {
            for b in a..s.size() {
                if self.apply(s.mul(a, b)) != t.mul(self.apply(a), self.apply(b)) {
                    return Err(Error::NotAHomomorphism(format!(
                        "not multiplicative on ({}, {})",
                        s.name(a),
                        s.name(b)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn identity(ring: &Arc<FiniteRing>) -> RingMap {
        let images = (0..ring.dim()).map(|i| ring.basis_element(i)).collect();
        RingMap::new(ring, ring, images).expect("identity is a homomorphism")
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn basis_images(&self) -> &[usize] {
        &self.basis_images
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &RingMap) -> Result<RingMap> {
        if other.target.spec != self.source.spec {
            return Err(Error::RingMismatch("maps are not composable".into()));
        }
        let images = other.basis_images.iter().map(|&y| self.apply(y)).collect();
        RingMap::new(&other.source, &self.target, images)
    }

    /// Preimage of a prime of the target, as a prime index of the source.
    pub fn pullback_prime(&self, q: usize) -> usize {
        let members = &self.target.primes()[q].members;
        let pre: Vec<usize> = (0..self.source.size())
            .filter(|&x| members.binary_search(&self.apply(x)).is_ok())
            .collect();
        (0..self.source.num_primes())
            .find(|&k| self.source.primes()[k].members == pre)
            .expect("preimage of a maximal ideal of a finite ring is maximal")
    }

    /// Every unital homomorphism between two rings, by exhaustive search.
    pub fn enumerate(source: &Arc<FiniteRing>, target: &Arc<FiniteRing>) -> Vec<RingMap> {
        let d = source.dim();
        let n = target.size();
        let total = n.pow(d as u32);
        let mut out = Vec::new();
        for code in 0..total {
            let mut images = Vec::with_capacity(d);
            let mut c = code;
            for _ in 0..d {
                images.push(c % n);
                c /= n;
            }
            if let Ok(m) = RingMap::new(source, target, images) {
                out.push(m);
            }
        }
        out
    }

    /// Parses `a,b,…` as images of the source's additive basis.
    pub fn parse(source: &Arc<FiniteRing>, target: &Arc<FiniteRing>, s: &str) -> Result<RingMap> {
        let pieces = split_commas_top(s);
        if pieces.len() != source.dim() {
            return Err(invalid(format!(
                "ring map needs {} basis images, got {}",
                source.dim(),
                pieces.len()
            )));
        }
        let images = pieces
            .iter()
            .map(|p| target.parse_element(p))
            .collect::<Result<Vec<_>>>()?;
        RingMap::new(source, target, images)
    }
}

fn split_commas_top(s: &str) -> Vec<String> {
    let s = s.trim();
    let s = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')).unwrap_or(s);
    split_commas(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z6_structure() {
        let r = FiniteRing::build("Z/6").unwrap();
        assert_eq!(r.size(), 6);
        let names: Vec<String> = (0..r.num_primes()).map(|k| r.prime_name(k)).collect();
        assert_eq!(names, vec!["(2)", "(3)"]);
        let mut loc = r.local_idempotents().to_vec();
        loc.sort();
        assert_eq!(loc, vec![3, 4]);
    }

    #[test]
    fn z4_and_f2() {
        let r = FiniteRing::build("Z/4").unwrap();
        assert_eq!(r.idempotents(), &[0, 1]);
        assert_eq!(r.num_primes(), 1);
        assert_eq!(r.prime_name(0), "(2)");
        let f = FiniteRing::build("F2").unwrap();
        assert_eq!(f.size(), 2);
        assert_eq!(f.prime_name(0), "(0)");
    }

    #[test]
    fn f4_is_a_field() {
        let r = FiniteRing::build("F4").unwrap();
        assert_eq!(r.spec, "F2[x]/(x^2 + x + 1)");
        assert_eq!(r.num_primes(), 1);
        assert!((1..4).all(|x| r.is_unit(x)));
        let x = r.parse_element("x").unwrap();
        assert_eq!(r.name(r.mul(x, x)), "x + 1");
    }

    #[test]
    fn products_and_quotients() {
        let r = FiniteRing::build("F2×F4").unwrap();
        assert_eq!(r.size(), 8);
        assert_eq!(r.num_primes(), 2);
        let q = FiniteRing::build("F2[x]/(x^2)").unwrap();
        assert_eq!(q.num_primes(), 1);
        assert_eq!(q.prime_name(0), "(x)");
        let z30 = FiniteRing::build("Z/30").unwrap();
        assert_eq!(z30.num_primes(), 3);
    }

    #[test]
    fn size_bound() {
        assert!(matches!(
            FiniteRing::build_bounded("Z/5000", 4096),
            Err(Error::TooLarge { .. })
        ));
        assert!(FiniteRing::build("Z/1").is_err());
        assert!(FiniteRing::build("F6").is_err());
    }

    #[test]
    fn ring_maps() {
        let z6 = FiniteRing::build("Z/6").unwrap();
        let z3 = FiniteRing::build("Z/3").unwrap();
        let maps = RingMap::enumerate(&z6, &z3);
        assert_eq!(maps.len(), 1);
        assert_eq!(z6.prime_name(maps[0].pullback_prime(0)), "(3)");
        assert!(RingMap::enumerate(&z3, &z6).is_empty());
        let f4 = FiniteRing::build("F4").unwrap();
        assert_eq!(RingMap::enumerate(&f4, &f4).len(), 2);
    }

    #[test]
    fn idempotent_powers() {
        let r = FiniteRing::build("Z/6").unwrap();
        assert_eq!(r.idempotent_power(2), 4);
        assert_eq!(r.idempotent_power(3), 3);
        assert_eq!(r.idempotent_power(1), 1);
        let z4 = FiniteRing::build("Z/4").unwrap();
        assert_eq!(z4.idempotent_power(2), 0);
    }
}
