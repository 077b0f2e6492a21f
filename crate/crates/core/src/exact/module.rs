//! Finite modules over finite rings.
//!
//! A module is a finite abelian group `⊕ Z/m_j` with one action matrix per
//! additive basis element of the ring. Kernels, images, quotients, tensor
//! products and Hom modules all go through [`Subquotient`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use super::finite_ring::FiniteRing;
use crate::error::{Error, Result};
use crate::linalg::{gcd, kernel_into, modp, Mat, Smith};

/// Order of a finite abelian group as a prime factorization.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Order(pub BTreeMap<i64, u32>);

pub fn factorize(mut n: i64) -> BTreeMap<i64, u32> {
    let mut out = BTreeMap::new();
    let mut d = 2;
    while d * d <= n {
        while n % d == 0 {
            *out.entry(d).or_insert(0) += 1;
            n /= d;
        }
        d += 1;
    }
    if n > 1 {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

impl Order {
    pub fn of_moduli(moduli: &[i64]) -> Order {
        let mut o = Order::default();
        for &m in moduli {
            for (p, e) in factorize(m) {
                *o.0.entry(p).or_insert(0) += e;
            }
        }
        o
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pow(&self, k: u32) -> Order {
        Order(
            self.0
                .iter()
                .filter(|_| k > 0)
                .map(|(&p, &e)| (p, e * k))
                .collect(),
        )
    }

    /// The exact value when it fits in a `u64`.
    pub fn value(&self) -> Option<u64> {
        let mut v: u64 = 1;
        for (&p, &e) in &self.0 {
            for _ in 0..e {
                v = v.checked_mul(p as u64)?;
            }
        }
        Some(v)
    }

    /// `log_base(self)` when `self` is an exact power of `base`.
    pub fn log(&self, base: &Order) -> Option<u32> {
        if self.is_one() {
            return Some(0);
        }
        let (p, e) = base.0.iter().next()?;
        let k = self.0.get(p)? / e;
        (base.pow(k) == *self).then_some(k)
    }
}

pub struct FinModule {
    pub ring: Arc<FiniteRing>,
    /// Orders of the coordinate generators; each divides the characteristic.
    pub moduli: Vec<i64>,
    /// `action[i]` is multiplication by the ring's basis element `b_i`.
    pub action: Vec<Mat>,
    projective: OnceLock<bool>,
}

impl Clone for FinModule {
    fn clone(&self) -> Self {
        let projective = OnceLock::new();
        if let Some(&p) = self.projective.get() {
            let _ = projective.set(p);
        }
        FinModule {
            ring: self.ring.clone(),
            moduli: self.moduli.clone(),
            action: self.action.clone(),
            projective,
        }
    }
}

impl fmt::Debug for FinModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinModule{:?} over {}", self.moduli, self.ring.spec)
    }
}

impl FinModule {
    pub fn new(ring: &Arc<FiniteRing>, moduli: Vec<i64>, action: Vec<Mat>) -> Result<FinModule> {
        let m = Self::new_unchecked(ring, moduli, action);
        m.verify()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(ring: &Arc<FiniteRing>, moduli: Vec<i64>, mut action: Vec<Mat>) -> FinModule {
        for a in &mut action {
            a.reduce_rows(&moduli);
        }
        FinModule {
            ring: ring.clone(),
            moduli,
            action,
            projective: OnceLock::new(),
        }
    }

    fn verify(&self) -> Result<()> {
        let ring = &self.ring;
        let n = self.n();
        let bad = |msg: &str| Err(Error::InvalidInput(format!("not a module: {msg}")));
        if self.action.len() != ring.dim() {
            return bad("one action matrix per ring basis element is required");
        }
        for &m in &self.moduli {
            if m < 1 || ring.characteristic % m != 0 {
                return bad("coordinate orders must divide the characteristic");
            }
        }
        for a in &self.action {
            if a.rows() != n || a.cols() != n || !self.is_well_defined_map(self, a) {
                return bad("action matrix is not an endomorphism of the group");
            }
        }
        let one = self.action_of(ring.one_coords());
        if one != self.identity_matrix() {
            return bad("1 does not act as the identity");
        }
        for i in 0..ring.dim() {
            for j in 0..ring.dim() {
                let prod = ring.mul_coords(&ring.basis_vec(i), &ring.basis_vec(j));
                let lhs = self.compose(&self.action[i], &self.action[j]);
                if lhs != self.action_of(&prod) {
                    return bad("action is not multiplicative");
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.moduli.len()
    }

    pub fn characteristic(&self) -> i64 {
        self.ring.characteristic
    }

    pub fn is_zero(&self) -> bool {
        self.moduli.iter().all(|&m| m == 1)
    }

    pub fn order(&self) -> Order {
        Order::of_moduli(&self.moduli)
    }

    pub fn zero(ring: &Arc<FiniteRing>) -> FinModule {
        Self::new_unchecked(ring, Vec::new(), vec![Mat::zeros(0, 0); ring.dim()])
    }

    /// The ring as a module over itself.
    pub fn ring_module(ring: &Arc<FiniteRing>) -> FinModule {
        let action = (0..ring.dim()).map(|i| ring.basis_action(i).clone()).collect();
        let m = Self::new_unchecked(ring, ring.moduli.clone(), action);
        let _ = m.projective.set(true);
        m
    }

    pub fn free(ring: &Arc<FiniteRing>, rank: usize) -> FinModule {
        let s = Self::ring_module(ring);
        let parts: Vec<&FinModule> = std::iter::repeat_n(&s, rank).collect();
        let m = Self::direct_sum(ring, &parts);
        let _ = m.projective.set(true);
        m
    }

    pub fn direct_sum(ring: &Arc<FiniteRing>, parts: &[&FinModule]) -> FinModule {
        let mut moduli = Vec::new();
        let mut action: Vec<Mat> = vec![Mat::zeros(0, 0); ring.dim()];
        for p in parts {
            moduli.extend_from_slice(&p.moduli);
            for (a, b) in action.iter_mut().zip(&p.action) {
                *a = a.block_diag(b);
            }
        }
        Self::new_unchecked(ring, moduli, action)
    }

    pub fn identity_matrix(&self) -> Mat {
        let mut m = Mat::identity(self.n());
        m.reduce_rows(&self.moduli);
        m
    }

    /// Reduces a coordinate vector into canonical range.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        v.iter().zip(&self.moduli).map(|(x, m)| modp(*x, *m)).collect()
    }

    pub fn is_zero_vec(&self, v: &[i64]) -> bool {
        v.iter().zip(&self.moduli).all(|(x, m)| modp(*x, *m) == 0)
    }

    /// Product `a * b` of endomorphism matrices, reduced into this module.
    pub fn compose(&self, a: &Mat, b: &Mat) -> Mat {
        let mut m = a.mul_mod(b, self.characteristic());
        m.reduce_rows(&self.moduli);
        m
    }

    /// Applies a matrix whose target is this module.
    pub fn apply(&self, a: &Mat, v: &[i64]) -> Vec<i64> {
        self.reduce(&a.apply_mod(v, self.characteristic()))
    }

    /// Multiplication by the ring element with coordinates `x`.
    pub fn action_of(&self, x: &[i64]) -> Mat {
        let n = self.characteristic();
        let mut m = Mat::zeros(self.n(), self.n());
        for (i, &c) in x.iter().enumerate() {
            if c != 0 {
                m = m.add_mod(&self.action[i].scale_mod(c, n), n);
            }
        }
        m.reduce_rows(&self.moduli);
        m
    }

    pub fn action_of_element(&self, x: usize) -> Mat {
        self.action_of(&self.ring.coords(x))
    }

    pub fn act(&self, x: usize, v: &[i64]) -> Vec<i64> {
        self.apply(&self.action_of_element(x), v)
    }

    /// `a: source → self` respects the orders of the source generators.
    pub fn is_well_defined_map(&self, source: &FinModule, a: &Mat) -> bool {
        (0..a.cols()).all(|j| {
            let col: Vec<i64> = a.column(j).iter().map(|x| x * source.moduli[j]).collect();
            self.is_zero_vec(&col)
        })
    }

    /// Checks that `a: source → self` is a well-defined module homomorphism.
    pub fn check_hom(&self, source: &FinModule, a: &Mat) -> Result<()> {
        if a.rows() != self.n() || a.cols() != source.n() {
            return Err(Error::NotAMorphism(format!(
                "matrix is {}x{}, expected {}x{}",
                a.rows(),
                a.cols(),
                self.n(),
                source.n()
            )));
        }
        if !self.is_well_defined_map(source, a) {
            return Err(Error::NotAMorphism("map ignores generator orders".into()));
        }
        for i in 0..self.ring.dim() {
            let lhs = self.compose(&self.action[i], a);
            let rhs = self.compose(a, &source.action[i]);
            if lhs != rhs {
                return Err(Error::NotAMorphism("map is not linear over the ring".into()));
            }
        }
        Ok(())
    }

    /// Enumerates every element when the module has at most `limit` elements.
    pub fn elements(&self, limit: u64) -> Option<Vec<Vec<i64>>> {
        let total = self.order().value()?;
        if total > limit {
            return None;
        }
        let mut out = Vec::with_capacity(total as usize);
        let mut cur = vec![0i64; self.n()];
        loop {
            out.push(cur.clone());
            let mut k = self.n();
            loop {
                if k == 0 {
                    return Some(out);
                }
                k -= 1;
                cur[k] += 1;
                if cur[k] < self.moduli[k] {
                    break;
                }
                cur[k] = 0;
            }
        }
    }

    /// Submodule generated by the columns of `gens`.
    pub fn submodule(&self, gens: &Mat) -> Subquotient {
        Subquotient::new(self, gens, &Mat::zeros(self.n(), 0))
    }

    /// Submodule spanned over the ring by the given vectors.
    pub fn span(&self, vectors: &[Vec<i64>]) -> Subquotient {
        let mut cols = Vec::new();
        for v in vectors {
            for a in &self.action {
                cols.push(self.apply(a, v));
            }
        }
        self.submodule(&Mat::from_columns(self.n(), &cols))
    }

    pub fn quotient(&self, rels: &Mat) -> Subquotient {
        Subquotient::new(self, &self.identity_matrix(), rels)
    }

    pub fn image(&self, a: &Mat) -> Subquotient {
        self.submodule(a)
    }

    /// Kernel of `a: self → target`.
    pub fn kernel(&self, target: &FinModule, a: &Mat) -> Subquotient {
        let mut k = kernel_into(a, &target.moduli, self.characteristic());
        k.reduce_rows(&self.moduli);
        self.submodule(&k)
    }

    /// `e·M` for an idempotent (or any element) `e`.
    pub fn scaled_submodule(&self, e: usize) -> Subquotient {
        self.submodule(&self.action_of_element(e))
    }

    /// The quotient `S/I` of the ring by the ideal generated by `gens`.
    pub fn ring_quotient(ring: &Arc<FiniteRing>, gens: &[usize]) -> Subquotient {
        let s = Self::ring_module(ring);
        let cols: Vec<Vec<i64>> = gens
            .iter()
            .flat_map(|&g| (0..ring.dim()).map(move |i| (g, i)))
            .map(|(g, i)| ring.coords(ring.mul(g, ring.basis_element(i))))
            .collect();
        s.quotient(&Mat::from_columns(ring.dim(), &cols))
    }

    /// Residue field `k(p) = S/p` of the prime with index `k`.
    pub fn residue_field(ring: &Arc<FiniteRing>, k: usize) -> FinModule {
        let gens = ring.primes()[k].generators.clone();
        Self::ring_quotient(ring, &gens).module
    }

    /// `|M / pM|`.
    pub fn fiber_order(&self, k: usize) -> Order {
        let ring = &self.ring;
        let mut cols = Vec::new();
        for &g in &ring.primes()[k].generators {
            let a = self.action_of_element(g);
            cols.extend(a.columns());
        }
        self.quotient(&Mat::from_columns(self.n(), &cols)).module.order()
    }

    /// Prime indices with `e_p M ≠ 0`.
    pub fn support(&self) -> Vec<usize> {
        (0..self.ring.num_primes())
            .filter(|&k| {
                let e = self.ring.primes()[k].idempotent;
                !self.scaled_submodule(e).module.is_zero()
            })
            .collect()
    }

    /// Projective iff free over every local factor: `|e_p M| = |e_p S|^μ` with
    /// `μ = dim_{k(p)} M/pM`.
    pub fn is_projective(&self) -> bool {
        *self.projective.get_or_init(|| {
            let ring = &self.ring;
            let s = FinModule::ring_module(ring);
            (0..ring.num_primes()).all(|k| {
                let e = ring.primes()[k].idempotent;
                let em = self.scaled_submodule(e).module.order();
                let es = s.scaled_submodule(e).module.order();
                let kp = FinModule::residue_field(ring, k).order();
                match self.fiber_order(k).log(&kp) {
                    Some(mu) => es.pow(mu) == em,
                    None => false,
                }
            })
        })
    }
}

/// A subquotient `U/W` of an ambient module, `W ⊆ U`, with explicit
/// coordinates.
pub struct Subquotient {
    pub module: FinModule,
    /// Representatives in the ambient of the new coordinate generators.
    pub lift: Mat,
    ambient_moduli: Vec<i64>,
    ngens: usize,
    big: Smith,
    p: Mat,
    kept: Vec<usize>,
}

impl fmt::Debug for Subquotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subquotient({:?})", self.module)
    }
}

impl Subquotient {
    /// `U` spanned by the columns of `gens`, `W` by the columns of `rels`. The
    /// action is transported from the ambient, so `U` and `W` must be stable.
    pub fn new(ambient: &FinModule, gens: &Mat, rels: &Mat) -> Subquotient {
        let n = ambient.characteristic();
        let dim = ambient.n();
        assert_eq!(gens.rows(), dim);
        assert_eq!(rels.rows(), dim);
        let g = gens.cols();
        let big_mat = gens.hcat(rels).hcat(&Mat::diagonal(&ambient.moduli));
        let big = Smith::compute(&big_mat, n);
        let ker = big.kernel();
        let rel = ker.block(0, 0, g, ker.cols());
        let small = Smith::compute(&rel, n);
        let mut kept = Vec::new();
        let mut moduli = Vec::new();
        for k in 0..g {
            let m = match small.diag.get(k) {
                Some(&d) => gcd(d, n),
                None => n,
            };
            if m > 1 {
                kept.push(k);
                moduli.push(m);
            }
        }
        let mut lift = gens.mul_mod(&small.p_inv.select_columns(&kept), n);
        lift.reduce_rows(&ambient.moduli);
        let mut sq = Subquotient {
            module: FinModule::new_unchecked(&ambient.ring, moduli.clone(), Vec::new()),
            lift,
            ambient_moduli: ambient.moduli.clone(),
            ngens: g,
            big,
            p: small.p,
            kept,
        };
        let mut action = Vec::with_capacity(ambient.action.len());
        for a in &ambient.action {
            let mut cols = Vec::with_capacity(moduli.len());
            for k in 0..moduli.len() {
                let v = ambient.apply(a, &sq.lift.column(k));
                cols.push(sq.coords(&v).expect("subquotient is stable under the action"));
            }
            action.push(Mat::from_columns(moduli.len(), &cols));
        }
        sq.module = FinModule::new_unchecked(&ambient.ring, moduli, action);
        sq
    }

    /// Coordinates of the class of `m`, or `None` if `m ∉ U`.
    pub fn coords(&self, m: &[i64]) -> Option<Vec<i64>> {
        let n = self.big.n;
        let target: Vec<i64> = m
            .iter()
            .zip(&self.ambient_moduli)
            .map(|(x, md)| modp(*x, *md))
            .collect();
        let x = self.big.solve(&target)?;
        let c = &x[..self.ngens];
        let y = self.p.apply_mod(c, n);
        Some(
            self.kept
                .iter()
                .zip(&self.module.moduli)
                .map(|(&k, &md)| modp(y[k], md))
                .collect(),
        )
    }

    pub fn contains(&self, m: &[i64]) -> bool {
        self.big.solve(&self.reduce_ambient(m)).is_some()
    }

    fn reduce_ambient(&self, m: &[i64]) -> Vec<i64> {
        m.iter()
            .zip(&self.ambient_moduli)
            .map(|(x, md)| modp(*x, *md))
            .collect()
    }

    /// Matrix of the map induced on coordinates by `f: ambient → other`,
    /// landing in another subquotient.
    pub fn induced(&self, target: &Subquotient, f: &Mat) -> Option<Mat> {
        let n = self.big.n;
        let mut cols = Vec::with_capacity(self.module.n());
        for k in 0..self.module.n() {
            let v = f.apply_mod(&self.lift.column(k), n);
            cols.push(target.coords(&v)?);
        }
        Some(Mat::from_columns(target.module.n(), &cols))
    }

    /// Coordinates of each column of `vectors`, which must lie in `U`.
    pub fn coords_matrix(&self, vectors: &Mat) -> Option<Mat> {
        let cols = vectors
            .columns()
            .iter()
            .map(|v| self.coords(v))
            .collect::<Option<Vec<_>>>()?;
        Some(Mat::from_columns(self.module.n(), &cols))
    }

    /// Generators of `U` in the ambient (the lift columns).
    pub fn generators(&self) -> Vec<Vec<i64>> {
        self.lift.columns()
    }
}

/// `M ⊗_S N` as the quotient of the pair space `⊕ Z/gcd(m_i, n_j)` by the
/// balancing relations. The ring acts through the left factor.
pub struct TensorModule {
    pub left_n: usize,
    pub right_n: usize,
    pub pair_moduli: Vec<i64>,
    pub sq: Subquotient,
}

impl TensorModule {
    pub fn new(m: &FinModule, n: &FinModule) -> TensorModule {
        Self::new_over(m, n, &m.ring, &m.action)
    }

    /// `M ⊗_S N` where `M` also carries commuting action matrices
    /// `left_action` of a second ring, which then acts on the result.
    pub fn new_over(m: &FinModule, n: &FinModule, ring: &Arc<FiniteRing>, left_action: &[Mat]) -> TensorModule {
        let (a, b) = (m.n(), n.n());
        let pair_moduli: Vec<i64> = (0..a * b)
            .map(|k| gcd(m.moduli[k / b.max(1)], n.moduli[k % b.max(1)]))
            .collect();
        let mut action = Vec::with_capacity(ring.dim());
        for act in left_action {
            let mut mat = Mat::zeros(a * b, a * b);
            for i in 0..a {
                for j in 0..b {
                    for k in 0..a {
                        mat[(k * b + j, i * b + j)] = act[(k, i)];
                    }
                }
            }
            action.push(mat);
        }
        let pair = FinModule::new_unchecked(ring, pair_moduli.clone(), action);
        let mut rels = Vec::new();
        for (am, an) in m.action.iter().zip(&n.action) {
            for i in 0..a {
                for j in 0..b {
                    let mut v = vec![0i64; a * b];
                    for k in 0..a {
                        v[k * b + j] += am[(k, i)];
                    }
                    for l in 0..b {
                        v[i * b + l] -= an[(l, j)];
                    }
                    let v = pair.reduce(&v);
                    if v.iter().any(|&x| x != 0) {
                        rels.push(v);
                    }
                }
            }
        }
        let sq = Subquotient::new(&pair, &pair.identity_matrix(), &Mat::from_columns(a * b, &rels));
        TensorModule {
            left_n: a,
            right_n: b,
            pair_moduli,
            sq,
        }
    }

    pub fn module(&self) -> &FinModule {
        &self.sq.module
    }

    /// Coordinates of `x ⊗ y`.
    pub fn pure(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        let b = self.right_n;
        let mut v = vec![0i64; self.pair_moduli.len()];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                v[i * b + j] = modp(v[i * b + j] + xi * yj, self.pair_moduli[i * b + j]);
            }
        }
        self.sq.coords(&v).expect("pair space surjects")
    }

    /// Pair-space representative of tensor basis element `k`, as a list of
    /// `(i, j, coefficient)` with nonzero coefficients.
    pub fn lift_terms(&self, k: usize) -> Vec<(usize, usize, i64)> {
        let b = self.right_n;
        let col = self.sq.lift.column(k);
        col.iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(idx, &c)| (idx / b, idx % b, c))
            .collect()
    }

    /// Matrix of the map induced by a bilinear rule: `beta(i, j)` is the image
    /// of `e_i ⊗ f_j` in the target coordinates.
    pub fn bilinear_map(&self, target_moduli: &[i64], n: i64, beta: impl Fn(usize, usize) -> Vec<i64>) -> Mat {
        let mut cache: BTreeMap<(usize, usize), Vec<i64>> = BTreeMap::new();
        let mut cols = Vec::with_capacity(self.module().n());
        for k in 0..self.module().n() {
            let mut acc = vec![0i64; target_moduli.len()];
            for (i, j, c) in self.lift_terms(k) {
                let img = cache.entry((i, j)).or_insert_with(|| beta(i, j));
                for (a, v) in acc.iter_mut().zip(img.iter()) {
                    *a = (*a + c * v) % n;
                }
            }
            let acc: Vec<i64> = acc
                .iter()
                .zip(target_moduli)
                .map(|(x, m)| modp(*x, *m))
                .collect();
            cols.push(acc);
        }
        Mat::from_columns(target_moduli.len(), &cols)
    }
}

/// The group `Hom_Z(M, N)` with basis maps `E_{rj}` sending generator `j` to
/// `(n_r / g) · f_r` where `g = gcd(m_j, n_r)`.
pub struct HomSpace {
    pub src_n: usize,
    pub tgt_n: usize,
    scale: Vec<i64>,
    pub moduli: Vec<i64>,
}

impl HomSpace {
    pub fn new(src: &FinModule, tgt: &FinModule) -> HomSpace {
        let (a, b) = (src.n(), tgt.n());
        let mut scale = Vec::with_capacity(a * b);
        let mut moduli = Vec::with_capacity(a * b);
        for r in 0..b {
            for j in 0..a {
                let g = gcd(src.moduli[j], tgt.moduli[r]);
                scale.push(tgt.moduli[r] / g);
                moduli.push(g);
            }
        }
        HomSpace {
            src_n: a,
            tgt_n: b,
            scale,
            moduli,
        }
    }

    pub fn dim(&self) -> usize {
        self.moduli.len()
    }

    pub fn to_matrix(&self, v: &[i64]) -> Mat {
        let mut m = Mat::zeros(self.tgt_n, self.src_n);
        for r in 0..self.tgt_n {
            for j in 0..self.src_n {
                let k = r * self.src_n + j;
                m[(r, j)] = v[k] * self.scale[k];
            }
        }
        m
    }

    /// Coordinates of a well-defined map (entries must be reduced mod target).
    pub fn from_matrix(&self, m: &Mat) -> Vec<i64> {
        let mut v = vec![0; self.dim()];
        for r in 0..self.tgt_n {
            for j in 0..self.src_n {
                let k = r * self.src_n + j;
                debug_assert_eq!(m[(r, j)] % self.scale[k], 0, "map is not well defined");
                v[k] = modp(m[(r, j)] / self.scale[k], self.moduli[k]);
            }
        }
        v
    }

    /// `Hom_Z(M, N)` as a module, the ring acting on the target.
    pub fn as_module(&self, tgt: &FinModule) -> FinModule {
        let ring = &tgt.ring;
        let mut action = Vec::with_capacity(ring.dim());
        for act in &tgt.action {
            let mut cols = Vec::with_capacity(self.dim());
            for k in 0..self.dim() {
                let mut e = vec![0; self.dim()];
                e[k] = 1;
                let x = self.to_matrix(&e);
                let y = tgt.compose(act, &x);
                cols.push(self.from_matrix(&y));
            }
            action.push(Mat::from_columns(self.dim(), &cols));
        }
        FinModule::new_unchecked(ring, self.moduli.clone(), action)
    }

    /// Generators (as columns of coordinates) of `Hom_S(M, N)`.
    pub fn linear_maps(&self, src: &FinModule, tgt: &FinModule) -> Mat {
        let n = src.characteristic();
        let d = self.dim();
        let blocks = src.ring.dim();
        let rows = blocks * self.tgt_n * self.src_n;
        let mut cond = Mat::zeros(rows, d);
        let mut cond_moduli = Vec::with_capacity(rows);
        for _ in 0..blocks {
            for _ in 0..self.src_n {
                cond_moduli.extend_from_slice(&tgt.moduli);
            }
        }
        for k in 0..d {
            let mut e = vec![0; d];
            e[k] = 1;
            let x = self.to_matrix(&e);
            let mut row = 0;
            for i in 0..blocks {
                let lhs = tgt.compose(&tgt.action[i], &x);
                let rhs = x.mul_mod(&src.action[i], n);
                for j in 0..self.src_n {
                    for r in 0..self.tgt_n {
                        cond[(row, k)] = modp(lhs[(r, j)] - rhs[(r, j)], tgt.moduli[r]);
                        row += 1;
                    }
                }
            }
        }
        let mut ker = kernel_into(&cond, &cond_moduli, n);
        ker.reduce_rows(&self.moduli);
        ker
    }
}

/// `Hom_S(M, N)` as a module together with the coordinate space it lives in.
pub struct HomModule {
    pub space: HomSpace,
    pub ambient: FinModule,
    pub sq: Subquotient,
}

impl HomModule {
    pub fn new(src: &FinModule, tgt: &FinModule) -> HomModule {
        let space = HomSpace::new(src, tgt);
        let ambient = space.as_module(tgt);
        let gens = space.linear_maps(src, tgt);
        let sq = ambient.submodule(&gens);
        HomModule { space, ambient, sq }
    }

    pub fn module(&self) -> &FinModule {
        &self.sq.module
    }

    /// Matrix of the homomorphism with the given coordinates.
    pub fn matrix_of(&self, coords: &[i64]) -> Mat {
        let v = self
            .sq
            .lift
            .apply_mod(coords, self.ambient.characteristic());
        self.space.to_matrix(&self.ambient.reduce(&v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: i64) -> Arc<FiniteRing> {
        FiniteRing::build(&format!("Z/{n}")).unwrap()
    }

    #[test]
    fn ideal_of_z6_is_z2() {
        let r = z(6);
        let s = FinModule::ring_module(&r);
        let sub = s.scaled_submodule(3);
        assert_eq!(sub.module.order().value(), Some(2));
        assert_eq!(s.support(), vec![0, 1]);
        assert_eq!(sub.module.support(), vec![0]);
    }

    #[test]
    fn tensor_of_cyclic_groups() {
        let r = z(12);
        let a = FinModule::ring_quotient(&r, &[4]).module;
        let b = FinModule::ring_quotient(&r, &[6]).module;
        let t = TensorModule::new(&a, &b);
        assert_eq!(t.module().order().value(), Some(2));
    }

    #[test]
    fn hom_counts() {
        let r = z(4);
        let a = FinModule::ring_quotient(&r, &[2]).module;
        let s = FinModule::ring_module(&r);
        assert_eq!(HomModule::new(&a, &s).module().order().value(), Some(2));
        assert_eq!(HomModule::new(&s, &a).module().order().value(), Some(2));
        assert_eq!(HomModule::new(&s, &s).module().order().value(), Some(4));
    }

    #[test]
    fn projectivity() {
        let z4 = z(4);
        assert!(FinModule::ring_module(&z4).is_projective());
        assert!(!FinModule::ring_quotient(&z4, &[2]).module.is_projective());
        let z6 = z(6);
        assert!(FinModule::ring_quotient(&z6, &[2]).module.is_projective());
    }

    #[test]
    fn module_verification_rejects_bad_actions() {
        let r = z(4);
        let bad = FinModule::new(&r, vec![4], vec![Mat::from_rows(1, 1, vec![2])]);
        assert!(bad.is_err());
        let ok = FinModule::new(&r, vec![2], vec![Mat::from_rows(1, 1, vec![1])]);
        assert!(ok.is_ok());
    }
}
