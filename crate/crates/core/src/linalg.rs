//! Dense linear algebra over `Z/n`.
//!
//! Every finite module in the crate is a `Z/n`-module for `n` the characteristic
//! of its ring, so kernels, images and subquotients all reduce to diagonalizing
//! matrices over the principal ideal ring `Z/n`.

use std::fmt;

/// Row-major integer matrix. Entries are interpreted modulo whatever modulus
/// the caller passes to the arithmetic routines.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}[", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = i64;
    fn index(&self, (r, c): (usize, usize)) -> &i64 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut i64 {
        &mut self.data[r * self.cols + c]
    }
}

pub fn modp(a: i64, n: i64) -> i64 {
    let r = a % n;
    if r < 0 {
        r + n
    } else {
        r
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Returns `(g, s, t)` with `s*a + t*b = g = gcd(a, b)`. When `a` divides `b`
/// the coefficients are `(1, 0)`, which keeps pivot rows untouched during
/// elimination.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if a != 0 && b % a == 0 {
        return (a.abs(), a.signum(), 0);
    }
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Inverse of `a` modulo `n`, if it exists.
pub fn inv_mod(a: i64, n: i64) -> Option<i64> {
    if n == 1 {
        return Some(0);
    }
    let (g, s, _) = ext_gcd(modp(a, n), n);
    (g == 1).then(|| modp(s, n))
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<i64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Mat { rows, cols, data }
    }

    /// Builds a matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<i64>]) -> Self {
        let mut m = Mat::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (r, &v) in col.iter().enumerate() {
                m[(r, c)] = v;
            }
        }
        m
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let mut m = Mat::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<i64>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    /// Matrix product reduced modulo `n`.
    pub fn mul_mod(&self, other: &Mat, n: i64) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * other.cols + c;
                    out.data[idx] = (out.data[idx] + a * other[(k, c)]) % n;
                }
            }
        }
        out.reduce(n);
        out
    }

    pub fn apply_mod(&self, v: &[i64], n: i64) -> Vec<i64> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = 0i64;
                for (c, &x) in v.iter().enumerate() {
                    acc = (acc + self[(r, c)] * x) % n;
                }
                modp(acc, n)
            })
            .collect()
    }

    pub fn add_mod(&self, other: &Mat, n: i64) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| modp(a + b, n))
                .collect(),
        }
    }

    pub fn scale_mod(&self, s: i64, n: i64) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| modp(a * s, n)).collect(),
        }
    }

    pub fn reduce(&mut self, n: i64) {
        for x in &mut self.data {
            *x = modp(*x, n);
        }
    }

    /// Reduces row `r` modulo `moduli[r]`.
    pub fn reduce_rows(&mut self, moduli: &[i64]) {
        assert_eq!(moduli.len(), self.rows);
        for r in 0..self.rows {
            let m = moduli[r];
            for c in 0..self.cols {
                let idx = r * self.cols + c;
                self.data[idx] = modp(self.data[idx], m);
            }
        }
    }

    /// Horizontal concatenation.
    pub fn hcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut m = Mat::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(r, c)] = self[(r, c)];
            }
            for c in 0..other.cols {
                m[(r, self.cols + c)] = other[(r, c)];
            }
        }
        m
    }

    /// Vertical concatenation.
    pub fn vcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, other: &Mat) -> Mat {
        let mut m = Mat::zeros(self.rows + other.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, self.cols, other);
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Mat) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self[(r0 + r, c0 + c)] = block[(r, c)];
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        let mut m = Mat::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = self[(r0 + r, c0 + c)];
            }
        }
        m
    }

    pub fn select_columns(&self, cols: &[usize]) -> Mat {
        let mut m = Mat::zeros(self.rows, cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for r in 0..self.rows {
                m[(r, j)] = self[(r, c)];
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> Mat {
        let mut m = Mat::zeros(rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            for c in 0..self.cols {
                m[(i, c)] = self[(r, c)];
            }
        }
        m
    }

    fn row_combine(&mut self, k: usize, i: usize, a: i64, b: i64, c: i64, d: i64, n: i64) {
        for col in 0..self.cols {
            let x = self[(k, col)];
            let y = self[(i, col)];
            self[(k, col)] = modp(a * x + b * y, n);
            self[(i, col)] = modp(c * x + d * y, n);
        }
    }

    fn col_combine(&mut self, k: usize, j: usize, a: i64, b: i64, c: i64, d: i64, n: i64) {
        for row in 0..self.rows {
            let x = self[(row, k)];
            let y = self[(row, j)];
            self[(row, k)] = modp(a * x + b * y, n);
            self[(row, j)] = modp(c * x + d * y, n);
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }
}

/// Diagonalization `P * A * Q = D` over `Z/n`, with `P`, `Q` invertible.
#[derive(Clone, Debug)]
pub struct Smith {
    pub n: i64,
    pub rows: usize,
    pub cols: usize,
    /// `diag[k] = D[k][k]` for `k < min(rows, cols)`.
    pub diag: Vec<i64>,
    pub p: Mat,
    pub p_inv: Mat,
    pub q: Mat,
}

impl Smith {
    pub fn compute(a: &Mat, n: i64) -> Smith {
        let (rows, cols) = (a.rows, a.cols);
        let mut d = a.clone();
        d.reduce(n);
        let mut p = Mat::identity(rows);
        let mut p_inv = Mat::identity(rows);
        let mut q = Mat::identity(cols);
        let steps = rows.min(cols);
        let mut diag = Vec::with_capacity(steps);
        for k in 0..steps {
            // pivot with the smallest gcd against n, ties broken by position
            let mut best: Option<(i64, usize, usize)> = None;
            for r in k..rows {
                for c in k..cols {
                    let v = d[(r, c)];
                    if v != 0 {
                        let g = gcd(v, n);
                        if best.is_none_or(|(bg, _, _)| g < bg) {
                            best = Some((g, r, c));
                        }
                    }
                }
            }
            let Some((_, pr, pc)) = best else {
                diag.extend(std::iter::repeat_n(0, steps - k));
                break;
            };
            d.swap_rows(k, pr);
            p.swap_rows(k, pr);
            p_inv.swap_cols(k, pr);
            d.swap_cols(k, pc);
            q.swap_cols(k, pc);
            loop {
                for i in k + 1..rows {
                    let b = d[(i, k)];
                    if b == 0 {
                        continue;
                    }
                    let a0 = d[(k, k)];
                    let (g, s, t) = ext_gcd(a0, b);
                    let (u, v) = (-b / g, a0 / g);
                    d.row_combine(k, i, s, t, u, v, n);
                    p.row_combine(k, i, s, t, u, v, n);
                    // inverse block [[v, -t], [-u, s]] applied on the right
                    p_inv.col_combine(k, i, v, -u, -t, s, n);
                }
                let mut dirty = false;
                for j in k + 1..cols {
                    let b = d[(k, j)];
                    if b == 0 {
                        continue;
                    }
                    let a0 = d[(k, k)];
                    let (g, s, t) = ext_gcd(a0, b);
                    let (u, v) = (-b / g, a0 / g);
                    d.col_combine(k, j, s, t, u, v, n);
                    q.col_combine(k, j, s, t, u, v, n);
                    if t != 0 {
                        dirty = true;
                    }
                }
                if !dirty && (k + 1..rows).all(|i| d[(i, k)] == 0) {
                    break;
                }
            }
            diag.push(d[(k, k)]);
        }
        Smith {
            n,
            rows,
            cols,
            diag,
            p,
            p_inv,
            q,
        }
    }

    /// The effective modulus `gcd(d_k, n)` of diagonal slot `k`; slots beyond the
    /// diagonal behave like zero entries.
    pub fn slot_gcd(&self, k: usize) -> i64 {
        match self.diag.get(k) {
            Some(&d) => gcd(d, self.n),
            None => self.n,
        }
    }

    /// Generators (columns) of the kernel of `A` acting on `(Z/n)^cols`.
    pub fn kernel(&self) -> Mat {
        let n = self.n;
        let mut gens = Vec::new();
        for k in 0..self.cols {
            let g = self.slot_gcd(k);
            let factor = n / g;
            if factor == n {
                continue;
            }
            let col: Vec<i64> = (0..self.cols)
                .map(|r| modp(self.q[(r, k)] * factor, n))
                .collect();
            if col.iter().any(|&x| x != 0) {
                gens.push(col);
            }
        }
        Mat::from_columns(self.cols, &gens)
    }

    /// Solves `A x = b`, returning one solution when it exists.
    pub fn solve(&self, b: &[i64]) -> Option<Vec<i64>> {
        let n = self.n;
        let pb = self.p.apply_mod(b, n);
        let mut y = vec![0i64; self.cols];
        for (k, &rhs) in pb.iter().enumerate() {
            if k < self.diag.len() {
                let d = self.diag[k];
                let g = gcd(d, n);
                if rhs % g != 0 {
                    return None;
                }
                if g == n {
                    continue;
                }
                let m = n / g;
                let inv = inv_mod(d / g, m).expect("unit after dividing out gcd");
                y[k] = modp((rhs / g) % m * inv, m);
            } else if rhs != 0 {
                return None;
            }
        }
        Some(self.q.apply_mod(&y, n))
    }
}

/// Generators of `{x in (Z/n)^cols : A x ≡ 0 (mod moduli row-wise)}`.
pub fn kernel_into(a: &Mat, moduli: &[i64], n: i64) -> Mat {
    assert_eq!(a.rows(), moduli.len());
    let big = a.hcat(&Mat::diagonal(moduli));
    let ker = Smith::compute(&big, n).kernel();
    let mut out = ker.block(0, 0, a.cols(), ker.cols());
    out.reduce(n);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_smith(a: &Mat, n: i64) {
        let s = Smith::compute(a, n);
        let paq = s.p.mul_mod(a, n).mul_mod(&s.q, n);
        for r in 0..a.rows() {
            for c in 0..a.cols() {
                let expect = if r == c { s.diag[r] } else { 0 };
                assert_eq!(paq[(r, c)], modp(expect, n), "PAQ not diagonal for {a:?}");
            }
        }
        assert_eq!(s.p.mul_mod(&s.p_inv, n), Mat::identity(a.rows()));
    }

    #[test]
    fn smith_small_matrices() {
        check_smith(&Mat::from_rows(2, 2, vec![2, 4, 6, 8]), 12);
        check_smith(&Mat::from_rows(2, 3, vec![3, 2, 0, 1, 5, 4]), 6);
        check_smith(&Mat::from_rows(3, 2, vec![0, 0, 2, 0, 0, 3]), 6);
        check_smith(&Mat::zeros(2, 2), 4);
    }

    #[test]
    fn kernel_of_multiplication_by_two_mod_six() {
        let a = Mat::from_rows(1, 1, vec![2]);
        let k = Smith::compute(&a, 6).kernel();
        assert_eq!(k.cols(), 1);
        assert_eq!(k[(0, 0)] % 3, 0);
        assert_ne!(k[(0, 0)], 0);
    }

    #[test]
    fn solve_detects_unsolvable_systems() {
        let a = Mat::from_rows(1, 1, vec![2]);
        let s = Smith::compute(&a, 4);
        assert!(s.solve(&[1]).is_none());
        let x = s.solve(&[2]).unwrap();
        assert_eq!(modp(2 * x[0], 4), 2);
    }

    #[test]
    fn ext_gcd_identity() {
        for a in -20..20 {
            for b in -20..20 {
                let (g, s, t) = ext_gcd(a, b);
                assert_eq!(s * a + t * b, g);
                assert_eq!(g, gcd(a, b));
            }
        }
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn smith_diagonalizes(n in 2i64..40, rows in 1usize..5, cols in 1usize..5, seed in proptest::collection::vec(0i64..1000, 25)) {
            let data = (0..rows * cols).map(|i| seed[i] % n).collect();
            let a = Mat::from_rows(rows, cols, data);
            check_smith(&a, n);
            let s = Smith::compute(&a, n);
            let k = s.kernel();
            prop_assert!(a.mul_mod(&k, n).is_zero());
        }
    }
}
