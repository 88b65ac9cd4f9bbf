//! Dense exact linear algebra over a prime field `F_p`.
//!
//! Every [`Mat`] carries its modulus. Entries are residues in `[0, p)` and
//! the modulus is restricted to primes below `2^16`, so products of two
//! residues fit in 32 bits and long dot products can accumulate in a `u64`
//! without intermediate reduction.

use std::fmt;

use crate::error::{Error, Result};

/// Default characteristic used by the CLI and the fixtures.
pub const DEFAULT_PRIME: u32 = 101;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Checks that `p` is a usable modulus.
pub fn check_modulus(p: u64) -> Result<u32> {
    if p < 65536 && is_prime(p) {
        Ok(p as u32)
    } else {
        Err(Error::InvalidModulus(p))
    }
}

pub fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p), "inverting zero mod {p}");
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, (a % p) as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p as i64) as u32
}

/// Reduces a signed integer into `[0, p)`.
pub fn residue(x: i64, p: u32) -> u32 {
    x.rem_euclid(p as i64) as u32
}

#[inline]
fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

#[inline]
fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

/// Row-major dense matrix over `F_p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over F_{} [", self.rows, self.cols, self.p)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        Mat {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Mat::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from signed integer rows, reducing mod `p`.
    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Mat::zeros(p, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m.data[i * c + j] = residue(x, p);
            }
        }
        m
    }

    pub fn from_vec(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols);
        debug_assert!(data.iter().all(|&x| x < p));
        Mat {
            p,
            rows,
            cols,
            data,
        }
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_cols(p: u32, rows: usize, cols: &[Vec<u32>]) -> Self {
        let mut m = Mat::zeros(p, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &x) in col.iter().enumerate() {
                m.data[i * m.cols + j] = x;
            }
        }
        m
    }

    pub fn from_fn(p: u32, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut m = Mat::zeros(p, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j) % p;
            }
        }
        m
    }

    pub fn column_vector(p: u32, v: &[u32]) -> Self {
        Mat::from_vec(p, v.len(), 1, v.to_vec())
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, x: u32) {
        self.data[r * self.cols + c] = x % self.p;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.p, other.p, "modulus mismatch");
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let (n, m) = (self.rows, other.cols);
        let mut out = Mat::zeros(self.p, n, m);
        let mut acc = vec![0u64; m];
        for i in 0..n {
            acc.iter_mut().for_each(|x| *x = 0);
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let orow = &other.data[k * m..(k + 1) * m];
                for (slot, &b) in acc.iter_mut().zip(orow) {
                    *slot += a * b as u64;
                }
            }
            let p = self.p as u64;
            for (j, x) in acc.iter().enumerate() {
                out.data[i * m + j] = (x % p) as u32;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        let p = self.p as u64;
        (0..self.rows)
            .map(|i| {
                let s: u64 = self
                    .row(i)
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a as u64 * b as u64)
                    .sum();
                (s % p) as u32
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let p = self.p;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a + b) % p)
            .collect();
        Mat::from_vec(p, self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let p = self.p;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| sub_mod(a, b, p))
            .collect();
        Mat::from_vec(p, self.rows, self.cols, data)
    }

    pub fn scale(&self, c: u32) -> Mat {
        let p = self.p;
        let data = self.data.iter().map(|&a| mul_mod(a, c % p, p)).collect();
        Mat::from_vec(p, self.rows, self.cols, data)
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: u32, other: &Mat) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let p = self.p;
        if c.is_multiple_of(p) {
            return;
        }
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = ((*a as u64 + c as u64 * b as u64) % p as u64) as u32;
        }
    }

    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut m = Mat::zeros(self.p, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            let dst = &mut m.data[i * m.cols..(i + 1) * m.cols];
            dst[..self.cols].copy_from_slice(self.row(i));
            dst[self.cols..].copy_from_slice(other.row(i));
        }
        m
    }

    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat::from_vec(self.p, self.rows + other.rows, self.cols, data)
    }

    /// Stacks several matrices vertically; `cols` is used when the list is empty.
    pub fn vstack_all(p: u32, cols: usize, mats: &[Mat]) -> Mat {
        let rows = mats.iter().map(|m| m.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for m in mats {
            assert_eq!(m.cols, cols);
            data.extend_from_slice(&m.data);
        }
        Mat::from_vec(p, rows, cols, data)
    }

    /// Concatenates several matrices horizontally; `rows` is used when the list is empty.
    pub fn hstack_all(p: u32, rows: usize, mats: &[Mat]) -> Mat {
        let cols = mats.iter().map(|m| m.cols).sum();
        let mut out = Mat::zeros(p, rows, cols);
        let mut off = 0;
        for m in mats {
            assert_eq!(m.rows, rows);
            out.set_block(0, off, m);
            off += m.cols;
        }
        out
    }

    pub fn block_diag(p: u32, blocks: &[Mat]) -> Mat {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(p, rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Mat) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            let dst = (r0 + i) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(i));
        }
    }

    pub fn block(&self, r0: usize, rows: usize, c0: usize, cols: usize) -> Mat {
        let mut out = Mat::zeros(self.p, rows, cols);
        for i in 0..rows {
            let src = (r0 + i) * self.cols + c0;
            out.data[i * cols..(i + 1) * cols].copy_from_slice(&self.data[src..src + cols]);
        }
        out
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(self.p, self.rows, idx.len(), |i, j| self.get(i, idx[j]))
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        Mat::from_vec(self.p, idx.len(), self.cols, data)
    }

    /// Row-major flattening as a single column vector.
    pub fn flatten(&self) -> Vec<u32> {
        self.data.clone()
    }

    /// Reduced row echelon form and pivot columns.
    ///
    /// Pivoting is deterministic: the first nonzero entry at or below the
    /// current row in the leftmost remaining column.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let p = self.p;
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if piv != r {
                for j in c..cols {
                    self.data.swap(piv * cols + j, r * cols + j);
                }
            }
            let inv = inv_mod(self.data[r * cols + c], p);
            for j in c..cols {
                let x = &mut self.data[r * cols + j];
                *x = mul_mod(*x, inv, p);
            }
            let (before, rest) = self.data.split_at_mut(r * cols);
            let (pivot_row, after) = rest.split_at_mut(cols);
            let eliminate = |row: &mut [u32]| {
                let f = row[c];
                if f == 0 {
                    return;
                }
                let neg = (p - f) as u64;
                for j in c..cols {
                    row[j] = ((row[j] as u64 + neg * pivot_row[j] as u64) % p as u64) as u32;
                }
            };
            before.chunks_mut(cols).for_each(eliminate);
            after.chunks_mut(cols).for_each(eliminate);
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Columns spanning the null space `{x : self * x = 0}`.
    pub fn kernel_basis(&self) -> Mat {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut k = Mat::zeros(self.p, self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k.data[f * free.len() + j] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                let x = r.get(i, f);
                if x != 0 {
                    k.data[pc * free.len() + j] = self.p - x;
                }
            }
        }
        k
    }

    /// A particular solution `x` of `self * x = b`.
    pub fn solve(&self, b: &Mat) -> Result<Mat> {
        assert_eq!(self.rows, b.rows, "solve: row mismatch");
        let aug = self.hstack(b);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return Err(Error::NoSolution);
        }
        let mut x = Mat::zeros(self.p, self.cols, b.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.data[pc * b.cols + j] = r.get(i, self.cols + j);
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        self.solve(&Mat::identity(self.p, self.rows)).ok()
    }

    /// Selects a maximal set of independent columns (leftmost first).
    pub fn column_basis(&self) -> Mat {
        let (_, pivots) = self.rref();
        self.select_cols(&pivots)
    }

    /// Columns spanning the intersection of the column spaces of `a` and `b`.
    pub fn intersect(a: &Mat, b: &Mat) -> Mat {
        assert_eq!(a.rows, b.rows, "intersect: ambient mismatch");
        let a = a.column_basis();
        let b = b.column_basis();
        // [A | -B] (x, y) = 0  <=>  A x = B y lies in both spans.
        let k = a.hstack(&b.scale(a.p - 1)).kernel_basis();
        let xs = k.block(0, a.cols, 0, k.cols);
        a.mul(&xs).column_basis()
    }

    /// Column span of `[a | b]`, reduced to a basis.
    pub fn sum_spaces(a: &Mat, b: &Mat) -> Mat {
        a.hstack(b).column_basis()
    }
}

/// A subspace with a fixed basis and a cheap coordinate map.
///
/// Coordinates are read off a set of pivot rows where the basis restricts to
/// an invertible square block.
#[derive(Clone, Debug)]
pub struct Subspace {
    basis: Mat,
    pivot_rows: Vec<usize>,
    block_inv: Mat,
}

impl Subspace {
    /// `basis` must have full column rank.
    pub fn new(basis: Mat) -> Self {
        let (_, pivot_rows) = basis.transpose().rref();
        assert_eq!(pivot_rows.len(), basis.cols, "Subspace basis is not independent");
        let block_inv = basis
            .select_rows(&pivot_rows)
            .inverse()
            .expect("pivot block is invertible");
        Subspace {
            basis,
            pivot_rows,
            block_inv,
        }
    }

    /// Span of arbitrary columns.
    pub fn spanned_by(vectors: &Mat) -> Self {
        Subspace::new(vectors.column_basis())
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.cols
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows
    }

    /// Coordinates of the columns of `v`, assuming they lie in the span.
    pub fn coords(&self, v: &Mat) -> Mat {
        self.block_inv.mul(&v.select_rows(&self.pivot_rows))
    }

    pub fn coords_vec(&self, v: &[u32]) -> Vec<u32> {
        let sel: Vec<u32> = self.pivot_rows.iter().map(|&r| v[r]).collect();
        self.block_inv.mul_vec(&sel)
    }

    /// Coordinates, or `None` when some column is outside the span.
    pub fn try_coords(&self, v: &Mat) -> Option<Mat> {
        let c = self.coords(v);
        (self.basis.mul(&c) == *v).then_some(c)
    }

    pub fn contains(&self, v: &Mat) -> bool {
        self.try_coords(v).is_some()
    }

    /// Linear left inverse `L` with `L * basis = I`.
    pub fn left_inverse(&self) -> Mat {
        let mut l = Mat::zeros(self.basis.p, self.dim(), self.ambient_dim());
        for (j, &r) in self.pivot_rows.iter().enumerate() {
            for i in 0..self.dim() {
                l.set(i, r, self.block_inv.get(i, j));
            }
        }
        l
    }

    /// Columns extending the basis to the whole ambient space (standard vectors).
    pub fn complement(&self) -> Mat {
        let n = self.ambient_dim();
        let p = self.basis.p;
        let both = self.basis.hstack(&Mat::identity(p, n));
        let (_, pivots) = both.rref();
        let extra: Vec<usize> = pivots.into_iter().filter(|&c| c >= self.dim()).collect();
        both.select_cols(&extra)
    }
}
