//! Exact dense linear algebra over a prime field GF(p).
//!
//! Matrices are row-major `u64` with every stored entry reduced to `0..p`.
//! Eliminations use a fixed leftmost-pivot / topmost-row rule so that row
//! echelon forms, kernel bases and solutions are deterministic across runs
//! and platforms. Inside the elimination kernel entries are kept unreduced
//! as long as the worst-case accumulated value provably fits in a `u64`
//! (cheap for small p), with a strict mod-every-op fallback otherwise.

use crate::error::{Error, Result};

/// A prime field GF(p) with a runtime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Checks primality by trial division up to sqrt(p).
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 {
            return Err(Error::NotPrime(p));
        }
        let mut d = 2u64;
        while d.saturating_mul(d) <= p {
            if p % d == 0 {
                return Err(Error::NotPrime(p));
            }
            d += 1;
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    /// Reduces a signed integer into `0..p`.
    pub fn from_i64(&self, a: i64) -> u64 {
        let m = self.p as i64;
        // p fits in i64 for every modulus we accept in ring specs.
        debug_assert!(self.p < i64::MAX as u64);
        (a.rem_euclid(m)) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat: a^(p-2).
    #[inline]
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a % self.p != 0, "inverse of zero");
        self.pow(a, self.p - 2)
    }
}

/// Dense row-major matrix over GF(p); every entry satisfies `0 <= e < p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ScalarMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ScalarMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds from rows of signed integers, reducing mod p.
    pub fn from_rows(field: &PrimeField, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.data[i * c + j] = field.from_i64(v);
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Matrix product over the field.
    pub fn mat_mul(&self, field: &PrimeField, other: &ScalarMatrix) -> ScalarMatrix {
        assert_eq!(self.cols, other.rows);
        let p = field.modulus() as u128;
        let mut out = ScalarMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let a = a as u128;
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for j in 0..other.cols {
                    dst[j] = ((dst[j] as u128 + a * orow[j] as u128) % p) as u64;
                }
            }
        }
        out
    }

    pub fn mat_vec(&self, field: &PrimeField, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        let p = field.modulus() as u128;
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let mut acc = 0u128;
                for (a, b) in row.iter().zip(v) {
                    acc += *a as u128 * *b as u128;
                    // keep the accumulator small enough for the next product
                    if acc >= 1u128 << 100 {
                        acc %= p;
                    }
                }
                (acc % p) as u64
            })
            .collect()
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &ScalarMatrix) -> ScalarMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = Vec::with_capacity((self.rows + other.rows) * self.cols);
        data.extend_from_slice(&self.data);
        data.extend_from_slice(&other.data);
        ScalarMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }
}

/// True when the in-place elimination can defer reductions: the worst-case
/// accumulated entry `(p-1) + pivots * (p-1)^2` must fit a u64 with margin.
fn lazy_ok(p: u64, max_pivots: usize) -> bool {
    let per = (p - 1).checked_mul(p - 1);
    match per {
        Some(per) => per
            .checked_mul(max_pivots as u64 + 2)
            .and_then(|x| x.checked_add(p))
            .map(|x| x < u64::MAX / 2)
            .unwrap_or(false),
        None => false,
    }
}

/// In-place reduced row echelon form. Returns the pivot columns in order.
/// Leftmost-pivot, topmost-row rule; fully reduced (pivots are 1, pivot
/// columns are cleared above and below).
pub fn rref_in_place(field: &PrimeField, m: &mut ScalarMatrix) -> Vec<usize> {
    let p = field.modulus();
    let (r, c) = (m.rows, m.cols);
    let lazy = lazy_ok(p, r.min(c));
    let mut pivots = Vec::new();
    let mut prow = 0usize;
    for col in 0..c {
        if prow == r {
            break;
        }
        // topmost row with a nonzero entry in this column
        let mut sel = None;
        for row in prow..r {
            let idx = row * c + col;
            let v = m.data[idx] % p;
            m.data[idx] = v;
            if v != 0 {
                sel = Some(row);
                break;
            }
        }
        let Some(sel) = sel else { continue };
        // normalize the selected row and move it into place
        let inv = {
            for k in col..c {
                m.data[sel * c + k] %= p;
            }
            field.inv(m.data[sel * c + col])
        };
        for k in col..c {
            let idx = sel * c + k;
            m.data[idx] = field.mul(m.data[idx], inv);
        }
        if sel != prow {
            for k in col..c {
                m.data.swap(sel * c + k, prow * c + k);
            }
        }
        // eliminate the column from every other row
        for row in 0..r {
            if row == prow {
                continue;
            }
            let f = m.data[row * c + col] % p;
            m.data[row * c + col] = f;
            if f == 0 {
                continue;
            }
            let nf = p - f;
            // split borrows: pivot row is before or after `row`
            let (pr, tr) = if prow < row {
                let (a, b) = m.data.split_at_mut(row * c);
                (&a[prow * c..prow * c + c], &mut b[..c])
            } else {
                let (a, b) = m.data.split_at_mut(prow * c);
                let tr = &mut a[row * c..row * c + c];
                (&b[..c], tr)
            };
            if lazy {
                for k in col..c {
                    tr[k] += nf * pr[k];
                }
            } else {
                for k in col..c {
                    tr[k] = ((tr[k] as u128 + nf as u128 * pr[k] as u128) % p as u128) as u64;
                }
            }
        }
        pivots.push(col);
        prow += 1;
    }
    if lazy {
        for v in m.data.iter_mut() {
            *v %= p;
        }
    }
    pivots
}

/// Reduced row echelon form plus pivot columns.
pub fn rref(field: &PrimeField, m: &ScalarMatrix) -> (ScalarMatrix, Vec<usize>) {
    let mut out = m.clone();
    let pivots = rref_in_place(field, &mut out);
    (out, pivots)
}

pub fn rank(field: &PrimeField, m: &ScalarMatrix) -> usize {
    let mut tmp = m.clone();
    rref_in_place(field, &mut tmp).len()
}

/// Basis of the right null space, one basis vector per column.
/// Column count equals `cols - rank`; columns are produced in increasing
/// order of the free column they normalize.
pub fn kernel_basis(field: &PrimeField, m: &ScalarMatrix) -> ScalarMatrix {
    let (red, pivots) = rref(field, m);
    kernel_from_rref(field, &red, &pivots)
}

/// Same as [`kernel_basis`] but reuses an already computed rref.
pub fn kernel_from_rref(
    field: &PrimeField,
    red: &ScalarMatrix,
    pivots: &[usize],
) -> ScalarMatrix {
    let c = red.cols();
    let mut is_pivot = vec![false; c];
    for &pc in pivots {
        is_pivot[pc] = true;
    }
    let free: Vec<usize> = (0..c).filter(|&j| !is_pivot[j]).collect();
    let mut out = ScalarMatrix::zeros(c, free.len());
    for (k, &fc) in free.iter().enumerate() {
        out.set(fc, k, 1);
        for (row, &pc) in pivots.iter().enumerate() {
            let v = red.get(row, fc);
            if v != 0 {
                out.set(pc, k, field.neg(v));
            }
        }
    }
    out
}

/// One solution of `m x = b` (the rref particular solution with all free
/// variables set to zero), or `None` when the system is inconsistent.
pub fn solve(field: &PrimeField, m: &ScalarMatrix, b: &[u64]) -> Option<Vec<u64>> {
    assert_eq!(b.len(), m.rows());
    let mut aug = ScalarMatrix::zeros(m.rows(), m.cols() + 1);
    for r in 0..m.rows() {
        aug.row_mut(r)[..m.cols()].copy_from_slice(m.row(r));
        aug.set(r, m.cols(), b[r]);
    }
    let pivots = rref_in_place(field, &mut aug);
    if pivots.last() == Some(&m.cols()) {
        return None; // pivot in the augmented column
    }
    let mut x = vec![0u64; m.cols()];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug.get(row, m.cols());
    }
    Some(x)
}

/// Incrementally maintained row space in reduced echelon form.
///
/// Rows are stored normalized (leading 1) and sorted by pivot column, kept
/// mutually reduced, so membership tests and quotient projections are
/// deterministic.
#[derive(Debug, Clone)]
pub struct RowSpace {
    field: PrimeField,
    ncols: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(field: PrimeField, ncols: usize) -> Self {
        RowSpace {
            field,
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// Seeds a row space with the rows of a matrix.
    pub fn from_rows(field: PrimeField, m: &ScalarMatrix) -> Self {
        let mut s = Self::new(field, m.cols());
        for r in 0..m.rows() {
            s.insert(m.row(r).to_vec());
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// The i-th reduced row (a deterministic basis vector of the space).
    pub fn row(&self, i: usize) -> &[u64] {
        &self.rows[i]
    }

    /// Columns not used as pivots, in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ncols];
        for &pc in &self.pivots {
            is_pivot[pc] = true;
        }
        (0..self.ncols).filter(|&j| !is_pivot[j]).collect()
    }

    /// Reduces `v` against the stored rows in place.
    pub fn reduce_in_place(&self, v: &mut [u64]) {
        debug_assert_eq!(v.len(), self.ncols);
        let p = self.field.modulus();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let f = v[pc] % p;
            if f == 0 {
                v[pc] = 0;
                continue;
            }
            let nf = p - f;
            for (vk, rk) in v[pc..].iter_mut().zip(&row[pc..]) {
                *vk = ((*vk as u128 + nf as u128 * *rk as u128) % p as u128) as u64;
            }
        }
        for vk in v.iter_mut() {
            *vk %= p;
        }
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Inserts a vector; returns true when the dimension grew.
    pub fn insert(&mut self, v: Vec<u64>) -> bool {
        let mut w = v;
        self.reduce_in_place(&mut w);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(w[pc]);
        for x in w.iter_mut() {
            *x = self.field.mul(*x, inv);
        }
        // clear the new pivot from existing rows to stay fully reduced
        for row in self.rows.iter_mut() {
            let f = row[pc];
            if f != 0 {
                let nf = self.field.neg(f);
                for (rk, wk) in row.iter_mut().zip(&w) {
                    *rk = self.field.add(*rk, self.field.mul(nf, *wk));
                }
            }
        }
        let at = self.pivots.partition_point(|&x| x < pc);
        self.pivots.insert(at, pc);
        self.rows.insert(at, w);
        true
    }
}
