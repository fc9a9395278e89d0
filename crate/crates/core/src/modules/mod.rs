//! Finitely generated modules over a local algebra, presented as cokernels
//! of matrices with algebra entries.
//!
//! Two concrete views are used side by side: a [`FreeMatrix`] presentation
//! (the cokernel defines the module) and an [`ActionModule`] (a scalar
//! vector space with one action matrix per algebra variable), which is what
//! lengths, socles, Hom spaces and Tor are computed from.

mod ext;
mod hom;
mod resolve;


pub use ext::{extension_module, presentation_from_action, restrict_scalars};
pub use hom::{hom_space, is_isomorphic, tor_dims, IsoResult};
pub use resolve::{
    first_syzygy, resolve, BettiTable, PeriodicCert, ResolveOptions, Resolution, SyzygyData,
};

use std::sync::OnceLock;

use serde::Deserialize;

use crate::algebra::{ARing, LocalAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{self, PrimeField, RowSpace, ScalarMatrix};
use crate::poly::parse_polynomial;

/// A coefficient vector over the owning algebra's basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    pub coeffs: Vec<u64>,
}

impl AlgebraElement {
    pub fn new(coeffs: Vec<u64>) -> Self {
        AlgebraElement { coeffs }
    }
}

/// Dense matrix of algebra elements representing a map A^cols -> A^rows.
/// Entry storage is one flat buffer: entry (r, c) occupies the `n` scalars
/// at ((r * cols) + c) * n.
#[derive(Debug, Clone)]
pub struct FreeMatrix {
    algebra: ARing,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl PartialEq for FreeMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl FreeMatrix {
    pub fn zeros(algebra: ARing, rows: usize, cols: usize) -> Self {
        let n = algebra.dim();
        FreeMatrix {
            algebra,
            rows,
            cols,
            data: vec![0; rows * cols * n],
        }
    }

    /// Builds from row-major entries given as coefficient vectors.
    pub fn from_entries(algebra: ARing, rows: usize, cols: usize, entries: &[Vec<u64>]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        let mut m = Self::zeros(algebra, rows, cols);
        let n = m.algebra.dim();
        for (i, e) in entries.iter().enumerate() {
            assert_eq!(e.len(), n);
            m.data[i * n..(i + 1) * n].copy_from_slice(e);
        }
        m
    }

    #[inline]
    pub fn algebra(&self) -> &ARing {
        &self.algebra
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
    pub fn entry(&self, r: usize, c: usize) -> &[u64] {
        let n = self.algebra.dim();
        &self.data[((r * self.cols) + c) * n..((r * self.cols) + c + 1) * n]
    }

    pub fn set_entry(&mut self, r: usize, c: usize, value: &[u64]) {
        let n = self.algebra.dim();
        self.data[((r * self.cols) + c) * n..((r * self.cols) + c + 1) * n]
            .copy_from_slice(value);
    }

    /// True when every entry lies in the maximal ideal.
    pub fn entries_in_radical(&self) -> bool {
        let n = self.algebra.dim();
        (0..self.rows * self.cols).all(|i| self.data[i * n] == 0)
    }

    /// Expands to the scalar map k^{cols*n} -> k^{rows*n}: each entry `a`
    /// becomes the left-multiplication block L_a.
    pub fn expand(&self) -> ScalarMatrix {
        let a = &self.algebra;
        let n = a.dim();
        let p = a.field().modulus() as u128;
        let (er, ec) = (self.rows * n, self.cols * n);
        let mut out = ScalarMatrix::zeros(er, ec);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let entry = self.entry(r, c);
                for (s, &coef) in entry.iter().enumerate() {
                    if coef == 0 {
                        continue;
                    }
                    for t in 0..n {
                        let prod = a.basis_product(s, t);
                        for (u, &x) in prod.iter().enumerate() {
                            if x != 0 {
                                let row = r * n + u;
                                let col = c * n + t;
                                let cur = out.get(row, col);
                                out.set(row, col, ((cur as u128 + coef as u128 * x as u128) % p) as u64);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Column `c` as a scalar vector in k^{rows*n} (blocks are the entries'
    /// coefficient vectors).
    pub fn scalar_column(&self, c: usize) -> Vec<u64> {
        let n = self.algebra.dim();
        let mut v = vec![0u64; self.rows * n];
        for r in 0..self.rows {
            v[r * n..(r + 1) * n].copy_from_slice(self.entry(r, c));
        }
        v
    }

    /// Builds a matrix with `rows` block-rows from scalar columns.
    pub fn from_scalar_columns(algebra: ARing, rows: usize, columns: &[Vec<u64>]) -> Self {
        let n = algebra.dim();
        let cols = columns.len();
        let mut m = Self::zeros(algebra, rows, cols);
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows * n);
            for r in 0..rows {
                m.set_entry(r, c, &col[r * n..(r + 1) * n]);
            }
        }
        m
    }
}

/// Deterministic model of a quotient k^ambient / U with U given in reduced
/// row echelon form; quotient coordinates are the non-pivot columns.
#[derive(Debug, Clone)]
pub struct QuotientSpace {
    span: RowSpace,
    free_cols: Vec<usize>,
}

impl QuotientSpace {
    pub fn new(span: RowSpace) -> Self {
        let free_cols = span.free_columns();
        QuotientSpace { span, free_cols }
    }

    pub fn ambient_dim(&self) -> usize {
        self.span.ncols()
    }

    pub fn dim(&self) -> usize {
        self.free_cols.len()
    }

    pub fn free_cols(&self) -> &[usize] {
        &self.free_cols
    }

    /// Coordinates of the class of `v`.
    pub fn project(&self, v: &[u64]) -> Vec<u64> {
        let mut w = v.to_vec();
        self.span.reduce_in_place(&mut w);
        self.free_cols.iter().map(|&c| w[c]).collect()
    }

    /// Canonical ambient representative of quotient coordinates.
    pub fn lift(&self, coords: &[u64]) -> Vec<u64> {
        assert_eq!(coords.len(), self.free_cols.len());
        let mut v = vec![0u64; self.span.ncols()];
        for (&c, &x) in self.free_cols.iter().zip(coords) {
            v[c] = x;
        }
        v
    }
}

/// A module realized as a scalar vector space with one action matrix per
/// algebra variable generator.
#[derive(Debug, Clone)]
pub struct ActionModule {
    algebra: ARing,
    dim: usize,
    actions: Vec<ScalarMatrix>,
}

impl ActionModule {
    pub fn new(algebra: ARing, dim: usize, actions: Vec<ScalarMatrix>) -> Self {
        let m = ActionModule {
            algebra,
            dim,
            actions,
        };
        m.verify();
        m
    }

    #[inline]
    pub fn algebra(&self) -> &ARing {
        &self.algebra
    }

    /// Length of the module (its k-dimension).
    #[inline]
    pub fn len(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.dim == 0
    }

    pub fn actions(&self) -> &[ScalarMatrix] {
        &self.actions
    }

    /// Commutativity and the defining relations, checked exhaustively on
    /// small modules (spot checks; large syzygy modules skip this).
    fn verify(&self) {
        if self.dim > 64 {
            return;
        }
        let field = self.algebra.field();
        for (i, a) in self.actions.iter().enumerate() {
            for b in &self.actions[i + 1..] {
                assert_eq!(
                    a.mat_mul(field, b),
                    b.mat_mul(field, a),
                    "variable actions must commute"
                );
            }
        }
        for rel in self.algebra.relations() {
            let m = self.eval_poly_matrix(rel);
            assert!(m.is_zero(), "variable actions must satisfy the relations");
        }
    }

    fn eval_poly_matrix(&self, poly: &crate::poly::Polynomial) -> ScalarMatrix {
        let field = self.algebra.field();
        let mut out = ScalarMatrix::zeros(self.dim, self.dim);
        for (mono, c) in &poly.terms {
            let mut term = ScalarMatrix::identity(self.dim);
            for (g, &e) in self.actions.iter().zip(mono) {
                for _ in 0..e {
                    term = g.mat_mul(field, &term);
                }
            }
            let c = field.from_i64(*c);
            for r in 0..self.dim {
                for cc in 0..self.dim {
                    let v = field.add(out.get(r, cc), field.mul(c, term.get(r, cc)));
                    out.set(r, cc, v);
                }
            }
        }
        out
    }

    /// Action matrices of every algebra basis element (products of variable
    /// actions according to the basis monomials).
    pub fn basis_actions(&self) -> Vec<ScalarMatrix> {
        let field = self.algebra.field();
        let mut out = Vec::with_capacity(self.algebra.dim());
        for mono in self.algebra.basis() {
            let mut m = ScalarMatrix::identity(self.dim);
            for (g, &e) in self.actions.iter().zip(mono) {
                for _ in 0..e {
                    m = g.mat_mul(field, &m);
                }
            }
            out.push(m);
        }
        out
    }

    /// Action of an arbitrary algebra element, given precomputed basis actions.
    pub fn element_action(&self, basis_actions: &[ScalarMatrix], a: &[u64]) -> ScalarMatrix {
        let field = self.algebra.field();
        let mut out = ScalarMatrix::zeros(self.dim, self.dim);
        for (t, &c) in a.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let m = &basis_actions[t];
            for r in 0..self.dim {
                for cc in 0..self.dim {
                    let v = field.add(out.get(r, cc), field.mul(c, m.get(r, cc)));
                    out.set(r, cc, v);
                }
            }
        }
        out
    }

    /// Row space of m*M (the span of all generator-action images).
    pub fn radical_span(&self) -> RowSpace {
        let field = *self.algebra.field();
        let mut space = RowSpace::new(field, self.dim);
        for a in &self.actions {
            for c in 0..a.cols() {
                space.insert(a.column(c));
            }
        }
        space
    }

    /// Minimal number of generators: dim M/mM.
    pub fn min_generators(&self) -> usize {
        self.dim - self.radical_span().dim()
    }

    /// Dimensions of m^i M for i = 0, 1, ... down to zero.
    pub fn radical_filtration_dims(&self) -> Vec<usize> {
        let field = *self.algebra.field();
        let mut dims = vec![self.dim];
        let mut current: Vec<Vec<u64>> = (0..self.dim)
            .map(|i| {
                let mut v = vec![0u64; self.dim];
                v[i] = 1;
                v
            })
            .collect();
        while !current.is_empty() {
            let mut next = RowSpace::new(field, self.dim);
            for a in &self.actions {
                for v in &current {
                    next.insert(a.mat_vec(&field, v));
                }
            }
            dims.push(next.dim());
            if next.dim() == 0 {
                break;
            }
            current = (0..next.dim()).map(|i| next.row(i).to_vec()).collect();
        }
        dims
    }

    /// Hilbert function of the module: H(M, i) = dim m^i M / m^{i+1} M.
    pub fn hilbert_function(&self) -> Vec<usize> {
        let dims = self.radical_filtration_dims();
        dims.windows(2).map(|w| w[0] - w[1]).collect()
    }

    /// Socle dimension: the joint kernel of all variable actions.
    pub fn socle_dim(&self) -> usize {
        if self.dim == 0 {
            return 0;
        }
        let field = self.algebra.field();
        let mut stacked = ScalarMatrix::zeros(0, self.dim);
        for a in &self.actions {
            stacked = stacked.vstack(a);
        }
        self.dim - linalg::rank(field, &stacked)
    }
}

/// Submodule report: socle and the first two radical layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubmoduleData {
    pub socle_dim: usize,
    pub radical_dim: usize,
    pub radical_sq_dim: usize,
    /// mu(mM) = dim mM / m^2 M.
    pub radical_min_generators: usize,
}

pub fn submodule_data(m: &ActionModule) -> SubmoduleData {
    let dims = m.radical_filtration_dims();
    let radical_dim = dims.get(1).copied().unwrap_or(0);
    let radical_sq_dim = dims.get(2).copied().unwrap_or(0);
    SubmoduleData {
        socle_dim: m.socle_dim(),
        radical_dim,
        radical_sq_dim,
        radical_min_generators: radical_dim - radical_sq_dim,
    }
}

/// Cokernel of a free matrix as an action module, together with the
/// quotient-space data needed to project into and lift out of it.
pub fn cokernel_with_projection(phi: &FreeMatrix) -> (ActionModule, QuotientSpace) {
    let algebra = phi.algebra().clone();
    let field = *algebra.field();
    let n = algebra.dim();
    let ambient = phi.rows() * n;
    let expanded = phi.expand();
    // image span: row-reduce the transposed expansion
    let mut tr = ScalarMatrix::zeros(expanded.cols(), expanded.rows());
    for r in 0..expanded.rows() {
        for c in 0..expanded.cols() {
            tr.set(c, r, expanded.get(r, c));
        }
    }
    drop(expanded);
    let pivots = linalg::rref_in_place(&field, &mut tr);
    let mut span = RowSpace::new(field, ambient);
    for r in 0..pivots.len() {
        span.insert(tr.row(r).to_vec());
    }
    let quotient = QuotientSpace::new(span);
    let dim = quotient.dim();
    // induced variable actions: act on a lifted basis vector, project back
    let mut actions = Vec::new();
    for g in algebra.generators() {
        let mut mat = ScalarMatrix::zeros(dim, dim);
        for (j, &fc) in quotient.free_cols().iter().enumerate() {
            let mut ambient_vec = vec![0u64; ambient];
            ambient_vec[fc] = 1;
            let moved = block_multiply(&algebra, g, &ambient_vec);
            let coords = quotient.project(&moved);
            for (i, &x) in coords.iter().enumerate() {
                mat.set(i, j, x);
            }
        }
        actions.push(mat);
    }
    (ActionModule::new(algebra, dim, actions), quotient)
}

/// Cokernel as an action module.
pub fn cokernel(phi: &FreeMatrix) -> ActionModule {
    cokernel_with_projection(phi).0
}

/// Multiplies each length-n block of `v` by the algebra element `a`.
pub fn block_multiply(algebra: &LocalAlgebra, a: &[u64], v: &[u64]) -> Vec<u64> {
    let n = algebra.dim();
    debug_assert_eq!(v.len() % n, 0);
    let mut out = vec![0u64; v.len()];
    for b in 0..v.len() / n {
        let block = &v[b * n..(b + 1) * n];
        if block.iter().any(|&x| x != 0) {
            let prod = algebra.el_mul(a, block);
            out[b * n..(b + 1) * n].copy_from_slice(&prod);
        }
    }
    out
}

/// Cancels unit entries (topmost-leftmost first) by row/column operations,
/// then drops zero columns. The cokernel is preserved; its length is
/// recomputed on both sides and compared.
pub fn minimalize(phi: &FreeMatrix) -> FreeMatrix {
    let algebra = phi.algebra().clone();
    let before = cokernel(phi).len();
    let mut rows: Vec<Vec<Vec<u64>>> = (0..phi.rows())
        .map(|r| (0..phi.cols()).map(|c| phi.entry(r, c).to_vec()).collect())
        .collect();
    loop {
        let mut unit = None;
        'scan: for (r, row) in rows.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                if e[0] != 0 {
                    unit = Some((r, c));
                    break 'scan;
                }
            }
        }
        let Some((r, c)) = unit else { break };
        let u_inv = algebra
            .invert_unit(&rows[r][c])
            .expect("nonzero constant coefficient is a unit");
        // column operations clear row r and form the Schur complement
        let t = rows.len();
        let s = rows[0].len();
        for c2 in 0..s {
            if c2 == c {
                continue;
            }
            let lambda = algebra.el_mul(&u_inv, &rows[r][c2]);
            if algebra.el_is_zero(&lambda) {
                continue;
            }
            for r2 in 0..t {
                let sub = algebra.el_mul(&rows[r2][c], &lambda);
                rows[r2][c2] = algebra.el_sub(&rows[r2][c2], &sub);
            }
        }
        for row in rows.iter_mut() {
            row.remove(c);
        }
        rows.remove(r);
        if rows.is_empty() || rows[0].is_empty() {
            break;
        }
    }
    // drop zero columns
    let t = rows.len();
    let s = rows.first().map_or(0, |r| r.len());
    let keep: Vec<usize> = (0..s)
        .filter(|&c| rows.iter().any(|row| row[c].iter().any(|&x| x != 0)))
        .collect();
    let mut entries = Vec::with_capacity(t * keep.len());
    for row in &rows {
        for &c in &keep {
            entries.push(row[c].clone());
        }
    }
    let out = FreeMatrix::from_entries(algebra, t, keep.len(), &entries);
    debug_assert!(out.entries_in_radical());
    let after = cokernel(&out).len();
    assert_eq!(
        before, after,
        "minimalization must preserve the cokernel length"
    );
    out
}

/// A finitely generated module given by a presentation matrix, with the
/// minimal form and the action-module realization cached.
#[derive(Debug)]
pub struct ModulePresentation {
    algebra: ARing,
    presentation: FreeMatrix,
    minimal: OnceLock<FreeMatrix>,
    action: OnceLock<(ActionModule, QuotientSpace)>,
}

impl ModulePresentation {
    pub fn new(presentation: FreeMatrix) -> Self {
        ModulePresentation {
            algebra: presentation.algebra().clone(),
            presentation,
            minimal: OnceLock::new(),
            action: OnceLock::new(),
        }
    }

    /// Cyclic module A/(f).
    pub fn cyclic(algebra: ARing, f: &[u64]) -> Self {
        let m = FreeMatrix::from_entries(algebra, 1, 1, &[f.to_vec()]);
        Self::new(m)
    }

    /// Free module A^rank (no relations).
    pub fn free(algebra: ARing, rank: usize) -> Self {
        Self::new(FreeMatrix::zeros(algebra, rank, 0))
    }

    /// The residue field k, presented by the variable classes.
    pub fn residue_field(algebra: ARing) -> Self {
        let gens: Vec<Vec<u64>> = algebra.generators().to_vec();
        let m = FreeMatrix::from_entries(algebra.clone(), 1, gens.len(), &gens);
        Self::new(m)
    }

    pub fn algebra(&self) -> &ARing {
        &self.algebra
    }

    pub fn presentation(&self) -> &FreeMatrix {
        &self.presentation
    }

    pub fn minimal(&self) -> &FreeMatrix {
        self.minimal.get_or_init(|| minimalize(&self.presentation))
    }

    fn action_cache(&self) -> &(ActionModule, QuotientSpace) {
        self.action
            .get_or_init(|| cokernel_with_projection(self.minimal()))
    }

    pub fn action_module(&self) -> &ActionModule {
        &self.action_cache().0
    }

    pub fn quotient(&self) -> &QuotientSpace {
        &self.action_cache().1
    }

    pub fn length(&self) -> usize {
        self.action_module().len()
    }

    pub fn min_generators(&self) -> usize {
        self.action_module().min_generators()
    }
}

/// A module spec file: a `generators x relations` presentation with entries
/// in the ring's polynomial grammar; each inner list is one relation column.
#[derive(Debug, Clone, Deserialize)]
pub struct ModuleSpecFile {
    #[serde(default)]
    pub ring: Option<String>,
    pub generators: usize,
    pub relations: Vec<Vec<String>>,
}

impl ModuleSpecFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    /// Realizes the presentation over the given algebra.
    pub fn build(&self, algebra: &ARing) -> Result<ModulePresentation> {
        let t = self.generators;
        let s = self.relations.len();
        let mut entries = vec![algebra.zero(); t * s];
        for (c, column) in self.relations.iter().enumerate() {
            if column.len() != t {
                return Err(Error::Parse(format!(
                    "relation column {c} has length {}, expected {t}",
                    column.len()
                )));
            }
            for (r, text) in column.iter().enumerate() {
                let poly = parse_polynomial(text, algebra.vars())?;
                entries[r * s + c] = algebra.eval_poly(&poly);
            }
        }
        Ok(ModulePresentation::new(FreeMatrix::from_entries(
            algebra.clone(),
            t,
            s,
            &entries,
        )))
    }
}

/// Kernel of a scalar matrix plus the free columns that index its canonical
/// basis (the kernel matrix restricted to those rows is the identity).
pub(crate) struct KernelData {
    pub kernel: ScalarMatrix,
    pub free_cols: Vec<usize>,
    pub rank: usize,
}

pub(crate) fn kernel_with_free_cols(field: &PrimeField, m: &mut ScalarMatrix) -> KernelData {
    let pivots = linalg::rref_in_place(field, m);
    let kernel = linalg::kernel_from_rref(field, m, &pivots);
    let mut is_pivot = vec![false; m.cols()];
    for &pc in &pivots {
        is_pivot[pc] = true;
    }
    let free_cols = (0..m.cols()).filter(|&c| !is_pivot[c]).collect();
    KernelData {
        kernel,
        free_cols,
        rank: pivots.len(),
    }
}

/// Deterministically selects columns of `kernel` that minimally generate it
/// as an A-module, where the source splits into `blocks` blocks of algebra
/// coordinates and `mk_rows` spans m * kernel in kernel coordinates.
///
/// The kernel columns restricted to `free_cols` form the identity, so the
/// coordinates of anything inside the kernel are just its values at the
/// free columns.
pub(crate) fn select_min_generators(
    field: &PrimeField,
    kernel: &ScalarMatrix,
    free_cols: &[usize],
    algebra: &LocalAlgebra,
) -> (Vec<usize>, usize) {
    let m = kernel.cols();
    if m == 0 {
        return (Vec::new(), 0);
    }
    // m*K in kernel coordinates
    let gens = algebra.generators();
    let mut rows: Vec<u64> = Vec::new();
    let mut nrows = 0usize;
    for g in gens {
        for col in 0..m {
            let v = kernel.column(col);
            let moved = block_multiply(algebra, g, &v);
            if moved.iter().all(|&x| x == 0) {
                continue;
            }
            rows.extend(free_cols.iter().map(|&fc| moved[fc]));
            nrows += 1;
        }
    }
    if nrows == 0 {
        // m*K = 0: every kernel column is a minimal generator
        return ((0..m).collect(), 0);
    }
    let mut mk = ScalarMatrix::zeros(nrows, m);
    for r in 0..nrows {
        mk.row_mut(r).copy_from_slice(&rows[r * m..(r + 1) * m]);
    }
    let mk_pivots = linalg::rref_in_place(field, &mut mk);
    let u = mk_pivots.len();
    // candidates projected to the quotient by mK: read off the rref rows
    let mut is_pivot = vec![false; m];
    let mut pivot_row = vec![usize::MAX; m];
    for (r, &pc) in mk_pivots.iter().enumerate() {
        is_pivot[pc] = true;
        pivot_row[pc] = r;
    }
    let free: Vec<usize> = (0..m).filter(|&c| !is_pivot[c]).collect();
    let q = free.len();
    let mut projected = ScalarMatrix::zeros(q, m);
    for t in 0..m {
        if is_pivot[t] {
            let r = pivot_row[t];
            for (i, &fc) in free.iter().enumerate() {
                projected.set(i, t, field.neg(mk.get(r, fc)));
            }
        } else {
            let i = free.iter().position(|&fc| fc == t).unwrap();
            projected.set(i, t, 1);
        }
    }
    let selected = linalg::rref_in_place(field, &mut projected);
    debug_assert_eq!(selected.len(), q);
    (selected, u)
}
