//! Finite-dimensional local algebras k[X1..Xv]/I over GF(p): standard
//! monomial bases, structure constants, radical filtration, Hilbert data,
//! socle, classification, unit inversion and tensor products.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, PrimeField, ScalarMatrix};
use crate::poly::{
    grevlex_cmp, monomial_degree, monomial_display, monomial_mul, monomials_of_degree,
    parse_polynomial, Monomial, Polynomial,
};

/// A ring presentation as read from a ring spec file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RingSpec {
    pub name: String,
    #[serde(rename = "char")]
    pub characteristic: u64,
    pub vars: Vec<String>,
    pub relations: Vec<String>,
    pub graded: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncate: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_cap: Option<usize>,
}

pub const DEFAULT_DEGREE_CAP: usize = 32;

impl RingSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: RingSpec = serde_json::from_str(text)?;
        Ok(spec)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }
}

/// A finite-dimensional local algebra with an ordered monomial basis
/// (`basis[0]` is the unit), dense structure constants and a basis-aligned
/// radical filtration. Immutable after construction.
#[derive(Debug)]
pub struct LocalAlgebra {
    field: PrimeField,
    name: String,
    vars: Vec<String>,
    relations: Vec<Polynomial>,
    dim: usize,
    basis: Vec<Monomial>,
    basis_degree: Vec<usize>,
    /// Flat [n][n][n]: coefficient of basis[k] in basis[i]*basis[j].
    mult: Vec<u64>,
    /// Index sets of m^0 ⊇ m^1 ⊇ ... down to the empty set.
    rad_filtration: Vec<Vec<usize>>,
    /// Coefficient vector of the class of each variable.
    generators: Vec<Vec<u64>>,
}

pub type ARing = Arc<LocalAlgebra>;

/// Hilbert function data of the algebra itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertData {
    pub h: Vec<usize>,
    pub length: usize,
    pub embdim: usize,
    pub socle_dim: usize,
}

/// Lescot denominator data for a short ring: Poincaré series
/// 1/(1 - d z + a z^2) = 1/((1 - r1 z)(1 - r2 z)) with integer roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LescotData {
    /// a = length of m^2; equals the Betti growth rate when r1 = 1.
    pub h: u64,
    pub r1: u64,
    pub r2: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub short: bool,
    pub hypersurface: bool,
    pub ci4_candidate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lescot: Option<LescotData>,
}

enum ColStatus {
    Standard(usize),
    Pivot(usize),
}

struct ReductionTable {
    cols: Vec<Monomial>,
    status: Vec<ColStatus>,
    rows: Vec<Vec<u64>>,
}

impl ReductionTable {
    /// Normal form of the column monomial as a coefficient vector over the
    /// full algebra basis.
    fn normal_form(&self, col: usize, dim: usize, field: &PrimeField) -> Vec<u64> {
        let mut out = vec![0u64; dim];
        match self.status[col] {
            ColStatus::Standard(b) => out[b] = 1,
            ColStatus::Pivot(r) => {
                let row = &self.rows[r];
                for (c, st) in self.status.iter().enumerate() {
                    if let ColStatus::Standard(b) = st {
                        if row[c] != 0 {
                            out[*b] = field.neg(row[c]);
                        }
                    }
                }
            }
        }
        out
    }
}

fn validate_spec(spec: &RingSpec) -> Result<(PrimeField, Vec<Polynomial>, usize)> {
    let field = PrimeField::new(spec.characteristic)?;
    if spec.vars.is_empty() {
        return Err(Error::Parse("ring spec needs at least one variable".into()));
    }
    for i in 0..spec.vars.len() {
        for j in i + 1..spec.vars.len() {
            if spec.vars[i] == spec.vars[j] {
                return Err(Error::Parse(format!(
                    "duplicate variable name `{}`",
                    spec.vars[i]
                )));
            }
        }
    }
    if !spec.graded && spec.truncate.is_none() {
        return Err(Error::Parse(
            "ungraded ring specs must set `truncate`".into(),
        ));
    }
    if spec.truncate == Some(0) {
        return Err(Error::Parse("`truncate` must be positive".into()));
    }
    let p = field.modulus();
    let mut relations = Vec::new();
    for text in &spec.relations {
        let parsed = parse_polynomial(text, &spec.vars)?;
        // reduce coefficients mod char
        let terms: Vec<(Monomial, i64)> = parsed
            .terms
            .into_iter()
            .filter_map(|(m, c)| {
                let r = c.rem_euclid(p as i64);
                (r != 0).then_some((m, r))
            })
            .collect();
        let poly = Polynomial {
            nvars: parsed.nvars,
            terms,
        };
        if poly.constant_term() != 0 {
            return Err(Error::NonLocalRelation(text.clone()));
        }
        if spec.graded && !poly.is_homogeneous() {
            return Err(Error::Parse(format!(
                "relation `{text}` is not homogeneous; use `graded: false` with `truncate`"
            )));
        }
        relations.push(poly);
    }
    let cap = spec.degree_cap.unwrap_or(DEFAULT_DEGREE_CAP).max(1);
    Ok((field, relations, cap))
}

/// Builds the algebra from a presentation.
///
/// Graded specs are constructed degree by degree (exact). Ungraded specs
/// compute k\[X\]/(I + m^truncate); see [`build_algebra_stabilized`] for the
/// auto-stabilized variant.
pub fn build_algebra(spec: &RingSpec) -> Result<ARing> {
    let (field, relations, cap) = validate_spec(spec)?;
    let nvars = spec.vars.len();
    let (basis, tables) = if spec.graded {
        build_graded(&field, nvars, &relations, cap)?
    } else {
        build_truncated(&field, nvars, &relations, spec.truncate.unwrap())
    };
    finish_build(field, spec, relations, basis, tables)
}

/// Raises the truncation degree until the dimension is unchanged for two
/// consecutive values (or the degree cap is hit). Returns the algebra and
/// the truncation it stabilized at.
pub fn build_algebra_stabilized(spec: &RingSpec) -> Result<(ARing, usize)> {
    if spec.graded {
        return Ok((build_algebra(spec)?, 0));
    }
    let cap = spec.degree_cap.unwrap_or(DEFAULT_DEGREE_CAP).max(1);
    let start = spec.truncate.unwrap_or(2).max(1);
    let mut prev_dim = None;
    for n in start..=start + cap {
        let mut s = spec.clone();
        s.truncate = Some(n);
        let a = build_algebra(&s)?;
        if prev_dim == Some(a.dim()) {
            return Ok((a, n));
        }
        prev_dim = Some(a.dim());
    }
    Err(Error::NotArtinian(cap))
}

struct BuildTables {
    /// Reduction tables; for graded builds, one per degree starting at 1.
    tables: Vec<ReductionTable>,
    graded: bool,
    /// First degree with no standard monomials.
    max_degree: usize,
    truncate: usize,
}

fn build_graded(
    field: &PrimeField,
    nvars: usize,
    relations: &[Polynomial],
    cap: usize,
) -> Result<(Vec<Monomial>, BuildTables)> {
    let p = field.modulus() as i64;
    let mut basis: Vec<Monomial> = vec![vec![0; nvars]];
    let mut tables: Vec<ReductionTable> = Vec::new();
    let mut terminated = None;
    for d in 1..=cap {
        let cols = monomials_of_degree(nvars, d);
        let index: HashMap<Monomial, usize> =
            cols.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows: Vec<Vec<i64>> = Vec::new();
        for f in relations {
            let e = f.total_degree();
            if f.terms.is_empty() || e > d {
                continue;
            }
            for m in monomials_of_degree(nvars, d - e) {
                let mut row = vec![0i64; cols.len()];
                for (t, c) in &f.terms {
                    let prod = monomial_mul(&m, t);
                    row[index[&prod]] = (*c).rem_euclid(p);
                }
                rows.push(row);
            }
        }
        let mat = ScalarMatrix::from_rows(field, &rows);
        let (red, pivots) = if rows.is_empty() {
            (ScalarMatrix::zeros(0, cols.len()), Vec::new())
        } else {
            linalg::rref(field, &mat)
        };
        let mut status: Vec<ColStatus> = Vec::with_capacity(cols.len());
        let mut pivot_iter = pivots.iter().enumerate().peekable();
        let mut empty = true;
        for c in 0..cols.len() {
            if let Some(&(r, &pc)) = pivot_iter.peek() {
                if pc == c {
                    status.push(ColStatus::Pivot(r));
                    pivot_iter.next();
                    continue;
                }
            }
            status.push(ColStatus::Standard(basis.len()));
            basis.push(cols[c].clone());
            empty = false;
        }
        let red_rows: Vec<Vec<u64>> = (0..red.rows()).map(|r| red.row(r).to_vec()).collect();
        tables.push(ReductionTable {
            cols,
            status,
            rows: red_rows,
        });
        if empty {
            terminated = Some(d);
            break;
        }
    }
    let Some(max_degree) = terminated else {
        return Err(Error::NotArtinian(cap));
    };
    Ok((
        basis,
        BuildTables {
            tables,
            graded: true,
            max_degree,
            truncate: 0,
        },
    ))
}

fn build_truncated(
    field: &PrimeField,
    nvars: usize,
    relations: &[Polynomial],
    truncate: usize,
) -> (Vec<Monomial>, BuildTables) {
    let p = field.modulus() as i64;
    // all monomials of degree < truncate, by degree then decreasing grevlex
    let mut cols: Vec<Monomial> = Vec::new();
    for d in 0..truncate {
        cols.extend(monomials_of_degree(nvars, d));
    }
    let index: HashMap<Monomial, usize> =
        cols.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for f in relations {
        if f.terms.is_empty() {
            continue;
        }
        for m in &cols {
            let mut row = vec![0i64; cols.len()];
            let mut nonzero = false;
            for (t, c) in &f.terms {
                let prod = monomial_mul(m, t);
                if monomial_degree(&prod) < truncate {
                    row[index[&prod]] = (*c).rem_euclid(p);
                    nonzero = true;
                }
            }
            if nonzero {
                rows.push(row);
            }
        }
    }
    let (red, pivots) = if rows.is_empty() {
        (ScalarMatrix::zeros(0, cols.len()), Vec::new())
    } else {
        let mat = ScalarMatrix::from_rows(field, &rows);
        linalg::rref(field, &mat)
    };
    let mut basis: Vec<Monomial> = Vec::new();
    let mut status: Vec<ColStatus> = Vec::with_capacity(cols.len());
    let mut pivot_iter = pivots.iter().enumerate().peekable();
    for c in 0..cols.len() {
        if let Some(&(r, &pc)) = pivot_iter.peek() {
            if pc == c {
                status.push(ColStatus::Pivot(r));
                pivot_iter.next();
                continue;
            }
        }
        status.push(ColStatus::Standard(basis.len()));
        basis.push(cols[c].clone());
    }
    let red_rows: Vec<Vec<u64>> = (0..red.rows()).map(|r| red.row(r).to_vec()).collect();
    let max_degree = basis
        .iter()
        .map(|m| monomial_degree(m))
        .max()
        .unwrap_or(0)
        + 1;
    let table = ReductionTable {
        cols,
        status,
        rows: red_rows,
    };
    (
        basis,
        BuildTables {
            tables: vec![table],
            graded: false,
            max_degree,
            truncate,
        },
    )
}

fn finish_build(
    field: PrimeField,
    spec: &RingSpec,
    relations: Vec<Polynomial>,
    basis: Vec<Monomial>,
    tables: BuildTables,
) -> Result<ARing> {
    let n = basis.len();
    let nvars = spec.vars.len();
    let index_in_basis: HashMap<Monomial, usize> = basis
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let basis_degree: Vec<usize> = basis.iter().map(|m| monomial_degree(m)).collect();

    // normal form of an arbitrary monomial
    let nf = |mono: &Monomial| -> Vec<u64> {
        let d = monomial_degree(mono);
        if tables.graded {
            if d == 0 {
                let mut v = vec![0u64; n];
                v[0] = 1;
                return v;
            }
            if d >= tables.max_degree {
                return vec![0u64; n];
            }
            let table = &tables.tables[d - 1];
            let col = table
                .cols
                .binary_search_by(|m| grevlex_cmp(mono, m))
                .expect("monomial present in its degree table");
            table.normal_form(col, n, &field)
        } else {
            if d >= tables.truncate {
                return vec![0u64; n];
            }
            let table = &tables.tables[0];
            let col = table
                .cols
                .iter()
                .position(|m| m == mono)
                .expect("monomial present in truncated table");
            table.normal_form(col, n, &field)
        }
    };

    // structure constants: products of basis monomials reduced to normal form
    let mut mult = vec![0u64; n * n * n];
    for i in 0..n {
        for j in i..n {
            let prod = monomial_mul(&basis[i], &basis[j]);
            let v = if let Some(&k) = index_in_basis.get(&prod) {
                let mut e = vec![0u64; n];
                e[k] = 1;
                e
            } else {
                nf(&prod)
            };
            mult[(i * n + j) * n..(i * n + j + 1) * n].copy_from_slice(&v);
            mult[(j * n + i) * n..(j * n + i + 1) * n].copy_from_slice(&v);
        }
    }

    // radical filtration: basis-aligned by monomial degree
    let max_deg = basis_degree.iter().copied().max().unwrap_or(0);
    let mut rad_filtration: Vec<Vec<usize>> = Vec::new();
    for d in 0..=max_deg + 1 {
        rad_filtration.push(
            (0..n)
                .filter(|&i| basis_degree[i] >= d)
                .collect::<Vec<usize>>(),
        );
    }

    // classes of the variables
    let mut generators = Vec::with_capacity(nvars);
    for v in 0..nvars {
        let mut mono = vec![0u32; nvars];
        mono[v] = 1;
        generators.push(nf(&mono));
    }

    let algebra = LocalAlgebra {
        field,
        name: spec.name.clone(),
        vars: spec.vars.clone(),
        relations,
        dim: n,
        basis,
        basis_degree,
        mult,
        rad_filtration,
        generators,
    };
    algebra.verify_structure();
    Ok(Arc::new(algebra))
}

impl LocalAlgebra {
    #[inline]
    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn basis_degree(&self) -> &[usize] {
        &self.basis_degree
    }

    pub fn rad_filtration(&self) -> &[Vec<usize>] {
        &self.rad_filtration
    }

    pub fn generators(&self) -> &[Vec<u64>] {
        &self.generators
    }

    pub fn basis_name(&self, i: usize) -> String {
        if self.basis_degree[i] == 0 {
            "1".to_string()
        } else {
            monomial_display(&self.basis[i], &self.vars)
        }
    }

    #[inline]
    pub fn basis_product(&self, i: usize, j: usize) -> &[u64] {
        let n = self.dim;
        &self.mult[(i * n + j) * n..(i * n + j + 1) * n]
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.dim]
    }

    pub fn one(&self) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = 1;
        v
    }

    pub fn el_is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    /// True when the element lies in the maximal ideal.
    pub fn el_in_radical(&self, a: &[u64]) -> bool {
        a[0] == 0
    }

    pub fn el_add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| self.field.add(x, y)).collect()
    }

    pub fn el_sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| self.field.sub(x, y)).collect()
    }

    pub fn el_scale(&self, c: u64, a: &[u64]) -> Vec<u64> {
        a.iter().map(|&x| self.field.mul(c, x)).collect()
    }

    pub fn el_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = self.dim;
        let p = self.field.modulus() as u128;
        let mut acc = vec![0u128; n];
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n {
                if b[j] == 0 {
                    continue;
                }
                let c = (a[i] as u128 * b[j] as u128) % p;
                let row = self.basis_product(i, j);
                for k in 0..n {
                    acc[k] += c * row[k] as u128;
                }
            }
        }
        acc.into_iter().map(|x| (x % p) as u64).collect()
    }

    pub fn el_pow(&self, a: &[u64], e: u32) -> Vec<u64> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.el_mul(&acc, a);
        }
        acc
    }

    /// Evaluates an integer-coefficient polynomial at the given images
    /// (one element per variable of the polynomial).
    pub fn eval_poly_at(&self, poly: &Polynomial, images: &[Vec<u64>]) -> Vec<u64> {
        assert_eq!(poly.nvars, images.len());
        let mut out = self.zero();
        for (mono, c) in &poly.terms {
            let mut term = self.one();
            for (v, &e) in images.iter().zip(mono) {
                if e > 0 {
                    term = self.el_mul(&term, &self.el_pow(v, e));
                }
            }
            let c = self.field.from_i64(*c);
            out = self.el_add(&out, &self.el_scale(c, &term));
        }
        out
    }

    /// Evaluates a polynomial at the classes of this algebra's own variables.
    pub fn eval_poly(&self, poly: &Polynomial) -> Vec<u64> {
        self.eval_poly_at(poly, &self.generators)
    }

    /// n x n matrix of left multiplication by `a`.
    pub fn left_mult_matrix(&self, a: &[u64]) -> ScalarMatrix {
        let n = self.dim;
        let p = self.field.modulus() as u128;
        let mut m = ScalarMatrix::zeros(n, n);
        for t in 0..n {
            if a[t] == 0 {
                continue;
            }
            let c = a[t] as u128;
            for j in 0..n {
                let row = self.basis_product(t, j);
                for u in 0..n {
                    if row[u] != 0 {
                        let cur = m.get(u, j);
                        m.set(u, j, ((cur as u128 + c * row[u] as u128) % p) as u64);
                    }
                }
            }
        }
        m
    }

    /// Hilbert data: h\[i\] = dim m^i/m^{i+1}, socle as the joint kernel of
    /// multiplication by all variable generators.
    pub fn hilbert(&self) -> HilbertData {
        let sizes: Vec<usize> = self.rad_filtration.iter().map(|s| s.len()).collect();
        let mut h = Vec::new();
        for w in sizes.windows(2) {
            h.push(w[0] - w[1]);
        }
        let embdim = h.get(1).copied().unwrap_or(0);
        let mut stacked = ScalarMatrix::zeros(0, self.dim);
        for g in &self.generators {
            stacked = stacked.vstack(&self.left_mult_matrix(g));
        }
        let socle_dim = self.dim - linalg::rank(&self.field, &stacked);
        HilbertData {
            h,
            length: self.dim,
            embdim,
            socle_dim,
        }
    }

    pub fn is_short(&self) -> bool {
        let h = self.hilbert().h;
        h.len() == 3
    }

    /// True when m^3 = 0 (covers short rings and square-zero ones).
    pub fn radical_cube_zero(&self) -> bool {
        self.basis_degree.iter().all(|&d| d <= 2)
    }

    /// Classification record: short / hypersurface / multiplicity-4 CI
    /// candidate / Lescot denominator data.
    pub fn classify(&self) -> Classification {
        let hd = self.hilbert();
        let short = hd.h.len() == 3;
        let hypersurface = hd.embdim <= 1;
        let ci4_candidate = short && hd.h == vec![1, 2, 1];
        let lescot = if short {
            let d = hd.h[1] as u64;
            let a = hd.h[2] as u64;
            if hd.socle_dim == hd.h[2] {
                lescot_roots(d, a)
            } else {
                None
            }
        } else {
            None
        };
        Classification {
            short,
            hypersurface,
            ci4_candidate,
            lescot,
        }
    }

    /// Inverse of a unit, via solving L_u x = 1.
    pub fn invert_unit(&self, u: &[u64]) -> Result<Vec<u64>> {
        if u[0] % self.field.modulus() == 0 {
            return Err(Error::NotAUnit);
        }
        let lu = self.left_mult_matrix(u);
        let x = linalg::solve(&self.field, &lu, &self.one())
            .expect("unit multiplication matrix is invertible");
        debug_assert_eq!(self.el_mul(u, &x), self.one());
        Ok(x)
    }

    /// Structural invariants, checked at the end of every build:
    /// unit row, commutativity, associativity (exhaustive for dim <= 64)
    /// and the filtration product rule m^i * m^j ⊆ m^{i+j}.
    fn verify_structure(&self) {
        let n = self.dim;
        assert!(n >= 1, "algebra must contain the unit");
        for j in 0..n {
            let row = self.basis_product(0, j);
            let mut e = vec![0u64; n];
            e[j] = 1;
            assert_eq!(row, &e[..], "basis[0] must be a two-sided unit");
        }
        for i in 0..n {
            for j in 0..i {
                assert_eq!(
                    self.basis_product(i, j),
                    self.basis_product(j, i),
                    "structure constants must be commutative"
                );
            }
        }
        for i in 0..n {
            for j in 0..n {
                let di = self.basis_degree[i];
                let dj = self.basis_degree[j];
                for (k, &c) in self.basis_product(i, j).iter().enumerate() {
                    if c != 0 {
                        assert!(
                            self.basis_degree[k] >= di + dj,
                            "product of m^{di} and m^{dj} escaped m^{}",
                            di + dj
                        );
                    }
                }
            }
        }
        if n <= 64 {
            let p = self.field.modulus() as u128;
            for i in 0..n {
                for j in 0..n {
                    let ij = self.basis_product(i, j).to_vec();
                    for k in 0..n {
                        // (b_i b_j) b_k
                        let mut lhs = vec![0u128; n];
                        for (t, &c) in ij.iter().enumerate() {
                            if c != 0 {
                                let row = self.basis_product(t, k);
                                for u in 0..n {
                                    lhs[u] += c as u128 * row[u] as u128;
                                }
                            }
                        }
                        // b_i (b_j b_k)
                        let jk = self.basis_product(j, k);
                        let mut rhs = vec![0u128; n];
                        for (t, &c) in jk.iter().enumerate() {
                            if c != 0 {
                                let row = self.basis_product(i, t);
                                for u in 0..n {
                                    rhs[u] += c as u128 * row[u] as u128;
                                }
                            }
                        }
                        for u in 0..n {
                            assert_eq!(
                                lhs[u] % p,
                                rhs[u] % p,
                                "associativity failed on basis triple ({i},{j},{k})"
                            );
                        }
                    }
                }
            }
        }
        // Artin certificate: filtration strictly decreases to the empty set
        let sizes: Vec<usize> = self.rad_filtration.iter().map(|s| s.len()).collect();
        assert!(sizes.last() == Some(&0), "filtration must reach zero");
        for w in sizes.windows(2) {
            assert!(w[0] > w[1] || (w[0] == 0 && w[1] == 0), "filtration must strictly decrease");
        }
    }
}

fn lescot_roots(d: u64, a: u64) -> Option<LescotData> {
    // roots of z^2 - d z + a, demanding distinct positive integers r1 < r2
    let disc = (d * d).checked_sub(4 * a)?;
    let s = disc.isqrt();
    if s * s != disc || s == 0 {
        return None;
    }
    if (d + s) % 2 != 0 {
        return None;
    }
    let r2 = (d + s) / 2;
    let r1 = (d - s) / 2;
    if r1 == 0 || r1 >= r2 {
        return None;
    }
    debug_assert_eq!(r1 * r2, a);
    Some(LescotData { h: a, r1, r2 })
}

/// Tensor product over k: basis of ordered pairs, structure constants
/// multiplied componentwise. Variable names must not clash.
pub fn tensor_algebra(r: &LocalAlgebra, t: &LocalAlgebra) -> Result<ARing> {
    if r.field.modulus() != t.field.modulus() {
        return Err(Error::CharMismatch(r.field.modulus(), t.field.modulus()));
    }
    for v in r.vars() {
        if t.vars().contains(v) {
            return Err(Error::Parse(format!(
                "variable `{v}` appears in both tensor factors; rename one side"
            )));
        }
    }
    let field = r.field;
    let (nr, nt) = (r.dim, t.dim);
    let n = nr * nt;
    let vr = r.vars.len();
    let vt = t.vars.len();
    let pair = |i: usize, j: usize| i * nt + j;

    let mut basis = Vec::with_capacity(n);
    let mut basis_degree = Vec::with_capacity(n);
    for i in 0..nr {
        for j in 0..nt {
            let mut mono = Vec::with_capacity(vr + vt);
            mono.extend_from_slice(&r.basis[i]);
            mono.extend_from_slice(&t.basis[j]);
            basis.push(mono);
            basis_degree.push(r.basis_degree[i] + t.basis_degree[j]);
        }
    }

    let p = field.modulus() as u128;
    let mut mult = vec![0u64; n * n * n];
    for a in 0..nr {
        for b in 0..nt {
            for c in 0..nr {
                for d in 0..nt {
                    let rrow = r.basis_product(a, c);
                    let trow = t.basis_product(b, d);
                    let dst =
                        &mut mult[(pair(a, b) * n + pair(c, d)) * n..][..n];
                    for (u, &x) in rrow.iter().enumerate() {
                        if x == 0 {
                            continue;
                        }
                        for (v, &y) in trow.iter().enumerate() {
                            if y != 0 {
                                dst[pair(u, v)] = ((x as u128 * y as u128) % p) as u64;
                            }
                        }
                    }
                }
            }
        }
    }

    let max_deg = basis_degree.iter().copied().max().unwrap_or(0);
    let mut rad_filtration = Vec::new();
    for d in 0..=max_deg + 1 {
        rad_filtration.push(
            (0..n)
                .filter(|&i| basis_degree[i] >= d)
                .collect::<Vec<usize>>(),
        );
    }

    let mut generators = Vec::new();
    for g in &r.generators {
        let mut v = vec![0u64; n];
        for (i, &c) in g.iter().enumerate() {
            v[pair(i, 0)] = c;
        }
        generators.push(v);
    }
    for g in &t.generators {
        let mut v = vec![0u64; n];
        for (j, &c) in g.iter().enumerate() {
            v[pair(0, j)] = c;
        }
        generators.push(v);
    }

    let mut vars = r.vars.clone();
    vars.extend_from_slice(&t.vars);
    let mut relations: Vec<Polynomial> = r
        .relations
        .iter()
        .map(|f| f.embed(vr + vt, 0))
        .collect();
    relations.extend(t.relations.iter().map(|f| f.embed(vr + vt, vr)));

    let algebra = LocalAlgebra {
        field,
        name: format!("{}(x){}", r.name, t.name),
        vars,
        relations,
        dim: n,
        basis,
        basis_degree,
        mult,
        rad_filtration,
        generators,
    };
    algebra.verify_structure();

    // Hilbert series of a tensor product is the product of the series
    let hr = r.hilbert().h;
    let ht = t.hilbert().h;
    let mut expected = vec![0usize; hr.len() + ht.len() - 1];
    for (i, a) in hr.iter().enumerate() {
        for (j, b) in ht.iter().enumerate() {
            expected[i + j] += a * b;
        }
    }
    while expected.last() == Some(&0) {
        expected.pop();
    }
    assert_eq!(
        algebra.hilbert().h,
        expected,
        "tensor product violated the Hilbert series product law"
    );

    Ok(Arc::new(algebra))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{m2zero, ring_spec, x2y2};

    #[test]
    fn build_x2y2() {
        let a = x2y2();
        assert_eq!(a.dim(), 4);
        let names: Vec<String> = (0..4).map(|i| a.basis_name(i)).collect();
        assert_eq!(names, vec!["1", "x", "y", "x*y"]);
    }

    #[test]
    fn build_m2zero() {
        let a = m2zero();
        assert_eq!(a.dim(), 3);
        assert_eq!(a.hilbert().h, vec![1, 2]);
    }

    #[test]
    fn ungraded_substitution_collapses() {
        // x = x^2 forces x = x^2 = x^3 = 0 below degree 4
        let a = build_algebra(&ring_spec(
            "collapse",
            &["x"],
            &["x - x^2"],
            false,
            Some(4),
        ))
        .unwrap();
        assert_eq!(a.dim(), 1);
    }

    #[test]
    fn nonlocal_relation_rejected() {
        let err = build_algebra(&ring_spec("bad", &["x"], &["x - 1"], false, Some(3)));
        assert!(matches!(err, Err(Error::NonLocalRelation(_))));
        // constant term divisible by char is fine
        let ok = build_algebra(&ring_spec("ok7", &["x"], &["x^2 - 7"], true, None));
        assert!(ok.is_ok());
    }

    #[test]
    fn not_artinian_detected() {
        let spec = RingSpec {
            degree_cap: Some(6),
            ..ring_spec("poly", &["x", "y"], &["x^2"], true, None)
        };
        assert!(matches!(build_algebra(&spec), Err(Error::NotArtinian(6))));
    }

    #[test]
    fn hilbert_x2y2() {
        let hd = x2y2().hilbert();
        assert_eq!(hd.h, vec![1, 2, 1]);
        assert_eq!(hd.length, 4);
        assert_eq!(hd.embdim, 2);
        assert_eq!(hd.socle_dim, 1);
    }

    #[test]
    fn hilbert_m2zero() {
        let hd = m2zero().hilbert();
        assert_eq!(hd.h, vec![1, 2]);
        assert_eq!(hd.length, 3);
        assert_eq!(hd.socle_dim, 2);
    }

    #[test]
    fn hilbert_of_the_field_itself() {
        let a = build_algebra(&ring_spec("k", &["x"], &["x"], true, None)).unwrap();
        let hd = a.hilbert();
        assert_eq!(hd.h, vec![1]);
        assert_eq!(hd.embdim, 0);
        assert_eq!(hd.socle_dim, 1);
    }

    #[test]
    fn classify_ci4() {
        let c = x2y2().classify();
        assert!(c.short);
        assert!(!c.hypersurface);
        assert!(c.ci4_candidate);
        // r1 = r2 = 1 violates r1 < r2
        assert_eq!(c.lescot, None);
    }

    #[test]
    fn classify_lescot_h2() {
        // Hilbert [1,3,2], socle = m^2: 1 - 3z + 2z^2 = (1-z)(1-2z)
        let a = build_algebra(&ring_spec(
            "h132",
            &["x", "y", "z"],
            &["x^2", "y^2", "z^2", "y*z"],
            true,
            None,
        ))
        .unwrap();
        let hd = a.hilbert();
        assert_eq!(hd.h, vec![1, 3, 2]);
        assert_eq!(hd.socle_dim, 2);
        let c = a.classify();
        assert!(c.short && !c.ci4_candidate && !c.hypersurface);
        assert_eq!(
            c.lescot,
            Some(LescotData { h: 2, r1: 1, r2: 2 })
        );
    }

    #[test]
    fn classify_nonsquare_discriminant() {
        // Hilbert [1,4,2] with socle = m^2: disc = 16 - 8 = 8 is not a square
        let a = build_algebra(&ring_spec(
            "h142",
            &["x", "y", "z", "w"],
            &["y^2", "x*z", "x*w", "y*z", "y*w", "z*w", "z^2 - x^2", "w^2 - x*y"],
            true,
            None,
        ))
        .unwrap();
        let hd = a.hilbert();
        assert_eq!(hd.h, vec![1, 4, 2]);
        assert_eq!(hd.socle_dim, 2);
        assert_eq!(a.classify().lescot, None);
    }

    #[test]
    fn invert_units() {
        let a = x2y2();
        assert_eq!(a.invert_unit(&a.one()).unwrap(), a.one());
        // (1 + y)^{-1} = 1 - y since y^2 = 0
        let y = a.generators()[1].clone();
        let u = a.el_add(&a.one(), &y);
        let inv = a.invert_unit(&u).unwrap();
        assert_eq!(inv, a.el_sub(&a.one(), &y));
        assert_eq!(a.el_mul(&u, &inv), a.one());
        // x is not a unit
        let x = a.generators()[0].clone();
        assert!(matches!(a.invert_unit(&x), Err(Error::NotAUnit)));
    }

    #[test]
    fn tensor_with_field_is_identity() {
        let r = x2y2();
        let k = build_algebra(&ring_spec("k", &["t"], &["t"], true, None)).unwrap();
        let s = tensor_algebra(&r, &k).unwrap();
        assert_eq!(s.dim(), r.dim());
        assert_eq!(s.hilbert().h, r.hilbert().h);
    }

    #[test]
    fn tensor_x2y2_with_z3() {
        let r = x2y2();
        let t = build_algebra(&ring_spec("z3", &["z"], &["z^3"], true, None)).unwrap();
        let s = tensor_algebra(&r, &t).unwrap();
        assert_eq!(s.dim(), 12);
        assert_eq!(s.hilbert().h, vec![1, 3, 4, 3, 1]);
    }

    #[test]
    fn tensor_m2zero_with_z2() {
        let r = m2zero();
        let t = build_algebra(&ring_spec("z2", &["z"], &["z^2"], true, None)).unwrap();
        let s = tensor_algebra(&r, &t).unwrap();
        assert_eq!(s.dim(), 6);
        assert_eq!(s.hilbert().h, vec![1, 3, 2]);
    }

    #[test]
    fn variable_generators_are_nilpotent() {
        for a in [x2y2(), m2zero()] {
            let bound = a.basis_degree().iter().max().unwrap() + 1;
            for g in a.generators() {
                assert!(a.el_is_zero(&a.el_pow(g, bound as u32)));
            }
        }
    }

    #[test]
    fn tensor_rejects_clashing_variable_names() {
        let r = x2y2();
        let t = build_algebra(&ring_spec("xcube", &["x"], &["x^3"], true, None)).unwrap();
        assert!(matches!(tensor_algebra(&r, &t), Err(Error::Parse(_))));
    }

    #[test]
    fn tensor_char_mismatch() {
        let r = x2y2();
        let mut spec = ring_spec("z3", &["z"], &["z^3"], true, None);
        spec.characteristic = 5;
        let t = build_algebra(&spec).unwrap();
        assert!(matches!(
            tensor_algebra(&r, &t),
            Err(Error::CharMismatch(7, 5))
        ));
    }

    /// Independent combinatorial oracle for monomial ideals: count the
    /// staircase monomials not divisible by any relation monomial.
    fn staircase_count(vars: usize, gens: &[Vec<u32>], cap: usize) -> usize {
        let mut count = 0;
        for d in 0..=cap {
            for m in monomials_of_degree(vars, d) {
                let divisible = gens
                    .iter()
                    .any(|g| g.iter().zip(&m).all(|(ge, me)| me >= ge));
                if !divisible {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn monomial_ideal_dimension_matches_staircase() {
        let cases: Vec<(Vec<&str>, Vec<&str>, Vec<Vec<u32>>)> = vec![
            (
                vec!["x", "y"],
                vec!["x^2", "y^2"],
                vec![vec![2, 0], vec![0, 2]],
            ),
            (
                vec!["x", "y"],
                vec!["x^4", "y^2"],
                vec![vec![4, 0], vec![0, 2]],
            ),
            (
                vec!["x", "y", "z"],
                vec!["x^2", "y^2", "z^2", "y*z"],
                vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2], vec![0, 1, 1]],
            ),
            (
                vec!["x", "y", "z"],
                vec!["x^2", "y^3", "z^2"],
                vec![vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 2]],
            ),
        ];
        for (vars, rels, gens) in cases {
            let a = build_algebra(&ring_spec("m", &vars, &rels, true, None)).unwrap();
            assert_eq!(a.dim(), staircase_count(vars.len(), &gens, 16));
        }
    }

    #[test]
    fn stabilized_build_finds_fixed_point() {
        let spec = ring_spec("collapse", &["x"], &["x - x^2"], false, Some(2));
        let (a, n) = build_algebra_stabilized(&spec).unwrap();
        assert_eq!(a.dim(), 1);
        assert!(n >= 2);
        // a genuinely larger ungraded quotient
        let spec2 = ring_spec("trunc", &["x"], &["x^3 - x^4"], false, Some(2));
        let (a2, _) = build_algebra_stabilized(&spec2).unwrap();
        // x^3 = x^4 = x^5 ... = 0 eventually, so basis is 1, x, x^2
        assert_eq!(a2.dim(), 3);
    }
}
