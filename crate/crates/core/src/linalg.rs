//! Exact linear algebra over GF(p).
//!
//! Vectors are plain `Vec<u8>` of residues. A [`Subspace`] always stores the
//! reduced row-echelon basis of its row space, so two subspaces are equal as
//! sets exactly when their representations are identical; this is what lets
//! subspaces serve as map keys across the crate.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{self, AtomicBool, AtomicUsize};

use rayon::prelude::*;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::Field;

/// Largest ambient dimension accepted by subspace enumeration.
pub const MAX_ENUM_DIM: usize = 6;
/// Largest prime accepted by subspace enumeration.
pub const MAX_ENUM_PRIME: u8 = 7;

/// A dense row-major matrix over GF(p).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from rows of residues (reduced mod p).
    pub fn from_rows(field: Field, cols: usize, rows: &[Vec<u8>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {} has length {}, expected {}",
                    i,
                    r.len(),
                    cols
                )));
            }
            data.extend(r.iter().map(|&v| v % field.p()));
        }
        Ok(Matrix {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_i64_rows(field: Field, rows: &[&[i64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<u8>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.reduce(v)).collect())
            .collect();
        Matrix::from_rows(field, cols, &rows)
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
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
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = v % self.field.p();
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<u8> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[u8]) -> Vec<u8> {
        debug_assert_eq!(v.len(), self.cols);
        let f = self.field;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0u8, |acc, (&a, &b)| f.mul_add(acc, a, b))
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.mul_add(out.data[idx], a, other.get(k, j));
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix subtraction".into()));
        }
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Ok(Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c);
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        rref(self).dim()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<{}>[", self.field)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

/// Row-reduces `data` (`rows x cols`) in place, moving the nonzero rows to
/// the top. Returns the pivot columns.
fn rref_in_place(field: Field, data: &mut [u8], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(src) = (r..rows).find(|&i| data[i * cols + c] != 0) else {
            continue;
        };
        if src != r {
            for j in 0..cols {
                data.swap(src * cols + j, r * cols + j);
            }
        }
        let inv = field.inv(data[r * cols + c]);
        if inv != 1 {
            for j in c..cols {
                data[r * cols + j] = field.mul(data[r * cols + j], inv);
            }
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = data[i * cols + c];
            if factor == 0 {
                continue;
            }
            let neg = field.neg(factor);
            for j in c..cols {
                let v = data[r * cols + j];
                if v != 0 {
                    data[i * cols + j] = field.mul_add(data[i * cols + j], neg, v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// A subspace of GF(p)^n held by its reduced row-echelon basis.
#[derive(Clone)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Vec<u8>,
    pivots: Vec<usize>,
}

/// Canonical basis of the row space of `m`.
pub fn rref(m: &Matrix) -> Subspace {
    let mut data = m.data.clone();
    let pivots = rref_in_place(m.field, &mut data, m.rows, m.cols);
    data.truncate(pivots.len() * m.cols);
    Subspace {
        field: m.field,
        ambient: m.cols,
        basis: data,
        pivots,
    }
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Field, ambient: usize) -> Self {
        let m = Matrix::identity(field, ambient);
        Subspace {
            field,
            ambient,
            basis: m.data,
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of the given vectors.
    pub fn span<V: AsRef<[u8]>>(field: Field, ambient: usize, vectors: &[V]) -> Result<Self> {
        let rows: Vec<Vec<u8>> = vectors.iter().map(|v| v.as_ref().to_vec()).collect();
        Ok(rref(&Matrix::from_rows(field, ambient, &rows)?))
    }

    /// Builds a subspace from rows already known to be in canonical form.
    pub(crate) fn from_canonical(field: Field, ambient: usize, basis: Vec<u8>, pivots: Vec<usize>) -> Self {
        debug_assert_eq!(basis.len(), pivots.len() * ambient);
        Subspace {
            field,
            ambient,
            basis,
            pivots,
        }
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.pivots.len() == self.ambient
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u8] {
        &self.basis[i * self.ambient..(i + 1) * self.ambient]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> + '_ {
        self.basis.chunks(self.ambient.max(1)).take(self.dim())
    }

    pub fn basis_vecs(&self) -> Vec<Vec<u8>> {
        self.rows().map(<[u8]>::to_vec).collect()
    }

    pub fn as_matrix(&self) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.dim(),
            cols: self.ambient,
            data: self.basis.clone(),
        }
    }

    /// Residue of `v` after eliminating every pivot coordinate; zero iff `v` lies in the span.
    pub fn reduce(&self, v: &[u8]) -> Vec<u8> {
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w);
        w
    }

    #[inline]
    pub(crate) fn reduce_in_place(&self, w: &mut [u8]) {
        let f = self.field;
        for (r, &c) in self.pivots.iter().enumerate() {
            let coeff = w[c];
            if coeff == 0 {
                continue;
            }
            let neg = f.neg(coeff);
            let row = &self.basis[r * self.ambient..(r + 1) * self.ambient];
            for j in c..self.ambient {
                if row[j] != 0 {
                    w[j] = f.mul_add(w[j], neg, row[j]);
                }
            }
        }
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        debug_assert_eq!(v.len(), self.ambient);
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Coefficients of `v` in the canonical basis, if `v` is in the span.
    pub fn coordinates(&self, v: &[u8]) -> Option<Vec<u8>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&c| v[c]).collect())
    }

    /// Linear combination of the basis rows.
    pub fn combine(&self, coeffs: &[u8]) -> Vec<u8> {
        debug_assert_eq!(coeffs.len(), self.dim());
        let f = self.field;
        let mut out = vec![0u8; self.ambient];
        for (r, &a) in coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (o, &b) in out.iter_mut().zip(self.row(r)) {
                *o = f.mul_add(*o, a, b);
            }
        }
        out
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.p(),
                right: other.field.p(),
            });
        }
        Ok(())
    }

    pub fn try_leq(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(self.leq(other))
    }

    /// `self ⊆ other`. Panics on ambient mismatch; see [`Subspace::try_leq`].
    pub fn leq(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        if self.dim() > other.dim() {
            return false;
        }
        self.rows().all(|r| other.contains(r))
    }

    /// Strict inclusion.
    pub fn properly_in(&self, other: &Subspace) -> bool {
        self.dim() < other.dim() && self.leq(other)
    }

    pub fn try_sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(self.sum(other))
    }

    /// `self + other`. Panics on ambient mismatch; see [`Subspace::try_sum`].
    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        if other.leq(self) {
            return self.clone();
        }
        if self.leq(other) {
            return other.clone();
        }
        let mut data = self.basis.clone();
        data.extend_from_slice(&other.basis);
        let rows = self.dim() + other.dim();
        let pivots = rref_in_place(self.field, &mut data, rows, self.ambient);
        data.truncate(pivots.len() * self.ambient);
        Subspace::from_canonical(self.field, self.ambient, data, pivots)
    }

    /// Adds a single vector.
    pub fn with_vector(&self, v: &[u8]) -> Subspace {
        if self.contains(v) {
            return self.clone();
        }
        let mut data = self.basis.clone();
        data.extend_from_slice(v);
        let pivots = rref_in_place(self.field, &mut data, self.dim() + 1, self.ambient);
        data.truncate(pivots.len() * self.ambient);
        Subspace::from_canonical(self.field, self.ambient, data, pivots)
    }

    pub fn try_intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(self.intersect(other))
    }

    /// `self ∩ other` by the Zassenhaus stacked matrix `[U U; V 0]`.
    /// Panics on ambient mismatch; see [`Subspace::try_intersect`].
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        if self.leq(other) {
            return self.clone();
        }
        if other.leq(self) {
            return other.clone();
        }
        let n = self.ambient;
        let f = self.field;
        let rows = self.dim() + other.dim();
        let mut data = vec![0u8; rows * 2 * n];
        for (i, r) in self.rows().enumerate() {
            data[i * 2 * n..i * 2 * n + n].copy_from_slice(r);
            data[i * 2 * n + n..(i + 1) * 2 * n].copy_from_slice(r);
        }
        for (i, r) in other.rows().enumerate() {
            let i = i + self.dim();
            data[i * 2 * n..i * 2 * n + n].copy_from_slice(r);
        }
        let pivots = rref_in_place(f, &mut data, rows, 2 * n);
        let mut out = Vec::new();
        for (i, &c) in pivots.iter().enumerate() {
            if c >= n {
                out.extend_from_slice(&data[i * 2 * n + n..(i + 1) * 2 * n]);
            }
        }
        // The right halves of the zero-left rows are already reduced against
        // each other, but re-run elimination to land on canonical form.
        let k = out.len() / n.max(1);
        let piv = rref_in_place(f, &mut out, k, n);
        out.truncate(piv.len() * n);
        Subspace::from_canonical(f, n, out, piv)
    }

    /// Every vector of the subspace (p^dim of them). Used by oracles only.
    pub fn elements(&self) -> impl Iterator<Item = Vec<u8>> + '_ {
        let p = self.field.p() as usize;
        let d = self.dim();
        let total = p.pow(d as u32);
        (0..total).map(move |mut idx| {
            let mut coeffs = vec![0u8; d];
            for c in coeffs.iter_mut().rev() {
                *c = (idx % p) as u8;
                idx /= p;
            }
            self.combine(&coeffs)
        })
    }

    /// Vectors of the form `lift(c)` for normalized nonzero coordinate
    /// vectors `c` (first nonzero entry 1): one representative per line.
    pub fn projective_points(&self) -> impl Iterator<Item = Vec<u8>> + '_ {
        normalized_vectors(self.field, self.dim()).map(move |c| self.combine(&c))
    }
}

/// Nonzero vectors of GF(p)^k with leading nonzero entry 1, grouped by the
/// position of that entry (leftmost first).
pub fn normalized_vectors(field: Field, k: usize) -> impl Iterator<Item = Vec<u8>> {
    let p = field.p() as usize;
    (0..k).rev().flat_map(move |lead| {
        // lead = index of the first nonzero entry, counted from the left
        let lead = k - 1 - lead;
        let tail = k - lead - 1;
        (0..p.pow(tail as u32)).map(move |mut idx| {
            let mut v = vec![0u8; k];
            v[lead] = 1;
            for j in (lead + 1..k).rev() {
                v[j] = (idx % p) as u8;
                idx /= p;
            }
            v
        })
    })
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.field.p() == other.field.p() && self.ambient == other.ambient && self.basis == other.basis
    }
}

impl Eq for Subspace {}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.p().hash(state);
        self.ambient.hash(state);
        self.basis.hash(state);
    }
}

/// Canonical order: dimension, then pivot columns, then basis entries.
impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ambient
            .cmp(&other.ambient)
            .then(self.dim().cmp(&other.dim()))
            .then_with(|| self.pivots.cmp(&other.pivots))
            .then_with(|| self.basis.cmp(&other.basis))
            .then(self.field.p().cmp(&other.field.p()))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, r) in self.rows().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "(")?;
            for (j, v) in r.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, ")")?;
        }
        write!(f, ">")
    }
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Subspace", 3)?;
        s.serialize_field("dim", &self.dim())?;
        s.serialize_field("ambient", &self.ambient)?;
        s.serialize_field("basis", &self.basis_vecs())?;
        s.end()
    }
}

/// All solutions of `a·x = b`: a particular solution plus the kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec<u8>,
    pub kernel: Subspace,
}

/// Null space of `a` (vectors `x` with `a·x = 0`).
pub fn kernel(a: &Matrix) -> Subspace {
    let f = a.field;
    let n = a.cols;
    let mut data = a.data.clone();
    let pivots = rref_in_place(f, &mut data, a.rows, n);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len() * n);
    for &fc in &free {
        let mut v = vec![0u8; n];
        v[fc] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(data[r * n + fc]);
        }
        basis.extend(v);
    }
    let k = free.len();
    let piv = rref_in_place(f, &mut basis, k, n);
    Subspace::from_canonical(f, n, basis, piv)
}

/// Solves `a·x = b` (or `a·x = 0` when `b` is `None`). Returns `Ok(None)`
/// when the system is inconsistent.
pub fn solve_linear(a: &Matrix, b: Option<&[u8]>) -> Result<Option<AffineSolution>> {
    let f = a.field;
    let (m, n) = (a.rows, a.cols);
    let zero = vec![0u8; m];
    let b = b.unwrap_or(&zero);
    if b.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has length {}, expected {}",
            b.len(),
            m
        )));
    }
    // Augmented matrix [a | b].
    let w = n + 1;
    let mut data = vec![0u8; m * w];
    for r in 0..m {
        data[r * w..r * w + n].copy_from_slice(a.row(r));
        data[r * w + n] = b[r] % f.p();
    }
    let pivots = rref_in_place(f, &mut data, m, w);
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut particular = vec![0u8; n];
    for (r, &pc) in pivots.iter().enumerate() {
        particular[pc] = data[r * w + n];
    }
    Ok(Some(AffineSolution {
        particular,
        kernel: kernel(a),
    }))
}

/// Number of `k`-dimensional subspaces of GF(p)^n.
pub fn gaussian_binomial(n: usize, k: usize, p: u8) -> u128 {
    if k > n {
        return 0;
    }
    let q = p as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Total number of subspaces of GF(p)^n.
pub fn subspace_count(n: usize, p: u8) -> u128 {
    (0..=n).map(|k| gaussian_binomial(n, k, p)).sum()
}

fn check_budget(n: usize, field: Field) -> Result<()> {
    if n > MAX_ENUM_DIM || field.p() > MAX_ENUM_PRIME {
        return Err(Error::BudgetExceeded {
            n,
            p: field.p(),
            count: subspace_count(n, field.p()),
            max_n: MAX_ENUM_DIM,
            max_p: MAX_ENUM_PRIME,
        });
    }
    Ok(())
}

/// Positions (row-major) of the free entries of an echelon basis with the given pivots.
fn free_positions(pivots: &[usize], n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for (r, &pc) in pivots.iter().enumerate() {
        for c in pc + 1..n {
            if !pivots.contains(&c) {
                out.push(r * n + c);
            }
        }
    }
    out
}

fn template(pivots: &[usize], n: usize) -> Vec<u8> {
    let mut t = vec![0u8; pivots.len() * n];
    for (r, &pc) in pivots.iter().enumerate() {
        t[r * n + pc] = 1;
    }
    t
}

/// k-subsets of 0..n in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            break;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
    out
}

/// Streams every subspace of GF(p)^n exactly once, in canonical order:
/// dimension ascending, then pivot columns, then basis entries.
pub fn enumerate_subspaces(n: usize, field: Field, dim_filter: Option<usize>) -> Result<SubspaceIter> {
    check_budget(n, field)?;
    let dims: Vec<usize> = match dim_filter {
        Some(d) if d <= n => vec![d],
        Some(_) => vec![],
        None => (0..=n).collect(),
    };
    let mut blocks = Vec::new();
    for d in dims {
        for piv in combinations(n, d) {
            blocks.push(piv);
        }
    }
    Ok(SubspaceIter {
        field,
        n,
        blocks,
        block: 0,
        free: Vec::new(),
        digits: Vec::new(),
        fresh: true,
    })
}

pub struct SubspaceIter {
    field: Field,
    n: usize,
    blocks: Vec<Vec<usize>>,
    block: usize,
    free: Vec<usize>,
    digits: Vec<u8>,
    fresh: bool,
}

impl Iterator for SubspaceIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        let p = self.field.p();
        loop {
            if self.block >= self.blocks.len() {
                return None;
            }
            if self.fresh {
                self.free = free_positions(&self.blocks[self.block], self.n);
                self.digits = vec![0; self.free.len()];
                self.fresh = false;
            } else {
                // Increment the free-entry counter, last position fastest.
                let mut carried = true;
                for d in self.digits.iter_mut().rev() {
                    *d += 1;
                    if *d < p {
                        carried = false;
                        break;
                    }
                    *d = 0;
                }
                if carried {
                    self.block += 1;
                    self.fresh = true;
                    continue;
                }
            }
            let pivots = self.blocks[self.block].clone();
            let mut basis = template(&pivots, self.n);
            for (&pos, &v) in self.free.iter().zip(&self.digits) {
                basis[pos] = v;
            }
            return Some(Subspace::from_canonical(self.field, self.n, basis, pivots));
        }
    }
}

const CHUNK: u64 = 1 << 12;

/// Parallel filter over all `dim`-dimensional subspaces of GF(p)^n. The
/// predicate sees the raw echelon basis; results come back in enumeration
/// order regardless of scheduling.
pub fn filter_subspaces<P>(n: usize, field: Field, dim: usize, pred: P) -> Result<Vec<Subspace>>
where
    P: Fn(&[u8]) -> bool + Sync,
{
    filter_subspaces_capped(n, field, dim, usize::MAX, pred)
}

/// [`filter_subspaces`] refusing with [`Error::SearchCap`] once more than `cap` subspaces pass.
pub fn filter_subspaces_capped<P>(n: usize, field: Field, dim: usize, cap: usize, pred: P) -> Result<Vec<Subspace>>
where
    P: Fn(&[u8]) -> bool + Sync,
{
    check_budget(n, field)?;
    let kept = AtomicUsize::new(0);
    let over = AtomicBool::new(false);
    let p = field.p() as u64;
    let mut tasks = Vec::new();
    let blocks = combinations(n, dim);
    for (b, piv) in blocks.iter().enumerate() {
        let total = p.pow(free_positions(piv, n).len() as u32);
        let mut start = 0;
        while start < total {
            tasks.push((b, start, (start + CHUNK).min(total)));
            start += CHUNK;
        }
    }
    let chunks: Vec<Vec<Subspace>> = tasks
        .par_iter()
        .map(|&(b, start, end)| {
            let pivots = &blocks[b];
            let free = free_positions(pivots, n);
            let mut basis = template(pivots, n);
            let mut digits = vec![0u8; free.len()];
            let mut idx = start;
            for d in digits.iter_mut().rev() {
                *d = (idx % p) as u8;
                idx /= p;
            }
            let mut out = Vec::new();
            for step in start..end {
                if over.load(atomic::Ordering::Relaxed) {
                    break;
                }
                if step > start {
                    for d in digits.iter_mut().rev() {
                        *d += 1;
                        if (*d as u64) < p {
                            break;
                        }
                        *d = 0;
                    }
                }
                for (&pos, &v) in free.iter().zip(&digits) {
                    basis[pos] = v;
                }
                if pred(&basis) {
                    if kept.fetch_add(1, atomic::Ordering::Relaxed) >= cap {
                        over.store(true, atomic::Ordering::Relaxed);
                        break;
                    }
                    out.push(Subspace::from_canonical(field, n, basis.clone(), pivots.clone()));
                }
            }
            out
        })
        .collect();
    if over.load(atomic::Ordering::Relaxed) {
        return Err(Error::SearchCap(format!(
            "more than {cap} {dim}-dimensional subspaces of GF({})^{n} pass the filter",
            field.p()
        )));
    }
    Ok(chunks.into_iter().flatten().collect())
}

/// Coordinates on a quotient W/U: `project` is a linear surjection from W
/// with kernel exactly U, `lift` a right inverse.
#[derive(Clone, Debug)]
pub struct QuotientCoords {
    bottom: Subspace,
    complement: Subspace,
}

/// Coordinate system for `w / u`.
pub fn quotient_coords(w: &Subspace, u: &Subspace) -> Result<QuotientCoords> {
    if w.ambient != u.ambient {
        return Err(Error::AmbientMismatch {
            left: w.ambient,
            right: u.ambient,
        });
    }
    if !u.leq(w) {
        return Err(Error::NotContained {
            sub: u.dim(),
            sup: w.dim(),
        });
    }
    let reduced: Vec<Vec<u8>> = w.rows().map(|r| u.reduce(r)).collect();
    let complement = Subspace::span(w.field, w.ambient, &reduced)?;
    debug_assert_eq!(complement.dim(), w.dim() - u.dim());
    Ok(QuotientCoords {
        bottom: u.clone(),
        complement,
    })
}

impl QuotientCoords {
    /// Dimension of the quotient.
    pub fn dim(&self) -> usize {
        self.complement.dim()
    }

    pub fn bottom(&self) -> &Subspace {
        &self.bottom
    }

    /// The span of the lifted basis (a complement of the bottom inside the top).
    pub fn complement(&self) -> &Subspace {
        &self.complement
    }

    /// Quotient coordinates of `v`, which must lie in the top space.
    pub fn project(&self, v: &[u8]) -> Vec<u8> {
        let r = self.bottom.reduce(v);
        self.complement.pivots.iter().map(|&c| r[c]).collect()
    }

    pub fn lift(&self, coords: &[u8]) -> Vec<u8> {
        self.complement.combine(coords)
    }

    /// Lift of the i-th quotient basis vector.
    pub fn basis_lift(&self, i: usize) -> &[u8] {
        self.complement.row(i)
    }

    /// Image of a subspace (lying in the top space) in quotient coordinates.
    pub fn project_subspace(&self, s: &Subspace) -> Subspace {
        let rows: Vec<Vec<u8>> = s.rows().map(|r| self.project(r)).collect();
        Subspace::span(s.field, self.dim(), &rows).expect("consistent lengths")
    }

    /// Preimage of a quotient subspace: lift plus the bottom.
    pub fn lift_subspace(&self, s: &Subspace) -> Subspace {
        let rows: Vec<Vec<u8>> = s.rows().map(|r| self.lift(r)).collect();
        let lifted = Subspace::span(self.bottom.field, self.bottom.ambient, &rows).expect("consistent lengths");
        lifted.sum(&self.bottom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(p: u8) -> Field {
        Field::new(p).unwrap()
    }

    fn sp(p: u8, n: usize, rows: &[&[u8]]) -> Subspace {
        let rows: Vec<Vec<u8>> = rows.iter().map(|r| r.to_vec()).collect();
        Subspace::span(gf(p), n, &rows).unwrap()
    }

    #[test]
    fn rref_examples() {
        let s = sp(2, 2, &[&[1, 1], &[0, 1]]);
        assert_eq!(s.basis_vecs(), vec![vec![1, 0], vec![0, 1]]);
        let s = sp(2, 2, &[&[1, 1], &[1, 1]]);
        assert_eq!(s.basis_vecs(), vec![vec![1, 1]]);
        let s = sp(5, 2, &[&[2, 4]]);
        assert_eq!(s.basis_vecs(), vec![vec![1, 2]]);
        let z = rref(&Matrix::zeros(gf(3), 2, 3));
        assert!(z.is_zero());
    }

    #[test]
    fn sum_examples() {
        let e1 = sp(2, 2, &[&[1, 0]]);
        let e2 = sp(2, 2, &[&[0, 1]]);
        assert!(e1.sum(&e2).is_full());
        assert_eq!(e1.sum(&e1), e1);
        let s = sp(2, 3, &[&[1, 1, 0]]).sum(&sp(2, 3, &[&[0, 1, 1]]));
        assert_eq!(s.dim(), 2);
        // brute-force closure: every sum of two elements stays inside
        let elems: Vec<Vec<u8>> = s.elements().collect();
        assert_eq!(elems.len(), 4);
        assert!(elems.contains(&vec![1, 0, 1]));
        for a in &elems {
            for b in &elems {
                let c: Vec<u8> = a.iter().zip(b).map(|(x, y)| (x + y) % 2).collect();
                assert!(elems.contains(&c));
            }
        }
    }

    #[test]
    fn intersect_examples() {
        let e1 = sp(2, 2, &[&[1, 0]]);
        let e2 = sp(2, 2, &[&[0, 1]]);
        assert!(e1.intersect(&e2).is_zero());
        assert_eq!(e1.intersect(&e1), e1);
        let h1 = sp(2, 3, &[&[1, 0, 0], &[0, 1, 0]]);
        let h2 = sp(2, 3, &[&[0, 1, 0], &[0, 0, 1]]);
        let i = h1.intersect(&h2);
        let brute: Vec<Vec<u8>> = Subspace::full(gf(2), 3)
            .elements()
            .filter(|v| h1.contains(v) && h2.contains(v))
            .collect();
        assert_eq!(i.dim(), 1);
        assert_eq!(brute.len(), 2);
        assert!(brute.iter().all(|v| i.contains(v)));
    }

    #[test]
    fn leq_examples() {
        let u = sp(2, 2, &[&[1, 1]]);
        let e1 = sp(2, 2, &[&[1, 0]]);
        assert!(Subspace::zero(gf(2), 2).leq(&u));
        assert!(u.leq(&u));
        assert!(!u.leq(&e1));
        assert!(matches!(
            u.try_leq(&sp(2, 3, &[&[1, 0, 0]])),
            Err(Error::AmbientMismatch { .. })
        ));
        assert!(u.try_sum(&sp(2, 3, &[&[1, 0, 0]])).is_err());
        assert!(u.try_intersect(&sp(2, 3, &[&[1, 0, 0]])).is_err());
    }

    #[test]
    fn solve_examples() {
        let f = gf(3);
        let id = Matrix::identity(f, 3);
        let sol = solve_linear(&id, Some(&[1, 2, 0])).unwrap().unwrap();
        assert_eq!(sol.particular, vec![1, 2, 0]);
        assert!(sol.kernel.is_zero());
        let z = Matrix::zeros(f, 2, 3);
        let sol = solve_linear(&z, None).unwrap().unwrap();
        assert!(sol.kernel.is_full());
        // x + 2y = 0 over GF(3): substitute all 9 candidates
        let a = Matrix::from_i64_rows(f, &[&[1, 2]]).unwrap();
        let sol = solve_linear(&a, None).unwrap().unwrap();
        let brute: Vec<Vec<u8>> = (0..3)
            .flat_map(|x| (0..3).map(move |y| vec![x, y]))
            .filter(|v| (v[0] + 2 * v[1]) % 3 == 0)
            .collect();
        assert_eq!(brute.len(), 3);
        assert_eq!(sol.kernel, sp(3, 2, &[&[1, 1]]));
        assert!(brute.iter().all(|v| sol.kernel.contains(v)));
        // inconsistent
        let a = Matrix::from_i64_rows(f, &[&[1, 1], &[1, 1]]).unwrap();
        assert!(solve_linear(&a, Some(&[0, 1])).unwrap().is_none());
        assert!(solve_linear(&a, Some(&[0])).is_err());
    }

    #[test]
    fn enumeration_counts() {
        // independent count: distinct row spaces of all tuples of vectors
        let brute = |n: usize, p: u8| {
            let f = gf(p);
            let all: Vec<Vec<u8>> = Subspace::full(f, n).elements().collect();
            let mut seen = std::collections::HashSet::new();
            seen.insert(Subspace::zero(f, n));
            let mut frontier: Vec<Subspace> = vec![Subspace::zero(f, n)];
            while let Some(s) = frontier.pop() {
                for v in &all {
                    let t = s.with_vector(v);
                    if seen.insert(t.clone()) {
                        frontier.push(t);
                    }
                }
            }
            seen.len() as u128
        };
        for (n, p, expected) in [(2, 2, 5u128), (3, 2, 16), (4, 2, 67), (3, 3, 28)] {
            assert_eq!(subspace_count(n, p), expected);
            assert_eq!(brute(n, p), expected);
            let list: Vec<Subspace> = enumerate_subspaces(n, gf(p), None).unwrap().collect();
            assert_eq!(list.len() as u128, expected);
            let set: std::collections::HashSet<_> = list.iter().cloned().collect();
            assert_eq!(set.len(), list.len());
            // canonical order
            assert!(list.windows(2).all(|w| w[0] < w[1]));
            for s in &list {
                assert_eq!(&rref(&s.as_matrix()), s);
            }
        }
        for p in [2, 3, 5, 7] {
            assert_eq!(enumerate_subspaces(1, gf(p), None).unwrap().count(), 2);
        }
        assert_eq!(gaussian_binomial(3, 1, 2), 7);
        assert_eq!(enumerate_subspaces(3, gf(2), Some(1)).unwrap().count(), 7);
    }

    #[test]
    fn budget_refusal() {
        let err = enumerate_subspaces(7, gf(2), None).err().unwrap();
        assert!(matches!(err, Error::BudgetExceeded { n: 7, count, .. } if count == subspace_count(7, 2)));
        assert!(enumerate_subspaces(3, gf(11), None).is_err());
    }

    #[test]
    fn parallel_filter_matches_iterator() {
        let f = gf(3);
        for d in 0..=4 {
            let a: Vec<Subspace> = enumerate_subspaces(4, f, Some(d)).unwrap().collect();
            let b = filter_subspaces(4, f, d, |_| true).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn quotient_examples() {
        let f = gf(2);
        let w = Subspace::full(f, 3);
        let q = quotient_coords(&w, &Subspace::zero(f, 3)).unwrap();
        assert_eq!(q.dim(), 3);
        assert_eq!(q.project(&[1, 0, 1]), vec![1, 0, 1]);
        let q = quotient_coords(&w, &w).unwrap();
        assert_eq!(q.dim(), 0);
        let e3 = sp(2, 3, &[&[0, 0, 1]]);
        let q = quotient_coords(&w, &e3).unwrap();
        assert_eq!(q.dim(), 2);
        assert_eq!(q.project(&[0, 0, 1]), vec![0, 0]);
        assert!(quotient_coords(&e3, &w).is_err());
    }

    #[test]
    fn dimension_formula_on_all_pairs() {
        let all: Vec<Subspace> = enumerate_subspaces(3, gf(2), None).unwrap().collect();
        for u in &all {
            for v in &all {
                assert_eq!(u.sum(v).dim() + u.intersect(v).dim(), u.dim() + v.dim());
            }
        }
    }

    #[test]
    fn normalized_vectors_count() {
        let f = gf(3);
        let v: Vec<_> = normalized_vectors(f, 3).collect();
        assert_eq!(v.len(), 13);
        let set: std::collections::HashSet<_> = v.iter().cloned().collect();
        assert_eq!(set.len(), 13);
    }

    fn arb_rows(p: u8, n: usize) -> impl Strategy<Value = Vec<Vec<u8>>> {
        prop::collection::vec(prop::collection::vec(0..p, n), 0..=n + 1)
    }

    proptest! {
        #[test]
        fn canonical_under_row_mixing(rows in arb_rows(5, 4), mix in prop::collection::vec(0u8..5, 36)) {
            let f = gf(5);
            let s = Subspace::span(f, 4, &rows).unwrap();
            prop_assert_eq!(&rref(&s.as_matrix()), &s);
            // random combinations of the rows span a subspace of s; adding
            // them to the original rows leaves s unchanged
            let mut mixed = rows.clone();
            for (k, chunk) in mix.chunks(rows.len().max(1)).enumerate().take(3) {
                let mut v = vec![0u8; 4];
                for (r, &c) in rows.iter().zip(chunk) {
                    for j in 0..4 { v[j] = f.mul_add(v[j], c, r[j]); }
                }
                mixed.insert(k.min(mixed.len()), v);
            }
            prop_assert_eq!(Subspace::span(f, 4, &mixed).unwrap(), s);
        }

        #[test]
        fn modular_law(a in arb_rows(3, 4), b in arb_rows(3, 4), c in arb_rows(3, 4)) {
            let f = gf(3);
            let u0 = Subspace::span(f, 4, &a).unwrap();
            let v = Subspace::span(f, 4, &b).unwrap();
            let w = Subspace::span(f, 4, &c).unwrap().sum(&u0);
            let u = u0;
            prop_assert!(u.leq(&w));
            prop_assert_eq!(u.sum(&v.intersect(&w)), u.sum(&v).intersect(&w));
        }

        #[test]
        fn solve_linear_solutions_check(rows in prop::collection::vec(prop::collection::vec(0u8..7, 4), 1..5), x in prop::collection::vec(0u8..7, 4)) {
            let f = gf(7);
            let a = Matrix::from_rows(f, 4, &rows).unwrap();
            let b = a.mul_vec(&x);
            let sol = solve_linear(&a, Some(&b)).unwrap().expect("consistent by construction");
            prop_assert_eq!(a.mul_vec(&sol.particular), b.clone());
            for k in sol.kernel.rows() {
                prop_assert!(a.mul_vec(k).iter().all(|&v| v == 0));
            }
            prop_assert_eq!(sol.kernel.dim() + a.rank(), 4);
        }

        #[test]
        fn quotient_project_lift(rows_u in arb_rows(3, 4), rows_w in arb_rows(3, 4), coords in prop::collection::vec(0u8..3, 4)) {
            let f = gf(3);
            let u = Subspace::span(f, 4, &rows_u).unwrap();
            let w = Subspace::span(f, 4, &rows_w).unwrap().sum(&u);
            let q = quotient_coords(&w, &u).unwrap();
            prop_assert_eq!(q.dim(), w.dim() - u.dim());
            let c = &coords[..q.dim()];
            prop_assert_eq!(q.project(&q.lift(c)), c.to_vec());
            for r in u.rows() {
                prop_assert!(q.project(r).iter().all(|&v| v == 0));
            }
            prop_assert_eq!(q.lift_subspace(&q.project_subspace(&w)), w);
        }
    }
}
