//! Lie algebras given by structure constants.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{quotient_coords, Matrix, QuotientCoords, Subspace};

/// The first axiom failure found by [`LieAlgebra::validate`]. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum AxiomViolation {
    /// `c[i][j][k] != -c[j][i][k]`
    Antisymmetry { i: usize, j: usize, k: usize, forward: u8, backward: u8 },
    /// `[x_i, x_i]` has a nonzero `k`-th coordinate.
    SelfBracket { i: usize, k: usize, value: u8 },
    /// `[x_i,[x_j,x_k]]` differs from `-([x_j,[x_k,x_i]] + [x_k,[x_i,x_j]])`.
    Jacobi { i: usize, j: usize, k: usize, lhs: Vec<u8>, rhs: Vec<u8> },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::Antisymmetry { i, j, k, forward, backward } => write!(
                f,
                "antisymmetry fails at ({},{},{}): c[{}][{}][{}] = {}, c[{}][{}][{}] = {}",
                i + 1,
                j + 1,
                k + 1,
                i + 1,
                j + 1,
                k + 1,
                forward,
                j + 1,
                i + 1,
                k + 1,
                backward
            ),
            AxiomViolation::SelfBracket { i, k, value } => {
                write!(f, "c[{}][{}][{}] = {} but [x,x] must vanish", i + 1, i + 1, k + 1, value)
            }
            AxiomViolation::Jacobi { i, j, k, lhs, rhs } => write!(
                f,
                "Jacobi identity fails at ({},{},{}): [x{},[x{},x{}]] = {:?} but -([x{},[x{},x{}]] + [x{},[x{},x{}]]) = {:?}",
                i + 1,
                j + 1,
                k + 1,
                i + 1,
                j + 1,
                k + 1,
                lhs,
                j + 1,
                k + 1,
                i + 1,
                k + 1,
                i + 1,
                j + 1,
                rhs
            ),
        }
    }
}

/// A finite-dimensional Lie algebra over GF(p) with basis `x_1..x_n` and
/// `[x_i, x_j] = Σ_k c[i][j][k] x_k`.
///
/// Both `c[i][j]` and `c[j][i]` are stored; [`LieAlgebra::validate`] checks
/// they agree.
#[derive(Clone)]
pub struct LieAlgebra {
    field: Field,
    dim: usize,
    sc: Vec<u8>,
    pairs: Vec<Vec<(usize, u8)>>,
    labels: Vec<String>,
}

impl LieAlgebra {
    /// Builds and validates an algebra from a dense tensor indexed `(i*n + j)*n + k`.
    pub fn new(field: Field, dim: usize, sc: Vec<u8>, labels: Option<Vec<String>>) -> Result<Self> {
        let l = Self::from_raw(field, dim, sc, labels)?;
        l.validate().map_err(Error::Axiom)?;
        Ok(l)
    }

    /// Builds an algebra without checking the Lie axioms.
    pub fn from_raw(field: Field, dim: usize, sc: Vec<u8>, labels: Option<Vec<String>>) -> Result<Self> {
        if sc.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "structure tensor has {} entries, expected {}",
                sc.len(),
                dim * dim * dim
            )));
        }
        let labels = match labels {
            Some(l) if l.len() == dim => l,
            Some(l) => {
                return Err(Error::DimensionMismatch(format!(
                    "{} labels for dimension {}",
                    l.len(),
                    dim
                )))
            }
            None => (1..=dim).map(|i| format!("x{i}")).collect(),
        };
        let sc: Vec<u8> = sc.into_iter().map(|v| v % field.p()).collect();
        let mut pairs = vec![Vec::new(); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let c = sc[(i * dim + j) * dim + k];
                    if c != 0 {
                        pairs[i * dim + j].push((k, c));
                    }
                }
            }
        }
        Ok(LieAlgebra {
            field,
            dim,
            sc,
            pairs,
            labels,
        })
    }

    /// Builds an algebra from brackets `[x_i, x_j] = Σ c x_k` given as
    /// `(i, j, k, c)` with 0-based indices; the antisymmetric partner is filled in.
    pub fn from_brackets(field: Field, dim: usize, brackets: &[(usize, usize, usize, i64)], labels: Option<Vec<String>>) -> Result<Self> {
        let mut sc = vec![0u8; dim * dim * dim];
        for &(i, j, k, c) in brackets {
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::DimensionMismatch(format!("index out of range in ({i},{j},{k})")));
            }
            let c = field.reduce(c);
            let a = (i * dim + j) * dim + k;
            let b = (j * dim + i) * dim + k;
            sc[a] = field.add(sc[a], c);
            sc[b] = field.sub(sc[b], c);
        }
        LieAlgebra::new(field, dim, sc, labels)
    }

    pub fn abelian(field: Field, dim: usize) -> Self {
        LieAlgebra::from_raw(field, dim, vec![0; dim * dim * dim], None).expect("shape is consistent")
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dim {
            return Err(Error::DimensionMismatch("label count".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    #[inline]
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> u8 {
        self.sc[(i * self.dim + j) * self.dim + k]
    }

    /// Nonzero `(k, c)` entries of `[x_i, x_j]`.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[(usize, u8)] {
        &self.pairs[i * self.dim + j]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<u8> {
        let mut v = vec![0u8; self.dim];
        v[i] = 1;
        v
    }

    pub fn zero_subspace(&self) -> Subspace {
        Subspace::zero(self.field, self.dim)
    }

    pub fn whole(&self) -> Subspace {
        Subspace::full(self.field, self.dim)
    }

    pub fn span<V: AsRef<[u8]>>(&self, vectors: &[V]) -> Result<Subspace> {
        Subspace::span(self.field, self.dim, vectors)
    }

    pub fn is_abelian(&self) -> bool {
        self.sc.iter().all(|&c| c == 0)
    }

    /// Checks antisymmetry on every index pair and Jacobi on every basis triple.
    pub fn validate(&self) -> std::result::Result<(), AxiomViolation> {
        let n = self.dim;
        let f = self.field;
        for i in 0..n {
            for k in 0..n {
                let value = self.structure_constant(i, i, k);
                if value != 0 {
                    return Err(AxiomViolation::SelfBracket { i, k, value });
                }
            }
            for j in i + 1..n {
                for k in 0..n {
                    let forward = self.structure_constant(i, j, k);
                    let backward = self.structure_constant(j, i, k);
                    if f.add(forward, backward) != 0 {
                        return Err(AxiomViolation::Antisymmetry { i, j, k, forward, backward });
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (xi, xj, xk) = (self.basis_vector(i), self.basis_vector(j), self.basis_vector(k));
                    let lhs = self.bracket(&xi, &self.bracket(&xj, &xk));
                    let b = self.bracket(&xj, &self.bracket(&xk, &xi));
                    let c = self.bracket(&xk, &self.bracket(&xi, &xj));
                    let rhs: Vec<u8> = b.iter().zip(&c).map(|(&u, &v)| f.neg(f.add(u, v))).collect();
                    if lhs != rhs {
                        return Err(AxiomViolation::Jacobi { i, j, k, lhs, rhs });
                    }
                }
            }
        }
        Ok(())
    }

    /// `[u, v]`.
    pub fn bracket(&self, u: &[u8], v: &[u8]) -> Vec<u8> {
        let mut out = vec![0u8; self.dim];
        self.bracket_into(u, v, &mut out);
        out
    }

    #[inline]
    pub(crate) fn bracket_into(&self, u: &[u8], v: &[u8], out: &mut [u8]) {
        let f = self.field;
        out.iter_mut().for_each(|o| *o = 0);
        for (i, &a) in u.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in v.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let ab = f.mul(a, b);
                for &(k, c) in &self.pairs[i * self.dim + j] {
                    out[k] = f.mul_add(out[k], ab, c);
                }
            }
        }
    }

    /// Matrix of `v ↦ [x, v]`; column `j` holds `[x, x_j]`.
    pub fn ad_matrix(&self, x: &[u8]) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.bracket(x, &self.basis_vector(j));
            for (k, &v) in col.iter().enumerate() {
                m.set(k, j, v);
            }
        }
        m
    }

    /// `[U, V]`, the span of all brackets of basis pairs.
    pub fn subspace_product(&self, u: &Subspace, v: &Subspace) -> Subspace {
        let mut gens = Vec::with_capacity(u.dim() * v.dim());
        for a in u.rows() {
            for b in v.rows() {
                gens.push(self.bracket(a, b));
            }
        }
        Subspace::span(self.field, self.dim, &gens).expect("bracket has ambient length")
    }

    pub fn is_subalgebra(&self, u: &Subspace) -> bool {
        let mut buf = vec![0u8; self.dim];
        let rows: Vec<&[u8]> = u.rows().collect();
        for a in 0..rows.len() {
            for b in a + 1..rows.len() {
                self.bracket_into(rows[a], rows[b], &mut buf);
                u.reduce_in_place(&mut buf);
                if buf.iter().any(|&x| x != 0) {
                    return false;
                }
            }
        }
        true
    }

    /// Subalgebra test on a raw reduced echelon basis (`d x n`, no zero rows).
    pub(crate) fn closed_under_bracket(&self, basis: &[u8]) -> bool {
        let n = self.dim;
        let f = self.field;
        if n == 0 {
            return true;
        }
        let d = basis.len() / n;
        let mut pivots = [0usize; 16];
        for r in 0..d {
            pivots[r] = basis[r * n..(r + 1) * n].iter().position(|&x| x != 0).unwrap_or(n);
        }
        let mut buf = [0u8; 16];
        for a in 0..d {
            for b in a + 1..d {
                let w = &mut buf[..n];
                self.bracket_into(&basis[a * n..(a + 1) * n], &basis[b * n..(b + 1) * n], w);
                for r in 0..d {
                    let c = pivots[r];
                    let coeff = w[c];
                    if coeff == 0 {
                        continue;
                    }
                    let neg = f.neg(coeff);
                    let row = &basis[r * n..(r + 1) * n];
                    for j in c..n {
                        if row[j] != 0 {
                            w[j] = f.mul_add(w[j], neg, row[j]);
                        }
                    }
                }
                if w.iter().any(|&x| x != 0) {
                    return false;
                }
            }
        }
        true
    }

    /// `[L, U] ⊆ U`.
    pub fn is_ideal(&self, u: &Subspace) -> bool {
        let mut buf = vec![0u8; self.dim];
        for i in 0..self.dim {
            let e = self.basis_vector(i);
            for r in u.rows() {
                self.bracket_into(&e, r, &mut buf);
                u.reduce_in_place(&mut buf);
                if buf.iter().any(|&x| x != 0) {
                    return false;
                }
            }
        }
        true
    }

    /// `L / ideal` with explicit projection and lift.
    pub fn quotient(&self, ideal: &Subspace) -> Result<QuotientPresentation> {
        if ideal.ambient() != self.dim {
            return Err(Error::AmbientMismatch {
                left: self.dim,
                right: ideal.ambient(),
            });
        }
        if !self.is_ideal(ideal) {
            return Err(Error::NotIdeal);
        }
        let coords = quotient_coords(&self.whole(), ideal)?;
        let m = coords.dim();
        let mut sc = vec![0u8; m * m * m];
        for r in 0..m {
            for s in 0..m {
                let b = self.bracket(coords.basis_lift(r), coords.basis_lift(s));
                for (k, v) in coords.project(&b).into_iter().enumerate() {
                    sc[(r * m + s) * m + k] = v;
                }
            }
        }
        let labels = (0..m).map(|r| format!("[{}]", self.fmt_vector(coords.basis_lift(r)))).collect();
        let algebra = LieAlgebra::new(self.field, m, sc, Some(labels))?;
        Ok(QuotientPresentation {
            ideal: ideal.clone(),
            coords,
            algebra,
        })
    }

    /// The structure of a subalgebra `U` in the coordinates of its canonical basis.
    pub fn restrict(&self, u: &Subspace) -> Result<LieAlgebra> {
        if !self.is_subalgebra(u) {
            return Err(Error::NotSubalgebra);
        }
        let d = u.dim();
        let mut sc = vec![0u8; d * d * d];
        for a in 0..d {
            for b in 0..d {
                let br = self.bracket(u.row(a), u.row(b));
                let c = u.coordinates(&br).expect("closed under bracket");
                for (k, v) in c.into_iter().enumerate() {
                    sc[(a * d + b) * d + k] = v;
                }
            }
        }
        let labels = u.rows().map(|r| self.fmt_vector(r)).collect();
        LieAlgebra::new(self.field, d, sc, Some(labels))
    }

    /// Block direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &LieAlgebra) -> Result<LieAlgebra> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.p(),
                right: other.field.p(),
            });
        }
        let (a, b) = (self.dim, other.dim);
        let n = a + b;
        let mut sc = vec![0u8; n * n * n];
        for i in 0..a {
            for j in 0..a {
                for k in 0..a {
                    sc[(i * n + j) * n + k] = self.structure_constant(i, j, k);
                }
            }
        }
        for i in 0..b {
            for j in 0..b {
                for k in 0..b {
                    sc[((i + a) * n + j + a) * n + k + a] = other.structure_constant(i, j, k);
                }
            }
        }
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().map(|l| format!("{l}'")));
        LieAlgebra::new(self.field, n, sc, Some(labels))
    }

    /// `K ⋉ V`: `acting` acts on the abelian module `V` through `action[i]`
    /// (the matrix of the i-th basis element of `K`). Basis order is `K` then `V`.
    pub fn semidirect(acting: &LieAlgebra, action: &[Matrix]) -> Result<LieAlgebra> {
        let k = acting.dim;
        if action.len() != k {
            return Err(Error::DimensionMismatch(format!(
                "{} action matrices for a {}-dimensional acting algebra",
                action.len(),
                k
            )));
        }
        let m = action.first().map_or(0, |a| a.rows());
        for a in action {
            if a.rows() != m || a.cols() != m || a.field() != acting.field {
                return Err(Error::DimensionMismatch("action matrices must be square of equal size".into()));
            }
        }
        let f = acting.field;
        let n = k + m;
        let mut sc = vec![0u8; n * n * n];
        for i in 0..k {
            for j in 0..k {
                for t in 0..k {
                    sc[(i * n + j) * n + t] = acting.structure_constant(i, j, t);
                }
            }
            for r in 0..m {
                for s in 0..m {
                    let v = action[i].get(s, r);
                    sc[(i * n + k + r) * n + k + s] = v;
                    sc[((k + r) * n + i) * n + k + s] = f.neg(v);
                }
            }
        }
        let mut labels = acting.labels.clone();
        labels.extend((1..=m).map(|r| format!("v{r}")));
        LieAlgebra::new(f, n, sc, Some(labels))
    }

    /// Human-readable linear combination of basis labels.
    pub fn fmt_vector(&self, v: &[u8]) -> String {
        let mut out = String::new();
        for (i, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let s = self.field.signed(c);
            if out.is_empty() {
                if s == -1 {
                    out.push('-');
                } else if s != 1 {
                    out.push_str(&format!("{s}"));
                }
            } else if s < 0 {
                out.push_str(" - ");
                if s != -1 {
                    out.push_str(&format!("{}", -s));
                }
            } else {
                out.push_str(" + ");
                if s != 1 {
                    out.push_str(&format!("{s}"));
                }
            }
            out.push_str(&self.labels[i]);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    pub fn fmt_subspace(&self, s: &Subspace) -> String {
        if s.is_zero() {
            return "0".into();
        }
        if s.is_full() {
            return "L".into();
        }
        let parts: Vec<String> = s.rows().map(|r| self.fmt_vector(r)).collect();
        format!("<{}>", parts.join(", "))
    }
}

impl PartialEq for LieAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.dim == other.dim && self.sc == other.sc && self.labels == other.labels
    }
}

impl Eq for LieAlgebra {}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieAlgebra(dim {} over {}", self.dim, self.field)?;
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                if !self.pairs[i * self.dim + j].is_empty() {
                    let v = self.bracket(&self.basis_vector(i), &self.basis_vector(j));
                    write!(f, "; [{},{}]={}", self.labels[i], self.labels[j], self.fmt_vector(&v))?;
                }
            }
        }
        write!(f, ")")
    }
}

/// `L / I` with the coordinate maps between them.
#[derive(Clone, Debug)]
pub struct QuotientPresentation {
    ideal: Subspace,
    coords: QuotientCoords,
    algebra: LieAlgebra,
}

impl QuotientPresentation {
    pub fn ideal(&self) -> &Subspace {
        &self.ideal
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn coords(&self) -> &QuotientCoords {
        &self.coords
    }

    pub fn project(&self, v: &[u8]) -> Vec<u8> {
        self.coords.project(v)
    }

    pub fn lift(&self, v: &[u8]) -> Vec<u8> {
        self.coords.lift(v)
    }

    pub fn project_subspace(&self, s: &Subspace) -> Subspace {
        self.coords.project_subspace(s)
    }

    /// Full preimage in the parent algebra.
    pub fn lift_subspace(&self, s: &Subspace) -> Subspace {
        self.coords.lift_subspace(s)
    }
}
