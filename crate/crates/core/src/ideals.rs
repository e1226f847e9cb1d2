//! Ideal-theoretic computations: closures, cores, centralizers, minimal
//! ideals, socle, derived series and chief series.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::linalg::{kernel, normalized_vectors, quotient_coords, Matrix, Subspace};

/// Default cap on the number of chief series produced by [`enumerate_chief_series`].
pub const DEFAULT_SERIES_CAP: usize = 5000;

/// Smallest ideal containing `seed`.
pub fn ideal_closure(l: &LieAlgebra, seed: &Subspace) -> Subspace {
    let mut current = seed.clone();
    let mut queue: Vec<Vec<u8>> = seed.basis_vecs();
    let mut buf = vec![0u8; l.dim()];
    while let Some(v) = queue.pop() {
        for i in 0..l.dim() {
            l.bracket_into(&l.basis_vector(i), &v, &mut buf);
            if !current.contains(&buf) {
                current = current.with_vector(&buf);
                queue.push(buf.clone());
            }
        }
    }
    current
}

/// `U_L`, the largest ideal of `L` inside `u`.
pub fn core(l: &LieAlgebra, u: &Subspace) -> Subspace {
    let n = l.dim();
    let mut current = u.clone();
    loop {
        let d = current.dim();
        if d == 0 {
            return current;
        }
        // x = Σ c_r u_r survives iff [x_i, x] ≡ 0 mod current for every i.
        let mut rows = Vec::with_capacity(n * n);
        let residues: Vec<Vec<Vec<u8>>> = (0..n)
            .map(|i| {
                let e = l.basis_vector(i);
                current.rows().map(|r| current.reduce(&l.bracket(&e, r))).collect()
            })
            .collect();
        for res in &residues {
            for j in 0..n {
                rows.push((0..d).map(|r| res[r][j]).collect::<Vec<u8>>());
            }
        }
        let ker = kernel(&Matrix::from_rows(l.field(), d, &rows).expect("row lengths"));
        if ker.dim() == d {
            return current;
        }
        let gens: Vec<Vec<u8>> = ker.rows().map(|c| current.combine(c)).collect();
        current = l.span(&gens).expect("lengths");
    }
}

/// `C_L(A/B) = {x ∈ L : [x, A] ⊆ B}`.
pub fn centralizer_of_factor(l: &LieAlgebra, a: &Subspace, b: &Subspace) -> Result<Subspace> {
    if !b.try_leq(a)? {
        return Err(Error::NotContained { sub: b.dim(), sup: a.dim() });
    }
    if !l.is_ideal(a) || !l.is_ideal(b) {
        return Err(Error::NotIdeal);
    }
    let n = l.dim();
    let mut rows = Vec::new();
    let residues: Vec<Vec<Vec<u8>>> = a
        .rows()
        .map(|ar| (0..n).map(|i| b.reduce(&l.bracket(&l.basis_vector(i), ar))).collect())
        .collect();
    for res in &residues {
        for j in 0..n {
            rows.push((0..n).map(|i| res[i][j]).collect::<Vec<u8>>());
        }
    }
    if rows.is_empty() {
        return Ok(l.whole());
    }
    Ok(kernel(&Matrix::from_rows(l.field(), n, &rows)?))
}

/// `C_L(A)`.
pub fn centralizer(l: &LieAlgebra, a: &Subspace) -> Result<Subspace> {
    centralizer_of_factor(l, a, &l.zero_subspace())
}

fn check_ideal(l: &LieAlgebra, s: &Subspace) -> Result<()> {
    if s.ambient() != l.dim() {
        return Err(Error::AmbientMismatch { left: l.dim(), right: s.ambient() });
    }
    if !l.is_ideal(s) {
        return Err(Error::NotIdeal);
    }
    Ok(())
}

/// Ideals `A` with `b ⊂ A ⊆ top` and `A/b` minimal among nonzero ideals of
/// `L/b`, in canonical order. Each is the closure of a coset representative.
pub fn minimal_ideals_between(l: &LieAlgebra, b: &Subspace, top: &Subspace) -> Result<Vec<Subspace>> {
    check_ideal(l, b)?;
    check_ideal(l, top)?;
    let coords = quotient_coords(top, b)?;
    let mut found: BTreeSet<Subspace> = BTreeSet::new();
    for c in normalized_vectors(l.field(), coords.dim()) {
        let v = coords.lift(&c);
        found.insert(ideal_closure(l, &b.with_vector(&v)));
    }
    let found: Vec<Subspace> = found.into_iter().collect();
    Ok(found
        .iter()
        .filter(|a| !found.iter().any(|other| other.properly_in(a)))
        .cloned()
        .collect())
}

/// All ideals `A ⊃ b` with `A/b` a minimal ideal of `L/b`.
pub fn minimal_ideals_over(l: &LieAlgebra, b: &Subspace) -> Result<Vec<Subspace>> {
    minimal_ideals_between(l, b, &l.whole())
}

/// True iff `b ⊂ a` are ideals and no ideal lies strictly between them.
pub fn is_chief_factor(l: &LieAlgebra, a: &Subspace, b: &Subspace) -> bool {
    if !b.properly_in(a) || !l.is_ideal(a) || !l.is_ideal(b) {
        return false;
    }
    let coords = quotient_coords(a, b).expect("b ⊆ a");
    normalized_vectors(l.field(), coords.dim()).all(|c| {
        let v = coords.lift(&c);
        &ideal_closure(l, &b.with_vector(&v)) == a
    })
}

/// An ideal strictly between `b` and `a`, if any.
pub fn intermediate_ideal(l: &LieAlgebra, a: &Subspace, b: &Subspace) -> Option<Subspace> {
    let coords = quotient_coords(a, b).ok()?;
    normalized_vectors(l.field(), coords.dim()).find_map(|c| {
        let v = coords.lift(&c);
        let i = ideal_closure(l, &b.with_vector(&v));
        (&i != a).then_some(i)
    })
}

/// Sum of all minimal ideals.
pub fn socle(l: &LieAlgebra) -> Subspace {
    minimal_ideals_over(l, &l.zero_subspace())
        .expect("0 is an ideal")
        .iter()
        .fold(l.zero_subspace(), |acc, a| acc.sum(a))
}

/// `L ⊇ L² ⊇ (L²)² ⊇ …` until it stabilises.
pub fn derived_series(l: &LieAlgebra) -> Vec<Subspace> {
    let mut series = vec![l.whole()];
    loop {
        let last = series.last().unwrap();
        let next = l.subspace_product(last, last);
        if &next == last {
            return series;
        }
        let done = next.is_zero();
        series.push(next);
        if done {
            return series;
        }
    }
}

pub fn is_solvable(l: &LieAlgebra) -> bool {
    derived_series(l).last().is_none_or(Subspace::is_zero)
}

/// Every ideal of `L`, in canonical order, reached by climbing minimal ideals from 0.
pub fn all_ideals(l: &LieAlgebra) -> Vec<Subspace> {
    let mut seen: BTreeSet<Subspace> = BTreeSet::new();
    let zero = l.zero_subspace();
    seen.insert(zero.clone());
    let mut queue = vec![zero];
    while let Some(i) = queue.pop() {
        for j in minimal_ideals_over(l, &i).expect("ideal") {
            if seen.insert(j.clone()) {
                queue.push(j);
            }
        }
    }
    seen.into_iter().collect()
}

/// A chain of ideals `K = Y_0 ⊂ Y_1 ⊂ … ⊂ Y_m = H` whose successive quotients are chief factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ChiefSeries {
    terms: Vec<Subspace>,
}

impl ChiefSeries {
    /// Checks every term is an ideal and every step a chief factor.
    pub fn new(l: &LieAlgebra, terms: Vec<Subspace>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Precondition("a series needs at least one term".into()));
        }
        for (j, t) in terms.iter().enumerate() {
            check_ideal(l, t).map_err(|e| Error::Precondition(format!("term {j}: {e}")))?;
        }
        for j in 1..terms.len() {
            if !terms[j - 1].properly_in(&terms[j]) {
                return Err(Error::Precondition(format!("term {} does not strictly contain term {}", j, j - 1)));
            }
            if let Some(mid) = intermediate_ideal(l, &terms[j], &terms[j - 1]) {
                return Err(Error::NotChiefFactor(format!(
                    "step {}: {} lies strictly between {} and {}",
                    j,
                    l.fmt_subspace(&mid),
                    l.fmt_subspace(&terms[j - 1]),
                    l.fmt_subspace(&terms[j])
                )));
            }
        }
        Ok(ChiefSeries { terms })
    }

    pub fn terms(&self) -> &[Subspace] {
        &self.terms
    }

    /// Number of chief factors.
    pub fn len(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn bottom(&self) -> &Subspace {
        &self.terms[0]
    }

    pub fn top(&self) -> &Subspace {
        self.terms.last().unwrap()
    }

    /// `Y_j` for `0 ≤ j ≤ len`.
    pub fn term(&self, j: usize) -> &Subspace {
        &self.terms[j]
    }

    /// `(Y_j, Y_{j-1})` for `1 ≤ j ≤ len`.
    pub fn factor(&self, j: usize) -> (&Subspace, &Subspace) {
        (&self.terms[j], &self.terms[j - 1])
    }
}

fn check_bounds(l: &LieAlgebra, from: &Subspace, to: &Subspace) -> Result<()> {
    check_ideal(l, from)?;
    check_ideal(l, to)?;
    if !from.leq(to) {
        return Err(Error::NotContained { sub: from.dim(), sup: to.dim() });
    }
    Ok(())
}

/// One chief series from `from` to `to`, always taking the first minimal ideal in canonical order.
pub fn chief_series(l: &LieAlgebra, from: &Subspace, to: &Subspace) -> Result<ChiefSeries> {
    check_bounds(l, from, to)?;
    let mut terms = vec![from.clone()];
    let mut y = from.clone();
    while &y != to {
        y = minimal_ideals_between(l, &y, to)?.into_iter().next().expect("a nonzero ideal contains a minimal one");
        terms.push(y.clone());
    }
    Ok(ChiefSeries { terms })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesEnumeration {
    pub series: Vec<ChiefSeries>,
    /// Set when the cap stopped the search early.
    pub truncated: bool,
}

/// All chief series from `from` to `to` (depth-first, canonical branch order), up to `cap`.
pub fn enumerate_chief_series(l: &LieAlgebra, from: &Subspace, to: &Subspace, cap: usize) -> Result<SeriesEnumeration> {
    check_bounds(l, from, to)?;
    let mut out = Vec::new();
    let mut truncated = false;
    let mut stack: Vec<Vec<Subspace>> = vec![vec![from.clone()]];
    let mut memo: std::collections::HashMap<Subspace, Vec<Subspace>> = std::collections::HashMap::new();
    while let Some(path) = stack.pop() {
        let y = path.last().unwrap();
        if y == to {
            if out.len() == cap {
                truncated = true;
                break;
            }
            out.push(ChiefSeries { terms: path });
            continue;
        }
        let next = match memo.get(y) {
            Some(n) => n.clone(),
            None => {
                let n = minimal_ideals_between(l, y, to)?;
                memo.insert(y.clone(), n.clone());
                n
            }
        };
        // reversed so the canonical first branch is explored first
        for a in next.into_iter().rev() {
            let mut p = path.clone();
            p.push(a);
            stack.push(p);
        }
    }
    let mut seen = BTreeSet::new();
    out.retain(|s| seen.insert(s.clone()));
    Ok(SeriesEnumeration { series: out, truncated })
}
