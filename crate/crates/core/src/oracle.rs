//! Brute-force reference implementations used to cross-check the fast
//! routines. Each one enumerates every subspace (or every vector) and applies
//! the textbook definition directly, so they only run inside the enumeration
//! budget.

use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::linalg::{enumerate_subspaces, Subspace};

fn all_subspaces(l: &LieAlgebra) -> Result<Vec<Subspace>> {
    Ok(enumerate_subspaces(l.dim(), l.field(), None)?.collect())
}

/// Elementwise ideal test: `[x, u] ∈ U` for every `x ∈ L` and every `u ∈ U`.
fn is_ideal_elementwise(l: &LieAlgebra, u: &Subspace) -> bool {
    let whole = l.whole();
    u.elements().all(|v| whole.elements().all(|x| u.contains(&l.bracket(&x, &v))))
}

fn is_subalgebra_elementwise(l: &LieAlgebra, u: &Subspace) -> bool {
    u.elements().all(|a| u.elements().all(|b| u.contains(&l.bracket(&a, &b))))
}

pub fn ideals(l: &LieAlgebra) -> Result<Vec<Subspace>> {
    let mut out: Vec<Subspace> = all_subspaces(l)?.into_iter().filter(|u| is_ideal_elementwise(l, u)).collect();
    out.sort();
    Ok(out)
}

pub fn subalgebras(l: &LieAlgebra) -> Result<Vec<Subspace>> {
    Ok(all_subspaces(l)?.into_iter().filter(|u| is_subalgebra_elementwise(l, u)).collect())
}

/// Proper subalgebras not strictly contained in any other proper subalgebra.
pub fn maximal_subalgebras(l: &LieAlgebra) -> Result<Vec<Subspace>> {
    let proper: Vec<Subspace> = subalgebras(l)?.into_iter().filter(|s| !s.is_full()).collect();
    let mut out: Vec<Subspace> =
        proper.iter().filter(|s| !proper.iter().any(|t| s.properly_in(t))).cloned().collect();
    out.sort();
    Ok(out)
}

pub fn frattini(l: &LieAlgebra) -> Result<Subspace> {
    Ok(maximal_subalgebras(l)?.iter().fold(l.whole(), |acc, m| acc.intersect(m)))
}

/// The unique smallest ideal containing `seed`.
pub fn ideal_closure(l: &LieAlgebra, seed: &Subspace) -> Result<Subspace> {
    ideal_closure_in(&ideals(l)?, seed)
}

/// [`ideal_closure`] against a precomputed ideal list.
pub fn ideal_closure_in(ideals: &[Subspace], seed: &Subspace) -> Result<Subspace> {
    let over: Vec<&Subspace> = ideals.iter().filter(|i| seed.leq(i)).collect();
    let least: Vec<&&Subspace> = over.iter().filter(|i| over.iter().all(|j| i.leq(j))).collect();
    match least.as_slice() {
        [i] => Ok((**i).clone()),
        _ => Err(Error::Verification("ideals over the seed have no least element".into())),
    }
}

/// The unique largest ideal inside `u`.
pub fn core(l: &LieAlgebra, u: &Subspace) -> Result<Subspace> {
    core_in(&ideals(l)?, u)
}

/// [`core`] against a precomputed ideal list.
pub fn core_in(ideals: &[Subspace], u: &Subspace) -> Result<Subspace> {
    let inside: Vec<&Subspace> = ideals.iter().filter(|i| i.leq(u)).collect();
    let greatest: Vec<&&Subspace> = inside.iter().filter(|i| inside.iter().all(|j| j.leq(i))).collect();
    match greatest.as_slice() {
        [i] => Ok((**i).clone()),
        _ => Err(Error::Verification("ideals inside the subspace have no greatest element".into())),
    }
}

/// Ideals strictly above `b` with nothing strictly in between.
pub fn minimal_ideals_over(l: &LieAlgebra, b: &Subspace) -> Result<Vec<Subspace>> {
    let above: Vec<Subspace> = ideals(l)?.into_iter().filter(|i| b.properly_in(i)).collect();
    Ok(above.iter().filter(|a| !above.iter().any(|c| c.properly_in(a))).cloned().collect())
}

/// No ideal lies strictly between `b` and `a`.
pub fn is_chief_factor(l: &LieAlgebra, a: &Subspace, b: &Subspace) -> Result<bool> {
    if !b.properly_in(a) || !is_ideal_elementwise(l, a) || !is_ideal_elementwise(l, b) {
        return Ok(false);
    }
    Ok(!ideals(l)?.iter().any(|i| b.properly_in(i) && i.properly_in(a)))
}

/// [`is_chief_factor`] against a precomputed ideal list.
pub fn is_chief_factor_in(ideals: &[Subspace], a: &Subspace, b: &Subspace) -> bool {
    let member = |s: &Subspace| ideals.contains(s);
    b.properly_in(a) && member(a) && member(b) && !ideals.iter().any(|i| b.properly_in(i) && i.properly_in(a))
}

/// `{x ∈ L : [x, a] ∈ B for all a ∈ A}` by running over every element of `L`.
pub fn centralizer_of_factor(l: &LieAlgebra, a: &Subspace, b: &Subspace) -> Subspace {
    let members: Vec<Vec<u8>> = l
        .whole()
        .elements()
        .filter(|x| a.elements().all(|v| b.contains(&l.bracket(x, &v))))
        .collect();
    l.span(&members).expect("lengths")
}

/// Primitive type of `L/N` read off the literal definitions in the quotient.
pub fn primitive_kind_of_quotient(l: &LieAlgebra, n: &Subspace) -> Result<crate::maximal::PrimitiveKind> {
    use crate::maximal::PrimitiveKind;
    let q = l.quotient(n)?;
    let qa = q.algebra();
    let maxes = maximal_subalgebras(qa)?;
    let zero = qa.zero_subspace();
    let core_free = maxes.iter().any(|m| core(qa, m).map(|c| c == zero).unwrap_or(false));
    if !core_free {
        return Ok(PrimitiveKind::NotPrimitive);
    }
    let mins = minimal_ideals_over(qa, &zero)?;
    let abelian = |a: &Subspace| qa.subspace_product(a, a).is_zero();
    Ok(match mins.as_slice() {
        [a] if abelian(a) => PrimitiveKind::Type1,
        [_] => PrimitiveKind::Type2,
        [a, b] if !abelian(a) && !abelian(b) => PrimitiveKind::Type3,
        _ => PrimitiveKind::NotPrimitive,
    })
}
