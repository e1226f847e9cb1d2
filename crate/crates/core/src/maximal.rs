//! Maximal subalgebras, the Frattini subalgebra, primitivity and monolithicity.
//!
//! Everything here is enumerative: the subalgebra lattice is listed once
//! (within the enumeration budget) and maximality is read off by inclusion.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideals::{centralizer, core, minimal_ideals_over};
use crate::lie::LieAlgebra;
use crate::linalg::{filter_subspaces_capped, Subspace};

/// Primitivity of `L` (or of `L/M_L` when attached to a maximal subalgebra).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimitiveKind {
    NotPrimitive,
    /// Unique minimal ideal, abelian.
    Type1,
    /// Unique minimal ideal, nonabelian.
    Type2,
    /// Exactly two minimal ideals, both nonabelian.
    Type3,
}

impl PrimitiveKind {
    pub fn label(self) -> &'static str {
        match self {
            PrimitiveKind::NotPrimitive => "not primitive",
            PrimitiveKind::Type1 => "type 1",
            PrimitiveKind::Type2 => "type 2",
            PrimitiveKind::Type3 => "type 3",
        }
    }
}

/// A maximal subalgebra together with its core and the primitive type of `L/M_L`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MaximalRecord {
    pub subalgebra: Subspace,
    pub core: Subspace,
    pub quotient_type: PrimitiveKind,
    pub monolithic: bool,
}

impl MaximalRecord {
    /// `L = A + M` and `B ⊆ M`.
    pub fn supplements(&self, a: &Subspace, b: &Subspace) -> bool {
        b.leq(&self.subalgebra) && !a.leq(&self.subalgebra)
    }

    /// Supplements `A/B` with `A ∩ M = B`.
    pub fn complements(&self, a: &Subspace, b: &Subspace) -> bool {
        self.supplements(a, b) && &a.intersect(&self.subalgebra) == b
    }
}

/// Subalgebra lists longer than this are refused rather than held in memory.
pub const MAX_SUBALGEBRAS: usize = 2_000_000;

/// Every subalgebra of `L` (including 0 and L), by dimension, in enumeration order.
pub fn subalgebras(l: &LieAlgebra) -> Result<Vec<Subspace>> {
    let n = l.dim();
    let mut out = Vec::new();
    for d in 0..=n {
        let room = MAX_SUBALGEBRAS - out.len();
        out.extend(filter_subspaces_capped(n, l.field(), d, room, |basis| l.closed_under_bracket(basis))?);
    }
    Ok(out)
}

/// The maximal proper subalgebras among `subs` (which must list every subalgebra).
/// Working down by dimension, a proper subalgebra is maximal exactly when no
/// maximal subalgebra found so far contains it.
pub fn maximal_among(l: &LieAlgebra, subs: &[Subspace]) -> Vec<Subspace> {
    let mut by_dim: Vec<&Subspace> = subs.iter().filter(|s| !s.is_full()).collect();
    by_dim.sort_by_key(|s| std::cmp::Reverse(s.dim()));
    let mut found: Vec<Subspace> = Vec::new();
    for s in by_dim {
        if s.ambient() == l.dim() && !found.iter().any(|m| s.leq(m)) {
            found.push(s.clone());
        }
    }
    found.sort();
    found
}

/// Minimal ideals of `L/N` (as ideals of `L` over `N`) and the resulting type.
pub(crate) fn classify_quotient(l: &LieAlgebra, n: &Subspace) -> Result<(PrimitiveKind, Vec<Subspace>)> {
    let mins = minimal_ideals_over(l, n)?;
    let abelian = |a: &Subspace| l.subspace_product(a, a).leq(n);
    let kind = match mins.as_slice() {
        [a] if abelian(a) => PrimitiveKind::Type1,
        [_] => PrimitiveKind::Type2,
        [a, b] if !abelian(a) && !abelian(b) => PrimitiveKind::Type3,
        _ => PrimitiveKind::NotPrimitive,
    };
    Ok((kind, mins))
}

/// Builds records for maximal subalgebras, checking that each `L/M_L` is primitive.
pub fn records_for(l: &LieAlgebra, maxes: &[Subspace]) -> Result<Vec<MaximalRecord>> {
    maxes
        .iter()
        .map(|m| {
            let c = core(l, m);
            let (kind, mins) = classify_quotient(l, &c)?;
            if kind == PrimitiveKind::NotPrimitive {
                return Err(Error::Verification(format!(
                    "L/M_L for M = {} has a core-free maximal subalgebra but {} minimal ideals of no primitive type",
                    l.fmt_subspace(m),
                    mins.len()
                )));
            }
            Ok(MaximalRecord {
                subalgebra: m.clone(),
                core: c,
                quotient_type: kind,
                monolithic: mins.len() == 1,
            })
        })
        .collect()
}

/// All maximal subalgebras with their cores, in canonical order.
pub fn maximal_subalgebras(l: &LieAlgebra) -> Result<Vec<MaximalRecord>> {
    let subs = subalgebras(l)?;
    records_for(l, &maximal_among(l, &subs))
}

/// Intersection of the given maximal subalgebras (all of `L` when there are none).
pub fn intersection_of(l: &LieAlgebra, maxes: &[MaximalRecord]) -> Subspace {
    maxes.iter().fold(l.whole(), |acc, m| acc.intersect(&m.subalgebra))
}

/// φ(L), the intersection of all maximal subalgebras.
pub fn frattini(l: &LieAlgebra) -> Result<Subspace> {
    Ok(intersection_of(l, &maximal_subalgebras(l)?))
}

/// Preimage in `L` of φ(L/B), computed inside the quotient algebra.
pub fn quotient_frattini(l: &LieAlgebra, b: &Subspace) -> Result<Subspace> {
    let q = l.quotient(b)?;
    Ok(q.lift_subspace(&frattini(q.algebra())?))
}

fn require_chief(l: &LieAlgebra, a: &Subspace, b: &Subspace) -> Result<()> {
    if !crate::ideals::is_chief_factor(l, a, b) {
        return Err(Error::NotChiefFactor(format!("{} / {}", l.fmt_subspace(a), l.fmt_subspace(b))));
    }
    Ok(())
}

/// `A/B ⊆ φ(L/B)`, decided in the quotient algebra.
pub fn is_frattini_factor(l: &LieAlgebra, a: &Subspace, b: &Subspace) -> Result<bool> {
    require_chief(l, a, b)?;
    Ok(a.leq(&quotient_frattini(l, b)?))
}

pub fn is_monolithic(l: &LieAlgebra) -> bool {
    minimal_ideals_over(l, &l.zero_subspace()).map(|m| m.len() == 1).unwrap_or(false)
}

/// Outcome of [`primitive_type`]. When `L` is not primitive, `evidence` lists
/// every maximal subalgebra with its (nonzero) core.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimitivityReport {
    pub kind: PrimitiveKind,
    /// A core-free maximal subalgebra.
    pub witness: Option<Subspace>,
    pub minimal_ideals: Vec<Subspace>,
    pub socle: Subspace,
    pub evidence: Vec<(Subspace, Subspace)>,
}

/// Primitivity from precomputed maximal records.
pub fn primitivity_from(l: &LieAlgebra, maxes: &[MaximalRecord]) -> Result<PrimitivityReport> {
    let zero = l.zero_subspace();
    let (kind, mins) = classify_quotient(l, &zero)?;
    let socle = mins.iter().fold(zero.clone(), |acc, a| acc.sum(a));
    let witness = maxes.iter().find(|m| m.core.is_zero()).map(|m| m.subalgebra.clone());
    let report = match witness {
        Some(u) => {
            if kind == PrimitiveKind::NotPrimitive {
                return Err(Error::Verification(format!(
                    "{} is a core-free maximal subalgebra but L has {} minimal ideals of no primitive type",
                    l.fmt_subspace(&u),
                    mins.len()
                )));
            }
            PrimitivityReport { kind, witness: Some(u), minimal_ideals: mins, socle, evidence: Vec::new() }
        }
        None => PrimitivityReport {
            kind: PrimitiveKind::NotPrimitive,
            witness: None,
            minimal_ideals: mins,
            socle,
            evidence: maxes.iter().map(|m| (m.subalgebra.clone(), m.core.clone())).collect(),
        },
    };
    if report.witness.is_some() {
        check_trichotomy(l, &report)?;
    }
    Ok(report)
}

/// Primitivity type with a core-free witness, checked against the structure theorem.
pub fn primitive_type(l: &LieAlgebra) -> Result<PrimitivityReport> {
    primitivity_from(l, &maximal_subalgebras(l)?)
}

fn verify(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Verification(what()))
    }
}

/// The clause of the trichotomy matching the report's type holds for its witness.
pub fn check_trichotomy(l: &LieAlgebra, r: &PrimitivityReport) -> Result<()> {
    let u = r.witness.as_ref().ok_or_else(|| Error::Precondition("no core-free witness".into()))?;
    let zero = l.zero_subspace();
    let whole = l.whole();
    match r.kind {
        PrimitiveKind::NotPrimitive => Err(Error::Precondition("L is not primitive".into())),
        PrimitiveKind::Type1 => {
            let a = &r.minimal_ideals[0];
            verify(&r.socle == a, || "type 1: Soc(L) is not the minimal ideal".into())?;
            verify(&centralizer(l, a)? == a, || "type 1: minimal ideal is not self-centralising".into())?;
            verify(u.sum(a) == whole && u.intersect(a).is_zero(), || "type 1: L != U ∔ A".into())
        }
        PrimitiveKind::Type2 => {
            let a = &r.minimal_ideals[0];
            verify(&r.socle == a, || "type 2: Soc(L) is not the minimal ideal".into())?;
            verify(u.sum(a) == whole, || "type 2: L != U + A".into())?;
            verify(centralizer(l, a)? == zero, || "type 2: C_L(A) != 0".into())
        }
        PrimitiveKind::Type3 => {
            let (a, b) = (&r.minimal_ideals[0], &r.minimal_ideals[1]);
            verify(a.intersect(b).is_zero() && r.socle == a.sum(b), || "type 3: Soc(L) != A ⊕ B".into())?;
            for m in [a, b] {
                verify(u.sum(m) == whole && u.intersect(m).is_zero(), || "type 3: U does not complement a minimal ideal".into())?;
            }
            verify(&centralizer(l, b)? == a && &centralizer(l, a)? == b, || "type 3: A != C_L(B) or B != C_L(A)".into())?;
            let diag = a.sum(b).intersect(u);
            verify(diag.dim() == a.dim() && b.dim() == a.dim(), || "type 3: A, B, (A+B)∩U differ in dimension".into())?;
            for s in [a, b, &diag] {
                verify(!l.subspace_product(s, s).is_zero(), || "type 3: a component is abelian".into())?;
            }
            Ok(())
        }
    }
}

/// The structure theorem for primitive algebras, checked on `L`: the
/// characterisation by a common supplement of all minimal ideals (both
/// directions), and the centraliser statements for every core-free maximal
/// subalgebra and every nonzero ideal.
pub fn check_primitive_structure(l: &LieAlgebra, maxes: &[MaximalRecord], ideals: &[Subspace]) -> Result<()> {
    let report = primitivity_from(l, maxes)?;
    let mins = &report.minimal_ideals;
    let whole = l.whole();
    let common = maxes.iter().any(|m| mins.iter().all(|a| m.subalgebra.sum(a) == whole));
    verify(common == report.witness.is_some(), || {
        format!("primitive = {} but a maximal subalgebra supplementing every minimal ideal exists = {}", report.witness.is_some(), common)
    })?;
    for u in maxes.iter().filter(|m| m.core.is_zero()) {
        for a in ideals.iter().filter(|a| !a.is_zero()) {
            let c = centralizer(l, a)?;
            verify(c.intersect(&u.subalgebra).is_zero(), || {
                format!("C_L({}) meets core-free {}", l.fmt_subspace(a), l.fmt_subspace(&u.subalgebra))
            })?;
            verify(c.is_zero() || mins.contains(&c), || format!("C_L({}) is neither 0 nor minimal", l.fmt_subspace(a)))?;
        }
        let r = PrimitivityReport { witness: Some(u.subalgebra.clone()), ..report.clone() };
        check_trichotomy(l, &r)?;
    }
    Ok(())
}

/// Maximal supplements of `A/B` whose quotient `L/M_L` is monolithic (and primitive).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonolithicSupplements {
    pub records: Vec<MaximalRecord>,
    /// Set when `A/B` is Frattini, which is why the list is empty.
    pub frattini: bool,
}

/// Monolithic supplements among precomputed maximal records.
pub fn monolithic_supplements_from(maxes: &[MaximalRecord], a: &Subspace, b: &Subspace) -> Result<MonolithicSupplements> {
    let supplemented = maxes.iter().any(|m| m.supplements(a, b));
    let records: Vec<MaximalRecord> = maxes.iter().filter(|m| m.monolithic && m.supplements(a, b)).cloned().collect();
    if supplemented && records.is_empty() {
        return Err(Error::Verification("supplemented chief factor without a monolithic maximal supplement".into()));
    }
    Ok(MonolithicSupplements { records, frattini: !supplemented })
}

pub fn monolithic_supplements(l: &LieAlgebra, a: &Subspace, b: &Subspace) -> Result<MonolithicSupplements> {
    require_chief(l, a, b)?;
    monolithic_supplements_from(&maximal_subalgebras(l)?, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::field::Field;
    use crate::ideals::all_ideals;
    use crate::oracle;

    fn gf(p: u8) -> Field {
        Field::new(p).unwrap()
    }

    #[test]
    fn heisenberg_maximals() {
        let h = corpus::heisenberg(gf(2));
        let maxes = maximal_subalgebras(&h).unwrap();
        assert_eq!(maxes.len(), 3);
        let x3 = h.span(&[vec![0, 0, 1]]).unwrap();
        assert!(maxes.iter().all(|m| m.subalgebra.dim() == 2 && x3.leq(&m.subalgebra)));
        assert!(maxes.iter().all(|m| m.core == m.subalgebra && m.quotient_type == PrimitiveKind::Type1));
        assert_eq!(frattini(&h).unwrap(), x3);
    }

    #[test]
    fn abelian_and_nonabelian2_maximals() {
        let a = LieAlgebra::abelian(gf(2), 2);
        let maxes = maximal_subalgebras(&a).unwrap();
        assert_eq!(maxes.len(), 3);
        assert!(maxes.iter().all(|m| m.subalgebra.dim() == 1));
        assert!(frattini(&a).unwrap().is_zero());
        let n2 = corpus::nonabelian2(gf(3));
        let maxes = maximal_subalgebras(&n2).unwrap();
        let x = n2.span(&[vec![1, 0]]).unwrap();
        let y = n2.span(&[vec![0, 1]]).unwrap();
        let rec_x = maxes.iter().find(|m| m.subalgebra == x).unwrap();
        assert!(rec_x.core.is_zero());
        let rec_y = maxes.iter().find(|m| m.subalgebra == y).unwrap();
        assert_eq!(rec_y.core, y);
    }

    #[test]
    fn sl2_frattini_and_type() {
        let s = corpus::sl2(gf(5)).unwrap();
        let maxes = maximal_subalgebras(&s).unwrap();
        assert_eq!(maxes.len(), 16);
        assert_eq!(maxes.iter().filter(|m| m.subalgebra.dim() == 2).count(), 6);
        assert!(maxes.iter().all(|m| m.core.is_zero() && m.monolithic));
        assert!(frattini(&s).unwrap().is_zero());
        let r = primitive_type(&s).unwrap();
        assert_eq!(r.kind, PrimitiveKind::Type2);
        assert!(is_monolithic(&s));
    }

    #[test]
    fn frattini_factor_examples() {
        let h = corpus::heisenberg(gf(2));
        let x3 = h.span(&[vec![0, 0, 1]]).unwrap();
        let w = h.span(&[vec![1, 0, 0], vec![0, 0, 1]]).unwrap();
        assert!(is_frattini_factor(&h, &x3, &h.zero_subspace()).unwrap());
        assert!(!is_frattini_factor(&h, &w, &x3).unwrap());
        let a = LieAlgebra::abelian(gf(2), 2);
        let line = a.span(&[vec![1, 0]]).unwrap();
        assert!(!is_frattini_factor(&a, &line, &a.zero_subspace()).unwrap());
        assert!(matches!(is_frattini_factor(&h, &h.whole(), &h.zero_subspace()), Err(Error::NotChiefFactor(_))));
    }

    #[test]
    fn primitive_type_examples() {
        let n2 = corpus::nonabelian2(gf(3));
        let r = primitive_type(&n2).unwrap();
        assert_eq!(r.kind, PrimitiveKind::Type1);
        assert_eq!(r.witness, Some(n2.span(&[vec![1, 0]]).unwrap()));
        assert_eq!(r.socle, n2.span(&[vec![0, 1]]).unwrap());
        let h = corpus::heisenberg(gf(2));
        let r = primitive_type(&h).unwrap();
        assert_eq!(r.kind, PrimitiveKind::NotPrimitive);
        assert_eq!(r.evidence.len(), 3);
        assert!(r.evidence.iter().all(|(_, c)| !c.is_zero()));
        let a = LieAlgebra::abelian(gf(3), 2);
        assert_eq!(primitive_type(&a).unwrap().kind, PrimitiveKind::NotPrimitive);
        let a1 = LieAlgebra::abelian(gf(3), 1);
        assert_eq!(primitive_type(&a1).unwrap().kind, PrimitiveKind::Type1);
    }

    #[test]
    fn monolithic_examples() {
        assert!(is_monolithic(&corpus::heisenberg(gf(2))));
        assert!(!is_monolithic(&LieAlgebra::abelian(gf(2), 2)));
        let s = corpus::sl2(gf(5)).unwrap();
        let ms = monolithic_supplements(&s, &s.whole(), &s.zero_subspace()).unwrap();
        assert_eq!(ms.records.len(), 16);
        let h = corpus::heisenberg(gf(2));
        let x3 = h.span(&[vec![0, 0, 1]]).unwrap();
        let ms = monolithic_supplements(&h, &x3, &h.zero_subspace()).unwrap();
        assert!(ms.records.is_empty() && ms.frattini);
        let r4 = corpus::r4(gf(2));
        let y = r4.span(&[vec![0, 1, 0, 0]]).unwrap();
        let ms = monolithic_supplements(&r4, &y, &r4.zero_subspace()).unwrap();
        assert!(!ms.records.is_empty());
        assert!(ms.records.iter().all(|m| m.complements(&y, &r4.zero_subspace())));
    }

    #[test]
    fn matches_oracles_and_structure_theorem() {
        let mut algebras = vec![
            corpus::heisenberg(gf(2)),
            corpus::heisenberg(gf(3)),
            corpus::nonabelian2(gf(2)),
            corpus::nonabelian2(gf(3)),
            corpus::r4(gf(2)),
            corpus::h3_plus_line(gf(2)),
            LieAlgebra::abelian(gf(2), 3),
            corpus::sl2(gf(5)).unwrap(),
        ];
        for seed in 0..5 {
            algebras.push(corpus::random_solvable(4, 2, seed).unwrap());
            algebras.push(corpus::random_solvable(3, 3, seed).unwrap());
        }
        for l in &algebras {
            let maxes = maximal_subalgebras(l).unwrap();
            let subs: Vec<Subspace> = maxes.iter().map(|m| m.subalgebra.clone()).collect();
            assert_eq!(subs, oracle::maximal_subalgebras(l).unwrap());
            assert_eq!(frattini(l).unwrap(), oracle::frattini(l).unwrap());
            check_primitive_structure(l, &maxes, &all_ideals(l)).unwrap();
        }
    }

    #[test]
    fn frattini_iff_no_maximal_supplement() {
        for l in [corpus::h3_plus_line(gf(2)), corpus::r4(gf(3)), corpus::random_solvable(4, 3, 7).unwrap()] {
            let maxes = maximal_subalgebras(&l).unwrap();
            let ideals = all_ideals(&l);
            for a in &ideals {
                for b in &ideals {
                    if b.properly_in(a) && crate::ideals::is_chief_factor(&l, a, b) {
                        let fr = is_frattini_factor(&l, a, b).unwrap();
                        assert_eq!(fr, !maxes.iter().any(|m| m.supplements(a, b)));
                    }
                }
            }
        }
    }
}
