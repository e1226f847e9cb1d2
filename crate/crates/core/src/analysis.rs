//! A Lie algebra bundled with lazily computed, shared lattice data.
//!
//! The subalgebra list, maximal subalgebras, ideals, minimal ideals over each
//! ideal and classified chief factors are computed on first use and reused by
//! every later query. The caches are thread-safe, so one `Analysis` can drive
//! parallel verification jobs.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::chieffactors::{make_chief_factor_uncached, m_related_uncached, ChiefFactor, MRelatedWitness};
use crate::error::{Error, Result};
use crate::ideals::{all_ideals, minimal_ideals_over};
use crate::lie::LieAlgebra;
use crate::linalg::Subspace;
use crate::maximal::{self, MaximalRecord, PrimitivityReport};

pub struct Analysis {
    algebra: LieAlgebra,
    subalgebras: OnceLock<Result<Vec<Subspace>>>,
    maximal: OnceLock<Result<Vec<MaximalRecord>>>,
    ideals: OnceLock<Vec<Subspace>>,
    minimal_over: Mutex<HashMap<Subspace, Arc<Vec<Subspace>>>>,
    quotient_frattini: Mutex<HashMap<Subspace, Subspace>>,
    factors: Mutex<HashMap<(Subspace, Subspace), Arc<ChiefFactor>>>,
    related: Mutex<HashMap<[Subspace; 4], Option<MRelatedWitness>>>,
}

impl Analysis {
    pub fn new(algebra: LieAlgebra) -> Self {
        Analysis {
            algebra,
            subalgebras: OnceLock::new(),
            maximal: OnceLock::new(),
            ideals: OnceLock::new(),
            minimal_over: Mutex::new(HashMap::new()),
            quotient_frattini: Mutex::new(HashMap::new()),
            factors: Mutex::new(HashMap::new()),
            related: Mutex::new(HashMap::new()),
        }
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    /// Every subalgebra, including 0 and L.
    pub fn subalgebras(&self) -> Result<&[Subspace]> {
        self.subalgebras
            .get_or_init(|| maximal::subalgebras(&self.algebra))
            .as_deref()
            .map_err(Clone::clone)
    }

    pub fn maximal(&self) -> Result<&[MaximalRecord]> {
        self.maximal
            .get_or_init(|| {
                let subs = self.subalgebras()?;
                maximal::records_for(&self.algebra, &maximal::maximal_among(&self.algebra, subs))
            })
            .as_deref()
            .map_err(Clone::clone)
    }

    /// The maximal record for `m`, if `m` is a maximal subalgebra.
    pub fn maximal_record(&self, m: &Subspace) -> Result<Option<&MaximalRecord>> {
        let maxes = self.maximal()?;
        Ok(maxes.binary_search_by(|r| r.subalgebra.cmp(m)).ok().map(|i| &maxes[i]))
    }

    pub fn frattini(&self) -> Result<Subspace> {
        Ok(maximal::intersection_of(&self.algebra, self.maximal()?))
    }

    pub fn primitivity(&self) -> Result<PrimitivityReport> {
        maximal::primitivity_from(&self.algebra, self.maximal()?)
    }

    /// All ideals in canonical order.
    pub fn ideals(&self) -> &[Subspace] {
        self.ideals.get_or_init(|| all_ideals(&self.algebra))
    }

    pub fn is_ideal(&self, s: &Subspace) -> bool {
        self.ideals().binary_search(s).is_ok()
    }

    pub fn minimal_ideals_over(&self, b: &Subspace) -> Result<Arc<Vec<Subspace>>> {
        if let Some(v) = self.minimal_over.lock().unwrap().get(b) {
            return Ok(v.clone());
        }
        let v = Arc::new(minimal_ideals_over(&self.algebra, b)?);
        self.minimal_over.lock().unwrap().insert(b.clone(), v.clone());
        Ok(v)
    }

    /// `B ⊂ A` ideals with `A/B` minimal in `L/B`.
    pub fn is_chief(&self, a: &Subspace, b: &Subspace) -> bool {
        self.is_ideal(a)
            && self.is_ideal(b)
            && b.properly_in(a)
            && self.minimal_ideals_over(b).map(|m| m.contains(a)).unwrap_or(false)
    }

    /// Preimage of φ(L/B), computed in the quotient algebra (and reusing φ(L) when B = 0).
    pub fn quotient_frattini(&self, b: &Subspace) -> Result<Subspace> {
        if let Some(v) = self.quotient_frattini.lock().unwrap().get(b) {
            return Ok(v.clone());
        }
        let v = if b.is_zero() { self.frattini()? } else { maximal::quotient_frattini(&self.algebra, b)? };
        self.quotient_frattini.lock().unwrap().insert(b.clone(), v.clone());
        Ok(v)
    }

    /// The classified chief factor `A/B`.
    pub fn factor(&self, a: &Subspace, b: &Subspace) -> Result<Arc<ChiefFactor>> {
        let key = (a.clone(), b.clone());
        if let Some(f) = self.factors.lock().unwrap().get(&key) {
            return Ok(f.clone());
        }
        let f = Arc::new(make_chief_factor_uncached(self, a, b)?);
        self.factors.lock().unwrap().insert(key, f.clone());
        Ok(f)
    }

    /// First m-related witness for the pair `(f, g)`, memoised per pair.
    pub fn m_related(&self, f: &ChiefFactor, g: &ChiefFactor) -> Result<Option<MRelatedWitness>> {
        let key = [f.a.clone(), f.b.clone(), g.a.clone(), g.b.clone()];
        if let Some(w) = self.related.lock().unwrap().get(&key) {
            return Ok(w.clone());
        }
        let w = m_related_uncached(self, f, g)?;
        self.related.lock().unwrap().insert(key, w.clone());
        Ok(w)
    }

    /// Like [`Analysis::factor`] but `None` when `A/B` is not a chief factor.
    pub fn try_factor(&self, a: &Subspace, b: &Subspace) -> Result<Option<Arc<ChiefFactor>>> {
        if !self.is_chief(a, b) {
            return Ok(None);
        }
        self.factor(a, b).map(Some)
    }

    /// Every chief factor of `L`.
    pub fn all_factors(&self) -> Result<Vec<Arc<ChiefFactor>>> {
        let mut out = Vec::new();
        for b in self.ideals() {
            for a in self.minimal_ideals_over(b)?.iter() {
                out.push(self.factor(a, b)?);
            }
        }
        Ok(out)
    }

    pub(crate) fn require_ideal(&self, s: &Subspace, what: &str) -> Result<()> {
        if s.ambient() != self.algebra.dim() {
            return Err(Error::AmbientMismatch { left: self.algebra.dim(), right: s.ambient() });
        }
        if !self.is_ideal(s) {
            return Err(Error::Precondition(format!("{what} {} is not an ideal", self.algebra.fmt_subspace(s))));
        }
        Ok(())
    }
}

impl std::fmt::Debug for Analysis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Analysis").field("algebra", &self.algebra).finish_non_exhaustive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::field::Field;

    #[test]
    fn caches_agree_with_direct_computation() {
        let l = corpus::h3_plus_line(Field::new(2).unwrap());
        let an = Analysis::new(l.clone());
        assert_eq!(an.frattini().unwrap(), maximal::frattini(&l).unwrap());
        assert_eq!(an.ideals(), all_ideals(&l).as_slice());
        for b in an.ideals() {
            assert_eq!(an.quotient_frattini(b).unwrap(), maximal::quotient_frattini(&l, b).unwrap());
            for a in an.ideals() {
                assert_eq!(an.is_chief(a, b), crate::ideals::is_chief_factor(&l, a, b));
            }
        }
        let first = an.factor(&an.ideals()[1], &l.zero_subspace()).unwrap();
        let again = an.factor(&an.ideals()[1], &l.zero_subspace()).unwrap();
        assert!(Arc::ptr_eq(&first, &again));
    }

    #[test]
    fn maximal_record_lookup() {
        let l = corpus::heisenberg(Field::new(3).unwrap());
        let an = Analysis::new(l.clone());
        for m in an.maximal().unwrap() {
            assert_eq!(an.maximal_record(&m.subalgebra).unwrap(), Some(m));
        }
        assert_eq!(an.maximal_record(&l.zero_subspace()).unwrap(), None);
    }
}
