//! The Jordan-Hölder permutation between two chief series, the transfer of a
//! chief factor onto a series, common supplements, and the correspondence of
//! chief series under `L = B + U`.

use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::analysis::Analysis;
use crate::chieffactors::{
    descends, is_m_crossing, l_connected, m_related, relaxed_complements, swap_crossing, validate_witness,
    witness_for, ChiefFactor, LConnection, MRelatedWitness,
};
use crate::error::{Error, Result};
use crate::ideals::{chief_series, is_chief_factor, ChiefSeries};
use crate::lie::LieAlgebra;
use crate::linalg::Subspace;
use crate::maximal::MaximalRecord;

/// A permutation of `{1, …, n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    /// From the images `σ(1), …, σ(n)`.
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &j in &map {
            if j == 0 || j > n || std::mem::replace(&mut seen[j - 1], true) {
                return Err(Error::Verification(format!("{map:?} is not a bijection of 1..{n}")));
            }
        }
        Ok(Permutation { map })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { map: (1..=n).collect() }
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    /// `σ(i)` for `1 ≤ i ≤ n`.
    pub fn apply(&self, i: usize) -> usize {
        self.map[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &j)| i + 1 == j)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for start in 1..=self.n() {
            if seen[start - 1] || self.apply(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start - 1] = true;
            let mut j = self.apply(start);
            while j != start {
                seen[j - 1] = true;
                cycle.push(j);
                j = self.apply(j);
            }
            out.push(cycle);
        }
        out
    }

    /// All permutations of `{1, …, n}` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
            let n = used.len();
            if prefix.len() == n {
                out.push(Permutation { map: prefix.clone() });
                return;
            }
            for j in 1..=n {
                if !used[j - 1] {
                    used[j - 1] = true;
                    prefix.push(j);
                    rec(prefix, used, out);
                    prefix.pop();
                    used[j - 1] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; n], &mut out);
        out
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation, `id` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "id");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Permutation", 3)?;
        st.serialize_field("n", &self.n())?;
        st.serialize_field("map", &self.map)?;
        st.serialize_field("cycles", &self.to_string())?;
        st.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TransferCase {
    /// `A + X = B + X` (supplemented) or `A ∩ Y = B ∩ Y` (Frattini).
    I,
    II,
}

/// Where a chief factor lands on a series: `X/Y = Y_{j'}/Y_{j'-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransferReport {
    pub j: usize,
    /// Every index satisfying the defining condition.
    pub j_set: Vec<usize>,
    pub case: TransferCase,
    pub x: Subspace,
    pub y: Subspace,
    /// The relations that were checked, all of which hold.
    pub checked: Vec<&'static str>,
}

fn check_between(an: &Analysis, f: &ChiefFactor, y: &ChiefSeries) -> Result<()> {
    if !y.bottom().leq(&f.b) || !f.a.leq(y.top()) {
        return Err(Error::Precondition(format!(
            "factor {}/{} does not lie between the series endpoints",
            an.algebra().fmt_subspace(&f.a),
            an.algebra().fmt_subspace(&f.b)
        )));
    }
    Ok(())
}

struct Checks<'a> {
    an: &'a Analysis,
    done: Vec<&'static str>,
}

impl<'a> Checks<'a> {
    fn new(an: &'a Analysis) -> Self {
        Checks { an, done: Vec::new() }
    }

    fn that(&mut self, cond: bool, what: &'static str) -> Result<()> {
        if !cond {
            return Err(Error::Verification(format!("transfer: {what} fails")));
        }
        self.done.push(what);
        Ok(())
    }

    /// `P/Q ↘ R/S` with both quotients chief factors.
    fn desc(&mut self, p: &Subspace, q: &Subspace, r: &Subspace, s: &Subspace, what: &'static str) -> Result<()> {
        let ok = self.an.is_chief(p, q) && self.an.is_chief(r, s) && descends(p, q, r, s);
        self.that(ok, what)
    }

    fn supplemented(&mut self, p: &Subspace, q: &Subspace, what: &'static str) -> Result<()> {
        let ok = self.an.try_factor(p, q)?.is_some_and(|f| f.supplemented);
        self.that(ok, what)
    }

    fn frattini(&mut self, p: &Subspace, q: &Subspace, what: &'static str) -> Result<()> {
        let ok = self.an.try_factor(p, q)?.is_some_and(|f| f.frattini);
        self.that(ok, what)
    }

    fn crossing(&mut self, top: (&Subspace, &Subspace), bottom: (&Subspace, &Subspace), what: &'static str) -> Result<()> {
        let (Some(t), Some(b)) = (self.an.try_factor(top.0, top.1)?, self.an.try_factor(bottom.0, bottom.1)?) else {
            return self.that(false, what);
        };
        let ok = is_m_crossing(&t, &b)?.is_some();
        self.that(ok, what)
    }
}

/// `j' = max{j : (A+Y_{j-1})/(B+Y_{j-1}) is a supplemented chief factor}` for
/// a supplemented `A/B`, with every relation of the two cases verified.
pub fn transfer_supplemented(an: &Analysis, f: &ChiefFactor, y: &ChiefSeries) -> Result<TransferReport> {
    if !f.supplemented {
        return Err(Error::Precondition("factor is Frattini; use transfer_frattini".into()));
    }
    check_between(an, f, y)?;
    let (a, b) = (&f.a, &f.b);
    let mut j_set = Vec::new();
    for j in 1..=y.len() {
        let yj = y.term(j - 1);
        if an.try_factor(&a.sum(yj), &b.sum(yj))?.is_some_and(|g| g.supplemented) {
            j_set.push(j);
        }
    }
    let j = *j_set.last().ok_or_else(|| Error::Verification("no index j for a supplemented factor".into()))?;
    let (x, yy) = (y.term(j).clone(), y.term(j - 1).clone());
    let mut c = Checks::new(an);
    let (ax, bx, ay, by) = (a.sum(&x), b.sum(&x), a.sum(&yy), b.sum(&yy));
    let case = if ax == bx {
        c.that(ax == ay, "A+X = A+Y")?;
        c.desc(&ax, &by, a, b, "(A+X)/(B+Y) ↘ A/B")?;
        c.desc(&ax, &by, &x, &yy, "(A+X)/(B+Y) ↘ X/Y")?;
        let (a_y, b_y, b_x) = (a.intersect(&yy), b.intersect(&yy), b.intersect(&x));
        c.that(a_y == b_y && b_y == b_x, "A∩Y = B∩Y = B∩X")?;
        let a_x = a.intersect(&x);
        c.desc(a, b, &a_x, &b_y, "A/B ↘ (A∩X)/(B∩Y)")?;
        c.desc(&x, &yy, &a_x, &b_y, "X/Y ↘ (A∩X)/(B∩Y)")?;
        TransferCase::I
    } else {
        c.crossing((&ax, &bx), (&ay, &by), "[(A+X)/(B+X) ↘ (A+Y)/(B+Y)] is an m-crossing")?;
        c.desc(&ay, &by, a, b, "(A+Y)/(B+Y) ↘ A/B")?;
        c.desc(&bx, &by, &x, &yy, "(B+X)/(B+Y) ↘ X/Y")?;
        TransferCase::II
    };
    c.supplemented(&ay, &by, "(A+Y)/(B+Y) supplemented")?;
    c.supplemented(&bx, &by, "(B+X)/(B+Y) supplemented")?;
    c.supplemented(&x, &yy, "X/Y supplemented")?;
    Ok(TransferReport { j, j_set, case, x, y: yy, checked: c.done })
}

/// The dual selection `j' = min{j : (A∩Y_j)/(B∩Y_j) is a Frattini chief factor}`
/// for a Frattini `A/B`, with the dual relations verified.
pub fn transfer_frattini(an: &Analysis, f: &ChiefFactor, y: &ChiefSeries) -> Result<TransferReport> {
    if !f.frattini {
        return Err(Error::Precondition("factor is supplemented; use transfer_supplemented".into()));
    }
    check_between(an, f, y)?;
    let (a, b) = (&f.a, &f.b);
    let mut j_set = Vec::new();
    for j in 1..=y.len() {
        let yj = y.term(j);
        if an.try_factor(&a.intersect(yj), &b.intersect(yj))?.is_some_and(|g| g.frattini) {
            j_set.push(j);
        }
    }
    let j = *j_set.first().ok_or_else(|| Error::Verification("no index j for a Frattini factor".into()))?;
    let (x, yy) = (y.term(j).clone(), y.term(j - 1).clone());
    let mut c = Checks::new(an);
    let (a_x, b_x, a_y, b_y) = (a.intersect(&x), b.intersect(&x), a.intersect(&yy), b.intersect(&yy));
    let case = if a_y == b_y {
        c.that(a_y == b_x, "A∩Y = B∩X")?;
        c.desc(a, b, &a_x, &b_y, "A/B ↘ (A∩X)/(B∩Y)")?;
        c.desc(&x, &yy, &a_x, &b_y, "X/Y ↘ (A∩X)/(B∩Y)")?;
        let (ay, ax, bx) = (a.sum(&yy), a.sum(&x), b.sum(&x));
        c.that(ay == ax && ax == bx, "A+Y = A+X = B+X")?;
        let by = b.sum(&yy);
        c.desc(&ax, &by, a, b, "(A+X)/(B+Y) ↘ A/B")?;
        c.desc(&ax, &by, &x, &yy, "(A+X)/(B+Y) ↘ X/Y")?;
        TransferCase::I
    } else {
        c.crossing((&a_x, &b_x), (&a_y, &b_y), "[(A∩X)/(B∩X) ↘ (A∩Y)/(B∩Y)] is an m-crossing")?;
        c.desc(a, b, &a_x, &b_x, "A/B ↘ (A∩X)/(B∩X)")?;
        c.desc(&x, &yy, &a_x, &a_y, "X/Y ↘ (A∩X)/(A∩Y)")?;
        TransferCase::II
    };
    c.frattini(&a_x, &b_x, "(A∩X)/(B∩X) Frattini")?;
    c.frattini(&a_x, &a_y, "(A∩X)/(A∩Y) Frattini")?;
    c.frattini(&x, &yy, "X/Y Frattini")?;
    Ok(TransferReport { j, j_set, case, x, y: yy, checked: c.done })
}

/// Checks the four series-translation statements for `A/B` against every index of `y`.
pub fn check_series_translation(an: &Analysis, f: &ChiefFactor, y: &ChiefSeries) -> Result<()> {
    check_between(an, f, y)?;
    let (a, b) = (&f.a, &f.b);
    let m = y.len();
    let fail = |what: String| Err(Error::Verification(format!("series translation: {what}")));
    let plus = |k: usize| (a.sum(y.term(k)), b.sum(y.term(k)));
    let meet = |k: usize| (a.intersect(y.term(k)), b.intersect(y.term(k)));
    for j in 0..=m {
        let (aj, bj) = plus(j);
        if aj == bj && (j..=m).any(|k| plus(k).0 != plus(k).1) {
            return fail(format!("A+Y_{j} = B+Y_{j} but not for a later index"));
        }
        let (aj, bj) = meet(j);
        if aj == bj && (0..=j).any(|k| meet(k).0 != meet(k).1) {
            return fail(format!("A∩Y_{j} = B∩Y_{j} but not for an earlier index"));
        }
    }
    for j in 1..=m {
        let (top, bot) = plus(j - 1);
        if bot.properly_in(&top) {
            let (ma, mb) = meet(j - 1);
            if ma != mb {
                return fail(format!("B+Y_{} ⊂ A+Y_{} but A∩Y_{} != B∩Y_{}", j - 1, j - 1, j - 1, j - 1));
            }
            for k in 1..=j {
                let (tk, bk) = plus(k - 1);
                if !bk.properly_in(&tk) {
                    return fail(format!("strictness lost at Y_{}", k - 1));
                }
                let ok = an.is_chief(&top, &bot)
                    && an.is_chief(&tk, &bk)
                    && descends(&top, &bot, &tk, &bk)
                    && descends(&tk, &bk, a, b);
                if !ok {
                    return fail(format!("(A+Y_{0})/(B+Y_{0}) ↘ (A+Y_{1})/(B+Y_{1}) ↘ A/B fails", j - 1, k - 1));
                }
            }
        }
        let (ta, tb) = meet(j);
        if tb.properly_in(&ta) {
            let (pa, pb) = plus(j);
            if pa != pb {
                return fail(format!("B∩Y_{j} ⊂ A∩Y_{j} but A+Y_{j} != B+Y_{j}"));
            }
            for k in j..=m {
                let (ka, kb) = meet(k);
                if !kb.properly_in(&ka) {
                    return fail(format!("strictness lost at Y_{k}"));
                }
                let ok = an.is_chief(&ka, &kb)
                    && an.is_chief(&ta, &tb)
                    && descends(a, b, &ka, &kb)
                    && descends(&ka, &kb, &ta, &tb);
                if !ok {
                    return fail(format!("A/B ↘ (A∩Y_{k})/(B∩Y_{k}) ↘ (A∩Y_{j})/(B∩Y_{j}) fails"));
                }
            }
        }
    }
    Ok(())
}

/// Per-index content of a [`JHReport`].
#[derive(Debug, Clone, Serialize)]
pub struct IndexReport {
    pub i: usize,
    pub j: usize,
    pub kind: &'static str,
    pub transfer: TransferReport,
    /// Witness built from the transfer construction.
    pub witness: MRelatedWitness,
    /// Witness found by the generic case search.
    pub search_witness: MRelatedWitness,
    pub connection: LConnection,
    pub common_supplement: Option<Subspace>,
    pub common_complement: Option<Subspace>,
    /// A common complement among all subalgebras, when both factors have one.
    pub common_relaxed_complement: Option<Subspace>,
}

#[derive(Debug, Clone, Serialize)]
pub struct UniquenessReport {
    pub candidates: usize,
    /// Permutations pairing every index with an m-related factor.
    pub m_related_permutations: Vec<Permutation>,
}

#[derive(Debug, Clone, Serialize)]
pub struct JHReport {
    pub x_series: ChiefSeries,
    pub y_series: ChiefSeries,
    pub sigma: Permutation,
    pub per_index: Vec<IndexReport>,
    /// Present when the exhaustive check over all permutations ran.
    pub uniqueness: Option<UniquenessReport>,
}

/// Exhaustive uniqueness checking runs up to this many factors.
pub const EXHAUSTIVE_UNIQUENESS_MAX: usize = 4;

/// Case-1/2 witness from a supplemented transfer, case-3/4 witness from a Frattini one.
fn formula_witness(an: &Analysis, f: &ChiefFactor, g: &ChiefFactor, t: &TransferReport) -> Result<MRelatedWitness> {
    let (case, parameter) = match (f.supplemented, t.case) {
        (true, TransferCase::I) => (1, f.b.sum(&t.y)),
        // the m-crossing of the transfer, swapped so that A/B sits under its bottom
        (true, TransferCase::II) => (2, f.b.sum(&t.y)),
        (false, TransferCase::I) => (3, f.a.intersect(&t.x)),
        (false, TransferCase::II) => (4, f.a.intersect(&t.x)),
    };
    witness_for(an, case, f, g, &parameter)?
        .ok_or_else(|| Error::Verification(format!("the transfer configuration is not a case-{case} witness")))
}

fn common<'a>(xs: impl Iterator<Item = &'a MaximalRecord>, other: &ChiefFactor, complement: bool) -> Option<Subspace> {
    let mut xs = xs;
    xs.find(|m| if complement { m.complements(&other.a, &other.b) } else { m.supplements(&other.a, &other.b) })
        .map(|m| m.subalgebra.clone())
}

/// The Jordan-Hölder permutation between two chief series with the same
/// endpoints, with every guarantee checked.
pub fn sigma(an: &Analysis, x: &ChiefSeries, y: &ChiefSeries) -> Result<JHReport> {
    if x.bottom() != y.bottom() || x.top() != y.top() {
        return Err(Error::Precondition("series have different endpoints".into()));
    }
    let n = x.len();
    if y.len() != n {
        return Err(Error::Verification(format!("series lengths differ: {} vs {}", n, y.len())));
    }
    let xf: Vec<_> = (1..=n).map(|i| an.factor(x.term(i), x.term(i - 1))).collect::<Result<_>>()?;
    let yf: Vec<_> = (1..=n).map(|j| an.factor(y.term(j), y.term(j - 1))).collect::<Result<_>>()?;
    let mut per_index = Vec::with_capacity(n);
    for i in 1..=n {
        let f = &xf[i - 1];
        let t = if f.supplemented { transfer_supplemented(an, f, y)? } else { transfer_frattini(an, f, y)? };
        let g = &yf[t.j - 1];
        let witness = formula_witness(an, f, g, &t)?;
        validate_witness(an, f, g, &witness)?;
        let search_witness = m_related(an, f, g)?
            .ok_or_else(|| Error::Verification(format!("index {i}: generic search finds no m-related witness")))?;
        if f.frattini != g.frattini {
            return Err(Error::Verification(format!("index {i}: Frattini parity differs")));
        }
        let connection = l_connected(an, f, g)?
            .ok_or_else(|| Error::Verification(format!("index {i}: paired factors are not L-connected")))?;
        let common_supplement = if f.supplemented && g.supplemented {
            Some(common(f.supplements.iter(), g, false).ok_or_else(|| {
                Error::Verification(format!("index {i}: no common maximal supplement"))
            })?)
        } else {
            None
        };
        let common_complement = if f.complemented && g.complemented {
            Some(common(f.complements(), g, true).ok_or_else(|| {
                Error::Verification(format!("index {i}: no common maximal complement"))
            })?)
        } else {
            None
        };
        let rf = relaxed_complements(an, &f.a, &f.b)?;
        let rg = relaxed_complements(an, &g.a, &g.b)?;
        let common_relaxed_complement = if !rf.is_empty() && !rg.is_empty() {
            Some(rf.iter().find(|m| rg.contains(m)).cloned().ok_or_else(|| {
                Error::Verification(format!("index {i}: no common complement among all subalgebras"))
            })?)
        } else {
            None
        };
        per_index.push(IndexReport {
            i,
            j: t.j,
            kind: f.kind(),
            transfer: t,
            witness,
            search_witness,
            connection,
            common_supplement,
            common_complement,
            common_relaxed_complement,
        });
    }
    let sigma = Permutation::new(per_index.iter().map(|r| r.j).collect())?;
    let uniqueness = if n <= EXHAUSTIVE_UNIQUENESS_MAX {
        let mut related = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                related[i][j] = m_related(an, &xf[i], &yf[j])?.is_some();
                if related[i][j] {
                    check_related_transfer(an, &xf[i], y, j + 1)?;
                }
            }
        }
        let all = Permutation::all(n);
        let candidates = all.len();
        let m_related_permutations: Vec<Permutation> =
            all.into_iter().filter(|p| (1..=n).all(|i| related[i - 1][p.apply(i) - 1])).collect();
        if m_related_permutations != [sigma.clone()] {
            let found: Vec<String> = m_related_permutations.iter().map(|p| p.to_string()).collect();
            return Err(Error::Verification(format!(
                "σ = {sigma} but the m-related permutations are [{}]",
                found.join(", ")
            )));
        }
        Some(UniquenessReport { candidates, m_related_permutations })
    } else {
        None
    };
    Ok(JHReport { x_series: x.clone(), y_series: y.clone(), sigma, per_index, uniqueness })
}

/// For `A/B` m-related to `Y_j/Y_{j-1}`: both are supplemented iff
/// `(A+Y_{j-1})/(B+Y_{j-1})` is a supplemented chief factor, and both are
/// Frattini iff `(A∩Y_j)/(B∩Y_j)` is a Frattini chief factor.
pub fn check_related_transfer(an: &Analysis, f: &ChiefFactor, y: &ChiefSeries, j: usize) -> Result<()> {
    let g = an.factor(y.term(j), y.term(j - 1))?;
    let (below, at) = (y.term(j - 1), y.term(j));
    let sup = an.try_factor(&f.a.sum(below), &f.b.sum(below))?.is_some_and(|h| h.supplemented);
    let frat = an.try_factor(&f.a.intersect(at), &f.b.intersect(at))?.is_some_and(|h| h.frattini);
    if (f.supplemented && g.supplemented) != sup {
        return Err(Error::Verification(format!("index {j}: supplemented transfer test disagrees")));
    }
    if (f.frattini && g.frattini) != frat {
        return Err(Error::Verification(format!("index {j}: Frattini transfer test disagrees")));
    }
    Ok(())
}

/// A maximal subalgebra supplementing both factors of pair `i` (1-based).
pub fn common_supplement(an: &Analysis, report: &JHReport, i: usize) -> Result<MaximalRecord> {
    let (f, g) = pair(an, report, i)?;
    if !f.supplemented || !g.supplemented {
        return Err(Error::Precondition(format!("pair {i} is not supplemented")));
    }
    f.supplements
        .iter()
        .find(|m| m.supplements(&g.a, &g.b))
        .cloned()
        .ok_or_else(|| absence(an, &f, &g, "supplement"))
}

/// A maximal subalgebra complementing both factors of pair `i` (1-based).
pub fn common_complement(an: &Analysis, report: &JHReport, i: usize) -> Result<MaximalRecord> {
    let (f, g) = pair(an, report, i)?;
    if !f.complemented || !g.complemented {
        return Err(Error::Precondition(format!("pair {i} is not complemented")));
    }
    let found = f.complements().find(|m| m.complements(&g.a, &g.b)).cloned();
    found.ok_or_else(|| absence(an, &f, &g, "complement"))
}

fn pair(an: &Analysis, report: &JHReport, i: usize) -> Result<(ChiefFactor, ChiefFactor)> {
    if i == 0 || i > report.sigma.n() {
        return Err(Error::Precondition(format!("index {i} out of range")));
    }
    let x = &report.x_series;
    let y = &report.y_series;
    let j = report.sigma.apply(i);
    Ok(((*an.factor(x.term(i), x.term(i - 1))?).clone(), (*an.factor(y.term(j), y.term(j - 1))?).clone()))
}

fn absence(an: &Analysis, f: &ChiefFactor, g: &ChiefFactor, what: &str) -> Error {
    let l = an.algebra();
    let list = |c: &ChiefFactor| c.supplements.iter().map(|m| l.fmt_subspace(&m.subalgebra)).collect::<Vec<_>>().join(", ");
    Error::Verification(format!("no common {what}: first factor has [{}], second has [{}]", list(f), list(g)))
}

/// Runs [`sigma`] on every ordered pair, in parallel, in canonical order.
pub fn all_pairs(an: &Analysis, series: &[ChiefSeries]) -> Vec<(usize, usize, Result<JHReport>)> {
    let jobs: Vec<(usize, usize)> = (0..series.len()).flat_map(|i| (0..series.len()).map(move |j| (i, j))).collect();
    jobs.into_par_iter().map(|(i, j)| (i, j, sigma(an, &series[i], &series[j]))).collect()
}

/// Every m-crossing among the chief factors of `L`, each checked against the swap theorem.
pub fn scan_crossings(an: &Analysis) -> Result<usize> {
    let factors = an.all_factors()?;
    let mut count = 0;
    for f in &factors {
        for g in &factors {
            if let Some(x) = is_m_crossing(f, g)? {
                swap_crossing(an, &x)?;
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Result of [`cut_and_paste`].
#[derive(Debug, Clone, Serialize)]
pub struct CutPasteReport {
    /// `B_i ∩ U` for the given series of `L`, in `L`'s coordinates.
    pub down: Vec<Subspace>,
    /// `B + U_i` for a chief series of `U` above `B ∩ U`.
    pub up: Vec<Subspace>,
    pub supplements_checked: usize,
}

fn to_sub(u: &Subspace, s: &Subspace, lu: &LieAlgebra) -> Subspace {
    let rows: Vec<Vec<u8>> = s.rows().map(|r| u.coordinates(r).expect("inside U")).collect();
    lu.span(&rows).expect("lengths")
}

fn from_sub(u: &Subspace, t: &Subspace, l: &LieAlgebra) -> Subspace {
    let rows: Vec<Vec<u8>> = t.rows().map(|r| u.combine(r)).collect();
    l.span(&rows).expect("lengths")
}

/// With `L = B + U`, carries a chief series of `L` between `B` and `L` down to
/// `U` and a chief series of `U` between `B ∩ U` and `U` up to `L`, checking
/// that maximal supplements and their cores correspond. `series_l` runs
/// upward from `B` to `L`; when `None`, a canonical one is used.
pub fn cut_and_paste(an: &Analysis, b: &Subspace, u: &Subspace, series_l: Option<&ChiefSeries>) -> Result<CutPasteReport> {
    let l = an.algebra();
    an.require_ideal(b, "B")?;
    if !l.is_subalgebra(u) {
        return Err(Error::NotSubalgebra);
    }
    if b.sum(u) != l.whole() {
        return Err(Error::Precondition("L != B + U".into()));
    }
    let fail = |what: String| Error::Verification(format!("cut and paste: {what}"));
    let bu = b.intersect(u);
    if l.dim() - b.dim() != u.dim() - bu.dim() {
        return Err(fail("dim L/B != dim U/(B∩U)".into()));
    }
    let lu = l.restrict(u)?;
    let an_u = Analysis::new(lu.clone());
    let own;
    let series = match series_l {
        Some(s) => s,
        None => {
            own = chief_series(l, b, &l.whole())?;
            &own
        }
    };
    if series.bottom() != b || !series.top().is_full() {
        return Err(Error::Precondition("series must run from B to L".into()));
    }
    let mut checked = 0;
    let down: Vec<Subspace> = series.terms().iter().map(|t| t.intersect(u)).collect();
    for i in 1..down.len() {
        let (hi, lo) = (to_sub(u, &down[i], &lu), to_sub(u, &down[i - 1], &lu));
        if !is_chief_factor(&lu, &hi, &lo) {
            return Err(fail(format!("B_{i}∩U / B_{}∩U is not a chief factor of U", i - 1)));
        }
        let (ti, tl) = series.factor(i);
        for m in an.maximal()?.iter().filter(|m| m.supplements(ti, tl)) {
            let mu = to_sub(u, &m.subalgebra.intersect(u), &lu);
            let rec = an_u.maximal_record(&mu)?.ok_or_else(|| fail("M∩U is not maximal in U".into()))?;
            if !rec.supplements(&hi, &lo) {
                return Err(fail("M∩U does not supplement the corresponding factor of U".into()));
            }
            if rec.core != to_sub(u, &m.core.intersect(u), &lu) {
                return Err(fail("(M∩U)_U != M_L ∩ U".into()));
            }
            checked += 1;
        }
    }
    let zero_u = to_sub(u, &bu, &lu);
    let series_u = chief_series(&lu, &zero_u, &lu.whole())?;
    let up: Vec<Subspace> = series_u.terms().iter().map(|t| b.sum(&from_sub(u, t, l))).collect();
    for i in 1..up.len() {
        if !an.is_chief(&up[i], &up[i - 1]) {
            return Err(fail(format!("B+U_{i} / B+U_{} is not a chief factor of L", i - 1)));
        }
        let (ti, tl) = series_u.factor(i);
        for t in an_u.maximal()?.iter().filter(|m| m.supplements(ti, tl)) {
            let bt = b.sum(&from_sub(u, &t.subalgebra, l));
            let rec = an.maximal_record(&bt)?.ok_or_else(|| fail("B+T is not maximal in L".into()))?;
            if !rec.supplements(&up[i], &up[i - 1]) {
                return Err(fail("B+T does not supplement the corresponding factor of L".into()));
            }
            if rec.core != b.sum(&from_sub(u, &t.core, l)) {
                return Err(fail("(B+T)_L != B + T_U".into()));
            }
            checked += 1;
        }
    }
    Ok(CutPasteReport { down, up, supplements_checked: checked })
}
