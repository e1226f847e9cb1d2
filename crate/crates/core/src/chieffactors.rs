//! Chief factors and the relations between them: `↘`, m-crossings,
//! m-relatedness, L-isomorphism and L-connectedness, plus literal checks of
//! the supplement-transfer rules.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::analysis::Analysis;
use crate::error::{Error, Result};
use crate::linalg::{kernel, quotient_coords, Matrix, Subspace};
use crate::maximal::{monolithic_supplements_from, MaximalRecord, PrimitiveKind};

/// A chief factor `A/B` with its classification.
///
/// `complemented` refers to a maximal complement; [`relaxed_complements`]
/// allows any subalgebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChiefFactor {
    pub a: Subspace,
    pub b: Subspace,
    pub frattini: bool,
    pub supplemented: bool,
    pub complemented: bool,
    pub abelian: bool,
    pub supplements: Vec<MaximalRecord>,
}

impl ChiefFactor {
    pub fn dim(&self) -> usize {
        self.a.dim() - self.b.dim()
    }

    pub fn complements(&self) -> impl Iterator<Item = &MaximalRecord> {
        self.supplements.iter().filter(|m| m.complements(&self.a, &self.b))
    }

    pub fn supplement_set(&self) -> BTreeSet<&Subspace> {
        self.supplements.iter().map(|m| &m.subalgebra).collect()
    }

    pub fn kind(&self) -> &'static str {
        if self.frattini {
            "frattini"
        } else {
            "supplemented"
        }
    }
}

pub(crate) fn make_chief_factor_uncached(an: &Analysis, a: &Subspace, b: &Subspace) -> Result<ChiefFactor> {
    let l = an.algebra();
    an.require_ideal(a, "A")?;
    an.require_ideal(b, "B")?;
    if !b.properly_in(a) {
        return Err(Error::NotChiefFactor(format!(
            "{} is not properly contained in {}",
            l.fmt_subspace(b),
            l.fmt_subspace(a)
        )));
    }
    if !an.minimal_ideals_over(b)?.contains(a) {
        let mid = crate::ideals::intermediate_ideal(l, a, b).expect("a non-minimal step has an intermediate ideal");
        return Err(Error::NotChiefFactor(format!(
            "{} lies strictly between {} and {}",
            l.fmt_subspace(&mid),
            l.fmt_subspace(b),
            l.fmt_subspace(a)
        )));
    }
    let frattini = a.leq(&an.quotient_frattini(b)?);
    let supplements: Vec<MaximalRecord> = an.maximal()?.iter().filter(|m| m.supplements(a, b)).cloned().collect();
    let supplemented = !supplements.is_empty();
    if frattini == supplemented {
        return Err(Error::Verification(format!(
            "{}/{}: Frattini = {} yet maximal supplement exists = {}",
            l.fmt_subspace(a),
            l.fmt_subspace(b),
            frattini,
            supplemented
        )));
    }
    let complemented = supplements.iter().any(|m| m.complements(a, b));
    let abelian = l.subspace_product(a, a).leq(b);
    Ok(ChiefFactor { a: a.clone(), b: b.clone(), frattini, supplemented, complemented, abelian, supplements })
}

/// Classifies `A/B`, failing with an intermediate ideal when the step is not minimal.
pub fn make_chief_factor(an: &Analysis, a: &Subspace, b: &Subspace) -> Result<ChiefFactor> {
    an.factor(a, b).map(|f| (*f).clone())
}

/// `A = B + C` and `B ∩ C = D` on raw subspaces.
pub fn descends(a: &Subspace, b: &Subspace, c: &Subspace, d: &Subspace) -> bool {
    &b.sum(c) == a && &b.intersect(c) == d
}

/// `A/B ↘ C/D`.
pub fn descends_to(f: &ChiefFactor, g: &ChiefFactor) -> bool {
    descends(&f.a, &f.b, &g.a, &g.b)
}

/// Subalgebras `M` with `L = A + M` and `B ⊆ M`, any dimension.
pub fn relaxed_supplements(an: &Analysis, a: &Subspace, b: &Subspace) -> Result<Vec<Subspace>> {
    let whole = an.algebra().whole();
    Ok(an.subalgebras()?.iter().filter(|m| b.leq(m) && a.sum(m) == whole).cloned().collect())
}

/// Subalgebras `M` with `L = A + M` and `A ∩ M = B`, any dimension.
pub fn relaxed_complements(an: &Analysis, a: &Subspace, b: &Subspace) -> Result<Vec<Subspace>> {
    let whole = an.algebra().whole();
    Ok(an
        .subalgebras()?
        .iter()
        .filter(|m| b.leq(m) && a.sum(m) == whole && &a.intersect(m) == b)
        .cloned()
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClauseResult {
    pub clause: &'static str,
    pub applicable: bool,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescentReport {
    pub clauses: Vec<ClauseResult>,
}

impl DescentReport {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&ClauseResult> {
        self.clauses.iter().filter(|c| !c.passed).collect()
    }
}

/// Pairs `(M, K)` in clause (ii) range over all subalgebras only when there are at most this many.
const RELAXED_PAIR_LIMIT: usize = 400;

/// Evaluates every applicable clause of the supplement-transfer rule for
/// `f ↘ g`, over maximal subalgebras and (within limits) all subalgebras.
pub fn descent_check(an: &Analysis, f: &ChiefFactor, g: &ChiefFactor) -> Result<DescentReport> {
    if !descends_to(f, g) {
        return Err(Error::Precondition("descent_check needs A/B ↘ C/D".into()));
    }
    let l = an.algebra();
    let whole = l.whole();
    let (a, b, c, d) = (&f.a, &f.b, &g.a, &g.b);
    let subs = an.subalgebras()?;
    let supp = |m: &Subspace, top: &Subspace, bot: &Subspace| bot.leq(m) && top.sum(m) == whole;
    let comp = |m: &Subspace, top: &Subspace, bot: &Subspace| supp(m, top, bot) && &top.intersect(m) == bot;
    let mut clauses = Vec::new();
    let mut push = |clause, applicable, failure: Option<String>| {
        clauses.push(ClauseResult { clause, applicable, passed: failure.is_none(), detail: failure.unwrap_or_default() })
    };

    let bad = subs.iter().find(|m| supp(m, a, b) && !supp(m, c, d));
    push("(i)", true, bad.map(|m| format!("{} supplements A/B but not C/D", l.fmt_subspace(m))));
    let bad = subs.iter().find(|m| comp(m, a, b) && !comp(m, c, d));
    push("(iii)-(i)", true, bad.map(|m| format!("{} complements A/B but not C/D", l.fmt_subspace(m))));

    let pool: Vec<&Subspace> = if subs.len() <= RELAXED_PAIR_LIMIT {
        subs.iter().collect()
    } else {
        an.maximal()?.iter().map(|m| &m.subalgebra).collect()
    };
    let mut fail_ii = None;
    let mut fail_iii = None;
    for m in pool.iter().filter(|m| supp(m, a, b)) {
        for k in pool.iter().filter(|k| supp(k, b, d)) {
            let mk = m.intersect(k);
            let cm = c.sum(&mk);
            if fail_ii.is_none() && !(l.is_subalgebra(&cm) && supp(&cm, a, c) && supp(&mk, a, d)) {
                fail_ii = Some(format!("M = {}, K = {}", l.fmt_subspace(m), l.fmt_subspace(k)));
            }
            if fail_iii.is_none() && comp(m, a, b) && comp(k, b, d) && !(comp(&cm, a, c) && comp(&mk, a, d)) {
                fail_iii = Some(format!("M = {}, K = {}", l.fmt_subspace(m), l.fmt_subspace(k)));
            }
        }
    }
    push("(ii)", true, fail_ii);
    push("(iii)-(ii)", true, fail_iii);

    let nonabelian = !g.abelian;
    let iv = if nonabelian {
        let mf = monolithic_supplements_from(an.maximal()?, a, b)?;
        let mg = monolithic_supplements_from(an.maximal()?, c, d)?;
        (mf.records != mg.records).then(|| format!("{} vs {} monolithic supplements", mf.records.len(), mg.records.len()))
    } else {
        None
    };
    push("(iv)", nonabelian, iv);
    let bd_abelian_chief = an.is_chief(b, d) && l.subspace_product(b, b).leq(d);
    let applicable = nonabelian && bd_abelian_chief;
    let v = if applicable {
        let left = relaxed_complements(an, b, d)?;
        let right = relaxed_complements(an, a, c)?;
        (left != right).then(|| format!("{} complements of B/D vs {} of A/C", left.len(), right.len()))
    } else {
        None
    };
    push("(v)", applicable, v);
    Ok(DescentReport { clauses })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum JoinCase {
    /// Abelian factor.
    Abelian,
    /// Nonabelian factor, one supplement of type 3 and the other monolithic.
    Mixed,
    /// Nonabelian factor, both supplements of type 3.
    BothType3,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JoinReport {
    pub m: MaximalRecord,
    pub case: JoinCase,
    pub checks: Vec<&'static str>,
}

/// `M = A + U ∩ S` for two maximal supplements of `A/B` with different cores,
/// checked to be maximal with `M_L = A + U_L ∩ S_L` and the case-specific
/// complement and supplement properties.
pub fn join_supplements(an: &Analysis, u: &MaximalRecord, s: &MaximalRecord, f: &ChiefFactor) -> Result<JoinReport> {
    if u.subalgebra == s.subalgebra {
        return Err(Error::Precondition("U and S coincide".into()));
    }
    if u.core == s.core {
        return Err(Error::Precondition("U and S have the same core".into()));
    }
    if !u.supplements(&f.a, &f.b) || !s.supplements(&f.a, &f.b) {
        return Err(Error::Precondition("U and S must both supplement A/B".into()));
    }
    let l = an.algebra();
    let fail = |what: &str| Error::Verification(format!("join of {} and {}: {what}", l.fmt_subspace(&u.subalgebra), l.fmt_subspace(&s.subalgebra)));
    let us = u.subalgebra.intersect(&s.subalgebra);
    let m_space = f.a.sum(&us);
    let m = an.maximal_record(&m_space)?.cloned().ok_or_else(|| fail("A + U∩S is not maximal"))?;
    let h = u.core.intersect(&s.core);
    if m.core != f.a.sum(&h) {
        return Err(fail("M_L != A + U_L ∩ S_L"));
    }
    let mut checks = vec!["maximal", "core"];
    let meets_equal = m.subalgebra.intersect(&u.subalgebra) == us && m.subalgebra.intersect(&s.subalgebra) == us;
    let complements_chief = |top: &Subspace, bot: &Subspace| an.is_chief(top, bot) && m.complements(top, bot);
    let case = if f.abelian {
        if m.quotient_type != PrimitiveKind::Type1 {
            return Err(fail("M is not of type 1"));
        }
        if !complements_chief(&u.core, &h) || !complements_chief(&s.core, &h) {
            return Err(fail("M does not complement U_L/(U_L∩S_L) and S_L/(U_L∩S_L)"));
        }
        if !meets_equal {
            return Err(fail("M∩U = M∩S = U∩S fails"));
        }
        checks.extend(["type 1", "complements U_L/H and S_L/H", "M∩U = M∩S = U∩S"]);
        JoinCase::Abelian
    } else {
        let t3 = |r: &MaximalRecord| r.quotient_type == PrimitiveKind::Type3;
        match (t3(u), t3(s)) {
            (false, false) => return Err(fail("nonabelian factor but neither supplement has type 3")),
            (true, true) => {
                if m.quotient_type != PrimitiveKind::Type3 {
                    return Err(fail("M is not of type 3"));
                }
                let top1 = f.a.sum(&s.core);
                let top2 = f.a.sum(&u.core);
                if !complements_chief(&top1, &m.core) || !complements_chief(&top2, &m.core) {
                    return Err(fail("M does not complement (A+S_L)/M_L and (A+U_L)/M_L"));
                }
                if !meets_equal {
                    return Err(fail("M∩U = M∩S = U∩S fails"));
                }
                checks.extend(["type 3", "complements (A+S_L)/M_L and (A+U_L)/M_L", "M∩U = M∩S = U∩S"]);
                JoinCase::BothType3
            }
            (ut3, _) => {
                let (t, mono) = if ut3 { (u, s) } else { (s, u) };
                if !mono.monolithic {
                    return Err(fail("the supplement not of type 3 is not monolithic"));
                }
                let c = crate::ideals::centralizer_of_factor(l, &f.a, &f.b)?;
                if !t.core.properly_in(&mono.core) || mono.core != c {
                    return Err(fail("U_L ⊂ S_L = C_L(A/B) fails"));
                }
                if m.quotient_type != PrimitiveKind::Type2 {
                    return Err(fail("M is not of type 2"));
                }
                if !an.is_chief(&mono.core, &t.core) || !m.supplements(&mono.core, &t.core) {
                    return Err(fail("M does not supplement S_L/U_L"));
                }
                checks.extend(["U_L ⊂ S_L = C_L(A/B)", "type 2", "supplements S_L/U_L"]);
                JoinCase::Mixed
            }
        }
    };
    Ok(JoinReport { m, case, checks })
}

/// `[A/B ↘ C/D]`: `A/B ↘ C/D` with the top Frattini and the bottom supplemented.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MCrossing {
    pub top: ChiefFactor,
    pub bottom: ChiefFactor,
    pub shared_supplements: Vec<Subspace>,
}

/// Detects an m-crossing. A nonabelian bottom would contradict the theory and is reported as a verification error.
pub fn is_m_crossing(f: &ChiefFactor, g: &ChiefFactor) -> Result<Option<MCrossing>> {
    if !(descends_to(f, g) && f.frattini && g.supplemented) {
        return Ok(None);
    }
    if !g.abelian {
        return Err(Error::Verification("m-crossing with a nonabelian bottom factor".into()));
    }
    Ok(Some(MCrossing {
        top: f.clone(),
        bottom: g.clone(),
        shared_supplements: g.supplements.iter().map(|m| m.subalgebra.clone()).collect(),
    }))
}

/// From `[A/B ↘ C/D]` with `A/C` and `B/D` chief, builds `[A/C ↘ B/D]` and
/// checks that `C/D` and `B/D` have the same maximal supplements.
pub fn m_crossing_swap(x: &MCrossing, c_mid: &ChiefFactor, b_mid: &ChiefFactor) -> Result<MCrossing> {
    let (a, b, c, d) = (&x.top.a, &x.top.b, &x.bottom.a, &x.bottom.b);
    if &c_mid.a != a || &c_mid.b != c {
        return Err(Error::Precondition("c_mid must be A/C".into()));
    }
    if &b_mid.a != b || &b_mid.b != d {
        return Err(Error::Precondition("b_mid must be B/D".into()));
    }
    let swapped = is_m_crossing(c_mid, b_mid)?
        .ok_or_else(|| Error::Verification("[A/C ↘ B/D] is not an m-crossing".into()))?;
    if x.bottom.supplement_set() != b_mid.supplement_set() {
        return Err(Error::Verification("C/D and B/D have different maximal supplements".into()));
    }
    Ok(swapped)
}

/// [`m_crossing_swap`] with the middle factors built (and checked to be chief) from the crossing.
pub fn swap_crossing(an: &Analysis, x: &MCrossing) -> Result<MCrossing> {
    let c_mid = an.factor(&x.top.a, &x.bottom.a)?;
    let b_mid = an.factor(&x.top.b, &x.bottom.b)?;
    m_crossing_swap(x, &c_mid, &b_mid)
}

/// Matrices of `ad x_i` on `A/B` in quotient coordinates.
fn factor_action(an: &Analysis, f: &ChiefFactor) -> Result<(crate::linalg::QuotientCoords, Vec<Matrix>)> {
    let l = an.algebra();
    let q = quotient_coords(&f.a, &f.b)?;
    let k = q.dim();
    let mats = (0..l.dim())
        .map(|i| {
            let x = l.basis_vector(i);
            let mut m = Matrix::zeros(l.field(), k, k);
            for r in 0..k {
                let img = q.project(&l.bracket(&x, q.basis_lift(r)));
                for (s, v) in img.into_iter().enumerate() {
                    m.set(s, r, v);
                }
            }
            m
        })
        .collect();
    Ok((q, mats))
}

/// Basis of the space of L-module maps `A/B → C/D`, as matrices in quotient coordinates.
pub fn module_homs(an: &Analysis, f: &ChiefFactor, g: &ChiefFactor) -> Result<Vec<Matrix>> {
    let field = an.algebra().field();
    let (_, rf) = factor_action(an, f)?;
    let (_, rg) = factor_action(an, g)?;
    let (kf, kg) = (f.dim(), g.dim());
    // θ is kg x kf, unknown θ[s][r] at s*kf + r; θ ρ_f(x) = ρ_g(x) θ.
    let mut rows = Vec::new();
    for (mf, mg) in rf.iter().zip(&rg) {
        for s in 0..kg {
            for r in 0..kf {
                let mut row = vec![0u8; kg * kf];
                for t in 0..kf {
                    row[s * kf + t] = field.add(row[s * kf + t], mf.get(t, r));
                }
                for t in 0..kg {
                    row[t * kf + r] = field.sub(row[t * kf + r], mg.get(s, t));
                }
                rows.push(row);
            }
        }
    }
    let ker = if rows.is_empty() {
        Subspace::full(field, kg * kf)
    } else {
        kernel(&Matrix::from_rows(field, kg * kf, &rows)?)
    };
    Ok(ker
        .rows()
        .map(|v| {
            let rws: Vec<Vec<u8>> = v.chunks(kf).map(|c| c.to_vec()).collect();
            Matrix::from_rows(field, kf, &rws).expect("shape")
        })
        .collect())
}

/// Upper bound on the hom-space dimension searched for algebra-compatible maps.
pub const MAX_HOM_DIM: usize = 4;

/// A linear bijection `A/B → C/D` commuting with the action of `L` and
/// preserving brackets, or `None`.
pub fn l_isomorphic(an: &Analysis, f: &ChiefFactor, g: &ChiefFactor) -> Result<Option<Matrix>> {
    if f.dim() != g.dim() {
        return Ok(None);
    }
    let l = an.algebra();
    let field = l.field();
    let homs = module_homs(an, f, g)?;
    if homs.is_empty() {
        return Ok(None);
    }
    let k = f.dim();
    let qf = quotient_coords(&f.a, &f.b)?;
    let qg = quotient_coords(&g.a, &g.b)?;
    let compatible = |theta: &Matrix| {
        (0..k).all(|r| {
            (r + 1..k).all(|s| {
                let lhs = theta.mul_vec(&qf.project(&l.bracket(qf.basis_lift(r), qf.basis_lift(s))));
                let ta = qg.lift(&theta.column(r));
                let tb = qg.lift(&theta.column(s));
                lhs == qg.project(&l.bracket(&ta, &tb))
            })
        })
    };
    let check_bijective = |theta: &Matrix| -> Result<()> {
        if theta.rank() != k {
            return Err(Error::Verification("a nonzero module map between chief factors is singular".into()));
        }
        Ok(())
    };
    if f.abelian && g.abelian {
        check_bijective(&homs[0])?;
        return Ok(Some(homs[0].clone()));
    }
    if homs.len() > MAX_HOM_DIM {
        return Err(Error::SearchCap(format!("hom space of dimension {} exceeds {}", homs.len(), MAX_HOM_DIM)));
    }
    let coeffs = Subspace::full(field, homs.len());
    for c in coeffs.elements() {
        if c.iter().all(|&x| x == 0) {
            continue;
        }
        let mut theta = Matrix::zeros(field, k, k);
        for (ci, h) in c.iter().zip(&homs) {
            for r in 0..k {
                for s in 0..k {
                    theta.set(r, s, field.mul_add(theta.get(r, s), *ci, h.get(r, s)));
                }
            }
        }
        check_bijective(&theta)?;
        if compatible(&theta) {
            return Ok(Some(theta));
        }
    }
    Ok(None)
}

/// How two chief factors are L-connected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LConnection {
    Isomorphic { intertwiner: Vec<Vec<u8>> },
    /// `L/N` is primitive of type 3 with minimal ideals `first/N ≅_L f` and `second/N ≅_L g`.
    Type3Quotient { n: Subspace, first: Subspace, second: Subspace },
}

impl LConnection {
    pub fn mode(&self) -> &'static str {
        match self {
            LConnection::Isomorphic { .. } => "iso",
            LConnection::Type3Quotient { .. } => "type-3 quotient",
        }
    }
}

/// L-isomorphism, or a primitive type-3 quotient `L/N` whose two minimal
/// ideals are L-isomorphic to `f` and `g`. The candidates for `N` are the
/// cores of maximal subalgebras of type 3, which are exactly the ideals with
/// a type-3 primitive quotient.
pub fn l_connected(an: &Analysis, f: &ChiefFactor, g: &ChiefFactor) -> Result<Option<LConnection>> {
    if let Some(theta) = l_isomorphic(an, f, g)? {
        return Ok(Some(LConnection::Isomorphic { intertwiner: theta.row_vecs() }));
    }
    let cores: BTreeSet<&Subspace> =
        an.maximal()?.iter().filter(|m| m.quotient_type == PrimitiveKind::Type3).map(|m| &m.core).collect();
    for n in cores {
        let mins = an.minimal_ideals_over(n)?;
        if mins.len() != 2 {
            return Err(Error::Verification("type-3 quotient without exactly two minimal ideals".into()));
        }
        let p = an.factor(&mins[0], n)?;
        let q = an.factor(&mins[1], n)?;
        for (x, y) in [(&p, &q), (&q, &p)] {
            if l_isomorphic(an, f, x)?.is_some() && l_isomorphic(an, g, y)?.is_some() {
                return Ok(Some(LConnection::Type3Quotient { n: n.clone(), first: x.a.clone(), second: y.a.clone() }));
            }
        }
    }
    Ok(None)
}

/// The intermediate configuration witnessing that two factors are m-related.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Middle {
    Factor(ChiefFactor),
    Crossing(MCrossing),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MRelatedWitness {
    pub case: u8,
    pub middle: Middle,
}

impl MRelatedWitness {
    /// The ideal the case is parametrised by: `S`, `X`, `Y` or `U`.
    pub fn parameter(&self) -> &Subspace {
        match (&self.middle, self.case) {
            (Middle::Factor(r), 1) => &r.b,
            (Middle::Factor(y), _) => &y.a,
            (Middle::Crossing(x), 2) => &x.bottom.b,
            (Middle::Crossing(x), _) => &x.top.a,
        }
    }
}

/// Tries case `case` of the m-related definition with the given parameter ideal.
fn try_case(an: &Analysis, case: u8, f: &ChiefFactor, g: &ChiefFactor, p: &Subspace) -> Result<Option<MRelatedWitness>> {
    let (a, b, c, d) = (&f.a, &f.b, &g.a, &g.b);
    let found = |middle| Ok(Some(MRelatedWitness { case, middle }));
    let below = |q: &Subspace| b.leq(q) && d.leq(q) && !a.leq(q) && !c.leq(q);
    let above = |q: &Subspace| q.leq(a) && q.leq(c) && !q.leq(b) && !q.leq(d);
    if (1..=2).contains(&case) && !below(p) || (3..=4).contains(&case) && !above(p) {
        return Ok(None);
    }
    match case {
        // A/B ↙ R/S ↘ C/D with R/S supplemented; parameter S.
        1 => {
            let s = p;
            let r = s.sum(a);
            if r != s.sum(c) || &s.intersect(a) != b || &s.intersect(c) != d {
                return Ok(None);
            }
            match an.try_factor(&r, s)? {
                Some(rs) if rs.supplemented => found(Middle::Factor((*rs).clone())),
                _ => Ok(None),
            }
        }
        // [U/V ↘ W/X] with A/B ↙ V/X and W/X ↘ C/D; parameter X.
        2 => {
            let x = p;
            if &x.intersect(a) != b || &x.intersect(c) != d {
                return Ok(None);
            }
            let v = x.sum(a);
            let w = x.sum(c);
            if &v.intersect(&w) != x || !an.is_chief(&v, x) {
                return Ok(None);
            }
            let u = v.sum(&w);
            let (Some(uv), Some(wx)) = (an.try_factor(&u, &v)?, an.try_factor(&w, x)?) else {
                return Ok(None);
            };
            match is_m_crossing(&uv, &wx)? {
                Some(cr) => found(Middle::Crossing(cr)),
                None => Ok(None),
            }
        }
        // A/B ↘ Y/Z ↙ C/D with Y/Z Frattini; parameter Y.
        3 => {
            let y = p;
            let z = b.intersect(y);
            if d.intersect(y) != z || &b.sum(y) != a || &d.sum(y) != c {
                return Ok(None);
            }
            match an.try_factor(y, &z)? {
                Some(yz) if yz.frattini => found(Middle::Factor((*yz).clone())),
                _ => Ok(None),
            }
        }
        // [U/V ↘ W/X] with A/B ↘ U/V and C/D ↘ U/W; parameter U.
        4 => {
            let u = p;
            if &b.sum(u) != a || &d.sum(u) != c {
                return Ok(None);
            }
            let v = b.intersect(u);
            let w = d.intersect(u);
            if v.sum(&w) != *u || !an.is_chief(u, &w) {
                return Ok(None);
            }
            let x = v.intersect(&w);
            let (Some(uv), Some(wx)) = (an.try_factor(u, &v)?, an.try_factor(&w, &x)?) else {
                return Ok(None);
            };
            match is_m_crossing(&uv, &wx)? {
                Some(cr) => found(Middle::Crossing(cr)),
                None => Ok(None),
            }
        }
        _ => Err(Error::Precondition(format!("no case {case}"))),
    }
}

/// Closure of `{A, B, C, D}` under `+` and `∩`.
fn lattice_closure(gens: &[&Subspace]) -> Vec<Subspace> {
    let mut set: BTreeSet<Subspace> = gens.iter().map(|s| (*s).clone()).collect();
    loop {
        let items: Vec<Subspace> = set.iter().cloned().collect();
        let before = set.len();
        for i in 0..items.len() {
            for j in i + 1..items.len() {
                set.insert(items[i].sum(&items[j]));
                set.insert(items[i].intersect(&items[j]));
            }
        }
        if set.len() == before {
            return set.into_iter().collect();
        }
    }
}

/// First witness, in case order 1 to 4, that `f` and `g` are m-related. Each
/// case is a search over one ideal parameter, first among sums and
/// intersections of `A, B, C, D`, then over every ideal.
pub fn m_related(an: &Analysis, f: &ChiefFactor, g: &ChiefFactor) -> Result<Option<MRelatedWitness>> {
    an.m_related(f, g)
}

pub(crate) fn m_related_uncached(an: &Analysis, f: &ChiefFactor, g: &ChiefFactor) -> Result<Option<MRelatedWitness>> {
    let cheap = lattice_closure(&[&f.a, &f.b, &g.a, &g.b]);
    let rest: Vec<&Subspace> = an.ideals().iter().filter(|i| cheap.binary_search(i).is_err()).collect();
    for case in 1..=4u8 {
        for p in cheap.iter().chain(rest.iter().copied()) {
            if let Some(w) = try_case(an, case, f, g, p)? {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

/// Re-derives a witness from its parameter and checks it reproduces the same configuration.
pub fn validate_witness(an: &Analysis, f: &ChiefFactor, g: &ChiefFactor, w: &MRelatedWitness) -> Result<()> {
    match try_case(an, w.case, f, g, w.parameter())? {
        Some(again) if &again == w => Ok(()),
        _ => Err(Error::Verification(format!("case-{} m-related witness does not validate", w.case))),
    }
}

/// Builds the witness for a given case and parameter, if it is one.
pub fn witness_for(an: &Analysis, case: u8, f: &ChiefFactor, g: &ChiefFactor, parameter: &Subspace) -> Result<Option<MRelatedWitness>> {
    try_case(an, case, f, g, parameter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::field::Field;
    use crate::lie::LieAlgebra;

    fn gf(p: u8) -> Field {
        Field::new(p).unwrap()
    }

    fn sp(an: &Analysis, rows: &[&[u8]]) -> Subspace {
        let rows: Vec<Vec<u8>> = rows.iter().map(|r| r.to_vec()).collect();
        an.algebra().span(&rows).unwrap()
    }

    #[test]
    fn chief_factor_examples() {
        let an = Analysis::new(corpus::heisenberg(gf(2)));
        let zero = an.algebra().zero_subspace();
        let x3 = sp(&an, &[&[0, 0, 1]]);
        let f = make_chief_factor(&an, &x3, &zero).unwrap();
        assert!(f.abelian && f.frattini && !f.supplemented && f.supplements.is_empty());
        let err = make_chief_factor(&an, &an.algebra().whole(), &x3).unwrap_err();
        assert!(matches!(err, Error::NotChiefFactor(_)));

        let an = Analysis::new(corpus::sl2(gf(5)).unwrap());
        let l = an.algebra();
        let f = make_chief_factor(&an, &l.whole(), &l.zero_subspace()).unwrap();
        assert!(!f.abelian && f.supplemented && !f.frattini && !f.complemented);
        assert_eq!(f.supplements.len(), 16);
        let relaxed = relaxed_complements(&an, &l.whole(), &l.zero_subspace()).unwrap();
        assert_eq!(relaxed, vec![l.zero_subspace()]);

        let an = Analysis::new(LieAlgebra::abelian(gf(2), 2));
        let e1 = sp(&an, &[&[1, 0]]);
        let f = make_chief_factor(&an, &e1, &an.algebra().zero_subspace()).unwrap();
        assert!(f.abelian && f.complemented);
        let comps: BTreeSet<&Subspace> = f.complements().map(|m| &m.subalgebra).collect();
        assert_eq!(comps, BTreeSet::from([&sp(&an, &[&[0, 1]]), &sp(&an, &[&[1, 1]])]));
    }

    #[test]
    fn descends_examples() {
        let an = Analysis::new(LieAlgebra::abelian(gf(2), 2));
        let l = an.algebra().clone();
        let e1 = sp(&an, &[&[1, 0]]);
        let e2 = sp(&an, &[&[0, 1]]);
        let f = make_chief_factor(&an, &l.whole(), &e2).unwrap();
        let g = make_chief_factor(&an, &e1, &l.zero_subspace()).unwrap();
        assert!(descends_to(&f, &f));
        assert!(descends_to(&f, &g));
        assert!(!descends_to(&g, &f));
        let an = Analysis::new(corpus::heisenberg(gf(2)));
        let h = an.algebra().clone();
        let w = sp(&an, &[&[1, 0, 0], &[0, 0, 1]]);
        let x3 = sp(&an, &[&[0, 0, 1]]);
        let f = make_chief_factor(&an, &h.whole(), &w).unwrap();
        let g = make_chief_factor(&an, &x3, &h.zero_subspace()).unwrap();
        assert!(!descends_to(&f, &g));
    }

    #[test]
    fn descent_examples() {
        let an = Analysis::new(LieAlgebra::abelian(gf(2), 2));
        let l = an.algebra().clone();
        let e1 = sp(&an, &[&[1, 0]]);
        let e2 = sp(&an, &[&[0, 1]]);
        let f = make_chief_factor(&an, &l.whole(), &e2).unwrap();
        let g = make_chief_factor(&an, &e1, &l.zero_subspace()).unwrap();
        let r = descent_check(&an, &f, &g).unwrap();
        assert!(r.passed(), "{:?}", r.failures());
        assert!(descent_check(&an, &g, &f).is_err());

        let an = Analysis::new(corpus::sl2sum(gf(5)).unwrap());
        let l = an.algebra().clone();
        let s1 = sp(&an, &[&[1, 0, 0, 0, 0, 0], &[0, 1, 0, 0, 0, 0], &[0, 0, 1, 0, 0, 0]]);
        let s2 = sp(&an, &[&[0, 0, 0, 1, 0, 0], &[0, 0, 0, 0, 1, 0], &[0, 0, 0, 0, 0, 1]]);
        let f = make_chief_factor(&an, &l.whole(), &s2).unwrap();
        let g = make_chief_factor(&an, &s1, &l.zero_subspace()).unwrap();
        let r = descent_check(&an, &f, &g).unwrap();
        assert!(r.passed(), "{:?}", r.failures());
        assert!(r.clauses.iter().any(|c| c.clause == "(iv)" && c.applicable));
        let refl = descent_check(&an, &g, &g).unwrap();
        assert!(refl.passed());
    }

    #[test]
    fn join_supplements_abelian_example() {
        let an = Analysis::new(LieAlgebra::abelian(gf(2), 2));
        let e1 = sp(&an, &[&[1, 0]]);
        let f = make_chief_factor(&an, &e1, &an.algebra().zero_subspace()).unwrap();
        let u = an.maximal_record(&sp(&an, &[&[0, 1]])).unwrap().unwrap().clone();
        let s = an.maximal_record(&sp(&an, &[&[1, 1]])).unwrap().unwrap().clone();
        let r = join_supplements(&an, &u, &s, &f).unwrap();
        assert_eq!(r.m.subalgebra, e1);
        assert_eq!(r.m.core, e1);
        assert_eq!(r.case, JoinCase::Abelian);
        assert!(matches!(join_supplements(&an, &u, &u, &f), Err(Error::Precondition(_))));
    }

    #[test]
    fn m_crossing_examples() {
        let an = Analysis::new(corpus::h3_plus_line(gf(2)));
        let factors = an.all_factors().unwrap();
        let mut crossings = 0;
        for f in &factors {
            for g in &factors {
                if let Some(x) = is_m_crossing(f, g).unwrap() {
                    crossings += 1;
                    assert!(x.bottom.abelian);
                    let sw = swap_crossing(&an, &x).unwrap();
                    assert_eq!(sw.top.a, x.top.a);
                    assert_eq!(sw.bottom.a, x.top.b);
                }
            }
            if f.supplemented {
                assert!(is_m_crossing(f, f).unwrap().is_none());
            }
        }
        assert!(crossings > 0);
        let x3 = sp(&an, &[&[0, 0, 1, 0]]);
        let fr = an.factor(&x3, &an.algebra().zero_subspace()).unwrap();
        assert!(is_m_crossing(&fr, &fr).unwrap().is_none());
    }

    #[test]
    fn l_isomorphism_examples() {
        let an = Analysis::new(LieAlgebra::abelian(gf(2), 2));
        let l = an.algebra().clone();
        let e1 = sp(&an, &[&[1, 0]]);
        let e2 = sp(&an, &[&[0, 1]]);
        let f = an.factor(&e1, &l.zero_subspace()).unwrap();
        let g = an.factor(&l.whole(), &e2).unwrap();
        assert!(l_isomorphic(&an, &f, &g).unwrap().is_some());
        assert!(l_isomorphic(&an, &f, &f).unwrap().is_some());

        let an = Analysis::new(corpus::sl2sum(gf(5)).unwrap());
        let l = an.algebra().clone();
        let s1 = sp(&an, &[&[1, 0, 0, 0, 0, 0], &[0, 1, 0, 0, 0, 0], &[0, 0, 1, 0, 0, 0]]);
        let s2 = sp(&an, &[&[0, 0, 0, 1, 0, 0], &[0, 0, 0, 0, 1, 0], &[0, 0, 0, 0, 0, 1]]);
        let f = an.factor(&s1, &l.zero_subspace()).unwrap();
        let g = an.factor(&s2, &l.zero_subspace()).unwrap();
        assert!(module_homs(&an, &f, &g).unwrap().is_empty());
        assert_eq!(l_isomorphic(&an, &f, &g).unwrap(), None);
        assert_eq!(module_homs(&an, &f, &f).unwrap().len(), 1);
        assert!(l_isomorphic(&an, &f, &f).unwrap().is_some());
        match l_connected(&an, &f, &g).unwrap() {
            Some(LConnection::Type3Quotient { n, first, second }) => {
                assert!(n.is_zero());
                assert_eq!((first, second), (s1.clone(), s2.clone()));
            }
            other => panic!("expected a type-3 connection, got {other:?}"),
        }
        let top = an.factor(&l.whole(), &s2).unwrap();
        assert!(matches!(l_connected(&an, &f, &top).unwrap(), Some(LConnection::Isomorphic { .. })));
    }

    #[test]
    fn heisenberg_factors_are_not_l_isomorphic_across_positions() {
        let an = Analysis::new(corpus::heisenberg(gf(2)));
        let l = an.algebra().clone();
        let x3 = sp(&an, &[&[0, 0, 1]]);
        let w = sp(&an, &[&[1, 0, 0], &[0, 0, 1]]);
        let f = an.factor(&x3, &l.zero_subspace()).unwrap();
        let g = an.factor(&w, &x3).unwrap();
        // both are trivial 1-dimensional modules
        assert!(l_isomorphic(&an, &f, &g).unwrap().is_some());
    }

    #[test]
    fn m_related_examples() {
        let an = Analysis::new(LieAlgebra::abelian(gf(2), 2));
        let l = an.algebra().clone();
        let e1 = sp(&an, &[&[1, 0]]);
        let e2 = sp(&an, &[&[0, 1]]);
        let f = an.factor(&e1, &l.zero_subspace()).unwrap();
        let g = an.factor(&l.whole(), &e2).unwrap();
        let w = m_related(&an, &f, &g).unwrap().unwrap();
        assert_eq!(w.case, 1);
        match &w.middle {
            Middle::Factor(r) => assert_eq!((&r.a, &r.b), (&l.whole(), &e2)),
            _ => panic!(),
        }
        validate_witness(&an, &f, &g, &w).unwrap();

        let an = Analysis::new(corpus::heisenberg(gf(2)));
        let x3 = sp(&an, &[&[0, 0, 1]]);
        let f = an.factor(&x3, &an.algebra().zero_subspace()).unwrap();
        let w = m_related(&an, &f, &f).unwrap().unwrap();
        assert_eq!(w.case, 3);
        assert!(matches!(&w.middle, Middle::Factor(y) if y.a == x3));

        let an = Analysis::new(corpus::sl2sum(gf(5)).unwrap());
        let l = an.algebra().clone();
        let s1 = sp(&an, &[&[1, 0, 0, 0, 0, 0], &[0, 1, 0, 0, 0, 0], &[0, 0, 1, 0, 0, 0]]);
        let s2 = sp(&an, &[&[0, 0, 0, 1, 0, 0], &[0, 0, 0, 0, 1, 0], &[0, 0, 0, 0, 0, 1]]);
        let f = an.factor(&s1, &l.zero_subspace()).unwrap();
        let g = an.factor(&l.whole(), &s2).unwrap();
        let w = m_related(&an, &f, &g).unwrap().unwrap();
        assert_eq!(w.case, 1);
        assert!(matches!(&w.middle, Middle::Factor(r) if r.a == l.whole() && r.b == s2));
    }

    #[test]
    fn lattice_closure_is_closed() {
        let an = Analysis::new(corpus::r4(gf(2)));
        let ids = an.ideals();
        let c = lattice_closure(&[&ids[1], &ids[2], &ids[5], &ids[9]]);
        for x in &c {
            for y in &c {
                assert!(c.contains(&x.sum(y)) && c.contains(&x.intersect(y)));
            }
        }
    }
}
