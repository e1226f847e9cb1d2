//! Command implementations behind the `liechief` binary. Each command returns
//! its rendered output so the binary only prints and maps errors to exit codes.

pub mod format;

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;

use liechief::chieffactors::ChiefFactor;
use liechief::corpus::{self, BUILTIN_NAMES};
use liechief::ideals::{self, chief_series, enumerate_chief_series, ChiefSeries};
use liechief::jordanholder::{all_pairs, sigma, JHReport};
use liechief::{oracle, Analysis, Field, LieAlgebra, Subspace};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}{msg}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Input { line: Option<usize>, msg: String },
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] liechief::Error),
    /// Some checks failed; `output` holds the full report.
    #[error("{msg}")]
    Failed { output: String, msg: String },
}

impl CliError {
    /// 0 success, 1 input error, 2 axiom or verification failure, 3 budget refusal.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input { .. } | CliError::Io(_) => 1,
            CliError::Core(e) if e.is_verification() => 2,
            CliError::Core(e) if e.is_budget() => 3,
            CliError::Core(_) => 1,
            CliError::Failed { .. } => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Structured,
}

#[derive(Debug, Clone)]
pub struct Options {
    pub format: OutputFormat,
    pub oracle: bool,
    pub cap: usize,
    pub seed: u64,
    pub field: Option<u8>,
}

impl Default for Options {
    fn default() -> Self {
        Options { format: OutputFormat::Text, oracle: false, cap: ideals::DEFAULT_SERIES_CAP, seed: 0, field: None }
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serialisable") + "\n"
}

pub fn load(path: &std::path::Path, opts: &Options) -> Result<LieAlgebra, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input { line: None, msg: format!("{}: {e}", path.display()) })?;
    format::parse(&text, opts.field)
}

fn fmt_series(l: &LieAlgebra, s: &ChiefSeries) -> String {
    s.terms().iter().map(|t| l.fmt_subspace(t)).collect::<Vec<_>>().join(" < ")
}

fn factor_label(f: &ChiefFactor) -> &'static str {
    if f.frattini {
        "Frattini"
    } else if f.complemented {
        "complemented"
    } else {
        "supplemented"
    }
}

pub fn cmd_validate(l: &LieAlgebra, opts: &Options) -> Result<String, CliError> {
    let derived = ideals::derived_series(l);
    let solvable = derived.last().is_some_and(Subspace::is_zero);
    let length = if solvable { derived.len() - 1 } else { 0 };
    let verdict = if l.is_abelian() {
        "valid, abelian".to_string()
    } else if solvable {
        format!("valid, solvable, derived length {length}")
    } else {
        "valid, not solvable".to_string()
    };
    if opts.format == OutputFormat::Structured {
        return Ok(pretty(&json!({
            "field": l.field().p(),
            "dim": l.dim(),
            "jacobi": "ok",
            "abelian": l.is_abelian(),
            "solvable": solvable,
            "derived_series": derived,
            "derived_length": solvable.then_some(length),
            "verdict": verdict,
        })));
    }
    let mut out = String::new();
    writeln!(out, "field: GF({})", l.field().p()).unwrap();
    writeln!(out, "dimension: {}", l.dim()).unwrap();
    writeln!(out, "Jacobi identity: holds").unwrap();
    writeln!(out, "solvable: {}", if solvable { "yes" } else { "no" }).unwrap();
    let terms: Vec<String> = derived.iter().map(|t| l.fmt_subspace(t)).collect();
    writeln!(out, "derived series: {}", terms.join(" > ")).unwrap();
    writeln!(out, "{verdict}").unwrap();
    Ok(out)
}

fn oracle_check(an: &Analysis) -> Result<(), CliError> {
    let l = an.algebra();
    let fail = |what: &str| Err(CliError::Core(liechief::Error::Verification(format!("oracle disagrees on {what}"))));
    let ids = oracle::ideals(l)?;
    if an.ideals() != ids.as_slice() {
        return fail("the ideal lattice");
    }
    let fast: Vec<Subspace> = an.maximal()?.iter().map(|m| m.subalgebra.clone()).collect();
    if fast != oracle::maximal_subalgebras(l)? {
        return fail("maximal subalgebras");
    }
    if an.frattini()? != oracle::frattini(l)? {
        return fail("the Frattini subalgebra");
    }
    for b in &ids {
        let mut mins = (*an.minimal_ideals_over(b)?).clone();
        mins.sort();
        if mins != oracle::minimal_ideals_over(l, b)? {
            return fail("minimal ideals");
        }
    }
    for m in an.maximal()? {
        if m.core != oracle::core_in(&ids, &m.subalgebra)? {
            return fail("cores");
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct FactorSummary {
    top: Subspace,
    bottom: Subspace,
    dim: usize,
    abelian: bool,
    classification: &'static str,
    frattini: bool,
    supplemented: bool,
    complemented: bool,
}

pub fn cmd_analyze(l: &LieAlgebra, opts: &Options) -> Result<String, CliError> {
    let an = Analysis::new(l.clone());
    let maxes = an.maximal()?;
    if opts.oracle {
        oracle_check(&an)?;
    }
    let zero = l.zero_subspace();
    let mins = an.minimal_ideals_over(&zero)?;
    let socle = ideals::socle(l);
    let phi = an.frattini()?;
    let prim = an.primitivity()?;
    let series = chief_series(l, &zero, &l.whole())?;
    let factors: Vec<_> = (1..=series.len())
        .map(|j| an.factor(series.term(j), series.term(j - 1)))
        .collect::<liechief::Result<_>>()?;
    if opts.format == OutputFormat::Structured {
        let summaries: Vec<FactorSummary> = factors
            .iter()
            .map(|f| FactorSummary {
                top: f.a.clone(),
                bottom: f.b.clone(),
                dim: f.dim(),
                abelian: f.abelian,
                classification: factor_label(f),
                frattini: f.frattini,
                supplemented: f.supplemented,
                complemented: f.complemented,
            })
            .collect();
        return Ok(pretty(&json!({
            "field": l.field().p(),
            "dim": l.dim(),
            "minimal_ideals": *mins,
            "socle": socle,
            "maximal_subalgebras": maxes,
            "frattini": phi,
            "primitivity": prim,
            "chief_series": series,
            "chief_factors": summaries,
            "oracle_checked": opts.oracle,
        })));
    }
    let mut out = String::new();
    writeln!(out, "algebra of dimension {} over GF({})", l.dim(), l.field().p()).unwrap();
    let list: Vec<String> = mins.iter().map(|m| l.fmt_subspace(m)).collect();
    writeln!(out, "minimal ideals ({}): {}", mins.len(), list.join(", ")).unwrap();
    writeln!(out, "socle: {}", l.fmt_subspace(&socle)).unwrap();
    writeln!(out, "maximal subalgebras ({}):", maxes.len()).unwrap();
    for m in maxes {
        writeln!(
            out,
            "  {}  core {}  L/core {}{}",
            l.fmt_subspace(&m.subalgebra),
            l.fmt_subspace(&m.core),
            m.quotient_type.label(),
            if m.monolithic { ", monolithic" } else { "" }
        )
        .unwrap();
    }
    writeln!(out, "Frattini subalgebra: φ = {}", l.fmt_subspace(&phi)).unwrap();
    match &prim.witness {
        Some(w) => writeln!(out, "primitive {} (core-free maximal subalgebra {})", prim.kind.label(), l.fmt_subspace(w)).unwrap(),
        None => writeln!(out, "not primitive (every maximal subalgebra has a nonzero core)").unwrap(),
    }
    writeln!(out, "chief series: {}", fmt_series(l, &series)).unwrap();
    for (j, f) in factors.iter().enumerate() {
        writeln!(
            out,
            "  {}: {}/{}  dim {}  {}  {}",
            j + 1,
            l.fmt_subspace(&f.a),
            l.fmt_subspace(&f.b),
            f.dim(),
            if f.abelian { "abelian" } else { "nonabelian" },
            factor_label(f)
        )
        .unwrap();
    }
    let labels: Vec<&str> = factors.iter().map(|f| factor_label(f)).collect();
    writeln!(out, "chief factors: {}", labels.join(", ")).unwrap();
    if opts.oracle {
        writeln!(out, "oracle cross-check: agrees").unwrap();
    }
    Ok(out)
}

fn enumerate_all(l: &LieAlgebra, cap: usize) -> Result<Vec<ChiefSeries>, CliError> {
    let e = enumerate_chief_series(l, &l.zero_subspace(), &l.whole(), cap)?;
    if e.truncated {
        return Err(CliError::Core(liechief::Error::SearchCap(format!(
            "more than {cap} chief series; raise --cap to enumerate them all"
        ))));
    }
    Ok(e.series)
}

pub fn cmd_chief_series(l: &LieAlgebra, all: bool, opts: &Options) -> Result<String, CliError> {
    let series = if all { enumerate_all(l, opts.cap)? } else { vec![chief_series(l, &l.zero_subspace(), &l.whole())?] };
    if opts.oracle {
        let ids = oracle::ideals(l)?;
        for s in &series {
            for j in 1..=s.len() {
                let (a, b) = s.factor(j);
                if !oracle::is_chief_factor_in(&ids, a, b) {
                    return Err(liechief::Error::Verification(format!("oracle rejects step {j}")).into());
                }
            }
        }
    }
    if opts.format == OutputFormat::Structured {
        return Ok(pretty(&json!({ "count": series.len(), "series": series })));
    }
    let mut out = String::new();
    for (i, s) in series.iter().enumerate() {
        if all {
            writeln!(out, "{}: {}", i + 1, fmt_series(l, s)).unwrap();
        } else {
            writeln!(out, "{}", fmt_series(l, s)).unwrap();
        }
    }
    if all {
        writeln!(out, "{} chief series", series.len()).unwrap();
    }
    Ok(out)
}

/// Parses a series given as terms separated by `|`, vectors by `;` and
/// coordinates by `,` or whitespace. A term may be `0` or `L`; a missing
/// bottom `0` or top `L` is added.
pub fn parse_series(l: &LieAlgebra, spec: &str) -> Result<ChiefSeries, CliError> {
    let n = l.dim();
    let bad = |msg: String| CliError::Input { line: None, msg: format!("series `{spec}`: {msg}") };
    let mut terms = Vec::new();
    for (t, term) in spec.split('|').enumerate() {
        let term = term.trim();
        if term.is_empty() || term == "0" {
            terms.push(l.zero_subspace());
            continue;
        }
        if term == "L" {
            terms.push(l.whole());
            continue;
        }
        let mut rows = Vec::new();
        for (v, vector) in term.split(';').enumerate() {
            let coords: Vec<i64> = vector
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<i64>().map_err(|_| bad(format!("term {}, vector {}: `{s}` is not an integer", t + 1, v + 1))))
                .collect::<Result<_, _>>()?;
            if coords.len() != n {
                return Err(bad(format!("term {}, vector {}: expected {n} coordinates, found {}", t + 1, v + 1, coords.len())));
            }
            rows.push(coords.iter().map(|&c| l.field().reduce(c)).collect::<Vec<u8>>());
        }
        terms.push(l.span(&rows)?);
    }
    if terms.first().is_none_or(|t| !t.is_zero()) {
        terms.insert(0, l.zero_subspace());
    }
    if !terms.last().unwrap().is_full() {
        terms.push(l.whole());
    }
    ChiefSeries::new(l, terms).map_err(|e| bad(e.to_string()))
}

fn render_report(l: &LieAlgebra, r: &JHReport, out: &mut String) {
    writeln!(out, "X: {}", fmt_series(l, &r.x_series)).unwrap();
    writeln!(out, "Y: {}", fmt_series(l, &r.y_series)).unwrap();
    writeln!(out, "σ = {}", r.sigma).unwrap();
    for p in &r.per_index {
        let mut line = format!("  {} -> {}  {}  m-related case {}  L-connection {}", p.i, p.j, p.kind, p.witness.case, p.connection.mode());
        if let Some(s) = &p.common_supplement {
            line += &format!("  common supplement {}", l.fmt_subspace(s));
        }
        if let Some(c) = &p.common_complement {
            line += &format!("  common complement {}", l.fmt_subspace(c));
        }
        writeln!(out, "{line}").unwrap();
    }
    if let Some(u) = &r.uniqueness {
        writeln!(
            out,
            "uniqueness: {} of {} permutations pair every index m-relatedly",
            u.m_related_permutations.len(),
            u.candidates
        )
        .unwrap();
    }
    let cases: Vec<String> = r.per_index.iter().map(|p| p.witness.case.to_string()).collect();
    let comps = r.per_index.iter().filter(|p| p.common_complement.is_some()).count();
    let sups = r.per_index.iter().filter(|p| p.common_supplement.is_some()).count();
    let mut summary = format!("σ = {}; m-related cases {}", r.sigma, cases.join(", "));
    if sups > 0 {
        summary += &format!("; common supplements found ({sups})");
    }
    if comps > 0 {
        summary += &format!("; common complements found ({comps})");
    }
    writeln!(out, "{summary}").unwrap();
}

pub fn cmd_jh(l: &LieAlgebra, x: &str, y: &str, opts: &Options) -> Result<String, CliError> {
    let an = Analysis::new(l.clone());
    let (xs, ys) = (parse_series(l, x)?, parse_series(l, y)?);
    let r = sigma(&an, &xs, &ys)?;
    if opts.oracle {
        oracle_check(&an)?;
    }
    if opts.format == OutputFormat::Structured {
        return Ok(pretty(&r));
    }
    let mut out = String::new();
    render_report(l, &r, &mut out);
    Ok(out)
}

/// Every ordered pair of chief series. Failing pairs are reported and turn the exit status into 2.
pub fn cmd_jh_all_pairs(l: &LieAlgebra, opts: &Options) -> Result<String, CliError> {
    let an = Analysis::new(l.clone());
    if opts.oracle {
        oracle_check(&an)?;
    }
    let series = enumerate_all(l, opts.cap)?;
    let results = all_pairs(&an, &series);
    let failures: Vec<String> = results
        .iter()
        .filter_map(|(i, j, r)| r.as_ref().err().map(|e| format!("X#{} vs Y#{}: {e}", i + 1, j + 1)))
        .collect();
    let out = if opts.format == OutputFormat::Structured {
        let reports: Vec<_> = results
            .iter()
            .map(|(i, j, r)| match r {
                Ok(r) => json!({ "x": i + 1, "y": j + 1, "report": r }),
                Err(e) => json!({ "x": i + 1, "y": j + 1, "error": e.to_string() }),
            })
            .collect();
        pretty(&json!({ "series": series.len(), "pairs": reports.len(), "failures": failures.len(), "reports": reports }))
    } else {
        let mut out = String::new();
        for (i, s) in series.iter().enumerate() {
            writeln!(out, "series {}: {}", i + 1, fmt_series(l, s)).unwrap();
        }
        for (i, j, r) in &results {
            match r {
                Ok(r) => writeln!(out, "X#{} vs Y#{}: σ = {}", i + 1, j + 1, r.sigma).unwrap(),
                Err(e) => writeln!(out, "X#{} vs Y#{}: FAILED {e}", i + 1, j + 1).unwrap(),
            }
        }
        if failures.is_empty() {
            writeln!(out, "{} pair reports, all verified", results.len()).unwrap();
        } else {
            writeln!(out, "{} pair reports, {} failed", results.len(), failures.len()).unwrap();
        }
        out
    };
    if failures.is_empty() {
        Ok(out)
    } else {
        Err(CliError::Failed { output: out, msg: format!("{} of {} pairs failed verification", failures.len(), results.len()) })
    }
}

/// Builtin names plus `random<dim>`, seeded by `--seed`.
pub fn corpus_algebra(name: &str, opts: &Options) -> Result<(String, LieAlgebra), CliError> {
    let p = opts.field.unwrap_or(2);
    if let Some(dim) = name.strip_prefix("random") {
        let dim: usize = dim.parse().map_err(|_| CliError::Input { line: None, msg: format!("`{name}`: expected random<dim>") })?;
        let l = corpus::random_solvable(dim, p, opts.seed)?;
        return Ok((format!("random{dim} over GF({p}), seed {}", opts.seed), l));
    }
    let e = corpus::builtin(name, p)?;
    Ok((format!("{} over GF({p})", e.name), e.algebra))
}

pub fn cmd_corpus_list(opts: &Options) -> String {
    let mut names: Vec<String> = BUILTIN_NAMES.iter().map(|s| s.to_string()).collect();
    names.push("abelian<n> (n <= 6)".into());
    names.push("random<dim> (solvable, seeded by --seed)".into());
    if opts.format == OutputFormat::Structured {
        return pretty(&names);
    }
    names.join("\n") + "\n"
}

pub fn cmd_corpus_export(name: &str, opts: &Options) -> Result<String, CliError> {
    let (title, l) = corpus_algebra(name, opts)?;
    Ok(format::write(&l, Some(&title)))
}

/// Field parsing for `--field`.
pub fn parse_field(s: &str) -> Result<u8, String> {
    let p: u8 = s.parse().map_err(|_| format!("`{s}` is not a prime"))?;
    Field::new(p).map(|f| f.p()).map_err(|e| e.to_string())
}
