use liechief::corpus::{self, BUILTIN_NAMES};
use liechief::ideals::{enumerate_chief_series, DEFAULT_SERIES_CAP};
use liechief::{oracle, Analysis};

fn entries() -> Vec<corpus::CorpusEntry> {
    let mut out = Vec::new();
    for p in [2, 3, 5] {
        for name in BUILTIN_NAMES {
            if let Ok(e) = corpus::builtin(name, p) {
                out.push(e);
            }
        }
    }
    out.push(corpus::builtin("abelian3", 2).unwrap());
    out.push(corpus::builtin("abelian4", 2).unwrap());
    out
}

#[test]
fn every_builtin_meets_its_expectations() {
    for e in entries() {
        let l = &e.algebra;
        let tag = format!("{} over GF({})", e.name, l.field().p());
        l.validate().unwrap();
        let an = Analysis::new(l.clone());
        if let Some(n) = e.expected.maximal_count {
            assert_eq!(an.maximal().unwrap().len(), n, "{tag}: maximal count");
        }
        if let Some(phi) = &e.expected.frattini {
            assert_eq!(&an.frattini().unwrap(), phi, "{tag}: Frattini");
        }
        if let Some(kind) = e.expected.primitive {
            assert_eq!(an.primitivity().unwrap().kind, kind, "{tag}: primitivity");
        }
        if let Some(n) = e.expected.chief_series_count {
            let s = enumerate_chief_series(l, &l.zero_subspace(), &l.whole(), DEFAULT_SERIES_CAP).unwrap();
            assert!(!s.truncated);
            assert_eq!(s.series.len(), n, "{tag}: chief series count");
        }
    }
}

#[test]
fn small_builtins_match_the_oracle() {
    for e in entries().into_iter().filter(|e| e.algebra.dim() <= 4) {
        let l = &e.algebra;
        let an = Analysis::new(l.clone());
        let fast: Vec<_> = an.maximal().unwrap().iter().map(|m| m.subalgebra.clone()).collect();
        assert_eq!(fast, oracle::maximal_subalgebras(l).unwrap(), "{}", e.name);
        for m in an.maximal().unwrap() {
            assert_eq!(m.quotient_type, oracle::primitive_kind_of_quotient(l, &m.core).unwrap());
        }
    }
}

#[test]
fn derivation_algebra_dimensions() {
    let f = liechief::Field::new(2).unwrap();
    assert_eq!(corpus::derivations(&corpus::heisenberg(f)).len(), 6);
    assert_eq!(corpus::derivations(&corpus::nonabelian2(f)).len(), 2);
    assert_eq!(corpus::derivations(&liechief::LieAlgebra::abelian(f, 2)).len(), 4);
}

#[test]
fn unknown_names_are_rejected() {
    assert!(corpus::builtin("e8", 2).is_err());
    assert!(corpus::builtin("sl2", 3).is_err());
}
