//! Built-in example algebras and a seeded generator of random solvable algebras.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{kernel, Matrix, Subspace};
use crate::lie::LieAlgebra;
use crate::maximal::PrimitiveKind;

/// Names accepted by [`builtin`]; `abelian` takes an optional dimension suffix (`abelian3`).
pub const BUILTIN_NAMES: [&str; 7] = ["abelian", "nonabelian2", "heisenberg", "r4", "sl2", "sl2sum", "h3_plus_line"];

/// Properties a corpus entry is known to have.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Expectations {
    pub maximal_count: Option<usize>,
    pub frattini: Option<Subspace>,
    pub primitive: Option<PrimitiveKind>,
    pub chief_series_count: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub algebra: LieAlgebra,
    pub expected: Expectations,
}

fn labels(names: &[&str]) -> Option<Vec<String>> {
    Some(names.iter().map(|s| s.to_string()).collect())
}

/// `[x, y] = y`.
pub fn nonabelian2(field: Field) -> LieAlgebra {
    LieAlgebra::from_brackets(field, 2, &[(0, 1, 1, 1)], labels(&["x", "y"])).expect("valid")
}

/// `[x1, x2] = x3`.
pub fn heisenberg(field: Field) -> LieAlgebra {
    LieAlgebra::from_brackets(field, 3, &[(0, 1, 2, 1)], None).expect("valid")
}

/// `x` acting as the identity on the abelian ideal `<y, z, w>`.
pub fn r4(field: Field) -> LieAlgebra {
    LieAlgebra::semidirect(&LieAlgebra::abelian(field, 1), &[Matrix::identity(field, 3)])
        .and_then(|l| l.with_labels(labels(&["x", "y", "z", "w"]).unwrap()))
        .expect("valid")
}

/// sl2 in the basis `(e, h, f)` with `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
pub fn sl2(field: Field) -> Result<LieAlgebra> {
    if field.p() < 5 {
        return Err(Error::Precondition(format!("sl2 is only provided for p >= 5, got {}", field.p())));
    }
    LieAlgebra::from_brackets(field, 3, &[(1, 0, 0, 2), (1, 2, 2, -2), (0, 2, 1, 1)], labels(&["e", "h", "f"]))
}

pub fn sl2sum(field: Field) -> Result<LieAlgebra> {
    let s = sl2(field)?;
    s.direct_sum(&s)
}

/// Heisenberg algebra plus a central line `x4`.
pub fn h3_plus_line(field: Field) -> LieAlgebra {
    heisenberg(field)
        .direct_sum(&LieAlgebra::abelian(field, 1))
        .and_then(|l| l.with_labels((1..=4).map(|i| format!("x{i}")).collect()))
        .expect("valid")
}

fn flag_count(n: usize, p: u8) -> usize {
    let p = p as usize;
    (1..=n).map(|i| (p.pow(i as u32) - 1) / (p - 1)).product()
}

/// Looks up a built-in algebra over GF(p) together with its known properties.
pub fn builtin(name: &str, p: u8) -> Result<CorpusEntry> {
    let field = Field::new(p)?;
    let q = p as usize;
    let span = |l: &LieAlgebra, rows: &[Vec<u8>]| l.span(rows).expect("lengths match");
    let entry = |name: String, algebra: LieAlgebra, expected: Expectations| CorpusEntry { name, algebra, expected };
    if let Some(rest) = name.strip_prefix("abelian") {
        let n: usize = if rest.is_empty() {
            2
        } else {
            rest.parse().map_err(|_| Error::UnknownCorpusEntry(name.to_string()))?
        };
        if n == 0 || n > 6 {
            return Err(Error::UnknownCorpusEntry(name.to_string()));
        }
        let l = LieAlgebra::abelian(field, n);
        let expected = Expectations {
            maximal_count: Some((q.pow(n as u32) - 1) / (q - 1)),
            frattini: Some(l.zero_subspace()),
            primitive: Some(if n == 1 { PrimitiveKind::Type1 } else { PrimitiveKind::NotPrimitive }),
            chief_series_count: Some(flag_count(n, p)),
        };
        return Ok(entry(format!("abelian{n}"), l, expected));
    }
    match name {
        "nonabelian2" => {
            let l = nonabelian2(field);
            Ok(entry(
                name.into(),
                l.clone(),
                Expectations {
                    maximal_count: Some(q + 1),
                    frattini: Some(l.zero_subspace()),
                    primitive: Some(PrimitiveKind::Type1),
                    chief_series_count: Some(1),
                },
            ))
        }
        "heisenberg" => {
            let l = heisenberg(field);
            let phi = span(&l, &[vec![0, 0, 1]]);
            Ok(entry(
                name.into(),
                l,
                Expectations {
                    maximal_count: Some(q + 1),
                    frattini: Some(phi),
                    primitive: Some(PrimitiveKind::NotPrimitive),
                    chief_series_count: Some(q + 1),
                },
            ))
        }
        "r4" => {
            let l = r4(field);
            Ok(entry(
                name.into(),
                l.clone(),
                Expectations {
                    maximal_count: Some(1 + q * (q * q + q + 1)),
                    frattini: Some(l.zero_subspace()),
                    primitive: Some(PrimitiveKind::NotPrimitive),
                    chief_series_count: Some(flag_count(3, p)),
                },
            ))
        }
        "sl2" => {
            let l = sl2(field)?;
            Ok(entry(
                name.into(),
                l.clone(),
                Expectations {
                    // Borel subalgebras plus non-split tori.
                    maximal_count: Some((q + 1) + q * (q - 1) / 2),
                    frattini: Some(l.zero_subspace()),
                    primitive: Some(PrimitiveKind::Type2),
                    chief_series_count: Some(1),
                },
            ))
        }
        "sl2sum" => {
            let l = sl2sum(field)?;
            let sl2_max = (q + 1) + q * (q - 1) / 2;
            // |PGL2(p)| diagonal subalgebras, one per automorphism.
            let diagonals = (q * q - 1) * q;
            Ok(entry(
                name.into(),
                l.clone(),
                Expectations {
                    maximal_count: Some(2 * sl2_max + diagonals),
                    frattini: Some(l.zero_subspace()),
                    primitive: Some(PrimitiveKind::Type3),
                    chief_series_count: Some(2),
                },
            ))
        }
        "h3_plus_line" => {
            let l = h3_plus_line(field);
            let phi = span(&l, &[vec![0, 0, 1, 0]]);
            Ok(entry(
                name.into(),
                l,
                Expectations {
                    maximal_count: Some(q * q + q + 1),
                    frattini: Some(phi),
                    primitive: Some(PrimitiveKind::NotPrimitive),
                    chief_series_count: Some((q + 1).pow(3)),
                },
            ))
        }
        _ => Err(Error::UnknownCorpusEntry(name.to_string())),
    }
}

/// Basis of the derivation algebra Der(L), as `n x n` matrices acting on columns.
pub fn derivations(l: &LieAlgebra) -> Vec<Matrix> {
    let n = l.dim();
    let f = l.field();
    // Unknown D_{ab} at column a*n + b; D(x_b) = Σ_a D_{ab} x_a.
    let mut rows: Vec<Vec<u8>> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let mut row = vec![0u8; n * n];
                // D[x_i, x_j]_k = Σ_m c_ij^m D_{km}
                for &(m, c) in l.basis_bracket(i, j) {
                    row[k * n + m] = f.add(row[k * n + m], c);
                }
                // - [D x_i, x_j]_k = - Σ_a D_{ai} c_aj^k
                // - [x_i, D x_j]_k = - Σ_a D_{aj} c_ia^k
                for a in 0..n {
                    let c1 = l.structure_constant(a, j, k);
                    row[a * n + i] = f.sub(row[a * n + i], c1);
                    let c2 = l.structure_constant(i, a, k);
                    row[a * n + j] = f.sub(row[a * n + j], c2);
                }
                rows.push(row);
            }
        }
    }
    let space = if rows.is_empty() {
        Subspace::full(f, n * n)
    } else {
        kernel(&Matrix::from_rows(f, n * n, &rows).expect("row lengths"))
    };
    space
        .rows()
        .map(|r| {
            let mut m = Matrix::zeros(f, n, n);
            for a in 0..n {
                for b in 0..n {
                    m.set(a, b, r[a * n + b]);
                }
            }
            m
        })
        .collect()
}

/// `L ⋊ <t>` with `[t, v] = D v`; the new basis element is appended last.
pub fn extend_by_derivation(l: &LieAlgebra, d: &Matrix) -> Result<LieAlgebra> {
    let n = l.dim();
    if d.rows() != n || d.cols() != n {
        return Err(Error::DimensionMismatch("derivation must be n x n".into()));
    }
    let f = l.field();
    let m = n + 1;
    let mut sc = vec![0u8; m * m * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                sc[(i * m + j) * m + k] = l.structure_constant(i, j, k);
            }
        }
    }
    for b in 0..n {
        for a in 0..n {
            let v = d.get(a, b);
            sc[(n * m + b) * m + a] = v;
            sc[(b * m + n) * m + a] = f.neg(v);
        }
    }
    let mut labels = l.labels().to_vec();
    labels.push(format!("x{}", n + 1));
    LieAlgebra::new(f, m, sc, Some(labels))
}

const RANDOM_RETRIES: usize = 8;

/// Deterministic-from-seed solvable algebra built as a tower of one-dimensional
/// extensions by random derivations.
pub fn random_solvable(dim: usize, p: u8, seed: u64) -> Result<LieAlgebra> {
    if dim == 0 || dim > 6 {
        return Err(Error::Precondition(format!("random_solvable needs 1 <= dim <= 6, got {dim}")));
    }
    let field = Field::new(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((dim as u64) << 40) ^ ((p as u64) << 48));
    let mut l = LieAlgebra::abelian(field, 1);
    while l.dim() < dim {
        let ders = derivations(&l);
        let mut next = None;
        for _ in 0..RANDOM_RETRIES {
            let n = l.dim();
            let mut d = Matrix::zeros(field, n, n);
            for basis in &ders {
                let c: u8 = rng.gen_range(0..p);
                for a in 0..n {
                    for b in 0..n {
                        d.set(a, b, field.mul_add(d.get(a, b), c, basis.get(a, b)));
                    }
                }
            }
            match extend_by_derivation(&l, &d) {
                Ok(ext) => {
                    next = Some(ext);
                    break;
                }
                Err(Error::Axiom(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        l = next.ok_or_else(|| {
            Error::Verification(format!("derivation sampling produced no Jacobi-valid extension of dimension {}", l.dim() + 1))
        })?;
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::{derived_series, is_solvable};

    #[test]
    fn random_is_deterministic() {
        let a = random_solvable(3, 2, 7).unwrap();
        let b = random_solvable(3, 2, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn random_outputs_are_valid_and_solvable() {
        for (dim, p) in [(3, 2), (4, 2), (3, 3), (5, 5), (6, 2)] {
            for seed in 0..20 {
                let l = random_solvable(dim, p, seed).unwrap();
                assert_eq!(l.dim(), dim);
                assert!(l.validate().is_ok());
                assert!(is_solvable(&l));
                assert!(derived_series(&l).last().unwrap().is_zero());
            }
        }
    }

    #[test]
    fn random_family_is_not_trivial() {
        let nonabelian = (0..30).filter(|&s| !random_solvable(4, 3, s).unwrap().is_abelian()).count();
        assert!(nonabelian > 10);
    }

    #[test]
    fn derivations_of_known_algebras() {
        let f = Field::new(3).unwrap();
        assert_eq!(derivations(&LieAlgebra::abelian(f, 2)).len(), 4);
        // Der(H3) has dimension 6 (gl2 acting on x1,x2 plus 2 inner-type maps into x3).
        assert_eq!(derivations(&heisenberg(f)).len(), 6);
        let sl = sl2(Field::new(5).unwrap()).unwrap();
        // sl2 has only inner derivations.
        assert_eq!(derivations(&sl).len(), 3);
        for d in derivations(&heisenberg(f)) {
            assert!(extend_by_derivation(&heisenberg(f), &d).is_ok());
        }
    }

    #[test]
    fn builtins_validate() {
        for p in [2, 3, 5] {
            for name in BUILTIN_NAMES {
                match builtin(name, p) {
                    Ok(e) => assert!(e.algebra.validate().is_ok(), "{name} over GF({p})"),
                    Err(Error::Precondition(_)) => assert!(name.starts_with("sl2") && p < 5),
                    Err(e) => panic!("{name}: {e}"),
                }
            }
        }
        assert!(builtin("abelian4", 3).is_ok());
        assert!(matches!(builtin("nope", 2), Err(Error::UnknownCorpusEntry(_))));
        assert!(matches!(builtin("abelian9", 2), Err(Error::UnknownCorpusEntry(_))));
    }
}
