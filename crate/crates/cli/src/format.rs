//! Plain-text algebra files.
//!
//! ```text
//! # Heisenberg algebra
//! field = 2
//! dim = 3
//! labels = x1 x2 x3
//! c[1][2][3] = 1
//! ```
//!
//! Header keys may be separated from their values by `=` or `:`. Constants
//! are 1-based triples, written `c[i][j][k] = v`, `c(i,j,k) = v` or as four
//! bare integers `i j k v`; values are reduced mod p and may be negative.
//! Missing constants are zero. Each `c[i][j][k]` implies `c[j][i][k] = -v`
//! unless that entry is listed too, in which case the two must agree.

use std::collections::BTreeMap;

use liechief::{Field, LieAlgebra};

use crate::CliError;

#[derive(Debug, Default)]
struct Header {
    field: Option<(u64, usize)>,
    dim: Option<(usize, usize)>,
    labels: Option<(Vec<String>, usize)>,
}

fn input(line: usize, msg: impl Into<String>) -> CliError {
    CliError::Input { line: Some(line), msg: msg.into() }
}

fn integers(s: &str, line: usize) -> Result<Vec<i64>, CliError> {
    s.split(|c: char| !(c.is_ascii_digit() || c == '-'))
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|_| input(line, format!("`{t}` is not an integer"))))
        .collect()
}

fn header_key(key: &str) -> Option<&'static str> {
    match key.trim().to_ascii_lowercase().as_str() {
        "field" | "p" | "prime" => Some("field"),
        "dim" | "dimension" | "n" => Some("dim"),
        "labels" | "basis" => Some("labels"),
        "name" => Some("name"),
        _ => None,
    }
}

/// Parses an algebra file. `field_override`, when given, must agree with the file.
pub fn parse(text: &str, field_override: Option<u8>) -> Result<LieAlgebra, CliError> {
    let mut header = Header::default();
    let mut constants: BTreeMap<(usize, usize, usize), (i64, usize)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() || (content.starts_with('[') && content.ends_with(']') && !content.starts_with("[[")) {
            continue;
        }
        let split = content.find(['=', ':']).map(|at| (&content[..at], &content[at + 1..]));
        if let Some(key) = split.and_then(|(k, _)| header_key(k)) {
            let value = split.unwrap().1.trim();
            match key {
                "field" => {
                    let p = value.parse::<u64>().map_err(|_| input(line, format!("field `{value}` is not a prime")))?;
                    header.field = Some((p, line));
                }
                "dim" => {
                    let n = value.parse::<usize>().map_err(|_| input(line, format!("dimension `{value}` is not a number")))?;
                    header.dim = Some((n, line));
                }
                "labels" => {
                    let names: Vec<String> =
                        value.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).map(String::from).collect();
                    header.labels = Some((names, line));
                }
                _ => {}
            }
            continue;
        }
        let body = content.trim_start_matches(['c', 'C']);
        let nums = integers(body, line)?;
        let [i, j, k, v] = nums[..] else {
            return Err(input(line, format!("expected a header `key = value` or a constant `c[i][j][k] = v`, found `{content}`")));
        };
        if i < 1 || j < 1 || k < 1 {
            return Err(input(line, "structure constant indices are 1-based"));
        }
        let key = (i as usize, j as usize, k as usize);
        if let Some((prev, at)) = constants.get(&key) {
            if *prev != v {
                return Err(input(line, format!("c[{i}][{j}][{k}] already set to {prev} on line {at}")));
            }
        }
        constants.insert(key, (v, line));
    }

    let (p, p_line) = header.field.ok_or_else(|| CliError::Input { line: None, msg: "missing `field` header".into() })?;
    let field = u8::try_from(p)
        .map_err(|_| liechief::Error::UnsupportedPrime(p))
        .and_then(Field::new)
        .map_err(|e| input(p_line, e.to_string()))?;
    if let Some(q) = field_override {
        if q != field.p() {
            return Err(input(p_line, format!("file is over GF({}) but --field {q} was given", field.p())));
        }
    }
    let (n, n_line) = header.dim.ok_or_else(|| CliError::Input { line: None, msg: "missing `dim` header".into() })?;
    if n == 0 {
        return Err(input(n_line, "dimension must be positive"));
    }
    let labels = match header.labels {
        Some((names, line)) => {
            if names.len() != n {
                return Err(input(line, format!("{} labels for dimension {n}", names.len())));
            }
            let mut seen = names.clone();
            seen.sort();
            seen.dedup();
            if seen.len() != n {
                return Err(input(line, "labels must be distinct"));
            }
            Some(names)
        }
        None => None,
    };

    let mut sc = vec![0u8; n * n * n];
    let at = |i: usize, j: usize, k: usize| ((i - 1) * n + (j - 1)) * n + (k - 1);
    for (&(i, j, k), &(v, line)) in &constants {
        if i > n || j > n || k > n {
            return Err(input(line, format!("index ({i},{j},{k}) out of range for dimension {n}")));
        }
        sc[at(i, j, k)] = field.reduce(v);
    }
    for &(i, j, k) in constants.keys() {
        if !constants.contains_key(&(j, i, k)) {
            sc[at(j, i, k)] = field.neg(sc[at(i, j, k)]);
        }
    }
    LieAlgebra::new(field, n, sc, labels).map_err(CliError::from)
}

/// Canonical text form: header, then nonzero constants with `i < j` in lexicographic order.
pub fn write(l: &LieAlgebra, name: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(name) = name {
        out.push_str(&format!("# {name}\n"));
    }
    out.push_str(&format!("field = {}\n", l.field().p()));
    out.push_str(&format!("dim = {}\n", l.dim()));
    out.push_str(&format!("labels = {}\n", l.labels().join(" ")));
    let n = l.dim();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let v = l.structure_constant(i, j, k);
                if v != 0 {
                    out.push_str(&format!("c[{}][{}][{}] = {}\n", i + 1, j + 1, k + 1, v));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use liechief::corpus;

    #[test]
    fn heisenberg_round_trip() {
        let l = corpus::heisenberg(Field::new(3).unwrap());
        let text = write(&l, Some("heisenberg"));
        assert!(text.contains("c[1][2][3] = 1"));
        assert_eq!(parse(&text, None).unwrap(), l);
    }

    #[test]
    fn tolerant_forms() {
        let text = "# comment\nfield: 5\ndimension: 2\n[constants]\n1 2 2 -1   # [x1,x2] = -x2\n";
        let l = parse(text, Some(5)).unwrap();
        assert_eq!(l.structure_constant(0, 1, 1), 4);
        assert_eq!(l.structure_constant(1, 0, 1), 1);
        let text = "field = 5\ndim = 2\nc(2,1,2) = 1\n";
        assert_eq!(parse(text, None).unwrap().structure_constant(0, 1, 1), 4);
    }

    #[test]
    fn antisymmetry_is_cross_checked() {
        let text = "field = 2\ndim = 3\nc[1][2][3] = 1\nc[2][1][3] = 1\n";
        assert!(parse(text, None).is_ok());
        let text = "field = 3\ndim = 3\nc[1][2][3] = 1\nc[2][1][3] = 1\n";
        let e = parse(text, None).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("(1,2,3)"), "{e}");
    }

    #[test]
    fn located_errors() {
        let e = parse("field = 2\ndim = 2\nc[1][2] = 1\n", None).unwrap_err();
        assert!(matches!(e, CliError::Input { line: Some(3), .. }));
        let e = parse("field = 4\ndim = 2\n", None).unwrap_err();
        assert!(matches!(e, CliError::Input { line: Some(1), .. }));
        let e = parse("dim = 2\n", None).unwrap_err();
        assert!(matches!(e, CliError::Input { line: None, .. }));
        let e = parse("field = 2\ndim = 2\nc[1][3][1] = 1\n", None).unwrap_err();
        assert!(matches!(e, CliError::Input { line: Some(3), .. }));
        let e = parse("field = 2\ndim = 2\n", Some(3)).unwrap_err();
        assert_eq!(e.exit_code(), 1);
    }

    #[test]
    fn empty_constants_are_abelian() {
        let l = parse("field = 2\ndim = 2\n", None).unwrap();
        assert!(l.is_abelian());
    }
}
