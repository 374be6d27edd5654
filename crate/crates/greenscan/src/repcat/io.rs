//! Module file format: a representation is given by per-vertex dimensions
//! and per-arrow matrices, checked against the relations on load.
//!
//! ```text
//! module m over a2
//! dim 1 = 1
//! dim 2 = 1
//! map a = [[1]]
//! ```

use super::Representation;
use crate::algebra::Algebra;
use crate::linalg::{rat_from_str, rat_to_string, RatMat};

use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModuleError {
    #[error("syntax error at line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("invalid module: {0}")]
    Invalid(String),
}

fn parse_matrix(s: &str, rows: usize, cols: usize, line: usize) -> Result<RatMat, ModuleError> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or(ModuleError::Syntax { line, msg: "matrix must be bracketed".into() })?
        .trim();
    let mut out = RatMat::zero(rows, cols);
    if inner.is_empty() {
        return Ok(out);
    }
    let mut row_strs: Vec<String> = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in inner.chars() {
        match ch {
            '[' => {
                depth += 1;
                if depth == 1 {
                    cur.clear();
                    continue;
                }
            }
            ']' => {
                if depth == 0 {
                    return Err(ModuleError::Syntax { line, msg: "unbalanced brackets".into() });
                }
                depth -= 1;
                if depth == 0 {
                    row_strs.push(cur.clone());
                    continue;
                }
            }
            _ => {}
        }
        if depth >= 1 {
            cur.push(ch);
        }
    }
    if depth != 0 {
        return Err(ModuleError::Syntax { line, msg: "unbalanced brackets".into() });
    }
    if row_strs.len() != rows {
        return Err(ModuleError::Syntax {
            line,
            msg: format!("expected {rows} rows, found {}", row_strs.len()),
        });
    }
    for (r, rs) in row_strs.iter().enumerate() {
        let entries: Vec<&str> =
            rs.split(',').map(str::trim).filter(|e| !e.is_empty()).collect();
        if entries.len() != cols {
            return Err(ModuleError::Syntax {
                line,
                msg: format!("row {} has {} entries, expected {cols}", r + 1, entries.len()),
            });
        }
        for (c, e) in entries.iter().enumerate() {
            *out.at_mut(r, c) = rat_from_str(e).ok_or(ModuleError::Syntax {
                line,
                msg: format!("invalid rational `{e}`"),
            })?;
        }
    }
    Ok(out)
}

pub fn parse_module(text: &str, alg: &Arc<Algebra>) -> Result<Representation, ModuleError> {
    let n = alg.n();
    let mut dims: Vec<usize> = vec![0; n];
    let mut map_lines: Vec<(usize, String, String)> = Vec::new();
    let mut saw_header = false;

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("module ") {
            let mut words = rest.split_whitespace();
            let _name = words.next().ok_or(ModuleError::Syntax {
                line,
                msg: "expected module name".into(),
            })?;
            match (words.next(), words.next()) {
                (Some("over"), Some(a)) if a == alg.name => {}
                (Some("over"), Some(a)) => {
                    return Err(ModuleError::Invalid(format!(
                        "module is over `{a}`, expected `{}`",
                        alg.name
                    )))
                }
                _ => {
                    return Err(ModuleError::Syntax {
                        line,
                        msg: "expected `module <name> over <algebra>`".into(),
                    })
                }
            }
            saw_header = true;
        } else if let Some(rest) = content.strip_prefix("dim ") {
            let (v, k) = rest.split_once('=').ok_or(ModuleError::Syntax {
                line,
                msg: "expected `dim <vertex> = <k>`".into(),
            })?;
            let vid: u32 = v.trim().parse().map_err(|_| ModuleError::Syntax {
                line,
                msg: format!("invalid vertex `{}`", v.trim()),
            })?;
            let vi = alg.quiver.vertex_index(vid).ok_or(ModuleError::Syntax {
                line,
                msg: format!("undeclared vertex {vid}"),
            })?;
            dims[vi] = k.trim().parse().map_err(|_| ModuleError::Syntax {
                line,
                msg: format!("invalid dimension `{}`", k.trim()),
            })?;
        } else if let Some(rest) = content.strip_prefix("map ") {
            let (label, body) = rest.split_once('=').ok_or(ModuleError::Syntax {
                line,
                msg: "expected `map <arrow> = [[...]]`".into(),
            })?;
            map_lines.push((line, label.trim().to_string(), body.to_string()));
        } else {
            return Err(ModuleError::Syntax {
                line,
                msg: format!("unknown directive `{content}`"),
            });
        }
    }
    if !saw_header {
        return Err(ModuleError::Invalid("missing `module ... over ...` header".into()));
    }

    let mut maps: Vec<RatMat> = alg
        .quiver
        .arrows
        .iter()
        .map(|a| RatMat::zero(dims[a.target], dims[a.source]))
        .collect();
    for (line, label, body) in map_lines {
        let ai = alg
            .quiver
            .arrows
            .iter()
            .position(|a| a.label == label)
            .ok_or(ModuleError::Syntax { line, msg: format!("unknown arrow `{label}`") })?;
        let a = &alg.quiver.arrows[ai];
        maps[ai] = parse_matrix(&body, dims[a.target], dims[a.source], line)?;
    }

    let rep = Representation { alg: alg.clone(), dims, maps };
    if !rep.check() {
        return Err(ModuleError::Invalid("arrow matrices violate the relations".into()));
    }
    Ok(rep)
}

/// Deterministic, byte-stable emission; inverse of `parse_module`.
pub fn emit_module(name: &str, rep: &Representation) -> String {
    let alg = &rep.alg;
    let mut out = format!("module {name} over {}\n", alg.name);
    for (v, &d) in rep.dims.iter().enumerate() {
        out.push_str(&format!("dim {} = {}\n", alg.quiver.vertices[v], d));
    }
    for (ai, a) in alg.quiver.arrows.iter().enumerate() {
        let m = &rep.maps[ai];
        if m.is_zero() {
            continue;
        }
        let rows: Vec<String> = (0..m.rows)
            .map(|r| {
                let entries: Vec<String> =
                    (0..m.cols).map(|c| rat_to_string(m.at(r, c))).collect();
                format!("[{}]", entries.join(","))
            })
            .collect();
        out.push_str(&format!("map {} = [{}]\n", a.label, rows.join(",")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_algebra, presets};
    use crate::repcat::{is_isomorphic, projective};

    #[test]
    fn round_trip() {
        let alg = Arc::new(parse_algebra(presets::KRONECKER).unwrap());
        let p1 = projective(&alg, 0);
        let text = emit_module("p1", &p1);
        let back = parse_module(&text, &alg).unwrap();
        assert_eq!(back, p1);
        // emission is byte stable
        assert_eq!(emit_module("p1", &back), text);
    }

    #[test]
    fn rejects_relation_violation() {
        let alg = Arc::new(parse_algebra(presets::MARKOV).unwrap());
        let text = "\
module bad over markov
dim 1 = 1
dim 2 = 1
dim 3 = 1
map a1 = [[1]]
map b1 = [[1]]
";
        match parse_module(text, &alg) {
            Err(ModuleError::Invalid(_)) => {}
            other => panic!("expected invalid module, got {other:?}"),
        }
    }

    #[test]
    fn rejects_wrong_algebra() {
        let alg = Arc::new(parse_algebra(presets::A2).unwrap());
        let text = "module m over elsewhere\ndim 1 = 1\n";
        assert!(parse_module(text, &alg).is_err());
    }

    #[test]
    fn parses_rational_entries() {
        let alg = Arc::new(parse_algebra(presets::A2).unwrap());
        let text = "\
module m over a2
dim 1 = 1
dim 2 = 2
map a = [[1/2],[-3]]
";
        let rep = parse_module(text, &alg).unwrap();
        assert_eq!(rat_to_string(rep.maps[0].at(0, 0)), "1/2");
        assert_eq!(rat_to_string(rep.maps[0].at(1, 0)), "-3");
        let s1 = Representation::simple(&alg, 0);
        assert!(!is_isomorphic(&rep, &s1));
    }
}
