//! Plain-text matrix space files.
//!
//! ```text
//! field GF(3)          # or GF(3^2; 1,0,1)
//! n 2
//! dim 3
//! mat 1 0 0 0          # n^2 packed elements, row-major, once per basis matrix
//! mat 0 1 0 0
//! mat 0 0 0 1
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::space::MatSpace;

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens of a line with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(byte, tok)| (line[..byte].chars().count() + 1, tok))
        .collect()
}

fn parse_usize(line: usize, (col, tok): (usize, &str), what: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| parse_err(line, col, format!("expected {what}, found `{tok}`")))
}

/// Parses a space file. Dependent basis matrices are canonicalized away
/// unless `strict` is set, in which case they are an error.
pub fn parse(text: &str, strict: bool) -> Result<MatSpace> {
    let mut field: Option<FieldCtx> = None;
    let mut n: Option<usize> = None;
    let mut dim: Option<(usize, usize)> = None;
    let mut rows: Vec<Vec<Elem>> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(&(kcol, keyword)) = toks.first() else {
            continue;
        };
        match keyword {
            "field" => {
                if field.is_some() {
                    return Err(parse_err(line_no, kcol, "duplicate `field` line"));
                }
                let Some(&(col, _)) = toks.get(1) else {
                    return Err(parse_err(line_no, kcol, "missing field descriptor"));
                };
                // the descriptor may contain spaces after `;` or `,`
                let start = content
                    .char_indices()
                    .nth(col - 1)
                    .map(|(b, _)| b)
                    .unwrap_or(content.len());
                let desc = content[start..].trim();
                field = Some(
                    desc.parse()
                        .map_err(|e: Error| parse_err(line_no, col, e.to_string()))?,
                );
            }
            "n" | "dim" => {
                if toks.len() != 2 {
                    return Err(parse_err(
                        line_no,
                        kcol,
                        format!("`{keyword}` takes one integer"),
                    ));
                }
                let v = parse_usize(line_no, toks[1], "an integer")?;
                if keyword == "n" {
                    if n.is_some() {
                        return Err(parse_err(line_no, kcol, "duplicate `n` line"));
                    }
                    if v == 0 {
                        return Err(parse_err(line_no, toks[1].0, "n must be positive"));
                    }
                    n = Some(v);
                } else {
                    if dim.is_some() {
                        return Err(parse_err(line_no, kcol, "duplicate `dim` line"));
                    }
                    dim = Some((v, line_no));
                }
            }
            "mat" => {
                let (Some(f), Some(n)) = (&field, n) else {
                    return Err(parse_err(line_no, kcol, "`mat` before `field` and `n`"));
                };
                if toks.len() - 1 != n * n {
                    return Err(parse_err(
                        line_no,
                        kcol,
                        format!("expected {} entries, found {}", n * n, toks.len() - 1),
                    ));
                }
                let mut row = Vec::with_capacity(n * n);
                for &(col, tok) in &toks[1..] {
                    let v: u64 = tok.parse().map_err(|_| {
                        parse_err(
                            line_no,
                            col,
                            format!("expected a field element, found `{tok}`"),
                        )
                    })?;
                    if v >= f.q() as u64 {
                        return Err(parse_err(
                            line_no,
                            col,
                            format!("element {v} out of range for {f}"),
                        ));
                    }
                    row.push(v as Elem);
                }
                rows.push(row);
            }
            other => {
                return Err(parse_err(
                    line_no,
                    kcol,
                    format!("unknown keyword `{other}`"),
                ));
            }
        }
    }
    let eof = last_line + 1;
    let field = field.ok_or_else(|| parse_err(eof, 1, "missing `field` line"))?;
    let n = n.ok_or_else(|| parse_err(eof, 1, "missing `n` line"))?;
    let (dim, dim_line) = dim.ok_or_else(|| parse_err(eof, 1, "missing `dim` line"))?;
    if rows.len() != dim {
        return Err(parse_err(
            dim_line,
            1,
            format!("dim is {dim} but {} `mat` lines follow", rows.len()),
        ));
    }
    let space = MatSpace::from_vectors(&field, n, &rows)?;
    if strict && space.dim() != dim {
        return Err(parse_err(
            dim_line,
            1,
            format!(
                "basis is dependent: it spans a space of dimension {}",
                space.dim()
            ),
        ));
    }
    Ok(space)
}

/// Renders the canonical basis of `s`.
pub fn render(s: &MatSpace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "field {}", s.field());
    let _ = writeln!(out, "n {}", s.n());
    let _ = writeln!(out, "dim {}", s.dim());
    for b in s.basis_vectors() {
        let items: Vec<String> = b.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "mat {}", items.join(" "));
    }
    out
}
