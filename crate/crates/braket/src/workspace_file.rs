//! Line-oriented workspace files.
//!
//! ```text
//! # comment
//! dim 2
//! let x = [1, 0]
//! let y = [0.5+2i, -i]
//! ```
//!
//! `dim` must come before any binding. Scalars are written `re`, `re+imi`,
//! `re-imi`, `imi`, `i` or `-i`; reals are decimals with an optional sign and
//! fraction.

use std::fmt::Write as _;

use braket_core::eval::DisplayScalar;
use braket_core::{Label, Scalar, Vector, Workspace};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LoadError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: dimension mismatch: expected {expected} components, found {found}")]
    DimensionMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("line {line}: binding before any `dim` header")]
    MissingDim { line: usize },
}

fn is_real(s: &str) -> bool {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    let (int, frac) = match digits.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (digits, None),
    };
    let all_digits = |p: &str| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit());
    all_digits(int) && frac.is_none_or(all_digits)
}

fn parse_real(s: &str) -> Result<f64, String> {
    if !is_real(s) {
        return Err(format!("invalid real number `{s}`"));
    }
    s.parse::<f64>()
        .map_err(|e| format!("invalid real number `{s}`: {e}"))
}

// Coefficient of `i`: empty or a bare sign means one.
fn parse_imaginary(s: &str) -> Result<f64, String> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => parse_real(s),
    }
}

/// Parses one scalar literal; whitespace inside the literal is ignored.
pub fn parse_scalar(text: &str) -> Result<Scalar, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty scalar literal".to_string());
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Scalar::new(parse_real(&s)?, 0.0));
    };
    // A sign past the leading one separates the real and imaginary parts.
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(_, c)| c == '+' || c == '-')
        .map(|(k, _)| k)
        .last();
    match split {
        Some(k) => Ok(Scalar::new(
            parse_real(&body[..k])?,
            parse_imaginary(&body[k..])?,
        )),
        None => Ok(Scalar::new(0.0, parse_imaginary(body)?)),
    }
    .map_err(|e: String| format!("{e} in scalar literal `{s}`"))
}

/// Parses `[s1, s2, ...]`.
pub fn parse_vector(text: &str) -> Result<Vec<Scalar>, String> {
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| {
            format!(
                "expected a bracketed vector literal, found `{}`",
                text.trim()
            )
        })?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(parse_scalar).collect()
}

/// A parsed `let <label> = [...]` line.
pub fn parse_binding(text: &str) -> Result<(Label, Vec<Scalar>), String> {
    let rest = text
        .trim()
        .strip_prefix("let")
        .filter(|r| r.starts_with(char::is_whitespace))
        .ok_or_else(|| "expected `let <label> = [...]`".to_string())?;
    let (name, rhs) = rest
        .split_once('=')
        .ok_or_else(|| "expected `=` in binding".to_string())?;
    let label = Label::new(name.trim()).map_err(|e| e.to_string())?;
    Ok((label, parse_vector(rhs)?))
}

/// Parses `dim <n>`; `None` if the line is not a `dim` line.
pub fn parse_dim(text: &str) -> Option<Result<usize, String>> {
    let rest = text.trim().strip_prefix("dim")?;
    if !rest.is_empty() && !rest.starts_with(char::is_whitespace) {
        return None;
    }
    let n = rest.trim();
    Some(match n.parse::<usize>() {
        Ok(d) if d >= 1 && n.bytes().all(|b| b.is_ascii_digit()) => Ok(d),
        _ => Err(format!("dimension must be a positive integer, found `{n}`")),
    })
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(code, _)| code)
}

pub fn load_workspace(text: &str) -> Result<Workspace, LoadError> {
    let mut ws: Option<Workspace> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let code = strip_comment(raw).trim();
        if code.is_empty() {
            continue;
        }
        let parse_err = |message: String| LoadError::Parse { line, message };
        if let Some(dim) = parse_dim(code) {
            if ws.is_some() {
                return Err(parse_err("duplicate `dim` header".to_string()));
            }
            let dim = dim.map_err(parse_err)?;
            ws = Some(Workspace::new(dim).expect("positive dimension"));
            continue;
        }
        if !code.starts_with("let") {
            return Err(parse_err(format!(
                "expected `dim` or `let`, found `{code}`"
            )));
        }
        let Some(current) = ws.as_mut() else {
            return Err(LoadError::MissingDim { line });
        };
        let (label, components) = parse_binding(code).map_err(parse_err)?;
        if components.len() != current.dim() {
            return Err(LoadError::DimensionMismatch {
                line,
                expected: current.dim(),
                found: components.len(),
            });
        }
        let v = Vector::new(components).map_err(|e| parse_err(e.to_string()))?;
        current.bind_in_place(label, v).expect("length checked");
    }
    ws.ok_or(LoadError::MissingDim {
        line: text.lines().count().max(1),
    })
}

/// Workspace in file form; [`load_workspace`] reads it back unchanged.
pub fn dump_workspace(ws: &Workspace) -> String {
    let mut out = format!("dim {}\n", ws.dim());
    for (label, v) in ws.bindings() {
        let items: Vec<String> = v.iter().map(|z| DisplayScalar(*z).to_string()).collect();
        let _ = writeln!(out, "let {label} = [{}]", items.join(", "));
    }
    out
}
