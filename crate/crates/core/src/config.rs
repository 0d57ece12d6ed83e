//! Surface configuration files:
//!
//! ```text
//! d = 5
//! elliptic = { nu = 2, t = 1, count = 2 }
//! ```
//!
//! `#` starts a comment. `d` must appear exactly once; `elliptic` may repeat.

use std::path::Path;

use crate::error::{Error, Result};
use crate::field::{make_field, EllipticLocus, QuadraticField};

/// A parsed surface: the field and its elliptic data. The Euler
/// characteristic parity is not checked here.
#[derive(Debug, Clone)]
pub struct Surface {
    pub field: QuadraticField,
    pub locus: EllipticLocus,
}

fn parse_int(s: &str, what: &str, err: &dyn Fn(String) -> Error) -> Result<i64> {
    s.trim()
        .parse::<i64>()
        .map_err(|_| err(format!("{what}: expected an integer, got {:?}", s.trim())))
}

fn parse_block(v: &str, err: &dyn Fn(String) -> Error) -> Result<(i64, i64, i64)> {
    let inner = v
        .trim()
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| err("elliptic: expected { nu = .., t = .., count = .. }".into()))?;
    let (mut nu, mut t, mut count) = (None, None, None);
    for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, val) = part
            .split_once('=')
            .ok_or_else(|| err(format!("elliptic: expected key = value, got {part:?}")))?;
        let slot = match k.trim() {
            "nu" => &mut nu,
            "t" => &mut t,
            "count" => &mut count,
            other => return Err(err(format!("elliptic: unknown key {other:?}"))),
        };
        if slot.is_some() {
            return Err(err(format!("elliptic: duplicate key {:?}", k.trim())));
        }
        *slot = Some(parse_int(val, k.trim(), err)?);
    }
    match (nu, t, count) {
        (Some(a), Some(b), Some(c)) => Ok((a, b, c)),
        _ => Err(err("elliptic: nu, t and count are all required".into())),
    }
}

pub fn parse_surface(text: &str, name: &str) -> Result<Surface> {
    let mut d = None;
    let mut triples = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| Error::Parse {
            path: name.to_string(),
            line,
            message,
        };
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| err(format!("expected key = value, got {body:?}")))?;
        match key.trim() {
            "d" => {
                if d.is_some() {
                    return Err(err("d given twice".into()));
                }
                d = Some(parse_int(value, "d", &err)?);
            }
            "elliptic" => triples.push(parse_block(value, &err)?),
            other => return Err(err(format!("unknown key {other:?}"))),
        }
    }
    let d = d.ok_or_else(|| Error::Parse {
        path: name.to_string(),
        line: 0,
        message: "missing d".into(),
    })?;
    Ok(Surface {
        field: make_field(d)?,
        locus: EllipticLocus::from_triples(&triples)?,
    })
}

pub fn load_surface(path: &Path) -> Result<Surface> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    parse_surface(&text, &path.display().to_string())
}
