//! Plain-text arrangement files.
//!
//! ```text
//! # comment
//! # vars: x y z
//! dim 3
//! 1 0 0
//! 1 1 0 ; 2
//! 1/2 0 -1
//! ```
//!
//! The optional `; m` suffix is a multiplicity (default 1). A `# vars:`
//! comment names the coordinates for display.

use crate::error::{Error, Result};
use crate::exactlin::{format_rational, parse_rational, Rational};

use super::Arrangement;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedFile {
    pub dim: usize,
    pub forms: Vec<Vec<Rational>>,
    pub mult: Vec<u32>,
    /// Whether any line carried an explicit multiplicity.
    pub has_mult: bool,
    pub names: Option<Vec<String>>,
}

impl ParsedFile {
    pub fn arrangement(&self) -> Result<Arrangement> {
        let a = Arrangement::new(self.dim, &self.forms)?;
        Ok(match &self.names {
            Some(n) => a.with_names(n.clone()),
            None => a,
        })
    }
}

pub fn parse_text(text: &str) -> Result<ParsedFile> {
    let mut dim: Option<usize> = None;
    let mut names = None;
    let mut forms = Vec::new();
    let mut mult = Vec::new();
    let mut has_mult = false;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let err = |msg: String| Error::Parse { line, msg };
        let trimmed = raw.trim();
        if let Some(c) = trimmed.strip_prefix('#') {
            if let Some(v) = c.trim().strip_prefix("vars:") {
                names = Some(v.split_whitespace().map(str::to_string).collect::<Vec<_>>());
            }
            continue;
        }
        let body = trimmed.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some(l) = dim else {
            let rest = body
                .strip_prefix("dim")
                .ok_or_else(|| err("expected `dim <n>` as the first line".into()))?;
            let l: usize = rest
                .trim()
                .parse()
                .map_err(|_| err(format!("bad dimension `{}`", rest.trim())))?;
            dim = Some(l);
            continue;
        };
        let (coeffs, m) = match body.split_once(';') {
            Some((c, m)) => {
                let m: u32 = m
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad multiplicity `{}`", m.trim())))?;
                if m == 0 {
                    return Err(err("multiplicity must be at least 1".into()));
                }
                has_mult = true;
                (c, m)
            }
            None => (body, 1),
        };
        let row: Vec<Rational> = coeffs
            .split_whitespace()
            .map(|t| parse_rational(t).ok_or_else(|| err(format!("bad rational `{t}`"))))
            .collect::<Result<_>>()?;
        if row.len() != l {
            return Err(err(format!("expected {l} coefficients, found {}", row.len())));
        }
        forms.push(row);
        mult.push(m);
    }
    let dim = dim.ok_or(Error::Parse {
        line: 0,
        msg: "missing `dim` line".into(),
    })?;
    if let Some(n) = &names {
        if n.len() != dim {
            return Err(Error::Parse {
                line: 0,
                msg: format!("`vars:` names {} coordinates, dimension is {dim}", n.len()),
            });
        }
    }
    Ok(ParsedFile {
        dim,
        forms,
        mult,
        has_mult,
        names,
    })
}

/// Serializes an arrangement, with multiplicities when given. Hyperplanes
/// of multiplicity zero are omitted.
pub fn write_text(a: &Arrangement, mult: Option<&[u32]>, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str("# vars: ");
    out.push_str(&a.names().join(" "));
    out.push('\n');
    out.push_str(&format!("dim {}\n", a.dim()));
    for (i, f) in a.forms().iter().enumerate() {
        let m = mult.map(|m| m[i]);
        if m == Some(0) {
            continue;
        }
        let row: Vec<String> = f
            .to_rationals()
            .iter()
            .map(format_rational)
            .collect();
        out.push_str(&row.join(" "));
        if let Some(m) = m {
            out.push_str(&format!(" ; {m}"));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::ratio;

    #[test]
    fn roundtrip_with_multiplicities() {
        let text = "# demo\n# vars: u v\ndim 2\n1 0 ; 3\n1/2 -1   # trailing\n\n";
        let p = parse_text(text).unwrap();
        assert_eq!(p.dim, 2);
        assert_eq!(p.mult, vec![3, 1]);
        assert!(p.has_mult);
        assert_eq!(p.forms[1][0], ratio(1, 2));
        let a = p.arrangement().unwrap();
        assert_eq!(a.names(), &["u".to_string(), "v".to_string()]);
        let out = write_text(&a, Some(&p.mult), &[]);
        let q = parse_text(&out).unwrap();
        assert_eq!(q.arrangement().unwrap(), a);
        assert_eq!(q.mult, p.mult);
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert!(matches!(
            parse_text("dim 2\n1 2 3\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_text("1 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_text("dim 2\n1 1 ; 0\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
