//! JSON and text rendering shared by the subcommands.

use std::fmt::Display;

use serde_json::{json, Value};

use freearr::arrangement::{Arrangement, UniPoly};
use freearr::dsolve::FreenessVerdict;
use freearr::exactlin::format_rational;
use freearr::multi::{Exponents, Multiarrangement};

/// Exit code, human text and JSON for one invocation.
pub struct Report {
    pub code: u8,
    pub text: String,
    pub json: Value,
}

impl Report {
    pub fn ok(text: String, json: Value) -> Self {
        Report { code: 0, text, json }
    }

    pub fn with_code(mut self, code: u8) -> Self {
        self.code = code;
        self
    }
}

/// Integer as a JSON number when it fits in 64 bits, else as a string.
pub fn int(b: &impl Display) -> Value {
    let s = b.to_string();
    match s.parse::<i64>() {
        Ok(v) => json!(v),
        Err(_) => json!(s),
    }
}

pub fn exps(e: &Exponents) -> Value {
    json!(e.as_slice())
}

pub fn arrangement(a: &Arrangement, mult: Option<&[u32]>) -> Value {
    let forms: Vec<Vec<String>> = a
        .forms()
        .iter()
        .map(|f| f.to_rationals().iter().map(format_rational).collect())
        .collect();
    let mut v = json!({
        "dim": a.dim(),
        "vars": a.names(),
        "forms": forms,
    });
    if let Some(m) = mult {
        v["mult"] = json!(m);
    }
    v
}

pub fn multi(ma: &Multiarrangement) -> Value {
    let mut v = arrangement(ma.arrangement(), Some(ma.mult()));
    v["order"] = json!(ma.order());
    v["q"] = json!(ma.display_q());
    v
}

pub fn poly(p: &UniPoly) -> Value {
    json!({
        "coeffs": p.coeffs().iter().map(int).collect::<Vec<_>>(),
        "display": p.to_string(),
    })
}

pub fn verdict(v: &FreenessVerdict, names: &[String]) -> Value {
    match v {
        FreenessVerdict::Free { basis, exponents } => json!({
            "verdict": "free",
            "exponents": exps(exponents),
            "basis": basis
                .iter()
                .map(|d| d.coeffs().iter().map(|c| c.display_with(names).to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        }),
        FreenessVerdict::NotFree(w) => json!({
            "verdict": "not_free",
            "witness": w.to_string(),
        }),
        FreenessVerdict::Inconclusive { dmax } => json!({
            "verdict": "inconclusive",
            "dmax": dmax,
        }),
    }
}

/// 0 free, 1 not free, 3 inconclusive.
pub fn verdict_code(v: &FreenessVerdict) -> u8 {
    match v {
        FreenessVerdict::Free { .. } => 0,
        FreenessVerdict::NotFree(_) => 1,
        FreenessVerdict::Inconclusive { .. } => 3,
    }
}

/// Left-aligned columns separated by two spaces.
pub fn table(rows: &[Vec<String>]) -> String {
    let n = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..n)
        .map(|j| rows.iter().filter_map(|r| r.get(j)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(j, s)| format!("{s:<w$}", w = widths[j]))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}
