//! Certificate JSON.
//!
//! ```text
//! { "kind": "simple" | "multi", "dim": l, "vars": [names],  // vars optional
//!   "forms": [["p/q", ...], ...], "mult": [m, ...],   // mult: multi only
//!   "root": node }
//! node = { "exp": [e, ...], "move": "empty" | "rank2" | "add" | "delete",
//!          "hyperplane": i,                            // add / delete
//!          "children": { "deleted": node, "restricted": node* } // add
//!                    | { "full": node*, "restricted": node* } } // delete
//! ```
//!
//! Nodes marked `*` repeat the `dim`/`vars`/`forms`/`mult` header because they live
//! on a different multiarrangement; a deleted child is the deletion of its
//! parent and carries no header.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::exactlin::{format_rational, parse_rational, Rational};
use crate::multi::{Exponents, Multiarrangement};

use super::{Certificate, Kind, Move, Node};

fn header(out: &mut Map<String, Value>, ma: &Multiarrangement, kind: Kind) {
    out.insert("dim".into(), json!(ma.dim()));
    out.insert("vars".into(), json!(ma.arrangement().names()));
    let forms: Vec<Value> = ma
        .arrangement()
        .forms()
        .iter()
        .map(|f| {
            Value::Array(
                f.to_rationals()
                    .iter()
                    .map(|x| Value::String(format_rational(x)))
                    .collect(),
            )
        })
        .collect();
    out.insert("forms".into(), Value::Array(forms));
    if kind == Kind::Multi {
        out.insert("mult".into(), json!(ma.mult()));
    }
}

fn node_json(n: &Node, kind: Kind, with_header: bool) -> Value {
    let mut out = Map::new();
    if with_header {
        header(&mut out, &n.multi, kind);
    }
    out.insert("exp".into(), json!(n.exp.as_slice()));
    out.insert("move".into(), json!(n.mv.name()));
    match &n.mv {
        Move::Empty | Move::Rank2 => {}
        Move::Add {
            hyperplane,
            deleted,
            restricted,
        } => {
            out.insert("hyperplane".into(), json!(hyperplane));
            out.insert(
                "children".into(),
                json!({
                    "deleted": node_json(deleted, kind, false),
                    "restricted": node_json(restricted, kind, true),
                }),
            );
        }
        Move::Delete {
            hyperplane,
            full,
            restricted,
        } => {
            out.insert("hyperplane".into(), json!(hyperplane));
            out.insert(
                "children".into(),
                json!({
                    "full": node_json(full, kind, true),
                    "restricted": node_json(restricted, kind, true),
                }),
            );
        }
    }
    Value::Object(out)
}

pub fn certificate_to_json(cert: &Certificate) -> Value {
    let mut out = Map::new();
    out.insert("kind".into(), json!(cert.kind.as_str()));
    header(&mut out, &cert.root.multi, cert.kind);
    out.insert("root".into(), node_json(&cert.root, cert.kind, false));
    Value::Object(out)
}

fn bad(msg: impl Into<String>) -> Error {
    Error::MalformedCertificate(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing `{key}`")))
}

fn uint(v: &Value, what: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| bad(format!("`{what}` must be a nonnegative integer")))
}

fn rational(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s).ok_or_else(|| bad(format!("bad rational `{s}`"))),
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rational::from_integer(i.into()))
            .ok_or_else(|| bad("non-integer number used as a rational")),
        _ => Err(bad("rationals must be strings")),
    }
}

fn read_header(v: &Value, kind: Kind) -> Result<Multiarrangement> {
    let names = v.get("vars").and_then(Value::as_array).map(|a| {
        a.iter()
            .filter_map(|s| s.as_str().map(str::to_string))
            .collect::<Vec<_>>()
    });
    let dim = uint(field(v, "dim")?, "dim")? as usize;
    let forms = field(v, "forms")?
        .as_array()
        .ok_or_else(|| bad("`forms` must be an array"))?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| bad("each form must be an array"))?
                .iter()
                .map(rational)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut arr = Arrangement::new(dim, &forms).map_err(|e| bad(e.to_string()))?;
    if let Some(n) = names.filter(|n| n.len() == dim) {
        arr = arr.with_names(n);
    }
    let mult = match (kind, v.get("mult")) {
        (Kind::Multi, Some(m)) => m
            .as_array()
            .ok_or_else(|| bad("`mult` must be an array"))?
            .iter()
            .map(|x| uint(x, "mult").map(|u| u as u32))
            .collect::<Result<Vec<_>>>()?,
        (Kind::Multi, None) => return Err(bad("multi certificate node without `mult`")),
        (Kind::Simple, _) => vec![1; arr.len()],
    };
    Multiarrangement::new(arr, mult).map_err(|e| bad(e.to_string()))
}

fn read_node(v: &Value, kind: Kind, multi: Multiarrangement) -> Result<Arc<Node>> {
    let exp = field(v, "exp")?
        .as_array()
        .ok_or_else(|| bad("`exp` must be an array"))?
        .iter()
        .map(|x| uint(x, "exp").map(|u| u as u32))
        .collect::<Result<Vec<_>>>()?;
    let exp = Exponents::new(exp);
    let mv_name = field(v, "move")?
        .as_str()
        .ok_or_else(|| bad("`move` must be a string"))?;
    let mv = match mv_name {
        "empty" => Move::Empty,
        "rank2" => Move::Rank2,
        "add" | "delete" => {
            let h = uint(field(v, "hyperplane")?, "hyperplane")? as usize;
            let ch = field(v, "children")?;
            let rv = field(ch, "restricted")?;
            let restricted = read_node(rv, kind, read_header(rv, kind)?)?;
            if mv_name == "add" {
                if h >= multi.arrangement().len() || multi.mult()[h] == 0 {
                    return Err(bad(format!("hyperplane {h} out of range")));
                }
                let dm = multi.deletion(h).map_err(|e| bad(e.to_string()))?;
                let deleted = read_node(field(ch, "deleted")?, kind, dm)?;
                Move::Add {
                    hyperplane: h,
                    deleted,
                    restricted,
                }
            } else {
                let fv = field(ch, "full")?;
                let full = read_node(fv, kind, read_header(fv, kind)?)?;
                Move::Delete {
                    hyperplane: h,
                    full,
                    restricted,
                }
            }
        }
        other => return Err(bad(format!("unknown move `{other}`"))),
    };
    Ok(Arc::new(Node { multi, exp, mv }))
}

pub fn certificate_from_json(v: &Value) -> Result<Certificate> {
    let kind = match field(v, "kind")?.as_str() {
        Some("simple") => Kind::Simple,
        Some("multi") => Kind::Multi,
        _ => return Err(bad("`kind` must be \"simple\" or \"multi\"")),
    };
    let multi = read_header(v, kind)?;
    let root = read_node(field(v, "root")?, kind, multi)?;
    Ok(Certificate { kind, root })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::{certify_inductive, lift_inductive, verify_cert};
    use crate::corpus::generate_spec;

    #[test]
    fn roundtrip_simple_and_lifted() {
        let a = generate_spec("braid(4)").unwrap().arrangement;
        let c = certify_inductive(&a).unwrap().unwrap();
        let v = certificate_to_json(&c);
        let back = certificate_from_json(&v).unwrap();
        assert_eq!(verify_cert(&back), Ok(()));
        assert_eq!(certificate_to_json(&back), v);
        let l = lift_inductive(&c, 0).unwrap();
        let lv = certificate_to_json(&l);
        let lb = certificate_from_json(&lv).unwrap();
        assert_eq!(verify_cert(&lb), Ok(()));
        assert_eq!(lb.exponents(), l.exponents());
    }

    #[test]
    fn malformed_inputs() {
        assert!(certificate_from_json(&json!({"kind": "other"})).is_err());
        let v = json!({"kind": "simple", "dim": 2, "forms": [["1", "0"]],
                       "root": {"exp": [1, 0], "move": "teleport"}});
        assert!(matches!(
            certificate_from_json(&v),
            Err(Error::MalformedCertificate(_))
        ));
    }
}
