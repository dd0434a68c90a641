//! Freeness certificates: verification, searches and lifts to Ziegler
//! restrictions.
//!
//! A certificate is a tree of addition/deletion moves. Each node carries a
//! multiarrangement (simple certificates use multiplicity one throughout),
//! its claimed exponents and the move that justifies them:
//!
//! * `Empty`: no hyperplanes, all exponents zero.
//! * `Rank2`: rank at most two, exponents as computed by the graded solver.
//! * `Add`: the node deletes hyperplane `h`; the deletion and the (Euler)
//!   restriction are certified and `exp(restricted) ⊆ exp(deleted)`.
//! * `Delete`: the node is the deletion at `h` of a certified `full`
//!   multiarrangement whose restriction is certified and contained in it.

mod additive;
mod divisional;
mod filtration;
mod inductive;
mod json;
mod lift;
mod recursive;

pub use additive::{
    additive_filtration_multi, certify_additive, verify_additive_order, verify_multi_order,
    AdditiveOptions, AdditiveOutcome, FilterStep, FreeFiltration,
};
pub use divisional::{certify_divisional, DivisionalFlag};
pub use filtration::{
    check_free_deletion_conditions, theta_basis_filtration, DeletionConditions, SampleCheck,
    ThetaFiltration, ThetaStep,
};
pub use inductive::{
    certify_inductive, certify_inductive_multi, InductiveMultiReport, Obstruction,
};
pub use json::{certificate_from_json, certificate_to_json};
pub use lift::{lift_inductive, lift_recursive, lift_via_deletion};
pub use recursive::{certify_recursive, certify_recursive_multi, RecursiveOutcome};

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::dsolve::{freeness_oracle, FreenessVerdict};
use crate::error::{Error, Result};
use crate::multi::{rank2_exponents, triple, Exponents, Multiarrangement, Triple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Simple,
    Multi,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Simple => "simple",
            Kind::Multi => "multi",
        }
    }
}

#[derive(Clone, Debug)]
pub enum Move {
    Empty,
    Rank2,
    Add {
        hyperplane: usize,
        deleted: Arc<Node>,
        restricted: Arc<Node>,
    },
    Delete {
        hyperplane: usize,
        full: Arc<Node>,
        restricted: Arc<Node>,
    },
}

impl Move {
    pub fn name(&self) -> &'static str {
        match self {
            Move::Empty => "empty",
            Move::Rank2 => "rank2",
            Move::Add { .. } => "add",
            Move::Delete { .. } => "delete",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Node {
    pub multi: Multiarrangement,
    pub exp: Exponents,
    pub mv: Move,
}

impl Node {
    fn children(&self) -> Vec<&Arc<Node>> {
        match &self.mv {
            Move::Empty | Move::Rank2 => Vec::new(),
            Move::Add {
                deleted,
                restricted,
                ..
            } => vec![deleted, restricted],
            Move::Delete {
                full, restricted, ..
            } => vec![full, restricted],
        }
    }
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub kind: Kind,
    pub root: Arc<Node>,
}

impl Certificate {
    pub fn exponents(&self) -> &Exponents {
        &self.root.exp
    }

    pub fn multi(&self) -> &Multiarrangement {
        &self.root.multi
    }

    /// Distinct nodes, counting shared subtrees once.
    pub fn size(&self) -> usize {
        let mut seen = HashSet::new();
        let mut stack = vec![&self.root];
        while let Some(n) = stack.pop() {
            if seen.insert(Arc::as_ptr(n)) {
                stack.extend(n.children());
            }
        }
        seen.len()
    }

    pub fn has_delete(&self) -> bool {
        let mut seen = HashSet::new();
        let mut stack = vec![&self.root];
        while let Some(n) = stack.pop() {
            if !seen.insert(Arc::as_ptr(n)) {
                continue;
            }
            if matches!(n.mv, Move::Delete { .. }) {
                return true;
            }
            stack.extend(n.children());
        }
        false
    }
}

/// Exponents of the node from an addition: `exp(deleted) = R ⊎ {c}` gives
/// `R ⊎ {c + 1}`.
pub fn add_rule(deleted: &Exponents, restricted: &Exponents) -> Option<Exponents> {
    let c = restricted.extra_over(deleted)?;
    Some(restricted.with(c + 1))
}

/// Exponents of the deletion: `exp(full) = R ⊎ {c}` with `c >= 1` gives
/// `R ⊎ {c - 1}`.
pub fn delete_rule(full: &Exponents, restricted: &Exponents) -> Option<Exponents> {
    let c = restricted.extra_over(full)?;
    (c >= 1).then(|| restricted.with(c - 1))
}

pub(crate) fn same_multi(a: &Multiarrangement, b: &Multiarrangement) -> bool {
    a.dim() == b.dim() && a.profile() == b.profile()
}

/// Memo tables shared by searches, lifts and verification.
#[derive(Default)]
pub(crate) struct Cache {
    triples: HashMap<(Multiarrangement, usize), Arc<Triple>>,
    rank2: HashMap<Multiarrangement, Exponents>,
    oracle: HashMap<Multiarrangement, FreenessVerdict>,
}

impl Cache {
    pub(crate) fn triple(&mut self, ma: &Multiarrangement, h: usize) -> Result<Arc<Triple>> {
        let key = (ma.clone(), h);
        if let Some(t) = self.triples.get(&key) {
            return Ok(t.clone());
        }
        let t = Arc::new(triple(ma, h)?);
        self.triples.insert(key, t.clone());
        Ok(t)
    }

    pub(crate) fn rank2(&mut self, ma: &Multiarrangement) -> Result<Exponents> {
        if let Some(e) = self.rank2.get(ma) {
            return Ok(e.clone());
        }
        let e = rank2_exponents(ma)?;
        self.rank2.insert(ma.clone(), e.clone());
        Ok(e)
    }

    pub(crate) fn oracle(&mut self, ma: &Multiarrangement) -> FreenessVerdict {
        if let Some(v) = self.oracle.get(ma) {
            return v.clone();
        }
        let v = freeness_oracle(ma, None);
        self.oracle.insert(ma.clone(), v.clone());
        v
    }
}

/// First failing node of a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyFailure {
    /// Slash-separated route from the root, e.g. `root/deleted/restricted`.
    pub path: String,
    pub reason: String,
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.reason)
    }
}

/// Recomputes every restriction, Euler multiplicity, base exponent and
/// containment condition; no claimed value is trusted.
pub fn verify_cert(cert: &Certificate) -> std::result::Result<(), VerifyFailure> {
    let mut v = Verifier {
        kind: cert.kind,
        cache: Cache::default(),
        done: HashSet::new(),
    };
    v.node(&cert.root, "root")
}

struct Verifier {
    kind: Kind,
    cache: Cache,
    done: HashSet<*const Node>,
}

impl Verifier {
    fn node(&mut self, n: &Arc<Node>, path: &str) -> std::result::Result<(), VerifyFailure> {
        if self.done.contains(&Arc::as_ptr(n)) {
            return Ok(());
        }
        let fail = |reason: String| VerifyFailure {
            path: path.to_string(),
            reason,
        };
        let ma = &n.multi;
        if n.exp.len() != ma.dim() {
            return Err(fail(format!(
                "{} exponents for dimension {}",
                n.exp.len(),
                ma.dim()
            )));
        }
        if self.kind == Kind::Simple && !ma.is_simple() {
            return Err(fail("multiplicity other than one in a simple certificate".into()));
        }
        match &n.mv {
            Move::Empty => {
                if !ma.support().is_empty() {
                    return Err(fail("empty move on a nonempty arrangement".into()));
                }
                if n.exp != Exponents::zeros(ma.dim()) {
                    return Err(fail(format!("claimed {}, expected all zeros", n.exp)));
                }
            }
            Move::Rank2 => {
                if ma.rank() > 2 {
                    return Err(fail(format!("rank-two base of rank {}", ma.rank())));
                }
                let e = self.cache.rank2(ma).map_err(|e| fail(e.to_string()))?;
                if e != n.exp {
                    return Err(fail(format!("claimed {}, computed {e}", n.exp)));
                }
            }
            Move::Add {
                hyperplane,
                deleted,
                restricted,
            } => {
                let h = *hyperplane;
                if h >= ma.arrangement().len() || ma.mult()[h] == 0 {
                    return Err(fail(format!("hyperplane {h} is not in the support")));
                }
                let t = self.cache.triple(ma, h).map_err(|e| fail(e.to_string()))?;
                if !same_multi(&deleted.multi, &t.deletion) {
                    return Err(fail("deleted child is not the deletion".into()));
                }
                if !same_multi(&restricted.multi, &t.restriction) {
                    return Err(fail(format!(
                        "restricted child {} is not the restriction {}",
                        restricted.multi.display_q(),
                        t.restriction.display_q()
                    )));
                }
                match add_rule(&deleted.exp, &restricted.exp) {
                    Some(e) if e == n.exp => {}
                    Some(e) => return Err(fail(format!("claimed {}, addition gives {e}", n.exp))),
                    None => {
                        return Err(fail(format!(
                            "restriction exponents {} not contained in deletion exponents {}",
                            restricted.exp, deleted.exp
                        )))
                    }
                }
                self.node(deleted, &format!("{path}/deleted"))?;
                self.node(restricted, &format!("{path}/restricted"))?;
            }
            Move::Delete {
                hyperplane,
                full,
                restricted,
            } => {
                let h = *hyperplane;
                let fm = &full.multi;
                if h >= fm.arrangement().len() || fm.mult()[h] == 0 {
                    return Err(fail(format!("hyperplane {h} is not in the full support")));
                }
                let t = self.cache.triple(fm, h).map_err(|e| fail(e.to_string()))?;
                if !same_multi(ma, &t.deletion) {
                    return Err(fail("node is not the deletion of the full child".into()));
                }
                if !same_multi(&restricted.multi, &t.restriction) {
                    return Err(fail("restricted child is not the restriction".into()));
                }
                match delete_rule(&full.exp, &restricted.exp) {
                    Some(e) if e == n.exp => {}
                    Some(e) => return Err(fail(format!("claimed {}, deletion gives {e}", n.exp))),
                    None => {
                        return Err(fail(format!(
                            "restriction exponents {} not contained in {}",
                            restricted.exp, full.exp
                        )))
                    }
                }
                self.node(full, &format!("{path}/full"))?;
                self.node(restricted, &format!("{path}/restricted"))?;
            }
        }
        self.done.insert(Arc::as_ptr(n));
        Ok(())
    }
}

pub(crate) fn leaf(multi: Multiarrangement, exp: Exponents, mv: Move) -> Arc<Node> {
    Arc::new(Node { multi, exp, mv })
}

/// Base node for an empty or rank at most two multiarrangement.
pub(crate) fn base_node(ma: &Multiarrangement, cache: &mut Cache) -> Result<Option<Arc<Node>>> {
    if ma.support().is_empty() {
        return Ok(Some(leaf(ma.clone(), Exponents::zeros(ma.dim()), Move::Empty)));
    }
    if ma.rank() <= 2 {
        let e = cache.rank2(ma)?;
        return Ok(Some(leaf(ma.clone(), e, Move::Rank2)));
    }
    Ok(None)
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::Arrangement;

    fn boolean3() -> Multiarrangement {
        Multiarrangement::simple(
            Arrangement::from_ints(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap(),
        )
    }

    /// Boolean 3-arrangement: add z to the rank-two {x, y}.
    fn hand_built() -> Certificate {
        let ma = boolean3();
        let t = triple(&ma, 2).unwrap();
        let deleted = leaf(t.deletion.clone(), Exponents::new(vec![0, 1, 1]), Move::Rank2);
        let restricted = leaf(t.restriction.clone(), Exponents::new(vec![1, 1]), Move::Rank2);
        Certificate {
            kind: Kind::Simple,
            root: leaf(
                ma,
                Exponents::new(vec![1, 1, 1]),
                Move::Add {
                    hyperplane: 2,
                    deleted,
                    restricted,
                },
            ),
        }
    }

    #[test]
    fn hand_built_boolean_certificate() {
        let c = hand_built();
        assert_eq!(verify_cert(&c), Ok(()));
        assert_eq!(c.size(), 3);
    }

    #[test]
    fn perturbed_exponent_fails_at_that_node() {
        let c = hand_built();
        let Move::Add {
            hyperplane,
            deleted,
            restricted,
        } = &c.root.mv
        else {
            unreachable!()
        };
        let bad_restricted = leaf(
            restricted.multi.clone(),
            Exponents::new(vec![1, 2]),
            Move::Rank2,
        );
        let bad = Certificate {
            kind: Kind::Simple,
            root: leaf(
                c.root.multi.clone(),
                c.root.exp.clone(),
                Move::Add {
                    hyperplane: *hyperplane,
                    deleted: deleted.clone(),
                    restricted: bad_restricted,
                },
            ),
        };
        let err = verify_cert(&bad).unwrap_err();
        // containment is checked before descending, so the parent reports it
        assert_eq!(err.path, "root");
        let wrong_root = Certificate {
            kind: Kind::Simple,
            root: leaf(
                c.root.multi.clone(),
                Exponents::new(vec![1, 1, 2]),
                c.root.mv.clone(),
            ),
        };
        assert_eq!(verify_cert(&wrong_root).unwrap_err().path, "root");
    }

    #[test]
    fn exponent_rules() {
        let d = Exponents::new(vec![0, 1, 2]);
        let r = Exponents::new(vec![1, 2]);
        assert_eq!(add_rule(&d, &r), Some(Exponents::new(vec![1, 1, 2])));
        assert_eq!(delete_rule(&Exponents::new(vec![1, 1, 2]), &r), Some(d));
        assert_eq!(add_rule(&Exponents::new(vec![0, 0, 3]), &r), None);
    }
}
