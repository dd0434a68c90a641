//! Exhaustive memoized searches for inductive freeness.

use std::collections::HashMap;
use std::sync::Arc;

use crate::arrangement::{lattice, Arrangement};
use crate::dsolve::FreenessVerdict;
use crate::error::Result;
use crate::multi::{Exponents, Multiarrangement};

use super::{add_rule, base_node, leaf, Cache, Certificate, Kind, Move, Node};

/// Depth-first search over deletions in load order, memoized on the
/// multiarrangement. Pruning only uses necessary conditions for freeness, so
/// an exhausted search proves non-membership.
pub(crate) struct Searcher<'c> {
    pub(crate) cache: &'c mut Cache,
    memo: HashMap<Multiarrangement, Option<Arc<Node>>>,
    roots: HashMap<Arrangement, Option<Exponents>>,
}

impl<'c> Searcher<'c> {
    pub(crate) fn new(cache: &'c mut Cache) -> Self {
        Searcher {
            cache,
            memo: HashMap::new(),
            roots: HashMap::new(),
        }
    }

    /// Exponents forced by Terao factorization, or `None` when `chi` does not
    /// factor (so the arrangement is not free).
    fn chi_roots(&mut self, a: &Arrangement) -> Result<Option<Exponents>> {
        if let Some(r) = self.roots.get(a) {
            return Ok(r.clone());
        }
        let chi = lattice(a)?.char_poly();
        let r = chi.nonneg_integer_roots().map(Exponents::new);
        self.roots.insert(a.clone(), r.clone());
        Ok(r)
    }

    /// Exponents the node must have if it is free at all; `Err(())` when it
    /// is known not to be free.
    fn predicted(&mut self, ma: &Multiarrangement) -> Result<std::result::Result<Option<Exponents>, ()>> {
        if ma.is_simple() {
            return Ok(match self.chi_roots(ma.arrangement())? {
                Some(r) => Ok(Some(r)),
                None => Err(()),
            });
        }
        Ok(match self.cache.oracle(ma) {
            FreenessVerdict::Free { exponents, .. } => Ok(Some(exponents)),
            FreenessVerdict::NotFree(_) => Err(()),
            FreenessVerdict::Inconclusive { .. } => Ok(None),
        })
    }

    pub(crate) fn search(&mut self, ma: &Multiarrangement) -> Result<Option<Arc<Node>>> {
        if let Some(r) = self.memo.get(ma) {
            return Ok(r.clone());
        }
        let r = self.search_uncached(ma)?;
        self.memo.insert(ma.clone(), r.clone());
        Ok(r)
    }

    fn search_uncached(&mut self, ma: &Multiarrangement) -> Result<Option<Arc<Node>>> {
        if let Some(n) = base_node(ma, self.cache)? {
            return Ok(Some(n));
        }
        let predicted = match self.predicted(ma)? {
            Ok(p) => p,
            Err(()) => return Ok(None),
        };
        let order = ma.order();
        for h in ma.support() {
            let t = self.cache.triple(ma, h)?;
            if let Some(p) = &predicted {
                let r = t.restriction.order();
                if !p.as_slice().iter().any(|&e| e as u64 + r == order) {
                    continue;
                }
            }
            let Some(deleted) = self.search(&t.deletion)? else {
                continue;
            };
            if let Some(p) = &predicted {
                // the restriction must be exp(A) minus one entry
                let fits = p.as_slice().iter().any(|&e| {
                    p.without_one(e)
                        .is_some_and(|rest| rest.with(e.saturating_sub(1)) == deleted.exp)
                });
                if !fits {
                    continue;
                }
            }
            let Some(restricted) = self.search(&t.restriction)? else {
                continue;
            };
            if let Some(exp) = add_rule(&deleted.exp, &restricted.exp) {
                return Ok(Some(leaf(
                    ma.clone(),
                    exp,
                    Move::Add {
                        hyperplane: h,
                        deleted,
                        restricted,
                    },
                )));
            }
        }
        Ok(None)
    }
}

/// Inductive-freeness certificate of a simple arrangement, or `None` when
/// the arrangement is not inductively free.
pub fn certify_inductive(a: &Arrangement) -> Result<Option<Certificate>> {
    let mut cache = Cache::default();
    let mut s = Searcher::new(&mut cache);
    Ok(s
        .search(&Multiarrangement::simple(a.clone()))?
        .map(|root| Certificate {
            kind: Kind::Simple,
            root,
        }))
}

/// Why a hyperplane cannot start an addition at the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub hyperplane: usize,
    /// Order `|mu*|` of the Euler restriction at this hyperplane.
    pub restriction_order: u64,
    /// Orders compatible with the root exponents, `|mu| - e`.
    pub required: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct InductiveMultiReport {
    pub certificate: Option<Certificate>,
    /// Root verdict used for pruning.
    pub root_verdict: Option<FreenessVerdict>,
    /// Root hyperplanes excluded by exponent bookkeeping alone.
    pub obstructions: Vec<Obstruction>,
}

/// Inductive-freeness search for a multiarrangement. Base cases are empty and
/// rank at most two; when nothing is found the search is exhaustive.
pub fn certify_inductive_multi(ma: &Multiarrangement) -> Result<InductiveMultiReport> {
    let mut cache = Cache::default();
    let mut obstructions = Vec::new();
    let mut root_verdict = None;
    if ma.rank() > 2 && !ma.support().is_empty() {
        let v = cache.oracle(ma);
        if let FreenessVerdict::Free { exponents, .. } = &v {
            let order = ma.order();
            let mut required: Vec<u64> = exponents
                .as_slice()
                .iter()
                .map(|&e| order - e as u64)
                .collect();
            required.dedup();
            for h in ma.support() {
                let r = cache.triple(ma, h)?.restriction.order();
                if !required.contains(&r) {
                    obstructions.push(Obstruction {
                        hyperplane: h,
                        restriction_order: r,
                        required: required.clone(),
                    });
                }
            }
        }
        root_verdict = Some(v);
    }
    let mut s = Searcher::new(&mut cache);
    let certificate = s.search(ma)?.map(|root| Certificate {
        kind: Kind::Multi,
        root,
    });
    Ok(InductiveMultiReport {
        certificate,
        root_verdict,
        obstructions,
    })
}
