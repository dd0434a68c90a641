//! Recursive freeness: additions and deletions, with deletions bounded.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::arrangement::{lattice, Arrangement, LinearForm};
use crate::dsolve::FreenessVerdict;
use crate::error::Result;
use crate::exactlin::{kernel_basis, RatMatrix};
use crate::multi::{Exponents, Multiarrangement};

use super::inductive::Searcher;
use super::{add_rule, base_node, delete_rule, leaf, Cache, Certificate, Kind, Move, Node};

#[derive(Clone, Debug)]
pub enum RecursiveOutcome {
    Found(Certificate),
    /// Nothing found using at most `budget` deletion moves per branch. Not a
    /// proof of non-membership.
    NotFoundWithinBudget { budget: u32 },
}

impl RecursiveOutcome {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            RecursiveOutcome::Found(c) => Some(c),
            RecursiveOutcome::NotFoundWithinBudget { .. } => None,
        }
    }
}

/// New hyperplanes tried per simple node.
const MAX_CANDIDATES: usize = 48;

struct Search {
    kind: Kind,
    cache: Cache,
    /// Best known result: a node, or the largest budget that failed.
    memo: HashMap<Multiarrangement, std::result::Result<Arc<Node>, u32>>,
    roots: HashMap<Arrangement, Option<Exponents>>,
}

impl Search {
    fn free_possible(&mut self, ma: &Multiarrangement) -> Result<bool> {
        if ma.is_simple() {
            if !self.roots.contains_key(ma.arrangement()) {
                let r = lattice(ma.arrangement())?
                    .char_poly()
                    .nonneg_integer_roots()
                    .map(Exponents::new);
                self.roots.insert(ma.arrangement().clone(), r);
            }
            return Ok(self.roots[ma.arrangement()].is_some());
        }
        Ok(!matches!(self.cache.oracle(ma), FreenessVerdict::NotFree(_)))
    }

    fn find(&mut self, ma: &Multiarrangement, budget: u32) -> Result<Option<Arc<Node>>> {
        match self.memo.get(ma) {
            Some(Ok(n)) => return Ok(Some(n.clone())),
            Some(Err(b)) if *b >= budget => return Ok(None),
            _ => {}
        }
        let r = self.find_uncached(ma, budget)?;
        match &r {
            Some(n) => self.memo.insert(ma.clone(), Ok(n.clone())),
            None => self.memo.insert(ma.clone(), Err(budget)),
        };
        Ok(r)
    }

    fn find_uncached(&mut self, ma: &Multiarrangement, budget: u32) -> Result<Option<Arc<Node>>> {
        if let Some(n) = base_node(ma, &mut self.cache)? {
            return Ok(Some(n));
        }
        if !self.free_possible(ma)? {
            return Ok(None);
        }
        for h in ma.support() {
            let t = self.cache.triple(ma, h)?;
            let Some(deleted) = self.find(&t.deletion, budget)? else {
                continue;
            };
            let Some(restricted) = self.find(&t.restriction, budget)? else {
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
        if budget == 0 {
            return Ok(None);
        }
        for (full, h) in self.enlargements(ma)? {
            if !self.free_possible(&full)? {
                continue;
            }
            let t = self.cache.triple(&full, h)?;
            let Some(restricted) = self.find(&t.restriction, budget - 1)? else {
                continue;
            };
            let Some(fnode) = self.find(&full, budget - 1)? else {
                continue;
            };
            if let Some(exp) = delete_rule(&fnode.exp, &restricted.exp) {
                return Ok(Some(leaf(
                    ma.clone(),
                    exp,
                    Move::Delete {
                        hyperplane: h,
                        full: fnode,
                        restricted,
                    },
                )));
            }
        }
        Ok(None)
    }

    /// Larger objects whose deletion at the returned index is `ma`.
    fn enlargements(&self, ma: &Multiarrangement) -> Result<Vec<(Multiarrangement, usize)>> {
        if self.kind == Kind::Multi {
            return ma
                .support()
                .into_iter()
                .map(|h| {
                    let mut m = ma.mult().to_vec();
                    m[h] += 1;
                    Ok((ma.with_mult(m)?, h))
                })
                .collect();
        }
        let a = ma.arrangement();
        Ok(new_hyperplanes(a)?
            .into_iter()
            .map(|f| {
                let mut forms = a.forms().to_vec();
                forms.push(f);
                let full = Arrangement::from_forms(a.dim(), forms).with_names(a.names().to_vec());
                (Multiarrangement::simple(full), a.len())
            })
            .collect())
    }
}

/// Hyperplanes not in `a` spanned by flats of rank `rank(a) - 1`, in
/// lexicographic order of the spanning tuples, at most `MAX_CANDIDATES`.
fn new_hyperplanes(a: &Arrangement) -> Result<Vec<LinearForm>> {
    let lat = lattice(a)?;
    let r = lat.rank();
    if r < 2 {
        return Ok(Vec::new());
    }
    let lines: Vec<_> = lat.by_rank(r - 1).iter().map(|x| x.basis()).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..r - 1).collect();
    if lines.len() < idx.len() {
        return Ok(out);
    }
    loop {
        let rows: Vec<_> = idx.iter().flat_map(|&i| lines[i].iter().cloned()).collect();
        let k = kernel_basis(&RatMatrix::from_rows(rows));
        if k.len() == 1 {
            if let Some(f) = LinearForm::new(&k[0]) {
                if a.index_of(&f).is_none() && seen.insert(f.clone()) {
                    out.push(f);
                    if out.len() == MAX_CANDIDATES {
                        break;
                    }
                }
            }
        }
        // next combination
        let n = lines.len();
        let m = idx.len();
        let Some(i) = (0..m).rev().find(|&i| idx[i] < n - m + i) else {
            break;
        };
        idx[i] += 1;
        for j in i + 1..m {
            idx[j] = idx[j - 1] + 1;
        }
    }
    Ok(out)
}

fn run(ma: &Multiarrangement, kind: Kind, budget: u32) -> Result<RecursiveOutcome> {
    let mut cache = Cache::default();
    if let Some(root) = Searcher::new(&mut cache).search(ma)? {
        return Ok(RecursiveOutcome::Found(Certificate { kind, root }));
    }
    let mut s = Search {
        kind,
        cache,
        memo: HashMap::new(),
        roots: HashMap::new(),
    };
    for b in 1..=budget {
        if let Some(root) = s.find(ma, b)? {
            return Ok(RecursiveOutcome::Found(Certificate { kind, root }));
        }
    }
    Ok(RecursiveOutcome::NotFoundWithinBudget { budget })
}

/// Inductive search first, then iterative deepening on the number of
/// deletion moves allowed along any branch. Deletion moves add a hyperplane
/// spanned by flats of corank one in the current lattice.
pub fn certify_recursive(a: &Arrangement, budget: u32) -> Result<RecursiveOutcome> {
    run(&Multiarrangement::simple(a.clone()), Kind::Simple, budget)
}

/// As `certify_recursive`; deletion moves raise one multiplicity by one.
pub fn certify_recursive_multi(ma: &Multiarrangement, budget: u32) -> Result<RecursiveOutcome> {
    run(ma, Kind::Multi, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::verify_cert;
    use crate::corpus::generate_spec;
    use crate::multi::triple;

    #[test]
    fn inductive_inputs_are_found() {
        for spec in ["boolean(3)", "braid(4)", "braid(3)"] {
            let a = generate_spec(spec).unwrap().arrangement;
            let out = certify_recursive(&a, 2).unwrap();
            assert_eq!(verify_cert(out.certificate().unwrap()), Ok(()), "{spec}");
        }
    }

    #[test]
    fn braid_plus_generic_line() {
        let a = Arrangement::from_ints(
            3,
            &[&[1, -1, 0], &[1, 0, -1], &[0, 1, -1], &[1, 2, 5]],
        )
        .unwrap();
        let out = certify_recursive(&a, 10).unwrap();
        let c = out.certificate().unwrap();
        assert_eq!(c.exponents(), &Exponents::new(vec![1, 1, 2]));
        assert_eq!(verify_cert(c), Ok(()));
    }

    #[test]
    fn non_free_runs_out_of_budget() {
        let a = generate_spec("xyz_xyz_sum").unwrap().arrangement;
        assert!(matches!(
            certify_recursive(&a, 3).unwrap(),
            RecursiveOutcome::NotFoundWithinBudget { budget: 3 }
        ));
    }

    #[test]
    fn hand_built_deletion_verifies() {
        // {x, y} as the deletion of the Boolean arrangement at z
        let b = Multiarrangement::simple(generate_spec("boolean(3)").unwrap().arrangement);
        let t = triple(&b, 2).unwrap();
        let mut cache = Cache::default();
        let full = Searcher::new(&mut cache).search(&b).unwrap().unwrap();
        let restricted = base_node(&t.restriction, &mut cache).unwrap().unwrap();
        let exp = delete_rule(&full.exp, &restricted.exp).unwrap();
        assert_eq!(exp, Exponents::new(vec![0, 1, 1]));
        let c = Certificate {
            kind: Kind::Simple,
            root: leaf(
                t.deletion.clone(),
                exp,
                Move::Delete {
                    hyperplane: 2,
                    full,
                    restricted,
                },
            ),
        };
        assert_eq!(verify_cert(&c), Ok(()));
        assert!(c.has_delete());
    }

    #[test]
    fn candidates_avoid_existing_hyperplanes() {
        let b = generate_spec("boolean(3)").unwrap().arrangement;
        assert!(new_hyperplanes(&b).unwrap().is_empty());
        // four generic lines: the three diagonals of the complete quadrilateral
        let a = generate_spec("xyz_xyz_sum").unwrap().arrangement;
        let c = new_hyperplanes(&a).unwrap();
        assert_eq!(c.len(), 3);
        assert!(c.iter().all(|f| a.index_of(f).is_none()));
    }
}
