//! Additive freeness: chains of free objects growing by one hyperplane or one
//! unit of multiplicity at a time, starting from the empty arrangement.

use std::collections::HashSet;

use crate::arrangement::{lattice, Arrangement};
use crate::dsolve::FreenessVerdict;
use crate::error::{Error, Result};
use crate::multi::{Exponents, Multiarrangement};

use super::Cache;

/// One step of a filtration: the multiplicity after incrementing
/// `hyperplane`, with the oracle verdict on it.
#[derive(Clone, Debug)]
pub struct FilterStep {
    pub hyperplane: usize,
    pub mult: Vec<u32>,
    pub verdict: FreenessVerdict,
}

/// `mu_0 = 0 < mu_1 < ... < mu_n = mu` with `|mu_i| = i`.
#[derive(Clone, Debug)]
pub struct FreeFiltration {
    pub target: Multiarrangement,
    pub steps: Vec<FilterStep>,
}

impl FreeFiltration {
    /// Hyperplane incremented at each step.
    pub fn order(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.hyperplane).collect()
    }

    pub fn final_exponents(&self) -> Option<&Exponents> {
        self.steps.last().and_then(|s| s.verdict.exponents())
    }

    pub fn all_free(&self) -> bool {
        self.steps.iter().all(|s| s.verdict.is_free())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct AdditiveOptions {
    /// Maximum number of oracle calls before giving up.
    pub budget: u64,
}

impl Default for AdditiveOptions {
    fn default() -> Self {
        AdditiveOptions { budget: 20_000 }
    }
}

#[derive(Clone, Debug)]
pub enum AdditiveOutcome {
    Found(FreeFiltration),
    /// Every chain was ruled out; a proof of non-membership.
    NotFound { oracle_calls: u64 },
    /// The budget ran out or some step was inconclusive.
    NotFoundWithinBudget { oracle_calls: u64 },
}

impl AdditiveOutcome {
    pub fn filtration(&self) -> Option<&FreeFiltration> {
        match self {
            AdditiveOutcome::Found(f) => Some(f),
            _ => None,
        }
    }
}

struct Search<'a> {
    base: &'a Multiarrangement,
    target: &'a [u32],
    cache: Cache,
    dead: HashSet<Vec<u32>>,
    calls: u64,
    budget: u64,
    exhausted: bool,
    inconclusive: bool,
}

impl Search<'_> {
    /// `Some(verdict)` for a state that may be on a chain, `None` when it is
    /// ruled out before calling the oracle.
    fn check(&mut self, mult: &[u32]) -> Result<Option<FreenessVerdict>> {
        let ma = self.base.with_mult(mult.to_vec())?;
        if mult.iter().all(|&m| m <= 1) {
            // Terao factorization for the simple case
            let sub = ma.support_multi();
            if lattice(sub.arrangement())?.char_poly().nonneg_integer_roots().is_none() {
                return Ok(None);
            }
        }
        if self.calls >= self.budget {
            self.exhausted = true;
            return Ok(None);
        }
        self.calls += 1;
        Ok(Some(self.cache.oracle(&ma.support_multi())))
    }

    fn dfs(&mut self, state: &mut Vec<u32>, steps: &mut Vec<FilterStep>) -> Result<bool> {
        if state.as_slice() == self.target {
            return Ok(true);
        }
        if self.dead.contains(state) {
            return Ok(false);
        }
        for h in 0..state.len() {
            if state[h] >= self.target[h] {
                continue;
            }
            state[h] += 1;
            if !self.dead.contains(state) {
                match self.check(state)? {
                    Some(v @ FreenessVerdict::Free { .. }) => {
                        steps.push(FilterStep {
                            hyperplane: h,
                            mult: state.clone(),
                            verdict: v,
                        });
                        if self.dfs(state, steps)? {
                            return Ok(true);
                        }
                        steps.pop();
                    }
                    Some(FreenessVerdict::Inconclusive { .. }) => self.inconclusive = true,
                    _ => {}
                }
            }
            state[h] -= 1;
            if self.exhausted {
                return Ok(false);
            }
        }
        self.dead.insert(state.clone());
        Ok(false)
    }
}

fn run(ma: &Multiarrangement, opts: AdditiveOptions) -> Result<AdditiveOutcome> {
    let mut s = Search {
        base: ma,
        target: ma.mult(),
        cache: Cache::default(),
        dead: HashSet::new(),
        calls: 0,
        budget: opts.budget,
        exhausted: false,
        inconclusive: false,
    };
    let mut state = vec![0; ma.mult().len()];
    let mut steps = Vec::new();
    if s.dfs(&mut state, &mut steps)? {
        return Ok(AdditiveOutcome::Found(FreeFiltration {
            target: ma.clone(),
            steps,
        }));
    }
    Ok(if s.exhausted || s.inconclusive {
        AdditiveOutcome::NotFoundWithinBudget {
            oracle_calls: s.calls,
        }
    } else {
        AdditiveOutcome::NotFound {
            oracle_calls: s.calls,
        }
    })
}

/// Searches for an order adding the hyperplanes of `a` one at a time with
/// every prefix free.
pub fn certify_additive(a: &Arrangement, opts: AdditiveOptions) -> Result<AdditiveOutcome> {
    run(&Multiarrangement::simple(a.clone()), opts)
}

/// Free filtration of multiplicities from zero up to `mu`.
pub fn additive_filtration_multi(
    ma: &Multiarrangement,
    opts: AdditiveOptions,
) -> Result<AdditiveOutcome> {
    run(ma, opts)
}

fn replay(ma: &Multiarrangement, incs: &[usize]) -> Result<std::result::Result<FreeFiltration, FilterStep>> {
    let n = ma.mult().len();
    let mut state = vec![0u32; n];
    for &h in incs {
        if h >= n {
            return Err(Error::NoSuchHyperplane { index: h, len: n });
        }
        state[h] += 1;
    }
    if state.as_slice() != ma.mult() {
        return Err(Error::Precondition(
            "the increments do not add up to the target multiplicity".into(),
        ));
    }
    let mut cache = Cache::default();
    let mut state = vec![0u32; n];
    let mut steps = Vec::with_capacity(incs.len());
    for &h in incs {
        state[h] += 1;
        let v = cache.oracle(&ma.with_mult(state.clone())?.support_multi());
        let step = FilterStep {
            hyperplane: h,
            mult: state.clone(),
            verdict: v,
        };
        if !step.verdict.is_free() {
            return Ok(Err(step));
        }
        steps.push(step);
    }
    Ok(Ok(FreeFiltration {
        target: ma.clone(),
        steps,
    }))
}

/// Checks a user-supplied hyperplane order. `Ok(Err(step))` reports the
/// first prefix that is not certified free.
pub fn verify_additive_order(
    a: &Arrangement,
    order: &[usize],
) -> Result<std::result::Result<FreeFiltration, FilterStep>> {
    replay(&Multiarrangement::simple(a.clone()), order)
}

/// Checks a sequence of multiplicity increments from zero to `mu`.
pub fn verify_multi_order(
    ma: &Multiarrangement,
    increments: &[usize],
) -> Result<std::result::Result<FreeFiltration, FilterStep>> {
    replay(ma, increments)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::generate_spec;

    #[test]
    fn boolean_has_length_three() {
        let a = generate_spec("boolean(3)").unwrap().arrangement;
        let out = certify_additive(&a, AdditiveOptions::default()).unwrap();
        let f = out.filtration().unwrap();
        assert_eq!(f.steps.len(), 3);
        assert_eq!(f.order(), vec![0, 1, 2]);
        assert_eq!(f.final_exponents(), Some(&Exponents::new(vec![1, 1, 1])));
    }

    #[test]
    fn non_free_is_exhaustive_not_found() {
        let a = generate_spec("xyz_xyz_sum").unwrap().arrangement;
        let out = certify_additive(&a, AdditiveOptions::default()).unwrap();
        assert!(matches!(out, AdditiveOutcome::NotFound { .. }));
    }

    #[test]
    fn tiny_budget_is_not_a_proof() {
        let a = generate_spec("braid(4)").unwrap().arrangement;
        let out = certify_additive(&a, AdditiveOptions { budget: 1 }).unwrap();
        assert!(matches!(out, AdditiveOutcome::NotFoundWithinBudget { .. }));
    }

    #[test]
    fn verify_order_reports_first_failure() {
        let a = generate_spec("xyz_xyz_sum").unwrap().arrangement;
        let failed = verify_additive_order(&a, &[0, 1, 2, 3]).unwrap().unwrap_err();
        assert_eq!(failed.mult, vec![1, 1, 1, 1]);
        assert!(verify_additive_order(&a, &[0, 1]).is_err());
    }

    #[test]
    fn multi_filtration_reaches_target() {
        let ma = generate_spec("mult_xxyyz").unwrap().multi();
        let out = additive_filtration_multi(&ma, AdditiveOptions::default()).unwrap();
        let f = out.filtration().unwrap();
        assert_eq!(f.steps.len() as u64, ma.order());
        assert_eq!(f.final_exponents(), Some(&Exponents::new(vec![2, 2, 3])));
        let replayed = verify_multi_order(&ma, &f.order()).unwrap().unwrap();
        assert!(replayed.all_free());
    }
}
