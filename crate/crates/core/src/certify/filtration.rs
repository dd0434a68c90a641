//! Filtrations of free multiplicities driven by `theta_mu`.

use crate::dsolve::{is_minimal_generator, FreenessVerdict};
use crate::error::Result;
use crate::multi::{theta_mu, Exponents, Multiarrangement};

use super::{precondition, Cache};

/// Oracle verdict on one sampled multiplicity.
#[derive(Clone, Debug)]
pub struct SampleCheck {
    pub mult: Vec<u32>,
    pub verdict: FreenessVerdict,
}

/// Sufficient conditions for every `(A', nu)`, `1 <= nu <= mu'`, to be free
/// after deleting a hyperplane of multiplicity one.
#[derive(Clone, Debug)]
pub struct DeletionConditions {
    pub hyperplane: usize,
    pub exponents: Exponents,
    pub min_exp: u32,
    /// `|mu|`.
    pub order: u64,
    /// `|A'|`, hyperplanes left in the support after the deletion.
    pub deletion_size: u64,
    /// `|mu*|` of the Euler restriction.
    pub restriction_order: u64,
    /// `min exp(A, mu) = |mu| - |A'|`.
    pub condition_i: bool,
    /// `theta_mu` is a minimal generator of its degree.
    pub theta_in_basis: bool,
    /// `theta_in_basis` and `|A'| != |mu*|`.
    pub condition_ii: bool,
    pub deletion_verdict: FreenessVerdict,
    /// Samples `nu` on the support of `A'`, in support order.
    pub samples: Vec<SampleCheck>,
}

impl DeletionConditions {
    /// The deletion is free and one of the two conditions holds.
    pub fn applies(&self) -> bool {
        self.deletion_verdict.is_free() && (self.condition_i || self.condition_ii)
    }

    pub fn samples_free(&self) -> bool {
        self.samples.iter().all(|s| s.verdict.is_free())
    }
}

fn sample_mults(top: &[u32]) -> Vec<Vec<u32>> {
    let ones = vec![1; top.len()];
    let mut out = vec![ones.clone(), top.to_vec()];
    for i in 0..top.len() {
        if top[i] > 1 {
            let mut up = ones.clone();
            up[i] = top[i];
            let mut down = top.to_vec();
            down[i] = 1;
            out.push(up);
            out.push(down);
        }
    }
    out.sort();
    out.dedup();
    out
}

pub fn check_free_deletion_conditions(ma: &Multiarrangement, h0: usize) -> Result<DeletionConditions> {
    let mut cache = Cache::default();
    let exponents = match cache.oracle(ma) {
        FreenessVerdict::Free { exponents, .. } => exponents,
        v => return Err(precondition(format!("the multiarrangement is not known to be free ({v})"))),
    };
    ma.arrangement().check_index(h0)?;
    if ma.mult()[h0] != 1 {
        return Err(precondition(format!(
            "hyperplane {h0} has multiplicity {}, expected 1",
            ma.mult()[h0]
        )));
    }
    let t = cache.triple(ma, h0)?;
    let min_exp = Exponents::min(&exponents).unwrap_or(0);
    let order = ma.order();
    let deletion_size = ma.support().len() as u64 - 1;
    let restriction_order = t.restriction.order();
    let condition_i = min_exp as u64 + deletion_size == order;
    let theta_in_basis = is_minimal_generator(ma, &theta_mu(ma));
    let condition_ii = theta_in_basis && deletion_size != restriction_order;
    let deleted = t.deletion.support_multi();
    let deletion_verdict = cache.oracle(&deleted);
    let samples = sample_mults(deleted.mult())
        .into_iter()
        .map(|m| {
            let v = cache.oracle(&deleted.with_mult(m.clone())?);
            Ok(SampleCheck { mult: m, verdict: v })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DeletionConditions {
        hyperplane: h0,
        exponents,
        min_exp,
        order,
        deletion_size,
        restriction_order,
        condition_i,
        theta_in_basis,
        condition_ii,
        deletion_verdict,
        samples,
    })
}

/// One multiplicity on the filtration from `1` to `mu`.
#[derive(Clone, Debug)]
pub struct ThetaStep {
    /// Hyperplane incremented to reach this step; `None` for `1`.
    pub hyperplane: Option<usize>,
    pub mult: Vec<u32>,
    pub predicted: Exponents,
    /// Oracle verdict when the step was sampled.
    pub observed: Option<FreenessVerdict>,
}

impl ThetaStep {
    /// Not sampled, or sampled and free with the predicted exponents.
    pub fn consistent(&self) -> bool {
        match &self.observed {
            None => true,
            Some(v) => v.exponents() == Some(&self.predicted),
        }
    }
}

#[derive(Clone, Debug)]
pub enum ThetaFiltration {
    /// `min exp(A, mu) != 1 + |mu| - |A|`.
    NotApplicable { min_exp: u32, trigger: u64 },
    Applicable { min_exp: u32, steps: Vec<ThetaStep> },
}

impl ThetaFiltration {
    pub fn steps(&self) -> &[ThetaStep] {
        match self {
            ThetaFiltration::NotApplicable { .. } => &[],
            ThetaFiltration::Applicable { steps, .. } => steps,
        }
    }
}

/// Steps checked by the oracle when the filtration is long.
const MAX_CHECKED: usize = 32;

/// When `theta_mu` has minimal degree, every `1 <= nu <= mu` is free with
/// exponents `{1 + |nu| - |A|}` plus the other exponents of `(A, mu)`. Builds
/// the filtration in load order and checks every step (or an even sample of
/// at most 32 steps).
pub fn theta_basis_filtration(ma: &Multiarrangement) -> Result<ThetaFiltration> {
    let ma = ma.support_multi();
    let mut cache = Cache::default();
    let exponents = match cache.oracle(&ma) {
        FreenessVerdict::Free { exponents, .. } => exponents,
        v => return Err(precondition(format!("the multiarrangement is not known to be free ({v})"))),
    };
    let size = ma.arrangement().len() as u64;
    let min_exp = Exponents::min(&exponents).unwrap_or(0);
    let trigger = 1 + ma.order() - size;
    if min_exp as u64 != trigger {
        return Ok(ThetaFiltration::NotApplicable { min_exp, trigger });
    }
    let rest = exponents.without_one(min_exp).expect("min is present");
    let mut mult = vec![1u32; ma.mult().len()];
    let mut steps = vec![ThetaStep {
        hyperplane: None,
        mult: mult.clone(),
        predicted: rest.with(1),
        observed: None,
    }];
    for h in 0..mult.len() {
        while mult[h] < ma.mult()[h] {
            mult[h] += 1;
            let extra: u64 = mult.iter().map(|&m| m as u64).sum::<u64>() + 1 - size;
            steps.push(ThetaStep {
                hyperplane: Some(h),
                mult: mult.clone(),
                predicted: rest.with(extra as u32),
                observed: None,
            });
        }
    }
    let n = steps.len();
    let stride = n.div_ceil(MAX_CHECKED).max(1);
    for (i, step) in steps.iter_mut().enumerate() {
        if i % stride == 0 || i + 1 == n {
            step.observed = Some(cache.oracle(&ma.with_mult(step.mult.clone())?));
        }
    }
    Ok(ThetaFiltration::Applicable { min_exp, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::generate_spec;
    use crate::multi::delta_multiplicity;

    #[test]
    fn first_example_neither_condition() {
        let ma = generate_spec("mult_xxyyz").unwrap().multi();
        let r = check_free_deletion_conditions(&ma, 3).unwrap();
        assert_eq!(r.min_exp, 2);
        assert_eq!((r.order, r.deletion_size, r.restriction_order), (7, 4, 4));
        assert!(!r.condition_i && !r.condition_ii);
        assert_eq!(r.deletion_verdict.exponents(), Some(&Exponents::new(vec![2, 2, 2])));
        assert!(r.samples_free());
    }

    #[test]
    fn second_example_conclusion_fails() {
        let ma = generate_spec("mult_xxyyzz").unwrap().multi();
        let r = check_free_deletion_conditions(&ma, 3).unwrap();
        assert_eq!(r.min_exp, 3);
        assert_eq!((r.order, r.deletion_size, r.restriction_order), (10, 6, 6));
        assert!(!r.condition_i && !r.condition_ii);
        assert!(r.samples.iter().any(|s| s.mult.iter().all(|&m| m == 1) && s.verdict.is_not_free()));
    }

    #[test]
    fn boolean_delta_meets_a_condition() {
        let a = generate_spec("boolean(3)").unwrap().arrangement;
        let ma = delta_multiplicity(&a, 0, 3).unwrap();
        let r = check_free_deletion_conditions(&ma, 1).unwrap();
        assert!(r.condition_i || r.condition_ii);
        assert!(r.applies() && r.samples_free());
    }

    #[test]
    fn preconditions() {
        let ma = generate_spec("mult_xxyyz").unwrap().multi();
        assert!(check_free_deletion_conditions(&ma, 0).is_err());
        let bad = Multiarrangement::simple(generate_spec("xyz_xyz_sum").unwrap().arrangement);
        assert!(check_free_deletion_conditions(&bad, 0).is_err());
    }

    #[test]
    fn simple_free_is_a_single_step() {
        let a = generate_spec("boolean(3)").unwrap().arrangement;
        let f = theta_basis_filtration(&Multiarrangement::simple(a)).unwrap();
        assert_eq!(f.steps().len(), 1);
        assert!(f.steps()[0].consistent());
    }

    #[test]
    fn boolean_delta_is_not_applicable() {
        let a = generate_spec("boolean(3)").unwrap().arrangement;
        let ma = delta_multiplicity(&a, 2, 4).unwrap();
        assert!(matches!(
            theta_basis_filtration(&ma).unwrap(),
            ThetaFiltration::NotApplicable { min_exp: 1, trigger: 4 }
        ));
    }
}
