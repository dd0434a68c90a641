//! Multiarrangements: multiplicities, exponent multisets, Ziegler and Euler
//! multiplicities, and the distinguished derivation `theta_mu`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::arrangement::{Arrangement, LinearForm, Restriction};
use crate::dsolve::{graded_piece, Derivation};
use crate::error::{Error, Result};
use crate::exactlin::{HomogPoly, Rational};

/// Sorted multiset of exponents, zeros included.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponents(Vec<u32>);

impl Exponents {
    pub fn new(mut v: Vec<u32>) -> Self {
        v.sort_unstable();
        Exponents(v)
    }

    pub fn zeros(n: usize) -> Self {
        Exponents(vec![0; n])
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn min(&self) -> Option<u32> {
        self.0.first().copied()
    }

    /// Multiset containment `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Exponents) -> bool {
        let mut rest = other.0.clone();
        for e in &self.0 {
            match rest.iter().position(|x| x == e) {
                Some(p) => {
                    rest.remove(p);
                }
                None => return false,
            }
        }
        true
    }

    /// `other \ self` as a single value when `self ⊆ other` and they differ
    /// by exactly one element.
    pub fn extra_over(&self, other: &Exponents) -> Option<u32> {
        if other.len() != self.len() + 1 || !self.is_subset_of(other) {
            return None;
        }
        let mut rest = other.0.clone();
        for e in &self.0 {
            let p = rest.iter().position(|x| x == e)?;
            rest.remove(p);
        }
        rest.pop()
    }

    pub fn with(&self, e: u32) -> Exponents {
        let mut v = self.0.clone();
        v.push(e);
        Exponents::new(v)
    }

    pub fn without_one(&self, e: u32) -> Option<Exponents> {
        let p = self.0.iter().position(|&x| x == e)?;
        let mut v = self.0.clone();
        v.remove(p);
        Some(Exponents(v))
    }

    /// Pads with zeros to length `n`.
    pub fn padded(&self, n: usize) -> Exponents {
        let mut v = self.0.clone();
        while v.len() < n {
            v.push(0);
        }
        Exponents::new(v)
    }

    /// Whether the two multisets have equal length and differ in exactly one
    /// entry, by exactly one.
    pub fn differs_by_one_step(&self, other: &Exponents) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let (a, b) = if self.sum() > other.sum() {
            (self, other)
        } else {
            (other, self)
        };
        if a.sum() != b.sum() + 1 {
            return false;
        }
        a.0.iter().enumerate().any(|(i, &e)| {
            e > 0 && {
                let mut v = a.0.clone();
                v[i] -= 1;
                Exponents::new(v) == *b
            }
        })
    }
}

impl fmt::Display for Exponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// An arrangement with a nonnegative multiplicity per hyperplane.
/// Hyperplanes of multiplicity zero are kept in place but impose nothing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multiarrangement {
    arr: Arrangement,
    mult: Vec<u32>,
}

impl Multiarrangement {
    pub fn new(arr: Arrangement, mult: Vec<u32>) -> Result<Self> {
        if mult.len() != arr.len() {
            return Err(Error::Precondition(format!(
                "{} multiplicities for {} hyperplanes",
                mult.len(),
                arr.len()
            )));
        }
        Ok(Multiarrangement { arr, mult })
    }

    pub fn simple(arr: Arrangement) -> Self {
        let n = arr.len();
        Multiarrangement {
            arr,
            mult: vec![1; n],
        }
    }

    pub fn constant(arr: Arrangement, c: u32) -> Self {
        let n = arr.len();
        Multiarrangement {
            arr,
            mult: vec![c; n],
        }
    }

    pub fn arrangement(&self) -> &Arrangement {
        &self.arr
    }

    pub fn mult(&self) -> &[u32] {
        &self.mult
    }

    pub fn dim(&self) -> usize {
        self.arr.dim()
    }

    /// `|mu|`.
    pub fn order(&self) -> u64 {
        self.mult.iter().map(|&m| m as u64).sum()
    }

    pub fn is_simple(&self) -> bool {
        self.mult.iter().all(|&m| m == 1)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.mult.len()).filter(|&i| self.mult[i] > 0).collect()
    }

    /// The multiarrangement with zero-multiplicity hyperplanes dropped.
    pub fn support_multi(&self) -> Multiarrangement {
        let s = self.support();
        Multiarrangement {
            arr: self.arr.subarrangement(&s),
            mult: s.iter().map(|&i| self.mult[i]).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.arr.subarrangement(&self.support()).rank()
    }

    /// `Q(A, mu)`.
    pub fn defining_polynomial(&self) -> HomogPoly {
        let mut q = HomogPoly::one(self.dim());
        for (f, &m) in self.arr.forms().iter().zip(&self.mult) {
            q = q.mul(&f.to_poly().pow(m));
        }
        q
    }

    /// Positive multiplicities keyed by form, independent of hyperplane order.
    pub fn profile(&self) -> BTreeMap<LinearForm, u32> {
        self.arr
            .forms()
            .iter()
            .zip(&self.mult)
            .filter(|(_, &m)| m > 0)
            .map(|(f, &m)| (f.clone(), m))
            .collect()
    }

    /// `Q` as a product of powers of linear forms, e.g. `x^3y^3(x+y)`.
    pub fn display_q(&self) -> String {
        let mut s = String::new();
        for (f, &m) in self.arr.forms().iter().zip(&self.mult) {
            if m == 0 {
                continue;
            }
            let body: String = f
                .display_with(self.arr.names())
                .to_string()
                .chars()
                .filter(|c| !c.is_whitespace())
                .collect();
            if f.support_size() == 1 && !body.contains('*') {
                s.push_str(&body);
            } else {
                s.push('(');
                s.push_str(&body);
                s.push(')');
            }
            if m > 1 {
                s.push_str(&format!("^{m}"));
            }
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }

    pub fn with_mult(&self, mult: Vec<u32>) -> Result<Multiarrangement> {
        Multiarrangement::new(self.arr.clone(), mult)
    }

    /// Deletion per the triple convention: remove `H0` when its multiplicity
    /// is one, otherwise decrement it.
    pub fn deletion(&self, h0: usize) -> Result<Multiarrangement> {
        self.check_positive(h0)?;
        if self.mult[h0] == 1 {
            let mut mult = self.mult.clone();
            mult.remove(h0);
            Ok(Multiarrangement {
                arr: self.arr.deletion(h0)?,
                mult,
            })
        } else {
            let mut mult = self.mult.clone();
            mult[h0] -= 1;
            Ok(Multiarrangement {
                arr: self.arr.clone(),
                mult,
            })
        }
    }

    fn check_positive(&self, h0: usize) -> Result<()> {
        self.arr.check_index(h0)?;
        if self.mult[h0] == 0 {
            return Err(Error::Precondition(format!(
                "hyperplane {h0} has multiplicity zero"
            )));
        }
        Ok(())
    }
}

/// `(A^{H0}, kappa)` with the restriction data it came from.
#[derive(Clone, Debug)]
pub struct ZieglerRestriction {
    pub multi: Multiarrangement,
    pub restriction: Restriction,
}

/// Ziegler's canonical multiplicity: `kappa(Y)` counts the hyperplanes of
/// `A \ {H0}` lying above `Y`.
pub fn ziegler_multiplicity(a: &Arrangement, h0: usize) -> Result<ZieglerRestriction> {
    let restriction = a.restriction(h0)?;
    let mult = restriction.above.iter().map(|v| v.len() as u32).collect();
    Ok(ZieglerRestriction {
        multi: Multiarrangement {
            arr: restriction.arrangement.clone(),
            mult,
        },
        restriction,
    })
}

/// Deletion and restriction (with Euler multiplicity) of a multiarrangement.
#[derive(Clone, Debug)]
pub struct Triple {
    pub deletion: Multiarrangement,
    pub restriction: Multiarrangement,
    /// Restriction of the support of `(A, mu)` to `H0`; indices refer to the
    /// support, in order.
    pub trace: Restriction,
    /// Support indices, mapping positions in `trace` back to `A`.
    pub support: Vec<usize>,
}

pub fn triple(ma: &Multiarrangement, h0: usize) -> Result<Triple> {
    ma.check_positive(h0)?;
    let deletion = ma.deletion(h0)?;
    let support = ma.support();
    let sup = ma.support_multi();
    let h0s = support.iter().position(|&i| i == h0).expect("h0 in support");
    let trace = sup.arr.restriction(h0s)?;
    let mut mult = Vec::with_capacity(trace.above.len());
    if sup.is_simple() {
        // theta_E has degree one and is not divisible by alpha_0
        mult.resize(trace.above.len(), 1);
    } else {
        for y in 0..trace.above.len() {
            mult.push(euler_at(&sup, h0s, &trace.above[y])?);
        }
    }
    Ok(Triple {
        deletion,
        restriction: Multiarrangement {
            arr: trace.arrangement.clone(),
            mult,
        },
        trace,
        support,
    })
}

/// Euler multiplicity of `(A, mu)` with respect to `H0` at the restricted
/// hyperplane `y` of `A^{H0}` (indices into the restriction of the support).
pub fn euler_multiplicity(ma: &Multiarrangement, h0: usize, y: usize) -> Result<u32> {
    ma.check_positive(h0)?;
    let support = ma.support();
    let sup = ma.support_multi();
    let h0s = support.iter().position(|&i| i == h0).expect("h0 in support");
    let trace = sup.arr.restriction(h0s)?;
    let above = trace.above.get(y).ok_or(Error::NotAFlat)?;
    euler_at(&sup, h0s, above)
}

fn euler_at(sup: &Multiarrangement, h0: usize, above: &[usize]) -> Result<u32> {
    let mut idx = vec![h0];
    idx.extend_from_slice(above);
    let local = sup.arr.subarrangement(&idx);
    let ess = local.essential_coords();
    debug_assert_eq!(ess.rank, 2);
    let arr2 = Arrangement::new(2, &ess.forms)?;
    let m2 = Multiarrangement {
        arr: arr2,
        mult: idx.iter().map(|&i| sup.mult[i]).collect(),
    };
    let total = m2.order() as u32;
    let e1 = first_nonzero_degree(&m2);
    let e2 = total - e1;
    if e1 == e2 {
        return Ok(e1);
    }
    let alpha0 = &ess.forms[0];
    let piece = graded_piece(&m2, e1);
    let outside = piece
        .iter()
        .any(|theta| theta.coeffs().iter().any(|c| c.div_linear(alpha0).is_none()));
    Ok(if outside { e1 } else { e2 })
}

fn first_nonzero_degree(ma: &Multiarrangement) -> u32 {
    (0..=ma.order() as u32)
        .find(|&d| !graded_piece(ma, d).is_empty())
        .expect("rank two modules have a generator of degree at most |mu|")
}

/// Exponents of a multiarrangement of rank at most two, padded with zeros
/// to the ambient dimension.
pub fn rank2_exponents(ma: &Multiarrangement) -> Result<Exponents> {
    let sup = ma.support_multi();
    let ess = sup.arr.essential_coords();
    let l = ma.dim();
    let ex = match ess.rank {
        0 => Vec::new(),
        1 => vec![sup.order() as u32],
        2 => {
            let m2 = Multiarrangement {
                arr: Arrangement::new(2, &ess.forms)?,
                mult: sup.mult.clone(),
            };
            let e1 = first_nonzero_degree(&m2);
            vec![e1, sup.order() as u32 - e1]
        }
        r => {
            return Err(Error::Precondition(format!(
                "rank-two exponents requested for rank {r}"
            )))
        }
    };
    Ok(Exponents::new(ex).padded(l))
}

/// `theta_mu = (prod alpha_H^{mu(H)-1}) theta_E`; requires `mu >= 1` on the
/// support, which holds by construction.
pub fn theta_mu(ma: &Multiarrangement) -> Derivation {
    let l = ma.dim();
    let mut f = HomogPoly::one(l);
    for (form, &m) in ma.arr.forms().iter().zip(&ma.mult) {
        if m > 1 {
            f = f.mul(&form.to_poly().pow(m - 1));
        }
    }
    Derivation::new((0..l).map(|i| f.mul(&HomogPoly::var(l, i))).collect())
}

/// Multiplicity `m0` on `H0` and one elsewhere.
pub fn delta_multiplicity(a: &Arrangement, h0: usize, m0: u32) -> Result<Multiarrangement> {
    a.check_index(h0)?;
    if m0 < 1 {
        return Err(Error::Precondition("m0 must be at least 1".into()));
    }
    let mut mult = vec![1; a.len()];
    mult[h0] = m0;
    Ok(Multiarrangement {
        arr: a.clone(),
        mult,
    })
}

/// Looks up a form of `a` after transporting it; used when matching
/// hyperplanes between coordinate systems.
pub fn find_form(a: &Arrangement, raw: &[Rational]) -> Option<usize> {
    if raw.iter().all(Zero::is_zero) {
        return None;
    }
    a.index_of(&LinearForm::new(raw)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arr(dim: usize, rows: &[&[i64]]) -> Arrangement {
        Arrangement::from_ints(dim, rows).unwrap()
    }

    #[test]
    fn exponent_multisets() {
        let a = Exponents::new(vec![5, 1, 5]);
        assert_eq!(a.as_slice(), &[1, 5, 5]);
        assert!(Exponents::new(vec![5, 5]).is_subset_of(&a));
        assert!(!Exponents::new(vec![5, 5, 5]).is_subset_of(&a));
        assert_eq!(Exponents::new(vec![1, 5]).extra_over(&a), Some(5));
        assert!(a.differs_by_one_step(&Exponents::new(vec![1, 4, 5])));
        assert!(!a.differs_by_one_step(&Exponents::new(vec![1, 4, 4])));
        assert_eq!(a.to_string(), "{1, 5, 5}");
    }

    #[test]
    fn ziegler_on_small_examples() {
        let b = arr(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let z = ziegler_multiplicity(&b, 2).unwrap();
        assert_eq!(z.multi.mult(), &[1, 1]);
        let c = arr(3, &[&[0, 0, 1], &[1, 0, 0], &[1, 0, 1], &[1, 0, -1]]);
        let z = ziegler_multiplicity(&c, 0).unwrap();
        assert_eq!(z.multi.mult(), &[3]);
        assert_eq!(z.multi.display_q(), "x^3");
    }

    #[test]
    fn rank_two_exponents() {
        let xy = arr(2, &[&[1, 0], &[0, 1]]);
        let m = Multiarrangement::new(xy.clone(), vec![3, 4]).unwrap();
        assert_eq!(rank2_exponents(&m).unwrap().as_slice(), &[3, 4]);
        let a3 = arr(2, &[&[1, 0], &[0, 1], &[1, 1]]);
        let m = Multiarrangement::new(a3.clone(), vec![2, 2, 1]).unwrap();
        assert_eq!(rank2_exponents(&m).unwrap().as_slice(), &[2, 3]);
        let m = Multiarrangement::new(a3, vec![2, 2, 2]).unwrap();
        assert_eq!(rank2_exponents(&m).unwrap().sum(), 6);
    }

    #[test]
    fn simple_euler_multiplicity_is_one() {
        let a = arr(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0], &[0, 1, 1]]);
        let t = triple(&Multiarrangement::simple(a), 3).unwrap();
        assert!(t.restriction.mult().iter().all(|&m| m == 1));
    }

    #[test]
    fn decrement_branch_of_deletion() {
        let a = arr(2, &[&[1, 0], &[0, 1]]);
        let m = Multiarrangement::new(a, vec![3, 1]).unwrap();
        let t = triple(&m, 0).unwrap();
        assert_eq!(t.deletion.mult(), &[2, 1]);
        assert_eq!(t.deletion.arrangement().len(), 2);
    }

    #[test]
    fn theta_mu_degrees() {
        let a = arr(2, &[&[1, 0], &[0, 1]]);
        let m = Multiarrangement::new(a.clone(), vec![2, 1]).unwrap();
        let t = theta_mu(&m);
        assert_eq!(t.degree(), 2);
        let x = HomogPoly::var(2, 0);
        let y = HomogPoly::var(2, 1);
        assert_eq!(t.coeffs()[0], x.mul(&x));
        assert_eq!(t.coeffs()[1], x.mul(&y));
        assert_eq!(theta_mu(&Multiarrangement::simple(a)).degree(), 1);
    }

    #[test]
    fn delta_multiplicity_on_boolean() {
        let a = arr(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let d = delta_multiplicity(&a, 0, 4).unwrap();
        assert_eq!(d.display_q(), "x^4yz");
        assert!(delta_multiplicity(&a, 0, 0).is_err());
        assert!(delta_multiplicity(&a, 0, 1).unwrap().is_simple());
    }
}
