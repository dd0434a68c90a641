use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Univariate integer polynomial in `t`, coefficients from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<BigInt>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// `prod_i (t - r_i)`.
    pub fn from_roots(roots: &[u32]) -> Self {
        let mut p = Self::from_i64(&[1]);
        for &r in roots {
            p = p.mul(&Self::from_i64(&[-(r as i64), 1]));
        }
        p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, t: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * t + c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = BigInt::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) - other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(Vec::new());
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    /// Exact quotient by a monic (or unit-leading) divisor over the integers;
    /// `None` if the division leaves a remainder.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(self.clone());
        }
        let lead = d.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return None;
        }
        let mut q = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..q.len()).rev() {
            let (c, r) = rem[k + dd].div_rem(&lead);
            if !r.is_zero() {
                return None;
            }
            for (i, di) in d.coeffs.iter().enumerate() {
                rem[k + i] -= &c * di;
            }
            q[k] = c;
        }
        rem.iter().all(Zero::is_zero).then(|| Self::new(q))
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.div_exact(self).is_some()
    }

    /// The nonnegative integer roots with multiplicity, if the polynomial
    /// splits completely as a product of `(t - e)` with `e >= 0`.
    pub fn nonneg_integer_roots(&self) -> Option<Vec<u32>> {
        let mut p = self.clone();
        let mut roots = Vec::new();
        let deg = p.degree()?;
        if !p.coeffs[deg].is_one() {
            return None;
        }
        'outer: while p.degree()? > 0 {
            // nonnegative roots sum to minus the subleading coefficient
            let bound = p.coeffs[p.coeffs.len() - 2].abs();
            let mut e = BigInt::zero();
            while e <= bound {
                if p.eval(&e).is_zero() {
                    let lin = Self::new(vec![-e.clone(), BigInt::one()]);
                    p = p.div_exact(&lin).expect("root divides");
                    roots.push(u32::try_from(&e).ok()?);
                    continue 'outer;
                }
                e += 1;
            }
            return None;
        }
        roots.sort_unstable();
        Some(roots)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}")?;
                    }
                    write!(f, "t")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_and_display() {
        let p = UniPoly::from_roots(&[0, 1, 2]);
        assert_eq!(p.to_string(), "t^3 - 3t^2 + 2t");
        assert_eq!(p.nonneg_integer_roots(), Some(vec![0, 1, 2]));
        let q = UniPoly::from_i64(&[-7, 12, -6, 1]);
        assert_eq!(q.nonneg_integer_roots(), None);
    }

    #[test]
    fn exact_division() {
        let p = UniPoly::from_roots(&[1, 2, 3]);
        let d = UniPoly::from_roots(&[1, 3]);
        assert_eq!(p.div_exact(&d), Some(UniPoly::from_roots(&[2])));
        assert!(UniPoly::from_roots(&[4]).div_exact(&d).is_none());
        assert!(!UniPoly::from_roots(&[5]).divides(&p));
    }
}
