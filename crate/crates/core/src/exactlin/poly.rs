use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::{format_rational, Rational};

/// Exponent vector of a monomial.
pub type Monomial = Vec<u32>;

/// Homogeneous polynomial over the rationals.
///
/// The zero polynomial keeps whatever degree it was created with; that tag is
/// only a convention and is ignored by equality on nonzero values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomogPoly {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Monomial, Rational>,
}

#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
#[error("not divisible: division {index} by the linear form left a nonzero remainder")]
pub struct NotDivisible {
    /// 1-based index of the failing division.
    pub index: u32,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum DetError {
    #[error("matrix is not square ({rows} rows, row {row} has {len} entries)")]
    NotSquare { rows: usize, row: usize, len: usize },
    #[error("entries disagree on the number of variables")]
    VariableMismatch,
}

/// All exponent vectors of total degree `d` in `nvars` variables, in
/// descending lexicographic order (`x_1^d` first).
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    fn rec(i: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
    }
    if nvars == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    rec(0, d, &mut vec![0; nvars], &mut out);
    out
}

impl HomogPoly {
    pub fn zero(nvars: usize, degree: u32) -> Self {
        HomogPoly {
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars, 0);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        let mut p = Self::zero(nvars, 1);
        p.terms.insert(m, Rational::one());
        p
    }

    /// The linear form `sum_i coeffs[i] x_i`.
    pub fn linear(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n, 1);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut m = vec![0; n];
                m[i] = 1;
                p.terms.insert(m, c.clone());
            }
        }
        p
    }

    /// Builds a polynomial from terms; panics if a monomial has the wrong
    /// length or degree.
    pub fn from_terms(
        nvars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut p = Self::zero(nvars, degree);
        for (m, c) in terms {
            assert_eq!(m.len(), nvars, "monomial length");
            assert_eq!(m.iter().sum::<u32>(), degree, "inhomogeneous term");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[u32]) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars, self.degree);
        }
        HomogPoly {
            nvars: self.nvars,
            degree: self.degree,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, other.degree, "adding polynomials of different degree");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = Self::zero(self.nvars, self.degree + other.degree);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        let mut s = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                for _ in 0..e {
                    t *= x;
                }
            }
            s += t;
        }
        s
    }

    /// Substitutes `x_var := replacement`, where `replacement` is linear.
    pub fn substitute(&self, var: usize, replacement: &HomogPoly) -> Self {
        assert_eq!(replacement.nvars, self.nvars);
        let max_e = self.terms.keys().map(|m| m[var]).max().unwrap_or(0);
        let mut powers = vec![Self::one(self.nvars)];
        for k in 1..=max_e as usize {
            powers.push(powers[k - 1].mul(replacement));
        }
        let mut out = Self::zero(self.nvars, self.degree);
        for (m, c) in &self.terms {
            let mut rest = m.clone();
            let e = rest[var] as usize;
            rest[var] = 0;
            let deg: u32 = rest.iter().sum();
            let mono = HomogPoly::from_terms(self.nvars, deg, [(rest, c.clone())]);
            let t = mono.mul(&powers[e]);
            for (mm, cc) in t.terms {
                out.add_term(mm, cc);
            }
        }
        out
    }

    /// True when the polynomial vanishes identically on `ker(form)`, tested by
    /// substituting the pivot variable of `form` (its first nonzero coefficient).
    pub fn vanishes_on_hyperplane(&self, form: &[Rational]) -> bool {
        let v = form
            .iter()
            .position(|c| !c.is_zero())
            .expect("zero linear form");
        let a = &form[v];
        let rest: Vec<Rational> = form
            .iter()
            .enumerate()
            .map(|(j, c)| if j == v { Rational::zero() } else { -c / a })
            .collect();
        self.substitute(v, &HomogPoly::linear(&rest)).is_zero()
    }

    /// Exact division by a linear form. The remainder of dividing by
    /// `form` in its pivot variable is the polynomial obtained by the
    /// substitution of [`vanishes_on_hyperplane`](Self::vanishes_on_hyperplane),
    /// so `None` is returned exactly when that substitution is nonzero.
    pub fn div_linear(&self, form: &[Rational]) -> Option<Self> {
        assert_eq!(form.len(), self.nvars);
        let v = form
            .iter()
            .position(|c| !c.is_zero())
            .expect("zero linear form");
        if self.is_zero() {
            return Some(Self::zero(self.nvars, self.degree.saturating_sub(1)));
        }
        if self.degree == 0 {
            return None;
        }
        let a = &form[v];
        let mut rem = self.terms.clone();
        let mut q = Self::zero(self.nvars, self.degree - 1);
        for k in (1..=self.degree).rev() {
            let layer: Vec<(Monomial, Rational)> = rem
                .iter()
                .filter(|(m, _)| m[v] == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect();
            for (m, c) in layer {
                rem.remove(&m);
                let mut qm = m;
                qm[v] -= 1;
                let qc = &c / a;
                for (j, lj) in form.iter().enumerate() {
                    if j == v || lj.is_zero() {
                        continue;
                    }
                    let mut rm = qm.clone();
                    rm[j] += 1;
                    let d = &qc * lj;
                    let e = rem.entry(rm).or_insert_with(Rational::zero);
                    *e -= d;
                }
                q.add_term(qm, qc);
            }
            rem.retain(|_, c| !c.is_zero());
        }
        if rem.is_empty() {
            Some(q)
        } else {
            None
        }
    }

    /// `Some(c)` with `self = c * other` when `other` is nonzero and the two
    /// are proportional.
    pub fn scalar_multiple_of(&self, other: &Self) -> Option<Rational> {
        let (m0, c0) = other.terms.iter().next()?;
        if self.terms.len() != other.terms.len() {
            return None;
        }
        let c = self.terms.get(m0)? / c0;
        if c.is_zero() {
            return None;
        }
        other
            .terms
            .iter()
            .all(|(m, b)| self.terms.get(m).is_some_and(|a| *a == b * &c))
            .then_some(c)
    }

    /// Human-readable form using the supplied variable names.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

/// Default variable names: `x, y, z` for up to three variables, else `x1..xn`.
pub fn default_var_names(n: usize) -> Vec<String> {
    if n <= 3 {
        ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a HomogPoly,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            let is_const = m.iter().all(|&e| e == 0);
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut first = true;
            if !abs.is_one() || is_const {
                write!(f, "{}", format_rational(&abs))?;
                first = false;
            }
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}", self.names[i])?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_var_names(self.nvars);
        write!(f, "{}", self.display_with(&names))
    }
}

/// Divides `p` by `form^m` through `m` successive exact divisions.
pub fn divide_by_linear_power(
    p: &HomogPoly,
    form: &[Rational],
    m: u32,
) -> Result<HomogPoly, NotDivisible> {
    let mut q = p.clone();
    for index in 1..=m {
        q = q.div_linear(form).ok_or(NotDivisible { index })?;
    }
    Ok(q)
}

/// Determinant of a square matrix of homogeneous polynomials, by Laplace
/// expansion with memoized minors over column subsets.
pub fn poly_det(m: &[Vec<HomogPoly>]) -> Result<HomogPoly, DetError> {
    let n = m.len();
    for (row, r) in m.iter().enumerate() {
        if r.len() != n {
            return Err(DetError::NotSquare {
                rows: n,
                row,
                len: r.len(),
            });
        }
    }
    if n == 0 {
        return Ok(HomogPoly::one(0));
    }
    let nvars = m[0][0].nvars;
    if m.iter().flatten().any(|p| p.nvars != nvars) {
        return Err(DetError::VariableMismatch);
    }
    assert!(n < 20, "determinant too large for subset expansion");
    // minors[mask] = det(rows 0..popcount(mask), columns in mask)
    let mut minors: std::collections::HashMap<u32, HomogPoly> = std::collections::HashMap::new();
    minors.insert(0, HomogPoly::one(nvars));
    for (k, row) in m.iter().enumerate().take(n) {
        let mut next = std::collections::HashMap::new();
        for (&mask, minor) in &minors {
            if minor.is_zero() {
                continue;
            }
            for (c, entry_kc) in row.iter().enumerate().take(n) {
                if mask & (1 << c) != 0 || entry_kc.is_zero() {
                    continue;
                }
                // position of c inside mask ∪ {c}
                let pos = (mask & ((1 << c) - 1)).count_ones() as usize;
                let term = entry_kc.mul(minor);
                let term = if (k + pos) % 2 == 1 {
                    term.scale(&-Rational::one())
                } else {
                    term
                };
                let entry = next
                    .entry(mask | (1 << c))
                    .or_insert_with(|| HomogPoly::zero(nvars, term.degree));
                *entry = entry.add(&term);
            }
        }
        minors = next;
    }
    let full = (1u32 << n) - 1;
    Ok(minors
        .remove(&full)
        .unwrap_or_else(|| HomogPoly::zero(nvars, 0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{rat, RatMatrix};
    use proptest::prelude::*;

    fn x() -> HomogPoly {
        HomogPoly::var(3, 0)
    }
    fn y() -> HomogPoly {
        HomogPoly::var(3, 1)
    }
    fn z() -> HomogPoly {
        HomogPoly::var(3, 2)
    }

    #[test]
    fn monomial_enumeration() {
        let ms = monomials_of_degree(3, 2);
        assert_eq!(ms.len(), 6);
        assert_eq!(ms[0], vec![2, 0, 0]);
        assert_eq!(ms[5], vec![0, 0, 2]);
        assert_eq!(monomials_of_degree(4, 5).len(), 56);
    }

    #[test]
    fn det_of_diagonals() {
        let zero = |d| HomogPoly::zero(3, d);
        let d = poly_det(&[vec![x(), zero(1)], vec![zero(1), y()]]).unwrap();
        assert_eq!(d, x().mul(&y()));
        let d = poly_det(&[vec![x(), x()], vec![x(), x()]]).unwrap();
        assert!(d.is_zero());
        let d = poly_det(&[
            vec![x().pow(2), zero(1), zero(1)],
            vec![zero(2), y(), zero(1)],
            vec![zero(2), zero(1), z()],
        ])
        .unwrap();
        assert_eq!(d, x().pow(2).mul(&y()).mul(&z()));
    }

    #[test]
    fn det_rejects_ragged() {
        let err = poly_det(&[vec![x(), y()], vec![x()]]).unwrap_err();
        assert!(matches!(err, DetError::NotSquare { row: 1, .. }));
    }

    #[test]
    fn divisibility_examples() {
        let x2y = x().pow(2).mul(&y());
        let q = divide_by_linear_power(&x2y, &[rat(1), rat(0), rat(0)], 2).unwrap();
        assert_eq!(q, y());

        let xy = x().add(&y());
        let q = divide_by_linear_power(&xy.pow(3), &[rat(1), rat(1), rat(0)], 3).unwrap();
        assert_eq!(q, HomogPoly::one(3));

        let err = divide_by_linear_power(&x2y, &[rat(1), rat(1), rat(0)], 1).unwrap_err();
        assert_eq!(err, NotDivisible { index: 1 });
        assert!(!x2y.vanishes_on_hyperplane(&[rat(1), rat(1), rat(0)]));
    }

    #[test]
    fn second_division_can_fail() {
        // x^2 y (x - z) is divisible by (x - z) once only
        let p = x().pow(2).mul(&y()).mul(&x().sub(&z()));
        let err = divide_by_linear_power(&p, &[rat(1), rat(0), rat(-1)], 2).unwrap_err();
        assert_eq!(err.index, 2);
    }

    #[test]
    fn display_is_readable() {
        let p = x().pow(2).sub(&x().mul(&y()).scale(&rat(2)));
        assert_eq!(p.to_string(), "x^2 - 2*x*y");
    }

    fn small_poly(nvars: usize, degree: u32) -> impl Strategy<Value = HomogPoly> {
        let ms = monomials_of_degree(nvars, degree);
        let n = ms.len();
        proptest::collection::vec(-3i64..=3, n).prop_map(move |cs| {
            HomogPoly::from_terms(nvars, degree, ms.iter().cloned().zip(cs.into_iter().map(rat)))
        })
    }

    proptest! {
        #[test]
        fn successful_division_reconstructs(
            q in small_poly(3, 2),
            form in proptest::collection::vec(-3i64..=3, 3),
            m in 1u32..=3,
        ) {
            prop_assume!(form.iter().any(|&c| c != 0));
            let f: Vec<Rational> = form.iter().copied().map(rat).collect();
            let p = q.mul(&HomogPoly::linear(&f).pow(m));
            let back = divide_by_linear_power(&p, &f, m).unwrap();
            prop_assert_eq!(back.mul(&HomogPoly::linear(&f).pow(m)), p);
        }

        #[test]
        fn division_agrees_with_substitution(
            p in small_poly(3, 3),
            form in proptest::collection::vec(-2i64..=2, 3),
        ) {
            prop_assume!(form.iter().any(|&c| c != 0));
            let f: Vec<Rational> = form.iter().copied().map(rat).collect();
            prop_assert_eq!(p.div_linear(&f).is_some(), p.vanishes_on_hyperplane(&f));
        }

        #[test]
        fn det_agrees_with_pointwise_det(
            entries in proptest::collection::vec(small_poly(3, 1), 9),
            point in proptest::collection::vec(-4i64..=4, 3),
        ) {
            let m: Vec<Vec<HomogPoly>> = entries.chunks(3).map(|c| c.to_vec()).collect();
            let d = poly_det(&m).unwrap();
            let pt: Vec<Rational> = point.into_iter().map(rat).collect();
            let scalar = RatMatrix::from_rows(
                m.iter().map(|r| r.iter().map(|p| p.eval(&pt)).collect()).collect(),
            );
            prop_assert_eq!(d.eval(&pt), scalar.det());
        }
    }
}
