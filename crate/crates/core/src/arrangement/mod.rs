//! Central hyperplane arrangements over the rationals.

mod charpoly;
mod io;
mod lattice;

pub use charpoly::UniPoly;
pub use io::{parse_text, write_text, ParsedFile};
pub use lattice::{lattice, Flat, IntersectionLattice};

use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{
    default_var_names, kernel_basis, normalize_direction, HomogPoly, RatMatrix, Rational,
};

/// A nonzero linear form, stored as a primitive integer vector whose first
/// nonzero entry is positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    coeffs: Vec<BigInt>,
}

impl LinearForm {
    /// Normalizes `raw`; `None` for the zero vector.
    pub fn new(raw: &[Rational]) -> Option<Self> {
        if raw.iter().all(Zero::is_zero) {
            return None;
        }
        Some(LinearForm {
            coeffs: normalize_direction(raw),
        })
    }

    pub fn from_ints(raw: &[i64]) -> Option<Self> {
        let r: Vec<Rational> = raw.iter().map(|&x| crate::exactlin::rat(x)).collect();
        Self::new(&r)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn to_rationals(&self) -> Vec<Rational> {
        self.coeffs
            .iter()
            .cloned()
            .map(Rational::from_integer)
            .collect()
    }

    /// Index of the first nonzero coefficient.
    pub fn pivot(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .expect("linear forms are nonzero")
    }

    pub fn eval(&self, v: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .zip(v)
            .fold(Rational::zero(), |acc, (a, x)| {
                acc + Rational::from_integer(a.clone()) * x
            })
    }

    pub fn to_poly(&self) -> HomogPoly {
        HomogPoly::linear(&self.to_rationals())
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> FormDisplay<'a> {
        FormDisplay { form: self, names }
    }

    /// Number of nonzero coefficients.
    pub fn support_size(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

pub struct FormDisplay<'a> {
    form: &'a LinearForm,
    names: &'a [String],
}

impl fmt::Display for FormDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, name) in self.form.coeffs.iter().zip(self.names) {
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
            let a = c.abs();
            if a.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{a}*{name}")?;
            }
            first = false;
        }
        Ok(())
    }
}

/// An ordered list of distinct hyperplanes in `Q^dim`. Variable names are
/// carried along for display only and play no part in equality.
#[derive(Clone, Debug)]
pub struct Arrangement {
    dim: usize,
    forms: Vec<LinearForm>,
    names: Vec<String>,
}

impl PartialEq for Arrangement {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.forms == other.forms
    }
}

impl Eq for Arrangement {}

impl Hash for Arrangement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.dim.hash(state);
        self.forms.hash(state);
    }
}

/// The result of restricting an arrangement to one of its flats.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub arrangement: Arrangement,
    /// For each hyperplane of the restriction, the parent hyperplanes whose
    /// intersection with the flat it is.
    pub above: Vec<Vec<usize>>,
    /// For each parent hyperplane, the restricted hyperplane it maps to, or
    /// `None` if it contains the flat.
    pub image: Vec<Option<usize>>,
    /// Basis vectors of the flat in parent coordinates; restricted coordinate
    /// `j` is the coefficient of `basis[j]`.
    pub basis: Vec<Vec<Rational>>,
}

/// Coordinates in which an arrangement only involves its first `rank` variables.
#[derive(Clone, Debug)]
pub struct EssentialCoords {
    pub rank: usize,
    /// Pivot columns of the reduced echelon form of the form matrix.
    pub pivots: Vec<usize>,
    /// Reduced echelon rows spanning the forms; new coordinate `i` is row `i`.
    pub rows: RatMatrix,
    /// Each form expressed in the `rank` new coordinates.
    pub forms: Vec<Vec<Rational>>,
}

impl EssentialCoords {
    /// The full invertible change of coordinates: the echelon rows followed by
    /// unit rows for the non-pivot columns.
    pub fn full_change(&self) -> RatMatrix {
        let l = self.rows.cols();
        let mut rows = self.rows.row_vecs();
        for c in (0..l).filter(|c| !self.pivots.contains(c)) {
            let mut e = vec![Rational::zero(); l];
            e[c] = Rational::one();
            rows.push(e);
        }
        RatMatrix::from_rows(rows)
    }
}

impl Arrangement {
    /// Normalizes and validates raw forms. Duplicates after normalization
    /// are an error.
    pub fn new(dim: usize, raw: &[Vec<Rational>]) -> Result<Self> {
        let mut forms: Vec<LinearForm> = Vec::with_capacity(raw.len());
        for (index, r) in raw.iter().enumerate() {
            if r.len() != dim {
                return Err(Error::DimensionMismatch {
                    index,
                    expected: dim,
                    found: r.len(),
                });
            }
            let f = LinearForm::new(r).ok_or(Error::ZeroForm { index })?;
            if let Some(first) = forms.iter().position(|g| *g == f) {
                return Err(Error::DuplicateHyperplane {
                    first,
                    second: index,
                });
            }
            forms.push(f);
        }
        Ok(Arrangement {
            dim,
            forms,
            names: default_var_names(dim),
        })
    }

    pub fn from_ints(dim: usize, raw: &[&[i64]]) -> Result<Self> {
        let r: Vec<Vec<Rational>> = raw
            .iter()
            .map(|row| row.iter().map(|&x| crate::exactlin::rat(x)).collect())
            .collect();
        Self::new(dim, &r)
    }

    /// Builds from already distinct normalized forms.
    pub fn from_forms(dim: usize, forms: Vec<LinearForm>) -> Self {
        debug_assert!(forms.iter().all(|f| f.dim() == dim));
        Arrangement {
            dim,
            forms,
            names: default_var_names(dim),
        }
    }

    pub fn empty(dim: usize) -> Self {
        Self::from_forms(dim, Vec::new())
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.dim, "one name per coordinate");
        self.names = names;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    pub fn form(&self, i: usize) -> &LinearForm {
        &self.forms[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, f: &LinearForm) -> Option<usize> {
        self.forms.iter().position(|g| g == f)
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index < self.forms.len() {
            Ok(())
        } else {
            Err(Error::NoSuchHyperplane {
                index,
                len: self.forms.len(),
            })
        }
    }

    /// `A \ {H_index}`.
    pub fn deletion(&self, index: usize) -> Result<Arrangement> {
        self.check_index(index)?;
        let mut out = self.clone();
        out.forms.remove(index);
        Ok(out)
    }

    /// The subarrangement on the given indices, in the given order.
    pub fn subarrangement(&self, indices: &[usize]) -> Arrangement {
        Arrangement {
            dim: self.dim,
            forms: indices.iter().map(|&i| self.forms[i].clone()).collect(),
            names: self.names.clone(),
        }
    }

    pub fn form_matrix(&self) -> RatMatrix {
        RatMatrix::from_rows(
            self.forms
                .iter()
                .map(LinearForm::to_rationals)
                .collect::<Vec<_>>(),
        )
    }

    /// Codimension of the center.
    pub fn rank(&self) -> usize {
        if self.forms.is_empty() {
            return 0;
        }
        self.form_matrix().rref().1.len()
    }

    pub fn essential_coords(&self) -> EssentialCoords {
        if self.forms.is_empty() {
            return EssentialCoords {
                rank: 0,
                pivots: Vec::new(),
                rows: RatMatrix::zeros(0, self.dim),
                forms: Vec::new(),
            };
        }
        let (r, pivots) = self.form_matrix().rref();
        let rows = RatMatrix::from_rows((0..pivots.len()).map(|i| r.row(i).to_vec()).collect());
        let forms = self
            .forms
            .iter()
            .map(|f| {
                let q = f.to_rationals();
                pivots.iter().map(|&p| q[p].clone()).collect()
            })
            .collect();
        EssentialCoords {
            rank: pivots.len(),
            pivots,
            rows,
            forms,
        }
    }

    /// Product of the defining forms.
    pub fn defining_polynomial(&self) -> HomogPoly {
        self.forms
            .iter()
            .fold(HomogPoly::one(self.dim), |acc, f| acc.mul(&f.to_poly()))
    }

    /// `A^{H_index}` together with its trace map.
    pub fn restriction(&self, index: usize) -> Result<Restriction> {
        self.check_index(index)?;
        Ok(self.restrict_to(&[index]))
    }

    /// Restriction to the intersection of the hyperplanes in `contained`,
    /// which must be the full set of hyperplanes containing that intersection.
    pub(crate) fn restrict_to(&self, contained: &[usize]) -> Restriction {
        let ann = self.subarrangement(contained).form_matrix();
        let basis = if contained.is_empty() {
            RatMatrix::identity(self.dim).row_vecs()
        } else {
            kernel_basis(&ann)
        };
        let k = basis.len();
        let free_cols: Vec<usize> = basis
            .iter()
            // canonical kernel vectors end at their free column
            .map(|v| v.iter().rposition(|x| !x.is_zero()).unwrap_or(0))
            .collect();
        let mut forms: Vec<LinearForm> = Vec::new();
        let mut above: Vec<Vec<usize>> = Vec::new();
        let mut image = vec![None; self.forms.len()];
        for (i, f) in self.forms.iter().enumerate() {
            if contained.contains(&i) {
                continue;
            }
            let restricted: Vec<Rational> = basis.iter().map(|b| f.eval(b)).collect();
            let Some(g) = LinearForm::new(&restricted) else {
                // contains the flat but was not listed
                continue;
            };
            let y = match forms.iter().position(|h| *h == g) {
                Some(y) => y,
                None => {
                    forms.push(g);
                    above.push(Vec::new());
                    forms.len() - 1
                }
            };
            above[y].push(i);
            image[i] = Some(y);
        }
        let names = free_cols.iter().map(|&c| self.names[c].clone()).collect();
        Restriction {
            arrangement: Arrangement {
                dim: k,
                forms,
                names,
            },
            above,
            image,
            basis,
        }
    }

    /// Indices of all hyperplanes containing the intersection of the given ones.
    pub fn closure(&self, seeds: &[usize]) -> Vec<usize> {
        if seeds.is_empty() {
            return Vec::new();
        }
        let (r, pivots) = self.subarrangement(seeds).form_matrix().rref();
        (0..self.forms.len())
            .filter(|&i| in_row_space(&r, &pivots, &self.forms[i].to_rationals()))
            .collect()
    }

    /// `A_X` for a flat of this arrangement.
    pub fn localization(&self, x: &Flat) -> Result<Arrangement> {
        if x.hyperplanes().iter().any(|&i| i >= self.forms.len())
            || self.closure(x.hyperplanes()) != x.hyperplanes()
        {
            return Err(Error::NotAFlat);
        }
        Ok(self.subarrangement(x.hyperplanes()))
    }

    /// Restriction `A^X` to a flat.
    pub fn restriction_to_flat(&self, x: &Flat) -> Result<Restriction> {
        if self.closure(x.hyperplanes()) != x.hyperplanes() {
            return Err(Error::NotAFlat);
        }
        Ok(self.restrict_to(x.hyperplanes()))
    }

    pub fn display_forms(&self) -> Vec<String> {
        self.forms
            .iter()
            .map(|f| f.display_with(&self.names).to_string())
            .collect()
    }
}

/// Whether `v` lies in the row space of a reduced echelon matrix.
pub(crate) fn in_row_space(r: &RatMatrix, pivots: &[usize], v: &[Rational]) -> bool {
    let mut w = v.to_vec();
    for (row, &p) in pivots.iter().enumerate() {
        if w[p].is_zero() {
            continue;
        }
        let c = w[p].clone();
        for (j, x) in w.iter_mut().enumerate() {
            let e = &r[(row, j)];
            if !e.is_zero() {
                *x -= &c * e;
            }
        }
    }
    w.iter().all(Zero::is_zero)
}
