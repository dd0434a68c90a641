use num_traits::{One, Zero};

use super::modular::IntSystem;
use super::Rational;

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

/// Matrices with more entries than this go through the multi-modular solver.
const MODULAR_THRESHOLD: usize = 4_000;

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds a matrix from rows. Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            data.extend(row);
        }
        RatMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| super::rat(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| super::dot(self.row(i), v))
            .collect()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    /// Pivots are chosen as the first nonzero entry at or below the current row.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = Rational::one() / &self[(r, c)];
            for j in c..self.cols {
                let v = &self[(r, j)] * &inv;
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in c..self.cols {
                    if self[(r, j)].is_zero() {
                        continue;
                    }
                    let d = &f * &self[(r, j)];
                    self[(i, j)] -= d;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_in_place();
        (m, p)
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut aug = RatMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        let piv = aug.rref_in_place();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut inv = RatMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    /// Scalar determinant by elimination. Panics if not square.
    pub fn det(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] / &piv;
                for j in c..n {
                    let d = &f * &m[(c, j)];
                    m[(i, j)] -= d;
                }
            }
        }
        det
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

/// Basis of the right null space `{v : m v = 0}`.
///
/// The basis is the one read off the reduced row echelon form: one vector per
/// free column `j`, equal to 1 at `j`, 0 at every other free column. It is
/// unique for a given matrix, so the result does not depend on which internal
/// solver produced it.
pub fn kernel_basis(m: &RatMatrix) -> Vec<Vec<Rational>> {
    if m.rows * m.cols > MODULAR_THRESHOLD {
        return IntSystem::from_rat_matrix(m).kernel_basis();
    }
    kernel_basis_exact(m)
}

pub(crate) fn kernel_basis_exact(m: &RatMatrix) -> Vec<Vec<Rational>> {
    let (r, pivots) = m.rref();
    kernel_from_rref(&r, &pivots)
}

pub(crate) fn kernel_from_rref(r: &RatMatrix, pivots: &[usize]) -> Vec<Vec<Rational>> {
    let cols = r.cols;
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (row, &p) in pivots.iter().enumerate() {
            let e = &r[(row, free)];
            if !e.is_zero() {
                v[p] = -e.clone();
            }
        }
        basis.push(v);
    }
    basis
}

pub fn rank(m: &RatMatrix) -> usize {
    if m.rows * m.cols > MODULAR_THRESHOLD {
        return m.cols - IntSystem::from_rat_matrix(m).kernel_basis().len();
    }
    m.rref().1.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{rat, ratio};

    #[test]
    fn inverse_roundtrip() {
        let m = RatMatrix::from_i64_rows(&[&[2, 1, 0], &[0, 1, 3], &[1, 0, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), RatMatrix::identity(3));
        assert!(RatMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(kernel_basis(&RatMatrix::identity(3)).is_empty());
    }

    #[test]
    fn kernel_of_zero_matrix_is_standard_basis() {
        let k = kernel_basis(&RatMatrix::zeros(2, 3));
        assert_eq!(k.len(), 3);
        for (i, v) in k.iter().enumerate() {
            for (j, x) in v.iter().enumerate() {
                assert_eq!(*x, if i == j { rat(1) } else { rat(0) });
            }
        }
    }

    #[test]
    fn single_relation() {
        let k = kernel_basis(&RatMatrix::from_i64_rows(&[&[1, 1]]));
        assert_eq!(k, vec![vec![rat(-1), rat(1)]]);
        // scaling by -1 gives the (1, -1) direction of the same line
        let m = RatMatrix::from_i64_rows(&[&[1, 1]]);
        assert!(m.mul_vec(&[rat(1), rat(-1)]).iter().all(Zero::is_zero));
    }

    #[test]
    fn determinant_matches_cofactor() {
        let m = RatMatrix::from_rows(vec![
            vec![rat(2), rat(-1), ratio(1, 2)],
            vec![rat(0), rat(3), rat(1)],
            vec![rat(4), rat(1), rat(-2)],
        ]);
        // 2*(3*-2 - 1*1) - (-1)*(0*-2 - 1*4) + 1/2*(0*1 - 3*4) = -14 - 4 - 6
        assert_eq!(m.det(), rat(-24));
    }

    #[test]
    fn large_kernel_matches_exact_route() {
        // 60 x 90 matrix with a structured kernel
        let rows: Vec<Vec<Rational>> = (0..60)
            .map(|i| {
                (0..90)
                    .map(|j| {
                        let v = ((i * 7 + j * 13) % 11) as i64 - 5;
                        if (i + j) % 4 == 0 {
                            ratio(v, 3)
                        } else {
                            rat(v * ((j % 3) as i64))
                        }
                    })
                    .collect()
            })
            .collect();
        let m = RatMatrix::from_rows(rows);
        let fast = kernel_basis(&m);
        let exact = kernel_basis_exact(&m);
        assert_eq!(fast, exact);
        for v in &fast {
            assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
    }
}
