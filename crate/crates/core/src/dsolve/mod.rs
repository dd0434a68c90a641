//! Graded pieces of the derivation module `D(A, mu)`, minimal generators,
//! Saito's criterion and a three-valued freeness oracle.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arrangement::LinearForm;
use crate::exactlin::{
    divide_by_linear_power, monomials_of_degree, poly_det, HomogPoly, IntSystem, Monomial,
    rank, RatMatrix, Rational,
};
use crate::multi::{Exponents, Multiarrangement};

/// `sum_i f_i D_i` with homogeneous coefficients of a common degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    coeffs: Vec<HomogPoly>,
    degree: u32,
}

impl Derivation {
    pub fn new(coeffs: Vec<HomogPoly>) -> Self {
        let degree = coeffs
            .iter()
            .find(|c| !c.is_zero())
            .or(coeffs.first())
            .map_or(0, HomogPoly::degree);
        Derivation { coeffs, degree }
    }

    pub fn coeffs(&self) -> &[HomogPoly] {
        &self.coeffs
    }

    /// Polynomial degree.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(HomogPoly::is_zero)
    }

    /// `theta(alpha)` for a linear form given by its coefficients.
    pub fn apply(&self, form: &[Rational]) -> HomogPoly {
        let mut out = HomogPoly::zero(self.nvars(), self.degree);
        for (c, f) in form.iter().zip(&self.coeffs) {
            if !c.is_zero() {
                out = out.add(&f.scale(c));
            }
        }
        out
    }

    pub fn mul_poly(&self, p: &HomogPoly) -> Derivation {
        Derivation::new(self.coeffs.iter().map(|c| c.mul(p)).collect())
    }

    pub fn display_with(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .zip(names)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, n)| format!("({})*D_{n}", c.display_with(names)))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Whether `theta(alpha_H)` is divisible by `alpha_H^{mu(H)}` for every `H`.
pub fn is_member(ma: &Multiarrangement, theta: &Derivation) -> bool {
    ma.arrangement()
        .forms()
        .iter()
        .zip(ma.mult())
        .filter(|(_, &m)| m > 0)
        .all(|(f, &m)| {
            let r = f.to_rationals();
            divide_by_linear_power(&theta.apply(&r), &r, m).is_ok()
        })
}

/// Knobs for the graded solver. Reversing the monomial order changes which
/// echelon representatives are produced but none of the intrinsic data.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolverOptions {
    pub reverse_monomials: bool,
}

/// A basis of `D(A, mu)_d` as coefficient vectors, in reduced echelon form.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub degree: u32,
    nvars: usize,
    monomials: Vec<Monomial>,
    /// Vectors of length `nvars * monomials.len()`; entry `i * nm + k` is the
    /// coefficient of monomial `k` in `f_i`.
    vectors: Vec<Vec<Rational>>,
    /// The unit column of each vector.
    free: Vec<usize>,
}

impl GradedPiece {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn derivation(&self, k: usize) -> Derivation {
        vector_to_derivation(self.nvars, self.degree, &self.monomials, &self.vectors[k])
    }

    pub fn derivations(&self) -> Vec<Derivation> {
        (0..self.dim()).map(|k| self.derivation(k)).collect()
    }
}

fn vector_to_derivation(nvars: usize, d: u32, monos: &[Monomial], v: &[Rational]) -> Derivation {
    let nm = monos.len();
    Derivation::new(
        (0..nvars)
            .map(|i| {
                HomogPoly::from_terms(
                    nvars,
                    d,
                    monos
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| !v[i * nm + k].is_zero())
                        .map(|(k, m)| (m.clone(), v[i * nm + k].clone())),
                )
            })
            .collect(),
    )
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Appends the divisibility conditions of one hyperplane to `sys`.
///
/// With `v` the pivot variable of `lambda`, substitute
/// `x_v = (y - L) / lambda_v` where `L = sum_{j != v} lambda_j x_j`.
/// `lambda^m` divides `theta(lambda)` iff every term of `y`-degree below `m`
/// vanishes; multiplying through by `lambda_v^d` keeps everything integral.
fn push_conditions(
    sys: &mut IntSystem,
    form: &LinearForm,
    m: u32,
    d: u32,
    monos: &[Monomial],
    nvars: usize,
) {
    let lam = form.coeffs();
    let v = form.pivot();
    let lv = &lam[v];
    let neg_l: Vec<Rational> = (0..nvars)
        .map(|j| {
            if j == v {
                Rational::zero()
            } else {
                Rational::from_integer(-lam[j].clone())
            }
        })
        .collect();
    let neg_l = HomogPoly::linear(&neg_l);
    let mut powers = vec![HomogPoly::one(nvars)];
    for k in 1..=d as usize {
        powers.push(powers[k - 1].mul(&neg_l));
    }
    let mut lv_pows = vec![BigInt::one()];
    for k in 1..=d as usize {
        lv_pows.push(&lv_pows[k - 1] * lv);
    }
    let mut targets: HashMap<Monomial, usize> = HashMap::new();
    let mut rows: Vec<Vec<(usize, BigInt)>> = Vec::new();
    let nm = monos.len();
    for (k, mono) in monos.iter().enumerate() {
        let e = mono[v];
        let mut rest = mono.clone();
        rest[v] = 0;
        for t in 0..=e.min(m.saturating_sub(1)) {
            let base = binomial(e, t) * &lv_pows[(d - e) as usize];
            for (pm, pc) in powers[(e - t) as usize].terms() {
                let mut target: Monomial = rest.iter().zip(pm).map(|(a, b)| a + b).collect();
                target[v] = t;
                let row = *targets.entry(target).or_insert_with(|| {
                    rows.push(Vec::new());
                    rows.len() - 1
                });
                let c = &base * pc.to_integer();
                for (i, li) in lam.iter().enumerate() {
                    if !li.is_zero() {
                        rows[row].push((i * nm + k, li * &c));
                    }
                }
            }
        }
    }
    for r in rows {
        sys.push_row(r);
    }
}

/// Solves for `D(A, mu)_d`.
pub fn solve_piece(ma: &Multiarrangement, d: u32, opts: SolverOptions) -> GradedPiece {
    let nvars = ma.dim();
    let mut monomials = monomials_of_degree(nvars, d);
    if opts.reverse_monomials {
        monomials.reverse();
    }
    let nm = monomials.len();
    let mut sys = IntSystem::new(nvars * nm);
    for (f, &m) in ma.arrangement().forms().iter().zip(ma.mult()) {
        if m > 0 {
            push_conditions(&mut sys, f, m, d, &monomials, nvars);
        }
    }
    let vectors = sys.kernel_basis();
    let free = vectors
        .iter()
        .map(|v| v.iter().rposition(|x| !x.is_zero()).expect("nonzero"))
        .collect();
    GradedPiece {
        degree: d,
        nvars,
        monomials,
        vectors,
        free,
    }
}

/// Basis of `D(A, mu)_d`.
pub fn graded_piece(ma: &Multiarrangement, d: u32) -> Vec<Derivation> {
    solve_piece(ma, d, SolverOptions::default()).derivations()
}

pub fn graded_dim(ma: &Multiarrangement, d: u32) -> usize {
    solve_piece(ma, d, SolverOptions::default()).dim()
}

/// Coordinates of `x_j * theta` (theta from `prev`) on the unit columns of `cur`.
fn shifted_coords(prev: &GradedPiece, cur: &GradedPiece) -> Vec<Vec<Rational>> {
    let nvars = cur.nvars;
    let nm_prev = prev.monomials.len();
    let nm_cur = cur.monomials.len();
    let index: HashMap<&Monomial, usize> =
        cur.monomials.iter().enumerate().map(|(k, m)| (m, k)).collect();
    let free_pos: HashMap<usize, usize> =
        cur.free.iter().enumerate().map(|(p, &c)| (c, p)).collect();
    let mut rows = Vec::new();
    for v in &prev.vectors {
        for j in 0..nvars {
            let mut row = vec![Rational::zero(); cur.free.len()];
            for (col, x) in v.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let (i, k) = (col / nm_prev, col % nm_prev);
                let mut m = prev.monomials[k].clone();
                m[j] += 1;
                let target = i * nm_cur + index[&m];
                if let Some(&p) = free_pos.get(&target) {
                    row[p] = x.clone();
                }
            }
            rows.push(row);
        }
    }
    rows
}

/// Minimal homogeneous generators found degree by degree.
#[derive(Clone, Debug, Default)]
pub struct GeneratorScan {
    /// `dim D_d` for each scanned degree.
    pub dims: Vec<usize>,
    /// Generators in order of degree.
    pub generators: Vec<Derivation>,
}

impl GeneratorScan {
    pub fn degrees(&self) -> Vec<u32> {
        self.generators.iter().map(Derivation::degree).collect()
    }
}

/// Incremental generator extraction; `step` returns the new generators of
/// the next degree.
struct Extractor<'a> {
    ma: &'a Multiarrangement,
    opts: SolverOptions,
    prev: Option<GradedPiece>,
    next_degree: u32,
}

impl<'a> Extractor<'a> {
    fn new(ma: &'a Multiarrangement, opts: SolverOptions) -> Self {
        Extractor {
            ma,
            opts,
            prev: None,
            next_degree: 0,
        }
    }

    fn step(&mut self) -> (usize, Vec<Derivation>) {
        let d = self.next_degree;
        self.next_degree += 1;
        let cur = solve_piece(self.ma, d, self.opts);
        let new_positions: Vec<usize> = match &self.prev {
            Some(prev) if prev.dim() > 0 && cur.dim() > 0 => {
                let rows = shifted_coords(prev, &cur);
                let sub = IntSystem::from_rat_matrix(&RatMatrix::from_rows(rows));
                // free columns of the span are those not reached by its echelon form
                sub.kernel_basis()
                    .iter()
                    .map(|v| v.iter().rposition(|x| !x.is_zero()).expect("nonzero"))
                    .collect()
            }
            _ => (0..cur.dim()).collect(),
        };
        let gens = new_positions.iter().map(|&p| cur.derivation(p)).collect();
        let dim = cur.dim();
        self.prev = Some(cur);
        (dim, gens)
    }
}

/// Minimal generators of degree at most `dmax`.
pub fn minimal_generators(ma: &Multiarrangement, dmax: u32) -> GeneratorScan {
    minimal_generators_with(ma, dmax, SolverOptions::default())
}

pub fn minimal_generators_with(
    ma: &Multiarrangement,
    dmax: u32,
    opts: SolverOptions,
) -> GeneratorScan {
    let mut ex = Extractor::new(ma, opts);
    let mut scan = GeneratorScan::default();
    for _ in 0..=dmax {
        let (dim, gens) = ex.step();
        scan.dims.push(dim);
        scan.generators.extend(gens);
    }
    scan
}

/// Whether a member `theta` of `D(A, mu)` is nonzero modulo the submodule
/// generated in lower degrees, i.e. can be part of a minimal generating set.
pub fn is_minimal_generator(ma: &Multiarrangement, theta: &Derivation) -> bool {
    let d = theta.degree();
    if theta.is_zero() {
        return false;
    }
    let cur = solve_piece(ma, d, SolverOptions::default());
    let nm = cur.monomials.len();
    let index: HashMap<&Monomial, usize> =
        cur.monomials.iter().enumerate().map(|(k, m)| (m, k)).collect();
    let mut flat = vec![Rational::zero(); cur.nvars * nm];
    for (i, c) in theta.coeffs().iter().enumerate() {
        for (m, x) in c.terms() {
            flat[i * nm + index[m]] = x.clone();
        }
    }
    let coords: Vec<Rational> = cur.free.iter().map(|&c| flat[c].clone()).collect();
    if d == 0 {
        return true;
    }
    let prev = solve_piece(ma, d - 1, SolverOptions::default());
    if prev.dim() == 0 {
        return true;
    }
    let mut rows = shifted_coords(&prev, &cur);
    let before = rank(&RatMatrix::from_rows(rows.clone()));
    rows.push(coords);
    rank(&RatMatrix::from_rows(rows)) > before
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("candidate {index} is not in D(A, mu)")]
pub struct NotAMember {
    pub index: usize,
}

/// Saito's criterion: the candidates form a basis iff the determinant of
/// their coefficient matrix is a nonzero multiple of `Q(A, mu)`.
pub fn saito_verify(ma: &Multiarrangement, thetas: &[Derivation]) -> Result<bool, NotAMember> {
    for (index, t) in thetas.iter().enumerate() {
        if !is_member(ma, t) {
            return Err(NotAMember { index });
        }
    }
    if thetas.len() != ma.dim() {
        return Ok(false);
    }
    Ok(saito_det_matches(ma, thetas))
}

fn saito_det_matches(ma: &Multiarrangement, thetas: &[Derivation]) -> bool {
    let m: Vec<Vec<HomogPoly>> = thetas.iter().map(|t| t.coeffs.clone()).collect();
    let det = poly_det(&m).expect("square by construction");
    !det.is_zero() && det.scalar_multiple_of(&ma.defining_polynomial()).is_some()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotFreeWitness {
    /// More than `l` minimal generators up to this degree.
    TooManyGenerators { degree: u32 },
    /// `l` minimal generators whose degrees do not sum to `|mu|`.
    ExponentSumMismatch { degrees: Vec<u32>, expected: u64 },
    /// `l` minimal generators of the right total degree with zero determinant.
    DependentMinimalGenerators { degrees: Vec<u32> },
}

impl fmt::Display for NotFreeWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotFreeWitness::TooManyGenerators { degree } => {
                write!(f, "too many minimal generators by degree {degree}")
            }
            NotFreeWitness::ExponentSumMismatch { degrees, expected } => write!(
                f,
                "generator degrees {degrees:?} do not sum to |mu| = {expected}"
            ),
            NotFreeWitness::DependentMinimalGenerators { degrees } => write!(
                f,
                "minimal generators of degrees {degrees:?} have zero determinant"
            ),
        }
    }
}

#[derive(Clone, Debug)]
pub enum FreenessVerdict {
    Free {
        basis: Vec<Derivation>,
        exponents: Exponents,
    },
    NotFree(NotFreeWitness),
    Inconclusive {
        dmax: u32,
    },
}

impl FreenessVerdict {
    pub fn is_free(&self) -> bool {
        matches!(self, FreenessVerdict::Free { .. })
    }

    pub fn is_not_free(&self) -> bool {
        matches!(self, FreenessVerdict::NotFree(_))
    }

    pub fn exponents(&self) -> Option<&Exponents> {
        match self {
            FreenessVerdict::Free { exponents, .. } => Some(exponents),
            _ => None,
        }
    }
}

impl fmt::Display for FreenessVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreenessVerdict::Free { exponents, .. } => write!(f, "free, exponents {exponents}"),
            FreenessVerdict::NotFree(w) => write!(f, "not free ({w})"),
            FreenessVerdict::Inconclusive { dmax } => {
                write!(f, "inconclusive up to degree {dmax}")
            }
        }
    }
}

/// Verdict with the generator scan it was read from.
#[derive(Clone, Debug)]
pub struct OracleReport {
    pub verdict: FreenessVerdict,
    pub scan: GeneratorScan,
}

/// Default degree bound `|mu|`: `Q(A, mu) D_i` lies in the module, so a
/// rank-`l` module has all of its first `l` independent generators by then.
pub fn default_dmax(ma: &Multiarrangement) -> u32 {
    ma.order() as u32
}

pub fn freeness_oracle(ma: &Multiarrangement, dmax: Option<u32>) -> FreenessVerdict {
    freeness_oracle_with(ma, dmax, SolverOptions::default()).verdict
}

pub fn freeness_oracle_with(
    ma: &Multiarrangement,
    dmax: Option<u32>,
    opts: SolverOptions,
) -> OracleReport {
    let l = ma.dim();
    let dmax = dmax.unwrap_or_else(|| default_dmax(ma));
    let mut ex = Extractor::new(ma, opts);
    let mut scan = GeneratorScan::default();
    for d in 0..=dmax {
        let (dim, gens) = ex.step();
        scan.dims.push(dim);
        scan.generators.extend(gens);
        let count = scan.generators.len();
        if count > l {
            return OracleReport {
                verdict: FreenessVerdict::NotFree(NotFreeWitness::TooManyGenerators { degree: d }),
                scan,
            };
        }
        if count == l {
            let degrees = scan.degrees();
            let sum: u64 = degrees.iter().map(|&e| e as u64).sum();
            let verdict = if sum != ma.order() {
                FreenessVerdict::NotFree(NotFreeWitness::ExponentSumMismatch {
                    degrees,
                    expected: ma.order(),
                })
            } else if saito_det_matches(ma, &scan.generators) {
                FreenessVerdict::Free {
                    basis: scan.generators.clone(),
                    exponents: Exponents::new(degrees),
                }
            } else {
                FreenessVerdict::NotFree(NotFreeWitness::DependentMinimalGenerators { degrees })
            };
            return OracleReport { verdict, scan };
        }
    }
    OracleReport {
        verdict: FreenessVerdict::Inconclusive { dmax },
        scan,
    }
}

/// `sum_i C(d - e_i + l - 1, l - 1)`, the Hilbert function of a free module
/// with the given exponents.
pub fn free_hilbert_dim(exponents: &Exponents, d: u32) -> u64 {
    let l = exponents.len() as u32;
    exponents
        .as_slice()
        .iter()
        .filter(|&&e| e <= d)
        .map(|&e| {
            let n = d - e + l - 1;
            let k = l - 1;
            binomial(n, k).try_into().unwrap_or(u64::MAX)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::Arrangement;
    use crate::exactlin::rat;

    fn multi(dim: usize, rows: &[&[i64]], mult: &[u32]) -> Multiarrangement {
        Multiarrangement::new(Arrangement::from_ints(dim, rows).unwrap(), mult.to_vec()).unwrap()
    }

    fn x() -> HomogPoly {
        HomogPoly::var(2, 0)
    }
    fn y() -> HomogPoly {
        HomogPoly::var(2, 1)
    }
    fn zero(d: u32) -> HomogPoly {
        HomogPoly::zero(2, d)
    }

    #[test]
    fn graded_piece_dimensions() {
        assert_eq!(graded_dim(&multi(2, &[&[1, 0], &[0, 1]], &[1, 1]), 1), 2);
        assert_eq!(graded_dim(&multi(2, &[&[1, 0], &[0, 1]], &[2, 2]), 1), 0);
        let m = multi(2, &[&[1, 0], &[0, 1], &[1, 1]], &[2, 2, 1]);
        assert_eq!(graded_dim(&m, 2), 1);
        for theta in graded_piece(&m, 3) {
            assert!(is_member(&m, &theta));
        }
    }

    #[test]
    fn generators_of_small_examples() {
        let b = multi(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], &[1, 1, 1]);
        assert_eq!(minimal_generators(&b, 3).degrees(), vec![1, 1, 1]);
        let sq = multi(2, &[&[1, 0], &[0, 1]], &[2, 2]);
        assert_eq!(minimal_generators(&sq, 4).degrees(), vec![2, 2]);
    }

    #[test]
    fn saito_examples() {
        let xy = multi(2, &[&[1, 0], &[0, 1]], &[1, 1]);
        let dx = Derivation::new(vec![x(), zero(1)]);
        let dy = Derivation::new(vec![zero(1), y()]);
        assert_eq!(saito_verify(&xy, &[dx.clone(), dy.clone()]), Ok(true));
        assert_eq!(saito_verify(&xy, &[dx.clone(), dx.clone()]), Ok(false));
        let x2y = multi(2, &[&[1, 0], &[0, 1]], &[2, 1]);
        let d2 = Derivation::new(vec![x().mul(&x()), zero(2)]);
        assert_eq!(saito_verify(&x2y, &[d2, dy.clone()]), Ok(true));
        assert_eq!(
            saito_verify(&x2y, &[dx, dy]),
            Err(NotAMember { index: 0 })
        );
    }

    #[test]
    fn oracle_on_non_free_triangle_plus_line() {
        // xyz(x+y+z) is not free
        let a = multi(
            3,
            &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]],
            &[1, 1, 1, 1],
        );
        assert!(freeness_oracle(&a, None).is_not_free());
    }

    #[test]
    fn hilbert_formula() {
        let e = Exponents::new(vec![1, 1]);
        assert_eq!(free_hilbert_dim(&e, 0), 0);
        assert_eq!(free_hilbert_dim(&e, 2), 4);
        let b = multi(2, &[&[1, 0], &[0, 1], &[1, 1]], &[2, 2, 1]);
        let FreenessVerdict::Free { exponents, .. } = freeness_oracle(&b, None) else {
            panic!("rank two is free");
        };
        assert_eq!(exponents.as_slice(), &[2, 3]);
        for d in 0..6 {
            assert_eq!(graded_dim(&b, d) as u64, free_hilbert_dim(&exponents, d));
        }
    }

    #[test]
    fn apply_and_membership() {
        let t = Derivation::new(vec![x(), y()]);
        assert_eq!(t.apply(&[rat(1), rat(1)]), x().add(&y()));
    }
}
