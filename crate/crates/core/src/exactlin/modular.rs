//! Multi-modular null space computation for large sparse integer systems.
//!
//! The reduced row echelon form is computed modulo word-sized primes, the
//! kernel entries are lifted by CRT and rational reconstruction, and the
//! candidate basis is then checked exactly against the integer system. A
//! verified candidate is the exact rational answer: the modular kernel can
//! only be larger than the rational one, and every reconstructed vector is a
//! true rational kernel vector with the identity pattern on the free columns,
//! which pins down both the kernel dimension and the pivot structure.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::{kernel_basis_exact, RatMatrix};
use super::Rational;

/// Primes just below 2^31; products of two residues fit comfortably in u64.
const PRIMES: [u64; 16] = [
    2147483647, 2147483629, 2147483587, 2147483579, 2147483563, 2147483549, 2147483543,
    2147483497, 2147483489, 2147483477, 2147483423, 2147483399, 2147483353, 2147483323,
    2147483269, 2147483249,
];

/// Homogeneous linear system with integer coefficients, stored by sparse rows.
#[derive(Clone, Debug, Default)]
pub struct IntSystem {
    cols: usize,
    rows: Vec<Vec<(usize, BigInt)>>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct KernelStats {
    pub primes_used: usize,
    pub exact_fallback: bool,
}

struct ModularRref {
    pivots: Vec<usize>,
    /// For each pivot row, its entries on the free columns (in `free` order).
    free_entries: Vec<Vec<u64>>,
}

impl IntSystem {
    pub fn new(cols: usize) -> Self {
        IntSystem {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Adds a row, dropping zero entries. Entries may repeat a column; they are summed.
    pub fn push_row(&mut self, mut entries: Vec<(usize, BigInt)>) {
        entries.sort_by_key(|e| e.0);
        let mut merged: Vec<(usize, BigInt)> = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            assert!(c < self.cols, "column {c} out of range");
            match merged.last_mut() {
                Some((lc, lv)) if *lc == c => *lv += v,
                _ => merged.push((c, v)),
            }
        }
        merged.retain(|(_, v)| !v.is_zero());
        if !merged.is_empty() {
            self.rows.push(merged);
        }
    }

    /// Scales each rational row to integers; the kernel is unchanged.
    pub fn from_rat_matrix(m: &RatMatrix) -> Self {
        let mut sys = IntSystem::new(m.cols());
        for i in 0..m.rows() {
            let row = m.row(i);
            let mut lcm = BigInt::one();
            for x in row.iter().filter(|x| !x.is_zero()) {
                lcm = lcm.lcm(x.denom());
            }
            let entries = row
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(j, x)| (j, x.numer() * (&lcm / x.denom())))
                .collect();
            sys.push_row(entries);
        }
        sys
    }

    pub fn to_rat_matrix(&self) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.rows.len(), self.cols);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row {
                m[(i, *j)] = Rational::from_integer(v.clone());
            }
        }
        m
    }

    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        self.kernel_basis_with_stats().0
    }

    pub fn kernel_basis_with_stats(&self) -> (Vec<Vec<Rational>>, KernelStats) {
        let mut stats = KernelStats::default();
        if self.rows.is_empty() {
            return (identity_basis(self.cols), stats);
        }
        let mut best: Option<(Vec<usize>, Vec<Vec<BigInt>>, BigInt)> = None;
        for (k, &p) in PRIMES.iter().enumerate() {
            stats.primes_used = k + 1;
            let rr = self.rref_mod(p);
            let p_big = BigInt::from(p);
            best = match best.take() {
                None => Some(lift_first(rr, &p_big)),
                Some((pivots, acc, modulus)) => {
                    if rr.pivots.len() > pivots.len() {
                        // the earlier primes were unlucky
                        Some(lift_first(rr, &p_big))
                    } else if rr.pivots != pivots {
                        Some((pivots, acc, modulus))
                    } else {
                        Some(crt_merge(pivots, acc, modulus, &rr, &p_big))
                    }
                }
            };
            let (pivots, acc, modulus) = best.as_ref().expect("set above");
            if let Some(basis) = self.try_reconstruct(pivots, acc, modulus) {
                return (basis, stats);
            }
        }
        stats.exact_fallback = true;
        (kernel_basis_exact(&self.to_rat_matrix()), stats)
    }

    fn free_columns(&self, pivots: &[usize]) -> Vec<usize> {
        let mut is_pivot = vec![false; self.cols];
        for &p in pivots {
            is_pivot[p] = true;
        }
        (0..self.cols).filter(|&c| !is_pivot[c]).collect()
    }

    fn try_reconstruct(
        &self,
        pivots: &[usize],
        acc: &[Vec<BigInt>],
        modulus: &BigInt,
    ) -> Option<Vec<Vec<Rational>>> {
        let free = self.free_columns(pivots);
        let bound = (modulus >> 1usize).sqrt();
        let mut basis = Vec::with_capacity(free.len());
        for (fi, &f) in free.iter().enumerate() {
            let mut v = vec![Rational::zero(); self.cols];
            v[f] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                let a = &acc[row][fi];
                if a.is_zero() {
                    continue;
                }
                // kernel entry is minus the reduced-row entry
                let neg = (modulus - a) % modulus;
                v[p] = rational_reconstruct(&neg, modulus, &bound)?;
            }
            if !self.annihilates(&v) {
                return None;
            }
            basis.push(v);
        }
        Some(basis)
    }

    fn annihilates(&self, v: &[Rational]) -> bool {
        let mut lcm = BigInt::one();
        for x in v.iter().filter(|x| !x.is_zero()) {
            lcm = lcm.lcm(x.denom());
        }
        let w: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
        let small: Option<Vec<i64>> = w.iter().map(ToPrimitive::to_i64).collect();
        self.rows.iter().all(|row| {
            if let Some(small) = &small {
                if let Some(s) = dot_i128(row, small) {
                    return s == 0;
                }
            }
            let s: BigInt = row.iter().map(|(c, a)| a * &w[*c]).sum();
            s.is_zero()
        })
    }

    fn rref_mod(&self, p: u64) -> ModularRref {
        let n = self.cols;
        let mut mat: Vec<Vec<u64>> = self
            .rows
            .iter()
            .map(|row| {
                let mut dense = vec![0u64; n];
                for (c, v) in row {
                    dense[*c] = reduce_big(v, p);
                }
                dense
            })
            .collect();
        let m = mat.len();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..n {
            if r == m {
                break;
            }
            let Some(piv) = (r..m).find(|&i| mat[i][c] != 0) else {
                continue;
            };
            mat.swap(r, piv);
            let inv = mod_inv(mat[r][c], p);
            for x in mat[r][c..].iter_mut() {
                *x = *x * inv % p;
            }
            let (head, tail) = mat.split_at_mut(r + 1);
            let prow = &head[r];
            for row in tail.iter_mut() {
                let f = row[c];
                if f == 0 {
                    continue;
                }
                let nf = p - f;
                for j in c..n {
                    let a = prow[j];
                    if a != 0 {
                        row[j] = (row[j] + nf * a) % p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        mat.truncate(r);
        // back substitution to reduced form
        for k in (0..r).rev() {
            let c = pivots[k];
            let (head, tail) = mat.split_at_mut(k);
            let prow = &tail[0];
            for row in head.iter_mut() {
                let f = row[c];
                if f == 0 {
                    continue;
                }
                let nf = p - f;
                for j in c..n {
                    let a = prow[j];
                    if a != 0 {
                        row[j] = (row[j] + nf * a) % p;
                    }
                }
            }
        }
        let free = self.free_columns(&pivots);
        let free_entries = mat
            .iter()
            .map(|row| free.iter().map(|&f| row[f]).collect())
            .collect();
        ModularRref {
            pivots,
            free_entries,
        }
    }
}

fn identity_basis(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| {
            let mut v = vec![Rational::zero(); n];
            v[i] = Rational::one();
            v
        })
        .collect()
}

fn lift_first(rr: ModularRref, p: &BigInt) -> (Vec<usize>, Vec<Vec<BigInt>>, BigInt) {
    let acc = rr
        .free_entries
        .into_iter()
        .map(|row| row.into_iter().map(BigInt::from).collect())
        .collect();
    (rr.pivots, acc, p.clone())
}

fn crt_merge(
    pivots: Vec<usize>,
    acc: Vec<Vec<BigInt>>,
    modulus: BigInt,
    rr: &ModularRref,
    p: &BigInt,
) -> (Vec<usize>, Vec<Vec<BigInt>>, BigInt) {
    // x = a (mod M), x = b (mod p)  =>  x = a + M * ((b - a) * M^{-1} mod p)
    let m_mod_p = (&modulus % p).to_u64().expect("reduced below p");
    let pu = p.to_u64().expect("word prime");
    let m_inv = mod_inv(m_mod_p, pu);
    let merged = acc
        .into_iter()
        .zip(&rr.free_entries)
        .map(|(row, new)| {
            row.into_iter()
                .zip(new)
                .map(|(a, &b)| {
                    let a_mod = (&a % p).to_u64().expect("reduced below p");
                    let diff = (b + pu - a_mod) % pu;
                    let t = diff * m_inv % pu;
                    a + &modulus * BigInt::from(t)
                })
                .collect()
        })
        .collect();
    let new_mod = modulus * p;
    (pivots, merged, new_mod)
}

fn reduce_big(v: &BigInt, p: u64) -> u64 {
    if let Some(s) = v.to_i64() {
        return s.rem_euclid(p as i64) as u64;
    }
    let pb = BigInt::from(p);
    v.mod_floor(&pb).to_u64().expect("reduced below p")
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn mod_inv(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    mod_pow(a, p - 2, p)
}

fn dot_i128(row: &[(usize, BigInt)], w: &[i64]) -> Option<i128> {
    let mut s: i128 = 0;
    for (c, a) in row {
        let a = a.to_i64()? as i128;
        s = s.checked_add(a.checked_mul(w[*c] as i128)?)?;
    }
    Some(s)
}

/// Finds `n/d` congruent to `a` modulo `m` with `|n|, d <= bound`, if one exists.
fn rational_reconstruct(a: &BigInt, m: &BigInt, bound: &BigInt) -> Option<Rational> {
    let (mut r0, mut r1) = (m.clone(), a.clone());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > *bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::ratio;

    fn is_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn prime_table_is_prime() {
        for p in PRIMES {
            assert!(is_prime(p), "{p} is not prime");
            assert!(p < 1 << 31);
        }
    }

    #[test]
    fn reconstruction_roundtrip() {
        let m = BigInt::from(PRIMES[0]) * BigInt::from(PRIMES[1]);
        let bound = (&m >> 1usize).sqrt();
        for (n, d) in [(3i64, 7i64), (-5, 12), (123456, 789), (0, 1)] {
            let r = ratio(n, d);
            let dinv = BigInt::from(d).modinv(&m).expect("coprime");
            let a = (BigInt::from(n) * dinv).mod_floor(&m);
            assert_eq!(rational_reconstruct(&a, &m, &bound), Some(r));
        }
    }

    #[test]
    fn needs_several_primes_for_large_entries() {
        // x0 * 10^12 + x1 * 7 = 0 : kernel vector (-7/10^12, 1)
        let mut sys = IntSystem::new(2);
        sys.push_row(vec![(0, BigInt::from(10i64.pow(12))), (1, BigInt::from(7))]);
        let (k, stats) = sys.kernel_basis_with_stats();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][0], Rational::new(BigInt::from(-7), BigInt::from(10i64.pow(12))));
        assert!(stats.primes_used >= 2);
        assert!(!stats.exact_fallback);
    }
}
