use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;

use super::{Arrangement, UniPoly};
use crate::error::{Error, Result};
use crate::exactlin::{kernel_basis, RatMatrix, Rational};

/// An element of the intersection lattice, identified by the set of
/// hyperplanes containing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flat {
    rank: usize,
    hyperplanes: Vec<usize>,
    mask: u128,
    mobius: i64,
    /// Reduced echelon basis of the space of forms vanishing on the flat.
    annihilator: RatMatrix,
}

impl Flat {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn hyperplanes(&self) -> &[usize] {
        &self.hyperplanes
    }

    pub fn mask(&self) -> u128 {
        self.mask
    }

    pub fn mobius(&self) -> i64 {
        self.mobius
    }

    pub fn annihilator(&self) -> &RatMatrix {
        &self.annihilator
    }

    pub fn contains_hyperplane(&self, i: usize) -> bool {
        self.mask >> i & 1 == 1
    }

    /// Reduced-echelon basis of the subspace itself.
    pub fn basis(&self) -> Vec<Vec<Rational>> {
        if self.annihilator.rows() == 0 {
            return RatMatrix::identity(self.annihilator.cols()).row_vecs();
        }
        kernel_basis(&self.annihilator)
    }

    /// `self <= other` in reverse inclusion, i.e. `other` is contained in `self`.
    pub fn le(&self, other: &Flat) -> bool {
        self.mask & other.mask == self.mask
    }
}

/// Flats grouped by rank, with Möbius values.
#[derive(Clone, Debug)]
pub struct IntersectionLattice {
    dim: usize,
    ranks: Vec<Vec<Flat>>,
}

impl IntersectionLattice {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn by_rank(&self, r: usize) -> &[Flat] {
        self.ranks.get(r).map_or(&[], Vec::as_slice)
    }

    pub fn flats(&self) -> impl Iterator<Item = &Flat> {
        self.ranks.iter().flatten()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.ranks.iter().map(Vec::len).collect()
    }

    /// The flat whose contained hyperplanes are exactly `hyperplanes`.
    pub fn find(&self, hyperplanes: &[usize]) -> Option<&Flat> {
        let mask = to_mask(hyperplanes);
        self.flats().find(|f| f.mask == mask)
    }

    /// `sum_X mu(X) t^{dim X}`.
    pub fn char_poly(&self) -> UniPoly {
        let mut c = vec![BigInt::from(0); self.dim + 1];
        for f in self.flats() {
            c[self.dim - f.rank] += f.mobius;
        }
        UniPoly::new(c)
    }

    /// Flats as hyperplane index sets, grouped by rank.
    pub fn incidence(&self) -> Vec<BTreeSet<Vec<usize>>> {
        self.ranks
            .iter()
            .map(|fs| fs.iter().map(|f| f.hyperplanes.clone()).collect())
            .collect()
    }

    /// Same ranked incidence structure under the identity correspondence of
    /// hyperplane indices.
    pub fn same_incidence(&self, other: &IntersectionLattice) -> bool {
        self.incidence() == other.incidence()
    }
}

fn to_mask(idx: &[usize]) -> u128 {
    idx.iter().fold(0u128, |m, &i| m | 1 << i)
}

fn from_mask(mask: u128) -> Vec<usize> {
    (0..128).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Intersection lattice by iterated closure, deduplicated on the set of
/// contained hyperplanes.
pub fn lattice(a: &Arrangement) -> Result<IntersectionLattice> {
    let n = a.len();
    if n > 128 {
        return Err(Error::TooLarge(n));
    }
    let l = a.dim();
    let forms: Vec<Vec<Rational>> = a.forms().iter().map(|f| f.to_rationals()).collect();
    let bottom = Flat {
        rank: 0,
        hyperplanes: Vec::new(),
        mask: 0,
        mobius: 1,
        annihilator: RatMatrix::zeros(0, l),
    };
    let mut ranks = vec![vec![bottom]];
    loop {
        let prev = ranks.last().unwrap();
        let mut next: Vec<Flat> = Vec::new();
        let mut seen: HashMap<u128, ()> = HashMap::new();
        for x in prev {
            for h in 0..n {
                if x.contains_hyperplane(h) {
                    continue;
                }
                // skip if an earlier closure from this flat already covered h
                let mut rows = x.annihilator.row_vecs();
                rows.push(forms[h].clone());
                let (r, pivots) = RatMatrix::from_rows(rows).rref();
                let mut mask = 0u128;
                for (i, f) in forms.iter().enumerate() {
                    if super::in_row_space(&r, &pivots, f) {
                        mask |= 1 << i;
                    }
                }
                if seen.insert(mask, ()).is_some() {
                    continue;
                }
                let annihilator =
                    RatMatrix::from_rows((0..pivots.len()).map(|i| r.row(i).to_vec()).collect());
                next.push(Flat {
                    rank: pivots.len(),
                    hyperplanes: from_mask(mask),
                    mask,
                    mobius: 0,
                    annihilator,
                });
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_by(|a, b| a.hyperplanes.cmp(&b.hyperplanes));
        ranks.push(next);
    }
    for r in 1..ranks.len() {
        for k in 0..ranks[r].len() {
            let mask = ranks[r][k].mask;
            let mut s = 0i64;
            for lower in &ranks[..r] {
                for z in lower {
                    if z.mask & mask == z.mask {
                        s += z.mobius;
                    }
                }
            }
            ranks[r][k].mobius = -s;
        }
    }
    Ok(IntersectionLattice { dim: l, ranks })
}
