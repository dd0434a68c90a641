//! Divisional freeness: a flag of flats along which characteristic
//! polynomials of restrictions divide each other.

use std::collections::HashMap;

use crate::arrangement::{lattice, Arrangement, Flat, IntersectionLattice, UniPoly};
use crate::error::Result;

/// `X_1 ⊃ X_2 ⊃ ... ⊃ X_k` by the hyperplanes containing each flat, with
/// `chi(A^{X_i})`. `char_polys[0]` is `chi(A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisionalFlag {
    pub flats: Vec<Vec<usize>>,
    pub char_polys: Vec<UniPoly>,
}

struct Search<'a> {
    a: &'a Arrangement,
    lat: IntersectionLattice,
    chi: HashMap<u128, UniPoly>,
    memo: HashMap<u128, Option<Vec<u128>>>,
}

impl Search<'_> {
    fn chi(&mut self, x: &Flat) -> Result<UniPoly> {
        if let Some(p) = self.chi.get(&x.mask()) {
            return Ok(p.clone());
        }
        let r = self.a.restriction_to_flat(x)?.arrangement;
        let p = lattice(&r)?.char_poly();
        self.chi.insert(x.mask(), p.clone());
        Ok(p)
    }

    /// Tail of a flag below `x`, as masks, or `None`.
    fn below(&mut self, x: &Flat) -> Result<Option<Vec<u128>>> {
        if let Some(r) = self.memo.get(&x.mask()) {
            return Ok(r.clone());
        }
        let r = if self.lat.rank() <= x.rank() + 2 {
            Some(Vec::new())
        } else {
            let chi_x = self.chi(x)?;
            let covers: Vec<Flat> = self
                .lat
                .by_rank(x.rank() + 1)
                .iter()
                .filter(|y| x.le(y))
                .cloned()
                .collect();
            let mut found = None;
            for y in covers {
                if !self.chi(&y)?.divides(&chi_x) {
                    continue;
                }
                if let Some(mut tail) = self.below(&y)? {
                    tail.insert(0, y.mask());
                    found = Some(tail);
                    break;
                }
            }
            found
        };
        self.memo.insert(x.mask(), r.clone());
        Ok(r)
    }
}

/// Depth-first search over flags in lattice order. Rank at most two and the
/// empty arrangement are divisionally free with an empty flag; `None` is a
/// proof that no flag exists.
pub fn certify_divisional(a: &Arrangement) -> Result<Option<DivisionalFlag>> {
    let lat = lattice(a)?;
    let chi_a = lat.char_poly();
    let top = lat.by_rank(0)[0].clone();
    let mut s = Search {
        a,
        lat,
        chi: HashMap::new(),
        memo: HashMap::new(),
    };
    let Some(masks) = s.below(&top)? else {
        return Ok(None);
    };
    let mut flats = Vec::new();
    let mut char_polys = vec![chi_a];
    for m in masks {
        let hyps: Vec<usize> = (0..a.len()).filter(|&i| m >> i & 1 == 1).collect();
        char_polys.push(s.chi[&m].clone());
        flats.push(hyps);
    }
    Ok(Some(DivisionalFlag { flats, char_polys }))
}
