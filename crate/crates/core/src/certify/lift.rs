//! Lifting certificates of a simple arrangement to its Ziegler restrictions.
//!
//! `lift(C, H0)` turns a certificate `C` of `A` into one of `(A^{H0}, kappa)`:
//!
//! * root deletes `H0`: walk the multiplicities `1 = mu_1 < ... < mu_n =
//!   kappa` on `A''` in load order; every Euler restriction along the way is
//!   a Ziegler restriction of `A''`, certified by lifting the certificate of
//!   `A''` recursively.
//! * root deletes `H != H0`: add `Y = H ∩ H0` to the lift of `A \ {H}`; the
//!   Euler restriction at `Y` is the Ziegler restriction of `A^H` at the trace
//!   of `H0`, certified by lifting the certificate of `A^H`.
//!
//! Deletion roots (recursive certificates) are handled symmetrically. Pieces
//! computed in one coordinate system are moved into another by replaying
//! their moves under the linear change of coordinates.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::Zero;

use crate::arrangement::{Arrangement, LinearForm};
use crate::dsolve::FreenessVerdict;
use crate::error::{Error, Result};
use crate::exactlin::{RatMatrix, Rational};
use crate::multi::{find_form, ziegler_multiplicity, Multiarrangement};

use super::{
    add_rule, base_node, delete_rule, leaf, precondition, same_multi, Cache, Certificate, Kind,
    Move, Node,
};

/// Point map `u_target = t * u_source` between coordinate systems.
#[derive(Clone, Debug)]
enum CoordMap {
    Identity,
    Linear { t: RatMatrix, t_inv: RatMatrix },
}

impl CoordMap {
    fn from_matrix(t: RatMatrix) -> Result<CoordMap> {
        if t == RatMatrix::identity(t.rows()) {
            return Ok(CoordMap::Identity);
        }
        let t_inv = t
            .inverse()
            .ok_or_else(|| precondition("singular change of coordinates"))?;
        Ok(CoordMap::Linear { t, t_inv })
    }

    /// `alpha_target = alpha_source * t^{-1}`.
    fn form(&self, f: &LinearForm) -> Vec<Rational> {
        let a = f.to_rationals();
        match self {
            CoordMap::Identity => a,
            CoordMap::Linear { t_inv, .. } => (0..t_inv.cols())
                .map(|j| {
                    a.iter()
                        .enumerate()
                        .fold(Rational::zero(), |acc, (i, x)| acc + x * &t_inv[(i, j)])
                })
                .collect(),
        }
    }

    fn point(&self, v: &[Rational]) -> Vec<Rational> {
        match self {
            CoordMap::Identity => v.to_vec(),
            CoordMap::Linear { t, .. } => t.mul_vec(v),
        }
    }
}

/// Columns are the coordinates of each of `vectors` in `basis`.
fn coords_in(vectors: &[Vec<Rational>], basis: &[Vec<Rational>]) -> Result<RatMatrix> {
    let m = basis.len();
    let dot = |a: &[Rational], b: &[Rational]| -> Rational {
        a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
    };
    let gram = RatMatrix::from_rows(
        basis
            .iter()
            .map(|b| basis.iter().map(|c| dot(b, c)).collect())
            .collect(),
    );
    let gi = if m == 0 {
        RatMatrix::zeros(0, 0)
    } else {
        gram.inverse()
            .ok_or_else(|| precondition("dependent basis vectors"))?
    };
    let mut out = RatMatrix::zeros(m, vectors.len());
    for (k, v) in vectors.iter().enumerate() {
        let rhs: Vec<Rational> = basis.iter().map(|b| dot(b, v)).collect();
        let c = gi.mul_vec(&rhs);
        let back: Vec<Rational> = (0..v.len())
            .map(|i| {
                c.iter()
                    .zip(basis)
                    .fold(Rational::zero(), |acc, (cj, b)| acc + cj * &b[i])
            })
            .collect();
        if back != *v {
            return Err(precondition("vector outside the target subspace"));
        }
        for j in 0..m {
            out[(j, k)] = c[j].clone();
        }
    }
    Ok(out)
}

/// Ambient coordinates of a nested basis: rows of `inner` are expressed in
/// the basis `outer`.
fn compose(inner: &[Vec<Rational>], outer: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    if inner.is_empty() {
        return Vec::new();
    }
    RatMatrix::from_rows(inner.to_vec())
        .mul(&RatMatrix::from_rows(outer.to_vec()))
        .row_vecs()
}

fn induced(map: &CoordMap, src: &[Vec<Rational>], tgt: &[Vec<Rational>]) -> Result<CoordMap> {
    let images: Vec<Vec<Rational>> = src.iter().map(|b| map.point(b)).collect();
    CoordMap::from_matrix(coords_in(&images, tgt)?)
}

fn mapped_profile(ma: &Multiarrangement, map: &CoordMap) -> Result<BTreeMap<LinearForm, u32>> {
    let mut out = BTreeMap::new();
    for (f, &m) in ma.arrangement().forms().iter().zip(ma.mult()) {
        if m > 0 {
            let g = LinearForm::new(&map.form(f)).ok_or_else(|| precondition("form maps to zero"))?;
            out.insert(g, m);
        }
    }
    Ok(out)
}

fn map_multi(ma: &Multiarrangement, map: &CoordMap, names: &[String]) -> Result<Multiarrangement> {
    let forms: Vec<Vec<Rational>> = ma.arrangement().forms().iter().map(|f| map.form(f)).collect();
    let arr = Arrangement::new(ma.dim(), &forms)?.with_names(names.to_vec());
    Multiarrangement::new(arr, ma.mult().to_vec())
}

fn broken(msg: impl Into<String>) -> Error {
    Error::Precondition(format!("lift failed: {}", msg.into()))
}

struct Lifter {
    cache: Cache,
    memo: HashMap<(Multiarrangement, usize), Arc<Node>>,
    allow_delete: bool,
}

impl Lifter {
    fn new(allow_delete: bool) -> Self {
        Lifter {
            cache: Cache::default(),
            memo: HashMap::new(),
            allow_delete,
        }
    }

    /// Rebuilds `node` on `target`, the image of `node.multi` under `map`.
    fn replay(
        &mut self,
        node: &Arc<Node>,
        target: &Multiarrangement,
        map: &CoordMap,
    ) -> Result<Arc<Node>> {
        if matches!(map, CoordMap::Identity) && node.multi == *target {
            return Ok(node.clone());
        }
        if target.dim() != node.multi.dim() || mapped_profile(&node.multi, map)? != target.profile()
        {
            return Err(broken(format!(
                "{} does not map onto {}",
                node.multi.display_q(),
                target.display_q()
            )));
        }
        let mv = match &node.mv {
            Move::Empty => Move::Empty,
            Move::Rank2 => Move::Rank2,
            Move::Add {
                hyperplane,
                deleted,
                restricted,
            } => {
                let src_form = node.multi.arrangement().form(*hyperplane);
                let h = find_form(target.arrangement(), &map.form(src_form))
                    .ok_or_else(|| broken("hyperplane has no image"))?;
                let ts = self.cache.triple(&node.multi, *hyperplane)?;
                let tt = self.cache.triple(target, h)?;
                let d = self.replay(deleted, &tt.deletion, map)?;
                let rmap = induced(map, &ts.trace.basis, &tt.trace.basis)?;
                let r = self.replay(restricted, &tt.restriction, &rmap)?;
                Move::Add {
                    hyperplane: h,
                    deleted: d,
                    restricted: r,
                }
            }
            Move::Delete {
                hyperplane,
                full,
                restricted,
            } => {
                let full_t = map_multi(&full.multi, map, target.arrangement().names())?;
                let ts = self.cache.triple(&full.multi, *hyperplane)?;
                let tt = self.cache.triple(&full_t, *hyperplane)?;
                if !same_multi(&tt.deletion, target) {
                    return Err(broken("mapped deletion differs"));
                }
                let f = self.replay(full, &full_t, map)?;
                let rmap = induced(map, &ts.trace.basis, &tt.trace.basis)?;
                let r = self.replay(restricted, &tt.restriction, &rmap)?;
                Move::Delete {
                    hyperplane: *hyperplane,
                    full: f,
                    restricted: r,
                }
            }
        };
        Ok(leaf(target.clone(), node.exp.clone(), mv))
    }

    /// Certificate of `(A^{H0}, kappa)` from a certificate of the simple `A`.
    fn lift(&mut self, node: &Arc<Node>, h0: usize) -> Result<Arc<Node>> {
        let key = (node.multi.clone(), h0);
        if let Some(n) = self.memo.get(&key) {
            return Ok(n.clone());
        }
        let n = self.lift_uncached(node, h0)?;
        self.memo.insert(key, n.clone());
        Ok(n)
    }

    fn lift_uncached(&mut self, node: &Arc<Node>, h0: usize) -> Result<Arc<Node>> {
        if !node.multi.is_simple() {
            return Err(precondition("lifting needs a certificate of a simple arrangement"));
        }
        let a = node.multi.arrangement().clone();
        let z = ziegler_multiplicity(&a, h0)?;
        let target = z.multi.clone();
        if let Some(b) = base_node(&target, &mut self.cache)? {
            return Ok(b);
        }
        let h0_form = a.form(h0).clone();
        match &node.mv {
            Move::Empty | Move::Rank2 => Err(broken("base node above rank two")),
            Move::Add {
                hyperplane,
                restricted,
                ..
            } if *hyperplane == h0 => self.filtration(restricted, &target),
            Move::Add {
                hyperplane,
                deleted,
                restricted,
            } => {
                let h = *hyperplane;
                let y = z.restriction.image[h].ok_or_else(|| broken("H contains H0"))?;
                let tt = self.cache.triple(&target, y)?;
                let h0_del = deleted
                    .multi
                    .arrangement()
                    .index_of(&h0_form)
                    .ok_or_else(|| broken("H0 missing from the deletion"))?;
                let ld = self.lift(deleted, h0_del)?;
                let d = self.replay(&ld, &tt.deletion, &CoordMap::Identity)?;
                let trace = a.restriction(h)?;
                let r = self.lift_restricted(restricted, &trace, h0, &tt.trace.basis, &z.restriction.basis, &tt.restriction)?;
                let exp = add_rule(&d.exp, &r.exp).ok_or_else(|| {
                    broken(format!("{} not contained in {}", r.exp, d.exp))
                })?;
                Ok(leaf(
                    target,
                    exp,
                    Move::Add {
                        hyperplane: y,
                        deleted: d,
                        restricted: r,
                    },
                ))
            }
            Move::Delete {
                hyperplane,
                full,
                restricted,
            } => {
                if !self.allow_delete {
                    return Err(precondition(
                        "certificate uses deletion moves; it is not inductive",
                    ));
                }
                let f_arr = full.multi.arrangement().clone();
                let h = *hyperplane;
                let h0_full = f_arr
                    .index_of(&h0_form)
                    .ok_or_else(|| broken("H0 missing from the full arrangement"))?;
                let zf = ziegler_multiplicity(&f_arr, h0_full)?;
                let lf = self.lift(full, h0_full)?;
                let y = zf.restriction.image[h].ok_or_else(|| broken("H contains H0"))?;
                let tt = self.cache.triple(&zf.multi, y)?;
                if !same_multi(&tt.deletion, &target) {
                    return Err(broken("deletion of the lifted full node differs"));
                }
                let trace = f_arr.restriction(h)?;
                let r = self.lift_restricted(restricted, &trace, h0_full, &tt.trace.basis, &zf.restriction.basis, &tt.restriction)?;
                let exp = delete_rule(&lf.exp, &r.exp).ok_or_else(|| {
                    broken(format!("{} not contained in {}", r.exp, lf.exp))
                })?;
                Ok(leaf(
                    target,
                    exp,
                    Move::Delete {
                        hyperplane: y,
                        full: lf,
                        restricted: r,
                    },
                ))
            }
        }
    }

    /// Lifts the certificate of `A^H` at the trace of `H0` and moves it onto
    /// `target`, the Euler restriction of `(A^{H0}, kappa)` at `H ∩ H0`.
    #[allow(clippy::too_many_arguments)]
    fn lift_restricted(
        &mut self,
        restricted: &Arc<Node>,
        trace_h: &crate::arrangement::Restriction,
        h0: usize,
        y_basis: &[Vec<Rational>],
        h0_basis: &[Vec<Rational>],
        target: &Multiarrangement,
    ) -> Result<Arc<Node>> {
        let t0 = trace_h.image[h0].ok_or_else(|| broken("H0 contains H"))?;
        let lr = self.lift(restricted, t0)?;
        let inner = restricted.multi.arrangement().restriction(t0)?;
        let src = compose(&inner.basis, &trace_h.basis);
        let tgt = compose(y_basis, h0_basis);
        let map = CoordMap::from_matrix(coords_in(&src, &tgt)?)?;
        self.replay(&lr, target, &map)
    }

    /// Multiplicity filtration from `(A'', 1)` to `target = (A'', kappa)`.
    fn filtration(&mut self, cert_res: &Arc<Node>, target: &Multiarrangement) -> Result<Arc<Node>> {
        let simple = Multiarrangement::simple(target.arrangement().clone());
        let base = self.replay(cert_res, &simple, &CoordMap::Identity)?;
        let mut cur = base.clone();
        let mut mult = vec![1; target.mult().len()];
        for y in 0..mult.len() {
            for _ in 1..target.mult()[y] {
                mult[y] += 1;
                let next = target.with_mult(mult.clone())?;
                let tt = self.cache.triple(&next, y)?;
                let lr = self.lift(&base, y)?;
                let r = self.replay(&lr, &tt.restriction, &CoordMap::Identity)?;
                let exp = add_rule(&cur.exp, &r.exp).ok_or_else(|| {
                    broken(format!("{} not contained in {}", r.exp, cur.exp))
                })?;
                cur = leaf(
                    next,
                    exp,
                    Move::Add {
                        hyperplane: y,
                        deleted: cur,
                        restricted: r,
                    },
                );
            }
        }
        Ok(cur)
    }
}

fn check_simple(cert: &Certificate) -> Result<()> {
    if cert.kind != Kind::Simple {
        return Err(precondition("expected a certificate of a simple arrangement"));
    }
    Ok(())
}

/// Certificate of `(A^{H0}, kappa)` from an inductive certificate of `A`.
pub fn lift_inductive(cert: &Certificate, h0: usize) -> Result<Certificate> {
    check_simple(cert)?;
    if cert.has_delete() {
        return Err(precondition(
            "certificate uses deletion moves; use the recursive lift",
        ));
    }
    let root = Lifter::new(false).lift(&cert.root, h0)?;
    Ok(Certificate {
        kind: Kind::Multi,
        root,
    })
}

/// As [`lift_inductive`], also accepting deletion moves.
pub fn lift_recursive(cert: &Certificate, h0: usize) -> Result<Certificate> {
    check_simple(cert)?;
    let root = Lifter::new(true).lift(&cert.root, h0)?;
    Ok(Certificate {
        kind: Kind::Multi,
        root,
    })
}

/// Certificate of `(A^{H0}, kappa)` when `A \ {H0}` is free, from a
/// certificate of the simple restriction `A^{H0}`.
pub fn lift_via_deletion(a: &Arrangement, h0: usize, cert_res: &Certificate) -> Result<Certificate> {
    check_simple(cert_res)?;
    let mut lifter = Lifter::new(cert_res.has_delete());
    let deletion = Multiarrangement::simple(a.deletion(h0)?);
    match lifter.cache.oracle(&deletion) {
        FreenessVerdict::Free { .. } => {}
        v => {
            return Err(precondition(format!(
                "the deletion of hyperplane {h0} is not known to be free ({v})"
            )))
        }
    }
    let z = ziegler_multiplicity(a, h0)?;
    if !same_multi(&cert_res.root.multi, &Multiarrangement::simple(z.multi.arrangement().clone())) {
        return Err(precondition(
            "certificate is not for the restriction to the chosen hyperplane",
        ));
    }
    let root = match base_node(&z.multi, &mut lifter.cache)? {
        Some(b) => b,
        None => lifter.filtration(&cert_res.root, &z.multi)?,
    };
    Ok(Certificate {
        kind: Kind::Multi,
        root,
    })
}
