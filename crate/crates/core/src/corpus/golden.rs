//! Expected values attached to corpus entries.

use std::collections::BTreeMap;

use crate::arrangement::{lattice, Arrangement, LinearForm, UniPoly};
use crate::dsolve::{freeness_oracle, FreenessVerdict};
use crate::multi::{triple, ziegler_multiplicity, Exponents, Multiarrangement};

use super::generate_spec;

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    /// Stated in the published source of the example.
    Published,
    /// Produced once by this crate and frozen.
    Computed,
    /// Immediate from the definitions.
    Trivial,
}

impl Origin {
    pub fn label(self) -> &'static str {
        match self {
            Origin::Published => "published",
            Origin::Computed => "computed",
            Origin::Trivial => "trivial",
        }
    }
}

/// One named expectation over one or more corpus entries.
#[derive(Clone, Copy)]
pub struct GoldenCheck {
    pub entry: &'static str,
    pub name: &'static str,
    pub origin: Origin,
    pub expected: &'static str,
    check: fn() -> Result<String, String>,
}

impl GoldenCheck {
    /// `Ok(observed)` when the expectation holds, `Err(observed)` otherwise.
    pub fn run(&self) -> Result<String, String> {
        (self.check)()
    }
}

fn entry(spec: &str) -> Arrangement {
    generate_spec(spec).expect("corpus entry").arrangement
}

fn entry_multi(spec: &str) -> Multiarrangement {
    generate_spec(spec).expect("corpus entry").multi()
}

/// Profile from integer rows, for comparing against printed products.
pub(crate) fn profile_of(rows: &[(&[i64], u32)]) -> BTreeMap<LinearForm, u32> {
    rows.iter()
        .map(|(r, m)| (LinearForm::from_ints(r).expect("nonzero"), *m))
        .collect()
}

fn expect(ok: bool, observed: String) -> Result<String, String> {
    if ok {
        Ok(observed)
    } else {
        Err(observed)
    }
}

fn verdict_is(v: &FreenessVerdict, exps: Option<&[u32]>) -> bool {
    match (v, exps) {
        (FreenessVerdict::Free { exponents, .. }, Some(e)) => *exponents == Exponents::new(e.to_vec()),
        (FreenessVerdict::NotFree(_), None) => true,
        _ => false,
    }
}

fn whirl_kappa(spec: &str) -> Multiarrangement {
    ziegler_multiplicity(&entry(spec), 11).expect("t is hyperplane 11").multi
}

fn whirl_a_kappa() -> Result<String, String> {
    let z = whirl_kappa("whirlA");
    let want = profile_of(&[
        (&[1, 0, 0], 3),
        (&[0, 1, 0], 3),
        (&[0, 0, 1], 3),
        (&[1, 1, 0], 1),
        (&[1, 0, 1], 1),
        (&[0, 1, 1], 1),
    ]);
    expect(z.profile() == want, z.display_q())
}

fn whirl_b_kappa() -> Result<String, String> {
    let z = whirl_kappa("whirlB");
    let want = profile_of(&[
        (&[1, 0, 0], 3),
        (&[0, 1, 0], 3),
        (&[0, 0, 1], 3),
        (&[1, -2, 0], 1),
        (&[1, 0, 1], 1),
        (&[0, 1, 1], 1),
    ]);
    expect(z.profile() == want, z.display_q())
}

fn whirl_a_kappa_not_free() -> Result<String, String> {
    let v = freeness_oracle(&whirl_kappa("whirlA"), None);
    expect(v.is_not_free(), v.to_string())
}

fn whirl_b_kappa_free() -> Result<String, String> {
    let v = freeness_oracle(&whirl_kappa("whirlB"), None);
    expect(verdict_is(&v, Some(&[4, 4, 4])), v.to_string())
}

fn whirl_supports_not_free() -> Result<String, String> {
    let mut out = Vec::new();
    let mut ok = true;
    for spec in ["whirlA", "whirlB"] {
        let s = whirl_kappa(spec).arrangement().clone();
        let v = freeness_oracle(&Multiarrangement::simple(s), None);
        ok &= v.is_not_free();
        out.push(format!("{spec}'': {v}"));
    }
    expect(ok, out.join("; "))
}

fn whirl_lattices() -> Result<String, String> {
    let a = entry("whirlA");
    let b = entry("whirlB");
    let la = lattice(&a).map_err(|e| e.to_string())?;
    let lb = lattice(&b).map_err(|e| e.to_string())?;
    let ra = lattice(whirl_kappa("whirlA").arrangement()).map_err(|e| e.to_string())?;
    let rb = lattice(whirl_kappa("whirlB").arrangement()).map_err(|e| e.to_string())?;
    let full = la.same_incidence(&lb);
    let restricted = ra.same_incidence(&rb);
    expect(
        full && restricted,
        format!("A/B {full}, A''/B'' {restricted}, flats per rank {:?}", la.counts()),
    )
}

fn whirl_support_charpoly() -> Result<String, String> {
    let s = whirl_kappa("whirlA").arrangement().clone();
    let chi = lattice(&s).map_err(|e| e.to_string())?.char_poly();
    expect(
        chi == UniPoly::from_i64(&[-7, 12, -6, 1]) && chi.nonneg_integer_roots().is_none(),
        chi.to_string(),
    )
}

fn e7d_exponents() -> Result<String, String> {
    let v = freeness_oracle(&Multiarrangement::simple(entry("E7D")), None);
    expect(verdict_is(&v, Some(&[1, 5, 5, 5, 5])), v.to_string())
}

fn e7b_kappa_from_d() -> Result<String, String> {
    let z = ziegler_multiplicity(&entry("E7D"), 20).map_err(|e| e.to_string())?;
    let b = entry_multi("E7B_kappa");
    expect(z.multi.profile() == b.profile(), z.multi.display_q())
}

fn e7b_kappa_exponents() -> Result<String, String> {
    let v = freeness_oracle(&entry_multi("E7B_kappa"), None);
    expect(verdict_is(&v, Some(&[5, 5, 5, 5])), v.to_string())
}

/// Euler restriction of `(A^{H_u}, kappa)` at `H_u ∩ H_x` and Ziegler
/// restriction of `A^{H_x}` at `H_x ∩ H_u`, both in coordinates `y, z`.
pub fn euler_vs_ziegler_profiles() -> (Multiarrangement, Multiarrangement) {
    let a = entry("euler_vs_ziegler");
    let zu = ziegler_multiplicity(&a, 0).expect("u").multi;
    let x_in_u = zu
        .arrangement()
        .index_of(&LinearForm::from_ints(&[1, 0, 0]).expect("x"))
        .expect("x survives in A^{H_u}");
    let euler = triple(&zu, x_in_u).expect("triple").restriction;
    let ax = a.restriction(1).expect("x").arrangement;
    let u_in_x = ax
        .index_of(&LinearForm::from_ints(&[1, 0, 0]).expect("u"))
        .expect("u survives in A^{H_x}");
    let ziegler = ziegler_multiplicity(&ax, u_in_x).expect("ziegler").multi;
    (euler, ziegler)
}

fn euler_profile() -> Result<String, String> {
    let (e, _) = euler_vs_ziegler_profiles();
    let want = profile_of(&[(&[1, 0], 3), (&[0, 1], 3), (&[1, 1], 3)]);
    expect(e.profile() == want, e.display_q())
}

fn ziegler_profile() -> Result<String, String> {
    let (_, z) = euler_vs_ziegler_profiles();
    let want = profile_of(&[(&[1, 0], 3), (&[0, 1], 2), (&[1, 1], 3)]);
    expect(z.profile() == want, z.display_q())
}

fn euler_ziegler_differ_once() -> Result<String, String> {
    let (e, z) = euler_vs_ziegler_profiles();
    let (pe, pz) = (e.profile(), z.profile());
    let keys: std::collections::BTreeSet<_> = pe.keys().chain(pz.keys()).collect();
    let diff = keys.iter().filter(|k| pe.get(**k) != pz.get(**k)).count();
    expect(diff == 1, format!("{} vs {}, {diff} differing", e.display_q(), z.display_q()))
}

fn xyz_not_free() -> Result<String, String> {
    let v = freeness_oracle(&Multiarrangement::simple(entry("xyz_xyz_sum")), None);
    expect(v.is_not_free(), v.to_string())
}

fn boolean3() -> Result<String, String> {
    let v = freeness_oracle(&Multiarrangement::simple(entry("boolean(3)")), None);
    expect(verdict_is(&v, Some(&[1, 1, 1])), v.to_string())
}

fn braid3_charpoly() -> Result<String, String> {
    let chi = lattice(&entry("braid(3)")).map_err(|e| e.to_string())?.char_poly();
    expect(chi == UniPoly::from_roots(&[0, 1, 2]), chi.to_string())
}

fn mult_xxyyz() -> Result<String, String> {
    let v = freeness_oracle(&entry_multi("mult_xxyyz"), None);
    expect(verdict_is(&v, Some(&[2, 2, 3])), v.to_string())
}

fn mult_xxyyzz() -> Result<String, String> {
    let v = freeness_oracle(&entry_multi("mult_xxyyzz"), None);
    expect(verdict_is(&v, Some(&[3, 3, 4])), v.to_string())
}

pub fn golden_suite() -> Vec<GoldenCheck> {
    use Origin::*;
    let c = |entry, name, origin, expected, check| GoldenCheck {
        entry,
        name,
        origin,
        expected,
        check,
    };
    vec![
        c("boolean(3)", "exponents", Trivial, "Free {1, 1, 1}", boolean3),
        c("braid(3)", "char_poly", Computed, "t^3 - 3t^2 + 2t", braid3_charpoly),
        c("whirlA", "ziegler_at_t", Published, "x^3y^3z^3(x+y)(x+z)(y+z)", whirl_a_kappa),
        c("whirlB", "ziegler_at_t", Published, "x^3y^3z^3(x-2y)(x+z)(y+z)", whirl_b_kappa),
        c("whirlA", "kappa_not_free", Published, "NotFree", whirl_a_kappa_not_free),
        c("whirlB", "kappa_free", Published, "Free {4, 4, 4}", whirl_b_kappa_free),
        c("whirlA/whirlB", "supports_not_free", Published, "NotFree, NotFree", whirl_supports_not_free),
        c("whirlA/whirlB", "same_lattice", Published, "identical ranked incidence", whirl_lattices),
        c("whirlA", "support_char_poly", Computed, "t^3 - 6t^2 + 12t - 7", whirl_support_charpoly),
        c("E7D", "exponents", Published, "Free {1, 5, 5, 5, 5}", e7d_exponents),
        c("E7D", "ziegler_at_x4", Published, "Q(B, kappa) as listed", e7b_kappa_from_d),
        c("E7B_kappa", "exponents", Published, "Free {5, 5, 5, 5}", e7b_kappa_exponents),
        c("euler_vs_ziegler", "euler_restriction", Published, "y^3z^3(y+z)^3", euler_profile),
        c("euler_vs_ziegler", "ziegler_restriction", Published, "y^3z^2(y+z)^3", ziegler_profile),
        c("euler_vs_ziegler", "profiles_differ", Published, "exactly one flat differs", euler_ziegler_differ_once),
        c("xyz_xyz_sum", "not_free", Trivial, "NotFree", xyz_not_free),
        c("mult_xxyyz", "exponents", Published, "Free {2, 2, 3}", mult_xxyyz),
        c("mult_xxyyzz", "exponents", Published, "Free {3, 3, 4}", mult_xxyyzz),
    ]
}
