//! One pass/fail line per acceptance criterion.

use std::process::ExitCode;
use std::time::Instant;

use freearr::arrangement::{lattice, Arrangement, LinearForm, UniPoly};
use freearr::certify::{
    certificate_from_json, certificate_to_json, certify_inductive, certify_inductive_multi,
    lift_inductive, lift_via_deletion, theta_basis_filtration, verify_additive_order,
    verify_cert, Certificate, ThetaFiltration,
};
use freearr::corpus::{euler_vs_ziegler_profiles, generate_spec};
use freearr::dsolve::{free_hilbert_dim, freeness_oracle, graded_dim, FreenessVerdict};
use freearr::multi::{
    delta_multiplicity, rank2_exponents, triple, ziegler_multiplicity, Exponents,
    Multiarrangement,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn arr(spec: &str) -> Arrangement {
    generate_spec(spec).expect("corpus entry").arrangement
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn oracle(ma: &Multiarrangement) -> FreenessVerdict {
    freeness_oracle(ma, None)
}

fn exps(v: &[u32]) -> Exponents {
    Exponents::new(v.to_vec())
}

/// `exp` with one entry equal to 1 removed.
fn drop_a_one(e: &Exponents) -> Option<Exponents> {
    e.without_one(1)
}

fn profile(rows: &[(&[i64], u32)]) -> std::collections::BTreeMap<LinearForm, u32> {
    rows.iter()
        .map(|(r, m)| (LinearForm::from_ints(r).unwrap(), *m))
        .collect()
}

/// Verifies a certificate and its JSON round trip.
fn check_cert(c: &Certificate, what: &str) -> Result<(), String> {
    verify_cert(c).map_err(|e| format!("{what}: {e}"))?;
    let back = certificate_from_json(&certificate_to_json(c)).map_err(|e| format!("{what}: {e}"))?;
    verify_cert(&back).map_err(|e| format!("{what} after JSON: {e}"))
}

fn whirl_pair() -> Outcome {
    let a = arr("whirlA");
    let b = arr("whirlB");
    let ka = ziegler_multiplicity(&a, 11).unwrap().multi;
    let kb = ziegler_multiplicity(&b, 11).unwrap().multi;
    let va = oracle(&ka);
    let vb = oracle(&kb);
    ensure(va.is_not_free(), format!("(A'', kappa): {va}"))?;
    ensure(vb.exponents() == Some(&exps(&[4, 4, 4])), format!("(B'', kappa): {vb}"))?;
    for (name, k) in [("A''", &ka), ("B''", &kb)] {
        let v = oracle(&Multiarrangement::simple(k.arrangement().clone()));
        ensure(v.is_not_free(), format!("{name}: {v}"))?;
    }
    let full = lattice(&a).unwrap().same_incidence(&lattice(&b).unwrap());
    let res = lattice(ka.arrangement())
        .unwrap()
        .same_incidence(&lattice(kb.arrangement()).unwrap());
    ensure(full && res, format!("lattices agree: A/B {full}, A''/B'' {res}"))?;
    Ok(format!("(A'',kappa) not free, (B'',kappa) free {{4,4,4}}, |kappa| = {}", ka.order()))
}

fn euler_vs_ziegler() -> Outcome {
    let (e, z) = euler_vs_ziegler_profiles();
    let want_e = profile(&[(&[1, 0], 3), (&[0, 1], 3), (&[1, 1], 3)]);
    let want_z = profile(&[(&[1, 0], 3), (&[0, 1], 2), (&[1, 1], 3)]);
    ensure(e.profile() == want_e, format!("Euler restriction {}", e.display_q()))?;
    ensure(z.profile() == want_z, format!("Ziegler restriction {}", z.display_q()))?;
    let (pe, pz) = (e.profile(), z.profile());
    let differ = pe.keys().chain(pz.keys()).collect::<std::collections::BTreeSet<_>>();
    let n = differ.iter().filter(|k| pe.get(**k) != pz.get(**k)).count();
    ensure(n == 1, format!("{n} flats differ"))?;
    Ok(format!("{} vs {}", e.display_q(), z.display_q()))
}

const FREE_SIMPLE: &[&str] = &[
    "boolean(2)",
    "boolean(3)",
    "boolean(4)",
    "braid(3)",
    "braid(4)",
    "intermediate(1,3,1)",
    "intermediate(2,3,1)",
    "intermediate(2,3,2)",
    "intermediate(2,3,3)",
    "E7D",
];

fn ziegler_theorem() -> Outcome {
    let mut restrictions = 0;
    for spec in FREE_SIMPLE {
        let a = arr(spec);
        let v = oracle(&Multiarrangement::simple(a.clone()));
        let e = v.exponents().ok_or(format!("{spec}: {v}"))?.clone();
        let rest = drop_a_one(&e).ok_or(format!("{spec}: no exponent 1 in {e}"))?;
        for h0 in 0..a.len() {
            let k = ziegler_multiplicity(&a, h0).unwrap().multi;
            let vk = oracle(&k);
            ensure(
                vk.exponents() == Some(&rest),
                format!("{spec} at {h0}: {vk}, expected {rest}"),
            )?;
            restrictions += 1;
        }
    }
    Ok(format!("{} arrangements, {restrictions} Ziegler restrictions", FREE_SIMPLE.len()))
}

fn main_theorem_lift() -> Outcome {
    let specs = [
        "boolean(3)",
        "boolean(4)",
        "braid(3)",
        "braid(4)",
        "intermediate(2,3,1)",
        "intermediate(2,3,2)",
        "intermediate(2,3,3)",
    ];
    let mut lifts = 0;
    for spec in specs {
        let a = arr(spec);
        let c = certify_inductive(&a)
            .map_err(|e| e.to_string())?
            .ok_or(format!("{spec}: not inductively free"))?;
        check_cert(&c, spec)?;
        let rest = drop_a_one(c.exponents()).ok_or(format!("{spec}: no exponent 1"))?;
        for h0 in 0..a.len() {
            let l = lift_inductive(&c, h0).map_err(|e| format!("{spec} at {h0}: {e}"))?;
            check_cert(&l, &format!("{spec} lifted at {h0}"))?;
            ensure(
                l.exponents() == &rest,
                format!("{spec} at {h0}: lifted {}, expected {rest}", l.exponents()),
            )?;
            lifts += 1;
        }
    }
    Ok(format!("{lifts} lifted certificates verified"))
}

fn deletion_lift() -> Outcome {
    let a = arr("xyz_xyz_sum");
    let h0 = 3;
    let v = oracle(&Multiarrangement::simple(a.clone()));
    ensure(v.is_not_free(), format!("A: {v}"))?;
    let vd = oracle(&Multiarrangement::simple(a.deletion(h0).unwrap()));
    ensure(vd.is_free(), format!("A': {vd}"))?;
    let res = a.restriction(h0).unwrap().arrangement;
    let cr = certify_inductive(&res)
        .map_err(|e| e.to_string())?
        .ok_or("A'' not inductively free")?;
    let l = lift_via_deletion(&a, h0, &cr).map_err(|e| e.to_string())?;
    check_cert(&l, "lift via deletion")?;
    Ok(format!("A not free, A' {vd}, (A'',kappa) certified with {}", l.exponents()))
}

fn additive_example() -> Outcome {
    let d = arr("E7D");
    let order: Vec<usize> = (0..d.len()).collect();
    let f = verify_additive_order(&d, &order)
        .map_err(|e| e.to_string())?
        .map_err(|s| format!("step {:?} not free: {}", s.mult, s.verdict))?;
    ensure(f.steps.len() == 21, format!("{} steps", f.steps.len()))?;
    ensure(
        f.final_exponents() == Some(&exps(&[1, 5, 5, 5, 5])),
        format!("final {:?}", f.final_exponents()),
    )?;
    let bk = ziegler_multiplicity(&d, 20).unwrap().multi;
    let printed = generate_spec("E7B_kappa").unwrap().multi();
    ensure(bk.profile() == printed.profile(), format!("Q(B,kappa) = {}", bk.display_q()))?;
    let vb = oracle(&bk);
    ensure(vb.exponents() == Some(&exps(&[5, 5, 5, 5])), format!("(B,kappa): {vb}"))?;
    let b = bk.arrangement().clone();
    ensure(b.len() == 16, format!("|B| = {}", b.len()))?;
    let target = UniPoly::from_roots(&[1, 5, 5]);
    for h in 0..b.len() {
        let r = b.restriction(h).unwrap().arrangement;
        let chi = lattice(&r).unwrap().char_poly();
        if chi == target {
            let v = oracle(&Multiarrangement::simple(r));
            ensure(
                v.exponents() != Some(&exps(&[1, 5, 5])),
                format!("B^{h} is free with {{1,5,5}}"),
            )?;
        }
    }
    // one step down from kappa at each hyperplane of multiplicity one
    let mut down = 0;
    for h in 0..b.len() {
        if bk.mult()[h] == 1 {
            let v = oracle(&bk.deletion(h).unwrap());
            ensure(!v.is_free(), format!("deletion of (B,kappa) at {h} is free"))?;
            down += 1;
        }
    }
    match theta_basis_filtration(&bk).map_err(|e| e.to_string())? {
        ThetaFiltration::Applicable { min_exp: 5, steps } => {
            ensure(
                steps.iter().all(|s| s.observed.is_some() && s.consistent()),
                "theta filtration step disagrees with the oracle",
            )?;
            Ok(format!(
                "21 free prefixes, (B,kappa) {{5,5,5,5}}, no B^H free with {{1,5,5}}, \
                 {down} deletions not free, theta filtration of {} steps",
                steps.len()
            ))
        }
        other => Err(format!("theta filtration: {other:?}")),
    }
}

fn failure_example() -> Outcome {
    let bk = generate_spec("E7B_kappa").unwrap().multi();
    let b = bk.arrangement().clone();
    let h0 = b
        .index_of(&LinearForm::from_ints(&[1, 1, 1, 0]).unwrap())
        .ok_or("x1+x2+x3 not in B")?;
    let vd = oracle(&Multiarrangement::simple(b.deletion(h0).unwrap()));
    ensure(vd.is_not_free(), format!("B': {vd}"))?;
    let bres = b.restriction(h0).unwrap().arrangement;
    let c = certify_inductive(&bres)
        .map_err(|e| e.to_string())?
        .ok_or("B'' not inductively free")?;
    ensure(c.exponents() == &exps(&[1, 3, 3]), format!("exp B'' = {}", c.exponents()))?;
    let k = ziegler_multiplicity(&b, h0).unwrap().multi;
    let r = certify_inductive_multi(&k).map_err(|e| e.to_string())?;
    let v = r.root_verdict.as_ref().ok_or("no root verdict")?;
    ensure(v.exponents() == Some(&exps(&[5, 5, 5])), format!("(B'',kappa): {v}"))?;
    ensure(r.certificate.is_none(), "(B'',kappa) certified inductively free")?;
    ensure(
        r.obstructions.len() == k.support().len(),
        format!("{} of {} hyperplanes obstructed", r.obstructions.len(), k.support().len()),
    )?;
    let orders: Vec<u64> = r.obstructions.iter().map(|o| o.restriction_order).collect();
    ensure(orders == vec![9, 9, 8, 8, 9, 9, 8], format!("|kappa*| per hyperplane {orders:?}"))?;
    ensure(
        r.obstructions.iter().all(|o| o.required == vec![10]),
        "required order is not 10",
    )?;
    for h in k.support() {
        let v = oracle(&k.deletion(h).unwrap());
        ensure(v.is_not_free(), format!("deletion of (B'',kappa) at {h}: {v}"))?;
    }
    Ok(format!(
        "B' not free, B'' {{1,3,3}}, (B'',kappa) {{5,5,5}}, |kappa*| {orders:?} never 10, no deletion free"
    ))
}

fn concentrated() -> Outcome {
    let specs = ["boolean(3)", "braid(3)", "braid(4)", "intermediate(2,3,1)", "intermediate(2,3,2)"];
    let mut n = 0;
    for spec in specs {
        let a = arr(spec);
        let e = oracle(&Multiarrangement::simple(a.clone()))
            .exponents()
            .cloned()
            .ok_or(format!("{spec} not free"))?;
        let rest = drop_a_one(&e).ok_or(format!("{spec}: no exponent 1"))?;
        let inductive = certify_inductive(&a).map_err(|e| e.to_string())?.is_some();
        for h0 in 0..a.len() {
            for m0 in [2, 3] {
                let d = delta_multiplicity(&a, h0, m0).unwrap();
                let v = oracle(&d);
                ensure(
                    v.exponents() == Some(&rest.with(m0)),
                    format!("{spec} delta({h0},{m0}): {v}"),
                )?;
                let star = triple(&d, h0).unwrap().restriction;
                let kappa = ziegler_multiplicity(&a, h0).unwrap().multi;
                ensure(
                    star.profile() == kappa.profile(),
                    format!("{spec} delta* {} vs kappa {}", star.display_q(), kappa.display_q()),
                )?;
                if inductive {
                    let c = certify_inductive_multi(&d)
                        .map_err(|e| e.to_string())?
                        .certificate
                        .ok_or(format!("{spec} delta({h0},{m0}) not certified"))?;
                    check_cert(&c, &format!("{spec} delta({h0},{m0})"))?;
                }
                n += 1;
            }
        }
    }
    // the equivalence in the other direction: a non-free arrangement stays non-free
    let a = arr("xyz_xyz_sum");
    for h0 in 0..a.len() {
        for m0 in [2, 3] {
            let v = oracle(&delta_multiplicity(&a, h0, m0).unwrap());
            ensure(v.is_not_free(), format!("xyz_xyz_sum delta({h0},{m0}): {v}"))?;
            n += 1;
        }
    }
    Ok(format!("{n} concentrated multiplicities"))
}

fn constant_multiplicity() -> Outcome {
    let ma = Multiarrangement::constant(arr("braid(4)"), 2);
    let r = certify_inductive_multi(&ma).map_err(|e| e.to_string())?;
    let c = r.certificate.ok_or("not certified")?;
    check_cert(&c, "braid(4) with mu = 2")?;
    let v = oracle(&ma);
    ensure(v.exponents() == Some(c.exponents()), format!("oracle {v}, certificate {}", c.exponents()))?;
    Ok(format!("|mu| = {}, exponents {}, {} certificate nodes", ma.order(), c.exponents(), c.size()))
}

fn properties() -> Outcome {
    let mut checks = 0u32;
    let mut simple = Vec::new();
    for spec in FREE_SIMPLE.iter().chain(["xyz_xyz_sum", "whirlA", "whirlB"].iter()) {
        simple.push((spec.to_string(), arr(spec)));
    }
    for (spec, a) in &simple {
        let chi = lattice(a).unwrap().char_poly();
        for h in 0..a.len() {
            let chi_d = lattice(&a.deletion(h).unwrap()).unwrap().char_poly();
            let chi_r = lattice(&a.restriction(h).unwrap().arrangement).unwrap().char_poly();
            ensure(chi == chi_d.sub(&chi_r), format!("{spec}: deletion-restriction at {h}"))?;
            let k = ziegler_multiplicity(a, h).unwrap().multi;
            ensure(k.order() == a.len() as u64 - 1, format!("{spec}: |kappa| at {h}"))?;
            if k.rank() <= 2 {
                let e = rank2_exponents(&k).unwrap();
                ensure(e.sum() == k.order(), format!("{spec}: rank-two sum at {h}"))?;
            }
            checks += 3;
        }
        let v = oracle(&Multiarrangement::simple(a.clone()));
        if let Some(e) = v.exponents() {
            ensure(chi == UniPoly::from_roots(e.as_slice()), format!("{spec}: Terao factorization"))?;
            checks += 1;
        }
    }
    let mut multis: Vec<(String, Multiarrangement)> = ["mult_xxyyz", "mult_xxyyzz", "E7B_kappa"]
        .iter()
        .map(|s| (s.to_string(), generate_spec(s).unwrap().multi()))
        .collect();
    multis.push(("braid(3) mu=2".into(), Multiarrangement::constant(arr("braid(3)"), 2)));
    for (name, ma) in &multis {
        let v = oracle(ma);
        if let Some(e) = v.exponents() {
            for d in 0..=e.as_slice().iter().copied().max().unwrap_or(0) + 1 {
                ensure(
                    graded_dim(ma, d) as u64 == free_hilbert_dim(e, d),
                    format!("{name}: Hilbert function in degree {d}"),
                )?;
                checks += 1;
            }
            for h in ma.support() {
                let vd = oracle(&ma.deletion(h).unwrap());
                if let Some(ed) = vd.exponents() {
                    ensure(e.differs_by_one_step(ed), format!("{name}: exponents {e} and {ed} at {h}"))?;
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{checks} property checks"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("whirl pair", whirl_pair),
        ("Euler vs Ziegler restriction", euler_vs_ziegler),
        ("Ziegler exponents", ziegler_theorem),
        ("inductive lift", main_theorem_lift),
        ("lift via free deletion", deletion_lift),
        ("additively free E7 subarrangement", additive_example),
        ("free but not inductively free restriction", failure_example),
        ("concentrated multiplicities", concentrated),
        ("constant multiplicity on braid(4)", constant_multiplicity),
        ("property suite", properties),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
