//! `freearr`: command-line access to lattices, freeness verdicts and
//! certificates.
//!
//! Exit codes: 0 success or found, 1 false or not found (exhaustive), 2 input
//! or precondition error, 3 inconclusive or budget exhausted.

mod report;

use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use freearr::arrangement::{lattice, parse_text, write_text, Arrangement};
use freearr::certify::{
    additive_filtration_multi, certificate_from_json, certificate_to_json, certify_additive,
    certify_divisional, certify_inductive, certify_inductive_multi, certify_recursive,
    certify_recursive_multi, lift_inductive, lift_recursive, lift_via_deletion, verify_cert,
    AdditiveOptions, AdditiveOutcome, Certificate, FreeFiltration, RecursiveOutcome,
};
use freearr::corpus::{generate_spec, golden_suite, NAMES};
use freearr::dsolve::freeness_oracle;
use freearr::multi::{triple, ziegler_multiplicity, Multiarrangement};

use report::Report;

#[derive(Parser)]
#[command(name = "freearr", version, about = "Freeness of rational hyperplane arrangements and multiarrangements")]
struct Cli {
    /// Print JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension, hyperplanes and multiplicities.
    Info { input: Option<String> },
    /// Flats of the intersection lattice by rank.
    Lattice { input: Option<String> },
    /// Characteristic polynomial and its roots.
    Charpoly { input: Option<String> },
    /// Ziegler restriction (A^H0, kappa) in the arrangement file format.
    Ziegler {
        input: Option<String>,
        #[arg(long)]
        h0: usize,
    },
    /// Deletion and Euler restriction of a multiarrangement.
    Triple {
        input: Option<String>,
        #[arg(long)]
        h0: usize,
    },
    /// Freeness verdict from minimal generators.
    Free {
        input: Option<String>,
        #[arg(long)]
        dmax: Option<u32>,
        /// Test the Ziegler restriction to this hyperplane instead.
        #[arg(long)]
        h0: Option<usize>,
    },
    /// Search for a freeness certificate.
    Certify {
        input: Option<String>,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Deletion moves per branch (recursive) or oracle calls (additive).
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Recheck a certificate JSON file.
    Verify { cert: Option<String> },
    /// Certificate of (A^H0, kappa) lifted from a certificate of A.
    Lift {
        input: Option<String>,
        #[arg(long)]
        h0: usize,
        /// Certify A^H0 and lift along the free deletion A \ {H0}.
        #[arg(long)]
        via_deletion: bool,
        /// Deletion moves per branch when no inductive certificate exists.
        #[arg(long, default_value_t = 3)]
        budget: u32,
    },
    /// Named corpus entries; `corpus list` shows them all.
    Corpus {
        name: String,
        params: Vec<u32>,
        /// Print the entry in the arrangement file format.
        #[arg(long)]
        emit: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Inductive,
    Additive,
    Recursive,
    Divisional,
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl From<freearr::Error> for Failure {
    fn from(e: freearr::Error) -> Self {
        Failure {
            code: 2,
            msg: e.to_string(),
        }
    }
}

fn input_error(msg: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        msg: msg.into(),
    }
}

type Outcome = Result<Report, Failure>;

const DEFAULT_RECURSIVE_BUDGET: u32 = 3;

struct Input {
    arr: Arrangement,
    mult: Option<Vec<u32>>,
}

impl Input {
    fn multi(&self) -> Result<Multiarrangement, Failure> {
        Ok(match &self.mult {
            Some(m) => Multiarrangement::new(self.arr.clone(), m.clone())?,
            None => Multiarrangement::simple(self.arr.clone()),
        })
    }

    fn is_simple(&self) -> bool {
        self.mult.as_ref().is_none_or(|m| m.iter().all(|&x| x == 1))
    }

    fn simple(&self, what: &str) -> Result<&Arrangement, Failure> {
        if self.is_simple() {
            Ok(&self.arr)
        } else {
            Err(input_error(format!("{what} needs a simple arrangement")))
        }
    }
}

fn read_source(src: &str) -> Result<String, Failure> {
    if src == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| input_error(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(src).map_err(|e| input_error(format!("{src}: {e}")))
    }
}

/// `corpus:NAME(...)`, a file path, or `-` for stdin.
fn load(src: Option<&str>) -> Result<Input, Failure> {
    let src = src.unwrap_or("-");
    if let Some(spec) = src.strip_prefix("corpus:") {
        let e = generate_spec(spec)?;
        return Ok(Input {
            arr: e.arrangement,
            mult: e.mult,
        });
    }
    let p = parse_text(&read_source(src)?)?;
    Ok(Input {
        arr: p.arrangement()?,
        mult: p.has_mult.then_some(p.mult),
    })
}

fn info(inp: &Input) -> Outcome {
    let ma = inp.multi()?;
    let a = &inp.arr;
    let mut text = format!(
        "dim {}\nvars {}\nhyperplanes {}\nrank {}\n",
        a.dim(),
        a.names().join(" "),
        a.len(),
        a.rank()
    );
    if !inp.is_simple() {
        text.push_str(&format!("order {}\n", ma.order()));
    }
    text.push_str(&format!("Q = {}\n", ma.display_q()));
    let mut rows = vec![vec!["index".into(), "form".into(), "mult".into()]];
    for (i, (f, m)) in a.display_forms().iter().zip(ma.mult()).enumerate() {
        rows.push(vec![i.to_string(), f.clone(), m.to_string()]);
    }
    text.push_str(&report::table(&rows));
    let mut j = report::multi(&ma);
    j["rank"] = json!(a.rank());
    Ok(Report::ok(text, j))
}

fn lattice_cmd(inp: &Input) -> Outcome {
    let lat = lattice(&inp.arr)?;
    let mut text = String::new();
    let mut ranks = Vec::new();
    for r in 0..=lat.rank() {
        let flats = lat.by_rank(r);
        text.push_str(&format!("rank {r}: {} flats\n", flats.len()));
        let mut rows = Vec::new();
        let mut js = Vec::new();
        for x in flats {
            rows.push(vec![
                format!("  {:?}", x.hyperplanes()),
                format!("mobius {}", x.mobius()),
            ]);
            js.push(json!({"hyperplanes": x.hyperplanes(), "mobius": x.mobius()}));
        }
        text.push_str(&report::table(&rows));
        ranks.push(js);
    }
    let j = json!({"rank": lat.rank(), "counts": lat.counts(), "flats": ranks});
    Ok(Report::ok(text, j))
}

fn charpoly(inp: &Input) -> Outcome {
    let chi = lattice(&inp.arr)?.char_poly();
    let roots = chi.nonneg_integer_roots();
    let mut text = format!("chi(t) = {chi}\n");
    match &roots {
        Some(r) => text.push_str(&format!("roots {r:?}\n")),
        None => text.push_str("does not split over the nonnegative integers\n"),
    }
    let mut j = report::poly(&chi);
    j["roots"] = json!(roots);
    Ok(Report::ok(text, j))
}

fn ziegler(inp: &Input, h0: usize) -> Outcome {
    let a = inp.simple("ziegler")?;
    let z = ziegler_multiplicity(a, h0)?;
    let ma = &z.multi;
    let comments = vec![
        format!("Ziegler restriction to hyperplane {h0}"),
        format!("Q = {}", ma.display_q()),
    ];
    let text = write_text(ma.arrangement(), Some(ma.mult()), &comments);
    Ok(Report::ok(text, report::multi(ma)))
}

fn triple_cmd(inp: &Input, h0: usize) -> Outcome {
    let t = triple(&inp.multi()?, h0)?;
    let rows = vec![
        vec!["deletion".into(), format!("|mu| = {}", t.deletion.order()), format!("Q = {}", t.deletion.display_q())],
        vec![
            "restriction".into(),
            format!("|mu| = {}", t.restriction.order()),
            format!("Q = {}", t.restriction.display_q()),
        ],
    ];
    let j = json!({
        "hyperplane": h0,
        "deletion": report::multi(&t.deletion),
        "restriction": report::multi(&t.restriction),
    });
    Ok(Report::ok(report::table(&rows), j))
}

fn free(inp: &Input, dmax: Option<u32>, h0: Option<usize>) -> Outcome {
    let ma = match h0 {
        Some(h) => ziegler_multiplicity(inp.simple("free --h0")?, h)?.multi,
        None => inp.multi()?,
    };
    let v = freeness_oracle(&ma, dmax);
    let names = ma.arrangement().names();
    let mut text = format!("{v}\n");
    if let freearr::dsolve::FreenessVerdict::Free { basis, .. } = &v {
        for (i, d) in basis.iter().enumerate() {
            text.push_str(&format!("  theta_{} = {}\n", i + 1, d.display_with(names)));
        }
    }
    Ok(Report::ok(text, report::verdict(&v, names)).with_code(report::verdict_code(&v)))
}

fn cert_report(c: &Certificate, what: &str) -> Report {
    let text = format!(
        "{what}, exponents {}, size {}{}\n",
        c.exponents(),
        c.size(),
        if c.has_delete() { ", uses deletion" } else { "" }
    );
    Report::ok(text, certificate_to_json(c))
}

fn filtration_report(f: &FreeFiltration, names: &[String]) -> Report {
    let mut rows = vec![vec!["step".into(), "hyperplane".into(), "mult".into(), "verdict".into()]];
    for (i, s) in f.steps.iter().enumerate() {
        rows.push(vec![
            (i + 1).to_string(),
            s.hyperplane.to_string(),
            format!("{:?}", s.mult),
            s.verdict.to_string(),
        ]);
    }
    let text = format!(
        "additively free, exponents {}\n{}",
        f.final_exponents().map(|e| e.to_string()).unwrap_or_default(),
        report::table(&rows)
    );
    let steps: Vec<Value> = f
        .steps
        .iter()
        .map(|s| json!({"hyperplane": s.hyperplane, "mult": s.mult, "verdict": report::verdict(&s.verdict, names)}))
        .collect();
    let j = json!({
        "mode": "additive",
        "found": true,
        "order": f.order(),
        "exponents": f.final_exponents().map(report::exps),
        "steps": steps,
    });
    Report::ok(text, j)
}

fn not_found(mode: &str, code: u8, detail: String) -> Report {
    let text = format!("{detail}\n");
    let j = json!({"mode": mode, "found": false, "detail": detail});
    Report::ok(text, j).with_code(code)
}

fn certify(inp: &Input, mode: Mode, budget: Option<u64>) -> Outcome {
    let ma = inp.multi()?;
    match mode {
        Mode::Inductive if inp.is_simple() => Ok(match certify_inductive(&inp.arr)? {
            Some(c) => cert_report(&c, "inductively free"),
            None => not_found("inductive", 1, "not inductively free".into()),
        }),
        Mode::Inductive => {
            let r = certify_inductive_multi(&ma)?;
            if let Some(c) = &r.certificate {
                return Ok(cert_report(c, "inductively free"));
            }
            let mut detail = "not inductively free".to_string();
            if let Some(v) = &r.root_verdict {
                detail.push_str(&format!("; root {v}"));
            }
            for o in &r.obstructions {
                detail.push_str(&format!(
                    "\n  hyperplane {}: |mu*| = {}, need one of {:?}",
                    o.hyperplane, o.restriction_order, o.required
                ));
            }
            Ok(not_found("inductive", 1, detail))
        }
        Mode::Recursive => {
            let b = match budget {
                Some(b) => u32::try_from(b).map_err(|_| input_error("budget too large"))?,
                None => DEFAULT_RECURSIVE_BUDGET,
            };
            let out = if inp.is_simple() {
                certify_recursive(&inp.arr, b)?
            } else {
                certify_recursive_multi(&ma, b)?
            };
            Ok(match out {
                RecursiveOutcome::Found(c) => cert_report(&c, "recursively free"),
                RecursiveOutcome::NotFoundWithinBudget { budget } => not_found(
                    "recursive",
                    3,
                    format!("no certificate with at most {budget} deletion moves per branch"),
                ),
            })
        }
        Mode::Additive => {
            let mut opts = AdditiveOptions::default();
            if let Some(b) = budget {
                opts.budget = b;
            }
            let out = if inp.is_simple() {
                certify_additive(&inp.arr, opts)?
            } else {
                additive_filtration_multi(&ma, opts)?
            };
            Ok(match out {
                AdditiveOutcome::Found(f) => filtration_report(&f, inp.arr.names()),
                AdditiveOutcome::NotFound { oracle_calls } => not_found(
                    "additive",
                    1,
                    format!("not additively free ({oracle_calls} oracle calls)"),
                ),
                AdditiveOutcome::NotFoundWithinBudget { oracle_calls } => not_found(
                    "additive",
                    3,
                    format!("no free filtration found within {oracle_calls} oracle calls"),
                ),
            })
        }
        Mode::Divisional => {
            let a = inp.simple("divisional freeness")?;
            Ok(match certify_divisional(a)? {
                Some(f) => {
                    let mut text = "divisionally free\n".to_string();
                    text.push_str(&format!("  chi(A) = {}\n", f.char_polys[0]));
                    for (x, p) in f.flats.iter().zip(&f.char_polys[1..]) {
                        text.push_str(&format!("  {x:?}: {p}\n"));
                    }
                    let j = json!({
                        "mode": "divisional",
                        "found": true,
                        "flats": f.flats,
                        "char_polys": f.char_polys.iter().map(report::poly).collect::<Vec<_>>(),
                    });
                    Report::ok(text, j)
                }
                None => not_found("divisional", 1, "not divisionally free".into()),
            })
        }
    }
}

fn verify(src: Option<&str>) -> Outcome {
    let raw = read_source(src.unwrap_or("-"))?;
    let v: Value = serde_json::from_str(&raw).map_err(|e| input_error(format!("certificate JSON: {e}")))?;
    let c = certificate_from_json(&v)?;
    Ok(match verify_cert(&c) {
        Ok(()) => {
            let text = format!(
                "valid {} certificate, exponents {}, size {}\n",
                c.kind.as_str(),
                c.exponents(),
                c.size()
            );
            let j = json!({"valid": true, "kind": c.kind.as_str(), "exponents": report::exps(c.exponents())});
            Report::ok(text, j)
        }
        Err(f) => {
            let text = format!("invalid certificate at {}: {}\n", f.path, f.reason);
            let j = json!({"valid": false, "path": f.path, "reason": f.reason});
            Report::ok(text, j).with_code(1)
        }
    })
}

/// Inductive certificate, else a recursive one within `budget`.
fn any_certificate(a: &Arrangement, budget: u32) -> Result<Certificate, Failure> {
    if let Some(c) = certify_inductive(a)? {
        return Ok(c);
    }
    match certify_recursive(a, budget)? {
        RecursiveOutcome::Found(c) => Ok(c),
        RecursiveOutcome::NotFoundWithinBudget { budget } => Err(Failure {
            code: 3,
            msg: format!("no certificate to lift with at most {budget} deletion moves per branch"),
        }),
    }
}

/// Always prints the certificate JSON, so the output can be fed to `verify`.
fn lift(inp: &Input, h0: usize, via_deletion: bool, budget: u32) -> Outcome {
    let a = inp.simple("lift")?;
    let lifted = if via_deletion {
        let res = a.restriction(h0)?.arrangement;
        lift_via_deletion(a, h0, &any_certificate(&res, budget)?)?
    } else {
        let c = any_certificate(a, budget)?;
        if c.has_delete() {
            lift_recursive(&c, h0)?
        } else {
            lift_inductive(&c, h0)?
        }
    };
    let j = certificate_to_json(&lifted);
    let text = format!("{}\n", serde_json::to_string_pretty(&j).expect("JSON values serialize"));
    Ok(Report::ok(text, j))
}

fn corpus(name: &str, params: &[u32], emit: bool) -> Outcome {
    if name == "list" {
        let mut rows = vec![vec!["name".into(), "usage".into()]];
        rows.extend(NAMES.iter().map(|(n, u)| vec![n.to_string(), u.to_string()]));
        let mut checks = vec![vec!["entry".into(), "check".into(), "origin".into(), "expected".into()]];
        let suite = golden_suite();
        for g in &suite {
            checks.push(vec![g.entry.into(), g.name.into(), g.origin.label().into(), g.expected.into()]);
        }
        let text = format!("{}\n{}", report::table(&rows), report::table(&checks));
        let j = json!({
            "entries": NAMES.iter().map(|(n, u)| json!({"name": n, "usage": u})).collect::<Vec<_>>(),
            "checks": suite
                .iter()
                .map(|g| json!({"entry": g.entry, "name": g.name, "origin": g.origin.label(), "expected": g.expected}))
                .collect::<Vec<_>>(),
        });
        return Ok(Report::ok(text, j));
    }
    let spec = if params.is_empty() {
        name.to_string()
    } else {
        let p: Vec<String> = params.iter().map(u32::to_string).collect();
        format!("{name}({})", p.join(","))
    };
    let e = generate_spec(&spec)?;
    let mut j = report::multi(&e.multi());
    j["name"] = json!(e.spec_string());
    j["description"] = json!(e.description);
    if emit {
        return Ok(Report::ok(e.to_text(), j));
    }
    let mut text = format!(
        "{}: {}\ndim {}, {} hyperplanes\nQ = {}\n",
        e.spec_string(),
        e.description,
        e.arrangement.dim(),
        e.arrangement.len(),
        e.multi().display_q()
    );
    let rows: Vec<Vec<String>> = golden_suite()
        .iter()
        .filter(|g| g.entry == e.spec_string())
        .map(|g| vec![format!("  {}", g.name), g.origin.label().into(), g.expected.into()])
        .collect();
    text.push_str(&report::table(&rows));
    Ok(Report::ok(text, j))
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Info { input } => info(&load(input.as_deref())?),
        Command::Lattice { input } => lattice_cmd(&load(input.as_deref())?),
        Command::Charpoly { input } => charpoly(&load(input.as_deref())?),
        Command::Ziegler { input, h0 } => ziegler(&load(input.as_deref())?, *h0),
        Command::Triple { input, h0 } => triple_cmd(&load(input.as_deref())?, *h0),
        Command::Free { input, dmax, h0 } => free(&load(input.as_deref())?, *dmax, *h0),
        Command::Certify { input, mode, budget } => certify(&load(input.as_deref())?, *mode, *budget),
        Command::Verify { cert } => verify(cert.as_deref()),
        Command::Lift {
            input,
            h0,
            via_deletion,
            budget,
        } => lift(&load(input.as_deref())?, *h0, *via_deletion, *budget),
        Command::Corpus { name, params, emit } => corpus(name, params, *emit),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            let mut out = std::io::stdout().lock();
            let _ = if cli.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&r.json).expect("JSON values serialize"))
            } else {
                write!(out, "{}", r.text)
            };
            ExitCode::from(r.code)
        }
        Err(f) => {
            if cli.json {
                println!("{}", json!({"error": f.msg}));
            }
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
