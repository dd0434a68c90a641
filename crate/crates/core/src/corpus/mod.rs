//! Named arrangements and multiarrangements with expected values.

mod golden;

pub use golden::{euler_vs_ziegler_profiles, golden_suite, GoldenCheck, Origin};

use crate::arrangement::{write_text, Arrangement};
use crate::error::{Error, Result};
use crate::multi::Multiarrangement;

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub params: Vec<u32>,
    pub description: String,
    pub arrangement: Arrangement,
    /// Present for multiarrangement entries.
    pub mult: Option<Vec<u32>>,
}

impl CorpusEntry {
    pub fn multi(&self) -> Multiarrangement {
        match &self.mult {
            Some(m) => Multiarrangement::new(self.arrangement.clone(), m.clone())
                .expect("corpus multiplicities match"),
            None => Multiarrangement::simple(self.arrangement.clone()),
        }
    }

    /// Arrangement file contents; identical output for identical parameters.
    pub fn to_text(&self) -> String {
        let mut header = vec![format!("corpus {}", self.spec_string())];
        header.push(self.description.clone());
        write_text(&self.arrangement, self.mult.as_deref(), &header)
    }

    pub fn spec_string(&self) -> String {
        if self.params.is_empty() {
            self.name.clone()
        } else {
            let p: Vec<String> = self.params.iter().map(u32::to_string).collect();
            format!("{}({})", self.name, p.join(","))
        }
    }
}

/// Names accepted by [`generate`], with parameter hints.
pub const NAMES: &[(&str, &str)] = &[
    ("boolean", "boolean(l): coordinate hyperplanes of Q^l"),
    ("braid", "braid(l): x_i - x_j in Q^l"),
    (
        "intermediate",
        "intermediate(r,l,k): x_1...x_k prod(x_i^r - x_j^r), r in {1,2}",
    ),
    ("whirlA", "whirl pair member with x+y-2t, variables x,y,z,t"),
    ("whirlB", "whirl pair member with x-2y-2t, variables x,y,z,t"),
    ("E7D", "rank 5 arrangement D with 21 hyperplanes, exp {1,5,5,5,5}"),
    (
        "E7B_kappa",
        "(B, kappa) with B the restriction of D to ker x4, |kappa| = 20",
    ),
    (
        "euler_vs_ziegler",
        "14 hyperplanes in Q^4 (variables u,x,y,z)",
    ),
    ("xyz_xyz_sum", "xyz(x+y+z)"),
    ("mult_xxyyz", "x^2y^2z(x+y)(y+z)"),
    ("mult_xxyyzz", "x^2y^2z^2(x+y)(x-y)(x-z)(y+z)"),
];

/// Parses `name` or `name(p1,p2,...)`.
pub fn parse_spec(spec: &str) -> Result<(String, Vec<u32>)> {
    let spec = spec.trim();
    match spec.split_once('(') {
        None => Ok((spec.to_string(), Vec::new())),
        Some((name, rest)) => {
            let inner = rest.strip_suffix(')').ok_or_else(|| Error::InvalidParams {
                name: name.into(),
                msg: "missing `)`".into(),
            })?;
            let params = inner
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    s.trim().parse::<u32>().map_err(|_| Error::InvalidParams {
                        name: name.into(),
                        msg: format!("bad parameter `{}`", s.trim()),
                    })
                })
                .collect::<Result<_>>()?;
            Ok((name.trim().to_string(), params))
        }
    }
}

pub fn generate_spec(spec: &str) -> Result<CorpusEntry> {
    let (name, params) = parse_spec(spec)?;
    generate(&name, &params)
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn unit(l: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; l];
    v[i] = 1;
    v
}

fn build(dim: usize, rows: &[Vec<i64>]) -> Arrangement {
    let r: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    Arrangement::from_ints(dim, &r).expect("corpus forms are distinct and nonzero")
}

fn whirl(extra: [i64; 4]) -> Arrangement {
    let rows = vec![
        vec![1, 0, 0, 5],
        vec![1, 0, 0, 6],
        vec![1, 0, 0, -5],
        vec![0, 1, 0, 2],
        vec![0, 1, 0, -4],
        vec![0, 1, 0, -1],
        vec![0, 0, 1, 4],
        vec![0, 0, 1, 3],
        vec![0, 0, 1, -3],
        vec![1, 0, 1, 7],
        vec![0, 1, 1, -6],
        vec![0, 0, 0, 1],
        extra.to_vec(),
    ];
    build(4, &rows).with_names(names(&["x", "y", "z", "t"]))
}

/// Forms of the rank-5 arrangement D, in filtration order.
const E7D_FORMS: [[i64; 5]; 21] = [
    [0, 1, 0, 0, 0],
    [1, 0, 1, 0, -1],
    [2, 1, 1, 0, 0],
    [2, 1, 2, 1, -1],
    [0, 0, 0, 0, 1],
    [1, 0, 1, 0, 0],
    [0, 1, 0, 0, 1],
    [2, 1, 2, 1, 0],
    [2, 0, 1, 0, -1],
    [2, 2, 2, 1, 0],
    [0, 1, 1, 1, 0],
    [1, 1, 1, 1, 0],
    [0, 0, 1, 1, 0],
    [1, 1, 1, 0, 0],
    [1, 0, 0, 0, 0],
    [1, 0, 1, 1, 0],
    [2, 1, 1, 0, -1],
    [0, 1, 1, 1, 1],
    [1, 0, 0, 0, -1],
    [1, 0, 0, -1, -1],
    [0, 0, 0, 1, 0],
];

/// `(B, kappa)` in coordinates `x1, x2, x3, x5`.
const E7B_KAPPA: [([i64; 4], u32); 16] = [
    ([1, 0, 0, 0], 1),
    ([0, 1, 0, 0], 1),
    ([0, 0, 1, 0], 1),
    ([0, 0, 0, 1], 1),
    ([1, 0, 1, 0], 2),
    ([1, 0, 0, -1], 2),
    ([0, 1, 1, 0], 1),
    ([0, 1, 0, 1], 1),
    ([1, 1, 1, 0], 3),
    ([1, 0, 1, -1], 1),
    ([2, 0, 1, -1], 1),
    ([2, 1, 1, 0], 1),
    ([2, 1, 2, 0], 1),
    ([0, 1, 1, 1], 1),
    ([2, 1, 1, -1], 1),
    ([2, 1, 2, -1], 1),
];

fn expect_params(name: &str, params: &[u32], n: usize) -> Result<()> {
    if params.len() != n {
        return Err(Error::InvalidParams {
            name: name.into(),
            msg: format!("expected {n} parameter(s), got {}", params.len()),
        });
    }
    Ok(())
}

fn invalid(name: &str, msg: &str) -> Error {
    Error::InvalidParams {
        name: name.into(),
        msg: msg.into(),
    }
}

pub fn generate(name: &str, params: &[u32]) -> Result<CorpusEntry> {
    let mut mult = None;
    let (arrangement, description) = match name {
        "boolean" => {
            expect_params(name, params, 1)?;
            let l = params[0] as usize;
            if l == 0 {
                return Err(invalid(name, "dimension must be positive"));
            }
            let rows: Vec<Vec<i64>> = (0..l).map(|i| unit(l, i)).collect();
            (build(l, &rows), format!("Boolean arrangement in Q^{l}"))
        }
        "braid" => {
            expect_params(name, params, 1)?;
            let l = params[0] as usize;
            if l < 2 {
                return Err(invalid(name, "need at least two coordinates"));
            }
            let mut rows = Vec::new();
            for i in 0..l {
                for j in i + 1..l {
                    let mut v = vec![0; l];
                    v[i] = 1;
                    v[j] = -1;
                    rows.push(v);
                }
            }
            (build(l, &rows), format!("braid arrangement x_i - x_j in Q^{l}"))
        }
        "intermediate" => {
            expect_params(name, params, 3)?;
            let (r, l, k) = (params[0], params[1] as usize, params[2] as usize);
            if !(1..=2).contains(&r) {
                return Err(invalid(
                    name,
                    "only r in {1, 2} factors into rational linear forms",
                ));
            }
            if l < 2 || k > l {
                return Err(invalid(name, "need l >= 2 and 0 <= k <= l"));
            }
            let mut rows: Vec<Vec<i64>> = (0..k).map(|i| unit(l, i)).collect();
            for i in 0..l {
                for j in i + 1..l {
                    let mut v = vec![0; l];
                    v[i] = 1;
                    v[j] = -1;
                    rows.push(v.clone());
                    if r == 2 {
                        v[j] = 1;
                        rows.push(v);
                    }
                }
            }
            (
                build(l, &rows),
                format!("intermediate arrangement with r = {r}, l = {l}, k = {k}"),
            )
        }
        "whirlA" => {
            expect_params(name, params, 0)?;
            (whirl([1, 1, 0, -2]), "whirl pair, member A".to_string())
        }
        "whirlB" => {
            expect_params(name, params, 0)?;
            (whirl([1, -2, 0, -2]), "whirl pair, member B".to_string())
        }
        "E7D" => {
            expect_params(name, params, 0)?;
            let rows: Vec<Vec<i64>> = E7D_FORMS.iter().map(|r| r.to_vec()).collect();
            (
                build(5, &rows).with_names(names(&["x1", "x2", "x3", "x4", "x5"])),
                "rank 5 arrangement D, additively free in the listed order".to_string(),
            )
        }
        "E7B_kappa" => {
            expect_params(name, params, 0)?;
            let rows: Vec<Vec<i64>> = E7B_KAPPA.iter().map(|(r, _)| r.to_vec()).collect();
            mult = Some(E7B_KAPPA.iter().map(|(_, m)| *m).collect());
            (
                build(4, &rows).with_names(names(&["x1", "x2", "x3", "x5"])),
                "(B, kappa) with B the restriction of D to ker x4".to_string(),
            )
        }
        "euler_vs_ziegler" => {
            expect_params(name, params, 0)?;
            let rows = vec![
                vec![1, 0, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
                vec![1, 1, 0, 0],
                vec![1, 0, 1, 0],
                vec![1, 0, 0, 1],
                vec![1, 1, 1, 0],
                vec![1, 1, 0, 1],
                vec![0, 0, 1, 1],
                vec![1, 1, 1, 1],
                vec![2, 1, 1, 0],
                vec![3, 1, 1, 1],
                vec![1, 2, 0, 0],
            ];
            (
                build(4, &rows).with_names(names(&["u", "x", "y", "z"])),
                "Euler and Ziegler multiplicities disagree on a restriction".to_string(),
            )
        }
        "xyz_xyz_sum" => {
            expect_params(name, params, 0)?;
            let rows = vec![
                vec![1, 0, 0],
                vec![0, 1, 0],
                vec![0, 0, 1],
                vec![1, 1, 1],
            ];
            (build(3, &rows), "xyz(x+y+z), not free".to_string())
        }
        "mult_xxyyz" => {
            expect_params(name, params, 0)?;
            let rows = vec![
                vec![1, 0, 0],
                vec![0, 1, 0],
                vec![0, 0, 1],
                vec![1, 1, 0],
                vec![0, 1, 1],
            ];
            mult = Some(vec![2, 2, 1, 1, 1]);
            (build(3, &rows), "x^2y^2z(x+y)(y+z)".to_string())
        }
        "mult_xxyyzz" => {
            expect_params(name, params, 0)?;
            let rows = vec![
                vec![1, 0, 0],
                vec![0, 1, 0],
                vec![0, 0, 1],
                vec![1, 1, 0],
                vec![1, -1, 0],
                vec![1, 0, -1],
                vec![0, 1, 1],
            ];
            mult = Some(vec![2, 2, 2, 1, 1, 1, 1]);
            (
                build(3, &rows),
                "x^2y^2z^2(x+y)(x-y)(x-z)(y+z)".to_string(),
            )
        }
        other => return Err(Error::UnknownCorpus(other.to_string())),
    };
    Ok(CorpusEntry {
        name: name.to_string(),
        params: params.to_vec(),
        description,
        arrangement,
        mult,
    })
}

/// Simple corpus arrangements small enough for the exhaustive property suites.
pub fn small_simple() -> Vec<CorpusEntry> {
    [
        "boolean(2)",
        "boolean(3)",
        "boolean(4)",
        "braid(3)",
        "braid(4)",
        "intermediate(1,3,1)",
        "intermediate(2,3,1)",
        "intermediate(2,3,2)",
        "intermediate(2,3,3)",
        "xyz_xyz_sum",
    ]
    .iter()
    .map(|s| generate_spec(s).expect("valid corpus spec"))
    .collect()
}
