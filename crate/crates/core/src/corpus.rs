//! The bundled example problems with their expected analysis results.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::io::{ComplexJson, ProblemFile, SolveReport};
use crate::matcore::Subspace;
use crate::pencil::{kcf_structure, KroneckerStructure};
use crate::twopar::{build_deltas, solve, RotateMode, SolveOptions, TwoParameterProblem};
use crate::{rng_from_seed, Error, Result, Tolerances};

const FILES: [(&str, &str); 7] = [
    ("ex4_5", include_str!("../corpus/ex4_5.json")),
    ("ex4_6", include_str!("../corpus/ex4_6.json")),
    ("ex5_1", include_str!("../corpus/ex5_1.json")),
    ("ex5_2", include_str!("../corpus/ex5_2.json")),
    ("ex5_3", include_str!("../corpus/ex5_3.json")),
    ("ex5_4", include_str!("../corpus/ex5_4.json")),
    ("ex5_5", include_str!("../corpus/ex5_5.json")),
];

/// Coordinate tolerance for expected eigenvalues.
const POINT_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectedPoint {
    pub lambda: ComplexJson,
    pub mu: ComplexJson,
    #[serde(default)]
    pub on_common_factor: Option<bool>,
    #[serde(default)]
    pub multiplicity_hint: Option<usize>,
}

impl ExpectedPoint {
    pub fn point(&self) -> (C64, C64) {
        (
            C64::new(self.lambda[0], self.lambda[1]),
            C64::new(self.mu[0], self.mu[1]),
        )
    }
}

/// Stored results. Structural entries refer to the unrotated pencils
/// `Δ₁ − λΔ₀` and `Δ₂ − μΔ₀`, which are expected to agree.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Expectations {
    #[serde(default)]
    pub eigenvalues: Option<Vec<ExpectedPoint>>,
    /// The computed set must equal `eigenvalues`, not merely contain it.
    #[serde(default)]
    pub exact: bool,
    #[serde(default)]
    pub not_eigenvalues: Vec<ExpectedPoint>,
    #[serde(default)]
    pub kcf: Option<String>,
    #[serde(default)]
    pub r_dim: Option<usize>,
    /// `dim GKer` at zero.
    #[serde(default)]
    pub gker_dim: Option<usize>,
    /// `dim ker Δ_i`.
    #[serde(default)]
    pub ker_dim: Option<usize>,
    /// `dim(ker Δ₁ ∩ ker Δ₂)`, with the intersection equal to `GKer` at zero.
    #[serde(default)]
    pub joint_kernel_dim: Option<usize>,
    #[serde(default)]
    pub coprime: Option<bool>,
    #[serde(default)]
    pub common_degree: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusExample {
    #[serde(flatten)]
    pub problem: ProblemFile,
    pub description: String,
    pub expect: Expectations,
}

pub fn names() -> Vec<&'static str> {
    FILES.iter().map(|(n, _)| *n).collect()
}

pub fn load(name: &str) -> Result<CorpusExample> {
    let text = FILES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::Parse(format!("no corpus example named `{name}`")))?;
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{name}: {e}")))
}

pub fn problem(name: &str) -> Result<TwoParameterProblem> {
    load(name)?.problem.to_problem()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub what: String,
    pub expected: String,
    pub got: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExampleOutcome {
    pub name: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    #[serde(default)]
    pub report: Option<SolveReport>,
}

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, what: &str, expected: impl ToString, got: impl ToString, passed: bool) {
        self.0.push(Check {
            what: what.to_string(),
            expected: expected.to_string(),
            got: got.to_string(),
            passed,
        });
    }

    fn error(&mut self, what: &str, expected: impl ToString, e: &Error) {
        self.push(what, expected, format!("error: {e}"), false);
    }

    fn eq<T: PartialEq + ToString>(&mut self, what: &str, expected: T, got: T) {
        let ok = expected == got;
        self.push(what, expected, got, ok);
    }
}

fn near(a: (C64, C64), b: (C64, C64)) -> bool {
    (a.0 - b.0).norm() <= POINT_TOL && (a.1 - b.1).norm() <= POINT_TOL
}

fn show(p: (C64, C64)) -> String {
    use crate::pencil::format_complex as f;
    format!("({}, {})", f(p.0), f(p.1))
}

/// Solves one example with a seeded rotation and compares every stored
/// expectation.
pub fn run_example(ex: &CorpusExample, seed: u64, tol: &Tolerances) -> ExampleOutcome {
    let mut checks = Checks(Vec::new());
    let name = ex.problem.name.clone();
    let e = &ex.expect;
    let p = match ex.problem.to_problem() {
        Ok(p) => p,
        Err(err) => {
            checks.error("problem", "valid", &err);
            return finish(name, checks, None);
        }
    };
    let opts = SolveOptions {
        rotate: RotateMode::Auto,
        seed,
        tol: *tol,
    };
    let report = match solve(&p, &opts) {
        Ok(r) => {
            let found: Vec<(C64, C64)> = r.eigenvalues.iter().map(|v| (v.lambda, v.mu)).collect();
            let listed = found.iter().map(|&q| show(q)).collect::<Vec<_>>().join(" ");
            if let Some(want) = &e.eigenvalues {
                for w in want {
                    let hit = r
                        .eigenvalues
                        .iter()
                        .find(|v| near((v.lambda, v.mu), w.point()));
                    checks.push("eigenvalue", show(w.point()), &listed, hit.is_some());
                    if let (Some(v), Some(flag)) = (hit, w.on_common_factor) {
                        checks.eq("on_common_factor", flag, v.on_common_factor);
                    }
                    if let (Some(v), Some(h)) = (hit, w.multiplicity_hint) {
                        checks.eq("multiplicity_hint", h, v.multiplicity_hint);
                    }
                }
                if e.exact {
                    checks.eq("eigenvalue count", want.len(), found.len());
                }
            }
            for w in &e.not_eigenvalues {
                let hit = found.iter().any(|&q| near(q, w.point()));
                checks.push("not an eigenvalue", show(w.point()), &listed, !hit);
            }
            if let Some(c) = e.coprime {
                checks.eq("coprime", c, r.diagnostics.coprime);
            }
            if let Some(c) = e.common_degree {
                checks.eq("common_degree", c, r.diagnostics.common_degree);
            }
            Some(SolveReport::new(&name, &r))
        }
        Err(err) => {
            checks.error("solve", "success", &err);
            None
        }
    };
    structural_checks(&p, e, seed, tol, &mut checks);
    finish(name, checks, report)
}

fn structural_checks(
    p: &TwoParameterProblem,
    e: &Expectations,
    seed: u64,
    tol: &Tolerances,
    checks: &mut Checks,
) {
    let needs = e.kcf.is_some()
        || e.r_dim.is_some()
        || e.gker_dim.is_some()
        || e.ker_dim.is_some()
        || e.joint_kernel_dim.is_some();
    if !needs {
        return;
    }
    let mut rng = rng_from_seed(seed);
    let d = match build_deltas(p, &mut rng, tol) {
        Ok(d) => d,
        Err(err) => return checks.error("operator determinants", "analysed", &err),
    };
    let zero = C64::new(0.0, 0.0);
    for i in 1..=2 {
        let pen = d.pencil(i).expect("index in range");
        if let Some(want) = &e.kcf {
            let what = format!("KCF of pencil {i}");
            match (
                want.parse::<KroneckerStructure>(),
                kcf_structure(&pen, &mut rng, tol),
            ) {
                (Ok(w), Ok(got)) => checks.push(&what, &w, &got, got.same_as(&w, tol)),
                (Err(err), _) | (_, Err(err)) => checks.error(&what, want, &err),
            }
        }
        if let Some(r) = e.r_dim {
            let got = if i == 1 { d.r1.dim() } else { d.r2.dim() };
            checks.eq(&format!("dim R of pencil {i}"), r, got);
        }
        if let Some(g) = e.gker_dim {
            let got = d
                .generic_kernel(i, zero, tol)
                .map(|s| s.dim())
                .unwrap_or(usize::MAX);
            checks.eq(&format!("dim GKer of pencil {i} at 0"), g, got);
        }
        if let Some(k) = e.ker_dim {
            checks.eq(&format!("dim ker Δ{i}"), k, pen.kernel_at(zero, tol).dim());
        }
    }
    if let Some(j) = e.joint_kernel_dim {
        let joint = (|| -> Result<(Subspace, Subspace)> {
            let k1 = d.pencil(1)?.kernel_at(zero, tol);
            let k2 = d.pencil(2)?.kernel_at(zero, tol);
            Ok((k1.intersect(&k2)?, d.generic_kernel(1, zero, tol)?))
        })();
        match joint {
            Ok((k, g)) => {
                checks.eq("dim(ker Δ1 ∩ ker Δ2)", j, k.dim());
                checks.push("ker Δ1 ∩ ker Δ2 = GKer", true, k.same_as(&g), k.same_as(&g));
            }
            Err(err) => checks.error("joint kernel", j, &err),
        }
    }
}

fn finish(name: String, checks: Checks, report: Option<SolveReport>) -> ExampleOutcome {
    ExampleOutcome {
        passed: checks.0.iter().all(|c| c.passed),
        name,
        checks: checks.0,
        report,
    }
}

/// Runs the named examples, or all of them.
pub fn run(names_: &[&str], seed: u64, tol: &Tolerances) -> Result<Vec<ExampleOutcome>> {
    names_
        .iter()
        .map(|n| Ok(run_example(&load(n)?, seed, tol)))
        .collect()
}
