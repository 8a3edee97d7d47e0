//! JSON file formats. Complex numbers are `[re, im]` pairs and matrices are
//! row-major nested arrays of them.

use std::path::Path;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::matcore::CMatrix;
use crate::pencil::MatrixPencil;
use crate::twopar::{Eigenvalue2P, SolveDiagnostics, SolveResult, TwoParameterProblem};
use crate::{Error, Result};

pub type ComplexJson = [f64; 2];
pub type MatrixJson = Vec<Vec<ComplexJson>>;

pub fn complex_to_json(z: C64) -> ComplexJson {
    [z.re, z.im]
}

pub fn complex_from_json(z: ComplexJson) -> Result<C64> {
    if !z[0].is_finite() || !z[1].is_finite() {
        return Err(Error::Parse("non-finite complex entry".into()));
    }
    Ok(C64::new(z[0], z[1]))
}

pub fn matrix_to_json(m: &CMatrix) -> MatrixJson {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| complex_to_json(m[(i, j)])).collect())
        .collect()
}

/// Rows must all have one length. An empty array is the `0 × 0` matrix.
pub fn matrix_from_json(rows: &MatrixJson) -> Result<CMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    if rows.iter().any(|row| row.len() != c) {
        return Err(Error::Parse("ragged matrix rows".into()));
    }
    let mut m = CMatrix::zeros(r, c);
    for (i, row) in rows.iter().enumerate() {
        for (j, &z) in row.iter().enumerate() {
            m[(i, j)] = complex_from_json(z)?;
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct PencilJson3 {
    pub A: MatrixJson,
    pub B: MatrixJson,
    pub C: MatrixJson,
}

/// A two-parameter problem on disk. Unknown keys are ignored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub name: String,
    #[serde(rename = "W1")]
    pub w1: PencilJson3,
    #[serde(rename = "W2")]
    pub w2: PencilJson3,
}

impl ProblemFile {
    pub fn from_problem(name: &str, p: &TwoParameterProblem) -> Self {
        let w = |a, b, c| PencilJson3 {
            A: matrix_to_json(a),
            B: matrix_to_json(b),
            C: matrix_to_json(c),
        };
        ProblemFile {
            name: name.to_string(),
            w1: w(&p.a1, &p.b1, &p.c1),
            w2: w(&p.a2, &p.b2, &p.c2),
        }
    }

    pub fn to_problem(&self) -> Result<TwoParameterProblem> {
        let parse = |w: &PencilJson3| -> Result<[CMatrix; 3]> {
            Ok([
                matrix_from_json(&w.A)?,
                matrix_from_json(&w.B)?,
                matrix_from_json(&w.C)?,
            ])
        };
        TwoParameterProblem::new(parse(&self.w1)?, parse(&self.w2)?).map_err(as_parse)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read(path)?)
    }
}

/// A single pencil `A − λB` on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct PencilFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub A: MatrixJson,
    pub B: MatrixJson,
}

impl PencilFile {
    pub fn from_pencil(name: Option<&str>, p: &MatrixPencil) -> Self {
        PencilFile {
            name: name.map(str::to_string),
            A: matrix_to_json(p.a()),
            B: matrix_to_json(p.b()),
        }
    }

    pub fn to_pencil(&self) -> Result<MatrixPencil> {
        MatrixPencil::new(matrix_from_json(&self.A)?, matrix_from_json(&self.B)?).map_err(as_parse)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read(path)?)
    }
}

/// Shape and finiteness problems in a file are parse errors.
fn as_parse(e: Error) -> Error {
    match e {
        Error::Dimension(m) | Error::NonFinite(m) => Error::Parse(m),
        other => other,
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Rounds to 12 decimals so reports do not carry rounding noise.
pub fn tidy(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub fn tidy_complex(z: C64) -> ComplexJson {
    [tidy(z.re), tidy(z.im)]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenReport {
    pub lambda: ComplexJson,
    pub mu: ComplexJson,
    pub on_common_factor: bool,
    pub multiplicity_hint: usize,
    pub residuals: Option<f64>,
}

impl From<&Eigenvalue2P> for EigenReport {
    fn from(e: &Eigenvalue2P) -> Self {
        EigenReport {
            lambda: tidy_complex(e.lambda),
            mu: tidy_complex(e.mu),
            on_common_factor: e.on_common_factor,
            multiplicity_hint: e.multiplicity_hint,
            residuals: e.residual,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub name: String,
    pub eigenvalues: Vec<EigenReport>,
    pub diagnostics: SolveDiagnostics,
}

impl SolveReport {
    pub fn new(name: &str, r: &SolveResult) -> Self {
        SolveReport {
            name: name.to_string(),
            eigenvalues: r.eigenvalues.iter().map(EigenReport::from).collect(),
            diagnostics: r.diagnostics.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}: {} eigenvalue(s)\n", self.name, self.eigenvalues.len());
        for e in &self.eigenvalues {
            let z = |c: ComplexJson| crate::pencil::format_complex(C64::new(c[0], c[1]));
            out.push_str(&format!(
                "  ({}, {})  hint {}{}{}\n",
                z(e.lambda),
                z(e.mu),
                e.multiplicity_hint,
                if e.on_common_factor {
                    "  on common factor"
                } else {
                    ""
                },
                e.residuals
                    .map_or(String::new(), |r| format!("  residual {r:.1e}")),
            ));
        }
        let d = &self.diagnostics;
        let opt = |s: &Option<String>| s.clone().unwrap_or_else(|| "?".into());
        out.push_str(&format!(
            "  nrank {} / {}, KCF {} | {}, dim R {} / {}, coprime {} (common degree {})\n",
            d.nrank1,
            d.nrank2,
            opt(&d.kcf1),
            opt(&d.kcf2),
            d.r1_dim,
            d.r2_dim,
            d.coprime,
            d.common_degree
        ));
        for n in &d.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out
    }
}
