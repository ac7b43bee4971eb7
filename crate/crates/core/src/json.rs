//! JSON encodings of forms, complex structures, skew endomorphisms, spectral
//! decompositions and frame triples.
//!
//! Forms are `{"dim", "degree", "backend", "terms"}` with 1-based strictly
//! increasing indices. Exact terms carry `num`/`den` (integers, or decimal
//! strings when they do not fit in 64 bits); float terms carry `value`.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::blade::Blade;
use crate::error::{Error, Result};
use crate::form::Form;
use crate::frames::{ComplexOneForm, FrameTriple};
use crate::harmonic::{SkewEndo, SpectralDecomposition, SymplecticCandidate};
use crate::hermitian::ComplexStructure;
use crate::linalg::Matrix;
use crate::scalar::{Backend, Rational};

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Integer {
    Small(i64),
    Big(String),
}

impl Integer {
    fn from_big(b: &BigInt) -> Self {
        i64::try_from(b).map_or_else(|_| Integer::Big(b.to_string()), Integer::Small)
    }

    fn to_big(&self) -> Result<BigInt> {
        match self {
            Integer::Small(v) => Ok(BigInt::from(*v)),
            Integer::Big(s) => s.parse().map_err(|_| parse_err(format!("bad integer `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum TermJson {
    Exact { index: Vec<usize>, num: Integer, den: Integer },
    Float { index: Vec<usize>, value: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormJson {
    pub dim: usize,
    pub degree: usize,
    pub backend: String,
    pub terms: Vec<TermJson>,
}

/// A parsed form on either backend.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyForm {
    Exact(Form<Rational>),
    Float(Form<f64>),
}

impl AnyForm {
    pub fn to_float(&self) -> Form<f64> {
        match self {
            AnyForm::Exact(f) => f.map_coeffs(crate::scalar::rational_to_f64),
            AnyForm::Float(f) => f.clone(),
        }
    }
}

fn one_based(b: Blade) -> Vec<usize> {
    b.indices().map(|i| i + 1).collect()
}

pub fn exact_form_json(f: &Form<Rational>) -> FormJson {
    FormJson {
        dim: f.dim(),
        degree: f.degree(),
        backend: Backend::Exact.as_str().into(),
        terms: f
            .terms()
            .map(|(b, c)| TermJson::Exact {
                index: one_based(b),
                num: Integer::from_big(c.numer()),
                den: Integer::from_big(c.denom()),
            })
            .collect(),
    }
}

pub fn float_form_json(f: &Form<f64>) -> FormJson {
    FormJson {
        dim: f.dim(),
        degree: f.degree(),
        backend: Backend::Float.as_str().into(),
        terms: f
            .terms()
            .map(|(b, c)| TermJson::Float {
                index: one_based(b),
                value: *c,
            })
            .collect(),
    }
}

fn check_index(index: &[usize], degree: usize) -> Result<()> {
    if index.len() != degree {
        return Err(parse_err(format!(
            "index {index:?} does not have length {degree}"
        )));
    }
    if index.windows(2).any(|w| w[0] >= w[1]) {
        return Err(parse_err(format!("index {index:?} is not strictly increasing")));
    }
    Ok(())
}

pub fn form_from_json(j: &FormJson) -> Result<AnyForm> {
    let backend: Backend = j.backend.parse().map_err(parse_err)?;
    match backend {
        Backend::Exact => {
            let mut terms = Vec::with_capacity(j.terms.len());
            for t in &j.terms {
                match t {
                    TermJson::Exact { index, num, den } => {
                        check_index(index, j.degree)?;
                        let den = den.to_big()?;
                        if den == BigInt::from(0) {
                            return Err(parse_err("zero denominator"));
                        }
                        terms.push((index.clone(), Rational::new(num.to_big()?, den)));
                    }
                    TermJson::Float { .. } => {
                        return Err(parse_err("float term in an exact form"));
                    }
                }
            }
            Ok(AnyForm::Exact(Form::from_terms(j.dim, j.degree, terms)?))
        }
        Backend::Float => {
            let mut terms = Vec::with_capacity(j.terms.len());
            for t in &j.terms {
                let (index, v) = match t {
                    TermJson::Exact { index, num, den } => {
                        let r = Rational::new(num.to_big()?, den.to_big()?);
                        (index, crate::scalar::rational_to_f64(&r))
                    }
                    TermJson::Float { index, value } => (index, *value),
                };
                check_index(index, j.degree)?;
                terms.push((index.clone(), v));
            }
            Ok(AnyForm::Float(Form::from_terms(j.dim, j.degree, terms)?))
        }
    }
}

pub fn parse_form(text: &str) -> Result<AnyForm> {
    let j: FormJson = serde_json::from_str(text).map_err(parse_err)?;
    form_from_json(&j)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub matrix: Value,
}

fn float_entries(v: &Value, n: usize) -> Result<Vec<f64>> {
    let arr = v
        .as_array()
        .ok_or_else(|| parse_err("matrix must be a row-major array"))?;
    if arr.len() != n * n {
        return Err(parse_err(format!(
            "matrix has {} entries, expected {}",
            arr.len(),
            n * n
        )));
    }
    arr.iter()
        .map(|x| x.as_f64().ok_or_else(|| parse_err(format!("non-numeric entry {x}"))))
        .collect()
}

/// `{"dim": 2k, "matrix": [..]}` or `{"dim": 2k, "matrix": "standard"}`.
pub fn parse_complex_structure(text: &str) -> Result<ComplexStructure<f64>> {
    let j: MatrixJson = serde_json::from_str(text).map_err(parse_err)?;
    if j.matrix.as_str() == Some("standard") {
        return ComplexStructure::standard(j.dim);
    }
    let m = Matrix::from_row_major(j.dim, j.dim, float_entries(&j.matrix, j.dim)?);
    ComplexStructure::new(m)
}

pub fn skew_from_json(j: &MatrixJson) -> Result<SkewEndo<f64>> {
    SkewEndo::new(Matrix::from_row_major(j.dim, j.dim, float_entries(&j.matrix, j.dim)?))
}

pub fn skew_json(a: &SkewEndo<f64>) -> MatrixJson {
    MatrixJson {
        dim: a.dim(),
        matrix: Value::from(a.matrix().row_major().to_vec()),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClusterJson {
    pub mu: f64,
    pub mult: usize,
    pub omega: Option<FormJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CandidateJson {
    pub compatible: bool,
    pub kernel_rank: usize,
    pub square_residual: f64,
    pub form: FormJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralJson {
    pub dim: usize,
    pub clusters: Vec<ClusterJson>,
    pub kernel_rank: usize,
    pub symplectic_candidate: CandidateJson,
}

pub fn spectral_json(d: &SpectralDecomposition, c: &SymplecticCandidate) -> SpectralJson {
    SpectralJson {
        dim: d.dim(),
        clusters: d
            .clusters
            .iter()
            .map(|cl| ClusterJson {
                mu: cl.mu,
                mult: cl.mult,
                omega: cl.omega.as_ref().map(float_form_json),
            })
            .collect(),
        kernel_rank: d.kernel_rank(),
        symplectic_candidate: CandidateJson {
            compatible: c.compatible,
            kernel_rank: c.kernel_rank,
            square_residual: c.square_residual,
            form: float_form_json(&c.form),
        },
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OneFormPairJson {
    pub alpha: FormJson,
    pub beta: FormJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameJson {
    pub gamma: Vec<OneFormPairJson>,
    pub nu: FormJson,
}

pub fn frame_json(f: &FrameTriple) -> FrameJson {
    FrameJson {
        gamma: f
            .gamma()
            .iter()
            .map(|g| OneFormPairJson {
                alpha: float_form_json(&g.alpha),
                beta: float_form_json(&g.beta),
            })
            .collect(),
        nu: float_form_json(&f.nu()),
    }
}

pub fn frame_from_json(j: &FrameJson) -> Result<FrameTriple> {
    if j.gamma.len() != 3 {
        return Err(parse_err(format!("expected 3 one-forms, found {}", j.gamma.len())));
    }
    let mut gamma = Vec::with_capacity(3);
    for g in &j.gamma {
        let a = form_from_json(&g.alpha)?.to_float();
        let b = form_from_json(&g.beta)?.to_float();
        gamma.push(ComplexOneForm::new(a, b)?);
    }
    let gamma: [ComplexOneForm; 3] = gamma.try_into().expect("three entries");
    FrameTriple::new(gamma, &form_from_json(&j.nu)?.to_float())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_round_trip() {
        let f = Form::<Rational>::from_terms(
            4,
            2,
            [(vec![1, 2], Rational::new(3.into(), 4.into())), (vec![2, 4], Rational::from_integer(BigInt::from(7).pow(40u32)))],
        )
        .unwrap();
        let text = serde_json::to_string(&exact_form_json(&f)).unwrap();
        assert_eq!(parse_form(&text).unwrap(), AnyForm::Exact(f));
    }

    #[test]
    fn float_round_trip() {
        let f = Form::<f64>::basis(6, &[1, 3, 5]).unwrap().scale(&0.25);
        let text = serde_json::to_string(&float_form_json(&f)).unwrap();
        assert_eq!(parse_form(&text).unwrap(), AnyForm::Float(f));
    }

    #[test]
    fn rejects_bad_forms() {
        for text in [
            r#"{"dim":4,"degree":2,"backend":"exact","terms":[{"index":[2,1],"num":1,"den":1}]}"#,
            r#"{"dim":4,"degree":2,"backend":"exact","terms":[{"index":[1,2],"value":0.5}]}"#,
            r#"{"dim":4,"degree":2,"backend":"exact","terms":[{"index":[1,2],"num":1,"den":0}]}"#,
            r#"{"dim":4,"degree":2,"backend":"other","terms":[]}"#,
            r#"{"dim":4,"degree":2"#,
        ] {
            assert!(matches!(parse_form(text), Err(Error::Parse(_))), "{text}");
        }
    }

    #[test]
    fn complex_structure_shorthand() {
        let j = parse_complex_structure(r#"{"dim":4,"matrix":"standard"}"#).unwrap();
        assert_eq!(j, ComplexStructure::standard(4).unwrap());
        let m = r#"{"dim":2,"matrix":[0,-1,1,0]}"#;
        assert_eq!(parse_complex_structure(m).unwrap(), ComplexStructure::standard(2).unwrap());
    }

    #[test]
    fn frame_round_trip() {
        let f = crate::frames::random_frame(&mut crate::sample::rng(5));
        let text = serde_json::to_string(&frame_json(&f)).unwrap();
        let back: FrameJson = serde_json::from_str(&text).unwrap();
        assert_eq!(frame_from_json(&back).unwrap(), f);
    }
}
