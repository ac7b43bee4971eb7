//! `decompose`: bidegree components of a form, or the spectral
//! decomposition of a skew endomorphism.

use hodgelab::harmonic::{form_endo, spectral, symplectic_candidate, SkewEndo};
use hodgelab::hermitian::ComplexStructure;
use hodgelab::json::{
    exact_form_json, float_form_json, form_from_json, skew_from_json, spectral_json, AnyForm, FormJson,
    MatrixJson, SpectralJson,
};
use hodgelab::{Form, Rational, Scalar};
use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct BidegreeJson {
    pub p: usize,
    pub q: usize,
    pub form: FormJson,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Decomposition {
    Form {
        dim: usize,
        degree: usize,
        /// Components of bidegree (p, q) under the standard complex
        /// structure; absent in odd dimension.
        #[serde(skip_serializing_if = "Option::is_none")]
        bidegree: Option<Vec<BidegreeJson>>,
        /// Spectral decomposition of the associated endomorphism, for 2-forms.
        #[serde(skip_serializing_if = "Option::is_none")]
        spectral: Option<SpectralJson>,
    },
    Endomorphism {
        #[serde(flatten)]
        spectral: SpectralJson,
    },
}

fn components<S: Scalar>(f: &Form<S>, encode: impl Fn(&Form<S>) -> FormJson) -> Result<Option<Vec<BidegreeJson>>, CliError> {
    let n = f.dim();
    if n % 2 == 1 || n == 0 {
        return Ok(None);
    }
    let j = ComplexStructure::<S>::standard(n)?;
    let p = f.degree();
    let mut out = Vec::new();
    for s in 0..=p {
        let part = j.bidegree_project(f, p - s, s)?;
        if !part.is_zero() {
            out.push(BidegreeJson {
                p: p - s,
                q: s,
                form: encode(&part),
            });
        }
    }
    Ok(Some(out))
}

fn spectral_of(a: &SkewEndo<f64>) -> Result<SpectralJson, CliError> {
    let d = spectral(a)?;
    Ok(spectral_json(&d, &symplectic_candidate(&d)))
}

pub fn decompose_form(f: &AnyForm) -> Result<Decomposition, CliError> {
    let float = f.to_float();
    let bidegree = match f {
        AnyForm::Exact(e) => components::<Rational>(e, exact_form_json)?,
        AnyForm::Float(x) => components::<f64>(x, float_form_json)?,
    };
    let spectral = if float.degree() == 2 {
        Some(spectral_of(&form_endo(&float)?)?)
    } else {
        None
    };
    Ok(Decomposition::Form {
        dim: float.dim(),
        degree: float.degree(),
        bidegree,
        spectral,
    })
}

/// Parses a form (`terms`) or a skew endomorphism (`matrix`) and decomposes it.
pub fn decompose_str(text: &str) -> Result<Decomposition, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    let parse = |e: serde_json::Error| CliError::Parse(e.to_string());
    if v.get("terms").is_some() {
        let j: FormJson = serde_json::from_value(v).map_err(parse)?;
        decompose_form(&form_from_json(&j).map_err(|e| CliError::Parse(e.to_string()))?)
    } else if v.get("matrix").is_some() {
        let j: MatrixJson = serde_json::from_value(v).map_err(parse)?;
        let a = skew_from_json(&j).map_err(|e| CliError::Parse(e.to_string()))?;
        Ok(Decomposition::Endomorphism {
            spectral: spectral_of(&a)?,
        })
    } else {
        Err(CliError::Parse("expected a form (\"terms\") or a skew matrix (\"matrix\")".into()))
    }
}

pub fn decompose_file(path: &std::path::Path) -> Result<Decomposition, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    decompose_str(&text)
}
