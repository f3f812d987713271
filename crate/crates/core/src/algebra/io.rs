//! JSON element files.
//!
//! Scalar example:
//! `{"group":"free:2","dim":1,"action":"trivial","terms":[{"word":"aB","re":1.0,"im":0.0}]}`
//!
//! Matrix coefficients carry row-major `re`/`im` arrays of length d*d, and a
//! structured action:
//! `{"action":{"kind":"signed_permutations","generators":[{"perm":[1,0],"signs":[1.0,-1.0]}]}}`

use super::{ActionSpec, AlgebraElement, CMat, SignedPerm};
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Serialize, Deserialize)]
struct ElementFile {
    group: String,
    dim: usize,
    action: ActionFile,
    terms: Vec<TermFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum ActionFile {
    Named(String),
    SignedPerms {
        kind: String,
        generators: Vec<PermFile>,
    },
}

#[derive(Debug, Serialize, Deserialize)]
struct PermFile {
    perm: Vec<u32>,
    signs: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum ReIm {
    Num(f64),
    Arr(Vec<f64>),
}

#[derive(Debug, Serialize, Deserialize)]
struct TermFile {
    word: String,
    re: ReIm,
    im: ReIm,
}

fn coeff_from_parts(dim: usize, re: &ReIm, im: &ReIm) -> Result<CMat> {
    let expect = dim * dim;
    let as_vec = |p: &ReIm, name: &str| -> Result<Vec<f64>> {
        match p {
            ReIm::Num(v) => {
                if dim == 1 {
                    Ok(vec![*v])
                } else {
                    Err(Error::structural(format!(
                        "{name}: scalar given but dim={dim} needs an array of length {expect}"
                    )))
                }
            }
            ReIm::Arr(v) => {
                if v.len() == expect {
                    Ok(v.clone())
                } else {
                    Err(Error::structural(format!(
                        "{name}: expected {expect} entries, got {}",
                        v.len()
                    )))
                }
            }
        }
    };
    let re = as_vec(re, "re")?;
    let im = as_vec(im, "im")?;
    let data: Vec<Complex64> = re
        .iter()
        .zip(&im)
        .map(|(&r, &i)| Complex64::new(r, i))
        .collect();
    Ok(CMat::from_rows(dim, &data))
}

pub fn element_from_json(json: &str) -> Result<AlgebraElement> {
    let file: ElementFile = serde_json::from_str(json)
        .map_err(|e| Error::structural(format!("element file parse error: {e}")))?;
    let spec: GroupSpec = file.group.parse()?;
    let action = match &file.action {
        ActionFile::Named(name) if name == "trivial" => ActionSpec::trivial(&spec, file.dim),
        ActionFile::Named(other) => {
            return Err(Error::structural(format!("unknown action name {other:?}")))
        }
        ActionFile::SignedPerms { kind, generators } => {
            if kind != "signed_permutations" {
                return Err(Error::structural(format!("unknown action kind {kind:?}")));
            }
            let gens = generators
                .iter()
                .map(|p| SignedPerm::new(p.perm.clone(), p.signs.clone()))
                .collect::<Result<Vec<_>>>()?;
            ActionSpec::from_generators(&spec, file.dim, gens)?
        }
    };
    let mut elem = AlgebraElement::zero(spec.clone(), action);
    for t in &file.terms {
        let g = spec.parse_word(&t.word)?;
        let coeff = coeff_from_parts(file.dim, &t.re, &t.im)?;
        elem.add_term(g, coeff)?;
    }
    Ok(elem)
}

pub fn element_to_json(elem: &AlgebraElement) -> String {
    let spec = elem.spec();
    let dim = elem.dim();
    let action = if elem.action().is_trivial() {
        ActionFile::Named("trivial".into())
    } else {
        ActionFile::SignedPerms {
            kind: "signed_permutations".into(),
            generators: elem
                .action()
                .generators()
                .iter()
                .map(|g| PermFile {
                    perm: g.perm().to_vec(),
                    signs: g.signs().to_vec(),
                })
                .collect(),
        }
    };
    // canonical order for reproducible files
    let mut terms: Vec<(&crate::group::GroupElement, &CMat)> = elem.terms().collect();
    terms.sort_by(|a, b| spec.cmp_canonical(a.0, b.0));
    let terms = terms
        .into_iter()
        .map(|(g, m)| {
            let (re, im) = if dim == 1 {
                (ReIm::Num(m.get(0, 0).re), ReIm::Num(m.get(0, 0).im))
            } else {
                (
                    ReIm::Arr(m.data().iter().map(|c| c.re).collect()),
                    ReIm::Arr(m.data().iter().map(|c| c.im).collect()),
                )
            };
            TermFile {
                word: spec.format_word(g),
                re,
                im,
            }
        })
        .collect();
    let file = ElementFile {
        group: spec.to_string(),
        dim,
        action,
        terms,
    };
    serde_json::to_string(&file).expect("element serialization cannot fail")
}
