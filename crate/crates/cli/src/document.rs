//! JSON interchange format for structure-constant algebras.
//!
//! A document carries either an explicit sparse multiplication table or a
//! named family descriptor, never both.  Rationals travel as strings
//! `"p/q"` with reduced terms and positive denominator; bare integers are
//! accepted as shorthand.  Canonicalization sorts table entries, reduces
//! rationals, and fills in the dimension and basis labels, after which a
//! document round-trips byte-identically.

use piexp_core::construct::{
    direct_sum, exchange_involution, field, full_matrix, full_matrix_graded,
    full_matrix_with_involution, grassmann_envelope, grassmann_truncated, group_algebra,
    incidence, matrix_algebra, tensor_product, ut, ut_with_reflection, with_grading,
    zero_algebra, BuildError, MatrixInvolution,
};
use piexp_core::matrix::Mat;
use piexp_core::scalar::{format_scalar, parse_scalar};
use piexp_core::structured::{GroupSpec, Involution, Structure, StructuredAlgebra};
use piexp_core::{Algebra, Scalar};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error("document must carry exactly one of `table` or `family`")]
    TableOrFamily,
    #[error("bad rational {text:?}: {detail}")]
    BadRational { text: String, detail: String },
    #[error("table index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("declared dim {declared} does not match {actual}")]
    DimMismatch { declared: usize, actual: usize },
    #[error("basis has {got} labels for dimension {dim}")]
    BasisMismatch { got: usize, dim: usize },
    #[error("unit vector has {got} coordinates for dimension {dim}")]
    UnitMismatch { got: usize, dim: usize },
    #[error("grading and involution cannot both be present")]
    TwoStructures,
    #[error("family documents carry structure inside the descriptor; drop the grading/involution field")]
    StructureOnFamily,
    #[error("bad table: {0}")]
    Table(#[from] piexp_core::algebra::TableError),
    #[error("table is not associative: {0}")]
    Validation(#[from] piexp_core::algebra::ValidationError),
    #[error("bad structure: {0}")]
    Structure(String),
    #[error("cannot build family: {0}")]
    Build(#[from] BuildError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDocument {
    pub name: String,
    #[serde(default)]
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub basis: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<(usize, usize, usize, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<GradingDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub involution: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradingDoc {
    /// invariant factors of the grading group
    pub group: Vec<u32>,
    /// one degree tuple per basis element
    pub degrees: Vec<Vec<u32>>,
}

/// Named families and combinators over them.  The JSON shape is the
/// variant name as key: `{"ut": 2}`, `{"tensor": [{"ut": 2}, "field"]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilySpec {
    Ut(u32),
    FullMatrix(u32),
    Zero(u32),
    Field,
    GroupAlgebra(Vec<u32>),
    Grassmann(u32),
    Incidence(Vec<(u32, u32)>),
    TransposeMatrix(u32),
    SymplecticMatrix(u32),
    ReflectionUt(u32),
    GradedMatrix {
        n: u32,
        group: Vec<u32>,
        degrees: Vec<Vec<u32>>,
    },
    Graded {
        base: Box<FamilySpec>,
        group: Vec<u32>,
        degrees: Vec<Vec<u32>>,
    },
    Tensor(Vec<FamilySpec>),
    MatrixAlgebra {
        base: Box<FamilySpec>,
        n: u32,
    },
    DirectSum(Vec<FamilySpec>),
    Exchange(Box<FamilySpec>),
    Envelope {
        base: Box<FamilySpec>,
        k: u32,
    },
}

pub fn build_family(spec: &FamilySpec) -> Result<StructuredAlgebra, LoadError> {
    Ok(match spec {
        FamilySpec::Ut(n) => ut(*n as usize),
        FamilySpec::FullMatrix(n) => full_matrix(*n as usize),
        FamilySpec::Zero(d) => zero_algebra(*d as usize),
        FamilySpec::Field => field(),
        FamilySpec::GroupAlgebra(factors) => group_algebra(factors.clone())?,
        FamilySpec::Grassmann(k) => grassmann_truncated(*k as usize),
        FamilySpec::Incidence(relations) => incidence(relations)?,
        FamilySpec::TransposeMatrix(n) => {
            full_matrix_with_involution(*n as usize, MatrixInvolution::Transpose)?
        }
        FamilySpec::SymplecticMatrix(n) => {
            full_matrix_with_involution(*n as usize, MatrixInvolution::Symplectic)?
        }
        FamilySpec::ReflectionUt(n) => ut_with_reflection(*n as usize)?,
        FamilySpec::GradedMatrix { n, group, degrees } => {
            let g = GroupSpec::new(group.clone()).map_err(|e| LoadError::Structure(e.to_string()))?;
            full_matrix_graded(*n as usize, g, degrees.clone())?
        }
        FamilySpec::Graded { base, group, degrees } => {
            let b = build_family(base)?;
            let g = GroupSpec::new(group.clone()).map_err(|e| LoadError::Structure(e.to_string()))?;
            with_grading(&b, g, degrees.clone())?
        }
        FamilySpec::Tensor(parts) => {
            let [a, b] = parts.as_slice() else {
                return Err(LoadError::Structure(
                    "tensor takes exactly two factors".into(),
                ));
            };
            tensor_product(&build_family(a)?, &build_family(b)?)?
        }
        FamilySpec::MatrixAlgebra { base, n } => {
            matrix_algebra(&build_family(base)?, *n as usize)
        }
        FamilySpec::DirectSum(parts) => {
            let [a, b] = parts.as_slice() else {
                return Err(LoadError::Structure(
                    "direct_sum takes exactly two summands".into(),
                ));
            };
            direct_sum(&build_family(a)?, &build_family(b)?)?
        }
        FamilySpec::Exchange(base) => exchange_involution(&build_family(base)?)?,
        FamilySpec::Envelope { base, k } => {
            grassmann_envelope(&build_family(base)?, *k as usize)?
        }
    })
}

fn parse_rational(text: &str) -> Result<Scalar, LoadError> {
    parse_scalar(text).map_err(|detail| LoadError::BadRational {
        text: text.into(),
        detail,
    })
}

pub fn load_document(path: &Path) -> Result<AlgebraDocument, LoadError> {
    let bytes = std::fs::read(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_slice(&bytes).map_err(|source| LoadError::Json {
        path: path.display().to_string(),
        source,
    })
}

/// Builds and fully validates the algebra a document describes.
pub fn realize(doc: &AlgebraDocument) -> Result<StructuredAlgebra, LoadError> {
    match (&doc.table, &doc.family) {
        (Some(_), Some(_)) | (None, None) => Err(LoadError::TableOrFamily),
        (None, Some(family)) => {
            if doc.grading.is_some() || doc.involution.is_some() {
                return Err(LoadError::StructureOnFamily);
            }
            let sa = build_family(family)?;
            if doc.dim != 0 && doc.dim != sa.dim() {
                return Err(LoadError::DimMismatch {
                    declared: doc.dim,
                    actual: sa.dim(),
                });
            }
            if !doc.basis.is_empty() && doc.basis.len() != sa.dim() {
                return Err(LoadError::BasisMismatch {
                    got: doc.basis.len(),
                    dim: sa.dim(),
                });
            }
            Ok(sa)
        }
        (Some(entries), None) => {
            let dim = doc.dim;
            if !doc.basis.is_empty() && doc.basis.len() != dim {
                return Err(LoadError::BasisMismatch {
                    got: doc.basis.len(),
                    dim,
                });
            }
            let labels: Vec<String> = if doc.basis.is_empty() {
                (0..dim).map(|i| format!("b{}", i + 1)).collect()
            } else {
                doc.basis.clone()
            };
            let mut parsed = Vec::with_capacity(entries.len());
            for (i, j, k, text) in entries {
                for idx in [i, j, k] {
                    if *idx >= dim {
                        return Err(LoadError::IndexOutOfRange { index: *idx, dim });
                    }
                }
                parsed.push((*i, *j, *k, parse_rational(text)?));
            }
            let unit = doc
                .unit
                .as_ref()
                .map(|coords| {
                    if coords.len() != dim {
                        return Err(LoadError::UnitMismatch {
                            got: coords.len(),
                            dim,
                        });
                    }
                    coords.iter().map(|t| parse_rational(t)).collect()
                })
                .transpose()?;
            let algebra = Algebra::new(dim, labels, parsed, unit)?;
            algebra.validate()?;
            let structure = match (&doc.grading, &doc.involution) {
                (Some(_), Some(_)) => return Err(LoadError::TwoStructures),
                (None, None) => Structure::Trivial,
                (Some(g), None) => {
                    let group = GroupSpec::new(g.group.clone())
                        .map_err(|e| LoadError::Structure(e.to_string()))?;
                    let grading =
                        piexp_core::structured::Grading::new(group, g.degrees.clone())
                            .map_err(|e| LoadError::Structure(e.to_string()))?;
                    Structure::Graded(grading)
                }
                (None, Some(rows)) => {
                    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                        return Err(LoadError::Structure(format!(
                            "involution matrix must be {dim}x{dim}"
                        )));
                    }
                    let mut mat = Mat::zeros(dim, dim);
                    for (r, row) in rows.iter().enumerate() {
                        for (c, text) in row.iter().enumerate() {
                            mat[(r, c)] = parse_rational(text)?;
                        }
                    }
                    Structure::Involutive(Involution { mat })
                }
            };
            let sa = StructuredAlgebra { algebra, structure };
            sa.validate().map_err(LoadError::Structure)?;
            Ok(sa)
        }
    }
}

/// One-call load: read, parse, build, validate.
pub fn load_algebra(path: &Path) -> Result<StructuredAlgebra, LoadError> {
    realize(&load_document(path)?)
}

/// Canonical form: dimension and basis filled in, table entries sorted,
/// rationals reduced.  Idempotent, and the fixed point of save/load.
pub fn canonicalize(doc: &AlgebraDocument) -> Result<AlgebraDocument, LoadError> {
    let sa = realize(doc)?;
    if let Some(family) = &doc.family {
        return Ok(AlgebraDocument {
            name: doc.name.clone(),
            dim: sa.dim(),
            basis: sa.algebra.labels().to_vec(),
            table: None,
            unit: None,
            grading: None,
            involution: None,
            family: Some(family.clone()),
        });
    }
    Ok(to_document(&doc.name, &sa))
}

/// Explicit-table export of any algebra.
pub fn to_document(name: &str, sa: &StructuredAlgebra) -> AlgebraDocument {
    let a = &sa.algebra;
    let table: Vec<(usize, usize, usize, String)> = a
        .entries()
        .map(|(i, j, k, c)| (i, j, k, format_scalar(c)))
        .collect();
    let unit = a
        .unit()
        .map(|u| u.iter().map(format_scalar).collect::<Vec<_>>());
    let (grading, involution) = match &sa.structure {
        Structure::Trivial => (None, None),
        Structure::Graded(g) => (
            Some(GradingDoc {
                group: g.group.factors().to_vec(),
                degrees: g.degrees.clone(),
            }),
            None,
        ),
        Structure::Involutive(inv) => {
            let d = a.dim();
            let rows = (0..d)
                .map(|r| (0..d).map(|c| format_scalar(&inv.mat[(r, c)])).collect())
                .collect();
            (None, Some(rows))
        }
    };
    AlgebraDocument {
        name: name.into(),
        dim: a.dim(),
        basis: a.labels().to_vec(),
        table: Some(table),
        unit,
        grading,
        involution,
        family: None,
    }
}

/// Canonical serialization: pretty JSON plus a trailing newline.
pub fn to_json(doc: &AlgebraDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents always serialize");
    s.push('\n');
    s
}

/// Loads a polynomial from a text file in the grammar of
/// `piexp_core::identities::parse_polynomial`, ignoring blank lines and
/// `#` comments.
pub fn load_polynomial(
    path: &Path,
) -> Result<piexp_core::identities::Polynomial, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let body: String = text
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .collect::<Vec<_>>()
        .join(" ");
    piexp_core::identities::parse_polynomial(&body)
        .map_err(|e| LoadError::Structure(e.to_string()))
}
