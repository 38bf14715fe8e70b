//! JSON serialization for the library's data types.
//!
//! Every shape keeps scalars exact: rational parts are decimal strings
//! (`"3/2"`, `"-1"`), never floats, so values survive a round trip
//! unchanged. Deserialization validates through the same constructors the
//! library uses, so malformed input fails with the library's own errors
//! rather than producing inconsistent values.
//!
//! Rule-backed operators are the one type with no serialization — they wrap
//! arbitrary closures.

use std::collections::BTreeMap;
use std::str::FromStr;

use num::{BigInt, BigRational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::operators::{DiffOpSeries, LinOp, NormalSymbol, SpecialOp};
use crate::poly::{Poly, VarKind};
use crate::scalar::{rational_string, Scalar};
use crate::trace::{GradedSeries, SeriesStatus, TraceResult, TraceStatus};
use crate::weyl::NormalForm;

/// A Gaussian rational as two exact rational strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarJson {
    pub re: String,
    pub im: String,
}

impl From<&Scalar> for ScalarJson {
    fn from(s: &Scalar) -> Self {
        ScalarJson {
            re: rational_string(s.re()),
            im: rational_string(s.im()),
        }
    }
}

/// Parses `"a"` or `"a/b"` with arbitrary-precision integers; rejects zero
/// denominators instead of panicking.
fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = |msg: &str| Error::InvalidData(format!("invalid rational {s:?}: {msg}"));
    let (numer, denom) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s.trim(), None),
    };
    let numer = BigInt::from_str(numer).map_err(|_| bad("bad numerator"))?;
    let denom = match denom {
        Some(d) => BigInt::from_str(d).map_err(|_| bad("bad denominator"))?,
        None => BigInt::from(1),
    };
    if denom == BigInt::from(0) {
        return Err(bad("zero denominator"));
    }
    Ok(BigRational::new(numer, denom))
}

pub fn scalar_from_json(j: &ScalarJson) -> Result<Scalar> {
    Ok(Scalar::new(parse_rational(&j.re)?, parse_rational(&j.im)?))
}

/// One polynomial term: exponent vector plus exact coefficient.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyTermJson {
    pub exp: Vec<u32>,
    pub re: String,
    pub im: String,
}

/// Canonical polynomial serialization. Terms are emitted in ascending
/// graded-lex order and carry no zero coefficients, so equal polynomials
/// serialize byte-identically.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyJson {
    pub nvars: usize,
    /// `"symplectic"` (`nvars = 2·pairs`) or `"plain"`.
    pub kind: String,
    pub terms: Vec<PolyTermJson>,
}

pub fn poly_to_json(p: &Poly) -> PolyJson {
    let kind = match p.kind() {
        VarKind::Symplectic { .. } => "symplectic",
        VarKind::Plain { .. } => "plain",
    };
    PolyJson {
        nvars: p.nvars(),
        kind: kind.into(),
        terms: p
            .terms()
            .map(|(m, c)| PolyTermJson {
                exp: m.exps().to_vec(),
                re: rational_string(c.re()),
                im: rational_string(c.im()),
            })
            .collect(),
    }
}

pub fn poly_from_json(j: &PolyJson) -> Result<Poly> {
    let kind = match j.kind.as_str() {
        "symplectic" => {
            if j.nvars % 2 != 0 {
                return Err(Error::InvalidData(format!(
                    "symplectic polynomials need an even variable count, got {}",
                    j.nvars
                )));
            }
            VarKind::Symplectic { pairs: j.nvars / 2 }
        }
        "plain" => VarKind::Plain { vars: j.nvars },
        other => {
            return Err(Error::InvalidData(format!(
                "unknown variable kind {other:?} (expected \"symplectic\" or \"plain\")"
            )))
        }
    };
    let mut p = Poly::zero(kind);
    for t in &j.terms {
        if t.exp.len() != j.nvars {
            return Err(Error::InvalidData(format!(
                "exponent vector {:?} has length {}, expected {}",
                t.exp,
                t.exp.len(),
                j.nvars
            )));
        }
        let c = Scalar::new(parse_rational(&t.re)?, parse_rational(&t.im)?);
        p.add_term(MultiIndex::new(t.exp.clone()), c);
    }
    Ok(p)
}

/// One normally ordered term `c · q^Q p^P`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NormalFormTermJson {
    pub q: Vec<u32>,
    pub p: Vec<u32>,
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NormalFormJson {
    pub n: usize,
    pub terms: Vec<NormalFormTermJson>,
}

pub fn normal_form_to_json(a: &NormalForm) -> NormalFormJson {
    NormalFormJson {
        n: a.n(),
        terms: a
            .terms()
            .map(|((q, p), c)| NormalFormTermJson {
                q: q.exps().to_vec(),
                p: p.exps().to_vec(),
                re: rational_string(c.re()),
                im: rational_string(c.im()),
            })
            .collect(),
    }
}

pub fn normal_form_from_json(j: &NormalFormJson) -> Result<NormalForm> {
    let mut a = NormalForm::zero(j.n);
    for t in &j.terms {
        if t.q.len() != j.n || t.p.len() != j.n {
            return Err(Error::InvalidData(format!(
                "normal-form term exponents must have length {}, got q: {}, p: {}",
                j.n,
                t.q.len(),
                t.p.len()
            )));
        }
        let c = Scalar::new(parse_rational(&t.re)?, parse_rational(&t.im)?);
        a.add_term(
            MultiIndex::new(t.q.clone()),
            MultiIndex::new(t.p.clone()),
            c,
        );
    }
    Ok(a)
}

/// One finite-rank table row: source monomial exponents and image.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableEntryJson {
    #[serde(rename = "in")]
    pub source: Vec<u32>,
    pub out: PolyJson,
}

/// Parameter of a special operator: a multi-index or an exact scalar.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpecialParamJson {
    Index(Vec<u32>),
    Scalar(ScalarJson),
}

/// Operator serialization: `kind` is `"finite_rank"` (with `table`) or
/// `"special"` (with `name` and `params`). Special names: `"E"` with params
/// `[target, source]`, `"S"` and `"expEuler"` with params `[λ]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LinOpJson {
    pub n: usize,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<TableEntryJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Vec<SpecialParamJson>>,
}

pub fn linop_to_json(t: &LinOp) -> Result<LinOpJson> {
    match t {
        LinOp::FiniteRank { n, table } => Ok(LinOpJson {
            n: *n,
            kind: "finite_rank".into(),
            table: Some(
                table
                    .iter()
                    .map(|(m, out)| TableEntryJson {
                        source: m.exps().to_vec(),
                        out: poly_to_json(out),
                    })
                    .collect(),
            ),
            name: None,
            params: None,
        }),
        LinOp::Special { n, op } => {
            let (name, params) = match op {
                SpecialOp::E { target, source } => (
                    "E",
                    vec![
                        SpecialParamJson::Index(target.exps().to_vec()),
                        SpecialParamJson::Index(source.exps().to_vec()),
                    ],
                ),
                SpecialOp::S { lambda } => ("S", vec![SpecialParamJson::Scalar(lambda.into())]),
                SpecialOp::ExpEuler { lambda } => {
                    ("expEuler", vec![SpecialParamJson::Scalar(lambda.into())])
                }
            };
            Ok(LinOpJson {
                n: *n,
                kind: "special".into(),
                table: None,
                name: Some(name.into()),
                params: Some(params),
            })
        }
        LinOp::Rule { .. } => Err(Error::Domain(
            "rule-backed operators wrap closures and have no serialization".into(),
        )),
    }
}

pub fn linop_from_json(j: &LinOpJson) -> Result<LinOp> {
    match j.kind.as_str() {
        "finite_rank" => {
            let rows = j.table.as_ref().ok_or_else(|| {
                Error::InvalidData("finite_rank operator needs a \"table\"".into())
            })?;
            let mut table = BTreeMap::new();
            for row in rows {
                table.insert(MultiIndex::new(row.source.clone()), poly_from_json(&row.out)?);
            }
            LinOp::finite_rank(j.n, table)
        }
        "special" => {
            let name = j
                .name
                .as_deref()
                .ok_or_else(|| Error::InvalidData("special operator needs a \"name\"".into()))?;
            let params = j.params.as_deref().unwrap_or(&[]);
            let op = match (name, params) {
                ("E", [SpecialParamJson::Index(t), SpecialParamJson::Index(s)]) => SpecialOp::E {
                    target: MultiIndex::new(t.clone()),
                    source: MultiIndex::new(s.clone()),
                },
                ("S", [SpecialParamJson::Scalar(l)]) => SpecialOp::S {
                    lambda: scalar_from_json(l)?,
                },
                ("expEuler", [SpecialParamJson::Scalar(l)]) => SpecialOp::ExpEuler {
                    lambda: scalar_from_json(l)?,
                },
                ("E" | "S" | "expEuler", _) => {
                    return Err(Error::InvalidData(format!(
                        "wrong parameters for special operator {name:?}"
                    )))
                }
                (other, _) => {
                    return Err(Error::InvalidData(format!(
                        "unknown special operator {other:?} (expected \"E\", \"S\", or \"expEuler\")"
                    )))
                }
            };
            LinOp::special(j.n, op)
        }
        other => Err(Error::InvalidData(format!(
            "unknown operator kind {other:?} (expected \"finite_rank\" or \"special\")"
        ))),
    }
}

/// One series term: differentiation order and its coefficient polynomial.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeriesTermJson {
    pub order: Vec<u32>,
    pub coeff: PolyJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiffOpSeriesJson {
    pub n: usize,
    pub truncation: u32,
    pub terms: Vec<SeriesTermJson>,
}

pub fn diffop_series_to_json(s: &DiffOpSeries) -> DiffOpSeriesJson {
    DiffOpSeriesJson {
        n: s.n(),
        truncation: s.truncation(),
        terms: s
            .coeffs()
            .iter()
            .map(|(order, coeff)| SeriesTermJson {
                order: order.exps().to_vec(),
                coeff: poly_to_json(coeff),
            })
            .collect(),
    }
}

pub fn diffop_series_from_json(j: &DiffOpSeriesJson) -> Result<DiffOpSeries> {
    let mut coeffs = BTreeMap::new();
    for t in &j.terms {
        coeffs.insert(MultiIndex::new(t.order.clone()), poly_from_json(&t.coeff)?);
    }
    DiffOpSeries::new(j.n, j.truncation, coeffs)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NormalSymbolJson {
    pub n: usize,
    pub truncation: u32,
    pub complete: bool,
    pub terms: Vec<SeriesTermJson>,
}

pub fn normal_symbol_to_json(s: &NormalSymbol) -> NormalSymbolJson {
    NormalSymbolJson {
        n: s.n(),
        truncation: s.truncation(),
        complete: s.is_complete(),
        terms: s
            .alphas()
            .iter()
            .map(|(order, alpha)| SeriesTermJson {
                order: order.exps().to_vec(),
                coeff: poly_to_json(alpha),
            })
            .collect(),
    }
}

pub fn normal_symbol_from_json(j: &NormalSymbolJson) -> Result<NormalSymbol> {
    let mut alphas = BTreeMap::new();
    for t in &j.terms {
        alphas.insert(MultiIndex::new(t.order.clone()), poly_from_json(&t.coeff)?);
    }
    NormalSymbol::new(j.n, j.truncation, j.complete, alphas)
}

fn series_status_strings(s: &SeriesStatus) -> (&'static str, Option<u32>) {
    match s {
        SeriesStatus::Converged { terms_used } => ("converged", Some(*terms_used)),
        SeriesStatus::Diverged => ("diverged", None),
        SeriesStatus::Undetermined => ("undetermined", None),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeriesComponentJson {
    pub degree: u32,
    pub status: String,
    pub poly: PolyJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms_used: Option<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GradedSeriesJson {
    pub n: usize,
    pub max_degree: u32,
    pub components: Vec<SeriesComponentJson>,
}

pub fn graded_series_to_json(s: &GradedSeries) -> GradedSeriesJson {
    GradedSeriesJson {
        n: s.n(),
        max_degree: s.max_degree(),
        components: s
            .components()
            .iter()
            .map(|c| {
                let (status, terms_used) = series_status_strings(&c.status);
                SeriesComponentJson {
                    degree: c.degree,
                    status: status.into(),
                    poly: poly_to_json(&c.poly),
                    terms_used,
                }
            })
            .collect(),
    }
}

/// A batch-summed scalar: exact value, a binary64 approximation for
/// convenience, and the certification status.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceResultJson {
    pub value: ScalarJson,
    pub approx_re: f64,
    pub approx_im: f64,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub batches_used: Option<u32>,
}

pub fn trace_result_to_json(r: &TraceResult) -> TraceResultJson {
    let (status, batches_used) = match &r.status {
        TraceStatus::Exact => ("exact", None),
        TraceStatus::Converged { batches_used } => ("converged", Some(*batches_used)),
        TraceStatus::Diverged => ("diverged", None),
        TraceStatus::Undetermined => ("undetermined", None),
    };
    TraceResultJson {
        value: (&r.value).into(),
        approx_re: r.value.re_f64(),
        approx_im: r.value.im_f64(),
        status: status.into(),
        batches_used,
    }
}
