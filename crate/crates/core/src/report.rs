//! Machine-readable report shapes for the CLI's JSON output.
//!
//! Exact rationals are serialized as separate numerator/denominator decimal
//! strings, never floats; high-precision reals are decimal strings with
//! explicit error-bound fields, so every report round-trips losslessly.
//! Field order is fixed by the struct definitions and all map-like content
//! is emitted sorted, keeping byte-identical output for identical inputs.

use rug::Float;
use serde::Serialize;

use crate::divisibility::CarlemanDiagnostic;
use crate::hankel::{HankelCertificate, MinorValue, ProbeReport, Verdict};
use crate::hiprec::decimal_string;
use crate::sequences::{FamilyId, MomentSequence, Terms};

/// Family parameters rendered for reports.
#[derive(Clone, Debug, Serialize, Default)]
pub struct ParamsJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
}

pub fn family_params(family: &FamilyId) -> ParamsJson {
    match family {
        FamilyId::FussCatalan { k } | FamilyId::FussBinomial { k } | FamilyId::KFactorial { k } => {
            ParamsJson {
                k: Some(*k),
                a: None,
            }
        }
        FamilyId::GammaPower { a } => ParamsJson {
            k: None,
            a: Some(a.to_string()),
        },
        _ => ParamsJson::default(),
    }
}

/// An exact rational as numerator/denominator strings.
#[derive(Clone, Debug, Serialize)]
pub struct RationalJson {
    pub numerator: String,
    pub denominator: String,
}

impl From<&rug::Rational> for RationalJson {
    fn from(r: &rug::Rational) -> Self {
        RationalJson {
            numerator: r.numer().to_string(),
            denominator: r.denom().to_string(),
        }
    }
}

/// A high-precision real as a decimal string with its error bound.
#[derive(Clone, Debug, Serialize)]
pub struct BoundedJson {
    pub value: String,
    pub errbound: String,
}

pub fn bounded_json(value: &Float, bound: &Float) -> BoundedJson {
    BoundedJson {
        value: decimal_string(value),
        errbound: decimal_string(bound),
    }
}

/// One minor in a Hankel certificate.
#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum MinorJson {
    Exact(RationalJson),
    Bounded(BoundedJson),
}

impl From<&MinorValue> for MinorJson {
    fn from(m: &MinorValue) -> Self {
        match m {
            MinorValue::Exact(r) => MinorJson::Exact(r.into()),
            MinorValue::Bounded { value, bound } => MinorJson::Bounded(bounded_json(value, bound)),
        }
    }
}

/// JSON shape of one Hankel certificate:
/// `{family, params, c, order, shifted, verdict, min_minor, precision_bits}`
/// plus the full minors list.
#[derive(Clone, Debug, Serialize)]
pub struct HankelReportJson {
    pub family: String,
    pub params: ParamsJson,
    pub c: f64,
    pub order: usize,
    pub shifted: bool,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub negative_minor_index: Option<usize>,
    pub min_minor: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<u32>,
    pub minors: Vec<MinorJson>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub conjectural: bool,
}

pub fn hankel_report(
    family: &FamilyId,
    c: f64,
    cert: &HankelCertificate,
) -> HankelReportJson {
    HankelReportJson {
        family: family.slug().to_string(),
        params: family_params(family),
        c,
        order: cert.order,
        shifted: cert.shifted,
        verdict: cert.verdict.slug().to_string(),
        negative_minor_index: match cert.verdict {
            Verdict::NegativeMinorFound(i) => Some(i),
            _ => None,
        },
        min_minor: cert.min_minor().decimal(),
        precision_bits: cert.precision_bits,
        minors: cert.minors.iter().map(MinorJson::from).collect(),
        conjectural: family.is_conjectural(),
    }
}

/// One probe row in JSON form.
#[derive(Clone, Debug, Serialize)]
pub struct ProbeRowJson {
    pub c: f64,
    pub verdict: String,
    pub min_minor: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<u32>,
}

/// JSON shape of a divisibility probe.
#[derive(Clone, Debug, Serialize)]
pub struct ProbeReportJson {
    pub family: String,
    pub params: ParamsJson,
    pub order: usize,
    pub precision_bits: u32,
    pub conjectural: bool,
    pub rows: Vec<ProbeRowJson>,
}

pub fn probe_report(report: &ProbeReport) -> ProbeReportJson {
    let mut rows: Vec<ProbeRowJson> = report
        .rows
        .iter()
        .map(|r| ProbeRowJson {
            c: r.c,
            verdict: r.verdict.slug().to_string(),
            min_minor: r.min_minor.decimal(),
            precision_bits: r.precision_bits,
        })
        .collect();
    rows.sort_by(|a, b| a.c.total_cmp(&b.c));
    ProbeReportJson {
        family: report.family.slug().to_string(),
        params: family_params(&report.family),
        order: report.maxorder,
        precision_bits: report.precision,
        conjectural: report.conjectural,
        rows,
    }
}

/// JSON shape of a Carleman diagnostic:
/// `{family, params, c, n, rho_hat, verdict, theorem_verdict, citation}`.
#[derive(Clone, Debug, Serialize)]
pub struct CarlemanReportJson {
    pub family: String,
    pub params: ParamsJson,
    pub c: f64,
    pub n: usize,
    pub rho_hat: f64,
    pub verdict: String,
    pub theorem_verdict: String,
    pub citation: String,
    pub partial_sum_final: String,
}

pub fn carleman_report(d: &CarlemanDiagnostic) -> CarlemanReportJson {
    CarlemanReportJson {
        family: d.family.slug().to_string(),
        params: family_params(&d.family),
        c: d.c,
        n: d.n_terms,
        rho_hat: d.rho_hat,
        verdict: d.verdict.slug().to_string(),
        theorem_verdict: d.theorem_verdict.slug().to_string(),
        citation: d.citation.clone(),
        partial_sum_final: decimal_string(d.partial_sums.last().expect("N >= 16")),
    }
}

/// JSON shape of a classification answer.
#[derive(Clone, Debug, Serialize)]
pub struct ClassifyReportJson {
    pub family: String,
    pub params: ParamsJson,
    pub c: f64,
    pub verdict: String,
    pub citation: String,
}

/// One sequence term in JSON form.
#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum TermJson {
    Exact {
        n: usize,
        numerator: String,
        denominator: String,
    },
    Inexact {
        n: usize,
        value: String,
        errbound: String,
    },
}

/// JSON shape of a generated sequence table.
#[derive(Clone, Debug, Serialize)]
pub struct SequenceReportJson {
    pub family: String,
    pub params: ParamsJson,
    pub exact: bool,
    pub terms: Vec<TermJson>,
}

pub fn sequence_report(family: &FamilyId, seq: &MomentSequence) -> SequenceReportJson {
    let terms = match seq.terms() {
        Terms::Exact(v) => v
            .iter()
            .enumerate()
            .map(|(n, t)| TermJson::Exact {
                n,
                numerator: t.numer().to_string(),
                denominator: t.denom().to_string(),
            })
            .collect(),
        Terms::Real {
            values, relbounds, ..
        } => values
            .iter()
            .zip(relbounds)
            .enumerate()
            .map(|(n, (v, b))| TermJson::Inexact {
                n,
                value: decimal_string(v),
                errbound: decimal_string(b),
            })
            .collect(),
    };
    SequenceReportJson {
        family: family.slug().to_string(),
        params: family_params(family),
        exact: seq.is_exact(),
        terms,
    }
}
