//! Deterministic CSV and JSON output.
//!
//! CSV angles are printed in degrees with six decimals; every other real
//! uses the shortest decimal that round-trips. JSON keeps full precision
//! throughout.

use serde::{Deserialize, Serialize};

use crate::analysis::{CurveExtremum, ExtremumKind, MassRatioMinimum, SignClaim};
use crate::angles::ConfigKind;
use crate::conditions::FamilyId;
use crate::error::Result;
use crate::masses::MassTriple;
use crate::solver::{
    CurveFamily, CurvePoint, PointMasses, SpecialLabel, SpecialMasses, SpecialPoint,
};

pub const CURVE_COLUMNS: [&str; 11] = [
    "family",
    "kind",
    "beta_deg",
    "alpha_deg",
    "mu1",
    "mu2",
    "mu",
    "residual_full",
    "oracle_residual",
    "lambda",
    "note",
];

pub const SINGULAR_NOTE: &str = "singular-S";
pub const SINGULAR_LIMIT_NOTE: &str = "singular-S-limit";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// How a point at the concave singular point reports its masses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularMasses {
    /// Mass fields left undetermined.
    Undetermined,
    /// Mass fields set to the limit along the curve.
    Limit,
}

/// Flat per-point record shared by the CSV and JSON writers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub family: FamilyId,
    pub kind: ConfigKind,
    pub beta_deg: f64,
    pub alpha_deg: f64,
    pub mu1: Option<f64>,
    pub mu2: Option<f64>,
    pub mu: Option<f64>,
    pub residual_full: f64,
    pub oracle_residual: Option<f64>,
    pub lambda: Option<f64>,
    pub note: Option<String>,
    /// Limit of the masses along the curve, for singular rows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<MassTriple>,
}

impl CurveRecord {
    pub fn new(f: FamilyId, pt: &CurvePoint, singular: SingularMasses) -> Self {
        let (m, note, limit) = match (pt.masses, singular) {
            (PointMasses::Regular(m), _) => (Some(m), None, None),
            (PointMasses::SingularS { limit }, SingularMasses::Undetermined) => {
                (None, Some(SINGULAR_NOTE.to_string()), Some(limit))
            }
            (PointMasses::SingularS { limit }, SingularMasses::Limit) => {
                (Some(limit), Some(SINGULAR_LIMIT_NOTE.to_string()), None)
            }
        };
        CurveRecord {
            family: f,
            kind: f.kind(),
            beta_deg: pt.angles.beta_deg(),
            alpha_deg: pt.angles.alpha_deg(),
            mu1: m.map(|m| m.mu1),
            mu2: m.map(|m| m.mu2),
            mu: m.map(|m| m.mu),
            residual_full: pt.residual_full,
            oracle_residual: pt.oracle_residual,
            lambda: pt.lambda,
            note,
            limit,
        }
    }

    fn csv_fields(&self) -> Vec<String> {
        let mass = |x: Option<f64>| x.map_or_else(|| "NaN".to_string(), real);
        vec![
            self.family.name().to_string(),
            self.kind.name().to_string(),
            degrees(self.beta_deg),
            degrees(self.alpha_deg),
            mass(self.mu1),
            mass(self.mu2),
            mass(self.mu),
            real(self.residual_full),
            optional(self.oracle_residual),
            optional(self.lambda),
            self.note.clone().unwrap_or_default(),
        ]
    }
}

/// Adding zero folds `-0.0` into `0.0`.
fn degrees(x: f64) -> String {
    format!("{:.6}", x + 0.0)
}

/// Shortest round-trip decimal, in exponent form away from unit scale.
fn real(x: f64) -> String {
    let x = x + 0.0;
    if x != 0.0 && x.is_finite() && !(1e-5..1e16).contains(&x.abs()) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn optional(x: Option<f64>) -> String {
    x.map(real).unwrap_or_default()
}

fn write_csv<I>(header: &[&str], rows: I) -> Result<Vec<u8>>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.into_inner()
        .map_err(|e| crate::error::KiteError::Io(e.to_string()))
}

fn write_json<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremumRecord {
    pub beta_deg: f64,
    pub alpha_deg: f64,
    pub kind: ExtremumKind,
}

impl From<&CurveExtremum> for ExtremumRecord {
    fn from(e: &CurveExtremum) -> Self {
        ExtremumRecord {
            beta_deg: e.angles.beta_deg(),
            alpha_deg: e.angles.alpha_deg(),
            kind: e.kind,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveDocument {
    pub family: FamilyId,
    pub endpoints: [SpecialLabel; 2],
    pub extremum: Option<ExtremumRecord>,
    pub failed_points: usize,
    pub points: Vec<CurveRecord>,
}

pub fn curve_records(fam: &CurveFamily, singular: SingularMasses) -> Vec<CurveRecord> {
    fam.points
        .iter()
        .map(|p| CurveRecord::new(fam.id, p, singular))
        .collect()
}

pub fn export_records(records: &[CurveRecord], fmt: Format) -> Result<Vec<u8>> {
    match fmt {
        Format::Csv => write_csv(&CURVE_COLUMNS, records.iter().map(CurveRecord::csv_fields)),
        Format::Json => write_json(records),
    }
}

pub fn export_curve(fam: &CurveFamily, fmt: Format) -> Result<Vec<u8>> {
    let records = curve_records(fam, SingularMasses::Undetermined);
    match fmt {
        Format::Csv => export_records(&records, fmt),
        Format::Json => write_json(&CurveDocument {
            family: fam.id,
            endpoints: fam.endpoints,
            extremum: fam.extremum.as_ref().map(ExtremumRecord::from),
            failed_points: fam.failed_points,
            points: records,
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecialRecord {
    pub label: SpecialLabel,
    pub kind: ConfigKind,
    pub beta_deg: f64,
    pub alpha_deg: f64,
    pub masses: Option<MassTriple>,
    /// Mass relation at points where the masses are not unique.
    pub relation: Option<String>,
}

impl From<&SpecialPoint> for SpecialRecord {
    fn from(s: &SpecialPoint) -> Self {
        let (masses, relation) = match &s.masses {
            SpecialMasses::Defined(m) => (Some(*m), None),
            SpecialMasses::Degenerate { relation } => (None, Some(relation.clone())),
        };
        SpecialRecord {
            label: s.label,
            kind: s.kind,
            beta_deg: s.angles.beta_deg(),
            alpha_deg: s.angles.alpha_deg(),
            masses,
            relation,
        }
    }
}

pub fn export_special_points(points: &[SpecialPoint], fmt: Format) -> Result<Vec<u8>> {
    let records: Vec<SpecialRecord> = points.iter().map(SpecialRecord::from).collect();
    match fmt {
        Format::Json => write_json(&records),
        Format::Csv => write_csv(
            &[
                "label",
                "kind",
                "beta_deg",
                "alpha_deg",
                "mu1",
                "mu2",
                "mu",
                "note",
            ],
            records.iter().map(|r| {
                let mass = |g: fn(&MassTriple) -> f64| {
                    r.masses
                        .as_ref()
                        .map_or_else(|| "NaN".into(), |m| real(g(m)))
                };
                vec![
                    r.label.name().to_string(),
                    r.kind.name().to_string(),
                    degrees(r.beta_deg),
                    degrees(r.alpha_deg),
                    mass(|m| m.mu1),
                    mass(|m| m.mu2),
                    mass(|m| m.mu),
                    r.relation.clone().unwrap_or_default(),
                ]
            }),
        ),
    }
}

/// One row of the `M(β)` table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MRecord {
    pub beta_deg: f64,
    pub alpha_deg: f64,
    pub m: f64,
    pub dm_dbeta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MDocument {
    pub minimum: MMinimumRecord,
    pub points: Vec<MRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MMinimumRecord {
    pub beta_deg: f64,
    pub alpha_deg: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub mu1_over_mu2: f64,
}

impl From<&MassRatioMinimum> for MMinimumRecord {
    fn from(m: &MassRatioMinimum) -> Self {
        MMinimumRecord {
            beta_deg: m.angles.beta_deg(),
            alpha_deg: m.angles.alpha_deg(),
            mu1: m.masses.mu1,
            mu2: m.masses.mu2,
            mu1_over_mu2: m.inverse_ratio,
        }
    }
}

pub fn export_m_function(doc: &MDocument, fmt: Format) -> Result<Vec<u8>> {
    match fmt {
        Format::Json => write_json(doc),
        Format::Csv => write_csv(
            &["beta_deg", "alpha_deg", "m", "dm_dbeta"],
            doc.points.iter().map(|r| {
                vec![
                    degrees(r.beta_deg),
                    degrees(r.alpha_deg),
                    real(r.m),
                    real(r.dm_dbeta),
                ]
            }),
        ),
    }
}

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    pub subject: String,
    pub samples: usize,
    pub value: Option<f64>,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<(f64, f64)>,
}

impl From<&SignClaim> for CheckRecord {
    fn from(c: &SignClaim) -> Self {
        CheckRecord {
            check: "sign-claim".into(),
            subject: c.name.clone(),
            samples: c.samples,
            value: None,
            passed: c.holds,
            witness: c.witness,
        }
    }
}

pub fn export_checks(checks: &[CheckRecord], fmt: Format) -> Result<Vec<u8>> {
    match fmt {
        Format::Json => write_json(checks),
        Format::Csv => write_csv(
            &[
                "check",
                "subject",
                "samples",
                "value",
                "passed",
                "witness_alpha_deg",
                "witness_beta_deg",
            ],
            checks.iter().map(|c| {
                vec![
                    c.check.clone(),
                    c.subject.clone(),
                    c.samples.to_string(),
                    optional(c.value),
                    c.passed.to_string(),
                    optional(c.witness.map(|w| w.0)),
                    optional(c.witness.map(|w| w.1)),
                ]
            }),
        ),
    }
}
