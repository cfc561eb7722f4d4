//! Command-line front end. Every command renders to a byte buffer, so the
//! output is identical whether written to stdout or a file.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{
    find_m_minimum, m_derivative_at, mass_ratio_m, verify_sign_claims, M_DOMAIN_DEG,
};
use crate::angles::{deg, reconstruct_positions, AnglePair};
use crate::conditions::FamilyId;
use crate::error::{KiteError, Result};
use crate::export::{
    export_checks, export_curve, export_m_function, export_records, export_special_points,
    CheckRecord, CurveRecord, Format, MDocument, MMinimumRecord, MRecord, SingularMasses,
};
use crate::oracle::verify_central;
use crate::solver::{
    alpha_on_curve, branch_values, curve_point, special_points, trace_family, verify_family,
    CurvePoint, DEFAULT_STEP_DEG,
};

pub const DEFAULT_ORACLE_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_SIGN_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Parser)]
#[command(
    name = "kitecc",
    version,
    about = "Kite central configurations with three equal masses"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Solution family: convex-mu1, convex-mu2, concave-mu1 or concave-mu2.
    #[arg(long, global = true)]
    pub family: Option<FamilyId>,

    /// β grid step in degrees, in (0, 1].
    #[arg(long = "step", global = true, default_value_t = DEFAULT_STEP_DEG)]
    pub step_deg: f64,

    #[arg(long = "format", global = true, value_enum, default_value_t = Format::Csv)]
    pub output_format: Format,

    /// Write to this file instead of stdout.
    #[arg(long = "output", short = 'o', global = true)]
    pub output_path: Option<PathBuf>,

    /// Run the Newtonian oracle on every emitted point.
    #[arg(long, global = true)]
    pub verify: bool,

    /// Relative oracle residual accepted by `verify`.
    #[arg(long, global = true)]
    pub oracle_tol: Option<f64>,

    /// Samples per sign claim in `verify`.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Trace one solution family on a β grid.
    Trace,
    /// Solve for α on a family at one β.
    Point {
        #[arg(long)]
        beta: f64,
    },
    /// List the labelled special points.
    SpecialPoints,
    /// All β on a family at one α.
    Branch {
        #[arg(long)]
        alpha: f64,
    },
    /// Oracle closure of traced families and sign checks of the slopes.
    Verify,
    /// Tabulate the mass ratio μ2/μ1 along the concave μ = μ2 curve.
    MFunction,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step_deg > 0.0 && self.step_deg <= 1.0) {
            return Err(KiteError::InvalidArguments(format!(
                "--step must lie in (0, 1], got {}",
                self.step_deg
            )));
        }
        if let Some(t) = self.oracle_tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(KiteError::InvalidArguments(format!(
                    "--oracle-tol must be positive, got {t}"
                )));
            }
        }
        if self.samples == Some(0) {
            return Err(KiteError::InvalidArguments(
                "--samples must be positive".into(),
            ));
        }
        let needs_family = matches!(
            self.command,
            Command::Trace | Command::Point { .. } | Command::Branch { .. }
        );
        if needs_family && self.family.is_none() {
            return Err(KiteError::InvalidArguments(
                "--family is required for this command".into(),
            ));
        }
        Ok(())
    }

    fn family(&self) -> Result<FamilyId> {
        self.family
            .ok_or_else(|| KiteError::InvalidArguments("--family is required".into()))
    }
}

/// Executes the command and returns the rendered output.
pub fn run(cfg: &RunConfig) -> Result<Vec<u8>> {
    cfg.validate()?;
    let fmt = cfg.output_format;
    match &cfg.command {
        Command::Trace => {
            let mut fam = trace_family(cfg.family()?, cfg.step_deg)?;
            if cfg.verify {
                verify_family(&mut fam)?;
            }
            export_curve(&fam, fmt)
        }
        Command::Point { beta } => {
            let f = cfg.family()?;
            let b = angle_arg("--beta", *beta)?;
            let alpha = alpha_on_curve(f, b)?;
            let mut pt = curve_point(f, AnglePair::new(alpha, b)?)?;
            if cfg.verify {
                attach_oracle(f, &mut pt)?;
            }
            export_records(&[CurveRecord::new(f, &pt, SingularMasses::Limit)], fmt)
        }
        Command::Branch { alpha } => {
            let f = cfg.family()?;
            let mut pts = branch_values(f, angle_arg("--alpha", *alpha)?)?;
            if cfg.verify {
                for pt in &mut pts {
                    attach_oracle(f, pt)?;
                }
            }
            let records: Vec<_> = pts
                .iter()
                .map(|p| CurveRecord::new(f, p, SingularMasses::Limit))
                .collect();
            export_records(&records, fmt)
        }
        Command::SpecialPoints => export_special_points(&special_points()?, fmt),
        Command::Verify => {
            let checks = verify_checks(cfg)?;
            let out = export_checks(&checks, fmt)?;
            let failed: Vec<_> = checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| c.subject.as_str())
                .collect();
            if failed.is_empty() {
                Ok(out)
            } else {
                Err(KiteError::VerificationFailed(failed.join("; ")))
            }
        }
        Command::MFunction => export_m_function(&m_table(cfg.step_deg)?, fmt),
    }
}

fn angle_arg(name: &str, degrees: f64) -> Result<f64> {
    if !(0.0..90.0).contains(&degrees) {
        return Err(KiteError::InvalidArguments(format!(
            "{name} must lie in [0, 90) degrees, got {degrees}"
        )));
    }
    Ok(deg(degrees))
}

fn attach_oracle(f: FamilyId, pt: &mut CurvePoint) -> Result<()> {
    let cfg = reconstruct_positions(pt.angles, f.kind())?.with_masses(pt.masses.triple());
    let rep = verify_central(&cfg)?;
    pt.oracle_residual = Some(rep.max_relative_residual);
    pt.lambda = Some(rep.lambda);
    Ok(())
}

fn verify_checks(cfg: &RunConfig) -> Result<Vec<CheckRecord>> {
    let tol = cfg.oracle_tol.unwrap_or(DEFAULT_ORACLE_TOLERANCE);
    let families = match cfg.family {
        Some(f) => vec![f],
        None => FamilyId::ALL.to_vec(),
    };
    let mut checks = Vec::new();
    for f in families {
        let mut fam = trace_family(f, cfg.step_deg)?;
        verify_family(&mut fam)?;
        let worst = fam
            .points
            .iter()
            .filter_map(|p| p.oracle_residual)
            .fold(0.0, f64::max);
        let min_lambda = fam
            .points
            .iter()
            .filter_map(|p| p.lambda)
            .fold(f64::INFINITY, f64::min);
        checks.push(CheckRecord {
            check: "oracle-closure".into(),
            subject: f.name().into(),
            samples: fam.points.len(),
            value: Some(worst),
            passed: worst < tol && min_lambda > 0.0,
            witness: None,
        });
    }
    let n = cfg.samples.unwrap_or(DEFAULT_SIGN_SAMPLES);
    checks.extend(verify_sign_claims(n)?.iter().map(CheckRecord::from));
    Ok(checks)
}

fn m_table(step_deg: f64) -> Result<MDocument> {
    let (lo, hi) = M_DOMAIN_DEG;
    let n = ((hi - lo) / step_deg).floor() as usize;
    let points = (0..=n)
        .into_par_iter()
        .map(|k| {
            let b = deg(lo + k as f64 * step_deg);
            let a = alpha_on_curve(FamilyId::ConcaveMu2, b)?;
            Ok(MRecord {
                beta_deg: b.to_degrees(),
                alpha_deg: a.to_degrees(),
                m: mass_ratio_m(b)?,
                dm_dbeta: m_derivative_at(a, b),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MDocument {
        minimum: MMinimumRecord::from(&find_m_minimum()?),
        points,
    })
}

/// Machine-readable error record written to stderr on failure.
#[derive(Debug, Serialize)]
pub struct ErrorRecord<'a> {
    pub error: &'a str,
    pub module: &'a str,
    pub message: String,
}

impl<'a> From<&'a KiteError> for ErrorRecord<'a> {
    fn from(e: &'a KiteError) -> Self {
        ErrorRecord {
            error: e.kind(),
            module: e.module(),
            message: e.to_string(),
        }
    }
}
