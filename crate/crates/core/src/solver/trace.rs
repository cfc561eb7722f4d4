use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::roots::all_roots;
use super::special::{family_domain, singular_limit_masses, SpecialLabel, SpecialPoint};
use super::{alpha_on_curve, near_concave_singular, root_options, CurvePoint, PointMasses};
use crate::analysis::{find_curve_extremum, CurveExtremum};
use crate::angles::{deg, reconstruct_positions, AnglePair, ConfigKind};
use crate::conditions::{residual_full_raw, FamilyId};
use crate::error::{KiteError, Result};
use crate::masses::masses;
use crate::oracle::verify_central;

pub const DEFAULT_STEP_DEG: f64 = 0.05;

/// Fraction of grid points allowed to fail before a trace is rejected.
const MAX_FAILED_FRACTION: f64 = 0.01;

/// Grid points closer than this (degrees) to an endpoint are dropped in
/// favour of the endpoint itself.
const ENDPOINT_MERGE_DEG: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveFamily {
    pub id: FamilyId,
    /// Strictly increasing in β, endpoints included.
    pub points: Vec<CurvePoint>,
    pub endpoints: [SpecialLabel; 2],
    pub extremum: Option<CurveExtremum>,
    /// Grid points where the α solve failed.
    pub failed_points: usize,
}

impl CurveFamily {
    pub fn empty(id: FamilyId) -> Self {
        CurveFamily {
            id,
            points: Vec::new(),
            endpoints: endpoint_labels(id),
            extremum: None,
            failed_points: 0,
        }
    }
}

fn endpoint_labels(f: FamilyId) -> [SpecialLabel; 2] {
    match f {
        FamilyId::ConvexMu1 => [SpecialLabel::G, SpecialLabel::P1],
        FamilyId::ConvexMu2 => [SpecialLabel::P2, SpecialLabel::G],
        FamilyId::ConcaveMu1 => [SpecialLabel::P5, SpecialLabel::P7],
        FamilyId::ConcaveMu2 => [SpecialLabel::P4, SpecialLabel::P3],
    }
}

/// Builds the curve point at an already solved `(α, β)`.
pub fn curve_point(f: FamilyId, p: AnglePair) -> Result<CurvePoint> {
    let m = if f.kind() == ConfigKind::Concave && near_concave_singular(p.alpha(), p.beta()) {
        PointMasses::SingularS {
            limit: singular_limit_masses(f)?,
        }
    } else {
        PointMasses::Regular(masses(p, f.kind())?)
    };
    Ok(CurvePoint {
        angles: p,
        masses: m,
        residual_full: residual_full_raw(p.alpha(), p.beta(), f),
        oracle_residual: None,
        lambda: None,
    })
}

fn endpoint_point(f: FamilyId, s: &SpecialPoint) -> Result<CurvePoint> {
    curve_point(f, s.angles)
}

/// Traces the family on a β grid of `step_deg` degrees anchored at 0°,
/// adding the two endpoint solves.
pub fn trace_family(f: FamilyId, step_deg: f64) -> Result<CurveFamily> {
    if !(step_deg > 0.0 && step_deg.is_finite()) {
        return Err(KiteError::InvalidArguments(format!(
            "step must be positive, got {step_deg}"
        )));
    }
    let (start, end) = family_domain(f)?;
    let (b0, b1) = (start.angles.beta_deg(), end.angles.beta_deg());

    let k_lo = (b0 / step_deg).floor() as i64;
    let k_hi = (b1 / step_deg).ceil() as i64;
    let grid: Vec<f64> = (k_lo..=k_hi)
        .map(|k| k as f64 * step_deg)
        .filter(|&b| b > b0 + ENDPOINT_MERGE_DEG && b < b1 - ENDPOINT_MERGE_DEG)
        .collect();

    let solved: Vec<Result<CurvePoint>> = grid
        .par_iter()
        .map(|&b| {
            let beta = deg(b);
            let alpha = alpha_on_curve(f, beta)?;
            curve_point(f, AnglePair::new(alpha, beta)?)
        })
        .collect();

    let failed = solved.iter().filter(|r| r.is_err()).count();
    if failed as f64 > MAX_FAILED_FRACTION * grid.len() as f64 {
        return Err(KiteError::TraceFailure {
            family: f.to_string(),
            failed,
            total: grid.len(),
        });
    }

    let mut points = Vec::with_capacity(grid.len() + 2);
    points.push(endpoint_point(f, &start)?);
    points.extend(solved.into_iter().flatten());
    points.push(endpoint_point(f, &end)?);

    let extremum = match f {
        FamilyId::ConvexMu2 | FamilyId::ConcaveMu1 => Some(find_curve_extremum(f)?),
        _ => None,
    };

    Ok(CurveFamily {
        id: f,
        points,
        endpoints: endpoint_labels(f),
        extremum,
        failed_points: failed,
    })
}

/// Runs the Newtonian oracle on every point of the family, filling the
/// `oracle_residual` and `lambda` fields.
pub fn verify_family(fam: &mut CurveFamily) -> Result<()> {
    let kind = fam.id.kind();
    let reports: Vec<Result<(f64, f64)>> = fam
        .points
        .par_iter()
        .map(|pt| {
            let cfg = reconstruct_positions(pt.angles, kind)?.with_masses(pt.masses.triple());
            let rep = verify_central(&cfg)?;
            Ok((rep.max_relative_residual, rep.lambda))
        })
        .collect();
    for (pt, rep) in fam.points.iter_mut().zip(reports) {
        let (res, lambda) = rep?;
        pt.oracle_residual = Some(res);
        pt.lambda = Some(lambda);
    }
    Ok(())
}

/// Every β on the family curve with the given α, together with the masses.
pub fn branch_values(f: FamilyId, alpha: f64) -> Result<Vec<CurvePoint>> {
    let (start, end) = family_domain(f)?;
    let (b0, b1) = (start.angles.beta(), end.angles.beta());
    let margin = deg(0.5);
    let lo = (b0 - margin).max(0.0);
    let mut hi = b1 + margin;
    if f.kind() == ConfigKind::Concave {
        hi = hi.min(alpha - 1e-9);
    }
    if hi <= lo {
        return Err(KiteError::NoSolution(format!(
            "{f}: alpha = {} deg outside the codomain",
            alpha.to_degrees()
        )));
    }

    let betas = all_roots(
        |b| residual_full_raw(alpha, b, f),
        lo,
        hi,
        deg(0.1),
        &root_options(),
    )?;
    let tol = 1e-9;
    let out = betas
        .into_iter()
        .filter(|&b| b >= b0 - tol && b <= b1 + tol)
        .map(|b| curve_point(f, AnglePair::new(alpha, b.max(0.0))?))
        .collect::<Result<Vec<_>>>()?;
    if out.is_empty() {
        return Err(KiteError::NoSolution(format!(
            "{f}: alpha = {} deg outside the codomain",
            alpha.to_degrees()
        )));
    }
    Ok(out)
}
