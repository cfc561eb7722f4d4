//! Solution curves of the equal-mass conditions in the (β, α) plane.
//!
//! Every family is single-valued in β, so curves are traced on a β grid
//! with one bracketed α solve per grid point. Domain ends come from solving
//! the condition along the bounding critical lines.

pub mod roots;
mod special;
mod trace;

use serde::{Deserialize, Serialize};

use crate::angles::{deg, is_admissible, AnglePair, ConfigKind};
use crate::conditions::{residual_full_raw, FamilyId};
use crate::error::{KiteError, Result};
use crate::masses::MassTriple;
use roots::{find_root, scan_brackets, Bracket, RootOptions};

pub use special::{
    family_domain, singular_limit_masses, special_points, SpecialLabel, SpecialMasses, SpecialPoint,
};
pub use trace::{
    branch_values, curve_point, trace_family, verify_family, CurveFamily, DEFAULT_STEP_DEG,
};

/// α scan resolution used for bracket discovery.
pub const ALPHA_SCAN_STEP_DEG: f64 = 0.1;

/// Slack beyond the region's α extent that is still scanned.
const WINDOW_MARGIN_DEG: f64 = 0.5;

/// Distance (radians) from the concave singular point below which the mass
/// formula is not evaluated.
pub const SINGULAR_RADIUS: f64 = 1e-7;

/// Slack used when checking that a root lies in the admissible region.
const REGION_SLACK: f64 = 1e-9;

/// Masses attached to a curve point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "type")]
pub enum PointMasses {
    Regular(MassTriple),
    /// At the concave singular point the mass formula is 0/0; `limit` is
    /// the value approached along this family's curve.
    SingularS {
        limit: MassTriple,
    },
}

impl PointMasses {
    pub fn triple(&self) -> &MassTriple {
        match self {
            PointMasses::Regular(m) | PointMasses::SingularS { limit: m } => m,
        }
    }

    pub fn is_singular(&self) -> bool {
        matches!(self, PointMasses::SingularS { .. })
    }
}

/// One point of a traced solution curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub angles: AnglePair,
    pub masses: PointMasses,
    pub residual_full: f64,
    pub oracle_residual: Option<f64>,
    pub lambda: Option<f64>,
}

pub(crate) fn root_options() -> RootOptions {
    RootOptions::default()
}

/// True within [`SINGULAR_RADIUS`] of the concave singular point.
pub fn near_concave_singular(alpha: f64, beta: f64) -> bool {
    (alpha - deg(60.0)).hypot(beta - deg(30.0)) < SINGULAR_RADIUS
}

/// α interval scanned at fixed β: the admissible α extent of the family's
/// region plus a margin.
pub(crate) fn alpha_window(f: FamilyId, beta: f64) -> (f64, f64) {
    let b = beta.to_degrees();
    let (lo, hi) = match f.kind() {
        ConfigKind::Convex => (b.max(90.0 - 2.0 * b), 60.0),
        ConfigKind::Concave if b < 30.0 => (45.0 + b / 2.0, 60.0),
        ConfigKind::Concave => (60.0, 45.0 + b / 2.0),
    };
    let mut lo = deg(lo - WINDOW_MARGIN_DEG).max(0.0);
    if f.kind() == ConfigKind::Concave {
        lo = lo.max(beta + 1e-9);
    }
    let hi = deg(hi + WINDOW_MARGIN_DEG).min(deg(89.9));
    (lo, hi)
}

/// Refines the root of the family condition at fixed β inside `bracket`
/// (α values in radians).
pub fn solve_alpha(f: FamilyId, beta: f64, bracket: (f64, f64)) -> Result<f64> {
    find_root(
        |a| residual_full_raw(a, beta, f),
        bracket.0,
        bracket.1,
        &root_options(),
    )
}

/// All admissible α on the family curve at β.
pub fn alpha_candidates(f: FamilyId, beta: f64) -> Result<Vec<f64>> {
    let (lo, hi) = alpha_window(f, beta);
    let g = |a: f64| residual_full_raw(a, beta, f);
    let mut out = Vec::new();
    for br in scan_brackets(g, lo, hi, deg(ALPHA_SCAN_STEP_DEG)) {
        let a = match br {
            Bracket::Exact(a) => a,
            Bracket::Interval(x, y) => solve_alpha(f, beta, (x, y))?,
        };
        let p = AnglePair::new(a, beta)?;
        if is_admissible(p, f.kind(), REGION_SLACK) {
            out.push(a);
        }
    }
    Ok(out)
}

/// α(β) on the family curve. Fails if the curve does not cross the
/// admissible region at this β or crosses it more than once.
pub fn alpha_on_curve(f: FamilyId, beta: f64) -> Result<f64> {
    let c = alpha_candidates(f, beta)?;
    match c.as_slice() {
        [a] => Ok(*a),
        [] => Err(KiteError::NoSolution(format!(
            "{f}: no admissible alpha at beta = {} deg",
            beta.to_degrees()
        ))),
        _ => Err(KiteError::NoSolution(format!(
            "{f}: {} admissible alpha roots at beta = {} deg",
            c.len(),
            beta.to_degrees()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convex_mu1_reference_points() {
        let a = alpha_on_curve(FamilyId::ConvexMu1, deg(45.0)).unwrap();
        assert!((a - deg(45.0)).abs() < 1e-10);
        let a = alpha_on_curve(FamilyId::ConvexMu1, deg(52.282)).unwrap();
        assert!((a.to_degrees() - 60.0).abs() < 0.002);
    }

    #[test]
    fn concave_mu1_second_branch_point() {
        let a = alpha_on_curve(FamilyId::ConcaveMu1, deg(23.460)).unwrap();
        assert!((a.to_degrees() - 58.0).abs() < 0.002);
    }

    #[test]
    fn solve_alpha_converges_tightly() {
        let beta = deg(48.0);
        let a = solve_alpha(FamilyId::ConvexMu1, beta, (deg(48.0), deg(59.9))).unwrap();
        assert!(residual_full_raw(a, beta, FamilyId::ConvexMu1).abs() < 1e-12);
        let e = solve_alpha(FamilyId::ConvexMu1, beta, (deg(58.0), deg(59.9))).unwrap_err();
        assert!(matches!(e, KiteError::NoBracket { .. }));
    }

    #[test]
    fn unique_admissible_root_across_domains() {
        for f in FamilyId::ALL {
            let (s, e) = family_domain(f).unwrap();
            let (b0, b1) = (s.angles.beta(), e.angles.beta());
            for i in 1..200 {
                let beta = b0 + (b1 - b0) * i as f64 / 200.0;
                let c = alpha_candidates(f, beta).unwrap();
                assert_eq!(c.len(), 1, "{f} at beta = {} deg: {c:?}", beta.to_degrees());
            }
        }
    }
}
