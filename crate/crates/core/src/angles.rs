//! Angle coordinates of kite configurations, the admissible regions of the
//! (β, α) plane, body placement and the (k, l) chart.
//!
//! Angles are stored in radians. Degrees only appear at I/O boundaries.
//!
//! Frame: the equal-mass pair sits at `E = (1, 0)` and `E' = (-1, 0)`, the
//! axis bodies at `A = (0, tan α)` and `B = (0, -tan β)` (convex) or
//! `B = (0, tan β)` (concave).

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::conditions::FamilyId;
use crate::error::{KiteError, Result};
use crate::oracle::{KiteConfiguration, Vec2};

/// Distance (radians) within which a point counts as lying on a critical line.
pub const LINE_TOLERANCE: f64 = 1e-9;

/// Largest tangent accepted when placing bodies.
pub const MAX_TANGENT: f64 = 1e12;

const DEG: f64 = std::f64::consts::PI / 180.0;

/// The two angles (α, β) that parametrize a kite configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnglePair {
    alpha: f64,
    beta: f64,
}

impl AnglePair {
    /// Builds a pair from radians; both angles must lie in `[0, π/2)`.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !v.is_finite() || !(0.0..FRAC_PI_2).contains(&v) {
                return Err(KiteError::InvalidAngle(format!(
                    "{name} = {} deg is outside [0, 90)",
                    v / DEG
                )));
            }
        }
        Ok(AnglePair { alpha, beta })
    }

    pub fn from_degrees(alpha_deg: f64, beta_deg: f64) -> Result<Self> {
        Self::new(alpha_deg * DEG, beta_deg * DEG)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn alpha_deg(&self) -> f64 {
        self.alpha / DEG
    }

    pub fn beta_deg(&self) -> f64 {
        self.beta / DEG
    }
}

impl fmt::Display for AnglePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(alpha={:.6} deg, beta={:.6} deg)",
            self.alpha_deg(),
            self.beta_deg()
        )
    }
}

pub fn deg(x: f64) -> f64 {
    x * DEG
}

pub fn to_deg(x: f64) -> f64 {
    x / DEG
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConfigKind {
    Convex,
    Concave,
}

impl ConfigKind {
    pub fn name(&self) -> &'static str {
        match self {
            ConfigKind::Convex => "convex",
            ConfigKind::Concave => "concave",
        }
    }
}

/// Boundaries of the admissible regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriticalLine {
    /// α = 60°, convex triangle (μ2 = 0).
    ConvexAlpha60,
    /// α = β.
    AlphaEqualsBeta,
    /// α + 2β = 90° (μ1 = 1, μ2 = 0).
    AlphaPlusTwoBeta90,
    /// β = 0° (μ1 = 0).
    Beta0,
    /// α = 60°, concave triangles (μ2 = 0).
    ConcaveAlpha60,
    /// 2α − β = 90° (μ1 = 0, μ2 = 1).
    TwoAlphaMinusBeta90,
    /// β = 60° (μ1 = 0).
    Beta60,
}

impl CriticalLine {
    /// Signed distance (radians) of `(alpha, beta)` from the line.
    pub fn signed_distance(&self, alpha: f64, beta: f64) -> f64 {
        const SQRT5: f64 = 2.236_067_977_499_79;
        match self {
            CriticalLine::ConvexAlpha60 | CriticalLine::ConcaveAlpha60 => alpha - 60.0 * DEG,
            CriticalLine::AlphaEqualsBeta => (alpha - beta) / std::f64::consts::SQRT_2,
            CriticalLine::AlphaPlusTwoBeta90 => (alpha + 2.0 * beta - 90.0 * DEG) / SQRT5,
            CriticalLine::Beta0 => beta,
            CriticalLine::TwoAlphaMinusBeta90 => (2.0 * alpha - beta - 90.0 * DEG) / SQRT5,
            CriticalLine::Beta60 => beta - 60.0 * DEG,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            CriticalLine::ConvexAlpha60 | CriticalLine::ConcaveAlpha60 => "alpha=60",
            CriticalLine::AlphaEqualsBeta => "alpha=beta",
            CriticalLine::AlphaPlusTwoBeta90 => "alpha+2beta=90",
            CriticalLine::Beta0 => "beta=0",
            CriticalLine::TwoAlphaMinusBeta90 => "2alpha-beta=90",
            CriticalLine::Beta60 => "beta=60",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SingularPointId {
    /// (β, α) = (30°, 30°), where μ1 + μ2 = 1.
    ConvexS,
    /// (β, α) = (30°, 60°), where 3μ1 + μ2 = 1.
    ConcaveS,
}

impl SingularPointId {
    /// Location as (alpha, beta) in radians.
    pub fn location(&self) -> (f64, f64) {
        match self {
            SingularPointId::ConvexS => (30.0 * DEG, 30.0 * DEG),
            SingularPointId::ConcaveS => (60.0 * DEG, 30.0 * DEG),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    ConvexInterior,
    ConcaveC1,
    ConcaveC2,
    OnCriticalLine(CriticalLine),
    SingularPoint(SingularPointId),
    Outside,
}

/// A triangle described by three half-planes `sign * d(line) > 0`.
struct Triangle {
    region: Region,
    sides: [(CriticalLine, f64); 3],
}

const CONVEX_TRIANGLE: Triangle = Triangle {
    region: Region::ConvexInterior,
    sides: [
        (CriticalLine::AlphaEqualsBeta, 1.0),
        (CriticalLine::ConvexAlpha60, -1.0),
        (CriticalLine::AlphaPlusTwoBeta90, 1.0),
    ],
};

const CONCAVE_C1: Triangle = Triangle {
    region: Region::ConcaveC1,
    sides: [
        (CriticalLine::Beta0, 1.0),
        (CriticalLine::ConcaveAlpha60, -1.0),
        (CriticalLine::TwoAlphaMinusBeta90, 1.0),
    ],
};

const CONCAVE_C2: Triangle = Triangle {
    region: Region::ConcaveC2,
    sides: [
        (CriticalLine::ConcaveAlpha60, 1.0),
        (CriticalLine::Beta60, -1.0),
        (CriticalLine::TwoAlphaMinusBeta90, -1.0),
    ],
};

fn triangles(kind: ConfigKind) -> &'static [Triangle] {
    match kind {
        ConfigKind::Convex => std::slice::from_ref(&CONVEX_TRIANGLE),
        ConfigKind::Concave => {
            const BOTH: [Triangle; 2] = [CONCAVE_C1, CONCAVE_C2];
            &BOTH
        }
    }
}

/// Classifies a point of the (β, α) plane for the given configuration kind.
///
/// The convex and concave charts use different definitions of β, so the
/// convex triangle and the concave C1 triangle overlap as sets of numbers;
/// the kind selects which chart is meant.
pub fn classify_region(p: AnglePair, kind: ConfigKind) -> Region {
    let singular = match kind {
        ConfigKind::Convex => SingularPointId::ConvexS,
        ConfigKind::Concave => SingularPointId::ConcaveS,
    };
    let (sa, sb) = singular.location();
    if (p.alpha - sa).hypot(p.beta - sb) <= LINE_TOLERANCE {
        return Region::SingularPoint(singular);
    }

    let mut boundary = None;
    for tri in triangles(kind) {
        let s = tri
            .sides
            .map(|(line, sign)| sign * line.signed_distance(p.alpha, p.beta));
        if s.iter().all(|&v| v > LINE_TOLERANCE) {
            return tri.region;
        }
        if boundary.is_none() && s.iter().all(|&v| v >= -LINE_TOLERANCE) {
            let on = s.iter().position(|v| v.abs() <= LINE_TOLERANCE);
            boundary = on.map(|i| Region::OnCriticalLine(tri.sides[i].0));
        }
    }
    boundary.unwrap_or(Region::Outside)
}

/// True when `p` lies in the closed admissible region of `kind`, allowing a
/// slack of `tol` radians.
pub fn is_admissible(p: AnglePair, kind: ConfigKind, tol: f64) -> bool {
    triangles(kind).iter().any(|tri| {
        tri.sides
            .iter()
            .all(|&(line, sign)| sign * line.signed_distance(p.alpha, p.beta) >= -tol)
    })
}

/// Places the four bodies in the construction frame. Masses are left unset.
pub fn reconstruct_positions(p: AnglePair, kind: ConfigKind) -> Result<KiteConfiguration> {
    let (ta, tb) = (p.alpha.tan(), p.beta.tan());
    if !(ta.abs() <= MAX_TANGENT && tb.abs() <= MAX_TANGENT) {
        return Err(KiteError::DegenerateGeometry(format!(
            "tangent overflow at {p}"
        )));
    }
    let b = match kind {
        ConfigKind::Convex => -tb,
        ConfigKind::Concave => {
            if p.alpha <= p.beta {
                return Err(KiteError::DegenerateGeometry(format!(
                    "concave configuration needs alpha > beta, got {p}"
                )));
            }
            tb
        }
    };
    Ok(KiteConfiguration::new([
        Vec2::new(0.0, ta),
        Vec2::new(0.0, b),
        Vec2::new(1.0, 0.0),
        Vec2::new(-1.0, 0.0),
    ]))
}

/// Coordinates (k, l) of the alternative chart used in the literature on
/// four-body configurations with three equal masses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KLPoint {
    pub k: f64,
    pub l: f64,
}

/// Maps angles into the (k, l) chart. The sign and ordering conventions
/// depend on which body carries the third equal mass.
pub fn to_kl(p: AnglePair, family: FamilyId) -> KLPoint {
    let (ta, tb) = (p.alpha.tan(), p.beta.tan());
    // `+ 0.0` turns -0.0 into 0.0
    match family {
        FamilyId::ConvexMu1 => KLPoint { k: ta, l: tb },
        FamilyId::ConvexMu2 => KLPoint { k: tb, l: ta },
        FamilyId::ConcaveMu1 => KLPoint {
            k: ta,
            l: -tb + 0.0,
        },
        FamilyId::ConcaveMu2 => KLPoint {
            k: -tb + 0.0,
            l: ta,
        },
    }
}

/// Inverse of [`to_kl`].
pub fn from_kl(kl: KLPoint, family: FamilyId) -> Result<AnglePair> {
    let (ta, tb) = match family {
        FamilyId::ConvexMu1 => (kl.k, kl.l),
        FamilyId::ConvexMu2 => (kl.l, kl.k),
        FamilyId::ConcaveMu1 => (kl.k, -kl.l),
        FamilyId::ConcaveMu2 => (kl.l, -kl.k),
    };
    AnglePair::new(ta.atan(), tb.atan())
}
