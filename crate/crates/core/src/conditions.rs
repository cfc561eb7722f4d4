//! Three-equal-mass conditions.
//!
//! `mu = mu1` holds where `a0 - a1 - 3 b0 = 0`, `mu = mu2` where
//! `b0 - b1 - 3 a0 = 0`. The trigonometric forms cleared of the mass
//! denominators are what the solver drives to zero.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::angles::{AnglePair, ConfigKind, CriticalLine, LINE_TOLERANCE};
use crate::error::{KiteError, Result};
use crate::masses::{coefficients_raw, MassTriple};

/// One of the four solution families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyId {
    /// Convex, `A` matches `E`, `E'`.
    ConvexMu1,
    /// Convex, `B` matches `E`, `E'`.
    ConvexMu2,
    /// Concave, `A` matches `E`, `E'`.
    ConcaveMu1,
    /// Concave, `B` matches `E`, `E'`.
    ConcaveMu2,
}

impl FamilyId {
    pub const ALL: [FamilyId; 4] = [
        FamilyId::ConvexMu1,
        FamilyId::ConvexMu2,
        FamilyId::ConcaveMu1,
        FamilyId::ConcaveMu2,
    ];

    pub fn kind(&self) -> ConfigKind {
        match self {
            FamilyId::ConvexMu1 | FamilyId::ConvexMu2 => ConfigKind::Convex,
            FamilyId::ConcaveMu1 | FamilyId::ConcaveMu2 => ConfigKind::Concave,
        }
    }

    /// True when the axis body `A` (mass `mu1`) is the third equal mass.
    pub fn matches_mu1(&self) -> bool {
        matches!(self, FamilyId::ConvexMu1 | FamilyId::ConcaveMu1)
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilyId::ConvexMu1 => "convex-mu1",
            FamilyId::ConvexMu2 => "convex-mu2",
            FamilyId::ConcaveMu1 => "concave-mu1",
            FamilyId::ConcaveMu2 => "concave-mu2",
        }
    }

    /// Deviation of the masses from the family's equality condition.
    pub fn mass_mismatch(&self, m: &MassTriple) -> f64 {
        if self.matches_mu1() {
            m.mu - m.mu1
        } else {
            m.mu - m.mu2
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = KiteError;

    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| KiteError::InvalidArguments(format!("unknown family '{s}'")))
    }
}

pub(crate) fn residual_reduced_raw(alpha: f64, beta: f64, f: FamilyId) -> Result<f64> {
    let c = coefficients_raw(alpha, beta, f.kind())?;
    Ok(if f.matches_mu1() {
        c.a0 - c.a1 - 3.0 * c.b0
    } else {
        c.b0 - c.b1 - 3.0 * c.a0
    })
}

/// Reduced condition built from the mass coefficients.
pub fn residual_reduced(p: AnglePair, f: FamilyId) -> Result<f64> {
    residual_reduced_raw(p.alpha(), p.beta(), f)
}

/// Trigonometric condition evaluated directly from the angles.
///
/// Returns NaN where the concave forms are undefined (`alpha <= beta`);
/// the public wrapper turns that into an error.
pub(crate) fn residual_full_raw(alpha: f64, beta: f64, f: FamilyId) -> f64 {
    let (ta, tb) = (alpha.tan(), beta.tan());
    let (ca3, cb3) = (alpha.cos().powi(3), beta.cos().powi(3));
    match f {
        FamilyId::ConvexMu1 => tb * (ca3 - 2.0 * cb3 + 0.25) + ta * ca3 - 1.0 / (ta + tb).powi(2),
        FamilyId::ConcaveMu1 => {
            if alpha <= beta {
                return f64::NAN;
            }
            -tb * (ca3 - 2.0 * cb3 + 0.25) + ta * ca3 - 1.0 / (ta - tb).powi(2)
        }
        FamilyId::ConvexMu2 => ta * (cb3 - 2.0 * ca3 + 0.25) + tb * cb3 - 1.0 / (ta + tb).powi(2),
        FamilyId::ConcaveMu2 => {
            if alpha <= beta {
                return f64::NAN;
            }
            ta * (cb3 - 2.0 * ca3 + 0.25) - tb * cb3 - 1.0 / (ta - tb).powi(2)
        }
    }
}

/// Left-hand side of the family's trigonometric equal-mass condition.
pub fn residual_full(p: AnglePair, f: FamilyId) -> Result<f64> {
    let (ta, tb) = (p.alpha().tan(), p.beta().tan());
    let gap = match f.kind() {
        ConfigKind::Convex => ta + tb,
        ConfigKind::Concave => ta - tb,
    };
    if p.alpha() <= p.beta() && f.kind() == ConfigKind::Concave || gap.abs() < 1e-12 {
        return Err(KiteError::DegenerateGeometry(format!(
            "{f} condition undefined at {p}"
        )));
    }
    Ok(residual_full_raw(p.alpha(), p.beta(), f))
}

/// Points where a simplification term of the mass conditions vanishes and
/// the equality holds only because one of the compared masses is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalCase {
    pub line: CriticalLine,
    pub mu1: f64,
    pub mu2: f64,
}

impl ExceptionalCase {
    /// The degenerate equality this line satisfies.
    pub fn relation(&self) -> &'static str {
        match self.line {
            CriticalLine::TwoAlphaMinusBeta90 => "3mu1+mu2=1 with mu=mu1=0",
            _ => "3mu2+mu1=1 with mu=mu2=0",
        }
    }
}

/// Detects the exceptional lines: `alpha + 2 beta = 90°` (convex) and
/// `2 alpha - beta = 90°` (concave).
pub fn exceptional_line_check(p: AnglePair, kind: ConfigKind) -> Option<ExceptionalCase> {
    let (line, mu1, mu2) = match kind {
        ConfigKind::Convex => (CriticalLine::AlphaPlusTwoBeta90, 1.0, 0.0),
        ConfigKind::Concave => (CriticalLine::TwoAlphaMinusBeta90, 0.0, 1.0),
    };
    (line.signed_distance(p.alpha(), p.beta()).abs() <= LINE_TOLERANCE).then_some(ExceptionalCase {
        line,
        mu1,
        mu2,
    })
}
