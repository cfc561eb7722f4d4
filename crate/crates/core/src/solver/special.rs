use std::fmt;

use serde::{Deserialize, Serialize};

use super::roots::all_roots;
use super::{alpha_on_curve, root_options};
use crate::analysis::find_m_minimum;
use crate::angles::{deg, AnglePair, ConfigKind, CriticalLine, SingularPointId};
use crate::conditions::{residual_full_raw, FamilyId};
use crate::error::{KiteError, Result};
use crate::masses::{masses, raw_axis_masses, MassTriple};

/// Scan step along a critical line when looking for curve endpoints.
const LINE_SCAN_STEP_DEG: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpecialLabel {
    G,
    #[serde(rename = "S_convex")]
    SConvex,
    #[serde(rename = "S_concave")]
    SConcave,
    P1,
    P2,
    P3,
    P4,
    P5,
    P7,
    FourEqualCrossing,
    PalmorePoint,
    MStarPoint,
}

impl SpecialLabel {
    pub fn name(&self) -> &'static str {
        match self {
            SpecialLabel::G => "G",
            SpecialLabel::SConvex => "S_convex",
            SpecialLabel::SConcave => "S_concave",
            SpecialLabel::P1 => "P1",
            SpecialLabel::P2 => "P2",
            SpecialLabel::P3 => "P3",
            SpecialLabel::P4 => "P4",
            SpecialLabel::P5 => "P5",
            SpecialLabel::P7 => "P7",
            SpecialLabel::FourEqualCrossing => "FourEqualCrossing",
            SpecialLabel::PalmorePoint => "PalmorePoint",
            SpecialLabel::MStarPoint => "MStarPoint",
        }
    }
}

impl fmt::Display for SpecialLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "type")]
pub enum SpecialMasses {
    Defined(MassTriple),
    /// Only a relation between the masses is fixed.
    Degenerate {
        relation: String,
    },
}

impl SpecialMasses {
    pub fn triple(&self) -> Option<&MassTriple> {
        match self {
            SpecialMasses::Defined(m) => Some(m),
            SpecialMasses::Degenerate { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecialPoint {
    pub label: SpecialLabel,
    pub kind: ConfigKind,
    pub angles: AnglePair,
    pub masses: SpecialMasses,
}

/// Roots of the family condition along a parametrized line `t -> (α, β)`.
fn roots_along<P>(f: FamilyId, line: P, t_lo: f64, t_hi: f64) -> Result<Vec<AnglePair>>
where
    P: Fn(f64) -> (f64, f64),
{
    let g = |t: f64| {
        let (a, b) = line(t);
        residual_full_raw(a, b, f)
    };
    all_roots(g, t_lo, t_hi, deg(LINE_SCAN_STEP_DEG), &root_options())?
        .into_iter()
        .map(|t| {
            let (a, b) = line(t);
            AnglePair::new(a, b)
        })
        .collect()
}

fn single(f: FamilyId, what: &str, mut roots: Vec<AnglePair>) -> Result<AnglePair> {
    match roots.len() {
        1 => Ok(roots.remove(0)),
        n => Err(KiteError::NoSolution(format!(
            "{f}: expected one {what} root, found {n}"
        ))),
    }
}

fn defined(label: SpecialLabel, kind: ConfigKind, p: AnglePair) -> Result<SpecialPoint> {
    Ok(SpecialPoint {
        label,
        kind,
        angles: p,
        masses: SpecialMasses::Defined(masses(p, kind)?),
    })
}

/// Where the family curve meets the α = β line (the square).
fn generating_point(f: FamilyId) -> Result<SpecialPoint> {
    let roots = roots_along(f, |t| (t, t), deg(30.5), deg(59.5))?;
    defined(
        SpecialLabel::G,
        ConfigKind::Convex,
        single(f, "alpha=beta", roots)?,
    )
}

/// Endpoint on the α = 60° line.
fn on_alpha_60(
    f: FamilyId,
    label: SpecialLabel,
    beta_lo: f64,
    beta_hi: f64,
) -> Result<SpecialPoint> {
    let roots = roots_along(f, |t| (deg(60.0), t), deg(beta_lo), deg(beta_hi))?;
    defined(label, f.kind(), single(f, "alpha=60", roots)?)
}

/// Endpoint at fixed β.
fn at_beta(
    f: FamilyId,
    label: SpecialLabel,
    beta: f64,
    alpha_lo: f64,
    alpha_hi: f64,
) -> Result<SpecialPoint> {
    let roots = roots_along(f, |t| (t, deg(beta)), deg(alpha_lo), deg(alpha_hi))?;
    defined(label, f.kind(), single(f, "fixed-beta", roots)?)
}

fn p1() -> Result<SpecialPoint> {
    on_alpha_60(FamilyId::ConvexMu1, SpecialLabel::P1, 15.0, 59.5)
}

fn p2() -> Result<SpecialPoint> {
    let f = FamilyId::ConvexMu2;
    let roots = roots_along(f, |t| (deg(90.0) - 2.0 * t, t), deg(15.0), deg(29.5))?;
    defined(
        SpecialLabel::P2,
        f.kind(),
        single(f, "alpha+2beta=90", roots)?,
    )
}

fn p3() -> Result<SpecialPoint> {
    at_beta(FamilyId::ConcaveMu2, SpecialLabel::P3, 60.0, 60.0, 75.0)
}

fn p4() -> Result<SpecialPoint> {
    at_beta(FamilyId::ConcaveMu2, SpecialLabel::P4, 0.0, 45.0, 60.0)
}

fn p5() -> Result<SpecialPoint> {
    // stop short of the singular point, where the curve meets α = 60° again
    on_alpha_60(FamilyId::ConcaveMu1, SpecialLabel::P5, 0.0, 29.5)
}

fn p7() -> Result<SpecialPoint> {
    let f = FamilyId::ConcaveMu1;
    let roots = roots_along(f, |t| (deg(45.0) + 0.5 * t, t), deg(30.5), deg(60.0))?;
    defined(
        SpecialLabel::P7,
        f.kind(),
        single(f, "2alpha-beta=90", roots)?,
    )
}

/// The two ends of the family curve, ordered by β.
pub fn family_domain(f: FamilyId) -> Result<(SpecialPoint, SpecialPoint)> {
    match f {
        FamilyId::ConvexMu1 => Ok((generating_point(f)?, p1()?)),
        FamilyId::ConvexMu2 => Ok((p2()?, generating_point(f)?)),
        FamilyId::ConcaveMu1 => Ok((p5()?, p7()?)),
        FamilyId::ConcaveMu2 => Ok((p4()?, p3()?)),
    }
}

fn line_coefficients(line: CriticalLine) -> (f64, f64, f64) {
    // p α + q β = c, angles in radians
    match line {
        CriticalLine::ConvexAlpha60 | CriticalLine::ConcaveAlpha60 => (1.0, 0.0, deg(60.0)),
        CriticalLine::AlphaEqualsBeta => (1.0, -1.0, 0.0),
        CriticalLine::AlphaPlusTwoBeta90 => (1.0, 2.0, deg(90.0)),
        CriticalLine::Beta0 => (0.0, 1.0, 0.0),
        CriticalLine::TwoAlphaMinusBeta90 => (2.0, -1.0, deg(90.0)),
        CriticalLine::Beta60 => (0.0, 1.0, deg(60.0)),
    }
}

fn intersect(l1: CriticalLine, l2: CriticalLine) -> Result<AnglePair> {
    let (p1, q1, c1) = line_coefficients(l1);
    let (p2, q2, c2) = line_coefficients(l2);
    let det = p1 * q2 - p2 * q1;
    AnglePair::new((c1 * q2 - c2 * q1) / det, (p1 * c2 - p2 * c1) / det)
}

/// Masses approached along the family curve at the concave singular point.
///
/// The mass formula is 0/0 there; the symmetric average of the masses at
/// β = 30° ± h has an O(h²) error, removed by one Richardson step.
pub fn singular_limit_masses(f: FamilyId) -> Result<MassTriple> {
    if f.kind() != ConfigKind::Concave {
        return Err(KiteError::OutOfDomain(format!(
            "{f} does not pass the concave singular point"
        )));
    }
    let sym = |h: f64| -> Result<(f64, f64)> {
        let mut acc = (0.0, 0.0);
        for beta in [deg(30.0) - h, deg(30.0) + h] {
            let alpha = alpha_on_curve(f, beta)?;
            let (m1, m2) = raw_axis_masses(alpha, beta, f.kind())?;
            acc = (acc.0 + 0.5 * m1, acc.1 + 0.5 * m2);
        }
        Ok(acc)
    };
    let h = deg(0.02);
    let (c1, c2) = sym(h)?;
    let (f1, f2) = sym(0.5 * h)?;
    Ok(MassTriple::from_axis(
        (4.0 * f1 - c1) / 3.0,
        (4.0 * f2 - c2) / 3.0,
    ))
}

/// Where the concave μ = μ1 and μ = μ2 curves cross away from the
/// singular point.
fn four_equal_crossing() -> Result<SpecialPoint> {
    let along = |beta: f64| match alpha_on_curve(FamilyId::ConcaveMu2, beta) {
        Ok(a) => residual_full_raw(a, beta, FamilyId::ConcaveMu1),
        Err(_) => f64::NAN,
    };
    let betas = all_roots(along, deg(30.5), deg(59.5), deg(0.25), &root_options())?;
    let beta = match betas.as_slice() {
        [b] => *b,
        _ => {
            return Err(KiteError::NoSolution(format!(
                "expected one crossing of the concave curves, found {}",
                betas.len()
            )))
        }
    };
    let p = AnglePair::new(alpha_on_curve(FamilyId::ConcaveMu2, beta)?, beta)?;
    defined(SpecialLabel::FourEqualCrossing, ConfigKind::Concave, p)
}

/// All labelled points, each recomputed from its defining equations.
pub fn special_points() -> Result<Vec<SpecialPoint>> {
    let s_convex = intersect(
        CriticalLine::AlphaEqualsBeta,
        CriticalLine::AlphaPlusTwoBeta90,
    )?;
    let s_concave = intersect(
        CriticalLine::ConcaveAlpha60,
        CriticalLine::TwoAlphaMinusBeta90,
    )?;
    debug_assert!({
        let (a, b) = SingularPointId::ConcaveS.location();
        (a - s_concave.alpha()).abs() < 1e-15 && (b - s_concave.beta()).abs() < 1e-15
    });

    let palmore = SpecialPoint {
        label: SpecialLabel::PalmorePoint,
        kind: ConfigKind::Concave,
        angles: s_concave,
        masses: SpecialMasses::Defined(singular_limit_masses(FamilyId::ConcaveMu1)?),
    };
    let m_star = find_m_minimum()?;

    Ok(vec![
        generating_point(FamilyId::ConvexMu1)?,
        SpecialPoint {
            label: SpecialLabel::SConvex,
            kind: ConfigKind::Convex,
            angles: s_convex,
            masses: SpecialMasses::Degenerate {
                relation: "mu1+mu2=1".into(),
            },
        },
        SpecialPoint {
            label: SpecialLabel::SConcave,
            kind: ConfigKind::Concave,
            angles: s_concave,
            masses: SpecialMasses::Degenerate {
                relation: "3mu1+mu2=1".into(),
            },
        },
        p1()?,
        p2()?,
        p3()?,
        p4()?,
        p5()?,
        p7()?,
        four_equal_crossing()?,
        palmore,
        SpecialPoint {
            label: SpecialLabel::MStarPoint,
            kind: ConfigKind::Concave,
            angles: m_star.angles,
            masses: SpecialMasses::Defined(m_star.masses),
        },
    ])
}
