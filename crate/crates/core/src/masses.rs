//! Mass coefficients and the nondimensional masses of a kite configuration.
//!
//! Body `A` carries `mu1`, body `B` carries `mu2` and each of `E`, `E'`
//! carries `mu`, with `mu1 + mu2 + 2 mu = 1`.

use serde::{Deserialize, Serialize};

use crate::angles::{AnglePair, ConfigKind};
use crate::error::{KiteError, Result};

/// Relative size below which the mass denominator counts as zero.
pub const SINGULAR_TOLERANCE: f64 = 1e-12;

/// Slack allowed on the `[0, 1]` mass bounds.
pub const MASS_BOUND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    pub a0: f64,
    pub a1: f64,
    pub b0: f64,
    pub b1: f64,
}

impl Coefficients {
    /// `a0 b1 + a1 b0 - a1 b1`.
    pub fn denominator(&self) -> f64 {
        self.a0 * self.b1 + self.a1 * self.b0 - self.a1 * self.b1
    }

    fn denominator_scale(&self) -> f64 {
        1.0 + (self.a0 * self.b1).abs() + (self.a1 * self.b0).abs() + (self.a1 * self.b1).abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassTriple {
    pub mu1: f64,
    pub mu2: f64,
    pub mu: f64,
}

impl MassTriple {
    /// Completes the triple from the two axis masses.
    pub fn from_axis(mu1: f64, mu2: f64) -> Self {
        MassTriple {
            mu1,
            mu2,
            mu: (1.0 - mu1 - mu2) / 2.0,
        }
    }

    /// Masses in body order A, B, E, E'.
    pub fn bodies(&self) -> [f64; 4] {
        [self.mu1, self.mu2, self.mu, self.mu]
    }

    pub fn is_admissible(&self) -> bool {
        let s = self.mu1 + self.mu2;
        let inside = |v: f64| (-MASS_BOUND_SLACK..=1.0 + MASS_BOUND_SLACK).contains(&v);
        inside(self.mu1) && inside(self.mu2) && inside(s)
    }
}

pub(crate) fn coefficients_raw(alpha: f64, beta: f64, kind: ConfigKind) -> Result<Coefficients> {
    let (ta, tb) = (alpha.tan(), beta.tan());
    let (ca3, cb3) = (alpha.cos().powi(3), beta.cos().powi(3));
    const EIGHTH: f64 = 0.125;
    match kind {
        ConfigKind::Convex => {
            let s = ta + tb;
            if s.abs() < 1e-12 {
                return Err(KiteError::DegenerateGeometry(
                    "tan(alpha) + tan(beta) vanishes".into(),
                ));
            }
            let inv = 1.0 / (s * s);
            Ok(Coefficients {
                a0: (ca3 - EIGHTH) * ta,
                a1: inv + (EIGHTH - ca3 - cb3) * tb - EIGHTH * ta,
                b0: (cb3 - EIGHTH) * tb,
                b1: inv + (EIGHTH - ca3 - cb3) * ta - EIGHTH * tb,
            })
        }
        ConfigKind::Concave => {
            let d = ta - tb;
            if alpha <= beta || d.abs() < 1e-12 {
                return Err(KiteError::DegenerateGeometry(
                    "concave coefficients need tan(alpha) > tan(beta)".into(),
                ));
            }
            let inv = 1.0 / (d * d);
            Ok(Coefficients {
                a0: (ca3 - EIGHTH) * ta,
                a1: inv - (EIGHTH - ca3 - cb3) * tb - EIGHTH * ta,
                b0: -(cb3 - EIGHTH) * tb,
                b1: inv + (EIGHTH - ca3 - cb3) * ta + EIGHTH * tb,
            })
        }
    }
}

/// The four trigonometric coefficients of the mass solution.
pub fn coefficients(p: AnglePair, kind: ConfigKind) -> Result<Coefficients> {
    coefficients_raw(p.alpha(), p.beta(), kind)
}

/// Axis masses from the coefficients, without range checks.
pub(crate) fn raw_axis_masses(alpha: f64, beta: f64, kind: ConfigKind) -> Result<(f64, f64)> {
    let c = coefficients_raw(alpha, beta, kind)?;
    let den = c.denominator();
    if den.abs() < SINGULAR_TOLERANCE * c.denominator_scale() {
        return Err(KiteError::SingularDenominator {
            alpha_deg: alpha.to_degrees(),
            beta_deg: beta.to_degrees(),
        });
    }
    let mu1 = (c.b1 + c.a0 - c.b0) * c.b0 / den;
    let mu2 = (c.a1 + c.b0 - c.a0) * c.a0 / den;
    Ok((mu1, mu2))
}

/// Nondimensional masses of the central configuration at `p`.
///
/// Fails with [`KiteError::SingularDenominator`] at the singular points and
/// with [`KiteError::InvalidMasses`] (carrying the raw values) when the
/// masses leave the admissible range.
pub fn masses(p: AnglePair, kind: ConfigKind) -> Result<MassTriple> {
    let (mu1, mu2) = raw_axis_masses(p.alpha(), p.beta(), kind)?;
    let m = MassTriple::from_axis(mu1, mu2);
    if !m.is_admissible() {
        return Err(KiteError::InvalidMasses { mu1, mu2 });
    }
    Ok(m)
}
