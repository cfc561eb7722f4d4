//! Newtonian check of the central-configuration condition.
//!
//! Independent of the mass formulas: given positions and masses it computes
//! the gravitational accelerations (G = 1) and tests whether every body
//! satisfies `a_i = -lambda r_i` about the barycenter with one common
//! `lambda > 0`.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{KiteError, Result};
use crate::masses::MassTriple;

/// Masses below this are treated as test particles.
pub const ZERO_MASS: f64 = 1e-13;

/// Minimum pairwise distance before a configuration counts as a collision.
pub const COLLISION_DISTANCE: f64 = 1e-12;

/// Relative distance (to the configuration size) under which a body is
/// considered to sit at the barycenter.
const BARYCENTER_RADIUS: f64 = 1e-10;

/// Relative acceleration under which a barycentric body is at rest.
const NEGLIGIBLE_ACCELERATION: f64 = 1e-8;

pub const BODY_LABELS: [&str; 4] = ["A", "B", "E", "E'"];

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        Vec2::new(self * v.x, self * v.y)
    }
}

/// Four bodies in the order A, B, E, E'.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KiteConfiguration {
    pub positions: [Vec2; 4],
    pub masses: Option<[f64; 4]>,
}

impl KiteConfiguration {
    pub fn new(positions: [Vec2; 4]) -> Self {
        KiteConfiguration {
            positions,
            masses: None,
        }
    }

    pub fn with_masses(mut self, m: &MassTriple) -> Self {
        self.masses = Some(m.bodies());
        self
    }

    pub fn with_body_masses(mut self, m: [f64; 4]) -> Self {
        self.masses = Some(m);
        self
    }

    pub fn translated(&self, shift: Vec2) -> Self {
        KiteConfiguration {
            positions: self.positions.map(|p| p + shift),
            masses: self.masses,
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        KiteConfiguration {
            positions: self.positions.map(|p| s * p),
            masses: self.masses,
        }
    }

    fn masses_or_err(&self) -> Result<[f64; 4]> {
        self.masses.ok_or(KiteError::MissingMasses)
    }

    pub fn barycenter(&self) -> Result<Vec2> {
        let m = self.masses_or_err()?;
        let total: f64 = m.iter().sum();
        let weighted = self
            .positions
            .iter()
            .zip(m)
            .fold(Vec2::default(), |acc, (&p, mi)| acc + mi * p);
        Ok((1.0 / total) * weighted)
    }
}

/// Gravitational acceleration of every body.
pub fn accelerations(c: &KiteConfiguration) -> Result<[Vec2; 4]> {
    let m = c.masses_or_err()?;
    let mut acc = [Vec2::default(); 4];
    for (i, a) in acc.iter_mut().enumerate() {
        for (j, (&pj, &mj)) in c.positions.iter().zip(m.iter()).enumerate() {
            if i == j {
                continue;
            }
            let d = pj - c.positions[i];
            let r = d.norm();
            if r < COLLISION_DISTANCE {
                return Err(KiteError::CollisionSingularity(i.min(j), i.max(j)));
            }
            *a = *a + (mj / (r * r * r)) * d;
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityReport {
    /// Common factor in `a_i = -lambda r_i`.
    pub lambda: f64,
    /// Largest `|a_i + lambda r_i| / (|lambda| |r_i|)` over bodies away
    /// from the barycenter.
    pub max_relative_residual: f64,
    /// Per-body estimates; `None` for a body resting at the barycenter.
    pub per_body_lambda: [Option<f64>; 4],
    /// Barycenter of the input positions, subtracted before testing.
    pub barycenter_shift: Vec2,
}

impl CentralityReport {
    pub fn is_central(&self, tol: f64) -> bool {
        self.lambda > 0.0 && self.max_relative_residual < tol
    }
}

/// Tests the central-configuration condition.
pub fn verify_central(c: &KiteConfiguration) -> Result<CentralityReport> {
    let m = c.masses_or_err()?;
    let acc = accelerations(c)?;
    let shift = c.barycenter()?;
    let r = c.positions.map(|p| p - shift);
    let size = r.iter().map(|v| v.norm()).fold(0.0, f64::max);

    let mut per_body = [None; 4];
    for i in 0..4 {
        if r[i].norm() > BARYCENTER_RADIUS * size {
            per_body[i] = Some(-acc[i].dot(r[i]) / r[i].dot(r[i]));
        }
    }

    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..4 {
        if let (Some(l), true) = (per_body[i], m[i] >= ZERO_MASS) {
            num += m[i] * l;
            den += m[i];
        }
    }
    let lambda = if den > 0.0 {
        num / den
    } else {
        // only barycentric bodies carry mass; the test particles fix lambda
        let ls: Vec<f64> = per_body.iter().flatten().copied().collect();
        ls.iter().sum::<f64>() / ls.len().max(1) as f64
    };

    let mut worst: f64 = 0.0;
    for i in 0..4 {
        match per_body[i] {
            Some(_) => {
                let dev = (acc[i] + lambda * r[i]).norm();
                let scale = (lambda.abs() * r[i].norm()).max(1e-300);
                worst = worst.max(dev / scale);
            }
            None => {
                if acc[i].norm() > NEGLIGIBLE_ACCELERATION * lambda.abs() * size {
                    return Err(KiteError::DegenerateBody(i));
                }
            }
        }
    }

    Ok(CentralityReport {
        lambda,
        max_relative_residual: worst,
        per_body_lambda: per_body,
        barycenter_shift: shift,
    })
}
