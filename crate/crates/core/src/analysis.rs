//! Slopes of the solution curves, their extrema, and the mass ratio
//! `M(β) = μ2/μ1` along the concave μ = μ2 curve.
//!
//! Each curve slope is `dα/dβ = N/D`, obtained by differentiating the
//! family condition implicitly. All formulas take α on the curve.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angles::{deg, AnglePair};
use crate::conditions::{residual_full_raw, FamilyId};
use crate::error::{KiteError, Result};
use crate::masses::{masses, MassTriple};
use crate::solver::roots::{find_root, scan_brackets, Bracket, RootOptions};
use crate::solver::{alpha_on_curve, family_domain};

/// Residual size accepted as "on the curve" by [`g_eval`].
pub const ON_CURVE_TOLERANCE: f64 = 1e-9;

/// Step (radians) of the centered difference giving the second derivative.
pub const SECOND_DERIVATIVE_STEP: f64 = 1e-4;

/// Domain of the mass ratio M, degrees.
pub const M_DOMAIN_DEG: (f64, f64) = (30.0, 33.093);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativeEval {
    pub value: f64,
    pub numerator: f64,
    pub denominator: f64,
}

/// Numerator and denominator of `dα/dβ` at `(alpha, beta)`, without
/// checking that the point is on the curve.
pub fn slope_terms(f: FamilyId, alpha: f64, beta: f64) -> (f64, f64) {
    let (sa, ca, ta) = (alpha.sin(), alpha.cos(), alpha.tan());
    let (sb, cb, tb) = (beta.sin(), beta.cos(), beta.tan());
    match f {
        FamilyId::ConvexMu1 => {
            let s3 = (ta + tb).powi(3);
            let n = 2.0 * cb * (3.0 * sb * sb - 1.0) + (0.25 + ca.powi(3) + 2.0 / s3) / (cb * cb);
            let d = ca * (3.0 * sa * sa - 1.0) + 3.0 * sa * ca * ca * tb - 2.0 / (s3 * ca * ca);
            (n, d)
        }
        FamilyId::ConvexMu2 => {
            let s3 = (ta + tb).powi(3);
            let n = cb * (3.0 * sb * sb - 1.0) + 3.0 * sb * cb * cb * ta - 2.0 / (s3 * cb * cb);
            let d = 2.0 * ca * (3.0 * sa * sa - 1.0) + (0.25 + cb.powi(3) + 2.0 / s3) / (ca * ca);
            (n, d)
        }
        FamilyId::ConcaveMu1 => {
            let d3 = (ta - tb).powi(3);
            let n = 2.0 * cb * (3.0 * sb * sb - 1.0) + (0.25 + ca.powi(3) + 2.0 / d3) / (cb * cb);
            let d = 3.0 * sa * ca * ca * tb + ca - 3.0 * sa * sa * ca + 2.0 / (d3 * ca * ca);
            (n, d)
        }
        FamilyId::ConcaveMu2 => {
            let d3 = (ta - tb).powi(3);
            let n = 3.0 * sb * cb * (cb * ta - sb) + cb + 2.0 / (d3 * cb * cb);
            let d = 2.0 * ca * (3.0 * sa * sa - 1.0) + (0.25 + cb.powi(3) + 2.0 / d3) / (ca * ca);
            (n, d)
        }
    }
}

/// Slope `dα/dβ` of the family curve at a point on it.
pub fn g_eval(f: FamilyId, p: AnglePair) -> Result<DerivativeEval> {
    let r = residual_full_raw(p.alpha(), p.beta(), f);
    if r.is_nan() || r.abs() > ON_CURVE_TOLERANCE {
        return Err(KiteError::OutOfDomain(format!(
            "{p} is not on the {f} curve (residual {r:e})"
        )));
    }
    let (numerator, denominator) = slope_terms(f, p.alpha(), p.beta());
    if denominator.abs() < 1e-12 {
        return Err(KiteError::ZeroDenominator(denominator));
    }
    Ok(DerivativeEval {
        value: numerator / denominator,
        numerator,
        denominator,
    })
}

fn slope_at(f: FamilyId, beta: f64) -> Result<f64> {
    let alpha = alpha_on_curve(f, beta)?;
    Ok(g_eval(f, AnglePair::new(alpha, beta)?)?.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtremumKind {
    Minimum,
    Maximum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveExtremum {
    pub angles: AnglePair,
    pub kind: ExtremumKind,
    /// Second derivative `d²α/dβ²` at the extremum.
    pub curvature: f64,
}

/// Interior extremum of α(β) on the noninjective families.
pub fn find_curve_extremum(f: FamilyId) -> Result<CurveExtremum> {
    if matches!(f, FamilyId::ConvexMu1 | FamilyId::ConcaveMu2) {
        return Err(KiteError::NoExtremum(f.to_string()));
    }
    let (start, end) = family_domain(f)?;
    let numerator = |beta: f64| match alpha_on_curve(f, beta) {
        Ok(a) => slope_terms(f, a, beta).0,
        Err(_) => f64::NAN,
    };
    let (lo, hi) = (start.angles.beta() + deg(0.1), end.angles.beta() - deg(0.1));
    let brackets = scan_brackets(numerator, lo, hi, deg(0.5));
    let beta = match brackets.as_slice() {
        [Bracket::Exact(b)] => *b,
        [Bracket::Interval(a, b)] => find_root(numerator, *a, *b, &RootOptions::default())?,
        _ => {
            return Err(KiteError::NoExtremum(format!(
                "{f}: {} slope sign changes",
                brackets.len()
            )))
        }
    };
    let alpha = alpha_on_curve(f, beta)?;
    let h = SECOND_DERIVATIVE_STEP;
    let curvature = (slope_at(f, beta + h)? - slope_at(f, beta - h)?) / (2.0 * h);
    let kind = if curvature > 0.0 {
        ExtremumKind::Minimum
    } else {
        ExtremumKind::Maximum
    };
    Ok(CurveExtremum {
        angles: AnglePair::new(alpha, beta)?,
        kind,
        curvature,
    })
}

fn check_m_domain(beta: f64) -> Result<()> {
    let (lo, hi) = (deg(M_DOMAIN_DEG.0), deg(M_DOMAIN_DEG.1));
    if beta < lo - 1e-12 || beta > hi + 1e-12 {
        return Err(KiteError::OutOfDomain(format!(
            "M is defined for beta in [{}, {}] deg, got {}",
            M_DOMAIN_DEG.0,
            M_DOMAIN_DEG.1,
            beta.to_degrees()
        )));
    }
    Ok(())
}

/// Numerator and denominator of the closed form of M.
fn m_parts(alpha: f64, beta: f64) -> (f64, f64) {
    let (ta, tb) = (alpha.tan(), beta.tan());
    let (ca3, cb3) = (alpha.cos().powi(3), beta.cos().powi(3));
    let num = ca3 * (3.0 * ta - tb) - cb3 * (ta - tb) - 0.25 * ta;
    let den = -2.0 * cb3 * tb + 0.25 * tb;
    (num, den)
}

/// `M(β) = μ2/μ1` on the concave μ = μ2 curve, from its closed form.
pub fn mass_ratio_m(beta: f64) -> Result<f64> {
    check_m_domain(beta)?;
    let alpha = alpha_on_curve(FamilyId::ConcaveMu2, beta)?;
    let (num, den) = m_parts(alpha, beta);
    Ok(num / den)
}

/// `dM/dβ` at a point of the concave μ = μ2 curve, with `dα/dβ` supplied
/// by the curve slope.
pub fn m_derivative_at(alpha: f64, beta: f64) -> f64 {
    let (sa, ca, ta) = (alpha.sin(), alpha.cos(), alpha.tan());
    let (sb, cb, tb) = (beta.sin(), beta.cos(), beta.tan());
    let (n4, d4) = slope_terms(FamilyId::ConcaveMu2, alpha, beta);
    let slope = n4 / d4;
    let cb3 = cb.powi(3);
    // d/dβ of the M numerator
    let n51 = slope * (3.0 * ca - 3.0 * sa * ca * ca * (3.0 * ta - tb) - (cb3 + 0.25) / (ca * ca))
        + 3.0 * sb * cb * cb * (ta - tb)
        - ca.powi(3) / (cb * cb)
        + cb;
    let (n53, n52) = m_parts(alpha, beta);
    let n54 = 2.0 * cb * (3.0 * sb * sb - 1.0) + 0.25 / (cb * cb);
    let d5 = tb * tb * (4.0 * cb3 * cb3 - cb3 + 1.0 / 16.0);
    (n51 * n52 - n53 * n54) / d5
}

pub fn m_derivative(beta: f64) -> Result<f64> {
    check_m_domain(beta)?;
    let alpha = alpha_on_curve(FamilyId::ConcaveMu2, beta)?;
    Ok(m_derivative_at(alpha, beta))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassRatioMinimum {
    pub angles: AnglePair,
    pub masses: MassTriple,
    /// `μ1/μ2` at the minimum of M.
    pub inverse_ratio: f64,
    pub derivative: f64,
}

/// Minimum of M, located as the root of `dM/dβ`.
pub fn find_m_minimum() -> Result<MassRatioMinimum> {
    let f = FamilyId::ConcaveMu2;
    let d = |beta: f64| match alpha_on_curve(f, beta) {
        Ok(a) => m_derivative_at(a, beta),
        Err(_) => f64::NAN,
    };
    let beta = find_root(
        d,
        deg(M_DOMAIN_DEG.0),
        deg(M_DOMAIN_DEG.1),
        &RootOptions::default(),
    )?;
    let alpha = alpha_on_curve(f, beta)?;
    let p = AnglePair::new(alpha, beta)?;
    let r = residual_full_raw(alpha, beta, f);
    if r.abs() > 1e-10 {
        return Err(KiteError::ConvergenceFailure {
            iterations: 0,
            last_x: beta,
        });
    }
    let m = masses(p, f.kind())?;
    Ok(MassRatioMinimum {
        angles: p,
        masses: m,
        inverse_ratio: m.mu1 / m.mu2,
        derivative: d(beta),
    })
}

/// Radical inverse of `index` in `base`, the Halton sequence component.
pub fn halton(mut index: usize, base: usize) -> f64 {
    let (mut f, mut r) = (1.0, 0.0);
    while index > 0 {
        f /= base as f64;
        r += f * (index % base) as f64;
        index /= base;
    }
    r
}

/// Outcome of a sampled sign claim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignClaim {
    pub name: String,
    pub samples: usize,
    pub holds: bool,
    /// First sample that violates the claim.
    pub witness: Option<(f64, f64)>,
}

impl SignClaim {
    fn positive(name: &str, pts: &[(f64, f64)], value: impl Fn(f64, f64) -> f64 + Sync) -> Self {
        let witness = pts
            .par_iter()
            .find_first(|&&(a, b)| {
                let v = value(a, b);
                v.is_nan() || v <= 0.0
            })
            .map(|&(a, b)| (a.to_degrees(), b.to_degrees()));
        SignClaim {
            name: name.into(),
            samples: pts.len(),
            holds: witness.is_none(),
            witness,
        }
    }
}

/// `n` curve points with β drawn from the base-2 Halton sequence over the
/// open family domain, sorted by β. Points are (alpha, beta) in radians.
pub fn curve_samples(f: FamilyId, n: usize) -> Result<Vec<(f64, f64)>> {
    let (start, end) = family_domain(f)?;
    let (b0, b1) = (start.angles.beta(), end.angles.beta());
    let mut pts = (1..=n)
        .into_par_iter()
        .map(|i| {
            let beta = b0 + (b1 - b0) * halton(i, 2);
            Ok((alpha_on_curve(f, beta)?, beta))
        })
        .collect::<Result<Vec<_>>>()?;
    pts.sort_by(|p, q| p.1.total_cmp(&q.1));
    Ok(pts)
}

/// `n` points of the (α, β) box, degrees in, radians out, from the 2-D
/// Halton sequence.
pub fn box_samples(alpha_deg: (f64, f64), beta_deg: (f64, f64), n: usize) -> Vec<(f64, f64)> {
    (1..=n)
        .map(|i| {
            let a = alpha_deg.0 + (alpha_deg.1 - alpha_deg.0) * halton(i, 2);
            let b = beta_deg.0 + (beta_deg.1 - beta_deg.0) * halton(i, 3);
            (deg(a), deg(b))
        })
        .collect()
}

/// Checks the sign structure of the slope numerators and denominators
/// that decides monotonicity of each family, on `n` deterministic samples
/// per claim.
pub fn verify_sign_claims(n: usize) -> Result<Vec<SignClaim>> {
    let num = |f: FamilyId| move |a: f64, b: f64| slope_terms(f, a, b).0;
    let den = |f: FamilyId| move |a: f64, b: f64| slope_terms(f, a, b).1;
    let mut out = Vec::new();

    let c1 = curve_samples(FamilyId::ConvexMu1, n)?;
    let box1 = box_samples((45.0, 60.0), (45.0, 53.0), n);
    out.push(SignClaim::positive(
        "N1 > 0 on convex-mu1 curve",
        &c1,
        num(FamilyId::ConvexMu1),
    ));
    out.push(SignClaim::positive(
        "D1 > 0 on convex-mu1 curve",
        &c1,
        den(FamilyId::ConvexMu1),
    ));
    out.push(SignClaim::positive(
        "N1 > 0 on [45,60]x[45,53]",
        &box1,
        num(FamilyId::ConvexMu1),
    ));
    out.push(SignClaim::positive(
        "D1 > 0 on [45,60]x[45,53]",
        &box1,
        den(FamilyId::ConvexMu1),
    ));

    let c2 = curve_samples(FamilyId::ConvexMu2, n)?;
    out.push(SignClaim::positive(
        "D2 > 0 on convex-mu2 curve",
        &c2,
        den(FamilyId::ConvexMu2),
    ));
    let n2: Vec<f64> = c2
        .iter()
        .map(|&(a, b)| slope_terms(FamilyId::ConvexMu2, a, b).0)
        .collect();
    let changes = n2
        .windows(2)
        .filter(|w| w[0].signum() != w[1].signum())
        .count();
    out.push(SignClaim {
        name: format!("N2 changes sign once on convex-mu2 curve (found {changes})"),
        samples: c2.len(),
        holds: changes == 1,
        witness: None,
    });

    let c3 = curve_samples(FamilyId::ConcaveMu1, n)?;
    let box3 = box_samples((60.0, 70.0), (30.0, 49.0), n);
    out.push(SignClaim::positive(
        "D3 > 0 on concave-mu1 curve",
        &c3,
        den(FamilyId::ConcaveMu1),
    ));
    out.push(SignClaim::positive(
        "N3 > 0 on [60,70]x[30,49]",
        &box3,
        num(FamilyId::ConcaveMu1),
    ));

    let c4 = curve_samples(FamilyId::ConcaveMu2, n)?;
    out.push(SignClaim::positive(
        "N4 > 0 on concave-mu2 curve",
        &c4,
        num(FamilyId::ConcaveMu2),
    ));
    out.push(SignClaim::positive(
        "D4 > 0 on concave-mu2 curve",
        &c4,
        den(FamilyId::ConcaveMu2),
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn on_curve(f: FamilyId, beta_deg: f64) -> AnglePair {
        let b = deg(beta_deg);
        AnglePair::new(alpha_on_curve(f, b).unwrap(), b).unwrap()
    }

    /// dα/dβ = -F_β / F_α by centered differences of the residual.
    fn implicit_slope(f: FamilyId, p: AnglePair) -> f64 {
        let h = 1e-6;
        let (a, b) = (p.alpha(), p.beta());
        let fa = (residual_full_raw(a + h, b, f) - residual_full_raw(a - h, b, f)) / (2.0 * h);
        let fb = (residual_full_raw(a, b + h, f) - residual_full_raw(a, b - h, f)) / (2.0 * h);
        -fb / fa
    }

    #[test]
    fn slopes_match_implicit_differentiation() {
        for (f, betas) in [
            (FamilyId::ConvexMu1, [46.0, 48.0, 50.0, 52.0]),
            (FamilyId::ConvexMu2, [25.0, 30.0, 38.0, 44.0]),
            (FamilyId::ConcaveMu1, [10.0, 20.0, 35.0, 45.0]),
            (FamilyId::ConcaveMu2, [5.0, 20.0, 40.0, 55.0]),
        ] {
            for b in betas {
                let p = on_curve(f, b);
                let g = g_eval(f, p).unwrap().value;
                let fd = implicit_slope(f, p);
                assert!(
                    (g - fd).abs() < 1e-7 * (1.0 + g.abs()),
                    "{f} at {b}: {g} vs {fd}"
                );
            }
        }
    }

    #[test]
    fn numerator_vanishes_at_known_extrema() {
        // three-decimal anchors, so the numerator is only near zero
        let g = g_eval(FamilyId::ConvexMu2, on_curve(FamilyId::ConvexMu2, 30.154)).unwrap();
        assert!(g.value.abs() < 1e-3 && g.numerator.abs() < 1e-3);
        let g = g_eval(FamilyId::ConcaveMu1, on_curve(FamilyId::ConcaveMu1, 15.414)).unwrap();
        assert!(g.value.abs() < 1e-3);
    }

    #[test]
    fn g_eval_rejects_off_curve_points() {
        let p = AnglePair::from_degrees(50.0, 40.0).unwrap();
        assert!(matches!(
            g_eval(FamilyId::ConvexMu1, p),
            Err(KiteError::OutOfDomain(_))
        ));
    }

    #[test]
    fn concave_mu2_slope_positive() {
        for i in 0..50 {
            let b = 0.5 + 59.0 * i as f64 / 49.0;
            assert!(
                g_eval(FamilyId::ConcaveMu2, on_curve(FamilyId::ConcaveMu2, b))
                    .unwrap()
                    .value
                    > 0.0
            );
        }
    }

    #[test]
    fn extrema() {
        let e = find_curve_extremum(FamilyId::ConvexMu2).unwrap();
        assert_eq!(e.kind, ExtremumKind::Minimum);
        assert!((e.angles.alpha_deg() - 42.211).abs() < 0.002);
        assert!(e.angles.beta_deg() > 30.151 && e.angles.beta_deg() < 30.156);
        let e = find_curve_extremum(FamilyId::ConcaveMu1).unwrap();
        assert_eq!(e.kind, ExtremumKind::Minimum);
        assert!((e.angles.alpha_deg() - 56.930).abs() < 0.002);
        assert!((e.angles.beta_deg() - 15.414).abs() < 0.002);
        assert!(
            residual_full_raw(e.angles.alpha(), e.angles.beta(), FamilyId::ConcaveMu1).abs()
                < 1e-10
        );
        assert!(matches!(
            find_curve_extremum(FamilyId::ConvexMu1),
            Err(KiteError::NoExtremum(_))
        ));
        assert!(matches!(
            find_curve_extremum(FamilyId::ConcaveMu2),
            Err(KiteError::NoExtremum(_))
        ));
    }

    #[test]
    fn m_closed_form_matches_mass_ratio() {
        for b in [30.2, 30.7, 31.529, 32.4, 33.0] {
            let p = on_curve(FamilyId::ConcaveMu2, b);
            let m = masses(p, crate::angles::ConfigKind::Concave).unwrap();
            let closed = mass_ratio_m(deg(b)).unwrap();
            assert!((closed - m.mu2 / m.mu1).abs() < 1e-10, "beta={b}");
        }
    }

    #[test]
    fn m_values() {
        // the μ = μ2 curve meets the singular point with four equal masses
        assert!((mass_ratio_m(deg(30.0)).unwrap() - 1.0).abs() < 1e-9);
        assert!((mass_ratio_m(deg(33.039)).unwrap() - 1.0).abs() < 1e-4);
        assert!(matches!(
            mass_ratio_m(deg(29.0)),
            Err(KiteError::OutOfDomain(_))
        ));
        assert!(matches!(
            mass_ratio_m(deg(34.0)),
            Err(KiteError::OutOfDomain(_))
        ));
    }

    #[test]
    fn m_derivative_matches_difference_quotient() {
        for b in [30.3, 31.0, 31.529, 32.5, 33.0] {
            let h = deg(1e-4);
            let fd =
                (mass_ratio_m(deg(b) + h).unwrap() - mass_ratio_m(deg(b) - h).unwrap()) / (2.0 * h);
            let d = m_derivative(deg(b)).unwrap();
            assert!((d - fd).abs() < 1e-7, "beta={b}: {d} vs {fd}");
        }
    }

    #[test]
    fn m_minimum() {
        let m = find_m_minimum().unwrap();
        assert!((m.angles.alpha_deg() - 60.593).abs() < 0.002);
        assert!((m.angles.beta_deg() - 31.529).abs() < 0.002);
        assert!((m.inverse_ratio - 1.00266).abs() < 5e-5);
        assert!(m.derivative.abs() < 1e-8);
    }

    #[test]
    fn halton_prefix() {
        let h: Vec<f64> = (1..=4).map(|i| halton(i, 2)).collect();
        assert_eq!(h, vec![0.5, 0.25, 0.75, 0.125]);
        assert!((halton(1, 3) - 1.0 / 3.0).abs() < 1e-16);
    }
}
