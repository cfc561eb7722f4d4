//! Bracketed scalar root finding.
//!
//! Bisection shrinks the bracket to `bisection_width`, then an Illinois
//! false-position phase finishes to `xtol`. A false-position step that fails
//! to halve the bracket within two iterations is replaced by bisection.

use crate::error::{KiteError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions {
    pub bisection_width: f64,
    pub xtol: f64,
    pub max_iterations: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            bisection_width: 1e-6,
            xtol: 1e-12,
            max_iterations: 200,
        }
    }
}

/// A sign change located by [`scan_brackets`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bracket {
    /// The sampled function vanished exactly here.
    Exact(f64),
    Interval(f64, f64),
}

/// Root of `f` in `[lo, hi]`; `f(lo)` and `f(hi)` must differ in sign.
pub fn find_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, opts: &RootOptions) -> Result<f64> {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(KiteError::NoBracket { lo: a, hi: b });
    }

    let mut iterations = 0;
    while b - a > opts.bisection_width {
        if iterations >= opts.max_iterations {
            return Err(KiteError::ConvergenceFailure {
                iterations,
                last_x: 0.5 * (a + b),
            });
        }
        iterations += 1;
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if !fm.is_finite() {
            return Err(KiteError::ConvergenceFailure {
                iterations,
                last_x: m,
            });
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }

    // Illinois phase
    let mut side = 0i8;
    let mut widths = [b - a, b - a];
    while b - a > opts.xtol {
        if iterations >= opts.max_iterations {
            return Err(KiteError::ConvergenceFailure {
                iterations,
                last_x: 0.5 * (a + b),
            });
        }
        iterations += 1;
        let stalled = b - a > 0.5 * widths[0];
        let mut x = if stalled {
            0.5 * (a + b)
        } else {
            (a * fb - b * fa) / (fb - fa)
        };
        let nudge = 0.5 * opts.xtol;
        if !x.is_finite() {
            x = 0.5 * (a + b);
        }
        x = x.clamp(a + nudge, b - nudge);
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if !fx.is_finite() {
            return Err(KiteError::ConvergenceFailure {
                iterations,
                last_x: x,
            });
        }
        if fx.signum() == fb.signum() {
            b = x;
            fb = fx;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = x;
            fa = fx;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
        widths = [widths[1], b - a];
    }
    Ok(if fa.abs() <= fb.abs() { a } else { b })
}

/// Samples `f` on `[lo, hi]` with spacing close to `step` and returns every
/// sign change in increasing order. Samples where `f` is not finite break
/// the scan locally. A local minimum of `|f|` without a sign change is
/// rescanned once at a tenth of the step to catch close root pairs.
pub fn scan_brackets<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, step: f64) -> Vec<Bracket> {
    let (xs, ys) = sample(&f, lo, hi, step);
    let mut out = sign_changes(&xs, &ys);
    for i in 1..xs.len().saturating_sub(1) {
        let (y0, y1, y2) = (ys[i - 1], ys[i], ys[i + 1]);
        if !(y0.is_finite() && y1.is_finite() && y2.is_finite()) {
            continue;
        }
        let same_sign = y0.signum() == y1.signum() && y1.signum() == y2.signum();
        if same_sign && y1 != 0.0 && y1.abs() < y0.abs() && y1.abs() < y2.abs() {
            let (fx, fy) = sample(&f, xs[i - 1], xs[i + 1], (xs[i + 1] - xs[i - 1]) / 20.0);
            for br in sign_changes(&fx, &fy) {
                if !out.contains(&br) {
                    out.push(br);
                }
            }
        }
    }
    out.sort_by(|p, q| bracket_lo(p).total_cmp(&bracket_lo(q)));
    out
}

fn bracket_lo(b: &Bracket) -> f64 {
    match *b {
        Bracket::Exact(x) | Bracket::Interval(x, _) => x,
    }
}

fn sample<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, step: f64) -> (Vec<f64>, Vec<f64>) {
    let n = ((hi - lo) / step).ceil().max(1.0) as usize;
    let h = (hi - lo) / n as f64;
    let xs: Vec<f64> = (0..=n)
        .map(|i| if i == n { hi } else { lo + h * i as f64 })
        .collect();
    let ys = xs.iter().map(|&x| f(x)).collect();
    (xs, ys)
}

fn sign_changes(xs: &[f64], ys: &[f64]) -> Vec<Bracket> {
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for (&x, &y) in xs.iter().zip(ys) {
        if !y.is_finite() {
            prev = None;
            continue;
        }
        if y == 0.0 {
            out.push(Bracket::Exact(x));
            prev = None;
            continue;
        }
        if let Some((px, py)) = prev {
            if py.signum() != y.signum() {
                out.push(Bracket::Interval(px, x));
            }
        }
        prev = Some((x, y));
    }
    out
}

/// Scans and refines every root of `f` on `[lo, hi]`.
pub fn all_roots<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    step: f64,
    opts: &RootOptions,
) -> Result<Vec<f64>> {
    scan_brackets(&f, lo, hi, step)
        .into_iter()
        .map(|b| match b {
            Bracket::Exact(x) => Ok(x),
            Bracket::Interval(a, b) => find_root(&f, a, b, opts),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sqrt_two() {
        let r = find_root(|x| x * x - 2.0, 0.0, 2.0, &RootOptions::default()).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn no_bracket() {
        let e = find_root(|x| x * x + 1.0, -1.0, 1.0, &RootOptions::default()).unwrap_err();
        assert!(matches!(e, KiteError::NoBracket { .. }));
    }

    #[test]
    fn iteration_cap() {
        let opts = RootOptions {
            max_iterations: 3,
            ..Default::default()
        };
        let e = find_root(|x| x - 0.3, 0.0, 1.0, &opts).unwrap_err();
        assert!(matches!(e, KiteError::ConvergenceFailure { .. }));
    }

    #[test]
    fn flat_sided_function_still_converges() {
        // false position alone stalls on this shape
        let f = |x: f64| (x - 0.7).powi(3) * 1e3 + (x - 0.7) * 1e-9;
        let r = find_root(f, 0.0, 5.0, &RootOptions::default()).unwrap();
        assert!((r - 0.7).abs() < 1e-9);
    }

    #[test]
    fn close_pair_found_by_refinement() {
        // roots at 0.534 and 0.556, coarse step 0.1 misses the sign change
        let f = |x: f64| (x - 0.534) * (x - 0.556);
        let roots = all_roots(f, 0.0, 1.0, 0.1, &RootOptions::default()).unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - 0.534).abs() < 1e-12 && (roots[1] - 0.556).abs() < 1e-12);
    }

    #[test]
    fn scan_reports_all_sign_changes() {
        let roots = all_roots(f64::sin, 0.5, 10.0, 0.1, &RootOptions::default()).unwrap();
        assert_eq!(roots.len(), 3);
        for (r, k) in roots.iter().zip(1..) {
            assert!((r - std::f64::consts::PI * k as f64).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn cubic_roots_within_tolerance(root in -3.0..3.0f64, lo in 0.01..4.0f64, hi in 0.01..4.0f64) {
            let f = |x: f64| (x - root) * (1.0 + (x - root).powi(2));
            let r = find_root(f, root - lo, root + hi, &RootOptions::default()).unwrap();
            prop_assert!((r - root).abs() <= 1e-12);
        }

        #[test]
        fn deterministic(root in -3.0..3.0f64) {
            let f = |x: f64| (x - root).tanh();
            let a = find_root(f, -5.0, 5.0, &RootOptions::default()).unwrap();
            let b = find_root(f, -5.0, 5.0, &RootOptions::default()).unwrap();
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}
