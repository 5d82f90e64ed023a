//! Resolution of identity for the coherent states.
//!
//! The weight `w(x)` solving the Stieltjes moment problem
//! `∫₀^∞ xⁿ w(x) dx = ρ(n)` has Mellin transform `M[w](s) = ρ(s-1)`, with
//! `ρ` continued off the integers through
//!
//! ```text
//! ρ(s-1) = 16^{1-s} Γ(s) Γ(N+2-s) Γ(N+A+1-s) Γ(N+B+1-s) / (N! Γ(N+A) Γ(N+B))
//! ```
//!
//! (a Meijer G-function `G^{1,3}_{3,1}` in `16x`). Here `w` is recovered by
//! Mellin inversion along the vertical line `Re s = c`,
//!
//! ```text
//! w(x) = (1/2π) ∫ ρ(c-1+it) x^{-(c+it)} dt,
//! ```
//!
//! where `c` lies in the pole-free strip `0 < c < min(N+2, N+A+1, N+B+1)`.
//! The four gamma factors make the integrand decay like `e^{-2π|t|}`.
//!
//! The coherent-state measure itself is `W(|z|²) = C(|z|²) w(|z|²) / π`;
//! only `w` enters the moment identity, so only `w` is exposed.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::algebra::{rho, ModelParams};
use crate::error::{Error, Result};
use crate::format::{round_sig, sig};
use crate::quadrature::{gauss_legendre, integrate, Tolerance};
use crate::special::{ln_gamma, ln_gamma_complex};

const PANEL_ORDER: usize = 20;
const DEFAULT_MAX_LOG_X: f64 = 80.0;
const DEFAULT_TOLERANCE: f64 = 1e-12;
const MAX_HALF_WIDTH: f64 = 400.0;
const IMAG_THRESHOLD: f64 = 1e-9;

/// Upper edge of the pole-free strip of `ρ(s-1)`.
pub fn strip_upper(params: &ModelParams) -> f64 {
    let (na, nb) = params.shifted_pair();
    let n = params.n() as f64;
    (n + 2.0).min(na + 1.0).min(nb + 1.0)
}

/// `ln ρ(s-1)` for complex `s` inside the strip.
pub fn ln_mellin(params: &ModelParams, s: Complex64) -> Complex64 {
    let (na, nb) = params.shifted_pair();
    let n = params.n() as f64;
    (1.0 - s) * 16f64.ln()
        + ln_gamma_complex(s)
        + ln_gamma_complex(n + 2.0 - s)
        + ln_gamma_complex(na + 1.0 - s)
        + ln_gamma_complex(nb + 1.0 - s)
        - (ln_gamma(n + 1.0) + ln_gamma(na) + ln_gamma(nb))
}

/// Mellin-Barnes evaluator for `w(x)` on a fixed contour.
///
/// Construction tabulates `ρ(c-1+it)` on graded Gauss-Legendre panels
/// (refined near `t = 0` by the distance to the nearest pole, uniform
/// outside, mirrored for `t < 0`) out to the point where the integrand has
/// decayed below `tolerance` relative to its peak. The panel width is halved
/// until two successive tables agree on probe points, so a single table then
/// serves every `x` with `|ln x| ≤ max_log_x`.
#[derive(Debug, Clone)]
pub struct WeightEvaluator {
    params: ModelParams,
    c: f64,
    tolerance: f64,
    max_log_x: f64,
    half_width: f64,
    nodes: Vec<(f64, Complex64)>,
}

impl WeightEvaluator {
    /// Contour through the middle of the strip.
    pub fn new(params: ModelParams) -> Result<Self> {
        let c = 0.5 * strip_upper(&params);
        Self::with_abscissa(params, c)
    }

    pub fn with_abscissa(params: ModelParams, c: f64) -> Result<Self> {
        Self::build(params, c, DEFAULT_TOLERANCE, DEFAULT_MAX_LOG_X)
    }

    pub fn build(params: ModelParams, c: f64, tolerance: f64, max_log_x: f64) -> Result<Self> {
        let upper = strip_upper(&params);
        if !(c > 0.0 && c < upper) {
            return Err(Error::Domain(format!(
                "contour abscissa c = {c} must lie strictly inside (0, {upper})"
            )));
        }
        if !(tolerance > 0.0 && tolerance < 1.0) {
            return Err(Error::Config(format!(
                "tolerance must be in (0, 1), got {tolerance}"
            )));
        }
        if !(max_log_x > 0.0 && max_log_x.is_finite()) {
            return Err(Error::Config(format!(
                "max_log_x must be positive, got {max_log_x}"
            )));
        }
        let mut width = (16.0 / max_log_x).min(0.5);
        let mut ev = Self::tabulate(params, c, tolerance, max_log_x, width)?;
        for _ in 0..4 {
            width *= 0.5;
            let finer = Self::tabulate(params, c, tolerance, max_log_x, width)?;
            if ev.agrees_with(&finer) {
                return Ok(finer);
            }
            ev = finer;
        }
        Err(Error::Numerical(format!(
            "contour table for {params} did not stabilise (c = {c}, T = {}, tolerance {tolerance:e})",
            ev.half_width
        )))
    }

    fn tabulate(
        params: ModelParams,
        c: f64,
        tolerance: f64,
        max_log_x: f64,
        width: f64,
    ) -> Result<Self> {
        let (gx, gw) = gauss_legendre(PANEL_ORDER);
        let gap = c.min(strip_upper(&params) - c);
        let value = |t: f64| ln_mellin(&params, Complex64::new(c, t)).exp();
        let peak = value(0.0).norm();

        let mut edges = vec![0.0];
        let mut step = (gap / 8.0).min(width);
        let mut quiet = 0;
        let mut nodes = Vec::new();
        loop {
            let a = *edges.last().unwrap();
            let b = a + step;
            let mut panel_max = 0.0f64;
            for (x, w) in gx.iter().zip(&gw) {
                let t = a + 0.5 * step * (x + 1.0);
                let weight = 0.5 * step * w;
                let vp = value(t);
                let vm = value(-t);
                panel_max = panel_max.max(vp.norm()).max(vm.norm());
                nodes.push((t, vp * weight));
                nodes.push((-t, vm * weight));
            }
            edges.push(b);
            if !panel_max.is_finite() {
                return Err(Error::Numerical(format!(
                    "Mellin integrand overflowed on [{a}, {b}] for {params}, c = {c}"
                )));
            }
            quiet = if panel_max < 1e-2 * tolerance * peak {
                quiet + 1
            } else {
                0
            };
            if quiet >= 2 {
                break;
            }
            if b > MAX_HALF_WIDTH {
                return Err(Error::Numerical(format!(
                    "Mellin integrand for {params} not decayed by |t| = {MAX_HALF_WIDTH} (c = {c})"
                )));
            }
            step = (2.0 * step).min(width);
        }
        let half_width = *edges.last().unwrap();
        Ok(WeightEvaluator {
            params,
            c,
            tolerance,
            max_log_x,
            half_width,
            nodes,
        })
    }

    fn agrees_with(&self, other: &WeightEvaluator) -> bool {
        let l = self.max_log_x;
        [-l, -0.5 * l, -1.0, 0.0, 1.0, 0.5 * l, l]
            .iter()
            .all(|&lx| {
                let (a, scale) = self.sum(lx);
                let (b, _) = other.sum(lx);
                (a - b).norm() <= self.tolerance * scale
            })
    }

    /// Contour sum at `ln x`, and the sum of term magnitudes as a scale.
    fn sum(&self, log_x: f64) -> (Complex64, f64) {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for &(t, v) in &self.nodes {
            let (s, co) = (t * log_x).sin_cos();
            acc += v * Complex64::new(co, -s);
            scale += v.norm();
        }
        let damp = (-self.c * log_x).exp() / (2.0 * PI);
        (acc * damp, scale * damp)
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn abscissa(&self) -> f64 {
        self.c
    }

    /// Truncation `T`: the contour covers `t ∈ [-T, T]`.
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn max_log_x(&self) -> f64 {
        self.max_log_x
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// `w(x)` for `x > 0`.
    pub fn weight(&self, x: f64) -> Result<f64> {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::Domain(format!("weight needs x > 0, got {x}")));
        }
        let log_x = x.ln();
        if log_x.abs() > self.max_log_x {
            return Err(Error::Domain(format!(
                "|ln x| = {} exceeds the resolved range {} of this evaluator",
                log_x.abs(),
                self.max_log_x
            )));
        }
        let (value, _) = self.sum(log_x);
        if value.im.abs() > IMAG_THRESHOLD * value.re.abs().max(1.0) {
            return Err(Error::Numerical(format!(
                "weight has imaginary residue {:e} at x = {x} (c = {}, T = {})",
                value.im, self.c, self.half_width
            )));
        }
        Ok(value.re)
    }

    /// `(x, w(x))` pairs, for plotting.
    pub fn profile(&self, xs: &[f64]) -> Result<WeightProfile> {
        let rows = xs
            .iter()
            .map(|&x| Ok((x, self.weight(x)?)))
            .collect::<Result<_>>()?;
        Ok(WeightProfile { rows })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightProfile {
    pub rows: Vec<(f64, f64)>,
}

impl WeightProfile {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,w\n");
        for (x, w) in &self.rows {
            let _ = writeln!(out, "{},{}", sig(*x), sig(*w));
        }
        out
    }

    /// Points where `w < -threshold`.
    pub fn negative_points(&self, threshold: f64) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .copied()
            .filter(|&(_, w)| w < -threshold)
            .collect()
    }
}

/// `n` log-spaced points between `lo` and `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n.max(2) - 1) as f64).exp())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentReport {
    pub n: usize,
    pub numeric: f64,
    pub analytic: f64,
    pub rel_error: f64,
}

pub fn moments_csv(reports: &[MomentReport]) -> String {
    let mut out = String::from("n,numeric,analytic,rel_error\n");
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.n,
            sig(r.numeric),
            sig(r.analytic),
            sig(r.rel_error)
        );
    }
    out
}

pub fn moments_json(params: &ModelParams, reports: &[MomentReport]) -> serde_json::Value {
    serde_json::json!({
        "params": params.to_string(),
        "moments": reports.iter().map(|r| serde_json::json!({
            "n": r.n,
            "numeric": round_sig(r.numeric),
            "analytic": round_sig(r.analytic),
            "rel_error": round_sig(r.rel_error),
        })).collect::<Vec<_>>(),
    })
}

/// Evaluators on several contours across the strip. Each `x` is served by
/// the contour minimising `ρ(c-1) x^{-c}`, the real-axis saddle of the
/// inversion integrand, which keeps cancellation in the contour sum small
/// for every `x`.
struct ContourFamily {
    members: Vec<(f64, f64, WeightEvaluator)>,
}

impl ContourFamily {
    const SIZE: usize = 8;

    fn new(params: ModelParams, tolerance: f64, max_log_x: f64) -> Result<Self> {
        let upper = strip_upper(&params);
        let edge = (0.1f64).min(0.25 * upper);
        let members = (0..Self::SIZE)
            .map(|j| {
                let c = edge + (upper - 2.0 * edge) * j as f64 / (Self::SIZE - 1) as f64;
                let ln_m = ln_mellin(&params, Complex64::new(c, 0.0)).re;
                Ok((
                    c,
                    ln_m,
                    WeightEvaluator::build(params, c, tolerance, max_log_x)?,
                ))
            })
            .collect::<Result<_>>()?;
        Ok(ContourFamily { members })
    }

    fn weight(&self, x: f64) -> Result<f64> {
        let log_x = x.ln();
        let (_, _, ev) = self
            .members
            .iter()
            .min_by(|a, b| (a.1 - a.0 * log_x).total_cmp(&(b.1 - b.0 * log_x)))
            .expect("family is never empty");
        ev.weight(x)
    }
}

/// Numerically integrate `xⁿ w(x)` over `(0, ∞)` for `n = 0..=max_n` and
/// compare with `ρ(n)`.
///
/// Each `x` is evaluated on the contour (from a fixed family spanning the
/// strip) where `x^{-c} ρ(c-1)` is smallest, so the contour sum does not
/// cancel catastrophically at any `x`. The half line is split at `x = 1` and
/// the tail is mapped by `x = u^{-3}`, which turns the `x^{-(N+1+1/3)}`-type
/// power-law decay (all exponents are thirds) into a smooth integrand on
/// `(0, 1]`.
///
/// The `evaluator` fixes the model and the tolerances; the contours are
/// rebuilt from it.
pub fn verify_moments(evaluator: &WeightEvaluator, max_n: usize) -> Result<Vec<MomentReport>> {
    let params = *evaluator.params();
    if max_n > params.n() {
        return Err(Error::Domain(format!(
            "moment order exceeds N: requested max_n = {max_n} with N = {} (higher moments diverge)",
            params.n()
        )));
    }
    let max_log_x = evaluator.max_log_x();
    let family = ContourFamily::new(params, evaluator.tolerance(), max_log_x)?;

    // Cut-offs where |ln x| reaches max_log_x; the neglected end pieces are
    // below e^{-max_log_x / 3} in relative size.
    let x_min = (-max_log_x).exp();
    let u_min = (-max_log_x / 3.0).exp();

    (0..=max_n)
        .map(|n| {
            let analytic = rho(&params, n)?;
            // either half may be tiny next to the total, so the target is absolute
            let quad = Tolerance {
                abs: 1e-10 * analytic,
                rel: 1e-10,
                max_intervals: 4000,
            };
            let head = guarded(
                |x| Ok(x.powi(n as i32) * family.weight(x)?),
                x_min,
                1.0,
                quad,
            )?;
            let tail = guarded(
                |u| {
                    let x = u.powi(-3);
                    Ok(3.0 * u.powi(-(3 * n as i32) - 4) * family.weight(x)?)
                },
                u_min,
                1.0,
                quad,
            )?;
            let numeric = head + tail;
            Ok(MomentReport {
                n,
                numeric,
                analytic,
                rel_error: (numeric - analytic).abs() / analytic,
            })
        })
        .collect()
}

fn guarded<F>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut failure = None;
    let (value, _) = integrate(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        a,
        b,
        tol,
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(value),
    }
}
