//! Photon-number statistics and quadrature squeezing of Fock-space states.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::algebra::ModelParams;
use crate::error::{Error, Result};
use crate::format::{round_sig, sig};
use crate::states::{flncs, FockVector};

/// Mandel `Q` parameter. Undefined for the vacuum, where `⟨n̂⟩ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mandel {
    Defined(f64),
    Undefined,
}

impl Mandel {
    pub fn value(self) -> Option<f64> {
        match self {
            Mandel::Defined(v) => Some(v),
            Mandel::Undefined => None,
        }
    }
}

impl fmt::Display for Mandel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mandel::Defined(v) => f.write_str(&sig(*v)),
            Mandel::Undefined => f.write_str("undefined"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhotonStats {
    pub p: Vec<f64>,
    pub mean: f64,
    pub variance: f64,
    pub mandel: Mandel,
}

/// `P(n) = |aₙ|²`, `⟨n̂⟩`, `(Δn)²` and the Mandel parameter.
pub fn photon_stats(state: &FockVector) -> PhotonStats {
    let p: Vec<f64> = state.amplitudes().iter().map(|a| a.norm_sqr()).collect();
    let mean: f64 = p.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
    let second: f64 = p.iter().enumerate().map(|(n, p)| (n * n) as f64 * p).sum();
    // cancellation can leave a tiny negative remainder
    let variance = (second - mean * mean).max(0.0);
    let mandel = if mean == 0.0 {
        Mandel::Undefined
    } else {
        Mandel::Defined((variance - mean) / mean)
    };
    PhotonStats {
        p,
        mean,
        variance,
        mandel,
    }
}

/// First and second moments of the bosonic `â`, computed from amplitudes.
#[derive(Debug, Clone, Copy)]
pub struct BosonMoments {
    /// `⟨â⟩`
    pub a: Complex64,
    /// `⟨â²⟩`
    pub a2: Complex64,
    /// `⟨â†â⟩`
    pub n: f64,
}

pub fn boson_moments(state: &FockVector) -> BosonMoments {
    let amp = state.amplitudes();
    let mut a = Complex64::new(0.0, 0.0);
    let mut a2 = Complex64::new(0.0, 0.0);
    for n in 0..amp.len() {
        if n + 1 < amp.len() {
            a += amp[n].conj() * amp[n + 1] * ((n + 1) as f64).sqrt();
        }
        if n + 2 < amp.len() {
            a2 += amp[n].conj() * amp[n + 2] * (((n + 1) * (n + 2)) as f64).sqrt();
        }
    }
    BosonMoments {
        a,
        a2,
        n: state.mean_number(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureReport {
    pub phi: f64,
    pub s1: f64,
    pub s2: f64,
    pub var1: f64,
    pub var2: f64,
    pub product: f64,
}

/// Variances of `X̂₁ = (â e^{iφ} + â† e^{-iφ})/2` and
/// `X̂₂ = (â e^{iφ} - â† e^{-iφ})/2i`, and the squeezing parameters
/// `Sᵢ = 4 (ΔXᵢ)² - 1`.
pub fn quadrature_report(state: &FockVector, phi: f64) -> QuadratureReport {
    quadrature_from_moments(&boson_moments(state), phi)
}

pub fn quadrature_from_moments(m: &BosonMoments, phi: f64) -> QuadratureReport {
    let rot = Complex64::from_polar(1.0, phi);
    let mean = m.a * rot;
    let sq = (m.a2 * rot * rot).re;
    // ⟨â â†⟩ + ⟨â† â⟩ = 2⟨n̂⟩ + 1
    let sym = 2.0 * m.n + 1.0;
    let var1 = 0.25 * (2.0 * sq + sym) - mean.re * mean.re;
    let var2 = 0.25 * (sym - 2.0 * sq) - mean.im * mean.im;
    QuadratureReport {
        phi,
        s1: 4.0 * var1 - 1.0,
        s2: 4.0 * var2 - 1.0,
        var1,
        var2,
        product: var1 * var2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Observable {
    Mandel,
    Mean,
    S1,
    S2,
    /// `P(n)` for a fixed level.
    Probability(usize),
}

impl Observable {
    /// Whether the scan variable is the quadrature phase (otherwise `|z|`).
    pub fn scans_phase(self) -> bool {
        matches!(self, Observable::S1 | Observable::S2)
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mandel" => Ok(Observable::Mandel),
            "mean" => Ok(Observable::Mean),
            "s1" => Ok(Observable::S1),
            "s2" => Ok(Observable::S2),
            _ => s
                .strip_prefix('p')
                .and_then(|k| k.parse().ok())
                .map(Observable::Probability)
                .ok_or_else(|| {
                    Error::Config(format!(
                        "unknown observable {s:?}; expected mandel, mean, s1, s2 or p<n>"
                    ))
                }),
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observable::Mandel => f.write_str("mandel"),
            Observable::Mean => f.write_str("mean"),
            Observable::S1 => f.write_str("s1"),
            Observable::S2 => f.write_str("s2"),
            Observable::Probability(n) => write!(f, "p{n}"),
        }
    }
}

/// Sample points of a scan. `inclusive` selects whether `hi` itself is
/// sampled (closed grid) or excluded (periodic grid).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sampling {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub inclusive: bool,
}

impl Sampling {
    pub fn closed(lo: f64, hi: f64, points: usize) -> Self {
        Sampling {
            lo,
            hi,
            points,
            inclusive: true,
        }
    }

    /// 720 points on `[0, 2π)`.
    pub fn default_phase() -> Self {
        Sampling {
            lo: 0.0,
            hi: 2.0 * PI,
            points: 720,
            inclusive: false,
        }
    }

    pub fn nodes(&self) -> Result<Vec<f64>> {
        if self.points < 2 {
            return Err(Error::Config(format!(
                "scan resolution must be >= 2, got {}",
                self.points
            )));
        }
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(Error::Config(format!(
                "invalid scan range [{}, {}]",
                self.lo, self.hi
            )));
        }
        let div = if self.inclusive {
            self.points - 1
        } else {
            self.points
        } as f64;
        Ok((0..self.points)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / div)
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec {
    pub observable: Observable,
    pub params: ModelParams,
    pub sampling: Sampling,
    /// Coherent-state label; phase scans use it as is, `|z|` scans keep
    /// only its argument.
    pub z: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanTable {
    pub observable: Observable,
    pub variable: &'static str,
    /// `(x, value)`; `None` marks an undefined Mandel parameter.
    pub rows: Vec<(f64, Option<f64>)>,
}

impl ScanTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,value\n");
        for (x, v) in &self.rows {
            let v = v.map(sig).unwrap_or_else(|| "undefined".into());
            let _ = writeln!(out, "{},{}", sig(*x), v);
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "observable": self.observable.to_string(),
            "variable": self.variable,
            "x": self.rows.iter().map(|r| round_sig(r.0)).collect::<Vec<_>>(),
            "value": self.rows.iter().map(|r| r.1.map(round_sig)).collect::<Vec<_>>(),
        })
    }
}

/// Sample an observable of the coherent states over `|z|` (number
/// statistics) or over the quadrature phase (squeezing parameters).
///
/// For `|z|` scans the phase of `spec.z` is kept and its modulus replaced by
/// each sample value.
pub fn scan(spec: &ScanSpec) -> Result<ScanTable> {
    let xs = spec.sampling.nodes()?;
    if let Observable::Probability(n) = spec.observable {
        if n > spec.params.n() {
            return Err(Error::Domain(format!(
                "P({n}) requested but the space only holds levels 0..={}",
                spec.params.n()
            )));
        }
    }
    let rows = if spec.observable.scans_phase() {
        let moments = boson_moments(&flncs(&spec.params, spec.z));
        xs.into_iter()
            .map(|phi| {
                let q = quadrature_from_moments(&moments, phi);
                let v = if spec.observable == Observable::S1 {
                    q.s1
                } else {
                    q.s2
                };
                (phi, Some(v))
            })
            .collect()
    } else {
        let arg = if spec.z.norm() > 0.0 {
            spec.z.arg()
        } else {
            0.0
        };
        xs.into_par_iter()
            .map(|r| {
                let stats = photon_stats(&flncs(&spec.params, Complex64::from_polar(r, arg)));
                let v = match spec.observable {
                    Observable::Mean => Some(stats.mean),
                    Observable::Mandel => stats.mandel.value(),
                    Observable::Probability(n) => Some(stats.p[n]),
                    Observable::S1 | Observable::S2 => unreachable!(),
                };
                (r, v)
            })
            .collect()
    };
    let variable = if spec.observable.scans_phase() {
        "phi"
    } else {
        "z"
    };
    Ok(ScanTable {
        observable: spec.observable,
        variable,
        rows,
    })
}
