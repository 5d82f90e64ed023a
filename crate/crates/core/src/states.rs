//! Fock-space state vectors, the nonlinear coherent states, and the Husimi
//! Q-function.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::algebra::{ln_rho, ModelParams};
use crate::error::{Error, Result};
use crate::format::{round_sig, sig};

/// Complex amplitudes over `|0⟩..|dim-1⟩`.
///
/// A vector built through [`FockVector::normalized`] or any of the state
/// constructors carries the `normalized` flag; raw intermediates built with
/// [`FockVector::unnormalized`] do not.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amp: Vec<Complex64>,
    normalized: bool,
}

impl FockVector {
    pub fn unnormalized(amp: Vec<Complex64>) -> Self {
        FockVector {
            amp,
            normalized: false,
        }
    }

    /// Scale to unit norm. Fails for the zero vector.
    pub fn normalized(amp: Vec<Complex64>) -> Result<Self> {
        FockVector::unnormalized(amp).normalize()
    }

    pub fn from_real(amp: &[f64]) -> Result<Self> {
        FockVector::normalized(amp.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// Number state `|n⟩` in a space of dimension `dim`.
    pub fn basis(dim: usize, n: usize) -> Self {
        assert!(n < dim, "basis index {n} outside dimension {dim}");
        let mut amp = vec![Complex64::new(0.0, 0.0); dim];
        amp[n] = Complex64::new(1.0, 0.0);
        FockVector {
            amp,
            normalized: true,
        }
    }

    pub fn vacuum(dim: usize) -> Self {
        FockVector::basis(dim, 0)
    }

    pub fn dim(&self) -> usize {
        self.amp.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amp
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amp
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(self) -> Result<Self> {
        let norm = self.norm();
        if norm.is_nan() || norm <= 0.0 || !norm.is_finite() {
            return Err(Error::Numerical(format!(
                "cannot normalize a vector of norm {norm}"
            )));
        }
        let amp = self.amp.into_iter().map(|a| a / norm).collect();
        Ok(FockVector {
            amp,
            normalized: true,
        })
    }

    /// Zero-extend to `dim` levels (no-op if already that large).
    pub fn padded(&self, dim: usize) -> Self {
        let mut amp = self.amp.clone();
        if amp.len() < dim {
            amp.resize(dim, Complex64::new(0.0, 0.0));
        }
        FockVector {
            amp,
            normalized: self.normalized,
        }
    }

    /// `⟨self|other⟩`, treating missing levels as zero.
    pub fn inner(&self, other: &FockVector) -> Complex64 {
        self.amp
            .iter()
            .zip(&other.amp)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `⟨n̂⟩` of the (assumed normalized) state.
    pub fn mean_number(&self) -> f64 {
        self.amp
            .iter()
            .enumerate()
            .map(|(n, a)| n as f64 * a.norm_sqr())
            .sum()
    }
}

/// Normalized nonlinear coherent state `C^{-1/2} Σ zⁿ/√ρ(n) |n⟩`.
///
/// The terms are assembled in log space with a max shift, so arbitrarily
/// large `|z|` does not overflow.
pub fn flncs(params: &ModelParams, z: Complex64) -> FockVector {
    let dim = params.dim();
    if z == Complex64::new(0.0, 0.0) {
        return FockVector::vacuum(dim);
    }
    let ln_r = z.norm().ln();
    let theta = z.arg();
    let log_mod: Vec<f64> = (0..dim)
        .map(|n| n as f64 * ln_r - 0.5 * ln_rho(params, n).expect("n <= N"))
        .collect();
    let shift = log_mod.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let moduli: Vec<f64> = log_mod.iter().map(|l| (l - shift).exp()).collect();
    let norm = moduli.iter().map(|m| m * m).sum::<f64>().sqrt();
    let amp = moduli
        .iter()
        .enumerate()
        .map(|(n, m)| Complex64::from_polar(m / norm, n as f64 * theta))
        .collect();
    FockVector {
        amp,
        normalized: true,
    }
}

/// `⟨α|ψ⟩` for the Glauber coherent state `|α⟩`, summed over the support
/// of `ψ` only.
pub fn glauber_overlap(state: &FockVector, alpha: Complex64) -> Complex64 {
    let ca = alpha.conj();
    let mut coeff = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for (n, a) in state.amplitudes().iter().enumerate() {
        if n > 0 {
            coeff = coeff * ca / (n as f64).sqrt();
        }
        sum += coeff * a;
    }
    sum * (-0.5 * alpha.norm_sqr()).exp()
}

/// `Q(α) = |⟨α|ψ⟩|² / π`.
pub fn qfunction(state: &FockVector, alpha: Complex64) -> f64 {
    glauber_overlap(state, alpha).norm_sqr() / PI
}

/// Rectangular window of the α-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Window {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let ok = |lo: f64, hi: f64| lo.is_finite() && hi.is_finite() && lo < hi;
        if !ok(re_min, re_max) || !ok(im_min, im_max) {
            return Err(Error::Config(format!(
                "invalid window re=[{re_min}, {re_max}] im=[{im_min}, {im_max}]: need min < max"
            )));
        }
        Ok(Window {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }

    pub fn square(half_width: f64) -> Result<Self> {
        Window::new(-half_width, half_width, -half_width, half_width)
    }

    /// `[-(√N+3), √N+3]²`, enough to hold states with `⟨n̂⟩ ≤ N`.
    pub fn default_for(params: &ModelParams) -> Self {
        let h = (params.n() as f64).sqrt() + 3.0;
        Window {
            re_min: -h,
            re_max: h,
            im_min: -h,
            im_max: h,
        }
    }
}

/// Q-function sampled on a uniform grid, endpoints included.
///
/// `values[i * ny + j]` holds `Q(re_i + i·im_j)`: the real-axis index is the
/// outer (row) index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QGrid {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
}

impl QGrid {
    pub fn re_at(&self, i: usize) -> f64 {
        self.re_min + (self.re_max - self.re_min) * i as f64 / (self.nx - 1) as f64
    }

    pub fn im_at(&self, j: usize) -> f64 {
        self.im_min + (self.im_max - self.im_min) * j as f64 / (self.ny - 1) as f64
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.ny + j]
    }

    pub fn cell_area(&self) -> f64 {
        (self.re_max - self.re_min) / (self.nx - 1) as f64 * (self.im_max - self.im_min)
            / (self.ny - 1) as f64
    }

    /// `Σ Q Δre Δim` over all grid points.
    pub fn riemann_sum(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_area()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,q\n");
        for i in 0..self.nx {
            for j in 0..self.ny {
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    sig(self.re_at(i)),
                    sig(self.im_at(j)),
                    sig(self.value(i, j))
                );
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "re_min": round_sig(self.re_min),
            "re_max": round_sig(self.re_max),
            "im_min": round_sig(self.im_min),
            "im_max": round_sig(self.im_max),
            "nx": self.nx,
            "ny": self.ny,
            "values": self.values.iter().map(|&v| round_sig(v)).collect::<Vec<_>>(),
        })
    }
}

/// Evaluate the Q-function of `state` on an `nx × ny` grid over `window`.
pub fn qfunction_grid(state: &FockVector, window: &Window, nx: usize, ny: usize) -> Result<QGrid> {
    if nx < 2 || ny < 2 {
        return Err(Error::Config(format!(
            "grid resolution must be at least 2x2, got {nx}x{ny}"
        )));
    }
    let window = Window::new(window.re_min, window.re_max, window.im_min, window.im_max)?;
    let mut grid = QGrid {
        re_min: window.re_min,
        re_max: window.re_max,
        im_min: window.im_min,
        im_max: window.im_max,
        nx,
        ny,
        values: Vec::new(),
    };
    let rows: Vec<Vec<f64>> = (0..nx)
        .into_par_iter()
        .map(|i| {
            let re = grid.re_at(i);
            (0..ny)
                .map(|j| qfunction(state, Complex64::new(re, grid.im_at(j))))
                .collect()
        })
        .collect();
    grid.values = rows.into_iter().flatten().collect();
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Branch;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn vacuum_at_zero() {
        for branch in Branch::ALL {
            let v = flncs(&ModelParams::new(4, branch), c(0.0, 0.0));
            assert_eq!(v, FockVector::vacuum(5));
        }
    }

    #[test]
    fn two_level_example() {
        let v = flncs(&ModelParams::new(1, Branch::Second), c(1.0, 0.0));
        // unnormalized (1, sqrt(32/9)), C = 41/9
        let c_norm = (41.0f64 / 9.0).sqrt();
        assert!((v.amplitudes()[0].re - 1.0 / c_norm).abs() < 1e-14);
        assert!((v.amplitudes()[1].re - (32.0f64 / 9.0).sqrt() / c_norm).abs() < 1e-14);
        assert!((v.amplitudes()[0].re - 0.468521).abs() < 1e-6);
        assert!((v.amplitudes()[1].re - 0.883452).abs() < 1e-6);
    }

    #[test]
    fn large_z_approaches_top_level() {
        let v = flncs(&ModelParams::new(3, Branch::Second), c(100.0, 0.0));
        assert!(v.amplitudes()[3].norm_sqr() > 0.99);
        let v = flncs(&ModelParams::new(30, Branch::First), c(1e8, 0.0));
        assert!((v.amplitudes()[30].norm() - 1.0).abs() < 1e-12);
        assert!((v.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn overlap_examples() {
        let vac = FockVector::vacuum(3);
        assert_eq!(glauber_overlap(&vac, c(0.0, 0.0)), c(1.0, 0.0));
        let alpha = c(0.7, -1.3);
        let o = glauber_overlap(&vac, alpha);
        assert!((o - c((-0.5 * alpha.norm_sqr()).exp(), 0.0)).norm() < 1e-15);
        let s = flncs(&ModelParams::new(4, Branch::Third), c(0.8, 0.2));
        assert!((glauber_overlap(&s, c(0.0, 0.0)) - s.amplitudes()[0]).norm() < 1e-15);
    }

    #[test]
    fn q_examples() {
        let q = qfunction(&FockVector::vacuum(1), c(0.0, 0.0));
        assert!((q - 1.0 / PI).abs() < 1e-15);
        assert_eq!(qfunction(&FockVector::basis(2, 1), c(0.0, 0.0)), 0.0);
    }

    #[test]
    fn grid_rejects_bad_config() {
        let v = FockVector::vacuum(1);
        let w = Window::square(2.0).unwrap();
        assert!(matches!(
            qfunction_grid(&v, &w, 1, 5),
            Err(Error::Config(_))
        ));
        let bad = Window {
            re_min: 1.0,
            re_max: 1.0,
            im_min: -1.0,
            im_max: 1.0,
        };
        assert!(matches!(
            qfunction_grid(&v, &bad, 5, 5),
            Err(Error::Config(_))
        ));
        assert!(Window::new(0.0, -1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn grid_layout_and_csv() {
        let v = FockVector::vacuum(1);
        let g = qfunction_grid(&v, &Window::new(-1.0, 1.0, 0.0, 2.0).unwrap(), 3, 2).unwrap();
        assert_eq!(g.values.len(), 6);
        assert_eq!(g.re_at(2), 1.0);
        assert_eq!(g.im_at(1), 2.0);
        assert!((g.value(1, 0) - 1.0 / PI).abs() < 1e-15);
        let csv = g.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "re,im,q");
        assert_eq!(lines.len(), 7);
        assert!(lines[3].starts_with("0,0,0.318309886184"));
        let json = g.to_json();
        assert_eq!(json["values"].as_array().unwrap().len(), 6);
    }
}
