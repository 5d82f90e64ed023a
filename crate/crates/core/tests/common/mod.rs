//! Reference implementations shared by the integration tests. They are
//! written from the defining formulas, independently of the library code.
#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use flncs::{Branch, ModelParams};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// (A, B) as plain floats, straight from the branch table.
pub fn pair_f64(branch: Branch) -> (f64, f64) {
    match branch {
        Branch::First => (2.0 / 3.0, 4.0 / 3.0),
        Branch::Second => (2.0 / 3.0, 1.0 / 3.0),
        Branch::Third => (5.0 / 3.0, 4.0 / 3.0),
    }
}

pub fn phi(n: usize, branch: Branch, x: f64) -> f64 {
    let (a, b) = pair_f64(branch);
    let n = n as f64;
    16.0 * x * (n + 1.0 - x) * (n + a - x) * (n + b - x)
}

/// `Φ(k)` at an integer level from integer arithmetic on `(3A, 3B)`, so the
/// only rounding is the final division by 9.
pub fn phi_int(n: usize, branch: Branch, k: usize) -> f64 {
    let (a3, b3): (i128, i128) = match branch {
        Branch::First => (2, 4),
        Branch::Second => (2, 1),
        Branch::Third => (5, 4),
    };
    let (n, k) = (n as i128, k as i128);
    let num = 16 * k * (n + 1 - k) * (3 * n + a3 - 3 * k) * (3 * n + b3 - 3 * k);
    num as f64 / 9.0
}

/// `(n!)² / Π_{k=1..n} Φ(k)`, accumulated as a running product.
pub fn rho(n_top: usize, branch: Branch, n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| {
        acc * (k as f64) * (k as f64) / phi(n_top, branch, k as f64)
    })
}

/// Normalized coherent-state amplitudes `zⁿ/√ρ(n)`; fine for moderate |z| and N.
pub fn flncs_amplitudes(n_top: usize, branch: Branch, z: Complex64) -> Vec<Complex64> {
    let raw: Vec<Complex64> = (0..=n_top)
        .map(|n| z.powu(n as u32) / rho(n_top, branch, n).sqrt())
        .collect();
    let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    raw.into_iter().map(|a| a / norm).collect()
}

pub fn params(n: usize, branch: Branch) -> ModelParams {
    ModelParams::new(n, branch)
}

pub fn all_params(max_n: usize) -> impl Iterator<Item = ModelParams> {
    (1..=max_n).flat_map(|n| Branch::ALL.into_iter().map(move |b| ModelParams::new(n, b)))
}

/// Field after one resonant Jaynes-Cummings pulse of duration `gtau`,
/// atom prepared in `(|e⟩ + iε|g⟩)/√(1+|ε|²)` and detected in `|g⟩`.
/// Built from `exp(-i gτ (a σ₊ + a† σ₋))` on a truncated product space by
/// diagonalizing the real symmetric coupling matrix. Returns the unnormalized
/// ground-state branch of the field.
pub fn jc_ground_branch(field: &[Complex64], eps: Complex64, gtau: f64) -> Vec<Complex64> {
    let m = field.len() + 1;
    // basis index: 2n for |e,n⟩, 2n+1 for |g,n⟩
    let dim = 2 * m;
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for n in 0..m - 1 {
        // a σ₊ |g,n+1⟩ = √(n+1) |e,n⟩
        let s = ((n + 1) as f64).sqrt();
        h[(2 * n, 2 * (n + 1) + 1)] = s;
        h[(2 * (n + 1) + 1, 2 * n)] = s;
    }
    let eig = SymmetricEigen::new(h);
    let v = eig.eigenvectors.map(|x| c(x, 0.0));
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| (c(0.0, -gtau * l)).exp()));
    let u = &v * phases * v.transpose();
    let norm = (1.0 + eps.norm_sqr()).sqrt();
    let mut psi = nalgebra::DVector::<Complex64>::zeros(dim);
    for (n, &a) in field.iter().enumerate() {
        psi[2 * n] = a / norm;
        psi[2 * n + 1] = c(0.0, 1.0) * eps * a / norm;
    }
    let out = u * psi;
    (0..m).map(|n| out[2 * n + 1]).collect()
}

/// Seeded generator, so every run draws the same samples.
pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut StdRng, radius: f64) -> Complex64 {
    c(
        rng.random_range(-radius..radius),
        rng.random_range(-radius..radius),
    )
}

/// Random normalized vector of the given dimension.
pub fn random_state(rng: &mut StdRng, dim: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim).map(|_| random_complex(rng, 1.0)).collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / norm).collect()
}
