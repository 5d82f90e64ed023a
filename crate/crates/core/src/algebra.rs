//! Deformed oscillator algebra of the Fokas-Lagerstrom system on a fixed
//! energy shell.
//!
//! On the shell `E_N` the ladder operators close on an `(N+1)`-dimensional
//! Fock space `|0⟩..|N⟩`. Everything is expressed through the structure
//! function
//!
//! ```text
//! Φ(x) = 16 x (N + 1 - x)(N + A - x)(N + B - x)
//! ```
//!
//! and the deformation function `f(n)` with `n f(n)² = Φ(n)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Rational64;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::special::ln_gamma;

/// The three admissible `(A, B)` pairs, in the order they are usually listed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Branch {
    /// `(A, B) = (2/3, 4/3)`, `E_N = N + 1`.
    First,
    /// `(A, B) = (2/3, 1/3)`, `E_N = N + 2/3`.
    Second,
    /// `(A, B) = (5/3, 4/3)`, `E_N = N + 4/3`.
    Third,
}

impl Branch {
    pub const ALL: [Branch; 3] = [Branch::First, Branch::Second, Branch::Third];

    /// 1-based index used on the command line.
    pub fn index(self) -> u8 {
        match self {
            Branch::First => 1,
            Branch::Second => 2,
            Branch::Third => 3,
        }
    }

    pub fn from_index(i: u8) -> Result<Branch> {
        match i {
            1 => Ok(Branch::First),
            2 => Ok(Branch::Second),
            3 => Ok(Branch::Third),
            _ => Err(Error::Config(format!(
                "pair index must be 1, 2 or 3, got {i}"
            ))),
        }
    }

    /// The pair `(A, B)` as exact thirds.
    pub fn pair(self) -> (Rational64, Rational64) {
        let t = |num| Rational64::new(num, 3);
        match self {
            Branch::First => (t(2), t(4)),
            Branch::Second => (t(2), t(1)),
            Branch::Third => (t(5), t(4)),
        }
    }

    /// Offset of the shell energy above `N`.
    pub fn energy_offset(self) -> Rational64 {
        match self {
            Branch::First => Rational64::from_integer(1),
            Branch::Second => Rational64::new(2, 3),
            Branch::Third => Rational64::new(4, 3),
        }
    }
}

/// System parameters: shell index `N` and branch. All other quantities
/// (`A`, `B`, `u`, `E_N`) are derived and therefore always consistent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModelParams {
    n: usize,
    branch: Branch,
}

impl ModelParams {
    pub fn new(n: usize, branch: Branch) -> Self {
        ModelParams { n, branch }
    }

    /// Highest Fock level `N`; the space has dimension `N + 1`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn a(&self) -> Rational64 {
        self.branch.pair().0
    }

    pub fn b(&self) -> Rational64 {
        self.branch.pair().1
    }

    pub fn u(&self) -> Rational64 {
        Rational64::new(1, 2)
    }

    pub fn energy_exact(&self) -> Rational64 {
        Rational64::from_integer(self.n as i64) + self.branch.energy_offset()
    }

    pub fn energy(&self) -> f64 {
        to_f64(self.energy_exact())
    }

    /// `N + A` and `N + B` as floats, each rounded once from the exact value.
    pub fn shifted_pair(&self) -> (f64, f64) {
        let n = Rational64::from_integer(self.n as i64);
        (to_f64(n + self.a()), to_f64(n + self.b()))
    }
}

impl fmt::Display for ModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={},pair={}", self.n, self.branch.index())
    }
}

impl FromStr for ModelParams {
    type Err = Error;

    /// Parses the canonical `N=<int>,pair=<1|2|3>` form.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("expected \"N=<int>,pair=<1|2|3>\", got {s:?}"));
        let (n_part, pair_part) = s.split_once(',').ok_or_else(bad)?;
        let n = n_part.trim().strip_prefix("N=").ok_or_else(bad)?;
        let pair = pair_part.trim().strip_prefix("pair=").ok_or_else(bad)?;
        let n: usize = n.parse().map_err(|_| bad())?;
        let pair: u8 = pair.parse().map_err(|_| bad())?;
        Ok(ModelParams::new(n, Branch::from_index(pair)?))
    }
}

fn to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `Φ(E_N, x) = 16 x (N+1-x)(N+A-x)(N+B-x)`.
pub fn structure_phi(params: &ModelParams, x: f64) -> f64 {
    let (na, nb) = params.shifted_pair();
    let top = params.n as f64 + 1.0;
    16.0 * x * (top - x) * (na - x) * (nb - x)
}

/// `f(n)²` at an integer level, in exact rational arithmetic.
fn f_squared_exact(params: &ModelParams, n: usize) -> Rational64 {
    let big = Rational64::from_integer(params.n as i64);
    let x = Rational64::from_integer(n as i64);
    Rational64::from_integer(16) * (big + 1 - x) * (big + params.a() - x) * (big + params.b() - x)
}

/// Deformation function `f(n) = sqrt(16 (N+1-n)(N+A-n)(N+B-n))`, defined on
/// `0 ≤ n ≤ N+1`.
pub fn deformation_f(params: &ModelParams, n: usize) -> Result<f64> {
    if n > params.n + 1 {
        return Err(Error::Domain(format!(
            "deformation function needs 0 <= n <= N+1 = {}, got {n}",
            params.n + 1
        )));
    }
    Ok(to_f64(f_squared_exact(params, n)).sqrt())
}

/// `Φ(n) = n f(n)²` at an integer level, rounded once.
pub fn structure_phi_at(params: &ModelParams, n: usize) -> Result<f64> {
    if n > params.n + 1 {
        return Err(Error::Domain(format!(
            "structure function needs 0 <= n <= N+1 = {}, got {n}",
            params.n + 1
        )));
    }
    Ok(to_f64(f_squared_exact(params, n) * n as i64))
}

/// `ln ρ(n)` via log-gamma differences.
pub fn ln_rho(params: &ModelParams, n: usize) -> Result<f64> {
    if n > params.n {
        return Err(Error::Domain(format!(
            "rho(n) needs 0 <= n <= N = {}, got {n}",
            params.n
        )));
    }
    let big = params.n as f64;
    let x = n as f64;
    let (na, nb) = params.shifted_pair();
    Ok(
        -x * 16f64.ln() + ln_gamma(x + 1.0) + ln_gamma(big - x + 1.0) - ln_gamma(big + 1.0)
            + ln_gamma(na - x)
            - ln_gamma(na)
            + ln_gamma(nb - x)
            - ln_gamma(nb),
    )
}

/// Moment sequence `ρ(n)` of the coherent-state expansion.
pub fn rho(params: &ModelParams, n: usize) -> Result<f64> {
    ln_rho(params, n).map(f64::exp)
}

/// Dense complex square matrix acting on the truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix(DMatrix<Complex64>);

impl OperatorMatrix {
    pub fn zeros(dim: usize) -> Self {
        OperatorMatrix(DMatrix::zeros(dim, dim))
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.0[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        self.0[(row, col)] = v;
    }

    pub fn adjoint(&self) -> Self {
        OperatorMatrix(self.0.adjoint())
    }

    pub fn commutator(&self, other: &Self) -> Self {
        OperatorMatrix(&self.0 * &other.0 - &other.0 * &self.0)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius norm of `self - other`.
    pub fn distance(&self, other: &Self) -> f64 {
        OperatorMatrix(&self.0 - &other.0).frobenius_norm()
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim(), "vector and operator dimensions differ");
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.0[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }
}

#[derive(Debug, Clone)]
pub struct LadderOperators {
    pub annihilation: OperatorMatrix,
    pub creation: OperatorMatrix,
    pub number: OperatorMatrix,
}

/// Deformed ladder operators `Â = â f(n̂)`, `Â†`, and `n̂` on `|0⟩..|N⟩`.
pub fn ladder_operators(params: &ModelParams) -> LadderOperators {
    let dim = params.dim();
    let mut annihilation = OperatorMatrix::zeros(dim);
    for n in 1..dim {
        let phi = structure_phi_at(params, n).expect("n <= N");
        annihilation.set(n - 1, n, Complex64::new(phi.sqrt(), 0.0));
    }
    let creation = annihilation.adjoint();
    let number = OperatorMatrix::from_diagonal(&(0..dim).map(|n| n as f64).collect::<Vec<_>>());
    LadderOperators {
        annihilation,
        creation,
        number,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyLevel {
    pub branch: Branch,
    pub energy: f64,
}

/// The three shell energies `E_N` with their branch labels.
pub fn energy_spectrum(n: usize) -> [EnergyLevel; 3] {
    Branch::ALL.map(|branch| EnergyLevel {
        branch,
        energy: ModelParams::new(n, branch).energy(),
    })
}
