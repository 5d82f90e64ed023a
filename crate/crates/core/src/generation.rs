//! Synthesis of a target field state by sending two-level atoms through a
//! resonant cavity one at a time and post-selecting ground-state detections.
//!
//! Atom `k` enters in `(|a⟩ + iε_k|b⟩)/√(1+|ε_k|²)` and interacts for a
//! scaled time `gτ_k` under the resonant Jaynes-Cummings coupling:
//!
//! ```text
//! |n,a⟩ → Cₙ |n,a⟩ - i Sₙ |n+1,b⟩
//! |n,b⟩ → C_{n-1} |n,b⟩ - i S_{n-1} |n-1,a⟩
//! Cₙ = cos(gτ √(n+1)),  Sₙ = sin(gτ √(n+1))
//! ```
//!
//! Detecting `|b⟩` maps the field amplitudes as
//! `φₙ ← S_{n-1} φ_{n-1} - ε C_{n-1} φₙ` (up to normalization and a global
//! phase). Planning inverts this map one atom at a time, top level first.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::format::{round_sig, sig};
use crate::poly::Poly;
use crate::states::FockVector;

/// Below this, ground-state detection is treated as impossible.
pub const MIN_DETECTION_PROBABILITY: f64 = 1e-14;
const DEGENERATE_SIN: f64 = 1e-12;

/// Default interaction parameter `gτ = π/5`.
pub const DEFAULT_GTAU: f64 = PI / 5.0;

pub fn uniform_schedule(atoms: usize, gtau: f64) -> Vec<f64> {
    vec![gtau; atoms]
}

fn jc_cos(gtau: f64, n: isize) -> f64 {
    if n < 0 {
        1.0
    } else {
        (gtau * ((n + 1) as f64).sqrt()).cos()
    }
}

fn jc_sin(gtau: f64, n: isize) -> f64 {
    if n < 0 {
        0.0
    } else {
        (gtau * ((n + 1) as f64).sqrt()).sin()
    }
}

/// Atom-field state after one passage: the field components paired with
/// the excited (`a`) and ground (`b`) atomic states. Both have one level more
/// than the incoming field so no amplitude is truncated.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    pub field_a: FockVector,
    pub field_b: FockVector,
}

impl JointState {
    pub fn norm_sqr(&self) -> f64 {
        self.field_a.norm_sqr() + self.field_b.norm_sqr()
    }
}

/// One atom passage.
pub fn jc_interact(field: &FockVector, epsilon: Complex64, gtau: f64) -> JointState {
    let phi = field.amplitudes();
    let dim = phi.len() + 1;
    let at = |m: isize| -> Complex64 {
        if m < 0 || m as usize >= phi.len() {
            Complex64::new(0.0, 0.0)
        } else {
            phi[m as usize]
        }
    };
    let scale = 1.0 / (1.0 + epsilon.norm_sqr()).sqrt();
    let minus_i = Complex64::new(0.0, -1.0);
    let mut a = Vec::with_capacity(dim);
    let mut b = Vec::with_capacity(dim);
    for m in 0..dim as isize {
        a.push((at(m) * jc_cos(gtau, m) + epsilon * jc_sin(gtau, m) * at(m + 1)) * scale);
        b.push(
            minus_i
                * (at(m - 1) * jc_sin(gtau, m - 1) - epsilon * jc_cos(gtau, m - 1) * at(m))
                * scale,
        );
    }
    JointState {
        field_a: FockVector::unnormalized(a),
        field_b: FockVector::unnormalized(b),
    }
}

/// Post-select the atom in `|b⟩`: the renormalized field and the detection
/// probability.
pub fn project_ground(joint: &JointState) -> Result<(FockVector, f64)> {
    let prob = joint.field_b.norm_sqr();
    if prob < MIN_DETECTION_PROBABILITY {
        return Err(Error::MeasurementImpossible { prob });
    }
    let field = joint.field_b.clone().normalize()?;
    Ok((field, prob))
}

/// A candidate `ε_k` together with the detection probability it yields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub epsilon: Complex64,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationPlan {
    /// Per-atom interaction parameters, atom 1 first.
    pub gtau: Vec<f64>,
    /// Chosen atomic parameters, atom 1 first.
    pub epsilons: Vec<Complex64>,
    /// All roots of each step's characteristic polynomial, atom 1 first.
    pub all_roots: Vec<Vec<Complex64>>,
    /// Predicted probability that every detection finds the ground state.
    pub success_prob: f64,
    pub target: FockVector,
}

impl GenerationPlan {
    pub fn atoms(&self) -> usize {
        self.epsilons.len()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let pair = |z: &Complex64| serde_json::json!([round_sig(z.re), round_sig(z.im)]);
        serde_json::json!({
            "N": self.atoms(),
            "gtau": self.gtau.iter().map(|&g| round_sig(g)).collect::<Vec<_>>(),
            "epsilons": self.epsilons.iter().map(pair).collect::<Vec<_>>(),
            "all_roots": self.all_roots.iter()
                .map(|r| r.iter().map(pair).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "success_prob": round_sig(self.success_prob),
            "target_amplitudes": self.target.amplitudes().iter().map(pair).collect::<Vec<_>>(),
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,gtau,eps_re,eps_im\n");
        for (k, (g, e)) in self.gtau.iter().zip(&self.epsilons).enumerate() {
            let _ = writeln!(out, "{},{},{},{}", k + 1, sig(*g), sig(e.re), sig(e.im));
        }
        out
    }
}

/// Default root choice: the candidate with the largest detection probability,
/// ties going to the smallest `|ε|`.
pub fn most_likely(_step: usize, candidates: &[Candidate]) -> usize {
    let mut best = 0;
    for (i, c) in candidates.iter().enumerate().skip(1) {
        let b = &candidates[best];
        let tie = (c.probability - b.probability).abs() <= 1e-12 * b.probability.max(1e-300);
        if (tie && c.epsilon.norm() < b.epsilon.norm()) || (!tie && c.probability > b.probability) {
            best = i;
        }
    }
    best
}

/// Atomic parameters that synthesize `target` from the vacuum.
pub fn plan(target: &FockVector, gtau: &[f64]) -> Result<GenerationPlan> {
    plan_with(target, gtau, most_likely)
}

/// As [`plan`], with a caller-supplied rule picking one of the candidate
/// roots at each step (`step` counts atoms from 1).
pub fn plan_with<F>(target: &FockVector, gtau: &[f64], mut choose: F) -> Result<GenerationPlan>
where
    F: FnMut(usize, &[Candidate]) -> usize,
{
    let atoms = target.dim().saturating_sub(1);
    if gtau.len() != atoms {
        return Err(Error::Config(format!(
            "schedule has {} interaction parameters but the target needs {atoms} atoms",
            gtau.len()
        )));
    }
    let target = target.clone().normalize()?;
    if target.amplitudes()[atoms].norm() <= 1e-14 {
        return Err(Error::UnderdeterminedTarget { top: atoms });
    }
    for (k, &g) in gtau.iter().enumerate() {
        for level in 1..=k + 1 {
            if (g * (level as f64).sqrt()).sin().abs() < DEGENERATE_SIN {
                return Err(Error::DegenerateSchedule { step: k + 1, level });
            }
        }
    }

    let mut epsilons = vec![Complex64::new(0.0, 0.0); atoms];
    let mut all_roots = vec![Vec::new(); atoms];
    let mut success_prob = 1.0;
    let mut current = target.clone();
    for k in (1..=atoms).rev() {
        let g = gtau[k - 1];
        let step = back_substitute(&current, g)?;
        let roots = step.characteristic.roots()?;
        if roots.is_empty() {
            return Err(Error::Numerical(format!(
                "characteristic polynomial of step {k} has no roots"
            )));
        }
        let mut candidates = Vec::with_capacity(roots.len());
        let mut predecessors = Vec::with_capacity(roots.len());
        for &eps in &roots {
            let prev = FockVector::normalized(step.eval(eps))?;
            let prob = jc_interact(&prev, eps, g).field_b.norm_sqr();
            candidates.push(Candidate {
                epsilon: eps,
                probability: prob,
            });
            predecessors.push(prev);
        }
        let pick = choose(k, &candidates);
        let chosen = candidates
            .get(pick)
            .ok_or_else(|| Error::Config(format!("root index {pick} out of range at step {k}")))?;
        if chosen.probability < MIN_DETECTION_PROBABILITY {
            return Err(Error::MeasurementImpossible {
                prob: chosen.probability,
            });
        }
        epsilons[k - 1] = chosen.epsilon;
        all_roots[k - 1] = roots;
        success_prob *= chosen.probability;
        current = predecessors.swap_remove(pick);
    }
    Ok(GenerationPlan {
        gtau: gtau.to_vec(),
        epsilons,
        all_roots,
        success_prob,
        target,
    })
}

/// The field amplitudes before atom `k` as polynomials in `ε_k`, and the
/// degree-`k` consistency polynomial whose roots are the admissible `ε_k`.
struct BackSubstitution {
    field: Vec<Poly>,
    characteristic: Poly,
}

impl BackSubstitution {
    fn eval(&self, eps: Complex64) -> Vec<Complex64> {
        self.field.iter().map(|p| p.eval(eps)).collect()
    }
}

/// Invert `dₘ = S_{m-1} φ_{m-1} - ε C_{m-1} φₘ` for `m = k..1`, seeded by
/// `φ_k = 0`; the `m = 0` row `d₀ + ε φ₀(ε) = 0` is the characteristic
/// polynomial.
fn back_substitute(target: &FockVector, gtau: f64) -> Result<BackSubstitution> {
    let d = target.amplitudes();
    let k = d.len() - 1;
    let mut field = vec![Poly::zero(); k + 1];
    for m in (1..=k).rev() {
        let s = jc_sin(gtau, m as isize - 1);
        let c = jc_cos(gtau, m as isize - 1);
        let next = Poly::constant(d[m]).add(&field[m].shift().scale(Complex64::new(c, 0.0)));
        field[m - 1] = next.scale(Complex64::new(1.0 / s, 0.0));
    }
    let characteristic = Poly::constant(d[0]).add(&field[0].shift());
    field.truncate(k);
    Ok(BackSubstitution {
        field,
        characteristic,
    })
}

#[derive(Debug, Clone)]
pub struct Simulation {
    pub final_state: FockVector,
    /// `|⟨target|final⟩|`.
    pub fidelity: f64,
    pub success_prob: f64,
    /// Field after `k = 0..=N` atoms, starting with the vacuum.
    pub intermediates: Vec<FockVector>,
}

impl Simulation {
    /// `k,n,re,im` rows for every intermediate field state.
    pub fn intermediates_csv(&self) -> String {
        let mut out = String::from("k,n,re,im\n");
        for (k, state) in self.intermediates.iter().enumerate() {
            for (n, a) in state.amplitudes().iter().enumerate() {
                let _ = writeln!(out, "{k},{n},{},{}", sig(a.re), sig(a.im));
            }
        }
        out
    }
}

/// Run the protocol forward from the vacuum, post-selecting every atom in
/// the ground state.
pub fn simulate(plan: &GenerationPlan) -> Result<Simulation> {
    let mut state = FockVector::vacuum(1);
    let mut success_prob = 1.0;
    let mut intermediates = vec![state.clone()];
    for (&eps, &g) in plan.epsilons.iter().zip(&plan.gtau) {
        let (next, prob) = project_ground(&jc_interact(&state, eps, g))?;
        success_prob *= prob;
        state = next;
        intermediates.push(state.clone());
    }
    let fidelity = plan.target.inner(&state).norm();
    Ok(Simulation {
        final_state: state,
        fidelity,
        success_prob,
        intermediates,
    })
}
