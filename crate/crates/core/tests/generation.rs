mod common;

use std::f64::consts::PI;

use common::{all_params, c, jc_ground_branch, random_complex, random_state, rng};
use flncs::error::Error;
use flncs::generation::{
    jc_interact, plan, plan_with, project_ground, simulate, uniform_schedule, Candidate,
    DEFAULT_GTAU,
};
use flncs::states::flncs;
use flncs::{Branch, FockVector, ModelParams};

#[test]
fn passage_matches_matrix_exponential() {
    let mut r = rng(3);
    for dim in 1..7 {
        let field = random_state(&mut r, dim);
        let eps = random_complex(&mut r, 2.0);
        let g = 0.3 + 0.2 * dim as f64;
        let joint = jc_interact(&FockVector::normalized(field.clone()).unwrap(), eps, g);
        let want = jc_ground_branch(&field, eps, g);
        for (a, b) in joint.field_b.amplitudes().iter().zip(&want) {
            assert!((a - b).norm() < 1e-12, "dim {dim}");
        }
    }
}

#[test]
fn passage_is_unitary() {
    let mut r = rng(5);
    for i in 0..100 {
        let dim = 1 + i % 9;
        let field = FockVector::normalized(random_state(&mut r, dim)).unwrap();
        let eps = random_complex(&mut r, 3.0);
        let g = (i as f64 * 0.137) % 3.0 + 0.01;
        let joint = jc_interact(&field, eps, g);
        assert!((joint.norm_sqr() - 1.0).abs() < 1e-12, "sample {i}");
        assert_eq!(joint.field_a.dim(), dim + 1);
    }
}

#[test]
fn first_atom_parameter_closed_form() {
    // one atom on the vacuum gives (iε, -i sin gτ); matching d₀/d₁ = √ρ(1) = 3/(4√2)
    let target = flncs(&ModelParams::new(1, Branch::Second), c(1.0, 0.0));
    let p = plan(&target, &[PI / 5.0]).unwrap();
    let want = -(PI / 5.0).sin() * 3.0 / (4.0 * 2f64.sqrt());
    assert!((p.epsilons[0] - c(want, 0.0)).norm() < 1e-12);
    let sim = simulate(&p).unwrap();
    assert!((sim.success_prob - p.success_prob).abs() < 1e-12);
}

#[test]
fn round_trip_for_all_small_shells() {
    for p in all_params(6) {
        for z in [c(0.3, 0.0), c(1.0, 0.0), c(3.0, 0.0), c(0.5, -1.2)] {
            let target = flncs(&p, z);
            let pl = plan(&target, &uniform_schedule(p.n(), DEFAULT_GTAU)).unwrap();
            assert_eq!(
                pl.all_roots.iter().map(Vec::len).collect::<Vec<_>>(),
                (1..=p.n()).collect::<Vec<_>>()
            );
            let sim = simulate(&pl).unwrap();
            assert!(sim.fidelity >= 1.0 - 1e-8, "{p} z={z}: {}", sim.fidelity);
            assert!(sim.success_prob > 0.0 && sim.success_prob <= 1.0);
            assert!((sim.success_prob - pl.success_prob).abs() < 1e-9 * pl.success_prob);
            assert_eq!(sim.intermediates.len(), p.n() + 1);
        }
    }
}

#[test]
fn any_admissible_root_reaches_the_target() {
    let target = flncs(&ModelParams::new(4, Branch::Third), c(1.2, 0.4));
    let schedule = [0.5, 0.7, 0.9, 1.1];
    for which in 0..4 {
        let pick = |step: usize, cands: &[Candidate]| {
            let ok: Vec<usize> = (0..cands.len())
                .filter(|&i| cands[i].probability > 1e-6)
                .collect();
            ok[(which + step) % ok.len()]
        };
        let pl = plan_with(&target, &schedule, pick).unwrap();
        let sim = simulate(&pl).unwrap();
        assert!(
            sim.fidelity >= 1.0 - 1e-8,
            "choice {which}: {}",
            sim.fidelity
        );
    }
}

#[test]
fn non_uniform_schedules() {
    let target =
        FockVector::normalized(vec![c(0.2, 0.1), c(-0.5, 0.3), c(0.1, 0.7), c(0.3, -0.1)]).unwrap();
    let pl = plan(&target, &[0.4, 1.3, 2.2]).unwrap();
    assert!(simulate(&pl).unwrap().fidelity >= 1.0 - 1e-8);
}

#[test]
fn rejected_inputs() {
    let target = flncs(&ModelParams::new(2, Branch::Second), c(1.0, 0.0));
    assert!(matches!(plan(&target, &[0.5]), Err(Error::Config(_))));
    assert!(matches!(
        plan(&target, &[0.5, PI]),
        Err(Error::DegenerateSchedule { step: 2, level: 1 })
    ));
    // sin(gτ √2) = 0 at gτ = π/√2
    assert!(matches!(
        plan(&target, &[0.5, PI / 2f64.sqrt()]),
        Err(Error::DegenerateSchedule { step: 2, level: 2 })
    ));
    let flat = FockVector::normalized(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
    assert!(matches!(
        plan(&flat, &[0.5, 0.5]),
        Err(Error::UnderdeterminedTarget { .. })
    ));
    // an excited atom whose decay channel is closed cannot be found in the ground state
    let joint = jc_interact(&FockVector::vacuum(1), c(0.0, 0.0), 2.0 * PI);
    assert!(matches!(
        project_ground(&joint),
        Err(Error::MeasurementImpossible { .. })
    ));
}

#[test]
fn intermediates_csv_layout() {
    let target = flncs(&ModelParams::new(2, Branch::First), c(0.7, 0.0));
    let sim = simulate(&plan(&target, &uniform_schedule(2, DEFAULT_GTAU)).unwrap()).unwrap();
    let csv = sim.intermediates_csv();
    let lines: Vec<_> = csv.lines().collect();
    assert_eq!(lines[0], "k,n,re,im");
    assert_eq!(lines.len(), 1 + 1 + 2 + 3);
    assert_eq!(lines[1], "0,0,1,0");
}
