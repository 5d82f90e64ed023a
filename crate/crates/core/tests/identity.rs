mod common;

use common::{all_params, pair_f64, params, rho as rho_oracle};
use flncs::identity::{log_space, moments_csv, strip_upper, verify_moments, WeightEvaluator};
use flncs::{Branch, ModelParams};
use statrs::function::gamma::gamma;

/// `w(x)` from the residues to the right of the contour. With
/// `M(s) = K 16^{1-s} Γ(s) Γ(a₁-s) Γ(a₂-s) Γ(a₃-s)` and simple poles at
/// `s = aⱼ + k`, `w(x) = Σⱼ Σₖ (-1)^k/k! · K 16^{1-s} Γ(s) Π_{i≠j} Γ(aᵢ-s) x^{-s}`.
/// The series converges for every `x > 0`; it is used here for moderate `x`.
fn weight_by_residues(p: &ModelParams, x: f64) -> f64 {
    let (a, b) = pair_f64(p.branch());
    let n = p.n() as f64;
    let poles = [n + 2.0, n + a + 1.0, n + b + 1.0];
    let k_norm = 1.0 / (gamma(n + 1.0) * gamma(n + a) * gamma(n + b));
    let mut total = 0.0;
    for (j, &aj) in poles.iter().enumerate() {
        let mut fact = 1.0;
        for k in 0..60 {
            if k > 0 {
                fact *= k as f64;
            }
            let s = aj + k as f64;
            let others: f64 = poles
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, &ai)| gamma(ai - s))
                .product();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            total += sign / fact * k_norm * 16f64.powf(1.0 - s) * gamma(s) * others * x.powf(-s);
        }
    }
    total
}

#[test]
fn weight_matches_residue_series() {
    for p in all_params(3) {
        let ev = WeightEvaluator::new(p).unwrap();
        for x in log_space(0.2, 50.0, 9) {
            let want = weight_by_residues(&p, x);
            let got = ev.weight(x).unwrap();
            assert!(
                (got - want).abs() < 1e-9 * want.abs().max(1e-3),
                "{p} x={x}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn weight_does_not_depend_on_the_contour() {
    for p in all_params(3) {
        let upper = strip_upper(&p);
        let a = WeightEvaluator::with_abscissa(p, 0.3 * upper).unwrap();
        let b = WeightEvaluator::with_abscissa(p, 0.7 * upper).unwrap();
        // away from x ~ 1 a fixed contour loses digits to cancellation
        for x in log_space(0.1, 3.0, 11) {
            let (wa, wb) = (a.weight(x).unwrap(), b.weight(x).unwrap());
            assert!(
                (wa - wb).abs() < 1e-9 * wa.abs().max(wb.abs()),
                "{p} x={x}: {wa} vs {wb}"
            );
        }
    }
}

#[test]
fn weight_is_non_negative() {
    for p in all_params(4) {
        let ev = WeightEvaluator::new(p).unwrap();
        let prof = ev.profile(&log_space(1e-4, 1e4, 81)).unwrap();
        assert!(prof.negative_points(1e-9).is_empty(), "{p}");
    }
}

#[test]
fn moments_reproduce_rho() {
    for p in all_params(3) {
        let reports = verify_moments(&WeightEvaluator::new(p).unwrap(), p.n()).unwrap();
        assert_eq!(reports.len(), p.n() + 1);
        for r in &reports {
            let want = rho_oracle(p.n(), p.branch(), r.n);
            assert!((r.analytic - want).abs() < 1e-12 * want);
            assert!(r.rel_error < 1e-6, "{p} n={}: {}", r.n, r.rel_error);
        }
    }
}

#[test]
fn moment_orders_beyond_the_shell_are_rejected() {
    let p = params(3, Branch::First);
    let err = verify_moments(&WeightEvaluator::new(p).unwrap(), 4).unwrap_err();
    assert_eq!(err.exit_code(), 1);
    assert!(err.to_string().contains("moment order exceeds N"));
}

#[test]
fn csv_layout() {
    let p = params(1, Branch::Second);
    let reports = verify_moments(&WeightEvaluator::new(p).unwrap(), 1).unwrap();
    let csv = moments_csv(&reports);
    let lines: Vec<_> = csv.lines().collect();
    assert_eq!(lines[0], "n,numeric,analytic,rel_error");
    let cols: Vec<_> = lines[2].split(',').collect();
    assert_eq!((cols[0], cols[2]), ("1", "0.28125"));
}
