//! Simulated rates against their closed forms, and the QCB grid oracle against `qcb_q`.

use qshot::mc_validator::{
    qcb_grid_oracle, simulate_binomial_detection, simulate_chisq_power, simulate_inverse_miss_rate,
    simulate_swap_miss_rate, McConfig,
};
use qshot::rng::Stream;
use qshot::stat_power::{
    chi2_distance, chisq_power, shots_chisq, two_proportion_shots, Distribution,
};
use qshot::states::{qcb_q, random};

const TRIALS: u64 = 100_000;

#[test]
fn miss_rates_match_closed_forms() {
    let cfg = McConfig::new(TRIALS, 7).unwrap();
    for f in [0.9f64, 0.99, 0.999] {
        for n in [10u64, 100, 1000] {
            let inverse = simulate_inverse_miss_rate(f, n, &cfg).unwrap();
            let expected = f.powi(n as i32);
            assert!(
                inverse.within(expected, 4.0),
                "inverse F={f} N={n}: {inverse:?} vs {expected}"
            );

            let swap = simulate_swap_miss_rate(f, n, &cfg).unwrap();
            let expected = (0.5 + 0.5 * f).powi(n as i32);
            assert!(
                swap.within(expected, 4.0),
                "swap F={f} N={n}: {swap:?} vs {expected}"
            );
        }
    }
}

#[test]
fn reference_shot_counts_hit_the_target_miss_rate() {
    let cfg = McConfig::new(TRIALS, 42).unwrap();
    let cases = [
        ("inverse", 0.99, 458u64),
        ("swap", 0.99, 919),
        ("swap", 0.999, 9208),
    ];
    for (test, f, n) in cases {
        let r = if test == "inverse" {
            simulate_inverse_miss_rate(f, n, &cfg).unwrap()
        } else {
            simulate_swap_miss_rate(f, n, &cfg).unwrap()
        };
        assert!(r.within(0.01, 4.0), "{test} F={f} N={n}: {r:?}");
    }
}

#[test]
fn chisq_type_one_error_is_calibrated() {
    let q = Distribution::uniform(16).unwrap();
    let cfg = McConfig::new(TRIALS, 3).unwrap();
    for alpha in [0.01, 0.05] {
        let run = simulate_chisq_power(&q, &q, 400, alpha, &cfg).unwrap();
        assert!(
            run.result.within(alpha, 4.0),
            "alpha={alpha}: {:?}",
            run.result
        );
        assert!(run.warnings.is_empty());
    }
}

#[test]
fn chisq_planned_shots_reach_the_planned_power() {
    let q = Distribution::uniform(8).unwrap();
    let p = Distribution::new(vec![0.16, 0.09, 0.16, 0.09, 0.125, 0.125, 0.125, 0.125]).unwrap();
    let (alpha, beta) = (0.05, 0.1);
    let w2 = chi2_distance(&p, &q).unwrap();
    let n = shots_chisq(w2, 8, alpha, beta).unwrap().shots();
    let run = simulate_chisq_power(&p, &q, n, alpha, &McConfig::new(20_000, 5).unwrap()).unwrap();
    let r = run.result;
    assert!(
        r.estimate >= 1.0 - beta - 4.0 * r.standard_error,
        "{r:?} at N={n}"
    );
    let asymptotic = chisq_power(7, alpha, n as f64 * w2).unwrap();
    assert!(
        (r.estimate - asymptotic).abs() < 0.03,
        "{r:?} vs {asymptotic}"
    );
}

#[test]
fn planned_binomial_shots_detect_the_drop() {
    let (q0, q1, alpha, beta) = (0.95, 0.9, 0.01, 0.05);
    let n = two_proportion_shots(q0, q1, alpha, beta).unwrap().shots();
    let r =
        simulate_binomial_detection(q0, q1, n, alpha, &McConfig::new(20_000, 9).unwrap()).unwrap();
    assert!(
        r.estimate >= 1.0 - beta - 4.0 * r.standard_error,
        "{r:?} at N={n}"
    );
}

#[test]
fn grid_oracle_agrees_with_qcb_q() {
    let mut rng = Stream::new(2024);
    for i in 0..50 {
        let qubits = 1 + (i % 3) as u32;
        let rho = random::mixed_state(&mut rng, qubits);
        let sigma = random::mixed_state(&mut rng, qubits);
        let (grid_q, _) = qcb_grid_oracle(&rho, &sigma, 100_000).unwrap();
        let q = qcb_q(&rho, &sigma).unwrap().q;
        assert!((grid_q - q).abs() <= 1e-6, "pair {i}: grid {grid_q} vs {q}");
        assert!(q <= grid_q + 1e-12, "pair {i}: refinement lost to the grid");
    }
}
