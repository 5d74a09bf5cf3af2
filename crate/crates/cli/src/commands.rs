use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use qshot::budget::ProgramSpec;
use qshot::mc_validator::{
    simulate_binomial_detection, simulate_chisq_power, simulate_inverse_miss_rate,
    simulate_swap_miss_rate, McConfig, McResult,
};
use qshot::report::format_sig;
use qshot::rng::ALGORITHM;
use qshot::shot_estimators::{
    shots_from_q, shots_inverse_ideal, shots_inverse_real, shots_mixed_bounds,
    shots_mixed_bounds_from_trace_distance, shots_pure, shots_pure_from_trace_distance,
    shots_swap_ideal, shots_swap_real, Formula, ShotBounds, ShotEstimate,
};
use qshot::stat_power::{
    binomial_decision, binomial_exact_power, chi2_distance, chisq_power, chisq_validity,
    shots_chisq, shots_chisq_fidelity_attaining, shots_chisq_small_discrepancy,
    two_proportion_shots, w2_fidelity_attaining, w2_small_discrepancy, Distribution,
};
use qshot::states::{fidelity, parse_state, q_bounds_mixed, qcb_q, trace_distance};

use crate::args::{
    BudgetArgs, ChisqArgs, ChisqCase, NoiseArgs, OutputFormat, QcbArgs, Scenario, ShotsArgs,
    TestKind, ValidateArgs,
};
use crate::{CmdResult, Failure};

/// Half-width of the Monte Carlo acceptance band, in standard errors.
const BAND_SE: f64 = 4.0;

/// `Q` this close to 1 is reported as indistinguishable.
const Q_DEGENERATE: f64 = 1e-12;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn read_distribution(path: &Path) -> Result<Distribution, Failure> {
    Distribution::from_json(&read(path)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn print_json(value: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("JSON values always serialize")
    );
}

fn print_rows(rows: &[(&str, String)]) {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (key, value) in rows {
        println!("{key:<width$}  {value}");
    }
}

fn shots_text(e: &ShotEstimate) -> String {
    if e.is_feasible() {
        e.shots.to_string()
    } else {
        format!("infeasible (raw {} exceeds 2^63)", format_sig(e.raw, 6))
    }
}

fn estimate_rows(rows: &mut Vec<(&str, String)>, e: &ShotEstimate) {
    rows.push(("formula", e.formula.to_string()));
    rows.push(("raw", format_sig(e.raw, 6)));
    rows.push(("shots", shots_text(e)));
    if e.conservative {
        rows.push(("reading", e.interpretation().to_string()));
    }
}

fn bounds_rows(rows: &mut Vec<(&'static str, String)>, b: &ShotBounds) {
    rows.push(("lower formula", b.lower.formula.to_string()));
    rows.push(("lower raw", format_sig(b.lower.raw, 6)));
    rows.push(("lower shots", shots_text(&b.lower)));
    rows.push(("upper formula", b.upper.formula.to_string()));
    rows.push(("upper raw", format_sig(b.upper.raw, 6)));
    rows.push(("upper shots", shots_text(&b.upper)));
}

pub fn shots(a: &ShotsArgs) -> CmdResult {
    if a.regime_factor.is_some() && !matches!(a.test, TestKind::Inverse | TestKind::Swap) {
        return Err(Failure::Input(
            "--regime-factor applies to the inverse and swap tests only".into(),
        ));
    }
    // Inverse and swap act on pure states, where F = 1 - T^2.
    let fid = match (a.fidelity, a.trace_distance) {
        (Some(f), _) => f,
        (None, Some(t)) => {
            if !(0.0..=1.0).contains(&t) {
                return Err(qshot::Error::Domain(format!(
                    "trace distance = {t} must lie in [0, 1]"
                ))
                .into());
            }
            1.0 - t * t
        }
        (None, None) => unreachable!("clap requires one of --fidelity, --trace-distance"),
    };

    enum Answer {
        One(ShotEstimate),
        Two(ShotBounds),
    }
    let answer = match (a.test, a.trace_distance) {
        (TestKind::Inverse, _) => Answer::One(match a.regime_factor {
            Some(r) => shots_inverse_real(fid, a.pe, r)?,
            None => shots_inverse_ideal(fid, a.pe)?,
        }),
        (TestKind::Swap, _) => Answer::One(match a.regime_factor {
            Some(r) => shots_swap_real(fid, a.pe, r)?,
            None => shots_swap_ideal(fid, a.pe)?,
        }),
        (TestKind::Pure, Some(t)) if a.fidelity.is_none() => {
            Answer::One(shots_pure_from_trace_distance(t, a.pe)?)
        }
        (TestKind::Pure, _) => Answer::One(shots_pure(fid, a.pe)?),
        (TestKind::Mixed, Some(t)) if a.fidelity.is_none() => {
            Answer::Two(shots_mixed_bounds_from_trace_distance(t, a.pe)?)
        }
        (TestKind::Mixed, _) => Answer::Two(shots_mixed_bounds(fid, a.pe)?),
    };

    let test_name = format!("{:?}", a.test).to_lowercase();
    if a.json {
        let mut doc = json!({
            "test": test_name,
            "fidelity": a.fidelity,
            "trace_distance": a.trace_distance,
            "p_e": a.pe,
            "regime_factor": a.regime_factor,
        });
        match answer {
            Answer::One(e) => doc["estimate"] = json!(e),
            Answer::Two(b) => doc["bounds"] = json!(b),
        }
        print_json(&doc);
        return Ok(());
    }

    let mut rows = vec![("test", test_name)];
    match (a.fidelity, a.trace_distance) {
        (Some(f), _) => rows.push(("fidelity", f.to_string())),
        (None, Some(t)) => rows.push(("trace distance", t.to_string())),
        _ => {}
    }
    rows.push(("P_e", a.pe.to_string()));
    if let Some(r) = a.regime_factor {
        rows.push(("regime factor", r.to_string()));
    }
    match answer {
        Answer::One(e) => estimate_rows(&mut rows, &e),
        Answer::Two(b) => bounds_rows(&mut rows, &b),
    }
    print_rows(&rows);
    Ok(())
}

pub fn qcb(a: &QcbArgs) -> CmdResult {
    let load = |path: &Path| {
        parse_state(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    };
    if let Some(pe) = a.pe.filter(|&pe| !(pe > 0.0 && pe < 1.0)) {
        return Err(Failure::Input(format!("P_e = {pe} must lie in (0, 1)")));
    }
    let rho = load(&a.rho)?.to_density();
    let sigma = load(&a.sigma)?.to_density();
    let result = qcb_q(&rho, &sigma)?;
    let f = fidelity(&rho, &sigma)?;
    let t = trace_distance(&rho, &sigma)?;
    let (q_lo, q_hi) = q_bounds_mixed(f)?;
    let degenerate = result.q >= 1.0 - Q_DEGENERATE;
    let shots = match a.pe {
        Some(_) if degenerate => None,
        // orthogonal supports: one shot always tells them apart
        Some(_) if result.q == 0.0 => Some(ShotEstimate::single_shot(Formula::FromQ)),
        Some(pe) => Some(shots_from_q(result.q, pe)?),
        None => None,
    };

    if a.json {
        print_json(&json!({
            "q": result.q,
            "s_star": result.s_star,
            "exponent": result.exponent,
            "fidelity": f,
            "trace_distance": t,
            "q_bounds": [q_lo, q_hi],
            "p_e": a.pe,
            "estimate": shots,
            "indistinguishable": degenerate,
        }));
    } else {
        let mut rows = vec![
            ("Q", format_sig(result.q, 10)),
            ("s*", format_sig(result.s_star, 6)),
            ("xi_QCB", format_sig(result.exponent, 6)),
            ("fidelity", format_sig(f, 10)),
            ("trace distance", format_sig(t, 10)),
            (
                "Q bounds",
                format!("[{}, {}]", format_sig(q_lo, 6), format_sig(q_hi, 6)),
            ),
        ];
        if let (Some(pe), Some(e)) = (a.pe, &shots) {
            rows.push(("P_e", pe.to_string()));
            estimate_rows(&mut rows, e);
        }
        print_rows(&rows);
    }
    if degenerate {
        return Err(Failure::Degenerate(
            qshot::Error::DegenerateStates.to_string(),
        ));
    }
    Ok(())
}

pub fn chisq(a: &ChisqArgs) -> CmdResult {
    let files = match (&a.p, &a.q) {
        (Some(p), Some(q)) => Some((read_distribution(p)?, read_distribution(q)?)),
        _ => None,
    };
    let k = match (&files, a.bins) {
        (Some((p, q)), bins) => {
            if p.k() != q.k() {
                return Err(Failure::Input(format!(
                    "--p has {} bins but --q has {}",
                    p.k(),
                    q.k()
                )));
            }
            if let Some(b) = bins.filter(|&b| b != p.k()) {
                return Err(Failure::Input(format!(
                    "--bins {b} disagrees with the {} bins in the files",
                    p.k()
                )));
            }
            p.k()
        }
        (None, Some(b)) => b,
        (None, None) => return Err(Failure::Input("--bins is required without --p/--q".into())),
    };

    let w2 = match (a.w2, a.fidelity, &files) {
        (Some(w), _, _) => w,
        (_, Some(f), _) => match a.case.expect("clap ties --case to --fidelity") {
            ChisqCase::Attaining => w2_fidelity_attaining(f)?,
            ChisqCase::Small => w2_small_discrepancy(f)?,
        },
        (_, _, Some((p, q))) => chi2_distance(p, q)?,
        _ => unreachable!("clap requires one effect-size source"),
    };
    if w2 == 0.0 {
        return Err(Failure::Degenerate("no detectable effect: w^2 = 0".into()));
    }
    let plan = match (a.fidelity, a.case) {
        (Some(f), Some(ChisqCase::Attaining)) => {
            shots_chisq_fidelity_attaining(f, k, a.alpha, a.beta)?
        }
        (Some(f), Some(ChisqCase::Small)) => shots_chisq_small_discrepancy(f, k, a.alpha, a.beta)?,
        _ => shots_chisq(w2, k, a.alpha, a.beta)?,
    };
    let null = match &files {
        Some((_, q)) => q.clone(),
        None => Distribution::uniform(k)?,
    };
    let warnings = chisq_validity(plan.shots(), &null);

    if a.json {
        print_json(&json!({
            "bins": k,
            "df": plan.df,
            "alpha": a.alpha,
            "beta": a.beta,
            "lambda": plan.lambda,
            "w2": plan.w2,
            "estimate": plan.estimate,
            "warnings": warnings.iter().map(|w| json!({"detail": w, "message": w.to_string()})).collect::<Vec<_>>(),
        }));
        return Ok(());
    }
    let mut rows = vec![
        ("bins", k.to_string()),
        ("df", plan.df.to_string()),
        ("alpha", a.alpha.to_string()),
        ("beta", a.beta.to_string()),
        ("lambda", format_sig(plan.lambda, 6)),
        ("w^2", format_sig(plan.w2, 6)),
    ];
    estimate_rows(&mut rows, &plan.estimate);
    print_rows(&rows);
    for w in &warnings {
        println!("warning: {w}");
    }
    Ok(())
}

pub fn noise(a: &NoiseArgs) -> CmdResult {
    if let (Some(q1), Some(beta)) = (a.q1, a.beta) {
        let plan = two_proportion_shots(a.q0, q1, a.alpha, beta)?;
        if a.json {
            print_json(&json!({ "mode": "plan", "plan": plan }));
        } else {
            let mut rows = vec![
                ("q0", a.q0.to_string()),
                ("q1", q1.to_string()),
                ("alpha", a.alpha.to_string()),
                ("beta", beta.to_string()),
                ("test", "one-sided two-proportion z-test".to_string()),
            ];
            estimate_rows(&mut rows, &plan.estimate);
            print_rows(&rows);
        }
        return Ok(());
    }
    let (zeros, shots) = match (a.zeros, a.shots) {
        (Some(z), Some(n)) => (z, n),
        _ => unreachable!("clap requires --q1 or --zeros with --shots"),
    };
    let decision = binomial_decision(zeros, shots, a.q0, a.alpha)?;
    let verdict = if decision.reject { "reject" } else { "accept" };
    if a.json {
        print_json(&json!({
            "mode": "decide",
            "q0": a.q0,
            "alpha": a.alpha,
            "zeros": zeros,
            "shots": shots,
            "p_value": decision.p_value,
            "reject": decision.reject,
        }));
    } else {
        print_rows(&[
            ("q0", a.q0.to_string()),
            ("alpha", a.alpha.to_string()),
            ("zeros", format!("{zeros} of {shots}")),
            ("p-value", format_sig(decision.p_value, 6)),
            ("decision", format!("{verdict} H0 (rate = q0)")),
        ]);
    }
    Ok(())
}

pub fn budget(a: &BudgetArgs) -> CmdResult {
    let text = read(&a.spec)?;
    let spec = ProgramSpec::from_json(&text)
        .map_err(|e| Failure::Input(format!("{}: {e}", a.spec.display())))?;
    let report = spec.allocate()?;
    match a.out {
        OutputFormat::Table => print!("{}", report.to_table()),
        OutputFormat::Csv => print!("{}", report.to_csv()),
        OutputFormat::Json => print_json(&json!(report)),
    }
    let infeasible: Vec<&str> = report
        .infeasible_blocks()
        .map(|b| b.name.as_str())
        .collect();
    if !infeasible.is_empty() {
        eprintln!(
            "warning: blocks needing more than 2^63 shots: {}",
            infeasible.join(", ")
        );
        if a.strict {
            return Err(Failure::Check);
        }
    }
    Ok(())
}

/// Expected rate of the simulated event and whether the band is one-sided.
struct Expectation {
    value: f64,
    one_sided: bool,
    shots: u64,
}

pub fn validate(a: &ValidateArgs) -> CmdResult {
    let cfg = McConfig::new(a.trials, a.seed)?;
    let mut extra = serde_json::Map::new();
    let (expectation, result) = match a.scenario {
        Scenario::Inverse | Scenario::Swap => {
            let f = a
                .fidelity
                .ok_or_else(|| Failure::Input("--fidelity is required for this scenario".into()))?;
            let inverse = a.scenario == Scenario::Inverse;
            let shots = match a.shots {
                Some(n) => n,
                None if inverse => shots_inverse_ideal(f, a.pe)?.shots,
                None => shots_swap_ideal(f, a.pe)?.shots,
            };
            let accept: f64 = if inverse { f } else { 0.5 + 0.5 * f };
            let result = if inverse {
                simulate_inverse_miss_rate(f, shots, &cfg)?
            } else {
                simulate_swap_miss_rate(f, shots, &cfg)?
            };
            extra.insert("fidelity".into(), json!(f));
            let value = accept.powf(shots as f64);
            (
                Expectation {
                    value,
                    one_sided: false,
                    shots,
                },
                result,
            )
        }
        Scenario::Chisq => {
            let (p, q) = match (&a.p, &a.q) {
                (Some(p), Some(q)) => (read_distribution(p)?, read_distribution(q)?),
                (None, Some(q)) => {
                    let q = read_distribution(q)?;
                    (q.clone(), q)
                }
                _ => (
                    Distribution::uniform(a.bins)?,
                    Distribution::uniform(a.bins)?,
                ),
            };
            let w2 = chi2_distance(&p, &q)?;
            let shots = match a.shots {
                Some(n) => n,
                None if w2 == 0.0 => 1000,
                None => shots_chisq(w2, p.k(), a.alpha, a.beta)?.shots(),
            };
            let run = simulate_chisq_power(&p, &q, shots, a.alpha, &cfg)?;
            for w in &run.warnings {
                eprintln!("warning: {w}");
            }
            extra.insert("bins".into(), json!(p.k()));
            extra.insert("w2".into(), json!(w2));
            extra.insert("critical_value".into(), json!(run.critical_value));
            extra.insert(
                "warnings".into(),
                json!(run
                    .warnings
                    .iter()
                    .map(|w| w.to_string())
                    .collect::<Vec<_>>()),
            );
            // Under H0 the rejection rate is alpha; under H1 the noncentral
            // approximation is only asymptotic, so only a shortfall fails.
            let expectation = if w2 == 0.0 {
                Expectation {
                    value: a.alpha,
                    one_sided: false,
                    shots,
                }
            } else {
                let df = (p.k() - 1) as u32;
                let value = chisq_power(df, a.alpha, shots as f64 * w2)?;
                Expectation {
                    value,
                    one_sided: true,
                    shots,
                }
            };
            (expectation, run.result)
        }
        Scenario::Binomial => {
            let (q0, q1) = match (a.q0, a.q1) {
                (Some(q0), Some(q1)) => (q0, q1),
                _ => {
                    return Err(Failure::Input(
                        "--q0 and --q1 are required for this scenario".into(),
                    ))
                }
            };
            let shots = match a.shots {
                Some(n) => n,
                None => two_proportion_shots(q0, q1, a.alpha, a.beta)?.shots(),
            };
            let result = simulate_binomial_detection(q0, q1, shots, a.alpha, &cfg)?;
            let value = binomial_exact_power(shots, q0, q1, a.alpha)?;
            extra.insert("q0".into(), json!(q0));
            extra.insert("q1".into(), json!(q1));
            (
                Expectation {
                    value,
                    one_sided: false,
                    shots,
                },
                result,
            )
        }
    };
    report_validation(a, &cfg, &expectation, &result, extra)
}

fn report_validation(
    a: &ValidateArgs,
    cfg: &McConfig,
    expected: &Expectation,
    result: &McResult,
    extra: serde_json::Map<String, Value>,
) -> CmdResult {
    let z = result.z_score(expected.value);
    let pass = if expected.one_sided {
        z >= -BAND_SE
    } else {
        z.abs() <= BAND_SE
    };
    let verdict = if pass { "PASS" } else { "FAIL" };
    let scenario = format!("{:?}", a.scenario).to_lowercase();
    if a.json {
        let mut doc = json!({
            "scenario": scenario,
            "shots": expected.shots,
            "trials": cfg.trials,
            "seed": cfg.seed,
            "rng": ALGORITHM,
            "result": result,
            "expected": expected.value,
            "z": z,
            "band_se": BAND_SE,
            "one_sided": expected.one_sided,
            "pass": pass,
        });
        doc.as_object_mut().expect("object literal").extend(extra);
        print_json(&doc);
    } else {
        let band = if expected.one_sided {
            format!(">= expected - {BAND_SE} SE")
        } else {
            format!("expected +- {BAND_SE} SE")
        };
        print_rows(&[
            ("scenario", scenario),
            ("shots", expected.shots.to_string()),
            ("trials", cfg.trials.to_string()),
            ("seed", format!("{} ({ALGORITHM})", cfg.seed)),
            ("estimate", format_sig(result.estimate, 6)),
            ("standard error", format_sig(result.standard_error, 6)),
            (
                "95% CI",
                format!(
                    "[{}, {}]",
                    format_sig(result.ci95.0, 6),
                    format_sig(result.ci95.1, 6)
                ),
            ),
            ("expected", format_sig(expected.value, 6)),
            ("z", format_sig(z, 4)),
            ("band", band),
            ("verdict", verdict.to_string()),
        ]);
    }
    if pass {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}
