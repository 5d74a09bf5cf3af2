//! CSV series for the fidelity, test-comparison, noise, and trace-distance curves.
//!
//! Shot columns hold ceiled counts; a count above 2^63 is written as its raw
//! value in exponent form instead.

use std::io::{self, BufWriter, Write};

use qshot::report::format_sig;
use qshot::shot_estimators::{
    shots_inverse_ideal, shots_inverse_real, shots_mixed_bounds,
    shots_mixed_bounds_from_trace_distance, shots_pure, shots_pure_from_trace_distance,
    shots_pure_mixed_bounds_from_trace_distance, shots_swap_ideal, shots_swap_real, Formula,
    ShotEstimate,
};
use qshot::stat_power::{
    lambda_noncentral, two_proportion_shots, w2_fidelity_attaining, w2_small_discrepancy,
};

use crate::args::{CurveArgs, CurveId, Scale};
use crate::{CmdResult, Failure};

struct Range {
    start: f64,
    stop: f64,
    points: usize,
    scale: Scale,
}

struct Defaults {
    range: Range,
    p_e: f64,
}

fn defaults(id: CurveId) -> Defaults {
    let (start, stop, points, scale, p_e) = match id {
        CurveId::FidVsShots => (0.001, 0.99999, 200, Scale::LogComplement, 0.05),
        CurveId::TestComparison => (0.900, 0.995, 96, Scale::Linear, 0.01),
        CurveId::NoiseBinomial => (0.991, 1.000, 10, Scale::Linear, 0.01),
        CurveId::TraceVsShots => (0.001, 0.999, 200, Scale::Log, 0.05),
    };
    Defaults {
        range: Range {
            start,
            stop,
            points,
            scale,
        },
        p_e,
    }
}

impl Range {
    fn validate(&self) -> Result<(), Failure> {
        if !(self.start < self.stop) {
            return Err(Failure::Input(format!(
                "range start {} must be below stop {}",
                self.start, self.stop
            )));
        }
        if self.points < 2 {
            return Err(Failure::Input(format!(
                "need at least 2 points, got {}",
                self.points
            )));
        }
        match self.scale {
            Scale::Log if !(self.start > 0.0) => {
                Err(Failure::Input("log scale needs a positive start".into()))
            }
            Scale::LogComplement if !(self.stop < 1.0) => Err(Failure::Input(
                "log-complement scale needs stop below 1".into(),
            )),
            _ => Ok(()),
        }
    }

    /// Grid values rounded to 12 significant digits so the CSV reads cleanly.
    fn values(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i == 0 {
                    return self.start;
                }
                if i + 1 == self.points {
                    return self.stop;
                }
                let t = i as f64 / last;
                let x = match self.scale {
                    Scale::Linear => self.start + t * (self.stop - self.start),
                    Scale::Log => (self.start.ln() + t * (self.stop.ln() - self.start.ln())).exp(),
                    Scale::LogComplement => {
                        let (a, b) = ((1.0 - self.start).ln(), (1.0 - self.stop).ln());
                        1.0 - (a + t * (b - a)).exp()
                    }
                };
                format_sig(x, 12).parse().expect("format_sig emits a float")
            })
            .collect()
    }
}

fn cell(e: &ShotEstimate) -> String {
    if e.is_feasible() {
        e.shots.to_string()
    } else {
        format!("{:e}", e.raw)
    }
}

fn label(x: f64) -> String {
    format_sig(x, 12)
}

/// `1 - x` loses digits to cancellation; 10 significant digits hides the noise.
fn complement_label(x: f64) -> String {
    format_sig(1.0 - x, 10)
}

pub fn curve(a: &CurveArgs) -> CmdResult {
    let d = defaults(a.curve);
    let range = Range {
        start: a.start.unwrap_or(d.range.start),
        stop: a.stop.unwrap_or(d.range.stop),
        points: a.points.unwrap_or(d.range.points),
        scale: a.scale.unwrap_or(d.range.scale),
    };
    range.validate()?;
    let p_e = a.pe.unwrap_or(d.p_e);
    let xs = range.values();

    let (header, rows) = match a.curve {
        CurveId::FidVsShots => fid_vs_shots(&xs, p_e)?,
        CurveId::TestComparison => test_comparison(&xs, p_e, a)?,
        CurveId::NoiseBinomial => noise_binomial(&xs, p_e, a)?,
        CurveId::TraceVsShots => trace_vs_shots(&xs, p_e)?,
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let write = |out: &mut BufWriter<_>| -> io::Result<()> {
        writeln!(out, "{}", header.join(","))?;
        for row in &rows {
            writeln!(out, "{}", row.join(","))?;
        }
        out.flush()
    };
    match write(&mut out) {
        // a closed pipe (e.g. `| head`) just means the reader has seen enough
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
            Err(Failure::Input(format!("cannot write output: {e}")))
        }
        _ => Ok(()),
    }
}

type Table = (Vec<String>, Vec<Vec<String>>);

fn header(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn fid_vs_shots(xs: &[f64], p_e: f64) -> Result<Table, Failure> {
    let mut rows = Vec::with_capacity(xs.len());
    for &f in xs {
        let pure = shots_pure(f, p_e)?;
        let mixed = shots_mixed_bounds(f, p_e)?;
        rows.push(vec![
            label(f),
            complement_label(f),
            cell(&pure),
            cell(&mixed.lower),
            cell(&mixed.upper),
        ]);
    }
    Ok((
        header(&["F", "one_minus_F", "n_pure", "n_mixed_lo", "n_mixed_hi"]),
        rows,
    ))
}

fn test_comparison(xs: &[f64], p_e: f64, a: &CurveArgs) -> Result<Table, Failure> {
    if a.bins.iter().any(|&k| k < 2) {
        return Err(Failure::Input(
            "every --bins value must be at least 2".into(),
        ));
    }
    let lambdas = a
        .bins
        .iter()
        .map(|&k| lambda_noncentral((k - 1) as u32, a.alpha, 1.0 - a.beta))
        .collect::<Result<Vec<_>, _>>()?;

    let mut names = header(&["F", "n_inverse", "n_swap"]);
    for k in &a.bins {
        names.push(format!("n_chisq_small_k{k}"));
        names.push(format!("n_chisq_attaining_k{k}"));
    }
    let mut rows = Vec::with_capacity(xs.len());
    for &f in xs {
        let mut row = vec![
            label(f),
            cell(&shots_inverse_ideal(f, p_e)?),
            cell(&shots_swap_ideal(f, p_e)?),
        ];
        let (small, attaining) = (w2_small_discrepancy(f)?, w2_fidelity_attaining(f)?);
        for &lambda in &lambdas {
            row.push(cell(&ShotEstimate::from_raw(
                lambda / small,
                Formula::ChiSquareSmallDiscrepancy,
            )));
            row.push(cell(&ShotEstimate::from_raw(
                lambda / attaining,
                Formula::ChiSquareFidelityAttaining,
            )));
        }
        rows.push(row);
    }
    Ok((names, rows))
}

fn noise_binomial(xs: &[f64], p_e: f64, a: &CurveArgs) -> Result<Table, Failure> {
    let mut names = header(&["q0"]);
    for q1 in &a.q1 {
        let q1 = label(*q1);
        names.push(format!("n_binomial_q1_{q1}"));
        names.push(format!("n_inverse_real_q1_{q1}"));
        names.push(format!("n_swap_real_q1_{q1}"));
    }
    // The QCB-based counts treat q1 as the fidelity to certify.
    let qcb =
        a.q1.iter()
            .map(|&q1| {
                Ok((
                    shots_inverse_real(q1, p_e, a.regime_factor)?,
                    shots_swap_real(q1, p_e, a.regime_factor)?,
                ))
            })
            .collect::<Result<Vec<_>, qshot::Error>>()?;
    let mut rows = Vec::with_capacity(xs.len());
    for &q0 in xs {
        let mut row = vec![label(q0)];
        for (&q1, (inverse, swap)) in a.q1.iter().zip(&qcb) {
            let plan = two_proportion_shots(q0, q1, a.alpha, a.beta)?;
            row.push(cell(&plan.estimate));
            row.push(cell(inverse));
            row.push(cell(swap));
        }
        rows.push(row);
    }
    Ok((names, rows))
}

fn trace_vs_shots(xs: &[f64], p_e: f64) -> Result<Table, Failure> {
    let mut rows = Vec::with_capacity(xs.len());
    for &t in xs {
        let pure = shots_pure_from_trace_distance(t, p_e)?;
        let pm = shots_pure_mixed_bounds_from_trace_distance(t, p_e)?;
        let mixed = shots_mixed_bounds_from_trace_distance(t, p_e)?;
        rows.push(vec![
            label(t),
            complement_label(t),
            cell(&pure),
            cell(&pm.lower),
            cell(&pm.upper),
            cell(&mixed.lower),
            cell(&mixed.upper),
        ]);
    }
    Ok((
        header(&[
            "T",
            "one_minus_T",
            "n_pure",
            "n_pm_lo",
            "n_pm_hi",
            "n_mixed_lo",
            "n_mixed_hi",
        ]),
        rows,
    ))
}
