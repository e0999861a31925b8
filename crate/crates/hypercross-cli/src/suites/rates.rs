//! Rate experiments: per ladder point, build the mode's witness, remove the
//! matching partial sum, measure the residual norm, and report it against
//! the closed-form predicted order.

use std::path::Path;
use std::time::Instant;

use hypercross::index_sets::q_set;
use hypercross::modulus::{omega1_derived, MixedModulus};
use hypercross::norms::{tensor_lebesgue_norm, tensor_lorentz_norm, ExponentVector};
use hypercross::spectral::CoefficientTensor;
use hypercross::witnesses::{build_f0, build_f1, build_f4, build_psi_f3, default_f1_block};

use crate::config::ExperimentConfig;
use crate::csv::write_csv;
use crate::suites::{
    config_modulus, exponent_vec, run_indexed, runtime, verify_monotonicity_hypotheses, CliError,
    RunOptions,
};

pub const HEADER: &str = "N,error,predicted,ratio,wall_ms";

/// Witness-driven rate modes. The name states which extremal function
/// drives the ladder and which normalization the prediction carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RateMode {
    /// Spread shell witness, logarithmically corrected rate.
    F0,
    /// Single-block witness, pure `1/N` rate.
    F1,
    /// Modulated-kernel witness with small summation exponents, `1/N` rate.
    F3Flat,
    /// Modulated-kernel witness with small integrability, log-corrected.
    F3Log,
    /// Step-cross witness at the boundary level.
    F4,
}

impl RateMode {
    fn from_name(name: &str) -> Option<RateMode> {
        match name {
            "f0" => Some(RateMode::F0),
            "f1" => Some(RateMode::F1),
            "f3-flat" => Some(RateMode::F3Flat),
            "f3-log" => Some(RateMode::F3Log),
            "f4" => Some(RateMode::F4),
            _ => None,
        }
    }
}

struct RateRow {
    n: u64,
    error: f64,
    predicted: f64,
    wall_ms: u128,
}

pub fn run(cfg: &ExperimentConfig, out: &Path, opts: RunOptions) -> Result<(), CliError> {
    let mode_name = cfg.require("rate")?;
    let mode = RateMode::from_name(mode_name).ok_or_else(|| {
        CliError::Validation(format!(
            "unknown rate mode `{}` (expected f0, f1, f3-flat, f3-log or f4)",
            mode_name
        ))
    })?;
    let m = cfg.usize_or("m", 2)?;
    let ladder = cfg.ladder("ladder")?;
    let threads = opts.threads;

    let rows = match mode {
        RateMode::F0 => run_f0(cfg, m, &ladder, opts, threads)?,
        RateMode::F1 => run_f1(cfg, m, &ladder, opts, threads)?,
        RateMode::F3Flat | RateMode::F3Log => {
            run_f3(cfg, m, &ladder, opts, threads, mode == RateMode::F3Log)?
        }
        RateMode::F4 => run_f4(cfg, m, &ladder, opts, threads)?,
    };

    for r in &rows {
        let ratio = r.error / r.predicted;
        if !(ratio.is_finite() && ratio > 0.0) {
            return Err(CliError::Runtime(format!(
                "degenerate rate row at N = {}: error {}, predicted {}",
                r.n, r.error, r.predicted
            )));
        }
    }
    let formatted: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{}",
                r.n,
                r.error,
                r.predicted,
                r.error / r.predicted,
                r.wall_ms
            )
        })
        .collect();
    write_csv(out, HEADER, &formatted).map_err(runtime)?;
    eprintln!("rates: wrote {} rows to {}", formatted.len(), out.display());
    Ok(())
}

fn shift_floor(p: &ExponentVector, q: &ExponentVector) -> Vec<f64> {
    p.values()
        .iter()
        .zip(q.values())
        .map(|(&pj, &qj)| 1.0 / pj - 1.0 / qj)
        .collect()
}

fn lorentz_residual_error(
    witness: &CoefficientTensor,
    omega_for_cross: &MixedModulus,
    n: f64,
    q: &ExponentVector,
    theta2: &ExponentVector,
    oversample: usize,
) -> Result<f64, CliError> {
    let cross = q_set(omega_for_cross, n).map_err(runtime)?;
    let residual = witness
        .sub(&witness.partial_sum(&cross))
        .map_err(runtime)?;
    tensor_lorentz_norm(&residual, q, theta2, oversample).map_err(runtime)
}

fn run_f0(
    cfg: &ExperimentConfig,
    m: usize,
    ladder: &[u64],
    opts: RunOptions,
    threads: usize,
) -> Result<Vec<RateRow>, CliError> {
    let omega = config_modulus(cfg)?;
    let l = omega.order();
    let p = exponent_vec(cfg, "p", m, ExponentVector::integrability)?;
    let q = exponent_vec(cfg, "q", m, ExponentVector::integrability)?;
    let tau = exponent_vec(cfg, "tau", m, ExponentVector::summation)?;
    let theta2 = exponent_vec(cfg, "theta2", m, ExponentVector::fine)?;
    for axis in 0..m {
        if theta2.values()[axis] >= tau.values()[axis] {
            return Err(CliError::Validation(format!(
                "spread-shell mode needs theta2[{axis}] < tau[{axis}]"
            )));
        }
        if p.values()[axis] >= q.values()[axis] {
            return Err(CliError::Validation(format!(
                "spread-shell mode needs p[{axis}] < q[{axis}]"
            )));
        }
    }
    verify_monotonicity_hypotheses(&omega, &shift_floor(&p, &q), "rate f0")?;
    let log_exp: f64 = theta2.values()[1..]
        .iter()
        .zip(&tau.values()[1..])
        .map(|(&t2, &t)| 1.0 / t2 - 1.0 / t)
        .sum();
    let omega1 = omega1_derived(&omega, &p, &q).map_err(runtime)?;
    run_indexed(ladder.len(), threads, |i| {
        let n = ladder[i] as f64;
        let start = Instant::now();
        let witness = build_f0(&omega, n, l, &p, &tau, &q).map_err(runtime)?;
        let error = lorentz_residual_error(&witness, &omega1, n, &q, &theta2, opts.oversample)?;
        let predicted = n.recip() * n.log2().powf(log_exp);
        Ok(RateRow {
            n: ladder[i],
            error,
            predicted,
            wall_ms: start.elapsed().as_millis(),
        })
    })
}

fn run_f1(
    cfg: &ExperimentConfig,
    m: usize,
    ladder: &[u64],
    opts: RunOptions,
    threads: usize,
) -> Result<Vec<RateRow>, CliError> {
    let omega = config_modulus(cfg)?;
    let l = omega.order();
    let p = exponent_vec(cfg, "p", m, ExponentVector::integrability)?;
    let q = exponent_vec(cfg, "q", m, ExponentVector::integrability)?;
    let tau = exponent_vec(cfg, "tau", m, ExponentVector::summation)?;
    let theta2 = exponent_vec(cfg, "theta2", m, ExponentVector::fine)?;
    for axis in 0..m {
        if tau.values()[axis] > theta2.values()[axis] {
            return Err(CliError::Validation(format!(
                "single-block mode needs tau[{axis}] <= theta2[{axis}]"
            )));
        }
        if p.values()[axis] >= q.values()[axis] {
            return Err(CliError::Validation(format!(
                "single-block mode needs p[{axis}] < q[{axis}]"
            )));
        }
    }
    verify_monotonicity_hypotheses(&omega, &shift_floor(&p, &q), "rate f1")?;
    let omega1 = omega1_derived(&omega, &p, &q).map_err(runtime)?;
    run_indexed(ladder.len(), threads, |i| {
        let n = ladder[i] as f64;
        let start = Instant::now();
        let s_tilde = default_f1_block(&omega, n, l, &p, &q).map_err(runtime)?;
        let witness = build_f1(&omega, n, l, &p, &q, &s_tilde).map_err(runtime)?;
        let error = lorentz_residual_error(&witness, &omega1, n, &q, &theta2, opts.oversample)?;
        Ok(RateRow {
            n: ladder[i],
            error,
            predicted: n.recip(),
            wall_ms: start.elapsed().as_millis(),
        })
    })
}

fn run_f3(
    cfg: &ExperimentConfig,
    m: usize,
    ladder: &[u64],
    opts: RunOptions,
    threads: usize,
    log_corrected: bool,
) -> Result<Vec<RateRow>, CliError> {
    let omega = config_modulus(cfg)?;
    let l = omega.order();
    let p = exponent_vec(cfg, "p", m, ExponentVector::integrability)?;
    let q = exponent_vec(cfg, "q", m, ExponentVector::integrability)?;
    let tau = exponent_vec(cfg, "tau", m, ExponentVector::summation)?;
    let theta2 = exponent_vec(cfg, "theta2", m, ExponentVector::fine)?;
    let c3 = cfg.f64_or("c3", 1.0)?;
    for axis in 0..m {
        if q.values()[axis] >= p.values()[axis] {
            return Err(CliError::Validation(format!(
                "kernel-spread mode needs q[{axis}] < p[{axis}]"
            )));
        }
    }
    if log_corrected {
        let p0 = p.values().iter().fold(f64::INFINITY, |a, &v| a.min(v));
        for axis in 0..m {
            if p.values()[axis] > 2.0 {
                return Err(CliError::Validation(format!(
                    "log-corrected kernel mode needs p[{axis}] <= 2"
                )));
            }
            if p0 >= tau.values()[axis] {
                return Err(CliError::Validation(format!(
                    "log-corrected kernel mode needs min(p) < tau[{axis}]"
                )));
            }
        }
    } else {
        for axis in 0..m {
            if p.values()[axis] < 2.0 {
                return Err(CliError::Validation(format!(
                    "flat kernel mode needs p[{axis}] >= 2"
                )));
            }
            if tau.values()[axis] > 2.0 {
                return Err(CliError::Validation(format!(
                    "flat kernel mode needs tau[{axis}] <= 2"
                )));
            }
        }
    }
    verify_monotonicity_hypotheses(&omega, &vec![0.0; m], "rate f3")?;
    let log_exp: f64 = if log_corrected {
        p.values()[1..]
            .iter()
            .zip(&tau.values()[1..])
            .map(|(&pj, &tj)| 1.0 / pj - 1.0 / tj)
            .sum()
    } else {
        0.0
    };
    run_indexed(ladder.len(), threads, |i| {
        let n = ladder[i] as f64;
        let start = Instant::now();
        let (_, witness, _) = build_psi_f3(&omega, n, l, &p, &tau, c3).map_err(runtime)?;
        let error = lorentz_residual_error(&witness, &omega, n, &q, &theta2, opts.oversample)?;
        let predicted = n.recip() * n.log2().powf(log_exp);
        Ok(RateRow {
            n: ladder[i],
            error,
            predicted,
            wall_ms: start.elapsed().as_millis(),
        })
    })
}

fn run_f4(
    cfg: &ExperimentConfig,
    m: usize,
    ladder: &[u64],
    opts: RunOptions,
    threads: usize,
) -> Result<Vec<RateRow>, CliError> {
    let r = exponent_vec(cfg, "r", m, ExponentVector::weight)?;
    let p = exponent_vec(cfg, "p", m, ExponentVector::integrability)?;
    let theta = exponent_vec(cfg, "theta1", m, ExponentVector::fine)?;
    let tau = exponent_vec(cfg, "tau", m, ExponentVector::summation)?;
    let p_scalar = p.values()[0];
    if p.values().iter().any(|&v| v != p_scalar) {
        return Err(CliError::Validation(
            "step-cross mode needs all integrability exponents equal".into(),
        ));
    }
    let r1 = r.values()[0];
    let gamma: Vec<f64> = r.values().iter().map(|&rj| rj / r1).collect();
    let log_exp: f64 = theta
        .values()
        .iter()
        .map(|&tj| 1.0 / p_scalar - 1.0 / tj)
        .sum::<f64>()
        + tau.values()[1..]
            .iter()
            .map(|&tj| 1.0 / p_scalar - 1.0 / tj)
            .sum::<f64>();
    run_indexed(ladder.len(), threads, |i| {
        let n = ladder[i] as f64;
        let start = Instant::now();
        let witness = build_f4(&r, n, p_scalar, &theta, &tau).map_err(runtime)?;
        let level = n.log2() / r1;
        let inside = witness
            .step_hyperbolic_sum(&gamma, level)
            .map_err(runtime)?;
        let residual = witness.sub(&inside).map_err(runtime)?;
        let error = tensor_lebesgue_norm(&residual, &p, opts.oversample).map_err(runtime)?;
        let predicted = n.powf(-r1) * n.log2().powf(log_exp);
        Ok(RateRow {
            n: ladder[i],
            error,
            predicted,
            wall_ms: start.elapsed().as_millis(),
        })
    })
}
