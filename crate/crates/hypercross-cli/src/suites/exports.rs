//! Set export, witness export, and per-ladder norm tabulation.

use std::path::Path;
use std::time::Instant;

use hypercross::index_sets::{gamma_set, lambda_prime_and_cubes, lambda_set, q_set};
use hypercross::modulus::MixedModulus;
use hypercross::norms::{
    besov_functional_os, tensor_lebesgue_norm, tensor_lorentz_norm, ExponentVector,
};
use hypercross::spectral::{CoefficientTensor, MultiIndex};
use hypercross::witnesses::{
    build_f0, build_f1, build_f4, build_psi_f3, default_f1_block, WitnessKind,
};

use crate::config::ExperimentConfig;
use crate::csv::{write_csv, write_lines};
use crate::suites::{config_modulus, exponent_vec, run_indexed, runtime, CliError, RunOptions};

fn required_threshold(cfg: &ExperimentConfig) -> Result<f64, CliError> {
    let n = cfg
        .f64_opt("N")?
        .ok_or_else(|| CliError::Validation("missing required key `N`".into()))?;
    if !(n >= 1.0 && n.is_finite()) {
        return Err(CliError::Validation(format!("N = {} must be >= 1", n)));
    }
    Ok(n)
}

pub fn run_sets(cfg: &ExperimentConfig, out: &Path) -> Result<(), CliError> {
    let kind = cfg.require("set")?.to_string();
    let omega = config_modulus(cfg)?;
    let n = required_threshold(cfg)?;
    let l = omega.order();
    let c3 = cfg.f64_or("c3", 1.0)?;
    let lines: Vec<String> = match kind.as_str() {
        "gamma" => level_lines(gamma_set(&omega, n).map_err(runtime)?.iter()),
        "lambda" => level_lines(lambda_set(&omega, n, l).map_err(runtime)?.iter()),
        "lambda_prime" => {
            let cubes = lambda_prime_and_cubes(&omega, n, l, c3).map_err(runtime)?;
            level_lines(cubes.lambda_prime.iter())
        }
        "q" => q_set(&omega, n)
            .map_err(runtime)?
            .iter()
            .map(|k| {
                k.components()
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect(),
        other => {
            return Err(CliError::Validation(format!(
                "unknown set `{}` (expected gamma, lambda, lambda_prime or q)",
                other
            )))
        }
    };
    write_lines(out, &lines).map_err(runtime)?;
    eprintln!("sets: wrote {} lines to {}", lines.len(), out.display());
    Ok(())
}

fn level_lines<'a, I: Iterator<Item = &'a MultiIndex>>(levels: I) -> Vec<String> {
    levels
        .map(|s| {
            s.levels()
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect()
}

fn witness_kind(cfg: &ExperimentConfig) -> Result<WitnessKind, CliError> {
    match cfg.require("witness")? {
        "f0" => Ok(WitnessKind::F0),
        "f1" => Ok(WitnessKind::F1),
        "f3" => Ok(WitnessKind::F3),
        "f4" => Ok(WitnessKind::F4),
        other => Err(CliError::Validation(format!(
            "unknown witness `{}` (expected f0, f1, f3 or f4)",
            other
        ))),
    }
}

/// Builds the configured witness at threshold `n`.
fn build_witness(
    cfg: &ExperimentConfig,
    kind: WitnessKind,
    m: usize,
    n: f64,
) -> Result<CoefficientTensor, CliError> {
    match kind {
        WitnessKind::F0 => {
            let omega = config_modulus(cfg)?;
            let p = exponent_vec(cfg, "p", m, ExponentVector::integrability)?;
            let q = exponent_vec(cfg, "q", m, ExponentVector::integrability)?;
            let tau = exponent_vec(cfg, "tau", m, ExponentVector::summation)?;
            build_f0(&omega, n, omega.order(), &p, &tau, &q).map_err(runtime)
        }
        WitnessKind::F1 => {
            let omega = config_modulus(cfg)?;
            let p = exponent_vec(cfg, "p", m, ExponentVector::integrability)?;
            let q = exponent_vec(cfg, "q", m, ExponentVector::integrability)?;
            let l = omega.order();
            let s_tilde = match cfg.s_tilde()? {
                Some(s) => s,
                None => default_f1_block(&omega, n, l, &p, &q).map_err(runtime)?,
            };
            build_f1(&omega, n, l, &p, &q, &s_tilde).map_err(runtime)
        }
        WitnessKind::F3 => {
            let omega = config_modulus(cfg)?;
            let p = exponent_vec(cfg, "p", m, ExponentVector::integrability)?;
            let tau = exponent_vec(cfg, "tau", m, ExponentVector::summation)?;
            let c3 = cfg.f64_or("c3", 1.0)?;
            let (_, f3, _) =
                build_psi_f3(&omega, n, omega.order(), &p, &tau, c3).map_err(runtime)?;
            Ok(f3)
        }
        WitnessKind::F4 => {
            let r = exponent_vec(cfg, "r", m, ExponentVector::weight)?;
            let p = exponent_vec(cfg, "p", m, ExponentVector::integrability)?;
            let theta = exponent_vec(cfg, "theta1", m, ExponentVector::fine)?;
            let tau = exponent_vec(cfg, "tau", m, ExponentVector::summation)?;
            let p_scalar = p.values()[0];
            if p.values().iter().any(|&v| v != p_scalar) {
                return Err(CliError::Validation(
                    "step-cross witness needs all integrability exponents equal".into(),
                ));
            }
            build_f4(&r, n, p_scalar, &theta, &tau).map_err(runtime)
        }
    }
}

pub fn run_witness(cfg: &ExperimentConfig, out: &Path) -> Result<(), CliError> {
    let kind = witness_kind(cfg)?;
    let m = cfg.usize_or("m", 2)?;
    let n = required_threshold(cfg)?;
    let tensor = build_witness(cfg, kind, m, n)?;
    let lines: Vec<String> = tensor
        .iter()
        .map(|(k, a)| {
            let mut parts: Vec<String> =
                k.components().iter().map(|v| v.to_string()).collect();
            parts.push(a.re.to_string());
            parts.push(a.im.to_string());
            parts.join(" ")
        })
        .collect();
    write_lines(out, &lines).map_err(runtime)?;
    eprintln!(
        "witness: wrote {} coefficients to {}",
        lines.len(),
        out.display()
    );
    Ok(())
}

pub const NORMS_HEADER: &str = "N,besov,lorentz,lebesgue,wall_ms";

/// Per ladder point: the class functional of the configured witness plus
/// its target-space mixed Lorentz and Lebesgue norms.
pub fn run_norms(cfg: &ExperimentConfig, out: &Path, opts: RunOptions) -> Result<(), CliError> {
    let kind = witness_kind(cfg)?;
    let m = cfg.usize_or("m", 2)?;
    let ladder = cfg.ladder("ladder")?;
    let p = exponent_vec(cfg, "p", m, ExponentVector::integrability)?;
    let theta1 = exponent_vec(cfg, "theta1", m, ExponentVector::fine)?;
    let tau = exponent_vec(cfg, "tau", m, ExponentVector::summation)?;
    let class_omega: MixedModulus = match kind {
        WitnessKind::F4 => {
            let r = cfg.vector_required("r")?;
            let order = cfg.u32_required("order")?;
            MixedModulus::power(r, order).map_err(runtime)?
        }
        _ => config_modulus(cfg)?,
    };
    let (target_p, target_theta) = if cfg.has("q") && cfg.has("theta2") {
        (
            exponent_vec(cfg, "q", m, ExponentVector::integrability)?,
            exponent_vec(cfg, "theta2", m, ExponentVector::fine)?,
        )
    } else {
        (p.clone(), theta1.clone())
    };

    let rows = run_indexed(ladder.len(), opts.threads, |i| {
        let n = ladder[i] as f64;
        let start = Instant::now();
        let tensor = build_witness(cfg, kind, m, n)?;
        let besov = besov_functional_os(
            &tensor,
            &class_omega,
            &p,
            &theta1,
            &tau,
            opts.oversample,
        )
        .map_err(runtime)?;
        let lorentz =
            tensor_lorentz_norm(&tensor, &target_p, &target_theta, opts.oversample)
                .map_err(runtime)?;
        let lebesgue = tensor_lebesgue_norm(&tensor, &p, opts.oversample).map_err(runtime)?;
        Ok(format!(
            "{},{},{},{},{}",
            ladder[i],
            besov,
            lorentz,
            lebesgue,
            start.elapsed().as_millis()
        ))
    })?;

    write_csv(out, NORMS_HEADER, &rows).map_err(runtime)?;
    eprintln!("norms: wrote {} rows to {}", rows.len(), out.display());
    Ok(())
}
