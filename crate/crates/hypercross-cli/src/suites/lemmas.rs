//! Sequence-norm asymptotics over hyperplane sections and threshold
//! shells: exact enumerated values next to their predicted orders.

use std::path::Path;

use hypercross::index_sets::{
    gamma_perp_weighted_norm, kappa_cap, kappa_set, lambda_set, lambda_weighted_norm,
};
use hypercross::norms::{sequence_norm, ExponentVector, MultiSequence};

use crate::config::ExperimentConfig;
use crate::csv::write_csv;
use crate::suites::{config_modulus, exponent_vec, runtime, validation, CliError, RunOptions};

pub const HEADER: &str = "quantity,n,value,predicted,ratio";

pub fn run(cfg: &ExperimentConfig, out: &Path, opts: RunOptions) -> Result<(), CliError> {
    let m = cfg.usize_or("m", 2)?;
    if m == 0 {
        return Err(CliError::Validation("m must be >= 1".into()));
    }
    let omega = config_modulus(cfg)?;
    if omega.dim() != m {
        return Err(CliError::Validation(format!(
            "omega has {} axes but m = {}",
            omega.dim(),
            m
        )));
    }
    let l = omega.order();
    let tau = exponent_vec(cfg, "tau", m, ExponentVector::summation)?;
    let theta1 = exponent_vec(cfg, "theta1", m, ExponentVector::fine)?;
    let gamma = match cfg.vector("gamma")? {
        Some(v) => ExponentVector::weight(v).map_err(validation)?,
        None => ExponentVector::weight(vec![1.0; m]).map_err(validation)?,
    };
    if gamma.dim() != m {
        return Err(CliError::Validation("`gamma` dimension mismatch".into()));
    }
    let gamma_prime = match cfg.vector("gamma_prime")? {
        Some(v) => {
            if v.len() != m {
                return Err(CliError::Validation(
                    "`gamma_prime` dimension mismatch".into(),
                ));
            }
            v
        }
        None => gamma.values().to_vec(),
    };
    for (axis, (&g, &gp)) in gamma.values().iter().zip(&gamma_prime).enumerate() {
        if gp < g {
            return Err(CliError::Validation(format!(
                "gamma_prime[{}] = {} must be >= gamma[{}] = {}",
                axis, gp, axis, g
            )));
        }
    }
    if gamma_prime[0] != gamma.values()[0] {
        return Err(CliError::Validation(
            "gamma_prime must agree with gamma on the first axis".into(),
        ));
    }
    let alpha = cfg.f64_or("alpha", 1.0)?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(CliError::Validation("`alpha` must be positive".into()));
    }
    let beta = match cfg.vector("beta")? {
        Some(v) => {
            if v.len() != m {
                return Err(CliError::Validation("`beta` dimension mismatch".into()));
            }
            v
        }
        None => vec![0.0; m],
    };
    let tolerance = cfg.f64_or("tolerance", 1e-8)?;
    let ladder = cfg.ladder("ladder")?;
    let levels = cfg.levels_or("levels", &[4, 6, 8, 10, 12])?;

    let tail_tau: f64 = tau.values().iter().skip(1).map(|&t| 1.0 / t).sum();
    // prefix length on which both anisotropy vectors agree (>= 1, checked)
    let nu = gamma
        .values()
        .iter()
        .zip(&gamma_prime)
        .take_while(|(&g, &gp)| g == gp)
        .count();
    let tail_tau_nu: f64 = tau.values()[1..nu].iter().map(|&t| 1.0 / t).sum();

    let mut rows: Vec<String> = Vec::new();

    for &n in &levels {
        let level = f64::from(n);
        let cap = kappa_cap(level, &gamma);
        let kappa = kappa_set(level, &gamma, &cap).map_err(runtime)?;

        // characteristic sequence of the hyperplane section
        let seq = MultiSequence::characteristic(m, &kappa.members).map_err(runtime)?;
        let value = sequence_norm(&seq, &tau).map_err(runtime)?;
        let predicted = level.powf(tail_tau);
        rows.push(format!(
            "hyperplane_characteristic,{},{},{},{}",
            n,
            value,
            predicted,
            value / predicted
        ));

        // geometric weights along the section
        let mut weighted = MultiSequence::new(m);
        for s in &kappa.members {
            let dot: f64 = s
                .levels()
                .iter()
                .zip(&gamma_prime)
                .map(|(&sj, &gj)| f64::from(sj) * gj)
                .sum();
            weighted
                .insert(s.clone(), (-alpha * dot).exp2())
                .map_err(runtime)?;
        }
        let value = sequence_norm(&weighted, &tau).map_err(runtime)?;
        let predicted = (-alpha * level).exp2() * level.powf(tail_tau_nu);
        rows.push(format!(
            "hyperplane_geometric,{},{},{},{}",
            n,
            value,
            predicted,
            value / predicted
        ));
    }

    for &n in &ladder {
        let nf = n as f64;
        let log_n = nf.log2();

        let full = gamma_perp_weighted_norm(&omega, nf, &beta, &theta1, tolerance)
            .map_err(runtime)?;
        let shell = lambda_weighted_norm(&omega, nf, l, &beta, &theta1).map_err(runtime)?;
        rows.push(format!("tail_vs_shell,{},{},{},{}", n, full, shell, full / shell));

        let lambda = lambda_set(&omega, nf, l).map_err(runtime)?;
        let seq = MultiSequence::characteristic(m, &lambda).map_err(runtime)?;
        let value = sequence_norm(&seq, &tau).map_err(runtime)?;
        let predicted = log_n.powf(tail_tau);
        rows.push(format!(
            "shell_characteristic,{},{},{},{}",
            n,
            value,
            predicted,
            value / predicted
        ));

        let value = lambda.len() as f64;
        let predicted = log_n.powf(m as f64 - 1.0);
        rows.push(format!(
            "shell_cardinality,{},{},{},{}",
            n,
            value,
            predicted,
            value / predicted
        ));
    }

    let _ = opts;
    write_csv(out, HEADER, &rows).map_err(runtime)?;
    eprintln!("lemmas: wrote {} rows to {}", rows.len(), out.display());
    Ok(())
}
