//! Suite dispatch and machinery shared by the batch experiments.

mod exports;
mod inequalities;
mod lemmas;
mod rates;

use std::fmt;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use hypercross::modulus::{check_s_conditions, MixedModulus};
use hypercross::norms::ExponentVector;

use crate::config::{ConfigError, ExperimentConfig};

/// Failures split by exit code: validation problems (exit 1) versus
/// failures while the experiment is running (exit 2).
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Runtime(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(msg) => write!(f, "validation error: {}", msg),
            CliError::Runtime(msg) => write!(f, "runtime error: {}", msg),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Validation(e.to_string())
    }
}

pub fn validation(e: impl fmt::Display) -> CliError {
    CliError::Validation(e.to_string())
}

pub fn runtime(e: impl fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Lemmas,
    Rates,
    Inequalities,
    Sets,
    Witness,
    Norms,
}

impl Suite {
    pub fn from_name(name: &str) -> Option<Suite> {
        match name {
            "lemmas" => Some(Suite::Lemmas),
            "rates" => Some(Suite::Rates),
            "inequalities" => Some(Suite::Inequalities),
            "sets" => Some(Suite::Sets),
            "witness" => Some(Suite::Witness),
            "norms" => Some(Suite::Norms),
            _ => None,
        }
    }
}

/// Runtime options resolved from flags and config defaults.
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub seed: u64,
    pub threads: usize,
    pub oversample: usize,
}

pub fn run(
    suite: Suite,
    cfg: &ExperimentConfig,
    out: &Path,
    opts: RunOptions,
) -> Result<(), CliError> {
    match suite {
        Suite::Lemmas => lemmas::run(cfg, out, opts),
        Suite::Rates => rates::run(cfg, out, opts),
        Suite::Inequalities => inequalities::run(cfg, out, opts),
        Suite::Sets => exports::run_sets(cfg, out),
        Suite::Witness => exports::run_witness(cfg, out),
        Suite::Norms => exports::run_norms(cfg, out, opts),
    }
}

/// Runs `count` independent jobs on up to `threads` workers and returns the
/// results in job order, so output never depends on scheduling.
pub fn run_indexed<T, F>(count: usize, threads: usize, job: F) -> Result<Vec<T>, CliError>
where
    T: Send,
    F: Fn(usize) -> Result<T, CliError> + Sync,
{
    let workers = threads.max(1).min(count.max(1));
    let slots: Vec<Mutex<Option<Result<T, CliError>>>> =
        (0..count).map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let index = next.fetch_add(1, Ordering::Relaxed);
                if index >= count {
                    break;
                }
                let result = job(index);
                *slots[index].lock().expect("result slot") = Some(result);
            });
        }
    });
    let mut out = Vec::with_capacity(count);
    for slot in slots {
        let value = slot
            .into_inner()
            .expect("result slot")
            .expect("every job ran");
        out.push(value?);
    }
    Ok(out)
}

/// Builds the modulus named by the config (`omega` + `order`).
pub fn config_modulus(cfg: &ExperimentConfig) -> Result<MixedModulus, CliError> {
    let spec = cfg.omega_required()?;
    let order = cfg.u32_required("order")?;
    Ok(spec.build(order)?)
}

pub fn exponent_vec(
    cfg: &ExperimentConfig,
    key: &str,
    m: usize,
    build: impl Fn(Vec<f64>) -> hypercross::Result<ExponentVector>,
) -> Result<ExponentVector, CliError> {
    let values = cfg.vector_required(key)?;
    if values.len() != m {
        return Err(CliError::Validation(format!(
            "`{}` must have {} components, got {}",
            key,
            m,
            values.len()
        )));
    }
    build(values).map_err(|e| CliError::Validation(format!("`{}`: {}", key, e)))
}

/// Probes the almost-increase condition with exponents strictly above the
/// given floor per axis, and the almost-decrease condition below the order;
/// both must pass on the lattice for the estimate hypotheses to hold.
pub fn verify_monotonicity_hypotheses(
    omega: &MixedModulus,
    floor: &[f64],
    label: &str,
) -> Result<(), CliError> {
    let l = f64::from(omega.order());
    let dim = omega.dim();
    let mut increase_ok = false;
    'inc: for k in 1..8u32 {
        let alpha: Vec<f64> = floor
            .iter()
            .map(|&d| d + (1.0 - d) * f64::from(k) / 8.0)
            .collect();
        if alpha.iter().any(|&a| !(a > 0.0 && a < 1.0)) {
            continue;
        }
        let alpha = match ExponentVector::weight(alpha) {
            Ok(a) => a,
            Err(_) => continue,
        };
        if let Ok(report) = check_s_conditions(omega, &alpha, 12) {
            let checks: Vec<_> = report
                .checks
                .iter()
                .filter(|c| c.name.starts_with("S axis"))
                .collect();
            if checks.len() == dim && checks.iter().all(|c| c.passed) {
                increase_ok = true;
                break 'inc;
            }
        }
    }
    if !increase_ok {
        return Err(CliError::Validation(format!(
            "{}: no almost-increase exponent above ({}) passed the lattice check",
            label,
            floor
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )));
    }
    let mut decrease_ok = false;
    'dec: for k in 1..8u32 {
        let a = l * f64::from(k) / 8.0;
        if !(a > 0.0 && a < l) {
            continue;
        }
        let alpha = match ExponentVector::weight(vec![a; dim]) {
            Ok(v) => v,
            Err(_) => continue,
        };
        if let Ok(report) = check_s_conditions(omega, &alpha, 12) {
            let checks: Vec<_> = report
                .checks
                .iter()
                .filter(|c| c.name.starts_with("S_l axis"))
                .collect();
            if checks.len() == dim && checks.iter().all(|c| c.passed) {
                decrease_ok = true;
                break 'dec;
            }
        }
    }
    if !decrease_ok {
        return Err(CliError::Validation(format!(
            "{}: no almost-decrease exponent below the order passed the lattice check",
            label
        )));
    }
    Ok(())
}
