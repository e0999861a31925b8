//! Inequality ratio sweeps on seeded random-phase ensembles across a
//! degree ladder.

use std::path::Path;
use std::time::Instant;

use hypercross::index_sets::{kappa_cap, kappa_set};
use hypercross::inequalities::{check_block_aggregate, check_embedding_bound, check_lacunary_lower, EnsembleSpec};
use hypercross::norms::{ExponentVector, MultiSequence};

use crate::config::ExperimentConfig;
use crate::csv::write_csv;
use crate::suites::{exponent_vec, run_indexed, runtime, validation, CliError, RunOptions};

pub const HEADER: &str = "degree,block_aggregate_max,embedding_max,lacunary_min,wall_ms";

pub fn run(cfg: &ExperimentConfig, out: &Path, opts: RunOptions) -> Result<(), CliError> {
    let m = cfg.usize_or("m", 2)?;
    let q = exponent_vec(cfg, "q", m, ExponentVector::integrability)?;
    let p = exponent_vec(cfg, "p", m, ExponentVector::integrability)?;
    let theta1 = exponent_vec(cfg, "theta1", m, ExponentVector::fine)?;
    let theta2 = exponent_vec(cfg, "theta2", m, ExponentVector::fine)?;
    let lambda = exponent_vec(cfg, "lambda", m, ExponentVector::integrability)?;
    let count = cfg.usize_or("count", 8)?;
    if count == 0 {
        return Err(CliError::Validation("`count` must be >= 1".into()));
    }
    let degrees: Vec<u64> = cfg.ladder("degrees")?;
    for axis in 0..m {
        if p.values()[axis] >= q.values()[axis] {
            return Err(CliError::Validation(format!(
                "embedding check needs p[{axis}] < q[{axis}]"
            )));
        }
        if q.values()[axis] >= lambda.values()[axis] {
            return Err(CliError::Validation(format!(
                "lacunary check needs q[{axis}] < lambda[{axis}]"
            )));
        }
    }
    let gamma = ExponentVector::weight(vec![1.0; m]).map_err(validation)?;

    let rows = run_indexed(degrees.len(), opts.threads, |i| {
        let degree = degrees[i];
        let start = Instant::now();
        let spec = EnsembleSpec::new(m, degree as u32, count, opts.seed.wrapping_add(degree))
            .map_err(runtime)?;
        let ensemble = spec.generate();
        let mut t1_max = 0.0f64;
        let mut t2_max = 0.0f64;
        for f in &ensemble {
            let r1 = check_block_aggregate(f, &q, opts.oversample).map_err(runtime)?;
            let r2 =
                check_embedding_bound(f, &p, &theta1, &q, &theta2, opts.oversample).map_err(runtime)?;
            t1_max = t1_max.max(r1);
            t2_max = t2_max.max(r2);
        }
        // lacunary lower bound on the characteristic hyperplane sequence
        let level = (degree as f64).log2();
        let cap = kappa_cap(level, &gamma);
        let kappa = kappa_set(level, &gamma, &cap).map_err(runtime)?;
        let b = MultiSequence::characteristic(m, &kappa.members).map_err(runtime)?;
        let t3_min = check_lacunary_lower(&b, &q, &theta2, &lambda, opts.oversample).map_err(runtime)?;
        Ok(format!(
            "{},{},{},{},{}",
            degree,
            t1_max,
            t2_max,
            t3_min,
            start.elapsed().as_millis()
        ))
    })?;

    write_csv(out, HEADER, &rows).map_err(runtime)?;
    eprintln!(
        "inequalities: wrote {} rows to {}",
        rows.len(),
        out.display()
    );
    Ok(())
}
