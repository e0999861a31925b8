//! Classical kernels and the extremal witness functions whose partial-sum
//! residuals realize the lower bounds of the rate estimates.
//!
//! Every builder emits an exact sparse spectrum. Translations of kernels
//! are realized as coefficient phases, so nothing here ever touches a
//! sample grid.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::index_sets::{kappa_cap, kappa_set, lambda_prime_and_cubes, lambda_set};
use crate::modulus::{omega1_derived, MixedModulus};
use crate::norms::ExponentVector;
use crate::spectral::{dyadic_block, CoefficientTensor, FrequencyIndex, MultiIndex};

/// One-sided Dirichlet kernel: `a_0 = 1/2`, `a_k = 1` for `1 <= k <= n`.
pub fn dirichlet_kernel(n: u32) -> CoefficientTensor {
    let mut c = CoefficientTensor::new(1);
    c.insert(FrequencyIndex::new(vec![0]), Complex64::new(0.5, 0.0))
        .expect("valid key");
    for k in 1..=i64::from(n) {
        c.insert(FrequencyIndex::new(vec![k]), Complex64::new(1.0, 0.0))
            .expect("valid key");
    }
    c
}

/// Fejer kernel of order `u`: `a_k = 1 - |k|/(u+1)` for `|k| <= u`.
pub fn fejer_kernel(u: u32) -> CoefficientTensor {
    let mut c = CoefficientTensor::new(1);
    let denom = f64::from(u) + 1.0;
    for k in -i64::from(u)..=i64::from(u) {
        let w = 1.0 - (k.unsigned_abs() as f64) / denom;
        c.insert(FrequencyIndex::new(vec![k]), Complex64::new(w, 0.0))
            .expect("valid key");
    }
    c
}

/// Unit coefficients exactly on the dyadic block `rho(s)`.
pub fn block_exponential(s: &MultiIndex) -> Result<CoefficientTensor> {
    if s.levels().contains(&0) {
        return Err(Error::EmptySet(format!(
            "dyadic block {:?} is empty (zero level)",
            s.levels()
        )));
    }
    let mut c = CoefficientTensor::new(s.dim());
    for k in dyadic_block(s) {
        c.insert(k, Complex64::new(1.0, 0.0))?;
    }
    Ok(c)
}

/// Block with the ramp weights `prod (|k_j| - 2^(s_j - 1) + 1)^(1/p - 1)`
/// on `rho(s)`; negative frequencies carry the mirrored weight.
pub fn weighted_block(s: &MultiIndex, p: f64) -> Result<CoefficientTensor> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidExponent {
            role: "p",
            axis: 0,
            value: p,
        });
    }
    if s.levels().contains(&0) {
        return Err(Error::EmptySet(format!(
            "dyadic block {:?} is empty (zero level)",
            s.levels()
        )));
    }
    let exponent = 1.0 / p - 1.0;
    let mut c = CoefficientTensor::new(s.dim());
    for k in dyadic_block(s) {
        let w: f64 = k
            .components()
            .iter()
            .zip(s.levels())
            .map(|(&kj, &sj)| {
                let offset = (kj.unsigned_abs() as f64) - f64::from(1u32 << (sj - 1)) + 1.0;
                offset.powf(exponent)
            })
            .product();
        c.insert(k, Complex64::new(w, 0.0))?;
    }
    Ok(c)
}

fn require_ladder_point(n: f64) -> Result<()> {
    if !(n >= 2.0 && n.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "witness threshold N = {} must be >= 2",
            n
        )));
    }
    Ok(())
}

fn log_prefactor(n: f64, tau: &ExponentVector) -> f64 {
    let exponent: f64 = tau.values().iter().skip(1).map(|&t| 1.0 / t).sum();
    n.log2().powf(-exponent)
}

/// Shell witness spread over the whole shell of the shifted modulus: each
/// block `s` there carries the amplitude
/// `(log2 N)^(-sum_(j>=2) 1/tau_j) * Omega(2^-s) * prod 2^(-s_j (1 - 1/p_j))`.
/// Its spectrum avoids the hyperbolic cross of the shifted modulus, so the
/// cross partial sum annihilates it.
pub fn build_f0(
    omega: &MixedModulus,
    n: f64,
    l: u32,
    p: &ExponentVector,
    tau: &ExponentVector,
    q: &ExponentVector,
) -> Result<CoefficientTensor> {
    require_ladder_point(n)?;
    let omega1 = omega1_derived(omega, p, q)?;
    let shell = lambda_set(&omega1, n, l)?;
    if shell.is_empty() {
        return Err(Error::EmptySet(
            "shifted-modulus shell is empty; no spread witness exists at this threshold".into(),
        ));
    }
    if tau.dim() != omega.dim() {
        return Err(Error::DimensionMismatch {
            expected: omega.dim(),
            got: tau.dim(),
        });
    }
    let prefactor = log_prefactor(n, tau);
    let mut c = CoefficientTensor::new(omega.dim());
    for s in &shell {
        let decay: f64 = s
            .levels()
            .iter()
            .zip(p.values())
            .map(|(&sj, &pj)| (-f64::from(sj) * (1.0 - 1.0 / pj)).exp2())
            .product();
        let amp = prefactor * omega.evaluate_dyadic(s) * decay;
        for k in dyadic_block(s) {
            c.insert(k, Complex64::new(amp, 0.0))?;
        }
    }
    Ok(c)
}

/// Deterministic default block for the single-block witness: among the
/// shell members of the shifted modulus whose block is nonempty, those
/// maximizing the shifted-modulus value, then the most balanced (smallest
/// maximum level), then lexicographically first.
pub fn default_f1_block(
    omega: &MixedModulus,
    n: f64,
    l: u32,
    p: &ExponentVector,
    q: &ExponentVector,
) -> Result<MultiIndex> {
    require_ladder_point(n)?;
    let omega1 = omega1_derived(omega, p, q)?;
    let shell = lambda_set(&omega1, n, l)?;
    let mut best: Option<(f64, u32, MultiIndex)> = None;
    for s in &shell {
        if s.levels().contains(&0) {
            continue;
        }
        let value = omega1.evaluate_dyadic(s);
        let spread = *s.levels().iter().max().expect("nonempty");
        let better = match &best {
            None => true,
            Some((v, sp, _)) => value > *v + 1e-15 || ((value - v).abs() <= 1e-15 && spread < *sp),
        };
        if better {
            best = Some((value, spread, s.clone()));
        }
    }
    best.map(|(_, _, s)| s).ok_or_else(|| {
        Error::EmptySet("no shell member with a nonempty block at this threshold".into())
    })
}

/// Single-block witness: the displayed amplitude
/// `Omega(2^-s~) * 2^(-sum s~_j (1 - 1/p_j))` on the block of `s~`, which
/// must belong to the shell of the shifted modulus.
pub fn build_f1(
    omega: &MixedModulus,
    n: f64,
    l: u32,
    p: &ExponentVector,
    q: &ExponentVector,
    s_tilde: &MultiIndex,
) -> Result<CoefficientTensor> {
    require_ladder_point(n)?;
    let omega1 = omega1_derived(omega, p, q)?;
    let shell = lambda_set(&omega1, n, l)?;
    if !shell.contains(s_tilde) {
        return Err(Error::InvalidArgument(format!(
            "block {:?} lies outside the shell between thresholds",
            s_tilde.levels()
        )));
    }
    let decay: f64 = s_tilde
        .levels()
        .iter()
        .zip(p.values())
        .map(|(&sj, &pj)| (-f64::from(sj) * (1.0 - 1.0 / pj)).exp2())
        .product();
    let amp = omega.evaluate_dyadic(s_tilde) * decay;
    Ok(block_exponential(s_tilde)?.scaled(Complex64::new(amp, 0.0)))
}

/// Modulated-kernel sum and its scaled version, the spread witness for the
/// small-target-space rates, plus the kernel order it used. Each selected
/// shell block contributes a Fejer kernel modulated to the block frequency
/// `k_j = 3 * 2^(s_j - 1)` and translated to its assigned cube center; the
/// translation appears as a phase on the coefficients.
pub fn build_psi_f3(
    omega: &MixedModulus,
    n: f64,
    l: u32,
    p: &ExponentVector,
    tau: &ExponentVector,
    c3: f64,
) -> Result<(CoefficientTensor, CoefficientTensor, u32)> {
    require_ladder_point(n)?;
    let m = omega.dim();
    if p.dim() != m || tau.dim() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: p.dim().min(tau.dim()),
        });
    }
    for (axis, &pj) in p.values().iter().enumerate() {
        if !(pj > 1.0 && pj <= 2.0) {
            return Err(Error::InvalidExponent {
                role: "p (spread witness needs 1 < p_j <= 2)",
                axis,
                value: pj,
            });
        }
    }
    let shell = lambda_set(omega, n, l)?;
    if shell.is_empty() {
        return Err(Error::EmptySet(
            "shell between thresholds is empty; no spread witness at this threshold".into(),
        ));
    }
    let cubes = lambda_prime_and_cubes(omega, n, l, c3)?;

    let weight_sum: f64 = p.values().iter().map(|&pj| 1.0 - 1.0 / pj).sum();
    let tail_sum: f64 = p.values().iter().skip(1).map(|&pj| 1.0 - 1.0 / pj).sum();
    let u = if m == 1 {
        1u32
    } else {
        let exponent = tail_sum / ((m as f64 - 1.0) * weight_sum);
        let value = (shell.len() as f64).powf(exponent).floor();
        if value < 1.0 {
            return Err(Error::InvalidArgument(
                "kernel order came out below 1".into(),
            ));
        }
        value as u32
    };

    let mut psi = CoefficientTensor::new(m);
    let scale_center = (2.0f64).powi(m as i32);
    let denom = f64::from(u) + 1.0;
    for s in &cubes.lambda_bar {
        if s.levels().contains(&0) {
            return Err(Error::EmptySet(format!(
                "selected shell block {:?} has a zero level",
                s.levels()
            )));
        }
        let center = &cubes.centers[s];
        let base: Vec<i64> = s
            .levels()
            .iter()
            .map(|&sj| 3 * (1i64 << (sj - 1)))
            .collect();
        let mut offset = vec![0i64; m];
        accumulate_kernel(
            &mut psi,
            &base,
            center,
            u,
            denom,
            scale_center,
            0,
            &mut offset,
        )?;
    }

    let scale = log_prefactor(n, tau) / n * f64::from(u).powf(-weight_sum);
    let f3 = psi.scaled(Complex64::new(scale, 0.0));
    Ok((psi, f3, u))
}

#[allow(clippy::too_many_arguments)]
fn accumulate_kernel(
    psi: &mut CoefficientTensor,
    base: &[i64],
    center: &[f64],
    u: u32,
    denom: f64,
    scale: f64,
    axis: usize,
    offset: &mut Vec<i64>,
) -> Result<()> {
    if axis == base.len() {
        let mut weight = scale;
        let mut phase = 0.0;
        for (&o, &x) in offset.iter().zip(center) {
            weight *= 1.0 - (o.unsigned_abs() as f64) / denom;
            phase -= o as f64 * x;
        }
        let k: Vec<i64> = base.iter().zip(offset.iter()).map(|(&b, &o)| b + o).collect();
        let value = Complex64::from_polar(weight, phase);
        psi.accumulate(FrequencyIndex::new(k), value)?;
        return Ok(());
    }
    for o in -i64::from(u)..=i64::from(u) {
        offset[axis] = o;
        accumulate_kernel(psi, base, center, u, denom, scale, axis + 1, offset)?;
    }
    Ok(())
}

/// Step-cross witness: ramp-weighted blocks over the hyperplane section at
/// the step-cross boundary level, with per-block weights
/// `prod 2^(-s_j r_j) * s_j^(-1/theta_j)` and the logarithmic prefactor.
/// Levels with a zero component drop out (their blocks are empty).
pub fn build_f4(
    r: &ExponentVector,
    n: f64,
    p: f64,
    theta: &ExponentVector,
    tau: &ExponentVector,
) -> Result<CoefficientTensor> {
    require_ladder_point(n)?;
    let m = r.dim();
    if theta.dim() != m || tau.dim() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: theta.dim().min(tau.dim()),
        });
    }
    let rv = r.values();
    if rv.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument(
            "smoothness exponents must be non-decreasing".into(),
        ));
    }
    if !(p >= 2.0 && p.is_finite()) {
        return Err(Error::InvalidExponent {
            role: "p (step-cross witness needs p >= 2)",
            axis: 0,
            value: p,
        });
    }
    for (axis, &tj) in theta.values().iter().enumerate() {
        if !(tj > p && tj.is_finite()) {
            return Err(Error::InvalidExponent {
                role: "theta (needs theta_j > p)",
                axis,
                value: tj,
            });
        }
    }
    for (axis, &tj) in tau.values().iter().enumerate() {
        if !(tj >= 2.0 && tj.is_finite()) {
            return Err(Error::InvalidExponent {
                role: "tau (needs 2 <= tau_j < inf)",
                axis,
                value: tj,
            });
        }
    }
    let r1 = rv[0];
    let gamma = ExponentVector::weight(rv.iter().map(|&rj| rj / r1).collect())?;
    let level = n.log2() / r1;
    let cap = kappa_cap(level, &gamma);
    let kappa = kappa_set(level, &gamma, &cap)?;
    if kappa.members.is_empty() {
        return Err(Error::EmptySet(
            "no lattice points at the step-cross boundary level".into(),
        ));
    }
    let prefactor = log_prefactor(n, tau);
    let mut c = CoefficientTensor::new(m);
    for s in &kappa.members {
        if s.levels().contains(&0) {
            continue;
        }
        let block_weight: f64 = s
            .levels()
            .iter()
            .zip(rv.iter().zip(theta.values()))
            .map(|(&sj, (&rj, &tj))| {
                (-f64::from(sj) * rj).exp2() * f64::from(sj).powf(-1.0 / tj)
            })
            .product();
        let ramp = weighted_block(s, p)?;
        for (k, a) in ramp.iter() {
            c.insert(k.clone(), a * prefactor * block_weight)?;
        }
    }
    if c.is_empty() {
        return Err(Error::EmptySet(
            "every boundary-level block is empty at this threshold".into(),
        ));
    }
    Ok(c)
}

/// Witness selector used by the command-line harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    F0,
    F1,
    F3,
    F4,
}
