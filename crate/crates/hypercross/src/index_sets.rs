//! Enumeration of the threshold level sets driven by a mixed modulus, the
//! hyperbolic-cross frequency set built from them, hyperplane sections of
//! the level lattice, and the cube partition used by the spread witness.
//!
//! All sets are finite and enumerated inside per-axis caps derived from the
//! modulus decay, so membership and cardinality are exact.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::modulus::{check_modulus_axioms, check_s_conditions, MixedModulus};
use crate::norms::{sequence_norm, ExponentVector, MultiSequence};
use crate::rational::Rational;
use crate::spectral::{dyadic_block, FrequencyIndex, MultiIndex};

/// Hard limit on the per-axis enumeration depth; a modulus that does not
/// decay below the working threshold within this many dyadic steps fails
/// its axiom contract.
const MAX_AXIS_CAP: u32 = 4096;

/// Depth used for the axiom screening that guards set constructions.
const SCREEN_DEPTH: u32 = 8;

/// Smallest `s` per axis at which the single-axis value
/// `Omega(1, .., 2^-s, .., 1)` drops below `threshold`. By per-axis
/// monotonicity this caps every level set with values `>= threshold`.
fn axis_caps(omega: &MixedModulus, threshold: f64) -> Result<Vec<u32>> {
    let dim = omega.dim();
    let mut caps = Vec::with_capacity(dim);
    for axis in 0..dim {
        let mut point = vec![0u32; dim];
        let mut found = None;
        for s in 0..=MAX_AXIS_CAP {
            point[axis] = s;
            if omega.evaluate_dyadic(&MultiIndex::new(point.clone())) < threshold {
                found = Some(s);
                break;
            }
        }
        match found {
            Some(s) => caps.push(s),
            None => {
                return Err(Error::AxiomViolation(format!(
                    "modulus does not decay below {} along axis {}",
                    threshold, axis
                )))
            }
        }
    }
    Ok(caps)
}

fn box_points(caps: &[u32]) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut current = vec![0u32; caps.len()];
    fn rec(caps: &[u32], axis: usize, current: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if axis == caps.len() {
            out.push(MultiIndex::new(current.clone()));
            return;
        }
        for s in 0..=caps[axis] {
            current[axis] = s;
            rec(caps, axis + 1, current, out);
        }
    }
    rec(caps, 0, &mut current, &mut out);
    out
}

fn screen_axioms(omega: &MixedModulus) -> Result<()> {
    let report = check_modulus_axioms(omega, SCREEN_DEPTH);
    if !report.passed() {
        let worst = report.worst().map(|c| c.name.clone()).unwrap_or_default();
        return Err(Error::AxiomViolation(format!(
            "modulus fails its axiom check ({})",
            worst
        )));
    }
    Ok(())
}

/// The level set of all `s` with `Omega(2^-s) >= 1/N`. Finite because the
/// modulus decays along each axis; ties at the threshold belong to the set.
pub fn gamma_set(omega: &MixedModulus, n: f64) -> Result<BTreeSet<MultiIndex>> {
    if !(n >= 1.0 && n.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "threshold parameter N = {} must be >= 1",
            n
        )));
    }
    screen_axioms(omega)?;
    let threshold = 1.0 / n;
    let caps = axis_caps(omega, threshold)?;
    Ok(box_points(&caps)
        .into_iter()
        .filter(|s| omega.evaluate_dyadic(s) >= threshold)
        .collect())
}

/// The shell between thresholds `1/(2^l N)` and `1/N`: the set difference
/// of the two level sets, which equals
/// `{s : 1/(2^l N) <= Omega(2^-s) < 1/N}`.
pub fn lambda_set(omega: &MixedModulus, n: f64, l: u32) -> Result<BTreeSet<MultiIndex>> {
    let outer = gamma_set(omega, (f64::from(l)).exp2() * n)?;
    let inner = gamma_set(omega, n)?;
    Ok(outer.difference(&inner).cloned().collect())
}

/// Hyperbolic-cross frequency set: the union of the dyadic blocks over the
/// level set of `N`.
pub fn q_set(omega: &MixedModulus, n: f64) -> Result<BTreeSet<FrequencyIndex>> {
    let gamma = gamma_set(omega, n)?;
    let mut out = BTreeSet::new();
    for s in &gamma {
        for k in dyadic_block(s) {
            out.insert(k);
        }
    }
    Ok(out)
}

/// Hyperplane section of the level lattice: all `s` within the cap with
/// `<s, gamma> = n`.
#[derive(Debug, Clone, PartialEq)]
pub struct KappaSet {
    pub level: f64,
    pub gamma: Vec<f64>,
    pub members: BTreeSet<MultiIndex>,
}

/// Per-axis cap `floor(level / gamma_j)` outside which no lattice point can
/// reach the level.
pub fn kappa_cap(level: f64, gamma: &ExponentVector) -> Vec<u32> {
    gamma
        .values()
        .iter()
        .map(|&g| {
            let cap = (level / g).floor();
            if cap < 0.0 {
                0
            } else {
                cap as u32
            }
        })
        .collect()
}

/// Enumerates the hyperplane section. Weights recognized as rationals are
/// compared exactly; otherwise `|<s, gamma> - n| <= 1e-9` decides.
pub fn kappa_set(level: f64, gamma: &ExponentVector, cap: &[u32]) -> Result<KappaSet> {
    if cap.len() != gamma.dim() {
        return Err(Error::DimensionMismatch {
            expected: gamma.dim(),
            got: cap.len(),
        });
    }
    let max_den = 1 << 20;
    let rationals: Option<Vec<Rational>> = gamma
        .values()
        .iter()
        .map(|&g| Rational::from_f64(g, max_den))
        .collect();
    let rational_level = Rational::from_f64(level, max_den);
    let mut members = BTreeSet::new();
    for s in box_points(cap) {
        let is_member = match (&rationals, rational_level) {
            (Some(gs), Some(nl)) => {
                let dot = s
                    .levels()
                    .iter()
                    .zip(gs)
                    .fold(Rational::zero(), |acc, (&sj, &gj)| {
                        acc.add(Rational::from_u32(sj).mul(gj))
                    });
                dot == nl
            }
            _ => {
                let dot: f64 = s
                    .levels()
                    .iter()
                    .zip(gamma.values())
                    .map(|(&sj, &gj)| f64::from(sj) * gj)
                    .sum();
                (dot - level).abs() <= 1e-9
            }
        };
        if is_member {
            members.insert(s);
        }
    }
    Ok(KappaSet {
        level,
        gamma: gamma.values().to_vec(),
        members,
    })
}

/// Explicit bundle of the sets driven by one `(Omega, N)` pair.
#[derive(Debug, Clone)]
pub struct IndexSetFamily {
    pub omega: MixedModulus,
    pub threshold: f64,
    pub order: u32,
    pub gamma_levels: BTreeSet<MultiIndex>,
    pub lambda_levels: BTreeSet<MultiIndex>,
    pub q_frequencies: BTreeSet<FrequencyIndex>,
    pub truncation_box: Vec<u32>,
}

impl IndexSetFamily {
    pub fn build(omega: &MixedModulus, n: f64) -> Result<Self> {
        let l = omega.order();
        let gamma_levels = gamma_set(omega, n)?;
        let lambda_levels = lambda_set(omega, n, l)?;
        let q_frequencies = q_set(omega, n)?;
        let truncation_box = axis_caps(omega, 1.0 / (f64::from(l).exp2() * n))?;
        Ok(IndexSetFamily {
            omega: omega.clone(),
            threshold: n,
            order: l,
            gamma_levels,
            lambda_levels,
            q_frequencies,
            truncation_box,
        })
    }
}

/// Filtered shell and cube partition for the spread witness: shell members
/// with every level above `log2(C3 * N) / (2 m l)`, the first `v^m` of them
/// in lexicographic order, and the centers of the `v^m` equal subcubes of
/// `[-pi, pi]^m` assigned bijectively.
#[derive(Debug, Clone, PartialEq)]
pub struct CubeAssignment {
    pub lambda_prime: BTreeSet<MultiIndex>,
    pub lambda_bar: Vec<MultiIndex>,
    pub side_count: usize,
    pub centers: BTreeMap<MultiIndex, Vec<f64>>,
}

fn integer_root(count: usize, m: usize) -> usize {
    let mut v = 1usize;
    while (v + 1).pow(m as u32) <= count {
        v += 1;
    }
    v
}

pub fn lambda_prime_and_cubes(
    omega: &MixedModulus,
    n: f64,
    l: u32,
    c3: f64,
) -> Result<CubeAssignment> {
    if !(c3 > 0.0 && c3.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "cube-partition constant {} must be positive",
            c3
        )));
    }
    let m = omega.dim();
    let lambda = lambda_set(omega, n, l)?;
    let cutoff = (c3 * n).log2() / (2.0 * m as f64 * f64::from(l));
    let lambda_prime: BTreeSet<MultiIndex> = lambda
        .into_iter()
        .filter(|s| s.levels().iter().all(|&sj| f64::from(sj) > cutoff))
        .collect();
    if lambda_prime.is_empty() {
        return Err(Error::EmptySet(
            "threshold too small for the cube-partition witness (filtered shell is empty)".into(),
        ));
    }
    let v = integer_root(lambda_prime.len(), m);
    let lambda_bar: Vec<MultiIndex> = lambda_prime.iter().take(v.pow(m as u32)).cloned().collect();
    let mut centers = BTreeMap::new();
    for (rank, s) in lambda_bar.iter().enumerate() {
        // decompose the rank into lexicographic cube digits, axis 0 most
        // significant
        let mut digits = vec![0usize; m];
        let mut rest = rank;
        for axis in (0..m).rev() {
            digits[axis] = rest % v;
            rest /= v;
        }
        let center: Vec<f64> = digits
            .iter()
            .map(|&d| -PI + 2.0 * PI * (d as f64 + 0.5) / v as f64)
            .collect();
        centers.insert(s.clone(), center);
    }
    Ok(CubeAssignment {
        lambda_prime,
        lambda_bar,
        side_count: v,
        centers,
    })
}

/// Weighted sequence over a set of levels: `Omega(2^-s) * prod 2^(s_j b_j)`.
fn weighted_sequence<'a, I>(dim: usize, omega: &MixedModulus, beta: &[f64], members: I) -> MultiSequence
where
    I: IntoIterator<Item = &'a MultiIndex>,
{
    let mut seq = MultiSequence::new(dim);
    for s in members {
        let weight: f64 = s
            .levels()
            .iter()
            .zip(beta)
            .map(|(&sj, &bj)| (f64::from(sj) * bj).exp2())
            .product();
        let v = omega.evaluate_dyadic(s) * weight;
        seq.insert(s.clone(), v).expect("finite weighted value");
    }
    seq
}

/// The weighted norm restricted to the shell between thresholds; the
/// comparison partner of [`gamma_perp_weighted_norm`].
pub fn lambda_weighted_norm(
    omega: &MixedModulus,
    n: f64,
    l: u32,
    beta: &[f64],
    theta: &ExponentVector,
) -> Result<f64> {
    if beta.len() != omega.dim() {
        return Err(Error::DimensionMismatch {
            expected: omega.dim(),
            got: beta.len(),
        });
    }
    let lambda = lambda_set(omega, n, l)?;
    let seq = weighted_sequence(omega.dim(), omega, beta, &lambda);
    sequence_norm(&seq, theta)
}

/// Iterated sequence norm of `Omega(2^-s) * prod 2^(s_j b_j)` over the
/// complement of the level set, an infinite sum truncated adaptively: the
/// enumeration box grows until the relative change of the value drops below
/// `tolerance`. Convergence needs the almost-increase condition with some
/// exponent above every weight, which is probed before summing.
pub fn gamma_perp_weighted_norm(
    omega: &MixedModulus,
    n: f64,
    beta: &[f64],
    theta: &ExponentVector,
    tolerance: f64,
) -> Result<f64> {
    let dim = omega.dim();
    if beta.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: beta.len(),
        });
    }
    if !(tolerance > 0.0 && tolerance.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "tolerance {} must be positive",
            tolerance
        )));
    }
    for (axis, &b) in beta.iter().enumerate() {
        if !(0.0..1.0).contains(&b) {
            return Err(Error::NonConvergent(format!(
                "weight exponent beta[{}] = {} must lie in [0, 1) for the almost-increase probe",
                axis, b
            )));
        }
    }
    // probe for an almost-increase exponent strictly above every beta
    let mut verified = false;
    'probe: for k in 1..8u32 {
        let alpha: Vec<f64> = beta
            .iter()
            .map(|&b| b + (1.0 - b) * f64::from(k) / 8.0)
            .collect();
        let alpha = match ExponentVector::weight(alpha) {
            Ok(a) => a,
            Err(_) => continue,
        };
        if let Ok(report) = check_s_conditions(omega, &alpha, 12) {
            let s_checks: Vec<_> = report
                .checks
                .iter()
                .filter(|c| c.name.starts_with("S axis"))
                .collect();
            if s_checks.len() == dim && s_checks.iter().all(|c| c.passed) {
                verified = true;
                break 'probe;
            }
        }
    }
    if !verified {
        return Err(Error::NonConvergent(
            "no almost-increase exponent above the weights passed the lattice check".into(),
        ));
    }

    let gamma = gamma_set(omega, n)?;
    let base_caps = axis_caps(omega, 1.0 / n)?;
    let mut previous: Option<f64> = None;
    for extension in 0..96u32 {
        let caps: Vec<u32> = base_caps.iter().map(|&c| c + 1 + extension).collect();
        let members: Vec<MultiIndex> = box_points(&caps)
            .into_iter()
            .filter(|s| !gamma.contains(s))
            .collect();
        let seq = weighted_sequence(dim, omega, beta, &members);
        let value = sequence_norm(&seq, theta)?;
        if let Some(prev) = previous {
            if (value - prev).abs() <= tolerance * value.max(f64::MIN_POSITIVE) {
                return Ok(value);
            }
        }
        previous = Some(value);
    }
    Err(Error::NonConvergent(
        "weighted tail sum did not stabilize within the enumeration cap".into(),
    ))
}
