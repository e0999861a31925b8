//! One-sided numerical checks of the block-norm inequalities on generated
//! ensembles of trigonometric polynomials.
//!
//! The hidden constants are unknowable, so each check returns a
//! scale-invariant ratio; callers assert stability of the ratio across a
//! degree ladder rather than absolute bounds.

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::norms::{
    mixed_lorentz_norm, sequence_norm, tensor_lebesgue_norm, tensor_lorentz_norm, ExponentVector,
    MultiSequence,
};
use crate::spectral::{auto_sizes, synthesize, CoefficientTensor, FrequencyIndex};
use crate::witnesses::block_exponential;

/// Seeded ensemble of dense random-phase polynomials: every frequency with
/// `1 <= |k_j| <= degree` carries a unit-modulus coefficient, so no member
/// has a zero-frequency component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnsembleSpec {
    pub dim: usize,
    pub degree: u32,
    pub count: usize,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(dim: usize, degree: u32, count: usize, seed: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be >= 1".into()));
        }
        if degree == 0 {
            return Err(Error::InvalidArgument("degree must be >= 1".into()));
        }
        if count == 0 {
            return Err(Error::EmptyInput("ensemble count"));
        }
        Ok(EnsembleSpec {
            dim,
            degree,
            count,
            seed,
        })
    }

    pub fn generate(&self) -> Vec<CoefficientTensor> {
        (0..self.count)
            .map(|index| {
                let mut rng =
                    StdRng::seed_from_u64(self.seed ^ (index as u64).wrapping_mul(0x9e3779b9));
                random_phase_polynomial(&mut rng, self.dim, self.degree)
            })
            .collect()
    }
}

fn random_phase_polynomial(rng: &mut StdRng, dim: usize, degree: u32) -> CoefficientTensor {
    let mut c = CoefficientTensor::new(dim);
    let mut k = vec![0i64; dim];
    fill(rng, &mut c, &mut k, 0, degree);
    c
}

fn fill(rng: &mut StdRng, c: &mut CoefficientTensor, k: &mut Vec<i64>, axis: usize, degree: u32) {
    if axis == k.len() {
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        c.insert(FrequencyIndex::new(k.clone()), Complex64::from_polar(1.0, phase))
            .expect("valid key");
        return;
    }
    for a in 1..=i64::from(degree) {
        for kj in [-a, a] {
            k[axis] = kj;
            fill(rng, c, k, axis + 1, degree);
        }
    }
}

/// Ratio of the mixed Lebesgue norm to the block-norm aggregate
/// `(sum_s ||delta_s f||^beta)^(1/beta)` with `beta = min(q_1..q_m, 2)`.
pub fn check_block_aggregate(f: &CoefficientTensor, q: &ExponentVector, oversample: usize) -> Result<f64> {
    if q.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: q.dim(),
        });
    }
    let beta = q.values().iter().fold(2.0f64, |acc, &v| acc.min(v));
    let numerator = tensor_lebesgue_norm(f, q, oversample)?;
    let mut acc = 0.0f64;
    for (_, block) in f.blocks() {
        let norm = tensor_lebesgue_norm(&block, q, oversample)?;
        acc += norm.powf(beta);
    }
    let denominator = acc.powf(1.0 / beta);
    if denominator == 0.0 {
        return Err(Error::EmptyInput("zero polynomial in block-norm check"));
    }
    Ok(numerator / denominator)
}

/// Ratio of the target-space mixed Lorentz norm to the weighted block sum
/// with per-axis weights `2^(s_j (1/p_j - 1/q_j))`, aggregated in the
/// iterated norm with the target fine exponents.
pub fn check_embedding_bound(
    f: &CoefficientTensor,
    p: &ExponentVector,
    theta1: &ExponentVector,
    q: &ExponentVector,
    theta2: &ExponentVector,
    oversample: usize,
) -> Result<f64> {
    let m = f.dim();
    for v in [p, theta1, q, theta2] {
        if v.dim() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: v.dim(),
            });
        }
    }
    for axis in 0..m {
        let (pj, qj) = (p.values()[axis], q.values()[axis]);
        if !(pj >= 1.0 && pj < qj && qj.is_finite()) {
            return Err(Error::InvalidExponent {
                role: "p<q",
                axis,
                value: pj,
            });
        }
    }
    if m >= 2 {
        let max_theta = theta2.values()[..m - 1]
            .iter()
            .fold(0.0f64, |a, &v| a.max(v));
        let min_q = q.values()[1..].iter().fold(f64::INFINITY, |a, &v| a.min(v));
        if max_theta >= min_q {
            return Err(Error::InvalidArgument(format!(
                "fine exponents too large: max(theta2[..m-1]) = {} must stay below min(q[1..]) = {}",
                max_theta, min_q
            )));
        }
    }
    let numerator = tensor_lorentz_norm(f, q, theta2, oversample)?;
    let mut seq = MultiSequence::new(m);
    for (s, block) in f.blocks() {
        let weight: f64 = s
            .levels()
            .iter()
            .zip(p.values().iter().zip(q.values()))
            .map(|(&sj, (&pj, &qj))| (f64::from(sj) * (1.0 / pj - 1.0 / qj)).exp2())
            .product();
        let norm = tensor_lorentz_norm(&block, p, theta1, oversample)?;
        seq.insert(s, weight * norm)?;
    }
    let tau = ExponentVector::summation(theta2.values().to_vec())?;
    let denominator = sequence_norm(&seq, &tau)?;
    if denominator == 0.0 {
        return Err(Error::EmptyInput("zero polynomial in weighted block sum"));
    }
    Ok(numerator / denominator)
}

/// Lower-bound ratio for lacunary series: builds
/// `f = sum_s b_s * sum_(k in rho(s)) e^(i<k, x>)` and divides its mixed
/// Lorentz norm by the weighted block aggregate with the intermediate
/// exponents. Callers assert the ratio stays bounded below.
pub fn check_lacunary_lower(
    b: &MultiSequence,
    q: &ExponentVector,
    theta: &ExponentVector,
    lambda: &ExponentVector,
    oversample: usize,
) -> Result<f64> {
    let m = b.dim();
    for v in [q, theta, lambda] {
        if v.dim() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: v.dim(),
            });
        }
    }
    for axis in 0..m {
        let (qj, lj) = (q.values()[axis], lambda.values()[axis]);
        if !(qj > 1.0 && qj < lj && lj.is_finite()) {
            return Err(Error::InvalidExponent {
                role: "q<lambda",
                axis,
                value: qj,
            });
        }
    }
    let mut f = CoefficientTensor::new(m);
    let mut seq = MultiSequence::new(m);
    for (s, &bs) in b.iter() {
        if bs == 0.0 || s.levels().contains(&0) {
            continue;
        }
        let block = block_exponential(s)?.scaled(Complex64::new(bs, 0.0));
        let weight: f64 = s
            .levels()
            .iter()
            .zip(lambda.values().iter().zip(q.values()))
            .map(|(&sj, (&lj, &qj))| (f64::from(sj) * (1.0 / lj - 1.0 / qj)).exp2())
            .product();
        let norm = tensor_lorentz_norm(&block, lambda, theta, oversample)?;
        seq.insert(s.clone(), weight * norm)?;
        f = f.add(&block)?;
    }
    if f.is_empty() {
        return Err(Error::EmptyInput("lacunary sequence with no nonempty block"));
    }
    let grid = synthesize(&f, &auto_sizes(&f.maxfreq(), oversample))?;
    let numerator = mixed_lorentz_norm(&grid, q, theta)?;
    let tau = ExponentVector::summation(theta.values().to_vec())?;
    let denominator = sequence_norm(&seq, &tau)?;
    Ok(numerator / denominator)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index_sets::{kappa_cap, kappa_set};
    use crate::spectral::MultiIndex;

    #[test]
    fn ensemble_is_deterministic_and_avoids_zero_frequencies() {
        let spec = EnsembleSpec::new(2, 3, 4, 99).unwrap();
        let a = spec.generate();
        let b = spec.generate();
        assert_eq!(a, b);
        for f in &a {
            assert_eq!(f.support_len(), 36); // (2*3)^2
            for (k, amp) in f.iter() {
                assert!(k.components().iter().all(|&kj| kj != 0));
                assert!((amp.norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn block_aggregate_single_block_is_exactly_one() {
        let s = MultiIndex::new(vec![2, 1]);
        let f = block_exponential(&s).unwrap();
        let q = ExponentVector::integrability(vec![2.5, 1.8]).unwrap();
        let ratio = check_block_aggregate(&f, &q, 1).unwrap();
        assert!((ratio - 1.0).abs() < 1e-10);
    }

    #[test]
    fn block_aggregate_two_blocks_parseval() {
        let a = block_exponential(&MultiIndex::new(vec![1, 1])).unwrap();
        let b = block_exponential(&MultiIndex::new(vec![2, 2])).unwrap();
        // scale the second so both have equal flat norms
        let na = (a.support_len() as f64).sqrt();
        let nb = (b.support_len() as f64).sqrt();
        let f = a
            .add(&b.scaled(Complex64::new(na / nb, 0.0)))
            .unwrap();
        let q = ExponentVector::integrability(vec![2.0, 2.0]).unwrap();
        let ratio = check_block_aggregate(&f, &q, 1).unwrap();
        assert!(ratio <= 1.0 + 1e-8);
    }

    #[test]
    fn block_aggregate_rejects_zero_polynomial() {
        let f = CoefficientTensor::new(2);
        let q = ExponentVector::integrability(vec![2.0, 2.0]).unwrap();
        assert!(check_block_aggregate(&f, &q, 1).is_err());
    }

    #[test]
    fn embedding_single_block_finite_positive() {
        let s = MultiIndex::new(vec![1, 2]);
        let f = block_exponential(&s).unwrap();
        let p = ExponentVector::integrability(vec![2.0, 2.0]).unwrap();
        let theta1 = ExponentVector::fine(vec![2.0, 2.0]).unwrap();
        let q = ExponentVector::integrability(vec![4.0, 4.0]).unwrap();
        let theta2 = ExponentVector::fine(vec![2.0, 2.0]).unwrap();
        let ratio = check_embedding_bound(&f, &p, &theta1, &q, &theta2, 1).unwrap();
        assert!(ratio.is_finite() && ratio > 0.0);
    }

    #[test]
    fn embedding_enforces_hypotheses() {
        let f = block_exponential(&MultiIndex::new(vec![1, 1])).unwrap();
        let p = ExponentVector::integrability(vec![4.0, 4.0]).unwrap();
        let theta1 = ExponentVector::fine(vec![2.0, 2.0]).unwrap();
        let q = ExponentVector::integrability(vec![2.0, 2.0]).unwrap();
        let theta2 = ExponentVector::fine(vec![2.0, 2.0]).unwrap();
        assert!(check_embedding_bound(&f, &p, &theta1, &q, &theta2, 1).is_err());

        // fine exponent must stay below the trailing target exponents
        let p = ExponentVector::integrability(vec![1.5, 1.5]).unwrap();
        let big_theta = ExponentVector::fine(vec![3.0, 2.0]).unwrap();
        assert!(check_embedding_bound(&f, &p, &theta1, &q, &big_theta, 1).is_err());
    }

    #[test]
    fn lacunary_single_block_positive_and_scale_invariant() {
        let mut b = MultiSequence::new(2);
        b.insert(MultiIndex::new(vec![2, 2]), 1.0).unwrap();
        let q = ExponentVector::integrability(vec![2.0, 2.0]).unwrap();
        let theta = ExponentVector::fine(vec![2.0, 2.0]).unwrap();
        let lambda = ExponentVector::integrability(vec![3.0, 3.0]).unwrap();
        let r1 = check_lacunary_lower(&b, &q, &theta, &lambda, 1).unwrap();
        assert!(r1.is_finite() && r1 > 0.0);
        let scaled = b.scaled(7.5).unwrap();
        let r2 = check_lacunary_lower(&scaled, &q, &theta, &lambda, 1).unwrap();
        assert!((r1 - r2).abs() <= 1e-9 * r1);
    }

    #[test]
    fn lacunary_characteristic_ladder_band() {
        let q = ExponentVector::integrability(vec![2.0, 2.0]).unwrap();
        let theta = ExponentVector::fine(vec![2.0, 2.0]).unwrap();
        let lambda = ExponentVector::integrability(vec![3.0, 3.0]).unwrap();
        let gamma = ExponentVector::weight(vec![1.0, 1.0]).unwrap();
        let mut ratios = Vec::new();
        for n in [4u32, 5, 6] {
            let cap = kappa_cap(f64::from(n), &gamma);
            let kappa = kappa_set(f64::from(n), &gamma, &cap).unwrap();
            let b = MultiSequence::characteristic(2, &kappa.members).unwrap();
            ratios.push(check_lacunary_lower(&b, &q, &theta, &lambda, 1).unwrap());
        }
        let (lo, hi) = ratios
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(l, h), &r| (l.min(r), h.max(r)));
        assert!(hi / lo <= 2.0, "ratios {:?}", ratios);
        assert!(lo > 0.0);
    }

    #[test]
    fn lacunary_rejects_empty_sequence() {
        let b = MultiSequence::new(2);
        let q = ExponentVector::integrability(vec![2.0, 2.0]).unwrap();
        let theta = ExponentVector::fine(vec![2.0, 2.0]).unwrap();
        let lambda = ExponentVector::integrability(vec![3.0, 3.0]).unwrap();
        assert!(check_lacunary_lower(&b, &q, &theta, &lambda, 1).is_err());
    }

    #[test]
    fn checks_are_homogeneous_of_degree_zero() {
        let spec = EnsembleSpec::new(2, 4, 1, 5).unwrap();
        let f = spec.generate().pop().unwrap();
        let q = ExponentVector::integrability(vec![3.0, 2.5]).unwrap();
        let r1 = check_block_aggregate(&f, &q, 1).unwrap();
        let r2 = check_block_aggregate(&f.scaled(Complex64::new(0.0, -3.0)), &q, 1).unwrap();
        assert!((r1 - r2).abs() <= 1e-10 * r1);
    }

    #[test]
    fn embedding_max_ratio_does_not_grow_across_degrees() {
        let p = ExponentVector::integrability(vec![2.0, 2.0]).unwrap();
        let theta1 = ExponentVector::fine(vec![2.0, 2.0]).unwrap();
        let q = ExponentVector::integrability(vec![4.0, 4.0]).unwrap();
        let theta2 = ExponentVector::fine(vec![2.0, 2.0]).unwrap();
        let max_at = |degree: u32| -> f64 {
            EnsembleSpec::new(2, degree, 4, 77)
                .unwrap()
                .generate()
                .iter()
                .map(|f| check_embedding_bound(f, &p, &theta1, &q, &theta2, 1).unwrap())
                .fold(0.0f64, f64::max)
        };
        let low = max_at(8);
        let high = max_at(32);
        assert!(high <= 2.0 * low, "degree growth {} -> {}", low, high);
    }

    #[test]
    fn block_aggregate_parseval_bound_on_random_polynomials() {
        let spec = EnsembleSpec::new(2, 5, 10, 31).unwrap();
        let q = ExponentVector::integrability(vec![2.0, 2.0]).unwrap();
        for f in spec.generate() {
            let ratio = check_block_aggregate(&f, &q, 1).unwrap();
            assert!(ratio <= 1.0 + 1e-8, "ratio {}", ratio);
        }
    }
}
