//! Property tests for the structural invariants: rearrangement invariance,
//! sequence-norm monotonicity, block partition, and norm homogeneity.

use proptest::prelude::*;

use hypercross::norms::{
    lorentz_norm_1d, mixed_lebesgue_norm, sequence_norm, ExponentVector, LorentzParams,
    MultiSequence,
};
use hypercross::spectral::{block_of, dyadic_block, CoefficientTensor, FrequencyIndex, MultiIndex,
    SampleGrid};
use hypercross::Complex64;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lorentz_norm_ignores_sample_order(
        mut samples in proptest::collection::vec(0.0f64..10.0, 4..64),
        p in 1.1f64..5.0,
        theta in 1.0f64..4.0,
        swap_a in any::<usize>(),
        swap_b in any::<usize>(),
    ) {
        let params = LorentzParams::new(p, theta).unwrap();
        let before = lorentz_norm_1d(&samples, params).unwrap();
        let (i, j) = (swap_a % samples.len(), swap_b % samples.len());
        samples.swap(i, j);
        let after = lorentz_norm_1d(&samples, params).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn sequence_norm_never_grows_when_tau_grows(
        entries in proptest::collection::vec(((0u32..8, 0u32..8), 0.0f64..5.0), 1..20),
        tau1 in 1.0f64..4.0,
        tau2 in 1.0f64..4.0,
        bump in 0.0f64..4.0,
        axis in 0usize..2,
    ) {
        let mut a = MultiSequence::new(2);
        for ((s1, s2), v) in entries {
            a.insert(MultiIndex::new(vec![s1, s2]), v).unwrap();
        }
        let mut hi = vec![tau1, tau2];
        hi[axis] += bump;
        let lo = ExponentVector::summation(vec![tau1, tau2]).unwrap();
        let hi = ExponentVector::summation(hi).unwrap();
        let vl = sequence_norm(&a, &lo).unwrap();
        let vh = sequence_norm(&a, &hi).unwrap();
        prop_assert!(vh <= vl + 1e-9 * vl.max(1.0));
    }

    #[test]
    fn every_nonzero_frequency_lies_in_exactly_one_block(
        k1 in (1i64..=127).prop_flat_map(|a| prop_oneof![Just(a), Just(-a)]),
        k2 in (1i64..=127).prop_flat_map(|a| prop_oneof![Just(a), Just(-a)]),
    ) {
        let k = FrequencyIndex::new(vec![k1, k2]);
        let s = block_of(&k).unwrap();
        let members = dyadic_block(&s);
        prop_assert_eq!(members.iter().filter(|m| **m == k).count(), 1);
        // neighbours in the level lattice never contain it
        for (axis, delta) in [(0usize, 1i64), (1, 1), (0, -1), (1, -1)] {
            let mut levels: Vec<i64> = s.levels().iter().map(|&v| i64::from(v)).collect();
            levels[axis] += delta;
            if levels[axis] < 0 {
                continue;
            }
            let neighbour = MultiIndex::new(levels.iter().map(|&v| v as u32).collect());
            prop_assert!(!dyadic_block(&neighbour).contains(&k));
        }
    }

    #[test]
    fn mixed_lebesgue_norm_is_homogeneous(
        values in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 16),
        scale in 0.0f64..10.0,
        p1 in 1.0f64..4.0,
        p2 in 1.0f64..4.0,
    ) {
        let complex: Vec<Complex64> = values.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        let grid = SampleGrid::new(vec![4, 4], complex.clone()).unwrap();
        let scaled = SampleGrid::new(vec![4, 4], complex.iter().map(|v| v * scale).collect()).unwrap();
        let p = ExponentVector::new(hypercross::norms::ExponentRole::Fine, vec![p1, p2]).unwrap();
        let base = mixed_lebesgue_norm(&grid, &p).unwrap();
        let grown = mixed_lebesgue_norm(&scaled, &p).unwrap();
        prop_assert!((grown - scale * base).abs() <= 1e-9 * grown.max(1.0));
    }

    #[test]
    fn block_restrictions_partition_random_spectra(
        entries in proptest::collection::vec(((1i64..=31, 1i64..=31), (-1.0f64..1.0, -1.0f64..1.0)), 1..24),
        signs in proptest::collection::vec((any::<bool>(), any::<bool>()), 24),
    ) {
        let mut c = CoefficientTensor::new(2);
        for (((k1, k2), (re, im)), (s1, s2)) in entries.into_iter().zip(signs) {
            let k1 = if s1 { k1 } else { -k1 };
            let k2 = if s2 { k2 } else { -k2 };
            c.insert(FrequencyIndex::new(vec![k1, k2]), Complex64::new(re, im)).unwrap();
        }
        let mut sum = CoefficientTensor::new(2);
        for (_, block) in c.blocks() {
            sum = sum.add(&block).unwrap();
        }
        prop_assert_eq!(sum, c);
    }
}
