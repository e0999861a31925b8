//! Exact spectral representation of multivariate trigonometric polynomials:
//! frequency vectors, dyadic blocks, discrete transforms and partial-sum
//! operators.
//!
//! A polynomial is a finite map from integer frequency vectors to complex
//! amplitudes. Dyadic blocks collect the frequencies with
//! `2^(s_j - 1) <= |k_j| < 2^s_j` on every axis; a block with any `s_j = 0`
//! is empty because no integer lies in `[1/2, 1)`.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Integer frequency vector of a single harmonic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FrequencyIndex(Vec<i64>);

impl FrequencyIndex {
    pub fn new(components: Vec<i64>) -> Self {
        assert!(!components.is_empty(), "frequency vector must have dim >= 1");
        FrequencyIndex(components)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for FrequencyIndex {
    fn from(v: Vec<i64>) -> Self {
        FrequencyIndex::new(v)
    }
}

/// Vector of dyadic levels, one nonnegative integer per axis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(levels: Vec<u32>) -> Self {
        assert!(!levels.is_empty(), "multi-index must have dim >= 1");
        MultiIndex(levels)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn levels(&self) -> &[u32] {
        &self.0
    }

    /// Sum of levels.
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&s| u64::from(s)).sum()
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex::new(v)
    }
}

/// All integer frequencies `k` with `2^(s-1) <= |k| < 2^s` on one axis.
/// Empty for `s = 0`.
fn axis_block(s: u32) -> Vec<i64> {
    if s == 0 {
        return Vec::new();
    }
    let lo = 1i64 << (s - 1);
    let hi = 1i64 << s;
    let mut out = Vec::with_capacity((hi - lo) as usize * 2);
    for k in lo..hi {
        out.push(-k);
    }
    for k in lo..hi {
        out.push(k);
    }
    out.sort_unstable();
    out
}

/// Enumerates the dyadic block `rho(s)`, the set of frequency vectors with
/// `2^(s_j - 1) <= |k_j| < 2^s_j` on every axis. Empty when any `s_j = 0`.
pub fn dyadic_block(s: &MultiIndex) -> Vec<FrequencyIndex> {
    let per_axis: Vec<Vec<i64>> = s.levels().iter().map(|&sj| axis_block(sj)).collect();
    if per_axis.iter().any(|axis| axis.is_empty()) {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(per_axis.iter().map(|a| a.len()).product());
    let mut current = vec![0i64; s.dim()];
    fill_product(&per_axis, 0, &mut current, &mut out);
    out
}

fn fill_product(
    per_axis: &[Vec<i64>],
    axis: usize,
    current: &mut Vec<i64>,
    out: &mut Vec<FrequencyIndex>,
) {
    if axis == per_axis.len() {
        out.push(FrequencyIndex::new(current.clone()));
        return;
    }
    for &k in &per_axis[axis] {
        current[axis] = k;
        fill_product(per_axis, axis + 1, current, out);
    }
}

/// The unique dyadic level of one nonzero frequency component:
/// `2^(s-1) <= |k| < 2^s`.
fn axis_level(k: i64) -> Result<u32> {
    if k == 0 {
        return Err(Error::ZeroFrequencyComponent);
    }
    let a = k.unsigned_abs();
    Ok(64 - a.leading_zeros())
}

/// Finds the unique `s` with `k` in `rho(s)`. Frequencies with a zero
/// component lie outside every block.
pub fn block_of(k: &FrequencyIndex) -> Result<MultiIndex> {
    let levels = k
        .components()
        .iter()
        .map(|&kj| axis_level(kj))
        .collect::<Result<Vec<u32>>>()?;
    Ok(MultiIndex::new(levels))
}

/// Sparse spectrum of a trigonometric polynomial: a finite map from
/// frequency vectors to complex amplitudes. Absent keys mean amplitude zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTensor {
    dim: usize,
    entries: BTreeMap<FrequencyIndex, Complex64>,
}

impl CoefficientTensor {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be >= 1");
        CoefficientTensor {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sets the amplitude at `k`; exact zeros are pruned.
    pub fn insert(&mut self, k: FrequencyIndex, amplitude: Complex64) -> Result<()> {
        if k.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: k.dim(),
            });
        }
        if !amplitude.re.is_finite() || !amplitude.im.is_finite() {
            return Err(Error::NonFiniteValue);
        }
        if amplitude == Complex64::new(0.0, 0.0) {
            self.entries.remove(&k);
        } else {
            self.entries.insert(k, amplitude);
        }
        Ok(())
    }

    /// Adds `amplitude` to the existing entry at `k`.
    pub fn accumulate(&mut self, k: FrequencyIndex, amplitude: Complex64) -> Result<()> {
        let current = self.amplitude(&k);
        self.insert(k, current + amplitude)
    }

    pub fn amplitude(&self, k: &FrequencyIndex) -> Complex64 {
        self.entries
            .get(k)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FrequencyIndex, &Complex64)> {
        self.entries.iter()
    }

    /// Per-axis bound `M_j = max |k_j|` over the stored support; all zeros
    /// for the empty tensor.
    pub fn maxfreq(&self) -> Vec<i64> {
        let mut m = vec![0i64; self.dim];
        for k in self.entries.keys() {
            for (axis, &kj) in k.components().iter().enumerate() {
                m[axis] = m[axis].max(kj.abs());
            }
        }
        m
    }

    pub fn scaled(&self, factor: Complex64) -> CoefficientTensor {
        let mut out = CoefficientTensor::new(self.dim);
        for (k, a) in &self.entries {
            let v = a * factor;
            if v != Complex64::new(0.0, 0.0) {
                out.entries.insert(k.clone(), v);
            }
        }
        out
    }

    pub fn add(&self, other: &CoefficientTensor) -> Result<CoefficientTensor> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut out = self.clone();
        for (k, a) in &other.entries {
            out.accumulate(k.clone(), *a)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &CoefficientTensor) -> Result<CoefficientTensor> {
        self.add(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    /// Restriction of the spectrum to the dyadic block `rho(s)`.
    pub fn delta_block(&self, s: &MultiIndex) -> CoefficientTensor {
        let mut out = CoefficientTensor::new(self.dim);
        if s.levels().contains(&0) {
            return out;
        }
        for (k, a) in &self.entries {
            if let Ok(b) = block_of(k) {
                if &b == s {
                    out.entries.insert(k.clone(), *a);
                }
            }
        }
        out
    }

    /// Restriction of the spectrum to an explicit frequency set.
    pub fn partial_sum(&self, q: &BTreeSet<FrequencyIndex>) -> CoefficientTensor {
        let mut out = CoefficientTensor::new(self.dim);
        for (k, a) in &self.entries {
            if q.contains(k) {
                out.entries.insert(k.clone(), *a);
            }
        }
        out
    }

    /// Step-hyperbolic-cross partial sum: keeps every coefficient whose
    /// dyadic level satisfies `<s, gamma> < n`. Coefficients with a zero
    /// frequency component belong to no block and are dropped.
    pub fn step_hyperbolic_sum(&self, gamma: &[f64], n: f64) -> Result<CoefficientTensor> {
        if gamma.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: gamma.len(),
            });
        }
        for (axis, &g) in gamma.iter().enumerate() {
            if !(g > 0.0 && g.is_finite()) {
                return Err(Error::InvalidExponent {
                    role: "gamma",
                    axis,
                    value: g,
                });
            }
        }
        let mut out = CoefficientTensor::new(self.dim);
        for (k, a) in &self.entries {
            let Ok(s) = block_of(k) else { continue };
            let dot: f64 = s
                .levels()
                .iter()
                .zip(gamma)
                .map(|(&sj, &gj)| f64::from(sj) * gj)
                .sum();
            if dot < n {
                out.entries.insert(k.clone(), *a);
            }
        }
        Ok(out)
    }

    /// Groups the support by dyadic block. Frequencies with a zero component
    /// are skipped; they belong to no block.
    pub fn blocks(&self) -> BTreeMap<MultiIndex, CoefficientTensor> {
        let mut out: BTreeMap<MultiIndex, CoefficientTensor> = BTreeMap::new();
        for (k, a) in &self.entries {
            let Ok(s) = block_of(k) else { continue };
            out.entry(s)
                .or_insert_with(|| CoefficientTensor::new(self.dim))
                .entries
                .insert(k.clone(), *a);
        }
        out
    }
}

/// Complex samples on a uniform tensor grid over `[0, 2*pi)^m` with points
/// `x_j = 2*pi*i/n_j`. Axis 0 varies fastest in the flat value array.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleGrid {
    dim: usize,
    sizes: Vec<usize>,
    values: Vec<Complex64>,
}

impl SampleGrid {
    pub fn new(sizes: Vec<usize>, values: Vec<Complex64>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::InvalidArgument(
                "grid sizes must be nonempty and positive".into(),
            ));
        }
        let total: usize = sizes.iter().product();
        if values.len() != total {
            return Err(Error::InvalidArgument(format!(
                "value count {} does not match grid size {}",
                values.len(),
                total
            )));
        }
        Ok(SampleGrid {
            dim: sizes.len(),
            sizes,
            values,
        })
    }

    pub fn zeros(sizes: Vec<usize>) -> Result<Self> {
        let total: usize = sizes.iter().product();
        SampleGrid::new(sizes, vec![Complex64::new(0.0, 0.0); total])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Pointwise moduli as a real array in grid order.
    pub fn moduli(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }
}

/// Least power of two >= `4 * max(M_j, 1)`, scaled by `oversample`. This is
/// the automatic grid rule used everywhere a tensor is sampled for norm
/// evaluation; it always satisfies the anti-aliasing bound `n >= 2*M + 1`.
pub fn auto_sizes(maxfreq: &[i64], oversample: usize) -> Vec<usize> {
    let os = oversample.max(1);
    maxfreq
        .iter()
        .map(|&m| {
            let target = 4 * (m.unsigned_abs().max(1) as usize);
            target.next_power_of_two() * os
        })
        .collect()
}

fn check_aliasing(sizes: &[usize], maxfreq: &[i64]) -> Result<()> {
    for (axis, (&n, &m)) in sizes.iter().zip(maxfreq).enumerate() {
        let needed = 2 * (m.unsigned_abs() as usize) + 1;
        if n < needed {
            return Err(Error::GridTooCoarse {
                axis,
                size: n,
                needed,
            });
        }
    }
    Ok(())
}

/// In-place FFT along one axis of the flat array (axis 0 fastest).
fn fft_axis(values: &mut [Complex64], sizes: &[usize], axis: usize, inverse: bool) {
    let n = sizes[axis];
    if n == 1 {
        return;
    }
    let mut planner = FftPlanner::<f64>::new();
    let fft = if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    };
    let stride: usize = sizes[..axis].iter().product();
    let block = stride * n;
    let total = values.len();
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for outer in (0..total).step_by(block) {
        for inner in 0..stride {
            let base = outer + inner;
            for t in 0..n {
                line[t] = values[base + t * stride];
            }
            fft.process(&mut line);
            for t in 0..n {
                values[base + t * stride] = line[t];
            }
        }
    }
}

/// Evaluates the polynomial on a uniform grid: the value at the point
/// `x = 2*pi*i/n` per axis equals the sum of `a_k * exp(i<k, x>)`.
/// Requires `n_j >= 2*M_j + 1` so no two stored frequencies alias.
pub fn synthesize(c: &CoefficientTensor, sizes: &[usize]) -> Result<SampleGrid> {
    if sizes.len() != c.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            got: sizes.len(),
        });
    }
    check_aliasing(sizes, &c.maxfreq())?;
    let mut grid = SampleGrid::zeros(sizes.to_vec())?;
    for (k, &a) in c.iter() {
        let mut flat = 0usize;
        let mut stride = 1usize;
        for (axis, &kj) in k.components().iter().enumerate() {
            let n = sizes[axis] as i64;
            let bin = kj.rem_euclid(n) as usize;
            flat += bin * stride;
            stride *= sizes[axis];
        }
        grid.values[flat] += a;
    }
    for axis in 0..sizes.len() {
        fft_axis(&mut grid.values, sizes, axis, true);
    }
    Ok(grid)
}

/// Recovers the coefficients of the polynomial sampled on the grid, for
/// every frequency with `|k_j| <= M_j`. Exact (to floating accuracy) when
/// the sampled polynomial's spectrum lies inside the bound. Bins below
/// `1e-13` of the largest recovered amplitude are transform rounding noise
/// and are dropped, keeping the result sparse.
pub fn analyze(g: &SampleGrid, maxfreq: &[i64]) -> Result<CoefficientTensor> {
    if maxfreq.len() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            got: maxfreq.len(),
        });
    }
    check_aliasing(g.sizes(), maxfreq)?;
    let mut work = g.values().to_vec();
    let sizes = g.sizes();
    for axis in 0..sizes.len() {
        fft_axis(&mut work, sizes, axis, false);
    }
    let scale = 1.0 / (g.len() as f64);
    let bounds: Vec<i64> = maxfreq.iter().map(|&m| m.abs()).collect();
    let mut raw: Vec<(Vec<i64>, Complex64)> = Vec::new();
    let mut k = vec![0i64; g.dim()];
    collect_coeffs(&work, sizes, &bounds, 0, &mut k, scale, &mut raw);
    let peak = raw.iter().map(|(_, v)| v.norm()).fold(0.0f64, f64::max);
    let floor = peak * 1e-13;
    let mut out = CoefficientTensor::new(g.dim());
    for (key, v) in raw {
        if v.norm() > floor {
            out.insert(FrequencyIndex::new(key), v)?;
        }
    }
    Ok(out)
}

fn collect_coeffs(
    work: &[Complex64],
    sizes: &[usize],
    bounds: &[i64],
    axis: usize,
    k: &mut Vec<i64>,
    scale: f64,
    raw: &mut Vec<(Vec<i64>, Complex64)>,
) {
    if axis == sizes.len() {
        let mut flat = 0usize;
        let mut stride = 1usize;
        for (a, &kj) in k.iter().enumerate() {
            let n = sizes[a] as i64;
            flat += kj.rem_euclid(n) as usize * stride;
            stride *= sizes[a];
        }
        let v = work[flat] * scale;
        if v.norm() > 0.0 {
            raw.push((k.clone(), v));
        }
        return;
    }
    for kj in -bounds[axis]..=bounds[axis] {
        k[axis] = kj;
        collect_coeffs(work, sizes, bounds, axis + 1, k, scale, raw);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    fn freq(k: &[i64]) -> FrequencyIndex {
        FrequencyIndex::new(k.to_vec())
    }

    fn levels(s: &[u32]) -> MultiIndex {
        MultiIndex::new(s.to_vec())
    }

    #[test]
    fn dyadic_block_1d_level_one() {
        let b = dyadic_block(&levels(&[1]));
        let got: Vec<i64> = b.iter().map(|k| k.components()[0]).collect();
        assert_eq!(got, vec![-1, 1]);
    }

    #[test]
    fn dyadic_block_1d_level_two() {
        let b = dyadic_block(&levels(&[2]));
        let got: Vec<i64> = b.iter().map(|k| k.components()[0]).collect();
        assert_eq!(got, vec![-3, -2, 2, 3]);
    }

    #[test]
    fn dyadic_block_zero_level_is_empty() {
        assert!(dyadic_block(&levels(&[1, 0])).is_empty());
        // brute-force over |k_j| <= 8: membership needs 1 <= |k1| < 2 and
        // 1/2 <= |k2| < 1, and no integer satisfies the second range
        let mut count = 0;
        for k1 in -8i64..=8 {
            for k2 in -8i64..=8 {
                let axis1 = 1.0 <= (k1.abs() as f64) && (k1.abs() as f64) < 2.0;
                let axis2 = 0.5 <= (k2.abs() as f64) && (k2.abs() as f64) < 1.0;
                if axis1 && axis2 {
                    count += 1;
                }
            }
        }
        assert_eq!(count, 0);
    }

    #[test]
    fn block_of_examples() {
        assert_eq!(block_of(&freq(&[1, -1])).unwrap(), levels(&[1, 1]));
        assert_eq!(block_of(&freq(&[4, 7])).unwrap(), levels(&[3, 3]));
        assert_eq!(
            block_of(&freq(&[0, 3])).unwrap_err(),
            Error::ZeroFrequencyComponent
        );
    }

    #[test]
    fn block_of_round_trip() {
        for s1 in 0u32..=6 {
            for s2 in 0u32..=6 {
                let s = levels(&[s1, s2]);
                for k in dyadic_block(&s) {
                    assert_eq!(block_of(&k).unwrap(), s);
                }
            }
        }
    }

    #[test]
    fn blocks_are_disjoint_and_cover() {
        // every k with nonzero components and |k_j| <= 63 lies in exactly one
        // block with levels <= 6
        for k1 in -63i64..=63 {
            for k2 in -63i64..=63 {
                if k1 == 0 || k2 == 0 {
                    assert!(block_of(&freq(&[k1, k2])).is_err());
                    continue;
                }
                let s = block_of(&freq(&[k1, k2])).unwrap();
                assert!(s.levels().iter().all(|&sj| (1..=6).contains(&sj)));
                let members = dyadic_block(&s);
                assert_eq!(members.iter().filter(|m| **m == freq(&[k1, k2])).count(), 1);
            }
        }
    }

    #[test]
    fn synthesize_single_harmonic() {
        let mut c = CoefficientTensor::new(1);
        c.insert(freq(&[1]), Complex64::new(1.0, 0.0)).unwrap();
        let g = synthesize(&c, &[8]).unwrap();
        for i in 0..8 {
            let x = 2.0 * PI * i as f64 / 8.0;
            let expect = Complex64::new(x.cos(), x.sin());
            assert!((g.values()[i] - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn synthesize_empty_tensor_is_zero() {
        let c = CoefficientTensor::new(2);
        let g = synthesize(&c, &[4, 4]).unwrap();
        assert!(g.values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn synthesize_rejects_coarse_grid() {
        let mut c = CoefficientTensor::new(1);
        c.insert(freq(&[4]), Complex64::new(1.0, 0.0)).unwrap();
        match synthesize(&c, &[8]) {
            Err(Error::GridTooCoarse { needed: 9, .. }) => {}
            other => panic!("expected GridTooCoarse, got {:?}", other),
        }
    }

    fn random_tensor(rng: &mut StdRng, dim: usize, maxfreq: i64, terms: usize) -> CoefficientTensor {
        let mut c = CoefficientTensor::new(dim);
        for _ in 0..terms {
            let k: Vec<i64> = (0..dim).map(|_| rng.gen_range(-maxfreq..=maxfreq)).collect();
            let a = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            c.insert(freq(&k), a).unwrap();
        }
        c
    }

    #[test]
    fn analyze_round_trip_random() {
        let mut rng = StdRng::seed_from_u64(42);
        let c = random_tensor(&mut rng, 2, 3, 20);
        let g = synthesize(&c, &[8, 8]).unwrap();
        let back = analyze(&g, &[3, 3]).unwrap();
        let scale: f64 = c.iter().map(|(_, a)| a.norm()).fold(0.0, f64::max);
        for (k, a) in c.iter() {
            assert!((back.amplitude(k) - a).norm() <= 1e-10 * scale);
        }
    }

    #[test]
    fn analyze_constant_grid() {
        let g = SampleGrid::new(vec![8, 8], vec![Complex64::new(1.0, 0.0); 64]).unwrap();
        let c = analyze(&g, &[2, 2]).unwrap();
        assert!((c.amplitude(&freq(&[0, 0])) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(c.support_len(), 1);
    }

    #[test]
    fn analyze_single_harmonic() {
        let mut c = CoefficientTensor::new(2);
        c.insert(freq(&[2, 1]), Complex64::new(1.0, 0.0)).unwrap();
        let g = synthesize(&c, &[8, 8]).unwrap();
        let back = analyze(&g, &[3, 3]).unwrap();
        assert!((back.amplitude(&freq(&[2, 1])) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(back.support_len(), 1);
    }

    #[test]
    fn analyze_is_linear() {
        let mut rng = StdRng::seed_from_u64(7);
        let c1 = random_tensor(&mut rng, 2, 3, 10);
        let c2 = random_tensor(&mut rng, 2, 3, 10);
        let g1 = synthesize(&c1, &[16, 16]).unwrap();
        let g2 = synthesize(&c2, &[16, 16]).unwrap();
        let (alpha, beta) = (Complex64::new(0.7, -0.2), Complex64::new(-1.3, 0.4));
        let mixed: Vec<Complex64> = g1
            .values()
            .iter()
            .zip(g2.values())
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        let g = SampleGrid::new(vec![16, 16], mixed).unwrap();
        let lhs = analyze(&g, &[3, 3]).unwrap();
        let rhs = analyze(&g1, &[3, 3])
            .unwrap()
            .scaled(alpha)
            .add(&analyze(&g2, &[3, 3]).unwrap().scaled(beta))
            .unwrap();
        for (k, a) in rhs.iter() {
            assert!((lhs.amplitude(k) - a).norm() < 1e-10);
        }
    }

    #[test]
    fn delta_block_restricts() {
        let mut c = CoefficientTensor::new(1);
        c.insert(freq(&[1]), Complex64::new(1.0, 0.0)).unwrap();
        c.insert(freq(&[3]), Complex64::new(2.0, 0.0)).unwrap();
        let d = c.delta_block(&levels(&[1]));
        assert_eq!(d.support_len(), 1);
        assert!((d.amplitude(&freq(&[1])) - Complex64::new(1.0, 0.0)).norm() == 0.0);
    }

    #[test]
    fn delta_block_zero_level_empty() {
        let mut c = CoefficientTensor::new(2);
        c.insert(freq(&[1, 1]), Complex64::new(1.0, 0.0)).unwrap();
        assert!(c.delta_block(&levels(&[1, 0])).is_empty());
    }

    #[test]
    fn delta_blocks_partition_support() {
        let mut rng = StdRng::seed_from_u64(3);
        let mut c = CoefficientTensor::new(2);
        for _ in 0..60 {
            let k: Vec<i64> = (0..2)
                .map(|_| {
                    let a = rng.gen_range(1i64..=15);
                    if rng.gen_bool(0.5) {
                        a
                    } else {
                        -a
                    }
                })
                .collect();
            c.insert(freq(&k), Complex64::new(rng.gen_range(-1.0..1.0), 0.0))
                .unwrap();
        }
        let mut sum = CoefficientTensor::new(2);
        for s1 in 1u32..=4 {
            for s2 in 1u32..=4 {
                sum = sum.add(&c.delta_block(&levels(&[s1, s2]))).unwrap();
            }
        }
        assert_eq!(sum, c);
    }

    #[test]
    fn partial_sum_and_complement() {
        let mut rng = StdRng::seed_from_u64(11);
        let c = random_tensor(&mut rng, 2, 7, 25);
        let support: BTreeSet<FrequencyIndex> = c.iter().map(|(k, _)| k.clone()).collect();
        assert_eq!(c.partial_sum(&support), c);
        assert!(c.partial_sum(&BTreeSet::new()).is_empty());

        let half: BTreeSet<FrequencyIndex> = support.iter().take(12).cloned().collect();
        let rest: BTreeSet<FrequencyIndex> = support.difference(&half).cloned().collect();
        let re = c.partial_sum(&half).add(&c.partial_sum(&rest)).unwrap();
        assert_eq!(re, c);
    }

    #[test]
    fn step_hyperbolic_threshold() {
        let mut c = CoefficientTensor::new(2);
        c.insert(freq(&[1, 1]), Complex64::new(1.0, 0.0)).unwrap();
        c.insert(freq(&[2, 2]), Complex64::new(1.0, 0.0)).unwrap();
        let s = c.step_hyperbolic_sum(&[1.0, 1.0], 3.0).unwrap();
        assert_eq!(s.support_len(), 1);
        assert!(s.amplitude(&freq(&[1, 1])).norm() > 0.0);

        // below every block level: nothing survives
        let s0 = c.step_hyperbolic_sum(&[1.0, 1.0], 1.0).unwrap();
        assert!(s0.is_empty());

        // huge level keeps everything without zero components
        let sall = c.step_hyperbolic_sum(&[1.0, 1.0], 1e9).unwrap();
        assert_eq!(sall, c);
    }

    #[test]
    fn step_hyperbolic_drops_zero_components() {
        let mut c = CoefficientTensor::new(2);
        c.insert(freq(&[0, 5]), Complex64::new(1.0, 0.0)).unwrap();
        c.insert(freq(&[1, 1]), Complex64::new(1.0, 0.0)).unwrap();
        let s = c.step_hyperbolic_sum(&[1.0, 1.0], 1e9).unwrap();
        assert_eq!(s.support_len(), 1);
        assert!(s.amplitude(&freq(&[0, 5])).norm() == 0.0);
    }

    #[test]
    fn auto_sizes_rule() {
        assert_eq!(auto_sizes(&[3, 3], 1), vec![16, 16]);
        assert_eq!(auto_sizes(&[31], 1), vec![128]);
        assert_eq!(auto_sizes(&[0], 1), vec![4]);
        assert_eq!(auto_sizes(&[3], 2), vec![32]);
    }
}
