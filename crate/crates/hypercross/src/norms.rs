//! Rearrangement-based Lorentz norms, iterated mixed norms on sample grids,
//! iterated sequence norms, and the smoothness-class membership functional.
//!
//! All grid norms treat the samples as a step function with equal-measure
//! cells. The Lorentz weight `t^(theta/p - 1)` is integrated in closed form
//! per cell, so the quadrature itself is exact; the only discretization
//! error is in sampling the function.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::modulus::MixedModulus;
use crate::spectral::{auto_sizes, synthesize, CoefficientTensor, MultiIndex, SampleGrid};

/// One-dimensional Lorentz exponent pair. `p` in `(1, inf)`, `theta` in
/// `[1, inf)`; the weak-type case `theta = inf` is not supported.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzParams {
    p: f64,
    theta: f64,
}

impl LorentzParams {
    pub fn new(p: f64, theta: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::InvalidExponent {
                role: "p",
                axis: 0,
                value: p,
            });
        }
        if !(theta >= 1.0 && theta.is_finite()) {
            return Err(Error::InvalidExponent {
                role: "theta",
                axis: 0,
                value: theta,
            });
        }
        Ok(LorentzParams { p, theta })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Validated vector of norm exponents. The role fixes the admissible range
/// at construction:
///
/// - integrability (`p`, `q`, `lambda` style): each value in `(1, inf)`
/// - fine (`theta` style): each value in `[1, inf)`
/// - summation (`tau`, `epsilon` style): each value in `[1, inf]`,
///   infinity meaning a supremum along that axis
/// - weight (`gamma`, `r` style): each value positive and finite
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentVector {
    role: ExponentRole,
    values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentRole {
    Integrability,
    Fine,
    Summation,
    Weight,
}

impl ExponentVector {
    pub fn new(role: ExponentRole, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput("exponent vector"));
        }
        for (axis, &v) in values.iter().enumerate() {
            let ok = match role {
                ExponentRole::Integrability => v > 1.0 && v.is_finite(),
                ExponentRole::Fine => v >= 1.0 && v.is_finite(),
                ExponentRole::Summation => v >= 1.0,
                ExponentRole::Weight => v > 0.0 && v.is_finite(),
            };
            if !ok || v.is_nan() {
                return Err(Error::InvalidExponent {
                    role: role_name(role),
                    axis,
                    value: v,
                });
            }
        }
        Ok(ExponentVector { role, values })
    }

    pub fn integrability(values: Vec<f64>) -> Result<Self> {
        Self::new(ExponentRole::Integrability, values)
    }

    pub fn fine(values: Vec<f64>) -> Result<Self> {
        Self::new(ExponentRole::Fine, values)
    }

    pub fn summation(values: Vec<f64>) -> Result<Self> {
        Self::new(ExponentRole::Summation, values)
    }

    pub fn weight(values: Vec<f64>) -> Result<Self> {
        Self::new(ExponentRole::Weight, values)
    }

    pub fn role(&self) -> ExponentRole {
        self.role
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

fn role_name(role: ExponentRole) -> &'static str {
    match role {
        ExponentRole::Integrability => "integrability",
        ExponentRole::Fine => "fine",
        ExponentRole::Summation => "summation",
        ExponentRole::Weight => "weight",
    }
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Non-increasing rearrangement of the sample moduli, interpreted as a
/// step function on `[0, total_measure)` with cells of width
/// `total_measure / count`.
pub fn rearrangement(samples: &[f64], total_measure: f64) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(Error::EmptyInput("rearrangement"));
    }
    if !(total_measure > 0.0 && total_measure.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "total measure {} must be positive and finite",
            total_measure
        )));
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteValue);
    }
    let mut out: Vec<f64> = samples.iter().map(|v| v.abs()).collect();
    out.sort_unstable_by(|a, b| b.partial_cmp(a).expect("finite values"));
    Ok(out)
}

/// One-dimensional Lorentz norm of `|g|` sampled on a uniform grid of
/// `[0, 2*pi)`. The step rearrangement is integrated exactly:
/// the cell `[(i-1)h, ih]` contributes
/// `(g*_i)^theta * (p/theta) * ((ih)^(theta/p) - ((i-1)h)^(theta/p))`.
pub fn lorentz_norm_1d(samples: &[f64], params: LorentzParams) -> Result<f64> {
    let sorted = rearrangement(samples, 2.0 * PI)?;
    let h = 2.0 * PI / sorted.len() as f64;
    let p = params.p();
    let theta = params.theta();
    let ratio = theta / p;
    let mut acc = 0.0;
    let mut prev = 0.0f64;
    for (i, &v) in sorted.iter().enumerate() {
        let t = ((i + 1) as f64) * h;
        let cur = t.powf(ratio);
        if v > 0.0 {
            acc += v.powf(theta) * (cur - prev);
        }
        prev = cur;
    }
    Ok((acc * p / theta).powf(1.0 / theta))
}

/// Plain `L_p` norm of a step function with cell width `h`.
fn lp_step(samples: &[f64], p: f64, h: f64) -> Result<f64> {
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteValue);
    }
    let acc: f64 = samples.iter().map(|v| v.abs().powf(p)).sum();
    Ok((acc * h).powf(1.0 / p))
}

/// Applies a one-dimensional reduction along the current innermost axis of
/// a flat real array (axis 0 fastest), shrinking the grid by one axis.
fn reduce_innermost<F>(values: &[f64], n: usize, f: F) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    values.chunks(n).map(&f).collect()
}

/// Iterated mixed Lorentz norm of a sampled function: the one-dimensional
/// Lorentz norm is applied along axis 1 for every fixed choice of the
/// remaining coordinates, then along axis 2 of the reduced grid, and so on.
pub fn mixed_lorentz_norm(
    g: &SampleGrid,
    p: &ExponentVector,
    theta: &ExponentVector,
) -> Result<f64> {
    check_dim(g.dim(), p.dim())?;
    check_dim(g.dim(), theta.dim())?;
    let mut vals = g.moduli();
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteValue);
    }
    for axis in 0..g.dim() {
        let params = LorentzParams::new(p.values()[axis], theta.values()[axis]).map_err(|_| {
            Error::InvalidExponent {
                role: "lorentz",
                axis,
                value: p.values()[axis],
            }
        })?;
        if !(theta.values()[axis].is_finite()) {
            return Err(Error::InvalidExponent {
                role: "theta",
                axis,
                value: theta.values()[axis],
            });
        }
        let n = g.sizes()[axis];
        vals = reduce_innermost(&vals, n, |chunk| lorentz_norm_1d(chunk, params))?;
    }
    debug_assert_eq!(vals.len(), 1);
    Ok(vals[0])
}

/// Iterated mixed Lebesgue norm: rectangle-rule integral with cell weight
/// `2*pi/n_j` per axis, innermost axis first.
pub fn mixed_lebesgue_norm(g: &SampleGrid, p: &ExponentVector) -> Result<f64> {
    check_dim(g.dim(), p.dim())?;
    for (axis, &pj) in p.values().iter().enumerate() {
        if !(pj >= 1.0 && pj.is_finite()) {
            return Err(Error::InvalidExponent {
                role: "p",
                axis,
                value: pj,
            });
        }
    }
    let mut vals = g.moduli();
    for axis in 0..g.dim() {
        let n = g.sizes()[axis];
        let h = 2.0 * PI / n as f64;
        let pj = p.values()[axis];
        vals = reduce_innermost(&vals, n, |chunk| lp_step(chunk, pj, h))?;
    }
    debug_assert_eq!(vals.len(), 1);
    Ok(vals[0])
}

/// Finitely supported map from dyadic multi-indices to nonnegative reals.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MultiSequence {
    dim: usize,
    entries: BTreeMap<MultiIndex, f64>,
}

impl MultiSequence {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be >= 1");
        MultiSequence {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, s: MultiIndex, value: f64) -> Result<()> {
        if s.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: s.dim(),
            });
        }
        if !value.is_finite() || value < 0.0 {
            return Err(Error::NonFiniteValue);
        }
        self.entries.insert(s, value);
        Ok(())
    }

    /// Characteristic sequence of a set of multi-indices.
    pub fn characteristic<'a, I>(dim: usize, members: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a MultiIndex>,
    {
        let mut out = MultiSequence::new(dim);
        for s in members {
            out.insert(s.clone(), 1.0)?;
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &f64)> {
        self.entries.iter()
    }

    pub fn scaled(&self, factor: f64) -> Result<MultiSequence> {
        let mut out = MultiSequence::new(self.dim);
        for (s, v) in &self.entries {
            out.insert(s.clone(), v * factor)?;
        }
        Ok(out)
    }
}

/// Iterated sequence norm with axis 1 innermost. `tau_j = inf` takes the
/// supremum along axis `j`. Absent entries are zero and contribute nothing.
pub fn sequence_norm(a: &MultiSequence, tau: &ExponentVector) -> Result<f64> {
    check_dim(a.dim(), tau.dim())?;
    for (axis, &t) in tau.values().iter().enumerate() {
        if t.is_nan() || t < 1.0 {
            return Err(Error::InvalidExponent {
                role: "tau",
                axis,
                value: t,
            });
        }
    }
    if a.is_empty() {
        return Ok(0.0);
    }
    let mut current: BTreeMap<Vec<u32>, f64> = a
        .entries
        .iter()
        .map(|(s, &v)| (s.levels().to_vec(), v))
        .collect();
    for &t in tau.values() {
        let mut next: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        if t.is_infinite() {
            for (idx, v) in current {
                let tail = idx[1..].to_vec();
                let slot = next.entry(tail).or_insert(0.0);
                if v > *slot {
                    *slot = v;
                }
            }
        } else {
            for (idx, v) in current {
                let tail = idx[1..].to_vec();
                *next.entry(tail).or_insert(0.0) += v.powf(t);
            }
            for v in next.values_mut() {
                *v = v.powf(1.0 / t);
            }
        }
        current = next;
    }
    Ok(*current.get(&Vec::new()).unwrap_or(&0.0))
}

/// Smoothness-class membership functional: the sequence
/// `s -> ||delta_s(f)||_{p,theta} / Omega(2^-s)` over the nonempty blocks
/// of the spectrum, measured in the iterated `l_tau` norm. Block norms are
/// evaluated on automatically sized grids.
pub fn besov_functional(
    c: &CoefficientTensor,
    omega: &MixedModulus,
    p: &ExponentVector,
    theta: &ExponentVector,
    tau: &ExponentVector,
) -> Result<f64> {
    besov_functional_os(c, omega, p, theta, tau, 1)
}

/// Mixed Lorentz norm of a polynomial given by its spectrum, sampled on an
/// automatically sized grid (see [`auto_sizes`]).
pub fn tensor_lorentz_norm(
    c: &CoefficientTensor,
    p: &ExponentVector,
    theta: &ExponentVector,
    oversample: usize,
) -> Result<f64> {
    let grid = synthesize(c, &auto_sizes(&c.maxfreq(), oversample))?;
    mixed_lorentz_norm(&grid, p, theta)
}

/// Mixed Lebesgue norm of a polynomial given by its spectrum, sampled on an
/// automatically sized grid.
pub fn tensor_lebesgue_norm(
    c: &CoefficientTensor,
    p: &ExponentVector,
    oversample: usize,
) -> Result<f64> {
    let grid = synthesize(c, &auto_sizes(&c.maxfreq(), oversample))?;
    mixed_lebesgue_norm(&grid, p)
}

/// [`besov_functional`] with an explicit grid oversampling factor.
pub fn besov_functional_os(
    c: &CoefficientTensor,
    omega: &MixedModulus,
    p: &ExponentVector,
    theta: &ExponentVector,
    tau: &ExponentVector,
    oversample: usize,
) -> Result<f64> {
    check_dim(c.dim(), omega.dim())?;
    check_dim(c.dim(), p.dim())?;
    let mut seq = MultiSequence::new(c.dim());
    for (s, block) in c.blocks() {
        let sizes = auto_sizes(&block.maxfreq(), oversample);
        let grid = synthesize(&block, &sizes)?;
        let norm = mixed_lorentz_norm(&grid, p, theta)?;
        let w = omega.evaluate_dyadic(&s);
        seq.insert(s, norm / w)?;
    }
    sequence_norm(&seq, tau)
}
