//! Families of mixed modulus-of-continuity-type functions, their axioms,
//! the shifted family used for embedding into a larger space, and numerical
//! almost-monotonicity checkers.
//!
//! Only dyadic arguments `2^-s` matter downstream (every index-set
//! threshold evaluates the modulus there), so the checkers walk a dyadic
//! lattice exhaustively instead of sampling.

use crate::error::{Error, Result};
use crate::norms::ExponentVector;
use crate::spectral::MultiIndex;

/// Measured almost-monotonicity constants at or below this bound count as a
/// pass; the built-in families are exactly monotone and measure 1.
pub const ALMOST_MONOTONE_BOUND: f64 = 8.0;

/// Default lattice depth for axiom and condition checks.
pub const DEFAULT_LATTICE_DEPTH: u32 = 20;

#[derive(Debug, Clone, PartialEq)]
enum Family {
    /// `prod t_j^(r_j)`
    Power { r: Vec<f64> },
    /// `prod t_j^(r_j) * (1 + log2(1/t_j))^(b_j)`
    PowerLog { r: Vec<f64>, b: Vec<f64> },
    /// `base(t) * prod t_j^(-shift_j)`
    Derived { base: Box<Family>, shift: Vec<f64> },
}

impl Family {
    fn evaluate(&self, t: &[f64]) -> f64 {
        match self {
            Family::Power { r } => t
                .iter()
                .zip(r)
                .map(|(&tj, &rj)| tj.powf(rj))
                .product(),
            Family::PowerLog { r, b } => t
                .iter()
                .zip(r.iter().zip(b))
                .map(|(&tj, (&rj, &bj))| tj.powf(rj) * (1.0 + (1.0 / tj).log2()).powf(bj))
                .product(),
            Family::Derived { base, shift } => {
                let head = base.evaluate(t);
                let tail: f64 = t
                    .iter()
                    .zip(shift)
                    .map(|(&tj, &dj)| tj.powf(-dj))
                    .product();
                head * tail
            }
        }
    }

    fn evaluate_dyadic(&self, s: &[u32]) -> f64 {
        match self {
            Family::Power { r } => {
                let e: f64 = s.iter().zip(r).map(|(&sj, &rj)| f64::from(sj) * rj).sum();
                (-e).exp2()
            }
            Family::PowerLog { r, b } => {
                let e: f64 = s.iter().zip(r).map(|(&sj, &rj)| f64::from(sj) * rj).sum();
                let logs: f64 = s
                    .iter()
                    .zip(b)
                    .map(|(&sj, &bj)| (1.0 + f64::from(sj)).powf(bj))
                    .product();
                (-e).exp2() * logs
            }
            Family::Derived { base, shift } => {
                let e: f64 = s
                    .iter()
                    .zip(shift)
                    .map(|(&sj, &dj)| f64::from(sj) * dj)
                    .sum();
                base.evaluate_dyadic(s) * e.exp2()
            }
        }
    }
}

/// A positive function of `m` variables on `(0, 1]^m`, increasing in each
/// variable and polynomially bounded under integer dilation of order `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedModulus {
    family: Family,
    order: u32,
    dim: usize,
}

impl MixedModulus {
    /// `Omega(t) = prod t_j^(r_j)` with declared order `l`.
    pub fn power(r: Vec<f64>, order: u32) -> Result<Self> {
        validate_positive(&r, "r")?;
        validate_order(order)?;
        let dim = r.len();
        Ok(MixedModulus {
            family: Family::Power { r },
            order,
            dim,
        })
    }

    /// `Omega(t) = prod t_j^(r_j) * (1 + log2(1/t_j))^(b_j)`.
    pub fn power_log(r: Vec<f64>, b: Vec<f64>, order: u32) -> Result<Self> {
        validate_positive(&r, "r")?;
        validate_order(order)?;
        if b.len() != r.len() {
            return Err(Error::DimensionMismatch {
                expected: r.len(),
                got: b.len(),
            });
        }
        if b.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue);
        }
        let dim = r.len();
        Ok(MixedModulus {
            family: Family::PowerLog { r, b },
            order,
            dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Evaluates at a point of `(0, 1]^m`.
    pub fn evaluate(&self, t: &[f64]) -> Result<f64> {
        if t.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: t.len(),
            });
        }
        for (axis, &tj) in t.iter().enumerate() {
            if !(tj > 0.0 && tj <= 1.0) {
                return Err(Error::ModulusDomain { axis, value: tj });
            }
        }
        Ok(self.family.evaluate(t))
    }

    /// Evaluates at the dyadic point `t_j = 2^(-s_j)`; exact in floating
    /// arithmetic for the power family.
    pub fn evaluate_dyadic(&self, s: &MultiIndex) -> f64 {
        assert_eq!(s.dim(), self.dim, "dyadic point dimension mismatch");
        self.family.evaluate_dyadic(s.levels())
    }

    fn evaluate_dyadic_raw(&self, s: &[u32]) -> f64 {
        self.family.evaluate_dyadic(s)
    }
}

fn validate_positive(values: &[f64], role: &'static str) -> Result<()> {
    if values.is_empty() {
        return Err(Error::EmptyInput("modulus exponents"));
    }
    for (axis, &v) in values.iter().enumerate() {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidExponent {
                role,
                axis,
                value: v,
            });
        }
    }
    Ok(())
}

fn validate_order(order: u32) -> Result<()> {
    if order == 0 {
        return Err(Error::InvalidArgument("modulus order must be >= 1".into()));
    }
    Ok(())
}

/// Shifted family `Omega_1(t) = Omega(t) * prod t_j^-(1/p_j - 1/q_j)` used
/// when estimating in a larger target space. Requires `1 < p_j < q_j`.
pub fn omega1_derived(
    omega: &MixedModulus,
    p: &ExponentVector,
    q: &ExponentVector,
) -> Result<MixedModulus> {
    if p.dim() != omega.dim() || q.dim() != omega.dim() {
        return Err(Error::DimensionMismatch {
            expected: omega.dim(),
            got: p.dim().max(q.dim()),
        });
    }
    let mut shift = Vec::with_capacity(omega.dim());
    for (axis, (&pj, &qj)) in p.values().iter().zip(q.values()).enumerate() {
        if !(pj > 1.0 && pj < qj && qj.is_finite()) {
            return Err(Error::InvalidExponent {
                role: "p<q",
                axis,
                value: pj,
            });
        }
        shift.push(1.0 / pj - 1.0 / qj);
    }
    Ok(MixedModulus {
        family: Family::Derived {
            base: Box::new(omega.family.clone()),
            shift,
        },
        order: omega.order,
        dim: omega.dim,
    })
}

/// One measured check in an [`AxiomReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomCheck {
    pub name: String,
    pub passed: bool,
    /// Worst measured constant; 1 means exactly monotone / exactly bounded.
    pub constant: f64,
    /// Lattice point realizing the worst constant, when one exists.
    pub witness: Option<MultiIndex>,
}

/// Result of a lattice check; failures are reported, never thrown.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn worst(&self) -> Option<&AxiomCheck> {
        self.checks
            .iter()
            .max_by(|a, b| a.constant.partial_cmp(&b.constant).expect("finite"))
    }
}

fn lattice_points(dim: usize, depth: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; dim];
    fn rec(axis: usize, depth: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if axis == current.len() {
            out.push(current.clone());
            return;
        }
        for s in 0..=depth {
            current[axis] = s;
            rec(axis + 1, depth, current, out);
        }
    }
    rec(0, depth, &mut current, &mut out);
    out
}

/// Verifies the modulus axioms on the dyadic lattice `2^-s`, `s_j <= depth`:
/// positivity with decay along each axis, per-axis monotone increase, and
/// the order-`l` dilation bound with integer multipliers in `{1, 2, 4}`.
/// Continuity is assumed for the closed-form families and reported as such.
pub fn check_modulus_axioms(omega: &MixedModulus, depth: u32) -> AxiomReport {
    let depth = depth.max(2);
    let dim = omega.dim();
    let l = omega.order();
    let points = lattice_points(dim, depth);
    let mut report = AxiomReport::default();
    let tol = 1e-12;

    // axiom 1: positivity everywhere, decay to zero along each axis
    let mut positive = true;
    let mut pos_witness = None;
    for p in &points {
        let v = omega.evaluate_dyadic_raw(p);
        if !(v > 0.0 && v.is_finite()) {
            positive = false;
            pos_witness = Some(MultiIndex::new(p.clone()));
            break;
        }
    }
    let mut worst_decay = 0.0f64;
    let mut decay_witness = None;
    for axis in 0..dim {
        let mut deep = vec![0u32; dim];
        deep[axis] = depth;
        let v0 = omega.evaluate_dyadic_raw(&vec![0u32; dim]);
        let vd = omega.evaluate_dyadic_raw(&deep);
        let ratio = vd / v0;
        if ratio > worst_decay {
            worst_decay = ratio;
            decay_witness = Some(MultiIndex::new(deep));
        }
    }
    report.checks.push(AxiomCheck {
        name: "axiom1 positivity and decay".into(),
        passed: positive && worst_decay < 1.0,
        constant: worst_decay,
        witness: pos_witness.or(decay_witness),
    });

    // axiom 2: increases in each variable (larger s means smaller t and a
    // value that must not grow)
    for axis in 0..dim {
        let mut worst = 1.0f64;
        let mut witness = None;
        for p in &points {
            if p[axis] == depth {
                continue;
            }
            let mut q = p.clone();
            q[axis] += 1;
            let here = omega.evaluate_dyadic_raw(p);
            let deeper = omega.evaluate_dyadic_raw(&q);
            let ratio = deeper / here;
            if ratio > worst {
                worst = ratio;
                witness = Some(MultiIndex::new(q));
            }
        }
        report.checks.push(AxiomCheck {
            name: format!("axiom2 monotone axis {}", axis),
            passed: worst <= 1.0 + tol,
            constant: worst,
            witness,
        });
    }

    // axiom 3: Omega(k*t) <= (prod k_j)^l * Omega(t) for k_j in {1,2,4}
    let mut worst = 1.0f64;
    let mut witness = None;
    let shifts = lattice_points(dim, 2); // exponents a_j with k_j = 2^a_j
    for p in &points {
        let base = omega.evaluate_dyadic_raw(p);
        for a in &shifts {
            if a.iter().all(|&aj| aj == 0) {
                continue;
            }
            if a.iter().zip(p).any(|(&aj, &pj)| aj > pj) {
                continue; // multiplied argument would leave (0, 1]
            }
            let moved: Vec<u32> = p.iter().zip(a).map(|(&pj, &aj)| pj - aj).collect();
            let total_shift: u32 = a.iter().sum();
            let bound = f64::from(l) * f64::from(total_shift);
            let quotient = omega.evaluate_dyadic_raw(&moved) / (base * bound.exp2());
            if quotient > worst {
                worst = quotient;
                witness = Some(MultiIndex::new(p.clone()));
            }
        }
    }
    report.checks.push(AxiomCheck {
        name: "axiom3 dilation bound".into(),
        passed: worst <= 1.0 + tol,
        constant: worst,
        witness,
    });

    report.checks.push(AxiomCheck {
        name: "axiom4 continuity (assumed for closed-form family)".into(),
        passed: true,
        constant: 1.0,
        witness: None,
    });

    report
}

/// Measures, per axis on the dyadic lattice, how far `t^(-alpha_j) * Omega`
/// is from monotone: the increase constant for the first condition (valid
/// for `0 < alpha_j < 1`) and the decrease constant for the order-`l`
/// condition (valid for `0 < alpha_j < l`). Exactly monotone families
/// measure 1. A check passes when its constant stays at or below
/// [`ALMOST_MONOTONE_BOUND`].
pub fn check_s_conditions(
    omega: &MixedModulus,
    alpha: &ExponentVector,
    depth: u32,
) -> Result<AxiomReport> {
    if alpha.dim() != omega.dim() {
        return Err(Error::DimensionMismatch {
            expected: omega.dim(),
            got: alpha.dim(),
        });
    }
    let depth = depth.max(2);
    let l = f64::from(omega.order());
    for (axis, &aj) in alpha.values().iter().enumerate() {
        if !(aj > 0.0 && aj < l) {
            return Err(Error::InvalidExponent {
                role: "alpha",
                axis,
                value: aj,
            });
        }
    }
    let dim = omega.dim();
    let rest = lattice_points(dim - 1, depth);
    let mut report = AxiomReport::default();
    for axis in 0..dim {
        let aj = alpha.values()[axis];
        let mut inc_worst = 1.0f64;
        let mut dec_worst = 1.0f64;
        let mut inc_witness = None;
        let mut dec_witness = None;
        for tail in &rest {
            // weighted values w(s) = 2^(s * alpha) * Omega along this axis
            let mut running_min = f64::INFINITY;
            let mut running_max = 0.0f64;
            for s in 0..=depth {
                let mut point = Vec::with_capacity(dim);
                point.extend_from_slice(&tail[..axis]);
                point.push(s);
                point.extend_from_slice(&tail[axis..]);
                let w = (f64::from(s) * aj).exp2() * omega.evaluate_dyadic_raw(&point);
                if s > 0 {
                    // almost increase in t: w must not grow as s grows
                    let c_inc = w / running_min;
                    if c_inc > inc_worst {
                        inc_worst = c_inc;
                        inc_witness = Some(MultiIndex::new(point.clone()));
                    }
                    // almost decrease in t: w must not shrink as s grows
                    let c_dec = running_max / w;
                    if c_dec > dec_worst {
                        dec_worst = c_dec;
                        dec_witness = Some(MultiIndex::new(point.clone()));
                    }
                }
                running_min = running_min.min(w);
                running_max = running_max.max(w);
            }
        }
        if aj < 1.0 {
            report.checks.push(AxiomCheck {
                name: format!("S axis {}", axis),
                passed: inc_worst <= ALMOST_MONOTONE_BOUND,
                constant: inc_worst,
                witness: inc_witness,
            });
        }
        report.checks.push(AxiomCheck {
            name: format!("S_l axis {}", axis),
            passed: dec_worst <= ALMOST_MONOTONE_BOUND,
            constant: dec_worst,
            witness: dec_witness,
        });
    }
    Ok(report)
}

/// True when the report's checks named with `prefix` all pass with the
/// exact-monotone constant.
pub fn condition_holds_exactly(report: &AxiomReport, prefix: &str) -> bool {
    let mut seen = false;
    for c in &report.checks {
        if c.name.starts_with(prefix) && !c.name.starts_with(&format!("{}_", prefix)) {
            seen = true;
            if c.constant > 1.0 + 1e-9 {
                return false;
            }
        }
    }
    seen
}
