//! Seeded simulation of Steinhaus random multiplicative functions over
//! F_q[t] and unbiased moment estimation.
//!
//! Phases for the irreducibles are produced by a counter-based splittable
//! generator keyed by (master seed, trial index, irreducible code), so
//! trials are order-independent and embarrassingly parallel. Partial sums
//! can be evaluated either by enumerating and factoring all of M_N
//! (oracle) or through the truncated univariate Euler product
//! prod_P (1 - f(P) z^{deg P})^{-1} (default for large N). The mean and
//! standard error are reduced by fixed-tree pairwise summation for
//! cross-platform reproducibility.

use std::collections::HashMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::irreducible::{factor, irreducibles};
use crate::moments::MomentSpec;
use crate::poly::enumerate_monic;

/// One trial's random multiplicative function, determined entirely by
/// (field, maxdeg, seed, trial_index): a unit-modulus phase for every
/// monic irreducible of degree <= maxdeg, keyed by canonical code.
#[derive(Debug, Clone)]
pub struct PhaseAssignment {
    pub q: u64,
    pub maxdeg: u32,
    pub seed: u64,
    pub trial_index: u64,
    pub phases: HashMap<u64, Complex64>,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Counter-based hash of (seed, trial, code) to a uniform u in [0, 1).
pub fn uniform_from_counter(seed: u64, trial: u64, code: u64) -> f64 {
    let h = splitmix(splitmix(splitmix(seed) ^ trial) ^ code);
    // Top 53 bits give a dyadic rational in [0, 1).
    (h >> 11) as f64 / (1u64 << 53) as f64
}

fn phase_from_counter(seed: u64, trial: u64, code: u64) -> Complex64 {
    let u = uniform_from_counter(seed, trial, code);
    Complex64::from_polar(1.0, TAU * u)
}

/// Deterministic phase assignment covering all irreducibles of degree
/// <= maxdeg.
pub fn sample_phases(field: &Field, maxdeg: u32, seed: u64, trial_index: u64) -> PhaseAssignment {
    assert!(maxdeg >= 1);
    let mut phases = HashMap::new();
    for d in 1..=maxdeg {
        for p in irreducibles(field, d).iter() {
            let code = p.code_u64(field);
            phases.insert(code, phase_from_counter(seed, trial_index, code));
        }
    }
    PhaseAssignment {
        q: field.order(),
        maxdeg,
        seed,
        trial_index,
        phases,
    }
}

/// How a partial sum is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumMethod {
    /// Iterate M_N, factor each polynomial, multiply phases. Oracle.
    Enumerate,
    /// Truncated univariate Euler product over irreducibles of degree <= N.
    Series,
}

/// The random partial sum S = sum_{F in M_N} f(F) for one phase
/// assignment. Exact up to double-precision rounding for both methods.
pub fn partial_sum(
    field: &Field,
    phases: &PhaseAssignment,
    n: u32,
    method: SumMethod,
) -> Result<Complex64> {
    if n >= 1 && phases.maxdeg < n {
        return Err(Error::InvalidInput(format!(
            "phase assignment covers degrees <= {}, need {n}",
            phases.maxdeg
        )));
    }
    if n == 0 {
        // M_0 = {1} and f(1) = 1.
        return Ok(Complex64::new(1.0, 0.0));
    }
    match method {
        SumMethod::Enumerate => {
            let mut sum = Complex64::new(0.0, 0.0);
            for f in enumerate_monic(field, n as usize) {
                let mut val = Complex64::new(1.0, 0.0);
                for (p, e) in factor(&f, field)?.parts {
                    let ph = phases.phases[&p.code_u64(field)];
                    val *= ph.powu(e);
                }
                sum += val;
            }
            Ok(sum)
        }
        SumMethod::Series => {
            // Coefficients of prod_P (1 - f(P) z^{deg P})^{-1} up to z^n;
            // dividing by (1 - f z^d) is the forward recurrence
            // c[j] += f * c[j - d].
            let mut c = vec![Complex64::new(0.0, 0.0); n as usize + 1];
            c[0] = Complex64::new(1.0, 0.0);
            for d in 1..=n {
                for p in irreducibles(field, d).iter() {
                    let f = phases.phases[&p.code_u64(field)];
                    for j in d as usize..=n as usize {
                        let prev = c[j - d as usize];
                        c[j] += f * prev;
                    }
                }
            }
            Ok(c[n as usize])
        }
    }
}

/// A Monte Carlo moment estimate with its standard error.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct EstimateReport {
    pub mean: f64,
    pub stderr: f64,
    pub trials: u64,
    pub spec: MomentSpec,
    pub seed: u64,
}

/// Fixed-tree pairwise sum: split at the largest power of two below the
/// length. Deterministic regardless of how the values were produced.
fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => {
            let mut half = 1usize;
            while half * 2 < n {
                half *= 2;
            }
            pairwise_sum(&xs[..half]) + pairwise_sum(&xs[half..])
        }
    }
}

/// Estimate E|S|^{2k} over independent seeded trials.
pub fn estimate_moment(
    field: &Field,
    n: u32,
    k: u32,
    trials: u64,
    seed: u64,
    method: Option<SumMethod>,
) -> Result<EstimateReport> {
    assert!(trials >= 2);
    let method = method.unwrap_or(if n >= 4 {
        SumMethod::Series
    } else {
        SumMethod::Enumerate
    });
    let maxdeg = n.max(1);
    let values: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let phases = sample_phases(field, maxdeg, seed, trial);
            let s = partial_sum(field, &phases, n, method)?;
            Ok(s.norm_sqr().powi(k as i32))
        })
        .collect::<Result<Vec<f64>>>()?;
    let mean = pairwise_sum(&values) / trials as f64;
    let sq_devs: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let variance = pairwise_sum(&sq_devs) / (trials - 1) as f64;
    let stderr = (variance / trials as f64).sqrt();
    Ok(EstimateReport {
        mean,
        stderr,
        trials,
        spec: MomentSpec {
            q: field.order(),
            n,
            k,
        },
        seed,
    })
}
