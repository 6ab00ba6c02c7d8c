//! Numerical evaluation of the arithmetic constant b_k(q) and of zeta_q.
//!
//! b_k(q) is the Euler product over monic irreducibles P of
//!   (1 - q^{-deg P})^{k^2} * sum_m binom(m+k-1, k-1)^2 q^{-m deg P},
//! grouped by degree: the local factor for degree l is raised to the
//! pi_q(l)-th power. Local factors are evaluated in double-double
//! arithmetic so that truncation, not rounding, dominates the reported
//! error. The truncation degree L is chosen by doubling until the value
//! stabilizes, with a 10x safety factor on the last observed change.

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::irreducible::count_irreducible;

/// A float together with a conservative error bound and the Euler-product
/// truncation degree that produced it.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct IntervalValue {
    pub value: f64,
    pub error_bound: f64,
    pub truncation_degree: u32,
}

const L_CAP: u32 = 4096;

/// binom(m+k-1, k-1), computed exactly in integers. The double-double
/// division operator is only f64-accurate, so divisions are kept out of
/// the floating-point path entirely.
fn binom_dd(m: u64, k: u64) -> TwoFloat {
    let mut acc: u128 = 1;
    for i in 1..k {
        // C(m+i, i) = C(m+i-1, i-1) * (m+i) / i stays integral at each step.
        acc = acc * (m + i) as u128 / i as u128;
    }
    debug_assert!(acc < (1u128 << 53), "binomial exceeds exact f64 range");
    TwoFloat::from(acc as f64)
}

/// Full-precision reciprocal: the crate's own `/` rounds at f64 accuracy,
/// so refine the f64 estimate with two Newton steps (each squares the
/// relative error).
fn recip_dd(v: TwoFloat) -> TwoFloat {
    let mut r = TwoFloat::from(1.0 / f64::from(v));
    for _ in 0..2 {
        r = r + r * (TwoFloat::from(1.0) - v * r);
    }
    r
}

fn powi_dd(base: TwoFloat, exp: u32) -> TwoFloat {
    let mut acc = TwoFloat::from(1.0);
    let mut b = base;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b;
        }
        b = b * b;
        e >>= 1;
    }
    acc
}

fn pow_big_dd(base: TwoFloat, exp: &BigUint) -> TwoFloat {
    let mut acc = TwoFloat::from(1.0);
    let mut b = base;
    for i in 0..exp.bits() {
        if exp.bit(i) {
            acc = acc * b;
        }
        b = b * b;
    }
    acc
}

/// Local factor for irreducible degree `ell`:
/// (1 - x)^{k^2} * sum_m binom(m+k-1,k-1)^2 x^m with x = q^{-ell}.
/// The m-series stops once the next term drops below
/// 1e-3 * tol * (current partial sum) / pi, where pi = pi_q(ell) is the
/// power this factor is about to be raised to; the exponent amplifies any
/// relative truncation error by pi, so the cutoff must absorb it. The
/// ratio x < 1 makes the tail geometric from the cutoff on.
fn local_factor(q: u64, ell: u32, k: u64, tol: f64, pi: f64) -> TwoFloat {
    let x = powi_dd(recip_dd(TwoFloat::from(q as f64)), ell);
    // For pi beyond float range the cutoff underflows to zero; the loop then
    // runs until the terms themselves underflow.
    let cutoff = 1e-3 * tol / pi;
    let mut sum = TwoFloat::from(0.0);
    let mut xm = TwoFloat::from(1.0);
    let mut m = 0u64;
    loop {
        let b = binom_dd(m, k);
        let term = b * b * xm;
        if m > 0 && f64::from(term) <= cutoff * f64::from(sum) {
            break;
        }
        sum = sum + term;
        xm = xm * x;
        m += 1;
        if m > 1_000_000 {
            break;
        }
    }
    let head = powi_dd(TwoFloat::from(1.0) - x, (k * k) as u32);
    head * sum
}

fn product_up_to(field: &Field, l_max: u32, k: u64, tol: f64) -> Result<TwoFloat> {
    let q = field.order();
    let mut acc = TwoFloat::from(1.0);
    // Fixed ascending-degree reduction order for bit reproducibility.
    for ell in 1..=l_max {
        let pi = count_irreducible(field, ell);
        let pi_f = pi.to_f64().unwrap_or(f64::INFINITY);
        let local = local_factor(q, ell, k, tol, pi_f);
        acc = acc * pow_big_dd(local, &pi);
    }
    Ok(acc)
}

/// Evaluate b_k(q) to the requested tolerance.
pub fn bk(field: &Field, k: u64, target_tol: f64) -> Result<IntervalValue> {
    assert!(k >= 1);
    assert!(target_tol > 0.0);
    if k == 1 {
        // Every local factor is (1 - x) * sum x^m = 1 exactly.
        return Ok(IntervalValue {
            value: 1.0,
            error_bound: 0.0,
            truncation_degree: 1,
        });
    }
    let mut l = 4u32;
    let mut prev = product_up_to(field, l, k, target_tol)?;
    loop {
        let next_l = l * 2;
        if next_l > L_CAP {
            return Err(Error::NonConvergence(L_CAP));
        }
        let next = product_up_to(field, next_l, k, target_tol)?;
        let change = f64::from(next - prev).abs();
        if change < target_tol / 10.0 {
            let value = f64::from(next);
            // 10x the last doubling change, plus the m-series truncation
            // allowance: each local factor carries a relative cutoff bias
            // of at most ~2e-3 * tol (after the pi-th power), once per
            // degree, plus a rounding floor.
            let series_bias = value.abs() * 2e-3 * target_tol * next_l as f64;
            return Ok(IntervalValue {
                value,
                error_bound: 10.0 * change.max(value.abs() * 1e-15) + series_bias,
                truncation_degree: next_l,
            });
        }
        prev = next;
        l = next_l;
    }
}

/// zeta_q(z) = 1 / (1 - qz) inside the disc |z| < 1/q.
pub fn zeta_q_eval(field: &Field, z: Complex64) -> Result<Complex64> {
    let q = field.order() as f64;
    if z.norm() >= 1.0 / q - 1e-12 {
        return Err(Error::PoleProximity);
    }
    Ok(Complex64::new(1.0, 0.0) / (Complex64::new(1.0, 0.0) - q * z))
}
