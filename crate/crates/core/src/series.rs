//! Truncated multivariate power series over the integers, and the
//! generating-function moment engine built on them.
//!
//! A series in `nvars` variables keeps exact integer coefficients for
//! exponent tuples inside the box [0, cap]^nvars; multiplication discards
//! any product term leaving the box. Storage is sparse: exponent tuples are
//! encoded as fixed-radix (radix cap+1) integers, which also fixes the
//! iteration order for reproducible output.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::irreducible::count_irreducible;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedMultiSeries {
    nvars: usize,
    cap: u64,
    coeffs: BTreeMap<u64, BigInt>,
}

impl TruncatedMultiSeries {
    pub fn zero(nvars: usize, cap: u64) -> Result<TruncatedMultiSeries> {
        // The encoded key must fit in u64.
        let radix = cap + 1;
        let mut bound: u64 = 1;
        for _ in 0..nvars {
            bound = bound
                .checked_mul(radix)
                .ok_or_else(|| Error::BudgetExceeded("exponent box too large".into()))?;
        }
        Ok(TruncatedMultiSeries {
            nvars,
            cap,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn one(nvars: usize, cap: u64) -> Result<TruncatedMultiSeries> {
        let mut s = TruncatedMultiSeries::zero(nvars, cap)?;
        s.coeffs.insert(0, BigInt::one());
        Ok(s)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn cap(&self) -> u64 {
        self.cap
    }

    fn encode(&self, exponents: &[u64]) -> u64 {
        let radix = self.cap + 1;
        exponents.iter().fold(0u64, |acc, &e| acc * radix + e)
    }

    fn decode(&self, mut key: u64) -> Vec<u64> {
        let radix = self.cap + 1;
        let mut exps = vec![0u64; self.nvars];
        for e in exps.iter_mut().rev() {
            *e = key % radix;
            key /= radix;
        }
        exps
    }

    pub fn coeff(&self, exponents: &[u64]) -> BigInt {
        assert_eq!(exponents.len(), self.nvars);
        if exponents.iter().any(|&e| e > self.cap) {
            return BigInt::zero();
        }
        self.coeffs
            .get(&self.encode(exponents))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn set_coeff(&mut self, exponents: &[u64], value: BigInt) {
        assert_eq!(exponents.len(), self.nvars);
        assert!(exponents.iter().all(|&e| e <= self.cap));
        let key = self.encode(exponents);
        if value.is_zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, value);
        }
    }

    /// Nonzero terms in deterministic (encoded-key) order.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<u64>, &BigInt)> + '_ {
        self.coeffs.iter().map(|(&k, v)| (self.decode(k), v))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    fn check_shape(&self, other: &TruncatedMultiSeries) -> Result<()> {
        if self.nvars != other.nvars || self.cap != other.cap {
            return Err(Error::ShapeMismatch(format!(
                "({} vars, cap {}) vs ({} vars, cap {})",
                self.nvars, self.cap, other.nvars, other.cap
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncatedMultiSeries) -> Result<TruncatedMultiSeries> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (&k, v) in &other.coeffs {
            let entry = out.coeffs.entry(k).or_insert_with(BigInt::zero);
            *entry += v;
            if entry.is_zero() {
                out.coeffs.remove(&k);
            }
        }
        Ok(out)
    }

    pub fn scalar_mul(&self, scalar: &BigInt) -> TruncatedMultiSeries {
        let mut out = TruncatedMultiSeries {
            nvars: self.nvars,
            cap: self.cap,
            coeffs: BTreeMap::new(),
        };
        if scalar.is_zero() {
            return out;
        }
        for (&k, v) in &self.coeffs {
            out.coeffs.insert(k, v * scalar);
        }
        out
    }

    /// Exact truncated product: terms leaving the box in any coordinate are
    /// discarded.
    pub fn mul(&self, other: &TruncatedMultiSeries) -> Result<TruncatedMultiSeries> {
        self.check_shape(other)?;
        let mut out = TruncatedMultiSeries {
            nvars: self.nvars,
            cap: self.cap,
            coeffs: BTreeMap::new(),
        };
        for (&ka, va) in &self.coeffs {
            let ea = self.decode(ka);
            'terms: for (&kb, vb) in &other.coeffs {
                let eb = self.decode(kb);
                let mut sum = vec![0u64; self.nvars];
                for i in 0..self.nvars {
                    let s = ea[i] + eb[i];
                    if s > self.cap {
                        continue 'terms;
                    }
                    sum[i] = s;
                }
                let key = self.encode(&sum);
                let entry = out.coeffs.entry(key).or_insert_with(BigInt::zero);
                *entry += va * vb;
                if entry.is_zero() {
                    out.coeffs.remove(&key);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut exp: u64) -> Result<TruncatedMultiSeries> {
        let mut acc = TruncatedMultiSeries::one(self.nvars, self.cap)?;
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }
}

/// The zeta factor zeta_q(z_i z_j) truncated to the box: sum_n q^n (z_i z_j)^n.
pub fn zeta_factor(
    i: usize,
    j: usize,
    nvars: usize,
    cap: u64,
    q: u64,
) -> Result<TruncatedMultiSeries> {
    if i >= j || j >= nvars {
        return Err(Error::IndexOutOfRange(format!(
            "zeta factor needs i < j < nvars, got i={i}, j={j}, nvars={nvars}"
        )));
    }
    let mut s = TruncatedMultiSeries::zero(nvars, cap)?;
    let mut coeff = BigInt::one();
    for n in 0..=cap {
        let mut exps = vec![0u64; nvars];
        exps[i] = n;
        exps[j] = n;
        s.set_coeff(&exps, coeff.clone());
        coeff *= BigInt::from(q);
    }
    Ok(s)
}

/// Local Euler factor of A for irreducibles of degree `ell`: the sum over
/// exponent tuples (m_1, ..., m_2k) with m_1+...+m_k = m_{k+1}+...+m_{2k}
/// of the monomial prod z_i^{m_i * ell}, restricted to the box.
fn local_factor(k: usize, cap: u64, ell: u64) -> Result<TruncatedMultiSeries> {
    let nvars = 2 * k;
    let mut s = TruncatedMultiSeries::zero(nvars, cap)?;
    let max_m = cap / ell;
    let mut tuple = vec![0u64; nvars];
    fn rec(
        tuple: &mut Vec<u64>,
        idx: usize,
        k: usize,
        max_m: u64,
        ell: u64,
        s: &mut TruncatedMultiSeries,
    ) {
        if idx == tuple.len() {
            let left: u64 = tuple[..k].iter().sum();
            let right: u64 = tuple[k..].iter().sum();
            if left == right {
                let exps: Vec<u64> = tuple.iter().map(|&m| m * ell).collect();
                let prev = s.coeff(&exps);
                s.set_coeff(&exps, prev + BigInt::one());
            }
            return;
        }
        for m in 0..=max_m {
            tuple[idx] = m;
            rec(tuple, idx + 1, k, max_m, ell, s);
        }
    }
    rec(&mut tuple, 0, k, max_m, ell, &mut s);
    Ok(s)
}

/// The generating series A(z_1, ..., z_2k) of product-balanced tuples,
/// truncated to the box [0, cap]^2k.
///
/// Built as the Euler product of local factors over irreducible degrees
/// ell <= cap; any irreducible of larger degree cannot contribute inside the
/// box, so the truncation is exact.
pub fn build_a(field: &Field, k: usize, cap: u64) -> Result<TruncatedMultiSeries> {
    assert!(k >= 1);
    let mut acc = TruncatedMultiSeries::one(2 * k, cap)?;
    for ell in 1..=cap {
        let pi = count_irreducible(field, ell as u32)
            .to_u64()
            .ok_or_else(|| {
                Error::BudgetExceeded(format!("pi_q({ell}) too large for series build"))
            })?;
        let local = local_factor(k, cap, ell)?;
        acc = acc.mul(&local.pow(pi)?)?;
    }
    Ok(acc)
}

/// The zeta-free factor B = A * prod_{i <= k < j} (1 - q z_i z_j).
pub fn build_b(field: &Field, k: usize, cap: u64) -> Result<TruncatedMultiSeries> {
    let mut acc = build_a(field, k, cap)?;
    let q = BigInt::from(field.order());
    for i in 0..k {
        for j in k..2 * k {
            let mut factor = TruncatedMultiSeries::one(2 * k, cap)?;
            let mut exps = vec![0u64; 2 * k];
            exps[i] = 1;
            exps[j] = 1;
            if 1 <= cap {
                factor.set_coeff(&exps, -q.clone());
            }
            acc = acc.mul(&factor)?;
        }
    }
    Ok(acc)
}

/// The 2k-th moment as the coefficient of (z_1 ... z_2k)^N in A with cap N.
pub fn moment_coefficient(field: &Field, k: usize, n: u64) -> Result<BigUint> {
    let a = build_a(field, k, n)?;
    let target = vec![n; 2 * k];
    let c = a.coeff(&target);
    c.to_biguint()
        .ok_or_else(|| Error::InvalidInput("negative A coefficient".into()))
}

/// Coefficient of (z_1 ... z_2k)^N in prod_{i <= k < j} zeta_q(z_i z_j),
/// computed by direct series multiplication.
pub fn zeta_product_coefficient(field: &Field, k: usize, n: u64) -> Result<BigUint> {
    assert!(k >= 1);
    let q = field.order();
    let mut acc = TruncatedMultiSeries::one(2 * k, n)?;
    for i in 0..k {
        for j in k..2 * k {
            acc = acc.mul(&zeta_factor(i, j, 2 * k, n, q)?)?;
        }
    }
    let c = acc.coeff(&vec![n; 2 * k]);
    c.to_biguint()
        .ok_or_else(|| Error::InvalidInput("negative zeta-product coefficient".into()))
}

/// Check the k = 2 closed form: B has exactly two in-box coefficients,
/// 1 at the origin and -q at (1, 1, 1, 1).
pub fn check_b_identity(field: &Field, cap: u64) -> Result<bool> {
    let b = build_b(field, 2, cap)?;
    let q = BigInt::from(field.order());
    let mut ok = b.coeff(&[0, 0, 0, 0]) == BigInt::one();
    if cap >= 1 {
        ok &= b.coeff(&[1, 1, 1, 1]) == -q;
        ok &= b.num_terms() == 2;
    } else {
        ok &= b.num_terms() == 1;
    }
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::new(2, 1).unwrap()
    }
    fn f3() -> Field {
        Field::new(3, 1).unwrap()
    }

    #[test]
    fn binomial_product() {
        // (1 + z1)(1 + z2) = 1 + z1 + z2 + z1 z2.
        let mut a = TruncatedMultiSeries::one(2, 1).unwrap();
        a.set_coeff(&[1, 0], BigInt::one());
        let mut b = TruncatedMultiSeries::one(2, 1).unwrap();
        b.set_coeff(&[0, 1], BigInt::one());
        let p = a.mul(&b).unwrap();
        for exps in [[0, 0], [1, 0], [0, 1], [1, 1]] {
            assert_eq!(p.coeff(&exps), BigInt::one());
        }
        assert_eq!(p.num_terms(), 4);
        // Multiplying by 1 is the identity.
        let one = TruncatedMultiSeries::one(2, 1).unwrap();
        assert_eq!(a.mul(&one).unwrap(), a);
    }

    #[test]
    fn geometric_series_cancellation() {
        // (sum_n q^n z1^n z2^n) * (1 - q z1 z2) = 1 within the box.
        let q = 2u64;
        let zeta = zeta_factor(0, 1, 2, 6, q).unwrap();
        let mut inv = TruncatedMultiSeries::one(2, 6).unwrap();
        inv.set_coeff(&[1, 1], BigInt::from(-(q as i64)));
        let p = zeta.mul(&inv).unwrap();
        assert_eq!(p, TruncatedMultiSeries::one(2, 6).unwrap());
    }

    #[test]
    fn zeta_factor_coefficients() {
        let z = zeta_factor(0, 2, 4, 3, 3).unwrap();
        for n in 0..=3u64 {
            let mut e = vec![0u64; 4];
            e[0] = n;
            e[2] = n;
            assert_eq!(z.coeff(&e), BigInt::from(3u64.pow(n as u32)));
        }
        assert_eq!(z.coeff(&[1, 0, 0, 0]), BigInt::zero());
        assert!(zeta_factor(2, 2, 4, 3, 3).is_err());
        assert!(zeta_factor(1, 4, 4, 3, 3).is_err());
    }

    #[test]
    fn shape_mismatch_rejected() {
        let a = TruncatedMultiSeries::one(2, 1).unwrap();
        let b = TruncatedMultiSeries::one(3, 1).unwrap();
        assert!(a.mul(&b).is_err());
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn a_coefficients_small_cases() {
        let f = f2();
        let a = build_a(&f, 2, 2).unwrap();
        // All monic F_i = 1.
        assert_eq!(a.coeff(&[0, 0, 0, 0]), BigInt::one());
        // F_1 = F_3 in {t, t+1}.
        assert_eq!(a.coeff(&[1, 0, 1, 0]), BigInt::from(2));
        // The fourth moment at N = 1.
        assert_eq!(a.coeff(&[1, 1, 1, 1]), BigInt::from(6));
    }

    /// Direct tuple count of monic (F_1, ..., F_{2k}) with the given degrees
    /// and balanced product, independent of the series path.
    fn brute_tuple_count(field: &Field, k: usize, degrees: &[u64]) -> u64 {
        use crate::poly::{enumerate_monic, MonicPoly};
        let nvars = 2 * k;
        assert_eq!(degrees.len(), nvars);
        let mut count = 0u64;
        let mut stack: Vec<Vec<MonicPoly>> = degrees
            .iter()
            .map(|&d| enumerate_monic(field, d as usize).collect())
            .collect();
        let sizes: Vec<usize> = stack.iter().map(|v| v.len()).collect();
        let total: usize = sizes.iter().product();
        for mut idx in 0..total {
            let mut chosen = Vec::with_capacity(nvars);
            for (vi, sz) in sizes.iter().enumerate() {
                chosen.push(&stack[vi][idx % sz]);
                idx /= sz;
            }
            let mut left = MonicPoly::unit();
            for p in &chosen[..k] {
                left = left.mul(p, field).unwrap();
            }
            let mut right = MonicPoly::unit();
            for p in &chosen[k..] {
                right = right.mul(p, field).unwrap();
            }
            if left == right {
                count += 1;
            }
        }
        stack.clear();
        count
    }

    #[test]
    fn a_coefficients_match_brute_tuple_counts() {
        let f = f2();
        let a = build_a(&f, 2, 2).unwrap();
        // Exhaustive over the whole box for q = 2, k = 2, cap = 2.
        for key in 0..81u64 {
            let mut degrees = vec![0u64; 4];
            let mut v = key;
            for d in degrees.iter_mut().rev() {
                *d = v % 3;
                v /= 3;
            }
            let expected = brute_tuple_count(&f, 2, &degrees);
            assert_eq!(
                a.coeff(&degrees),
                BigInt::from(expected),
                "degrees {degrees:?}"
            );
        }
    }

    #[test]
    fn a_block_symmetry() {
        let f = f3();
        let a = build_a(&f, 2, 2).unwrap();
        for (exps, c) in a.terms() {
            // Swap within the first block, within the second, and across.
            let swapped_first = vec![exps[1], exps[0], exps[2], exps[3]];
            let swapped_second = vec![exps[0], exps[1], exps[3], exps[2]];
            let swapped_blocks = vec![exps[2], exps[3], exps[0], exps[1]];
            assert_eq!(&a.coeff(&swapped_first), c);
            assert_eq!(&a.coeff(&swapped_second), c);
            assert_eq!(&a.coeff(&swapped_blocks), c);
        }
    }

    #[test]
    fn truncation_cutoff_is_exact() {
        // Including local factors beyond degree cap must not change any
        // in-box coefficient: the degree-(cap+1) local factor is 1 in the box.
        let _f = f2();
        let cap = 2;
        let extra = local_factor(2, cap, cap + 1).unwrap();
        assert_eq!(extra, TruncatedMultiSeries::one(4, cap).unwrap());
    }

    #[test]
    fn b_closed_form_for_k2() {
        for q in [2u64, 3] {
            let f = Field::from_order(q).unwrap();
            assert!(check_b_identity(&f, 4).unwrap());
            let b = build_b(&f, 2, 4).unwrap();
            assert_eq!(b.coeff(&[0, 0, 0, 0]), BigInt::one());
            assert_eq!(b.coeff(&[1, 1, 1, 1]), BigInt::from(-(q as i64)));
            assert_eq!(b.num_terms(), 2);
        }
    }

    #[test]
    fn b_is_one_for_k1() {
        // The k = 1 balance condition forces m_1 = m_2, so A is the single
        // zeta factor and B collapses to 1.
        let f = f3();
        let b = build_b(&f, 1, 4).unwrap();
        assert_eq!(b, TruncatedMultiSeries::one(2, 4).unwrap());
    }

    #[test]
    fn local_factor_identity_single_p() {
        // (sum_{m1+m2=m3+m4} z^m) * prod (1 - z_i z_j) = 1 - z1 z2 z3 z4.
        let cap = 3;
        let local = local_factor(2, cap, 1).unwrap();
        let mut acc = local;
        for i in 0..2 {
            for j in 2..4 {
                let mut f = TruncatedMultiSeries::one(4, cap).unwrap();
                let mut exps = vec![0u64; 4];
                exps[i] = 1;
                exps[j] = 1;
                f.set_coeff(&exps, BigInt::from(-1));
                acc = acc.mul(&f).unwrap();
            }
        }
        let mut expected = TruncatedMultiSeries::one(4, cap).unwrap();
        expected.set_coeff(&[1, 1, 1, 1], BigInt::from(-1));
        assert_eq!(acc, expected);
    }

    #[test]
    fn zeta_product_examples() {
        let f2 = f2();
        // k = 1: single zeta factor, coefficient q^N.
        for n in 0..=4u64 {
            assert_eq!(
                zeta_product_coefficient(&f2, 1, n).unwrap(),
                BigUint::from(2u64.pow(n as u32))
            );
        }
        // k = 2, N = 1, q = 2: 4 * S_2(1) = 8.
        assert_eq!(
            zeta_product_coefficient(&f2, 2, 1).unwrap(),
            BigUint::from(8u32)
        );
        // k = 3, N = 2, q = 2: 64 * S_3(2) = 1344.
        assert_eq!(
            zeta_product_coefficient(&f2, 3, 2).unwrap(),
            BigUint::from(1344u32)
        );
    }
}
