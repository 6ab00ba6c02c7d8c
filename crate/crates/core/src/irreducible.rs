//! Monic irreducibles over F_q: enumeration, exact counting, and
//! factorization by deterministic trial division.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{enumerate_monic, MonicPoly};

/// Multiset of (irreducible, exponent) pairs, sorted by degree then
/// canonical code of the irreducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub parts: Vec<(MonicPoly, u32)>,
}

impl Factorization {
    pub fn empty() -> Factorization {
        Factorization { parts: vec![] }
    }

    pub fn total_degree(&self) -> usize {
        self.parts
            .iter()
            .map(|(p, e)| p.degree() * *e as usize)
            .sum()
    }

    /// Re-multiply all parts.
    pub fn product(&self, field: &Field) -> Result<MonicPoly> {
        let mut acc = MonicPoly::unit();
        for (p, e) in &self.parts {
            for _ in 0..*e {
                acc = acc.mul(p, field)?;
            }
        }
        Ok(acc)
    }
}

/// Table of all monic irreducibles of degree exactly `degree`, in canonical
/// order. Built once per (field, degree) and cached on the field.
pub fn irreducibles(field: &Field, degree: u32) -> Arc<Vec<MonicPoly>> {
    if let Some(hit) = field.irreducible_cache.lock().unwrap().get(&degree) {
        return Arc::clone(hit);
    }
    let table = build_table(field, degree);
    let arc = Arc::new(table);
    field
        .irreducible_cache
        .lock()
        .unwrap()
        .entry(degree)
        .or_insert_with(|| Arc::clone(&arc))
        .clone()
}

fn build_table(field: &Field, degree: u32) -> Vec<MonicPoly> {
    if degree == 1 {
        // Every monic linear is irreducible.
        return enumerate_monic(field, 1).collect();
    }
    // Lower-degree tables first; trial division against degrees <= degree/2.
    let divisor_tables: Vec<Arc<Vec<MonicPoly>>> =
        (1..=degree / 2).map(|d| irreducibles(field, d)).collect();
    enumerate_monic(field, degree as usize)
        .filter(|cand| {
            divisor_tables
                .iter()
                .flat_map(|t| t.iter())
                .all(|p| !p.divides(cand, field))
        })
        .collect()
}

/// All monic irreducibles of degree exactly `degree`, canonical order.
pub fn enumerate_irreducible(field: &Field, degree: u32) -> Vec<MonicPoly> {
    irreducibles(field, degree).as_ref().clone()
}

/// No irreducible divisor of degree <= deg/2.
pub fn is_irreducible(poly: &MonicPoly, field: &Field) -> bool {
    let deg = poly.degree();
    if deg == 0 {
        return false;
    }
    for d in 1..=(deg / 2) as u32 {
        if irreducibles(field, d).iter().any(|p| p.divides(poly, field)) {
            return false;
        }
    }
    true
}

fn mobius(mut n: u64) -> i64 {
    let mut mu = 1i64;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            mu = -mu;
        }
        d += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Exact count of monic irreducibles of degree `degree`:
/// pi_q(l) = (1/l) * sum_{d | l} mu(d) q^{l/d}.
pub fn count_irreducible(field: &Field, degree: u32) -> BigUint {
    assert!(degree >= 1);
    let q = BigInt::from(field.order());
    let l = degree as u64;
    let mut sum = BigInt::zero();
    for d in 1..=l {
        if l % d != 0 {
            continue;
        }
        let mu = mobius(d);
        if mu == 0 {
            continue;
        }
        let term = q.pow((l / d) as u32);
        if mu > 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let (sign, mag) = (sum / BigInt::from(l)).into_parts();
    assert!(sign != Sign::Minus);
    mag
}

/// `count_irreducible` as u64; errors on overflow (only relevant far beyond
/// desk scale).
pub fn count_irreducible_u64(field: &Field, degree: u32) -> Result<u64> {
    count_irreducible(field, degree)
        .to_u64()
        .ok_or_else(|| Error::BudgetExceeded(format!("pi_q({degree}) exceeds u64")))
}

/// Complete factorization into irreducibles by trial division in canonical
/// order; the nontrivial cofactor left after all degrees up to deg/2 is
/// itself irreducible.
pub fn factor(poly: &MonicPoly, field: &Field) -> Result<Factorization> {
    let mut parts: Vec<(MonicPoly, u32)> = vec![];
    let mut rest = poly.clone();
    let half = poly.degree() / 2;
    for d in 1..=half as u32 {
        if rest.degree() < d as usize {
            break;
        }
        for p in irreducibles(field, d).iter() {
            let mut exp = 0u32;
            while p.divides(&rest, field) {
                rest = rest.div_exact(p, field)?;
                exp += 1;
            }
            if exp > 0 {
                parts.push((p.clone(), exp));
            }
        }
    }
    if rest.degree() > 0 {
        parts.push((rest, 1));
    }
    parts.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(Factorization { parts })
}
