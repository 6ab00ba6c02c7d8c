//! Polynomials over F_q[t]: arithmetic, GCDs, canonical codes, and
//! enumeration of the monic universe M_N.
//!
//! A `MonicPoly` of degree N stores only the N lower coefficients as element
//! codes; the leading 1 is implicit. Its canonical code is the base-q number
//! whose digits are the codes of c_0, ..., c_{N-1} with c_0 most
//! significant, so codes restricted to M_N are a bijection onto [0, q^N).

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::Field;

/// General (possibly non-monic) polynomial, low-degree-first element codes,
/// no trailing zeros; the zero polynomial has an empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<u64>,
}

/// Monic polynomial of degree N >= 0; lower coefficients only.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonicPoly {
    lower: Vec<u64>,
}

impl PartialOrd for MonicPoly {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MonicPoly {
    /// Canonical order: by degree, then by canonical code, which is the
    /// lexicographic order of the low-first coefficient sequence.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.lower
            .len()
            .cmp(&other.lower.len())
            .then_with(|| self.lower.cmp(&other.lower))
    }
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Poly {
        Poly { coeffs: vec![1] }
    }

    /// Build from low-first codes, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<u64>) -> Poly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    fn check(&self, field: &Field) -> Result<()> {
        for &c in &self.coeffs {
            field.check_elem(c)?;
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly, field: &Field) -> Result<Poly> {
        self.check(field)?;
        other.check(field)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, o) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *o = field.add(a, b);
        }
        Ok(Poly::from_coeffs(out))
    }

    pub fn sub(&self, other: &Poly, field: &Field) -> Result<Poly> {
        let neg: Vec<u64> = other.coeffs.iter().map(|&c| field.neg(c)).collect();
        self.add(&Poly { coeffs: neg }, field)
    }

    pub fn mul(&self, other: &Poly, field: &Field) -> Result<Poly> {
        self.check(field)?;
        other.check(field)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero());
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(a, b));
            }
        }
        Ok(Poly::from_coeffs(out))
    }

    /// Euclidean division: self = q * divisor + r with deg r < deg divisor.
    pub fn divrem(&self, divisor: &Poly, field: &Field) -> Result<(Poly, Poly)> {
        self.check(field)?;
        divisor.check(field)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = divisor.coeffs.len() - 1;
        let lead_inv = field.inv(*divisor.coeffs.last().unwrap());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let lead = *rem.last().unwrap();
            let shift = rem.len() - 1 - dd;
            if lead != 0 {
                let factor = field.mul(lead, lead_inv);
                quot[shift] = factor;
                for (j, &djc) in divisor.coeffs.iter().enumerate() {
                    rem[shift + j] = field.sub(rem[shift + j], field.mul(factor, djc));
                }
            }
            rem.pop();
            while rem.len() > dd && rem.last() == Some(&0) {
                rem.pop();
            }
        }
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    /// Scale by the inverse of the leading coefficient.
    pub fn monic_normalize(&self, field: &Field) -> Result<MonicPoly> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inv = field.inv(*self.coeffs.last().unwrap());
        let mut lower: Vec<u64> = self
            .coeffs
            .iter()
            .map(|&c| field.mul(c, inv))
            .collect();
        lower.pop();
        Ok(MonicPoly { lower })
    }

    /// Monic greatest common divisor via the Euclidean algorithm.
    pub fn gcd(&self, other: &Poly, field: &Field) -> Result<MonicPoly> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::GcdOfZeros);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b, field)?;
            a = b;
            b = r;
        }
        a.monic_normalize(field)
    }
}

impl MonicPoly {
    /// The constant polynomial 1 (degree 0).
    pub fn unit() -> MonicPoly {
        MonicPoly { lower: vec![] }
    }

    pub fn degree(&self) -> usize {
        self.lower.len()
    }

    pub fn is_unit(&self) -> bool {
        self.lower.is_empty()
    }

    /// Lower coefficients c_0, ..., c_{N-1} as element codes.
    pub fn lower_coeffs(&self) -> &[u64] {
        &self.lower
    }

    /// Build from the N lower coefficients (leading 1 implied).
    pub fn from_lower(lower: Vec<u64>, field: &Field) -> Result<MonicPoly> {
        for &c in &lower {
            field.check_elem(c)?;
        }
        Ok(MonicPoly { lower })
    }

    /// Full low-first coefficient vector including the leading 1.
    pub fn to_poly(&self) -> Poly {
        let mut coeffs = self.lower.clone();
        coeffs.push(1);
        Poly { coeffs }
    }

    /// Canonical code within M_N as an arbitrary-precision integer.
    pub fn code(&self, field: &Field) -> BigUint {
        let q = BigUint::from(field.order());
        let mut acc = BigUint::zero();
        for &c in &self.lower {
            acc = acc * &q + BigUint::from(c);
        }
        acc
    }

    /// Canonical code as u64; requires q^N to fit (enumeration-scale input).
    pub fn code_u64(&self, field: &Field) -> u64 {
        let q = field.order();
        self.lower.iter().fold(0u64, |acc, &c| acc * q + c)
    }

    /// Decode the canonical code of a degree-N monic polynomial.
    pub fn from_code_u64(mut code: u64, degree: usize, field: &Field) -> MonicPoly {
        let q = field.order();
        let mut lower = vec![0u64; degree];
        for i in (0..degree).rev() {
            lower[i] = code % q;
            code /= q;
        }
        MonicPoly { lower }
    }

    pub fn mul(&self, other: &MonicPoly, field: &Field) -> Result<MonicPoly> {
        let p = self.to_poly().mul(&other.to_poly(), field)?;
        Ok(MonicPoly {
            lower: {
                let mut c = p.coeffs;
                c.pop();
                c
            },
        })
    }

    /// Exact division by a monic divisor; errors if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &MonicPoly, field: &Field) -> Result<MonicPoly> {
        let (q, r) = self.to_poly().divrem(&divisor.to_poly(), field)?;
        if !r.is_zero() {
            return Err(Error::InvalidInput(format!(
                "{} does not divide {}",
                format_poly(divisor),
                format_poly(self)
            )));
        }
        q.monic_normalize(field)
    }

    pub fn divides(&self, other: &MonicPoly, field: &Field) -> bool {
        other
            .to_poly()
            .divrem(&self.to_poly(), field)
            .map(|(_, r)| r.is_zero())
            .unwrap_or(false)
    }

    pub fn gcd(&self, other: &MonicPoly, field: &Field) -> Result<MonicPoly> {
        self.to_poly().gcd(&other.to_poly(), field)
    }
}

/// All monic polynomials of degree N in increasing canonical code.
pub fn enumerate_monic<'a>(
    field: &'a Field,
    degree: usize,
) -> impl Iterator<Item = MonicPoly> + 'a {
    enumerate_monic_range(field, degree, 0, field.order().pow(degree as u32))
}

/// Sub-range [lo, hi) of canonical codes, for parallel partitioning.
pub fn enumerate_monic_range<'a>(
    field: &'a Field,
    degree: usize,
    lo: u64,
    hi: u64,
) -> impl Iterator<Item = MonicPoly> + 'a {
    (lo..hi).map(move |code| MonicPoly::from_code_u64(code, degree, field))
}

/// Textual format: low-first comma-separated element codes including the
/// leading coefficient, e.g. "0,1,1" for t^2 + t over F_2.
pub fn format_poly(p: &MonicPoly) -> String {
    let mut parts: Vec<String> = p.lower_coeffs().iter().map(|c| c.to_string()).collect();
    parts.push("1".to_string());
    parts.join(",")
}

pub fn parse_poly(s: &str, field: &Field) -> Result<MonicPoly> {
    let codes: Vec<u64> = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidInput(format!("bad coefficient {t:?}")))
        })
        .collect::<Result<_>>()?;
    if codes.is_empty() {
        return Err(Error::InvalidInput("empty polynomial".into()));
    }
    if *codes.last().unwrap() != 1 {
        return Err(Error::InvalidInput(
            "polynomial is not monic (leading coefficient must be 1)".into(),
        ));
    }
    let mut lower = codes;
    lower.pop();
    MonicPoly::from_lower(lower, field)
}
