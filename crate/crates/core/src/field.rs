//! Finite fields F_q with q = p^e.
//!
//! Elements are identified by their canonical integer code: the coordinate
//! vector (a_0, ..., a_{e-1}) with respect to the power basis of the field
//! extension is read as a base-p number with a_0 as the units digit. For
//! prime fields (e = 1) the code is just the residue itself.
//!
//! Extension fields are built modulo the lexicographically smallest monic
//! irreducible of degree e over F_p, coefficients compared low-degree-first,
//! so the representation is reproducible without external tables.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::poly::MonicPoly;

/// A finite field F_q, q = p^e, with a deterministic representation.
pub struct Field {
    p: u64,
    e: u32,
    q: u64,
    /// Monic irreducible of degree e over F_p, low-degree-first, length e+1.
    /// `None` for prime fields.
    modulus: Option<Vec<u64>>,
    /// Irreducible tables, built once per degree and thereafter read-only.
    pub(crate) irreducible_cache: Mutex<HashMap<u32, Arc<Vec<MonicPoly>>>>,
}

impl Clone for Field {
    fn clone(&self) -> Field {
        Field {
            p: self.p,
            e: self.e,
            q: self.q,
            modulus: self.modulus.clone(),
            // The cache is a lazily rebuilt memo; a fresh one is equivalent.
            irreducible_cache: Mutex::new(HashMap::new()),
        }
    }
}

impl std::fmt::Debug for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e
    }
}
impl Eq for Field {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl Field {
    /// Build F_{p^e}. For e > 1 the modulus is chosen deterministically.
    pub fn new(p: u64, e: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e < 1 {
            return Err(Error::BadExponent);
        }
        let mut q: u64 = 1;
        for _ in 0..e {
            q = q.checked_mul(p).ok_or(Error::FieldTooLarge(u64::MAX))?;
            if q > (1 << 31) {
                return Err(Error::FieldTooLarge(q));
            }
        }
        let modulus = if e > 1 { Some(find_modulus(p, e)) } else { None };
        Ok(Field {
            p,
            e,
            q,
            modulus,
            irreducible_cache: Mutex::new(HashMap::new()),
        })
    }

    /// Build the field of size q, factoring q as a prime power.
    pub fn from_order(q: u64) -> Result<Field> {
        if q < 2 {
            return Err(Error::NotPrimePower(q));
        }
        let mut p = q;
        // Smallest prime divisor of q is its characteristic.
        let mut d = 2;
        while d * d <= q {
            if q % d == 0 {
                p = d;
                break;
            }
            d += 1;
        }
        let mut e = 0u32;
        let mut rest = q;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(Error::NotPrimePower(q));
        }
        Field::new(p, e)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn extension_degree(&self) -> u32 {
        self.e
    }
    pub fn order(&self) -> u64 {
        self.q
    }
    /// Modulus coefficients (low-degree-first, monic, length e+1), if e > 1.
    pub fn modulus(&self) -> Option<&[u64]> {
        self.modulus.as_deref()
    }

    pub fn check_elem(&self, code: u64) -> Result<()> {
        if code < self.q {
            Ok(())
        } else {
            Err(Error::MismatchedField { code, q: self.q })
        }
    }

    fn decode(&self, code: u64) -> Vec<u64> {
        // a_0 is the least significant base-p digit, so the additive and
        // multiplicative identities carry codes 0 and 1.
        let e = self.e as usize;
        let mut digits = vec![0u64; e];
        let mut c = code;
        for d in digits.iter_mut() {
            *d = c % self.p;
            c /= self.p;
        }
        digits
    }

    fn encode(&self, digits: &[u64]) -> u64 {
        let mut code = 0u64;
        for &d in digits.iter().rev() {
            code = code * self.p + d;
        }
        code
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.e == 1 {
            return (a + b) % self.p;
        }
        let (da, db) = (self.decode(a), self.decode(b));
        let sum: Vec<u64> = da
            .iter()
            .zip(db.iter())
            .map(|(x, y)| (x + y) % self.p)
            .collect();
        self.encode(&sum)
    }

    pub fn neg(&self, a: u64) -> u64 {
        if self.e == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let da = self.decode(a);
        let neg: Vec<u64> = da.iter().map(|x| (self.p - x) % self.p).collect();
        self.encode(&neg)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.e == 1 {
            return a * b % self.p;
        }
        let (da, db) = (self.decode(a), self.decode(b));
        let e = self.e as usize;
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // Reduce modulo the (monic) defining polynomial.
        let m = self.modulus.as_ref().unwrap();
        for i in (e..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for (j, &mj) in m.iter().enumerate().take(e) {
                let idx = i - e + j;
                prod[idx] = (prod[idx] + (self.p - mj % self.p) % self.p * c) % self.p;
            }
        }
        prod.truncate(e);
        self.encode(&prod)
    }

    pub fn pow(&self, a: u64, mut n: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64; // code of the multiplicative identity
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a != 0, "inverse of zero");
        self.pow(a, self.q - 2)
    }
}

/// Lexicographically smallest (low-degree-first) monic irreducible of degree e
/// over F_p, as a low-first coefficient vector of length e+1.
fn find_modulus(p: u64, e: u32) -> Vec<u64> {
    let e = e as usize;
    let total = p.pow(e as u32);
    for v in 0..total {
        // Digits c_0..c_{e-1} with c_0 most significant, so ascending v
        // walks candidates in lexicographic low-degree-first order.
        let mut coeffs = vec![0u64; e + 1];
        coeffs[e] = 1;
        let mut c = v;
        for i in (0..e).rev() {
            coeffs[i] = c % p;
            c /= p;
        }
        if fp_is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducibles of every degree exist over F_p");
}

/// Irreducibility over F_p by trial division against every monic polynomial
/// of degree at most deg/2.
fn fp_is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for v in 0..count {
            let mut g = vec![0u64; d + 1];
            g[d] = 1;
            let mut c = v;
            for gi in g.iter_mut().take(d) {
                *gi = c % p;
                c /= p;
            }
            if fp_rem_is_zero(f, &g, p) {
                return false;
            }
        }
    }
    true
}

/// Whether the monic polynomial g divides f over F_p.
fn fp_rem_is_zero(f: &[u64], g: &[u64], p: u64) -> bool {
    let mut r: Vec<u64> = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dg;
        if lead != 0 {
            for (j, &gj) in g.iter().enumerate() {
                let idx = shift + j;
                r[idx] = (r[idx] + (p - gj % p) % p * lead) % p;
            }
        }
        r.pop();
        while r.len() > dg && *r.last().unwrap() == 0 {
            r.pop();
        }
    }
    r.iter().all(|&c| c == 0)
}
