//! Exact integer computation of the 2k-th moment of partial sums of a
//! Steinhaus random multiplicative function over F_q[t].
//!
//! The moment equals the number of 2k-tuples (F_1,...,F_2k) of monic
//! degree-N polynomials with F_1...F_k = F_{k+1}...F_{2k}, i.e.
//! sum_G r(G)^2 where r(G) counts factorizations of G into k monic
//! degree-N parts. Two independent engines compute it: a brute-force
//! product-multiplicity scan and a factorization-type sum; the series
//! module provides a third. Also here: the closed forms for the second
//! and fourth moments, the main-term evaluation, coprimality counts, and
//! the GCD-matrix decomposition of product-balanced tuples.

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::constants::{bk, IntervalValue};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::irreducible::count_irreducible;
use crate::magic::{count_magic_squares, MagicSquare};
use crate::poly::{enumerate_monic, MonicPoly};

/// Parameters of one moment computation: E|sum_{F in M_N} f(F)|^{2k}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct MomentSpec {
    pub q: u64,
    pub n: u32,
    pub k: u32,
}

/// Which engine produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    Bruteforce,
    Typewise,
    Series,
    ClosedForm,
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Engine::Bruteforce => "bruteforce",
            Engine::Typewise => "typewise",
            Engine::Series => "series",
            Engine::ClosedForm => "closed-form",
        };
        f.write_str(s)
    }
}

/// An exact moment value together with its provenance.
#[derive(Debug, Clone)]
pub struct MomentResult {
    pub value: BigUint,
    pub engine: Engine,
    pub spec: MomentSpec,
    pub elapsed_s: f64,
    /// Set when a closed form is evaluated outside its stated range
    /// (fourth moment at N = 0).
    pub degenerate: bool,
}

pub const DEFAULT_BRUTE_BUDGET: u64 = 10_000_000;

fn spec_of(field: &Field, n: u32, k: u32) -> MomentSpec {
    MomentSpec {
        q: field.order(),
        n,
        k,
    }
}

/// q^{kN} as a budget probe; None if it overflows u64.
fn tuple_space_size(q: u64, n: u32, k: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..(n as u64 * k as u64) {
        acc = acc.checked_mul(q)?;
    }
    Some(acc)
}

/// Brute-force engine: accumulate the multiplicity r(G) of every product
/// G = F_1...F_k over all k-tuples in M_N^k, then return sum_G r(G)^2.
pub fn moment_bruteforce(field: &Field, n: u32, k: u32, budget: Option<u64>) -> Result<MomentResult> {
    assert!(k >= 1);
    let start = Instant::now();
    let budget = budget.unwrap_or(DEFAULT_BRUTE_BUDGET);
    let space = tuple_space_size(field.order(), n, k);
    if space.is_none() || space.unwrap() > budget {
        return Err(Error::BudgetExceeded(format!(
            "q^(kN) = {}^{} exceeds the brute-force budget {budget}",
            field.order(),
            n as u64 * k as u64
        )));
    }
    let mut counts: HashMap<BigUint, u64> = HashMap::new();
    let monics: Vec<MonicPoly> = enumerate_monic(field, n as usize).collect();
    let mut stack = vec![MonicPoly::unit()];
    products_rec(field, &monics, k, &mut stack, &mut counts)?;
    let mut total = BigUint::zero();
    for r in counts.values() {
        let r = BigUint::from(*r);
        total += &r * &r;
    }
    Ok(MomentResult {
        value: total,
        engine: Engine::Bruteforce,
        spec: spec_of(field, n, k),
        elapsed_s: start.elapsed().as_secs_f64(),
        degenerate: false,
    })
}

fn products_rec(
    field: &Field,
    monics: &[MonicPoly],
    slots: u32,
    stack: &mut Vec<MonicPoly>,
    counts: &mut HashMap<BigUint, u64>,
) -> Result<()> {
    if slots == 0 {
        let code = stack.last().unwrap().code(field);
        *counts.entry(code).or_insert(0) += 1;
        return Ok(());
    }
    for f in monics {
        let next = stack.last().unwrap().mul(f, field)?;
        stack.push(next);
        products_rec(field, monics, slots - 1, stack, counts)?;
        stack.pop();
    }
    Ok(())
}

/// A factorization shape: multiset of (irreducible degree, exponent)
/// parts, with repeated (d, e) parts standing for distinct irreducibles
/// of the same degree. Parts are kept sorted descending by (d, e).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeType {
    pub parts: Vec<(u32, u32)>,
}

impl DegreeType {
    pub fn total_degree(&self) -> u64 {
        self.parts.iter().map(|(d, e)| *d as u64 * *e as u64).sum()
    }
}

/// Number of monic polynomials of degree sum(d*e) realizing the type:
/// per degree d with m_d parts, a falling factorial pi_q(d)(pi_q(d)-1)...
/// choosing distinct irreducibles, divided by the multiplicities of
/// repeated (d, e) parts (unordered within equal exponent).
pub fn type_multiplicity(field: &Field, ty: &DegreeType) -> BigUint {
    let mut by_degree: HashMap<u32, Vec<u32>> = HashMap::new();
    for (d, e) in &ty.parts {
        by_degree.entry(*d).or_default().push(*e);
    }
    let mut acc = BigUint::one();
    for (d, exps) in by_degree {
        let pi = count_irreducible(field, d);
        let m = exps.len() as u64;
        for i in 0..m {
            let i_big = BigUint::from(i);
            if pi <= i_big {
                return BigUint::zero();
            }
            acc *= &pi - i_big;
        }
        let mut exp_counts: HashMap<u32, u64> = HashMap::new();
        for e in exps {
            *exp_counts.entry(e).or_insert(0) += 1;
        }
        for c in exp_counts.values() {
            for i in 2..=*c {
                acc /= BigUint::from(i);
            }
        }
    }
    acc
}

/// r_k(T): the number of ways to write a polynomial of type T as an
/// ordered product of k monic polynomials of degree n each. DP over the
/// parts; state = the ordered k-tuple of residual degree budgets.
pub fn type_r_k(ty: &DegreeType, n: u32, k: u32) -> BigUint {
    let mut memo: HashMap<(usize, Vec<u32>), BigUint> = HashMap::new();
    r_k_rec(&ty.parts, 0, &vec![n; k as usize], &mut memo)
}

fn r_k_rec(
    parts: &[(u32, u32)],
    idx: usize,
    residuals: &[u32],
    memo: &mut HashMap<(usize, Vec<u32>), BigUint>,
) -> BigUint {
    if idx == parts.len() {
        return if residuals.iter().all(|r| *r == 0) {
            BigUint::one()
        } else {
            BigUint::zero()
        };
    }
    let key = (idx, residuals.to_vec());
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let (d, e) = parts[idx];
    let mut total = BigUint::zero();
    let mut split = vec![0u32; residuals.len()];
    distribute_rec(d, e, 0, residuals, &mut split, &mut |split| {
        let child: Vec<u32> = residuals
            .iter()
            .zip(split)
            .map(|(r, a)| r - a * d)
            .collect();
        total += r_k_rec(parts, idx + 1, &child, memo);
    });
    memo.insert(key, total.clone());
    total
}

/// All ways to split exponent e across the slots with a_i * d within the
/// residual budgets.
fn distribute_rec(
    d: u32,
    left: u32,
    slot: usize,
    residuals: &[u32],
    split: &mut Vec<u32>,
    emit: &mut impl FnMut(&[u32]),
) {
    if slot == residuals.len() {
        if left == 0 {
            emit(split);
        }
        return;
    }
    let max_here = (residuals[slot] / d).min(left);
    for a in 0..=max_here {
        split[slot] = a;
        distribute_rec(d, left - a, slot + 1, residuals, split, emit);
    }
    split[slot] = 0;
}

/// Enumerate every DegreeType of total degree `total` compatible with the
/// field's irreducible counts, parts descending by (d, e).
pub fn enumerate_types(field: &Field, total: u64, mut visit: impl FnMut(&DegreeType)) {
    let mut parts: Vec<(u32, u32)> = Vec::new();
    let mut degree_counts: HashMap<u32, BigUint> = HashMap::new();
    types_rec(
        field,
        total,
        (u32::MAX, u32::MAX),
        &mut parts,
        &mut degree_counts,
        &mut visit,
    );
}

fn types_rec(
    field: &Field,
    remaining: u64,
    max_part: (u32, u32),
    parts: &mut Vec<(u32, u32)>,
    used_by_degree: &mut HashMap<u32, BigUint>,
    visit: &mut impl FnMut(&DegreeType),
) {
    if remaining == 0 {
        visit(&DegreeType {
            parts: parts.clone(),
        });
        return;
    }
    let d_hi = (remaining.min(max_part.0 as u64)) as u32;
    for d in (1..=d_hi).rev() {
        let e_cap = (remaining / d as u64) as u32;
        let e_hi = if d == max_part.0 {
            e_cap.min(max_part.1)
        } else {
            e_cap
        };
        // Distinct irreducibles per degree are limited by pi_q(d).
        let used = used_by_degree.get(&d).cloned().unwrap_or_default();
        if used >= count_irreducible(field, d) {
            continue;
        }
        for e in (1..=e_hi).rev() {
            parts.push((d, e));
            *used_by_degree.entry(d).or_default() += 1u32;
            types_rec(
                field,
                remaining - d as u64 * e as u64,
                (d, e),
                parts,
                used_by_degree,
                visit,
            );
            *used_by_degree.get_mut(&d).unwrap() -= 1u32;
            parts.pop();
        }
    }
}

/// Typewise engine: sum over factorization types T of degree kN of
/// mult(T) * r_k(T)^2.
pub fn moment_typewise(field: &Field, n: u32, k: u32, budget: Option<u64>) -> Result<MomentResult> {
    assert!(k >= 1);
    let start = Instant::now();
    let total = n as u64 * k as u64;
    let budget = budget.unwrap_or(64);
    if total > budget {
        return Err(Error::BudgetExceeded(format!(
            "kN = {total} exceeds the type-enumeration budget {budget}"
        )));
    }
    let mut acc = BigUint::zero();
    enumerate_types(field, total, |ty| {
        let r = type_r_k(ty, n, k);
        if r.is_zero() {
            return;
        }
        acc += type_multiplicity(field, ty) * &r * &r;
    });
    Ok(MomentResult {
        value: acc,
        engine: Engine::Typewise,
        spec: spec_of(field, n, k),
        elapsed_s: start.elapsed().as_secs_f64(),
        degenerate: false,
    })
}

/// Third engine: exact coefficient extraction from the A series.
pub fn moment_series(field: &Field, n: u32, k: u32) -> Result<MomentResult> {
    let start = Instant::now();
    let value = crate::series::moment_coefficient(field, k as usize, n as u64)?;
    Ok(MomentResult {
        value,
        engine: Engine::Series,
        spec: spec_of(field, n, k),
        elapsed_s: start.elapsed().as_secs_f64(),
        degenerate: false,
    })
}

/// Fourth moment closed form: N q^{2N-1} (q - 1) + q^{2N}. At N = 0 the
/// formula's hypothesis fails; the true value 1 is returned with the
/// degenerate flag set.
pub fn fourth_moment_closed(field: &Field, n: u32) -> MomentResult {
    let start = Instant::now();
    let q = BigUint::from(field.order());
    let (value, degenerate) = if n == 0 {
        (BigUint::one(), true)
    } else {
        let q2n1 = q.pow(2 * n - 1);
        let v = BigUint::from(n) * &q2n1 * (&q - 1u32) + &q2n1 * &q;
        (v, false)
    };
    MomentResult {
        value,
        engine: Engine::ClosedForm,
        spec: spec_of(field, n, 2),
        elapsed_s: start.elapsed().as_secs_f64(),
        degenerate,
    }
}

/// Second moment: |M_N| = q^N.
pub fn second_moment_closed(field: &Field, n: u32) -> MomentResult {
    let start = Instant::now();
    MomentResult {
        value: BigUint::from(field.order()).pow(n),
        engine: Engine::ClosedForm,
        spec: spec_of(field, n, 1),
        elapsed_s: start.elapsed().as_secs_f64(),
        degenerate: false,
    }
}

/// Main term b_k(q) * S_k(N) * q^{kN} with the b_k error bound propagated
/// multiplicatively. Never exact: b_k is a truncated Euler product.
pub fn main_term(field: &Field, n: u32, k: u32, target_tol: f64) -> Result<IntervalValue> {
    let b = bk(field, k as u64, target_tol)?;
    let scale = count_magic_squares(k as usize, n as u64)
        .to_f64()
        .ok_or_else(|| Error::BudgetExceeded("S_k(N) exceeds float range".into()))?
        * (field.order() as f64).powi((k * n) as i32);
    Ok(IntervalValue {
        value: b.value * scale,
        error_bound: b.error_bound * scale,
        truncation_degree: b.truncation_degree,
    })
}

/// How to count coprime pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoprimeMethod {
    Brute,
    Closed,
}

/// Number of ordered coprime pairs in M_N x M_N: q^{2N} - q^{2N-1} for
/// N >= 1 (and 1 at N = 0, the unit pair).
pub fn count_coprime_pairs(field: &Field, n: u32, method: CoprimeMethod) -> Result<BigUint> {
    match method {
        CoprimeMethod::Closed => {
            if n == 0 {
                return Ok(BigUint::one());
            }
            let q = BigUint::from(field.order());
            Ok(q.pow(2 * n) - q.pow(2 * n - 1))
        }
        CoprimeMethod::Brute => {
            let space = tuple_space_size(field.order(), n, 2);
            if space.is_none() || space.unwrap() > DEFAULT_BRUTE_BUDGET {
                return Err(Error::BudgetExceeded(format!(
                    "q^(2N) too large for the brute coprime scan at N = {n}"
                )));
            }
            let monics: Vec<MonicPoly> = enumerate_monic(field, n as usize).collect();
            let mut count = 0u64;
            for f in &monics {
                for g in &monics {
                    if f.gcd(g, field)? == MonicPoly::unit() {
                        count += 1;
                    }
                }
            }
            Ok(BigUint::from(count))
        }
    }
}

/// Exact count of tuples (H_1,...,H_s), H_i monic of degree degrees[i],
/// that are pairwise coprime.
pub fn count_pairwise_coprime(field: &Field, degrees: &[u32]) -> Result<BigUint> {
    let total: u32 = degrees.iter().sum();
    let space = tuple_space_size(field.order(), total, 1);
    if space.is_none() || space.unwrap() > DEFAULT_BRUTE_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "q^{total} too large for the pairwise-coprime scan"
        )));
    }
    let mut chosen: Vec<MonicPoly> = Vec::new();
    let mut count = BigUint::zero();
    pairwise_rec(field, degrees, &mut chosen, &mut count)?;
    Ok(count)
}

fn pairwise_rec(
    field: &Field,
    degrees: &[u32],
    chosen: &mut Vec<MonicPoly>,
    count: &mut BigUint,
) -> Result<()> {
    if chosen.len() == degrees.len() {
        *count += 1u32;
        return Ok(());
    }
    let d = degrees[chosen.len()];
    'cand: for h in enumerate_monic(field, d as usize) {
        for prev in chosen.iter() {
            if prev.gcd(&h, field)? != MonicPoly::unit() {
                continue 'cand;
            }
        }
        chosen.push(h);
        pairwise_rec(field, degrees, chosen, count)?;
        chosen.pop();
    }
    Ok(())
}

/// The GCD matrix of a product-balanced pair of k-tuples: row products
/// recover the F_i, column products the G_j, and the degree matrix is a
/// magic square with constant N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GcdMatrix {
    pub size: usize,
    pub entries: Vec<Vec<MonicPoly>>,
}

impl GcdMatrix {
    pub fn degree_matrix(&self) -> MagicSquare {
        let entries: Vec<Vec<u64>> = self
            .entries
            .iter()
            .map(|row| row.iter().map(|p| p.degree() as u64).collect())
            .collect();
        let magic_constant = entries.first().map_or(0, |r| r.iter().sum());
        MagicSquare {
            size: self.size,
            magic_constant,
            entries,
        }
    }
}

/// Decompose a balanced tuple pair via the cyclic-shift GCD recursion:
/// with sigma = (1 2 ... k), for s = 1..k-1 in order,
///   A_{i, sigma^s(i)} = gcd(F_i with earlier row entries removed,
///                           G_{sigma^s(i)} with earlier column entries removed),
/// and the diagonal entry A_{ii} is the final row cofactor.
pub fn gcd_matrix_decompose(
    field: &Field,
    fs: &[MonicPoly],
    gs: &[MonicPoly],
) -> Result<GcdMatrix> {
    let k = fs.len();
    assert!(k >= 1 && gs.len() == k);
    let mut prod_f = MonicPoly::unit();
    let mut prod_g = MonicPoly::unit();
    for i in 0..k {
        prod_f = prod_f.mul(&fs[i], field)?;
        prod_g = prod_g.mul(&gs[i], field)?;
    }
    if prod_f != prod_g {
        return Err(Error::ProductMismatch);
    }
    // Residual cofactors of the rows (F_i) and columns (G_j).
    let mut row_rest: Vec<MonicPoly> = fs.to_vec();
    let mut col_rest: Vec<MonicPoly> = gs.to_vec();
    let mut entries = vec![vec![MonicPoly::unit(); k]; k];
    for s in 1..k {
        for i in 0..k {
            let j = (i + s) % k;
            let a = row_rest[i].gcd(&col_rest[j], field)?;
            row_rest[i] = row_rest[i].div_exact(&a, field)?;
            col_rest[j] = col_rest[j].div_exact(&a, field)?;
            entries[i][j] = a;
        }
    }
    for i in 0..k {
        entries[i][i] = row_rest[i].clone();
        // Consistency of the row and column products forces the column
        // cofactor to match the diagonal entry; check it rather than trust it.
        if col_rest[i] != row_rest[i] {
            return Err(Error::ProductMismatch);
        }
    }
    Ok(GcdMatrix { size: k, entries })
}

/// Row and column products of a GCD matrix.
pub fn gcd_matrix_recompose(
    field: &Field,
    m: &GcdMatrix,
) -> Result<(Vec<MonicPoly>, Vec<MonicPoly>)> {
    let k = m.size;
    let mut fs = Vec::with_capacity(k);
    let mut gs = vec![MonicPoly::unit(); k];
    for i in 0..k {
        let mut row = MonicPoly::unit();
        for j in 0..k {
            row = row.mul(&m.entries[i][j], field)?;
            gs[j] = gs[j].mul(&m.entries[i][j], field)?;
        }
        fs.push(row);
    }
    Ok((fs, gs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> Field {
        Field::from_order(q).unwrap()
    }

    #[test]
    fn second_moment_is_q_to_n() {
        // k = 1: the only balanced tuples are the diagonal ones.
        for (q, n) in [(2u64, 1u32), (2, 3), (3, 2), (7, 2)] {
            let field = f(q);
            let brute = moment_bruteforce(&field, n, 1, None).unwrap();
            assert_eq!(brute.value, BigUint::from(q).pow(n));
            assert_eq!(second_moment_closed(&field, n).value, brute.value);
        }
        assert_eq!(second_moment_closed(&f(3), 0).value, BigUint::one());
    }

    #[test]
    fn brute_golden_values() {
        assert_eq!(
            moment_bruteforce(&f(2), 1, 2, None).unwrap().value,
            BigUint::from(6u32)
        );
        // N=1, q=2: products are t^a (t+1)^{3-a}; sum_a C(3,a)^2 = C(6,3).
        assert_eq!(
            moment_bruteforce(&f(2), 1, 3, None).unwrap().value,
            BigUint::from(20u32)
        );
    }

    #[test]
    fn engines_agree_small() {
        for (q, n_max, k) in [(2u64, 3u32, 2u32), (2, 2, 3), (3, 2, 2), (5, 1, 2)] {
            let field = f(q);
            for n in 0..=n_max {
                let brute = moment_bruteforce(&field, n, k, None).unwrap();
                let ty = moment_typewise(&field, n, k, None).unwrap();
                assert_eq!(brute.value, ty.value, "q={q} n={n} k={k}");
            }
        }
    }

    #[test]
    fn typewise_golden_values() {
        assert_eq!(
            moment_typewise(&f(2), 1, 2, None).unwrap().value,
            BigUint::from(6u32)
        );
        assert_eq!(
            moment_typewise(&f(3), 2, 2, None).unwrap().value,
            BigUint::from(189u32)
        );
        assert_eq!(
            moment_typewise(&f(2), 2, 2, None).unwrap().value,
            BigUint::from(32u32)
        );
    }

    #[test]
    fn moment_at_n_zero_is_one() {
        for k in 1..=4u32 {
            assert_eq!(
                moment_typewise(&f(3), 0, k, None).unwrap().value,
                BigUint::one()
            );
        }
    }

    #[test]
    fn diagonal_lower_bound() {
        for (q, n, k) in [(2u64, 2u32, 2u32), (2, 2, 3), (3, 2, 2), (5, 1, 2)] {
            let field = f(q);
            let v = moment_typewise(&field, n, k, None).unwrap().value;
            assert!(v >= BigUint::from(q).pow(n * k), "q={q} n={n} k={k}");
        }
    }

    #[test]
    fn fourth_moment_closed_values() {
        assert_eq!(fourth_moment_closed(&f(2), 1).value, BigUint::from(6u32));
        assert_eq!(fourth_moment_closed(&f(5), 1).value, BigUint::from(45u32));
        assert_eq!(fourth_moment_closed(&f(2), 3).value, BigUint::from(160u32));
        let degenerate = fourth_moment_closed(&f(2), 0);
        assert_eq!(degenerate.value, BigUint::one());
        assert!(degenerate.degenerate);
    }

    #[test]
    fn closed_form_matches_engines() {
        for q in [2u64, 3] {
            let field = f(q);
            for n in 1..=3u32 {
                assert_eq!(
                    fourth_moment_closed(&field, n).value,
                    moment_bruteforce(&field, n, 2, None).unwrap().value,
                    "q={q} n={n}"
                );
            }
        }
    }

    #[test]
    fn brute_budget_enforced() {
        assert!(matches!(
            moment_bruteforce(&f(2), 10, 3, Some(1000)),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn main_term_values() {
        // k=2, q=2, N=2: (1 - 1/2) * S_2(2) * 2^4 = 24.
        let v = main_term(&f(2), 2, 2, 1e-10).unwrap();
        assert!((v.value - 24.0).abs() < 1e-7, "{}", v.value);
        // k=1: b_1 = 1, S_1(N) = 1, so exactly q^N.
        let v = main_term(&f(3), 4, 1, 1e-10).unwrap();
        assert_eq!(v.value, 81.0);
        assert_eq!(v.error_bound, 0.0);
        // k=2, q=3, N=2: (2/3) * 3 * 81 = 162.
        let v = main_term(&f(3), 2, 2, 1e-10).unwrap();
        assert!((v.value - 162.0).abs() < 1e-6, "{}", v.value);
    }

    #[test]
    fn coprime_pairs() {
        for (q, n, expect) in [(2u64, 1u32, 2u64), (2, 2, 8), (3, 1, 6)] {
            let field = f(q);
            let brute = count_coprime_pairs(&field, n, CoprimeMethod::Brute).unwrap();
            let closed = count_coprime_pairs(&field, n, CoprimeMethod::Closed).unwrap();
            assert_eq!(brute, BigUint::from(expect), "q={q} n={n}");
            assert_eq!(brute, closed);
        }
    }

    #[test]
    fn pairwise_coprime_counts() {
        assert_eq!(
            count_pairwise_coprime(&f(2), &[1, 1]).unwrap(),
            BigUint::from(2u32)
        );
        // Distinct monic linears are exactly the pairwise-coprime triples.
        assert_eq!(
            count_pairwise_coprime(&f(3), &[1, 1, 1]).unwrap(),
            BigUint::from(6u32)
        );
        assert_eq!(
            count_pairwise_coprime(&f(2), &[1]).unwrap(),
            BigUint::from(2u32)
        );
        // Closed form q(q-1)(q-2) for three linears.
        for q in [3u64, 5] {
            assert_eq!(
                count_pairwise_coprime(&f(q), &[1, 1, 1]).unwrap(),
                BigUint::from(q * (q - 1) * (q - 2))
            );
        }
    }

    fn mp(lower: &[u64], field: &Field) -> MonicPoly {
        MonicPoly::from_lower(lower.to_vec(), field).unwrap()
    }

    #[test]
    fn gcd_matrix_hand_example() {
        let field = f(2);
        let t = mp(&[0], &field);
        let t1 = mp(&[1], &field);
        let m = gcd_matrix_decompose(&field, &[t.clone(), t1.clone()], &[t1.clone(), t.clone()])
            .unwrap();
        let one = MonicPoly::unit();
        assert_eq!(
            m.entries,
            vec![vec![one.clone(), t.clone()], vec![t1.clone(), one.clone()]]
        );
        let deg = m.degree_matrix();
        assert_eq!(deg.entries, vec![vec![0, 1], vec![1, 0]]);
        assert!(deg.validate());
        let (fs, gs) = gcd_matrix_recompose(&field, &m).unwrap();
        assert_eq!(fs, vec![t.clone(), t1.clone()]);
        assert_eq!(gs, vec![t1, t]);
    }

    #[test]
    fn gcd_matrix_k1_and_units() {
        let field = f(2);
        let p = mp(&[1, 1], &field);
        let m = gcd_matrix_decompose(&field, &[p.clone()], &[p.clone()]).unwrap();
        assert_eq!(m.entries, vec![vec![p]]);
        // All-unit matrix recomposes to unit tuples.
        let ones = GcdMatrix {
            size: 3,
            entries: vec![vec![MonicPoly::unit(); 3]; 3],
        };
        let (fs, gs) = gcd_matrix_recompose(&field, &ones).unwrap();
        assert!(fs.iter().chain(gs.iter()).all(|p| *p == MonicPoly::unit()));
    }

    #[test]
    fn gcd_matrix_repeated_irreducible() {
        // Fs = Gs = (F, F, F) with F irreducible: degree matrix still magic.
        let field = f(2);
        let p = mp(&[1, 1], &field);
        let tuple = vec![p.clone(), p.clone(), p.clone()];
        let m = gcd_matrix_decompose(&field, &tuple, &tuple).unwrap();
        let deg = m.degree_matrix();
        assert_eq!(deg.magic_constant, 2);
        assert!(deg.validate());
        let (fs, gs) = gcd_matrix_recompose(&field, &m).unwrap();
        assert_eq!(fs, tuple);
        assert_eq!(gs, tuple);
    }

    #[test]
    fn gcd_matrix_rejects_mismatch() {
        let field = f(2);
        let t = mp(&[0], &field);
        let t1 = mp(&[1], &field);
        assert!(matches!(
            gcd_matrix_decompose(&field, &[t.clone(), t.clone()], &[t1.clone(), t1]),
            Err(Error::ProductMismatch)
        ));
    }

    #[test]
    fn gcd_matrix_exhaustive_roundtrip_and_magic() {
        // Every balanced pair of tuples at q=2, N<=2, k=2 round-trips and
        // yields a magic degree matrix.
        let field = f(2);
        for n in 0..=2usize {
            let monics: Vec<MonicPoly> = enumerate_monic(&field, n).collect();
            for a in &monics {
                for b in &monics {
                    let prod = a.mul(b, &field).unwrap();
                    for c in &monics {
                        for d in &monics {
                            if c.mul(d, &field).unwrap() != prod {
                                continue;
                            }
                            let fs = vec![a.clone(), b.clone()];
                            let gs = vec![c.clone(), d.clone()];
                            let m = gcd_matrix_decompose(&field, &fs, &gs).unwrap();
                            let deg = m.degree_matrix();
                            assert_eq!(deg.magic_constant, n as u64);
                            assert!(deg.validate());
                            let (rf, rg) = gcd_matrix_recompose(&field, &m).unwrap();
                            assert_eq!(rf, fs);
                            assert_eq!(rg, gs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn moment_trend_is_exact_rational() {
        // k=2, N=2: moment = 3q^4 - 2q^3, so D(q) = 2/(3q) and q D(q) is
        // the constant 2/3.
        use num_bigint::BigInt;
        use num_rational::BigRational;
        use num_traits::Signed;
        let s22 = BigUint::from(3u32);
        let mut prev: Option<BigRational> = None;
        for q in [2u64, 3, 5, 7] {
            let field = f(q);
            let moment = moment_typewise(&field, 2, 2, None).unwrap().value;
            let denom = &s22 * BigUint::from(q).pow(4);
            let d = (BigRational::from_integer(BigInt::from(moment))
                / BigRational::from_integer(BigInt::from(denom))
                - BigRational::from_integer(BigInt::from(1)))
            .abs();
            let qd = d.clone() * BigRational::from_integer(BigInt::from(q));
            assert_eq!(
                qd,
                BigRational::new(BigInt::from(2), BigInt::from(3)),
                "q={q}"
            );
            if let Some(p) = prev {
                assert!(d < p, "q={q}");
            }
            prev = Some(d);
        }
    }
}
