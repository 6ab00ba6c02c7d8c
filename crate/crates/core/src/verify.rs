//! The acceptance suite: every verification criterion as a callable check
//! returning a structured pass/fail result, shared by the CLI `verify`
//! command and the acceptance test target.

use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::constants::bk;
use crate::field::Field;
use crate::irreducible::{count_irreducible, enumerate_irreducible};
use crate::magic::count_magic_squares;
use crate::moments::{
    count_coprime_pairs, count_pairwise_coprime, fourth_moment_closed, gcd_matrix_decompose,
    gcd_matrix_recompose, moment_bruteforce, moment_series, moment_typewise, CoprimeMethod,
};
use crate::montecarlo::{
    estimate_moment, partial_sum, sample_phases, uniform_from_counter, SumMethod,
};
use crate::poly::{enumerate_monic, MonicPoly};
use crate::series::{check_b_identity, zeta_product_coefficient};

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub elapsed_s: f64,
    pub detail: String,
}

fn run(id: u32, name: &'static str, body: impl FnOnce() -> (bool, String)) -> CriterionResult {
    let start = Instant::now();
    let (passed, detail) = body();
    CriterionResult {
        id,
        name,
        passed,
        elapsed_s: start.elapsed().as_secs_f64(),
        detail,
    }
}

/// Criterion 1: the three exact engines agree integer-for-integer.
pub fn criterion_triple_engine() -> CriterionResult {
    run(1, "triple-engine exact agreement", || {
        let cases: Vec<(u64, u32, u32)> = [
            (2u64, 1u32..=4, 2u32),
            (2, 1..=3, 3),
            (3, 1..=2, 2),
            (3, 1..=2, 3),
            (5, 1..=1, 2),
            (2, 1..=2, 4),
        ]
        .into_iter()
        .flat_map(|(q, ns, k)| ns.map(move |n| (q, n, k)))
        .collect();
        for (q, n, k) in cases {
            let field = Field::from_order(q).unwrap();
            let brute = moment_bruteforce(&field, n, k, None).unwrap().value;
            let ty = moment_typewise(&field, n, k, None).unwrap().value;
            let series = moment_series(&field, n, k).unwrap().value;
            if brute != ty || brute != series {
                return (
                    false,
                    format!("q={q} N={n} k={k}: brute={brute} typewise={ty} series={series}"),
                );
            }
        }
        (true, "all engine triples equal".into())
    })
}

/// Criterion 2: the fourth-moment closed form reproduces the engines.
pub fn criterion_fourth_moment() -> CriterionResult {
    run(2, "fourth-moment closed form", || {
        let golden = [
            (2u64, 1u32, 6u64),
            (2, 2, 32),
            (2, 3, 160),
            (3, 2, 189),
            (5, 1, 45),
        ];
        for (q, n, want) in golden {
            let got = fourth_moment_closed(&Field::from_order(q).unwrap(), n).value;
            if got != BigUint::from(want) {
                return (false, format!("golden q={q} N={n}: got {got}, want {want}"));
            }
        }
        for q in [2u64, 3, 5] {
            let field = Field::from_order(q).unwrap();
            let mut n = 1u32;
            while q.pow(2 * n) <= 1_000_000 {
                let closed = fourth_moment_closed(&field, n).value;
                let brute = moment_bruteforce(&field, n, 2, None).unwrap().value;
                if closed != brute {
                    return (false, format!("q={q} N={n}: closed={closed} brute={brute}"));
                }
                n += 1;
            }
        }
        (true, "closed form equals brute force on the full budget range".into())
    })
}

/// Criterion 3: zeta-product coefficient = q^{kN} S_k(N).
pub fn criterion_zeta_product() -> CriterionResult {
    run(3, "zeta-product coefficient identity", || {
        for q in [2u64, 3] {
            let field = Field::from_order(q).unwrap();
            for k in 1..=3usize {
                for n in 0..=4u64 {
                    let lhs = zeta_product_coefficient(&field, k, n).unwrap();
                    let rhs = BigUint::from(q).pow((k as u32) * (n as u32))
                        * count_magic_squares(k, n);
                    if lhs != rhs {
                        return (false, format!("q={q} k={k} N={n}: {lhs} != {rhs}"));
                    }
                }
            }
        }
        (true, "coefficient equals q^(kN) S_k(N) on the grid".into())
    })
}

/// Criterion 4: the B series for k=2 is exactly 1 - q z1 z2 z3 z4.
pub fn criterion_b_identity() -> CriterionResult {
    run(4, "B-series identity (k=2)", || {
        for q in [2u64, 3] {
            let field = Field::from_order(q).unwrap();
            match check_b_identity(&field, 4) {
                Ok(true) => {}
                Ok(false) => return (false, format!("q={q}: extra in-box coefficients")),
                Err(e) => return (false, format!("q={q}: {e}")),
            }
        }
        (true, "B = 1 - q z1 z2 z3 z4 exactly in the cap-4 box".into())
    })
}

/// Criterion 5: b_2(q) = 1 - 1/q, and doubling stability for k in {3,4}.
pub fn criterion_bk_closed_form() -> CriterionResult {
    run(5, "b_k constants vs closed form and stability", || {
        for q in [2u64, 3, 5, 7] {
            let field = Field::from_order(q).unwrap();
            let v = bk(&field, 2, 1e-10).unwrap();
            let expected = 1.0 - 1.0 / q as f64;
            let err = (v.value - expected).abs();
            if err > 1e-10 || err > v.error_bound.max(1e-12) {
                return (false, format!("q={q}: b_2 = {} vs {expected}", v.value));
            }
        }
        for k in [3u64, 4] {
            for q in [2u64, 3] {
                let field = Field::from_order(q).unwrap();
                let a = bk(&field, k, 1e-10).unwrap();
                let b = bk(&field, k, 1e-12).unwrap();
                if (a.value - b.value).abs() > a.error_bound {
                    return (
                        false,
                        format!("q={q} k={k}: refinement left the reported interval"),
                    );
                }
            }
        }
        (true, "b_2 matches 1 - 1/q; doubling stable for k=3,4".into())
    })
}

/// Criterion 6: fourth-moment trend D(q) at (k,N) = (2,2), exact rationals.
pub fn criterion_moment_trend() -> CriterionResult {
    run(6, "moment trend D(q) at k=2, N=2", || {
        let s22 = BigUint::from(3u32); // S_2(2) = 3
        let mut ds: Vec<BigRational> = Vec::new();
        for q in [2u64, 3, 5, 7] {
            let field = Field::from_order(q).unwrap();
            let moment = moment_typewise(&field, 2, 2, None).unwrap().value;
            let denom = &s22 * BigUint::from(q).pow(4);
            let d = (BigRational::new(BigInt::from(moment), BigInt::from(denom))
                - BigRational::one())
            .abs();
            ds.push(d);
        }
        for w in ds.windows(2) {
            if w[1] >= w[0] {
                return (false, "D(q) is not strictly decreasing".into());
            }
        }
        let qs = [2u64, 3, 5, 7];
        let bound = BigRational::new(BigInt::from(3), BigInt::from(2))
            * BigRational::from_integer(BigInt::from(qs[0]))
            * ds[0].clone();
        for (q, d) in qs.iter().zip(&ds) {
            let qd = BigRational::from_integer(BigInt::from(*q)) * d.clone();
            if qd > bound {
                return (false, format!("q={q}: q D(q) exceeds 1.5 q0 D(q0)"));
            }
        }
        (true, "D strictly decreasing; q D(q) within 1.5x the q=2 value".into())
    })
}

/// Criterion 7: bounded-O(1/q) behavior of b_k. The scaled deviations
/// q|b_k(q) - 1| increase toward the asymptotic constant binom(k,2)^2,
/// which (with a 1.5x headroom factor) bounds them across the q range.
pub fn criterion_bk_limit() -> CriterionResult {
    run(7, "b_k -> 1 bounded-O(1/q) property", || {
        for k in [2u64, 3, 4] {
            let half = k * (k - 1) / 2;
            let limit = (half * half) as f64;
            for q in [2u64, 3, 5, 7, 11] {
                let field = Field::from_order(q).unwrap();
                let v = bk(&field, k, 1e-9).unwrap();
                let scaled = q as f64 * (v.value - 1.0).abs();
                if scaled > 1.5 * limit {
                    return (
                        false,
                        format!("k={k} q={q}: q|b_k - 1| = {scaled} > 1.5 * {limit}"),
                    );
                }
            }
        }
        (true, "q|b_k - 1| bounded by 1.5x binom(k,2)^2 for k = 2,3,4".into())
    })
}

/// Criterion 8: coprime-pair count against the closed form.
pub fn criterion_coprime_pairs() -> CriterionResult {
    run(8, "coprime-pair count", || {
        for q in [2u64, 3] {
            let field = Field::from_order(q).unwrap();
            for n in 1..=3u32 {
                let brute = count_coprime_pairs(&field, n, CoprimeMethod::Brute).unwrap();
                let closed = BigUint::from(q).pow(2 * n) - BigUint::from(q).pow(2 * n - 1);
                if brute != closed {
                    return (false, format!("q={q} N={n}: brute={brute} closed={closed}"));
                }
            }
        }
        (true, "brute scan equals q^(2N) - q^(2N-1)".into())
    })
}

/// Criterion 9: second-order pairwise-coprime residual for degrees (1,1,1),
/// exact rationals.
pub fn criterion_pairwise_coprime_residual() -> CriterionResult {
    run(9, "pairwise-coprime residual for degrees (1,1,1)", || {
        let residual = |q: u64| -> BigRational {
            let field = Field::from_order(q).unwrap();
            let c = count_pairwise_coprime(&field, &[1, 1, 1]).unwrap();
            let qr = BigRational::from_integer(BigInt::from(q));
            let inner = BigRational::new(BigInt::from(c), BigInt::from(q).pow(3))
                - BigRational::one()
                + BigRational::new(BigInt::from(3), BigInt::from(q));
            (qr.clone() * qr * inner).abs()
        };
        let base = residual(3);
        let bound = BigRational::new(BigInt::from(3), BigInt::from(2)) * base.clone();
        for q in [3u64, 5, 7, 11] {
            let r = residual(q);
            if r > bound {
                return (false, format!("q={q}: residual {r} exceeds 1.5 x {base}"));
            }
        }
        (true, "q^2 residual bounded by 1.5x its q=3 value".into())
    })
}

/// Deterministic random monic polynomial of the given degree.
fn random_monic(field: &Field, degree: u64, seed: u64, counter: &mut u64) -> MonicPoly {
    let q = field.order();
    let span = q.pow(degree as u32);
    let u = uniform_from_counter(seed, 0xC0DE, *counter);
    *counter += 1;
    let code = ((u * span as f64) as u64).min(span - 1);
    MonicPoly::from_code_u64(code, degree as usize, field)
}

/// Deterministic random k x k magic square with constant n: fill rows with
/// feasible bounded compositions chosen cell by cell.
fn random_magic_entries(k: usize, n: u64, seed: u64, counter: &mut u64) -> Vec<Vec<u64>> {
    let mut residuals = vec![n; k];
    let mut rows = Vec::with_capacity(k);
    for row_idx in 0..k {
        let rows_left = (k - row_idx) as u64;
        let mut row = vec![0u64; k];
        let mut left = n;
        for j in 0..k {
            // Entry bounds keeping both this row and every column feasible:
            // the column must be able to absorb its residual in the rows
            // that remain below this one.
            let suffix: u64 = residuals[j + 1..].iter().sum();
            let hi = left.min(residuals[j]);
            let lo = left
                .saturating_sub(suffix)
                .max(residuals[j].saturating_sub((rows_left - 1) * n));
            let u = uniform_from_counter(seed, 0x5A5A, *counter);
            *counter += 1;
            let pick = lo + ((u * (hi - lo + 1) as f64) as u64).min(hi - lo);
            row[j] = pick;
            left -= pick;
            residuals[j] -= pick;
        }
        debug_assert_eq!(left, 0);
        rows.push(row);
    }
    debug_assert!(residuals.iter().all(|r| *r == 0));
    rows
}

/// Criterion 10: GCD-matrix round-trip, magic degree matrices, and
/// exhaustive injectivity on the small range.
pub fn criterion_gcd_matrix() -> CriterionResult {
    run(10, "GCD-matrix decomposition properties", || {
        let field = Field::from_order(2).unwrap();
        let mut counter = 0u64;
        for k in 1..=3usize {
            for n in 0..=3u64 {
                for _ in 0..1000 {
                    let cells = random_magic_entries(k, n, 99, &mut counter);
                    let mut fs = vec![MonicPoly::unit(); k];
                    let mut gs = vec![MonicPoly::unit(); k];
                    for i in 0..k {
                        for j in 0..k {
                            let cell = random_monic(&field, cells[i][j], 99, &mut counter);
                            fs[i] = fs[i].mul(&cell, &field).unwrap();
                            gs[j] = gs[j].mul(&cell, &field).unwrap();
                        }
                    }
                    let m = match gcd_matrix_decompose(&field, &fs, &gs) {
                        Ok(m) => m,
                        Err(e) => return (false, format!("k={k} N={n}: decompose failed: {e}")),
                    };
                    let deg = m.degree_matrix();
                    if deg.magic_constant != n || !deg.validate() {
                        return (false, format!("k={k} N={n}: degree matrix not magic"));
                    }
                    let (rf, rg) = gcd_matrix_recompose(&field, &m).unwrap();
                    if rf != fs || rg != gs {
                        return (false, format!("k={k} N={n}: round-trip mismatch"));
                    }
                }
            }
        }
        // Exhaustive injectivity at q=2, N=1, k <= 3.
        for k in 1..=3usize {
            let monics: Vec<MonicPoly> = enumerate_monic(&field, 1).collect();
            let mut tuples: Vec<Vec<MonicPoly>> = vec![vec![]];
            for _ in 0..k {
                tuples = tuples
                    .iter()
                    .flat_map(|t| {
                        monics.iter().map(move |m| {
                            let mut t2 = t.clone();
                            t2.push(m.clone());
                            t2
                        })
                    })
                    .collect();
            }
            let mut seen: Vec<(Vec<MonicPoly>, Vec<MonicPoly>, Vec<Vec<MonicPoly>>)> = Vec::new();
            for fs in &tuples {
                for gs in &tuples {
                    let Ok(m) = gcd_matrix_decompose(&field, fs, gs) else {
                        continue;
                    };
                    for (pf, pg, pm) in &seen {
                        if *pm == m.entries && (pf != fs || pg != gs) {
                            return (false, format!("k={k}: decomposition not injective"));
                        }
                    }
                    seen.push((fs.clone(), gs.clone(), m.entries));
                }
            }
        }
        (true, "round-trip, magic degrees, and injectivity all hold".into())
    })
}

/// Criterion 11: Monte Carlo regression at seed 42 and dual-method
/// partial-sum agreement.
pub fn criterion_monte_carlo() -> CriterionResult {
    run(11, "Monte Carlo regression (seed 42)", || {
        let trials = 20_000u64;
        for (q, n) in [(2u64, 2u32), (2, 3), (3, 2)] {
            let field = Field::from_order(q).unwrap();
            let est2 = estimate_moment(&field, n, 1, trials, 42, None).unwrap();
            let target2 = q.pow(n) as f64;
            if (est2.mean - target2).abs() > 3.0 * est2.stderr {
                return (
                    false,
                    format!(
                        "q={q} N={n}: |E|S|^2 - q^N| = {} > 3 stderr = {}",
                        (est2.mean - target2).abs(),
                        3.0 * est2.stderr
                    ),
                );
            }
            let est4 = estimate_moment(&field, n, 2, trials, 42, None).unwrap();
            let target4 = fourth_moment_closed(&field, n)
                .value
                .to_string()
                .parse::<f64>()
                .unwrap();
            if (est4.mean - target4).abs() > 3.0 * est4.stderr {
                return (
                    false,
                    format!(
                        "q={q} N={n}: |E|S|^4 - closed| = {} > 3 stderr = {}",
                        (est4.mean - target4).abs(),
                        3.0 * est4.stderr
                    ),
                );
            }
        }
        let field = Field::from_order(2).unwrap();
        for trial in 0..100u64 {
            let phases = sample_phases(&field, 3, 42, trial);
            let a = partial_sum(&field, &phases, 3, SumMethod::Enumerate).unwrap();
            let b = partial_sum(&field, &phases, 3, SumMethod::Series).unwrap();
            if (a - b).norm() > 1e-9 * a.norm().max(1.0) {
                return (false, format!("trial {trial}: methods disagree"));
            }
        }
        (true, "estimates within 3 stderr; dual methods agree to 1e-9".into())
    })
}

/// Criterion 12: Gauss identity and irreducible-count cross-checks.
pub fn criterion_number_theory() -> CriterionResult {
    run(12, "number-theory infrastructure", || {
        for q in [2u64, 3, 5] {
            let field = Field::from_order(q).unwrap();
            for l in 1..=12u32 {
                let mut sum = BigUint::zero();
                for d in 1..=l {
                    if l % d == 0 {
                        sum += BigUint::from(d) * count_irreducible(&field, d);
                    }
                }
                if sum != BigUint::from(q).pow(l) {
                    return (false, format!("q={q} l={l}: Gauss identity fails"));
                }
            }
        }
        for q in [2u64, 3] {
            let field = Field::from_order(q).unwrap();
            for l in 1..=8u32 {
                let enumerated = enumerate_irreducible(&field, l).len();
                if BigUint::from(enumerated) != count_irreducible(&field, l) {
                    return (false, format!("q={q} l={l}: enumeration count mismatch"));
                }
            }
        }
        (true, "Gauss identity and enumeration counts verified".into())
    })
}

/// Run the whole suite. With `fast_only`, criteria whose budget exceeds
/// roughly ten seconds (the engine sweep and the Monte Carlo regression)
/// are skipped.
pub fn run_all(fast_only: bool) -> Vec<CriterionResult> {
    let mut out = Vec::new();
    let slow = [1u32, 2, 11];
    let checks: Vec<fn() -> CriterionResult> = vec![
        criterion_triple_engine,
        criterion_fourth_moment,
        criterion_zeta_product,
        criterion_b_identity,
        criterion_bk_closed_form,
        criterion_moment_trend,
        criterion_bk_limit,
        criterion_coprime_pairs,
        criterion_pairwise_coprime_residual,
        criterion_gcd_matrix,
        criterion_monte_carlo,
        criterion_number_theory,
    ];
    for (idx, check) in checks.iter().enumerate() {
        let id = idx as u32 + 1;
        if fast_only && slow.contains(&id) {
            continue;
        }
        out.push(check());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_suite_passes() {
        for r in run_all(true) {
            assert!(r.passed, "criterion {}: {}", r.id, r.detail);
        }
    }

    #[test]
    fn random_magic_entries_are_magic() {
        let mut counter = 0;
        for k in 1..=4usize {
            for n in 0..=4u64 {
                for _ in 0..50 {
                    let rows = random_magic_entries(k, n, 5, &mut counter);
                    for row in &rows {
                        assert_eq!(row.iter().sum::<u64>(), n);
                    }
                    for j in 0..k {
                        assert_eq!(rows.iter().map(|r| r[j]).sum::<u64>(), n);
                    }
                }
            }
        }
    }
}
