//! Acceptance gate: one test per criterion, each printing a single
//! PASS/FAIL line (run with `--nocapture` to see them all).

use ffmoments::verify::{self, CriterionResult};

fn gate(result: CriterionResult) {
    println!(
        "[{}] criterion {:2} — {} ({:.2}s): {}",
        if result.passed { "PASS" } else { "FAIL" },
        result.id,
        result.name,
        result.elapsed_s,
        result.detail
    );
    assert!(
        result.passed,
        "criterion {} ({}) failed: {}",
        result.id, result.name, result.detail
    );
}

#[test]
fn criterion_01_triple_engine_agreement() {
    gate(verify::criterion_triple_engine());
}

#[test]
fn criterion_02_fourth_moment_closed_form() {
    gate(verify::criterion_fourth_moment());
}

#[test]
fn criterion_03_zeta_product_coefficient() {
    gate(verify::criterion_zeta_product());
}

#[test]
fn criterion_04_b_series_identity() {
    gate(verify::criterion_b_identity());
}

#[test]
fn criterion_05_bk_closed_form_and_stability() {
    gate(verify::criterion_bk_closed_form());
}

#[test]
fn criterion_06_moment_trend() {
    gate(verify::criterion_moment_trend());
}

#[test]
fn criterion_07_bk_limit_property() {
    gate(verify::criterion_bk_limit());
}

#[test]
fn criterion_08_coprime_pairs() {
    gate(verify::criterion_coprime_pairs());
}

#[test]
fn criterion_09_pairwise_coprime_residual() {
    gate(verify::criterion_pairwise_coprime_residual());
}

#[test]
fn criterion_10_gcd_matrix_properties() {
    gate(verify::criterion_gcd_matrix());
}

#[test]
fn criterion_11_monte_carlo_regression() {
    gate(verify::criterion_monte_carlo());
}

#[test]
fn criterion_12_number_theory_infrastructure() {
    gate(verify::criterion_number_theory());
}
