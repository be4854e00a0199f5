//! Acceptance suite: every release criterion as one test, so the standard
//! test run prints one pass/fail line per criterion.  The checks
//! themselves live in `preproj::acceptance` and are shared with the
//! `selftest` command; the final test exercises determinism through the
//! installed binary itself.

use preproj::acceptance;
use preproj::rep::Genericity;
use std::process::Command;

fn budget() -> Genericity {
    Genericity::default()
}

fn pass(outcome: preproj::Result<String>) {
    match outcome {
        Ok(detail) => println!("{detail}"),
        Err(err) => panic!("{err}"),
    }
}

#[test]
fn criterion_1_c2_weight_32_component_count_and_types() {
    pass(acceptance::component_count_c2(&budget()));
}

#[test]
fn criterion_2_c2_graded_algebra_dimensions() {
    pass(acceptance::algebra_dimensions_c2());
}

#[test]
fn criterion_3_kostant_oracle_agreement_all_presets() {
    pass(acceptance::kostant_agreement(&budget()));
}

#[test]
fn criterion_4_crystal_axiom_suite_zero_violations() {
    pass(acceptance::axiom_suite(&budget()));
}

#[test]
fn criterion_5_deformed_affine_example_both_parameters() {
    pass(acceptance::deformed_affine_example());
}

#[test]
fn criterion_6_ext_formulas_on_random_modules() {
    pass(acceptance::random_module_formulas(200));
}

#[test]
fn criterion_7_dimension_recursion_identity() {
    pass(acceptance::dimension_recursion(1000));
}

#[test]
fn criterion_8_binary_output_is_byte_deterministic() {
    let run = |format: &str| -> Vec<u8> {
        let out = Command::new(env!("CARGO_BIN_EXE_preproj"))
            .args([
                "crystal", "c2", "--depth", "5", "--seed", "7", "--format", format,
            ])
            .output()
            .expect("binary runs");
        assert!(
            out.status.success(),
            "crystal command failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        out.stdout
    };
    for format in ["json", "dot"] {
        let first = run(format);
        let second = run(format);
        assert!(!first.is_empty());
        assert_eq!(first, second, "{format} output differs between runs");
    }
}

#[test]
fn invariant_presentation_independent_class_counts() {
    pass(acceptance::presentation_independence(&budget()));
}
