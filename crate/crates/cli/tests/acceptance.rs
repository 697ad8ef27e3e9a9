//! Acceptance battery: one test per verification criterion, each printing a
//! single pass/fail line (visible with `--nocapture`) and failing with the
//! report detail if its criterion does not hold. The `verify` verb of the
//! binary runs the exact same checks.

use cantor_rays_cli::checks;

macro_rules! criterion {
    ($test:ident, $check:path) => {
        #[test]
        fn $test() {
            let report = $check();
            println!(
                "criterion {:02} {}: {} — {}",
                report.id,
                report.name,
                if report.passed { "pass" } else { "FAIL" },
                report.detail,
            );
            assert!(report.passed, "criterion {:02} {}: {}", report.id, report.name, report.detail);
        }
    };
}

criterion!(criterion_01_coding_exactness, checks::c01_coding_exactness);
criterion!(criterion_02_canonical_round_trip, checks::c02_round_trip);
criterion!(criterion_03_crossing_closed_forms, checks::c03_intersection_closed_forms);
criterion!(criterion_04_translation_action, checks::c04_translation_action);
criterion!(criterion_05_axis_geodesity, checks::c05_axis_geodesic);
criterion!(criterion_06_prefix_depth_lipschitz, checks::c06_a_lipschitz);
criterion!(criterion_07_unicorn_lemmas, checks::c07_unicorn_lemmas);
criterion!(criterion_08_hat_map_qi_bounds, checks::c08_qi_bounds);
criterion!(criterion_09_quasimorphism_values, checks::c09_quasimorphism_values);
criterion!(criterion_10_axis_non_reversal, checks::c10_non_reversal);
criterion!(criterion_11_translation_independence, checks::c11_independence);
criterion!(criterion_12_thin_triangle_sampling, checks::c12_delta_sample);
