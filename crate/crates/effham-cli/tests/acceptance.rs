//! Acceptance suite: one test per release gate, each printing a single
//! PASS/FAIL line (visible with `cargo test --test acceptance -- --nocapture`).

use std::panic::{catch_unwind, resume_unwind, UnwindSafe};
use std::process::Command;
use std::time::Instant;

use effham::elimination::{
    closed_form_generator, dicke_hamiltonian, second_order, similarity_transform,
    solve_generator, split_dicke, DEFAULT_TOL_EXP, DEFAULT_TOL_GAP,
};
use effham::flow::integrate_flow_default;
use effham::hilbert::{commutator, excitation_number_op, spin_ops};
use effham::spectra::{
    block_decompose, detuning_sweep, eigenvalues_sym, fit_loglog_slope,
    symmetric_eigenvalues, SweepRecord, DEFAULT_BLOCK_TOL,
};
use effham::variants::{discrete_coefficient, effective_closed_form, VariantId};
use effham::{DickeParams, Error, Operator, SpaceSpec};

fn gate(name: &str, body: impl FnOnce() + UnwindSafe) {
    match catch_unwind(body) {
        Ok(()) => println!("PASS {name}"),
        Err(e) => {
            println!("FAIL {name}");
            resume_unwind(e);
        }
    }
}

fn space(two_s: u32, n_max: u32) -> SpaceSpec {
    SpaceSpec::new(two_s, n_max).unwrap()
}

/// Max-abs difference restricted to the truncation-exact sector
/// (both row and column excitation at most n_max).
fn max_abs_on_exact_blocks(a: &Operator, b: &Operator) -> f64 {
    let sp = a.space();
    let mut worst = 0.0f64;
    for i in 0..sp.dim() {
        for j in 0..sp.dim() {
            if sp.excitation(i) <= sp.n_max() && sp.excitation(j) <= sp.n_max() {
                worst = worst.max((a.data()[(i, j)] - b.data()[(i, j)]).abs());
            }
        }
    }
    worst
}

#[test]
fn generator_solution_matches_closed_form() {
    gate("generator solution matches closed form", || {
        let start = Instant::now();
        let params = DickeParams::new(1.0, 11.0, 0.1);
        for two_s in [1, 2, 3, 5] {
            let sp = space(two_s, 10);
            let (h0, hi) = split_dicke(params, sp);
            let (k, report) = solve_generator(&h0, &hi, DEFAULT_TOL_GAP).unwrap();
            let k_closed = closed_form_generator(params, sp).unwrap();
            let diff = k.operator().sub(k_closed.operator()).unwrap().max_abs();
            assert!(diff <= 1e-12, "two_s = {two_s}: entrywise gap {diff}");
            let residual = commutator(&h0, k.operator())
                .unwrap()
                .sub(&hi)
                .unwrap()
                .max_abs();
            assert!(
                residual <= 1e-12 * params.g,
                "two_s = {two_s}: residual {residual}"
            );
            assert!(report.residual_max <= 1e-12 * params.g);
        }
        let elapsed = start.elapsed().as_secs_f64();
        assert!(elapsed < 1.0, "runtime {elapsed} s");
    });
}

#[test]
fn second_order_term_matches_both_closed_forms() {
    gate("second-order term matches both closed forms", || {
        let params = DickeParams::new(1.0, 11.0, 0.1);
        let shift = params.g * params.g / params.delta();
        for two_s in [1, 2, 3, 5] {
            let sp = space(two_s, 10);
            let (h0, hi) = split_dicke(params, sp);
            let k = closed_form_generator(params, sp).unwrap();
            let h2 = second_order(&hi, &k).unwrap();

            // (g^2/Delta) (2 S_z a†a + S_+ S_-) built from operator products.
            let (s_plus, s_minus, s_z) = spin_ops(sp);
            let a = effham::hilbert::annihilation_op(sp);
            let number = a.transpose().mul(&a).unwrap();
            let direct = s_z
                .mul(&number)
                .unwrap()
                .scale(2.0)
                .add(&s_plus.mul(&s_minus).unwrap())
                .unwrap()
                .scale(shift);
            let gap_direct = max_abs_on_exact_blocks(&h2, &direct);
            assert!(gap_direct <= 1e-12, "two_s = {two_s}: vs products {gap_direct}");

            let variant = effective_closed_form(params, sp, VariantId::Froehlich17)
                .unwrap()
                .sub(&h0)
                .unwrap();
            let gap_variant = max_abs_on_exact_blocks(&h2, &variant);
            assert!(
                gap_variant <= 1e-12,
                "two_s = {two_s}: vs closed form {gap_variant}"
            );
        }
    });
}

#[test]
fn dispersive_errors_shrink_as_detuning_cubed() {
    gate("dispersive errors shrink as detuning cubed", || {
        let start = Instant::now();
        let deltas = [10.0, 20.0, 40.0, 80.0];
        let base = DickeParams::new(1.0, 1.0, 0.1);

        let sp = space(1, 10);
        let (records, slope) = detuning_sweep(base, &deltas, sp, 5).unwrap();
        for record in &records {
            let delta = record.delta;
            let expected = (1..=5u32)
                .map(|q| {
                    let q = q as f64;
                    ((delta * delta / 4.0 + 0.01 * q).sqrt() - delta / 2.0 - 0.01 * q / delta)
                        .abs()
                })
                .fold(0.0f64, f64::max);
            assert!(
                (record.global_max_abs_err - expected).abs() <= 1e-12,
                "delta = {delta}: sweep {} vs dispersive expansion {expected}",
                record.global_max_abs_err
            );
        }
        let slope = slope.unwrap();
        assert!((-3.3..=-2.7).contains(&slope), "spin-1/2 slope {slope}");

        for two_s in [2, 4] {
            let sp = space(two_s, 10);
            let (records, slope) = detuning_sweep(base, &deltas, sp, 5).unwrap();
            for pair in records.windows(2) {
                assert!(
                    pair[1].global_max_abs_err < pair[0].global_max_abs_err,
                    "two_s = {two_s}: error not strictly decreasing"
                );
            }
            let slope = slope.unwrap();
            assert!(slope <= -2.5, "two_s = {two_s}: slope {slope}");
        }
        let elapsed = start.elapsed().as_secs_f64();
        assert!(elapsed < 5.0, "runtime {elapsed} s");
    });
}

#[test]
fn transformation_remainder_scales_as_coupling_cubed() {
    gate("transformation remainder scales as coupling cubed", || {
        let mut records = Vec::new();
        for g in [0.02, 0.04, 0.08, 0.16] {
            let params = DickeParams::new(1.0, 11.0, g);
            let sp = space(2, 8);
            let (h0, hi) = split_dicke(params, sp);
            let full = h0.add(&hi).unwrap();
            let k = closed_form_generator(params, sp).unwrap();
            let transformed = similarity_transform(&full, &k, DEFAULT_TOL_EXP).unwrap();
            let h2 = second_order(&hi, &k).unwrap();
            let target = h0.add(&h2).unwrap();
            let remainder = transformed.sub(&target).unwrap().max_abs();
            records.push(SweepRecord {
                delta: g,
                global_max_abs_err: remainder,
                global_rmse: remainder,
                runtime_seconds: 0.0,
            });
        }
        let slope = fit_loglog_slope(&records).unwrap();
        assert!((2.7..=3.3).contains(&slope), "remainder slope {slope}");
    });
}

#[test]
fn similarity_transform_preserves_spectra() {
    gate("similarity transform preserves spectra", || {
        let params = DickeParams::new(1.0, 11.0, 0.1);
        for two_s in [1, 2, 3, 5] {
            let sp = space(two_s, 10);
            let full = dicke_hamiltonian(params, sp);
            let k = closed_form_generator(params, sp).unwrap();
            let transformed = similarity_transform(&full, &k, DEFAULT_TOL_EXP).unwrap();
            let before = eigenvalues_sym(&full).unwrap();
            let after = eigenvalues_sym(&transformed).unwrap();
            let scale = before
                .iter()
                .chain(&after)
                .fold(0.0f64, |acc, &e| acc.max(e.abs()));
            for (x, y) in before.iter().zip(&after) {
                assert!(
                    (x - y).abs() <= 1e-10 * scale,
                    "two_s = {two_s}: eigenvalue drift {}",
                    (x - y).abs()
                );
            }
        }
    });
}

#[test]
fn counter_rotating_guess_breaks_excitation_blocks() {
    gate("counter-rotating guess breaks excitation blocks", || {
        // For spin 1/2 the counter-rotating term vanishes identically.
        let params = DickeParams::new(1.0, 11.0, 0.1);
        let sp = space(1, 8);
        let guess = effective_closed_form(params, sp, VariantId::Guess18).unwrap();
        let plain = effective_closed_form(params, sp, VariantId::Froehlich17).unwrap();
        assert_eq!(guess.sub(&plain).unwrap().max_abs(), 0.0);

        let sp = space(2, 8);
        let guess = effective_closed_form(params, sp, VariantId::Guess18).unwrap();
        let n_op = excitation_number_op(sp);
        let broken = commutator(&guess, &n_op).unwrap().max_abs();
        assert!(broken > 1e-4, "commutator with N only {broken}");
        match block_decompose(&guess, sp, DEFAULT_BLOCK_TOL) {
            Err(Error::NotBlockDiagonal { .. }) => {}
            other => panic!("expected NotBlockDiagonal, got {other:?}"),
        }
    });
}

#[test]
fn coefficient_difference_matches_geometric_tail() {
    gate("coefficient difference matches geometric tail", || {
        let (omega0, g) = (1.0, 0.1);
        for omega1 in [5.0, 11.0, 101.0] {
            let params = DickeParams::new(omega0, omega1, g);
            let delta = params.delta();
            let series_limit = g * g / delta;
            let c = discrete_coefficient(params).unwrap();
            let tail = g * g * omega0.powi(3) / (omega1.powi(3) * delta);
            // The difference itself cancels to ~machine precision of the
            // summed value, so the tolerance is taken relative to the
            // series limit rather than to the (tiny) difference.
            let gap = ((series_limit - c) - tail).abs();
            assert!(
                gap <= 1e-14 * series_limit,
                "omega1 = {omega1}: gap {gap} vs scale {series_limit}"
            );
        }
    });
}

#[test]
fn flow_diagonalizes_every_small_block() {
    gate("flow diagonalizes every small block", || {
        let start = Instant::now();
        let params = DickeParams::new(1.0, 11.0, 0.5);
        let sp = space(2, 10);
        let full = dicke_hamiltonian(params, sp);
        let blocks = block_decompose(&full, sp, DEFAULT_BLOCK_TOL).unwrap();
        let mut checked = 0;
        for block in &blocks.blocks {
            let h = &block.submatrix;
            if h.nrows() > 8 {
                continue;
            }
            let result = integrate_flow_default(h).unwrap();
            assert!(result.converged, "q = {} did not converge", block.q);

            let norm = h.iter().map(|x| x * x).sum::<f64>().sqrt();
            let mut flowed = result.diagonal();
            flowed.sort_by(f64::total_cmp);
            for (f, e) in flowed.iter().zip(symmetric_eigenvalues(h)) {
                assert!(
                    (f - e).abs() <= 1e-6 * norm.max(1.0),
                    "q = {}: flow eigenvalue gap {}",
                    block.q,
                    (f - e).abs()
                );
            }

            let trace0: f64 = (0..h.nrows()).map(|i| h[(i, i)]).sum();
            let trace1: f64 = result.final_state.h.diagonal().iter().sum();
            assert!((trace1 - trace0).abs() <= 1e-9 * trace0.abs().max(1.0));
            let trace_sq0: f64 = h.iter().map(|x| x * x).sum();
            let trace_sq1: f64 = result.final_state.h.iter().map(|x| x * x).sum();
            assert!((trace_sq1 - trace_sq0).abs() <= 1e-9 * trace_sq0.max(1.0));

            for pair in result.history.windows(2) {
                assert!(
                    pair[1].1 <= pair[0].1 * (1.0 + 1e-12),
                    "q = {}: off-diagonal norm grew",
                    block.q
                );
            }
            checked += 1;
        }
        assert!(checked > 0, "no blocks of dimension <= 8 found");
        let elapsed = start.elapsed().as_secs_f64();
        assert!(elapsed < 10.0, "runtime {elapsed} s");
    });
}

#[test]
fn cli_reports_are_deterministic_and_flag_resonance() {
    gate("cli reports are deterministic and flag resonance", || {
        let dir = tempfile::tempdir().unwrap();
        let sweep_config = "\
command = \"sweep\"
q_max = 5

[params]
omega0 = 1.0
g = 0.1

[space]
two_s = 1
n_max = 10

[sweep]
delta_min = 10.0
delta_max = 80.0
points = 4
spacing = \"log\"

[output]
path = \"sweep.csv\"
";
        let sweep_path = dir.path().join("sweep.toml");
        std::fs::write(&sweep_path, sweep_config).unwrap();
        let mut outputs = Vec::new();
        for _ in 0..2 {
            let status = Command::new(env!("CARGO_BIN_EXE_effham"))
                .current_dir(dir.path())
                .arg(&sweep_path)
                .status()
                .unwrap();
            assert!(status.success());
            outputs.push(std::fs::read(dir.path().join("sweep.csv")).unwrap());
        }
        assert_eq!(outputs[0], outputs[1], "sweep CSV not byte-identical");

        let resonant_config = "\
command = \"eliminate\"

[params]
omega0 = 1.0
omega1 = 1.0
g = 0.1

[space]
two_s = 1
n_max = 6
";
        let resonant_path = dir.path().join("resonant.toml");
        std::fs::write(&resonant_path, resonant_config).unwrap();
        let out = Command::new(env!("CARGO_BIN_EXE_effham"))
            .current_dir(dir.path())
            .arg(&resonant_path)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(2));
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(stderr.contains("Resonance"), "stderr: {stderr}");
    });
}
