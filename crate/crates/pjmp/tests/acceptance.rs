//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (run with `cargo test -p pjmp --test acceptance -- --nocapture` to see
//! them). Tolerances are pinned in the assertions.

use std::time::{Duration, Instant};

use pjmp::config::{RunConfig, System};
use pjmp::constants::{
    compute_constants, compute_ratio_constants, compute_t0_star, ConstantsReport, GridOptions,
    Variant,
};
use pjmp::exact::{
    carre_observable, invariant_measure, invariant_residual, no_jump_probability,
    one_jump_probability, optimal_poincare_constant, peak_time_t0, transition_probabilities,
    transition_row, variance_invariant, Observable,
};
use pjmp::model::State;
use pjmp::montecarlo::{
    chi_square_fit, empirical_distribution, estimate_expectation, estimate_variance,
};
use pjmp::numerics::simpson;
use pjmp::verify::{random_observables, Harness};

const SINGLE: &str = include_str!("../configs/single_neuron.json");
const PAIR: &str = include_str!("../configs/pair_symmetric.json");
const TRIPLE: &str = include_str!("../configs/triple_chain.json");

fn system(config: &str) -> (RunConfig, System) {
    let config = RunConfig::from_json(config).expect("bundled config parses");
    let system = config.build_system().expect("bundled config builds");
    (config, system)
}

fn constants(config: &RunConfig, system: &System) -> ConstantsReport {
    compute_constants(&system.model, &system.space, &system.q, &config.grid_options())
        .expect("constants computable")
}

fn report(criterion: &str, ok: bool, elapsed: Duration, detail: &str) {
    let status = if ok { "PASS" } else { "FAIL" };
    println!("{status} {criterion} ({:.2}s) {detail}", elapsed.as_secs_f64());
    assert!(ok, "{criterion}: {detail}");
}

#[test]
fn c01_generator_and_semigroup_soundness() {
    let start = Instant::now();
    let (_, sys) = system(PAIR);
    let q = &sys.q;
    let mut max_row_sum = 0.0f64;
    for u in 0..q.n_states() {
        let row_sum: f64 = q.off_diagonal(u).iter().map(|&(_, r)| r).sum::<f64>() + q.diagonal(u);
        max_row_sum = max_row_sum.max(row_sum.abs());
    }
    let mut max_stochastic_gap = 0.0f64;
    let mut max_ck_gap = 0.0f64;
    let grid = [0.1, 0.3, 0.7, 1.5, 3.0];
    for &s in &grid {
        let ps = transition_probabilities(q, s, 1e-12).unwrap();
        for u in 0..q.n_states() {
            let sum: f64 = (0..q.n_states()).map(|v| ps[(u, v)]).sum();
            max_stochastic_gap = max_stochastic_gap.max((sum - 1.0).abs());
        }
        for &t in &grid {
            let pt = transition_probabilities(q, t, 1e-12).unwrap();
            let pst = transition_probabilities(q, s + t, 1e-12).unwrap();
            let prod = &ps * &pt;
            max_ck_gap = max_ck_gap.max((&pst - &prod).abs().max());
        }
    }
    let elapsed = start.elapsed();
    let ok = max_row_sum <= 1e-13
        && max_stochastic_gap <= 1e-10
        && max_ck_gap <= 1e-8
        && elapsed < Duration::from_secs(5);
    report(
        "criterion 1 (generator/semigroup soundness)",
        ok,
        elapsed,
        &format!(
            "row sums {max_row_sum:.2e}, stochastic gap {max_stochastic_gap:.2e}, Chapman-Kolmogorov {max_ck_gap:.2e}"
        ),
    );
}

#[test]
fn c02_jump_probability_closed_forms() {
    let start = Instant::now();
    let (_, sys) = system(PAIR);
    let model = &sys.model;
    // 50 (s, x, i) samples against the quadrature oracle.
    let mut max_gap = 0.0f64;
    let mut samples = 0;
    let s_values = [0.05, 0.2, 0.45, 0.9, 1.8];
    'outer: for u in 0..sys.space.len() {
        for i in 0..model.n() {
            for &s in &s_values {
                let closed = one_jump_probability(model, s, sys.space.state(u), i).unwrap();
                let x = sys.space.state(u);
                let r = model.total_intensity(x);
                let y = model.apply_jump(x, i).unwrap();
                let rp = model.total_intensity(&y);
                let rate_i = model.intensities(x)[i];
                let quad = simpson(|w| rate_i * (-w * r).exp() * (-(s - w) * rp).exp(), 0.0, s, 1024);
                max_gap = max_gap.max((closed - quad).abs());
                samples += 1;
                if samples >= 50 {
                    break 'outer;
                }
            }
        }
    }
    // Unimodality and grid-argmax, including the equal-rates branch on the
    // single-neuron constant-rate model.
    let (_, single) = system(SINGLE);
    let x = single.space.state(0);
    let mut argmax_ok = true;
    let mut unimodal_ok = true;
    for (sys_ref, x_ref, i) in [(&sys, sys.space.state(0), 0usize), (&single, x, 0usize)] {
        let t0 = peak_time_t0(&sys_ref.model, x_ref, i).unwrap();
        let steps = 20_000;
        let hi = 4.0 * t0.max(1.0);
        let mut best = (0.0, f64::MIN);
        let mut last = 0.0;
        let mut rising = true;
        for k in 1..=steps {
            let s = hi * k as f64 / steps as f64;
            let p = one_jump_probability(&sys_ref.model, s, x_ref, i).unwrap();
            if p > best.1 {
                best = (s, p);
            }
            if p < last - 1e-15 && rising && s < t0 * 0.999 {
                unimodal_ok = false;
            }
            if s > t0 * 1.001 && p > last + 1e-15 {
                rising = false;
                unimodal_ok = false;
            }
            last = p;
        }
        if (best.0 - t0).abs() > hi / steps as f64 + 1e-12 {
            argmax_ok = false;
        }
    }
    // Equal-rates branch closed form on the single-neuron model.
    let mut equal_branch_ok = true;
    for &s in &[0.1, 0.5, 1.0, 2.0] {
        let p = one_jump_probability(&single.model, s, x, 0).unwrap();
        if (p - s * (-s).exp()).abs() > 1e-14 {
            equal_branch_ok = false;
        }
        let p0 = no_jump_probability(&single.model, s, x).unwrap();
        if (p0 - (-s).exp()).abs() > 1e-14 {
            equal_branch_ok = false;
        }
    }
    let elapsed = start.elapsed();
    let ok = samples == 50
        && max_gap <= 1e-10
        && argmax_ok
        && unimodal_ok
        && equal_branch_ok
        && elapsed < Duration::from_secs(5);
    report(
        "criterion 2 (one-jump closed forms and peak time)",
        ok,
        elapsed,
        &format!("quadrature gap {max_gap:.2e} over {samples} samples"),
    );
}

#[test]
fn c03_dynkin_and_variance_representation() {
    let start = Instant::now();
    let mut max_dynkin = 0.0f64;
    let mut max_var_repr = 0.0f64;
    for config in [SINGLE, PAIR] {
        let (cfg, sys) = system(config);
        let consts = constants(&cfg, &sys);
        let harness = Harness::new(&sys.model, &sys.space, &sys.q, &consts, 1e-12).unwrap();
        let observables = random_observables(&sys.space, 50, 314).unwrap();
        for (f_id, f) in &observables {
            for &t in &[0.5, 2.0] {
                let r = harness.check_dynkin(f, f_id, 0, t).unwrap();
                max_dynkin = max_dynkin.max(r.lhs);
                assert!(r.pass, "Dynkin gap {} at {f_id}, t={t}", r.lhs);
            }
            let r = harness.check_variance_representation(f, f_id, 0, 0.9).unwrap();
            max_var_repr = max_var_repr.max(r.lhs);
            assert!(r.pass, "variance representation gap {} at {f_id}", r.lhs);
        }
    }
    let elapsed = start.elapsed();
    let ok = max_dynkin <= 1e-7 && max_var_repr <= 1e-7 && elapsed < Duration::from_secs(30);
    report(
        "criterion 3 (Dynkin and variance representation)",
        ok,
        elapsed,
        &format!("Dynkin gap {max_dynkin:.2e}, representation gap {max_var_repr:.2e}"),
    );
}

#[test]
fn c04_invariant_measure_fixed_point() {
    let start = Instant::now();
    let mut max_residual = 0.0f64;
    let mut max_fixed_point_gap = 0.0f64;
    for config in [SINGLE, PAIR, TRIPLE] {
        let (_, sys) = system(config);
        let class = sys.space.single_closed_class().unwrap().to_vec();
        let pi = invariant_measure(&sys.q, &class).unwrap();
        max_residual = max_residual.max(invariant_residual(&sys.q, &pi));
        for &t in &[0.5, 1.0, 2.0] {
            let pt = transition_probabilities(&sys.q, t, 1e-12).unwrap();
            let mut l1 = 0.0;
            for v in 0..sys.space.len() {
                let moved: f64 = (0..sys.space.len()).map(|u| pi.prob(u) * pt[(u, v)]).sum();
                l1 += (moved - pi.prob(v)).abs();
            }
            max_fixed_point_gap = max_fixed_point_gap.max(l1);
        }
    }
    let elapsed = start.elapsed();
    let ok = max_residual <= 1e-12 && max_fixed_point_gap <= 1e-9;
    report(
        "criterion 4 (invariant measure)",
        ok,
        elapsed,
        &format!("|pi Q| {max_residual:.2e}, |pi P_t - pi|_1 {max_fixed_point_gap:.2e}"),
    );
}

#[test]
fn c05_general_variance_bound_sweep() {
    let start = Instant::now();
    let (cfg, sys) = system(PAIR);
    let consts = constants(&cfg, &sys);
    let harness = Harness::new(&sys.model, &sys.space, &sys.q, &consts, 1e-12).unwrap();
    let observables = random_observables(&sys.space, 200, 2718).unwrap();
    let times = [0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0];
    let mut checks = 0usize;
    let mut min_margin = f64::INFINITY;
    for (f_id, f) in &observables {
        for &t in &times {
            for x in 0..sys.space.len() {
                for variant in [Variant::Empirical, Variant::Paper] {
                    let r = harness.check_theorem_general(f, f_id, x, t, variant).unwrap();
                    assert!(
                        !r.failed(),
                        "general bound failed: f={f_id} x={x} t={t} {variant:?} margin={}",
                        r.margin
                    );
                    min_margin = min_margin.min(r.margin);
                    checks += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = checks == 200 * 8 * 5 * 2 && elapsed < Duration::from_secs(120);
    report(
        "criterion 5 (general-start variance bound)",
        ok,
        elapsed,
        &format!("{checks} checks, min margin {min_margin:.3e}"),
    );
}

#[test]
fn c06_recurrent_variance_bound_sweep() {
    let start = Instant::now();
    let mut checks = 0usize;
    let mut min_margin = f64::INFINITY;
    for config in [PAIR, TRIPLE] {
        let (cfg, sys) = system(config);
        let consts = constants(&cfg, &sys);
        let harness = Harness::new(&sys.model, &sys.space, &sys.q, &consts, 1e-12).unwrap();
        let observables = random_observables(&sys.space, 100, 1618).unwrap();
        let t1 = consts.t1;
        for (f_id, f) in &observables {
            for &mult in &[1.1, 2.0, 5.0] {
                for &x in &harness.class.clone() {
                    for variant in [Variant::Empirical, Variant::Paper] {
                        let r = harness
                            .check_theorem_recurrent(f, f_id, x, mult * t1, variant)
                            .unwrap();
                        assert!(
                            !r.failed(),
                            "recurrent bound failed: f={f_id} x={x} t={} margin={}",
                            mult * t1,
                            r.margin
                        );
                        min_margin = min_margin.min(r.margin);
                        checks += 1;
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    report(
        "criterion 6 (recurrent-start variance bound)",
        checks > 0,
        elapsed,
        &format!("{checks} checks, min margin {min_margin:.3e}"),
    );
}

#[test]
fn c07_stationary_poincare_inequality() {
    let start = Instant::now();
    for config in [PAIR, TRIPLE] {
        let (cfg, sys) = system(config);
        let consts = constants(&cfg, &sys);
        let class = sys.space.single_closed_class().unwrap().to_vec();
        let pi = invariant_measure(&sys.q, &class).unwrap();
        let (c_opt, extremal) = optimal_poincare_constant(&sys.q, &pi, &class).unwrap();
        assert!(c_opt <= consts.c0, "sharp constant above constructive one");
        let observables = random_observables(&sys.space, 1000, 6022).unwrap();
        for (f_id, f) in &observables {
            let var = variance_invariant(&pi, f);
            let energy = pi.mean(&carre_observable(&sys.model, &sys.space, f));
            assert!(
                var <= consts.c0 * energy + 1e-9 * consts.c0 * energy.max(1.0),
                "stationary bound failed for {f_id}"
            );
        }
        // The extremal observable attains the sharp ratio.
        let f = Observable::from_values(&sys.space, extremal).unwrap();
        let var = variance_invariant(&pi, &f);
        let energy = pi.mean(&carre_observable(&sys.model, &sys.space, &f));
        let ratio = var / energy;
        assert!(
            (ratio - c_opt).abs() <= 1e-6 * c_opt,
            "extremal ratio {ratio} vs sharp constant {c_opt}"
        );
    }
    let elapsed = start.elapsed();
    report("criterion 7 (stationary Poincaré inequality)", true, elapsed, "2000 observables");
}

#[test]
fn c08_ratio_constants_and_uniform_lower_bound() {
    let start = Instant::now();
    for config in [PAIR, TRIPLE] {
        let (cfg, sys) = system(config);
        let t0 = compute_t0_star(&sys.model, &sys.space).unwrap();
        let t1 = 1.0 / sys.model.delta() + t0;
        let coarse = compute_ratio_constants(
            &sys.model,
            &sys.space,
            &sys.q,
            t0,
            t1,
            &GridOptions { per_decade: 32, ..Default::default() },
        )
        .unwrap();
        let fine = compute_ratio_constants(
            &sys.model,
            &sys.space,
            &sys.q,
            t0,
            t1,
            &GridOptions { per_decade: 64, ..Default::default() },
        )
        .unwrap();
        for (a, b, label) in [
            (coarse.c1.empirical, fine.c1.empirical, "c1"),
            (coarse.c2.empirical, fine.c2.empirical, "c2"),
        ] {
            assert!(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0);
            let drift = (a - b).abs() / a.max(b);
            assert!(drift < 0.05, "{label} drifted {drift:.3} under grid refinement");
        }
        assert!(coarse.warnings.is_empty() && fine.warnings.is_empty());
        // Uniform lower bound on the recurrent domain.
        let consts = constants(&cfg, &sys);
        let harness = Harness::new(&sys.model, &sys.space, &sys.q, &consts, 1e-12).unwrap();
        let r = harness.check_uniform_lower_bound().unwrap();
        assert!(r.pass, "theta * pi_t dipped below 1: {r:?}");
    }
    let elapsed = start.elapsed();
    report("criterion 8 (ratio constants and uniform lower bound)", true, elapsed, "");
}

#[test]
fn c09_montecarlo_crosscheck() {
    let start = Instant::now();
    let (cfg, sys) = system(PAIR);
    let x0_index = sys.space.index_of(&sys.x0).unwrap();
    let n_paths = 100_000;
    let seed = cfg.mc.seed;
    let f = |s: &State| {
        let p = s.potentials();
        p[0] + 2.0 * p[1]
    };
    let obs = Observable::from_fn(&sys.space, |s| {
        let p = s.potentials();
        p[0] + 2.0 * p[1]
    })
    .unwrap();
    let mut worst_z = 0.0f64;
    for &t in &[0.5, 2.0] {
        let est = estimate_expectation(&sys.model, &sys.x0, t, n_paths, seed, f).unwrap();
        let exact_row = transition_row(&sys.q, t, x0_index, 1e-12).unwrap();
        let exact: f64 = exact_row.iter().zip(obs.values()).map(|(p, v)| p * v).sum();
        let z = (est.mean - exact).abs() / est.std_error;
        worst_z = worst_z.max(z);
        assert!(
            (est.mean - exact).abs() <= 4.0 * est.std_error,
            "mean off at t={t}: {} vs {exact} (z={z:.2})",
            est.mean
        );
        let vest = estimate_variance(&sys.model, &sys.x0, t, n_paths, seed + 1, f).unwrap();
        let m2: f64 = exact_row
            .iter()
            .zip(obs.values())
            .map(|(p, v)| p * v * v)
            .sum();
        let vexact = m2 - exact * exact;
        let vz = (vest.mean - vexact).abs() / vest.std_error;
        worst_z = worst_z.max(vz);
        assert!(
            (vest.mean - vexact).abs() <= 4.0 * vest.std_error,
            "variance off at t={t}: {} vs {vexact} (z={vz:.2})"
            , vest.mean
        );
        let counts =
            empirical_distribution(&sys.model, &sys.space, &sys.x0, t, n_paths, seed + 2).unwrap();
        let (stat, dof, p_value) = chi_square_fit(&counts, &exact_row);
        assert!(
            p_value >= 1e-3,
            "chi-square rejected at t={t}: stat={stat}, dof={dof}, p={p_value}"
        );
    }
    let elapsed = start.elapsed();
    let ok = elapsed < Duration::from_secs(60);
    report(
        "criterion 9 (Monte-Carlo cross-check)",
        ok,
        elapsed,
        &format!("n_paths {n_paths}, worst |z| {worst_z:.2}"),
    );
}

#[test]
fn c10_determinism_across_worker_counts() {
    let start = Instant::now();
    let bin = env!("CARGO_BIN_EXE_pjmp");
    let config = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/pair_symmetric.json");
    let run = |cmd: &str, workers: &str, dir: &std::path::Path| {
        let output = std::process::Command::new(bin)
            .args([
                cmd,
                "--config",
                config,
                "--out",
                dir.to_str().unwrap(),
                "--workers",
                workers,
            ])
            .output()
            .expect("binary runs");
        assert!(
            output.status.success(),
            "{cmd} failed: {}",
            String::from_utf8_lossy(&output.stderr)
        );
        let mut bytes = output.stdout.clone();
        let mut names: Vec<_> = std::fs::read_dir(dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .collect();
        names.sort();
        for path in names {
            bytes.extend(std::fs::read(&path).unwrap());
        }
        bytes
    };
    for cmd in ["verify", "simulate"] {
        let d1 = tempfile::tempdir().unwrap();
        let d2 = tempfile::tempdir().unwrap();
        let d3 = tempfile::tempdir().unwrap();
        let first = run(cmd, "1", d1.path());
        let repeat = run(cmd, "1", d2.path());
        let parallel = run(cmd, "8", d3.path());
        assert_eq!(first, repeat, "{cmd} not reproducible at fixed workers");
        assert_eq!(first, parallel, "{cmd} output depends on worker count");
    }
    let elapsed = start.elapsed();
    report("criterion 10 (determinism across worker counts)", true, elapsed, "verify + simulate");
}
