//! Certify the variance bounds on concrete instances: the general-start and
//! recurrent-start inequalities, the large-time corollaries and the
//! stationary Poincaré inequality, with margins per instance.
//!
//! ```bash
//! cargo run -p pjmp --example verify_bounds
//! ```

use pjmp::config::RunConfig;
use pjmp::constants::{compute_constants, Variant};
use pjmp::verify::Harness;

const CONFIG: &str = include_str!("../configs/pair_symmetric.json");

fn main() -> pjmp::Result<()> {
    let config = RunConfig::from_json(CONFIG)?;
    let system = config.build_system()?;
    let constants = compute_constants(&system.model, &system.space, &system.q, &config.grid_options())?;
    let harness = Harness::new(&system.model, &system.space, &system.q, &constants, 1e-12)?;

    let observables = harness.sweep_observables(3, 2024)?;
    println!("check                margin        lhs           rhs           instance");
    for (f_id, f) in &observables {
        for &t in &[0.5, 2.0] {
            for x in 0..system.space.len() {
                let r = harness.check_theorem_general(f, f_id, x, t, Variant::Empirical)?;
                println!(
                    "theorem_general      {:>11.4e}  {:>11.4e}  {:>11.4e}  f={f_id} x={x} t={t}",
                    r.margin, r.lhs, r.rhs
                );
            }
        }
        let t = 2.0 * constants.t1;
        for &x in &harness.class.clone() {
            let r = harness.check_theorem_recurrent(f, f_id, x, t, Variant::Empirical)?;
            println!(
                "theorem_recurrent    {:>11.4e}  {:>11.4e}  {:>11.4e}  f={f_id} x={x} t={t:.3}",
                r.margin, r.lhs, r.rhs
            );
        }
        let r = harness.check_invariant_poincare(f, f_id)?;
        println!(
            "invariant_poincare   {:>11.4e}  {:>11.4e}  {:>11.4e}  f={f_id}",
            r.margin, r.lhs, r.rhs
        );
    }

    // Corollaries are conditional: skipped where the dominance condition
    // fails, never failed.
    let (f_id, f) = &observables[0];
    for &t in &[0.25, 1.0, 4.0, 16.0] {
        let (general, recurrent) = harness.check_corollaries(f, f_id, 1, t, Variant::Empirical)?;
        for r in [general, recurrent] {
            let status = if r.skipped {
                "skipped"
            } else if r.pass {
                "pass"
            } else {
                "FAIL"
            };
            println!("{:<20} t={t:<5} {status}: {}", r.name, r.notes);
        }
    }
    Ok(())
}
