//! Sweep a random observable family through every check and aggregate the
//! minimum margin, including the tolerance-robustness re-check of the
//! tightest instance.
//!
//! ```bash
//! cargo run -p pjmp --example observable_sweep
//! ```

use pjmp::config::RunConfig;
use pjmp::constants::{compute_constants, Variant};
use pjmp::verify::Harness;

const CONFIG: &str = include_str!("../configs/triple_chain.json");

fn main() -> pjmp::Result<()> {
    let config = RunConfig::from_json(CONFIG)?;
    let system = config.build_system()?;
    let constants = compute_constants(&system.model, &system.space, &system.q, &config.grid_options())?;
    let harness = Harness::new(&system.model, &system.space, &system.q, &constants, 1e-12)?;

    let times = [0.5, 2.0, 2.0 * constants.t1];
    let summary = harness.random_observable_sweep(25, 7, &times, &[Variant::Paper, Variant::Empirical])?;

    println!("observables: {}", summary.n_functions);
    println!("instances:   {}", summary.n_instances);
    println!("passed:      {}", summary.n_pass);
    println!("failed:      {}", summary.n_fail);
    println!("skipped:     {} (conditional claims whose condition was unmet)", summary.n_skipped);
    println!("min margin:  {:.6e}", summary.min_margin);
    if let Some(tightest) = &summary.min_margin_instance {
        println!(
            "tightest:    {} on f={} x={} t={} ({})",
            tightest.name, tightest.instance.f, tightest.instance.x_index, tightest.instance.t,
            tightest.constants_variant
        );
    }
    println!("re-check at 10x tighter engine tolerance: {}", if summary.recheck_pass { "pass" } else { "FAIL" });
    Ok(())
}
