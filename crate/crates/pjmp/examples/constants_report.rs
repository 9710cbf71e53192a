//! Compute every constant entering the variance bounds for a bundled model,
//! in both the constructive ("paper") and sharp ("empirical") variants.
//!
//! ```bash
//! cargo run -p pjmp --example constants_report
//! ```

use pjmp::config::RunConfig;
use pjmp::constants::{compute_constants, Variant};

const CONFIG: &str = include_str!("../configs/pair_symmetric.json");

fn main() -> pjmp::Result<()> {
    let config = RunConfig::from_json(CONFIG)?;
    let system = config.build_system()?;
    let report = compute_constants(&system.model, &system.space, &system.q, &config.grid_options())?;

    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));

    println!("\nbound factors at a few times:");
    println!("  variant     t      alpha(t)        beta        gamma(t)");
    for variant in [Variant::Paper, Variant::Empirical] {
        let poly = report.polynomials(variant);
        for t in [0.5, 2.0, 8.0] {
            println!(
                "  {:<9} {t:>5}  {:>12.4e}  {:>10.4e}  {:>12.4e}",
                variant.label(),
                poly.alpha(t),
                poly.beta,
                poly.gamma(t)
            );
        }
    }
    println!(
        "\nlooseness of the constructive stationary constant: c0 / sharp = {:.3}",
        report.c0 / report.optimal_constant
    );
    Ok(())
}
