//! Reproducible Monte-Carlo estimation against the exact engine: means,
//! variances and the full time-t distribution with a goodness-of-fit test.
//!
//! ```bash
//! cargo run -p pjmp --example monte_carlo
//! ```

use pjmp::config::RunConfig;
use pjmp::exact::{semigroup_apply, variance_semigroup, Observable};
use pjmp::model::State;
use pjmp::montecarlo::{
    chi_square_fit, empirical_distribution, estimate_expectation, estimate_variance,
};

const CONFIG: &str = include_str!("../configs/pair_symmetric.json");

fn main() -> pjmp::Result<()> {
    let config = RunConfig::from_json(CONFIG)?;
    let system = config.build_system()?;
    let x0_index = system.space.index_of(&system.x0).expect("x0 enumerated");

    let n_paths = 50_000;
    let seed = 2024;
    let t = 1.0;
    let f = |s: &State| {
        let p = s.potentials();
        p[0] + 2.0 * p[1]
    };
    let obs = Observable::from_fn(&system.space, |s| {
        let p = s.potentials();
        p[0] + 2.0 * p[1]
    })?;

    let est = estimate_expectation(&system.model, &system.x0, t, n_paths, seed, f)?;
    let exact = semigroup_apply(&system.q, t, &obs, x0_index, 1e-12)?;
    println!("mean of x0 + 2*x1 at t = {t} over {n_paths} paths (seed {seed}):");
    println!("  monte carlo: {:.6} +- {:.6}", est.mean, est.std_error);
    println!("  exact:       {exact:.6}");
    println!("  |gap| / std_error = {:.2}", (est.mean - exact).abs() / est.std_error);

    let vest = estimate_variance(&system.model, &system.x0, t, n_paths, seed + 1, f)?;
    let vexact = variance_semigroup(&system.q, t, &obs, x0_index, 1e-12)?;
    println!("\nvariance at t = {t}:");
    println!("  monte carlo: {:.6} +- {:.6}", vest.mean, vest.std_error);
    println!("  exact:       {vexact:.6}");

    let counts = empirical_distribution(&system.model, &system.space, &system.x0, t, n_paths, seed + 2)?;
    let row = pjmp::exact::transition_row(&system.q, t, x0_index, 1e-12)?;
    println!("\ndistribution of X_t (observed vs expected counts):");
    for (u, (&c, &p)) in counts.iter().zip(row.iter()).enumerate() {
        println!(
            "  state {u} {:?}: {c:>6} vs {:>9.1}",
            system.space.state(u).potentials(),
            n_paths as f64 * p
        );
    }
    let (statistic, dof, p_value) = chi_square_fit(&counts, &row);
    println!("chi-square: statistic = {statistic:.3}, dof = {dof}, p = {p_value:.4}");
    Ok(())
}
