//! Transition probabilities by uniformization: distribution rows over time,
//! the Chapman-Kolmogorov property, and convergence to the invariant
//! measure.
//!
//! ```bash
//! cargo run -p pjmp --example transition_semigroup
//! ```

use pjmp::config::RunConfig;
use pjmp::exact::{invariant_measure, transition_probabilities, transition_row};

const CONFIG: &str = include_str!("../configs/pair_symmetric.json");

fn main() -> pjmp::Result<()> {
    let config = RunConfig::from_json(CONFIG)?;
    let system = config.build_system()?;
    let (space, q) = (&system.space, &system.q);

    println!("distribution started from state 0 = {:?}:", space.state(0).potentials());
    for t in [0.0, 0.25, 1.0, 4.0, 16.0] {
        let row = transition_row(q, t, 0, 1e-12)?;
        let cells: Vec<String> = row.iter().map(|p| format!("{p:.6}")).collect();
        println!("  t = {t:>5}:  [{}]", cells.join(", "));
    }

    let class = space.single_closed_class()?.to_vec();
    let pi = invariant_measure(q, &class)?;
    let cells: Vec<String> = pi.probs().iter().map(|p| format!("{p:.6}")).collect();
    println!("  stationary: [{}]", cells.join(", "));

    // Chapman-Kolmogorov: P_{s+t} = P_s P_t.
    let (s, t) = (0.4, 1.1);
    let ps = transition_probabilities(q, s, 1e-12)?;
    let pt = transition_probabilities(q, t, 1e-12)?;
    let pst = transition_probabilities(q, s + t, 1e-12)?;
    let prod = &ps * &pt;
    let gap = (&pst - &prod).abs().max();
    println!("\nChapman-Kolmogorov |P_(s+t) - P_s P_t|_max = {gap:.3e} at s={s}, t={t}");

    let tv: f64 = transition_row(q, 16.0, 1, 1e-12)?
        .iter()
        .zip(pi.probs())
        .map(|(a, b)| (a - b).abs())
        .sum();
    println!("total-variation distance to stationarity at t=16 (from state 1): {tv:.3e}");
    Ok(())
}
