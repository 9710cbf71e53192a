//! The invariant measure of the recurrent domain, its residual, the
//! spectral gap of the symmetrized generator and the sharp Poincaré
//! constant with its extremal observable.
//!
//! ```bash
//! cargo run -p pjmp --example invariant_measure
//! ```

use pjmp::config::RunConfig;
use pjmp::exact::{
    carre_observable, invariant_measure, invariant_residual, optimal_poincare_constant,
    variance_invariant, Observable,
};

const CONFIG: &str = include_str!("../configs/triple_chain.json");

fn main() -> pjmp::Result<()> {
    let config = RunConfig::from_json(CONFIG)?;
    let system = config.build_system()?;
    let space = &system.space;

    let class = space.single_closed_class()?.to_vec();
    println!("recurrent domain ({} of {} states):", class.len(), space.len());
    let pi = invariant_measure(&system.q, &class)?;
    for &u in &class {
        println!("  pi{:?} = {:.9}", space.state(u).potentials(), pi.prob(u));
    }
    println!("residual |pi Q|_max = {:.3e}", invariant_residual(&system.q, &pi));

    let (constant, extremal) = optimal_poincare_constant(&system.q, &pi, &class)?;
    println!("\nsharp Poincaré constant (inverse spectral gap): {constant:.9}");
    println!("spectral gap: {:.9}", 1.0 / constant);

    let f = Observable::from_values(space, extremal)?;
    let var = variance_invariant(&pi, &f);
    let energy = pi.mean(&carre_observable(&system.model, space, &f));
    println!(
        "extremal observable: Var_pi(f) = {var:.9}, pi(Gamma(f,f)) = {energy:.9}, ratio = {:.9}",
        var / energy
    );
    Ok(())
}
