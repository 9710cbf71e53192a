//! Enumerate the reachable configurations of a two-neuron network and show
//! the jump graph and its recurrent domain.
//!
//! ```bash
//! cargo run -p pjmp --example enumerate_states
//! ```

use pjmp::model::{validate_model, IntensityFamily, IntensitySpec, ModelSpec};
use pjmp::space::{build_rate_matrix, StateSpace, DEFAULT_STATE_CAP};

fn main() -> pjmp::Result<()> {
    let spec = ModelSpec {
        n: 2,
        weights: vec![vec![0.0, 0.5], vec![0.5, 0.0]],
        intensity: IntensitySpec {
            family: IntensityFamily::Affine { a: 1.0, b: 1.0 },
            delta: 1.0,
            c: 0.5,
        },
        m: 1.0,
        clip_rule: Default::default(),
    };
    let model = validate_model(&spec)?;
    let x0 = model.state(&[0.0, 0.0])?;
    let space = StateSpace::enumerate(&model, &x0, DEFAULT_STATE_CAP)?;

    println!("reachable states from {:?}:", x0.potentials());
    for (u, state) in space.states().iter().enumerate() {
        let tag = if space.is_recurrent(u) { "recurrent" } else { "transient" };
        println!("  [{u}] {:?}  ({tag})", state.potentials());
    }

    println!("\njump edges (state --neuron--> state @ rate):");
    let q = build_rate_matrix(&model, &space);
    for u in 0..space.len() {
        let rates = model.intensities(space.state(u));
        for i in 0..model.n() {
            let v = space.jump_target(u, i);
            let self_jump = if v == u { "  (self)" } else { "" };
            println!("  {u} --{i}--> {v} @ {:.3}{self_jump}", rates[i]);
        }
    }

    println!("\ngenerator diagonal (exit rates):");
    for u in 0..space.len() {
        println!("  Q[{u}][{u}] = {:+.3}", q.diagonal(u));
    }
    println!(
        "\n{} states, {} recurrent, {} closed class(es), uniformization rate {}",
        space.len(),
        space.recurrent_indices().len(),
        space.closed_classes().len(),
        q.uniform_rate()
    );
    Ok(())
}
