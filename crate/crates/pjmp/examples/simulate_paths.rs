//! Sample raw trajectories: jump times, spiking neurons and the visited
//! states, including the silent self-jumps of saturated configurations.
//!
//! ```bash
//! cargo run -p pjmp --example simulate_paths
//! ```

use pjmp::config::RunConfig;
use pjmp::montecarlo::sample_path;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

const CONFIG: &str = include_str!("../configs/triple_chain.json");

fn main() -> pjmp::Result<()> {
    let config = RunConfig::from_json(CONFIG)?;
    let system = config.build_system()?;

    let mut rng = ChaCha12Rng::seed_from_u64(5);
    let path = sample_path(&system.model, &system.x0, 3.0, &mut rng)?;

    println!("one trajectory from {:?} over [0, 3]:", system.x0.potentials());
    println!("  t = 0.000000  start             {:?}", system.x0.potentials());
    let mut previous = system.x0.clone();
    for k in 0..path.n_jumps() {
        let state = &path.states[k];
        let silent = if *state == previous { "  (silent spike)" } else { "" };
        println!(
            "  t = {:.6}  neuron {} spikes -> {:?}{silent}",
            path.jump_times[k],
            path.spiking_neuron[k],
            state.potentials(),
        );
        previous = state.clone();
    }
    println!("\n{} jumps; state at t = 3: {:?}", path.n_jumps(), path.state_at(3.0).potentials());
    Ok(())
}
