//! Closed forms for the no-jump and exactly-one-jump probabilities and the
//! peak time of the one-jump curve.
//!
//! ```bash
//! cargo run -p pjmp --example jump_probabilities
//! ```

use pjmp::config::RunConfig;
use pjmp::exact::{no_jump_probability, one_jump_probability, peak_time_t0};

const CONFIG: &str = include_str!("../configs/pair_symmetric.json");

fn main() -> pjmp::Result<()> {
    let config = RunConfig::from_json(CONFIG)?;
    let system = config.build_system()?;
    let model = &system.model;
    let x = &system.x0;

    println!("from state {:?} (total rate {}):", x.potentials(), model.total_intensity(x));
    println!("\n  s      p_s(x)    p_s^0(x)   p_s^1(x)");
    for k in 0..=8 {
        let s = 0.25 * k as f64;
        println!(
            "  {s:<5}  {:.6}  {:.6}   {:.6}",
            no_jump_probability(model, s, x)?,
            one_jump_probability(model, s, x, 0)?,
            one_jump_probability(model, s, x, 1)?,
        );
    }

    println!("\npeak times of s -> p_s^i(x) per (state, neuron):");
    for (u, state) in system.space.states().iter().enumerate() {
        for i in 0..model.n() {
            let t0 = peak_time_t0(model, state, i)?;
            let peak = one_jump_probability(model, t0, state, i)?;
            println!(
                "  state {u} {:?} neuron {i}: t0 = {t0:.6}, peak probability {peak:.6}",
                state.potentials()
            );
        }
    }
    Ok(())
}
