//! Exact and Monte-Carlo analysis of a compact degenerate pure-jump Markov
//! network of interacting neurons.
//!
//! The process tracks one membrane potential per neuron inside `[0, m]`.
//! A neuron spikes at a rate given by an increasing intensity function of its
//! own potential; the spike resets that potential to zero and increments each
//! post-synaptic neuron by its synaptic weight, suppressed at the ceiling.
//! Because increments come from a fixed weight set, the reachable set of any
//! configuration is finite, so the chain admits exact finite-state analysis
//! next to pathwise simulation.
//!
//! The crate provides:
//!
//! * [`model`] — the network, jump map, generator and carré du champ;
//! * [`space`] — reachable-set enumeration, jump graph, recurrent domain,
//!   and the CTMC generator matrix;
//! * [`exact`] — uniformization-based transition probabilities, semigroup
//!   integrals, invariant measure, variances, the sharp Poincaré constant
//!   and jump-probability closed forms;
//! * [`constants`] — every constant entering the Poincaré-type variance
//!   bounds, both by conservative constructive formulas and by sharp
//!   empirical evaluation over the enumerated space;
//! * [`montecarlo`] — reproducible Gillespie-style simulation and
//!   estimators, an independent check on the exact engine;
//! * [`verify`] — the certification harness that evaluates both sides of
//!   every inequality and identity on concrete instances;
//! * [`config`] — JSON run configuration shared by the CLI and examples.
//!
//! See the `examples/` directory for one runnable program per capability,
//! and the `pjmp` binary for batch orchestration.

pub mod config;
pub mod constants;
pub mod error;
pub mod exact;
pub mod model;
pub mod montecarlo;
pub mod numerics;
pub mod space;
pub mod verify;

pub use error::{Error, Result};
