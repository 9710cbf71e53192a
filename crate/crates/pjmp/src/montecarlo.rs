//! Exact-in-law stochastic simulation and Monte-Carlo estimators.
//!
//! Paths are sampled by the embedded-chain construction: from state `x` the
//! waiting time is exponential with the total rate `phibar(x)` and the
//! spiking neuron is chosen proportionally to its intensity. Because the
//! total rate is bounded on the compact domain this is equal in law to the
//! driving-Poisson-measure construction; a thinning sampler with the global
//! rate bound is kept alongside to cross-validate the law.
//!
//! Reproducibility: each path draws from its own counter-derived ChaCha
//! substream keyed by `(seed, path index)`, and reductions run over the
//! path-indexed value vector with compensated summation, so results are
//! bit-identical for any worker count.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{NeuronModel, State};
use crate::numerics::compensated_sum;
use crate::space::StateSpace;

/// One sampled trajectory. Self-jumps (a spike of a neuron already at zero
/// whose increments all clip) stay in the event stream even though they do
/// not move the state.
#[derive(Debug, Clone)]
pub struct PathSample {
    pub initial_state: State,
    /// Strictly increasing jump times within `[0, horizon]`.
    pub jump_times: Vec<f64>,
    /// Spiking neuron per jump.
    pub spiking_neuron: Vec<usize>,
    /// State after each jump.
    pub states: Vec<State>,
}

impl PathSample {
    /// State of the path at time `t` (last state with jump time `<= t`).
    pub fn state_at(&self, t: f64) -> &State {
        match self.jump_times.iter().rposition(|&s| s <= t) {
            Some(k) => &self.states[k],
            None => &self.initial_state,
        }
    }

    pub fn n_jumps(&self) -> usize {
        self.jump_times.len()
    }
}

/// A Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_paths: usize,
    pub seed: u64,
}

/// Derive the ChaCha key for one path from `(seed, path)` by SplitMix64
/// expansion.
pub fn substream(seed: u64, path: u64) -> ChaCha12Rng {
    let mut state = seed ^ path.wrapping_mul(0x9E3779B97F4A7C15);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        state = state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^= z >> 31;
        chunk.copy_from_slice(&z.to_le_bytes());
    }
    ChaCha12Rng::from_seed(key)
}

fn exponential(rng: &mut ChaCha12Rng, rate: f64) -> f64 {
    let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    -u.ln() / rate
}

/// Sample one trajectory on `[0, horizon]` by the embedded chain.
pub fn sample_path(
    model: &NeuronModel,
    x0: &State,
    horizon: f64,
    rng: &mut ChaCha12Rng,
) -> Result<PathSample> {
    let mut t = 0.0;
    let mut state = x0.clone();
    let mut jump_times = Vec::new();
    let mut spiking = Vec::new();
    let mut states = Vec::new();
    loop {
        let rates = model.intensities(&state);
        let total: f64 = rates.iter().sum();
        t += exponential(rng, total);
        if t > horizon {
            break;
        }
        let mut pick = rng.gen_range(0.0..total);
        let mut neuron = model.n() - 1;
        for (i, &r) in rates.iter().enumerate() {
            if pick < r {
                neuron = i;
                break;
            }
            pick -= r;
        }
        state = model.apply_jump(&state, neuron)?;
        jump_times.push(t);
        spiking.push(neuron);
        states.push(state.clone());
    }
    Ok(PathSample {
        initial_state: x0.clone(),
        jump_times,
        spiking_neuron: spiking,
        states,
    })
}

/// Thinning sampler against the global rate bound `n * phi(m)`; used to
/// cross-validate that the embedded chain has the right law.
pub fn sample_path_thinning(
    model: &NeuronModel,
    x0: &State,
    horizon: f64,
    rng: &mut ChaCha12Rng,
) -> Result<PathSample> {
    let bound = model.rate_at_ceiling();
    let candidate_rate = model.n() as f64 * bound;
    let mut t = 0.0;
    let mut state = x0.clone();
    let mut jump_times = Vec::new();
    let mut spiking = Vec::new();
    let mut states = Vec::new();
    loop {
        t += exponential(rng, candidate_rate);
        if t > horizon {
            break;
        }
        let neuron = rng.gen_range(0..model.n());
        let rate = model.intensities(&state)[neuron];
        if rng.gen_range(0.0..bound) < rate {
            state = model.apply_jump(&state, neuron)?;
            jump_times.push(t);
            spiking.push(neuron);
            states.push(state.clone());
        }
    }
    Ok(PathSample {
        initial_state: x0.clone(),
        jump_times,
        spiking_neuron: spiking,
        states,
    })
}

/// Per-path values of `f(X_t)` for the first `n_paths` substreams of `seed`.
fn sample_values<F>(
    model: &NeuronModel,
    x0: &State,
    t: f64,
    n_paths: usize,
    seed: u64,
    f: F,
) -> Result<Vec<f64>>
where
    F: Fn(&State) -> f64 + Sync,
{
    (0..n_paths)
        .into_par_iter()
        .map(|k| {
            let mut rng = substream(seed, k as u64);
            let path = sample_path(model, x0, t, &mut rng)?;
            Ok(f(path.state_at(t)))
        })
        .collect()
}

/// Monte-Carlo estimate of `E^x f(X_t)`.
pub fn estimate_expectation<F>(
    model: &NeuronModel,
    x0: &State,
    t: f64,
    n_paths: usize,
    seed: u64,
    f: F,
) -> Result<Estimate>
where
    F: Fn(&State) -> f64 + Sync,
{
    assert!(n_paths >= 2, "need at least two paths");
    let values = sample_values(model, x0, t, n_paths, seed, f)?;
    let n = n_paths as f64;
    let mean = compensated_sum(&values) / n;
    let sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = compensated_sum(&sq) / (n - 1.0);
    Ok(Estimate {
        mean,
        std_error: (var / n).sqrt(),
        n_paths,
        seed,
    })
}

/// Monte-Carlo estimate of `Var^x f(X_t)`, with a moment-based standard
/// error for the variance estimator.
pub fn estimate_variance<F>(
    model: &NeuronModel,
    x0: &State,
    t: f64,
    n_paths: usize,
    seed: u64,
    f: F,
) -> Result<Estimate>
where
    F: Fn(&State) -> f64 + Sync,
{
    assert!(n_paths >= 2, "need at least two paths");
    let values = sample_values(model, x0, t, n_paths, seed, f)?;
    let n = n_paths as f64;
    let mean = compensated_sum(&values) / n;
    let sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let m2 = compensated_sum(&sq) / n;
    let var = m2 * n / (n - 1.0);
    let quads: Vec<f64> = values
        .iter()
        .map(|v| {
            let d = (v - mean) * (v - mean);
            d * d
        })
        .collect();
    let m4 = compensated_sum(&quads) / n;
    // Var(s^2) ~ (m4 - m2^2 (n-3)/(n-1)) / n for iid samples.
    let se_var = ((m4 - m2 * m2 * (n - 3.0) / (n - 1.0)).max(0.0) / n).sqrt();
    Ok(Estimate {
        mean: var,
        std_error: se_var,
        n_paths,
        seed,
    })
}

/// Mean estimate of `f(X_t)` derived from per-state counts of one simulated
/// path set (all observables may share the same sample).
pub fn estimate_from_counts(counts: &[u64], f: &crate::exact::Observable, seed: u64) -> Estimate {
    let n: u64 = counts.iter().sum();
    let nf = n as f64;
    let mean = counts
        .iter()
        .zip(f.values())
        .map(|(&c, &v)| c as f64 * v)
        .sum::<f64>()
        / nf;
    let m2 = counts
        .iter()
        .zip(f.values())
        .map(|(&c, &v)| c as f64 * (v - mean) * (v - mean))
        .sum::<f64>()
        / nf;
    let var = m2 * nf / (nf - 1.0);
    Estimate {
        mean,
        std_error: (var / nf).sqrt(),
        n_paths: n as usize,
        seed,
    }
}

/// Variance estimate of `f(X_t)` from per-state counts, with the
/// moment-based standard error of the variance estimator.
pub fn variance_from_counts(counts: &[u64], f: &crate::exact::Observable, seed: u64) -> Estimate {
    let n: u64 = counts.iter().sum();
    let nf = n as f64;
    let mean = counts
        .iter()
        .zip(f.values())
        .map(|(&c, &v)| c as f64 * v)
        .sum::<f64>()
        / nf;
    let m2 = counts
        .iter()
        .zip(f.values())
        .map(|(&c, &v)| c as f64 * (v - mean) * (v - mean))
        .sum::<f64>()
        / nf;
    let m4 = counts
        .iter()
        .zip(f.values())
        .map(|(&c, &v)| {
            let d = (v - mean) * (v - mean);
            c as f64 * d * d
        })
        .sum::<f64>()
        / nf;
    let var = m2 * nf / (nf - 1.0);
    let se_var = ((m4 - m2 * m2 * (nf - 3.0) / (nf - 1.0)).max(0.0) / nf).sqrt();
    Estimate {
        mean: var,
        std_error: se_var,
        n_paths: n as usize,
        seed,
    }
}

/// Counts of `X_t` per state index over `n_paths` simulated paths.
pub fn empirical_distribution(
    model: &NeuronModel,
    space: &StateSpace,
    x0: &State,
    t: f64,
    n_paths: usize,
    seed: u64,
) -> Result<Vec<u64>> {
    let indices: Vec<usize> = (0..n_paths)
        .into_par_iter()
        .map(|k| {
            let mut rng = substream(seed, k as u64);
            let path = sample_path(model, x0, t, &mut rng)?;
            space
                .index_of(path.state_at(t))
                .ok_or_else(|| crate::error::Error::ObservableUndefined(
                    "simulated state escaped the enumerated space".into(),
                ))
        })
        .collect::<Result<Vec<usize>>>()?;
    let mut counts = vec![0u64; space.len()];
    for idx in indices {
        counts[idx] += 1;
    }
    Ok(counts)
}

/// Chi-square goodness of fit of observed counts against exact cell
/// probabilities. Cells with expected count below 5 are pooled. Returns
/// `(statistic, degrees of freedom, p-value)`.
pub fn chi_square_fit(counts: &[u64], probs: &[f64]) -> (f64, usize, f64) {
    let n: u64 = counts.iter().sum();
    let nf = n as f64;
    let mut statistic = 0.0;
    let mut cells = 0usize;
    let mut pooled_obs = 0.0;
    let mut pooled_exp = 0.0;
    for (&obs, &p) in counts.iter().zip(probs.iter()) {
        let expected = nf * p;
        if expected < 5.0 {
            pooled_obs += obs as f64;
            pooled_exp += expected;
        } else {
            let d = obs as f64 - expected;
            statistic += d * d / expected;
            cells += 1;
        }
    }
    if pooled_exp > 0.0 {
        let d = pooled_obs - pooled_exp;
        statistic += d * d / pooled_exp;
        cells += 1;
    }
    if cells < 2 {
        return (statistic, 0, 1.0);
    }
    let dof = cells - 1;
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    let dist = ChiSquared::new(dof as f64).expect("positive dof");
    let p_value = 1.0 - dist.cdf(statistic);
    (statistic, dof, p_value)
}
