//! Network model: neurons, synaptic weights, spiking intensity, jump map,
//! generator and carré du champ.
//!
//! A network of `n` neurons carries a membrane potential per neuron, confined
//! to `[0, m]`. Neuron `i` spikes at rate `phi(x_i)`; a spike resets `x_i` to
//! zero and increments every post-synaptic potential `x_j` by the weight
//! `w[i][j]`, suppressed when the increment would push the receiver above the
//! ceiling `m`. Potentials are stored as exact rationals on the common grid
//! spanned by the weights, the ceiling and the initial state, so that state
//! identity under enumeration is exact.

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact membrane-potential value.
pub type Coord = Ratio<i128>;

/// Largest denominator accepted when converting an input float to a rational.
const MAX_DENOM: i128 = 1_000_000;
/// Relative tolerance for that conversion.
const RATIONALIZE_TOL: f64 = 1e-9;
/// Cap on the common grid denominator across all model quantities.
const MAX_GRID_DENOM: i128 = 1_000_000_000_000;

/// Convert a float to the simplest rational within `RATIONALIZE_TOL`,
/// by continued-fraction expansion. Returns `None` for values that need a
/// denominator above `MAX_DENOM`.
pub fn rationalize(v: f64) -> Option<Coord> {
    if !v.is_finite() {
        return None;
    }
    if v == 0.0 {
        return Some(Coord::zero());
    }
    let sign = if v < 0.0 { -1i128 } else { 1i128 };
    let target = v.abs();
    let tol = RATIONALIZE_TOL * target.max(1.0);
    // Continued-fraction convergents h_k / k_k of `target`.
    let (mut h0, mut k0, mut h1, mut k1) = (1i128, 0i128, target.trunc() as i128, 1i128);
    let mut frac = target.fract();
    for _ in 0..64 {
        let approx = h1 as f64 / k1 as f64;
        if (approx - target).abs() <= tol {
            return Some(Coord::new(sign * h1, k1));
        }
        if frac == 0.0 {
            break;
        }
        let inv = 1.0 / frac;
        let a = inv.trunc() as i128;
        frac = inv.fract();
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > MAX_DENOM {
            break;
        }
        h0 = h1;
        k0 = k1;
        h1 = h2;
        k1 = k2;
    }
    let approx = h1 as f64 / k1 as f64;
    if (approx - target).abs() <= tol {
        Some(Coord::new(sign * h1, k1))
    } else {
        None
    }
}

fn rationalize_field(v: f64, field: &str) -> Result<Coord> {
    rationalize(v).ok_or_else(|| Error::IncommensurableValue {
        field: field.to_string(),
        value: v,
    })
}

pub fn coord_to_f64(c: Coord) -> f64 {
    *c.numer() as f64 / *c.denom() as f64
}

/// Which coordinate the ceiling test reads when neuron `i` spikes and the
/// increment `w[i][j]` is delivered to neuron `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClipRule {
    /// Test `x_j + w[i][j] <= m` (keeps the process inside `[0, m]^n`).
    #[default]
    Receiver,
    /// Test `x_i + w[i][j] <= m` (the sender's pre-reset potential).
    /// Under this rule receiving coordinates can exceed `m` and the
    /// reachable set is unbounded for generic weights.
    Sender,
}

/// Intensity function family. Both families are increasing and certifiable
/// against the rate assumptions; arbitrary user callables are rejected by
/// construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum IntensityFamily {
    /// `phi(x) = a + b*x` with `a > 0`, `b >= 0`.
    Affine { a: f64, b: f64 },
    /// Increasing piecewise-linear interpolation of `(x, value)` points
    /// covering `[0, m]`.
    Table { points: Vec<(f64, f64)> },
}

/// Intensity specification: a family plus the declared rate floor `delta`
/// (`phi >= delta`) and linear minorant slope `c` (`phi(x) > c*x` on `[0, m]`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntensitySpec {
    #[serde(flatten)]
    pub family: IntensityFamily,
    pub delta: f64,
    pub c: f64,
}

impl IntensitySpec {
    /// Evaluate the intensity at potential `x >= 0`. Beyond the last table
    /// breakpoint the final segment is extrapolated (only reachable under
    /// `ClipRule::Sender`).
    pub fn eval(&self, x: f64) -> f64 {
        match &self.family {
            IntensityFamily::Affine { a, b } => a + b * x,
            IntensityFamily::Table { points } => {
                let pts = points.as_slice();
                if x <= pts[0].0 {
                    return pts[0].1;
                }
                for w in pts.windows(2) {
                    let ((x0, v0), (x1, v1)) = (w[0], w[1]);
                    if x <= x1 {
                        return v0 + (v1 - v0) * (x - x0) / (x1 - x0);
                    }
                }
                let n = pts.len();
                let ((x0, v0), (x1, v1)) = (pts[n - 2], pts[n - 1]);
                v1 + (v1 - v0) * (x - x1) / (x1 - x0)
            }
        }
    }
}

/// Raw, unvalidated model description as it appears in configuration files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub n: usize,
    pub weights: Vec<Vec<f64>>,
    pub intensity: IntensitySpec,
    pub m: f64,
    #[serde(default)]
    pub clip_rule: ClipRule,
}

/// Validated network model. All invariants of [`ModelSpec`] hold and the
/// weights and ceiling live on a common exact grid.
#[derive(Debug, Clone)]
pub struct NeuronModel {
    n: usize,
    weights: Vec<Vec<Coord>>,
    weights_f64: Vec<Vec<f64>>,
    intensity: IntensitySpec,
    ceiling: Coord,
    ceiling_f64: f64,
    clip_rule: ClipRule,
    spec: ModelSpec,
}

/// A network configuration: one membrane potential per neuron, each in
/// `[0, m]`, exact on the model grid.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct State {
    coords: Vec<Coord>,
}

impl State {
    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    pub fn potentials(&self) -> Vec<f64> {
        self.coords.iter().map(|&c| coord_to_f64(c)).collect()
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

/// Validate a raw model description. Checks the weight matrix shape and
/// signs, the ceiling, and the rate assumptions for the declared `delta`
/// and `c` (analytically for the affine family, at the kinks for tables).
pub fn validate_model(spec: &ModelSpec) -> Result<NeuronModel> {
    let n = spec.n;
    if n == 0 {
        return Err(Error::Config {
            field: "model.n".into(),
            message: "network must have at least one neuron".into(),
        });
    }
    if !(spec.m.is_finite() && spec.m > 0.0) {
        return Err(Error::NonPositiveCeiling(spec.m));
    }
    if spec.weights.len() != n {
        return Err(Error::Config {
            field: "model.weights".into(),
            message: format!("expected {} rows, found {}", n, spec.weights.len()),
        });
    }
    for (i, row) in spec.weights.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Config {
                field: format!("model.weights[{i}]"),
                message: format!("expected {} columns, found {}", n, row.len()),
            });
        }
        for (j, &w) in row.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::NegativeWeight {
                    field: format!("model.weights[{i}][{j}]"),
                });
            }
            if i == j && w != 0.0 {
                return Err(Error::NonzeroDiagonal {
                    field: format!("model.weights[{i}][{i}]"),
                });
            }
        }
    }

    let intensity = &spec.intensity;
    let delta = intensity.delta;
    let c = intensity.c;
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::NonPositiveDelta(format!(
            "declared delta = {delta}"
        )));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::Config {
            field: "model.intensity.c".into(),
            message: format!("linear minorant slope must be positive, got {c}"),
        });
    }
    match &intensity.family {
        IntensityFamily::Affine { a, b } => {
            if !(a.is_finite() && b.is_finite()) || *b < 0.0 {
                return Err(Error::Config {
                    field: "model.intensity".into(),
                    message: format!("affine parameters must be finite with b >= 0, got a={a} b={b}"),
                });
            }
            if *a < delta {
                return Err(Error::NonPositiveDelta(format!(
                    "affine floor a = {a} is below the declared delta = {delta}"
                )));
            }
            // a + b*x > c*x on [0, m]  <=>  a > (c - b)*m when c > b.
            if c > *b && *a <= (c - b) * spec.m {
                return Err(Error::IntensityBelowLinearBound(format!(
                    "a = {a} <= (c - b)*m = {}",
                    (c - b) * spec.m
                )));
            }
        }
        IntensityFamily::Table { points } => {
            if points.len() < 2 {
                return Err(Error::Config {
                    field: "model.intensity.points".into(),
                    message: "table needs at least two breakpoints".into(),
                });
            }
            for w in points.windows(2) {
                if !(w[1].0 > w[0].0) || w[1].1 < w[0].1 {
                    return Err(Error::Config {
                        field: "model.intensity.points".into(),
                        message: "breakpoints must be strictly increasing in x and non-decreasing in value"
                            .into(),
                    });
                }
            }
            if points[0].0 != 0.0 || points.last().unwrap().0 < spec.m {
                return Err(Error::Config {
                    field: "model.intensity.points".into(),
                    message: format!("breakpoints must start at 0 and cover [0, {}]", spec.m),
                });
            }
            let min_value = points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
            if min_value < delta {
                return Err(Error::NonPositiveDelta(format!(
                    "table minimum {min_value} is below the declared delta = {delta}"
                )));
            }
            // phi - c*x is piecewise linear; positivity at the kinks and at m
            // is positivity on [0, m].
            let mut probes: Vec<f64> = points.iter().map(|p| p.0).collect();
            probes.push(spec.m);
            for x in probes {
                if x > spec.m {
                    continue;
                }
                if intensity.eval(x) <= c * x {
                    return Err(Error::IntensityBelowLinearBound(format!(
                        "phi({x}) = {} <= c*x = {}",
                        intensity.eval(x),
                        c * x
                    )));
                }
            }
        }
    }

    let ceiling = rationalize_field(spec.m, "model.m")?;
    let mut weights = Vec::with_capacity(n);
    let mut grid = *ceiling.denom();
    for (i, row) in spec.weights.iter().enumerate() {
        let mut wrow = Vec::with_capacity(n);
        for (j, &w) in row.iter().enumerate() {
            let r = rationalize_field(w, &format!("model.weights[{i}][{j}]"))?;
            grid = num_integer::lcm(grid, *r.denom());
            wrow.push(r);
        }
        weights.push(wrow);
    }
    if grid > MAX_GRID_DENOM {
        return Err(Error::Config {
            field: "model.weights".into(),
            message: format!("common grid denominator {grid} exceeds the supported bound"),
        });
    }

    Ok(NeuronModel {
        n,
        weights,
        weights_f64: spec.weights.clone(),
        intensity: intensity.clone(),
        ceiling,
        ceiling_f64: spec.m,
        clip_rule: spec.clip_rule,
        spec: spec.clone(),
    })
}

impl NeuronModel {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ceiling(&self) -> f64 {
        self.ceiling_f64
    }

    pub fn ceiling_coord(&self) -> Coord {
        self.ceiling
    }

    pub fn weight(&self, from: usize, to: usize) -> f64 {
        self.weights_f64[from][to]
    }

    pub fn intensity(&self) -> &IntensitySpec {
        &self.intensity
    }

    pub fn delta(&self) -> f64 {
        self.intensity.delta
    }

    pub fn clip_rule(&self) -> ClipRule {
        self.clip_rule
    }

    /// The raw description this model was validated from.
    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    /// `phi` evaluated at the ceiling: the per-neuron rate bound.
    pub fn rate_at_ceiling(&self) -> f64 {
        self.intensity.eval(self.ceiling_f64)
    }

    /// Global total-rate bound `n * phi(m)`.
    pub fn rate_bound(&self) -> f64 {
        self.n as f64 * self.rate_at_ceiling()
    }

    /// Build an exact state from float potentials, checking range and grid
    /// representability.
    pub fn state(&self, potentials: &[f64]) -> Result<State> {
        if potentials.len() != self.n {
            return Err(Error::Config {
                field: "initial_state".into(),
                message: format!("expected {} potentials, found {}", self.n, potentials.len()),
            });
        }
        let mut coords = Vec::with_capacity(self.n);
        for (k, &p) in potentials.iter().enumerate() {
            let r = rationalize_field(p, &format!("initial_state[{k}]"))?;
            if r.is_negative() || r > self.ceiling {
                return Err(Error::Config {
                    field: format!("initial_state[{k}]"),
                    message: format!("potential {p} outside [0, {}]", self.ceiling_f64),
                });
            }
            coords.push(r);
        }
        Ok(State { coords })
    }

    /// The jump map: neuron `i` spikes. Its potential resets to zero and each
    /// other neuron `j` gains `w[i][j]` unless the configured ceiling test
    /// fails, in which case the increment is suppressed.
    pub fn apply_jump(&self, x: &State, i: usize) -> Result<State> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange { index: i, n: self.n });
        }
        let mut coords = x.coords.clone();
        for j in 0..self.n {
            if j == i {
                coords[j] = Coord::zero();
            } else {
                let w = self.weights[i][j];
                if w.is_zero() {
                    continue;
                }
                let tested = match self.clip_rule {
                    ClipRule::Receiver => x.coords[j] + w,
                    ClipRule::Sender => x.coords[i] + w,
                };
                if tested <= self.ceiling {
                    coords[j] = x.coords[j] + w;
                }
            }
        }
        Ok(State { coords })
    }

    /// Per-neuron spiking rates `phi(x_i)`.
    pub fn intensities(&self, x: &State) -> Vec<f64> {
        x.coords
            .iter()
            .map(|&c| self.intensity.eval(coord_to_f64(c)))
            .collect()
    }

    /// Total jump rate from `x`.
    pub fn total_intensity(&self, x: &State) -> f64 {
        x.coords
            .iter()
            .map(|&c| self.intensity.eval(coord_to_f64(c)))
            .sum()
    }

    /// Generator applied to an observable at `x`:
    /// `sum_i phi(x_i) * (f(jump_i(x)) - f(x))`.
    pub fn generator_apply<F: Fn(&State) -> f64>(&self, f: F, x: &State) -> Result<f64> {
        let fx = f(x);
        let mut acc = 0.0;
        for i in 0..self.n {
            let rate = self.intensity.eval(coord_to_f64(x.coords[i]));
            let y = self.apply_jump(x, i)?;
            acc += rate * (f(&y) - fx);
        }
        Ok(acc)
    }

    /// Carré du champ at `x`: `0.5 * sum_i phi(x_i) * (f(jump_i(x)) - f(x))^2`.
    /// Non-negative for every observable.
    pub fn carre_du_champ<F: Fn(&State) -> f64>(&self, f: F, x: &State) -> Result<f64> {
        let fx = f(x);
        let mut acc = 0.0;
        for i in 0..self.n {
            let rate = self.intensity.eval(coord_to_f64(x.coords[i]));
            let y = self.apply_jump(x, i)?;
            let d = f(&y) - fx;
            acc += rate * d * d;
        }
        Ok(0.5 * acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn affine_model(n: usize, weights: Vec<Vec<f64>>, a: f64, b: f64, delta: f64, c: f64, m: f64) -> ModelSpec {
        ModelSpec {
            n,
            weights,
            intensity: IntensitySpec {
                family: IntensityFamily::Affine { a, b },
                delta,
                c,
            },
            m,
            clip_rule: ClipRule::Receiver,
        }
    }

    fn pair_spec() -> ModelSpec {
        affine_model(2, vec![vec![0.0, 0.5], vec![0.5, 0.0]], 1.0, 1.0, 1.0, 0.5, 1.0)
    }

    #[test]
    fn validates_the_symmetric_pair() {
        let model = validate_model(&pair_spec()).unwrap();
        assert_eq!(model.n(), 2);
        assert_eq!(model.rate_bound(), 4.0);
    }

    #[test]
    fn rejects_zero_floor() {
        let spec = affine_model(2, vec![vec![0.0, 0.5], vec![0.5, 0.0]], 0.0, 1.0, 1.0, 0.5, 1.0);
        assert!(matches!(validate_model(&spec), Err(Error::NonPositiveDelta(_))));
        let mut spec2 = pair_spec();
        spec2.intensity.delta = 0.0;
        assert!(matches!(validate_model(&spec2), Err(Error::NonPositiveDelta(_))));
    }

    #[test]
    fn rejects_intensity_below_linear_bound() {
        // phi = 0.1 constant, c = 1: 0.1 <= x at x = 0.5.
        let spec = affine_model(2, vec![vec![0.0, 0.5], vec![0.5, 0.0]], 0.1, 0.0, 0.1, 1.0, 1.0);
        assert!(matches!(
            validate_model(&spec),
            Err(Error::IntensityBelowLinearBound(_))
        ));
    }

    #[test]
    fn rejects_bad_weights() {
        let spec = affine_model(2, vec![vec![0.0, -0.5], vec![0.5, 0.0]], 1.0, 1.0, 1.0, 0.5, 1.0);
        assert!(matches!(validate_model(&spec), Err(Error::NegativeWeight { .. })));
        let spec = affine_model(2, vec![vec![0.1, 0.5], vec![0.5, 0.0]], 1.0, 1.0, 1.0, 0.5, 1.0);
        assert!(matches!(validate_model(&spec), Err(Error::NonzeroDiagonal { .. })));
        let spec = affine_model(2, vec![vec![0.0, 0.5]], 1.0, 1.0, 1.0, 0.5, 1.0);
        assert!(matches!(validate_model(&spec), Err(Error::Config { .. })));
    }

    #[test]
    fn rejects_non_positive_ceiling() {
        let spec = affine_model(1, vec![vec![0.0]], 1.0, 0.0, 1.0, 0.5, 0.0);
        assert!(matches!(validate_model(&spec), Err(Error::NonPositiveCeiling(_))));
    }

    #[test]
    fn table_family_validates_and_evaluates() {
        let spec = ModelSpec {
            n: 1,
            weights: vec![vec![0.0]],
            intensity: IntensitySpec {
                family: IntensityFamily::Table {
                    points: vec![(0.0, 1.0), (0.5, 1.5), (1.0, 3.0)],
                },
                delta: 1.0,
                c: 0.5,
            },
            m: 1.0,
            clip_rule: ClipRule::Receiver,
        };
        let model = validate_model(&spec).unwrap();
        assert!((model.intensity().eval(0.25) - 1.25).abs() < 1e-15);
        assert!((model.intensity().eval(0.75) - 2.25).abs() < 1e-15);
        assert_eq!(model.rate_at_ceiling(), 3.0);
    }

    #[test]
    fn jump_increments_and_clips() {
        let model = validate_model(&pair_spec()).unwrap();
        let x = model.state(&[0.3, 0.2]).unwrap();
        let y = model.apply_jump(&x, 0).unwrap();
        assert_eq!(y.potentials(), vec![0.0, 0.7]);
        let x = model.state(&[0.3, 0.8]).unwrap();
        let y = model.apply_jump(&x, 0).unwrap();
        assert_eq!(y.potentials(), vec![0.0, 0.8]);
    }

    #[test]
    fn single_neuron_jump_resets() {
        let spec = affine_model(1, vec![vec![0.0]], 1.0, 0.0, 1.0, 0.5, 1.0);
        let model = validate_model(&spec).unwrap();
        let x = model.state(&[0.7]).unwrap();
        let y = model.apply_jump(&x, 0).unwrap();
        assert_eq!(y.potentials(), vec![0.0]);
        assert!(matches!(
            model.apply_jump(&x, 1),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn sender_rule_follows_the_spiking_coordinate() {
        let mut spec = pair_spec();
        spec.clip_rule = ClipRule::Sender;
        let model = validate_model(&spec).unwrap();
        // Receiver at 0.8 still gains because the sender reads 0.3 + 0.5 <= 1.
        let x = model.state(&[0.3, 0.8]).unwrap();
        let y = model.apply_jump(&x, 0).unwrap();
        assert_eq!(y.potentials(), vec![0.0, 1.3]);
        // Sender at 0.6 suppresses even though the receiver would fit.
        let x = model.state(&[0.6, 0.1]).unwrap();
        let y = model.apply_jump(&x, 0).unwrap();
        assert_eq!(y.potentials(), vec![0.0, 0.1]);
    }

    #[test]
    fn intensities_match_affine_formula() {
        let model = validate_model(&pair_spec()).unwrap();
        let x = model.state(&[0.3, 0.2]).unwrap();
        let rates = model.intensities(&x);
        assert!((rates[0] - 1.3).abs() < 1e-15);
        assert!((rates[1] - 1.2).abs() < 1e-15);
        assert!((model.total_intensity(&x) - 2.5).abs() < 1e-15);
        let top = model.state(&[1.0, 1.0]).unwrap();
        assert_eq!(model.total_intensity(&top), model.rate_bound());
    }

    #[test]
    fn generator_on_simple_cases() {
        let spec = affine_model(1, vec![vec![0.0]], 1.0, 0.0, 1.0, 0.5, 1.0);
        let model = validate_model(&spec).unwrap();
        let x = model.state(&[0.7]).unwrap();
        let lf = model.generator_apply(|s| s.potentials()[0], &x).unwrap();
        assert!((lf + 0.7).abs() < 1e-15);
        let lc = model.generator_apply(|_| 3.25, &x).unwrap();
        assert_eq!(lc, 0.0);
    }

    #[test]
    fn generator_matches_termwise_oracle() {
        // Independent re-evaluation of the defining sum on the pair model.
        let model = validate_model(&pair_spec()).unwrap();
        let f = |s: &State| {
            let p = s.potentials();
            (1.7 * p[0] - 0.4 * p[1]).sin() + p[1] * p[1]
        };
        for pots in [[0.3, 0.2], [0.0, 1.0], [0.5, 0.5], [1.0, 0.0]] {
            let x = model.state(&pots).unwrap();
            let got = model.generator_apply(f, &x).unwrap();
            let mut expected = 0.0;
            for i in 0..2 {
                let rate = model.intensity().eval(pots[i]);
                let y = model.apply_jump(&x, i).unwrap();
                expected += rate * (f(&y) - f(&x));
            }
            assert!((got - expected).abs() <= 1e-12, "{got} vs {expected}");
        }
    }

    #[test]
    fn carre_du_champ_single_neuron_value() {
        let spec = affine_model(1, vec![vec![0.0]], 1.0, 1.0, 1.0, 0.5, 1.0);
        let model = validate_model(&spec).unwrap();
        let x = model.state(&[1.0]).unwrap();
        let g = model.carre_du_champ(|s| s.potentials()[0], &x).unwrap();
        // 0.5 * phi(1) * (0 - 1)^2 = 0.5 * 2 * 1 = 1.
        assert!((g - 1.0).abs() < 1e-15);
        let gc = model.carre_du_champ(|_| 42.0, &x).unwrap();
        assert_eq!(gc, 0.0);
    }

    #[test]
    fn carre_du_champ_equals_generator_identity() {
        // Gamma(f,f) = 0.5 * (L(f^2) - 2 f Lf), checked on random observables.
        let model = validate_model(&pair_spec()).unwrap();
        let mut lcg = 0x2545F4914F6CDD1Du64;
        let mut rnd = move || {
            lcg = lcg.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((lcg >> 11) as f64 / (1u64 << 53) as f64) * 4.0 - 2.0
        };
        for _ in 0..50 {
            let (a, b, c, d) = (rnd(), rnd(), rnd(), rnd());
            let f = move |s: &State| {
                let p = s.potentials();
                a + b * p[0] + c * p[1] + d * p[0] * p[1]
            };
            let pots = [rnd().abs().min(1.0), rnd().abs().min(1.0)];
            let x = model.state(&[(pots[0] * 2.0).round() / 2.0, (pots[1] * 2.0).round() / 2.0]).unwrap();
            let gamma = model.carre_du_champ(f, &x).unwrap();
            let lf2 = model.generator_apply(move |s| f(s) * f(s), &x).unwrap();
            let lf = model.generator_apply(f, &x).unwrap();
            let identity = 0.5 * (lf2 - 2.0 * f(&x) * lf);
            assert!(gamma >= 0.0);
            assert!((gamma - identity).abs() <= 1e-12, "{gamma} vs {identity}");
        }
    }

    #[test]
    fn rationalize_handles_decimals_and_thirds() {
        assert_eq!(rationalize(0.5).unwrap(), Coord::new(1, 2));
        assert_eq!(rationalize(0.3).unwrap(), Coord::new(3, 10));
        assert_eq!(rationalize(1.0 / 3.0).unwrap(), Coord::new(1, 3));
        assert_eq!(rationalize(0.0).unwrap(), Coord::zero());
        assert!(rationalize(f64::NAN).is_none());
    }
}
