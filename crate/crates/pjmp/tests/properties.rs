//! Property tests over randomly drawn small networks.

use proptest::prelude::*;

use pjmp::exact::{no_jump_probability, one_jump_probability, transition_row};
use pjmp::model::{validate_model, IntensityFamily, IntensitySpec, ModelSpec, NeuronModel};
use pjmp::montecarlo::sample_path;
use pjmp::space::{build_rate_matrix, StateSpace};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

const CAP: usize = 50_000;

#[derive(Debug, Clone)]
struct Drawn {
    model: NeuronModel,
    x0: Vec<f64>,
}

fn model_strategy() -> impl Strategy<Value = Drawn> {
    let weight = prop::sample::select(vec![0.0, 0.25, 0.5, 1.0]);
    let coord = prop::sample::select(vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    (1usize..=3)
        .prop_flat_map(move |n| {
            (
                prop::collection::vec(weight.clone(), n * n),
                prop::collection::vec(coord.clone(), n),
                prop::sample::select(vec![0.5, 1.0, 2.0]),
                prop::sample::select(vec![0.0, 1.0]),
            )
                .prop_map(move |(flat, x0, a, b)| {
                    let mut weights = vec![vec![0.0; n]; n];
                    for i in 0..n {
                        for j in 0..n {
                            weights[i][j] = if i == j { 0.0 } else { flat[i * n + j] };
                        }
                    }
                    let m = 1.0;
                    let spec = ModelSpec {
                        n,
                        weights,
                        intensity: IntensitySpec {
                            family: IntensityFamily::Affine { a, b },
                            delta: a,
                            // a + b x > c x on [0, m] holds since (c - b) m = a/2.
                            c: b + a / (2.0 * m),
                        },
                        m,
                        clip_rule: Default::default(),
                    };
                    Drawn {
                        model: validate_model(&spec).expect("drawn model is valid"),
                        x0,
                    }
                })
        })
        .no_shrink()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jumps_stay_in_the_box_and_reset_is_idempotent(drawn in model_strategy()) {
        let model = &drawn.model;
        let x = model.state(&drawn.x0).unwrap();
        for i in 0..model.n() {
            let y = model.apply_jump(&x, i).unwrap();
            for &p in &y.potentials() {
                prop_assert!((0.0..=model.ceiling()).contains(&p));
            }
            prop_assert_eq!(y.potentials()[i], 0.0);
            let z = model.apply_jump(&y, i).unwrap();
            prop_assert_eq!(z.potentials()[i], 0.0);
        }
    }

    #[test]
    fn carre_du_champ_identity_and_positivity(drawn in model_strategy(), coeffs in prop::collection::vec(-2.0..2.0f64, 4)) {
        let model = &drawn.model;
        let x = model.state(&drawn.x0).unwrap();
        let f = |s: &pjmp::model::State| {
            let p = s.potentials();
            let mut acc = coeffs[0];
            for (k, &v) in p.iter().enumerate() {
                acc += coeffs[1 + k.min(2)] * v + 0.3 * v * v;
            }
            acc
        };
        let gamma = model.carre_du_champ(f, &x).unwrap();
        prop_assert!(gamma >= 0.0);
        let lf2 = model.generator_apply(|s| f(s) * f(s), &x).unwrap();
        let lf = model.generator_apply(f, &x).unwrap();
        let identity = 0.5 * (lf2 - 2.0 * f(&x) * lf);
        prop_assert!((gamma - identity).abs() <= 1e-12 * gamma.abs().max(1.0));
    }

    #[test]
    fn total_intensity_stays_within_rate_bounds(drawn in model_strategy()) {
        let model = &drawn.model;
        let x0 = model.state(&drawn.x0).unwrap();
        let space = StateSpace::enumerate(model, &x0, CAP).unwrap();
        let lower = model.n() as f64 * model.delta();
        for state in space.states() {
            let total = model.total_intensity(state);
            prop_assert!(total >= lower - 1e-12);
            prop_assert!(total <= model.rate_bound() + 1e-12);
        }
    }

    #[test]
    fn generator_rows_sum_to_zero(drawn in model_strategy()) {
        let model = &drawn.model;
        let x0 = model.state(&drawn.x0).unwrap();
        let space = StateSpace::enumerate(model, &x0, CAP).unwrap();
        let q = build_rate_matrix(model, &space);
        for u in 0..space.len() {
            let off: f64 = q.off_diagonal(u).iter().map(|&(_, r)| r).sum();
            prop_assert!((off + q.diagonal(u)).abs() <= 1e-13);
            for &(_, r) in q.off_diagonal(u) {
                prop_assert!(r >= 0.0);
            }
        }
        // The recurrent domain absorbs.
        for u in space.recurrent_indices() {
            for &v in &space.edges()[u] {
                prop_assert!(space.is_recurrent(v));
            }
        }
    }

    #[test]
    fn transition_rows_are_distributions(drawn in model_strategy(), t in 0.0..6.0f64) {
        let model = &drawn.model;
        let x0 = model.state(&drawn.x0).unwrap();
        let space = StateSpace::enumerate(model, &x0, CAP).unwrap();
        let q = build_rate_matrix(model, &space);
        let row = transition_row(&q, t, 0, 1e-12).unwrap();
        let sum: f64 = row.iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-10);
        for &p in &row {
            prop_assert!(p >= 0.0);
        }
    }

    #[test]
    fn one_jump_is_a_subevent_of_any_jump(drawn in model_strategy(), s in 0.0..4.0f64) {
        let model = &drawn.model;
        let x = model.state(&drawn.x0).unwrap();
        let none = no_jump_probability(model, s, &x).unwrap();
        for i in 0..model.n() {
            let one = one_jump_probability(model, s, &x, i).unwrap();
            prop_assert!(one >= 0.0);
            prop_assert!(one <= 1.0 - none + 1e-12);
        }
    }

    #[test]
    fn sampled_paths_follow_the_jump_graph(drawn in model_strategy(), seed in 0u64..1000) {
        let model = &drawn.model;
        let x0 = model.state(&drawn.x0).unwrap();
        let space = StateSpace::enumerate(model, &x0, CAP).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let path = sample_path(model, &x0, 2.0, &mut rng).unwrap();
        let mut current = x0.clone();
        let mut last = 0.0;
        for k in 0..path.n_jumps() {
            prop_assert!(path.jump_times[k] > last);
            last = path.jump_times[k];
            let expected = model.apply_jump(&current, path.spiking_neuron[k]).unwrap();
            prop_assert_eq!(&expected, &path.states[k]);
            prop_assert!(space.index_of(&path.states[k]).is_some());
            current = path.states[k].clone();
        }
    }

    #[test]
    fn reenumeration_stays_inside_the_space(drawn in model_strategy(), pick in 0usize..64) {
        let model = &drawn.model;
        let x0 = model.state(&drawn.x0).unwrap();
        let space = StateSpace::enumerate(model, &x0, CAP).unwrap();
        let u = pick % space.len();
        let sub = StateSpace::enumerate(model, space.state(u), CAP).unwrap();
        for state in sub.states() {
            prop_assert!(space.index_of(state).is_some());
        }
    }
}
