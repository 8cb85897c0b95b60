use fzm_core::approx::{approximate_function, quotient_by_signature, signatures, synth_witness};
use fzm_core::games::{bisim_wins, ef_wins, BisimConfig, EfLimits, Player, WinningSets};
use fzm_core::metrics::{
    behavioural_distance_with_depth, depth_tables, game_distance_oracle, kantorovich_lift,
    kantorovich_lift_exhaustive, LiftInput, ValueGrid,
};
use fzm_core::random::{atom_names, fol_pool, random_modal, random_model, ModelParams};
use fzm_core::semantics::{eval_fol, eval_modal_all, Assignment, StateFunction};
use fzm_core::transforms::{locality_check, neighbourhood_restrict, LocalFormula};
use fzm_core::{disjoint_union, Depth, Model, Truth};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn model(seed: u64) -> Model {
    random_model(&mut rng(seed), &ModelParams::default())
}

fn eps_strategy() -> impl Strategy<Value = Truth> {
    (0u64..=24).prop_map(|k| Truth::ratio(k, 24))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn duplicator_wins_are_monotone_in_epsilon(seed: u64, e1 in eps_strategy(), e2 in eps_strategy(), k in 0usize..4) {
        let m = model(seed);
        let (lo, hi) = (e1.min(e2), e1.max(e2));
        let (a, b) = (pick(&m, seed), pick(&m, seed >> 8));
        let w_lo = WinningSets::solve(&m, lo, Depth::Bounded(k));
        let w_hi = WinningSets::solve(&m, hi, Depth::Bounded(k));
        if w_lo.wins_at(k, BisimConfig::new(a, b)) {
            prop_assert!(w_hi.wins_at(k, BisimConfig::new(a, b)));
        }
    }

    #[test]
    fn winning_sets_shrink_with_depth_and_stabilise(seed: u64, e in eps_strategy()) {
        let m = model(seed);
        let n = m.num_states();
        let w = WinningSets::solve(&m, e, Depth::Unbounded);
        prop_assert!(w.is_stable());
        prop_assert!(w.stabilized_at().unwrap() <= n * n);
        for k in 0..w.max_depth() {
            for (x, y) in w.level(k).iter().zip(w.level(k + 1)) {
                prop_assert!(*x || !*y);
            }
        }
    }

    #[test]
    fn strategies_compose(seed: u64, e1 in eps_strategy(), e2 in eps_strategy(), k in 0usize..4) {
        let m = model(seed);
        let n = m.num_states();
        let w1 = WinningSets::solve(&m, e1, Depth::Bounded(k));
        let w2 = WinningSets::solve(&m, e2, Depth::Bounded(k));
        let w12 = WinningSets::solve(&m, e1.saturating_add(e2), Depth::Bounded(k));
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if w1.wins_at(k, BisimConfig::new(a, b)) && w2.wins_at(k, BisimConfig::new(b, c)) {
                        prop_assert!(w12.wins_at(k, BisimConfig::new(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn coproduct_injections_are_bisimilar(s1: u64, s2: u64, small in prop::bool::ANY) {
        let (m, other) = (model(s1), model(s2));
        let (u, inj) = disjoint_union(&m, &other).unwrap();
        let eps = if small { Truth::ratio(1, 1000) } else { Truth::ratio(1, 100) };
        for a in 0..m.num_states() {
            let g = bisim_wins(&m, &u, m.state_name(a), u.state_name(inj.left[a]), eps, Depth::Unbounded).unwrap();
            prop_assert_eq!(g.winner(), Player::Duplicator);
        }
        for b in 0..other.num_states() {
            let g = bisim_wins(&other, &u, other.state_name(b), u.state_name(inj.right[b]), eps, Depth::Unbounded).unwrap();
            prop_assert_eq!(g.winner(), Player::Duplicator);
        }
    }

    #[test]
    fn unbounded_distance_is_the_game_distance(seed: u64) {
        let m = model(seed);
        let (d, k) = behavioural_distance_with_depth(&m);
        let ds = depth_tables(&m, k);
        prop_assert!(ds[k].same_values(&d));
        for a in 0..m.num_states() {
            for b in 0..m.num_states() {
                prop_assert_eq!(game_distance_oracle(&m, a, b, Depth::Unbounded), d.get(a, b));
            }
        }
    }

    #[test]
    fn cone_family_matches_exhaustive_search(seed: u64, n in 0usize..3) {
        let m = model(seed);
        let d = depth_tables(&m, n).pop().unwrap();
        for a in 0..m.num_states() {
            for b in 0..a {
                let (x, y) = (LiftInput::of_state(&m, a), LiftInput::of_state(&m, b));
                prop_assert_eq!(kantorovich_lift(&d, &x, &y).unwrap(), kantorovich_lift_exhaustive(&d, &x, &y).unwrap());
            }
        }
    }

    #[test]
    fn modal_formulas_are_non_expansive(seed: u64, rank in 0usize..4, size in 1usize..16) {
        let m = model(seed);
        let d = depth_tables(&m, rank).pop().unwrap();
        let phi = random_modal(&mut rng(seed ^ 1), &atom_names(2), rank, size, 12);
        let v = eval_modal_all(&m, &phi).unwrap();
        for a in 0..m.num_states() {
            for b in 0..m.num_states() {
                prop_assert!(v.get(a).abs_diff(v.get(b)) <= d.get(a, b));
            }
        }
    }

    #[test]
    fn witnesses_realise_the_distance(seed: u64, n in 0usize..4) {
        let m = model(seed);
        let d = depth_tables(&m, n).pop().unwrap();
        for a in 0..m.num_states() {
            for b in 0..m.num_states() {
                let phi = synth_witness(&m, a, b, n, Truth::ratio(1, 100));
                prop_assert!(phi.rank() <= n);
                let v = eval_modal_all(&m, &phi).unwrap();
                prop_assert_eq!(v.get(a).abs_diff(v.get(b)), d.get(a, b));
                for x in 0..m.num_states() {
                    for y in 0..m.num_states() {
                        prop_assert!(v.get(x).abs_diff(v.get(y)) <= d.get(x, y));
                    }
                }
            }
        }
    }

    #[test]
    fn approximants_of_cones_are_close(seed: u64, n in 0usize..4, c in 0u64..=12) {
        let m = model(seed);
        let d = depth_tables(&m, n).pop().unwrap();
        let x0 = (seed as usize) % m.num_states();
        let f = StateFunction::new(
            (0..m.num_states()).map(|x| Truth::ratio(c, 12).truncated_sub(d.get(x0, x))).collect(),
        );
        let eps = Truth::ratio(1, 20);
        let phi = approximate_function(&m, &f, n, eps).unwrap();
        prop_assert!(phi.rank() <= n);
        prop_assert!(eval_modal_all(&m, &phi).unwrap().sup_distance(&f) <= eps);
    }

    #[test]
    fn equal_signatures_mean_zero_distance(seed: u64, n in 0usize..4) {
        let m = model(seed);
        let d = depth_tables(&m, n).pop().unwrap();
        let sigs = signatures(&m, n);
        for a in 0..m.num_states() {
            for b in 0..m.num_states() {
                prop_assert_eq!(sigs[a] == sigs[b], d.get(a, b).is_zero());
            }
        }
    }

    #[test]
    fn quotients_preserve_formula_values(seed: u64, n in 0usize..4) {
        let m = model(seed);
        let q = quotient_by_signature(&m, n);
        let phi = random_modal(&mut rng(seed ^ 2), m.atoms(), n, 12, 12);
        let (vm, vq) = (eval_modal_all(&m, &phi).unwrap(), eval_modal_all(&q.model, &phi).unwrap());
        for a in 0..m.num_states() {
            prop_assert_eq!(vm.get(a), vq.get(q.projection[a]));
        }
    }

    #[test]
    fn rank_k_formulas_are_local(seed: u64, k in 0usize..4) {
        let m = model(seed);
        let phi = random_modal(&mut rng(seed ^ 3), &atom_names(2), k, 12, 12);
        for a in 0..m.num_states() {
            prop_assert!(locality_check(&m, LocalFormula::Modal(&phi), a, k).unwrap().equal());
        }
    }

    #[test]
    fn restriction_keeps_the_depth_k_game(seed: u64, k in 0usize..4) {
        let m = model(seed);
        for a in 0..m.num_states() {
            let local = neighbourhood_restrict(&m, &[a], k);
            let (u, inj) = disjoint_union(&m, &local).unwrap();
            let centre = local.state_id(m.state_name(a)).unwrap();
            let du = depth_tables(&u, k).pop().unwrap();
            prop_assert!(du.get(inj.left[a], inj.right[centre]).is_zero());
        }
    }

    #[test]
    fn ef_duplicator_wins_bound_pool_formulas(s1: u64, s2: u64, rounds in 0usize..3) {
        let params = ModelParams { max_states: 3, ..ModelParams::default() };
        let mut r = rng(s1);
        let m = random_model(&mut r, &params);
        let n = random_model(&mut rng(s2), &params);
        let (a, b) = (r.gen_range(0..m.num_states()), r.gen_range(0..n.num_states()));
        let grid = ValueGrid::of_values(m.constants().chain(n.constants()));
        let pool = fol_pool(&atom_names(2), &["x".to_string()], rounds);
        for eps in grid.points() {
            let out = ef_wins(&m, &n, &[a], &[b], eps, rounds, EfLimits::default()).unwrap();
            if out.winner == Player::Duplicator {
                for phi in &pool {
                    let va = eval_fol(&m, phi, &Assignment::single("x", a)).unwrap();
                    let vb = eval_fol(&n, phi, &Assignment::single("x", b)).unwrap();
                    prop_assert!(va.abs_diff(vb) <= eps);
                }
                break;
            }
        }
    }
}

fn pick(m: &Model, seed: u64) -> usize {
    (seed as usize) % m.num_states()
}
